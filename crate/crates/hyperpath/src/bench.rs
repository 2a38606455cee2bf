//! Scaling measurements for the randomized solver.
//!
//! One planted instance is solved for each k in the range with a fixed trial
//! count and no early exit, so the work per k is deterministic and the
//! wall-time ratio between consecutive k isolates the 2^k factor.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{detection_stats, DetectionParams};
use crate::circuit::build_path_circuit;
use crate::gen::planted_path;
use crate::solver::SolveError;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub r: usize,
    pub k_min: usize,
    pub k_max: usize,
    /// Detection trials per solve; every trial runs (no early exit).
    pub repetitions: u32,
    /// Timing samples per k; the median is reported.
    pub samples: usize,
    pub field_degree: u32,
    pub seed: u64,
    /// Memory guard forwarded to the detector.
    pub max_dimension: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            r: 3,
            k_min: 14,
            k_max: 18,
            repetitions: 2,
            samples: 3,
            field_degree: 16,
            seed: 1,
            max_dimension: 24,
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("empty k range {k_min}..={k_max}")]
    EmptyRange { k_min: usize, k_max: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub k: usize,
    pub median_ms: f64,
    /// Wall-time ratio to the previous k's row.
    pub ratio: Option<f64>,
    /// 2^k · l · m · 2 bits, reported in bytes: the two live recurrence
    /// layers of m algebra elements each.
    pub memory_estimate_bytes: u64,
    pub yes_trials: u32,
    pub trials: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub repetitions: u32,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "planted family: r = {}, n = {}, m = {}, repetitions = {}, samples = {}, seed = {}\n",
            self.r, self.n, self.m, self.repetitions, self.samples, self.seed,
        );
        out.push_str("     k   median-ms      ratio     mem-estimate   yes/trials\n");
        for row in &self.rows {
            let ratio = row.ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
            out.push_str(&format!(
                "{:>6}  {:>10.2}  {:>9}  {:>13}  {:>8}\n",
                row.k,
                row.median_ms,
                ratio,
                human_bytes(row.memory_estimate_bytes),
                format!("{}/{}", row.yes_trials, row.trials),
            ));
        }
        out
    }
}

fn human_bytes(bytes: u64) -> String {
    if bytes >= 1 << 30 {
        format!("{:.1} GiB", bytes as f64 / (1u64 << 30) as f64)
    } else if bytes >= 1 << 20 {
        format!("{:.1} MiB", bytes as f64 / (1u64 << 20) as f64)
    } else if bytes >= 1 << 10 {
        format!("{:.1} KiB", bytes as f64 / (1u64 << 10) as f64)
    } else {
        format!("{bytes} B")
    }
}

/// Estimated peak detector memory: two recurrence layers of m elements, each
/// 2^k coefficients of l bits.
pub fn memory_estimate_bytes(k: usize, field_degree: u32, m: usize) -> u64 {
    (1u64 << k) * field_degree as u64 * m as u64 * 2 / 8
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.k_min > cfg.k_max || cfg.k_min < cfg.r {
        return Err(BenchError::EmptyRange { k_min: cfg.k_min, k_max: cfg.k_max });
    }
    // One fixed instance: a planted path of length k_max, so every smaller k
    // is a yes as well. No noise edges: the live-label count then shrinks by
    // exactly one per level, so per-k work scales smoothly and the timing
    // ratio isolates the 2^k factor.
    let n = cfg.k_max + 4;
    let (h, _plant) = planted_path(cfg.r, n, cfg.k_max, 0, cfg.seed)
        .map_err(|e| BenchError::Solve(SolveError::Reduction(
            crate::reductions::ReductionError::Internal(e.to_string()),
        )))?;

    // untimed warmup: builds the field tables and touches the allocator so
    // the first timed row is not polluted by one-time costs
    {
        let params = DetectionParams {
            field_degree: cfg.field_degree,
            repetitions: 1,
            seed: cfg.seed,
            max_dimension: cfg.max_dimension,
        };
        let circuit = build_path_circuit(&h, cfg.k_min).map_err(SolveError::Circuit)?;
        detection_stats(&circuit, &params).map_err(SolveError::Detection)?;
    }

    let params = DetectionParams {
        field_degree: cfg.field_degree,
        repetitions: cfg.repetitions,
        seed: cfg.seed,
        max_dimension: cfg.max_dimension,
    };
    let ks: Vec<usize> = (cfg.k_min..=cfg.k_max).collect();
    let mut circuits = Vec::with_capacity(ks.len());
    for &k in &ks {
        circuits.push(build_path_circuit(&h, k).map_err(SolveError::Circuit)?);
    }
    // Samples are interleaved round-robin over k, so a slow phase of the
    // machine lands on every row instead of skewing a single one; and each
    // sample times 2^(k_max - k) back-to-back solves (normalized), so every
    // sample is of comparable duration and jitter shrinks proportionally.
    let mut times: Vec<Vec<Duration>> = vec![Vec::with_capacity(cfg.samples); ks.len()];
    let mut stats = vec![None; ks.len()];
    for _ in 0..cfg.samples.max(1) {
        for (i, circuit) in circuits.iter().enumerate() {
            let inner = 1u32 << (cfg.k_max - ks[i]).min(5);
            let start = Instant::now();
            for _ in 0..inner {
                stats[i] =
                    Some(detection_stats(circuit, &params).map_err(SolveError::Detection)?);
            }
            times[i].push(start.elapsed() / inner);
        }
    }

    let mut rows: Vec<BenchRow> = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        times[i].sort_unstable();
        let median = times[i][times[i].len() / 2];
        let stats = stats[i].expect("at least one sample ran");
        let median_ms = median.as_secs_f64() * 1e3;
        let ratio = rows.last().map(|prev: &BenchRow| median_ms / prev.median_ms);
        rows.push(BenchRow {
            k,
            median_ms,
            ratio,
            memory_estimate_bytes: memory_estimate_bytes(k, cfg.field_degree, h.num_edges()),
            yes_trials: stats.yes_trials,
            trials: stats.trials,
        });
    }
    Ok(BenchReport {
        schema: 1,
        r: cfg.r,
        n,
        m: h.num_edges(),
        repetitions: cfg.repetitions,
        samples: cfg.samples,
        seed: cfg.seed,
        rows,
    })
}
