//! Command-line front end: solve, reduce, verify, gen, bench.
//!
//! Exit codes: 0 = yes/valid, 1 = no/invalid, 2 = error. Reports are
//! reproducible byte-for-byte for identical arguments, wall-time aside.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperpath::bench::{run_bench, BenchConfig};
use hyperpath::gen;
use hyperpath::hypergraph::{Hypergraph, VertexId};
use hyperpath::oracle::{self, ExactCoverInstance, SetPartitioningInstance};
use hyperpath::reductions::{
    exc_to_khp, expand_orientations, pad_exc_instance, sc_to_sp_subset_closure,
    sp_to_exc_color_coding, DEFAULT_REDUCTION_BUDGET,
};
use hyperpath::solver::{extract_witness, solve_k_hypercycle, solve_k_hyperpath};
use hyperpath::DetectionParams;

use report::{DecisionSummary, InstanceSummary, RunReport, REPORT_SCHEMA};

#[derive(Parser)]
#[command(name = "hyperpath", version, about = "Tight k-path and k-cycle solver suite for r-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// RNG seed; identical seeds reproduce identical runs.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Detection trials per decision.
    #[arg(long, global = true, default_value_t = 20)]
    repetitions: u32,
    /// Fingerprint field degree l of GF(2^l): 8, 16 or 32.
    #[arg(long, global = true, default_value_t = 16)]
    field_degree: u32,
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Raise the built-in size guards (brute-force limits, r! expansion,
    /// 2^k memory, reduction budgets).
    #[arg(long, global = true)]
    force: bool,
}

impl GlobalArgs {
    fn params(&self) -> DetectionParams {
        DetectionParams {
            field_degree: self.field_degree,
            repetitions: self.repetitions,
            seed: self.seed,
            max_dimension: if self.force { 30 } else { 24 },
        }
    }

    fn search_limit(&self) -> Option<usize> {
        if self.force {
            Some(usize::MAX)
        } else {
            None
        }
    }

    fn budget(&self) -> usize {
        if self.force {
            usize::MAX / 2
        } else {
            DEFAULT_REDUCTION_BUDGET
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide tight k-path / k-cycle existence.
    Solve {
        kind: SolveKind,
        /// Hypergraph file (header `r n m directed|undirected`).
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Use the exact brute-force oracle instead of the randomized solver.
        #[arg(long)]
        oracle: bool,
        /// Extract a witness sequence as well (paths only).
        #[arg(long)]
        witness: bool,
    },
    /// Run one of the constructive reductions, writing instance files.
    Reduce {
        #[command(subcommand)]
        which: ReduceCommand,
    },
    /// Check a certificate deterministically.
    Verify {
        kind: VerifyKind,
        /// Instance file: hypergraph for path/cycle, exact-cover for cover.
        instance: PathBuf,
        /// Certificate file: whitespace-separated vertex ids or set indices.
        certificate: PathBuf,
        /// Also require the certificate to have exactly this length.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Generate instances deterministically from the seed.
    Gen {
        #[command(subcommand)]
        which: GenCommand,
    },
    /// Measure solver scaling over a k range on one planted family.
    Bench {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 14)]
        k_min: usize,
        #[arg(long, default_value_t = 18)]
        k_max: usize,
        /// Timing samples per k (median reported).
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Detection trials per timed solve (all run; no early exit).
        #[arg(long, default_value_t = 4)]
        trials: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Path,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Path,
    Cycle,
    Cover,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Exact Cover -> k-HyperPath gadget (requires Assumption 1; see pad-exc).
    ExcToKhp {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Pad an arbitrary Exact Cover instance into 2r Assumption-1 instances.
    PadExc {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Color-coding: Set Partitioning -> n·2^(2t) Exact Cover instances.
    SpToExc {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Subset closure: a set family whose covers induce equal-size partitions.
    ScToSp {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Maximum set size admitted (closure generates 2^size subsets).
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    RandomHypergraph {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        undirected: bool,
        #[arg(long)]
        out: PathBuf,
    },
    RandomExc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hypergraph with a known planted tight k-path plus noise edges; the
    /// plant is recorded in a `.plant` sidecar.
    PlantedPath {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        extra_edges: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::Solve { kind, file, k, oracle, witness } => cmd_solve(g, kind, &file, k, oracle, witness),
        Command::Verify { kind, instance, certificate, k } => {
            cmd_verify(g, kind, &instance, &certificate, k)
        }
        Command::Reduce { which } => cmd_reduce(g, which),
        Command::Gen { which } => cmd_gen(g, which),
        Command::Bench { r, k_min, k_max, samples, trials } => {
            cmd_bench(g, r, k_min, k_max, samples, trials)
        }
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_hypergraph(path: &Path) -> Result<Hypergraph> {
    Hypergraph::parse(&read_to_string(path)?)
        .with_context(|| format!("parsing {}", path.display()))
}

fn parse_id_list(path: &Path) -> Result<Vec<usize>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let id: usize = tok
                .parse()
                .with_context(|| format!("{}:{}: bad id {tok:?}", path.display(), lineno + 1))?;
            out.push(id);
        }
    }
    Ok(out)
}

fn cmd_solve(
    g: &GlobalArgs,
    kind: SolveKind,
    file: &Path,
    k: usize,
    use_oracle: bool,
    want_witness: bool,
) -> Result<ExitCode> {
    let mut h = parse_hypergraph(file)?;
    let params = g.params();
    let start = Instant::now();

    // the solver expands undirected inputs itself but refuses r > 7;
    // --force raises that guard by expanding up front
    let mut force_expanded = false;
    if g.force && !h.is_directed() && !use_oracle {
        h = expand_orientations(&h, 20)?;
        force_expanded = true;
    }
    let (answer, exact, trials, bound, expanded, witness) = if use_oracle {
        let limit = g.search_limit();
        let found = match kind {
            SolveKind::Path => oracle::exists_tight_path_bruteforce(&h, k, limit)?,
            SolveKind::Cycle => oracle::exists_tight_cycle_bruteforce(&h, k, limit)?,
        };
        let w = found.clone().map(|w| w.iter().map(|v| v.index()).collect());
        (found.is_some(), true, 0u32, Some(0.0), false, if want_witness { w } else { None })
    } else {
        let decision = match kind {
            SolveKind::Path => solve_k_hyperpath(&h, k, &params)?,
            SolveKind::Cycle => solve_k_hypercycle(&h, k, &params)?,
        };
        let witness = if want_witness && decision.answer {
            match kind {
                SolveKind::Path => extract_witness(&h, k, &params)?
                    .map(|w| w.iter().map(|v| v.index()).collect()),
                SolveKind::Cycle => bail!("witness extraction is implemented for paths only"),
            }
        } else {
            None
        };
        (
            decision.answer,
            decision.false_negative_bound == Some(0.0),
            decision.trials_used,
            decision.false_negative_bound,
            decision.expanded_orientations || force_expanded,
            witness,
        )
    };

    let report = RunReport {
        schema: REPORT_SCHEMA,
        command: format!(
            "solve {} {} --k {k}{}{}",
            match kind {
                SolveKind::Path => "path",
                SolveKind::Cycle => "cycle",
            },
            file.display(),
            if use_oracle { " --oracle" } else { "" },
            if want_witness { " --witness" } else { "" },
        ),
        instance: InstanceSummary {
            r: h.uniformity(),
            n: h.num_vertices(),
            m: h.num_edges(),
            k: Some(k),
        },
        decision: Some(DecisionSummary {
            answer: if answer { "yes" } else { "no" },
            exact: answer || exact,
            trials_used: trials,
            false_negative_bound: if answer { None } else { bound },
            expanded_orientations: expanded,
        }),
        witness,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: g.seed,
        params,
    };
    emit(g, &report);
    Ok(ExitCode::from(if answer { 0 } else { 1 }))
}

fn cmd_verify(
    g: &GlobalArgs,
    kind: VerifyKind,
    instance: &Path,
    certificate: &Path,
    k: Option<usize>,
) -> Result<ExitCode> {
    let cert = parse_id_list(certificate)?;
    let valid = match kind {
        VerifyKind::Path | VerifyKind::Cycle => {
            let h = parse_hypergraph(instance)?;
            let seq: Vec<VertexId> = cert.iter().map(|&v| VertexId(v)).collect();
            let length_ok = k.is_none_or(|k| seq.len() == k);
            length_ok
                && match kind {
                    VerifyKind::Path => h.is_tight_path(&seq),
                    _ => h.is_tight_cycle(&seq),
                }
        }
        VerifyKind::Cover => {
            let inst = ExactCoverInstance::parse(&read_to_string(instance)?)
                .with_context(|| format!("parsing {}", instance.display()))?;
            inst.is_exact_cover(&cert)
        }
    };
    if g.json {
        println!(
            "{}",
            serde_json::json!({
                "schema": REPORT_SCHEMA,
                "command": "verify",
                "valid": valid,
                "certificate_length": cert.len(),
            })
        );
    } else {
        println!("certificate: {}", if valid { "valid" } else { "invalid" });
    }
    Ok(ExitCode::from(if valid { 0 } else { 1 }))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn stem_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_reduce(g: &GlobalArgs, which: ReduceCommand) -> Result<ExitCode> {
    match which {
        ReduceCommand::ExcToKhp { input, out_dir, r } => {
            let inst = ExactCoverInstance::parse(&read_to_string(&input)?)?;
            let (h, k, map) = exc_to_khp(&inst, r)?;
            let stem = stem_of(&input);
            let graph_path = out_dir.join(format!("{stem}.khp"));
            let map_path = out_dir.join(format!("{stem}.gadget.json"));
            write_file(&graph_path, &h.to_text())?;
            write_file(&map_path, &map.to_json())?;
            println!(
                "exc-to-khp: {} vertices, {} edges, k = {k} -> {} + {}",
                h.num_vertices(),
                h.num_edges(),
                graph_path.display(),
                map_path.display()
            );
        }
        ReduceCommand::PadExc { input, out_dir, r } => {
            let inst = ExactCoverInstance::parse(&read_to_string(&input)?)?;
            let family = pad_exc_instance(&inst, r, g.budget())?;
            let stem = stem_of(&input);
            for padded in &family.instances {
                let path = out_dir.join(format!("{stem}.pad{}.exc", padded.ell));
                write_file(&path, &padded.instance.to_text())?;
            }
            println!(
                "pad-exc: kappa = {}, {} instances with {} elements each -> {}",
                family.kappa,
                family.instances.len(),
                inst.num_elements() + family.kappa,
                out_dir.display()
            );
        }
        ReduceCommand::SpToExc { input, out_dir } => {
            let inst = SetPartitioningInstance::parse(&read_to_string(&input)?)?;
            let outputs = sp_to_exc_color_coding(&inst, g.seed, g.budget())?;
            let stem = stem_of(&input);
            for (idx, out) in outputs.iter().enumerate() {
                let path = out_dir.join(format!("{stem}.cc{idx}.exc"));
                write_file(&path, &out.to_text())?;
            }
            println!(
                "sp-to-exc: {} instances with {} elements each -> {}",
                outputs.len(),
                inst.base().num_elements() + inst.threshold(),
                out_dir.display()
            );
        }
        ReduceCommand::ScToSp { input, out_dir, bound } => {
            let inst = ExactCoverInstance::parse(&read_to_string(&input)?)?;
            let closure = sc_to_sp_subset_closure(inst.sets(), bound, g.budget())?;
            let closed = ExactCoverInstance::new(inst.num_elements(), closure.sets.clone())
                .context("closure produced an invalid family")?;
            let stem = stem_of(&input);
            let path = out_dir.join(format!("{stem}.closure.exc"));
            write_file(&path, &closed.to_text())?;
            println!(
                "sc-to-sp: {} subsets generated, {} kept after dedup -> {}",
                closure.generated,
                closed.num_sets(),
                path.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(g: &GlobalArgs, which: GenCommand) -> Result<ExitCode> {
    match which {
        GenCommand::RandomHypergraph { r, n, m, undirected, out } => {
            let h = gen::random_hypergraph(r, n, m, !undirected, g.seed)?;
            write_file(&out, &h.to_text())?;
            println!("random-hypergraph: r = {r}, n = {n}, m = {m} -> {}", out.display());
        }
        GenCommand::RandomExc { n, m, min_size, max_size, out } => {
            let hi = max_size.unwrap_or_else(|| (n / 2).max(min_size));
            let inst = gen::random_exc(n, m, min_size, hi, g.seed)?;
            write_file(&out, &inst.to_text())?;
            println!("random-exc: n = {n}, m = {m}, sizes {min_size}..={hi} -> {}", out.display());
        }
        GenCommand::PlantedPath { r, n, k, extra_edges, out } => {
            let (h, plant) = gen::planted_path(r, n, k, extra_edges, g.seed)?;
            write_file(&out, &h.to_text())?;
            let plant_ids: Vec<String> = plant.iter().map(|v| v.index().to_string()).collect();
            let sidecar = out.with_extension("plant");
            write_file(&sidecar, &format!("{}\n", plant_ids.join(" ")))?;
            println!(
                "planted-path: r = {r}, n = {n}, k = {k}, m = {} -> {} (plant in {})",
                h.num_edges(),
                out.display(),
                sidecar.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    g: &GlobalArgs,
    r: usize,
    k_min: usize,
    k_max: usize,
    samples: usize,
    trials: u32,
) -> Result<ExitCode> {
    let max_dimension = if g.force { 30 } else { 24 };
    if k_max > max_dimension as usize {
        bail!(
            "k = {k_max} refused: one algebra element is 2^k·l bits = {} per edge label; \
             rerun with --force to override",
            human_bits(k_max, g.field_degree)
        );
    }
    let cfg = BenchConfig {
        r,
        k_min,
        k_max,
        repetitions: trials,
        samples,
        field_degree: g.field_degree,
        seed: g.seed,
        max_dimension,
    };
    let report = run_bench(&cfg)?;
    if g.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render_text());
    }
    Ok(ExitCode::SUCCESS)
}

fn human_bits(k: usize, degree: u32) -> String {
    let bits = (1u128 << k) * degree as u128;
    format!("{:.1} MiB", bits as f64 / 8.0 / (1 << 20) as f64)
}

fn emit(g: &GlobalArgs, report: &RunReport) {
    if g.json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
}
