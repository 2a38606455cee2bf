//! Machine- and human-readable run reports. Both carry the same fields;
//! reruns with identical arguments reproduce them byte-for-byte except for
//! the wall-time field.

use serde::Serialize;

use hyperpath::DetectionParams;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecisionSummary {
    pub answer: &'static str,
    pub exact: bool,
    pub trials_used: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub false_negative_bound: Option<f64>,
    pub expanded_orientations: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub instance: InstanceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub params: DetectionParams,
}

impl RunReport {
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command:  {}\n", self.command));
        out.push_str(&format!(
            "instance: r = {}, n = {}, m = {}",
            self.instance.r, self.instance.n, self.instance.m
        ));
        if let Some(k) = self.instance.k {
            out.push_str(&format!(", k = {k}"));
        }
        out.push('\n');
        if let Some(d) = &self.decision {
            out.push_str(&format!("answer:   {}{}\n", d.answer, if d.exact { " (exact)" } else { "" }));
            out.push_str(&format!("trials:   {}\n", d.trials_used));
            if let Some(b) = d.false_negative_bound {
                out.push_str(&format!("no-answer false-negative bound: {b:.3e}\n"));
            }
            if d.expanded_orientations {
                out.push_str("note:     undirected input expanded to all edge orientations\n");
            }
        }
        if let Some(w) = &self.witness {
            let ids: Vec<String> = w.iter().map(usize::to_string).collect();
            out.push_str(&format!("witness:  {}\n", ids.join(" ")));
        }
        out.push_str(&format!(
            "seed:     {}  (repetitions = {}, field degree = {})\n",
            self.seed, self.params.repetitions, self.params.field_degree
        ));
        out.push_str(&format!("wall:     {:.2} ms\n", self.wall_time_ms));
        out
    }
}
