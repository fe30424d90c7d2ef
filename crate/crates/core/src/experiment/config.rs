use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Raw contents of an experiment config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Output directory; overridden by `--out` and the environment.
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub problem: ProblemSection,
    pub plan: PlanSection,
    #[serde(rename = "scheme", default)]
    pub schemes: Vec<SchemeSection>,
    /// Replaces the problem's own jump channels.
    #[serde(default)]
    pub jumps: Vec<JumpSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub step_sizes: Vec<f64>,
    pub samples: usize,
    #[serde(default = "default_functionals")]
    pub functionals: Vec<String>,
    /// `analytic`, `fine-grid` or `auto`.
    #[serde(default = "default_reference")]
    pub reference: String,
    #[serde(default)]
    pub h_ref: Option<f64>,
    #[serde(default)]
    pub samples_ref: Option<usize>,
}

/// One scheme: an LL variant name or `euler`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub variant: String,
    #[serde(default)]
    pub beta: Option<u8>,
    #[serde(default)]
    pub pade: Option<[usize; 2]>,
    #[serde(default)]
    pub krylov_m: Option<usize>,
    /// `gaussian` or `two-point`.
    #[serde(default)]
    pub noise: Option<String>,
    #[serde(default)]
    pub phi_defect: Option<f64>,
}

/// A jump channel with a catalog coefficient: `constant` (jump `c`) or
/// `proportional` (jump `c[0] * z`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSection {
    pub intensity: f64,
    pub coefficient: String,
    pub c: Vec<f64>,
}

fn default_functionals() -> Vec<String> {
    vec!["x1".into()]
}

fn default_reference() -> String {
    "auto".into()
}
