//! Config-driven experiment runner behind the `weak-ll` binary.
//!
//! A config is a TOML file:
//!
//! ```toml
//! seed = 7
//!
//! [problem]
//! name = "ou-1d"
//!
//! [plan]
//! step_sizes = [1.0, 0.5, 0.1]
//! samples = 10000
//! functionals = ["x1", "x1^2"]
//! reference = "analytic"
//!
//! [[scheme]]
//! variant = "pade-general"
//! beta = 2
//!
//! [[scheme]]
//! variant = "euler"
//! ```

mod config;
mod run;

pub use config::{ExperimentConfig, JumpSection, PlanSection, ProblemSection, SchemeSection};
pub use run::{
    convergence, list_schemes, resolve_output_dir, run_convergence, run_trajectory, trajectory, OutputFile,
    OUT_DIR_ENV,
};

use crate::jumps::JumpSpec;
use crate::linalg::Vector;
use crate::llcore::{SchemeConfig, Variant};
use crate::model::{builtin_problem_with, Problem, ProblemParams, Reference, TestFunctional};
use crate::weakmc::{McPlan, Method, NoiseKind, ReferenceMode};
use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

/// A parsed and fully validated experiment.
#[derive(Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub problem: Problem,
    pub plan: McPlan,
    pub methods: Vec<Method>,
    source: String,
}

impl Experiment {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(config, text.to_string())
    }

    fn from_config(config: ExperimentConfig, source: String) -> Result<Self> {
        let mut params = ProblemParams::default();
        for (k, v) in &config.problem.params {
            params = params.set(k, *v);
        }
        let mut problem = builtin_problem_with(&config.problem.name, &params)?;
        if !config.jumps.is_empty() {
            problem.jumps = Some(jump_spec(&config.jumps, problem.model.dim())?);
            problem.reference = Reference::None;
        }

        let functionals = config
            .plan
            .functionals
            .iter()
            .map(|s| TestFunctional::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let d = problem.model.dim();
        if let Some(g) = functionals.iter().find(|g| g.max_index().is_some_and(|i| i >= d)) {
            return Err(Error::InvalidConfig(format!(
                "functional `{}` reads past the state dimension {d}",
                g.label
            )));
        }
        let reference = match config.plan.reference.as_str() {
            "analytic" => ReferenceMode::Analytic,
            "fine-grid" => ReferenceMode::FineGrid {
                h_ref: config.plan.h_ref,
                samples: config.plan.samples_ref,
            },
            "auto" => ReferenceMode::Auto,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "reference must be analytic, fine-grid or auto, got `{other}`"
                )))
            }
        };
        if !matches!(reference, ReferenceMode::FineGrid { .. })
            && (config.plan.h_ref.is_some() || config.plan.samples_ref.is_some())
        {
            return Err(Error::InvalidConfig("h_ref and samples_ref need reference = \"fine-grid\"".into()));
        }
        let plan = McPlan {
            step_sizes: config.plan.step_sizes.clone(),
            samples: config.plan.samples,
            seed: config.seed,
            functionals,
            reference,
        };
        plan.validate(problem.t0, problem.t_end)?;
        plan.check_reference(&problem)?;

        if config.schemes.is_empty() {
            return Err(Error::InvalidConfig("no [[scheme]] entries".into()));
        }
        let methods = config.schemes.iter().map(method_from).collect::<Result<Vec<_>>>()?;
        let mut labels = BTreeSet::new();
        for m in &methods {
            m.check_model(problem.model.as_ref())?;
            if !labels.insert(m.label()) {
                return Err(Error::InvalidConfig(format!("scheme `{}` listed twice", m.label())));
            }
        }
        Ok(Self {
            config,
            problem,
            plan,
            methods,
            source,
        })
    }

    /// The config text exactly as read.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Hex SHA-256 of the config text.
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.source.as_bytes()))
    }

    pub fn output(&self) -> Option<&PathBuf> {
        self.config.output.as_ref()
    }
}

fn method_from(s: &SchemeSection) -> Result<Method> {
    let noise: NoiseKind = match &s.noise {
        Some(n) => n.parse()?,
        None => NoiseKind::Gaussian,
    };
    if s.variant == "euler" {
        if s.beta.is_some() || s.pade.is_some() || s.krylov_m.is_some() || s.phi_defect.is_some() {
            return Err(Error::InvalidConfig(
                "euler takes only the `noise` option".into(),
            ));
        }
        return Ok(Method::Euler { noise });
    }
    let variant: Variant = s.variant.parse()?;
    let mut cfg = SchemeConfig::new(variant, s.beta.unwrap_or(2)).with_noise(noise);
    if let Some([p, q]) = s.pade {
        cfg = cfg.with_pade(p, q);
    }
    if let Some(m) = s.krylov_m {
        if variant != Variant::Krylov {
            return Err(Error::InvalidConfig("krylov_m applies to the krylov variant only".into()));
        }
        cfg = cfg.with_krylov_dim(m);
    }
    if let Some(c) = s.phi_defect {
        cfg = cfg.with_phi_defect(c);
    }
    cfg.validate()?;
    Ok(Method::Ll(cfg))
}

fn jump_spec(sections: &[JumpSection], d: usize) -> Result<JumpSpec> {
    let mut spec = JumpSpec::new();
    for j in sections {
        spec = match j.coefficient.as_str() {
            "constant" => {
                if j.c.len() != d {
                    return Err(Error::InvalidConfig(format!(
                        "constant jump needs {d} entries in `c`, got {}",
                        j.c.len()
                    )));
                }
                spec.constant(j.intensity, Vector::from_vec(j.c.clone()))?
            }
            "proportional" => {
                if j.c.len() != 1 {
                    return Err(Error::InvalidConfig("proportional jump needs a single `c`".into()));
                }
                spec.proportional(j.intensity, j.c[0])?
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown jump coefficient `{other}` (constant, proportional)"
                )))
            }
        };
    }
    Ok(spec)
}
