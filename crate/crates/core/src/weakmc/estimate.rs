use super::fit::{fit_above_noise_floor, FitOutcome};
use super::rng::REFERENCE_LEVEL;
use super::sim::{terminal_moments, Method};
use crate::llcore::{SchemeConfig, Variant};
use crate::model::{Problem, TestFunctional};
use crate::{Error, Result};
use std::fmt::Write as _;

/// Fine-grid references use `h_ref = min(h) / FINE_GRID_DIVISOR`.
pub const FINE_GRID_DIVISOR: f64 = 16.0;
/// Fine-grid references use `FINE_GRID_SAMPLE_FACTOR * N` samples.
pub const FINE_GRID_SAMPLE_FACTOR: usize = 4;

/// Where the exact `E g(x(T))` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceMode {
    /// Closed-form or stored statistics carried by the problem.
    Analytic,
    /// A `beta = 2` pade-general run on a finer grid.
    FineGrid {
        h_ref: Option<f64>,
        samples: Option<usize>,
    },
    /// `Analytic` when the problem has statistics for every functional,
    /// otherwise `FineGrid` with default settings.
    Auto,
}

/// Step sizes, sample count and functionals of a convergence study.
#[derive(Debug, Clone)]
pub struct McPlan {
    pub step_sizes: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub functionals: Vec<TestFunctional>,
    pub reference: ReferenceMode,
}

impl McPlan {
    pub fn validate(&self, t0: f64, t_end: f64) -> Result<()> {
        if self.samples < 100 {
            return Err(Error::InvalidConfig(format!(
                "at least 100 samples are required, got {}",
                self.samples
            )));
        }
        if self.samples as u64 >= 1 << 40 {
            return Err(Error::InvalidConfig("sample count exceeds 2^40".into()));
        }
        if self.step_sizes.is_empty() {
            return Err(Error::InvalidConfig("no step sizes given".into()));
        }
        if self.step_sizes.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidConfig("step sizes must be positive".into()));
        }
        if self.step_sizes.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidConfig("step sizes must be strictly decreasing".into()));
        }
        let span = t_end - t0;
        if self.step_sizes[0] > span * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "step size {} exceeds the time span {span}",
                self.step_sizes[0]
            )));
        }
        if self.functionals.is_empty() {
            return Err(Error::InvalidConfig("no functionals given".into()));
        }
        if self.step_sizes.len() >= REFERENCE_LEVEL as usize {
            return Err(Error::InvalidConfig("too many step sizes".into()));
        }
        Ok(())
    }

    /// Checks that the reference can be formed for every functional without
    /// computing it.
    pub fn check_reference(&self, problem: &Problem) -> Result<()> {
        match resolve_mode(self, problem) {
            ReferenceMode::Analytic => {
                let missing: Vec<&str> = self
                    .functionals
                    .iter()
                    .filter(|g| problem.reference.value_for(g).is_none())
                    .map(|g| g.label.as_str())
                    .collect();
                if missing.is_empty() {
                    Ok(())
                } else {
                    Err(Error::ReferenceUnavailable(format!(
                        "{} on `{}`",
                        missing.join(", "),
                        problem.name
                    )))
                }
            }
            ReferenceMode::FineGrid { h_ref, samples } => {
                if let Some(h) = h_ref {
                    if !(h > 0.0) || h > self.min_h() / FINE_GRID_DIVISOR * (1.0 + 1e-12) {
                        return Err(Error::InvalidConfig(format!(
                            "fine-grid step {h} must be positive and at most min(h)/{FINE_GRID_DIVISOR}"
                        )));
                    }
                }
                if let Some(n) = samples {
                    if n < self.samples * FINE_GRID_SAMPLE_FACTOR || n as u64 >= 1 << 40 {
                        return Err(Error::InvalidConfig(format!(
                            "fine-grid sample count {n} must be at least {FINE_GRID_SAMPLE_FACTOR}N and below 2^40"
                        )));
                    }
                }
                Ok(())
            }
            ReferenceMode::Auto => unreachable!(),
        }
    }

    fn min_h(&self) -> f64 {
        self.step_sizes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub functional: String,
    pub value: f64,
    pub stderr: f64,
    pub source: String,
}

/// Weak error of one functional at one step size.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub functional: String,
    pub h: f64,
    pub mean: f64,
    /// `mean - reference`.
    pub bias: f64,
    /// `|bias|`.
    pub error: f64,
    /// Combined standard error of the sample mean and the reference.
    pub stderr: f64,
    pub n: usize,
}

impl ErrorRow {
    pub fn above_noise_floor(&self) -> bool {
        self.error > super::fit::NOISE_FLOOR_FACTOR * self.stderr
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRecord {
    pub functional: String,
    pub outcome: FitOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakErrorReport {
    pub scheme: String,
    pub problem: String,
    pub references: Vec<ReferenceValue>,
    pub rows: Vec<ErrorRow>,
    pub fits: Vec<FitRecord>,
}

impl WeakErrorReport {
    pub fn rows_for<'a>(&'a self, functional: &'a str) -> impl Iterator<Item = &'a ErrorRow> + 'a {
        self.rows.iter().filter(move |r| r.functional == functional)
    }

    pub fn fit_for(&self, functional: &str) -> Option<&FitOutcome> {
        self.fits
            .iter()
            .find(|f| f.functional == functional)
            .map(|f| &f.outcome)
    }

    /// Columns `scheme,functional,h,error,stderr,n`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("scheme,functional,h,error,stderr,n\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{:e},{:e},{:e},{}",
                self.scheme, r.functional, r.h, r.error, r.stderr, r.n
            );
        }
        s
    }

    /// Columns `scheme,functional,status,slope,intercept,half_width,points`.
    pub fn summary_rows(&self) -> Vec<String> {
        self.fits
            .iter()
            .map(|f| match f.outcome {
                FitOutcome::Fitted(o) => format!(
                    "{},{},{},{:.6},{:.6},{:.6},{}",
                    self.scheme,
                    f.functional,
                    f.outcome.status(),
                    o.slope,
                    o.intercept,
                    o.half_width,
                    o.points
                ),
                FitOutcome::Insufficient { usable } => format!(
                    "{},{},{},,,,{}",
                    self.scheme,
                    f.functional,
                    f.outcome.status(),
                    usable
                ),
            })
            .collect()
    }
}

pub const SUMMARY_HEADER: &str = "scheme,functional,status,slope,intercept,half_width,points";

fn resolve_mode(plan: &McPlan, problem: &Problem) -> ReferenceMode {
    match plan.reference {
        ReferenceMode::Auto if plan.functionals.iter().all(|g| problem.reference.value_for(g).is_some()) => {
            ReferenceMode::Analytic
        }
        ReferenceMode::Auto => ReferenceMode::FineGrid {
            h_ref: None,
            samples: None,
        },
        m => m,
    }
}

fn reference_values(plan: &McPlan, problem: &Problem) -> Result<Vec<ReferenceValue>> {
    plan.check_reference(problem)?;
    match resolve_mode(plan, problem) {
        ReferenceMode::Analytic => Ok(plan
            .functionals
            .iter()
            .map(|g| {
                let (value, stderr) = problem.reference.value_for(g).expect("checked");
                ReferenceValue {
                    functional: g.label.clone(),
                    value,
                    stderr,
                    source: "analytic".into(),
                }
            })
            .collect()),
        ReferenceMode::FineGrid { h_ref, samples } => {
            let h_ref = h_ref.unwrap_or(plan.min_h() / FINE_GRID_DIVISOR);
            let n_ref = samples.unwrap_or(plan.samples * FINE_GRID_SAMPLE_FACTOR);
            let method = Method::Ll(SchemeConfig::new(Variant::PadeGeneral, 2));
            let stats = terminal_moments(
                &method,
                problem,
                h_ref,
                n_ref as u64,
                plan.seed,
                REFERENCE_LEVEL,
                &plan.functionals,
            )?;
            Ok(plan
                .functionals
                .iter()
                .zip(stats)
                .map(|(g, s)| ReferenceValue {
                    functional: g.label.clone(),
                    value: s.mean,
                    stderr: s.stderr(),
                    source: format!("fine grid h={h_ref:e} n={n_ref}"),
                })
                .collect())
        }
        ReferenceMode::Auto => unreachable!(),
    }
}

/// Estimates `|E g(y_N) - E g(x(T))|` for every step size and functional.
///
/// Step-size level `l` (its index in `plan.step_sizes`) uses its own block of
/// random streams, so levels are independent. Slopes are fitted over the
/// points above the noise floor.
pub fn estimate_weak_error(plan: &McPlan, method: &Method, problem: &Problem) -> Result<WeakErrorReport> {
    plan.validate(problem.t0, problem.t_end)?;
    method.check_model(problem.model.as_ref())?;
    let d = problem.model.dim();
    if let Some(g) = plan.functionals.iter().find(|g| g.max_index().is_some_and(|i| i >= d)) {
        return Err(Error::InvalidConfig(format!(
            "functional `{}` reads past the state dimension {d}",
            g.label
        )));
    }
    let references = reference_values(plan, problem)?;

    let mut rows = Vec::new();
    for (level, &h) in plan.step_sizes.iter().enumerate() {
        let stats = terminal_moments(
            method,
            problem,
            h,
            plan.samples as u64,
            plan.seed,
            level as u32,
            &plan.functionals,
        )?;
        for ((g, s), r) in plan.functionals.iter().zip(&stats).zip(&references) {
            let bias = s.mean - r.value;
            rows.push(ErrorRow {
                functional: g.label.clone(),
                h,
                mean: s.mean,
                bias,
                error: bias.abs(),
                stderr: (s.stderr().powi(2) + r.stderr.powi(2)).sqrt(),
                n: plan.samples,
            });
        }
    }

    let fits = plan
        .functionals
        .iter()
        .map(|g| {
            let pts: Vec<(f64, f64, f64)> = rows
                .iter()
                .filter(|r| r.functional == g.label)
                .map(|r| (r.h, r.error, r.stderr))
                .collect();
            FitRecord {
                functional: g.label.clone(),
                outcome: fit_above_noise_floor(&pts),
            }
        })
        .collect();

    Ok(WeakErrorReport {
        scheme: method.label(),
        problem: problem.name.clone(),
        references,
        rows,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_problem;
    use crate::weakmc::NoiseKind;

    fn plan(functionals: Vec<TestFunctional>) -> McPlan {
        McPlan {
            step_sizes: vec![1.0, 0.5, 0.25],
            samples: 20_000,
            seed: 3,
            functionals,
            reference: ReferenceMode::Auto,
        }
    }

    #[test]
    fn exact_scheme_sits_at_noise_floor() {
        let p = builtin_problem("ou-1d").unwrap();
        let pl = plan(vec![TestFunctional::component(0)]);
        let r = estimate_weak_error(&pl, &Method::Ll(SchemeConfig::new(Variant::PadeGeneral, 1)), &p).unwrap();
        assert!(r.rows.iter().all(|row| !row.above_noise_floor()), "{:?}", r.rows);
        assert_eq!(r.fit_for("x1").unwrap().status(), "at noise floor");
        assert!(r.to_csv().starts_with("scheme,functional,h,error,stderr,n\n"));
        assert_eq!(r.to_csv().lines().count(), 4);
    }

    #[test]
    fn euler_has_visible_bias_on_ou() {
        let p = builtin_problem("ou-1d").unwrap();
        let r = estimate_weak_error(&plan(vec![TestFunctional::component(0)]), &Method::Euler { noise: NoiseKind::Gaussian }, &p).unwrap();
        // Euler mean is (1 - h)^{1/h}: 0 at h = 1, e^-1 - 0.25 at h = 0.5.
        let first = &r.rows[0];
        assert!((first.mean - 0.0).abs() < 4.0 * first.stderr);
        assert!(first.above_noise_floor());
    }

    #[test]
    fn plan_validation() {
        let mut pl = plan(vec![TestFunctional::component(0)]);
        assert!(pl.validate(0.0, 1.0).is_ok());
        pl.samples = 99;
        assert!(pl.validate(0.0, 1.0).is_err());
        let mut pl = plan(vec![TestFunctional::component(0)]);
        pl.step_sizes = vec![0.5, 0.5];
        assert!(pl.validate(0.0, 1.0).is_err());
        pl.step_sizes = vec![2.0, 1.0];
        assert!(pl.validate(0.0, 1.0).is_err());
        pl.step_sizes = vec![0.5];
        pl.functionals.clear();
        assert!(pl.validate(0.0, 1.0).is_err());
    }

    #[test]
    fn missing_reference_is_an_error() {
        let p = builtin_problem("time-dep-g").unwrap();
        let mut pl = plan(vec![TestFunctional::component(0)]);
        pl.reference = ReferenceMode::Analytic;
        let err = estimate_weak_error(&pl, &Method::Euler { noise: NoiseKind::Gaussian }, &p).unwrap_err();
        assert!(matches!(err, Error::ReferenceUnavailable(_)));
    }

    #[test]
    fn out_of_range_functional() {
        let p = builtin_problem("ou-1d").unwrap();
        let pl = plan(vec![TestFunctional::component(1)]);
        assert!(estimate_weak_error(&pl, &Method::Euler { noise: NoiseKind::Gaussian }, &p).is_err());
    }

    #[test]
    fn report_is_deterministic() {
        let p = builtin_problem("time-dep-g").unwrap();
        let mut pl = plan(vec![TestFunctional::component(0), TestFunctional::component_squared(1)]);
        pl.samples = 500;
        pl.reference = ReferenceMode::FineGrid {
            h_ref: Some(0.015625),
            samples: Some(2000),
        };
        let m = Method::Ll(SchemeConfig::new(Variant::PadeGeneral, 2));
        let a = estimate_weak_error(&pl, &m, &p).unwrap();
        let b = estimate_weak_error(&pl, &m, &p).unwrap();
        assert_eq!(a, b);
        assert!(a.references[0].source.starts_with("fine grid"));
    }

    #[test]
    fn fine_grid_bounds() {
        let p = builtin_problem("time-dep-g").unwrap();
        let mut pl = plan(vec![TestFunctional::component(0)]);
        pl.reference = ReferenceMode::FineGrid {
            h_ref: Some(0.05),
            samples: None,
        };
        assert!(pl.check_reference(&p).is_err());
        pl.reference = ReferenceMode::FineGrid {
            h_ref: None,
            samples: Some(pl.samples),
        };
        assert!(pl.check_reference(&p).is_err());
        pl.reference = ReferenceMode::Analytic;
        assert!(matches!(pl.check_reference(&p), Err(Error::ReferenceUnavailable(_))));
        pl.reference = ReferenceMode::Auto;
        assert!(pl.check_reference(&p).is_ok());
    }
}
