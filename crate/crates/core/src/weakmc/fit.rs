use statrs::distribution::{ContinuousCDF, StudentsT};

/// Points with `|error| <= NOISE_FLOOR_FACTOR * stderr` are excluded from fits.
pub const NOISE_FLOOR_FACTOR: f64 = 3.0;

/// Least-squares line through `(log h, log error)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval for the slope.
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitOutcome {
    Fitted(OrderFit),
    /// Fewer than three usable points. `usable = 0` means every error is at
    /// the Monte Carlo noise floor.
    Insufficient { usable: usize },
}

impl FitOutcome {
    pub fn fitted(&self) -> Option<&OrderFit> {
        match self {
            FitOutcome::Fitted(f) => Some(f),
            FitOutcome::Insufficient { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            FitOutcome::Fitted(_) => "fitted",
            FitOutcome::Insufficient { usable: 0 } => "at noise floor",
            FitOutcome::Insufficient { .. } => "insufficient points",
        }
    }
}

/// OLS fit of `log error = intercept + slope log h`.
///
/// Needs at least three points with positive error; the half-width is the
/// Student-t 97.5% quantile with `n - 2` degrees of freedom times the slope's
/// standard error.
pub fn fit_order(points: &[(f64, f64)]) -> FitOutcome {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, e)| *h > 0.0 && *e > 0.0 && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    let n = pts.len();
    if n < 3 {
        return FitOutcome::Insufficient { usable: n };
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return FitOutcome::Insufficient { usable: 1 };
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let dof = nf - 2.0;
    let se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN);
    FitOutcome::Fitted(OrderFit {
        slope,
        intercept,
        half_width: t * se,
        points: n,
    })
}

/// [`fit_order`] over the points whose error clears the noise floor.
///
/// Each point is `(h, error, stderr)`.
pub fn fit_above_noise_floor(points: &[(f64, f64, f64)]) -> FitOutcome {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, e, se)| e.abs() > NOISE_FLOOR_FACTOR * se)
        .map(|(h, e, _)| (*h, e.abs()))
        .collect();
    fit_order(&usable)
}
