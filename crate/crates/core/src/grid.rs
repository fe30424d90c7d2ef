use crate::{Error, Result};

/// Strictly increasing discretization times `t_0 < ... < t_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidConfig("a time grid needs at least two points".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("time grid".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("time grid must be strictly increasing".into()));
        }
        Ok(Self { times })
    }

    /// Uniform steps of size `h` from `t0`, with the last point pinned to `t_end`.
    ///
    /// When `h` does not divide the span the final step is shorter.
    pub fn uniform(t0: f64, t_end: f64, h: f64) -> Result<Self> {
        if !(t_end > t0) {
            return Err(Error::InvalidConfig(format!("empty time span [{t0}, {t_end}]")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidConfig(format!("step size must be positive, got {h}")));
        }
        let span = t_end - t0;
        if h > span * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "step size {h} exceeds the time span {span}"
            )));
        }
        let n = ((span / h) - 1e-9).ceil().max(1.0) as usize;
        let mut times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
        times.push(t_end);
        Self::new(times)
    }

    pub(crate) fn from_sorted_unchecked(times: Vec<f64>) -> Self {
        Self { times }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn max_step(&self) -> f64 {
        self.times
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_uniform_grid() {
        let g = TimeGrid::uniform(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.steps(), 4);
        assert_eq!(g.max_step(), 0.25);
    }

    #[test]
    fn non_dividing_step_shortens_last() {
        let g = TimeGrid::uniform(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.steps(), 4);
        assert_eq!(g.end(), 1.0);
        assert!(g.max_step() <= 0.3 + 1e-15);
    }

    #[test]
    fn step_equal_to_span() {
        let g = TimeGrid::uniform(0.0, 1.0, 1.0).unwrap();
        assert_eq!(g.times(), &[0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::uniform(0.0, 1.0, 1.5).is_err());
        assert!(TimeGrid::uniform(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::uniform(1.0, 1.0, 0.1).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::new(vec![0.0]).is_err());
    }
}
