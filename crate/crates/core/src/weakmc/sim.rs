use super::rng::{draw_noise, stream_id, trajectory_rng, NoiseKind};
use crate::jumps::{apply_jumps, merged_grid, sample_jump_times, JumpSpec};
use crate::linalg::Vector;
use crate::llcore::{step, SchemeConfig};
use crate::model::{Problem, SdeModel, TestFunctional};
use crate::{Error, Result, TimeGrid};
use rand::RngCore;
use rayon::prelude::*;

/// An integrator the harness can run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Ll(SchemeConfig),
    Euler { noise: NoiseKind },
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Ll(cfg) => cfg.label(),
            Method::Euler { noise: NoiseKind::Gaussian } => "euler".into(),
            Method::Euler { noise: NoiseKind::TwoPoint } => "euler-2pt".into(),
        }
    }

    pub fn check_model(&self, model: &dyn SdeModel) -> Result<()> {
        match self {
            Method::Ll(cfg) => cfg.check_model(model),
            Method::Euler { .. } => Ok(()),
        }
    }

    fn advance(&self, model: &dyn SdeModel, t: f64, y: &Vector, h: f64, rng: &mut dyn RngCore) -> Result<Vector> {
        match self {
            Method::Ll(cfg) => step(cfg, model, t, y, h, rng),
            Method::Euler { noise } => Ok(euler_with(*noise, model, t, y, h, rng)),
        }
    }
}

/// Euler-Maruyama: `y + f(t, y) h + G(t) sqrt(h) xi` with `xi` in `R^m`.
pub fn euler_step(model: &dyn SdeModel, t: f64, y: &Vector, h: f64, rng: &mut dyn RngCore) -> Vector {
    euler_with(NoiseKind::Gaussian, model, t, y, h, rng)
}

fn euler_with(noise: NoiseKind, model: &dyn SdeModel, t: f64, y: &Vector, h: f64, rng: &mut dyn RngCore) -> Vector {
    let xi = draw_noise(noise, model.noise_dim(), rng);
    let mut out = y + model.drift(t, y) * h;
    out.gemv(h.sqrt(), &model.diffusion(t), &xi, 1.0);
    out
}

/// A state on a simulated path with the jump channels that fired there.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub x: Vector,
    pub jumps: Vec<usize>,
}

fn run(
    method: &Method,
    model: &dyn SdeModel,
    jumps: Option<&JumpSpec>,
    x0: &Vector,
    base: &TimeGrid,
    rng: &mut dyn RngCore,
    mut record: impl FnMut(f64, &Vector, &[usize]),
) -> Result<Vector> {
    let nonfinite = |t| Error::NonFiniteState { trajectory: 0, t };
    let (grid, sched) = match jumps {
        Some(spec) if !spec.channels().is_empty() => {
            let s = sample_jump_times(&spec.intensities(), base.start(), base.end(), rng)?;
            (merged_grid(base, &s), Some((spec, s)))
        }
        _ => (base.clone(), None),
    };
    let times = grid.times();
    let mut cursor = vec![0usize; sched.as_ref().map_or(0, |(_, s)| s.times.len())];
    let mut active = Vec::new();
    let mut y = x0.clone();
    record(times[0], &y, &[]);
    for w in times.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        y = method.advance(model, t0, &y, t1 - t0, rng)?;
        active.clear();
        if let Some((spec, s)) = &sched {
            for (i, ch) in s.times.iter().enumerate() {
                if cursor[i] < ch.len() && crate::jumps::same_time(ch[cursor[i]], t1) {
                    active.push(i);
                    cursor[i] += 1;
                }
            }
            y = apply_jumps(spec, &active, t1, y);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(nonfinite(t1));
        }
        record(t1, &y, &active);
    }
    Ok(y)
}

/// Terminal state of one trajectory started at `x0`.
///
/// With a jump specification the schedule is drawn first and merged into the
/// grid, so the path visits every jump time.
pub fn simulate_terminal(
    method: &Method,
    model: &dyn SdeModel,
    jumps: Option<&JumpSpec>,
    x0: &Vector,
    grid: &TimeGrid,
    rng: &mut dyn RngCore,
) -> Result<Vector> {
    run(method, model, jumps, x0, grid, rng, |_, _, _| {})
}

/// Every state of one trajectory, for inspection.
pub fn simulate_path(
    method: &Method,
    model: &dyn SdeModel,
    jumps: Option<&JumpSpec>,
    x0: &Vector,
    grid: &TimeGrid,
    rng: &mut dyn RngCore,
) -> Result<Vec<PathPoint>> {
    let mut path = Vec::with_capacity(grid.times().len());
    run(method, model, jumps, x0, grid, rng, |t, x, j| {
        path.push(PathPoint {
            t,
            x: x.clone(),
            jumps: j.to_vec(),
        })
    })?;
    Ok(path)
}

/// Running mean and variance of one functional.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleMoments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl SampleMoments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &SampleMoments) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

const CHUNK: u64 = 4096;

/// Sample moments of each functional over `n` trajectories at step `h`.
///
/// Trajectory `k` uses stream [`stream_id`]`(level, k)`. Chunks of 4096
/// trajectories are processed in parallel and merged in index order, so the
/// result is bit-identical for any thread count.
pub fn terminal_moments(
    method: &Method,
    problem: &Problem,
    h: f64,
    n: u64,
    seed: u64,
    level: u32,
    functionals: &[TestFunctional],
) -> Result<Vec<SampleMoments>> {
    method.check_model(problem.model.as_ref())?;
    let grid = TimeGrid::uniform(problem.t0, problem.t_end, h)?;
    let model = problem.model.as_ref();
    let jumps = problem.jumps.as_ref();
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Vec<SampleMoments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![SampleMoments::default(); functionals.len()];
            for k in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let mut rng = trajectory_rng(seed, stream_id(level, k));
                let x0 = problem.initial.draw(&mut rng);
                let y = simulate_terminal(method, model, jumps, &x0, &grid, &mut rng).map_err(|e| match e {
                    Error::NonFiniteState { t, .. } => Error::NonFiniteState { trajectory: k, t },
                    other => other,
                })?;
                for (a, g) in acc.iter_mut().zip(functionals) {
                    a.push(g.eval(&y));
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![SampleMoments::default(); functionals.len()];
    for chunk in &partial {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    Ok(total)
}
