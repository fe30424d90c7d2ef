use super::*;
use crate::linalg::norm1;
use crate::model::{builtin_problem, CallbackModel, LinearSde, PendulumSin, ProblemParams, TimeDependentNoise};
use crate::weakmc::trajectory_rng;
use nalgebra::{dmatrix, dvector};

fn cfg(v: Variant, beta: u8) -> SchemeConfig {
    SchemeConfig::new(v, beta)
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).amax() / b.amax().max(1e-300)
}

fn relv(a: &Vector, b: &Vector) -> f64 {
    (a - b).amax() / b.amax().max(1e-300)
}

/// `e^A` by Taylor series at 2^-20 scaling, independent of the Padé code.
fn taylor_expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let s = 20;
    let x = a * 0.5f64.powi(s);
    let mut term = x.clone();
    let mut em1 = x.clone();
    for j in 2..25 {
        term = &term * &x / j as f64;
        em1 += &term;
    }
    for _ in 0..s {
        em1 = &em1 * 2.0 + &em1 * &em1;
    }
    em1 + Matrix::identity(n, n)
}

/// Composite 5-point Gauss-Legendre on [0, h].
fn quad<F: Fn(f64) -> Matrix>(h: f64, panels: usize, f: F) -> Matrix {
    let nodes = [
        (0.0, 128.0 / 225.0),
        (-(5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0, (322.0 + 13.0 * 70f64.sqrt()) / 900.0),
        ((5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0, (322.0 + 13.0 * 70f64.sqrt()) / 900.0),
        (-(5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0, (322.0 - 13.0 * 70f64.sqrt()) / 900.0),
        ((5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0, (322.0 - 13.0 * 70f64.sqrt()) / 900.0),
    ];
    let w = h / panels as f64;
    let mut acc: Option<Matrix> = None;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * w;
        for (x, wt) in nodes {
            let v = f(mid + 0.5 * w * x) * (0.5 * w * wt);
            acc = Some(match acc {
                None => v,
                Some(a) => a + v,
            });
        }
    }
    acc.unwrap()
}

#[test]
fn affine_pieces_examples() {
    let ou = builtin_problem("ou-1d").unwrap();
    let p = affine_pieces(ou.model.as_ref(), 0.0, &dvector![0.8], 1).unwrap();
    assert_eq!(p.b_beta[0], 0.0);
    assert_eq!(p.h_blocks.len(), 1);

    let c = CallbackModel::new(2, 1).with_drift(|_, _| dvector![1.5, -0.5]);
    let p = affine_pieces(&c, 0.0, &dvector![3.0, 4.0], 1).unwrap();
    assert_eq!(p.b_beta, dvector![1.5, -0.5]);

    let lam = 0.25;
    let pend = PendulumSin { lambda: lam, sigma: 12.0 };
    let p = affine_pieces(&pend, 0.0, &dvector![0.5], 2).unwrap();
    let expected = -lam * 0.5 + 0.5f64.sin() - (-lam + 0.5f64.cos()) * 0.5;
    assert!((p.b_beta[0] - expected).abs() < 1e-15);
    assert!((p.hessterm[0] + 144.0 * 0.5f64.sin()).abs() < 1e-12);
    assert!((p.time_slope[0] - 0.5 * p.hessterm[0]).abs() < 1e-15);
    assert_eq!(p.h_blocks.len(), 3);
}

#[test]
fn time_dependent_h_blocks() {
    let m = TimeDependentNoise;
    let t = 0.7;
    let p = affine_pieces(&m, t, &dvector![0.3, -0.2], 2).unwrap();
    let g = m.diffusion(t);
    let gp = m.diffusion_deriv(t, 1);
    assert!((&p.h_blocks[0] - &g * g.transpose()).amax() < 1e-15);
    assert!((&p.h_blocks[1] - (&gp * g.transpose() + &g * gp.transpose())).amax() < 1e-15);
    assert!((&p.h_blocks[2] - &gp * gp.transpose()).amax() < 1e-15);
    assert!((p.time_slope[0] - 0.3 * t.cos()).abs() < 1e-15);
}

#[test]
fn c_beta_brownian_motion() {
    let bm = CallbackModel::new(1, 1).with_diffusion(|_| dmatrix![1.0]).constant_diffusion();
    let p = affine_pieces(&bm, 0.0, &dvector![0.0], 1).unwrap();
    let c = build_c_beta(&p, &p.h_blocks[0]).unwrap();
    let expected = dmatrix![
        0.0, 1.0, 0.0, 0.0;
        0.0, 0.0, 0.0, 0.0;
        0.0, 0.0, 0.0, 1.0;
        0.0, 0.0, 0.0, 0.0
    ];
    assert_eq!(c.entries, expected);
    let inc = increment_pade_const_g(&bm, 0.0, &dvector![0.0], 0.3, &cfg(Variant::PadeConstG, 1)).unwrap();
    assert_eq!(inc.phi[0], 0.0);
    assert!((inc.sigma[(0, 0)] - 0.3).abs() < 1e-15);
    assert!(build_c_beta(&p, &Matrix::zeros(2, 2)).is_err());
}

#[test]
fn ou_closed_form_all_routes() {
    let ou = builtin_problem("ou-1d").unwrap();
    let y = dvector![1.0];
    let h = 0.5;
    let phi = (-0.5f64).exp() - 1.0;
    let sig = (1.0 - (-1.0f64).exp()) / 2.0;
    assert!((phi + 0.393_469).abs() < 1e-6 && (sig - 0.316_060).abs() < 1e-6);
    for v in [Variant::PadeGeneral, Variant::PadeConstG, Variant::Krylov, Variant::OzakiShoji] {
        for beta in [1, 2] {
            let inc = increment(&cfg(v, beta), ou.model.as_ref(), 0.0, &y, h).unwrap();
            assert!((inc.phi[0] - phi).abs() < 1e-12, "{v} b{beta}");
            assert!((inc.sigma[(0, 0)] - sig).abs() < 1e-12, "{v} b{beta}");
            assert!((inc.sigma_sqrt[(0, 0)].powi(2) - sig).abs() < 1e-12);
        }
    }
}

#[test]
fn degenerate_models() {
    let zero = CallbackModel::new(2, 1).constant_diffusion().autonomous();
    for v in [Variant::PadeGeneral, Variant::PadeConstG, Variant::Krylov] {
        let inc = increment(&cfg(v, 2), &zero, 0.0, &dvector![1.0, 2.0], 0.4).unwrap();
        assert!(inc.phi.amax() < 1e-15 && inc.sigma.amax() < 1e-15, "{v}");
    }
    let p = affine_pieces(&zero, 0.0, &dvector![1.0, 2.0], 1).unwrap();
    let c = build_c_beta(&p, &p.h_blocks[0]).unwrap();
    let e = crate::linalg::pade_expm(&(&c.entries * 0.4), &PadeConfig::default()).unwrap();
    assert!((e.view((0, 0), (2, 2)).into_owned() - Matrix::identity(2, 2)).amax() < 1e-15);
    assert!((e.view((2, 2), (2, 2)).into_owned() - Matrix::identity(2, 2)).amax() < 1e-15);

    let g = dmatrix![1.0, 0.5; 0.0, 2.0; 0.3, 0.0];
    let noise_only = CallbackModel::new(3, 2).with_diffusion(move |_| g.clone()).constant_diffusion();
    let inc = increment(&cfg(Variant::PadeConstG, 1), &noise_only, 0.0, &Vector::zeros(3), 0.25).unwrap();
    let gg = noise_only.diffusion(0.0);
    assert!((inc.sigma - (&gg * gg.transpose()) * 0.25).amax() < 1e-14);
}

#[test]
fn zero_step_is_zero() {
    let p = builtin_problem("time-dep-g").unwrap();
    let inc = increment(&cfg(Variant::PadeGeneral, 2), p.model.as_ref(), 0.0, &dvector![1.0, 0.0], 0.0).unwrap();
    assert_eq!(inc.phi, Vector::zeros(2));
    assert_eq!(inc.sigma, Matrix::zeros(2, 2));
}

#[test]
fn a_beta_one_reduces_to_c_beta() {
    let pend = PendulumSin { lambda: 0.25, sigma: 12.0 };
    let y = dvector![1.3];
    let p = affine_pieces(&pend, 0.0, &y, 1).unwrap();
    let a = build_a_beta(&p).unwrap();
    let c = build_c_beta(&p, &p.h_blocks[0]).unwrap();
    assert_eq!(a.entries, c.entries);
    for h in [0.01, 0.1, 0.5] {
        let g = increment_pade_general(&pend, 0.0, &y, h, &cfg(Variant::PadeGeneral, 1)).unwrap();
        let k = increment_pade_const_g(&pend, 0.0, &y, h, &cfg(Variant::PadeConstG, 1)).unwrap();
        assert!(relv(&g.phi, &k.phi) < 1e-12 && rel(&g.sigma, &k.sigma) < 1e-12);
    }
}

#[test]
fn a_beta_structure() {
    let m = TimeDependentNoise;
    let p = affine_pieces(&m, 0.2, &dvector![0.1, 0.4], 2).unwrap();
    let a = build_a_beta(&p).unwrap();
    let d = 2;
    assert_eq!(a.size(), 4 * d + 2);
    let e = &a.entries;
    // Everything below the first block row is block upper triangular.
    for r in d..e.nrows() {
        let block_r = r / d;
        for c in 0..e.ncols() {
            if c / d < block_r && r < 4 * d {
                assert_eq!(e[(r, c)], 0.0);
            }
        }
    }
    assert_eq!(e[(4 * d, 4 * d + 1)], 1.0);
    assert_eq!(e[(4 * d + 1, 4 * d + 1)], 0.0);
    assert_eq!(e[(4 * d + 1, 4 * d)], 0.0);
}

#[test]
fn linear_noise_integral() {
    // f = 0, G(t) = t: Sigma over [0, h] is h^3 / 3.
    let m = CallbackModel::new(1, 1)
        .with_diffusion(|t| dmatrix![t])
        .with_diffusion_dt(|_| dmatrix![1.0]);
    for h in [0.1, 0.5, 1.0] {
        let inc = increment_pade_general(&m, 0.0, &dvector![0.0], h, &cfg(Variant::PadeGeneral, 2)).unwrap();
        assert!((inc.sigma[(0, 0)] - h * h * h / 3.0).abs() < 1e-12, "h={h}");
        let k = increment_krylov(&m, 0.0, &dvector![0.0], h, &cfg(Variant::Krylov, 2)).unwrap();
        assert!((k.sigma[(0, 0)] - h * h * h / 3.0).abs() < 1e-12);
    }
}

#[test]
fn time_dependent_noise_matches_quadrature() {
    let m = TimeDependentNoise;
    let t = 0.4;
    let y = dvector![0.7, -0.3];
    let a = m.jacobian(t, &y);
    let g = m.diffusion(t);
    let gp = m.diffusion_deriv(t, 1);
    let f = m.drift(t, &y);
    let hs = crate::model::hess_term(&m, t, &y, &g);
    let slope = m.drift_t(t, &y) + hs * 0.5;
    for h in [0.05, 0.2, 0.5] {
        let inc = increment_pade_general(&m, t, &y, h, &cfg(Variant::PadeGeneral, 2)).unwrap();
        let sigma = quad(h, 64, |s| {
            let e = taylor_expm(&(&a * (h - s)));
            let gb = &g + &gp * s;
            &e * &gb * gb.transpose() * e.transpose()
        });
        let phi = quad(h, 64, |s| {
            let e = taylor_expm(&(&a * (h - s)));
            let v = &e * (&f + &slope * s);
            Matrix::from_column_slice(2, 1, v.as_slice())
        });
        assert!((&inc.sigma - &sigma).amax() < 1e-10, "h={h}");
        assert!((&inc.phi - phi.column(0)).amax() < 1e-10, "h={h}");
    }
}

#[test]
fn const_g_and_general_agree_on_ou_nd() {
    let p = builtin_problem("ou-nd").unwrap();
    let y = dvector![0.5, -1.0, 2.0];
    for beta in [1, 2] {
        let a = increment(&cfg(Variant::PadeGeneral, beta), p.model.as_ref(), 0.0, &y, 0.3).unwrap();
        let b = increment(&cfg(Variant::PadeConstG, beta), p.model.as_ref(), 0.0, &y, 0.3).unwrap();
        assert!((&a.phi - &b.phi).amax() < 1e-11 && (&a.sigma - &b.sigma).amax() < 1e-11);
    }
}

#[test]
fn beta_two_equals_beta_one_for_linear_autonomous() {
    let p = builtin_problem("ou-nd").unwrap();
    let y = dvector![0.1, 0.2, 0.3];
    for v in [Variant::PadeConstG, Variant::OzakiShoji, Variant::PadeGeneral] {
        let a = increment(&cfg(v, 1), p.model.as_ref(), 0.0, &y, 0.25).unwrap();
        let b = increment(&cfg(v, 2), p.model.as_ref(), 0.0, &y, 0.25).unwrap();
        assert!((&a.phi - &b.phi).amax() < 1e-14 && (&a.sigma - &b.sigma).amax() < 1e-14, "{v}");
    }
}

#[test]
fn ou_transition_is_exact() {
    let p = builtin_problem_with_d(4);
    let lin = LinearSde::new(p.jacobian(0.0, &Vector::zeros(4)), p.diffusion(0.0)).unwrap();
    let y = dvector![1.0, -0.5, 0.25, 2.0];
    for h in [0.1, 0.5, 1.0] {
        let (mean, cov) = lin.moments(h, &y);
        for v in [Variant::PadeGeneral, Variant::PadeConstG, Variant::Krylov, Variant::OzakiShoji] {
            let inc = increment(&cfg(v, 2), &lin, 0.0, &y, h).unwrap();
            assert!((&y + &inc.phi - &mean).amax() < 1e-11, "{v} h={h}");
            assert!((&inc.sigma - &cov).amax() < 1e-11, "{v} h={h}");
        }
    }
}

fn builtin_problem_with_d(d: usize) -> std::sync::Arc<dyn SdeModel> {
    crate::model::builtin_problem_with("ou-nd", &ProblemParams::default().set("d", d as f64))
        .unwrap()
        .model
}

#[test]
fn routes_agree_on_pendulum() {
    let pend = PendulumSin { lambda: 0.25, sigma: 12.0 };
    for &y in &[-2.0, 0.3, 1.0, 2.5] {
        let y = dvector![y];
        for beta in [1, 2] {
            let base = increment(&cfg(Variant::PadeConstG, beta), &pend, 0.0, &y, 0.125).unwrap();
            for v in [Variant::PadeGeneral, Variant::Krylov, Variant::OzakiShoji] {
                let inc = increment(&cfg(v, beta), &pend, 0.0, &y, 0.125).unwrap();
                assert!(relv(&inc.phi, &base.phi) < 1e-9, "{v} b{beta}");
                assert!(rel(&inc.sigma, &base.sigma) < 1e-9, "{v} b{beta}");
            }
        }
    }
}

#[test]
fn krylov_full_dimension_matches_pade() {
    let m = builtin_problem_with_d(5);
    let y = Vector::from_fn(5, |i, _| (i as f64 * 0.7).sin());
    let full = cfg(Variant::Krylov, 1).with_krylov_dim(12);
    let k = increment(&full, m.as_ref(), 0.0, &y, 0.2).unwrap();
    let p = increment(&cfg(Variant::PadeConstG, 1), m.as_ref(), 0.0, &y, 0.2).unwrap();
    assert!((&k.phi - &p.phi).amax() < 1e-10 && (&k.sigma - &p.sigma).amax() < 1e-10);

    let bm = CallbackModel::new(1, 1).with_diffusion(|_| dmatrix![1.0]).constant_diffusion();
    let inc = increment(&cfg(Variant::Krylov, 1), &bm, 0.0, &dvector![0.0], 0.7).unwrap();
    assert!(inc.phi[0].abs() < 1e-15 && (inc.sigma[(0, 0)] - 0.7).abs() < 1e-14);
}

#[test]
fn krylov_partial_dimension_on_large_system() {
    let m = builtin_problem_with_d(20);
    let y = Vector::from_fn(20, |i, _| 1.0 - 0.1 * i as f64);
    let k = increment(&cfg(Variant::Krylov, 2).with_krylov_dim(12), m.as_ref(), 0.0, &y, 0.01).unwrap();
    let p = increment(&cfg(Variant::PadeConstG, 2), m.as_ref(), 0.0, &y, 0.01).unwrap();
    assert!((&k.phi - &p.phi).amax() < 1e-8);
    assert!((&k.sigma - &p.sigma).amax() < 1e-8);
}

#[test]
fn krylov_dimension_condition() {
    let m = Matrix::identity(4, 4) * 3.0;
    assert!(routes::krylov_dimension_ok_for_test(6, 1.0, &m));
    assert!(!routes::krylov_dimension_ok_for_test(5, 1.0, &m));
}

#[test]
fn ozaki_shoji_failure_modes() {
    let flat = CallbackModel::new(1, 1).with_diffusion(|_| dmatrix![1.0]).autonomous().constant_diffusion();
    assert!(matches!(
        increment(&cfg(Variant::OzakiShoji, 1), &flat, 0.0, &dvector![0.0], 0.1),
        Err(Error::SingularJacobian { .. })
    ));
    let nonauto = TimeDependentNoise;
    assert!(matches!(
        increment(&cfg(Variant::OzakiShoji, 1), &nonauto, 0.0, &dvector![0.0, 0.0], 0.1),
        Err(Error::Precondition { .. })
    ));
    assert!(matches!(
        increment(&cfg(Variant::PadeConstG, 1), &nonauto, 0.0, &dvector![0.0, 0.0], 0.1),
        Err(Error::Precondition { .. })
    ));
}

#[test]
fn ozaki_shoji_pencil_matches_block_covariance() {
    let m = builtin_problem_with_d(3);
    let y = dvector![0.3, 0.1, -0.4];
    let os = increment(&cfg(Variant::OzakiShoji, 1), m.as_ref(), 0.0, &y, 0.4).unwrap();
    let vl = increment(&cfg(Variant::PadeConstG, 1), m.as_ref(), 0.0, &y, 0.4).unwrap();
    assert!(rel(&os.sigma, &vl.sigma) < 1e-9);
}

#[test]
fn midpoint_properties() {
    let ou = builtin_problem("ou-1d").unwrap();
    let mid = cfg(Variant::Midpoint, 2);
    let y = dvector![1.3];
    let inc = increment(&mid, ou.model.as_ref(), 0.0, &y, 0.25).unwrap();
    assert!((inc.phi[0] - ((-0.25f64).exp() - 1.0) * 1.3).abs() < 1e-14);

    let bm = CallbackModel::new(1, 1).with_diffusion(|_| dmatrix![1.0]);
    let inc = increment(&mid, &bm, 0.0, &dvector![0.0], 0.3).unwrap();
    assert!((inc.sigma[(0, 0)] - 0.3).abs() < 1e-15);

    // Local covariance error decays at least like h^3.
    let a: f64 = -1.0;
    let errs: Vec<f64> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&h| {
            let exact = (2.0 * a * h).exp_m1() / (2.0 * a);
            let inc = increment(&mid, ou.model.as_ref(), 0.0, &y, h).unwrap();
            (inc.sigma[(0, 0)] - exact).abs()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 2.9, "order {order}");
    }
    assert!(matches!(mid.with_pade(6, 6).validate(), Ok(())));
    assert!(cfg(Variant::Midpoint, 1).validate().is_err());
}

#[test]
fn pade_one_one_local_order() {
    let pend = PendulumSin { lambda: 0.25, sigma: 12.0 };
    let y = dvector![2.0];
    let low = cfg(Variant::PadeConstG, 2).with_pade(1, 1);
    let high = cfg(Variant::PadeConstG, 2).with_pade(13, 13);
    let ratios: Vec<f64> = (3..=10)
        .map(|k| {
            let h = 2f64.powi(-k);
            let a = increment(&low, &pend, 0.0, &y, h).unwrap();
            let b = increment(&high, &pend, 0.0, &y, h).unwrap();
            (a.phi[0] - b.phi[0]).abs() / h.powi(3)
        })
        .collect();
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let last = *ratios.last().unwrap();
    assert!(max.is_finite() && max < 1e3, "{ratios:?}");
    assert!(last <= 2.0 * ratios[ratios.len() - 2], "{ratios:?}");
}

#[test]
fn covariances_are_psd_everywhere() {
    for name in crate::model::catalog_names() {
        let p = builtin_problem(name).unwrap();
        let d = p.model.dim();
        for v in Variant::ALL {
            let c = cfg(v, 2);
            if c.check_model(p.model.as_ref()).is_err() {
                continue;
            }
            for h in [0.5, 0.1, 0.01] {
                for s in 0..5 {
                    let y = Vector::from_fn(d, |i, _| ((s * 7 + i * 3) as f64).sin() * 2.0);
                    let inc = increment(&c, p.model.as_ref(), 0.1, &y, h).unwrap();
                    assert_eq!(inc.sigma, inc.sigma.transpose());
                    let min = inc.sigma.clone().symmetric_eigenvalues().min();
                    assert!(min >= -1e-10 * norm1(&inc.sigma), "{name} {v} h={h}");
                    let rebuilt = &inc.sigma_sqrt * inc.sigma_sqrt.transpose();
                    assert!((rebuilt - &inc.sigma).amax() <= 1e-10 * inc.sigma.amax().max(1e-300));
                }
            }
        }
    }
}

#[test]
fn step_without_noise_is_deterministic() {
    let m = CallbackModel::new(1, 1)
        .with_drift(|_, x| -x)
        .with_jacobian(|_, _| dmatrix![-1.0]);
    let c = cfg(Variant::PadeGeneral, 1);
    let a = step(&c, &m, 0.0, &dvector![1.0], 0.5, &mut trajectory_rng(1, 0)).unwrap();
    let b = step(&c, &m, 0.0, &dvector![1.0], 0.5, &mut trajectory_rng(2, 0)).unwrap();
    assert_eq!(a, b);
    assert!((a[0] - (-0.5f64).exp()).abs() < 1e-15);
    assert!(step(&c, &m, 0.0, &dvector![1.0], 0.0, &mut trajectory_rng(2, 0)).is_err());
}

#[test]
fn step_moments() {
    let ou = builtin_problem("ou-1d").unwrap();
    let y = dvector![1.0];
    let h = 0.5;
    for noise in [NoiseKind::Gaussian, NoiseKind::TwoPoint] {
        let c = cfg(Variant::PadeConstG, 1).with_noise(noise);
        let inc = increment(&c, ou.model.as_ref(), 0.0, &y, h).unwrap();
        let n = 1_000_000;
        let mut rng = trajectory_rng(8, 0);
        let (mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = step(&c, ou.model.as_ref(), 0.0, &y, h, &mut rng).unwrap()[0] - y[0] - inc.phi[0];
            s1 += z;
            s2 += z * z;
            s4 += z.powi(4);
        }
        let nf = n as f64;
        let sig = inc.sigma[(0, 0)];
        assert!((s1 / nf).abs() < 4.0 * (sig / nf).sqrt(), "{noise}");
        let var2 = (s4 / nf - (s2 / nf).powi(2)).max(0.0);
        assert!((s2 / nf - sig).abs() < 4.0 * (var2 / nf).sqrt() + 1e-9 * sig, "{noise}");
    }
}

#[test]
fn names_and_labels() {
    for v in Variant::ALL {
        assert_eq!(v.name().parse::<Variant>().unwrap(), v);
    }
    assert!("euler".parse::<Variant>().is_err());
    let c = cfg(Variant::PadeGeneral, 2).with_pade(1, 1).with_noise(NoiseKind::TwoPoint);
    assert_eq!(c.label(), "pade-general-b2-p1q1-2pt");
    assert!(cfg(Variant::PadeGeneral, 3).validate().is_err());
}

#[test]
fn phi_defect_adds_h_squared() {
    let ou = builtin_problem("ou-1d").unwrap();
    let y = dvector![1.0];
    let plain = increment(&cfg(Variant::PadeConstG, 2), ou.model.as_ref(), 0.0, &y, 0.1).unwrap();
    let bent = increment(&cfg(Variant::PadeConstG, 2).with_phi_defect(-3.0), ou.model.as_ref(), 0.0, &y, 0.1).unwrap();
    assert!((bent.phi[0] - plain.phi[0] + 0.03).abs() < 1e-15);
    assert_eq!(bent.sigma, plain.sigma);
}
