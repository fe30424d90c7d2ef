//! A user-defined model built from closures, checked by finite differences
//! and simulated with the general Padé route.
//!
//! cargo run --release --example custom_model

use nalgebra::{dmatrix, dvector};
use weak_ll::grid::TimeGrid;
use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{validate_model, CallbackModel};
use weak_ll::weakmc::{simulate_path, trajectory_rng, Method};

fn main() -> weak_ll::Result<()> {
    // Duffing-type oscillator with noise on the velocity that grows in time.
    let model = CallbackModel::new(2, 1)
        .with_drift(|_, x| dvector![x[1], x[0] - x[0].powi(3) - 0.3 * x[1]])
        .with_jacobian(|_, x| dmatrix![0.0, 1.0; 1.0 - 3.0 * x[0] * x[0], -0.3])
        .with_hess_quad(|_, x, v| dvector![0.0, -6.0 * x[0] * v[0] * v[0]])
        .with_diffusion(|t| dmatrix![0.0; 0.4 + 0.2 * t])
        .with_diffusion_dt(|_| dmatrix![0.0; 0.2]);

    let probes: Vec<_> = (0..10)
        .map(|k| (0.1 * k as f64, dvector![k as f64 * 0.3 - 1.5, 0.5 - 0.1 * k as f64]))
        .collect();
    let bad = validate_model(&model, &probes, 1e-5);
    println!("derivative check: {} violations", bad.len());

    let method = Method::Ll(SchemeConfig::new(Variant::PadeGeneral, 2));
    let grid = TimeGrid::uniform(0.0, 5.0, 0.05)?;
    let path = simulate_path(&method, &model, None, &dvector![1.0, 0.0], &grid, &mut trajectory_rng(4, 0))?;
    for pt in path.iter().step_by(10) {
        println!("{:5.2}  {:+.5}  {:+.5}", pt.t, pt.x[0], pt.x[1]);
    }
    Ok(())
}
