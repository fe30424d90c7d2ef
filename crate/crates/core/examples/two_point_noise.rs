//! Gaussian versus two-point noise in the beta = 2 scheme: same weak order.
//!
//! cargo run --release --example two_point_noise

use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, TestFunctional};
use weak_ll::weakmc::{estimate_weak_error, McPlan, Method, NoiseKind, ReferenceMode};

fn main() -> weak_ll::Result<()> {
    let p = builtin_problem("pendulum-sin")?;
    let plan = McPlan {
        step_sizes: (2..=5).map(|k| 2f64.powi(-k)).collect(),
        samples: 200_000,
        seed: 23,
        functionals: vec![TestFunctional::component(0)],
        reference: ReferenceMode::Analytic,
    };
    for noise in [NoiseKind::Gaussian, NoiseKind::TwoPoint] {
        let m = Method::Ll(SchemeConfig::new(Variant::PadeConstG, 2).with_noise(noise));
        let r = estimate_weak_error(&plan, &m, &p)?;
        println!("{}", r.summary_rows().join("\n"));
    }
    Ok(())
}
