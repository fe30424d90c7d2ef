//! Weak error and fitted order on the sine pendulum for Euler and LL with
//! beta = 1 and 2, against the stored fine-grid reference.
//!
//! cargo run --release --example weak_order

use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, TestFunctional};
use weak_ll::weakmc::{estimate_weak_error, McPlan, Method, NoiseKind, ReferenceMode};

fn main() -> weak_ll::Result<()> {
    let p = builtin_problem("pendulum-sin")?;
    let plan = McPlan {
        step_sizes: (2..=6).map(|k| 2f64.powi(-k)).collect(),
        samples: 200_000,
        seed: 17,
        functionals: vec![TestFunctional::component(0)],
        reference: ReferenceMode::Analytic,
    };
    let methods = [
        Method::Euler { noise: NoiseKind::Gaussian },
        Method::Ll(SchemeConfig::new(Variant::PadeConstG, 1)),
        Method::Ll(SchemeConfig::new(Variant::PadeConstG, 2)),
    ];
    for m in &methods {
        let r = estimate_weak_error(&plan, m, &p)?;
        println!("{}", r.scheme);
        for row in &r.rows {
            println!("  h={:<9} error {:.3e} +- {:.1e}", row.h, row.error, row.stderr);
        }
        println!("  {}", r.summary_rows().join("\n  "));
    }
    Ok(())
}
