//! LL schemes reproduce the OU transition law: terminal sample moments match
//! the closed form at any step size.
//!
//! cargo run --release --example linear_exactness

use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, Reference, TestFunctional};
use weak_ll::weakmc::{terminal_moments, Method, NoiseKind};

fn main() -> weak_ll::Result<()> {
    let p = builtin_problem("ou-1d")?;
    let (mean, cov) = match &p.reference {
        Reference::Moments { mean, cov } => (mean[0], cov[(0, 0)]),
        _ => unreachable!(),
    };
    let g = [TestFunctional::component(0), TestFunctional::component_squared(0)];
    println!("exact: mean {mean:.5}, second moment {:.5}", cov + mean * mean);
    let mut methods: Vec<Method> = [Variant::PadeGeneral, Variant::OzakiShoji]
        .into_iter()
        .map(|v| Method::Ll(SchemeConfig::new(v, 1)))
        .collect();
    methods.push(Method::Euler { noise: NoiseKind::Gaussian });
    for m in &methods {
        for (level, h) in [1.0, 0.5, 0.1].into_iter().enumerate() {
            let s = terminal_moments(m, &p, h, 100_000, 9, level as u32, &g)?;
            println!(
                "{:<22} h={h:<4} mean {:.5} ({:+.1} se)  second moment {:.5} ({:+.1} se)",
                m.label(),
                s[0].mean,
                (s[0].mean - mean) / s[0].stderr(),
                s[1].mean,
                (s[1].mean - cov - mean * mean) / s[1].stderr()
            );
        }
    }
    Ok(())
}
