//! Times single LL steps for each variant on a few catalog problems.
//!
//! ```text
//! cargo run --release --example step_throughput
//! ```

use std::time::Instant;
use weak_ll::llcore::{step, SchemeConfig, Variant};
use weak_ll::model::builtin_problem;
use weak_ll::weakmc::trajectory_rng;

fn main() {
    let cases = [
        ("pendulum-sin", Variant::PadeGeneral, 2),
        ("pendulum-sin", Variant::PadeGeneral, 1),
        ("pendulum-sin", Variant::PadeConstG, 2),
        ("pendulum-sin", Variant::OzakiShoji, 2),
        ("pendulum-sin", Variant::Midpoint, 2),
        ("pendulum-sin", Variant::Krylov, 2),
        ("ou-nd", Variant::PadeGeneral, 2),
        ("time-dep-g", Variant::PadeGeneral, 2),
    ];
    for (name, variant, beta) in cases {
        let p = builtin_problem(name).unwrap();
        let cfg = SchemeConfig::new(variant, beta);
        let mut rng = trajectory_rng(0, 0);
        let mut y = p.initial.draw(&mut rng);
        let n = 200_000;
        let h = 2f64.powi(-6);
        let start = Instant::now();
        for k in 0..n {
            let t = (k % 32) as f64 * h;
            y = step(&cfg, p.model.as_ref(), t, &y, h, &mut rng).unwrap();
            if k % 32 == 31 {
                y = p.initial.draw(&mut rng);
            }
        }
        let ns = start.elapsed().as_nanos() as f64 / n as f64;
        println!("{name:>14} {:<14} beta={beta}: {ns:8.0} ns/step", variant.name());
    }
}
