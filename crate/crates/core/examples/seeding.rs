//! Per-trajectory random streams: results do not depend on the worker count.
//!
//! cargo run --release --example seeding

use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, TestFunctional};
use weak_ll::weakmc::{stream_id, terminal_moments, trajectory_rng, Method};

fn main() -> weak_ll::Result<()> {
    use rand::RngCore;
    // Trajectory k of level l always reads the same stream.
    let a = trajectory_rng(42, stream_id(3, 1000)).next_u64();
    let b = trajectory_rng(42, stream_id(3, 1000)).next_u64();
    println!("stream (3, 1000) first word {a:#018x} == {b:#018x}");

    let p = builtin_problem("pendulum-sin")?;
    let m = Method::Ll(SchemeConfig::new(Variant::PadeGeneral, 2));
    let g = [TestFunctional::component(0)];
    let mut means = Vec::new();
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let s = pool.install(|| terminal_moments(&m, &p, 0.0625, 50_000, 42, 0, &g))?;
        println!("{threads} threads: mean {:.17}", s[0].mean);
        means.push(s[0].mean.to_bits());
    }
    assert!(means.windows(2).all(|w| w[0] == w[1]));
    Ok(())
}
