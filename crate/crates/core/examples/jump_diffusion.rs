//! OU with Poisson jumps: one annotated path and the terminal mean against
//! its closed form.
//!
//! cargo run --release --example jump_diffusion

use weak_ll::grid::TimeGrid;
use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, Reference, TestFunctional};
use weak_ll::weakmc::{simulate_path, terminal_moments, trajectory_rng, Method};

fn main() -> weak_ll::Result<()> {
    let p = builtin_problem("jump-ou")?;
    let method = Method::Ll(SchemeConfig::new(Variant::PadeConstG, 2));
    let grid = TimeGrid::uniform(p.t0, p.t_end, 0.125)?;
    let path = simulate_path(
        &method,
        p.model.as_ref(),
        p.jumps.as_ref(),
        &p.initial.draw(&mut trajectory_rng(2, 0)),
        &grid,
        &mut trajectory_rng(2, 0),
    )?;
    for pt in &path {
        let mark = if pt.jumps.is_empty() { "" } else { "  <- jump" };
        println!("{:.6}  {:+.5}{mark}", pt.t, pt.x[0]);
    }

    let exact = match &p.reference {
        Reference::Moments { mean, .. } => mean[0],
        _ => unreachable!(),
    };
    let s = terminal_moments(&method, &p, 0.25, 100_000, 5, 0, &[TestFunctional::component(0)])?;
    println!("terminal mean {:.5} +- {:.5}, exact {exact:.5}", s[0].mean, s[0].stderr());
    Ok(())
}
