//! One LL step on the sine pendulum, across variants and step sizes.
//!
//! cargo run --release --example local_increment

use nalgebra::dvector;
use weak_ll::llcore::{increment, step, SchemeConfig, Variant};
use weak_ll::model::builtin_problem;
use weak_ll::weakmc::trajectory_rng;

fn main() -> weak_ll::Result<()> {
    let p = builtin_problem("pendulum-sin")?;
    let model = p.model.as_ref();
    let y = dvector![2.0];
    for h in [0.25, 0.0625] {
        println!("h = {h}");
        for v in Variant::ALL {
            for beta in [1, 2] {
                let cfg = SchemeConfig::new(v, beta);
                if cfg.check_model(model).is_err() {
                    continue;
                }
                let inc = increment(&cfg, model, 0.0, &y, h)?;
                println!(
                    "  {:<22} phi = {:+.12}  sigma = {:.12}",
                    cfg.label(),
                    inc.phi[0],
                    inc.sigma[(0, 0)]
                );
            }
        }
    }
    let mut rng = trajectory_rng(1, 0);
    let next = step(&SchemeConfig::new(Variant::PadeGeneral, 2), model, 0.0, &y, 0.25, &mut rng)?;
    println!("sampled next state {:.6}", next[0]);
    Ok(())
}
