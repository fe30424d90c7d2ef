//! Fine-grid Monte Carlo estimate of `E x1(T)` for a catalog problem, printed
//! in the form stored by the catalog.
//!
//! cargo run --release --example compute_reference -- pendulum-sin --h-exp 10 --samples 4000000

use clap::Parser;
use weak_ll::llcore::{SchemeConfig, Variant};
use weak_ll::model::{builtin_problem, TestFunctional};
use weak_ll::weakmc::{terminal_moments, Method, REFERENCE_LEVEL};

#[derive(Parser)]
struct Args {
    problem: String,
    #[arg(long, default_value_t = 10)]
    h_exp: i32,
    #[arg(long, default_value_t = 4_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 20_240_611)]
    seed: u64,
    #[arg(long, default_value = "pade-const-g")]
    variant: Variant,
}

fn main() -> weak_ll::Result<()> {
    let args = Args::parse();
    let problem = builtin_problem(&args.problem)?;
    let method = Method::Ll(SchemeConfig::new(args.variant, 2));
    let h = 2f64.powi(-args.h_exp);
    let functionals = [TestFunctional::component(0)];
    let start = std::time::Instant::now();
    let m = terminal_moments(&method, &problem, h, args.samples, args.seed, REFERENCE_LEVEL, &functionals)?;
    eprintln!("elapsed {:.1} s", start.elapsed().as_secs_f64());
    println!("(\"x1\", {:.17e}, {:.17e}),", m[0].mean, m[0].stderr());
    Ok(())
}
