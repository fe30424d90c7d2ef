//! Lyapunov pencil solve and the PSD square root used to sample increments.
//!
//! cargo run --release --example covariance_kernels

use nalgebra::dmatrix;
use weak_ll::linalg::{psd_sqrt, solve_pencil};

fn main() -> weak_ll::Result<()> {
    let a = dmatrix![-1.0, 0.5; -0.5, -2.0];
    let q = dmatrix![1.0, 0.2; 0.2, 0.5];
    // Stationary covariance of dx = A x dt + G dW with G G^T = Q solves A P + P A^T = -Q.
    let p = solve_pencil(&a, &(-&q))?;
    println!("stationary covariance:\n{p:.10}");
    println!("residual {:.3e}", (&a * &p + &p * a.transpose() + &q).amax());

    let s = psd_sqrt(&p)?;
    println!("square root:\n{s:.10}");
    println!("reconstruction error {:.3e}", (&s * &s - &p).amax());

    // Rank-deficient covariance.
    let r = dmatrix![1.0, 1.0; 1.0, 1.0];
    let sr = psd_sqrt(&r)?;
    println!("rank-one root:\n{sr:.10}");
    Ok(())
}
