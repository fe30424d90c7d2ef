//! Padé scaling-and-squaring exponential and the Krylov action `e^A v`.
//!
//! cargo run --release --example matrix_exponential

use nalgebra::dmatrix;
use weak_ll::linalg::{krylov_expmv, pade_expm, KrylovConfig, Matrix, PadeConfig, Vector};

fn main() -> weak_ll::Result<()> {
    // Rotation generator: e^{theta J} is a rotation by theta.
    let theta = 1.2;
    let j = dmatrix![0.0, -theta; theta, 0.0];
    let r = pade_expm(&j, &PadeConfig::default())?;
    println!("rotation by {theta}:\n{r:.12}");
    println!("cos = {:.15}, sin = {:.15}", theta.cos(), theta.sin());

    // Low-order approximants with more squarings.
    for (p, q) in [(1, 1), (2, 2), (6, 6)] {
        let e = pade_expm(&j, &PadeConfig::new(p, q))?;
        println!("({p},{q}) error {:.3e}", (&e - &r).amax());
    }

    // Krylov action on a 200x200 tridiagonal matrix.
    let n = 200;
    let a = Matrix::from_fn(n, n, |i, k| match i.abs_diff(k) {
        0 => -2.0,
        1 => 1.0,
        _ => 0.0,
    }) * 0.5;
    let v = Vector::from_element(n, 1.0);
    let full = pade_expm(&a, &PadeConfig::default())? * &v;
    for m in [5, 10, 20, 30] {
        let w = krylov_expmv(&a, &v, &KrylovConfig::with_m(m))?;
        println!("krylov m={m:<2} error {:.3e}", (&w - &full).amax());
    }
    Ok(())
}
