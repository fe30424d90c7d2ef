//! Log-log order fitting with noise-floor exclusion.
//!
//! cargo run --release --example order_fit

use weak_ll::weakmc::{fit_above_noise_floor, fit_order};

fn main() {
    let exact: Vec<(f64, f64)> = (1..=5).map(|k| 2f64.powi(-k)).map(|h| (h, 3.0 * h.powf(1.5))).collect();
    println!("3 h^1.5: {:?}", fit_order(&exact));

    // The two smallest step sizes sit below three standard errors.
    let noisy = [
        (0.25, 2.0e-2, 1e-3),
        (0.125, 5.1e-3, 1e-3),
        (0.0625, 1.3e-3, 1e-4),
        (0.03125, 2.0e-4, 1e-4),
        (0.015625, 1.0e-4, 1e-4),
    ];
    println!("with floor: {:?}", fit_above_noise_floor(&noisy));
    println!("all at floor: {:?}", fit_above_noise_floor(&noisy[3..]).status());
}
