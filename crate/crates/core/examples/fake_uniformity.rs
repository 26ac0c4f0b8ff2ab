//! `τ₂(κ) − 1/3` for both families, the Cayley zero at κ = 1, and the
//! slope at κ = 0 that predicts it.
//!
//! ```bash
//! cargo run --release --example fake_uniformity
//! ```

use conjrot::fake_uniformity::{
    cayley_tau2_closed, find_fake_uniformity, initial_slope, initial_slope_of, scan_curve,
    tau2_of_kappa,
};
use conjrot::Family;

pub fn run() -> conjrot::Result<()> {
    let cayley = scan_curve(Family::CayleyLmr, 1.0, 11)?;
    let fvm = scan_curve(Family::FisherVonMises, 1.0, 11)?;
    println!("{:>6} {:>14} {:>14}", "kappa", "cayley", "fvm");
    for (c, f) in cayley.iter().zip(&fvm) {
        println!("{:>6.2} {:>14.6e} {:>14.6e}", c.kappa, c.tau2_minus_third, f.tau2_minus_third);
    }
    let kmin = 2f64.sqrt() - 1.0;
    println!("cayley minimum at κ = √2 − 1: {:.6e}", cayley_tau2_closed(kmin) - 1.0 / 3.0);

    for family in [Family::CayleyLmr, Family::FisherVonMises] {
        let root = find_fake_uniformity(family, 0.1, 5.0, 1e-12)?;
        let slope = initial_slope(family, 1e-3)?;
        println!("{family}: slope at 0 = {slope:.8}, zero in (0.1, 5): {root:?}");
    }
    let doubled = initial_slope_of(|k| tau2_of_kappa(Family::CayleyLmr, 0.5 * k), 1e-3)?;
    println!("cayley with κ̃ = 2κ: slope = {doubled:.8}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
