//! Accuracy of the Bayes rule between two shifted Cayley laws as the
//! separation angle grows, checked against simulation.
//!
//! ```bash
//! cargo run --release --example bayes_classifier
//! ```

use conjrot::classifier::{mc_accuracy, psi_closed, psi_derivative, psi_theta_form, ClassPair};
use conjrot::distributions::DistributionSpec;
use conjrot::rng::seeded_rng;

pub fn run() -> conjrot::Result<()> {
    let mut rng = seeded_rng(3);
    for kappa in [0.0, 1.0, 5.0] {
        let common = DistributionSpec::cayley(kappa)?;
        println!("cayley κ = {kappa}");
        println!("  {:>5} {:>10} {:>10} {:>10} {:>10} {:>6}", "alpha", "psi", "theta-form", "psi'", "mc", "z");
        for alpha in [0.25, 0.5, 1.0, 2.0, 3.0] {
            let pair = ClassPair::canonical(alpha, common)?;
            let psi = psi_closed(&pair)?;
            let mc = mc_accuracy(&pair, 40_000, &mut rng)?;
            println!(
                "  {:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>6.2}",
                alpha,
                psi,
                psi_theta_form(pair.common(), alpha)?,
                psi_derivative(&pair)?,
                mc.mean,
                mc.z_score(psi)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
