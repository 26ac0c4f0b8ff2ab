//! Moments of the corner entry `Z = e₃ᵀPe₃` three ways: through the
//! G-recursion integral, through `ρ₁, ρ₂`, and by simulation.
//!
//! ```bash
//! cargo run --release --example moment_bridge
//! ```

use conjrot::distributions::{DistributionSpec, RotationSampler};
use conjrot::moments::{rho_moment, tau_from_rho, tau_k, tau_rho_coefficients};
use conjrot::rng::seeded_rng;
use conjrot::so3::Rotation;
use conjrot::stats::RunningMoments;

pub fn run() -> conjrot::Result<()> {
    println!("τ₂ = Σ c_j ρ_j with c = {:?}", tau_rho_coefficients(2));
    let mut rng = seeded_rng(5);
    let n = 100_000;
    for spec in [
        DistributionSpec::cayley(0.5)?,
        DistributionSpec::cayley(2.0)?,
        DistributionSpec::fisher_von_mises(1.0)?,
    ] {
        let (t1, t2) = tau_from_rho(rho_moment(&spec, 1)?, rho_moment(&spec, 2)?);
        let sampler = RotationSampler::new(&spec);
        let (mut z1, mut z2) = (RunningMoments::new(), RunningMoments::new());
        for _ in 0..n {
            let p: Rotation = rand::Rng::sample(&mut rng, sampler);
            let z = p.matrix()[(2, 2)];
            z1.push(z);
            z2.push(z * z);
        }
        println!("{} κ = {}", spec.family(), spec.kappa());
        println!("  τ₁: recursion {:.10}  from ρ {:.10}  mc {:.5} ± {:.5}", tau_k(&spec, 1)?, t1, z1.mean(), z1.estimate().std_error);
        println!("  τ₂: recursion {:.10}  from ρ {:.10}  mc {:.5} ± {:.5}", tau_k(&spec, 2)?, t2, z2.mean(), z2.estimate().std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
