//! Draws rotations from each family and compares the sample mean of
//! `X = cos²(Θ/2)` with its exact value.
//!
//! ```bash
//! cargo run --release --example rotation_sampling
//! ```

use conjrot::distributions::{DistributionSpec, RotationSampler};
use conjrot::moments::rho_moment;
use conjrot::rng::seeded_rng;
use conjrot::so3::{AxisAngle, Rotation, UnitVector3};
use conjrot::stats::RunningMoments;

pub fn run() -> conjrot::Result<()> {
    let modal = Rotation::from_axis_angle(&AxisAngle::new(UnitVector3::e2(), 0.8)?);
    let specs = [
        DistributionSpec::haar(),
        DistributionSpec::cayley(1.0)?.with_modal(modal),
        DistributionSpec::cayley(4.0)?.with_modal(modal),
        DistributionSpec::fisher_von_mises(2.0)?.with_modal(modal),
    ];
    let mut rng = seeded_rng(2024);
    let n = 50_000;
    println!("{:<8} {:>6} {:>12} {:>12} {:>8}", "family", "kappa", "E[X] exact", "E[X] mc", "z");
    for spec in &specs {
        let sampler = RotationSampler::new(spec);
        let mut x = RunningMoments::new();
        let mut worst = 0.0f64;
        for _ in 0..n {
            let s = sampler.sample_detailed(&mut rng);
            worst = worst.max(s.rotation.invariant_error());
            x.push(s.x);
        }
        let exact = rho_moment(spec, 1)?;
        let est = x.estimate();
        println!(
            "{:<8} {:>6.2} {:>12.6} {:>12.6} {:>8.2}",
            spec.family(),
            spec.kappa(),
            exact,
            est.mean,
            est.z_score(exact)
        );
        assert!(worst < 1e-12);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
