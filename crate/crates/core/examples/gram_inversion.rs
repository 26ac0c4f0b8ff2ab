//! Expected Gram matrix of randomly rotated, projected landmarks; exact and
//! naive recovery of the landmark Gram matrix; and the Cayley κ = 1 case
//! where projections look exactly like Haar.
//!
//! ```bash
//! cargo run --release --example gram_inversion
//! ```

use conjrot::distributions::DistributionSpec;
use conjrot::moments::tau_k;
use conjrot::radon::{
    expected_projected_gram, gram, limit_gram_kappa_infinity, mc_projected_gram_with_error,
    modal_third_row, naive_recover_gram, recover_gram, LandmarkMatrix,
};
use conjrot::rng::seeded_rng;
use conjrot::so3::{AxisAngle, Rotation, UnitVector3};
use nalgebra::Vector3;

pub fn run() -> conjrot::Result<()> {
    let v = LandmarkMatrix::from_columns(&[
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.0, 0.6, 0.8),
        Vector3::new(-0.5, 0.5, 0.7),
        Vector3::new(0.2, -0.9, 0.1),
    ])?;
    let axis = UnitVector3::normalize(Vector3::new(1.0, 2.0, -1.0))?;
    let m = Rotation::from_axis_angle(&AxisAngle::new(axis, 1.1)?);
    let truth = gram(&v);
    let w = modal_third_row(&m, &v);
    let mut rng = seeded_rng(11);

    for (label, spec) in [
        ("haar", DistributionSpec::haar()),
        ("cayley κ=1", DistributionSpec::cayley(1.0)?.with_modal(m)),
        ("cayley κ=2", DistributionSpec::cayley(2.0)?.with_modal(m)),
        ("fvm κ=1", DistributionSpec::fisher_von_mises(1.0)?.with_modal(m)),
    ] {
        let tau2 = tau_k(&spec, 2)?;
        let closed = expected_projected_gram(&spec, &v)?;
        let mc = mc_projected_gram_with_error(&spec, &v, 50_000, &mut rng)?;
        let exact = recover_gram(&closed, tau2, &w)?;
        let naive = naive_recover_gram(&closed);
        println!("{label:<11} τ₂ = {tau2:.6}");
        println!("  closed vs mc: max |Δ| = {:.2e}, max z = {:.2}", closed.max_abs_diff(&mc.mean), mc.max_z_score(&closed));
        println!("  exact recovery error  {:.2e}", exact.max_abs_diff(&truth));
        println!("  naive recovery error  {:.2e}", naive.max_abs_diff(&truth));
    }

    let spec = DistributionSpec::cayley(5000.0)?.with_modal(m);
    let gap = expected_projected_gram(&spec, &v)?.max_abs_diff(&limit_gram_kappa_infinity(&m, &v));
    println!("cayley κ=5000 vs concentrated limit: max |Δ| = {gap:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
