//! The transform from the density of `X` to the zonal density of `Z`, its
//! closed form for the Cayley family, and the inverse transform.
//!
//! ```bash
//! cargo run --release --example transform_pair
//! ```

use conjrot::distributions::{fx_density, fz_closed_cayley, DistributionSpec};
use conjrot::moments::{fx_from_fz, fz_from_fx};

pub fn run() -> conjrot::Result<()> {
    for kappa in [0.0, 1.0, 3.0] {
        let spec = DistributionSpec::cayley(kappa)?;
        println!("cayley κ = {kappa}");
        for s in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            println!(
                "  f_Z({s:>4}) = {:.12}   closed {:.12}",
                fz_from_fx(&spec, s)?,
                fz_closed_cayley(kappa, s)?
            );
        }
    }
    let spec = DistributionSpec::fisher_von_mises(1.5)?;
    println!("fvm κ = 1.5, round trip");
    for x in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let back = fx_from_fz(|s| fz_from_fx(&spec, s).unwrap_or(f64::NAN), x)?;
        println!("  f_X({x}) = {:.10}   recovered {:.10}", fx_density(&spec, x)?, back);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> conjrot::Result<()> {
    run()
}
