//! Sweeps the nuclear charge and extrapolates both scaled bounds to Z → ∞
//! with a fit in Z^(-1/3).

use std::sync::Arc;

use tfbound::bounds::{convergence_table, BoundsSetup, DEFAULT_ALPHA, DEFAULT_Z_SWEEP};
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let tf = Arc::new(solve_tf(DEFAULT_TOLERANCE)?);
    let e_tf = tf.energy_coefficient();
    let table = convergence_table(&DEFAULT_Z_SWEEP, DEFAULT_ALPHA, &BoundsSetup::new(tf))?;

    println!("{:>6} {:>12} {:>12} {:>12}", "Z", "upper", "lower", "correction");
    for r in &table.rows {
        println!(
            "{:>6} {:>12.6} {:>12.6} {:>12.6}",
            r.z,
            r.upper.scaled,
            r.lower.scaled,
            r.lower.correction / f64::from(r.z).powf(7.0 / 3.0)
        );
    }
    let f = &table.fit;
    println!("Z → ∞: upper {:?}, lower {:?}, TF {e_tf:.6}", f.upper_intercept, f.lower_intercept);
    Ok(())
}
