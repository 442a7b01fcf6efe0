//! Upper and lower bounds on the ground-state energy at one nuclear charge,
//! with the pieces that make them up.

use std::sync::Arc;

use tfbound::bounds::{BoundsRow, BoundsSetup, DEFAULT_ALPHA};
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let z: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(400);
    let setup = BoundsSetup::new(Arc::new(solve_tf(DEFAULT_TOLERANCE)?));
    let row = BoundsRow::compute(z, DEFAULT_ALPHA, &setup)?;

    let u = &row.upper;
    println!("upper bound at Z = {z}");
    println!("  eigensum of lowest {} states  {:.4}", u.occupied_count, u.eigensum_part);
    println!("  interaction bound             {:.4}", u.f_z_bound);
    println!("  total {:.4}   scaled {:.6}", u.total, u.scaled);

    let l = &row.lower;
    println!("lower bound at Z = {z} (alpha = {})", l.alpha);
    println!("  eigensum                      {:.4}", l.eigensum_part);
    println!("  Hartree subtraction           {:.4}", l.hartree_sub);
    println!("  correction                    {:.4}", l.correction);
    println!("  total {:.4}   scaled {:.6}", l.total, l.scaled);
    println!("gap {:.4} (scaled {:.6})", row.gap, row.scaled_gap());
    Ok(())
}
