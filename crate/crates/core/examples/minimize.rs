//! Minimizes the Thomas-Fermi functional directly, starting from a hydrogen
//! ground-state density, and compares with the density from the ODE.

use tfbound::density::{default_grid, DensityProfile};
use tfbound::tf_energy::minimize_tf_functional;
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let grid = default_grid();
    let guess = DensityProfile::from_fn(grid.clone(), |r| (-2.0 * r).exp(), 0.0, f64::NEG_INFINITY)?;
    let guess = guess.scaled(1.0 / guess.total_norm())?;

    let out = minimize_tf_functional(&grid, &guess, 1.0, 5000)?;
    let reference = DensityProfile::thomas_fermi(&solve_tf(DEFAULT_TOLERANCE)?, grid)?;

    println!("converged {} after {} iterations", out.converged, out.iterations);
    println!("energy             {:.8}", out.energy);
    println!("chemical potential {:.2e}", out.chemical_potential);
    println!("L1 distance to ODE {:.2e}", out.density.l1_distance(&reference)?);
    if let Some(note) = &out.diagnostic {
        println!("note: {note}");
    }
    Ok(())
}
