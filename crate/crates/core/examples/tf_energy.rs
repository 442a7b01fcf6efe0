//! Energy terms of the scaled Thomas-Fermi density, the virial check, and
//! the semiclassical eigenvalue sum computed two ways.

use tfbound::density::{default_grid, DensityProfile};
use tfbound::tf_energy::{energy_breakdown, semiclassical_eigensum, ScaledPotential};
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let tf = solve_tf(DEFAULT_TOLERANCE)?;
    let grid = default_grid();
    let rho = DensityProfile::thomas_fermi(&tf, grid.clone())?;
    let e = energy_breakdown(&rho)?;
    println!("normalization  {:.10}", rho.total_norm());
    println!("kinetic        {:.8}", e.kinetic);
    println!("attraction     {:.8}", e.attraction);
    println!("hartree        {:.8}", e.hartree);
    println!("total          {:.8}  (-(3/7)B/b0 = {:.8})", e.total, -3.0 / 7.0 * tf.slope_b / tf.b0);
    println!("virial 2K+U    {:.2e}", e.virial_residual());

    let v = ScaledPotential::thomas_fermi(&tf, grid)?;
    println!("eigensum, phase space   {:.8}", semiclassical_eigensum(&v)?);
    println!("eigensum, K + U_en + 2U_ee {:.8}", e.kinetic + e.attraction + 2.0 * e.hartree);

    // a neutral atom of charge Z has energy Z^{7/3} times the scaled total
    for z in [1.0f64, 10.0, 100.0] {
        println!("E_TF(Z={z}) = {:.4}", e.total * z.powf(7.0 / 3.0));
    }
    Ok(())
}
