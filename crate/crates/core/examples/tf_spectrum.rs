//! Spectrum of the Thomas-Fermi potential for one atom: counts, eigensum,
//! and the density of the lowest Z orbitals compared with the TF density.

use std::sync::Arc;

use tfbound::spectrum::{full_spectrum, occupied_density, RadialPotential, SpectrumOptions};
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let z: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let tf = Arc::new(solve_tf(DEFAULT_TOLERANCE)?);
    let zf = f64::from(z);
    let s = full_spectrum(&RadialPotential::thomas_fermi(tf.clone(), zf), &SpectrumOptions::default())?;

    println!("Z = {z}: {} negative states in {} levels, l_max = {:?}", s.n_negative, s.levels.len(), s.ell_max);
    println!("eigensum / Z^(7/3) = {:.5}  (semiclassical limit -0.5125)", s.eigensum / zf.powf(7.0 / 3.0));
    for &i in s.filling_order().iter().take(10) {
        let l = &s.levels[i];
        println!("  l={} n_r={} E={:.6}", l.ell, l.n_r, l.energy);
    }

    let occ = occupied_density(&s, zf)?;
    println!(
        "lowest {} states: eigensum {:.4}, {} unfilled, density norm {:.6}",
        occ.occupied,
        occ.occupied_eigensum,
        occ.deficit,
        occ.density.total_norm()
    );
    let r = 1.0 / zf.powf(1.0 / 3.0);
    println!("n(r) / rho_TF(r) at r = Z^(-1/3): {:.4}", occupied_ratio(&occ.density, &tf, zf, r)?);
    Ok(())
}

fn occupied_ratio(
    n: &tfbound::density::DensityProfile,
    tf: &tfbound::tf_model::TfSolution,
    z: f64,
    r: f64,
) -> tfbound::Result<f64> {
    let nodes = n.grid().nodes();
    let i = nodes.partition_point(|&x| x < r).min(nodes.len() - 1);
    Ok(n.values()[i] / tf.density_unscaled(z, nodes[i])?)
}
