//! Bound levels of a bare Coulomb potential against the exact -Z^2/2n^2.

use tfbound::spectrum::{full_spectrum, RadialPotential, SpectrumOptions};

fn main() -> tfbound::Result<()> {
    let z = 10.0;
    let opts = SpectrumOptions {
        energy_ceiling: -z * z / 60.0,
        ..Default::default()
    };
    let s = full_spectrum(&RadialPotential::coulomb(z), &opts)?;
    println!("{:>3} {:>3} {:>3} {:>20} {:>10}", "n", "l", "deg", "energy", "rel. err");
    for l in &s.levels {
        let n = l.n_r + l.ell + 1;
        let exact = -0.5 * z * z / (n * n) as f64;
        println!(
            "{n:>3} {:>3} {:>3} {:>20.12} {:>10.1e}",
            l.ell,
            l.degeneracy,
            l.energy,
            ((l.energy - exact) / exact).abs()
        );
    }
    println!("{} states below {:.3}", s.n_negative, opts.energy_ceiling);
    Ok(())
}
