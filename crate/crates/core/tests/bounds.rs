use std::sync::Arc;

use tfbound::bounds::{
    convergence_table, direct_interaction_bound, energy_scale, exchange_energy, lower_bound, regularized_density,
    upper_bound, BoundsRow, BoundsSetup,
};
use tfbound::density::{default_grid, DensityProfile};
use tfbound::spectrum::{full_spectrum, occupations, occupied_density, RadialPotential};
use tfbound::tf_energy::{energy_breakdown, semiclassical_eigensum, ScaledPotential};
use tfbound::tf_model::{solve_tf, TfSolution, DEFAULT_TOLERANCE};

fn setup() -> BoundsSetup {
    BoundsSetup::new(Arc::new(solve_tf(DEFAULT_TOLERANCE).unwrap()))
}

/// `Z² ρ_TF(Z^{1/3} r)` on the default grid mapped to `r`.
fn tf_density_unscaled(tf: &TfSolution, z: f64) -> DensityProfile {
    let scaled = default_grid();
    let grid = Arc::new(scaled.scaled(z.powf(-1.0 / 3.0)));
    DensityProfile::from_fn_checked(grid, |r| tf.density_unscaled(z, r), -1.5, -6.0).unwrap()
}

#[test]
fn exact_occupied_density_reduces_to_thomas_fermi_energy() {
    let s = setup();
    let z = 100.0;
    let n = tf_density_unscaled(&s.tf, z);
    let f = direct_interaction_bound(&n, &n).unwrap() / z.powf(7.0 / 3.0);
    let eig = semiclassical_eigensum(&ScaledPotential::thomas_fermi(&s.tf, default_grid()).unwrap()).unwrap();
    let e_tf = energy_breakdown(&DensityProfile::thomas_fermi(&s.tf, default_grid()).unwrap()).unwrap();
    assert!((f + e_tf.hartree).abs() < 1e-6, "{f}");
    assert!((eig + f - e_tf.total).abs() < 1e-5);
    assert!((eig + f + 0.7687).abs() < 1e-3);
}

#[test]
fn hydrogen_upper_bound_smoke() {
    let u = upper_bound(1, &setup()).unwrap();
    assert!(u.total.is_finite() && u.f_z_bound.is_finite());
    assert_eq!(u.occupied_count, 1.min(u.n_negative));
    assert_eq!(u.total, u.eigensum_part + u.f_z_bound);
}

#[test]
fn upper_bound_invariants_at_z100() {
    let u = upper_bound(100, &setup()).unwrap();
    assert_eq!(u.total, u.eigensum_part + u.f_z_bound);
    assert!(u.eigensum_part < 0.0);
    assert_eq!(u.occupied_count, 100);
    assert_eq!(u.occupied_deficit, 0);
    assert!((u.scaled - u.total / energy_scale(100)).abs() == 0.0);
}

#[test]
fn regularized_density_properties() {
    let s = setup();
    let z = 400;
    let zf = f64::from(z);
    let rho = regularized_density(z, 1.0, &s.tf, &s.scaled_grid).unwrap();
    assert!(rho.total_norm() <= zf);
    let nodes = rho.grid().nodes();
    let last = nodes.len() - 1;
    let want = s.tf.density_unscaled(zf, nodes[last]).unwrap();
    assert!((rho.values()[last] - want).abs() <= 1e-14 * want);
    // at R = 1/(Zα) the factor is √(1 − 1/e)
    let big_r = 1.0 / zf;
    let r = big_r / zf.powf(1.0 / 3.0);
    let i = nodes.iter().position(|&x| x >= r).unwrap();
    let factor = rho.values()[i] / s.tf.density_unscaled(zf, nodes[i]).unwrap();
    let x = zf * nodes[i] * zf.powf(1.0 / 3.0);
    assert!((factor - (1.0 - (-x).exp()).sqrt()).abs() < 1e-12);
    assert!((((1.0 - (-1.0f64).exp()).sqrt()) - 0.795_060_1).abs() < 1e-7);
    assert!(regularized_density(z, 0.0, &s.tf, &s.scaled_grid).is_err());
    assert!(lower_bound(z, -1.0, &s).is_err());
}

#[test]
fn squared_density_grows_slowly() {
    let s = setup();
    let scaled_sq = |z: u32| {
        let rho = regularized_density(z, 1.0, &s.tf, &s.scaled_grid).unwrap();
        rho.integrate_power(2.0).unwrap() / f64::from(z).powi(3)
    };
    let values = [100, 400, 1600, 6400].map(scaled_sq);
    for w in values.windows(2) {
        let ratio = w[1] / w[0];
        assert!(ratio > 1.0 && ratio <= 1.6, "{values:?}");
    }
}

#[test]
fn neglected_exchange_only_lowers_the_energy() {
    let s = setup();
    let z = 10.0;
    let spec = full_spectrum(&RadialPotential::thomas_fermi(s.tf.clone(), z), &s.spectrum).unwrap();
    let occ = occupations(&spec, z);
    let x = exchange_energy(&spec, &occ).unwrap();
    let dens = occupied_density(&spec, z).unwrap();
    let n = DensityProfile::from_fn_checked(dens.density.grid().clone(), |r| s.tf.density_unscaled(z, r), -1.5, -6.0)
        .unwrap();
    let f = direct_interaction_bound(&n, &dens.density).unwrap();
    assert!(x < 0.0);
    assert!(f + x <= f);
    // Dirac estimate −0.2208 Z^{5/3} sets the magnitude
    let dirac = -0.2208 * z.powf(5.0 / 3.0);
    assert!(x / dirac > 0.5 && x / dirac < 2.0, "{x} vs {dirac}");
}

#[test]
fn single_charge_gives_degenerate_fit() {
    let t = convergence_table(&[100], 1.0, &setup()).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!(t.fit.upper_intercept.is_none() && t.fit.lower_intercept.is_none());
    assert!(convergence_table(&[], 1.0, &setup()).is_err());
    assert!(convergence_table(&[400, 100], 1.0, &setup()).is_err());
}

#[test]
fn rows_sandwich_and_are_thread_count_independent() {
    let s = setup();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| BoundsRow::compute(100, 1.0, &s).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    assert!(a.gap >= 0.0);
    assert!(a.lower.hartree_sub > 0.0 && a.lower.correction > 0.0);
    assert_eq!(a.lower.total, a.lower.eigensum_part - a.lower.hartree_sub - a.lower.correction);
}
