use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tfbound::density::{default_grid, DensityProfile};
use tfbound::tf_energy::{energy_breakdown, minimize_tf_functional, semiclassical_eigensum, ScaledPotential};
use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

#[test]
fn thomas_fermi_density_minimizes_the_functional() {
    let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
    let grid = default_grid();
    let tf = DensityProfile::thomas_fermi(&sol, grid.clone()).unwrap();
    let e_tf = energy_breakdown(&tf).unwrap().total;
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..10 {
        let a: [f64; 3] = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
        let w: f64 = rng.gen_range(0.2..1.5);
        let bumped = tf
            .values()
            .iter()
            .zip(grid.nodes())
            .map(|(v, r)| {
                let s = r.ln() * w;
                v * (1.0 + a[0] * s.sin() + a[1] * (2.0 * s).cos() + a[2] * (-r).exp())
            })
            .collect();
        let p = DensityProfile::new(grid.clone(), bumped, -1.5, -6.0).unwrap();
        let p = p.scaled(1.0 / p.total_norm()).unwrap();
        let e = energy_breakdown(&p).unwrap().total;
        assert!(e >= e_tf, "{e} < {e_tf}");
    }
}

#[test]
fn minimizer_reaches_the_ode_solution_and_zero_chemical_potential() {
    let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
    let grid = default_grid();
    let tf = DensityProfile::thomas_fermi(&sol, grid.clone()).unwrap();
    let init = DensityProfile::from_fn(grid.clone(), |r| r * r * (-2.0 * r).exp(), 2.0, f64::NEG_INFINITY).unwrap();
    let init = init.scaled(1.0 / init.total_norm()).unwrap();
    let out = minimize_tf_functional(&grid, &init, 0.5, 5000).unwrap();
    assert!(out.converged);
    assert!(out.density.l1_distance(&tf).unwrap() <= 1e-3);
    assert!(out.chemical_potential.abs() <= 1e-3);
    assert!(out.gradient_norm <= 1e-3);
    let e = energy_breakdown(&tf).unwrap().total;
    assert!((out.energy - e).abs() <= 1e-6 * e.abs());
}

#[test]
fn eigensum_matches_term_by_term_sum() {
    let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
    let grid = default_grid();
    let tf = DensityProfile::thomas_fermi(&sol, grid.clone()).unwrap();
    let e = energy_breakdown(&tf).unwrap();
    let sc = semiclassical_eigensum(&ScaledPotential::thomas_fermi(&sol, grid).unwrap()).unwrap();
    assert!((sc - e.eigensum_semiclassical).abs() <= 1e-5 * sc.abs());
    // the closed form reduces to −(2/3) of the kinetic term
    assert!((sc + 2.0 / 3.0 * e.kinetic).abs() <= 1e-5 * sc.abs());
}

#[test]
fn breakdown_serializes_with_fixed_keys() {
    let sol = solve_tf(DEFAULT_TOLERANCE).unwrap();
    let tf = DensityProfile::thomas_fermi(&sol, default_grid()).unwrap();
    let json = serde_json::to_value(energy_breakdown(&tf).unwrap()).unwrap();
    let mut keys = json.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    keys.sort();
    assert_eq!(keys, ["attraction", "eigensum_semiclassical", "hartree", "kinetic", "total"]);
}
