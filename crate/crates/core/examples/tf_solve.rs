//! Solves the Thomas-Fermi equation and prints the initial slope, a few
//! values of the screening function, and the large-x tail.

use tfbound::tf_model::{solve_tf, DEFAULT_TOLERANCE};

fn main() -> tfbound::Result<()> {
    let tf = solve_tf(DEFAULT_TOLERANCE)?;
    println!("B = -phi'(0) = {:.12}", tf.slope_b);
    println!("table: {} points up to x = {:e}", tf.phi_table.len(), tf.tail_match_x);
    println!("{:>10} {:>16} {:>16} {:>16}", "x", "phi", "phi'", "144/x^3");
    for x in [0.1, 1.0, 10.0, 100.0, 1e3, 1e4, 1e6] {
        let (phi, dphi) = tf.phi_and_derivative(x)?;
        println!("{x:>10} {phi:>16.9e} {dphi:>16.9e} {:>16.9e}", 144.0 / (x * x * x));
    }
    Ok(())
}
