//! A single exponential `e^{i theta G}` kills only the first moment; a product of two kills them all.

use haarforge::ensembles::{GueExpSampler, GueProductSampler};
use haarforge::ratmarkov::calibrate_theta;
use haarforge::statlab::{mc_trace_moments, moment_l1};

fn main() -> haarforge::Result<()> {
    let theta = calibrate_theta(1)?;
    let (n, samples, p_max) = (128, 200, 6);
    let single = mc_trace_moments(
        &GueExpSampler {
            dim: n,
            theta,
            seed: 3,
        },
        p_max,
        samples,
    )?;
    let product = mc_trace_moments(
        &GueProductSampler {
            dim: n,
            theta,
            seed: 3,
        },
        p_max,
        samples,
    )?;
    println!("N = {n}, theta = {theta:.6}, {samples} samples");
    println!("{:>3} {:>16} {:>16}", "p", "|E btr e^{ipG}|", "|E btr W^p|");
    for (a, b) in single.rows.iter().zip(&product.rows) {
        println!(
            "{:>3} {:>16.5} {:>16.5}",
            a.p,
            a.mean().norm(),
            b.mean().norm()
        );
    }
    println!(
        "l1: single {:.4}, product {:.4}",
        moment_l1(&single).0,
        moment_l1(&product).0
    );
    Ok(())
}
