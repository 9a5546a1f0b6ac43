//! Empirical deviation tails of `btr e^{i theta G}` against a sub-Gaussian bound.

use haarforge::ensembles::{GueExpSampler, UnitarySampler};
use haarforge::ratmarkov::calibrate_theta;
use haarforge::statlab::concentration_tail;

fn main() -> haarforge::Result<()> {
    let (n, theta) = (64, calibrate_theta(1)?);
    let sampler = GueExpSampler {
        dim: n,
        theta,
        seed: 5,
    };
    let s = 2.0 * theta * theta;
    let grid: Vec<f64> = (1..=8).map(|j| 0.01 * j as f64).collect();
    let rows = concentration_tail(
        |i| Ok(sampler.moments(i as u64, 1)?.entries()[0]),
        |t| (-(n as f64) * t * t / s).exp(),
        &grid,
        1000,
    )?;
    println!(
        "{:>6} {:>10} {:>22} {:>10}",
        "t", "empirical", "Wilson interval", "bound"
    );
    for r in rows {
        println!(
            "{:>6.3} {:>10.4} [{:.4}, {:.4}] {:>10.4}{}",
            r.t,
            r.empirical,
            r.lower,
            r.upper,
            r.bound,
            if r.flagged { "  !" } else { "" }
        );
    }
    Ok(())
}
