//! Deterministic diagonal matrices whose low moments match the semicircle.

use haarforge::ensembles::{semicircle_diagonal, semicircle_moment};

fn main() -> haarforge::Result<()> {
    for (n, q) in [(64, 2), (1024, 4), (4096, 8)] {
        let d = semicircle_diagonal(n, q)?;
        let worst = (1..=q as u32)
            .map(|k| {
                let dev = (d.normalized_power_trace(k).re - semicircle_moment(k)).abs();
                dev / (2f64.powi(k as i32) * (2 * q + 4) as f64 / n as f64)
            })
            .fold(0.0, f64::max);
        let max = d.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        println!(
            "N = {n:>4}, q = {q}: worst deviation / bound = {worst:.3}, max |entry| = {max:.4}"
        );
    }
    Ok(())
}
