//! Trace moments of Haar unitaries against the exact `E|tr U^j|^2 = min(j, N)`.

use haarforge::ensembles::HaarSampler;
use haarforge::statlab::mc_moment_tables;

fn main() -> haarforge::Result<()> {
    let sampler = HaarSampler { dim: 8, seed: 1 };
    let (first, second) = mc_moment_tables(&sampler, 10, 4000)?;
    println!("N = 8, 4000 samples");
    println!(
        "{:>3} {:>22} {:>10} {:>10}",
        "j", "E|tr U^j|^2", "min(j,N)", "E btr U^j"
    );
    for (a, b) in first.rows.iter().zip(&second) {
        println!(
            "{:>3} {:>12.4} +- {:<7.4} {:>10} {:>10.4}",
            b.j,
            b.mean,
            b.stderr,
            b.reference,
            a.mean().norm()
        );
    }
    Ok(())
}
