//! Exact Weingarten values and an exact Haar conjugation moment.

use haarforge::ensembles::DiagonalSpectrum;
use haarforge::weingarten::{
    gram_inversion_holds, haar_conjugation_moment_exact, partitions, weingarten,
};

fn main() -> haarforge::Result<()> {
    let n = 5;
    for q in 1..=4 {
        println!(
            "q = {q}, N = {n} (Gram inversion exact: {})",
            gram_inversion_holds(q, n)?
        );
        for pi in partitions(q)? {
            let w = weingarten(&pi, n)?;
            println!("  Wg({pi}) = {w}  ~ {:.6e}", w.to_f64());
        }
    }
    let d1 = DiagonalSpectrum::phase(vec![0.0, 0.7, 1.9, 3.0]);
    let d2 = DiagonalSpectrum::phase(vec![0.4, 0.4, 2.2, 5.1]);
    for p in 1..=4 {
        println!(
            "E btr[(U D1 U* D2)^{p}] = {:.6}",
            haar_conjugation_moment_exact(&d1, &d2, p, 4)?
        );
    }
    Ok(())
}
