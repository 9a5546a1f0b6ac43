//! GUE spectrum: even moments approach Catalan numbers and the ESD approaches the semicircle.

use haarforge::ensembles::{sample_gue, semicircle_moment};
use haarforge::matrixcore::{herm_eigenvalues, hermitian_trace_moments};
use haarforge::rng;
use haarforge::statlab::ecdf_semicircle_distance;

fn main() -> haarforge::Result<()> {
    for n in [64, 256, 512] {
        let g = sample_gue(n, &mut rng::stream(7, "examples/gue", 0));
        let m = hermitian_trace_moments(&g, 6);
        let eigs = herm_eigenvalues(&g)?;
        println!(
            "N = {n:>3}: btr G^2 = {:.4} (1), btr G^4 = {:.4} (2), btr G^6 = {:.4} (5), max |x| = {:.3}, ESD distance = {:.4}",
            m[1],
            m[3],
            m[5],
            eigs[0].abs().max(eigs[n - 1].abs()),
            ecdf_semicircle_distance(&eigs)
        );
    }
    println!(
        "semicircle moments: {:?}",
        (1..=8).map(semicircle_moment).collect::<Vec<_>>()
    );
    Ok(())
}
