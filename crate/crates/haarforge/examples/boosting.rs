//! Composing independent draws drives a weak ensemble toward Haar.

use std::sync::Arc;

use haarforge::ensembles::{BoostedSampler, CircuitSampler, UnitarySampler};
use haarforge::statlab::frame_potential;

fn main() -> haarforge::Result<()> {
    let base: Arc<dyn UnitarySampler> = Arc::new(CircuitSampler {
        n_qubits: 3,
        length: 6,
        seed: 2,
    });
    for k in [1, 2, 4, 8] {
        let boosted = BoostedSampler {
            inner: base.clone(),
            k,
        };
        let (f, err) = frame_potential(&boosted, 2, 800)?;
        println!("k = {k}: T=2 frame potential {f:.3} +- {err:.3} (Haar: 2)");
    }
    Ok(())
}
