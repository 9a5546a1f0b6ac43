//! Frame potential of the product ensemble on 4 qubits next to a Haar reference.

use haarforge::ensembles::{EnsembleSpec, HaarSampler, W2Sampler};
use haarforge::ratmarkov::calibrate_theta;
use haarforge::statlab::frame_potentials;

fn main() -> haarforge::Result<()> {
    let spec = EnsembleSpec::haar(16, 64, 3, calibrate_theta(1)?, 11);
    let pairs = 1500;
    let w2 = frame_potentials(&W2Sampler { spec }, &[1, 2], pairs)?;
    let haar = frame_potentials(&HaarSampler { dim: 16, seed: 11 }, &[1, 2], pairs)?;
    for (a, b) in w2.iter().zip(&haar) {
        println!(
            "T = {}: W2 {:.3} +- {:.3}, Haar {:.3} +- {:.3}, T! = {}",
            a.t,
            a.estimate,
            a.stderr,
            b.estimate,
            b.stderr,
            (1..=a.t).product::<usize>()
        );
    }
    Ok(())
}
