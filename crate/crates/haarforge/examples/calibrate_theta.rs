//! Angles `theta_k` with `J1(2 theta_k) = 0`, where `E btr e^{i theta G}` vanishes as `N -> oo`.

use haarforge::ratmarkov::{bessel_j1, calibrate_theta};

fn main() -> haarforge::Result<()> {
    for k in 1..=8 {
        let t = calibrate_theta(k)?;
        println!(
            "theta_{k} = {t:.12}   J1(2 theta) = {:+.1e}   limit of btr e^(2 i theta G) = {:+.5}",
            bessel_j1(2.0 * t),
            bessel_j1(4.0 * t) / (2.0 * t)
        );
    }
    Ok(())
}
