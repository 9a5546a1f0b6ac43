//! Rational cosine fractions and their Markov-type derivative factor.

use haarforge::ratmarkov::{
    chebyshev_t, cosine_fraction, lambda_n, paper_lambda_bound, paper_pole_set, PoleSet,
};

fn main() -> haarforge::Result<()> {
    let zero = PoleSet::zeros(5);
    let dev = (0..=1000)
        .map(|i| -1.0 + 2.0 * i as f64 / 1000.0)
        .map(|x| (cosine_fraction(&zero, x).unwrap() - chebyshev_t(5, x)).abs())
        .fold(0.0, f64::max);
    println!("no poles, n = 5: max |cos-fraction - T_5| = {dev:.1e}");

    for p in 2..=4 {
        let poles = paper_pole_set(p)?;
        let peak = (0..=2000)
            .map(|i| -1.0 + 2.0 * i as f64 / 2000.0)
            .map(|x| lambda_n(&poles, x).unwrap())
            .fold(0.0, f64::max);
        println!(
            "p = {p}: {} poles, max lambda_n = {peak:.3}, bound = {:.3}",
            poles.n(),
            paper_lambda_bound(p)
        );
    }
    Ok(())
}
