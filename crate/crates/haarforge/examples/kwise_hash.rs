//! k-wise independent hashing over GF(2^w) and hashed circuit seeds.

use haarforge::khash::{hash_eval, hashed_seed_stream, sample_hash, HashFamilyMember};
use haarforge::rng;

fn main() -> haarforge::Result<()> {
    let mut r = rng::stream(9, "examples/khash", 0);
    let h = sample_hash(3, 6, 6, &mut r)?;
    println!("GF(2^6) member of a 3-wise family: coeffs {:?}", h.coeffs);
    println!(
        "h(0..8) = {:?}",
        (0..8)
            .map(|x| hash_eval(&h, x))
            .collect::<Result<Vec<_>, _>>()?
    );
    println!(
        "bit cost of k=3, widths (16,16): {}",
        HashFamilyMember::bit_cost(3, 16, 16)
    );

    let wide = sample_hash(4, 6, 64, &mut r)?;
    for j in 0..4 {
        println!("circuit seed {j}: {:#018x}", hashed_seed_stream(&wide, j)?);
    }
    Ok(())
}
