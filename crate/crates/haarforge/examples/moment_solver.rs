//! Equal-weight angles reproducing prescribed trace moments.

use haarforge::momentproblem::{
    empirical_moments, guaranteed_dimension, near_origin_solve, unitary_moment_solve_with,
    MomentVector, SolveOptions,
};
use haarforge::Complex64;

fn main() -> haarforge::Result<()> {
    let alpha = MomentVector::new(vec![Complex64::new(0.1, 0.05), Complex64::new(-0.04, 0.0)]);
    let n = guaranteed_dimension(alpha.order());
    let sol = unitary_moment_solve_with(&alpha, n, SolveOptions::default())?;
    println!("T = 2, N = {n}: residual {:.2e}", sol.residual);
    println!(
        "achieved moments: {:?}",
        empirical_moments(&sol.angles, 2).entries()
    );

    // Small dimensions are attempted on request.
    let sol = unitary_moment_solve_with(&alpha, 40, SolveOptions { best_effort: true })?;
    println!("best effort at N = 40: residual {:.2e}", sol.residual);

    let t = 3;
    let r = 1.0 / (8.0 * (t as f64).powf(1.5));
    let near = MomentVector::new(vec![
        Complex64::new(r * 0.5, 0.0),
        Complex64::new(0.0, r * 0.3),
        Complex64::new(-r * 0.2, 0.0),
    ]);
    let angles = near_origin_solve(&near, 2 * t + 1)?;
    println!(
        "near-origin solve with N = {}: residual {:.2e}",
        angles.len(),
        empirical_moments(&angles, t).max_deviation(&near)
    );
    Ok(())
}
