//! Random joints for experiments and property checks.

use rand::Rng;

use crate::dist::Joint;
use crate::scalar::Real;

/// Sample from the flat Dirichlet distribution on the `n`-simplex.
pub fn dirichlet<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    // Normalized unit exponentials are Dirichlet(1, ..., 1).
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| T::lit(v / total)).collect()
}

/// Joint over `rows x cols` symbols with flat-Dirichlet masses.
pub fn dirichlet_joint<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Joint<T> {
    let flat = dirichlet::<T, _>(rng, rows * cols);
    let row_labels = (0..rows).map(|i| format!("s{i}")).collect();
    let col_labels = (0..cols).map(|i| format!("x{i}")).collect();
    Joint::from_flat(rows, cols, flat, row_labels, col_labels)
        .expect("dirichlet sample is a valid joint")
}
