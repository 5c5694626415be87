//! Shared helpers for integration tests: an exact-arithmetic (up to float
//! rounding) pencil determinant, independent of the interpolation solver.

use modalnet::linalg::CMatrix;
use num_complex::Complex64;

type Poly = Vec<Complex64>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::default(); a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_scale(a: &Poly, s: f64) -> Poly {
    a.iter().map(|&x| x * s).collect()
}

/// Determinant of A0 + lambda*A1 by cofactor expansion over degree-1 entry
/// polynomials. Exponential in n; fine for the n <= 4 oracle role.
pub fn pencil_det_cofactor(a0: &CMatrix, a1: &CMatrix) -> Poly {
    let n = a0.nrows();
    let entries: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| vec![a0[(i, j)], a1[(i, j)]]).collect())
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(&entries, 0, &cols)
}

fn det_rec(entries: &[Vec<Poly>], row: usize, cols: &[usize]) -> Poly {
    if cols.is_empty() {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let mut acc = vec![Complex64::default()];
    for (k, &j) in cols.iter().enumerate() {
        let minor_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&c| c != j)
            .collect();
        let minor = det_rec(entries, row + 1, &minor_cols);
        let term = poly_mul(&entries[row][j], &minor);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc = poly_add(&acc, &poly_scale(&term, sign));
    }
    acc
}
