//! Dense complex linear-algebra kernels shared by the analysis modules.
//!
//! Everything here works in complex double precision, even for real input,
//! since network matrices and block spectra are complex in general. All
//! operations are pure and deterministic: eigenvalues are returned sorted
//! lexicographically by (re, im), eigenvectors are unit-norm with a fixed
//! phase convention (largest-modulus entry real positive).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Numerical thresholds and the RNG seed governing probabilistic tests.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Absolute clustering radius, applied after scaling by spectral radius.
    #[serde(default = "default_eig_cluster_tol")]
    pub eig_cluster_tol: f64,
    /// Relative SVD cutoff for rank decisions.
    #[serde(default = "default_rank_rel_tol")]
    pub rank_rel_tol: f64,
    /// Leading-coefficient cutoff for the pencil determinant polynomial.
    #[serde(default = "default_pencil_zero_tol")]
    pub pencil_zero_tol: f64,
    /// Lambda samples for invariant-mode detection; `None` means rank(BC)+3.
    #[serde(default)]
    pub sample_count: Option<usize>,
    /// Seed for every randomized test (DFM sampling, protocol search).
    #[serde(default = "default_rng_seed")]
    pub rng_seed: u64,
}

fn default_eig_cluster_tol() -> f64 {
    1e-7
}
fn default_rank_rel_tol() -> f64 {
    1e-10
}
fn default_pencil_zero_tol() -> f64 {
    1e-9
}
fn default_rng_seed() -> u64 {
    0x5EED
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig_cluster_tol: default_eig_cluster_tol(),
            rank_rel_tol: default_rank_rel_tol(),
            pencil_zero_tol: default_pencil_zero_tol(),
            sample_count: None,
            rng_seed: default_rng_seed(),
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.eig_cluster_tol > 0.0 && self.rank_rel_tol > 0.0 && self.pencil_zero_tol > 0.0) {
            return Err(Error::Parse {
                path: "tolerances".into(),
                detail: "all tolerances must be strictly positive".into(),
            });
        }
        if let Some(s) = self.sample_count {
            if s < 2 {
                return Err(Error::Parse {
                    path: "tolerances".into(),
                    detail: format!("sample_count must be at least 2, got {s}"),
                });
            }
        }
        Ok(())
    }

    /// Lambda sample count for invariant-mode scans, defaulting to rank(BC)+3.
    pub fn effective_sample_count(&self, rank_bc: usize) -> usize {
        self.sample_count.unwrap_or(rank_bc + 3).max(2)
    }
}

/// Lift a real matrix into the complex workspace.
pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product; block (i, j) of the result is `a[(i, j)] * b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

// ---------------------------------------------------------------------------
// Eigenvalues and eigenvectors
// ---------------------------------------------------------------------------

/// Eigenvalues of a square complex matrix, sorted by (re, im).
pub fn eig_values(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 200 * n + 2000)
        .ok_or(Error::ConvergenceFailure { size: n })?;
    let mut values: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::ConvergenceFailure { size: n })?
        .iter()
        .copied()
        .collect();
    sort_complex(&mut values);
    Ok(values)
}

pub fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// One cluster of numerically-coincident complex values.
#[derive(Clone, Debug)]
pub struct Cluster {
    /// Mean of the member values.
    pub representative: Complex64,
    /// Indices into the input sequence, ascending.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    /// Radius actually used (eig_cluster_tol scaled by max(1, spectral radius)).
    pub radius: f64,
    /// True when some pairwise distance fell within 10x of the radius, i.e.
    /// a merge/split decision was close to the threshold.
    pub marginal: bool,
}

impl ClusterSet {
    /// Cluster index containing input index `i`.
    pub fn cluster_of(&self, i: usize) -> usize {
        self.clusters
            .iter()
            .position(|c| c.members.contains(&i))
            .expect("index outside cluster set")
    }

    /// Cluster whose representative is nearest to `v`, if within the radius.
    pub fn find(&self, v: Complex64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (k, c) in self.clusters.iter().enumerate() {
            let d = (c.representative - v).norm();
            if d <= self.radius && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Single-linkage clustering of complex values at the scaled radius.
/// Clusters are sorted by (re, im) of the representative.
pub fn cluster_values(values: &[Complex64], tol: &Tolerances) -> ClusterSet {
    let n = values.len();
    let scale = values.iter().map(|v| v.norm()).fold(1.0_f64, f64::max);
    let radius = tol.eig_cluster_tol * scale;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut marginal = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (values[i] - values[j]).norm();
            if d <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = rj.min(ri);
                }
            }
            if d > radius / 10.0 && d < radius * 10.0 {
                marginal = true;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut clusters: Vec<Cluster> = groups
        .into_values()
        .map(|members| {
            let sum: Complex64 = members.iter().map(|&i| values[i]).sum();
            Cluster {
                representative: sum / members.len() as f64,
                members,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        a.representative
            .re
            .total_cmp(&b.representative.re)
            .then(a.representative.im.total_cmp(&b.representative.im))
    });
    ClusterSet {
        clusters,
        radius,
        marginal,
    }
}

/// Eigendecomposition with left and right eigenvectors.
///
/// Column k of `right_vectors` and row k of `left_vectors` are paired with
/// `values[k]`. For a defective cluster the available eigenvectors are reused
/// cyclically across the cluster and the condition flags are set.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub values: Vec<Complex64>,
    pub right_vectors: CMatrix,
    /// Rows l^T with l^T M = value * l^T.
    pub left_vectors: CMatrix,
    pub condition_flags: Vec<bool>,
    pub clusters: ClusterSet,
}

/// Full eigendecomposition: Schur eigenvalues, then per-cluster null spaces
/// of M - mu*I for the eigenvectors.
pub fn eig_full(m: &CMatrix, tol: &Tolerances) -> Result<EigDecomposition> {
    let n = m.nrows();
    let values = eig_values(m)?;
    let clusters = cluster_values(&values, tol);
    let mut right = CMatrix::zeros(n, n);
    let mut left = CMatrix::zeros(n, n);
    let mut flags = vec![false; n];
    for cluster in &clusters.clusters {
        let shifted = m - identity(n) * cluster.representative;
        let scale = m.norm() + cluster.representative.norm();
        let right_svd = jacobi_svd(&shifted);
        let left_svd = jacobi_svd(&shifted.adjoint());
        let (rank, _) = rank_from_values_scaled(&right_svd.singular_values, tol, scale);
        // Null indices; fall back to the least singular direction when the
        // cluster looks defective or severely ill-conditioned.
        let null: Vec<usize> = if rank < n {
            (rank..n).collect()
        } else {
            vec![n - 1]
        };
        let deficient = null.len() < cluster.members.len() || rank == n;
        for (slot, &k) in cluster.members.iter().enumerate() {
            let src = null[slot % null.len()];
            // Right vectors solve (M - mu I) x = 0; left vectors come from the
            // null space of the adjoint, conjugated back to l^T M = mu l^T.
            let mut r: Vec<Complex64> = right_svd.v.column(src).iter().copied().collect();
            normalize_phase(&mut r);
            right.set_column(k, &DVector::from_vec(r));
            let mut l: Vec<Complex64> = left_svd.v.column(src).iter().map(|x| x.conj()).collect();
            normalize_phase(&mut l);
            left.set_row(k, &DVector::from_vec(l).transpose());
            flags[k] = deficient || clusters.marginal;
        }
    }
    Ok(EigDecomposition {
        values,
        right_vectors: right,
        left_vectors: left,
        condition_flags: flags,
        clusters,
    })
}

/// Fix the phase so the largest-modulus entry is real positive; keeps unit norm.
fn normalize_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

// ---------------------------------------------------------------------------
// Rank and null spaces (one-sided Jacobi SVD)
// ---------------------------------------------------------------------------

/// Singular values (descending) and the right-singular-vector matrix V of a
/// complex matrix, by one-sided Jacobi on the columns. V is exactly unitary
/// by construction, and the small singular directions satisfy
/// ||M v_k|| = sigma_k, which makes this the null-space workhorse.
pub struct JacobiSvd {
    pub singular_values: Vec<f64>,
    /// Columns are the right singular vectors, ordered with the values.
    pub v: CMatrix,
}

pub fn jacobi_svd(m: &CMatrix) -> JacobiSvd {
    let cols = m.ncols();
    let mut a = m.clone();
    let mut v = CMatrix::identity(cols, cols);
    let eps = 1e-15_f64;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0_f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a.column(p).norm_squared();
                let beta: f64 = a.column(q).norm_squared();
                let gamma: Complex64 = a.column(p).dotc(&a.column(q));
                let gn = gamma.norm();
                if alpha == 0.0 || beta == 0.0 || gn <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(gn / (alpha * beta).sqrt());
                // Rotate so columns p, q become orthogonal; phase of gamma is
                // absorbed into the rotation to reduce to the real case.
                let phase = gamma / gn;
                let zeta = (beta - alpha) / (2.0 * gn);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in 0..a.nrows() {
                    let ap = a[(row, p)];
                    let aq = a[(row, q)];
                    a[(row, p)] = ap * c - aq * phase.conj() * s;
                    a[(row, q)] = ap * phase * s + aq * c;
                }
                for row in 0..cols {
                    let vp = v[(row, p)];
                    let vq = v[(row, q)];
                    v[(row, p)] = vp * c - vq * phase.conj() * s;
                    v[(row, q)] = vp * phase * s + vq * c;
                }
            }
        }
        if off <= eps {
            break;
        }
    }
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|k| a.column(k).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let mut v_sorted = CMatrix::zeros(cols, cols);
    for (out, &k) in order.iter().enumerate() {
        v_sorted.set_column(out, &v.column(k));
    }
    JacobiSvd {
        singular_values,
        v: v_sorted,
    }
}

/// Rank of a singular-value profile. `floor` anchors the relative cutoff for
/// matrices that are themselves small, e.g. M - mu I near an eigenvalue: the
/// caller passes the scale of the unshifted problem so a uniformly tiny
/// residual counts as zero rather than as full rank.
fn rank_from_values_scaled(sv: &[f64], tol: &Tolerances, floor: f64) -> (usize, bool) {
    let smax = sv.first().copied().unwrap_or(0.0).max(floor);
    if smax == 0.0 {
        return (0, false);
    }
    let mut rank = 0;
    let mut marginal = false;
    for &s in sv {
        let ratio = s / smax;
        if ratio > tol.rank_rel_tol {
            rank += 1;
        }
        if ratio > tol.rank_rel_tol / 10.0 && ratio < tol.rank_rel_tol * 10.0 {
            marginal = true;
        }
    }
    (rank, marginal)
}

fn rank_from_values(sv: &[f64], tol: &Tolerances) -> (usize, bool) {
    rank_from_values_scaled(sv, tol, 0.0)
}

/// Count of singular values above the relative cutoff; 0 for a zero matrix.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerances) -> usize {
    rank_with_margin(m, tol).0
}

/// Rank plus a marginality flag: true when some singular-value ratio fell
/// within 10x of the cutoff, i.e. the rank decision is tolerance-sensitive.
pub fn rank_with_margin(m: &CMatrix, tol: &Tolerances) -> (usize, bool) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0, false);
    }
    // Jacobi works over columns; run on the narrower orientation.
    let svd = if m.ncols() > m.nrows() {
        jacobi_svd(&m.adjoint())
    } else {
        jacobi_svd(m)
    };
    rank_from_values(&svd.singular_values, tol)
}

/// Orthonormal rows spanning { w^T : w^T M = 0 }; row count = rows - rank.
pub fn left_null_basis(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    left_null_basis_scaled(m, tol, 0.0)
}

/// `left_null_basis` with a scale floor for the rank cutoff; use when M is a
/// shifted matrix whose natural scale is that of the unshifted problem.
pub fn left_null_basis_scaled(m: &CMatrix, tol: &Tolerances, floor: f64) -> CMatrix {
    let rows = m.nrows();
    // M^H x = 0  <=>  x^H M = 0: the left null space is the conjugate of the
    // right null space of the adjoint.
    let svd = jacobi_svd(&m.adjoint());
    let (rank, _) = rank_from_values_scaled(&svd.singular_values, tol, floor);
    let dim = rows - rank;
    let mut basis = CMatrix::zeros(dim, rows);
    for (out, i) in (rank..rows).enumerate() {
        let mut w: Vec<Complex64> = svd.v.column(i).iter().map(|x| x.conj()).collect();
        normalize_phase(&mut w);
        for (c, &x) in w.iter().enumerate() {
            basis[(out, c)] = x;
        }
    }
    basis
}

/// Orthonormal columns spanning { x : M x = 0 }; column count = cols - rank.
pub fn right_null_basis(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    right_null_basis_scaled(m, tol, 0.0)
}

/// `right_null_basis` with a scale floor for the rank cutoff.
pub fn right_null_basis_scaled(m: &CMatrix, tol: &Tolerances, floor: f64) -> CMatrix {
    let cols = m.ncols();
    let svd = jacobi_svd(m);
    let (rank, _) = rank_from_values_scaled(&svd.singular_values, tol, floor);
    let dim = cols - rank;
    let mut basis = CMatrix::zeros(cols, dim);
    for (out, i) in (rank..cols).enumerate() {
        let mut x: Vec<Complex64> = svd.v.column(i).iter().copied().collect();
        normalize_phase(&mut x);
        for (r, &e) in x.iter().enumerate() {
            basis[(r, out)] = e;
        }
    }
    basis
}

/// Dominant right singular direction of M, as a row vector.
pub fn principal_direction(m: &CMatrix) -> Vec<Complex64> {
    let svd = jacobi_svd(m);
    let mut p: Vec<Complex64> = svd.v.column(0).iter().map(|x| x.conj()).collect();
    normalize_phase(&mut p);
    p
}

pub fn det(m: &CMatrix) -> Complex64 {
    debug_assert_eq!(m.nrows(), m.ncols());
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

// ---------------------------------------------------------------------------
// Pencil determinant polynomial
// ---------------------------------------------------------------------------

/// det(A0 + lambda*A1) as a polynomial in lambda, coefficients ascending.
///
/// Obtained by interpolation at degree_bound+1 roots of unity; exact for any
/// polynomial of degree <= degree_bound. `degenerate` is decided at the
/// samples: if A0 + lambda_k*A1 is rank-deficient at every sample point, a
/// polynomial of bounded degree must vanish identically.
#[derive(Clone, Debug)]
pub struct PolyInLambda {
    pub coefficients: Vec<Complex64>,
    pub degree_bound: usize,
    /// Largest determinant sample magnitude; the scale for zero tests.
    pub sample_scale: f64,
    pub degenerate: bool,
}

pub fn det_poly_in_lambda(
    a0: &CMatrix,
    a1: &CMatrix,
    degree_bound: usize,
    tol: &Tolerances,
) -> Result<PolyInLambda> {
    let n = a0.nrows();
    if a0.ncols() != n || a1.nrows() != n || a1.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "pencil matrices must be square and equal-sized, got {}x{} and {}x{}",
            a0.nrows(),
            a0.ncols(),
            a1.nrows(),
            a1.ncols()
        )));
    }
    let samples = degree_bound + 1;
    let mut dets = Vec::with_capacity(samples);
    let mut all_singular = true;
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let lambda = Complex64::from_polar(1.0, theta);
        let mk = a0 + a1 * lambda;
        if numerical_rank(&mk, tol) == n {
            all_singular = false;
        }
        dets.push(det(&mk));
    }
    let sample_scale = dets.iter().map(|d| d.norm()).fold(0.0_f64, f64::max);
    // Inverse DFT on the unit-circle samples recovers the coefficients.
    let mut coefficients = Vec::with_capacity(samples);
    for j in 0..samples {
        let mut c = Complex64::new(0.0, 0.0);
        for (k, dk) in dets.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * (j * k) as f64 / samples as f64;
            c += dk * Complex64::from_polar(1.0, theta);
        }
        coefficients.push(c / samples as f64);
    }
    let coeff_zero = sample_scale == 0.0
        || coefficients
            .iter()
            .all(|c| c.norm() <= tol.pencil_zero_tol * sample_scale);
    Ok(PolyInLambda {
        coefficients,
        degree_bound,
        sample_scale,
        degenerate: all_singular || coeff_zero,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootResult {
    /// The determinant vanishes identically in lambda.
    Degenerate,
    Roots(Vec<Complex64>),
}

/// Roots of the interpolated pencil polynomial via the companion matrix,
/// after stripping near-zero leading coefficients.
pub fn poly_roots(p: &PolyInLambda, tol: &Tolerances) -> RootResult {
    if p.degenerate {
        return RootResult::Degenerate;
    }
    let thr = tol.pencil_zero_tol * p.sample_scale.max(f64::MIN_POSITIVE);
    let degree = match p.coefficients.iter().rposition(|c| c.norm() > thr) {
        Some(d) => d,
        None => return RootResult::Degenerate,
    };
    if degree == 0 {
        return RootResult::Roots(Vec::new());
    }
    let lead = p.coefficients[degree];
    let mut companion = CMatrix::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -p.coefficients[i] / lead;
    }
    let mut roots = eig_values(&companion).expect("companion eigensolve");
    sort_complex(&mut roots);
    RootResult::Roots(roots)
}

/// True iff every clustered eigenvalue of G has geometric multiplicity equal
/// to its cluster size. Hermitian matrices short-circuit to true.
pub fn is_diagonalizable(g: &CMatrix, tol: &Tolerances) -> Result<bool> {
    let n = g.nrows();
    debug_assert_eq!(n, g.ncols());
    if n <= 1 {
        return Ok(true);
    }
    let scale = g.iter().map(|x| x.norm()).fold(1.0_f64, f64::max);
    let hermitian = (g - g.adjoint()).iter().all(|x| x.norm() <= 1e-12 * scale);
    if hermitian {
        return Ok(true);
    }
    let values = eig_values(g)?;
    let clusters = cluster_values(&values, tol);
    for cluster in &clusters.clusters {
        let shifted = g - identity(n) * cluster.representative;
        let floor = g.norm() + cluster.representative.norm();
        let svd = jacobi_svd(&shifted);
        let (rank, _) = rank_from_values_scaled(&svd.singular_values, tol, floor);
        if n - rank < cluster.members.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_mat(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
        CMatrix::from_iterator(cols, rows, data.iter().map(|&x| c(x, 0.0))).transpose()
    }

    /// Example 1 matrices from the built-in regression model.
    fn example1_a() -> CMatrix {
        real_mat(3, 3, &[0., 0., 0., 0., 0., 1., 1., 0., 1.])
    }

    fn example1_bc() -> CMatrix {
        // B = [[1,0],[0,1],[0,0]], C = [[1,0,0],[0,2,0]] -> BC = diag(1,2,0)
        real_mat(3, 3, &[1., 0., 0., 0., 2., 0., 0., 0., 0.])
    }

    fn example1_g() -> CMatrix {
        real_mat(3, 3, &[2., -2., 0., -2., 4., -2., 0., -2., 2.])
    }

    #[test]
    fn kron_identity_blocks() {
        let m = real_mat(2, 2, &[1., 2., 3., 4.]);
        let k = kron(&identity(2), &m);
        assert_eq!(k.nrows(), 4);
        assert_eq!(k[(0, 0)], c(1., 0.));
        assert_eq!(k[(2, 2)], c(1., 0.));
        assert_eq!(k[(3, 2)], c(3., 0.));
        assert_eq!(k[(0, 2)], c(0., 0.));
    }

    #[test]
    fn kron_permutation_of_blocks() {
        let p = real_mat(2, 2, &[0., 1., 1., 0.]);
        let k = kron(&p, &identity(2));
        assert_eq!(k[(0, 2)], c(1., 0.));
        assert_eq!(k[(1, 3)], c(1., 0.));
        assert_eq!(k[(2, 0)], c(1., 0.));
        assert_eq!(k[(0, 0)], c(0., 0.));
    }

    #[test]
    fn kron_matches_quadruple_loop() {
        let g = example1_g();
        let bc = example1_bc();
        let k = kron(&g, &bc);
        assert_eq!(k.nrows(), 9);
        for i in 0..3 {
            for j in 0..3 {
                for p in 0..3 {
                    for q in 0..3 {
                        let expected = g[(i, j)] * bc[(p, q)];
                        assert!((k[(3 * i + p, 3 * j + q)] - expected).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn eig_values_diagonal() {
        let m = real_mat(3, 3, &[3., 0., 0., 0., 1., 0., 0., 0., 2.]);
        let vals = eig_values(&m).unwrap();
        for (v, want) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - c(want, 0.)).norm() < 1e-10);
        }
    }

    #[test]
    fn eig_values_example1_g() {
        let vals = eig_values(&example1_g()).unwrap();
        for (v, want) in vals.iter().zip([0.0, 2.0, 6.0]) {
            assert!((v - c(want, 0.)).norm() < 1e-8, "got {v}, want {want}");
        }
    }

    #[test]
    fn eig_values_example1_a() {
        // char poly s^2 (s - 1)
        let vals = eig_values(&example1_a()).unwrap();
        for (v, want) in vals.iter().zip([0.0, 0.0, 1.0]) {
            assert!((v - c(want, 0.)).norm() < 1e-8);
        }
    }

    #[test]
    fn eig_full_residuals_and_norms() {
        let tol = Tolerances::default();
        let m = example1_g();
        let e = eig_full(&m, &tol).unwrap();
        let norm = m.norm();
        for k in 0..3 {
            let r = e.right_vectors.column(k);
            let l = e.left_vectors.row(k);
            assert!((r.norm() - 1.0).abs() < 1e-12);
            assert!((l.norm() - 1.0).abs() < 1e-12);
            assert!(((&m * r) - r * e.values[k]).norm() <= 1e-8 * norm);
            assert!(((l * &m) - l * e.values[k]).norm() <= 1e-8 * norm);
        }
    }

    #[test]
    fn numerical_rank_cases() {
        let tol = Tolerances::default();
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), &tol), 0);
        assert_eq!(numerical_rank(&example1_bc(), &tol), 2);
        let mut m = identity(5);
        m.set_row(2, &nalgebra::RowDVector::zeros(5).map(|_: f64| c(0., 0.)));
        assert_eq!(numerical_rank(&m, &tol), 4);
    }

    #[test]
    fn left_null_basis_cases() {
        let tol = Tolerances::default();
        assert_eq!(left_null_basis(&identity(3), &tol).nrows(), 0);

        // Example 1's A + lambda BC - I at lambda = 0: left null span (1, 0, 1).
        let m = example1_a() - identity(3);
        let basis = left_null_basis(&m, &tol);
        assert_eq!(basis.nrows(), 1);
        let w = basis.row(0);
        let expected = nalgebra::RowDVector::from_row_slice(&[c(1., 0.), c(0., 0.), c(1., 0.)])
            / c((2.0_f64).sqrt(), 0.0);
        let overlap: Complex64 = w.iter().zip(expected.iter()).map(|(a, b)| a * b.conj()).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10, "w = {w}");

        let z = left_null_basis(&CMatrix::zeros(2, 2), &tol);
        assert_eq!(z.nrows(), 2);
        let gram = &z * z.adjoint();
        assert!((gram - identity(2)).norm() < 1e-12);
    }

    #[test]
    fn left_null_basis_tall_matrix() {
        // More rows than columns: null dimension must still be rows - rank.
        let tol = Tolerances::default();
        let m = real_mat(3, 1, &[1., 0., 0.]);
        let basis = left_null_basis(&m, &tol);
        assert_eq!(basis.nrows(), 2);
        assert!((&basis * &m).norm() < 1e-12);
    }

    #[test]
    fn cluster_values_merges_close_pairs() {
        let tol = Tolerances::default();
        let set = cluster_values(&[c(1.0, 0.0), c(1.0 + 1e-12, 0.0), c(2.0, 0.0)], &tol);
        assert_eq!(set.clusters.len(), 2);
        assert_eq!(set.clusters[0].members, vec![0, 1]);
        assert_eq!(set.clusters[1].members, vec![2]);
    }

    #[test]
    fn cluster_values_empty() {
        let set = cluster_values(&[], &Tolerances::default());
        assert!(set.clusters.is_empty());
    }

    #[test]
    fn det_poly_constant() {
        let tol = Tolerances::default();
        let p = det_poly_in_lambda(&identity(2), &CMatrix::zeros(2, 2), 0, &tol).unwrap();
        assert!(!p.degenerate);
        assert!((p.coefficients[0] - c(1., 0.)).norm() < 1e-12);
    }

    #[test]
    fn det_poly_example1_at_mu_zero() {
        // det(A + lambda BC) = 2 lambda^2, so det(-(A - 0 I) + lambda (-BC))
        // = (-1)^3 det(A + lambda BC) = -2 lambda^2.
        let tol = Tolerances::default();
        let a0 = -example1_a();
        let a1 = -example1_bc();
        let p = det_poly_in_lambda(&a0, &a1, 2, &tol).unwrap();
        assert!(!p.degenerate);
        assert!(p.coefficients[0].norm() < 1e-10);
        assert!(p.coefficients[1].norm() < 1e-10);
        assert!((p.coefficients[2] - c(-2., 0.)).norm() < 1e-10);
    }

    #[test]
    fn det_poly_example2_is_degenerate_at_mu_one() {
        // Example 2: A + lambda BC has eigenvalue 1 for every lambda.
        let tol = Tolerances::default();
        let a = real_mat(3, 3, &[0., 0., 1., 0., 0., 1., 1., -1., 1.]);
        let bc = real_mat(3, 3, &[1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let a0 = -(a - identity(3));
        let a1 = -bc;
        let p = det_poly_in_lambda(&a0, &a1, 2, &tol).unwrap();
        assert!(p.degenerate);
    }

    #[test]
    fn det_poly_dimension_mismatch() {
        let tol = Tolerances::default();
        let err = det_poly_in_lambda(&identity(2), &CMatrix::zeros(3, 3), 1, &tol);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn poly_roots_cases() {
        let tol = Tolerances::default();
        let constant = PolyInLambda {
            coefficients: vec![c(1., 0.)],
            degree_bound: 0,
            sample_scale: 1.0,
            degenerate: false,
        };
        assert_eq!(poly_roots(&constant, &tol), RootResult::Roots(vec![]));

        let quad = PolyInLambda {
            coefficients: vec![c(0., 0.), c(0., 0.), c(-2., 0.)],
            degree_bound: 2,
            sample_scale: 2.0,
            degenerate: false,
        };
        match poly_roots(&quad, &tol) {
            RootResult::Roots(r) => {
                assert_eq!(r.len(), 2);
                assert!(r.iter().all(|x| x.norm() < 1e-8));
            }
            other => panic!("expected roots, got {other:?}"),
        }

        let zero = PolyInLambda {
            coefficients: vec![c(0., 0.)],
            degree_bound: 0,
            sample_scale: 0.0,
            degenerate: true,
        };
        assert_eq!(poly_roots(&zero, &tol), RootResult::Degenerate);
    }

    #[test]
    fn diagonalizability() {
        let tol = Tolerances::default();
        assert!(is_diagonalizable(&example1_g(), &tol).unwrap());
        let jordan = real_mat(2, 2, &[0., 1., 0., 0.]);
        assert!(!is_diagonalizable(&jordan, &tol).unwrap());
        // Example 3's G, a symmetric path Laplacian.
        let g3 = real_mat(3, 3, &[1., -1., 0., -1., 2., -1., 0., -1., 1.]);
        assert!(is_diagonalizable(&g3, &tol).unwrap());
        assert!({
            let vals = eig_values(&g3).unwrap();
            vals.iter()
                .zip([0.0, 1.0, 3.0])
                .all(|(v, w)| (v - c(w, 0.)).norm() < 1e-8)
        });
    }
}
