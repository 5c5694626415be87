//! Block spectra of A + lambda_j BC, the shared-mode catalog, and the
//! classification of modes as network-invariant or special-repeat.
//!
//! A network-invariant mode is an eigenvalue of A + lambda BC for every
//! complex lambda. Invariance is certified through the pencil determinant
//! det(mu I - A - lambda BC), which is a polynomial in lambda of degree at
//! most rank(BC): degeneracy at rank(BC)+1 interpolation points proves the
//! eigenvalue persists for all lambda, so the check is a certificate rather
//! than a spot test.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    cluster_values, det_poly_in_lambda, eig_full, identity, left_null_basis_scaled, numerical_rank,
    poly_roots, principal_direction, sort_complex, CMatrix, EigDecomposition, RootResult,
    Tolerances,
};
use crate::model::{GlobalSpectrum, Network, SubsystemModel};

/// Lambda values for which A + lambda BC has a given eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub enum RepeatSet {
    /// Every complex lambda (network-invariant mode).
    AllLambda,
    /// The finite network-repeat set, at most rank(BC) values.
    Finite(Vec<Complex64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeClass {
    NetworkInvariant,
    SpecialRepeat,
}

/// Presence of a shared mode in one block A + lambda_j BC.
#[derive(Clone, Debug)]
pub struct BlockPresence {
    /// Block index j (position of lambda_j in the global spectrum).
    pub block: usize,
    pub lambda: Complex64,
    /// Geometric multiplicity beta_j(mu).
    pub beta: usize,
    /// beta_j rows w^T with w^T (A + lambda_j BC) = mu w^T.
    pub left_vectors: CMatrix,
}

/// One distinct eigenvalue of the assembled system with its per-block data.
#[derive(Clone, Debug)]
pub struct ModeRecord {
    pub mu: Complex64,
    /// Blocks where the mode appears (beta >= 1), ascending block index.
    pub per_block: Vec<BlockPresence>,
    /// P(mu): sum of geometric multiplicities across all N blocks.
    pub total_geometric: usize,
    pub classification: ModeClass,
    pub repeat_set: RepeatSet,
    /// Meaningful only for network-invariant modes.
    pub projection_fixed: bool,
    /// The common B-projection direction p when projection-fixed.
    pub common_projection: Option<Vec<Complex64>>,
}

impl ModeRecord {
    pub fn is_invariant(&self) -> bool {
        self.classification == ModeClass::NetworkInvariant
    }
}

/// All distinct eigenvalues of the assembled system.
#[derive(Clone, Debug)]
pub struct ModeCatalog {
    pub records: Vec<ModeRecord>,
    /// Decentralized fixed modes of the subsystem (advisory, probabilistic).
    pub dfm_modes: Vec<Complex64>,
    /// True when some clustering or rank decision was within 10x of its
    /// threshold while building the catalog.
    pub marginal: bool,
}

impl ModeCatalog {
    pub fn invariant_modes(&self) -> impl Iterator<Item = &ModeRecord> {
        self.records.iter().filter(|r| r.is_invariant())
    }

    pub fn has_invariant_modes(&self) -> bool {
        self.invariant_modes().next().is_some()
    }

    /// Number of distinct eigenvalues z.
    pub fn distinct_count(&self) -> usize {
        self.records.len()
    }
}

/// Eigendecomposition of A + lambda_j BC for every block j = 0..N-1, computed
/// once per distinct lambda and shared across repeats.
pub fn block_spectra(
    net: &Network,
    gs: &GlobalSpectrum,
) -> Result<Vec<(Complex64, EigDecomposition)>> {
    let tol = &net.tolerances;
    let mut per_distinct: Vec<EigDecomposition> = Vec::new();
    for cluster in &gs.distinct_clusters.clusters {
        let block = net.subsystem.block(cluster.representative);
        per_distinct.push(eig_full(&block, tol)?);
    }
    let mut out = Vec::with_capacity(gs.eigenvalues.len());
    for j in 0..gs.eigenvalues.len() {
        let k = gs.distinct_clusters.cluster_of(j);
        out.push((gs.eigenvalues[j], per_distinct[k].clone()));
    }
    Ok(out)
}

/// Certificate that `mu` is an eigenvalue of A + lambda BC for all lambda.
fn invariance_certificate(sub: &SubsystemModel, mu: Complex64, tol: &Tolerances) -> Result<bool> {
    Ok(matches!(
        network_repeat_set(sub, mu, tol)?,
        RepeatSet::AllLambda
    ))
}

/// Network-repeat set of `mu`: the lambda solving the generalized eigenvalue
/// problem for the pair (A - mu I, -BC), via the interpolated pencil
/// determinant. `AllLambda` iff the determinant vanishes identically.
pub fn network_repeat_set(
    sub: &SubsystemModel,
    mu: Complex64,
    tol: &Tolerances,
) -> Result<RepeatSet> {
    let bc = sub.bc_complex();
    let rank_bc = numerical_rank(&bc, tol);
    let a0 = identity(sub.n) * mu - sub.a_complex();
    let a1 = -bc;
    let poly = det_poly_in_lambda(&a0, &a1, rank_bc, tol)?;
    match poly_roots(&poly, tol) {
        RootResult::Degenerate => Ok(RepeatSet::AllLambda),
        RootResult::Roots(roots) => {
            // Deduplicate numerically-coincident roots.
            let clusters = cluster_values(&roots, tol);
            let mut distinct: Vec<Complex64> = clusters
                .clusters
                .iter()
                .map(|c| c.representative)
                .collect();
            sort_complex(&mut distinct);
            Ok(RepeatSet::Finite(distinct))
        }
    }
}

/// Network-invariant modes of the subsystem.
///
/// Candidates are the eigenvalues of A + lambda0 BC at one random unit-modulus
/// lambda0; a candidate is kept iff the pencil determinant is degenerate. The
/// output does not depend on the seed: invariant modes appear in every block
/// spectrum, and the certificate is deterministic given the interpolation grid.
pub fn detect_invariant_modes(sub: &SubsystemModel, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(tol.rng_seed);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let lambda0 = Complex64::from_polar(1.0, theta);
    let block = sub.block(lambda0);
    let decomp = eig_full(&block, tol)?;
    let mut invariant = Vec::new();
    for cluster in &decomp.clusters.clusters {
        if invariance_certificate(sub, cluster.representative, tol)? {
            invariant.push(cluster.representative);
        }
    }
    sort_complex(&mut invariant);
    Ok(invariant)
}

/// Decentralized fixed modes of the subsystem via the randomized intersection
/// test: eigenvalues shared by A + B K C for two random diagonal K, confirmed
/// against a third sample. Advisory; the invariance certificate is the
/// authoritative check downstream.
pub fn detect_dfm(sub: &SubsystemModel, tol: &Tolerances, rng_seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let spectrum_with_random_k = |rng: &mut ChaCha8Rng| -> Result<Vec<Complex64>> {
        let mut k = CMatrix::zeros(sub.m, sub.m);
        for i in 0..sub.m {
            k[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        let closed = sub.a_complex() + sub.b_complex() * k * crate::linalg::to_complex(&sub.c);
        crate::linalg::eig_values(&closed)
    };
    let s1 = spectrum_with_random_k(&mut rng)?;
    let s2 = spectrum_with_random_k(&mut rng)?;
    let s3 = spectrum_with_random_k(&mut rng)?;
    let radius = {
        let scale = s1
            .iter()
            .chain(&s2)
            .chain(&s3)
            .map(|v| v.norm())
            .fold(1.0_f64, f64::max);
        tol.eig_cluster_tol * scale
    };
    let near = |set: &[Complex64], v: Complex64| set.iter().any(|w| (w - v).norm() <= radius);
    let mut fixed: Vec<Complex64> = s1
        .iter()
        .copied()
        .filter(|&v| near(&s2, v) && near(&s3, v))
        .collect();
    // Collapse duplicates from repeated eigenvalues.
    let clusters = cluster_values(&fixed, tol);
    fixed = clusters.clusters.iter().map(|c| c.representative).collect();
    sort_complex(&mut fixed);
    Ok(fixed)
}

/// Projection-fixedness of an invariant mode: whether the left eigenvectors'
/// projections w(lambda)^T B span a single direction across sampled lambda.
/// Returns the common direction p when they do.
pub fn projection_fixed(
    sub: &SubsystemModel,
    mu: Complex64,
    tol: &Tolerances,
) -> Result<(bool, Option<Vec<Complex64>>)> {
    if !invariance_certificate(sub, mu, tol)? {
        return Err(Error::NotInvariantMode { what: mu });
    }
    let bc = sub.bc_complex();
    let rank_bc = numerical_rank(&bc, tol);
    let samples = tol.effective_sample_count(rank_bc);
    let mut rng = ChaCha8Rng::seed_from_u64(tol.rng_seed ^ 0x70726f6a);
    let b = sub.b_complex();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..samples {
        let radius: f64 = rng.gen_range(0.5..1.5);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let lambda = Complex64::from_polar(radius, theta);
        let block = sub.block(lambda);
        let scale = block.norm() + mu.norm();
        let shifted = block - identity(sub.n) * mu;
        let basis = left_null_basis_scaled(&shifted, tol, scale);
        for r in 0..basis.nrows() {
            let projection = basis.row(r) * &b;
            rows.push(projection.iter().copied().collect());
        }
    }
    if rows.is_empty() {
        // Invariance certified but no eigenvector resolved numerically;
        // treat as not projection-fixed rather than guessing a direction.
        return Ok((false, None));
    }
    let stack = CMatrix::from_fn(rows.len(), sub.m, |i, j| rows[i][j]);
    let rank = numerical_rank(&stack, tol);
    if rank <= 1 {
        let p = principal_direction(&stack);
        Ok((true, Some(p)))
    } else {
        Ok((false, None))
    }
}

/// Fill classification, repeat set and projection-fixedness of a record.
pub fn classify_mode(
    sub: &SubsystemModel,
    mu: Complex64,
    tol: &Tolerances,
) -> Result<(ModeClass, RepeatSet, bool, Option<Vec<Complex64>>)> {
    match network_repeat_set(sub, mu, tol)? {
        RepeatSet::AllLambda => {
            let (fixed, p) = projection_fixed(sub, mu, tol)?;
            Ok((ModeClass::NetworkInvariant, RepeatSet::AllLambda, fixed, p))
        }
        RepeatSet::Finite(set) => Ok((
            ModeClass::SpecialRepeat,
            RepeatSet::Finite(set),
            false,
            None,
        )),
    }
}

/// Build the shared-mode catalog: pool the block eigenvalues, cluster them
/// into distinct mu, attach per-block multiplicities and left eigenvectors,
/// classify each mode.
pub fn shared_mode_catalog(net: &Network, gs: &GlobalSpectrum) -> Result<ModeCatalog> {
    if !gs.diagonalizable {
        return Err(Error::DefectiveNetworkMatrix {
            eigenvalue: Complex64::new(f64::NAN, 0.0),
            geometric: 0,
            algebraic: 0,
        });
    }
    let tol = &net.tolerances;
    let sub = &net.subsystem;
    let n_blocks = gs.eigenvalues.len();

    // Pool eigenvalues over all N block indices (repeated lambda included).
    let mut pooled: Vec<Complex64> = Vec::with_capacity(n_blocks * sub.n);
    let mut distinct_decomp: Vec<EigDecomposition> = Vec::new();
    for cluster in &gs.distinct_clusters.clusters {
        distinct_decomp.push(eig_full(&sub.block(cluster.representative), tol)?);
    }
    for j in 0..n_blocks {
        let k = gs.distinct_clusters.cluster_of(j);
        pooled.extend(distinct_decomp[k].values.iter().copied());
    }
    let mu_clusters = cluster_values(&pooled, tol);
    let mut marginal = mu_clusters.marginal;

    // Geometric multiplicity and left eigenvectors per (distinct lambda, mu).
    let mut records = Vec::with_capacity(mu_clusters.clusters.len());
    for mu_cluster in &mu_clusters.clusters {
        let mu = mu_cluster.representative;
        let mut per_distinct: Vec<Option<CMatrix>> = Vec::new();
        for g_cluster in &gs.distinct_clusters.clusters {
            let block = sub.block(g_cluster.representative);
            let scale = block.norm() + mu.norm();
            let shifted = block - identity(sub.n) * mu;
            let basis = left_null_basis_scaled(&shifted, tol, scale);
            per_distinct.push(if basis.nrows() > 0 { Some(basis) } else { None });
        }
        let mut per_block = Vec::new();
        let mut total = 0usize;
        for j in 0..n_blocks {
            let k = gs.distinct_clusters.cluster_of(j);
            if let Some(basis) = &per_distinct[k] {
                total += basis.nrows();
                per_block.push(BlockPresence {
                    block: j,
                    lambda: gs.eigenvalues[j],
                    beta: basis.nrows(),
                    left_vectors: basis.clone(),
                });
            }
        }
        let (classification, repeat_set, fixed, p) = classify_mode(sub, mu, tol)?;
        if let RepeatSet::Finite(set) = &repeat_set {
            // The repeat-set lemma bounds the set by rank(BC); a larger set
            // indicates a marginal pencil decision.
            if set.len() > numerical_rank(&sub.bc_complex(), tol) {
                marginal = true;
            }
        }
        records.push(ModeRecord {
            mu,
            per_block,
            total_geometric: total,
            classification,
            repeat_set,
            projection_fixed: fixed,
            common_projection: p,
        });
    }

    let dfm_modes = detect_dfm(sub, tol, tol.rng_seed)?;
    Ok(ModeCatalog {
        records,
        dfm_modes,
        marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::known;
    use crate::model::global_spectrum;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn block_spectra_example1() {
        let net = known::example1();
        let gs = global_spectrum(&net).unwrap();
        let spectra = block_spectra(&net, &gs).unwrap();
        assert_eq!(spectra.len(), 3);
        // lambda = 0 block is A itself: eigenvalues {0, 0, 1}.
        let (lambda0, decomp0) = &spectra[0];
        assert!(lambda0.norm() < 1e-8);
        for (v, want) in decomp0.values.iter().zip([0.0, 0.0, 1.0]) {
            assert!((v - c(want, 0.)).norm() < 1e-7);
        }
        // Every block has an eigenvalue at 1.
        for (_, decomp) in &spectra {
            assert!(decomp.values.iter().any(|v| (v - c(1., 0.)).norm() < 1e-7));
        }
    }

    #[test]
    fn block_spectra_zero_coupling() {
        let mut net = known::example1();
        net.subsystem.c = crate::linalg::RMatrix::zeros(2, 3);
        let gs = global_spectrum(&net).unwrap();
        let spectra = block_spectra(&net, &gs).unwrap();
        let base = crate::linalg::eig_values(&net.subsystem.a_complex()).unwrap();
        for (_, decomp) in &spectra {
            for (v, b) in decomp.values.iter().zip(&base) {
                assert!((v - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn invariant_modes_examples() {
        let tol = Tolerances::default();
        let inv1 = detect_invariant_modes(&known::example1().subsystem, &tol).unwrap();
        assert_eq!(inv1.len(), 1);
        assert!((inv1[0] - c(1., 0.)).norm() < 1e-7);

        let inv2 = detect_invariant_modes(&known::example2_subsystem(), &tol).unwrap();
        assert_eq!(inv2.len(), 1);
        assert!((inv2[0] - c(1., 0.)).norm() < 1e-7);

        let inv2r = detect_invariant_modes(&known::example2_rescaled(), &tol).unwrap();
        assert!(inv2r.is_empty(), "rescaling should remove the mode: {inv2r:?}");
    }

    #[test]
    fn dfm_examples() {
        let tol = Tolerances::default();
        let dfm1 = detect_dfm(&known::example1().subsystem, &tol, tol.rng_seed).unwrap();
        assert_eq!(dfm1.len(), 1);
        assert!((dfm1[0] - c(1., 0.)).norm() < 1e-7);

        let dfm2 = detect_dfm(&known::example2_subsystem(), &tol, tol.rng_seed).unwrap();
        assert!(dfm2.is_empty(), "example 2 has no DFM: {dfm2:?}");

        // Uncontrollable SISO mode is fixed under any output feedback.
        let sub = SubsystemModel::new(
            crate::linalg::RMatrix::from_row_slice(2, 2, &[1., 0., 0., 2.]),
            crate::linalg::RMatrix::from_row_slice(2, 1, &[1., 0.]),
            crate::linalg::RMatrix::from_row_slice(1, 2, &[1., 0.]),
        )
        .unwrap();
        let dfm = detect_dfm(&sub, &tol, tol.rng_seed).unwrap();
        assert_eq!(dfm.len(), 1);
        assert!((dfm[0] - c(2., 0.)).norm() < 1e-7);
    }

    #[test]
    fn repeat_sets_example1() {
        let tol = Tolerances::default();
        let sub = known::example1().subsystem;
        assert_eq!(
            network_repeat_set(&sub, c(1., 0.), &tol).unwrap(),
            RepeatSet::AllLambda
        );
        match network_repeat_set(&sub, c(0., 0.), &tol).unwrap() {
            RepeatSet::Finite(set) => {
                assert_eq!(set.len(), 1);
                assert!(set[0].norm() < 1e-7);
            }
            other => panic!("expected finite set, got {other:?}"),
        }
        // det(100 I - A - lambda BC) = -99 (lambda - 100)(2 lambda - 100):
        // mu = 100 recurs at exactly two couplings.
        match network_repeat_set(&sub, c(100., 0.), &tol).unwrap() {
            RepeatSet::Finite(set) => {
                assert_eq!(set.len(), 2);
                assert!((set[0] - c(50., 0.)).norm() < 1e-4 * 50.0);
                assert!((set[1] - c(100., 0.)).norm() < 1e-4 * 100.0);
            }
            other => panic!("expected two couplings, got {other:?}"),
        }
    }

    #[test]
    fn projection_fixed_examples() {
        let tol = Tolerances::default();
        let (fixed1, p1) = projection_fixed(&known::example1().subsystem, c(1., 0.), &tol).unwrap();
        assert!(fixed1);
        let p1 = p1.unwrap();
        // p proportional to (1, 0)
        assert!(p1[0].norm() > 0.99 && p1[1].norm() < 1e-7, "p = {p1:?}");

        let (fixed2, p2) = projection_fixed(&known::example2_subsystem(), c(1., 0.), &tol).unwrap();
        assert!(fixed2);
        let p2 = p2.unwrap();
        // p proportional to (1, -1)
        let ratio = p2[1] / p2[0];
        assert!((ratio - c(-1., 0.)).norm() < 1e-7, "p = {p2:?}");

        let (fixed3, p3) = projection_fixed(&known::example3().subsystem, c(1., 0.), &tol).unwrap();
        assert!(!fixed3);
        assert!(p3.is_none());
    }

    #[test]
    fn projection_fixed_rejects_non_invariant_mu() {
        let tol = Tolerances::default();
        let err = projection_fixed(&known::example1().subsystem, c(0., 0.), &tol);
        assert!(matches!(err, Err(Error::NotInvariantMode { .. })));
    }

    #[test]
    fn catalog_example1() {
        let net = known::example1();
        let gs = global_spectrum(&net).unwrap();
        let catalog = shared_mode_catalog(&net, &gs).unwrap();

        let mu1 = catalog
            .records
            .iter()
            .find(|r| (r.mu - c(1., 0.)).norm() < 1e-7)
            .expect("mode at 1");
        assert_eq!(mu1.total_geometric, 3);
        assert_eq!(mu1.per_block.len(), 3);
        assert!(mu1.per_block.iter().all(|b| b.beta == 1));
        assert!(mu1.is_invariant());
        assert!(mu1.projection_fixed);

        let mu0 = catalog
            .records
            .iter()
            .find(|r| r.mu.norm() < 1e-7)
            .expect("mode at 0");
        assert_eq!(mu0.classification, ModeClass::SpecialRepeat);
        match &mu0.repeat_set {
            RepeatSet::Finite(set) => assert_eq!(set.len(), 1),
            other => panic!("expected finite, got {other:?}"),
        }

        // DFM containment within the invariant set.
        for d in &catalog.dfm_modes {
            assert!(catalog
                .invariant_modes()
                .any(|r| (r.mu - d).norm() < 1e-6));
        }

        // Stored left eigenvectors satisfy the eigen relation.
        for rec in &catalog.records {
            for bp in &rec.per_block {
                let block = net.subsystem.block(bp.lambda);
                for r in 0..bp.left_vectors.nrows() {
                    let w = bp.left_vectors.row(r);
                    let residual = (w * &block) - w * rec.mu;
                    assert!(residual.norm() < 1e-6, "mu={} lambda={}", rec.mu, bp.lambda);
                }
            }
        }
    }

    #[test]
    fn catalog_example3_has_invariant_mode_in_all_blocks() {
        let net = known::example3();
        let gs = global_spectrum(&net).unwrap();
        let catalog = shared_mode_catalog(&net, &gs).unwrap();
        let mu1 = catalog
            .records
            .iter()
            .find(|r| (r.mu - c(1., 0.)).norm() < 1e-7)
            .expect("mode at 1");
        assert!(mu1.is_invariant());
        assert!(!mu1.projection_fixed);
        assert_eq!(mu1.per_block.len(), 3);
    }

    #[test]
    fn catalog_single_node() {
        let net = known::single_node(known::example2_subsystem());
        let gs = global_spectrum(&net).unwrap();
        let catalog = shared_mode_catalog(&net, &gs).unwrap();
        for rec in &catalog.records {
            assert_eq!(rec.per_block.len(), 1);
            assert_eq!(rec.total_geometric, rec.per_block[0].beta);
        }
    }
}
