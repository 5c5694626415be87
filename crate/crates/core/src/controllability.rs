//! The test battery: PBH pair tests, the Kronecker-row modal rank test,
//! multiplicity/actuation/partition bounds, and the brute-force Kalman oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    cluster_values, eig_values, rank_with_margin, to_complex, CMatrix, Tolerances,
};
use crate::model::{assemble, build_graph, global_spectrum, DiGraph, GlobalSpectrum, Network};
use crate::modes::{shared_mode_catalog, ModeCatalog};

/// Partition-bound check for one vertex subset.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionCheck {
    /// Sorted vertex subset.
    pub subset: Vec<usize>,
    pub n_hat: usize,
    /// Actuated vertices inside the subset.
    pub m_hat: usize,
    /// Non-actuated vertices in the subset with an incoming edge from outside.
    pub boundary: usize,
    /// ceil(n_hat / m) - boundary; may be non-positive.
    pub bound: i64,
    pub satisfied: bool,
}

impl PartitionCheck {
    /// How far below the bound the subset falls; 0 when satisfied.
    pub fn deficit(&self) -> i64 {
        (self.bound - self.m_hat as i64).max(0)
    }
}

/// PBH pair test outcome over the clustered spectrum of F.
#[derive(Clone, Debug)]
pub struct PbhResult {
    pub controllable: bool,
    /// Distinct eigenvalues where rank [F - mu I | B] dropped.
    pub uncontrollable_modes: Vec<Complex64>,
    pub marginal: bool,
}

/// Modal rank test outcome.
#[derive(Clone, Debug, PartialEq)]
pub enum ModalVerdict {
    Controllable,
    Uncontrollable {
        witness: Complex64,
        rows: usize,
        rank: usize,
    },
}

/// One step of the uncontrollability reason chain, ordered from the cheapest
/// necessary condition to the exact modal test.
#[derive(Clone, Debug, PartialEq)]
pub enum Reason {
    SubsystemPairUncontrollable {
        modes: Vec<Complex64>,
    },
    GlobalPairUncontrollable {
        modes: Vec<Complex64>,
    },
    BlockPairUncontrollable {
        lambda: Complex64,
        modes: Vec<Complex64>,
    },
    MultiplicityBound {
        mu: Complex64,
        total_geometric: usize,
        input_capacity: usize,
    },
    ActuationBound {
        required: usize,
        actuated: usize,
    },
    ProjectionFixedActuation {
        mu: Complex64,
        actuated: usize,
        vertices: usize,
    },
    PartitionBound {
        subset: Vec<usize>,
        bound: i64,
        actuated_in_subset: usize,
    },
    ModalRankDeficient {
        mu: Complex64,
        rows: usize,
        rank: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Controllable,
    Uncontrollable(Vec<Reason>),
}

impl Verdict {
    pub fn is_controllable(&self) -> bool {
        matches!(self, Verdict::Controllable)
    }
}

#[derive(Clone, Debug)]
pub struct ActuationBound {
    pub required: usize,
    pub actuated: usize,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct ProjectionRequirement {
    pub mu: Complex64,
    /// M = N is required when a projection-fixed invariant mode exists.
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub rank: usize,
    pub dimension: usize,
    pub agrees: bool,
    pub marginal: bool,
}

/// Aggregated analysis of one network.
#[derive(Clone, Debug)]
pub struct ControllabilityReport {
    pub subsystem_controllable: bool,
    pub subsystem_observable: bool,
    pub global_controllable: bool,
    /// One entry per distinct eigenvalue of G.
    pub per_block_controllable: Vec<(Complex64, bool)>,
    pub mode_catalog: ModeCatalog,
    pub modal_test: ModalVerdict,
    /// (mu, P(mu), M*m) for every mode with M*m < P(mu).
    pub multiplicity_violations: Vec<(Complex64, usize, usize)>,
    pub actuation_bound: ActuationBound,
    pub projection_fixed_requirement: Option<ProjectionRequirement>,
    pub partition_violations: Vec<PartitionCheck>,
    pub oracle: Option<OracleCheck>,
    pub verdict: Verdict,
    /// Some rank or clustering decision fell within 10x of its tolerance.
    pub tolerance_marginal: bool,
}

/// Hautus test: the pair (F, B) is controllable iff [F - mu I | B] has full
/// row rank at every eigenvalue mu of F. Tested once per eigenvalue cluster.
pub fn pbh_controllable(f: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<PbhResult> {
    let n = f.nrows();
    if b.nrows() != n {
        return Err(Error::Dimension(format!(
            "PBH pair: F is {n}x{n} but B has {} rows",
            b.nrows()
        )));
    }
    let values = eig_values(f)?;
    let clusters = cluster_values(&values, tol);
    let mut failing = Vec::new();
    let mut marginal = clusters.marginal;
    for cluster in &clusters.clusters {
        let mu = cluster.representative;
        let mut pencil = CMatrix::zeros(n, n + b.ncols());
        pencil.view_mut((0, 0), (n, n)).copy_from(f);
        for i in 0..n {
            pencil[(i, i)] -= mu;
        }
        pencil.view_mut((0, n), (n, b.ncols())).copy_from(b);
        let (rank, m) = rank_with_margin(&pencil, tol);
        marginal |= m;
        if rank < n {
            failing.push(mu);
        }
    }
    Ok(PbhResult {
        controllable: failing.is_empty(),
        uncontrollable_modes: failing,
        marginal,
    })
}

/// Exact modal rank test. For each distinct shared eigenvalue mu, stack the
/// rows (v_j^T S) (x) (w_jl^T B) over every block j where mu appears and
/// every left eigenvector l of that block; controllable at mu iff the stack
/// has full row rank.
///
/// Rank is taken over the complex field: real-coefficient models produce
/// complex eigenvectors in conjugate pairs, and complex row independence is
/// the PBH-equivalent reading of the eigenvector condition.
pub fn modal_test(
    net: &Network,
    gs: &GlobalSpectrum,
    catalog: &ModeCatalog,
    tol: &Tolerances,
) -> Result<(ModalVerdict, bool)> {
    if !gs.diagonalizable {
        return Err(Error::DefectiveNetworkMatrix {
            eigenvalue: Complex64::new(f64::NAN, 0.0),
            geometric: 0,
            algebraic: 0,
        });
    }
    let s = to_complex(&net.global.s_matrix());
    let b = net.subsystem.b_complex();
    let mut marginal = false;
    for record in &catalog.records {
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for presence in &record.per_block {
            let vs = gs.left_eigenvectors.row(presence.block) * &s;
            for l in 0..presence.left_vectors.nrows() {
                let wb = presence.left_vectors.row(l) * &b;
                // Row of (v^T S) (x) (w^T B).
                let mut row = Vec::with_capacity(vs.len() * wb.len());
                for x in vs.iter() {
                    for y in wb.iter() {
                        row.push(x * y);
                    }
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            continue;
        }
        let cols = rows[0].len();
        let stack = CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
        let (rank, m) = rank_with_margin(&stack, tol);
        marginal |= m;
        if rank < rows.len() {
            return Ok((
                ModalVerdict::Uncontrollable {
                    witness: record.mu,
                    rows: rows.len(),
                    rank,
                },
                marginal,
            ));
        }
    }
    Ok((ModalVerdict::Controllable, marginal))
}

/// Every mode whose summed geometric multiplicity P(mu) exceeds the input
/// capacity M*m; any entry certifies uncontrollability.
pub fn multiplicity_bound(
    catalog: &ModeCatalog,
    actuated: usize,
    inputs: usize,
) -> Vec<(Complex64, usize, usize)> {
    let capacity = actuated * inputs;
    catalog
        .records
        .iter()
        .filter(|r| r.total_geometric > capacity)
        .map(|r| (r.mu, r.total_geometric, capacity))
        .collect()
}

/// True iff no shared eigenvalue spans two distinct coupling clusters;
/// together with global controllability this certifies controllability
/// without the full modal test.
pub fn distinct_block_disjointness(catalog: &ModeCatalog, gs: &GlobalSpectrum) -> bool {
    catalog.records.iter().all(|record| {
        let mut clusters = record
            .per_block
            .iter()
            .map(|p| gs.distinct_clusters.cluster_of(p.block));
        match clusters.next() {
            Some(first) => clusters.all(|k| k == first),
            None => true,
        }
    })
}

/// With any invariant mode present, at least ceil(N / m) actuated vertices
/// are necessary. Vacuously ok without invariant modes.
pub fn invariant_actuation_bound(
    catalog: &ModeCatalog,
    vertices: usize,
    actuated: usize,
    inputs: usize,
) -> ActuationBound {
    let required = vertices.div_ceil(inputs);
    ActuationBound {
        required,
        actuated,
        ok: !catalog.has_invariant_modes() || actuated >= required,
    }
}

/// Present iff some invariant mode is projection-fixed; such a mode forces
/// actuation at every vertex.
pub fn projection_fixed_requirement(
    catalog: &ModeCatalog,
    vertices: usize,
    actuated: usize,
) -> Option<ProjectionRequirement> {
    catalog
        .invariant_modes()
        .find(|r| r.projection_fixed)
        .map(|r| ProjectionRequirement {
            mu: r.mu,
            ok: actuated == vertices,
        })
}

/// Partition bound for one vertex subset: with an invariant mode present,
/// the actuated count inside the subset must reach ceil(|subset| / m) minus
/// the number of non-actuated members fed from outside.
pub fn partition_check(net: &Network, graph: &DiGraph, subset: &[usize]) -> Result<PartitionCheck> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let vertices = net.global.n_subsystems;
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::Index("partition subset has repeated vertices".into()));
    }
    if let Some(&v) = sorted.iter().find(|&&v| v >= vertices) {
        return Err(Error::Index(format!(
            "partition subset vertex {v} out of range 0..{vertices}"
        )));
    }
    let inside = |v: usize| sorted.binary_search(&v).is_ok();
    let actuated = |v: usize| net.global.actuated.binary_search(&v).is_ok();
    let n_hat = sorted.len();
    let m_hat = sorted.iter().filter(|&&v| actuated(v)).count();
    let boundary = sorted
        .iter()
        .filter(|&&v| !actuated(v) && graph.in_neighbors(v).any(|from| !inside(from)))
        .count();
    let bound = n_hat.div_ceil(net.subsystem.m) as i64 - boundary as i64;
    Ok(PartitionCheck {
        subset: sorted,
        n_hat,
        m_hat,
        boundary,
        bound,
        satisfied: m_hat as i64 >= bound,
    })
}

/// All violating subsets up to `max_subset_size` (default: all sizes),
/// sorted by decreasing deficit then lexicographically.
pub fn partition_scan(
    net: &Network,
    graph: &DiGraph,
    max_subset_size: Option<usize>,
) -> Result<Vec<PartitionCheck>> {
    let vertices = net.global.n_subsystems;
    let cap = max_subset_size.unwrap_or(vertices).min(vertices);
    let budget: u64 = 1 << 20;
    let mut count: u64 = 0;
    let mut choose: u64 = 1;
    for k in 1..=cap as u64 {
        choose = choose.saturating_mul(vertices as u64 - k + 1) / k;
        count = count.saturating_add(choose);
        if count > budget {
            return Err(Error::BudgetExceeded { subsets: count });
        }
    }
    let mut violations = Vec::new();
    let mut subset = Vec::with_capacity(cap);
    scan_rec(net, graph, 0, cap, &mut subset, &mut violations)?;
    violations.sort_by(|a, b| b.deficit().cmp(&a.deficit()).then(a.subset.cmp(&b.subset)));
    Ok(violations)
}

fn scan_rec(
    net: &Network,
    graph: &DiGraph,
    start: usize,
    cap: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<PartitionCheck>,
) -> Result<()> {
    if !subset.is_empty() {
        let check = partition_check(net, graph, subset)?;
        if !check.satisfied {
            out.push(check);
        }
    }
    if subset.len() == cap {
        return Ok(());
    }
    for v in start..net.global.n_subsystems {
        subset.push(v);
        scan_rec(net, graph, v + 1, cap, subset, out)?;
        subset.pop();
    }
    Ok(())
}

/// Brute-force oracle: numerical rank of the Kalman controllability matrix of
/// the assembled pair, built by incremental Gram-Schmidt so high powers of
/// the state matrix never appear explicitly.
pub fn kalman_rank(net: &Network) -> Result<OracleRank> {
    let dimension = net.global.n_subsystems * net.subsystem.n;
    const LIMIT: usize = 400;
    if dimension > LIMIT {
        return Err(Error::ScaleLimit {
            dim: dimension,
            limit: LIMIT,
        });
    }
    let tol = &net.tolerances;
    let (a, b) = assemble(net);
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut block: Vec<nalgebra::DVector<f64>> = (0..b.ncols())
        .map(|j| b.column(j).clone_owned())
        .collect();
    let mut marginal = false;
    for _ in 0..dimension {
        let mut next = Vec::with_capacity(block.len());
        let mut grew = false;
        for col in &block {
            let norm = col.norm();
            if norm == 0.0 {
                continue;
            }
            let mut v = col / norm;
            // One reorthogonalization pass keeps the basis orthonormal.
            for _ in 0..2 {
                for q in &basis {
                    let coeff = q.dot(&v);
                    v -= q * coeff;
                }
            }
            let residual = v.norm();
            if residual > tol.rank_rel_tol / 10.0 && residual < tol.rank_rel_tol * 10.0 {
                marginal = true;
            }
            if residual > tol.rank_rel_tol {
                let q = v / residual;
                next.push(&a * &q);
                basis.push(q);
                grew = true;
            }
        }
        if !grew || basis.len() == dimension {
            break;
        }
        block = next;
    }
    Ok(OracleRank {
        rank: basis.len(),
        dimension,
        marginal,
    })
}

#[derive(Clone, Debug)]
pub struct OracleRank {
    pub rank: usize,
    pub dimension: usize,
    pub marginal: bool,
}

/// Full pipeline: spectrum, mode catalog, every test, oracle, verdict.
pub fn analyze(net: &Network) -> Result<ControllabilityReport> {
    analyze_with(net, true)
}

/// `analyze` with the oracle optional (it dominates runtime at larger N*n).
pub fn analyze_with(net: &Network, run_oracle: bool) -> Result<ControllabilityReport> {
    let tol = &net.tolerances;
    let sub = &net.subsystem;
    let gs = global_spectrum(net)?;
    let catalog = shared_mode_catalog(net, &gs)?;
    let mut marginal = catalog.marginal || gs.distinct_clusters.marginal;

    let a = sub.a_complex();
    let b = sub.b_complex();
    let sub_ctrl = pbh_controllable(&a, &b, tol)?;
    let sub_obs = pbh_controllable(&a.transpose(), &to_complex(&sub.c).transpose(), tol)?;
    let glob = pbh_controllable(
        &net.global.g_complex(),
        &to_complex(&net.global.s_matrix()),
        tol,
    )?;
    marginal |= sub_ctrl.marginal || sub_obs.marginal || glob.marginal;

    let mut per_block = Vec::new();
    let mut block_reasons = Vec::new();
    for lambda in gs.distinct() {
        let res = pbh_controllable(&sub.block(lambda), &b, tol)?;
        marginal |= res.marginal;
        per_block.push((lambda, res.controllable));
        if !res.controllable {
            block_reasons.push(Reason::BlockPairUncontrollable {
                lambda,
                modes: res.uncontrollable_modes,
            });
        }
    }

    let vertices = net.global.n_subsystems;
    let actuated = net.global.actuated_count();
    let mult = multiplicity_bound(&catalog, actuated, sub.m);
    let act = invariant_actuation_bound(&catalog, vertices, actuated, sub.m);
    let proj = projection_fixed_requirement(&catalog, vertices, actuated);

    let partition_violations = if catalog.has_invariant_modes() && vertices <= 20 {
        let graph = build_graph(net);
        partition_scan(net, &graph, None)?
    } else {
        Vec::new()
    };

    let (modal, modal_marginal) = modal_test(net, &gs, &catalog, tol)?;
    marginal |= modal_marginal;

    let mut reasons = Vec::new();
    if !sub_ctrl.controllable {
        reasons.push(Reason::SubsystemPairUncontrollable {
            modes: sub_ctrl.uncontrollable_modes.clone(),
        });
    }
    if !glob.controllable {
        reasons.push(Reason::GlobalPairUncontrollable {
            modes: glob.uncontrollable_modes.clone(),
        });
    }
    reasons.extend(block_reasons);
    for &(mu, p, cap) in &mult {
        reasons.push(Reason::MultiplicityBound {
            mu,
            total_geometric: p,
            input_capacity: cap,
        });
    }
    if !act.ok {
        reasons.push(Reason::ActuationBound {
            required: act.required,
            actuated: act.actuated,
        });
    }
    if let Some(req) = &proj {
        if !req.ok {
            reasons.push(Reason::ProjectionFixedActuation {
                mu: req.mu,
                actuated,
                vertices,
            });
        }
    }
    for v in &partition_violations {
        reasons.push(Reason::PartitionBound {
            subset: v.subset.clone(),
            bound: v.bound,
            actuated_in_subset: v.m_hat,
        });
    }
    if let ModalVerdict::Uncontrollable { witness, rows, rank } = modal {
        reasons.push(Reason::ModalRankDeficient {
            mu: witness,
            rows,
            rank,
        });
    }
    let verdict = if reasons.is_empty() {
        Verdict::Controllable
    } else {
        Verdict::Uncontrollable(reasons)
    };

    let oracle = if run_oracle && vertices * sub.n <= 400 {
        let o = kalman_rank(net)?;
        marginal |= o.marginal;
        Some(OracleCheck {
            rank: o.rank,
            dimension: o.dimension,
            agrees: (o.rank == o.dimension) == verdict.is_controllable(),
            marginal: o.marginal,
        })
    } else {
        None
    };

    Ok(ControllabilityReport {
        subsystem_controllable: sub_ctrl.controllable,
        subsystem_observable: sub_obs.controllable,
        global_controllable: glob.controllable,
        per_block_controllable: per_block,
        mode_catalog: catalog,
        modal_test: modal,
        multiplicity_violations: mult,
        actuation_bound: act,
        projection_fixed_requirement: proj,
        partition_violations,
        oracle,
        verdict,
        tolerance_marginal: marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::known;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pbh_examples() {
        let tol = Tolerances::default();
        let net = known::example1();
        let sub = &net.subsystem;
        let res = pbh_controllable(&sub.a_complex(), &sub.b_complex(), &tol).unwrap();
        assert!(res.controllable);
        let res = pbh_controllable(
            &net.global.g_complex(),
            &to_complex(&net.global.s_matrix()),
            &tol,
        )
        .unwrap();
        assert!(res.controllable);
    }

    #[test]
    fn pbh_diagonal_counterexample() {
        let tol = Tolerances::default();
        let f = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(2., 0.)]));
        let b = CMatrix::from_row_slice(2, 1, &[c(1., 0.), c(0., 0.)]);
        let res = pbh_controllable(&f, &b, &tol).unwrap();
        assert!(!res.controllable);
        assert_eq!(res.uncontrollable_modes.len(), 1);
        assert!((res.uncontrollable_modes[0] - c(2., 0.)).norm() < 1e-9);
    }

    fn full_report(net: &Network) -> ControllabilityReport {
        analyze(net).unwrap()
    }

    #[test]
    fn modal_test_example1_fails_at_one() {
        let report = full_report(&known::example1());
        match report.modal_test {
            ModalVerdict::Uncontrollable { witness, rows, rank } => {
                assert!((witness - c(1., 0.)).norm() < 1e-7);
                assert_eq!(rows, 3);
                assert!(rank <= 2);
            }
            ModalVerdict::Controllable => panic!("expected modal failure"),
        }
        assert!(!report.verdict.is_controllable());
    }

    #[test]
    fn modal_test_swapped_b_passes() {
        let report = full_report(&known::example1_swapped());
        assert_eq!(report.modal_test, ModalVerdict::Controllable);
        assert!(report.verdict.is_controllable());
        let oracle = report.oracle.unwrap();
        assert_eq!(oracle.rank, 9);
        assert!(oracle.agrees);
    }

    #[test]
    fn example3_controllable_despite_invariant_mode() {
        let report = full_report(&known::example3());
        assert!(report.mode_catalog.has_invariant_modes());
        assert_eq!(report.modal_test, ModalVerdict::Controllable);
        assert!(report.verdict.is_controllable());
        assert!(report.multiplicity_violations.is_empty());
        assert!(report.projection_fixed_requirement.is_none());
        assert!(report.partition_violations.is_empty());
        let oracle = report.oracle.unwrap();
        assert_eq!(oracle.rank, 9);
        assert!(oracle.agrees);
    }

    #[test]
    fn example1_bounds_and_reasons() {
        let report = full_report(&known::example1());
        // mu = 1 has P = 3 against M*m = 2.
        assert_eq!(report.multiplicity_violations.len(), 1);
        let (mu, p, cap) = report.multiplicity_violations[0];
        assert!((mu - c(1., 0.)).norm() < 1e-7);
        assert_eq!((p, cap), (3, 2));
        assert_eq!(report.actuation_bound.required, 2);
        assert!(!report.actuation_bound.ok);
        let proj = report.projection_fixed_requirement.as_ref().unwrap();
        assert!(!proj.ok);
        let oracle = report.oracle.as_ref().unwrap();
        assert!(oracle.rank < 9);
        assert!(oracle.agrees);
        match &report.verdict {
            Verdict::Uncontrollable(reasons) => {
                assert!(reasons
                    .iter()
                    .any(|r| matches!(r, Reason::MultiplicityBound { .. })));
                assert!(reasons
                    .iter()
                    .any(|r| matches!(r, Reason::ModalRankDeficient { .. })));
            }
            Verdict::Controllable => panic!("expected uncontrollable"),
        }
    }

    #[test]
    fn disjointness_example1_false() {
        let net = known::example1();
        let gs = global_spectrum(&net).unwrap();
        let catalog = shared_mode_catalog(&net, &gs).unwrap();
        assert!(!distinct_block_disjointness(&catalog, &gs));
    }

    #[test]
    fn disjointness_single_node_true() {
        let net = known::single_node(known::example2_subsystem());
        let gs = global_spectrum(&net).unwrap();
        let catalog = shared_mode_catalog(&net, &gs).unwrap();
        assert!(distinct_block_disjointness(&catalog, &gs));
    }

    #[test]
    fn partition_checks_example1() {
        let net = known::example1();
        let graph = build_graph(&net);
        let full = partition_check(&net, &graph, &[0, 1, 2]).unwrap();
        assert_eq!((full.n_hat, full.m_hat, full.boundary, full.bound), (3, 1, 0, 2));
        assert!(!full.satisfied);

        let single = partition_check(&net, &graph, &[2]).unwrap();
        assert_eq!((single.m_hat, single.boundary, single.bound), (0, 1, 0));
        assert!(single.satisfied);

        let pair = partition_check(&net, &graph, &[1, 2]).unwrap();
        assert_eq!((pair.m_hat, pair.boundary, pair.bound), (0, 1, 0));
        assert!(pair.satisfied);

        assert!(matches!(
            partition_check(&net, &graph, &[]),
            Err(Error::EmptySubset)
        ));
        assert!(partition_check(&net, &graph, &[5]).is_err());
    }

    #[test]
    fn partition_scan_example1_and_example3() {
        let net = known::example1();
        let graph = build_graph(&net);
        let violations = partition_scan(&net, &graph, None).unwrap();
        assert!(violations.iter().any(|v| v.subset == vec![0, 1, 2]));

        let net3 = known::example3();
        let graph3 = build_graph(&net3);
        assert!(partition_scan(&net3, &graph3, None).unwrap().is_empty());
    }

    #[test]
    fn kalman_rank_examples() {
        assert!(kalman_rank(&known::example1()).unwrap().rank < 9);
        assert_eq!(kalman_rank(&known::example1_swapped()).unwrap().rank, 9);
        assert_eq!(kalman_rank(&known::example3()).unwrap().rank, 9);
    }

    #[test]
    fn kalman_rank_scale_limit() {
        let mut net = known::example1();
        net.global.n_subsystems = 200;
        assert!(matches!(
            kalman_rank(&net),
            Err(Error::ScaleLimit { dim: 600, limit: 400 })
        ));
    }
}
