//! Model ingestion, validation, Kronecker assembly and global-spectrum
//! extraction for linearly-coupled networks.
//!
//! The model file is a UTF-8 JSON object with fields `n, m, N` (integers),
//! `A, B, C, G` (row-major nested arrays), `actuated` (0-based subsystem
//! indices), plus optional `tolerances` and `C_hat` objects.

use std::collections::BTreeSet;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cluster_values, eig_values, identity, is_diagonalizable, kron, left_null_basis_scaled,
    to_complex, CMatrix, ClusterSet, RMatrix, Tolerances,
};

/// The subsystem triple (C, A, B) with state dimension n and channel count m.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemModel {
    pub n: usize,
    pub m: usize,
    pub a: RMatrix,
    pub b: RMatrix,
    pub c: RMatrix,
}

impl SubsystemModel {
    pub fn new(a: RMatrix, b: RMatrix, c: RMatrix) -> Result<Self> {
        let n = a.nrows();
        let m = b.ncols();
        if n == 0 || m == 0 {
            return Err(Error::Dimension("n and m must be at least 1".into()));
        }
        if a.ncols() != n {
            return Err(Error::Dimension(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != n {
            return Err(Error::Dimension(format!(
                "B must have {} rows to match A, got {}",
                n,
                b.nrows()
            )));
        }
        if c.nrows() != m || c.ncols() != n {
            return Err(Error::Dimension(format!(
                "C must be {}x{}, got {}x{}",
                m,
                n,
                c.nrows(),
                c.ncols()
            )));
        }
        Ok(SubsystemModel { n, m, a, b, c })
    }

    /// The coupling matrix BC.
    pub fn bc(&self) -> RMatrix {
        &self.b * &self.c
    }

    pub fn a_complex(&self) -> CMatrix {
        to_complex(&self.a)
    }

    pub fn b_complex(&self) -> CMatrix {
        to_complex(&self.b)
    }

    pub fn bc_complex(&self) -> CMatrix {
        to_complex(&self.bc())
    }

    /// The block A + lambda * BC.
    pub fn block(&self, lambda: Complex64) -> CMatrix {
        self.a_complex() + self.bc_complex() * lambda
    }
}

/// The global model: network matrix G and the actuated set S.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalModel {
    pub n_subsystems: usize,
    pub g: RMatrix,
    /// Strictly increasing 0-based indices of actuated subsystems.
    pub actuated: Vec<usize>,
}

impl GlobalModel {
    pub fn new(g: RMatrix, actuated: Vec<usize>) -> Result<Self> {
        let n = g.nrows();
        if n == 0 || g.ncols() != n {
            return Err(Error::Dimension(format!(
                "G must be square and nonempty, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        let mut seen = BTreeSet::new();
        for &i in &actuated {
            if i >= n {
                return Err(Error::Index(format!(
                    "actuated index {i} out of range for N = {n}"
                )));
            }
            if !seen.insert(i) {
                return Err(Error::Index(format!("actuated index {i} duplicated")));
            }
        }
        let mut actuated = actuated;
        actuated.sort_unstable();
        Ok(GlobalModel {
            n_subsystems: n,
            g,
            actuated,
        })
    }

    /// Number of actuated subsystems (M).
    pub fn actuated_count(&self) -> usize {
        self.actuated.len()
    }

    /// The N x M 0-1 indicator matrix S.
    pub fn s_matrix(&self) -> RMatrix {
        let mut s = RMatrix::zeros(self.n_subsystems, self.actuated.len());
        for (col, &i) in self.actuated.iter().enumerate() {
            s[(i, col)] = 1.0;
        }
        s
    }

    pub fn g_complex(&self) -> CMatrix {
        to_complex(&self.g)
    }
}

/// A validated network: subsystem model, global model and tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    pub subsystem: SubsystemModel,
    pub global: GlobalModel,
    pub tolerances: Tolerances,
    /// Fixed measurement map for protocol design mode.
    pub c_hat: Option<RMatrix>,
}

/// Interaction digraph: edge (j -> i) iff g_ij is a literal nonzero, i != j.
#[derive(Clone, Debug, PartialEq)]
pub struct DiGraph {
    pub vertex_count: usize,
    /// Ordered pairs (from, to).
    pub edges: BTreeSet<(usize, usize)>,
}

impl DiGraph {
    pub fn in_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |&&(_, to)| to == i)
            .map(|&(from, _)| from)
    }
}

/// Spectrum of G with a full left-eigenvector set.
#[derive(Clone, Debug)]
pub struct GlobalSpectrum {
    /// Eigenvalues with multiplicity, sorted by (re, im).
    pub eigenvalues: Vec<Complex64>,
    /// Row j is a left eigenvector paired with eigenvalue j.
    pub left_eigenvectors: CMatrix,
    pub distinct_clusters: ClusterSet,
    pub diagonalizable: bool,
}

impl GlobalSpectrum {
    /// Distinct eigenvalues (cluster representatives).
    pub fn distinct(&self) -> Vec<Complex64> {
        self.distinct_clusters
            .clusters
            .iter()
            .map(|c| c.representative)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// File schema
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub n_subsystems: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    pub actuated: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(rename = "C_hat", skip_serializing_if = "Option::is_none")]
    pub c_hat: Option<Vec<Vec<f64>>>,
}

fn nested_to_matrix(name: &str, rows: usize, cols: usize, data: &[Vec<f64>]) -> Result<RMatrix> {
    if data.len() != rows {
        return Err(Error::Dimension(format!(
            "{name}: expected {rows} rows, got {}",
            data.len()
        )));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Dimension(format!(
                "{name}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(RMatrix::from_fn(rows, cols, |i, j| data[i][j]))
}

fn matrix_to_nested(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl NetworkFile {
    pub fn into_network(self) -> Result<Network> {
        let a = nested_to_matrix("A", self.n, self.n, &self.a)?;
        let b = nested_to_matrix("B", self.n, self.m, &self.b)?;
        let c = nested_to_matrix("C", self.m, self.n, &self.c)?;
        let g = nested_to_matrix("G", self.n_subsystems, self.n_subsystems, &self.g)?;
        let subsystem = SubsystemModel::new(a, b, c)?;
        let global = GlobalModel::new(g, self.actuated)?;
        let tolerances = self.tolerances.unwrap_or_default();
        tolerances.validate()?;
        let c_hat = match self.c_hat {
            Some(rows) => {
                let q = rows.len();
                Some(nested_to_matrix("C_hat", q, subsystem.n, &rows)?)
            }
            None => None,
        };
        Ok(Network {
            subsystem,
            global,
            tolerances,
            c_hat,
        })
    }

    pub fn from_network(net: &Network) -> NetworkFile {
        NetworkFile {
            n: net.subsystem.n,
            m: net.subsystem.m,
            n_subsystems: net.global.n_subsystems,
            a: matrix_to_nested(&net.subsystem.a),
            b: matrix_to_nested(&net.subsystem.b),
            c: matrix_to_nested(&net.subsystem.c),
            g: matrix_to_nested(&net.global.g),
            actuated: net.global.actuated.clone(),
            tolerances: Some(net.tolerances.clone()),
            c_hat: net.c_hat.as_ref().map(matrix_to_nested),
        }
    }
}

/// Parse and validate a model file.
pub fn load_network(path: &Path) -> Result<Network> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: display.clone(),
        detail: e.to_string(),
    })?;
    parse_network(&text, &display)
}

/// Parse a model from JSON text; `origin` labels diagnostics.
pub fn parse_network(text: &str, origin: &str) -> Result<Network> {
    let file: NetworkFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        detail: e.to_string(),
    })?;
    file.into_network()
}

pub fn serialize_network(net: &Network) -> String {
    serde_json::to_string_pretty(&NetworkFile::from_network(net)).expect("network serialization")
}

/// Lint: true when G is essentially nonnegative off-diagonal (the diffusive
/// convention). Purely advisory.
pub fn is_essentially_nonnegative(g: &RMatrix) -> bool {
    let n = g.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || g[(i, j)] >= 0.0))
}

// ---------------------------------------------------------------------------
// Assembly and spectrum
// ---------------------------------------------------------------------------

/// The assembled pair: state = I_N (x) A + G (x) BC, input = S (x) B.
pub fn assemble(net: &Network) -> (RMatrix, RMatrix) {
    let n_sub = net.global.n_subsystems;
    let eye = RMatrix::identity(n_sub, n_sub);
    let state = eye.kronecker(&net.subsystem.a) + net.global.g.kronecker(&net.subsystem.bc());
    let input = net.global.s_matrix().kronecker(&net.subsystem.b);
    (state, input)
}

/// Complex view of the assembled pair.
pub fn assemble_complex(net: &Network) -> (CMatrix, CMatrix) {
    let (state, input) = assemble(net);
    (to_complex(&state), to_complex(&input))
}

/// Interaction digraph from the literal zero pattern of G.
pub fn build_graph(net: &Network) -> DiGraph {
    let g = &net.global.g;
    let n = net.global.n_subsystems;
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && g[(i, j)] != 0.0 {
                edges.insert((j, i));
            }
        }
    }
    DiGraph {
        vertex_count: n,
        edges,
    }
}

/// Eigenvalues of G with multiplicity plus a full independent left-eigenvector
/// set per cluster. Errors with [`Error::DefectiveNetworkMatrix`] when some
/// cluster is geometrically deficient.
pub fn global_spectrum(net: &Network) -> Result<GlobalSpectrum> {
    let g = net.global.g_complex();
    let n = net.global.n_subsystems;
    let tol = &net.tolerances;
    let eigenvalues = eig_values(&g)?;
    let distinct_clusters = cluster_values(&eigenvalues, tol);
    let mut left = CMatrix::zeros(n, n);
    for cluster in &distinct_clusters.clusters {
        let shifted = &g - identity(n) * cluster.representative;
        let basis = left_null_basis_scaled(&shifted, tol, g.norm() + cluster.representative.norm());
        if basis.nrows() < cluster.members.len() {
            return Err(Error::DefectiveNetworkMatrix {
                eigenvalue: cluster.representative,
                geometric: basis.nrows(),
                algebraic: cluster.members.len(),
            });
        }
        for (slot, &j) in cluster.members.iter().enumerate() {
            left.set_row(j, &basis.row(slot));
        }
    }
    let diagonalizable = is_diagonalizable(&g, tol)?;
    Ok(GlobalSpectrum {
        eigenvalues,
        left_eigenvectors: left,
        distinct_clusters,
        diagonalizable,
    })
}

/// Kronecker product re-export for callers working on complex matrices.
pub fn kron_c(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(a, b)
}

/// Built-in regression models mirroring the worked examples shipped as
/// fixtures. Used across the test suites.
pub mod known {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> RMatrix {
        RMatrix::from_row_slice(rows, cols, data)
    }

    /// 3-node chain with a projection-fixed invariant mode; single actuated node.
    pub fn example1() -> Network {
        let a = mat(3, 3, &[0., 0., 0., 0., 0., 1., 1., 0., 1.]);
        let b = mat(3, 2, &[1., 0., 0., 1., 0., 0.]);
        let c = mat(2, 3, &[1., 0., 0., 0., 2., 0.]);
        let g = mat(3, 3, &[2., -2., 0., -2., 4., -2., 0., -2., 2.]);
        Network {
            subsystem: SubsystemModel::new(a, b, c).unwrap(),
            global: GlobalModel::new(g, vec![0]).unwrap(),
            tolerances: Tolerances::default(),
            c_hat: None,
        }
    }

    /// Example 1 with the two columns of B switched; controllable.
    pub fn example1_swapped() -> Network {
        let mut net = example1();
        let b = mat(3, 2, &[0., 1., 1., 0., 0., 0.]);
        net.subsystem = SubsystemModel::new(net.subsystem.a.clone(), b, net.subsystem.c.clone())
            .unwrap();
        net
    }

    /// Subsystem with an invariant mode but no decentralized fixed modes.
    pub fn example2_subsystem() -> SubsystemModel {
        let a = mat(3, 3, &[0., 0., 1., 0., 0., 1., 1., -1., 1.]);
        let b = mat(3, 2, &[1., 0., 0., 1., 0., 0.]);
        let c = mat(2, 3, &[1., 0., 0., 0., 1., 0.]);
        SubsystemModel::new(a, b, c).unwrap()
    }

    /// Example 2 subsystem with the (2,2) entry of B rescaled to 2, which
    /// removes the invariant mode.
    pub fn example2_rescaled() -> SubsystemModel {
        let a = mat(3, 3, &[0., 0., 1., 0., 0., 1., 1., -1., 1.]);
        let b = mat(3, 2, &[1., 0., 0., 2., 0., 0.]);
        let c = mat(2, 3, &[1., 0., 0., 0., 1., 0.]);
        SubsystemModel::new(a, b, c).unwrap()
    }

    /// Path network with a non-projection-fixed invariant mode; controllable
    /// with two of three nodes actuated.
    pub fn example3() -> Network {
        let a = mat(3, 3, &[0.6, 0.4, 0., 0.2, 0.7, 0.1, 0., 0.2, 0.8]);
        let b = mat(3, 4, &[1., 0., 1., 0., 0., 1., 0., 1., 0., 0., 0., 0.]);
        let c = mat(4, 3, &[1., 0., 0., 0., -1., 0., 0., -1., 0., 1., 0., 0.]);
        let g = mat(3, 3, &[1., -1., 0., -1., 2., -1., 0., -1., 1.]);
        Network {
            subsystem: SubsystemModel::new(a, b, c).unwrap(),
            global: GlobalModel::new(g, vec![0, 1]).unwrap(),
            tolerances: Tolerances::default(),
            c_hat: None,
        }
    }

    /// Wrap a bare subsystem in a trivial single-node network.
    pub fn single_node(sub: SubsystemModel) -> Network {
        Network {
            subsystem: sub,
            global: GlobalModel::new(RMatrix::zeros(1, 1), vec![0]).unwrap(),
            tolerances: Tolerances::default(),
            c_hat: None,
        }
    }
}
