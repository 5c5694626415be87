//! Seeded random models for property tests and benchmarks, including
//! generators with planted structure (invariant modes, uncontrollable pairs).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{RMatrix, Tolerances};
use crate::model::{global_spectrum, GlobalModel, Network, SubsystemModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

/// Random dense subsystem with n in 1..=max_n and m in 1..=min(n, max_m).
pub fn subsystem(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> SubsystemModel {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m.min(n));
    SubsystemModel::new(
        matrix(rng, n, n, 1.0),
        matrix(rng, n, m, 1.0),
        matrix(rng, m, n, 1.0),
    )
    .expect("dimensions are consistent by construction")
}

/// Subsystem with a planted invariant mode at `mu`: row `k` of A is mu*e_k
/// and row `k` of B is zero, so e_k^T (A + lambda BC) = mu e_k^T for all
/// lambda.
pub fn subsystem_with_invariant_mode(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    mu: f64,
) -> SubsystemModel {
    let n = rng.gen_range(2..=max_n.max(2));
    let m = rng.gen_range(1..=max_m.min(n));
    let mut a = matrix(rng, n, n, 1.0);
    let mut b = matrix(rng, n, m, 1.0);
    let k = rng.gen_range(0..n);
    for j in 0..n {
        a[(k, j)] = if j == k { mu } else { 0.0 };
    }
    for j in 0..m {
        b[(k, j)] = 0.0;
    }
    SubsystemModel::new(a, b, matrix(rng, m, n, 1.0)).expect("consistent dimensions")
}

/// Random interconnection with a diagonalizable coupling matrix (redrawn
/// until the spectrum check passes) and a random nonempty actuated set.
pub fn global(rng: &mut ChaCha8Rng, sub: &SubsystemModel, max_nodes: usize) -> GlobalModel {
    let nodes = rng.gen_range(1..=max_nodes);
    let mut actuated: Vec<usize> = (0..nodes).filter(|_| rng.gen_bool(0.5)).collect();
    if actuated.is_empty() {
        actuated.push(rng.gen_range(0..nodes));
    }
    let tol = Tolerances::default();
    loop {
        let g = matrix(rng, nodes, nodes, 1.0);
        let global = GlobalModel::new(g, actuated.clone()).expect("valid actuated set");
        let candidate = Network {
            subsystem: sub.clone(),
            global,
            tolerances: tol.clone(),
            c_hat: None,
        };
        match global_spectrum(&candidate) {
            Ok(gs) if gs.diagonalizable && !gs.distinct_clusters.marginal => {
                return candidate.global
            }
            _ => continue,
        }
    }
}

/// Random network; diagonalizable G guaranteed.
pub fn network(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_nodes: usize) -> Network {
    let sub = subsystem(rng, max_n, max_m);
    let global = global(rng, &sub, max_nodes);
    Network {
        subsystem: sub,
        global,
        tolerances: Tolerances::default(),
        c_hat: None,
    }
}

/// Random network with a planted invariant mode, biased toward too few
/// actuated vertices so the multiplicity and actuation bounds can fire.
pub fn network_with_invariant_mode(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    max_nodes: usize,
) -> Network {
    let mu = rng.gen_range(-2.0..2.0);
    let sub = subsystem_with_invariant_mode(rng, max_n, max_m, mu);
    let mut global = global(rng, &sub, max_nodes);
    global.actuated.truncate(1);
    Network {
        subsystem: sub,
        global,
        tolerances: Tolerances::default(),
        c_hat: None,
    }
}

/// Random network where (G, S) is uncontrollable: G = I with a strict subset
/// actuated, so rank [G - I | S] = M < N.
pub fn network_with_uncontrollable_coupling(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    nodes: usize,
) -> Result<Network> {
    let sub = subsystem(rng, max_n, max_m);
    let actuated = vec![rng.gen_range(0..nodes)];
    let global = GlobalModel::new(RMatrix::identity(nodes, nodes), actuated)?;
    Ok(Network {
        subsystem: sub,
        global,
        tolerances: Tolerances::default(),
        c_hat: None,
    })
}
