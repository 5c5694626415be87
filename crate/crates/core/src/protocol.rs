//! Interface synthesis: pick H with C = H*C_hat so the coupled blocks
//! A + lambda*B*H*C_hat share no eigenvalue across all lambda.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::controllability::pbh_controllable;
use crate::error::{Error, Result};
use crate::linalg::{eig_values, to_complex, RMatrix, Tolerances};
use crate::model::SubsystemModel;
use crate::modes::detect_invariant_modes;

/// Evidence that a candidate H works: open and closed spectra stay apart and
/// no eigenvalue survives every coupling strength.
#[derive(Clone, Debug)]
pub struct ProtocolCertificate {
    pub spectrum_a: Vec<Complex64>,
    pub spectrum_closed: Vec<Complex64>,
    /// Smallest distance between the two spectra.
    pub min_separation: f64,
    /// Separation must exceed this (the clustering tolerance at this scale).
    pub separation_threshold: f64,
    pub invariant_modes_after: Vec<Complex64>,
    pub passes: bool,
}

#[derive(Clone, Debug)]
pub struct ProtocolDesign {
    pub c_hat: RMatrix,
    pub h: RMatrix,
    /// Zero-based index of the accepted try; ties resolved to the lowest.
    pub accepted_try: usize,
    pub certificate: ProtocolCertificate,
}

/// Check an interface gain H: the blocks A + lambda*B*H*C_hat have no common
/// eigenvalue over all lambda iff the certificate passes. Pure verification,
/// usable on an externally supplied H.
pub fn certify_protocol(
    a: &RMatrix,
    b: &RMatrix,
    c_hat: &RMatrix,
    h: &RMatrix,
    tol: &Tolerances,
) -> Result<ProtocolCertificate> {
    let c = h * c_hat;
    let sub = SubsystemModel::new(a.clone(), b.clone(), c.clone())?;
    let spectrum_a = eig_values(&sub.a_complex())?;
    let closed = to_complex(&(a + b * &c));
    let spectrum_closed = eig_values(&closed)?;
    let mut min_separation = f64::INFINITY;
    let mut scale: f64 = 1.0;
    for &mu in spectrum_a.iter().chain(spectrum_closed.iter()) {
        scale = scale.max(mu.norm());
    }
    for &mu in &spectrum_a {
        for &nu in &spectrum_closed {
            min_separation = min_separation.min((mu - nu).norm());
        }
    }
    let separation_threshold = tol.eig_cluster_tol * scale;
    let invariant_modes_after = detect_invariant_modes(&sub, tol)?;
    let passes = min_separation > separation_threshold && invariant_modes_after.is_empty();
    Ok(ProtocolCertificate {
        spectrum_a,
        spectrum_closed,
        min_separation,
        separation_threshold,
        invariant_modes_after,
        passes,
    })
}

/// Seeded random search for an H whose certificate passes. Each try draws H
/// with entries uniform in [-1, 1] scaled by 1/(||B|| ||C_hat||); the first
/// certified try wins, so identical inputs and seed give identical output.
pub fn design_protocol(
    a: &RMatrix,
    b: &RMatrix,
    c_hat: &RMatrix,
    tol: &Tolerances,
    rng_seed: u64,
    max_tries: usize,
) -> Result<ProtocolDesign> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || c_hat.ncols() != n {
        return Err(Error::Dimension(format!(
            "protocol design: A {}x{}, B {}x{}, C_hat {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            c_hat.nrows(),
            c_hat.ncols()
        )));
    }
    let ac = to_complex(a);
    let ctrl = pbh_controllable(&ac, &to_complex(b), tol)?;
    if !ctrl.controllable {
        return Err(Error::PreconditionFailed(
            "pair (A, B) is not controllable".into(),
        ));
    }
    let obs = pbh_controllable(&ac.transpose(), &to_complex(c_hat).transpose(), tol)?;
    if !obs.controllable {
        return Err(Error::PreconditionFailed(
            "pair (C_hat, A) is not observable".into(),
        ));
    }
    let norm_product = b.norm() * c_hat.norm();
    if norm_product == 0.0 {
        return Err(Error::PreconditionFailed("B or C_hat is zero".into()));
    }
    let amp = 1.0 / norm_product;
    let (m, q) = (b.ncols(), c_hat.nrows());
    let mut best_separation = 0.0_f64;
    for try_index in 0..max_tries {
        // Per-try seed so tries are independent and order-free.
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ (try_index as u64).wrapping_mul(0x9E3779B97F4A7C15));
        let h = RMatrix::from_fn(m, q, |_, _| rng.gen_range(-1.0..1.0) * amp);
        let certificate = certify_protocol(a, b, c_hat, &h, tol)?;
        best_separation = best_separation.max(certificate.min_separation);
        if certificate.passes {
            return Ok(ProtocolDesign {
                c_hat: c_hat.clone(),
                h,
                accepted_try: try_index,
                certificate,
            });
        }
    }
    Err(Error::DesignExhausted {
        tries: max_tries,
        best_separation,
    })
}
