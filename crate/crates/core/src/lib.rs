//! Controllability analysis for networks of identical linearly-coupled
//! subsystems. The assembled dynamics I (x) A + G (x) BC decompose into
//! blocks A + lambda_i BC over the eigenvalues of G; this crate classifies
//! the eigenvalues those blocks share (network-invariant vs special-repeat),
//! runs the full controllability test battery against a brute-force oracle,
//! and synthesizes interface gains that remove invariant modes.

pub mod controllability;
pub mod error;
pub mod linalg;
pub mod model;
pub mod modes;
pub mod protocol;
pub mod report;
pub mod sample;

pub use controllability::{analyze, analyze_with, ControllabilityReport, Verdict};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use linalg::{CMatrix, RMatrix, Tolerances};
pub use model::{load_network, GlobalModel, Network, SubsystemModel};
pub use modes::{ModeCatalog, ModeClass, ModeRecord, RepeatSet};
pub use protocol::{certify_protocol, design_protocol, ProtocolDesign};
