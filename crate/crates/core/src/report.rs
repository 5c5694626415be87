//! Serializable report types. Field order in these structs is the wire
//! order: serializing, parsing, and re-serializing a report is byte-stable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::controllability::{
    ControllabilityReport, ModalVerdict, PartitionCheck, Reason, Verdict,
};
use crate::modes::{ModeCatalog, ModeClass, ModeRecord, RepeatSet};
use crate::protocol::ProtocolDesign;

pub const SCHEMA: &str = "modalnet/1";

/// Complex scalar on the wire.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

impl From<Cx> for Complex64 {
    fn from(z: Cx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

fn cx_vec(zs: &[Complex64]) -> Vec<Cx> {
    zs.iter().copied().map(Cx::from).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepeatSetReport {
    AllLambda,
    Finite { couplings: Vec<Cx> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPresenceReport {
    pub block: usize,
    pub lambda: Cx,
    pub beta: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mu: Cx,
    pub classification: String,
    pub repeat_set: RepeatSetReport,
    pub total_geometric: usize,
    pub projection_fixed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub common_projection: Option<Vec<Cx>>,
    pub blocks: Vec<BlockPresenceReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub schema: String,
    pub modes: Vec<ModeReport>,
    pub dfm_modes: Vec<Cx>,
    pub marginal: bool,
}

impl From<&ModeRecord> for ModeReport {
    fn from(r: &ModeRecord) -> Self {
        ModeReport {
            mu: r.mu.into(),
            classification: match r.classification {
                ModeClass::NetworkInvariant => "network_invariant".into(),
                ModeClass::SpecialRepeat => "special_repeat".into(),
            },
            repeat_set: match &r.repeat_set {
                RepeatSet::AllLambda => RepeatSetReport::AllLambda,
                RepeatSet::Finite(set) => RepeatSetReport::Finite {
                    couplings: cx_vec(set),
                },
            },
            total_geometric: r.total_geometric,
            projection_fixed: r.projection_fixed,
            common_projection: r.common_projection.as_deref().map(cx_vec),
            blocks: r
                .per_block
                .iter()
                .map(|p| BlockPresenceReport {
                    block: p.block,
                    lambda: p.lambda.into(),
                    beta: p.beta,
                })
                .collect(),
        }
    }
}

impl From<&ModeCatalog> for CatalogReport {
    fn from(c: &ModeCatalog) -> Self {
        CatalogReport {
            schema: SCHEMA.into(),
            modes: c.records.iter().map(ModeReport::from).collect(),
            dfm_modes: cx_vec(&c.dfm_modes),
            marginal: c.marginal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReasonReport {
    SubsystemPairUncontrollable {
        modes: Vec<Cx>,
    },
    GlobalPairUncontrollable {
        modes: Vec<Cx>,
    },
    BlockPairUncontrollable {
        lambda: Cx,
        modes: Vec<Cx>,
    },
    MultiplicityBound {
        mu: Cx,
        total_geometric: usize,
        input_capacity: usize,
    },
    ActuationBound {
        required: usize,
        actuated: usize,
    },
    ProjectionFixedActuation {
        mu: Cx,
        actuated: usize,
        vertices: usize,
    },
    PartitionBound {
        subset: Vec<usize>,
        bound: i64,
        actuated_in_subset: usize,
    },
    ModalRankDeficient {
        mu: Cx,
        rows: usize,
        rank: usize,
    },
}

impl From<&Reason> for ReasonReport {
    fn from(r: &Reason) -> Self {
        match r {
            Reason::SubsystemPairUncontrollable { modes } => {
                ReasonReport::SubsystemPairUncontrollable {
                    modes: cx_vec(modes),
                }
            }
            Reason::GlobalPairUncontrollable { modes } => ReasonReport::GlobalPairUncontrollable {
                modes: cx_vec(modes),
            },
            Reason::BlockPairUncontrollable { lambda, modes } => {
                ReasonReport::BlockPairUncontrollable {
                    lambda: (*lambda).into(),
                    modes: cx_vec(modes),
                }
            }
            Reason::MultiplicityBound {
                mu,
                total_geometric,
                input_capacity,
            } => ReasonReport::MultiplicityBound {
                mu: (*mu).into(),
                total_geometric: *total_geometric,
                input_capacity: *input_capacity,
            },
            Reason::ActuationBound { required, actuated } => ReasonReport::ActuationBound {
                required: *required,
                actuated: *actuated,
            },
            Reason::ProjectionFixedActuation {
                mu,
                actuated,
                vertices,
            } => ReasonReport::ProjectionFixedActuation {
                mu: (*mu).into(),
                actuated: *actuated,
                vertices: *vertices,
            },
            Reason::PartitionBound {
                subset,
                bound,
                actuated_in_subset,
            } => ReasonReport::PartitionBound {
                subset: subset.clone(),
                bound: *bound,
                actuated_in_subset: *actuated_in_subset,
            },
            Reason::ModalRankDeficient { mu, rows, rank } => ReasonReport::ModalRankDeficient {
                mu: (*mu).into(),
                rows: *rows,
                rank: *rank,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerdictReport {
    Controllable,
    Uncontrollable { reasons: Vec<ReasonReport> },
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Controllable => VerdictReport::Controllable,
            Verdict::Uncontrollable(reasons) => VerdictReport::Uncontrollable {
                reasons: reasons.iter().map(ReasonReport::from).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModalReport {
    Controllable,
    Uncontrollable { witness: Cx, rows: usize, rank: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub subset: Vec<usize>,
    pub n_hat: usize,
    pub m_hat: usize,
    pub boundary: usize,
    pub bound: i64,
    pub satisfied: bool,
}

impl From<&PartitionCheck> for PartitionReport {
    fn from(p: &PartitionCheck) -> Self {
        PartitionReport {
            subset: p.subset.clone(),
            n_hat: p.n_hat,
            m_hat: p.m_hat,
            boundary: p.boundary,
            bound: p.bound,
            satisfied: p.satisfied,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub rank: usize,
    pub dimension: usize,
    pub agrees: bool,
    pub marginal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockVerdictReport {
    pub lambda: Cx,
    pub controllable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub subsystem_controllable: bool,
    pub subsystem_observable: bool,
    pub global_controllable: bool,
    pub per_block: Vec<BlockVerdictReport>,
    pub modes: Vec<ModeReport>,
    pub dfm_modes: Vec<Cx>,
    pub modal_test: ModalReport,
    pub multiplicity_violations: Vec<ReasonReport>,
    pub actuation_required: usize,
    pub actuation_present: usize,
    pub actuation_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection_fixed_requirement: Option<ProjectionReport>,
    pub partition_violations: Vec<PartitionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub verdict: VerdictReport,
    pub tolerance_marginal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub mu: Cx,
    pub ok: bool,
}

impl From<&ControllabilityReport> for AnalysisReport {
    fn from(r: &ControllabilityReport) -> Self {
        AnalysisReport {
            schema: SCHEMA.into(),
            subsystem_controllable: r.subsystem_controllable,
            subsystem_observable: r.subsystem_observable,
            global_controllable: r.global_controllable,
            per_block: r
                .per_block_controllable
                .iter()
                .map(|&(lambda, controllable)| BlockVerdictReport {
                    lambda: lambda.into(),
                    controllable,
                })
                .collect(),
            modes: r.mode_catalog.records.iter().map(ModeReport::from).collect(),
            dfm_modes: cx_vec(&r.mode_catalog.dfm_modes),
            modal_test: match r.modal_test {
                ModalVerdict::Controllable => ModalReport::Controllable,
                ModalVerdict::Uncontrollable { witness, rows, rank } => {
                    ModalReport::Uncontrollable {
                        witness: witness.into(),
                        rows,
                        rank,
                    }
                }
            },
            multiplicity_violations: r
                .multiplicity_violations
                .iter()
                .map(|&(mu, p, cap)| ReasonReport::MultiplicityBound {
                    mu: mu.into(),
                    total_geometric: p,
                    input_capacity: cap,
                })
                .collect(),
            actuation_required: r.actuation_bound.required,
            actuation_present: r.actuation_bound.actuated,
            actuation_ok: r.actuation_bound.ok,
            projection_fixed_requirement: r.projection_fixed_requirement.as_ref().map(|p| {
                ProjectionReport {
                    mu: p.mu.into(),
                    ok: p.ok,
                }
            }),
            partition_violations: r
                .partition_violations
                .iter()
                .map(PartitionReport::from)
                .collect(),
            oracle: r.oracle.as_ref().map(|o| OracleReport {
                rank: o.rank,
                dimension: o.dimension,
                agrees: o.agrees,
                marginal: o.marginal,
            }),
            verdict: VerdictReport::from(&r.verdict),
            tolerance_marginal: r.tolerance_marginal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub schema: String,
    pub h: Vec<Vec<f64>>,
    pub c_hat: Vec<Vec<f64>>,
    pub accepted_try: usize,
    pub spectrum_open: Vec<Cx>,
    pub spectrum_closed: Vec<Cx>,
    pub min_separation: f64,
    pub separation_threshold: f64,
    pub invariant_modes_after: Vec<Cx>,
    pub passes: bool,
}

impl From<&ProtocolDesign> for ProtocolReport {
    fn from(d: &ProtocolDesign) -> Self {
        let to_nested = |m: &crate::linalg::RMatrix| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect()
        };
        ProtocolReport {
            schema: SCHEMA.into(),
            h: to_nested(&d.h),
            c_hat: to_nested(&d.c_hat),
            accepted_try: d.accepted_try,
            spectrum_open: cx_vec(&d.certificate.spectrum_a),
            spectrum_closed: cx_vec(&d.certificate.spectrum_closed),
            min_separation: d.certificate.min_separation,
            separation_threshold: d.certificate.separation_threshold,
            invariant_modes_after: cx_vec(&d.certificate.invariant_modes_after),
            passes: d.certificate.passes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleOnlyReport {
    pub schema: String,
    pub rank: usize,
    pub dimension: usize,
    pub controllable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSetReport {
    pub schema: String,
    pub checks: Vec<PartitionReport>,
}
