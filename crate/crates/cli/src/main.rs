//! Command-line front end: load a model file, run the analysis battery or
//! one of its pieces, and emit a text narrative or versioned JSON report.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use modalnet::controllability::{
    analyze_with, kalman_rank, partition_check, partition_scan, ModalVerdict, Reason, Verdict,
};
use modalnet::model::{build_graph, load_network};
use modalnet::report::{
    AnalysisReport, CatalogReport, OracleOnlyReport, PartitionReport, PartitionSetReport,
    ProtocolReport, SCHEMA,
};
use modalnet::{design_protocol, Network};

#[derive(Parser)]
#[command(name = "modalnet", version, about = "Controllability analysis for linearly-coupled subsystem networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Model file (JSON).
    model: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Override the eigenvalue clustering tolerance.
    #[arg(long)]
    tol_eig: Option<f64>,
    /// Override the relative rank cutoff.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Override the seed for all randomized probes.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Full controllability report.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Skip the brute-force Kalman-rank oracle.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Shared-mode catalog only.
    Modes {
        #[command(flatten)]
        common: Common,
    },
    /// One-line verdict; exit 0 controllable, 1 uncontrollable, 2 error.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Partition bound for one subset, or an exhaustive scan.
    Partition {
        #[command(flatten)]
        common: Common,
        /// Comma-separated vertex subset, e.g. 0,2,5.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        /// Cap the subset size for the exhaustive scan.
        #[arg(long)]
        max_subset_size: Option<usize>,
    },
    /// Synthesize an interface gain H (C = H * C_hat) without invariant modes.
    DesignProtocol {
        #[command(flatten)]
        common: Common,
        /// Search budget.
        #[arg(long, default_value_t = 64)]
        max_tries: usize,
    },
    /// Kalman-rank oracle only.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common) -> modalnet::Result<Network> {
    let mut net = load_network(&common.model)?;
    if let Some(t) = common.tol_eig {
        net.tolerances.eig_cluster_tol = t;
    }
    if let Some(t) = common.tol_rank {
        net.tolerances.rank_rel_tol = t;
    }
    if let Some(s) = common.seed {
        net.tolerances.rng_seed = s;
    }
    net.tolerances.validate()?;
    Ok(net)
}

fn emit(common: &Common, text: String) -> modalnet::Result<()> {
    match &common.output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| modalnet::Error::Parse {
            path: path.display().to_string(),
            detail: e.to_string(),
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> modalnet::Result<ExitCode> {
    match command {
        Command::Analyze { common, no_oracle } => {
            let net = load(&common)?;
            let report = analyze_with(&net, !no_oracle)?;
            let out = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&AnalysisReport::from(&report)).unwrap()
                }
                Format::Text => narrative(&net, &report),
            };
            emit(&common, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Modes { common } => {
            let net = load(&common)?;
            let gs = modalnet::model::global_spectrum(&net)?;
            let catalog = modalnet::modes::shared_mode_catalog(&net, &gs)?;
            let out = match common.format {
                Format::Json => {
                    serde_json::to_string_pretty(&CatalogReport::from(&catalog)).unwrap()
                }
                Format::Text => catalog_text(&catalog),
            };
            emit(&common, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { common } => {
            let net = load(&common)?;
            let report = analyze_with(&net, false)?;
            match &report.verdict {
                Verdict::Controllable => {
                    emit(&common, "CONTROLLABLE".into())?;
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Uncontrollable(reasons) => {
                    let lead = reasons
                        .first()
                        .map(reason_text)
                        .unwrap_or_else(|| "modal rank deficiency".into());
                    emit(&common, format!("UNCONTROLLABLE: {lead}"))?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Partition {
            common,
            subset,
            max_subset_size,
        } => {
            let net = load(&common)?;
            let graph = build_graph(&net);
            let checks = match subset {
                Some(subset) => vec![partition_check(&net, &graph, &subset)?],
                None => partition_scan(&net, &graph, max_subset_size)?,
            };
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&PartitionSetReport {
                    schema: SCHEMA.into(),
                    checks: checks.iter().map(PartitionReport::from).collect(),
                })
                .unwrap(),
                Format::Text => {
                    if checks.is_empty() {
                        "no violating subsets".into()
                    } else {
                        checks
                            .iter()
                            .map(|c| {
                                format!(
                                    "subset {:?}: actuated {} vs bound {} ({})",
                                    c.subset,
                                    c.m_hat,
                                    c.bound,
                                    if c.satisfied { "ok" } else { "VIOLATED" }
                                )
                            })
                            .collect::<Vec<_>>()
                            .join("\n")
                    }
                }
            };
            emit(&common, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DesignProtocol { common, max_tries } => {
            let net = load(&common)?;
            let c_hat = net.c_hat.clone().unwrap_or_else(|| net.subsystem.c.clone());
            let design = design_protocol(
                &net.subsystem.a,
                &net.subsystem.b,
                &c_hat,
                &net.tolerances,
                net.tolerances.rng_seed,
                max_tries,
            )?;
            let report = ProtocolReport::from(&design);
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap(),
                Format::Text => format!(
                    "accepted H (try {}) with spectral separation {:.3e};\n\
                     no eigenvalue of A + lambda*B*H*C_hat persists across couplings\nH = {:?}",
                    design.accepted_try, design.certificate.min_separation, report.h
                ),
            };
            emit(&common, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { common } => {
            let net = load(&common)?;
            let oracle = kalman_rank(&net)?;
            let controllable = oracle.rank == oracle.dimension;
            let out = match common.format {
                Format::Json => serde_json::to_string_pretty(&OracleOnlyReport {
                    schema: SCHEMA.into(),
                    rank: oracle.rank,
                    dimension: oracle.dimension,
                    controllable,
                })
                .unwrap(),
                Format::Text => format!(
                    "Kalman rank {} of {} ({})",
                    oracle.rank,
                    oracle.dimension,
                    if controllable {
                        "controllable"
                    } else {
                        "rank-deficient"
                    }
                ),
            };
            emit(&common, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn fmt_c(z: modalnet::Complex64) -> String {
    if z.im.abs() < 1e-9 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn reason_text(r: &Reason) -> String {
    match r {
        Reason::SubsystemPairUncontrollable { modes } => format!(
            "the subsystem pair (A, B) is uncontrollable at {}",
            modes.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", ")
        ),
        Reason::GlobalPairUncontrollable { modes } => format!(
            "the coupling pair (G, S) is uncontrollable at {}",
            modes.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", ")
        ),
        Reason::BlockPairUncontrollable { lambda, modes } => format!(
            "the block at coupling {} is uncontrollable at {}",
            fmt_c(*lambda),
            modes.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", ")
        ),
        Reason::MultiplicityBound {
            mu,
            total_geometric,
            input_capacity,
        } => format!(
            "network-invariant mode mu={} has total multiplicity {} but only {} independent inputs reach the network",
            fmt_c(*mu),
            total_geometric,
            input_capacity
        ),
        Reason::ActuationBound { required, actuated } => format!(
            "an invariant mode requires at least {required} actuated vertices; only {actuated} are actuated"
        ),
        Reason::ProjectionFixedActuation {
            mu,
            actuated,
            vertices,
        } => format!(
            "mode mu={} is projection-fixed, so every vertex must be actuated ({} of {} are)",
            fmt_c(*mu),
            actuated,
            vertices
        ),
        Reason::PartitionBound {
            subset,
            bound,
            actuated_in_subset,
        } => format!(
            "vertex subset {subset:?} needs {bound} actuated members but has {actuated_in_subset}"
        ),
        Reason::ModalRankDeficient { mu, rows, rank } => format!(
            "modal rank test fails at mu={}: {} eigenvector conditions, rank {}",
            fmt_c(*mu),
            rows,
            rank
        ),
    }
}

fn catalog_text(catalog: &modalnet::ModeCatalog) -> String {
    let mut lines = Vec::new();
    for record in &catalog.records {
        let kind = match record.classification {
            modalnet::ModeClass::NetworkInvariant => {
                if record.projection_fixed {
                    "network-invariant, projection-fixed"
                } else {
                    "network-invariant"
                }
            }
            modalnet::ModeClass::SpecialRepeat => "special-repeat",
        };
        let repeats = match &record.repeat_set {
            modalnet::RepeatSet::AllLambda => "all couplings".to_string(),
            modalnet::RepeatSet::Finite(set) => format!(
                "couplings {}",
                set.iter().map(|&z| fmt_c(z)).collect::<Vec<_>>().join(", ")
            ),
        };
        lines.push(format!(
            "mu={} [{kind}] multiplicity {} across {} blocks; recurs at {repeats}",
            fmt_c(record.mu),
            record.total_geometric,
            record.per_block.len()
        ));
    }
    if catalog.dfm_modes.is_empty() {
        lines.push("no decentralized fixed modes".into());
    } else {
        lines.push(format!(
            "decentralized fixed modes: {}",
            catalog
                .dfm_modes
                .iter()
                .map(|&z| fmt_c(z))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    lines.join("\n")
}

fn narrative(net: &Network, report: &modalnet::ControllabilityReport) -> String {
    let mut lines = Vec::new();
    let n = net.subsystem.n;
    let m = net.subsystem.m;
    let vertices = net.global.n_subsystems;
    let actuated = net.global.actuated_count();
    lines.push(format!(
        "network of {vertices} identical subsystems (n={n}, m={m}), {actuated} actuated"
    ));
    lines.push(format!(
        "subsystem pair (A, B): {}; observability of (C, A): {}; coupling pair (G, S): {}",
        ok(report.subsystem_controllable),
        ok(report.subsystem_observable),
        ok(report.global_controllable)
    ));
    lines.push(catalog_text(&report.mode_catalog));
    let invariant: Vec<_> = report.mode_catalog.invariant_modes().collect();
    if invariant.is_empty() {
        lines.push(
            "every shared eigenvalue recurs at finitely many couplings, so sufficient actuation \
             of the coupling pair settles controllability"
                .into(),
        );
    } else {
        lines.push(format!(
            "invariant modes appear in every block regardless of coupling; with m={m} inputs per \
             vertex this requires at least ceil({vertices}/{m}) = {} actuated vertices",
            report.actuation_bound.required
        ));
        if m == 1 {
            lines.push(
                "single-input subsystems with an invariant mode force actuation at every vertex"
                    .into(),
            );
        }
    }
    match &report.modal_test {
        ModalVerdict::Controllable => lines.push("modal rank test: all modes pass".into()),
        ModalVerdict::Uncontrollable { witness, rows, rank } => lines.push(format!(
            "modal rank test: FAILS at mu={} ({} conditions, rank {})",
            fmt_c(*witness),
            rows,
            rank
        )),
    }
    if let Some(oracle) = &report.oracle {
        lines.push(format!(
            "oracle: Kalman rank {} of {} ({})",
            oracle.rank,
            oracle.dimension,
            if oracle.agrees { "agrees" } else { "DISAGREES" }
        ));
    }
    match &report.verdict {
        Verdict::Controllable => lines.push("verdict: CONTROLLABLE".into()),
        Verdict::Uncontrollable(reasons) => {
            lines.push("verdict: UNCONTROLLABLE".into());
            for r in reasons {
                lines.push(format!("  - {}", reason_text(r)));
            }
        }
    }
    if report.tolerance_marginal {
        lines.push("note: some rank or clustering decision fell near its tolerance".into());
    }
    lines.join("\n")
}

fn ok(b: bool) -> &'static str {
    if b {
        "controllable"
    } else {
        "UNCONTROLLABLE"
    }
}
