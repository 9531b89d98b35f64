//! Command implementations behind the CLI: load interchange documents, run
//! the pipelines, and render deterministic text or structured reports with
//! the documented exit statuses.

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::io::{self, Document, IoError};
use crate::kgraph::{self, AperiodicityVerdict, Verdict3};
use crate::lattice::{self, smith_normal_form, Subgroup};
use crate::prim::{self, PrimError};
use crate::stabilize::{stabilize, StabilizationOptions};

/// Exit statuses: 0 success, 2 validation failure, 3 hypothesis failure,
/// 4 unknown/inconclusive.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerance: f64,
    pub depth: usize,
    pub format: OutputFormat,
    /// Debug hook for the stabilize negative control: perturb the action at
    /// this arrow index by 1e-3 after solving.
    pub corrupt_action: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: crate::DEFAULT_TOLERANCE,
            depth: crate::DEFAULT_DEPTH,
            format: OutputFormat::Text,
            corrupt_action: None,
        }
    }
}

/// Rendered output of one command.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub text: String,
    pub structured: serde_json::Value,
    pub exit: i32,
}

impl CommandOutput {
    pub fn rendered(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Structured => {
                let mut s = serde_json::to_string_pretty(&self.structured).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn failure(message: String) -> Self {
        CommandOutput {
            text: format!("error: {message}\n"),
            structured: json!({ "error": message }),
            exit: EXIT_VALIDATION,
        }
    }
}

fn load(path: &Path) -> Result<Document, IoError> {
    io::read_document(path)
}

/// Resolve a named groupoid reference as a sibling file `<name>.json`.
fn sibling_resolver(dir: PathBuf) -> impl Fn(&str) -> Result<io::GroupoidDoc, IoError> {
    move |name: &str| {
        let candidate = dir.join(format!("{name}.json"));
        match io::read_document(&candidate)? {
            Document::Groupoid(g) => Ok(g),
            other => Err(IoError::Semantic(format!(
                "referenced document {name:?} has kind {:?}, expected groupoid",
                other.kind()
            ))),
        }
    }
}

fn load_bundle(path: &Path) -> Result<crate::bundle::FellBundle, IoError> {
    match load(path)? {
        Document::Bundle(doc) => {
            let dir = path.parent().map(PathBuf::from).unwrap_or_default();
            io::build_bundle(&doc, &sibling_resolver(dir))
        }
        other => Err(IoError::Semantic(format!(
            "expected a bundle document, found {:?}",
            other.kind()
        ))),
    }
}

/// Dispatch on the document kind and run the matching validator.
pub fn cmd_validate(path: &Path, cfg: &RunConfig) -> CommandOutput {
    let doc = match load(path) {
        Ok(d) => d,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let (kind, report) = match &doc {
        Document::Groupoid(g) => match io::build_groupoid(g) {
            Ok(g) => ("groupoid", g.validate()),
            Err(e) => return CommandOutput::failure(e.to_string()),
        },
        Document::Bundle(_) => match load_bundle(path) {
            Ok(b) => ("bundle", b.validate(cfg.tolerance)),
            Err(e) => return CommandOutput::failure(e.to_string()),
        },
        Document::Skeleton(s) => match io::build_skeleton(s) {
            Ok(sk) => {
                let mut rep = sk.validate();
                // presentations must also pass the quotient checks
                if s.h_basis.is_some() {
                    if let Err(e) = io::build_presentation(s) {
                        rep.push("presentation", e.to_string());
                    }
                }
                ("skeleton", rep)
            }
            Err(e) => return CommandOutput::failure(e.to_string()),
        },
        Document::Cocycle(c) => {
            let mut rep = crate::report::ValidationReport::new();
            if c.theta.is_none() && c.assignment.is_none() {
                rep.push(
                    "cocycle",
                    "document has neither theta nor assignment".into(),
                );
            }
            if let Some(t) = &c.theta {
                if let Err(e) = io::theta_from_doc(t) {
                    rep.push("cocycle", e.to_string());
                }
            }
            if let Some(entries) = &c.assignment {
                for e in entries {
                    if let Err(err) = io::theta_from_doc(&e.theta) {
                        rep.push("cocycle", err.to_string());
                    }
                }
            }
            ("cocycle", rep)
        }
        Document::Matrix(_) => ("matrix", crate::report::ValidationReport::new()),
    };
    let ok = report.is_valid();
    CommandOutput {
        text: format!("kind: {kind}\n{}", report.render_text()),
        structured: json!({
            "kind": kind,
            "valid": ok,
            "violations": report.violations,
        }),
        exit: if ok { EXIT_OK } else { EXIT_VALIDATION },
    }
}

/// Full stabilization pipeline with the verification report and the Morita
/// comparison.
pub fn cmd_stabilize(path: &Path, cfg: &RunConfig) -> CommandOutput {
    let bundle = match load_bundle(path) {
        Ok(b) => b,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let vrep = bundle.validate(cfg.tolerance);
    if !vrep.is_valid() {
        return CommandOutput {
            text: format!("input bundle invalid\n{}", vrep.render_text()),
            structured: json!({ "valid": false, "violations": vrep.violations }),
            exit: EXIT_VALIDATION,
        };
    }
    let opts = StabilizationOptions {
        tolerance: cfg.tolerance,
        corrupt_action: cfg.corrupt_action.map(|a| (a, 1e-3)),
    };
    let st = match stabilize(&bundle, &opts) {
        Ok(s) => s,
        Err(e) => return CommandOutput::failure(format!("stabilization failed: {e}")),
    };
    let rep = st.report();
    let morita = match st.morita_report() {
        Ok(m) => m,
        Err(e) => {
            // still show the residual report; the comparison stage is named
            return CommandOutput {
                text: format!(
                    "{}\ncomparison failed: {e}\nverdict: verification FAILED\n",
                    rep.render_text()
                ),
                structured: json!({
                    "checks": rep.lines,
                    "tolerance": rep.tolerance,
                    "max_residual": rep.max_residual(),
                    "error": format!("comparison failed: {e}"),
                    "ok": false,
                }),
                exit: EXIT_VALIDATION,
            };
        }
    };
    let ok = rep.ok() && morita.invariants_match();
    let text = format!(
        "{}\n{}verdict: {}\n",
        rep.render_text(),
        morita.render_text(),
        if ok {
            "stabilization verified"
        } else {
            "verification FAILED"
        }
    );
    CommandOutput {
        text,
        structured: json!({
            "checks": rep.lines,
            "tolerance": rep.tolerance,
            "max_residual": rep.max_residual(),
            "morita": {
                "original": {
                    "dim": morita.original.dim,
                    "blocks": morita.original.blocks,
                    "center_dim": morita.original.center_dim,
                    "ideal_count": morita.original.ideal_count,
                },
                "stabilized": {
                    "dim": morita.stabilized.dim,
                    "blocks": morita.stabilized.blocks,
                    "center_dim": morita.stabilized.center_dim,
                    "ideal_count": morita.stabilized.ideal_count,
                },
                "invariants_match": morita.invariants_match(),
            },
            "ok": ok,
        }),
        exit: if ok { EXIT_OK } else { EXIT_VALIDATION },
    }
}

fn load_presentation(
    path: &Path,
) -> Result<(io::SkeletonDoc, kgraph::PGraphPresentation), IoError> {
    match load(path)? {
        Document::Skeleton(doc) => {
            let pres = io::build_presentation(&doc)?;
            // documents validate before use
            let rep = pres.skeleton.validate();
            if !rep.is_valid() {
                return Err(IoError::Semantic(format!(
                    "skeleton is invalid: {}",
                    rep.violations
                        .iter()
                        .map(|v| format!("{}: {}", v.code, v.witness))
                        .collect::<Vec<_>>()
                        .join("; ")
                )));
            }
            Ok((doc, pres))
        }
        other => Err(IoError::Semantic(format!(
            "expected a skeleton document, found {:?}",
            other.kind()
        ))),
    }
}

/// Primitive-ideal pipeline: aperiodicity gate, pullback, isotropy
/// interior, stratification, gauge-invariant ideal lattice.
pub fn cmd_prim(pgraph_path: &Path, cocycle_path: &Path, cfg: &RunConfig) -> CommandOutput {
    let (_, pres) = match load_presentation(pgraph_path) {
        Ok(p) => p,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let cocycle_doc = match load(cocycle_path) {
        Ok(Document::Cocycle(c)) => c,
        Ok(other) => {
            return CommandOutput::failure(format!(
                "expected a cocycle document, found {:?}",
                other.kind()
            ))
        }
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let assignment = if cocycle_doc.assignment.is_some() {
        match io::build_assignment(&cocycle_doc, &pres.skeleton) {
            Ok(a) => a,
            Err(e) => return CommandOutput::failure(e.to_string()),
        }
    } else if let Some(theta) = &cocycle_doc.theta {
        match io::theta_from_doc(theta) {
            Ok(t) => prim::CocycleAssignment::constant(&pres.skeleton, t),
            Err(e) => return CommandOutput::failure(e.to_string()),
        }
    } else {
        return CommandOutput::failure("cocycle document has neither theta nor assignment".into());
    };
    match prim::prim_pipeline(&pres, &assignment, cfg.depth) {
        Ok(report) => {
            let exit = match report.iso.strong.verdict {
                Verdict3::Yes => EXIT_OK,
                Verdict3::No => EXIT_HYPOTHESIS,
                Verdict3::Unknown => EXIT_UNKNOWN,
            };
            let strata: Vec<serde_json::Value> = report
                .stratification
                .strata
                .iter()
                .map(|s| {
                    json!({
                        "omega": s.omega.omega.iter().map(|row| {
                            row.iter().map(|r| io::rational_to_doc(*r)).collect::<Vec<_>>()
                        }).collect::<Vec<_>>(),
                        "cylinders": s.cylinders,
                        "orbit_classes": s.orbit_classes,
                        "symmetrizer_basis": s.symmetrizer.generators,
                        "dual": {
                            "torus_rank": s.dual.torus_rank,
                            "invariant_factors": s.dual.invariant_factors,
                        },
                    })
                })
                .collect();
            CommandOutput {
                text: report.render_text(&pres),
                structured: json!({
                    "isotropy_interior": report.iso.description,
                    "strong_aperiodicity": format!("{:?}", report.iso.strong.verdict),
                    "strata": strata,
                    "ideal_lattice": {
                        "sets": report.ideals.sets.iter().map(|s| s.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "label": match report.ideals.label {
                            prim::IdealLatticeLabel::AllIdeals => "all ideals",
                            prim::IdealLatticeLabel::GaugeInvariantOnly => "gauge-invariant ideals",
                        },
                    },
                }),
                exit,
            }
        }
        Err(PrimError::HypothesisFailed(cert)) => CommandOutput {
            text: format!(
                "hypothesis failed: presentation graph is periodic at vertex {} with (p, q) = ({:?}, {:?})\n",
                cert.vertex, cert.p, cert.q
            ),
            structured: json!({
                "error": "hypothesis failed",
                "certificate": { "vertex": cert.vertex, "p": cert.p, "q": cert.q },
            }),
            exit: EXIT_HYPOTHESIS,
        },
        Err(e) => CommandOutput::failure(e.to_string()),
    }
}

pub fn cmd_kgraph_aperiodicity(path: &Path, cfg: &RunConfig) -> CommandOutput {
    let (_, pres) = match load_presentation(path) {
        Ok(p) => p,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let sk = &pres.skeleton;
    let plain = match kgraph::aperiodicity(sk, cfg.depth) {
        Ok(v) => v,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let strong = match kgraph::strong_aperiodicity(sk, cfg.depth) {
        Ok(v) => v,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let (plain_text, plain_json) = match &plain {
        AperiodicityVerdict::Aperiodic(w) => (
            format!("aperiodic ({} witness rectangles)", w.len()),
            json!({ "verdict": "aperiodic", "witnesses": w.iter().map(|p| sk.path_label(p)).collect::<Vec<_>>() }),
        ),
        AperiodicityVerdict::Periodic(c) => (
            format!(
                "periodic at vertex {} with (p, q) = ({:?}, {:?})",
                sk.vertex_label(c.vertex),
                c.p,
                c.q
            ),
            json!({ "verdict": "periodic", "vertex": sk.vertex_label(c.vertex), "p": c.p, "q": c.q }),
        ),
        AperiodicityVerdict::Unknown => (
            "unknown at this depth".to_string(),
            json!({ "verdict": "unknown" }),
        ),
    };
    let exit = match (&plain, strong.verdict) {
        (AperiodicityVerdict::Unknown, _) => EXIT_UNKNOWN,
        (_, Verdict3::Unknown) => EXIT_UNKNOWN,
        _ => EXIT_OK,
    };
    CommandOutput {
        text: format!(
            "aperiodicity: {}\nstrong aperiodicity: {:?} (hereditary: {:?}, tails: {:?})\n",
            plain_text, strong.verdict, strong.via_hereditary, strong.via_tails
        ),
        structured: json!({
            "aperiodicity": plain_json,
            "strong_aperiodicity": format!("{:?}", strong.verdict),
            "via_hereditary": format!("{:?}", strong.via_hereditary),
            "via_tails": format!("{:?}", strong.via_tails),
        }),
        exit,
    }
}

pub fn cmd_kgraph_ideals(path: &Path, cfg: &RunConfig) -> CommandOutput {
    let (_, pres) = match load_presentation(path) {
        Ok(p) => p,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let sk = &pres.skeleton;
    match prim::gauge_invariant_ideals(sk, cfg.depth) {
        Ok(rep) => {
            let mut text = String::new();
            for s in &rep.sets {
                let labels: Vec<&str> = s.iter().map(|&v| sk.vertex_label(v)).collect();
                text.push_str(&format!("{{{}}}\n", labels.join(", ")));
            }
            text.push_str(&format!(
                "{} saturated hereditary sets; lattice lists {}\n",
                rep.sets.len(),
                match rep.label {
                    prim::IdealLatticeLabel::AllIdeals => "all ideals",
                    prim::IdealLatticeLabel::GaugeInvariantOnly => "gauge-invariant ideals only",
                }
            ));
            CommandOutput {
                text,
                structured: json!({
                    "sets": rep.sets.iter().map(|s| s.iter().map(|&v| sk.vertex_label(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "label": match rep.label {
                        prim::IdealLatticeLabel::AllIdeals => "all ideals",
                        prim::IdealLatticeLabel::GaugeInvariantOnly => "gauge-invariant ideals",
                    },
                    "strong_aperiodicity": format!("{:?}", rep.strong),
                }),
                exit: EXIT_OK,
            }
        }
        Err(e) => CommandOutput::failure(e.to_string()),
    }
}

pub fn cmd_kgraph_tails(path: &Path, _cfg: &RunConfig) -> CommandOutput {
    let (_, pres) = match load_presentation(path) {
        Ok(p) => p,
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let sk = &pres.skeleton;
    match kgraph::maximal_tails(sk) {
        Ok(tails) => {
            let mut text = String::new();
            for t in &tails {
                let labels: Vec<&str> = t.iter().map(|&v| sk.vertex_label(v)).collect();
                text.push_str(&format!("{{{}}}\n", labels.join(", ")));
            }
            text.push_str(&format!("{} maximal tails\n", tails.len()));
            CommandOutput {
                text,
                structured: json!({
                    "tails": tails.iter().map(|t| t.iter().map(|&v| sk.vertex_label(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }),
                exit: EXIT_OK,
            }
        }
        Err(e) => CommandOutput::failure(e.to_string()),
    }
}

pub fn cmd_lattice_snf(path: &Path, _cfg: &RunConfig) -> CommandOutput {
    let m = match load(path) {
        Ok(Document::Matrix(m)) => m,
        Ok(other) => {
            return CommandOutput::failure(format!(
                "expected a matrix document, found {:?}",
                other.kind()
            ))
        }
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    if m.entries.is_empty() || m.entries.iter().any(|r| r.len() != m.entries[0].len()) {
        return CommandOutput::failure("matrix must be rectangular and nonempty".into());
    }
    let snf = smith_normal_form(&m.entries);
    let check = lattice::mat_mul(&lattice::mat_mul(&snf.u, &m.entries), &snf.v) == snf.d;
    let text = format!(
        "D = diag{:?}\nU = {:?}\nV = {:?}\nU A V = D: {}\n",
        snf.diagonal(),
        snf.u,
        snf.v,
        check
    );
    CommandOutput {
        text,
        structured: json!({
            "diagonal": snf.diagonal(),
            "u": snf.u,
            "v": snf.v,
            "verified": check,
        }),
        exit: if check { EXIT_OK } else { EXIT_VALIDATION },
    }
}

pub fn cmd_cocycle_symmetrizer(path: &Path, _cfg: &RunConfig) -> CommandOutput {
    let c = match load(path) {
        Ok(Document::Cocycle(c)) => c,
        Ok(other) => {
            return CommandOutput::failure(format!(
                "expected a cocycle document, found {:?}",
                other.kind()
            ))
        }
        Err(e) => return CommandOutput::failure(e.to_string()),
    };
    let theta = match &c.theta {
        Some(t) => match io::theta_from_doc(t) {
            Ok(t) => t,
            Err(e) => return CommandOutput::failure(e.to_string()),
        },
        None => return CommandOutput::failure("cocycle document has no theta matrix".into()),
    };
    let subgroup = match &c.h_basis {
        Some(b) => Subgroup::new(c.k, b.clone()),
        None => Subgroup::full(c.k),
    };
    if theta.rank != subgroup.generators.len() {
        return CommandOutput::failure(format!(
            "theta rank {} does not match the subgroup generator count {}",
            theta.rank,
            subgroup.generators.len()
        ));
    }
    let omega = theta.bicharacter();
    let (z, dual) = lattice::symmetrizer(&omega, &subgroup);
    let text = format!(
        "omega = {:?}\nsymmetrizer basis (ambient coordinates) = {:?}\nrank = {}\ndual = {}\n",
        omega
            .omega
            .iter()
            .map(|row| row
                .iter()
                .map(|r| io::rational_to_doc(*r))
                .collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        z.generators,
        z.rank(),
        dual
    );
    CommandOutput {
        text,
        structured: json!({
            "omega": omega.omega.iter().map(|row| row.iter().map(|r| io::rational_to_doc(*r)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "symmetrizer_basis": z.generators,
            "rank": z.rank(),
            "dual": { "torus_rank": dual.torus_rank, "invariant_factors": dual.invariant_factors },
        }),
        exit: EXIT_OK,
    }
}
