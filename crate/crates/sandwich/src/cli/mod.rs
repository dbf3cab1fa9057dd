//! The structured problem format and the command driver behind the
//! `sandwich` binary.
//!
//! A problem is a JSON document naming a model, a set of functions on it,
//! and parameters (all rationals written as `"p/q"` strings or integers, so
//! nothing is ever rounded). Each command pulls what it needs from the
//! document: `insert` and `kt` use functions `f` and `g`, `extract` uses
//! the `families` section, `sw` uses `generators` and `target`, and so on.
//!
//! Exit status contract (stable for scripting): `0` success, `1` internal
//! error, `2` parse/validation/precondition failure, `3` the run produced
//! an obstruction.

mod output;
mod schema;

pub use output::{csv_samples, svg_plot, FunctionRole, NamedFunction};
pub use schema::{
    parse_cli_rat, BreakpointDoc, DomainDoc, FamiliesDoc, FunctionDoc, FunctionValue, ModelKind,
    ModelSpec, ParamsDoc, ProblemDoc,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::compactc::{extract_finite, ExtractionCertificate};
use crate::error::Error;
use crate::extension::{DenseIntervalModel, OnePointModel, PipelineCertificate, PipelineOutcome};
use crate::funcspace::{LeOutcome, PLFunction, Rat};
use crate::insertion::{insert_gap, kt_compact, GapCertificate, InsertionCertificate};
use crate::semicont::{
    default_lambda_cap, default_sample_points, dilworth_witness, is_lsc, is_usc, lower_lipschitz,
    lsc_envelope, upper_lipschitz, usc_envelope, Schedule,
};
use crate::stonew::{separates, sw_construct, EvalOptions, SeparationOutcome};

/// Environment variable overriding the doubling-schedule cap.
pub const LAMBDA_CAP_ENV: &str = "SANDWICH_LAMBDA_CAP";

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit status for this error: internal faults are 1, everything the
    /// caller can fix is 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

/// A parsed and validated problem document.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub model: ModelSpec,
    pub functions: BTreeMap<String, FunctionValue>,
    pub doc: ProblemDoc,
}

impl ProblemSpec {
    pub fn function(&self, name: &str) -> Result<&FunctionValue, CliError> {
        self.functions
            .get(name)
            .ok_or_else(|| CliError::Invalid(format!("the problem has no function {name:?}")))
    }

    pub fn pl_function(&self, name: &str) -> Result<&PLFunction, CliError> {
        self.function(name)?.as_pl(name)
    }
}

/// Parses a problem document; rationals round-trip exactly and unknown
/// fields are rejected.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, CliError> {
    let doc: ProblemDoc = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    schema::validate(doc)
}

/// Serializes the raw document of a problem; `parse_problem` of the output
/// yields an identical [`ProblemSpec`].
pub fn emit_problem(problem: &ProblemSpec) -> String {
    serde_json::to_string_pretty(&problem.doc).expect("problem documents always serialize")
}

/// The machine-readable certificate documents emitted by the commands and
/// consumed by `verify-cert`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDoc {
    InsertGap(GapCertificate),
    KtIteration(InsertionCertificate),
    Pipeline(Box<PipelineCertificate>),
    Extraction(ExtractionCertificate),
}

impl CertificateDoc {
    /// Re-verifies every recorded inequality from the stored functions.
    pub fn verify(&self) -> Result<String, CliError> {
        match self {
            CertificateDoc::InsertGap(c) => {
                c.verify()?;
                Ok(format!(
                    "insert-gap certificate verified: lambda = {}, {} breakpoints",
                    c.lambda,
                    c.inserted.breakpoints().len()
                ))
            }
            CertificateDoc::KtIteration(c) => {
                c.verify()?;
                Ok(format!(
                    "kt-iteration certificate verified: {} steps, final tolerance {}",
                    c.steps.len(),
                    c.final_tol
                ))
            }
            CertificateDoc::Pipeline(c) => {
                c.verify()?;
                Ok(format!(
                    "pipeline certificate verified: {} steps on [{}, {}] minus {} points",
                    c.kt.steps.len(),
                    c.model.lo(),
                    c.model.hi(),
                    c.model.removed().len()
                ))
            }
            CertificateDoc::Extraction(c) => {
                c.verify()?;
                Ok(format!(
                    "extraction certificate verified: |S0| = {}, |T0| = {}, {} cover intervals",
                    c.result.s_indices.len(),
                    c.result.t_indices.len(),
                    c.result.cover.len()
                ))
            }
        }
    }
}

/// The commands exposed by the driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Envelope,
    Extract,
    Insert,
    Kt,
    Extend,
    Obstruct,
    Pipeline,
    Sw,
    Sample,
    Plot,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Envelope => "envelope",
            Command::Extract => "extract",
            Command::Insert => "insert",
            Command::Kt => "kt",
            Command::Extend => "extend",
            Command::Obstruct => "obstruct",
            Command::Pipeline => "pipeline",
            Command::Sw => "sw",
            Command::Sample => "sample",
            Command::Plot => "plot",
        }
    }
}

/// Options shared by all commands. CLI flags override the document params.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub epsilon: Option<Rat>,
    pub tol: Option<Rat>,
    pub eta: Option<Rat>,
    pub lambda: Option<Rat>,
    pub out_dir: Option<PathBuf>,
    pub svg: bool,
    pub csv: Option<u32>,
    pub lambda_cap: Option<Rat>,
}

/// Everything a run produced. The report is for people; the certificate is
/// for `verify-cert`; the named functions feed the CSV/SVG emitters.
#[derive(Debug)]
pub struct RunOutput {
    pub exit_code: i32,
    pub report: String,
    pub certificate: Option<CertificateDoc>,
    pub functions: Vec<NamedFunction>,
}

struct Reporter {
    text: String,
}

impl Reporter {
    fn new(cmd: Command) -> Self {
        Reporter {
            text: format!("sandwich {}\n", cmd.name()),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        writeln!(self.text, "{}", s.as_ref()).unwrap();
    }
}

fn param<'a>(cli: &'a Option<Rat>, doc: &'a Option<Rat>, name: &str) -> Result<&'a Rat, CliError> {
    cli.as_ref()
        .or(doc.as_ref())
        .ok_or_else(|| CliError::Invalid(format!("missing parameter {name}")))
}

/// Executes a command against a parsed problem.
pub fn run(cmd: Command, problem: &ProblemSpec, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let cap = opts.lambda_cap.clone().unwrap_or_else(default_lambda_cap);
    let mut rep = Reporter::new(cmd);
    let params = &problem.doc.params;
    let mut certificate = None;
    let mut functions: Vec<NamedFunction> = Vec::new();
    let mut exit_code = 0;

    match cmd {
        Command::Check => {
            for (name, value) in &problem.functions {
                match value {
                    FunctionValue::Pl(f) => {
                        rep.line(format!(
                            "{name}: usc={} lsc={} sup_norm={} ({} breakpoints)",
                            is_usc(f),
                            is_lsc(f),
                            f.sup_norm(),
                            f.breakpoints().len()
                        ));
                        functions.push(NamedFunction {
                            name: name.clone(),
                            role: FunctionRole::Input,
                            function: f.clone(),
                        });
                    }
                    FunctionValue::Seq(f) => rep.line(format!(
                        "{name}: limsup={} liminf={} sup_norm={}{}",
                        f.limsup(),
                        f.liminf(),
                        f.sup_norm(),
                        match f.infinity() {
                            Some(v) => format!(" infinity={v}"),
                            None => String::new(),
                        }
                    )),
                    FunctionValue::Finite(f) => {
                        rep.line(format!("{name}: {f} sup_norm={}", f.sup_norm()))
                    }
                }
            }
            if let (Ok(f), Ok(g)) = (problem.pl_function("f"), problem.pl_function("g")) {
                match f.le(g)? {
                    LeOutcome::Holds => rep.line("order: f <= g holds"),
                    LeOutcome::Fails { witness } => {
                        rep.line(format!("order: f <= g fails at {witness}"))
                    }
                }
            }
        }

        Command::Envelope => {
            let f = problem.pl_function("f")?;
            let upper_env = usc_envelope(f);
            let lower_env = lsc_envelope(f);
            rep.line(format!("f is usc: {}", &upper_env == f));
            rep.line(format!("f is lsc: {}", &lower_env == f));
            functions.push(NamedFunction {
                name: "f".into(),
                role: FunctionRole::Input,
                function: f.clone(),
            });
            functions.push(NamedFunction {
                name: "usc_envelope".into(),
                role: FunctionRole::Output,
                function: upper_env,
            });
            functions.push(NamedFunction {
                name: "lsc_envelope".into(),
                role: FunctionRole::Output,
                function: lower_env,
            });
            let lambda = opts.lambda.as_ref().or(params.lambda.as_ref());
            if let Some(lambda) = lambda {
                let up = upper_lipschitz(f, lambda)?;
                let down = lower_lipschitz(f, lambda)?;
                rep.line(format!("lipschitz envelopes at lambda = {lambda}"));
                functions.push(NamedFunction {
                    name: format!("upper_lipschitz_{lambda}"),
                    role: FunctionRole::Output,
                    function: up,
                });
                functions.push(NamedFunction {
                    name: format!("lower_lipschitz_{lambda}"),
                    role: FunctionRole::Output,
                    function: down,
                });
            }
            if let Some(delta) = &params.delta {
                let samples = if params.samples.is_empty() {
                    default_sample_points(f)
                } else {
                    params.samples.clone()
                };
                let schedule = Schedule::for_functions(&[f]).with_cap(cap.clone());
                let lambda_star = dilworth_witness(f, &samples, delta, &schedule)?;
                rep.line(format!(
                    "pointwise meet witness: lambda* = {lambda_star} at {} samples \
                     (tolerance {delta})",
                    samples.len()
                ));
            }
        }

        Command::Extract => {
            let fam = problem
                .doc
                .families
                .as_ref()
                .ok_or_else(|| CliError::Invalid("extract needs a families section".into()))?;
            let epsilon = param(&opts.epsilon, &params.epsilon, "epsilon")?;
            let s: Vec<PLFunction> = fam
                .s
                .iter()
                .map(|n| problem.pl_function(n).cloned())
                .collect::<Result<_, _>>()?;
            let t: Vec<PLFunction> = fam
                .t
                .iter()
                .map(|n| problem.pl_function(n).cloned())
                .collect::<Result<_, _>>()?;
            let result = extract_finite(&s, &t, epsilon)?;
            rep.line(format!(
                "selected S0 = {:?} (of {}), T0 = {:?} (of {})",
                result.s_indices,
                s.len(),
                result.t_indices,
                t.len()
            ));
            for rec in &result.cover {
                rep.line(format!(
                    "  pair (s{}, t{}) separates on ({}, {})",
                    rec.s_index, rec.t_index, rec.interval.0, rec.interval.1
                ));
            }
            for (i, f) in s.iter().enumerate() {
                functions.push(NamedFunction {
                    name: format!("s{i}"),
                    role: FunctionRole::Input,
                    function: f.clone(),
                });
            }
            for (i, f) in t.iter().enumerate() {
                functions.push(NamedFunction {
                    name: format!("t{i}"),
                    role: FunctionRole::Input,
                    function: f.clone(),
                });
            }
            certificate = Some(CertificateDoc::Extraction(ExtractionCertificate {
                s,
                t,
                epsilon: epsilon.clone(),
                result,
            }));
        }

        Command::Insert => {
            let f = problem.pl_function("f")?;
            let g = problem.pl_function("g")?;
            let epsilon = param(&opts.epsilon, &params.epsilon, "epsilon")?;
            let r = insert_gap(f, g, epsilon, &cap)?;
            rep.line(format!("inserted at lambda = {}", r.lambda));
            rep.line(format!("a = {}", r.inserted));
            functions.push(NamedFunction {
                name: "f".into(),
                role: FunctionRole::Input,
                function: f.clone(),
            });
            functions.push(NamedFunction {
                name: "g".into(),
                role: FunctionRole::Input,
                function: g.clone(),
            });
            functions.push(NamedFunction {
                name: "a".into(),
                role: FunctionRole::Output,
                function: r.inserted.clone(),
            });
            certificate = Some(CertificateDoc::InsertGap(GapCertificate {
                lower: f.clone(),
                upper: g.clone(),
                epsilon: epsilon.clone(),
                lambda: r.lambda,
                inserted: r.inserted,
            }));
        }

        Command::Kt => {
            let f = problem.pl_function("f")?;
            let g = problem.pl_function("g")?;
            let tol = param(&opts.tol, &params.tol, "tol")?;
            let (h, cert) = kt_compact(f, g, tol, &cap)?;
            rep.line(format!(
                "{} steps to tolerance {}; h has {} breakpoints",
                cert.steps.len(),
                cert.final_tol,
                h.breakpoints().len()
            ));
            for step in &cert.steps {
                rep.line(format!(
                    "  step {}: lower_ok={} upper_ok={} cauchy_ok={}",
                    step.n, step.lower_ok, step.upper_ok, step.cauchy_ok
                ));
            }
            functions.push(NamedFunction {
                name: "f".into(),
                role: FunctionRole::Input,
                function: f.clone(),
            });
            functions.push(NamedFunction {
                name: "g".into(),
                role: FunctionRole::Input,
                function: g.clone(),
            });
            functions.push(NamedFunction {
                name: "h".into(),
                role: FunctionRole::Output,
                function: h,
            });
            certificate = Some(CertificateDoc::KtIteration(cert));
        }

        Command::Extend => match &problem.model {
            ModelSpec::DenseInterval(m) => {
                for (name, value) in &problem.functions {
                    let f = value.as_pl(name)?;
                    if is_usc(f) {
                        let ext = m.extend_upper(f)?;
                        rep.line(format!("U({name}) = {ext}"));
                        functions.push(NamedFunction {
                            name: format!("upper_extension_{name}"),
                            role: FunctionRole::Output,
                            function: ext,
                        });
                    }
                    if is_lsc(f) {
                        let ext = m.extend_lower(f)?;
                        rep.line(format!("L({name}) = {ext}"));
                        functions.push(NamedFunction {
                            name: format!("lower_extension_{name}"),
                            role: FunctionRole::Output,
                            function: ext,
                        });
                    }
                    if !is_usc(f) && !is_lsc(f) {
                        rep.line(format!("{name}: neither usc nor lsc; no extension"));
                    }
                }
            }
            ModelSpec::OnePoint => {
                let m = OnePointModel;
                for (name, value) in &problem.functions {
                    let f = value.as_seq(name)?;
                    let upper = m.extend_upper(f)?;
                    let lower = m.extend_lower(f)?;
                    rep.line(format!(
                        "U({name})(infinity) = {}, L({name})(infinity) = {}",
                        upper.infinity().unwrap(),
                        lower.infinity().unwrap()
                    ));
                }
            }
            _ => {
                return Err(CliError::Invalid(
                    "extend needs the dense-interval or one-point model".into(),
                ))
            }
        },

        Command::Obstruct => {
            let eta = param(&opts.eta, &params.eta, "eta")?;
            let lambda = param(&opts.lambda, &params.lambda, "lambda")?;
            match &problem.model {
                ModelSpec::DenseInterval(m) => {
                    let f = problem.pl_function("f")?;
                    let g = problem.pl_function("g")?;
                    match m.check_obstruction(f, g, eta, lambda)? {
                        Some(obs) => {
                            rep.line(format!(
                                "obstruction at {} (eta = {}, lambda = {})",
                                obs.point, obs.eta, obs.lambda
                            ));
                            exit_code = 3;
                        }
                        None => rep.line("clear: the level-set closures are disjoint"),
                    }
                    functions.push(NamedFunction {
                        name: "f".into(),
                        role: FunctionRole::Input,
                        function: f.clone(),
                    });
                    functions.push(NamedFunction {
                        name: "g".into(),
                        role: FunctionRole::Input,
                        function: g.clone(),
                    });
                }
                ModelSpec::OnePoint => {
                    let m = OnePointModel;
                    let f = problem.function("f")?.as_seq("f")?;
                    let g = problem.function("g")?.as_seq("g")?;
                    match m.check_obstruction(f, g, eta, lambda)? {
                        Some(obs) => {
                            rep.line(format!(
                                "obstruction at {} (eta = {}, lambda = {})",
                                obs.point, obs.eta, obs.lambda
                            ));
                            exit_code = 3;
                        }
                        None => rep.line("clear: the level-set closures are disjoint"),
                    }
                }
                _ => {
                    return Err(CliError::Invalid(
                        "obstruct needs the dense-interval or one-point model".into(),
                    ))
                }
            }
        }

        Command::Pipeline => {
            let m = match &problem.model {
                ModelSpec::DenseInterval(m) => m.clone(),
                ModelSpec::PlInterval { lo, hi } => {
                    DenseIntervalModel::new(lo.clone(), hi.clone(), Vec::new())
                        .map_err(CliError::Core)?
                }
                _ => return Err(CliError::Invalid("pipeline needs an interval model".into())),
            };
            let f = problem.pl_function("f")?;
            let g = problem.pl_function("g")?;
            let tol = param(&opts.tol, &params.tol, "tol")?;
            match m.kt_pipeline(f, g, tol, &cap)? {
                PipelineOutcome::Inserted {
                    extended_usc,
                    extended_lsc,
                    restricted,
                    certificate: cert,
                } => {
                    rep.line(format!(
                        "inserted h with f - {tol} <= h <= g; {} iteration steps",
                        cert.steps.len()
                    ));
                    functions.push(NamedFunction {
                        name: "f".into(),
                        role: FunctionRole::Input,
                        function: f.clone(),
                    });
                    functions.push(NamedFunction {
                        name: "g".into(),
                        role: FunctionRole::Input,
                        function: g.clone(),
                    });
                    functions.push(NamedFunction {
                        name: "h".into(),
                        role: FunctionRole::Output,
                        function: restricted.clone(),
                    });
                    certificate = Some(CertificateDoc::Pipeline(Box::new(PipelineCertificate {
                        model: m,
                        lower: f.clone(),
                        upper: g.clone(),
                        extended_usc,
                        extended_lsc,
                        restricted,
                        kt: cert,
                    })));
                }
                PipelineOutcome::Obstructed(obs) => {
                    rep.line(format!(
                        "obstruction at {} (eta = {}, lambda = {}): \
                         the extended order fails",
                        obs.point, obs.eta, obs.lambda
                    ));
                    exit_code = 3;
                }
            }
        }

        Command::Sw => {
            let gens: Vec<_> = problem
                .doc
                .generators
                .iter()
                .map(|n| problem.function(n)?.as_finite(n).cloned())
                .collect::<Result<_, _>>()?;
            if gens.is_empty() {
                return Err(CliError::Invalid("sw needs a generators list".into()));
            }
            let target_name = problem
                .doc
                .target
                .as_ref()
                .ok_or_else(|| CliError::Invalid("sw needs a target".into()))?;
            let h = problem.function(target_name)?.as_finite(target_name)?;
            match separates(&gens)? {
                SeparationOutcome::Separates => {}
                SeparationOutcome::FailsAt { x, y } => {
                    return Err(CliError::Core(Error::Separation { x, y }))
                }
            }
            let expr = sw_construct(&gens, h)?;
            let value = expr.eval(&gens, EvalOptions::default())?;
            rep.line(format!("expression evaluates to {value} (target {h})"));
            rep.line(format!(
                "uses lattice nodes: {}, uses products: {}",
                expr.uses_lattice_ops(),
                expr.uses_product()
            ));
            rep.line(serde_json::to_string(&expr).expect("expressions serialize"));
        }

        Command::Sample | Command::Plot => {
            for (name, value) in &problem.functions {
                let f = value.as_pl(name)?;
                functions.push(NamedFunction {
                    name: name.clone(),
                    role: FunctionRole::Input,
                    function: f.clone(),
                });
            }
            if functions.is_empty() {
                return Err(CliError::Invalid("no functions to process".into()));
            }
            rep.line(format!("{} function(s) selected", functions.len()));
        }
    }

    Ok(RunOutput {
        exit_code,
        report: rep.text,
        certificate,
        functions,
    })
}

/// Writes the artifacts of a run into `opts.out_dir` (if set): the report,
/// the certificate document, CSV samples, and the SVG plot.
pub fn write_artifacts(
    cmd: Command,
    output: &RunOutput,
    opts: &RunOptions,
) -> Result<Vec<PathBuf>, CliError> {
    let Some(dir) = &opts.out_dir else {
        return Ok(Vec::new());
    };
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut save = |path: PathBuf, content: &str| -> Result<(), CliError> {
        std::fs::write(&path, content)?;
        written.push(path);
        Ok(())
    };
    save(dir.join("report.txt"), &output.report)?;
    if let Some(cert) = &output.certificate {
        let json = serde_json::to_string_pretty(cert).expect("certificates serialize");
        save(dir.join("certificate.json"), &json)?;
    }
    let resolution = opts.csv.or(if cmd == Command::Sample {
        Some(100)
    } else {
        None
    });
    if let Some(r) = resolution {
        for nf in &output.functions {
            let csv = csv_samples(&nf.function, r)?;
            save(dir.join(format!("{}.csv", nf.name)), &csv)?;
        }
    }
    if (opts.svg || cmd == Command::Plot) && !output.functions.is_empty() {
        let svg = svg_plot(&output.functions)?;
        save(dir.join("plot.svg"), &svg)?;
    }
    Ok(written)
}

/// Loads and re-verifies a certificate document.
pub fn verify_certificate_file(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)?;
    let doc: CertificateDoc = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.verify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn insert_problem() -> String {
        r#"{
            "model": "pl-interval",
            "domain": {"lo": 0, "hi": 1},
            "functions": {
                "f": {"breakpoints": [
                    {"x": 0, "value": 0, "right": 0},
                    {"x": "1/2", "left": 0, "value": 1, "right": 0},
                    {"x": 1, "left": 0, "value": 0}
                ]},
                "g": {"breakpoints": [
                    {"x": 0, "value": "1/2", "right": "1/2"},
                    {"x": "1/4", "left": "1/2", "value": "1/2", "right": "3/2"},
                    {"x": "3/4", "left": "3/2", "value": "1/2", "right": "1/2"},
                    {"x": 1, "left": "1/2", "value": "1/2"}
                ]}
            },
            "params": {"epsilon": "1/2"}
        }"#
        .to_string()
    }

    #[test]
    fn parse_minimal_document() {
        let text = r#"{
            "model": "pl-interval",
            "domain": {"lo": 0, "hi": 1},
            "functions": {
                "f": {"breakpoints": [
                    {"x": 0, "value": 0, "right": 0},
                    {"x": 1, "left": 1, "value": 1}
                ]}
            }
        }"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.functions.len(), 1);
        let f = p.pl_function("f").unwrap();
        assert_eq!(f.eval(&rat!(1 / 2)).unwrap(), rat!(1 / 2));
    }

    #[test]
    fn rationals_round_trip_exactly() {
        let text = r#"{
            "model": "finite",
            "space_size": 2,
            "functions": {"h": {"values": ["1/3", 2]}}
        }"#;
        let p = parse_problem(text).unwrap();
        let h = p.function("h").unwrap().as_finite("h").unwrap();
        assert_eq!(h.values()[0], rat!(1 / 3));
        let emitted = emit_problem(&p);
        let back = parse_problem(&emitted).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn unsorted_breakpoints_name_the_offender() {
        let text = r#"{
            "model": "pl-interval",
            "domain": {"lo": 0, "hi": 1},
            "functions": {
                "f": {"breakpoints": [
                    {"x": 0, "value": 0, "right": 0},
                    {"x": "3/4", "left": 0, "value": 0, "right": 0},
                    {"x": "1/4", "left": 0, "value": 0, "right": 0},
                    {"x": 1, "left": 0, "value": 0}
                ]}
            }
        }"#;
        let err = parse_problem(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("\"f\""), "{msg}");
        assert!(msg.contains("1/4"), "{msg}");
    }

    #[test]
    fn unknown_fields_are_rejected_with_position() {
        let text = r#"{
            "model": "pl-interval",
            "domain": {"lo": 0, "hi": 1},
            "functions": {},
            "surprise": true
        }"#;
        match parse_problem(text).unwrap_err() {
            CliError::Parse { line, .. } => assert!(line >= 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn insert_command_reports_lambda_two() {
        let p = parse_problem(&insert_problem()).unwrap();
        let out = run(Command::Insert, &p, &RunOptions::default()).unwrap();
        assert_eq!(out.exit_code, 0);
        assert!(out.report.contains("lambda = 2"), "{}", out.report);
        match out.certificate.unwrap() {
            CertificateDoc::InsertGap(c) => {
                assert_eq!(c.lambda, rat!(2));
                c.verify().unwrap();
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn pipeline_obstruction_exits_three() {
        let text = r#"{
            "model": "dense-interval",
            "domain": {"lo": 0, "hi": 1},
            "removed": ["1/2"],
            "functions": {
                "f": {"breakpoints": [
                    {"x": 0, "value": 0, "right": 0},
                    {"x": "1/2", "left": 0, "value": null, "right": 1},
                    {"x": 1, "left": 1, "value": 1}
                ]},
                "g": {"breakpoints": [
                    {"x": 0, "value": 0, "right": 0},
                    {"x": "1/2", "left": 0, "value": null, "right": 1},
                    {"x": 1, "left": 1, "value": 1}
                ]}
            },
            "params": {"tol": "1/1024"}
        }"#;
        let p = parse_problem(text).unwrap();
        let out = run(Command::Pipeline, &p, &RunOptions::default()).unwrap();
        assert_eq!(out.exit_code, 3);
        assert!(out.report.contains("obstruction at 1/2"), "{}", out.report);
    }

    #[test]
    fn sw_separation_failure_names_the_pair() {
        let text = r#"{
            "model": "finite",
            "space_size": 2,
            "functions": {
                "u": {"values": [1, 1]},
                "h": {"values": [0, 1]}
            },
            "generators": ["u"],
            "target": "h"
        }"#;
        let p = parse_problem(text).unwrap();
        let err = run(Command::Sw, &p, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains('0') && msg.contains('1'), "{msg}");
    }

    #[test]
    fn kt_run_certificate_verifies() {
        let p = parse_problem(&insert_problem()).unwrap();
        let opts = RunOptions {
            tol: Some(rat!(1 / 32)),
            ..Default::default()
        };
        let out = run(Command::Kt, &p, &opts).unwrap();
        let cert = out.certificate.unwrap();
        cert.verify().unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: CertificateDoc = serde_json::from_str(&json).unwrap();
        back.verify().unwrap();
    }

    #[test]
    fn one_point_extend_reports_the_counterexample() {
        let text = r#"{
            "model": "one-point",
            "functions": {
                "f": {"period": [1, 0]}
            }
        }"#;
        let p = parse_problem(text).unwrap();
        let out = run(Command::Extend, &p, &RunOptions::default()).unwrap();
        assert!(out.report.contains("U(f)(infinity) = 1"), "{}", out.report);
        assert!(out.report.contains("L(f)(infinity) = 0"), "{}", out.report);
    }
}
