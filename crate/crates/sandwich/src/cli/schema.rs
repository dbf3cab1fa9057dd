use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cli::CliError;
use crate::extension::DenseIntervalModel;
use crate::funcspace::{Breakpoint, FiniteFunction, PLFunction, Rat, SeqFunction};

/// The model a problem document lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    PlInterval,
    DenseInterval,
    OnePoint,
    Finite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDoc {
    pub lo: Rat,
    pub hi: Rat,
}

/// Raw function description. The variants carry disjoint field names, so
/// untagged deserialization is unambiguous; which variants are legal is
/// decided by the model during validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionDoc {
    Pl {
        breakpoints: Vec<BreakpointDoc>,
    },
    Seq {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        prefix: Vec<Rat>,
        period: Vec<Rat>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        infinity: Option<Rat>,
    },
    Finite {
        values: Vec<Rat>,
    },
}

/// One breakpoint record: `value` null (or omitted) marks a removed point,
/// `left`/`right` are required except outward at the domain endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakpointDoc {
    pub x: Rat,
    #[serde(default)]
    pub value: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Rat>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Rat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesDoc {
    pub s: Vec<String>,
    pub t: Vec<String>,
}

/// The top-level problem document, exactly as serialized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_size: Option<usize>,
    pub functions: BTreeMap<String, FunctionDoc>,
    #[serde(default, skip_serializing_if = "params_is_empty")]
    pub params: ParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<FamiliesDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

fn params_is_empty(p: &ParamsDoc) -> bool {
    p == &ParamsDoc::default()
}

/// A parsed function, already validated against its model.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionValue {
    Pl(PLFunction),
    Seq(SeqFunction),
    Finite(FiniteFunction),
}

impl FunctionValue {
    pub fn as_pl(&self, name: &str) -> Result<&PLFunction, CliError> {
        match self {
            FunctionValue::Pl(f) => Ok(f),
            _ => Err(CliError::Invalid(format!(
                "function {name:?} is not a piecewise-linear function"
            ))),
        }
    }

    pub fn as_seq(&self, name: &str) -> Result<&SeqFunction, CliError> {
        match self {
            FunctionValue::Seq(f) => Ok(f),
            _ => Err(CliError::Invalid(format!(
                "function {name:?} is not a sequence function"
            ))),
        }
    }

    pub fn as_finite(&self, name: &str) -> Result<&FiniteFunction, CliError> {
        match self {
            FunctionValue::Finite(f) => Ok(f),
            _ => Err(CliError::Invalid(format!(
                "function {name:?} is not a finite function"
            ))),
        }
    }
}

/// The validated model carried by a [`super::ProblemSpec`].
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    /// A plain compact interval.
    PlInterval { lo: Rat, hi: Rat },
    /// An interval with removed interior points.
    DenseInterval(DenseIntervalModel),
    /// The naturals in their one-point compactification.
    OnePoint,
    /// A finite discrete space.
    Finite { space_size: usize },
}

pub(super) fn validate(doc: ProblemDoc) -> Result<super::ProblemSpec, CliError> {
    let model = match doc.model {
        ModelKind::PlInterval | ModelKind::DenseInterval => {
            let domain = doc
                .domain
                .as_ref()
                .ok_or_else(|| CliError::Invalid("interval models need a domain".into()))?;
            if doc.model == ModelKind::PlInterval {
                if !doc.removed.is_empty() {
                    return Err(CliError::Invalid(
                        "removed points require the dense-interval model".into(),
                    ));
                }
                ModelSpec::PlInterval {
                    lo: domain.lo.clone(),
                    hi: domain.hi.clone(),
                }
            } else {
                ModelSpec::DenseInterval(
                    DenseIntervalModel::new(
                        domain.lo.clone(),
                        domain.hi.clone(),
                        doc.removed.clone(),
                    )
                    .map_err(|e| CliError::Invalid(e.to_string()))?,
                )
            }
        }
        ModelKind::OnePoint => ModelSpec::OnePoint,
        ModelKind::Finite => {
            let n = doc
                .space_size
                .ok_or_else(|| CliError::Invalid("the finite model needs space_size".into()))?;
            if n == 0 {
                return Err(CliError::Invalid("space_size must be positive".into()));
            }
            ModelSpec::Finite { space_size: n }
        }
    };

    let mut functions = BTreeMap::new();
    for (name, fdoc) in &doc.functions {
        let value = convert_function(&model, name, fdoc)?;
        functions.insert(name.clone(), value);
    }

    if let Some(fam) = &doc.families {
        for n in fam.s.iter().chain(fam.t.iter()) {
            if !functions.contains_key(n) {
                return Err(CliError::Invalid(format!(
                    "family references unknown function {n:?}"
                )));
            }
        }
    }
    for n in &doc.generators {
        if !functions.contains_key(n) {
            return Err(CliError::Invalid(format!(
                "generators reference unknown function {n:?}"
            )));
        }
    }
    if let Some(t) = &doc.target {
        if !functions.contains_key(t) {
            return Err(CliError::Invalid(format!("unknown target function {t:?}")));
        }
    }

    Ok(super::ProblemSpec {
        model,
        functions,
        doc,
    })
}

fn convert_function(
    model: &ModelSpec,
    name: &str,
    fdoc: &FunctionDoc,
) -> Result<FunctionValue, CliError> {
    let invalid = |msg: String| CliError::Invalid(format!("function {name:?}: {msg}"));
    let build_pl = |breakpoints: &[BreakpointDoc]| {
        let bps: Vec<Breakpoint> = breakpoints
            .iter()
            .map(|b| Breakpoint {
                x: b.x.clone(),
                value: b.value.clone(),
                left: b.left.clone(),
                right: b.right.clone(),
            })
            .collect();
        PLFunction::new(bps)
    };
    match (model, fdoc) {
        (ModelSpec::PlInterval { lo, hi }, FunctionDoc::Pl { breakpoints }) => {
            let f = build_pl(breakpoints).map_err(|e| invalid(e.to_string()))?;
            if f.lo() != lo || f.hi() != hi {
                return Err(invalid(format!(
                    "breakpoints span [{}, {}], domain is [{lo}, {hi}]",
                    f.lo(),
                    f.hi()
                )));
            }
            if !f.is_total() {
                return Err(invalid(
                    "removed points require the dense-interval model".into(),
                ));
            }
            Ok(FunctionValue::Pl(f))
        }
        (ModelSpec::DenseInterval(m), FunctionDoc::Pl { breakpoints }) => {
            let f = build_pl(breakpoints).map_err(|e| invalid(e.to_string()))?;
            m.check_function(&f).map_err(|e| invalid(e.to_string()))?;
            Ok(FunctionValue::Pl(f))
        }
        (
            ModelSpec::OnePoint,
            FunctionDoc::Seq {
                prefix,
                period,
                infinity,
            },
        ) => {
            let f = SeqFunction::new(prefix.clone(), period.clone(), infinity.clone())
                .map_err(|e| invalid(e.to_string()))?;
            Ok(FunctionValue::Seq(f))
        }
        (ModelSpec::Finite { space_size }, FunctionDoc::Finite { values }) => {
            if values.len() != *space_size {
                return Err(invalid(format!(
                    "{} values for a space of size {space_size}",
                    values.len()
                )));
            }
            let f = FiniteFunction::new(values.clone()).map_err(|e| invalid(e.to_string()))?;
            Ok(FunctionValue::Finite(f))
        }
        _ => Err(invalid("description does not match the model".into())),
    }
}

/// Parses a rational given on the command line.
pub fn parse_cli_rat(text: &str) -> Result<Rat, String> {
    Rat::from_str(text).map_err(|e| e.to_string())
}
