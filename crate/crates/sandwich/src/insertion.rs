//! Certified insertion of a continuous function between an upper
//! semicontinuous floor and a lower semicontinuous ceiling on a compact
//! interval.
//!
//! [`insert_gap`] handles the separated case `f + epsilon <= g`: it walks a
//! doubling Lipschitz schedule until the decreasing majorant family of `f`
//! drops below the increasing minorant family of `g`, and returns that
//! majorant. Termination is the compactness argument: the closed sets where
//! the two envelopes are still out of order shrink to the empty set.
//!
//! [`kt_compact`] handles the general case `f <= g` by the dyadic iteration
//!     a_1 inserted into (f - 1/2, g),
//!     a_{n+1} inserted into ((f - 2^-(n+1)) v (a_n - 2^-n),
//!                            g ^ (a_n + 2^-n)),
//! which keeps every iterate continuous and sandwiched:
//!     f - 2^-n <= a_n <= g,   |a_n - a_{n-1}| <= 2^-(n-1).
//! The exact limit exists only in the completion, so the iteration stops at
//! the requested dyadic tolerance and returns the final iterate together
//! with a certificate of every inequality along the way. The certificate is
//! re-verifiable from its stored functions alone.

use serde::{Deserialize, Serialize};

use crate::compactc::extract_chain_pair;
use crate::error::{Error, Result};
use crate::funcspace::{LeOutcome, PLFunction, Rat};
use crate::semicont::{lsc_violation, usc_violation, Direction, LipschitzFamily, Schedule};

/// Result of one gap insertion: the Lipschitz constant that separated the
/// envelope families and the inserted continuous function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapInsertion {
    pub lambda: Rat,
    pub inserted: PLFunction,
}

fn require_usc(f: &PLFunction) -> Result<()> {
    if let Some(v) = usc_violation(f) {
        return Err(Error::NotUsc {
            breakpoint: v.breakpoint,
            deficit: v.deficit,
        });
    }
    Ok(())
}

fn require_lsc(g: &PLFunction) -> Result<()> {
    if let Some(v) = lsc_violation(g) {
        return Err(Error::NotLsc {
            breakpoint: v.breakpoint,
            deficit: v.deficit,
        });
    }
    Ok(())
}

/// Inserts a continuous `a` with `f <= a <= g`, given usc `f`, lsc `g`, and
/// an exact gap `f + epsilon <= g` with `epsilon > 0`.
///
/// The shared doubling schedule starts at `max(1, steepest slope of f or g)`
/// and is capped by `lambda_cap`; hitting the cap on valid input is a bug
/// and reported as an internal error.
pub fn insert_gap(
    f: &PLFunction,
    g: &PLFunction,
    epsilon: &Rat,
    lambda_cap: &Rat,
) -> Result<GapInsertion> {
    if !epsilon.is_positive() {
        return Err(Error::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    require_usc(f)?;
    require_lsc(g)?;
    match f.add_const(epsilon).le(g)? {
        LeOutcome::Holds => {}
        LeOutcome::Fails { witness } => {
            return Err(Error::Precondition {
                reason: format!("gap premise f + {epsilon} <= g does not hold"),
                witness: Some(witness),
            });
        }
    }
    let schedule = Schedule::for_functions(&[f, g]).with_cap(lambda_cap.clone());
    let upper = LipschitzFamily::new(f.clone(), Direction::Upper, schedule.clone());
    let lower = LipschitzFamily::new(g.clone(), Direction::Lower, schedule);
    match extract_chain_pair(&upper, &lower) {
        Ok(step) => Ok(GapInsertion {
            lambda: step.lambda_upper,
            inserted: step.upper,
        }),
        Err(Error::ScheduleCap { cap }) => Err(Error::Internal(format!(
            "gap insertion exhausted the lambda schedule at cap {cap}; \
             this cannot happen for a verified premise"
        ))),
        Err(e) => Err(e),
    }
}

/// One step of the certified iteration. The booleans record exact checks of
/// the two sandwich inequalities and of the dyadic Cauchy bound against the
/// previous iterate (`a_0 = a_1` by convention).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub n: u32,
    pub approximant: PLFunction,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub cauchy_ok: bool,
}

/// Full record of a [`kt_compact`] run: the bounds, the final tolerance
/// `2^-N`, and every iterate with its checks. [`InsertionCertificate::verify`]
/// recomputes all checks from the stored functions using only order
/// comparisons and the uniform norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsertionCertificate {
    pub lower: PLFunction,
    pub upper: PLFunction,
    pub final_tol: Rat,
    pub steps: Vec<CertificateStep>,
}

impl InsertionCertificate {
    pub fn last(&self) -> &PLFunction {
        &self.steps.last().expect("at least one step").approximant
    }

    pub fn verify(&self) -> Result<()> {
        let n_steps = self.steps.len() as u32;
        if n_steps == 0 {
            return Err(Error::Certificate("certificate has no steps".into()));
        }
        if self.final_tol != Rat::pow2(-(n_steps as i32)) {
            return Err(Error::Certificate(format!(
                "final tolerance {} does not match {} steps",
                self.final_tol, n_steps
            )));
        }
        let mut prev: Option<&PLFunction> = None;
        for (i, step) in self.steps.iter().enumerate() {
            if step.n != i as u32 + 1 {
                return Err(Error::Certificate(format!(
                    "step numbering broken at position {i}"
                )));
            }
            if !(step.lower_ok && step.upper_ok && step.cauchy_ok) {
                return Err(Error::Certificate(format!(
                    "step {} records a failed check",
                    step.n
                )));
            }
            let shift = Rat::pow2(-(step.n as i32));
            let floor = self.lower.add_const(&-shift);
            if !floor.le(&step.approximant)?.holds() {
                return Err(Error::Certificate(format!(
                    "step {}: lower bound fails",
                    step.n
                )));
            }
            if !step.approximant.le(&self.upper)?.holds() {
                return Err(Error::Certificate(format!(
                    "step {}: upper bound fails",
                    step.n
                )));
            }
            let reference = prev.unwrap_or(&step.approximant);
            let dist = step.approximant.sub(reference)?.sup_norm();
            if dist > Rat::pow2(-(step.n as i32 - 1)) {
                return Err(Error::Certificate(format!(
                    "step {}: dyadic rate fails ({dist})",
                    step.n
                )));
            }
            prev = Some(&step.approximant);
        }
        Ok(())
    }
}

/// Runs the dyadic insertion iteration down to `tol = 2^-N`, returning the
/// final iterate `h` (continuous, with `f - tol <= h <= g` exactly) and the
/// populated certificate.
pub fn kt_compact(
    f: &PLFunction,
    g: &PLFunction,
    tol: &Rat,
    lambda_cap: &Rat,
) -> Result<(PLFunction, InsertionCertificate)> {
    require_usc(f)?;
    require_lsc(g)?;
    let Some(n_steps) = tol.as_half_power() else {
        return Err(Error::Parameter(format!(
            "tolerance must be 1/2^n with n >= 1, got {tol}"
        )));
    };
    match f.le(g)? {
        LeOutcome::Holds => {}
        LeOutcome::Fails { witness } => {
            return Err(Error::Precondition {
                reason: "f <= g does not hold".into(),
                witness: Some(witness),
            });
        }
    }

    let mut steps: Vec<CertificateStep> = Vec::with_capacity(n_steps as usize);
    let mut prev: Option<PLFunction> = None;
    for n in 1..=n_steps {
        let shift = Rat::pow2(-(n as i32));
        let (floor, ceil) = match &prev {
            // Base case: (f - 1/2) + 1/2 <= g.
            None => (f.add_const(&-shift.clone()), g.clone()),
            Some(a) => {
                let band = Rat::pow2(-(n as i32 - 1));
                let floor = f
                    .add_const(&-shift.clone())
                    .join(&a.add_const(&-band.clone()))?;
                let ceil = g.meet(&a.add_const(&band))?;
                (floor, ceil)
            }
        };
        let a_n = insert_gap(&floor, &ceil, &shift, lambda_cap)?.inserted;

        let lower_ok = f.add_const(&-shift).le(&a_n)?.holds();
        let upper_ok = a_n.le(g)?.holds();
        let cauchy_ok = match &prev {
            None => true,
            Some(a) => a_n.sub(a)?.sup_norm() <= Rat::pow2(-(n as i32 - 1)),
        };
        if !(lower_ok && upper_ok && cauchy_ok) {
            return Err(Error::Internal(format!(
                "iteration invariant failed at step {n}"
            )));
        }
        steps.push(CertificateStep {
            n,
            approximant: a_n.clone(),
            lower_ok,
            upper_ok,
            cauchy_ok,
        });
        prev = Some(a_n);
    }

    let h = prev.expect("n_steps >= 1");
    let cert = InsertionCertificate {
        lower: f.clone(),
        upper: g.clone(),
        final_tol: tol.clone(),
        steps,
    };
    Ok((h, cert))
}

/// Self-contained record of one gap insertion, re-verifiable with order
/// comparisons alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub lower: PLFunction,
    pub upper: PLFunction,
    pub epsilon: Rat,
    pub lambda: Rat,
    pub inserted: PLFunction,
}

impl GapCertificate {
    pub fn verify(&self) -> Result<()> {
        if !self.lower.add_const(&self.epsilon).le(&self.upper)?.holds() {
            return Err(Error::Certificate("gap premise fails".into()));
        }
        if !self.lower.le(&self.inserted)?.holds() {
            return Err(Error::Certificate(
                "inserted function is not above f".into(),
            ));
        }
        if !self.inserted.le(&self.upper)?.holds() {
            return Err(Error::Certificate(
                "inserted function is not below g".into(),
            ));
        }
        if self.inserted.max_abs_slope() > self.lambda {
            return Err(Error::Certificate(
                "inserted function exceeds the recorded Lipschitz constant".into(),
            ));
        }
        Ok(())
    }
}
