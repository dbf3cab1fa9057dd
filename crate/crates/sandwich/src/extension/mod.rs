//! Extension of semicontinuous functions from a dense subspace to a
//! compactification, with the order check that decides whether the
//! compactification can carry the insertion argument.
//!
//! Two desk models are provided. [`DenseIntervalModel`] removes finitely
//! many interior points from a closed rational interval: the punctured set
//! is dense in the interval, and a function on it is a piecewise-linear
//! function with no values at the removed points. [`OnePointModel`] is the
//! naturals inside their one-point compactification, with eventually
//! periodic functions.
//!
//! The upper extension fills each missing point with the local limit
//! supremum (`U(f)(y) = inf over neighborhoods of the sup of f nearby`), the
//! lower extension dually. Extensions always restrict back to the input and
//! are semicontinuous on the whole space, but the order `f <= g` survives
//! extension only when the closures of the superlevel sets of `f` avoid the
//! closures of the sublevel sets of `g` at straddling levels — otherwise an
//! [`Obstruction`] names a point and a level pair witnessing the failure,
//! which is exactly what happens on the one-point model for the indicator
//! of the evens.

mod onepoint;
mod region;

pub use onepoint::{OnePointModel, SeqPoint};
pub use region::{RegionSet, SeqRegion};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{Breakpoint, LeOutcome, PLFunction, Rat};
use crate::insertion::{kt_compact, InsertionCertificate};
use crate::semicont::{is_lsc, is_usc, lsc_violation, usc_violation};

/// A point `y` of the compactification where the extended order fails,
/// together with levels `eta > lambda` such that `y` lies in the closure of
/// `{f >= eta}` and in the closure of `{g <= lambda}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction<P> {
    pub point: P,
    pub eta: Rat,
    pub lambda: Rat,
}

/// Outcome of the end-to-end pipeline on the interval model.
#[derive(Clone, Debug)]
pub enum PipelineOutcome {
    /// The extended order held; `restricted` is continuous on the punctured
    /// interval with `f - tol <= restricted <= g` there, and the certificate
    /// documents the insertion between the extensions.
    Inserted {
        extended_usc: PLFunction,
        extended_lsc: PLFunction,
        restricted: PLFunction,
        certificate: InsertionCertificate,
    },
    /// The extensions are out of order; the obstruction is re-checkable via
    /// the level-set closures.
    Obstructed(Obstruction<Rat>),
}

/// A compact interval `[lo, hi]` with finitely many interior points removed.
/// The punctured set is the underlying space; the interval is its
/// compactification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseIntervalModel {
    lo: Rat,
    hi: Rat,
    removed: Vec<Rat>,
}

impl DenseIntervalModel {
    pub fn new(lo: Rat, hi: Rat, mut removed: Vec<Rat>) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Parameter(format!(
                "degenerate interval [{lo}, {hi}]"
            )));
        }
        removed.sort();
        removed.dedup();
        for d in &removed {
            if d <= &lo || d >= &hi {
                return Err(Error::Parameter(format!(
                    "removed point {d} must be interior to [{lo}, {hi}]"
                )));
            }
        }
        Ok(DenseIntervalModel { lo, hi, removed })
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn removed(&self) -> &[Rat] {
        &self.removed
    }

    /// Checks that `f` is a function on the punctured set: right domain and
    /// values absent exactly at the removed points.
    pub fn check_function(&self, f: &PLFunction) -> Result<()> {
        if f.lo() != &self.lo || f.hi() != &self.hi {
            return Err(Error::DomainMismatch(format!(
                "function on [{}, {}] does not match the model [{}, {}]",
                f.lo(),
                f.hi(),
                self.lo,
                self.hi
            )));
        }
        let missing = f.removed_points();
        if missing != self.removed {
            return Err(Error::Construction(format!(
                "function must be undefined exactly at the removed points \
                 (expected {:?}, found {:?})",
                self.removed, missing
            )));
        }
        Ok(())
    }

    /// Interprets a total function on the interval as a function on the
    /// punctured set.
    pub fn restrict(&self, h: &PLFunction) -> Result<PLFunction> {
        if h.lo() != &self.lo || h.hi() != &self.hi {
            return Err(Error::DomainMismatch(
                "restriction needs a function on the ambient interval".into(),
            ));
        }
        h.puncture(&self.removed)
    }

    /// The upper extension: fills every removed point with the larger
    /// one-sided limit, the least value keeping the result usc.
    pub fn extend_upper(&self, f: &PLFunction) -> Result<PLFunction> {
        self.check_function(f)?;
        if let Some(v) = usc_violation(f) {
            return Err(Error::NotUsc {
                breakpoint: v.breakpoint,
                deficit: v.deficit,
            });
        }
        let out = f.fill_removed(|l, r| if l >= r { l.clone() } else { r.clone() });
        debug_assert!(is_usc(&out));
        Ok(out)
    }

    /// Dual of [`Self::extend_upper`].
    pub fn extend_lower(&self, g: &PLFunction) -> Result<PLFunction> {
        self.check_function(g)?;
        if let Some(v) = lsc_violation(g) {
            return Err(Error::NotLsc {
                breakpoint: v.breakpoint,
                deficit: v.deficit,
            });
        }
        let out = g.fill_removed(|l, r| if l <= r { l.clone() } else { r.clone() });
        debug_assert!(is_lsc(&out));
        Ok(out)
    }

    /// For the zero function on the punctured set, exhibits two distinct usc
    /// extensions: the canonical one (zero) and zero plus the indicator of
    /// the removed set.
    pub fn nonunique_usc_extensions(&self, f: &PLFunction) -> Result<(PLFunction, PLFunction)> {
        self.check_function(f)?;
        if self.removed.is_empty() {
            return Err(Error::Parameter(
                "the punctured set equals the interval; extensions are unique".into(),
            ));
        }
        let is_zero = f.breakpoints().iter().all(|bp| {
            [&bp.value, &bp.left, &bp.right]
                .into_iter()
                .flatten()
                .all(Rat::is_zero)
        });
        if !is_zero {
            return Err(Error::Parameter(
                "the demonstration needs the zero function".into(),
            ));
        }
        let canonical = self.extend_upper(f)?;
        let mut bps: Vec<Breakpoint> =
            vec![Breakpoint::first(self.lo.clone(), Rat::zero(), Rat::zero())];
        for d in &self.removed {
            bps.push(Breakpoint::interior(
                d.clone(),
                Rat::zero(),
                Rat::one(),
                Rat::zero(),
            ));
        }
        bps.push(Breakpoint::last(self.hi.clone(), Rat::zero(), Rat::zero()));
        let bumped = PLFunction::new(bps)?;
        debug_assert!(is_usc(&bumped));
        Ok((canonical, bumped))
    }

    /// Closure (in the full interval) of `{x in the punctured set : f(x) >= eta}`.
    pub fn superlevel_closure(&self, f: &PLFunction, eta: &Rat) -> Result<RegionSet> {
        self.check_function(f)?;
        if usc_violation(f).is_some() {
            return Err(Error::Precondition {
                reason: "superlevel closures need an usc function".into(),
                witness: None,
            });
        }
        Ok(level_closure(f, eta))
    }

    /// Closure of `{x : g(x) <= lambda}`, dual to [`Self::superlevel_closure`].
    pub fn sublevel_closure(&self, g: &PLFunction, lambda: &Rat) -> Result<RegionSet> {
        self.check_function(g)?;
        if lsc_violation(g).is_some() {
            return Err(Error::Precondition {
                reason: "sublevel closures need an lsc function".into(),
                witness: None,
            });
        }
        Ok(level_closure(&g.neg(), &-lambda.clone()))
    }

    /// Looks for a point of the interval lying in both level-set closures.
    /// `Ok(None)` means the pair `(eta, lambda)` produces no obstruction.
    pub fn check_obstruction(
        &self,
        f: &PLFunction,
        g: &PLFunction,
        eta: &Rat,
        lambda: &Rat,
    ) -> Result<Option<Obstruction<Rat>>> {
        if eta <= lambda {
            return Err(Error::Parameter(format!(
                "levels must straddle: eta {eta} must exceed lambda {lambda}"
            )));
        }
        match f.le(g)? {
            LeOutcome::Holds => {}
            LeOutcome::Fails { witness } => {
                return Err(Error::Precondition {
                    reason: "f <= g must hold on the punctured set".into(),
                    witness: Some(witness),
                });
            }
        }
        let upper = self.superlevel_closure(f, eta)?;
        let lower = self.sublevel_closure(g, lambda)?;
        let both = upper.intersect(&lower);
        Ok(both.min_point().cloned().map(|point| Obstruction {
            point,
            eta: eta.clone(),
            lambda: lambda.clone(),
        }))
    }

    /// End-to-end insertion on the punctured interval: extend, check the
    /// order, insert between the extensions, restrict back. When the
    /// extended order fails the returned obstruction carries straddling
    /// levels chosen deterministically between the two extension values at
    /// the witness point.
    pub fn kt_pipeline(
        &self,
        f: &PLFunction,
        g: &PLFunction,
        tol: &Rat,
        lambda_cap: &Rat,
    ) -> Result<PipelineOutcome> {
        match f.le(g)? {
            LeOutcome::Holds => {}
            LeOutcome::Fails { witness } => {
                return Err(Error::Precondition {
                    reason: "f <= g must hold on the punctured set".into(),
                    witness: Some(witness),
                });
            }
        }
        let extended_usc = self.extend_upper(f)?;
        let extended_lsc = self.extend_lower(g)?;
        match extended_usc.le(&extended_lsc)? {
            LeOutcome::Holds => {
                let (h, certificate) = kt_compact(&extended_usc, &extended_lsc, tol, lambda_cap)?;
                let restricted = self.restrict(&h)?;
                // The sandwich survives restriction because the extensions
                // agree with f and g on the punctured set; re-check exactly.
                let floor = f.add_const(&-tol.clone());
                if !floor.le(&restricted)?.holds() || !restricted.le(g)?.holds() {
                    return Err(Error::Internal(
                        "restricted insertion lost the sandwich".into(),
                    ));
                }
                Ok(PipelineOutcome::Inserted {
                    extended_usc,
                    extended_lsc,
                    restricted,
                    certificate,
                })
            }
            LeOutcome::Fails { witness } => {
                let fv = extended_usc.eval(&witness)?;
                let gv = extended_lsc.eval(&witness)?;
                let delta = &fv - &gv;
                debug_assert!(delta.is_positive());
                let quarter = Rat::new(1, 4);
                let lambda = &gv + &(&delta * &quarter);
                let eta = &fv - &(&delta * &quarter);
                let obstruction =
                    self.check_obstruction(f, g, &eta, &lambda)?
                        .ok_or_else(|| {
                            Error::Internal(
                                "extended order failed but the closures do not meet".into(),
                            )
                        })?;
                Ok(PipelineOutcome::Obstructed(obstruction))
            }
        }
    }
}

/// Closure of the superlevel set `{f >= eta}` within the ambient interval.
/// Works on the stored limits, so removed points enter exactly when the set
/// accumulates at them. A solution touching a piece only in the limit at its
/// open end contributes nothing.
fn level_closure(f: &PLFunction, eta: &Rat) -> RegionSet {
    let mut parts: Vec<(Rat, Rat)> = Vec::new();
    for piece in f.pieces() {
        let d0 = piece.y0 - eta;
        let d1 = piece.y1 - eta;
        let x0 = piece.x0.clone();
        let x1 = piece.x1.clone();
        match (d0.is_negative(), d1.is_negative()) {
            (true, true) => {}
            (false, false) => parts.push((x0, x1)),
            (false, true) => {
                let t = &d0 / &(&d0 - &d1);
                let cross = &x0 + &(t * (&x1 - &x0));
                if cross > x0 {
                    parts.push((x0, cross));
                }
            }
            (true, false) => {
                let t = &d0 / &(&d0 - &d1);
                let cross = &x0 + &(t * (&x1 - &x0));
                if cross < x1 {
                    parts.push((cross, x1));
                }
            }
        }
    }
    for bp in f.breakpoints() {
        if let Some(v) = &bp.value {
            if v >= eta {
                parts.push((bp.x.clone(), bp.x.clone()));
            }
        }
    }
    RegionSet::new(parts)
}

/// Self-contained, re-verifiable record of a successful pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineCertificate {
    pub model: DenseIntervalModel,
    pub lower: PLFunction,
    pub upper: PLFunction,
    pub extended_usc: PLFunction,
    pub extended_lsc: PLFunction,
    pub restricted: PLFunction,
    pub kt: InsertionCertificate,
}

impl PipelineCertificate {
    pub fn verify(&self) -> Result<()> {
        self.model.check_function(&self.lower)?;
        self.model.check_function(&self.upper)?;
        if self.model.restrict(&self.extended_usc)? != self.lower {
            return Err(Error::Certificate(
                "usc extension does not restrict to f".into(),
            ));
        }
        if self.model.restrict(&self.extended_lsc)? != self.upper {
            return Err(Error::Certificate(
                "lsc extension does not restrict to g".into(),
            ));
        }
        if !is_usc(&self.extended_usc) {
            return Err(Error::Certificate("extension of f is not usc".into()));
        }
        if !is_lsc(&self.extended_lsc) {
            return Err(Error::Certificate("extension of g is not lsc".into()));
        }
        if !self.extended_usc.le(&self.extended_lsc)?.holds() {
            return Err(Error::Certificate("extensions are out of order".into()));
        }
        if self.kt.lower != self.extended_usc || self.kt.upper != self.extended_lsc {
            return Err(Error::Certificate(
                "inner certificate bounds do not match the extensions".into(),
            ));
        }
        self.kt.verify()?;
        if self.model.restrict(self.kt.last())? != self.restricted {
            return Err(Error::Certificate(
                "restricted function does not match the final iterate".into(),
            ));
        }
        let floor = self.lower.add_const(&-self.kt.final_tol.clone());
        if !floor.le(&self.restricted)?.holds() || !self.restricted.le(&self.upper)?.holds() {
            return Err(Error::Certificate("restricted sandwich fails".into()));
        }
        Ok(())
    }
}
