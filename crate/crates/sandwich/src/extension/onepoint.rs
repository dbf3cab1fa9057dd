use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{Obstruction, SeqRegion};
use crate::funcspace::{Rat, SeqFunction, SeqLeOutcome};

/// A point of the one-point compactification of the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeqPoint {
    Nat(u64),
    Infinity,
}

impl std::fmt::Display for SeqPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeqPoint::Nat(n) => write!(f, "{n}"),
            SeqPoint::Infinity => write!(f, "infinity"),
        }
    }
}

/// The naturals inside their one-point compactification. Functions on the
/// discrete part are [`SeqFunction`]s without an infinity value; functions
/// on the whole space carry one. Every function on the discrete part is
/// both usc and lsc there, so the extension operators have no preconditions
/// beyond the missing infinity value.
///
/// This model exists to exhibit obstructions: it is a compactification of
/// the naturals, but not the one through which bounded functions extend in
/// an order-preserving way. The indicator of the evens is the canonical
/// counterexample: its upper extension takes the value 1 at infinity while
/// its lower extension takes 0 there.
#[derive(Clone, Copy, Debug, Default)]
pub struct OnePointModel;

impl OnePointModel {
    fn require_on_naturals(f: &SeqFunction) -> Result<()> {
        if f.infinity().is_some() {
            return Err(Error::Parameter(
                "expected a function on the naturals (no infinity value)".into(),
            ));
        }
        Ok(())
    }

    /// Upper extension: the value at infinity becomes the exact limsup.
    pub fn extend_upper(&self, f: &SeqFunction) -> Result<SeqFunction> {
        Self::require_on_naturals(f)?;
        Ok(f.with_infinity(f.limsup().clone()))
    }

    /// Lower extension: the value at infinity becomes the exact liminf.
    pub fn extend_lower(&self, f: &SeqFunction) -> Result<SeqFunction> {
        Self::require_on_naturals(f)?;
        Ok(f.with_infinity(f.liminf().clone()))
    }

    pub fn restrict(&self, f: &SeqFunction) -> SeqFunction {
        f.without_infinity()
    }

    /// Usc on the whole space: at every natural trivially (isolated points),
    /// at infinity iff the value dominates the limsup of the tail.
    pub fn is_usc_on_y(&self, f: &SeqFunction) -> Result<bool> {
        match f.infinity() {
            Some(v) => Ok(v >= f.limsup()),
            None => Err(Error::Parameter(
                "semicontinuity on the compactification needs an infinity value".into(),
            )),
        }
    }

    pub fn is_lsc_on_y(&self, f: &SeqFunction) -> Result<bool> {
        match f.infinity() {
            Some(v) => Ok(v <= f.liminf()),
            None => Err(Error::Parameter(
                "semicontinuity on the compactification needs an infinity value".into(),
            )),
        }
    }

    /// For the zero function on the naturals, two distinct usc extensions:
    /// zero everywhere, and the indicator of the point at infinity.
    pub fn nonunique_usc_extensions(&self, f: &SeqFunction) -> Result<(SeqFunction, SeqFunction)> {
        Self::require_on_naturals(f)?;
        if !f.is_zero_on_naturals() {
            return Err(Error::Parameter(
                "the demonstration needs the zero function".into(),
            ));
        }
        let canonical = self.extend_upper(f)?;
        let bumped = f.with_infinity(Rat::one());
        Ok((canonical, bumped))
    }

    /// Closure in the compactification of `{n : f(n) >= eta}`.
    pub fn superlevel_closure(&self, f: &SeqFunction, eta: &Rat) -> Result<SeqRegion> {
        Self::require_on_naturals(f)?;
        Ok(SeqRegion::closure_of(f, |v| v >= eta))
    }

    /// Closure of `{n : g(n) <= lambda}`.
    pub fn sublevel_closure(&self, g: &SeqFunction, lambda: &Rat) -> Result<SeqRegion> {
        Self::require_on_naturals(g)?;
        Ok(SeqRegion::closure_of(g, |v| v <= lambda))
    }

    /// Looks for a point in both level-set closures; infinity is reported
    /// only when no natural witness exists.
    pub fn check_obstruction(
        &self,
        f: &SeqFunction,
        g: &SeqFunction,
        eta: &Rat,
        lambda: &Rat,
    ) -> Result<Option<Obstruction<SeqPoint>>> {
        if eta <= lambda {
            return Err(Error::Parameter(format!(
                "levels must straddle: eta {eta} must exceed lambda {lambda}"
            )));
        }
        match f.le(g) {
            SeqLeOutcome::Holds => {}
            SeqLeOutcome::FailsAt(n) => {
                return Err(Error::Precondition {
                    reason: format!("f <= g fails at {n}"),
                    witness: Some(Rat::int(n as i64)),
                });
            }
            SeqLeOutcome::FailsAtInfinity => {
                return Err(Error::Parameter(
                    "expected functions on the naturals (no infinity value)".into(),
                ));
            }
        }
        let upper = self.superlevel_closure(f, eta)?;
        let lower = self.sublevel_closure(g, lambda)?;
        let both = upper.intersect(&lower);
        let point = match both.min_nat() {
            Some(n) => Some(SeqPoint::Nat(n)),
            None if both.contains_infinity => Some(SeqPoint::Infinity),
            None => None,
        };
        Ok(point.map(|point| Obstruction {
            point,
            eta: eta.clone(),
            lambda: lambda.clone(),
        }))
    }
}
