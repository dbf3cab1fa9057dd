use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{LeOutcome, Rat};

/// An eventually periodic rational sequence on the natural numbers,
/// optionally carrying a value at the extra point `infinity`.
///
/// The value at `n` is `prefix[n]` when `n < prefix.len()`, and
/// `period[(n - prefix.len()) % period.len()]` otherwise. Instances are
/// canonical: the period is primitive and the prefix carries no trailing
/// element that already agrees with the aligned periodic tail, so structural
/// equality is pointwise equality.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct SeqFunction {
    prefix: Vec<Rat>,
    period: Vec<Rat>,
    infinity: Option<Rat>,
}

impl SeqFunction {
    pub fn new(prefix: Vec<Rat>, period: Vec<Rat>, infinity: Option<Rat>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Construction("period must be nonempty".into()));
        }
        let mut f = SeqFunction {
            prefix,
            period,
            infinity,
        };
        f.canonicalize();
        Ok(f)
    }

    pub fn constant(c: Rat, infinity: Option<Rat>) -> Self {
        SeqFunction::new(Vec::new(), vec![c], infinity).unwrap()
    }

    /// The indicator of the even numbers (no value at infinity).
    pub fn evens_indicator() -> Self {
        SeqFunction::new(Vec::new(), vec![Rat::one(), Rat::zero()], None).unwrap()
    }

    fn canonicalize(&mut self) {
        // Primitive period: the shortest divisor-length word repeating to it.
        let n = self.period.len();
        for d in 1..n {
            if !n.is_multiple_of(d) {
                continue;
            }
            if (d..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // Minimal prefix: a trailing element equal to the last period entry
        // can be absorbed by rotating the period right.
        while let Some(last) = self.prefix.last() {
            if last == self.period.last().unwrap() {
                let tail = self.period.pop().unwrap();
                self.period.insert(0, tail);
                self.prefix.pop();
            } else {
                break;
            }
        }
    }

    pub fn prefix(&self) -> &[Rat] {
        &self.prefix
    }

    pub fn period(&self) -> &[Rat] {
        &self.period
    }

    pub fn infinity(&self) -> Option<&Rat> {
        self.infinity.as_ref()
    }

    pub fn value_at(&self, n: u64) -> &Rat {
        let p = self.prefix.len() as u64;
        if n < p {
            &self.prefix[n as usize]
        } else {
            &self.period[((n - p) % self.period.len() as u64) as usize]
        }
    }

    /// Exact `limsup` at infinity: the largest period entry.
    pub fn limsup(&self) -> &Rat {
        self.period.iter().max().unwrap()
    }

    /// Exact `liminf` at infinity: the smallest period entry.
    pub fn liminf(&self) -> &Rat {
        self.period.iter().min().unwrap()
    }

    pub fn sup_norm(&self) -> Rat {
        self.prefix
            .iter()
            .chain(self.period.iter())
            .chain(self.infinity.iter())
            .map(Rat::abs)
            .max()
            .unwrap()
    }

    pub fn is_zero_on_naturals(&self) -> bool {
        self.prefix.iter().all(Rat::is_zero) && self.period.iter().all(Rat::is_zero)
    }

    pub fn with_infinity(&self, value: Rat) -> SeqFunction {
        let mut f = self.clone();
        f.infinity = Some(value);
        f
    }

    pub fn without_infinity(&self) -> SeqFunction {
        let mut f = self.clone();
        f.infinity = None;
        f
    }

    /// Bound past which membership data is periodic for both sequences.
    fn comparison_window(&self, other: &Self) -> (u64, u64) {
        let p = self.prefix.len().max(other.prefix.len()) as u64;
        let l = (self.period.len() as u64).lcm(&(other.period.len() as u64));
        (p, l)
    }

    /// Decides `self(n) <= other(n)` for all naturals, and at infinity when
    /// both sides carry a value there.
    pub fn le(&self, other: &Self) -> SeqLeOutcome {
        let (p, l) = self.comparison_window(other);
        for n in 0..p + l {
            if self.value_at(n) > other.value_at(n) {
                return SeqLeOutcome::FailsAt(n);
            }
        }
        if let (Some(a), Some(b)) = (&self.infinity, &other.infinity) {
            if a > b {
                return SeqLeOutcome::FailsAtInfinity;
            }
        }
        SeqLeOutcome::Holds
    }

    /// Pointwise order on the naturals only, as a [`LeOutcome`]-style check
    /// with a rational witness index.
    pub fn le_on_naturals(&self, other: &Self) -> LeOutcome {
        match self.le(other) {
            SeqLeOutcome::FailsAt(n) => LeOutcome::Fails {
                witness: Rat::int(n as i64),
            },
            _ => LeOutcome::Holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqLeOutcome {
    Holds,
    FailsAt(u64),
    FailsAtInfinity,
}

impl SeqLeOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SeqLeOutcome::Holds)
    }
}

impl fmt::Display for SeqFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Rat]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "seq[{}]({})*", join(&self.prefix), join(&self.period))?;
        if let Some(v) = &self.infinity {
            write!(f, " inf={v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SeqFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqData {
    #[serde(default)]
    prefix: Vec<Rat>,
    period: Vec<Rat>,
    #[serde(default)]
    infinity: Option<Rat>,
}

impl<'de> Deserialize<'de> for SeqFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<SeqFunction, D::Error> {
        use serde::de::Error as _;
        let data = SeqData::deserialize(deserializer)?;
        SeqFunction::new(data.prefix, data.period, data.infinity)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn canonical_minimal_period() {
        let f = SeqFunction::new(vec![], vec![rat!(1), rat!(0), rat!(1), rat!(0)], None).unwrap();
        assert_eq!(f.period().len(), 2);
        assert_eq!(f, SeqFunction::evens_indicator());
    }

    #[test]
    fn canonical_minimal_prefix_rotates_period() {
        // 0, 1, 0, 1, ... written with a redundant one-element prefix.
        let f = SeqFunction::new(vec![rat!(0)], vec![rat!(1), rat!(0)], None).unwrap();
        assert_eq!(f.prefix().len(), 0);
        assert_eq!(f.period(), &[rat!(0), rat!(1)]);
        for n in 0..6 {
            assert_eq!(f.value_at(n), &rat!((n % 2) as i64));
        }
    }

    #[test]
    fn limsup_liminf_are_period_extremes() {
        let f = SeqFunction::new(vec![rat!(100)], vec![rat!(1 / 2), rat!(-1 / 3)], None).unwrap();
        assert_eq!(f.limsup(), &rat!(1 / 2));
        assert_eq!(f.liminf(), &rat!(-1 / 3));
        assert_eq!(f.sup_norm(), rat!(100));
    }

    #[test]
    fn order_check_sees_the_whole_tail() {
        let f = SeqFunction::new(vec![], vec![rat!(0), rat!(2)], None).unwrap();
        let g = SeqFunction::new(vec![], vec![rat!(1), rat!(1), rat!(1), rat!(3)], None).unwrap();
        // f: 0 2 0 2 ...; g: 1 1 1 3 1 1 1 3 ...; f(1)=2 > 1=g(1)
        assert_eq!(f.le(&g), SeqLeOutcome::FailsAt(1));
        let h = SeqFunction::constant(rat!(2), None);
        assert!(f.le(&h).holds());
    }

    #[test]
    fn serde_round_trip() {
        let f =
            SeqFunction::new(vec![rat!(5)], vec![rat!(1 / 3), rat!(0)], Some(rat!(1 / 3))).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: SeqFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
