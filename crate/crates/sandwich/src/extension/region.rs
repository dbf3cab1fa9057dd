use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::funcspace::{Rat, SeqFunction};

/// A closed subset of a compact interval: a finite union of closed rational
/// intervals (degenerate ones are isolated points), kept sorted, disjoint,
/// and maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSet {
    components: Vec<(Rat, Rat)>,
}

impl RegionSet {
    pub fn empty() -> Self {
        RegionSet {
            components: Vec::new(),
        }
    }

    /// Canonicalizes arbitrary interval parts: sorts, merges overlapping and
    /// touching components.
    pub fn new(mut parts: Vec<(Rat, Rat)>) -> Self {
        parts.retain(|(a, b)| a <= b);
        parts.sort();
        let mut components: Vec<(Rat, Rat)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match components.last_mut() {
                Some((_, end)) if a <= *end => {
                    if b > *end {
                        *end = b;
                    }
                }
                _ => components.push((a, b)),
            }
        }
        RegionSet { components }
    }

    pub fn components(&self) -> &[(Rat, Rat)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.components.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// Leftmost point of the set, if any.
    pub fn min_point(&self) -> Option<&Rat> {
        self.components.first().map(|(a, _)| a)
    }

    pub fn intersect(&self, other: &RegionSet) -> RegionSet {
        let mut parts = Vec::new();
        for (a, b) in &self.components {
            for (c, d) in &other.components {
                let lo = if a >= c { a } else { c };
                let hi = if b <= d { b } else { d };
                if lo <= hi {
                    parts.push((lo.clone(), hi.clone()));
                }
            }
        }
        RegionSet::new(parts)
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, (a, b)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            if a == b {
                write!(f, "{{{a}}}")?;
            } else {
                write!(f, "[{a}, {b}]")?;
            }
        }
        Ok(())
    }
}

/// A closed subset of the one-point compactification of the naturals,
/// described by eventually periodic membership plus an infinity flag:
/// `n` is a member when `n < prefix_len` and listed in `prefix_members`, or
/// when `(n - prefix_len) mod period_len` is listed in `period_members`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqRegion {
    pub prefix_len: u64,
    pub prefix_members: Vec<u64>,
    pub period_len: u64,
    pub period_members: Vec<u64>,
    pub contains_infinity: bool,
}

impl SeqRegion {
    /// The closure in the compactification of `{n : pred(f(n))}`: the set
    /// itself plus infinity whenever it is infinite (i.e. meets the period).
    pub fn closure_of(f: &SeqFunction, pred: impl Fn(&Rat) -> bool) -> SeqRegion {
        let prefix_members: Vec<u64> = f
            .prefix()
            .iter()
            .enumerate()
            .filter(|(_, v)| pred(v))
            .map(|(i, _)| i as u64)
            .collect();
        let period_members: Vec<u64> = f
            .period()
            .iter()
            .enumerate()
            .filter(|(_, v)| pred(v))
            .map(|(i, _)| i as u64)
            .collect();
        SeqRegion {
            prefix_len: f.prefix().len() as u64,
            prefix_members,
            period_len: f.period().len() as u64,
            period_members: period_members.clone(),
            contains_infinity: !period_members.is_empty(),
        }
    }

    pub fn contains_nat(&self, n: u64) -> bool {
        if n < self.prefix_len {
            self.prefix_members.contains(&n)
        } else {
            self.period_members
                .contains(&((n - self.prefix_len) % self.period_len))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.prefix_members.is_empty() && self.period_members.is_empty() && !self.contains_infinity
    }

    /// Smallest natural member, scanning one full alignment window.
    pub fn min_nat(&self) -> Option<u64> {
        let window = self.prefix_len + self.period_len;
        (0..window).find(|&n| self.contains_nat(n))
    }

    pub fn intersect(&self, other: &SeqRegion) -> SeqRegion {
        let prefix_len = self.prefix_len.max(other.prefix_len);
        let period_len = self.period_len.lcm(&other.period_len);
        let prefix_members = (0..prefix_len)
            .filter(|&n| self.contains_nat(n) && other.contains_nat(n))
            .collect();
        let period_members = (0..period_len)
            .filter(|&r| {
                let n = prefix_len + r;
                self.contains_nat(n) && other.contains_nat(n)
            })
            .collect();
        SeqRegion {
            prefix_len,
            prefix_members,
            period_len,
            period_members,
            contains_infinity: self.contains_infinity && other.contains_infinity,
        }
    }
}
