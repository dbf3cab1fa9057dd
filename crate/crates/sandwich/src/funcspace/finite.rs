use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::Rat;

/// A rational-valued function on a finite discrete space with points
/// `0..space_size`. This is the concrete model of the full function ring on
/// a finite compact Hausdorff space, with all of its lattice, vector-space,
/// and multiplicative structure.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FiniteFunction {
    values: Vec<Rat>,
}

impl FiniteFunction {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Construction(
                "a finite function needs at least one point".into(),
            ));
        }
        Ok(FiniteFunction { values })
    }

    pub fn constant(space_size: usize, c: Rat) -> Result<Self> {
        FiniteFunction::new(vec![c; space_size])
    }

    pub fn space_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn get(&self, point: usize) -> Result<&Rat> {
        self.values.get(point).ok_or_else(|| {
            Error::Parameter(format!(
                "point {point} outside space of size {}",
                self.values.len()
            ))
        })
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space_size() != other.space_size() {
            return Err(Error::DomainMismatch(format!(
                "space sizes {} vs {}",
                self.space_size(),
                other.space_size()
            )));
        }
        Ok(())
    }

    fn zip(&self, other: &Self, op: impl Fn(&Rat, &Rat) -> Rat) -> Result<FiniteFunction> {
        self.same_space(other)?;
        Ok(FiniteFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    /// Exact componentwise product.
    pub fn mul(&self, other: &Self) -> Result<FiniteFunction> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<FiniteFunction> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<FiniteFunction> {
        self.zip(other, |a, b| a - b)
    }

    pub fn meet(&self, other: &Self) -> Result<FiniteFunction> {
        self.zip(other, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    pub fn join(&self, other: &Self) -> Result<FiniteFunction> {
        self.zip(other, |a, b| if a >= b { a.clone() } else { b.clone() })
    }

    pub fn scale(&self, c: &Rat) -> FiniteFunction {
        FiniteFunction {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add_const(&self, c: &Rat) -> FiniteFunction {
        FiniteFunction {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Decides the pointwise order; on failure reports the first violating
    /// point id.
    pub fn le(&self, other: &Self) -> Result<FiniteLeOutcome> {
        self.same_space(other)?;
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            if a > b {
                return Ok(FiniteLeOutcome::FailsAt(i));
            }
        }
        Ok(FiniteLeOutcome::Holds)
    }

    pub fn sup_norm(&self) -> Rat {
        self.values.iter().map(Rat::abs).max().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteLeOutcome {
    Holds,
    FailsAt(usize),
}

impl FiniteLeOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, FiniteLeOutcome::Holds)
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteData {
    values: Vec<Rat>,
}

impl<'de> Deserialize<'de> for FiniteFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<FiniteFunction, D::Error> {
        use serde::de::Error as _;
        let data = FiniteData::deserialize(deserializer)?;
        FiniteFunction::new(data.values).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ff(vals: &[Rat]) -> FiniteFunction {
        FiniteFunction::new(vals.to_vec()).unwrap()
    }

    #[test]
    fn product_examples() {
        let f = ff(&[rat!(1), rat!(2)]);
        let ones = ff(&[rat!(1), rat!(1)]);
        assert_eq!(f.mul(&ones).unwrap(), f);
        let g = ff(&[rat!(-1), rat!(2)]);
        let h = ff(&[rat!(3), rat!(0)]);
        assert_eq!(g.mul(&h).unwrap(), ff(&[rat!(-3), rat!(0)]));
        let q = ff(&[rat!(1 / 2), rat!(1 / 3)]);
        assert_eq!(q.mul(&q).unwrap(), ff(&[rat!(1 / 4), rat!(1 / 9)]));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let f = ff(&[rat!(1)]);
        let g = ff(&[rat!(1), rat!(2)]);
        assert!(matches!(f.mul(&g), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn order_and_norm() {
        let f = ff(&[rat!(0), rat!(5), rat!(-7)]);
        let g = ff(&[rat!(0), rat!(5), rat!(0)]);
        assert!(f.le(&g).unwrap().holds());
        assert_eq!(g.le(&f).unwrap(), FiniteLeOutcome::FailsAt(2));
        assert_eq!(f.sup_norm(), rat!(7));
    }
}
