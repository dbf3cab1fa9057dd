use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::Rat;

/// One node of a [`PLFunction`].
///
/// A breakpoint stores the point value together with the one-sided limits of
/// the adjacent affine pieces, so jump discontinuities are ordinary data.
/// `left` is `None` exactly at the left domain endpoint and `right` is `None`
/// exactly at the right one. `value` is `None` only for functions living on a
/// punctured interval (the point is removed from the underlying space); plain
/// bounded functions always carry a value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub x: Rat,
    #[serde(default)]
    pub value: Option<Rat>,
    #[serde(default)]
    pub left: Option<Rat>,
    #[serde(default)]
    pub right: Option<Rat>,
}

impl Breakpoint {
    pub fn interior(x: Rat, left: Rat, value: Rat, right: Rat) -> Self {
        Breakpoint {
            x,
            value: Some(value),
            left: Some(left),
            right: Some(right),
        }
    }

    pub fn first(x: Rat, value: Rat, right: Rat) -> Self {
        Breakpoint {
            x,
            value: Some(value),
            left: None,
            right: Some(right),
        }
    }

    pub fn last(x: Rat, left: Rat, value: Rat) -> Self {
        Breakpoint {
            x,
            value: Some(value),
            left: Some(left),
            right: None,
        }
    }

    /// Interior breakpoint at a removed point: limits only, no value.
    pub fn removed(x: Rat, left: Rat, right: Rat) -> Self {
        Breakpoint {
            x,
            value: None,
            left: Some(left),
            right: Some(right),
        }
    }

    /// Largest adjacent limit (the inward one at domain endpoints).
    pub fn upper_limit(&self) -> &Rat {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => {
                if l >= r {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => unreachable!("breakpoint with no adjacent piece"),
        }
    }

    pub fn lower_limit(&self) -> &Rat {
        match (&self.left, &self.right) {
            (Some(l), Some(r)) => {
                if l <= r {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => unreachable!("breakpoint with no adjacent piece"),
        }
    }

    /// True when the function is continuous at this breakpoint (one-sided at
    /// domain endpoints). Removed points count as continuous when the two
    /// limits agree.
    pub fn is_continuous(&self) -> bool {
        let limits_agree = match (&self.left, &self.right) {
            (Some(l), Some(r)) => l == r,
            _ => true,
        };
        let value_matches = match &self.value {
            Some(v) => {
                self.left.as_ref().is_none_or(|l| l == v)
                    && self.right.as_ref().is_none_or(|r| r == v)
            }
            None => true,
        };
        limits_agree && value_matches
    }
}

/// The outcome of an exact pointwise order comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeOutcome {
    Holds,
    Fails { witness: Rat },
}

impl LeOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LeOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&Rat> {
        match self {
            LeOutcome::Holds => None,
            LeOutcome::Fails { witness } => Some(witness),
        }
    }
}

/// A bounded piecewise-linear function with jump discontinuities on a closed
/// rational interval.
///
/// Between consecutive breakpoints the function is the affine interpolation
/// of the stored one-sided limits; at a breakpoint it takes the stored point
/// value. Instances are canonical: no interior breakpoint is removable, so
/// structural equality coincides with pointwise equality. All operations are
/// exact and return canonical results.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct PLFunction {
    breakpoints: Vec<Breakpoint>,
}

/// Closed span of one affine piece: the open interval `(x0, x1)` together
/// with its limit values `y0` at `x0+` and `y1` at `x1-`.
#[derive(Clone, Debug)]
pub struct Piece<'a> {
    pub x0: &'a Rat,
    pub y0: &'a Rat,
    pub x1: &'a Rat,
    pub y1: &'a Rat,
}

impl Piece<'_> {
    pub fn slope(&self) -> Rat {
        (self.y1 - self.y0) / (self.x1 - self.x0)
    }

    /// Value of the affine extension at `x` (not restricted to the span).
    pub fn at(&self, x: &Rat) -> Rat {
        self.y0 + &((x - self.x0) * (self.y1 - self.y0) / (self.x1 - self.x0))
    }
}

impl PLFunction {
    /// Builds a function from breakpoint data. The domain is the span from
    /// the first to the last breakpoint. Validates the invariants and
    /// canonicalizes (removable breakpoints are dropped; removed points are
    /// always kept).
    pub fn new(breakpoints: Vec<Breakpoint>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Construction(
                "a function needs at least the two domain endpoints".into(),
            ));
        }
        for pair in breakpoints.windows(2) {
            if pair[0].x >= pair[1].x {
                return Err(Error::Construction(format!(
                    "breakpoints out of order at {}",
                    pair[1].x
                )));
            }
        }
        let last = breakpoints.len() - 1;
        for (i, bp) in breakpoints.iter().enumerate() {
            let expect_left = i > 0;
            let expect_right = i < last;
            if bp.left.is_some() != expect_left {
                return Err(Error::Construction(format!(
                    "breakpoint {}: left limit {}",
                    bp.x,
                    if expect_left {
                        "missing"
                    } else {
                        "not allowed at the domain start"
                    }
                )));
            }
            if bp.right.is_some() != expect_right {
                return Err(Error::Construction(format!(
                    "breakpoint {}: right limit {}",
                    bp.x,
                    if expect_right {
                        "missing"
                    } else {
                        "not allowed at the domain end"
                    }
                )));
            }
            if bp.value.is_none() && (i == 0 || i == last) {
                return Err(Error::Construction(format!(
                    "domain endpoint {} must carry a value",
                    bp.x
                )));
            }
        }
        let mut f = PLFunction { breakpoints };
        f.canonicalize();
        Ok(f)
    }

    /// Continuous interpolation through the given `(x, y)` nodes.
    pub fn continuous(points: &[(Rat, Rat)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Construction(
                "a continuous function needs at least two nodes".into(),
            ));
        }
        let last = points.len() - 1;
        let bps = points
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Breakpoint {
                x: x.clone(),
                value: Some(y.clone()),
                left: (i > 0).then(|| y.clone()),
                right: (i < last).then(|| y.clone()),
            })
            .collect();
        PLFunction::new(bps)
    }

    pub fn constant(lo: Rat, hi: Rat, c: Rat) -> Result<Self> {
        PLFunction::continuous(&[(lo, c.clone()), (hi, c)])
    }

    /// The affine function through `(lo, y_lo)` and `(hi, y_hi)`.
    pub fn line(lo: Rat, hi: Rat, y_lo: Rat, y_hi: Rat) -> Result<Self> {
        PLFunction::continuous(&[(lo, y_lo), (hi, y_hi)])
    }

    pub fn lo(&self) -> &Rat {
        &self.breakpoints.first().unwrap().x
    }

    pub fn hi(&self) -> &Rat {
        &self.breakpoints.last().unwrap().x
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece<'_>> {
        self.breakpoints.windows(2).map(|w| Piece {
            x0: &w[0].x,
            y0: w[0].right.as_ref().unwrap(),
            x1: &w[1].x,
            y1: w[1].left.as_ref().unwrap(),
        })
    }

    /// True when every point of the domain carries a value.
    pub fn is_total(&self) -> bool {
        self.breakpoints.iter().all(|bp| bp.value.is_some())
    }

    /// The removed (value-less) breakpoints.
    pub fn removed_points(&self) -> Vec<Rat> {
        self.breakpoints
            .iter()
            .filter(|bp| bp.value.is_none())
            .map(|bp| bp.x.clone())
            .collect()
    }

    pub fn is_continuous_fn(&self) -> bool {
        self.breakpoints.iter().all(Breakpoint::is_continuous)
    }

    fn same_domain(&self, other: &Self) -> Result<()> {
        if self.lo() != other.lo() || self.hi() != other.hi() {
            return Err(Error::DomainMismatch(format!(
                "[{}, {}] vs [{}, {}]",
                self.lo(),
                self.hi(),
                other.lo(),
                other.hi()
            )));
        }
        Ok(())
    }

    fn canonicalize(&mut self) {
        if self.breakpoints.len() <= 2 {
            return;
        }
        let n = self.breakpoints.len();
        let mut keep = vec![true; n];
        for (i, kept) in keep.iter_mut().enumerate().take(n - 1).skip(1) {
            let bp = &self.breakpoints[i];
            let (Some(v), Some(l), Some(r)) = (&bp.value, &bp.left, &bp.right) else {
                continue;
            };
            if v != l || v != r {
                continue;
            }
            let prev = &self.breakpoints[i - 1];
            let next = &self.breakpoints[i + 1];
            // Collinear iff the surrounding piece endpoints lie on one line.
            let dl = (v - prev.right.as_ref().unwrap()) * (&next.x - &bp.x);
            let dr = (next.left.as_ref().unwrap() - v) * (&bp.x - &prev.x);
            if dl == dr {
                *kept = false;
            }
        }
        if keep.iter().all(|&k| k) {
            return;
        }
        let mut i = 0;
        self.breakpoints.retain(|_| {
            let k = keep[i];
            i += 1;
            k
        });
    }

    fn position(&self, x: &Rat) -> Result<std::result::Result<usize, usize>> {
        if x < self.lo() || x > self.hi() {
            return Err(Error::OutsideDomain {
                x: x.clone(),
                lo: self.lo().clone(),
                hi: self.hi().clone(),
            });
        }
        Ok(self.breakpoints.binary_search_by(|bp| bp.x.cmp(x)))
    }

    /// Exact evaluation. Errors outside the domain and at removed points.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        match self.position(x)? {
            Ok(i) => self.breakpoints[i]
                .value
                .clone()
                .ok_or_else(|| Error::RemovedPoint { x: x.clone() }),
            Err(i) => {
                // x lies strictly inside piece (i-1, i).
                let piece = Piece {
                    x0: &self.breakpoints[i - 1].x,
                    y0: self.breakpoints[i - 1].right.as_ref().unwrap(),
                    x1: &self.breakpoints[i].x,
                    y1: self.breakpoints[i].left.as_ref().unwrap(),
                };
                Ok(piece.at(x))
            }
        }
    }

    /// Full local data at `x`: `(value, left limit, right limit)`, where the
    /// outward limits at domain endpoints are `None`.
    pub fn local_data(&self, x: &Rat) -> Result<Breakpoint> {
        match self.position(x)? {
            Ok(i) => Ok(self.breakpoints[i].clone()),
            Err(i) => {
                let piece = Piece {
                    x0: &self.breakpoints[i - 1].x,
                    y0: self.breakpoints[i - 1].right.as_ref().unwrap(),
                    x1: &self.breakpoints[i].x,
                    y1: self.breakpoints[i].left.as_ref().unwrap(),
                };
                let y = piece.at(x);
                Ok(Breakpoint::interior(x.clone(), y.clone(), y.clone(), y))
            }
        }
    }

    fn merged_grid(&self, other: &Self) -> Vec<Rat> {
        let mut grid = Vec::with_capacity(self.breakpoints.len() + other.breakpoints.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breakpoints.len() || j < other.breakpoints.len() {
            let next = match (self.breakpoints.get(i), other.breakpoints.get(j)) {
                (Some(a), Some(b)) => {
                    if a.x <= b.x {
                        if a.x == b.x {
                            j += 1;
                        }
                        i += 1;
                        a.x.clone()
                    } else {
                        j += 1;
                        b.x.clone()
                    }
                }
                (Some(a), None) => {
                    i += 1;
                    a.x.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.x.clone()
                }
                (None, None) => break,
            };
            grid.push(next);
        }
        grid
    }

    /// Combines two functions pointwise (values and both one-sided limits)
    /// on the merged grid, refined so each open interval of the grid is
    /// affine for both inputs. `refine` decides whether crossing points of
    /// the two affine pieces must become grid points (needed for min/max,
    /// pointless for linear combinations).
    fn combine(
        &self,
        other: &Self,
        refine: bool,
        op: impl Fn(&Rat, &Rat) -> Rat,
    ) -> Result<PLFunction> {
        self.same_domain(other)?;
        let mut grid = self.merged_grid(other);
        if refine {
            let mut crossings = Vec::new();
            for w in grid.windows(2) {
                let a = self.local_data(&w[0])?;
                let b = self.local_data(&w[1])?;
                let c = other.local_data(&w[0])?;
                let d = other.local_data(&w[1])?;
                let f0 = a.right.as_ref().unwrap();
                let f1 = b.left.as_ref().unwrap();
                let g0 = c.right.as_ref().unwrap();
                let g1 = d.left.as_ref().unwrap();
                // Affine difference changes sign strictly inside the
                // interval iff the endpoint differences have opposite signs.
                let d0 = f0 - g0;
                let d1 = f1 - g1;
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive())
                {
                    let t = &d0 / &(&d0 - &d1);
                    crossings.push(&w[0] + &(t * (&w[1] - &w[0])));
                }
            }
            grid.extend(crossings);
            grid.sort();
            grid.dedup();
        }
        let last = grid.len() - 1;
        let mut bps = Vec::with_capacity(grid.len());
        for (i, x) in grid.iter().enumerate() {
            let a = self.local_data(x)?;
            let b = other.local_data(x)?;
            let value = match (&a.value, &b.value) {
                (Some(u), Some(v)) => Some(op(u, v)),
                _ => None,
            };
            let left = (i > 0).then(|| op(a.left.as_ref().unwrap(), b.left.as_ref().unwrap()));
            let right =
                (i < last).then(|| op(a.right.as_ref().unwrap(), b.right.as_ref().unwrap()));
            bps.push(Breakpoint {
                x: x.clone(),
                value,
                left,
                right,
            });
        }
        PLFunction::new(bps)
    }

    /// Exact pointwise minimum.
    pub fn meet(&self, other: &Self) -> Result<PLFunction> {
        self.combine(
            other,
            true,
            |a, b| if a <= b { a.clone() } else { b.clone() },
        )
    }

    /// Exact pointwise maximum.
    pub fn join(&self, other: &Self) -> Result<PLFunction> {
        self.combine(
            other,
            true,
            |a, b| if a >= b { a.clone() } else { b.clone() },
        )
    }

    /// Exact `alpha * self + beta * other`.
    pub fn affine(alpha: &Rat, f: &Self, beta: &Rat, g: &Self) -> Result<PLFunction> {
        f.combine(g, false, |a, b| alpha * a + beta * b)
    }

    pub fn add(&self, other: &Self) -> Result<PLFunction> {
        PLFunction::affine(&Rat::one(), self, &Rat::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<PLFunction> {
        PLFunction::affine(&Rat::one(), self, &-Rat::one(), other)
    }

    /// Exact `a * self + b`, without touching the breakpoint grid.
    pub fn scale_shift(&self, a: &Rat, b: &Rat) -> PLFunction {
        let map = |v: &Rat| a * v + b;
        let bps = self
            .breakpoints
            .iter()
            .map(|bp| Breakpoint {
                x: bp.x.clone(),
                value: bp.value.as_ref().map(&map),
                left: bp.left.as_ref().map(&map),
                right: bp.right.as_ref().map(&map),
            })
            .collect();
        let mut f = PLFunction { breakpoints: bps };
        f.canonicalize();
        f
    }

    pub fn neg(&self) -> PLFunction {
        self.scale_shift(&-Rat::one(), &Rat::zero())
    }

    pub fn add_const(&self, b: &Rat) -> PLFunction {
        self.scale_shift(&Rat::one(), b)
    }

    /// Decides `self <= other` everywhere (removed points are skipped: the
    /// comparison is over the common underlying space). On failure returns a
    /// witness point where the order is violated.
    pub fn le(&self, other: &Self) -> Result<LeOutcome> {
        self.same_domain(other)?;
        let grid = self.merged_grid(other);
        let half = Rat::new(1, 2);
        for w in grid.windows(2) {
            let a = self.local_data(&w[0])?;
            let b = other.local_data(&w[0])?;
            // Point values first, then the piece to the right.
            if let (Some(u), Some(v)) = (&a.value, &b.value) {
                if u > v {
                    return Ok(LeOutcome::Fails {
                        witness: w[0].clone(),
                    });
                }
            }
            let f0 = a.right.as_ref().unwrap().clone();
            let g0 = b.right.as_ref().unwrap().clone();
            let f1 = self.local_data(&w[1])?.left.unwrap();
            let g1 = other.local_data(&w[1])?.left.unwrap();
            let d0 = &f0 - &g0;
            let d1 = &f1 - &g1;
            if d0.is_positive() || d1.is_positive() {
                // The affine difference is positive somewhere strictly
                // inside (w0, w1); return an interior witness.
                let witness = if d0.is_positive() && d1.is_positive() {
                    (&w[0] + &w[1]) * &half
                } else if d0.is_positive() {
                    // Positive near w0; zero crossing at w0 + t(w1-w0).
                    let t = &d0 / &(&d0 - &d1);
                    let x0 = &w[0] + &(t * (&w[1] - &w[0]));
                    (&w[0] + &x0) * &half
                } else {
                    let t = &d0 / &(&d0 - &d1);
                    let x0 = &w[0] + &(t * (&w[1] - &w[0]));
                    (&x0 + &w[1]) * &half
                };
                return Ok(LeOutcome::Fails { witness });
            }
        }
        let a = self.breakpoints.last().unwrap();
        let b = other.breakpoints.last().unwrap();
        if let (Some(u), Some(v)) = (&a.value, &b.value) {
            if u > v {
                return Ok(LeOutcome::Fails {
                    witness: a.x.clone(),
                });
            }
        }
        Ok(LeOutcome::Holds)
    }

    /// The uniform norm `sup |f|`, exact. The supremum over each open piece
    /// is attained in the closure, so it is the maximum over all stored
    /// values and limits.
    pub fn sup_norm(&self) -> Rat {
        let mut best = Rat::zero();
        for bp in &self.breakpoints {
            for v in [&bp.value, &bp.left, &bp.right].into_iter().flatten() {
                let a = v.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Largest absolute slope over all affine pieces.
    pub fn max_abs_slope(&self) -> Rat {
        let mut best = Rat::zero();
        for p in self.pieces() {
            let s = p.slope().abs();
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Marks the given interior points as removed (inserting breakpoints
    /// where needed). The function values elsewhere are unchanged.
    pub fn puncture(&self, points: &[Rat]) -> Result<PLFunction> {
        let mut f = self.clone();
        for x in points {
            if x <= f.lo() || x >= f.hi() {
                return Err(Error::Parameter(format!(
                    "removed point {x} must be interior to [{}, {}]",
                    f.lo(),
                    f.hi()
                )));
            }
            match f.position(x)? {
                Ok(i) => f.breakpoints[i].value = None,
                Err(i) => {
                    let piece = Piece {
                        x0: &f.breakpoints[i - 1].x,
                        y0: f.breakpoints[i - 1].right.as_ref().unwrap(),
                        x1: &f.breakpoints[i].x,
                        y1: f.breakpoints[i].left.as_ref().unwrap(),
                    };
                    let y = piece.at(x);
                    f.breakpoints
                        .insert(i, Breakpoint::removed(x.clone(), y.clone(), y));
                }
            }
        }
        Ok(f)
    }

    /// Fills every removed point with `fill(left, right)` and canonicalizes.
    pub fn fill_removed(&self, fill: impl Fn(&Rat, &Rat) -> Rat) -> PLFunction {
        let bps = self
            .breakpoints
            .iter()
            .map(|bp| {
                if bp.value.is_some() {
                    bp.clone()
                } else {
                    let mut out = bp.clone();
                    out.value = Some(fill(bp.left.as_ref().unwrap(), bp.right.as_ref().unwrap()));
                    out
                }
            })
            .collect();
        let mut f = PLFunction { breakpoints: bps };
        f.canonicalize();
        f
    }
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pl[{}, {}]", self.lo(), self.hi())?;
        for bp in &self.breakpoints {
            write!(f, " ({}", bp.x)?;
            if let Some(l) = &bp.left {
                write!(f, " l={l}")?;
            }
            match &bp.value {
                Some(v) => write!(f, " v={v}")?,
                None => write!(f, " v=-")?,
            }
            if let Some(r) = &bp.right {
                write!(f, " r={r}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlData {
    breakpoints: Vec<Breakpoint>,
}

impl TryFrom<PlData> for PLFunction {
    type Error = Error;
    fn try_from(data: PlData) -> Result<PLFunction> {
        PLFunction::new(data.breakpoints)
    }
}

impl<'de> Deserialize<'de> for PLFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<PLFunction, D::Error> {
        use serde::de::Error as _;
        let data = PlData::deserialize(deserializer)?;
        PLFunction::try_from(data).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn unit() -> (Rat, Rat) {
        (rat!(0), rat!(1))
    }

    /// The identity x on [0,1].
    fn ident() -> PLFunction {
        let (lo, hi) = unit();
        PLFunction::line(lo, hi, rat!(0), rat!(1)).unwrap()
    }

    /// chi_[1/2,1]: 0 before 1/2, 1 from 1/2 on, value 1 at the jump.
    fn step_closed() -> PLFunction {
        PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(1 / 2), rat!(0), rat!(1), rat!(1)),
            Breakpoint::last(rat!(1), rat!(1), rat!(1)),
        ])
        .unwrap()
    }

    #[test]
    fn eval_affine_interpolation() {
        assert_eq!(ident().eval(&rat!(1 / 2)).unwrap(), rat!(1 / 2));
    }

    #[test]
    fn eval_constant_piece_and_jump_value() {
        let f = step_closed();
        assert_eq!(f.eval(&rat!(1 / 4)).unwrap(), rat!(0));
        assert_eq!(f.eval(&rat!(1 / 2)).unwrap(), rat!(1));
    }

    #[test]
    fn eval_outside_domain_errors() {
        let err = ident().eval(&rat!(2)).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain { .. }));
    }

    #[test]
    fn le_reflexive_and_witnessed() {
        let f = ident();
        assert!(f.le(&f).unwrap().holds());
        let g = PLFunction::line(rat!(0), rat!(1), rat!(1), rat!(0)).unwrap();
        let out = f.le(&g).unwrap();
        let w = out.witness().expect("must fail").clone();
        assert!(f.eval(&w).unwrap() > g.eval(&w).unwrap());
        assert!(w > rat!(1 / 2));
    }

    #[test]
    fn le_step_below_one() {
        let one = PLFunction::constant(rat!(0), rat!(1), rat!(1)).unwrap();
        assert!(step_closed().le(&one).unwrap().holds());
    }

    #[test]
    fn join_of_crossing_lines_is_v_shape() {
        let f = ident();
        let g = PLFunction::line(rat!(0), rat!(1), rat!(1), rat!(0)).unwrap();
        let j = f.join(&g).unwrap();
        assert_eq!(j.eval(&rat!(1 / 2)).unwrap(), rat!(1 / 2));
        assert_eq!(j.breakpoints().len(), 3);
        assert_eq!(j.breakpoints()[1].x, rat!(1 / 2));
        assert_eq!(j.eval(&rat!(1 / 4)).unwrap(), rat!(3 / 4));
        assert_eq!(j.eval(&rat!(3 / 4)).unwrap(), rat!(3 / 4));
    }

    #[test]
    fn meet_idempotent() {
        let f = step_closed();
        assert_eq!(f.meet(&f).unwrap(), f);
    }

    #[test]
    fn meet_step_with_constant_half() {
        let f = step_closed();
        let half = PLFunction::constant(rat!(0), rat!(1), rat!(1 / 2)).unwrap();
        let m = f.meet(&half).unwrap();
        // 0 on [0,1/2), then 1/2, with value 1/2 at the jump.
        assert_eq!(m.eval(&rat!(1 / 4)).unwrap(), rat!(0));
        assert_eq!(m.eval(&rat!(1 / 2)).unwrap(), rat!(1 / 2));
        assert_eq!(m.eval(&rat!(3 / 4)).unwrap(), rat!(1 / 2));
        let bp = &m.breakpoints()[1];
        assert_eq!(bp.x, rat!(1 / 2));
        assert_eq!(bp.left, Some(rat!(0)));
        assert_eq!(bp.value, Some(rat!(1 / 2)));
        assert_eq!(bp.right, Some(rat!(1 / 2)));
    }

    #[test]
    fn affine_identity_and_cancellation() {
        let f = step_closed();
        let zero = PLFunction::constant(rat!(0), rat!(1), rat!(0)).unwrap();
        assert_eq!(
            PLFunction::affine(&rat!(1), &f, &rat!(1), &zero).unwrap(),
            f
        );
        let x = ident();
        let one_minus_x = PLFunction::line(rat!(0), rat!(1), rat!(1), rat!(0)).unwrap();
        let sum = x.add(&one_minus_x).unwrap();
        assert_eq!(
            sum,
            PLFunction::constant(rat!(0), rat!(1), rat!(1)).unwrap()
        );
    }

    #[test]
    fn negated_step() {
        let f = step_closed();
        let n = f.neg();
        assert_eq!(n.eval(&rat!(1 / 4)).unwrap(), rat!(0));
        assert_eq!(n.eval(&rat!(1 / 2)).unwrap(), rat!(-1));
        assert_eq!(n.eval(&rat!(3 / 4)).unwrap(), rat!(-1));
    }

    #[test]
    fn sup_norm_cases() {
        let f = ident().add_const(&rat!(-1 / 2));
        assert_eq!(f.sup_norm(), rat!(1 / 2));
        let zero = PLFunction::constant(rat!(0), rat!(1), rat!(0)).unwrap();
        assert_eq!(zero.sup_norm(), rat!(0));
        // values -1 then 0
        let g = step_closed()
            .sub(&PLFunction::constant(rat!(0), rat!(1), rat!(1)).unwrap())
            .unwrap();
        assert_eq!(g.sup_norm(), rat!(1));
    }

    #[test]
    fn canonicalization_removes_collinear_nodes() {
        let f = PLFunction::continuous(&[
            (rat!(0), rat!(0)),
            (rat!(1 / 2), rat!(1 / 2)),
            (rat!(1), rat!(1)),
        ])
        .unwrap();
        assert_eq!(f.breakpoints().len(), 2);
        assert_eq!(f, ident());
    }

    #[test]
    fn canonicalization_keeps_kinks_and_jumps() {
        let tent = PLFunction::continuous(&[
            (rat!(0), rat!(0)),
            (rat!(1 / 2), rat!(1)),
            (rat!(1), rat!(0)),
        ])
        .unwrap();
        assert_eq!(tent.breakpoints().len(), 3);
        assert_eq!(step_closed().breakpoints().len(), 3);
    }

    #[test]
    fn puncture_and_fill_round_trip() {
        let f = ident();
        let punctured = f.puncture(&[rat!(1 / 2)]).unwrap();
        assert!(!punctured.is_total());
        assert_eq!(punctured.removed_points(), vec![rat!(1 / 2)]);
        assert!(matches!(
            punctured.eval(&rat!(1 / 2)).unwrap_err(),
            Error::RemovedPoint { .. }
        ));
        assert_eq!(punctured.eval(&rat!(1 / 4)).unwrap(), rat!(1 / 4));
        let filled = punctured.fill_removed(|l, r| if l >= r { l.clone() } else { r.clone() });
        assert_eq!(filled, f);
    }

    #[test]
    fn construction_rejects_bad_data() {
        let out_of_order = PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(3 / 4), rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(1 / 4), rat!(0), rat!(0), rat!(0)),
            Breakpoint::last(rat!(1), rat!(0), rat!(0)),
        ]);
        match out_of_order.unwrap_err() {
            Error::Construction(msg) => assert!(msg.contains("1/4")),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(PLFunction::new(vec![Breakpoint::first(rat!(0), rat!(0), rat!(0))]).is_err());
        // interior breakpoint missing a limit
        let missing = PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint {
                x: rat!(1 / 2),
                value: Some(rat!(0)),
                left: None,
                right: Some(rat!(0)),
            },
            Breakpoint::last(rat!(1), rat!(0), rat!(0)),
        ]);
        assert!(missing.is_err());
    }

    #[test]
    fn serde_round_trip() {
        let f = step_closed();
        let json = serde_json::to_string(&f).unwrap();
        let back: PLFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
