//! Lattice approximation machinery on finite discrete spaces: point
//! separation, two-point affine interpolation, the join-of-meets
//! constructor that realizes any target exactly from separating generators,
//! and the clopen two-sided approximation.
//!
//! On a finite space uniform density collapses to exact representability,
//! so every constructor here verifies componentwise equality (or the exact
//! two-sided bound) before returning. Product nodes exist in the expression
//! language but are disabled by default: the constructions need only the
//! vector-lattice structure with constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{FiniteFunction, Rat};

/// An expression over generator leaves and rational constants, closed under
/// addition, scalar multiples, pointwise join/meet, and (optionally)
/// products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum LatticeExpr {
    Gen {
        index: usize,
    },
    Const {
        value: Rat,
    },
    Add {
        lhs: Box<LatticeExpr>,
        rhs: Box<LatticeExpr>,
    },
    Scale {
        factor: Rat,
        inner: Box<LatticeExpr>,
    },
    Join {
        lhs: Box<LatticeExpr>,
        rhs: Box<LatticeExpr>,
    },
    Meet {
        lhs: Box<LatticeExpr>,
        rhs: Box<LatticeExpr>,
    },
    Mul {
        lhs: Box<LatticeExpr>,
        rhs: Box<LatticeExpr>,
    },
}

/// Evaluation switches. Products are off unless explicitly enabled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub allow_product: bool,
}

impl LatticeExpr {
    pub fn gen(index: usize) -> Self {
        LatticeExpr::Gen { index }
    }

    pub fn constant(value: Rat) -> Self {
        LatticeExpr::Const { value }
    }

    pub fn plus(self, rhs: LatticeExpr) -> Self {
        LatticeExpr::Add {
            lhs: Box::new(self),
            rhs: Box::new(rhs),
        }
    }

    pub fn scale(self, factor: Rat) -> Self {
        LatticeExpr::Scale {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn join(self, rhs: LatticeExpr) -> Self {
        LatticeExpr::Join {
            lhs: Box::new(self),
            rhs: Box::new(rhs),
        }
    }

    pub fn meet(self, rhs: LatticeExpr) -> Self {
        LatticeExpr::Meet {
            lhs: Box::new(self),
            rhs: Box::new(rhs),
        }
    }

    /// Exact evaluation against a generator assignment.
    pub fn eval(&self, gens: &[FiniteFunction], opts: EvalOptions) -> Result<FiniteFunction> {
        let n = gens
            .first()
            .map(FiniteFunction::space_size)
            .ok_or_else(|| Error::Parameter("generator list must be nonempty".into()))?;
        self.eval_inner(gens, n, opts)
    }

    fn eval_inner(
        &self,
        gens: &[FiniteFunction],
        n: usize,
        opts: EvalOptions,
    ) -> Result<FiniteFunction> {
        match self {
            LatticeExpr::Gen { index } => gens
                .get(*index)
                .cloned()
                .ok_or_else(|| Error::Parameter(format!("generator index {index} out of range"))),
            LatticeExpr::Const { value } => FiniteFunction::constant(n, value.clone()),
            LatticeExpr::Add { lhs, rhs } => lhs
                .eval_inner(gens, n, opts)?
                .add(&rhs.eval_inner(gens, n, opts)?),
            LatticeExpr::Scale { factor, inner } => {
                Ok(inner.eval_inner(gens, n, opts)?.scale(factor))
            }
            LatticeExpr::Join { lhs, rhs } => lhs
                .eval_inner(gens, n, opts)?
                .join(&rhs.eval_inner(gens, n, opts)?),
            LatticeExpr::Meet { lhs, rhs } => lhs
                .eval_inner(gens, n, opts)?
                .meet(&rhs.eval_inner(gens, n, opts)?),
            LatticeExpr::Mul { lhs, rhs } => {
                if !opts.allow_product {
                    return Err(Error::ProductDisabled);
                }
                lhs.eval_inner(gens, n, opts)?
                    .mul(&rhs.eval_inner(gens, n, opts)?)
            }
        }
    }

    pub fn uses_lattice_ops(&self) -> bool {
        match self {
            LatticeExpr::Gen { .. } | LatticeExpr::Const { .. } => false,
            LatticeExpr::Add { lhs, rhs } | LatticeExpr::Mul { lhs, rhs } => {
                lhs.uses_lattice_ops() || rhs.uses_lattice_ops()
            }
            LatticeExpr::Scale { inner, .. } => inner.uses_lattice_ops(),
            LatticeExpr::Join { .. } | LatticeExpr::Meet { .. } => true,
        }
    }

    pub fn uses_product(&self) -> bool {
        match self {
            LatticeExpr::Gen { .. } | LatticeExpr::Const { .. } => false,
            LatticeExpr::Add { lhs, rhs }
            | LatticeExpr::Join { lhs, rhs }
            | LatticeExpr::Meet { lhs, rhs } => lhs.uses_product() || rhs.uses_product(),
            LatticeExpr::Scale { inner, .. } => inner.uses_product(),
            LatticeExpr::Mul { .. } => true,
        }
    }
}

/// Separation check outcome: either every pair of points is separated by
/// some generator, or a violating pair is named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationOutcome {
    Separates,
    FailsAt { x: usize, y: usize },
}

impl SeparationOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SeparationOutcome::Separates)
    }
}

fn common_size(gens: &[FiniteFunction]) -> Result<usize> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Parameter("generator list must be nonempty".into()))?;
    let n = first.space_size();
    if gens.iter().any(|g| g.space_size() != n) {
        return Err(Error::Parameter(
            "generators must share one space size".into(),
        ));
    }
    Ok(n)
}

/// Do the generators separate the points of the space?
pub fn separates(gens: &[FiniteFunction]) -> Result<SeparationOutcome> {
    let n = common_size(gens)?;
    for x in 0..n {
        for y in x + 1..n {
            let split = gens.iter().any(|g| g.values()[x] != g.values()[y]);
            if !split {
                return Ok(SeparationOutcome::FailsAt { x, y });
            }
        }
    }
    Ok(SeparationOutcome::Separates)
}

/// An affine expression in one separating generator taking the value
/// `alpha` at `x` and `beta` at `y`. Never uses join, meet, or product
/// nodes: the affine span with constants suffices for two-point
/// interpolation.
pub fn interpolate_pair(
    gens: &[FiniteFunction],
    x: usize,
    y: usize,
    alpha: &Rat,
    beta: &Rat,
) -> Result<LatticeExpr> {
    let n = common_size(gens)?;
    if x >= n || y >= n {
        return Err(Error::Parameter(format!(
            "points {x}, {y} outside space of size {n}"
        )));
    }
    if x == y {
        return Err(Error::Parameter(
            "interpolation needs two distinct points".into(),
        ));
    }
    if alpha == beta {
        return Ok(LatticeExpr::constant(alpha.clone()));
    }
    let Some((index, g)) = gens
        .iter()
        .enumerate()
        .find(|(_, g)| g.values()[x] != g.values()[y])
    else {
        return Err(Error::Separation { x, y });
    };
    let gx = &g.values()[x];
    let gy = &g.values()[y];
    let factor = (beta - alpha)
        .checked_div(&(gy - gx))
        .expect("separating generator has distinct values");
    // alpha + factor * (g - g(x))
    let expr = LatticeExpr::gen(index)
        .plus(LatticeExpr::constant(-gx.clone()))
        .scale(factor)
        .plus(LatticeExpr::constant(alpha.clone()));
    Ok(expr)
}

/// The join-of-meets construction: realizes `h` exactly over separating
/// generators as `join_x meet_{y != x} interpolate(x, y, h(x), h(y))`.
/// Verified componentwise equal to `h` before returning.
pub fn sw_construct(gens: &[FiniteFunction], h: &FiniteFunction) -> Result<LatticeExpr> {
    let n = common_size(gens)?;
    if h.space_size() != n {
        return Err(Error::DomainMismatch(format!(
            "target lives on {} points, generators on {n}",
            h.space_size()
        )));
    }
    if let SeparationOutcome::FailsAt { x, y } = separates(gens)? {
        return Err(Error::Separation { x, y });
    }
    let expr = if n == 1 {
        LatticeExpr::constant(h.values()[0].clone())
    } else {
        let mut outer: Option<LatticeExpr> = None;
        for x in 0..n {
            let mut inner: Option<LatticeExpr> = None;
            for y in 0..n {
                if y == x {
                    continue;
                }
                let e = interpolate_pair(gens, x, y, &h.values()[x], &h.values()[y])?;
                inner = Some(match inner {
                    None => e,
                    Some(acc) => acc.meet(e),
                });
            }
            let m = inner.expect("n > 1 yields at least one pair");
            outer = Some(match outer {
                None => m,
                Some(acc) => acc.join(m),
            });
        }
        outer.unwrap()
    };
    let value = expr.eval(gens, EvalOptions::default())?;
    if &value != h {
        return Err(Error::Internal(format!(
            "construction evaluated to {value}, expected {h}"
        )));
    }
    Ok(expr)
}

/// Given witnesses `meet(S) = h + eps/2` and `join(T) = h + eps` (checked
/// exactly), picks one member per point to obtain finite subfamilies with
/// `meet(S0) <= join(T0)` and returns `a = meet(S0)`, which satisfies
/// `h + eps/2 <= a <= h + eps`, hence `|a - h| <= eps`.
pub fn clopen_approx(
    h: &FiniteFunction,
    s: &[LatticeExpr],
    t: &[LatticeExpr],
    epsilon: &Rat,
    gens: &[FiniteFunction],
) -> Result<LatticeExpr> {
    if !epsilon.is_positive() {
        return Err(Error::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if s.is_empty() || t.is_empty() {
        return Err(Error::Parameter("witness families must be nonempty".into()));
    }
    let opts = EvalOptions::default();
    let s_vals: Vec<FiniteFunction> = s
        .iter()
        .map(|e| e.eval(gens, opts))
        .collect::<Result<_>>()?;
    let t_vals: Vec<FiniteFunction> = t
        .iter()
        .map(|e| e.eval(gens, opts))
        .collect::<Result<_>>()?;

    let half = Rat::new(1, 2);
    let closed_target = h.add_const(&(epsilon * &half));
    let open_target = h.add_const(epsilon);
    let meet_s = s_vals
        .iter()
        .skip(1)
        .fold(s_vals[0].clone(), |acc, v| acc.meet(v).expect("same space"));
    if meet_s != closed_target {
        return Err(Error::Precondition {
            reason: "meet(S) must equal h + epsilon/2 exactly".into(),
            witness: None,
        });
    }
    let join_t = t_vals
        .iter()
        .skip(1)
        .fold(t_vals[0].clone(), |acc, v| acc.join(v).expect("same space"));
    if join_t != open_target {
        return Err(Error::Precondition {
            reason: "join(T) must equal h + epsilon exactly".into(),
            witness: None,
        });
    }

    // Pointwise extraction on the finite space: at each point pick the
    // member attaining the meet and the member attaining the join.
    let n = h.space_size();
    let mut s_picked: Vec<usize> = Vec::new();
    let mut t_picked: Vec<usize> = Vec::new();
    for p in 0..n {
        let si = (0..s_vals.len())
            .find(|&i| s_vals[i].values()[p] == closed_target.values()[p])
            .expect("meet is attained");
        let ti = (0..t_vals.len())
            .find(|&i| t_vals[i].values()[p] == open_target.values()[p])
            .expect("join is attained");
        if !s_picked.contains(&si) {
            s_picked.push(si);
        }
        if !t_picked.contains(&ti) {
            t_picked.push(ti);
        }
    }
    s_picked.sort_unstable();
    t_picked.sort_unstable();

    let expr = s_picked
        .iter()
        .map(|&i| s[i].clone())
        .reduce(|acc, e| acc.meet(e))
        .expect("at least one pick");
    let a = expr.eval(gens, opts)?;
    let t0_join = t_picked
        .iter()
        .map(|&i| t_vals[i].clone())
        .reduce(|acc, v| acc.join(&v).expect("same space"))
        .expect("at least one pick");
    if !a.le(&t0_join)?.holds() {
        return Err(Error::Internal("extracted pair is out of order".into()));
    }
    if !closed_target.le(&a)?.holds() || !a.le(&open_target)?.holds() {
        return Err(Error::Internal(
            "two-sided clopen bound failed after extraction".into(),
        ));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ff(vals: &[Rat]) -> FiniteFunction {
        FiniteFunction::new(vals.to_vec()).unwrap()
    }

    #[test]
    fn separation_examples() {
        let inj = vec![ff(&[rat!(0), rat!(1), rat!(2)])];
        assert!(separates(&inj).unwrap().holds());
        let consts = vec![ff(&[rat!(1), rat!(1)])];
        assert_eq!(
            separates(&consts).unwrap(),
            SeparationOutcome::FailsAt { x: 0, y: 1 }
        );
        let two = vec![
            ff(&[rat!(0), rat!(0), rat!(1)]),
            ff(&[rat!(0), rat!(1), rat!(0)]),
        ];
        assert!(separates(&two).unwrap().holds());
        // Exhaustive cross-check of the two-generator case.
        for x in 0..3 {
            for y in (x + 1)..3 {
                assert!(two.iter().any(|g| g.values()[x] != g.values()[y]));
            }
        }
    }

    #[test]
    fn separation_is_insensitive_to_order_and_constants() {
        let a = ff(&[rat!(0), rat!(0), rat!(1)]);
        let b = ff(&[rat!(0), rat!(1), rat!(0)]);
        let fwd = separates(&[a.clone(), b.clone()]).unwrap();
        let rev = separates(&[b, a]).unwrap();
        assert_eq!(fwd.holds(), rev.holds());
        let with_const = vec![ff(&[rat!(7), rat!(7)]), ff(&[rat!(0), rat!(1)])];
        assert!(separates(&with_const).unwrap().holds());
    }

    #[test]
    fn interpolation_examples() {
        let gens = vec![ff(&[rat!(0), rat!(1)])];
        let e = interpolate_pair(&gens, 0, 1, &rat!(5), &rat!(7)).unwrap();
        let v = e.eval(&gens, EvalOptions::default()).unwrap();
        assert_eq!(v, ff(&[rat!(5), rat!(7)]));
        assert!(!e.uses_lattice_ops());
        assert!(!e.uses_product());

        let gens = vec![ff(&[rat!(2), rat!(2), rat!(3)])];
        let e = interpolate_pair(&gens, 0, 2, &rat!(0), &rat!(1)).unwrap();
        let v = e.eval(&gens, EvalOptions::default()).unwrap();
        assert_eq!(v, ff(&[rat!(0), rat!(0), rat!(1)]));

        // Equal targets collapse to a constant.
        let e = interpolate_pair(&gens, 0, 2, &rat!(4), &rat!(4)).unwrap();
        assert_eq!(e, LatticeExpr::constant(rat!(4)));

        // Non-separated pair is reported.
        let err = interpolate_pair(&gens, 0, 1, &rat!(0), &rat!(1)).unwrap_err();
        assert_eq!(err, Error::Separation { x: 0, y: 1 });
    }

    #[test]
    fn construction_hits_the_target_exactly() {
        let gens = vec![ff(&[rat!(0), rat!(1), rat!(2)])];
        let h = ff(&[rat!(5), rat!(-1), rat!(2)]);
        // Not affine in the generator: -1 is not the midpoint of 5 and 2,
        // so lattice nodes are genuinely needed.
        let e = sw_construct(&gens, &h).unwrap();
        assert!(e.uses_lattice_ops());
        assert!(!e.uses_product());
        assert_eq!(e.eval(&gens, EvalOptions::default()).unwrap(), h);
    }

    #[test]
    fn construction_degenerate_and_generator_targets() {
        let gens = vec![ff(&[rat!(3)])];
        let e = sw_construct(&gens, &ff(&[rat!(9)])).unwrap();
        assert_eq!(e, LatticeExpr::constant(rat!(9)));

        let g = ff(&[rat!(0), rat!(1), rat!(1 / 2)]);
        let gens = vec![g.clone()];
        let e = sw_construct(&gens, &g).unwrap();
        assert_eq!(e.eval(&gens, EvalOptions::default()).unwrap(), g);
    }

    #[test]
    fn construction_rejects_non_separating_generators() {
        let gens = vec![ff(&[rat!(1), rat!(1)])];
        let h = ff(&[rat!(0), rat!(1)]);
        let err = sw_construct(&gens, &h).unwrap_err();
        assert_eq!(err, Error::Separation { x: 0, y: 1 });
    }

    #[test]
    fn product_nodes_are_gated() {
        let gens = vec![ff(&[rat!(2), rat!(3)])];
        let e = LatticeExpr::Mul {
            lhs: Box::new(LatticeExpr::gen(0)),
            rhs: Box::new(LatticeExpr::gen(0)),
        };
        assert!(matches!(
            e.eval(&gens, EvalOptions::default()),
            Err(Error::ProductDisabled)
        ));
        let v = e
            .eval(
                &gens,
                EvalOptions {
                    allow_product: true,
                },
            )
            .unwrap();
        assert_eq!(v, ff(&[rat!(4), rat!(9)]));
        assert!(e.uses_product());
    }

    #[test]
    fn clopen_approx_examples() {
        let gens = vec![ff(&[rat!(0), rat!(1)])];
        // Singleton witnesses.
        let h = ff(&[rat!(0), rat!(0)]);
        let s = vec![LatticeExpr::constant(rat!(1 / 2))];
        let t = vec![LatticeExpr::constant(rat!(1))];
        let a = clopen_approx(&h, &s, &t, &rat!(1), &gens).unwrap();
        let val = a.eval(&gens, EvalOptions::default()).unwrap();
        assert_eq!(val, ff(&[rat!(1 / 2), rat!(1 / 2)]));
        assert!(val.sub(&h).unwrap().sup_norm() <= rat!(1));

        // A two-member closed witness whose meet is h + 1/2.
        let h = ff(&[rat!(0), rat!(1)]);
        let s1 = sw_construct(&gens, &ff(&[rat!(1 / 2), rat!(3 / 2)])).unwrap();
        let s2 = LatticeExpr::constant(rat!(3 / 2));
        let t1 = sw_construct(&gens, &ff(&[rat!(1), rat!(2)])).unwrap();
        let a = clopen_approx(&h, &[s1, s2], &[t1], &rat!(1), &gens).unwrap();
        let val = a.eval(&gens, EvalOptions::default()).unwrap();
        assert_eq!(val, ff(&[rat!(1 / 2), rat!(3 / 2)]));

        // Large epsilon with trivial witnesses.
        let h = ff(&[rat!(-1), rat!(4)]);
        let s = vec![sw_construct(&gens, &h.add_const(&rat!(1))).unwrap()];
        let t = vec![sw_construct(&gens, &h.add_const(&rat!(2))).unwrap()];
        let a = clopen_approx(&h, &s, &t, &rat!(2), &gens).unwrap();
        let val = a.eval(&gens, EvalOptions::default()).unwrap();
        assert!(val.sub(&h).unwrap().sup_norm() <= rat!(2));
    }

    #[test]
    fn clopen_approx_rejects_bad_witnesses() {
        let gens = vec![ff(&[rat!(0), rat!(1)])];
        let h = ff(&[rat!(0), rat!(0)]);
        let s = vec![LatticeExpr::constant(rat!(1))]; // should be h + 1/2
        let t = vec![LatticeExpr::constant(rat!(1))];
        assert!(matches!(
            clopen_approx(&h, &s, &t, &rat!(1), &gens),
            Err(Error::Precondition { .. })
        ));
    }
}
