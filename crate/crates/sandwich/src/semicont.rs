//! Semicontinuity predicates, usc/lsc envelopes, and the constructive
//! decomposition of a semicontinuous function into a monotone family of
//! Lipschitz functions.
//!
//! The decomposition realized here is Pasch-Hausdorff regularization:
//! `f^lambda(x) = sup_y (f(y) - lambda |x - y|)` is the least
//! `lambda`-Lipschitz majorant of `f`. As `lambda` grows the family
//! decreases, and its pointwise infimum is the usc envelope of `f` — so for
//! usc `f` it is a meet of continuous functions converging to `f` itself.
//! The dual family `g_lambda(x) = inf_y (g(y) + lambda |x - y|)` increases
//! to the lsc envelope. On piecewise-linear data everything is exactly
//! computable: the supremum over the closed graph reduces to finitely many
//! cone and tent contributions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{PLFunction, Rat};

/// Witness that a function fails a semicontinuity check: the breakpoint and
/// the gap between the required and the stored point value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemicontViolation {
    pub breakpoint: Rat,
    pub deficit: Rat,
}

/// Returns the leftmost witness against upper semicontinuity, or `None` when
/// `f` is usc. A function is usc iff each point value dominates the adjacent
/// one-sided limits; removed points impose no condition.
pub fn usc_violation(f: &PLFunction) -> Option<SemicontViolation> {
    for bp in f.breakpoints() {
        if let Some(v) = &bp.value {
            let need = bp.upper_limit();
            if v < need {
                return Some(SemicontViolation {
                    breakpoint: bp.x.clone(),
                    deficit: need - v,
                });
            }
        }
    }
    None
}

/// Dual of [`usc_violation`]: point values must sit at or below the adjacent
/// limits.
pub fn lsc_violation(f: &PLFunction) -> Option<SemicontViolation> {
    for bp in f.breakpoints() {
        if let Some(v) = &bp.value {
            let need = bp.lower_limit();
            if v > need {
                return Some(SemicontViolation {
                    breakpoint: bp.x.clone(),
                    deficit: v - need,
                });
            }
        }
    }
    None
}

pub fn is_usc(f: &PLFunction) -> bool {
    usc_violation(f).is_none()
}

pub fn is_lsc(f: &PLFunction) -> bool {
    lsc_violation(f).is_none()
}

pub fn is_continuous(f: &PLFunction) -> bool {
    is_usc(f) && is_lsc(f)
}

/// The least usc majorant among functions differing from `f` only at
/// breakpoints: each point value is raised to the adjacent limit suprema.
pub fn usc_envelope(f: &PLFunction) -> PLFunction {
    repair(
        f,
        |v, limit| if v >= limit { v.clone() } else { limit.clone() },
        true,
    )
}

/// Dual of [`usc_envelope`].
pub fn lsc_envelope(f: &PLFunction) -> PLFunction {
    repair(
        f,
        |v, limit| if v <= limit { v.clone() } else { limit.clone() },
        false,
    )
}

fn repair(f: &PLFunction, pick: impl Fn(&Rat, &Rat) -> Rat, upper: bool) -> PLFunction {
    let bps = f
        .breakpoints()
        .iter()
        .map(|bp| {
            let mut out = bp.clone();
            if let Some(v) = &bp.value {
                let limit = if upper {
                    bp.upper_limit()
                } else {
                    bp.lower_limit()
                };
                out.value = Some(pick(v, limit));
            }
            out
        })
        .collect();
    // The repaired data is valid whenever the input was.
    PLFunction::new(bps).expect("envelope repair preserves validity")
}

/// The least `lambda`-Lipschitz majorant `sup_y (f(y) - lambda |x-y|)`,
/// exact. The supremum ranges over the closed graph of `f`: each affine
/// piece contributes with its limit values, and each point value strictly
/// above its limits contributes an isolated cone.
pub fn upper_lipschitz(f: &PLFunction, lambda: &Rat) -> Result<PLFunction> {
    if !lambda.is_positive() {
        return Err(Error::Parameter(format!(
            "lipschitz constant must be positive, got {lambda}"
        )));
    }
    let lo = f.lo().clone();
    let hi = f.hi().clone();
    let cone = |p: &Rat, q: &Rat| -> PLFunction {
        let mut pts = Vec::with_capacity(3);
        if p > &lo {
            pts.push((lo.clone(), q - &(lambda * &(p - &lo))));
        }
        pts.push((p.clone(), q.clone()));
        if p < &hi {
            pts.push((hi.clone(), q - &(lambda * &(&hi - p))));
        }
        PLFunction::continuous(&pts).expect("cone nodes are ordered")
    };

    let mut parts: Vec<PLFunction> = Vec::new();
    for piece in f.pieces() {
        let slope = piece.slope();
        if &slope > lambda {
            // Steeply rising piece: dominated by a cone at its top end.
            parts.push(cone(piece.x1, piece.y1));
        } else if slope < -lambda {
            parts.push(cone(piece.x0, piece.y0));
        } else {
            // Tent extension: the piece itself, leaving it at slope
            // +/-lambda on both sides.
            let mut pts = Vec::with_capacity(4);
            if piece.x0 > &lo {
                pts.push((lo.clone(), piece.y0 - &(lambda * &(piece.x0 - &lo))));
            }
            pts.push((piece.x0.clone(), piece.y0.clone()));
            pts.push((piece.x1.clone(), piece.y1.clone()));
            if piece.x1 < &hi {
                pts.push((hi.clone(), piece.y1 - &(lambda * &(&hi - piece.x1))));
            }
            parts.push(PLFunction::continuous(&pts).expect("tent nodes are ordered"));
        }
    }
    for bp in f.breakpoints() {
        if let Some(v) = &bp.value {
            if v > bp.upper_limit() {
                parts.push(cone(&bp.x, v));
            }
        }
    }
    let mut env = parts
        .into_iter()
        .reduce(|a, b| a.join(&b).expect("contributions share the domain"))
        .expect("at least one piece exists");
    let removed = f.removed_points();
    if !removed.is_empty() {
        env = env.puncture(&removed)?;
    }
    Ok(env)
}

/// The greatest `lambda`-Lipschitz minorant `inf_y (g(y) + lambda |x-y|)`,
/// computed by duality with [`upper_lipschitz`].
pub fn lower_lipschitz(g: &PLFunction, lambda: &Rat) -> Result<PLFunction> {
    Ok(upper_lipschitz(&g.neg(), lambda)?.neg())
}

/// A doubling schedule of Lipschitz constants with a hard cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub initial: Rat,
    pub cap: Rat,
}

/// Cap used when no override is given: `2^40`.
pub fn default_lambda_cap() -> Rat {
    Rat::pow2(40)
}

impl Schedule {
    /// The default schedule for the given functions: starts at
    /// `max(1, steepest piece slope)` and doubles, so a continuous input is
    /// already fixed at the first step.
    pub fn for_functions(fs: &[&PLFunction]) -> Schedule {
        let mut initial = Rat::one();
        for f in fs {
            let s = f.max_abs_slope();
            if s > initial {
                initial = s;
            }
        }
        Schedule {
            initial,
            cap: default_lambda_cap(),
        }
    }

    pub fn with_cap(mut self, cap: Rat) -> Schedule {
        self.cap = cap;
        self
    }

    /// The values `initial, 2*initial, 4*initial, ...` up to the cap.
    pub fn iter(&self) -> impl Iterator<Item = Rat> + '_ {
        let two = Rat::int(2);
        let mut next = self.initial.clone();
        std::iter::from_fn(move || {
            if next > self.cap {
                return None;
            }
            let out = next.clone();
            next = &next * &two;
            Some(out)
        })
    }
}

/// Which side of the regularization a family tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Decreasing majorants converging down to the usc envelope.
    Upper,
    /// Increasing minorants converging up to the lsc envelope.
    Lower,
}

/// A lazily enumerated monotone family of Lipschitz regularizations of a
/// base function, following a [`Schedule`].
#[derive(Clone, Debug)]
pub struct LipschitzFamily {
    base: PLFunction,
    direction: Direction,
    schedule: Schedule,
}

impl LipschitzFamily {
    pub fn new(base: PLFunction, direction: Direction, schedule: Schedule) -> Self {
        LipschitzFamily {
            base,
            direction,
            schedule,
        }
    }

    pub fn upper(base: PLFunction) -> Self {
        let schedule = Schedule::for_functions(&[&base]);
        LipschitzFamily::new(base, Direction::Upper, schedule)
    }

    pub fn lower(base: PLFunction) -> Self {
        let schedule = Schedule::for_functions(&[&base]);
        LipschitzFamily::new(base, Direction::Lower, schedule)
    }

    pub fn base(&self) -> &PLFunction {
        &self.base
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    /// The family member at a given Lipschitz constant.
    pub fn at(&self, lambda: &Rat) -> Result<PLFunction> {
        match self.direction {
            Direction::Upper => upper_lipschitz(&self.base, lambda),
            Direction::Lower => lower_lipschitz(&self.base, lambda),
        }
    }
}

/// Sample policy used by [`dilworth_witness`] when the caller has no extra
/// probe points: all breakpoints (skipping removed ones) plus the midpoint
/// of every piece.
pub fn default_sample_points(f: &PLFunction) -> Vec<Rat> {
    let half = Rat::new(1, 2);
    let mut pts: Vec<Rat> = f
        .breakpoints()
        .iter()
        .filter(|bp| bp.value.is_some())
        .map(|bp| bp.x.clone())
        .collect();
    for p in f.pieces() {
        pts.push((p.x0 + p.x1) * &half);
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Certifies, at finitely many sample points, that the decreasing Lipschitz
/// family of an usc function converges to the function: returns the first
/// schedule value `lambda*` with `f^{lambda*}(x) <= f(x) + delta` at every
/// sample.
///
/// For a non-usc input the family converges to the usc envelope instead, and
/// the error reports the breakpoint where the limit exceeds `f` together
/// with the exact jump deficit.
pub fn dilworth_witness(
    f: &PLFunction,
    samples: &[Rat],
    delta: &Rat,
    schedule: &Schedule,
) -> Result<Rat> {
    if let Some(v) = usc_violation(f) {
        return Err(Error::NotUsc {
            breakpoint: v.breakpoint,
            deficit: v.deficit,
        });
    }
    if !delta.is_positive() {
        return Err(Error::Parameter(format!(
            "tolerance must be positive, got {delta}"
        )));
    }
    let targets: Vec<(Rat, Rat)> = samples
        .iter()
        .map(|x| Ok((x.clone(), f.eval(x)? + delta)))
        .collect::<Result<_>>()?;
    for lambda in schedule.iter() {
        let env = upper_lipschitz(f, &lambda)?;
        let mut ok = true;
        for (x, bound) in &targets {
            if &env.eval(x)? > bound {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(lambda);
        }
    }
    Err(Error::ScheduleCap {
        cap: schedule.cap.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Breakpoint;
    use crate::rat;

    /// chi_{[1/2,1]} with value 1 at the jump (usc).
    fn step_usc() -> PLFunction {
        PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(1 / 2), rat!(0), rat!(1), rat!(1)),
            Breakpoint::last(rat!(1), rat!(1), rat!(1)),
        ])
        .unwrap()
    }

    /// Same limits but value 0 at the jump (lsc, not usc).
    fn step_lsc() -> PLFunction {
        PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(1 / 2), rat!(0), rat!(0), rat!(1)),
            Breakpoint::last(rat!(1), rat!(1), rat!(1)),
        ])
        .unwrap()
    }

    /// 0 everywhere except an isolated value 1 at 1/2 (usc spike).
    fn spike() -> PLFunction {
        PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(0), rat!(0)),
            Breakpoint::interior(rat!(1 / 2), rat!(0), rat!(1), rat!(0)),
            Breakpoint::last(rat!(1), rat!(0), rat!(0)),
        ])
        .unwrap()
    }

    /// 1/2 + chi_{(1/4,3/4)} (lsc plateau).
    fn plateau_lsc() -> PLFunction {
        PLFunction::new(vec![
            Breakpoint::first(rat!(0), rat!(1 / 2), rat!(1 / 2)),
            Breakpoint::interior(rat!(1 / 4), rat!(1 / 2), rat!(1 / 2), rat!(3 / 2)),
            Breakpoint::interior(rat!(3 / 4), rat!(3 / 2), rat!(1 / 2), rat!(1 / 2)),
            Breakpoint::last(rat!(1), rat!(1 / 2), rat!(1 / 2)),
        ])
        .unwrap()
    }

    fn tent() -> PLFunction {
        PLFunction::continuous(&[
            (rat!(0), rat!(0)),
            (rat!(1 / 2), rat!(1)),
            (rat!(1), rat!(0)),
        ])
        .unwrap()
    }

    #[test]
    fn usc_lsc_predicates() {
        assert!(is_usc(&step_usc()));
        assert!(!is_lsc(&step_usc()));
        assert!(is_lsc(&step_lsc()));
        let v = usc_violation(&step_lsc()).unwrap();
        assert_eq!(v.breakpoint, rat!(1 / 2));
        assert_eq!(v.deficit, rat!(1));
        let w = lsc_violation(&step_usc()).unwrap();
        assert_eq!(w.breakpoint, rat!(1 / 2));
        assert_eq!(w.deficit, rat!(1));
        assert!(is_usc(&tent()) && is_lsc(&tent()));
        let zero = PLFunction::constant(rat!(0), rat!(1), rat!(0)).unwrap();
        assert!(is_lsc(&zero));
    }

    #[test]
    fn envelopes_repair_point_values() {
        assert_eq!(usc_envelope(&step_lsc()), step_usc());
        assert_eq!(usc_envelope(&step_usc()), step_usc());
        assert_eq!(lsc_envelope(&step_usc()), step_lsc());
        assert_eq!(usc_envelope(&tent()), tent());
        assert!(is_usc(&usc_envelope(&step_lsc())));
    }

    #[test]
    fn envelope_fixpoint_characterizes_semicontinuity() {
        for f in [step_usc(), step_lsc(), spike(), tent()] {
            assert_eq!(usc_envelope(&f) == f, is_usc(&f));
            assert_eq!(lsc_envelope(&f) == f, is_lsc(&f));
        }
    }

    #[test]
    fn upper_lipschitz_of_spike_is_a_tent() {
        let env = upper_lipschitz(&spike(), &rat!(4)).unwrap();
        // max(0, 1 - 4|x - 1/2|)
        for (x, want) in [
            (rat!(0), rat!(0)),
            (rat!(1 / 4), rat!(0)),
            (rat!(3 / 8), rat!(1 / 2)),
            (rat!(1 / 2), rat!(1)),
            (rat!(5 / 8), rat!(1 / 2)),
            (rat!(1), rat!(0)),
        ] {
            assert_eq!(env.eval(&x).unwrap(), want, "at {x}");
        }
        assert!(is_continuous(&env));
    }

    #[test]
    fn upper_lipschitz_brute_force_oracle() {
        // sup_y (f(y) - 4|x-y|) over a fine grid of y, including the spike
        // location; agrees with the closed form at every probe.
        let f = spike();
        let lam = rat!(4);
        let env = upper_lipschitz(&f, &lam).unwrap();
        let n = 200;
        let ys: Vec<Rat> = (0..=n).map(|i| rat!(i as i64, n as i64)).collect();
        for i in 0..=n {
            let x = rat!(i as i64, n as i64);
            let mut best: Option<Rat> = None;
            for y in &ys {
                let cand = f.eval(y).unwrap() - &lam * &(&x - y).abs();
                if best.as_ref().is_none_or(|b| &cand > b) {
                    best = Some(cand);
                }
            }
            assert_eq!(env.eval(&x).unwrap(), best.unwrap(), "probe {x}");
        }
    }

    #[test]
    fn already_lipschitz_functions_are_fixed() {
        let x = PLFunction::line(rat!(0), rat!(1), rat!(0), rat!(1)).unwrap();
        assert_eq!(upper_lipschitz(&x, &rat!(1)).unwrap(), x);
        assert_eq!(lower_lipschitz(&x, &rat!(1)).unwrap(), x);
    }

    #[test]
    fn family_is_monotone_in_lambda() {
        let f = spike();
        let e1 = upper_lipschitz(&f, &rat!(1)).unwrap();
        let e2 = upper_lipschitz(&f, &rat!(2)).unwrap();
        assert!(e2.le(&e1).unwrap().holds());
        let g = plateau_lsc();
        let l1 = lower_lipschitz(&g, &rat!(1)).unwrap();
        let l2 = lower_lipschitz(&g, &rat!(2)).unwrap();
        assert!(l1.le(&l2).unwrap().holds());
    }

    #[test]
    fn lower_lipschitz_of_plateau() {
        // min(3/2, 1/2 + 4 dist(x, complement of (1/4,3/4)))
        let g = plateau_lsc();
        let env = lower_lipschitz(&g, &rat!(4)).unwrap();
        for (x, want) in [
            (rat!(0), rat!(1 / 2)),
            (rat!(1 / 4), rat!(1 / 2)),
            (rat!(3 / 8), rat!(1)),
            (rat!(1 / 2), rat!(3 / 2)),
            (rat!(3 / 4), rat!(1 / 2)),
            (rat!(1), rat!(1 / 2)),
        ] {
            assert_eq!(env.eval(&x).unwrap(), want, "at {x}");
        }
        assert!(env.le(&g).unwrap().holds());
        assert!(is_continuous(&env));
    }

    #[test]
    fn envelope_slopes_are_bounded_by_lambda() {
        for lam in [rat!(1), rat!(2), rat!(8)] {
            for f in [spike(), step_usc(), step_lsc(), plateau_lsc()] {
                let env = upper_lipschitz(&f, &lam).unwrap();
                assert!(env.max_abs_slope() <= lam);
                assert!(f.le(&env).unwrap().holds());
            }
        }
    }

    #[test]
    fn duality_of_upper_and_lower() {
        let g = plateau_lsc();
        let lam = rat!(3);
        let a = upper_lipschitz(&g.neg(), &lam).unwrap();
        let b = lower_lipschitz(&g, &lam).unwrap().neg();
        assert_eq!(a, b);
    }

    #[test]
    fn dilworth_witness_examples() {
        let f = spike();
        let sched = Schedule::for_functions(&[&f]);
        // Exact at the peak for every lambda.
        let lam = dilworth_witness(&f, &[rat!(1 / 2)], &rat!(1 / 16), &sched).unwrap();
        assert_eq!(lam, rat!(1));
        // At 5/8 the envelope is max(0, 1 - lambda/8): need 1 - lambda/8 <= 1/16.
        let lam = dilworth_witness(&f, &[rat!(5 / 8)], &rat!(1 / 16), &sched).unwrap();
        assert_eq!(lam, rat!(8));
        // Continuous input terminates at the schedule start.
        let t = tent();
        let sched_t = Schedule::for_functions(&[&t]);
        assert_eq!(sched_t.initial, rat!(2));
        let lam =
            dilworth_witness(&t, &default_sample_points(&t), &rat!(1 / 16), &sched_t).unwrap();
        assert_eq!(lam, rat!(2));
    }

    #[test]
    fn dilworth_witness_rejects_non_usc_with_exact_deficit() {
        let f = step_lsc();
        let sched = Schedule::for_functions(&[&f]);
        let err = dilworth_witness(&f, &[rat!(1 / 2)], &rat!(1 / 16), &sched).unwrap_err();
        match err {
            Error::NotUsc {
                breakpoint,
                deficit,
            } => {
                assert_eq!(breakpoint, rat!(1 / 2));
                let env = usc_envelope(&f);
                let expect = env.eval(&rat!(1 / 2)).unwrap() - f.eval(&rat!(1 / 2)).unwrap();
                assert_eq!(deficit, expect);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn schedule_iteration_respects_cap() {
        let s = Schedule {
            initial: rat!(1),
            cap: rat!(8),
        };
        let vals: Vec<Rat> = s.iter().collect();
        assert_eq!(vals, vec![rat!(1), rat!(2), rat!(4), rat!(8)]);
    }

    #[test]
    fn envelope_preserves_removed_points() {
        let f = step_usc().puncture(&[rat!(1 / 4)]).unwrap();
        let env = upper_lipschitz(&f, &rat!(4)).unwrap();
        assert_eq!(env.removed_points(), vec![rat!(1 / 4)]);
    }
}
