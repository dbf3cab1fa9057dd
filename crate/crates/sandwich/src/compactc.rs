//! Finite-subfamily extraction from families of continuous functions.
//!
//! The premise checked here: finite families `S`, `T` of continuous
//! piecewise-linear functions on a common compact interval with
//! `meet(S) + epsilon <= join(T)` exactly. From such a premise a finite
//! selection `S0`, `T0` with `meet(S0) <= join(T0)` is extracted by an open
//! cover sweep: at the current frontier point some pair `(s, t)` satisfies
//! `s < t` on a neighborhood, the pair whose neighborhood reaches furthest
//! right is recorded, and the frontier advances to its right end. The
//! epsilon in the premise cannot be dropped; see the constant-family tests.
//!
//! Monotone chains (a decreasing family of majorants against an increasing
//! family of minorants) admit a one-pair specialization,
//! [`extract_chain_pair`], which is the workhorse behind gap insertion.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{LeOutcome, PLFunction, Rat};
use crate::semicont::{is_continuous, LipschitzFamily};

/// One sweep step: on the recorded open interval the selected pair satisfies
/// `s < t` pointwise (closed at a domain endpoint the interval reaches).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub s_index: usize,
    pub t_index: usize,
    pub interval: (Rat, Rat),
}

/// The extracted finite subfamilies together with the cover that witnesses
/// them. `meet(S0) <= join(T0)` is verified exactly before this is returned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub s_indices: BTreeSet<usize>,
    pub t_indices: BTreeSet<usize>,
    pub cover: Vec<CoverRecord>,
}

fn check_family(name: &str, fs: &[PLFunction]) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::Parameter(format!("family {name} must be nonempty")));
    }
    for (i, f) in fs.iter().enumerate() {
        if !f.is_total() || !is_continuous(f) {
            return Err(Error::Parameter(format!(
                "family {name} member {i} is not continuous"
            )));
        }
    }
    Ok(())
}

/// Exact meet of a nonempty family.
pub fn meet_all(fs: &[PLFunction]) -> Result<PLFunction> {
    fs.iter()
        .skip(1)
        .try_fold(fs[0].clone(), |acc, f| acc.meet(f))
}

/// Exact join of a nonempty family.
pub fn join_all(fs: &[PLFunction]) -> Result<PLFunction> {
    fs.iter()
        .skip(1)
        .try_fold(fs[0].clone(), |acc, f| acc.join(f))
}

/// Decides `meet(S) + epsilon <= join(T)` exactly; on failure the outcome
/// carries a witness point.
pub fn verify_premise(s: &[PLFunction], t: &[PLFunction], epsilon: &Rat) -> Result<LeOutcome> {
    if !epsilon.is_positive() {
        return Err(Error::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    check_family("S", s)?;
    check_family("T", t)?;
    let lhs = meet_all(s)?.add_const(epsilon);
    let rhs = join_all(t)?;
    lhs.le(&rhs)
}

/// Connected component of `{d > 0}` containing `x`, for continuous `d` with
/// `d(x) > 0`. `closed_right` is set when the component runs into the right
/// domain endpoint with `d` still positive there.
struct Component {
    left: Rat,
    right: Rat,
    closed_right: bool,
}

fn positive_component(d: &PLFunction, x: &Rat) -> Component {
    let grid: Vec<(Rat, Rat)> = d
        .breakpoints()
        .iter()
        .map(|bp| (bp.x.clone(), bp.value.clone().expect("d is total")))
        .collect();
    let val_at_x = d.eval(x).expect("frontier in domain");
    debug_assert!(val_at_x.is_positive());

    // Walk right from x until d hits zero or the domain ends.
    let mut right = d.hi().clone();
    let mut closed_right = true;
    let mut cur_x = x.clone();
    let mut cur_y = val_at_x.clone();
    for (bx, by) in grid.iter() {
        if bx <= &cur_x {
            continue;
        }
        if by.is_positive() {
            cur_x = bx.clone();
            cur_y = by.clone();
            continue;
        }
        // Zero crossing inside (cur_x, bx]: affine from cur_y > 0 to by <= 0.
        let t = &cur_y / &(&cur_y - by);
        right = &cur_x + &(t * (bx - &cur_x));
        closed_right = false;
        break;
    }

    // Walk left symmetrically.
    let mut left = d.lo().clone();
    cur_x = x.clone();
    cur_y = val_at_x;
    for (bx, by) in grid.iter().rev() {
        if bx >= &cur_x {
            continue;
        }
        if by.is_positive() {
            cur_x = bx.clone();
            cur_y = by.clone();
            continue;
        }
        let t = &cur_y / &(&cur_y - by);
        left = &cur_x - &(t * (&cur_x - bx));
        break;
    }

    Component {
        left,
        right,
        closed_right,
    }
}

/// Extracts finite `S0`, `T0` with `meet(S0) <= join(T0)` from a verified
/// premise, sweeping the domain left to right. Ties between pairs whose
/// components reach equally far are broken toward the lexicographically
/// smallest `(s_index, t_index)`.
pub fn extract_finite(
    s: &[PLFunction],
    t: &[PLFunction],
    epsilon: &Rat,
) -> Result<ExtractionResult> {
    match verify_premise(s, t, epsilon)? {
        LeOutcome::Holds => {}
        LeOutcome::Fails { witness } => {
            return Err(Error::Precondition {
                reason: "premise meet(S) + epsilon <= join(T) does not hold".into(),
                witness: Some(witness),
            });
        }
    }

    let hi = s[0].hi().clone();
    let mut frontier = s[0].lo().clone();
    let mut cover: Vec<CoverRecord> = Vec::new();
    let mut s_indices = BTreeSet::new();
    let mut t_indices = BTreeSet::new();

    // Each step either strictly advances the frontier through the finite
    // crossing structure or finishes at the right endpoint.
    let step_limit = 4 + s.iter().map(|f| f.breakpoints().len()).sum::<usize>()
        * t.iter().map(|f| f.breakpoints().len()).sum::<usize>()
        * 4;
    for _ in 0..step_limit {
        let mut best: Option<(Component, usize, usize)> = None;
        for (si, sf) in s.iter().enumerate() {
            for (ti, tf) in t.iter().enumerate() {
                if sf.eval(&frontier)? < tf.eval(&frontier)? {
                    let d = tf.sub(sf)?;
                    let comp = positive_component(&d, &frontier);
                    let better = match &best {
                        None => true,
                        Some((b, _, _)) => comp.right > b.right,
                    };
                    if better {
                        best = Some((comp, si, ti));
                    }
                }
            }
        }
        let Some((comp, si, ti)) = best else {
            return Err(Error::Internal(
                "no admissible pair at the frontier despite a verified premise".into(),
            ));
        };
        s_indices.insert(si);
        t_indices.insert(ti);
        cover.push(CoverRecord {
            s_index: si,
            t_index: ti,
            interval: (comp.left.clone(), comp.right.clone()),
        });
        if comp.right == hi && comp.closed_right {
            // Strict cover of the right endpoint: done.
            let result = ExtractionResult {
                s_indices,
                t_indices,
                cover,
            };
            verify_extraction(s, t, &result)?;
            return Ok(result);
        }
        frontier = comp.right;
    }
    Err(Error::Internal("cover sweep failed to terminate".into()))
}

/// Re-verifies `meet(S0) <= join(T0)` for an extraction result.
pub fn verify_extraction(
    s: &[PLFunction],
    t: &[PLFunction],
    result: &ExtractionResult,
) -> Result<()> {
    let s0: Vec<PLFunction> = result
        .s_indices
        .iter()
        .map(|&i| s.get(i).cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Certificate("S index out of range".into()))?;
    let t0: Vec<PLFunction> = result
        .t_indices
        .iter()
        .map(|&i| t.get(i).cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Certificate("T index out of range".into()))?;
    if s0.is_empty() || t0.is_empty() {
        return Err(Error::Certificate("extracted subfamilies are empty".into()));
    }
    match meet_all(&s0)?.le(&join_all(&t0)?)? {
        LeOutcome::Holds => Ok(()),
        LeOutcome::Fails { witness } => Err(Error::Certificate(format!(
            "meet(S0) <= join(T0) fails at {witness}"
        ))),
    }
}

/// A self-contained, re-verifiable record of one extraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionCertificate {
    pub s: Vec<PLFunction>,
    pub t: Vec<PLFunction>,
    pub epsilon: Rat,
    pub result: ExtractionResult,
}

impl ExtractionCertificate {
    /// Checks the premise, the extracted inequality, and that the recorded
    /// cover tiles the domain with overlapping intervals.
    pub fn verify(&self) -> Result<()> {
        match verify_premise(&self.s, &self.t, &self.epsilon)? {
            LeOutcome::Holds => {}
            LeOutcome::Fails { witness } => {
                return Err(Error::Certificate(format!("premise fails at {witness}")))
            }
        }
        verify_extraction(&self.s, &self.t, &self.result)?;
        let cover = &self.result.cover;
        if cover.is_empty() {
            return Err(Error::Certificate("empty cover".into()));
        }
        let lo = self.s[0].lo();
        let hi = self.s[0].hi();
        if &cover[0].interval.0 != lo {
            return Err(Error::Certificate(
                "cover does not start at the domain".into(),
            ));
        }
        if &cover.last().unwrap().interval.1 != hi {
            return Err(Error::Certificate(
                "cover does not reach the domain end".into(),
            ));
        }
        for w in cover.windows(2) {
            if w[1].interval.0 >= w[0].interval.1 {
                return Err(Error::Certificate(format!(
                    "cover gap between {} and {}",
                    w[0].interval.1, w[1].interval.0
                )));
            }
        }
        for rec in cover {
            let sf = &self.s[rec.s_index];
            let tf = &self.t[rec.t_index];
            let d = tf.sub(sf)?;
            if !strictly_positive_inside(&d, &rec.interval.0, &rec.interval.1)? {
                return Err(Error::Certificate(format!(
                    "pair ({}, {}) is not separated on ({}, {})",
                    rec.s_index, rec.t_index, rec.interval.0, rec.interval.1
                )));
            }
        }
        Ok(())
    }
}

/// `d > 0` on the open interval `(a, b)`: endpoint values may be zero, every
/// breakpoint value strictly inside must be positive.
fn strictly_positive_inside(d: &PLFunction, a: &Rat, b: &Rat) -> Result<bool> {
    if d.eval(a)?.is_negative() || d.eval(b)?.is_negative() {
        return Ok(false);
    }
    for bp in d.breakpoints() {
        if &bp.x > a && &bp.x < b && !d.eval(&bp.x)?.is_positive() {
            return Ok(false);
        }
    }
    // Each piece is affine between consecutive checked points; with
    // nonnegative ends and positive interior nodes it stays positive inside.
    let half = Rat::new(1, 2);
    let mid = (a + b) * half;
    Ok(d.eval(&mid)?.is_positive() || (a == b))
}

/// One step of the monotone-chain specialization: the chain index, the
/// Lipschitz constants used, and the separated pair itself.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub index: usize,
    pub lambda_upper: Rat,
    pub lambda_lower: Rat,
    pub upper: PLFunction,
    pub lower: PLFunction,
}

/// Walks a decreasing chain of majorants against an increasing chain of
/// minorants in lockstep and returns the first index where the single pair
/// already satisfies `upper <= lower`. For chains this one pair plays the
/// role of the full extraction.
pub fn extract_chain_pair(upper: &LipschitzFamily, lower: &LipschitzFamily) -> Result<ChainStep> {
    use crate::semicont::Direction;
    if upper.direction() != Direction::Upper || lower.direction() != Direction::Lower {
        return Err(Error::Parameter(
            "chain extraction needs an upper family and a lower family".into(),
        ));
    }
    for (index, (lu, ll)) in upper
        .schedule()
        .iter()
        .zip(lower.schedule().iter())
        .enumerate()
    {
        let u = upper.at(&lu)?;
        let l = lower.at(&ll)?;
        if u.le(&l)?.holds() {
            return Ok(ChainStep {
                index,
                lambda_upper: lu,
                lambda_lower: ll,
                upper: u,
                lower: l,
            });
        }
    }
    Err(Error::ScheduleCap {
        cap: upper.schedule().cap.clone(),
    })
}
