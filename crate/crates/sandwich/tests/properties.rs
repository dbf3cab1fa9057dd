//! Cross-module properties on randomized instances: facts that tie the
//! extension order check to the obstruction scan, envelope convergence to
//! the schedule, and chain extraction to its one-pair specialization.

mod common;

use common::*;
use sandwich::compactc::extract_finite;
use sandwich::extension::{DenseIntervalModel, PipelineOutcome};
use sandwich::funcspace::{PLFunction, Rat};
use sandwich::insertion::kt_compact;
use sandwich::semicont::{
    default_lambda_cap, lower_lipschitz, upper_lipschitz, usc_envelope, Schedule,
};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// All stored values of a function (point values and limits).
fn stored_values(f: &PLFunction) -> Vec<Rat> {
    let mut vals = Vec::new();
    for bp in f.breakpoints() {
        for v in [&bp.value, &bp.left, &bp.right].into_iter().flatten() {
            vals.push(v.clone());
        }
    }
    vals
}

/// Candidate straddling levels: midpoints between consecutive distinct
/// values in the merged value set of `f` and `g`.
fn candidate_levels(f: &PLFunction, g: &PLFunction) -> Vec<Rat> {
    let mut vals = stored_values(f);
    vals.extend(stored_values(g));
    vals.sort();
    vals.dedup();
    let half = rat(1, 2);
    vals.windows(2).map(|w| (&w[0] + &w[1]) * &half).collect()
}

/// When every straddling level pair is clear of obstructions, the extended
/// order holds and the pipeline must succeed.
#[test]
fn clear_obstruction_scan_implies_extended_order() {
    let mut rng = rng(0xD1);
    let removed = rat(1, 2);
    let model = DenseIntervalModel::new(rat(0, 1), rat(1, 1), vec![removed.clone()]).unwrap();
    let cap = default_lambda_cap();
    let tol = Rat::pow2(-4);
    let mut scanned_clear = 0;
    for i in 0..40 {
        let mut grid = unit_grid(&mut rng, 2);
        grid.push(removed.clone());
        grid.sort();
        grid.dedup();
        let core = continuous_on(&mut rng, &grid);
        let down = nonneg_lsc_on(&mut rng, &grid);
        let up = nonneg_lsc_on(&mut rng, &grid);
        let f = core
            .sub(&down)
            .unwrap()
            .puncture(std::slice::from_ref(&removed))
            .unwrap();
        let g = core
            .add(&up)
            .unwrap()
            .puncture(std::slice::from_ref(&removed))
            .unwrap();

        let levels = candidate_levels(&f, &g);
        let mut all_clear = true;
        for (j, lam) in levels.iter().enumerate() {
            for eta in levels.iter().skip(j + 1) {
                if model.check_obstruction(&f, &g, eta, lam).unwrap().is_some() {
                    all_clear = false;
                }
            }
        }
        if !all_clear {
            continue;
        }
        scanned_clear += 1;
        let upper_ext = model.extend_upper(&f).unwrap();
        let lower_ext = model.extend_lower(&g).unwrap();
        assert!(
            upper_ext.le(&lower_ext).unwrap().holds(),
            "instance {i}: scan clear but extensions out of order"
        );
        match model.kt_pipeline(&f, &g, &tol, &cap).unwrap() {
            PipelineOutcome::Inserted { .. } => {}
            PipelineOutcome::Obstructed(o) => {
                panic!(
                    "instance {i}: pipeline obstructed at {:?} despite a clear scan",
                    o.point
                )
            }
        }
    }
    assert!(scanned_clear >= 30, "only {scanned_clear} clear instances");
}

/// For usc inputs the decreasing envelope family reaches the point value
/// at every breakpoint after finitely many schedule steps.
#[test]
fn envelope_reaches_breakpoint_values_at_finite_index() {
    let mut rng = rng(0xD2);
    for _ in 0..40 {
        let grid = unit_grid(&mut rng, 3);
        let f = usc_on(&mut rng, &grid);
        let schedule = Schedule::for_functions(&[&f]);
        let mut reached = false;
        let mut previous: Option<Vec<Rat>> = None;
        for lambda in schedule.iter().take(30) {
            let env = upper_lipschitz(&f, &lambda).unwrap();
            let at_nodes: Vec<Rat> = f
                .breakpoints()
                .iter()
                .map(|bp| env.eval(&bp.x).unwrap())
                .collect();
            // Monotone decrease along the schedule.
            if let Some(prev) = &previous {
                for (now, before) in at_nodes.iter().zip(prev) {
                    assert!(now <= before);
                }
            }
            let exact = f
                .breakpoints()
                .iter()
                .zip(&at_nodes)
                .all(|(bp, got)| bp.value.as_ref().unwrap() == got);
            previous = Some(at_nodes);
            if exact {
                reached = true;
                break;
            }
        }
        assert!(reached, "envelope never reached the usc values");
    }
}

/// For non-usc inputs the family converges to the usc envelope, not the
/// function: the defect at the violating breakpoint is exactly the jump
/// deficit.
#[test]
fn envelope_limit_of_non_usc_input_is_the_usc_envelope() {
    let mut rng = rng(0xD3);
    for _ in 0..25 {
        let (f, at, deficit) = non_usc_on(&mut rng);
        let repaired = usc_envelope(&f);
        let schedule = Schedule::for_functions(&[&f]);
        let mut last = None;
        for lambda in schedule.iter().take(30) {
            let env = upper_lipschitz(&f, &lambda).unwrap();
            let v = env.eval(&at).unwrap();
            last = Some(v.clone());
            if v == repaired.eval(&at).unwrap() {
                break;
            }
        }
        let limit = last.unwrap();
        assert_eq!(limit, repaired.eval(&at).unwrap());
        assert_eq!(&limit - &f.eval(&at).unwrap(), deficit);
    }
}

/// Monotone chains collapse to a single pair: the deepest selected indices
/// already satisfy the extracted inequality.
#[test]
fn chain_extraction_collapses_to_the_deepest_pair() {
    let mut rng = rng(0xD4);
    let mut exercised = 0;
    for _ in 0..40 {
        let grid = unit_grid(&mut rng, 2);
        let eps = rat(1, 8);
        let (f, g) = pair_with_gap(&mut rng, &grid, &eps);
        let lambdas: Vec<Rat> = Schedule::for_functions(&[&f, &g]).iter().take(4).collect();
        let s: Vec<PLFunction> = lambdas
            .iter()
            .map(|l| upper_lipschitz(&f, l).unwrap())
            .collect();
        let t: Vec<PLFunction> = lambdas
            .iter()
            .map(|l| lower_lipschitz(&g, l).unwrap())
            .collect();
        // The chain premise may need deeper members than we materialized;
        // only verified premises are extractable.
        let Ok(result) = extract_finite(&s, &t, &eps) else {
            continue;
        };
        exercised += 1;
        let smax = *result.s_indices.iter().max().unwrap();
        let tmax = *result.t_indices.iter().max().unwrap();
        assert!(
            s[smax].le(&t[tmax]).unwrap().holds(),
            "deepest selected pair must already be ordered"
        );
    }
    assert!(exercised >= 10, "only {exercised} chains were extractable");
}

/// Deterministic dyadic rate across run depths: an 8-step run agrees with
/// a 4-step run to within the tail bound 2^-3.
#[test]
fn deeper_runs_share_the_dyadic_tail_bound() {
    let mut rng = rng(0xD5);
    let cap = default_lambda_cap();
    for _ in 0..15 {
        let grid = unit_grid(&mut rng, 2);
        let (f, g) = pair_with_gap(&mut rng, &grid, &rat(1, 8));
        let (h4, c4) = kt_compact(&f, &g, &Rat::pow2(-4), &cap).unwrap();
        let (h8, c8) = kt_compact(&f, &g, &Rat::pow2(-8), &cap).unwrap();
        // Same deterministic prefix.
        for (a, b) in c4.steps.iter().zip(&c8.steps) {
            assert_eq!(a.approximant, b.approximant);
        }
        assert!(h8.sub(&h4).unwrap().sup_norm() <= Rat::pow2(-3));
    }
}
