//! The end-to-end pipeline on a punctured interval: extend the bounds to
//! the full interval, check the extended order, insert, restrict back.
//! When the order fails, the result is an obstruction instead.
//!
//! Run with `cargo run --example sandwich_pipeline`.

use sandwich::extension::{DenseIntervalModel, PipelineOutcome};
use sandwich::funcspace::{Breakpoint, PLFunction, Rat};
use sandwich::semicont::default_lambda_cap;

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);
    let model = DenseIntervalModel::new(rat(0, 1), rat(1, 1), vec![rat(1, 2)])?;
    let tol = Rat::pow2(-10);
    let cap = default_lambda_cap();

    let step = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::removed(rat(1, 2), rat(0, 1), rat(1, 1)),
        Breakpoint::last(rat(1, 1), rat(1, 1), rat(1, 1)),
    ])?;
    let zero = PLFunction::constant(rat(0, 1), rat(1, 1), rat(0, 1))?.puncture(&[rat(1, 2)])?;

    // Zero below the step: the lower extension of the step fills the hole
    // with 0, the order survives, and insertion goes through.
    println!("case 1: f = 0, g = step");
    match model.kt_pipeline(&zero, &step, &tol, &cap)? {
        PipelineOutcome::Inserted {
            restricted,
            certificate,
            ..
        } => {
            println!("  inserted h = {restricted}");
            println!(
                "  sandwich: f - tol <= h: {}, h <= g: {}",
                zero.add_const(&-tol.clone()).le(&restricted)?.holds(),
                restricted.le(&step)?.holds()
            );
            certificate.verify()?;
            println!("  certificate verified ({} steps)", certificate.steps.len());
        }
        PipelineOutcome::Obstructed(obs) => println!("  unexpected obstruction at {}", obs.point),
    }

    // The step below itself: the upper extension fills with 1, the lower
    // with 0, and the extended order fails exactly at the removed point.
    println!("case 2: f = g = step");
    match model.kt_pipeline(&step, &step, &tol, &cap)? {
        PipelineOutcome::Inserted { .. } => println!("  unexpected insertion"),
        PipelineOutcome::Obstructed(obs) => {
            println!(
                "  obstruction at {} with straddling levels eta = {}, lambda = {}",
                obs.point, obs.eta, obs.lambda
            );
            let sup = model.superlevel_closure(&step, &obs.eta)?;
            let sub = model.sublevel_closure(&step, &obs.lambda)?;
            println!("  re-checked: {} lies in {sup} and in {sub}", obs.point);
        }
    }

    Ok(())
}
