//! Extension operators and their failure modes: extending semicontinuous
//! functions from a dense subspace to a compactification preserves
//! semicontinuity and restriction, but not always order. The level-set
//! closures expose exactly where order breaks.
//!
//! Run with `cargo run --example extend_and_obstruct`.

use sandwich::extension::{DenseIntervalModel, OnePointModel};
use sandwich::funcspace::{Breakpoint, PLFunction, Rat, SeqFunction};

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);

    // Interval model: [0,1] with the point 1/2 removed.
    let model = DenseIntervalModel::new(rat(0, 1), rat(1, 1), vec![rat(1, 2)])?;
    let step = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::removed(rat(1, 2), rat(0, 1), rat(1, 1)),
        Breakpoint::last(rat(1, 1), rat(1, 1), rat(1, 1)),
    ])?;
    let upper = model.extend_upper(&step)?;
    let lower = model.extend_lower(&step)?;
    println!("step on the punctured interval: {step}");
    println!(
        "  upper extension fills 1/2 with {}",
        upper.eval(&rat(1, 2))?
    );
    println!(
        "  lower extension fills 1/2 with {}",
        lower.eval(&rat(1, 2))?
    );

    // Extensions are not unique: the zero function also extends by the
    // indicator of the removed set.
    let zero = PLFunction::constant(rat(0, 1), rat(1, 1), rat(0, 1))?.puncture(&[rat(1, 2)])?;
    let (canonical, bumped) = model.nonunique_usc_extensions(&zero)?;
    println!("two usc extensions of zero: {canonical} and {bumped}");

    // Level-set closures meet at the removed point: this is the
    // obstruction that stops order-preserving extension.
    let sup = model.superlevel_closure(&step, &rat(3, 4))?;
    let sub = model.sublevel_closure(&step, &rat(1, 4))?;
    println!("closure of {{f >= 3/4}} = {sup}");
    println!("closure of {{f <= 1/4}} = {sub}");
    match model.check_obstruction(&step, &step, &rat(3, 4), &rat(1, 4))? {
        Some(obs) => println!(
            "obstruction at {} for levels ({}, {})",
            obs.point, obs.eta, obs.lambda
        ),
        None => println!("no obstruction (unexpected)"),
    }

    // One-point compactification of the naturals: the indicator of the
    // evens is the canonical counterexample. Its upper extension takes 1
    // at infinity, its lower extension 0.
    let one_point = OnePointModel;
    let evens = SeqFunction::evens_indicator();
    let upper = one_point.extend_upper(&evens)?;
    let lower = one_point.extend_lower(&evens)?;
    println!(
        "evens indicator: U(f)(infinity) = {}, L(f)(infinity) = {}",
        upper.infinity().unwrap(),
        lower.infinity().unwrap()
    );
    match one_point.check_obstruction(&evens, &evens, &rat(3, 4), &rat(1, 4))? {
        Some(obs) => println!("obstruction at {}", obs.point),
        None => println!("no obstruction (unexpected)"),
    }

    Ok(())
}
