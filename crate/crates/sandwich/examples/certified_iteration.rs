//! The certified dyadic iteration: squeeze a continuous function between an
//! usc floor and an lsc ceiling that may touch, and keep a re-verifiable
//! record of every step.
//!
//! Run with `cargo run --example certified_iteration`.

use sandwich::funcspace::{Breakpoint, PLFunction, Rat};
use sandwich::insertion::kt_compact;
use sandwich::semicont::{default_lambda_cap, is_continuous};

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);

    // f jumps up at 1/2 (value on the high side), g opens at 1/4; they
    // touch at 1/2, so no positive gap exists and plain gap insertion
    // cannot apply. The dyadic shifts of the iteration create the room.
    let f = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::interior(rat(1, 2), rat(0, 1), rat(1, 1), rat(1, 1)),
        Breakpoint::last(rat(1, 1), rat(1, 1), rat(1, 1)),
    ])?;
    let g = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::interior(rat(1, 4), rat(0, 1), rat(0, 1), rat(1, 1)),
        Breakpoint::last(rat(1, 1), rat(1, 1), rat(1, 1)),
    ])?;
    println!("f <= g holds: {}", f.le(&g)?.holds());

    let tol = Rat::pow2(-8);
    let (h, certificate) = kt_compact(&f, &g, &tol, &default_lambda_cap())?;
    println!(
        "{} steps down to tolerance {}",
        certificate.steps.len(),
        certificate.final_tol
    );
    for step in &certificate.steps {
        println!(
            "  step {:>2}: {} breakpoints, checks lower={} upper={} cauchy={}",
            step.n,
            step.approximant.breakpoints().len(),
            step.lower_ok,
            step.upper_ok,
            step.cauchy_ok
        );
    }
    println!("final iterate continuous: {}", is_continuous(&h));
    println!(
        "exact sandwich: f - tol <= h: {}, h <= g: {}",
        f.add_const(&-tol).le(&h)?.holds(),
        h.le(&g)?.holds()
    );

    // The certificate re-verifies from its stored functions alone, and
    // tampering is caught.
    certificate.verify()?;
    println!("independent re-verification: ok");
    let mut bad = certificate.clone();
    bad.steps[3].approximant = bad.steps[3].approximant.add_const(&rat(1, 1));
    match bad.verify() {
        Err(e) => println!("tampered copy rejected: {e}"),
        Ok(()) => println!("tampered copy accepted (bug!)"),
    }

    Ok(())
}
