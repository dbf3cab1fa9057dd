//! Semicontinuity checks, usc/lsc envelopes, and the Lipschitz
//! regularization family whose infimum recovers an usc function pointwise.
//!
//! Run with `cargo run --example envelopes`.

use sandwich::funcspace::{Breakpoint, PLFunction, Rat};
use sandwich::semicont::{
    default_sample_points, dilworth_witness, is_lsc, is_usc, lower_lipschitz, lsc_envelope,
    upper_lipschitz, usc_envelope, Schedule,
};

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);

    // An isolated unit spike at 1/2: usc, as far from continuous as a
    // single point gets.
    let spike = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::interior(rat(1, 2), rat(0, 1), rat(1, 1), rat(0, 1)),
        Breakpoint::last(rat(1, 1), rat(0, 1), rat(0, 1)),
    ])?;
    println!("spike: usc = {}, lsc = {}", is_usc(&spike), is_lsc(&spike));

    // A step written with its value on the low side is lsc but not usc;
    // the usc envelope repairs exactly the point value.
    let low_step = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::interior(rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 1)),
        Breakpoint::last(rat(1, 1), rat(1, 1), rat(1, 1)),
    ])?;
    println!("low step:  usc = {}", is_usc(&low_step));
    println!("  usc envelope = {}", usc_envelope(&low_step));
    println!("  lsc envelope = {}", lsc_envelope(&low_step));

    // The decreasing family of Lipschitz majorants of the spike: each
    // member is continuous, and they pinch down onto the spike.
    for lambda in [rat(1, 1), rat(2, 1), rat(4, 1)] {
        let env = upper_lipschitz(&spike, &lambda)?;
        println!(
            "upper envelope lambda={lambda}: value at 5/8 = {}, slope bound = {}",
            env.eval(&rat(5, 8))?,
            env.max_abs_slope()
        );
    }

    // The dual increasing family for an lsc plateau.
    let plateau = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(1, 2), rat(1, 2)),
        Breakpoint::interior(rat(1, 4), rat(1, 2), rat(1, 2), rat(3, 2)),
        Breakpoint::interior(rat(3, 4), rat(3, 2), rat(1, 2), rat(1, 2)),
        Breakpoint::last(rat(1, 1), rat(1, 2), rat(1, 2)),
    ])?;
    let minorant = lower_lipschitz(&plateau, &rat(4, 1))?;
    println!("lower envelope of the plateau at lambda=4: {minorant}");

    // How deep must the schedule go before the majorant is within 1/16 of
    // the spike at every sample point?
    let samples = default_sample_points(&spike);
    let schedule = Schedule::for_functions(&[&spike]);
    let lambda_star = dilworth_witness(&spike, &samples, &rat(1, 16), &schedule)?;
    println!(
        "meet witness: f^lambda <= f + 1/16 at all {} samples from lambda* = {lambda_star}",
        samples.len()
    );

    Ok(())
}
