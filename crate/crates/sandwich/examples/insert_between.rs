//! Gap insertion: given usc `f`, lsc `g`, and an exact gap `f + eps <= g`,
//! produce a continuous function between them by walking the doubling
//! Lipschitz schedule until the majorant family of `f` drops below the
//! minorant family of `g`.
//!
//! Run with `cargo run --example insert_between`.

use sandwich::funcspace::{Breakpoint, PLFunction, Rat};
use sandwich::insertion::insert_gap;
use sandwich::semicont::default_lambda_cap;

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);

    // The unit spike at 1/2 under a lifted open plateau: the gap is 1/2.
    let spike = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(0, 1), rat(0, 1)),
        Breakpoint::interior(rat(1, 2), rat(0, 1), rat(1, 1), rat(0, 1)),
        Breakpoint::last(rat(1, 1), rat(0, 1), rat(0, 1)),
    ])?;
    let plateau = PLFunction::new(vec![
        Breakpoint::first(rat(0, 1), rat(1, 2), rat(1, 2)),
        Breakpoint::interior(rat(1, 4), rat(1, 2), rat(1, 2), rat(3, 2)),
        Breakpoint::interior(rat(3, 4), rat(3, 2), rat(1, 2), rat(1, 2)),
        Breakpoint::last(rat(1, 1), rat(1, 2), rat(1, 2)),
    ])?;

    let result = insert_gap(&spike, &plateau, &rat(1, 2), &default_lambda_cap())?;
    println!("separating Lipschitz constant: {}", result.lambda);
    println!("inserted continuous function:  {}", result.inserted);
    println!(
        "sandwich holds exactly: f <= a: {}, a <= g: {}",
        spike.le(&result.inserted)?.holds(),
        result.inserted.le(&plateau)?.holds()
    );

    // lambda = 1 is not enough: the majorant still pokes above the
    // minorant at the spike.
    use sandwich::semicont::{lower_lipschitz, upper_lipschitz};
    let too_flat = upper_lipschitz(&spike, &rat(1, 1))?;
    let ceiling = lower_lipschitz(&plateau, &rat(1, 1))?;
    println!(
        "at lambda = 1: f^1(1/2) = {} > {} = g_1(1/2)",
        too_flat.eval(&rat(1, 2))?,
        ceiling.eval(&rat(1, 2))?
    );

    // Violated premises are rejected with a witness.
    match insert_gap(&spike, &plateau, &rat(1, 1), &default_lambda_cap()) {
        Err(e) => println!("gap 1 correctly rejected: {e}"),
        Ok(_) => println!("unexpected insertion"),
    }

    Ok(())
}
