//! Tour of the exact function types: piecewise-linear functions with jumps,
//! lattice operations, affine combinations, and the uniform norm.
//!
//! Run with `cargo run --example lattice_basics`.

use sandwich::funcspace::{Breakpoint, FiniteFunction, PLFunction, Rat};

fn main() -> sandwich::Result<()> {
    let lo = Rat::int(0);
    let hi = Rat::int(1);

    // The identity and its reflection.
    let x = PLFunction::line(lo.clone(), hi.clone(), Rat::int(0), Rat::int(1))?;
    let mirrored = PLFunction::line(lo.clone(), hi.clone(), Rat::int(1), Rat::int(0))?;

    let vee = x.join(&mirrored)?;
    println!("join(x, 1-x)          = {vee}");
    println!("  value at 1/2        = {}", vee.eval(&Rat::new(1, 2))?);

    // A step function carrying its jump value on the high side.
    let step = PLFunction::new(vec![
        Breakpoint::first(lo.clone(), Rat::int(0), Rat::int(0)),
        Breakpoint::interior(Rat::new(1, 2), Rat::int(0), Rat::int(1), Rat::int(1)),
        Breakpoint::last(hi.clone(), Rat::int(1), Rat::int(1)),
    ])?;
    println!("step                  = {step}");

    let capped = step.meet(&PLFunction::constant(
        lo.clone(),
        hi.clone(),
        Rat::new(1, 2),
    )?)?;
    println!("meet(step, 1/2)       = {capped}");

    // Exact order decisions come with witnesses.
    match x.le(&mirrored)? {
        outcome if outcome.holds() => println!("x <= 1-x everywhere (unexpected)"),
        outcome => {
            let w = outcome.witness().unwrap();
            println!(
                "x <= 1-x fails at {w}: {} > {}",
                x.eval(w)?,
                mirrored.eval(w)?
            );
        }
    }

    // Affine structure and the uniform norm.
    let sum = x.add(&mirrored)?;
    println!("x + (1-x)             = {sum}");
    let centered = x.add_const(&Rat::new(-1, 2));
    println!("|| x - 1/2 ||         = {}", centered.sup_norm());

    // The finite model carries the full multiplicative structure.
    let f = FiniteFunction::new(vec![Rat::new(1, 2), Rat::new(1, 3)])?;
    let square = f.mul(&f)?;
    println!("(1/2, 1/3) squared    = {square}");

    Ok(())
}
