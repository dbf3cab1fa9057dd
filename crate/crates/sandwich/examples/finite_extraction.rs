//! Finite-subfamily extraction: from a verified premise
//! `meet(S) + eps <= join(T)` the sweep selects finitely many members with
//! `meet(S0) <= join(T0)`, and the epsilon cannot be dropped.
//!
//! Run with `cargo run --example finite_extraction`.

use sandwich::compactc::{extract_finite, verify_premise};
use sandwich::funcspace::{PLFunction, Rat};

fn main() -> sandwich::Result<()> {
    let rat = |n, d| Rat::new(n, d);
    let lo = rat(0, 1);
    let hi = rat(1, 1);

    // S = {1, 2x}, T = {x + 3/4}: the meet min(1, 2x) sits 1/4 below T.
    let s = vec![
        PLFunction::constant(lo.clone(), hi.clone(), rat(1, 1))?,
        PLFunction::line(lo.clone(), hi.clone(), rat(0, 1), rat(2, 1))?,
    ];
    let t = vec![PLFunction::line(
        lo.clone(),
        hi.clone(),
        rat(3, 4),
        rat(7, 4),
    )?];
    let eps = rat(1, 4);

    let premise = verify_premise(&s, &t, &eps)?;
    println!(
        "premise min(1, 2x) + 1/4 <= x + 3/4 holds: {}",
        premise.holds()
    );

    let result = extract_finite(&s, &t, &eps)?;
    println!(
        "extracted S0 = {:?}, T0 = {:?}",
        result.s_indices, result.t_indices
    );
    for rec in &result.cover {
        println!(
            "  s{} < t{} on ({}, {})",
            rec.s_index, rec.t_index, rec.interval.0, rec.interval.1
        );
    }
    // Neither member of S suffices alone: the constant fails near 0, the
    // ramp fails near 1. The sweep needs both.
    for (i, member) in s.iter().enumerate() {
        println!("  s{i} alone below join(T): {}", member.le(&t[0])?.holds());
    }

    // Why the gap parameter is necessary: with S = {1/k} and T = {-1/k},
    // every subfamily pair satisfies min(S0) > 0 > max(T0), and indeed the
    // gap premise already fails.
    let s_const: Vec<PLFunction> = (1..=8)
        .map(|k| PLFunction::constant(lo.clone(), hi.clone(), rat(1, k)))
        .collect::<Result<_, _>>()?;
    let t_const: Vec<PLFunction> = (1..=8)
        .map(|k| PLFunction::constant(lo.clone(), hi.clone(), rat(-1, k)))
        .collect::<Result<_, _>>()?;
    let premise = verify_premise(&s_const, &t_const, &Rat::pow2(-12))?;
    println!(
        "constants 1/k vs -1/k: premise with eps = 2^-12 holds: {} (witness {})",
        premise.holds(),
        premise.witness().unwrap()
    );
    match extract_finite(&s_const, &t_const, &Rat::pow2(-12)) {
        Err(e) => println!("extraction correctly refused: {e}"),
        Ok(_) => println!("unexpected extraction"),
    }

    Ok(())
}
