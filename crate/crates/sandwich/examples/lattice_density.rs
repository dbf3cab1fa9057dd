//! Lattice approximation on a finite space: separating generators realize
//! any target exactly through the join-of-meets construction, two-point
//! interpolation stays affine, and clopen witnesses give two-sided
//! approximants.
//!
//! Run with `cargo run --example lattice_density`.

use sandwich::funcspace::{FiniteFunction, Rat};
use sandwich::stonew::{
    clopen_approx, interpolate_pair, separates, sw_construct, EvalOptions, LatticeExpr,
};

fn main() -> sandwich::Result<()> {
    let rat = |n: i64| Rat::int(n);
    let ff = |vals: &[Rat]| FiniteFunction::new(vals.to_vec()).unwrap();

    // One injective generator on a three-point space separates everything.
    let gens = vec![ff(&[rat(0), rat(1), rat(2)])];
    println!("generators separate: {}", separates(&gens)?.holds());

    // The target (5, -1, 2) is not affine in the generator, so the
    // realization genuinely needs joins and meets.
    let target = ff(&[rat(5), rat(-1), rat(2)]);
    let expr = sw_construct(&gens, &target)?;
    let value = expr.eval(&gens, EvalOptions::default())?;
    println!("construction evaluates to {value} (target {target})");
    println!(
        "uses lattice nodes: {}, uses products: {}",
        expr.uses_lattice_ops(),
        expr.uses_product()
    );

    // Pairwise interpolation needs only the affine span with constants.
    let e = interpolate_pair(&gens, 0, 2, &Rat::new(1, 3), &Rat::new(7, 2))?;
    println!(
        "interpolation hits ({}, ., {}) affinely: {}",
        Rat::new(1, 3),
        Rat::new(7, 2),
        e.eval(&gens, EvalOptions::default())?
    );
    println!("affine only: {}", !e.uses_lattice_ops());

    // Clopen approximation: with witnesses meet(S) = h + eps/2 and
    // join(T) = h + eps, the extracted meet lands within eps of h.
    let h = ff(&[rat(0), rat(1), rat(0)]);
    let eps = Rat::int(1);
    let s = vec![
        sw_construct(&gens, &h.add_const(&Rat::new(1, 2)))?,
        LatticeExpr::constant(rat(2)),
    ];
    let t = vec![sw_construct(&gens, &h.add_const(&eps))?];
    let a = clopen_approx(&h, &s, &t, &eps, &gens)?;
    let value = a.eval(&gens, EvalOptions::default())?;
    let distance = value.sub(&h)?.sup_norm();
    println!("clopen approximant {value}, distance to h = {distance} <= {eps}");

    // Non-separating generators are rejected with the offending pair.
    let constant_gens = vec![ff(&[rat(3), rat(3)])];
    match sw_construct(&constant_gens, &ff(&[rat(0), rat(1)])) {
        Err(e) => println!("constant generator rejected: {e}"),
        Ok(_) => println!("unexpected success"),
    }

    Ok(())
}
