//! Deterministic random instance generators shared by the integration
//! suites. Everything is built from dyadic numerators over denominators
//! `<= 64`, so exact arithmetic stays small.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sandwich::funcspace::{Breakpoint, FiniteFunction, PLFunction, Rat};
use sandwich::semicont::{is_lsc, is_usc};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dyadic rational with numerator in `-max..=max` and denominator 1..8.
pub fn dyadic(rng: &mut impl Rng, max: i64) -> Rat {
    let den = [1, 2, 4, 8][rng.gen_range(0..4)];
    Rat::new(rng.gen_range(-max..=max), den)
}

pub fn nonneg_dyadic(rng: &mut impl Rng, max: i64) -> Rat {
    let den = [1, 2, 4, 8][rng.gen_range(0..4)];
    Rat::new(rng.gen_range(0..=max), den)
}

/// A dyadic fraction in [0, 1].
fn unit_frac(rng: &mut impl Rng) -> Rat {
    let den: i64 = [1, 2, 4, 8][rng.gen_range(0..4)];
    Rat::new(rng.gen_range(0..=den), den)
}

/// Sorted distinct interior points of (0,1) with denominators <= 64.
pub fn unit_grid(rng: &mut impl Rng, max_interior: usize) -> Vec<Rat> {
    let count = rng.gen_range(0..=max_interior);
    let mut xs: Vec<Rat> = (0..count)
        .map(|_| {
            let den: i64 = [8, 16, 32, 64][rng.gen_range(0..4)];
            Rat::new(rng.gen_range(1..den), den)
        })
        .collect();
    xs.sort();
    xs.dedup();
    xs
}

/// Continuous piecewise-linear interpolation of random dyadic values on
/// `{0} u grid u {1}`.
pub fn continuous_on(rng: &mut impl Rng, grid: &[Rat]) -> PLFunction {
    let mut points = vec![(Rat::zero(), dyadic(rng, 16))];
    for x in grid {
        points.push((x.clone(), dyadic(rng, 16)));
    }
    points.push((Rat::one(), dyadic(rng, 16)));
    PLFunction::continuous(&points).unwrap()
}

/// Nonnegative lsc function on the same grid: nonnegative limits, point
/// values dropped below them at random. When `pin` names a node, the
/// function is forced to vanish there (value and both limits zero).
pub fn nonneg_lsc_on(rng: &mut impl Rng, grid: &[Rat]) -> PLFunction {
    nonneg_lsc_pinned(rng, grid, None)
}

pub fn nonneg_lsc_pinned(rng: &mut impl Rng, grid: &[Rat], pin: Option<&Rat>) -> PLFunction {
    let pinned = |x: &Rat| pin.is_some_and(|p| p == x);
    let mut bps = Vec::with_capacity(grid.len() + 2);
    let zero = Rat::zero();
    if pinned(&zero) {
        bps.push(Breakpoint::first(Rat::zero(), Rat::zero(), Rat::zero()));
    } else {
        let r0 = nonneg_dyadic(rng, 8);
        let v0 = &r0 * &unit_frac(rng);
        bps.push(Breakpoint::first(Rat::zero(), v0, r0));
    }
    for x in grid {
        if pinned(x) {
            bps.push(Breakpoint::interior(
                x.clone(),
                Rat::zero(),
                Rat::zero(),
                Rat::zero(),
            ));
            continue;
        }
        let l = nonneg_dyadic(rng, 8);
        let r = nonneg_dyadic(rng, 8);
        let smaller = if l <= r { l.clone() } else { r.clone() };
        let v = &smaller * &unit_frac(rng);
        bps.push(Breakpoint::interior(x.clone(), l, v, r));
    }
    let one = Rat::one();
    if pinned(&one) {
        bps.push(Breakpoint::last(Rat::one(), Rat::zero(), Rat::zero()));
    } else {
        let l_end = nonneg_dyadic(rng, 8);
        let v_end = &l_end * &unit_frac(rng);
        bps.push(Breakpoint::last(Rat::one(), l_end, v_end));
    }
    let out = PLFunction::new(bps).unwrap();
    debug_assert!(is_lsc(&out));
    out
}

/// An usc/lsc pair with the exact gap `f + eps <= g`, built around a shared
/// continuous core.
pub fn pair_with_gap(rng: &mut impl Rng, grid: &[Rat], eps: &Rat) -> (PLFunction, PLFunction) {
    let core = continuous_on(rng, grid);
    let down = nonneg_lsc_on(rng, grid);
    let up = nonneg_lsc_on(rng, grid);
    let f = core.sub(&down).unwrap();
    let g = core.add_const(eps).add(&up).unwrap();
    debug_assert!(is_usc(&f));
    debug_assert!(is_lsc(&g));
    (f, g)
}

/// An usc/lsc pair with `f <= g` and gap exactly zero at one shared node.
/// Returns the pair and the pinned node.
pub fn pair_zero_gap(rng: &mut impl Rng, grid: &[Rat]) -> (PLFunction, PLFunction, Rat) {
    let mut nodes = vec![Rat::zero()];
    nodes.extend_from_slice(grid);
    nodes.push(Rat::one());
    let pin = nodes[rng.gen_range(0..nodes.len())].clone();
    let core = continuous_on(rng, grid);
    let down = nonneg_lsc_pinned(rng, grid, Some(&pin));
    let up = nonneg_lsc_pinned(rng, grid, Some(&pin));
    let f = core.sub(&down).unwrap();
    let g = core.add(&up).unwrap();
    debug_assert_eq!(f.eval(&pin).unwrap(), g.eval(&pin).unwrap());
    (f, g, pin)
}

/// A random usc function (continuous core minus a nonnegative lsc part).
pub fn usc_on(rng: &mut impl Rng, grid: &[Rat]) -> PLFunction {
    let core = continuous_on(rng, grid);
    let down = nonneg_lsc_on(rng, grid);
    core.sub(&down).unwrap()
}

/// A continuous function with a single usc violation of the given deficit
/// at one interior grid node. Returns the function, the node, and the
/// deficit.
pub fn non_usc_on(rng: &mut impl Rng) -> (PLFunction, Rat, Rat) {
    let mut grid = unit_grid(rng, 3);
    if grid.is_empty() {
        grid.push(Rat::new(1, 2));
    }
    let core = continuous_on(rng, &grid);
    let node = rng.gen_range(1..=grid.len());
    let deficit = Rat::new(rng.gen_range(1..=8), 8);
    let mut bps: Vec<Breakpoint> = core.breakpoints().to_vec();
    // The continuous core may have dropped collinear grid nodes; pick the
    // node among the survivors.
    let node = node.min(bps.len() - 2).max(1);
    let v = bps[node].value.clone().unwrap();
    bps[node].value = Some(&v - &deficit);
    let x = bps[node].x.clone();
    (PLFunction::new(bps).unwrap(), x, deficit)
}

/// Random finite function with denominators <= 32.
pub fn finite_on(rng: &mut impl Rng, n: usize) -> FiniteFunction {
    let values = (0..n)
        .map(|_| {
            let den: i64 = [1, 2, 4, 8, 16, 32][rng.gen_range(0..6)];
            Rat::new(rng.gen_range(-32..=32), den)
        })
        .collect();
    FiniteFunction::new(values).unwrap()
}

/// Uniform rational probes of [0, 1].
pub fn probes(count: usize) -> Vec<Rat> {
    (0..=count)
        .map(|i| Rat::new(i as i64, count as i64))
        .collect()
}
