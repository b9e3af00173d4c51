//! Randomized invariant checks shared by the property suite and the
//! acceptance run. Each check builds its instance from a seed.

#![allow(dead_code)]

use exclie_core::charcalc::{decompose_into_weyl, freudenthal_character, weyl_dim, Character, WeylCombination};
use exclie_core::modp::steinberg_decompose;
use exclie_core::rootcore::{build_root_system, RootSystemId, System, Weight};
use exclie_core::screen::simple_types_up_to;
use exclie_core::subgroups::{subsystems_by_descent, ParabolicDatum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_type(r: &mut ChaCha8Rng) -> RootSystemId {
    *simple_types_up_to(8).choose(r).unwrap()
}

/// A dominant weight with at most three non-zero coordinates whose Weyl
/// module has dimension at most `cap` (falls back to zero).
fn small_weight(r: &mut ChaCha8Rng, sys: &System, cap: u128) -> Weight {
    let n = sys.rank();
    for _ in 0..20 {
        let mut w = Weight::zero(n);
        for _ in 0..r.gen_range(1..=3) {
            w.0[r.gen_range(0..n)] += r.gen_range(1..=3);
        }
        if weyl_dim(sys, &w).map(|d| d <= cap).unwrap_or(false) {
            return w;
        }
    }
    Weight::zero(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The character of V(lambda) is constant on Weyl orbits and has the Weyl dimension.
pub fn weyl_invariance(seed: u64) -> Check {
    let mut r = rng(seed);
    let id = pick_type(&mut r);
    let sys = build_root_system(id);
    let w = small_weight(&mut r, &sys, 2000);
    let ch = freudenthal_character(&sys, &w).map_err(|e| e.to_string())?;
    ensure(ch.is_weyl_invariant(), || format!("{id} V{w} is not Weyl-invariant"))?;
    let d = weyl_dim(&sys, &w).map_err(|e| e.to_string())?;
    ensure(ch.dim() as u128 == d, || format!("{id} V{w}: character dim {} vs Weyl {d}", ch.dim()))
}

/// Restriction to a Levi or maximal-rank subsystem keeps the dimension and
/// the result is a non-negative sum of Weyl characters.
pub fn restriction_conserves_dim(seed: u64) -> Check {
    let mut r = rng(seed);
    let id = pick_type(&mut r);
    let sys = build_root_system(id);
    let w = small_weight(&mut r, &sys, 1000);
    let ch = freudenthal_character(&sys, &w).map_err(|e| e.to_string())?;
    let map = if r.gen_bool(0.5) {
        let nodes: Vec<usize> = (0..id.rank).filter(|_| r.gen_bool(0.6)).collect();
        if nodes.is_empty() {
            return Ok(());
        }
        ParabolicDatum::new(id, &nodes).levi.weight_map()
    } else {
        let subs = subsystems_by_descent(id, 1);
        match subs.choose(&mut r) {
            Some(s) => s.weight_map(),
            None => return Ok(()),
        }
    };
    let res = map.restrict(&ch).map_err(|e| e.to_string())?;
    ensure(res.dim() == ch.dim(), || format!("{id} V{w}: restricted dim {} vs {}", res.dim(), ch.dim()))?;
    let dec = decompose_into_weyl(&res).map_err(|e| e.to_string())?;
    ensure(dec.terms.values().all(|c| *c > 0), || format!("{id} V{w}: restriction has negative Weyl terms {dec}"))?;
    ensure(dec.dim().map_err(|e| e.to_string())? == ch.dim() as i128, || format!("{id} V{w}: Weyl terms miss dimension"))
}

/// Dominance is reflexive, antisymmetric and transitive; subtracting
/// positive roots moves down.
pub fn dominance_laws(seed: u64) -> Check {
    let mut r = rng(seed);
    let id = pick_type(&mut r);
    let sys = build_root_system(id);
    let pos = sys.positive_roots();
    let a = small_weight(&mut r, &sys, u128::MAX);
    let down = |w: &Weight, r: &mut ChaCha8Rng| {
        let mut v = w.clone();
        for _ in 0..r.gen_range(0..4) {
            v = v.sub(&pos[r.gen_range(0..pos.len())].weight);
        }
        v
    };
    let b = down(&a, &mut r);
    let c = down(&b, &mut r);
    let x = small_weight(&mut r, &sys, u128::MAX);
    ensure(sys.dominance_leq(&a, &a), || format!("{id}: {a} not <= itself"))?;
    ensure(sys.dominance_leq(&b, &a) && sys.dominance_leq(&c, &b), || format!("{id}: subtracting roots from {a} did not go down"))?;
    ensure(sys.dominance_leq(&c, &a), || format!("{id}: transitivity fails for {c} <= {b} <= {a}"))?;
    if sys.dominance_leq(&a, &x) && sys.dominance_leq(&x, &a) {
        ensure(a == x, || format!("{id}: {a} and {x} are mutually below each other"))?;
    }
    ensure(!(b != a && sys.dominance_leq(&a, &b)), || format!("{id}: {a} <= {b} although {b} < {a}"))
}

/// Steinberg factors are restricted, twists increase, and recomposing gives lambda back.
pub fn steinberg_round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let id = pick_type(&mut r);
    let p = *PRIMES.choose(&mut r).unwrap();
    let w = Weight((0..id.rank).map(|_| if r.gen_bool(0.5) { r.gen_range(0..200) } else { 0 }).collect());
    let st = steinberg_decompose(&w, p).map_err(|e| e.to_string())?;
    ensure(st.recompose() == w, || format!("{id} p={p}: {w} recomposes to {}", st.recompose()))?;
    for pair in st.factors.windows(2) {
        ensure(pair[0].1 < pair[1].1, || format!("{id} p={p}: twists out of order in {st}"))?;
    }
    ensure(
        st.factors.iter().all(|(f, _)| !f.is_zero() && f.0.iter().all(|&c| c >= 0 && (c as u64) < p)),
        || format!("{id} p={p}: {st} has a non-restricted factor"),
    )
}

/// A non-negative Weyl combination survives expansion to a character and back.
pub fn decompose_round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let id = pick_type(&mut r);
    let sys = build_root_system(id);
    let mut comb = WeylCombination::empty(sys.clone());
    for _ in 0..r.gen_range(1..=3) {
        let w = small_weight(&mut r, &sys, 600);
        comb.add(w, r.gen_range(1..=3));
    }
    let ch: Character = comb.to_character(exclie_core::charcalc::DEFAULT_CAP).map_err(|e| e.to_string())?;
    let back = decompose_into_weyl(&ch).map_err(|e| e.to_string())?;
    ensure(back.terms == comb.terms, || format!("{id}: {comb} came back as {back}"))?;
    let again = back.to_character(exclie_core::charcalc::DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(again.mults() == ch.mults(), || format!("{id}: rebuilt character differs for {comb}"))
}

pub const SUITES: [(&str, fn(u64) -> Check); 5] = [
    ("character Weyl-invariance", weyl_invariance),
    ("dimension conservation under restriction", restriction_conserves_dim),
    ("dominance partial-order laws", dominance_laws),
    ("Steinberg round-trip", steinberg_round_trip),
    ("decompose/reconstruct round-trip", decompose_round_trip),
];

/// Run `count` seeded instances of a suite; returns the first failure.
pub fn run_suite(check: fn(u64) -> Check, count: u64) -> Check {
    (0..count).try_for_each(|s| check(s).map_err(|e| format!("seed {s}: {e}")))
}
