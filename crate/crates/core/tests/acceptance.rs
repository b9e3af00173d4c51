//! Acceptance run: one PASS/FAIL line per criterion. Failures that are known
//! discrepancies in the source material are listed in `KNOWN` and do not make
//! the run fail; anything else does.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use exclie_core::absfilt::{has_a1_component, max_factor_dim, max_factor_dim_where, max_shape_list_bound_where, verify_abs_shapes};
use exclie_core::catalogue::verify_catalogue;
use exclie_core::charcalc::{decompose_into_weyl, exterior_power_character, freudenthal_character, weyl_dim};
use exclie_core::h1data::default_h1_table;
use exclie_core::modp::default_oracle;
use exclie_core::rootcore::{build_root_system, RootSystemId, Series, Weight};
use exclie_core::screen::{bundled_prime_table, screen, Outcome, Status};
use exclie_core::subgroups::ParabolicDatum;

struct Outcome9 {
    failures: Vec<String>,
    summary: String,
}

/// Failures already analysed; each must still occur exactly as listed.
const KNOWN: [(u32, &str); 3] = [
    (7, "(A3,E7,2): expected ruled_out, got candidate_found"),
    (7, "(G2,E7,3): non-struck prime but ruled_out"),
    (8, "(E8,B2,5): B2 module (0,0)/(2,0)/(0,0) at p=5 has dimension 16: computed 15, claimed 16"),
];

fn id(s: &str) -> RootSystemId {
    s.parse().unwrap()
}

fn w(v: &[i64]) -> Weight {
    Weight(v.to_vec())
}

fn timed(limit: Duration, start: Instant, failures: &mut Vec<String>) {
    let t = start.elapsed();
    if t > limit {
        failures.push(format!("took {t:?}, limit {limit:?}"));
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion1() -> Outcome9 {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=8usize {
        let mut cases = vec![(Series::A, n, n * (n + 1) / 2)];
        if n >= 2 {
            cases.push((Series::B, n, n * n));
            cases.push((Series::C, n, n * n));
        }
        if n >= 4 {
            cases.push((Series::D, n, n * (n - 1)));
        }
        match n {
            2 => cases.push((Series::G, 2, 6)),
            4 => cases.push((Series::F, 4, 24)),
            6 => cases.push((Series::E, 6, 36)),
            7 => cases.push((Series::E, 7, 63)),
            8 => cases.push((Series::E, 8, 120)),
            _ => {}
        }
        for (series, rank, want) in cases {
            let sys = build_root_system(RootSystemId { series, rank });
            let got = sys.positive_roots().len();
            if got != want {
                failures.push(format!("{}: {got} positive roots, expected {want}", sys.label()));
            }
            if sys.dimension() != rank + 2 * got {
                failures.push(format!("{}: dimension identity fails", sys.label()));
            }
        }
    }
    let e8 = build_root_system(id("E8")).dimension();
    if e8 != 248 {
        failures.push(format!("dim E8 = {e8}"));
    }
    timed(Duration::from_secs(1), start, &mut failures);
    Outcome9 { failures, summary: format!("positive roots for all types of rank <= 8, dim E8 = {e8}") }
}

/// Weyl's formula for B2 with the long simple root first.
fn b2_dim(a: i64, b: i64) -> u128 {
    ((a + 1) * (b + 1) * (a + b + 2) * (2 * a + b + 3) / 6) as u128
}

fn criterion2() -> Outcome9 {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |label: String, got: u128, want: u128| {
        if got != want {
            failures.push(format!("{label}: {got}, expected {want}"));
        }
    };
    for n in 1..=8usize {
        let sys = build_root_system(RootSystemId { series: Series::A, rank: n });
        for j in 0..n {
            check(format!("A{n} omega{}", j + 1), weyl_dim(&sys, &Weight::fundamental(n, j)).unwrap(), binom(n as u128 + 1, j as u128 + 1));
        }
    }
    for n in 4..=8usize {
        let sys = build_root_system(RootSystemId { series: Series::D, rank: n });
        for j in [n - 2, n - 1] {
            check(format!("D{n} spin omega{}", j + 1), weyl_dim(&sys, &Weight::fundamental(n, j)).unwrap(), 1 << (n - 1));
        }
    }
    check("E6 omega1".into(), weyl_dim(&build_root_system(id("E6")), &Weight::fundamental(6, 0)).unwrap(), 27);
    check("E7 omega7".into(), weyl_dim(&build_root_system(id("E7")), &Weight::fundamental(7, 6)).unwrap(), 56);
    let b2 = build_root_system(id("B2"));
    for (lam, want) in [((0, 1), 4), ((1, 0), 5), ((0, 2), 10), ((2, 0), 14), ((1, 3), 64)] {
        check(format!("B2 {lam:?}"), weyl_dim(&b2, &w(&[lam.0, lam.1])).unwrap(), want);
    }
    for a in 0..8 {
        for b in 0..8 {
            check(format!("B2 ({a},{b}) closed form"), weyl_dim(&b2, &w(&[a, b])).unwrap(), b2_dim(a, b));
        }
    }
    timed(Duration::from_secs(1), start, &mut failures);
    Outcome9 { failures, summary: "binomials, spin 2^(n-1), 27, 56, B2 4/5/10/14 and (1,3) -> 64".into() }
}

fn criterion3() -> Outcome9 {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut levis = 0;
    for g in ["E6", "E7", "E8"] {
        let r = verify_abs_shapes(id(g)).unwrap();
        levis += r.levis_checked;
        if !r.passed() {
            failures.push(format!("{g}: {} shape violations", r.violations.len()));
        }
    }
    let (d, wit) = max_factor_dim(id("E8"), true).unwrap();
    if (d, wit.levi_type().as_str()) != (64, "D7") {
        failures.push(format!("E8 maximum {d} at {}", wit.levi_type()));
    }
    let nonsimple = |pd: &ParabolicDatum| !has_a1_component(pd) && pd.levi.components.len() > 1;
    let (b, bw) = max_shape_list_bound_where(id("E8"), nonsimple).unwrap().unwrap();
    if (b, bw.levi_type().as_str()) != (60, "A3A4") {
        failures.push(format!("non-simple bound {b} at {}", bw.levi_type()));
    }
    let (real, rw) = max_factor_dim_where(id("E8"), nonsimple).unwrap().unwrap();
    let e7 = max_factor_dim(id("E7"), true).unwrap().0;
    let e6 = max_factor_dim(id("E6"), true).unwrap().0;
    if e7 > 35 || e6 > 20 {
        failures.push(format!("E7 maximum {e7}, E6 maximum {e6}"));
    }
    timed(Duration::from_secs(30), start, &mut failures);
    Outcome9 {
        failures,
        summary: format!(
            "{levis} Levis without violations; E8 max 64 at D7; non-simple bound {b} at A3A4 (largest occurring {real} at {}); E7 {e7}, E6 {e6}",
            rw.levi_type()
        ),
    }
}

fn criterion4() -> Outcome9 {
    let mut failures = Vec::new();
    let a2 = build_root_system(id("A2"));
    let l3 = exterior_power_character(&freudenthal_character(&a2, &w(&[1, 1])).unwrap(), 3).unwrap();
    let dec = decompose_into_weyl(&l3).unwrap();
    if !dec.terms.contains_key(&w(&[2, 2])) || !dec.terms.contains_key(&w(&[0, 3])) || l3.dim() != 56 {
        failures.push(format!("A2 Lambda^3 L(1,1) = {dec}"));
    }
    let a3 = build_root_system(id("A3"));
    let l3 = exterior_power_character(&freudenthal_character(&a3, &w(&[0, 1, 0])).unwrap(), 3).unwrap();
    let support: BTreeSet<Weight> = l3.dominant_part().into_keys().collect();
    let want: BTreeSet<Weight> = [w(&[0, 0, 2]), w(&[2, 0, 0]), w(&[0, 1, 0])].into_iter().collect();
    if support != want {
        failures.push(format!("A3 Lambda^3 L(0,1,0) dominant weights {support:?}"));
    }
    let a5 = build_root_system(id("A5"));
    let l3 = exterior_power_character(&freudenthal_character(&a5, &Weight::fundamental(5, 0)).unwrap(), 3).unwrap();
    let dec = decompose_into_weyl(&l3).unwrap();
    if dec.terms.len() != 1 || dec.terms.get(&Weight::fundamental(5, 2)) != Some(&1) || l3.dim() != 20 {
        failures.push(format!("A5 Lambda^3 natural = {dec}"));
    }
    Outcome9 { failures, summary: "Lambda^3 of A2 L(1,1), A3 L(0,1,0) and the A5 natural".into() }
}

fn criterion5() -> Outcome9 {
    let mut failures = Vec::new();
    let oracle = default_oracle();
    let g2 = build_root_system(id("G2"));
    let mut count = 0;
    for a in 0..12 {
        for b in 0..12 {
            let lam = w(&[a, b]);
            if weyl_dim(&g2, &lam).unwrap() >= 97 {
                continue;
            }
            count += 1;
            match oracle.composition_factors(&g2, &lam, 5) {
                Ok(f) if f == vec![(lam.clone(), 1)] => {}
                other => failures.push(format!("G2 V{lam} at p=5: {other:?}")),
            }
        }
    }
    let b2 = build_root_system(id("B2"));
    if oracle.composition_factors(&b2, &w(&[2, 0]), 3).ok() != Some(vec![(w(&[2, 0]), 1)]) {
        failures.push("B2 V(2,0) at p=3 is reducible".into());
    }
    let mut f = oracle.composition_factors(&g2, &w(&[2, 0]), 7).unwrap();
    f.sort();
    if f != vec![(w(&[0, 0]), 1), (w(&[2, 0]), 1)] {
        failures.push(format!("G2 V(2,0) at p=7: {f:?}"));
    }
    Outcome9 { failures, summary: format!("{count} G2 Weyl modules of dim < 97 irreducible at p=5; B2 V(2,0) p=3; G2 V(2,0) p=7 = L(2,0)|k") }
}

fn criterion6() -> Outcome9 {
    let checks = default_h1_table().validate_dims(default_oracle());
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("line {} {} at p={}: claimed {}, computed {:?}", c.line, c.row, c.p, c.claimed, c.computed))
        .collect();
    let dims: Vec<String> = checks.iter().map(|c| c.claimed.to_string()).collect();
    Outcome9 { failures, summary: format!("{} pinned dimension cells ({})", checks.len(), dims.join(", ")) }
}

fn struck_triples() -> Vec<(&'static str, &'static str, u64)> {
    let mut v = vec![("G2", "E6", 3), ("A2", "E7", 5), ("A2", "E8", 5), ("A3", "E6", 2), ("A3", "E7", 2), ("B4", "E6", 2), ("C4", "E6", 2)];
    for g in ["E6", "E7", "E8"] {
        v.push(("G2", g, 5));
        v.push(("C3", g, 2));
        v.push(("B2", g, 3));
    }
    v
}

fn criterion7() -> Outcome9 {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut ruled = 0;
    for (x, g, p) in struck_triples() {
        let v = screen(id(x), id(g), p);
        assert!(v.is_sound(), "unsound verdict for ({x},{g},{p})");
        if v.status == Status::RuledOut {
            ruled += 1;
        } else {
            failures.push(format!("({x},{g},{p}): expected ruled_out, got {}", v.status));
        }
    }
    let a3 = screen(id("A3"), id("E6"), 2);
    let a5_branch = a3.trail.iter().any(|t| t.levi.starts_with("A5 ") && t.embedding.contains("L(0,1,0)") && t.outcome == Outcome::Vanishes);
    if !a5_branch {
        failures.push("(A3,E6,2): trail lacks the A5 branch via L(0,1,0)".into());
    }
    let mut others = 0;
    for e in bundled_prime_table() {
        for &p in &e.primes {
            others += 1;
            let v = screen(e.x, e.g, p);
            if v.status == Status::RuledOut {
                failures.push(format!("({},{},{p}): non-struck prime but ruled_out", e.x, e.g));
            }
        }
    }
    timed(Duration::from_secs(300), start, &mut failures);
    Outcome9 { failures, summary: format!("{ruled} struck triples ruled out; {others} listed triples screened") }
}

fn criterion8() -> Outcome9 {
    let r = verify_catalogue().unwrap();
    let failures = r.failures().map(|f| format!("{}: {}: {}", f.row, f.claim, f.detail)).collect();
    Outcome9 { failures, summary: format!("{} rows: {} claims passed, {} failed, {} structural skipped", r.rows, r.passed, r.failed, r.skipped) }
}

fn criterion9() -> Outcome9 {
    let mut failures = Vec::new();
    for (name, check) in common::SUITES {
        if let Err(e) = common::run_suite(check, 1000) {
            failures.push(format!("{name}: {e}"));
        }
    }
    Outcome9 { failures, summary: format!("{} suites x 1000 seeded instances", common::SUITES.len()) }
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome9); 9] = [
        (1, "root data", criterion1),
        (2, "Weyl dimensions", criterion2),
        (3, "ABS sweep", criterion3),
        (4, "exterior powers", criterion4),
        (5, "Weyl module irreducibility", criterion5),
        (6, "H1 table dimensions", criterion6),
        (7, "screening verdicts", criterion7),
        (8, "catalogue", criterion8),
        (9, "property suites", criterion9),
    ];
    let mut unexpected = Vec::new();
    let mut seen_known = BTreeSet::new();
    for (n, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n} ({name}): {verdict} [{:.2?}] {}", start.elapsed(), out.summary);
        for f in &out.failures {
            let known = KNOWN.iter().any(|(k, text)| *k == n && text == f);
            println!("    {} {f}", if known { "known discrepancy:" } else { "UNEXPECTED:" });
            if known {
                seen_known.insert((n, f.clone()));
            } else {
                unexpected.push(format!("criterion {n}: {f}"));
            }
        }
    }
    for (n, text) in KNOWN {
        if !seen_known.contains(&(n, text.to_string())) {
            unexpected.push(format!("criterion {n}: listed discrepancy no longer occurs: {text}"));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("acceptance: {} unexpected result(s)", unexpected.len());
        for u in &unexpected {
            eprintln!("  {u}");
        }
        std::process::exit(1);
    }
}
