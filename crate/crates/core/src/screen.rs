//! Screening of triples `(X, G, p)`: search the parabolics of `G` for an
//! `L'`-irreducible subgroup of type `X` and a composition factor of the
//! unipotent radical with non-vanishing first cohomology.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::absfilt::{proper_levis, q_level_factors, AbsFactor};
use crate::h1data::{covered, h1_status, H1Status, H1Table};
use crate::modp::{is_prime, ModpOracle};
use crate::rootcore::{build_root_system, RootSystemId, Series, System, Weight};
use crate::subgroups::{diagonal_combinations, embeddings_into, ParabolicDatum, PathSearch, Restrictor};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    RuledOut,
    CandidateFound,
    NeedsManual,
    NotCovered,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::RuledOut => "ruled_out",
            Status::CandidateFound => "candidate_found",
            Status::NeedsManual => "needs_manual",
            Status::NotCovered => "not_covered",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// `H^1` vanishes for the factor (or for every factor of the level).
    Vanishes,
    /// The Levi has no `L'`-irreducible subgroup of type `X`.
    NoEmbedding,
    NonZero,
    Unknown,
}

/// One leaf of the search: a Levi, an embedding into it, a composition
/// factor of `Q` and the answer for it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TrailEntry {
    pub levi: String,
    pub embedding: String,
    pub factor: String,
    pub outcome: Outcome,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseVerdict {
    pub x: RootSystemId,
    pub g: RootSystemId,
    pub p: u64,
    pub status: Status,
    pub levis_considered: usize,
    pub trail: Vec<TrailEntry>,
}

impl CaseVerdict {
    /// A ruled-out verdict has no open leaf.
    pub fn is_sound(&self) -> bool {
        self.status != Status::RuledOut || self.trail.iter().all(|t| matches!(t.outcome, Outcome::Vanishes | Outcome::NoEmbedding))
    }

    pub fn entries_with(&self, outcome: Outcome) -> impl Iterator<Item = &TrailEntry> {
        self.trail.iter().filter(move |t| t.outcome == outcome)
    }
}

/// Dimension below which every simple module has vanishing `H^1`, if known.
/// With `self_dual` the bound applies to self-dual modules.
pub fn vanishing_threshold(oracle: &ModpOracle, table: &H1Table, x: RootSystemId, p: u64, self_dual: bool) -> Option<u128> {
    if covered(x, p) {
        // No row at this prime means nothing has non-zero H^1.
        return table.min_nonvanishing_dim(oracle, x, p, self_dual).ok().map(|m| m.unwrap_or(u128::MAX));
    }
    if x.series == Series::G && p == 5 {
        return Some(57);
    }
    None
}

/// Which composition factors of `Q` count against complete reducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    /// Non-zero `H^1(X, V)` for the untwisted factor.
    Untwisted,
    /// A Frobenius twist of the natural module of `Sp_{2n}`: in
    /// characteristic 2 the image of `SO_{2n+1}` has non-trivial extensions there.
    Natural,
    Both,
}

/// High weight of the natural module of `Sp_{2n}` for a type isomorphic to `C_n`.
fn symplectic_natural(x: RootSystemId) -> Option<Weight> {
    match (x.series, x.rank) {
        (Series::A, 1) => Some(Weight(vec![1])),
        (Series::B, 2) => Some(Weight(vec![0, 1])),
        (Series::C, n) => Some(Weight::fundamental(n, 0)),
        _ => None,
    }
}

fn twist_of(nu: &Weight, base: &Weight, p: u64) -> Option<u32> {
    let mut q = 1i64;
    for r in 0..8 {
        if base.scale(q) == *nu {
            return Some(r);
        }
        q *= p as i64;
    }
    None
}

struct Context<'a> {
    oracle: &'a ModpOracle,
    table: &'a H1Table,
    x: RootSystemId,
    xsys: System,
    p: u64,
    /// Extra text for the embedding column (used for the isogeny image).
    label: String,
    check: Check,
    paths: BTreeMap<RootSystemId, PathSearch>,
    trail: BTreeSet<TrailEntry>,
}

impl Context<'_> {
    fn leaf(&mut self, levi: &str, embedding: &str, factor: String, outcome: Outcome, reason: String) {
        let embedding = if self.label.is_empty() { embedding.to_string() } else { format!("{} {embedding}", self.label) };
        self.trail.insert(TrailEntry { levi: levi.to_string(), embedding, factor, outcome, reason });
    }

    fn paths_for(&mut self, c: RootSystemId) -> Result<&PathSearch> {
        if !self.paths.contains_key(&c) {
            let found = embeddings_into(self.oracle, self.x, c, self.p, 0)?;
            self.paths.insert(c, found);
        }
        Ok(&self.paths[&c])
    }

    fn screen_levi(&mut self, pd: &ParabolicDatum) -> Result<()> {
        let levi_name = format!("{} {}", pd.levi_type(), pd.node_label());
        let levi_sys = pd.levi.system();
        let factors: Vec<AbsFactor> = q_level_factors(pd)?
            .into_iter()
            .flat_map(|l| l.factors.into_iter())
            .filter(|f| !f.is_trivial())
            .collect();
        let general = vanishing_threshold(self.oracle, self.table, self.x, self.p, false);
        let self_dual = vanishing_threshold(self.oracle, self.table, self.x, self.p, true);
        let mut open: Vec<&AbsFactor> = Vec::new();
        for f in &factors {
            let sd = levi_sys.minus_w0(&f.weight) == f.weight;
            let bound = if sd { self_dual } else { general };
            match bound {
                Some(m) if f.dim < m => {
                    let kind = if sd { "self-dual " } else { "" };
                    self.leaf(&levi_name, "any", format!("V{} (dim {})", f.weight, f.dim), Outcome::Vanishes, format!("{kind}module of dimension below {m}, the least with non-zero H^1"));
                }
                _ => open.push(f),
            }
        }
        if open.is_empty() {
            return Ok(());
        }
        let mut per_component = Vec::new();
        for c in pd.levi.components.clone() {
            let search = self.paths_for(c)?.clone();
            for u in &search.unresolved {
                self.leaf(&levi_name, &format!("{} in {c}", self.x), "-".into(), Outcome::Unknown, format!("embedding enumeration incomplete: {u}"));
            }
            if search.paths.is_empty() {
                if search.unresolved.is_empty() {
                    self.leaf(&levi_name, &format!("{} in {c}", self.x), "-".into(), Outcome::NoEmbedding, format!("no irreducible {} in {c}", self.x));
                }
                return Ok(());
            }
            per_component.push(search.paths);
        }
        for combo in diagonal_combinations(&per_component, self.p) {
            let description: Vec<String> = combo
                .iter()
                .map(|(e, r)| if *r == 0 { e.description.clone() } else { format!("({})^[{r}]", e.description) })
                .collect();
            let description = description.join(" ; ");
            let restrictor = if combo.len() == 1 {
                combo[0].0.restrictor.clone()
            } else {
                Restrictor::Diagonal {
                    from: levi_sys.clone(),
                    to: self.xsys.clone(),
                    parts: combo.iter().map(|(e, r)| e.restrictor.clone().twisted(self.p, *r)).collect(),
                }
            };
            for note in combo.iter().flat_map(|(e, _)| e.notes.iter()) {
                self.leaf(&levi_name, &description, "-".into(), Outcome::Unknown, note.clone());
            }
            for f in &open {
                self.screen_factor(&levi_name, &description, &restrictor, f);
            }
        }
        Ok(())
    }

    fn screen_factor(&mut self, levi: &str, embedding: &str, restrictor: &Restrictor, f: &AbsFactor) {
        let head = format!("V{} (dim {})", f.weight, f.dim);
        let ch = match restrictor.restrict_weyl(&f.weight) {
            Ok(c) => c,
            Err(e) => return self.leaf(levi, embedding, head, Outcome::Unknown, format!("restriction failed: {e}")),
        };
        let factors = match self.oracle.composition_factors_of_character(&ch, self.p) {
            Ok(v) => v,
            Err(e) => return self.leaf(levi, embedding, head, Outcome::Unknown, format!("composition factors unavailable: {e}")),
        };
        let natural = symplectic_natural(self.x);
        for (nu, mult) in factors {
            if nu.is_zero() {
                continue;
            }
            let label = format!("{head}: L{nu}{}", if mult > 1 { format!(" x{mult}") } else { String::new() });
            if matches!(self.check, Check::Natural | Check::Both) {
                if let Some(r) = natural.as_ref().and_then(|n| twist_of(&nu, n, self.p)) {
                    let reason = format!("natural module of {} twisted {r} times: the image of SO in characteristic 2 is not completely reducible", self.x);
                    self.leaf(levi, embedding, label, Outcome::NonZero, reason);
                    continue;
                }
                if self.check == Check::Natural {
                    self.leaf(levi, embedding, label, Outcome::Vanishes, "not a twist of the natural module".into());
                    continue;
                }
            }
            match h1_status(self.oracle, self.table, &self.xsys, self.p, &nu) {
                H1Status::Zero { reason } => self.leaf(levi, embedding, label, Outcome::Vanishes, reason),
                H1Status::NonZero { reason } => self.leaf(levi, embedding, label, Outcome::NonZero, reason),
                H1Status::Unknown { reason } => self.leaf(levi, embedding, label, Outcome::Unknown, reason),
            }
        }
    }
}

fn levi_can_host(x: RootSystemId, pd: &ParabolicDatum) -> bool {
    let dx = build_root_system(x).dimension();
    !pd.levi.components.is_empty()
        && pd.levi.components.iter().all(|c| {
            let a1 = c.series == Series::A && c.rank == 1;
            (!a1 || x == *c) && build_root_system(*c).dimension() >= dx
        })
}

/// Screen one triple. Uncertainty is reported in the verdict, not as an error.
pub fn screen_triple(oracle: &ModpOracle, table: &H1Table, x: RootSystemId, g: RootSystemId, p: u64) -> CaseVerdict {
    let mut verdict = CaseVerdict { x, g, p, status: Status::NotCovered, levis_considered: 0, trail: Vec::new() };
    let out_of_scope = if !g.is_exceptional() {
        Some(format!("{g} is not exceptional"))
    } else if !is_prime(p) {
        Some(format!("{p} is not prime"))
    } else if x.rank > g.rank {
        Some(format!("rank of {x} exceeds rank of {g}"))
    } else {
        None
    };
    if let Some(reason) = out_of_scope {
        verdict.trail.push(TrailEntry { levi: "-".into(), embedding: "-".into(), factor: "-".into(), outcome: Outcome::Unknown, reason });
        return verdict;
    }
    // In characteristic 2 a subgroup of type B_n may be the image of SO_{2n+1}
    // in Sp_{2n}; only the natural module then matters for that image.
    let mut images = Vec::new();
    if p == 2 && x.series == Series::B && x.rank >= 3 {
        images.push((x, String::new(), Check::Untwisted));
        images.push((RootSystemId { series: Series::C, rank: x.rank }, format!("[image of type C{} under the isogeny]", x.rank), Check::Natural));
    } else if p == 2 && symplectic_natural(x).is_some() && x.series != Series::C {
        images.push((x, String::new(), Check::Both));
    } else {
        images.push((x, String::new(), Check::Untwisted));
    }
    let mut trail = BTreeSet::new();
    for (image, label, check) in images {
        let mut ctx = Context {
            oracle,
            table,
            x: image,
            xsys: build_root_system(image),
            p,
            label,
            check,
            paths: BTreeMap::new(),
            trail: BTreeSet::new(),
        };
        for pd in proper_levis(g).iter().filter(|pd| levi_can_host(image, pd)) {
            verdict.levis_considered += 1;
            if let Err(e) = ctx.screen_levi(pd) {
                let name = format!("{} {}", pd.levi_type(), pd.node_label());
                ctx.leaf(&name, "-", "-".into(), Outcome::Unknown, format!("computation failed: {e}"));
            }
        }
        trail.extend(ctx.trail);
    }
    verdict.trail = trail.into_iter().collect();
    let has = |o: Outcome| verdict.trail.iter().any(|t| t.outcome == o);
    verdict.status = if has(Outcome::NonZero) {
        Status::CandidateFound
    } else if has(Outcome::Unknown) {
        Status::NeedsManual
    } else {
        Status::RuledOut
    };
    if verdict.trail.is_empty() {
        verdict.trail.push(TrailEntry {
            levi: "-".into(),
            embedding: "-".into(),
            factor: "-".into(),
            outcome: Outcome::NoEmbedding,
            reason: format!("no proper Levi of {g} can contain an irreducible {x}"),
        });
    }
    verdict
}

/// Simple root systems of rank at most `rank`, each isomorphism type once.
pub fn simple_types_up_to(rank: usize) -> Vec<RootSystemId> {
    let mut out = Vec::new();
    for n in 1..=rank {
        out.push(RootSystemId { series: Series::A, rank: n });
        if n >= 2 {
            out.push(RootSystemId { series: Series::B, rank: n });
        }
        if n >= 3 {
            out.push(RootSystemId { series: Series::C, rank: n });
        }
        if n >= 4 {
            out.push(RootSystemId { series: Series::D, rank: n });
        }
        if n == 2 {
            out.push(RootSystemId { series: Series::G, rank: 2 });
        }
        if n == 4 {
            out.push(RootSystemId { series: Series::F, rank: 4 });
        }
        if (6..=8).contains(&n) {
            out.push(RootSystemId { series: Series::E, rank: n });
        }
    }
    out
}

/// One row of the prime table: the primes for `(X, G)` and which of them are
/// struck (shown to give only completely reducible subgroups).
#[derive(Clone, Debug, Serialize)]
pub struct PrimeListEntry {
    pub g: RootSystemId,
    pub x: RootSystemId,
    pub primes: Vec<u64>,
    pub struck: Vec<u64>,
}

const COROLLARY2_DATA: &str = include_str!("../data/corollary2.txt");

/// Parse `G X tokens...` where `-q` marks a struck prime and `<=q` expands to
/// the primes up to `q`.
pub fn parse_prime_table(text: &str) -> Result<Vec<PrimeListEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::Parse(format!("prime table line {}: {m}", i + 1));
        let mut toks = line.split_whitespace();
        let g: RootSystemId = toks.next().ok_or_else(|| err("missing group"))?.parse()?;
        let xs = toks.next().ok_or_else(|| err("missing type"))?;
        let mut primes = Vec::new();
        let mut struck = Vec::new();
        for t in toks {
            if let Some(q) = t.strip_prefix("<=") {
                let q: u64 = q.parse().map_err(|_| err(t))?;
                primes.extend((2..=q).filter(|&r| is_prime(r)));
            } else if let Some(q) = t.strip_prefix('-') {
                struck.push(q.parse().map_err(|_| err(t))?);
            } else {
                primes.push(t.parse().map_err(|_| err(t))?);
            }
        }
        for x in xs.split(',') {
            out.push(PrimeListEntry { g, x: x.parse()?, primes: primes.clone(), struck: struck.clone() });
        }
    }
    Ok(out)
}

pub fn bundled_prime_table() -> &'static [PrimeListEntry] {
    static TABLE: std::sync::OnceLock<Vec<PrimeListEntry>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let text = crate::data_override("corollary2.txt").unwrap_or_else(|| COROLLARY2_DATA.to_string());
        parse_prime_table(&text).expect("bundled prime table parses")
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary2Report {
    pub g: RootSystemId,
    pub p: u64,
    /// Types whose verdict is not `ruled_out`.
    pub flagged: Vec<String>,
    /// Types for which `p` is a listed (non-struck) prime.
    pub expected: Vec<String>,
    /// Expected but ruled out: a contradiction with the table.
    pub missing: Vec<String>,
    /// Flagged but not expected.
    pub extra: Vec<String>,
    pub verdicts: Vec<(String, Status)>,
}

impl Corollary2Report {
    pub fn consistent(&self) -> bool {
        self.missing.is_empty()
    }
}

pub fn expected_types(g: RootSystemId, p: u64) -> Vec<RootSystemId> {
    bundled_prime_table().iter().filter(|e| e.g == g && e.primes.contains(&p)).map(|e| e.x).collect()
}

/// Screen every simple type of rank at most `rank(G)` at `p` and compare the
/// flagged set with the prime table.
pub fn regenerate_corollary2(oracle: &ModpOracle, table: &H1Table, g: RootSystemId, p: u64) -> Corollary2Report {
    let expected: BTreeSet<String> = expected_types(g, p).iter().map(|x| x.to_string()).collect();
    let mut flagged = BTreeSet::new();
    let mut verdicts = Vec::new();
    for x in simple_types_up_to(g.rank) {
        let v = screen_triple(oracle, table, x, g, p);
        if v.status != Status::RuledOut {
            flagged.insert(x.to_string());
        }
        verdicts.push((x.to_string(), v.status));
    }
    Corollary2Report {
        g,
        p,
        missing: expected.difference(&flagged).cloned().collect(),
        extra: flagged.difference(&expected).cloned().collect(),
        flagged: flagged.into_iter().collect(),
        expected: expected.into_iter().collect(),
        verdicts,
    }
}

pub use crate::catalogue::{verify_catalogue, CatalogueReport};

/// Default screening with the bundled data.
pub fn screen(x: RootSystemId, g: RootSystemId, p: u64) -> CaseVerdict {
    screen_triple(crate::modp::default_oracle(), crate::h1data::default_h1_table(), x, g, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> RootSystemId {
        s.parse().unwrap()
    }

    #[test]
    fn prime_table_parses() {
        let t = bundled_prime_table();
        let e = t.iter().find(|e| e.g == id("E8") && e.x == id("A1")).unwrap();
        assert_eq!(e.primes, vec![2, 3, 5, 7]);
        let e = t.iter().find(|e| e.g == id("E8") && e.x == id("G2")).unwrap();
        assert_eq!((e.primes.clone(), e.struck.clone()), (vec![7, 3, 2], vec![5]));
        assert!(t.iter().any(|e| e.g == id("E6") && e.x == id("D4") && e.struck == vec![2]));
    }

    #[test]
    fn small_triples() {
        let v = screen(id("A3"), id("E6"), 2);
        assert_eq!(v.status, Status::RuledOut, "{:#?}", v.trail);
        assert!(v.is_sound());
        assert!(v.trail.iter().any(|t| t.levi.starts_with("A5") && t.factor.contains("L(0,1,0)")));
        let v = screen(id("G2"), id("E6"), 3);
        assert_eq!(v.status, Status::RuledOut, "{:#?}", v.trail);
    }
}
