//! Subsystem and Levi subgroups, restriction of characters along maps of
//! maximal tori, and enumeration of candidate irreducible embeddings of a
//! simple group into classical and exceptional groups.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::charcalc::{decompose_into_weyl, form_type, freudenthal_character_capped, tensor_character, Character, FormType, DEFAULT_CAP};
use crate::h1data::{branching_rule, default_h1_table, h1_status, levi_containing, max_subgroups, BranchingRule, H1Status, MaxSubgroupEntry, MaxSubgroupKind};
use crate::modp::{is_special_pair, steinberg_decompose, ModpOracle};
use crate::rootcore::{build_product, build_root_system, identify_subsystem, RootSystem, RootSystemId, Series, System, Weight};
use crate::{Error, Result};

/// A subsystem given by simple roots in ambient simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsystemDatum {
    pub ambient: RootSystemId,
    /// Simple roots, components concatenated, each in Bourbaki order.
    pub roots: Vec<Vec<i64>>,
    pub components: Vec<RootSystemId>,
    /// Component labels; a `~` prefix marks a component of short roots.
    pub labels: Vec<String>,
    pub special_isogeny: bool,
}

impl SubsystemDatum {
    pub fn from_roots(ambient: &System, roots: &[Vec<i64>], special_isogeny: bool) -> SubsystemDatum {
        let comps = identify_subsystem(ambient, roots);
        let mut ordered = Vec::with_capacity(roots.len());
        for c in &comps {
            ordered.extend(c.order.iter().map(|&i| roots[i].clone()));
        }
        SubsystemDatum {
            ambient: ambient.components()[0],
            roots: ordered,
            components: comps.iter().map(|c| c.id).collect(),
            labels: comps.iter().map(|c| c.label()).collect(),
            special_isogeny,
        }
    }

    /// The whole root system as a subsystem of itself.
    pub fn full(ambient: RootSystemId) -> SubsystemDatum {
        let sys = build_root_system(ambient);
        let roots: Vec<Vec<i64>> = (0..ambient.rank).map(|i| unit(ambient.rank, i)).collect();
        SubsystemDatum::from_roots(&sys, &roots, false)
    }

    pub fn label(&self) -> String {
        if self.labels.is_empty() {
            "T".into()
        } else {
            self.labels.concat()
        }
    }

    pub fn system(&self) -> System {
        build_product(&self.components)
    }

    fn ambient_system(&self) -> System {
        build_root_system(self.ambient)
    }

    /// Simple coroots of the subsystem in ambient simple-coroot coordinates.
    pub fn coroots(&self) -> Vec<Vec<i64>> {
        let amb = self.ambient_system();
        let lens = amb.simple_root_lengths();
        self.roots
            .iter()
            .map(|r| {
                let l = amb.length_of(r);
                r.iter().zip(lens).map(|(c, lk)| c * lk / l).collect()
            })
            .collect()
    }

    /// Restriction of ambient weights to the subsystem's torus.
    pub fn weight_map(&self) -> WeightMap {
        let coroots = self.coroots();
        let columns = (0..self.ambient.rank).map(|i| Weight(coroots.iter().map(|c| c[i]).collect())).collect();
        WeightMap { from: self.ambient_system(), to: self.system(), columns }
    }

    /// Positive roots of the subsystem in ambient coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let sub = self.system();
        sub.positive_roots()
            .iter()
            .map(|r| {
                let mut v = vec![0i64; self.ambient.rank];
                for (j, c) in r.coeffs.iter().enumerate() {
                    for (k, x) in self.roots[j].iter().enumerate() {
                        v[k] += c * x;
                    }
                }
                v
            })
            .collect()
    }

    /// Every generated vector is an ambient root, and sums of subsystem roots
    /// that are ambient roots stay in the subsystem.
    pub fn is_closed(&self) -> bool {
        let amb = self.ambient_system();
        let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
        for r in self.positive_roots() {
            if !amb.is_root(&r) && !amb.is_root(&neg(&r)) {
                return false;
            }
            all.insert(neg(&r));
            all.insert(r);
        }
        for a in &all {
            for b in &all {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if (amb.is_root(&s) || amb.is_root(&neg(&s))) && !all.contains(&s) {
                    return false;
                }
            }
        }
        true
    }

    /// Type label plus the set of positive ambient roots (up to sign).
    pub fn key(&self) -> (Vec<String>, Vec<Vec<i64>>) {
        let mut labels = self.labels.clone();
        labels.sort();
        let mut roots: Vec<Vec<i64>> = self.positive_roots().into_iter().map(|r| if is_positive(&r) { r } else { neg(&r) }).collect();
        roots.sort();
        (labels, roots)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

fn is_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Split a product label such as `A2~A2` into sorted component labels.
pub fn split_label(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if (ch == '~' || ch.is_ascii_alphabetic()) && !cur.is_empty() && cur.chars().last().is_some_and(|c| c.is_ascii_digit()) {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out.sort();
    out
}

/// One step down: delete a node from the extended diagram of one simple
/// factor, or delete a plain simple node.
pub fn borel_de_siebenthal_step(s: &SubsystemDatum) -> Vec<SubsystemDatum> {
    let amb = s.ambient_system();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |roots: Vec<Vec<i64>>, out: &mut Vec<SubsystemDatum>| {
        let d = SubsystemDatum::from_roots(&amb, &roots, s.special_isogeny);
        if seen.insert(d.key()) {
            out.push(d);
        }
    };
    let mut offset = 0;
    for comp in &s.components {
        let n = comp.rank;
        let comp_roots: Vec<Vec<i64>> = s.roots[offset..offset + n].to_vec();
        let others: Vec<Vec<i64>> = s.roots[..offset].iter().chain(&s.roots[offset + n..]).cloned().collect();
        let csys = build_root_system(*comp);
        let theta = csys.highest_root().expect("simple component").coeffs.clone();
        let mut lowest = vec![0i64; s.ambient.rank];
        for (j, c) in theta.iter().enumerate() {
            for (k, x) in comp_roots[j].iter().enumerate() {
                lowest[k] -= c * x;
            }
        }
        let mut extended = comp_roots.clone();
        extended.push(lowest);
        for del in 0..n {
            let mut roots = others.clone();
            roots.extend(extended.iter().enumerate().filter(|(i, _)| *i != del).map(|(_, r)| r.clone()));
            push(roots, &mut out);
            let mut plain = others.clone();
            plain.extend(comp_roots.iter().enumerate().filter(|(i, _)| *i != del).map(|(_, r)| r.clone()));
            push(plain, &mut out);
        }
        offset += n;
    }
    out
}

/// All subsystems reachable by repeated steps, up to `depth` steps.
pub fn subsystems_by_descent(ambient: RootSystemId, depth: usize) -> Vec<SubsystemDatum> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![SubsystemDatum::full(ambient)];
    let mut out = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for d in borel_de_siebenthal_step(s) {
                if seen.insert(d.key()) {
                    next.push(d.clone());
                    out.push(d);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Dual type with the permutation taking dual Bourbaki nodes to the
/// positions of the original simple coroots.
fn dual_type(id: RootSystemId) -> Option<(RootSystemId, Vec<usize>)> {
    let n = id.rank;
    let identity: Vec<usize> = (0..n).collect();
    let reversed: Vec<usize> = (0..n).rev().collect();
    match id.series {
        Series::B => Some((RootSystemId { series: Series::C, rank: n }, identity)),
        Series::C => Some((RootSystemId { series: Series::B, rank: n }, identity)),
        Series::F | Series::G => Some((id, reversed)),
        _ => None,
    }
}

/// Subsystems whose coroots form a closed subsystem of the dual root system
/// but which are not closed themselves. Only for the special pairs.
pub fn special_isogeny_subsystems(ambient: RootSystemId, p: u64) -> Vec<SubsystemDatum> {
    if !is_special_pair(ambient, p) {
        return Vec::new();
    }
    let (dual, perm) = dual_type(ambient).expect("special pairs have a dual type");
    let amb = build_root_system(ambient);
    let mut by_coroot: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for r in amb.positive_roots() {
        by_coroot.insert(r.coroot.clone(), r.coeffs.clone());
        by_coroot.insert(neg(&r.coroot), neg(&r.coeffs));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in subsystems_by_descent(dual, 3) {
        let roots: Option<Vec<Vec<i64>>> = d
            .roots
            .iter()
            .map(|v| {
                let mut u = vec![0i64; ambient.rank];
                for (k, x) in v.iter().enumerate() {
                    u[perm[k]] = *x;
                }
                by_coroot.get(&u).cloned()
            })
            .collect();
        let Some(roots) = roots else { continue };
        let s = SubsystemDatum::from_roots(&amb, &roots, true);
        if !s.is_closed() && seen.insert(s.key()) {
            out.push(s);
        }
    }
    out
}

/// A parabolic subgroup, recorded through its Levi nodes.
#[derive(Clone, Debug, Serialize)]
pub struct ParabolicDatum {
    pub ambient: RootSystemId,
    /// Zero-based simple nodes of the Levi factor.
    pub levi_nodes: Vec<usize>,
    pub levi: SubsystemDatum,
    /// Indices into the ambient positive roots.
    pub q_roots: Vec<usize>,
}

impl ParabolicDatum {
    pub fn new(ambient: RootSystemId, nodes: &[usize]) -> ParabolicDatum {
        let sys = build_root_system(ambient);
        let roots: Vec<Vec<i64>> = nodes.iter().map(|&i| unit(ambient.rank, i)).collect();
        let levi = SubsystemDatum::from_roots(&sys, &roots, false);
        let q_roots = sys
            .positive_roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.coeffs.iter().enumerate().any(|(i, c)| *c != 0 && !nodes.contains(&i)))
            .map(|(i, _)| i)
            .collect();
        ParabolicDatum { ambient, levi_nodes: nodes.to_vec(), levi, q_roots }
    }

    pub fn levi_type(&self) -> String {
        self.levi.label()
    }

    /// One-based node list, e.g. `{1,3,4}`.
    pub fn node_label(&self) -> String {
        let s: Vec<String> = self.levi_nodes.iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", s.join(","))
    }
}

/// One datum per subset of simple nodes, ordered by size then lexicographically.
pub fn levi_subgroups(ambient: RootSystemId) -> Vec<ParabolicDatum> {
    let n = ambient.rank;
    let mut subsets: Vec<Vec<usize>> = (0u32..(1 << n)).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect()).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    subsets.iter().map(|s| ParabolicDatum::new(ambient, s)).collect()
}

/// Restrict an ambient character to a subsystem.
pub fn restrict_character(c: &Character, s: &SubsystemDatum) -> Result<Character> {
    s.weight_map().restrict(c)
}

/// Linear map of weight lattices induced by a map of maximal tori:
/// `columns[i]` is the image of the i-th fundamental weight.
#[derive(Clone, Debug)]
pub struct WeightMap {
    pub from: System,
    pub to: System,
    pub columns: Vec<Weight>,
}

fn same_system(a: &System, b: &System) -> bool {
    std::sync::Arc::ptr_eq(a, b) || **a == **b
}

impl WeightMap {
    pub fn identity(sys: &System) -> WeightMap {
        let n = sys.rank();
        WeightMap { from: sys.clone(), to: sys.clone(), columns: (0..n).map(|i| Weight::fundamental(n, i)).collect() }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let mut out = Weight::zero(self.to.rank());
        for (c, col) in w.0.iter().zip(&self.columns) {
            if *c != 0 {
                out = out.add(&col.scale(*c));
            }
        }
        out
    }

    pub fn restrict(&self, c: &Character) -> Result<Character> {
        if !same_system(c.system(), &self.from) {
            return Err(Error::Mismatch(format!("character of {} restricted along a map from {}", c.system().label(), self.from.label())));
        }
        let mut mults = BTreeMap::new();
        for (w, m) in c.mults() {
            *mults.entry(self.apply(w)).or_insert(0) += m;
        }
        Character::from_map(self.to.clone(), mults)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &WeightMap) -> WeightMap {
        WeightMap { from: self.from.clone(), to: next.to.clone(), columns: self.columns.iter().map(|c| next.apply(c)).collect() }
    }

    /// Compose with the Frobenius map `r` times.
    pub fn twisted(&self, p: u64, r: u32) -> WeightMap {
        let k = (p as i64).pow(r);
        WeightMap { from: self.from.clone(), to: self.to.clone(), columns: self.columns.iter().map(|c| c.scale(k)).collect() }
    }
}

/// Restriction of characters from a group to a subgroup.
#[derive(Clone, Debug)]
pub enum Restrictor {
    Map(WeightMap),
    /// Tabulated branching of Weyl characters.
    Branching { from: System, to: System, rule: &'static BranchingRule },
    Chain(Vec<Restrictor>),
    /// `from` is a product; the subgroup maps diagonally, `parts[i]` going
    /// from the i-th simple factor.
    Diagonal { from: System, to: System, parts: Vec<Restrictor> },
}

impl Restrictor {
    pub fn source(&self) -> &System {
        match self {
            Restrictor::Map(m) => &m.from,
            Restrictor::Branching { from, .. } | Restrictor::Diagonal { from, .. } => from,
            Restrictor::Chain(v) => v[0].source(),
        }
    }

    pub fn target(&self) -> &System {
        match self {
            Restrictor::Map(m) => &m.to,
            Restrictor::Branching { to, .. } | Restrictor::Diagonal { to, .. } => to,
            Restrictor::Chain(v) => v.last().unwrap().target(),
        }
    }

    /// Collapse to a single linear map when every step is linear.
    pub fn as_map(&self) -> Option<WeightMap> {
        match self {
            Restrictor::Map(m) => Some(m.clone()),
            Restrictor::Branching { .. } => None,
            Restrictor::Chain(v) => {
                let mut acc = v[0].as_map()?;
                for r in &v[1..] {
                    acc = acc.then(&r.as_map()?);
                }
                Some(acc)
            }
            Restrictor::Diagonal { from, to, parts } => {
                let mut columns = Vec::with_capacity(from.rank());
                for part in parts {
                    columns.extend(part.as_map()?.columns);
                }
                Some(WeightMap { from: from.clone(), to: to.clone(), columns })
            }
        }
    }

    pub fn restrict(&self, c: &Character) -> Result<Character> {
        if let Some(m) = self.as_map() {
            return m.restrict(c);
        }
        match self {
            Restrictor::Chain(v) => v.iter().try_fold(c.clone(), |acc, r| r.restrict(&acc)),
            _ => {
                let comb = decompose_into_weyl(c)?;
                let mut out = Character::new(self.target().clone());
                for (w, k) in &comb.terms {
                    out = out.plus(&self.restrict_weyl(w)?.scaled(*k))?;
                }
                Ok(out)
            }
        }
    }

    /// Restriction of the Weyl character `ch V(w)` of the source.
    pub fn restrict_weyl(&self, w: &Weight) -> Result<Character> {
        match self {
            Restrictor::Map(m) => m.restrict(&freudenthal_character_capped(&m.from, w, DEFAULT_CAP)?),
            Restrictor::Branching { to, rule, .. } => {
                if w.is_zero() {
                    return Ok(Character::trivial(to.clone()));
                }
                let comb = rule
                    .rules
                    .get(w)
                    .ok_or_else(|| Error::Unknown(format!("no branching data for V{w} of {} to {}", rule.ambient, rule.subgroup)))?;
                comb.to_character(DEFAULT_CAP)
            }
            Restrictor::Chain(v) => {
                let first = v[0].restrict_weyl(w)?;
                v[1..].iter().try_fold(first, |acc, r| r.restrict(&acc))
            }
            Restrictor::Diagonal { from, to, parts } => {
                let mut acc = Character::trivial(to.clone());
                for (i, part) in parts.iter().enumerate() {
                    let off = from.offsets()[i];
                    let n = part.source().rank();
                    let piece = part.restrict_weyl(&Weight(w.0[off..off + n].to_vec()))?;
                    acc = tensor_character(&acc, &piece)?;
                }
                Ok(acc)
            }
        }
    }

    /// Compose with the Frobenius map `r` times on the target.
    pub fn twisted(self, p: u64, r: u32) -> Restrictor {
        if r == 0 {
            return self;
        }
        match self {
            Restrictor::Map(m) => Restrictor::Map(m.twisted(p, r)),
            other => {
                let to = other.target().clone();
                Restrictor::Chain(vec![other, Restrictor::Map(WeightMap::identity(&to).twisted(p, r))])
            }
        }
    }
}

/// An irreducible summand `L(weight)` of a natural module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Piece {
    pub weight: Weight,
    /// Steinberg factors (restricted weight, twist).
    pub factors: Vec<(Weight, u32)>,
    pub dim: u128,
}

impl Piece {
    fn new(weight: Weight, p: u64, dim: u128) -> Result<Piece> {
        let factors = if weight.is_zero() { Vec::new() } else { steinberg_decompose(&weight, p)?.factors };
        Ok(Piece { weight, factors, dim })
    }

    pub fn min_twist(&self) -> u32 {
        self.factors.iter().map(|(_, t)| *t).min().unwrap_or(u32::MAX)
    }

    /// Restricted weight carried at twist 0 (zero if none).
    pub fn untwisted_part(&self, rank: usize) -> Weight {
        self.factors.iter().find(|(_, t)| *t == 0).map(|(w, _)| w.clone()).unwrap_or_else(|| Weight::zero(rank))
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "k");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(w, t)| if *t == 0 { format!("L{w}") } else { format!("L{w}^[{t}]") })
            .collect();
        write!(f, "{}", parts.join("(x)"))
    }
}

/// Candidate `G`-irreducible embedding of a simple group into a classical
/// group, given by the action on the natural module.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingDatum {
    pub source: RootSystemId,
    pub target: RootSystemId,
    pub p: u64,
    /// Orthogonal irreducible summands (the whole module for `A_n`).
    pub pieces: Vec<Piece>,
    /// `D_n`, `p = 2`: the block of dimension `dim W + 2` on which the
    /// subgroup acts through `B_{m-1}` with composition factors `W, k, k`.
    pub degenerate_block: Option<Piece>,
    pub notes: Vec<String>,
}

impl EmbeddingDatum {
    /// Defining weights with multiplicity.
    pub fn defining_weights(&self) -> Vec<(Weight, u32)> {
        let mut out: Vec<(Weight, u32)> = self.pieces.iter().map(|p| (p.weight.clone(), 1)).collect();
        if let Some(w) = &self.degenerate_block {
            out.push((w.weight.clone(), 1));
            out.push((Weight::zero(self.source.rank), 2));
        }
        out
    }

    pub fn natural_character(&self, oracle: &ModpOracle) -> Result<Character> {
        let sys = build_root_system(self.source);
        let mut out = Character::new(sys.clone());
        for (w, m) in self.defining_weights() {
            out = out.plus(&oracle.simple_character(&sys, &w, self.p)?.scaled(m as i64))?;
        }
        Ok(out)
    }

    pub fn dual(&self) -> EmbeddingDatum {
        let sys = build_root_system(self.source);
        let flip = |pc: &Piece| Piece {
            weight: sys.minus_w0(&pc.weight),
            factors: pc.factors.iter().map(|(w, t)| (sys.minus_w0(w), *t)).collect(),
            dim: pc.dim,
        };
        EmbeddingDatum {
            pieces: self.pieces.iter().map(flip).collect(),
            degenerate_block: self.degenerate_block.as_ref().map(flip),
            ..self.clone()
        }
    }

    pub fn is_self_dual(&self) -> bool {
        let d = self.dual();
        let mut a = self.pieces.clone();
        let mut b = d.pieces;
        a.sort();
        b.sort();
        a == b && self.degenerate_block == d.degenerate_block
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        if let Some(w) = &self.degenerate_block {
            parts.push(format!("[{w}|k|k]"));
        }
        format!("{} < {} via {}", self.source, self.target, parts.join(" + "))
    }

    /// Maps from the target's weight lattice to the source's. Two maps for
    /// `D_n` when they differ (the two half-spin labellings).
    pub fn weight_maps(&self, oracle: &ModpOracle) -> Result<Vec<WeightMap>> {
        let nat = self.natural_character(oracle)?;
        torus_maps(self.target, &nat)
    }
}

/// Maps from a classical group's weight lattice determined by the weights of
/// its natural module restricted to a subgroup.
pub fn torus_maps(target: RootSystemId, natural: &Character) -> Result<Vec<WeightMap>> {
    let to = natural.system().clone();
    let from = build_root_system(target);
    let n = target.rank;
    let mut weights: Vec<Weight> = Vec::new();
    for (w, m) in natural.mults() {
        if *m < 0 {
            return Err(Error::Internal("natural character has negative multiplicity".into()));
        }
        for _ in 0..*m {
            weights.push(w.clone());
        }
    }
    let expected = target.natural_dim().ok_or_else(|| Error::Unsupported(format!("{target} is not classical")))?;
    if weights.len() != expected {
        return Err(Error::Mismatch(format!("natural module of {target} has dimension {expected}, got {}", weights.len())));
    }
    let zero = Weight::zero(to.rank());
    let prefix = |eps: &[Weight], j: usize| eps[..j].iter().fold(zero.clone(), |a, e| a.add(e));
    let half = |w: Weight| -> Result<Weight> {
        if w.0.iter().any(|c| c % 2 != 0) {
            return Err(Error::Internal(format!("half-spin image {w} is not integral")));
        }
        Ok(Weight(w.0.iter().map(|c| c / 2).collect()))
    };
    if target.series == Series::A {
        let columns = (1..=n).map(|j| prefix(&weights, j)).collect();
        return Ok(vec![WeightMap { from, to, columns }]);
    }
    // Split into +/- pairs.
    let zeros = weights.iter().filter(|w| w.is_zero()).count();
    let mut eps: Vec<Weight> = weights.iter().filter(|w| !w.is_zero() && **w > w.neg()).cloned().collect();
    let negatives = weights.iter().filter(|w| !w.is_zero() && **w < w.neg()).count();
    if negatives != eps.len() {
        return Err(Error::Mismatch("natural module is not self-dual".into()));
    }
    let pairs_of_zero = if target.series == Series::B { zeros.saturating_sub(1) / 2 } else { zeros / 2 };
    eps.extend(std::iter::repeat(zero.clone()).take(pairs_of_zero));
    if eps.len() != n {
        return Err(Error::Mismatch(format!("could not split the natural module of {target} into {n} pairs")));
    }
    match target.series {
        Series::C => Ok(vec![WeightMap { from, to, columns: (1..=n).map(|j| prefix(&eps, j)).collect() }]),
        Series::B => {
            let mut columns: Vec<Weight> = (1..n).map(|j| prefix(&eps, j)).collect();
            columns.push(half(prefix(&eps, n))?);
            Ok(vec![WeightMap { from, to, columns }])
        }
        Series::D => {
            let mut maps = Vec::new();
            for flip in [false, true] {
                let mut e = eps.clone();
                if flip {
                    e[n - 1] = e[n - 1].neg();
                }
                let mut columns: Vec<Weight> = (1..=n - 2).map(|j| prefix(&e, j)).collect();
                columns.push(half(prefix(&e, n - 1).sub(&e[n - 1]))?);
                columns.push(half(prefix(&e, n))?);
                let m = WeightMap { from: from.clone(), to: to.clone(), columns };
                if !maps.iter().any(|x: &WeightMap| x.columns == m.columns) {
                    maps.push(m);
                }
            }
            Ok(maps)
        }
        _ => Err(Error::Unsupported(format!("{target} is not classical"))),
    }
}

/// Result of an embedding search; candidates whose dimension could not be
/// resolved are listed rather than dropped.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EmbeddingSearch {
    pub embeddings: Vec<EmbeddingDatum>,
    pub unresolved: Vec<String>,
}

/// Simple modules of dimension at most `cap`, with twists up to 2, not
/// including the trivial module.
pub fn small_simple_modules(oracle: &ModpOracle, x: RootSystemId, p: u64, cap: u128) -> Result<(Vec<Piece>, Vec<String>)> {
    let sys = build_root_system(x);
    let n = x.rank;
    let mut restricted: Vec<(Weight, u128)> = Vec::new();
    let mut unresolved = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut indicator = Weight::zero(n);
        for &i in &support {
            indicator.0[i] = 1;
        }
        if sys.orbit_size(&indicator) > cap {
            continue;
        }
        let mut coords = vec![1i64; support.len()];
        loop {
            let mut w = Weight::zero(n);
            for (k, &i) in support.iter().enumerate() {
                w.0[i] = coords[k];
            }
            let dim = match ModpOracle::simple_dim_lower_bound(&sys, &w, p) {
                Ok(b) if b > cap => Ok(b),
                _ => oracle.simple_dim(&sys, &w, p),
            };
            match dim {
                Ok(d) if d <= cap => restricted.push((w, d)),
                Ok(_) => {}
                Err(e) if e.is_gap() => unresolved.push(format!("dim L{w} of {x} at p={p}: {e}")),
                Err(e) => return Err(e),
            }
            let mut k = 0;
            loop {
                if k == coords.len() {
                    break;
                }
                coords[k] += 1;
                if coords[k] < p as i64 {
                    break;
                }
                coords[k] = 1;
                k += 1;
            }
            if k == coords.len() {
                break;
            }
        }
    }
    let mut out = Vec::new();
    let choices: Vec<Option<&(Weight, u128)>> = std::iter::once(None).chain(restricted.iter().map(Some)).collect();
    for a in &choices {
        for b in &choices {
            for c in &choices {
                let parts = [a, b, c];
                if parts.iter().all(|x| x.is_none()) {
                    continue;
                }
                let dim: u128 = parts.iter().map(|x| x.map_or(1, |(_, d)| *d)).product();
                if dim > cap {
                    continue;
                }
                let mut w = Weight::zero(n);
                for (t, part) in parts.iter().enumerate() {
                    if let Some((lam, _)) = part {
                        w = w.add(&lam.scale((p as i64).pow(t as u32)));
                    }
                }
                out.push(Piece::new(w, p, dim)?);
            }
        }
    }
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.weight.cmp(&b.weight)));
    Ok((out, unresolved))
}

/// Sign of the invariant form on a self-dual simple module in odd
/// characteristic.
fn piece_form(sys: &System, piece: &Piece) -> Result<FormType> {
    let mut symplectic = false;
    for (w, _) in &piece.factors {
        match form_type(sys, w)? {
            FormType::NotSelfDual => return Ok(FormType::NotSelfDual),
            FormType::Symplectic => symplectic = !symplectic,
            FormType::Orthogonal => {}
        }
    }
    Ok(if symplectic { FormType::Symplectic } else { FormType::Orthogonal })
}

/// In characteristic 2, whether a non-trivial self-dual simple module carries
/// an invariant quadratic form. A single twisted factor that is the natural
/// module of a symplectic group (including `B_n` through the special
/// isogeny and the 6-dimensional module of `G2`) does not.
fn orthogonal_in_char_two(x: RootSystemId, piece: &Piece) -> bool {
    if piece.factors.len() != 1 {
        return true;
    }
    let w = &piece.factors[0].0;
    let n = x.rank;
    let first = Weight::fundamental(n, 0);
    match x.series {
        Series::A if n == 1 => false,
        Series::B | Series::C => *w != first && !(n == 2 && *w == Weight::fundamental(2, 1)),
        Series::G => *w != first,
        _ => true,
    }
}

fn long_nodes(sys: &RootSystem) -> Vec<usize> {
    let max = sys.max_root_length();
    sys.simple_root_lengths().iter().enumerate().filter(|(_, l)| **l == max).map(|(i, _)| i).collect()
}

/// For `B_n`/`C_n` (`n >= 3`) at `p = 2`: every summand factors through the
/// special isogeny, so the image has the dual type.
fn factors_through_isogeny(x: RootSystemId, p: u64, pieces: &[&Piece]) -> bool {
    if p != 2 || !matches!(x.series, Series::B | Series::C) || x.rank < 3 {
        return false;
    }
    let sys = build_root_system(x);
    let long = long_nodes(&sys);
    pieces.iter().all(|pc| pc.untwisted_part(x.rank).0.iter().enumerate().all(|(i, c)| *c == 0 || long.contains(&i)))
}

/// Enumerate candidate irreducible embeddings of `X` into a classical group
/// through the constraints on the natural module. A-type results are
/// returned up to duality (the lexicographically smaller weight is kept).
pub fn irreducible_embeddings_classical(oracle: &ModpOracle, x: RootSystemId, target: RootSystemId, p: u64, dim_cap: u128) -> Result<EmbeddingSearch> {
    let nat = target.natural_dim().ok_or_else(|| Error::Unsupported(format!("{target} is not classical")))? as u128;
    if nat > dim_cap {
        return Err(Error::Mismatch(format!("natural module of {target} exceeds the cap {dim_cap}")));
    }
    if target.series == Series::B && p == 2 {
        return Err(Error::Unsupported("B_n targets at p=2; use the isogenous C_n".into()));
    }
    let sys = build_root_system(x);
    let (candidates, unresolved) = small_simple_modules(oracle, x, p, nat)?;
    let mut out = EmbeddingSearch { embeddings: Vec::new(), unresolved };
    let make = |pieces: Vec<Piece>, block: Option<Piece>, notes: Vec<String>| EmbeddingDatum { source: x, target, p, pieces, degenerate_block: block, notes };
    if target.series == Series::A {
        for c in candidates.iter().filter(|c| c.dim == nat && c.min_twist() == 0) {
            let dual = sys.minus_w0(&c.weight);
            if c.weight <= dual && !factors_through_isogeny(x, p, &[c]) {
                out.embeddings.push(make(vec![c.clone()], None, Vec::new()));
            }
        }
        return Ok(out);
    }
    let self_dual: Vec<Piece> = candidates.into_iter().filter(|c| sys.minus_w0(&c.weight) == c.weight).collect();
    let allowed: Vec<Piece> = match (target.series, p) {
        (_, 2) if target.series == Series::D => self_dual.iter().filter(|c| c.dim % 2 == 0 && orthogonal_in_char_two(x, c)).cloned().collect(),
        (_, 2) => self_dual.clone(),
        (Series::C, _) => {
            let mut v = Vec::new();
            for c in &self_dual {
                if piece_form(&sys, c)? == FormType::Symplectic {
                    v.push(c.clone());
                }
            }
            v
        }
        _ => {
            let mut v = Vec::new();
            for c in &self_dual {
                if piece_form(&sys, c)? == FormType::Orthogonal {
                    v.push(c.clone());
                }
            }
            v.push(Piece::new(Weight::zero(x.rank), p, 1)?);
            v
        }
    };
    let mut blocks: Vec<(Option<Piece>, u128, Vec<String>)> = vec![(None, 0, Vec::new())];
    if target.series == Series::D && p == 2 {
        let table = default_h1_table();
        for w in self_dual.iter().filter(|c| c.dim + 2 <= nat && c.dim >= 2) {
            match h1_status(oracle, table, &sys, p, &w.weight) {
                H1Status::Zero { .. } => {}
                H1Status::NonZero { .. } => blocks.push((Some(w.clone()), w.dim + 2, Vec::new())),
                H1Status::Unknown { reason } => blocks.push((Some(w.clone()), w.dim + 2, vec![format!("non-split block unverified: {reason}")])),
            }
        }
    }
    for (block, used, notes) in blocks {
        let mut chosen: Vec<usize> = Vec::new();
        subsets_with_sum(&allowed, nat - used, 0, &mut chosen, &mut |idx| {
            let pieces: Vec<Piece> = idx.iter().map(|&i| allowed[i].clone()).collect();
            let mut all: Vec<&Piece> = pieces.iter().collect();
            if let Some(b) = &block {
                all.push(b);
            }
            if all.iter().all(|pc| pc.weight.is_zero()) {
                return;
            }
            if all.iter().map(|pc| pc.min_twist()).min() != Some(0) {
                return;
            }
            // A non-split block is faithful on the kernel of the isogeny.
            if block.is_none() && factors_through_isogeny(x, p, &all) {
                return;
            }
            out.embeddings.push(make(pieces, block.clone(), notes.clone()));
        });
    }
    Ok(out)
}

fn subsets_with_sum(items: &[Piece], remaining: u128, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if remaining == 0 {
        f(chosen);
        return;
    }
    for i in start..items.len() {
        if items[i].dim <= remaining {
            chosen.push(i);
            subsets_with_sum(items, remaining - items[i].dim, i + 1, chosen, f);
            chosen.pop();
        }
    }
}

/// A way for `X` to sit in a group, with the restriction of characters.
#[derive(Clone, Debug)]
pub struct EmbeddingPath {
    pub description: String,
    pub restrictor: Restrictor,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct PathSearch {
    pub paths: Vec<EmbeddingPath>,
    pub unresolved: Vec<String>,
}

/// Maximum descent through maximal subgroups.
pub const MAX_CHAIN_DEPTH: usize = 3;

/// Embeddings of `X` into a simple group: classical groups through the
/// natural module (duals included), exceptional groups by descending through
/// the tabulated maximal subgroups.
pub fn embeddings_into(oracle: &ModpOracle, x: RootSystemId, target: RootSystemId, p: u64, depth: usize) -> Result<PathSearch> {
    embeddings_within(oracle, x, target, None, p, depth)
}

/// As `embeddings_into`, with `target` sitting inside `outer`: maximal
/// subgroups of `target` known to lie in a proper Levi of `outer` are skipped.
fn embeddings_within(oracle: &ModpOracle, x: RootSystemId, target: RootSystemId, outer: Option<RootSystemId>, p: u64, depth: usize) -> Result<PathSearch> {
    let xsys = build_root_system(x);
    let tsys = build_root_system(target);
    let mut out = PathSearch::default();
    if xsys.dimension() > tsys.dimension() {
        return Ok(out);
    }
    if target.is_classical() && !(target.series == Series::B && p == 2) {
        let search = irreducible_embeddings_classical(oracle, x, target, p, target.natural_dim().unwrap() as u128)?;
        out.unresolved = search.unresolved;
        for e in search.embeddings {
            let mut variants = vec![e.clone()];
            if target.series == Series::A && !e.is_self_dual() {
                variants.push(e.dual());
            }
            for v in variants {
                for m in v.weight_maps(oracle)? {
                    out.paths.push(EmbeddingPath { description: v.describe(), restrictor: Restrictor::Map(m), notes: v.notes.clone() });
                }
            }
        }
        return Ok(out);
    }
    if target == x {
        out.paths.push(EmbeddingPath { description: format!("{x} = {target}"), restrictor: Restrictor::Map(WeightMap::identity(&tsys)), notes: Vec::new() });
        return Ok(out);
    }
    if target.series == Series::B && p == 2 {
        // B_n and C_n have the same irreducible subgroups through the isogeny;
        // only the linear restriction to the C_n torus is recorded here.
        out.unresolved.push(format!("{x} in {target} at p=2 (through the special isogeny)"));
        return Ok(out);
    }
    if x.rank == 1 {
        out.unresolved.push(format!("A1 in {target}: maximal subgroups with A1 factors are not tabulated"));
        return Ok(out);
    }
    if depth >= MAX_CHAIN_DEPTH {
        out.unresolved.push(format!("{x} in {target}: descent depth limit"));
        return Ok(out);
    }
    for m in max_subgroups(target, p) {
        let msys = m.system();
        if outer.is_some_and(|o| levi_containing(o, target, &m.subgroup).is_some()) {
            continue;
        }
        if m.components.iter().any(|c| build_root_system(*c).dimension() < xsys.dimension()) {
            continue;
        }
        let down = match max_subgroup_restrictor(m, p) {
            Ok(r) => r,
            Err(e) if e.is_gap() => {
                out.unresolved.push(e.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut per_component = Vec::new();
        for c in &m.components {
            let sub = embeddings_within(oracle, x, *c, Some(target), p, depth + 1)?;
            out.unresolved.extend(sub.unresolved.into_iter().map(|u| format!("{target} > {}: {u}", m.subgroup)));
            per_component.push(sub.paths);
        }
        if per_component.iter().any(|v| v.is_empty()) {
            continue;
        }
        for combo in diagonal_combinations(&per_component, p) {
            let description = format!("{target} > {} > {x} [{}]", m.subgroup, combo.iter().map(|(e, r)| twist_label(&e.description, *r)).collect::<Vec<_>>().join("; "));
            let notes: Vec<String> = combo.iter().flat_map(|(e, _)| e.notes.clone()).collect();
            let tail = if combo.len() == 1 {
                combo[0].0.restrictor.clone().twisted(p, combo[0].1)
            } else {
                Restrictor::Diagonal {
                    from: msys.clone(),
                    to: xsys.clone(),
                    parts: combo.iter().map(|(e, r)| e.restrictor.clone().twisted(p, *r)).collect(),
                }
            };
            out.paths.push(EmbeddingPath { description, restrictor: Restrictor::Chain(vec![down.clone(), tail]), notes });
        }
    }
    Ok(out)
}

fn twist_label(s: &str, r: u32) -> String {
    if r == 0 {
        s.to_string()
    } else {
        format!("({s})^[{r}]")
    }
}

/// Choices of one path per factor together with relative twists in 0..=2
/// (at least one factor untwisted).
pub fn diagonal_combinations<'a>(per_factor: &'a [Vec<EmbeddingPath>], _p: u64) -> Vec<Vec<(&'a EmbeddingPath, u32)>> {
    let mut out: Vec<Vec<(&EmbeddingPath, u32)>> = vec![Vec::new()];
    let k = per_factor.len();
    for paths in per_factor {
        let twists: Vec<u32> = if k == 1 { vec![0] } else { vec![0, 1, 2] };
        let mut next = Vec::new();
        for prefix in &out {
            for e in paths {
                for &r in &twists {
                    let mut v = prefix.clone();
                    v.push((e, r));
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().any(|(_, r)| *r == 0));
    out
}

/// Restriction from an exceptional group to one of its tabulated maximal
/// subgroups.
pub fn max_subgroup_restrictor(m: &MaxSubgroupEntry, p: u64) -> Result<Restrictor> {
    let amb = build_root_system(m.ambient);
    let msys = m.system();
    match &m.kind {
        MaxSubgroupKind::Subsystem => {
            let s = find_subsystem(m.ambient, &m.subgroup, p)
                .ok_or_else(|| Error::Internal(format!("subsystem {} of {} not found", m.subgroup, m.ambient)))?;
            Ok(Restrictor::Map(s.weight_map()))
        }
        MaxSubgroupKind::Coroots(rows) => {
            let columns = (0..m.ambient.rank).map(|i| Weight(rows.iter().map(|r| r[i]).collect())).collect();
            Ok(Restrictor::Map(WeightMap { from: amb, to: msys, columns }))
        }
        MaxSubgroupKind::Data => {
            let rule = branching_rule(m.ambient, &m.subgroup, p)
                .ok_or_else(|| Error::Unknown(format!("no branching data from {} to {} at p={p}", m.ambient, m.subgroup)))?;
            Ok(Restrictor::Branching { from: amb, to: msys, rule })
        }
    }
}

/// Locate a subsystem of the given type (tilde for short roots) by descent,
/// including the special-isogeny ones at `p`.
pub fn find_subsystem(ambient: RootSystemId, label: &str, p: u64) -> Option<SubsystemDatum> {
    let want = split_label(label);
    subsystems_by_descent(ambient, 2)
        .into_iter()
        .chain(special_isogeny_subsystems(ambient, p))
        .find(|s| {
            let mut l = s.labels.clone();
            l.sort();
            l == want
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcalc::{exterior_power_character, weyl_dim};
    use crate::modp::default_oracle;
    use crate::rootcore::system;

    fn id(s: &str) -> RootSystemId {
        s.parse().unwrap()
    }

    fn labels(v: &[SubsystemDatum]) -> BTreeSet<String> {
        v.iter()
            .map(|s| {
                let mut l = s.labels.clone();
                l.sort();
                l.concat()
            })
            .collect()
    }

    #[test]
    fn maximal_rank_descent_reaches_tabulated_subsystems() {
        let e6 = labels(&borel_de_siebenthal_step(&SubsystemDatum::full(id("E6"))));
        assert!(e6.contains("A2A2A2"));
        let e7 = labels(&borel_de_siebenthal_step(&SubsystemDatum::full(id("E7"))));
        assert!(e7.contains("A7") && e7.contains("A2A5"));
        let f4 = labels(&borel_de_siebenthal_step(&SubsystemDatum::full(id("F4"))));
        assert!(f4.contains("B4") && f4.contains("A2~A2"));
        let g2 = labels(&borel_de_siebenthal_step(&SubsystemDatum::full(id("G2"))));
        assert!(g2.contains("A2"));
        for s in subsystems_by_descent(id("F4"), 2) {
            assert!(s.is_closed(), "{}", s.label());
        }
    }

    #[test]
    fn special_subsystems() {
        let f4 = labels(&special_isogeny_subsystems(id("F4"), 2));
        assert!(f4.contains("C4") && f4.contains("~D4"), "{f4:?}");
        let g2 = labels(&special_isogeny_subsystems(id("G2"), 3));
        assert!(g2.contains("~A2"), "{g2:?}");
        assert!(special_isogeny_subsystems(id("E6"), 2).is_empty());
        assert!(special_isogeny_subsystems(id("F4"), 3).is_empty());
        for s in special_isogeny_subsystems(id("F4"), 2) {
            assert!(s.special_isogeny && !s.is_closed());
        }
    }

    #[test]
    fn levis() {
        let e8 = levi_subgroups(id("E8"));
        assert_eq!(e8.len(), 256);
        let mut nonsimple: BTreeSet<String> = BTreeSet::new();
        for pd in &e8 {
            let l = &pd.levi;
            if l.components.len() > 1 && l.components.iter().all(|c| c.rank > 1) {
                nonsimple.insert(l.label());
            }
            let levi_pos = l.system().positive_roots().len();
            assert_eq!(pd.q_roots.len() + levi_pos, 120);
        }
        let expected: BTreeSet<String> = ["A2A2", "A2A3", "A2A4", "A3A3", "A3A4", "A2D4", "A2D5"].iter().map(|s| s.to_string()).collect();
        assert_eq!(nonsimple, expected);
        let e6: BTreeSet<String> = levi_subgroups(id("E6")).iter().map(|p| p.levi_type()).collect();
        assert!(e6.contains("A5") && e6.contains("D5"));
        assert_eq!(levi_subgroups(id("E6"))[0].q_roots.len(), 36);
    }

    #[test]
    fn restriction_to_levis() {
        let e6 = system("E6").unwrap();
        let v27 = freudenthal_character_capped(&e6, &Weight(vec![1, 0, 0, 0, 0, 0]), DEFAULT_CAP).unwrap();
        let d5 = levi_subgroups(id("E6")).into_iter().find(|p| p.levi_type() == "D5").unwrap();
        let r = restrict_character(&v27, &d5.levi).unwrap();
        assert_eq!(r.dim(), 27);
        let comb = decompose_into_weyl(&r).unwrap();
        let dims: BTreeSet<i128> = comb.terms.keys().map(|w| weyl_dim(r.system(), w).unwrap() as i128).collect();
        assert_eq!(dims, [1, 10, 16].into_iter().collect());
    }

    #[test]
    fn folding_to_f4() {
        let f4 = max_subgroups(id("E6"), 5).into_iter().find(|e| e.subgroup == "F4").unwrap();
        let r = max_subgroup_restrictor(f4, 5).unwrap();
        let ch = r.restrict_weyl(&Weight(vec![1, 0, 0, 0, 0, 0])).unwrap();
        let comb = decompose_into_weyl(&ch).unwrap();
        assert_eq!(comb.terms, [(Weight(vec![0, 0, 0, 1]), 1), (Weight(vec![0, 0, 0, 0]), 1)].into_iter().collect());
    }

    #[test]
    fn subsystem_restrictions_of_minuscule_modules() {
        // V56 of E7 on the A7 subsystem is the sum of the second and sixth
        // exterior powers; on A2A5 it has three summands.
        let a7 = max_subgroups(id("E7"), 5).into_iter().find(|e| e.subgroup == "A7").unwrap();
        let ch = max_subgroup_restrictor(a7, 5).unwrap().restrict_weyl(&Weight::fundamental(7, 6)).unwrap();
        let terms = decompose_into_weyl(&ch).unwrap().terms;
        let expected: BTreeMap<Weight, i64> = [(Weight::fundamental(7, 1), 1), (Weight::fundamental(7, 5), 1)].into_iter().collect();
        assert_eq!(terms, expected);
        let a2a5 = max_subgroups(id("E7"), 5).into_iter().find(|e| e.subgroup == "A2A5").unwrap();
        let ch = max_subgroup_restrictor(a2a5, 5).unwrap().restrict_weyl(&Weight::fundamental(7, 6)).unwrap();
        let mut dims: Vec<u128> = decompose_into_weyl(&ch).unwrap().terms.keys().map(|w| weyl_dim(ch.system(), w).unwrap()).collect();
        dims.sort();
        assert_eq!(dims, vec![18, 18, 20]);
    }

    #[test]
    fn classical_embedding_examples() {
        let o = default_oracle();
        let b2 = irreducible_embeddings_classical(o, id("B2"), id("D7"), 3, 14).unwrap();
        assert_eq!(b2.embeddings.len(), 1, "{:?}", b2.embeddings.iter().map(|e| e.describe()).collect::<Vec<_>>());
        assert_eq!(b2.embeddings[0].pieces[0].weight, Weight(vec![2, 0]));
        let a3 = irreducible_embeddings_classical(o, id("A3"), id("D5"), 2, 10).unwrap();
        assert!(a3.embeddings.is_empty(), "{:?}", a3.embeddings.iter().map(|e| e.describe()).collect::<Vec<_>>());
        let a2 = irreducible_embeddings_classical(o, id("A2"), id("A7"), 5, 8).unwrap();
        assert_eq!(a2.embeddings.len(), 1);
        assert_eq!(a2.embeddings[0].pieces[0].weight, Weight(vec![1, 1]));
        // D6 at p=2: the twisted pair of 6-dimensional modules.
        let a3d6 = irreducible_embeddings_classical(o, id("A3"), id("D6"), 2, 12).unwrap();
        assert!(a3d6.embeddings.iter().any(|e| e.pieces.iter().map(|p| p.weight.clone()).collect::<BTreeSet<_>>()
            == [Weight(vec![0, 1, 0]), Weight(vec![0, 2, 0])].into_iter().collect()));
        // B4 in D5 at p=2 through the non-split block L(1000)|k|k.
        let b4 = irreducible_embeddings_classical(o, id("B4"), id("D5"), 2, 10).unwrap();
        assert!(b4.embeddings.iter().any(|e| e.degenerate_block.as_ref().is_some_and(|w| w.weight == Weight(vec![1, 0, 0, 0]))));
        // C4 in D5 at p=2: the natural module has no H^1, so no block.
        let c4 = irreducible_embeddings_classical(o, id("C4"), id("D5"), 2, 10).unwrap();
        assert!(c4.embeddings.is_empty());
        // C3 natural module of dimension 8 factors through the isogeny.
        let c3 = irreducible_embeddings_classical(o, id("C3"), id("A7"), 2, 8).unwrap();
        assert!(c3.embeddings.is_empty());
        for e in a3d6.embeddings.iter().chain(&b2.embeddings) {
            assert_eq!(e.natural_character(o).unwrap().dim() as usize, e.target.natural_dim().unwrap());
        }
    }

    #[test]
    fn spin_restriction_for_twisted_pair() {
        let o = default_oracle();
        let a3d6 = irreducible_embeddings_classical(o, id("A3"), id("D6"), 2, 12).unwrap();
        let e = a3d6
            .embeddings
            .iter()
            .find(|e| e.pieces.iter().any(|p| p.weight == Weight(vec![0, 2, 0])) && e.pieces.len() == 2)
            .unwrap();
        let d6 = system("D6").unwrap();
        for m in e.weight_maps(o).unwrap() {
            let spin = m.restrict(&freudenthal_character_capped(&d6, &Weight::fundamental(6, 5), DEFAULT_CAP).unwrap()).unwrap();
            assert_eq!(spin.dim(), 32);
            let factors = o.composition_factors_of_character(&spin, 2).unwrap();
            let ws: BTreeSet<Weight> = factors.iter().map(|(w, _)| w.clone()).collect();
            // Half-spin of D3 x D3 in either pairing, the second factor twisted.
            let same: BTreeSet<Weight> = [Weight(vec![3, 0, 0]), Weight(vec![0, 0, 3])].into_iter().collect();
            let mixed: BTreeSet<Weight> = [Weight(vec![1, 0, 2]), Weight(vec![2, 0, 1])].into_iter().collect();
            assert!(ws == same || ws == mixed, "{ws:?}");
        }
    }

    #[test]
    fn exterior_cube_matches_levi_restriction() {
        // A5 natural restricted to C3 is the natural module; the third
        // exterior power has pieces (0,0,1) and (1,0,0).
        let c3 = system("C3").unwrap();
        let nat = freudenthal_character_capped(&c3, &Weight(vec![1, 0, 0]), DEFAULT_CAP).unwrap();
        let m = &torus_maps(id("A5"), &nat).unwrap()[0];
        let a5 = system("A5").unwrap();
        let l3 = freudenthal_character_capped(&a5, &Weight::fundamental(5, 2), DEFAULT_CAP).unwrap();
        let r = m.restrict(&l3).unwrap();
        assert_eq!(r, exterior_power_character(&nat, 3).unwrap());
        let keys: BTreeSet<Weight> = decompose_into_weyl(&r).unwrap().terms.keys().cloned().collect();
        assert_eq!(keys, [Weight(vec![0, 0, 1]), Weight(vec![1, 0, 0])].into_iter().collect());
    }

    #[test]
    fn descent_through_maximal_subgroups() {
        let o = default_oracle();
        let g2 = embeddings_into(o, id("G2"), id("E6"), 7, 0).unwrap();
        assert!(g2.paths.iter().any(|p| p.description.contains("F4 > G2")), "{:?}", g2.paths.iter().map(|p| &p.description).collect::<Vec<_>>());
        for path in &g2.paths {
            let ch = path.restrictor.restrict_weyl(&Weight::fundamental(6, 0)).unwrap();
            assert_eq!(ch.dim(), 27);
        }
        let a3 = embeddings_into(o, id("A3"), id("E6"), 2, 0).unwrap();
        assert!(a3.paths.is_empty(), "{:?}", a3.paths.iter().map(|p| &p.description).collect::<Vec<_>>());
        let c3 = embeddings_into(o, id("C3"), id("E7"), 2, 0).unwrap();
        assert!(c3.paths.is_empty(), "{:?}", c3.paths.iter().map(|p| &p.description).collect::<Vec<_>>());
    }
}
