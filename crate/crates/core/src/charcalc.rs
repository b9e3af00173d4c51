//! Characteristic-zero characters: Weyl dimension, Freudenthal multiplicities,
//! tensor and exterior powers, and decomposition into Weyl characters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootcore::{pair, RootSystemId, System, Weight};

/// Default bound on the dimension of any character built by Freudenthal's formula.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Formal character. Multiplicities are signed so virtual characters
/// (Adams operations, Jantzen sums) share the same arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    system: System,
    mults: BTreeMap<Weight, i64>,
}

impl Character {
    pub fn new(system: System) -> Self {
        Character { system, mults: BTreeMap::new() }
    }

    pub fn from_map(system: System, mults: BTreeMap<Weight, i64>) -> Result<Self> {
        for w in mults.keys() {
            if w.rank() != system.rank() {
                return Err(Error::Mismatch(format!("weight {w} does not belong to {}", system.label())));
            }
        }
        let mut c = Character { system, mults };
        c.prune();
        Ok(c)
    }

    /// Character of the trivial module.
    pub fn trivial(system: System) -> Self {
        let mut c = Character::new(system.clone());
        c.mults.insert(Weight::zero(system.rank()), 1);
        c
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn mults(&self) -> &BTreeMap<Weight, i64> {
        &self.mults
    }

    pub fn mult(&self, w: &Weight) -> i64 {
        self.mults.get(w).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> i64 {
        self.mults.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.mults.is_empty()
    }

    /// All multiplicities non-negative.
    pub fn is_effective(&self) -> bool {
        self.mults.values().all(|&m| m > 0)
    }

    fn prune(&mut self) {
        self.mults.retain(|_, m| *m != 0);
    }

    pub fn add_weight(&mut self, w: Weight, m: i64) {
        *self.mults.entry(w).or_insert(0) += m;
        self.prune();
    }

    fn same_system(&self, other: &Character) -> Result<()> {
        if self.system.components() != other.system.components() {
            return Err(Error::Mismatch(format!(
                "characters of {} and {}",
                self.system.label(),
                other.system.label()
            )));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Character) -> Result<Character> {
        self.same_system(other)?;
        let mut out = self.clone();
        for (w, m) in &other.mults {
            *out.mults.entry(w.clone()).or_insert(0) += m;
        }
        out.prune();
        Ok(out)
    }

    pub fn minus(&self, other: &Character) -> Result<Character> {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, k: i64) -> Character {
        let mut out = self.clone();
        for m in out.mults.values_mut() {
            *m *= k;
        }
        out.prune();
        out
    }

    /// Adams operation: every weight multiplied by `k`.
    pub fn adams(&self, k: i64) -> Character {
        Character {
            system: self.system.clone(),
            mults: self.mults.iter().map(|(w, m)| (w.scale(k), *m)).collect(),
        }
    }

    /// Dominant weights with their multiplicities.
    pub fn dominant_part(&self) -> BTreeMap<Weight, i64> {
        self.mults.iter().filter(|(w, _)| w.is_dominant()).map(|(w, m)| (w.clone(), *m)).collect()
    }

    /// Dominant weights of positive multiplicity that are maximal in the dominance order.
    pub fn dominant_maximal(&self) -> Vec<Weight> {
        let dom: Vec<&Weight> = self.mults.iter().filter(|(w, m)| w.is_dominant() && **m > 0).map(|(w, _)| w).collect();
        dom.iter()
            .filter(|w| !dom.iter().any(|v| v != *w && self.system.dominance_leq(w, v)))
            .map(|w| (*w).clone())
            .collect()
    }

    pub fn is_weyl_invariant(&self) -> bool {
        self.mults.iter().all(|(w, m)| (0..self.system.rank()).all(|i| self.mult(&self.system.reflect(w, i)) == *m))
    }

    pub fn dual(&self) -> Character {
        Character {
            system: self.system.clone(),
            mults: self.mults.iter().map(|(w, m)| (w.neg(), *m)).collect(),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, m) in &self.mults {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == 1 {
                write!(f, "e{w}")?;
            } else {
                write!(f, "{m}e{w}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer combination of Weyl characters, keyed by dominant highest weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylCombination {
    #[serde(skip)]
    pub system: Option<System>,
    pub terms: BTreeMap<Weight, i64>,
}

impl WeylCombination {
    pub fn empty(system: System) -> Self {
        WeylCombination { system: Some(system), terms: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, w: Weight, k: i64) {
        *self.terms.entry(w).or_insert(0) += k;
        self.terms.retain(|_, c| *c != 0);
    }

    /// Sum of `coefficient * weyl_dim`.
    pub fn dim(&self) -> Result<i128> {
        let sys = self.system.as_ref().ok_or_else(|| Error::Internal("combination without system".into()))?;
        let mut total = 0i128;
        for (w, c) in &self.terms {
            total += *c as i128 * weyl_dim(sys, w)? as i128;
        }
        Ok(total)
    }

    /// Rebuild the character `sum terms * ch V(weight)`.
    pub fn to_character(&self, cap: usize) -> Result<Character> {
        let sys = self.system.clone().ok_or_else(|| Error::Internal("combination without system".into()))?;
        let mut out = Character::new(sys.clone());
        for (w, c) in &self.terms {
            let ch = freudenthal_character_capped(&sys, w, cap)?;
            for (v, m) in ch.mults() {
                *out.mults.entry(v.clone()).or_insert(0) += c * m;
            }
        }
        out.prune();
        Ok(out)
    }
}

impl fmt::Display for WeylCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " {} ", if *c < 0 { '-' } else { '+' })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            first = false;
            if c.abs() == 1 {
                write!(f, "V{w}")?;
            } else {
                write!(f, "{}V{w}", c.abs())?;
            }
        }
        Ok(())
    }
}

fn require_dominant(sys: &System, lambda: &Weight) -> Result<()> {
    if lambda.rank() != sys.rank() {
        return Err(Error::Mismatch(format!("weight {lambda} for {} of rank {}", sys.label(), sys.rank())));
    }
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// Weyl's dimension formula in exact integer arithmetic.
pub fn weyl_dim(sys: &System, lambda: &Weight) -> Result<u128> {
    require_dominant(sys, lambda)?;
    let rho = sys.rho();
    let shifted = lambda.add(&rho);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for beta in sys.positive_roots() {
        let a = pair(&shifted, &beta.coroot) as u128;
        let b = pair(&rho, &beta.coroot) as u128;
        let g = a.gcd(&den);
        let (a, d) = (a / g, den / g);
        let g2 = num.gcd(&b);
        let (n, b) = (num / g2, b / g2);
        num = n.checked_mul(a).ok_or_else(|| Error::Overflow(format!("Weyl dimension of {lambda}")))?;
        den = d.checked_mul(b).ok_or_else(|| Error::Overflow(format!("Weyl dimension of {lambda}")))?;
    }
    if num % den != 0 {
        return Err(Error::Internal(format!("non-integral Weyl dimension for {lambda}")));
    }
    Ok(num / den)
}

pub fn weyl_dim_of(type_label: &str, lambda: &[i64]) -> Result<u128> {
    weyl_dim(&crate::rootcore::system(type_label)?, &Weight(lambda.to_vec()))
}

type DomCache = Mutex<HashMap<(Vec<RootSystemId>, Weight), Arc<BTreeMap<Weight, i64>>>>;

fn dom_cache() -> &'static DomCache {
    static CACHE: OnceLock<DomCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Dominant weights `mu <= lambda`, sorted by depth below `lambda`.
pub fn dominant_weights_below(sys: &System, lambda: &Weight) -> Vec<Weight> {
    let mut depth: HashMap<Weight, i64> = HashMap::new();
    depth.insert(lambda.clone(), 0);
    let mut frontier = vec![lambda.clone()];
    while let Some(mu) = frontier.pop() {
        for beta in sys.positive_roots() {
            let nu = mu.sub(&beta.weight);
            if !nu.is_dominant() || depth.contains_key(&nu) {
                continue;
            }
            if let Some(d) = sys.depth_below(&nu, lambda) {
                depth.insert(nu.clone(), d);
                frontier.push(nu);
            }
        }
    }
    let mut out: Vec<(i64, Weight)> = depth.into_iter().map(|(w, d)| (d, w)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    out.into_iter().map(|(_, w)| w).collect()
}

/// Multiplicities of the dominant weights of `V(lambda)` via Freudenthal's recursion.
pub fn dominant_multiplicities(sys: &System, lambda: &Weight) -> Result<Arc<BTreeMap<Weight, i64>>> {
    require_dominant(sys, lambda)?;
    let key = (sys.components().to_vec(), lambda.clone());
    if let Some(hit) = dom_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let rho = sys.rho();
    let lr = lambda.add(&rho);
    let top = sys.form(&lr, &lr) as i128;
    let mut mults: HashMap<Weight, i64> = HashMap::new();
    for mu in dominant_weights_below(sys, lambda) {
        if &mu == lambda {
            mults.insert(mu, 1);
            continue;
        }
        let mr = mu.add(&rho);
        let denom = top - sys.form(&mr, &mr) as i128;
        let mut numer: i128 = 0;
        for beta in sys.positive_roots() {
            let mut k = 1;
            loop {
                let nu = mu.add(&beta.weight.scale(k));
                let (dom, _) = sys.dominant_representative(&nu);
                let m = match mults.get(&dom) {
                    Some(&m) => m,
                    None => break,
                };
                numer += m as i128 * sys.form(&nu, &beta.weight) as i128;
                k += 1;
            }
        }
        numer *= 2;
        if denom <= 0 || numer % denom != 0 {
            return Err(Error::Internal(format!("Freudenthal recursion failed at {mu} below {lambda}")));
        }
        let m = (numer / denom) as i64;
        if m > 0 {
            mults.insert(mu, m);
        }
    }
    let result: Arc<BTreeMap<Weight, i64>> = Arc::new(mults.into_iter().collect());
    dom_cache().lock().unwrap().insert(key, result.clone());
    Ok(result)
}

pub fn freudenthal_character(sys: &System, lambda: &Weight) -> Result<Character> {
    freudenthal_character_capped(sys, lambda, DEFAULT_CAP)
}

/// Full character of `V(lambda)`; refuses if the dimension exceeds `cap`.
pub fn freudenthal_character_capped(sys: &System, lambda: &Weight, cap: usize) -> Result<Character> {
    let d = weyl_dim(sys, lambda)?;
    if d > cap as u128 {
        return Err(Error::TooLarge(cap));
    }
    let dom = dominant_multiplicities(sys, lambda)?;
    let mut mults = BTreeMap::new();
    for (mu, m) in dom.iter() {
        for w in sys.orbit(mu) {
            mults.insert(w, *m);
        }
    }
    Ok(Character { system: sys.clone(), mults })
}

pub fn tensor_character(c1: &Character, c2: &Character) -> Result<Character> {
    c1.same_system(c2)?;
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w1, m1) in &c1.mults {
        for (w2, m2) in &c2.mults {
            *out.entry(w1.add(w2)).or_insert(0) += m1 * m2;
        }
    }
    let mut c = Character { system: c1.system.clone(), mults: out };
    c.prune();
    Ok(c)
}

/// `r`-th exterior power via Newton's identities on Adams operations.
pub fn exterior_power_character(c: &Character, r: usize) -> Result<Character> {
    let dim = c.dim();
    if dim < 0 {
        return Err(Error::Mismatch("exterior power of a virtual character".into()));
    }
    if r as i64 > dim {
        return Ok(Character::new(c.system.clone()));
    }
    let mut e: Vec<Character> = vec![Character::trivial(c.system.clone())];
    let adams: Vec<Character> = (0..=r).map(|k| c.adams(k as i64)).collect();
    for k in 1..=r {
        let mut acc = Character::new(c.system.clone());
        for i in 1..=k {
            let term = tensor_character(&e[k - i], &adams[i])?;
            acc = if i % 2 == 1 { acc.plus(&term)? } else { acc.minus(&term)? };
        }
        for m in acc.mults.values_mut() {
            if *m % k as i64 != 0 {
                return Err(Error::Internal(format!("Newton identity not divisible at degree {k}")));
            }
            *m /= k as i64;
        }
        e.push(acc);
    }
    Ok(e.pop().unwrap())
}

/// Symmetric square `(c (x) c + psi^2 c) / 2`.
pub fn symmetric_square_character(c: &Character) -> Result<Character> {
    let sq = tensor_character(c, c)?.plus(&c.adams(2))?;
    let mut out = sq;
    for m in out.mults.values_mut() {
        *m /= 2;
    }
    Ok(out)
}

/// Strip Weyl characters off the top until nothing is left.
pub fn decompose_into_weyl(c: &Character) -> Result<WeylCombination> {
    if !c.is_weyl_invariant() {
        return Err(Error::NotWeylInvariant(c.system.label()));
    }
    let sys = c.system.clone();
    let mut residual = c.dominant_part();
    let mut out = WeylCombination::empty(sys.clone());
    while !residual.is_empty() {
        let keys: Vec<&Weight> = residual.keys().collect();
        let top = keys
            .iter()
            .filter(|w| !keys.iter().any(|v| v != *w && sys.dominance_leq(w, v)))
            .max()
            .map(|w| (*w).clone())
            .expect("non-empty residual has a maximal element");
        let k = residual[&top];
        for (mu, m) in dominant_multiplicities(&sys, &top)?.iter() {
            let e = residual.entry(mu.clone()).or_insert(0);
            *e -= k * m;
            if *e == 0 {
                residual.remove(mu);
            }
        }
        out.add(top, k);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormType {
    NotSelfDual,
    Orthogonal,
    Symplectic,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::NotSelfDual => "not-self-dual",
            FormType::Orthogonal => "orthogonal",
            FormType::Symplectic => "symplectic",
        })
    }
}

/// Characteristic-zero type of the invariant form on `V(lambda)`.
pub fn form_type(sys: &System, lambda: &Weight) -> Result<FormType> {
    require_dominant(sys, lambda)?;
    if &sys.minus_w0(lambda) != lambda {
        return Ok(FormType::NotSelfDual);
    }
    let two_rho_check: i64 = sys.positive_roots().iter().map(|b| pair(lambda, &b.coroot)).sum();
    Ok(if two_rho_check % 2 == 0 { FormType::Orthogonal } else { FormType::Symplectic })
}
