//! Characteristic-p layer: Steinberg factorisation, Frobenius twists, the
//! Jantzen sum formula and a composition-factor oracle backed by data tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::charcalc::{dominant_multiplicities, dominant_weights_below, freudenthal_character, tensor_character, weyl_dim, Character, WeylCombination, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::rootcore::{build_root_system, pair, DotResult, RootSystemId, Series, System, Weight};

pub const DEFAULT_MAX_DEPTH: usize = 10;

const BUNDLED_TABLE: &str = include_str!("../data/decompositions.txt");

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Parse(format!("{p} is not a prime")))
    }
}

/// p-adic valuation of a positive integer.
pub fn valuation(mut n: i64, p: u64) -> u32 {
    let p = p as i64;
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_restricted(lambda: &Weight, p: u64) -> bool {
    lambda.0.iter().all(|&a| a >= 0 && (a as u64) < p)
}

/// `lambda = sum p^i lambda_i` with each `lambda_i` restricted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinbergFactorization {
    pub prime: u64,
    pub rank: usize,
    /// Non-zero restricted weights with their twist exponents, increasing in twist.
    pub factors: Vec<(Weight, u32)>,
}

impl SteinbergFactorization {
    pub fn restricted_part(&self) -> Weight {
        self.factors
            .iter()
            .find(|(_, t)| *t == 0)
            .map(|(w, _)| w.clone())
            .unwrap_or_else(|| Weight::zero(self.rank))
    }

    pub fn recompose(&self) -> Weight {
        let mut out = Weight::zero(self.rank);
        for (w, t) in &self.factors {
            out = out.add(&w.scale((self.prime as i64).pow(*t)));
        }
        out
    }

    /// Smallest twist exponent among the factors (0 for the zero weight).
    pub fn min_twist(&self) -> u32 {
        self.factors.first().map(|f| f.1).unwrap_or(0)
    }
}

impl fmt::Display for SteinbergFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "L{}", Weight::zero(self.rank));
        }
        for (i, (w, t)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " (x) ")?;
            }
            write!(f, "L{w}")?;
            if *t > 0 {
                write!(f, "^[{t}]")?;
            }
        }
        Ok(())
    }
}

pub fn steinberg_decompose(lambda: &Weight, p: u64) -> Result<SteinbergFactorization> {
    check_prime(p)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let mut rest = lambda.0.clone();
    let mut factors = Vec::new();
    let mut twist = 0;
    while rest.iter().any(|&a| a != 0) {
        let digit: Vec<i64> = rest.iter().map(|a| a % p as i64).collect();
        if digit.iter().any(|&a| a != 0) {
            factors.push((Weight(digit.clone()), twist));
        }
        rest = rest.iter().map(|a| a / p as i64).collect();
        twist += 1;
    }
    Ok(SteinbergFactorization { prime: p, rank: lambda.rank(), factors })
}

pub fn frobenius_twist_character(c: &Character, p: u64, n: u32) -> Character {
    c.adams((p as i64).pow(n))
}

/// Jantzen's sum formula `sum_{i>0} ch V(lambda)^i` as a Weyl combination.
pub fn jantzen_sum(sys: &System, lambda: &Weight, p: u64) -> Result<WeylCombination> {
    jantzen_sum_capped(sys, lambda, p, DEFAULT_CAP)
}

pub fn jantzen_sum_capped(sys: &System, lambda: &Weight, p: u64, cap: usize) -> Result<WeylCombination> {
    check_prime(p)?;
    if weyl_dim(sys, lambda)? > cap as u128 {
        return Err(Error::TooLarge(cap));
    }
    let shifted = lambda.add(&sys.rho());
    let pp = p as i64;
    let mut out = WeylCombination::empty(sys.clone());
    for beta in sys.positive_roots() {
        let a = pair(&shifted, &beta.coroot);
        let mut mp = pp;
        while mp < a {
            let reflected = lambda.sub(&beta.weight.scale(a - mp));
            if let DotResult::Regular { weight, odd } = sys.dot_dominant(&reflected) {
                let v = valuation(mp, p) as i64;
                out.add(weight, if odd { -v } else { v });
            }
            mp += pp;
        }
    }
    Ok(out)
}

pub fn weyl_module_is_irreducible(sys: &System, lambda: &Weight, p: u64) -> Result<bool> {
    Ok(jantzen_sum(sys, lambda, p)?.is_empty())
}

/// Composition factors of one Weyl module, with multiplicities.
pub type Factors = Vec<(Weight, u32)>;

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub factors: Factors,
    pub provenance: String,
}

/// Composition factors of Weyl modules keyed by (type, prime, highest weight).
#[derive(Clone, Debug, Default)]
pub struct DecompositionTable {
    entries: BTreeMap<(RootSystemId, u64, Weight), TableEntry>,
}

impl DecompositionTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLE).expect("bundled decomposition table parses")
    }

    /// Lines: `type rank p w1,..,wr f1:m1 f2:m2 ... [# provenance]`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = DecompositionTable::default();
        for (lineno, raw) in text.lines().enumerate() {
            let (body, comment) = match raw.find('#') {
                Some(i) => (&raw[..i], raw[i + 1..].trim()),
                None => (raw, ""),
            };
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Data(format!("decomposition table line {}: {what}", lineno + 1));
            if fields.len() < 5 {
                return Err(bad("too few fields"));
            }
            let id: RootSystemId = format!("{}{}", fields[0], fields[1]).parse().map_err(|_| bad("bad type"))?;
            let p: u64 = fields[2].parse().map_err(|_| bad("bad prime"))?;
            if !is_prime(p) {
                return Err(bad("not a prime"));
            }
            let lambda = Weight::parse_csv(fields[3]).map_err(|_| bad("bad weight"))?;
            if lambda.rank() != id.rank || !lambda.is_dominant() {
                return Err(bad("weight does not fit the type"));
            }
            let mut factors = Vec::new();
            for f in &fields[4..] {
                let (w, m) = f.split_once(':').ok_or_else(|| bad("factor needs weight:mult"))?;
                let w = Weight::parse_csv(w).map_err(|_| bad("bad factor weight"))?;
                let m: u32 = m.parse().map_err(|_| bad("bad multiplicity"))?;
                if w.rank() != id.rank || !w.is_dominant() || m == 0 {
                    return Err(bad("bad factor"));
                }
                factors.push((w, m));
            }
            if !factors.iter().any(|(w, m)| w == &lambda && *m == 1) {
                return Err(bad("L(lambda) must occur once"));
            }
            factors.sort_by(|a, b| b.0.cmp(&a.0));
            table.entries.insert((id, p, lambda), TableEntry { factors, provenance: comment.to_string() });
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, id: RootSystemId, p: u64, lambda: &Weight) -> Option<&TableEntry> {
        self.entries.get(&(id, p, lambda.clone()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(RootSystemId, u64, Weight), &TableEntry)> {
        self.entries.iter()
    }
}

/// Where a factor list came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorSource {
    Table,
    /// Jantzen sum vanishes.
    Irreducible,
    /// Radical read off the Jantzen sum when every simple multiplicity in it is 0 or 1.
    JantzenClosure,
    /// Non-restricted weight: character peeled with simple characters.
    Peeled,
    /// Restricted weight split into short and long parts (special isogeny).
    IsogenySplit,
}

/// `(B_n, 2)`, `(C_n, 2)`, `(F_4, 2)` and `(G_2, 3)`.
pub fn is_special_pair(id: RootSystemId, p: u64) -> bool {
    use crate::rootcore::Series;
    matches!((id.series, p), (Series::B, 2) | (Series::C, 2) | (Series::F, 2) | (Series::G, 3))
}

/// Split a restricted weight into its short-node and long-node parts when both are non-zero.
pub fn special_isogeny_split(sys: &System, p: u64, lambda: &Weight) -> Option<(Weight, Weight)> {
    let id = match sys.components() {
        [id] => *id,
        _ => return None,
    };
    if !is_special_pair(id, p) || !is_restricted(lambda, p) {
        return None;
    }
    let lens = sys.simple_root_lengths();
    let max = *lens.iter().max().unwrap();
    let short = Weight(lambda.0.iter().zip(lens).map(|(a, l)| if *l < max { *a } else { 0 }).collect());
    let long = lambda.sub(&short);
    if short.is_zero() || long.is_zero() {
        None
    } else {
        Some((short, long))
    }
}

type Key = (RootSystemId, u64, Weight);

/// Memoised composition-factor and simple-character oracle.
pub struct ModpOracle {
    table: DecompositionTable,
    pub max_depth: usize,
    pub cap: usize,
    factors: Mutex<HashMap<Key, (Arc<Factors>, FactorSource)>>,
    dominant_simple: Mutex<HashMap<Key, Arc<BTreeMap<Weight, i64>>>>,
    full_simple: Mutex<HashMap<Key, Arc<Character>>>,
}

impl ModpOracle {
    pub fn new(table: DecompositionTable) -> Self {
        ModpOracle {
            table,
            max_depth: DEFAULT_MAX_DEPTH,
            cap: DEFAULT_CAP,
            factors: Mutex::default(),
            dominant_simple: Mutex::default(),
            full_simple: Mutex::default(),
        }
    }

    pub fn table(&self) -> &DecompositionTable {
        &self.table
    }

    fn simple_id(sys: &System) -> Result<RootSystemId> {
        match sys.components() {
            [id] => Ok(*id),
            _ => Err(Error::Unsupported(format!("characteristic-p data for non-simple {}", sys.label()))),
        }
    }

    pub fn composition_factors(&self, sys: &System, lambda: &Weight, p: u64) -> Result<Factors> {
        Ok(self.composition_factors_with_source(sys, lambda, p)?.0.as_ref().clone())
    }

    pub fn composition_factors_with_source(&self, sys: &System, lambda: &Weight, p: u64) -> Result<(Arc<Factors>, FactorSource)> {
        check_prime(p)?;
        let id = Self::simple_id(sys)?;
        if !lambda.is_dominant() || lambda.rank() != id.rank {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        self.factors_inner(id, p, lambda, &mut Vec::new())
    }

    fn factors_inner(&self, id: RootSystemId, p: u64, lambda: &Weight, stack: &mut Vec<Weight>) -> Result<(Arc<Factors>, FactorSource)> {
        let key = (id, p, lambda.clone());
        if let Some(hit) = self.factors.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        if stack.contains(lambda) {
            return Err(Error::Internal(format!("cycle in composition factors of {id} V{lambda} at p={p}")));
        }
        if stack.len() >= self.max_depth {
            return Err(Error::Unknown(format!("recursion depth limit reached resolving {id} V{lambda} at p={p}")));
        }
        stack.push(lambda.clone());
        let result = self.compute_factors(id, p, lambda, stack);
        stack.pop();
        let (factors, source) = result?;
        let value = (Arc::new(factors), source);
        self.factors.lock().unwrap().insert(key, value.clone());
        Ok(value)
    }

    fn compute_factors(&self, id: RootSystemId, p: u64, lambda: &Weight, stack: &mut Vec<Weight>) -> Result<(Factors, FactorSource)> {
        if let Some(e) = self.table.get(id, p, lambda) {
            return Ok((e.factors.clone(), FactorSource::Table));
        }
        let sys = build_root_system(id);
        if !is_restricted(lambda, p) {
            let dom = dominant_multiplicities(&sys, lambda)?;
            let f = self.peel(id, p, &dom, stack)?;
            return Ok((f, FactorSource::Peeled));
        }
        if let Some((short, long)) = special_isogeny_split(&sys, p, lambda) {
            // L(lambda) = L(short part) (x) L(long part) for the special isogenies.
            let a = self.simple_character_inner(id, p, &short, stack)?;
            let b = self.simple_character_inner(id, p, &long, stack)?;
            let top = tensor_character(&a, &b)?.dominant_part();
            let mut rest: BTreeMap<Weight, i64> = dominant_multiplicities(&sys, lambda)?.as_ref().clone();
            for (mu, m) in &top {
                *rest.entry(mu.clone()).or_insert(0) -= m;
            }
            let mut f = self.peel(id, p, &rest, stack)?;
            f.push((lambda.clone(), 1));
            f.sort_by(|a, b| b.0.cmp(&a.0));
            return Ok((f, FactorSource::IsogenySplit));
        }
        let js = jantzen_sum_capped(&sys, lambda, p, self.cap)?;
        if js.is_empty() {
            return Ok((vec![(lambda.clone(), 1)], FactorSource::Irreducible));
        }
        let d = self.jantzen_in_simples(id, p, &js, stack)?;
        if let Some((nu, c)) = d.iter().find(|(_, c)| **c < 0) {
            return Err(Error::Internal(format!("negative coefficient {c} at L{nu} in Jantzen sum of {id} V{lambda}, p={p}")));
        }
        if let Some((nu, c)) = d.iter().find(|(_, c)| **c > 1) {
            return Err(Error::Unknown(format!(
                "composition factors of {id} V{lambda} at p={p}: Jantzen sum has coefficient {c} at L{nu}; needs a table entry"
            )));
        }
        let mut f: Factors = vec![(lambda.clone(), 1)];
        f.extend(d.into_keys().map(|w| (w, 1)));
        f.sort_by(|a, b| b.0.cmp(&a.0));
        Ok((f, FactorSource::JantzenClosure))
    }

    /// Jantzen sum of `V(lambda)` rewritten in the basis of simple characters.
    pub fn jantzen_simple_coefficients(&self, sys: &System, lambda: &Weight, p: u64) -> Result<BTreeMap<Weight, i64>> {
        let id = Self::simple_id(sys)?;
        let js = jantzen_sum_capped(sys, lambda, p, self.cap)?;
        self.jantzen_in_simples(id, p, &js, &mut vec![lambda.clone()])
    }

    fn jantzen_in_simples(&self, id: RootSystemId, p: u64, js: &WeylCombination, stack: &mut Vec<Weight>) -> Result<BTreeMap<Weight, i64>> {
        let mut d: BTreeMap<Weight, i64> = BTreeMap::new();
        for (mu, c) in &js.terms {
            let (fs, _) = self.factors_inner(id, p, mu, stack)?;
            for (nu, m) in fs.iter() {
                *d.entry(nu.clone()).or_insert(0) += c * *m as i64;
            }
        }
        d.retain(|_, c| *c != 0);
        Ok(d)
    }

    /// Strip simple characters off the top of a dominant multiplicity map.
    fn peel(&self, id: RootSystemId, p: u64, dom: &BTreeMap<Weight, i64>, stack: &mut Vec<Weight>) -> Result<Factors> {
        let sys = build_root_system(id);
        let mut residual = dom.clone();
        residual.retain(|_, m| *m != 0);
        let mut out: Factors = Vec::new();
        while !residual.is_empty() {
            let keys: Vec<&Weight> = residual.keys().collect();
            let top = keys
                .iter()
                .filter(|w| !keys.iter().any(|v| v != *w && sys.dominance_leq(w, v)))
                .max()
                .map(|w| (*w).clone())
                .unwrap();
            let k = residual[&top];
            if k < 0 {
                return Err(Error::Internal(format!("negative residual at {top} while peeling {id} at p={p}")));
            }
            let simple = self.simple_dominant_inner(id, p, &top, stack)?;
            for (mu, m) in simple.iter() {
                let e = residual.entry(mu.clone()).or_insert(0);
                *e -= k * m;
                if *e == 0 {
                    residual.remove(mu);
                }
            }
            out.push((top, k as u32));
        }
        out.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(out)
    }

    /// Dominant multiplicities of `L(lambda)`.
    pub fn simple_dominant(&self, sys: &System, lambda: &Weight, p: u64) -> Result<Arc<BTreeMap<Weight, i64>>> {
        check_prime(p)?;
        let id = Self::simple_id(sys)?;
        self.simple_dominant_inner(id, p, lambda, &mut Vec::new())
    }

    fn simple_dominant_inner(&self, id: RootSystemId, p: u64, lambda: &Weight, stack: &mut Vec<Weight>) -> Result<Arc<BTreeMap<Weight, i64>>> {
        let key = (id, p, lambda.clone());
        if let Some(hit) = self.dominant_simple.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let sys = build_root_system(id);
        let result = if is_restricted(lambda, p) {
            let mut dom: BTreeMap<Weight, i64> = dominant_multiplicities(&sys, lambda)?.as_ref().clone();
            let (fs, _) = self.factors_inner(id, p, lambda, stack)?;
            for (nu, m) in fs.iter() {
                if nu == lambda {
                    continue;
                }
                let lower = self.simple_dominant_inner(id, p, nu, stack)?;
                for (mu, k) in lower.iter() {
                    *dom.entry(mu.clone()).or_insert(0) -= *m as i64 * k;
                }
            }
            dom.retain(|_, m| *m != 0);
            if dom.values().any(|&m| m < 0) {
                return Err(Error::Internal(format!("negative simple multiplicity for {id} L{lambda}, p={p}")));
            }
            dom
        } else {
            self.simple_character_inner(id, p, lambda, stack)?.dominant_part()
        };
        let result = Arc::new(result);
        self.dominant_simple.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// Full character of `L(lambda)`.
    pub fn simple_character(&self, sys: &System, lambda: &Weight, p: u64) -> Result<Arc<Character>> {
        check_prime(p)?;
        let id = Self::simple_id(sys)?;
        self.simple_character_inner(id, p, lambda, &mut Vec::new())
    }

    fn simple_character_inner(&self, id: RootSystemId, p: u64, lambda: &Weight, stack: &mut Vec<Weight>) -> Result<Arc<Character>> {
        let key = (id, p, lambda.clone());
        if let Some(hit) = self.full_simple.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let sys = build_root_system(id);
        let st = steinberg_decompose(lambda, p)?;
        let mut out = Character::trivial(sys.clone());
        for (w, t) in &st.factors {
            let dom = self.simple_dominant_inner(id, p, w, stack)?;
            let mut restricted = Character::new(sys.clone());
            for (mu, m) in dom.iter() {
                for v in sys.orbit(mu) {
                    restricted.add_weight(v, *m);
                }
            }
            out = tensor_character(&out, &frobenius_twist_character(&restricted, p, *t))?;
        }
        let out = Arc::new(out);
        self.full_simple.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `dim L(lambda)`.
    pub fn simple_dim(&self, sys: &System, lambda: &Weight, p: u64) -> Result<u128> {
        check_prime(p)?;
        let id = Self::simple_id(sys)?;
        let st = steinberg_decompose(lambda, p)?;
        let mut total: u128 = 1;
        for (w, _) in &st.factors {
            let d = self.restricted_dim(id, p, w, &mut Vec::new())?;
            total = total.checked_mul(d).ok_or_else(|| Error::Overflow(format!("dim L{lambda}")))?;
        }
        Ok(total)
    }

    fn restricted_dim(&self, id: RootSystemId, p: u64, lambda: &Weight, stack: &mut Vec<Weight>) -> Result<u128> {
        let sys = build_root_system(id);
        let (fs, _) = self.factors_inner(id, p, lambda, stack)?;
        let mut d = weyl_dim(&sys, lambda)? as i128;
        for (nu, m) in fs.iter() {
            if nu == lambda {
                continue;
            }
            let st = steinberg_decompose(nu, p)?;
            let mut lower: i128 = 1;
            for (w, _) in &st.factors {
                lower *= self.restricted_dim(id, p, w, stack)? as i128;
            }
            d -= *m as i128 * lower;
        }
        if d <= 0 {
            return Err(Error::Internal(format!("non-positive dimension for {id} L{lambda}, p={p}")));
        }
        Ok(d as u128)
    }

    /// Composition factors of a module given by its character.
    pub fn composition_factors_of_character(&self, ch: &Character, p: u64) -> Result<Factors> {
        check_prime(p)?;
        let id = Self::simple_id(ch.system())?;
        if !ch.is_effective() {
            return Err(Error::Mismatch("composition factors of a virtual character".into()));
        }
        self.peel(id, p, &ch.dominant_part(), &mut Vec::new())
    }

    /// Cheap lower bound for `dim L(lambda)`, a product over the Steinberg
    /// factors. For a restricted weight and a prime that is not special for the
    /// type, every dominant weight of the Weyl module occurs in the simple
    /// module (Premet), so the orbit sizes of all of them count; otherwise only
    /// the orbit of the highest weight does.
    pub fn simple_dim_lower_bound(sys: &System, lambda: &Weight, p: u64) -> Result<u128> {
        let st = steinberg_decompose(lambda, p)?;
        let all_weights = sys.components().len() == 1 && !special_prime(sys.components()[0], p);
        Ok(st
            .factors
            .iter()
            .map(|(w, _)| {
                if all_weights {
                    dominant_weights_below(sys, w).iter().map(|m| sys.orbit_size(m)).sum()
                } else {
                    sys.orbit_size(w)
                }
            })
            .product())
    }

    /// Check that every table entry with resolvable factors adds up to the Weyl dimension.
    pub fn validate_table(&self) -> Result<usize> {
        let mut checked = 0;
        for ((id, p, lambda), entry) in self.table.iter() {
            let sys = build_root_system(*id);
            let mut total: i128 = 0;
            let mut known = true;
            for (nu, m) in &entry.factors {
                match self.simple_dim(&sys, nu, *p) {
                    Ok(d) => total += d as i128 * *m as i128,
                    Err(e) if e.is_gap() => {
                        known = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if known {
                let w = weyl_dim(&sys, lambda)? as i128;
                if total != w {
                    return Err(Error::Data(format!(
                        "table entry {id} p={p} V{lambda}: factor dimensions sum to {total}, Weyl dimension is {w}"
                    )));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

/// Primes at which the simple modules can lose dominant weights.
fn special_prime(id: RootSystemId, p: u64) -> bool {
    match id.series {
        Series::B | Series::C | Series::F => p == 2,
        Series::G => p == 2 || p == 3,
        _ => false,
    }
}

/// Process-wide oracle; `EXCLIE_DATA_DIR/decompositions.txt` replaces the bundled table.
pub fn default_oracle() -> &'static ModpOracle {
    static ORACLE: OnceLock<ModpOracle> = OnceLock::new();
    ORACLE.get_or_init(|| {
        let table = std::env::var_os("EXCLIE_DATA_DIR")
            .map(|d| Path::new(&d).join("decompositions.txt"))
            .filter(|p| p.exists())
            .map(|p| DecompositionTable::load(&p).expect("decomposition table override"))
            .unwrap_or_else(DecompositionTable::bundled);
        ModpOracle::new(table)
    })
}

pub fn char_p_composition_factors(sys: &System, lambda: &Weight, p: u64) -> Result<Factors> {
    default_oracle().composition_factors(sys, lambda, p)
}

pub fn simple_dim_p(sys: &System, lambda: &Weight, p: u64) -> Result<u128> {
    default_oracle().simple_dim(sys, lambda, p)
}

/// Full character of `V(lambda)`, for pointwise comparisons.
pub fn weyl_character(sys: &System, lambda: &Weight) -> Result<Character> {
    freudenthal_character(sys, lambda)
}
