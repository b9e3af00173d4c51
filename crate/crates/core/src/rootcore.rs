//! Root data, weights and Weyl-group combinatorics.
//!
//! Node numbering follows Bourbaki throughout:
//!
//! ```text
//! A_n   1 - 2 - ... - n
//! B_n   1 - 2 - ... - (n-1) => n        (n short)
//! C_n   1 - 2 - ... - (n-1) <= n        (n long)
//! D_n   1 - 2 - ... - (n-2) < n-1
//!                            \ n
//! E_n   1 - 3 - 4 - 5 - ... - n
//!               |
//!               2
//! F_4   1 - 2 => 3 - 4                  (3, 4 short)
//! G_2   1 <= 2                          (1 short)
//! ```
//!
//! Short roots have squared length 2, so long roots have squared length 4
//! (B, C, F) or 6 (G).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn from_char(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }

    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A simple Cartan type such as `E8` or `B2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct RootSystemId {
    pub series: Series,
    pub rank: usize,
}

impl From<RootSystemId> for String {
    fn from(id: RootSystemId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for RootSystemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl RootSystemId {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(RootSystemId { series, rank })
        } else {
            Err(Error::InvalidType(format!("{}{}", series.letter(), rank)))
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self.series, Series::E | Series::F | Series::G)
    }

    pub fn is_classical(&self) -> bool {
        !self.is_exceptional()
    }

    /// Dimension of the natural module for classical types.
    pub fn natural_dim(&self) -> Option<usize> {
        match self.series {
            Series::A => Some(self.rank + 1),
            Series::B => Some(2 * self.rank + 1),
            Series::C | Series::D => Some(2 * self.rank),
            _ => None,
        }
    }

    /// Squared lengths of the simple roots, in Bourbaki order.
    fn simple_lengths(&self) -> Vec<i64> {
        let n = self.rank;
        match self.series {
            Series::A | Series::D | Series::E => vec![2; n],
            Series::B => (0..n).map(|i| if i + 1 == n { 2 } else { 4 }).collect(),
            Series::C => (0..n).map(|i| if i + 1 == n { 4 } else { 2 }).collect(),
            Series::F => vec![4, 4, 2, 2],
            Series::G => vec![2, 6],
        }
    }

    /// Edges of the Dynkin diagram (0-based node indices).
    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.series {
            Series::A | Series::B | Series::C | Series::F | Series::G => {
                (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
            }
            Series::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Series::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }

    /// Number of positive roots, from the closed forms.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * (n - 1),
            Series::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Series::F => 24,
            Series::G => 6,
        }
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for RootSystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_char)
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        RootSystemId::new(series, rank)
    }
}

/// Parse a product type such as `A2A4`, `A2xD5` or `E6`. `T` or empty means the trivial group.
pub fn parse_product(s: &str) -> Result<Vec<RootSystemId>> {
    let s = s.trim();
    if s.is_empty() || s == "T" || s == "1" {
        return Ok(Vec::new());
    }
    let cleaned: String = s.chars().filter(|c| !matches!(c, 'x' | '*' | ' ' | '.')).collect();
    let mut out = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let letter_len = rest.chars().next().map(|c| c.len_utf8()).unwrap_or(0);
        let digits = rest[letter_len..]
            .find(|c: char| !c.is_ascii_digit())
            .map(|i| i + letter_len)
            .unwrap_or(rest.len());
        let token = &rest[..digits];
        if token.len() == letter_len {
            return Err(Error::InvalidType(s.to_string()));
        }
        out.push(token.parse()?);
        rest = &rest[digits..];
    }
    Ok(out)
}

pub fn format_product(ids: &[RootSystemId]) -> String {
    if ids.is_empty() {
        return "T".to_string();
    }
    ids.iter().map(|id| id.to_string()).collect()
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    /// Strictly comma-separated form `1,0,2`; a single integer is a rank-one weight.
    pub fn parse_csv(s: &str) -> Result<Weight> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        t.split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Weight)
            .map_err(|_| Error::Parse(format!("bad weight '{s}'")))
    }

    /// Parse `1,0,2` (also accepts `(1,0,2)` and bare digit strings like `102`).
    pub fn parse(s: &str) -> Result<Weight> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        let coords: std::result::Result<Vec<i64>, _> = if t.contains(',') {
            t.split(',').map(|x| x.trim().parse::<i64>()).collect()
        } else {
            t.chars().map(|c| c.to_string().parse::<i64>()).collect()
        };
        coords
            .map(Weight)
            .map_err(|_| Error::Parse(format!("bad weight '{s}'")))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A positive root with its derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coefficients in the simple-root basis.
    pub coeffs: Vec<i64>,
    /// The root expressed as a weight.
    pub weight: Weight,
    /// Coefficients of the coroot in the simple-coroot basis.
    pub coroot: Vec<i64>,
    pub length: i64,
    pub height: i64,
}

/// Immutable root datum for a simple system or a product of simple systems.
#[derive(Debug, PartialEq, Eq)]
pub struct RootSystem {
    components: Vec<RootSystemId>,
    offsets: Vec<usize>,
    rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`; row `i` is `alpha_i` in weight coordinates.
    cartan: Vec<Vec<i64>>,
    lengths: Vec<i64>,
    positive: Vec<Root>,
    /// Inverse Cartan matrix as `inv_num / inv_den`.
    inv_num: Vec<Vec<i64>>,
    inv_den: i64,
    /// `form[i][j] = 2 * inv_den * (omega_i, omega_j)`.
    form: Vec<Vec<i64>>,
}

/// Shared handle; every value built from a system keeps one of these.
pub type System = Arc<RootSystem>;

pub fn build_root_system(id: RootSystemId) -> System {
    build_product(&[id])
}

/// Systems are interned, so repeated builds share one allocation.
pub fn build_product(ids: &[RootSystemId]) -> System {
    static CACHE: OnceLock<Mutex<HashMap<Vec<RootSystemId>, System>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(ids) {
        return s.clone();
    }
    let built = Arc::new(RootSystem::from_components(ids));
    cache.lock().unwrap().entry(ids.to_vec()).or_insert(built).clone()
}

/// Build from a type string such as `E6` or `A2A4`.
pub fn system(s: &str) -> Result<System> {
    Ok(build_product(&parse_product(s)?))
}

impl RootSystem {
    pub fn from_components(ids: &[RootSystemId]) -> RootSystem {
        let rank: usize = ids.iter().map(|id| id.rank).sum();
        let mut lengths = Vec::with_capacity(rank);
        let mut adjacency = vec![vec![false; rank]; rank];
        let mut offsets = Vec::with_capacity(ids.len());
        let mut off = 0;
        for id in ids {
            offsets.push(off);
            lengths.extend(id.simple_lengths());
            for (a, b) in id.edges() {
                adjacency[off + a][off + b] = true;
                adjacency[off + b][off + a] = true;
            }
            off += id.rank;
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                cartan[i][j] = if i == j {
                    2
                } else if adjacency[i][j] {
                    // (alpha_i, alpha_j) = -max(len)/2 for every bond type.
                    let ip = -lengths[i].max(lengths[j]) / 2;
                    2 * ip / lengths[j]
                } else {
                    0
                };
            }
        }
        let (inv_num, inv_den) = integer_inverse(&cartan);
        let mut form = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                form[i][j] = inv_num[j][i] * lengths[i];
            }
        }
        let mut rs = RootSystem {
            components: ids.to_vec(),
            offsets,
            rank,
            cartan,
            lengths,
            positive: Vec::new(),
            inv_num,
            inv_den,
            form,
        };
        rs.positive = rs.close_positive_roots();
        rs
    }

    fn close_positive_roots(&self) -> Vec<Root> {
        let n = self.rank;
        let mut known: HashSet<Vec<i64>> = HashSet::new();
        let mut layers: Vec<Vec<Vec<i64>>> = Vec::new();
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        for s in &simple {
            known.insert(s.clone());
        }
        layers.push(simple);
        loop {
            let mut next = BTreeSet::new();
            for beta in layers.last().unwrap() {
                for j in 0..n {
                    let pairing: i64 = (0..n).map(|i| beta[i] * self.cartan[i][j]).sum();
                    // r = largest k with beta - k alpha_j a root (or zero when beta = alpha_j)
                    let mut r = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[j] -= 1;
                        if probe.iter().all(|&c| c == 0) {
                            break;
                        }
                        if known.contains(&probe) {
                            r += 1;
                        } else {
                            break;
                        }
                    }
                    if probe.iter().all(|&c| c == 0) {
                        // beta is a multiple of alpha_j, i.e. beta = alpha_j
                        continue;
                    }
                    let q = r - pairing;
                    if q > 0 {
                        let mut up = beta.clone();
                        up[j] += 1;
                        if !known.contains(&up) {
                            next.insert(up);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            for v in &next {
                known.insert(v.clone());
            }
            layers.push(next.into_iter().collect());
        }
        let mut roots: Vec<Root> = layers
            .into_iter()
            .flatten()
            .map(|c| self.make_root(c))
            .collect();
        roots.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.coeffs.cmp(&b.coeffs)));
        roots
    }

    fn make_root(&self, coeffs: Vec<i64>) -> Root {
        let n = self.rank;
        let weight = Weight((0..n).map(|j| (0..n).map(|i| coeffs[i] * self.cartan[i][j]).sum()).collect());
        let mut length = 0;
        for i in 0..n {
            for j in 0..n {
                length += coeffs[i] * coeffs[j] * self.cartan[i][j] * self.lengths[j];
            }
        }
        length /= 2;
        let coroot = (0..n).map(|i| coeffs[i] * self.lengths[i] / length).collect();
        let height = coeffs.iter().sum();
        Root { coeffs, weight, coroot, length, height }
    }

    pub fn components(&self) -> &[RootSystemId] {
        &self.components
    }

    /// Coordinate offset of each simple component.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root_lengths(&self) -> &[i64] {
        &self.lengths
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn label(&self) -> String {
        format_product(&self.components)
    }

    pub fn is_simple(&self) -> bool {
        self.components.len() == 1
    }

    /// Lie algebra dimension `rank + 2 |positive roots|`.
    pub fn dimension(&self) -> usize {
        self.rank + 2 * self.positive.len()
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    pub fn highest_root(&self) -> Option<&Root> {
        if self.is_simple() {
            self.positive.last()
        } else {
            None
        }
    }

    fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::Mismatch(format!(
                "weight {w} has {} coordinates, {} needs {}",
                w.rank(),
                self.label(),
                self.rank
            )));
        }
        Ok(())
    }

    /// `<lambda, beta^vee>` for a root given in simple-root coordinates.
    pub fn pair_with_coroot(&self, lambda: &Weight, beta: &[i64]) -> Result<i64> {
        self.check_rank(lambda)?;
        if beta.len() != self.rank {
            return Err(Error::Mismatch(format!("root has {} coordinates, expected {}", beta.len(), self.rank)));
        }
        let root = self
            .positive
            .iter()
            .find(|r| r.coeffs == beta)
            .map(|r| r.coroot.clone())
            .or_else(|| {
                let neg: Vec<i64> = beta.iter().map(|c| -c).collect();
                self.positive
                    .iter()
                    .find(|r| r.coeffs == neg)
                    .map(|r| r.coroot.iter().map(|c| -c).collect())
            })
            .ok_or_else(|| Error::Mismatch(format!("{beta:?} is not a root of {}", self.label())))?;
        Ok(pair(lambda, &root))
    }

    /// Simple-root coordinates of a weight, as numerators over `inv_den`.
    fn root_coords_scaled(&self, w: &Weight) -> Vec<i64> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| w.0[j] * self.inv_num[j][i]).sum())
            .collect()
    }

    /// Simple-root coordinates if `w` lies in the root lattice.
    pub fn root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        let scaled = self.root_coords_scaled(w);
        if scaled.iter().all(|c| c % self.inv_den == 0) {
            Some(scaled.into_iter().map(|c| c / self.inv_den).collect())
        } else {
            None
        }
    }

    pub fn in_root_lattice(&self, w: &Weight) -> bool {
        self.root_coords(w).is_some()
    }

    /// `lambda <= mu` in the dominance order.
    pub fn dominance_leq(&self, lambda: &Weight, mu: &Weight) -> bool {
        if lambda.rank() != self.rank || mu.rank() != self.rank {
            return false;
        }
        match self.root_coords(&mu.sub(lambda)) {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Height of `mu - lambda` when `lambda <= mu`.
    pub fn depth_below(&self, lambda: &Weight, mu: &Weight) -> Option<i64> {
        self.root_coords(&mu.sub(lambda))
            .filter(|c| c.iter().all(|&x| x >= 0))
            .map(|c| c.iter().sum())
    }

    /// Scaled inner product `2 * inv_den * (x, y)`.
    pub fn form(&self, x: &Weight, y: &Weight) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x.0[i] * self.form[i][j] * y.0[j];
            }
        }
        s
    }

    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let a = w.0[i];
        if a == 0 {
            return w.clone();
        }
        Weight(w.0.iter().zip(&self.cartan[i]).map(|(x, c)| x - a * c).collect())
    }

    /// Apply simple reflections until dominant; returns the dominant weight and
    /// whether an odd number of reflections was used.
    pub fn dominant_representative(&self, lambda: &Weight) -> (Weight, bool) {
        let mut w = lambda.clone();
        let mut odd = false;
        while let Some(i) = w.0.iter().position(|&a| a < 0) {
            w = self.reflect(&w, i);
            odd = !odd;
        }
        (w, odd)
    }

    /// Dot-action normalisation: `w . lambda` dominant, or `Singular`.
    pub fn dot_dominant(&self, lambda: &Weight) -> DotResult {
        let shifted = lambda.add(&self.rho());
        let (dom, odd) = self.dominant_representative(&shifted);
        if dom.0.iter().any(|&a| a == 0) {
            DotResult::Singular
        } else {
            DotResult::Regular { weight: dom.sub(&self.rho()), odd }
        }
    }

    /// `-w0 lambda`, the highest weight of the dual module.
    pub fn minus_w0(&self, lambda: &Weight) -> Weight {
        self.dominant_representative(&lambda.neg()).0
    }

    pub fn orbit(&self, lambda: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank {
                if w.0[i] != 0 {
                    let r = self.reflect(&w, i);
                    if seen.insert(r.clone()) {
                        queue.push_back(r);
                    }
                }
            }
        }
        let mut v: Vec<Weight> = seen.into_iter().collect();
        v.sort();
        v
    }

    /// Size of the Weyl orbit of a dominant weight, computed from its stabiliser.
    pub fn orbit_size(&self, dominant: &Weight) -> u128 {
        let zeros: Vec<usize> = (0..self.rank).filter(|&i| dominant.0[i] == 0).collect();
        let stab = self.parabolic_weyl_order(&zeros);
        self.weyl_order() / stab
    }

    pub fn weyl_order(&self) -> u128 {
        self.parabolic_weyl_order(&(0..self.rank).collect::<Vec<_>>())
    }

    /// Order of the Weyl group generated by the given simple reflections.
    pub fn parabolic_weyl_order(&self, nodes: &[usize]) -> u128 {
        if nodes.is_empty() {
            return 1;
        }
        let roots: Vec<Vec<i64>> = nodes
            .iter()
            .map(|&i| {
                let mut v = vec![0; self.rank];
                v[i] = 1;
                v
            })
            .collect();
        let comps = identify_subsystem(self, &roots);
        comps.iter().map(|c| weyl_group_order(c.id)).product()
    }

    /// Extended Dynkin diagram of a simple system.
    pub fn extended_diagram(&self) -> Result<ExtendedDiagram> {
        let theta = self
            .highest_root()
            .ok_or_else(|| Error::Unsupported("extended diagram needs a simple system".into()))?;
        let mut roots: Vec<Vec<i64>> = (0..self.rank)
            .map(|i| {
                let mut v = vec![0; self.rank];
                v[i] = 1;
                v
            })
            .collect();
        roots.push(theta.coeffs.iter().map(|c| -c).collect());
        let cartan = subsystem_cartan(self, &roots);
        Ok(ExtendedDiagram { roots, cartan })
    }

    /// Squared length of an arbitrary root-lattice vector.
    pub fn length_of(&self, coeffs: &[i64]) -> i64 {
        let mut length = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                length += coeffs[i] * coeffs[j] * self.cartan[i][j] * self.lengths[j];
            }
        }
        length / 2
    }

    /// Convert a root-lattice vector (simple-root coordinates) to weight coordinates.
    pub fn coeffs_to_weight(&self, coeffs: &[i64]) -> Weight {
        Weight((0..self.rank).map(|j| (0..self.rank).map(|i| coeffs[i] * self.cartan[i][j]).sum()).collect())
    }

    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        let neg: Vec<i64> = coeffs.iter().map(|c| -c).collect();
        self.positive.iter().any(|r| r.coeffs == coeffs || r.coeffs == neg)
    }

    pub fn max_root_length(&self) -> i64 {
        self.positive.iter().map(|r| r.length).max().unwrap_or(2)
    }

    pub fn has_two_lengths(&self) -> bool {
        self.positive.iter().any(|r| r.length != self.positive[0].length)
    }
}

pub fn pair(lambda: &Weight, coroot: &[i64]) -> i64 {
    lambda.0.iter().zip(coroot).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DotResult {
    Regular { weight: Weight, odd: bool },
    Singular,
}

pub fn weyl_group_order(id: RootSystemId) -> u128 {
    let n = id.rank as u128;
    let fact = |k: u128| (1..=k).product::<u128>();
    match id.series {
        Series::A => fact(n + 1),
        Series::B | Series::C => (1u128 << n) * fact(n),
        Series::D => (1u128 << (n - 1)) * fact(n),
        Series::E => match n {
            6 => 51840,
            7 => 2903040,
            _ => 696729600,
        },
        Series::F => 1152,
        Series::G => 12,
    }
}

/// Exact inverse of an integer matrix as (numerators, common denominator).
fn integer_inverse(m: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    use num_integer::Integer;
    let n = m.len();
    if n == 0 {
        return (Vec::new(), 1);
    }
    // Gauss-Jordan over rationals stored as (num, den) pairs.
    let mut a: Vec<Vec<(i64, i64)>> = (0..n)
        .map(|i| {
            let mut row: Vec<(i64, i64)> = m[i].iter().map(|&x| (x, 1)).collect();
            row.extend((0..n).map(|j| (if i == j { 1 } else { 0 }, 1)));
            row
        })
        .collect();
    let norm = |(p, q): (i64, i64)| {
        let g = p.gcd(&q).max(1);
        let (p, q) = (p / g, q / g);
        if q < 0 {
            (-p, -q)
        } else {
            (p, q)
        }
    };
    let mul = |x: (i64, i64), y: (i64, i64)| norm((x.0 * y.0, x.1 * y.1));
    let sub = |x: (i64, i64), y: (i64, i64)| norm((x.0 * y.1 - y.0 * x.1, x.1 * y.1));
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].0 != 0).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let p = a[col][col];
        let inv = norm((p.1, p.0));
        for k in 0..2 * n {
            a[col][k] = mul(a[col][k], inv);
        }
        for r in 0..n {
            if r != col && a[r][col].0 != 0 {
                let f = a[r][col];
                for k in 0..2 * n {
                    let t = mul(f, a[col][k]);
                    a[r][k] = sub(a[r][k], t);
                }
            }
        }
    }
    let mut den = 1i64;
    for row in &a {
        for x in &row[n..] {
            den = den.lcm(&x.1);
        }
    }
    let num = a
        .iter()
        .map(|row| row[n..].iter().map(|x| x.0 * (den / x.1)).collect())
        .collect();
    (num, den)
}

/// Affine diagram: simple roots plus the negative highest root (last node).
#[derive(Clone, Debug)]
pub struct ExtendedDiagram {
    pub roots: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
}

impl ExtendedDiagram {
    pub fn node_count(&self) -> usize {
        self.roots.len()
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.roots.len()).filter(|&j| j != i && self.cartan[i][j] != 0).collect()
    }

    /// Roots remaining after deleting the given nodes.
    pub fn delete(&self, nodes: &[usize]) -> Vec<Vec<i64>> {
        self.roots
            .iter()
            .enumerate()
            .filter(|(i, _)| !nodes.contains(i))
            .map(|(_, r)| r.clone())
            .collect()
    }
}

/// `A[i][j] = <beta_i, beta_j^vee>` for a list of ambient roots.
pub fn subsystem_cartan(ambient: &RootSystem, roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let weights: Vec<Weight> = roots.iter().map(|r| ambient.coeffs_to_weight(r)).collect();
    let lens: Vec<i64> = roots.iter().map(|r| ambient.length_of(r)).collect();
    (0..roots.len())
        .map(|i| {
            (0..roots.len())
                .map(|j| {
                    let coroot: Vec<i64> = (0..ambient.rank)
                        .map(|k| roots[j][k] * ambient.lengths[k] / lens[j])
                        .collect();
                    pair(&weights[i], &coroot)
                })
                .collect()
        })
        .collect()
}

/// One simple component of a subsystem, with its roots in Bourbaki order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentifiedComponent {
    pub id: RootSystemId,
    /// Indices into the input root list, in Bourbaki order.
    pub order: Vec<usize>,
    /// All roots of the component are short roots of a doubly-laced ambient system.
    pub short: bool,
}

impl IdentifiedComponent {
    pub fn label(&self) -> String {
        if self.short {
            format!("~{}", self.id)
        } else {
            self.id.to_string()
        }
    }
}

/// Identify the Cartan type of the system with the given simple roots.
///
/// Components are returned sorted by (series, rank, first ambient index).
pub fn identify_subsystem(ambient: &RootSystem, roots: &[Vec<i64>]) -> Vec<IdentifiedComponent> {
    let a = subsystem_cartan(ambient, roots);
    let lens: Vec<i64> = roots.iter().map(|r| ambient.length_of(r)).collect();
    let two_lengths = ambient.has_two_lengths();
    let max_len = ambient.max_root_length();
    let n = roots.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut nodes = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < nodes.len() {
            let i = nodes[k];
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    nodes.push(j);
                }
            }
            k += 1;
        }
        nodes.sort();
        let (id, order) = identify_connected(&a, &lens, &nodes);
        let short = two_lengths && nodes.iter().all(|&i| lens[i] < max_len);
        comps.push(IdentifiedComponent { id, order, short });
    }
    comps.sort_by(|x, y| x.id.cmp(&y.id).then(x.order[0].cmp(&y.order[0])));
    comps
}

fn identify_connected(a: &[Vec<i64>], lens: &[i64], nodes: &[usize]) -> (RootSystemId, Vec<usize>) {
    let n = nodes.len();
    let nbrs = |i: usize| -> Vec<usize> { nodes.iter().copied().filter(|&j| j != i && a[i][j] != 0).collect() };
    let bond = |i: usize, j: usize| a[i][j] * a[j][i];
    let id = |s: Series, r: usize| RootSystemId { series: s, rank: r };
    if n == 1 {
        return (id(Series::A, 1), nodes.to_vec());
    }
    let walk = |from: usize| -> Vec<usize> {
        let mut path = vec![from];
        let mut prev = usize::MAX;
        let mut cur = from;
        loop {
            let next: Vec<usize> = nbrs(cur).into_iter().filter(|&j| j != prev).collect();
            if next.is_empty() {
                break;
            }
            prev = cur;
            cur = next[0];
            path.push(cur);
        }
        path
    };
    let ends: Vec<usize> = nodes.iter().copied().filter(|&i| nbrs(i).len() == 1).collect();
    let max_bond = nodes
        .iter()
        .flat_map(|&i| nodes.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| bond(i, j))
        .max()
        .unwrap_or(0);
    if max_bond == 3 {
        let (s, l) = if lens[nodes[0]] < lens[nodes[1]] { (nodes[0], nodes[1]) } else { (nodes[1], nodes[0]) };
        return (id(Series::G, 2), vec![s, l]);
    }
    if max_bond == 2 {
        let max_len = nodes.iter().map(|&i| lens[i]).max().unwrap();
        if n == 2 {
            let (l, s) = if lens[nodes[0]] == max_len { (nodes[0], nodes[1]) } else { (nodes[1], nodes[0]) };
            return (id(Series::B, 2), vec![l, s]);
        }
        let long_count = nodes.iter().filter(|&&i| lens[i] == max_len).count();
        if n == 4 && long_count == 2 {
            let start = *ends.iter().find(|&&e| lens[e] == max_len).unwrap();
            return (id(Series::F, 4), walk(start));
        }
        if long_count == 1 {
            // C_n: single long root at the end of the chain.
            let long_end = *nodes.iter().find(|&&i| lens[i] == max_len).unwrap();
            let start = *ends.iter().find(|&&e| e != long_end).unwrap();
            return (id(Series::C, n), walk(start));
        }
        let short_end = *nodes.iter().find(|&&i| lens[i] != max_len).unwrap();
        let start = *ends.iter().find(|&&e| e != short_end).unwrap();
        return (id(Series::B, n), walk(start));
    }
    let branch = nodes.iter().copied().find(|&i| nbrs(i).len() == 3);
    match branch {
        None => (id(Series::A, n), walk(*ends.iter().min().unwrap())),
        Some(b) => {
            let mut arms: Vec<Vec<usize>> = nbrs(b)
                .into_iter()
                .map(|first| {
                    let mut arm = vec![first];
                    let mut prev = b;
                    let mut cur = first;
                    loop {
                        let next: Vec<usize> = nbrs(cur).into_iter().filter(|&j| j != prev).collect();
                        if next.is_empty() {
                            break;
                        }
                        prev = cur;
                        cur = next[0];
                        arm.push(cur);
                    }
                    arm
                })
                .collect();
            arms.sort_by(|x, y| x.len().cmp(&y.len()).then(x[0].cmp(&y[0])));
            let lens_arms: Vec<usize> = arms.iter().map(|a| a.len()).collect();
            if lens_arms[0] == 1 && lens_arms[1] == 1 {
                // D_n: long arm reversed, branch, then the two leaves.
                let mut order: Vec<usize> = arms[2].iter().rev().copied().collect();
                order.push(b);
                order.push(arms[0][0]);
                order.push(arms[1][0]);
                (id(Series::D, n), order)
            } else {
                // E_n: arms (1, 2, n-4).
                let mut order = vec![arms[1][1], arms[0][0], arms[1][0], b];
                order.extend(arms[2].iter().copied());
                (id(Series::E, n), order)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> System {
        system(s).unwrap()
    }

    #[test]
    fn positive_root_counts_match_closed_forms() {
        for series in [Series::A, Series::B, Series::C, Series::D] {
            for rank in 1..=8 {
                if let Ok(id) = RootSystemId::new(series, rank) {
                    let rs = build_root_system(id);
                    assert_eq!(rs.positive_roots().len(), id.positive_root_count(), "{id}");
                }
            }
        }
        assert_eq!(sys("G2").positive_roots().len(), 6);
        assert_eq!(sys("F4").positive_roots().len(), 24);
        assert_eq!(sys("E6").positive_roots().len(), 36);
        assert_eq!(sys("E7").positive_roots().len(), 63);
        assert_eq!(sys("E8").positive_roots().len(), 120);
        assert_eq!(sys("E8").dimension(), 248);
    }

    #[test]
    fn a1_is_trivial() {
        let rs = sys("A1");
        assert_eq!(rs.cartan(), &[vec![2]]);
        assert_eq!(rs.positive_roots().len(), 1);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!("E5".parse::<RootSystemId>().is_err());
        assert!("D2".parse::<RootSystemId>().is_err());
        assert!("F3".parse::<RootSystemId>().is_err());
        assert!("B1".parse::<RootSystemId>().is_err());
        assert!("Q3".parse::<RootSystemId>().is_err());
    }

    #[test]
    fn coroot_pairings() {
        let a2 = sys("A2");
        assert_eq!(a2.pair_with_coroot(&Weight(vec![1, 0]), &[1, 0]).unwrap(), 1);
        assert_eq!(a2.pair_with_coroot(&Weight(vec![1, 0]), &[1, 1]).unwrap(), 1);
        let b2 = sys("B2");
        assert_eq!(b2.pair_with_coroot(&Weight(vec![0, 1]), &[1, 2]).unwrap(), 1);
        assert!(a2.pair_with_coroot(&Weight(vec![1, 0, 0]), &[1, 0]).is_err());
    }

    #[test]
    fn dominance_examples() {
        let a2 = sys("A2");
        assert!(a2.dominance_leq(&Weight(vec![2, 2]), &Weight(vec![3, 3])));
        assert!(a2.dominance_leq(&Weight(vec![0, 3]), &Weight(vec![3, 3])));
        assert!(!a2.dominance_leq(&Weight(vec![3, 3]), &Weight(vec![0, 3])));
        assert!(!a2.dominance_leq(&Weight(vec![1, 0]), &Weight(vec![0, 1])));
        assert!(!a2.dominance_leq(&Weight(vec![0, 1]), &Weight(vec![1, 0])));
    }

    #[test]
    fn dot_action_examples() {
        let a1 = sys("A1");
        assert_eq!(a1.dot_dominant(&Weight(vec![-2])), DotResult::Regular { weight: Weight(vec![0]), odd: true });
        let a2 = sys("A2");
        assert_eq!(a2.dot_dominant(&Weight(vec![-1, 1])), DotResult::Singular);
        assert_eq!(a2.dominant_representative(&Weight(vec![2, 1])), (Weight(vec![2, 1]), false));
    }

    #[test]
    fn minus_w0_examples() {
        assert_eq!(sys("A2").minus_w0(&Weight(vec![1, 0])), Weight(vec![0, 1]));
        assert_eq!(sys("B2").minus_w0(&Weight(vec![1, 3])), Weight(vec![1, 3]));
        assert_eq!(sys("A5").minus_w0(&Weight(vec![0, 0, 1, 0, 0])), Weight(vec![0, 0, 1, 0, 0]));
        assert_eq!(sys("E6").minus_w0(&Weight(vec![1, 0, 0, 0, 0, 0])), Weight(vec![0, 0, 0, 0, 0, 1]));
        assert_eq!(sys("D5").minus_w0(&Weight(vec![0, 0, 0, 1, 0])), Weight(vec![0, 0, 0, 0, 1]));
        assert_eq!(sys("D4").minus_w0(&Weight(vec![0, 0, 1, 0])), Weight(vec![0, 0, 1, 0]));
    }

    #[test]
    fn closure_property() {
        for t in ["A4", "B3", "C4", "D5", "E6", "F4", "G2"] {
            let rs = sys(t);
            for r in rs.positive_roots() {
                for j in 0..rs.rank() {
                    let pairing = r.weight.0[j];
                    if pairing > 0 && r.height > 1 {
                        let mut down = r.coeffs.clone();
                        down[j] -= 1;
                        assert!(rs.is_root(&down), "{t}: {:?} - alpha_{j}", r.coeffs);
                    }
                }
            }
        }
    }

    #[test]
    fn extended_diagrams() {
        let e6 = sys("E6");
        let ext = e6.extended_diagram().unwrap();
        assert_eq!(ext.node_count(), 7);
        // node 4 (index 3) is the branch node
        let types: Vec<String> = identify_subsystem(&e6, &ext.delete(&[3])).iter().map(|c| c.label()).collect();
        assert_eq!(types, vec!["A2", "A2", "A2"]);
        let a4 = sys("A4");
        let ext = a4.extended_diagram().unwrap();
        for i in 0..5 {
            assert_eq!(ext.neighbours(i).len(), 2);
        }
    }

    #[test]
    fn identify_bourbaki_order() {
        let e8 = sys("E8");
        let roots: Vec<Vec<i64>> = (1..8)
            .map(|i| {
                let mut v = vec![0; 8];
                v[i] = 1;
                v
            })
            .collect();
        let c = identify_subsystem(&e8, &roots);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].id.to_string(), "D7");
        // D7 Bourbaki node 1 is E8 node 8
        assert_eq!(c[0].order[0], 6);
        let f4 = sys("F4");
        let short: Vec<Vec<i64>> = vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        assert_eq!(identify_subsystem(&f4, &short)[0].label(), "~A2");
    }

    #[test]
    fn parse_products() {
        let p = parse_product("A2A4").unwrap();
        assert_eq!(format_product(&p), "A2A4");
        assert_eq!(parse_product("A2xD5").unwrap().len(), 2);
        assert!(parse_product("T").unwrap().is_empty());
    }

    #[test]
    fn orbit_sizes() {
        let b2 = sys("B2");
        assert_eq!(b2.weyl_order(), 8);
        assert_eq!(b2.orbit_size(&Weight(vec![1, 0])), 4);
        assert_eq!(b2.orbit(&Weight(vec![1, 0])).len(), 4);
        assert_eq!(sys("E8").weyl_order(), 696729600);
    }
}
