//! The catalogue of non-completely-reducible examples and the numeric
//! identities attached to each row.

use std::fmt;

use serde::Serialize;

use crate::charcalc::{decompose_into_weyl, freudenthal_character, symmetric_square_character, tensor_character, weyl_dim};
use crate::modp::ModpOracle;
use crate::rootcore::{build_root_system, RootSystemId, Weight};
use crate::subgroups::find_subsystem;
use crate::{Error, Result};

/// One layered piece of a module: layers from top to socle, repeated `copies` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub layers: Vec<Weight>,
    pub copies: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    WeylDim { ty: RootSystemId, weight: Weight, dim: u128 },
    SimpleDim { ty: RootSystemId, weight: Weight, p: u64, dim: u128 },
    Factors { ty: RootSystemId, weight: Weight, p: u64, expected: Vec<(Weight, u32)> },
    Layers { ty: RootSystemId, p: u64, module: Vec<Piece>, dim: u128 },
    TensorFactors { ty: RootSystemId, p: u64, left: Weight, right: Weight, expected: Vec<(Weight, u32)> },
    TensorSummand { ty: RootSystemId, p: u64, left: Weight, right: Weight, weyl: Vec<Weight> },
    SymAlt { ty: RootSystemId, p: u64, weight: Weight, sym: u128, alt: u128 },
    Restrict { group: RootSystemId, weight: Weight, sub: String, expected: Vec<Weight> },
    Structural { text: String },
}

fn show_factors(v: &[(Weight, u32)]) -> String {
    v.iter().map(|(w, m)| if *m > 1 { format!("L{w}x{m}") } else { format!("L{w}") }).collect::<Vec<_>>().join(" ")
}

fn show_module(m: &[Piece]) -> String {
    m.iter()
        .map(|p| {
            let l = p.layers.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("/");
            if p.copies > 1 {
                format!("({l})^{}", p.copies)
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::WeylDim { ty, weight, dim } => write!(f, "dim {ty} V{weight} = {dim}"),
            Claim::SimpleDim { ty, weight, p, dim } => write!(f, "dim {ty} L{weight} = {dim} at p={p}"),
            Claim::Factors { ty, weight, p, expected } => write!(f, "{ty} V{weight} at p={p} has factors {}", show_factors(expected)),
            Claim::Layers { ty, p, module, dim } => write!(f, "{ty} module {} at p={p} has dimension {dim}", show_module(module)),
            Claim::TensorFactors { ty, p, left, right, expected } => {
                write!(f, "{ty} L{left} (x) L{right} at p={p} has factors {}", show_factors(expected))
            }
            Claim::TensorSummand { ty, p, left, right, weyl } => {
                let w: Vec<String> = weyl.iter().map(|w| format!("V{w}")).collect();
                write!(f, "{ty} L{left} (x) L{right} at p={p} contains {}", w.join(" + "))
            }
            Claim::SymAlt { ty, p, weight, sym, alt } => write!(f, "{ty} L{weight} at p={p}: S^2 has dim {sym}, Lambda^2 has dim {alt}"),
            Claim::Restrict { group, weight, sub, expected } => {
                let w: Vec<String> = expected.iter().map(|w| format!("V{w}")).collect();
                write!(f, "{group} V{weight} on {sub} = {}", w.join(" + "))
            }
            Claim::Structural { text } => write!(f, "structural: {text}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogueRow {
    pub g: RootSystemId,
    pub x: RootSystemId,
    pub p: u64,
    pub example: String,
    pub claims: Vec<Claim>,
}

impl CatalogueRow {
    pub fn id(&self) -> String {
        format!("({},{},{})", self.g, self.x, self.p)
    }
}

fn parse_weight(s: &str) -> Result<Weight> {
    Weight::parse_csv(s)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

/// `W` or `WxK`.
fn parse_factor_list(toks: &[&str]) -> Result<Vec<(Weight, u32)>> {
    toks.iter()
        .map(|t| match t.split_once('x') {
            Some((w, k)) => Ok((parse_weight(w)?, parse_num(k, "multiplicity")?)),
            None => Ok((parse_weight(t)?, 1)),
        })
        .collect()
}

fn parse_module(s: &str) -> Result<Vec<Piece>> {
    s.split('+')
        .map(|piece| {
            let (body, copies) = match piece.split_once('*') {
                Some((b, k)) => (b, parse_num(k, "copy count")?),
                None => (piece, 1),
            };
            Ok(Piece { layers: body.split('/').map(parse_weight).collect::<Result<_>>()?, copies })
        })
        .collect()
}

fn after_eq<'a>(f: &'a [&'a str], at: usize) -> Result<&'a [&'a str]> {
    if f.get(at) != Some(&"=") {
        return Err(Error::Parse(format!("expected '=' in {:?}", f.join(" "))));
    }
    Ok(&f[at + 1..])
}

fn parse_claim(line: &str) -> Result<Claim> {
    let f: Vec<&str> = line.split_whitespace().collect();
    let need = |n: usize| {
        if f.len() < n {
            Err(Error::Parse(format!("too few fields in {line:?}")))
        } else {
            Ok(())
        }
    };
    need(2)?;
    let claim = match f[0] {
        "weyl-dim" => {
            need(4)?;
            Claim::WeylDim { ty: f[1].parse()?, weight: parse_weight(f[2])?, dim: parse_num(f[3], "dimension")? }
        }
        "simple-dim" => {
            need(5)?;
            Claim::SimpleDim { ty: f[1].parse()?, weight: parse_weight(f[2])?, p: parse_num(f[3], "prime")?, dim: parse_num(f[4], "dimension")? }
        }
        "factors" => {
            need(5)?;
            Claim::Factors { ty: f[1].parse()?, weight: parse_weight(f[2])?, p: parse_num(f[3], "prime")?, expected: parse_factor_list(after_eq(&f, 4)?)? }
        }
        "layers" => {
            need(5)?;
            Claim::Layers { ty: f[1].parse()?, p: parse_num(f[2], "prime")?, module: parse_module(f[3])?, dim: parse_num(f[4], "dimension")? }
        }
        "tensor-factors" | "tensor-summand" => {
            need(6)?;
            let (ty, p, left, right) = (f[1].parse()?, parse_num(f[2], "prime")?, parse_weight(f[3])?, parse_weight(f[4])?);
            let rest = after_eq(&f, 5)?;
            if f[0] == "tensor-factors" {
                Claim::TensorFactors { ty, p, left, right, expected: parse_factor_list(rest)? }
            } else {
                Claim::TensorSummand { ty, p, left, right, weyl: rest.iter().map(|w| parse_weight(w)).collect::<Result<_>>()? }
            }
        }
        "sym-alt" => {
            need(6)?;
            Claim::SymAlt {
                ty: f[1].parse()?,
                p: parse_num(f[2], "prime")?,
                weight: parse_weight(f[3])?,
                sym: parse_num(f[4], "dimension")?,
                alt: parse_num(f[5], "dimension")?,
            }
        }
        "restrict" => {
            need(6)?;
            let rest = after_eq(&f, 4)?;
            Claim::Restrict {
                group: f[1].parse()?,
                weight: parse_weight(f[2])?,
                sub: f[3].to_string(),
                expected: rest.iter().filter(|t| **t != "+").map(|w| parse_weight(w)).collect::<Result<_>>()?,
            }
        }
        "structural" => Claim::Structural { text: f[1..].join(" ") },
        other => return Err(Error::Parse(format!("unknown claim kind {other:?}"))),
    };
    Ok(claim)
}

pub fn parse_catalogue(text: &str) -> Result<Vec<CatalogueRow>> {
    let mut rows: Vec<CatalogueRow> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let ctx = |e: Error| Error::Parse(format!("catalogue line {}: {e}", i + 1));
        if let Some(rest) = line.strip_prefix("row ") {
            let (head, example) = rest.split_once('|').ok_or_else(|| ctx(Error::Parse("row needs '|'".into())))?;
            let f: Vec<&str> = head.split_whitespace().collect();
            if f.len() != 3 {
                return Err(ctx(Error::Parse("row needs G X p".into())));
            }
            rows.push(CatalogueRow {
                g: f[0].parse().map_err(ctx)?,
                x: f[1].parse().map_err(ctx)?,
                p: parse_num(f[2], "prime").map_err(ctx)?,
                example: example.trim().to_string(),
                claims: Vec::new(),
            });
        } else {
            let claim = parse_claim(line).map_err(ctx)?;
            rows.last_mut().ok_or_else(|| ctx(Error::Parse("claim before first row".into())))?.claims.push(claim);
        }
    }
    Ok(rows)
}

pub fn bundled_catalogue() -> Result<Vec<CatalogueRow>> {
    match crate::data_override("catalogue.txt") {
        Some(text) => parse_catalogue(&text),
        None => parse_catalogue(include_str!("../data/catalogue.txt")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimOutcome {
    Passed,
    Failed,
    /// Structural statements: checked at character level elsewhere or not at all.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub row: String,
    pub claim: String,
    pub outcome: ClaimOutcome,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogueReport {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub results: Vec<ClaimResult>,
}

impl CatalogueReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(|r| r.outcome == ClaimOutcome::Failed)
    }
}

fn sorted(mut v: Vec<(Weight, u32)>) -> Vec<(Weight, u32)> {
    let mut merged: std::collections::BTreeMap<Weight, u32> = std::collections::BTreeMap::new();
    for (w, m) in v.drain(..) {
        *merged.entry(w).or_insert(0) += m;
    }
    merged.into_iter().collect()
}

fn compare<T: PartialEq + fmt::Debug>(got: T, want: T) -> (bool, String) {
    if got == want {
        (true, format!("{got:?}"))
    } else {
        (false, format!("computed {got:?}, claimed {want:?}"))
    }
}

fn module_dim(oracle: &ModpOracle, ty: RootSystemId, p: u64, module: &[Piece]) -> Result<u128> {
    let sys = build_root_system(ty);
    let mut total = 0u128;
    for piece in module {
        let mut d = 0u128;
        for w in &piece.layers {
            d += oracle.simple_dim(&sys, w, p)?;
        }
        total += d * piece.copies as u128;
    }
    Ok(total)
}

fn simple_tensor(oracle: &ModpOracle, ty: RootSystemId, p: u64, left: &Weight, right: &Weight) -> Result<crate::charcalc::Character> {
    let sys = build_root_system(ty);
    let a = oracle.simple_character(&sys, left, p)?;
    let b = oracle.simple_character(&sys, right, p)?;
    tensor_character(&a, &b)
}

fn check(oracle: &ModpOracle, claim: &Claim) -> Result<(bool, String)> {
    Ok(match claim {
        Claim::WeylDim { ty, weight, dim } => compare(weyl_dim(&build_root_system(*ty), weight)?, *dim),
        Claim::SimpleDim { ty, weight, p, dim } => compare(oracle.simple_dim(&build_root_system(*ty), weight, *p)?, *dim),
        Claim::Factors { ty, weight, p, expected } => {
            let got = oracle.composition_factors(&build_root_system(*ty), weight, *p)?;
            compare(sorted(got), sorted(expected.clone()))
        }
        Claim::Layers { ty, p, module, dim } => compare(module_dim(oracle, *ty, *p, module)?, *dim),
        Claim::TensorFactors { ty, p, left, right, expected } => {
            let t = simple_tensor(oracle, *ty, *p, left, right)?;
            compare(sorted(oracle.composition_factors_of_character(&t, *p)?), sorted(expected.clone()))
        }
        Claim::TensorSummand { ty, p, left, right, weyl } => {
            let sys = build_root_system(*ty);
            let mut rest = simple_tensor(oracle, *ty, *p, left, right)?;
            for w in weyl {
                rest = rest.minus(&freudenthal_character(&sys, w)?)?;
            }
            if rest.is_effective() {
                (true, format!("complement has dimension {}", rest.dim()))
            } else {
                (false, "the Weyl characters do not fit inside the tensor product".into())
            }
        }
        Claim::SymAlt { ty, p, weight, sym, alt } => {
            let sys = build_root_system(*ty);
            let l = oracle.simple_character(&sys, weight, *p)?;
            let s = symmetric_square_character(&l)?.dim() as u128;
            let total = (l.dim() * l.dim()) as u128;
            compare((s, total - s), (*sym, *alt))
        }
        Claim::Restrict { group, weight, sub, expected } => {
            let datum = find_subsystem(*group, sub, 0).ok_or_else(|| Error::Data(format!("no subsystem {sub} in {group}")))?;
            let ch = datum.weight_map().restrict(&freudenthal_character(&build_root_system(*group), weight)?)?;
            let got: Vec<(Weight, u32)> = decompose_into_weyl(&ch)?.terms.into_iter().map(|(w, k)| (w, k as u32)).collect();
            compare(sorted(got), sorted(expected.iter().map(|w| (w.clone(), 1)).collect()))
        }
        Claim::Structural { .. } => (true, String::new()),
    })
}

/// Re-check every numeric claim; structural ones are counted as skipped.
pub fn verify_rows(oracle: &ModpOracle, rows: &[CatalogueRow]) -> CatalogueReport {
    let mut report = CatalogueReport { rows: rows.len(), passed: 0, failed: 0, skipped: 0, results: Vec::new() };
    for row in rows {
        for claim in &row.claims {
            let (outcome, detail) = match claim {
                Claim::Structural { .. } => (ClaimOutcome::Skipped, "character-level only".to_string()),
                _ => match check(oracle, claim) {
                    Ok((true, d)) => (ClaimOutcome::Passed, d),
                    Ok((false, d)) => (ClaimOutcome::Failed, d),
                    Err(e) => (ClaimOutcome::Failed, format!("could not evaluate: {e}")),
                },
            };
            match outcome {
                ClaimOutcome::Passed => report.passed += 1,
                ClaimOutcome::Failed => report.failed += 1,
                ClaimOutcome::Skipped => report.skipped += 1,
            }
            report.results.push(ClaimResult { row: row.id(), claim: claim.to_string(), outcome, detail });
        }
    }
    report
}

pub fn verify_catalogue() -> Result<CatalogueReport> {
    Ok(verify_rows(crate::modp::default_oracle(), &bundled_catalogue()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let rows = parse_catalogue(
            "row E6 A1 5 | x\n weyl-dim A1 8 9\n factors A1 8 5 = 8 0\n layers A1 5 0/8/0+4*2 20\n tensor-factors A1 5 4 4 = 8 0x2\n structural t\n",
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].claims.len(), 5);
        match &rows[0].claims[2] {
            Claim::Layers { module, .. } => {
                assert_eq!(module.len(), 2);
                assert_eq!(module[1].copies, 2);
            }
            c => panic!("{c:?}"),
        }
        assert!(parse_catalogue("weyl-dim A1 1 2\n").is_err());
        assert!(parse_catalogue("row E6 A1 5 | x\n bogus A1\n").is_err());
    }

    #[test]
    fn small_rows() {
        let oracle = crate::modp::default_oracle();
        let rows = parse_catalogue("row E6 A1 5 | x\n layers A1 5 0/8/0 10\n layers A1 5 0/8/0 11\n sym-alt A1 5 1 3 1\n").unwrap();
        let r = verify_rows(oracle, &rows);
        assert_eq!((r.passed, r.failed), (2, 1));
    }
}
