//! Browser bindings. Each export takes plain strings and returns a JSON
//! document: `{"ok": ...}` on success, `{"error": "..."}` otherwise.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use exclie_core::absfilt::q_level_factors;
use exclie_core::charcalc::{freudenthal_character, weyl_dim};
use exclie_core::modp::{default_oracle, jantzen_sum, steinberg_decompose};
use exclie_core::rootcore::{build_root_system, RootSystemId, System};
use exclie_core::subgroups::ParabolicDatum;
use exclie_core::{Error, Weight};

fn envelope(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => json!({ "ok": v }).to_string(),
        Err(e) => json!({ "error": e.to_string(), "gap": e.is_gap() }).to_string(),
    }
}

fn system_and_weight(ty: &str, weight: &str) -> Result<(System, Weight), Error> {
    let id: RootSystemId = ty.trim().parse()?;
    let sys = build_root_system(id);
    let w = Weight::parse_csv(weight.trim())?;
    if w.rank() != sys.rank() {
        return Err(Error::Mismatch(format!("{} needs {} coordinates", sys.label(), sys.rank())));
    }
    Ok((sys, w))
}

/// Weyl module V(weight): dimension and dominant weight multiplicities.
#[wasm_bindgen]
pub fn weyl_character(ty: &str, weight: &str) -> String {
    envelope((|| {
        let (sys, w) = system_and_weight(ty, weight)?;
        let dim = weyl_dim(&sys, &w)?;
        let ch = freudenthal_character(&sys, &w)?;
        let dominant: Vec<Value> = ch.dominant_part().into_iter().rev().map(|(v, m)| json!([v.to_string(), m])).collect();
        Ok(json!({ "module": format!("V{w}"), "dim": dim.to_string(), "dominant": dominant }))
    })())
}

/// Simple module L(weight) in characteristic p: Steinberg factors, Jantzen
/// sum and composition factors of V(weight) where the tables reach.
#[wasm_bindgen]
pub fn simple_module(ty: &str, weight: &str, p: u32) -> String {
    envelope((|| {
        let (sys, w) = system_and_weight(ty, weight)?;
        let p = u64::from(p);
        let oracle = default_oracle();
        let dim = oracle.simple_dim(&sys, &w, p)?;
        let steinberg = steinberg_decompose(&w, p)?.to_string();
        let jantzen = jantzen_sum(&sys, &w, p)?.to_string();
        let factors = match oracle.composition_factors(&sys, &w, p) {
            Ok(f) => Value::from(f.iter().map(|(v, m)| json!([v.to_string(), m])).collect::<Vec<_>>()),
            Err(e) if e.is_gap() => Value::from(e.to_string()),
            Err(e) => return Err(e),
        };
        Ok(json!({
            "module": format!("L{w}"),
            "p": p,
            "dim": dim.to_string(),
            "weyl_dim": weyl_dim(&sys, &w)?.to_string(),
            "steinberg": steinberg,
            "jantzen_sum": jantzen,
            "factors": factors,
        }))
    })())
}

/// Levels of the unipotent radical of the parabolic whose Levi has the
/// given one-based nodes.
#[wasm_bindgen]
pub fn abs_levels(ty: &str, nodes: &str) -> String {
    envelope((|| {
        let id: RootSystemId = ty.trim().parse()?;
        let mut picked = Vec::new();
        for t in nodes.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match t.parse::<usize>() {
                Ok(n) if (1..=id.rank).contains(&n) => picked.push(n - 1),
                _ => return Err(Error::Parse(format!("node {t:?} not in 1..{}", id.rank))),
            }
        }
        picked.sort();
        picked.dedup();
        let pd = ParabolicDatum::new(id, &picked);
        let levels: Vec<Value> = q_level_factors(&pd)?
            .iter()
            .map(|l| {
                let f: Vec<Value> = l.factors.iter().map(|f| json!({ "shape": f.shape, "module": format!("V{}", f.weight), "dim": f.dim.to_string() })).collect();
                json!({ "level": l.level_index, "factors": f })
            })
            .collect();
        Ok(json!({ "levi": pd.levi_type(), "nodes": pd.node_label(), "q_dim": pd.q_roots.len(), "levels": levels }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn weyl_character_of_g2_adjoint() {
        let v = parse(weyl_character("G2", "0,1"));
        assert_eq!(v["ok"]["dim"], "14");
    }

    #[test]
    fn simple_module_reports_gaps_and_errors() {
        let v = parse(simple_module("G2", "1,0", 2));
        assert_eq!(v["ok"]["dim"], "6");
        let bad = parse(simple_module("G2", "1,0,0", 2));
        assert_eq!(bad["gap"], false);
    }

    #[test]
    fn abs_levels_for_e6_d5() {
        let v = parse(abs_levels("E6", "1,2,3,4,5"));
        assert_eq!(v["ok"]["levels"][0]["factors"][0]["dim"], "16");
        assert!(parse(abs_levels("E6", "9"))["error"].is_string());
    }
}
