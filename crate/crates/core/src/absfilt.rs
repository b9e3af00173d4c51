//! Graded pieces of the unipotent radical of a parabolic subgroup as modules
//! for the derived Levi subgroup.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::charcalc::weyl_dim;
use crate::rootcore::{build_root_system, RootSystemId, Series, System, Weight};
use crate::subgroups::{levi_subgroups, ParabolicDatum};
use crate::{Error, Result};

/// One irreducible `L'`-module inside a level: the root spaces of a fixed
/// shape (coefficients on the non-Levi nodes).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsFactor {
    pub shape: Vec<i64>,
    /// High weight for the whole of `L'`.
    pub weight: Weight,
    /// The same weight split over the simple factors of `L'`.
    pub component_weights: Vec<Weight>,
    pub dim: u128,
}

impl AbsFactor {
    pub fn is_trivial(&self) -> bool {
        self.weight.is_zero()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsLevel {
    pub level_index: i64,
    /// Indices into the ambient positive roots.
    pub roots: Vec<usize>,
    pub factors: Vec<AbsFactor>,
}

fn split_weight(sys: &System, w: &Weight) -> Vec<Weight> {
    let offs = sys.offsets();
    sys.components()
        .iter()
        .enumerate()
        .map(|(i, c)| Weight(w.0[offs[i]..offs[i] + c.rank].to_vec()))
        .collect()
}

/// Levels of `Q` graded by total coefficient on the non-Levi nodes, each
/// split into shapes with their `L'` high weights.
pub fn q_level_factors(pd: &ParabolicDatum) -> Result<Vec<AbsLevel>> {
    let amb = build_root_system(pd.ambient);
    let levi = pd.levi.system();
    let map = pd.levi.weight_map();
    let outside: Vec<usize> = (0..pd.ambient.rank).filter(|i| !pd.levi_nodes.contains(i)).collect();
    let mut shapes: BTreeMap<(i64, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for &ri in &pd.q_roots {
        let r = &amb.positive_roots()[ri];
        let shape: Vec<i64> = outside.iter().map(|&i| r.coeffs[i]).collect();
        shapes.entry((shape.iter().sum(), shape)).or_default().push(ri);
    }
    let mut levels: BTreeMap<i64, AbsLevel> = BTreeMap::new();
    for ((level, shape), roots) in shapes {
        let top = roots
            .iter()
            .copied()
            .max_by_key(|&ri| amb.positive_roots()[ri].height)
            .expect("shapes are non-empty");
        let weight = map.apply(&amb.positive_roots()[top].weight);
        if !weight.is_dominant() {
            return Err(Error::Internal(format!("highest root of shape {shape:?} has non-dominant Levi weight {weight}")));
        }
        let dim = weyl_dim(&levi, &weight)?;
        if dim != roots.len() as u128 {
            return Err(Error::Internal(format!(
                "shape {shape:?} of the {} Levi of {} has {} roots but V{weight} has dimension {dim}",
                pd.levi_type(),
                pd.ambient,
                roots.len()
            )));
        }
        let entry = levels.entry(level).or_insert_with(|| AbsLevel { level_index: level, roots: Vec::new(), factors: Vec::new() });
        entry.roots.extend(&roots);
        entry.factors.push(AbsFactor { shape, component_weights: split_weight(&levi, &weight), weight, dim });
    }
    let mut out: Vec<AbsLevel> = levels.into_values().collect();
    for l in &mut out {
        l.roots.sort();
    }
    Ok(out)
}

/// Whether a high weight on one simple factor of `L'` is of the allowed shape.
pub fn allowed_component_weight(id: RootSystemId, w: &Weight) -> bool {
    if w.is_zero() {
        return true;
    }
    let support: Vec<usize> = w.0.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, _)| i).collect();
    if support.len() != 1 || w.0[support[0]] != 1 {
        return false;
    }
    let j = support[0] + 1;
    let n = id.rank;
    match id.series {
        Series::A => j <= 3 || n + 1 - j <= 3,
        Series::D => j == 1 || j == n - 1 || j == n,
        Series::E if n == 6 => j == 1 || j == 6,
        Series::E if n == 7 => j == 7,
        _ => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub ambient: RootSystemId,
    pub levis_checked: usize,
    pub factors_checked: usize,
    pub violations: Vec<String>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every factor of every proper Levi against the allowed shapes.
pub fn verify_abs_shapes(ambient: RootSystemId) -> Result<ShapeReport> {
    let mut report = ShapeReport { ambient, levis_checked: 0, factors_checked: 0, violations: Vec::new() };
    for pd in proper_levis(ambient) {
        report.levis_checked += 1;
        for level in q_level_factors(&pd)? {
            for f in &level.factors {
                report.factors_checked += 1;
                for (c, w) in pd.levi.components.iter().zip(&f.component_weights) {
                    if !allowed_component_weight(*c, w) {
                        report.violations.push(format!("{} Levi {} level {}: {c} weight {w}", pd.levi_type(), pd.node_label(), level.level_index));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// All Levis except the whole group.
pub fn proper_levis(ambient: RootSystemId) -> Vec<ParabolicDatum> {
    levi_subgroups(ambient).into_iter().filter(|pd| pd.levi_nodes.len() < ambient.rank).collect()
}

/// Largest non-trivial factor over the proper Levis accepted by `keep`.
pub fn max_factor_dim_where(ambient: RootSystemId, keep: impl Fn(&ParabolicDatum) -> bool) -> Result<Option<(u128, ParabolicDatum)>> {
    let mut best: Option<(u128, ParabolicDatum)> = None;
    for pd in proper_levis(ambient).into_iter().filter(|pd| keep(pd)) {
        for level in q_level_factors(&pd)? {
            for f in level.factors.iter().filter(|f| !f.is_trivial()) {
                if best.as_ref().is_none_or(|(d, _)| f.dim > *d) {
                    best = Some((f.dim, pd.clone()));
                }
            }
        }
    }
    Ok(best)
}

/// Largest dimension a factor of the allowed shape could have on this Levi:
/// the product over simple factors of the largest allowed module.
pub fn shape_list_bound(pd: &ParabolicDatum) -> Result<u128> {
    let mut bound = 1u128;
    for c in &pd.levi.components {
        let sys = build_root_system(*c);
        let mut best = 1u128;
        for i in 0..c.rank {
            let w = Weight::fundamental(c.rank, i);
            if allowed_component_weight(*c, &w) {
                best = best.max(weyl_dim(&sys, &w)?);
            }
        }
        bound *= best;
    }
    Ok(bound)
}

/// Largest `shape_list_bound` over the proper Levis accepted by `keep`.
pub fn max_shape_list_bound_where(ambient: RootSystemId, keep: impl Fn(&ParabolicDatum) -> bool) -> Result<Option<(u128, ParabolicDatum)>> {
    let mut best: Option<(u128, ParabolicDatum)> = None;
    for pd in proper_levis(ambient).into_iter().filter(|pd| keep(pd)) {
        let b = shape_list_bound(&pd)?;
        if best.as_ref().is_none_or(|(d, _)| b > *d) {
            best = Some((b, pd));
        }
    }
    Ok(best)
}

pub fn has_a1_component(pd: &ParabolicDatum) -> bool {
    pd.levi.components.iter().any(|c| c.series == Series::A && c.rank == 1)
}

/// Largest non-trivial factor dimension with a witness Levi.
pub fn max_factor_dim(ambient: RootSystemId, exclude_a1_components: bool) -> Result<(u128, ParabolicDatum)> {
    max_factor_dim_where(ambient, |pd| !(exclude_a1_components && has_a1_component(pd)))?
        .ok_or_else(|| Error::Internal(format!("{ambient} has no non-trivial Levi factors")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> RootSystemId {
        s.parse().unwrap()
    }

    fn levi(ambient: &str, ty: &str) -> ParabolicDatum {
        proper_levis(id(ambient)).into_iter().find(|p| p.levi_type() == ty).unwrap()
    }

    fn dims(pd: &ParabolicDatum) -> Vec<u128> {
        let mut v: Vec<u128> = q_level_factors(pd).unwrap().iter().flat_map(|l| l.factors.iter().map(|f| f.dim)).collect();
        v.sort();
        v
    }

    #[test]
    fn known_levels() {
        let a5 = levi("E6", "A5");
        assert_eq!(dims(&a5), vec![1, 20]);
        let top = q_level_factors(&a5).unwrap()[0].factors[0].clone();
        assert_eq!(top.weight, Weight(vec![0, 0, 1, 0, 0]));
        assert_eq!(dims(&levi("E7", "D6")), vec![1, 32]);
        assert_eq!(dims(&levi("E8", "D7")), vec![14, 64]);
        let e6 = levi("E7", "E6");
        assert_eq!(dims(&e6), vec![27]);
    }

    #[test]
    fn bookkeeping_over_all_levis() {
        for amb in ["E6", "E7", "F4", "G2"] {
            for pd in proper_levis(id(amb)) {
                let levels = q_level_factors(&pd).unwrap();
                let roots: usize = levels.iter().map(|l| l.roots.len()).sum();
                assert_eq!(roots, pd.q_roots.len());
                for l in &levels {
                    assert_eq!(l.factors.iter().map(|f| f.dim).sum::<u128>(), l.roots.len() as u128);
                }
            }
        }
    }

    #[test]
    fn opposite_radical_is_dual() {
        let amb = build_root_system(id("E7"));
        for pd in proper_levis(id("E7")).into_iter().step_by(5) {
            let levi = pd.levi.system();
            let map = pd.levi.weight_map();
            for level in q_level_factors(&pd).unwrap() {
                for f in &level.factors {
                    let outside: Vec<usize> = (0..7).filter(|i| !pd.levi_nodes.contains(i)).collect();
                    let lowest = pd
                        .q_roots
                        .iter()
                        .map(|&ri| &amb.positive_roots()[ri])
                        .filter(|r| outside.iter().map(|&i| r.coeffs[i]).collect::<Vec<_>>() == f.shape)
                        .min_by_key(|r| r.height)
                        .unwrap();
                    assert_eq!(map.apply(&lowest.weight).neg(), levi.minus_w0(&f.weight));
                }
            }
        }
    }

    #[test]
    fn shapes_and_bounds() {
        for amb in ["E6", "E7"] {
            let r = verify_abs_shapes(id(amb)).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
        }
        assert_eq!(max_factor_dim(id("E6"), true).unwrap().0, 20);
        assert_eq!(max_factor_dim(id("E6"), false).unwrap().0, 20);
        assert_eq!(max_factor_dim(id("E7"), true).unwrap().0, 35);
        assert!(max_factor_dim(id("E7"), false).unwrap().0 <= 35);
    }

    #[test]
    fn e8_sweep() {
        let r = verify_abs_shapes(id("E8")).unwrap();
        assert_eq!(r.levis_checked, 255);
        assert!(r.passed(), "{:?}", r.violations);
        let (d, w) = max_factor_dim(id("E8"), true).unwrap();
        assert_eq!((d, w.levi_type()), (64, "D7".to_string()));
        let nonsimple = |pd: &ParabolicDatum| !has_a1_component(pd) && pd.levi.components.len() > 1;
        let (d, w) = max_shape_list_bound_where(id("E8"), nonsimple).unwrap().unwrap();
        assert_eq!((d, w.levi_type()), (60, "A3A4".to_string()));
        // The modules actually occurring stay below the bound.
        let (d, w) = max_factor_dim_where(id("E8"), nonsimple).unwrap().unwrap();
        assert_eq!((d, w.levi_type()), (48, "A2D5".to_string()));
    }
}
