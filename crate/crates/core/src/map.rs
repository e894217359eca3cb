//! Maps of truncated simplicial sets: levelwise functions that commute with
//! every face and degeneracy operator in range.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::SsetError;
use crate::par::{map_indexed, Exec};
use crate::report::{ValidationReport, Violation};
use crate::simplicial::{SimplexId, SimplicialSet};

#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    comp: Vec<Vec<u32>>,
}

impl SimplicialMap {
    /// Builds a map from explicit levelwise components. Only arity and index
    /// bounds are checked here; operator commutation is the business of
    /// [`SimplicialMap::validate`].
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        comp: Vec<Vec<u32>>,
    ) -> Result<Self, SsetError> {
        if source.truncation() != target.truncation() {
            return Err(SsetError::TruncationMismatch(
                source.truncation(),
                target.truncation(),
            ));
        }
        if comp.len() != source.truncation() + 1 {
            return Err(SsetError::BadComponent {
                level: comp.len(),
                expected: source.truncation() + 1,
                got: comp.len(),
            });
        }
        for (n, level) in comp.iter().enumerate() {
            if level.len() != source.level_len(n) {
                return Err(SsetError::BadComponent {
                    level: n,
                    expected: source.level_len(n),
                    got: level.len(),
                });
            }
            if let Some(bad) = level.iter().find(|i| **i as usize >= target.level_len(n)) {
                return Err(SsetError::InvalidParameter(format!(
                    "component at level {n} maps to out-of-range index {bad}"
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            comp,
        })
    }

    pub fn identity(x: &Arc<SimplicialSet>) -> Self {
        let comp = (0..=x.truncation())
            .map(|n| (0..x.level_len(n) as u32).collect())
            .collect();
        SimplicialMap {
            source: Arc::clone(x),
            target: Arc::clone(x),
            comp,
        }
    }

    /// The inclusion of a complex that is a creation-order prefix of `big`
    /// (same tokens, operators restricted). Errors if `small` is not such a
    /// prefix.
    pub fn prefix_inclusion(
        small: &Arc<SimplicialSet>,
        big: &Arc<SimplicialSet>,
    ) -> Result<Self, SsetError> {
        if small.truncation() != big.truncation() {
            return Err(SsetError::TruncationMismatch(
                small.truncation(),
                big.truncation(),
            ));
        }
        for n in 0..=small.truncation() {
            if small.level_len(n) > big.level_len(n) {
                return Err(SsetError::InvalidParameter(format!(
                    "level {n} is larger than the ambient complex"
                )));
            }
            for s in small.simplices(n) {
                if small.token(s) != big.token(SimplexId::new(n, s.index())) {
                    return Err(SsetError::InvalidParameter(format!(
                        "token mismatch at level {n} position {}",
                        s.index()
                    )));
                }
            }
        }
        let comp = (0..=small.truncation())
            .map(|n| (0..small.level_len(n) as u32).collect())
            .collect();
        SimplicialMap::new(Arc::clone(small), Arc::clone(big), comp)
    }

    /// The unique map collapsing everything onto the degeneracy tower of one
    /// vertex of the target.
    pub fn constant(
        source: &Arc<SimplicialSet>,
        target: &Arc<SimplicialSet>,
        vertex: SimplexId,
    ) -> Result<Self, SsetError> {
        if vertex.dim() != 0 || vertex.index() >= target.level_len(0) {
            return Err(SsetError::InvalidParameter("not a target vertex".into()));
        }
        let mut tower = vec![vertex];
        for n in 0..target.truncation() {
            let prev = tower[n];
            tower.push(target.degeneracy(prev, n).expect("within truncation"));
        }
        let comp = (0..=source.truncation())
            .map(|n| vec![tower[n].index() as u32; source.level_len(n)])
            .collect();
        SimplicialMap::new(Arc::clone(source), Arc::clone(target), comp)
    }

    /// Builds a map from a token-to-token assignment. The assignment must
    /// cover every nondegenerate source simplex; images of degenerate
    /// simplices are forced (`f(s_i x) = s_i f(x)`) and any explicitly given
    /// degenerate assignments are checked against the forced value.
    pub fn from_tokens(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        mapping: &BTreeMap<String, String>,
    ) -> Result<Self, SsetError> {
        if source.truncation() != target.truncation() {
            return Err(SsetError::TruncationMismatch(
                source.truncation(),
                target.truncation(),
            ));
        }
        let mut comp: Vec<Vec<u32>> = (0..=source.truncation())
            .map(|n| vec![u32::MAX; source.level_len(n)])
            .collect();
        for (from, to) in mapping {
            let s = source
                .by_token(from)
                .ok_or_else(|| SsetError::UnknownToken(from.clone()))?;
            let t = target
                .by_token(to)
                .ok_or_else(|| SsetError::UnknownToken(to.clone()))?;
            if s.dim() != t.dim() {
                return Err(SsetError::InvalidParameter(format!(
                    "`{from}` and `{to}` have different dimensions"
                )));
            }
            comp[s.dim()][s.index()] = t.index() as u32;
        }
        // force degenerate images level by level
        for n in 1..=source.truncation() {
            for s in source.simplices(n) {
                let Some((i, base)) = source.degeneracy_preimage(s) else {
                    continue;
                };
                let fb = comp[n - 1][base.index()];
                if fb == u32::MAX {
                    return Err(SsetError::InvalidParameter(format!(
                        "mapping misses nondegenerate simplex `{}`",
                        source.token(base)
                    )));
                }
                let forced = target
                    .degeneracy(SimplexId::new(n - 1, fb as usize), i)
                    .expect("within truncation");
                let slot = &mut comp[n][s.index()];
                if *slot != u32::MAX && *slot != forced.index() as u32 {
                    return Err(SsetError::InvalidParameter(format!(
                        "mapping of degenerate simplex `{}` contradicts its base",
                        source.token(s)
                    )));
                }
                *slot = forced.index() as u32;
            }
        }
        for (n, level) in comp.iter().enumerate() {
            if let Some(idx) = level.iter().position(|v| *v == u32::MAX) {
                return Err(SsetError::InvalidParameter(format!(
                    "mapping misses simplex `{}`",
                    source.token(SimplexId::new(n, idx))
                )));
            }
        }
        SimplicialMap::new(source, target, comp)
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn apply(&self, id: SimplexId) -> SimplexId {
        SimplexId::new(id.dim(), self.comp[id.dim()][id.index()] as usize)
    }

    /// `self` then `next` (i.e. `next` after `self`). The intermediate
    /// complexes must agree, by pointer or structurally.
    pub fn then(&self, next: &SimplicialMap) -> Result<SimplicialMap, SsetError> {
        if !Arc::ptr_eq(&self.target, &next.source) && self.target != next.source {
            return Err(SsetError::NotComposable);
        }
        let comp = self
            .comp
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .iter()
                    .map(|i| next.comp[n][*i as usize])
                    .collect()
            })
            .collect();
        SimplicialMap::new(Arc::clone(&self.source), Arc::clone(&next.target), comp)
    }

    /// Empty report iff the map commutes with every operator in range.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(Exec::default())
    }

    pub fn validate_with(&self, exec: Exec) -> ValidationReport {
        let mut violations = Vec::new();
        let d = self.source.truncation();
        for n in 0..=d {
            let level = map_indexed(exec, self.source.level_len(n), |idx| {
                let mut out = Vec::new();
                let s = SimplexId::new(n, idx);
                let fs = self.apply(s);
                if n >= 1 {
                    for i in 0..=n {
                        let lhs = self.apply(self.source.face(s, i));
                        let rhs = self.target.face(fs, i);
                        if lhs != rhs {
                            out.push(Violation {
                                simplex: self.source.token(s).to_string(),
                                identity: format!("f d_{i} = d_{i} f"),
                                detail: format!(
                                    "{} vs {}",
                                    self.target.token(lhs),
                                    self.target.token(rhs)
                                ),
                            });
                        }
                    }
                }
                if n < d {
                    for i in 0..=n {
                        let lhs = self.apply(self.source.degeneracy(s, i).unwrap());
                        let rhs = self.target.degeneracy(fs, i).unwrap();
                        if lhs != rhs {
                            out.push(Violation {
                                simplex: self.source.token(s).to_string(),
                                identity: format!("f s_{i} = s_{i} f"),
                                detail: format!(
                                    "{} vs {}",
                                    self.target.token(lhs),
                                    self.target.token(rhs)
                                ),
                            });
                        }
                    }
                }
                out
            });
            violations.extend(level.into_iter().flatten());
        }
        ValidationReport { violations }
    }

    pub fn is_levelwise_injective(&self) -> bool {
        self.comp.iter().all(|level| {
            let mut seen = vec![false; self.target_level_capacity(level)];
            level.iter().all(|i| {
                let slot = &mut seen[*i as usize];
                !std::mem::replace(slot, true)
            })
        })
    }

    fn target_level_capacity(&self, level: &[u32]) -> usize {
        level.iter().map(|i| *i as usize + 1).max().unwrap_or(0)
    }

    pub fn is_levelwise_surjective(&self) -> bool {
        (0..=self.target.truncation()).all(|n| {
            let mut seen = vec![false; self.target.level_len(n)];
            for i in &self.comp[n] {
                seen[*i as usize] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_levelwise_bijective(&self) -> bool {
        (0..=self.source.truncation())
            .all(|n| self.source.level_len(n) == self.target.level_len(n))
            && self.is_levelwise_injective()
    }

    /// Inverse of a levelwise bijection.
    pub fn inverse(&self) -> Result<SimplicialMap, SsetError> {
        if !self.is_levelwise_bijective() {
            return Err(SsetError::InvalidParameter(
                "map is not levelwise bijective".into(),
            ));
        }
        let comp = self
            .comp
            .iter()
            .enumerate()
            .map(|(n, level)| {
                let mut inv = vec![0u32; self.target.level_len(n)];
                for (src, tgt) in level.iter().enumerate() {
                    inv[*tgt as usize] = src as u32;
                }
                inv
            })
            .collect();
        SimplicialMap::new(Arc::clone(&self.target), Arc::clone(&self.source), comp)
    }

    /// Levelwise equality of components (sources and targets must match).
    pub fn same_as(&self, other: &SimplicialMap) -> bool {
        (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
            && self.comp == other.comp
    }

    /// The image as a levelwise subset of the target.
    pub fn image(&self) -> crate::simplicial::LevelSubset {
        let mut sub = crate::simplicial::LevelSubset::empty(&self.target);
        for (n, level) in self.comp.iter().enumerate() {
            for i in level {
                sub.levels[n][*i as usize] = true;
            }
        }
        sub
    }
}

impl std::fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SimplicialMap({:?} -> {:?})",
            self.source.as_ref(),
            self.target.as_ref()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::standard_simplex;

    #[test]
    fn identity_validates() {
        let x = standard_simplex(2, 2);
        let id = SimplicialMap::identity(&x);
        assert!(id.validate().is_empty());
        assert!(id.is_levelwise_bijective());
    }

    #[test]
    fn constant_map_validates() {
        let x = standard_simplex(2, 2);
        let pt = standard_simplex(0, 2);
        let v = pt.by_token("0").unwrap();
        let c = SimplicialMap::constant(&x, &pt, v).unwrap();
        assert!(c.validate().is_empty(), "{}", c.validate());
        assert!(c.is_levelwise_surjective());
    }

    #[test]
    fn broken_component_is_reported() {
        let x = standard_simplex(1, 1);
        // swap the two vertices but keep edges fixed: breaks naturality
        let mut comp: Vec<Vec<u32>> = (0..=1)
            .map(|n| (0..x.level_len(n) as u32).collect())
            .collect();
        comp[0].swap(0, 1);
        let f = SimplicialMap::new(Arc::clone(&x), Arc::clone(&x), comp).unwrap();
        let report = f.validate();
        assert!(!report.is_empty());
    }
}
