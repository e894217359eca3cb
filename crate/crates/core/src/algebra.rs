//! Algebraic complexes: a simplicial set together with a distinguished
//! filler for each admitted horn, morphisms that preserve the distinguished
//! fillers, the counit evaluation onto a staged free complex, and split
//! coequalizers.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::colimit::coequalizer;
use crate::error::AlgError;
use crate::horn::{enumerate_horns_with, map_horn, Horn, Mode};
use crate::map::SimplicialMap;
use crate::par::{map_indexed, Exec};
use crate::report::{AlgDefects, PreservationReport, PreservationViolation, Violation};
use crate::simplicial::{SimplexId, SimplicialSet};

/// Finite assignment of distinguished fillers, keyed by horn.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FillerTable {
    entries: BTreeMap<Horn, SimplexId>,
}

impl FillerTable {
    pub fn new() -> Self {
        FillerTable::default()
    }

    pub fn insert(&mut self, horn: Horn, filler: SimplexId) -> Option<SimplexId> {
        self.entries.insert(horn, filler)
    }

    pub fn get(&self, horn: &Horn) -> Option<SimplexId> {
        self.entries.get(horn).copied()
    }

    pub fn contains(&self, horn: &Horn) -> bool {
        self.entries.contains_key(horn)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Horn, SimplexId)> {
        self.entries.iter().map(|(h, f)| (h, *f))
    }
}

impl FromIterator<(Horn, SimplexId)> for FillerTable {
    fn from_iter<T: IntoIterator<Item = (Horn, SimplexId)>>(iter: T) -> Self {
        FillerTable {
            entries: iter.into_iter().collect(),
        }
    }
}

/// A complex with a table of distinguished fillers. The table may be
/// partial (staged constructions stop at a finite budget and report the
/// remainder); [`make_algebraic`] is the validating constructor that also
/// enforces totality-at-truncation.
#[derive(Clone, Debug)]
pub struct AlgebraicComplex {
    pub sset: Arc<SimplicialSet>,
    pub mode: Mode,
    pub table: FillerTable,
}

impl AlgebraicComplex {
    /// Wraps parts without totality enforcement; the face law and mode
    /// admission are still checked.
    pub fn from_parts(
        sset: Arc<SimplicialSet>,
        mode: Mode,
        table: FillerTable,
    ) -> Result<Arc<Self>, AlgDefects> {
        let value = AlgebraicComplex { sset, mode, table };
        let defects = value.local_defects();
        if defects.is_empty() {
            Ok(Arc::new(value))
        } else {
            Err(defects)
        }
    }

    /// Face-law and admission defects of the current table (missing horns
    /// are computed separately since they need a full enumeration).
    fn local_defects(&self) -> AlgDefects {
        let mut defects = AlgDefects::default();
        for (h, filler) in self.table.iter() {
            if !self.mode.admits(h.n(), h.k()) {
                defects.inadmissible.push(h.describe(&self.sset));
            }
            if h.n() > self.sset.truncation()
                || !h.is_valid_in(&self.sset)
                || filler.dim() != h.n()
                || filler.index() >= self.sset.level_len(filler.dim())
            {
                defects.face_violations.push(Violation {
                    simplex: format!("{}", h.describe(&self.sset)),
                    identity: "filler condition".into(),
                    detail: "horn or filler out of range".into(),
                });
                continue;
            }
            for i in Horn::slots(h.n(), h.k()) {
                let got = self.sset.face(filler, i);
                if got != h.face(i) {
                    defects.face_violations.push(Violation {
                        simplex: self.sset.token(filler).to_string(),
                        identity: format!("d_{i} F(h) = σ_{i}"),
                        detail: format!(
                            "{} vs {}",
                            self.sset.token(got),
                            self.sset.token(h.face(i))
                        ),
                    });
                }
            }
        }
        defects
    }

    /// Admitted horns of the underlying complex without a table entry.
    pub fn missing_horns(&self) -> Result<Vec<Horn>, AlgError> {
        self.missing_horns_with(Exec::default())
    }

    pub fn missing_horns_with(&self, exec: Exec) -> Result<Vec<Horn>, AlgError> {
        if self.sset.truncation() < self.mode.min_dim() {
            return Ok(Vec::new());
        }
        let all = enumerate_horns_with(
            &self.sset,
            self.mode,
            self.mode.min_dim()..=self.sset.truncation(),
            exec,
        )
        .map_err(AlgError::Sset)?;
        Ok(all
            .into_iter()
            .filter(|h| !self.table.contains(h))
            .collect())
    }

    pub fn is_total(&self) -> Result<bool, AlgError> {
        Ok(self.missing_horns()?.is_empty())
    }
}

/// Validates the filler condition and totality-at-truncation, returning the
/// assembled complex or the full defect report.
pub fn make_algebraic(
    sset: Arc<SimplicialSet>,
    mode: Mode,
    table: FillerTable,
) -> Result<Arc<AlgebraicComplex>, AlgDefects> {
    let value = AlgebraicComplex { sset, mode, table };
    let mut defects = value.local_defects();
    match value.missing_horns_with(Exec::default()) {
        Ok(missing) => {
            defects.missing = missing.iter().map(|h| h.describe(&value.sset)).collect()
        }
        Err(e) => defects.face_violations.push(Violation {
            simplex: String::new(),
            identity: "horn enumeration".into(),
            detail: e.to_string(),
        }),
    }
    if defects.is_empty() {
        Ok(Arc::new(value))
    } else {
        Err(defects)
    }
}

/// Builds a total filler table by choosing, for every admitted horn, the
/// least existing filler in creation order. Fails on the first horn with no
/// filler at all.
pub fn choose_fillers(sset: &Arc<SimplicialSet>, mode: Mode) -> Result<FillerTable, AlgError> {
    let mut table = FillerTable::new();
    if sset.truncation() < mode.min_dim() {
        return Ok(table);
    }
    let horns = enumerate_horns_with(
        sset,
        mode,
        mode.min_dim()..=sset.truncation(),
        Exec::default(),
    )
    .map_err(AlgError::Sset)?;
    for h in horns {
        let fillers = crate::horn::find_fillers(sset, &h).map_err(AlgError::Sset)?;
        match fillers.first() {
            Some(f) => {
                table.insert(h, *f);
            }
            None => return Err(AlgError::NotTotal(h.describe(sset))),
        }
    }
    Ok(table)
}

/// Empty report iff `map` sends every distinguished filler of `src` to the
/// distinguished filler of the image horn in `tgt`.
pub fn check_alg_morphism(
    map: &SimplicialMap,
    src: &AlgebraicComplex,
    tgt: &AlgebraicComplex,
) -> Result<PreservationReport, AlgError> {
    check_alg_morphism_with(map, src, tgt, Exec::default())
}

pub fn check_alg_morphism_with(
    map: &SimplicialMap,
    src: &AlgebraicComplex,
    tgt: &AlgebraicComplex,
    exec: Exec,
) -> Result<PreservationReport, AlgError> {
    if src.mode != tgt.mode {
        return Err(AlgError::ModeMismatch(src.mode, tgt.mode));
    }
    let entries: Vec<(&Horn, SimplexId)> = src.table.iter().collect();
    let violations = map_indexed(exec, entries.len(), |i| {
        let (h, filler) = entries[i];
        let image_horn = map_horn(map, h);
        let actual = map.apply(filler);
        match tgt.table.get(&image_horn) {
            Some(expected) if expected == actual => None,
            Some(expected) => Some(PreservationViolation {
                horn: image_horn.describe(&tgt.sset),
                expected: Some(tgt.sset.token(expected).to_string()),
                actual: tgt.sset.token(actual).to_string(),
            }),
            None => Some(PreservationViolation {
                horn: image_horn.describe(&tgt.sset),
                expected: None,
                actual: tgt.sset.token(actual).to_string(),
            }),
        }
    });
    Ok(PreservationReport {
        violations: violations.into_iter().flatten().collect(),
    })
}

/// A validated filler-preserving map between algebraic complexes.
#[derive(Clone)]
pub struct AlgMorphism {
    pub src: Arc<AlgebraicComplex>,
    pub tgt: Arc<AlgebraicComplex>,
    pub map: SimplicialMap,
}

impl AlgMorphism {
    pub fn new(
        src: Arc<AlgebraicComplex>,
        tgt: Arc<AlgebraicComplex>,
        map: SimplicialMap,
    ) -> Result<Self, AlgError> {
        let report = check_alg_morphism(&map, &src, &tgt)?;
        if !report.is_empty() {
            return Err(AlgError::InvalidDiagram(format!(
                "map does not preserve distinguished fillers:\n{report}"
            )));
        }
        Ok(AlgMorphism { src, tgt, map })
    }

    pub fn identity(x: &Arc<AlgebraicComplex>) -> Self {
        AlgMorphism {
            src: Arc::clone(x),
            tgt: Arc::clone(x),
            map: SimplicialMap::identity(&x.sset),
        }
    }

    pub fn then(&self, next: &AlgMorphism) -> Result<AlgMorphism, AlgError> {
        let map = self.map.then(&next.map).map_err(AlgError::Sset)?;
        Ok(AlgMorphism {
            src: Arc::clone(&self.src),
            tgt: Arc::clone(&next.tgt),
            map,
        })
    }

    pub fn check(&self) -> Result<PreservationReport, AlgError> {
        check_alg_morphism(&self.map, &self.src, &self.tgt)
    }
}

impl std::fmt::Debug for AlgMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgMorphism({:?})", self.map)
    }
}

/// The evaluation map `ε : F U(Z) -> Z`: identity on stage 0, and each
/// attached filler (with its missing face) lands on the distinguished
/// filler of its image horn. Requires `Z` total.
pub fn counit_eval(
    z: &Arc<AlgebraicComplex>,
    fuz: &crate::free::StagedComplex,
) -> Result<AlgMorphism, AlgError> {
    if fuz.base != z.sset {
        return Err(AlgError::WrongBase);
    }
    let map = crate::free::extend_over_free(fuz, &SimplicialMap::identity(&z.sset), z)
        .map_err(|e| AlgError::CorruptStaged(e.to_string()))?;
    AlgMorphism::new(Arc::new(fuz.result.clone()), Arc::clone(z), map)
}

pub struct SplitCoequalizer {
    pub coeq: Arc<AlgebraicComplex>,
    pub projection: AlgMorphism,
}

/// Coequalizer of a split pair in the algebraic category: the underlying
/// levelwise coequalizer `π : Y -> Q`, with the filler of a horn `h` of `Q`
/// defined as `π` of the distinguished filler of `s ∘ h`.
///
/// `s` must be a section of the projection and `t` a section of `f` with
/// `g ∘ t = s ∘ π`. Both ends of the pair must be total.
pub fn split_coequalizer(
    f: &AlgMorphism,
    g: &AlgMorphism,
    s: &SimplicialMap,
    t: &SimplicialMap,
) -> Result<SplitCoequalizer, AlgError> {
    if f.src.mode != g.src.mode {
        return Err(AlgError::ModeMismatch(f.src.mode, g.src.mode));
    }
    let mode = f.src.mode;
    let y = &f.tgt;
    let q = coequalizer(&f.map, &g.map)?;
    let proj = &q.legs[0];
    if s.source() != &q.apex || s.target() != &y.sset {
        return Err(AlgError::InvalidSplit(
            "s must map the coequalizer into the pair's target".into(),
        ));
    }
    if !s
        .then(proj)
        .map_err(AlgError::Sset)?
        .same_as(&SimplicialMap::identity(&q.apex))
    {
        return Err(AlgError::InvalidSplit("π ∘ s ≠ id".into()));
    }
    if !t
        .then(&f.map)
        .map_err(AlgError::Sset)?
        .same_as(&SimplicialMap::identity(&y.sset))
    {
        return Err(AlgError::InvalidSplit("f ∘ t ≠ id".into()));
    }
    let lhs = t.then(&g.map).map_err(AlgError::Sset)?;
    let rhs = proj.then(s).map_err(AlgError::Sset)?;
    if !lhs.same_as(&rhs) {
        return Err(AlgError::InvalidSplit("g ∘ t ≠ s ∘ π".into()));
    }
    // fillers through the section
    let mut table = FillerTable::new();
    if q.apex.truncation() >= mode.min_dim() {
        let horns = enumerate_horns_with(
            &q.apex,
            mode,
            mode.min_dim()..=q.apex.truncation(),
            Exec::default(),
        )
        .map_err(AlgError::Sset)?;
        for h in horns {
            let lifted = map_horn(s, &h);
            let filler = y
                .table
                .get(&lifted)
                .ok_or_else(|| AlgError::NotTotal(lifted.describe(&y.sset)))?;
            table.insert(h, proj.apply(filler));
        }
    }
    let coeq = make_algebraic(Arc::clone(&q.apex), mode, table)
        .map_err(|d| AlgError::InvalidSplit(format!("induced table invalid:\n{d}")))?;
    // π preserves fillers; failure signals invalid split data
    let report = check_alg_morphism(proj, y, &coeq)?;
    if !report.is_empty() {
        return Err(AlgError::InvalidSplit(format!(
            "projection does not preserve fillers:\n{report}"
        )));
    }
    let projection = AlgMorphism {
        src: Arc::clone(y),
        tgt: Arc::clone(&coeq),
        map: proj.clone(),
    };
    Ok(SplitCoequalizer { coeq, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{nerve, FiniteCategory};
    use crate::horn::find_fillers;
    use crate::shapes::{horn_complex, point};

    #[test]
    fn algebraic_point_in_kan_mode() {
        let pt = point(1);
        let table = choose_fillers(&pt, Mode::Kan).unwrap();
        assert_eq!(table.len(), 2);
        let alg = make_algebraic(Arc::clone(&pt), Mode::Kan, table).unwrap();
        assert!(alg.is_total().unwrap());
    }

    #[test]
    fn nerve_tables_are_forced_in_quasi_mode() {
        let n = nerve(&FiniteCategory::walking_iso(), 2).unwrap();
        let table = choose_fillers(&n, Mode::Quasi).unwrap();
        for (h, filler) in table.iter() {
            let all = find_fillers(&n, h).unwrap();
            assert_eq!(all, vec![filler], "inner fillers in a nerve are unique");
        }
        let alg = make_algebraic(Arc::clone(&n), Mode::Quasi, table).unwrap();
        assert!(alg.is_total().unwrap());
    }

    #[test]
    fn missing_entry_is_rejected() {
        let (lam, _) = horn_complex(2, 1, 2).unwrap();
        let err = make_algebraic(Arc::clone(&lam), Mode::Quasi, FillerTable::new())
            .expect_err("defining horn is unfilled");
        assert!(!err.missing.is_empty());
    }

    #[test]
    fn inadmissible_entries_are_rejected() {
        let pt = point(1);
        let v = pt.by_token("0").unwrap();
        let mut table = FillerTable::new();
        let h = Horn::new(1, 0, vec![v]).unwrap();
        let degen = pt.degeneracy(v, 0).unwrap();
        table.insert(h, degen);
        // fine in Kan mode
        assert!(make_algebraic(Arc::clone(&pt), Mode::Kan, table.clone()).is_ok());
        // the same outer-horn entry is not admitted in quasi mode
        let err = AlgebraicComplex::from_parts(Arc::clone(&pt), Mode::Quasi, table)
            .expect_err("outer horn not admitted in quasi mode");
        assert!(!err.inadmissible.is_empty());
    }

    #[test]
    fn identity_preserves_fillers() {
        let pt = point(1);
        let table = choose_fillers(&pt, Mode::Kan).unwrap();
        let alg = make_algebraic(Arc::clone(&pt), Mode::Kan, table).unwrap();
        let id = AlgMorphism::identity(&alg);
        assert!(id.check().unwrap().is_empty());
    }

    #[test]
    fn nerve_functor_images_preserve_composition_fillers() {
        use crate::category::{nerve_map, CatFunctor};
        let g = FiniteCategory::walking_iso();
        let t = FiniteCategory::terminal();
        let ng = nerve(&g, 2).unwrap();
        let nt = nerve(&t, 2).unwrap();
        let alg_g = make_algebraic(
            Arc::clone(&ng),
            Mode::Quasi,
            choose_fillers(&ng, Mode::Quasi).unwrap(),
        )
        .unwrap();
        let alg_t = make_algebraic(
            Arc::clone(&nt),
            Mode::Quasi,
            choose_fillers(&nt, Mode::Quasi).unwrap(),
        )
        .unwrap();
        let collapse = CatFunctor {
            obj_map: vec![0, 0],
            mor_map: vec![0, 0, 0, 0],
        };
        let f = nerve_map(&collapse, &g, &t, &ng, &nt).unwrap();
        let report = check_alg_morphism(&f, &alg_g, &alg_t).unwrap();
        assert!(report.is_empty(), "{report}");
    }

    #[test]
    fn swapped_fillers_break_preservation() {
        // two parallel nondegenerate edges between the same vertices: the
        // swap automorphism is simplicial but does not fix the table
        use crate::simplicial::{Provenance, SsetBuilder};
        let mut b = SsetBuilder::new(1);
        let a = b.add_simplex(0, "a".into(), &[], Provenance::Input).unwrap();
        let c = b.add_simplex(0, "b".into(), &[], Provenance::Input).unwrap();
        b.add_simplex(1, "e1".into(), &[c, a], Provenance::Input)
            .unwrap();
        b.add_simplex(1, "e2".into(), &[c, a], Provenance::Input)
            .unwrap();
        b.close_degeneracies().unwrap();
        let x = b.finish().unwrap();
        let e1 = x.by_token("e1").unwrap();
        let e2 = x.by_token("e2").unwrap();
        let mut table = choose_fillers(&x, Mode::Kan).unwrap();
        let h = Horn::new(1, 0, vec![x.by_token("a").unwrap()]).unwrap();
        assert!(table.contains(&h));
        table.insert(h, e1);
        let alg = make_algebraic(Arc::clone(&x), Mode::Kan, table).unwrap();
        let mut comp: Vec<Vec<u32>> = (0..=1)
            .map(|n| (0..x.level_len(n) as u32).collect())
            .collect();
        comp[1].swap(e1.index(), e2.index());
        let swap = SimplicialMap::new(Arc::clone(&x), Arc::clone(&x), comp).unwrap();
        assert!(swap.validate().is_empty());
        let report = check_alg_morphism(&swap, &alg, &alg).unwrap();
        assert!(!report.is_empty());
    }
}
