//! Quasi-mode specifics: the interval-groupoid nerve, the generator family
//! constructors, and groupoidification with its forgetful comparison.

use std::sync::Arc;

use crate::algebra::{AlgebraicComplex, FillerTable};
use crate::category::{nerve, FiniteCategory};
use crate::error::{AlgError, FreeError};
use crate::free::{staged_attach, AttachOptions, FreeMap, StageBudget, StagedComplex};
use crate::horn::{is_outer, Horn, Mode};
use crate::map::SimplicialMap;
use crate::shapes::{boundary_complex, horn_complex, point};
use crate::simplicial::SimplicialSet;

/// Nerve of the groupoid with two objects and an isomorphism between them,
/// truncated at `dim`.
pub fn interval_nerve(dim: usize) -> Arc<SimplicialSet> {
    nerve(&FiniteCategory::walking_iso(), dim).expect("the walking isomorphism is a groupoid")
}

/// The two object inclusions `pt -> I`.
pub fn interval_inclusions(dim: usize) -> (SimplicialMap, SimplicialMap) {
    let i = interval_nerve(dim);
    let pt = point(dim);
    let x = i.by_token("x").expect("object vertex");
    let y = i.by_token("y").expect("object vertex");
    (
        SimplicialMap::constant(&pt, &i, x).expect("vertex inclusion"),
        SimplicialMap::constant(&pt, &i, y).expect("vertex inclusion"),
    )
}

/// One member of the generating families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `Λ^k(n) -> Δ(n)`
    Horn { n: usize, k: usize },
    /// `∂Δ(n) -> Δ(n)`
    Boundary { n: usize },
    /// `pt -> I`, the first object inclusion into the interval nerve
    Interval,
}

#[derive(Debug)]
pub struct GeneratorResult {
    pub map: FreeMap,
    /// set when the requested member is a plain map but not a listed
    /// generator for the mode
    pub warning: Option<String>,
}

/// Builds the free complexes on both ends of a generating inclusion and the
/// induced filler-preserving map between them.
pub fn generating_maps(
    mode: Mode,
    kind: GeneratorKind,
    dim: usize,
    budget: &StageBudget,
) -> Result<GeneratorResult, FreeError> {
    let (incl, warning) = match kind {
        GeneratorKind::Horn { n, k } => {
            if !mode.admits(n, k) {
                return Err(FreeError::NotAdmitted(
                    crate::horn::HornDescriptor {
                        n,
                        k,
                        faces: Vec::new(),
                    },
                    mode,
                ));
            }
            let (_, incl) = horn_complex(n, k, dim).map_err(FreeError::Sset)?;
            (incl, None)
        }
        GeneratorKind::Boundary { n } => {
            let (_, incl) = boundary_complex(n, dim).map_err(FreeError::Sset)?;
            (incl, None)
        }
        GeneratorKind::Interval => {
            let (incl, _) = interval_inclusions(dim);
            let warning = match mode {
                Mode::Quasi => None,
                Mode::Kan => Some(
                    "pt -> I is a map of complexes but not a listed generator in kan mode"
                        .to_string(),
                ),
            };
            (incl, warning)
        }
    };
    let map = crate::free::free_map(&incl, mode, budget)?;
    Ok(GeneratorResult { map, warning })
}

pub struct Groupoidified {
    /// staged result in Kan mode; the table holds the retained inner
    /// fillers plus the attached outer ones
    pub staged: StagedComplex,
    /// outer horns of the final complex without entries
    pub residue_outer: Vec<Horn>,
    /// inner horns not covered: outer-only attachment never fills the
    /// inner horns its new cells create
    pub residue_inner: Vec<Horn>,
}

/// Freely adds fillers for outer horns to an algebraic quasi-category,
/// stage by stage with the usual non-factoring rule, keeping the inner
/// fillers untouched. The result lives in Kan mode; inner horns created by
/// the new cells are reported, not filled.
pub fn groupoidify(
    x: &Arc<AlgebraicComplex>,
    budget: &StageBudget,
) -> Result<Groupoidified, FreeError> {
    if x.mode != Mode::Quasi {
        return Err(FreeError::Alg(AlgError::ModeMismatch(x.mode, Mode::Quasi)));
    }
    let opts = AttachOptions {
        mode: Mode::Kan,
        outer_only: true,
        exec: Default::default(),
        oracle: false,
    };
    let staged = staged_attach(Arc::clone(&x.sset), x.table.clone(), budget, &opts)?;
    let (residue_outer, residue_inner) = staged
        .residue
        .iter()
        .cloned()
        .partition(|h| is_outer(h.n(), h.k()));
    Ok(Groupoidified {
        staged,
        residue_outer,
        residue_inner,
    })
}

/// Forgets the outer-horn fillers of an algebraic Kan complex, leaving an
/// algebraic quasi-category on the same underlying complex.
pub fn forget_outer(x: &Arc<AlgebraicComplex>) -> Result<Arc<AlgebraicComplex>, AlgError> {
    if x.mode != Mode::Kan {
        return Err(AlgError::ModeMismatch(x.mode, Mode::Kan));
    }
    let table: FillerTable = x
        .table
        .iter()
        .filter(|(h, _)| !is_outer(h.n(), h.k()))
        .map(|(h, f)| (h.clone(), f))
        .collect();
    Ok(Arc::new(AlgebraicComplex {
        sset: Arc::clone(&x.sset),
        mode: Mode::Quasi,
        table,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{choose_fillers, make_algebraic};
    use crate::free::free;
    use crate::iso::find_isomorphism;

    #[test]
    fn interval_nerve_profile() {
        let i0 = interval_nerve(0);
        assert_eq!(i0.level_len(0), 2);
        let i3 = interval_nerve(3);
        assert_eq!(i3.nondeg_profile(), vec![2, 2, 2, 2]);
        let (a, b) = interval_inclusions(3);
        assert!(a.is_levelwise_injective());
        assert!(b.is_levelwise_injective());
        assert!(a.validate().is_empty());
        assert!(b.validate().is_empty());
    }

    #[test]
    fn quasi_inner_generator_is_injective() {
        let g = generating_maps(
            Mode::Quasi,
            GeneratorKind::Horn { n: 2, k: 1 },
            2,
            &StageBudget::new(1),
        )
        .unwrap();
        assert!(g.warning.is_none());
        assert!(g.map.morphism.map.is_levelwise_injective());
        assert!(g.map.morphism.check().unwrap().is_empty());
    }

    #[test]
    fn outer_horn_rejected_in_quasi_mode() {
        let err = generating_maps(
            Mode::Quasi,
            GeneratorKind::Horn { n: 2, k: 0 },
            2,
            &StageBudget::new(1),
        )
        .unwrap_err();
        assert!(matches!(err, FreeError::NotAdmitted(_, _)));
    }

    #[test]
    fn interval_generator_warns_in_kan_mode() {
        let g = generating_maps(Mode::Kan, GeneratorKind::Interval, 1, &StageBudget::new(1))
            .unwrap();
        assert!(g.warning.is_some());
        let g = generating_maps(Mode::Quasi, GeneratorKind::Interval, 1, &StageBudget::new(1))
            .unwrap();
        assert!(g.warning.is_none());
    }

    #[test]
    fn boundary_generator_at_zero_budget_is_the_plain_inclusion() {
        let g = generating_maps(
            Mode::Kan,
            GeneratorKind::Boundary { n: 1 },
            1,
            &StageBudget::new(0),
        )
        .unwrap();
        assert!(g.map.source.result.table.is_empty());
        assert!(g.map.target.result.table.is_empty());
        assert!(!g.map.source.residue.is_empty());
    }

    #[test]
    fn groupoidify_point_matches_kan_free() {
        let pt = point(1);
        let quasi_pt = make_algebraic(
            Arc::clone(&pt),
            Mode::Quasi,
            choose_fillers(&pt, Mode::Quasi).unwrap(),
        )
        .unwrap();
        for m in 0..=2 {
            let g = groupoidify(&quasi_pt, &StageBudget::new(m)).unwrap();
            let f = free(&pt, Mode::Kan, &StageBudget::new(m)).unwrap();
            assert!(
                find_isomorphism(&g.staged.result.sset, &f.result.sset).is_some(),
                "stage budget {m}"
            );
            assert_eq!(g.staged.result.table.len(), f.result.table.len());
            assert!(g.residue_inner.is_empty(), "no inner horns at D=1");
        }
    }

    #[test]
    fn groupoidify_nerve_attaches_outer_cells_despite_existing_fillers() {
        let n = interval_nerve(2);
        let alg = make_algebraic(
            Arc::clone(&n),
            Mode::Quasi,
            choose_fillers(&n, Mode::Quasi).unwrap(),
        )
        .unwrap();
        let g = groupoidify(&alg, &StageBudget::new(1)).unwrap();
        let attached: usize = g
            .staged
            .rows
            .iter()
            .filter(|r| r.stage == 1)
            .map(|r| r.attached)
            .sum();
        assert!(attached > 0, "outer gluing happens even over fillable horns");
        // inner fillers retained
        for (h, f) in alg.table.iter() {
            assert_eq!(g.staged.result.table.get(h), Some(f));
        }
        // new cells create uncovered inner horns
        assert!(!g.residue_inner.is_empty());
    }

    #[test]
    fn forget_outer_drops_exactly_the_outer_entries() {
        let pt = point(2);
        let kan = make_algebraic(
            Arc::clone(&pt),
            Mode::Kan,
            choose_fillers(&pt, Mode::Kan).unwrap(),
        )
        .unwrap();
        let outer = kan
            .table
            .iter()
            .filter(|(h, _)| is_outer(h.n(), h.k()))
            .count();
        let quasi = forget_outer(&kan).unwrap();
        assert_eq!(quasi.table.len() + outer, kan.table.len());
        assert!(quasi.is_total().unwrap());
    }

    #[test]
    fn forget_after_groupoidify_restores_stage_zero_table() {
        let n = interval_nerve(2);
        let alg = make_algebraic(
            Arc::clone(&n),
            Mode::Quasi,
            choose_fillers(&n, Mode::Quasi).unwrap(),
        )
        .unwrap();
        let g = groupoidify(&alg, &StageBudget::new(1)).unwrap();
        let kan_result = Arc::new(g.staged.result.clone());
        let back = forget_outer(&kan_result).unwrap();
        for (h, f) in alg.table.iter() {
            assert_eq!(back.table.get(h), Some(f));
        }
    }
}
