//! Semi-final lifts: extend a family of algebraic complexes over a map into
//! a plain complex by first identifying conflicting filler images, then
//! attaching the remaining fillers freely. Colimits of algebraic complexes
//! are computed through this construction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{check_alg_morphism, AlgMorphism, AlgebraicComplex, FillerTable};
use crate::colimit::{chain_colimit, general_colimit, pushout, quotient_by_pairs, ColimitResult, DiagramSpec};
use crate::error::{AlgError, FreeError};
use crate::free::{staged_attach, AttachOptions, StageBudget, StagedComplex};
use crate::horn::{map_horn, Horn, Mode};
use crate::map::SimplicialMap;
use crate::simplicial::{SimplexId, SimplicialSet};

/// A family `{ f_i : U(Y_i) -> X }` feeding the lift construction; all
/// members share one mode and one truncation. The family may be empty, in
/// which case the lift is exactly the free construction on `X`.
pub struct SolidFamily {
    pub mode: Mode,
    pub target: Arc<SimplicialSet>,
    pub members: Vec<(Arc<AlgebraicComplex>, SimplicialMap)>,
}

impl SolidFamily {
    pub fn validate(&self) -> Result<(), AlgError> {
        for (alg, map) in &self.members {
            if alg.mode != self.mode {
                return Err(AlgError::ModeMismatch(alg.mode, self.mode));
            }
            if map.source() != &alg.sset || map.target() != &self.target {
                return Err(AlgError::InvalidDiagram(
                    "member map endpoints do not match the family".into(),
                ));
            }
            if alg.sset.truncation() != self.target.truncation() {
                return Err(AlgError::Sset(crate::error::SsetError::TruncationMismatch(
                    alg.sset.truncation(),
                    self.target.truncation(),
                )));
            }
        }
        Ok(())
    }
}

/// Result of the filler-identification fixpoint.
pub struct IdentifyOutcome {
    pub quotient: Arc<SimplicialSet>,
    /// projection `X -> X_0`
    pub projection: SimplicialMap,
    /// fillers inherited from the members, now unambiguous
    pub table: FillerTable,
    /// member legs into the quotient
    pub legs: Vec<SimplicialMap>,
    /// quotient rounds performed (0 means the identity)
    pub rounds: usize,
}

/// Collects, for each horn of the current quotient that factors through a
/// member with a table entry, the set of images of the members'
/// distinguished fillers over all such factorizations, and coequalizes
/// every multi-element set; repeats until each set is a singleton.
/// Terminates because a nontrivial quotient strictly reduces the total
/// simplex count at fixed truncation.
pub fn identify_fillers(fam: &SolidFamily) -> Result<IdentifyOutcome, AlgError> {
    fam.validate()?;
    let mut quotient = Arc::clone(&fam.target);
    let mut projection = SimplicialMap::identity(&fam.target);
    let mut legs: Vec<SimplicialMap> = fam.members.iter().map(|(_, f)| f.clone()).collect();
    let mut rounds = 0usize;
    loop {
        let mut images: BTreeMap<Horn, BTreeSet<SimplexId>> = BTreeMap::new();
        for ((alg, _), leg) in fam.members.iter().zip(&legs) {
            for (h, filler) in alg.table.iter() {
                images
                    .entry(map_horn(leg, h))
                    .or_default()
                    .insert(leg.apply(filler));
            }
        }
        let pairs: Vec<(SimplexId, SimplexId)> = images
            .values()
            .filter(|set| set.len() >= 2)
            .flat_map(|set| {
                let v: Vec<SimplexId> = set.iter().copied().collect();
                v.windows(2)
                    .map(|w| (w[0], w[1]))
                    .collect::<Vec<_>>()
            })
            .collect();
        if pairs.is_empty() {
            let table: FillerTable = images
                .into_iter()
                .map(|(h, set)| (h, *set.iter().next().expect("nonempty image set")))
                .collect();
            return Ok(IdentifyOutcome {
                quotient,
                projection,
                table,
                legs,
                rounds,
            });
        }
        let (next, proj) = quotient_by_pairs(&quotient, &pairs)?;
        debug_assert!(next.total_size() < quotient.total_size());
        projection = projection.then(&proj).map_err(AlgError::Sset)?;
        legs = legs
            .iter()
            .map(|l| l.then(&proj))
            .collect::<Result<_, _>>()
            .map_err(AlgError::Sset)?;
        quotient = next;
        rounds += 1;
    }
}

/// A computed semi-final lift.
pub struct SolidLift {
    pub staged: StagedComplex,
    /// structure map `X -> result`
    pub structure: SimplicialMap,
    pub identify: IdentifyOutcome,
    /// member images into the result (each preserves fillers)
    pub member_images: Vec<SimplicialMap>,
}

/// Identification followed by staged free attachment over the horns not
/// covered by the members' fillers.
pub fn solid_lift(fam: &SolidFamily, budget: &StageBudget) -> Result<SolidLift, FreeError> {
    solid_lift_with(fam, budget, &AttachOptions::plain(fam.mode))
}

pub(crate) fn solid_lift_with(
    fam: &SolidFamily,
    budget: &StageBudget,
    opts: &AttachOptions,
) -> Result<SolidLift, FreeError> {
    let identify = identify_fillers(fam).map_err(FreeError::Alg)?;
    let staged = staged_attach(
        Arc::clone(&identify.quotient),
        identify.table.clone(),
        budget,
        opts,
    )?;
    let incl = staged.inclusion()?;
    let structure = identify
        .projection
        .then(&incl)
        .map_err(FreeError::Sset)?;
    let member_images = identify
        .legs
        .iter()
        .map(|l| l.then(&incl))
        .collect::<Result<Vec<_>, _>>()
        .map_err(FreeError::Sset)?;
    // the composites U(Y_i) -> result preserve distinguished fillers
    for ((alg, _), img) in fam.members.iter().zip(&member_images) {
        let report =
            check_alg_morphism(img, alg, &staged.result).map_err(FreeError::Alg)?;
        if !report.is_empty() {
            return Err(FreeError::Alg(AlgError::InvalidDiagram(format!(
                "member image failed filler preservation:\n{report}"
            ))));
        }
    }
    Ok(SolidLift {
        staged,
        structure,
        identify,
        member_images,
    })
}

pub struct PushoutAlongFree {
    pub lift: SolidLift,
    /// the underlying pushout `X = Y ∪_A B` with its legs
    pub base: ColimitResult,
}

/// Pushout of `free(A) -> Y` against `free(A) -> free(B)` in the algebraic
/// category, computed as the plain pushout `Y ∪_A B` followed by the lift
/// along the single member `Y`.
pub fn pushout_along_free(
    i: &SimplicialMap,
    a: &SimplicialMap,
    y: &Arc<AlgebraicComplex>,
    budget: &StageBudget,
) -> Result<PushoutAlongFree, FreeError> {
    if a.target() != &y.sset {
        return Err(FreeError::Alg(AlgError::InvalidDiagram(
            "attaching map must land in the member complex".into(),
        )));
    }
    let base = pushout(a, i).map_err(|e| FreeError::Alg(AlgError::Colimit(e)))?;
    let fam = SolidFamily {
        mode: y.mode,
        target: Arc::clone(&base.apex),
        members: vec![(Arc::clone(y), base.legs[0].clone())],
    };
    let lift = solid_lift(&fam, budget)?;
    Ok(PushoutAlongFree { lift, base })
}

/// A finite diagram of algebraic complexes and filler-preserving maps.
pub struct AlgDiagram {
    pub nodes: Vec<(String, Arc<AlgebraicComplex>)>,
    pub edges: Vec<(Option<String>, String, String, SimplicialMap)>,
}

impl AlgDiagram {
    fn validate(&self) -> Result<Mode, AlgError> {
        let mode = self
            .nodes
            .first()
            .map(|(_, a)| a.mode)
            .ok_or_else(|| AlgError::InvalidDiagram("empty diagram".into()))?;
        for (_, a) in &self.nodes {
            if a.mode != mode {
                return Err(AlgError::ModeMismatch(a.mode, mode));
            }
        }
        let lookup = |name: &str| {
            self.nodes
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, a)| a)
                .ok_or_else(|| AlgError::InvalidDiagram(format!("unknown node `{name}`")))
        };
        for (label, src, tgt, map) in &self.edges {
            let s = lookup(src)?;
            let t = lookup(tgt)?;
            let report = check_alg_morphism(map, s, t)?;
            if !report.is_empty() {
                return Err(AlgError::InvalidDiagram(format!(
                    "edge {} does not preserve fillers:\n{report}",
                    label.clone().unwrap_or_else(|| format!("{src}->{tgt}"))
                )));
            }
        }
        Ok(mode)
    }
}

/// Colimit in the algebraic category: levelwise colimit of the underlying
/// complexes, then the semi-final lift along all colimit legs.
pub fn alg_colimit(diagram: &AlgDiagram, budget: &StageBudget) -> Result<SolidLift, FreeError> {
    let mode = diagram.validate().map_err(FreeError::Alg)?;
    let spec = DiagramSpec::new(
        diagram
            .nodes
            .iter()
            .map(|(n, a)| (n.clone(), Arc::clone(&a.sset)))
            .collect(),
        diagram.edges.clone(),
    )
    .map_err(|e| FreeError::Alg(AlgError::Colimit(e)))?;
    let underlying = general_colimit(&spec).map_err(|e| FreeError::Alg(AlgError::Colimit(e)))?;
    let fam = SolidFamily {
        mode,
        target: Arc::clone(&underlying.apex),
        members: diagram
            .nodes
            .iter()
            .zip(&underlying.legs)
            .map(|((_, a), leg)| (Arc::clone(a), leg.clone()))
            .collect(),
    };
    solid_lift(&fam, budget)
}

pub struct FilteredColimit {
    pub result: Arc<AlgebraicComplex>,
    /// legs of the underlying chain colimit
    pub legs: Vec<SimplicialMap>,
}

/// Filtered (chain) colimit of algebraic complexes along levelwise-injective
/// filler-preserving links: the union of the underlying complexes, with the
/// filler of a horn taken from any chain member containing it. The maps
/// preserve fillers, so the choice cannot conflict; a conflict therefore
/// reports corrupted input.
pub fn alg_filtered_colimit(chain: &[AlgMorphism]) -> Result<FilteredColimit, AlgError> {
    if chain.is_empty() {
        return Err(AlgError::InvalidDiagram("empty chain".into()));
    }
    let mode = chain[0].src.mode;
    for link in chain {
        if link.src.mode != mode {
            return Err(AlgError::ModeMismatch(link.src.mode, mode));
        }
        let report = link.check()?;
        if !report.is_empty() {
            return Err(AlgError::InvalidDiagram(format!(
                "chain link does not preserve fillers:\n{report}"
            )));
        }
    }
    let maps: Vec<SimplicialMap> = chain.iter().map(|l| l.map.clone()).collect();
    let underlying = chain_colimit(&maps)?;
    let mut members: Vec<&Arc<AlgebraicComplex>> = chain.iter().map(|l| &l.src).collect();
    members.push(&chain.last().unwrap().tgt);
    let mut table = FillerTable::new();
    for (member, leg) in members.iter().zip(&underlying.legs) {
        for (h, filler) in member.table.iter() {
            let img_horn = map_horn(leg, h);
            let img_filler = leg.apply(filler);
            if let Some(existing) = table.get(&img_horn) {
                if existing != img_filler {
                    return Err(AlgError::FillerConflict(
                        img_horn.describe(&underlying.apex),
                    ));
                }
            } else {
                table.insert(img_horn, img_filler);
            }
        }
    }
    let result = Arc::new(AlgebraicComplex {
        sset: Arc::clone(&underlying.apex),
        mode,
        table,
    });
    Ok(FilteredColimit {
        result,
        legs: underlying.legs,
    })
}

/// Universal-property witness: a map `X -> U(Z)` whose precomposites with
/// the family legs preserve fillers factors through the lift, uniquely
/// because every simplex of the result is forced (stage-0 classes by the
/// map, attached cells by the extension rule).
pub fn extend_solid(
    lift: &SolidLift,
    phi: &SimplicialMap,
    z: &Arc<AlgebraicComplex>,
) -> Result<AlgMorphism, FreeError> {
    let x = lift.structure.source();
    if phi.source() != x {
        return Err(FreeError::Alg(AlgError::WrongBase));
    }
    // phi must be constant on identification classes, inducing X_0 -> U(Z)
    let q = &lift.identify.quotient;
    let d = q.truncation();
    let mut comp: Vec<Vec<u32>> = (0..=d).map(|n| vec![u32::MAX; q.level_len(n)]).collect();
    for n in 0..=d {
        for s in x.simplices(n) {
            let class = lift.identify.projection.apply(s);
            let val = phi.apply(s).index() as u32;
            let slot = &mut comp[n][class.index()];
            if *slot != u32::MAX && *slot != val {
                return Err(FreeError::Alg(AlgError::InvalidDiagram(format!(
                    "map does not respect the identification of `{}`",
                    q.token(class)
                ))));
            }
            *slot = val;
        }
    }
    let induced = SimplicialMap::new(Arc::clone(q), Arc::clone(&z.sset), comp)
        .map_err(FreeError::Sset)?;
    let map = crate::free::extend_over_free(&lift.staged, &induced, z)?;
    // seeded fillers must land on distinguished fillers of Z
    AlgMorphism::new(Arc::new(lift.staged.result.clone()), Arc::clone(z), map)
        .map_err(FreeError::Alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{choose_fillers, make_algebraic};
    use crate::free::free;
    use crate::shapes::point;
    use crate::simplicial::Provenance;

    fn algebraic_point(dim: usize) -> Arc<AlgebraicComplex> {
        let pt = point(dim);
        make_algebraic(
            Arc::clone(&pt),
            Mode::Kan,
            choose_fillers(&pt, Mode::Kan).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_family_reduces_to_free() {
        let pt = point(1);
        let fam = SolidFamily {
            mode: Mode::Kan,
            target: Arc::clone(&pt),
            members: Vec::new(),
        };
        let lift = solid_lift(&fam, &StageBudget::new(2)).unwrap();
        let plain = free(&pt, Mode::Kan, &StageBudget::new(2)).unwrap();
        assert!(*lift.staged.result.sset == *plain.result.sset);
        assert_eq!(lift.staged.result.table, plain.result.table);
        assert_eq!(lift.identify.rounds, 0);
    }

    #[test]
    fn injective_single_member_identifies_nothing() {
        let y = algebraic_point(1);
        let pt2 = crate::colimit::coproduct(vec![
            ("p".into(), point(1)),
            ("q".into(), point(1)),
        ])
        .unwrap();
        let f = pt2.legs[0].clone();
        let fam = SolidFamily {
            mode: Mode::Kan,
            target: Arc::clone(&pt2.apex),
            members: vec![(y, f)],
        };
        let out = identify_fillers(&fam).unwrap();
        assert_eq!(out.rounds, 0);
        assert!(*out.quotient == *pt2.apex);
        assert_eq!(out.table.len(), 2);
    }

    #[test]
    fn folding_collapses_the_filler_pair() {
        let (fam, y) = crate::fixtures::folding_family();
        // the two distinguished fillers for the folded horn must differ in Y
        let composite_horns: Vec<_> = y
            .table
            .iter()
            .filter(|(h, _)| {
                y.sset.is_nondegenerate(h.face(0)) && y.sset.is_nondegenerate(h.face(2))
            })
            .collect();
        assert_eq!(composite_horns.len(), 2);
        let before = fam.target.level_len(2);
        let out = identify_fillers(&fam).unwrap();
        assert_eq!(out.rounds, 1);
        assert!(out.quotient.level_len(2) < before);
        // the ambiguous pair is now one class
        let t = out.quotient.by_token("T").unwrap();
        assert!(out.quotient.by_token("Tp").is_none());
        let class = match out.quotient.provenance(t) {
            Provenance::ColimitClass { members } => members.clone(),
            other => panic!("expected colimit class, got {other:?}"),
        };
        assert!(class.contains(&"T".to_string()) && class.contains(&"Tp".to_string()));
        assert!(out.quotient.validate().is_empty());
        // member leg preserves fillers into the identified table
        let alg_q = AlgebraicComplex {
            sset: Arc::clone(&out.quotient),
            mode: Mode::Quasi,
            table: out.table.clone(),
        };
        let report = check_alg_morphism(&out.legs[0], &y, &alg_q).unwrap();
        assert!(report.is_empty(), "{report}");
    }

    #[test]
    fn solid_lift_structure_map_injective_for_injective_member() {
        let y = algebraic_point(1);
        let pt2 = crate::colimit::coproduct(vec![
            ("p".into(), point(1)),
            ("q".into(), point(1)),
        ])
        .unwrap();
        let fam = SolidFamily {
            mode: Mode::Kan,
            target: Arc::clone(&pt2.apex),
            members: vec![(y, pt2.legs[0].clone())],
        };
        for m in 0..=2 {
            let lift = solid_lift(&fam, &StageBudget::new(m)).unwrap();
            assert!(lift.structure.is_levelwise_injective(), "budget {m}");
            assert!(lift.structure.validate().is_empty());
        }
    }
}
