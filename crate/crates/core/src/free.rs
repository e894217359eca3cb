//! The staged free construction: iteratively attach filler cells over
//! horns, stage by stage, with a finite budget.
//!
//! Stage 1 glues a cell for every admitted horn of the input; stage `m+1`
//! glues cells only for horns of `X_m` that do not factor through
//! `X_{m-1}`, which at the level of face tuples is exactly "not yet in the
//! table". Each gluing site contributes the filler `n`-simplex and its
//! missing `(n-1)`-face as new nondegenerate simplices, plus their
//! degeneracy towers within the truncation. The same engine, seeded with a
//! partial table or restricted to outer horns, drives the semi-final lifts
//! and groupoidification.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraicComplex, AlgMorphism, FillerTable};
use crate::error::FreeError;
use crate::horn::{
    enumerate_horns_oracle, enumerate_horns_with, Horn, Mode,
};
use crate::map::SimplicialMap;
use crate::par::Exec;
use crate::shapes::{horn_complex, standard_simplex, token_inclusion, word_token};
use crate::simplicial::{LevelSubset, Provenance, SimplexId, SimplicialSet, SsetBuilder};

pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

/// Finite budget for a staged construction: number of attachment rounds and
/// a hard cap on the total simplex count.
#[derive(Clone, Copy, Debug)]
pub struct StageBudget {
    pub stages: usize,
    pub max_cells: usize,
}

impl StageBudget {
    pub fn new(stages: usize) -> Self {
        StageBudget {
            stages,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }

    pub fn with_cap(stages: usize, max_cells: usize) -> Self {
        StageBudget { stages, max_cells }
    }
}

/// Per-(stage, dimension) attachment counts gathered during construction.
#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub stage: usize,
    pub dim: usize,
    pub examined: usize,
    pub attached: usize,
    /// nondegenerate simplices of this dimension after the stage
    pub cumulative: usize,
}

/// Result of a staged construction: an algebraic complex whose table may be
/// partial, with per-simplex birth stages and the horn residue at budget.
#[derive(Clone, Debug)]
pub struct StagedComplex {
    pub result: AlgebraicComplex,
    /// stage-0 input (for lifts: the identified quotient)
    pub base: Arc<SimplicialSet>,
    pub stage_of: Vec<Vec<u32>>,
    pub budget: usize,
    /// admitted horns of the final complex without a table entry
    pub residue: Vec<Horn>,
    pub rows: Vec<GrowthRow>,
    pub(crate) outer_only: bool,
}

impl StagedComplex {
    pub fn stage_of(&self, id: SimplexId) -> usize {
        self.stage_of[id.dim()][id.index()] as usize
    }

    /// Levelwise sizes of the stage-`m` subcomplex.
    fn stage_lens(&self, m: usize) -> Vec<usize> {
        self.stage_of
            .iter()
            .map(|level| level.iter().take_while(|s| **s as usize <= m).count())
            .collect()
    }

    /// The stage-`m` subcomplex as its own complex (a creation-order
    /// prefix; stages are appended in order, so this is exact).
    pub fn stage_subcomplex(&self, m: usize) -> Result<Arc<SimplicialSet>, FreeError> {
        Ok(self
            .result
            .sset
            .restrict_prefix(&self.stage_lens(m))
            .map_err(FreeError::Sset)?)
    }

    pub fn stage_subset(&self, m: usize) -> LevelSubset {
        LevelSubset {
            levels: self
                .stage_of
                .iter()
                .map(|level| level.iter().map(|s| *s as usize <= m).collect())
                .collect(),
        }
    }

    /// The whole staged value truncated at stage `m`: complex, table and
    /// stats all restricted.
    pub fn restrict(&self, m: usize) -> Result<StagedComplex, FreeError> {
        if m >= self.budget {
            return Ok(self.clone());
        }
        let lens = self.stage_lens(m);
        let sset = self
            .result
            .sset
            .restrict_prefix(&lens)
            .map_err(FreeError::Sset)?;
        let table: FillerTable = self
            .result
            .table
            .iter()
            .filter(|(_, f)| f.index() < lens[f.dim()])
            .map(|(h, f)| (h.clone(), f))
            .collect();
        let residue = residue_of(&sset, self.result.mode, &table, Exec::default(), false)?;
        Ok(StagedComplex {
            result: AlgebraicComplex {
                sset,
                mode: self.result.mode,
                table,
            },
            base: Arc::clone(&self.base),
            stage_of: self
                .stage_of
                .iter()
                .zip(&lens)
                .map(|(level, len)| level[..*len].to_vec())
                .collect(),
            budget: m,
            residue,
            rows: self.rows.iter().filter(|r| r.stage <= m).cloned().collect(),
            outer_only: self.outer_only,
        })
    }

    /// The stage-0 inclusion into the result.
    pub fn inclusion(&self) -> Result<SimplicialMap, FreeError> {
        SimplicialMap::prefix_inclusion(&self.base, &self.result.sset).map_err(FreeError::Sset)
    }

    /// Horns of the result with no candidate filler at all (fibrancy view
    /// of the residue, as opposed to the untabulated view).
    pub fn unfillable(&self) -> Result<Vec<Horn>, FreeError> {
        let x = &self.result.sset;
        Ok(self
            .residue
            .iter()
            .filter(|h| {
                crate::horn::find_fillers(x, h)
                    .map(|f| f.is_empty())
                    .unwrap_or(true)
            })
            .cloned()
            .collect())
    }
}

pub(crate) struct AttachOptions {
    pub mode: Mode,
    pub outer_only: bool,
    pub exec: Exec,
    pub oracle: bool,
}

impl AttachOptions {
    pub(crate) fn plain(mode: Mode) -> Self {
        AttachOptions {
            mode,
            outer_only: false,
            exec: Exec::default(),
            oracle: false,
        }
    }
}

fn enumerate(
    x: &SimplicialSet,
    opts: &AttachOptions,
) -> Result<Vec<Horn>, FreeError> {
    let mode = opts.mode;
    if x.truncation() < mode.min_dim() {
        return Ok(Vec::new());
    }
    let dims = mode.min_dim()..=x.truncation();
    let horns = if opts.oracle {
        enumerate_horns_oracle(x, mode, dims, opts.exec)
    } else {
        enumerate_horns_with(x, mode, dims, opts.exec)
    }
    .map_err(FreeError::Sset)?;
    Ok(if opts.outer_only {
        horns.into_iter().filter(|h| h.is_outer()).collect()
    } else {
        horns
    })
}

fn residue_of(
    x: &Arc<SimplicialSet>,
    mode: Mode,
    table: &FillerTable,
    exec: Exec,
    oracle: bool,
) -> Result<Vec<Horn>, FreeError> {
    let opts = AttachOptions {
        mode,
        outer_only: false,
        exec,
        oracle,
    };
    Ok(enumerate(x, &opts)?
        .into_iter()
        .filter(|h| !table.contains(h))
        .collect())
}

/// One attachment stage: glues a cell over every horn in `to_attach`
/// (canonical order), returning the extended complex and the new table
/// entries. Token assignment follows the horn order; the per-cell face
/// wiring is pure, the sequential part is only the id handout.
fn attach_stage(
    current: &Arc<SimplicialSet>,
    to_attach: &[Horn],
    cell_counter: &mut usize,
) -> Result<(Arc<SimplicialSet>, Vec<(Horn, SimplexId)>), FreeError> {
    let mut b = SsetBuilder::from_sset(current);
    let mut entries = Vec::with_capacity(to_attach.len());
    for h in to_attach {
        let n = h.n();
        let k = h.k();
        let idx = *cell_counter;
        *cell_counter += 1;
        // missing k-th face: its own faces come from the simplicial
        // identities d_i d_k = d_{k-1} d_i (i < k) and d_i d_k = d_k d_{i+1}
        // (i >= k) applied to the would-be filler
        let mu_faces: Vec<SimplexId> = if n == 1 {
            Vec::new()
        } else {
            (0..n)
                .map(|i| {
                    if i < k {
                        current.face(h.face(i), k - 1)
                    } else {
                        current.face(h.face(i + 1), k)
                    }
                })
                .collect()
        };
        let mu = b.add_simplex(
            n - 1,
            b.fresh_token(&format!("c{idx}.d{k}")),
            &mu_faces,
            Provenance::MissingFace(h.clone()),
        )?;
        let phi_faces: Vec<SimplexId> = (0..=n)
            .map(|i| if i == k { mu } else { h.face(i) })
            .collect();
        let phi = b.add_simplex(
            n,
            b.fresh_token(&format!("c{idx}")),
            &phi_faces,
            Provenance::Filler(h.clone()),
        )?;
        entries.push((h.clone(), phi));
    }
    b.close_degeneracies().map_err(FreeError::Sset)?;
    let next = b.finish().map_err(FreeError::Sset)?;
    Ok((next, entries))
}

/// The shared staged engine: repeatedly attach cells for every horn that is
/// not yet in the table (stage 1 starts from the seed table, so seeded
/// horns are never re-attached).
pub(crate) fn staged_attach(
    base: Arc<SimplicialSet>,
    seed: FillerTable,
    budget: &StageBudget,
    opts: &AttachOptions,
) -> Result<StagedComplex, FreeError> {
    let d = base.truncation();
    let mut current = Arc::clone(&base);
    let mut table = seed;
    let mut stage_of: Vec<Vec<u32>> = (0..=d).map(|n| vec![0; base.level_len(n)]).collect();
    let mut rows: Vec<GrowthRow> = Vec::new();
    let mut cell_counter = 0usize;
    if base.total_size() > budget.max_cells {
        return Err(FreeError::CellCapExceeded {
            have: base.total_size(),
            cap: budget.max_cells,
        });
    }
    for m in 1..=budget.stages {
        let horns = enumerate(&current, opts)?;
        let mut examined: BTreeMap<usize, usize> = BTreeMap::new();
        for h in &horns {
            *examined.entry(h.n()).or_insert(0) += 1;
        }
        let to_attach: Vec<Horn> = horns
            .into_iter()
            .filter(|h| !table.contains(h))
            .collect();
        let mut attached: BTreeMap<usize, usize> = BTreeMap::new();
        for h in &to_attach {
            *attached.entry(h.n()).or_insert(0) += 1;
        }
        if current.total_size() + 2 * to_attach.len() > budget.max_cells {
            return Err(FreeError::CellCapExceeded {
                have: current.total_size() + 2 * to_attach.len(),
                cap: budget.max_cells,
            });
        }
        let (next, entries) = attach_stage(&current, &to_attach, &mut cell_counter)?;
        if next.total_size() > budget.max_cells {
            return Err(FreeError::CellCapExceeded {
                have: next.total_size(),
                cap: budget.max_cells,
            });
        }
        for (h, phi) in entries {
            table.insert(h, phi);
        }
        for n in 0..=d {
            for _ in stage_of[n].len()..next.level_len(n) {
                stage_of[n].push(m as u32);
            }
        }
        for n in opts.mode.min_dim()..=d {
            rows.push(GrowthRow {
                stage: m,
                dim: n,
                examined: examined.get(&n).copied().unwrap_or(0),
                attached: attached.get(&n).copied().unwrap_or(0),
                cumulative: next.nondeg_count(n),
            });
        }
        current = next;
    }
    let residue = residue_of(&current, opts.mode, &table, opts.exec, opts.oracle)?;
    Ok(StagedComplex {
        result: AlgebraicComplex {
            sset: current,
            mode: opts.mode,
            table,
        },
        base,
        stage_of,
        budget: budget.stages,
        residue,
        rows,
        outer_only: opts.outer_only,
    })
}

/// The free algebraic complex on `x`: staged attachment over all admitted
/// horns, empty seed.
pub fn free(
    x: &Arc<SimplicialSet>,
    mode: Mode,
    budget: &StageBudget,
) -> Result<StagedComplex, FreeError> {
    staged_attach(
        Arc::clone(x),
        FillerTable::new(),
        budget,
        &AttachOptions::plain(mode),
    )
}

pub fn free_with(
    x: &Arc<SimplicialSet>,
    mode: Mode,
    budget: &StageBudget,
    exec: Exec,
    oracle: bool,
) -> Result<StagedComplex, FreeError> {
    staged_attach(
        Arc::clone(x),
        FillerTable::new(),
        budget,
        &AttachOptions {
            mode,
            outer_only: false,
            exec,
            oracle,
        },
    )
}

/// The unit `X -> free(X)`: the stage-0 inclusion, levelwise injective.
pub fn unit(x: &Arc<SimplicialSet>, staged: &StagedComplex) -> Result<SimplicialMap, FreeError> {
    if *x != staged.base {
        return Err(FreeError::Alg(crate::error::AlgError::WrongBase));
    }
    staged.inclusion()
}

/// Extends a map `base -> U(Z)` over a staged complex by the universal
/// property: attached fillers go to the distinguished fillers of their
/// image horns, missing faces to the `k`-th faces of those, degeneracy
/// towers along the corresponding operators. Errors if an image horn has
/// no entry in `Z` (budget exhaustion for partial `Z`).
pub fn extend_over_free(
    staged: &StagedComplex,
    base_map: &SimplicialMap,
    z: &AlgebraicComplex,
) -> Result<SimplicialMap, FreeError> {
    if base_map.source() != &staged.base {
        return Err(FreeError::Alg(crate::error::AlgError::WrongBase));
    }
    let fx = &staged.result.sset;
    let d = fx.truncation();
    let mut comp: Vec<Vec<u32>> = (0..=d)
        .map(|n| vec![u32::MAX; fx.level_len(n)])
        .collect();
    for n in 0..=d {
        for idx in 0..staged.base.level_len(n) {
            comp[n][idx] = base_map.apply(SimplexId::new(n, idx)).index() as u32;
        }
    }
    let mut pending: Vec<SimplexId> = fx
        .all_simplices()
        .filter(|s| staged.stage_of(*s) > 0)
        .collect();
    pending.sort_by_key(|s| (staged.stage_of(*s), s.dim(), s.index()));
    let image_horn = |h: &Horn, comp: &[Vec<u32>]| -> Result<Horn, FreeError> {
        let faces = h
            .faces()
            .iter()
            .map(|f| {
                let v = comp[f.dim()][f.index()];
                debug_assert_ne!(v, u32::MAX, "horn face assigned before its filler");
                SimplexId::new(f.dim(), v as usize)
            })
            .collect();
        Horn::new(h.n(), h.k(), faces).map_err(FreeError::Sset)
    };
    for s in pending {
        let value = match fx.provenance(s) {
            Provenance::Filler(h) => {
                let ih = image_horn(h, &comp)?;
                z.table
                    .get(&ih)
                    .ok_or_else(|| FreeError::BudgetExhausted(ih.describe(&z.sset)))?
            }
            Provenance::MissingFace(h) => {
                let ih = image_horn(h, &comp)?;
                let filler = z
                    .table
                    .get(&ih)
                    .ok_or_else(|| FreeError::BudgetExhausted(ih.describe(&z.sset)))?;
                z.sset.face(filler, h.k())
            }
            Provenance::Degeneracy { base, word } => {
                let base_id = fx
                    .by_token(base)
                    .ok_or_else(|| FreeError::Alg(crate::error::AlgError::CorruptStaged(
                        format!("degeneracy base `{base}` missing"),
                    )))?;
                let fb = comp[base_id.dim()][base_id.index()];
                debug_assert_ne!(fb, u32::MAX, "tower base assigned before the tower");
                let mut cur = SimplexId::new(base_id.dim(), fb as usize);
                for op in word.iter().rev() {
                    cur = z.sset.degeneracy(cur, *op).ok_or_else(|| {
                        FreeError::Alg(crate::error::AlgError::CorruptStaged(
                            "degeneracy out of truncation".into(),
                        ))
                    })?;
                }
                cur
            }
            other => {
                return Err(FreeError::Alg(crate::error::AlgError::CorruptStaged(
                    format!("unexpected provenance {other:?} above stage 0"),
                )))
            }
        };
        comp[s.dim()][s.index()] = value.index() as u32;
    }
    SimplicialMap::new(Arc::clone(fx), Arc::clone(&z.sset), comp).map_err(FreeError::Sset)
}

#[derive(Debug)]
pub struct FreeMap {
    pub source: StagedComplex,
    pub target: StagedComplex,
    pub morphism: AlgMorphism,
}

/// The unique filler-preserving extension `free(X) -> free(Y)` of a map
/// `X -> Y` at equal budgets. The image of a stage-`m` horn is filled in
/// `free(Y)` by stage `m` at the latest, so equal budgets always suffice;
/// a budget-exhaustion error therefore signals corrupted input here.
pub fn free_map(
    phi: &SimplicialMap,
    mode: Mode,
    budget: &StageBudget,
) -> Result<FreeMap, FreeError> {
    let fx = free(phi.source(), mode, budget)?;
    let fy = free(phi.target(), mode, budget)?;
    let morphism = extend_between(&fx, &fy, phi)?;
    Ok(FreeMap {
        source: fx,
        target: fy,
        morphism,
    })
}

/// The extension of `phi` between already-computed staged complexes.
pub fn extend_between(
    fx: &StagedComplex,
    fy: &StagedComplex,
    phi: &SimplicialMap,
) -> Result<AlgMorphism, FreeError> {
    let unit_y = fy.inclusion()?;
    let base_map = phi.then(&unit_y).map_err(FreeError::Sset)?;
    let map = extend_over_free(fx, &base_map, &fy.result)?;
    AlgMorphism::new(
        Arc::new(fx.result.clone()),
        Arc::new(fy.result.clone()),
        map,
    )
    .map_err(FreeError::Alg)
}

#[derive(Debug)]
pub struct Retract {
    /// free complex on the standard simplex, at the covered budget
    pub source: StagedComplex,
    /// free complex on the horn, at the full budget
    pub target: StagedComplex,
    /// the retraction `free(Δ(n)) -> free(Λ^k(n))`
    pub retract: AlgMorphism,
    /// `free(Λ^k(n)) -> free(Δ(n))` at the covered budget
    pub inclusion: AlgMorphism,
    /// stages of the source on which the retraction is defined
    pub covered_stages: usize,
    /// `r ∘ i = id` on the covered stages
    pub identity_holds: bool,
}

/// The canonical retraction of `free(Λ^k(n)) -> free(Δ(n))`, determined by
/// the distinguished filler of the unit horn. At a finite budget the
/// transpose shifts stages by one, so the source is restricted to the
/// largest stage prefix on which the extension is defined.
pub fn canonical_retract(
    n: usize,
    k: usize,
    mode: Mode,
    dim: usize,
    budget: &StageBudget,
) -> Result<Retract, FreeError> {
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
    if n > dim {
        return Err(FreeError::Sset(crate::error::SsetError::LevelOutOfRange {
            level: n,
            truncation: dim,
        }));
    }
    let (lam, _) = horn_complex(n, k, dim).map_err(FreeError::Sset)?;
    let target = free(&lam, mode, budget)?;
    // the unit horn: the top faces of Δ(n) living at stage 0 of free(Λ)
    let unit_faces: Vec<SimplexId> = Horn::slots(n, k)
        .map(|i| {
            let word: Vec<usize> = (0..=n).filter(|v| *v != i).collect();
            target
                .result
                .sset
                .by_token(&word_token(&word))
                .expect("horn face token at stage 0")
        })
        .collect();
    let unit_horn = Horn::new(n, k, unit_faces).map_err(FreeError::Sset)?;
    let top_filler = target
        .result
        .table
        .get(&unit_horn)
        .ok_or_else(|| FreeError::BudgetExhausted(unit_horn.describe(&target.result.sset)))?;
    // transpose: Δ(n) -> U(free(Λ)) sending the top cell to that filler
    let delta = standard_simplex(n, dim);
    let comp: Vec<Vec<u32>> = (0..=dim)
        .map(|m| {
            delta
                .simplices(m)
                .map(|s| {
                    let word = token_word(delta.token(s));
                    target
                        .result
                        .sset
                        .apply_monotone(top_filler, &word)
                        .index() as u32
                })
                .collect()
        })
        .collect();
    let transpose = SimplicialMap::new(Arc::clone(&delta), Arc::clone(&target.result.sset), comp)
        .map_err(FreeError::Sset)?;
    debug_assert!(transpose.validate().is_empty());
    // largest source budget on which the extension is defined
    let mut covered = budget.stages;
    let (source, retract_map) = loop {
        let src = free(
            &delta,
            mode,
            &StageBudget::with_cap(covered, budget.max_cells),
        )?;
        match extend_over_free(&src, &transpose, &target.result) {
            Ok(map) => break (src, map),
            Err(FreeError::BudgetExhausted(_)) if covered > 0 => covered -= 1,
            Err(e) => return Err(e),
        }
    };
    let retract = AlgMorphism::new(
        Arc::new(source.result.clone()),
        Arc::new(target.result.clone()),
        retract_map,
    )
    .map_err(FreeError::Alg)?;
    // inclusion at the covered budget and the retract identity
    let lam_cov = target.restrict(covered)?;
    let incl = extend_between(&lam_cov, &source, &token_inclusion(&lam, &delta).map_err(FreeError::Sset)?)?;
    let composite = incl.map.then(&retract.map).map_err(FreeError::Sset)?;
    let expected = SimplicialMap::prefix_inclusion(&lam_cov.result.sset, &target.result.sset)
        .map_err(FreeError::Sset)?;
    let identity_holds = composite.same_as(&expected);
    Ok(Retract {
        source,
        target,
        retract,
        inclusion: incl,
        covered_stages: covered,
        identity_holds,
    })
}

fn token_word(token: &str) -> Vec<usize> {
    if token.contains('.') {
        token
            .split('.')
            .map(|p| p.parse().expect("word token"))
            .collect()
    } else {
        token
            .chars()
            .map(|c| c.to_digit(10).expect("word token") as usize)
            .collect()
    }
}

/// One row of the growth comparison table.
#[derive(Clone, Debug)]
pub struct StatsRow {
    pub stage: usize,
    pub dim: usize,
    pub examined: usize,
    pub attached: usize,
    pub cumulative: usize,
    /// sites the unoptimized construction (attach over all horns every
    /// stage) would glue at this (stage, dim)
    pub counterfactual: usize,
}

#[derive(Clone, Debug, Default)]
pub struct GrowthTable {
    pub rows: Vec<StatsRow>,
}

impl GrowthTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage,dim,examined,attached,cumulative,quillen_counterfactual\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.stage, r.dim, r.examined, r.attached, r.cumulative, r.counterfactual
            ));
        }
        out
    }
}

/// Growth statistics of a staged construction, including the counterfactual
/// column: a replay from the same input that glues over all admitted horns
/// every stage (no factoring rule), as the unimproved small-object argument
/// would.
pub fn growth_stats(staged: &StagedComplex) -> Result<GrowthTable, FreeError> {
    growth_stats_with(staged, Exec::default())
}

pub fn growth_stats_with(staged: &StagedComplex, exec: Exec) -> Result<GrowthTable, FreeError> {
    let opts = AttachOptions {
        mode: staged.result.mode,
        outer_only: staged.outer_only,
        exec,
        oracle: false,
    };
    let budget = StageBudget::with_cap(staged.budget, DEFAULT_MAX_CELLS.max(4_000_000));
    let mut counterfactual: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut current = Arc::clone(&staged.base);
    let mut counter = 0usize;
    for m in 1..=budget.stages {
        let horns = enumerate(&current, &opts)?;
        for h in &horns {
            *counterfactual.entry((m, h.n())).or_insert(0) += 1;
        }
        if current.total_size() + 2 * horns.len() > budget.max_cells {
            return Err(FreeError::CellCapExceeded {
                have: current.total_size() + 2 * horns.len(),
                cap: budget.max_cells,
            });
        }
        let (next, _) = attach_stage(&current, &horns, &mut counter)?;
        current = next;
    }
    let rows = staged
        .rows
        .iter()
        .map(|r| StatsRow {
            stage: r.stage,
            dim: r.dim,
            examined: r.examined,
            attached: r.attached,
            cumulative: r.cumulative,
            counterfactual: counterfactual.get(&(r.stage, r.dim)).copied().unwrap_or(0),
        })
        .collect();
    Ok(GrowthTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::point;

    #[test]
    fn free_point_kan_d1_m1_census() {
        let pt = point(1);
        let staged = free(&pt, Mode::Kan, &StageBudget::new(1)).unwrap();
        let x = &staged.result.sset;
        assert_eq!(x.level_len(0), 3);
        assert_eq!(x.nondeg_count(1), 2);
        assert_eq!(staged.result.table.len(), 2);
        assert!(x.validate().is_empty(), "{}", x.validate());
        // horns at the two new vertices remain
        assert_eq!(staged.residue.len(), 4);
        // but they are all fillable by degenerate or attached edges
        assert!(staged.unfillable().unwrap().is_empty());
    }

    #[test]
    fn free_point_kan_d2_m1_census() {
        let pt = point(2);
        let staged = free(&pt, Mode::Kan, &StageBudget::new(1)).unwrap();
        let x = &staged.result.sset;
        assert_eq!(x.nondeg_profile(), vec![3, 5, 3]);
        assert_eq!(staged.result.table.len(), 5);
        assert!(x.validate().is_empty(), "{}", x.validate());
        // stage-1 cells create genuinely unfillable dim-2 horns
        assert!(!staged.unfillable().unwrap().is_empty());
    }

    #[test]
    fn quasi_mode_attaches_nothing_below_dimension_two() {
        let pt = point(1);
        let staged = free(&pt, Mode::Quasi, &StageBudget::new(3)).unwrap();
        assert_eq!(staged.result.sset.total_size(), pt.total_size());
        assert!(staged.result.table.is_empty());
        assert!(staged.residue.is_empty());
    }

    #[test]
    fn stage_monotonicity() {
        let pt = point(1);
        let big = free(&pt, Mode::Kan, &StageBudget::new(3)).unwrap();
        for m in 0..=3 {
            let small = free(&pt, Mode::Kan, &StageBudget::new(m)).unwrap();
            let prefix = big.stage_subcomplex(m).unwrap();
            assert!(
                *small.result.sset == *prefix,
                "stage-{m} prefix equals the budget-{m} run"
            );
            let restricted = big.restrict(m).unwrap();
            assert!(*restricted.result.sset == *small.result.sset);
            assert_eq!(restricted.result.table, small.result.table);
        }
    }

    #[test]
    fn stage_inclusions_are_levelwise_injective() {
        let pt = point(2);
        let staged = free(&pt, Mode::Kan, &StageBudget::new(2)).unwrap();
        let u = unit(&pt, &staged).unwrap();
        assert!(u.is_levelwise_injective());
        assert!(u.validate().is_empty());
        for m in 0..2 {
            let a = staged.stage_subcomplex(m).unwrap();
            let b = staged.stage_subcomplex(m + 1).unwrap();
            let incl = SimplicialMap::prefix_inclusion(&a, &b).unwrap();
            assert!(incl.is_levelwise_injective());
            assert!(incl.validate().is_empty());
        }
    }

    #[test]
    fn non_factoring_rule_matches_stage_tags() {
        let pt = point(1);
        let staged = free(&pt, Mode::Kan, &StageBudget::new(3)).unwrap();
        // every table entry attached at stage m >= 2 has a face born at m-1
        for (h, phi) in staged.result.table.iter() {
            let m = staged.stage_of(phi);
            if m < 2 {
                continue;
            }
            let newest = h
                .faces()
                .iter()
                .map(|f| staged.stage_of(*f))
                .max()
                .unwrap();
            assert_eq!(newest, m - 1, "attached horn must not factor earlier");
        }
    }

    #[test]
    fn cell_cap_is_enforced() {
        let pt = point(2);
        let err = free(&pt, Mode::Kan, &StageBudget::with_cap(3, 50)).unwrap_err();
        assert!(matches!(err, FreeError::CellCapExceeded { .. }));
    }

    #[test]
    fn growth_stats_point() {
        let pt = point(1);
        let staged = free(&pt, Mode::Kan, &StageBudget::new(2)).unwrap();
        let table = growth_stats(&staged).unwrap();
        let stage1: Vec<_> = table.rows.iter().filter(|r| r.stage == 1).collect();
        assert_eq!(stage1.len(), 1);
        assert_eq!(stage1[0].examined, 2);
        assert_eq!(stage1[0].attached, 2);
        assert_eq!(stage1[0].counterfactual, 2);
        let stage2: Vec<_> = table.rows.iter().filter(|r| r.stage == 2).collect();
        assert_eq!(stage2[0].examined, 6);
        assert_eq!(stage2[0].attached, 4);
        assert_eq!(stage2[0].counterfactual, 6);
        for r in &table.rows {
            assert!(r.counterfactual >= r.attached);
            assert!(r.counterfactual >= r.examined);
        }
    }

    #[test]
    fn retract_on_vertex_horn() {
        let r = canonical_retract(1, 0, Mode::Kan, 1, &StageBudget::new(2)).unwrap();
        assert!(r.identity_holds);
        assert_eq!(r.covered_stages, 1);
        assert!(r.retract.check().unwrap().is_empty());
        // the top cell of Δ(1) maps to the stage-1 filler edge
        let delta_top = r.source.result.sset.by_token("01").unwrap();
        let image = r.retract.map.apply(delta_top);
        assert_eq!(r.target.stage_of(image), 1);
    }

    #[test]
    fn retract_errors_at_zero_budget() {
        let err = canonical_retract(1, 0, Mode::Kan, 1, &StageBudget::new(0)).unwrap_err();
        assert!(matches!(err, FreeError::BudgetExhausted(_)));
    }
}
