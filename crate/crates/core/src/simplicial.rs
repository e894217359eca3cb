//! Finite simplicial sets truncated at a dimension `D`.
//!
//! Storage is levelwise explicit: every simplex of every dimension `0..=D`
//! is materialized, degenerate ones included, so quotients and gluings are
//! plain set-level operations with induced operators. Face operators are
//! total; degeneracy operators are total below the truncation and absent at
//! dimension `D`. Simplices carry a total creation order (their position in
//! the level), and every construction in the crate iterates in that order,
//! which makes runs reproducible bit for bit.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::SsetError;
use crate::horn::Horn;
use crate::par::{map_indexed, Exec};
use crate::report::{ValidationReport, Violation};

const UNSET: u32 = u32::MAX;

/// Handle to a simplex of one particular complex: dimension plus position
/// in the level (the creation order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexId {
    dim: u16,
    idx: u32,
}

impl SimplexId {
    pub(crate) fn new(dim: usize, idx: usize) -> Self {
        SimplexId {
            dim: dim as u16,
            idx: idx as u32,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn index(&self) -> usize {
        self.idx as usize
    }
}

impl fmt::Display for SimplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.dim, self.idx)
    }
}

/// Origin tag of a simplex, immutable after creation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Present in the stage-0 input.
    Input,
    /// Attached as the distinguished filler of a horn.
    Filler(Horn),
    /// Attached as the missing `k`-th face of a filler.
    MissingFace(Horn),
    /// Class of a levelwise colimit; members are the qualified tokens that
    /// were merged into this class.
    ColimitClass { members: Vec<String> },
    /// Degeneracy tower cell: `word` applied to `base`, outermost operator
    /// first, with strictly decreasing indices.
    Degeneracy { base: String, word: Vec<usize> },
}

struct Level {
    tokens: Vec<String>,
    /// `faces[idx][i]` is `d_i`; present for levels `n >= 1`, length `n+1`.
    faces: Vec<Vec<u32>>,
    /// `degens[idx][i]` is `s_i` into the next level; empty at level `D`.
    degens: Vec<Vec<u32>>,
    nondeg: Vec<bool>,
    prov: Vec<Provenance>,
}

/// A finite simplicial set truncated at dimension `D`.
pub struct SimplicialSet {
    dim: usize,
    levels: Vec<Level>,
    token_map: HashMap<String, SimplexId>,
}

impl SimplicialSet {
    /// The complex with no simplices at all, truncated at `dim`.
    pub fn empty(dim: usize) -> Arc<Self> {
        SsetBuilder::new(dim).finish().expect("empty complex")
    }

    /// Truncation dimension `D`.
    pub fn truncation(&self) -> usize {
        self.dim
    }

    pub fn level_len(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.tokens.len())
    }

    pub fn simplices(&self, n: usize) -> impl Iterator<Item = SimplexId> + '_ {
        (0..self.level_len(n)).map(move |i| SimplexId::new(n, i))
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = SimplexId> + '_ {
        (0..=self.dim).flat_map(|n| self.simplices(n))
    }

    /// Total number of simplices across all levels, degenerate included.
    pub fn total_size(&self) -> usize {
        self.levels.iter().map(|l| l.tokens.len()).sum()
    }

    pub fn is_empty_complex(&self) -> bool {
        self.total_size() == 0
    }

    pub fn token(&self, id: SimplexId) -> &str {
        &self.levels[id.dim()].tokens[id.index()]
    }

    pub fn by_token(&self, token: &str) -> Option<SimplexId> {
        self.token_map.get(token).copied()
    }

    pub fn provenance(&self, id: SimplexId) -> &Provenance {
        &self.levels[id.dim()].prov[id.index()]
    }

    /// `d_i`. Panics if `i > dim(id)` or `dim(id) == 0`.
    pub fn face(&self, id: SimplexId, i: usize) -> SimplexId {
        let n = id.dim();
        assert!(n >= 1 && i <= n, "face d_{i} undefined on a {n}-simplex");
        SimplexId::new(n - 1, self.levels[n].faces[id.index()][i] as usize)
    }

    /// `s_i`, or `None` at the truncation dimension.
    pub fn degeneracy(&self, id: SimplexId, i: usize) -> Option<SimplexId> {
        let n = id.dim();
        assert!(i <= n, "degeneracy s_{i} undefined on a {n}-simplex");
        if n == self.dim {
            return None;
        }
        Some(SimplexId::new(
            n + 1,
            self.levels[n].degens[id.index()][i] as usize,
        ))
    }

    pub fn is_nondegenerate(&self, id: SimplexId) -> bool {
        self.levels[id.dim()].nondeg[id.index()]
    }

    /// The simplices of level `n` not in the image of any degeneracy
    /// operator, in creation order.
    pub fn nondegenerate_simplices(&self, n: usize) -> Result<Vec<SimplexId>, SsetError> {
        if n > self.dim {
            return Err(SsetError::LevelOutOfRange {
                level: n,
                truncation: self.dim,
            });
        }
        Ok(self.simplices(n).filter(|s| self.is_nondegenerate(*s)).collect())
    }

    pub fn nondeg_count(&self, n: usize) -> usize {
        if n > self.dim {
            return 0;
        }
        self.levels[n].nondeg.iter().filter(|b| **b).count()
    }

    /// Per-level nondegenerate counts, `0..=D`.
    pub fn nondeg_profile(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| self.nondeg_count(n)).collect()
    }

    /// For a degenerate simplex, some `(i, base)` with `s_i(base) = id`
    /// (first in creation order); `None` for nondegenerate simplices.
    pub fn degeneracy_preimage(&self, id: SimplexId) -> Option<(usize, SimplexId)> {
        let n = id.dim();
        if n == 0 || self.is_nondegenerate(id) {
            return None;
        }
        let lower = &self.levels[n - 1];
        for (bidx, slots) in lower.degens.iter().enumerate() {
            for (i, tgt) in slots.iter().enumerate() {
                if *tgt as usize == id.index() {
                    return Some((i, SimplexId::new(n - 1, bidx)));
                }
            }
        }
        None
    }

    /// Evaluates the presheaf on a monotone map `f: [m] -> [p]` where
    /// `p = dim(base)` and `m = f.len() - 1 <= D`: the composite of face and
    /// degeneracy operators that `f` factors into.
    pub fn apply_monotone(&self, base: SimplexId, f: &[usize]) -> SimplexId {
        let p = base.dim();
        assert!(!f.is_empty() && f.len() - 1 <= self.dim);
        debug_assert!(f.windows(2).all(|w| w[0] <= w[1]) && *f.last().unwrap() <= p);
        // Peel the outermost elementary operator: a missed value gives a
        // face, a repeated position gives a degeneracy on the recursion.
        if let Some(v) = (0..=p).find(|v| !f.contains(v)) {
            let shifted: Vec<usize> = f.iter().map(|&x| if x > v { x - 1 } else { x }).collect();
            return self.apply_monotone(self.face(base, v), &shifted);
        }
        if let Some(q) = (0..f.len() - 1).find(|&q| f[q] == f[q + 1]) {
            let mut dropped = f.to_vec();
            dropped.remove(q + 1);
            let inner = self.apply_monotone(base, &dropped);
            return self
                .degeneracy(inner, q)
                .expect("degeneracy within truncation");
        }
        base
    }

    /// The subcomplex on a creation-order prefix of each level, with tokens
    /// and provenance carried over. Errors if the prefix is not closed
    /// under the operators.
    pub fn restrict_prefix(&self, lens: &[usize]) -> Result<Arc<SimplicialSet>, SsetError> {
        if lens.len() != self.dim + 1 {
            return Err(SsetError::InvalidParameter(
                "prefix lengths must cover every level".into(),
            ));
        }
        for (n, len) in lens.iter().enumerate() {
            if *len > self.level_len(n) {
                return Err(SsetError::LevelOutOfRange {
                    level: n,
                    truncation: self.dim,
                });
            }
        }
        let mut b = SsetBuilder::new(self.dim);
        for n in 0..=self.dim {
            for idx in 0..lens[n] {
                let id = SimplexId::new(n, idx);
                let faces: Vec<SimplexId> = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| {
                            let f = self.face(id, i);
                            if f.index() >= lens[n - 1] {
                                return Err(SsetError::SubsetNotClosed);
                            }
                            Ok(f)
                        })
                        .collect::<Result<_, _>>()?
                };
                b.add_simplex(n, self.token(id).to_string(), &faces, self.provenance(id).clone())?;
            }
        }
        for n in 0..self.dim {
            for idx in 0..lens[n] {
                let id = SimplexId::new(n, idx);
                for i in 0..=n {
                    let t = self.degeneracy(id, i).unwrap();
                    if t.index() >= lens[n + 1] {
                        return Err(SsetError::SubsetNotClosed);
                    }
                    b.set_degeneracy(id, i, t)?;
                }
            }
        }
        b.finish()
    }

    /// Checks every simplicial identity instance that is defined within the
    /// truncation, plus consistency of the cached nondegeneracy flags.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(Exec::default())
    }

    pub fn validate_with(&self, exec: Exec) -> ValidationReport {
        let mut violations = Vec::new();
        for n in 0..=self.dim {
            let level_violations = map_indexed(exec, self.level_len(n), |idx| {
                self.validate_simplex(SimplexId::new(n, idx))
            });
            violations.extend(level_violations.into_iter().flatten());
        }
        // nondegeneracy cache: recompute from scratch and compare
        let recomputed = self.recompute_nondeg();
        for n in 0..=self.dim {
            for idx in 0..self.level_len(n) {
                if recomputed[n][idx] != self.levels[n].nondeg[idx] {
                    violations.push(Violation {
                        simplex: self.levels[n].tokens[idx].clone(),
                        identity: "nondegeneracy cache".into(),
                        detail: format!(
                            "cached {} but recomputed {}",
                            self.levels[n].nondeg[idx], recomputed[n][idx]
                        ),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    fn recompute_nondeg(&self) -> Vec<Vec<bool>> {
        let mut flags: Vec<Vec<bool>> = (0..=self.dim)
            .map(|n| vec![true; self.level_len(n)])
            .collect();
        for n in 0..self.dim {
            for slots in &self.levels[n].degens {
                for tgt in slots {
                    flags[n + 1][*tgt as usize] = false;
                }
            }
        }
        flags
    }

    fn validate_simplex(&self, s: SimplexId) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = s.dim();
        let tok = || self.token(s).to_string();
        // d_i d_j = d_{j-1} d_i for i < j
        if n >= 2 {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.face(self.face(s, j), i);
                    let rhs = self.face(self.face(s, i), j - 1);
                    if lhs != rhs {
                        out.push(Violation {
                            simplex: tok(),
                            identity: format!("d_{i} d_{j} = d_{} d_{i}", j - 1),
                            detail: format!("{} vs {}", self.token(lhs), self.token(rhs)),
                        });
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i <= j, defined when n + 2 <= D
        if n + 2 <= self.dim {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self
                        .degeneracy(self.degeneracy(s, j).unwrap(), i)
                        .unwrap();
                    let rhs = self
                        .degeneracy(self.degeneracy(s, i).unwrap(), j + 1)
                        .unwrap();
                    if lhs != rhs {
                        out.push(Violation {
                            simplex: tok(),
                            identity: format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                            detail: format!("{} vs {}", self.token(lhs), self.token(rhs)),
                        });
                    }
                }
            }
        }
        // d_i s_j mixed identities, defined when n + 1 <= D
        if n + 1 <= self.dim {
            for j in 0..=n {
                let sj = self.degeneracy(s, j).unwrap();
                for i in 0..=n + 1 {
                    let lhs = self.face(sj, i);
                    let (rhs, identity) = if i < j {
                        (
                            self.degeneracy(self.face(s, i), j - 1).unwrap(),
                            format!("d_{i} s_{j} = s_{} d_{i}", j - 1),
                        )
                    } else if i == j || i == j + 1 {
                        (s, format!("d_{i} s_{j} = id"))
                    } else {
                        (
                            self.degeneracy(self.face(s, i - 1), j).unwrap(),
                            format!("d_{i} s_{j} = s_{j} d_{}", i - 1),
                        )
                    };
                    if lhs != rhs {
                        out.push(Violation {
                            simplex: tok(),
                            identity,
                            detail: format!("{} vs {}", self.token(lhs), self.token(rhs)),
                        });
                    }
                }
            }
        }
        out
    }
}

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && (0..=self.dim).all(|n| {
                let a = &self.levels[n];
                let b = &other.levels[n];
                a.tokens == b.tokens && a.faces == b.faces && a.degens == b.degens
            })
    }
}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialSet(D={}, levels=", self.dim)?;
        let sizes: Vec<usize> = (0..=self.dim).map(|n| self.level_len(n)).collect();
        write!(f, "{sizes:?})")
    }
}

/// A levelwise subset of a complex, used for stage bookkeeping and the
/// factoring tests. Operator closure is checked on demand, not assumed.
#[derive(Clone, Debug)]
pub struct LevelSubset {
    pub levels: Vec<Vec<bool>>,
}

impl LevelSubset {
    pub fn full(x: &SimplicialSet) -> Self {
        LevelSubset {
            levels: (0..=x.truncation())
                .map(|n| vec![true; x.level_len(n)])
                .collect(),
        }
    }

    pub fn empty(x: &SimplicialSet) -> Self {
        LevelSubset {
            levels: (0..=x.truncation())
                .map(|n| vec![false; x.level_len(n)])
                .collect(),
        }
    }

    pub fn contains(&self, id: SimplexId) -> bool {
        self.levels
            .get(id.dim())
            .and_then(|l| l.get(id.index()))
            .copied()
            .unwrap_or(false)
    }

    pub fn is_operator_closed(&self, x: &SimplicialSet) -> bool {
        for n in 0..=x.truncation() {
            for idx in 0..x.level_len(n) {
                let id = SimplexId::new(n, idx);
                if !self.contains(id) {
                    continue;
                }
                if n >= 1 && (0..=n).any(|i| !self.contains(x.face(id, i))) {
                    return false;
                }
                if n < x.truncation()
                    && (0..=n).any(|i| !self.contains(x.degeneracy(id, i).unwrap()))
                {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone)]
struct DegRecord {
    /// index of the base simplex one level down
    base: u32,
    /// operator index; canonical records satisfy `op > op(base record)`
    op: u16,
}

/// Incremental constructor for [`SimplicialSet`].
///
/// Faces are given at insertion time; degeneracy links are either set
/// explicitly (constructors that materialize every simplex themselves) or
/// created by [`SsetBuilder::close_degeneracies`], which builds the missing
/// degeneracy towers in Eilenberg-Zilber normal form. Unset slots must
/// belong to simplices that were added as nondegenerate cells (or to tower
/// cells above them).
pub struct SsetBuilder {
    dim: usize,
    levels: Vec<Level>,
    records: Vec<Vec<Option<DegRecord>>>,
    token_map: HashMap<String, SimplexId>,
}

impl SsetBuilder {
    pub fn new(dim: usize) -> Self {
        SsetBuilder {
            dim,
            levels: (0..=dim)
                .map(|_| Level {
                    tokens: Vec::new(),
                    faces: Vec::new(),
                    degens: Vec::new(),
                    nondeg: Vec::new(),
                    prov: Vec::new(),
                })
                .collect(),
            records: vec![Vec::new(); dim + 1],
            token_map: HashMap::new(),
        }
    }

    /// Reopens an existing complex for extension. Ids and tokens of the
    /// original simplices are preserved verbatim.
    pub fn from_sset(x: &SimplicialSet) -> Self {
        SsetBuilder {
            dim: x.dim,
            levels: x
                .levels
                .iter()
                .map(|l| Level {
                    tokens: l.tokens.clone(),
                    faces: l.faces.clone(),
                    degens: l.degens.clone(),
                    nondeg: Vec::new(),
                    prov: l.prov.clone(),
                })
                .collect(),
            records: (0..=x.dim).map(|n| vec_none(x.level_len(n))).collect(),
            token_map: x.token_map.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level_len(&self, n: usize) -> usize {
        self.levels[n].tokens.len()
    }

    pub fn total_size(&self) -> usize {
        self.levels.iter().map(|l| l.tokens.len()).sum()
    }

    pub fn token_taken(&self, token: &str) -> bool {
        self.token_map.contains_key(token)
    }

    pub fn id_by_token(&self, token: &str) -> Option<SimplexId> {
        self.token_map.get(token).copied()
    }

    /// Derives an unused token from `base` by appending primes.
    pub fn fresh_token(&self, base: &str) -> String {
        if !self.token_taken(base) {
            return base.to_string();
        }
        let mut t = base.to_string();
        loop {
            t.push('\'');
            if !self.token_taken(&t) {
                return t;
            }
        }
    }

    /// Adds a simplex with the given faces; degeneracy slots start unset.
    pub fn add_simplex(
        &mut self,
        n: usize,
        token: String,
        faces: &[SimplexId],
        prov: Provenance,
    ) -> Result<SimplexId, SsetError> {
        if n > self.dim {
            return Err(SsetError::LevelOutOfRange {
                level: n,
                truncation: self.dim,
            });
        }
        if self.token_map.contains_key(&token) {
            return Err(SsetError::DuplicateToken(token));
        }
        let expected = if n == 0 { 0 } else { n + 1 };
        if faces.len() != expected {
            return Err(SsetError::WrongFaceCount {
                token,
                expected,
                got: faces.len(),
            });
        }
        for (i, f) in faces.iter().enumerate() {
            if f.dim() + 1 != n || f.index() >= self.level_len(n - 1) {
                return Err(SsetError::BadFace { token, index: i });
            }
        }
        let idx = self.level_len(n);
        let id = SimplexId::new(n, idx);
        let level = &mut self.levels[n];
        level.faces.push(faces.iter().map(|f| f.idx).collect());
        level.degens.push(if n < self.dim {
            vec![UNSET; n + 1]
        } else {
            Vec::new()
        });
        level.prov.push(prov);
        self.token_map.insert(token.clone(), id);
        level.tokens.push(token);
        self.records[n].push(None);
        Ok(id)
    }

    pub fn set_degeneracy(
        &mut self,
        id: SimplexId,
        i: usize,
        target: SimplexId,
    ) -> Result<(), SsetError> {
        let n = id.dim();
        if n >= self.dim || i > n || target.dim() != n + 1 {
            return Err(SsetError::InvalidParameter(format!(
                "degeneracy s_{i} on a {n}-simplex at truncation {}",
                self.dim
            )));
        }
        self.levels[n].degens[id.index()][i] = target.idx;
        Ok(())
    }

    fn degen_slot(&self, n: usize, idx: usize, i: usize) -> u32 {
        self.levels[n].degens[idx][i]
    }

    fn face_idx(&self, n: usize, idx: usize, j: usize) -> usize {
        self.levels[n].faces[idx][j] as usize
    }

    /// Unfolds canonical degeneracy records into `(base level, base index,
    /// word)`; the word has strictly decreasing operator indices.
    fn unfold(&self, n: usize, idx: usize) -> (usize, usize, Vec<usize>) {
        let mut word = Vec::new();
        let mut level = n;
        let mut cur = idx;
        while let Some(rec) = &self.records[level][cur] {
            word.push(rec.op as usize);
            cur = rec.base as usize;
            level -= 1;
        }
        (level, cur, word)
    }

    /// Creates every missing degeneracy link, materializing tower cells in
    /// normal form (each degenerate simplex is `s_{w} base` for a unique
    /// strictly decreasing word `w` over a nondegenerate base).
    pub fn close_degeneracies(&mut self) -> Result<(), SsetError> {
        for n in 0..self.dim {
            let len_n = self.level_len(n);
            // fresh cells for canonical slots
            for idx in 0..len_n {
                for i in 0..=n {
                    if self.degen_slot(n, idx, i) != UNSET {
                        continue;
                    }
                    let canonical = match &self.records[n][idx] {
                        None => true,
                        Some(rec) => i > rec.op as usize,
                    };
                    if !canonical {
                        continue;
                    }
                    let mut faces = Vec::with_capacity(n + 2);
                    for j in 0..=n + 1 {
                        let f = if j == i || j == i + 1 {
                            idx
                        } else if j < i {
                            self.degen_slot(n - 1, self.face_idx(n, idx, j), i - 1) as usize
                        } else {
                            self.degen_slot(n - 1, self.face_idx(n, idx, j - 1), i) as usize
                        };
                        faces.push(SimplexId::new(n, f));
                    }
                    let token = self.fresh_token(&format!("{}~s{i}", self.levels[n].tokens[idx]));
                    let (blevel, bidx, bword) = self.unfold(n, idx);
                    let mut word = vec![i];
                    word.extend(bword);
                    let prov = Provenance::Degeneracy {
                        base: self.levels[blevel].tokens[bidx].clone(),
                        word,
                    };
                    let new_id = self.add_simplex(n + 1, token, &faces, prov)?;
                    *self.records[n + 1].last_mut().unwrap() = Some(DegRecord {
                        base: idx as u32,
                        op: i as u16,
                    });
                    self.levels[n].degens[idx][i] = new_id.idx;
                }
            }
            // remaining slots resolve through normal-form rewriting
            for idx in 0..len_n {
                for i in 0..=n {
                    if self.degen_slot(n, idx, i) != UNSET {
                        continue;
                    }
                    let (blevel, bidx, bword) = self.unfold(n, idx);
                    let w = normalize_insert(i, &bword);
                    let mut cur_level = blevel;
                    let mut cur = bidx;
                    for &op in w.iter().rev() {
                        let next = self.degen_slot(cur_level, cur, op);
                        debug_assert_ne!(next, UNSET, "canonical tower slot must exist");
                        cur = next as usize;
                        cur_level += 1;
                    }
                    debug_assert_eq!(cur_level, n + 1);
                    self.levels[n].degens[idx][i] = cur as u32;
                }
            }
        }
        Ok(())
    }

    /// Seals the builder: all face arrays are complete by construction and
    /// all degeneracy slots below the truncation must be set.
    pub fn finish(mut self) -> Result<Arc<SimplicialSet>, SsetError> {
        for n in 0..self.dim {
            for idx in 0..self.level_len(n) {
                if let Some(i) = self.levels[n].degens[idx].iter().position(|d| *d == UNSET) {
                    return Err(SsetError::MissingDegeneracy {
                        token: self.levels[n].tokens[idx].clone(),
                        index: i,
                    });
                }
            }
        }
        // nondegeneracy cache
        for n in 0..=self.dim {
            let len = self.level_len(n);
            self.levels[n].nondeg = vec![true; len];
        }
        for n in 0..self.dim {
            for idx in 0..self.level_len(n) {
                for i in 0..=n {
                    let tgt = self.levels[n].degens[idx][i] as usize;
                    self.levels[n + 1].nondeg[tgt] = false;
                }
            }
        }
        Ok(Arc::new(SimplicialSet {
            dim: self.dim,
            levels: self.levels,
            token_map: self.token_map,
        }))
    }
}

fn vec_none(len: usize) -> Vec<Option<DegRecord>> {
    let mut v = Vec::with_capacity(len);
    v.resize_with(len, || None);
    v
}

/// Normalizes `s_i` applied after the strictly decreasing word `w` using
/// `s_i s_j = s_{j+1} s_i` for `i <= j`; the result is strictly decreasing.
fn normalize_insert(i: usize, w: &[usize]) -> Vec<usize> {
    match w.first() {
        None => vec![i],
        Some(&j) if i > j => {
            let mut out = vec![i];
            out.extend_from_slice(w);
            out
        }
        Some(&j) => {
            let mut out = vec![j + 1];
            out.extend(normalize_insert(i, &w[1..]));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_tower_has_singleton_levels() {
        let mut b = SsetBuilder::new(3);
        b.add_simplex(0, "v".into(), &[], Provenance::Input).unwrap();
        b.close_degeneracies().unwrap();
        let x = b.finish().unwrap();
        for n in 0..=3 {
            assert_eq!(x.level_len(n), 1, "level {n}");
        }
        assert!(x.validate().is_empty());
        assert_eq!(x.nondeg_profile(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn normalize_insert_rewrites_to_decreasing() {
        assert_eq!(normalize_insert(0, &[]), vec![0]);
        assert_eq!(normalize_insert(0, &[0]), vec![1, 0]);
        assert_eq!(normalize_insert(2, &[1, 0]), vec![2, 1, 0]);
        assert_eq!(normalize_insert(0, &[2, 1, 0]), vec![3, 2, 1, 0]);
        assert_eq!(normalize_insert(1, &[1]), vec![2, 1]);
    }

    #[test]
    fn free_edge_tower_at_dim_two() {
        // one nondegenerate edge whose two endpoints are distinct vertices
        let mut b = SsetBuilder::new(2);
        let v0 = b.add_simplex(0, "a".into(), &[], Provenance::Input).unwrap();
        let v1 = b.add_simplex(0, "b".into(), &[], Provenance::Input).unwrap();
        b.add_simplex(1, "e".into(), &[v1, v0], Provenance::Input)
            .unwrap();
        b.close_degeneracies().unwrap();
        let x = b.finish().unwrap();
        // levels: 2 vertices; e + 2 degenerate edges; s_0 e, s_1 e + 2 towers
        assert_eq!(x.level_len(0), 2);
        assert_eq!(x.level_len(1), 3);
        assert_eq!(x.level_len(2), 4);
        assert_eq!(x.nondeg_profile(), vec![2, 1, 0]);
        assert!(x.validate().is_empty(), "{}", x.validate());
    }

    #[test]
    fn validate_flags_broken_face_identity() {
        // a 2-simplex whose faces do not satisfy d_0 d_1 = d_0 d_0
        let mut b = SsetBuilder::new(2);
        let a = b.add_simplex(0, "a".into(), &[], Provenance::Input).unwrap();
        let c = b.add_simplex(0, "c".into(), &[], Provenance::Input).unwrap();
        let e0 = b.add_simplex(1, "e0".into(), &[a, a], Provenance::Input).unwrap();
        let e1 = b.add_simplex(1, "e1".into(), &[c, c], Provenance::Input).unwrap();
        b.add_simplex(2, "t".into(), &[e0, e1, e1], Provenance::Input)
            .unwrap();
        b.close_degeneracies().unwrap();
        let x = b.finish().unwrap();
        let report = x.validate();
        assert!(!report.is_empty());
        assert!(report.violations.iter().any(|v| v.simplex == "t"));
    }

    #[test]
    fn empty_complex_is_valid() {
        let x = SimplicialSet::empty(2);
        assert!(x.validate().is_empty());
        assert_eq!(x.total_size(), 0);
    }
}
