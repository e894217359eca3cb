//! Horns in a complex: enumeration, filler search, fibrancy checking and
//! factoring tests.
//!
//! A horn is stored as its compatible face tuple, which is in bijection
//! with maps `Λ^k(n) -> X`. The production enumerator backtracks over face
//! slots with constraint propagation; `enumerate_horns_oracle` is the naive
//! full-product filter kept as an independent oracle (also reachable from
//! the CLI), and the two must agree exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::SsetError;
use crate::map::SimplicialMap;
use crate::par::{map_indexed, Exec};
use crate::report::FibrancyReport;
use crate::simplicial::{LevelSubset, SimplexId, SimplicialSet};

/// Which horns carry filler structure: all of them (Kan) or inner ones only
/// (quasi).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Kan,
    Quasi,
}

impl Mode {
    pub fn admits(&self, n: usize, k: usize) -> bool {
        match self {
            Mode::Kan => n >= 1 && k <= n,
            Mode::Quasi => n >= 2 && k >= 1 && k < n,
        }
    }

    pub fn min_dim(&self) -> usize {
        match self {
            Mode::Kan => 1,
            Mode::Quasi => 2,
        }
    }

    pub fn k_range(&self, n: usize) -> RangeInclusive<usize> {
        match self {
            Mode::Kan => 0..=n,
            Mode::Quasi => 1..=n.saturating_sub(1),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Kan => write!(f, "kan"),
            Mode::Quasi => write!(f, "quasi"),
        }
    }
}

pub fn is_outer(n: usize, k: usize) -> bool {
    k == 0 || k == n
}

/// A horn `Λ^k(n) -> X`, encoded as the tuple of its present faces
/// `(σ_i)_{i != k}` in increasing `i`. The compatibility condition
/// `d_i σ_j = d_{j-1} σ_i` for `i < j` (both `!= k`) makes the tuple
/// equivalent to a simplicial map from the horn complex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Horn {
    n: usize,
    k: usize,
    faces: Vec<SimplexId>,
}

impl Horn {
    pub fn new(n: usize, k: usize, faces: Vec<SimplexId>) -> Result<Self, SsetError> {
        if n == 0 || k > n {
            return Err(SsetError::InvalidHorn(format!(
                "index {k} out of range for dimension {n}"
            )));
        }
        if faces.len() != n {
            return Err(SsetError::InvalidHorn(format!(
                "expected {n} faces, got {}",
                faces.len()
            )));
        }
        if faces.iter().any(|f| f.dim() + 1 != n) {
            return Err(SsetError::InvalidHorn("face of wrong dimension".into()));
        }
        Ok(Horn { n, k, faces })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Slot indices `0..=n` without `k`, in order.
    pub fn slots(n: usize, k: usize) -> impl Iterator<Item = usize> {
        (0..=n).filter(move |i| *i != k)
    }

    /// The face at slot `i` (`i != k`).
    pub fn face(&self, i: usize) -> SimplexId {
        assert!(i != self.k && i <= self.n);
        let pos = if i < self.k { i } else { i - 1 };
        self.faces[pos]
    }

    pub fn faces(&self) -> &[SimplexId] {
        &self.faces
    }

    pub fn is_outer(&self) -> bool {
        is_outer(self.n, self.k)
    }

    /// Checks the compatibility condition inside `x`.
    pub fn is_valid_in(&self, x: &SimplicialSet) -> bool {
        if self.faces.iter().any(|f| f.index() >= x.level_len(f.dim())) {
            return false;
        }
        if self.n < 2 {
            return true;
        }
        for j in Horn::slots(self.n, self.k) {
            for i in Horn::slots(self.n, self.k).take_while(|i| *i < j) {
                if x.face(self.face(j), i) != x.face(self.face(i), j - 1) {
                    return false;
                }
            }
        }
        true
    }

    pub fn describe(&self, x: &SimplicialSet) -> HornDescriptor {
        HornDescriptor {
            n: self.n,
            k: self.k,
            faces: self.faces.iter().map(|f| x.token(*f).to_string()).collect(),
        }
    }
}

/// Token-level rendering of a horn, used in reports and serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HornDescriptor {
    pub n: usize,
    pub k: usize,
    pub faces: Vec<String>,
}

impl HornDescriptor {
    pub fn resolve(&self, x: &SimplicialSet) -> Result<Horn, SsetError> {
        let faces = self
            .faces
            .iter()
            .map(|t| {
                x.by_token(t)
                    .ok_or_else(|| SsetError::UnknownToken(t.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Horn::new(self.n, self.k, faces)
    }
}

impl fmt::Display for HornDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Λ^{}({}) on ({})",
            self.k,
            self.n,
            self.faces.join(", ")
        )
    }
}

/// Applies a simplicial map to a horn's faces.
pub fn map_horn(f: &SimplicialMap, h: &Horn) -> Horn {
    let faces = h.faces.iter().map(|s| f.apply(*s)).collect();
    Horn {
        n: h.n,
        k: h.k,
        faces,
    }
}

fn check_dims(x: &SimplicialSet, mode: Mode, dims: &RangeInclusive<usize>) -> Result<(), SsetError> {
    if *dims.start() < mode.min_dim() || *dims.end() > x.truncation() {
        return Err(SsetError::LevelOutOfRange {
            level: *dims.end(),
            truncation: x.truncation(),
        });
    }
    Ok(())
}

/// All horns of `x` admitted by `mode` with dimension in `dims`, in the
/// canonical order `(n, k, face tuple)`.
pub fn enumerate_horns(
    x: &SimplicialSet,
    mode: Mode,
    dims: RangeInclusive<usize>,
) -> Result<Vec<Horn>, SsetError> {
    enumerate_horns_with(x, mode, dims, Exec::default())
}

pub fn enumerate_horns_with(
    x: &SimplicialSet,
    mode: Mode,
    dims: RangeInclusive<usize>,
    exec: Exec,
) -> Result<Vec<Horn>, SsetError> {
    check_dims(x, mode, &dims)?;
    let pairs: Vec<(usize, usize)> = dims
        .flat_map(|n| mode.k_range(n).map(move |k| (n, k)))
        .collect();
    let per_pair = map_indexed(exec, pairs.len(), |p| {
        let (n, k) = pairs[p];
        enumerate_pair(x, n, k)
    });
    Ok(per_pair.into_iter().flatten().collect())
}

/// Backtracking enumeration for one `(n, k)`: slots are filled in
/// increasing order and each chosen face constrains later slots through the
/// compatibility condition, pruned with a face-position index.
fn enumerate_pair(x: &SimplicialSet, n: usize, k: usize) -> Vec<Horn> {
    let level = x.level_len(n - 1);
    if level == 0 {
        return Vec::new();
    }
    // face_at[i][target] = candidates σ at level n-1 with d_i σ = target
    let face_index: Vec<Vec<Vec<u32>>> = if n >= 2 {
        (0..n)
            .map(|i| {
                let mut buckets = vec![Vec::new(); x.level_len(n - 2)];
                for s in x.simplices(n - 1) {
                    buckets[x.face(s, i).index()].push(s.index() as u32);
                }
                buckets
            })
            .collect()
    } else {
        Vec::new()
    };
    let slots: Vec<usize> = Horn::slots(n, k).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<SimplexId> = Vec::with_capacity(slots.len());
    backtrack(x, n, &face_index, &slots, &mut chosen, &mut out, k);
    out
}

fn backtrack(
    x: &SimplicialSet,
    n: usize,
    face_index: &[Vec<Vec<u32>>],
    slots: &[usize],
    chosen: &mut Vec<SimplexId>,
    out: &mut Vec<Horn>,
    k: usize,
) {
    if chosen.len() == slots.len() {
        out.push(Horn {
            n,
            k,
            faces: chosen.clone(),
        });
        return;
    }
    let j = slots[chosen.len()];
    // constraints from already chosen slots i < j: d_i σ_j = d_{j-1} σ_i
    let constraints: Vec<(usize, SimplexId)> = slots[..chosen.len()]
        .iter()
        .zip(chosen.iter())
        .map(|(i, sigma)| (*i, x.face(*sigma, j - 1)))
        .collect();
    let candidates: Vec<SimplexId> = if let Some((i0, t0)) = constraints.first() {
        face_index[*i0][t0.index()]
            .iter()
            .map(|idx| SimplexId::new(n - 1, *idx as usize))
            .filter(|s| {
                constraints[1..]
                    .iter()
                    .all(|(i, t)| x.face(*s, *i) == *t)
            })
            .collect()
    } else {
        x.simplices(n - 1).collect()
    };
    for c in candidates {
        chosen.push(c);
        backtrack(x, n, face_index, slots, chosen, out, k);
        chosen.pop();
    }
}

/// Brute-force oracle: every tuple of `(n-1)`-simplices, filtered by the
/// compatibility condition. Kept independent of the production path.
pub fn enumerate_horns_oracle(
    x: &SimplicialSet,
    mode: Mode,
    dims: RangeInclusive<usize>,
    exec: Exec,
) -> Result<Vec<Horn>, SsetError> {
    check_dims(x, mode, &dims)?;
    let pairs: Vec<(usize, usize)> = dims
        .flat_map(|n| mode.k_range(n).map(move |k| (n, k)))
        .collect();
    let per_pair = map_indexed(exec, pairs.len(), |p| {
        let (n, k) = pairs[p];
        let level = x.level_len(n - 1);
        let slots: Vec<usize> = Horn::slots(n, k).collect();
        let mut out = Vec::new();
        let mut tuple = vec![0usize; slots.len()];
        'outer: loop {
            let faces: Vec<SimplexId> =
                tuple.iter().map(|i| SimplexId::new(n - 1, *i)).collect();
            let horn = Horn {
                n,
                k,
                faces,
            };
            if level > 0 && horn.is_valid_in(x) {
                out.push(horn);
            }
            // odometer over the full product
            for pos in (0..tuple.len()).rev() {
                tuple[pos] += 1;
                if tuple[pos] < level {
                    continue 'outer;
                }
                tuple[pos] = 0;
            }
            break;
        }
        if level == 0 {
            out.clear();
        }
        out.sort();
        out
    });
    Ok(per_pair.into_iter().flatten().collect())
}

/// All `n`-simplices filling the horn: `d_i τ = σ_i` for every `i != k`.
pub fn find_fillers(x: &SimplicialSet, h: &Horn) -> Result<Vec<SimplexId>, SsetError> {
    if h.n > x.truncation() || !h.is_valid_in(x) {
        return Err(SsetError::InvalidHorn(format!(
            "horn of dimension {} invalid in this complex",
            h.n
        )));
    }
    Ok(x.simplices(h.n)
        .filter(|t| Horn::slots(h.n, h.k).all(|i| x.face(*t, i) == h.face(i)))
        .collect())
}

/// Lists every admitted horn within `dims` that has no filler at all; an
/// empty report means fibrant-at-truncation for those dimensions.
pub fn check_fibrancy(
    x: &SimplicialSet,
    mode: Mode,
    dims: Option<RangeInclusive<usize>>,
) -> Result<FibrancyReport, SsetError> {
    check_fibrancy_with(x, mode, dims, Exec::default())
}

pub fn check_fibrancy_with(
    x: &SimplicialSet,
    mode: Mode,
    dims: Option<RangeInclusive<usize>>,
    exec: Exec,
) -> Result<FibrancyReport, SsetError> {
    let dims = match dims {
        Some(d) => d,
        None => {
            if x.truncation() < mode.min_dim() {
                return Ok(FibrancyReport::default());
            }
            mode.min_dim()..=x.truncation()
        }
    };
    let horns = enumerate_horns_with(x, mode, dims, exec)?;
    let missing = map_indexed(exec, horns.len(), |i| {
        let h = &horns[i];
        if find_fillers(x, h).map(|f| f.is_empty()).unwrap_or(true) {
            Some(h.describe(x))
        } else {
            None
        }
    });
    Ok(FibrancyReport {
        missing: missing.into_iter().flatten().collect(),
    })
}

/// True iff every face of the horn lies in `s`. Since subcomplex inclusions
/// are levelwise injective this is equivalent to the horn factoring through
/// the subcomplex, and the factorization is unique.
pub fn factors_through(
    x: &SimplicialSet,
    h: &Horn,
    s: &LevelSubset,
) -> Result<bool, SsetError> {
    if !s.is_operator_closed(x) {
        return Err(SsetError::SubsetNotClosed);
    }
    Ok(h.faces.iter().all(|f| s.contains(*f)))
}

/// The map `Λ^k(n) -> X` encoded by a horn: each simplex of the horn
/// complex factors through some present top face and is sent through the
/// corresponding operator word.
pub fn horn_to_map(
    x: &Arc<SimplicialSet>,
    h: &Horn,
) -> Result<SimplicialMap, SsetError> {
    let (lam, _) = crate::shapes::horn_complex(h.n, h.k, x.truncation())?;
    if !h.is_valid_in(x) {
        return Err(SsetError::InvalidHorn("incompatible face tuple".into()));
    }
    let comp = (0..=lam.truncation())
        .map(|m| {
            lam.simplices(m)
                .map(|s| {
                    let word = token_word(lam.token(s));
                    // least missed letter other than k
                    let missed = (0..=h.n)
                        .find(|v| *v != h.k && !word.contains(v))
                        .expect("horn word misses a letter");
                    let through: Vec<usize> = word
                        .iter()
                        .map(|v| if *v > missed { *v - 1 } else { *v })
                        .collect();
                    x.apply_monotone(h.face(missed), &through).index() as u32
                })
                .collect()
        })
        .collect();
    SimplicialMap::new(lam, Arc::clone(x), comp)
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

/// Count of horns per `(n, k)`, for reports.
pub fn horn_census(horns: &[Horn]) -> Vec<((usize, usize), usize)> {
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for h in horns {
        pairs.insert((h.n, h.k));
    }
    pairs
        .into_iter()
        .map(|(n, k)| ((n, k), horns.iter().filter(|h| h.n == n && h.k == k).count()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{boundary_complex, horn_complex, standard_simplex};

    #[test]
    fn point_has_two_vertex_horns() {
        let x = standard_simplex(0, 1);
        let horns = enumerate_horns(&x, Mode::Kan, 1..=1).unwrap();
        assert_eq!(horns.len(), 2);
        assert_eq!(horns[0].k(), 0);
        assert_eq!(horns[1].k(), 1);
    }

    #[test]
    fn edge_has_four_vertex_horns() {
        let x = standard_simplex(1, 1);
        let horns = enumerate_horns(&x, Mode::Kan, 1..=1).unwrap();
        assert_eq!(horns.len(), 4);
    }

    #[test]
    fn edge_at_dim_two_has_four_inner_horns() {
        let x = standard_simplex(1, 2);
        let horns = enumerate_horns(&x, Mode::Quasi, 2..=2).unwrap();
        // composable pairs among edges 00, 01, 11
        assert_eq!(horns.len(), 4);
    }

    #[test]
    fn oracle_agrees_on_small_shapes() {
        for (x, name) in [
            (standard_simplex(2, 2), "Δ(2)"),
            (standard_simplex(1, 2), "Δ(1)@2"),
            (horn_complex(2, 1, 2).unwrap().0, "Λ^1(2)"),
            (boundary_complex(2, 2).unwrap().0, "∂Δ(2)"),
        ] {
            for mode in [Mode::Kan, Mode::Quasi] {
                let dims = mode.min_dim()..=2;
                let fast = enumerate_horns(&x, mode, dims.clone()).unwrap();
                let slow = enumerate_horns_oracle(&x, mode, dims, Exec::Seq).unwrap();
                assert_eq!(fast, slow, "{name} in {mode} mode");
            }
        }
    }

    #[test]
    fn fillers_in_the_standard_simplex() {
        let x = standard_simplex(2, 2);
        let d0 = x.by_token("12").unwrap();
        let d2 = x.by_token("01").unwrap();
        let h = Horn::new(2, 1, vec![d0, d2]).unwrap();
        let fillers = find_fillers(&x, &h).unwrap();
        assert_eq!(fillers, vec![x.by_token("012").unwrap()]);

        let (b, _) = boundary_complex(2, 2).unwrap();
        let d0 = b.by_token("12").unwrap();
        let d2 = b.by_token("01").unwrap();
        let h = Horn::new(2, 1, vec![d0, d2]).unwrap();
        assert!(find_fillers(&b, &h).unwrap().is_empty());
    }

    #[test]
    fn degenerate_edge_fills_vertex_horns_of_the_point() {
        let x = standard_simplex(0, 1);
        let v = x.by_token("0").unwrap();
        for k in 0..=1 {
            let h = Horn::new(1, k, vec![v]).unwrap();
            let fillers = find_fillers(&x, &h).unwrap();
            assert_eq!(fillers.len(), 1);
        }
    }

    #[test]
    fn fibrancy_reports() {
        let x = standard_simplex(2, 2);
        let r = check_fibrancy(&x, Mode::Kan, Some(1..=1)).unwrap();
        assert!(r.is_fibrant(), "{r}");

        let (lam, _) = horn_complex(2, 1, 2).unwrap();
        let r = check_fibrancy(&lam, Mode::Quasi, None).unwrap();
        assert!(!r.is_fibrant());
    }

    #[test]
    fn factoring_is_monotone() {
        let x = standard_simplex(2, 2);
        let horns = enumerate_horns(&x, Mode::Kan, 1..=2).unwrap();
        let full = LevelSubset::full(&x);
        let empty = LevelSubset::empty(&x);
        for h in &horns {
            assert!(factors_through(&x, h, &full).unwrap());
            assert!(!factors_through(&x, h, &empty).unwrap());
        }
    }

    #[test]
    fn horn_to_map_validates() {
        let x = standard_simplex(2, 2);
        for h in enumerate_horns(&x, Mode::Kan, 1..=2).unwrap() {
            let m = horn_to_map(&x, &h).unwrap();
            assert!(m.validate().is_empty(), "horn {:?}", h.describe(&x));
        }
    }
}
