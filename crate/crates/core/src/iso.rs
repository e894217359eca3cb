//! Search for simplicial isomorphisms.
//!
//! Backtracking over nondegenerate simplices dimension by dimension, in the
//! style of graph-isomorphism solvers: candidates are pruned by iterated
//! refinement signatures (level sizes, nondegeneracy, face/coface colors)
//! and degenerate simplices are forced from their bases, so the search tree
//! only branches on genuine symmetry.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::map::SimplicialMap;
use crate::simplicial::{SimplexId, SimplicialSet};

const REFINEMENT_ROUNDS: usize = 3;

/// An invertible simplicial map `x -> y` if one exists.
pub fn find_isomorphism(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
) -> Option<SimplicialMap> {
    if x.truncation() != y.truncation() {
        return None;
    }
    let d = x.truncation();
    for n in 0..=d {
        if x.level_len(n) != y.level_len(n) || x.nondeg_count(n) != y.nondeg_count(n) {
            return None;
        }
    }
    let sx = signatures(x);
    let sy = signatures(y);
    if histogram(&sx) != histogram(&sy) {
        return None;
    }

    let mut comp: Vec<Vec<u32>> = (0..=d)
        .map(|n| vec![u32::MAX; x.level_len(n)])
        .collect();
    let mut used: Vec<Vec<bool>> = (0..=d).map(|n| vec![false; y.level_len(n)]).collect();
    if assign_level(x, y, &sx, &sy, 0, &mut comp, &mut used) {
        let map = SimplicialMap::new(Arc::clone(x), Arc::clone(y), comp).ok()?;
        if map.is_levelwise_bijective()
            && map.validate().is_empty()
            && map.inverse().ok()?.validate().is_empty()
        {
            return Some(map);
        }
        return None;
    }
    None
}

/// Assigns all simplices of level `n` (degenerate ones forced from their
/// bases, nondegenerate ones by backtracking), then recurses into the next
/// level. Undoes its own bookkeeping on failure.
fn assign_level(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
    sx: &[Vec<u64>],
    sy: &[Vec<u64>],
    n: usize,
    comp: &mut Vec<Vec<u32>>,
    used: &mut Vec<Vec<bool>>,
) -> bool {
    if n > x.truncation() {
        return true;
    }
    let mut forced: Vec<(usize, usize)> = Vec::new();
    let mut consistent = true;
    for s in x.simplices(n) {
        if x.is_nondegenerate(s) {
            continue;
        }
        let (i, base) = x.degeneracy_preimage(s).expect("degenerate simplex");
        let fb = comp[n - 1][base.index()];
        debug_assert_ne!(fb, u32::MAX);
        let target = y
            .degeneracy(SimplexId::new(n - 1, fb as usize), i)
            .expect("within truncation");
        if used[n][target.index()] {
            consistent = false;
            break;
        }
        comp[n][s.index()] = target.index() as u32;
        used[n][target.index()] = true;
        forced.push((s.index(), target.index()));
    }
    if consistent {
        let pending: Vec<SimplexId> = x
            .simplices(n)
            .filter(|s| x.is_nondegenerate(*s))
            .collect();
        if assign_nondeg(x, y, sx, sy, n, &pending, 0, comp, used) {
            return true;
        }
    }
    for (idx, tgt) in forced {
        comp[n][idx] = u32::MAX;
        used[n][tgt] = false;
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn assign_nondeg(
    x: &Arc<SimplicialSet>,
    y: &Arc<SimplicialSet>,
    sx: &[Vec<u64>],
    sy: &[Vec<u64>],
    n: usize,
    pending: &[SimplexId],
    at: usize,
    comp: &mut Vec<Vec<u32>>,
    used: &mut Vec<Vec<bool>>,
) -> bool {
    let Some(s) = pending.get(at).copied() else {
        return assign_level(x, y, sx, sy, n + 1, comp, used);
    };
    for t in y.simplices(n) {
        if used[n][t.index()]
            || !y.is_nondegenerate(t)
            || sy[n][t.index()] != sx[n][s.index()]
        {
            continue;
        }
        if n >= 1 {
            let faces_match =
                (0..=n).all(|i| comp[n - 1][x.face(s, i).index()] == y.face(t, i).index() as u32);
            if !faces_match {
                continue;
            }
        }
        comp[n][s.index()] = t.index() as u32;
        used[n][t.index()] = true;
        if assign_nondeg(x, y, sx, sy, n, pending, at + 1, comp, used) {
            return true;
        }
        comp[n][s.index()] = u32::MAX;
        used[n][t.index()] = false;
    }
    false
}

/// Iterated refinement colors per level: start from nondegeneracy, then
/// repeatedly hash in the ordered face colors and the multiset of coface
/// incidences.
fn signatures(x: &SimplicialSet) -> Vec<Vec<u64>> {
    let d = x.truncation();
    let mut sig: Vec<Vec<u64>> = (0..=d)
        .map(|n| {
            x.simplices(n)
                .map(|s| hash_of(&(n, x.is_nondegenerate(s))))
                .collect()
        })
        .collect();
    for _ in 0..REFINEMENT_ROUNDS {
        let mut next = sig.clone();
        for n in 0..=d {
            for s in x.simplices(n) {
                let mut h = DefaultHasher::new();
                sig[n][s.index()].hash(&mut h);
                if n >= 1 {
                    for i in 0..=n {
                        sig[n - 1][x.face(s, i).index()].hash(&mut h);
                    }
                }
                // coface incidences, gathered as a sorted multiset
                if n < d {
                    let mut up: Vec<(usize, u64)> = Vec::new();
                    for t in x.simplices(n + 1) {
                        for i in 0..=n + 1 {
                            if x.face(t, i) == s {
                                up.push((i, sig[n + 1][t.index()]));
                            }
                        }
                    }
                    up.sort_unstable();
                    up.hash(&mut h);
                }
                next[n][s.index()] = h.finish();
            }
        }
        sig = next;
    }
    sig
}

fn histogram(sig: &[Vec<u64>]) -> Vec<HashMap<u64, usize>> {
    sig.iter()
        .map(|level| {
            let mut h = HashMap::new();
            for v in level {
                *h.entry(*v).or_insert(0) += 1;
            }
            h
        })
        .collect()
}

fn hash_of<T: Hash>(v: &T) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{boundary_complex, horn_complex, standard_simplex};

    #[test]
    fn identity_isomorphism_found() {
        for x in [
            standard_simplex(2, 2),
            standard_simplex(1, 3),
            horn_complex(2, 1, 2).unwrap().0,
        ] {
            let iso = find_isomorphism(&x, &x).expect("self-isomorphism");
            assert!(iso.is_levelwise_bijective());
            assert!(iso.validate().is_empty());
        }
    }

    #[test]
    fn size_obstruction_rejects() {
        let x = standard_simplex(1, 1);
        let (b, _) = boundary_complex(1, 1).unwrap();
        assert!(find_isomorphism(&x, &b).is_none());
    }

    #[test]
    fn distinct_horns_of_same_size_are_isomorphic_complexes() {
        // Λ^0(2) and Λ^2(2) are swapped by reversing the vertex order
        let (h0, _) = horn_complex(2, 0, 2).unwrap();
        let (h2, _) = horn_complex(2, 2, 2).unwrap();
        let iso = find_isomorphism(&h0, &h2).expect("mirror symmetry");
        assert!(iso.validate().is_empty());
        assert!(iso.inverse().unwrap().validate().is_empty());
    }
}
