//! Standard simplices, boundaries and horns, truncated at a chosen
//! dimension. The `m`-simplices of `Δ(n)` are the order-preserving maps
//! `[m] -> [n]`, stored as weakly increasing vertex words; faces delete a
//! position, degeneracies duplicate one.

use std::sync::Arc;

use crate::error::SsetError;
use crate::map::SimplicialMap;
use crate::simplicial::{Provenance, SimplexId, SimplicialSet, SsetBuilder};

/// All weakly increasing words of length `len` over `0..=top`, in
/// lexicographic order.
pub fn monotone_words(len: usize, top: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, min: usize, top: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in min..=top {
            prefix.push(v);
            go(len, v, top, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, top, &mut Vec::new(), &mut out);
    out
}

pub fn word_token(word: &[usize]) -> String {
    if word.iter().all(|v| *v <= 9) {
        word.iter().map(|v| v.to_string()).collect()
    } else {
        word.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

fn build_from_words<F>(dim: usize, n: usize, keep: F) -> Arc<SimplicialSet>
where
    F: Fn(&[usize]) -> bool,
{
    let mut b = SsetBuilder::new(dim);
    for m in 0..=dim {
        for word in monotone_words(m + 1, n) {
            if !keep(&word) {
                continue;
            }
            let faces: Vec<SimplexId> = if m == 0 {
                Vec::new()
            } else {
                (0..=m)
                    .map(|i| {
                        let mut w = word.clone();
                        w.remove(i);
                        b.id_by_token(&word_token(&w)).expect("face word present")
                    })
                    .collect()
            };
            b.add_simplex(m, word_token(&word), &faces, Provenance::Input)
                .expect("fresh word token");
        }
    }
    // degeneracies duplicate a position; the image word keeps the same
    // letter set, so it is present whenever the source is
    for m in 0..dim {
        for word in monotone_words(m + 1, n) {
            let Some(id) = b.id_by_token(&word_token(&word)) else {
                continue;
            };
            for i in 0..=m {
                let mut w = word.clone();
                w.insert(i, word[i]);
                let tgt = b.id_by_token(&word_token(&w)).expect("degenerate word");
                b.set_degeneracy(id, i, tgt).expect("degeneracy link");
            }
        }
    }
    b.finish().expect("standard shape is well-formed")
}

/// `Δ(n)` truncated at `dim`.
pub fn standard_simplex(n: usize, dim: usize) -> Arc<SimplicialSet> {
    build_from_words(dim, n, |_| true)
}

/// `∂Δ(n)` (words not surjective onto `[n]`) truncated at `dim`, with its
/// inclusion into `Δ(n)`. Rejects `n = 0`: the boundary of the point is the
/// empty complex, constructed separately.
pub fn boundary_complex(
    n: usize,
    dim: usize,
) -> Result<(Arc<SimplicialSet>, SimplicialMap), SsetError> {
    if n == 0 {
        return Err(SsetError::InvalidParameter(
            "boundary of the 0-simplex is the empty complex".into(),
        ));
    }
    let sub = build_from_words(dim, n, |w| (0..=n).any(|v| !w.contains(&v)));
    let incl = token_inclusion(&sub, &standard_simplex(n, dim))?;
    Ok((sub, incl))
}

/// `Λ^k(n)` (words missing some letter other than `k`) truncated at `dim`,
/// with its inclusion into `Δ(n)`.
pub fn horn_complex(
    n: usize,
    k: usize,
    dim: usize,
) -> Result<(Arc<SimplicialSet>, SimplicialMap), SsetError> {
    if n == 0 || k > n {
        return Err(SsetError::InvalidParameter(format!(
            "horn index {k} out of range for dimension {n}"
        )));
    }
    let sub = build_from_words(dim, n, |w| (0..=n).any(|v| v != k && !w.contains(&v)));
    let incl = token_inclusion(&sub, &standard_simplex(n, dim))?;
    Ok((sub, incl))
}

/// The point `Δ(0)` truncated at `dim`.
pub fn point(dim: usize) -> Arc<SimplicialSet> {
    standard_simplex(0, dim)
}

/// Inclusion of a complex whose tokens all occur in `big`.
pub fn token_inclusion(
    small: &Arc<SimplicialSet>,
    big: &Arc<SimplicialSet>,
) -> Result<SimplicialMap, SsetError> {
    let comp = (0..=small.truncation())
        .map(|m| {
            small
                .simplices(m)
                .map(|s| {
                    big.by_token(small.token(s))
                        .map(|t| t.index() as u32)
                        .ok_or_else(|| SsetError::UnknownToken(small.token(s).to_string()))
                })
                .collect::<Result<Vec<u32>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SimplicialMap::new(Arc::clone(small), Arc::clone(big), comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn injective_words(len: usize, top: usize) -> usize {
        monotone_words(len, top)
            .into_iter()
            .filter(|w| w.windows(2).all(|p| p[0] < p[1]))
            .count()
    }

    #[test]
    fn standard_simplex_levels_match_word_counts() {
        for n in 0..=3 {
            for dim in 0..=3 {
                let x = standard_simplex(n, dim);
                for m in 0..=dim {
                    assert_eq!(
                        x.level_len(m),
                        monotone_words(m + 1, n).len(),
                        "Δ({n}) at level {m}"
                    );
                    assert_eq!(x.nondeg_count(m), injective_words(m + 1, n));
                }
                assert!(x.validate().is_empty(), "Δ({n}) truncated at {dim}");
            }
        }
    }

    #[test]
    fn point_has_singleton_levels() {
        let x = standard_simplex(0, 2);
        assert_eq!(x.level_len(0), 1);
        assert_eq!(x.level_len(1), 1);
        assert_eq!(x.level_len(2), 1);
    }

    #[test]
    fn delta_one_at_dim_one() {
        let x = standard_simplex(1, 1);
        assert_eq!(x.level_len(0), 2);
        assert_eq!(x.level_len(1), 3); // 00, 01, 11
        assert_eq!(x.nondeg_count(1), 1);
    }

    #[test]
    fn boundary_two_drops_only_the_top_cell() {
        let (b, incl) = boundary_complex(2, 2).unwrap();
        assert_eq!(b.nondeg_profile(), vec![3, 3, 0]);
        assert!(b.validate().is_empty());
        assert!(incl.validate().is_empty());
        assert!(incl.is_levelwise_injective());
    }

    #[test]
    fn boundary_one_has_no_nondegenerate_edges() {
        let (b, _) = boundary_complex(1, 1).unwrap();
        assert_eq!(b.level_len(0), 2);
        assert_eq!(b.nondeg_profile(), vec![2, 0]);
        // the two degenerate edges 00 and 11
        assert!(b.by_token("00").is_some());
        assert!(b.by_token("11").is_some());
        assert!(b.by_token("01").is_none());
    }

    #[test]
    fn boundary_of_point_rejected() {
        assert!(boundary_complex(0, 1).is_err());
    }

    #[test]
    fn horn_complexes() {
        let (h, incl) = horn_complex(2, 1, 2).unwrap();
        assert_eq!(h.nondeg_profile(), vec![3, 2, 0]);
        assert!(h.validate().is_empty());
        assert!(incl.is_levelwise_injective());

        let (h0, _) = horn_complex(2, 0, 2).unwrap();
        assert_eq!(h0.nondeg_profile(), vec![3, 2, 0]);
        // k = 1 keeps edges 01 and 12; k = 0 keeps 01 and 02
        assert!(h.by_token("01").is_some() && h.by_token("12").is_some());
        assert!(h.by_token("02").is_none());
        assert!(h0.by_token("01").is_some() && h0.by_token("02").is_some());
        assert!(h0.by_token("12").is_none());

        let (h01, _) = horn_complex(1, 0, 1).unwrap();
        assert_eq!(h01.level_len(0), 1);
        assert_eq!(h01.nondeg_profile(), vec![1, 0]);

        assert!(horn_complex(2, 3, 2).is_err());
    }
}
