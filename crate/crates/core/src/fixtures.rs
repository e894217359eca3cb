//! Desk-scale fixture corpus shared by the test suites and benches.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{choose_fillers, make_algebraic, AlgebraicComplex};
use crate::category::{nerve, FiniteCategory};
use crate::colimit::{coequalizer, coproduct, ColimitResult};
use crate::horn::Mode;
use crate::map::SimplicialMap;
use crate::shapes::{boundary_complex, horn_complex, point, standard_simplex};
use crate::simplicial::{Provenance, SimplicialSet, SsetBuilder};
use crate::solid::SolidFamily;

/// The circle at truncation `dim`: both endpoints of the standard edge
/// identified.
pub fn circle(dim: usize) -> Arc<SimplicialSet> {
    let pt = point(dim);
    let edge = standard_simplex(1, dim);
    let v0 = edge.by_token("0").unwrap();
    let v1 = edge.by_token("1").unwrap();
    let f = SimplicialMap::constant(&pt, &edge, v0).unwrap();
    let g = SimplicialMap::constant(&pt, &edge, v1).unwrap();
    coequalizer(&f, &g).unwrap().apex
}

/// Coproduct of two points, with its legs.
pub fn two_points(dim: usize) -> ColimitResult {
    coproduct(vec![("p".into(), point(dim)), ("q".into(), point(dim))]).unwrap()
}

/// Two 2-cells sharing one boundary triangle (the folding target).
pub fn parallel_triangles() -> Arc<SimplicialSet> {
    let mut b = SsetBuilder::new(2);
    let v0 = b.add_simplex(0, "v0".into(), &[], Provenance::Input).unwrap();
    let v1 = b.add_simplex(0, "v1".into(), &[], Provenance::Input).unwrap();
    let v2 = b.add_simplex(0, "v2".into(), &[], Provenance::Input).unwrap();
    let a = b.add_simplex(1, "A".into(), &[v1, v0], Provenance::Input).unwrap();
    let e = b.add_simplex(1, "B".into(), &[v2, v1], Provenance::Input).unwrap();
    let c = b.add_simplex(1, "C".into(), &[v2, v0], Provenance::Input).unwrap();
    b.add_simplex(2, "T".into(), &[e, c, a], Provenance::Input).unwrap();
    b.add_simplex(2, "Tp".into(), &[e, c, a], Provenance::Input).unwrap();
    b.close_degeneracies().unwrap();
    b.finish().unwrap()
}

/// Two triangles with a shared long edge but separate middle vertices (the
/// folding source).
pub fn twin_triangles() -> Arc<SimplicialSet> {
    let mut b = SsetBuilder::new(2);
    let u0 = b.add_simplex(0, "u0".into(), &[], Provenance::Input).unwrap();
    let u1 = b.add_simplex(0, "u1".into(), &[], Provenance::Input).unwrap();
    let u1p = b.add_simplex(0, "u1p".into(), &[], Provenance::Input).unwrap();
    let u2 = b.add_simplex(0, "u2".into(), &[], Provenance::Input).unwrap();
    let a = b.add_simplex(1, "a".into(), &[u1, u0], Provenance::Input).unwrap();
    let ap = b.add_simplex(1, "ap".into(), &[u1p, u0], Provenance::Input).unwrap();
    let bb = b.add_simplex(1, "b".into(), &[u2, u1], Provenance::Input).unwrap();
    let bp = b.add_simplex(1, "bp".into(), &[u2, u1p], Provenance::Input).unwrap();
    let c = b.add_simplex(1, "c".into(), &[u2, u0], Provenance::Input).unwrap();
    b.add_simplex(2, "t".into(), &[bb, c, a], Provenance::Input).unwrap();
    b.add_simplex(2, "tp".into(), &[bp, c, ap], Provenance::Input).unwrap();
    b.close_degeneracies().unwrap();
    b.finish().unwrap()
}

/// The folding family: the twin triangles, with their two distinct
/// distinguished 2-fillers, mapped onto the parallel triangles so that both
/// fillers land over the same horn. Returns the family and the member.
pub fn folding_family() -> (SolidFamily, Arc<AlgebraicComplex>) {
    let ysset = twin_triangles();
    let y = make_algebraic(
        Arc::clone(&ysset),
        Mode::Quasi,
        choose_fillers(&ysset, Mode::Quasi).unwrap(),
    )
    .unwrap();
    let xsset = parallel_triangles();
    let mapping: BTreeMap<String, String> = [
        ("u0", "v0"),
        ("u1", "v1"),
        ("u1p", "v1"),
        ("u2", "v2"),
        ("a", "A"),
        ("ap", "A"),
        ("b", "B"),
        ("bp", "B"),
        ("c", "C"),
        ("t", "T"),
        ("tp", "Tp"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let f = SimplicialMap::from_tokens(Arc::clone(&ysset), Arc::clone(&xsset), &mapping).unwrap();
    (
        SolidFamily {
            mode: Mode::Quasi,
            target: xsset,
            members: vec![(Arc::clone(&y), f)],
        },
        y,
    )
}

/// The fixture corpus: named complexes at truncations up to 3.
pub fn corpus() -> Vec<(String, Arc<SimplicialSet>)> {
    let mut out: Vec<(String, Arc<SimplicialSet>)> = Vec::new();
    let mut push = |name: &str, x: Arc<SimplicialSet>| out.push((name.to_string(), x));
    push("empty@2", SimplicialSet::empty(2));
    push("delta0@1", standard_simplex(0, 1));
    push("delta0@2", standard_simplex(0, 2));
    push("delta1@1", standard_simplex(1, 1));
    push("delta1@2", standard_simplex(1, 2));
    push("delta2@2", standard_simplex(2, 2));
    push("delta2@3", standard_simplex(2, 3));
    push("delta3@3", standard_simplex(3, 3));
    push("boundary1@1", boundary_complex(1, 1).unwrap().0);
    push("boundary2@2", boundary_complex(2, 2).unwrap().0);
    push("boundary3@3", boundary_complex(3, 3).unwrap().0);
    push("horn10@1", horn_complex(1, 0, 1).unwrap().0);
    push("horn11@1", horn_complex(1, 1, 1).unwrap().0);
    push("horn20@2", horn_complex(2, 0, 2).unwrap().0);
    push("horn21@2", horn_complex(2, 1, 2).unwrap().0);
    push("horn22@2", horn_complex(2, 2, 2).unwrap().0);
    push("horn31@3", horn_complex(3, 1, 3).unwrap().0);
    push("nerve-terminal@2", nerve(&FiniteCategory::terminal(), 2).unwrap());
    push("nerve-arrow@2", nerve(&FiniteCategory::arrow(), 2).unwrap());
    push("nerve-iso@2", nerve(&FiniteCategory::walking_iso(), 2).unwrap());
    push("nerve-iso@3", nerve(&FiniteCategory::walking_iso(), 3).unwrap());
    push(
        "nerve-idem@2",
        nerve(&FiniteCategory::idempotent_monoid(), 2).unwrap(),
    );
    push("circle@1", circle(1));
    push("circle@2", circle(2));
    push("two-points@1", two_points(1).apex);
    push("two-points@2", two_points(2).apex);
    push("parallel-triangles@2", parallel_triangles());
    push("twin-triangles@2", twin_triangles());
    out
}

/// Total algebraic complexes over the corpus, per mode, with least-filler
/// tables.
pub fn alg_corpus(mode: Mode) -> Vec<(String, Arc<AlgebraicComplex>)> {
    let candidates: Vec<(String, Arc<SimplicialSet>)> = match mode {
        Mode::Kan => vec![
            ("point@1".into(), point(1)),
            ("point@2".into(), point(2)),
            ("nerve-iso@2".into(), nerve(&FiniteCategory::walking_iso(), 2).unwrap()),
            ("two-points@1".into(), two_points(1).apex),
            ("circle@1".into(), circle(1)),
        ],
        Mode::Quasi => vec![
            ("point@1".into(), point(1)),
            ("point@2".into(), point(2)),
            ("nerve-arrow@2".into(), nerve(&FiniteCategory::arrow(), 2).unwrap()),
            ("nerve-iso@2".into(), nerve(&FiniteCategory::walking_iso(), 2).unwrap()),
            ("nerve-idem@2".into(), nerve(&FiniteCategory::idempotent_monoid(), 2).unwrap()),
            ("parallel-triangles@2".into(), parallel_triangles()),
        ],
    };
    candidates
        .into_iter()
        .map(|(name, x)| {
            let table = choose_fillers(&x, mode)
                .unwrap_or_else(|e| panic!("fixture {name} must be fibrant: {e}"));
            let alg = make_algebraic(Arc::clone(&x), mode, table)
                .unwrap_or_else(|d| panic!("fixture {name} must assemble: {d}"));
            (name, alg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_large_enough_and_valid() {
        let c = corpus();
        assert!(c.len() >= 20);
        for (name, x) in &c {
            assert!(x.truncation() <= 3, "{name}");
            let report = x.validate();
            assert!(report.is_empty(), "{name}: {report}");
        }
    }

    #[test]
    fn alg_corpus_is_total() {
        for mode in [Mode::Kan, Mode::Quasi] {
            for (name, alg) in alg_corpus(mode) {
                assert!(alg.is_total().unwrap(), "{name} in {mode:?}");
            }
        }
    }

    #[test]
    fn circle_is_kan_fibrant_at_dim_one() {
        let c = circle(1);
        let report = crate::horn::check_fibrancy(&c, Mode::Kan, None).unwrap();
        assert!(report.is_fibrant(), "{report}");
    }
}
