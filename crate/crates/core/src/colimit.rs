//! Pointwise finite colimits of truncated simplicial sets: pushouts,
//! coequalizers, chain colimits and general finite colimits.
//!
//! Everything reduces to one quotient kernel: a levelwise union-find whose
//! generating pairs are closed off under face and degeneracy operators.
//! Class representatives are the least members in creation order, so
//! results are reproducible and later provenance can trace every merge.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::ColimitError;
use crate::map::SimplicialMap;
use crate::simplicial::{Provenance, SimplexId, SimplicialSet, SsetBuilder};

/// A finite diagram of complexes and maps between named nodes.
pub struct DiagramSpec {
    nodes: Vec<(String, Arc<SimplicialSet>)>,
    edges: Vec<DiagramEdge>,
}

pub struct DiagramEdge {
    pub name: Option<String>,
    pub source: usize,
    pub target: usize,
    pub map: SimplicialMap,
}

impl DiagramSpec {
    pub fn new(
        nodes: Vec<(String, Arc<SimplicialSet>)>,
        edges: Vec<(Option<String>, String, String, SimplicialMap)>,
    ) -> Result<Self, ColimitError> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &nodes {
            if !seen.insert(name.clone()) {
                return Err(ColimitError::DuplicateNode(name.clone()));
            }
        }
        if let Some(((_, first), rest)) = nodes.split_first().map(|(f, r)| (f, r)) {
            if rest
                .iter()
                .any(|(_, x)| x.truncation() != first.truncation())
            {
                return Err(ColimitError::MixedTruncation);
            }
        }
        let index_of = |name: &str| nodes.iter().position(|(n, _)| n == name);
        let edges = edges
            .into_iter()
            .map(|(name, src, tgt, map)| {
                let label = name.clone().unwrap_or_else(|| format!("{src}->{tgt}"));
                let source = index_of(&src).ok_or(ColimitError::DanglingEdge(label.clone()))?;
                let target = index_of(&tgt).ok_or(ColimitError::DanglingEdge(label.clone()))?;
                if map.source() != &nodes[source].1 || map.target() != &nodes[target].1 {
                    return Err(ColimitError::DanglingEdge(label));
                }
                Ok(DiagramEdge {
                    name,
                    source,
                    target,
                    map,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DiagramSpec { nodes, edges })
    }

    pub fn nodes(&self) -> &[(String, Arc<SimplicialSet>)] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }
}

/// Apex and per-node legs of a computed colimit.
pub struct ColimitResult {
    pub apex: Arc<SimplicialSet>,
    pub legs: Vec<SimplicialMap>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let p = self.parent[i as usize];
            self.parent[i as usize] = self.parent[p as usize];
            i = self.parent[i as usize];
        }
        i
    }

    /// Unites two classes; the smaller index stays the representative.
    /// Returns false if they already coincide.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}

/// Quotients a complex by the simplicial congruence generated by the given
/// pairs: the relation is closed under all face and degeneracy operators,
/// the quotient complex is built on the classes (representative = least
/// member in creation order) and the projection is returned with it.
pub fn quotient_by_pairs(
    x: &Arc<SimplicialSet>,
    pairs: &[(SimplexId, SimplexId)],
) -> Result<(Arc<SimplicialSet>, SimplicialMap), ColimitError> {
    let d = x.truncation();
    let mut uf: Vec<UnionFind> = (0..=d).map(|n| UnionFind::new(x.level_len(n))).collect();
    let mut queue: VecDeque<(SimplexId, SimplexId)> = pairs.iter().copied().collect();
    while let Some((a, b)) = queue.pop_front() {
        debug_assert_eq!(a.dim(), b.dim());
        let n = a.dim();
        if !uf[n].union(a.index() as u32, b.index() as u32) {
            continue;
        }
        if n >= 1 {
            for i in 0..=n {
                queue.push_back((x.face(a, i), x.face(b, i)));
            }
        }
        if n < d {
            for i in 0..=n {
                queue.push_back((
                    x.degeneracy(a, i).unwrap(),
                    x.degeneracy(b, i).unwrap(),
                ));
            }
        }
    }
    // class index per level, in order of least members
    let mut class_of: Vec<Vec<u32>> = Vec::with_capacity(d + 1);
    let mut members: Vec<Vec<Vec<u32>>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let len = x.level_len(n);
        let mut map = vec![u32::MAX; len];
        let mut mem: Vec<Vec<u32>> = Vec::new();
        for idx in 0..len {
            let root = uf[n].find(idx as u32) as usize;
            if map[root] == u32::MAX {
                map[root] = mem.len() as u32;
                mem.push(Vec::new());
            }
            let class = map[root];
            map[idx] = class;
            mem[class as usize].push(idx as u32);
        }
        class_of.push(map);
        members.push(mem);
    }
    let mut b = SsetBuilder::new(d);
    for n in 0..=d {
        for (class, mem) in members[n].iter().enumerate() {
            let rep = SimplexId::new(n, mem[0] as usize);
            let faces: Vec<SimplexId> = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        SimplexId::new(n - 1, class_of[n - 1][x.face(rep, i).index()] as usize)
                    })
                    .collect()
            };
            let prov = Provenance::ColimitClass {
                members: mem
                    .iter()
                    .map(|m| x.token(SimplexId::new(n, *m as usize)).to_string())
                    .collect(),
            };
            let id = b.add_simplex(n, x.token(rep).to_string(), &faces, prov)?;
            debug_assert_eq!(id.index(), class);
        }
    }
    for n in 0..d {
        for (class, mem) in members[n].iter().enumerate() {
            let rep = SimplexId::new(n, mem[0] as usize);
            for i in 0..=n {
                let tgt = class_of[n + 1][x.degeneracy(rep, i).unwrap().index()] as usize;
                b.set_degeneracy(SimplexId::new(n, class), i, SimplexId::new(n + 1, tgt))?;
            }
        }
    }
    let apex = b.finish()?;
    let projection = SimplicialMap::new(Arc::clone(x), Arc::clone(&apex), class_of)?;
    Ok((apex, projection))
}

/// Disjoint union of complexes, tokens qualified `node.token`; legs are the
/// canonical inclusions.
fn coproduct_complex(
    nodes: &[(String, Arc<SimplicialSet>)],
    dim: usize,
) -> Result<(Arc<SimplicialSet>, Vec<SimplicialMap>), ColimitError> {
    let mut b = SsetBuilder::new(dim);
    // offsets[node][level] = first apex index of that node's block
    let mut offsets: Vec<Vec<u32>> = vec![Vec::new(); nodes.len()];
    for n in 0..=dim {
        for (pos, (name, x)) in nodes.iter().enumerate() {
            offsets[pos].push(b.level_len(n) as u32);
            for s in x.simplices(n) {
                let faces: Vec<SimplexId> = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| {
                            SimplexId::new(
                                n - 1,
                                offsets[pos][n - 1] as usize + x.face(s, i).index(),
                            )
                        })
                        .collect()
                };
                b.add_simplex(
                    n,
                    format!("{name}.{}", x.token(s)),
                    &faces,
                    x.provenance(s).clone(),
                )?;
            }
        }
    }
    for n in 0..dim {
        for (pos, (_, x)) in nodes.iter().enumerate() {
            for s in x.simplices(n) {
                let id = SimplexId::new(n, offsets[pos][n] as usize + s.index());
                for i in 0..=n {
                    let t = x.degeneracy(s, i).unwrap();
                    b.set_degeneracy(
                        id,
                        i,
                        SimplexId::new(n + 1, offsets[pos][n + 1] as usize + t.index()),
                    )?;
                }
            }
        }
    }
    let apex = b.finish()?;
    let legs = nodes
        .iter()
        .enumerate()
        .map(|(pos, (_, x))| {
            let comp = (0..=dim)
                .map(|n| {
                    (0..x.level_len(n) as u32)
                        .map(|i| offsets[pos][n] + i)
                        .collect()
                })
                .collect();
            SimplicialMap::new(Arc::clone(x), Arc::clone(&apex), comp)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((apex, legs))
}

/// Pushout of the span `X <-f- A -g-> B`: levelwise pushout of sets with
/// induced operators. Legs are `[X -> P, B -> P]`.
pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<ColimitResult, ColimitError> {
    if !std::ptr::eq(f.source().as_ref(), g.source().as_ref()) && f.source() != g.source() {
        return Err(ColimitError::NotASpan);
    }
    if f.target().truncation() != g.target().truncation() {
        return Err(ColimitError::MixedTruncation);
    }
    let dim = f.target().truncation();
    let nodes = vec![
        ("x".to_string(), Arc::clone(f.target())),
        ("b".to_string(), Arc::clone(g.target())),
    ];
    let (cop, incl) = coproduct_complex(&nodes, dim)?;
    let a = f.source();
    let pairs: Vec<(SimplexId, SimplexId)> = (0..=dim)
        .flat_map(|n| {
            a.simplices(n).map(|s| {
                (
                    incl[0].apply(f.apply(s)),
                    incl[1].apply(g.apply(s)),
                )
            })
        })
        .collect();
    let (apex, proj) = quotient_by_pairs(&cop, &pairs)?;
    let legs = vec![incl[0].then(&proj)?, incl[1].then(&proj)?];
    Ok(ColimitResult { apex, legs })
}

/// Coequalizer of the parallel pair `f, g : X -> Y`: quotient of `Y` by the
/// congruence generated by `f(x) ~ g(x)`. The single leg is the projection.
pub fn coequalizer(f: &SimplicialMap, g: &SimplicialMap) -> Result<ColimitResult, ColimitError> {
    let parallel = (std::ptr::eq(f.source().as_ref(), g.source().as_ref())
        || f.source() == g.source())
        && (std::ptr::eq(f.target().as_ref(), g.target().as_ref()) || f.target() == g.target());
    if !parallel {
        return Err(ColimitError::NotParallel);
    }
    let x = f.source();
    let pairs: Vec<(SimplexId, SimplexId)> = (0..=x.truncation())
        .flat_map(|n| x.simplices(n).map(|s| (f.apply(s), g.apply(s))))
        .collect();
    let (apex, proj) = quotient_by_pairs(f.target(), &pairs)?;
    Ok(ColimitResult {
        apex,
        legs: vec![proj],
    })
}

/// Colimit of a chain of levelwise-injective maps `X_0 -> X_1 -> ...`: for
/// finite chains this is the last term, with composite legs.
pub fn chain_colimit(links: &[SimplicialMap]) -> Result<ColimitResult, ColimitError> {
    if links.is_empty() {
        return Err(ColimitError::EmptyChain);
    }
    for (i, link) in links.iter().enumerate() {
        if !link.is_levelwise_injective() {
            return Err(ColimitError::NonInjectiveLink(i));
        }
        if i + 1 < links.len() && link.target() != links[i + 1].source() {
            return Err(ColimitError::BrokenChain(i));
        }
    }
    let apex = Arc::clone(links.last().unwrap().target());
    let mut legs: Vec<SimplicialMap> = Vec::with_capacity(links.len() + 1);
    for i in 0..links.len() {
        let mut leg = links[i].clone();
        for link in &links[i + 1..] {
            leg = leg.then(link)?;
        }
        legs.push(leg);
    }
    legs.push(SimplicialMap::identity(&apex));
    Ok(ColimitResult { apex, legs })
}

/// General finite colimit: disjoint union of the node levels quotiented by
/// the congruence generated by all edges.
pub fn general_colimit(diagram: &DiagramSpec) -> Result<ColimitResult, ColimitError> {
    if diagram.nodes.is_empty() {
        return Err(ColimitError::EmptyChain);
    }
    let dim = diagram.nodes[0].1.truncation();
    let (cop, incl) = coproduct_complex(&diagram.nodes, dim)?;
    let mut pairs = Vec::new();
    for edge in &diagram.edges {
        let src = &diagram.nodes[edge.source].1;
        for n in 0..=dim {
            for s in src.simplices(n) {
                pairs.push((
                    incl[edge.source].apply(s),
                    incl[edge.target].apply(edge.map.apply(s)),
                ));
            }
        }
    }
    let (apex, proj) = quotient_by_pairs(&cop, &pairs)?;
    let legs = incl
        .iter()
        .map(|leg| leg.then(&proj))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ColimitResult { apex, legs })
}

/// Coproduct, as the colimit of the edgeless diagram.
pub fn coproduct(nodes: Vec<(String, Arc<SimplicialSet>)>) -> Result<ColimitResult, ColimitError> {
    general_colimit(&DiagramSpec::new(nodes, Vec::new())?)
}

/// The unique mediating map out of a colimit, by forced assignment on
/// classes: every apex simplex is a leg image, its value is pinned by the
/// cocone, and disagreement between members means no map exists.
pub fn mediating_map(
    result: &ColimitResult,
    cocone: &[SimplicialMap],
) -> Result<SimplicialMap, ColimitError> {
    if cocone.len() != result.legs.len() {
        return Err(ColimitError::NoMediating("cocone arity".into()));
    }
    let w = cocone
        .first()
        .map(|c| Arc::clone(c.target()))
        .ok_or_else(|| ColimitError::NoMediating("empty cocone".into()))?;
    let apex = &result.apex;
    let dim = apex.truncation();
    let mut comp: Vec<Vec<u32>> = (0..=dim)
        .map(|n| vec![u32::MAX; apex.level_len(n)])
        .collect();
    for (leg, cone) in result.legs.iter().zip(cocone) {
        if cone.source() != leg.source() {
            return Err(ColimitError::NoMediating("cocone source mismatch".into()));
        }
        let src = leg.source();
        for n in 0..=dim {
            for s in src.simplices(n) {
                let at = leg.apply(s);
                let val = cone.apply(s).index() as u32;
                let slot = &mut comp[n][at.index()];
                if *slot != u32::MAX && *slot != val {
                    return Err(ColimitError::NoMediating(format!(
                        "class `{}` receives two images",
                        apex.token(at)
                    )));
                }
                *slot = val;
            }
        }
    }
    for (n, level) in comp.iter().enumerate() {
        if let Some(idx) = level.iter().position(|v| *v == u32::MAX) {
            return Err(ColimitError::NoMediating(format!(
                "class `{}` not covered by any leg",
                apex.token(SimplexId::new(n, idx))
            )));
        }
    }
    let map = SimplicialMap::new(Arc::clone(apex), w, comp)?;
    let report = map.validate();
    if !report.is_empty() {
        return Err(ColimitError::NoMediating(format!(
            "forced assignment is not simplicial: {report}"
        )));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horn::{enumerate_horns, Mode};
    use crate::iso::find_isomorphism;
    use crate::map::SimplicialMap;
    use crate::shapes::{boundary_complex, horn_complex, point, standard_simplex, token_inclusion};

    #[test]
    fn pushout_along_identity_is_isomorphic() {
        let x = standard_simplex(2, 2);
        let a = standard_simplex(1, 2);
        let f = token_inclusion(&a, &x).unwrap();
        let id = SimplicialMap::identity(&a);
        let p = pushout(&f, &id).unwrap();
        assert!(p.apex.validate().is_empty());
        assert!(find_isomorphism(&p.apex, &x).is_some());
    }

    #[test]
    fn glue_edge_to_point() {
        // pt <- Λ^0(1) -> Δ(1) at D=1: two vertices, one nondegenerate edge
        let pt = point(1);
        let (lam, incl) = horn_complex(1, 0, 1).unwrap();
        let v = pt.by_token("0").unwrap();
        let f = SimplicialMap::constant(&lam, &pt, v).unwrap();
        let p = pushout(&f, &incl).unwrap();
        assert!(p.apex.validate().is_empty());
        assert_eq!(p.apex.level_len(0), 2);
        assert_eq!(p.apex.nondeg_count(1), 1);
        assert!(p.legs[0].is_levelwise_injective());
    }

    #[test]
    fn glue_two_cell_along_boundary() {
        // X <- ∂Δ(2) -> Δ(2) where X = ∂Δ(2): adds the 2-cell and nothing else
        let (bd, incl) = boundary_complex(2, 2).unwrap();
        let id = SimplicialMap::identity(&bd);
        let p = pushout(&id, &incl).unwrap();
        assert!(p.apex.validate().is_empty());
        let before = bd.nondeg_profile();
        let after = p.apex.nondeg_profile();
        assert_eq!(before, vec![3, 3, 0]);
        assert_eq!(after, vec![3, 3, 1]);
        let delta: usize = after.iter().sum::<usize>() - before.iter().sum::<usize>();
        assert_eq!(delta, 1);
        // total new simplices: the 2-cell only (its boundary is present)
        assert_eq!(p.apex.total_size() - bd.total_size(), 1);
    }

    #[test]
    fn circle_from_coequalized_endpoints() {
        let pt = point(1);
        let edge = standard_simplex(1, 1);
        let v0 = edge.by_token("0").unwrap();
        let v1 = edge.by_token("1").unwrap();
        let f = SimplicialMap::constant(&pt, &edge, v0).unwrap();
        let g = SimplicialMap::constant(&pt, &edge, v1).unwrap();
        let c = coequalizer(&f, &g).unwrap();
        assert!(c.apex.validate().is_empty());
        assert_eq!(c.apex.level_len(0), 1);
        assert_eq!(c.apex.nondeg_count(1), 1);
        assert!(c.legs[0].is_levelwise_surjective());
    }

    #[test]
    fn coequalizer_of_equal_maps_is_identity_shaped() {
        let x = standard_simplex(2, 2);
        let id = SimplicialMap::identity(&x);
        let c = coequalizer(&id, &id).unwrap();
        assert!(find_isomorphism(&c.apex, &x).is_some());
    }

    #[test]
    fn chain_colimit_is_last_term() {
        let (_lam, incl) = horn_complex(1, 0, 1).unwrap();
        let delta = standard_simplex(1, 1);
        let c = chain_colimit(&[incl.clone()]).unwrap();
        assert!(c.apex == delta);
        assert!(c.legs[0].same_as(&incl));
        assert!(c.legs[1].same_as(&SimplicialMap::identity(&delta)));
        for leg in &c.legs {
            assert!(leg.is_levelwise_injective());
        }
    }

    #[test]
    fn chain_colimit_rejects_non_injective_links() {
        let x = standard_simplex(1, 1);
        let pt = point(1);
        let v = pt.by_token("0").unwrap();
        let collapse = SimplicialMap::constant(&x, &pt, v).unwrap();
        assert!(matches!(
            chain_colimit(&[collapse]),
            Err(ColimitError::NonInjectiveLink(0))
        ));
    }

    #[test]
    fn span_diagram_matches_pushout() {
        let pt = point(1);
        let (lam, incl) = horn_complex(1, 0, 1).unwrap();
        let v = pt.by_token("0").unwrap();
        let f = SimplicialMap::constant(&lam, &pt, v).unwrap();
        let direct = pushout(&f, &incl).unwrap();

        let delta = standard_simplex(1, 1);
        let diagram = DiagramSpec::new(
            vec![
                ("a".into(), Arc::clone(&lam)),
                ("x".into(), Arc::clone(&pt)),
                ("b".into(), Arc::clone(&delta)),
            ],
            vec![
                (None, "a".into(), "x".into(), f),
                (None, "a".into(), "b".into(), incl),
            ],
        )
        .unwrap();
        let via_general = general_colimit(&diagram).unwrap();
        assert!(find_isomorphism(&direct.apex, &via_general.apex).is_some());
    }

    #[test]
    fn parallel_pair_diagram_matches_coequalizer() {
        let pt = point(1);
        let edge = standard_simplex(1, 1);
        let v0 = edge.by_token("0").unwrap();
        let v1 = edge.by_token("1").unwrap();
        let f = SimplicialMap::constant(&pt, &edge, v0).unwrap();
        let g = SimplicialMap::constant(&pt, &edge, v1).unwrap();
        let direct = coequalizer(&f, &g).unwrap();
        let diagram = DiagramSpec::new(
            vec![
                ("p".into(), Arc::clone(&pt)),
                ("e".into(), Arc::clone(&edge)),
            ],
            vec![
                (None, "p".into(), "e".into(), f),
                (None, "p".into(), "e".into(), g),
            ],
        )
        .unwrap();
        let via_general = general_colimit(&diagram).unwrap();
        assert!(find_isomorphism(&direct.apex, &via_general.apex).is_some());
    }

    #[test]
    fn mediating_map_is_forced_and_unique() {
        // cocone over the endpoint-identification coequalizer, into itself
        let pt = point(1);
        let edge = standard_simplex(1, 1);
        let v0 = edge.by_token("0").unwrap();
        let v1 = edge.by_token("1").unwrap();
        let f = SimplicialMap::constant(&pt, &edge, v0).unwrap();
        let g = SimplicialMap::constant(&pt, &edge, v1).unwrap();
        let c = coequalizer(&f, &g).unwrap();
        let u = mediating_map(&c, &[c.legs[0].clone()]).unwrap();
        assert!(u.same_as(&SimplicialMap::identity(&c.apex)));
    }

    #[test]
    fn pushout_count_after_horn_glue_matches_census() {
        // sanity: gluing Δ(2) along its inner horn adds filler and missing face
        let (lam, incl) = horn_complex(2, 1, 2).unwrap();
        let id = SimplicialMap::identity(&lam);
        let p = pushout(&id, &incl).unwrap();
        assert!(p.apex.validate().is_empty());
        assert_eq!(p.apex.nondeg_profile(), vec![3, 3, 1]);
        let horns_before = enumerate_horns(&lam, Mode::Quasi, 2..=2).unwrap().len();
        let horns_after = enumerate_horns(&p.apex, Mode::Quasi, 2..=2).unwrap().len();
        assert!(horns_after > horns_before);
    }
}
