//! Finite categories, their nerves, and functors between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::CategoryError;
use crate::map::SimplicialMap;
use crate::simplicial::{Provenance, SimplexId, SimplicialSet, SsetBuilder};

#[derive(Clone, Debug)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category with an explicit composition table. `compose[(f, g)]`
/// is the composite "first `f`, then `g`", defined exactly on composable
/// pairs.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identity: Vec<usize>,
    pub compose: BTreeMap<(usize, usize), usize>,
    pub groupoid: bool,
}

impl FiniteCategory {
    pub fn validate(&self) -> Result<(), CategoryError> {
        let nm = |f: usize| self.morphisms[f].name.clone();
        for m in &self.morphisms {
            if m.src >= self.objects.len() || m.tgt >= self.objects.len() {
                return Err(CategoryError::BadEndpoint(m.name.clone()));
            }
        }
        if self.identity.len() != self.objects.len() {
            return Err(CategoryError::BadIdentity("missing identities".into()));
        }
        for (obj, id) in self.identity.iter().enumerate() {
            let m = &self.morphisms[*id];
            if m.src != obj || m.tgt != obj {
                return Err(CategoryError::BadIdentity(self.objects[obj].clone()));
            }
        }
        for f in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                let composable = self.morphisms[f].tgt == self.morphisms[g].src;
                match self.compose.get(&(f, g)) {
                    None if composable => return Err(CategoryError::BadComposite(nm(f), nm(g))),
                    Some(_) if !composable => {
                        return Err(CategoryError::BadComposite(nm(f), nm(g)))
                    }
                    Some(h) => {
                        let hm = &self.morphisms[*h];
                        if hm.src != self.morphisms[f].src || hm.tgt != self.morphisms[g].tgt {
                            return Err(CategoryError::BadComposite(nm(f), nm(g)));
                        }
                    }
                    None => {}
                }
            }
        }
        for (f, m) in self.morphisms.iter().enumerate() {
            if self.compose[&(self.identity[m.src], f)] != f
                || self.compose[&(f, self.identity[m.tgt])] != f
            {
                return Err(CategoryError::UnitLaw(m.name.clone()));
            }
        }
        for f in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                if self.morphisms[f].tgt != self.morphisms[g].src {
                    continue;
                }
                for h in 0..self.morphisms.len() {
                    if self.morphisms[g].tgt != self.morphisms[h].src {
                        continue;
                    }
                    let left = self.compose[&(self.compose[&(f, g)], h)];
                    let right = self.compose[&(f, self.compose[&(g, h)])];
                    if left != right {
                        return Err(CategoryError::Associativity(nm(f), nm(g), nm(h)));
                    }
                }
            }
        }
        if self.groupoid {
            for (f, m) in self.morphisms.iter().enumerate() {
                let has_inverse = (0..self.morphisms.len()).any(|g| {
                    self.morphisms[g].src == m.tgt
                        && self.morphisms[g].tgt == m.src
                        && self.compose[&(f, g)] == self.identity[m.src]
                        && self.compose[&(g, f)] == self.identity[m.tgt]
                });
                if !has_inverse {
                    return Err(CategoryError::MissingInverse(m.name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn is_composable(&self, f: usize, g: usize) -> bool {
        self.morphisms[f].tgt == self.morphisms[g].src
    }

    /// The one-object one-morphism category.
    pub fn terminal() -> Self {
        FiniteCategory {
            objects: vec!["x".into()],
            morphisms: vec![Morphism {
                name: "1x".into(),
                src: 0,
                tgt: 0,
            }],
            identity: vec![0],
            compose: BTreeMap::from([((0, 0), 0)]),
            groupoid: true,
        }
    }

    /// The poset `[1]`: two objects and one non-identity arrow.
    pub fn arrow() -> Self {
        let mut compose = BTreeMap::new();
        // morphisms: 0 = 1x, 1 = 1y, 2 = a : x -> y
        compose.insert((0, 0), 0);
        compose.insert((1, 1), 1);
        compose.insert((0, 2), 2);
        compose.insert((2, 1), 2);
        FiniteCategory {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![
                Morphism {
                    name: "1x".into(),
                    src: 0,
                    tgt: 0,
                },
                Morphism {
                    name: "1y".into(),
                    src: 1,
                    tgt: 1,
                },
                Morphism {
                    name: "a".into(),
                    src: 0,
                    tgt: 1,
                },
            ],
            identity: vec![0, 1],
            compose,
            groupoid: false,
        }
    }

    /// The groupoid with two objects and an isomorphism between them.
    pub fn walking_iso() -> Self {
        // morphisms: 0 = 1x, 1 = 1y, 2 = f : x -> y, 3 = g : y -> x
        let mut compose = BTreeMap::new();
        compose.insert((0, 0), 0);
        compose.insert((1, 1), 1);
        compose.insert((0, 2), 2);
        compose.insert((2, 1), 2);
        compose.insert((1, 3), 3);
        compose.insert((3, 0), 3);
        compose.insert((2, 3), 0);
        compose.insert((3, 2), 1);
        FiniteCategory {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![
                Morphism {
                    name: "1x".into(),
                    src: 0,
                    tgt: 0,
                },
                Morphism {
                    name: "1y".into(),
                    src: 1,
                    tgt: 1,
                },
                Morphism {
                    name: "f".into(),
                    src: 0,
                    tgt: 1,
                },
                Morphism {
                    name: "g".into(),
                    src: 1,
                    tgt: 0,
                },
            ],
            identity: vec![0, 1],
            compose,
            groupoid: true,
        }
    }

    /// The one-object monoid `{1, e}` with `e·e = e`.
    pub fn idempotent_monoid() -> Self {
        let mut compose = BTreeMap::new();
        compose.insert((0, 0), 0);
        compose.insert((0, 1), 1);
        compose.insert((1, 0), 1);
        compose.insert((1, 1), 1);
        FiniteCategory {
            objects: vec!["x".into()],
            morphisms: vec![
                Morphism {
                    name: "1x".into(),
                    src: 0,
                    tgt: 0,
                },
                Morphism {
                    name: "e".into(),
                    src: 0,
                    tgt: 0,
                },
            ],
            identity: vec![0],
            compose,
            groupoid: false,
        }
    }
}

fn string_token(cat: &FiniteCategory, string: &[usize]) -> String {
    string
        .iter()
        .map(|f| cat.morphisms[*f].name.clone())
        .collect::<Vec<_>>()
        .join("|")
}

fn composable_strings(cat: &FiniteCategory, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out: Vec<Vec<usize>> = (0..cat.morphisms.len()).map(|f| vec![f]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for s in &out {
            let last = *s.last().unwrap();
            for g in 0..cat.morphisms.len() {
                if cat.is_composable(last, g) {
                    let mut t = s.clone();
                    t.push(g);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

/// The nerve of a finite category truncated at `dim`: level `n` is the set
/// of composable strings of `n` morphisms, faces compose or truncate,
/// degeneracies insert identities.
pub fn nerve(cat: &FiniteCategory, dim: usize) -> Result<Arc<SimplicialSet>, CategoryError> {
    cat.validate()?;
    let mut b = SsetBuilder::new(dim);
    for (obj, name) in cat.objects.iter().enumerate() {
        debug_assert_eq!(obj, b.level_len(0));
        b.add_simplex(0, name.clone(), &[], Provenance::Input)?;
    }
    let mut strings_by_level: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=dim {
        let strings = composable_strings(cat, n);
        for s in &strings {
            let faces: Vec<SimplexId> = (0..=n)
                .map(|i| nerve_face(cat, s, i, &b))
                .collect::<Result<_, _>>()?;
            b.add_simplex(n, string_token(cat, s), &faces, Provenance::Input)?;
        }
        strings_by_level.push(strings);
    }
    // degeneracies: insert the identity of the i-th object of the string
    for n in 0..dim {
        if n == 0 {
            for (obj, _) in cat.objects.iter().enumerate() {
                let id = SimplexId::new(0, obj);
                let tok = string_token(cat, &[cat.identity[obj]]);
                let tgt = b
                    .id_by_token(&tok)
                    .expect("identity string present at level 1");
                b.set_degeneracy(id, 0, tgt)?;
            }
            continue;
        }
        let strings = strings_by_level[n].clone();
        for s in &strings {
            let id = b.id_by_token(&string_token(cat, s)).expect("string present");
            for i in 0..=n {
                let obj = object_at(cat, s, i);
                let mut t = s.clone();
                t.insert(i, cat.identity[obj]);
                let tgt = b
                    .id_by_token(&string_token(cat, &t))
                    .expect("degenerate string present");
                b.set_degeneracy(id, i, tgt)?;
            }
        }
    }
    Ok(b.finish()?)
}

/// Object at position `i` along a composable string starting at the source
/// of its first morphism.
fn object_at(cat: &FiniteCategory, s: &[usize], i: usize) -> usize {
    if i == 0 {
        cat.morphisms[s[0]].src
    } else {
        cat.morphisms[s[i - 1]].tgt
    }
}

fn nerve_face(
    cat: &FiniteCategory,
    s: &[usize],
    i: usize,
    b: &SsetBuilder,
) -> Result<SimplexId, CategoryError> {
    let n = s.len();
    let face: Vec<usize> = if i == 0 {
        s[1..].to_vec()
    } else if i == n {
        s[..n - 1].to_vec()
    } else {
        let mut t = s[..i - 1].to_vec();
        t.push(cat.compose[&(s[i - 1], s[i])]);
        t.extend_from_slice(&s[i + 1..]);
        t
    };
    let tok = if face.is_empty() {
        cat.objects[object_at(cat, s, if i == 0 { 1 } else { 0 })].clone()
    } else {
        string_token(cat, &face)
    };
    b.id_by_token(&tok)
        .ok_or_else(|| CategoryError::BadFunctor(format!("missing face string `{tok}`")))
}

/// A functor between finite categories, given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct CatFunctor {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl CatFunctor {
    pub fn validate(
        &self,
        src: &FiniteCategory,
        tgt: &FiniteCategory,
    ) -> Result<(), CategoryError> {
        if self.obj_map.len() != src.objects.len() || self.mor_map.len() != src.morphisms.len() {
            return Err(CategoryError::BadFunctor("arity mismatch".into()));
        }
        for (f, m) in src.morphisms.iter().enumerate() {
            let fm = &tgt.morphisms[self.mor_map[f]];
            if fm.src != self.obj_map[m.src] || fm.tgt != self.obj_map[m.tgt] {
                return Err(CategoryError::BadFunctor(format!(
                    "morphism `{}` image ill-typed",
                    m.name
                )));
            }
        }
        for (obj, id) in src.identity.iter().enumerate() {
            if self.mor_map[*id] != tgt.identity[self.obj_map[obj]] {
                return Err(CategoryError::BadFunctor(format!(
                    "identity of `{}` not preserved",
                    src.objects[obj]
                )));
            }
        }
        for (&(f, g), h) in &src.compose {
            let img = tgt.compose[&(self.mor_map[f], self.mor_map[g])];
            if img != self.mor_map[*h] {
                return Err(CategoryError::BadFunctor(format!(
                    "composition of `{}` and `{}` not preserved",
                    src.morphisms[f].name, src.morphisms[g].name
                )));
            }
        }
        Ok(())
    }

    pub fn compose(&self, then: &CatFunctor) -> CatFunctor {
        CatFunctor {
            obj_map: self.obj_map.iter().map(|o| then.obj_map[*o]).collect(),
            mor_map: self.mor_map.iter().map(|m| then.mor_map[*m]).collect(),
        }
    }

    pub fn identity(cat: &FiniteCategory) -> CatFunctor {
        CatFunctor {
            obj_map: (0..cat.objects.len()).collect(),
            mor_map: (0..cat.morphisms.len()).collect(),
        }
    }
}

/// The simplicial map `nerve(F)` between already-computed nerves.
pub fn nerve_map(
    functor: &CatFunctor,
    src_cat: &FiniteCategory,
    tgt_cat: &FiniteCategory,
    src_nerve: &Arc<SimplicialSet>,
    tgt_nerve: &Arc<SimplicialSet>,
) -> Result<SimplicialMap, CategoryError> {
    functor.validate(src_cat, tgt_cat)?;
    let dim = src_nerve.truncation();
    let mut comp: Vec<Vec<u32>> = Vec::with_capacity(dim + 1);
    comp.push(
        (0..src_cat.objects.len())
            .map(|obj| {
                let tok = &tgt_cat.objects[functor.obj_map[obj]];
                tgt_nerve.by_token(tok).expect("object vertex").index() as u32
            })
            .collect(),
    );
    for n in 1..=dim {
        let strings = composable_strings(src_cat, n);
        let mut level = vec![0u32; src_nerve.level_len(n)];
        for s in &strings {
            let from = src_nerve
                .by_token(&string_token(src_cat, s))
                .expect("string present");
            let image: Vec<usize> = s.iter().map(|f| functor.mor_map[*f]).collect();
            let to = tgt_nerve
                .by_token(&string_token(tgt_cat, &image))
                .expect("image string present");
            level[from.index()] = to.index() as u32;
        }
        comp.push(level);
    }
    Ok(SimplicialMap::new(
        Arc::clone(src_nerve),
        Arc::clone(tgt_nerve),
        comp,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::find_isomorphism;
    use crate::shapes::standard_simplex;

    #[test]
    fn builtin_categories_validate() {
        for c in [
            FiniteCategory::terminal(),
            FiniteCategory::arrow(),
            FiniteCategory::walking_iso(),
            FiniteCategory::idempotent_monoid(),
        ] {
            c.validate().expect("valid category");
        }
    }

    #[test]
    fn nerve_of_terminal_is_the_point() {
        let n = nerve(&FiniteCategory::terminal(), 2).unwrap();
        assert_eq!(n.nondeg_profile(), vec![1, 0, 0]);
        assert!(n.validate().is_empty());
    }

    #[test]
    fn nerve_of_walking_iso_has_two_cells_per_dim() {
        let n = nerve(&FiniteCategory::walking_iso(), 3).unwrap();
        assert_eq!(n.nondeg_profile(), vec![2, 2, 2, 2]);
        assert!(n.validate().is_empty(), "{}", n.validate());
    }

    #[test]
    fn nerve_of_arrow_is_the_standard_edge() {
        for dim in [1, 2, 3] {
            let n = nerve(&FiniteCategory::arrow(), dim).unwrap();
            let d = standard_simplex(1, dim);
            assert!(n.validate().is_empty());
            let iso = find_isomorphism(&n, &d);
            assert!(iso.is_some(), "nerve [1] vs standard edge at truncation {dim}");
        }
    }

    #[test]
    fn nerve_is_functorial_on_the_collapse() {
        // collapse the walking isomorphism onto the terminal category
        let g = FiniteCategory::walking_iso();
        let t = FiniteCategory::terminal();
        let collapse = CatFunctor {
            obj_map: vec![0, 0],
            mor_map: vec![0, 0, 0, 0],
        };
        collapse.validate(&g, &t).unwrap();
        let ng = nerve(&g, 2).unwrap();
        let nt = nerve(&t, 2).unwrap();
        let f = nerve_map(&collapse, &g, &t, &ng, &nt).unwrap();
        assert!(f.validate().is_empty());
        let idg = nerve_map(&CatFunctor::identity(&g), &g, &g, &ng, &ng).unwrap();
        assert!(idg.same_as(&SimplicialMap::identity(&ng)));
        // composite functor vs composite of nerve maps
        let composite = collapse.compose(&CatFunctor::identity(&t));
        let via_cat = nerve_map(&composite, &g, &t, &ng, &nt).unwrap();
        let via_maps = f
            .then(&nerve_map(&CatFunctor::identity(&t), &t, &t, &nt, &nt).unwrap())
            .unwrap();
        assert!(via_cat.same_as(&via_maps));
    }
}
