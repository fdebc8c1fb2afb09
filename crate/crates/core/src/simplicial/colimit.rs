use std::collections::HashMap;
use std::sync::Arc;

use super::{same_space, Op, SMap, SSet, Simplex};
use crate::error::{Error, Result};

/// Colimit of a finite graph of simplicial sets.
#[derive(Clone, Debug)]
pub struct SColimit {
    pub apex: Arc<SSet>,
    pub legs: Vec<SMap>,
    /// For each non-degenerate apex simplex: (input index, non-degenerate simplex id there).
    pub reps: Vec<(usize, u32)>,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.0[root as usize] != root {
            root = self.0[root as usize];
        }
        while self.0[x as usize] != root {
            let next = self.0[x as usize];
            self.0[x as usize] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // the smaller index stays the representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

/// Degreewise colimit of the diagram with the given objects and arrows
/// `(source index, target index, map)`.
pub fn colimit(objects: &[Arc<SSet>], arrows: &[(usize, usize, &SMap)]) -> Result<SColimit> {
    for (a, &(s, t, f)) in arrows.iter().enumerate() {
        if s >= objects.len() || t >= objects.len() {
            return Err(Error::OutOfRange(format!("arrow {a} refers to a missing object")));
        }
        if !same_space(&f.dom, &objects[s]) || !same_space(&f.cod, &objects[t]) {
            return Err(Error::Mismatch(format!("arrow {a} does not match its endpoints")));
        }
    }
    let top = objects.iter().filter_map(|k| k.max_dim()).max();
    let Some(top) = top else {
        let apex = Arc::new(SSet::empty());
        let legs = objects.iter().map(|k| SMap::new_unchecked(k.clone(), apex.clone(), vec![])).collect();
        return Ok(SColimit { apex, legs, reps: vec![] });
    };

    // enumerate every simplex of every input in degrees ≤ top
    let mut all: Vec<(usize, Simplex)> = Vec::new();
    let mut index: HashMap<(usize, Simplex), u32> = HashMap::new();
    let mut degree_start = Vec::with_capacity(top + 2);
    for q in 0..=top {
        degree_start.push(all.len());
        for (k, obj) in objects.iter().enumerate() {
            for x in obj.simplices_in_degree(q) {
                index.insert((k, x), all.len() as u32);
                all.push((k, x));
            }
        }
    }
    degree_start.push(all.len());

    let mut uf = UnionFind((0..all.len() as u32).collect());
    for &(s, t, f) in arrows {
        for q in 0..=top {
            for x in objects[s].simplices_in_degree(q) {
                let y = f.map(x);
                uf.union(index[&(s, x)], index[&(t, y)]);
            }
        }
    }

    // classify classes degree by degree, building EZ forms
    let mut ez: HashMap<u32, Simplex> = HashMap::new();
    let mut dims: Vec<u8> = Vec::new();
    let mut faces: Vec<Vec<Simplex>> = Vec::new();
    let mut reps: Vec<(usize, u32)> = Vec::new();
    for q in 0..=top {
        for g in degree_start[q]..degree_start[q + 1] {
            let g = g as u32;
            if uf.find(g) != g {
                continue;
            }
            let (k, x) = all[g as usize];
            let obj = &objects[k];
            let mut degenerate = None;
            for j in 0..q {
                let y = obj.face(x, j);
                let sy = y.s(j);
                if uf.find(index[&(k, sy)]) == g {
                    degenerate = Some((j, y));
                    break;
                }
            }
            let form = match degenerate {
                Some((j, y)) => {
                    let lower = ez[&uf.find(index[&(k, y)])];
                    lower.degen(Op::codegeneracy(q - 1, j))
                }
                None => {
                    let id = dims.len() as u32;
                    dims.push(q as u8);
                    let fs = (0..if q == 0 { 0 } else { q + 1 })
                        .map(|i| ez[&uf.find(index[&(k, obj.face(x, i))])])
                        .collect();
                    faces.push(fs);
                    reps.push((k, x.base));
                    Simplex::nondeg(id, q)
                }
            };
            ez.insert(g, form);
        }
    }
    let apex = Arc::new(SSet::from_parts_unchecked(dims, faces));
    let legs = objects
        .iter()
        .enumerate()
        .map(|(k, obj)| {
            let image = (0..obj.len() as u32)
                .map(|b| ez[&uf.find(index[&(k, obj.top(b))])])
                .collect();
            SMap::new_unchecked(obj.clone(), apex.clone(), image)
        })
        .collect();
    Ok(SColimit { apex, legs, reps })
}

impl SColimit {
    /// The map out of the apex determined by a cocone (one map per input).
    pub fn induced(&self, cocone: &[SMap]) -> Result<SMap> {
        if cocone.len() != self.legs.len() {
            return Err(Error::Mismatch("cocone has the wrong number of legs".into()));
        }
        let Some(first) = cocone.first() else {
            return Err(Error::Mismatch("cannot induce a map from an empty cocone".into()));
        };
        let cod = first.cod.clone();
        let image = self.reps.iter().map(|&(k, b)| cocone[k].image_of(b)).collect();
        Ok(SMap::new_unchecked(self.apex.clone(), cod, image))
    }

    /// Induced map with an explicit codomain (needed when there are no inputs).
    pub fn induced_to(&self, cod: Arc<SSet>, cocone: &[SMap]) -> SMap {
        let image = self.reps.iter().map(|&(k, b)| cocone[k].image_of(b)).collect();
        SMap::new_unchecked(self.apex.clone(), cod, image)
    }
}
