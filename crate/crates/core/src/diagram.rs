//! Bounded diagrams over simplex categories and the constructions on them.
//!
//! A diagram is stored in strongly bounded normal form: one value per
//! non-degenerate simplex and one morphism F(d_iσ) → F(σ) per face, where
//! F(d_iσ) means the value at the base of the (possibly degenerate) face.
//! Degeneracies act by identities.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{FinCat, Functor, Nerve};
use crate::error::{Error, Result};
use crate::simplicial::{colimit as scolimit, pullback, standard, yoneda, Op, PairSpace, SMap, SSet, Simplex};
use crate::values::{Colim, ValueCategory};

/// Diagram over the simplex category of `base`, bounded by construction.
#[derive(Clone, Debug)]
pub struct BoundedDiagram<V: ValueCategory> {
    pub base: Arc<SSet>,
    pub values: Vec<V::Obj>,
    pub faces: Vec<Vec<V::Mor>>,
}

/// Componentwise morphism between diagrams over a common base.
#[derive(Clone, Debug)]
pub struct DiagMap<V: ValueCategory> {
    pub comps: Vec<V::Mor>,
}

/// Where two face routes into a simplex disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incoherence {
    pub simplex: u32,
    pub i: usize,
    pub j: usize,
}

/// Whether positions i and i±1 of the surjection collide, so d_i keeps the base.
pub(crate) fn collapsed_at(op: Op, i: usize) -> bool {
    let m = op.src_dim();
    (i > 0 && op.collapses(i - 1)) || (i < m && op.collapses(i))
}

/// F(d_i x) → F(x) for an arbitrary simplex x, given the non-degenerate face table.
fn general_face<M>(
    x: Simplex,
    i: usize,
    identity: impl FnOnce(u32) -> M,
    face: impl FnOnce(u32, usize) -> M,
) -> M {
    if collapsed_at(x.op, i) {
        identity(x.base)
    } else {
        face(x.base, x.op.values()[i] as usize)
    }
}

impl<V: ValueCategory> BoundedDiagram<V> {
    pub fn new(vc: &V, base: Arc<SSet>, values: Vec<V::Obj>, faces: Vec<Vec<V::Mor>>) -> Result<Self> {
        let d = BoundedDiagram { base, values, faces };
        d.check_shape(vc)?;
        check_bounded(vc, &d)?;
        Ok(d)
    }

    pub fn constant(vc: &V, base: Arc<SSet>, x: V::Obj) -> Self {
        let id = vc.identity(&x);
        let faces = (0..base.len() as u32)
            .map(|s| {
                let n = base.dim(s);
                if n == 0 {
                    vec![]
                } else {
                    vec![id.clone(); n + 1]
                }
            })
            .collect();
        BoundedDiagram { values: vec![x; base.len()], base, faces }
    }

    /// The diagram with the initial object everywhere.
    pub fn initial(vc: &V, base: Arc<SSet>) -> Self {
        Self::constant(vc, base, vc.initial())
    }

    fn check_shape(&self, vc: &V) -> Result<()> {
        let k = &self.base;
        if self.values.len() != k.len() || self.faces.len() != k.len() {
            return Err(Error::Invalid("diagram needs one value and one face list per simplex".into()));
        }
        for s in 0..k.len() as u32 {
            let n = k.dim(s);
            let want = if n == 0 { 0 } else { n + 1 };
            if self.faces[s as usize].len() != want {
                return Err(Error::Invalid(format!("simplex {s} needs {want} face morphisms")));
            }
            for i in 0..want {
                let m = &self.faces[s as usize][i];
                let b = k.face_nd(s, i).base;
                if !vc.same_object(&vc.src(m), &self.values[b as usize]) || !vc.same_object(&vc.tgt(m), &self.values[s as usize]) {
                    return Err(Error::Mismatch(format!("face morphism ({s}, {i}) has the wrong endpoints")));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, x: Simplex) -> &V::Obj {
        &self.values[x.base as usize]
    }

    /// F(d_i x) → F(x) for any simplex x of positive dimension.
    pub fn face_general(&self, vc: &V, x: Simplex, i: usize) -> V::Mor {
        general_face(x, i, |b| vc.identity(&self.values[b as usize]), |b, k| self.faces[b as usize][k].clone())
    }

    /// First failure of the double-face coherence condition.
    pub fn incoherence(&self, vc: &V) -> Option<Incoherence> {
        let k = &self.base;
        for s in 0..k.len() as u32 {
            let n = k.dim(s);
            if n < 2 {
                continue;
            }
            for j in 1..=n {
                for i in 0..j {
                    let a = vc.compose(&self.faces[s as usize][j], &self.face_general(vc, k.face_nd(s, j), i));
                    let b = vc.compose(&self.faces[s as usize][i], &self.face_general(vc, k.face_nd(s, i), j - 1));
                    if !vc.equal_morphisms(&a, &b) {
                        return Some(Incoherence { simplex: s, i, j });
                    }
                }
            }
        }
        None
    }
}

pub fn check_bounded<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>) -> Result<()> {
    match f.incoherence(vc) {
        None => Ok(()),
        Some(w) => Err(Error::NotBounded(format!(
            "routes through faces {} and {} of simplex {} disagree",
            w.i, w.j, w.simplex
        ))),
    }
}

impl<V: ValueCategory> DiagMap<V> {
    pub fn identity(vc: &V, f: &BoundedDiagram<V>) -> Self {
        DiagMap { comps: f.values.iter().map(|x| vc.identity(x)).collect() }
    }

    pub fn after(&self, vc: &V, g: &DiagMap<V>) -> Self {
        DiagMap { comps: self.comps.iter().zip(&g.comps).map(|(a, b)| vc.compose(a, b)).collect() }
    }

    /// Whether every naturality square commutes.
    pub fn is_natural(&self, vc: &V, f: &BoundedDiagram<V>, g: &BoundedDiagram<V>) -> bool {
        let k = &f.base;
        (0..k.len() as u32).all(|s| {
            let n = k.dim(s);
            (0..if n == 0 { 0 } else { n + 1 }).all(|i| {
                let b = k.face_nd(s, i).base as usize;
                let lhs = vc.compose(&self.comps[s as usize], &f.faces[s as usize][i]);
                let rhs = vc.compose(&g.faces[s as usize][i], &self.comps[b]);
                vc.equal_morphisms(&lhs, &rhs)
            })
        })
    }

    pub fn is_objectwise_iso(&self, vc: &V) -> bool {
        self.comps.iter().all(|m| vc.is_iso(m))
    }

    pub fn is_objectwise_we(&self, vc: &V) -> bool {
        self.comps.iter().all(|m| vc.we_certificate(m).verdict)
    }
}

/// The colimit over the simplex category, presented by the non-degenerate
/// simplices and one relation per face.
pub fn colim_bounded<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>) -> Result<Colim<V>> {
    let k = &f.base;
    let mut arrows = Vec::new();
    for s in 0..k.len() as u32 {
        for (i, m) in f.faces[s as usize].iter().enumerate() {
            arrows.push((k.face_nd(s, i).base as usize, s as usize, m));
        }
    }
    vc.colimit(&f.values, &arrows)
}

/// The map of colimits induced by a diagram map.
pub fn colim_map<V: ValueCategory>(vc: &V, psi: &DiagMap<V>, cf: &Colim<V>, cg: &Colim<V>) -> V::Mor {
    let cocone: Vec<V::Mor> = psi.comps.iter().zip(&cg.legs).map(|(m, l)| vc.compose(l, m)).collect();
    vc.induced(cf, &cg.apex, &cocone)
}

/// The map colim_X h*G → colim_Y G for h: X → Y, given both colimits.
pub fn colim_along<V: ValueCategory>(vc: &V, h: &SMap, src: &Colim<V>, tgt: &Colim<V>) -> V::Mor {
    let cocone: Vec<V::Mor> = h.image().iter().map(|y| tgt.legs[y.base as usize].clone()).collect();
    vc.induced(src, &tgt.apex, &cocone)
}

/// Latching object of a simplex: the colimit over ∂Δ[n] of σ*F, with its map to F(σ).
#[derive(Clone, Debug)]
pub struct Latching<V: ValueCategory> {
    /// Proper non-empty vertex subsets of σ, as bitmasks, and the simplices they span.
    pub faces: Vec<(u64, Simplex)>,
    pub colim: Colim<V>,
    pub map: V::Mor,
    pub index: HashMap<u64, usize>,
}

impl<V: ValueCategory> Latching<V> {
    /// The leg at the codimension-one face opposite vertex i.
    pub fn leg_opposite(&self, n: usize, i: usize) -> &V::Mor {
        let full = (1u64 << (n + 1)) - 1;
        &self.colim.legs[self.index[&(full & !(1 << i))]]
    }
}

fn mask_verts(mask: u64) -> Vec<u8> {
    (0..64u8).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Latching data computed from value and face accessors, so that partially
/// built diagrams can be used.  Without `with_map` σ itself is never
/// consulted and `map` is a placeholder identity.
pub(crate) fn latching_with<V: ValueCategory>(
    vc: &V,
    k: &SSet,
    sigma: u32,
    value: &dyn Fn(u32) -> V::Obj,
    face: &dyn Fn(Simplex, usize) -> V::Mor,
    with_map: bool,
) -> Result<Latching<V>> {
    let n = k.dim(sigma);
    if n == 0 {
        let colim = vc.colimit(&[], &[])?;
        let map = if with_map { vc.induced(&colim, &value(sigma), &[]) } else { vc.identity(&colim.apex) };
        return Ok(Latching { faces: vec![], colim, map, index: HashMap::new() });
    }
    let full = (1u64 << (n + 1)) - 1;
    let mut masks: Vec<u64> = (1..full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let faces: Vec<(u64, Simplex)> = masks.iter().map(|&m| (m, k.restrict(sigma, &mask_verts(m)))).collect();
    let objects: Vec<V::Obj> = faces.iter().map(|&(_, x)| value(x.base)).collect();
    let mut arrows_owned = Vec::new();
    for (t, &(m, x)) in faces.iter().enumerate() {
        if m.count_ones() < 2 {
            continue;
        }
        for (pos, v) in mask_verts(m).into_iter().enumerate() {
            let s = index[&(m & !(1 << v))];
            arrows_owned.push((s, t, face(x, pos)));
        }
    }
    let arrows: Vec<(usize, usize, &V::Mor)> = arrows_owned.iter().map(|(s, t, m)| (*s, *t, m)).collect();
    let colim = vc.colimit(&objects, &arrows)?;
    if !with_map {
        let map = vc.identity(&colim.apex);
        return Ok(Latching { faces, colim, map, index });
    }
    let top = value(sigma);
    // morphisms F(σ|S) → F(σ), built from larger subsets down
    let mut along: HashMap<u64, V::Mor> = HashMap::new();
    let top_simplex = k.top(sigma);
    for &m in masks.iter().rev() {
        let v = (0..=n as u8).find(|&v| m >> v & 1 == 0).expect("proper subset");
        let bigger = m | 1 << v;
        let pos = mask_verts(bigger).iter().position(|&w| w == v).unwrap();
        let mor = if bigger == full {
            face(top_simplex, pos)
        } else {
            let x = faces[index[&bigger]].1;
            vc.compose(&along[&bigger], &face(x, pos))
        };
        along.insert(m, mor);
    }
    let cocone: Vec<V::Mor> = masks.iter().map(|m| along[m].clone()).collect();
    let map = vc.induced(&colim, &top, &cocone);
    Ok(Latching { faces, colim, map, index })
}

pub fn latching<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>, sigma: u32) -> Result<Latching<V>> {
    latching_with(vc, &f.base, sigma, &|b| f.values[b as usize].clone(), &|x, i| f.face_general(vc, x, i), true)
}

/// The map of latching objects induced by a diagram map.
pub fn latching_map<V: ValueCategory>(vc: &V, psi: &dyn Fn(u32) -> V::Mor, lf: &Latching<V>, lg: &Latching<V>) -> V::Mor {
    let cocone: Vec<V::Mor> = lf
        .faces
        .iter()
        .enumerate()
        .map(|(t, &(_, x))| vc.compose(&lg.colim.legs[t], &psi(x.base)))
        .collect();
    vc.induced(&lf.colim, &lg.colim.apex, &cocone)
}

pub fn is_cofibrant<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>) -> Result<bool> {
    for s in 0..f.base.len() as u32 {
        if !vc.is_cofibration(&latching(vc, f, s)?.map) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cofibrancy tested only at simplices with non-degenerate image.
pub fn is_relative_cofibrant<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>, g: &SMap) -> Result<bool> {
    for s in 0..f.base.len() as u32 {
        if g.image_of(s).is_nondegenerate() && !vc.is_cofibration(&latching(vc, f, s)?.map) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The relative latching map M_Ψ(σ) = F(σ) ⊔_{L_σF} L_σG → G(σ).
pub fn relative_latching<V: ValueCategory>(vc: &V, psi: &DiagMap<V>, f: &BoundedDiagram<V>, g: &BoundedDiagram<V>, s: u32) -> Result<V::Mor> {
    let lf = latching(vc, f, s)?;
    let lg = latching(vc, g, s)?;
    let lpsi = latching_map(vc, &|b| psi.comps[b as usize].clone(), &lf, &lg);
    let m = vc.pushout(&lf.map, &lpsi)?;
    let to_g = [vc.compose(&lg.map, &lpsi), psi.comps[s as usize].clone(), lg.map.clone()];
    Ok(vc.induced(&m, &g.values[s as usize], &to_g))
}

pub fn is_cofibration<V: ValueCategory>(vc: &V, psi: &DiagMap<V>, f: &BoundedDiagram<V>, g: &BoundedDiagram<V>) -> Result<bool> {
    for s in 0..f.base.len() as u32 {
        if !vc.is_cofibration(&relative_latching(vc, psi, f, g, s)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Colimit by cell induction: one pushout per non-degenerate simplex in
/// order of dimension, gluing F(σ) along its latching object.
pub fn colim_cells<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>) -> Result<(V::Obj, Vec<V::Mor>)> {
    let k = &f.base;
    let order: Vec<u32> = (0..=k.max_dim().unwrap_or(0)).flat_map(|d| k.of_dim(d).to_vec()).collect();
    let mut apex = vc.initial();
    // per processed simplex: (stage index, leg into that stage's apex)
    let mut local: Vec<Option<(usize, V::Mor)>> = vec![None; k.len()];
    let mut steps: Vec<V::Mor> = Vec::new();
    for (stage, &s) in order.iter().enumerate() {
        let lat = latching(vc, f, s)?;
        let cocone: Vec<V::Mor> = lat
            .faces
            .iter()
            .map(|&(_, x)| {
                let (st, leg) = local[x.base as usize].clone().expect("faces come first");
                let mut m = leg;
                for step in &steps[st..stage] {
                    m = vc.compose(step, &m);
                }
                m
            })
            .collect();
        let attach = vc.induced(&lat.colim, &apex, &cocone);
        let po = vc.pushout(&attach, &lat.map)?;
        steps.push(po.legs[1].clone());
        local[s as usize] = Some((stage + 1, po.legs[2].clone()));
        apex = po.apex;
    }
    let mut suffix: Vec<Option<V::Mor>> = vec![None; steps.len() + 1];
    suffix[steps.len()] = Some(vc.identity(&apex));
    for st in (0..steps.len()).rev() {
        suffix[st] = Some(vc.compose(suffix[st + 1].as_ref().unwrap(), &steps[st]));
    }
    let legs = local
        .into_iter()
        .map(|e| {
            let (st, leg) = e.expect("every simplex processed");
            vc.compose(suffix[st].as_ref().unwrap(), &leg)
        })
        .collect();
    Ok((apex, legs))
}

/// Whether the presentation colimit and the cell-induction colimit agree.
pub fn cross_check_colim<V: ValueCategory>(vc: &V, f: &BoundedDiagram<V>, c: &Colim<V>) -> Result<bool> {
    let (apex, legs) = colim_cells(vc, f)?;
    let cmp = vc.induced(c, &apex, &legs);
    Ok(vc.is_iso(&cmp))
}

/// f*F along f: L → K.
pub fn pullback_diagram<V: ValueCategory>(vc: &V, f: &SMap, d: &BoundedDiagram<V>) -> BoundedDiagram<V> {
    let l = &f.dom;
    let values = (0..l.len() as u32).map(|x| d.values[f.image_of(x).base as usize].clone()).collect();
    let faces = (0..l.len() as u32)
        .map(|x| {
            let n = l.dim(x);
            let y = f.image_of(x);
            (0..if n == 0 { 0 } else { n + 1 }).map(|i| d.face_general(vc, y, i)).collect()
        })
        .collect();
    BoundedDiagram { base: l.clone(), values, faces }
}

pub fn pullback_map<V: ValueCategory>(f: &SMap, psi: &DiagMap<V>) -> DiagMap<V> {
    DiagMap { comps: f.image().iter().map(|y| psi.comps[y.base as usize].clone()).collect() }
}

/// Functor from a finite category into the value category.
#[derive(Clone, Debug)]
pub struct IndexedDiagram<V: ValueCategory> {
    pub cat: Arc<FinCat>,
    pub objs: Vec<V::Obj>,
    /// One morphism per morphism of `cat`, identities included.
    pub mors: Vec<V::Mor>,
}

/// Natural transformation between indexed diagrams.
#[derive(Clone, Debug)]
pub struct IndexedMap<V: ValueCategory> {
    pub comps: Vec<V::Mor>,
}

impl<V: ValueCategory> IndexedDiagram<V> {
    pub fn new(vc: &V, cat: Arc<FinCat>, objs: Vec<V::Obj>, mors: Vec<V::Mor>) -> Result<Self> {
        if objs.len() != cat.num_objects() || mors.len() != cat.num_morphisms() {
            return Err(Error::Invalid("indexed diagram has the wrong size".into()));
        }
        for (m, f) in mors.iter().enumerate() {
            let m = m as u32;
            if !vc.same_object(&vc.src(f), &objs[cat.src(m) as usize]) || !vc.same_object(&vc.tgt(f), &objs[cat.tgt(m) as usize]) {
                return Err(Error::Mismatch(format!("morphism {} has the wrong endpoints", cat.morphism_name(m))));
            }
            if cat.is_identity(m) && !vc.equal_morphisms(f, &vc.identity(&objs[cat.src(m) as usize])) {
                return Err(Error::NotFunctorial(format!("{} is not sent to an identity", cat.morphism_name(m))));
            }
        }
        for g in 0..cat.num_morphisms() as u32 {
            for f in 0..cat.num_morphisms() as u32 {
                if cat.tgt(f) == cat.src(g) && !cat.is_identity(f) && !cat.is_identity(g) {
                    let lhs = &mors[cat.compose(g, f) as usize];
                    let rhs = vc.compose(&mors[g as usize], &mors[f as usize]);
                    if !vc.equal_morphisms(lhs, &rhs) {
                        return Err(Error::NotFunctorial(format!(
                            "composite of {} after {} is not preserved",
                            cat.morphism_name(g),
                            cat.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(IndexedDiagram { cat, objs, mors })
    }

    pub fn constant(vc: &V, cat: Arc<FinCat>, x: V::Obj) -> Self {
        let id = vc.identity(&x);
        IndexedDiagram { objs: vec![x; cat.num_objects()], mors: vec![id; cat.num_morphisms()], cat }
    }

    /// f*F for a functor f into the indexing category.
    pub fn pullback(&self, f: &Functor) -> Self {
        IndexedDiagram {
            cat: f.src.clone(),
            objs: f.obj.iter().map(|&x| self.objs[x as usize].clone()).collect(),
            mors: f.mor.iter().map(|&m| self.mors[m as usize].clone()).collect(),
        }
    }
}

impl<V: ValueCategory> IndexedMap<V> {
    pub fn is_natural(&self, vc: &V, f: &IndexedDiagram<V>, g: &IndexedDiagram<V>) -> bool {
        (0..f.cat.num_morphisms() as u32).all(|m| {
            let (a, b) = (f.cat.src(m) as usize, f.cat.tgt(m) as usize);
            let lhs = vc.compose(&self.comps[b], &f.mors[m as usize]);
            let rhs = vc.compose(&g.mors[m as usize], &self.comps[a]);
            vc.equal_morphisms(&lhs, &rhs)
        })
    }
}

/// Colimit of an indexed diagram: objects with one relation per non-identity morphism.
pub fn cat_colim<V: ValueCategory>(vc: &V, f: &IndexedDiagram<V>) -> Result<Colim<V>> {
    let arrows: Vec<(usize, usize, &V::Mor)> = f
        .cat
        .non_identities()
        .into_iter()
        .map(|m| (f.cat.src(m) as usize, f.cat.tgt(m) as usize, &f.mors[m as usize]))
        .collect();
    vc.colimit(&f.objs, &arrows)
}

/// ε*F over the nerve: a chain (i_q → … → i_0) gets F(i_0); d_0 acts by F(α_1).
pub fn pullback_epsilon<V: ValueCategory>(vc: &V, nerve: &Nerve, f: &IndexedDiagram<V>) -> BoundedDiagram<V> {
    let k = &nerve.space;
    let values: Vec<V::Obj> = (0..k.len() as u32).map(|s| f.objs[nerve.last_object(s) as usize].clone()).collect();
    let faces = (0..k.len())
        .map(|s| {
            let q = nerve.mors[s].len();
            if q == 0 {
                return vec![];
            }
            let mut out = vec![f.mors[nerve.mors[s][0] as usize].clone()];
            out.extend(std::iter::repeat(vc.identity(&values[s])).take(q));
            out
        })
        .collect();
    BoundedDiagram { base: k.clone(), values, faces }
}

pub fn epsilon_map<V: ValueCategory>(nerve: &Nerve, psi: &IndexedMap<V>) -> DiagMap<V> {
    DiagMap { comps: (0..nerve.space.len() as u32).map(|s| psi.comps[nerve.last_object(s) as usize].clone()).collect() }
}

/// df(σ): the pullback of f along σ: Δ[n] → K.
pub fn fiber_space(f: &SMap, sigma: u32) -> Result<PairSpace> {
    pullback(f, &yoneda(&f.cod, f.cod.top(sigma)))
}

/// F(σ|verts) → F(σ) for a non-degenerate σ.
pub fn along<V: ValueCategory>(vc: &V, d: &BoundedDiagram<V>, sigma: u32, verts: &[u8]) -> V::Mor {
    let k = &d.base;
    let n = k.dim(sigma);
    let mut x = k.top(sigma);
    let mut current: Vec<u8> = (0..=n as u8).collect();
    let mut acc = vc.identity(&d.values[sigma as usize]);
    while current.len() > verts.len() {
        let pos = current.iter().position(|v| !verts.contains(v)).expect("verts is a subset");
        acc = vc.compose(&acc, &d.face_general(vc, x, pos));
        x = k.face(x, pos);
        current.remove(pos);
    }
    acc
}

/// Left Kan extension along f with the data used to build it.
#[derive(Clone, Debug)]
pub struct KanExtension<V: ValueCategory> {
    pub diagram: BoundedDiagram<V>,
    pub fibers: Vec<PairSpace>,
    pub colims: Vec<Colim<V>>,
}

/// The map Δ[n-1] → Δ[n] skipping vertex i.
fn coface(n: usize, i: usize) -> SMap {
    let (d, idx) = standard(n);
    let verts: Vec<u8> = (0..=n as u8).filter(|&v| v as usize != i).collect();
    yoneda(&Arc::new(d), idx.simplex(&verts).expect("face of the standard simplex"))
}

/// The map Δ[n] → Δ[m] given by a surjection.
fn codegeneracy_map(op: Op) -> SMap {
    let (d, _) = standard(op.tgt_dim());
    let top = d.len() as u32 - 1;
    yoneda(&Arc::new(d), Simplex { base: top, op })
}

/// Reindex a pair space along a map of second factors.
fn pair_map(src: &PairSpace, tgt: &PairSpace, h: &SMap) -> Result<SMap> {
    let image = (0..src.space.len() as u32)
        .map(|p| {
            let (a, t) = src.components(p);
            tgt.pair(a, h.map(t)).ok_or_else(|| Error::Invalid("fiber map leaves the target fiber".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SMap::new_unchecked(src.space.clone(), tgt.space.clone(), image))
}

pub fn kan_extension<V: ValueCategory>(vc: &V, f: &SMap, d: &BoundedDiagram<V>) -> Result<KanExtension<V>> {
    let k = &f.cod;
    let mut fibers = Vec::with_capacity(k.len());
    let mut colims = Vec::with_capacity(k.len());
    for s in 0..k.len() as u32 {
        let p = fiber_space(f, s)?;
        let pulled = pullback_diagram(vc, &p.pr1, d);
        colims.push(colim_bounded(vc, &pulled)?);
        fibers.push(p);
    }
    let mut faces = Vec::with_capacity(k.len());
    for s in 0..k.len() as u32 {
        let n = k.dim(s);
        if n == 0 {
            faces.push(vec![]);
            continue;
        }
        let mut fs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let y = k.face_nd(s, i);
            let delta = coface(n, i);
            let m = if y.is_nondegenerate() {
                let h = pair_map(&fibers[y.base as usize], &fibers[s as usize], &delta)?;
                colim_along(vc, &h, &colims[y.base as usize], &colims[s as usize])
            } else {
                let pi = pullback(f, &yoneda(k, y))?;
                let ci = colim_bounded(vc, &pullback_diagram(vc, &pi.pr1, d))?;
                let to_sigma = pair_map(&pi, &fibers[s as usize], &delta)?;
                let to_base = pair_map(&pi, &fibers[y.base as usize], &codegeneracy_map(y.op))?;
                let c1 = colim_along(vc, &to_sigma, &ci, &colims[s as usize]);
                let c2 = colim_along(vc, &to_base, &ci, &colims[y.base as usize]);
                let inv = vc
                    .inverse(&c2)
                    .ok_or_else(|| Error::Invalid(format!("fiber comparison at face {i} of simplex {s} is not an isomorphism")))?;
                vc.compose(&c1, &inv)
            };
            fs.push(m);
        }
        faces.push(fs);
    }
    let values = colims.iter().map(|c| c.apex.clone()).collect();
    let diagram = BoundedDiagram { base: k.clone(), values, faces };
    Ok(KanExtension { diagram, fibers, colims })
}

impl<V: ValueCategory> KanExtension<V> {
    /// The simplex (a, op) of df(σ) over a non-degenerate a with f(a) = op·σ.
    fn fiber_point(&self, f: &SMap, a: u32) -> Simplex {
        let y = f.image_of(a);
        let p = &self.fibers[y.base as usize];
        let top = p.pr2.cod.len() as u32 - 1;
        p.pair(f.dom.top(a), Simplex { base: top, op: y.op }).expect("a lies over its own image")
    }

    /// Unit F → f*f^k F.
    pub fn unit(&self, f: &SMap) -> DiagMap<V> {
        let comps = (0..f.dom.len() as u32)
            .map(|a| {
                let p = self.fiber_point(f, a);
                debug_assert!(p.is_nondegenerate());
                self.colims[f.image_of(a).base as usize].legs[p.base as usize].clone()
            })
            .collect();
        DiagMap { comps }
    }

    /// Counit f^k f*G → G, where `self` is the extension of f*G.
    pub fn counit(&self, vc: &V, f: &SMap, g: &BoundedDiagram<V>) -> DiagMap<V> {
        let k = &f.cod;
        let comps = (0..k.len() as u32)
            .map(|s| {
                let p = &self.fibers[s as usize];
                let (_, idx) = standard(k.dim(s));
                let cocone: Vec<V::Mor> = (0..p.space.len() as u32)
                    .map(|q| {
                        let (_, t) = p.components(q);
                        let mut verts: Vec<u8> = t.op.values().iter().map(|&v| idx.verts(t.base)[v as usize]).collect();
                        verts.dedup();
                        along(vc, g, s, &verts)
                    })
                    .collect();
                vc.induced(&self.colims[s as usize], &g.values[s as usize], &cocone)
            })
            .collect();
        DiagMap { comps }
    }

    /// f^k ψ: f^k F → f^k G for ψ: F → G, given both extensions.
    pub fn map_to(&self, vc: &V, psi: &DiagMap<V>, other: &KanExtension<V>) -> DiagMap<V> {
        let comps = self
            .fibers
            .iter()
            .enumerate()
            .map(|(s, p)| colim_map(vc, &pullback_map(&p.pr1, psi), &self.colims[s], &other.colims[s]))
            .collect();
        DiagMap { comps }
    }

    /// The canonical map colim_L F → colim_K f^k F.
    pub fn comparison(&self, vc: &V, f: &SMap, colim_l: &Colim<V>, colim_k: &Colim<V>) -> V::Mor {
        let unit = self.unit(f);
        let cocone: Vec<V::Mor> = (0..f.dom.len() as u32)
            .map(|a| vc.compose(&colim_k.legs[f.image_of(a).base as usize], &unit.comps[a as usize]))
            .collect();
        vc.induced(colim_l, &colim_k.apex, &cocone)
    }
}

/// F is f-bounded when F(d_j), F(d_{j+1}) are isomorphisms wherever f(σ) = s_j ξ.
pub fn is_f_bounded<V: ValueCategory>(vc: &V, d: &BoundedDiagram<V>, f: &SMap) -> bool {
    let l = &d.base;
    (0..l.len() as u32).all(|s| {
        let op = f.image_of(s).op;
        (0..l.dim(s)).filter(|&j| op.collapses(j)).all(|j| vc.is_iso(&d.faces[s as usize][j]) && vc.is_iso(&d.faces[s as usize][j + 1]))
    })
}

/// Factorization of a map into an epimorphism followed by a reduced map.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub red: Arc<SSet>,
    pub f_red: SMap,
    pub residual: SMap,
    /// (collapsed simplex of the intermediate space, degeneracy index).
    pub log: Vec<(u32, usize)>,
}

pub fn reduce_map(f: &SMap) -> Result<ReductionResult> {
    let k = f.cod.clone();
    let mut g = SMap::identity(f.dom.clone());
    let mut h = f.clone();
    let mut log = Vec::new();
    loop {
        let r = h.dom.clone();
        let found = (0..r.len() as u32).find(|&s| !h.image_of(s).is_nondegenerate());
        let Some(s) = found else { break };
        let y = h.image_of(s);
        let d = y.dim();
        let j = (0..d).find(|&j| y.op.collapses(j)).expect("degenerate image");
        let lower = k.face(y, j);
        let sigma = yoneda(&r, r.top(s));
        let (dl, _) = standard(d - 1);
        let dl = Arc::new(dl);
        let sj = yoneda(&dl, Simplex { base: dl.len() as u32 - 1, op: Op::codegeneracy(d - 1, j) });
        let sj = SMap::new(sigma.dom.clone(), dl.clone(), sj.image().to_vec())?;
        let po = scolimit(&[sigma.dom.clone(), r.clone(), dl.clone()], &[(0, 1, &sigma), (0, 2, &sj)])?;
        if po.apex.len() >= r.len() {
            return Err(Error::Invalid("collapse did not decrease the number of simplices".into()));
        }
        let cocone = [h.after(&sigma), h.clone(), yoneda(&k, lower).with_dom(dl.clone())];
        h = po.induced_to(k.clone(), &cocone);
        g = po.legs[1].after(&g);
        log.push((s, j));
    }
    let res = ReductionResult { red: h.dom.clone(), f_red: g, residual: h, log };
    debug_assert!(res.residual.after(&res.f_red) == *f);
    Ok(res)
}

impl ReductionResult {
    /// The unique u: red → R' with u ∘ f_red = g2 and h2 ∘ u = residual, if it exists.
    pub fn factor_through(&self, g2: &SMap, h2: &SMap) -> Option<SMap> {
        let red = &self.red;
        let mut image = vec![None; red.len()];
        for x in 0..self.f_red.dom.len() as u32 {
            let y = self.f_red.image_of(x);
            if image[y.base as usize].is_some() {
                continue;
            }
            let v = y.op.values();
            let section: Vec<u8> = (0..=y.op.tgt_dim() as u8).map(|t| v.iter().position(|&w| w == t).unwrap() as u8).collect();
            image[y.base as usize] = Some(h2.dom.apply(g2.image_of(x), &section));
        }
        let image: Vec<Simplex> = image.into_iter().collect::<Option<_>>()?;
        let u = SMap::new(red.clone(), h2.dom.clone(), image).ok()?;
        (u.after(&self.f_red) == *g2 && h2.after(&u).image() == self.residual.image()).then_some(u)
    }
}

#[cfg(test)]
mod tests;
