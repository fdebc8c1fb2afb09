//! Workspace files: JSON schemas for every entity, with validation on load.
//!
//! Categories are written with identities omitted and renumbered so that
//! non-identities come first, which is how [`FinCat::build`] numbers them.
//! Everything that refers to morphisms by index is written in that numbering,
//! so `save(load(save(w)))` is byte-identical to `save(w)`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::category::{CatDiagram, FinCat, Functor};
use crate::chain::{ChainComplex, ChainMap};
use crate::diagram::{BoundedDiagram, IndexedDiagram};
use crate::error::{Error, Result};
use crate::linalg::{Fp, Mat};
use crate::simplicial::{Op, SMap, SSet, Simplex};
use crate::values::{parse_tag, ChainCat, SSetCat, ValueCategory};

pub const SCHEMA_VERSION: u32 = 1;

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSimplex {
    pub base: u32,
    pub op: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCell {
    pub id: u32,
    pub dim: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSSet {
    pub simplices: Vec<RawCell>,
    #[serde(default)]
    pub faces: BTreeMap<String, RawSimplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSMap {
    pub from: String,
    pub to: String,
    pub image: BTreeMap<String, RawSimplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawArrow {
    pub name: String,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCat {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<RawArrow>,
    /// Triples (g, f, g∘f) for composable non-identity pairs.
    #[serde(default)]
    pub compose: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunctor {
    pub src: String,
    pub tgt: String,
    pub obj: Vec<u32>,
    /// Images of the non-identity morphisms of the source.
    #[serde(default)]
    pub mor: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTransition {
    pub obj: Vec<u32>,
    #[serde(default)]
    pub mor: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCatDiagram {
    pub base: String,
    pub fibers: Vec<String>,
    /// One per non-identity morphism of the base.
    #[serde(default)]
    pub transitions: Vec<RawTransition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChain {
    pub p: u32,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub d: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    pub base: String,
    pub value_cat: String,
    pub values: Vec<Value>,
    #[serde(default)]
    pub faces: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawIndexed {
    pub cat: String,
    pub value_cat: String,
    pub objs: Vec<Value>,
    /// One per non-identity morphism.
    #[serde(default)]
    pub mors: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWorkspace {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ssets: BTreeMap<String, RawSSet>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub smaps: BTreeMap<String, RawSMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, RawCat>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, RawFunctor>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cat_diagrams: BTreeMap<String, RawCatDiagram>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, RawChain>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagrams: BTreeMap<String, RawDiagram>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub indexed: BTreeMap<String, RawIndexed>,
}

// ---- simplicial sets ----

fn simplex_to_raw(x: Simplex) -> RawSimplex {
    RawSimplex { base: x.base, op: x.op.values().to_vec() }
}

fn simplex_from_raw(r: &RawSimplex, path: &str) -> Result<Simplex> {
    let op = Op::from_values(&r.op).ok_or_else(|| schema(path, "op is not a monotone surjection"))?;
    Ok(Simplex { base: r.base, op })
}

fn face_key(s: u32, i: usize) -> String {
    format!("{s}:{i}")
}

pub fn sset_to_raw(k: &SSet) -> RawSSet {
    let simplices = (0..k.len() as u32).map(|s| RawCell { id: s, dim: k.dim(s) as u8 }).collect();
    let mut faces = BTreeMap::new();
    for s in 0..k.len() as u32 {
        for (i, &x) in k.faces_of(s).iter().enumerate() {
            faces.insert(face_key(s, i), simplex_to_raw(x));
        }
    }
    RawSSet { simplices, faces }
}

pub fn sset_from_raw(r: &RawSSet, path: &str) -> Result<SSet> {
    let n = r.simplices.len();
    let mut dims = vec![None; n];
    for c in &r.simplices {
        let slot = dims.get_mut(c.id as usize).ok_or_else(|| schema(path, format!("simplex id {} out of range", c.id)))?;
        if slot.replace(c.dim).is_some() {
            return Err(schema(path, format!("simplex id {} listed twice", c.id)));
        }
    }
    let dims: Vec<u8> = dims.into_iter().map(|d| d.expect("ids are a permutation")).collect();
    let mut faces: Vec<Vec<Simplex>> = dims.iter().map(|&d| Vec::with_capacity(if d == 0 { 0 } else { d as usize + 1 })).collect();
    for (s, &d) in dims.iter().enumerate() {
        if d == 0 {
            continue;
        }
        for i in 0..=d as usize {
            let key = face_key(s as u32, i);
            let p = format!("{path}.faces.{key}");
            let raw = r.faces.get(&key).ok_or_else(|| schema(&p, "missing face"))?;
            if raw.base as usize >= n {
                return Err(Error::Dangling(format!("{p} refers to simplex {}", raw.base)));
            }
            faces[s].push(simplex_from_raw(raw, &p)?);
        }
    }
    let expected: usize = dims.iter().map(|&d| if d == 0 { 0 } else { d as usize + 1 }).sum();
    if r.faces.len() != expected {
        return Err(schema(path, "faces listed for nonexistent (simplex, index) pairs"));
    }
    SSet::new(dims, faces).map_err(|e| schema(path, e.to_string()))
}

pub fn smap_image_to_raw(f: &SMap) -> BTreeMap<String, RawSimplex> {
    f.image().iter().enumerate().map(|(s, &y)| (s.to_string(), simplex_to_raw(y))).collect()
}

pub fn smap_from_image(dom: Arc<SSet>, cod: Arc<SSet>, image: &BTreeMap<String, RawSimplex>, path: &str) -> Result<SMap> {
    if image.len() != dom.len() {
        return Err(schema(path, format!("image has {} entries for {} simplices", image.len(), dom.len())));
    }
    let mut out = Vec::with_capacity(dom.len());
    for s in 0..dom.len() {
        let p = format!("{path}.image.{s}");
        let raw = image.get(&s.to_string()).ok_or_else(|| schema(&p, "missing image"))?;
        if raw.base as usize >= cod.len() {
            return Err(Error::Dangling(format!("{p} refers to simplex {}", raw.base)));
        }
        out.push(simplex_from_raw(raw, &p)?);
    }
    SMap::new(dom, cod, out).map_err(|e| schema(path, e.to_string()))
}

// ---- categories ----

/// New index of each morphism: non-identities in order, then identities by object.
pub fn canonical_numbering(c: &FinCat) -> Vec<u32> {
    let mut new = vec![0; c.num_morphisms()];
    let non_id = c.non_identities();
    for (k, &m) in non_id.iter().enumerate() {
        new[m as usize] = k as u32;
    }
    for x in 0..c.num_objects() as u32 {
        new[c.id(x) as usize] = (non_id.len() + x as usize) as u32;
    }
    new
}

pub fn cat_to_raw(c: &FinCat) -> RawCat {
    let new = canonical_numbering(c);
    let non_id = c.non_identities();
    let morphisms = non_id
        .iter()
        .map(|&m| RawArrow { name: c.morphism_name(m).to_string(), src: c.src(m), tgt: c.tgt(m) })
        .collect();
    let mut compose = Vec::new();
    for &f in &non_id {
        for &g in &non_id {
            if c.tgt(f) == c.src(g) {
                compose.push([new[g as usize], new[f as usize], new[c.compose(g, f) as usize]]);
            }
        }
    }
    compose.sort();
    RawCat { objects: c.object_names().to_vec(), morphisms, compose }
}

pub fn cat_from_raw(r: &RawCat, path: &str) -> Result<FinCat> {
    let arrows = r.morphisms.iter().map(|a| (a.src, a.tgt, a.name.clone())).collect();
    let table: BTreeMap<(u32, u32), u32> = r.compose.iter().map(|t| ((t[0], t[1]), t[2])).collect();
    if table.len() != r.compose.len() {
        return Err(schema(path, "composition table lists a pair twice"));
    }
    let total = (r.morphisms.len() + r.objects.len()) as u32;
    if let Some(t) = r.compose.iter().find(|t| t.iter().any(|&m| m >= total)) {
        return Err(Error::Dangling(format!("{path}.compose refers to morphism {}", t.iter().max().unwrap())));
    }
    let c = FinCat::build(r.objects.clone(), arrows, |g, f| table.get(&(g, f)).copied()).map_err(|e| match e {
        Error::Dangling(m) => Error::Dangling(format!("{path}: {m}")),
        e => schema(path, e.to_string()),
    })?;
    Ok(c)
}

fn functor_parts_to_raw(f: &Functor) -> (Vec<u32>, Vec<u32>) {
    let new_tgt = canonical_numbering(&f.tgt);
    let mor = f.src.non_identities().iter().map(|&m| new_tgt[f.mor[m as usize] as usize]).collect();
    (f.obj.clone(), mor)
}

fn functor_from_parts(src: Arc<FinCat>, tgt: Arc<FinCat>, obj: &[u32], mor: &[u32], path: &str) -> Result<Functor> {
    let non_id = src.non_identities();
    if obj.len() != src.num_objects() || mor.len() != non_id.len() {
        return Err(schema(path, "functor needs one image per object and per non-identity morphism"));
    }
    if let Some(&x) = obj.iter().find(|&&x| x as usize >= tgt.num_objects()) {
        return Err(Error::Dangling(format!("{path}.obj refers to object {x}")));
    }
    if let Some(&m) = mor.iter().find(|&&m| m as usize >= tgt.num_morphisms()) {
        return Err(Error::Dangling(format!("{path}.mor refers to morphism {m}")));
    }
    let mut full = vec![0; src.num_morphisms()];
    for (k, &m) in non_id.iter().enumerate() {
        full[m as usize] = mor[k];
    }
    for x in 0..src.num_objects() as u32 {
        full[src.id(x) as usize] = tgt.id(obj[x as usize]);
    }
    Functor::new(src, tgt, obj.to_vec(), full).map_err(|e| schema(path, e.to_string()))
}

// ---- value payloads ----

/// JSON payloads of value objects and morphisms.
pub trait ValueJson: ValueCategory {
    fn obj_to_json(&self, x: &Self::Obj) -> Value;
    fn obj_from_json(&self, v: &Value, path: &str) -> Result<Self::Obj>;
    fn mor_to_json(&self, m: &Self::Mor) -> Value;
    fn mor_from_json(&self, v: &Value, src: &Self::Obj, tgt: &Self::Obj, path: &str) -> Result<Self::Mor>;
}

pub fn chain_to_raw(c: &ChainComplex) -> RawChain {
    RawChain {
        p: c.field().p(),
        dims: c.dims().to_vec(),
        d: (0..c.len().saturating_sub(1)).map(|k| c.d(k).to_row_major()).collect(),
    }
}

fn matrix(f: Fp, rows: usize, cols: usize, e: &[u32], path: &str) -> Result<Mat> {
    if e.len() != rows * cols {
        return Err(schema(path, format!("expected {rows}x{cols} entries, found {}", e.len())));
    }
    let e: Vec<i64> = e.iter().map(|&x| x as i64).collect();
    Mat::from_row_major(f, rows, cols, &e).map_err(|err| schema(path, err.to_string()))
}

pub fn chain_from_raw(r: &RawChain, path: &str) -> Result<ChainComplex> {
    let f = Fp::new(r.p).map_err(|e| schema(format!("{path}.p"), e.to_string()))?;
    if r.d.len() + 1 != r.dims.len() && !(r.dims.is_empty() && r.d.is_empty()) {
        return Err(schema(path, "need one differential between consecutive degrees"));
    }
    let d = r
        .d
        .iter()
        .enumerate()
        .map(|(k, e)| matrix(f, r.dims[k], r.dims[k + 1], e, &format!("{path}.d.{k}")))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(f, r.dims.clone(), d).map_err(|e| schema(path, e.to_string()))
}

impl ValueJson for ChainCat {
    fn obj_to_json(&self, x: &Arc<ChainComplex>) -> Value {
        serde_json::to_value(chain_to_raw(x)).expect("plain data")
    }

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<Arc<ChainComplex>> {
        let raw: RawChain = serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))?;
        if raw.p != self.f.p() {
            return Err(schema(path, format!("complex over F_{} in a diagram over F_{}", raw.p, self.f.p())));
        }
        Ok(Arc::new(chain_from_raw(&raw, path)?))
    }

    fn mor_to_json(&self, m: &ChainMap) -> Value {
        let comps: Vec<Vec<u32>> = (0..m.src.len()).map(|k| m.component(k).to_row_major()).collect();
        serde_json::to_value(comps).expect("plain data")
    }

    fn mor_from_json(&self, v: &Value, src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>, path: &str) -> Result<ChainMap> {
        let comps: Vec<Vec<u32>> = serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))?;
        if comps.len() != src.len() {
            return Err(schema(path, format!("expected {} components", src.len())));
        }
        let m = comps
            .iter()
            .enumerate()
            .map(|(k, e)| matrix(self.f, tgt.dim(k), src.dim(k), e, &format!("{path}.{k}")))
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new(src.clone(), tgt.clone(), m).map_err(|e| schema(path, e.to_string()))
    }
}

impl ValueJson for SSetCat {
    fn obj_to_json(&self, x: &Arc<SSet>) -> Value {
        serde_json::to_value(sset_to_raw(x)).expect("plain data")
    }

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<Arc<SSet>> {
        let raw: RawSSet = serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))?;
        Ok(Arc::new(sset_from_raw(&raw, path)?))
    }

    fn mor_to_json(&self, m: &SMap) -> Value {
        serde_json::to_value(smap_image_to_raw(m)).expect("plain data")
    }

    fn mor_from_json(&self, v: &Value, src: &Arc<SSet>, tgt: &Arc<SSet>, path: &str) -> Result<SMap> {
        let image: BTreeMap<String, RawSimplex> = serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))?;
        smap_from_image(src.clone(), tgt.clone(), &image, path)
    }
}

fn diagram_to_raw<V: ValueJson>(vc: &V, base: &str, d: &BoundedDiagram<V>) -> RawDiagram {
    let mut faces = BTreeMap::new();
    for (s, fs) in d.faces.iter().enumerate() {
        for (i, m) in fs.iter().enumerate() {
            faces.insert(face_key(s as u32, i), vc.mor_to_json(m));
        }
    }
    RawDiagram { base: base.to_string(), value_cat: vc.tag(), values: d.values.iter().map(|x| vc.obj_to_json(x)).collect(), faces }
}

fn diagram_from_raw<V: ValueJson>(vc: &V, k: Arc<SSet>, r: &RawDiagram, path: &str) -> Result<BoundedDiagram<V>> {
    if r.values.len() != k.len() {
        return Err(schema(format!("{path}.values"), format!("expected {} values", k.len())));
    }
    let values = r
        .values
        .iter()
        .enumerate()
        .map(|(s, v)| vc.obj_from_json(v, &format!("{path}.values.{s}")))
        .collect::<Result<Vec<_>>>()?;
    let mut faces = Vec::with_capacity(k.len());
    let mut count = 0;
    for s in 0..k.len() as u32 {
        let n = k.dim(s);
        let mut fs = Vec::new();
        if n > 0 {
            for i in 0..=n {
                let key = face_key(s, i);
                let p = format!("{path}.faces.{key}");
                let raw = r.faces.get(&key).ok_or_else(|| schema(&p, "missing face morphism"))?;
                let b = k.face_nd(s, i).base;
                fs.push(vc.mor_from_json(raw, &values[b as usize], &values[s as usize], &p)?);
                count += 1;
            }
        }
        faces.push(fs);
    }
    if count != r.faces.len() {
        return Err(schema(format!("{path}.faces"), "face morphisms listed for nonexistent faces"));
    }
    BoundedDiagram::new(vc, k, values, faces).map_err(|e| schema(path, e.to_string()))
}

fn indexed_to_raw<V: ValueJson>(vc: &V, cat: &str, d: &IndexedDiagram<V>) -> RawIndexed {
    RawIndexed {
        cat: cat.to_string(),
        value_cat: vc.tag(),
        objs: d.objs.iter().map(|x| vc.obj_to_json(x)).collect(),
        mors: d.cat.non_identities().iter().map(|&m| vc.mor_to_json(&d.mors[m as usize])).collect(),
    }
}

fn indexed_from_raw<V: ValueJson>(vc: &V, c: Arc<FinCat>, r: &RawIndexed, path: &str) -> Result<IndexedDiagram<V>> {
    if r.objs.len() != c.num_objects() {
        return Err(schema(format!("{path}.objs"), format!("expected {} objects", c.num_objects())));
    }
    let objs = r
        .objs
        .iter()
        .enumerate()
        .map(|(x, v)| vc.obj_from_json(v, &format!("{path}.objs.{x}")))
        .collect::<Result<Vec<_>>>()?;
    let non_id = c.non_identities();
    if r.mors.len() != non_id.len() {
        return Err(schema(format!("{path}.mors"), format!("expected {} morphisms", non_id.len())));
    }
    let mut mors: Vec<Option<V::Mor>> = vec![None; c.num_morphisms()];
    for (k, &m) in non_id.iter().enumerate() {
        let (s, t) = (c.src(m) as usize, c.tgt(m) as usize);
        mors[m as usize] = Some(vc.mor_from_json(&r.mors[k], &objs[s], &objs[t], &format!("{path}.mors.{k}"))?);
    }
    for x in 0..c.num_objects() as u32 {
        mors[c.id(x) as usize] = Some(vc.identity(&objs[x as usize]));
    }
    let mors = mors.into_iter().map(|m| m.expect("all morphisms set")).collect();
    IndexedDiagram::new(vc, c, objs, mors).map_err(|e| schema(path, e.to_string()))
}

// ---- typed workspace ----

/// A value category chosen at run time.
#[derive(Clone, Debug)]
pub enum AnyValueCat {
    Chain(ChainCat),
    SSet(SSetCat),
}

impl AnyValueCat {
    pub fn from_tag(tag: &str) -> Result<AnyValueCat> {
        let (kind, p) = parse_tag(tag)?;
        Ok(match kind.as_str() {
            "chain" => AnyValueCat::Chain(ChainCat::new(p)?),
            _ => AnyValueCat::SSet(SSetCat::new(p)?),
        })
    }

    pub fn tag(&self) -> String {
        match self {
            AnyValueCat::Chain(v) => v.tag(),
            AnyValueCat::SSet(v) => v.tag(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum AnyBounded {
    Chain(ChainCat, BoundedDiagram<ChainCat>),
    SSet(SSetCat, BoundedDiagram<SSetCat>),
}

#[derive(Clone, Debug)]
pub enum AnyIndexed {
    Chain(ChainCat, IndexedDiagram<ChainCat>),
    SSet(SSetCat, IndexedDiagram<SSetCat>),
}

impl AnyIndexed {
    pub fn cat(&self) -> &Arc<FinCat> {
        match self {
            AnyIndexed::Chain(_, d) => &d.cat,
            AnyIndexed::SSet(_, d) => &d.cat,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedMap {
    pub from: String,
    pub to: String,
    pub map: SMap,
}

#[derive(Clone, Debug)]
pub struct NamedFunctor {
    pub src: String,
    pub tgt: String,
    pub functor: Functor,
}

#[derive(Clone, Debug)]
pub struct NamedCatDiagram {
    pub base: String,
    pub fibers: Vec<String>,
    pub diagram: CatDiagram,
}

#[derive(Clone, Debug)]
pub struct NamedBounded {
    pub base: String,
    pub diagram: AnyBounded,
}

#[derive(Clone, Debug)]
pub struct NamedIndexed {
    pub cat: String,
    pub diagram: AnyIndexed,
}

/// All entities of a workspace file, validated.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub ssets: BTreeMap<String, Arc<SSet>>,
    pub smaps: BTreeMap<String, NamedMap>,
    pub categories: BTreeMap<String, Arc<FinCat>>,
    pub functors: BTreeMap<String, NamedFunctor>,
    pub cat_diagrams: BTreeMap<String, NamedCatDiagram>,
    pub complexes: BTreeMap<String, Arc<ChainComplex>>,
    pub diagrams: BTreeMap<String, NamedBounded>,
    pub indexed: BTreeMap<String, NamedIndexed>,
}

fn lookup<'a, T>(m: &'a BTreeMap<String, T>, name: &str, kind: &str, path: &str) -> Result<&'a T> {
    m.get(name).ok_or_else(|| Error::Dangling(format!("{path} refers to unknown {kind} {name:?}")))
}

impl Workspace {
    pub fn from_raw(raw: &RawWorkspace) -> Result<Workspace> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::UnsupportedVersion(raw.schema_version));
        }
        let mut w = Workspace::default();
        for (name, r) in &raw.ssets {
            w.ssets.insert(name.clone(), Arc::new(sset_from_raw(r, &format!("ssets.{name}"))?));
        }
        for (name, r) in &raw.smaps {
            let path = format!("smaps.{name}");
            let dom = lookup(&w.ssets, &r.from, "sset", &path)?.clone();
            let cod = lookup(&w.ssets, &r.to, "sset", &path)?.clone();
            let map = smap_from_image(dom, cod, &r.image, &path)?;
            w.smaps.insert(name.clone(), NamedMap { from: r.from.clone(), to: r.to.clone(), map });
        }
        for (name, r) in &raw.categories {
            w.categories.insert(name.clone(), Arc::new(cat_from_raw(r, &format!("categories.{name}"))?));
        }
        for (name, r) in &raw.functors {
            let path = format!("functors.{name}");
            let src = lookup(&w.categories, &r.src, "category", &path)?.clone();
            let tgt = lookup(&w.categories, &r.tgt, "category", &path)?.clone();
            let functor = functor_from_parts(src, tgt, &r.obj, &r.mor, &path)?;
            w.functors.insert(name.clone(), NamedFunctor { src: r.src.clone(), tgt: r.tgt.clone(), functor });
        }
        for (name, r) in &raw.cat_diagrams {
            let path = format!("cat_diagrams.{name}");
            let base = lookup(&w.categories, &r.base, "category", &path)?.clone();
            let fibers = r
                .fibers
                .iter()
                .map(|f| lookup(&w.categories, f, "category", &path).cloned())
                .collect::<Result<Vec<_>>>()?;
            if fibers.len() != base.num_objects() {
                return Err(schema(format!("{path}.fibers"), "need one fiber per object"));
            }
            let non_id = base.non_identities();
            if r.transitions.len() != non_id.len() {
                return Err(schema(format!("{path}.transitions"), "need one transition per non-identity morphism"));
            }
            let mut transition: Vec<Option<Functor>> = vec![None; base.num_morphisms()];
            for (k, &m) in non_id.iter().enumerate() {
                let (s, t) = (base.src(m) as usize, base.tgt(m) as usize);
                let tr = &r.transitions[k];
                let p = format!("{path}.transitions.{k}");
                transition[m as usize] = Some(functor_from_parts(fibers[s].clone(), fibers[t].clone(), &tr.obj, &tr.mor, &p)?);
            }
            for x in 0..base.num_objects() as u32 {
                transition[base.id(x) as usize] = Some(Functor::identity(fibers[x as usize].clone()));
            }
            let transition = transition.into_iter().map(|t| t.expect("all transitions set")).collect();
            let diagram = CatDiagram::new(base, fibers, transition).map_err(|e| schema(&path, e.to_string()))?;
            w.cat_diagrams.insert(name.clone(), NamedCatDiagram { base: r.base.clone(), fibers: r.fibers.clone(), diagram });
        }
        for (name, r) in &raw.complexes {
            w.complexes.insert(name.clone(), Arc::new(chain_from_raw(r, &format!("complexes.{name}"))?));
        }
        for (name, r) in &raw.diagrams {
            let path = format!("diagrams.{name}");
            let k = lookup(&w.ssets, &r.base, "sset", &path)?.clone();
            let diagram = match AnyValueCat::from_tag(&r.value_cat).map_err(|e| schema(format!("{path}.value_cat"), e.to_string()))? {
                AnyValueCat::Chain(v) => AnyBounded::Chain(v.clone(), diagram_from_raw(&v, k, r, &path)?),
                AnyValueCat::SSet(v) => AnyBounded::SSet(v.clone(), diagram_from_raw(&v, k, r, &path)?),
            };
            w.diagrams.insert(name.clone(), NamedBounded { base: r.base.clone(), diagram });
        }
        for (name, r) in &raw.indexed {
            let path = format!("indexed.{name}");
            let c = lookup(&w.categories, &r.cat, "category", &path)?.clone();
            let diagram = match AnyValueCat::from_tag(&r.value_cat).map_err(|e| schema(format!("{path}.value_cat"), e.to_string()))? {
                AnyValueCat::Chain(v) => AnyIndexed::Chain(v.clone(), indexed_from_raw(&v, c, r, &path)?),
                AnyValueCat::SSet(v) => AnyIndexed::SSet(v.clone(), indexed_from_raw(&v, c, r, &path)?),
            };
            w.indexed.insert(name.clone(), NamedIndexed { cat: r.cat.clone(), diagram });
        }
        Ok(w)
    }

    pub fn to_raw(&self) -> RawWorkspace {
        RawWorkspace {
            schema_version: SCHEMA_VERSION,
            ssets: self.ssets.iter().map(|(n, k)| (n.clone(), sset_to_raw(k))).collect(),
            smaps: self
                .smaps
                .iter()
                .map(|(n, m)| (n.clone(), RawSMap { from: m.from.clone(), to: m.to.clone(), image: smap_image_to_raw(&m.map) }))
                .collect(),
            categories: self.categories.iter().map(|(n, c)| (n.clone(), cat_to_raw(c))).collect(),
            functors: self
                .functors
                .iter()
                .map(|(n, f)| {
                    let (obj, mor) = functor_parts_to_raw(&f.functor);
                    (n.clone(), RawFunctor { src: f.src.clone(), tgt: f.tgt.clone(), obj, mor })
                })
                .collect(),
            cat_diagrams: self
                .cat_diagrams
                .iter()
                .map(|(n, h)| {
                    let transitions = h
                        .diagram
                        .base
                        .non_identities()
                        .iter()
                        .map(|&m| {
                            let (obj, mor) = functor_parts_to_raw(&h.diagram.transition[m as usize]);
                            RawTransition { obj, mor }
                        })
                        .collect();
                    (n.clone(), RawCatDiagram { base: h.base.clone(), fibers: h.fibers.clone(), transitions })
                })
                .collect(),
            complexes: self.complexes.iter().map(|(n, c)| (n.clone(), chain_to_raw(c))).collect(),
            diagrams: self
                .diagrams
                .iter()
                .map(|(n, d)| {
                    let raw = match &d.diagram {
                        AnyBounded::Chain(v, x) => diagram_to_raw(v, &d.base, x),
                        AnyBounded::SSet(v, x) => diagram_to_raw(v, &d.base, x),
                    };
                    (n.clone(), raw)
                })
                .collect(),
            indexed: self
                .indexed
                .iter()
                .map(|(n, d)| {
                    let raw = match &d.diagram {
                        AnyIndexed::Chain(v, x) => indexed_to_raw(v, &d.cat, x),
                        AnyIndexed::SSet(v, x) => indexed_to_raw(v, &d.cat, x),
                    };
                    (n.clone(), raw)
                })
                .collect(),
        }
    }

    /// Canonical text: pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Workspace> {
        // read the version first so that newer files get a clear error
        let probe: Value = serde_json::from_str(text).map_err(|e| schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        match probe.get("schema_version").and_then(Value::as_u64) {
            None => return Err(schema("schema_version", "missing or not an integer")),
            Some(v) if v != SCHEMA_VERSION as u64 => return Err(Error::UnsupportedVersion(v as u32)),
            _ => {}
        }
        let raw: RawWorkspace = serde_json::from_str(text).map_err(|e| schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Workspace::from_raw(&raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Workspace> {
        Workspace::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Entities of the workspace: the only one of a kind, or the named one.
    pub fn pick<'a, T>(map: &'a BTreeMap<String, T>, name: Option<&str>, kind: &str) -> Result<(&'a String, &'a T)> {
        match name {
            Some(n) => map.get_key_value(n).ok_or_else(|| Error::Dangling(format!("no {kind} named {n:?}"))),
            None if map.len() == 1 => Ok(map.iter().next().expect("one entry")),
            None => Err(Error::Invalid(format!("workspace has {} {kind} entries; name one", map.len()))),
        }
    }

    pub fn add_sset(&mut self, name: &str, k: Arc<SSet>) {
        self.ssets.insert(name.to_string(), k);
    }

    pub fn add_category(&mut self, name: &str, c: Arc<FinCat>) {
        self.categories.insert(name.to_string(), c);
    }

    pub fn add_smap(&mut self, name: &str, from: &str, to: &str, map: SMap) {
        self.smaps.insert(name.to_string(), NamedMap { from: from.to_string(), to: to.to_string(), map });
    }

    pub fn add_functor(&mut self, name: &str, src: &str, tgt: &str, functor: Functor) {
        self.functors.insert(name.to_string(), NamedFunctor { src: src.to_string(), tgt: tgt.to_string(), functor });
    }

    pub fn add_cat_diagram(&mut self, name: &str, base: &str, fibers: &[String], diagram: CatDiagram) {
        self.cat_diagrams.insert(name.to_string(), NamedCatDiagram { base: base.to_string(), fibers: fibers.to_vec(), diagram });
    }

    pub fn add_diagram(&mut self, name: &str, base: &str, diagram: AnyBounded) {
        self.diagrams.insert(name.to_string(), NamedBounded { base: base.to_string(), diagram });
    }

    pub fn add_indexed(&mut self, name: &str, cat: &str, diagram: AnyIndexed) {
        self.indexed.insert(name.to_string(), NamedIndexed { cat: cat.to_string(), diagram });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{sphere_quotient, standard};

    fn sample() -> Workspace {
        let mut w = Workspace::default();
        let q = sphere_quotient(2).unwrap();
        w.add_sset("D2", q.dom.clone());
        w.add_sset("S2", q.cod.clone());
        w.add_smap("q", "D2", "S2", q.clone());
        let span = Arc::new(FinCat::span());
        let prod = Arc::new(FinCat::parallel_arrows().product(&FinCat::ordinal(1)));
        w.add_category("span", span.clone());
        w.add_category("prod", prod.clone());
        w.add_category("pt", Arc::new(FinCat::trivial()));
        w.add_functor("to_pt", "prod", "pt", Functor::to_point(prod.clone()));
        let h = CatDiagram::constant(span.clone(), prod.clone());
        w.add_cat_diagram("H", "span", &["prod".into(), "prod".into(), "prod".into()], h);
        let v = ChainCat::new(3).unwrap();
        let x = Arc::new(ChainComplex::new(v.f, vec![2, 1], vec![Mat::from_row_major(v.f, 2, 1, &[1, 2]).unwrap()]).unwrap());
        w.complexes.insert("X".into(), x.clone());
        w.add_diagram("F", "D2", AnyBounded::Chain(v.clone(), BoundedDiagram::constant(&v, q.dom.clone(), x.clone())));
        let s = SSetCat::new(2).unwrap();
        w.add_diagram("G", "S2", AnyBounded::SSet(s.clone(), BoundedDiagram::constant(&s, q.cod.clone(), Arc::new(standard(1).0))));
        w.add_indexed("P", "prod", AnyIndexed::Chain(v.clone(), IndexedDiagram::constant(&v, prod, x)));
        w
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let w = sample();
        let text = w.to_json();
        let back = Workspace::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(*back.ssets["S2"], *w.ssets["S2"]);
        assert_eq!(back.smaps["q"].map, w.smaps["q"].map);
    }

    #[test]
    fn dangling_simplex_is_named() {
        let mut raw = sample().to_raw();
        raw.ssets.get_mut("S2").unwrap().faces.get_mut("1:0").unwrap().base = 17;
        let err = Workspace::from_raw(&raw).unwrap_err();
        assert!(matches!(&err, Error::Dangling(m) if m.contains("17") && m.contains("1:0")), "{err}");
    }

    #[test]
    fn dangling_names_are_reported() {
        let mut raw = sample().to_raw();
        raw.smaps.get_mut("q").unwrap().to = "S9".into();
        let err = Workspace::from_raw(&raw).unwrap_err();
        assert!(matches!(&err, Error::Dangling(m) if m.contains("S9")));
    }

    #[test]
    fn newer_schema_is_rejected() {
        let text = sample().to_json().replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
        assert!(matches!(Workspace::from_json(&text), Err(Error::UnsupportedVersion(2))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = Workspace::from_json("{\n  \"schema_version\": 1,\n  \"ssets\": [}").unwrap_err();
        assert!(matches!(&err, Error::Schema { path, .. } if path.starts_with("line 3")), "{err}");
    }

    #[test]
    fn identities_are_synthesized() {
        let text = r#"{"schema_version": 1, "categories": {"I": {"objects": ["a", "b"], "morphisms": [{"name": "f", "src": 0, "tgt": 1}]}}}"#;
        let w = Workspace::from_json(text).unwrap();
        let c = &w.categories["I"];
        assert_eq!(c.num_morphisms(), 3);
        assert!(c.is_identity(c.id(0)) && c.is_identity(c.id(1)));
    }

    #[test]
    fn incoherent_diagrams_are_rejected_on_load() {
        let mut raw = sample().to_raw();
        let d = raw.diagrams.get_mut("F").unwrap();
        // break one face of the top simplex of Δ[2]
        let key = face_key(6, 0);
        d.faces.insert(key, serde_json::json!([[0, 0, 0, 0], [0]]));
        assert!(Workspace::from_raw(&raw).is_err());
    }
}
