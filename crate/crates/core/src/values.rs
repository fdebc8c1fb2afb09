//! Value categories: the operations the diagram machinery needs from its target.

use std::fmt::Debug;
use std::sync::Arc;

use crate::chain::{self, CColimit, ChainComplex, ChainMap, WeCertificate};
use crate::error::{Error, Result};
use crate::linalg::Fp;
use crate::simplicial::{self, product, product_map, same_space, standard, Op, PairSpace, SColimit, SMap, SSet, Simplex};

/// Colimit of a finite graph in a value category.
#[derive(Clone, Debug)]
pub struct Colim<V: ValueCategory> {
    pub apex: V::Obj,
    pub legs: Vec<V::Mor>,
    pub data: V::ColimData,
}

/// Mapping-cylinder factorization f = q ∘ i.
#[derive(Clone, Debug)]
pub struct Factorization<V: ValueCategory> {
    pub f: V::Mor,
    pub cyl: V::Obj,
    pub i: V::Mor,
    pub q: V::Mor,
    pub data: V::FactorData,
}

pub trait ValueCategory: Clone + Debug + Send + Sync {
    type Obj: Clone + Debug + Send + Sync;
    type Mor: Clone + Debug + Send + Sync;
    type ColimData: Clone + Debug + Send + Sync;
    type FactorData: Clone + Debug + Send + Sync;

    fn tag(&self) -> String;
    fn field(&self) -> Fp;
    fn initial(&self) -> Self::Obj;
    fn src(&self, m: &Self::Mor) -> Self::Obj;
    fn tgt(&self, m: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// g ∘ f
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn same_object(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
    fn equal_morphisms(&self, a: &Self::Mor, b: &Self::Mor) -> bool;
    /// Colimit of the graph with the given objects and arrows `(source, target, morphism)`.
    fn colimit(&self, objects: &[Self::Obj], arrows: &[(usize, usize, &Self::Mor)]) -> Result<Colim<Self>>;
    /// The morphism out of a colimit determined by a cocone (one morphism per object).
    fn induced(&self, c: &Colim<Self>, tgt: &Self::Obj, cocone: &[Self::Mor]) -> Self::Mor;
    fn is_cofibration(&self, f: &Self::Mor) -> bool;
    fn is_iso(&self, f: &Self::Mor) -> bool;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn we_certificate(&self, f: &Self::Mor) -> WeCertificate;
    fn betti(&self, x: &Self::Obj) -> Vec<usize>;
    fn factor_cof_we(&self, f: &Self::Mor) -> Factorization<Self>;
    /// Cyl(a, b): Cyl(f) → Cyl(f') for a commuting square f' ∘ a = b ∘ f.
    fn cylinder_map(&self, from: &Factorization<Self>, to: &Factorization<Self>, a: &Self::Mor, b: &Self::Mor) -> Self::Mor;
    /// Size of an object, used only for reporting.
    fn size(&self, x: &Self::Obj) -> usize;

    fn cofibrant_replacement_object(&self, x: &Self::Obj) -> (Self::Obj, Self::Mor) {
        (x.clone(), self.identity(x))
    }

    fn from_initial(&self, x: &Self::Obj) -> Self::Mor {
        let c = self.colimit(&[], &[]).expect("empty colimit");
        self.induced(&c, x, &[])
    }

    fn coproduct(&self, objects: &[Self::Obj]) -> Result<Colim<Self>> {
        self.colimit(objects, &[])
    }

    /// Pushout of b ← a → c; legs are ordered (a, b, c).
    fn pushout(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Colim<Self>> {
        let objs = [self.src(f), self.tgt(f), self.tgt(g)];
        self.colimit(&objs, &[(0, 1, f), (0, 2, g)])
    }

    fn coequalizer(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Colim<Self>> {
        let objs = [self.src(f), self.tgt(f)];
        self.colimit(&objs, &[(0, 1, f), (0, 1, g)])
    }
}

/// Bounded chain complexes over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainCat {
    pub f: Fp,
}

impl ChainCat {
    pub fn new(p: u32) -> Result<ChainCat> {
        Ok(ChainCat { f: Fp::new(p)? })
    }
}

impl ValueCategory for ChainCat {
    type Obj = Arc<ChainComplex>;
    type Mor = ChainMap;
    type ColimData = Vec<Vec<(usize, usize)>>;
    type FactorData = ();

    fn tag(&self) -> String {
        format!("chain:f{}", self.f.p())
    }

    fn field(&self) -> Fp {
        self.f
    }

    fn initial(&self) -> Arc<ChainComplex> {
        Arc::new(ChainComplex::zero(self.f))
    }

    fn src(&self, m: &ChainMap) -> Arc<ChainComplex> {
        m.src.clone()
    }

    fn tgt(&self, m: &ChainMap) -> Arc<ChainComplex> {
        m.tgt.clone()
    }

    fn identity(&self, x: &Arc<ChainComplex>) -> ChainMap {
        ChainMap::identity(x.clone())
    }

    fn compose(&self, g: &ChainMap, f: &ChainMap) -> ChainMap {
        debug_assert_eq!(f.tgt.dims(), g.src.dims());
        g.after(f)
    }

    fn same_object(&self, a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    fn equal_morphisms(&self, a: &ChainMap, b: &ChainMap) -> bool {
        self.same_object(&a.src, &b.src) && self.same_object(&a.tgt, &b.tgt) && a.components() == b.components()
    }

    fn colimit(&self, objects: &[Arc<ChainComplex>], arrows: &[(usize, usize, &ChainMap)]) -> Result<Colim<Self>> {
        let CColimit { apex, legs, reps } = chain::colimit(self.f, objects, arrows)?;
        Ok(Colim { apex, legs, data: reps })
    }

    fn induced(&self, c: &Colim<Self>, tgt: &Arc<ChainComplex>, cocone: &[ChainMap]) -> ChainMap {
        let cc = CColimit { apex: c.apex.clone(), legs: vec![], reps: c.data.clone() };
        cc.induced(tgt.clone(), cocone)
    }

    fn is_cofibration(&self, f: &ChainMap) -> bool {
        f.is_injective()
    }

    fn is_iso(&self, f: &ChainMap) -> bool {
        f.is_iso()
    }

    fn inverse(&self, f: &ChainMap) -> Option<ChainMap> {
        f.inverse()
    }

    fn we_certificate(&self, f: &ChainMap) -> WeCertificate {
        f.we_certificate()
    }

    fn betti(&self, x: &Arc<ChainComplex>) -> Vec<usize> {
        x.betti()
    }

    fn factor_cof_we(&self, f: &ChainMap) -> Factorization<Self> {
        let (cyl, i, q) = chain::cylinder(f);
        Factorization { f: f.clone(), cyl, i, q, data: () }
    }

    fn cylinder_map(&self, from: &Factorization<Self>, to: &Factorization<Self>, a: &ChainMap, b: &ChainMap) -> ChainMap {
        chain::cylinder_map(a, b, &from.cyl, &to.cyl)
    }

    fn size(&self, x: &Arc<ChainComplex>) -> usize {
        x.total_dim()
    }
}

/// Finite simplicial sets, with weak equivalences certified by F_p homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SSetCat {
    pub f: Fp,
}

impl SSetCat {
    pub fn new(p: u32) -> Result<SSetCat> {
        Ok(SSetCat { f: Fp::new(p)? })
    }
}

/// The pieces of (X × Δ[1]) ⊔_{X×1} Y needed to map between cylinders.
#[derive(Clone, Debug)]
pub struct SCylinder {
    pub prod: PairSpace,
    pub interval: Arc<SSet>,
    pub glue: SColimit,
}

impl ValueCategory for SSetCat {
    type Obj = Arc<SSet>;
    type Mor = SMap;
    type ColimData = SColimit;
    type FactorData = Arc<SCylinder>;

    fn tag(&self) -> String {
        format!("sset:f{}", self.f.p())
    }

    fn field(&self) -> Fp {
        self.f
    }

    fn initial(&self) -> Arc<SSet> {
        Arc::new(SSet::empty())
    }

    fn src(&self, m: &SMap) -> Arc<SSet> {
        m.dom.clone()
    }

    fn tgt(&self, m: &SMap) -> Arc<SSet> {
        m.cod.clone()
    }

    fn identity(&self, x: &Arc<SSet>) -> SMap {
        SMap::identity(x.clone())
    }

    fn compose(&self, g: &SMap, f: &SMap) -> SMap {
        g.after(f)
    }

    fn same_object(&self, a: &Arc<SSet>, b: &Arc<SSet>) -> bool {
        same_space(a, b)
    }

    fn equal_morphisms(&self, a: &SMap, b: &SMap) -> bool {
        same_space(&a.dom, &b.dom) && same_space(&a.cod, &b.cod) && a.image() == b.image()
    }

    fn colimit(&self, objects: &[Arc<SSet>], arrows: &[(usize, usize, &SMap)]) -> Result<Colim<Self>> {
        let c = simplicial::colimit(objects, arrows)?;
        Ok(Colim { apex: c.apex.clone(), legs: c.legs.clone(), data: c })
    }

    fn induced(&self, c: &Colim<Self>, tgt: &Arc<SSet>, cocone: &[SMap]) -> SMap {
        c.data.induced_to(tgt.clone(), cocone)
    }

    fn is_cofibration(&self, f: &SMap) -> bool {
        f.is_mono()
    }

    fn is_iso(&self, f: &SMap) -> bool {
        f.is_iso()
    }

    fn inverse(&self, f: &SMap) -> Option<SMap> {
        f.inverse()
    }

    fn we_certificate(&self, f: &SMap) -> WeCertificate {
        chain::induced_homology(f, self.f)
    }

    fn betti(&self, x: &Arc<SSet>) -> Vec<usize> {
        chain::sset_homology(x, self.f)
    }

    fn factor_cof_we(&self, f: &SMap) -> Factorization<Self> {
        let x = f.dom.clone();
        let y = f.cod.clone();
        let interval = Arc::new(standard(1).0);
        let prod = product(&x, &interval);
        let end = |v: u32| {
            let image = (0..x.len() as u32)
                .map(|s| {
                    let d = x.dim(s);
                    prod.pair(x.top(s), Simplex { base: v, op: Op::constant(d) }).expect("point of the cylinder")
                })
                .collect();
            SMap::new_unchecked(x.clone(), prod.space.clone(), image)
        };
        let (j0, j1) = (end(0), end(1));
        let down = f.after(&prod.pr1);
        let glue = simplicial::colimit(&[prod.space.clone(), x.clone(), y.clone()], &[(1, 0, &j1), (1, 2, f)])
            .expect("cylinder pushout");
        let cyl = glue.apex.clone();
        let i = glue.legs[0].after(&j0);
        let q = glue.induced_to(y.clone(), &[down, f.clone(), SMap::identity(y.clone())]);
        Factorization { f: f.clone(), cyl, i, q, data: Arc::new(SCylinder { prod, interval, glue }) }
    }

    fn cylinder_map(&self, from: &Factorization<Self>, to: &Factorization<Self>, a: &SMap, b: &SMap) -> SMap {
        let (s, t) = (&from.data, &to.data);
        let id_i = SMap::new_unchecked(s.interval.clone(), t.interval.clone(), SMap::identity(s.interval.clone()).image().to_vec());
        let ab = product_map(&s.prod, &t.prod, a, &id_i);
        let cocone = [t.glue.legs[0].after(&ab), t.glue.legs[1].after(a), t.glue.legs[2].after(b)];
        s.glue.induced_to(to.cyl.clone(), &cocone)
    }

    fn size(&self, x: &Arc<SSet>) -> usize {
        x.len()
    }
}

/// Parse a value-category tag such as `chain:f2` or `sset:f3`.
pub fn parse_tag(tag: &str) -> Result<(String, u32)> {
    let (kind, rest) = tag.split_once(':').ok_or_else(|| Error::Invalid(format!("bad value category {tag}")))?;
    let p: u32 = rest
        .strip_prefix('f')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Invalid(format!("bad prime in value category {tag}")))?;
    match kind {
        "chain" | "sset" => Ok((kind.to_string(), p)),
        _ => Err(Error::Invalid(format!("unknown value category {kind}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::boundary;

    fn f2() -> ChainCat {
        ChainCat::new(2).unwrap()
    }

    #[test]
    fn chain_factorization_of_identity() {
        let v = f2();
        let x = Arc::new(ChainComplex::new(v.f, vec![1, 1], vec![crate::linalg::Mat::zero(1, 1)]).unwrap());
        let fac = v.factor_cof_we(&v.identity(&x));
        assert_eq!(fac.cyl.dims(), &[2, 3, 1]);
        assert!(v.is_cofibration(&fac.i));
        assert!(v.we_certificate(&fac.q).verdict);
        assert!(v.equal_morphisms(&v.compose(&fac.q, &fac.i), &v.identity(&x)));
    }

    #[test]
    fn chain_factorization_from_zero() {
        let v = f2();
        let c = Arc::new(ChainComplex::point(v.f));
        let fac = v.factor_cof_we(&v.from_initial(&c));
        assert!(v.is_iso(&fac.q));
    }

    #[test]
    fn sset_cylinder_of_boundary_inclusion() {
        let v = SSetCat::new(2).unwrap();
        let (d, idx) = standard(2);
        let d = Arc::new(d);
        let (b, bidx) = boundary(2).unwrap();
        let b = Arc::new(b);
        let image = (0..b.len() as u32).map(|s| idx.simplex(&bidx.verts(s)).unwrap()).collect();
        let inc = SMap::new(b.clone(), d.clone(), image).unwrap();
        let fac = v.factor_cof_we(&inc);
        assert_eq!(v.betti(&fac.cyl), vec![1]);
        assert!(v.is_cofibration(&fac.i));
        assert!(v.we_certificate(&fac.q).verdict);
        assert!(v.equal_morphisms(&v.compose(&fac.q, &fac.i), &inc));
        fac.q.check_faces().unwrap();
        fac.i.check_faces().unwrap();
    }

    #[test]
    fn sset_cylinder_map_of_identity_square() {
        let v = SSetCat::new(2).unwrap();
        let (b, _) = boundary(2).unwrap();
        let b = Arc::new(b);
        let f = SMap::identity(b.clone());
        let fac = v.factor_cof_we(&f);
        let m = v.cylinder_map(&fac, &fac, &f, &f);
        assert!(v.equal_morphisms(&m, &v.identity(&fac.cyl)));
    }

    #[test]
    fn tags_parse() {
        assert_eq!(parse_tag("chain:f3").unwrap(), ("chain".to_string(), 3));
        assert!(parse_tag("chain").is_err());
        assert!(parse_tag("top:f2").is_err());
    }
}
