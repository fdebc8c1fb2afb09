//! Bounded chain complexes over F_p, their maps, homology and colimits.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Fp, Mat, Reducer, SparseVec};
use crate::simplicial::{SMap, SSet};

/// Non-negatively graded chain complex; `d[k]` maps degree k+1 to degree k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    f: Fp,
    dims: Vec<usize>,
    d: Vec<Mat>,
}

impl ChainComplex {
    pub fn new(f: Fp, mut dims: Vec<usize>, mut d: Vec<Mat>) -> Result<ChainComplex> {
        if d.len() + 1 != dims.len() && !(dims.is_empty() && d.is_empty()) {
            return Err(Error::Invalid(format!("{} degrees need {} differentials", dims.len(), dims.len().saturating_sub(1))));
        }
        for (k, m) in d.iter().enumerate() {
            if m.rows != dims[k] || m.cols != dims[k + 1] {
                return Err(Error::Invalid(format!("differential {k} has shape {}x{}", m.rows, m.cols)));
            }
        }
        for k in 0..d.len().saturating_sub(1) {
            if !d[k].mul(f, &d[k + 1]).is_zero() {
                return Err(Error::Invalid(format!("d∘d is nonzero out of degree {}", k + 2)));
            }
        }
        while dims.last() == Some(&0) {
            dims.pop();
            d.pop();
        }
        Ok(ChainComplex { f, dims, d })
    }

    pub fn zero(f: Fp) -> ChainComplex {
        ChainComplex { f, dims: vec![], d: vec![] }
    }

    /// F_p concentrated in degree 0.
    pub fn point(f: Fp) -> ChainComplex {
        ChainComplex { f, dims: vec![1], d: vec![] }
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    /// Number of stored degrees (one past the top nonzero degree).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The differential out of degree k+1, with zero padding outside the range.
    pub fn d(&self, k: usize) -> Mat {
        match self.d.get(k) {
            Some(m) => m.clone(),
            None => Mat::zero(self.dim(k), self.dim(k + 1)),
        }
    }

    pub fn d_ref(&self, k: usize) -> Option<&Mat> {
        self.d.get(k)
    }

    /// Apply the differential to a vector of degree k (k ≥ 1).
    pub fn boundary(&self, k: usize, v: &SparseVec) -> SparseVec {
        match k.checked_sub(1).and_then(|j| self.d.get(j)) {
            Some(m) => m.apply(self.f, v),
            None => SparseVec::zero(),
        }
    }

    pub fn homology(&self) -> Homology {
        Homology::of(self)
    }

    pub fn betti(&self) -> Vec<usize> {
        let mut b = Vec::with_capacity(self.len());
        let ranks: Vec<usize> = self.d.iter().map(|m| m.rank(self.f)).collect();
        for k in 0..self.len() {
            let out = if k == 0 { 0 } else { ranks[k - 1] };
            let inc = ranks.get(k).copied().unwrap_or(0);
            b.push(self.dims[k] - out - inc);
        }
        trim(b)
    }

    /// Normalized chains of a simplicial set.
    pub fn of_sset(k: &SSet, f: Fp) -> ChainComplex {
        let pos = positions(k);
        let top = k.max_dim().map_or(0, |d| d + 1);
        let dims: Vec<usize> = (0..top).map(|q| k.of_dim(q).len()).collect();
        let mut d = Vec::new();
        for q in 1..top {
            let cols = k
                .of_dim(q)
                .iter()
                .map(|&s| {
                    let mut v = SparseVec::zero();
                    for i in 0..=q {
                        let x = k.face_nd(s, i);
                        if x.is_nondegenerate() {
                            let c = if i % 2 == 0 { 1 } else { f.neg(1) };
                            v = v.axpy(f, c, &SparseVec::unit(pos[x.base as usize]));
                        }
                    }
                    v
                })
                .collect();
            d.push(Mat::from_cols(dims[q - 1], cols));
        }
        ChainComplex { f, dims, d }
    }
}

fn trim(mut b: Vec<usize>) -> Vec<usize> {
    while b.last() == Some(&0) {
        b.pop();
    }
    b
}

/// Position of each non-degenerate simplex inside its dimension layer.
pub fn positions(k: &SSet) -> Vec<usize> {
    let mut pos = vec![0; k.len()];
    for d in 0..=k.max_dim().unwrap_or(0) {
        for (i, &s) in k.of_dim(d).iter().enumerate() {
            pos[s as usize] = i;
        }
    }
    pos
}

/// Chain map given degreewise; `m[k]` maps src_k to tgt_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainMap {
    pub src: Arc<ChainComplex>,
    pub tgt: Arc<ChainComplex>,
    m: Vec<Mat>,
}

impl ChainMap {
    pub fn new(src: Arc<ChainComplex>, tgt: Arc<ChainComplex>, mut m: Vec<Mat>) -> Result<ChainMap> {
        if src.f != tgt.f {
            return Err(Error::Mismatch("chain map between different primes".into()));
        }
        m.truncate(src.len());
        while m.len() < src.len() {
            let k = m.len();
            m.push(Mat::zero(tgt.dim(k), src.dim(k)));
        }
        for (k, a) in m.iter().enumerate() {
            if a.rows != tgt.dim(k) || a.cols != src.dim(k) {
                return Err(Error::Invalid(format!("component {k} has shape {}x{}", a.rows, a.cols)));
            }
        }
        let f = ChainMap { src, tgt, m };
        f.check()?;
        Ok(f)
    }


    fn check(&self) -> Result<()> {
        let f = self.src.f;
        for k in 0..self.src.len().saturating_sub(1) {
            let lhs = self.tgt.d(k).mul(f, &self.m[k + 1]);
            let rhs = self.m[k].mul(f, &self.src.d(k));
            if lhs != rhs {
                return Err(Error::Invalid(format!("map does not commute with d in degree {}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Fp {
        self.src.f
    }

    pub fn component(&self, k: usize) -> Mat {
        match self.m.get(k) {
            Some(a) => a.clone(),
            None => Mat::zero(self.tgt.dim(k), self.src.dim(k)),
        }
    }

    pub fn components(&self) -> &[Mat] {
        &self.m
    }

    pub fn apply(&self, k: usize, v: &SparseVec) -> SparseVec {
        match self.m.get(k) {
            Some(a) => a.apply(self.field(), v),
            None => SparseVec::zero(),
        }
    }

    pub fn identity(c: Arc<ChainComplex>) -> ChainMap {
        let m = c.dims.iter().map(|&n| Mat::identity(n)).collect();
        ChainMap { src: c.clone(), tgt: c, m }
    }

    pub fn zero(src: Arc<ChainComplex>, tgt: Arc<ChainComplex>) -> ChainMap {
        let m = (0..src.len()).map(|k| Mat::zero(tgt.dim(k), src.dim(k))).collect();
        ChainMap { src, tgt, m }
    }

    /// self ∘ g
    pub fn after(&self, g: &ChainMap) -> ChainMap {
        let f = self.field();
        let m = (0..g.src.len()).map(|k| self.component(k).mul(f, &g.m[k])).collect();
        ChainMap { src: g.src.clone(), tgt: self.tgt.clone(), m }
    }

    pub fn is_injective(&self) -> bool {
        let f = self.field();
        self.m.iter().all(|a| a.rank(f) == a.cols)
    }

    pub fn is_iso(&self) -> bool {
        let f = self.field();
        self.src.len() == self.tgt.len() && self.m.iter().all(|a| a.is_invertible(f))
    }

    pub fn inverse(&self) -> Option<ChainMap> {
        if !self.is_iso() {
            return None;
        }
        let f = self.field();
        let m = self.m.iter().map(|a| a.inverse(f).expect("invertible")).collect();
        Some(ChainMap { src: self.tgt.clone(), tgt: self.src.clone(), m })
    }

    /// Map induced on normalized chains.
    pub fn of_smap(g: &SMap, src: Arc<ChainComplex>, tgt: Arc<ChainComplex>) -> ChainMap {
        let pc = positions(&g.cod);
        let m = (0..src.len())
            .map(|q| {
                let cols = g
                    .dom
                    .of_dim(q)
                    .iter()
                    .map(|&s| {
                        let y = g.image_of(s);
                        if y.is_nondegenerate() {
                            SparseVec::unit(pc[y.base as usize])
                        } else {
                            SparseVec::zero()
                        }
                    })
                    .collect();
                Mat::from_cols(tgt.dim(q), cols)
            })
            .collect();
        ChainMap { src, tgt, m }
    }

    pub fn homology_matrices(&self, hs: &Homology, ht: &Homology) -> Vec<Mat> {
        let top = hs.betti.len().max(ht.betti.len());
        (0..top)
            .map(|n| {
                let cols = hs
                    .reps(n)
                    .iter()
                    .map(|z| ht.classify(n, &self.apply(n, z)).expect("chain maps send cycles to cycles"))
                    .collect();
                Mat::from_cols(ht.betti(n), cols)
            })
            .collect()
    }

    pub fn we_certificate(&self) -> WeCertificate {
        let hs = self.src.homology();
        let ht = self.tgt.homology();
        let mats = self.homology_matrices(&hs, &ht);
        let verdict = mats.iter().all(|a| a.is_invertible(self.field()));
        WeCertificate { src_betti: trim(hs.betti.clone()), tgt_betti: trim(ht.betti.clone()), matrices: mats, verdict }
    }
}

/// Homology with chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub betti: Vec<usize>,
    reps: Vec<Vec<SparseVec>>,
    reducers: Vec<Reducer>,
}

impl Homology {
    pub fn of(c: &ChainComplex) -> Homology {
        let f = c.f;
        let mut betti = Vec::new();
        let mut reps = Vec::new();
        let mut reducers = Vec::new();
        for n in 0..c.len() {
            let mut r = Reducer::new(f, true);
            if let Some(dn) = c.d.get(n) {
                for col in &dn.data {
                    r.insert(col, Some(SparseVec::zero()));
                }
            }
            let cycles: Vec<SparseVec> = match n.checked_sub(1).and_then(|j| c.d.get(j)) {
                Some(m) => m.kernel(f),
                None => (0..c.dims[n]).map(SparseVec::unit).collect(),
            };
            let mut hs = Vec::new();
            for z in cycles {
                if r.insert_tracked(&z, SparseVec::unit(hs.len())).is_ok() {
                    hs.push(z);
                }
            }
            betti.push(hs.len());
            reps.push(hs);
            reducers.push(r);
        }
        Homology { betti, reps, reducers }
    }

    pub fn betti(&self, n: usize) -> usize {
        self.betti.get(n).copied().unwrap_or(0)
    }

    pub fn reps(&self, n: usize) -> &[SparseVec] {
        self.reps.get(n).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates of the class of a cycle in the chosen basis.
    pub fn classify(&self, n: usize, z: &SparseVec) -> Option<SparseVec> {
        match self.reducers.get(n) {
            Some(r) => r.solve(z),
            None => z.is_zero().then(SparseVec::zero),
        }
    }

    pub fn table(&self) -> Vec<usize> {
        trim(self.betti.clone())
    }
}

/// Outcome of testing a morphism for being a homology isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeCertificate {
    pub src_betti: Vec<usize>,
    pub tgt_betti: Vec<usize>,
    pub matrices: Vec<Mat>,
    pub verdict: bool,
}

/// Colimit of a finite graph of chain complexes.
#[derive(Clone, Debug)]
pub struct CColimit {
    pub apex: Arc<ChainComplex>,
    pub legs: Vec<ChainMap>,
    /// Per degree and apex basis vector: (input index, basis index there).
    pub reps: Vec<Vec<(usize, usize)>>,
}

pub fn colimit(f: Fp, objects: &[Arc<ChainComplex>], arrows: &[(usize, usize, &ChainMap)]) -> Result<CColimit> {
    for (a, &(s, t, m)) in arrows.iter().enumerate() {
        if s >= objects.len() || t >= objects.len() {
            return Err(Error::OutOfRange(format!("arrow {a} refers to a missing object")));
        }
        if m.src.dims != objects[s].dims || m.tgt.dims != objects[t].dims {
            return Err(Error::Mismatch(format!("arrow {a} does not match its endpoints")));
        }
    }
    let len = objects.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut reducers = Vec::with_capacity(len);
    let mut offsets = Vec::with_capacity(len);
    let mut new_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(len);
    let mut reps = Vec::with_capacity(len);
    for n in 0..len {
        let mut off = Vec::with_capacity(objects.len() + 1);
        let mut total = 0;
        for c in objects {
            off.push(total);
            total += c.dim(n);
        }
        off.push(total);
        let mut r = Reducer::new(f, false);
        for &(s, t, m) in arrows {
            for j in 0..objects[s].dim(n) {
                let img = m.apply(n, &SparseVec::unit(j)).shifted(off[t]);
                let rel = SparseVec::unit(off[s] + j).axpy(f, f.neg(1), &img);
                r.insert(&rel, None);
            }
        }
        let mut idx = vec![None; total];
        let mut rp = Vec::new();
        for g in 0..total {
            if !r.has_pivot(g) {
                idx[g] = Some(rp.len());
                let k = off.partition_point(|&o| o <= g) - 1;
                rp.push((k, g - off[k]));
            }
        }
        reducers.push(r);
        offsets.push(off);
        new_index.push(idx);
        reps.push(rp);
    }
    let project = |n: usize, v: &SparseVec| -> SparseVec {
        let w = reducers[n].reduce_full(v);
        let mut out: Vec<(u32, u32)> = w.0.iter().map(|&(g, x)| (new_index[n][g as usize].expect("free index") as u32, x)).collect();
        out.sort_unstable();
        SparseVec(out)
    };
    let mut dims: Vec<usize> = reps.iter().map(|r| r.len()).collect();
    let mut d = Vec::new();
    for n in 0..len.saturating_sub(1) {
        let cols = reps[n + 1]
            .iter()
            .map(|&(k, j)| {
                let v = objects[k].d(n).data[j].shifted(offsets[n][k]);
                project(n, &v)
            })
            .collect();
        d.push(Mat::from_cols(dims[n], cols));
    }
    while dims.last() == Some(&0) {
        dims.pop();
        d.pop();
    }
    let apex = Arc::new(ChainComplex { f, dims, d });
    let legs = objects
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let m = (0..c.len())
                .map(|n| {
                    let cols = (0..c.dim(n)).map(|j| project(n, &SparseVec::unit(offsets[n][k] + j))).collect();
                    Mat::from_cols(apex.dim(n), cols)
                })
                .collect();
            ChainMap { src: c.clone(), tgt: apex.clone(), m }
        })
        .collect();
    reps.truncate(apex.len());
    Ok(CColimit { apex, legs, reps })
}

impl CColimit {
    /// The map out of the apex determined by a cocone into `tgt`.
    pub fn induced(&self, tgt: Arc<ChainComplex>, cocone: &[ChainMap]) -> ChainMap {
        let m = (0..self.apex.len())
            .map(|n| {
                let cols = self.reps[n].iter().map(|&(k, j)| cocone[k].apply(n, &SparseVec::unit(j))).collect();
                Mat::from_cols(tgt.dim(n), cols)
            })
            .collect();
        ChainMap { src: self.apex.clone(), tgt, m }
    }
}

/// Mapping cylinder of f: X → Y with its inclusion and projection.
pub fn cylinder(g: &ChainMap) -> (Arc<ChainComplex>, ChainMap, ChainMap) {
    let f = g.field();
    let (x, y) = (&g.src, &g.tgt);
    let len = (if x.is_empty() { 0 } else { x.len() + 1 }).max(y.len());
    let dim = |n: usize| x.dim(n) + n.checked_sub(1).map_or(0, |m| x.dim(m)) + y.dim(n);
    let dims: Vec<usize> = (0..len).map(dim).collect();
    let mut d = Vec::new();
    for n in 0..len.saturating_sub(1) {
        // columns of Cyl_{n+1} = X_{n+1} ⊕ X_n ⊕ Y_{n+1}; rows of Cyl_n = X_n ⊕ X_{n-1} ⊕ Y_n
        let (a0, a1) = (x.dim(n), n.checked_sub(1).map_or(0, |m| x.dim(m)));
        let mut cols = Vec::with_capacity(dims[n + 1]);
        let dx = x.d(n);
        for j in 0..x.dim(n + 1) {
            cols.push(dx.data[j].clone());
        }
        let dxm = n.checked_sub(1).map(|m| x.d(m));
        let gn = g.component(n);
        for j in 0..x.dim(n) {
            let mut v = SparseVec::unit(j);
            if let Some(dm) = &dxm {
                v = v.axpy(f, f.neg(1), &dm.data[j].shifted(a0));
            }
            v = v.axpy(f, f.neg(1), &gn.data[j].shifted(a0 + a1));
            cols.push(v);
        }
        let dy = y.d(n);
        for j in 0..y.dim(n + 1) {
            cols.push(dy.data[j].shifted(a0 + a1));
        }
        d.push(Mat::from_cols(dims[n], cols));
    }
    let cyl = Arc::new(ChainComplex::new(f, dims, d).expect("cylinder differential squares to zero"));
    let inc = (0..x.len())
        .map(|n| {
            let cols = (0..x.dim(n)).map(SparseVec::unit).collect();
            Mat::from_cols(cyl.dim(n), cols)
        })
        .collect();
    let proj = (0..cyl.len())
        .map(|n| {
            let a1 = n.checked_sub(1).map_or(0, |m| x.dim(m));
            let gn = g.component(n);
            let mut cols: Vec<SparseVec> = gn.data.clone();
            cols.extend(std::iter::repeat(SparseVec::zero()).take(a1));
            cols.extend((0..y.dim(n)).map(SparseVec::unit));
            Mat::from_cols(y.dim(n), cols)
        })
        .collect();
    let i = ChainMap { src: x.clone(), tgt: cyl.clone(), m: inc };
    let q = ChainMap { src: cyl.clone(), tgt: y.clone(), m: proj };
    (cyl, i, q)
}

/// The map Cyl(f) → Cyl(f') induced by a commuting square (a, b): a⊕a⊕b.
pub fn cylinder_map(a: &ChainMap, b: &ChainMap, cyl: &Arc<ChainComplex>, cyl2: &Arc<ChainComplex>) -> ChainMap {
    let m = (0..cyl.len())
        .map(|n| {
            let a_prev = n.checked_sub(1).map(|m| a.component(m)).unwrap_or_else(|| Mat::zero(0, 0));
            let blk = Mat::block_diag(&[&a.component(n), &a_prev, &b.component(n)]);
            debug_assert_eq!(blk.rows, cyl2.dim(n));
            blk
        })
        .collect();
    ChainMap { src: cyl.clone(), tgt: cyl2.clone(), m }
}

/// Direct sum with inclusions.
pub fn direct_sum(f: Fp, parts: &[Arc<ChainComplex>]) -> Arc<ChainComplex> {
    let len = parts.iter().map(|c| c.len()).max().unwrap_or(0);
    let dims: Vec<usize> = (0..len).map(|n| parts.iter().map(|c| c.dim(n)).sum()).collect();
    let d = (0..len.saturating_sub(1))
        .map(|n| {
            let blocks: Vec<Mat> = parts.iter().map(|c| c.d(n)).collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            Mat::block_diag(&refs)
        })
        .collect();
    Arc::new(ChainComplex::new(f, dims, d).expect("sum of complexes"))
}

/// Betti numbers of a simplicial set over F_p.
pub fn sset_homology(k: &SSet, f: Fp) -> Vec<usize> {
    ChainComplex::of_sset(k, f).betti()
}

/// Induced maps on F_p homology together with the isomorphism verdict.
pub fn induced_homology(g: &SMap, f: Fp) -> WeCertificate {
    let src = Arc::new(ChainComplex::of_sset(&g.dom, f));
    let tgt = Arc::new(ChainComplex::of_sset(&g.cod, f));
    ChainMap::of_smap(g, src, tgt).we_certificate()
}
