//! Finite simplicial sets in Eilenberg–Zilber form.
//!
//! A simplex is a pair (base, op): `base` names a non-degenerate simplex and
//! `op` is a monotone surjection onto its dimension, so the simplex is the
//! degeneracy `base ∘ op`.

mod colimit;
mod cone;
mod iso;
mod pairs;
mod standard;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use colimit::{colimit, SColimit};
pub use cone::{cone, opposite, opposite_map, Cone};
pub use iso::{find_iso, is_isomorphic};
pub use pairs::{product, product_map, pullback, PairSpace};
pub use standard::{boundary, horn, sphere, standard, sphere_quotient, subcomplex_of_standard, yoneda, DeltaIndex};

pub type Verts = SmallVec<[u8; 16]>;

/// Monotone surjection [m] ↠ [n]; bit k of `jumps` is set iff the value
/// increases between positions k and k+1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Op {
    m: u8,
    jumps: u64,
}

impl Op {
    pub fn identity(n: usize) -> Op {
        assert!(n < 64, "dimension too large");
        Op { m: n as u8, jumps: low_bits(n) }
    }

    /// The constant map [m] ↠ [0].
    pub fn constant(m: usize) -> Op {
        Op { m: m as u8, jumps: 0 }
    }

    /// The codegeneracy σ_j: [n+1] ↠ [n], hitting j twice.
    pub fn codegeneracy(n: usize, j: usize) -> Op {
        assert!(j <= n);
        Op { m: (n + 1) as u8, jumps: low_bits(n + 1) & !(1u64 << j) }
    }

    pub fn from_jumps(m: usize, jumps: u64) -> Op {
        debug_assert!(jumps & !low_bits(m) == 0);
        Op { m: m as u8, jumps }
    }

    pub fn from_values(v: &[u8]) -> Option<Op> {
        if v.is_empty() || v[0] != 0 {
            return None;
        }
        let mut jumps = 0u64;
        for k in 0..v.len() - 1 {
            match v[k + 1].checked_sub(v[k]) {
                Some(0) => {}
                Some(1) => jumps |= 1 << k,
                _ => return None,
            }
        }
        Some(Op { m: (v.len() - 1) as u8, jumps })
    }

    pub fn src_dim(self) -> usize {
        self.m as usize
    }

    pub fn tgt_dim(self) -> usize {
        self.jumps.count_ones() as usize
    }

    pub fn jumps(self) -> u64 {
        self.jumps
    }

    pub fn is_identity(self) -> bool {
        self.tgt_dim() == self.src_dim()
    }

    pub fn values(self) -> Verts {
        let mut out = Verts::new();
        let mut v = 0u8;
        out.push(0);
        for k in 0..self.m {
            if self.jumps >> k & 1 == 1 {
                v += 1;
            }
            out.push(v);
        }
        out
    }

    /// self ∘ t
    pub fn compose(self, t: Op) -> Op {
        assert_eq!(t.tgt_dim(), self.src_dim(), "composing incompatible surjections");
        let sv = self.values();
        let tv = t.values();
        let v: Verts = tv.iter().map(|&k| sv[k as usize]).collect();
        Op::from_values(&v).expect("composite of surjections")
    }

    /// Whether op = op' ∘ σ_j for some op', i.e. positions j and j+1 collide.
    pub fn collapses(self, j: usize) -> bool {
        j < self.m as usize && self.jumps >> j & 1 == 0
    }

    /// Drop the positions in `mask` (all of which must be non-jumps).
    pub fn remove_positions(self, mask: u64) -> Op {
        debug_assert!(self.jumps & mask == 0);
        let mut jumps = 0u64;
        let mut out = 0;
        for k in 0..self.m as u32 {
            if mask >> k & 1 == 1 {
                continue;
            }
            if self.jumps >> k & 1 == 1 {
                jumps |= 1 << out;
            }
            out += 1;
        }
        Op { m: out as u8, jumps }
    }

    /// The surjection reversed end to end, used by opposites.
    pub fn reversed(self) -> Op {
        let m = self.m as u32;
        let mut jumps = 0u64;
        for k in 0..m {
            if self.jumps >> k & 1 == 1 {
                jumps |= 1 << (m - 1 - k);
            }
        }
        Op { m: self.m, jumps }
    }

    pub fn all(m: usize, n: usize) -> Vec<Op> {
        combinations(m, n).into_iter().map(|j| Op { m: m as u8, jumps: j }).collect()
    }
}

/// All bitmasks over `m` positions with exactly `k` bits set, in increasing order.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    fn rec(pos: usize, m: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        if m - pos < left {
            return;
        }
        rec(pos + 1, m, left - 1, acc | 1 << pos, out);
        rec(pos + 1, m, left, acc, out);
    }
    rec(0, m, k, 0, &mut out);
    out.sort_unstable();
    out
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Ord for Op {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.jumps.reverse_bits()).cmp(&(other.m, other.jumps.reverse_bits()))
    }
}

impl PartialOrd for Op {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values().as_slice())
    }
}

/// A simplex in EZ form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub base: u32,
    pub op: Op,
}

impl Simplex {
    pub fn nondeg(base: u32, dim: usize) -> Simplex {
        Simplex { base, op: Op::identity(dim) }
    }

    pub fn dim(self) -> usize {
        self.op.src_dim()
    }

    pub fn is_nondegenerate(self) -> bool {
        self.op.is_identity()
    }

    /// Precompose with a surjection t: the simplex `self ∘ t`.
    pub fn degen(self, t: Op) -> Simplex {
        Simplex { base: self.base, op: self.op.compose(t) }
    }

    /// s_j of this simplex.
    pub fn s(self, j: usize) -> Simplex {
        self.degen(Op::codegeneracy(self.dim(), j))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_identity() {
            write!(f, "#{}", self.base)
        } else {
            write!(f, "#{}{:?}", self.base, self.op)
        }
    }
}

/// Finite simplicial set given by its non-degenerate simplices and face table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SSet {
    dims: Vec<u8>,
    faces: Vec<Vec<Simplex>>,
    by_dim: Vec<Vec<u32>>,
}

impl fmt::Debug for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SSet{:?}", self.counts())
    }
}

/// Split an injective monotone list of vertices: the largest index of [n] it misses.
fn missing(verts: &[u8], n: usize) -> Option<usize> {
    if verts.len() == n + 1 {
        return None;
    }
    let mut k = verts.len();
    let mut v = n as isize;
    while v >= 0 {
        if k > 0 && verts[k - 1] as isize == v {
            k -= 1;
            v -= 1;
        } else {
            return Some(v as usize);
        }
    }
    unreachable!()
}

impl SSet {
    pub fn empty() -> SSet {
        SSet { dims: vec![], faces: vec![], by_dim: vec![] }
    }

    pub fn point() -> SSet {
        SSet::from_parts_unchecked(vec![0], vec![vec![]])
    }

    /// Validating constructor.
    pub fn new(dims: Vec<u8>, faces: Vec<Vec<Simplex>>) -> Result<SSet> {
        if dims.len() != faces.len() {
            return Err(Error::Invalid("dims and faces have different lengths".into()));
        }
        for (s, (&d, fs)) in dims.iter().zip(&faces).enumerate() {
            let expected = if d == 0 { 0 } else { d as usize + 1 };
            if fs.len() != expected {
                return Err(Error::Invalid(format!("simplex {s} of dim {d} has {} faces", fs.len())));
            }
            for (i, x) in fs.iter().enumerate() {
                let b = x.base as usize;
                if b >= dims.len() {
                    return Err(Error::Dangling(format!("face {s}:{i} refers to simplex {b}")));
                }
                if x.dim() + 1 != d as usize || x.op.tgt_dim() != dims[b] as usize {
                    return Err(Error::Invalid(format!("face {s}:{i} has the wrong dimension")));
                }
                if dims[b] >= d {
                    return Err(Error::Invalid(format!("face {s}:{i} is not of lower dimension")));
                }
            }
        }
        let k = SSet::from_parts_unchecked(dims, faces);
        k.check_identities()?;
        Ok(k)
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<u8>, faces: Vec<Vec<Simplex>>) -> SSet {
        let top = dims.iter().copied().max().map_or(0, |d| d as usize + 1);
        let mut by_dim = vec![Vec::new(); top];
        for (s, &d) in dims.iter().enumerate() {
            by_dim[d as usize].push(s as u32);
        }
        SSet { dims, faces, by_dim }
    }

    /// Verify d_i d_j = d_{j-1} d_i on every non-degenerate simplex.
    pub fn check_identities(&self) -> Result<()> {
        for s in 0..self.len() {
            let n = self.dim(s as u32);
            if n < 2 {
                continue;
            }
            for j in 1..=n {
                for i in 0..j {
                    let a = self.face(self.faces[s][j], i);
                    let b = self.face(self.faces[s][i], j - 1);
                    if a != b {
                        return Err(Error::Invalid(format!(
                            "simplicial identity fails at simplex {s}, i={i}, j={j}: {a:?} vs {b:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, s: u32) -> usize {
        self.dims[s as usize] as usize
    }

    pub fn dims(&self) -> &[u8] {
        &self.dims
    }

    /// Maximal dimension, or None for the empty space.
    pub fn max_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn of_dim(&self, d: usize) -> &[u32] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    /// Count of non-degenerate simplices per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }

    /// Stored face d_i of a non-degenerate simplex.
    pub fn face_nd(&self, s: u32, i: usize) -> Simplex {
        self.faces[s as usize][i]
    }

    pub fn faces_of(&self, s: u32) -> &[Simplex] {
        &self.faces[s as usize]
    }

    pub fn top(&self, s: u32) -> Simplex {
        Simplex::nondeg(s, self.dim(s))
    }

    /// The simplex `base ∘ ι` for an injective vertex list ι into [dim base].
    pub fn restrict(&self, base: u32, verts: &[u8]) -> Simplex {
        let n = self.dim(base);
        match missing(verts, n) {
            None => Simplex::nondeg(base, n),
            Some(i) => {
                let next: Verts = verts.iter().map(|&v| if v as usize > i { v - 1 } else { v }).collect();
                self.apply(self.faces[base as usize][i], &next)
            }
        }
    }

    /// Apply a monotone operator θ: [k] → [dim x], given by its values.
    pub fn apply(&self, x: Simplex, theta: &[u8]) -> Simplex {
        let sv = x.op.values();
        let comp: Verts = theta.iter().map(|&k| sv[k as usize]).collect();
        let (pi, image) = epi_mono(&comp);
        let y = self.restrict(x.base, &image);
        y.degen(pi)
    }

    /// d_i x in EZ form.
    pub fn face(&self, x: Simplex, i: usize) -> Simplex {
        let n = x.dim();
        assert!(n >= 1 && i <= n, "face index out of range");
        if x.op.is_identity() {
            return self.faces[x.base as usize][i];
        }
        let theta: Verts = (0..=n as u8).filter(|&k| k as usize != i).collect();
        self.apply(x, &theta)
    }

    /// Checked variant of [`SSet::face`].
    pub fn normalize_face(&self, x: Simplex, i: usize) -> Result<Simplex> {
        if x.base as usize >= self.len() || x.op.tgt_dim() != self.dim(x.base) {
            return Err(Error::OutOfRange(format!("{x:?} is not a simplex here")));
        }
        if x.dim() == 0 || i > x.dim() {
            return Err(Error::OutOfRange(format!("face {i} of a {}-simplex", x.dim())));
        }
        Ok(self.face(x, i))
    }

    /// Every simplex of degree q, ordered by (base, op).
    pub fn simplices_in_degree(&self, q: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for b in 0..self.len() as u32 {
            let r = self.dim(b);
            if r <= q {
                for op in Op::all(q, r) {
                    out.push(Simplex { base: b, op });
                }
            }
        }
        out
    }

    /// Relabel non-degenerate simplices: `perm[old] = new`.  The permutation
    /// must keep faces pointing at lower ids only in the sense of dimension,
    /// which any permutation does.
    pub fn relabel(&self, perm: &[u32]) -> SSet {
        let n = self.len();
        let mut dims = vec![0u8; n];
        let mut faces = vec![Vec::new(); n];
        for old in 0..n {
            let new = perm[old] as usize;
            dims[new] = self.dims[old];
            faces[new] = self.faces[old]
                .iter()
                .map(|x| Simplex { base: perm[x.base as usize], op: x.op })
                .collect();
        }
        SSet::from_parts_unchecked(dims, faces)
    }

    /// Disjoint union.
    pub fn coproduct(parts: &[&SSet]) -> SSet {
        let mut dims = Vec::new();
        let mut faces = Vec::new();
        for p in parts {
            let off = dims.len() as u32;
            dims.extend_from_slice(&p.dims);
            faces.extend(p.faces.iter().map(|fs| {
                fs.iter().map(|x| Simplex { base: x.base + off, op: x.op }).collect::<Vec<_>>()
            }));
        }
        SSet::from_parts_unchecked(dims, faces)
    }
}

/// Factor a monotone map given by values into (surjection, image list).
pub fn epi_mono(values: &[u8]) -> (Op, Verts) {
    let mut image = Verts::new();
    let mut jumps = 0u64;
    for (k, &v) in values.iter().enumerate() {
        if image.last() != Some(&v) {
            if k > 0 {
                jumps |= 1 << (k - 1);
            }
            image.push(v);
        }
    }
    (Op::from_jumps(values.len() - 1, jumps), image)
}

/// Simplicial map stored by the images of non-degenerate simplices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SMap {
    pub dom: Arc<SSet>,
    pub cod: Arc<SSet>,
    image: Vec<Simplex>,
}

impl fmt::Debug for SMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SMap({:?} -> {:?}: {:?})", self.dom, self.cod, self.image)
    }
}

pub(crate) fn same_space(a: &Arc<SSet>, b: &Arc<SSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SMap {
    pub fn new(dom: Arc<SSet>, cod: Arc<SSet>, image: Vec<Simplex>) -> Result<SMap> {
        if image.len() != dom.len() {
            return Err(Error::Invalid("map must give one image per non-degenerate simplex".into()));
        }
        for (s, y) in image.iter().enumerate() {
            if y.base as usize >= cod.len() {
                return Err(Error::Dangling(format!("image of {s} refers to simplex {}", y.base)));
            }
            if y.dim() != dom.dim(s as u32) || y.op.tgt_dim() != cod.dim(y.base) {
                return Err(Error::Invalid(format!("image of {s} has the wrong dimension")));
            }
        }
        let f = SMap { dom, cod, image };
        f.check_faces()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(dom: Arc<SSet>, cod: Arc<SSet>, image: Vec<Simplex>) -> SMap {
        SMap { dom, cod, image }
    }

    pub fn check_faces(&self) -> Result<()> {
        for s in 0..self.dom.len() as u32 {
            let n = self.dom.dim(s);
            if n == 0 {
                continue;
            }
            for i in 0..=n {
                let a = self.map(self.dom.face_nd(s, i));
                let b = self.cod.face(self.image[s as usize], i);
                if a != b {
                    return Err(Error::Invalid(format!(
                        "map does not commute with face {i} of simplex {s}: {a:?} vs {b:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(k: Arc<SSet>) -> SMap {
        let image = (0..k.len() as u32).map(|s| k.top(s)).collect();
        SMap { dom: k.clone(), cod: k, image }
    }

    /// The unique map out of the empty space.
    pub fn from_empty(cod: Arc<SSet>) -> SMap {
        SMap { dom: Arc::new(SSet::empty()), cod, image: vec![] }
    }

    pub fn image(&self) -> &[Simplex] {
        &self.image
    }

    pub fn image_of(&self, s: u32) -> Simplex {
        self.image[s as usize]
    }

    pub fn map(&self, x: Simplex) -> Simplex {
        let y = self.image[x.base as usize];
        Simplex { base: y.base, op: y.op.compose(x.op) }
    }

    /// self ∘ g
    pub fn after(&self, g: &SMap) -> SMap {
        assert!(same_space(&g.cod, &self.dom), "composing non-composable maps");
        SMap { dom: g.dom.clone(), cod: self.cod.clone(), image: g.image.iter().map(|&x| self.map(x)).collect() }
    }

    pub fn is_reduced(&self) -> bool {
        self.image.iter().all(|y| y.op.is_identity())
    }

    pub fn is_mono(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        let mut seen = vec![false; self.cod.len()];
        for y in &self.image {
            if std::mem::replace(&mut seen[y.base as usize], true) {
                return false;
            }
        }
        true
    }

    pub fn is_epi(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for y in &self.image {
            if y.op.is_identity() {
                hit[y.base as usize] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn inverse(&self) -> Option<SMap> {
        if !self.is_iso() {
            return None;
        }
        let mut image = vec![Simplex::nondeg(0, 0); self.cod.len()];
        for (s, y) in self.image.iter().enumerate() {
            image[y.base as usize] = self.dom.top(s as u32);
        }
        Some(SMap { dom: self.cod.clone(), cod: self.dom.clone(), image })
    }

    /// Same map with a different (equal) codomain handle.
    pub fn with_cod(&self, cod: Arc<SSet>) -> SMap {
        debug_assert!(same_space(&self.cod, &cod));
        SMap { dom: self.dom.clone(), cod, image: self.image.clone() }
    }

    pub fn with_dom(&self, dom: Arc<SSet>) -> SMap {
        debug_assert!(same_space(&self.dom, &dom));
        SMap { dom, cod: self.cod.clone(), image: self.image.clone() }
    }

    /// Restrict along a map into the domain: self ∘ g.
    pub fn restrict(&self, g: &SMap) -> SMap {
        self.after(g)
    }
}
