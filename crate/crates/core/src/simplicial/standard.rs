use std::collections::HashMap;
use std::sync::Arc;

use super::{epi_mono, Op, SMap, SSet, Simplex, Verts};
use crate::error::{Error, Result};

/// Lookup between vertex subsets of [n] and simplex ids of a subcomplex of Δ[n].
#[derive(Clone, Debug)]
pub struct DeltaIndex {
    pub n: usize,
    pub masks: Vec<u64>,
    id_of: HashMap<u64, u32>,
}

impl DeltaIndex {
    pub fn id(&self, mask: u64) -> Option<u32> {
        self.id_of.get(&mask).copied()
    }

    /// EZ form of the simplex with vertex sequence `verts` (monotone).
    pub fn simplex(&self, verts: &[u8]) -> Option<Simplex> {
        let (pi, image) = epi_mono(verts);
        let mask = image.iter().fold(0u64, |m, &v| m | 1 << v);
        self.id(mask).map(|b| Simplex { base: b, op: pi })
    }

    pub fn verts(&self, id: u32) -> Verts {
        mask_verts(self.masks[id as usize])
    }
}

pub(crate) fn mask_verts(mask: u64) -> Verts {
    (0..64u8).filter(|&v| mask >> v & 1 == 1).collect()
}

fn subsets_ordered(n: usize, keep: impl Fn(u64) -> bool) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 1..=n + 1 {
        let mut layer: Vec<u64> = super::combinations(n + 1, k).into_iter().filter(|&m| keep(m)).collect();
        layer.sort_by_key(|&m| mask_verts(m));
        out.extend(layer);
    }
    out
}

/// Subcomplex of Δ[n] spanned by the given vertex subsets (must be face-closed).
pub fn subcomplex_of_standard(n: usize, masks: Vec<u64>) -> Result<(SSet, DeltaIndex)> {
    let id_of: HashMap<u64, u32> = masks.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let mut dims = Vec::with_capacity(masks.len());
    let mut faces = Vec::with_capacity(masks.len());
    for &m in &masks {
        if m == 0 || m >> (n + 1) != 0 {
            return Err(Error::Invalid(format!("vertex set {m:#b} is not a simplex of Δ[{n}]")));
        }
        let v = mask_verts(m);
        let d = v.len() - 1;
        dims.push(d as u8);
        let mut fs = Vec::new();
        if d > 0 {
            for &x in v.iter() {
                let fm = m & !(1u64 << x);
                let id = id_of
                    .get(&fm)
                    .ok_or_else(|| Error::Invalid(format!("subcomplex is not closed under faces at {fm:#b}")))?;
                fs.push(Simplex::nondeg(*id, d - 1));
            }
        }
        faces.push(fs);
    }
    let k = SSet::from_parts_unchecked(dims, faces);
    Ok((k, DeltaIndex { n, masks, id_of }))
}

/// Δ[n]
pub fn standard(n: usize) -> (SSet, DeltaIndex) {
    subcomplex_of_standard(n, subsets_ordered(n, |_| true)).expect("standard simplex")
}

/// ∂Δ[n]
pub fn boundary(n: usize) -> Result<(SSet, DeltaIndex)> {
    let full = super::low_bits(n + 1);
    subcomplex_of_standard(n, subsets_ordered(n, |m| m != full))
}

/// The horn Δ[n, k]: the boundary with the face opposite vertex k removed.
pub fn horn(n: usize, k: usize) -> Result<(SSet, DeltaIndex)> {
    if k > n || n == 0 {
        return Err(Error::OutOfRange(format!("horn({n}, {k})")));
    }
    let full = super::low_bits(n + 1);
    let opposite = full & !(1u64 << k);
    subcomplex_of_standard(n, subsets_ordered(n, |m| m != full && m != opposite))
}

/// S^n = Δ[n]/∂Δ[n]: one vertex (id 0) and one n-cell (id 1).
pub fn sphere(n: usize) -> Result<SSet> {
    if n == 0 {
        return Err(Error::OutOfRange("sphere dimension must be at least 1".into()));
    }
    let dims = vec![0, n as u8];
    let faces = vec![vec![], vec![Simplex { base: 0, op: Op::constant(n - 1) }; n + 1]];
    Ok(SSet::from_parts_unchecked(dims, faces))
}

/// The quotient map Δ[n] → S^n.
pub fn sphere_quotient(n: usize) -> Result<SMap> {
    let (d, _) = standard(n);
    let s = Arc::new(sphere(n)?);
    let image = (0..d.len() as u32)
        .map(|b| {
            let dim = d.dim(b);
            if dim == n {
                Simplex::nondeg(1, n)
            } else {
                Simplex { base: 0, op: Op::constant(dim) }
            }
        })
        .collect();
    Ok(SMap::new_unchecked(Arc::new(d), s, image))
}

/// The map Δ[n] → K classifying a simplex x of dimension n.
pub fn yoneda(k: &Arc<SSet>, x: Simplex) -> SMap {
    let n = x.dim();
    let (d, idx) = standard(n);
    let image = (0..d.len() as u32).map(|b| k.apply(x, &idx.verts(b))).collect();
    SMap::new_unchecked(Arc::new(d), k.clone(), image)
}
