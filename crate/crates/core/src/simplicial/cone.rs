use std::sync::Arc;

use super::{Op, SMap, SSet, Simplex};

/// CK with the apex as last vertex.  Ids: K's simplices keep their ids,
/// the apex is `apex`, and the join σ * e has id `apex + 1 + σ`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub space: Arc<SSet>,
    pub inclusion: SMap,
    pub apex: u32,
}

impl Cone {
    pub fn join(&self, s: u32) -> u32 {
        self.apex + 1 + s
    }
}

pub fn cone(k: &Arc<SSet>) -> Cone {
    let n = k.len() as u32;
    let apex = n;
    let mut dims: Vec<u8> = k.dims().to_vec();
    let mut faces: Vec<Vec<Simplex>> = (0..n).map(|s| k.faces_of(s).to_vec()).collect();
    dims.push(0);
    faces.push(vec![]);
    for s in 0..n {
        let d = k.dim(s);
        dims.push(d as u8 + 1);
        let mut fs = Vec::with_capacity(d + 2);
        if d == 0 {
            fs.push(Simplex::nondeg(apex, 0));
        } else {
            for i in 0..=d {
                let x = k.face_nd(s, i);
                // (b ∘ s) * e = (b * e) ∘ (s extended by the apex)
                let jumps = x.op.jumps() | 1 << (d - 1);
                fs.push(Simplex { base: apex + 1 + x.base, op: Op::from_jumps(d, jumps) });
            }
        }
        fs.push(Simplex::nondeg(s, d));
        faces.push(fs);
    }
    let space = Arc::new(SSet::from_parts_unchecked(dims, faces));
    let inclusion = SMap::new_unchecked(k.clone(), space.clone(), (0..n).map(|s| k.top(s)).collect());
    Cone { space, inclusion, apex }
}

/// K^op: the same simplices with vertex order reversed.
pub fn opposite(k: &SSet) -> SSet {
    let mut dims = Vec::with_capacity(k.len());
    let mut faces = Vec::with_capacity(k.len());
    for s in 0..k.len() as u32 {
        let d = k.dim(s);
        dims.push(d as u8);
        let fs = if d == 0 {
            vec![]
        } else {
            (0..=d)
                .map(|i| {
                    let x = k.face_nd(s, d - i);
                    Simplex { base: x.base, op: x.op.reversed() }
                })
                .collect()
        };
        faces.push(fs);
    }
    SSet::from_parts_unchecked(dims, faces)
}

/// f^op between the opposites.
pub fn opposite_map(f: &SMap, dom_op: Arc<SSet>, cod_op: Arc<SSet>) -> SMap {
    let image = f.image().iter().map(|y| Simplex { base: y.base, op: y.op.reversed() }).collect();
    SMap::new_unchecked(dom_op, cod_op, image)
}
