use std::collections::HashMap;
use std::sync::Arc;

use super::{combinations, low_bits, same_space, Op, SMap, SSet, Simplex};
use crate::error::{Error, Result};

/// A sub-simplicial set of a product L × A, with its two projections.
#[derive(Clone, Debug)]
pub struct PairSpace {
    pub space: Arc<SSet>,
    pub pr1: SMap,
    pub pr2: SMap,
    keys: Vec<(u32, u32, Op, Op)>,
    index: HashMap<(u32, u32, Op, Op), u32>,
}

/// Jointly non-degenerate pairs of surjections out of [q] with targets [r], [u].
fn shuffle_pairs(r: usize, u: usize) -> Vec<(Op, Op)> {
    let mut out = Vec::new();
    for q in r.max(u)..=r + u {
        let all = low_bits(q);
        for s in combinations(q, r) {
            // t must cover every position s misses, plus some of s's own jumps
            let forced = all & !s;
            let extra = u - forced.count_ones() as usize;
            let s_bits: Vec<u32> = (0..q as u32).filter(|&k| s >> k & 1 == 1).collect();
            for pick in combinations(s_bits.len(), extra) {
                let mut t = forced;
                for (i, &b) in s_bits.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        t |= 1 << b;
                    }
                }
                out.push((Op::from_jumps(q, s), Op::from_jumps(q, t)));
            }
        }
    }
    out
}

impl PairSpace {
    fn build(
        l: &Arc<SSet>,
        a: &Arc<SSet>,
        pair_ok: impl Fn(u32, u32) -> bool,
        keep: impl Fn(Simplex, Simplex) -> bool,
    ) -> PairSpace {
        let mut keys: Vec<(u32, u32, Op, Op)> = Vec::new();
        let mut cache: HashMap<(usize, usize), Vec<(Op, Op)>> = HashMap::new();
        for b in 0..l.len() as u32 {
            for c in 0..a.len() as u32 {
                if !pair_ok(b, c) {
                    continue;
                }
                let (r, u) = (l.dim(b), a.dim(c));
                let sh = cache.entry((r, u)).or_insert_with(|| shuffle_pairs(r, u));
                for &(s, t) in sh.iter() {
                    if keep(Simplex { base: b, op: s }, Simplex { base: c, op: t }) {
                        keys.push((b, c, s, t));
                    }
                }
            }
        }
        keys.sort_by_key(|&(b, c, s, t)| (s.src_dim(), b, c, s, t));
        let index: HashMap<_, _> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let mut dims = Vec::with_capacity(keys.len());
        let mut faces = Vec::with_capacity(keys.len());
        for &(b, c, s, t) in &keys {
            let q = s.src_dim();
            dims.push(q as u8);
            let mut fs = Vec::new();
            if q > 0 {
                for i in 0..=q {
                    let x = l.face(Simplex { base: b, op: s }, i);
                    let y = a.face(Simplex { base: c, op: t }, i);
                    fs.push(normalize_pair(&index, x, y).expect("faces stay inside the pair space"));
                }
            }
            faces.push(fs);
        }
        let space = Arc::new(SSet::from_parts_unchecked(dims, faces));
        let pr1 = SMap::new_unchecked(
            space.clone(),
            l.clone(),
            keys.iter().map(|&(b, _, s, _)| Simplex { base: b, op: s }).collect(),
        );
        let pr2 = SMap::new_unchecked(
            space.clone(),
            a.clone(),
            keys.iter().map(|&(_, c, _, t)| Simplex { base: c, op: t }).collect(),
        );
        PairSpace { space, pr1, pr2, keys, index }
    }

    /// The simplex (x, y) of the pair space in EZ form, if it lies in it.
    pub fn pair(&self, x: Simplex, y: Simplex) -> Option<Simplex> {
        normalize_pair(&self.index, x, y)
    }

    /// The components of a non-degenerate simplex.
    pub fn components(&self, id: u32) -> (Simplex, Simplex) {
        let (b, c, s, t) = self.keys[id as usize];
        (Simplex { base: b, op: s }, Simplex { base: c, op: t })
    }
}

fn normalize_pair(index: &HashMap<(u32, u32, Op, Op), u32>, x: Simplex, y: Simplex) -> Option<Simplex> {
    assert_eq!(x.dim(), y.dim());
    let q = x.dim();
    let common = low_bits(q) & !(x.op.jumps() | y.op.jumps());
    let s = x.op.remove_positions(common);
    let t = y.op.remove_positions(common);
    let id = *index.get(&(x.base, y.base, s, t))?;
    Some(Simplex { base: id, op: Op::from_jumps(q, low_bits(q) & !common) })
}

/// K × N with its projections.
pub fn product(k: &Arc<SSet>, n: &Arc<SSet>) -> PairSpace {
    PairSpace::build(k, n, |_, _| true, |_, _| true)
}

/// L ×_K A for f: L → K and g: A → K.
pub fn pullback(f: &SMap, g: &SMap) -> Result<PairSpace> {
    if !same_space(&f.cod, &g.cod) {
        return Err(Error::Mismatch("pullback of maps with different codomains".into()));
    }
    Ok(PairSpace::build(
        &f.dom,
        &g.dom,
        |b, c| f.image_of(b).base == g.image_of(c).base,
        |x, y| f.map(x) == g.map(y),
    ))
}

/// f × g between products.
pub fn product_map(src: &PairSpace, tgt: &PairSpace, f: &SMap, g: &SMap) -> SMap {
    let image = (0..src.space.len() as u32)
        .map(|id| {
            let (x, y) = src.components(id);
            tgt.pair(f.map(x), g.map(y)).expect("product map lands in the target")
        })
        .collect();
    SMap::new_unchecked(src.space.clone(), tgt.space.clone(), image)
}
