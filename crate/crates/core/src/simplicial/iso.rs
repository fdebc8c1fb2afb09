use std::sync::Arc;

use super::{SMap, SSet, Simplex};

fn signature(k: &SSet) -> Vec<(u8, Vec<usize>)> {
    let top = k.max_dim().map_or(0, |d| d + 1);
    let mut cof = vec![vec![0usize; top]; k.len()];
    for s in 0..k.len() as u32 {
        for x in k.faces_of(s) {
            cof[x.base as usize][k.dim(s)] += 1;
        }
    }
    (0..k.len()).map(|s| (k.dims()[s], std::mem::take(&mut cof[s]))).collect()
}

/// Search for an isomorphism K → L by backtracking over non-degenerate simplices.
pub fn find_iso(k: &Arc<SSet>, l: &Arc<SSet>) -> Option<SMap> {
    if k.counts() != l.counts() {
        return None;
    }
    let sk = signature(k);
    let sl = signature(l);
    let order: Vec<u32> = (0..=k.max_dim().unwrap_or(0)).flat_map(|d| k.of_dim(d).to_vec()).collect();
    let mut image: Vec<Option<Simplex>> = vec![None; k.len()];
    let mut used = vec![false; l.len()];

    fn map(image: &[Option<Simplex>], x: Simplex) -> Simplex {
        let y = image[x.base as usize].expect("lower simplices are assigned first");
        y.degen(x.op)
    }

    fn go(
        pos: usize,
        order: &[u32],
        k: &SSet,
        l: &SSet,
        sk: &[(u8, Vec<usize>)],
        sl: &[(u8, Vec<usize>)],
        image: &mut Vec<Option<Simplex>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&s) = order.get(pos) else { return true };
        let d = k.dim(s);
        for &t in l.of_dim(d) {
            if used[t as usize] || sk[s as usize] != sl[t as usize] {
                continue;
            }
            let ok = (0..if d == 0 { 0 } else { d + 1 }).all(|i| map(image, k.face_nd(s, i)) == l.face_nd(t, i));
            if !ok {
                continue;
            }
            image[s as usize] = Some(Simplex::nondeg(t, d));
            used[t as usize] = true;
            if go(pos + 1, order, k, l, sk, sl, image, used) {
                return true;
            }
            image[s as usize] = None;
            used[t as usize] = false;
        }
        false
    }

    if go(0, &order, k, l, &sk, &sl, &mut image, &mut used) {
        let image = image.into_iter().map(|x| x.expect("complete assignment")).collect();
        Some(SMap::new_unchecked(k.clone(), l.clone(), image))
    } else {
        None
    }
}

pub fn is_isomorphic(k: &Arc<SSet>, l: &Arc<SSet>) -> bool {
    find_iso(k, l).is_some()
}
