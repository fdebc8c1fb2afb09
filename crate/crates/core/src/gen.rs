//! Seeded random instances: posets, free categories, chain complexes and
//! maps, functorial chain-valued diagrams, simplicial maps, and bounded
//! diagrams built only through closure operations.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{over_cat, over_functor, CatDiagram, FinCat, Functor, Nerve};
use crate::chain::{direct_sum, ChainComplex, ChainMap};
use crate::diagram::{pullback_diagram, pullback_epsilon, BoundedDiagram, IndexedDiagram, IndexedMap};
use crate::error::{Error, Result};
use crate::io::{AnyBounded, Workspace};
use crate::linalg::{Fp, Mat};
use crate::simplicial::{sphere_quotient, standard, subcomplex_of_standard, yoneda, DeltaIndex, SMap, SSet};
use crate::values::ChainCat;

/// Deterministic generator: identical seeds give identical instances.
pub struct Gen {
    rng: ChaCha8Rng,
    pub f: Fp,
}

/// Size knobs for random chain complexes.
#[derive(Clone, Copy, Debug)]
pub struct ComplexSize {
    pub max_degree: usize,
    pub max_pieces: usize,
}

impl Default for ComplexSize {
    fn default() -> Self {
        ComplexSize { max_degree: 2, max_pieces: 2 }
    }
}

/// Which space a random simplicial map lands in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapTarget {
    Simplex,
    Sphere,
    Image,
}

fn block_matrix(f: Fp, rows: &[usize], cols: &[usize], blocks: &[(usize, usize, Mat)]) -> Mat {
    let (r, c): (usize, usize) = (rows.iter().sum(), cols.iter().sum());
    let mut e = vec![0i64; r * c];
    for (bi, bj, m) in blocks {
        debug_assert_eq!((m.rows, m.cols), (rows[*bi], cols[*bj]));
        let r0: usize = rows[..*bi].iter().sum();
        let c0: usize = cols[..*bj].iter().sum();
        let vals = m.to_row_major();
        for i in 0..m.rows {
            for j in 0..m.cols {
                e[(r0 + i) * c + c0 + j] = vals[i * m.cols + j] as i64;
            }
        }
    }
    Mat::from_row_major(f, r, c, &e).expect("block sizes add up")
}

/// The componentwise sum of maps between direct sums.
pub fn sum_map(src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>, parts: &[&ChainMap]) -> ChainMap {
    let m = (0..src.len())
        .map(|k| {
            let comps: Vec<Mat> = parts.iter().map(|p| p.component(k)).collect();
            let refs: Vec<&Mat> = comps.iter().collect();
            Mat::block_diag(&refs)
        })
        .collect();
    ChainMap::new(src.clone(), tgt.clone(), m).expect("sum of chain maps")
}

impl Gen {
    pub fn new(seed: u64, f: Fp) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), f }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn scalar(&mut self) -> u32 {
        self.rng.gen_range(0..self.f.p())
    }

    /// A poset on `n` objects numbered by a linear extension.
    pub fn poset(&mut self, n: usize, density: f64, terminal: bool) -> FinCat {
        let mut le = vec![vec![false; n]; n];
        for a in 0..n {
            le[a][a] = true;
            for b in a + 1..n {
                le[a][b] = self.coin(density);
            }
            if terminal {
                le[a][n - 1] = true;
            }
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if le[a][k] && le[k][b] {
                        le[a][b] = true;
                    }
                }
            }
        }
        FinCat::poset(n, |a, b| le[a][b]).expect("closed order relation")
    }

    /// The free category on a random acyclic multigraph.
    pub fn dag_category(&mut self, n: usize, max_edges: usize) -> FinCat {
        let mut edges = Vec::new();
        if n > 1 {
            for _ in 0..self.below(max_edges + 1) {
                let a = self.below(n - 1);
                let b = a + 1 + self.below(n - 1 - a);
                edges.push((a as u32, b as u32));
            }
        }
        FinCat::free(n, &edges).expect("acyclic graph")
    }

    pub fn invertible(&mut self, n: usize) -> Mat {
        loop {
            let e: Vec<i64> = (0..n * n).map(|_| self.scalar() as i64).collect();
            let m = Mat::from_row_major(self.f, n, n, &e).expect("square");
            if m.is_invertible(self.f) {
                return m;
            }
        }
    }

    fn basis_change(&mut self, dims: &[usize], d: Vec<Mat>) -> ChainComplex {
        let p: Vec<Mat> = dims.iter().map(|&n| self.invertible(n)).collect();
        let d = d
            .iter()
            .enumerate()
            .map(|(k, m)| p[k].mul(self.f, m).mul(self.f, &p[k + 1].inverse(self.f).expect("invertible")))
            .collect();
        ChainComplex::new(self.f, dims.to_vec(), d).expect("conjugated differential")
    }

    /// Sum of spheres (F in one degree) and disks (F → F in adjacent degrees),
    /// in a random basis.
    pub fn chain_complex(&mut self, size: ComplexSize) -> ChainComplex {
        let pieces = self.below(size.max_pieces + 1);
        let mut spec = Vec::new();
        for _ in 0..pieces {
            let disk = size.max_degree > 0 && self.coin(0.5);
            let k = if disk { 1 + self.below(size.max_degree) } else { self.below(size.max_degree + 1) };
            spec.push((disk, k));
        }
        self.assemble(&spec)
    }

    /// Acyclic complex made of disks only.
    pub fn acyclic(&mut self, size: ComplexSize) -> ChainComplex {
        let pieces = 1 + self.below(size.max_pieces.max(1));
        let spec: Vec<(bool, usize)> = (0..pieces).map(|_| (true, 1 + self.below(size.max_degree.max(1)))).collect();
        self.assemble(&spec)
    }

    fn assemble(&mut self, spec: &[(bool, usize)]) -> ChainComplex {
        let top = spec.iter().map(|&(_, k)| k + 1).max().unwrap_or(0);
        let mut dims = vec![0; top];
        let mut cells = Vec::new();
        for &(disk, k) in spec {
            let hi = dims[k];
            dims[k] += 1;
            if disk {
                let lo = dims[k - 1];
                dims[k - 1] += 1;
                cells.push((k, hi, lo));
            }
        }
        let mut d: Vec<Mat> = (0..top.saturating_sub(1)).map(|k| Mat::zero(dims[k], dims[k + 1])).collect();
        for (k, hi, lo) in cells {
            let mut e = vec![0i64; dims[k - 1] * dims[k]];
            e[lo * dims[k] + hi] = 1;
            let m = Mat::from_row_major(self.f, dims[k - 1], dims[k], &e).expect("shape");
            d[k - 1] = d[k - 1].add(self.f, &m);
        }
        self.basis_change(&dims, d)
    }

    /// A uniformly random chain map, drawn from the solution space of d m = m d.
    pub fn chain_map(&mut self, src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>) -> ChainMap {
        let f = self.f;
        let len = src.len();
        let mut offset = vec![0; len + 1];
        for k in 0..len {
            offset[k + 1] = offset[k] + tgt.dim(k) * src.dim(k);
        }
        let unknowns = offset[len];
        let var = |k: usize, r: usize, c: usize| offset[k] + r * src.dim(k) + c;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for k in 0..len.saturating_sub(1) {
            let (dt, ds) = (tgt.d(k).to_row_major(), src.d(k).to_row_major());
            for r in 0..tgt.dim(k) {
                for c in 0..src.dim(k + 1) {
                    let mut row = vec![0i64; unknowns];
                    for t in 0..tgt.dim(k + 1) {
                        row[var(k + 1, t, c)] += dt[r * tgt.dim(k + 1) + t] as i64;
                    }
                    for s in 0..src.dim(k) {
                        row[var(k, r, s)] -= ds[s * src.dim(k + 1) + c] as i64;
                    }
                    rows.push(row);
                }
            }
        }
        let flat: Vec<i64> = rows.concat();
        let constraints = Mat::from_row_major(f, rows.len(), unknowns, &flat).expect("shape");
        let mut x = vec![0u32; unknowns];
        for v in constraints.kernel(f) {
            let c = self.scalar();
            for (i, a) in v.to_dense(unknowns).into_iter().enumerate() {
                x[i] = f.add(x[i], f.mul(c, a));
            }
        }
        let m = (0..len)
            .map(|k| {
                let e: Vec<i64> = x[offset[k]..offset[k + 1]].iter().map(|&a| a as i64).collect();
                Mat::from_row_major(f, tgt.dim(k), src.dim(k), &e).expect("shape")
            })
            .collect();
        ChainMap::new(src.clone(), tgt.clone(), m).expect("solution of the chain map equations")
    }

    /// A functorial chain-valued diagram: the mapping cone of a random natural
    /// transformation from a free diagram to a cofree one, plus optionally a
    /// constant summand.
    pub fn indexed_diagram(&mut self, cat: &Arc<FinCat>, size: ComplexSize, constant: bool) -> IndexedDiagram<ChainCat> {
        let f = self.f;
        let vc = ChainCat { f };
        let n = cat.num_objects();
        let a: Vec<Arc<ChainComplex>> = (0..n).map(|_| Arc::new(self.chain_complex(size))).collect();
        let b: Vec<Arc<ChainComplex>> = (0..n).map(|_| Arc::new(self.chain_complex(size))).collect();
        let phi: Vec<ChainMap> = (0..cat.num_morphisms() as u32)
            .map(|w| self.chain_map(&a[cat.src(w) as usize], &b[cat.tgt(w) as usize]))
            .collect();
        let into: Vec<Vec<u32>> = (0..n as u32).map(|x| (0..cat.num_morphisms() as u32).filter(|&u| cat.tgt(u) == x).collect()).collect();
        let out: Vec<Vec<u32>> = (0..n as u32).map(|x| (0..cat.num_morphisms() as u32).filter(|&v| cat.src(v) == x).collect()).collect();
        let free: Vec<Arc<ChainComplex>> =
            (0..n).map(|x| direct_sum(f, &into[x].iter().map(|&u| a[cat.src(u) as usize].clone()).collect::<Vec<_>>())).collect();
        let cofree: Vec<Arc<ChainComplex>> =
            (0..n).map(|x| direct_sum(f, &out[x].iter().map(|&v| b[cat.tgt(v) as usize].clone()).collect::<Vec<_>>())).collect();
        let len = (0..n).map(|x| (free[x].len() + 1).max(cofree[x].len())).max().unwrap_or(0);
        // Φ_x in degree k, as a block matrix from the free to the cofree summands
        let phi_at = |x: usize, k: usize| -> Mat {
            let rows: Vec<usize> = out[x].iter().map(|&v| b[cat.tgt(v) as usize].dim(k)).collect();
            let cols: Vec<usize> = into[x].iter().map(|&u| a[cat.src(u) as usize].dim(k)).collect();
            let mut blocks = Vec::new();
            for (i, &v) in out[x].iter().enumerate() {
                for (j, &u) in into[x].iter().enumerate() {
                    blocks.push((i, j, phi[cat.compose(v, u) as usize].component(k)));
                }
            }
            block_matrix(f, &rows, &cols, &blocks)
        };
        let cone_dims = |x: usize| -> Vec<usize> {
            (0..len).map(|k| if k == 0 { cofree[x].dim(0) } else { free[x].dim(k - 1) + cofree[x].dim(k) }).collect()
        };
        let minus = |m: &Mat| m.scale(f, f.neg(1));
        let objs: Vec<Arc<ChainComplex>> = (0..n)
            .map(|x| {
                let dims = cone_dims(x);
                let d = (0..len.saturating_sub(1))
                    .map(|k| {
                        // Cone_{k+1} = free_k ⊕ cofree_{k+1} → Cone_k = free_{k-1} ⊕ cofree_k
                        let rows = [if k == 0 { 0 } else { free[x].dim(k - 1) }, cofree[x].dim(k)];
                        let cols = [free[x].dim(k), cofree[x].dim(k + 1)];
                        let mut blocks = vec![(1, 0, phi_at(x, k)), (1, 1, cofree[x].d(k))];
                        if k > 0 {
                            blocks.push((0, 0, minus(&free[x].d(k - 1))));
                        }
                        block_matrix(f, &rows, &cols, &blocks)
                    })
                    .collect();
                Arc::new(ChainComplex::new(f, dims, d).expect("mapping cone"))
            })
            .collect();
        let mors: Vec<ChainMap> = (0..cat.num_morphisms() as u32)
            .map(|al| {
                let (x, y) = (cat.src(al) as usize, cat.tgt(al) as usize);
                let m = (0..objs[x].len())
                    .map(|k| {
                        // free part: summand u of x goes to summand al∘u of y
                        let fr = |k: usize| -> Mat {
                            let rows: Vec<usize> = into[y].iter().map(|&u| a[cat.src(u) as usize].dim(k)).collect();
                            let cols: Vec<usize> = into[x].iter().map(|&u| a[cat.src(u) as usize].dim(k)).collect();
                            let blocks: Vec<(usize, usize, Mat)> = into[x]
                                .iter()
                                .enumerate()
                                .map(|(j, &u)| {
                                    let i = into[y].iter().position(|&w| w == cat.compose(al, u)).expect("composite exists");
                                    (i, j, Mat::identity(cols[j]))
                                })
                                .collect();
                            block_matrix(f, &rows, &cols, &blocks)
                        };
                        // cofree part: summand v of y reads summand v∘al of x
                        let co = |k: usize| -> Mat {
                            let rows: Vec<usize> = out[y].iter().map(|&v| b[cat.tgt(v) as usize].dim(k)).collect();
                            let cols: Vec<usize> = out[x].iter().map(|&v| b[cat.tgt(v) as usize].dim(k)).collect();
                            let blocks: Vec<(usize, usize, Mat)> = out[y]
                                .iter()
                                .enumerate()
                                .map(|(i, &v)| {
                                    let j = out[x].iter().position(|&w| w == cat.compose(v, al)).expect("composite exists");
                                    (i, j, Mat::identity(rows[i]))
                                })
                                .collect();
                            block_matrix(f, &rows, &cols, &blocks)
                        };
                        if k == 0 {
                            co(0)
                        } else {
                            Mat::block_diag(&[&fr(k - 1), &co(k)])
                        }
                    })
                    .collect();
                ChainMap::new(objs[x].clone(), objs[y].clone(), m).expect("cone of a natural map")
            })
            .collect();
        let d = IndexedDiagram::new(&vc, cat.clone(), objs, mors).expect("functorial by construction");
        if constant {
            let x = Arc::new(self.chain_complex(size));
            self.add_constant(&d, &x).0
        } else {
            d
        }
    }

    /// F ⊕ X with X constant, and the inclusion of F.
    pub fn add_constant(&self, d: &IndexedDiagram<ChainCat>, x: &Arc<ChainComplex>) -> (IndexedDiagram<ChainCat>, IndexedMap<ChainCat>) {
        let f = self.f;
        let vc = ChainCat { f };
        let objs: Vec<Arc<ChainComplex>> = d.objs.iter().map(|o| direct_sum(f, &[o.clone(), x.clone()])).collect();
        let idx = ChainMap::identity(x.clone());
        let mors = (0..d.cat.num_morphisms())
            .map(|m| {
                let (s, t) = (d.cat.src(m as u32) as usize, d.cat.tgt(m as u32) as usize);
                sum_map(&objs[s], &objs[t], &[&d.mors[m], &idx])
            })
            .collect();
        let comps = d
            .objs
            .iter()
            .zip(&objs)
            .map(|(o, s)| {
                let m = (0..o.len()).map(|k| Mat::block_diag(&[&Mat::identity(o.dim(k)), &Mat::zero(x.dim(k), 0)])).collect();
                ChainMap::new(o.clone(), s.clone(), m).expect("summand inclusion")
            })
            .collect();
        (IndexedDiagram::new(&vc, d.cat.clone(), objs, mors).expect("sum of functors"), IndexedMap { comps })
    }

    /// A face-closed set of at most `max_simplices` vertex sets of [m].
    pub fn subcomplex(&mut self, m: usize, max_simplices: usize) -> (Arc<SSet>, DeltaIndex) {
        let mut masks: Vec<u64> = Vec::new();
        let full = (1u64 << (m + 1)) - 1;
        for _ in 0..(m + 2) {
            let g = self.rng.gen_range(1..=full);
            let mut add: Vec<u64> = Vec::new();
            let mut sub = g;
            loop {
                if sub != 0 && !masks.contains(&sub) {
                    add.push(sub);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & g;
            }
            if masks.len() + add.len() <= max_simplices.max(1) {
                masks.extend(add);
            }
        }
        if masks.is_empty() {
            masks.push(1 << self.below(m + 1));
        }
        masks.sort_by_key(|&x| (x.count_ones(), (0..64).filter(|v| x >> v & 1 == 1).collect::<Vec<u32>>()));
        let (k, idx) = subcomplex_of_standard(m, masks).expect("face-closed");
        (Arc::new(k), idx)
    }

    /// The inclusion of a subcomplex of Δ[m].
    pub fn inclusion(l: &Arc<SSet>, idx: &DeltaIndex) -> SMap {
        let (d, didx) = standard(idx.n);
        let image = (0..l.len() as u32).map(|s| didx.simplex(&idx.verts(s)).expect("vertex set of Δ[m]")).collect();
        SMap::new(l.clone(), Arc::new(d), image).expect("inclusion")
    }

    /// A random monotone map [m] → [k].
    pub fn monotone(&mut self, m: usize, k: usize) -> Vec<u8> {
        let mut v: Vec<u8> = (0..=m).map(|_| self.below(k + 1) as u8).collect();
        v.sort();
        v
    }

    /// L ⊆ Δ[m] mapped by a monotone [m] → [k] into Δ[k], S^k, or its image.
    pub fn simplicial_map(&mut self, max_dim: usize, max_simplices: usize, target: MapTarget) -> SMap {
        self.simplicial_map_indexed(max_dim, max_simplices, target).0
    }

    /// As `simplicial_map`, also returning the vertex index of the source in Δ[m].
    pub fn simplicial_map_indexed(&mut self, max_dim: usize, max_simplices: usize, target: MapTarget) -> (SMap, DeltaIndex) {
        let m = self.below(max_dim + 1);
        let (l, idx) = self.subcomplex(m, max_simplices);
        let k = match target {
            MapTarget::Sphere => 1 + self.below(max_dim.max(1)),
            MapTarget::Simplex => self.below(max_dim.min(2) + 1),
            MapTarget::Image => self.below(max_dim + 1),
        };
        let theta = self.monotone(m, k);
        let images: Vec<Vec<u8>> = (0..l.len() as u32).map(|s| idx.verts(s).iter().map(|&v| theta[v as usize]).collect()).collect();
        match target {
            MapTarget::Simplex | MapTarget::Sphere => {
                let (d, didx) = standard(k);
                let image = images.iter().map(|v| didx.simplex(v).expect("in Δ[k]")).collect();
                let g = SMap::new(l, Arc::new(d), image).expect("monotone map");
                if target == MapTarget::Sphere {
                    (sphere_quotient(k).expect("k ≥ 1").after(&g), idx)
                } else {
                    (g, idx)
                }
            }
            MapTarget::Image => {
                let mut masks: Vec<u64> = images.iter().map(|v| v.iter().fold(0u64, |a, &x| a | 1 << x)).collect();
                masks.sort_by_key(|&x| (x.count_ones(), (0..64).filter(|v| x >> v & 1 == 1).collect::<Vec<u32>>()));
                masks.dedup();
                let (kk, kidx) = subcomplex_of_standard(k, masks).expect("images of faces are faces of images");
                let image = images.iter().map(|v| kidx.simplex(v).expect("in the image")).collect();
                (SMap::new(l, Arc::new(kk), image).expect("monotone map"), idx)
            }
        }
    }

    pub fn map_target(&mut self) -> MapTarget {
        *[MapTarget::Simplex, MapTarget::Sphere, MapTarget::Image].choose(&mut self.rng).expect("nonempty")
    }

    /// A random m-simplex of N(P) for a poset P: a chain i_m ≤ … ≤ i_0, identities allowed.
    pub fn nerve_simplex(&mut self, p: &FinCat, nerve: &Nerve, m: usize) -> crate::simplicial::Simplex {
        let n = p.num_objects() as u32;
        let mut objs = vec![0u32; m + 1];
        objs[m] = self.below(n as usize) as u32;
        for k in (0..m).rev() {
            let ups: Vec<u32> = (0..n).filter(|&y| !p.hom(objs[k + 1], y).is_empty()).collect();
            objs[k] = *ups.choose(&mut self.rng).expect("identity");
        }
        let mors: Vec<u32> = (1..=m).map(|k| p.hom(objs[k], objs[k - 1])[0]).collect();
        nerve.simplex_of(p, &objs, &mors)
    }

    /// A bounded chain diagram over Δ[m]: ε*F over a random poset, pulled back
    /// along a random simplex of its nerve.
    pub fn diagram_over_standard(&mut self, m: usize, size: ComplexSize) -> BoundedDiagram<ChainCat> {
        let vc = ChainCat { f: self.f };
        let n = 2 + self.below(3);
        let p = Arc::new(self.poset(n, 0.5, false));
        let constant = self.coin(0.3);
        let d = self.indexed_diagram(&p, size, constant);
        let nerve = Nerve::of(&p).expect("posets are loop-free");
        let eps = pullback_epsilon(&vc, &nerve, &d);
        let x = self.nerve_simplex(&p, &nerve, m);
        pullback_diagram(&vc, &yoneda(&nerve.space, x), &eps)
    }

    /// A bounded chain diagram over a subcomplex L ⊆ Δ[m], by restriction.
    pub fn diagram_over_subcomplex(&mut self, l: &Arc<SSet>, idx: &DeltaIndex, size: ComplexSize) -> BoundedDiagram<ChainCat> {
        let vc = ChainCat { f: self.f };
        let over = self.diagram_over_standard(idx.n, size);
        pullback_diagram(&vc, &Gen::inclusion(l, idx), &over)
    }

    /// A bounded diagram over S^n: one morphism g: F(v) → F(τ) used for every face.
    pub fn sphere_diagram(&mut self, n: usize, size: ComplexSize) -> BoundedDiagram<ChainCat> {
        let vc = ChainCat { f: self.f };
        let k = Arc::new(crate::simplicial::sphere(n).expect("n ≥ 1"));
        let a = Arc::new(self.chain_complex(size));
        let b = Arc::new(self.chain_complex(size));
        let g = self.chain_map(&a, &b);
        BoundedDiagram::new(&vc, k, vec![a, b], vec![vec![], vec![g; n + 1]]).expect("constant face map is coherent")
    }

    /// A monotone map between posets, drawn object by object; falls back to a constant map.
    pub fn monotone_functor(&mut self, p: &Arc<FinCat>, i: &Arc<FinCat>) -> Functor {
        for _ in 0..20 {
            let mut obj: Vec<u32> = Vec::new();
            let mut ok = true;
            for x in 0..p.num_objects() as u32 {
                let below: Vec<u32> = (0..x).filter(|&y| !p.hom(y, x).is_empty()).collect();
                let cands: Vec<u32> = (0..i.num_objects() as u32)
                    .filter(|&c| below.iter().all(|&y| !i.hom(obj[y as usize], c).is_empty()))
                    .collect();
                match cands.choose(&mut self.rng) {
                    Some(&c) => obj.push(c),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let mor = (0..p.num_morphisms() as u32).map(|m| i.hom(obj[p.src(m) as usize], obj[p.tgt(m) as usize])[0]).collect();
                return Functor::new(p.clone(), i.clone(), obj, mor).expect("monotone");
            }
        }
        let c = self.below(i.num_objects()) as u32;
        Functor::point(i.clone(), c).after(&Functor::to_point(p.clone()))
    }

    /// i ↦ g↓i for a random monotone g: P → I, a strict diagram of posets.
    pub fn cat_diagram(&mut self, base: &Arc<FinCat>, fiber_objects: usize) -> Result<CatDiagram> {
        let p = Arc::new(self.poset(fiber_objects, 0.4, false));
        let g = self.monotone_functor(&p, base);
        let commas = (0..base.num_objects() as u32).map(|i| over_cat(&g, i)).collect::<Result<Vec<_>>>()?;
        let fibers: Vec<Arc<FinCat>> = commas.iter().map(|c| c.cat.clone()).collect();
        let transition = (0..base.num_morphisms() as u32)
            .map(|b| over_functor(&g, &commas[base.src(b) as usize], &commas[base.tgt(b) as usize], b))
            .collect::<Result<Vec<_>>>()?;
        CatDiagram::new(base.clone(), fibers, transition)
    }
}

/// The generator families exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Poset,
    DagCategory,
    ChainComplex,
    BoundedDiagram,
    SimplicialMap,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Ok(match s {
            "poset" => Family::Poset,
            "dag-category" => Family::DagCategory,
            "chain-complex" => Family::ChainComplex,
            "bounded-diagram-via-closure" | "bounded-diagram" => Family::BoundedDiagram,
            "simplicial-map" => Family::SimplicialMap,
            _ => return Err(Error::Invalid(format!("unknown generator family {s}"))),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenSpec {
    pub seed: u64,
    pub family: Family,
    pub max_objects: usize,
    pub max_dim: usize,
    pub max_simplices: usize,
    pub p: u32,
}

impl GenSpec {
    pub fn new(seed: u64, family: Family) -> GenSpec {
        GenSpec { seed, family, max_objects: 5, max_dim: 3, max_simplices: 8, p: 2 }
    }
}

/// Generate the workspace entities of one family.
pub fn generate(spec: &GenSpec) -> Result<Workspace> {
    let f = Fp::new(spec.p)?;
    let mut g = Gen::new(spec.seed, f);
    let mut w = Workspace::default();
    let n = 1 + g.below(spec.max_objects.max(1));
    let size = ComplexSize::default();
    match spec.family {
        Family::Poset => w.add_category("P", Arc::new(g.poset(n, 0.4, false))),
        Family::DagCategory => w.add_category("C", Arc::new(g.dag_category(n, n + 1))),
        Family::ChainComplex => {
            w.complexes.insert("X".into(), Arc::new(g.chain_complex(size)));
        }
        Family::BoundedDiagram => {
            let m = g.below(spec.max_dim + 1);
            let (l, idx) = g.subcomplex(m, spec.max_simplices);
            let d = g.diagram_over_subcomplex(&l, &idx, size);
            w.add_sset("L", l);
            w.add_diagram("F", "L", AnyBounded::Chain(ChainCat { f }, d));
        }
        Family::SimplicialMap => {
            let t = g.map_target();
            let (map, idx) = g.simplicial_map_indexed(spec.max_dim, spec.max_simplices, t);
            let d = g.diagram_over_subcomplex(&map.dom, &idx, size);
            w.add_sset("L", map.dom.clone());
            w.add_diagram("F", "L", AnyBounded::Chain(ChainCat { f }, d));
            w.add_sset("K", map.cod.clone());
            w.add_smap("f", "L", "K", map);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cat_colim, check_bounded};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn posets_are_loop_free() {
        let mut g = Gen::new(1, f2());
        for n in 1..6 {
            let p = g.poset(n, 0.5, n % 2 == 0);
            assert!(p.is_loop_free() && p.defect().is_none());
        }
    }

    #[test]
    fn complexes_satisfy_d_squared() {
        for p in [2, 3] {
            let mut g = Gen::new(5, Fp::new(p).unwrap());
            for _ in 0..20 {
                let c = g.chain_complex(ComplexSize { max_degree: 3, max_pieces: 4 });
                for k in 0..c.len().saturating_sub(2) {
                    assert!(c.d(k).mul(c.field(), &c.d(k + 1)).is_zero());
                }
                assert!(g.acyclic(ComplexSize::default()).betti().iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn indexed_diagrams_are_functorial() {
        let mut g = Gen::new(9, f2());
        let vc = ChainCat { f: f2() };
        for _ in 0..5 {
            let n = 1 + g.below(4);
            let c = Arc::new(g.dag_category(n, 4));
            let d = g.indexed_diagram(&c, ComplexSize::default(), true);
            assert!(IndexedDiagram::new(&vc, d.cat.clone(), d.objs.clone(), d.mors.clone()).is_ok());
            assert!(cat_colim(&vc, &d).is_ok());
        }
    }

    #[test]
    fn bounded_family_passes_the_check() {
        let mut g = Gen::new(11, f2());
        let vc = ChainCat { f: f2() };
        for _ in 0..10 {
            let m = g.below(4);
            let (l, idx) = g.subcomplex(m, 8);
            assert!(l.len() <= 8);
            let d = g.diagram_over_subcomplex(&l, &idx, ComplexSize::default());
            assert!(check_bounded(&vc, &d).is_ok());
        }
    }

    #[test]
    fn maps_are_valid() {
        let mut g = Gen::new(3, f2());
        for t in [MapTarget::Simplex, MapTarget::Sphere, MapTarget::Image] {
            for _ in 0..10 {
                let f = g.simplicial_map(3, 8, t);
                assert!(f.check_faces().is_ok());
            }
        }
    }

    #[test]
    fn same_seed_same_workspace() {
        for fam in ["poset", "dag-category", "chain-complex", "bounded-diagram-via-closure", "simplicial-map"] {
            let spec = GenSpec::new(7, fam.parse().unwrap());
            assert_eq!(generate(&spec).unwrap().to_json(), generate(&spec).unwrap().to_json());
        }
    }

    #[test]
    fn cat_diagrams_are_strict() {
        let mut g = Gen::new(4, f2());
        for _ in 0..5 {
            let base = Arc::new(g.poset(3, 0.5, false));
            assert!(g.cat_diagram(&base, 4).is_ok());
        }
    }
}
