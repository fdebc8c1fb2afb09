use std::sync::Arc;

use super::*;
use crate::category::FinCat;
use crate::chain::{ChainComplex, ChainMap};
use crate::linalg::{Fp, Mat};
use crate::simplicial::{boundary, horn, sphere, sphere_quotient, standard};
use crate::values::{ChainCat, SSetCat};

fn vc() -> ChainCat {
    ChainCat::new(2).unwrap()
}

fn f2() -> Fp {
    Fp::new(2).unwrap()
}

fn free(n: usize) -> Arc<ChainComplex> {
    Arc::new(ChainComplex::new(f2(), vec![n], vec![]).unwrap())
}

fn map(src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>, rows: usize, cols: usize, e: &[i64]) -> ChainMap {
    ChainMap::new(src.clone(), tgt.clone(), vec![Mat::from_row_major(f2(), rows, cols, e).unwrap()]).unwrap()
}

fn simplex(n: usize) -> Arc<SSet> {
    Arc::new(standard(n).0)
}

#[test]
fn constant_diagrams_are_bounded() {
    let v = vc();
    for k in [simplex(3), Arc::new(sphere(2).unwrap()), Arc::new(horn(3, 1).unwrap().0)] {
        let d = BoundedDiagram::constant(&v, k, free(2));
        assert!(check_bounded(&v, &d).is_ok());
        assert!(d.incoherence(&v).is_none());
    }
}

#[test]
fn cospan_over_interval() {
    // over Δ[1]: vertices 0, 1 and the edge 2; d_0 edge = vertex 1, d_1 edge = vertex 0
    let v = vc();
    let (x, y, z) = (free(1), free(1), free(2));
    let fx = map(&x, &z, 2, 1, &[1, 0]);
    let fy = map(&y, &z, 2, 1, &[1, 1]);
    let d = BoundedDiagram::new(&v, simplex(1), vec![x, y, z.clone()], vec![vec![], vec![], vec![fy, fx]]).unwrap();
    let c = colim_bounded(&v, &d).unwrap();
    assert!(v.is_iso(&c.legs[2]));
    assert!(cross_check_colim(&v, &d, &c).unwrap());
}

#[test]
fn incoherent_triangle_is_rejected() {
    // Δ[2] with ids 0,1,2 vertices, 3 = 01, 4 = 02, 5 = 12, 6 = 012
    let v = vc();
    let k = simplex(2);
    let a = free(1);
    let id = v.identity(&a);
    let zero = map(&a, &a, 1, 1, &[0]);
    let mut faces = vec![vec![]; 7];
    for e in 3..6 {
        faces[e] = vec![id.clone(), id.clone()];
    }
    faces[6] = vec![id.clone(), id.clone(), zero];
    let err = BoundedDiagram::new(&v, k, vec![a; 7], faces).unwrap_err();
    assert!(matches!(err, Error::NotBounded(_)), "{err:?}");
}

#[test]
fn pullback_examples() {
    let v = vc();
    let k = simplex(2);
    let d = BoundedDiagram::constant(&v, k.clone(), free(1));
    let same = pullback_diagram(&v, &SMap::identity(k.clone()), &d);
    assert_eq!(same.values, d.values);
    // along s_0: Δ[1] → Δ[0] the result is constant
    let pt = simplex(0);
    let x = BoundedDiagram::constant(&v, pt.clone(), free(2));
    let s0 = yoneda(&pt, Simplex { base: 0, op: Op::constant(1) });
    let pulled = pullback_diagram(&v, &s0, &x);
    assert_eq!(pulled.values.len(), 3);
    assert!(pulled.faces[2].iter().all(|m| v.equal_morphisms(m, &v.identity(&free(2)))));
}

#[test]
fn epsilon_over_interval() {
    let v = vc();
    let i = Arc::new(FinCat::ordinal(1));
    let nerve = Nerve::of(&i).unwrap();
    let (x1, x0) = (free(1), free(2));
    let alpha = map(&x0, &x1, 1, 2, &[1, 1]);
    let alpha = ChainMap::new(x0.clone(), x1.clone(), alpha.components().to_vec()).unwrap();
    // the arrow 0 → 1 of [1]; F(0) = x0, F(1) = x1
    let mors = (0..i.num_morphisms() as u32)
        .map(|m| if i.is_identity(m) { v.identity(if i.src(m) == 0 { &x0 } else { &x1 }) } else { alpha.clone() })
        .collect();
    let f = IndexedDiagram::new(&v, i.clone(), vec![x0.clone(), x1.clone()], mors).unwrap();
    let e = pullback_epsilon(&v, &nerve, &f);
    check_bounded(&v, &e).unwrap();
    // the edge carries F(target) with d_0 = F(α) and d_1 = id
    let edge = 2;
    assert!(v.same_object(&e.values[edge], &x1));
    assert!(v.equal_morphisms(&e.faces[edge][0], &alpha));
    assert!(v.equal_morphisms(&e.faces[edge][1], &v.identity(&x1)));
    let c = colim_bounded(&v, &e).unwrap();
    let strict = cat_colim(&v, &f).unwrap();
    assert_eq!(c.apex.dims(), strict.apex.dims());
}

#[test]
fn terminal_simplex_and_sphere_legs_are_isos() {
    let v = vc();
    for n in 0..4 {
        let d = BoundedDiagram::constant(&v, simplex(n), free(2));
        let c = colim_bounded(&v, &d).unwrap();
        assert!(v.is_iso(&c.legs[d.base.len() - 1]));
    }
    let s = Arc::new(sphere(3).unwrap());
    let (a, b) = (free(1), free(2));
    let m = map(&a, &b, 2, 1, &[1, 1]);
    let d = BoundedDiagram::new(&v, s, vec![a, b], vec![vec![], vec![m; 4]]).unwrap();
    let c = colim_bounded(&v, &d).unwrap();
    assert!(v.is_iso(&c.legs[1]));
    assert!(cross_check_colim(&v, &d, &c).unwrap());
}

#[test]
fn colimit_over_two_points_is_a_sum() {
    let v = vc();
    let (b, _) = boundary(1).unwrap();
    let d = BoundedDiagram::new(&v, Arc::new(b), vec![free(1), free(2)], vec![vec![], vec![]]).unwrap();
    assert_eq!(colim_bounded(&v, &d).unwrap().apex.dims(), &[3]);
}

#[test]
fn fiber_space_examples() {
    let k = simplex(2);
    for s in 0..k.len() as u32 {
        let p = fiber_space(&SMap::identity(k.clone()), s).unwrap();
        assert!(crate::simplicial::is_isomorphic(&p.space, &simplex(k.dim(s))));
    }
    let empty = SMap::from_empty(k.clone());
    assert!(fiber_space(&empty, 6).unwrap().space.is_empty());
    let pt = simplex(0);
    let s0 = yoneda(&pt, Simplex { base: 0, op: Op::constant(1) });
    assert!(crate::simplicial::is_isomorphic(&fiber_space(&s0, 0).unwrap().space, &simplex(1)));
}

#[test]
fn kan_extension_along_identity() {
    let v = vc();
    let k = simplex(2);
    let d = BoundedDiagram::constant(&v, k.clone(), free(1));
    let kan = kan_extension(&v, &SMap::identity(k.clone()), &d).unwrap();
    check_bounded(&v, &kan.diagram).unwrap();
    let unit = kan.unit(&SMap::identity(k));
    assert!(unit.is_objectwise_iso(&v));
}

#[test]
fn kan_extension_along_a_vertex() {
    // d_1: Δ[0] → Δ[1] picks vertex 0; the extension is X → X (identity) ← ∅
    let v = vc();
    let k = simplex(1);
    let f = yoneda(&k, Simplex::nondeg(0, 0));
    let x = free(2);
    let d = BoundedDiagram::constant(&v, f.dom.clone(), x.clone());
    let kan = kan_extension(&v, &f, &d).unwrap();
    let e = &kan.diagram;
    assert_eq!(e.values[0].dims(), &[2]);
    assert!(e.values[1].is_empty());
    assert_eq!(e.values[2].dims(), &[2]);
    assert!(v.is_iso(&e.faces[2][1]));
    // not s_0-bounded: the map ∅ → X is not an isomorphism
    let pt = simplex(0);
    let s0 = SMap::new(k.clone(), pt.clone(), vec![Simplex::nondeg(0, 0), Simplex::nondeg(0, 0), Simplex { base: 0, op: Op::constant(1) }]).unwrap();
    assert!(!is_f_bounded(&v, e, &s0));
    assert!(is_f_bounded(&v, &BoundedDiagram::constant(&v, k.clone(), x), &s0));
}

#[test]
fn kan_extension_to_a_point_is_the_colimit() {
    let v = vc();
    let l = Arc::new(horn(2, 1).unwrap().0);
    let pt = simplex(0);
    let image = (0..l.len() as u32).map(|s| Simplex { base: 0, op: Op::constant(l.dim(s)) }).collect();
    let f = SMap::new(l.clone(), pt, image).unwrap();
    let (a, b) = (free(1), free(1));
    let mut values = Vec::new();
    let mut faces = Vec::new();
    for s in 0..l.len() as u32 {
        values.push(if l.dim(s) == 0 { a.clone() } else { b.clone() });
        faces.push(if l.dim(s) == 0 { vec![] } else { vec![v.identity(&a); 2] });
    }
    let d = BoundedDiagram::new(&v, l.clone(), values, faces).unwrap();
    let kan = kan_extension(&v, &f, &d).unwrap();
    let cl = colim_bounded(&v, &d).unwrap();
    assert_eq!(kan.diagram.values[0].dims(), cl.apex.dims());
    let ck = colim_bounded(&v, &kan.diagram).unwrap();
    assert!(v.is_iso(&kan.comparison(&v, &f, &cl, &ck)));
}

#[test]
fn kan_extension_along_sphere_quotient() {
    let v = vc();
    for n in 2..4 {
        let q = sphere_quotient(n).unwrap();
        let d = BoundedDiagram::constant(&v, q.dom.clone(), free(1));
        let kan = kan_extension(&v, &q, &d).unwrap();
        check_bounded(&v, &kan.diagram).unwrap();
        let cl = colim_bounded(&v, &d).unwrap();
        let ck = colim_bounded(&v, &kan.diagram).unwrap();
        assert!(v.is_iso(&kan.comparison(&v, &q, &cl, &ck)));
        assert!(v.is_iso(&ck.legs[1]));
    }
}

#[test]
fn reduction_examples() {
    let k = simplex(2);
    let r = reduce_map(&SMap::identity(k.clone())).unwrap();
    assert!(r.log.is_empty());
    assert_eq!(r.red.len(), 7);

    let pt = simplex(0);
    let s0 = yoneda(&pt, Simplex { base: 0, op: Op::constant(1) });
    let r = reduce_map(&s0).unwrap();
    assert_eq!(r.red.counts(), vec![1]);
    assert!(r.residual.is_reduced() && r.f_red.is_epi());
    assert_eq!(r.log.len(), 1);

    let d1 = simplex(1);
    let s = yoneda(&d1, Simplex { base: 2, op: Op::codegeneracy(1, 0) });
    let r = reduce_map(&s).unwrap();
    assert!(crate::simplicial::is_isomorphic(&r.red, &d1));
    assert_eq!(r.log.len(), 2);
    assert!(r.residual.is_reduced());
    // the factorization through the target itself is the residual
    let u = r.factor_through(&s, &SMap::identity(s.cod.clone())).unwrap();
    assert_eq!(u.image(), r.residual.image());
}

#[test]
fn quotient_to_sphere_reduces_to_a_point_cell() {
    let q = sphere_quotient(2).unwrap();
    let r = reduce_map(&q).unwrap();
    assert!(r.residual.is_reduced());
    assert!(r.f_red.is_epi());
    assert_eq!(r.residual.after(&r.f_red), q);
}

#[test]
fn latching_examples() {
    let v = vc();
    let s2 = Arc::new(sphere(2).unwrap());
    assert!(is_cofibrant(&v, &BoundedDiagram::constant(&v, s2, free(2))).unwrap());
    assert!(!is_cofibrant(&v, &BoundedDiagram::constant(&v, simplex(1), free(1))).unwrap());
    assert!(is_cofibrant(&v, &BoundedDiagram::constant(&v, simplex(0), free(1))).unwrap());
    let sv = SSetCat::new(2).unwrap();
    let pt = Arc::new(SSet::point());
    assert!(is_cofibrant(&sv, &BoundedDiagram::constant(&sv, Arc::new(sphere(3).unwrap()), pt)).unwrap());
}

#[test]
fn horn_diagram_is_cofibrant() {
    // Δ[2,1]: vertices 0,1,2, edges 01 and 12; values ∅, B, A, C, ∅
    let v = vc();
    let (h, idx) = horn(2, 1).unwrap();
    let h = Arc::new(h);
    let (a, b, c, e) = (free(1), free(2), free(2), v.initial());
    let ab = map(&a, &b, 2, 1, &[1, 0]);
    let ac = map(&a, &c, 2, 1, &[0, 1]);
    let mut values = vec![e.clone(); h.len()];
    let mut faces = vec![vec![]; h.len()];
    let v1 = idx.id(0b010).unwrap() as usize;
    let e01 = idx.id(0b011).unwrap() as usize;
    let e12 = idx.id(0b110).unwrap() as usize;
    values[v1] = a.clone();
    values[e01] = b.clone();
    values[e12] = c.clone();
    faces[e01] = vec![ab, v.from_initial(&b)];
    faces[e12] = vec![v.from_initial(&c), ac];
    let d = BoundedDiagram::new(&v, h, values, faces).unwrap();
    assert!(is_cofibrant(&v, &d).unwrap());
}
