#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use hocolim_core::category::{CatDiagram, FinCat, Functor};
use hocolim_core::chain::{ChainComplex, ChainMap};
use hocolim_core::diagram::IndexedDiagram;
use hocolim_core::io::{AnyIndexed, Workspace};
use hocolim_core::linalg::{Fp, Mat};
use hocolim_core::values::{ChainCat, ValueCategory};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Monotone map of posets given on objects.
pub fn monotone(p: &Arc<FinCat>, q: &Arc<FinCat>, obj: Vec<u32>) -> Functor {
    let mor = (0..p.num_morphisms() as u32).map(|m| q.hom(obj[p.src(m) as usize], obj[p.tgt(m) as usize])[0]).collect();
    Functor::new(p.clone(), q.clone(), obj, mor).expect("monotone")
}

/// The span (2) ← {(0,1,2) → (0,2), (0,1,2) → (1,2)} → {(0,1) → (0), (0,1) → (1)}
/// whose Grothendieck construction is the cube of nonempty faces of Δ[2].
pub fn cube_instance() -> (Arc<FinCat>, Vec<String>, CatDiagram) {
    let base = Arc::new(FinCat::span().renamed(&["left", "middle", "right"]).unwrap());
    let vee = |names: &[&str]| Arc::new(FinCat::poset(3, |a, b| a == b || a == 0).unwrap().renamed(names).unwrap());
    let left = Arc::new(FinCat::trivial().renamed(&["(2)"]).unwrap());
    let middle = vee(&["(0,1,2)", "(0,2)", "(1,2)"]);
    let right = vee(&["(0,1)", "(0)", "(1)"]);
    let fibers = vec![left.clone(), middle.clone(), right.clone()];
    let transition = (0..base.num_morphisms() as u32)
        .map(|m| match (base.src(m), base.tgt(m)) {
            (1, 0) => Functor::point(left.clone(), 0).after(&Functor::to_point(middle.clone())),
            (1, 2) => monotone(&middle, &right, vec![0, 1, 2]),
            (x, _) => Functor::identity(fibers[x as usize].clone()),
        })
        .collect();
    let h = CatDiagram::new(base.clone(), fibers, transition).unwrap();
    (base, vec!["H_left".into(), "H_middle".into(), "H_right".into()], h)
}

/// The base category and the fibers as two workspaces.
pub fn cube_workspaces() -> (Workspace, Workspace) {
    let (base, names, h) = cube_instance();
    let mut i = Workspace::default();
    i.add_category("I", base.clone());
    let mut w = Workspace::default();
    w.add_category("I", base);
    for (n, c) in names.iter().zip(&h.fibers) {
        w.add_category(n, c.clone());
    }
    w.add_cat_diagram("H", "I", &names, h);
    (i, w)
}

pub fn f2() -> Fp {
    Fp::new(2).unwrap()
}

pub fn point_complex() -> Arc<ChainComplex> {
    Arc::new(ChainComplex::new(f2(), vec![1], vec![]).unwrap())
}

/// Cellular chains of the circle with one vertex and one edge.
pub fn circle_complex() -> Arc<ChainComplex> {
    Arc::new(ChainComplex::new(f2(), vec![1, 1], vec![Mat::zero(1, 1)]).unwrap())
}

pub fn augmentation(x: &Arc<ChainComplex>) -> ChainMap {
    let mut m = vec![Mat::from_row_major(f2(), 1, x.dim(0), &vec![1; x.dim(0)]).unwrap()];
    for k in 1..x.len() {
        m.push(Mat::zero(0, x.dim(k)));
    }
    ChainMap::new(x.clone(), point_complex(), m).unwrap()
}

/// ∗ ← S¹ → ∗ over the span, as a category file and a diagram file.
pub fn pushout_workspaces() -> (Workspace, Workspace) {
    let v = ChainCat::new(2).unwrap();
    let c = Arc::new(FinCat::span());
    let s1 = circle_complex();
    let objs = vec![point_complex(), s1.clone(), point_complex()];
    let mors = (0..c.num_morphisms() as u32)
        .map(|m| if c.is_identity(m) { v.identity(&objs[c.src(m) as usize]) } else { augmentation(&s1) })
        .collect();
    let d = IndexedDiagram::new(&v, c.clone(), objs, mors).unwrap();
    let mut cat = Workspace::default();
    cat.add_category("pushout", c.clone());
    let mut f = Workspace::default();
    f.add_category("pushout", c);
    f.add_indexed("F", "pushout", AnyIndexed::Chain(v, d));
    (cat, f)
}
