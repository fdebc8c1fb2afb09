//! Invariants of bounded diagrams, value categories and homotopy colimits on generated inputs.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use hocolim_core::category::{FinCat, Functor, Nerve};
use hocolim_core::chain::{direct_sum, ChainComplex, ChainMap};
use hocolim_core::diagram::{
    cat_colim, check_bounded, colim_along, colim_bounded, colim_map, is_cofibrant, is_cofibration, is_f_bounded, is_relative_cofibrant,
    kan_extension, pullback_diagram, pullback_epsilon, pullback_map, BoundedDiagram, DiagMap, IndexedDiagram,
};
use hocolim_core::gen::{sum_map, ComplexSize, Gen};
use hocolim_core::hocolim::{
    cofibrant_replacement, factor_diagram_map, hocolim, ocolim, ocolim_with, reversed_order, standard_order, verify_cone, verify_reduction,
    ReplaceMode,
};
use hocolim_core::linalg::Mat;
use hocolim_core::simplicial::{cone, product, sphere, subcomplex_of_standard, DeltaIndex, SMap, SSet};
use hocolim_core::values::{ChainCat, ValueCategory};

const SMALL: ComplexSize = ComplexSize { max_degree: 2, max_pieces: 2 };

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn cc() -> ChainCat {
    ChainCat::new(2).unwrap()
}

fn trim(mut b: Vec<usize>) -> Vec<usize> {
    while b.last() == Some(&0) {
        b.pop();
    }
    b
}

fn betti(x: &Arc<ChainComplex>) -> Vec<usize> {
    trim(x.betti())
}

/// A ⊕ B with the inclusion of A.
fn summand(a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> (Arc<ChainComplex>, ChainMap) {
    let f = a.field();
    let s = direct_sum(f, &[a.clone(), b.clone()]);
    let m = (0..a.len()).map(|k| Mat::block_diag(&[&Mat::identity(a.dim(k)), &Mat::zero(b.dim(k), 0)])).collect();
    let i = ChainMap::new(a.clone(), s.clone(), m).unwrap();
    (s, i)
}

/// F ⊕ X for a constant X, with the inclusion of F.
fn add_constant(d: &BoundedDiagram<ChainCat>, x: &Arc<ChainComplex>) -> (BoundedDiagram<ChainCat>, DiagMap<ChainCat>) {
    let sums: Vec<(Arc<ChainComplex>, ChainMap)> = d.values.iter().map(|v| summand(v, x)).collect();
    let idx = ChainMap::identity(x.clone());
    let faces = d
        .faces
        .iter()
        .enumerate()
        .map(|(s, fs)| {
            fs.iter()
                .enumerate()
                .map(|(i, m)| {
                    let from = d.base.face_nd(s as u32, i).base as usize;
                    sum_map(&sums[from].0, &sums[s].0, &[m, &idx])
                })
                .collect()
        })
        .collect();
    let values = sums.iter().map(|(v, _)| v.clone()).collect();
    let sum = BoundedDiagram { base: d.base.clone(), values, faces };
    (sum, DiagMap { comps: sums.into_iter().map(|(_, i)| i).collect() })
}

fn restrict(l: &Arc<SSet>, li: &DeltaIndex, k: &Arc<SSet>, ki: &DeltaIndex) -> SMap {
    let image = (0..l.len() as u32).map(|s| ki.simplex(&li.verts(s)).unwrap()).collect();
    SMap::new(l.clone(), k.clone(), image).unwrap()
}

fn sorted(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_by_key(|&x| (x.count_ones(), (0..64).filter(|v| x >> v & 1 == 1).collect::<Vec<u32>>()));
    masks.dedup();
    masks
}

/// A bounded diagram over one of several small bases.
fn diagram(g: &mut Gen, kind: u8) -> BoundedDiagram<ChainCat> {
    let vc = cc();
    match kind % 4 {
        0 => {
            let m = g.below(4);
            g.diagram_over_standard(m, SMALL)
        }
        1 => {
            let m = 1 + g.below(3);
            let (l, idx) = g.subcomplex(m, 10);
            g.diagram_over_subcomplex(&l, &idx, SMALL)
        }
        2 => {
            let n = 1 + g.below(2);
            g.sphere_diagram(n, SMALL)
        }
        _ => {
            let n = 2 + g.below(3);
            let p = Arc::new(g.poset(n, 0.5, false));
            let d = g.indexed_diagram(&p, SMALL, false);
            pullback_epsilon(&vc, &Nerve::of(&p).unwrap(), &d)
        }
    }
}

fn we(m: &ChainMap) -> bool {
    cc().we_certificate(m).verdict
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn kan_extensions_are_bounded_and_preserve_colimits(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let target = g.map_target();
        let (f, idx) = g.simplicial_map_indexed(3, 8, target);
        let d = g.diagram_over_subcomplex(&f.dom, &idx, SMALL);
        let kf = kan_extension(&vc, &f, &d).unwrap();
        prop_assert!(check_bounded(&vc, &kf.diagram).is_ok());
        let (cl, ck) = (colim_bounded(&vc, &d).unwrap(), colim_bounded(&vc, &kf.diagram).unwrap());
        prop_assert!(vc.is_iso(&kf.comparison(&vc, &f, &cl, &ck)));
        prop_assert!(kf.unit(&f).is_natural(&vc, &d, &pullback_diagram(&vc, &f, &kf.diagram)));
    }

    #[test]
    fn kan_extension_triangle_identities(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let target = g.map_target();
        let (f, idx) = g.simplicial_map_indexed(3, 8, target);
        let d = g.diagram_over_subcomplex(&f.dom, &idx, SMALL);
        let kf = kan_extension(&vc, &f, &d).unwrap();
        let big = &kf.diagram;
        let back = pullback_diagram(&vc, &f, big);
        let kg = kan_extension(&vc, &f, &back).unwrap();
        let counit = kg.counit(&vc, &f, big);
        prop_assert!(counit.is_natural(&vc, &kg.diagram, big));
        // ε ∘ f_!η = id on f_!F
        let lifted = kf.map_to(&vc, &kf.unit(&f), &kg);
        let first = counit.after(&vc, &lifted);
        for (s, m) in first.comps.iter().enumerate() {
            prop_assert!(vc.equal_morphisms(m, &vc.identity(&big.values[s])));
        }
        // f*ε ∘ η = id on f*G
        let second = pullback_map(&f, &counit).after(&vc, &kg.unit(&f));
        for (a, m) in second.comps.iter().enumerate() {
            prop_assert!(vc.equal_morphisms(m, &vc.identity(&back.values[a])));
        }
    }

    #[test]
    fn colimits_glue_along_subcomplexes(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let m = 1 + g.below(3);
        let (l, li) = g.subcomplex(m, 8);
        let (k, ki) = g.subcomplex(m, 8);
        let common = sorted(li.masks.iter().filter(|x| ki.masks.contains(x)).copied().collect());
        let union = sorted(li.masks.iter().chain(&ki.masks).copied().collect());
        let (a, ai) = subcomplex_of_standard(m, common).unwrap();
        let (u, ui) = subcomplex_of_standard(m, union).unwrap();
        let (a, u) = (Arc::new(a), Arc::new(u));
        let over = g.diagram_over_standard(m, SMALL);
        let (delta, di) = hocolim_core::simplicial::standard(m);
        let delta = Arc::new(delta);
        let on = |x: &Arc<SSet>, xi: &DeltaIndex| pullback_diagram(&vc, &restrict(x, xi, &delta, &di), &over);
        let (da, dl, dk, du) = (on(&a, &ai), on(&l, &li), on(&k, &ki), on(&u, &ui));
        let [ca, cl, ck, cu] = [&da, &dl, &dk, &du].map(|x| colim_bounded(&vc, x).unwrap());
        let al = colim_along(&vc, &restrict(&a, &ai, &l, &li), &ca, &cl);
        let ak = colim_along(&vc, &restrict(&a, &ai, &k, &ki), &ca, &ck);
        let push = vc.pushout(&al, &ak).unwrap();
        let cocone = [
            colim_along(&vc, &restrict(&a, &ai, &u, &ui), &ca, &cu),
            colim_along(&vc, &restrict(&l, &li, &u, &ui), &cl, &cu),
            colim_along(&vc, &restrict(&k, &ki, &u, &ui), &ck, &cu),
        ];
        prop_assert!(vc.is_iso(&vc.induced(&push, &cu.apex, &cocone)));
    }

    #[test]
    fn two_out_of_three(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let a = Arc::new(g.chain_complex(SMALL));
        let e = Arc::new(g.acyclic(SMALL));
        let c = Arc::new(g.chain_complex(SMALL));
        let (b, f) = summand(&a, &e);
        prop_assert!(we(&f));
        let h = g.chain_map(&b, &c);
        prop_assert_eq!(we(&h), we(&h.after(&f)));
        // a weak equivalence back, when one is at hand
        let r = g.chain_map(&c, &a);
        prop_assert_eq!(we(&f.after(&r)), we(&r));
    }

    #[test]
    fn sums_of_weak_equivalences(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let a = Arc::new(g.chain_complex(SMALL));
        let e = Arc::new(g.acyclic(SMALL));
        let (x, y) = (Arc::new(g.chain_complex(SMALL)), Arc::new(g.chain_complex(SMALL)));
        let (b, f) = summand(&a, &e);
        let h = g.chain_map(&x, &y);
        let src = direct_sum(vc.f, &[a.clone(), x.clone()]);
        let tgt = direct_sum(vc.f, &[b.clone(), y.clone()]);
        prop_assert_eq!(we(&sum_map(&src, &tgt, &[&f, &h])), we(&h));
    }

    #[test]
    fn pushouts_of_cofibrations(seed in any::<u64>(), acyclic in any::<bool>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let a = Arc::new(g.chain_complex(SMALL));
        let e = Arc::new(if acyclic { g.acyclic(SMALL) } else { g.chain_complex(SMALL) });
        let c = Arc::new(g.chain_complex(SMALL));
        let (_, i) = summand(&a, &e);
        prop_assert!(vc.is_cofibration(&i));
        let h = g.chain_map(&a, &c);
        let p = vc.pushout(&i, &h).unwrap();
        // legs are (A, A ⊕ E, C)
        prop_assert!(vc.is_cofibration(&p.legs[2]));
        prop_assert_eq!(we(&p.legs[2]), we(&i));
        prop_assert_eq!(we(&i), betti(&e).is_empty());
        prop_assert!(we(&i) || !acyclic);
    }

    #[test]
    fn ocolim_is_invariant_under_weak_equivalences(seed in any::<u64>(), kind in 0u8..4) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let d = diagram(&mut g, kind);
        let e = Arc::new(g.acyclic(SMALL));
        let (sum, inc) = add_constant(&d, &e);
        prop_assert!(check_bounded(&vc, &sum).is_ok());
        prop_assert!(inc.is_natural(&vc, &d, &sum) && inc.is_objectwise_we(&vc));
        let base = betti(&ocolim(&vc, &d).unwrap().colim.apex);
        prop_assert_eq!(&betti(&ocolim(&vc, &sum).unwrap().colim.apex), &base);
        let q = cofibrant_replacement(&vc, &d, ReplaceMode::Functorial).unwrap();
        prop_assert!(q.verify(&vc, &d).unwrap().ok());
        prop_assert_eq!(&betti(&ocolim(&vc, &q.qf).unwrap().colim.apex), &base);
        prop_assert_eq!(&betti(&colim_bounded(&vc, &q.qf).unwrap().apex), &base);
    }

    #[test]
    fn ocolim_does_not_depend_on_cell_order(seed in any::<u64>(), kind in 0u8..4) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let d = diagram(&mut g, kind);
        let base = betti(&ocolim(&vc, &d).unwrap().colim.apex);
        for mode in [ReplaceMode::Minimal, ReplaceMode::Functorial] {
            for order in [standard_order(&d.base), reversed_order(&d.base)] {
                let o = ocolim_with(&vc, &d, mode, &order).unwrap();
                prop_assert!(is_cofibrant(&vc, &o.replacement.qf).unwrap());
                prop_assert_eq!(&betti(&o.colim.apex), &base);
            }
        }
    }

    #[test]
    fn cones_collapse_to_the_apex(seed in any::<u64>(), spherical in any::<bool>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let k = if spherical {
            let n = 1 + g.below(2);
            Arc::new(sphere(n).unwrap())
        } else {
            let m = 1 + g.below(2);
            let a = g.subcomplex(m, 4).0;
            let b = g.subcomplex(1, 3).0;
            product(&a, &b).space
        };
        let c = cone(&k);
        let x = Arc::new(g.chain_complex(SMALL));
        let f = BoundedDiagram::constant(&vc, c.space.clone(), x.clone());
        let q = cofibrant_replacement(&vc, &f, ReplaceMode::Minimal).unwrap();
        let r = verify_cone(&vc, &c, &q.qf).unwrap();
        prop_assert!(r.verdict);
        prop_assert_eq!(trim(r.betti["colim"].clone()), betti(&x));
    }

    #[test]
    fn hocolim_over_a_terminal_object(seed in any::<u64>(), constant in any::<bool>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let n = 1 + g.below(4);
        let p = Arc::new(g.poset(n, 0.5, true));
        let d = g.indexed_diagram(&p, SMALL, constant);
        let t = (0..n as u32).find(|&t| (0..n as u32).all(|x| p.hom(x, t).len() == 1)).unwrap();
        let h = hocolim(&vc, &d).unwrap();
        prop_assert_eq!(betti(h.apex()), betti(&d.objs[t as usize]));
        prop_assert_eq!(betti(&cat_colim(&vc, &d).unwrap().apex), betti(&d.objs[t as usize]));
    }

    #[test]
    fn homotopy_pushouts_along_cofibrations(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let c = Arc::new(g.chain_complex(SMALL));
        let extra = Arc::new(g.chain_complex(SMALL));
        let (b, i) = summand(&c, &extra);
        let y = Arc::new(g.chain_complex(SMALL));
        let h = g.chain_map(&c, &y);
        let strict = vc.pushout(&i, &h).unwrap();
        let span = Arc::new(FinCat::span());
        let objs = vec![b.clone(), c.clone(), y.clone()];
        let mors = (0..span.num_morphisms() as u32)
            .map(|m| match (span.src(m), span.tgt(m)) {
                (1, 0) => i.clone(),
                (1, 2) => h.clone(),
                (x, _) => vc.identity(&objs[x as usize]),
            })
            .collect();
        let d = IndexedDiagram::new(&vc, span, objs, mors).unwrap();
        prop_assert_eq!(betti(hocolim(&vc, &d).unwrap().apex()), betti(&strict.apex));
    }

    #[test]
    fn hocolim_is_invariant_under_equivalent_reindexing(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let n = 2 + g.below(3);
        let p = Arc::new(g.poset(n, 0.5, false));
        let d = g.indexed_diagram(&p, SMALL, false);
        // pulling back along an isomorphism of categories
        let perm: Vec<u32> = (0..n as u32).rev().collect();
        let q = Arc::new(FinCat::poset(n, |a, b| !p.hom(perm[a] as u32, perm[b] as u32).is_empty()).unwrap());
        let mor = (0..q.num_morphisms() as u32).map(|m| p.hom(perm[q.src(m) as usize], perm[q.tgt(m) as usize])[0]).collect();
        let iso = Functor::new(q.clone(), p.clone(), perm.clone(), mor).unwrap();
        let moved = d.pullback(&iso);
        prop_assert_eq!(betti(hocolim(&vc, &moved).unwrap().apex()), betti(hocolim(&vc, &d).unwrap().apex()));
    }
}

/// The map ⊕ src → ⊕ tgt sending the i-th summand identically onto summand `slot[i]`.
fn embed(src: &[Arc<ChainComplex>], tgt: &[Arc<ChainComplex>], slot: &[usize]) -> ChainMap {
    let f = cc().f;
    let (s, t) = (direct_sum(f, src), direct_sum(f, tgt));
    let m = (0..s.len())
        .map(|k| {
            let offsets = |parts: &[Arc<ChainComplex>]| parts.iter().scan(0, |acc, p| Some(std::mem::replace(acc, *acc + p.dim(k)))).collect::<Vec<_>>();
            let (so, to) = (offsets(src), offsets(tgt));
            let mut e = vec![0i64; t.dim(k) * s.dim(k)];
            for (i, &j) in slot.iter().enumerate() {
                for r in 0..src[i].dim(k) {
                    e[(to[j] + r) * s.dim(k) + so[i] + r] = 1;
                }
            }
            Mat::from_row_major(f, t.dim(k), s.dim(k), &e).unwrap()
        })
        .collect();
    ChainMap::new(s, t, m).unwrap()
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn colimits_over_nerves_agree_with_category_colimits(seed in any::<u64>(), dag in any::<bool>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let n = 1 + g.below(4);
        let cat = Arc::new(if dag { g.dag_category(n, 5) } else { g.poset(n, 0.5, false) });
        let constant = g.coin(0.3);
        let d = g.indexed_diagram(&cat, SMALL, constant);
        let nerve = Nerve::of(&cat).unwrap();
        let cn = colim_bounded(&vc, &pullback_epsilon(&vc, &nerve, &d)).unwrap();
        let cf = cat_colim(&vc, &d).unwrap();
        let cocone: Vec<ChainMap> = (0..n as u32).map(|i| cn.legs[nerve.simplex_of(&cat, &[i], &[]).base as usize].clone()).collect();
        prop_assert!(vc.is_iso(&vc.induced(&cf, &cn.apex, &cocone)));
    }

    #[test]
    fn boundedness_and_cofibrancy_are_local(seed in any::<u64>(), pulled in any::<bool>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let target = g.map_target();
        let (f, idx) = g.simplicial_map_indexed(2, 6, target);
        let d = if pulled {
            let over = g.diagram_over_subcomplex(&f.dom, &idx, SMALL);
            let up = kan_extension(&vc, &f, &over).unwrap().diagram;
            pullback_diagram(&vc, &f, &up)
        } else {
            g.diagram_over_subcomplex(&f.dom, &idx, SMALL)
        };
        // the projection L × Δ[1] → L is an epimorphism
        let interval = Arc::new(hocolim_core::simplicial::standard(1).0);
        let e = product(&f.dom, &interval).pr1;
        prop_assert!(e.is_epi());
        let de = pullback_diagram(&vc, &e, &d);
        let fe = f.after(&e);
        prop_assert_eq!(is_f_bounded(&vc, &de, &fe), is_f_bounded(&vc, &d, &f));
        prop_assert!(!pulled || is_f_bounded(&vc, &d, &f));
        prop_assert_eq!(is_relative_cofibrant(&vc, &de, &fe).unwrap(), is_relative_cofibrant(&vc, &d, &f).unwrap());
        let q = cofibrant_replacement(&vc, &d, ReplaceMode::Minimal).unwrap().qf;
        let qe = pullback_diagram(&vc, &e, &q);
        prop_assert_eq!(is_relative_cofibrant(&vc, &qe, &fe).unwrap(), is_relative_cofibrant(&vc, &q, &f).unwrap());
    }

    #[test]
    fn reduction_round_trips(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let target = g.map_target();
        let (f, idx) = g.simplicial_map_indexed(3, 8, target);
        let d = g.diagram_over_subcomplex(&f.dom, &idx, SMALL);
        let up = kan_extension(&vc, &f, &d).unwrap().diagram;
        prop_assert!(verify_reduction(&vc, &f, &up).unwrap().verdict);
    }

    #[test]
    fn pushout_ladders_of_cofibrations(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let mut cx = || Arc::new(g.chain_complex(SMALL));
        let (a0, p, x, y) = (cx(), cx(), cx(), cx());
        let (c0, w) = (cx(), cx());
        // top row B0 = A0 ⊕ P ← A0 → C0, bottom row B1 = A0 ⊕ P ⊕ X ⊕ Y ← A0 ⊕ X → C0 ⊕ W
        let f0 = embed(&[a0.clone()], &[a0.clone(), p.clone()], &[0]);
        let g0 = g.chain_map(&a0, &c0);
        let f1 = embed(&[a0.clone(), x.clone()], &[a0.clone(), p.clone(), x.clone(), y.clone()], &[0, 2]);
        let h = g.chain_map(&x, &w);
        let (a1, c1) = (direct_sum(vc.f, &[a0.clone(), x.clone()]), direct_sum(vc.f, &[c0.clone(), w.clone()]));
        let g1 = sum_map(&a1, &c1, &[&g0, &h]);
        let a = embed(&[a0.clone()], &[a0.clone(), x.clone()], &[0]);
        let b = embed(&[a0.clone(), p.clone()], &[a0.clone(), p.clone(), x.clone(), y.clone()], &[0, 1]);
        let c = embed(&[c0.clone()], &[c0.clone(), w.clone()], &[0]);
        prop_assert!(vc.equal_morphisms(&f1.after(&a), &b.after(&f0)));
        prop_assert!(vc.equal_morphisms(&g1.after(&a), &c.after(&g0)));
        prop_assert!(vc.is_cofibration(&f0));
        // M = B0 ⊔_{A0} A1 → B1
        let m = vc.pushout(&f0, &a).unwrap();
        let to_b1 = vc.induced(&m, &vc.tgt(&f1), &[f1.after(&a), b.clone(), f1.clone()]);
        prop_assert!(vc.is_cofibration(&to_b1));
        let (p0, p1) = (vc.pushout(&f0, &g0).unwrap(), vc.pushout(&f1, &g1).unwrap());
        let ladder = vc.induced(&p0, &p1.apex, &[p1.legs[0].after(&a), p1.legs[1].after(&b), p1.legs[2].after(&c)]);
        prop_assert!(vc.is_cofibration(&ladder));
    }

    #[test]
    fn colimits_of_cofibrations_are_cofibrations(seed in any::<u64>(), kind in 0u8..4) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let d = diagram(&mut g, kind);
        let x = Arc::new(g.chain_complex(SMALL));
        let (sum, inc) = add_constant(&d, &x);
        let fac = factor_diagram_map(&vc, &inc, &d, &sum).unwrap();
        prop_assert!(is_cofibration(&vc, &fac.cof, &d, &fac.z).unwrap());
        prop_assert!(fac.we.is_objectwise_we(&vc));
        let c = colim_map(&vc, &fac.cof, &colim_bounded(&vc, &d).unwrap(), &colim_bounded(&vc, &fac.z).unwrap());
        prop_assert!(vc.is_cofibration(&c));
        // and after pulling back along the projection K × Δ[1] → K, where Ψ itself need not stay a cofibration
        let interval = Arc::new(hocolim_core::simplicial::standard(1).0);
        let e = product(&d.base, &interval).pr1;
        let (ed, ez) = (pullback_diagram(&vc, &e, &d), pullback_diagram(&vc, &e, &fac.z));
        let psi = pullback_map(&e, &fac.cof);
        let c = colim_map(&vc, &psi, &colim_bounded(&vc, &ed).unwrap(), &colim_bounded(&vc, &ez).unwrap());
        prop_assert!(vc.is_cofibration(&c));
    }

    #[test]
    fn hocolim_over_an_initial_object(seed in any::<u64>()) {
        let vc = cc();
        let mut g = Gen::new(seed, vc.f);
        let n = 1 + g.below(4);
        let p = Arc::new(g.poset(n, 0.5, true).opposite());
        let x = Arc::new(g.chain_complex(SMALL));
        // X ⊕ E_i with E_i acyclic and the non-identity maps zero on E: every map is a weak equivalence
        let parts: Vec<(Arc<ChainComplex>, Arc<ChainComplex>)> = (0..n).map(|_| Arc::new(g.acyclic(SMALL))).map(|e| (direct_sum(vc.f, &[x.clone(), e.clone()]), e)).collect();
        let objs: Vec<Arc<ChainComplex>> = parts.iter().map(|(s, _)| s.clone()).collect();
        let mors = (0..p.num_morphisms() as u32)
            .map(|m| {
                let (s, t) = (p.src(m) as usize, p.tgt(m) as usize);
                if p.is_identity(m) {
                    vc.identity(&objs[s])
                } else {
                    sum_map(&objs[s], &objs[t], &[&ChainMap::identity(x.clone()), &ChainMap::zero(parts[s].1.clone(), parts[t].1.clone())])
                }
            })
            .collect();
        let d = IndexedDiagram::new(&vc, p.clone(), objs, mors).unwrap();
        let h = hocolim(&vc, &d).unwrap();
        prop_assert_eq!(betti(h.apex()), betti(&x));
    }
}
