//! Finite categories, functors, nerves and the constructions built on them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::chain::sset_homology;
use crate::error::{Error, Result};
use crate::linalg::Fp;
use crate::simplicial::{epi_mono, SMap, SSet, Simplex};

const NONE: u32 = u32::MAX;

/// Finite category with a full composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    names: Vec<String>,
    ident: Vec<u32>,
    comp: Vec<u32>,
    hom: Vec<Vec<u32>>,
    loop_free: bool,
}

/// Why a table fails to be a category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatDefect {
    Identity(u32),
    Missing(u32, u32),
    Endpoints(u32, u32),
    Unit(u32),
    Assoc(u32, u32, u32),
}

impl std::fmt::Display for CatDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatDefect::Identity(x) => write!(f, "identity of object {x} is not an endomorphism"),
            CatDefect::Missing(g, h) => write!(f, "composite of {g} after {h} is missing"),
            CatDefect::Endpoints(g, h) => write!(f, "composite of {g} after {h} has wrong endpoints"),
            CatDefect::Unit(m) => write!(f, "unit law fails for morphism {m}"),
            CatDefect::Assoc(a, b, c) => write!(f, "associativity fails for ({a}, {b}, {c})"),
        }
    }
}

impl FinCat {
    /// Build from non-identity morphisms and a composition rule on them.
    /// `compose(g, f)` is consulted only for composable non-identity pairs
    /// and must return a morphism index among all morphisms (identities are
    /// numbered after the given ones, one per object in order).
    pub fn build(
        objects: Vec<String>,
        arrows: Vec<(u32, u32, String)>,
        mut compose: impl FnMut(u32, u32) -> Option<u32>,
    ) -> Result<FinCat> {
        let n = objects.len() as u32;
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let mut names = Vec::new();
        for (a, b, name) in arrows {
            if a >= n || b >= n {
                return Err(Error::Dangling(format!("morphism {name} has an unknown endpoint")));
            }
            src.push(a);
            tgt.push(b);
            names.push(name);
        }
        let base = src.len() as u32;
        let mut ident = Vec::new();
        for x in 0..n {
            ident.push(src.len() as u32);
            src.push(x);
            tgt.push(x);
            names.push(format!("id_{}", objects[x as usize]));
        }
        let m = src.len();
        let mut comp = vec![NONE; m * m];
        for g in 0..m as u32 {
            for f in 0..m as u32 {
                if tgt[f as usize] != src[g as usize] {
                    continue;
                }
                let h = if g >= base {
                    f
                } else if f >= base {
                    g
                } else {
                    match compose(g, f) {
                        Some(h) => h,
                        None => continue,
                    }
                };
                comp[g as usize * m + f as usize] = h;
            }
        }
        FinCat::from_table(objects, src, tgt, names, ident, comp)
    }

    fn from_table(
        objects: Vec<String>,
        src: Vec<u32>,
        tgt: Vec<u32>,
        names: Vec<String>,
        ident: Vec<u32>,
        comp: Vec<u32>,
    ) -> Result<FinCat> {
        let mut hom = vec![Vec::new(); objects.len() * objects.len()];
        for m in 0..src.len() {
            hom[src[m] as usize * objects.len() + tgt[m] as usize].push(m as u32);
        }
        let mut c = FinCat { objects, src, tgt, names, ident, comp, hom, loop_free: false };
        if let Some(d) = c.defect() {
            return Err(Error::Invalid(format!("not a category: {d}")));
        }
        c.loop_free = c.loop_witness().is_none();
        Ok(c)
    }

    /// First failure of the category axioms, if any.
    pub fn defect(&self) -> Option<CatDefect> {
        let m = self.src.len();
        for (x, &i) in self.ident.iter().enumerate() {
            if self.src[i as usize] != x as u32 || self.tgt[i as usize] != x as u32 {
                return Some(CatDefect::Identity(x as u32));
            }
        }
        for g in 0..m as u32 {
            for f in 0..m as u32 {
                let composable = self.tgt[f as usize] == self.src[g as usize];
                let h = self.comp[g as usize * m + f as usize];
                if composable && h == NONE {
                    return Some(CatDefect::Missing(g, f));
                }
                if composable && (h as usize >= m || self.src[h as usize] != self.src[f as usize] || self.tgt[h as usize] != self.tgt[g as usize]) {
                    return Some(CatDefect::Endpoints(g, f));
                }
            }
        }
        for f in 0..m as u32 {
            let (a, b) = (self.src[f as usize], self.tgt[f as usize]);
            if self.compose(self.ident[b as usize], f) != f || self.compose(f, self.ident[a as usize]) != f {
                return Some(CatDefect::Unit(f));
            }
        }
        for f in 0..m as u32 {
            for g in self.out_of(self.tgt[f as usize]) {
                let gf = self.compose(g, f);
                for h in self.out_of(self.tgt[g as usize]) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Some(CatDefect::Assoc(h, g, f));
                    }
                }
            }
        }
        None
    }

    fn out_of(&self, x: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.objects.len() as u32).flat_map(move |y| self.hom(x, y).iter().copied())
    }

    /// A witness that the category is not loop-free, if any.
    pub fn loop_witness(&self) -> Option<String> {
        for m in 0..self.src.len() as u32 {
            if self.src[m as usize] == self.tgt[m as usize] && !self.is_identity(m) {
                return Some(format!("non-identity endomorphism {}", self.names[m as usize]));
            }
        }
        // cycle search on the relation "there is a non-identity morphism"
        let n = self.objects.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<u32> = Vec::new();
        fn dfs(c: &FinCat, x: usize, state: &mut [u8], stack: &mut Vec<u32>) -> Option<Vec<u32>> {
            state[x] = 1;
            stack.push(x as u32);
            for y in 0..c.objects.len() {
                if y == x || c.hom(x as u32, y as u32).is_empty() {
                    continue;
                }
                if state[y] == 1 {
                    let start = stack.iter().position(|&s| s as usize == y).unwrap();
                    return Some(stack[start..].to_vec());
                }
                if state[y] == 0 {
                    if let Some(c) = dfs(c, y, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[x] = 2;
            None
        }
        for x in 0..n {
            if state[x] == 0 {
                if let Some(cyc) = dfs(self, x, &mut state, &mut stack) {
                    let names: Vec<&str> = cyc.iter().map(|&o| self.objects[o as usize].as_str()).collect();
                    return Some(format!("cycle through objects {}", names.join(" -> ")));
                }
            }
        }
        None
    }

    pub fn is_loop_free(&self) -> bool {
        self.loop_free
    }

    pub fn require_loop_free(&self) -> Result<()> {
        match self.loop_witness() {
            None => Ok(()),
            Some(w) => Err(Error::NotLoopFree(w)),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn object_name(&self, x: u32) -> &str {
        &self.objects[x as usize]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_name(&self, m: u32) -> &str {
        &self.names[m as usize]
    }

    pub fn src(&self, m: u32) -> u32 {
        self.src[m as usize]
    }

    pub fn tgt(&self, m: u32) -> u32 {
        self.tgt[m as usize]
    }

    pub fn id(&self, x: u32) -> u32 {
        self.ident[x as usize]
    }

    pub fn is_identity(&self, m: u32) -> bool {
        self.ident[self.src[m as usize] as usize] == m
    }

    pub fn hom(&self, x: u32, y: u32) -> &[u32] {
        &self.hom[x as usize * self.objects.len() + y as usize]
    }

    /// g ∘ f
    pub fn compose(&self, g: u32, f: u32) -> u32 {
        let h = self.comp[g as usize * self.src.len() + f as usize];
        assert!(h != NONE, "composing non-composable morphisms {g} and {f}");
        h
    }

    /// Non-identity morphisms in index order.
    pub fn non_identities(&self) -> Vec<u32> {
        (0..self.src.len() as u32).filter(|&m| !self.is_identity(m)).collect()
    }

    pub fn trivial() -> FinCat {
        FinCat::discrete(1)
    }

    pub fn discrete(n: usize) -> FinCat {
        FinCat::build((0..n).map(|i| i.to_string()).collect(), vec![], |_, _| None).expect("discrete")
    }

    /// The same category with new object names.
    pub fn renamed(mut self, names: &[&str]) -> Result<FinCat> {
        if names.len() != self.objects.len() {
            return Err(Error::Invalid(format!("{} names for {} objects", names.len(), self.objects.len())));
        }
        self.objects = names.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    /// The poset on 0..n with a → b iff `le(a, b)`; `le` must be a partial order.
    pub fn poset(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<FinCat> {
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) {
                    if le(b, a) {
                        return Err(Error::Invalid(format!("relation is not antisymmetric at {a}, {b}")));
                    }
                    index.insert((a as u32, b as u32), arrows.len() as u32);
                    arrows.push((a as u32, b as u32, format!("{a}<{b}")));
                }
            }
        }
        let pairs: Vec<(u32, u32)> = arrows.iter().map(|&(a, b, _)| (a, b)).collect();
        FinCat::build((0..n).map(|i| i.to_string()).collect(), arrows, |g, f| {
            let (a, _) = pairs[f as usize];
            let (_, c) = pairs[g as usize];
            if a == c {
                return None;
            }
            index.get(&(a, c)).copied()
        })
    }

    /// The ordinal [n] = {0 < 1 < … < n}.
    pub fn ordinal(n: usize) -> FinCat {
        FinCat::poset(n + 1, |a, b| a <= b).expect("ordinal")
    }

    /// The free category on a finite acyclic multigraph (morphisms are paths).
    pub fn free(objects: usize, edges: &[(u32, u32)]) -> Result<FinCat> {
        // paths stored as edge sequences in composition order (first edge first)
        let mut paths: Vec<Vec<u32>> = edges.iter().enumerate().map(|(e, _)| vec![e as u32]).collect();
        let mut frontier = paths.clone();
        let limit = 10_000;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                let end = edges[*p.last().unwrap() as usize].1;
                for (e, &(a, _)) in edges.iter().enumerate() {
                    if a == end {
                        let mut q = p.clone();
                        q.push(e as u32);
                        next.push(q);
                    }
                }
            }
            paths.extend(next.iter().cloned());
            if paths.len() > limit {
                return Err(Error::NotLoopFree("the graph has a cycle or too many paths".into()));
            }
            frontier = next;
        }
        let index: HashMap<Vec<u32>, u32> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let arrows = paths
            .iter()
            .map(|p| {
                let a = edges[p[0] as usize].0;
                let b = edges[*p.last().unwrap() as usize].1;
                let name = p.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(".");
                (a, b, name)
            })
            .collect();
        FinCat::build((0..objects).map(|i| i.to_string()).collect(), arrows, |g, f| {
            let mut p = paths[f as usize].clone();
            p.extend_from_slice(&paths[g as usize]);
            index.get(&p).copied()
        })
    }

    /// Two objects joined by two parallel arrows.
    pub fn parallel_arrows() -> FinCat {
        FinCat::free(2, &[(0, 1), (0, 1)]).expect("parallel arrows")
    }

    /// The span shape 0 ← 1 → 2.
    pub fn span() -> FinCat {
        FinCat::poset(3, |a, b| a == b || (a == 1 && b != 1)).expect("span")
    }

    pub fn opposite(&self) -> FinCat {
        let m = self.src.len();
        let mut comp = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                comp[g * m + f] = self.comp[f * m + g];
            }
        }
        FinCat::from_table(
            self.objects.clone(),
            self.tgt.clone(),
            self.src.clone(),
            self.names.iter().map(|s| format!("{s}^op")).collect(),
            self.ident.clone(),
            comp,
        )
        .expect("opposite category")
    }

    /// Product category; object (i, j) has index i·|J| + j and morphism (α, β) has index α·|Mor J| + β.
    pub fn product(&self, other: &FinCat) -> FinCat {
        let (n2, m2) = (other.objects.len(), other.src.len());
        let mut objects = Vec::new();
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("({a},{b})"));
            }
        }
        let (mut src, mut tgt, mut names) = (Vec::new(), Vec::new(), Vec::new());
        for f in 0..self.src.len() {
            for g in 0..m2 {
                src.push(self.src[f] * n2 as u32 + other.src[g]);
                tgt.push(self.tgt[f] * n2 as u32 + other.tgt[g]);
                names.push(format!("({},{})", self.names[f], other.names[g]));
            }
        }
        let ident = (0..self.objects.len())
            .flat_map(|a| (0..n2).map(move |b| (a, b)))
            .map(|(a, b)| self.ident[a] * m2 as u32 + other.ident[b])
            .collect();
        let m = src.len();
        let mut comp = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                let (g1, g2) = (g / m2, g % m2);
                let (f1, f2) = (f / m2, f % m2);
                let c1 = self.comp[g1 * self.src.len() + f1];
                let c2 = other.comp[g2 * m2 + f2];
                if c1 != NONE && c2 != NONE {
                    comp[g * m + f] = c1 * m2 as u32 + c2;
                }
            }
        }
        FinCat::from_table(objects, src, tgt, names, ident, comp).expect("product category")
    }
}

/// CI: I with a new terminal object (the last object).
pub fn cone_cat(c: &FinCat) -> FinCat {
    let n = c.num_objects() as u32;
    let mut objects = c.objects.clone();
    objects.push("e".into());
    let mut arrows: Vec<(u32, u32, String)> = c
        .non_identities()
        .into_iter()
        .map(|m| (c.src(m), c.tgt(m), c.names[m as usize].clone()))
        .collect();
    let old: Vec<u32> = c.non_identities();
    let base = arrows.len() as u32;
    for x in 0..n {
        arrows.push((x, n, format!("{}->e", c.objects[x as usize])));
    }
    let old_index: HashMap<u32, u32> = old.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    // identities of the new category: base + n .. base + 2n
    let ident_new = |x: u32| base + n + x;
    FinCat::build(objects, arrows, |g, f| {
        if g >= base {
            // (y → e) ∘ f = src(f) → e
            let x = if f >= base { return None } else { c.src(old[f as usize]) };
            return Some(base + x);
        }
        if f >= base {
            return None;
        }
        let h = c.compose(old[g as usize], old[f as usize]);
        Some(if c.is_identity(h) { ident_new(c.src(h)) } else { old_index[&h] })
    })
    .expect("cone category")
}

/// Functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub src: Arc<FinCat>,
    pub tgt: Arc<FinCat>,
    pub obj: Vec<u32>,
    pub mor: Vec<u32>,
}

impl Functor {
    pub fn new(src: Arc<FinCat>, tgt: Arc<FinCat>, obj: Vec<u32>, mor: Vec<u32>) -> Result<Functor> {
        if obj.len() != src.num_objects() || mor.len() != src.num_morphisms() {
            return Err(Error::Invalid("functor data has the wrong size".into()));
        }
        let f = Functor { src, tgt, obj, mor };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        for (x, &y) in self.obj.iter().enumerate() {
            if y as usize >= self.tgt.num_objects() {
                return Err(Error::Dangling(format!("object {x} maps to unknown object {y}")));
            }
            if self.mor[self.src.id(x as u32) as usize] != self.tgt.id(y) {
                return Err(Error::NotFunctorial(format!("identity of {x} is not preserved")));
            }
        }
        for (m, &n) in self.mor.iter().enumerate() {
            if n as usize >= self.tgt.num_morphisms() {
                return Err(Error::Dangling(format!("morphism {m} maps to unknown morphism {n}")));
            }
            let m = m as u32;
            if self.tgt.src(n) != self.obj[self.src.src(m) as usize] || self.tgt.tgt(n) != self.obj[self.src.tgt(m) as usize] {
                return Err(Error::NotFunctorial(format!("morphism {m} has mismatched endpoints")));
            }
        }
        let k = self.src.num_morphisms() as u32;
        for g in 0..k {
            for f in 0..k {
                if self.src.tgt(f) == self.src.src(g) {
                    let lhs = self.mor[self.src.compose(g, f) as usize];
                    let rhs = self.tgt.compose(self.mor[g as usize], self.mor[f as usize]);
                    if lhs != rhs {
                        return Err(Error::NotFunctorial(format!("composite of {g} after {f} is not preserved")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCat>) -> Functor {
        Functor {
            obj: (0..c.num_objects() as u32).collect(),
            mor: (0..c.num_morphisms() as u32).collect(),
            src: c.clone(),
            tgt: c,
        }
    }

    /// The functor from the trivial category picking an object.
    pub fn point(tgt: Arc<FinCat>, x: u32) -> Functor {
        Functor { src: Arc::new(FinCat::trivial()), obj: vec![x], mor: vec![tgt.id(x)], tgt }
    }

    /// The functor to the trivial category.
    pub fn to_point(src: Arc<FinCat>) -> Functor {
        Functor {
            obj: vec![0; src.num_objects()],
            mor: vec![0; src.num_morphisms()],
            src,
            tgt: Arc::new(FinCat::trivial()),
        }
    }

    /// self ∘ g
    pub fn after(&self, g: &Functor) -> Functor {
        Functor {
            src: g.src.clone(),
            tgt: self.tgt.clone(),
            obj: g.obj.iter().map(|&x| self.obj[x as usize]).collect(),
            mor: g.mor.iter().map(|&m| self.mor[m as usize]).collect(),
        }
    }
}

/// A strict functor from a base category into finite categories.
#[derive(Clone, Debug)]
pub struct CatDiagram {
    pub base: Arc<FinCat>,
    pub fibers: Vec<Arc<FinCat>>,
    pub transition: Vec<Functor>,
}

impl CatDiagram {
    pub fn new(base: Arc<FinCat>, fibers: Vec<Arc<FinCat>>, transition: Vec<Functor>) -> Result<CatDiagram> {
        if fibers.len() != base.num_objects() || transition.len() != base.num_morphisms() {
            return Err(Error::Invalid("category diagram has the wrong size".into()));
        }
        for (m, t) in transition.iter().enumerate() {
            let m = m as u32;
            if *t.src != *fibers[base.src(m) as usize] || *t.tgt != *fibers[base.tgt(m) as usize] {
                return Err(Error::Mismatch(format!("transition {m} has the wrong endpoints")));
            }
        }
        for x in 0..base.num_objects() as u32 {
            if transition[base.id(x) as usize] != Functor::identity(fibers[x as usize].clone()) {
                return Err(Error::NotFunctorial(format!("transition of the identity of {x} is not the identity")));
            }
        }
        for g in 0..base.num_morphisms() as u32 {
            for f in 0..base.num_morphisms() as u32 {
                if base.tgt(f) == base.src(g) {
                    let lhs = &transition[base.compose(g, f) as usize];
                    let rhs = transition[g as usize].after(&transition[f as usize]);
                    if lhs.obj != rhs.obj || lhs.mor != rhs.mor {
                        return Err(Error::NotFunctorial(format!("transitions do not compose at ({g}, {f})")));
                    }
                }
            }
        }
        Ok(CatDiagram { base, fibers, transition })
    }

    /// The diagram with the same fiber everywhere and identity transitions.
    pub fn constant(base: Arc<FinCat>, fiber: Arc<FinCat>) -> CatDiagram {
        let fibers = vec![fiber.clone(); base.num_objects()];
        let transition = vec![Functor::identity(fiber); base.num_morphisms()];
        CatDiagram { base, fibers, transition }
    }
}

/// Nerve of a loop-free category together with the chain behind each simplex.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub space: Arc<SSet>,
    /// Objects (i_0, …, i_q) of each non-degenerate simplex.
    pub objs: Vec<Vec<u32>>,
    /// Morphisms (α_1, …, α_q) with α_k: i_k → i_{k-1}.
    pub mors: Vec<Vec<u32>>,
    index: HashMap<(usize, Vec<u32>), u32>,
}

impl Nerve {
    pub fn of(c: &FinCat) -> Result<Nerve> {
        c.require_loop_free()?;
        let mut objs: Vec<Vec<u32>> = Vec::new();
        let mut mors: Vec<Vec<u32>> = Vec::new();
        for x in 0..c.num_objects() as u32 {
            objs.push(vec![x]);
            mors.push(vec![]);
        }
        let non_id = c.non_identities();
        let mut layer: Vec<usize> = Vec::new();
        for &a in &non_id {
            layer.push(objs.len());
            objs.push(vec![c.tgt(a), c.src(a)]);
            mors.push(vec![a]);
        }
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &s in &layer {
                let last = *objs[s].last().unwrap();
                for &a in &non_id {
                    if c.tgt(a) == last {
                        let mut o = objs[s].clone();
                        o.push(c.src(a));
                        let mut m = mors[s].clone();
                        m.push(a);
                        next.push(objs.len());
                        objs.push(o);
                        mors.push(m);
                    }
                }
            }
            layer = next;
        }
        let index: HashMap<(usize, Vec<u32>), u32> = (0..objs.len())
            .map(|s| {
                let key = if mors[s].is_empty() { (0, objs[s].clone()) } else { (mors[s].len(), mors[s].clone()) };
                (key, s as u32)
            })
            .collect();
        let mut dims = Vec::with_capacity(objs.len());
        let mut faces = Vec::with_capacity(objs.len());
        for s in 0..objs.len() {
            let q = mors[s].len();
            dims.push(q as u8);
            let mut fs = Vec::new();
            if q > 0 {
                for i in 0..=q {
                    let chain = face_chain(c, &mors[s], i);
                    let key = if chain.is_empty() {
                        let o = if i == 0 { objs[s][1] } else { objs[s][0] };
                        (0, vec![o])
                    } else {
                        (chain.len(), chain)
                    };
                    fs.push(Simplex::nondeg(index[&key], q - 1));
                }
            }
            faces.push(fs);
        }
        Ok(Nerve { space: Arc::new(SSet::from_parts_unchecked(dims, faces)), objs, mors, index })
    }

    /// Target object i_0 of a chain (the forgetful functor on simplices).
    pub fn last_object(&self, s: u32) -> u32 {
        self.objs[s as usize][0]
    }

    /// The simplex of a chain given by objects and morphisms (identities allowed).
    pub fn simplex_of(&self, c: &FinCat, objs: &[u32], mors: &[u32]) -> Simplex {
        // vertices k and k-1 coincide exactly when α_k is an identity
        let values: Vec<u8> = {
            let mut v = vec![0u8];
            for &a in mors {
                let last = *v.last().unwrap();
                v.push(if c.is_identity(a) { last } else { last + 1 });
            }
            v
        };
        let (pi, _) = epi_mono(&values);
        let kept: Vec<u32> = mors.iter().copied().filter(|&a| !c.is_identity(a)).collect();
        let key = if kept.is_empty() { (0, vec![objs[0]]) } else { (kept.len(), kept) };
        Simplex { base: self.index[&key], op: pi }
    }

    /// Nerve of a functor.
    pub fn map(f: &Functor, src: &Nerve, tgt: &Nerve) -> SMap {
        let image = (0..src.objs.len())
            .map(|s| {
                let objs: Vec<u32> = src.objs[s].iter().map(|&x| f.obj[x as usize]).collect();
                let mors: Vec<u32> = src.mors[s].iter().map(|&a| f.mor[a as usize]).collect();
                tgt.simplex_of(&f.tgt, &objs, &mors)
            })
            .collect();
        SMap::new_unchecked(src.space.clone(), tgt.space.clone(), image)
    }
}

fn face_chain(c: &FinCat, mors: &[u32], i: usize) -> Vec<u32> {
    let q = mors.len();
    if i == 0 {
        mors[1..].to_vec()
    } else if i == q {
        mors[..q - 1].to_vec()
    } else {
        let mut out = mors[..i - 1].to_vec();
        out.push(c.compose(mors[i - 1], mors[i]));
        out.extend_from_slice(&mors[i + 1..]);
        out
    }
}

pub fn nerve(c: &FinCat) -> Result<Arc<SSet>> {
    Ok(Nerve::of(c)?.space)
}

/// A comma category with its projection to the source of the functor.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    pub proj: Functor,
    /// (object l, structure morphism u)
    pub objs: Vec<(u32, u32)>,
}

/// f↓i: objects (l, u: f(l) → i).
pub fn over_cat(f: &Functor, i: u32) -> Result<Comma> {
    let tgt = &f.tgt;
    let mut objs = Vec::new();
    for l in 0..f.src.num_objects() as u32 {
        for &u in tgt.hom(f.obj[l as usize], i) {
            objs.push((l, u));
        }
    }
    comma(f, objs, |(_, u), (_, u2), v| tgt.compose(u2, f.mor[v as usize]) == u)
}

/// i↓f: objects (l, u: i → f(l)).
pub fn under_cat(i: u32, f: &Functor) -> Result<Comma> {
    let tgt = &f.tgt;
    let mut objs = Vec::new();
    for l in 0..f.src.num_objects() as u32 {
        for &u in tgt.hom(i, f.obj[l as usize]) {
            objs.push((l, u));
        }
    }
    comma(f, objs, |(_, u), (_, u2), v| tgt.compose(f.mor[v as usize], u) == u2)
}

fn comma(f: &Functor, objs: Vec<(u32, u32)>, ok: impl Fn((u32, u32), (u32, u32), u32) -> bool) -> Result<Comma> {
    let s = &f.src;
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    for (a, &oa) in objs.iter().enumerate() {
        for (b, &ob) in objs.iter().enumerate() {
            for &v in s.hom(oa.0, ob.0) {
                if ok(oa, ob, v) && !(a == b && s.is_identity(v)) {
                    under.push(v);
                    arrows.push((a as u32, b as u32, s.morphism_name(v).to_string()));
                }
            }
        }
    }
    let base = arrows.len() as u32;
    let lookup: HashMap<(u32, u32, u32), u32> =
        arrows.iter().zip(&under).enumerate().map(|(k, (&(a, b, _), &v))| ((a, b, v), k as u32)).collect();
    let ends: Vec<(u32, u32)> = arrows.iter().map(|&(a, b, _)| (a, b)).collect();
    let cat = FinCat::build(
        objs.iter().map(|&(l, u)| format!("({},{})", s.object_name(l), f.tgt.morphism_name(u))).collect(),
        arrows,
        |g, h| {
            let (a, _) = ends[h as usize];
            let (_, c) = ends[g as usize];
            let v = s.compose(under[g as usize], under[h as usize]);
            if a == c && s.is_identity(v) {
                return Some(base + a);
            }
            lookup.get(&(a, c, v)).copied()
        },
    )?;
    let cat = Arc::new(cat);
    let mut mor = under.clone();
    for &(l, _) in &objs {
        mor.push(s.id(l));
    }
    let proj = Functor::new(cat.clone(), f.src.clone(), objs.iter().map(|&(l, _)| l).collect(), mor)?;
    Ok(Comma { cat, proj, objs })
}

/// The functor f↓i → f↓i' induced by β: i → i'.
pub fn over_functor(f: &Functor, from: &Comma, to: &Comma, beta: u32) -> Result<Functor> {
    let index: HashMap<(u32, u32), u32> = to.objs.iter().enumerate().map(|(k, &o)| (o, k as u32)).collect();
    let obj: Vec<u32> = from
        .objs
        .iter()
        .map(|&(l, u)| index[&(l, f.tgt.compose(beta, u))])
        .collect();
    let mor: Vec<u32> = (0..from.cat.num_morphisms() as u32)
        .map(|m| {
            let v = from.proj.mor[m as usize];
            let (a, b) = (obj[from.cat.src(m) as usize], obj[from.cat.tgt(m) as usize]);
            *to.cat
                .hom(a, b)
                .iter()
                .find(|&&n| to.proj.mor[n as usize] == v)
                .expect("morphism over the same underlying arrow")
        })
        .collect();
    Functor::new(from.cat.clone(), to.cat.clone(), obj, mor)
}

/// Grothendieck construction with its projection and fiber inclusions.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub cat: Arc<FinCat>,
    pub proj: Functor,
    /// (i, a) per object.
    pub objs: Vec<(u32, u32)>,
    /// (α, h) per morphism.
    pub mors: Vec<(u32, u32)>,
    pub fiber_inclusion: Vec<Functor>,
}

pub fn grothendieck(h: &CatDiagram) -> Result<Grothendieck> {
    let base = &h.base;
    let mut objs = Vec::new();
    let mut obj_index = HashMap::new();
    for i in 0..base.num_objects() as u32 {
        for a in 0..h.fibers[i as usize].num_objects() as u32 {
            obj_index.insert((i, a), objs.len() as u32);
            objs.push((i, a));
        }
    }
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut arrows = Vec::new();
    for alpha in 0..base.num_morphisms() as u32 {
        let (i, j) = (base.src(alpha), base.tgt(alpha));
        let t = &h.transition[alpha as usize];
        let fj = &h.fibers[j as usize];
        for a in 0..h.fibers[i as usize].num_objects() as u32 {
            for b in 0..fj.num_objects() as u32 {
                for &k in fj.hom(t.obj[a as usize], b) {
                    if base.is_identity(alpha) && fj.is_identity(k) {
                        continue;
                    }
                    pairs.push((alpha, k));
                    arrows.push((obj_index[&(i, a)], obj_index[&(j, b)], format!("({},{})", base.morphism_name(alpha), fj.morphism_name(k))));
                }
            }
        }
    }
    let nonid = pairs.len() as u32;
    let src_obj: Vec<u32> = arrows.iter().map(|a| a.0).collect();
    // (α, h) alone does not determine the source when H(α) is not injective
    let lookup: HashMap<(u32, u32, u32), u32> = pairs.iter().enumerate().map(|(n, &(a, k))| ((src_obj[n], a, k), n as u32)).collect();
    let cat = FinCat::build(objs.iter().map(|&(i, a)| format!("({},{})", base.object_name(i), h.fibers[i as usize].object_name(a))).collect(), arrows, |g, f| {
        let (beta, k) = pairs[g as usize];
        let (alpha, hh) = pairs[f as usize];
        let ba = base.compose(beta, alpha);
        let hb = &h.transition[beta as usize];
        let fiber = &h.fibers[base.tgt(beta) as usize];
        let comp = fiber.compose(k, hb.mor[hh as usize]);
        if base.is_identity(ba) && fiber.is_identity(comp) {
            return Some(nonid + src_obj[f as usize]);
        }
        lookup.get(&(src_obj[f as usize], ba, comp)).copied()
    })?;
    let cat = Arc::new(cat);
    let mut mors = pairs.clone();
    for &(i, a) in &objs {
        mors.push((base.id(i), h.fibers[i as usize].id(a)));
    }
    let proj = Functor::new(cat.clone(), base.clone(), objs.iter().map(|&(i, _)| i).collect(), mors.iter().map(|&(a, _)| a).collect())?;
    let mor_index: HashMap<(u32, u32, u32), u32> =
        mors.iter().enumerate().map(|(n, &(a, k))| ((cat.src(n as u32), a, k), n as u32)).collect();
    let fiber_inclusion = (0..base.num_objects() as u32)
        .map(|i| {
            let fib = &h.fibers[i as usize];
            let obj = (0..fib.num_objects() as u32).map(|a| obj_index[&(i, a)]).collect();
            let mor = (0..fib.num_morphisms() as u32).map(|k| mor_index[&(obj_index[&(i, fib.src(k))], base.id(i), k)]).collect();
            Functor::new(fib.clone(), cat.clone(), obj, mor)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Grothendieck { cat, proj, objs, mors, fiber_inclusion })
}

/// Outcome of the terminality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminality {
    /// Every under-category has an initial or terminal object.
    Certified,
    /// Every under-category is nonempty, connected and F_2-, F_3-acyclic.
    Evidence,
    /// Some under-category is empty, disconnected or has homology.
    Refuted,
}

fn has_initial_or_terminal(c: &FinCat) -> bool {
    let n = c.num_objects() as u32;
    (0..n).any(|x| (0..n).all(|y| c.hom(x, y).len() == 1)) || (0..n).any(|x| (0..n).all(|y| c.hom(y, x).len() == 1))
}

pub fn is_terminal_functor(f: &Functor) -> Result<Terminality> {
    let mut verdict = Terminality::Certified;
    for i in 0..f.tgt.num_objects() as u32 {
        let u = under_cat(i, f)?;
        if u.cat.num_objects() == 0 {
            return Ok(Terminality::Refuted);
        }
        if has_initial_or_terminal(&u.cat) {
            continue;
        }
        let n = nerve(&u.cat)?;
        for p in [2, 3] {
            if sset_homology(&n, Fp::new(p)?) != vec![1] {
                return Ok(Terminality::Refuted);
            }
        }
        verdict = Terminality::Evidence;
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{cone, find_iso, is_isomorphic, opposite, product, standard};

    fn f2() -> Fp {
        Fp::new(2).unwrap()
    }

    #[test]
    fn ordinal_is_valid_and_loop_free() {
        let c = FinCat::ordinal(3);
        assert!(c.defect().is_none());
        assert!(c.is_loop_free());
        assert_eq!(c.num_morphisms(), 10);
    }

    #[test]
    fn idempotent_is_not_loop_free() {
        let c = FinCat::build(vec!["x".into()], vec![(0, 0, "e".into())], |_, _| Some(0)).unwrap();
        assert!(!c.is_loop_free());
        assert!(c.loop_witness().unwrap().contains("endomorphism"));
        assert!(matches!(nerve(&c), Err(Error::NotLoopFree(_))));
    }

    #[test]
    fn broken_table_names_the_triple() {
        // a two-element monoid table with (e∘e)∘f ≠ e∘(e∘f)
        let bad = FinCat::build(vec!["x".into()], vec![(0, 0, "e".into()), (0, 0, "f".into())], |g, h| Some(match (g, h) {
            (0, 0) => 1,
            (1, 1) => 0,
            (0, 1) => 1,
            (1, 0) => 0,
            _ => unreachable!(),
        }));
        match bad {
            Err(Error::Invalid(msg)) => assert!(msg.contains("associativity")),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn nerve_of_ordinal_is_simplex() {
        for n in 0..4 {
            let nv = nerve(&FinCat::ordinal(n)).unwrap();
            nv.check_identities().unwrap();
            assert!(is_isomorphic(&nv, &Arc::new(standard(n).0)));
        }
        assert!(is_isomorphic(&nerve(&FinCat::trivial()).unwrap(), &Arc::new(SSet::point())));
    }

    #[test]
    fn nerve_of_parallel_arrows_is_circle() {
        let nv = nerve(&FinCat::parallel_arrows()).unwrap();
        assert_eq!(nv.counts(), vec![2, 2]);
        assert_eq!(sset_homology(&nv, f2()), vec![1, 1]);
    }

    #[test]
    fn comma_examples() {
        let i = Arc::new(FinCat::ordinal(1));
        let id = Functor::identity(i.clone());
        // objects of I↓1: (0, 0→1) and (1, id); the second is terminal
        let over = over_cat(&id, 1).unwrap();
        assert_eq!(over.cat.num_objects(), 2);
        assert!(has_initial_or_terminal(&over.cat));
        let over0 = over_cat(&id, 0).unwrap();
        assert_eq!(over0.cat.num_objects(), 1);
        let t = Functor::point(i.clone(), 1);
        for x in 0..2 {
            let u = under_cat(x, &t).unwrap();
            assert_eq!(u.cat.num_objects(), 1);
            assert_eq!(u.cat.num_morphisms(), 1);
        }
        // nerve of f↓j maps reducedly to the nerve of the source
        let over = over_cat(&id, 1).unwrap();
        let src = Nerve::of(&over.cat).unwrap();
        let tgt = Nerve::of(&i).unwrap();
        assert!(Nerve::map(&over.proj, &src, &tgt).is_reduced());
    }

    #[test]
    fn terminality_examples() {
        let i = Arc::new(FinCat::ordinal(2));
        assert_eq!(is_terminal_functor(&Functor::point(i.clone(), 2)).unwrap(), Terminality::Certified);
        assert_eq!(is_terminal_functor(&Functor::identity(i.clone())).unwrap(), Terminality::Certified);
        let one = Arc::new(FinCat::ordinal(1));
        assert_eq!(is_terminal_functor(&Functor::point(one, 0)).unwrap(), Terminality::Refuted);
    }

    #[test]
    fn constant_grothendieck_is_product() {
        let i = Arc::new(FinCat::span());
        let j = Arc::new(FinCat::ordinal(1));
        let g = grothendieck(&CatDiagram::constant(i.clone(), j.clone())).unwrap();
        let p = i.product(&j);
        let ng = nerve(&g.cat).unwrap();
        let np = nerve(&p).unwrap();
        assert!(find_iso(&ng, &np).is_some());
        let trivial = grothendieck(&CatDiagram::constant(i.clone(), Arc::new(FinCat::trivial()))).unwrap();
        assert!(is_isomorphic(&nerve(&trivial.cat).unwrap(), &nerve(&i).unwrap()));
    }

    #[test]
    fn grothendieck_of_a_collapsing_transition() {
        // H(0) = two points, H(1) = one point: Gr is the cone on two points
        let i = Arc::new(FinCat::ordinal(1));
        let two = Arc::new(FinCat::discrete(2));
        let one = Arc::new(FinCat::trivial());
        let transition = (0..i.num_morphisms() as u32)
            .map(|m| match (i.src(m), i.tgt(m)) {
                (0, 1) => Functor::to_point(two.clone()),
                (0, 0) => Functor::identity(two.clone()),
                _ => Functor::identity(one.clone()),
            })
            .collect();
        let g = grothendieck(&CatDiagram::new(i, vec![two.clone(), one], transition).unwrap()).unwrap();
        assert_eq!(g.cat.num_objects(), 3);
        assert_eq!(g.cat.num_morphisms(), 5);
        assert!((0..3).all(|x| g.cat.hom(x, 2).len() == 1));
        for (k, f) in g.fiber_inclusion.iter().enumerate() {
            assert_eq!(f.obj, (0..f.src.num_objects() as u32).map(|a| if k == 0 { a } else { 2 }).collect::<Vec<_>>());
        }
    }

    #[test]
    fn nerve_of_product_is_product_of_nerves() {
        let a = FinCat::ordinal(1);
        let b = FinCat::span();
        let n = nerve(&a.product(&b)).unwrap();
        let p = product(&nerve(&a).unwrap(), &nerve(&b).unwrap());
        assert!(is_isomorphic(&n, &p.space));
    }

    #[test]
    fn opposite_is_involutive() {
        let c = FinCat::parallel_arrows();
        let oo = c.opposite().opposite();
        assert_eq!(oo.src, c.src);
        assert_eq!(oo.tgt, c.tgt);
        assert_eq!(oo.comp, c.comp);
    }

    #[test]
    fn cone_nerve_matches_cone_of_opposite_nerve() {
        // with ε sending a chain to its target, N(CI) ≅ (C(N(I)^op))^op
        for c in [FinCat::parallel_arrows(), FinCat::span(), FinCat::ordinal(2), FinCat::discrete(0)] {
            let ci = cone_cat(&c);
            assert!(ci.defect().is_none());
            let lhs = nerve(&ci).unwrap();
            let nop = Arc::new(opposite(&nerve(&c).unwrap()));
            let rhs = Arc::new(opposite(&cone(&nop).space));
            assert!(is_isomorphic(&lhs, &rhs));
        }
        assert_eq!(cone_cat(&FinCat::discrete(0)).num_objects(), 1);
    }
}
