use std::sync::Arc;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use hocolim_core::category::{cone_cat, grothendieck, FinCat, Nerve};
use hocolim_core::chain::{sset_homology, ChainComplex};
use hocolim_core::diagram::{colim_bounded, kan_extension, BoundedDiagram, IndexedDiagram};
use hocolim_core::gen::{generate, GenSpec};
use hocolim_core::hocolim::{
    cofibrant_replacement, hocolim, ocolim, verify_cone, verify_kan_bounded, verify_reduction, verify_thomason_spaces, ReplaceMode, Report,
};
use hocolim_core::io::{AnyBounded, AnyIndexed, Workspace as CoreWorkspace};
use hocolim_core::linalg::{Fp, Mat};
use hocolim_core::simplicial::{self, cone, is_isomorphic, product, SSet};
use hocolim_core::values::{ChainCat, SSetCat, ValueCategory};
use hocolim_core::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(p: u32) -> PyResult<Fp> {
    Fp::new(p).map_err(err)
}

fn report(py: Python<'_>, r: &Report) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(r).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A finite simplicial set.
#[pyclass(frozen, name = "SimplicialSet", module = "hocolim")]
struct PySSet {
    inner: Arc<SSet>,
}

#[pymethods]
impl PySSet {
    /// Δ[n]
    #[staticmethod]
    fn standard(n: usize) -> PySSet {
        PySSet { inner: Arc::new(simplicial::standard(n).0) }
    }

    /// ∂Δ[n]
    #[staticmethod]
    fn boundary(n: usize) -> PyResult<PySSet> {
        Ok(PySSet { inner: Arc::new(simplicial::boundary(n).map_err(err)?.0) })
    }

    /// Λ^n_k
    #[staticmethod]
    fn horn(n: usize, k: usize) -> PyResult<PySSet> {
        Ok(PySSet { inner: Arc::new(simplicial::horn(n, k).map_err(err)?.0) })
    }

    /// S^n with one vertex and one n-simplex.
    #[staticmethod]
    fn sphere(n: usize) -> PyResult<PySSet> {
        Ok(PySSet { inner: Arc::new(simplicial::sphere(n).map_err(err)?) })
    }

    #[staticmethod]
    fn point() -> PySSet {
        PySSet { inner: Arc::new(SSet::point()) }
    }

    /// Non-degenerate simplices per dimension.
    fn counts(&self) -> Vec<usize> {
        self.inner.counts()
    }

    #[pyo3(signature = (p = 2))]
    fn homology(&self, p: u32) -> PyResult<Vec<usize>> {
        Ok(sset_homology(&self.inner, field(p)?))
    }

    fn cone(&self) -> PySSet {
        PySSet { inner: cone(&self.inner).space }
    }

    fn product(&self, other: &PySSet) -> PySSet {
        PySSet { inner: product(&self.inner, &other.inner).space }
    }

    fn is_isomorphic(&self, other: &PySSet) -> bool {
        is_isomorphic(&self.inner, &other.inner)
    }

    /// Cone collapse for the constant diagram on the cone, with a point or a chain complex as value.
    #[pyo3(signature = (value = None))]
    fn verify_cone(&self, py: Python<'_>, value: Option<&PyChainComplex>) -> PyResult<Py<PyAny>> {
        let c = cone(&self.inner);
        let r = match value {
            Some(x) => {
                let vc = ChainCat::new(x.inner.field().p()).map_err(err)?;
                let f = BoundedDiagram::constant(&vc, c.space.clone(), x.inner.clone());
                let q = cofibrant_replacement(&vc, &f, ReplaceMode::Minimal).map_err(err)?;
                verify_cone(&vc, &c, &q.qf)
            }
            None => {
                let vc = SSetCat::new(2).map_err(err)?;
                let f = BoundedDiagram::constant(&vc, c.space.clone(), Arc::new(SSet::point()));
                let q = cofibrant_replacement(&vc, &f, ReplaceMode::Minimal).map_err(err)?;
                verify_cone(&vc, &c, &q.qf)
            }
        };
        report(py, &r.map_err(err)?)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PySSet) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("SimplicialSet(counts={:?})", self.inner.counts())
    }
}

/// A finite category given by its full composition table.
#[pyclass(frozen, name = "Category", module = "hocolim")]
struct PyCategory {
    inner: Arc<FinCat>,
}

#[pymethods]
impl PyCategory {
    /// The poset on 0..n generated by pairs (a, b) meaning a ≤ b.
    #[staticmethod]
    fn poset(n: usize, relations: Vec<(usize, usize)>) -> PyResult<PyCategory> {
        let mut le = vec![vec![false; n]; n];
        for i in 0..n {
            le[i][i] = true;
        }
        for &(a, b) in &relations {
            if a >= n || b >= n {
                return Err(PyValueError::new_err(format!("relation ({a}, {b}) mentions an object outside 0..{n}")));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        Ok(PyCategory { inner: Arc::new(FinCat::poset(n, |a, b| le[a][b]).map_err(err)?) })
    }

    /// Free category on a finite acyclic graph.
    #[staticmethod]
    fn free(objects: usize, edges: Vec<(u32, u32)>) -> PyResult<PyCategory> {
        Ok(PyCategory { inner: Arc::new(FinCat::free(objects, &edges).map_err(err)?) })
    }

    /// 0 ← 1 → 2
    #[staticmethod]
    fn span() -> PyCategory {
        PyCategory { inner: Arc::new(FinCat::span()) }
    }

    /// [n] = 0 → 1 → … → n
    #[staticmethod]
    fn ordinal(n: usize) -> PyCategory {
        PyCategory { inner: Arc::new(FinCat::ordinal(n)) }
    }

    #[staticmethod]
    fn discrete(n: usize) -> PyCategory {
        PyCategory { inner: Arc::new(FinCat::discrete(n)) }
    }

    fn num_objects(&self) -> usize {
        self.inner.num_objects()
    }

    fn num_morphisms(&self) -> usize {
        self.inner.num_morphisms()
    }

    fn object_names(&self) -> Vec<String> {
        self.inner.object_names().to_vec()
    }

    /// Morphism ids from x to y.
    fn hom(&self, x: u32, y: u32) -> Vec<u32> {
        self.inner.hom(x, y).to_vec()
    }

    fn is_loop_free(&self) -> bool {
        self.inner.is_loop_free()
    }

    fn nerve(&self) -> PyResult<PySSet> {
        Ok(PySSet { inner: Nerve::of(&self.inner).map_err(err)?.space })
    }

    fn product(&self, other: &PyCategory) -> PyCategory {
        PyCategory { inner: Arc::new(self.inner.product(&other.inner)) }
    }

    /// The category with a new terminal object.
    fn cone(&self) -> PyCategory {
        PyCategory { inner: Arc::new(cone_cat(&self.inner)) }
    }

    fn opposite(&self) -> PyCategory {
        PyCategory { inner: Arc::new(self.inner.opposite()) }
    }

    fn __repr__(&self) -> String {
        format!("Category(objects={}, morphisms={})", self.inner.num_objects(), self.inner.num_morphisms())
    }
}

/// A bounded chain complex over F_p; `d[k]` is the row-major matrix of C_{k+1} → C_k.
#[pyclass(frozen, name = "ChainComplex", module = "hocolim")]
struct PyChainComplex {
    inner: Arc<ChainComplex>,
}

#[pymethods]
impl PyChainComplex {
    #[new]
    #[pyo3(signature = (dims, d, p = 2))]
    fn new(dims: Vec<usize>, d: Vec<Vec<i64>>, p: u32) -> PyResult<PyChainComplex> {
        let f = field(p)?;
        if d.len() + 1 < dims.len() {
            return Err(PyValueError::new_err(format!("{} degrees need {} differentials", dims.len(), dims.len() - 1)));
        }
        let mats = d
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let (rows, cols) = (dims.get(k).copied().unwrap_or(0), dims.get(k + 1).copied().unwrap_or(0));
                Mat::from_row_major(f, rows, cols, e)
            })
            .collect::<hocolim_core::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyChainComplex { inner: Arc::new(ChainComplex::new(f, dims, mats).map_err(err)?) })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.field().p()
    }

    fn betti(&self) -> Vec<usize> {
        self.inner.betti()
    }

    fn __repr__(&self) -> String {
        format!("ChainComplex(dims={:?}, p={})", self.inner.dims(), self.inner.field().p())
    }
}

fn bounded_betti(d: &AnyBounded, homotopy: bool) -> hocolim_core::Result<Vec<usize>> {
    fn go<V: ValueCategory>(vc: &V, d: &BoundedDiagram<V>, homotopy: bool) -> hocolim_core::Result<Vec<usize>> {
        Ok(if homotopy { vc.betti(ocolim(vc, d)?.apex()) } else { vc.betti(&colim_bounded(vc, d)?.apex) })
    }
    match d {
        AnyBounded::Chain(v, x) => go(v, x, homotopy),
        AnyBounded::SSet(v, x) => go(v, x, homotopy),
    }
}

fn indexed_betti(d: &AnyIndexed) -> hocolim_core::Result<Vec<usize>> {
    fn go<V: ValueCategory>(vc: &V, d: &IndexedDiagram<V>) -> hocolim_core::Result<Vec<usize>> {
        Ok(vc.betti(hocolim(vc, d)?.apex()))
    }
    match d {
        AnyIndexed::Chain(v, x) => go(v, x),
        AnyIndexed::SSet(v, x) => go(v, x),
    }
}

/// A set of named entities, as stored in workspace JSON files.
#[pyclass(name = "Workspace", module = "hocolim")]
struct PyWorkspace {
    inner: CoreWorkspace,
}

fn pick<'a, T>(map: &'a std::collections::BTreeMap<String, T>, name: Option<&str>, kind: &str) -> PyResult<(&'a String, &'a T)> {
    CoreWorkspace::pick(map, name, kind).map_err(|e| PyKeyError::new_err(e.to_string()))
}

#[pymethods]
impl PyWorkspace {
    #[new]
    fn new() -> PyWorkspace {
        PyWorkspace { inner: CoreWorkspace::default() }
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<PyWorkspace> {
        Ok(PyWorkspace { inner: CoreWorkspace::load(&path).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyWorkspace> {
        Ok(PyWorkspace { inner: CoreWorkspace::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.inner.save(&path).map_err(err)
    }

    /// Entity names by kind.
    fn names(&self) -> std::collections::BTreeMap<&'static str, Vec<String>> {
        let w = &self.inner;
        let keys = |it: Vec<&String>| it.into_iter().cloned().collect::<Vec<_>>();
        [
            ("ssets", keys(w.ssets.keys().collect())),
            ("smaps", keys(w.smaps.keys().collect())),
            ("categories", keys(w.categories.keys().collect())),
            ("functors", keys(w.functors.keys().collect())),
            ("cat_diagrams", keys(w.cat_diagrams.keys().collect())),
            ("complexes", keys(w.complexes.keys().collect())),
            ("diagrams", keys(w.diagrams.keys().collect())),
            ("indexed", keys(w.indexed.keys().collect())),
        ]
        .into_iter()
        .collect()
    }

    #[pyo3(signature = (name = None))]
    fn sset(&self, name: Option<&str>) -> PyResult<PySSet> {
        Ok(PySSet { inner: pick(&self.inner.ssets, name, "sset")?.1.clone() })
    }

    #[pyo3(signature = (name = None))]
    fn category(&self, name: Option<&str>) -> PyResult<PyCategory> {
        Ok(PyCategory { inner: pick(&self.inner.categories, name, "category")?.1.clone() })
    }

    #[pyo3(signature = (name = None))]
    fn complex(&self, name: Option<&str>) -> PyResult<PyChainComplex> {
        Ok(PyChainComplex { inner: pick(&self.inner.complexes, name, "complex")?.1.clone() })
    }

    fn add_sset(&mut self, name: &str, k: &PySSet) {
        self.inner.add_sset(name, k.inner.clone());
    }

    fn add_category(&mut self, name: &str, c: &PyCategory) {
        self.inner.add_category(name, c.inner.clone());
    }

    fn add_complex(&mut self, name: &str, c: &PyChainComplex) {
        self.inner.complexes.insert(name.into(), c.inner.clone());
    }

    /// Betti numbers of the colimit of a bounded diagram.
    #[pyo3(signature = (diagram = None))]
    fn colim(&self, diagram: Option<&str>) -> PyResult<Vec<usize>> {
        bounded_betti(&pick(&self.inner.diagrams, diagram, "diagram")?.1.diagram, false).map_err(err)
    }

    /// Betti numbers of the colimit of a cofibrant replacement.
    #[pyo3(signature = (diagram = None))]
    fn ocolim(&self, diagram: Option<&str>) -> PyResult<Vec<usize>> {
        bounded_betti(&pick(&self.inner.diagrams, diagram, "diagram")?.1.diagram, true).map_err(err)
    }

    /// Betti numbers of the homotopy colimit of a diagram indexed by a loop-free category.
    #[pyo3(signature = (diagram = None))]
    fn hocolim(&self, diagram: Option<&str>) -> PyResult<Vec<usize>> {
        indexed_betti(&pick(&self.inner.indexed, diagram, "indexed diagram")?.1.diagram).map_err(err)
    }

    /// Left Kan extension of a diagram along a map, as a new workspace holding the target space and f_!F.
    #[pyo3(signature = (map = None, diagram = None))]
    fn kan(&self, map: Option<&str>, diagram: Option<&str>) -> PyResult<PyWorkspace> {
        let (mn, m) = pick(&self.inner.smaps, map, "map")?;
        let (dn, d) = pick(&self.inner.diagrams, diagram, "diagram")?;
        if d.base != m.from {
            return Err(PyValueError::new_err(format!("diagram {dn} lives over {} but {mn} starts at {}", d.base, m.from)));
        }
        let mut w = CoreWorkspace::default();
        w.add_sset(&m.to, m.map.cod.clone());
        let out = match &d.diagram {
            AnyBounded::Chain(v, x) => AnyBounded::Chain(*v, kan_extension(v, &m.map, x).map_err(err)?.diagram),
            AnyBounded::SSet(v, x) => AnyBounded::SSet(v.clone(), kan_extension(v, &m.map, x).map_err(err)?.diagram),
        };
        w.add_diagram(&format!("{mn}_!{dn}"), &m.to, out);
        Ok(PyWorkspace { inner: w })
    }

    /// Check that the Kan extension of a diagram along a map is bounded.
    #[pyo3(signature = (map = None, diagram = None))]
    fn verify_kan_bounded(&self, py: Python<'_>, map: Option<&str>, diagram: Option<&str>) -> PyResult<Py<PyAny>> {
        let (_, m) = pick(&self.inner.smaps, map, "map")?;
        let (_, d) = pick(&self.inner.diagrams, diagram, "diagram")?;
        let r = match &d.diagram {
            AnyBounded::Chain(v, x) => verify_kan_bounded(v, &m.map, x),
            AnyBounded::SSet(v, x) => verify_kan_bounded(v, &m.map, x),
        };
        report(py, &r.map_err(err)?)
    }

    /// Reduce a map and check the round trip on a diagram over its target.
    #[pyo3(signature = (map = None, diagram = None))]
    fn verify_reduction(&self, py: Python<'_>, map: Option<&str>, diagram: Option<&str>) -> PyResult<Py<PyAny>> {
        let (_, m) = pick(&self.inner.smaps, map, "map")?;
        let (_, d) = pick(&self.inner.diagrams, diagram, "diagram")?;
        let r = match &d.diagram {
            AnyBounded::Chain(v, x) => verify_reduction(v, &m.map, x),
            AnyBounded::SSet(v, x) => verify_reduction(v, &m.map, x),
        };
        report(py, &r.map_err(err)?)
    }

    /// Compare the nerve of the Grothendieck construction with the homotopy colimit of the fiber nerves.
    #[pyo3(signature = (fibers = None, p = 2))]
    fn verify_thomason(&self, py: Python<'_>, fibers: Option<&str>, p: u32) -> PyResult<Py<PyAny>> {
        let (_, h) = pick(&self.inner.cat_diagrams, fibers, "category diagram")?;
        let vc = SSetCat::new(p).map_err(err)?;
        report(py, &verify_thomason_spaces(&vc, &h.diagram).map_err(err)?)
    }

    /// The Grothendieck construction of a category diagram.
    #[pyo3(signature = (fibers = None))]
    fn grothendieck(&self, fibers: Option<&str>) -> PyResult<PyCategory> {
        let (_, h) = pick(&self.inner.cat_diagrams, fibers, "category diagram")?;
        Ok(PyCategory { inner: grothendieck(&h.diagram).map_err(err)?.cat })
    }

    fn __repr__(&self) -> String {
        let n = self.names();
        let parts: Vec<String> = n.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| format!("{k}={v:?}")).collect();
        format!("Workspace({})", parts.join(", "))
    }
}

/// A deterministic random instance of one family: poset, dag-category,
/// chain-complex, bounded-diagram or simplicial-map.
#[pyfunction]
#[pyo3(signature = (family, seed = 0, max_objects = 5, max_dim = 2, max_simplices = 8, p = 2))]
fn gen(family: &str, seed: u64, max_objects: usize, max_dim: usize, max_simplices: usize, p: u32) -> PyResult<PyWorkspace> {
    let mut spec = GenSpec::new(seed, family.parse().map_err(err)?);
    spec.max_objects = max_objects;
    spec.max_dim = max_dim;
    spec.max_simplices = max_simplices;
    spec.p = p;
    Ok(PyWorkspace { inner: generate(&spec).map_err(err)? })
}

#[pymodule]
#[pyo3(name = "hocolim")]
fn hocolim_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySSet>()?;
    m.add_class::<PyCategory>()?;
    m.add_class::<PyChainComplex>()?;
    m.add_class::<PyWorkspace>()?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    Ok(())
}
