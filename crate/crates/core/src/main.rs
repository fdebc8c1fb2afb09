use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hocolim_core::category::{grothendieck, is_terminal_functor, FinCat, Nerve};
use hocolim_core::chain::sset_homology;
use hocolim_core::diagram::{colim_bounded, cross_check_colim, kan_extension, reduce_map, BoundedDiagram, IndexedDiagram};
use hocolim_core::error::{Error, Result};
use hocolim_core::gen::{generate, ComplexSize, Family, Gen, GenSpec};
use hocolim_core::hocolim::{
    cofibrant_replacement, hocolim, ocolim, verify_cofinality, verify_cone, verify_fubini, verify_kan_bounded, verify_reduction,
    verify_thomason, verify_thomason_spaces, ReplaceMode, Report,
};
use hocolim_core::io::{canonical_numbering, cat_to_raw, AnyBounded, AnyIndexed, AnyValueCat, RawWorkspace, Workspace, SCHEMA_VERSION};
use hocolim_core::linalg::Fp;
use hocolim_core::simplicial::{cone, SSet};
use hocolim_core::values::{ChainCat, SSetCat, ValueCategory};

#[derive(Parser)]
#[command(name = "hocolim", version, about = "Exact colimits and homotopy colimits of finite diagrams")]
struct Cli {
    /// Workspace files to load; entity flags may also name a file directly.
    #[arg(long = "ws", global = true)]
    workspaces: Vec<PathBuf>,
    /// chain:f{p} or sset:f{p} for a prime p (default chain:f$HOCOLIM_PRIME, else chain:f2)
    #[arg(long, global = true)]
    value_cat: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Compare every bounded colimit with the cell-by-cell computation.
    #[arg(long, global = true)]
    cross_check: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers of a simplicial set or chain complex.
    Homology {
        #[arg(long)]
        sset: Option<String>,
        #[arg(long)]
        complex: Option<String>,
    },
    /// The nerve of a loop-free category.
    Nerve {
        #[arg(long)]
        cat: Option<String>,
    },
    /// Colimit of a bounded diagram.
    Colim {
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Left Kan extension of a bounded diagram along a simplicial map.
    Kan {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Factor a simplicial map through its reduction.
    ReduceMap {
        #[arg(long)]
        map: Option<String>,
    },
    /// Derived colimit of a bounded diagram.
    Ocolim {
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Homotopy colimit of a diagram over a loop-free category.
    Hocolim {
        #[arg(long)]
        cat: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Check a theorem on given or generated instances (exit 0 positive, 1 negative, 2 bad input)
    Verify {
        #[command(subcommand)]
        claim: Claim,
    },
    /// Write a random instance.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 5)]
        max_objects: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 8)]
        max_simplices: usize,
    },
}

#[derive(Subcommand)]
enum Claim {
    /// hocolim over I×J against the iterated homotopy colimits.
    Fubini {
        #[arg(long)]
        diagram: Option<String>,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        /// Number of generated instances when no diagram is given.
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
    /// Grothendieck construction against the homotopy colimit of the fibers.
    Thomason {
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        fibers: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
    /// Homotopy colimits along a terminal functor.
    Cofinality {
        #[arg(long)]
        functor: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Boundedness and colimits of a left Kan extension.
    KanBounded {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Reduction of a map and the round trip of a diagram pulled back to its source.
    Reduction {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Collapse of a cofibrant diagram over a cone.
    Cone {
        #[arg(long)]
        sset: Option<String>,
        #[arg(long)]
        complex: Option<String>,
    },
}

/// Input error, distinct from a negative verdict.
struct InputError(Error);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e)
    }
}

type Res<T> = std::result::Result<T, InputError>;

/// Loaded workspace plus the entity names contributed by files given as flag values.
struct Inputs {
    ws: Workspace,
    picked: BTreeMap<String, String>,
}

fn merge(into: &mut RawWorkspace, from: RawWorkspace) -> Result<()> {
    fn join<T: PartialEq>(a: &mut BTreeMap<String, T>, b: BTreeMap<String, T>, kind: &str) -> Result<()> {
        for (k, v) in b {
            match a.get(&k) {
                Some(old) if *old != v => return Err(Error::Invalid(format!("two different {kind} entries named {k:?}"))),
                _ => {
                    a.insert(k, v);
                }
            }
        }
        Ok(())
    }
    join(&mut into.ssets, from.ssets, "sset")?;
    join(&mut into.smaps, from.smaps, "map")?;
    join(&mut into.categories, from.categories, "category")?;
    join(&mut into.functors, from.functors, "functor")?;
    join(&mut into.cat_diagrams, from.cat_diagrams, "category diagram")?;
    join(&mut into.complexes, from.complexes, "complex")?;
    join(&mut into.diagrams, from.diagrams, "diagram")?;
    join(&mut into.indexed, from.indexed, "indexed diagram")
}

fn read_raw(path: &Path) -> Result<RawWorkspace> {
    let text = std::fs::read_to_string(path)?;
    let located = |e: serde_json::Error| Error::Schema { path: format!("{} line {} column {}", path.display(), e.line(), e.column()), msg: e.to_string() };
    let probe: serde_json::Value = serde_json::from_str(&text).map_err(located)?;
    match probe.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => return Err(Error::UnsupportedVersion(v as u32)),
        None => return Err(Error::Schema { path: path.display().to_string(), msg: "missing schema_version".into() }),
    }
    serde_json::from_str(&text).map_err(located)
}

/// Which section of a workspace a flag refers to.
#[derive(Clone, Copy)]
enum Kind {
    SSet,
    SMap,
    Cat,
    Functor,
    CatDiagram,
    Complex,
    Diagram,
    Indexed,
}

fn keys(raw: &RawWorkspace, kind: Kind) -> Vec<String> {
    match kind {
        Kind::SSet => raw.ssets.keys().cloned().collect(),
        Kind::SMap => raw.smaps.keys().cloned().collect(),
        Kind::Cat => raw.categories.keys().cloned().collect(),
        Kind::Functor => raw.functors.keys().cloned().collect(),
        Kind::CatDiagram => raw.cat_diagrams.keys().cloned().collect(),
        Kind::Complex => raw.complexes.keys().cloned().collect(),
        Kind::Diagram => raw.diagrams.keys().cloned().collect(),
        Kind::Indexed => raw.indexed.keys().cloned().collect(),
    }
}

/// Load --ws files and every flag value that is an existing file.
fn load_inputs(files: &[PathBuf], flags: &[(Option<&String>, Kind)]) -> Res<Inputs> {
    let mut raw = RawWorkspace {
        schema_version: SCHEMA_VERSION,
        ssets: BTreeMap::new(),
        smaps: BTreeMap::new(),
        categories: BTreeMap::new(),
        functors: BTreeMap::new(),
        cat_diagrams: BTreeMap::new(),
        complexes: BTreeMap::new(),
        diagrams: BTreeMap::new(),
        indexed: BTreeMap::new(),
    };
    for f in files {
        merge(&mut raw, read_raw(f)?)?;
    }
    let mut picked = BTreeMap::new();
    for (value, kind) in flags {
        let Some(v) = value else { continue };
        let p = Path::new(v.as_str());
        if p.is_file() {
            let r = read_raw(p)?;
            let names = keys(&r, *kind);
            if names.len() != 1 {
                return Err(Error::Invalid(format!("{v} holds {} entries of the requested kind; expected one", names.len())).into());
            }
            picked.insert(v.to_string(), names[0].clone());
            merge(&mut raw, r)?;
        }
    }
    Ok(Inputs { ws: Workspace::from_raw(&raw)?, picked })
}

impl Inputs {
    fn name<'a>(&'a self, flag: Option<&'a String>) -> Option<&'a str> {
        flag.map(|v| self.picked.get(v).map_or(v.as_str(), |s| s.as_str()))
    }
}

fn default_value_cat(flag: &Option<String>) -> Res<AnyValueCat> {
    let tag = match flag {
        Some(t) => t.clone(),
        None => match std::env::var("HOCOLIM_PRIME") {
            Ok(p) => format!("chain:f{p}"),
            Err(_) => "chain:f2".to_string(),
        },
    };
    Ok(AnyValueCat::from_tag(&tag)?)
}

fn check_tag(flag: &Option<String>, actual: &str) -> Res<()> {
    match flag {
        Some(t) if t != actual => Err(Error::Mismatch(format!("--value-cat {t} but the diagram is {actual}")).into()),
        _ => Ok(()),
    }
}

fn plain(claim: &str, inputs: serde_json::Value) -> Report {
    Report { claim: claim.into(), citation: String::new(), inputs, betti: BTreeMap::new(), verdict: true, notes: vec![], ms: 0 }
}

fn colim_report<V: ValueCategory>(vc: &V, d: &BoundedDiagram<V>, cross: bool, name: &str) -> Res<Report> {
    let mut r = plain("colim", json!({"diagram": name, "value_cat": vc.tag()}));
    let c = colim_bounded(vc, d)?;
    r.betti.insert("colim".into(), vc.betti(&c.apex));
    if cross {
        let ok = cross_check_colim(vc, d, &c)?;
        r.notes.push(format!("cell-by-cell colimit agrees: {ok}"));
        r.verdict = ok;
    }
    Ok(r)
}

fn ocolim_report<V: ValueCategory>(vc: &V, d: &BoundedDiagram<V>, cross: bool, name: &str) -> Res<Report> {
    let mut r = plain("ocolim", json!({"diagram": name, "value_cat": vc.tag()}));
    let o = ocolim(vc, d)?;
    r.betti.insert("ocolim".into(), vc.betti(o.apex()));
    r.betti.insert("colim".into(), vc.betti(&colim_bounded(vc, d)?.apex));
    let check = o.replacement.verify(vc, d)?;
    r.notes.push(format!("replacement certificates: {}", serde_json::to_string(&check).expect("plain data")));
    r.verdict = check.ok();
    if cross {
        let ok = cross_check_colim(vc, &o.replacement.qf, &o.colim)?;
        r.notes.push(format!("cell-by-cell colimit agrees: {ok}"));
        r.verdict &= ok;
    }
    Ok(r)
}

fn hocolim_report<V: ValueCategory>(vc: &V, d: &IndexedDiagram<V>, cross: bool, name: &str) -> Res<Report> {
    let mut r = plain("hocolim", json!({"diagram": name, "value_cat": vc.tag(), "objects": d.cat.num_objects()}));
    let h = hocolim(vc, d)?;
    r.betti.insert("hocolim".into(), vc.betti(h.apex()));
    r.notes.push(format!("nerve simplices by dimension: {:?}", h.nerve.space.counts()));
    if cross {
        let ok = cross_check_colim(vc, &h.ocolim.replacement.qf, &h.ocolim.colim)?;
        r.notes.push(format!("cell-by-cell colimit agrees: {ok}"));
        r.verdict = ok;
    }
    Ok(r)
}

/// The diagram's morphisms in the numbering of `product`, when its category is that product.
fn as_product<V: ValueCategory>(d: &IndexedDiagram<V>, product: &Arc<FinCat>) -> Res<IndexedDiagram<V>> {
    if cat_to_raw(&d.cat) != cat_to_raw(product) {
        return Err(Error::Mismatch("diagram is not indexed by the product of --left and --right".into()).into());
    }
    let new = canonical_numbering(product);
    let canon = canonical_numbering(&d.cat);
    let mut inverse = vec![0u32; canon.len()];
    for (m, &c) in canon.iter().enumerate() {
        inverse[c as usize] = m as u32;
    }
    let mors = new.iter().map(|&c| d.mors[inverse[c as usize] as usize].clone()).collect();
    Ok(IndexedDiagram { cat: product.clone(), objs: d.objs.clone(), mors })
}

fn fubini_named<V: ValueCategory>(vc: &V, d: &IndexedDiagram<V>, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Res<Report> {
    let prod = Arc::new(a.product(b));
    Ok(verify_fubini(vc, a, b, &as_product(d, &prod)?)?)
}

fn combine(claim: &str, reports: Vec<Report>) -> Report {
    let mut r = plain(claim, json!({"instances": reports.len()}));
    r.citation = reports.first().map(|x| x.citation.clone()).unwrap_or_default();
    r.verdict = reports.iter().all(|x| x.verdict);
    for (i, x) in reports.into_iter().enumerate() {
        for (k, b) in x.betti {
            r.betti.insert(format!("#{i} {k}"), b);
        }
        r.notes.extend(x.notes.into_iter().map(|n| format!("#{i} {n}")));
        r.ms += x.ms;
    }
    r
}

fn run(cli: &Cli) -> Res<(Report, Option<Workspace>)> {
    let start = Instant::now();
    let cross = cli.cross_check;
    let (mut report, artifact) = match &cli.cmd {
        Cmd::Homology { sset, complex } => {
            let inp = load_inputs(&cli.workspaces, &[(sset.as_ref(), Kind::SSet), (complex.as_ref(), Kind::Complex)])?;
            let p = match default_value_cat(&cli.value_cat)? {
                AnyValueCat::Chain(v) => v.f,
                AnyValueCat::SSet(v) => v.f,
            };
            let mut r = plain("homology", json!({"p": p.p()}));
            if complex.is_some() || inp.ws.ssets.is_empty() {
                let (n, c) = Workspace::pick(&inp.ws.complexes, inp.name(complex.as_ref()), "complex")?;
                r.betti.insert(n.clone(), c.betti());
            } else {
                let (n, k) = Workspace::pick(&inp.ws.ssets, inp.name(sset.as_ref()), "sset")?;
                r.betti.insert(n.clone(), sset_homology(k, p));
            }
            (r, None)
        }
        Cmd::Nerve { cat } => {
            let inp = load_inputs(&cli.workspaces, &[(cat.as_ref(), Kind::Cat)])?;
            let (n, c) = Workspace::pick(&inp.ws.categories, inp.name(cat.as_ref()), "category")?;
            if let Some(w) = c.loop_witness() {
                return Err(Error::NotLoopFree(w).into());
            }
            let nv = Nerve::of(c)?;
            let mut r = plain("nerve", json!({"category": n, "counts": nv.space.counts()}));
            r.betti.insert(format!("N({n})"), sset_homology(&nv.space, Fp::new(2)?));
            let mut w = Workspace::default();
            w.add_sset(&format!("N({n})"), nv.space.clone());
            (r, Some(w))
        }
        Cmd::Colim { diagram } | Cmd::Ocolim { diagram } => {
            let inp = load_inputs(&cli.workspaces, &[(diagram.as_ref(), Kind::Diagram)])?;
            let (n, d) = Workspace::pick(&inp.ws.diagrams, inp.name(diagram.as_ref()), "diagram")?;
            let is_colim = matches!(cli.cmd, Cmd::Colim { .. });
            let r = match &d.diagram {
                AnyBounded::Chain(v, x) => {
                    check_tag(&cli.value_cat, &v.tag())?;
                    if is_colim { colim_report(v, x, cross, n)? } else { ocolim_report(v, x, cross, n)? }
                }
                AnyBounded::SSet(v, x) => {
                    check_tag(&cli.value_cat, &v.tag())?;
                    if is_colim { colim_report(v, x, cross, n)? } else { ocolim_report(v, x, cross, n)? }
                }
            };
            (r, None)
        }
        Cmd::Kan { map, diagram } => {
            let inp = load_inputs(&cli.workspaces, &[(map.as_ref(), Kind::SMap), (diagram.as_ref(), Kind::Diagram)])?;
            let (mn, m) = Workspace::pick(&inp.ws.smaps, inp.name(map.as_ref()), "map")?;
            let (dn, d) = Workspace::pick(&inp.ws.diagrams, inp.name(diagram.as_ref()), "diagram")?;
            if d.base != m.from {
                return Err(Error::Mismatch(format!("diagram {dn} lives over {} but {mn} starts at {}", d.base, m.from)).into());
            }
            let mut w = Workspace::default();
            w.add_sset(&m.to, m.map.cod.clone());
            let name = format!("{mn}_!{dn}");
            let mut r = plain("kan", json!({"map": mn, "diagram": dn}));
            match &d.diagram {
                AnyBounded::Chain(v, x) => {
                    let k = kan_extension(v, &m.map, x)?;
                    r.betti.insert("colim".into(), v.betti(&colim_bounded(v, &k.diagram)?.apex));
                    w.add_diagram(&name, &m.to, AnyBounded::Chain(v.clone(), k.diagram));
                }
                AnyBounded::SSet(v, x) => {
                    let k = kan_extension(v, &m.map, x)?;
                    r.betti.insert("colim".into(), v.betti(&colim_bounded(v, &k.diagram)?.apex));
                    w.add_diagram(&name, &m.to, AnyBounded::SSet(v.clone(), k.diagram));
                }
            }
            (r, Some(w))
        }
        Cmd::ReduceMap { map } => {
            let inp = load_inputs(&cli.workspaces, &[(map.as_ref(), Kind::SMap)])?;
            let (mn, m) = Workspace::pick(&inp.ws.smaps, inp.name(map.as_ref()), "map")?;
            let red = reduce_map(&m.map)?;
            let mut r = plain("reduce-map", json!({"map": mn, "counts": red.red.counts(), "collapses": red.log}));
            r.verdict = red.residual.is_reduced() && red.f_red.is_epi();
            let mut w = Workspace::default();
            w.add_sset(&m.from, m.map.dom.clone());
            w.add_sset(&m.to, m.map.cod.clone());
            w.add_sset("red", red.red.clone());
            w.add_smap("f_red", &m.from, "red", red.f_red);
            w.add_smap("residual", "red", &m.to, red.residual);
            (r, Some(w))
        }
        Cmd::Hocolim { cat, diagram } => {
            let inp = load_inputs(&cli.workspaces, &[(cat.as_ref(), Kind::Cat), (diagram.as_ref(), Kind::Indexed)])?;
            let (n, d) = Workspace::pick(&inp.ws.indexed, inp.name(diagram.as_ref()), "indexed diagram")?;
            if let Some(c) = inp.name(cat.as_ref()) {
                if c != d.cat {
                    return Err(Error::Mismatch(format!("diagram {n} is indexed by {} rather than {c}", d.cat)).into());
                }
            }
            if let Some(w) = d.diagram.cat().loop_witness() {
                return Err(Error::NotLoopFree(w).into());
            }
            let r = match &d.diagram {
                AnyIndexed::Chain(v, x) => {
                    check_tag(&cli.value_cat, &v.tag())?;
                    hocolim_report(v, x, cross, n)?
                }
                AnyIndexed::SSet(v, x) => {
                    check_tag(&cli.value_cat, &v.tag())?;
                    hocolim_report(v, x, cross, n)?
                }
            };
            (r, None)
        }
        Cmd::Gen { family, max_objects, max_dim, max_simplices } => {
            let fam: Family = family.parse()?;
            let p = match default_value_cat(&cli.value_cat)? {
                AnyValueCat::Chain(v) => v.f.p(),
                AnyValueCat::SSet(_) => return Err(Error::Invalid("generated diagrams are chain-valued".into()).into()),
            };
            let spec = GenSpec { seed: cli.seed, family: fam, max_objects: *max_objects, max_dim: *max_dim, max_simplices: *max_simplices, p };
            let w = generate(&spec)?;
            let r = plain("gen", json!({"family": family, "seed": cli.seed}));
            (r, Some(w))
        }
        Cmd::Verify { claim } => (verify(cli, claim)?, None),
    };
    if report.ms == 0 {
        report.ms = start.elapsed().as_millis();
    }
    Ok((report, artifact))
}

fn verify(cli: &Cli, claim: &Claim) -> Res<Report> {
    match claim {
        Claim::Fubini { diagram, left, right, instances } => {
            if diagram.is_none() {
                let vc = match default_value_cat(&cli.value_cat)? {
                    AnyValueCat::Chain(v) => v,
                    AnyValueCat::SSet(_) => return Err(Error::Invalid("generated instances are chain-valued".into()).into()),
                };
                let mut g = Gen::new(cli.seed, vc.f);
                let mut reports = Vec::new();
                for _ in 0..*instances {
                    let (na, nb) = (1 + g.below(3), 1 + g.below(3));
                    let a = Arc::new(g.poset(na, 0.5, false));
                    let b = Arc::new(g.poset(nb, 0.5, false));
                    let d = g.indexed_diagram(&Arc::new(a.product(&b)), ComplexSize { max_degree: 1, max_pieces: 1 }, true);
                    reports.push(verify_fubini(&vc, &a, &b, &d)?);
                }
                return Ok(combine("fubini", reports));
            }
            let inp = load_inputs(&cli.workspaces, &[(diagram.as_ref(), Kind::Indexed), (left.as_ref(), Kind::Cat), (right.as_ref(), Kind::Cat)])?;
            let (_, d) = Workspace::pick(&inp.ws.indexed, inp.name(diagram.as_ref()), "indexed diagram")?;
            let (_, a) = Workspace::pick(&inp.ws.categories, inp.name(left.as_ref()), "category")?;
            let (_, b) = Workspace::pick(&inp.ws.categories, inp.name(right.as_ref()), "category")?;
            match &d.diagram {
                AnyIndexed::Chain(v, x) => fubini_named(v, x, a, b),
                AnyIndexed::SSet(v, x) => fubini_named(v, x, a, b),
            }
        }
        Claim::Thomason { base, fibers, diagram, instances } => {
            if fibers.is_none() {
                let vc = SSetCat::new(2)?;
                let mut g = Gen::new(cli.seed, vc.f);
                let mut reports = Vec::new();
                for _ in 0..*instances {
                    let n = 2 + g.below(3);
                    let i = Arc::new(g.poset(n, 0.5, false));
                    let h = g.cat_diagram(&i, 3)?;
                    reports.push(verify_thomason_spaces(&vc, &h)?);
                }
                return Ok(combine("thomason", reports));
            }
            let inp = load_inputs(&cli.workspaces, &[(base.as_ref(), Kind::Cat), (fibers.as_ref(), Kind::CatDiagram), (diagram.as_ref(), Kind::Indexed)])?;
            let (hn, h) = Workspace::pick(&inp.ws.cat_diagrams, inp.name(fibers.as_ref()), "category diagram")?;
            if let Some(b) = inp.name(base.as_ref()) {
                if b != h.base {
                    return Err(Error::Mismatch(format!("{hn} has base {} rather than {b}", h.base)).into());
                }
            }
            match diagram {
                None => {
                    let vc = match default_value_cat(&cli.value_cat)? {
                        AnyValueCat::SSet(v) => v,
                        AnyValueCat::Chain(v) => SSetCat::new(v.f.p())?,
                    };
                    Ok(verify_thomason_spaces(&vc, &h.diagram)?)
                }
                Some(_) => {
                    let (_, d) = Workspace::pick(&inp.ws.indexed, inp.name(diagram.as_ref()), "indexed diagram")?;
                    let g = grothendieck(&h.diagram)?;
                    match &d.diagram {
                        AnyIndexed::Chain(v, x) => Ok(verify_thomason(v, &h.diagram, &as_product_free(x, &g.cat)?)?),
                        AnyIndexed::SSet(v, x) => Ok(verify_thomason(v, &h.diagram, &as_product_free(x, &g.cat)?)?),
                    }
                }
            }
        }
        Claim::Cofinality { functor, diagram } => {
            let inp = load_inputs(&cli.workspaces, &[(functor.as_ref(), Kind::Functor), (diagram.as_ref(), Kind::Indexed)])?;
            let (fname, f) = Workspace::pick(&inp.ws.functors, inp.name(functor.as_ref()), "functor")?;
            let (dn, d) = Workspace::pick(&inp.ws.indexed, inp.name(diagram.as_ref()), "indexed diagram")?;
            if f.tgt != d.cat {
                return Err(Error::Mismatch(format!("{fname} lands in {} but {dn} is indexed by {}", f.tgt, d.cat)).into());
            }
            let mut r = match &d.diagram {
                AnyIndexed::Chain(v, x) => verify_cofinality(v, &f.functor, x)?,
                AnyIndexed::SSet(v, x) => verify_cofinality(v, &f.functor, x)?,
            };
            r.notes.push(format!("terminality: {:?}", is_terminal_functor(&f.functor)?));
            Ok(r)
        }
        Claim::KanBounded { map, diagram } | Claim::Reduction { map, diagram } => {
            let inp = load_inputs(&cli.workspaces, &[(map.as_ref(), Kind::SMap), (diagram.as_ref(), Kind::Diagram)])?;
            let (mn, m) = Workspace::pick(&inp.ws.smaps, inp.name(map.as_ref()), "map")?;
            let (dn, d) = Workspace::pick(&inp.ws.diagrams, inp.name(diagram.as_ref()), "diagram")?;
            let kan = matches!(claim, Claim::KanBounded { .. });
            let want = if kan { &m.from } else { &m.to };
            if &d.base != want {
                return Err(Error::Mismatch(format!("diagram {dn} lives over {} but {mn} needs one over {want}", d.base)).into());
            }
            Ok(match (&d.diagram, kan) {
                (AnyBounded::Chain(v, x), true) => verify_kan_bounded(v, &m.map, x)?,
                (AnyBounded::SSet(v, x), true) => verify_kan_bounded(v, &m.map, x)?,
                (AnyBounded::Chain(v, x), false) => verify_reduction(v, &m.map, x)?,
                (AnyBounded::SSet(v, x), false) => verify_reduction(v, &m.map, x)?,
            })
        }
        Claim::Cone { sset, complex } => {
            let inp = load_inputs(&cli.workspaces, &[(sset.as_ref(), Kind::SSet), (complex.as_ref(), Kind::Complex)])?;
            let k = if inp.ws.ssets.is_empty() && sset.is_none() {
                Arc::new(hocolim_core::simplicial::sphere(1)?)
            } else {
                Workspace::pick(&inp.ws.ssets, inp.name(sset.as_ref()), "sset")?.1.clone()
            };
            let c = cone(&k);
            if complex.is_some() || !inp.ws.complexes.is_empty() {
                let (_, x) = Workspace::pick(&inp.ws.complexes, inp.name(complex.as_ref()), "complex")?;
                let vc = ChainCat::new(x.field().p())?;
                let f = BoundedDiagram::constant(&vc, c.space.clone(), x.clone());
                let q = cofibrant_replacement(&vc, &f, ReplaceMode::Minimal)?;
                Ok(verify_cone(&vc, &c, &q.qf)?)
            } else {
                let vc = SSetCat::new(2)?;
                let f = BoundedDiagram::constant(&vc, c.space.clone(), Arc::new(SSet::point()));
                let q = cofibrant_replacement(&vc, &f, ReplaceMode::Minimal)?;
                Ok(verify_cone(&vc, &c, &q.qf)?)
            }
        }
    }
}

/// Reindex a diagram over a category with the same canonical form as `target`.
fn as_product_free<V: ValueCategory>(d: &IndexedDiagram<V>, target: &Arc<FinCat>) -> Res<IndexedDiagram<V>> {
    as_product(d, target).map_err(|_| InputError(Error::Mismatch("diagram is not indexed by the Grothendieck construction".into())))
}

fn emit(cli: &Cli, report: &Report, artifact: Option<Workspace>) -> Res<()> {
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("plain data")),
        Format::Text => report.to_text(),
    };
    match (&cli.out, artifact) {
        (Some(path), Some(w)) => {
            w.save(path)?;
            print!("{text}");
        }
        (Some(path), None) => std::fs::write(path, text).map_err(Error::from)?,
        (None, Some(w)) if matches!(cli.cmd, Cmd::Gen { .. }) => print!("{}", w.to_json()),
        (None, _) => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, artifact)) => {
            if let Err(InputError(e)) = emit(&cli, &report, artifact) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
