mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hocolim_core::category::grothendieck;
use hocolim_core::io::Workspace;

use common::*;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hocolim"));
    c.env_remove("HOCOLIM_PRIME");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Shipped data files equal what the builders produce; set HOCOLIM_WRITE_DATA to refresh.
fn check_data(rel: &str, w: &Workspace) {
    let path = data_dir().join(rel);
    if std::env::var_os("HOCOLIM_WRITE_DATA").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        w.save(&path).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), w.to_json(), "{rel} is stale");
}

#[test]
fn data_files_are_current() {
    let (i, h) = cube_workspaces();
    check_data("cube/I.json", &i);
    check_data("cube/H.json", &h);
    let (c, f) = pushout_workspaces();
    check_data("pushout/pushout.json", &c);
    check_data("pushout/F.json", &f);
}

#[test]
fn cube_grothendieck_is_the_face_poset_of_a_triangle() {
    let (_, _, h) = cube_instance();
    let g = grothendieck(&h).unwrap();
    let mask = |x: u32| {
        let (i, a) = g.objs[x as usize];
        let name = h.fibers[i as usize].object_name(a).to_string();
        name.chars().filter(|c| c.is_ascii_digit()).fold(0u32, |m, c| m | 1 << c.to_digit(10).unwrap())
    };
    let n = g.cat.num_objects() as u32;
    assert_eq!(n, 7);
    let mut masks: Vec<u32> = (0..n).map(mask).collect();
    masks.sort();
    assert_eq!(masks, (1..8).collect::<Vec<_>>());
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (mask(x), mask(y));
            let expected = usize::from(a & b == b);
            assert_eq!(g.cat.hom(x, y).len(), expected, "{a:03b} → {b:03b}");
        }
    }
    assert_eq!(g.cat.num_morphisms() - 7, 12);
}

#[test]
fn thomason_on_the_cube_files() {
    let dir = data_dir().join("cube");
    let o = run(&["verify", "thomason", "--base", s(&dir.join("I.json")), "--fibers", s(&dir.join("H.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("N(Gr)        |  1\n"), "{out}");
    assert!(out.contains("verdict: positive"));
}

#[test]
fn hocolim_of_the_pushout_files() {
    let dir = data_dir().join("pushout");
    let o = run(&["hocolim", "--cat", s(&dir.join("pushout.json")), "--diagram", s(&dir.join("F.json")), "--value-cat", "chain:f2", "--cross-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("hocolim |  1  0  1\n"), "{}", stdout(&o));
    let o = run(&["hocolim", "--diagram", s(&dir.join("F.json")), "--value-cat", "chain:f3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("chain:f3"));
}

#[test]
fn json_reports_parse() {
    let dir = data_dir().join("pushout");
    let o = run(&["--format", "json", "--ws", s(&dir.join("F.json")), "hocolim"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["betti"]["hocolim"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["verdict"], serde_json::json!(true));
}

#[test]
fn gen_is_deterministic() {
    for family in ["poset", "dag-category", "chain-complex", "bounded-diagram-via-closure", "simplicial-map"] {
        let a = run(&["gen", "--family", family, "--seed", "7", "--max-objects", "5"]);
        let b = run(&["gen", "--family", family, "--seed", "7", "--max-objects", "5"]);
        assert_eq!(a.status.code(), Some(0), "{family}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{family}");
        Workspace::from_json(&stdout(&a)).unwrap();
    }
    let c = run(&["gen", "--family", "poset", "--seed", "8", "--max-objects", "5"]);
    assert_ne!(c.stdout, run(&["gen", "--family", "poset", "--seed", "7", "--max-objects", "5"]).stdout);
    let o = run(&["gen", "--family", "lattice"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prime_from_the_environment() {
    let o = bin().args(["gen", "--family", "chain-complex", "--seed", "1"]).env("HOCOLIM_PRIME", "3").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w = Workspace::from_json(&stdout(&o)).unwrap();
    assert_eq!(w.complexes["X"].field().p(), 3);
}

#[test]
fn kan_then_reduction_round_trip() {
    for seed in 0..4 {
        let sm = scratch(&format!("map{seed}.json"));
        let kan = scratch(&format!("kan{seed}.json"));
        let seed = seed.to_string();
        assert_eq!(run(&["gen", "--family", "simplicial-map", "--seed", &seed, "--out", s(&sm)]).status.code(), Some(0));
        let o = run(&["--ws", s(&sm), "kan", "--out", s(&kan), "--cross-check"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = run(&["--ws", s(&sm), "verify", "kan-bounded"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let o = run(&["--ws", s(&sm), "--ws", s(&kan), "verify", "reduction", "--map", "f", "--diagram", "f_!F"]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
        let o = run(&["--ws", s(&sm), "reduce-map", "--out", s(&scratch("red.json"))]);
        assert_eq!(o.status.code(), Some(0));
        let red = Workspace::load(&scratch("red.json")).unwrap();
        assert!(red.smaps.contains_key("f_red") && red.smaps.contains_key("residual"));
    }
}

#[test]
fn colim_and_ocolim_with_cross_check() {
    let f = scratch("bounded.json");
    assert_eq!(run(&["gen", "--family", "bounded-diagram", "--seed", "5", "--out", s(&f)]).status.code(), Some(0));
    for cmd in ["colim", "ocolim"] {
        let o = run(&["--cross-check", "--ws", s(&f), cmd]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("cell-by-cell colimit agrees: true"));
    }
}

#[test]
fn nerve_writes_a_space() {
    let p = scratch("poset.json");
    let out = scratch("nerve.json");
    assert_eq!(run(&["gen", "--family", "poset", "--seed", "2", "--out", s(&p)]).status.code(), Some(0));
    let o = run(&["nerve", "--cat", s(&p), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w = Workspace::load(&out).unwrap();
    assert!(w.ssets.contains_key("N(P)"));
    let o = run(&["homology", "--sset", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn generated_verifications_are_positive() {
    for args in [&["verify", "fubini", "--seed", "4"][..], &["verify", "thomason", "--seed", "4"], &["verify", "cone"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn report_goes_to_out() {
    let out = scratch("report.txt");
    let o = run(&["--out", s(&out), "verify", "cone"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("verdict: positive"));
}

#[test]
fn input_errors_exit_with_two() {
    let v = scratch("vnext.json");
    std::fs::write(&v, "{\"schema_version\": 2}").unwrap();
    let o = run(&["--ws", s(&v), "nerve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported schema version 2"), "{}", stderr(&o));

    let bad = scratch("syntax.json");
    std::fs::write(&bad, "{\"schema_version\": 1,\n  \"categories\": {\n").unwrap();
    let o = run(&["--ws", s(&bad), "nerve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let dangling = scratch("dangling.json");
    std::fs::write(&dangling, r#"{"schema_version": 1, "ssets": {"K": {"simplices": [{"id": 0, "dim": 0}, {"id": 1, "dim": 1}], "faces": {"1:0": {"base": 0, "op": [0]}, "1:1": {"base": 7, "op": [0]}}}}}"#).unwrap();
    let o = run(&["--ws", s(&dangling), "homology"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('7'), "{}", stderr(&o));

    let o = run(&["colim", "--diagram", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere"));

    let o = run(&["--value-cat", "chain:f4", "gen", "--family", "poset"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    for args in [&["--format", "json", "verify", "fubini", "--seed", "3"][..], &["verify", "thomason", "--seed", "3"], &["--format", "json", "verify", "cone"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(without_timing(&stdout(&a)), without_timing(&stdout(&b)), "{args:?}");
    }
}

/// Drop the `"ms": …` timing lines of JSON reports.
fn without_timing(s: &str) -> String {
    s.lines().filter(|l| !l.trim_start().starts_with("\"ms\"")).collect::<Vec<_>>().join("\n")
}
