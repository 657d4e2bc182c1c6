use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/examples").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirspace")).args(args).output().expect("binary runs")
}

fn run_ex(args: &[&str], files: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| example(f).display().to_string()).collect();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(paths.iter().map(String::as_str));
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn exit_codes() {
    assert_eq!(run_ex(&["free", "check-algebra"], &["semilattice.json"]).status.code(), Some(0));
    assert_eq!(run_ex(&["free", "check-algebra"], &["bad_semilattice.json"]).status.code(), Some(1));
    assert_eq!(run(&["space", "check", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["space", "frobnicate"]).status.code(), Some(2));
    assert_eq!(run_ex(&["space", "classify", "--depth", "0"], &["c2.json"]).status.code(), Some(2));
    let o = run_ex(&["free", "free", "--theory", "convex", "--depth", "2", "--budget", "3"], &["antichain2.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn schema_errors_are_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"poset":{"kind":"chain","n":2}}"#, "schema"),
        (r#"{"schema":1,"posset":{}}"#, "posset"),
        (r#"{"schema":1,"poset":{"kind":"chain","n":2,"m":1}}"#, "poset.m"),
        ("{\"schema\":1,\n\"poset\":", "line 2"),
    ];
    for (i, (text, node)) in cases.iter().enumerate() {
        let p = dir.path().join(format!("{i}.json"));
        std::fs::write(&p, text).unwrap();
        let o = run(&["space", "check", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(node), "{err}");
    }
}

#[test]
fn parse_examples() {
    let o = run_ex(&["space", "check", "--format", "json"], &["c2.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["subject"], "partial order");
    let o = run_ex(&["space", "directed-open", "--format", "json"], &["remark.json"]);
    assert_eq!(json(&o)["result"]["verdict"], "directed_open_not_open");
    let o = run_ex(&["space", "classify", "--format", "json"], &["remark.json"]);
    assert_eq!(json(&o)["result"]["kind"], "not_directed");
}

#[test]
fn dot_export() {
    let count = |o: &Output| {
        let s = stdout(o);
        (s.lines().filter(|l| l.contains("[label=")).count(), s.lines().filter(|l| l.contains("->")).count())
    };
    assert_eq!(count(&run_ex(&["dot", "space"], &["c2.json"])), (2, 1));
    assert_eq!(count(&run_ex(&["dot", "power", "--theory", "lower"], &["antichain2.json"])), (3, 2));
    let o = run_ex(&["dot", "space"], &["omega.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--prefix"));
    assert_eq!(count(&run_ex(&["dot", "space", "--prefix", "5"], &["omega.json"])), (5, 4));
}

#[test]
fn reports_are_deterministic_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("r.json");
    let args = ["free", "check-algebra", "--format", "json", "-o", saved.to_str().unwrap()];
    assert_eq!(run_ex(&args, &["bad_semilattice.json"]).status.code(), Some(1));
    let first = std::fs::read_to_string(&saved).unwrap();
    run_ex(&args, &["bad_semilattice.json"]);
    assert_eq!(std::fs::read_to_string(&saved).unwrap(), first);
    let replay = run_ex(&["free", "check-algebra", "--replay", saved.to_str().unwrap()], &["bad_semilattice.json"]);
    assert_eq!(replay.status.code(), Some(0), "{}", stdout(&replay));
    let other = run_ex(&["free", "check-algebra", "--replay", saved.to_str().unwrap()], &["semilattice.json"]);
    assert_eq!(other.status.code(), Some(1));
}

#[test]
fn verbs_run_on_examples() {
    let cases: &[(&[&str], &[&str], i32)] = &[
        (&["space", "converges"], &["omega_plus_one.json"], 0),
        (&["space", "way-below"], &["omega_plus_one.json"], 0),
        (&["space", "coreflect"], &["c2.json"], 0),
        (&["space", "product"], &["c2.json", "antichain2.json"], 0),
        (&["space", "separate"], &["separate.json"], 0),
        (&["space", "basis"], &["omega_plus_one.json"], 1),
        (&["ideal", "build"], &["omega_plus_one.json"], 0),
        (&["ideal", "sup"], &["omega_plus_one.json"], 0),
        (&["ideal", "wb"], &["omega_plus_one.json"], 0),
        (&["ideal", "adjunction"], &["omega_plus_one.json"], 0),
        (&["ideal", "product-check"], &["c2.json", "omega_plus_one.json"], 0),
        (&["bposet", "check"], &["omega_bposet.json"], 0),
        (&["bposet", "g"], &["omega_plus_one.json"], 0),
        (&["bposet", "h"], &["omega_bposet.json"], 0),
        (&["bposet", "roundtrip"], &["omega_bposet.json"], 0),
        (&["bposet", "roundtrip"], &["omega_plus_one.json"], 0),
        (&["bposet", "product"], &["c2_bposets.json"], 0),
        (&["bposet", "exp"], &["c2_bposets.json"], 0),
        (&["bposet", "reflect"], &["omega_bposet.json"], 0),
        (&["bposet", "sobrify"], &["omega_bposet.json"], 0),
        (&["nab", "check"], &["dyadic.json"], 0),
        (&["nab", "space"], &["nab_map.json"], 0),
        (&["nab", "to-nab"], &["omega_plus_one.json"], 0),
        (&["nab", "normal-map"], &["nab_map.json"], 0),
        (&["nab", "exp"], &["c2.json", "antichain2.json"], 0),
        (&["nab", "ev-curry"], &["evcurry.json"], 0),
        (&["free", "product"], &["semilattice.json", "semilattice.json"], 0),
        (&["free", "equalizer"], &["equalizer.json"], 0),
        (&["free", "free", "--theory", "lower"], &["antichain2.json"], 0),
        (&["free", "power", "--theory", "convex"], &["antichain2.json"], 0),
        (&["free", "verify-universal"], &["universal.json"], 0),
        (&["free", "preservation", "--theory", "upper"], &["c2.json"], 0),
    ];
    for (args, files, code) in cases {
        let o = run_ex(args, files);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn quick_suite_and_mutation() {
    let o = run(&["suite", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
    let o = run(&["suite", "quick", "--mutate", "hoare"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL criterion  5"));
}

#[test]
fn shipped_examples_parse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/examples");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        dirspace::schema::parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        n += 1;
    }
    assert!(n >= 15);
}
