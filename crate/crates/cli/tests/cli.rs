use std::path::PathBuf;
use std::process::{Command, Output};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("sullivan-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sullivan"))
        .args(args)
        .env("SULLIVAN_WORKSPACE", data())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn tameness_of_ger() {
    let o = run(&["tameness", "ger.cochain.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("r = 1"), "{s}");
    assert!(s.contains("(arity 2, degree -1)"), "{s}");
    let o = run(&["tameness", "ger.chain.json"]);
    assert!(stdout(&o).contains("r = 0"));
    for f in ["com.json", "ass.json", "lie.json"] {
        assert!(stdout(&run(&["tameness", f])).contains("r = 0"), "{f}");
    }
}

#[test]
fn s2_minimal_model_report() {
    let args = ["minimal-model", "s2.json", "--r", "1", "--max-degree", "8"];
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("generators: 2:1, 3:1"), "{s}");
    assert!(s.contains("d = mu2[v2_0,v2_0]"), "{s}");
    assert!(s.contains("quasi-isomorphism certified through degree 8"), "{s}");
    assert_eq!(stdout(&run(&args)), s, "reports differ between runs");
}

#[test]
fn corrupted_operad_fails_validation() {
    let o = run(&["validate", "corrupted-ass.json"]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(s.contains("associativity"), "{s}");
    assert!(s.contains(" o_"), "{s}");
}

#[test]
fn sample_files_validate() {
    for f in ["com.json", "ass.json", "lie.json", "ger.cochain.json", "ger.chain.json", "s2.json", "lift-w.json"] {
        let o = run(&["validate", f]);
        assert!(o.status.success(), "{f}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn compare_two_seeds() {
    let dir = scratch("compare");
    let m1 = dir.join("m1.json");
    let m2 = dir.join("m2.json");
    let base = ["minimal-model", "s2.json", "--r", "1", "--max-degree", "8", "--out"];
    let o = run(&[&base[..], &[m1.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&[&base[..], &[m2.to_str().unwrap(), "--seed", "7"]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let c = dir.join("cmp.json");
    let o = run(&["compare", m1.to_str().unwrap(), m2.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("degree 2: linear part"), "{s}");
    assert!(s.contains("homotopy f' g ~ f certified"), "{s}");
    assert!(std::fs::read_to_string(&c).unwrap().contains("\"kind\": \"comparison\""));
    let o = run(&["validate", m1.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn lift_and_certificate() {
    let o = run(&["lift", "--f", "lift-f.json", "--w", "lift-w.json", "--up-to", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("c -> 3/2*x"), "{}", stdout(&o));
    let o = run(&["check-qiso", "lift-w.json", "--up-to", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certified through degree 8"));
    // f is an isomorphism, so w also lifts through it
    let o = run(&["lift", "--f", "lift-w.json", "--w", "lift-f.json", "--up-to", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("x -> 2/3*c"), "{}", stdout(&o));
}

#[test]
fn model_map_can_be_checked() {
    let dir = scratch("qiso");
    let f = dir.join("f.json");
    let o = run(&["minimal-model", "s2.json", "--r", "1", "--max-degree", "8", "--map-out", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["check-qiso", f.to_str().unwrap(), "--up-to", "7"]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn schema_errors_name_the_path() {
    let dir = scratch("schema");
    let bad = dir.join("bad.json");
    let text = std::fs::read_to_string(data().join("s2.json")).unwrap().replace("\"hi\": 9", "\"hi\": \"nine\"");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["minimal-model", bad.to_str().unwrap(), "--r", "1", "--max-degree", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("complex.hi"), "{}", stderr(&o));
}

#[test]
fn preconditions_exit_nonzero() {
    let o = run(&["minimal-model", "s2.json", "--r", "1", "--max-degree", "8", "--convention", "chain"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("convention"), "{}", stderr(&o));
    let o = run(&["minimal-model", "s2.json", "--r", "2", "--max-degree", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("precondition"), "{}", stderr(&o));
}

#[test]
fn free_dims_of_lie() {
    let o = run(&["free-dims", "Lie", "--convention", "cochain", "--gens", "a:2,b:2", "--max-degree", "8"]);
    let s = stdout(&o);
    assert!(s.contains("degree 4: 1") && s.contains("degree 6: 2") && s.contains("degree 8: 3"), "{s}");
}

#[test]
fn builtin_tables_match_the_shipped_files() {
    let o = run(&["builtin", "Ger", "--convention", "cochain", "--arity-bound", "4"]);
    let shipped = std::fs::read_to_string(data().join("ger.cochain.json")).unwrap();
    assert_eq!(stdout(&o), shipped);
}
