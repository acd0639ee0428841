use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn mapping() -> PathBuf {
    core_dir().join("data/protrait_mapping.ttl")
}

fn protrait(file: &str) -> PathBuf {
    core_dir().join("tests/fixtures/protrait").join(file)
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_registry-kg"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn convert_fixture(dir: &TempDir) -> PathBuf {
    let out = dir.path().join("graph.nt");
    let o = run(&[&"convert", &mapping(), &protrait("PATIENT.csv"), &protrait("TREATMENT.csv"), &"-o", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn convert_matches_hand_expanded_output() {
    let dir = TempDir::new().unwrap();
    let out = convert_fixture(&dir);
    let expected = fs::read_to_string(protrait("expected.nt")).unwrap();
    assert_eq!(fs::read_to_string(out).unwrap(), expected);

    let o = run(&[&"convert", &mapping(), &protrait("PATIENT.csv"), &protrait("TREATMENT.csv")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), expected);
}

#[test]
fn convert_with_named_tables() {
    let dir = TempDir::new().unwrap();
    let patient = dir.path().join("p.csv");
    fs::copy(protrait("PATIENT.csv"), &patient).unwrap();
    let table = format!("PATIENT={}", patient.display());
    let o = run(&[&"convert", &mapping(), &protrait("TREATMENT.csv"), &"--table", &table]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), fs::read_to_string(protrait("expected.nt")).unwrap());

    let o = run(&[&"convert", &mapping(), &protrait("PATIENT.csv"), &"--table", &table]);
    assert_eq!(o.status.code(), Some(2), "duplicate table name");
}

#[test]
fn convert_missing_column_names_it() {
    let dir = TempDir::new().unwrap();
    let patient = dir.path().join("PATIENT.csv");
    fs::write(&patient, "ID,SEX,TUMOUR_SITE\nP1,C16576,C12468\n").unwrap();
    let o = run(&[&"convert", &mapping(), &patient, &protrait("TREATMENT.csv")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("AGE"), "{}", stderr(&o));
}

#[test]
fn convert_missing_mapping_is_usage_error() {
    let o = run(&[&"convert", &"/nonexistent/mapping.ttl", &protrait("PATIENT.csv")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn strict_mode_and_report() {
    let dir = TempDir::new().unwrap();
    let patient = dir.path().join("PATIENT.csv");
    fs::write(&patient, "ID,AGE,SEX,TUMOUR_SITE\nP1,,C16576,C12468\nP2,40,C20197,C12468\n").unwrap();
    let report = dir.path().join("skipped.tsv");
    let base = [&"convert" as &dyn AsRef<std::ffi::OsStr>, &mapping(), &patient, &protrait("TREATMENT.csv")];

    let mut args = base.to_vec();
    args.extend([&"--report" as &dyn AsRef<std::ffi::OsStr>, &report]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines = fs::read_to_string(&report).unwrap();
    assert_eq!(lines.lines().count(), 1);
    assert!(lines.contains("\t1\tAGE\t"), "{lines}");

    let mut args = base.to_vec();
    args.push(&"--strict");
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let graph = convert_fixture(&dir);
    let o = run(&[&"validate", &graph]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let text = fs::read_to_string(&graph).unwrap();
    let age = text.lines().find(|l| l.contains("/roo/hasAge>")).unwrap();
    let pruned = dir.path().join("pruned.nt");
    let kept: String = text.lines().filter(|l| *l != age).map(|l| format!("{l}\n")).collect();
    fs::write(&pruned, kept).unwrap();
    let o = run(&[&"validate", &pruned]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 1, "{}", stdout(&o));

    let bad = dir.path().join("bad.nt");
    fs::write(&bad, "<http://a> <http://b> .\n").unwrap();
    assert_eq!(run(&[&"validate", &bad]).status.code(), Some(2));
}

#[test]
fn query_over_two_graphs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&[&"synth", &"-n", &"4", &"--seed", &"1", &"-o", &a]).status.code(), Some(0));
    assert_eq!(run(&[&"synth", &"-n", &"6", &"--seed", &"2", &"-o", &b]).status.code(), Some(0));
    let mut graphs = Vec::new();
    for centre in [&a, &b] {
        let out = centre.join("graph.nt");
        let o = run(&[&"convert", &mapping(), &centre.join("PATIENT.csv"), &centre.join("TREATMENT.csv"), &"-o", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        graphs.push(out);
    }
    let count = "SELECT (COUNT(*) AS ?n) WHERE { ?p a ncit:C16960 }";
    let o = run(&[&"query", &graphs[0], &graphs[1], &"-e", &count]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "?n\n\"10\"^^<http://www.w3.org/2001/XMLSchema#integer>\n"
    );

    let query_file = dir.path().join("q.rq");
    fs::write(&query_file, "SELECT ?p WHERE { ?p roo:hasAge ?a FILTER(?a > 200) }").unwrap();
    let o = run(&[&"query", &graphs[0], &"--query", &query_file]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "?p\n");

    let o = run(&[&"query", &graphs[0], &"-e", &"SELECT ?x WHERE {"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn synth_is_deterministic_and_chains() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    for out in [&first, &second] {
        assert_eq!(run(&[&"synth", &"-n", &"20", &"--seed", &"9", &"-o", out]).status.code(), Some(0));
    }
    for table in ["PATIENT.csv", "TREATMENT.csv"] {
        assert_eq!(fs::read(first.join(table)).unwrap(), fs::read(second.join(table)).unwrap());
    }

    let graph = dir.path().join("graph.nt");
    let o = run(&[&"convert", &mapping(), &first.join("PATIENT.csv"), &first.join("TREATMENT.csv"), &"-o", &graph]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(run(&[&"validate", &graph]).status.code(), Some(0));

    let o = run(&[&"stats", &graph]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class\tncit:C16960\t20\n"), "{}", stdout(&o));

    let empty = dir.path().join("empty");
    assert_eq!(run(&[&"synth", &"-n", &"0", &"-o", &empty]).status.code(), Some(0));
    assert_eq!(fs::read_to_string(empty.join("PATIENT.csv")).unwrap(), "ID,AGE,SEX,TUMOUR_SITE\n");
    assert_eq!(
        fs::read_to_string(empty.join("TREATMENT.csv")).unwrap(),
        "ID,PATIENT_ID,RT_START_DATE,MODALITY\n"
    );
}
