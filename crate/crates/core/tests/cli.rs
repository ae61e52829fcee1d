use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use iecount::cli::CliError;
use iecount::Error;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("iecount-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn iecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iecount")).args(args).output().unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = iecount(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn faces_of_generator_file() {
    let f = data("blocks_gens.txt");
    let out = stdout_of(&["faces", path(&f), "--oracle"]);
    assert_eq!(out, "f 1 6 7 0 0 0 0\ntotal 14\n");
}

#[test]
fn faces_with_weights() {
    let g = scratch("comp.txt");
    fs::write(&g, "6 8\n1 2\n1 3\n1 4\n1 5 6\n2 3 4\n2 3 5 6\n2 4 5 6\n3 4 5 6\n").unwrap();
    let out = stdout_of(&["faces", path(&g), "--weights", "7,4,3,3,2,2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[2], "even 0:1 4:1 5:4 6:3 7:2 9:2");
    assert_eq!(lines[3], "odd 2:2 3:2 4:1 7:3 8:3 9:4");
}

#[test]
fn permutation_problems() {
    assert_eq!(
        stdout_of(&["count-perm", path(&data("blocks.perm")), "--oracle"]),
        "341736\n"
    );
    assert_eq!(
        stdout_of(&["count-perm", path(&data("disjunctions.maps")), "--oracle"]),
        "9940089980\n"
    );
}

#[test]
fn compositions() {
    let out = stdout_of(&["count-comp", "--bounds", "7,4,3,3,2,2", "--target", "9", "--oracle"]);
    assert_eq!(out, "125\n");
    let huge = "1000000000000000000000000000000";
    let out = stdout_of(&["count-comp", "--bounds", &format!("{huge},{huge}"), "--target", "5"]);
    assert_eq!(out, "6\n");
}

#[test]
fn normal_forms() {
    let dnf = data("three_terms.dnf");
    let cnf = data("three_clauses.cnf");
    assert_eq!(stdout_of(&["count-dnf", path(&dnf), "--oracle"]), "17\n");
    assert_eq!(stdout_of(&["count-dnf", path(&dnf), "--k", "3", "--oracle"]), "6\n");
    assert_eq!(stdout_of(&["--threads", "3", "count-dnf", path(&dnf)]), "17\n");
    assert_eq!(stdout_of(&["count-cnf", path(&cnf), "--oracle"]), "47\n");
}

#[test]
fn rows_are_written_on_request() {
    let rows = scratch("rows.txt");
    stdout_of(&["faces", path(&data("blocks_gens.txt")), "--rows-out", path(&rows)]);
    let text = fs::read_to_string(&rows).unwrap();
    assert!(!text.trim().is_empty());
    assert!(text.lines().all(|l| l.split_whitespace().count() == 6));
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench-dnf", "--h", "30", "--n", "30", "--seed", "5", "--runs", "2"];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(
        a.lines().next().unwrap(),
        "h,n,n1,n0,anticliqueCount,maxAnticlique,millis"
    );
    assert_eq!(a.lines().count(), 3);
}

#[test]
fn malformed_input_exits_with_2() {
    let bad = scratch("bad.dnf");
    fs::write(&bad, "p dnf 3 1\n1 x 0\n").unwrap();
    let out = iecount(&["count-dnf", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.dnf"));

    let out = iecount(&["count-cnf", path(&data("three_terms.dnf"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(iecount(&["count-perm"]).status.code(), Some(2));
}

#[test]
fn oracle_beyond_budget_exits_with_3() {
    let wide = scratch("wide.dnf");
    fs::write(&wide, "p dnf 30 2\n1 2 0\n-3 0\n").unwrap();
    assert_eq!(
        stdout_of(&["count-dnf", path(&wide)]),
        format!("{}\n", (1u64 << 28) + (1 << 29) - (1 << 27))
    );
    assert_eq!(iecount(&["count-dnf", path(&wide), "--oracle"]).status.code(), Some(3));
}

#[test]
fn exit_code_table() {
    let mismatch = CliError::OracleMismatch {
        computed: "1".into(),
        oracle: "2".into(),
    };
    assert_eq!(mismatch.exit_code(), 4);
    assert_eq!(CliError::Core(Error::BudgetExceeded("x".into())).exit_code(), 3);
    let parse = iecount::dnf::Formula::parse("p dnf").unwrap_err();
    assert_eq!(CliError::Core(parse).exit_code(), 2);
    assert_eq!(CliError::Core(Error::Invalid("x".into())).exit_code(), 1);
}
