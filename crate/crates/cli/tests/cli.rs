use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville")).args(args).env_remove("LIOUVILLE_THREADS").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn summatory_line() {
    assert_eq!(stdout(&["L", "30"]), "L(30) = -4\n");
    assert_eq!(stdout(&["L", "30", "--format", "csv"]), "N,L\n30,-4\n");
    assert_eq!(stdout(&["L", "30", "--format", "json"]), "{\"N\":30,\"L\":-4}\n");
    assert_eq!(stdout(&["L", "5", "--by-towers"]), "L(5) = -1 (up 2, down 3)\n");
}

#[test]
fn long_sums_report_progress_on_stderr() {
    let out = run(&["L", "25000", "--stride", "10000"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 2);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("L(25000) = "));
}

#[test]
fn checkpointed_sum_matches() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.ckpt");
    let path = path.to_str().unwrap();
    let plain = stdout(&["L", "123456"]);
    assert_eq!(stdout(&["L", "60000", "--checkpoint", path, "--stride", "20000"]), stdout(&["L", "60000"]));
    assert_eq!(stdout(&["L", "123456", "--checkpoint", path, "--stride", "20000"]), plain);
    let records = std::fs::read_to_string(path).unwrap();
    assert_eq!(records.lines().last().unwrap().split(',').next(), Some("123456"));
}

#[test]
fn triad_lines_round_trip() {
    let line = stdout(&["triad", "663"]);
    assert_eq!(line, "m=39 p=17 k=1 u=1 class=II tower_base=663\n");
    for n in ["663", "2160", "73573500", "1", "2", "1048576"] {
        let line = stdout(&["triad", n]);
        assert_eq!(stdout(&["triad", "--inverse", line.trim()]), format!("{n}\n"));
    }
    let out = run(&["triad", "--inverse", "m=1 p=4 k=1 u=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chi_square_row() {
    assert_eq!(
        stdout(&["chi2", "--start", "1001001", "--len", "1001"]),
        "no,kind,length,from,to,L,chi2\n1,arbitrary,1001,1001001,1002001,49,2.3986\nmean,,,,,,2.3986\n"
    );
}

#[test]
fn output_is_thread_count_independent() {
    let cases: [&[&str]; 4] = [
        &["fs", "--re", "2", "--im", "3", "--n", "300000"],
        &["fs", "--re", "2.5", "--n", "300000", "--format", "json"],
        &["tables", "1.1", "3.2", "--max-n", "1000000", "--format", "json"],
        &["towers", "5000"],
    ];
    for args in cases {
        let one = stdout(&[args, &["--threads", "1"]].concat());
        let four = stdout(&[args, &["--threads", "4"]].concat());
        assert_eq!(one, four, "{args:?}");
    }
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["L", "100"])
        .env("LIOUVILLE_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["L", "100"])
        .env("LIOUVILLE_THREADS", "x")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["bogus"][..],
        &["L"],
        &["L", "0"],
        &["L", "abc"],
        &["width", "10"],
        &["fs", "--re", "1"],
        &["--format", "xml", "L", "3"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let out = run(&["L", "100", "--checkpoint", "/nonexistent/dir/l.ckpt"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn waves_paginate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("waves.svg");
    let listing = stdout(&["waves", "--max-n", "100", "--svg", path.to_str().unwrap()]);
    let pages: Vec<&str> = listing.lines().collect();
    assert!(pages.len() > 1);
    for page in &pages {
        let doc = std::fs::read_to_string(page).unwrap();
        assert!(doc.starts_with("<svg") && doc.trim_end().ends_with("</svg>"));
        assert!(doc.matches("<path").count() <= 41);
    }
    let data = stdout(&["waves", "--max-n", "8"]);
    assert!(data.starts_with("tower,n,contribution\n1:1:1,1,1\n1:2:1,2,-1\n1:2:1,4,0\n1:2:1,8,-1\n"));
}

#[test]
fn small_commands() {
    assert_eq!(stdout(&["lambda", "30"]), "lambda(30) = -1\n");
    assert_eq!(stdout(&["twin", "12"]), "twin(12) = 24\n");
    assert_eq!(stdout(&["twin", "--tower", "1:2:1"]), "twin(1:2:1) = 1:1:1\n");
    assert_eq!(stdout(&["generate", "10", "--format", "json"]), "[1,-1,-1,1,-1,1,-1,-1,1,1]\n");
    assert_eq!(stdout(&["generate", "12", "--primes"]), "p\n2\n3\n5\n7\n11\n");
    assert!(stdout(&["width", "1e9"]).starts_with("width(1000000000) = 0.0535"));
}
