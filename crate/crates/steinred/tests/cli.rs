use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn steinred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinred"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_fig1_is_optimal() {
    let fig1 = data("fig1.stp");
    let o = steinred(&["solve", "--in", path(&fig1)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("UB 10\n"), "{out}");
    assert!(out.contains("optimal true\n"), "{out}");
}

#[test]
fn solution_files_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let wheel = data("wheel.stp");
    let sol = dir.path().join("wheel.sol");
    let o = steinred(&["solve", "--in", path(&wheel), "--sol", path(&sol)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = steinred(&["check", "--in", path(&wheel), "--sol", path(&sol)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Value 8\n"));

    let text = fs::read_to_string(&sol).unwrap();
    let without_edge: String = text
        .lines()
        .filter(|l| *l != "E 1 3")
        .map(|l| format!("{l}\n"))
        .collect();
    assert_ne!(without_edge, text);
    fs::write(&sol, without_edge).unwrap();
    let o = steinred(&["check", "--in", path(&wheel), "--sol", path(&sol)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a tree"), "{}", stderr(&o));

    fs::write(&sol, text.replace("Value 8", "Value 7")).unwrap();
    let o = steinred(&["check", "--in", path(&wheel), "--sol", path(&sol)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("declared value 7"), "{}", stderr(&o));
}

#[test]
fn second_reduction_finds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig1.stp", "wheel.stp", "geo500.stp"] {
        let once = dir.path().join("once.stp");
        let twice = dir.path().join("twice.stp");
        let log = dir.path().join("log.txt");
        let o = steinred(&[
            "reduce",
            "--in",
            path(&data(name)),
            "--out",
            path(&once),
            "--log",
            path(&log),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(fs::read_to_string(&log)
            .unwrap()
            .starts_with("fingerprint "));
        let o = steinred(&[
            "reduce",
            "--in",
            path(&once),
            "--out",
            path(&twice),
            "--log",
            path(&log),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("events 0\n"), "{name}: {}", stdout(&o));
        assert_eq!(
            fs::read_to_string(&once).unwrap(),
            fs::read_to_string(&twice).unwrap()
        );
    }
}

#[test]
fn bounds_bracket_the_optimum() {
    let o = steinred(&["bounds", "--in", path(&data("fig1.stp"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let value = |key: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert!(value("LB ") <= 10.0 + 1e-9);
    assert!(value("UB ") >= 10.0);
}

#[test]
fn exit_codes() {
    assert_eq!(steinred(&[]).status.code(), Some(1));
    assert_eq!(steinred(&["solve"]).status.code(), Some(1));
    assert_eq!(steinred(&["--help"]).status.code(), Some(0));
    let o = steinred(&["solve", "--in", "/nonexistent/x.stp"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.stp");
    fs::write(&bad, "33D32945 STP File, STP Format Version 1.0\nSECTION Graph\nNodes 2\nEdges 1\nE 1 2 0\nEND\nEOF\n").unwrap();
    let o = steinred(&["solve", "--in", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("non-positive edge cost at line 5"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn bench_writes_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig1.stp", "fig2.stp", "wheel.stp"] {
        fs::copy(data(name), dir.path().join(name)).unwrap();
    }
    let csv = dir.path().join("out.csv");
    let o = steinred(&[
        "bench",
        "--dir",
        path(dir.path()),
        "--csv",
        path(&csv),
        "--jobs",
        "2",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "name,vertices,edges,lower_bound,upper_bound,optimal,time,nodes,reductions"
    );
    assert_eq!(rows.len(), 4);
    assert!(
        rows[1].starts_with("fig1.stp,7.000000,9.000000,10.000000,10.000000,true,"),
        "{}",
        rows[1]
    );
    assert!(
        rows[2].starts_with("fig2.stp,4.000000,3.000000,"),
        "{}",
        rows[2]
    );
    assert!(
        rows[3].starts_with("wheel.stp,7.000000,9.000000,8.000000,8.000000,true,"),
        "{}",
        rows[3]
    );
}
