use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TWO_PARALLEL: &str = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 10\nh 0 const 1 0 1\n";

fn aemfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aemfp")).args(args).output().unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_two_parallel() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "two.txt", TWO_PARALLEL);
    let out = aemfp(&["solve", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("lambda 0 4\n"), "{text}");
    assert!(text.contains("opt_value 9\n"));
    assert!(text.contains("cut_capacity 9\n"));
    for method in ["parametric", "concave", "lp"] {
        let o = aemfp(&["solve", "--method", method, &f]);
        assert!(stdout(&o).contains("opt_value 9\n"), "{method}");
    }
}

#[test]
fn verify_accepts_solver_output() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "two.txt", TWO_PARALLEL);
    for extra in [&[][..], &["--integer"][..]] {
        let mut args = vec!["solve"];
        args.extend_from_slice(extra);
        args.push(&f);
        let res = put(&dir, "res.txt", &stdout(&aemfp(&args)));
        let out = aemfp(&["verify", &f, &res]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).starts_with("ok"));
    }
}

#[test]
fn verify_names_homologous_violation() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "two.txt", TWO_PARALLEL);
    let flow = put(&dir, "bad.txt", "flow 0 2\nflow 1 8\n");
    let out = aemfp(&["verify", &f, &flow]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("homologous set 0 edge 1"), "{text}");
}

#[test]
fn breakpoints_single_edge() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "one.txt", "p aemfp 2 1 1\nn 0 s\nn 1 t\na 0 0 1 3\nh 0 const 0 0\n");
    let csv = dir.path().join("out.csv");
    let out = aemfp(&["breakpoints", &f, "-o", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(csv).unwrap(), "lambda,F,slope\n0,0,1\n3,3,\n");
}

#[test]
fn oracle_values() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "two.txt", TWO_PARALLEL);
    assert_eq!(stdout(&aemfp(&["oracle", &f])), "oracle_value 9\n");
    assert_eq!(stdout(&aemfp(&["oracle", "--integer", &f])), "oracle_value 9\n");
}

#[test]
fn generate_writes_instance_and_meta() {
    let dir = TempDir::new().unwrap();
    let x = put(&dir, "x.txt", "6 2\n1 2 3\n4 5 6\n");
    let out_path = dir.path().join("g.txt");
    let o = out_path.to_str().unwrap();
    assert_eq!(aemfp(&["generate", "x3c", &x, "-o", o]).status.code(), Some(0));
    let meta = std::fs::read_to_string(format!("{o}.meta")).unwrap();
    assert!(meta.contains("expected_yes_value 14"), "{meta}");
    assert!(stdout(&aemfp(&["solve", "--integer", o])).contains("opt_value 14\n"));

    for kind in [&["approx", "--k", "2"][..], &["convex"][..]] {
        let mut args = vec!["generate"];
        args.extend_from_slice(kind);
        args.push(&x);
        let out = aemfp(&args);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).starts_with("p aemfp "));
        assert!(stderr(&out).contains("kind "));
    }
}

#[test]
fn exit_codes_and_error_lines() {
    let dir = TempDir::new().unwrap();
    let usage = aemfp(&["solve"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(stderr(&usage).lines().any(|l| l.starts_with("error usage ")));

    let bad = put(&dir, "bad.txt", "p aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 1 1.5\n");
    let out = aemfp(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error parse line 4:"), "{}", stderr(&out));

    let x = put(&dir, "x.txt", "3 1\n1 2 3\n");
    let convex = dir.path().join("c.txt");
    aemfp(&["generate", "convex", &x, "-o", convex.to_str().unwrap()]);
    let out = aemfp(&["solve", convex.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error unsupported_deviation "));

    let big = put(&dir, "big.txt", "p aemfp 2 2 2\nn 0 s\nn 1 t\na 0 0 1 2000\na 1 0 1 2000\nh 0 const 1 0\nh 1 const 1 1\n");
    let out = aemfp(&["oracle", "--integer", &big]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error budget_exceeded "));

    assert!(!Path::new("missing.txt").exists());
    assert_eq!(aemfp(&["solve", "missing.txt"]).status.code(), Some(2));
}

#[test]
fn subdivision_warning() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "s.txt", "p aemfp 2 2 2\nn 0 s\nn 1 t\na 0 0 1 3\na 1 0 1 3\nh 0 const 1 0 1\nh 1 const 1 1\n");
    let out = aemfp(&["solve", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).starts_with("warning "), "{}", stderr(&out));
}
