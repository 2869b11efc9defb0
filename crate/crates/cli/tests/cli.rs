use std::path::Path;
use std::process::{Command, Output};

fn ueplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ueplab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_at_two() {
    let o = ueplab(&["bound", "--p", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "p,q,bound,status\n2.00000000000000e0,2.00000000000000e0,2.14472988584940e0,ok\n");
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["bound", "--p", "2", "--q", "3"][..],
        &["bound"],
        &["sweep", "--family", "student-t", "--n", "1..3", "--p", "2"],
        &["usum", "--family", "cauchy", "--n", "1", "--p", "2"],
        &["usum", "--family", "student-t", "--m", "plus:1", "--n", "1", "--p", "2"],
        &["usum", "--family", "student-t", "--m", "1", "--n", "0..3", "--p", "2"],
        &["frobnicate"],
    ] {
        let o = ueplab(args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{args:?}");
    }
    assert_eq!(code(&ueplab(&["--help"])), 0);
    assert_eq!(code(&ueplab(&["--version"])), 0);
}

#[test]
fn domain_errors_exit_1() {
    let o = ueplab(&["tv", "--family", "student-t", "--m", "1", "--n", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).ends_with(",error\n"));
}

#[test]
fn undefined_rows_keep_threshold() {
    let o = ueplab(&["usum", "--family", "student-t", "--m", "fixed:1", "--n", "1,4", "--p", "1.5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.ends_with(",undefined,1.60000000000000e0"), "{last}");
}

#[test]
fn sweep_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = ueplab(&[
            "sweep",
            "--family",
            "student-r",
            "--m",
            "nplus:2",
            "--m",
            "times:2",
            "--n",
            "1..12",
            "--q",
            "2.1,3,10",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("family,n,m,p,q,U,bound,gap,method,err,status,threshold\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 12);
    assert!(!text.contains('\r'));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["fig1", "--nmax", "16"];
    let one = Command::new(env!("CARGO_BIN_EXE_ueplab")).args(args).env("UEPLAB_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_ueplab")).args(args).env("UEPLAB_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn cauchy_gap_shrinks() {
    let o = ueplab(&["fig1", "--nmax", "64"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let gaps: Vec<f64> = out
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(3) == Some("2.00000000000000e0"))
        .map(|l| l.split(',').nth(7).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 64);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(gaps[63] < 0.5 * gaps[0]);
}

#[test]
fn json_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kl.json");
    let o = ueplab(&[
        "kl",
        "--family",
        "student-r",
        "--m",
        "nplus:2",
        "--n",
        "1,2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["meta"]["invocation"].is_array());
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["reverse"], "inf");
    assert_eq!(v["rows"][1]["status"], "ok");
}

#[test]
fn selftest_passes() {
    let o = ueplab(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn monte_carlo_rows_agree() {
    let o = ueplab(&["mc-verify", "--family", "student-r", "--m", "4", "--n", "2", "--samples", "100000"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn fig4_marginals() {
    let o = ueplab(&["fig4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 4 * 121 + 61 * 61);
    // standardized uniform on [-√3, √3]
    let mid = out.lines().find(|l| l.starts_with("student-r,1,") && l.contains(",0.00000000000000e0,,")).unwrap();
    let density: f64 = mid.split(',').nth(6).unwrap().parse().unwrap();
    assert!((density - 0.5 / 3f64.sqrt()).abs() < 1e-14);
}
