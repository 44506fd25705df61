use std::path::Path;
use std::process::{Command, Output};

fn hopf3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf3")).args(args).env_remove("HOPF3_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rank_of_rossler() {
    let o = hopf3(&["rank", "--system", "rossler", "--set", "c=-1", "--n", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("rank = 3"), "{out}");
    assert!(out.contains("pivots: c200, c110, c020"), "{out}");
}

#[test]
fn jerk_condition_is_a_center() {
    let o = hopf3(&["verify-center", "--system", "jerk", "--condition", "g"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("L1..L6 = 0"));
}

#[test]
fn compute_prints_one_line_per_constant() {
    let o = hopf3(&["compute", "--system", "rossler", "--set", "c=-1", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["L1 = 0", "L2 = 0", "L3 = 0"]);
}

#[test]
fn errors_carry_a_code_and_exit_status() {
    let cases: [(&[&str], &str); 5] = [
        (&["compute", "--system", "rossler", "--set", "c=0.5"], "E_DECIMAL_INPUT"),
        (&["rank", "--system", "nope"], "E_UNKNOWN_SYSTEM"),
        (&["cyclicity", "--preset", "nope"], "E_UNKNOWN_PRESET"),
        (&["verify-center", "--system", "jerk", "--condition", "zz"], "E_UNKNOWN_CONDITION"),
        (&["frob"], "E_USAGE"),
    ];
    for (args, code) in cases {
        let o = hopf3(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with(&format!("error[{code}]: ")), "{args:?}: {err}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_thread_count_is_rejected() {
    for bad in ["0", "x", "-2"] {
        let o = Command::new(env!("CARGO_BIN_EXE_hopf3"))
            .args(["rank", "--system", "rossler", "--set", "c=-1"])
            .env("HOPF3_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).starts_with("error[E_THREADS]"));
    }
}

#[test]
fn help_exits_cleanly() {
    let o = hopf3(&["--help"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for sub in ["compute", "rank", "higher-order", "cyclicity", "verify-center", "oracle"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
}

/// Two runs produce the same document once the header is dropped.
#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let docs: Vec<serde_json::Value> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let o = hopf3(&["cyclicity", "--preset", "lorenz", "--output", path.to_str().unwrap()]);
            assert!(o.status.success(), "{}", stderr(&o));
            let mut doc = read_json(&path);
            let header = doc.as_object_mut().unwrap().remove("header").unwrap();
            assert_eq!(header["tool"], "hopf3");
            doc
        })
        .collect();
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0]["command"], "cyclicity");
    assert_eq!(docs[0]["result"]["lower_bound"], 4);
}

#[test]
fn batch_runs_every_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.txt");
    std::fs::write(
        &path,
        "# two jobs and one failure\nrank --system rossler --set c=-1 --n 6\n\n\
         verify-center --system jerk --condition a\ncompute --system nope\n",
    )
    .unwrap();
    let o = hopf3(&["--batch", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[line 2] rank = 3"), "{out}");
    assert!(out.contains("[line 4] L1..L6 = 0"), "{out}");
    assert!(out.contains("[line 5] error[E_UNKNOWN_SYSTEM]"), "{out}");

    std::fs::write(&path, "rank --bogus\n").unwrap();
    let o = hopf3(&["--batch", path.to_str().unwrap()]);
    assert!(stderr(&o).starts_with("error[E_BATCH]"));
}

#[test]
fn oracle_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("oracle.csv");
    let o = hopf3(&[
        "oracle", "--system", "moonrand", "--set", "mu=1,b=2,c=1,a=1", "--csv", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: consistent"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho0,delta_rho,settle_turns,tol"));
    assert_eq!(lines.count(), 3);
}
