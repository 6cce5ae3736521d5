//! End-to-end tests of the `sharpeq` binary. JSON output is compared against
//! `tests/golden/*.json` with numbers matched to 1e-9; set `SHARPEQ_BLESS=1` to
//! rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sharpeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpeq")).args(args).env_remove("SHARPEQ_SEED").output().expect("spawn")
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

fn close(a: &Value, b: &Value, at: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= 1e-9 * x.abs().max(1.0) {
                Ok(())
            } else {
                Err(format!("{at}: {x} vs {y}"))
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Err(format!("{at}: length {} vs {}", x.len(), y.len()));
            }
            x.iter().zip(y).enumerate().try_for_each(|(i, (p, q))| close(p, q, &format!("{at}[{i}]")))
        }
        (Value::Object(x), Value::Object(y)) => {
            if x.keys().ne(y.keys()) {
                return Err(format!("{at}: keys {:?} vs {:?}", x.keys().collect::<Vec<_>>(), y.keys().collect::<Vec<_>>()));
            }
            x.iter().try_for_each(|(k, v)| close(v, &y[k], &format!("{at}.{k}")))
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{at}: {a} vs {b}")),
    }
}

fn assert_golden(name: &str, actual: &Value) {
    let path = golden_path(name);
    if std::env::var_os("SHARPEQ_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(actual).unwrap() + "\n").unwrap();
        return;
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    let want: Value = serde_json::from_str(&text).unwrap();
    if let Err(e) = close(actual, &want, name) {
        panic!("golden mismatch: {e}");
    }
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success() || out.status.code() == Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn first_result(v: &Value) -> &Value {
    &v["results"][0]
}

#[test]
fn list_table_and_json() {
    let out = sharpeq(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.lines().next().unwrap().contains("kind"));
    assert!(table.lines().any(|l| l.starts_with("ex4_1") && l.contains("MP")));
    for kind in ["VIP", "SPP", "NEP"] {
        assert!(table.contains(kind));
    }

    let dir = tempfile::tempdir().unwrap();
    let corpus_json = dir.path().join("corpus.json");
    let out = sharpeq(&["list", "--json", "--out", corpus_json.to_str().unwrap()]);
    let v = json_stdout(&out);
    assert_golden("list", &v);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&corpus_json).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn check_ex4_5_weak_sharp() {
    let out = sharpeq(&["check", "--problem", "ex4_5", "--weak-sharp", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(first_result(&v)["verdict"], true);
    assert_golden("check_ex4_5_weak_sharp", &v);
}

#[test]
fn check_ex4_2_weak_sharp_regression() {
    let out = sharpeq(&["check", "--problem", "ex4_2", "--weak-sharp", "--alpha", "0.01", "--mode", "regression"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(first_result(&v)["verdict"], false);
    assert_eq!(first_result(&v)["expected"], false);
    assert_golden("check_ex4_2_weak_sharp", &v);
}

#[test]
fn check_ex4_2_augmented() {
    let out = sharpeq(&["check", "--problem", "ex4_2", "--augmented", "--lambda", "0.25", "--seq", "builtin"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(first_result(&v)["verdict"], true);
    assert_eq!(first_result(&v)["in_scope"], true);
    assert_golden("check_ex4_2_augmented", &v);
}

#[test]
fn check_explicit_sequence_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.json");
    let pts: Vec<[f64; 2]> = (1..=200).map(|k| [1.0 / k as f64, 1.0 - 1.0 / k as f64]).collect();
    std::fs::write(&seq, serde_json::to_string(&pts).unwrap()).unwrap();
    let report = dir.path().join("report.json");
    let out = sharpeq(&[
        "check",
        "--problem",
        "ex4_3",
        "--augmented",
        "--lambda",
        "0.5",
        "--seq",
        seq.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(first_result(&v)["verdict"], true);
    assert_golden("check_ex4_3_explicit_sequence", &v);
}

#[test]
fn regression_mismatch_exits_one() {
    let args = ["check", "--problem", "ex4_5", "--weak-sharp", "--alpha", "2.0"];
    let explore = sharpeq(&args);
    assert_eq!(explore.status.code(), Some(0));
    let mut reg = args.to_vec();
    reg.extend(["--mode", "regression"]);
    let out = sharpeq(&reg);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["mismatches"], serde_json::json!(["ex4_5:weak_sharp"]));
}

#[test]
fn check_all_is_independent_of_jobs() {
    let one = sharpeq(&["check", "--problem", "all", "--expected", "--mode", "regression", "--jobs", "1"]);
    let four = sharpeq(&["check", "--problem", "all", "--expected", "--mode", "regression", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stdout));
    assert_eq!(four.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let v = json_stdout(&four);
    let n: usize = sharpeq::corpus::entries().iter().map(|e| e.expected.len()).sum();
    assert_eq!(v["results"].as_array().unwrap().len(), n);
    assert_golden("check_all_expected", &v);
}

#[test]
fn run_ex4_5_polyak_identifies() {
    let out = sharpeq(&["run", "--problem", "ex4_5", "--solver", "subgrad", "--step", "polyak:0", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert!(v["k0"].is_u64());
    assert_eq!(v["theorem"]["status"], "checked");
    assert_eq!(v["theorem"]["consistency"]["status"], "agree");
    assert_golden("run_ex4_5_polyak", &v);
}

#[test]
fn run_ex4_2_extragradient_converges() {
    let dir = tempfile::tempdir().unwrap();
    let record = dir.path().join("record.json");
    let out = sharpeq(&[
        "run",
        "--problem",
        "ex4_2",
        "--solver",
        "extragradient",
        "--t",
        "0.2",
        "--n",
        "1000",
        "--record",
        record.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&record).unwrap()).unwrap();
    let dist = rec["dist_solution"].as_array().unwrap();
    assert_eq!(dist.len(), 1001);
    for d in &dist[dist.len() - 50..] {
        assert!(d.as_f64().unwrap() < 1e-3);
    }
    assert_golden("run_ex4_2_extragradient", &v);
}

#[test]
fn run_ex4_1_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let out = sharpeq(&[
        "run",
        "--problem",
        "ex4_1",
        "--solver",
        "subgrad",
        "--x0",
        "0.9,0.9",
        "--step",
        "dim:1",
        "--n",
        "500",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,x0,x1,rho,dist,psi_min");
    assert_eq!(lines.len(), 502);
    for (k, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6, "row {k}");
        assert_eq!(cells[0].parse::<usize>().unwrap(), k);
        for c in &cells[1..5] {
            c.parse::<f64>().unwrap();
        }
    }
    assert_golden("run_ex4_1_dim", &json_stdout(&out));
}

#[test]
fn run_mp_plus_prox() {
    let out = sharpeq(&["run", "--problem", "mp_plus", "--solver", "prox", "--x0", "1,1", "--c", "1", "--n", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert!(v["k0"].as_u64().unwrap() <= 5);
    assert_golden("run_mp_plus_prox", &v);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"problem": "ex4_5", "checks": ["weak_sharp"], "alpha": 2.0, "mode": "regression"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_cfg = sharpeq(&["--config", c, "check"]);
    assert_eq!(from_cfg.status.code(), Some(1));
    let overridden = sharpeq(&["check", "--config", c, "--alpha", "0.5"]);
    assert_eq!(overridden.status.code(), Some(0));
    let flags = sharpeq(&["check", "--problem", "ex4_5", "--weak-sharp", "--alpha", "0.5", "--mode", "regression"]);
    assert_eq!(overridden.stdout, flags.stdout);

    let run_cfg = dir.path().join("run.json");
    std::fs::write(&run_cfg, r#"{"problem": "mp_plus", "solver": "prox", "x0": [1.0, 1.0], "n": 20}"#).unwrap();
    let out = sharpeq(&["run", "--config", run_cfg.to_str().unwrap()]);
    assert_golden("run_mp_plus_prox", &json_stdout(&out));
}

#[test]
fn seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_sharpeq");
    let args = ["run", "--problem", "mp_plus", "--solver", "prox", "--n", "5"];
    let out = Command::new(bin).args(args).env("SHARPEQ_SEED", "7").output().unwrap();
    assert_eq!(json_stdout(&out)["seed"], 7);
    let out = Command::new(bin).args(args).args(["--seed", "3"]).env("SHARPEQ_SEED", "7").output().unwrap();
    assert_eq!(json_stdout(&out)["seed"], 3);
    assert_eq!(json_stdout(&sharpeq(&args))["seed"], 0);
    let out = Command::new(bin).args(args).env("SHARPEQ_SEED", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_cfg = dir.path().join("bad.json");
    std::fs::write(&bad_cfg, r#"{"problemo": "ex4_5"}"#).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--problem", "nonexistent", "--weak-sharp"],
        vec!["check", "--problem", "ex4_5"],
        vec!["check", "--weak-sharp"],
        vec!["check", "--problem", "ex4_5", "--weak-sharp", "--alpha", "-1"],
        vec!["check", "--problem", "ex4_5", "--weak-sharp", "--seq", "/nonexistent/seq.json"],
        vec!["run", "--problem", "ex4_5", "--step", "bogus:1"],
        vec!["run", "--problem", "ex4_5", "--solver", "newton"],
        vec!["run", "--problem", "ex4_5", "--x0", "1,nope"],
        vec!["run", "--problem", "ex4_5", "--x0", "5,5"],
        vec!["run", "--problem", "ex4_5", "--x0", "0.5"],
        vec!["--config", bad_cfg.to_str().unwrap(), "list"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = sharpeq(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(sharpeq(&["--help"]).status.code(), Some(0));
}
