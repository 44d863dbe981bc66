use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hil")).args(args).env_remove("HIL_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tune_noloc_example() {
    let o = hil(&["tune", "--n", "3925", "--beta", "0.5", "--lambda-min", "0.00390625", "--mode", "noloc"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("eta = 0.019987"), "{text}");
    assert!(text.contains("epsilon = 0.141374"), "{text}");
    assert!(text.contains("clamped = false"));
}

#[test]
fn tune_full_and_degenerate_lambda() {
    let o = hil(&["tune", "--n", "10000", "--lambda-min", "0.001", "--mode", "full"]);
    assert!(stdout(&o).contains("regret_bound_total = 185.8"), "{}", stdout(&o));
    let o = hil(&["tune", "--n", "100", "--lambda-min", "1", "--mode", "full"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hil(&["tune", "--n", "100", "--beta", "0", "--lambda-min", "0.01", "--mode", "noloc"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offloads every sample"));
}

#[test]
fn run_no_offload_on_three_samples() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "t.csv", "p,y\n0.2,1\n0.6,0\n0.9,0\n");
    let out = dir.path().join("r.csv");
    let o = hil(&["run", "--trace", s(&trace), "--policy", "none", "--beta", "0.5", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# lambda_min = 0.250000 [default 1/(n+1)]"), "{text}");
    let records = std::fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = records.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "none");
    assert_eq!(row[5], "0.333333");
}

#[test]
fn lambda_provenance_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(dir.path(), "t.csv", "p,y\n0.2,1\n0.6,0\n0.9,0\n");
    let header = |extra: &[&str]| {
        let mut args = vec!["run", "--trace", s(&trace), "--policy", "hilf", "--beta", "0.5"];
        args.extend_from_slice(extra);
        stdout(&hil(&args)).lines().nth(1).unwrap().to_string()
    };
    assert_eq!(header(&["--lambda-min", "exact"]), "# lambda_min = 0.300000 [exact gap from trace]");
    assert_eq!(header(&["--quant-bits", "4"]), "# lambda_min = 0.062500 [quantized to 4 bits]");
    assert_eq!(header(&["--lambda-min", "0.1", "--quant-bits", "4"]), "# lambda_min = 0.100000 [explicit]");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.csv", "p,y\n0.2,1\n0.6,0\n");
    let bad = write(dir.path(), "bad.csv", "p,y\n0.5,0\n1.2,0\n");
    let empty = write(dir.path(), "empty.csv", "");

    assert_eq!(hil(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(hil(&["run", "--trace", s(&good), "--policy", "maybe", "--beta", "0.5"]).status.code(), Some(2));
    assert_eq!(hil(&["run", "--trace", s(&good), "--policy", "none", "--beta", "1.0"]).status.code(), Some(2));
    assert_eq!(
        hil(&["run", "--trace", s(&good), "--policy", "hilf", "--beta", "0.5", "--lambda-min", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(hil(&["sweep", "--trace", s(&good), "--betas", "0:0:1"]).status.code(), Some(2));

    let missing = hil(&["run", "--trace", "/nonexistent/trace.csv", "--policy", "none", "--beta", "0.5"]);
    assert_eq!(missing.status.code(), Some(3));
    let malformed = hil(&["run", "--trace", s(&bad), "--policy", "none", "--beta", "0.5"]);
    assert_eq!(malformed.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 3"));
    assert_eq!(hil(&["run", "--trace", s(&empty), "--policy", "none", "--beta", "0.5"]).status.code(), Some(3));
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    assert!(hil(&["gen", "--n", "400", "--seed", "1", "--out", s(&trace)]).status.success());
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hil"));
        cmd.args(["run", "--policy", "hiln", "--beta", "0.3", "--shuffles", "2", "--reps", "2", "--trace", s(&trace)]);
        match seed {
            Some(v) => cmd.env("HIL_SEED", v),
            None => cmd.env_remove("HIL_SEED"),
        };
        stdout(&cmd.output().unwrap())
    };
    let a = run(Some("42"));
    assert!(a.contains("seed = 42"));
    assert_eq!(a, run(Some("42")));
    assert_ne!(a, run(Some("43")));
    assert!(run(None).contains("seed = 0"));
}

#[test]
fn gen_from_spec_file_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.toml",
        "n = 300\nseed = 5\nquant_bits = 6\n[distribution]\nkind = \"bimodal\"\nmix = 0.4\nlo = 0.3\nhi = 0.9\n",
    );
    let trace = dir.path().join("t.csv");
    assert!(hil(&["gen", "--spec", s(&spec), "--out", s(&trace)]).status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 301);
    assert!(text.lines().skip(1).all(|l| {
        let p: f64 = l.split(',').next().unwrap().parse().unwrap();
        (p * 64.0).fract() == 0.0
    }));
    let to_stdout = hil(&["gen", "--spec", s(&spec)]);
    assert_eq!(stdout(&to_stdout), text);

    let bad_spec = write(dir.path(), "bad.toml", "n = 10\nunknown = 1\n");
    assert_eq!(hil(&["gen", "--spec", s(&bad_spec)]).status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_library() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    assert!(hil(&["gen", "--n", "120", "--quant-bits", "8", "--seed", "3", "--out", s(&trace)]).status.success());
    let dump = dir.path().join("q.csv");
    let o = hil(&[
        "oracle", "--trace", s(&trace), "--beta", "0.4", "--quant-bits", "8", "--cells", "4096", "--out", s(&dump),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("equal = true"), "{text}");
    let worst: f64 = text.split("max |library - riemann| = ").nth(1).unwrap().trim().parse().unwrap();
    assert!(worst <= 1e-9, "{worst}");
    assert_eq!(std::fs::read_to_string(&dump).unwrap().lines().count(), 121);
}

#[test]
fn sweep_emits_one_record_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    assert!(hil(&["gen", "--n", "200", "--quant-bits", "7", "--out", s(&trace)]).status.success());
    let out = dir.path().join("sweep.csv");
    let o = hil(&[
        "sweep", "--trace", s(&trace), "--betas", "0:0.25:0.75", "--policies", "hilf,hiln,full,none", "--quant-bits",
        "7", "--shuffles", "2", "--reps", "2", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = records.lines().collect();
    assert_eq!(lines[0], "policy,beta,eta,epsilon,lambda_min,avg_cost,avg_regret,stderr_cost,offload_rate,error_rate,bound_avg");
    assert_eq!(lines.len(), 1 + 4 * 4);
    // Offloading is free at beta = 0.
    assert!(lines.iter().any(|l| l.starts_with("full,0.000000,") && l.split(',').nth(5) == Some("0.000000")));
}

#[test]
fn curve_file_has_one_row_per_round() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    assert!(hil(&["gen", "--n", "50", "--out", s(&trace)]).status.success());
    let curve = dir.path().join("curve.csv");
    let o = hil(&["run", "--trace", s(&trace), "--policy", "hilf", "--beta", "0.5", "--curve", s(&curve), "--eta-schedule"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&curve).unwrap().lines().count(), 51);
    assert!(!stdout(&o).contains("# regret bound"));
}
