use std::path::Path;
use std::process::{Command, Output};

use focklaser_cli::table::{Cell, Envelope};

fn focklaser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focklaser")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn floats(env: &Envelope, column: &str) -> Vec<f64> {
    env.column(column).unwrap().iter().map(|c| c.as_f64().unwrap()).collect()
}

fn summary(env: &Envelope, key: &str) -> f64 {
    env.summary[key].as_f64().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(focklaser(&["spectrum", "--g", "2", "--n-max", "5"]).status.code(), Some(0));
    // Missing and malformed flags are usage errors.
    assert_eq!(focklaser(&["spectrum"]).status.code(), Some(2));
    assert_eq!(focklaser(&["spectrum", "--g", "two"]).status.code(), Some(2));
    assert_eq!(focklaser(&["warp-drive"]).status.code(), Some(2));
    // A value the library rejects.
    assert_eq!(focklaser(&["spectrum", "--g", "-1"]).status.code(), Some(2));
    // Valid parameters the computation cannot honour.
    let out = focklaser(&["steady-state", "--g", "0", "--r", "1", "--n-max", "20"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stderr.is_empty());
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let args = ["sweep", "--g", "2,10", "--r-log", "1e-4..1e-2:7", "--jobs", "3"];
    let a = focklaser(&args);
    let b = focklaser(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let serial = focklaser(&["sweep", "--g", "2,10", "--r-log", "1e-4..1e-2:7", "--jobs", "1"]);
    // Only the echoed job count differs.
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("# jobs=")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&a)), strip(stdout(&serial)));
}

#[test]
fn csv_round_trip() {
    let text = stdout(&focklaser(&["gain-loss", "--g", "3", "--n-max", "40"]));
    let env = Envelope::from_csv(&text).unwrap();
    assert_eq!(env.to_csv().unwrap(), text);
    assert_eq!(env.columns, ["n", "gain_coefficient", "gain", "loss", "f", "g_ratio"]);
    assert_eq!(env.rows.len(), 40);
    assert_eq!(env.config["g"], "3.0000000000000000e0");
    assert!(text.starts_with("# focklaser v"));
}

#[test]
fn json_round_trip() {
    let text = stdout(&focklaser(&["spectrum", "--g", "1.5", "--lambda", "0.1", "--n-max", "12", "--format", "json"]));
    let env = Envelope::from_json(&text).unwrap();
    assert!(env.duration_s.is_some());
    assert_eq!(env.to_json().unwrap(), text);
    let csv = stdout(&focklaser(&["spectrum", "--g", "1.5", "--lambda", "0.1", "--n-max", "12"]));
    let from_csv = Envelope::from_csv(&csv).unwrap();
    // Same content whichever format carried it.
    assert_eq!(from_csv.rows, env.rows);
    assert_eq!(from_csv.summary, env.summary);
    assert_eq!(from_csv.config, env.config);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"g": 10, "r": 0.01, "epsilon": 1e-5, "gamma": 1e-3, "kappa": 1e-8, "format": "json"}"#).unwrap();
    let out_path = dir.path().join("out.csv");
    let cfg_arg = cfg.to_str().unwrap();
    let out_arg = out_path.to_str().unwrap();
    let out = focklaser(&["steady-state", "--config", cfg_arg, "--format", "csv", "--out", out_arg]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let env = Envelope::from_csv(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(env.config["g"], "1.0000000000000000e1");
    assert!((summary(&env, "mean") - 95.439).abs() < 1e-3);

    std::fs::write(&cfg, r#"{"g": 10, "warp": 9}"#).unwrap();
    assert_eq!(focklaser(&["steady-state", "--config", cfg_arg]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(focklaser(&["steady-state", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn steady_state_is_nearly_a_fock_state() {
    let env = Envelope::from_csv(&stdout(&focklaser(&["steady-state", "--g", "10", "--r", "1e-2"]))).unwrap();
    let mean = summary(&env, "mean");
    assert!((90.0..=110.0).contains(&mean) && summary(&env, "std_dev") <= 2.0, "{mean}");
    let p = floats(&env, "probability");
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let direct = Envelope::from_csv(&stdout(&focklaser(&["steady-state", "--g", "10", "--r", "1e-2", "--method", "direct"]))).unwrap();
    assert!(summary(&direct, "mean") > 90.0);
}

#[test]
fn liouvillian_steady_state_reports_diagnostics() {
    let args = ["steady-state", "--method", "liouvillian", "--g", "0.3", "--n-fock", "10", "--epsilon", "1e-2", "--gamma", "5e-2", "--kappa", "5e-2", "--r", "3e-3"];
    let env = Envelope::from_csv(&stdout(&focklaser(&args))).unwrap();
    assert_eq!(env.columns, ["n", "probability", "p_minus", "p_plus"]);
    assert!(summary(&env, "residual") < 1e-8);
    assert!((summary(&env, "trace") - 1.0).abs() < 1e-12);
    assert_eq!(env.summary["degenerate"], Cell::Text("false".into()));
    // P(n) is the branch sum renormalized over the labelled levels.
    let labelled: f64 = env.rows.iter().map(|row| row[2].as_f64().unwrap() + row[3].as_f64().unwrap()).sum();
    assert!(labelled <= 1.0 + 1e-12 && labelled > 0.999);
    for row in &env.rows {
        let [p, m, pl] = [1, 2, 3].map(|i| row[i].as_f64().unwrap());
        assert!((p * labelled - (m + pl)).abs() < 1e-12);
    }
    assert_eq!(focklaser(&["sweep", "--g", "1", "--r", "1e-3", "--method", "liouvillian"]).status.code(), Some(2));
}

#[test]
fn sweep_shows_the_threshold() {
    let env = Envelope::from_csv(&stdout(&focklaser(&["sweep", "--g", "0", "--r-log", "5e-7..5e-3:5"]))).unwrap();
    let r = floats(&env, "r");
    let mean = floats(&env, "mean");
    assert_eq!(r.len(), 5);
    assert!((r[0] - 5e-7).abs() < 1e-22 && (r[4] - 5e-3).abs() < 1e-18);
    assert!(mean.windows(2).all(|w| w[1] > w[0]));
    assert!((summary(&env, "threshold_pump") - 5e-5).abs() < 1e-18);
    // Below threshold the field is thermal, far above it holds many photons.
    assert!(mean[0] < 1.0 && mean[4] > 1e4, "{mean:?}");
    assert_eq!(focklaser(&["sweep", "--g", "0", "--r", "2e-3,1e-3"]).status.code(), Some(2));
}

#[test]
fn other_subcommands_produce_tables() {
    let blockade = Envelope::from_csv(&stdout(&focklaser(&["blockade", "--g", "10", "--t", "1e4", "--n-max", "120"]))).unwrap();
    let p = floats(&blockade, "probability");
    assert!(p.iter().all(|q| (0.0..=1.0).contains(q)));
    assert!(p[110] < p[80] / 10.0);

    let tr = Envelope::from_csv(&stdout(&focklaser(&[
        "transient", "--g", "2", "--epsilon", "5e-3", "--gamma", "5e-2", "--kappa", "1e-2", "--r", "1", "--t", "100", "--samples", "4", "--n-max", "80",
    ])))
    .unwrap();
    assert_eq!(floats(&tr, "t"), [0.0, 25.0, 50.0, 75.0, 100.0]);
    assert_eq!(floats(&tr, "mean")[0], 0.0);

    let map = stdout(&focklaser(&["regime-map", "--g", "10", "--epsilon", "3e-4", "--gamma", "1e-3,1e-1", "--r", "1e-5,1e-2"]));
    let env = Envelope::from_csv(&map).unwrap();
    assert_eq!(env.rows.len(), 4);
    assert!(env.column("regime").unwrap().iter().all(|c| matches!(c, Cell::Text(_))));
}

#[test]
fn output_to_unwritable_path_fails() {
    let out = focklaser(&["spectrum", "--g", "1", "--out", Path::new("/nonexistent/dir/x.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
