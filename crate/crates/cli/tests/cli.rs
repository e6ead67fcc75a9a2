use std::fs;
use std::process::{Command, Output};

fn ringladder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringladder")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gs_writes_one_csv_row() {
    let text = stdout(&ringladder(&["gs", "--rungs", "4", "--theta", "1", "--blocks", "A:2,D:3"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "thetaOverPi,E0,gap,C_rung,C_leg,C_diag,E_rung2site,dEr_dtheta,Ev_A2,Ev_D3,T_expect,degenerate"
    );
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 12);
    assert_eq!(fields[1], "-3.00000000000e0");
    for c in &fields[3..6] {
        assert!((c.parse::<f64>().unwrap() - 1.0 / 7.0).abs() < 1e-9);
    }
    assert_eq!(fields[7], "");
    assert_eq!(fields[11], "true");
}

#[test]
fn sweep_to_file_with_derivatives() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = ringladder(&[
        "sweep", "--rungs", "4", "--theta-min", "0.14", "--theta-max", "0.16", "--theta-step", "0.005", "--pairs",
        "rung", "--out", path.to_str().unwrap(),
    ]);
    assert!(stdout(&out).is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][7], "");
    assert_eq!(rows[4][7], "");
    assert!(rows[1..4].iter().all(|r| !r[7].is_empty() && r[9] == "false"));
    assert!(rows.iter().all(|r| r[4].is_empty() && !r[3].is_empty()));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("zero crossings"), "{stderr}");
}

#[test]
fn sweep_is_reproducible() {
    let args = ["sweep", "--rungs", "3", "--theta-min", "0.0", "--theta-max", "0.1", "--theta-step", "0.05"];
    let a = stdout(&ringladder(&args));
    let b = stdout(&ringladder(&[&args[..], &["--workers", "1"]].concat()));
    assert_eq!(a, b);
}

#[test]
fn window_needs_opt_in() {
    let args = ["sweep", "--rungs", "3", "--theta-min", "0.9", "--theta-max", "1.0", "--theta-step", "0.05"];
    assert!(!ringladder(&args).status.success());
    let text = stdout(&ringladder(&[&args[..], &["--allow-degenerate"]].concat()));
    assert!(text.lines().last().unwrap().ends_with("true"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "# small scan\nrungs = 3\ntheta_min = 0.10\ntheta-max = 0.12\ntheta_step = 0.01\nblocks = D:2\ntheta = 0.5\n",
    )
    .unwrap();
    let text = stdout(&ringladder(&["sweep", "--config", conf.to_str().unwrap(), "--theta-max", "0.13"]));
    assert!(text.lines().next().unwrap().contains("Ev_D2"));
    assert_eq!(text.lines().count(), 5);

    fs::write(&conf, "rungs = 3\nbogus = 1\n").unwrap();
    assert!(!ringladder(&["gs", "--config", conf.to_str().unwrap()]).status.success());
}

#[test]
fn fm_oracle_table() {
    let text = stdout(&ringladder(&["fm-oracle", "--rungs", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "l,Ev,Ev_asymptotic,C_pair");
    assert_eq!(lines.len(), 4);
    let ev: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((ev - 1.251629).abs() < 1e-6);
}

#[test]
fn blocks_listing() {
    let text = stdout(&ringladder(&["blocks", "--rungs", "6", "--blocks", "A:4,D:3,C:2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "A:4  crossing rung=0 leg=4  sites (1,1) (2,1) (1,2) (2,2)");
    assert_eq!(lines[1], "D:3  crossing rung=3 leg=2  sites (1,1) (1,2) (1,3)");
    assert_eq!(lines[2], "C:2  crossing rung=2 leg=4  sites (1,1) (2,2)");
    assert!(!ringladder(&["blocks", "--rungs", "6", "--blocks", "A:3"]).status.success());
}

#[test]
fn rejects_bad_input() {
    assert!(!ringladder(&["gs", "--rungs", "2"]).status.success());
    assert!(!ringladder(&["gs", "--rungs", "4", "--bc", "twisted"]).status.success());
    assert!(!ringladder(&["gs", "--rungs", "4", "--pairs", "rung,foo"]).status.success());
    assert!(!ringladder(&["gs", "--rungs", "4", "--sector", "1"]).status.success());
}
