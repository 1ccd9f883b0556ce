use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn radpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radpair")).args(args).output().expect("binary runs")
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const PAIR: &str = "model = \"fictitious\"\nomega1 = 1.0\nomega2 = 0.0\nt_max = 12.566370614359172\ndt = 0.0031415926535897933\nstride = 5\n";

#[test]
fn simulate_reaches_maximal_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "a.toml", &format!("{PAIR}engine = \"haberkorn\"\n"));
    let out = dir.path().join("out");
    let o = radpair(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,trace,p_S,C\n"));
    let t = column(&csv, 0);
    let c = column(&csv, 3);
    // recording interval π/200, so Ωt = π/2 is row 100
    assert!((t[100] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((c[100] - 1.0).abs() < 1e-6);
    assert!(out.join("trajectory.gp").exists());
}

#[test]
fn dephasing_shrinks_the_coherence_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "b.toml", &format!("{PAIR}engine = \"dephasing\"\nk_d = 0.2\n"));
    let out = dir.path().join("out");
    let o = radpair(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let c = column(&fs::read_to_string(out.join("trajectory.csv")).unwrap(), 3);
    // C has period π in Ωt, i.e. 200 rows
    let peaks: Vec<f64> = c.chunks(200).take(4).map(|w| w.iter().cloned().fold(0.0, f64::max)).collect();
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
}

#[test]
fn static_pair_stays_singlet() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", "model = \"fictitious\"\nomega1 = 0.0\nomega2 = 0.0\nk_d = 1.0\n");
    let out = dir.path().join("out");
    assert!(radpair(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(column(&csv, 2).iter().all(|p| (p - 1.0).abs() < 1e-12));
    assert!(column(&csv, 3).iter().all(|c| c.abs() < 1e-12));
}

fn sweep_delta(dir: &Path, body: &str) -> f64 {
    let cfg = config(dir, "s.toml", body);
    let out = dir.join("sweep");
    let o = radpair(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--nphi", "32"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("delta_Y_S")).unwrap();
    line.split('=').nth(1).unwrap().trim().parse().unwrap()
}

#[test]
fn sweep_figure_of_merit() {
    let dir = tempfile::tempdir().unwrap();
    let anisotropic = sweep_delta(dir.path(), "hyperfine = [[10.0, 0.0, 0.0]]\nomega = 1.0\n");
    assert!(anisotropic > 1e-3);
    let csv = fs::read_to_string(dir.path().join("sweep/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 33);
    assert_eq!(sweep_delta(dir.path(), "hyperfine = [[10.0, 0.0, 0.0]]\nomega = 0.0\n"), 0.0);
    assert!(sweep_delta(dir.path(), "hyperfine = [[3.0, 3.0, 3.0]]\nexchange = 1.0\n") <= 1e-8);
}

#[test]
fn ensemble_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = radpair(&[
            "ensemble", "--samples", "3", "--kd", "0,5", "--nphi", "16", "--seed", "9", "--threads", threads,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(fs::read(out.join("ensemble.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("seed_index,K_d,A_xx,A_yy,A_zz,J,phi_star,delta_Y_S,C_bar,Y_S,Y_T\n"));
}

#[test]
fn analyze_identical_observables() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("seed_index,K_d,A_xx,A_yy,A_zz,J,phi_star,delta_Y_S,C_bar,Y_S,Y_T\n");
    for k_d in [0.0, 1.0, 5.0] {
        for i in 0..50 {
            let v = ((i * 17) % 50) as f64 / 50.0 + 0.01 * k_d;
            let j = -10.0 + 20.0 * i as f64 / 49.0;
            csv.push_str(&format!("{i},{k_d},1,2,3,{j},0,{v},{v},0.6,0.4\n"));
        }
    }
    let input = dir.path().join("ens.csv");
    fs::write(&input, csv).unwrap();
    let out = dir.path().join("stats");
    let o = radpair(&["analyze", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    let per = stats["per_k_d"].as_array().unwrap();
    assert_eq!(per.len(), 3);
    for s in per {
        assert!((s["pearson"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        let counts: u64 = s["y_s"]["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
        assert_eq!(counts, 50);
    }
    for f in ["report.txt", "histograms.csv", "exchange.csv", "analyze.gp"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(
        &input,
        "seed_index,K_d,A_xx,A_yy,A_zz,J,phi_star,delta_Y_S,C_bar,Y_S,Y_T\n0,0,1,2,3,4,5,6,7,8,9\n1,0,1,2,3\n",
    )
    .unwrap();
    let o = radpair(&["analyze", "--input", input.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn exit_codes() {
    assert_eq!(radpair(&["oracle"]).status.code(), Some(0));
    assert_eq!(radpair(&["teleport"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "x.toml", "omgea = 1.0\n");
    let o = radpair(&["simulate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let o = radpair(&["ensemble", "--samples", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
