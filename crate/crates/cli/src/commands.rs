use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use radpair::compass::{
    angular_sweep, read_ensemble_csv, run_ensemble, write_ensemble_csv, EnsembleStats,
};
use radpair::dynamics::fmt_sig;
use radpair::{initial_state, propagate, selfcheck};

use crate::config::{Model, RunConfig};
use crate::{plot, ConfigError, OracleFailure};

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let mut w = create(dir, name)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))
}

pub fn simulate(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.spec()?;
    let h = spec.hamiltonian()?;
    let params = cfg.evolution(&h)?;
    let traj = propagate(&h, &initial_state(&spec.system), &params)?;
    prepare_out(cfg)?;
    let mut w = create(&cfg.out, "trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    write_text(&cfg.out, "trajectory.gp", &plot::trajectory())?;
    let c_max = traj.coherence.iter().cloned().fold(0.0f64, f64::max);
    println!(
        "{} points to t = {}, dt = {:.4e}; final trace {:.6e}; max C = {:.6}",
        traj.len(),
        traj.t_max(),
        params.dt,
        traj.trace.last().copied().unwrap_or(f64::NAN),
        c_max
    );
    println!("wrote {}", cfg.out.join("trajectory.csv").display());
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<()> {
    if cfg.model != Model::Compass {
        bail!(ConfigError("sweep needs model = \"compass\"".into()));
    }
    let spec = cfg.spec()?;
    let h = spec.hamiltonian()?;
    let params = cfg.evolution(&h)?;
    let result = angular_sweep(&spec, &params, &cfg.sweep())?;
    prepare_out(cfg)?;
    let mut w = create(&cfg.out, "sweep.csv")?;
    writeln!(w, "phi,Y_S,Y_T")?;
    for i in 0..result.phi.len() {
        writeln!(w, "{},{},{}", fmt_sig(result.phi[i]), fmt_sig(result.y_s[i]), fmt_sig(result.y_t[i]))?;
    }
    w.flush()?;
    write_text(&cfg.out, "sweep.gp", &plot::sweep())?;
    let summary = format!(
        "n_phi = {}\nepsilon = {}\ndelta_Y_S = {}\nphi_star = {}\nY_S range = [{}, {}]\n",
        result.phi.len(),
        fmt_sig(result.epsilon),
        fmt_sig(result.delta_y_s),
        fmt_sig(result.phi_star),
        fmt_sig(result.y_s.iter().cloned().fold(f64::INFINITY, f64::min)),
        fmt_sig(result.y_s.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
    );
    write_text(&cfg.out, "sweep_summary.txt", &summary)?;
    print!("{summary}");
    Ok(())
}

pub fn ensemble(cfg: &RunConfig) -> Result<()> {
    let ens = cfg.ensemble();
    ens.validate()?;
    let run = run_ensemble(&ens)?;
    prepare_out(cfg)?;
    let mut w = create(&cfg.out, "ensemble.csv")?;
    write_ensemble_csv(&run.records, &mut w)?;
    w.flush()?;
    write_text(&cfg.out, "ensemble.gp", &plot::ensemble(&ens.k_d_list))?;
    let total = run.records.len() + run.failures.len();
    println!(
        "{} records ({} samples x {} K_d values), {} dropped",
        run.records.len(),
        ens.n_samples,
        ens.k_d_list.len(),
        run.failures.len()
    );
    if !run.failures.is_empty() {
        log::warn!("{} of {} evaluations failed", run.failures.len(), total);
    }
    println!("wrote {}", cfg.out.join("ensemble.csv").display());
    Ok(())
}

pub fn analyze(cfg: &RunConfig) -> Result<()> {
    let input = cfg.input_path();
    let file = File::open(&input)
        .with_context(|| format!("cannot open {}", input.display()))
        .map_err(|e| ConfigError(format!("{e:#}")))?;
    let records = read_ensemble_csv(BufReader::new(file)).with_context(|| format!("in {}", input.display()))?;
    let stats = EnsembleStats::compute(&records, cfg.bins, &cfg.exchange_bins())?;
    prepare_out(cfg)?;

    let mut w = create(&cfg.out, "stats.json")?;
    serde_json::to_writer_pretty(&mut w, &stats)?;
    writeln!(w)?;
    w.flush()?;

    let report = stats.report();
    write_text(&cfg.out, "report.txt", &report)?;

    let mut w = create(&cfg.out, "histograms.csv")?;
    write!(w, "lo,hi")?;
    for s in &stats.per_k_d {
        write!(w, ",Y_S@{k},Y_T@{k}", k = s.k_d)?;
    }
    writeln!(w)?;
    for b in 0..cfg.bins {
        let edges = &stats.per_k_d[0].y_s.edges;
        write!(w, "{},{}", fmt_sig(edges[b]), fmt_sig(edges[b + 1]))?;
        for s in &stats.per_k_d {
            write!(w, ",{},{}", s.y_s.counts[b], s.y_t.counts[b])?;
        }
        writeln!(w)?;
    }
    w.flush()?;

    let mut w = create(&cfg.out, "exchange.csv")?;
    writeln!(w, "K_d,J_lo,J_hi,count,r,mean_delta_Y_S")?;
    for s in &stats.per_k_d {
        for b in &s.exchange {
            let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), fmt_sig);
            writeln!(w, "{},{},{},{},{},{}", s.k_d, b.lo, b.hi, b.count, opt(b.r), opt(b.mean_delta))?;
        }
    }
    w.flush()?;

    let k_d: Vec<f64> = stats.per_k_d.iter().map(|s| s.k_d).collect();
    write_text(&cfg.out, "analyze.gp", &plot::analyze(&k_d))?;
    print!("{report}");
    Ok(())
}

pub fn oracle() -> Result<()> {
    let checks = selfcheck::run_all()?;
    let mut failed = 0;
    for c in &checks {
        println!(
            "{:<4} {:<50} max error {:.3e} (tolerance {:.0e})",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.max_error,
            c.tolerance
        );
        if !c.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        bail!(OracleFailure(failed));
    }
    println!("all {} oracle checks passed", checks.len());
    Ok(())
}
