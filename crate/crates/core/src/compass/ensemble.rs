use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{angular_sweep, SweepConfig};
use super::yields::mean_coherence;
use crate::dynamics::{fmt_sig, propagate, Engine, EvolutionParams};
use crate::error::{Error, Result};
use crate::model::{initial_state, HamiltonianSpec, HyperfineTensor};

pub const ENSEMBLE_CSV_HEADER: &str =
    "seed_index,K_d,A_xx,A_yy,A_zz,J,phi_star,delta_Y_S,C_bar,Y_S,Y_T";

/// Monte Carlo study over random diagonal hyperfine tensors and exchange
/// couplings for a single spin-1/2 nucleus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_samples: usize,
    pub k_d_list: Vec<f64>,
    /// Each diagonal element A_jj is drawn uniformly from this range.
    pub a_range: (f64, f64),
    pub j_range: (f64, f64),
    pub omega: f64,
    pub seed: u64,
    pub sweep: SweepConfig,
    /// Observables for C̄ are recorded every `stride` propagation steps.
    pub stride: usize,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            k_d_list: vec![0.0, 1.0, 5.0, 10.0],
            a_range: (0.0, 10.0),
            j_range: (-10.0, 10.0),
            omega: 1.0,
            seed: 2021,
            sweep: SweepConfig::default(),
            stride: 5,
            threads: 0,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.k_d_list.is_empty() || self.k_d_list.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::Config("K_d list must be non-empty with non-negative entries".into()));
        }
        for (name, (lo, hi)) in [("A", self.a_range), ("J", self.j_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!("{name} range [{lo}, {hi}] is invalid")));
            }
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(Error::Config("omega must be >= 0".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        self.sweep.epsilon_steps()?;
        Ok(())
    }

    /// Parameters of sample `index`, drawn from its own RNG stream so that
    /// results do not depend on scheduling.
    pub fn sample_parameters(&self, index: usize) -> ([f64; 3], f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let mut uniform = |(lo, hi): (f64, f64)| lo + (hi - lo) * rng.random::<f64>();
        let a = [uniform(self.a_range), uniform(self.a_range), uniform(self.a_range)];
        let j = uniform(self.j_range);
        (a, j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub seed_index: usize,
    pub k_d: f64,
    pub a_xx: f64,
    pub a_yy: f64,
    pub a_zz: f64,
    pub j: f64,
    pub phi_star: f64,
    pub delta_y_s: f64,
    pub c_bar: f64,
    pub y_s: f64,
    pub y_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub seed_index: usize,
    pub k_d: f64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleRun {
    /// Ordered by sample index, then by position in the K_d list.
    pub records: Vec<EnsembleRecord>,
    pub failures: Vec<SampleFailure>,
}

impl EnsembleRun {
    pub fn records_for(&self, k_d: f64) -> Vec<EnsembleRecord> {
        self.records.iter().filter(|r| r.k_d == k_d).copied().collect()
    }
}

/// Evaluates one parameter set at one dephasing rate.
pub fn evaluate_sample(
    cfg: &EnsembleConfig,
    seed_index: usize,
    a: [f64; 3],
    j: f64,
    k_d: f64,
) -> Result<EnsembleRecord> {
    let spec = HamiltonianSpec::compass(HyperfineTensor::diagonal(a[0], a[1], a[2]), cfg.omega, 0.0, j);
    let h0 = spec.hamiltonian()?;
    let base = EvolutionParams::for_hamiltonian(&h0, k_d, Engine::Dephasing)?;
    let sweep = angular_sweep(&spec, &base, &cfg.sweep)?;

    let spec_star = spec.with_phi(sweep.phi_star)?;
    let h = spec_star.hamiltonian()?;
    let params = EvolutionParams::for_hamiltonian(&h, k_d, Engine::Dephasing)?.with_stride(cfg.stride);
    let traj = propagate(&h, &initial_state(&spec.system), &params)?;
    let c_bar = mean_coherence(&traj)?;

    Ok(EnsembleRecord {
        seed_index,
        k_d,
        a_xx: a[0],
        a_yy: a[1],
        a_zz: a[2],
        j,
        phi_star: sweep.phi_star,
        delta_y_s: sweep.delta_y_s,
        c_bar,
        y_s: sweep.y_s[sweep.phi_star_index],
        y_t: sweep.y_t[sweep.phi_star_index],
    })
}

/// Runs every sample at every K_d. The same parameter draw is reused across
/// the K_d list. Failed evaluations are dropped and reported.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleRun> {
    cfg.validate()?;
    let work = || -> Vec<Vec<std::result::Result<EnsembleRecord, SampleFailure>>> {
        (0..cfg.n_samples)
            .into_par_iter()
            .map(|idx| {
                let (a, j) = cfg.sample_parameters(idx);
                let out = cfg
                    .k_d_list
                    .iter()
                    .map(|&k_d| {
                        evaluate_sample(cfg, idx, a, j, k_d).map_err(|e| SampleFailure {
                            seed_index: idx,
                            k_d,
                            message: e.to_string(),
                        })
                    })
                    .collect();
                if (idx + 1) % 100 == 0 {
                    log::debug!("ensemble: sample {} of {} done", idx + 1, cfg.n_samples);
                }
                out
            })
            .collect()
    };
    let results = if cfg.threads == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
            .install(work)
    };

    let mut records = Vec::with_capacity(cfg.n_samples * cfg.k_d_list.len());
    let mut failures = Vec::new();
    for r in results.into_iter().flatten() {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => {
                log::warn!("sample {} at K_d = {} dropped: {}", f.seed_index, f.k_d, f.message);
                failures.push(f);
            }
        }
    }
    Ok(EnsembleRun { records, failures })
}

pub fn write_ensemble_csv<W: Write>(records: &[EnsembleRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{ENSEMBLE_CSV_HEADER}")?;
    for r in records {
        let fields = [r.k_d, r.a_xx, r.a_yy, r.a_zz, r.j, r.phi_star, r.delta_y_s, r.c_bar, r.y_s, r.y_t];
        write!(w, "{}", r.seed_index)?;
        for x in fields {
            write!(w, ",{}", fmt_sig(x))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Parses the ensemble CSV; errors name the offending 1-based line.
pub fn read_ensemble_csv<R: BufRead>(r: R) -> Result<Vec<EnsembleRecord>> {
    let mut out = Vec::new();
    let mut saw_header = false;
    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != ENSEMBLE_CSV_HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected header `{ENSEMBLE_CSV_HEADER}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 11 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 11 columns, found {}", cols.len()),
            });
        }
        let seed_index = cols[0].trim().parse::<usize>().map_err(|e| Error::Parse {
            line: lineno,
            message: format!("seed_index `{}`: {e}", cols[0]),
        })?;
        let mut v = [0.0f64; 10];
        for (k, slot) in v.iter_mut().enumerate() {
            let raw = cols[k + 1].trim();
            *slot = raw.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("column {} `{raw}`: {e}", k + 2),
            })?;
        }
        out.push(EnsembleRecord {
            seed_index,
            k_d: v[0],
            a_xx: v[1],
            a_yy: v[2],
            a_zz: v[3],
            j: v[4],
            phi_star: v[5],
            delta_y_s: v[6],
            c_bar: v[7],
            y_s: v[8],
            y_t: v[9],
        });
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, message: "empty ensemble file".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tiny(n: usize) -> EnsembleConfig {
        EnsembleConfig {
            n_samples: n,
            k_d_list: vec![0.0, 5.0],
            sweep: SweepConfig { n_phi: 16, epsilon: None },
            stride: 10,
            ..EnsembleConfig::default()
        }
    }

    #[test]
    fn degenerate_ensemble_reproduces_single_sweep() {
        let cfg = EnsembleConfig {
            n_samples: 1,
            k_d_list: vec![0.0],
            a_range: (10.0, 10.0),
            j_range: (0.0, 0.0),
            sweep: SweepConfig { n_phi: 32, epsilon: None },
            ..EnsembleConfig::default()
        };
        let rec = evaluate_sample(&cfg, 0, [10.0, 0.0, 0.0], 0.0, 0.0).unwrap();
        let spec = HamiltonianSpec::compass(HyperfineTensor::diagonal(10.0, 0.0, 0.0), 1.0, 0.0, 0.0);
        let p = EvolutionParams::for_hamiltonian(&spec.hamiltonian().unwrap(), 0.0, Engine::Dephasing).unwrap();
        let sweep = angular_sweep(&spec, &p, &cfg.sweep).unwrap();
        assert_eq!(rec.delta_y_s, sweep.delta_y_s);
        assert_eq!(rec.phi_star, sweep.phi_star);
        let run = run_ensemble(&cfg).unwrap();
        assert_eq!(run.records.len(), 1);
        let r = run.records[0];
        assert_eq!([r.a_xx, r.a_yy, r.a_zz, r.j], [10.0, 10.0, 10.0, 0.0]);
        // isotropic coupling carries no directional information
        assert!(r.delta_y_s <= 1e-8);
    }

    #[test]
    fn records_are_consistent_and_deterministic() {
        let cfg = tiny(3);
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&EnsembleConfig { threads: 2, ..cfg.clone() }).unwrap();
        assert_eq!(a.records, b.records);
        assert!(a.failures.is_empty());
        assert_eq!(a.records.len(), 6);
        for r in &a.records {
            assert_abs_diff_eq!(r.y_s + r.y_t, 1.0, epsilon = 1e-6);
            assert!((0.0..=1.0).contains(&r.c_bar));
            assert!((0.0..=1.0).contains(&r.delta_y_s));
        }
        // same parameters across K_d for one sample
        assert_eq!(a.records[0].a_xx, a.records[1].a_xx);
        assert_ne!(a.records[0].a_xx, a.records[2].a_xx);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let run = run_ensemble(&tiny(2)).unwrap();
        let mut buf = Vec::new();
        write_ensemble_csv(&run.records, &mut buf).unwrap();
        let back = read_ensemble_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), run.records.len());
        for (x, y) in back.iter().zip(&run.records) {
            assert_abs_diff_eq!(x.delta_y_s, y.delta_y_s, epsilon = 1e-14 * y.delta_y_s.abs().max(1e-300));
            assert_eq!(x.seed_index, y.seed_index);
        }
        let bad = format!("{ENSEMBLE_CSV_HEADER}\n0,0,1,2,3,4,5,6,7,8,9\n1,0,1,2,x,4,5,6,7,8,9\n");
        match read_ensemble_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_ensemble_csv("a,b\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn invalid_configs() {
        assert!(run_ensemble(&EnsembleConfig { n_samples: 0, ..tiny(1) }).is_err());
        assert!(run_ensemble(&EnsembleConfig { k_d_list: vec![-1.0], ..tiny(1) }).is_err());
        assert!(run_ensemble(&EnsembleConfig { a_range: (5.0, 1.0), ..tiny(1) }).is_err());
    }
}
