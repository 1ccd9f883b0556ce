use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use radpair::compass::{EnsembleConfig, ExchangeConfig, SweepConfig};
use radpair::dynamics::DEFAULT_T_MAX;
use radpair::{Coupling, Engine, EvolutionParams, HamiltonianSpec, HyperfineTensor, Operator, SpinSystem};
use serde::{Deserialize, Serialize};

use crate::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Electron 1 coupled to nuclei through diagonal hyperfine tensors, in a
    /// field of magnitude `omega` at angle `phi`.
    Compass,
    /// Nucleus-free pair with Larmor frequencies `omega1`, `omega2`.
    Fictitious,
}

/// Flat run configuration. Frequencies and rates are in units of k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    /// Nuclear spin quantum numbers.
    pub nuclei: Vec<f64>,
    /// Diagonal (A_xx, A_yy, A_zz) per nucleus.
    pub hyperfine: Vec<[f64; 3]>,
    pub omega: f64,
    pub phi: f64,
    pub exchange: f64,
    pub omega1: f64,
    pub omega2: f64,

    pub engine: Engine,
    pub k_d: f64,
    /// Integration step; defaults to 0.02 / max(‖H‖, K_d, k).
    pub dt: Option<f64>,
    pub t_max: f64,
    pub stride: usize,

    pub n_phi: usize,
    pub epsilon: Option<f64>,

    pub samples: usize,
    pub kd: Vec<f64>,
    pub a_min: f64,
    pub a_max: f64,
    pub j_min: f64,
    pub j_max: f64,
    pub seed: u64,
    pub threads: usize,
    pub ensemble_stride: usize,

    /// Ensemble CSV read by `analyze`; defaults to `<out>/ensemble.csv`.
    pub input: Option<PathBuf>,
    pub bins: usize,
    pub j_bin_width: f64,
    pub j_band: f64,

    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ens = EnsembleConfig::default();
        Self {
            model: Model::Compass,
            nuclei: vec![0.5],
            hyperfine: vec![[10.0, 0.0, 0.0]],
            omega: 1.0,
            phi: 0.0,
            exchange: 0.0,
            omega1: 1.0,
            omega2: 0.0,
            engine: Engine::Dephasing,
            k_d: 0.0,
            dt: None,
            t_max: DEFAULT_T_MAX,
            stride: 1,
            n_phi: 64,
            epsilon: None,
            samples: ens.n_samples,
            kd: ens.k_d_list,
            a_min: ens.a_range.0,
            a_max: ens.a_range.1,
            j_min: ens.j_range.0,
            j_max: ens.j_range.1,
            seed: ens.seed,
            threads: 0,
            ensemble_stride: ens.stride,
            input: None,
            bins: 20,
            j_bin_width: 4.0,
            j_band: 2.0,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))
            .map_err(|e| ConfigError(format!("{e:#}")))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()).into())
    }

    pub fn spec(&self) -> Result<HamiltonianSpec> {
        let spec = match self.model {
            Model::Fictitious => {
                if !self.nuclei.is_empty() && self.nuclei != [0.5] {
                    log::warn!("nuclei are ignored for the fictitious pair");
                }
                let mut s = HamiltonianSpec::fictitious(self.omega1, self.omega2);
                s.exchange = self.exchange;
                s
            }
            Model::Compass => {
                if self.hyperfine.len() != self.nuclei.len() {
                    bail!(ConfigError(format!(
                        "{} hyperfine entries for {} nuclei",
                        self.hyperfine.len(),
                        self.nuclei.len()
                    )));
                }
                let system = SpinSystem::new(self.nuclei.clone())?;
                let tensors = self
                    .hyperfine
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i, HyperfineTensor::diagonal(a[0], a[1], a[2])))
                    .collect();
                HamiltonianSpec {
                    system,
                    coupling: Coupling::Hyperfine { tensors, omega: self.omega, phi: self.phi },
                    exchange: self.exchange,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn evolution(&self, h: &Operator) -> Result<EvolutionParams> {
        let mut p = EvolutionParams::for_hamiltonian(h, self.k_d, self.engine)?
            .with_t_max(self.t_max)
            .with_stride(self.stride);
        if let Some(dt) = self.dt {
            p = p.with_dt(dt);
        }
        p.validate()?;
        Ok(p)
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig { n_phi: self.n_phi, epsilon: self.epsilon }
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig {
            n_samples: self.samples,
            k_d_list: self.kd.clone(),
            a_range: (self.a_min, self.a_max),
            j_range: (self.j_min, self.j_max),
            omega: self.omega,
            seed: self.seed,
            sweep: self.sweep(),
            stride: self.ensemble_stride,
            threads: self.threads,
        }
    }

    pub fn exchange_bins(&self) -> ExchangeConfig {
        ExchangeConfig { j_min: self.j_min, j_max: self.j_max, bin_width: self.j_bin_width, band: self.j_band }
    }

    pub fn input_path(&self) -> PathBuf {
        self.input.clone().unwrap_or_else(|| self.out.join("ensemble.csv"))
    }
}
