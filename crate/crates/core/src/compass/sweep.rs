use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::yields::singlet_yield_resolvent;
use crate::coherence::StProjectors;
use crate::dynamics::EvolutionParams;
use crate::error::{Error, Result};
use crate::model::{initial_state, HamiltonianSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Grid points on φ ∈ [0, π).
    pub n_phi: usize,
    /// Half-width ε of the central difference; must be a multiple of π/n_phi.
    /// Defaults to one grid step.
    pub epsilon: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n_phi: 64, epsilon: None }
    }
}

impl SweepConfig {
    pub fn step(&self) -> f64 {
        PI / self.n_phi as f64
    }

    /// ε expressed in grid steps.
    pub fn epsilon_steps(&self) -> Result<usize> {
        if self.n_phi < 8 {
            return Err(Error::Config(format!("n_phi must be at least 8, got {}", self.n_phi)));
        }
        let Some(eps) = self.epsilon else { return Ok(1) };
        let ratio = eps / self.step();
        let m = ratio.round();
        if !(eps > 0.0) || (ratio - m).abs() > 1e-9 * ratio.max(1.0) || m < 1.0 {
            return Err(Error::Config(format!(
                "epsilon {eps} is not a positive multiple of the grid step π/{}",
                self.n_phi
            )));
        }
        let m = m as usize;
        if 2 * m >= self.n_phi {
            return Err(Error::Config(format!("epsilon {eps} spans half the period or more")));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub phi: Vec<f64>,
    pub y_s: Vec<f64>,
    pub y_t: Vec<f64>,
    pub epsilon: f64,
    /// δY_S = max over φ₀ of |Y_S(φ₀ + ε) − Y_S(φ₀ − ε)|
    pub delta_y_s: f64,
    /// The maximizing φ₀.
    pub phi_star: f64,
    pub phi_star_index: usize,
}

/// Samples Y_S(φ) on a uniform grid over one period [0, π) and takes the
/// largest central difference. The yield is invariant under field reversal,
/// so φ₀ ± ε wrap around the period.
pub fn angular_sweep(
    template: &HamiltonianSpec,
    params: &EvolutionParams,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    let m = cfg.epsilon_steps()?;
    let n = cfg.n_phi;
    let rho0 = initial_state(&template.system);
    let proj = StProjectors::new(&template.system);
    let mut phi = Vec::with_capacity(n);
    let mut y_s = Vec::with_capacity(n);
    let mut y_t = Vec::with_capacity(n);
    for i in 0..n {
        let angle = i as f64 * cfg.step();
        let h = template.with_phi(angle)?.hamiltonian()?;
        let y = singlet_yield_resolvent(&h, &rho0, params, &proj)?;
        phi.push(angle);
        y_s.push(y.y_s);
        y_t.push(y.y_t);
    }
    let mut best = (0.0f64, 0usize);
    for i in 0..n {
        let diff = (y_s[(i + m) % n] - y_s[(i + n - m) % n]).abs();
        if diff > best.0 {
            best = (diff, i);
        }
    }
    Ok(SweepResult {
        phi: phi.clone(),
        y_s,
        y_t,
        epsilon: m as f64 * cfg.step(),
        delta_y_s: best.0,
        phi_star: phi[best.1],
        phi_star_index: best.1,
    })
}
