//! Radical-pair master-equation propagation.
//!
//! With equal singlet and triplet recombination rates the state factorizes as
//! ρ_t = e^{−kt} R_t, where R evolves under the trace-preserving generator
//! L[R] = −i[H, R] − K_d (Q_S R Q_T + Q_T R Q_S). L is constant, so each step
//! applies the exact exponential exp(L·Δt).

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherence::{binary_entropy, st_coherence, StProjectors};
use crate::eigh::eigvalsh;
use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, Operator};
use crate::superop::{vec, unvec, Superoperator};

/// Default horizon in units of 1/k; e^{−25} ≈ 1.4e-11 bounds the truncated tail.
pub const DEFAULT_T_MAX: f64 = 25.0;
/// Default step is this fraction of the fastest timescale.
pub const DEFAULT_STEP_FRACTION: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Coherent evolution plus uniform recombination (no extra dephasing).
    Haberkorn,
    /// Adds singlet–triplet dephasing at rate K_d.
    Dephasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    /// Recombination rate k.
    pub k: f64,
    /// Singlet–triplet dephasing rate K_d (ignored by the Haberkorn engine).
    pub k_d: f64,
    pub engine: Engine,
    pub t_max: f64,
    pub dt: f64,
    /// States and observables are recorded every `stride` steps.
    pub stride: usize,
    /// Whether to evaluate C⟦ρ_t⟧ at each recorded time.
    pub coherence: bool,
}

impl EvolutionParams {
    /// Default step 0.02 / max(‖H‖₂, K_d, k) and horizon 25/k.
    pub fn for_hamiltonian(h: &Operator, k_d: f64, engine: Engine) -> Result<Self> {
        let k = 1.0;
        let spectral = eigvalsh(h)?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let kd_eff = if engine == Engine::Dephasing { k_d } else { 0.0 };
        let fastest = spectral.max(kd_eff).max(k);
        Ok(Self {
            k,
            k_d,
            engine,
            t_max: DEFAULT_T_MAX / k,
            dt: DEFAULT_STEP_FRACTION / fastest,
            stride: 1,
            coherence: true,
        })
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_coherence(mut self, on: bool) -> Self {
        self.coherence = on;
        self
    }

    /// Dephasing rate actually applied by the selected engine.
    pub fn effective_k_d(&self) -> f64 {
        match self.engine {
            Engine::Haberkorn => 0.0,
            Engine::Dephasing => self.k_d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Config(format!("recombination rate must be positive, got {}", self.k)));
        }
        if !(self.k_d >= 0.0 && self.k_d.is_finite()) {
            return Err(Error::Config(format!("dephasing rate must be >= 0, got {}", self.k_d)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.t_max / self.dt > 1e8 {
            return Err(Error::Config("dt too small for the horizon (more than 1e8 steps)".into()));
        }
        Ok(())
    }

    /// Recording interval and number of intervals; the interval is shrunk so
    /// the grid ends exactly at t_max.
    fn grid(&self) -> (f64, usize) {
        let target = self.dt * self.stride as f64;
        let n = (self.t_max / target - 1e-9).ceil().max(1.0) as usize;
        (self.t_max / n as f64, n)
    }
}

/// Time series of a propagated radical-pair state.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// ρ_t = e^{−kt} R_t (not normalized).
    pub states: Vec<DensityMatrix>,
    pub trace: Vec<f64>,
    /// Tr{ρ_t Q_S}/Tr{ρ_t}
    pub p_s: Vec<f64>,
    /// C⟦ρ_t/Tr ρ_t⟧; empty when coherence evaluation was disabled.
    pub coherence: Vec<f64>,
    pub k: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// CSV with columns t, trace, p_S, C at 15 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,trace,p_S,C")?;
        for i in 0..self.len() {
            let c = self.coherence.get(i).copied().unwrap_or(f64::NAN);
            writeln!(
                w,
                "{},{},{},{}",
                fmt_sig(self.times[i]),
                fmt_sig(self.trace[i]),
                fmt_sig(self.p_s[i]),
                fmt_sig(c)
            )?;
        }
        Ok(())
    }
}

/// Locale-independent scientific notation with 15 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{x:.14e}")
    } else {
        format!("{x}")
    }
}

/// exp(L·dt) for the given Hamiltonian and dephasing rate.
pub fn propagator_step(h: &Operator, k_d: f64, dt: f64, proj: &StProjectors) -> Superoperator {
    Superoperator::liouvillian(h, k_d, &proj.qs, &proj.qt).exp(dt)
}

pub fn propagate(h: &Operator, rho0: &DensityMatrix, params: &EvolutionParams) -> Result<Trajectory> {
    params.validate()?;
    if h.dim() != rho0.dim() {
        return Err(Error::Dimension { expected: rho0.dim(), got: h.dim() });
    }
    if !h.is_hermitian() {
        return Err(Error::Contract("Hamiltonian must be Hermitian".into()));
    }
    let d = h.dim();
    let proj = StProjectors::for_dim(d);
    let (interval, n) = params.grid();
    let step = propagator_step(h, params.effective_k_d(), interval, &proj);

    let r0 = rho0.normalized()?;
    let tr0 = rho0.trace();
    let mut r = vec(r0.operator());

    let mut traj = Trajectory {
        times: Vec::with_capacity(n + 1),
        states: Vec::with_capacity(n + 1),
        trace: Vec::with_capacity(n + 1),
        p_s: Vec::with_capacity(n + 1),
        coherence: Vec::with_capacity(if params.coherence { n + 1 } else { 0 }),
        k: params.k,
    };
    for i in 0..=n {
        if i > 0 {
            r = step.apply_vec(&r);
        }
        let t = i as f64 * interval;
        let decay = tr0 * (-params.k * t).exp();
        let r_op = unvec(&r, d);
        let r_state = DensityMatrix::new_unchecked(r_op);
        let tr_r = r_state.trace();
        let p_s = (r_state.expectation(&proj.qs) / tr_r).clamp(0.0, 1.0);
        if params.coherence {
            let report = st_coherence(&r_state, &proj)
                .map_err(|e| Error::Numerical(format!("at t = {t}: {e}")))?;
            traj.coherence.push(report.c.clamp(0.0, 1.0));
        }
        traj.times.push(t);
        traj.trace.push(decay * tr_r);
        traj.p_s.push(p_s);
        traj.states.push(DensityMatrix::new_unchecked(r_state.operator().scale(decay)));
    }
    Ok(traj)
}

/// Closed-form and exact results for the nucleus-free pair
/// 𝓗 = ω₁s₁z + ω₂s₂z started in |s⟩, with Ω = ω₁ − ω₂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FictitiousPoint {
    pub p_s: f64,
    pub c: f64,
    /// Eigenvalues of the normalized ρ_t, ascending.
    pub e: [f64; 2],
    /// Eigenvalues of ρ̂_t, ascending.
    pub e_hat: [f64; 2],
    /// Tr ρ_t = e^{−kt}
    pub trace: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FictitiousOracle {
    /// Weak-dephasing approximation (valid for K_d ≪ 2|Ω|).
    pub approximate: FictitiousPoint,
    /// Exact solution of the S–T₀ two-level Liouvillian.
    pub exact: FictitiousPoint,
}

fn point_from_bloch(y: f64, z: f64, trace: f64) -> FictitiousPoint {
    let p_s = 0.5 * (1.0 + z);
    let r = (y * y + z * z).sqrt().min(1.0);
    let e = [0.5 * (1.0 - r), 0.5 * (1.0 + r)];
    let mut e_hat = [0.5 * (1.0 - z), 0.5 * (1.0 + z)];
    e_hat.sort_by(f64::total_cmp);
    let c = binary_entropy(p_s) - binary_entropy(e[0]);
    FictitiousPoint { p_s, c, e, e_hat, trace }
}

/// Exact evolution in the {|s⟩, |t₀⟩} subspace, valid in every regime.
///
/// In that subspace H = (Ω/2)σ_x and the dephasing damps σ_x, σ_y at rate
/// K_d, so the Bloch components obey ẏ = −K_d y − Ω z, ż = Ω y with
/// (y, z)(0) = (0, 1). The 2×2 exponential is evaluated by Cayley–Hamilton.
pub fn fictitious_exact(omega: f64, k_d: f64, k: f64, t: f64) -> FictitiousPoint {
    let mu = -0.5 * k_d;
    let nu = Complex64::new(0.25 * k_d * k_d - omega * omega, 0.0).sqrt();
    // exp(Mt) = e^{μt} [cosh(νt) I + sinh(νt)/ν (M − μI)]
    let (ch, sh_over_nu) = if nu.norm() * t.abs() < 1e-8 {
        (Complex64::new(1.0, 0.0), Complex64::new(t, 0.0))
    } else {
        ((nu * t).cosh(), (nu * t).sinh() / nu)
    };
    let env = (mu * t).exp();
    // (M − μI) applied to (0, 1): M = [[−K_d, −Ω], [Ω, 0]]
    let y = env * (sh_over_nu * -omega).re;
    let z = env * (ch + sh_over_nu * -mu).re;
    point_from_bloch(y, z, (-k * t).exp())
}

/// Approximate and exact fictitious-pair observables at time t.
pub fn oracle_fictitious(omega: f64, k_d: f64, k: f64, t: f64) -> Result<FictitiousOracle> {
    if k_d >= 2.0 * omega.abs() {
        return Err(Error::Regime(format!(
            "weak-dephasing forms need K_d < 2|Ω| (K_d = {k_d}, Ω = {omega})"
        )));
    }
    let x = (-0.5 * k_d * t).exp();
    let cos = (omega * t).cos();
    let e = [0.5 * (1.0 - x), 0.5 * (1.0 + x)];
    let e_hat = [0.5 * (1.0 - x * cos), 0.5 * (1.0 + x * cos)];
    let ent = |a: f64| if a > 0.0 { -a * a.log2() } else { 0.0 };
    let c = ent(e_hat[0]) + ent(e_hat[1]) - ent(e[0]) - ent(e[1]);
    let mut sorted_hat = e_hat;
    sorted_hat.sort_by(f64::total_cmp);
    let approximate = FictitiousPoint {
        p_s: 0.5 * (1.0 + x * cos),
        c,
        e,
        e_hat: sorted_hat,
        trace: (-k * t).exp(),
    };
    Ok(FictitiousOracle { approximate, exact: fictitious_exact(omega, k_d, k, t) })
}
