use serde::{Deserialize, Serialize};

use crate::coherence::StProjectors;
use crate::dynamics::{propagate, EvolutionParams, Trajectory};
use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, Operator};
use crate::superop::Superoperator;

/// Largest tail weight e^{−k t_max} accepted by [`mean_coherence`].
pub const MAX_TAIL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Yields {
    pub y_s: f64,
    pub y_t: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YieldMethod {
    /// One linear solve of (k − L) X = ρ₀; exact up to round-off.
    #[default]
    Resolvent,
    /// Simpson integral of k Tr{ρ_t Q_S} along a propagated trajectory.
    Quadrature,
}

pub fn singlet_yield(
    h: &Operator,
    rho0: &DensityMatrix,
    params: &EvolutionParams,
    method: YieldMethod,
) -> Result<Yields> {
    match method {
        YieldMethod::Resolvent => {
            singlet_yield_resolvent(h, rho0, params, &StProjectors::for_dim(h.dim()))
        }
        YieldMethod::Quadrature => singlet_yield_quadrature(h, rho0, params),
    }
}

/// Y_x = k Tr{Q_x X} with X = ∫₀^∞ e^{−kt} e^{Lt} ρ₀ dt = (k − L)⁻¹ ρ₀.
pub fn singlet_yield_resolvent(
    h: &Operator,
    rho0: &DensityMatrix,
    params: &EvolutionParams,
    proj: &StProjectors,
) -> Result<Yields> {
    params.validate()?;
    if h.dim() != rho0.dim() || proj.dim() != h.dim() {
        return Err(Error::Dimension { expected: rho0.dim(), got: h.dim() });
    }
    let l = Superoperator::liouvillian(h, params.effective_k_d(), &proj.qs, &proj.qt);
    let x = DensityMatrix::new_unchecked(l.resolvent_solve(params.k, rho0.operator())?);
    Ok(Yields { y_s: params.k * x.expectation(&proj.qs), y_t: params.k * x.expectation(&proj.qt) })
}

pub fn singlet_yield_quadrature(
    h: &Operator,
    rho0: &DensityMatrix,
    params: &EvolutionParams,
) -> Result<Yields> {
    params.validate()?;
    let mut n = (params.t_max / params.dt - 1e-9).ceil().max(2.0) as usize;
    n += n % 2;
    let p = params.with_coherence(false).with_stride(1).with_dt(params.t_max / n as f64);
    let traj = propagate(h, rho0, &p)?;
    let k = traj.k;
    let y_s = simpson(&traj.times, |i| k * traj.trace[i] * traj.p_s[i]);
    let y_t = simpson(&traj.times, |i| k * traj.trace[i] * (1.0 - traj.p_s[i]));
    Ok(Yields { y_s, y_t })
}

/// C̄ = ∫ k e^{−kt} C⟦ρ_t⟧ dt by the trapezoidal rule on the trajectory grid.
pub fn mean_coherence(traj: &Trajectory) -> Result<f64> {
    if traj.coherence.len() != traj.len() || traj.is_empty() {
        return Err(Error::Config("trajectory was propagated without coherence".into()));
    }
    let tail = (-traj.k * traj.t_max()).exp();
    if tail > MAX_TAIL {
        return Err(Error::InsufficientHorizon(tail));
    }
    let k = traj.k;
    let v = trapezoid(&traj.times, |i| k * (-k * traj.times[i]).exp() * traj.coherence[i]);
    Ok(v.clamp(0.0, 1.0))
}

fn trapezoid(times: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut prev = f(0);
    for i in 1..times.len() {
        let cur = f(i);
        acc += 0.5 * (times[i] - times[i - 1]) * (prev + cur);
        prev = cur;
    }
    acc
}

/// Composite Simpson rule on a uniform grid with an even number of intervals.
fn simpson(times: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let n = times.len() - 1;
    debug_assert!(n >= 2 && n.is_multiple_of(2));
    let h = (times[n] - times[0]) / n as f64;
    let mut acc = f(0) + f(n);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::binary_entropy;
    use crate::dynamics::Engine;
    use crate::model::{build_fictitious_pair, initial_state, HamiltonianSpec, HyperfineTensor};
    use crate::spinops::SpinSystem;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let times: Vec<f64> = (0..=10).map(|i| 0.25 * i as f64).collect();
        let v = simpson(&times, |i| times[i].powi(3) - 2.0 * times[i]);
        assert_abs_diff_eq!(v, 2.5f64.powi(4) / 4.0 - 2.5 * 2.5, epsilon = 1e-13);
    }

    #[test]
    fn no_mixing_gives_pure_singlet_yield() {
        let h = Operator::zeros(8);
        let rho0 = initial_state(&SpinSystem::single_proton());
        for k_d in [0.0, 3.0] {
            let p = EvolutionParams::for_hamiltonian(&h, k_d, Engine::Dephasing).unwrap();
            let y = singlet_yield(&h, &rho0, &p, YieldMethod::Resolvent).unwrap();
            assert_abs_diff_eq!(y.y_s, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(y.y_t, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fictitious_haberkorn_yield_closed_form() {
        // ∫ k e^{−kt} cos²(Ωt/2) dt = ½(1 + k²/(k² + Ω²))
        for omega in [0.5, 1.0, 3.0] {
            let h = build_fictitious_pair(omega, 0.0);
            let rho0 = initial_state(&SpinSystem::bare());
            let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap();
            let y = singlet_yield(&h, &rho0, &p, YieldMethod::Resolvent).unwrap();
            assert_abs_diff_eq!(y.y_s, 0.5 * (1.0 + 1.0 / (1.0 + omega * omega)), epsilon = 1e-12);
        }
        let h = build_fictitious_pair(1.0, 0.0);
        let rho0 = initial_state(&SpinSystem::bare());
        let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap();
        assert_abs_diff_eq!(singlet_yield(&h, &rho0, &p, YieldMethod::Resolvent).unwrap().y_s, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn resolvent_matches_quadrature() {
        let spec = HamiltonianSpec::compass(HyperfineTensor::diagonal(4.0, 1.0, 7.0), 1.0, 0.4, 2.0);
        let h = spec.hamiltonian().unwrap();
        let rho0 = initial_state(&spec.system);
        let p = EvolutionParams::for_hamiltonian(&h, 1.0, Engine::Dephasing).unwrap();
        let a = singlet_yield(&h, &rho0, &p, YieldMethod::Resolvent).unwrap();
        let b = singlet_yield(&h, &rho0, &p, YieldMethod::Quadrature).unwrap();
        assert_abs_diff_eq!(a.y_s, b.y_s, epsilon = 1e-8);
        assert_abs_diff_eq!(a.y_s + a.y_t, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incoherent_static_pair_has_zero_mean_coherence() {
        let h = build_fictitious_pair(2.0, 2.0);
        let rho0 = initial_state(&SpinSystem::bare());
        let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap();
        let traj = propagate(&h, &rho0, &p).unwrap();
        assert_abs_diff_eq!(mean_coherence(&traj).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fast_rabi_mean_coherence_approaches_time_average() {
        // Independent average of 𝓗₂[cos²θ] over θ ∈ [0, π) by midpoint rule.
        let n = 200_000;
        let avg: f64 = (0..n)
            .map(|i| binary_entropy(((i as f64 + 0.5) * PI / n as f64).cos().powi(2)))
            .sum::<f64>()
            / n as f64;
        assert_abs_diff_eq!(avg, 2.0 - 1.0 / 2f64.ln(), epsilon = 1e-6);
        let h = build_fictitious_pair(50.0, 0.0);
        let rho0 = initial_state(&SpinSystem::bare());
        let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap();
        let traj = propagate(&h, &rho0, &p).unwrap();
        assert_abs_diff_eq!(mean_coherence(&traj).unwrap(), avg, epsilon = 0.02);
    }

    #[test]
    fn mean_coherence_converges_under_step_halving() {
        let h = build_fictitious_pair(1.0, 0.0);
        let rho0 = initial_state(&SpinSystem::bare());
        let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap();
        let coarse = mean_coherence(&propagate(&h, &rho0, &p).unwrap()).unwrap();
        let fine = mean_coherence(&propagate(&h, &rho0, &p.with_dt(p.dt / 2.0)).unwrap()).unwrap();
        assert_abs_diff_eq!(coarse, fine, epsilon = 1e-6);
    }

    #[test]
    fn short_horizon_rejected() {
        let h = build_fictitious_pair(1.0, 0.0);
        let rho0 = initial_state(&SpinSystem::bare());
        let p = EvolutionParams::for_hamiltonian(&h, 0.0, Engine::Haberkorn).unwrap().with_t_max(5.0);
        let traj = propagate(&h, &rho0, &p).unwrap();
        assert!(matches!(mean_coherence(&traj), Err(Error::InsufficientHorizon(_))));
    }
}
