//! Built-in comparisons against closed-form and independently computed
//! results, used by the command-line `oracle` mode.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coherence::{
    apply_kraus, binary_entropy, decohere, lift_nuclear_kraus, nuclear_z_measurement, relative_entropy,
    st_coherence, StProjectors,
};
use crate::compass::{singlet_yield, YieldMethod};
use crate::dynamics::{fictitious_exact, propagate, Engine, EvolutionParams};
use crate::error::Result;
use crate::model::{build_fictitious_pair, initial_state, pure_state, HamiltonianSpec, HyperfineTensor};
use crate::operator::{c, CVector, DensityMatrix, Operator, PureState};
use crate::spinops::{kets, SpinSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCheck {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_error, tolerance, pass: max_error < tolerance }
    }
}

fn fictitious_run(k_d: f64, engine: Engine) -> Result<crate::dynamics::Trajectory> {
    let h = build_fictitious_pair(1.0, 0.0);
    let p = EvolutionParams::for_hamiltonian(&h, k_d, engine)?
        .with_t_max(4.0 * PI)
        .with_dt(PI / 200.0);
    propagate(&h, &initial_state(&SpinSystem::bare()), &p)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

fn random_mixed(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Result<DensityMatrix> {
    let g = DMatrix::from_fn(dim, rank, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(Operator::new(m.map(|x| x / tr))?)
}

/// Runs every oracle comparison with a fixed seed.
pub fn run_all() -> Result<Vec<OracleCheck>> {
    let mut out = Vec::new();

    let traj = fictitious_run(0.0, Engine::Haberkorn)?;
    let mut p_err = 0.0f64;
    let mut c_err = 0.0f64;
    for (i, &t) in traj.times.iter().enumerate() {
        let p = (t / 2.0).cos().powi(2);
        p_err = p_err.max((traj.p_s[i] - p).abs());
        c_err = c_err.max((traj.coherence[i] - binary_entropy(p)).abs());
    }
    out.push(OracleCheck::new("fictitious pair p_S vs cos^2(Omega t/2)", p_err, 1e-8));
    out.push(OracleCheck::new("fictitious pair C vs H2[cos^2(Omega t/2)]", c_err, 1e-6));

    let traj = fictitious_run(0.2, Engine::Dephasing)?;
    let mut err = 0.0f64;
    for (i, &t) in traj.times.iter().enumerate() {
        let ex = fictitious_exact(1.0, 0.2, 1.0, t);
        err = err.max((traj.p_s[i] - ex.p_s).abs()).max((traj.coherence[i] - ex.c).abs());
    }
    out.push(OracleCheck::new("dephased pair vs two-level Liouvillian", err, 1e-8));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sat = 0.0f64;
    let mut rel = 0.0f64;
    for dim in [4, 8, 16] {
        let proj = StProjectors::for_dim(dim);
        for n in 0..200 {
            let psi = PureState::normalize(random_vector(&mut rng, dim))?;
            let rep = st_coherence(&DensityMatrix::from_pure(&psi), &proj)?;
            sat = sat.max((rep.c - binary_entropy(rep.p_s)).abs());
            let rho = random_mixed(&mut rng, dim, 1 + n % dim)?;
            let hat = decohere(&rho, &proj)?;
            rel = rel.max((st_coherence(&rho, &proj)?.c - relative_entropy(&rho, &hat)?).abs());
        }
    }
    out.push(OracleCheck::new("pure-state saturation C = H2[p_S]", sat, 1e-10));
    out.push(OracleCheck::new("C equals relative entropy to dephased state", rel, 1e-10));

    let sys = SpinSystem::single_proton();
    let h = c(FRAC_1_SQRT_2, 0.0);
    let psi = pure_state(&sys, h, &kets::up(), &[(0, h, kets::down())])?;
    let rho = DensityMatrix::from_pure(&psi);
    let proj = StProjectors::new(&sys);
    let measured = apply_kraus(&rho, &lift_nuclear_kraus(&nuclear_z_measurement(), &sys)?)?;
    let ent = (st_coherence(&rho, &proj)?.c - 1.0)
        .abs()
        .max(st_coherence(&measured, &proj)?.c.abs());
    out.push(OracleCheck::new("entangled state before/after nuclear measurement", ent, 1e-12));

    let mut y_err = 0.0f64;
    for omega in [0.5, 1.0, 3.0] {
        let hf = build_fictitious_pair(omega, 0.0);
        let p = EvolutionParams::for_hamiltonian(&hf, 0.0, Engine::Haberkorn)?;
        let y = singlet_yield(&hf, &initial_state(&SpinSystem::bare()), &p, YieldMethod::Resolvent)?;
        y_err = y_err.max((y.y_s - 0.5 * (1.0 + 1.0 / (1.0 + omega * omega))).abs());
    }
    out.push(OracleCheck::new("fictitious Haberkorn yield closed form", y_err, 1e-8));

    let mut q_err = 0.0f64;
    for _ in 0..5 {
        let mut u = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
        let a = HyperfineTensor::diagonal(u(0.0, 10.0), u(0.0, 10.0), u(0.0, 10.0));
        let spec = HamiltonianSpec::compass(a, 1.0, u(0.0, PI), u(-10.0, 10.0));
        let hc = spec.hamiltonian()?;
        let rho0 = initial_state(&spec.system);
        let p = EvolutionParams::for_hamiltonian(&hc, u(0.0, 10.0), Engine::Dephasing)?;
        let r = singlet_yield(&hc, &rho0, &p, YieldMethod::Resolvent)?;
        let q = singlet_yield(&hc, &rho0, &p, YieldMethod::Quadrature)?;
        q_err = q_err.max((r.y_s - q.y_s).abs());
    }
    out.push(OracleCheck::new("resolvent vs quadrature singlet yield", q_err, 1e-6));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_oracles_pass() {
        let checks = run_all().unwrap();
        assert_eq!(checks.len(), 8);
        for c in &checks {
            assert!(c.pass, "{}: {:e} >= {:e}", c.name, c.max_error, c.tolerance);
        }
    }
}
