//! Radical-pair system specifications and their spin Hamiltonians.
//!
//! All frequencies are in units of the recombination rate k (ħ = 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, CVector, DensityMatrix, Operator, PureState, C64};
use crate::spinops::{
    electron_dot, embed_electron, embed_nucleus, kets, kron_vec, singlet_projector, Axis, Electron,
    SpinSystem,
};

/// 3×3 hyperfine coupling tensor between electron 1 and one nucleus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperfineTensor(pub [[f64; 3]; 3]);

impl HyperfineTensor {
    pub fn diagonal(xx: f64, yy: f64, zz: f64) -> Self {
        Self([[xx, 0.0, 0.0], [0.0, yy, 0.0], [0.0, 0.0, zz]])
    }

    pub fn isotropic(a: f64) -> Self {
        Self::diagonal(a, a, a)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.0[i][j] == 0.0))
    }
}

/// Which Zeeman model drives singlet–triplet mixing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coupling {
    /// Hyperfine tensors on electron 1 plus an in-plane field of magnitude
    /// `omega` at angle `phi` from the x axis.
    Hyperfine {
        tensors: Vec<(usize, HyperfineTensor)>,
        omega: f64,
        phi: f64,
    },
    /// Nucleus-free pair with distinct Larmor frequencies ω₁, ω₂ along z.
    Larmor { omega1: f64, omega2: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub system: SpinSystem,
    pub coupling: Coupling,
    /// Exchange coupling; enters as −J 𝐬₁·𝐬₂.
    #[serde(default)]
    pub exchange: f64,
}

impl HamiltonianSpec {
    /// Single spin-1/2 nucleus with a diagonal hyperfine tensor.
    pub fn compass(a: HyperfineTensor, omega: f64, phi: f64, exchange: f64) -> Self {
        Self {
            system: SpinSystem::single_proton(),
            coupling: Coupling::Hyperfine { tensors: vec![(0, a)], omega, phi },
            exchange,
        }
    }

    pub fn fictitious(omega1: f64, omega2: f64) -> Self {
        Self {
            system: SpinSystem::bare(),
            coupling: Coupling::Larmor { omega1, omega2 },
            exchange: 0.0,
        }
    }

    /// Copy with the field angle replaced (hyperfine mode only).
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        let mut out = self.clone();
        match &mut out.coupling {
            Coupling::Hyperfine { phi: p, .. } => *p = phi,
            Coupling::Larmor { .. } => {
                return Err(Error::Mode("field angle is undefined for the Larmor-mode pair".into()))
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.exchange.is_finite() {
            return Err(Error::Config("exchange coupling must be finite".into()));
        }
        match &self.coupling {
            Coupling::Hyperfine { tensors, omega, phi } => {
                if !(omega.is_finite() && *omega >= 0.0) {
                    return Err(Error::Config(format!("field magnitude must be >= 0, got {omega}")));
                }
                if !phi.is_finite() {
                    return Err(Error::Config("field angle must be finite".into()));
                }
                for (idx, a) in tensors {
                    if *idx >= self.system.n_nuclei() {
                        return Err(Error::Config(format!(
                            "hyperfine tensor refers to nucleus {idx}, system has {}",
                            self.system.n_nuclei()
                        )));
                    }
                    if !a.is_finite() {
                        return Err(Error::Config("hyperfine tensor has non-finite entries".into()));
                    }
                }
            }
            Coupling::Larmor { omega1, omega2 } => {
                if self.system.n_nuclei() != 0 {
                    return Err(Error::Mode("Larmor-mode pair must not carry nuclei".into()));
                }
                if !(omega1.is_finite() && omega2.is_finite()) {
                    return Err(Error::Config("Larmor frequencies must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Builds the Hamiltonian for either coupling mode.
    pub fn hamiltonian(&self) -> Result<Operator> {
        self.validate()?;
        match self.coupling {
            Coupling::Hyperfine { .. } => build_hamiltonian(self),
            Coupling::Larmor { omega1, omega2 } => {
                let h = build_fictitious_pair(omega1, omega2);
                Ok(&h - &electron_dot(&self.system).scale(self.exchange))
            }
        }
    }
}

/// 𝓗 = Σ_m 𝐬₁·A_m·𝐈_m + ω cosφ (s₁x + s₂x) + ω sinφ (s₁y + s₂y) − J 𝐬₁·𝐬₂
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Operator> {
    spec.validate()?;
    let Coupling::Hyperfine { tensors, omega, phi } = &spec.coupling else {
        return Err(Error::Mode("build_hamiltonian needs a hyperfine-mode spec".into()));
    };
    let sys = &spec.system;
    let d = sys.dim();
    let mut h = Operator::zeros(d);

    let s1: Vec<Operator> = Axis::ALL.iter().map(|&a| embed_electron(Electron::First, a, sys)).collect();
    for (idx, a) in tensors {
        let nuc: Vec<Operator> = Axis::ALL
            .iter()
            .map(|&ax| embed_nucleus(*idx, ax, sys))
            .collect::<Result<_>>()?;
        for (i, s) in s1.iter().enumerate() {
            for (j, n) in nuc.iter().enumerate() {
                if a.0[i][j] != 0.0 {
                    h = &h + &(s * n).scale(a.0[i][j]);
                }
            }
        }
    }

    if *omega != 0.0 {
        let sx = &s1[0] + &embed_electron(Electron::Second, Axis::X, sys);
        let sy = &s1[1] + &embed_electron(Electron::Second, Axis::Y, sys);
        h = &h + &(&sx.scale(omega * phi.cos()) + &sy.scale(omega * phi.sin()));
    }
    if spec.exchange != 0.0 {
        h = &h - &electron_dot(sys).scale(spec.exchange);
    }
    Ok(h.hermitian_part())
}

/// 𝓗 = ω₁ s₁z + ω₂ s₂z on the bare two-electron space.
pub fn build_fictitious_pair(omega1: f64, omega2: f64) -> Operator {
    let sys = SpinSystem::bare();
    let z1 = embed_electron(Electron::First, Axis::Z, &sys);
    let z2 = embed_electron(Electron::Second, Axis::Z, &sys);
    &z1.scale(omega1) + &z2.scale(omega2)
}

/// ρ₀ = Q_S / Tr{Q_S}: electron singlet, nuclei fully mixed.
pub fn initial_state(sys: &SpinSystem) -> DensityMatrix {
    let qs = singlet_projector(sys);
    let tr = qs.trace().re;
    DensityMatrix::new_unchecked(qs.scale(1.0 / tr))
}

/// |ψ⟩ = α_s |s⟩⊗|χ_s⟩ + Σ_j β_j |t_j⟩⊗|χ_j⟩.
///
/// `triplets` lists (j, β_j, |χ_j⟩) with j ∈ {1, 0, −1}; absent components
/// are zero. Nuclear states must have dimension d_nuc.
pub fn pure_state(
    sys: &SpinSystem,
    alpha_s: C64,
    chi_s: &CVector,
    triplets: &[(i32, C64, CVector)],
) -> Result<PureState> {
    let d_nuc = sys.d_nuc();
    let check = |v: &CVector| -> Result<()> {
        if v.len() != d_nuc {
            return Err(Error::Dimension { expected: d_nuc, got: v.len() });
        }
        Ok(())
    };
    check(chi_s)?;
    let mut psi = kron_vec(&kets::singlet(), chi_s) * alpha_s;
    for (j, beta, chi) in triplets {
        check(chi)?;
        if !(-1..=1).contains(j) {
            return Err(Error::InvalidState(format!("triplet index {j} not in {{-1, 0, 1}}")));
        }
        psi += kron_vec(&kets::triplet(*j), chi) * *beta;
    }
    PureState::new(psi)
}

/// Nucleus-free convenience wrapper: amplitudes on (s, t₁, t₀, t₋₁).
pub fn electronic_state(alpha_s: C64, beta: [C64; 3]) -> Result<PureState> {
    let one = CVector::from_element(1, c(1.0, 0.0));
    pure_state(
        &SpinSystem::bare(),
        alpha_s,
        &one,
        &[(1, beta[0], one.clone()), (0, beta[1], one.clone()), (-1, beta[2], one.clone())],
    )
}
