//! Singlet–triplet coherence: C⟦ρ⟧ = S(ρ̂) − S(ρ) with ρ̂ = Q_S ρ Q_S + Q_T ρ Q_T.
//!
//! All entropies are in bits. States are normalized by their trace before any
//! entropy is taken, since the recombining pair loses population over time.

use serde::{Deserialize, Serialize};

use crate::eigh::{eigh, eigvalsh_trusted};
use crate::error::{Error, Result};
use crate::operator::{CMatrix, DensityMatrix, Operator, PSD_TOL};
use crate::spinops::{
    kets, kron, lift_nuclear, singlet_projector_dim, singlet_triplet_basis, triplet_projector_dim,
    SpinSystem,
};

/// Eigenvalues at or below this (after normalization) count as zero.
pub const EIGEN_CLIP: f64 = 1e-12;
/// Allowed deviation of Σ K†K from the identity.
pub const KRAUS_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Binary Shannon entropy 𝓗₂[p] in bits.
pub fn binary_entropy(p: f64) -> f64 {
    xlog2x(p.clamp(0.0, 1.0)) + xlog2x((1.0 - p).clamp(0.0, 1.0))
}

/// −x log₂ x with 0·log 0 = 0.
fn xlog2x(x: f64) -> f64 {
    if x <= EIGEN_CLIP {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropy of a spectrum; fails on eigenvalues below −1e-9.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        if v < -PSD_TOL {
            return Err(Error::Numerical(format!("negative eigenvalue {v:e} in density matrix")));
        }
        s += xlog2x(v);
    }
    Ok(s.max(0.0))
}

/// Singlet and triplet projectors for one Hilbert-space dimension, together
/// with a basis in which both are diagonal.
#[derive(Clone, Debug)]
pub struct StProjectors {
    pub qs: Operator,
    pub qt: Operator,
    basis: CMatrix,
    d_nuc: usize,
}

impl StProjectors {
    pub fn new(sys: &SpinSystem) -> Self {
        Self::for_dim(sys.dim())
    }

    /// Only d_nuc = dim/4 matters for the projectors.
    pub fn for_dim(dim: usize) -> Self {
        assert!(dim >= 4 && dim.is_multiple_of(4), "radical-pair dimension must be a multiple of 4");
        Self {
            qs: singlet_projector_dim(dim),
            qt: triplet_projector_dim(dim),
            basis: singlet_triplet_basis(dim),
            d_nuc: dim / 4,
        }
    }

    pub fn dim(&self) -> usize {
        self.qs.dim()
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: rho.dim() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// C⟦ρ⟧ in bits.
    pub c: f64,
    pub p_s: f64,
    pub p_t: f64,
    pub s_rho: f64,
    pub s_rho_hat: f64,
    /// 𝓗₂[p_S], the upper bound on C.
    pub bound: f64,
}

/// Von Neumann entropy in bits of a unit-trace state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Normalization(tr));
    }
    entropy_of_spectrum(&eigvalsh_trusted(rho.matrix())?)
}

/// ρ̂ = Q_S ρ Q_S + Q_T ρ Q_T
pub fn decohere(rho: &DensityMatrix, proj: &StProjectors) -> Result<DensityMatrix> {
    proj.check(rho)?;
    let r = rho.operator();
    let out = &(&(&proj.qs * r) * &proj.qs) + &(&(&proj.qt * r) * &proj.qt);
    Ok(DensityMatrix::new_unchecked(out))
}

/// Relative-entropy S–T coherence of the trace-normalized state.
pub fn st_coherence(rho: &DensityMatrix, proj: &StProjectors) -> Result<CoherenceReport> {
    proj.check(rho)?;
    let tr = rho.trace();
    if !(tr > 0.0) {
        return Err(Error::DegenerateState(tr));
    }
    // In the S/T basis ρ̂ is the two diagonal blocks of ρ.
    let m = (proj.basis.adjoint() * rho.matrix() * &proj.basis) / crate::operator::c(tr, 0.0);
    let ns = proj.d_nuc;
    let d = m.nrows();
    let s_rho = entropy_of_spectrum(&eigvalsh_trusted(&m)?)?;
    let singlet = m.view((0, 0), (ns, ns)).into_owned();
    let triplet = m.view((ns, ns), (d - ns, d - ns)).into_owned();
    let mut hat = eigvalsh_trusted(&singlet)?;
    hat.extend(eigvalsh_trusted(&triplet)?);
    let s_rho_hat = entropy_of_spectrum(&hat)?;
    let p_s = (0..ns).map(|i| m[(i, i)].re).sum::<f64>().clamp(0.0, 1.0);
    Ok(CoherenceReport {
        c: s_rho_hat - s_rho,
        p_s,
        p_t: 1.0 - p_s,
        s_rho,
        s_rho_hat,
        bound: binary_entropy(p_s),
    })
}

/// Quantum relative entropy S(ρ‖σ) in bits; +∞ when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension { expected: rho.dim(), got: sigma.dim() });
    }
    for t in [rho.trace(), sigma.trace()] {
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(Error::Normalization(t));
        }
    }
    let minus_s_rho = -von_neumann_entropy(rho)?;
    let es = eigh(sigma.operator())?;
    let mut cross = 0.0;
    for (k, &lam) in es.values.iter().enumerate() {
        let v = es.vectors.column(k).into_owned();
        let w = rho.operator().element(&v, &v).re;
        if lam <= EIGEN_CLIP {
            if w > EIGEN_CLIP {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += w * lam.log2();
        }
    }
    Ok((minus_s_rho - cross).max(0.0))
}

fn check_complete(ops: &[Operator], dim: usize) -> Result<()> {
    let mut sum = Operator::zeros(dim);
    for k in ops {
        if k.dim() != dim {
            return Err(Error::Dimension { expected: dim, got: k.dim() });
        }
        sum = &sum + &(&k.dagger() * k);
    }
    let defect = (&sum - &Operator::identity(dim)).max_abs();
    if defect > KRAUS_TOL {
        return Err(Error::KrausCompleteness(defect));
    }
    Ok(())
}

/// Σ_n K_n ρ K_n†
pub fn apply_kraus(rho: &DensityMatrix, ops: &[Operator]) -> Result<DensityMatrix> {
    check_complete(ops, rho.dim())?;
    let mut out = Operator::zeros(rho.dim());
    for k in ops {
        out = &out + &(&(k * rho.operator()) * &k.dagger());
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Lifts nuclear Kraus operators k_n to 1_elec ⊗ k_n.
pub fn lift_nuclear_kraus(ops: &[Operator], sys: &SpinSystem) -> Result<Vec<Operator>> {
    check_complete(ops, sys.d_nuc())?;
    ops.iter().map(|k| lift_nuclear(k, sys)).collect()
}

/// Nuclear z-basis measurement of one spin-1/2 nucleus: {|⇑⟩⟨⇑|, |⇓⟩⟨⇓|}.
pub fn nuclear_z_measurement() -> Vec<Operator> {
    vec![Operator::outer(&kets::up(), &kets::up()), Operator::outer(&kets::down(), &kets::down())]
}

/// p_coh = Tr{ρ_ST ρ_TS} / (Tr{ρ_SS} Tr{ρ_TT})
pub fn legacy_pcoh(rho: &DensityMatrix, proj: &StProjectors) -> Result<f64> {
    proj.check(rho)?;
    let r = rho.operator();
    let st = &(&proj.qs * r) * &proj.qt;
    let ts = &(&proj.qt * r) * &proj.qs;
    let ss = rho.expectation(&proj.qs);
    let tt = rho.expectation(&proj.qt);
    let denom = ss * tt;
    if denom.abs() <= EIGEN_CLIP * EIGEN_CLIP.max(rho.trace() * rho.trace()) {
        return Err(Error::UndefinedMeasure(
            "p_coh needs nonzero singlet and triplet populations".into(),
        ));
    }
    Ok((&st * &ts).trace().re / denom)
}

/// The historical l1-norm measure and its normalizations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegacyL1 {
    /// Σ_j √Tr{ρ_ST |T_j⟩⟨T_j| ρ_TS}; equals Σ_j |α_s β_j| on pure states.
    pub sum: f64,
    /// `sum` scaled by 4/3 as originally published (can exceed 1).
    pub original: f64,
    /// `sum` scaled by 2/√3 so the maximally coherent state scores 1.
    pub corrected: f64,
}

pub fn legacy_l1(rho: &DensityMatrix, proj: &StProjectors) -> Result<LegacyL1> {
    proj.check(rho)?;
    let rho = rho.normalized()?;
    let r = rho.operator();
    let st = &(&proj.qs * r) * &proj.qt;
    let ts = &(&proj.qt * r) * &proj.qs;
    let id_nuc = Operator::identity(proj.d_nuc);
    let mut sum = 0.0;
    for j in [1, 0, -1] {
        let t = kets::triplet(j);
        let pj = kron(&Operator::outer(&t, &t), &id_nuc);
        let val = (&(&st * &pj) * &ts).trace().re;
        sum += val.max(0.0).sqrt();
    }
    Ok(LegacyL1 { sum, original: sum * 4.0 / 3.0, corrected: sum * 2.0 / 3f64.sqrt() })
}
