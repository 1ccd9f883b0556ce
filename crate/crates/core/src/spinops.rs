//! Tensor-product spin algebra and singlet/triplet projectors.
//!
//! Tensor slots are always ordered (electron 1, electron 2, nucleus 1, …,
//! nucleus M). Within one spin the basis runs m = I, I-1, …, -I, so for an
//! electron index 0 is ↑ and index 1 is ↓.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, CVector, Operator};

/// Roster of nuclear spins coupled to a radical pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    nuclear_spins: Vec<f64>,
}

impl SpinSystem {
    pub fn new(nuclear_spins: Vec<f64>) -> Result<Self> {
        for &i in &nuclear_spins {
            multiplicity(i)?;
        }
        Ok(Self { nuclear_spins })
    }

    /// Two electrons, no nuclei.
    pub fn bare() -> Self {
        Self { nuclear_spins: Vec::new() }
    }

    /// Two electrons and one spin-1/2 nucleus (d = 8).
    pub fn single_proton() -> Self {
        Self { nuclear_spins: vec![0.5] }
    }

    pub fn nuclear_spins(&self) -> &[f64] {
        &self.nuclear_spins
    }

    pub fn n_nuclei(&self) -> usize {
        self.nuclear_spins.len()
    }

    pub fn d_nuc(&self) -> usize {
        self.nuclear_spins.iter().map(|&i| multiplicity(i).unwrap()).product()
    }

    pub fn dim(&self) -> usize {
        4 * self.d_nuc()
    }

    fn slot_dims(&self) -> Vec<usize> {
        let mut dims = vec![2, 2];
        dims.extend(self.nuclear_spins.iter().map(|&i| multiplicity(i).unwrap()));
        dims
    }
}

/// 2I + 1, validating that I is a positive half-integer.
pub fn multiplicity(spin: f64) -> Result<usize> {
    let twice = 2.0 * spin;
    if !spin.is_finite() || spin <= 0.0 || (twice - twice.round()).abs() > 1e-12 {
        return Err(Error::InvalidSpin(spin));
    }
    Ok(twice.round() as usize + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Electron {
    First,
    Second,
}

/// Cartesian spin matrices for one spin.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub x: Operator,
    pub y: Operator,
    pub z: Operator,
}

impl SpinMatrices {
    pub fn axis(&self, axis: Axis) -> &Operator {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }
}

/// Spin-I matrices from the ladder operators: ⟨m+1|I₊|m⟩ = √(I(I+1) − m(m+1)).
pub fn spin_matrices(spin: f64) -> Result<SpinMatrices> {
    let n = multiplicity(spin)?;
    let m = |k: usize| spin - k as f64;
    let mut plus = CMatrix::zeros(n, n);
    for k in 1..n {
        let mk = m(k);
        plus[(k - 1, k)] = c((spin * (spin + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let x = (&plus + &minus).map(|z| z * 0.5);
    let y = (&plus - &minus).map(|z| z * c(0.0, -0.5));
    let z = CMatrix::from_fn(n, n, |i, j| if i == j { c(m(i), 0.0) } else { c(0.0, 0.0) });
    Ok(SpinMatrices {
        x: Operator::from_matrix_unchecked(x),
        y: Operator::from_matrix_unchecked(y),
        z: Operator::from_matrix_unchecked(z),
    })
}

/// Tensor product A ⊗ B.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator::from_matrix_unchecked(a.matrix().kronecker(b.matrix()))
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

fn embed(op: &Operator, slot: usize, dims: &[usize]) -> Operator {
    let mut out: Option<Operator> = None;
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == slot { op.clone() } else { Operator::identity(d) };
        out = Some(match out {
            None => factor,
            Some(acc) => kron(&acc, &factor),
        });
    }
    out.expect("at least two slots")
}

fn electron_matrices() -> SpinMatrices {
    spin_matrices(0.5).expect("spin-1/2 is valid")
}

pub fn embed_electron(which: Electron, axis: Axis, sys: &SpinSystem) -> Operator {
    let slot = match which {
        Electron::First => 0,
        Electron::Second => 1,
    };
    embed(electron_matrices().axis(axis), slot, &sys.slot_dims())
}

pub fn embed_nucleus(index: usize, axis: Axis, sys: &SpinSystem) -> Result<Operator> {
    let spin = *sys.nuclear_spins.get(index).ok_or_else(|| {
        Error::Contract(format!("nucleus index {index} out of range ({} nuclei)", sys.n_nuclei()))
    })?;
    let mats = spin_matrices(spin)?;
    Ok(embed(mats.axis(axis), index + 2, &sys.slot_dims()))
}

/// Lifts an operator on the nuclear space to 1_elec ⊗ k.
pub fn lift_nuclear(op: &Operator, sys: &SpinSystem) -> Result<Operator> {
    if op.dim() != sys.d_nuc() {
        return Err(Error::Dimension { expected: sys.d_nuc(), got: op.dim() });
    }
    Ok(kron(&Operator::identity(4), op))
}

/// 𝐬₁·𝐬₂ on the two-electron space.
fn electron_dot_4() -> Operator {
    let s = electron_matrices();
    let mut acc = Operator::zeros(4);
    for axis in Axis::ALL {
        acc = acc + kron(s.axis(axis), s.axis(axis));
    }
    acc
}

/// 𝐬₁·𝐬₂ ⊗ 1_nuc.
pub fn electron_dot(sys: &SpinSystem) -> Operator {
    kron(&electron_dot_4(), &Operator::identity(sys.d_nuc()))
}

/// Q_S = (1/4 − 𝐬₁·𝐬₂) ⊗ 1_nuc.
pub fn singlet_projector(sys: &SpinSystem) -> Operator {
    singlet_projector_dim(sys.dim())
}

/// Q_T = (3/4 + 𝐬₁·𝐬₂) ⊗ 1_nuc.
pub fn triplet_projector(sys: &SpinSystem) -> Operator {
    triplet_projector_dim(sys.dim())
}

/// Q_S for total dimension `dim` = 4·d_nuc. Only d_nuc matters, not how the
/// nuclear space factorizes.
pub fn singlet_projector_dim(dim: usize) -> Operator {
    let qs = &Operator::identity(4).scale(0.25) - &electron_dot_4();
    kron(&qs, &Operator::identity(dim / 4))
}

pub fn triplet_projector_dim(dim: usize) -> Operator {
    let qt = &Operator::identity(4).scale(0.75) + &electron_dot_4();
    kron(&qt, &Operator::identity(dim / 4))
}

/// Electron-pair basis kets in the (↑↑, ↑↓, ↓↑, ↓↓) product basis.
pub mod kets {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn v(a: [f64; 4]) -> CVector {
        CVector::from_iterator(4, a.iter().map(|&x| c(x, 0.0)))
    }

    /// |s⟩ = (|↑↓⟩ − |↓↑⟩)/√2
    pub fn singlet() -> CVector {
        v([0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
    }

    /// |t_m⟩ for m ∈ {1, 0, −1}.
    pub fn triplet(m: i32) -> CVector {
        match m {
            1 => v([1.0, 0.0, 0.0, 0.0]),
            0 => v([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]),
            -1 => v([0.0, 0.0, 0.0, 1.0]),
            _ => panic!("triplet projection must be -1, 0 or 1, got {m}"),
        }
    }

    /// Standard basis vector `index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> CVector {
        let mut out = CVector::zeros(dim);
        out[index] = c(1.0, 0.0);
        out
    }

    /// Nuclear spin-1/2 up/down.
    pub fn up() -> CVector {
        basis(2, 0)
    }

    pub fn down() -> CVector {
        basis(2, 1)
    }
}

/// Unitary whose columns are |s⟩⊗|n⟩ (n = 0..d_nuc) followed by
/// |t₁⟩⊗|n⟩, |t₀⟩⊗|n⟩, |t₋₁⟩⊗|n⟩. In this basis Q_S and Q_T are diagonal.
pub fn singlet_triplet_basis(dim: usize) -> CMatrix {
    let d_nuc = dim / 4;
    let elec = [kets::singlet(), kets::triplet(1), kets::triplet(0), kets::triplet(-1)];
    let mut u = CMatrix::zeros(dim, dim);
    let mut col = 0;
    for e in &elec {
        for n in 0..d_nuc {
            let v = kron_vec(e, &kets::basis(d_nuc, n));
            u.set_column(col, &v);
            col += 1;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigh::eigvalsh;
    use crate::operator::C64;
    use approx::assert_abs_diff_eq;

    fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let s = spin_matrices(0.5).unwrap();
        assert!(close(&s.z, &Operator::diag(&[0.5, -0.5]), 0.0));
        assert_eq!(s.x.get(0, 1), c(0.5, 0.0));
        assert_eq!(s.x.get(1, 0), c(0.5, 0.0));
        assert_eq!(s.x.get(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn spin_one_matrices() {
        let s = spin_matrices(1.0).unwrap();
        assert!(close(&s.z, &Operator::diag(&[1.0, 0.0, -1.0]), 0.0));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            assert_abs_diff_eq!(s.x.get(i, j).re, r, epsilon = 1e-15);
        }
    }

    #[test]
    fn commutation_and_casimir() {
        for spin in [0.5, 1.0, 1.5, 2.0] {
            let s = spin_matrices(spin).unwrap();
            let n = s.x.dim();
            let i = C64::new(0.0, 1.0);
            assert!(close(&s.x.commutator(&s.y), &s.z.scale_c(i), 1e-13));
            assert!(close(&s.y.commutator(&s.z), &s.x.scale_c(i), 1e-13));
            assert!(close(&s.z.commutator(&s.x), &s.y.scale_c(i), 1e-13));
            let cas = &(&(&s.x * &s.x) + &(&s.y * &s.y)) + &(&s.z * &s.z);
            assert!(close(&cas, &Operator::identity(n).scale(spin * (spin + 1.0)), 1e-13));
        }
    }

    #[test]
    fn invalid_spin() {
        for bad in [0.0, -0.5, 0.3, f64::NAN] {
            assert!(matches!(spin_matrices(bad), Err(Error::InvalidSpin(_))));
        }
        assert!(SpinSystem::new(vec![0.5, 0.75]).is_err());
    }

    #[test]
    fn kron_examples() {
        assert!(close(&kron(&Operator::identity(2), &Operator::identity(2)), &Operator::identity(4), 0.0));
        let z = Operator::diag(&[1.0, -1.0]);
        assert!(close(&kron(&z, &Operator::identity(2)), &Operator::diag(&[1.0, 1.0, -1.0, -1.0]), 0.0));
        let sx = spin_matrices(0.5).unwrap().x;
        let xx = kron(&sx, &sx);
        let upup = kets::basis(4, 0);
        let out = xx.apply(&upup);
        let expected = kets::basis(4, 3) * c(0.25, 0.0);
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn electron_embedding() {
        let bare = SpinSystem::bare();
        let sz = spin_matrices(0.5).unwrap().z;
        assert!(close(
            &embed_electron(Electron::First, Axis::Z, &bare),
            &kron(&sz, &Operator::identity(2)),
            0.0
        ));
        let sys = SpinSystem::new(vec![0.5, 1.0]).unwrap();
        let a = embed_electron(Electron::First, Axis::X, &sys);
        let b = embed_electron(Electron::Second, Axis::Y, &sys);
        assert!(a.commutator(&b).max_abs() < 1e-15);
        let z1 = embed_electron(Electron::First, Axis::Z, &sys);
        assert_abs_diff_eq!((&z1 * &z1).trace().re, sys.dim() as f64 / 4.0, epsilon = 1e-13);
    }

    #[test]
    fn nucleus_embedding() {
        let sys = SpinSystem::new(vec![0.5, 1.0]).unwrap();
        let iz = embed_nucleus(1, Axis::Z, &sys).unwrap();
        assert_eq!(iz.dim(), 24);
        assert_abs_diff_eq!((&iz * &iz).trace().re, 4.0 * 2.0 * 2.0, epsilon = 1e-12);
        assert!(embed_nucleus(2, Axis::Z, &sys).is_err());
    }

    #[test]
    fn projector_traces() {
        let bare = SpinSystem::bare();
        assert_abs_diff_eq!(singlet_projector(&bare).trace().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(triplet_projector(&bare).trace().re, 3.0, epsilon = 1e-14);
        let one = SpinSystem::single_proton();
        assert_abs_diff_eq!(singlet_projector(&one).trace().re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(triplet_projector(&one).trace().re, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn projector_action_on_kets() {
        let qs = singlet_projector(&SpinSystem::bare());
        assert!((qs.apply(&kets::singlet()) - kets::singlet()).norm() < 1e-15);
        assert!(qs.apply(&kets::triplet(0)).norm() < 1e-15);
    }

    #[test]
    fn projector_algebra() {
        for spins in [vec![], vec![0.5], vec![1.0], vec![0.5, 0.5], vec![1.5], vec![0.5, 0.5, 0.5]] {
            let sys = SpinSystem::new(spins).unwrap();
            let qs = singlet_projector(&sys);
            let qt = triplet_projector(&sys);
            let d = sys.dim();
            assert!(close(&(&qs * &qs), &qs, 1e-13));
            assert!(close(&(&qt * &qt), &qt, 1e-13));
            assert!((&qs * &qt).max_abs() < 1e-13);
            assert!((&qt * &qs).max_abs() < 1e-13);
            assert!(close(&(&qs + &qt), &Operator::identity(d), 1e-13));
            assert!(qs.is_projector() && qt.is_projector());
            for ev in eigvalsh(&qs).unwrap() {
                assert!(ev.abs() < 1e-12 || (ev - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singlet_triplet_basis_is_unitary_and_diagonalizes_qs() {
        let u = singlet_triplet_basis(8);
        let id = CMatrix::identity(8, 8);
        assert!((u.adjoint() * &u - id).iter().all(|z| z.norm() < 1e-14));
        let qs = singlet_projector_dim(8).conjugate_by(&u);
        assert!(close(&qs, &Operator::diag(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 1e-14));
    }

    #[test]
    fn dimension_bookkeeping() {
        let sys = SpinSystem::new(vec![0.5, 1.0, 1.5]).unwrap();
        assert_eq!(sys.d_nuc(), 2 * 3 * 4);
        assert_eq!(sys.dim(), 96);
        assert_eq!(SpinSystem::bare().dim(), 4);
    }
}
