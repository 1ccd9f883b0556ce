//! Dense complex operators, density matrices and pure states.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigh::eigvalsh;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative Hermiticity tolerance, scaled by the largest entry magnitude.
pub const HERMITIAN_RTOL: f64 = 1e-10;
/// Absolute tolerance on negative eigenvalues and trace overshoot of states.
pub const PSD_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    m: CMatrix,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({}x{}) {}", self.dim(), self.dim(), self.m)
    }
}

impl Operator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Contract(format!(
                "operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim) }
    }

    /// Real diagonal operator.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            m: CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { C64::default() }),
        }
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &CVector, b: &CVector) -> Self {
        Self { m: a * b.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn dagger(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.map(|z| z * s) }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self { m: self.m.map(|z| z * s) }
    }

    /// Largest deviation from Hermiticity, max |a_ij - conj(a_ji)|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.m[(i, j)] - self.m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn hermitian_tol(&self) -> f64 {
        HERMITIAN_RTOL * self.max_abs()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= self.hermitian_tol()
    }

    /// P² = P and P = P† within the Hermiticity tolerance.
    pub fn is_projector(&self) -> bool {
        let tol = self.hermitian_tol().max(1e-12);
        let sq = self * self;
        self.hermitian_defect() <= tol && (&sq - self).max_abs() <= tol
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator { m: &self.m * &other.m - &other.m * &self.m }
    }

    /// Symmetrizes in place: (A + A†)/2. Removes round-off anti-Hermitian parts.
    pub fn hermitian_part(&self) -> Operator {
        Operator { m: (&self.m + self.m.adjoint()).map(|z| z * 0.5) }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.m * v
    }

    /// ⟨a|A|b⟩
    pub fn element(&self, a: &CVector, b: &CVector) -> C64 {
        a.dotc(&(&self.m * b))
    }

    /// Similarity transform U† A U.
    pub fn conjugate_by(&self, u: &CMatrix) -> Operator {
        Operator { m: u.adjoint() * &self.m * u }
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m + &rhs.m }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m - &rhs.m }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m * &rhs.m }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator { m: self.m + rhs.m }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator { m: self.m - rhs.m }
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator { m: self.m * rhs.m }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { m: -self.m }
    }
}

/// A Hermitian positive semidefinite operator with trace in (0, 1].
///
/// The trace is tracked rather than forced to one: radical pairs recombine,
/// so the surviving population shrinks over time.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (defect {:e})",
                op.hermitian_defect()
            )));
        }
        let tr = op.trace().re;
        if !(tr > 0.0) || tr > 1.0 + PSD_TOL {
            return Err(Error::InvalidState(format!("trace {tr} outside (0, 1]")));
        }
        let evals = eigvalsh(&op.hermitian_part())?;
        if let Some(&min) = evals.first() {
            if min < -PSD_TOL {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { op })
    }

    /// Wraps an operator known to be a valid state; only the Hermitian part is kept.
    pub(crate) fn new_unchecked(op: Operator) -> Self {
        Self { op: op.hermitian_part() }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { op: Operator::outer(psi.amplitudes(), psi.amplitudes()) }
    }

    /// Normalized maximally mixed state of dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: Operator::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    /// Copy scaled to unit trace.
    pub fn normalized(&self) -> Result<DensityMatrix> {
        let tr = self.trace();
        if !(tr > 0.0) {
            return Err(Error::DegenerateState(tr));
        }
        Ok(DensityMatrix { op: self.op.scale(1.0 / tr) })
    }

    /// Tr{ρ P}
    pub fn expectation(&self, p: &Operator) -> f64 {
        // Tr(AB) = Σ_ij A_ij B_ji
        let a = self.op.matrix();
        let b = p.matrix();
        let n = a.nrows();
        let mut acc = C64::default();
        for i in 0..n {
            for j in 0..n {
                acc += a[(i, j)] * b[(j, i)];
            }
        }
        acc.re
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amps: CVector) -> Result<Self> {
        let norm2 = amps.norm_squared();
        if (norm2 - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} differs from 1")));
        }
        Ok(Self { amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalize(amps: CVector) -> Result<Self> {
        let n = amps.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidState("zero vector cannot be normalized".into()));
        }
        Ok(Self { amps: amps / c(n, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }
}
