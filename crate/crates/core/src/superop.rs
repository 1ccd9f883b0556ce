//! Superoperators acting on row-major vectorized density matrices.
//!
//! With vec(X)[i·d + j] = X_ij we have vec(A X B) = (A ⊗ Bᵀ) vec(X).

use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, CVector, Operator, C64};

/// A d²×d² matrix acting on vectorized d×d operators.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    m: CMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, m: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension { expected: n, got: m.nrows() });
        }
        Ok(Self { dim, m })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, m: CMatrix::identity(dim * dim, dim * dim) }
    }

    /// X ↦ A X B
    pub fn sandwich(a: &Operator, b: &Operator) -> Self {
        Self { dim: a.dim(), m: a.matrix().kronecker(&b.matrix().transpose()) }
    }

    /// Generator L[R] = −i[H, R] − K_d (Q_S R Q_T + Q_T R Q_S).
    pub fn liouvillian(h: &Operator, k_d: f64, qs: &Operator, qt: &Operator) -> Self {
        let d = h.dim();
        let id = CMatrix::identity(d, d);
        let hm = h.matrix();
        let mut m = (hm.kronecker(&id) - id.kronecker(&hm.transpose())) * c(0.0, -1.0);
        if k_d != 0.0 {
            let deph = qs.matrix().kronecker(&qt.matrix().transpose())
                + qt.matrix().kronecker(&qs.matrix().transpose());
            m -= deph * c(k_d, 0.0);
        }
        Self { dim: d, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, m: &self.m * c(s, 0.0) }
    }

    pub fn apply(&self, x: &Operator) -> Operator {
        unvec(&(&self.m * vec(x)), self.dim)
    }

    pub fn apply_vec(&self, v: &CVector) -> CVector {
        &self.m * v
    }

    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator { dim: self.dim, m: &self.m * &other.m }
    }

    /// exp(t·L) by scaling and squaring.
    pub fn exp(&self, t: f64) -> Superoperator {
        Superoperator { dim: self.dim, m: expm(&(&self.m * c(t, 0.0))) }
    }

    /// Solves (s·Id − L) X = Y for X.
    pub fn resolvent_solve(&self, s: f64, y: &Operator) -> Result<Operator> {
        let n = self.dim * self.dim;
        let a = CMatrix::identity(n, n) * c(s, 0.0) - &self.m;
        let x = a
            .lu()
            .solve(&vec(y))
            .ok_or_else(|| Error::Numerical("singular resolvent system".into()))?;
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite resolvent solution".into()));
        }
        Ok(unvec(&x, self.dim))
    }

    /// Largest |Tr(S[E_ij]) − δ_ij| over matrix units E_ij.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for col in 0..d * d {
            let mut tr = C64::default();
            for i in 0..d {
                tr += self.m[(i * d + i, col)];
            }
            let expected = if col / d == col % d { 1.0 } else { 0.0 };
            worst = worst.max((tr - c(expected, 0.0)).norm());
        }
        worst
    }
}

pub fn vec(x: &Operator) -> CVector {
    let d = x.dim();
    CVector::from_fn(d * d, |k, _| x.get(k / d, k % d))
}

pub fn unvec(v: &CVector, d: usize) -> Operator {
    Operator::from_matrix_unchecked(CMatrix::from_fn(d, d, |i, j| v[i * d + j]))
}

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The scaled matrix has 1-norm ≤ 1/2 and the series runs until the next
/// term is below 1e-18 relative, so the truncation error is far under 1e-12.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a * c(0.5f64.powi(squarings), 0.0);

    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=40 {
        term = (&term * &scaled) * c(1.0 / k as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
