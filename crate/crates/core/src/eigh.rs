//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Every matrix in this crate is at most a few dozen rows, where Jacobi is
//! both fast enough and accurate to the last few ulps.

use crate::error::{Error, Result};
use crate::operator::{CMatrix, Operator, C64};

/// Convergence threshold on the off-diagonal Frobenius norm, relative to ‖A‖_F.
pub const JACOBI_RTOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    /// V diag(λ) V†
    pub fn reconstruct(&self) -> Operator {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        Operator::from_matrix_unchecked(scaled * self.vectors.adjoint())
    }

    /// Applies f to the spectrum: V diag(f(λ)) V†.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Full eigendecomposition of a Hermitian operator.
pub fn eigh(a: &Operator) -> Result<Eigh> {
    check_hermitian(a)?;
    let (values, vectors) = jacobi(a.matrix(), true)?;
    Ok(Eigh { values, vectors: vectors.expect("vectors requested") })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(a: &Operator) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    jacobi(a.matrix(), false).map(|(v, _)| v)
}

/// Eigenvalues of a matrix the caller guarantees to be Hermitian. Only the
/// upper triangle and real diagonal are trusted.
pub(crate) fn eigvalsh_trusted(a: &CMatrix) -> Result<Vec<f64>> {
    jacobi(a, false).map(|(v, _)| v)
}

fn check_hermitian(a: &Operator) -> Result<()> {
    let defect = a.hermitian_defect();
    if defect > a.hermitian_tol() {
        return Err(Error::Contract(format!(
            "eigh requires a Hermitian matrix (defect {defect:e})"
        )));
    }
    Ok(())
}

fn jacobi(input: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let n = input.nrows();
    // Row-major working copy, symmetrized from the upper triangle.
    let mut a = vec![C64::default(); n * n];
    for i in 0..n {
        a[i * n + i] = C64::new(input[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (input[(i, j)] + input[(j, i)].conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = if want_vectors {
        let mut v = vec![C64::default(); n * n];
        for i in 0..n {
            v[i * n + i] = C64::new(1.0, 0.0);
        }
        Some(v)
    } else {
        None
    };

    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = JACOBI_RTOL * fro;
    let skip = 1e-15 * fro / n.max(1) as f64;

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[i * n + j].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut converged = fro == 0.0 || off_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let g = a[p * n + q];
                let absg = g.norm();
                if absg <= skip {
                    a[p * n + q] = C64::default();
                    a[q * n + p] = C64::default();
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * absg);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let e = g / absg;
                let ebar = e.conj();

                // A <- A G
                for r in 0..n {
                    let x = a[r * n + p];
                    let y = a[r * n + q];
                    a[r * n + p] = x * cs - y * (ebar * sn);
                    a[r * n + q] = x * sn + y * (ebar * cs);
                }
                // A <- G† A
                for col in 0..n {
                    let x = a[p * n + col];
                    let y = a[q * n + col];
                    a[p * n + col] = x * cs - y * (e * sn);
                    a[q * n + col] = x * sn + y * (e * cs);
                }
                a[p * n + q] = C64::default();
                a[q * n + p] = C64::default();
                a[p * n + p] = C64::new(app - t * absg, 0.0);
                a[q * n + q] = C64::new(aqq + t * absg, 0.0);

                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let x = v[r * n + p];
                        let y = v[r * n + q];
                        v[r * n + p] = x * cs - y * (ebar * sn);
                        v[r * n + q] = x * sn + y * (ebar * cs);
                    }
                }
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, n, |r, col| v[r * n + order[col]]));
    Ok((values, vectors))
}
