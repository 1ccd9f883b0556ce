#![allow(dead_code)]

use nalgebra::DMatrix;
use radpair::coherence::StProjectors;
use radpair::operator::{CMatrix, CVector};
use radpair::{DensityMatrix, Operator, PureState, SpinSystem, C64};
use rand::Rng;

/// System with total dimension 4, 8 or 16 built from spin-1/2 nuclei.
pub fn system_of_dim(dim: usize) -> SpinSystem {
    let n = match dim {
        4 => 0,
        8 => 1,
        16 => 2,
        _ => panic!("unsupported dimension {dim}"),
    };
    SpinSystem::new(vec![0.5; n]).unwrap()
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// ρ = G G† / Tr with G of shape d × rank.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(Operator::new(m / C64::new(tr, 0.0)).unwrap()).unwrap()
}

pub fn random_pure<R: Rng>(rng: &mut R, dim: usize) -> PureState {
    let v: CVector = gaussian_matrix(rng, dim, 1).column(0).into_owned();
    PureState::normalize(v).unwrap()
}

/// Random complete set of `count` Kraus operators on a space of dimension d,
/// cut from an isometry obtained by QR.
pub fn random_kraus<R: Rng>(rng: &mut R, d: usize, count: usize) -> Vec<Operator> {
    let q = gaussian_matrix(rng, d * count, d).qr().q();
    (0..count)
        .map(|i| Operator::new(q.rows(i * d, d).into_owned()).unwrap())
        .collect()
}

/// Von Neumann entropy in bits through nalgebra's Hermitian eigensolver.
pub fn entropy_oracle(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&x| x > 1e-14)
        .map(|&x| -x * x.log2())
        .sum()
}

/// S(ρ̂) − S(ρ) computed with dense projector products.
pub fn coherence_oracle(rho: &DensityMatrix, proj: &StProjectors) -> f64 {
    let r = rho.matrix() / C64::new(rho.trace(), 0.0);
    let qs = proj.qs.matrix();
    let qt = proj.qt.matrix();
    let hat = qs * &r * qs + qt * &r * qt;
    entropy_oracle(&hat) - entropy_oracle(&r)
}

pub fn h2(p: f64) -> f64 {
    let f = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    f(p) + f(1.0 - p)
}
