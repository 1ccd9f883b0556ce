//! Fixtures shared by the kernel benchmarks.

use radpair::{initial_state, DensityMatrix, HamiltonianSpec, HyperfineTensor, Operator};

/// A single-nucleus compass Hamiltonian with a generic anisotropic tensor.
pub fn compass_fixture() -> (HamiltonianSpec, Operator, DensityMatrix) {
    let spec = HamiltonianSpec::compass(HyperfineTensor::diagonal(7.3, 2.1, 4.4), 1.0, 0.3, -1.7);
    let h = spec.hamiltonian().expect("valid fixture");
    let rho0 = initial_state(&spec.system);
    (spec, h, rho0)
}
