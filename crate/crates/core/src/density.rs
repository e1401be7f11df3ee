//! Density matrices: validation, multiqubit embedding, and partial trace.

use num_complex::Complex64;

use crate::eigen::{self, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Validation tolerances. The defaults suit unit-scale states and the
/// Jacobi solver's residuals; all are overridable.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max allowed |m[j][k] - conj(m[k][j])|.
    pub hermiticity: f64,
    /// Max allowed |Tr - 1|.
    pub trace: f64,
    /// Eigenvalues are accepted down to -psd.
    pub psd: f64,
    /// Reconstruction/orthonormality residual budget for eigensystems.
    pub reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace: 1e-10,
            psd: 1e-10,
            reconstruction: 1e-12,
        }
    }
}

/// Certified quantum state: Hermitian, unit trace, positive semidefinite
/// within the tolerances it was validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigendecomposition of the state.
    pub fn eig(&self) -> Result<EigenDecomposition> {
        eigen::eig_hermitian(&self.matrix)
    }

    /// Tr(rho^2); 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    /// Diagonal as real numbers.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.matrix[(i, i)].re).collect()
    }
}

/// Validate an arbitrary complex matrix as a density matrix. The certified
/// state stores the Hermitian part (m + m\u{2020})/2, so downstream spectral code
/// never sees the input's asymmetric roundoff.
pub fn validate_density(m: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for z in m.entries() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::BadDims {
                reason: format!("non-finite entry {z}"),
            });
        }
    }
    let deviation = m.hermiticity_deviation();
    if deviation > tol.hermiticity {
        return Err(Error::NotHermitian {
            deviation,
            tol: tol.hermiticity,
        });
    }
    let hermitian = m.hermitian_part();
    let trace = hermitian.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::TraceNotOne { trace });
    }
    let eig = eigen::eig_hermitian(&hermitian)?;
    let min_eigenvalue = eig.eigenvalues[0];
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(DensityMatrix {
        dim: hermitian.rows(),
        matrix: hermitian,
    })
}

/// Pure state |psi><psi| from an unnormalized amplitude vector.
pub fn pure_state(amplitudes: &[Complex64]) -> Result<DensityMatrix> {
    let d = amplitudes.len();
    let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq < 1e-24 {
        return Err(Error::BadDims {
            reason: "amplitude vector has (near-)zero norm".into(),
        });
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = amplitudes[i] * amplitudes[j].conj() / norm_sq;
        }
    }
    validate_density(&m, &Tolerances::default())
}

/// Maximally mixed state I/d.
pub fn maximally_mixed(d: usize) -> DensityMatrix {
    let m = ComplexMatrix::from_real_diagonal(&vec![1.0 / d as f64; d]);
    validate_density(&m, &Tolerances::default()).expect("I/d is a valid state")
}

/// Embed a d-dimensional state into m qubits: basis state j of the qudit
/// becomes the j-th binary-ordered multiqubit basis state, all other rows
/// and columns zero. Spectrum and trace are preserved exactly.
pub fn embed_qudit(rho: &DensityMatrix, qubits: usize) -> Result<DensityMatrix> {
    let capacity = 1usize << qubits;
    let d = rho.dim();
    if capacity < d {
        return Err(Error::DimensionTooSmall {
            dim: d,
            qubits,
            capacity,
        });
    }
    let mut m = ComplexMatrix::zeros(capacity, capacity);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = rho.matrix()[(i, j)];
        }
    }
    Ok(DensityMatrix {
        dim: capacity,
        matrix: m,
    })
}

/// Partial trace of an m-qubit state onto the subsystems in `keep`.
///
/// Qubits are numbered 1..=m from the most significant bit of the basis
/// index. `keep` must be a nonempty duplicate-free subset; kept qubits
/// appear in the output in increasing original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if !dim.is_power_of_two() {
        return Err(Error::NotQubitDimension { dim });
    }
    let qubits = dim.trailing_zeros() as usize;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let valid = !kept.is_empty()
        && kept.len() == keep.len()
        && kept.iter().all(|&k| (1..=qubits).contains(&k));
    if !valid {
        return Err(Error::BadSubsystemIndex {
            keep: keep.to_vec(),
            qubits,
        });
    }

    // Bit position (from the least significant end) of qubit k.
    let bit_of = |k: usize| qubits - k;
    let kept_bits: Vec<usize> = kept.iter().map(|&k| bit_of(k)).collect();
    let traced_bits: Vec<usize> = (1..=qubits)
        .filter(|k| !kept.contains(k))
        .map(bit_of)
        .collect();

    // Pack the listed bits of `index`, first listed bit most significant.
    let pack = |index: usize, bits: &[usize]| -> usize {
        bits.iter()
            .fold(0usize, |acc, &b| (acc << 1) | ((index >> b) & 1))
    };

    let out_dim = 1usize << kept.len();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..dim {
        let ki = pack(i, &kept_bits);
        let ti = pack(i, &traced_bits);
        for j in 0..dim {
            if pack(j, &traced_bits) == ti {
                out[(ki, pack(j, &kept_bits))] += rho.matrix()[(i, j)];
            }
        }
    }
    validate_density(&out, &Tolerances::default())
}

/// Pad a state with zero rows/columns up to dimension `n`; nonzero spectrum
/// is unchanged, so every entropy of the padded state equals the original's.
pub fn pad_with_zeros(rho: &DensityMatrix, n: usize) -> Result<ComplexMatrix> {
    let d = rho.dim();
    if n < d {
        return Err(Error::DimMismatch {
            expected: d,
            got: n,
        });
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = rho.matrix()[(i, j)];
        }
    }
    Ok(m)
}
