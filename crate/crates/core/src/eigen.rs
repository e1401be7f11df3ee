//! Complex Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Dimensions in this crate stay at or below ~64, where Jacobi is simple,
//! deterministic, and accurate to near machine precision. Each rotation is
//! a two-sided unitary Givens transform that annihilates one off-diagonal
//! pair; sweeps run in a fixed row-major order until the off-diagonal
//! Frobenius norm drops below [`OFF_DIAGONAL_TOL`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Maximum number of cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 64;

/// Gap below which neighboring eigenvalues are treated as a degenerate
/// cluster and their eigenvectors re-orthonormalized deterministically.
const DEGENERACY_GAP: f64 = 1e-10;

/// Hermiticity tolerance applied to solver inputs.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigensystem of a Hermitian matrix: `matrix = V diag(eigenvalues) V\u{2020}`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(eigenvalues)) V\u{2020}` for a real function of the spectrum.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Max-norm residual of `V diag(lambda) V\u{2020} - h`.
    pub fn reconstruction_residual(&self, h: &ComplexMatrix) -> f64 {
        self.assemble(|x| x).max_abs_diff(h)
    }

    /// Max-norm of `V\u{2020}V - I`.
    pub fn orthonormality_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        let n = self.eigenvalues.len();
        v.adjoint().mul(v).max_abs_diff(&ComplexMatrix::identity(n))
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix, deterministic for identical
/// input: fixed sweep order, ascending eigenvalues, degenerate clusters
/// re-orthonormalized in index order, and every eigenvector phase-fixed so
/// its first component of largest modulus is real positive.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tol: HERMITICITY_TOL,
        });
    }

    let n = h.rows();
    // Work on the Hermitian part so roundoff in the input cannot leak
    // asymmetry into the sweeps.
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: v,
        });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= OFF_DIAGONAL_TOL {
        return Err(Error::NoConvergence {
            off_norm: off_diagonal_norm(&a),
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }

    reorthonormalize_clusters(&eigenvalues, &mut vectors);
    for k in 0..n {
        fix_column_phase(&mut vectors, k);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// One two-sided Givens rotation zeroing the (p, q) element of `a`,
/// accumulated into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = a[(p, q)];
    let b = beta.norm();
    if b == 0.0 {
        return;
    }
    let u = beta / b; // unit phase of the off-diagonal element
    let alpha = a[(p, p)].re;
    let gamma = a[(q, q)].re;
    let theta = (gamma - alpha) / (2.0 * b);
    // Smaller-magnitude root of t^2 + 2*theta*t - 1 = 0.
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // A <- A J with J[p][p]=c, J[p][q]=s*u, J[q][p]=-s*conj(u), J[q][q]=c.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * (u.conj() * s);
        a[(i, q)] = aip * (u * s) + aiq * c;
    }
    // A <- J\u{2020} A.
    for i in 0..n {
        let api = a[(p, i)];
        let aqi = a[(q, i)];
        a[(p, i)] = api * c - aqi * (u * s);
        a[(q, i)] = api * (u.conj() * s) + aqi * c;
    }
    // The rotation zeroes (p, q) in exact arithmetic; make it exact and keep
    // the matrix Hermitian to the bit.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    a[(p, p)] = Complex64::new(app, 0.0);
    a[(q, q)] = Complex64::new(aqq, 0.0);

    // V <- V J.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * (u.conj() * s);
        v[(i, q)] = vip * (u * s) + viq * c;
    }
}

/// Modified Gram-Schmidt over each degenerate cluster, in index order, so a
/// degenerate spectrum still yields a reproducible basis.
fn reorthonormalize_clusters(eigenvalues: &[f64], vectors: &mut ComplexMatrix) {
    let n = eigenvalues.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                for j in start..k {
                    let mut overlap = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        overlap += vectors[(i, j)].conj() * vectors[(i, k)];
                    }
                    for i in 0..n {
                        let adj = vectors[(i, j)] * overlap;
                        vectors[(i, k)] -= adj;
                    }
                }
                let norm: f64 = (0..n)
                    .map(|i| vectors[(i, k)].norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                for i in 0..n {
                    vectors[(i, k)] /= norm;
                }
            }
        }
        start = end;
    }
}

/// Multiply column `k` by a unit phase so its first component of largest
/// modulus is real positive.
fn fix_column_phase(vectors: &mut ComplexMatrix, k: usize) {
    let n = vectors.rows();
    let mut pivot = 0;
    let mut best = 0.0;
    for i in 0..n {
        let m = vectors[(i, k)].norm();
        if m > best {
            best = m;
            pivot = i;
        }
    }
    if best == 0.0 {
        return;
    }
    let phase = vectors[(pivot, k)].conj() / best;
    for i in 0..n {
        vectors[(i, k)] *= phase;
    }
    let re = vectors[(pivot, k)].re;
    vectors[(pivot, k)] = Complex64::new(re, 0.0);
}

/// `V diag(f(lambda)) V\u{2020}` for Hermitian input; the caller's `f` must be
/// finite on the spectrum it is given.
pub fn matrix_function(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    for &lambda in &eig.eigenvalues {
        let y = f(lambda);
        if !y.is_finite() {
            return Err(Error::DomainError { eigenvalue: lambda });
        }
    }
    Ok(eig.assemble(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut CounterRng) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (re, im) = rng.normal_pair();
                g[(i, j)] = c(re, im);
            }
        }
        g.hermitian_part()
    }

    #[test]
    fn diagonal_input_sorts_ascending() {
        let h = ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3]);
        let eig = eig_hermitian(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.2, 0.3, 0.5]);
        assert!(eig.reconstruction_residual(&h) < 1e-14);
    }

    #[test]
    fn flip_matrix_has_plus_minus_one() {
        let h = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let eig = eig_hermitian(&h).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(eig.orthonormality_residual() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for stream in 0..8 {
            let mut rng = CounterRng::from_parts(17, stream);
            let h = random_hermitian(6, &mut rng);
            let eig = eig_hermitian(&h).unwrap();
            assert!(
                eig.reconstruction_residual(&h) <= 1e-12,
                "residual {} on stream {stream}",
                eig.reconstruction_residual(&h)
            );
            assert!(eig.orthonormality_residual() <= 1e-12);
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn complex_off_diagonal_2x2_known_spectrum() {
        // [[1, i],[-i, 1]] has eigenvalues 0 and 2.
        let h = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
        );
        let eig = eig_hermitian(&h).unwrap();
        assert!((eig.eigenvalues[0] - 0.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn deterministic_across_calls() {
        let mut rng = CounterRng::from_parts(23, 0);
        let h = random_hermitian(5, &mut rng);
        let a = eig_hermitian(&h).unwrap();
        let b = eig_hermitian(&h).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn degenerate_spectrum_gets_orthonormal_basis() {
        // Projector onto a 2-dimensional subspace: eigenvalues (0, 1, 1).
        let h = ComplexMatrix::from_real_rows(&[
            vec![0.5, 0.5, 0.0],
            vec![0.5, 0.5, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let eig = eig_hermitian(&h).unwrap();
        assert!((eig.eigenvalues[0]).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[2] - 1.0).abs() < 1e-14);
        assert!(eig.orthonormality_residual() < 1e-13);
        assert!(eig.reconstruction_residual(&h) < 1e-13);
    }

    #[test]
    fn phase_fix_makes_pivot_real_positive() {
        let mut rng = CounterRng::from_parts(31, 4);
        let h = random_hermitian(4, &mut rng);
        let eig = eig_hermitian(&h).unwrap();
        for k in 0..4 {
            let mut best = 0.0;
            let mut pivot = 0;
            for i in 0..4 {
                let m = eig.eigenvectors[(i, k)].norm();
                if m > best {
                    best = m;
                    pivot = i;
                }
            }
            let z = eig.eigenvectors[(pivot, k)];
            assert!(z.im == 0.0 && z.re > 0.0, "column {k} pivot {z}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn matrix_function_identity_returns_input() {
        let mut rng = CounterRng::from_parts(5, 9);
        let h = random_hermitian(4, &mut rng);
        let back = matrix_function(&h, |x| x).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn matrix_function_log_of_half_identity() {
        let h = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        let m = matrix_function(&h, f64::ln).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[-(2.0f64.ln()), -(2.0f64.ln())]);
        assert!(m.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn matrix_function_xlnx_convention() {
        let h = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let m = matrix_function(&h, |x| if x > 0.0 { x * x.ln() } else { 0.0 }).unwrap();
        assert!(m.max_norm() < 1e-15);
    }

    #[test]
    fn matrix_function_rejects_domain_escape() {
        let h = ComplexMatrix::from_real_diagonal(&[1.0, -0.5]);
        assert!(matches!(
            matrix_function(&h, f64::ln),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn composed_spectra_match_composed_functions() {
        let mut rng = CounterRng::from_parts(77, 0);
        let h = random_hermitian(5, &mut rng);
        let f = |x: f64| x * x;
        let g = |x: f64| x + 3.0;
        let lhs = matrix_function(&h, |x| f(g(x))).unwrap();
        let inner = matrix_function(&h, g).unwrap();
        let rhs = matrix_function(&inner, f).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }
}
