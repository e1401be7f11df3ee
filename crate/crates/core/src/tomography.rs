//! Probability representation of qudit states.
//!
//! A measurement basis rotation `u` turns a state into the probability
//! vector `w_m = <m| u rho u^dag |m>`. Equivalently, with the
//! eigendecomposition `rho = u0 diag(lambda) u0^dag`, `w = |u u0|^2 lambda`
//! where `|a|^2` squares entry moduli; that matrix is doubly stochastic, so
//! every tomogram majorizes the spectrum and its Shannon entropy can never
//! drop below the von Neumann entropy. The minimizer in this module drives
//! the entropy down to that floor over a Givens-product parameterization of
//! the unitary group.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::density::DensityMatrix;
use crate::entropy::SUPPORT_TOL;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::optim::{nelder_mead, SimplexOptions};
use crate::prob::ProbabilityVector;
use crate::rng::{CounterRng, SeedSpec};

/// Max allowed deviation of u^dag u from the identity.
pub const UNITARY_TOL: f64 = 1e-10;

/// Certified unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        let deviation = matrix
            .adjoint()
            .mul(&matrix)
            .max_abs_diff(&ComplexMatrix::identity(n));
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { dim: n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dim: n,
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Measurement statistics of a state in a rotated basis.
#[derive(Debug, Clone)]
pub struct Tomogram {
    /// Outcome probabilities w(m | u).
    pub probabilities: ProbabilityVector,
    /// The basis rotation that produced them.
    pub basis: UnitaryMatrix,
}

/// Outcome probabilities in the rotated basis: the real diagonal of
/// `u rho u^dag`, with round-off clamped by the probability tolerance.
pub fn tomogram(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<Tomogram> {
    if rho.dim() != u.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: u.dim(),
        });
    }
    let rotated = u.matrix().mul(rho.matrix()).mul(&u.matrix().adjoint());
    let diag: Vec<f64> = (0..rho.dim()).map(|m| rotated[(m, m)].re).collect();
    Ok(Tomogram {
        probabilities: ProbabilityVector::new(diag)?,
        basis: u.clone(),
    })
}

/// Same probabilities by the spectral route: eigendecompose the state and
/// apply the unistochastic matrix of `u * u0` to the eigenvalue vector.
/// Independent of [`tomogram`] except for sharing the eigensolver.
pub fn tomogram_spectral(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<Tomogram> {
    if rho.dim() != u.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: u.dim(),
        });
    }
    let eig = rho.eig()?;
    let lambda: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < 0.0 { 0.0 } else { l })
        .collect();
    let product = u.matrix().mul(&eig.eigenvectors);
    let n = rho.dim();
    let mut w = vec![0.0; n];
    for m in 0..n {
        for k in 0..n {
            w[m] += product[(m, k)].norm_sqr() * lambda[k];
        }
    }
    Ok(Tomogram {
        probabilities: ProbabilityVector::new(w)?,
        basis: u.clone(),
    })
}

/// Entrywise squared moduli |u_jk|^2; doubly stochastic for unitary input.
pub fn unistochastic(u: &UnitaryMatrix) -> RealMatrix {
    let n = u.dim();
    let mut b = RealMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            b[(j, k)] = u.matrix()[(j, k)].norm_sqr();
        }
    }
    b
}

/// Joint probability table P(m, i) = w_i(m) * weight_i over a finite set of
/// measurement bases. Rows index outcomes, columns index bases; column sums
/// return the weights and the total mass is one.
pub fn joint_probability(
    tomograms: &[Tomogram],
    weights: &ProbabilityVector,
) -> Result<RealMatrix> {
    if tomograms.is_empty() || weights.dim() != tomograms.len() {
        return Err(Error::DimMismatch {
            expected: tomograms.len(),
            got: weights.dim(),
        });
    }
    let d = tomograms[0].probabilities.dim();
    for t in tomograms {
        if t.probabilities.dim() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: t.probabilities.dim(),
            });
        }
    }
    let mut p = RealMatrix::zeros(d, tomograms.len());
    for (i, t) in tomograms.iter().enumerate() {
        for m in 0..d {
            p[(m, i)] = t.probabilities[m] * weights[i];
        }
    }
    Ok(p)
}

/// Angles of a Givens-product unitary: for each index pair (j, k) in
/// lexicographic order, a rotation angle theta in [0, pi/2] and a phase phi
/// in [0, 2*pi). The first half of `angles` holds the thetas, the second
/// half the phis. Global and diagonal left phases are deliberately absent:
/// they cannot change any tomogram.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams {
    dim: usize,
    angles: Vec<f64>,
}

impl UnitaryParams {
    pub fn new(dim: usize, angles: Vec<f64>) -> Result<Self> {
        if dim < 1 || angles.len() != dim * (dim - 1) {
            return Err(Error::BadDims {
                reason: format!(
                    "expected {} angles for dimension {dim}, got {}",
                    dim * (dim.max(1) - 1),
                    angles.len()
                ),
            });
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::BadDims {
                reason: "non-finite angle".into(),
            });
        }
        Ok(Self { dim, angles })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            angles: vec![0.0; dim * (dim - 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    fn rotation_count(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    pub fn theta(&self, pair: usize) -> f64 {
        self.angles[pair]
    }

    pub fn phi(&self, pair: usize) -> f64 {
        self.angles[self.rotation_count() + pair]
    }

    /// Index pairs (j, k), j < k, in the fixed lexicographic product order.
    pub fn pairs(dim: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
        for j in 0..dim {
            for k in j + 1..dim {
                out.push((j, k));
            }
        }
        out
    }

    /// Fold every angle into its fundamental domain (theta in [0, pi/2],
    /// phi in [0, 2*pi)) using the exact rotation symmetries; the built
    /// unitary changes by at most a global sign, which no tomogram sees.
    pub fn canonicalized(&self) -> Self {
        let m = self.rotation_count();
        let mut angles = self.angles.clone();
        let tau = 2.0 * std::f64::consts::PI;
        for i in 0..m {
            let mut theta = angles[i].rem_euclid(tau);
            let mut phi = angles[m + i];
            if theta >= std::f64::consts::PI {
                // G(theta - pi, phi) = -G(theta, phi)
                theta -= std::f64::consts::PI;
            }
            if theta > std::f64::consts::FRAC_PI_2 {
                // G(pi - theta, phi + pi) = -G(theta, phi)
                theta = std::f64::consts::PI - theta;
                phi += std::f64::consts::PI;
            }
            angles[i] = theta;
            angles[m + i] = phi.rem_euclid(tau);
        }
        Self {
            dim: self.dim,
            angles,
        }
    }
}

impl Serialize for UnitaryParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.angles.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitaryParams {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let angles = Vec::<f64>::deserialize(deserializer)?;
        // Solve n(n-1) = len for n.
        let len = angles.len();
        let mut dim = 1;
        while dim * (dim - 1) < len {
            dim += 1;
        }
        UnitaryParams::new(dim, angles).map_err(D::Error::custom)
    }
}

/// Right-multiply `m` in place by the Givens rotation G(j, k, theta, phi),
/// which is the identity except G[j][j] = G[k][k] = cos(theta),
/// G[j][k] = sin(theta) e^{i phi}, G[k][j] = -sin(theta) e^{-i phi}.
fn apply_givens_right(m: &mut ComplexMatrix, j: usize, k: usize, theta: f64, phi: f64) {
    let c = theta.cos();
    let s = theta.sin();
    let e = Complex64::from_polar(1.0, phi);
    for r in 0..m.rows() {
        let mj = m[(r, j)];
        let mk = m[(r, k)];
        m[(r, j)] = mj * c - mk * (e.conj() * s);
        m[(r, k)] = mj * (e * s) + mk * c;
    }
}

/// Product of Givens rotations in lexicographic pair order.
pub fn build_unitary(params: &UnitaryParams) -> UnitaryMatrix {
    let n = params.dim();
    let mut u = ComplexMatrix::identity(n);
    for (idx, (j, k)) in UnitaryParams::pairs(n).into_iter().enumerate() {
        apply_givens_right(&mut u, j, k, params.theta(idx), params.phi(idx));
    }
    UnitaryMatrix::new(u).expect("Givens products are unitary")
}

/// Factor a unitary into Givens parameters: `u = D * build_unitary(params)`
/// for some diagonal phase matrix D. The left phases are dropped, so the
/// built unitary reproduces every tomogram and unistochastic action of `u`
/// exactly. This is the analytic starting point of the entropy minimizer.
pub fn decompose_unitary(u: &UnitaryMatrix) -> UnitaryParams {
    let n = u.dim();
    let pairs = UnitaryParams::pairs(n);
    let m = pairs.len();
    let mut angles = vec![0.0; 2 * m];
    let mut w = u.matrix().clone();

    // Eliminate below-diagonal entries in reverse lexicographic order;
    // rotation (j, k) zeroes w[k][j] by mixing columns j and k. Afterwards
    // w is diagonal (a unitary with zeros below the diagonal is diagonal),
    // and the inverses applied in reverse give the lexicographic product.
    for (idx, &(j, k)) in pairs.iter().enumerate().rev() {
        let a = w[(k, j)];
        let b = w[(k, k)];
        let (theta, phi) = if a.norm() == 0.0 {
            (0.0, 0.0)
        } else {
            let theta = a.norm().atan2(b.norm());
            let arg_a = a.arg();
            let arg_b = if b.norm() == 0.0 { 0.0 } else { b.arg() };
            let phi = (arg_b - arg_a - std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI);
            (theta, phi)
        };
        angles[idx] = theta;
        angles[m + idx] = phi;

        // w <- w * G(j, k, theta, phi)^dag
        let c = theta.cos();
        let s = theta.sin();
        let e = Complex64::from_polar(1.0, phi);
        for r in 0..n {
            let wj = w[(r, j)];
            let wk = w[(r, k)];
            w[(r, j)] = wj * c + wk * (e.conj() * s);
            w[(r, k)] = -wj * (e * s) + wk * c;
        }
    }

    UnitaryParams::new(n, angles).expect("angle count matches dimension")
}

/// Configuration of the tomographic entropy minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Number of random restarts on top of the analytic start.
    pub restarts: usize,
    /// Iteration budget per simplex descent.
    pub max_iters: usize,
    /// Acceptance threshold on the certificate min - S(rho).
    pub opt_tol: f64,
    /// Seed for the random restart points.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 2000,
            opt_tol: 1e-6,
            seed: 0,
        }
    }
}

/// Outcome of the minimization: the smallest tomographic Shannon entropy
/// found, the parameters attaining it, and the certificate against the
/// spectral floor.
#[derive(Debug, Clone)]
pub struct TomographicMinimum {
    pub min_entropy: f64,
    pub argmin: UnitaryParams,
    /// min_entropy - S(rho). Majorization forbids it from being negative
    /// beyond round-off; the analytic start keeps it from exceeding the
    /// configured tolerance unless something is broken.
    pub certificate: f64,
    pub von_neumann: f64,
    pub evaluations: usize,
}

/// Minimize the Shannon entropy of the tomogram over measurement bases.
///
/// The search runs one simplex descent from the analytic start (the
/// decomposed adjoint eigenbasis, where the tomogram is the spectrum) and
/// from `restarts` seeded random points; candidates merge by minimum value
/// with ties broken toward the lowest start index. The analytic start makes
/// the result a certificate: the optimizer can confirm the spectral floor
/// but never undershoot it.
pub fn min_tomographic_entropy(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<TomographicMinimum> {
    let n = rho.dim();
    if n == 1 {
        return Ok(TomographicMinimum {
            min_entropy: 0.0,
            argmin: UnitaryParams::zeros(1),
            certificate: 0.0,
            von_neumann: 0.0,
            evaluations: 0,
        });
    }
    let eig = rho.eig()?;
    let lambda: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < 0.0 { 0.0 } else { l })
        .collect();
    let floor: f64 = lambda
        .iter()
        .filter(|&&x| x > SUPPORT_TOL)
        .map(|&x| -x * x.ln())
        .sum();

    let eigenbasis = &eig.eigenvectors;
    let objective = |angles: &[f64]| -> f64 {
        let params = UnitaryParams {
            dim: n,
            angles: angles.to_vec(),
        };
        let u = build_unitary(&params);
        let product = u.matrix().mul(eigenbasis);
        let mut h = 0.0;
        for m in 0..n {
            let mut w = 0.0;
            for k in 0..n {
                w += product[(m, k)].norm_sqr() * lambda[k];
            }
            if w > SUPPORT_TOL {
                h -= w * w.ln();
            }
        }
        h
    };

    let options = SimplexOptions {
        max_iters: cfg.max_iters,
        ..SimplexOptions::default()
    };

    let analytic = decompose_unitary(&UnitaryMatrix::new(eigenbasis.adjoint())?);
    let n_params = n * (n - 1);
    let starts: Vec<Vec<f64>> = std::iter::once(analytic.angles.clone())
        .chain((1..=cfg.restarts).map(|r| {
            let mut rng = CounterRng::new(SeedSpec::new(cfg.seed, r as u64));
            let m = n_params / 2;
            let mut angles = Vec::with_capacity(n_params);
            for _ in 0..m {
                angles.push(rng.uniform_in(std::f64::consts::FRAC_PI_2));
            }
            for _ in 0..m {
                angles.push(rng.uniform_in(2.0 * std::f64::consts::PI));
            }
            angles
        }))
        .collect();

    let mut best_value = f64::INFINITY;
    let mut best_point: Vec<f64> = analytic.angles.clone();
    let mut evaluations = 0;
    for start in &starts {
        let out = nelder_mead(objective, start, &options);
        evaluations += out.evaluations;
        if out.best_value < best_value {
            best_value = out.best_value;
            best_point = out.best_point;
        }
    }

    let certificate = best_value - floor;
    if certificate > cfg.opt_tol {
        return Err(Error::OptimizerDidNotConverge {
            certificate,
            tol: cfg.opt_tol,
        });
    }
    let argmin = UnitaryParams {
        dim: n,
        angles: best_point,
    }
    .canonicalized();
    Ok(TomographicMinimum {
        min_entropy: best_value,
        argmin,
        certificate,
        von_neumann: floor,
        evaluations,
    })
}
