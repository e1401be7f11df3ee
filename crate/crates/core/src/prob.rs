//! Probability vectors (classical qudit states).

use crate::error::{Error, Result};

/// Tolerance for probability vector validation: entries may undershoot zero
/// by at most this much (they are clamped), and the total may deviate from
/// one by at most this much.
pub const PROB_TOL: f64 = 1e-10;

/// Nonnegative unit-sum vector. Tiny negative round-off is clamped to zero
/// at construction; the stored entries are exactly what downstream entropy
/// code sees.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    /// Validate with the default tolerance.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(p, PROB_TOL)
    }

    pub fn with_tolerance(mut p: Vec<f64>, tol: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::BadProbability {
                reason: "empty vector".into(),
            });
        }
        for (k, x) in p.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::BadProbability {
                    reason: format!("entry {k} is {x}"),
                });
            }
            if *x < 0.0 {
                if *x < -tol {
                    return Err(Error::BadProbability {
                        reason: format!("entry {k} is {x}, below -{tol:e}"),
                    });
                }
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::BadProbability {
                reason: format!("sum is {sum}, not 1"),
            });
        }
        Ok(Self { p })
    }

    /// Uniform distribution on d outcomes.
    pub fn uniform(d: usize) -> Self {
        Self {
            p: vec![1.0 / d as f64; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.p[k]
    }
}
