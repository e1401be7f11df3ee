//! Classical and quantum entropies, and the signed margins of every
//! inequality this crate verifies.
//!
//! All entropies are in nats. Probabilities and eigenvalues below
//! [`SUPPORT_TOL`] are treated as exact zeros before any logarithm, which
//! realizes the 0*ln(0) = 0 convention and keeps eigensolver round-off out
//! of the margins.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::density::{self, DensityMatrix};
use crate::error::{Error, Result};
use crate::matrix::{digest_f64_bits, digest_matrix};
use crate::portrait::{self, CoarseGrainMap};
use crate::prob::ProbabilityVector;

/// Entries at or below this threshold count as zero support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Which entropy functional a classical inequality uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    Shannon,
    Renyi(f64),
    Tsallis(f64),
}

fn check_order(order: f64) -> Result<()> {
    if order <= 0.0 || (order - 1.0).abs() <= 1e-9 || !order.is_finite() {
        return Err(Error::BadOrder { order });
    }
    Ok(())
}

fn shannon_of_slice(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > SUPPORT_TOL)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Shannon entropy -sum p ln p.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    shannon_of_slice(p.probabilities())
}

/// Renyi entropy of order alpha: ln(sum p^alpha) / (1 - alpha).
/// The alpha -> 1 limit is not computed; use [`shannon`] there.
pub fn renyi(p: &ProbabilityVector, alpha: f64) -> Result<f64> {
    check_order(alpha)?;
    let s: f64 = p
        .probabilities()
        .iter()
        .filter(|&&x| x > SUPPORT_TOL)
        .map(|&x| x.powf(alpha))
        .sum();
    Ok(s.ln() / (1.0 - alpha))
}

/// Tsallis entropy of order q: (1 - sum p^q) / (q - 1).
pub fn tsallis(p: &ProbabilityVector, q: f64) -> Result<f64> {
    check_order(q)?;
    let s: f64 = p
        .probabilities()
        .iter()
        .filter(|&&x| x > SUPPORT_TOL)
        .map(|&x| x.powf(q))
        .sum();
    Ok((1.0 - s) / (q - 1.0))
}

/// Entropy dispatch on [`EntropyKind`].
pub fn entropy_of_kind(p: &ProbabilityVector, kind: EntropyKind) -> Result<f64> {
    match kind {
        EntropyKind::Shannon => Ok(shannon(p)),
        EntropyKind::Renyi(alpha) => renyi(p, alpha),
        EntropyKind::Tsallis(q) => tsallis(p, q),
    }
}

/// Eigenvalues with PSD round-off clamped to zero.
pub fn clamped_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let eig = rho.eig()?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| if l < 0.0 { 0.0 } else { l })
        .collect())
}

/// Von Neumann entropy: Shannon entropy of the clamped spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_of_slice(&clamped_spectrum(rho)?))
}

/// Quantum relative entropy, or an explicit infinity marker when the first
/// state has weight outside the second's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(x) => Some(*x),
            RelativeEntropy::Infinite => None,
        }
    }
}

/// Umegaki relative entropy Tr a (ln a - ln b), computed spectrally:
/// sum_i lambda_i ln lambda_i - sum_j (v_j^dag a v_j) ln mu_j over the
/// clamped spectra of a and b. Infinite when some mu_j has zero support but
/// v_j still carries weight of a.
pub fn quantum_relative_entropy(a: &DensityMatrix, b: &DensityMatrix) -> Result<RelativeEntropy> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let n = a.dim();
    let eig_a = a.eig()?;
    let eig_b = b.eig()?;

    let mut value: f64 = eig_a
        .eigenvalues
        .iter()
        .filter(|&&l| l > SUPPORT_TOL)
        .map(|&l| l * l.ln())
        .sum();

    for j in 0..n {
        let mu = eig_b.eigenvalues[j];
        // Weight of a along the j-th eigenvector of b.
        let mut weight = 0.0;
        for r in 0..n {
            for c in 0..n {
                weight += (eig_b.eigenvectors[(r, j)].conj()
                    * a.matrix()[(r, c)]
                    * eig_b.eigenvectors[(c, j)])
                    .re;
            }
        }
        if mu <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(RelativeEntropy::Infinite);
            }
        } else {
            value -= weight * mu.ln();
        }
    }
    Ok(RelativeEntropy::Finite(value))
}

/// Identifier of a verifiable inequality. The serialized names double as
/// CLI tokens and report fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityId {
    Eq2aShannon,
    Eq2aRenyi,
    Eq2aTsallis,
    Eq6Subadditivity,
    Eq9Information,
    Eq10Relative,
    Ssa,
    Eq14Minimization,
    PortraitPositivity,
    OracleEmbedding,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::Eq2aShannon,
        InequalityId::Eq2aRenyi,
        InequalityId::Eq2aTsallis,
        InequalityId::Eq6Subadditivity,
        InequalityId::Eq9Information,
        InequalityId::Eq10Relative,
        InequalityId::Ssa,
        InequalityId::Eq14Minimization,
        InequalityId::PortraitPositivity,
        InequalityId::OracleEmbedding,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::Eq2aShannon => "eq2a-shannon",
            InequalityId::Eq2aRenyi => "eq2a-renyi",
            InequalityId::Eq2aTsallis => "eq2a-tsallis",
            InequalityId::Eq6Subadditivity => "eq6-subadditivity",
            InequalityId::Eq9Information => "eq9-information",
            InequalityId::Eq10Relative => "eq10-relative",
            InequalityId::Ssa => "ssa",
            InequalityId::Eq14Minimization => "eq14-minimization",
            InequalityId::PortraitPositivity => "portrait-positivity",
            InequalityId::OracleEmbedding => "oracle-embedding",
        }
    }

    /// Whether this inequality takes a Renyi/Tsallis order parameter.
    pub fn needs_order(&self) -> bool {
        matches!(self, InequalityId::Eq2aRenyi | InequalityId::Eq2aTsallis)
    }
}

impl std::str::FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::ConfigError {
                reason: format!("unknown inequality {s:?}"),
            })
    }
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Signed margin of one "left <= right" inequality evaluation.
/// `margin == right - left` holds exactly on the stored fields; an infinite
/// margin (disjoint-support relative entropy) is flagged explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityMargin {
    pub inequality: InequalityId,
    pub left: f64,
    pub right: f64,
    pub margin: f64,
    pub infinite: bool,
    /// Hash of the inputs; not part of the wire form.
    pub digest: String,
}

impl InequalityMargin {
    pub fn finite(inequality: InequalityId, left: f64, right: f64, digest: String) -> Self {
        Self {
            inequality,
            left,
            right,
            margin: right - left,
            infinite: false,
            digest,
        }
    }

    pub fn infinite(inequality: InequalityId, left: f64, digest: String) -> Self {
        Self {
            inequality,
            left,
            right: f64::INFINITY,
            margin: f64::INFINITY,
            infinite: true,
            digest,
        }
    }

    /// Does the margin undershoot -tol?
    pub fn violates(&self, tol: f64) -> bool {
        !self.infinite && self.margin < -tol
    }
}

#[derive(Serialize, Deserialize)]
struct MarginWire {
    inequality: InequalityId,
    left: Option<f64>,
    right: Option<f64>,
    margin: Option<f64>,
    infinite: bool,
}

fn wire_float(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Serialize for InequalityMargin {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MarginWire {
            inequality: self.inequality,
            left: wire_float(self.left),
            right: wire_float(self.right),
            margin: wire_float(self.margin),
            infinite: self.infinite,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InequalityMargin {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MarginWire::deserialize(deserializer)?;
        let restore = |x: Option<f64>| x.unwrap_or(f64::INFINITY);
        let out = Self {
            inequality: wire.inequality,
            left: restore(wire.left),
            right: restore(wire.right),
            margin: restore(wire.margin),
            infinite: wire.infinite,
            digest: String::new(),
        };
        if !out.infinite && (wire.left.is_none() || wire.right.is_none() || wire.margin.is_none()) {
            return Err(D::Error::custom("finite margin with null fields"));
        }
        Ok(out)
    }
}

/// Coarse-graining can only lose information: entropy of the merged vector
/// (left) never exceeds entropy of the original (right).
pub fn classical_portrait_margin(
    p: &ProbabilityVector,
    map: &CoarseGrainMap,
    kind: EntropyKind,
) -> Result<InequalityMargin> {
    let merged = portrait::apply_coarse_grain(map, p)?;
    let left = entropy_of_kind(&merged, kind)?;
    let right = entropy_of_kind(p, kind)?;
    let id = match kind {
        EntropyKind::Shannon => InequalityId::Eq2aShannon,
        EntropyKind::Renyi(_) => InequalityId::Eq2aRenyi,
        EntropyKind::Tsallis(_) => InequalityId::Eq2aTsallis,
    };
    let digest = digest_f64_bits(
        p.probabilities()
            .iter()
            .copied()
            .chain(map.targets().iter().map(|&t| t as f64)),
    );
    Ok(InequalityMargin::finite(id, left, right, digest))
}

/// Entropy subadditivity for the two standard qutrit portraits:
/// S(rho) <= S(rho_1) + S(rho_2). Returns the margin and the associated
/// quantum-information value I_q = S(rho_1) + S(rho_2) - S(rho), which the
/// margin equals by construction.
///
/// Every term is a von Neumann entropy, i.e. the Shannon entropy of the
/// matrix spectrum; the portraits are genuinely nondiagonal matrices, not
/// probability vectors, whenever the input has off-diagonal weight on the
/// kept indices.
pub fn subadditivity_margin(rho: &DensityMatrix) -> Result<(InequalityMargin, f64)> {
    if rho.dim() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            got: rho.dim(),
        });
    }
    let (m1, m2) = portrait::qutrit_standard_maps();
    let p1 = portrait::portrait_density(&m1, rho)?;
    let p2 = portrait::portrait_density(&m2, rho)?;
    let left = von_neumann(rho)?;
    let right = von_neumann(&p1)? + von_neumann(&p2)?;
    let margin = InequalityMargin::finite(
        InequalityId::Eq6Subadditivity,
        left,
        right,
        digest_matrix(rho.matrix()),
    );
    let information = margin.margin;
    Ok((margin, information))
}

/// Nonnegativity of the relative entropy between the two standard qutrit
/// portraits. Disjoint support yields a satisfied inequality with an
/// explicit infinite margin.
pub fn relative_entropy_margin(rho: &DensityMatrix) -> Result<InequalityMargin> {
    if rho.dim() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            got: rho.dim(),
        });
    }
    let (m1, m2) = portrait::qutrit_standard_maps();
    let p1 = portrait::portrait_density(&m1, rho)?;
    let p2 = portrait::portrait_density(&m2, rho)?;
    let digest = digest_matrix(rho.matrix());
    match quantum_relative_entropy(&p1, &p2)? {
        RelativeEntropy::Finite(value) => Ok(InequalityMargin::finite(
            InequalityId::Eq10Relative,
            0.0,
            value,
            digest,
        )),
        RelativeEntropy::Infinite => Ok(InequalityMargin::infinite(
            InequalityId::Eq10Relative,
            0.0,
            digest,
        )),
    }
}

/// Maximum dimension accepted by [`ssa_margin`].
pub const SSA_MAX_DIM: usize = 8;

/// Strong subadditivity margin for a state of dimension <= 8, embedded into
/// three qubits A (most significant bit), B, C (least significant bit):
/// S(AB) + S(BC) - S(ABC) - S(B) >= 0.
pub fn ssa_margin(rho: &DensityMatrix) -> Result<InequalityMargin> {
    if rho.dim() > SSA_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: rho.dim(),
            max: SSA_MAX_DIM,
        });
    }
    let abc = density::embed_qudit(rho, 3)?;
    let s_abc = von_neumann(&abc)?;
    let s_b = von_neumann(&density::partial_trace(&abc, &[2])?)?;
    let s_ab = von_neumann(&density::partial_trace(&abc, &[1, 2])?)?;
    let s_bc = von_neumann(&density::partial_trace(&abc, &[2, 3])?)?;
    Ok(InequalityMargin::finite(
        InequalityId::Ssa,
        s_abc + s_b,
        s_ab + s_bc,
        digest_matrix(rho.matrix()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{maximally_mixed, pure_state, validate_density, Tolerances};
    use crate::matrix::ComplexMatrix;
    use num_complex::Complex64;

    const LN_3: f64 = 1.0986122886681098;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shannon_of_uniform_is_ln3() {
        let p = ProbabilityVector::uniform(3);
        assert!((shannon(&p) - LN_3).abs() < 1e-12);
    }

    #[test]
    fn shannon_of_point_mass_is_zero() {
        let p = ProbabilityVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon(&p), 0.0);
    }

    #[test]
    fn shannon_two_thirds_one_third() {
        // (2/3) ln(3/2) + (1/3) ln 3
        let expect = (2.0 / 3.0) * (1.5f64).ln() + (1.0 / 3.0) * LN_3;
        let p = ProbabilityVector::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((shannon(&p) - expect).abs() < 1e-14);
        assert!((expect - 0.636514).abs() < 1e-6);
    }

    #[test]
    fn renyi_order_two() {
        let p = ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let value = renyi(&p, 2.0).unwrap();
        assert!((value - (-(0.38f64).ln())).abs() < 1e-14);
        assert!((value - 0.967584).abs() < 1e-6);
    }

    #[test]
    fn renyi_of_uniform_is_ln_d_for_any_order() {
        let p = ProbabilityVector::uniform(3);
        for alpha in [0.5, 2.0, 3.0, 7.5] {
            assert!((renyi(&p, alpha).unwrap() - LN_3).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_of_point_mass_is_zero() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        assert!(renyi(&p, 2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn tsallis_values() {
        let p = ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        assert!((tsallis(&p, 2.0).unwrap() - 0.62).abs() < 1e-14);
        let q = ProbabilityVector::new(vec![0.8, 0.2]).unwrap();
        assert!((tsallis(&q, 2.0).unwrap() - 0.32).abs() < 1e-14);
        let point = ProbabilityVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        for order in [0.5, 2.0, 3.0] {
            assert!(tsallis(&point, order).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn bad_orders_are_rejected() {
        let p = ProbabilityVector::uniform(2);
        for order in [0.0, -1.0, 1.0, 1.0 + 1e-10] {
            assert!(matches!(renyi(&p, order), Err(Error::BadOrder { .. })));
            assert!(matches!(tsallis(&p, order), Err(Error::BadOrder { .. })));
        }
    }

    #[test]
    fn von_neumann_of_maximally_mixed() {
        assert!((von_neumann(&maximally_mixed(3)).unwrap() - LN_3).abs() < 1e-12);
    }

    #[test]
    fn von_neumann_of_pure_state_is_zero() {
        let rho = pure_state(&[c(1.0, 0.0), c(0.0, 1.0), c(1.0, -0.5)]).unwrap();
        assert!(von_neumann(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn von_neumann_of_half_quarter_quarter() {
        let rho = validate_density(
            &ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25]),
            &Tolerances::default(),
        )
        .unwrap();
        let expect = 0.5 * 2.0f64.ln() + 0.5 * 4.0f64.ln();
        let s = von_neumann(&rho).unwrap();
        assert!((s - expect).abs() < 1e-14);
        assert!((s - 1.039721).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_of_state_with_itself_is_zero() {
        let rho = validate_density(
            &ComplexMatrix::from_real_rows(&[vec![0.7, 0.2], vec![0.2, 0.3]]),
            &Tolerances::default(),
        )
        .unwrap();
        match quantum_relative_entropy(&rho, &rho).unwrap() {
            RelativeEntropy::Finite(v) => assert!(v.abs() < 1e-12),
            RelativeEntropy::Infinite => panic!("unexpected infinity"),
        }
    }

    #[test]
    fn relative_entropy_of_diagonal_pair() {
        let a = validate_density(
            &ComplexMatrix::from_real_diagonal(&[0.75, 0.25]),
            &Tolerances::default(),
        )
        .unwrap();
        let b = maximally_mixed(2);
        let expect = 0.75 * (1.5f64).ln() + 0.25 * (0.5f64).ln();
        match quantum_relative_entropy(&a, &b).unwrap() {
            RelativeEntropy::Finite(v) => {
                assert!((v - expect).abs() < 1e-14);
                assert!((v - 0.130812).abs() < 1e-6);
            }
            RelativeEntropy::Infinite => panic!("unexpected infinity"),
        }
    }

    #[test]
    fn relative_entropy_detects_disjoint_support() {
        let a = validate_density(
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
            &Tolerances::default(),
        )
        .unwrap();
        let b = validate_density(
            &ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(quantum_relative_entropy(&a, &b).unwrap().is_infinite());
    }

    #[test]
    fn relative_entropy_rejects_dim_mismatch() {
        let a = maximally_mixed(2);
        let b = maximally_mixed(3);
        assert!(matches!(
            quantum_relative_entropy(&a, &b),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn classical_margin_on_uniform_vector() {
        let p = ProbabilityVector::uniform(3);
        let map = CoarseGrainMap::new(3, vec![0, 0, 1]).unwrap();
        let m = classical_portrait_margin(&p, &map, EntropyKind::Shannon).unwrap();
        assert!((m.right - LN_3).abs() < 1e-12);
        assert!((m.left - 0.636514).abs() < 1e-6);
        assert!((m.margin - 0.462098).abs() < 1e-6);
        assert!(!m.violates(1e-12));
    }

    #[test]
    fn classical_margin_equality_case() {
        let p = ProbabilityVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let map = CoarseGrainMap::new(3, vec![0, 0, 1]).unwrap();
        let m = classical_portrait_margin(&p, &map, EntropyKind::Shannon).unwrap();
        assert_eq!(m.margin, 0.0);
    }

    #[test]
    fn classical_margin_renyi_merge_first_two() {
        let p = ProbabilityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        let map = CoarseGrainMap::new(2, vec![0, 0, 1]).unwrap();
        let m = classical_portrait_margin(&p, &map, EntropyKind::Renyi(2.0)).unwrap();
        assert!((m.right - 0.967584).abs() < 1e-6);
        assert!((m.left - 0.385662).abs() < 1e-6);
        assert!((m.margin - 0.581922).abs() < 1e-6);
    }

    #[test]
    fn subadditivity_on_maximally_mixed() {
        let (margin, iq) = subadditivity_margin(&maximally_mixed(3)).unwrap();
        assert!((margin.left - LN_3).abs() < 1e-12);
        assert!((margin.right - 1.2730283365896256).abs() < 1e-12);
        assert!((iq - 0.174416).abs() < 1e-5);
        assert_eq!(margin.margin, iq);
    }

    #[test]
    fn subadditivity_equality_on_basis_state() {
        let rho = pure_state(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let (margin, iq) = subadditivity_margin(&rho).unwrap();
        assert!(margin.left.abs() < 1e-12);
        assert!(iq.abs() < 1e-10);
    }

    #[test]
    fn subadditivity_on_equal_superposition() {
        let rho = pure_state(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let (margin, iq) = subadditivity_margin(&rho).unwrap();
        assert!(margin.left.abs() < 1e-12);
        // Both portraits have eigenvalues (3 +- sqrt(5)) / 6.
        let hi = (3.0 + 5.0f64.sqrt()) / 6.0;
        let lo = (3.0 - 5.0f64.sqrt()) / 6.0;
        let expect = 2.0 * (-hi * hi.ln() - lo * lo.ln());
        assert!((iq - expect).abs() < 1e-12);
        assert!((iq - 0.7625).abs() < 1e-3);
    }

    #[test]
    fn relative_margin_zero_when_portraits_coincide() {
        let m = relative_entropy_margin(&maximally_mixed(3)).unwrap();
        assert!(!m.infinite);
        assert!(m.margin.abs() < 1e-12);

        let rho = validate_density(
            &ComplexMatrix::from_real_diagonal(&[0.5, 0.25, 0.25]),
            &Tolerances::default(),
        )
        .unwrap();
        let m = relative_entropy_margin(&rho).unwrap();
        assert!(m.margin.abs() < 1e-12);
    }

    #[test]
    fn relative_margin_detects_infinite_case() {
        // (|1> + |2>)/sqrt(2): first portrait diag(1,0), second portrait
        // [[1/2,1/2],[1/2,1/2]] whose kernel carries weight 1/2 of the first.
        let rho = pure_state(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let m = relative_entropy_margin(&rho).unwrap();
        assert!(m.infinite);
        assert!(!m.violates(1e-10));
    }

    #[test]
    fn ssa_on_maximally_mixed_eight_dim_is_zero() {
        let m = ssa_margin(&maximally_mixed(8)).unwrap();
        assert!(m.margin.abs() < 1e-12);
    }

    #[test]
    fn ssa_on_qutrit_embedding() {
        let m = ssa_margin(&maximally_mixed(3)).unwrap();
        assert!(m.margin >= -1e-10);
    }

    #[test]
    fn ssa_rejects_dimension_above_eight() {
        let rho = maximally_mixed(9);
        assert!(matches!(
            ssa_margin(&rho),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn margin_json_round_trip() {
        let m = InequalityMargin::finite(InequalityId::Eq9Information, 0.25, 0.5, "x".into());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"inequality":"eq9-information","left":0.25,"right":0.5,"margin":0.25,"infinite":false}"#
        );
        let back: InequalityMargin = serde_json::from_str(&json).unwrap();
        assert_eq!(back.margin, 0.25);
        assert!(!back.infinite);
    }

    #[test]
    fn infinite_margin_serializes_nulls() {
        let m = InequalityMargin::infinite(InequalityId::Eq10Relative, 0.0, "x".into());
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"inequality":"eq10-relative","left":0.0,"right":null,"margin":null,"infinite":true}"#
        );
        let back: InequalityMargin = serde_json::from_str(&json).unwrap();
        assert!(back.infinite);
        assert!(back.margin.is_infinite());
    }

    #[test]
    fn inequality_ids_round_trip_their_tokens() {
        for id in InequalityId::ALL {
            let parsed: InequalityId = id.as_str().parse().unwrap();
            assert_eq!(parsed, id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
    }
}
