//! Portrait maps.
//!
//! Classical side: 0/1 column-stochastic matrices merge entries of a
//! probability vector. Quantum side: merge maps keep a principal submatrix
//! of a density matrix and fold each dropped diagonal entry into an assigned
//! kept diagonal entry, discarding all off-diagonal entries that involve
//! dropped indices. Both families act as 0/1 matrices on the row-major
//! flattening of the state, and merge maps provably preserve positivity and
//! trace: a principal submatrix of a PSD matrix is PSD, and adding a
//! nonnegative diagonal keeps it PSD.
//!
//! Public JSON forms index from 1; everything in memory indexes from 0.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::density::{self, DensityMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::{vectorize, ComplexMatrix};
use crate::prob::ProbabilityVector;

/// 0/1 column-stochastic matrix, stored as one output target per input
/// index so "exactly one unit entry per column" holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGrainMap {
    out_dim: usize,
    /// targets[k] = output index receiving input k (0-based).
    targets: Vec<usize>,
}

impl CoarseGrainMap {
    /// `targets` are 0-based output indices, one per input index.
    pub fn new(out_dim: usize, targets: Vec<usize>) -> Result<Self> {
        if out_dim == 0 || targets.is_empty() {
            return Err(Error::BadMap {
                reason: "dimensions must be positive".into(),
            });
        }
        if let Some(&bad) = targets.iter().find(|&&t| t >= out_dim) {
            return Err(Error::BadMap {
                reason: format!("target {bad} out of range for out_dim {out_dim}"),
            });
        }
        Ok(Self { out_dim, targets })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            out_dim: n,
            targets: (0..n).collect(),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.targets.len()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Dense 0/1 matrix form (out_dim x in_dim).
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.out_dim, self.in_dim());
        for (k, &j) in self.targets.iter().enumerate() {
            m[(j, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoarseGrainWire {
    out_dim: usize,
    /// 1-based output indices.
    targets: Vec<usize>,
}

impl Serialize for CoarseGrainMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoarseGrainWire {
            out_dim: self.out_dim,
            targets: self.targets.iter().map(|&t| t + 1).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoarseGrainMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = CoarseGrainWire::deserialize(deserializer)?;
        if let Some(&bad) = wire.targets.iter().find(|&&t| t == 0) {
            return Err(D::Error::custom(format!("targets are 1-based, got {bad}")));
        }
        CoarseGrainMap::new(wire.out_dim, wire.targets.iter().map(|&t| t - 1).collect())
            .map_err(D::Error::custom)
    }
}

/// Merge probabilities: output entry j is the sum of all inputs targeted
/// at j. Total probability is preserved and no entry can go negative.
pub fn apply_coarse_grain(
    map: &CoarseGrainMap,
    p: &ProbabilityVector,
) -> Result<ProbabilityVector> {
    if map.in_dim() != p.dim() {
        return Err(Error::DimMismatch {
            expected: map.in_dim(),
            got: p.dim(),
        });
    }
    let mut out = vec![0.0; map.out_dim()];
    for (k, &j) in map.targets.iter().enumerate() {
        out[j] += p[k];
    }
    ProbabilityVector::new(out)
}

/// Positive trace-preserving merge map on density matrices: keep the
/// principal submatrix on `kept`, fold each dropped diagonal entry into the
/// diagonal of its assigned kept index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeMap {
    in_dim: usize,
    /// Strictly increasing kept indices (0-based).
    kept: Vec<usize>,
    /// assign[dropped] = kept index receiving its diagonal weight (0-based),
    /// sorted by dropped index.
    assign: Vec<(usize, usize)>,
}

impl MergeMap {
    pub fn new(in_dim: usize, kept: Vec<usize>, assign: &BTreeMap<usize, usize>) -> Result<Self> {
        if kept.is_empty() {
            return Err(Error::BadMap {
                reason: "kept set is empty".into(),
            });
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadMap {
                reason: "kept indices must be strictly increasing".into(),
            });
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= in_dim) {
            return Err(Error::BadMap {
                reason: format!("kept index {bad} out of range for in_dim {in_dim}"),
            });
        }
        let dropped: Vec<usize> = (0..in_dim).filter(|i| !kept.contains(i)).collect();
        if assign.len() != dropped.len() || dropped.iter().any(|d| !assign.contains_key(d)) {
            return Err(Error::BadMap {
                reason: "assignment must cover exactly the dropped indices".into(),
            });
        }
        for (&d, &k) in assign {
            if !kept.contains(&k) {
                return Err(Error::BadMap {
                    reason: format!("dropped index {d} assigned to non-kept index {k}"),
                });
            }
        }
        Ok(Self {
            in_dim,
            kept,
            assign: assign.iter().map(|(&d, &k)| (d, k)).collect(),
        })
    }

    /// Identity map: keeps everything.
    pub fn identity(n: usize) -> Self {
        Self {
            in_dim: n,
            kept: (0..n).collect(),
            assign: Vec::new(),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.kept.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn assignments(&self) -> &[(usize, usize)] {
        &self.assign
    }

    /// Position of original index `k` among the kept indices.
    fn kept_position(&self, k: usize) -> usize {
        self.kept.binary_search(&k).expect("kept index")
    }

    /// The 0/1 coarse-graining this merge map induces on diagonal states:
    /// kept indices map to their relabeled positions, dropped indices to
    /// the position of their assignment.
    pub fn induced_coarse_grain(&self) -> CoarseGrainMap {
        let mut targets = vec![0usize; self.in_dim];
        for (pos, &k) in self.kept.iter().enumerate() {
            targets[k] = pos;
        }
        for &(d, k) in &self.assign {
            targets[d] = self.kept_position(k);
        }
        CoarseGrainMap {
            out_dim: self.kept.len(),
            targets,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MergeMapWire {
    in_dim: usize,
    /// 1-based kept indices.
    kept: Vec<usize>,
    /// dropped index (1-based, as a string key) -> kept index (1-based).
    assign: BTreeMap<String, usize>,
}

impl Serialize for MergeMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MergeMapWire {
            in_dim: self.in_dim,
            kept: self.kept.iter().map(|&k| k + 1).collect(),
            assign: self
                .assign
                .iter()
                .map(|&(d, k)| ((d + 1).to_string(), k + 1))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MergeMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MergeMapWire::deserialize(deserializer)?;
        let mut assign = BTreeMap::new();
        for (d, k) in &wire.assign {
            let d: usize = d
                .parse()
                .map_err(|_| D::Error::custom(format!("bad dropped index key {d:?}")))?;
            if d == 0 || *k == 0 {
                return Err(D::Error::custom("indices are 1-based"));
            }
            assign.insert(d - 1, *k - 1);
        }
        if wire.kept.contains(&0) {
            return Err(D::Error::custom("kept indices are 1-based"));
        }
        MergeMap::new(
            wire.in_dim,
            wire.kept.iter().map(|&k| k - 1).collect(),
            &assign,
        )
        .map_err(D::Error::custom)
    }
}

/// The two standard qutrit merge maps: keep {1,3} folding 2 into 1, and
/// keep {1,2} folding 3 into 1 (1-based labels).
pub fn qutrit_standard_maps() -> (MergeMap, MergeMap) {
    let first = MergeMap::new(3, vec![0, 2], &BTreeMap::from([(1, 0)])).expect("static map");
    let second = MergeMap::new(3, vec![0, 1], &BTreeMap::from([(2, 0)])).expect("static map");
    (first, second)
}

/// Apply a merge map to a density matrix. The output is certified; a
/// certification failure is escalated to [`Error::InternalPositivityBreach`]
/// because positivity of this family is a theorem, not a numerical hope.
pub fn portrait_density(map: &MergeMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if map.in_dim() != rho.dim() {
        return Err(Error::DimMismatch {
            expected: map.in_dim(),
            got: rho.dim(),
        });
    }
    let k = map.out_dim();
    let mut out = ComplexMatrix::zeros(k, k);
    for (r, &i) in map.kept.iter().enumerate() {
        for (c, &j) in map.kept.iter().enumerate() {
            out[(r, c)] = rho.matrix()[(i, j)];
        }
    }
    for &(dropped, target) in &map.assign {
        let pos = map.kept_position(target);
        out[(pos, pos)] += rho.matrix()[(dropped, dropped)];
    }
    density::validate_density(&out, &Tolerances::default()).map_err(|e| {
        Error::InternalPositivityBreach {
            source: Box::new(e),
        }
    })
}

/// The merge map as a 0/1 matrix acting on row-major flattened states:
/// `devectorize(matrix * vectorize(rho)) == portrait_density(map, rho)`.
/// Rows for kept off-diagonal positions carry a single unit; rows for kept
/// diagonal positions also carry one unit per dropped index assigned there.
pub fn merge_map_matrix(map: &MergeMap) -> ComplexMatrix {
    let n = map.in_dim();
    let k = map.out_dim();
    let one = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(k * k, n * n);
    for (r, &i) in map.kept.iter().enumerate() {
        for (c, &j) in map.kept.iter().enumerate() {
            m[(r * k + c, i * n + j)] = one;
        }
    }
    for &(dropped, target) in &map.assign {
        let pos = map.kept_position(target);
        m[(pos * k + pos, dropped * n + dropped)] = one;
    }
    m
}

/// Apply the 0/1 matrix route: flatten, multiply, reshape, certify.
pub fn portrait_via_matrix(map: &MergeMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if map.in_dim() != rho.dim() {
        return Err(Error::DimMismatch {
            expected: map.in_dim(),
            got: rho.dim(),
        });
    }
    let m = merge_map_matrix(map);
    let v = vectorize(rho.matrix());
    let k = map.out_dim();
    let mut out = vec![Complex64::new(0.0, 0.0); k * k];
    for (row, slot) in out.iter_mut().enumerate() {
        for (col, &x) in v.iter().enumerate() {
            let w = m[(row, col)];
            if w != Complex64::new(0.0, 0.0) {
                *slot += w * x;
            }
        }
    }
    let matrix = crate::matrix::devectorize(&out, k, k)?;
    density::validate_density(&matrix, &Tolerances::default()).map_err(|e| {
        Error::InternalPositivityBreach {
            source: Box::new(e),
        }
    })
}

/// Independent oracle for the standard qutrit portraits: embed into two
/// qubits and take the two partial traces. Returns (trace over the second
/// qubit, trace over the first qubit), which must equal the standard merge
/// map portraits elementwise.
pub fn portrait_pair_via_embedding(rho: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho.dim() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            got: rho.dim(),
        });
    }
    let embedded = density::embed_qudit(rho, 2)?;
    let first = density::partial_trace(&embedded, &[1])?;
    let second = density::partial_trace(&embedded, &[2])?;
    Ok((first, second))
}
