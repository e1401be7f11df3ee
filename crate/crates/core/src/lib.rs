//! Portrait maps of probability vectors and density matrices, the entropic
//! inequalities they generate, and the tomographic probability
//! representation of qudit states — together with a seeded randomized
//! verification engine for all of it.
//!
//! The pieces:
//!
//! - [`matrix`], [`eigen`], [`density`]: dense complex linear algebra at
//!   small dimension, a deterministic Jacobi eigensolver for Hermitian
//!   matrices, state validation, multiqubit embedding, and partial traces.
//! - [`portrait`]: 0/1 column-stochastic coarse-graining of probability
//!   vectors, and positive trace-preserving merge maps on density matrices,
//!   including their representation as 0/1 matrices on flattened states.
//! - [`entropy`]: Shannon/Renyi/Tsallis and von Neumann entropies, Umegaki
//!   relative entropy with an explicit infinity marker, and the signed
//!   margin of every inequality the crate can verify.
//! - [`tomography`]: measurement statistics in rotated bases, unistochastic
//!   matrices, and the minimization of tomographic Shannon entropy down to
//!   the von Neumann floor over a Givens-product parameterization.
//! - [`sampler`], [`rng`]: counter-based seeded generation of states,
//!   unitaries, probability vectors, and maps.
//! - [`campaign`], [`io`]: batch verification with reproducible reports and
//!   the shared JSON file formats.
//!
//! Everything is a pure function of its inputs; values are immutable after
//! construction and safe to share across threads.

pub use num_complex::Complex64;

pub mod campaign;
pub mod density;
pub mod eigen;
pub mod entropy;
pub mod error;
pub mod io;
pub mod matrix;
pub mod optim;
pub mod portrait;
pub mod prob;
pub mod rng;
pub mod sampler;
pub mod tomography;

pub use crate::campaign::{run_campaign, CampaignConfig, CampaignReport, ReportFormat, RunOptions};
pub use crate::density::{
    embed_qudit, maximally_mixed, partial_trace, pure_state, validate_density, DensityMatrix,
    Tolerances,
};
pub use crate::eigen::{eig_hermitian, matrix_function, EigenDecomposition};
pub use crate::entropy::{
    classical_portrait_margin, quantum_relative_entropy, relative_entropy_margin, renyi, shannon,
    ssa_margin, subadditivity_margin, tsallis, von_neumann, EntropyKind, InequalityId,
    InequalityMargin, RelativeEntropy,
};
pub use crate::error::{Error, Result};
pub use crate::matrix::{devectorize, vectorize, ComplexMatrix, RealMatrix};
pub use crate::portrait::{
    apply_coarse_grain, merge_map_matrix, portrait_density, portrait_pair_via_embedding,
    qutrit_standard_maps, CoarseGrainMap, MergeMap,
};
pub use crate::prob::ProbabilityVector;
pub use crate::rng::{CounterRng, SeedSpec};
pub use crate::tomography::{
    build_unitary, decompose_unitary, joint_probability, min_tomographic_entropy, tomogram,
    tomogram_spectral, unistochastic, OptimizerConfig, Tomogram, TomographicMinimum, UnitaryMatrix,
    UnitaryParams,
};
