//! Partitewise entanglement numerics for finite-dimensional multi-qudit
//! registers: separability decisions, extensibility, and the partitewise
//! entanglement measure families built on reduced functions, bipartitions
//! and distances.

pub mod error;
pub mod linalg;
pub mod state;
pub mod states;
pub mod separability;
pub mod convex_roof;
pub mod measures;
pub mod extensibility;

pub use error::{Error, Result};
pub use linalg::{hermitian_eig, kron, trace_norm, CMatrix, SpectralDecomposition, C64};
pub use state::{
    linear_entropy, overlap, partial_trace, partial_transpose, partial_transpose_matrix, relative_entropy, von_neumann_entropy,
    DensityMatrix, PureState, RegisterShape, Tolerances,
};
pub use states::PartitionSpec;
