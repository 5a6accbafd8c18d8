//! Equipopularity of patterns in separable permutations.
//!
//! The crate is organised in four layers:
//!
//! - [`perm`]: permutations, brute-force pattern counting, direct and skew
//!   sums, and the eight symmetries of the square.
//! - [`dectree`]: decomposition trees of separable permutations, reduced
//!   skeletons, the two popularity-preserving exchanges (with transport of
//!   marked occurrences), signatures, wedge trees and canonicalisation.
//! - [`popularity`]: enumeration of separable permutations, the
//!   simultaneous pattern census and the equipopularity class report.
//! - [`series`]: exact truncated power series and the generating-function
//!   identities for monotone and wedge pattern popularity.
//!
//! Everything is exact: counts are integers and series coefficients are
//! arbitrary-precision rationals.

pub mod combinat;
pub mod dectree;
pub mod partition;
pub mod perm;
pub mod popularity;
pub mod series;

pub use dectree::{DecompositionTree, MarkedTree, NodePath, Sign, TreeError};
pub use partition::{partitions_of, Partition, PartitionError};
pub use perm::{PermError, Permutation, Symmetry};
pub use popularity::{
    enumerate_separable, equipopularity_classes, popularity_table, schroder_count, Census,
    CensusError, ClassReport, PopularityTable, StructuralFilter,
};
pub use series::{BivariateSeries, LaurentPolynomial, SeriesError, TruncatedSeries};
