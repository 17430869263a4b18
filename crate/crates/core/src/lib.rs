//! Construction, validation, enumeration and numeric probing of
//! r-differential posets.

pub mod canon;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod format;
pub mod hypergraph;
pub mod numerics;
pub mod poset;
pub mod wagner;
pub mod walks;

pub use canon::{canonical_cert, canonical_poset, is_isomorphic, CanonicalCert};
pub use enumerate::{
    enumerate_extensions, enumerate_posets, search_rank_function, sharing_graph,
    EnumerationOptions, EnumerationResult, ExtensionChoice, SearchOutcome, SharingGraph,
};
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use numerics::Sequence;
pub use poset::{
    cartesian_product, fibonacci_poset, validate_differential, young_lattice, young_power, Level,
    PosetFragment, RankFunction, RankedPoset, ValidationReport,
};
pub use wagner::{wagner_complete, wagner_extend};
pub use walks::WalkStats;
