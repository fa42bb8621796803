//! Exact counts of red/blue vertex colorings of hypergraph paths and cycles
//! that avoid a fully blue run of `k` consecutive edges, with an exhaustive
//! enumeration oracle for checking every formula and the survival
//! polynomials built from the counts.

pub mod counting;
pub mod cycles;
pub mod document;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod reliability;
pub mod structure;
pub mod tight;
pub mod verify;

pub use counting::{
    base_case, binom, loose_path_vertex_count, CountKey, Counter, PermissibilityBound,
};
pub use cycles::{CycleCountKey, Source, Sourced};
pub use document::TableDocument;
pub use engine::Engine;
pub use error::{Error, Result};
pub use oracle::{build, has_forbidden_run, Coloring, Oracle, Predicate, UniformHypergraph};
pub use reliability::{reliability_poly, CountTable, ReliabilityPolynomial};
pub use structure::{Family, StructureSpec};
pub use tight::{check_conjecture, ConjectureReport, TightKey};
pub use verify::{Grid, Theorem, VerificationReport};

pub use num_bigint::BigUint as BigCount;
