//! Approximation-complexity trichotomy for bounded-degree Boolean #CSP.
//!
//! * [`boolfn`]: truth tables and closure predicates (affine, IM2, self-dual, ...).
//! * [`hypergraph`]: k-tuple hypergraphs and an exact partition-function engine.
//! * [`gadgets`]: constructive witnesses (perfect equality, pinning, hard simulations).
//! * [`csp`]: instances, exact counting, language classification, the #BIS reduction.
//!
//! Scalars are generic over [`Weight`]; the aliases below fix the common choices.

pub mod boolfn;
pub mod csp;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod gf2;
pub mod hypergraph;
pub mod perm;
pub mod weight;

pub use boolfn::{is_hard, BinaryWeights, BooleanFunction, EasyTag, TruthTable};
pub use error::{Error, Result};
pub use hypergraph::{Conditioning, MarginalTable, TupleHypergraph};
pub use weight::Weight;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Integer-valued table (counts).
pub type CountTable = TruthTable<u64>;
/// Exact rational-valued table.
pub type RationalTable = TruthTable<Rational>;
/// Floating-point table (not used on verification paths).
pub type FloatTable = TruthTable<f64>;
/// Binary weighted function with exact rational entries.
pub type RationalBinary = BinaryWeights<Rational>;
