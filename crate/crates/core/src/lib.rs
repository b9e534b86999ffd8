//! Exact counting of λ-quiddities: tuples `(a_1, ..., a_n)` over Z/NZ whose
//! continuant matrix `M_n(a_1, ..., a_n)` equals `±Id` (or any other target in
//! SL2(Z/NZ)).
//!
//! Three independent sources of counts are provided and cross-checked in the
//! test suites: exhaustive search ([`oracle`]), a transfer-matrix dynamic
//! program over the group ([`counter`]), and exact closed forms ([`formulas`]).

pub mod counter;
pub mod crt;
pub mod error;
pub mod formulas;
pub mod maps;
pub mod modring;
pub mod oracle;
pub mod sl2;

pub use error::{Error, Result};
pub use formulas::{FormulaValue, Sign};
pub use modring::{Modulus, Residue};
pub use oracle::{ConstraintKind, SetSpec, Tuple};
pub use sl2::{GroupIndex, GroupTable, Mat2, NamedTarget};

/// Arbitrary-precision count used throughout the public API.
pub type Count = num_bigint::BigUint;

/// Transfer-matrix state with arbitrary-precision entries.
pub type BigCountVector = counter::CountVector<Count>;

/// Transfer-matrix state with 64-bit entries; overflow is reported, not wrapped.
pub type U64CountVector = counter::CountVector<u64>;
