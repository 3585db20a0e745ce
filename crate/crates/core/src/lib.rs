//! Fractional decoding of one-point algebraic geometry codes over extension
//! fields.
//!
//! A codeword of `C_l(β P∞)` over `F_{Q^l}` is decoded from only `m·n`
//! base-field symbols (`m < l`): each storage node returns `m` traces of its
//! symbol, the `m` resulting rows are decoded as codewords of one-point codes
//! over `F_Q`, and the message is peeled back out of the decoded rows.

pub mod code;
pub mod curve;
pub mod field;
pub mod fractional;
pub mod interleaved;
pub mod linalg;
pub mod presets;

pub use curve::{AffinePoint, Coordinate, CurveError, CurveModel, Monomial, RingElement};
pub use field::{Elem, ExtensionTower, Field, FieldError};
pub use code::{CodeError, DecodeFailure, Decoded, EvalCode, InformationSet};
pub use fractional::{
    CountingStore, FractionalDecoded, FractionalError, FractionalSpec, PartitionPlan, ProjectedMatrix,
    RadiusReport, StoredWord, SymbolStore,
};
pub use interleaved::{
    build_collab_system, collab_decode, sweep_locator_excess, CollabConfig, InterleavedCode, InterleavedError,
};
