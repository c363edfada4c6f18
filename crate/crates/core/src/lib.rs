//! Exact generating series for networks of Chen–Fliess series.
//!
//! The crate computes, with arbitrary-precision rational arithmetic, the
//! generating series of additive, multiplicative and cascade
//! interconnections of single-input single-output Chen–Fliess series. Each
//! network is turned into a formal representation on a product of formal
//! Lie groups, and its coefficients are extracted by iterated formal Lie
//! derivatives of tensor functionals.
//!
//! Two independent routes back the symbolic engine: the composition product
//! ([`compose`]) for cascades, and a floating-point integrator of the
//! truncated state equations ([`sim`]).
//!
//! ```
//! use fliessnet::{build_cascade, parse_coefficient, parse_word, Alphabet, Series};
//!
//! let x = Alphabet::new(1).unwrap();
//! let outer = Series::from_terms(x, 4, [(parse_word("x1 x1", x).unwrap(), parse_coefficient("1").unwrap())]).unwrap();
//! let inner = Series::letter(x, 4, 1).unwrap();
//! let d = build_cascade(&outer, &inner).unwrap().generating_series(1, 4).unwrap();
//! assert_eq!(d.to_string(), "2 x0 x0 x1 x1 + x0 x1 x0 x1");
//! ```

pub mod compose;
pub mod error;
pub mod lie;
pub mod network;
pub mod representation;
pub mod selftest;
pub mod series;
pub mod sim;
pub mod tensor;
pub mod word;

pub use compose::{compose, compose_single};
pub use error::{Error, Result};
pub use lie::{
    bracket, chen_series_constant, exp_truncated, is_group_like, is_primitive_ree, log_truncated,
    GroupElement, LieElement,
};
pub use network::{
    build_additive, build_cascade, build_multiplicative, parse_network_spec, NetworkKind,
    NetworkSpec, NodeSpec, WeightMatrix,
};
pub use representation::{lie_derivative, FieldTerm, FormalRepresentation, StateField};
pub use series::{format_coefficient, parse_coefficient, Coefficient, Series};
pub use sim::{simulate_network, verify_order, ConstantInput, SimResult};
pub use tensor::{TensorFunctional, TensorTerm};
pub use word::{enumerate_words, parse_word, Alphabet, Word};
