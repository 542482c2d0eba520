//! Information theory on finite-dimensional Euclidean Jordan algebras:
//! states and measurements, entropies, Bregman divergences, conditional
//! mutual information and randomised property suites.
//!
//! ```
//! use jordan_info::entropy::spectral_entropy;
//! use jordan_info::state_space::State;
//! use jordan_info::Algebra;
//!
//! let s = State::maximally_mixed(&Algebra::complex(2));
//! assert!((spectral_entropy(&s).unwrap() - 2f64.ln()).abs() < 1e-12);
//! ```

pub mod audit;
pub mod bregman;
pub mod entropy;
pub mod error;
pub mod jordan;
pub mod json;
pub mod multipartite;
pub mod nonlocality;
pub mod state_space;
pub mod verdict;

pub use error::{Error, Result};
pub use jordan::{Algebra, JordanElement, SimpleType, SpectralDecomposition};
