//! Grothendieck fusion rules for the Bershadsky-Polyakov minimal models
//! `BP(u,v)` at nondegenerate admissible levels `k + 3 = u/v`.
//!
//! The crate is layered bottom-up:
//!
//! * [`weights`]: levels, central charges, the label sets and their Z3 action.
//! * [`sl3`]: sl3 weight multiplicities, tensor products and Kac-Walton fusion.
//! * [`w3`]: the W3 minimal-model S-matrix and fusion coefficients.
//! * [`labels`]: spectral flow, conjugation, exact sequences and resolutions.
//! * [`verlinde`]: S-kernels, closed-form fusion, the Fourier oracle and
//!   the resolution-based algorithm for highest-weight products.
//! * [`parse`]: the textual label grammar used by the CLI.
//! * [`verify`]: numerical and exact self-checks, grouped into suites.
//!
//! ```
//! use bpfusion::weights::level_params;
//! let p = level_params(3, 4)?;
//! assert_eq!(p.c_bp, bpfusion::Q::new(-23, 2));
//! # Ok::<(), bpfusion::Error>(())
//! ```

pub mod error;
pub mod labels;
pub mod parse;
pub mod sl3;
pub mod verify;
pub mod verlinde;
pub mod w3;
pub mod weights;

pub use error::{Error, Result};

/// Exact rationals used for levels, charges and conformal weights.
pub type Q = num_rational::Ratio<i64>;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/levels.md")]
    mod levels {}
    #[doc = include_str!("../../../book/src/sl3.md")]
    mod sl3 {}
    #[doc = include_str!("../../../book/src/w3.md")]
    mod w3 {}
    #[doc = include_str!("../../../book/src/labels.md")]
    mod labels {}
    #[doc = include_str!("../../../book/src/fusion.md")]
    mod fusion {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
