//! Locally rewritable codes for memories with stuck-at cells.
//!
//! The crate covers the whole pipeline around additive masking codes:
//!
//! - [`gf2`]: bit-packed vectors, matrices and polynomials over GF(2).
//! - [`codes`]: binary linear codes, cyclic constructions and exhaustive
//!   distance/covering computations.
//! - [`channel`]: the stuck-at defect channel and defect sampling.
//! - [`lwc`]: the masking encoder, minimum-rewrite updater, decoder and the
//!   `d★`/`r★` analyzer with the related bounds.
//! - [`duality`]: building additive codes from LRC parity checks and
//!   comparing repair locality with rewriting locality.
//! - [`sim`]: Monte Carlo cost simulation with CSV output.
//!
//! Indices are 0-based everywhere, including bit strings and CSV output.

pub mod channel;
pub mod codes;
pub mod duality;
pub mod error;
pub mod gf2;
pub mod lwc;
pub mod sim;

pub use channel::{apply, ChannelState, DefectModel};
pub use codes::{CodeSpec, LinearCode};
pub use error::{Error, MaskingFailure, Result};
pub use gf2::{BitMatrix, BitVector};
pub use lwc::{analyze, AdditiveCode, CostReport, LwcAnalysis};
