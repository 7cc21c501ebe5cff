//! Eisenstein congruences for genus-2 Siegel modular forms: exact arithmetic,
//! elliptic eigenforms, critical L-values and the Satake-parameter
//! elimination at the level prime.

// row operations read one row of a matrix while writing another
#![allow(clippy::needless_range_loop)]

pub mod congruence;
pub mod error;
pub mod exactmath;
pub mod lfunction;
pub mod modforms;
pub mod numberfield;
pub mod satake;
pub mod traceformula;

pub use congruence::{CongruenceReport, CongruenceTarget};
pub use error::{Error, Result};
pub use exactmath::{ExactRational, FFElement, PolyOverQ, ResidueField};
pub use modforms::EigenSystem;
pub use numberfield::{NFElement, NumberFieldCtx, PrimeIdealData};
pub use satake::{Conclusion, TypeId, Verdict};
