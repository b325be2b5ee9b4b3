//! Exact arithmetic toolkit for the duality between power series on the open
//! unit disk and Mahler series, over a handful of Banach coefficient rings.
//!
//! Everything is computed with exact integers and rationals. Infinite objects
//! are represented by a finite prefix plus a [`weights::Tail`] describing what
//! is known about the remaining coefficients.
//!
//! Module map:
//!
//! * [`coefficients`]: coefficient rings, norms, ring morphisms for base change.
//! * [`weights`]: Köthe weights and matrices, nuclearity, weighted norms, membership.
//! * [`series`]: truncated series in four bases and the tensor square.
//! * [`hopf`]: structure maps on both sides of the duality and axiom checks.
//! * [`mahler`]: finite differences, binomial transform, evaluation.
//! * [`amice`]: the pairing, distributions, Bernoulli moments, base change.
//! * [`io`] and [`cli`]: JSON schemas and the command-line front end.

pub mod amice;
pub mod cli;
pub mod coefficients;
pub mod combinatorics;
mod error;
pub mod hopf;
pub mod io;
pub mod mahler;
pub mod series;
pub mod weights;

pub use error::{Error, Result};
