//! Cayley tiles of `Z^n`, lattice coverings of `Z^n` by discrete simplices,
//! and exhaustive search for the degree-diameter function `f(n, d)` of
//! abelian Cayley digraphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`] and [`lattice`]: exact arithmetic, Hermite normal form,
//!   coset reduction and sublattice enumeration.
//! * [`tile`]: the graded order on the nonnegative orthant and the Cayley
//!   tile (one least representative per coset), with silhouette and notch.
//! * [`covering`]: coverings `S°(n,d) + L = Z^n`, their densities and the
//!   lift to continuous coverings.
//! * [`search`]: brute-force `f(n, d)` and the closed-form upper bounds.
//! * [`bounds`]: numeric and exact checks of the four-dimensional volume
//!   estimates (region integrals, notch optimisation).
//! * [`report`] and [`cli`]: stable JSON/CSV output and the command line.

pub mod bounds;
pub mod cli;
pub mod covering;
pub mod error;
pub mod lattice;
pub mod rational;
pub mod report;
pub mod search;
pub mod tile;

pub use covering::{CoveringVerdict, DiscreteSimplex};
pub use error::{Error, Result};
pub use lattice::IntegerLattice;
pub use rational::Rational;
pub use search::SearchReport;
pub use tile::{CayleyTile, OrthantPoint, Silhouette};
