//! Torus partition functions of the dense and dilute loop models.
//!
//! Three routes to the same numbers: brute-force lattice enumeration
//! ([`lattice`]), periodic Temperley–Lieb transfer matrices with Markov
//! traces ([`transfer`]), and exact conformal q-series ([`cft`]), plus the
//! arithmetic ([`arith`]) and Bezout tables ([`bezout`]) that glue them.

pub mod error;
pub mod series;
pub mod lattice;
pub mod transfer;

pub use error::{Error, Result};
pub mod arith;
pub mod bezout;
pub mod cft;
pub mod acceptance;
pub use series::{BiSeries, Coeff, CosPoly, QSeries, Rational};
