//! Exact computer algebra for the (p,q)-deformed calculus: twin-basic
//! numbers, normal ordering of `X`, `D_{p,q}`, `N_p` words, generalized
//! Stirling and Bell numbers, Touchard polynomials of order `m`, and a
//! verification suite for the identities relating them.

pub mod cli;
pub mod error;
pub mod laurent;
pub mod operator;
pub mod pqcore;
pub mod stirling;
pub mod touchard;
pub mod verify;

pub use error::{Error, Result};
