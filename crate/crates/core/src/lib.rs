//! Finite-semigroup machinery for combinatorially rich (CR) sets.
//!
//! Everything here is pure and allocation-only: Cayley tables and direct
//! products ([`semigroup`]), nonempty finite subsets of the positive integers
//! with block systems and finite unions ([`finset`]), the interleaved-product
//! witness calculus ([`cr`]), block compression of witnesses ([`transfer`]),
//! and witnesses for products of CR sets ([`product`]).
//!
//! Parallelism is pluggable through [`exec::Executor`]; the crate itself only
//! ships the sequential executor.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cr;
pub mod exec;
pub mod finset;
pub mod product;
pub mod semigroup;
pub mod transfer;

mod error;

pub use error::Error;
pub use exec::{Budget, Executor, Sequential};
pub use finset::{BlockSeq, FinSet, SetFamily};
pub use semigroup::{Element, ElementSet, FiniteSemigroup};
