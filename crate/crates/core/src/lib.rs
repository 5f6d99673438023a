//! Densities of primes with prescribed first invariant factor for reductions
//! of elliptic curves, computed from adelic Galois images.

pub mod arith;
pub mod coincidence;
pub mod density;
pub mod error;
pub mod ffcurve;
pub mod glgroup;
pub mod harness;
pub mod interval;

pub use error::{Error, Result};
