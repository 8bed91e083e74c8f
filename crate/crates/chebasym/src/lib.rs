//! Large-degree discrete Chebyshev polynomials through global Airy-type
//! asymptotics, together with exact rational oracles to check them against.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is a pure function of
//! its arguments except for the lazily built coefficient caches in [`airy`]
//! and [`mp`], which are guarded by read-mostly locks.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod airy;
pub mod asymptotics;
pub mod dfun;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod mp;
pub mod numerics;
pub mod phase;
mod quad;

pub use error::{Error, Result};
pub use numerics::{LogComplex, PrecisionCtx, Side};
