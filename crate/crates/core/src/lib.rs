//! Passively mobile machines: populations of anonymous multitape Turing
//! machines that compute by pairwise message exchange.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod machine;
pub mod population;
pub mod protocols;
pub mod tmsim;
pub mod analysis;
