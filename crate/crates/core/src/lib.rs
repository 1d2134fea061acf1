//! Random linear codes over the BEC multi-draw shuffling channel.
//!
//! An input of `M` binary strands of length `L` is sampled with i.i.d. draw
//! counts, each copy passes through a binary erasure channel, and the reads
//! come back in random order. This crate has the GF(2) algebra, the channel
//! model and its capacity formulas, consistency clustering of reads, and the
//! random linear codebook with genie and exhaustive decoders.
//!
//! `no_std`; needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod cluster;
pub mod codec;
pub mod error;
pub mod gf2;
pub mod seed;

pub use channel::{ChannelParams, ReadPool, Regime, SamplingDistribution, Strand, Symbol};
pub use cluster::{Clustering, ConsistencyGraph};
pub use codec::{Codebook, DecodeResult, DecodeStatus, DecoderConfig};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Eliminator, SolveReport, SolveStatus};
