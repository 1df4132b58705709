//! Spectral fluctuation statistics of prime number sequences.
//!
//! Primes are treated as the levels of a quantum spectrum: they are sieved
//! ([`sieve`]), unfolded to unit mean density ([`unfold`]), and their
//! fluctuations ([`spectral`]) are compared with random-matrix and Poisson
//! reference curves ([`ensembles`], [`rmt_mc`]) and with the Berry-Robnik
//! interpolation between them ([`fitting`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ensembles;
pub mod error;
pub mod fitting;
pub mod numeric;
pub mod numfmt;
pub mod rmt_mc;
pub mod sieve;
pub mod spectral;
pub mod unfold;

pub use error::{Error, Result};
