//! Weight-k automorphic kernels on the modular group.
//!
//! Layers, bottom up: [`specfun`] and [`quad`] (numerics), [`geom`]
//! (half-plane geometry and weight factors), [`fuchsian`] (the group, ball
//! enumeration, multiplier systems), [`shc`] (transform pipeline between
//! point-pair profiles and spectral multipliers), [`kernels`] (group sums with
//! tail certificates) and [`cli`] (runner, suites, JSON/CSV output).

pub mod error;
pub mod specfun;
pub mod quad;
pub mod geom;
pub mod fuchsian;
pub mod shc;
pub mod kernels;
pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;
