//! Special functions: log-Gamma, digamma, Pochhammer, Gauss 2F1 and relatives.

mod gamma;
mod hyper;

pub use gamma::{digamma, gamma, ln_gamma_real, log_gamma, pochhammer, recip_gamma};
pub use hyper::{
    cheb_t2k, cheb_t2k_shifted, contiguous_residual, gauss_2f1, legendre_p, SeriesControl,
};


use num_complex::Complex64;

pub type ComplexScalar = Complex64;
