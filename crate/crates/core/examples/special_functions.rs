//! Gamma, digamma, the Gauss series and Ferrers functions.

use poincare::specfun::{cheb_t2k, digamma, gamma, gauss_2f1, legendre_p, SeriesControl};
use poincare::{Complex64, Result};

fn main() -> Result<()> {
    let half = gamma(Complex64::new(0.5, 0.0))?;
    println!("Gamma(1/2)        = {half}  (sqrt(pi) = {})", std::f64::consts::PI.sqrt());
    println!("psi(1)            = {}", digamma(1.0)?);
    let one = Complex64::new(1.0, 0.0);
    let z = 0.5;
    let f = gauss_2f1(one, one, Complex64::new(2.0, 0.0), z, SeriesControl::adaptive(z))?;
    println!("F(1,1;2;1/2)      = {}  (2 ln 2 = {})", f.re, 2.0 * 2f64.ln());
    println!("T_2k(1.5), k=1.3  = {}", cheb_t2k(1.5, 1.3)?);
    println!("P_2.5^0.3(0.6)    = {}", legendre_p(2.5, Complex64::new(0.3, 0.0), 0.6)?);
    Ok(())
}
