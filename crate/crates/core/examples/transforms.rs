//! The profile / test function / spectral coefficient pipeline on the
//! wave test function family.

use poincare::shc::{
    forward_h, h_continued, h_gs_closed, phi_inverse, q_prime, EvenTestFunction, ProfileFunction, WaveTestParams,
};
use poincare::{Complex64, Result};

fn main() -> Result<()> {
    let k = 0.5;
    let p = WaveTestParams::new(Complex64::new(2.5, 0.0), k)?;
    let phi = ProfileFunction::phi_s(&p)?;
    println!("   r   forward pipeline          closed form");
    for r in [0.0, 0.5, 1.0, 2.0] {
        let r = Complex64::new(r, 0.0);
        println!("{:4}   {:.14}   {:.14}", r.re, forward_h(&phi, r, k)?.value.re, h_gs_closed(&p, r)?.re);
    }

    let g = EvenTestFunction::g_s(&p)?;
    for x in [0.0, 1.0, 4.0] {
        let back = phi_inverse(|y| q_prime(&g, y).0, x, k)?;
        println!("profile({x}) = {:.12}, recovered {:.12}", phi.eval(x).re, back.value.re);
    }

    let left = WaveTestParams::unchecked(Complex64::new(-0.7, 0.3), 0.0);
    println!("continued coefficient at s = -0.7+0.3i, r = 1: {:.10}", h_continued(&left, Complex64::new(1.0, 0.0), 2)?);
    Ok(())
}
