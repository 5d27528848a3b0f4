//! Geometric and resolvent kernels as truncated group sums with tail bounds,
//! and their transformation under the group.

use poincare::fuchsian::{GroupElement, MultiplierSystem};
use poincare::geom::{j_phase, moebius_act, Point};
use poincare::kernels::{geometric_kernel, resolvent_kernel, KernelParams};
use poincare::{Complex64, Result};

fn main() -> Result<()> {
    let ms = MultiplierSystem::eta_power(0.5)?;
    let (z, w) = (Point::new(0.3, 1.7)?, Point::new(0.0, 2.4)?);
    let p = KernelParams::new(Complex64::new(3.0, 0.0), 0.5, 50.0)?;
    let geo = geometric_kernel(z, w, &p, &ms)?;
    let res = resolvent_kernel(z, w, &p, &ms)?;
    println!("geometric  {:.10} +- {:.1e} ({} terms)", geo.value, geo.tail_bound, geo.terms_used);
    println!("resolvent  {:.10} +- {:.1e} ({} terms)", res.value, res.tail_bound, res.terms_used);

    let s = GroupElement::S;
    let moved = geometric_kernel(moebius_act(&s.to_mat2(), z), w, &p, &ms)?;
    let lhs = moved.value / j_phase(&s.to_mat2(), z, ms.weight());
    println!("K(Sz, w)/J_S(z) = {lhs:.10}");
    println!("chi(S) K(z, w)  = {:.10}", ms.chi(&s) * geo.value);
    Ok(())
}
