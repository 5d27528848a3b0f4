//! The pre-trace right-hand side and the constants of the sup-norm bound for
//! the modular group.

use poincare::fuchsian::MultiplierSystem;
use poincare::geom::Point;
use poincare::kernels::{digamma_term, modular_domain_inputs, pretrace_rhs, sup_norm_constants};
use poincare::Result;

fn main() -> Result<()> {
    let k = 0.5;
    let ms = MultiplierSystem::eta_power(k)?;
    let s = k + 2.0;
    let inputs = modular_domain_inputs(k, 1, 2.0)?;
    let c = sup_norm_constants(&inputs)?;
    println!("truncated domain diameter {:.6}, C = {:.6}, sqrt(C(|k|+2)) = {:.6}", inputs.diam, c.c, c.script_c);
    println!("digamma term {:.12}", digamma_term(s, s + 1.0, k, 1)?);
    for z in [Point::new(0.0, 2.0)?, Point::new(0.3, 1.2)?] {
        let v = pretrace_rhs(z, s, s + 1.0, 200.0, &ms)?;
        println!("z = {}+{}i: rhs {:.8} (group part {:.8}, {} terms)", z.x, z.y, v.value, v.group_term, v.terms_used);
    }
    Ok(())
}
