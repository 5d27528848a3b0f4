//! Free and automorphic heat kernels, the heat-equation residual and the
//! Poisson kernel by subordination.

use poincare::fuchsian::MultiplierSystem;
use poincare::geom::Point;
use poincare::kernels::{heat_kernel_m, heat_pde_residual, heat_pointpair, poisson_free, Stencil};
use poincare::{Complex64, Result};

fn main() -> Result<()> {
    for rho in [0.0, 0.5, 1.0, 2.0, 4.0] {
        println!("K(t=1; rho={rho}) k=0: {:.6e}  k=0.5: {:.6e}", heat_pointpair(1.0, rho, 0.0)?, heat_pointpair(1.0, rho, 0.5)?);
    }
    let (z, w) = (Point::I, Point::new(1.0, 2.0)?);
    let pde = heat_pde_residual(1.0, z, w, 0.5, 1e-3, Stencil::Five)?;
    println!("heat equation residual at k = 0.5: {:.2e} (phase sign {:+})", pde.best, pde.best_sign);

    let ms = MultiplierSystem::eta_power(0.5)?;
    let v = heat_kernel_m(0.5, Point::new(0.2, 1.1)?, Point::new(-0.1, 1.6)?, 30.0, &ms)?;
    println!("automorphic heat kernel t=0.5: {:.8} (tail <= {:.2e})", v.value, v.tail_bound);

    for u in [0.5, 1.0, 2.0] {
        let p = poisson_free(u, Complex64::new(0.0, 0.0), z, w, 0.5)?;
        println!("free Poisson kernel u={u}: {:.10}", p.value);
    }
    Ok(())
}
