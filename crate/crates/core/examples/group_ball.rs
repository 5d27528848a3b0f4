//! Enumerating the modular group inside a displacement ball and counting
//! lattice points by hyperbolic distance.

use poincare::fuchsian::{counting_n, enumerate_ball};
use poincare::geom::Point;
use poincare::Result;

fn main() -> Result<()> {
    let z = Point::new(0.0, 2.0)?;
    let ball = enumerate_ball(z, z, 5.0)?;
    println!("{} elements with sigma(2i, g 2i) <= 5 (certified: {})", ball.len(), ball.certified);
    for row in ball.rows().iter().take(6) {
        println!("  {row:?}");
    }
    for rho in [0.1, 1.0, 2.0, 4.0, 6.0] {
        println!("N({rho}; i, i) = {}", counting_n(rho, Point::I, Point::I)?);
    }
    Ok(())
}
