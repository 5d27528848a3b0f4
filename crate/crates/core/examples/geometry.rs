//! Weight factors on the half-plane: the point-pair phase H_k, the
//! automorphy factor J_g and the cocycle omega_k.

use poincare::geom::{h_k, j_phase, moebius_act, omega_k, pair_metrics, winding_w, Mat2, Point, WeightContext};
use poincare::Result;

fn main() -> Result<()> {
    let ctx = WeightContext::new(0.5)?;
    let (z, w) = (Point::new(0.3, 1.7)?, Point::new(0.0, 2.4)?);
    let g = Mat2::new(2.0, 1.0, 1.0, 1.0)?;
    let m = pair_metrics(z, w);
    println!("u = {:.6}, sigma = {:.6}, d = {:.6}", m.u, m.sigma, m.dist);

    let (gz, gw) = (moebius_act(&g, z), moebius_act(&g, w));
    let lhs = h_k(gz, gw, &ctx);
    let rhs = h_k(z, w, &ctx) * j_phase(&g, z, &ctx) / j_phase(&g, w, &ctx);
    println!("H_k(gz, gw)              = {lhs:.12}");
    println!("J_g(z) H_k(z, w) / J_g(w) = {rhs:.12}");

    let s = Mat2::new(0.0, -1.0, 1.0, 0.0)?;
    println!("w(S, S) = {}, omega_k(S, S) = {:.12}", winding_w(&s, &s)?, omega_k(&s, &s, &ctx)?);
    Ok(())
}
