//! The eta-power multiplier system: values on generators and its
//! consistency with the weight-k cocycle on random words.

use poincare::fuchsian::{GroupElement, MultiplierSystem};
use poincare::Result;

fn main() -> Result<()> {
    for k in [0.5, 1.0, 1.3] {
        let ms = MultiplierSystem::eta_power(k)?;
        println!(
            "k = {k}: sign {:+}, chi(T) = {:.6}, chi(S) = {:.6}, chi(-I) = {:.6}, sweep residual {:.1e}",
            ms.convention_sign,
            ms.chi(&GroupElement::T),
            ms.chi(&GroupElement::S),
            ms.chi(&GroupElement::MINUS_IDENTITY),
            ms.sweep_residual(1000, 42, 12)
        );
    }
    Ok(())
}
