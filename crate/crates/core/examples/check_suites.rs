//! Running invariant suites through the library and summarising the report.
//!
//! `cargo run --example check_suites -- heat ball`

use poincare::cli::{run_suite, SuiteInput};
use poincare::fuchsian::MultiplierSystem;
use poincare::Result;

fn main() -> Result<()> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let names = if names.is_empty() { vec!["specfun".into(), "multiplier".into(), "hrecurrence".into()] } else { names };
    let inp = SuiteInput::new(1, MultiplierSystem::eta_power(0.5)?);
    for name in &names {
        let rep = run_suite(name, &inp)?;
        println!("{:<14} {}", rep.suite, if rep.passed { "pass" } else { "FAIL" });
        for a in &rep.assertions {
            println!("    {:<40} {:>12.3e} {} {:.1e}", a.name, a.measured, if a.passed { "ok" } else { "!!" }, a.tolerance);
        }
    }
    Ok(())
}
