//! The full verification table, as run by `liouville verify`.

use liouville::cli::{verification_checks, RunConfig};

fn main() -> liouville::Result<()> {
    let config = RunConfig {
        radius: 5.0,
        ..RunConfig::default()
    };
    for c in verification_checks(&config, false)? {
        println!(
            "{} {:<36} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(())
}
