//! Run a named verification suite from code and print its summary.
use twistnet::suites::{run_suite, SuiteConfig};

fn main() -> twistnet::Result<()> {
    let suite = std::env::args().nth(1).unwrap_or_else(|| "walls".into());
    let report = run_suite(&SuiteConfig { suite, ..Default::default() })?;
    print!("{}", report.summary());
    Ok(())
}
