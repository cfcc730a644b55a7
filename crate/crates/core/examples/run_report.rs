//! A full run as the `lpbm run` command performs it, from body spec files
//! to a JSON report.

use std::path::PathBuf;

use lpbm::cli::{run, RunConfig};

pub fn run_example() -> lpbm::Result<()> {
    let dir = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bodies"));
    let bodies = [dir.join("square.json"), dir.join("disk.json")];
    let cfg = RunConfig {
        seed: 42,
        checks: vec!["firey".into(), "concavity".into(), "pinf_limit".into()],
        p_values: vec![1.5, 2.0, 3.0],
        alpha_count: 11,
        ..RunConfig::default()
    };
    let report = run(&cfg, &bodies)?;
    for job in &report.jobs {
        println!("{:>10} {:>12} p = {:<4} passed {}", job.check, job.functional.as_deref().unwrap_or("-"),
            job.p.map(|p| p.to_string()).unwrap_or_default(), job.passed);
    }
    println!("{} bytes of JSON, exit code {}", report.to_json().len(), report.exit_code());
    Ok(())
}

#[allow(dead_code)]
fn main() -> lpbm::Result<()> {
    run_example()
}
