//! Running a configuration file through the report pipeline with a basis cache.
//!
//! `cargo run --example job_report -- configs/b2_r3.toml`

use std::path::PathBuf;

use nichols::cli::{run, Command, JobConfig, RunOptions};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/mixed36.toml"));
    let config = JobConfig::load(&path).unwrap_or_else(|e| panic!("{e}"));
    let opts = RunOptions {
        cache_dir: Some(std::env::temp_dir().join("nichols-cache")),
        ..RunOptions::default()
    };
    let report = run(config, Command::Roots, &opts).unwrap();
    print!("{}", report.to_text());
}
