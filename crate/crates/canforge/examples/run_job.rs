//! Drive the whole pipeline programmatically from a job specification — the
//! same code path as `canforge run job.toml`.
//!
//! Run: cargo run --example run_job

use canforge::job::{resolve, run, JobSpec};

fn main() {
    let spec: JobSpec = toml::from_str(
        r#"
        field = "Q"
        factors = ["x", "y"]
        flags = "all-maximal"
        orders = [4, 5]
        analyses = ["classify", "charts", "quiver"]
        "#,
    )
    .unwrap();
    let job = resolve(&spec).unwrap();
    let out = run(&job).unwrap();
    println!("exit code would be {}", out.status.exit_code());
    println!("files produced:");
    for (name, bytes) in &out.files {
        println!("  {name} ({} bytes)", bytes.len());
    }
    let summary = &out.report.verdict_summary;
    println!(
        "certified: {}  caveats: {:?}",
        summary.certified, summary.caveats
    );
}
