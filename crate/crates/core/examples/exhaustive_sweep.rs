//! Sweep every assignment of a degree, writing a resumable cache.
//!
//! cargo run --release --example exhaustive_sweep -- fulton 2 /tmp/fulton.jsonl

use std::path::PathBuf;
use std::sync::Arc;

use fanbranch::sweep::{run_sweep, Sweep, SweepOptions};

fn main() -> fanbranch::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fulton".into());
    let d: usize = args.next().map_or(2, |s| s.parse().expect("degree"));
    let cache = args.next().map(PathBuf::from);
    let sweep = Sweep::new(Arc::new(fanbranch::data::fan(&name)?), d)?;
    let opts = SweepOptions {
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        resume: cache.is_some(),
        cache,
        limit: None,
    };
    let summary = run_sweep(&sweep, &opts, |done, total| eprintln!("{done}/{total}"))?;
    println!("{} of {} assignments", summary.processed, summary.total);
    for (tag, n) in &summary.by_verdict {
        println!("  {tag}: {n}");
    }
    for r in &summary.nontrivial {
        println!("nontrivial: assignment {} over {:?}, ramification {:?}", r.index, r.branch_rays, r.ramification);
    }
    Ok(())
}
