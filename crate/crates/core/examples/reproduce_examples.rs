//! Rerun the quick worked examples and diff them against bundled values.

use fanbranch::reproduce::reproduce;
use fanbranch::sweep::SweepOptions;

fn main() -> fanbranch::Result<()> {
    for name in ["fulton-deg2", "eikelberg", "p2-tangent", "fulton-rank3"] {
        let r = reproduce(name, &SweepOptions { jobs: 1, ..Default::default() }, |_, _| {})?;
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.key.as_str()).collect();
        println!("{name}: {} checks, mismatches {failed:?}", r.checks.len());
        for line in &r.report {
            println!("  {line}");
        }
    }
    Ok(())
}
