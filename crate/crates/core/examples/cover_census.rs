//! Count monodromy assignments and tabulate branch sets up to the fan's
//! symmetries.
//!
//! cargo run --example cover_census -- fulton 2

use std::collections::HashSet;
use std::sync::Arc;

use fanbranch::census::branch_census;
use fanbranch::monodromy::{canonical_class, MonodromyContext};

fn main() -> fanbranch::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fulton".into());
    let d: usize = args.next().map_or(2, |s| s.parse().expect("degree"));
    let ctx = MonodromyContext::new(Arc::new(fanbranch::data::fan(&name)?))?;
    println!("{name}: {} generators, {} assignments of degree {d}", ctx.num_generators(), ctx.count(d));
    if ctx.count(d) <= 100_000 {
        let classes: HashSet<_> = ctx.assignments(d).map(|a| canonical_class(&a)).collect();
        println!("{} conjugacy classes", classes.len());
    }
    let census = branch_census(&ctx, d);
    println!("{} with nonempty branch set and no two adjacent branch rays", census.admissible.len());
    for o in &census.orbits {
        println!("  {:?} and {} more, pairwise distances {:?}", o.representative, o.members.len() - 1, o.distances);
    }
    Ok(())
}
