//! Solve for the piecewise-linear functions on two covers and decide
//! whether all of them are trivial.

use std::sync::Arc;

use fanbranch::monodromy::MonodromyContext;
use fanbranch::pl::{group_triviality_of, solve, values_at_rays, verify_verdict, Mode, Verdict};

fn report(name: &str, rays: &[usize]) -> fanbranch::Result<()> {
    let ctx = MonodromyContext::new(Arc::new(fanbranch::data::fan(name)?))?;
    let cover = Arc::new(ctx.build_cover(&ctx.assignment_for_branch_rays(rays)?)?);
    let system = values_at_rays(&cover)?;
    println!(
        "{name} branched over {rays:?}: {}x{} system of rank {}",
        system.matrix.len(),
        system.columns.len(),
        system.rank()
    );
    let basis = solve(cover, Mode::Integral)?;
    println!("  {} functions, {} beyond the linear ones", basis.dim(), basis.complement().len());
    let verdict = group_triviality_of(&basis);
    assert!(verify_verdict(&basis, &verdict));
    match verdict {
        Verdict::AllTrivial(c) => println!("  all trivial: {}", c.tag()),
        Verdict::Nontrivial(f) => {
            println!("  nontrivial witness:");
            for (k, m) in f.multisets().iter().enumerate() {
                let us: Vec<String> = m
                    .entries
                    .iter()
                    .map(|(u, _)| format!("({})", u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect();
                println!("    cone {k}: {}", us.join(" "));
            }
        }
    }
    Ok(())
}

fn main() -> fanbranch::Result<()> {
    report("fulton", &[0, 2, 5, 7])?;
    report("fulton", &[])?;
    report("eikelberg", &[0, 5])
}
