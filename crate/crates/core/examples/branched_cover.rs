//! Build the degree-2 cover of Fulton's fan branched over four rays and
//! check it against the covering axioms and Riemann–Hurwitz.

use std::sync::Arc;

use fanbranch::monodromy::MonodromyContext;

fn main() -> fanbranch::Result<()> {
    let ctx = MonodromyContext::new(Arc::new(fanbranch::data::fan("fulton")?))?;
    let a = ctx.assignment_for_branch_rays(&[0, 2, 5, 7])?;
    println!("assignment: {}", serde_json::to_string(&a)?);
    let cover = ctx.build_cover(&a)?;
    cover.validate().expect("monodromy covers satisfy the axioms");
    println!(
        "{} cells: {} over rays, {} over walls, {} maximal; maximal cover: {}",
        cover.len(),
        cover.ray_cells().len(),
        cover.wall_cells().len(),
        cover.maximal_cells().len(),
        cover.is_maximal()?
    );
    let d = a.degree as i64;
    let defect: i64 = (0..ctx.fan().num_rays()).map(|r| d - ctx.ray_monodromy(&a, r).cycle_count() as i64).sum();
    println!("Euler characteristic {} = 2·{d} - {defect}", cover.euler_characteristic());
    for c in cover.ramification_cells() {
        println!("ramified: cell {c} over ray {:?}, weight {}", cover.ray_of(c), cover.cell(c).weight);
    }
    Ok(())
}
