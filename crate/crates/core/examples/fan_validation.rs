//! Load a fan (bundled name or JSON path) and print its combinatorics.
//!
//! cargo run --example fan_validation -- fulton

use std::sync::Arc;

fn main() -> fanbranch::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fulton".into());
    let fan = Arc::new(fanbranch::io::fan_by_name_or_path(&name)?);
    println!(
        "{}: rank {}, {} rays, {} maximal cones, {} walls, complete: {}",
        name,
        fan.rank(),
        fan.num_rays(),
        fan.num_max_cones(),
        fan.walls().len(),
        fan.is_complete()?
    );
    for k in 0..fan.num_max_cones() {
        let cone = fan.max_cone(k);
        let relations = fan.wall_relation(k)?;
        println!("cone {k}: rays {:?}, relations among them {:?}", cone.rays, relations);
    }
    for r in 0..fan.num_rays() {
        if let Some(link) = fan.ray_link(r) {
            println!("ray {r} {:?}: link through cones {:?}", fan.ray(r), link.cones);
        }
    }
    Ok(())
}
