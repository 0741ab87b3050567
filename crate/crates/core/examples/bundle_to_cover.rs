//! Verify filtration data against its splitting, then build the branched
//! cover and function it determines.

use fanbranch::klyachko::{branched_cover_of, chern, dual, flag, necessary_dimension_check, verify, DimensionCheck};
use fanbranch::linalg::qvec;

fn main() -> fanbranch::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "eikelberg".into());
    let b = fanbranch::data::bundle(&name)?;
    let cert = b.certificate.expect("bundled fixtures carry a splitting");
    match verify(&b.data, &cert) {
        Ok(()) => println!("{name}: splitting verified"),
        Err(v) => {
            println!("{name}: {v}");
            return Ok(());
        }
    }
    if let DimensionCheck::Ok { .. } = necessary_dimension_check(&b.data) {
        println!("dimension screen passes");
    }
    let ch = chern(&b.data, &cert)?;
    println!("Chern data trivial: {}", ch.is_trivial());
    let (cover, psi) = branched_cover_of(&b.data, &cert)?;
    println!("cover of degree {} with {} cells", cover.degree(), cover.len());
    for (i, &c) in psi.cells().iter().enumerate() {
        let slope: Vec<String> = psi.slopes()[i].iter().map(|x| x.to_string()).collect();
        println!("  maximal cell {c} over {:?}: ({})", cover.fan().face(cover.cell(c).base).rays, slope.join(", "));
    }
    let v = qvec(&cover.fan().ray(0).iter().map(|x| 3 * x).collect::<Vec<_>>());
    println!("flag at 3·v_0: dims {:?}", flag(&b.data, &cert, &v)?.iter().map(|s| s.dim()).collect::<Vec<_>>());
    let d = dual(&b.data);
    verify(&d, &cert.dual()).expect("duals of verified data verify");
    println!("dual verified; dual of dual equal: {}", dual(&d) == b.data);
    Ok(())
}
