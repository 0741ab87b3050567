//! Exact rational and integer linear algebra on a small matrix.

use fanbranch::linalg::{integer_kernel, integer_solve, rank, right_nullspace, row_hnf, zvec, RationalMatrix, Subspace};

fn main() -> fanbranch::Result<()> {
    let rows = vec![vec![2, 4, -6, 8], vec![1, 3, 0, 1], vec![3, 7, -6, 9]];
    let m = RationalMatrix::from_i64_rows(4, &rows);
    println!("matrix:\n{m:?}rank {}", rank(&m));
    for v in right_nullspace(&m) {
        println!("rational kernel vector {v:?}");
    }

    let int_rows: Vec<_> = rows.iter().map(|r| zvec(r)).collect();
    let (hnf, _, _) = row_hnf(&int_rows);
    println!("Hermite normal form:");
    for r in &hnf {
        println!("  {r:?}");
    }
    println!("lattice kernel: {:?}", integer_kernel(&int_rows, 4));
    match integer_solve(&int_rows, 4, &zvec(&[2, 1, 3])) {
        Some(x) => println!("integer solution of m x = (2, 1, 3): {x:?}"),
        None => println!("m x = (2, 1, 3) has no integer solution"),
    }

    let a = Subspace::span_i64(3, &[vec![1, 0, 0], vec![0, 1, 1]])?;
    let b = Subspace::span_i64(3, &[vec![0, 1, 0], vec![0, 0, 1]])?;
    println!("dim A ∩ B = {}, dim A + B = {}", a.intersect(&b)?.dim(), a.sum(&b)?.dim());
    println!("annihilator of A: {:?}", a.annihilator().basis());
    Ok(())
}
