use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{IntegerVector, RationalMatrix};
use crate::error::{Error, Result};

/// Nonnegative gcd of all entries (zero for the zero vector).
pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divide a nonzero vector by the gcd of its entries, keeping its direction.
pub fn primitive(v: &[BigInt]) -> Result<IntegerVector> {
    let g = gcd_vec(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Row Hermite normal form of an integer matrix given as rows.
///
/// Nonzero rows come first, pivots strictly increase, pivots are positive and
/// entries above a pivot lie in `[0, pivot)`. Zero rows are dropped. The row
/// lattice is unchanged. Returns the form and, for every output row, the
/// unimodular combination of input rows that produced it, followed by the
/// combinations that produced the dropped zero rows.
pub fn row_hnf(rows: &[IntegerVector]) -> (Vec<IntegerVector>, Vec<IntegerVector>, Vec<IntegerVector>) {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<IntegerVector> = rows.to_vec();
    let mut u: Vec<IntegerVector> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut top = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if top == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in top..n {
                if !a[i][col].is_zero()
                    && best.is_none_or(|b| a[i][col].abs() < a[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(top, b);
            u.swap(top, b);
            let mut done = true;
            for i in top + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].div_floor(&a[top][col]);
                sub_scaled(&mut a, i, top, &f);
                sub_scaled(&mut u, i, top, &f);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[top][col].is_zero() {
            continue;
        }
        if a[top][col].is_negative() {
            for x in a[top].iter_mut().chain(u[top].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..top {
            let f = a[i][col].div_floor(&a[top][col]);
            if !f.is_zero() {
                sub_scaled(&mut a, i, top, &f);
                sub_scaled(&mut u, i, top, &f);
            }
        }
        pivots.push(col);
        top += 1;
    }
    let zero_combos = u.split_off(top);
    a.truncate(top);
    (a, u, zero_combos)
}

fn sub_scaled(m: &mut [IntegerVector], target: usize, source: usize, f: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s) {
        *x -= f * y;
    }
}

/// Lattice basis of `{x ∈ Z^cols : m·x = 0}` for an integer matrix given by
/// rows, in row Hermite normal form.
pub fn integer_kernel(rows: &[IntegerVector], cols: usize) -> Vec<IntegerVector> {
    // Row-reduce the transpose; the transforms of its zero rows span the kernel.
    let transposed: Vec<IntegerVector> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    if rows.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    let (_, _, kernel) = row_hnf(&transposed);
    if kernel.is_empty() {
        return kernel;
    }
    row_hnf(&kernel).0
}

/// An integer solution of `m·x = b`, if one exists.
pub fn integer_solve(rows: &[IntegerVector], cols: usize, b: &[BigInt]) -> Option<IntegerVector> {
    let augmented: Vec<IntegerVector> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(-bi.clone());
            r
        })
        .collect();
    let kernel = integer_kernel(&augmented, cols + 1);
    // Move the homogenizing coordinate to the front; its gcd over the lattice
    // then sits in the first Hermite row.
    let rotated: Vec<IntegerVector> = kernel
        .iter()
        .map(|k| std::iter::once(k[cols].clone()).chain(k[..cols].iter().cloned()).collect())
        .collect();
    let (h, _, _) = row_hnf(&rotated);
    let first = h.first()?;
    if first[0].is_one() {
        Some(first[1..].to_vec())
    } else {
        None
    }
}

/// Rank of a small integer matrix. Fraction-free elimination in checked
/// 128-bit arithmetic, falling back to rational elimination on overflow.
pub fn integer_rank(rows: &[Vec<i64>], cols: usize) -> usize {
    bareiss_rank(rows, cols).unwrap_or_else(|| {
        super::rank(&RationalMatrix::from_i64_rows(cols, rows))
    })
}

fn bareiss_rank(rows: &[Vec<i64>], cols: usize) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let n = a.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, p);
        let piv = a[rank][col];
        for i in rank + 1..n {
            let lead = a[i][col];
            for j in col + 1..cols {
                let v = piv.checked_mul(a[i][j])?.checked_sub(lead.checked_mul(a[rank][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][col] = 0;
        }
        prev = piv;
        rank += 1;
    }
    Some(rank)
}
