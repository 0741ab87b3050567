//! Exact cone geometry: strictly positive functionals, face and separation
//! tests, and the winding test for cyclic sequences of plane vectors.

use num_traits::{Signed, Zero};

use crate::linalg::{dot, right_nullspace, rref, to_rational, Rational, RationalMatrix, Subspace};

/// A functional `u` on `Q^n` with `u·g > 0` for every generator, if one
/// exists. An empty generator list yields the zero functional.
pub fn positive_functional(n: usize, gens: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if gens.is_empty() {
        return Some(vec![Rational::zero(); n]);
    }
    if gens.iter().any(|g| g.iter().all(|x| x.is_zero())) {
        return None;
    }
    let (red, r) = rref(&RationalMatrix::from_rows(n, gens.to_vec()));
    let pivots: Vec<usize> = (0..r)
        .map(|i| red.row(i).iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    // Coordinates of each generator in the reduced basis of its span.
    let coords: Vec<Vec<Rational>> = gens.iter().map(|g| pivots.iter().map(|&p| g[p].clone()).collect()).collect();
    let w = positive_in_full_span(r, &coords)?;
    let mut u = vec![Rational::zero(); n];
    for (wi, &p) in w.into_iter().zip(&pivots) {
        u[p] = wi;
    }
    Some(u)
}

fn positive_in_full_span(r: usize, ys: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if r == 1 {
        let s = ys[0][0].signum();
        return ys.iter().all(|y| y[0].signum() == s).then(|| vec![s]);
    }
    let mut total = vec![Rational::zero(); r];
    let mut found = false;
    for subset in combinations(ys.len(), r - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| ys[i].clone()).collect();
        let kernel = right_nullspace(&RationalMatrix::from_rows(r, rows));
        if kernel.len() != 1 {
            continue;
        }
        let normal = to_rational(&kernel[0]);
        let signs: Vec<Rational> = ys.iter().map(|y| dot(&normal, y)).collect();
        let orient = if signs.iter().all(|s| !s.is_negative()) {
            Rational::from_integer(1.into())
        } else if signs.iter().all(|s| !s.is_positive()) {
            Rational::from_integer((-1).into())
        } else {
            continue;
        };
        for (t, x) in total.iter_mut().zip(&normal) {
            *t += x * &orient;
        }
        found = true;
    }
    (found && ys.iter().all(|y| dot(&total, y).is_positive())).then_some(total)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A functional vanishing on `zero`, strictly positive on `pos` and strictly
/// negative on `neg`, if one exists.
pub fn separating_functional(
    n: usize,
    zero: &[Vec<Rational>],
    pos: &[Vec<Rational>],
    neg: &[Vec<Rational>],
) -> Option<Vec<Rational>> {
    let perp = Subspace::span(n, zero).expect("consistent lengths").annihilator();
    let w = perp.basis();
    let image = |v: &Vec<Rational>, sign: bool| -> Vec<Rational> {
        w.iter()
            .map(|wi| {
                let d = dot(wi, v);
                if sign { d } else { -d }
            })
            .collect()
    };
    let ys: Vec<Vec<Rational>> = pos.iter().map(|v| image(v, true)).chain(neg.iter().map(|v| image(v, false))).collect();
    let c = positive_functional(w.len(), &ys)?;
    let mut u = vec![Rational::zero(); n];
    for (ci, wi) in c.iter().zip(w) {
        for (uj, wj) in u.iter_mut().zip(wi) {
            *uj += ci * wj;
        }
    }
    Some(u)
}

fn det2(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Whether consecutive plane vectors (cyclically) bound cones of one common
/// orientation that together wind exactly once around the origin.
pub fn winds_once(cycle: &[Vec<Rational>]) -> bool {
    let k = cycle.len();
    if k < 3 {
        return false;
    }
    let orient = det2(&cycle[0], &cycle[1]).signum();
    if orient.is_zero() {
        return false;
    }
    let mut passes = 0;
    for i in 0..k {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % k];
        if det2(a, b).signum() != orient {
            return false;
        }
        let x = &cycle[0];
        if (det2(a, x) * &orient).is_positive() && !(det2(x, b) * &orient).is_negative() {
            passes += 1;
        }
    }
    passes == 1
}
