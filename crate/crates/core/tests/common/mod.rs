//! Random fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use fanbranch::klyachko::{Filtration, KlyachkoData, Piece, SplittingCertificate};
use fanbranch::linalg::{q, rank, Rational, RationalMatrix, Subspace};
use fanbranch::Fan;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A random invertible integer matrix with small entries.
pub fn invertible(rng: &mut ChaCha8Rng, r: usize) -> Vec<Vec<Rational>> {
    loop {
        let m: Vec<Vec<Rational>> = (0..r).map(|_| (0..r).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        if rank(&RationalMatrix::from_rows(r, m.clone())) == r {
            return m;
        }
    }
}

/// Image of a subspace under `x ↦ x·g`.
pub fn transform(s: &Subspace, g: &[Vec<Rational>]) -> Subspace {
    let r = g.len();
    let rows: Vec<Vec<Rational>> = s
        .basis()
        .iter()
        .map(|x| (0..r).map(|j| x.iter().zip(g).map(|(a, row)| a * &row[j]).sum()).collect())
        .collect();
    Subspace::span(r, &rows).unwrap()
}

/// Applies a change of basis of the fiber and a twist by a character.
pub fn twisted(data: &KlyachkoData, cert: &SplittingCertificate, g: &[Vec<Rational>], u0: &[i64]) -> (KlyachkoData, SplittingCertificate) {
    let fan = data.fan().clone();
    let filtrations = (0..fan.num_rays())
        .map(|r| {
            let shift: i64 = u0.iter().zip(fan.ray(r)).map(|(a, b)| a * b).sum();
            let steps = data.filtration(r).steps().iter().map(|(t, s)| (t + shift, transform(s, g))).collect();
            Filtration::new(data.rank(), steps).unwrap()
        })
        .collect();
    let cones = cert
        .cones
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|p| Piece { u: p.u.iter().zip(u0).map(|(a, b)| a + b).collect(), subspace: transform(&p.subspace, g) })
                .collect()
        })
        .collect();
    (KlyachkoData::new(fan, data.rank(), filtrations).unwrap(), SplittingCertificate { cones })
}

/// Random decreasing filtrations on every ray (not necessarily compatible).
pub fn random_data(rng: &mut ChaCha8Rng, fan: Arc<Fan>, r: usize) -> KlyachkoData {
    let filtrations = (0..fan.num_rays())
        .map(|_| {
            let g = invertible(rng, r);
            let mut dims: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.6)).collect();
            dims.sort_unstable_by(|a, b| b.cmp(a));
            let mut t = rng.gen_range(-6..=2);
            let mut steps = vec![(t, Subspace::full(r))];
            for d in dims.into_iter().filter(|&d| d > 0 && d < r) {
                t += rng.gen_range(1..=4);
                steps.push((t, Subspace::span(r, &g[..d]).unwrap()));
            }
            Filtration::new(r, steps).unwrap()
        })
        .collect();
    KlyachkoData::new(fan, r, filtrations).unwrap()
}

/// The trivial bundle `⊕ O(div χ^u)` over every cone, in the basis given by
/// the rows of `g`.
pub fn split_data(fan: Arc<Fan>, characters: &[Vec<i64>], g: &[Vec<Rational>]) -> (KlyachkoData, SplittingCertificate) {
    let r = characters.len();
    let lines: Vec<Subspace> = (0..r).map(|i| Subspace::span(r, &[g[i].clone()]).unwrap()).collect();
    let filtrations = (0..fan.num_rays())
        .map(|ray| {
            let values: Vec<i64> = characters.iter().map(|u| u.iter().zip(fan.ray(ray)).map(|(a, b)| a * b).sum()).collect();
            let mut ts = values.clone();
            ts.sort_unstable();
            ts.dedup();
            let steps = ts
                .iter()
                .map(|&t| {
                    let s = values
                        .iter()
                        .zip(&lines)
                        .filter(|(&x, _)| x >= t)
                        .fold(Subspace::zero(r), |acc, (_, l)| acc.sum(l).unwrap());
                    (t, s)
                })
                .collect();
            Filtration::new(r, steps).unwrap()
        })
        .collect();
    let mut merged: std::collections::BTreeMap<Vec<i64>, Subspace> = Default::default();
    for (u, l) in characters.iter().zip(&lines) {
        let slot = merged.entry(u.clone()).or_insert_with(|| Subspace::zero(r));
        *slot = slot.sum(l).unwrap();
    }
    let pieces: Vec<Piece> = merged.into_iter().map(|(u, subspace)| Piece { u, subspace }).collect();
    let cones = vec![pieces; fan.num_max_cones()];
    (KlyachkoData::new(fan, r, filtrations).unwrap(), SplittingCertificate { cones })
}
