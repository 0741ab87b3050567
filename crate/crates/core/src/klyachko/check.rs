use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::KlyachkoData;
use crate::linalg::{integer_solve, q, Rational, Subspace};
use crate::pl::ConeMultiset;

/// Outcome of the certificate-free screen. `Ok` is necessary for a splitting
/// to exist but never sufficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionCheck {
    Ok { multisets: Vec<ConeMultiset> },
    Violation { cone: usize, message: String },
}

impl DimensionCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, DimensionCheck::Ok { .. })
    }

    /// Only a violation settles the question.
    pub fn is_conclusive(&self) -> bool {
        !self.is_ok()
    }
}

/// For each maximal cone, recovers the multiplicity of every tuple of jump
/// values by inclusion–exclusion over intersections of the ray filtrations,
/// and requires each multiplicity to be nonnegative and each tuple with
/// positive multiplicity to be the values of an integral functional.
pub fn necessary_dimension_check(data: &KlyachkoData) -> DimensionCheck {
    let fan = data.fan();
    let mut multisets = Vec::with_capacity(fan.num_max_cones());
    for k in 0..fan.num_max_cones() {
        let rays = &fan.max_cone(k).rays;
        let jumps: Vec<Vec<i64>> = rays.iter().map(|&r| data.filtration(r).jumps()).collect();
        let mut memo: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut intersection_dim = |a: &[usize]| -> usize {
            if let Some(&d) = memo.get(a) {
                return d;
            }
            let mut s = Subspace::full(data.rank());
            for (j, &r) in rays.iter().enumerate() {
                if a[j] >= jumps[j].len() {
                    s = Subspace::zero(data.rank());
                    break;
                }
                s = s.intersect(&data.filtration(r).at(jumps[j][a[j]])).unwrap();
            }
            memo.insert(a.to_vec(), s.dim());
            s.dim()
        };
        let sizes: Vec<usize> = jumps.iter().map(Vec::len).collect();
        let mut entries: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
        for a in grid(&sizes) {
            let mut m: i64 = 0;
            for mask in 0u32..(1 << rays.len()) {
                let shifted: Vec<usize> = a.iter().enumerate().map(|(j, &x)| x + ((mask >> j) & 1) as usize).collect();
                let d = intersection_dim(&shifted) as i64;
                m += if mask.count_ones() % 2 == 0 { d } else { -d };
            }
            if m < 0 {
                return DimensionCheck::Violation { cone: k, message: format!("negative multiplicity {m} at jump values {:?}", values(&jumps, &a)) };
            }
            if m == 0 {
                continue;
            }
            let target: Vec<BigInt> = values(&jumps, &a).into_iter().map(BigInt::from).collect();
            let system: Vec<Vec<BigInt>> = rays.iter().map(|&r| fan.ray(r).iter().map(|&x| BigInt::from(x)).collect()).collect();
            match integer_solve(&system, fan.rank(), &target) {
                Some(u) => {
                    let u: Vec<Rational> = u.iter().map(|x| q(x.to_i64().expect("functional fits in 64 bits"))).collect();
                    *entries.entry(u).or_insert(0) += m as u64;
                }
                None => {
                    return DimensionCheck::Violation {
                        cone: k,
                        message: format!("jump values {:?} are not the values of an integral functional", values(&jumps, &a)),
                    }
                }
            }
        }
        multisets.push(ConeMultiset { cone: k, entries: entries.into_iter().collect() });
    }
    DimensionCheck::Ok { multisets }
}

fn values(jumps: &[Vec<i64>], a: &[usize]) -> Vec<i64> {
    a.iter().enumerate().map(|(j, &x)| jumps[j][x]).collect()
}

fn grid(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|p| (0..s).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}
