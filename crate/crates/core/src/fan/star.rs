use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{ConeId, Fan};
use crate::linalg::{integer_kernel, primitive, IntegerVector};

/// The cones containing a base cone `τ`, realized as a fan in the quotient
/// lattice `N / (span τ ∩ N)`.
#[derive(Clone, Debug)]
pub struct Star {
    base: ConeId,
    projection: Vec<Vec<i64>>,
    quotient: Fan,
    to_quotient: HashMap<ConeId, ConeId>,
    from_quotient: Vec<ConeId>,
}

impl Star {
    pub(super) fn new(fan: &Fan, base: ConeId) -> Star {
        let n = fan.rank();
        let tau = &fan.face(base).rays;
        // Rows span the integral functionals vanishing on τ; they give a
        // surjection N → Z^(n - dim τ).
        let rows: Vec<IntegerVector> = tau.iter().map(|&r| fan.ray(r).iter().map(|&x| BigInt::from(x)).collect()).collect();
        let projection: Vec<Vec<i64>> = integer_kernel(&rows, n)
            .into_iter()
            .map(|k| k.iter().map(|x| x.to_i64().expect("small")).collect())
            .collect();
        let qrank = projection.len();
        let up: Vec<ConeId> = std::iter::once(base).chain(fan.above(base).iter().copied()).collect();
        let step = fan.face(base).dim + 1;

        // Rays of the star: rays ρ with τ + ρ a cone one dimension up.
        let mut star_rays: Vec<usize> = Vec::new();
        for &c in &up {
            if fan.face(c).dim == step {
                let extra: Vec<usize> = fan.face(c).rays.iter().copied().filter(|r| !tau.contains(r)).collect();
                star_rays.push(c);
                debug_assert!(!extra.is_empty());
            }
        }
        let mut image_rays: Vec<Vec<i64>> = Vec::new();
        let mut ray_of_cone: HashMap<ConeId, usize> = HashMap::new();
        for &c in &star_rays {
            let r = *fan.face(c).rays.iter().find(|r| !tau.contains(r)).unwrap();
            let v = fan.ray(r);
            let img: IntegerVector = projection
                .iter()
                .map(|p| BigInt::from(p.iter().zip(v).map(|(a, b)| a * b).sum::<i64>()))
                .collect();
            let img: Vec<i64> = primitive(&img).expect("nonzero image").iter().map(|x| x.to_i64().unwrap()).collect();
            ray_of_cone.insert(c, image_rays.len());
            image_rays.push(img);
        }
        let image_of = |c: ConeId| -> Vec<usize> {
            let mut rs: Vec<usize> = star_rays
                .iter()
                .filter(|&&s| fan.is_face_of(s, c))
                .map(|s| ray_of_cone[s])
                .collect();
            rs.sort_unstable();
            rs
        };
        let max_up: Vec<ConeId> = fan
            .max_cones()
            .iter()
            .copied()
            .filter(|&m| fan.is_face_of(base, m))
            .collect();
        let quotient = Fan::build(qrank, image_rays, max_up.iter().map(|&m| image_of(m)).collect())
            .expect("the star of a cone in a fan is a fan");
        let mut to_quotient = HashMap::new();
        let mut from_quotient = vec![usize::MAX; quotient.faces().len()];
        for &c in &up {
            let img = image_of(c);
            let id = quotient.face_id(&img).expect("image of a cone is a cone of the star");
            to_quotient.insert(c, id);
            from_quotient[id] = c;
        }
        Star { base, projection, quotient, to_quotient, from_quotient }
    }

    pub fn base(&self) -> ConeId {
        self.base
    }

    /// The star as a fan in the quotient lattice.
    pub fn quotient(&self) -> &Fan {
        &self.quotient
    }

    /// Integer matrix of the quotient map `N → N(τ)`.
    pub fn projection(&self) -> &[Vec<i64>] {
        &self.projection
    }

    /// Cells of the star, as cones of the original fan containing the base.
    pub fn cells(&self) -> &[ConeId] {
        &self.from_quotient
    }

    pub fn to_quotient(&self, cone: ConeId) -> Option<ConeId> {
        self.to_quotient.get(&cone).copied()
    }
}
