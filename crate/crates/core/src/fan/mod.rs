//! Fans stored combinatorially: primitive ray generators plus maximal cones
//! given as ray-index sets, with the full face poset derived at construction.

pub mod geometry;
mod star;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, left_nullspace, primitive, q, qvec, rank, IntegerVector, Rational, RationalMatrix, Subspace};
use geometry::{positive_functional, separating_functional, winds_once};

pub use star::Star;

/// Index into [`Fan::faces`].
pub type ConeId = usize;

/// A cone of the fan, named by its extremal rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub dim: usize,
    pub rays: Vec<usize>,
}

/// Inequality description used for exact membership tests.
#[derive(Clone, Debug)]
struct HalfSpaces {
    equations: Vec<Vec<Rational>>,
    inequalities: Vec<Vec<Rational>>,
}

/// The cyclic arrangement of maximal cones and walls around a ray. `walls[i]`
/// is shared by `cones[i]` and `cones[(i + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayLink {
    pub cones: Vec<usize>,
    pub walls: Vec<usize>,
}

/// Plain serialized form of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanData {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    faces: Vec<Cone>,
    index: HashMap<Vec<usize>, ConeId>,
    max_cones: Vec<ConeId>,
    above: Vec<Vec<ConeId>>,
    below: Vec<Vec<ConeId>>,
    walls: Vec<ConeId>,
    wall_cones: Vec<Vec<usize>>,
    cones_of_face: Vec<Vec<usize>>,
    geometry: Vec<HalfSpaces>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cone_rays() == other.max_cone_rays()
    }
}

impl Eq for Fan {}

impl Fan {
    /// Builds and validates a fan. Ray vectors are replaced by their
    /// primitive forms.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if rank == 0 {
            return Err(Error::InvalidFan("lattice rank must be at least 1".into()));
        }
        Fan::build(rank, rays, max_cones)
    }

    pub(crate) fn build(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::InvalidFan(format!("ray {i} has length {} in a rank-{rank} lattice", r.len())));
            }
            let big: IntegerVector = r.iter().map(|&x| BigInt::from(x)).collect();
            let p = primitive(&big).map_err(|_| Error::InvalidFan(format!("ray {i} is the zero vector")))?;
            prim.push(p.iter().map(|x| x.to_i64().expect("fits")).collect::<Vec<i64>>());
        }
        for i in 0..prim.len() {
            for j in 0..i {
                if prim[i] == prim[j] {
                    return Err(Error::InvalidFan(format!("duplicate ray: rays {j} and {i} span the same ray")));
                }
            }
        }
        let qrays: Vec<Vec<Rational>> = prim.iter().map(|r| qvec(r)).collect();

        let mut max_sets = Vec::with_capacity(max_cones.len());
        for (k, c) in max_cones.iter().enumerate() {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if let Some(&bad) = set.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::InvalidFan(format!("cone {k} refers to missing ray {bad}")));
            }
            max_sets.push(set.into_iter().collect::<Vec<usize>>());
        }

        // Faces of every maximal cone, by ray subsets admitting a supporting functional.
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        all.insert(Cone { dim: 0, rays: Vec::new() });
        for (k, rs) in max_sets.iter().enumerate() {
            if rs.len() > 20 {
                return Err(Error::InvalidFan(format!("cone {k} has too many rays")));
            }
            let gens: Vec<Vec<Rational>> = rs.iter().map(|&i| qrays[i].clone()).collect();
            if positive_functional(rank, &gens).is_none() {
                return Err(Error::InvalidFan(format!("cone {k} is not strongly convex")));
            }
            for mask in 0u32..(1 << rs.len()) {
                let sub: Vec<usize> = (0..rs.len()).filter(|b| mask >> b & 1 == 1).map(|b| rs[b]).collect();
                let zero: Vec<Vec<Rational>> = sub.iter().map(|&i| qrays[i].clone()).collect();
                let rest: Vec<Vec<Rational>> =
                    rs.iter().filter(|i| !sub.contains(i)).map(|&i| qrays[i].clone()).collect();
                if separating_functional(rank, &zero, &rest, &[]).is_some() {
                    let dim = rank_of(rank, &zero);
                    all.insert(Cone { dim, rays: sub });
                } else if sub.len() == 1 {
                    return Err(Error::InvalidFan(format!("ray {} is not extremal in cone {k}", sub[0])));
                }
            }
        }

        // Pairwise intersections must be common faces.
        for a in 0..max_sets.len() {
            for b in 0..a {
                let (ra, rb) = (&max_sets[a], &max_sets[b]);
                let common: Vec<usize> = ra.iter().filter(|i| rb.contains(i)).copied().collect();
                if common.len() == ra.len() || common.len() == rb.len() {
                    return Err(Error::InvalidFan(format!("cones {b} and {a} are nested or equal")));
                }
                let zero: Vec<Vec<Rational>> = common.iter().map(|&i| qrays[i].clone()).collect();
                let pos: Vec<Vec<Rational>> =
                    ra.iter().filter(|i| !common.contains(i)).map(|&i| qrays[i].clone()).collect();
                let neg: Vec<Vec<Rational>> =
                    rb.iter().filter(|i| !common.contains(i)).map(|&i| qrays[i].clone()).collect();
                if separating_functional(rank, &zero, &pos, &neg).is_none() {
                    return Err(Error::InvalidFan(format!("cones {b} and {a} intersect in a non-face")));
                }
            }
        }

        let mut faces: Vec<Cone> = all.into_iter().collect();
        faces.sort_by(|x, y| (x.dim, &x.rays).cmp(&(y.dim, &y.rays)));
        let index: HashMap<Vec<usize>, ConeId> = faces.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        let max_ids: Vec<ConeId> = max_sets.iter().map(|s| index[s]).collect();
        let n = faces.len();
        let mut above = vec![Vec::new(); n];
        let mut below = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && is_subset(&faces[i].rays, &faces[j].rays) {
                    above[i].push(j);
                    below[j].push(i);
                }
            }
        }
        let cones_of_face: Vec<Vec<usize>> = (0..n)
            .map(|f| (0..max_ids.len()).filter(|&k| max_ids[k] == f || above[f].contains(&max_ids[k])).collect())
            .collect();
        let walls: Vec<ConeId> = (0..n).filter(|&f| faces[f].dim + 1 == rank).collect();
        let wall_cones: Vec<Vec<usize>> = walls.iter().map(|&w| cones_of_face[w].clone()).collect();

        let geometry = (0..n)
            .map(|f| {
                let gens: Vec<Vec<Rational>> = faces[f].rays.iter().map(|&i| qrays[i].clone()).collect();
                let equations = Subspace::span(rank, &gens).expect("lengths").annihilator().basis().to_vec();
                let inequalities = below[f]
                    .iter()
                    .filter(|&&g| faces[g].dim + 1 == faces[f].dim)
                    .map(|&g| {
                        let zero: Vec<Vec<Rational>> = faces[g].rays.iter().map(|&i| qrays[i].clone()).collect();
                        let rest: Vec<Vec<Rational>> = faces[f]
                            .rays
                            .iter()
                            .filter(|i| !faces[g].rays.contains(i))
                            .map(|&i| qrays[i].clone())
                            .collect();
                        separating_functional(rank, &zero, &rest, &[]).expect("facet has a supporting functional")
                    })
                    .collect();
                HalfSpaces { equations, inequalities }
            })
            .collect();

        Ok(Fan {
            rank,
            rays: prim,
            faces,
            index,
            max_cones: max_ids,
            above,
            below,
            walls,
            wall_cones,
            cones_of_face,
            geometry,
        })
    }

    pub fn from_data(data: &FanData) -> Result<Fan> {
        Fan::new(data.rank, data.rays.clone(), data.max_cones.clone())
    }

    pub fn to_data(&self) -> FanData {
        FanData { rank: self.rank, rays: self.rays.clone(), max_cones: self.max_cone_rays() }
    }

    pub fn from_json(text: &str) -> Result<Fan> {
        let data: FanData = serde_json::from_str(text)?;
        Fan::from_data(&data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("serializable")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// All cones, sorted by dimension and then by ray set. The zero cone is
    /// face 0.
    pub fn faces(&self) -> &[Cone] {
        &self.faces
    }

    pub fn face(&self, id: ConeId) -> &Cone {
        &self.faces[id]
    }

    pub fn face_id(&self, rays: &[usize]) -> Option<ConeId> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        self.index.get(&key).copied()
    }

    pub fn zero_cone(&self) -> ConeId {
        0
    }

    pub fn ray_cone(&self, ray: usize) -> ConeId {
        self.index[&vec![ray]]
    }

    /// Face ids of the maximal cones, in input order.
    pub fn max_cones(&self) -> &[ConeId] {
        &self.max_cones
    }

    pub fn num_max_cones(&self) -> usize {
        self.max_cones.len()
    }

    pub fn max_cone(&self, k: usize) -> &Cone {
        &self.faces[self.max_cones[k]]
    }

    pub fn max_cone_rays(&self) -> Vec<Vec<usize>> {
        self.max_cones.iter().map(|&f| self.faces[f].rays.clone()).collect()
    }

    /// Position of a face among the maximal cones, if it is one.
    pub fn max_index(&self, face: ConeId) -> Option<usize> {
        self.max_cones.iter().position(|&f| f == face)
    }

    /// Cones strictly containing `face`.
    pub fn above(&self, face: ConeId) -> &[ConeId] {
        &self.above[face]
    }

    /// Proper faces of `face`.
    pub fn below(&self, face: ConeId) -> &[ConeId] {
        &self.below[face]
    }

    pub fn is_face_of(&self, a: ConeId, b: ConeId) -> bool {
        a == b || self.above[a].contains(&b)
    }

    /// Maximal cones (by index) containing `face`.
    pub fn max_cones_containing(&self, face: ConeId) -> &[usize] {
        &self.cones_of_face[face]
    }

    /// Codimension-one cones, as face ids in face order.
    pub fn walls(&self) -> &[ConeId] {
        &self.walls
    }

    pub fn wall_index(&self, face: ConeId) -> Option<usize> {
        self.walls.binary_search(&face).ok()
    }

    /// Maximal cones (by index) containing wall `w` (a wall index).
    pub fn wall_cones(&self, w: usize) -> &[usize] {
        &self.wall_cones[w]
    }

    /// Edges of the dual graph: walls shared by exactly two maximal cones,
    /// as `(wall index, lower cone, higher cone)`.
    pub fn dual_edges(&self) -> Vec<(usize, usize, usize)> {
        self.wall_cones
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() == 2)
            .map(|(w, c)| (w, c[0].min(c[1]), c[0].max(c[1])))
            .collect()
    }

    /// Walls (by index) of maximal cone `k`.
    pub fn walls_of(&self, k: usize) -> Vec<usize> {
        let f = self.max_cones[k];
        (0..self.walls.len()).filter(|&w| self.above[self.walls[w]].contains(&f)).collect()
    }

    pub fn generator_matrix(&self, face: ConeId) -> RationalMatrix {
        let rows: Vec<Vec<Rational>> = self.faces[face].rays.iter().map(|&i| qvec(&self.rays[i])).collect();
        RationalMatrix::from_rows(self.rank, rows)
    }

    /// Linear relations among the generators of a full-dimensional maximal
    /// cone: the left kernel of its generator matrix.
    pub fn wall_relation(&self, k: usize) -> Result<Vec<IntegerVector>> {
        let f = self.max_cones[k];
        if self.faces[f].dim != self.rank {
            return Err(Error::NotFullDimensional(k));
        }
        Ok(left_nullspace(&self.generator_matrix(f)))
    }

    /// Exact membership of a rational point in a cone.
    pub fn contains(&self, face: ConeId, point: &[Rational]) -> bool {
        let g = &self.geometry[face];
        g.equations.iter().all(|e| dot(e, point).is_zero())
            && g.inequalities.iter().all(|u| !dot(u, point).is_negative())
    }

    /// Smallest cone containing the point, if the point is in the support.
    pub fn locate(&self, point: &[Rational]) -> Option<ConeId> {
        (0..self.faces.len()).find(|&f| self.contains(f, point))
    }

    /// The link of a ray in a rank-3 fan, starting at the lowest-index
    /// incident maximal cone and leaving it through its lowest-index wall
    /// containing the ray. `None` if the link is not a single cycle.
    pub fn ray_link(&self, ray: usize) -> Option<RayLink> {
        if self.rank != 3 {
            return None;
        }
        let rc = self.ray_cone(ray);
        let cones = self.max_cones_containing(rc).to_vec();
        let walls: Vec<usize> =
            (0..self.walls.len()).filter(|&w| self.faces[self.walls[w]].rays.contains(&ray)).collect();
        if cones.is_empty() || walls.iter().any(|&w| self.wall_cones[w].len() != 2) {
            return None;
        }
        let start = cones[0];
        let mut out = RayLink { cones: vec![start], walls: Vec::new() };
        let mut current = start;
        let mut used: Vec<usize> = Vec::new();
        loop {
            let next_wall = walls
                .iter()
                .copied()
                .find(|w| !used.contains(w) && self.wall_cones[*w].contains(&current))?;
            used.push(next_wall);
            out.walls.push(next_wall);
            let wc = &self.wall_cones[next_wall];
            current = if wc[0] == current { wc[1] } else { wc[0] };
            if current == start {
                break;
            }
            if out.cones.contains(&current) {
                return None;
            }
            out.cones.push(current);
        }
        (out.cones.len() == cones.len() && used.len() == walls.len()).then_some(out)
    }

    /// Whether the support of the fan is the whole space (rank ≤ 3).
    pub fn is_complete(&self) -> Result<bool> {
        if self.rank > 3 {
            return Err(Error::RankUnsupported);
        }
        if self.max_cones.iter().any(|&f| self.faces[f].dim != self.rank) {
            return Ok(false);
        }
        if self.wall_cones.iter().any(|c| c.len() != 2) || !self.dual_graph_connected() {
            return Ok(false);
        }
        Ok(match self.rank {
            1 => self.max_cones.len() == 2,
            2 => {
                let cycle = self.plane_cycle(|r| qvec(&self.rays[r]));
                cycle.is_some_and(|c| winds_once(&c))
            }
            _ => (0..self.rays.len()).all(|r| {
                self.star(self.ray_cone(r)).quotient().is_complete().unwrap_or(false)
            }),
        })
    }

    /// For a rank-2 fan whose rays each lie in two maximal cones: the rays in
    /// cyclic order, mapped through `image`.
    fn plane_cycle(&self, image: impl Fn(usize) -> Vec<Rational>) -> Option<Vec<Vec<Rational>>> {
        let m = self.max_cones.len();
        let mut order = vec![0usize];
        let mut seq = vec![self.faces[self.max_cones[0]].rays[0]];
        let mut cur_cone = 0;
        let mut cur_ray = seq[0];
        loop {
            let rays = &self.faces[self.max_cones[cur_cone]].rays;
            let other = *rays.iter().find(|&&r| r != cur_ray)?;
            let w = self.wall_index(self.ray_cone(other))?;
            let wc = &self.wall_cones[w];
            let next_cone = if wc[0] == cur_cone { wc[1] } else { wc[0] };
            if next_cone == order[0] {
                break;
            }
            if order.contains(&next_cone) {
                return None;
            }
            order.push(next_cone);
            seq.push(other);
            cur_cone = next_cone;
            cur_ray = other;
        }
        if order.len() != m {
            return None;
        }
        // The last cone closes back to the first ray.
        Some(seq.into_iter().map(image).collect())
    }

    fn dual_graph_connected(&self) -> bool {
        let m = self.max_cones.len();
        if m == 0 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        let edges = self.dual_edges();
        while let Some(c) = stack.pop() {
            for &(_, a, b) in &edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == c && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The star of a cone: the cones containing it, viewed in the quotient
    /// lattice.
    pub fn star(&self, face: ConeId) -> Star {
        Star::new(self, face)
    }

    pub fn ray_as_rational(&self, i: usize) -> Vec<Rational> {
        qvec(&self.rays[i])
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn rank_of(n: usize, gens: &[Vec<Rational>]) -> usize {
    if gens.is_empty() {
        0
    } else {
        rank(&RationalMatrix::from_rows(n, gens.to_vec()))
    }
}

/// `⟨u, v⟩` for a rational functional and an integer point.
pub fn pair(u: &[Rational], v: &[i64]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (a, &b)| acc + a * q(b))
}
