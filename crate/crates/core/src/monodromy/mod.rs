//! Degree-`d` maximal covers of a complete rank-3 fan from permutation
//! assignments on the non-tree edges of the dual graph.

mod perm;

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::{CoverCell, CoverPoset};
use crate::error::{Error, Result};
use crate::fan::{Fan, RayLink};

pub use perm::Permutation;

/// A BFS spanning tree of the dual graph. Every dual edge is oriented from
/// its lower-indexed to its higher-indexed maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpanningTree {
    pub root: usize,
    pub tree_edges: Vec<usize>,
    pub non_tree_edges: Vec<usize>,
}

/// Breadth-first tree from the lowest-index maximal cone, visiting walls in
/// index order.
pub fn spanning_tree(fan: &Fan) -> Result<DualSpanningTree> {
    if fan.rank() != 3 || !fan.is_complete()? {
        return Err(Error::NotComplete);
    }
    let m = fan.num_max_cones();
    let mut seen = vec![false; m];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut tree = Vec::new();
    while let Some(c) = queue.pop_front() {
        for w in fan.walls_of(c) {
            let wc = fan.wall_cones(w);
            let other = if wc[0] == c { wc[1] } else { wc[0] };
            if !seen[other] {
                seen[other] = true;
                tree.push(w);
                queue.push_back(other);
            }
        }
    }
    tree.sort_unstable();
    let non_tree = (0..fan.walls().len()).filter(|w| !tree.contains(w)).collect();
    Ok(DualSpanningTree { root: 0, tree_edges: tree, non_tree_edges: non_tree })
}

/// One permutation per non-tree edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonodromyAssignment {
    pub degree: usize,
    pub perms: Vec<Permutation>,
}

impl MonodromyAssignment {
    pub fn identity(degree: usize, edges: usize) -> Self {
        MonodromyAssignment { degree, perms: vec![Permutation::identity(degree); edges] }
    }

    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(Error::InvalidAssignment(format!("permutation {p} does not have degree {degree}")));
        }
        Ok(MonodromyAssignment { degree, perms })
    }

    /// Simultaneous conjugation of every entry by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Self {
        MonodromyAssignment { degree: self.degree, perms: self.perms.iter().map(|h| h.conjugate_by(g)).collect() }
    }

    /// Whether the permutations generate a transitive group (connected cover).
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        if self.degree == 0 {
            return true;
        }
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(s) = stack.pop() {
            for p in &self.perms {
                for t in [p.apply(s), p.inverse().apply(s)] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The lexicographically least simultaneous conjugate of an assignment.
pub fn canonical_class(a: &MonodromyAssignment) -> MonodromyAssignment {
    Permutation::all(a.degree)
        .iter()
        .map(|g| a.conjugate_by(g))
        .min_by(|x, y| x.perms.cmp(&y.perms))
        .expect("S_d is nonempty")
}

/// Precomputed tree, orientations and ray links for one fan.
#[derive(Clone, Debug)]
pub struct MonodromyContext {
    fan: Arc<Fan>,
    tree: DualSpanningTree,
    /// Position of each wall among the non-tree edges.
    slot: Vec<Option<usize>>,
    /// Lower and higher maximal cone of each wall.
    ends: Vec<(usize, usize)>,
    links: Vec<RayLink>,
}

impl MonodromyContext {
    pub fn new(fan: Arc<Fan>) -> Result<Self> {
        let tree = spanning_tree(&fan)?;
        let mut slot = vec![None; fan.walls().len()];
        for (k, &w) in tree.non_tree_edges.iter().enumerate() {
            slot[w] = Some(k);
        }
        let ends = (0..fan.walls().len())
            .map(|w| {
                let c = fan.wall_cones(w);
                (c[0].min(c[1]), c[0].max(c[1]))
            })
            .collect();
        let links = (0..fan.num_rays())
            .map(|r| fan.ray_link(r).ok_or(Error::NotComplete))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonodromyContext { fan, tree, slot, ends, links })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn tree(&self) -> &DualSpanningTree {
        &self.tree
    }

    pub fn num_generators(&self) -> usize {
        self.tree.non_tree_edges.len()
    }

    pub fn link(&self, ray: usize) -> &RayLink {
        &self.links[ray]
    }

    /// Total number of assignments of degree `d`: `(d!)^(m-1)`.
    pub fn count(&self, d: usize) -> u128 {
        let fact: u128 = (1..=d as u128).product();
        fact.pow(self.num_generators() as u32)
    }

    /// The assignment with the given index in lexicographic order of
    /// permutation words (first generator most significant).
    pub fn assignment_at(&self, d: usize, index: u128, perms: &[Permutation]) -> MonodromyAssignment {
        let base = perms.len() as u128;
        let k = self.num_generators();
        let mut digits = vec![0usize; k];
        let mut x = index;
        for slot in (0..k).rev() {
            digits[slot] = (x % base) as usize;
            x /= base;
        }
        MonodromyAssignment { degree: d, perms: digits.into_iter().map(|i| perms[i].clone()).collect() }
    }

    /// Streams all assignments of degree `d` in order.
    pub fn assignments(&self, d: usize) -> impl Iterator<Item = MonodromyAssignment> + '_ {
        self.assignments_in(d, 0, self.count(d))
    }

    /// Streams the assignments with indices in `start..end`.
    pub fn assignments_in(&self, d: usize, start: u128, end: u128) -> impl Iterator<Item = MonodromyAssignment> + '_ {
        let perms = Permutation::all(d);
        (start..end.min(self.count(d))).map(move |i| self.assignment_at(d, i, &perms))
    }

    /// Index of an assignment in the enumeration order.
    pub fn index_of(&self, a: &MonodromyAssignment) -> u128 {
        let perms = Permutation::all(a.degree);
        a.perms.iter().fold(0u128, |acc, p| acc * perms.len() as u128 + perms.iter().position(|q| q == p).unwrap() as u128)
    }

    fn check(&self, a: &MonodromyAssignment) -> Result<()> {
        if a.perms.len() != self.num_generators() {
            return Err(Error::InvalidAssignment(format!(
                "expected {} permutations, found {}",
                self.num_generators(),
                a.perms.len()
            )));
        }
        MonodromyAssignment::new(a.degree, a.perms.clone()).map(|_| ())
    }

    /// The gluing across wall `w` from its lower to its higher cone.
    pub fn transition(&self, a: &MonodromyAssignment, w: usize) -> Permutation {
        match self.slot[w] {
            Some(k) => a.perms[k].clone(),
            None => Permutation::identity(a.degree),
        }
    }

    /// Sheet transports from the reference cone of a ray to each cone of its
    /// link, followed by the full loop (the ray monodromy).
    fn transports(&self, a: &MonodromyAssignment, ray: usize) -> Vec<Permutation> {
        let link = &self.links[ray];
        let mut out = Vec::with_capacity(link.cones.len() + 1);
        let mut t = Permutation::identity(a.degree);
        out.push(t.clone());
        for (i, &w) in link.walls.iter().enumerate() {
            let h = self.transition(a, w);
            let step = if self.ends[w].0 == link.cones[i] { h } else { h.inverse() };
            t = t.then(&step);
            out.push(t.clone());
        }
        out
    }

    /// Monodromy of the loop around a ray, acting on the sheets of its
    /// reference cone.
    pub fn ray_monodromy(&self, a: &MonodromyAssignment, ray: usize) -> Permutation {
        self.transports(a, ray).pop().unwrap()
    }

    /// Rays with nontrivial monodromy.
    pub fn branch_rays(&self, a: &MonodromyAssignment) -> Vec<usize> {
        (0..self.fan.num_rays()).filter(|&r| !self.ray_monodromy(a, r).is_identity()).collect()
    }

    /// The degree-2 assignment whose branch rays are exactly `rays`. In
    /// degree 2 the branch set determines the cover up to isomorphism.
    pub fn assignment_for_branch_rays(&self, rays: &[usize]) -> Result<MonodromyAssignment> {
        let mut wanted = rays.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        if let Some(&r) = wanted.iter().find(|&&r| r >= self.fan.num_rays()) {
            return Err(Error::InvalidAssignment(format!("no ray {r}")));
        }
        self.assignments(2)
            .find(|a| self.branch_rays(a) == wanted)
            .ok_or_else(|| Error::InvalidAssignment(format!("no degree-2 cover is branched exactly over {wanted:?}")))
    }

    /// The maximal branched cover determined by an assignment.
    pub fn build_cover(&self, a: &MonodromyAssignment) -> Result<CoverPoset> {
        self.check(a)?;
        let fan = &self.fan;
        let d = a.degree;
        let nfaces = fan.faces().len();
        let mut cells = Vec::new();
        let mut first = vec![0usize; nfaces];
        // Ray data: transports and the orbit index of each reference sheet.
        let mut ray_data: Vec<(Vec<Permutation>, Vec<usize>)> = Vec::with_capacity(fan.num_rays());
        for r in 0..fan.num_rays() {
            let tr = self.transports(a, r);
            let mono = tr.last().unwrap();
            let mut orbit_of = vec![0; d];
            for (k, cyc) in mono.cycles().iter().enumerate() {
                for &s in cyc {
                    orbit_of[s] = k;
                }
            }
            ray_data.push((tr, orbit_of));
        }
        for f in 0..nfaces {
            first[f] = cells.len();
            let cone = fan.face(f);
            match cone.dim {
                0 => cells.push(CoverCell { base: f, copy: 0, weight: d as u64 }),
                1 => {
                    let mono = ray_data[cone.rays[0]].0.last().unwrap();
                    for (k, cyc) in mono.cycles().iter().enumerate() {
                        cells.push(CoverCell { base: f, copy: k, weight: cyc.len() as u64 });
                    }
                }
                _ => {
                    for s in 0..d {
                        cells.push(CoverCell { base: f, copy: s, weight: 1 });
                    }
                }
            }
        }
        // Ray cell containing sheet `s` of maximal cone `c`.
        let ray_cell = |r: usize, c: usize, s: usize| -> usize {
            let (tr, orbit_of) = &ray_data[r];
            let i = self.links[r].cones.iter().position(|&x| x == c).expect("cone in link");
            let reference = tr[i].inverse().apply(s);
            first[fan.ray_cone(r)] + orbit_of[reference]
        };
        let walls = fan.walls();
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
        for f in 0..nfaces {
            let cone = fan.face(f);
            if cone.dim == 0 {
                continue;
            }
            if cone.dim == 1 {
                for k in 0..cells.len() {
                    if cells[k].base == f {
                        below[k] = vec![0];
                    }
                }
                continue;
            }
            if let Some(w) = fan.wall_index(f) {
                let lo = self.ends[w].0;
                for t in 0..d {
                    let mut ds = vec![0];
                    for &r in &cone.rays {
                        ds.push(ray_cell(r, lo, t));
                    }
                    ds.sort_unstable();
                    below[first[f] + t] = ds;
                }
                continue;
            }
            let k = fan.max_index(f).expect("rank-3 cones are rays, walls or maximal");
            let my_walls = fan.walls_of(k);
            for s in 0..d {
                let mut ds = vec![0];
                for &r in &cone.rays {
                    ds.push(ray_cell(r, k, s));
                }
                for &w in &my_walls {
                    let t = if self.ends[w].0 == k { s } else { self.transition(a, w).inverse().apply(s) };
                    ds.push(first[walls[w]] + t);
                }
                ds.sort_unstable();
                below[first[f] + s] = ds;
            }
        }
        Ok(CoverPoset::from_downsets(fan.clone(), cells, below))
    }
}
