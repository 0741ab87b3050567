//! Branched covers of a fan in poset form: weighted cells over the fan's
//! cones, with a face relation whose down-sets copy the base face posets.

mod iso;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};

pub use iso::is_isomorphic;

/// A cell of a cover: a copy of a base cone with a positive weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverCell {
    pub base: ConeId,
    pub copy: usize,
    pub weight: u64,
}

/// The covering axioms, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// A unique minimal cell over the zero cone, below every other cell.
    Rooted,
    /// Each down-set maps isomorphically onto the face poset of its base.
    LocalIsomorphism,
    /// Weight traces over each up-set are constant on the base up-set.
    Trace,
    /// The weight of the minimal cell equals the weight of every full fiber.
    Degree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub cell: Option<usize>,
    pub axiom: Axiom,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell {
            Some(c) => write!(f, "axiom {:?} fails at cell {c}: {}", self.axiom, self.message),
            None => write!(f, "axiom {:?} fails: {}", self.axiom, self.message),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoverPoset {
    fan: Arc<Fan>,
    cells: Vec<CoverCell>,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

impl CoverPoset {
    /// Builds a cover from cells and face pairs `(face, cell)`. The relation
    /// is closed transitively; cycles are rejected. No axiom is checked here.
    pub fn new(fan: Arc<Fan>, cells: Vec<CoverCell>, faces: &[(usize, usize)]) -> Result<CoverPoset> {
        let n = cells.len();
        for (i, c) in cells.iter().enumerate() {
            if c.base >= fan.faces().len() {
                return Err(Error::InvalidCover(format!("cell {i} lies over missing cone {}", c.base)));
            }
            if c.weight == 0 {
                return Err(Error::InvalidCover(format!("cell {i} has weight 0")));
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(a, b) in faces {
            if a >= n || b >= n {
                return Err(Error::InvalidCover(format!("face pair ({a}, {b}) refers to a missing cell")));
            }
            if a == b {
                return Err(Error::InvalidCover(format!("cell {a} listed as a proper face of itself")));
            }
            sets[b].insert(a);
        }
        // Transitive closure by repeated propagation in a topological order.
        let order = topological_order(&sets)
            .ok_or_else(|| Error::InvalidCover("face relation has a cycle".into()))?;
        for &c in &order {
            let direct: Vec<usize> = sets[c].iter().copied().collect();
            for d in direct {
                let inherited: Vec<usize> = sets[d].iter().copied().collect();
                sets[c].extend(inherited);
            }
        }
        let below: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Self::from_downsets(fan, cells, below))
    }

    /// Builds from already transitively closed strict down-sets.
    pub(crate) fn from_downsets(fan: Arc<Fan>, cells: Vec<CoverCell>, below: Vec<Vec<usize>>) -> CoverPoset {
        let mut above = vec![Vec::new(); cells.len()];
        for (c, ds) in below.iter().enumerate() {
            for &d in ds {
                above[d].push(c);
            }
        }
        CoverPoset { fan, cells, below, above }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn cells(&self) -> &[CoverCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &CoverCell {
        &self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Strict down-set of a cell, sorted.
    pub fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    /// Strict up-set of a cell.
    pub fn above(&self, i: usize) -> &[usize] {
        &self.above[i]
    }

    pub fn is_face(&self, a: usize, b: usize) -> bool {
        a == b || self.below[b].binary_search(&a).is_ok()
    }

    /// Covering pairs `(face, cell)` where the base dimensions differ by one.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (c, ds) in self.below.iter().enumerate() {
            let dc = self.fan.face(self.cells[c].base).dim;
            for &d in ds {
                if self.fan.face(self.cells[d].base).dim + 1 == dc {
                    out.push((d, c));
                }
            }
        }
        out
    }

    /// The unique minimal cell, if it exists.
    pub fn minimal_cell(&self) -> Option<usize> {
        let mins: Vec<usize> = (0..self.cells.len()).filter(|&i| self.below[i].is_empty()).collect();
        (mins.len() == 1).then(|| mins[0])
    }

    /// Weight of the minimal cell.
    pub fn degree(&self) -> u64 {
        self.minimal_cell().map_or(0, |m| self.cells[m].weight)
    }

    /// Nonminimal cells of weight greater than one.
    pub fn ramification_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].base != self.fan.zero_cone() && self.cells[i].weight > 1)
            .collect()
    }

    pub fn cells_over(&self, base: ConeId) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].base == base).collect()
    }

    /// Cells over maximal cones of the base fan.
    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.fan.max_index(self.cells[i].base).is_some()).collect()
    }

    /// Cells over rays.
    pub fn ray_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.fan.face(self.cells[i].base).dim == 1).collect()
    }

    /// Cells over walls.
    pub fn wall_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.fan.wall_index(self.cells[i].base).is_some()).collect()
    }

    /// The ray under a ray cell.
    pub fn ray_of(&self, cell: usize) -> Option<usize> {
        let cone = self.fan.face(self.cells[cell].base);
        (cone.dim == 1).then(|| cone.rays[0])
    }

    /// Alternating count of nonminimal cells by dimension. For a cover of a
    /// complete rank-3 fan this is #ray cells − #wall cells + #maximal cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| self.fan.face(c.base).dim)
            .filter(|&d| d > 0)
            .map(|d| if d % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    /// Checks the covering axioms exhaustively; reports the first failure.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let fan = &self.fan;
        let fail = |cell: Option<usize>, axiom: Axiom, message: String| Err(Violation { cell, axiom, message });
        let mins: Vec<usize> = (0..self.cells.len()).filter(|&i| self.below[i].is_empty()).collect();
        if mins.len() != 1 {
            return fail(None, Axiom::Rooted, format!("{} minimal cells", mins.len()));
        }
        let root = mins[0];
        if self.cells[root].base != fan.zero_cone() {
            return fail(Some(root), Axiom::Rooted, "minimal cell is not over the zero cone".into());
        }
        for i in 0..self.cells.len() {
            if i != root && self.below[i].binary_search(&root).is_err() {
                return fail(Some(i), Axiom::Rooted, "cell is not above the minimal cell".into());
            }
        }
        for x in 0..self.cells.len() {
            if let Some(msg) = self.local_isomorphism_defect(x) {
                return fail(Some(x), Axiom::LocalIsomorphism, msg);
            }
        }
        for x in 0..self.cells.len() {
            let base = self.cells[x].base;
            let w = self.cells[x].weight;
            let mut trace: BTreeMap<ConeId, u64> = fan.above(base).iter().map(|&t| (t, 0)).collect();
            for &y in &self.above[x] {
                match trace.get_mut(&self.cells[y].base) {
                    Some(t) => *t += self.cells[y].weight,
                    None => {
                        return fail(Some(y), Axiom::LocalIsomorphism, "cell lies over a cone not containing its face".into())
                    }
                }
            }
            if let Some((t, s)) = trace.iter().find(|(_, &s)| s != w) {
                return fail(Some(x), Axiom::Trace, format!("trace over cone {t} is {s}, expected {w}"));
            }
        }
        let d = self.cells[root].weight;
        for base in 0..fan.faces().len() {
            let total: u64 = self.cells.iter().filter(|c| c.base == base).map(|c| c.weight).sum();
            if total != d {
                return fail(None, Axiom::Degree, format!("fiber over cone {base} has weight {total}, degree is {d}"));
            }
        }
        Ok(())
    }

    fn local_isomorphism_defect(&self, x: usize) -> Option<String> {
        let fan = &self.fan;
        let base = self.cells[x].base;
        let mut expected: Vec<ConeId> = fan.below(base).to_vec();
        expected.sort_unstable();
        let mut got: Vec<ConeId> = self.below[x].iter().map(|&y| self.cells[y].base).collect();
        got.sort_unstable();
        if got != expected {
            return Some(format!("down-set lies over {got:?}, base cone has faces {expected:?}"));
        }
        let ds = &self.below[x];
        for &a in ds {
            for &b in ds {
                if a != b && fan.is_face_of(self.cells[a].base, self.cells[b].base) != self.is_face(a, b) {
                    return Some(format!("order between cells {a} and {b} differs from the base"));
                }
            }
        }
        None
    }

    /// Whether this is a maximal cover of a complete rank-3 fan: unramified
    /// over maximal cones and walls, with every ray cell's link one cycle.
    pub fn is_maximal(&self) -> Result<bool> {
        if self.fan.rank() != 3 || !self.fan.is_complete()? {
            return Err(Error::NotComplete);
        }
        let tops = self.maximal_cells();
        let walls = self.wall_cells();
        if tops.iter().chain(&walls).any(|&c| self.cells[c].weight != 1) {
            return Ok(false);
        }
        for e in self.ray_cells() {
            let verts: Vec<usize> = self.above[e].iter().copied().filter(|c| tops.contains(c)).collect();
            let edges: Vec<usize> = self.above[e].iter().copied().filter(|c| walls.contains(c)).collect();
            if verts.is_empty() || verts.len() != edges.len() {
                return Ok(false);
            }
            let mut adj: BTreeMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, Vec::new())).collect();
            for &w in &edges {
                let ends: Vec<usize> = self.above[w].iter().copied().filter(|c| tops.contains(c)).collect();
                if ends.len() != 2 {
                    return Ok(false);
                }
                adj.get_mut(&ends[0]).unwrap().push(ends[1]);
                adj.get_mut(&ends[1]).unwrap().push(ends[0]);
            }
            if adj.values().any(|n| n.len() != 2) {
                return Ok(false);
            }
            let mut seen = BTreeSet::from([verts[0]]);
            let mut stack = vec![verts[0]];
            while let Some(v) = stack.pop() {
                for &u in &adj[&v] {
                    if seen.insert(u) {
                        stack.push(u);
                    }
                }
            }
            if seen.len() != verts.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Face pairs listing every strict incidence.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        self.below.iter().enumerate().flat_map(|(c, ds)| ds.iter().map(move |&d| (d, c))).collect()
    }

    /// The same cover without one cell (used to build defective examples).
    pub fn without_cell(&self, victim: usize) -> CoverPoset {
        let remap = |i: usize| if i > victim { i - 1 } else { i };
        let cells: Vec<CoverCell> =
            self.cells.iter().enumerate().filter(|&(i, _)| i != victim).map(|(_, c)| c.clone()).collect();
        let below = self
            .below
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != victim)
            .map(|(_, ds)| ds.iter().copied().filter(|&d| d != victim).map(remap).collect())
            .collect();
        Self::from_downsets(self.fan.clone(), cells, below)
    }

    /// The identity on the fan with every cell weighted `d`.
    pub fn weighted_identity(fan: Arc<Fan>, d: u64) -> CoverPoset {
        let cells = (0..fan.faces().len()).map(|f| CoverCell { base: f, copy: 0, weight: d }).collect();
        let below = (0..fan.faces().len())
            .map(|f| {
                let mut b = fan.below(f).to_vec();
                b.sort_unstable();
                b
            })
            .collect();
        Self::from_downsets(fan, cells, below)
    }

    /// The wedge of `d` copies of the identity cover.
    pub fn wedge_power(fan: Arc<Fan>, d: usize) -> CoverPoset {
        let one = Self::weighted_identity(fan.clone(), 1);
        let mut acc = one.clone();
        for _ in 1..d {
            acc = acc.wedge_sum(&one).expect("same fan");
        }
        acc
    }

    /// Covers glued at their minimal cells.
    pub fn wedge_sum(&self, other: &CoverPoset) -> Result<CoverPoset> {
        if *self.fan != *other.fan {
            return Err(Error::FanMismatch);
        }
        let (ra, rb) = match (self.minimal_cell(), other.minimal_cell()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidCover("wedge summand lacks a unique minimal cell".into())),
        };
        let mut cells = vec![CoverCell {
            base: self.fan.zero_cone(),
            copy: 0,
            weight: self.cells[ra].weight + other.cells[rb].weight,
        }];
        let mut below: Vec<Vec<usize>> = vec![Vec::new()];
        let mut next_copy: BTreeMap<ConeId, usize> = BTreeMap::new();
        for (part, root) in [(self, ra), (other, rb)] {
            let mut map = vec![0usize; part.cells.len()];
            for (i, c) in part.cells.iter().enumerate() {
                if i == root {
                    continue;
                }
                map[i] = cells.len();
                let copy = next_copy.entry(c.base).or_insert(0);
                cells.push(CoverCell { base: c.base, copy: *copy, weight: c.weight });
                *copy += 1;
                below.push(Vec::new());
            }
            for (i, ds) in part.below.iter().enumerate() {
                if i == root {
                    continue;
                }
                let mut v: Vec<usize> = ds.iter().map(|&d| if d == root { 0 } else { map[d] }).collect();
                v.sort_unstable();
                below[map[i]] = v;
            }
        }
        Ok(Self::from_downsets(self.fan.clone(), cells, below))
    }

    /// Pairs of cells over a common cone, ordered componentwise, weights
    /// multiplied.
    pub fn fibered_product(&self, other: &CoverPoset) -> Result<CoverPoset> {
        if *self.fan != *other.fan {
            return Err(Error::FanMismatch);
        }
        let mut cells = Vec::new();
        let mut pairs = Vec::new();
        let mut next_copy: BTreeMap<ConeId, usize> = BTreeMap::new();
        for base in 0..self.fan.faces().len() {
            for a in self.cells_over(base) {
                for b in other.cells_over(base) {
                    let copy = next_copy.entry(base).or_insert(0);
                    cells.push(CoverCell { base, copy: *copy, weight: self.cells[a].weight * other.cells[b].weight });
                    *copy += 1;
                    pairs.push((a, b));
                }
            }
        }
        let below = pairs
            .iter()
            .map(|&(a, b)| {
                (0..pairs.len())
                    .filter(|&j| {
                        let (c, d) = pairs[j];
                        (c, d) != (a, b) && self.is_face(c, a) && other.is_face(d, b)
                    })
                    .collect()
            })
            .collect();
        Ok(Self::from_downsets(self.fan.clone(), cells, below))
    }
}

fn topological_order(below: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    let n = below.len();
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    fn visit(v: usize, below: &[BTreeSet<usize>], state: &mut [u8], order: &mut Vec<usize>) -> bool {
        match state[v] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        state[v] = 1;
        for &d in &below[v] {
            if !visit(d, below, state, order) {
                return false;
            }
        }
        state[v] = 2;
        order.push(v);
        true
    }
    for v in 0..n {
        if !visit(v, below, &mut state, &mut order) {
            return None;
        }
    }
    Some(order)
}
