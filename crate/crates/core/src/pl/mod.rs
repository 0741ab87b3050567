//! Piecewise-linear functions on branched covers.
//!
//! A function is stored by its slopes on the cells over maximal cones; its
//! value on any lower cell is the restriction of any slope above it.

mod solve;
mod triviality;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::cover::CoverPoset;
use crate::error::{Error, Result};
use crate::linalg::{dot, dot_int, q, Rational};

pub use solve::{per_cell_dimension, per_cell_system, pl_dimension, solve, solve_with, values_at_rays, values_at_rays_with, Mode, PLBasis, RelationTable, ValuesAtRays};
pub use triviality::{group_triviality, group_triviality_of, verify_verdict, Certificate, Verdict};

#[derive(Clone, Debug)]
pub struct PLFunction {
    cover: Arc<CoverPoset>,
    /// Maximal cells in increasing order.
    cells: Vec<usize>,
    slopes: Vec<Vec<Rational>>,
}

/// The weighted multiset of slopes over one maximal cone of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeMultiset {
    pub cone: usize,
    pub entries: Vec<(Vec<Rational>, u64)>,
}

impl ConeMultiset {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Elementary symmetric polynomial `e_k` of the slopes, as a map from
    /// exponent vectors to coefficients.
    pub fn elementary(&self, k: usize) -> BTreeMap<Vec<u32>, Rational> {
        let n = self.entries.first().map_or(0, |e| e.0.len());
        let linear: Vec<&Vec<Rational>> = self
            .entries
            .iter()
            .flat_map(|(u, m)| std::iter::repeat_n(u, *m as usize))
            .collect();
        // e_j(x_1..x_i) by the usual recurrence, tracking polynomials.
        let mut e: Vec<BTreeMap<Vec<u32>, Rational>> = vec![BTreeMap::new(); k + 1];
        e[0].insert(vec![0; n], q(1));
        for u in linear {
            for j in (1..=k).rev() {
                let prev = e[j - 1].clone();
                for (mono, c) in prev {
                    for (x, a) in u.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        let mut m = mono.clone();
                        m[x] += 1;
                        let slot = e[j].entry(m).or_insert_with(Rational::zero);
                        *slot += &c * a;
                    }
                }
                e[j].retain(|_, c| !c.is_zero());
            }
        }
        std::mem::take(&mut e[k])
    }
}

impl PLFunction {
    /// A function from slopes listed in the order of the cover's maximal
    /// cells. Fails unless the slopes agree on every shared ray cell.
    pub fn new(cover: Arc<CoverPoset>, slopes: Vec<Vec<Rational>>) -> Result<PLFunction> {
        let cells = cover.maximal_cells();
        let n = cover.fan().rank();
        if slopes.len() != cells.len() {
            return Err(Error::DimensionMismatch { expected: cells.len(), found: slopes.len() });
        }
        if let Some(bad) = slopes.iter().find(|u| u.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let f = PLFunction { cover, cells, slopes };
        if let Some(e) = f.inconsistent_ray_cell() {
            return Err(Error::InvalidCover(format!("slopes disagree at ray cell {e}")));
        }
        Ok(f)
    }

    pub(crate) fn unchecked(cover: Arc<CoverPoset>, slopes: Vec<Vec<Rational>>) -> PLFunction {
        let cells = cover.maximal_cells();
        PLFunction { cover, cells, slopes }
    }

    pub fn zero(cover: Arc<CoverPoset>) -> PLFunction {
        let n = cover.fan().rank();
        let m = cover.maximal_cells().len();
        Self::unchecked(cover, vec![vec![Rational::zero(); n]; m])
    }

    /// The pullback of a global linear functional.
    pub fn pullback(cover: Arc<CoverPoset>, u: &[Rational]) -> PLFunction {
        let m = cover.maximal_cells().len();
        Self::unchecked(cover, vec![u.to_vec(); m])
    }

    /// Assigns the listed functionals of each base maximal cone to the cells
    /// above it so that the result is consistent. Each list must have one
    /// entry per unit of weight. Searches all assignments.
    pub fn from_multisets(cover: Arc<CoverPoset>, lists: &[Vec<Vec<Rational>>]) -> Result<PLFunction> {
        let fan = cover.fan().clone();
        if lists.len() != fan.num_max_cones() {
            return Err(Error::DimensionMismatch { expected: fan.num_max_cones(), found: lists.len() });
        }
        let cells = cover.maximal_cells();
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); fan.num_max_cones()];
        for (i, &c) in cells.iter().enumerate() {
            slots[fan.max_index(cover.cell(c).base).unwrap()].push(i);
        }
        let mut slopes: Vec<Option<Vec<Rational>>> = vec![None; cells.len()];
        let mut ray_values: BTreeMap<usize, Rational> = BTreeMap::new();
        let order: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .flat_map(|(k, s)| s.iter().map(move |&i| (k, i)))
            .collect();
        for (k, s) in slots.iter().enumerate() {
            let weight: u64 = s.iter().map(|&i| cover.cell(cells[i]).weight).sum();
            if weight != lists[k].len() as u64 {
                return Err(Error::InvalidCover(format!("cone {k} has sheet count {weight}, list has {}", lists[k].len())));
            }
        }
        let mut used: Vec<Vec<bool>> = lists.iter().map(|l| vec![false; l.len()]).collect();
        let ok = assign(&cover, &cells, lists, &order, 0, &mut slopes, &mut used, &mut ray_values);
        if !ok {
            return Err(Error::InvalidCover("no consistent placement of the listed functionals".into()));
        }
        let slopes = slopes.into_iter().map(|s| s.unwrap()).collect();
        Ok(Self::unchecked(cover, slopes))
    }

    pub fn cover(&self) -> &Arc<CoverPoset> {
        &self.cover
    }

    /// Maximal cells, in the order of [`PLFunction::slopes`].
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn slopes(&self) -> &[Vec<Rational>] {
        &self.slopes
    }

    /// Slope on a cell: its own if maximal, else that of the first maximal
    /// cell above it.
    pub fn slope(&self, cell: usize) -> Option<&[Rational]> {
        if let Ok(i) = self.cells.binary_search(&cell) {
            return Some(&self.slopes[i]);
        }
        let up = self.cover.above(cell).iter().find_map(|c| self.cells.binary_search(c).ok())?;
        Some(&self.slopes[up])
    }

    /// Value at the primitive generator under a ray cell.
    pub fn ray_value(&self, ray_cell: usize) -> Option<Rational> {
        let ray = self.cover.ray_of(ray_cell)?;
        Some(dot_int(self.slope(ray_cell)?, self.cover.fan().ray(ray)))
    }

    fn inconsistent_ray_cell(&self) -> Option<usize> {
        let fan = self.cover.fan();
        for e in self.cover.ray_cells() {
            let v = fan.ray(self.cover.ray_of(e).unwrap());
            let mut value: Option<Rational> = None;
            for &c in self.cover.above(e) {
                if let Ok(i) = self.cells.binary_search(&c) {
                    let z = dot_int(&self.slopes[i], v);
                    match &value {
                        Some(prev) if *prev != z => return Some(e),
                        _ => value = Some(z),
                    }
                }
            }
        }
        None
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent_ray_cell().is_none()
    }

    /// Cellwise sum.
    pub fn add(&self, other: &PLFunction) -> Result<PLFunction> {
        if !Arc::ptr_eq(&self.cover, &other.cover) && self.cells != other.cells {
            return Err(Error::InvalidCover("functions live on different covers".into()));
        }
        let slopes = self
            .slopes
            .iter()
            .zip(&other.slopes)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self::unchecked(self.cover.clone(), slopes))
    }

    pub fn scale(&self, s: &Rational) -> PLFunction {
        let slopes = self.slopes.iter().map(|u| u.iter().map(|x| x * s).collect()).collect();
        Self::unchecked(self.cover.clone(), slopes)
    }

    /// `⟨u_cell, point⟩` for a point of the cell's base cone.
    pub fn evaluate(&self, cell: usize, point: &[Rational]) -> Result<Rational> {
        let fan = self.cover.fan();
        if cell >= self.cover.len() {
            return Err(Error::InvalidCover(format!("no cell {cell}")));
        }
        let base = self.cover.cell(cell).base;
        if point.len() != fan.rank() {
            return Err(Error::DimensionMismatch { expected: fan.rank(), found: point.len() });
        }
        if !fan.contains(base, point) {
            return Err(Error::OutsideCone { cone: base, point: point.iter().map(|x| x.to_string()).collect() });
        }
        match self.slope(cell) {
            Some(u) => Ok(dot(u, point)),
            None => Ok(Rational::zero()),
        }
    }

    pub fn multisets(&self) -> Vec<ConeMultiset> {
        let fan = self.cover.fan();
        let mut out: Vec<BTreeMap<Vec<Rational>, u64>> = vec![BTreeMap::new(); fan.num_max_cones()];
        for (i, &c) in self.cells.iter().enumerate() {
            let cell = self.cover.cell(c);
            let k = fan.max_index(cell.base).unwrap();
            *out[k].entry(self.slopes[i].clone()).or_insert(0) += cell.weight;
        }
        out.into_iter()
            .enumerate()
            .map(|(cone, m)| ConeMultiset { cone, entries: m.into_iter().collect() })
            .collect()
    }

    /// True iff every base maximal cone carries the same weighted multiset.
    pub fn is_trivial(&self) -> bool {
        let ms = self.multisets();
        ms.windows(2).all(|w| w[0].entries == w[1].entries)
    }
}

pub fn multisets(plf: &PLFunction) -> Vec<ConeMultiset> {
    plf.multisets()
}

pub fn is_trivial_function(plf: &PLFunction) -> bool {
    plf.is_trivial()
}

#[allow(clippy::too_many_arguments)]
fn assign(
    cover: &CoverPoset,
    cells: &[usize],
    lists: &[Vec<Vec<Rational>>],
    order: &[(usize, usize)],
    at: usize,
    slopes: &mut Vec<Option<Vec<Rational>>>,
    used: &mut Vec<Vec<bool>>,
    ray_values: &mut BTreeMap<usize, Rational>,
) -> bool {
    let Some(&(k, i)) = order.get(at) else { return true };
    let cell = cells[i];
    let weight = cover.cell(cell).weight as usize;
    let fan = cover.fan();
    let rays: Vec<usize> = cover.below(cell).iter().copied().filter(|&e| cover.ray_of(e).is_some()).collect();
    let candidates: Vec<usize> = (0..lists[k].len()).filter(|&j| !used[k][j]).collect();
    let mut tried: Vec<&Vec<Rational>> = Vec::new();
    for &j in &candidates {
        let u = &lists[k][j];
        if tried.contains(&u) {
            continue;
        }
        tried.push(u);
        // A cell of weight w consumes w equal entries.
        let same: Vec<usize> = candidates.iter().copied().filter(|&x| lists[k][x] == *u).take(weight).collect();
        if same.len() < weight {
            continue;
        }
        let mut fresh = Vec::new();
        let mut fits = true;
        for &e in &rays {
            let z = dot_int(u, fan.ray(cover.ray_of(e).unwrap()));
            match ray_values.get(&e) {
                Some(prev) if *prev != z => {
                    fits = false;
                    break;
                }
                Some(_) => {}
                None => {
                    ray_values.insert(e, z);
                    fresh.push(e);
                }
            }
        }
        if fits {
            for &x in &same {
                used[k][x] = true;
            }
            slopes[i] = Some(u.clone());
            if assign(cover, cells, lists, order, at + 1, slopes, used, ray_values) {
                return true;
            }
            slopes[i] = None;
            for &x in &same {
                used[k][x] = false;
            }
        }
        for e in fresh {
            ray_values.remove(&e);
        }
    }
    false
}
