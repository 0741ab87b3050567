use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::PLFunction;
use crate::cover::CoverPoset;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{integer_kernel, integer_rank, q, rank, right_nullspace, to_rational, IntegerVector, Rational, RationalMatrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Integral,
}

/// A basis of the piecewise-linear functions on a cover. The first
/// `rank` functions are the pullbacks of the coordinate functionals.
#[derive(Clone, Debug)]
pub struct PLBasis {
    cover: Arc<CoverPoset>,
    mode: Mode,
    functions: Vec<PLFunction>,
    pullbacks: usize,
}

impl PLBasis {
    pub fn cover(&self) -> &Arc<CoverPoset> {
        &self.cover
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[PLFunction] {
        &self.functions
    }

    pub fn pullbacks(&self) -> &[PLFunction] {
        &self.functions[..self.pullbacks]
    }

    /// Basis functions vanishing on the first maximal cell.
    pub fn complement(&self) -> &[PLFunction] {
        &self.functions[self.pullbacks..]
    }

    /// Whether a function on the same cover lies in the rational span.
    pub fn spans(&self, f: &PLFunction) -> bool {
        let flat = |g: &PLFunction| g.slopes().concat();
        let width = f.slopes().len() * self.cover.fan().rank();
        let rows: Vec<Vec<Rational>> = self.functions.iter().map(flat).collect();
        if rows.is_empty() {
            return flat(f).iter().all(|x| x.is_zero());
        }
        let span = Subspace::span(width, &rows).expect("widths agree");
        span.contains(&flat(f)).unwrap_or(false)
    }
}

/// Linear relations among the rays of each maximal cone of a fan, with the
/// rays they refer to. Precomputed once per fan for fast dimension counts.
#[derive(Clone, Debug)]
pub struct RelationTable {
    rays: Vec<Vec<usize>>,
    relations: Vec<Vec<Vec<i64>>>,
    /// Per cone: `rank` independent rays and the inverse of their matrix.
    frames: Vec<(Vec<usize>, RationalMatrix)>,
}

impl RelationTable {
    pub fn new(fan: &Fan) -> Result<RelationTable> {
        let mut rays = Vec::new();
        let mut relations = Vec::new();
        let mut frames = Vec::new();
        for k in 0..fan.num_max_cones() {
            let rel = fan.wall_relation(k)?;
            frames.push(frame(fan, k));
            rays.push(fan.max_cone(k).rays.clone());
            relations.push(
                rel.iter()
                    .map(|r| r.iter().map(|x| x.to_i64().expect("relation fits in 64 bits")).collect())
                    .collect(),
            );
        }
        Ok(RelationTable { rays, relations, frames })
    }

    /// Relations of maximal cone `k`, indexed like its rays.
    pub fn relations(&self, k: usize) -> &[Vec<i64>] {
        &self.relations[k]
    }
}

/// The linear system on values at ray cells: one row per relation among
/// the rays of each maximal cell.
#[derive(Clone, Debug)]
pub struct ValuesAtRays {
    pub matrix: Vec<Vec<i64>>,
    /// Ray cells, one per column.
    pub columns: Vec<usize>,
    /// For each row, the maximal cell and the index of the relation.
    pub rows: Vec<(usize, usize)>,
}

impl ValuesAtRays {
    pub fn rank(&self) -> usize {
        integer_rank(&self.matrix, self.columns.len())
    }

    /// Dimension of the solution space, which equals the dimension of the
    /// piecewise-linear functions on the cover.
    pub fn dimension(&self) -> usize {
        self.columns.len() - self.rank()
    }
}

pub fn values_at_rays(cover: &CoverPoset) -> Result<ValuesAtRays> {
    Ok(values_at_rays_with(&RelationTable::new(cover.fan())?, cover))
}

pub fn values_at_rays_with(table: &RelationTable, cover: &CoverPoset) -> ValuesAtRays {
    let fan = cover.fan();
    let columns = cover.ray_cells();
    let column_of: BTreeMap<usize, usize> = columns.iter().enumerate().map(|(j, &e)| (e, j)).collect();
    let mut matrix = Vec::new();
    let mut rows = Vec::new();
    for c in cover.maximal_cells() {
        let k = fan.max_index(cover.cell(c).base).unwrap();
        let mut under: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in cover.below(c) {
            if let Some(r) = cover.ray_of(e) {
                under.insert(r, column_of[&e]);
            }
        }
        for (i, rel) in table.relations[k].iter().enumerate() {
            let mut row = vec![0i64; columns.len()];
            for (j, &r) in table.rays[k].iter().enumerate() {
                row[under[&r]] += rel[j];
            }
            matrix.push(row);
            rows.push((c, i));
        }
    }
    ValuesAtRays { matrix, columns, rows }
}

/// Dimension of the piecewise-linear functions, by the values-at-rays rank.
pub fn pl_dimension(table: &RelationTable, cover: &CoverPoset) -> usize {
    values_at_rays_with(table, cover).dimension()
}

/// The per-cell system: one slope per maximal cell and one value per ray
/// cell as unknowns, one equation per incidence of a ray cell below a
/// maximal cell. Returns the rows and the number of unknowns.
pub fn per_cell_system(cover: &CoverPoset) -> (Vec<IntegerVector>, usize) {
    let fan = cover.fan();
    let n = fan.rank();
    let cells = cover.maximal_cells();
    let rays = cover.ray_cells();
    let z_of: BTreeMap<usize, usize> = rays.iter().enumerate().map(|(j, &e)| (e, cells.len() * n + j)).collect();
    let width = cells.len() * n + rays.len();
    let mut system: Vec<IntegerVector> = Vec::new();
    for (i, &c) in cells.iter().enumerate() {
        for &e in cover.below(c) {
            if let Some(r) = cover.ray_of(e) {
                let mut row = vec![BigInt::zero(); width];
                for (x, &v) in fan.ray(r).iter().enumerate() {
                    row[i * n + x] = BigInt::from(v);
                }
                row[z_of[&e]] = BigInt::from(-1);
                system.push(row);
            }
        }
    }
    (system, width)
}

/// Dimension of the solution space of [`per_cell_system`].
pub fn per_cell_dimension(cover: &CoverPoset) -> usize {
    let (system, width) = per_cell_system(cover);
    if system.is_empty() {
        return width;
    }
    let rows: Vec<Vec<Rational>> = system.iter().map(|r| to_rational(r)).collect();
    width - rank(&RationalMatrix::from_rows(width, rows))
}

/// Solves for all piecewise-linear functions on a cover whose maximal cells
/// lie over full-dimensional cones.
///
/// Integral mode takes the integer kernel of the per-cell system, which is
/// a lattice basis of the functions with integral slopes. Rational mode
/// solves the smaller system on values at ray cells and recovers slopes.
pub fn solve(cover: Arc<CoverPoset>, mode: Mode) -> Result<PLBasis> {
    let table = RelationTable::new(cover.fan())?;
    solve_with(&table, cover, mode)
}

/// [`solve`] with relations precomputed for the cover's base fan.
pub fn solve_with(table: &RelationTable, cover: Arc<CoverPoset>, mode: Mode) -> Result<PLBasis> {
    let fan = cover.fan().clone();
    let n = fan.rank();
    for k in 0..fan.num_max_cones() {
        if fan.max_cone(k).dim != n {
            return Err(Error::NotFullDimensional(k));
        }
    }
    let cells = cover.maximal_cells();
    let complement: Vec<Vec<Vec<Rational>>> = match mode {
        Mode::Integral => {
            let (mut system, width) = per_cell_system(&cover);
            // The slope on the first maximal cell is zero.
            if !cells.is_empty() {
                for x in 0..n {
                    let mut row = vec![BigInt::zero(); width];
                    row[x] = BigInt::from(1);
                    system.push(row);
                }
            }
            integer_kernel(&system, width)
                .iter()
                .map(|v| (0..cells.len()).map(|i| to_rational(&v[i * n..(i + 1) * n])).collect())
                .collect()
        }
        Mode::Rational => rational_complement(table, &cover, &cells),
    };
    let mut functions = Vec::with_capacity(n + complement.len());
    for x in 0..n {
        let mut u = vec![Rational::zero(); n];
        u[x] = q(1);
        functions.push(PLFunction::pullback(cover.clone(), &u));
    }
    for slopes in complement {
        functions.push(PLFunction::unchecked(cover.clone(), slopes));
    }
    Ok(PLBasis { cover, mode, functions, pullbacks: n })
}

fn rational_complement(table: &RelationTable, cover: &CoverPoset, cells: &[usize]) -> Vec<Vec<Vec<Rational>>> {
    let fan = cover.fan();
    let v = values_at_rays_with(table, cover);
    let column_of: BTreeMap<usize, usize> = v.columns.iter().enumerate().map(|(j, &e)| (e, j)).collect();
    let frames = &table.frames;
    // Ray-cell columns under each maximal cell, indexed by ray.
    let under = |c: usize| -> BTreeMap<usize, usize> {
        cover.below(c).iter().filter_map(|&e| cover.ray_of(e).map(|r| (r, column_of[&e]))).collect()
    };
    let width = v.columns.len();
    let mut rows: Vec<Vec<Rational>> = v.matrix.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    if let Some(&c0) = cells.first() {
        let k0 = fan.max_index(cover.cell(c0).base).unwrap();
        let cols = under(c0);
        for r in &frames[k0].0 {
            let mut row = vec![Rational::zero(); width];
            row[cols[r]] = q(1);
            rows.push(row);
        }
    }
    let kernel = if rows.is_empty() { Vec::new() } else { right_nullspace(&RationalMatrix::from_rows(width, rows)) };
    let mut out = Vec::with_capacity(kernel.len());
    for z in &kernel {
        let z = to_rational(z);
        let mut slopes = Vec::with_capacity(cells.len());
        for &c in cells {
            let k = fan.max_index(cover.cell(c).base).unwrap();
            let cols = under(c);
            let (chosen, inverse) = &frames[k];
            let local: Vec<Rational> = chosen.iter().map(|r| z[cols[r]].clone()).collect();
            slopes.push(inverse.mul_vec(&local));
        }
        out.push(integral_scaling(slopes));
    }
    out
}

fn frame(fan: &Fan, k: usize) -> (Vec<usize>, RationalMatrix) {
    let n = fan.rank();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &r in &fan.max_cone(k).rays {
        let mut trial = rows.clone();
        trial.push(fan.ray_as_rational(r));
        if rank(&RationalMatrix::from_rows(n, trial.clone())) == trial.len() {
            rows = trial;
            chosen.push(r);
        }
        if chosen.len() == n {
            break;
        }
    }
    (chosen, invert(&RationalMatrix::from_rows(n, rows)))
}

/// Scales a family of slopes to have coprime integer entries.
fn integral_scaling(slopes: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let flat: Vec<Rational> = slopes.concat();
    match normalize_up_to_sign(&flat) {
        Some(s) => slopes.into_iter().map(|u| u.into_iter().map(|x| x * &s).collect()).collect(),
        None => slopes,
    }
}

fn normalize_up_to_sign(v: &[Rational]) -> Option<Rational> {
    use num_integer::Integer;
    let mut den = BigInt::from(1);
    for x in v {
        den = den.lcm(x.denom());
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(&(x.numer() * (&den / x.denom())));
    }
    (!g.is_zero()).then(|| Rational::new(den, g))
}

fn invert(m: &RationalMatrix) -> RationalMatrix {
    let n = m.rows();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = m.row(i).to_vec();
        row.extend((0..n).map(|j| if i == j { q(1) } else { Rational::zero() }));
        rows.push(row);
    }
    let (r, _) = crate::linalg::rref(&RationalMatrix::from_rows(2 * n, rows));
    RationalMatrix::from_rows(n, (0..n).map(|i| r.row(i)[n..].to_vec()).collect())
}
