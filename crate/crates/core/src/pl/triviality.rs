use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::solve::{solve, values_at_rays, Mode, PLBasis};
use super::PLFunction;
use crate::cover::CoverPoset;
use crate::error::Result;
use crate::linalg::{integer_rank, Rational};

/// Why every function on a cover is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The only functions are pullbacks of global functionals.
    PullbacksOnly,
    /// Each wedge summand (listed by its nonminimal cells) carries only
    /// pullbacks and has a constant sheet count.
    WedgeOfPullbacks { summands: Vec<Vec<usize>> },
    /// Every function is constant on each class of maximal cells, and the
    /// classes have equal weight over every base maximal cone.
    MatchedPattern { classes: Vec<Vec<usize>> },
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        match self {
            Certificate::PullbacksOnly => "pullbacks-only",
            Certificate::WedgeOfPullbacks { .. } => "wedge-of-pullbacks",
            Certificate::MatchedPattern { .. } => "matched-pattern",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    AllTrivial(Certificate),
    Nontrivial(PLFunction),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::AllTrivial(c) => c.tag(),
            Verdict::Nontrivial(_) => "nontrivial",
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Verdict::AllTrivial(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AllTrivial(c) => write!(f, "all trivial ({})", c.tag()),
            Verdict::Nontrivial(_) => write!(f, "nontrivial"),
        }
    }
}

/// Decides whether every piecewise-linear function on the cover is trivial.
pub fn group_triviality(cover: Arc<CoverPoset>) -> Result<Verdict> {
    let basis = solve(cover, Mode::Rational)?;
    Ok(group_triviality_of(&basis))
}

pub fn group_triviality_of(basis: &PLBasis) -> Verdict {
    let cover = basis.cover();
    if basis.complement().is_empty() {
        return Verdict::AllTrivial(Certificate::PullbacksOnly);
    }
    let summands = wedge_summands(cover);
    if summands.len() > 1 && summands.iter().all(|s| summand_is_rigid(cover, s)) {
        return Verdict::AllTrivial(Certificate::WedgeOfPullbacks { summands });
    }
    let generic = generic_element(basis);
    if !generic.is_trivial() {
        return Verdict::Nontrivial(generic);
    }
    let classes = slope_classes(&generic);
    if basis.functions().iter().all(|f| constant_on(f, &classes)) {
        return Verdict::AllTrivial(Certificate::MatchedPattern { classes: classes_as_cells(&generic, &classes) });
    }
    // Unreachable when the genericity bound holds; kept as a safety net.
    for b in basis.complement() {
        if constant_on(b, &classes) {
            continue;
        }
        for s in 1i64.. {
            let candidate = generic.add(&b.scale(&Rational::from_integer(BigInt::from(s)))).expect("same cover");
            if !candidate.is_trivial() {
                return Verdict::Nontrivial(candidate);
            }
        }
    }
    unreachable!("a function violating the pattern yields a nontrivial combination")
}

/// Re-checks a verdict against a basis of the functions on its cover.
pub fn verify_verdict(basis: &PLBasis, verdict: &Verdict) -> bool {
    let cover = basis.cover();
    match verdict {
        Verdict::Nontrivial(f) => f.is_consistent() && !f.is_trivial() && basis.spans(f),
        Verdict::AllTrivial(Certificate::PullbacksOnly) => basis.complement().is_empty(),
        Verdict::AllTrivial(Certificate::WedgeOfPullbacks { summands }) => {
            let mut expected = wedge_summands(cover);
            expected.sort();
            let mut given = summands.clone();
            given.sort();
            expected == given && summands.iter().all(|s| summand_is_rigid(cover, s))
        }
        Verdict::AllTrivial(Certificate::MatchedPattern { classes }) => {
            let cells = cover.maximal_cells();
            let index: BTreeMap<usize, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let Some(classes) = classes
                .iter()
                .map(|cl| cl.iter().map(|c| index.get(c).copied()).collect::<Option<Vec<usize>>>())
                .collect::<Option<Vec<_>>>()
            else {
                return false;
            };
            let mut seen = vec![false; cells.len()];
            for &i in classes.iter().flatten() {
                if std::mem::replace(&mut seen[i], true) {
                    return false;
                }
            }
            seen.iter().all(|&s| s)
                && balanced(cover, &cells, &classes)
                && basis.functions().iter().all(|f| constant_on(f, &classes))
        }
    }
}

/// Connected components of the nonminimal cells under the face relation.
fn wedge_summands(cover: &CoverPoset) -> Vec<Vec<usize>> {
    let root = cover.minimal_cell();
    let n = cover.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for c in 0..n {
        if Some(c) == root {
            continue;
        }
        for &d in cover.below(c) {
            if Some(d) != root {
                let (a, b) = (find(&mut parent, c), find(&mut parent, d));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in (0..n).filter(|&c| Some(c) != root) {
        let r = find(&mut parent, c);
        groups.entry(r).or_default().push(c);
    }
    groups.into_values().collect()
}

/// A summand carries only pullbacks and covers every maximal cone with the
/// same total weight.
fn summand_is_rigid(cover: &CoverPoset, summand: &[usize]) -> bool {
    let fan = cover.fan();
    let mut sheets = vec![0u64; fan.num_max_cones()];
    for &c in summand {
        if let Some(k) = fan.max_index(cover.cell(c).base) {
            sheets[k] += cover.cell(c).weight;
        }
    }
    if sheets.windows(2).any(|w| w[0] != w[1]) {
        return false;
    }
    let Ok(full) = values_at_rays(cover) else { return false };
    let cols: Vec<usize> = (0..full.columns.len()).filter(|&j| summand.contains(&full.columns[j])).collect();
    let rows: Vec<Vec<i64>> = full
        .rows
        .iter()
        .zip(&full.matrix)
        .filter(|((c, _), _)| summand.contains(c))
        .map(|(_, row)| cols.iter().map(|&j| row[j]).collect())
        .collect();
    cols.len() - integer_rank(&rows, cols.len()) == fan.rank()
}

/// `Σ tⁱ bᵢ` over the non-pullback basis functions, with `t` beyond the
/// root bound of every difference polynomial between two slope entries.
fn generic_element(basis: &PLBasis) -> PLFunction {
    let complement = basis.complement();
    let mut bound = BigInt::zero();
    let mut denominators = BigInt::one();
    for f in complement {
        for u in f.slopes() {
            for x in u {
                denominators = num_integer::lcm(denominators, x.denom().clone());
            }
        }
    }
    for f in complement {
        for u in f.slopes() {
            for x in u {
                let scaled = (x * Rational::from_integer(denominators.clone())).to_integer().abs();
                if scaled > bound {
                    bound = scaled;
                }
            }
        }
    }
    let t = Rational::from_integer(bound * 2 + 2);
    let mut acc = PLFunction::zero(basis.cover().clone());
    let mut power = Rational::one();
    for f in complement {
        acc = acc.add(&f.scale(&power)).expect("same cover");
        power *= &t;
    }
    acc
}

/// Groups maximal cells (by position) with equal slopes.
fn slope_classes(f: &PLFunction) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<&Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for (i, u) in f.slopes().iter().enumerate() {
        groups.entry(u).or_default().push(i);
    }
    groups.into_values().collect()
}

fn classes_as_cells(f: &PLFunction, classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    classes.iter().map(|cl| cl.iter().map(|&i| f.cells()[i]).collect()).collect()
}

fn constant_on(f: &PLFunction, classes: &[Vec<usize>]) -> bool {
    classes.iter().all(|cl| cl.windows(2).all(|w| f.slopes()[w[0]] == f.slopes()[w[1]]))
}

fn balanced(cover: &CoverPoset, cells: &[usize], classes: &[Vec<usize>]) -> bool {
    let fan = cover.fan();
    classes.iter().all(|cl| {
        let mut w = vec![0u64; fan.num_max_cones()];
        for &i in cl {
            let c = cover.cell(cells[i]);
            w[fan.max_index(c.base).unwrap()] += c.weight;
        }
        w.windows(2).all(|p| p[0] == p[1])
    })
}
