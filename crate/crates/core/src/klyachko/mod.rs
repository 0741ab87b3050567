//! Toric vector bundles as filtration data: one decreasing filtration of a
//! fixed rational vector space per ray, made compatible on each maximal cone
//! by a splitting into pieces indexed by integral functionals.

mod check;
mod cover;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{dot_int, q, Rational, Subspace};

pub use check::{necessary_dimension_check, DimensionCheck};
pub use cover::{branched_cover_of, chern, equal_chern, is_trivial_chern, ChernData};

/// A decreasing filtration `E(i)` of `Q^dim`. Stored as steps `(t, S)` with
/// increasing thresholds: `E(i)` is the subspace of the first step with
/// `i ≤ t`, and zero past the last step. The first step is the full space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    dim: usize,
    steps: Vec<(i64, Subspace)>,
}

impl Filtration {
    /// Validates and canonicalizes. Repeated subspaces are merged into the
    /// later step and zero steps are dropped.
    pub fn new(dim: usize, steps: Vec<(i64, Subspace)>) -> Result<Filtration> {
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidBundle("thresholds must increase".into()));
        }
        for (_, s) in &steps {
            if s.ambient_dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.ambient_dim() });
            }
        }
        if dim > 0 && steps.first().is_none_or(|(_, s)| s.dim() != dim) {
            return Err(Error::InvalidBundle("a filtration must start with the full space".into()));
        }
        for w in steps.windows(2) {
            if !w[1].1.is_subspace_of(&w[0].1)? {
                return Err(Error::InvalidBundle(format!("filtration is not decreasing at threshold {}", w[1].0)));
            }
        }
        let mut canonical: Vec<(i64, Subspace)> = Vec::with_capacity(steps.len());
        for (t, s) in steps.into_iter().filter(|(_, s)| !s.is_zero()) {
            if canonical.last().is_some_and(|(_, prev)| *prev == s) {
                canonical.pop();
            }
            canonical.push((t, s));
        }
        Ok(Filtration { dim, steps: canonical })
    }

    /// `E(i) = Q^dim` for `i ≤ t`, zero above.
    pub fn single(dim: usize, t: i64) -> Filtration {
        Filtration { dim, steps: if dim == 0 { vec![] } else { vec![(t, Subspace::full(dim))] } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    /// The values `i` with `E(i) ≠ E(i + 1)`.
    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.0).collect()
    }

    pub fn at(&self, i: i64) -> Subspace {
        self.steps
            .iter()
            .find(|(t, _)| i <= *t)
            .map_or_else(|| Subspace::zero(self.dim), |(_, s)| s.clone())
    }

    /// `E∨(i) = E(1 − i)^⊥`.
    pub fn dual(&self) -> Filtration {
        let k = self.steps.len();
        if k == 0 {
            return self.clone();
        }
        let mut steps = vec![(-self.steps[k - 1].0, Subspace::full(self.dim))];
        for j in (1..k).rev() {
            steps.push((-self.steps[j - 1].0, self.steps[j].1.annihilator()));
        }
        Filtration::new(self.dim, steps).expect("duals of valid filtrations are valid")
    }

    /// `E(i) ⊕ F(i)` in `Q^(a + b)`.
    pub fn direct_sum(&self, other: &Filtration) -> Filtration {
        let total = self.dim + other.dim;
        let mut thresholds: Vec<i64> = self.jumps().into_iter().chain(other.jumps()).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        let steps = thresholds
            .into_iter()
            .map(|t| {
                let s = self.at(t).embed(0, total).sum(&other.at(t).embed(self.dim, total)).unwrap();
                (t, s)
            })
            .collect::<Vec<_>>();
        Filtration::new(total, steps).expect("sums of valid filtrations are valid")
    }
}

/// Filtrations on every ray of a fan.
#[derive(Clone, Debug)]
pub struct KlyachkoData {
    fan: Arc<Fan>,
    rank: usize,
    filtrations: Vec<Filtration>,
}

impl PartialEq for KlyachkoData {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.fan, &other.fan) || self.fan.to_data() == other.fan.to_data())
            && self.rank == other.rank
            && self.filtrations == other.filtrations
    }
}

impl KlyachkoData {
    pub fn new(fan: Arc<Fan>, rank: usize, filtrations: Vec<Filtration>) -> Result<KlyachkoData> {
        if filtrations.len() != fan.num_rays() {
            return Err(Error::InvalidBundle(format!(
                "{} filtrations for {} rays",
                filtrations.len(),
                fan.num_rays()
            )));
        }
        if let Some(f) = filtrations.iter().find(|f| f.dim != rank) {
            return Err(Error::DimensionMismatch { expected: rank, found: f.dim });
        }
        Ok(KlyachkoData { fan, rank, filtrations })
    }

    /// Rank-one data of the support function with the given values at rays.
    pub fn line(fan: Arc<Fan>, values: &[i64]) -> Result<KlyachkoData> {
        let filtrations = values.iter().map(|&d| Filtration::single(1, d)).collect();
        Self::new(fan, 1, filtrations)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn filtrations(&self) -> &[Filtration] {
        &self.filtrations
    }

    pub fn filtration(&self, ray: usize) -> &Filtration {
        &self.filtrations[ray]
    }

    pub fn dual(&self) -> KlyachkoData {
        KlyachkoData {
            fan: self.fan.clone(),
            rank: self.rank,
            filtrations: self.filtrations.iter().map(Filtration::dual).collect(),
        }
    }
}

pub fn dual(data: &KlyachkoData) -> KlyachkoData {
    data.dual()
}

pub fn direct_sum(a: &KlyachkoData, b: &KlyachkoData) -> Result<KlyachkoData> {
    if !Arc::ptr_eq(&a.fan, &b.fan) && a.fan.to_data() != b.fan.to_data() {
        return Err(Error::FanMismatch);
    }
    let filtrations = a.filtrations.iter().zip(&b.filtrations).map(|(x, y)| x.direct_sum(y)).collect();
    KlyachkoData::new(a.fan.clone(), a.rank + b.rank, filtrations)
}

/// One piece `E_[u]` of a splitting over a maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub u: Vec<i64>,
    pub subspace: Subspace,
}

/// A splitting of the fiber on every maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub cones: Vec<Vec<Piece>>,
}

impl SplittingCertificate {
    /// Pieces for `E∨`: `E∨_[−u]` annihilates every other piece.
    pub fn dual(&self) -> SplittingCertificate {
        let cones = self
            .cones
            .iter()
            .map(|pieces| {
                pieces
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let ambient = p.subspace.ambient_dim();
                        let others = pieces
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .fold(Subspace::zero(ambient), |acc, (_, x)| acc.sum(&x.subspace).unwrap());
                        Piece { u: p.u.iter().map(|x| -x).collect(), subspace: others.annihilator() }
                    })
                    .collect()
            })
            .collect();
        SplittingCertificate { cones }
    }

    /// Block splitting of a direct sum of data of ranks `a` and `b`.
    pub fn direct_sum(&self, other: &SplittingCertificate, a: usize, b: usize) -> Result<SplittingCertificate> {
        if self.cones.len() != other.cones.len() {
            return Err(Error::FanMismatch);
        }
        let cones = self
            .cones
            .iter()
            .zip(&other.cones)
            .map(|(x, y)| {
                let pieces = x
                    .iter()
                    .map(|p| (p.u.clone(), p.subspace.embed(0, a + b)))
                    .chain(y.iter().map(|p| (p.u.clone(), p.subspace.embed(a, a + b))));
                merge(pieces, a + b)
            })
            .collect();
        Ok(SplittingCertificate { cones })
    }

    /// The multiset of functionals on each cone, weighted by piece dimension.
    pub fn multisets(&self) -> Vec<crate::pl::ConeMultiset> {
        self.cones
            .iter()
            .enumerate()
            .map(|(cone, pieces)| {
                let mut m: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
                for p in pieces {
                    *m.entry(p.u.iter().map(|&x| q(x)).collect()).or_insert(0) += p.subspace.dim() as u64;
                }
                m.retain(|_, w| *w > 0);
                crate::pl::ConeMultiset { cone, entries: m.into_iter().collect() }
            })
            .collect()
    }
}

fn merge(pieces: impl Iterator<Item = (Vec<i64>, Subspace)>, ambient: usize) -> Vec<Piece> {
    let mut m: BTreeMap<Vec<i64>, Subspace> = BTreeMap::new();
    for (u, s) in pieces {
        let slot = m.entry(u).or_insert_with(|| Subspace::zero(ambient));
        *slot = slot.sum(&s).unwrap();
    }
    m.into_iter().map(|(u, subspace)| Piece { u, subspace }).collect()
}

/// The first failure of the compatibility identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityViolation {
    pub cone: usize,
    pub ray: Option<usize>,
    pub threshold: Option<i64>,
    pub message: String,
}

impl fmt::Display for CompatibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone {}", self.cone)?;
        if let Some(r) = self.ray {
            write!(f, ", ray {r}")?;
        }
        if let Some(i) = self.threshold {
            write!(f, ", i = {i}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks `E^ρ(i) = Σ_{⟨u, v_ρ⟩ ≥ i} E_[u]` for every maximal cone, ray of
/// it and threshold where either side can change, and that the pieces of
/// each cone form a direct sum decomposition.
pub fn verify(data: &KlyachkoData, cert: &SplittingCertificate) -> std::result::Result<(), CompatibilityViolation> {
    let fan = &data.fan;
    let r = data.rank;
    let fail = |cone, ray, threshold, message: String| Err(CompatibilityViolation { cone, ray, threshold, message });
    if cert.cones.len() != fan.num_max_cones() {
        return fail(cert.cones.len().min(fan.num_max_cones()), None, None, "certificate does not cover every maximal cone".into());
    }
    for (k, pieces) in cert.cones.iter().enumerate() {
        let mut seen: Vec<&Vec<i64>> = Vec::new();
        let mut total = Subspace::zero(r);
        let mut dims = 0;
        for p in pieces {
            if p.u.len() != fan.rank() || p.subspace.ambient_dim() != r {
                return fail(k, None, None, "piece has the wrong shape".into());
            }
            if seen.contains(&&p.u) {
                return fail(k, None, None, format!("functional {:?} listed twice", p.u));
            }
            seen.push(&p.u);
            dims += p.subspace.dim();
            total = total.sum(&p.subspace).unwrap();
        }
        if dims != r || total.dim() != r {
            return fail(k, None, None, "pieces do not form a direct sum decomposition".into());
        }
        for &rho in &fan.max_cone(k).rays {
            let v = fan.ray(rho);
            let values: Vec<i64> = pieces.iter().map(|p| p.u.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
            let mut critical: Vec<i64> = data.filtrations[rho].jumps().into_iter().chain(values.iter().copied()).flat_map(|x| [x, x + 1]).collect();
            critical.sort_unstable();
            critical.dedup();
            for i in critical {
                let rhs = pieces
                    .iter()
                    .zip(&values)
                    .filter(|(_, &x)| x >= i)
                    .fold(Subspace::zero(r), |acc, (p, _)| acc.sum(&p.subspace).unwrap());
                if data.filtrations[rho].at(i) != rhs {
                    return fail(k, Some(rho), Some(i), "filtration differs from the sum of pieces".into());
                }
            }
        }
    }
    Ok(())
}

/// `E^v(t)`: the sum of pieces with `⟨u, v⟩ ≥ t` on a maximal cone
/// containing `v`.
pub fn interpolate(data: &KlyachkoData, cert: &SplittingCertificate, v: &[Rational], t: &Rational) -> Result<Subspace> {
    let k = containing_cone(&data.fan, v)?;
    Ok(cert.cones[k]
        .iter()
        .filter(|p| pairing(&p.u, v) >= *t)
        .fold(Subspace::zero(data.rank), |acc, p| acc.sum(&p.subspace).unwrap()))
}

/// The distinct nonzero `E^v(t)`, smallest first.
pub fn flag(data: &KlyachkoData, cert: &SplittingCertificate, v: &[Rational]) -> Result<Vec<Subspace>> {
    let k = containing_cone(&data.fan, v)?;
    let mut values: Vec<Rational> = cert.cones[k].iter().map(|p| pairing(&p.u, v)).collect();
    values.sort();
    values.dedup();
    let mut out = Vec::new();
    for t in values.iter().rev() {
        let s = interpolate(data, cert, v, t)?;
        if !s.is_zero() && out.last() != Some(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

fn pairing(u: &[i64], v: &[Rational]) -> Rational {
    dot_int(v, u)
}

fn containing_cone(fan: &Fan, v: &[Rational]) -> Result<usize> {
    if v.len() != fan.rank() {
        return Err(Error::DimensionMismatch { expected: fan.rank(), found: v.len() });
    }
    (0..fan.num_max_cones())
        .find(|&k| fan.contains(fan.max_cones()[k], v))
        .ok_or_else(|| Error::OutsideSupport(v.iter().map(|x| x.to_string()).collect()))
}

/// Pulls data back along a lattice map `φ` given by an integer matrix with
/// one row per coordinate of the source lattice. Returns the pulled-back
/// data together with its splitting.
pub fn pullback(
    data: &KlyachkoData,
    cert: &SplittingCertificate,
    phi: &[Vec<i64>],
    target: Arc<Fan>,
) -> Result<(KlyachkoData, SplittingCertificate)> {
    let fan = &data.fan;
    let (n, m) = (fan.rank(), target.rank());
    if phi.len() != n || phi.iter().any(|row| row.len() != m) {
        return Err(Error::DimensionMismatch { expected: n * m, found: phi.iter().map(Vec::len).sum() });
    }
    let image = |v: &[i64]| -> Vec<Rational> { phi.iter().map(|row| q(row.iter().zip(v).map(|(a, b)| a * b).sum())).collect() };
    let transpose = |u: &[i64]| -> Vec<i64> { (0..m).map(|j| (0..n).map(|i| phi[i][j] * u[i]).sum()).collect() };
    let mut cones = Vec::with_capacity(target.num_max_cones());
    for k in 0..target.num_max_cones() {
        let images: Vec<Vec<Rational>> = target.max_cone(k).rays.iter().map(|&r| image(target.ray(r))).collect();
        let source = (0..fan.num_max_cones())
            .find(|&s| images.iter().all(|w| fan.contains(fan.max_cones()[s], w)))
            .ok_or_else(|| Error::ConeCompatibility(format!("maximal cone {k} maps into no cone")))?;
        let pieces = cert.cones[source].iter().map(|p| (transpose(&p.u), p.subspace.clone()));
        cones.push(merge(pieces, data.rank));
    }
    let mut filtrations = Vec::with_capacity(target.num_rays());
    for r in 0..target.num_rays() {
        let w = image(target.ray(r));
        let k = containing_cone(fan, &w)?;
        let mut values: Vec<i64> = cert.cones[k]
            .iter()
            .map(|p| pairing(&p.u, &w).to_integer().to_i64().expect("integral pairing fits in 64 bits"))
            .collect();
        values.sort_unstable();
        values.dedup();
        let steps = values
            .into_iter()
            .map(|t| Ok((t, interpolate(data, cert, &w, &q(t))?)))
            .collect::<Result<Vec<_>>>()?;
        filtrations.push(Filtration::new(data.rank, steps)?);
    }
    Ok((KlyachkoData::new(target, data.rank, filtrations)?, SplittingCertificate { cones }))
}
