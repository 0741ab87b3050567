use std::collections::BTreeMap;
use std::sync::Arc;

use super::{verify, KlyachkoData, SplittingCertificate};
use crate::cover::{CoverCell, CoverPoset};
use crate::error::{Error, Result};
use crate::linalg::q;
use crate::pl::{ConeMultiset, PLFunction};

/// Equivariant Chern data: the multiset of functionals on each maximal cone.
/// The `k`-th Chern class on a cone is `e_k` of its multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    pub multisets: Vec<ConeMultiset>,
}

impl ChernData {
    /// True iff one multiset serves every maximal cone.
    pub fn is_trivial(&self) -> bool {
        self.multisets.windows(2).all(|w| w[0].entries == w[1].entries)
    }
}

fn checked(data: &KlyachkoData, cert: &SplittingCertificate) -> Result<()> {
    verify(data, cert).map_err(|v| Error::CertificateFailure(v.to_string()))
}

pub fn chern(data: &KlyachkoData, cert: &SplittingCertificate) -> Result<ChernData> {
    checked(data, cert)?;
    Ok(ChernData { multisets: cert.multisets() })
}

pub fn equal_chern(a: &ChernData, b: &ChernData) -> bool {
    a.multisets == b.multisets
}

pub fn is_trivial_chern(data: &KlyachkoData, cert: &SplittingCertificate) -> Result<bool> {
    Ok(chern(data, cert)?.is_trivial())
}

/// Restriction of a functional to a face, mapped to its total piece
/// dimension and a representative functional.
type Classes = BTreeMap<Vec<i64>, (u64, Vec<i64>)>;

/// The cover whose cells are pairs (cone, class of a piece's functional
/// restricted to the cone), weighted by total piece dimension, and the
/// function taking each maximal cell to its functional.
pub fn branched_cover_of(data: &KlyachkoData, cert: &SplittingCertificate) -> Result<(Arc<CoverPoset>, PLFunction)> {
    checked(data, cert)?;
    let fan = data.fan().clone();
    let restrict = |u: &[i64], face: usize| -> Vec<i64> {
        fan.face(face).rays.iter().map(|&r| u.iter().zip(fan.ray(r)).map(|(a, b)| a * b).sum()).collect()
    };
    let mut cells = Vec::new();
    let mut index: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
    let mut representative: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for f in 0..fan.faces().len() {
        let mut classes: Option<Classes> = None;
        for &k in fan.max_cones_containing(f) {
            let mut here: Classes = BTreeMap::new();
            for p in &cert.cones[k] {
                let slot = here.entry(restrict(&p.u, f)).or_insert((0, p.u.clone()));
                slot.0 += p.subspace.dim() as u64;
            }
            match &classes {
                None => classes = Some(here),
                Some(prev) => {
                    let weights = |m: &BTreeMap<Vec<i64>, (u64, Vec<i64>)>| m.iter().map(|(c, w)| (c.clone(), w.0)).collect::<Vec<_>>();
                    if weights(prev) != weights(&here) {
                        return Err(Error::CertificateFailure(format!("maximal cones disagree on cone {f}")));
                    }
                }
            }
        }
        for (copy, (class, (weight, u))) in classes.unwrap_or_default().into_iter().enumerate() {
            index.insert((f, class), cells.len());
            representative.insert(cells.len(), u);
            cells.push(CoverCell { base: f, copy, weight });
        }
    }
    let mut pairs = Vec::new();
    for (&(f, ref class), &c) in &index {
        let rays = &fan.face(f).rays;
        for &g in fan.below(f) {
            let sub: Vec<i64> = fan.face(g).rays.iter().map(|r| class[rays.iter().position(|x| x == r).unwrap()]).collect();
            pairs.push((index[&(g, sub)], c));
        }
    }
    let cover = Arc::new(CoverPoset::new(fan.clone(), cells, &pairs)?);
    let slopes = cover
        .maximal_cells()
        .iter()
        .map(|c| representative[c].iter().map(|&x| q(x)).collect())
        .collect();
    let psi = PLFunction::new(cover.clone(), slopes)?;
    Ok((cover, psi))
}
