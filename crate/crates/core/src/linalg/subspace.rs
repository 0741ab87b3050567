use num_traits::Zero;

use super::matrix::rref_with_pivots;
use super::{right_nullspace, to_rational, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// A linear subspace of `Q^n`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_reduced(RationalMatrix::identity(ambient))
    }

    /// Span of the given vectors. Every vector must have length `ambient`.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        for v in vectors {
            check(ambient, v.len())?;
        }
        Ok(Self::from_reduced(RationalMatrix::from_rows(ambient, vectors.to_vec())))
    }

    pub fn span_i64(ambient: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| super::qvec(v)).collect();
        Self::span(ambient, &rows)
    }

    fn from_reduced(m: RationalMatrix) -> Self {
        let ambient = m.cols();
        let (r, pivots) = rref_with_pivots(&m);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        check(self.ambient, v.len())?;
        if v.iter().all(|x| x.is_zero()) {
            return Ok(true);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(Self::from_reduced(RationalMatrix::from_rows(self.ambient, rows)).dim() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        check(self.ambient, other.ambient)?;
        Ok(self.sum(other)?.dim() == other.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check(self.ambient, other.ambient)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::from_reduced(RationalMatrix::from_rows(self.ambient, rows)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        check(self.ambient, other.ambient)?;
        self.annihilator().sum(&other.annihilator()).map(|s| s.annihilator())
    }

    /// The annihilator under the standard pairing, as a subspace of `Q^n`.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        let m = RationalMatrix::from_rows(self.ambient, self.basis.clone());
        let kernel: Vec<Vec<Rational>> = right_nullspace(&m).iter().map(|k| to_rational(k)).collect();
        Self::from_reduced(RationalMatrix::from_rows(self.ambient, kernel))
    }

    /// Image under the block embedding `Q^n → Q^(offset + n + trailing)`.
    pub fn embed(&self, offset: usize, total: usize) -> Subspace {
        let rows = self
            .basis
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); total];
                v[offset..offset + self.ambient].clone_from_slice(r);
                v
            })
            .collect();
        Self::from_reduced(RationalMatrix::from_rows(total, rows))
    }
}

fn check(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
