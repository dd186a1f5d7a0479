//! Exact span membership over the rationals.
//!
//! A vector lies in the row space of `M` iff it is orthogonal to every vector
//! of the null space of `M`. The null space is computed once per matrix by
//! Gauss-Jordan elimination over [`Rational`] and scaled to integers, so each
//! membership query is a handful of integer dot products.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::net::IncidenceMatrix;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("vector has length {got}, expected {expected}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>], width: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(k) = (r..m.len()).find(|k| !m[*k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..width {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Integer basis of `{ x | M x = 0 }` where `M` has `width` columns.
pub fn null_space(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<BigInt>> {
    let (reduced, pivots) = rref(rows, width);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|f| {
            let mut x = vec![Rational::zero(); width];
            x[*f] = Rational::one();
            for (row, p) in reduced.iter().zip(&pivots) {
                x[*p] = -row[*f].clone();
            }
            to_integer_vector(&x)
        })
        .collect()
}

fn to_integer_vector(x: &[Rational]) -> Vec<BigInt> {
    let lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = x.iter().map(|v| (v * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        scaled
    } else {
        scaled.into_iter().map(|v| v / &g).collect()
    }
}

/// Membership test for the span of a fixed set of vectors.
#[derive(Clone, Debug)]
pub struct SpanTest {
    dim: usize,
    annihilator: Vec<Vec<BigInt>>,
}

impl SpanTest {
    /// Span of `vectors`, each of length `dim`.
    pub fn new(vectors: &[Vec<Rational>], dim: usize) -> Self {
        SpanTest { dim, annihilator: null_space(vectors, dim) }
    }

    pub fn from_integer_vectors(vectors: &[Vec<i8>], dim: usize) -> Self {
        let rows: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|v| v.iter().map(|x| Rational::from_integer(BigInt::from(*x))).collect())
            .collect();
        Self::new(&rows, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the spanned space.
    pub fn rank(&self) -> usize {
        self.dim - self.annihilator.len()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, DimensionMismatch> {
        self.check_len(v.len())?;
        Ok(self.annihilator.iter().all(|x| {
            let mut dot = Rational::zero();
            for (a, b) in v.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    dot += a * Rational::from_integer(b.clone());
                }
            }
            dot.is_zero()
        }))
    }

    pub fn contains_small(&self, v: &[i8]) -> Result<bool, DimensionMismatch> {
        self.check_len(v.len())?;
        Ok(self.annihilator.iter().all(|x| {
            let mut dot = BigInt::zero();
            for (a, b) in v.iter().zip(x) {
                if *a != 0 {
                    dot += b * BigInt::from(*a);
                }
            }
            dot.is_zero()
        }))
    }

    fn check_len(&self, got: usize) -> Result<(), DimensionMismatch> {
        if got == self.dim {
            Ok(())
        } else {
            Err(DimensionMismatch { expected: self.dim, got })
        }
    }
}

/// Whether `new_row`, indexed by the matrix's transition order, is a
/// rational combination of the place rows of `m`.
pub fn is_linearly_dependent_place(
    m: &IncidenceMatrix,
    new_row: &[Rational],
) -> Result<bool, DimensionMismatch> {
    SpanTest::from_integer_vectors(m.rows(), m.num_columns()).contains(new_row)
}

/// Whether `new_column`, indexed by the matrix's place order, is a rational
/// combination of the transition columns of `m`.
pub fn is_linearly_dependent_transition(
    m: &IncidenceMatrix,
    new_column: &[Rational],
) -> Result<bool, DimensionMismatch> {
    let columns: Vec<Vec<i8>> = (0..m.num_columns()).map(|j| m.column(j)).collect();
    SpanTest::from_integer_vectors(&columns, m.num_rows()).contains(new_column)
}
