//! Exact linear systems via reduced row-echelon form over the rationals.

use super::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Reduced row-echelon form of a rational matrix.
#[derive(Clone, Debug)]
pub struct Rref {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl Rref {
    pub fn new(m: &RatMatrix) -> Self {
        let rows = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        Rref::from_rows(rows, m.cols())
    }

    fn from_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][c].recip();
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        Rref { rows, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// A nonzero null vector, built from the first free column.
    pub fn kernel_vector(&self) -> Option<Vec<Rational>> {
        let free = (0..self.cols).find(|c| !self.pivots.contains(c))?;
        let mut x = vec![Rational::zero(); self.cols];
        x[free] = Rational::one();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            x[pc] = -&row[free];
        }
        Some(x)
    }
}

/// Solves `a x = b`, returning one exact solution if the system is consistent.
pub fn solve(a: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations vs right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let cols = a.cols();
    let rows = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let rref = Rref::from_rows(rows, cols + 1);
    if rref.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in rref.rows.iter().zip(&rref.pivots) {
        x[pc] = row[cols].clone();
    }
    Ok(Some(x))
}

/// Coefficients `c` with `v = Σ c_i basis_i`, if they exist.
pub fn in_span(v: &[Rational], basis: &[Vec<Rational>]) -> Result<Option<Vec<Rational>>> {
    if let Some(b) = basis.iter().find(|b| b.len() != v.len()) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} vs basis vector of length {}",
            v.len(),
            b.len()
        )));
    }
    if basis.is_empty() {
        return Ok(v.iter().all(Rational::is_zero).then(Vec::new));
    }
    solve(&RatMatrix::from_columns(basis)?, v)
}

/// A nonzero `c` with `m c = 0`, or `None` when the columns are independent.
pub fn kernel_vector(m: &RatMatrix) -> Option<Vec<Rational>> {
    Rref::new(m).kernel_vector()
}

/// Grows a basis one vector at a time, keeping reduced copies for the
/// independence test.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    reduced: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        EchelonBasis::default()
    }

    pub fn dim(&self) -> usize {
        self.reduced.len()
    }

    /// Adds `v` if it is independent of the vectors seen so far.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        for (pivot, row) in &self.reduced {
            if !w[*pivot].is_zero() {
                let f = w[*pivot].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pivot].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        self.reduced.push((pivot, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn sum_of_basis() {
        let b = vec![ints(&[1, 0, 2]), ints(&[0, 1, 1])];
        let v = ints(&[1, 1, 3]);
        assert_eq!(in_span(&v, &b).unwrap(), Some(ints(&[1, 1])));
    }

    #[test]
    fn outside_span() {
        let b = vec![ints(&[0, 0, 0, 1])];
        assert_eq!(in_span(&ints(&[1, 0, 0, 0]), &b).unwrap(), None);
        assert_eq!(in_span(&ints(&[1, 0]), &[]).unwrap(), None);
        assert_eq!(in_span(&ints(&[0, 0]), &[]).unwrap(), Some(vec![]));
    }

    #[test]
    fn length_mismatch() {
        let b = vec![ints(&[1, 0])];
        assert!(matches!(
            in_span(&ints(&[1]), &b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rational_solution() {
        let b = vec![ints(&[2, 0]), ints(&[0, 3])];
        assert_eq!(
            in_span(&ints(&[1, 1]), &b).unwrap(),
            Some(vec![q(1, 2), q(1, 3)])
        );
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let m = RatMatrix::from_int_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let k = kernel_vector(&m).unwrap();
        assert!(m.mul_vec(&k).unwrap().iter().all(Rational::is_zero));
        assert!(k.iter().any(|x| !x.is_zero()));
        assert!(kernel_vector(&RatMatrix::identity(3)).is_none());
    }
}
