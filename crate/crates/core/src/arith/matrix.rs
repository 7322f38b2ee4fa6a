//! Dense rational vectors and matrices.

use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use super::rational::{denominator_lcm, Rational};
use crate::error::{Error, Result};

/// A vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RVector(Vec<Rational>);

impl RVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(vals: &[i64]) -> Self {
        vals.iter().map(|&v| Rational::from(v)).collect()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        debug_assert_eq!(self.len(), other.len());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(other) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        self.0.iter().map(|v| v * k).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn norm_l1(&self) -> Rational {
        self.0.iter().map(Rational::abs).sum()
    }

    pub fn norm2_f64(&self) -> f64 {
        self.0.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl Deref for RVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for RVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RVector {
    fn from(v: Vec<Rational>) -> Self {
        RVector(v)
    }
}

impl FromIterator<Rational> for RVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RVector(iter.into_iter().collect())
    }
}

impl IntoIterator for RVector {
    type Item = Rational;
    type IntoIter = std::vec::IntoIter<Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a RVector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Row-major dense rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RMatrix { rows: rows.len(), cols, entries: rows.iter().flatten().cloned().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!("{}x{} * vector of length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows).map(|i| RVector::new(self.row(i).to_vec()).dot(v)).collect())
    }

    /// Copy with column `j` replaced by `v`.
    pub fn with_column(&self, j: usize, v: &[Rational]) -> Self {
        let mut m = self.clone();
        for (i, x) in v.iter().enumerate() {
            m[(i, j)] = x.clone();
        }
        m
    }

    /// Rows scaled to integers (each by the lcm of its denominators); returns
    /// the scaled matrix and the product of the scale factors.
    fn integerized(&self) -> (Vec<Vec<Rational>>, Rational) {
        let mut scale = Rational::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = Rational::from_bigint(denominator_lcm(self.row(i)));
                scale *= &l;
                self.row(i).iter().map(|v| v * &l).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut m, scale) = self.integerized();
        let mut sign = Rational::one();
        let mut prev = Rational::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = &v / &prev;
                }
                m[i][k] = Rational::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1] / scale)
    }

    /// Cramer's rule: `x[i] = det(A with column i replaced by b) / det(A)`.
    pub fn cramer_solve(&self, b: &[Rational]) -> Result<RVector> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("rhs length {} for {} rows", b.len(), self.rows)));
        }
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        (0..self.cols).map(|i| Ok(self.with_column(i, b).det()? / &d)).collect()
    }

    /// Solves `A X = B` for square nonsingular `A` by fraction-free forward
    /// elimination followed by exact back substitution.
    pub fn solve_many(&self, rhs: &RMatrix) -> Result<RMatrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!("rhs has {} rows, matrix {}", rhs.rows, self.rows)));
        }
        let n = self.rows;
        let w = n + rhs.cols;
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(rhs.row(i));
                let l = Rational::from_bigint(denominator_lcm(&r));
                r.iter().map(|v| v * &l).collect()
            })
            .collect();
        let mut prev = Rational::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => m.swap(k, r),
                    None => return Err(Error::Singular),
                }
            }
            for i in k + 1..n {
                for j in k + 1..w {
                    let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = &v / &prev;
                }
                m[i][k] = Rational::zero();
            }
            prev = m[k][k].clone();
        }
        let mut x = RMatrix::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = m[i][n + c].clone();
                for j in i + 1..n {
                    if !m[i][j].is_zero() {
                        acc -= &m[i][j] * &x[(j, c)];
                    }
                }
                x[(i, c)] = acc / &m[i][i];
            }
        }
        Ok(x)
    }

    pub fn solve(&self, b: &[Rational]) -> Result<RVector> {
        let rhs = RMatrix { rows: b.len(), cols: 1, entries: b.to_vec() };
        Ok(self.solve_many(&rhs)?.column(0))
    }

    pub fn inverse(&self) -> Result<RMatrix> {
        self.solve_many(&RMatrix::identity(self.rows))
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, p);
            let piv = m[rank][c].clone();
            for i in rank + 1..self.rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &piv;
                for j in c..self.cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RMatrix {
        RMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(RMatrix::identity(3).det().unwrap(), Rational::one());
        assert_eq!(m(&[&[2, 2], &[1, 0]]).det().unwrap(), Rational::from(-2));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).det().unwrap(), Rational::zero());
        assert!(matches!(m(&[&[1, 2, 3]]).det(), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn det_needs_pivot_swap() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), Rational::from(-1));
        let a = RMatrix::from_rows(&[vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]]).unwrap();
        assert_eq!(a.det().unwrap(), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn cramer_examples() {
        let x = RMatrix::identity(2).cramer_solve(&[Rational::from(3), Rational::from(-7)]).unwrap();
        assert_eq!(x, RVector::from_ints(&[3, -7]));
        // Cut (1/2)x + y = 1 meeting the edge x = 1.
        let a = RMatrix::from_rows(&[vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 1)]]).unwrap();
        let x = a.cramer_solve(&[Rational::one(), Rational::one()]).unwrap();
        assert_eq!(x, RVector::new(vec![rat(1, 1), rat(1, 2)]));
        assert!(matches!(m(&[&[1, 2], &[2, 4]]).cramer_solve(&[Rational::one(), Rational::one()]), Err(Error::Singular)));
    }

    #[test]
    fn rank_and_inverse() {
        assert_eq!(m(&[&[1, 2], &[2, 4], &[0, 1]]).rank(), 2);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), RMatrix::identity(2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn square(n: usize) -> impl Strategy<Value = RMatrix> {
        proptest::collection::vec(small_rational(), n * n).prop_map(move |v| {
            let rows: Vec<Vec<Rational>> = v.chunks(n).map(|c| c.to_vec()).collect();
            RMatrix::from_rows(&rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn cramer_solution_satisfies_system(
            (a, b) in (1usize..=5).prop_flat_map(|n| (square(n), proptest::collection::vec(small_rational(), n)))
        ) {
            prop_assume!(!a.det().unwrap().is_zero());
            let x = a.cramer_solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&x).unwrap(), RVector::new(b.clone()));
            prop_assert_eq!(a.solve(&b).unwrap(), x);
        }

        #[test]
        fn det_is_multiplicative(a in square(3), b in square(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn arithmetic_stays_canonical(x in small_rational(), y in small_rational()) {
            for v in [&x + &y, &x - &y, &x * &y] {
                let reparsed: Rational = v.to_string().parse().unwrap();
                prop_assert_eq!(&reparsed, &v);
                prop_assert!(num_integer::Integer::gcd(&v.numer(), &v.denom()) == num_bigint::BigInt::from(1) || v.is_zero());
                prop_assert!(v.denom() > num_bigint::BigInt::from(0));
            }
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
        }
    }
}
