//! Dense matrices over the rationals with exact elimination.
//!
//! Everything downstream (stability, kernels of `ad`, reflection functors)
//! relies on ranks being exact, so there is no floating point here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

mod exact;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Matrix with a single one at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        m.set(i, j, Rational::one());
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { rows, cols, data }
    }

    /// Row-major integer entries.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Matrix::from_vec(rows, cols, data.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Integer entries drawn uniformly from `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, bound: i64, rng: &mut R) -> Self {
        Matrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-bound..=bound)))
    }

    /// Random invertible integer matrix, rejection sampled.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Self {
        loop {
            let m = Matrix::random(n, n, bound, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn bracket(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    /// Row-major flattening into a column vector.
    pub fn vectorize(&self) -> Matrix {
        Matrix::from_vec(self.data.len(), 1, self.data.clone())
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Rows `r0..r0 + rows`, columns `c0..c0 + cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Horizontal concatenation; all parts must have `rows` rows.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, c0 + j, p.get(i, j).clone());
                }
            }
            c0 += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts must have `cols` columns.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            data.extend(p.data.iter().cloned());
            rows += p.rows;
        }
        Matrix { rows, cols, data }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (data, pivots) = exact::rref(&self.data, self.rows, self.cols);
        (Matrix::from_vec(self.rows, self.cols, data), pivots)
    }

    /// Plain rational Gauss-Jordan, the oracle for [`Matrix::rref`].
    #[cfg(test)]
    fn rref_rational(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a.get(r, c).recip();
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        exact::rank(&self.data, self.rows, self.cols)
    }

    /// A lower bound for [`Matrix::rank`] from arithmetic modulo a large
    /// prime, exact for all but finitely many matrices.
    pub fn rank_lower_bound(&self) -> usize {
        exact::rank_mod_prime(&self.data, self.rows, self.cols).unwrap_or(0)
    }

    /// Basis of the null space, as the columns of a `cols x k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Rational::one());
            for (row, &p) in pivots.iter().enumerate() {
                out.set(p, k, -r.get(row, f));
            }
        }
        out
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Standard basis vectors completing the column span of `self` to the
    /// whole space, chosen as the non-pivot coordinates of `self^T`.
    pub fn complement(&self) -> Matrix {
        let (_, pivots) = self.transpose().rref();
        let free: Vec<usize> = (0..self.rows).filter(|c| !pivots.contains(c)).collect();
        Matrix::from_fn(self.rows, free.len(), |i, j| {
            if i == free[j] {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Some `X` with `self * X = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = Matrix::hstack(self.rows, &[self, rhs]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    /// Whether the column span of `self` contains every column of `other`.
    pub fn span_contains(&self, other: &Matrix) -> bool {
        let joined = Matrix::hstack(self.rows, &[self, other]);
        joined.rank() == self.rank()
    }

    /// Whether the column spans of `self` and `other` coincide.
    pub fn same_span(&self, other: &Matrix) -> bool {
        self.rank() == other.rank() && self.span_contains(other)
    }

    /// Largest absolute numerator or denominator, a cheap size measure.
    pub fn height(&self) -> BigInt {
        self.data
            .iter()
            .flat_map(|q| [q.numer().abs(), q.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|q| q.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let data = exact::product(&self.data, &rhs.data, self.rows, self.cols, rhs.cols);
        Matrix::from_vec(self.rows, rhs.cols, data)
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "add: shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.data.len() != repr.rows * repr.cols {
            return Err(de::Error::custom(format!(
                "matrix {}x{} needs {} entries, got {}",
                repr.rows,
                repr.cols,
                repr.rows * repr.cols,
                repr.data.len()
            )));
        }
        let data = repr
            .data
            .iter()
            .map(|s| {
                parse_rational(s).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_vec(repr.rows, repr.cols, data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, d: &[i64]) -> Matrix {
        Matrix::from_i64(rows, cols, d)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.shape(), (3, 2));
        assert!((&a * &k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn empty_shapes() {
        let a = Matrix::zeros(0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().shape(), (3, 3));
        let b = Matrix::zeros(3, 0);
        assert_eq!(b.rank(), 0);
        assert_eq!(b.kernel().shape(), (0, 0));
        assert_eq!((&b * &Matrix::zeros(0, 2)), Matrix::zeros(3, 2));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        let x = m(2, 1, &[1, 1]);
        assert!(m(2, 1, &[1, 2]).solve(&x).is_none());
    }

    #[test]
    fn complement_spans_quotient() {
        let u = m(3, 1, &[0, 1, 1]);
        let c = u.complement();
        assert_eq!(c.cols(), 2);
        assert_eq!(Matrix::hstack(3, &[&u, &c]).rank(), 3);
    }

    #[test]
    fn rational_strings() {
        let q = Rational::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(format_rational(&q), "-1/2");
        assert_eq!(parse_rational("-1/2"), Some(q));
        assert_eq!(parse_rational("4"), Some(rat(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&rat(5)), "5/1");
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_vec(1, 2, vec![rat(1), Rational::new(2.into(), 3.into())]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"data":["1/1","2/3"]}"#);
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Matrix>(r#"{"rows":1,"cols":2,"data":["1"]}"#).is_err());
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 0usize..5, cols in 0usize..5, seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::random(rows, cols, 2, &mut rng);
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.cols(), cols);
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn fraction_free_matches_rational(
            rows in 0usize..7,
            cols in 0usize..7,
            rank in 0usize..7,
            seed in any::<u64>(),
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let k = rank.min(rows).min(cols);
            let a = &Matrix::random(rows, k, 9, &mut rng) * &Matrix::random(k, cols, 9, &mut rng);
            let d = Matrix::from_fn(cols, cols, |i, j| {
                if i == j { Rational::new(rat(1).to_integer(), BigInt::from(i as i64 + 2)) } else { rat(0) }
            });
            let a = &a * &d;
            prop_assert_eq!(a.rref(), a.rref_rational());
            prop_assert_eq!(a.rank_lower_bound(), a.rank());
        }

        #[test]
        fn modular_rank_bounds_rank(rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::random(rows, cols, 1 << 40, &mut rng);
            prop_assert!(a.rank_lower_bound() <= a.rank());
        }

        #[test]
        fn product_matches_definition(seed in any::<u64>()) {
            use rand::{Rng as _, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::from_fn(3, 4, |_, _| Rational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=5))));
            let b = Matrix::from_fn(4, 2, |_, _| Rational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=5))));
            let c = &a * &b;
            for i in 0..3 {
                for j in 0..2 {
                    let mut s = rat(0);
                    for t in 0..4 {
                        s += a.get(i, t) * b.get(t, j);
                    }
                    prop_assert_eq!(c.get(i, j), &s);
                }
            }
        }
    }
}
