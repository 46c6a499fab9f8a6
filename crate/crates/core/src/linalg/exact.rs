//! Fraction-free Gauss-Jordan elimination on integer rows.
//!
//! Every intermediate entry is a minor of the input, so each division by the
//! previous pivot is exact. A checked `i128` pass runs first and the `BigInt`
//! pass only runs when it overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

trait Ring: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_zero(&self) -> bool;
    /// `(p * x - a * y) / d`, `None` on overflow.
    fn step(p: &Self, x: &Self, a: &Self, y: &Self, d: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn nil() -> Self {
        0
    }

    fn unit() -> Self {
        1
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn step(p: &i128, x: &i128, a: &i128, y: &i128, d: &i128) -> Option<i128> {
        let n = p.checked_mul(*x)?.checked_sub(a.checked_mul(*y)?)?;
        debug_assert_eq!(n % d, 0, "inexact fraction-free step");
        Some(n / d)
    }
}

impl Ring for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }

    fn unit() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn step(p: &BigInt, x: &BigInt, a: &BigInt, y: &BigInt, d: &BigInt) -> Option<BigInt> {
        let n = p * x - a * y;
        if d.is_one() {
            return Some(n);
        }
        let (q, r) = n.div_rem(d);
        debug_assert!(Zero::is_zero(&r), "inexact fraction-free step");
        Some(q)
    }
}

/// Eliminates in place; returns the pivot columns, `None` on overflow. On
/// success row `k` has its pivot in column `pivots[k]`, every pivot equals
/// the last one, and all other entries of pivot columns are zero.
fn gauss_jordan<T: Ring>(m: &mut [T], rows: usize, cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut prev = T::unit();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let piv = m[r * cols + c].clone();
        let zero = T::nil();
        for i in (0..rows).filter(|&i| i != r) {
            let a = m[i * cols + c].clone();
            for j in 0..cols {
                let (x, y) = (&m[i * cols + j], &m[r * cols + j]);
                if x.is_zero() && (a.is_zero() || y.is_zero()) {
                    continue;
                }
                let v = if a.is_zero() {
                    T::step(&piv, x, &zero, &zero, &prev)?
                } else {
                    T::step(&piv, x, &a, y, &prev)?
                };
                m[i * cols + j] = v;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

/// Each row multiplied by the lcm of its denominators.
fn integer_rows(data: &[Rational], rows: usize, cols: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &data[i * cols..(i + 1) * cols];
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        out.extend(row.iter().map(|q| q.numer() * (&l / q.denom())));
    }
    out
}

fn small(ints: &[BigInt]) -> Option<Vec<i128>> {
    ints.iter().map(ToPrimitive::to_i128).collect()
}

/// Integer matrix with the same row space, after elimination, plus pivots.
enum Reduced {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

fn reduce(data: &[Rational], rows: usize, cols: usize) -> (Reduced, Vec<usize>) {
    let ints = integer_rows(data, rows, cols);
    if let Some(mut s) = small(&ints) {
        if let Some(p) = gauss_jordan(&mut s, rows, cols) {
            return (Reduced::Small(s), p);
        }
    }
    let mut b = ints;
    let p = gauss_jordan(&mut b, rows, cols).expect("BigInt elimination cannot overflow");
    (Reduced::Big(b), p)
}

pub(super) fn rank(data: &[Rational], rows: usize, cols: usize) -> usize {
    reduce(data, rows, cols).1.len()
}

/// Reduced row echelon form as rationals together with the pivot columns.
pub(super) fn rref(data: &[Rational], rows: usize, cols: usize) -> (Vec<Rational>, Vec<usize>) {
    let (m, pivots) = reduce(data, rows, cols);
    let mut out = vec![Rational::zero(); rows * cols];
    let big = |k: usize| -> BigInt {
        match &m {
            Reduced::Small(s) => BigInt::from(s[k]),
            Reduced::Big(b) => b[k].clone(),
        }
    };
    for (k, &c) in pivots.iter().enumerate() {
        let piv = big(k * cols + c);
        for j in 0..cols {
            let v = big(k * cols + j);
            if !Zero::is_zero(&v) {
                out[k * cols + j] = Rational::new(v, piv.clone());
            }
        }
    }
    (out, pivots)
}

/// `a * b` for row-major `a` (`n x k`) and `b` (`k x m`), clearing row
/// denominators of `a` and column denominators of `b` first.
pub(super) fn product(
    a: &[Rational],
    b: &[Rational],
    n: usize,
    k: usize,
    m: usize,
) -> Vec<Rational> {
    let row_scale: Vec<BigInt> = (0..n)
        .map(|i| {
            a[i * k..(i + 1) * k]
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
        })
        .collect();
    let col_scale: Vec<BigInt> = (0..m)
        .map(|j| (0..k).fold(BigInt::one(), |acc, t| acc.lcm(b[t * m + j].denom())))
        .collect();
    let ai: Vec<BigInt> = (0..n * k)
        .map(|idx| a[idx].numer() * (&row_scale[idx / k] / a[idx].denom()))
        .collect();
    let bi: Vec<BigInt> = (0..k * m)
        .map(|idx| b[idx].numer() * (&col_scale[idx % m] / b[idx].denom()))
        .collect();
    let sums: Vec<BigInt> = match (small(&ai), small(&bi)) {
        (Some(sa), Some(sb)) => match small_product(&sa, &sb, n, k, m) {
            Some(v) => v.into_iter().map(BigInt::from).collect(),
            None => big_product(&ai, &bi, n, k, m),
        },
        _ => big_product(&ai, &bi, n, k, m),
    };
    sums.into_iter()
        .enumerate()
        .map(|(idx, s)| {
            if Zero::is_zero(&s) {
                Rational::zero()
            } else {
                let den = &row_scale[idx / m] * &col_scale[idx % m];
                if den.is_one() {
                    Rational::from_integer(s)
                } else {
                    Rational::new(s, den)
                }
            }
        })
        .collect()
}

fn small_product(a: &[i128], b: &[i128], n: usize, k: usize, m: usize) -> Option<Vec<i128>> {
    let mut out = vec![0i128; n * m];
    for i in 0..n {
        for t in 0..k {
            let x = a[i * k + t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                let y = b[t * m + j];
                if y != 0 {
                    out[i * m + j] = out[i * m + j].checked_add(x.checked_mul(y)?)?;
                }
            }
        }
    }
    Some(out)
}

fn big_product(a: &[BigInt], b: &[BigInt], n: usize, k: usize, m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * m];
    for i in 0..n {
        for t in 0..k {
            let x = &a[i * k + t];
            if Zero::is_zero(x) {
                continue;
            }
            for j in 0..m {
                let y = &b[t * m + j];
                if !Zero::is_zero(y) {
                    out[i * m + j] += x * y;
                }
            }
        }
    }
    out
}

/// The Mersenne prime `2^61 - 1`.
const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn residue(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    x.mod_floor(&p).to_u64().expect("residue fits")
}

/// Rank of the reduction modulo `2^61 - 1`, a lower bound for the rank over
/// the rationals. `None` when a denominator vanishes modulo the prime.
pub(super) fn rank_mod_prime(data: &[Rational], rows: usize, cols: usize) -> Option<usize> {
    let mut m = Vec::with_capacity(rows * cols);
    for q in data {
        let den = residue(q.denom());
        if den == 0 {
            return None;
        }
        m.push(mul_mod(residue(q.numer()), pow_mod(den, PRIME - 2)));
    }
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = pow_mod(m[r * cols + c], PRIME - 2);
        for i in r + 1..rows {
            let a = m[i * cols + c];
            if a == 0 {
                continue;
            }
            let f = mul_mod(a, inv);
            for j in c..cols {
                let y = m[r * cols + j];
                if y != 0 {
                    let x = m[i * cols + j];
                    m[i * cols + j] = (x + PRIME - mul_mod(f, y)) % PRIME;
                }
            }
        }
        r += 1;
    }
    Some(r)
}
