//! Exact integer and rational matrices.
//!
//! Everything here works over arbitrary-precision integers. Determinants and
//! inverses use fraction-free (Bareiss) elimination so intermediate entries
//! stay integral, and lattice bases are canonicalised by a column Hermite
//! normal form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `values` (1 if empty).
pub(crate) fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Canonical string form of a rational: `p/q`, or just `p` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for literal matrices.
    pub fn from_i64<const N: usize>(rows: [[i64; N]; N]) -> Self {
        assert!(N > 0, "matrix dimension must be positive");
        IntMatrix {
            n: N,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        IntMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigInt::one())
    }

    pub fn scalar(n: usize, k: BigInt) -> Self {
        Self::from_fn(n, |i, j| if i == j { k.clone() } else { BigInt::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.entries.iter()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.n, |i, j| Rational::from_integer(self.get(i, j).clone()))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.rows())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Classical adjugate, so that `M * adj(M) = det(M) * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, |i, j| {
            // cofactor C_{ji}
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| self.get(r, c).clone())
                        .collect()
                })
                .collect();
            let d = bareiss_det(minor);
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Monic characteristic polynomial `det(zI - M)`, coefficients in
    /// ascending order of degree.
    pub fn charpoly(&self) -> Vec<BigInt> {
        self.to_rational()
            .charpoly()
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect()
    }

    /// Column-style Hermite normal form; see [`hnf_of_columns`].
    pub fn hnf(&self) -> Result<Self> {
        let cols: Vec<Vec<BigInt>> = (0..self.n).map(|j| self.column(j)).collect();
        hnf_of_columns(self.n, &cols)
    }

    /// Smallest `t >= 1` with `M^t = I (mod d)`.
    pub fn order_mod(&self, d: &BigInt) -> Result<u64> {
        if !d.is_positive() {
            return Err(Error::OrderNotFound {
                modulus: d.to_string(),
                cap: "0".into(),
            });
        }
        let cap = d.pow((self.n * self.n) as u32);
        if !self.det().gcd(d).is_one() {
            return Err(Error::OrderNotFound {
                modulus: d.to_string(),
                cap: cap.to_string(),
            });
        }
        let reduce = |m: &IntMatrix| IntMatrix {
            n: m.n,
            entries: m.entries.iter().map(|x| x.mod_floor(d)).collect(),
        };
        let one = reduce(&Self::identity(self.n));
        let base = reduce(self);
        let mut power = base.clone();
        let mut t: u64 = 1;
        loop {
            if power == one {
                return Ok(t);
            }
            if BigInt::from(t) >= cap {
                return Err(Error::OrderNotFound {
                    modulus: d.to_string(),
                    cap: cap.to_string(),
                });
            }
            power = reduce(&(&power * &base));
            t += 1;
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        IntMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }
}

impl<'a> Add<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &'a IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntMatrix::from_fn(self.n, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| -self.get(i, j))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Square matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(RatMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RatMatrix { n, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 || cols.iter().any(|c| c.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(Self::from_fn(n, |i, j| cols[j][i].clone()))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) * k)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|q| q.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|q| q.to_integer()).collect(),
        })
    }

    /// `(D, D * M)` with `D` the least common denominator of the entries.
    fn integer_scaled(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let d = common_denominator(&self.entries);
        let rows = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|q| (q * &d).to_integer())
                    .collect()
            })
            .collect();
        (d, rows)
    }

    /// Exact determinant via Bareiss elimination on the integer-scaled matrix.
    pub fn det(&self) -> Rational {
        let (d, rows) = self.integer_scaled();
        let det = bareiss_det(rows);
        Rational::new(det, d.pow(self.n as u32))
    }

    /// Exact inverse by fraction-free Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let (d, rows) = self.integer_scaled();
        // augmented [A | I]
        let mut a: Vec<Vec<BigInt>> = rows
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                r
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(k, p);
            let pivot_row = a[k].clone();
            let pivot = pivot_row[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let num = &pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot;
        }
        // left block is now diag(prev); A^{-1} = right / prev, M^{-1} = D * A^{-1}
        Ok(Self::from_fn(n, |i, j| {
            Rational::new(&a[i][n + j] * &d, a[i][i].clone())
        }))
    }

    /// Monic characteristic polynomial, ascending coefficients
    /// (Faddeev-LeVerrier recurrence).
    pub fn charpoly(&self) -> Vec<Rational> {
        let n = self.n;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = Self::from_fn(n, |_, _| Rational::zero());
        for k in 1..=n {
            let am = self * &m;
            let c = &coeffs[n - k + 1];
            m = Self::from_fn(n, |i, j| {
                if i == j {
                    am.get(i, j) + c
                } else {
                    am.get(i, j).clone()
                }
            });
            let am = self * &m;
            let trace: Rational = (0..n).map(|i| am.get(i, i).clone()).sum();
            coeffs[n - k] = -trace / rat(k as i64);
        }
        coeffs
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl<'a> Mul<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        RatMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }
}

impl<'a> Sub<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;

    fn sub(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        RatMatrix::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Hermite normal form of the column lattice spanned by `cols` (each of
/// length `n`, at least `n` of them, full row rank).
///
/// Convention: the result `H` is upper triangular (`H[i][j] = 0` for
/// `i > j`) with positive diagonal, and every entry to the right of a
/// diagonal entry is reduced into `0 <= H[i][j] < H[i][i]`.
pub fn hnf_of_columns(n: usize, cols: &[Vec<BigInt>]) -> Result<IntMatrix> {
    if n == 0 {
        return Err(Error::NotSquare);
    }
    if let Some(c) = cols.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let mut active: Vec<Vec<BigInt>> = cols
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = vec![Vec::new(); n];

    for i in (0..n).rev() {
        let pivot_idx = loop {
            let nonzero: Vec<usize> = (0..active.len()).filter(|&j| !active[j][i].is_zero()).collect();
            match nonzero.len() {
                0 => return Err(Error::SingularMatrix),
                1 => break nonzero[0],
                _ => {}
            }
            let p = *nonzero
                .iter()
                .min_by(|&&a, &&b| active[a][i].abs().cmp(&active[b][i].abs()))
                .expect("non-empty");
            let pcol = active[p].clone();
            for &j in nonzero.iter().filter(|&&j| j != p) {
                let q = active[j][i].div_floor(&pcol[i]);
                for (x, y) in active[j].iter_mut().zip(&pcol) {
                    *x -= &q * y;
                }
            }
        };
        let mut col = active.swap_remove(pivot_idx);
        if col[i].is_negative() {
            col.iter_mut().for_each(|x| *x = -&*x);
        }
        pivots[i] = col;
    }

    for i in (0..n).rev() {
        for j in i + 1..n {
            let q = pivots[j][i].div_floor(&pivots[i][i]);
            if q.is_zero() {
                continue;
            }
            let pcol = pivots[i].clone();
            for (x, y) in pivots[j].iter_mut().zip(&pcol) {
                *x -= &q * y;
            }
        }
    }

    Ok(IntMatrix::from_fn(n, |r, c| pivots[c][r].clone()))
}

/// Approximate value of a rational as `f64` (correct to a few ulps even for
/// very large numerators/denominators).
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let ln = ln_abs_rational(q);
    let v = ln.exp();
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural log of `|x|` for a nonzero big integer.
pub(crate) fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_abs_rational(q: &Rational) -> f64 {
    ln_abs_bigint(q.numer()) - ln_abs_bigint(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn hnf_examples() {
        let m = IntMatrix::from_i64([[4, 3], [1, 2]]);
        assert_eq!(m.hnf().unwrap(), IntMatrix::from_i64([[5, 4], [0, 1]]));
        assert_eq!(IntMatrix::identity(3).hnf().unwrap(), IntMatrix::identity(3));
        let two = IntMatrix::from_i64([[2, 0], [0, 2]]);
        assert_eq!(two.hnf().unwrap(), two);
    }

    #[test]
    fn hnf_singular() {
        let m = IntMatrix::from_i64([[1, 2], [2, 4]]);
        assert_eq!(m.hnf(), Err(Error::SingularMatrix));
    }

    #[test]
    fn hnf_redundant_columns() {
        let cols = vec![
            vec![1.into(), 0.into()],
            vec![0.into(), 1.into()],
            vec![1.into(), 1.into()],
        ];
        assert_eq!(hnf_of_columns(2, &cols).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_i64([[3, 1], [1, 2]]).det(), 5.into());
        assert_eq!(IntMatrix::from_i64([[-1, 14], [-1, 15]]).det(), (-1).into());
        assert_eq!(IntMatrix::identity(4).det(), 1.into());
        assert_eq!(IntMatrix::from_i64([[0, 1], [1, 0]]).det(), (-1).into());
        assert_eq!(IntMatrix::from_i64([[0, 0, 1], [0, 2, 0], [3, 0, 0]]).det(), (-6).into());
        let r = RatMatrix::new(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]).unwrap();
        assert_eq!(r.det(), q(1, 10) - q(1, 12));
    }

    #[test]
    fn inverses() {
        let m = IntMatrix::from_i64([[3, 1], [1, 2]]).to_rational();
        let expected = IntMatrix::from_i64([[2, -1], [-1, 3]]).to_rational().scale(&q(1, 5));
        assert_eq!(m.inverse().unwrap(), expected);
        assert_eq!(RatMatrix::identity(3).inverse().unwrap(), RatMatrix::identity(3));
        let m = IntMatrix::from_i64([[0, 1], [1, 2]]).to_rational();
        assert_eq!(m.inverse().unwrap(), IntMatrix::from_i64([[-2, 1], [1, 0]]).to_rational());
        let s = IntMatrix::from_i64([[1, 2], [2, 4]]).to_rational();
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn charpolys() {
        let cp = |m: IntMatrix| m.charpoly().into_iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(cp(IntMatrix::from_i64([[0, 1], [1, 2]])), vec![-1, -2, 1]);
        assert_eq!(cp(IntMatrix::identity(2)), vec![1, -2, 1]);
        assert_eq!(cp(IntMatrix::from_i64([[-1, 14], [-1, 15]])), vec![-1, -14, 1]);
    }

    #[test]
    fn orders_mod() {
        let m = IntMatrix::from_i64([[0, 1], [1, 2]]);
        assert_eq!(m.order_mod(&5.into()).unwrap(), 12);
        assert_eq!(IntMatrix::identity(3).order_mod(&7.into()).unwrap(), 1);
        assert_eq!(IntMatrix::from_i64([[0, 1], [1, 0]]).order_mod(&3.into()).unwrap(), 2);
        assert_eq!(m.order_mod(&1.into()).unwrap(), 1);
        assert!(matches!(
            IntMatrix::from_i64([[2, 0], [0, 1]]).order_mod(&4.into()),
            Err(Error::OrderNotFound { .. })
        ));
    }

    #[test]
    fn adjugate_identity() {
        let m = IntMatrix::from_i64([[3, 1, 4], [1, 5, 9], [2, 6, 5]]);
        let prod = &m * &m.adjugate();
        assert_eq!(prod, IntMatrix::scalar(3, m.det()));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&q(3, 1)), "3");
        assert_eq!(format_rational(&q(-2, 14)), "-1/7");
    }

    #[test]
    fn ln_of_huge_integer() {
        let x = BigInt::from(3).pow(2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_abs_bigint(&x) - expected).abs() < 1e-9 * expected);
    }
}
