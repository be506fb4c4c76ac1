//! Real algebraic number fields `Q[z]/(f)` in the power basis, with one
//! selected real embedding.
//!
//! The embedding is represented by a rational interval isolating a single
//! real root of `f`. Signs, comparisons and floors of field elements are
//! decided exactly: an element that is not zero as a coordinate vector is
//! non-zero under the embedding, so refining the root interval by bisection
//! always terminates with a definite answer.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, ln_abs_rational, rational_to_f64, RatMatrix, Rational};
use crate::poly::{modp, reduce_mod, Interval, Poly, SturmSequence};

/// Primes tried when looking for an irreducibility certificate.
const CERTIFICATE_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// How irreducibility of the defining polynomial is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Degree one.
    Linear,
    /// Irreducible modulo this prime, hence over Q.
    Certified { prime: u64 },
    /// No certificate found; the caller asserted irreducibility.
    Asserted,
}

/// Try to prove that a monic, squarefree integer polynomial is irreducible
/// over Q by finding a prime below 100 modulo which it stays irreducible.
pub fn irreducibility_certificate(coeffs: &[BigInt]) -> Result<Irreducibility> {
    let f = Poly::from_bigints(coeffs);
    let n = f.degree().ok_or(Error::NotMonic)?;
    if n == 0 || !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if n == 1 {
        return Ok(Irreducibility::Linear);
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if let Some(root) = integer_root(coeffs) {
        return Err(Error::ReduciblePolynomial(format!("rational root {root}")));
    }
    if n == 4 {
        if let Some(factor) = quadratic_factor(&f, coeffs) {
            return Err(Error::ReduciblePolynomial(format!(
                "quadratic factor {}",
                factor.display_in("z")
            )));
        }
    }
    for &p in &CERTIFICATE_PRIMES {
        if irreducible_mod(coeffs, n, p) {
            return Ok(Irreducibility::Certified { prime: p });
        }
    }
    Err(Error::NotCertified)
}

/// Distinct-degree test: `f` has no factor of degree `<= n/2` mod `p`.
fn irreducible_mod(coeffs: &[BigInt], n: usize, p: u64) -> bool {
    let f = reduce_mod(coeffs, p);
    if f.len() != n + 1 {
        return false;
    }
    let x: modp::PolyP = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = modp::pow_mod(&h, p, &f, p);
        let g = modp::gcd(&f, &modp::sub(&h, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// An integer root of a monic integer polynomial (every rational root is
/// an integer dividing the constant term).
fn integer_root(coeffs: &[BigInt]) -> Option<BigInt> {
    let f = Poly::from_bigints(coeffs);
    let c0 = coeffs[0].abs();
    if c0.is_zero() {
        return Some(BigInt::zero());
    }
    divisors(&c0)
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .find(|r| f.eval(&Rational::from_integer(r.clone())).is_zero())
}

fn divisors(m: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *m {
        if (m % &d).is_zero() {
            out.push(d.clone());
            let other = m / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Monic integer quadratic factor of a quartic, if one exists.
fn quadratic_factor(f: &Poly, coeffs: &[BigInt]) -> Option<Poly> {
    let bound: BigInt = f.cauchy_bound().ceil().to_integer();
    let c0 = coeffs[0].abs();
    let b_max: BigInt = &bound * BigInt::from(2);
    for c_abs in divisors(&c0) {
        if c_abs > &bound * &bound {
            continue;
        }
        for c in [c_abs.clone(), -c_abs] {
            let mut b = -b_max.clone();
            while b <= b_max {
                let g = Poly::from_bigints(&[c.clone(), b.clone(), BigInt::one()]);
                if f.div_rem(&g).1.is_zero() {
                    return Some(g);
                }
                b += 1;
            }
        }
    }
    None
}

/// A real number field `Q(gamma)`, `gamma` a selected real root of a monic
/// irreducible integer polynomial.
#[derive(Clone, Debug)]
pub struct NumberField {
    coeffs: Vec<BigInt>,
    poly: Poly,
    sturm: SturmSequence,
    isolating: Interval,
    approx: DyadicRoot,
    irreducibility: Irreducibility,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.approx == other.approx
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Field defined by `coeffs` (ascending, monic). The polynomial must be
    /// certifiably irreducible; see [`NumberField::with_assertion`] otherwise.
    ///
    /// `root_hint` is an interval `(lo, hi]` containing exactly one real
    /// root; by default the largest real root is used.
    pub fn new(coeffs: Vec<BigInt>, root_hint: Option<(Rational, Rational)>) -> Result<Arc<Self>> {
        Self::with_assertion(coeffs, root_hint, false)
    }

    /// Like [`NumberField::new`], but when no certificate is found and
    /// `assert_irreducible` is set the field is built anyway with the
    /// assertion recorded.
    pub fn with_assertion(
        coeffs: Vec<BigInt>,
        root_hint: Option<(Rational, Rational)>,
        assert_irreducible: bool,
    ) -> Result<Arc<Self>> {
        let irreducibility = match irreducibility_certificate(&coeffs) {
            Ok(cert) => cert,
            Err(Error::NotCertified) if assert_irreducible => Irreducibility::Asserted,
            Err(e) => return Err(e),
        };
        let poly = Poly::from_bigints(&coeffs);
        let sturm = SturmSequence::new(&poly);
        if sturm.count_real() == 0 {
            return Err(Error::NoRealRoot);
        }
        let (lo, hi) = match root_hint {
            Some((lo, hi)) => {
                if lo >= hi || sturm.count_in(&lo, &hi) != 1 {
                    return Err(Error::BadRootHint {
                        lo: format_rational(&lo),
                        hi: format_rational(&hi),
                    });
                }
                (lo, hi)
            }
            None => largest_root_interval(&poly, &sturm),
        };
        let isolating = normalize_isolating(&poly, &sturm, lo, hi);
        let approx = dyadic_from_isolating(&poly, &sturm, &isolating);
        let mut field = NumberField {
            coeffs,
            poly,
            sturm,
            isolating,
            approx,
            irreducibility,
        };
        let mut approx = field.approx.clone();
        while !approx.narrower_than(64) {
            approx = field.bisect_root(&approx);
        }
        field.approx = approx;
        Ok(Arc::new(field))
    }

    /// `Q(sqrt(d))` for a non-square integer `d > 0` (convenience).
    pub fn quadratic(d: i64) -> Result<Arc<Self>> {
        Self::new(vec![BigInt::from(-d), BigInt::zero(), BigInt::one()], None)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Defining polynomial coefficients, ascending, last one `1`.
    pub fn defining_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn defining_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn isolating_interval(&self) -> &Interval {
        &self.isolating
    }

    pub fn irreducibility(&self) -> &Irreducibility {
        &self.irreducibility
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: coords.len(),
            });
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            coords,
        })
    }

    /// Element with integer coordinates; panics on a length mismatch.
    pub fn from_ints(self: &Arc<Self>, coords: &[i64]) -> FieldElement {
        self.element(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .expect("coordinate count must equal the field degree")
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> FieldElement {
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[0] = q;
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.from_rational(Rational::zero())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(Rational::one())
    }

    /// The power-basis generator `gamma` (for degree 1, the rational root).
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        if self.degree() == 1 {
            return self.from_rational(-Rational::from_integer(self.coeffs[0].clone()));
        }
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[1] = Rational::one();
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Reduce a polynomial in `gamma` to power-basis coordinates.
    fn reduce(self: &Arc<Self>, p: &Poly) -> FieldElement {
        let r = if p.degree().is_some_and(|d| d >= self.degree()) {
            p.div_rem(&self.poly).1
        } else {
            p.clone()
        };
        let coords = (0..self.degree()).map(|i| r.coeff(i)).collect();
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Sign of `f(x / 2^k)`, computed as the sign of `2^(kn) f(x / 2^k)`.
    fn sign_at_dyadic(&self, x: &BigInt, k: u64) -> Ordering {
        let n = self.degree();
        let mut acc = self.coeffs[n].clone();
        for i in (0..n).rev() {
            acc = acc * x + (&self.coeffs[i] << (k * (n - i) as u64));
        }
        acc.sign_ordering()
    }

    fn bisect_root(&self, r: &DyadicRoot) -> DyadicRoot {
        if r.a == r.b {
            return r.clone();
        }
        let k = r.k + 1;
        let mid = &r.a + &r.b;
        let s_mid = self.sign_at_dyadic(&mid, k);
        if s_mid == Ordering::Equal {
            return DyadicRoot {
                a: mid.clone(),
                b: mid,
                k,
                sign_lo: s_mid,
            };
        }
        if r.sign_lo == s_mid {
            DyadicRoot {
                a: mid,
                b: &r.b << 1,
                k,
                sign_lo: s_mid,
            }
        } else {
            DyadicRoot {
                a: &r.a << 1,
                b: mid,
                k,
                sign_lo: r.sign_lo,
            }
        }
    }

    /// Enclosure of the selected root of width at most `width`.
    pub fn root_enclosure(&self, width: &Rational) -> Interval {
        let mut r = self.approx.clone();
        loop {
            let iv = r.to_interval();
            if iv.width() <= *width {
                return iv;
            }
            r = self.bisect_root(&r);
        }
    }

    /// Number of real roots of the defining polynomial.
    pub fn real_root_count(&self) -> usize {
        self.sturm.count_real()
    }
}

fn largest_root_interval(poly: &Poly, sturm: &SturmSequence) -> (Rational, Rational) {
    let b = poly.cauchy_bound();
    let (mut lo, hi) = (-b.clone(), b);
    let mut hi = hi;
    while sturm.count_in(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if sturm.count_in(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Root enclosure `[a / 2^k, b / 2^k]`; `sign_lo` is the sign of the
/// defining polynomial at the left endpoint. `a == b` marks an exact root.
#[derive(Clone, Debug, PartialEq, Eq)]
struct DyadicRoot {
    a: BigInt,
    b: BigInt,
    k: u64,
    sign_lo: Ordering,
}

impl DyadicRoot {
    fn to_interval(&self) -> Interval {
        let den = BigInt::one() << self.k;
        Interval::new(Rational::new(self.a.clone(), den.clone()), Rational::new(self.b.clone(), den))
    }

    /// Width at most `2^-bits`.
    fn narrower_than(&self, bits: u64) -> bool {
        ((&self.b - &self.a) << bits) <= (BigInt::one() << self.k)
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Outward-rounded dyadic version of an isolating interval whose endpoints
/// are not roots.
fn dyadic_from_isolating(poly: &Poly, sturm: &SturmSequence, iv: &Interval) -> DyadicRoot {
    if iv.lo == iv.hi {
        // only degree one reaches this: monic, so the root is an integer
        let r = iv.lo.to_integer();
        return DyadicRoot {
            a: r.clone(),
            b: r,
            k: 0,
            sign_lo: Ordering::Equal,
        };
    }
    let mut k = 0u64;
    loop {
        let den = Rational::from_integer(BigInt::one() << k);
        let a = (&iv.lo * &den).floor().to_integer();
        let b = (&iv.hi * &den).ceil().to_integer();
        let lo = Rational::new(a.clone(), BigInt::one() << k);
        let hi = Rational::new(b.clone(), BigInt::one() << k);
        let s_lo = poly.sign_at(&lo);
        if s_lo != Ordering::Equal && poly.sign_at(&hi) != Ordering::Equal && sturm.count_in(&lo, &hi) == 1 {
            return DyadicRoot { a, b, k, sign_lo: s_lo };
        }
        k += 1;
    }
}

/// Shrink `(lo, hi]` so that neither endpoint is a root, or collapse it to a
/// point when the root is rational.
fn normalize_isolating(poly: &Poly, sturm: &SturmSequence, mut lo: Rational, hi: Rational) -> Interval {
    let mut hi = hi;
    if poly.eval(&hi).is_zero() {
        return Interval::point(hi);
    }
    while poly.eval(&lo).is_zero() {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if poly.eval(&mid).is_zero() {
            return Interval::point(mid);
        }
        if sturm.count_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Interval::new(lo, hi)
}

/// Element of a [`NumberField`], as rational coordinates over the power
/// basis `1, gamma, ..., gamma^(n-1)`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

pub(crate) fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// All coordinates are integers.
    pub fn has_integer_coords(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn check_field(&self, other: &FieldElement) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coords.clone())
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Product, reduced modulo the defining polynomial.
    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.field.reduce(&(&self.as_poly() * &other.as_poly())))
    }

    fn zip_with(&self, other: &FieldElement, f: impl Fn(&Rational, &Rational) -> Rational) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[z].
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // invariant: s_i * a = r_i (mod f)
        let (mut r0, mut r1) = (self.field.poly.clone(), self.as_poly());
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            // a shares a factor with f: only possible if f is reducible
            return Err(Error::DivisionByZero);
        }
        let c = r0.coeff(0).recip();
        Ok(self.field.reduce(&s0.scale(&c)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents need a non-zero base.
    pub fn pow(&self, k: i64) -> Result<FieldElement> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Matrix of `x -> self * x` in the power basis (column `j` holds the
    /// coordinates of `self * gamma^j`).
    pub fn mult_matrix(&self) -> RatMatrix {
        let n = self.field.degree();
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                let shifted = &self.as_poly() * &Poly::monomial(j);
                self.field.reduce(&shifted).coords
            })
            .collect();
        RatMatrix::from_columns(&cols).expect("square by construction")
    }

    pub fn norm(&self) -> Rational {
        self.mult_matrix().det()
    }

    pub fn trace(&self) -> Rational {
        let m = self.mult_matrix();
        (0..m.dim()).map(|i| m.get(i, i).clone()).sum()
    }

    /// Monic minimal polynomial over Q: the radical of the characteristic
    /// polynomial of the multiplication matrix.
    pub fn minimal_polynomial(&self) -> Poly {
        Poly::new(self.mult_matrix().charpoly()).radical()
    }

    /// Evaluate a rational polynomial at this element (Horner).
    pub fn eval_poly(&self, p: &Poly) -> FieldElement {
        p.coeffs().iter().rev().fold(self.field.zero(), |acc, c| {
            &(&acc * self) + &self.field.from_rational(c.clone())
        })
    }

    /// Integer enclosure `[lo, hi] / den` of the real value, refined until
    /// `done` accepts it.
    fn enclosure_until(&self, mut done: impl FnMut(&BigInt, &BigInt, &BigInt) -> bool) -> (BigInt, BigInt, BigInt) {
        let d = crate::linalg::common_denominator(&self.coords);
        let ints: Vec<BigInt> = self.coords.iter().map(|c| (c * &d).to_integer()).collect();
        let m = ints.len() - 1;
        let mut root = self.field.approx.clone();
        let mut steps = 1usize;
        loop {
            // sum_i e_i x^i 2^(k(m-i)) over x in [a, b]
            let (mut lo, mut hi) = (ints[m].clone(), ints[m].clone());
            for i in (0..m).rev() {
                let products = [&lo * &root.a, &lo * &root.b, &hi * &root.a, &hi * &root.b];
                let shift = &ints[i] << (root.k * (m - i) as u64);
                lo = products.iter().min().expect("four products") + &shift;
                hi = products.iter().max().expect("four products") + &shift;
            }
            let den = &d << (root.k * m as u64);
            if done(&lo, &hi, &den) || root.a == root.b {
                return (lo, hi, den);
            }
            for _ in 0..steps {
                root = self.field.bisect_root(&root);
            }
            steps = (steps * 2).min(256);
        }
    }

    /// Enclosure of the real value of width at most `width`.
    pub fn enclosure(&self, width: &Rational) -> Interval {
        let (lo, hi, den) = self.enclosure_until(|lo, hi, den| (hi - lo) * width.denom() <= width.numer() * den);
        Interval::new(Rational::new(lo, den.clone()), Rational::new(hi, den))
    }

    /// Sign under the embedding, decided exactly.
    pub fn signum_real(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (lo, _, _) = self.enclosure_until(|lo, hi, _| lo.is_positive() || hi.is_negative());
        lo.sign_ordering()
    }

    /// Compare real values under the embedding.
    pub fn cmp_real(&self, other: &FieldElement) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum_real())
    }

    pub fn abs_real(&self) -> FieldElement {
        if self.signum_real() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Floor of the real value under the embedding.
    pub fn floor_real(&self) -> BigInt {
        if self.is_rational() {
            return self.coords[0].floor().to_integer();
        }
        let (lo, _, den) = self.enclosure_until(|lo, hi, den| lo.div_floor(den) == hi.div_floor(den));
        lo.div_floor(&den)
    }

    /// Midpoint of an enclosure not containing zero whose relative width is
    /// below 2^-60.
    fn tight_midpoint(&self) -> Rational {
        let (lo, hi, den) = self.enclosure_until(|lo, hi, _| {
            (lo.is_positive() || hi.is_negative()) && ((hi - lo) << 60u32) <= lo.abs().min(hi.abs())
        });
        Rational::new(lo + hi, den << 1u32)
    }

    /// Real value as `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        rational_to_f64(&self.tight_midpoint())
    }

    /// `ln |x|` of the real value; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_abs_rational(&self.tight_midpoint())
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Squarefree part and square factor: `m = f^2 * d` with `d` squarefree.
pub(crate) fn squarefree_decomposition(m: &BigInt) -> (BigInt, BigInt) {
    let sign = if m.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = m.abs();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= &p;
        }
        p += 1;
    }
    core *= rest;
    (square, sign * core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn sqrt2() -> Arc<NumberField> {
        NumberField::quadratic(2).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let f = sqrt2();
        let a = f.from_ints(&[1, 1]);
        assert_eq!(&a * &a, f.from_ints(&[3, 2]));
        assert_eq!(&a * &f.from_ints(&[3, 2]), f.from_ints(&[7, 5]));
        let x = f.element(vec![q(3, 7), q(-2, 5)]).unwrap();
        assert_eq!(&x * &f.one(), x);
    }

    #[test]
    fn field_mismatch() {
        let a = sqrt2().from_ints(&[1, 1]);
        let b = NumberField::quadratic(3).unwrap().from_ints(&[1, 1]);
        assert_eq!(a.try_mul(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn inverse_examples() {
        let f = sqrt2();
        assert_eq!(f.from_ints(&[1, 1]).inv().unwrap(), f.from_ints(&[-1, 1]));
        assert_eq!(f.one().inv().unwrap(), f.one());
        let x = f.from_ints(&[4, 1]).inv().unwrap();
        assert_eq!(x, f.element(vec![q(2, 7), q(-1, 14)]).unwrap());
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f = sqrt2();
        let ratio = f.element(vec![q(8, 14), q(5, 14)]).unwrap();
        assert_eq!(ratio.minimal_polynomial(), Poly::new(vec![q(1, 14), q(-8, 7), q(1, 1)]));
        assert_eq!(f.from_ints(&[1, 1]).minimal_polynomial(), Poly::from_ints(&[-1, -2, 1]));
        assert_eq!(f.from_ints(&[3, 0]).minimal_polynomial(), Poly::from_ints(&[-3, 1]));
    }

    #[test]
    fn ratio_of_example_frequencies() {
        let f = sqrt2();
        let r = f.from_ints(&[3, 2]).try_div(&f.from_ints(&[4, 1])).unwrap();
        assert_eq!(r, f.element(vec![q(8, 14), q(5, 14)]).unwrap());
    }

    #[test]
    fn multiplication_matrices() {
        let f = sqrt2();
        let m = f.from_ints(&[1, 1]).mult_matrix();
        assert_eq!(m, crate::linalg::IntMatrix::from_i64([[1, 2], [1, 1]]).to_rational());
        assert_eq!(f.one().mult_matrix(), RatMatrix::identity(2));
        assert_eq!(
            f.generator().mult_matrix(),
            crate::linalg::IntMatrix::from_i64([[0, 2], [1, 0]]).to_rational()
        );
    }

    #[test]
    fn real_comparisons() {
        let f = sqrt2();
        let two = f.from_ints(&[2, 0]);
        assert_eq!(f.from_ints(&[1, 1]).cmp_real(&two).unwrap(), Ordering::Greater);
        let cube = f.from_ints(&[1, 1]).pow(3).unwrap();
        assert_eq!(f.from_ints(&[7, 5]).cmp_real(&cube).unwrap(), Ordering::Equal);
        assert_eq!(f.from_ints(&[8, -5]).cmp_real(&f.one()).unwrap(), Ordering::Less);
    }

    #[test]
    fn floors_and_floats() {
        let f = sqrt2();
        assert_eq!(f.from_ints(&[7, 5]).floor_real(), BigInt::from(14));
        assert_eq!(f.from_ints(&[0, -1]).floor_real(), BigInt::from(-2));
        assert!((f.from_ints(&[1, 1]).to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let tiny = f.from_ints(&[-1, 1]).pow(40).unwrap();
        let expected = 40.0 * (2f64.sqrt() - 1.0).ln();
        assert!((tiny.ln_abs() - expected).abs() < 1e-12);
    }

    #[test]
    fn certificates() {
        let c = |v: &[i64]| irreducibility_certificate(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        assert_eq!(c(&[-2, 0, 1]), Ok(Irreducibility::Certified { prime: 3 }));
        assert!(matches!(c(&[-1, 0, 1]), Err(Error::ReduciblePolynomial(_))));
        assert!(matches!(c(&[-1, -2, 1]), Ok(Irreducibility::Certified { prime: _ })));
        // (z^2 - 2)(z^2 - 3): no rational root, caught by the quadratic search
        assert!(matches!(c(&[6, 0, -5, 0, 1]), Err(Error::ReduciblePolynomial(_))));
        // z^4 - 10 z^2 + 1 is irreducible but reducible modulo every prime
        assert_eq!(c(&[1, 0, -10, 0, 1]), Err(Error::NotCertified));
        assert!(matches!(c(&[-2, -1, 0, 1]), Ok(Irreducibility::Certified { .. })));
        assert_eq!(c(&[1, 2, 1]), Err(Error::NotSquarefree));
    }

    #[test]
    fn field_construction() {
        let f = NumberField::new(vec![1.into(), 0.into(), (-10).into(), 0.into(), 1.into()], None);
        assert_eq!(f, Err(Error::NotCertified));
        let f = NumberField::with_assertion(
            vec![1.into(), 0.into(), (-10).into(), 0.into(), 1.into()],
            None,
            true,
        )
        .unwrap();
        assert_eq!(f.irreducibility(), &Irreducibility::Asserted);
        // largest root sqrt(2) + sqrt(3)
        assert!((f.generator().to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);

        let neg = NumberField::new(vec![(-2).into(), 0.into(), 1.into()], Some((q(-2, 1), q(-1, 1)))).unwrap();
        assert_eq!(neg.generator().signum_real(), Ordering::Less);
        assert!(matches!(
            NumberField::new(vec![(-2).into(), 0.into(), 1.into()], Some((q(-2, 1), q(2, 1)))),
            Err(Error::BadRootHint { .. })
        ));
        assert!(matches!(
            NumberField::new(vec![2.into(), 0.into(), 1.into()], None),
            Err(Error::NoRealRoot)
        ));
        assert_eq!(
            NumberField::new(vec![(-2).into(), 0.into(), 2.into()], None),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn linear_field() {
        let f = NumberField::new(vec![(-3).into(), 1.into()], None).unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.generator(), f.from_ints(&[3]));
        assert_eq!(f.from_ints(&[5]).cmp_real(&f.from_ints(&[4])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decomposition(&BigInt::from(8)), (2.into(), 2.into()));
        assert_eq!(squarefree_decomposition(&BigInt::from(50)), (5.into(), 2.into()));
        assert_eq!(squarefree_decomposition(&BigInt::from(12)), (2.into(), 3.into()));
        assert_eq!(squarefree_decomposition(&BigInt::from(5)), (1.into(), 5.into()));
    }
}
