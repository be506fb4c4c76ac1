//! Full-rank Z-modules inside a number field, their multiplier rings, and
//! unit groups of orders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{same_field, squarefree_decomposition, FieldElement, NumberField};
use crate::linalg::{common_denominator, hnf_of_columns, IntMatrix, RatMatrix, Rational};

/// Step cap for continued-fraction period detection.
const CF_STEP_CAP: usize = 1_000_000;
/// Cap on the exponent searched when descending from the maximal order.
const POWER_SEARCH_CAP: u64 = 1_000_000;

/// A full-rank lattice `L` in `F`, stored canonically as `(1/d) * H * Z^n`
/// where `d` is the least integer with `dL` integral and `H` is the column
/// Hermite normal form of `dL` in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct Lattice {
    field: Arc<NumberField>,
    denominator: BigInt,
    hnf: IntMatrix,
    basis: Vec<FieldElement>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.denominator == other.denominator && self.hnf == other.hnf
    }
}

impl Eq for Lattice {}

impl Lattice {
    /// Z-span of `gens`, which must span `F` over Q.
    pub fn from_generators(field: &Arc<NumberField>, gens: &[FieldElement]) -> Result<Self> {
        let n = field.degree();
        if gens.iter().any(|g| !same_field(g.field(), field)) {
            return Err(Error::FieldMismatch);
        }
        if gens.len() < n {
            return Err(Error::NotFullRank);
        }
        let d = common_denominator(gens.iter().flat_map(|g| g.coords()));
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.coords().iter().map(|c| (c * &d).to_integer()).collect())
            .collect();
        let hnf = match hnf_of_columns(n, &cols) {
            Ok(h) => h,
            Err(Error::SingularMatrix) => return Err(Error::NotFullRank),
            Err(e) => return Err(e),
        };
        let basis = (0..n)
            .map(|j| {
                let coords = hnf.column(j).into_iter().map(|x| Rational::new(x, d.clone())).collect();
                field.element(coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Lattice {
            field: Arc::clone(field),
            denominator: d,
            hnf,
            basis,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Canonical (HNF) basis.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Coordinates of `x` in the canonical basis (rational in general).
    pub fn coordinates(&self, x: &FieldElement) -> Result<Vec<Rational>> {
        if !same_field(x.field(), &self.field) {
            return Err(Error::FieldMismatch);
        }
        let n = self.field.degree();
        let target: Vec<Rational> = x.coords().iter().map(|c| c * &self.denominator).collect();
        let mut out = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = target[i].clone();
            for (j, c) in out.iter().enumerate().skip(i + 1) {
                acc -= c * Rational::from_integer(self.hnf.get(i, j).clone());
            }
            out[i] = acc / Rational::from_integer(self.hnf.get(i, i).clone());
        }
        Ok(out)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coordinates(x)
            .map(|c| c.iter().all(|q| q.is_integer()))
            .unwrap_or(false)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// `[sup : self]` for `self` contained in `sup`.
    pub fn index_in(&self, sup: &Lattice) -> Result<BigInt> {
        if !same_field(&self.field, &sup.field) {
            return Err(Error::FieldMismatch);
        }
        let cols = self
            .basis
            .iter()
            .map(|b| sup.coordinates(b))
            .collect::<Result<Vec<_>>>()?;
        if cols.iter().flatten().any(|q| !q.is_integer()) {
            return Err(Error::NotASublattice);
        }
        let det = RatMatrix::from_columns(&cols)?.det();
        Ok(det.to_integer().abs())
    }

    /// `alpha * L` for non-zero `alpha`.
    pub fn scaled(&self, alpha: &FieldElement) -> Result<Lattice> {
        if alpha.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let gens = self
            .basis
            .iter()
            .map(|b| alpha.try_mul(b))
            .collect::<Result<Vec<_>>>()?;
        Lattice::from_generators(&self.field, &gens)
    }

    /// The order `{alpha in F : alpha * L within L}`.
    ///
    /// Writing `alpha` in power-basis coordinates `x`, the condition is that
    /// the lattice coordinates of every `alpha * b_i` are integers, i.e.
    /// `A x` integral for a stacked rational matrix `A`. That solution set
    /// is the dual of the lattice spanned by the rows of `A`.
    pub fn multiplier_ring(&self) -> Result<Order> {
        let n = self.field.degree();
        let to_coords = self.hnf.to_rational().inverse()?.scale(&Rational::from_integer(self.denominator.clone()));
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n * n);
        for b in &self.basis {
            let a = &to_coords * &b.mult_matrix();
            rows.extend(a.rows());
        }
        let big_d = common_denominator(rows.iter().flatten());
        let cols: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|q| (q * &big_d).to_integer()).collect())
            .collect();
        let row_hnf = hnf_of_columns(n, &cols)?;
        // dual basis: columns of D * (H^T)^{-1}
        let dual = row_hnf
            .transpose()
            .to_rational()
            .inverse()?
            .scale(&Rational::from_integer(big_d));
        let gens = (0..n)
            .map(|j| self.field.element(dual.column(j)))
            .collect::<Result<Vec<_>>>()?;
        let lattice = Lattice::from_generators(&self.field, &gens)?;
        Order::new(lattice).map_err(|e| Error::Internal(format!("multiplier ring is not an order: {e}")))
    }
}

/// A subring of `F` that is a full-rank lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    lattice: Lattice,
}

impl Order {
    /// Checks that the lattice contains 1 and is closed under products of
    /// basis elements.
    pub fn new(lattice: Lattice) -> Result<Self> {
        let field = Arc::clone(lattice.field());
        if !lattice.contains(&field.one()) {
            return Err(Error::NotAnOrder("does not contain 1"));
        }
        for (i, a) in lattice.basis().iter().enumerate() {
            for b in &lattice.basis()[i..] {
                if !lattice.contains(&(a * b)) {
                    return Err(Error::NotAnOrder("not closed under multiplication"));
                }
            }
        }
        Ok(Order { lattice })
    }

    /// `Z[gamma]`, the order generated by the power basis.
    pub fn equation_order(field: &Arc<NumberField>) -> Result<Self> {
        let gens: Vec<FieldElement> = (0..field.degree())
            .map(|i| field.generator().pow(i as i64))
            .collect::<Result<_>>()?;
        Order::new(Lattice::from_generators(field, &gens)?)
    }

    /// Ring of integers of a quadratic field.
    pub fn maximal_quadratic(field: &Arc<NumberField>) -> Result<Self> {
        let omega = maximal_order_generator(field)?;
        Order::new(Lattice::from_generators(field, &[field.one(), omega])?)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.lattice.field()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.lattice.contains(x)
    }

    /// `u` and `1/u` both lie in the order.
    pub fn is_unit(&self, u: &FieldElement) -> bool {
        if u.is_zero() || !self.contains(u) {
            return false;
        }
        u.inv().map(|v| self.contains(&v)).unwrap_or(false)
    }
}

/// `omega` with `O_F = Z + Z omega` for a quadratic field.
fn maximal_order_generator(field: &Arc<NumberField>) -> Result<FieldElement> {
    if field.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            expected: 2,
            found: field.degree(),
        });
    }
    let c = field.defining_coeffs();
    let (q, p) = (&c[0], &c[1]);
    let disc = p * p - BigInt::from(4) * q;
    let (f, core) = squarefree_decomposition(&disc);
    // (2 gamma + p)^2 = disc, so delta = (2 gamma + p) / f squares to core
    let delta = field
        .element(vec![Rational::from_integer(p.clone()), Rational::from_integer(2.into())])?
        .scale(&Rational::new(BigInt::one(), f));
    if core.mod_floor(&BigInt::from(4)) == BigInt::one() {
        Ok((&field.one() + &delta).scale(&Rational::new(1.into(), 2.into())))
    } else {
        Ok(delta)
    }
}

/// The fundamental unit (> 1) of the multiplier ring of `Z + Z theta`, for
/// an irrational `theta` in a real quadratic field: the product of the
/// complete quotients over one period of the continued fraction of `theta`.
pub fn fundamental_unit_by_continued_fraction(theta: &FieldElement) -> Result<FieldElement> {
    let field = theta.field();
    if field.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            expected: 2,
            found: field.degree(),
        });
    }
    if theta.is_rational() {
        return Err(Error::NotFullRank);
    }
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut quotients: Vec<FieldElement> = Vec::new();
    let mut xi = theta.clone();
    for _ in 0..CF_STEP_CAP {
        let a = field.from_rational(Rational::from_integer(xi.floor_real()));
        xi = (&xi - &a).inv()?;
        if let Some(&start) = seen.get(xi.coords()) {
            let unit = quotients[start..]
                .iter()
                .fold(field.one(), |acc, q| &acc * q);
            return Ok(unit);
        }
        seen.insert(xi.coords().to_vec(), quotients.len());
        quotients.push(xi.clone());
    }
    Err(Error::Internal("continued fraction period not found".into()))
}

/// Fundamental unit `> 1` of an order in a real quadratic field: the
/// fundamental unit of the maximal order raised to the least power that
/// lands in `order`.
pub fn fundamental_unit_real_quadratic(order: &Order) -> Result<FieldElement> {
    let field = order.field();
    let max_gen = maximal_order_generator(field)?;
    let eps = fundamental_unit_by_continued_fraction(&max_gen)?;
    let mut power = eps.clone();
    for _ in 1..=POWER_SEARCH_CAP {
        if order.is_unit(&power) {
            return Ok(power);
        }
        power = &power * &eps;
    }
    Err(Error::Internal("no power of the fundamental unit lies in the order".into()))
}

/// The unique `(s, k)` with `u = s * eps^k`, `s = +1` or `-1`.
pub fn discrete_log_rank1(u: &FieldElement, eps: &FieldElement) -> Result<(i8, i64)> {
    if !same_field(u.field(), eps.field()) {
        return Err(Error::FieldMismatch);
    }
    if eps.cmp_real(&eps.field().one())? != Ordering::Greater {
        return Err(Error::NotInGroup);
    }
    if u.is_zero() || !u.norm().abs().is_one() {
        return Err(Error::NotInGroup);
    }
    let sign: i8 = if u.signum_real() == Ordering::Less { -1 } else { 1 };
    let abs = u.abs_real();
    let ratio = abs.ln_abs() / eps.ln_abs();
    if !ratio.is_finite() || ratio.abs() > i64::MAX as f64 / 2.0 {
        return Err(Error::NotInGroup);
    }
    let k = ratio.round() as i64;
    for candidate in [k, k - 1, k + 1] {
        if eps.pow(candidate)? == abs {
            return Ok((sign, candidate));
        }
    }
    Err(Error::NotInGroup)
}

/// Whether a unit group is known to be the full unit group of its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    /// Generators were checked to be units; nothing is claimed about
    /// whether they generate everything.
    VerifiedOnly,
}

/// `{+1, -1} x <generators>` inside the units of an order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    order: Order,
    generators: Vec<FieldElement>,
    completeness: Completeness,
}

impl UnitGroup {
    /// Unit group of `order`. Real quadratic orders are handled completely;
    /// for degree >= 3 the given candidates are verified and normalised to
    /// be `> 1`.
    pub fn of_order(order: &Order, candidates: Option<&[FieldElement]>) -> Result<Self> {
        let field = order.field();
        match field.degree() {
            1 => Ok(UnitGroup {
                order: order.clone(),
                generators: Vec::new(),
                completeness: Completeness::Complete,
            }),
            2 => Ok(UnitGroup {
                order: order.clone(),
                generators: vec![fundamental_unit_real_quadratic(order)?],
                completeness: Completeness::Complete,
            }),
            _ => Self::generated_by(order, candidates.unwrap_or(&[])),
        }
    }

    /// The group generated by `-1` and the given units of `order`, each
    /// normalised to be `> 1`. Nothing is claimed about completeness.
    pub fn generated_by(order: &Order, units: &[FieldElement]) -> Result<Self> {
        let field = order.field();
        let mut generators = Vec::new();
        for u in units {
            if !same_field(u.field(), field) {
                return Err(Error::FieldMismatch);
            }
            if !order.is_unit(u) {
                return Err(Error::NotAUnit);
            }
            let mut g = u.abs_real();
            if g.is_one() {
                return Err(Error::TorsionGenerator);
            }
            if g.cmp_real(&field.one())? == Ordering::Less {
                g = g.inv()?;
            }
            generators.push(g);
        }
        Ok(UnitGroup {
            order: order.clone(),
            generators,
            completeness: Completeness::VerifiedOnly,
        })
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    /// The generator of a rank-one group.
    pub fn generator(&self) -> Option<&FieldElement> {
        match self.generators.as_slice() {
            [g] => Some(g),
            _ => None,
        }
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    /// Membership for rank 0 and rank 1 groups; `None` when undecidable
    /// from the data held (rank >= 2).
    pub fn contains(&self, u: &FieldElement) -> Option<bool> {
        match self.generators.as_slice() {
            [] => Some(u.is_one() || (-u).is_one()),
            [g] => Some(discrete_log_rank1(u, g).is_ok()),
            _ => None,
        }
    }
}
