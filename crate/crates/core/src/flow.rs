//! Algebraic quasiperiodic flows on `T^n` and their generalized symmetries.
//!
//! A flow is given by its constant frequency vector `omega`, whose
//! components form a Q-basis of the field. A linear torus map `x -> Bx + c`
//! pushes the generating vector field to `alpha` times itself exactly when
//! `B omega = alpha omega` (column convention), so symmetries correspond to
//! unimodular integer matrices having `omega` as an eigenvector.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{same_field, FieldElement, NumberField};
use crate::lattice::{Completeness, Lattice, Order, UnitGroup};
use crate::linalg::{common_denominator, IntMatrix, RatMatrix, Rational};

/// Largest dimension accepted by [`TorusFlowSpec::enumerate_symmetries_bounded`].
pub const ENUMERATION_MAX_DIM: usize = 3;
/// Largest entry bound accepted by [`TorusFlowSpec::enumerate_symmetries_bounded`].
pub const ENUMERATION_MAX_BOUND: u32 = 30;

/// Constant-frequency flow `x -> x + t omega` on `T^n` with algebraic
/// frequencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFlowSpec {
    field: Arc<NumberField>,
    omega: Vec<FieldElement>,
    /// Optional real scale factor carried as metadata only.
    scale: Option<Rational>,
}

/// A generalized symmetry `x -> Bx + c` with `B omega = alpha omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub matrix: IntMatrix,
    pub multiplier: FieldElement,
    pub translation: Option<Vec<Rational>>,
}

impl Symmetry {
    pub fn with_translation(mut self, c: Vec<Rational>) -> Self {
        self.translation = Some(c);
        self
    }
}

/// Answer to "does the flow have a multiplier other than +1, -1?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NontrivialMultiplier {
    Yes(FieldElement),
    No,
    /// Only a verified (possibly incomplete) unit group is available.
    Unknown,
}

impl TorusFlowSpec {
    pub fn new(field: &Arc<NumberField>, omega: Vec<FieldElement>, scale: Option<Rational>) -> Result<Self> {
        let n = field.degree();
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        if omega.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: omega.len(),
            });
        }
        if omega.iter().any(|w| !same_field(w.field(), field)) {
            return Err(Error::FieldMismatch);
        }
        let cols: Vec<Vec<Rational>> = omega.iter().map(|w| w.coords().to_vec()).collect();
        if RatMatrix::from_columns(&cols)?.det().is_zero() {
            return Err(Error::NotABasis);
        }
        Ok(TorusFlowSpec {
            field: Arc::clone(field),
            omega,
            scale,
        })
    }

    /// Flow with integer frequency coordinates (convenience).
    pub fn from_int_coords(field: &Arc<NumberField>, omega: &[&[i64]]) -> Result<Self> {
        let omega = omega
            .iter()
            .map(|w| {
                field.element(w.iter().map(|&c| Rational::from_integer(c.into())).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, omega, None)
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn omega(&self) -> &[FieldElement] {
        &self.omega
    }

    pub fn scale(&self) -> Option<&Rational> {
        self.scale.as_ref()
    }

    /// Same flow with all frequencies multiplied by a non-zero rational.
    pub fn scaled(&self, q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.field, self.omega.iter().map(|w| w.scale(q)).collect(), self.scale.clone())
    }

    /// `B omega`, componentwise in the field.
    pub fn apply(&self, b: &IntMatrix) -> Result<Vec<FieldElement>> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: b.dim(),
            });
        }
        Ok((0..b.dim())
            .map(|i| {
                b.row(i).iter().zip(&self.omega).fold(self.field.zero(), |acc, (bij, w)| {
                    &acc + &w.scale(&Rational::from_integer(bij.clone()))
                })
            })
            .collect())
    }

    /// Z-span of the frequencies.
    pub fn frequency_lattice(&self) -> Result<Lattice> {
        Lattice::from_generators(&self.field, &self.omega)
    }

    /// Symmetry induced by `B`, if `B omega = alpha omega` and `B` is unimodular.
    pub fn symmetry_from_matrix(&self, b: &IntMatrix) -> Result<Symmetry> {
        let image = self.apply(b)?;
        let alpha = image[0].try_div(&self.omega[0])?;
        let holds = image
            .iter()
            .zip(&self.omega)
            .skip(1)
            .all(|(bw, w)| *bw == &alpha * w);
        if !holds {
            return Err(Error::NotASymmetry("eigen-relation fails"));
        }
        if !b.is_unimodular() {
            return Err(Error::NotASymmetry("non-unimodular"));
        }
        Ok(Symmetry {
            matrix: b.clone(),
            multiplier: alpha,
            translation: None,
        })
    }

    /// The unique rational matrix `M` with `M omega = alpha omega`.
    pub fn multiplier_matrix(&self, alpha: &FieldElement) -> Result<RatMatrix> {
        if !same_field(alpha.field(), &self.field) {
            return Err(Error::FieldMismatch);
        }
        // coordinates: A_alpha W = W M^T with W = [omega_0 | ... | omega_{n-1}]
        let cols: Vec<Vec<Rational>> = self.omega.iter().map(|w| w.coords().to_vec()).collect();
        let w = RatMatrix::from_columns(&cols)?;
        let m_t = &(&w.inverse()? * &alpha.mult_matrix()) * &w;
        Ok(m_t.transpose())
    }

    /// Integer matrix realizing multiplication by `alpha`, or
    /// `NotRealizable` carrying the rational matrix.
    pub fn matrix_from_multiplier(&self, alpha: &FieldElement) -> Result<IntMatrix> {
        if alpha.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.multiplier_matrix(alpha)?;
        m.to_integer().ok_or(Error::NotRealizable(m))
    }

    /// `{alpha : alpha Lambda within Lambda}` for the frequency lattice.
    pub fn multiplier_ring(&self) -> Result<Order> {
        self.frequency_lattice()?.multiplier_ring()
    }

    /// The multiplier group: units of the multiplier ring of the frequency
    /// lattice. Complete in degree 2; for higher degree the candidates are
    /// verified only.
    pub fn multiplier_group(&self, candidates: Option<&[FieldElement]>) -> Result<UnitGroup> {
        UnitGroup::of_order(&self.multiplier_ring()?, candidates)
    }

    pub fn has_nontrivial_multiplier(&self, candidates: Option<&[FieldElement]>) -> Result<NontrivialMultiplier> {
        let group = self.multiplier_group(candidates)?;
        Ok(match (group.generators().first(), group.completeness()) {
            (Some(g), _) => NontrivialMultiplier::Yes(g.clone()),
            (None, Completeness::Complete) => NontrivialMultiplier::No,
            (None, Completeness::VerifiedOnly) => NontrivialMultiplier::Unknown,
        })
    }

    /// Every unimodular `B` with entries in `[-bound, bound]` satisfying the
    /// eigen-relation, in row-major lexicographic order.
    ///
    /// Brute force over integer rows. Rows `r_0, r_i` are compatible when
    /// `(r_i . omega) omega_0 = (r_0 . omega) omega_i`; both sides are integer
    /// linear in the row once denominators are cleared, so row 0 determines
    /// every other row by table lookup.
    pub fn enumerate_symmetries_bounded(&self, bound: u32) -> Result<Vec<Symmetry>> {
        let n = self.dim();
        if n > ENUMERATION_MAX_DIM || bound > ENUMERATION_MAX_BOUND {
            return Err(Error::BoundTooLarge);
        }
        let products: Vec<Vec<FieldElement>> = self
            .omega
            .iter()
            .map(|wj| self.omega.iter().map(|wi| wj * wi).collect())
            .collect();
        let den = common_denominator(products.iter().flatten().flat_map(|p| p.coords()));
        let scaled: Vec<Vec<Vec<BigInt>>> = products
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.coords().iter().map(|c| (c * &den).to_integer()).collect())
                    .collect()
            })
            .collect();
        let key = |r: &[i64], i: usize| -> Vec<BigInt> {
            (0..n)
                .map(|c| r.iter().enumerate().map(|(j, &x)| &scaled[j][i][c] * x).sum())
                .collect()
        };
        let rows = box_rows(n, bound as i64);
        let table: HashMap<Vec<BigInt>, usize> = rows.iter().enumerate().map(|(idx, r)| (key(r, 0), idx)).collect();
        let mut out = Vec::new();
        for (idx0, r0) in rows.iter().enumerate() {
            let mut chosen = vec![idx0];
            for i in 1..n {
                match table.get(&key(r0, i)) {
                    Some(&j) => chosen.push(j),
                    None => break,
                }
            }
            if chosen.len() != n {
                continue;
            }
            let b = IntMatrix::from_fn(n, |i, j| BigInt::from(rows[chosen[i]][j]));
            if b.is_unimodular() {
                out.push(Symmetry {
                    matrix: b,
                    multiplier: self.row_value(r0).try_div(&self.omega[0])?,
                    translation: None,
                });
            }
        }
        Ok(out)
    }

    fn row_value(&self, row: &[i64]) -> FieldElement {
        row.iter().zip(&self.omega).fold(self.field.zero(), |acc, (&c, w)| {
            &acc + &w.scale(&Rational::from_integer(c.into()))
        })
    }
}

/// All integer vectors of length `n` with entries in `[-bound, bound]`, in
/// lexicographic order.
fn box_rows(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-bound..=bound).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}
