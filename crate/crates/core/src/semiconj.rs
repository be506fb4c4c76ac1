//! Semiconjugacies `V(x) = B_V x + c_V` between torus flows, and the
//! transport of symmetries and multiplier groups along them.
//!
//! If `B_V omega_phi = omega_psi` then `V` carries orbits of `phi` onto
//! orbits of `psi` and is a `|det B_V|`-to-one covering. A symmetry `R` of
//! `phi` descends to `psi` after taking a power `R^k` for which
//! `B_V B_R^k B_V^{-1}` is integral. A symmetry `Q` of `psi` lifts to
//! `B_V^{-1} B_Q B_V` only when that matrix is integral, which holds when
//! `B_Q` preserves the sublattice `B_V Z^n` but not in general: for
//! `omega_phi = (1, 2 sqrt 3)` and `B_V = diag(2, 1)` the multiplier
//! `2 + sqrt 3` of `psi` is not a multiplier of `phi`. So `M_psi` and `M_phi`
//! are commensurable, and `M_psi` need not lie inside `M_phi`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::flow::{Symmetry, TorusFlowSpec};
use crate::lattice::{discrete_log_rank1, Completeness, UnitGroup};
use crate::linalg::{IntMatrix, RatMatrix, Rational};

/// A surjective torus map with integer linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiconjugacyMap {
    matrix: IntMatrix,
    translation: Option<Vec<Rational>>,
}

impl SemiconjugacyMap {
    pub fn new(matrix: IntMatrix, translation: Option<Vec<Rational>>) -> Result<Self> {
        if matrix.det().is_zero() {
            return Err(Error::NotSurjective);
        }
        if let Some(c) = &translation {
            if c.len() != matrix.dim() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.dim(),
                    found: c.len(),
                });
            }
        }
        Ok(SemiconjugacyMap { matrix, translation })
    }

    pub fn linear(matrix: IntMatrix) -> Result<Self> {
        Self::new(matrix, None)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> Option<&[Rational]> {
        self.translation.as_deref()
    }

    /// Number of preimages of each point, `|det B|`.
    pub fn covering_degree(&self) -> BigInt {
        self.matrix.det().abs()
    }

    /// `self o other`.
    pub fn compose(&self, other: &SemiconjugacyMap) -> Result<SemiconjugacyMap> {
        if self.matrix.dim() != other.matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim(),
                found: other.matrix.dim(),
            });
        }
        let translation = match (&self.translation, &other.translation) {
            (None, None) => None,
            (c1, c2) => {
                let n = self.matrix.dim();
                let c1 = c1.clone().unwrap_or_else(|| vec![Rational::zero(); n]);
                let c2 = c2.clone().unwrap_or_else(|| vec![Rational::zero(); n]);
                let moved = self.matrix.to_rational().mul_vec(&c2);
                Some(moved.iter().zip(&c1).map(|(a, b)| a + b).collect())
            }
        };
        SemiconjugacyMap::new(&self.matrix * &other.matrix, translation)
    }
}

/// Image flow of a push-forward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushResult {
    pub target: TorusFlowSpec,
    pub covering_degree: BigInt,
    /// The image frequencies again form a basis of the field.
    pub algebraic: bool,
}

/// Outcome of pushing a symmetry through a semiconjugacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerPush {
    /// Least `k >= 1` with `B_V B_R^k B_V^{-1}` integral.
    pub k: u64,
    pub symmetry: Symmetry,
    /// `C_j = B_V B_R^j B_V^{-1}` for `1 <= j < k`, each non-integral.
    pub rejected: Vec<RatMatrix>,
    /// Upper bound on `k`: the order of `B_R` modulo `|det B_V|`.
    pub bound: u64,
}

/// Flow `psi` with `omega_psi = B_V omega_phi`.
pub fn push_flow(v: &SemiconjugacyMap, phi: &TorusFlowSpec) -> Result<PushResult> {
    let omega = phi.apply(v.matrix())?;
    let target = TorusFlowSpec::new(phi.field(), omega, phi.scale().cloned())
        .map_err(|e| Error::Internal(format!("image of an algebraic flow is not algebraic: {e}")))?;
    Ok(PushResult {
        target,
        covering_degree: v.covering_degree(),
        algebraic: true,
    })
}

/// `B_V omega_phi = omega_psi`, exactly.
pub fn verify_semiconjugacy(v: &SemiconjugacyMap, phi: &TorusFlowSpec, psi: &TorusFlowSpec) -> bool {
    if phi.field() != psi.field() || phi.dim() != psi.dim() {
        return false;
    }
    match phi.apply(v.matrix()) {
        Ok(image) => image.as_slice() == psi.omega(),
        Err(_) => false,
    }
}

fn check_symmetry(flow: &TorusFlowSpec, s: &Symmetry) -> Result<()> {
    let found = flow.symmetry_from_matrix(&s.matrix)?;
    if found.multiplier != s.multiplier {
        return Err(Error::NotASymmetry("multiplier does not match the matrix"));
    }
    Ok(())
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Lift a symmetry `Q` of `psi = V(phi)` to the symmetry `R` of `phi` with
/// `Q o V = V o R`. Fails with [`Error::NotLiftable`] when
/// `B_V^{-1} B_Q B_V` is not integral.
pub fn lift_symmetry(v: &SemiconjugacyMap, phi: &TorusFlowSpec, q: &Symmetry) -> Result<Symmetry> {
    let psi = push_flow(v, phi)?.target;
    check_symmetry(&psi, q)?;
    let bv = v.matrix().to_rational();
    let bv_inv = bv.inverse()?;
    let bq = q.matrix.to_rational();
    let conj = &(&bv_inv * &bq) * &bv;
    let br = conj.to_integer().ok_or(Error::NotLiftable(conj))?;
    if !br.is_unimodular() {
        return Err(Error::Internal("lifted matrix is not unimodular".into()));
    }
    if &q.matrix * v.matrix() != v.matrix() * &br {
        return Err(Error::Internal("Q V = V R fails".into()));
    }
    let lifted = phi.symmetry_from_matrix(&br)?;
    if lifted.multiplier != q.multiplier {
        return Err(Error::Internal("lifted multiplier differs".into()));
    }
    // B_Q c_V + c_Q = B_V c_R + c_V
    let translation = match (v.translation(), &q.translation) {
        (None, None) => None,
        (cv, cq) => {
            let n = phi.dim();
            let cv = cv.map(<[Rational]>::to_vec).unwrap_or_else(|| zeros(n));
            let cq = cq.clone().unwrap_or_else(|| zeros(n));
            let rhs = sub_vec(&add_vec(&bq.mul_vec(&cv), &cq), &cv);
            Some(bv_inv.mul_vec(&rhs))
        }
    };
    Ok(Symmetry {
        matrix: br,
        multiplier: lifted.multiplier,
        translation,
    })
}

/// Push a symmetry `R` of `phi` down to `psi = V(phi)`: the least `k` with
/// `Q V = V R^k` for an integral `Q`, and that `Q` (multiplier `alpha^k`).
///
/// Integrality of `B_V B_R^k adj(B_V) / d`, `d = |det B_V|`, depends only on
/// `B_R^k mod d`, so `k` never exceeds the order of `B_R` modulo `d`.
pub fn push_symmetry_power(v: &SemiconjugacyMap, phi: &TorusFlowSpec, r: &Symmetry) -> Result<PowerPush> {
    check_symmetry(phi, r)?;
    let psi = push_flow(v, phi)?.target;
    let bv = v.matrix();
    let det = bv.det();
    let d = det.abs();
    let adj = bv.adjugate();
    let bound = r.matrix.order_mod(&d)?;
    let mut rejected = Vec::new();
    let mut power = r.matrix.clone();
    for k in 1..=bound {
        let scaled = &(bv * &power) * &adj;
        if scaled.entries().all(|x| x.is_multiple_of(&det)) {
            let bq = IntMatrix::from_fn(scaled.dim(), |i, j| scaled.get(i, j) / &det);
            let alpha_k = r.multiplier.pow(k as i64)?;
            let q = psi.symmetry_from_matrix(&bq)?;
            if q.multiplier != alpha_k {
                return Err(Error::Internal("pushed multiplier is not alpha^k".into()));
            }
            let translation = pushed_translation(v, r, &bq, k, phi.dim());
            return Ok(PowerPush {
                k,
                symmetry: Symmetry {
                    matrix: bq,
                    multiplier: alpha_k,
                    translation,
                },
                rejected,
                bound,
            });
        }
        rejected.push(scaled.to_rational().scale(&Rational::new(1.into(), det.clone())));
        power = &power * &r.matrix;
    }
    Err(Error::Internal(format!("no integral conjugate power up to k = {bound}")))
}

/// `c_Q = B_V c_{R^k} + c_V - B_Q c_V` with `c_{R^k} = sum_{i<k} B_R^i c_R`.
fn pushed_translation(
    v: &SemiconjugacyMap,
    r: &Symmetry,
    bq: &IntMatrix,
    k: u64,
    n: usize,
) -> Option<Vec<Rational>> {
    if v.translation().is_none() && r.translation.is_none() {
        return None;
    }
    let cv = v.translation().map(<[Rational]>::to_vec).unwrap_or_else(|| zeros(n));
    let cr = r.translation.clone().unwrap_or_else(|| zeros(n));
    let br = r.matrix.to_rational();
    let mut c_rk = zeros(n);
    let mut term = cr;
    for _ in 0..k {
        c_rk = add_vec(&c_rk, &term);
        term = br.mul_vec(&term);
    }
    let bv = v.matrix().to_rational();
    Some(sub_vec(
        &add_vec(&bv.mul_vec(&c_rk), &cv),
        &bq.to_rational().mul_vec(&cv),
    ))
}

/// `[G : H]` for rank-one unit groups over the same field, `H` inside `G`.
pub fn subgroup_index_rank1(g: &UnitGroup, h: &UnitGroup) -> Result<BigInt> {
    let gg = g.generator().ok_or(Error::UnsupportedRank(g.rank()))?;
    let hg = h.generator().ok_or(Error::UnsupportedRank(h.rank()))?;
    match discrete_log_rank1(hg, gg) {
        Ok((_, 0)) => Err(Error::NotASubgroup),
        Ok((_, k)) => Ok(BigInt::from(k).abs()),
        Err(Error::NotInGroup) => Err(Error::NotASubgroup),
        Err(e) => Err(e),
    }
}

/// `[G : H]` for free parts given by exponent vectors: row `i` holds the
/// exponents of the `i`-th generator of `H` in terms of the generators of
/// `G` (torsion `{+1, -1}` shared).
pub fn subgroup_index_from_exponents(exponents: &IntMatrix) -> Result<BigInt> {
    let det = exponents.det();
    if det.is_zero() {
        return Err(Error::NotASubgroup);
    }
    Ok(det.abs())
}

/// One generator of the image flow's multiplier group, checked against the
/// source flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentWitness {
    pub multiplier: FieldElement,
    /// Unimodular matrix realizing the multiplier on the source flow, or
    /// `None` when it is not a multiplier of the source.
    pub matrix_on_source: Option<IntMatrix>,
    /// `(sign, exponent)` in terms of the source generator (rank one only).
    pub exponent: Option<(i8, i64)>,
}

/// Everything the pipeline derives from a flow and a semiconjugacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub phi: TorusFlowSpec,
    pub map: SemiconjugacyMap,
    pub psi: TorusFlowSpec,
    pub covering_degree: BigInt,
    pub m_phi: UnitGroup,
    pub m_psi: UnitGroup,
    pub containment: Vec<ContainmentWitness>,
    /// Every generator of `M_psi` lies in `M_phi`.
    pub contained: bool,
    /// `[M_phi : M_psi]`, when both groups have rank one and `M_psi` lies
    /// in `M_phi`.
    pub index: Option<BigInt>,
    /// `([M_phi : I], [M_psi : I])` with `I` the intersection, rank one only.
    pub intersection_indices: Option<(BigInt, BigInt)>,
    pub completeness: Completeness,
}

/// Push `phi` along `v`, compute both multiplier groups, check which
/// generators of `M_psi` lie in `M_phi`, and compute the indices.
pub fn full_pipeline(
    phi: &TorusFlowSpec,
    v: &SemiconjugacyMap,
    candidates_phi: Option<&[FieldElement]>,
    candidates_psi: Option<&[FieldElement]>,
) -> Result<PipelineReport> {
    let pushed = push_flow(v, phi)?;
    let psi = pushed.target;
    let m_phi = phi.multiplier_group(candidates_phi)?;
    let m_psi = psi.multiplier_group(candidates_psi)?;
    let mut containment = Vec::new();
    for g in m_psi.generators() {
        let matrix = match phi.matrix_from_multiplier(g) {
            Ok(m) if m.is_unimodular() => Some(m),
            Ok(_) => return Err(Error::Internal("unit realized by a non-unimodular matrix".into())),
            Err(Error::NotRealizable(_)) => None,
            Err(e) => return Err(e),
        };
        let exponent = match (&matrix, m_phi.generator()) {
            (Some(_), Some(eps)) => Some(discrete_log_rank1(g, eps)?),
            _ => None,
        };
        containment.push(ContainmentWitness {
            multiplier: g.clone(),
            matrix_on_source: matrix,
            exponent,
        });
    }
    let contained = containment.iter().all(|w| w.matrix_on_source.is_some());
    let intersection_indices = match (m_phi.generator(), m_psi.generator()) {
        (Some(a), Some(b)) => {
            // the least power of a that descends generates the intersection
            let r = phi.symmetry_from_matrix(&phi.matrix_from_multiplier(a)?)?;
            let k = push_symmetry_power(v, phi, &r)?.k;
            let (_, j) = discrete_log_rank1(&a.pow(k as i64)?, b)?;
            Some((BigInt::from(k), BigInt::from(j).abs()))
        }
        _ => None,
    };
    let index = match (&intersection_indices, contained) {
        (Some((k, j)), true) if j.is_one() => Some(k.clone()),
        (Some(_), true) => return Err(Error::Internal("contained group with proper intersection".into())),
        _ => None,
    };
    let completeness = if m_phi.completeness() == Completeness::Complete && m_psi.completeness() == Completeness::Complete {
        Completeness::Complete
    } else {
        Completeness::VerifiedOnly
    };
    Ok(PipelineReport {
        phi: phi.clone(),
        map: v.clone(),
        psi,
        covering_degree: pushed.covering_degree,
        m_phi,
        m_psi,
        containment,
        contained,
        index,
        intersection_indices,
        completeness,
    })
}
