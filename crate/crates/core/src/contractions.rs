//! Weighted blowups extracting divisorial contractions to a germ.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed};

use crate::exactmath::{int, ExactError, Rational, WeightVector};
use crate::germs::{GermCase, GermSpec};
use crate::polyweights::{Monomial, SparsePoly, Weighting};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error("no contraction is enumerated for germ case {0}")]
    UnsupportedCase(GermCase),
    #[error("weight vector rejected by the lattice: {0}")]
    Lattice(#[from] ExactError),
    #[error("f is not homogeneous for the weights {0}")]
    NotHomogeneous(WeightVector),
    #[error("weights {found} differ from the fixed weights {expected}")]
    WrongFixedWeights { expected: WeightVector, found: WeightVector },
    #[error("w(tg) < w(f): {0}")]
    SemistabilityViolated(Box<Witness>),
    #[error("discrepancy {0} is not positive")]
    NonPositiveDiscrepancy(Rational),
    #[error("f + t*g is zero")]
    ZeroEquation,
}

/// A monomial of `t·g` whose weight is below `λ = w(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub monomial: Monomial,
    pub weight: Rational,
    pub lambda: Rational,
}

impl core::fmt::Display for Witness {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} has weight {} < {}", SparsePoly::monomial(self.monomial), self.weight, self.lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractionStatus {
    DivisorialContraction,
    /// The relative Picard number has not been asserted to be one.
    PendingRho,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionRecord {
    pub germ: GermSpec,
    pub w0: WeightVector,
    pub lambda: Rational,
    pub discrepancy: Rational,
    /// Weights `(a1, a2, a3, d)` of the ambient `P(a1, a2, a3, d)`.
    pub ambient: [u64; 4],
    /// The exceptional divisor in the coordinates `X, Y, Z, T`.
    pub e_equation: SparsePoly,
    pub semistable_ok: bool,
    pub contraction_status: ContractionStatus,
}

/// A candidate weight that failed one of the checks after the lattice filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub w0: WeightVector,
    pub reason: ContractionError,
}

/// Records sorted by `(λ, w0)` together with the rejected candidates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enumeration {
    pub records: Vec<ContractionRecord>,
    pub rejected: Vec<Rejection>,
}

/// All primitive `w0` in `Z^3 + Z·(1/n)(1,-1,a)` with `w(x) + w(y) = kn·w(z)`
/// and every entry at most `bound`, in lexicographic order.
pub fn admissible_weights_t(n: u64, a: i64, k: u32, bound: u64) -> Result<Vec<WeightVector>, ExactError> {
    let lattice = crate::exactmath::QuotientLattice::new(3, n, a)?;
    let a = lattice.a();
    let kn = k as u64 * n;
    let cap = n * bound;
    let mut out = Vec::new();
    // Write w0 = (1/n)(x1, x2, x3); membership means x ≡ j(1,-1,a) mod n.
    for x3 in 1..=cap {
        for x1 in 1..=cap {
            let Some(x2) = (kn * x3).checked_sub(x1).filter(|&x2| (1..=cap).contains(&x2)) else {
                continue;
            };
            if (x3 as i128 - a as i128 * x1 as i128).rem_euclid(n as i128) != 0 {
                continue;
            }
            let v = [x1, x2, x3].map(|x| Rational::new((x as i64).into(), (n as i64).into()));
            if lattice.is_primitive(&v)? {
                out.push(WeightVector::from_rationals(&v)?);
            }
        }
    }
    out.sort_by(WeightVector::cmp_entries);
    Ok(out)
}

/// The unique weights for the Du Val cases.
pub fn fixed_weights_de(case: GermCase) -> Result<WeightVector, ContractionError> {
    let entries = match case {
        GermCase::D { m } if m >= 4 => [m as u64 - 1, m as u64 - 2, 2],
        GermCase::E6 => [6, 4, 3],
        GermCase::E7 => [9, 6, 4],
        GermCase::E8 => [15, 10, 6],
        other => return Err(ContractionError::UnsupportedCase(other)),
    };
    Ok(WeightVector::integral(entries)?)
}

/// `λ = w(f)` after checking that `w0` is admissible for the germ.
pub fn check_admissible(germ: &GermSpec, w0: &WeightVector) -> Result<Rational, ContractionError> {
    match germ.case() {
        GermCase::NonNormal => return Err(ContractionError::UnsupportedCase(germ.case())),
        GermCase::T { .. } => {}
        case => {
            let expected = fixed_weights_de(case)?;
            if &expected != w0 {
                return Err(ContractionError::WrongFixedWeights { expected, found: w0.clone() });
            }
        }
    }
    w0.certify(&germ.weight_lattice())?;
    Weighting::blowup(w0)
        .homogeneous_weight(&germ.f())
        .ok()
        .flatten()
        .ok_or_else(|| ContractionError::NotHomogeneous(w0.clone()))
}

/// `a = Σ w0 + 1 - w(f + tg) - 1` for `w = (w0, 1)`.
pub fn discrepancy(germ: &GermSpec, w0: &WeightVector) -> Result<Rational, ContractionError> {
    check_admissible(germ, w0)?;
    let total = germ.total();
    let v = Weighting::blowup(w0).valuation(&total).map_err(|_| ContractionError::ZeroEquation)?;
    let a = w0.sum() + Rational::one() - v - Rational::one();
    if !a.is_positive() {
        return Err(ContractionError::NonPositiveDiscrepancy(a));
    }
    Ok(a)
}

fn semistability_witness(w: &Weighting, tg: &SparsePoly, lambda: &Rational) -> Option<(Monomial, Rational)> {
    tg.monomials()
        .map(|e| (*e, w.monomial_weight(e)))
        .filter(|(_, weight)| weight < lambda)
        .min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
}

pub fn build_contraction(germ: &GermSpec, w0: &WeightVector) -> Result<ContractionRecord, ContractionError> {
    let lambda = check_admissible(germ, w0)?;
    let w = Weighting::blowup(w0);
    if let Some((monomial, weight)) = semistability_witness(&w, &germ.tg(), &lambda) {
        return Err(ContractionError::SemistabilityViolated(Box::new(Witness { monomial, weight, lambda })));
    }
    let discrepancy = discrepancy(germ, w0)?;
    let [a1, a2, a3] = w0.entries();
    let e_equation = w.piece(&germ.total(), &lambda);
    Ok(ContractionRecord {
        germ: germ.clone(),
        w0: w0.clone(),
        lambda,
        discrepancy,
        ambient: [a1, a2, a3, w0.d()],
        e_equation,
        semistable_ok: true,
        contraction_status: if germ.rho_one() {
            ContractionStatus::DivisorialContraction
        } else {
            ContractionStatus::PendingRho
        },
    })
}

fn record_order(x: &ContractionRecord, y: &ContractionRecord) -> Ordering {
    x.lambda.cmp(&y.lambda).then_with(|| x.w0.cmp_entries(&y.w0))
}

/// Every contraction within the bound: the enumerated weights for case T,
/// the single fixed weight for the Du Val cases.
pub fn enumerate_contractions(germ: &GermSpec, bound: u64) -> Result<Enumeration, ContractionError> {
    let candidates = match germ.case() {
        GermCase::NonNormal => return Err(ContractionError::UnsupportedCase(germ.case())),
        GermCase::T { k } => admissible_weights_t(germ.n(), germ.a(), k, bound)?,
        case => {
            let w0 = fixed_weights_de(case)?;
            if bound == 0 {
                Vec::new()
            } else {
                alloc::vec![w0]
            }
        }
    };
    let mut out = Enumeration::default();
    for w0 in candidates {
        match build_contraction(germ, &w0) {
            Ok(record) => out.records.push(record),
            Err(reason) => out.rejected.push(Rejection { w0, reason }),
        }
    }
    out.records.sort_by(record_order);
    Ok(out)
}

impl ContractionRecord {
    /// The integer weighting `(a1, a2, a3, d)` of the ambient space.
    pub fn ambient_weighting(&self) -> Weighting {
        Weighting::integral(self.ambient)
    }

    /// Weight of `e_equation` under the integer ambient weighting.
    pub fn ambient_degree(&self) -> Rational {
        &self.lambda * int(self.w0.d() as i64)
    }
}
