//! Singularities of the blown-up family along the exceptional divisor, for
//! case-T contractions with `g` in reduced form.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::contractions::ContractionRecord;
use crate::exactmath::{gcd_u64, mod_floor, mod_inverse, Rational};
use crate::germs::GermCase;
use crate::polyweights::{squarefree_multiplicities, Monomial, SparsePoly, T, X, Y, Z};
use crate::resolution::DuValType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CensusError {
    #[error("census is only available for case T, got {0}")]
    UnsupportedCase(GermCase),
    #[error("t*g has monomial {} outside the reduced form z^(in) t^(>=(k-i)e*a3)", SparsePoly::monomial(*.0))]
    UnsupportedForm(Monomial),
    #[error("corner quotient ({num})/{d} is not integral")]
    FractionalCorner { num: i64, d: u64 },
}

/// Coefficients of `t·g = Σ b_i(t) z^{in} t^{(k-i)e·a3}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedG {
    /// `c_i = b_i(0)` for `0 <= i < k`.
    pub c: Vec<Rational>,
    /// Least `i` with `b_i != 0` as a (truncated) series; `None` when `g = 0`.
    pub l_series: Option<u32>,
    /// Least `i` with `c_i != 0`, or `k` when every `c_i` vanishes.
    pub l_fibre: u32,
}

impl ReducedG {
    /// The two readings of `l` disagree (some `b_l` vanishes at `t = 0`).
    pub fn divergent(&self) -> bool {
        self.l_series != Some(self.l_fibre)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorPoint {
    /// Multiplicity of the root; the point is of type `A_{l-1}`.
    pub l: u32,
    /// Number of such points over the algebraic closure.
    pub count: u64,
    /// Degree over `Q` of the squarefree factor carrying these roots.
    pub factor_degree: u64,
}

impl InteriorPoint {
    pub fn kind(&self) -> DuValType {
        DuValType::A(self.l - 1)
    }
}

/// `(xy + z^{k'n'} = 0) ⊂ 1/n'(1,-1,a')` at the origin of the `T`-chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginGerm {
    pub k: u64,
    pub n: u64,
    pub a: u64,
}

impl OriginGerm {
    /// Cyclic quotient type `1/(k n^2)(1, k n a - 1)` of the surface germ.
    pub fn fibre_quotient(&self) -> (u64, u64) {
        let r = self.k * self.n * self.n;
        let q = if r == 1 { 0 } else { mod_floor((self.k * self.n * self.a) as i64 - 1, r) };
        (r, q)
    }
}

impl fmt::Display for OriginGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(xy + z^{} = 0) in 1/{}(1,-1,{})", self.k * self.n, self.n, self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CornerPoint {
    /// `(1:0:0:0)`
    X,
    /// `(0:1:0:0)`
    Y,
}

/// `(xy = 0) ⊂ 1/r(1,-1,c)`; smooth when `r = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub point: CornerPoint,
    pub r: u64,
    pub c: u64,
}

impl Corner {
    pub fn is_smooth(&self) -> bool {
        self.r == 1
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            f.write_str("smooth")
        } else {
            write!(f, "(xy = 0) in 1/{}(1,-1,{})", self.r, self.c)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityCensus {
    pub reduced: ReducedG,
    /// `h(z) = z^{kn} ± Σ c_i z^{in}`, the restriction to `x = y = 0` of the
    /// `T = 1` chart of `E`, with the sign fixed to make it monic.
    pub h: SparsePoly,
    pub interior: Vec<InteriorPoint>,
    pub origin: Option<OriginGerm>,
    pub corners: [Corner; 2],
}

struct Shape {
    k: u32,
    n: u32,
    e: u64,
    a3: u64,
}

fn shape(record: &ContractionRecord) -> Result<Shape, CensusError> {
    let GermCase::T { k } = record.germ.case() else {
        return Err(CensusError::UnsupportedCase(record.germ.case()));
    };
    let n = record.germ.n();
    Ok(Shape { k, n: n as u32, e: n / record.w0.d(), a3: record.w0.entries()[2] })
}

pub fn reduced_g_coefficients(record: &ContractionRecord) -> Result<ReducedG, CensusError> {
    let Shape { k, n, e, a3 } = shape(record)?;
    let mut c = alloc::vec![Rational::zero(); k as usize];
    let mut l_series: Option<u32> = None;
    for (exp, coeff) in record.germ.tg().terms() {
        let bad = || CensusError::UnsupportedForm(*exp);
        if exp[X] != 0 || exp[Y] != 0 || exp[Z] % n != 0 {
            return Err(bad());
        }
        let i = exp[Z] / n;
        if i >= k {
            return Err(bad());
        }
        let base = (k - i) as u64 * e * a3;
        let s = (exp[T] as u64).checked_sub(base).ok_or_else(bad)?;
        if s == 0 {
            c[i as usize] = coeff.clone();
        }
        l_series = Some(l_series.map_or(i, |l| l.min(i)));
    }
    let l_fibre = c.iter().position(|ci| !ci.is_zero()).map_or(k, |i| i as u32);
    Ok(ReducedG { c, l_series, l_fibre })
}

fn restriction(record: &ContractionRecord, reduced: &ReducedG) -> SparsePoly {
    let (k, n) = (reduced.c.len() as u32, record.germ.n() as u32);
    let s = Rational::from_integer(record.germ.sign().as_int().into());
    let mut h = SparsePoly::monomial([0, 0, k * n, 0]);
    for (i, ci) in reduced.c.iter().enumerate() {
        h.add_term([0, 0, i as u32 * n, 0], &s * ci);
    }
    h
}

/// Multiple roots of `h` away from the origin of a quotient chart.
pub fn interior_census(record: &ContractionRecord) -> Result<Vec<InteriorPoint>, CensusError> {
    let reduced = reduced_g_coefficients(record)?;
    Ok(interior_from(record, &reduced))
}

fn interior_from(record: &ContractionRecord, reduced: &ReducedG) -> Vec<InteriorPoint> {
    let d = record.w0.d();
    let mut h = restriction(record, reduced);
    if d > 1 {
        // z = 0 is the quotient point, handled by the origin entry; the
        // remaining roots come in free μ_d-orbits.
        let low = h.monomials().map(|e| e[Z]).min().unwrap_or(0);
        h = SparsePoly::from_terms(h.terms().map(|(e, c)| ([0, 0, e[Z] - low, 0], c.clone())));
    }
    squarefree_multiplicities(&h)
        .expect("h is univariate in z")
        .into_iter()
        .filter(|&(_, l)| l >= 2)
        .map(|(deg, l)| InteriorPoint { l: l as u32, count: deg as u64 / d, factor_degree: deg as u64 })
        .collect()
}

/// The quotient point at the origin of the `T = 1` chart when `d > 1`.
pub fn origin_singularity(record: &ContractionRecord) -> Result<Option<OriginGerm>, CensusError> {
    let reduced = reduced_g_coefficients(record)?;
    Ok(origin_from(record, &reduced))
}

fn origin_from(record: &ContractionRecord, reduced: &ReducedG) -> Option<OriginGerm> {
    let d = record.w0.d();
    if d == 1 || reduced.l_fibre == 0 {
        return None;
    }
    let [a1, _, a3] = record.w0.entries();
    let inv = mod_inverse(a1 as i64, d).expect("a1 is a unit mod d");
    let b = inv * (a3 % d) % d;
    let e = record.germ.n() / d;
    Some(OriginGerm { k: reduced.l_fibre as u64 * e, n: d, a: b })
}

/// The two quotient points `(1:0:0:0)` and `(0:1:0:0)` of `E`.
pub fn corner_singularities(record: &ContractionRecord) -> Result<[Corner; 2], CensusError> {
    let Shape { e, .. } = shape(record)?;
    let d = record.w0.d();
    let a = record.germ.a();
    let [a1, a2, a3] = record.w0.entries().map(|x| x as i64);
    let corner = |point, ai: i64, num: i64| -> Result<Corner, CensusError> {
        if num.rem_euclid(d as i64) != 0 {
            return Err(CensusError::FractionalCorner { num, d });
        }
        let r = e * ai as u64;
        Ok(Corner { point, r, c: mod_floor(num / d as i64, r) })
    };
    Ok([corner(CornerPoint::X, a1, a3 - a * a1)?, corner(CornerPoint::Y, a2, a * a2 + a3)?])
}

pub fn census(record: &ContractionRecord) -> Result<SingularityCensus, CensusError> {
    let reduced = reduced_g_coefficients(record)?;
    let corners = corner_singularities(record)?;
    Ok(SingularityCensus {
        h: restriction(record, &reduced),
        interior: interior_from(record, &reduced),
        origin: origin_from(record, &reduced),
        corners,
        reduced,
    })
}

impl SingularityCensus {
    /// Degree of `h` in `z`.
    pub fn h_degree(&self) -> u64 {
        self.h.degree_in(Z).unwrap_or(0) as u64
    }

    /// `gcd(c, r) = 1` at every singular corner.
    pub fn corners_well_formed(&self) -> bool {
        self.corners.iter().all(|c| c.is_smooth() || gcd_u64(c.c, c.r) == 1)
    }

    pub fn point_count(&self) -> u64 {
        self.interior.iter().map(|p| p.count).sum::<u64>() + self.origin.is_some() as u64
    }
}

/// Evaluates `h` at `z = z0`.
pub fn h_value(h: &SparsePoly, z0: &Rational) -> Rational {
    h.terms()
        .map(|(e, c)| c * num_traits::pow(z0.clone(), e[Z].to_usize().unwrap_or(0)))
        .sum()
}
