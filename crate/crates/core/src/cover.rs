//! Numerical data of the index-one cover of a contraction.

use num_traits::{One, Signed, ToPrimitive};

use crate::contractions::ContractionRecord;
use crate::exactmath::{int, Rational};
use crate::polyweights::Weighting;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("denominator {d} of the discrepancy does not divide the index {n}")]
    DenominatorDoesNotDivideIndex { d: u64, n: u64 },
    #[error("d·w0 is not integral for d = {0}")]
    NonIntegralLift(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    /// Denominator of the discrepancy in lowest terms.
    pub d: u64,
    /// `n / d`.
    pub e: u64,
    /// `d·(w0, 1)` on `x, y, z, t`.
    pub lifted_weights: [u64; 4],
    /// `ã = a·d + d - 1`.
    pub covered_discrepancy: Rational,
}

pub fn cover_data(record: &ContractionRecord) -> Result<CoverData, CoverError> {
    let n = record.germ.n();
    let d = record.discrepancy.denom().to_u64().expect("discrepancy denominator fits u64");
    if !n.is_multiple_of(d) {
        return Err(CoverError::DenominatorDoesNotDivideIndex { d, n });
    }
    if !d.is_multiple_of(record.w0.d()) {
        return Err(CoverError::NonIntegralLift(d));
    }
    let scale = d / record.w0.d();
    let [a1, a2, a3] = record.w0.entries();
    let dd = int(d as i64);
    Ok(CoverData {
        d,
        e: n / d,
        lifted_weights: [a1 * scale, a2 * scale, a3 * scale, d],
        covered_discrepancy: &record.discrepancy * &dd + &dd - Rational::one(),
    })
}

/// Recomputes `ã` on the cover hypersurface (same equation, integer weights)
/// and compares it with `a·d + d - 1`.
pub fn verify_cover(record: &ContractionRecord) -> bool {
    let Ok(cover) = cover_data(record) else {
        return false;
    };
    let lifted = Weighting::integral(cover.lifted_weights);
    let Ok(v) = lifted.valuation(&record.germ.total()) else {
        return false;
    };
    let sum: u64 = cover.lifted_weights.iter().sum();
    let direct = int(sum as i64) - v - Rational::one();
    direct == cover.covered_discrepancy && direct.is_integer() && direct.is_positive()
}
