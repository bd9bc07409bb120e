//! Sparse polynomials in `x, y, z, t` over the rationals, weighted
//! valuations and graded pieces.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactmath::{int, QuotientLattice, Rational, WeightVector};

/// Exponents of `x^i y^j z^k t^l`.
pub type Monomial = [u32; 4];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const T: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("the zero polynomial has infinite valuation")]
    InfiniteValuation,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
}

/// A polynomial stored as a map from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, [0; 4])
    }

    pub fn term(coeff: Rational, exp: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// The monomial with coefficient 1.
    pub fn monomial(exp: Monomial) -> Self {
        Self::term(Rational::one(), exp)
    }

    pub fn var(index: usize) -> Self {
        let mut exp = [0; 4];
        exp[index] = 1;
        Self::monomial(exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (exp, c) in terms {
            p.add_term(exp, c);
        }
        p
    }

    /// Convenience for integer coefficients.
    pub fn from_int_terms(terms: &[(i64, Monomial)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, e)| (e, int(c))))
    }

    pub fn add_term(&mut self, exp: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &Monomial) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn mul_monomial(&self, exp: Monomial) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| ([e[0] + exp[0], e[1] + exp[1], e[2] + exp[2], e[3] + exp[3]], v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Rational::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut d = *e;
            d[var] -= 1;
            (d, c * int(e[var] as i64))
        }))
    }

    /// Keeps the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Drops every term with `t`-exponent above `order`.
    pub fn truncate_t(&self, order: u32) -> Self {
        self.filter_terms(|e| e[T] <= order)
    }

    /// Substitutes `x -> sx·x`, …, `t -> st·t` for scalars `s`.
    pub fn rescale_vars(&self, s: [&Rational; 4]) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| {
            let mut v = c.clone();
            for (i, si) in s.iter().enumerate() {
                for _ in 0..e[i] {
                    v *= *si;
                }
            }
            (*e, v)
        }))
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> [bool; 4] {
        let mut used = [false; 4];
        for e in self.terms.keys() {
            for i in 0..4 {
                used[i] |= e[i] > 0;
            }
        }
        used
    }

    pub fn display_with<'a>(&'a self, names: [&'a str; 4]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Displays with the homogeneous coordinate names `X, Y, Z, T`.
    pub fn display_homogeneous(&self) -> PolyDisplay<'_> {
        self.display_with(["X", "Y", "Z", "T"])
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: SparsePoly) -> SparsePoly {
        &self + &rhs
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Sub for SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: SparsePoly) -> SparsePoly {
        &self - &rhs
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]], c1 * c2);
            }
        }
        out
    }
}

impl Mul for SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: SparsePoly) -> SparsePoly {
        &self * &rhs
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a SparsePoly,
    names: [&'a str; 4],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        // Highest exponents in x first reads as "xy - z^2 + t^3".
        for (idx, (exp, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let constant = exp.iter().all(|&e| e == 0);
            if constant || !abs.is_one() {
                write!(f, "{abs}")?;
                if !constant {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(self.names[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(["x", "y", "z", "t"]).fmt(f)
    }
}

/// Rational weights on `x, y, z, t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weighting {
    weights: [Rational; 4],
}

impl Weighting {
    pub fn new(weights: [Rational; 4]) -> Self {
        Self { weights }
    }

    /// The blowup weighting `w = (w0, 1)`: `t` always has weight one.
    pub fn blowup(w0: &WeightVector) -> Self {
        let [a, b, c] = w0.as_rationals();
        Self::new([a, b, c, Rational::one()])
    }

    pub fn integral(weights: [u64; 4]) -> Self {
        Self::new(weights.map(|w| int(w as i64)))
    }

    pub fn weights(&self) -> &[Rational; 4] {
        &self.weights
    }

    pub fn monomial_weight(&self, exp: &Monomial) -> Rational {
        exp.iter().zip(&self.weights).map(|(&e, w)| w * int(e as i64)).sum()
    }

    /// Minimum weight over the monomials of `h`.
    pub fn valuation(&self, h: &SparsePoly) -> Result<Rational, PolyError> {
        h.monomials().map(|e| self.monomial_weight(e)).min().ok_or(PolyError::InfiniteValuation)
    }

    /// The common weight when every monomial of `h` has the same weight.
    pub fn homogeneous_weight(&self, h: &SparsePoly) -> Result<Option<Rational>, PolyError> {
        let mut weights = h.monomials().map(|e| self.monomial_weight(e));
        let first = weights.next().ok_or(PolyError::InfiniteValuation)?;
        Ok(weights.all(|w| w == first).then_some(first))
    }

    pub fn is_homogeneous(&self, h: &SparsePoly) -> Result<bool, PolyError> {
        Ok(self.homogeneous_weight(h)?.is_some())
    }

    /// Pieces of `h` in strictly increasing weight.
    pub fn graded_decomposition(&self, h: &SparsePoly) -> Result<Vec<GradedPiece>, PolyError> {
        if h.is_zero() {
            return Err(PolyError::InfiniteValuation);
        }
        let mut pieces: BTreeMap<Rational, SparsePoly> = BTreeMap::new();
        for (e, c) in h.terms() {
            pieces.entry(self.monomial_weight(e)).or_default().add_term(*e, c.clone());
        }
        Ok(pieces.into_iter().map(|(weight, part)| GradedPiece { weight, part }).collect())
    }

    /// The part of `h` of exactly the given weight (possibly zero).
    pub fn piece(&self, h: &SparsePoly, weight: &Rational) -> SparsePoly {
        h.filter_terms(|e| &self.monomial_weight(e) == weight)
    }
}

/// Homogeneous component of a fixed weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPiece {
    pub weight: Rational,
    pub part: SparsePoly,
}

pub fn is_mu_n_invariant(lattice: &QuotientLattice, h: &SparsePoly) -> bool {
    first_non_invariant(lattice, h).is_none()
}

/// A monomial of `h` with nonzero `μ_n` character, if any.
pub fn first_non_invariant(lattice: &QuotientLattice, h: &SparsePoly) -> Option<Monomial> {
    h.monomials().find(|e| lattice.mu_n_character(&e[..]) != 0).copied()
}

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Reads a polynomial in a single variable; constants are accepted.
    pub fn from_sparse(h: &SparsePoly) -> Result<Self, PolyError> {
        let used = h.support_vars();
        let vars: Vec<usize> = (0..4).filter(|&i| used[i]).collect();
        if vars.len() > 1 {
            return Err(PolyError::NotUnivariate);
        }
        let var = vars.first().copied().unwrap_or(0);
        let deg = h.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in h.terms() {
            coeffs[e[var] as usize] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Yun's decomposition `h = c · s_1 · s_2^2 · s_3^3 ⋯` with monic,
    /// squarefree, pairwise coprime `s_i`; index `i - 1` holds `s_i`.
    pub fn squarefree_decomposition(&self) -> Vec<UniPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            out.push(a);
        }
        out
    }
}

/// `(deg s_i, i)` for each nonconstant factor in the squarefree decomposition
/// of a univariate polynomial. `deg s_i` counts roots of multiplicity exactly
/// `i` over the algebraic closure.
pub fn squarefree_multiplicities(h: &SparsePoly) -> Result<Vec<(usize, usize)>, PolyError> {
    let u = UniPoly::from_sparse(h)?;
    Ok(u.squarefree_decomposition()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s.degree() {
            Some(deg) if deg > 0 => Some((deg, i + 1)),
            _ => None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn p(terms: &[(i64, Monomial)]) -> SparsePoly {
        SparsePoly::from_int_terms(terms)
    }

    fn w_int(a: [u64; 3]) -> Weighting {
        Weighting::blowup(&WeightVector::integral(a).unwrap())
    }

    fn w_quarter() -> Weighting {
        Weighting::blowup(&WeightVector::new(2, [1, 5, 3]).unwrap())
    }

    #[test]
    fn monomial_weights() {
        let w = w_quarter();
        assert_eq!(w.monomial_weight(&[1, 1, 0, 0]), int(3));
        assert_eq!(w.monomial_weight(&[0, 0, 2, 0]), int(3));
        assert_eq!(w.monomial_weight(&[0, 0, 0, 0]), int(0));
        assert_eq!(w.monomial_weight(&[0, 0, 1, 0]), rat(3, 2));
    }

    #[test]
    fn valuations() {
        let e6 = p(&[(1, [2, 0, 0, 0]), (1, [0, 3, 0, 0]), (1, [0, 0, 4, 0])]);
        assert_eq!(w_int([6, 4, 3]).valuation(&e6).unwrap(), int(12));
        let e8 = p(&[(1, [2, 0, 0, 0]), (1, [0, 3, 0, 0]), (1, [0, 0, 5, 0])]);
        assert_eq!(w_int([15, 10, 6]).valuation(&e8).unwrap(), int(30));
        assert_eq!(w_int([1, 1, 1]).valuation(&p(&[(1, [0, 0, 0, 7])])).unwrap(), int(7));
        assert_eq!(w_int([1, 1, 1]).valuation(&SparsePoly::zero()), Err(PolyError::InfiniteValuation));
    }

    #[test]
    fn homogeneity() {
        let d5 = p(&[(1, [2, 0, 0, 0]), (1, [0, 2, 1, 0]), (1, [0, 0, 4, 0])]);
        assert_eq!(w_int([4, 3, 2]).homogeneous_weight(&d5).unwrap(), Some(int(8)));
        let e7 = p(&[(1, [2, 0, 0, 0]), (1, [0, 3, 0, 0]), (1, [0, 1, 3, 0])]);
        assert_eq!(w_int([9, 6, 4]).homogeneous_weight(&e7).unwrap(), Some(int(18)));
        assert!(!w_int([1, 1, 1]).is_homogeneous(&p(&[(1, [1, 0, 0, 0]), (1, [0, 0, 2, 0])])).unwrap());
        assert!(w_int([1, 1, 1]).is_homogeneous(&SparsePoly::zero()).is_err());
    }

    #[test]
    fn graded_pieces() {
        let h = p(&[(1, [1, 1, 0, 0]), (1, [0, 0, 3, 0])]);
        let pieces = w_int([1, 1, 1]).graded_decomposition(&h).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!((pieces[0].weight.clone(), pieces[0].part.clone()), (int(2), p(&[(1, [1, 1, 0, 0])])));
        assert_eq!((pieces[1].weight.clone(), pieces[1].part.clone()), (int(3), p(&[(1, [0, 0, 3, 0])])));

        let quarter = p(&[(1, [1, 1, 0, 0]), (1, [0, 0, 2, 0]), (1, [0, 0, 0, 3])]);
        let pieces = w_quarter().graded_decomposition(&quarter).unwrap();
        assert_eq!(pieces, vec![GradedPiece { weight: int(3), part: quarter.clone() }]);

        let h = p(&[(1, [1, 1, 0, 0]), (1, [0, 0, 3, 0]), (1, [0, 0, 1, 2]), (1, [0, 0, 0, 3])]);
        let pieces = w_int([2, 1, 1]).graded_decomposition(&h).unwrap();
        assert_eq!(pieces, vec![GradedPiece { weight: int(3), part: h.clone() }]);
    }

    #[test]
    fn invariance() {
        let l = QuotientLattice::new(4, 2, 1).unwrap();
        assert!(is_mu_n_invariant(&l, &p(&[(1, [1, 1, 0, 0]), (1, [0, 0, 2, 0]), (1, [0, 0, 0, 3])])));
        assert!(!is_mu_n_invariant(&l, &p(&[(1, [0, 0, 1, 0])])));
        let trivial = QuotientLattice::new(4, 1, 0).unwrap();
        assert!(is_mu_n_invariant(&trivial, &p(&[(3, [0, 0, 1, 0]), (1, [5, 0, 0, 1])])));
    }

    #[test]
    fn squarefree_examples() {
        // (z - 1)^2 (z + 2)
        let h = p(&[(1, [0, 0, 3, 0]), (-3, [0, 0, 1, 0]), (2, [0, 0, 0, 0])]);
        assert_eq!(squarefree_multiplicities(&h).unwrap(), vec![(1, 1), (1, 2)]);
        assert_eq!(squarefree_multiplicities(&p(&[(1, [0, 0, 5, 0])])).unwrap(), vec![(1, 5)]);
        let h = p(&[(1, [0, 0, 2, 0]), (1, [0, 0, 0, 0])]);
        assert_eq!(squarefree_multiplicities(&h).unwrap(), vec![(2, 1)]);
        assert_eq!(squarefree_multiplicities(&p(&[(4, [0; 4])])).unwrap(), vec![]);
        assert_eq!(
            squarefree_multiplicities(&p(&[(1, [1, 0, 0, 0]), (1, [0, 0, 1, 0])])),
            Err(PolyError::NotUnivariate)
        );
    }

    #[test]
    fn squarefree_expansion_check() {
        // (z-1)^2 (z+2) expands to z^3 - 3z + 2.
        let a = p(&[(1, [0, 0, 1, 0]), (-1, [0; 4])]);
        let b = p(&[(1, [0, 0, 1, 0]), (2, [0; 4])]);
        assert_eq!(&a.pow(2) * &b, p(&[(1, [0, 0, 3, 0]), (-3, [0, 0, 1, 0]), (2, [0; 4])]));
    }

    #[test]
    fn display() {
        let h = p(&[(1, [1, 1, 0, 0]), (-1, [0, 0, 2, 0]), (3, [0, 0, 1, 2]), (-2, [0, 0, 0, 0])]);
        assert_eq!(h.to_string(), "x*y - z^2 + 3*z*t^2 - 2");
        assert_eq!(h.display_homogeneous().to_string(), "X*Y - Z^2 + 3*Z*T^2 - 2");
    }

    fn arb_poly(max_terms: usize) -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((1i64..9, prop::array::uniform4(0u32..4)), 1..max_terms)
            .prop_map(|terms| SparsePoly::from_terms(terms.into_iter().map(|(c, e)| (e, int(c)))))
    }

    fn arb_weighting() -> impl Strategy<Value = Weighting> {
        (1u64..4, prop::array::uniform3(1u64..7)).prop_filter_map("coprime", |(d, e)| {
            WeightVector::new(d, e).ok().map(|w| Weighting::blowup(&w))
        })
    }

    fn arb_root_product() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec((-3i64..4, 1u32..4), 1..4).prop_map(|roots| {
            roots.iter().fold(SparsePoly::constant(int(1)), |acc, &(r, m)| {
                &acc * &p(&[(1, [0, 0, 1, 0]), (-r, [0; 4])]).pow(m)
            })
        })
    }

    proptest! {
        #[test]
        fn valuation_is_additive_on_positive_products(w in arb_weighting(), h1 in arb_poly(6), h2 in arb_poly(6)) {
            let v = w.valuation(&(&h1 * &h2)).unwrap();
            prop_assert_eq!(v, w.valuation(&h1).unwrap() + w.valuation(&h2).unwrap());
        }

        #[test]
        fn pieces_reconstruct(w in arb_weighting(), h in arb_poly(10)) {
            let pieces = w.graded_decomposition(&h).unwrap();
            prop_assert!(pieces.windows(2).all(|p| p[0].weight < p[1].weight));
            prop_assert_eq!(pieces[0].weight.clone(), w.valuation(&h).unwrap());
            for piece in &pieces {
                prop_assert_eq!(w.homogeneous_weight(&piece.part).unwrap(), Some(piece.weight.clone()));
            }
            let sum = pieces.into_iter().fold(SparsePoly::zero(), |acc, piece| acc + piece.part);
            prop_assert_eq!(sum, h);
        }

        #[test]
        fn squarefree_degrees_sum_to_degree(h in arb_root_product()) {
            let total: usize = squarefree_multiplicities(&h).unwrap().iter().map(|(d, i)| d * i).sum();
            prop_assert_eq!(total, h.degree_in(Z).unwrap() as usize);
        }
    }
}
