//! Normal forms of semistable terminal germs `(f + t·g = 0) ⊂ 1/n(1,-1,a,0)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::exactmath::{int, mod_floor, ExactError, QuotientLattice, Rational};
use crate::groebner::{groebner_basis, projectively_finite, Limits, ModPoly, Mono, VARS};
use crate::polyweights::{first_non_invariant, Monomial, SparsePoly, T, X, Y, Z};
use crate::resolution::{CyclicQuotientType, DuValType, SurfaceCone};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `xy + t·g(z^n, t)`: the special fibre is not normal.
    NonNormal,
    T,
    D,
    E6,
    E7,
    E8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GermCase {
    NonNormal,
    T { k: u32 },
    D { m: u32 },
    E6,
    E7,
    E8,
}

impl GermCase {
    pub fn tag(&self) -> CaseTag {
        match self {
            GermCase::NonNormal => CaseTag::NonNormal,
            GermCase::T { .. } => CaseTag::T,
            GermCase::D { .. } => CaseTag::D,
            GermCase::E6 => CaseTag::E6,
            GermCase::E7 => CaseTag::E7,
            GermCase::E8 => CaseTag::E8,
        }
    }

    pub fn is_duval_de(&self) -> bool {
        matches!(self, GermCase::D { .. } | GermCase::E6 | GermCase::E7 | GermCase::E8)
    }
}

impl fmt::Display for GermCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermCase::NonNormal => f.write_str("non-normal (xy)"),
            GermCase::T { k } => write!(f, "T(k={k})"),
            GermCase::D { m } => write!(f, "D{m}"),
            GermCase::E6 => f.write_str("E6"),
            GermCase::E7 => f.write_str("E7"),
            GermCase::E8 => f.write_str("E8"),
        }
    }
}

/// Sign of the `z^{kn}` term in a case-T germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZSign {
    Plus,
    Minus,
}

impl ZSign {
    pub fn as_int(self) -> i64 {
        match self {
            ZSign::Plus => 1,
            ZSign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Isolatedness {
    /// Taken as a hypothesis from the user.
    Asserted,
    /// Confirmed by the isolatedness probe.
    Verified,
}

/// Unvalidated germ data as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGerm {
    pub n: u64,
    pub a: i64,
    pub case: CaseTag,
    pub k: Option<u32>,
    pub m: Option<u32>,
    /// Explicit `f`; when absent the normal form is used.
    pub f: Option<SparsePoly>,
    pub g: SparsePoly,
    pub rho_one: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error("index n must be positive")]
    ZeroIndex,
    #[error("gcd(a, n) = gcd({a}, {n}) != 1")]
    NotCoprime { a: i64, n: u64 },
    #[error("case {0:?} requires parameter {1}")]
    MissingParameter(CaseTag, &'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Du Val D/E germs have index 1, got n = {0}")]
    IndexMustBeOne(u64),
    #[error("f = {found} is not the normal form {expected}")]
    MalformedF { expected: String, found: String },
    #[error("f + t*g is not mu_n-invariant: {} has character {character} mod {n}", SparsePoly::monomial(*.monomial))]
    NonInvariant { monomial: Monomial, character: u64, n: u64 },
}

impl From<ExactError> for GermError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::NotCoprime { a, n } => GermError::NotCoprime { a, n },
            ExactError::ZeroIndex => GermError::ZeroIndex,
            other => GermError::InvalidParameter(alloc::format!("{other}")),
        }
    }
}

/// A validated germ in one of the normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermSpec {
    lattice: QuotientLattice,
    case: GermCase,
    sign: ZSign,
    g: SparsePoly,
    rho_one: bool,
    isolatedness: Isolatedness,
}

fn xy() -> SparsePoly {
    SparsePoly::monomial([1, 1, 0, 0])
}

fn normal_form(case: GermCase, n: u64, sign: ZSign) -> SparsePoly {
    let m = |e: Monomial| SparsePoly::monomial(e);
    match case {
        GermCase::NonNormal => xy(),
        GermCase::T { k } => {
            let zpow = SparsePoly::term(int(sign.as_int()), [0, 0, k * n as u32, 0]);
            xy() + zpow
        }
        GermCase::D { m: mm } => m([2, 0, 0, 0]) + m([0, 2, 1, 0]) + m([0, 0, mm - 1, 0]),
        GermCase::E6 => m([2, 0, 0, 0]) + m([0, 3, 0, 0]) + m([0, 0, 4, 0]),
        GermCase::E7 => m([2, 0, 0, 0]) + m([0, 3, 0, 0]) + m([0, 1, 3, 0]),
        GermCase::E8 => m([2, 0, 0, 0]) + m([0, 3, 0, 0]) + m([0, 0, 5, 0]),
    }
}

pub fn validate_germ(raw: &RawGerm) -> Result<GermSpec, GermError> {
    let lattice = QuotientLattice::new(4, raw.n, raw.a)?;
    let case = match raw.case {
        CaseTag::NonNormal => GermCase::NonNormal,
        CaseTag::T => {
            let k = raw.k.ok_or(GermError::MissingParameter(CaseTag::T, "k"))?;
            if k == 0 {
                return Err(GermError::InvalidParameter("k must be at least 1".into()));
            }
            GermCase::T { k }
        }
        CaseTag::D => {
            let m = raw.m.ok_or(GermError::MissingParameter(CaseTag::D, "m"))?;
            if m < 4 {
                return Err(GermError::InvalidParameter(alloc::format!("D_m needs m >= 4, got {m}")));
            }
            GermCase::D { m }
        }
        CaseTag::E6 => GermCase::E6,
        CaseTag::E7 => GermCase::E7,
        CaseTag::E8 => GermCase::E8,
    };
    if case.is_duval_de() && raw.n != 1 {
        return Err(GermError::IndexMustBeOne(raw.n));
    }
    let sign = match (&raw.f, case) {
        (None, _) => ZSign::Minus,
        (Some(f), GermCase::T { .. }) => [ZSign::Minus, ZSign::Plus]
            .into_iter()
            .find(|&s| *f == normal_form(case, raw.n, s))
            .ok_or_else(|| GermError::MalformedF {
                expected: alloc::format!("{} (or with +z^kn)", normal_form(case, raw.n, ZSign::Minus)),
                found: alloc::format!("{f}"),
            })?,
        (Some(f), _) => {
            let expected = normal_form(case, raw.n, ZSign::Minus);
            if *f != expected {
                return Err(GermError::MalformedF {
                    expected: alloc::format!("{expected}"),
                    found: alloc::format!("{f}"),
                });
            }
            ZSign::Minus
        }
    };
    let germ = GermSpec { lattice, case, sign, g: raw.g.clone(), rho_one: raw.rho_one, isolatedness: Isolatedness::Asserted };
    if let Some(monomial) = first_non_invariant(&germ.lattice, &germ.total()) {
        return Err(GermError::NonInvariant {
            monomial,
            character: germ.lattice.mu_n_character(&monomial),
            n: raw.n,
        });
    }
    Ok(germ)
}

impl GermSpec {
    pub fn n(&self) -> u64 {
        self.lattice.n()
    }

    /// `a` reduced modulo `n`.
    pub fn a(&self) -> i64 {
        self.lattice.a()
    }

    pub fn case(&self) -> GermCase {
        self.case
    }

    pub fn sign(&self) -> ZSign {
        self.sign
    }

    pub fn rho_one(&self) -> bool {
        self.rho_one
    }

    pub fn isolatedness(&self) -> Isolatedness {
        self.isolatedness
    }

    /// The four-dimensional lattice of the ambient quotient `1/n(1,-1,a,0)`.
    pub fn lattice(&self) -> &QuotientLattice {
        &self.lattice
    }

    /// The three-dimensional lattice carrying `w0`.
    pub fn weight_lattice(&self) -> QuotientLattice {
        QuotientLattice::new(3, self.n(), self.a()).expect("validated lattice")
    }

    pub fn f(&self) -> SparsePoly {
        normal_form(self.case, self.n(), self.sign)
    }

    pub fn g(&self) -> &SparsePoly {
        &self.g
    }

    pub fn tg(&self) -> SparsePoly {
        self.g.mul_monomial([0, 0, 0, 1])
    }

    /// The defining equation `f + t·g`.
    pub fn total(&self) -> SparsePoly {
        self.f() + self.tg()
    }

    /// The same germ written with `f = xy - z^{kn}`, via `x -> -x` and
    /// negating the equation.
    pub fn normalized(&self) -> GermSpec {
        let mut out = self.clone();
        if self.sign == ZSign::Plus {
            let minus = -Rational::one();
            let one = Rational::one();
            out.g = -self.g.rescale_vars([&minus, &one, &one, &one]);
            out.sign = ZSign::Minus;
        }
        out
    }

    pub fn to_raw(&self) -> RawGerm {
        RawGerm {
            n: self.n(),
            a: self.a(),
            case: self.case.tag(),
            k: match self.case {
                GermCase::T { k } => Some(k),
                _ => None,
            },
            m: match self.case {
                GermCase::D { m } => Some(m),
                _ => None,
            },
            f: Some(self.f()),
            g: self.g.clone(),
            rho_one: self.rho_one,
        }
    }

    pub fn fibre_singularity(&self) -> FibreSingularity {
        match self.case {
            GermCase::NonNormal => FibreSingularity::NonNormal,
            GermCase::T { k } => {
                let n = self.n();
                let kn = k as u64 * n;
                let r = kn * n;
                let q = if r == 1 { 0 } else { mod_floor(kn as i64 * self.a() - 1, r) };
                FibreSingularity::CyclicQuotient(FibreQuotientData { r, q, dictionary: MonomialDictionary { kn } })
            }
            GermCase::D { m } => FibreSingularity::DuVal(DuValType::D(m)),
            GermCase::E6 => FibreSingularity::DuVal(DuValType::E6),
            GermCase::E7 => FibreSingularity::DuVal(DuValType::E7),
            GermCase::E8 => FibreSingularity::DuVal(DuValType::E8),
        }
    }

    /// Runs the isolatedness probe and records a positive verdict.
    pub fn with_isolatedness_probe(mut self, trunc_order: Option<u32>) -> Self {
        if isolatedness_probe(&self, trunc_order) == ProbeVerdict::Verified {
            self.isolatedness = Isolatedness::Verified;
        }
        self
    }
}

/// The singularity of the special fibre `t = 0` at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FibreSingularity {
    CyclicQuotient(FibreQuotientData),
    DuVal(DuValType),
    NonNormal,
}

/// `X ≅ A^2_{u,v} / 1/r(1,q)` with `r = k n^2`, `q = k n a - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreQuotientData {
    pub r: u64,
    pub q: u64,
    pub dictionary: MonomialDictionary,
}

impl FibreQuotientData {
    pub fn quotient(&self) -> CyclicQuotientType {
        CyclicQuotientType { r: self.r, q: self.q }
    }

    /// `A_{r-1}` when `q = r - 1` (index one), `None` otherwise.
    pub fn duval(&self) -> Option<DuValType> {
        (self.r > 1 && self.q == self.r - 1).then(|| DuValType::A(self.r as u32 - 1))
    }

    pub fn cone(&self) -> SurfaceCone {
        SurfaceCone::quadrant(self.r, self.q).expect("fibre quotient data is valid")
    }
}

/// `x = u^{kn}`, `y = v^{kn}`, `z = uv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialDictionary {
    pub kn: u64,
}

impl MonomialDictionary {
    /// Exponents of `(u, v)` in the pullback of `x^i y^j z^k`.
    pub fn pull_back(&self, exp: [u64; 3]) -> [u64; 2] {
        [self.kn * exp[0] + exp[2], self.kn * exp[1] + exp[2]]
    }

    /// The `(u, v)` weights inducing the given `(x, y, z)` weights.
    pub fn weights_to_ray(&self, w: &[Rational; 3]) -> [Rational; 2] {
        let kn = int(self.kn as i64);
        [&w[0] / &kn, &w[1] / &kn]
    }

    pub fn ray_to_weights(&self, alpha: &[Rational; 2]) -> [Rational; 3] {
        let kn = int(self.kn as i64);
        [&alpha[0] * &kn, &alpha[1] * &kn, &alpha[0] + &alpha[1]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeVerdict {
    Verified,
    Inconclusive,
}

const PROBE_PRIMES: [u64; 3] = [32003, 65521, 2_147_483_647];

fn to_mod_p(c: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64()?;
    let den = c.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(num * crate::groebner::inv_mod(den, p) % p)
}

fn homogenize_mod_p(h: &SparsePoly, p: u64) -> Option<ModPoly> {
    let deg = h.total_degree()?;
    let mut terms = Vec::new();
    for (e, c) in h.terms() {
        let mut m = [0u16; VARS];
        for i in 0..4 {
            m[i] = u16::try_from(e[i]).ok()?;
        }
        m[4] = (deg - e.iter().sum::<u32>()) as u16;
        terms.push((Mono(m), to_mod_p(c, p)?));
    }
    Some(ModPoly::from_terms(terms, p))
}

/// One-sided test that `f + t·g` defines an isolated singularity.
///
/// `Verified` means: the projective closure of the singular locus
/// `V(F, ∂F)` of the (truncated) equation is finite modulo some prime of a
/// fixed list, which bounds the characteristic-zero singular locus to
/// finitely many points. For `n > 1` the equation must also avoid the
/// `t`-axis, where the group action has fixed points. Anything else is
/// `Inconclusive`; the probe never reports a non-isolated verdict.
pub fn isolatedness_probe(germ: &GermSpec, trunc_order: Option<u32>) -> ProbeVerdict {
    let total = match trunc_order {
        Some(order) => germ.f() + germ.tg().truncate_t(order),
        None => germ.total(),
    };
    if germ.n() > 1 && !total.monomials().any(|e| e[X] == 0 && e[Y] == 0 && e[Z] == 0) {
        return ProbeVerdict::Inconclusive;
    }
    if total.monomials().any(|e| e.iter().sum::<u32>() <= 1) {
        // A linear term makes the germ smooth at the origin.
        return ProbeVerdict::Verified;
    }
    let mut system = alloc::vec![total.clone()];
    system.extend([X, Y, Z, T].map(|v| total.derivative(v)).into_iter().filter(|d| !d.is_zero()));
    for p in PROBE_PRIMES {
        let Some(gens) = system.iter().map(|h| homogenize_mod_p(h, p)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        if let Some(basis) = groebner_basis(gens, p, Limits::default()) {
            if projectively_finite(&basis) {
                return ProbeVerdict::Verified;
            }
        }
    }
    ProbeVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(terms: &[(i64, Monomial)]) -> SparsePoly {
        SparsePoly::from_int_terms(terms)
    }

    pub(crate) fn raw_t(n: u64, a: i64, k: u32, g: SparsePoly) -> RawGerm {
        RawGerm { n, a, case: CaseTag::T, k: Some(k), m: None, f: None, g, rho_one: true }
    }

    fn quarter_raw() -> RawGerm {
        // xy + z^2 + t^3 in 1/2(1,1,1,0).
        RawGerm { f: Some(poly(&[(1, [1, 1, 0, 0]), (1, [0, 0, 2, 0])])), ..raw_t(2, 1, 1, poly(&[(1, [0, 0, 0, 2])])) }
    }

    #[test]
    fn validation_examples() {
        let germ = validate_germ(&quarter_raw()).unwrap();
        assert_eq!(germ.sign(), ZSign::Plus);
        assert_eq!(germ.total(), poly(&[(1, [1, 1, 0, 0]), (1, [0, 0, 2, 0]), (1, [0, 0, 0, 3])]));

        assert_eq!(
            validate_germ(&raw_t(2, 2, 1, SparsePoly::zero())),
            Err(GermError::NotCoprime { a: 2, n: 2 })
        );

        let err = validate_germ(&raw_t(3, 1, 1, poly(&[(1, [0, 0, 1, 1])]))).unwrap_err();
        assert_eq!(err, GermError::NonInvariant { monomial: [0, 0, 1, 2], character: 1, n: 3 });
    }

    #[test]
    fn malformed_and_missing_parameters() {
        let bad_f = RawGerm { f: Some(poly(&[(1, [1, 1, 0, 0]), (2, [0, 0, 2, 0])])), ..quarter_raw() };
        assert!(matches!(validate_germ(&bad_f), Err(GermError::MalformedF { .. })));
        let no_k = RawGerm { k: None, ..quarter_raw() };
        assert_eq!(validate_germ(&no_k), Err(GermError::MissingParameter(CaseTag::T, "k")));
        let d3 = RawGerm { n: 1, a: 0, case: CaseTag::D, k: None, m: Some(3), f: None, g: SparsePoly::zero(), rho_one: true };
        assert!(matches!(validate_germ(&d3), Err(GermError::InvalidParameter(_))));
        let e6_index2 = RawGerm { n: 2, a: 1, case: CaseTag::E6, ..d3.clone() };
        assert_eq!(validate_germ(&e6_index2), Err(GermError::IndexMustBeOne(2)));
        let e7_wrong_f = RawGerm { case: CaseTag::E7, f: Some(poly(&[(1, [2, 0, 0, 0]), (1, [0, 3, 0, 0]), (1, [0, 0, 4, 0])])), ..d3 };
        assert!(matches!(validate_germ(&e7_wrong_f), Err(GermError::MalformedF { .. })));
    }

    #[test]
    fn fibre_examples() {
        let germ = validate_germ(&quarter_raw()).unwrap();
        let FibreSingularity::CyclicQuotient(data) = germ.fibre_singularity() else { panic!() };
        assert_eq!((data.r, data.q), (4, 1));

        let a1 = validate_germ(&raw_t(1, 0, 2, SparsePoly::zero())).unwrap();
        let FibreSingularity::CyclicQuotient(data) = a1.fibre_singularity() else { panic!() };
        assert_eq!((data.r, data.q), (2, 1));
        assert_eq!(data.duval(), Some(DuValType::A(1)));

        let d4 = RawGerm { n: 1, a: 0, case: CaseTag::D, k: None, m: Some(4), f: None, g: SparsePoly::zero(), rho_one: true };
        assert_eq!(validate_germ(&d4).unwrap().fibre_singularity(), FibreSingularity::DuVal(DuValType::D(4)));

        let smooth = validate_germ(&raw_t(1, 0, 1, SparsePoly::zero())).unwrap();
        let FibreSingularity::CyclicQuotient(data) = smooth.fibre_singularity() else { panic!() };
        assert_eq!((data.r, data.q), (1, 0));
    }

    #[test]
    fn normalization_flips_sign_and_g() {
        let germ = validate_germ(&quarter_raw()).unwrap();
        let norm = germ.normalized();
        assert_eq!(norm.sign(), ZSign::Minus);
        assert_eq!(norm.total(), poly(&[(1, [1, 1, 0, 0]), (-1, [0, 0, 2, 0]), (-1, [0, 0, 0, 3])]));
        // The map x -> -x followed by negation sends one equation to the other.
        let minus = -Rational::one();
        let one = Rational::one();
        assert_eq!(-germ.total().rescale_vars([&minus, &one, &one, &one]), norm.total());
    }

    #[test]
    fn probe_examples() {
        let germ = validate_germ(&quarter_raw()).unwrap();
        assert_eq!(isolatedness_probe(&germ, None), ProbeVerdict::Verified);
        assert_eq!(germ.clone().with_isolatedness_probe(None).isolatedness(), Isolatedness::Verified);

        // xy - z^2 with g = 0 is singular along the t-axis.
        let line = validate_germ(&raw_t(1, 0, 2, SparsePoly::zero())).unwrap();
        assert_eq!(isolatedness_probe(&line, None), ProbeVerdict::Inconclusive);

        // xy - z is smooth.
        let smooth = validate_germ(&raw_t(1, 0, 1, SparsePoly::zero())).unwrap();
        assert_eq!(isolatedness_probe(&smooth, None), ProbeVerdict::Verified);

        // x^2 + y^3 + z^5 + t(x + 2y + 3z + 5t).
        let e8 = RawGerm {
            n: 1,
            a: 0,
            case: CaseTag::E8,
            k: None,
            m: None,
            f: None,
            g: poly(&[(1, [1, 0, 0, 0]), (2, [0, 1, 0, 0]), (3, [0, 0, 1, 0]), (5, [0, 0, 0, 1])]),
            rho_one: true,
        };
        assert_eq!(isolatedness_probe(&validate_germ(&e8).unwrap(), None), ProbeVerdict::Verified);
    }

    #[test]
    fn probe_respects_truncation_and_axis() {
        // In 1/2(1,1,1,0) the t^3 term keeps the germ off the fixed t-axis.
        let germ = validate_germ(&quarter_raw()).unwrap();
        assert_eq!(isolatedness_probe(&germ, Some(3)), ProbeVerdict::Verified);
        assert_eq!(isolatedness_probe(&germ, Some(2)), ProbeVerdict::Inconclusive);
    }

    #[test]
    fn dictionary_identity() {
        for (k, n) in [(1u64, 1u64), (2, 1), (1, 2), (3, 2), (2, 5)] {
            let dict = MonomialDictionary { kn: k * n };
            // x·y and z^{kn} pull back to the same monomial.
            let xy = dict.pull_back([1, 1, 0]);
            let zkn = dict.pull_back([0, 0, k * n]);
            assert_eq!(xy, zkn);
            assert_eq!(xy, [k * n, k * n]);
        }
    }

    fn arb_raw() -> impl Strategy<Value = RawGerm> {
        (1u64..6, 0i64..6, 1u32..4, prop::collection::vec((1i64..5, prop::array::uniform4(0u32..4)), 0..5)).prop_map(
            |(n, a, k, terms)| {
                let a = (1..=n as i64).map(|s| (a + s) % n as i64).find(|x| x.gcd(&(n as i64)) == 1).unwrap_or(0);
                // Keep only invariant monomials so that validation succeeds.
                let lattice = QuotientLattice::new(4, n, a).unwrap();
                let g = SparsePoly::from_terms(
                    terms
                        .into_iter()
                        .filter(|(_, e)| lattice.mu_n_character(&[e[0], e[1], e[2], e[3] + 1]) == 0)
                        .map(|(c, e)| (e, int(c))),
                );
                raw_t(n, a, k, g)
            },
        )
    }

    proptest! {
        #[test]
        fn validation_is_idempotent(raw in arb_raw()) {
            let germ = validate_germ(&raw).unwrap();
            prop_assert_eq!(validate_germ(&germ.to_raw()).unwrap(), germ.clone());
            let lattice = germ.lattice();
            prop_assert!(germ.f().monomials().all(|e| lattice.mu_n_character(e) == 0));
            if let FibreSingularity::CyclicQuotient(data) = germ.fibre_singularity() {
                let GermCase::T { k } = germ.case() else { unreachable!() };
                prop_assert_eq!(data.r, k as u64 * germ.n() * germ.n());
                if data.r > 1 {
                    prop_assert_eq!(crate::exactmath::gcd_u64(data.q, data.r), 1);
                }
            }
        }
    }
}
