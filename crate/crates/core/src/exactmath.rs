//! Exact rationals and the corank-one extended lattices
//! `Z^dim + Z·(1/n)·g` that carry fractional blowup weights.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("dimension mismatch: lattice has dimension {expected}, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index n must be positive")]
    ZeroIndex,
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: i64, n: u64 },
    #[error("lattice dimension must be 3 or 4, got {0}")]
    BadDimension(usize),
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("the zero vector has no primitivity")]
    ZeroVector,
    #[error("weight entries must be strictly positive")]
    NonPositiveWeight,
    #[error("weight entries ({0}, {1}, {2}) are not coprime")]
    NonCoprimeWeights(u64, u64, u64),
    #[error("weight vector is not primitive in the lattice")]
    Imprimitive,
    #[error("denominator {d} does not divide the index {n}")]
    DenominatorDoesNotDivideIndex { d: u64, n: u64 },
    #[error("cannot parse weights {0:?}; expected \"a1,a2,a3/d\" or \"a1,a2,a3\"")]
    WeightSyntax(alloc::string::String),
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Non-negative residue of `v` modulo `m`.
pub fn mod_floor(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a.rem_euclid(m as i64)).extended_gcd(&(m as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(mod_floor(e.x, m))
}

fn big_prime_divisors(value: &BigInt) -> Vec<BigInt> {
    let mut rest = value.abs();
    let mut primes = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            while (&rest % &p).is_zero() {
                rest /= &p;
            }
            primes.push(p.clone());
        }
        p += 1;
    }
    if rest > BigInt::one() {
        primes.push(rest);
    }
    primes
}

/// A lattice `Z^dim + Z·(1/n)·g` where the generator `g` has first entry 1.
///
/// Both lattices used in this crate have that shape: the three- and
/// four-dimensional `(1, -1, a[, 0])` lattices of the hypersurface quotients
/// and the rank-two `(1, q)` lattices of surface cyclic quotients. With a
/// leading 1 the coset index `j` is read off the first coordinate, so
/// membership is a single congruence check.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedLattice {
    n: u64,
    generator: Vec<i64>,
}

impl ExtendedLattice {
    pub fn new(n: u64, generator: Vec<i64>) -> Result<Self, ExactError> {
        if n == 0 {
            return Err(ExactError::ZeroIndex);
        }
        assert!(generator.first() == Some(&1), "generator must start with 1");
        Ok(Self { n, generator })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[i64] {
        &self.generator
    }

    fn check_dim(&self, v: &[Rational]) -> Result<(), ExactError> {
        if v.len() != self.dim() {
            return Err(ExactError::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// `n·v` as integers, or `None` when some entry has a denominator not
    /// dividing `n` (in which case `v` is certainly outside the lattice).
    fn scaled(&self, v: &[Rational]) -> Option<Vec<BigInt>> {
        let n = BigInt::from(self.n);
        v.iter()
            .map(|x| {
                let s = x * &n;
                s.is_integer().then(|| s.to_integer())
            })
            .collect()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, ExactError> {
        self.check_dim(v)?;
        Ok(self.scaled(v).is_some_and(|u| self.scaled_in_lattice(&u)))
    }

    fn scaled_in_lattice(&self, u: &[BigInt]) -> bool {
        let n = BigInt::from(self.n);
        let j = u[0].mod_floor(&n);
        u.iter()
            .zip(&self.generator)
            .all(|(ui, &gi)| (ui - &j * BigInt::from(gi)).mod_floor(&n).is_zero())
    }

    /// True iff `v` is not a proper integer multiple of another lattice vector.
    pub fn is_primitive(&self, v: &[Rational]) -> Result<bool, ExactError> {
        self.check_dim(v)?;
        let u = self.scaled(v).ok_or(ExactError::NotInLattice)?;
        if !self.scaled_in_lattice(&u) {
            return Err(ExactError::NotInLattice);
        }
        let content = u.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if content.is_zero() {
            return Err(ExactError::ZeroVector);
        }
        // v/p in the lattice needs p to divide every entry of n·v.
        for p in big_prime_divisors(&content) {
            let divided: Vec<BigInt> = u.iter().map(|x| x / &p).collect();
            if self.scaled_in_lattice(&divided) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The lattice `Z^dim + Z·(1/n)(1, -1, a[, 0])` of a `1/n(1,-1,a[,0])` quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientLattice {
    a: i64,
    inner: ExtendedLattice,
}

impl QuotientLattice {
    /// `a` is reduced modulo `n`; `gcd(a, n) = 1` is required.
    pub fn new(dim: usize, n: u64, a: i64) -> Result<Self, ExactError> {
        if n == 0 {
            return Err(ExactError::ZeroIndex);
        }
        if !(3..=4).contains(&dim) {
            return Err(ExactError::BadDimension(dim));
        }
        if gcd_u64(a.unsigned_abs(), n) != 1 {
            return Err(ExactError::NotCoprime { a, n });
        }
        let a = mod_floor(a, n) as i64;
        let mut generator = alloc::vec![1, -1, a];
        if dim == 4 {
            generator.push(0);
        }
        Ok(Self { a, inner: ExtendedLattice::new(n, generator)? })
    }

    pub fn n(&self) -> u64 {
        self.inner.n()
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, ExactError> {
        self.inner.contains(v)
    }

    pub fn is_primitive(&self, v: &[Rational]) -> Result<bool, ExactError> {
        self.inner.is_primitive(v)
    }

    /// Weight of the monomial `x^i y^j z^k t^l` under the `μ_n` action,
    /// i.e. `i - j + a·k mod n`.
    pub fn mu_n_character(&self, exponents: &[u32]) -> u64 {
        let n = self.n() as i128;
        let i = *exponents.first().unwrap_or(&0) as i128;
        let j = *exponents.get(1).unwrap_or(&0) as i128;
        let k = *exponents.get(2).unwrap_or(&0) as i128;
        (i - j + self.a as i128 * k).rem_euclid(n) as u64
    }

    pub fn as_extended(&self) -> &ExtendedLattice {
        &self.inner
    }
}

/// A fractional weight `(1/d)(a1, a2, a3)` with positive coprime entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    d: u64,
    entries: [u64; 3],
}

impl WeightVector {
    pub fn new(d: u64, entries: [u64; 3]) -> Result<Self, ExactError> {
        if d == 0 {
            return Err(ExactError::ZeroIndex);
        }
        if entries.contains(&0) {
            return Err(ExactError::NonPositiveWeight);
        }
        let [a1, a2, a3] = entries;
        if gcd_u64(gcd_u64(a1, a2), a3) != 1 {
            return Err(ExactError::NonCoprimeWeights(a1, a2, a3));
        }
        Ok(Self { d, entries })
    }

    /// Integer weights `(a1, a2, a3)` with `d = 1`.
    pub fn integral(entries: [u64; 3]) -> Result<Self, ExactError> {
        Self::new(1, entries)
    }

    /// Brings three positive rationals to the `(1/d)(a1, a2, a3)` form.
    pub fn from_rationals(v: &[Rational; 3]) -> Result<Self, ExactError> {
        if v.iter().any(|x| !x.is_positive()) {
            return Err(ExactError::NonPositiveWeight);
        }
        let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<u64> = v
            .iter()
            .map(|x| (x.numer() * (&d / x.denom())).to_u64().expect("weight overflows u64"))
            .collect();
        let d = d.to_u64().expect("denominator overflows u64");
        Self::new(d, [scaled[0], scaled[1], scaled[2]])
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn entries(&self) -> [u64; 3] {
        self.entries
    }

    pub fn as_rationals(&self) -> [Rational; 3] {
        self.entries.map(|e| Rational::new(BigInt::from(e), BigInt::from(self.d)))
    }

    /// Largest rational entry `max(a_i)/d`.
    pub fn max_entry(&self) -> Rational {
        let m = *self.entries.iter().max().unwrap();
        Rational::new(BigInt::from(m), BigInt::from(self.d))
    }

    /// Sum of the three rational entries.
    pub fn sum(&self) -> Rational {
        let s: u64 = self.entries.iter().sum();
        Rational::new(BigInt::from(s), BigInt::from(self.d))
    }

    /// Checks the lattice certificates: `d | n`, membership and primitivity.
    pub fn certify(&self, lattice: &QuotientLattice) -> Result<(), ExactError> {
        if !lattice.n().is_multiple_of(self.d) {
            return Err(ExactError::DenominatorDoesNotDivideIndex { d: self.d, n: lattice.n() });
        }
        let mut v = self.as_rationals().to_vec();
        if lattice.dim() == 4 {
            v.push(Rational::zero());
        }
        if !lattice.contains(&v)? {
            return Err(ExactError::NotInLattice);
        }
        if !lattice.is_primitive(&v)? {
            return Err(ExactError::Imprimitive);
        }
        Ok(())
    }

    /// Lexicographic comparison of the rational entries.
    pub fn cmp_entries(&self, other: &Self) -> core::cmp::Ordering {
        self.as_rationals().cmp(&other.as_rationals())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3] = self.entries;
        if self.d == 1 {
            write!(f, "({a1},{a2},{a3})")
        } else {
            write!(f, "1/{}({a1},{a2},{a3})", self.d)
        }
    }
}

impl core::str::FromStr for WeightVector {
    type Err = ExactError;

    /// Parses `"a1,a2,a3/d"` or `"a1,a2,a3"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::WeightSyntax(s.into());
        let (body, d) = match s.split_once('/') {
            Some((body, d)) => (body, d.trim().parse::<u64>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let parts: Vec<u64> = body
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let entries: [u64; 3] = parts.try_into().map_err(|_| bad())?;
        Self::new(d, entries)
    }
}
