//! Buchberger's algorithm over `F_p` for homogeneous ideals in five
//! variables, used only to bound the dimension of a projective scheme.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub(crate) const VARS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Mono(pub [u16; VARS]);

impl Mono {
    fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn lcm(&self, other: &Mono) -> Mono {
        Mono(core::array::from_fn(|i| self.0[i].max(other.0[i])))
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(core::array::from_fn(|i| self.0[i] - other.0[i]))
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(core::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..VARS).filter(|&i| self.0[i] > 0)
    }
}

// Graded reverse lexicographic order.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..VARS).rev() {
                if self.0[i] != other.0[i] {
                    return other.0[i].cmp(&self.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ModPoly {
    terms: BTreeMap<Mono, u64>,
}

impl ModPoly {
    pub(crate) fn from_terms(terms: impl IntoIterator<Item = (Mono, u64)>, p: u64) -> Self {
        let mut out = ModPoly { terms: BTreeMap::new() };
        for (m, c) in terms {
            out.add(m, c % p, p);
        }
        out
    }

    fn add(&mut self, m: Mono, c: u64, p: u64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> (Mono, u64) {
        let (m, c) = self.terms.iter().next_back().expect("zero polynomial");
        (*m, *c)
    }

    pub(crate) fn lead_mono(&self) -> Mono {
        self.lead().0
    }

    /// `self - c·m·other`.
    fn sub_scaled(&mut self, c: u64, m: &Mono, other: &ModPoly, p: u64) {
        for (om, oc) in &other.terms {
            self.add(om.mul(m), p - (c * oc % p), p);
        }
    }

    fn monic(mut self, p: u64) -> Self {
        let inv = inv_mod(self.lead().1, p);
        for c in self.terms.values_mut() {
            *c = *c * inv % p;
        }
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Limits {
    pub max_basis: usize,
    pub max_steps: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_basis: 400, max_steps: 400_000, max_degree: 80 }
    }
}

struct Budget {
    steps: usize,
    limits: Limits,
}

impl Budget {
    fn tick(&mut self) -> Option<()> {
        self.steps += 1;
        (self.steps <= self.limits.max_steps).then_some(())
    }
}

fn top_reduce(mut f: ModPoly, basis: &[ModPoly], p: u64, budget: &mut Budget) -> Option<ModPoly> {
    'outer: while !f.is_zero() {
        let (lm, lc) = f.lead();
        for g in basis {
            let (gm, gc) = g.lead();
            if gm.divides(&lm) {
                budget.tick()?;
                let c = lc * inv_mod(gc, p) % p;
                f.sub_scaled(c, &lm.div(&gm), g, p);
                continue 'outer;
            }
        }
        break;
    }
    Some(f)
}

fn s_poly(f: &ModPoly, g: &ModPoly, p: u64) -> ModPoly {
    let (fm, fc) = f.lead();
    let (gm, gc) = g.lead();
    let l = fm.lcm(&gm);
    let mut out = ModPoly { terms: BTreeMap::new() };
    out.sub_scaled(p - inv_mod(fc, p), &l.div(&fm), f, p);
    out.sub_scaled(inv_mod(gc, p), &l.div(&gm), g, p);
    out
}

/// A Gröbner basis of the ideal, or `None` when a resource limit is hit.
pub(crate) fn groebner_basis(gens: Vec<ModPoly>, p: u64, limits: Limits) -> Option<Vec<ModPoly>> {
    let mut budget = Budget { steps: 0, limits };
    let mut basis: Vec<ModPoly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in gens {
        let r = top_reduce(g, &basis, p, &mut budget)?;
        if !r.is_zero() {
            let idx = basis.len();
            pairs.extend((0..idx).map(|i| (i, idx)));
            basis.push(r.monic(p));
        }
    }
    // Normal strategy: smallest lcm first.
    while let Some(pos) = (0..pairs.len()).min_by_key(|&k| {
        let (i, j) = pairs[k];
        basis[i].lead_mono().lcm(&basis[j].lead_mono())
    }) {
        let (i, j) = pairs.swap_remove(pos);
        let (mi, mj) = (basis[i].lead_mono(), basis[j].lead_mono());
        if mi.coprime(&mj) {
            continue;
        }
        if mi.lcm(&mj).degree() > limits.max_degree {
            return None;
        }
        let r = top_reduce(s_poly(&basis[i], &basis[j], p), &basis, p, &mut budget)?;
        if !r.is_zero() {
            let idx = basis.len();
            if idx >= limits.max_basis {
                return None;
            }
            pairs.extend((0..idx).map(|k| (k, idx)));
            basis.push(r.monic(p));
        }
    }
    Some(basis)
}

/// Whether the projective scheme cut out by a homogeneous ideal with this
/// Gröbner basis is finite: every pair of variables must carry a leading
/// monomial supported on that pair alone.
pub(crate) fn projectively_finite(basis: &[ModPoly]) -> bool {
    let leads: Vec<Mono> = basis.iter().map(ModPoly::lead_mono).collect();
    for i in 0..VARS {
        for j in i + 1..VARS {
            if !leads.iter().any(|m| m.support().all(|v| v == i || v == j)) {
                return false;
            }
        }
    }
    true
}
