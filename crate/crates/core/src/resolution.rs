//! Hirzebruch–Jung strings, Du Val dual graphs and weighted blowups of
//! two-dimensional cyclic quotient cones.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactmath::{gcd_u64, int, rat, ExactError, ExtendedLattice, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("invalid cyclic quotient 1/{r}(1,{q}): need r >= 2, 1 <= q < r, gcd(q, r) = 1")]
    InvalidQuotient { r: u64, q: u64 },
    #[error("invalid Du Val type {0}")]
    InvalidDuVal(DuValType),
    #[error("ray is not strictly inside the cone")]
    NotInterior,
    #[error("ray is not in the cone's lattice")]
    NotInLattice,
    #[error("ray is not primitive in the cone's lattice")]
    Imprimitive,
    #[error("cone rays are linearly dependent")]
    DegenerateCone,
    #[error(transparent)]
    Lattice(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DuValType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl fmt::Display for DuValType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DuValType::A(n) => write!(f, "A{n}"),
            DuValType::D(n) => write!(f, "D{n}"),
            DuValType::E6 => f.write_str("E6"),
            DuValType::E7 => f.write_str("E7"),
            DuValType::E8 => f.write_str("E8"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub self_intersection: i64,
    pub label: String,
}

/// A labeled resolution graph of rational curves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    /// The curve meeting three others, for `D` and `E` configurations.
    pub fork: Option<usize>,
}

impl DualGraph {
    /// A chain of curves with self-intersections `-b_1, …, -b_s`.
    pub fn string(bs: &[u64]) -> Self {
        let vertices = bs
            .iter()
            .enumerate()
            .map(|(i, &b)| Vertex { self_intersection: -(b as i64), label: format!("C{}", i + 1) })
            .collect();
        let edges = (1..bs.len()).map(|i| (i - 1, i)).collect();
        Self { vertices, edges, fork: None }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = alloc::vec![false; self.vertices.len()];
        let mut stack = alloc::vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == v { b } else if b == v { a } else { continue };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A connected graph with no vertex of degree above two and `|V| - 1` edges.
    pub fn is_string(&self) -> bool {
        self.is_connected()
            && self.edges.len() + 1 == self.vertices.len().max(1)
            && self.degrees().iter().all(|&d| d <= 2)
    }

    /// Self-intersections in vertex order, as positive `b_i`.
    pub fn string_entries(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| (-v.self_intersection) as u64).collect()
    }
}

fn check_quotient(r: u64, q: u64) -> Result<(), ResolutionError> {
    if r < 2 || q == 0 || q >= r || gcd_u64(q, r) != 1 {
        return Err(ResolutionError::InvalidQuotient { r, q });
    }
    Ok(())
}

/// Continued fraction `r/q = b_1 - 1/(b_2 - 1/(…))` with every `b_i >= 2`.
pub fn hj_expansion(r: u64, q: u64) -> Result<Vec<u64>, ResolutionError> {
    check_quotient(r, q)?;
    let (mut num, mut den) = (r, q);
    let mut out = Vec::new();
    while den > 0 {
        let b = num.div_ceil(den);
        out.push(b);
        (num, den) = (den, b * den - num);
    }
    Ok(out)
}

/// Minimal resolution graph of `1/r(1,q)`; the empty graph when `r = 1`.
pub fn resolve_cyclic(r: u64, q: u64) -> Result<DualGraph, ResolutionError> {
    if r == 1 {
        return Ok(DualGraph::default());
    }
    Ok(DualGraph::string(&hj_expansion(r, q)?))
}

pub fn duval_graph(kind: DuValType) -> Result<DualGraph, ResolutionError> {
    // (chain length, index on the chain where the extra curve attaches)
    let (chain, branch) = match kind {
        DuValType::A(n) if n >= 1 => (n as usize, None),
        DuValType::D(n) if n >= 4 => (n as usize - 1, Some(n as usize - 3)),
        DuValType::E6 => (5, Some(2)),
        DuValType::E7 => (6, Some(2)),
        DuValType::E8 => (7, Some(2)),
        _ => return Err(ResolutionError::InvalidDuVal(kind)),
    };
    let mut graph = DualGraph::string(&alloc::vec![2; chain]);
    if let Some(at) = branch {
        let extra = graph.vertices.len();
        graph.vertices.push(Vertex { self_intersection: -2, label: format!("C{}", extra + 1) });
        graph.edges.push((at, extra));
        if matches!(kind, DuValType::D(_)) {
            // D_n: the last two curves both hang off the fork, so move the
            // chain's final curve onto the fork as well.
            let last = chain - 1;
            graph.edges.retain(|&e| e != (last - 1, last));
            graph.edges.push((at, last));
            graph.edges.sort_unstable();
        }
        graph.fork = Some(at);
    }
    Ok(graph)
}

/// The type `1/r(1,q)` of a two-dimensional cyclic quotient; `r = 1`
/// (with `q = 0`) is smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicQuotientType {
    pub r: u64,
    pub q: u64,
}

impl CyclicQuotientType {
    pub fn is_smooth(&self) -> bool {
        self.r == 1
    }
}

impl fmt::Display for CyclicQuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            f.write_str("smooth")
        } else {
            write!(f, "1/{}(1,{})", self.r, self.q)
        }
    }
}

type Vec2 = [Rational; 2];

fn det(v1: &Vec2, v2: &Vec2) -> Rational {
    &v1[0] * &v2[1] - &v1[1] * &v2[0]
}

/// A strictly convex cone spanned by two rays in `Z^2 + Z·(1/r)(1,q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCone {
    lattice: ExtendedLattice,
    rays: [Vec2; 2],
}

/// The two cones of a star subdivision and the discrepancy of the new divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub first: CyclicQuotientType,
    pub second: CyclicQuotientType,
    pub f_discrepancy: Rational,
}

impl SurfaceCone {
    /// The positive quadrant, i.e. `A^2 / 1/r(1,q)`.
    pub fn quadrant(r: u64, q: u64) -> Result<Self, ResolutionError> {
        if r > 1 {
            check_quotient(r, q)?;
        }
        let lattice = ExtendedLattice::new(r, alloc::vec![1, q as i64])?;
        Ok(Self { lattice, rays: [[int(1), int(0)], [int(0), int(1)]] })
    }

    pub fn new(r: u64, q: u64, rays: [Vec2; 2]) -> Result<Self, ResolutionError> {
        let mut cone = Self::quadrant(r, q)?;
        if det(&rays[0], &rays[1]).is_zero() {
            return Err(ResolutionError::DegenerateCone);
        }
        for ray in &rays {
            cone.check_primitive(ray)?;
        }
        cone.rays = rays;
        Ok(cone)
    }

    pub fn lattice(&self) -> &ExtendedLattice {
        &self.lattice
    }

    pub fn rays(&self) -> &[Vec2; 2] {
        &self.rays
    }

    fn check_primitive(&self, v: &Vec2) -> Result<(), ResolutionError> {
        if !self.lattice.contains(v)? {
            return Err(ResolutionError::NotInLattice);
        }
        if !self.lattice.is_primitive(v)? {
            return Err(ResolutionError::Imprimitive);
        }
        Ok(())
    }

    /// Coordinates of `v` in the ray basis.
    fn ray_coordinates(&self, v: &Vec2) -> Vec2 {
        let [v1, v2] = &self.rays;
        let dt = det(v1, v2);
        [det(v, v2) / &dt, det(v1, v) / &dt]
    }

    /// The linear function equal to 1 on both primitive ray generators.
    pub fn psi(&self, v: &Vec2) -> Rational {
        let [c1, c2] = self.ray_coordinates(v);
        c1 + c2
    }

    /// Quotient type of the cone spanned by `v1, v2` (in that order) in this
    /// cone's lattice.
    pub fn quotient_type(&self, v1: &Vec2, v2: &Vec2) -> Result<CyclicQuotientType, ResolutionError> {
        let dt = det(v1, v2);
        if dt.is_zero() {
            return Err(ResolutionError::DegenerateCone);
        }
        let index = (dt.abs() * int(self.lattice.n() as i64)).to_integer();
        let index = index.to_u64().expect("cone index overflows u64");
        if index == 1 {
            return Ok(CyclicQuotientType { r: 1, q: 0 });
        }
        // Lattice generators e1, e2, (1/r)(1,q) in the basis (v1, v2), scaled
        // by the index so that they become integral.
        let r = self.lattice.n() as i64;
        let q = self.lattice.generator()[1];
        let generators: [Vec2; 3] = [[int(1), int(0)], [int(0), int(1)], [rat(1, r), rat(q, r)]];
        let m = BigInt::from(index);
        let mut coords: Vec<(BigInt, BigInt)> = Vec::new();
        for g in &generators {
            let c1 = det(g, v2) / &dt * int(index as i64);
            let c2 = det(v1, g) / &dt * int(index as i64);
            debug_assert!(c1.is_integer() && c2.is_integer());
            coords.push((c1.to_integer().mod_floor(&m), c2.to_integer().mod_floor(&m)));
        }
        // Combine the generators so that the v1-coordinate becomes 1 mod index.
        let (mut g, mut acc) = (m.clone(), (BigInt::zero(), BigInt::zero()));
        for (s, t) in &coords {
            let e = g.extended_gcd(s);
            acc = ((&acc.0 * &e.x + s * &e.y).mod_floor(&m), (&acc.1 * &e.x + t * &e.y).mod_floor(&m));
            g = e.gcd;
        }
        // With v2 primitive the v1-coordinates generate Z/index, so g = 1.
        assert!(g == BigInt::from(1), "v2 is not primitive in the lattice");
        debug_assert!(acc.0 == BigInt::from(1));
        Ok(CyclicQuotientType { r: index, q: acc.1.to_u64().unwrap() })
    }

    /// Star subdivision at a primitive interior ray `alpha`.
    pub fn subdivide(&self, alpha: &Vec2) -> Result<Subdivision, ResolutionError> {
        let [c1, c2] = self.ray_coordinates(alpha);
        if !c1.is_positive() || !c2.is_positive() {
            return Err(ResolutionError::NotInterior);
        }
        self.check_primitive(alpha)?;
        let [v1, v2] = &self.rays;
        Ok(Subdivision {
            first: self.quotient_type(v1, alpha)?,
            second: self.quotient_type(alpha, v2)?,
            f_discrepancy: c1 + c2 - int(1),
        })
    }
}

/// Weighted blowup of `u, v` with weights `alpha`, as a star subdivision.
pub fn toric_subdivide(cone: &SurfaceCone, alpha: &Vec2) -> Result<Subdivision, ResolutionError> {
    cone.subdivide(alpha)
}

/// `q^{-1} mod r`, the type of the same quotient with the rays swapped.
pub fn swapped_type(t: CyclicQuotientType) -> CyclicQuotientType {
    if t.is_smooth() {
        return t;
    }
    CyclicQuotientType { r: t.r, q: crate::exactmath::mod_inverse(t.q as i64, t.r).unwrap() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hj_examples() {
        assert_eq!(hj_expansion(4, 1).unwrap(), vec![4]);
        assert_eq!(hj_expansion(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(hj_expansion(7, 6).unwrap(), vec![2; 6]);
        assert_eq!(hj_expansion(7, 3).unwrap(), vec![3, 2, 2]);
        assert!(hj_expansion(6, 2).is_err());
        assert!(hj_expansion(1, 0).is_err());
        assert!(hj_expansion(5, 5).is_err());
    }

    #[test]
    fn cyclic_resolutions() {
        let g = resolve_cyclic(4, 1).unwrap();
        assert_eq!(g.string_entries(), vec![4]);
        assert_eq!(resolve_cyclic(2, 1).unwrap().string_entries(), vec![2]);
        assert!(resolve_cyclic(1, 0).unwrap().is_empty());
        let g = resolve_cyclic(5, 2).unwrap();
        assert!(g.is_string());
        assert_eq!(g.vertices[0].self_intersection, -3);
    }

    #[test]
    fn duval_graphs() {
        let a3 = duval_graph(DuValType::A(3)).unwrap();
        assert!(a3.is_string() && a3.fork.is_none() && a3.vertices.len() == 3);

        let d4 = duval_graph(DuValType::D(4)).unwrap();
        let fork = d4.fork.unwrap();
        assert_eq!(d4.degrees()[fork], 3);
        assert_eq!(d4.vertices.len(), 4);
        assert!(d4.is_connected());

        for (kind, size, arms) in [
            (DuValType::E6, 6, [1, 2, 2]),
            (DuValType::E7, 7, [1, 2, 3]),
            (DuValType::E8, 8, [1, 2, 4]),
            (DuValType::D(7), 7, [1, 1, 4]),
        ] {
            let g = duval_graph(kind).unwrap();
            assert_eq!(g.vertices.len(), size);
            assert_eq!(g.edges.len(), size - 1);
            assert!(g.is_connected());
            assert!(g.vertices.iter().all(|v| v.self_intersection == -2));
            let deg = g.degrees();
            let fork = g.fork.unwrap();
            assert_eq!(deg[fork], 3);
            assert_eq!(deg.iter().filter(|&&d| d == 3).count(), 1);
            assert_eq!(arm_lengths(&g, fork), arms, "{kind}");
        }
        assert!(duval_graph(DuValType::D(3)).is_err());
        assert!(duval_graph(DuValType::A(0)).is_err());
    }

    fn arm_lengths(g: &DualGraph, fork: usize) -> [usize; 3] {
        let neighbours = |v: usize| -> Vec<usize> {
            g.edges
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect()
        };
        let mut arms: Vec<usize> = neighbours(fork)
            .into_iter()
            .map(|start| {
                let (mut prev, mut cur, mut len) = (fork, start, 1);
                loop {
                    let next: Vec<usize> = neighbours(cur).into_iter().filter(|&w| w != prev).collect();
                    match next.as_slice() {
                        [w] => {
                            (prev, cur) = (cur, *w);
                            len += 1;
                        }
                        _ => break len,
                    }
                }
            })
            .collect();
        arms.sort_unstable();
        [arms[0], arms[1], arms[2]]
    }

    // Reads the type by scanning for (v1 + q' v2)/r' in the lattice.
    fn scan_type(cone: &SurfaceCone, v1: &Vec2, v2: &Vec2) -> CyclicQuotientType {
        let r = (det(v1, v2).abs() * int(cone.lattice().n() as i64)).to_integer().to_u64().unwrap();
        if r == 1 {
            return CyclicQuotientType { r: 1, q: 0 };
        }
        let q = (0..r)
            .find(|&q| {
                let v = [(&v1[0] + &v2[0] * int(q as i64)) / int(r as i64), (&v1[1] + &v2[1] * int(q as i64)) / int(r as i64)];
                cone.lattice().contains(&v).unwrap()
            })
            .unwrap();
        CyclicQuotientType { r, q }
    }

    #[test]
    fn subdivision_examples() {
        let cone = SurfaceCone::quadrant(4, 1).unwrap();
        let s = toric_subdivide(&cone, &[rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(s.f_discrepancy, rat(-1, 2));
        assert!(s.first.is_smooth() && s.second.is_smooth());

        let smooth = SurfaceCone::quadrant(1, 0).unwrap();
        let s = toric_subdivide(&smooth, &[int(1), int(1)]).unwrap();
        assert_eq!(s.f_discrepancy, int(1));
        assert!(s.first.is_smooth() && s.second.is_smooth());

        let a1 = SurfaceCone::quadrant(2, 1).unwrap();
        let s = toric_subdivide(&a1, &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(s.f_discrepancy, int(0));
        assert!(s.first.is_smooth() && s.second.is_smooth());
    }

    #[test]
    fn subdivision_errors() {
        let cone = SurfaceCone::quadrant(4, 1).unwrap();
        assert_eq!(toric_subdivide(&cone, &[int(1), int(0)]), Err(ResolutionError::NotInterior));
        assert_eq!(toric_subdivide(&cone, &[rat(1, 2), rat(1, 2)]), Err(ResolutionError::Imprimitive));
        assert_eq!(toric_subdivide(&cone, &[rat(1, 3), rat(1, 3)]), Err(ResolutionError::NotInLattice));
    }

    #[test]
    fn quotient_types_match_scan() {
        for (r, q) in [(1u64, 0u64), (4, 1), (5, 2), (7, 3), (8, 3), (9, 2), (12, 5)] {
            let cone = SurfaceCone::quadrant(r, q).unwrap();
            assert_eq!(cone.quotient_type(&cone.rays()[0], &cone.rays()[1]).unwrap(), CyclicQuotientType { r, q });
            for num in 1..=(2 * r as i64) {
                for num2 in 1..=(2 * r as i64) {
                    let alpha = [rat(num, r as i64), rat(num2, r as i64)];
                    match cone.subdivide(&alpha) {
                        Ok(s) => {
                            assert_eq!(s.first, scan_type(&cone, &cone.rays()[0], &alpha));
                            assert_eq!(s.second, scan_type(&cone, &alpha, &cone.rays()[1]));
                            assert!(s.f_discrepancy > int(-1));
                        }
                        Err(e) => assert!(matches!(e, ResolutionError::Imprimitive | ResolutionError::NotInLattice)),
                    }
                }
            }
        }
    }

    #[test]
    fn swapping_rays_inverts_q() {
        let cone = SurfaceCone::quadrant(7, 3).unwrap();
        let [e1, e2] = cone.rays().clone();
        assert_eq!(cone.quotient_type(&e2, &e1).unwrap(), swapped_type(CyclicQuotientType { r: 7, q: 3 }));
    }
}
