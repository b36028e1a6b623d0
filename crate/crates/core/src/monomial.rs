//! Monomial ideals as staircases: exact colength, Newton-polygon integral
//! closure, the interior-point adjoint, and Hilbert-Burch matrices.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactring::{Field, Poly, PolyMatrix};

/// Minimal monomial generators `x^a y^b`, sorted with `a` decreasing and `b`
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Staircase {
    corners: Vec<(u32, u32)>,
}

/// An edge of the Newton polygon: `n · w ≥ c` on the polyhedron.
#[derive(Clone, Copy, Debug)]
struct Edge {
    n: (i64, i64),
    c: i64,
}

impl Staircase {
    /// Minimalize and sort arbitrary exponent pairs.
    pub fn new(points: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut pts: Vec<(u32, u32)> = points.into_iter().collect();
        // Sort by a ascending, then b ascending; a point survives if its b is
        // below every b seen at smaller or equal a.
        pts.sort_unstable();
        pts.dedup();
        let mut kept: Vec<(u32, u32)> = Vec::new();
        let mut best_b = u32::MAX;
        for (a, b) in pts {
            if b < best_b {
                kept.push((a, b));
                best_b = b;
            }
        }
        kept.reverse();
        Staircase { corners: kept }
    }

    /// The unit ideal.
    pub fn unit() -> Self {
        Staircase { corners: vec![(0, 0)] }
    }

    /// `m^d`.
    pub fn maximal_power(d: u32) -> Self {
        Staircase::new((0..=d).map(|b| (d - b, b)))
    }

    /// Parse `[(6,0),(5,3),(4,4),(0,6)]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad(0, "expected a bracketed list of pairs"))?;
        let mut pts = Vec::new();
        let mut rest = inner;
        while !rest.trim().is_empty() {
            let r = rest.trim_start();
            let pos = text.len() - r.len();
            let r = r.strip_prefix('(').ok_or_else(|| bad(pos, "expected '('"))?;
            let close = r.find(')').ok_or_else(|| bad(pos, "missing ')'"))?;
            let (pair, tail) = r.split_at(close);
            let mut nums = pair.split(',').map(|s| s.trim().parse::<u32>());
            let (Some(Ok(a)), Some(Ok(b)), None) = (nums.next(), nums.next(), nums.next()) else {
                return Err(bad(pos, "expected two non-negative integers"));
            };
            pts.push((a, b));
            rest = tail[1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r;
            }
        }
        if pts.is_empty() {
            return Err(bad(0, "empty staircase"));
        }
        Ok(Staircase::new(pts))
    }

    pub fn corners(&self) -> &[(u32, u32)] {
        &self.corners
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    /// Both pure powers present.
    pub fn is_primary(&self) -> bool {
        self.corners.first().is_some_and(|c| c.1 == 0) && self.corners.last().is_some_and(|c| c.0 == 0)
    }

    pub fn contains(&self, a: u32, b: u32) -> bool {
        self.corners.iter().any(|&(u, v)| u <= a && v <= b)
    }

    pub fn order(&self) -> u32 {
        self.corners.iter().map(|&(a, b)| a + b).min().unwrap_or(0)
    }

    fn require_primary(&self) -> Result<()> {
        if self.is_primary() {
            Ok(())
        } else {
            Err(Error::Precondition("staircase is not m-primary".into()))
        }
    }

    /// `λ(R/I)`: the number of monomials under the staircase.
    pub fn colength(&self) -> Result<usize> {
        self.require_primary()?;
        Ok(self.corners.windows(2).map(|w| w[0].0 as usize * (w[1].1 - w[0].1) as usize).sum())
    }

    /// Vertices of the lower convex hull, from `(0, b_max)` to `(a_max, 0)`.
    fn hull(&self) -> Vec<(i64, i64)> {
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for &(a, b) in self.corners.iter().rev() {
            let p = (a as i64, b as i64);
            while hull.len() >= 2 {
                let (o, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                // Drop q unless o -> q -> p turns counter-clockwise.
                let cross = (q.0 - o.0) * (p.1 - o.1) - (q.1 - o.1) * (p.0 - o.0);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull
    }

    fn edges(&self) -> Vec<Edge> {
        self.hull()
            .windows(2)
            .map(|w| {
                let (p, q) = (w[0], w[1]);
                let n = (p.1 - q.1, q.0 - p.0);
                Edge { n, c: n.0 * p.0 + n.1 * p.1 }
            })
            .collect()
    }

    fn bounding_box(&self) -> (u32, u32) {
        (self.corners[0].0, self.corners[self.corners.len() - 1].1)
    }

    /// Integral closure: lattice points of the Newton polyhedron.
    pub fn newton_closure(&self) -> Result<Self> {
        self.require_primary()?;
        let edges = self.edges();
        let (am, bm) = self.bounding_box();
        let mut pts = Vec::new();
        for u in 0..=am {
            for v in 0..=bm {
                let w = (u as i64, v as i64);
                if edges.iter().all(|e| e.n.0 * w.0 + e.n.1 * w.1 >= e.c) {
                    pts.push((u, v));
                }
            }
        }
        Ok(Staircase::new(pts))
    }

    pub fn is_integrally_closed(&self) -> Result<bool> {
        Ok(self.newton_closure()? == *self)
    }

    /// Adjoint (multiplier) ideal: `x^u y^v` with `(u+1, v+1)` strictly
    /// inside the Newton polyhedron.
    pub fn polyhedral_adjoint(&self) -> Result<Self> {
        self.require_primary()?;
        let edges = self.edges();
        let (am, bm) = self.bounding_box();
        let mut pts = Vec::new();
        for u in 0..=am {
            for v in 0..=bm {
                let w = (u as i64 + 1, v as i64 + 1);
                if edges.iter().all(|e| e.n.0 * w.0 + e.n.1 * w.1 > e.c) {
                    pts.push((u, v));
                }
            }
        }
        Ok(Staircase::new(pts))
    }

    /// Product of monomial ideals.
    pub fn product(&self, o: &Self) -> Self {
        Staircase::new(self.corners.iter().flat_map(|&(a, b)| o.corners.iter().map(move |&(u, v)| (a + u, b + v))))
    }

    /// The `n x (n-1)` bidiagonal matrix of consecutive syzygies; its
    /// maximal minors are checked to regenerate the ideal.
    pub fn hilbert_burch<F: Field>(&self) -> Result<PolyMatrix<F>> {
        self.require_primary()?;
        let n = self.corners.len();
        let mut m = PolyMatrix::zeros(n, n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let (a0, b0) = self.corners[i];
            let (a1, b1) = self.corners[i + 1];
            m.set(i, i, Poly::monomial(0, b1 - b0));
            m.set(i + 1, i, -&Poly::monomial(a0 - a1, 0));
        }
        if n >= 2 {
            let minors = m.minors(n - 1);
            let got = Staircase::new(minors.iter().map(|f| {
                let (_, a, b) = f.as_term().expect("minors of a bidiagonal matrix are terms");
                (a, b)
            }));
            if got != *self {
                return Err(Error::Invalid("Hilbert-Burch minors do not regenerate the ideal".into()));
            }
        }
        Ok(m)
    }

    /// Random integrally closed staircase with order `r` and colength at
    /// most `bound`. Deterministic in `seed`.
    pub fn random_ic(r: u32, bound: usize, seed: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Precondition("order must be positive".into()));
        }
        let min = (r * (r + 1) / 2) as usize;
        if bound < min {
            return Err(Error::Precondition(format!("order {r} forces colength at least {min}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let spread = rng.gen_range(0..=r + 3);
            let a_max = rng.gen_range(r..=r + spread);
            let b_max = rng.gen_range(r..=r + spread);
            let mut pts = vec![(a_max, 0), (0, b_max)];
            let b = rng.gen_range(0..=r);
            pts.push((r - b, b));
            for _ in 0..rng.gen_range(0..4) {
                let a = rng.gen_range(0..=a_max);
                let b = rng.gen_range(0..=b_max);
                if a + b >= r {
                    pts.push((a, b));
                }
            }
            let s = Staircase::new(pts).newton_closure()?;
            if s.order() == r && s.colength()? <= bound {
                return Ok(s);
            }
        }
        Err(Error::Resource("no staircase met the constraints".into()))
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.corners.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;

    fn st(s: &str) -> Staircase {
        Staircase::parse(s).unwrap()
    }

    fn brute_colength(s: &Staircase) -> usize {
        let (am, bm) = s.bounding_box();
        (0..am).flat_map(|u| (0..bm).map(move |v| (u, v))).filter(|&(u, v)| !s.contains(u, v)).count()
    }

    #[test]
    fn parse_sorts_and_minimalizes() {
        let s = st("[(0,6),(4,4),(6,0),(5,3),(5,5)]");
        assert_eq!(s.corners(), &[(6, 0), (5, 3), (4, 4), (0, 6)]);
        assert_eq!(s.to_string(), "[(6,0),(5,3),(4,4),(0,6)]");
        assert!(Staircase::parse("[(1,2),(3)]").is_err());
    }

    #[test]
    fn colengths() {
        assert_eq!(st("[(1,0),(0,1)]").colength().unwrap(), 1);
        assert_eq!(st("[(6,0),(5,3),(4,4),(0,6)]").colength().unwrap(), 31);
        assert_eq!(st("[(6,0),(4,4),(0,6)]").colength().unwrap(), 32);
        assert_eq!(Staircase::unit().colength().unwrap(), 0);
        assert!(st("[(2,0),(1,1)]").colength().is_err());
    }

    #[test]
    fn colength_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let a = rng.gen_range(1..9);
            let b = rng.gen_range(1..9);
            let mut pts = vec![(a, 0), (0, b)];
            for _ in 0..rng.gen_range(0..5) {
                pts.push((rng.gen_range(0..a), rng.gen_range(0..b)));
            }
            let s = Staircase::new(pts);
            assert_eq!(s.colength().unwrap(), brute_colength(&s));
        }
    }

    #[test]
    fn closures() {
        assert_eq!(st("[(2,0),(0,2)]").newton_closure().unwrap(), st("[(2,0),(1,1),(0,2)]"));
        assert_eq!(st("[(1,0),(0,1)]").newton_closure().unwrap(), st("[(1,0),(0,1)]"));
        assert!(st("[(2,0),(1,1),(0,2)]").is_integrally_closed().unwrap());
        assert!(!st("[(2,0),(0,2)]").is_integrally_closed().unwrap());
        // x^2 y^2 sits on the segment from (3,0) to (1,4).
        assert!(!st("[(3,0),(1,4),(0,6)]").is_integrally_closed().unwrap());
        assert!(st("[(3,0),(2,2),(1,4),(0,6)]").is_integrally_closed().unwrap());
    }

    #[test]
    fn closure_contains_reduction_of_family() {
        // J = (x^{a+b}, y^{a+b}) ⊆ I(M(a,b,c)) ⊆ closure of J.
        let (a, b, c) = (2u32, 4u32, 3u32);
        let j = Staircase::new([(a + b, 0), (0, a + b)]).newton_closure().unwrap();
        let i = Staircase::new([(a + b, 0), (0, a + b), (b, b), (a + c, c)]);
        for &(u, v) in i.corners() {
            assert!(j.contains(u, v));
        }
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        for seed in 0..30 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = rng.gen_range(1..10);
            let b = rng.gen_range(1..10);
            let pts = vec![(a, 0), (0, b), (rng.gen_range(0..a), rng.gen_range(0..b))];
            let s = Staircase::new(pts);
            let c = s.newton_closure().unwrap();
            assert_eq!(c.newton_closure().unwrap(), c);
            assert!(s.corners().iter().all(|&(u, v)| c.contains(u, v)));
        }
    }

    #[test]
    fn adjoints() {
        assert_eq!(st("[(1,0),(0,1)]").polyhedral_adjoint().unwrap(), Staircase::unit());
        assert_eq!(Staircase::maximal_power(2).polyhedral_adjoint().unwrap(), Staircase::maximal_power(1));
        // adj(m^6) = m^5 and the Example 4.2 ideal shares its closure.
        let i = st("[(6,0),(5,3),(4,4),(0,6)]");
        assert_eq!(i.newton_closure().unwrap(), Staircase::maximal_power(6));
        assert_eq!(i.polyhedral_adjoint().unwrap(), Staircase::maximal_power(5));
        assert_eq!(Staircase::maximal_power(5).colength().unwrap(), 15);
    }

    #[test]
    fn adjoint_ignores_closure() {
        for seed in 0..25 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let a = rng.gen_range(1..10);
            let b = rng.gen_range(1..10);
            let s = Staircase::new([(a, 0), (0, b), (rng.gen_range(0..a), rng.gen_range(0..b))]);
            assert_eq!(s.polyhedral_adjoint().unwrap(), s.newton_closure().unwrap().polyhedral_adjoint().unwrap());
        }
    }

    #[test]
    fn hilbert_burch_shapes() {
        let m: PolyMatrix<Gf> = st("[(1,0),(0,1)]").hilbert_burch().unwrap();
        assert_eq!(m.column(0), vec![Poly::y(), -&Poly::x()]);
        let m2: PolyMatrix<Gf> = Staircase::maximal_power(2).hilbert_burch().unwrap();
        assert_eq!((m2.rows(), m2.cols()), (3, 2));
    }

    #[test]
    fn random_ic_contract() {
        for seed in 0..20 {
            let s = Staircase::random_ic(1, 12, seed).unwrap();
            assert_eq!(s.len(), 2);
            assert!(s.corners()[0] == (1, 0) || s.corners()[1] == (0, 1));
            let t = Staircase::random_ic(3, 20, seed).unwrap();
            assert!(t.is_integrally_closed().unwrap());
            assert_eq!(t.order(), 3);
            assert!(t.colength().unwrap() <= 20);
        }
        assert_eq!(Staircase::random_ic(2, 10, 7).unwrap(), Staircase::random_ic(2, 10, 7).unwrap());
    }
}
