//! m-primary ideals of `R`: colength, order, products, membership,
//! Hilbert-Samuel and mixed multiplicities.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactring::trunc::Certified;
use crate::exactring::{Field, Poly};
use crate::monomial::Staircase;
use crate::session::Session;

/// An ideal of `R` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<F: Field> {
    gens: Vec<Poly<F>>,
    /// A known `d` with `m^d ⊆ I`, used to lift the truncation cap.
    hint: Option<usize>,
}

/// `λ(R/I)` together with the truncation degree that certified it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Colength {
    pub value: usize,
    pub certified_at: usize,
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped; at least one must remain.
    pub fn new(gens: Vec<Poly<F>>) -> Result<Self> {
        let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(Error::Invalid("the zero ideal is not supported".into()));
        }
        Ok(Ideal { gens, hint: None })
    }

    pub fn unit() -> Self {
        Ideal { gens: vec![Poly::one()], hint: Some(0) }
    }

    /// The maximal ideal `(x, y)`.
    pub fn maximal() -> Self {
        Ideal { gens: vec![Poly::x(), Poly::y()], hint: Some(1) }
    }

    /// Comma-separated polynomials, e.g. `x^6, x^4*y^4, y^6`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut offset = 0;
        for piece in text.split(',') {
            let g = Poly::parse(piece).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                other => other,
            })?;
            gens.push(g);
            offset += piece.len() + 1;
        }
        Self::new(gens)
    }

    pub fn from_staircase(s: &Staircase) -> Self {
        let gens = s.corners().iter().map(|&(a, b)| Poly::monomial(a, b)).collect();
        Ideal { gens, hint: None }
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    /// Record that `m^d ⊆ I`.
    pub fn with_hint(mut self, d: usize) -> Self {
        self.hint = Some(d);
        self
    }

    pub fn hint(&self) -> Option<usize> {
        self.hint
    }

    /// True when every generator is a single term.
    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.num_terms() == 1)
    }

    /// The monomial ideal with the same generators, if all are terms.
    pub fn to_staircase(&self) -> Option<Staircase> {
        if !self.is_monomial() {
            return None;
        }
        let pts = self.gens.iter().map(|g| {
            let (_, a, b) = g.as_term().expect("single term");
            (a, b)
        });
        Some(Staircase::new(pts))
    }

    /// Drop redundant generators when the ideal is monomial; otherwise only
    /// remove exact duplicates.
    pub fn simplified(&self) -> Self {
        if let Some(s) = self.to_staircase() {
            let mut out = Self::from_staircase(&s);
            out.hint = self.hint;
            return out;
        }
        let mut seen = BTreeSet::new();
        let gens = self.gens.iter().filter(|g| seen.insert(format!("{g}"))).cloned().collect();
        Ideal { gens, hint: self.hint }
    }

    pub fn order(&self) -> u32 {
        self.gens.iter().filter_map(|g| g.order()).min().expect("nonzero ideal")
    }

    pub(crate) fn certify(&self, s: &Session) -> Result<Certified<F>> {
        let cols: Vec<Vec<Poly<F>>> = self.gens.iter().map(|g| vec![g.clone()]).collect();
        let start = self.gens.iter().filter_map(|g| g.order()).max().unwrap_or(0) as usize + 1;
        Certified::new(1, &cols, s.plan(start, self.hint))
    }

    /// Certified `λ(R/I)`.
    pub fn colength(&self, s: &Session) -> Result<Colength> {
        let c = self.certify(s)?;
        Ok(Colength { value: c.length(), certified_at: c.certified_at() })
    }

    pub fn contains(&self, f: &Poly<F>, s: &Session) -> Result<bool> {
        Ok(self.certify(s)?.contains(std::slice::from_ref(f)))
    }

    fn contains_all(&self, other: &Self, s: &Session) -> Result<bool> {
        let c = self.certify(s)?;
        Ok(other.gens.iter().all(|g| c.contains(std::slice::from_ref(g))))
    }

    /// `J ⊆ I`.
    pub fn contains_ideal(&self, j: &Self, s: &Session) -> Result<bool> {
        self.contains_all(j, s)
    }

    /// Equality as ideals (mutual containment).
    pub fn equals(&self, o: &Self, s: &Session) -> Result<bool> {
        Ok(self.contains_all(o, s)? && o.contains_all(self, s)?)
    }

    /// Generators `g h` for all pairs.
    pub fn product(&self, o: &Self, s: &Session) -> Result<Self> {
        let count = self.gens.len() * o.gens.len();
        if count > s.max_products {
            return Err(Error::Resource(format!("{count} generator products exceed {}", s.max_products)));
        }
        let mut gens = Vec::with_capacity(count);
        for g in &self.gens {
            for h in &o.gens {
                gens.push(g * h);
            }
        }
        let hint = self.hint.zip(o.hint).map(|(a, b)| a + b);
        Ok(Ideal { gens, hint }.simplified())
    }

    /// `I^p` from degree-`p` products over multisets of generators.
    pub fn power(&self, p: u32, s: &Session) -> Result<Self> {
        if p == 0 {
            return Ok(Self::unit());
        }
        let count = multiset_count(self.gens.len(), p as usize);
        if count > s.max_products as u128 {
            return Err(Error::Resource(format!("{count} generator products exceed {}", s.max_products)));
        }
        let mut gens = Vec::new();
        multiset_products(&self.gens, p as usize, 0, &Poly::one(), &mut gens);
        let hint = self.hint.map(|d| d * p as usize);
        Ok(Ideal { gens, hint }.simplified())
    }

    /// `I^p J^q` with the a-priori containment `m^{p d_I + q d_J}` recorded.
    pub(crate) fn mixed_power(&self, p: u32, o: &Self, q: u32, s: &Session) -> Result<Self> {
        self.power(p, s)?.product(&o.power(q, s)?, s)
    }

    /// `λ(R/(g1, g2))` for one random pair of combinations of the generators,
    /// or `None` when the pair is not `m`-primary. A generic pair generates a
    /// reduction, so its colength is `e(I) ≤ d²` and `m^{d²}` lies in it.
    fn generic_pair_length(&self, d: usize, rng: &mut ChaCha8Rng, s: &Session) -> Result<Option<usize>> {
        let combo =
            |rng: &mut ChaCha8Rng| self.gens.iter().fold(Poly::zero(), |acc, g| &acc + &g.scale(&F::random(rng)));
        let pair = Ideal { gens: vec![combo(rng), combo(rng)], hint: Some(d * d) };
        if pair.gens.iter().any(|g| g.is_zero()) {
            return Ok(None);
        }
        match pair.colength(s) {
            Ok(c) => Ok(Some(c.value)),
            Err(Error::ExceedsCap { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Hilbert-Samuel multiplicity `e(I)`: the least `λ(R/(g1, g2))` over
    /// `s.samples` random pairs, optionally cross-checked against the second
    /// difference of `p ↦ λ(R/I^p)`.
    pub fn hs_multiplicity(&self, seed: u64, s: &Session) -> Result<usize> {
        if self.gens.iter().any(|g| g.is_unit()) {
            return Ok(0);
        }
        let d = self.certify(s)?.cert_degree();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<usize> = None;
        for _ in 0..s.samples.max(1) {
            if let Some(v) = self.generic_pair_length(d, &mut rng, s)? {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        let Some(e) = best else {
            // Either not m-primary (the colength reports it) or unlucky.
            self.colength(s)?;
            return Err(Error::Genericity {
                seeds: vec![seed],
                detail: "every sampled pair shared a component".into(),
            });
        };
        if s.cross_check {
            let other = self.hilbert_multiplicity(s)?;
            if other != e {
                return Err(Error::Genericity {
                    seeds: vec![seed],
                    detail: format!("generic pair gives {e}, Hilbert function gives {other}"),
                });
            }
        }
        Ok(e)
    }

    /// `e(I)` as the stabilized second difference of `p ↦ λ(R/I^p)`.
    pub fn hilbert_multiplicity(&self, s: &Session) -> Result<usize> {
        let d = self.certify(s)?.cert_degree();
        let base = self.clone().with_hint(d);
        let cap = s.mixed_cap as u32 + 3;
        let mut lens = vec![0usize];
        for p in 1..=cap {
            lens.push(base.power(p, s)?.colength(s)?.value);
            let k = lens.len();
            if k >= 5 {
                let d2 = |i: usize| lens[i + 2] + lens[i] - 2 * lens[i + 1];
                if d2(k - 4) == d2(k - 3) {
                    return Ok(d2(k - 3));
                }
            }
        }
        Err(Error::Inconclusive(format!("Hilbert function second difference not stable by p = {cap}")))
    }

    /// Rees' criterion: `J ⊆ I` is a reduction iff `e(J) = e(I)`.
    pub fn is_reduction_of(&self, i: &Self, seed: u64, s: &Session) -> Result<bool> {
        if !i.contains_ideal(self, s)? {
            return Err(Error::Precondition("the candidate reduction is not contained in the ideal".into()));
        }
        Ok(self.hs_multiplicity(seed, s)? == i.hs_multiplicity(seed, s)?)
    }
}

/// `e₁(I|J)` from the stabilized mixed second difference of
/// `(p, q) ↦ λ(R/I^p J^q)` along the diagonal.
pub fn mixed_multiplicity<F: Field>(i: &Ideal<F>, j: &Ideal<F>, s: &Session) -> Result<usize> {
    let di = i.certify(s)?.cert_degree();
    let dj = j.certify(s)?.cert_degree();
    let (i, j) = (i.clone().with_hint(di), j.clone().with_hint(dj));
    let len = |p: u32, q: u32| -> Result<usize> { Ok(i.mixed_power(p, &j, q, s)?.colength(s)?.value) };
    let delta = |k: u32| -> Result<i64> {
        Ok(len(k + 1, k + 1)? as i64 - len(k + 1, k)? as i64 - len(k, k + 1)? as i64 + len(k, k)? as i64)
    };
    let cap = s.mixed_cap as u32;
    let mut prev = delta(1)?;
    for k in 2..cap {
        let cur = delta(k)?;
        if cur == prev {
            return u64::try_from(cur)
                .map(|v| v as usize)
                .map_err(|_| Error::Invalid("negative mixed difference".into()));
        }
        prev = cur;
    }
    Err(Error::Resource(format!("mixed difference not stable with p, q ≤ {cap}")))
}

fn multiset_count(n: usize, p: usize) -> u128 {
    // C(n + p - 1, p)
    let mut acc: u128 = 1;
    for i in 0..p as u128 {
        acc = acc * (n as u128 + i) / (i + 1);
    }
    acc
}

fn multiset_products<F: Field>(gens: &[Poly<F>], left: usize, start: usize, acc: &Poly<F>, out: &mut Vec<Poly<F>>) {
    if left == 0 {
        out.push(acc.clone());
        return;
    }
    for k in start..gens.len() {
        multiset_products(gens, left - 1, k, &(acc * &gens[k]), out);
    }
}

impl<F: Field> fmt::Display for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;

    fn id(s: &str) -> Ideal<Gf> {
        Ideal::parse(s).unwrap()
    }

    fn ses() -> Session {
        Session::default()
    }

    #[test]
    fn colength_basics() {
        assert_eq!(Ideal::<Gf>::maximal().colength(&ses()).unwrap().value, 1);
        for a in 1..=8 {
            for b in 1..=8 {
                let i = id(&format!("x^{a}, y^{b}"));
                assert_eq!(i.colength(&ses()).unwrap().value, a * b);
            }
        }
        assert_eq!(id("x^6, x^5*y^3, x^4*y^4, y^6").colength(&ses()).unwrap().value, 31);
    }

    #[test]
    fn colength_reports_certification_degree() {
        let c = id("x^2, y^3").colength(&ses()).unwrap();
        assert_eq!(c.value, 6);
        assert_eq!(c.certified_at, 5);
    }

    #[test]
    fn non_primary_exceeds_cap() {
        let s = ses().with_trunc_cap(16);
        assert_eq!(id("x^2, x*y").colength(&s).unwrap_err(), Error::ExceedsCap { cap: 16 });
    }

    #[test]
    fn order_of_generators() {
        assert_eq!(Ideal::<Gf>::maximal().order(), 1);
        assert_eq!(id("x^2, x*y, y^3").order(), 2);
    }

    #[test]
    fn products_and_powers() {
        let s = ses();
        let p = id("x").product(&id("y"), &s).unwrap();
        assert_eq!(p.gens(), id("x*y").gens());
        let m2 = Ideal::<Gf>::maximal().power(2, &s).unwrap();
        assert!(m2.equals(&id("x^2, x*y, y^2"), &s).unwrap());
        assert_eq!(Ideal::<Gf>::maximal().power(0, &s).unwrap(), Ideal::unit());
    }

    #[test]
    fn membership() {
        let s = ses();
        assert!(!id("x^2, y^2").contains(&Poly::parse("x*y").unwrap(), &s).unwrap());
        assert!(id("x^2, x*y, y^2").contains(&Poly::parse("x*y").unwrap(), &s).unwrap());
        assert!(id("x + y^2, y^3").equals(&id("x + y^2 + x*y^3, y^3, x*y"), &s).unwrap());
    }

    #[test]
    fn multiplicities() {
        let s = ses().with_cross_check(true);
        assert_eq!(Ideal::<Gf>::maximal().hs_multiplicity(1, &s).unwrap(), 1);
        assert_eq!(id("x^2, x*y, y^2").hs_multiplicity(1, &s).unwrap(), 4);
        assert_eq!(id("x^6, x^5*y^3, x^4*y^4, y^6").hs_multiplicity(1, &s).unwrap(), 36);
    }

    #[test]
    fn reductions() {
        let s = ses();
        let m2 = id("x^2, x*y, y^2");
        assert!(id("x^2, y^2").is_reduction_of(&m2, 3, &s).unwrap());
        assert!(m2.is_reduction_of(&m2, 3, &s).unwrap());
        // x^3, y^3 lie in m^2 but have multiplicity 9.
        assert!(!id("x^3, y^3").is_reduction_of(&m2, 3, &s).unwrap());
        assert!(matches!(id("x, y^3").is_reduction_of(&m2, 3, &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn mixed_of_maximal_ideal() {
        let m = Ideal::<Gf>::maximal();
        assert_eq!(mixed_multiplicity(&m, &m, &ses()).unwrap(), 1);
    }

    #[test]
    fn parse_error_position_is_global() {
        match Ideal::<Gf>::parse("x, 3x").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 4),
            e => panic!("{e}"),
        }
    }
}
