//! Truncated local rings `R_N = R/m^N` and free modules `R_N^s`.
//!
//! Coordinates are ordered by total degree first, so the lowest nonzero index
//! of a vector is an initial term for the m-adic filtration. Multiplication by
//! `x` or `y` is an index shift that preserves this order, which keeps
//! [`Echelon`] pivots meaningful as leading monomials.

use std::collections::VecDeque;
use std::ops::Range;

use super::field::Field;
use super::linalg::{Echelon, SparseVec};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Hard ceiling on the truncation degree even when an a-priori bound asks
/// for more.
pub const HARD_DEGREE_LIMIT: usize = 600;

/// Monomial basis `{x^a y^b : a + b < N}` of `R_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncCtx {
    n: usize,
}

impl TruncCtx {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "truncation degree must be positive");
        TruncCtx { n }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn index(&self, a: u32, b: u32) -> Option<usize> {
        let d = (a + b) as usize;
        (d < self.n).then(|| d * (d + 1) / 2 + b as usize)
    }

    pub fn monomial(&self, i: usize) -> (u32, u32) {
        let mut d = 0;
        while (d + 1) * (d + 2) / 2 <= i {
            d += 1;
        }
        let b = i - d * (d + 1) / 2;
        ((d - b) as u32, b as u32)
    }
}

/// Dense coefficient vector of `f mod m^N`.
pub fn trunc<F: Field>(f: &Poly<F>, ctx: &TruncCtx) -> Vec<F> {
    let mut v = vec![F::zero(); ctx.dimension()];
    for (&(a, b), c) in f.terms() {
        if let Some(i) = ctx.index(a, b) {
            v[i] = c.clone();
        }
    }
    v
}

/// Polynomial with the given truncated coefficients.
pub fn untrunc<F: Field>(v: &[F], ctx: &TruncCtx) -> Poly<F> {
    Poly::from_terms(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (ctx.monomial(i), c.clone())))
}

/// Coordinates of `R_N^s`: index `s * (d(d+1)/2 + b) + comp` for `x^a y^b`
/// in component `comp`, `d = a + b`.
#[derive(Clone, Debug)]
pub struct FreeLayout {
    rank: usize,
    n: usize,
    mono_deg: Vec<u32>,
}

impl FreeLayout {
    pub fn new(rank: usize, n: usize) -> Self {
        assert!(rank > 0 && n > 0);
        let mut mono_deg = Vec::with_capacity(n * (n + 1) / 2);
        for d in 0..n {
            mono_deg.extend(std::iter::repeat_n(d as u32, d + 1));
        }
        FreeLayout { rank, n, mono_deg }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rank * self.mono_deg.len()
    }

    pub fn index(&self, a: u32, b: u32, comp: usize) -> Option<u32> {
        let d = (a + b) as usize;
        (d < self.n).then(|| (self.rank * (d * (d + 1) / 2 + b as usize) + comp) as u32)
    }

    pub fn decode(&self, idx: u32) -> (u32, u32, usize) {
        let t = idx as usize / self.rank;
        let comp = idx as usize % self.rank;
        let d = self.mono_deg[t] as usize;
        let b = t - d * (d + 1) / 2;
        ((d - b) as u32, b as u32, comp)
    }

    pub fn index_degree(&self, idx: u32) -> usize {
        self.mono_deg[idx as usize / self.rank] as usize
    }

    /// Index range of the coordinates of total degree `d`.
    pub fn degree_range(&self, d: usize) -> Range<usize> {
        self.rank * d * (d + 1) / 2..self.rank * (d + 1) * (d + 2) / 2
    }

    /// Multiply a vector by `x` (`var = 0`) or `y` (`var = 1`), truncating.
    pub fn shift<F: Field>(&self, v: &SparseVec<F>, var: u8) -> SparseVec<F> {
        let mut out = Vec::with_capacity(v.len());
        for (i, c) in v {
            let d = self.index_degree(*i);
            if d + 1 >= self.n {
                break;
            }
            let step = self.rank * (d + 1 + var as usize);
            out.push((*i + step as u32, c.clone()));
        }
        out
    }

    /// Truncation of a column `(f_1, ..., f_s)` times `x^a y^b`.
    pub fn vectorize<F: Field>(&self, col: &[Poly<F>], a: u32, b: u32) -> SparseVec<F> {
        debug_assert_eq!(col.len(), self.rank);
        let mut out: SparseVec<F> = Vec::new();
        for (comp, f) in col.iter().enumerate() {
            for (&(u, v), c) in f.terms() {
                if let Some(i) = self.index(u + a, v + b, comp) {
                    out.push((i, c.clone()));
                }
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Inverse of [`FreeLayout::vectorize`] with `a = b = 0`.
    pub fn columnize<F: Field>(&self, v: &SparseVec<F>) -> Vec<Poly<F>> {
        let mut col = vec![Poly::zero(); self.rank];
        for (i, c) in v {
            let (a, b, comp) = self.decode(*i);
            col[comp].add_term((a, b), c.clone());
        }
        col
    }
}

/// The `R`-submodule of `R_N^s` spanned by `gens`, as a semi-echelon basis.
///
/// Each newly stored row `w` queues `x w` and `y w`; since stored rows span
/// the same space as the processed vectors, the result is closed under both
/// variables.
pub fn span_closure<F: Field>(layout: &FreeLayout, gens: impl IntoIterator<Item = SparseVec<F>>) -> Echelon<F> {
    let mut ech = Echelon::new(layout.dim());
    let mut queue: VecDeque<SparseVec<F>> = gens.into_iter().collect();
    while let Some(v) = queue.pop_front() {
        if let Some(w) = ech.insert(v) {
            let (wx, wy) = (layout.shift(w, 0), layout.shift(w, 1));
            if !wx.is_empty() {
                queue.push_back(wx);
            }
            if !wy.is_empty() {
                queue.push_back(wy);
            }
        }
    }
    ech
}

/// Search parameters for certified truncation.
#[derive(Clone, Copy, Debug)]
pub struct TruncPlan {
    /// First truncation degree tried.
    pub start: usize,
    /// Largest truncation degree tried without an a-priori bound.
    pub cap: usize,
    /// Known `d` with `m^d F` inside the module, if any; lifts the cap to
    /// `d + 1`.
    pub bound: Option<usize>,
}

impl TruncPlan {
    pub fn new(start: usize, cap: usize) -> Self {
        TruncPlan { start: start.max(2), cap, bound: None }
    }

    pub fn with_bound(mut self, bound: Option<usize>) -> Self {
        self.bound = bound;
        self
    }

    fn limit(&self) -> usize {
        match self.bound {
            Some(d) => (d + 1).min(HARD_DEGREE_LIMIT),
            None => self.cap,
        }
    }
}

/// A submodule `M` of `F = R^s` of finite colength, captured in a truncation
/// deep enough to contain the Nakayama certificate `m^d F ⊆ M`.
#[derive(Clone, Debug)]
pub struct Certified<F: Field> {
    layout: FreeLayout,
    echelon: Echelon<F>,
    cert_degree: usize,
    length: usize,
}

impl<F: Field> Certified<F> {
    /// Certify the submodule generated by `cols` (each a column of `rank`
    /// polynomials).
    pub fn new(rank: usize, cols: &[Vec<Poly<F>>], plan: TruncPlan) -> Result<Self> {
        let limit = plan.limit();
        let mut n = plan.start.min(limit).max(1);
        loop {
            let layout = FreeLayout::new(rank, n);
            let echelon = span_closure(&layout, cols.iter().map(|c| layout.vectorize(c, 0, 0)));
            if let Some(d) = first_full_degree(&layout, &echelon) {
                let below = layout.degree_range(d).start;
                let length = below - echelon.pivots_in(0..below);
                return Ok(Certified { layout, echelon, cert_degree: d, length });
            }
            if n >= limit {
                return Err(Error::ExceedsCap { cap: limit });
            }
            n = (n + n / 2).max(n + 1).min(limit);
        }
    }

    /// `λ(F/M)`.
    pub fn length(&self) -> usize {
        self.length
    }

    /// Smallest `d` found with `m^d F ⊆ M`.
    pub fn cert_degree(&self) -> usize {
        self.cert_degree
    }

    /// Truncation degree at which the certificate fired (`cert_degree + 1`).
    pub fn certified_at(&self) -> usize {
        self.cert_degree + 1
    }

    pub fn layout(&self) -> &FreeLayout {
        &self.layout
    }

    pub fn echelon(&self) -> &Echelon<F> {
        &self.echelon
    }

    /// Membership of a column in `M`. Exact because everything of degree at
    /// least `cert_degree` lies in `M`.
    pub fn contains(&self, col: &[Poly<F>]) -> bool {
        let v = self.layout.vectorize(col, 0, 0);
        let rem = self.echelon.reduce(v);
        rem.first().is_none_or(|(i, _)| self.layout.index_degree(*i) >= self.cert_degree)
    }
}

fn first_full_degree<F: Field>(layout: &FreeLayout, ech: &Echelon<F>) -> Option<usize> {
    (0..layout.degree()).find(|&d| {
        let r = layout.degree_range(d);
        ech.pivots_in(r.clone()) == r.len()
    })
}

/// Basis of the kernel of `R_N^n → R_N^s`, `e_j ↦ cols[j]`, as columns of
/// `n` polynomials truncated at degree `N`.
pub fn truncated_kernel<F: Field>(rank: usize, cols: &[Vec<Poly<F>>], n: usize) -> Vec<Vec<Poly<F>>> {
    let target = FreeLayout::new(rank, n);
    let domain = FreeLayout::new(cols.len(), n);
    let offset = target.dim() as u32;
    let mut ech = Echelon::new(target.dim() + domain.dim());
    let mut kernel = Vec::new();
    for d in 0..n as u32 {
        for b in 0..=d {
            let a = d - b;
            for (j, col) in cols.iter().enumerate() {
                let mut v = target.vectorize(col, a, b);
                let tag = domain.index(a, b, j).expect("degree below N");
                v.push((offset + tag, F::one()));
                if let Some(w) = ech.insert(v) {
                    if w[0].0 >= offset {
                        let tagged: SparseVec<F> = w.iter().map(|(i, c)| (*i - offset, c.clone())).collect();
                        kernel.push(domain.columnize(&tagged));
                    }
                }
            }
        }
    }
    kernel
}
