//! Reductions and Buchsbaum-Rim multiplicities of modules, integral-closure
//! membership, and identities in symmetric powers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactring::{Field, Matrix, Poly};
use crate::ideals::Ideal;
use crate::modlat::Module;
use crate::session::Session;

/// A minimal reduction `N` of `M` with the checks that were run.
#[derive(Clone, Debug)]
pub struct ReductionCertificate<F: Field> {
    /// `r + 1` generators, combinations of the generators of `M`.
    pub n: Module<F>,
    /// The `n x (r+1)` scalar matrix expressing `N` through `M`.
    pub combination: Matrix<F>,
    pub seeds: Vec<u64>,
    /// `λ(F/N) < ∞`, `N ⊆ mF` and `μ(N) = r + 1`.
    pub parameter_module: bool,
    /// `e(I(N)) = e(I(M))`.
    pub reduction_verified: bool,
    /// `e(I(M))`, which bounds `λ(F/N)` and the colength of `I(N)`.
    pub e_ideal: usize,
}

fn in_maximal_times_free<F: Field>(m: &Module<F>) -> bool {
    m.columns().iter().flatten().all(|f| f.constant_term().is_zero())
}

/// Random minimal reduction: `r + 1` generic combinations of the generators,
/// resampled until the parameter-module and reduction checks pass.
pub fn minimal_reduction<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<ReductionCertificate<F>> {
    if !in_maximal_times_free(m) {
        return Err(Error::Precondition("module has a unit entry; split free summands first".into()));
    }
    let r = m.rank();
    let n = m.num_gens();
    if n < r + 1 {
        return Err(Error::Precondition(format!("{n} generators cannot give a reduction of rank {r}")));
    }
    let e_ideal = m.ideal()?.hs_multiplicity(seed, s)?;
    let mut seeds = Vec::new();
    for attempt in 0..s.retries.max(1) as u64 {
        let sd = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        seeds.push(sd);
        let combination = if n == r + 1 {
            Matrix::identity(n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(sd);
            Matrix::from_rows((0..n).map(|_| (0..=r).map(|_| F::random(&mut rng)).collect()).collect())
        };
        let cand = m.combine(&combination).with_hint(e_ideal);
        let i_n = cand.ideal()?.with_hint(e_ideal);
        let reduction_verified = i_n.hs_multiplicity(sd, s)? == e_ideal;
        if !reduction_verified {
            continue;
        }
        let finite = cand.colength(s).is_ok();
        let parameter_module = finite && cand.min_gens(s)? == r + 1;
        if parameter_module {
            return Ok(ReductionCertificate {
                n: cand,
                combination,
                seeds,
                parameter_module,
                reduction_verified,
                e_ideal,
            });
        }
    }
    Err(Error::Genericity { seeds, detail: "no sampled combination passed the reduction checks".into() })
}

/// `e(M) = λ(R/I(N))` for a certified minimal reduction `N`; also checks
/// `λ(F/N) = λ(R/I(N))` and agreement across two seeds. Free summands are
/// split off first.
pub fn br_multiplicity<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<usize> {
    let (core, _) = m.split_free();
    if core.rank() == 0 {
        return Ok(0);
    }
    let mut values = Vec::new();
    let seeds = [seed, seed ^ 0x0bad_cafe_f00d];
    for &sd in &seeds {
        let cert = minimal_reduction(&core, sd, s)?;
        let e = br_from_certificate(&cert, s)?;
        values.push(e);
    }
    if values[0] != values[1] {
        return Err(Error::Genericity {
            seeds: seeds.to_vec(),
            detail: format!("reductions disagree: {} vs {}", values[0], values[1]),
        });
    }
    Ok(values[0])
}

/// `λ(R/I(N))`, checked against `λ(F/N)`.
pub fn br_from_certificate<F: Field>(cert: &ReductionCertificate<F>, s: &Session) -> Result<usize> {
    let e = cert.n.ideal()?.with_hint(cert.e_ideal).colength(s)?.value;
    let fn_len = cert.n.colength(s)?;
    if e != fn_len {
        return Err(Error::Genericity {
            seeds: cert.seeds.clone(),
            detail: format!("λ(R/I(N)) = {e} but λ(F/N) = {fn_len}"),
        });
    }
    Ok(e)
}

/// Exponent vectors of degree `p` in `r` variables, in a fixed order.
fn sym_basis(r: usize, p: usize) -> Vec<Vec<u16>> {
    fn rec(i: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k as u16;
            rec(i + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, p, &mut vec![0; r], &mut out);
    out
}

/// Product of columns viewed as linear forms `Σ f_i T_i`, as a map from
/// exponent vectors to coefficients.
fn form_product<F: Field>(cols: &[&Vec<Poly<F>>]) -> BTreeMap<Vec<u16>, Poly<F>> {
    let r = cols.first().map_or(0, |c| c.len());
    let mut acc: BTreeMap<Vec<u16>, Poly<F>> = BTreeMap::new();
    acc.insert(vec![0; r], Poly::one());
    for col in cols {
        let mut next: BTreeMap<Vec<u16>, Poly<F>> = BTreeMap::new();
        for (alpha, c) in &acc {
            for (i, f) in col.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let mut beta = alpha.clone();
                beta[i] += 1;
                let t = c * f;
                let slot = next.entry(beta).or_insert_with(Poly::zero);
                *slot = &*slot + &t;
            }
        }
        acc = next.into_iter().filter(|(_, f)| !f.is_zero()).collect();
    }
    acc
}

fn multisets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

/// The submodule of `Sym^p F` generated by products `g · f_{j1} ⋯ f_{jp}`
/// where `f` runs over the columns of `m` and `g` over `prefix` (or 1).
fn sym_module<F: Field>(m: &Module<F>, p: usize, prefix: Option<&Module<F>>, s: &Session) -> Result<Module<F>> {
    let r = m.rank();
    let total = p + usize::from(prefix.is_some());
    let count = binomial(m.num_gens() + p - 1, p) * prefix.map_or(1, |n| n.num_gens() as u128);
    if count > s.max_products as u128 {
        return Err(Error::Resource(format!("{count} symmetric-power generators exceed {}", s.max_products)));
    }
    let basis = sym_basis(r, total);
    let index: BTreeMap<&Vec<u16>, usize> = basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let heads: Vec<Option<&Vec<Poly<F>>>> = match prefix {
        Some(n) => n.columns().iter().map(Some).collect(),
        None => vec![None],
    };
    let mut cols = Vec::new();
    for head in &heads {
        for ms in multisets(m.num_gens(), p) {
            let mut factors: Vec<&Vec<Poly<F>>> = ms.iter().map(|&j| &m.columns()[j]).collect();
            if let Some(h) = head {
                factors.push(h);
            }
            let prod = form_product(&factors);
            let mut col = vec![Poly::zero(); basis.len()];
            for (alpha, f) in prod {
                col[index[&alpha]] = f;
            }
            if col.iter().any(|f| !f.is_zero()) {
                cols.push(col);
            }
        }
    }
    if cols.is_empty() {
        return Err(Error::Invalid("symmetric power has no nonzero generators".into()));
    }
    Module::from_columns(basis.len(), cols)
}

/// `λ(Sym^p F / M^p)`.
pub fn sym_power_length<F: Field>(m: &Module<F>, p: usize, s: &Session) -> Result<usize> {
    if p == 0 {
        return Ok(0);
    }
    let d = m.cert_degree(s)?;
    // m^d F ⊆ M gives m^{pd} Sym^p F ⊆ M^p.
    sym_module(m, p, None, s)?.with_hint(p * d).colength(s)
}

/// `e(M)` as the stabilized `(r+1)`-st difference of `p ↦ λ(Sym^p F/M^p)`.
pub fn br_limit_multiplicity<F: Field>(m: &Module<F>, pmax: usize, s: &Session) -> Result<usize> {
    let r = m.rank();
    if pmax < r + 3 {
        return Err(Error::Precondition(format!("pmax must be at least r + 3 = {}", r + 3)));
    }
    let k = r + 1;
    // Differences use L(p), ..., L(p + k) with p >= 1.
    let mut lens: Vec<i128> = vec![0];
    let diff = |lens: &[i128], p: usize| -> i128 {
        (0..=k)
            .map(|i| {
                let sign = if (k - i).is_multiple_of(2) { 1 } else { -1 };
                sign * binomial(k, i) as i128 * lens[p + i]
            })
            .sum()
    };
    let mut prev: Option<i128> = None;
    for p in 1..=pmax {
        lens.push(sym_power_length(m, p, s)? as i128);
        if p > k {
            let cur = diff(&lens, p - k);
            if prev == Some(cur) {
                return usize::try_from(cur).map_err(|_| Error::Invalid("negative leading coefficient".into()));
            }
            prev = Some(cur);
        }
    }
    Err(Error::Inconclusive(format!("difference not stable by p = {pmax}; raise pmax")))
}

/// `f ∈ M̄` iff `I(M)` is a reduction of `I(M + Rf)`; the containment
/// `I(M) ⊆ I(M + Rf)` holds because every minor of `M` is a minor of
/// `M + Rf`.
pub fn closure_member<F: Field>(m: &Module<F>, f: &[Poly<F>], seed: u64, s: &Session) -> Result<bool> {
    let e = m.ideal()?.hs_multiplicity(seed, s)?;
    closure_member_given(m, f, e, seed, s)
}

fn closure_member_given<F: Field>(m: &Module<F>, f: &[Poly<F>], e: usize, seed: u64, s: &Session) -> Result<bool> {
    if f.iter().all(|g| g.is_zero()) {
        return Ok(true);
    }
    let big = m.adjoin(f.to_vec()).ideal()?;
    Ok(big.hs_multiplicity(seed, s)? == e)
}

/// Status of an integral-closedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IcStatus<F: Field> {
    /// `M = M̄`, proven.
    Certified,
    /// An element of `M̄ \ M`.
    NotClosed(Vec<Poly<F>>),
    Unknown,
}

impl<F: Field> IcStatus<F> {
    pub fn label(&self) -> &'static str {
        match self {
            IcStatus::Certified => "certified",
            IcStatus::NotClosed(_) => "witness_not_closed",
            IcStatus::Unknown => "unknown",
        }
    }
}

/// How much of [`closure_approx`] is proven.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// `M⁺ = M̄`.
    Certified,
    /// `M⁺ ≠ M`, so `M` is not integrally closed.
    WitnessedNotClosed,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ClosureApprox<F: Field> {
    pub module: Module<F>,
    pub exact: Exactness,
    /// Elements adjoined to `M`, each in `M̄ \ M`.
    pub witnesses: Vec<Vec<Poly<F>>>,
}

/// `M ⊆ M⁺ ⊆ M̄`. Direct sums of monomial ideals are closed componentwise
/// (exact); otherwise monomial elements `x^a y^b T_i` with `a + b ≤
/// degree_bound` are probed, followed by a few random binomial probes.
pub fn closure_approx<F: Field>(m: &Module<F>, degree_bound: u32, seed: u64, s: &Session) -> Result<ClosureApprox<F>> {
    if let Some(parts) = m.monomial_summands() {
        let mut closed = Vec::with_capacity(parts.len());
        let mut witnesses = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            let st = part.to_staircase().expect("monomial summand");
            let cl = st.newton_closure()?;
            for &(a, b) in cl.corners() {
                if !st.contains(a, b) {
                    let mut col = vec![Poly::zero(); m.rank()];
                    col[i] = Poly::monomial(a, b);
                    witnesses.push(col);
                }
            }
            closed.push(Ideal::from_staircase(&cl));
        }
        let module = Module::from_ideals(&closed);
        return Ok(ClosureApprox { module, exact: Exactness::Certified, witnesses });
    }

    let e = m.ideal()?.hs_multiplicity(seed, s)?;
    let d = m.cert_degree(s)?;
    let bound = degree_bound.min(d.saturating_sub(1) as u32);
    let mut plus = m.clone().with_hint(d);
    let mut witnesses = Vec::new();
    let consider = |f: Vec<Poly<F>>, plus: &mut Module<F>, w: &mut Vec<Vec<Poly<F>>>| -> Result<()> {
        if plus.contains(&f, s)? {
            return Ok(());
        }
        if closure_member_given(m, &f, e, seed, s)? {
            *plus = plus.adjoin(f.clone()).with_hint(d);
            w.push(f);
        }
        Ok(())
    };
    for deg in 0..=bound {
        for b in 0..=deg {
            for i in 0..m.rank() {
                let mut f = vec![Poly::zero(); m.rank()];
                f[i] = Poly::monomial(deg - b, b);
                consider(f, &mut plus, &mut witnesses)?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7072_6f62);
    for _ in 0..8 {
        let deg = rng.gen_range(0..=bound);
        let mut f = vec![Poly::zero(); m.rank()];
        for _ in 0..2 {
            let b = rng.gen_range(0..=deg);
            let i = rng.gen_range(0..m.rank());
            f[i] = &f[i] + &Poly::term(F::random_nonzero(&mut rng), deg - b, b);
        }
        consider(f, &mut plus, &mut witnesses)?;
    }
    let exact = if witnesses.is_empty() { Exactness::Unknown } else { Exactness::WitnessedNotClosed };
    Ok(ClosureApprox { module: plus, exact, witnesses })
}

/// Three-valued integral-closedness built only on [`closure_approx`].
pub fn is_integrally_closed<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<IcStatus<F>> {
    let bound = m.cert_degree(s)? as u32;
    let c = closure_approx(m, bound, seed, s)?;
    Ok(match (c.exact, c.witnesses.first()) {
        (_, Some(w)) => IcStatus::NotClosed(w.clone()),
        (Exactness::Certified, None) => IcStatus::Certified,
        _ => IcStatus::Unknown,
    })
}

/// `M^{p+1} = N M^p` in `Sym^{p+1} F`, for `N ⊆ M`.
pub fn check_power_identity<F: Field>(m: &Module<F>, n: &Module<F>, p: usize, s: &Session) -> Result<bool> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    if !m.contains_module(n, s)? {
        return Err(Error::Precondition("N is not contained in M".into()));
    }
    let d = m.cert_degree(s)?;
    let bound = (p + 1) * d;
    let big = sym_module(m, p + 1, None, s)?.with_hint(bound);
    let small = sym_module(m, p, Some(n), s)?.with_hint(bound);
    let big_c = big.certify(s)?;
    // N M^p ⊆ M^{p+1} always; check it anyway.
    if !small.columns().iter().all(|c| big_c.contains(c)) {
        return Err(Error::Invalid("N M^p is not contained in M^{p+1}".into()));
    }
    // If N M^p = M^{p+1} it contains m^{(p+1)d} Sym, so failure to certify
    // at that bound already decides the question.
    match small.certify(s) {
        Ok(c) => Ok(c.length() == big_c.length()),
        Err(Error::ExceedsCap { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;

    fn p(s: &str) -> Poly<Gf> {
        Poly::parse(s).unwrap()
    }

    fn ses() -> Session {
        Session::default()
    }

    fn ideal_module(s: &str) -> Module<Gf> {
        Module::from_ideal(&Ideal::parse(s).unwrap())
    }

    #[test]
    fn maximal_ideal_multiplicities() {
        let s = ses();
        let m = ideal_module("x, y");
        assert_eq!(br_multiplicity(&m, 1, &s).unwrap(), 1);
        assert_eq!(sym_power_length(&m, 2, &s).unwrap(), 3);
        assert_eq!(br_limit_multiplicity(&m, 5, &s).unwrap(), 1);
        let mm = m.direct_sum(&m);
        assert_eq!(br_multiplicity(&mm, 1, &s).unwrap(), 3);
        assert_eq!(br_limit_multiplicity(&mm, 6, &s).unwrap(), 3);
    }

    #[test]
    fn sym_power_one_is_colength() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        assert_eq!(sym_power_length(&m, 1, &s).unwrap(), 29);
    }

    #[test]
    fn running_example_multiplicity() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        assert_eq!(br_multiplicity(&m, 7, &s).unwrap(), 32);
        let n = m.select(&[0, 1, 2]);
        assert!(n.ideal().unwrap().is_reduction_of(&m.ideal().unwrap(), 1, &s).unwrap());
        assert!(check_power_identity(&m, &n, 1, &s).unwrap());
    }

    #[test]
    fn reduction_of_two_generated_module_is_itself() {
        let s = ses();
        let m = ideal_module("x^2, y^3");
        let c = minimal_reduction(&m, 3, &s).unwrap();
        assert!(c.parameter_module && c.reduction_verified);
        assert_eq!(c.n.columns(), m.columns());
        let c2 = minimal_reduction(&ideal_module("x^2, x*y, y^2"), 9, &s).unwrap();
        let c3 = minimal_reduction(&ideal_module("x^2, x*y, y^2"), 9, &s).unwrap();
        assert_eq!(c2.n, c3.n);
    }

    #[test]
    fn closure_membership() {
        let s = ses();
        let m = ideal_module("x^2, y^2");
        assert!(closure_member(&m, &[p("x*y")], 1, &s).unwrap());
        assert!(closure_member(&m, &[p("x^2")], 1, &s).unwrap());
        assert!(!closure_member(&ideal_module("x, y"), &[p("1")], 1, &s).unwrap());
    }

    #[test]
    fn closure_of_monomial_direct_sum() {
        let s = ses();
        let m = ideal_module("x^2, y^2").direct_sum(&ideal_module("x, y"));
        let c = closure_approx(&m, 4, 1, &s).unwrap();
        assert_eq!(c.exact, Exactness::Certified);
        let expect = ideal_module("x^2, x*y, y^2").direct_sum(&ideal_module("x, y"));
        assert!(c.module.equals(&expect, &s).unwrap());
        let mm = ideal_module("x, y").direct_sum(&ideal_module("x, y"));
        assert_eq!(is_integrally_closed(&mm, 1, &s).unwrap(), IcStatus::Certified);
    }

    #[test]
    fn running_example_is_not_closed() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        match is_integrally_closed(&m, 1, &s).unwrap() {
            IcStatus::NotClosed(w) => {
                assert!(!m.contains(&w, &s).unwrap());
                assert!(closure_member(&m, &w, 5, &s).unwrap());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn power_identity_counterexample() {
        let s = ses();
        let j = ideal_module("x^3, x*y^4, y^6");
        let n = ideal_module("x^3, y^6");
        assert!(!check_power_identity(&j, &n, 1, &s).unwrap());
        assert!(check_power_identity(&j, &j, 1, &s).unwrap());
    }
}
