//! Minimal presentations from truncated syzygies, the reduction-first
//! presentation and its lower block `B`, adjoints as ideals of minors, and
//! the transpose correspondence `M ↦ K`.
//!
//! Precision. Let `m^{d_M} F ⊆ M` and `m^{d_I} ⊆ I(M)`. The kernel of the
//! truncated map `R_N^n → F/m^N F` is `Z + m^{N - d_M} R^n`, so truncating it
//! at `N' = N - d_M` gives the image of the syzygy module `Z` exactly. With
//! `N' > d_I` no minimal syzygy lies in `m^{N'}` (its column would force
//! `I(M) ⊆ m^{N'}`), so `W/mW ≅ Z/mZ`. Every ideal of minors we use contains
//! `m^{N'-1}`, hence is recovered exactly from the truncated entries by
//! Nakayama; the same argument applies to the transposed module.

use crate::error::{Error, Result};
use crate::exactring::linalg::Echelon;
use crate::exactring::trunc::{truncated_kernel, FreeLayout};
use crate::exactring::{Field, Matrix, Poly, PolyMatrix};
use crate::ideals::Ideal;
use crate::modlat::Module;
use crate::monomial::Staircase;
use crate::multiplicity::{br_multiplicity, is_integrally_closed, minimal_reduction, IcStatus, ReductionCertificate};
use crate::session::Session;

/// Precision of presentation entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Exact,
    /// Entries are known modulo `m^N`.
    Truncated(usize),
}

/// An `n x (n-r)` presentation matrix `A` of `M`, whose columns are minimal
/// syzygies of the generators.
#[derive(Clone, Debug)]
pub struct PresentationMatrix<F: Field> {
    pub a: PolyMatrix<F>,
    /// Generators of `M` in the row order of `A`.
    pub gens: Module<F>,
    pub precision: Precision,
    /// Number of designated leading rows (`r + 1` for a reduction-first
    /// presentation, otherwise 0).
    pub leading: usize,
}

impl<F: Field> PresentationMatrix<F> {
    pub fn rank(&self) -> usize {
        self.gens.rank()
    }

    pub fn num_gens(&self) -> usize {
        self.a.rows()
    }

    /// Rows after the leading block.
    pub fn b_block(&self) -> PolyMatrix<F> {
        let keep: Vec<usize> = (self.leading..self.a.rows()).collect();
        self.a.select_rows(&keep)
    }

    /// `I_k(A)` as an ideal.
    pub fn minor_ideal(&self, k: usize) -> Result<Ideal<F>> {
        minor_ideal(&self.a, k)
    }
}

fn minor_ideal<F: Field>(a: &PolyMatrix<F>, k: usize) -> Result<Ideal<F>> {
    if k == 0 {
        return Ok(Ideal::unit());
    }
    Ideal::new(a.minors(k)).map(|i| i.simplified())
}

/// Minimal generators, rejecting modules given with redundant columns.
fn require_minimal<F: Field>(m: &Module<F>, s: &Session) -> Result<()> {
    if m.min_gens(s)? != m.num_gens() {
        return Err(Error::Precondition("generators are not minimal; minimalize first".into()));
    }
    Ok(())
}

/// Minimal presentation of a module with minimal generators. `need` asks
/// for extra precision: every ideal of minors containing `m^need` is then
/// recovered exactly.
pub fn presentation_with<F: Field>(m: &Module<F>, need: usize, s: &Session) -> Result<PresentationMatrix<F>> {
    require_minimal(m, s)?;
    let (n, r) = (m.num_gens(), m.rank());
    let d_m = m.cert_degree(s)?;
    let ideal = m.ideal()?.with_hint(r * d_m);
    let d_i = ideal.certify(s)?.cert_degree();
    if n == r {
        return Ok(PresentationMatrix {
            a: PolyMatrix::zeros(n, 0),
            gens: m.clone(),
            precision: Precision::Exact,
            leading: 0,
        });
    }
    let mut prec = d_i.max(need) + 2;
    for _ in 0..3 {
        match try_presentation(m, d_m, prec, &ideal, s) {
            Ok(p) => return Ok(p),
            Err(Error::PresentationUnavailable(_)) => prec += 4,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PresentationUnavailable(format!("self-checks failed up to precision {prec}")))
}

/// [`presentation_with`] at the default precision.
pub fn presentation<F: Field>(m: &Module<F>, s: &Session) -> Result<PresentationMatrix<F>> {
    presentation_with(m, 0, s)
}

fn try_presentation<F: Field>(
    m: &Module<F>,
    d_m: usize,
    prec: usize,
    ideal: &Ideal<F>,
    s: &Session,
) -> Result<PresentationMatrix<F>> {
    let (n, r) = (m.num_gens(), m.rank());
    let big = prec + d_m;
    if big > crate::exactring::trunc::HARD_DEGREE_LIMIT {
        return Err(Error::Resource(format!("presentation needs truncation degree {big}")));
    }
    let kernel = truncated_kernel(r, m.columns(), big);
    let layout = FreeLayout::new(n, prec);
    let mut w = Echelon::new(layout.dim());
    for k in &kernel {
        let v = layout.vectorize(k, 0, 0);
        if !v.is_empty() {
            w.insert(v);
        }
    }
    let mut chosen_space = Echelon::new(layout.dim());
    for row in w.rows() {
        for var in 0..2 {
            let v = layout.shift(row, var);
            if !v.is_empty() {
                chosen_space.insert(v);
            }
        }
    }
    let mut chosen = Vec::new();
    for row in w.rows_by_pivot() {
        if chosen_space.insert(row.clone()).is_some() {
            chosen.push(layout.columnize(row));
        }
    }
    if chosen.len() != n - r {
        return Err(Error::PresentationUnavailable(format!(
            "found {} minimal syzygies, expected {}",
            chosen.len(),
            n - r
        )));
    }
    let a = PolyMatrix::from_columns(n, &chosen);
    let cap = prec as u32;
    for col in &chosen {
        if col.iter().any(|f| !f.constant_term().is_zero()) {
            return Err(Error::PresentationUnavailable("syzygy entry is a unit".into()));
        }
        for i in 0..r {
            let img = col.iter().zip(m.columns()).fold(Poly::zero(), |acc, (c, g)| &acc + &(c * &g[i]));
            if !img.truncate(cap).is_zero() {
                return Err(Error::PresentationUnavailable("syzygy does not annihilate the generators".into()));
            }
        }
    }
    let maximal = minor_ideal(&a, n - r)?;
    if !maximal.equals(ideal, s)? {
        return Err(Error::PresentationUnavailable("maximal minors do not recover I(M)".into()));
    }
    Ok(PresentationMatrix { a, gens: m.clone(), precision: Precision::Truncated(prec), leading: 0 })
}

/// Presentation whose generators start with the `r + 1` generators of `N`.
/// Returns the presentation and the completing scalar matrix `P` (new
/// generators are `f · P`).
pub fn reduction_first_presentation<F: Field>(
    m: &Module<F>,
    cert: &ReductionCertificate<F>,
    s: &Session,
) -> Result<PresentationMatrix<F>> {
    let (n, r) = (m.num_gens(), m.rank());
    let c = &cert.combination;
    if c.rows() != n || c.cols() != r + 1 {
        return Err(Error::Precondition("reduction does not match the module's generators".into()));
    }
    // Complete the columns of C to a basis with unit vectors.
    let mut cols: Vec<Vec<F>> = (0..r + 1).map(|j| c.column(j)).collect();
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![F::zero(); n];
        e[k] = F::one();
        let mut trial = cols.clone();
        trial.push(e);
        if Matrix::from_rows(trial.clone()).rank() == trial.len() {
            cols = trial;
        }
    }
    if cols.len() != n {
        return Err(Error::Precondition("reduction generators are not part of a minimal basis".into()));
    }
    let p = Matrix::from_rows(cols).transpose();
    let p_inv = p.inverse().expect("completed basis is invertible");
    let lhs = cert.n.colength(s)? - m.colength(s)?;
    let base = presentation_with(m, lhs, s)?;
    // g = f P, so g (P^{-1} A) = f A = 0.
    let mut a = PolyMatrix::zeros(n, n - r);
    for i in 0..n {
        for j in 0..n - r {
            let v = (0..n).fold(Poly::zero(), |acc, k| &acc + &base.a.get(k, j).scale(p_inv.get(i, k)));
            a.set(i, j, v);
        }
    }
    let gens = m.combine(&p);
    Ok(PresentationMatrix { a, gens, precision: base.precision, leading: r + 1 })
}

/// Both sides of `λ(M/N) = λ(R/I_{n-r-1}(B))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeylemResult {
    pub lhs: usize,
    pub rhs: Option<usize>,
    pub equal: Option<bool>,
}

/// `lhs = λ(F/N) - λ(F/M)` needs no syzygies; `rhs` is the colength of the
/// maximal minors of `B` from the reduction-first presentation.
pub fn keylem_check<F: Field>(m: &Module<F>, cert: &ReductionCertificate<F>, s: &Session) -> Result<KeylemResult> {
    let lhs = cert.n.colength(s)? - m.colength(s)?;
    let pres = match reduction_first_presentation(m, cert, s) {
        Ok(p) => p,
        Err(Error::PresentationUnavailable(_)) => return Ok(KeylemResult { lhs, rhs: None, equal: None }),
        Err(e) => return Err(e),
    };
    let b = pres.b_block();
    let k = m.num_gens() - m.rank() - 1;
    let ideal = minor_ideal(&b, k)?.with_hint(lhs);
    let rhs = ideal.colength(s)?.value;
    Ok(KeylemResult { lhs, rhs: Some(rhs), equal: Some(lhs == rhs) })
}

/// Adjoint of a certified integrally closed ideal as `I_{n-2}(A)`.
pub fn adjoint_of_ideal<F: Field>(i: &Ideal<F>, s: &Session) -> Result<Ideal<F>> {
    let st = i
        .to_staircase()
        .ok_or_else(|| Error::Precondition("integral closedness is only certified for monomial ideals".into()))?;
    if !st.is_integrally_closed()? {
        return Err(Error::Precondition("ideal is not integrally closed".into()));
    }
    let m = Module::from_ideal(&Ideal::from_staircase(&st));
    let pres = presentation(&m, s)?;
    pres.minor_ideal(m.num_gens() - 2)
}

/// The two forms `I_{n-r-1}(A)` and `I_{n-r-1}(B)` of the adjoint of
/// `I(M)` for a certified integrally closed module.
#[derive(Clone, Debug)]
pub struct ModuleAdjoint<F: Field> {
    pub a_form: Ideal<F>,
    pub b_form: Ideal<F>,
}

pub fn adjoint_of_module<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<ModuleAdjoint<F>> {
    if is_integrally_closed(m, seed, s)? != IcStatus::Certified {
        return Err(Error::Precondition("module is not certified integrally closed".into()));
    }
    let m = m.minimalized(s)?;
    let k = m.num_gens() - m.rank() - 1;
    let e_m = br_multiplicity(&m, seed, s)?;
    let pres = presentation_with(&m, e_m, s)?;
    let a_form = pres.minor_ideal(k)?;
    let cert = minimal_reduction(&m, seed, s)?;
    let rf = reduction_first_presentation(&m, &cert, s)?;
    let b_form = minor_ideal(&rf.b_block(), k)?;
    if !a_form.equals(&b_form, s)? {
        return Err(Error::Invalid("I_{n-r-1}(A) and I_{n-r-1}(B) differ".into()));
    }
    Ok(ModuleAdjoint { a_form, b_form })
}

/// `Fitt_{r+1}(M) = I_{n-r-1}(A)`.
pub fn fitt_r1<F: Field>(m: &Module<F>, s: &Session) -> Result<Ideal<F>> {
    let m = m.minimalized(s)?;
    let pres = presentation(&m, s)?;
    pres.minor_ideal(m.num_gens() - m.rank() - 1)
}

/// `adj(I)` for a monomial ideal, by the interior-point formula.
fn polyhedral_adj<F: Field>(i: &Ideal<F>) -> Result<(Staircase, Ideal<F>)> {
    let st = i.simplified().to_staircase().ok_or_else(|| Error::Precondition("I is not monomial".into()))?;
    let adj = st.polyhedral_adjoint()?;
    Ok((adj.clone(), Ideal::from_staircase(&adj)))
}

/// The module generated by the rows of a presentation (columns of `A^T`).
fn transpose_module<F: Field>(pres: &PresentationMatrix<F>) -> Result<Module<F>> {
    let t = pres.a.transpose();
    Module::from_columns(t.rows(), t.columns())
}

/// Invariants compared between `M` and `ψ'(ψ(M))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVector {
    pub colength: usize,
    /// `λ(R/I_k)` for `k = 1..=r`.
    pub fitting_colengths: Vec<usize>,
    pub min_gens: usize,
    pub multiplicity: usize,
}

pub fn invariant_vector<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<InvariantVector> {
    let d = m.cert_degree(s)?;
    let fitting_colengths = (1..=m.rank())
        .map(|k| Ok(m.fitting_ideal(k)?.with_hint(k * d).colength(s)?.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantVector {
        colength: m.colength(s)?,
        fitting_colengths,
        min_gens: m.min_gens(s)?,
        multiplicity: br_multiplicity(m, seed, s)?,
    })
}

/// `K = ψ(M)`: the module generated by the columns of `A^T`. Membership
/// of `M` and every asserted property of `K` are checked.
pub fn psi<F: Field>(m: &Module<F>, seed: u64, s: &Session) -> Result<Module<F>> {
    let r = m.rank();
    let i = m.ideal()?;
    if i.order() as usize != r {
        return Err(Error::Precondition(format!("ord(I(M)) = {} differs from the rank {r}", i.order())));
    }
    if m.columns().iter().flatten().any(|f| f.is_unit()) {
        return Err(Error::Precondition("M is not inside mF".into()));
    }
    if is_integrally_closed(m, seed, s)? != IcStatus::Certified {
        return Err(Error::Precondition("M is not certified integrally closed".into()));
    }
    let m = m.minimalized(s)?;
    if m.num_gens() != 2 * r {
        return Err(Error::Invalid(format!("μ(M) = {} but 2r = {}", m.num_gens(), 2 * r)));
    }
    let pres = presentation(&m, s)?;
    let k = transpose_module(&pres)?;
    check_k_class(&k, &i, s)?;
    Ok(k)
}

/// Checks `I(K) = I`, `I_{r-1}(K) = adj(I)` and that `K` is contracted.
fn check_k_class<F: Field>(k: &Module<F>, i: &Ideal<F>, s: &Session) -> Result<()> {
    let r = k.rank();
    let k = Module::new(r, k.columns().to_vec(), s)?;
    if !k.ideal()?.equals(i, s)? {
        return Err(Error::Invalid("I(K) differs from I".into()));
    }
    let (_, adj) = polyhedral_adj(i)?;
    if !k.fitting_ideal(r - 1)?.equals(&adj, s)? {
        return Err(Error::Invalid("I_{r-1}(K) differs from adj(I)".into()));
    }
    if !k.is_contracted(s)? {
        return Err(Error::Invalid("K is not contracted".into()));
    }
    Ok(())
}

/// `ψ'(K)`: transpose of a minimal presentation of `K`, with `I(M) = I` and
/// `e(M) - λ(F/M) = λ(R/adj(I))` asserted.
pub fn psi_inverse<F: Field>(k: &Module<F>, seed: u64, s: &Session) -> Result<Module<F>> {
    let r = k.rank();
    let i = k.ideal()?;
    check_k_class(k, &i, s)?;
    let k = k.minimalized(s)?;
    let pres = presentation(&k, s)?;
    let t = transpose_module(&pres)?;
    let m = Module::new(t.rank(), t.columns().to_vec(), s)?;
    if m.rank() != r {
        return Err(Error::Invalid("ψ' changed the rank".into()));
    }
    if !m.ideal()?.equals(&i, s)? {
        return Err(Error::Invalid("I(ψ'(K)) differs from I".into()));
    }
    let (adj_st, _) = polyhedral_adj(&i)?;
    let e = br_multiplicity(&m, seed, s)?;
    let len = m.colength(s)?;
    if e != len + adj_st.colength()? {
        return Err(Error::Invalid("e(M) - λ(F/M) differs from λ(R/adj(I))".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Gf;

    fn ses() -> Session {
        Session::default()
    }

    fn id(t: &str) -> Ideal<Gf> {
        Ideal::parse(t).unwrap()
    }

    #[test]
    fn presentation_of_monomial_ideal_matches_hilbert_burch() {
        let s = ses();
        let st = Staircase::parse("[(4,0),(3,1),(1,2),(0,4)]").unwrap();
        let m = Module::from_ideal(&Ideal::<Gf>::from_staircase(&st));
        let pres = presentation(&m, &s).unwrap();
        assert_eq!((pres.a.rows(), pres.a.cols()), (4, 3));
        let hb: PolyMatrix<Gf> = st.hilbert_burch().unwrap();
        for k in 1..=3 {
            let a = pres.minor_ideal(k).unwrap();
            let b = minor_ideal(&hb, k).unwrap();
            assert!(a.equals(&b, &s).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn running_example_presentation() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        let pres = presentation(&m, &s).unwrap();
        assert_eq!((pres.a.rows(), pres.a.cols()), (4, 2));
        let i1 = pres.minor_ideal(1).unwrap();
        assert!(i1.equals(&id("x, y^3"), &s).unwrap());
        assert!(pres.minor_ideal(2).unwrap().equals(&m.ideal().unwrap(), &s).unwrap());
        assert_eq!(fitt_r1(&m, &s).unwrap().colength(&s).unwrap().value, 3);
    }

    #[test]
    fn running_example_b_block() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        let n = m.select(&[0, 1, 2]);
        let mut c = Matrix::zeros(4, 3);
        for j in 0..3 {
            c.set(j, j, Gf::one());
        }
        let cert = ReductionCertificate {
            n,
            combination: c,
            seeds: vec![],
            parameter_module: true,
            reduction_verified: true,
            e_ideal: 36,
        };
        let res = keylem_check(&m, &cert, &s).unwrap();
        assert_eq!(res, KeylemResult { lhs: 3, rhs: Some(3), equal: Some(true) });
        let b = reduction_first_presentation(&m, &cert, &s).unwrap().b_block();
        assert_eq!((b.rows(), b.cols()), (1, 2));
        assert!(minor_ideal(&b, 1).unwrap().equals(&id("x, y^3"), &s).unwrap());
    }

    #[test]
    fn self_reduction_has_trivial_b() {
        let s = ses();
        let m = Module::from_ideal(&id("x^2, y^3"));
        let cert = minimal_reduction(&m, 1, &s).unwrap();
        assert_eq!(keylem_check(&m, &cert, &s).unwrap(), KeylemResult { lhs: 0, rhs: Some(0), equal: Some(true) });
    }

    #[test]
    fn adjoint_of_square_of_maximal_ideal() {
        let s = ses();
        let adj = adjoint_of_ideal(&id("x^2, x*y, y^2"), &s).unwrap();
        assert!(adj.equals(&id("x, y"), &s).unwrap());
        assert!(matches!(adjoint_of_ideal(&id("x^2, y^2"), &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn adjoint_of_direct_sum() {
        let s = ses();
        let m = Module::from_ideal(&id("x^2, x*y, y^2")).direct_sum(&Module::from_ideal(&id("x, y^2")));
        let adj = adjoint_of_module(&m, 1, &s).unwrap();
        let prod =
            Staircase::parse("[(2,0),(1,1),(0,2)]").unwrap().product(&Staircase::parse("[(1,0),(0,2)]").unwrap());
        let expect = Ideal::from_staircase(&prod.polyhedral_adjoint().unwrap());
        assert!(adj.a_form.equals(&expect, &s).unwrap());
    }

    #[test]
    fn psi_roundtrip_on_rank_two() {
        let s = ses();
        let m = Module::from_ideal(&id("x, y^3")).direct_sum(&Module::from_ideal(&id("x^2, y")));
        let k = psi(&m, 1, &s).unwrap();
        let back = psi_inverse(&k, 1, &s).unwrap();
        assert_eq!(invariant_vector(&back, 1, &s).unwrap(), invariant_vector(&m, 1, &s).unwrap());
        let i = m.ideal().unwrap();
        let (adj, _) = polyhedral_adj(&i).unwrap();
        let e_k = br_multiplicity(&k, 1, &s).unwrap();
        assert_eq!(e_k, i.hs_multiplicity(1, &s).unwrap() - adj.colength().unwrap());
    }
}
