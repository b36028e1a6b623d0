//! Torsion-free submodules `M ⊆ F = R^r` of finite colength, given by
//! generator columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::trunc::Certified;
use crate::exactring::{Field, Matrix, Poly, PolyMatrix};
use crate::ideals::Ideal;
use crate::session::Session;

/// A submodule of `R^rank` generated by `cols` (each a column of `rank`
/// polynomials written in the basis `T_1, ..., T_r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module<F: Field> {
    rank: usize,
    cols: Vec<Vec<Poly<F>>>,
    /// A known `d` with `m^d F ⊆ M`.
    hint: Option<usize>,
}

/// Module JSON: `{"rank": 2, "generators": [["y^2","x^2"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub rank: usize,
    pub generators: Vec<Vec<String>>,
}

impl<F: Field> Module<F> {
    /// Validated construction: the generator matrix has generic rank `r`
    /// and `λ(F/M)` certifies below the cap.
    pub fn new(rank: usize, cols: Vec<Vec<Poly<F>>>, s: &Session) -> Result<Self> {
        let m = Self::from_columns(rank, cols)?;
        m.check_generic_rank(0)?;
        m.certify(s)?;
        Ok(m)
    }

    /// Shape-checked construction without the rank and colength checks.
    pub fn from_columns(rank: usize, cols: Vec<Vec<Poly<F>>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("ambient rank must be positive".into()));
        }
        if cols.is_empty() {
            return Err(Error::Invalid("a module needs at least one generator".into()));
        }
        if let Some(c) = cols.iter().find(|c| c.len() != rank) {
            return Err(Error::Invalid(format!("generator has {} entries, expected {rank}", c.len())));
        }
        Ok(Module { rank, cols, hint: None })
    }

    /// An ideal viewed as a rank-one module.
    pub fn from_ideal(i: &Ideal<F>) -> Self {
        Module { rank: 1, cols: i.gens().iter().map(|g| vec![g.clone()]).collect(), hint: i.hint() }
    }

    pub fn from_json(text: &str, s: &Session) -> Result<Self> {
        let j: ModuleJson = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("module JSON: {e}")))?;
        let cols = j
            .generators
            .iter()
            .map(|c| c.iter().map(|t| Poly::parse(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.rank, cols, s)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            rank: self.rank,
            generators: self.cols.iter().map(|c| c.iter().map(|f| f.to_string()).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_gens(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[Vec<Poly<F>>] {
        &self.cols
    }

    pub fn with_hint(mut self, d: usize) -> Self {
        self.hint = Some(d);
        self
    }

    pub fn hint(&self) -> Option<usize> {
        self.hint
    }

    pub fn matrix(&self) -> PolyMatrix<F> {
        PolyMatrix::from_columns(self.rank, &self.cols)
    }

    /// Module generated by a subset of the columns.
    pub fn select(&self, idx: &[usize]) -> Self {
        Module { rank: self.rank, cols: idx.iter().map(|&j| self.cols[j].clone()).collect(), hint: None }
    }

    /// `M + R f`.
    pub fn adjoin(&self, f: Vec<Poly<F>>) -> Self {
        assert_eq!(f.len(), self.rank);
        let mut cols = self.cols.clone();
        cols.push(f);
        Module { rank: self.rank, cols, hint: self.hint }
    }

    /// Columns combined by a scalar `n x k` matrix.
    pub fn combine(&self, c: &Matrix<F>) -> Self {
        assert_eq!(c.rows(), self.cols.len());
        let cols = (0..c.cols())
            .map(|j| {
                (0..self.rank)
                    .map(|i| {
                        self.cols
                            .iter()
                            .enumerate()
                            .fold(Poly::zero(), |acc, (k, col)| &acc + &col[i].scale(c.get(k, j)))
                    })
                    .collect()
            })
            .collect();
        Module { rank: self.rank, cols, hint: None }
    }

    /// Apply a scalar change of basis `P` (`r x r`) of `F`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Self {
        assert_eq!(p.rows(), self.rank);
        let cols = self
            .cols
            .iter()
            .map(|col| {
                (0..self.rank)
                    .map(|i| col.iter().enumerate().fold(Poly::zero(), |acc, (k, f)| &acc + &f.scale(p.get(i, k))))
                    .collect()
            })
            .collect();
        Module { rank: self.rank, cols, hint: self.hint }
    }

    /// Random-evaluation rank test with up to three retries.
    fn check_generic_rank(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..3 {
            let (x0, y0) = (F::random(&mut rng), F::random(&mut rng));
            let m = Matrix::from_rows(
                (0..self.rank).map(|i| self.cols.iter().map(|c| c[i].eval(&x0, &y0)).collect()).collect(),
            );
            if m.rank() == self.rank {
                return Ok(());
            }
        }
        Err(Error::Invalid(format!("generator matrix does not have generic rank {}", self.rank)))
    }

    pub(crate) fn certify(&self, s: &Session) -> Result<Certified<F>> {
        let start = self.cols.iter().flatten().filter_map(|g| g.order()).max().unwrap_or(0) as usize + 1;
        Certified::new(self.rank, &self.cols, s.plan(start, self.hint))
    }

    /// `λ(F/M)`.
    pub fn colength(&self, s: &Session) -> Result<usize> {
        Ok(self.certify(s)?.length())
    }

    /// Smallest `d` found with `m^d F ⊆ M`.
    pub fn cert_degree(&self, s: &Session) -> Result<usize> {
        Ok(self.certify(s)?.cert_degree())
    }

    pub fn contains(&self, f: &[Poly<F>], s: &Session) -> Result<bool> {
        Ok(self.certify(s)?.contains(f))
    }

    pub fn contains_module(&self, o: &Self, s: &Session) -> Result<bool> {
        let c = self.certify(s)?;
        Ok(o.cols.iter().all(|col| c.contains(col)))
    }

    pub fn equals(&self, o: &Self, s: &Session) -> Result<bool> {
        Ok(self.contains_module(o, s)? && o.contains_module(self, s)?)
    }

    /// `mM`.
    pub fn times_maximal(&self) -> Self {
        let cols = self
            .cols
            .iter()
            .flat_map(|c| [c.iter().map(|f| f.shift(1, 0)).collect(), c.iter().map(|f| f.shift(0, 1)).collect()])
            .collect();
        Module { rank: self.rank, cols, hint: self.hint.map(|d| d + 1) }
    }

    /// `I_k(M)`; `k = 0` gives the unit ideal.
    pub fn fitting_ideal(&self, k: usize) -> Result<Ideal<F>> {
        if k > self.rank {
            return Err(Error::Precondition(format!("minor size {k} exceeds rank {}", self.rank)));
        }
        if k == 0 {
            return Ok(Ideal::unit());
        }
        let minors = self.matrix().minors(k);
        Ok(Ideal::new(minors)?.simplified())
    }

    /// `I(M) = I_r(M)`, carrying the containment `m^{r d} ⊆ I(M)` when
    /// `m^d F ⊆ M` is known.
    pub fn ideal(&self) -> Result<Ideal<F>> {
        let i = self.fitting_ideal(self.rank)?;
        Ok(match self.hint {
            Some(d) => i.with_hint(self.rank * d),
            None => i,
        })
    }

    /// `μ(M) = λ(F/mM) - λ(F/M)`.
    pub fn min_gens(&self, s: &Session) -> Result<usize> {
        let d = self.cert_degree(s)?;
        let m = self.clone().with_hint(d);
        Ok(m.times_maximal().colength(s)? - m.colength(s)?)
    }

    /// A minimal generating set chosen among the given columns.
    pub fn minimalized(&self, s: &Session) -> Result<Self> {
        let d = self.cert_degree(s)?;
        let mm = self.clone().with_hint(d).times_maximal();
        let mut keep: Vec<usize> = Vec::new();
        for j in 0..self.cols.len() {
            let mut cur = mm.clone();
            for &k in &keep {
                cur = cur.adjoin(self.cols[k].clone());
            }
            if !cur.contains(&self.cols[j], s)? {
                keep.push(j);
            }
        }
        let mut out = self.select(&keep);
        out.hint = Some(d);
        Ok(out)
    }

    /// Split off free summands by pivoting on unit entries. Returns the
    /// remaining module, with every entry in `m`, and the number of summands
    /// removed.
    pub fn split_free(&self) -> (Self, usize) {
        let mut rank = self.rank;
        let mut cols = self.cols.clone();
        let mut split = 0;
        loop {
            let pivot = (0..cols.len()).find_map(|j| (0..rank).find(|&i| cols[j][i].is_unit()).map(|i| (i, j)));
            let Some((i, j)) = pivot else { break };
            // The unit u: for l != j, f_l <- u f_l - a_il f_j clears row i
            // (invertible since u is a unit), then row i and column j drop.
            let u = cols[j][i].clone();
            let fj = cols[j].clone();
            let mut next = Vec::with_capacity(cols.len() - 1);
            for (l, col) in cols.iter().enumerate() {
                if l == j {
                    continue;
                }
                let a = col[i].clone();
                let new: Vec<Poly<F>> = col.iter().zip(&fj).map(|(f, g)| &(&u * f) - &(&a * g)).collect();
                next.push(new.into_iter().enumerate().filter(|(k, _)| *k != i).map(|(_, f)| f).collect());
            }
            cols = next;
            rank -= 1;
            split += 1;
            if rank == 0 {
                break;
            }
        }
        let cols = if rank == 0 { Vec::new() } else { cols };
        (Module { rank, cols, hint: None }, split)
    }

    /// Block-diagonal direct sum in `F_1 ⊕ F_2`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let r = self.rank + o.rank;
        let mut cols = Vec::with_capacity(self.cols.len() + o.cols.len());
        for c in &self.cols {
            let mut v = c.clone();
            v.resize(r, Poly::zero());
            cols.push(v);
        }
        for c in &o.cols {
            let mut v = vec![Poly::zero(); self.rank];
            v.extend(c.iter().cloned());
            cols.push(v);
        }
        let hint = self.hint.zip(o.hint).map(|(a, b)| a.max(b));
        Module { rank: r, cols, hint }
    }

    /// Direct sum of ideals `I_1 ⊕ ... ⊕ I_r`.
    pub fn from_ideals(ideals: &[Ideal<F>]) -> Self {
        let mut it = ideals.iter().map(Module::from_ideal);
        let first = it.next().expect("at least one ideal");
        it.fold(first, |acc, m| acc.direct_sum(&m))
    }

    /// The summands when every column has exactly one nonzero entry and that
    /// entry is a term: then `M` is a direct sum of monomial ideals.
    pub fn monomial_summands(&self) -> Option<Vec<Ideal<F>>> {
        let mut parts: Vec<Vec<Poly<F>>> = vec![Vec::new(); self.rank];
        for c in &self.cols {
            let nz: Vec<usize> = (0..self.rank).filter(|&i| !c[i].is_zero()).collect();
            if nz.len() != 1 || c[nz[0]].num_terms() != 1 {
                return None;
            }
            let (_, a, b) = c[nz[0]].as_term().unwrap();
            parts[nz[0]].push(Poly::monomial(a, b));
        }
        parts.into_iter().map(|g| Ideal::new(g).ok()).collect()
    }

    /// The family `M(a,b,c)`: columns of
    /// `[[y^a, x^b, 0, x^c y^c], [x^a, 0, y^b, 0]]`.
    pub fn family_mabc(a: u32, b: u32, c: u32) -> Result<Self> {
        if !(1 <= a && a <= c && c < b && b <= a + c) {
            return Err(Error::Precondition(format!("need 1 <= a <= c < b <= a + c, got ({a},{b},{c})")));
        }
        let m = Poly::monomial;
        let cols = vec![
            vec![m(0, a), m(a, 0)],
            vec![m(b, 0), Poly::zero()],
            vec![Poly::zero(), m(0, b)],
            vec![m(c, c), Poly::zero()],
        ];
        // I(M) contains x^{a+b} and y^{a+b}, so m^{2(a+b)} F ⊆ I(M) F ⊆ M.
        Ok(Module { rank: 2, cols, hint: Some(2 * (a + b) as usize) })
    }

    /// `μ(M) = ord(I(M)) + r`.
    pub fn is_contracted(&self, s: &Session) -> Result<bool> {
        Ok(self.min_gens(s)? == self.ideal()?.order() as usize + self.rank)
    }

    /// Random invertible scalar column operation and basis change.
    pub fn random_transform(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.cols.len();
        let q = random_invertible::<F>(&mut rng, n);
        let p = random_invertible::<F>(&mut rng, self.rank);
        let mut out = self.combine(&q).change_basis(&p);
        out.hint = self.hint;
        out
    }
}

/// A random invertible scalar matrix with small entries.
pub fn random_invertible<F: Field>(rng: &mut impl Rng, k: usize) -> Matrix<F> {
    loop {
        let m =
            Matrix::from_rows((0..k).map(|_| (0..k).map(|_| F::from_i64(rng.gen_range(-3..=3))).collect()).collect());
        if m.rank() == k {
            return m;
        }
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

    fn maximal() -> Module<Gf> {
        Module::new(1, vec![vec![p("x")], vec![p("y")]], &ses()).unwrap()
    }

    #[test]
    fn maximal_ideal_as_module() {
        let m = maximal();
        assert_eq!(m.colength(&ses()).unwrap(), 1);
        assert_eq!(m.min_gens(&ses()).unwrap(), 2);
        assert!(m.is_contracted(&ses()).unwrap());
        let mm = m.direct_sum(&m);
        assert_eq!(mm.colength(&ses()).unwrap(), 2);
        assert!(mm.ideal().unwrap().equals(&Ideal::parse("x^2, x*y, y^2").unwrap(), &ses()).unwrap());
    }

    #[test]
    fn running_example_lengths() {
        let s = ses();
        let m = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        assert_eq!(m.colength(&s).unwrap(), 29);
        assert_eq!(m.min_gens(&s).unwrap(), 4);
        let i = m.ideal().unwrap();
        assert!(i.equals(&Ideal::parse("x^6, x^5*y^3, x^4*y^4, y^6").unwrap(), &s).unwrap());
        assert_eq!(i.order(), 6);
        let i1 = m.fitting_ideal(1).unwrap();
        assert!(i1.equals(&Ideal::parse("x^2, y^2").unwrap(), &s).unwrap());
        assert_eq!(m.fitting_ideal(0).unwrap(), Ideal::unit());
        assert!(m.fitting_ideal(3).is_err());
    }

    #[test]
    fn family_constraints() {
        assert!(Module::<Gf>::family_mabc(1, 2, 1).is_ok());
        assert!(Module::<Gf>::family_mabc(1, 3, 1).is_err());
    }

    #[test]
    fn rejects_infinite_colength() {
        let s = ses().with_trunc_cap(20);
        let r = Module::<Gf>::new(2, vec![vec![p("x"), p("0")], vec![p("0"), p("x")]], &s);
        assert!(matches!(r, Err(Error::ExceedsCap { .. })));
        let r = Module::<Gf>::new(2, vec![vec![p("x"), p("y")], vec![p("x^2"), p("x*y")]], &s);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn split_free_summands() {
        let s = ses();
        let m =
            Module::<Gf>::new(2, vec![vec![p("1"), p("x")], vec![p("0"), p("x")], vec![p("0"), p("y")]], &s).unwrap();
        let (rest, k) = m.split_free();
        assert_eq!(k, 1);
        assert_eq!(rest.rank(), 1);
        assert_eq!(rest.colength(&s).unwrap(), m.colength(&s).unwrap());
        let mabc = Module::<Gf>::family_mabc(2, 4, 3).unwrap();
        let (same, k) = mabc.split_free();
        assert_eq!((k, same.columns()), (0, mabc.columns()));
    }

    #[test]
    fn minimalized_drops_redundant_columns() {
        let s = ses();
        let m = Module::<Gf>::new(1, vec![vec![p("x")], vec![p("x + y")], vec![p("y")], vec![p("x^2")]], &s).unwrap();
        assert_eq!(m.minimalized(&s).unwrap().num_gens(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let s = ses();
        let text = r#"{"rank": 2, "generators": [["y^2","x^2"], ["x^4","0"], ["0","y^4"], ["x^3*y^3","0"]]}"#;
        let m = Module::<Gf>::from_json(text, &s).unwrap();
        assert!(m.equals(&Module::family_mabc(2, 4, 3).unwrap(), &s).unwrap());
        let again = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(Module::<Gf>::from_json(&again, &s).unwrap(), m);
    }
}
