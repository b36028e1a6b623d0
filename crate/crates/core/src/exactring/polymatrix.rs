//! Matrices of polynomials and their minors.

use std::collections::HashMap;

use super::field::Field;
use super::poly::Poly;

/// A dense matrix with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            entries.extend(row);
        }
        PolyMatrix { rows: r, cols: c, entries }
    }

    /// Build from columns, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Poly<F>>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, f) in col.iter().enumerate() {
                m.set(i, j, f.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Poly<F>) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn column(&self, j: usize) -> Vec<Poly<F>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly<F>>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    /// Rows listed in `keep`, in that order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let rows = keep.iter().map(|&i| (0..self.cols).map(|j| self.get(i, j).clone()).collect());
        let mut m = Self::from_rows(rows.collect());
        if keep.is_empty() {
            m.cols = self.cols;
        }
        m
    }

    pub fn map(&self, f: impl Fn(&Poly<F>) -> Poly<F>) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// All entries, row by row.
    pub fn entries(&self) -> &[Poly<F>] {
        &self.entries
    }

    pub fn det(&self) -> Poly<F> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut memo = HashMap::new();
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.minor_memo(&rows, &cols, &mut memo)
    }

    /// All `k x k` minors, ordered by row subset then column subset
    /// (lexicographically). `k = 0` gives the single minor `1`.
    pub fn minors(&self, k: usize) -> Vec<Poly<F>> {
        assert!(k <= self.rows.min(self.cols), "minor size exceeds matrix size");
        if k == 0 {
            return vec![Poly::one()];
        }
        let row_sets = subsets(self.rows, k);
        let col_sets = subsets(self.cols, k);
        let mut memo = HashMap::new();
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.minor_memo(rs, cs, &mut memo));
            }
        }
        out
    }

    /// Laplace expansion along the last column, cached on
    /// `(row mask, column mask)`.
    fn minor_memo(&self, rs: &[usize], cs: &[usize], memo: &mut HashMap<(u64, u64), Poly<F>>) -> Poly<F> {
        assert!(self.rows <= 64 && self.cols <= 64, "matrix too large for minor masks");
        if rs.is_empty() {
            return Poly::one();
        }
        let key = (mask(rs), mask(cs));
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let last = *cs.last().unwrap();
        let sub_cols = &cs[..cs.len() - 1];
        let mut acc = Poly::zero();
        let k = rs.len();
        for (pos, &i) in rs.iter().enumerate() {
            let a = self.get(i, last);
            if a.is_zero() {
                continue;
            }
            let sub_rows: Vec<usize> = rs.iter().copied().filter(|&r| r != i).collect();
            let m = self.minor_memo(&sub_rows, sub_cols, memo);
            if m.is_zero() {
                continue;
            }
            let term = a * &m;
            acc = if (pos + k - 1).is_multiple_of(2) { &acc + &term } else { &acc - &term };
        }
        memo.insert(key, acc.clone());
        acc
    }
}

fn mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &i| m | (1u64 << i))
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::field::Gf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly<Gf> {
        Poly::parse(s).unwrap()
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Poly<Gf> {
        Poly::from_terms((0..3).map(|_| {
            let a = rng.gen_range(0..3);
            let b = rng.gen_range(0..3);
            ((a, b), Gf::from_i64(rng.gen_range(-5..=5)))
        }))
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> PolyMatrix<Gf> {
        PolyMatrix::from_rows((0..r).map(|_| (0..c).map(|_| random_poly(rng)).collect()).collect())
    }

    /// Plain cofactor expansion along the first row.
    fn det_naive(m: &PolyMatrix<Gf>) -> Poly<Gf> {
        let n = m.rows();
        if n == 0 {
            return Poly::one();
        }
        let mut acc = Poly::zero();
        for j in 0..n {
            let sub = PolyMatrix::from_rows(
                (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect()).collect(),
            );
            let t = m.get(0, j) * &det_naive(&sub);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn two_by_three_minors() {
        let (a, b) = (2, 4);
        let m = PolyMatrix::<Gf>::from_rows(vec![
            vec![Poly::monomial(0, a), Poly::monomial(b, 0), Poly::zero()],
            vec![Poly::monomial(a, 0), Poly::zero(), Poly::monomial(0, b)],
        ]);
        let got = m.minors(2);
        assert_eq!(got, vec![-&Poly::monomial(a + b, 0), Poly::monomial(0, a + b), Poly::monomial(b, b)]);
        assert_eq!(m.minors(0), vec![Poly::one()]);
    }

    #[test]
    fn memoized_det_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..5 {
            let m = random_matrix(&mut rng, n, n);
            assert_eq!(m.det(), det_naive(&m));
        }
    }

    #[test]
    fn block_diagonal_minors_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..5 {
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            let mut m = PolyMatrix::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i, j, a.get(i, j).clone());
                    m.set(i + 2, j + 2, b.get(i, j).clone());
                }
            }
            assert_eq!(m.det(), &det_naive(&a) * &det_naive(&b));
            // A 2x2 minor using rows {0,2} and columns {0,2} splits as a
            // product of entries.
            let minors = m.minors(2);
            let row_sets = subsets(4, 2);
            let col_sets = subsets(4, 2);
            let ri = row_sets.iter().position(|s| s == &[0, 2]).unwrap();
            let ci = col_sets.iter().position(|s| s == &[0, 2]).unwrap();
            assert_eq!(minors[ri * 6 + ci], a.get(0, 0) * b.get(0, 0));
        }
    }

    #[test]
    fn det_is_multiplicative_for_two_by_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 2);
            let b = random_matrix(&mut rng, 2, 2);
            assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
        }
    }

    #[test]
    fn minor_count() {
        let m = PolyMatrix::from_rows(vec![vec![p("x"), p("y"), p("1")]; 4]);
        assert_eq!(m.minors(2).len(), 6 * 3);
        assert_eq!(subsets(5, 0), vec![Vec::<usize>::new()]);
    }
}
