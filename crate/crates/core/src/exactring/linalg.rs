//! Exact linear algebra over a [`Field`].
//!
//! [`Matrix`] is a small dense row-major matrix with Gauss-Jordan elimination.
//! [`Echelon`] is the sparse engine used by every truncated length
//! computation: rows are kept in semi-echelon form keyed by their *lowest*
//! nonzero index, which for degree-ordered coordinates is the initial term
//! with respect to the m-adic filtration.

use super::field::Field;

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, F::one());
        }
        m
    }

    /// Panics if the rows have unequal length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
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
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = r.get(i, j).clone() + a.clone() * o.get(k, j).clone();
                    r.set(i, j, v);
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).clone() - f.clone() * self.get(r, j).clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let k = self.rows;
        let mut aug = Self::zeros(k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, k + i, F::one());
        }
        let piv = aug.rref();
        if piv.len() < k || piv[k - 1] >= k {
            return None;
        }
        let mut inv = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                inv.set(i, j, aug.get(i, k + j).clone());
            }
        }
        Some(inv)
    }
}

/// Result of [`rank_and_echelon`].
#[derive(Clone, Debug)]
pub struct EchelonForm<F: Field> {
    pub rank: usize,
    /// Echelon basis of the column span (each vector has `rows` entries).
    pub column_basis: Vec<Vec<F>>,
    /// Basis of the right kernel (each vector has `cols` entries).
    pub kernel: Vec<Vec<F>>,
}

/// Exact rank, an echelon basis of the column span, and a kernel basis.
pub fn rank_and_echelon<F: Field>(m: &Matrix<F>) -> EchelonForm<F> {
    let mut t = m.transpose();
    let tp = t.rref();
    let column_basis = (0..tp.len()).map(|i| t.row(i).to_vec()).collect();

    let mut r = m.clone();
    let pivots = r.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); m.cols()];
        v[free] = F::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free).clone();
        }
        kernel.push(v);
    }
    debug_assert_eq!(tp.len(), pivots.len());
    EchelonForm { rank: pivots.len(), column_basis, kernel }
}

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SparseVec<F> = Vec<(u32, F)>;

const NO_PIVOT: u32 = u32::MAX;

/// Semi-echelon basis keyed by lowest index. Every stored row has leading
/// coefficient one at its pivot and no two rows share a pivot.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    dim: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, pivot_row: vec![NO_PIVOT; dim], rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivot_row[i] != NO_PIVOT
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Rows ordered by pivot.
    pub fn rows_by_pivot(&self) -> impl Iterator<Item = &SparseVec<F>> + '_ {
        self.pivot_row.iter().filter(|&&r| r != NO_PIVOT).map(move |&r| &self.rows[r as usize])
    }

    /// Lowest-term reduction: subtracts pivot rows until the lowest index of
    /// the remainder is not a pivot. Returns the remainder (empty if `v` lies
    /// in the span).
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        let mut v = v;
        // Sparse merging while the vector is short, dense buffer afterwards.
        loop {
            let Some(&(lead, _)) = v.first() else { return v };
            let r = self.pivot_row[lead as usize];
            if r == NO_PIVOT {
                return v;
            }
            if v.len() * 16 > self.dim - lead as usize && v.len() > 8 {
                return self.reduce_dense(v);
            }
            let c = v[0].1.clone();
            v = axpy_sparse(&v, &c, &self.rows[r as usize]);
        }
    }

    fn reduce_dense(&self, v: SparseVec<F>) -> SparseVec<F> {
        let start = v[0].0 as usize;
        let mut buf = vec![F::zero(); self.dim - start];
        for (i, c) in v {
            buf[i as usize - start] = c;
        }
        let mut stop = None;
        for k in 0..buf.len() {
            if buf[k].is_zero() {
                continue;
            }
            let r = self.pivot_row[start + k];
            if r == NO_PIVOT {
                stop = Some(k);
                break;
            }
            let c = buf[k].clone();
            for (j, a) in &self.rows[r as usize] {
                let idx = *j as usize - start;
                let cur = std::mem::replace(&mut buf[idx], F::zero());
                buf[idx] = cur - c.clone() * a.clone();
            }
        }
        match stop {
            None => Vec::new(),
            Some(k) => buf
                .into_iter()
                .enumerate()
                .skip(k)
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ((i + start) as u32, c))
                .collect(),
        }
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduce and, if independent, store. Returns the stored row.
    pub fn insert(&mut self, v: SparseVec<F>) -> Option<&SparseVec<F>> {
        let mut w = self.reduce(v);
        let &(lead, ref c) = w.first()?;
        if !c.is_one() {
            let inv = c.inv();
            for (_, a) in w.iter_mut() {
                *a = a.clone() * inv.clone();
            }
        }
        self.pivot_row[lead as usize] = self.rows.len() as u32;
        self.rows.push(w);
        self.rows.last()
    }

    /// Number of pivots whose index lies in `range`.
    pub fn pivots_in(&self, range: std::ops::Range<usize>) -> usize {
        self.pivot_row[range].iter().filter(|&&r| r != NO_PIVOT).count()
    }
}

/// `v - c * w`, where both are sparse.
pub fn axpy_sparse<F: Field>(v: &SparseVec<F>, c: &F, w: &SparseVec<F>) -> SparseVec<F> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, -(c.clone() * w[j].1.clone())));
            j += 1;
        } else {
            let s = v[i].1.clone() - c.clone() * w[j].1.clone();
            if !s.is_zero() {
                out.push((v[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::field::Gf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, rank: usize) -> Matrix<Gf> {
        // Product of r x rank and rank x c random factors.
        let a = Matrix::from_rows((0..r).map(|_| (0..rank).map(|_| Gf::random(rng)).collect()).collect());
        let b = Matrix::from_rows((0..rank).map(|_| (0..c).map(|_| Gf::random(rng)).collect()).collect());
        a.mul(&b)
    }

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let e = rank_and_echelon(&Matrix::<Gf>::identity(5));
        assert_eq!(e.rank, 5);
        assert!(e.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let e = rank_and_echelon(&Matrix::<Gf>::zeros(3, 4));
        assert_eq!(e.rank, 0);
        assert_eq!(e.kernel.len(), 4);
        for (i, v) in e.kernel.iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                assert_eq!(c.is_one(), i == j);
            }
        }
    }

    #[test]
    fn random_ranks_match_transpose_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let k = rng.gen_range(0..=20);
            let m = random_matrix(&mut rng, 20, 30, k);
            let e = rank_and_echelon(&m);
            let t = rank_and_echelon(&m.transpose());
            assert_eq!(e.rank, t.rank);
            assert_eq!(e.rank, k);
            assert_eq!(e.rank + e.kernel.len(), 30);
            for v in &e.kernel {
                assert!(m.mul_vec(v).iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn echelon_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = random_matrix(&mut rng, 8, 10, 5);
        let mut once = m.clone();
        once.rref();
        let mut twice = once.clone();
        twice.rref();
        assert_eq!(once, twice);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_matrix(&mut rng, 6, 6, 6);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(6));
        assert!(random_matrix(&mut rng, 4, 4, 3).inverse().is_none());
    }

    #[test]
    fn sparse_echelon_agrees_with_dense_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for trial in 0..6 {
            let k = 3 + trial * 4;
            let m = random_matrix(&mut rng, 40, 60, k);
            let mut e = Echelon::new(60);
            for i in 0..40 {
                let v: SparseVec<Gf> =
                    m.row(i).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u32, *c)).collect();
                e.insert(v);
            }
            assert_eq!(e.rank(), k);
            for i in 0..40 {
                let v: SparseVec<Gf> =
                    m.row(i).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u32, *c)).collect();
                assert!(e.contains(v));
            }
        }
    }
}
