//! Exact linear algebra over a [`Field`].
//!
//! Matrices are stored as sparse rows. Elimination is Gauss-Jordan on a dense
//! work row; determinants use Bareiss elimination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::{Error, Result};

pub type SparseVec<F> = Vec<(usize, F)>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

fn compress<F: Field>(dense: Vec<F>) -> SparseVec<F> {
    dense.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, F::one())]).collect() }
    }

    pub fn scalar(n: usize, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(n, n);
        }
        Matrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, c.clone())]).collect() }
    }

    pub fn from_dense(rows: usize, cols: usize, dense: Vec<Vec<F>>) -> Self {
        assert_eq!(dense.len(), rows);
        let data = dense
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                compress(r)
            })
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let data = (0..rows)
            .map(|i| (0..cols).filter_map(|j| Some((j, f(i, j))).filter(|(_, v)| !v.is_zero())).collect())
            .collect();
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, F)>) -> Self {
        let mut buckets: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) out of bounds");
            if !v.is_zero() {
                buckets[i].push((j, v));
            }
        }
        let data = buckets.into_iter().map(|b| merge_sorted(b)).collect();
        Matrix { rows, cols, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut trip = Vec::new();
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    trip.push((i, j, v.clone()));
                }
            }
        }
        Self::from_triplets(rows, columns.len(), trip)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, F)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![F::zero(); self.cols];
                for (j, v) in r {
                    d[*j] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut buf = vec![F::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            for (k, a) in r {
                for (j, b) in &other.data[*k] {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    buf[*j].add_mul(a, b);
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                mark[j] = false;
                let v = std::mem::replace(&mut buf[j], F::zero());
                if !v.is_zero() {
                    out.push((j, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sparse_axpy(a, b, &F::one())).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m1 = -F::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sparse_axpy(a, b, &m1)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &Self, c: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c.is_zero() {
            return self.clone();
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sparse_axpy(a, b, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, v)| (*j, v.mul_ref(c))).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| {
                let mut acc = F::zero();
                for (j, a) in r {
                    acc.add_mul(a, &v[*j]);
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; `e_i (x) f_j` has index `i * other.ncols() + j`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut trip = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, a) in self.triplets() {
            for (k, l, b) in other.triplets() {
                trip.push((i * other.rows + k, j * other.cols + l, a.mul_ref(b)));
            }
        }
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, trip)
    }

    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks[0].rows;
        let mut trip = Vec::new();
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            trip.extend(b.triplets().map(|(i, j, v)| (i, j + off, v.clone())));
            off += b.cols;
        }
        Self::from_triplets(rows, off, trip)
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let cols = blocks[0].cols;
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows: data.len(), cols, data }
    }

    pub fn echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert_sparse(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut e = self.echelon();
        e.reduce_fully();
        let (rows, pivots) = e.into_sorted_rows();
        let mut data = rows;
        let r = data.len();
        data.resize(self.rows.max(r), Vec::new());
        (Matrix { rows: self.rows.max(r), cols: self.cols, data }, pivots)
    }

    pub fn kernel(&self) -> Subspace<F> {
        kernel_of_rows(self.cols, self.data.iter().map(|r| r.as_slice()))
    }

    /// Some `x` with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let mut e = Echelon::new(n + 1);
        for (r, bi) in self.data.iter().zip(b) {
            let mut row = r.clone();
            if !bi.is_zero() {
                row.push((n, bi.clone()));
            }
            e.insert_sparse(&row);
        }
        if e.pivot_row(n).is_some() {
            return None;
        }
        e.reduce_fully();
        let mut x = vec![F::zero(); n];
        for row in &e.rows {
            let p = row[0].0;
            if let Some((_, v)) = row.iter().find(|(c, _)| *c == n) {
                x[p] = v.clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut e = Echelon::new(2 * n);
        for (i, r) in self.data.iter().enumerate() {
            let mut row = r.clone();
            row.push((n + i, F::one()));
            e.insert_sparse(&row);
        }
        if (0..n).any(|c| e.pivot_row(c).is_none()) {
            return None;
        }
        e.reduce_fully();
        let mut data = vec![Vec::new(); n];
        for row in e.rows {
            let p = row[0].0;
            data[p] = row.into_iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v)).collect();
        }
        Some(Matrix { rows: n, cols: n, data })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut a = self.to_dense();
        let mut prev = F::one();
        let mut sign = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = !sign;
                    }
                    None => return F::zero(),
                }
            }
            let prev_inv = prev.inv().expect("Bareiss pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let mut v = a[i][j].mul_ref(&a[k][k]);
                    v -= &a[i][k].mul_ref(&a[k][j]);
                    a[i][j] = v.mul_ref(&prev_inv);
                }
                a[i][k] = F::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self.get(i, i);
        }
        t
    }
}

fn merge_sorted<F: Field>(mut v: Vec<(usize, F)>) -> SparseVec<F> {
    v.sort_by_key(|(j, _)| *j);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (j, x) in v {
        match out.last_mut() {
            Some((k, y)) if *k == j => *y += &x,
            _ => out.push((j, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a + c * b` for sorted sparse vectors.
pub fn sparse_axpy<F: Field>(a: &[(usize, F)], b: &[(usize, F)], c: &F) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, b[j].1.mul_ref(c)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v.add_mul(&b[j].1, c);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form. Each stored row has leading entry one.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    n: usize,
    rows: Vec<SparseVec<F>>,
    pivot_of_col: Vec<Option<usize>>,
    work: Vec<F>,
}

impl<F: Field> Echelon<F> {
    pub fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new(), pivot_of_col: vec![None; n], work: vec![F::zero(); n] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn pivot_row(&self, col: usize) -> Option<usize> {
        self.pivot_of_col[col]
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.n).filter(|&c| self.pivot_of_col[c].is_some()).collect()
    }

    fn reduce_work(&mut self, from: usize) -> Option<usize> {
        let mut lead = None;
        for c in from..self.n {
            if self.work[c].is_zero() {
                continue;
            }
            match self.pivot_of_col[c] {
                Some(p) => {
                    let f = std::mem::replace(&mut self.work[c], F::zero());
                    for (j, v) in self.rows[p].iter().skip(1) {
                        let mut t = v.mul_ref(&f);
                        t = -t;
                        self.work[*j] += &t;
                    }
                }
                None => {
                    if lead.is_none() {
                        lead = Some(c);
                    }
                }
            }
        }
        lead
    }

    /// Reduces `v` against the stored rows; the remainder is returned sparse.
    pub fn reduce(&mut self, v: &[(usize, F)]) -> SparseVec<F> {
        let Some(from) = v.first().map(|(c, _)| *c) else { return Vec::new() };
        for (c, x) in v {
            self.work[*c] = x.clone();
        }
        self.reduce_work(from);
        let mut out = Vec::new();
        for c in from..self.n {
            let x = std::mem::replace(&mut self.work[c], F::zero());
            if !x.is_zero() {
                out.push((c, x));
            }
        }
        out
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn insert_sparse(&mut self, v: &[(usize, F)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].0;
        let inv = r[0].1.inv().expect("nonzero leading entry");
        let row: SparseVec<F> = r.into_iter().map(|(c, x)| (c, x.mul_ref(&inv))).collect();
        self.pivot_of_col[lead] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, v: &[F]) -> bool {
        let s: SparseVec<F> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        self.insert_sparse(&s)
    }

    pub fn contains_dense(&mut self, v: &[F]) -> bool {
        let s: SparseVec<F> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        self.reduce(&s).is_empty()
    }

    /// Eliminates every pivot column from all other rows.
    pub fn reduce_fully(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        for r in order {
            let row = std::mem::take(&mut self.rows[r]);
            let lead = row[0].0;
            for (c, x) in &row {
                self.work[*c] = x.clone();
            }
            // entries at pivot columns of rows below are eliminated; those rows are already reduced
            for c in lead + 1..self.n {
                if self.work[c].is_zero() {
                    continue;
                }
                if let Some(p) = self.pivot_of_col[c] {
                    if p == r {
                        continue;
                    }
                    let f = std::mem::replace(&mut self.work[c], F::zero());
                    for (j, v) in self.rows[p].iter().skip(1) {
                        let t = -v.mul_ref(&f);
                        self.work[*j] += &t;
                    }
                }
            }
            let mut out = Vec::new();
            for c in lead..self.n {
                let x = std::mem::replace(&mut self.work[c], F::zero());
                if !x.is_zero() {
                    out.push((c, x));
                }
            }
            self.rows[r] = out;
        }
    }

    fn into_sorted_rows(self) -> (Vec<SparseVec<F>>, Vec<usize>) {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let piv = rows.iter().map(|r| r[0].0).collect();
        (rows, piv)
    }

    /// Basis of the null space of the stored rows.
    pub fn null_space(mut self) -> Subspace<F> {
        self.reduce_fully();
        let n = self.n;
        let free: Vec<usize> = (0..n).filter(|&c| self.pivot_of_col[c].is_none()).collect();
        let mut index_of_free = vec![usize::MAX; n];
        for (k, &f) in free.iter().enumerate() {
            index_of_free[f] = k;
        }
        let mut basis: Vec<Vec<F>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); n];
                v[f] = F::one();
                v
            })
            .collect();
        for row in &self.rows {
            let p = row[0].0;
            for (c, x) in row.iter().skip(1) {
                let k = index_of_free[*c];
                debug_assert!(k != usize::MAX);
                basis[k][p] = -x.clone();
            }
        }
        Subspace::from_parts(n, basis, free)
    }
}

/// Null space of the system whose equations are the given sparse rows.
pub fn kernel_of_rows<'a, F: Field>(n: usize, rows: impl IntoIterator<Item = &'a [(usize, F)]>) -> Subspace<F> {
    let mut e = Echelon::new(n);
    for r in rows {
        e.insert_sparse(r);
    }
    e.null_space()
}

/// A linear subspace of `F^n` with a basis in which coordinates can be read
/// off directly: `basis[k][coord_pos[j]] == delta(k, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    coord_pos: Vec<usize>,
    sparse: Vec<SparseVec<F>>,
}

impl<F: Field> Subspace<F> {
    fn from_parts(ambient: usize, basis: Vec<Vec<F>>, coord_pos: Vec<usize>) -> Self {
        let sparse = basis
            .iter()
            .map(|b| b.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
            .collect();
        Subspace { ambient, basis, coord_pos, sparse }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), coord_pos: Vec::new(), sparse: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &(0..ambient).map(|i| unit_vector(ambient, i)).collect::<Vec<_>>())
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient);
            e.insert_dense(v);
        }
        e.reduce_fully();
        let (rows, pivots) = e.into_sorted_rows();
        let basis = rows
            .into_iter()
            .map(|r| {
                let mut d = vec![F::zero(); ambient];
                for (c, x) in r {
                    d[c] = x;
                }
                d
            })
            .collect();
        Subspace::from_parts(ambient, basis, pivots)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<F>> {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        let c: Vec<F> = self.coord_pos.iter().map(|&p| v[p].clone()).collect();
        let back = self.combine(&c);
        if back.as_slice() == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coords(v).is_some()
    }

    pub fn combine(&self, coeffs: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.sparse) {
            if c.is_zero() {
                continue;
            }
            for (i, x) in b {
                out[*i].add_mul(c, x);
            }
        }
        out
    }

    pub fn intersect(&self, other: &Self) -> Self {
        // a = sum x_i u_i = sum y_j w_j
        let n = self.ambient;
        let k = self.dim();
        let l = other.dim();
        let cols: Vec<Vec<F>> = self.basis.iter().cloned().chain(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect())).collect();
        let m = Matrix::from_columns(n, &cols);
        let ker = m.kernel();
        let vecs: Vec<Vec<F>> = ker.basis.iter().map(|c| self.combine(&c[..k])).collect();
        let _ = l;
        Self::span(n, &vecs)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let all: Vec<Vec<F>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span(self.ambient, &all)
    }
}

pub fn unit_vector<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

/// An invertible element `sum coeffs[i] * gens[i]` of a span of square matrices.
#[derive(Clone, Debug)]
pub struct SpanWitness<F> {
    pub coeffs: Vec<F>,
    pub matrix: Matrix<F>,
}

/// How a negative answer of [`invertible_in_span`] was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularCertificate {
    EmptySpan,
    CommonKernel,
    DeficientImage,
    ExhaustiveGrid,
}

#[derive(Clone, Debug)]
pub enum SpanSearch<F> {
    Found(SpanWitness<F>),
    Singular(SingularCertificate),
}

/// Largest number of grid points tried before falling back to random probing.
pub const GRID_BUDGET: usize = 20_000;
const RANDOM_TRIALS: usize = 64;

/// Decides whether the span of `gens` contains an invertible matrix.
///
/// A nonzero determinant polynomial of degree at most `rank(G_i)` in the
/// `i`-th coefficient cannot vanish on the grid `prod {0..=rank(G_i)}`, so the
/// grid search is complete. When the grid exceeds [`GRID_BUDGET`] and no
/// structural certificate applies, seeded random combinations are tried and
/// `Error::Undecided` is returned if none is invertible.
pub fn invertible_in_span<F: Field>(gens: &[Matrix<F>]) -> Result<SpanSearch<F>> {
    let Some(first) = gens.first() else { return Ok(SpanSearch::Singular(SingularCertificate::EmptySpan)) };
    let n = first.nrows();
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::Dimension("span generators must be square of equal size".into()));
        }
    }
    let k = gens.len();
    let found = |coeffs: Vec<F>| -> Option<SpanSearch<F>> {
        let m = combine_matrices(gens, &coeffs);
        if m.is_invertible() {
            Some(SpanSearch::Found(SpanWitness { coeffs, matrix: m }))
        } else {
            None
        }
    };
    for i in 0..k {
        let mut c = vec![F::zero(); k];
        c[i] = F::one();
        if let Some(w) = found(c) {
            return Ok(w);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let mut c = vec![F::zero(); k];
            c[i] = F::one();
            c[j] = F::one();
            if let Some(w) = found(c) {
                return Ok(w);
            }
        }
    }
    if n == 0 {
        return Ok(SpanSearch::Found(SpanWitness { coeffs: vec![F::zero(); k], matrix: Matrix::zeros(0, 0) }));
    }
    let refs: Vec<&Matrix<F>> = gens.iter().collect();
    if Matrix::vstack(&refs).rank() < n {
        return Ok(SpanSearch::Singular(SingularCertificate::CommonKernel));
    }
    if Matrix::hstack(&refs).rank() < n {
        return Ok(SpanSearch::Singular(SingularCertificate::DeficientImage));
    }
    let degs: Vec<usize> = gens.iter().map(|g| g.rank()).collect();
    let grid: Option<usize> = degs.iter().try_fold(1usize, |acc, d| acc.checked_mul(d + 1));
    if let Some(size) = grid.filter(|&s| s <= GRID_BUDGET) {
        let mut idx = vec![0usize; k];
        for _ in 0..size {
            if idx.iter().filter(|&&x| x > 0).count() > 2 || idx.iter().any(|&x| x > 1) {
                let c: Vec<F> = idx.iter().map(|&x| F::from_int(x as i64)).collect();
                if let Some(w) = found(c) {
                    return Ok(w);
                }
            }
            for p in 0..k {
                idx[p] += 1;
                if idx[p] <= degs[p] {
                    break;
                }
                idx[p] = 0;
            }
        }
        return Ok(SpanSearch::Singular(SingularCertificate::ExhaustiveGrid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_5a11);
    for _ in 0..RANDOM_TRIALS {
        let c: Vec<F> = (0..k).map(|_| F::from_int(rng.gen_range(-1000..=1000))).collect();
        if let Some(w) = found(c) {
            return Ok(w);
        }
    }
    Err(Error::Undecided(RANDOM_TRIALS))
}

pub fn combine_matrices<F: Field>(gens: &[Matrix<F>], coeffs: &[F]) -> Matrix<F> {
    let mut m = Matrix::zeros(gens[0].nrows(), gens[0].ncols());
    for (g, c) in gens.iter().zip(coeffs) {
        if !c.is_zero() {
            m = m.add_scaled(g, c);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CyclotomicField, Q3};
    use num_traits::{One, Zero};

    fn q(n: i64) -> Q3 {
        Q3::from_int(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Q3> {
        Matrix::from_dense(rows.len(), rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.dim(), 1);
        let v = &k.basis()[0];
        assert!(a.apply(v).iter().all(|x| x.is_zero()));
        assert_eq!(a.determinant(), Q3::zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let z = Q3::zeta_pow(1);
        let a = Matrix::from_dense(2, 2, vec![vec![z.clone(), q(1)], vec![q(0), q(1) + z.clone()]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.determinant(), z.clone() * (q(1) + z));
    }

    #[test]
    fn solve_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = a.solve(&[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let s = m(&[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn kron_ordering() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), q(1));
        assert_eq!(k.get(1, 2), q(2));
        assert_eq!(k.get(3, 2), q(4));
        assert_eq!(k.determinant(), a.determinant().pow(2) * b.determinant().pow(2));
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::span(3, &[vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]]);
        let v = vec![q(2), q(5), q(3)];
        let c = s.coords(&v).unwrap();
        assert_eq!(s.combine(&c), v);
        assert!(!s.contains(&[q(1), q(0), q(0)]));
        let t = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        assert_eq!(s.intersect(&t).dim(), 1);
        assert_eq!(s.sum(&t).dim(), 3);
    }

    #[test]
    fn span_search_needs_combination() {
        // E11 + E22 only appears as a sum
        let e11 = m(&[&[1, 0], &[0, 0]]);
        let e22 = m(&[&[0, 0], &[0, 1]]);
        match invertible_in_span(&[e11, e22]).unwrap() {
            SpanSearch::Found(w) => assert!(w.matrix.is_identity()),
            _ => panic!("expected a witness"),
        }
        let n1 = m(&[&[0, 1], &[0, 0]]);
        let n2 = m(&[&[0, 0], &[0, 0]]);
        assert!(matches!(invertible_in_span(&[n1, n2]).unwrap(), SpanSearch::Singular(_)));
    }

    #[test]
    fn span_search_beyond_pairs() {
        // det(x E11 + y E22 + z E33) = xyz vanishes on units and pairwise sums
        let e = |i: usize| Matrix::<Q3>::from_triplets(3, 3, vec![(i, i, Q3::one())]);
        match invertible_in_span(&[e(0), e(1), e(2)]).unwrap() {
            SpanSearch::Found(w) => assert_eq!(w.coeffs, vec![q(1), q(1), q(1)]),
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn small_worked_cases() {
        let z = Q3::zeta_pow(1);
        let zi = Q3::zeta_pow(2);
        let i2 = Matrix::<Q3>::identity(2);
        assert_eq!(i2.solve(&[q(1), z.clone()]).unwrap(), vec![q(1), z.clone()]);
        assert!(Matrix::<Q3>::zeros(2, 2).solve(&[q(1), q(0)]).is_none());
        let a = Matrix::from_dense(2, 2, vec![vec![q(1), q(1)], vec![q(0), z.clone()]]);
        assert_eq!(a.solve(&[q(0), q(1)]).unwrap(), vec![-zi.clone(), zi.clone()]);

        assert!(Matrix::<Q3>::identity(4).kernel().is_zero());
        assert_eq!(Matrix::<Q3>::zeros(2, 5).kernel().dim(), 5);
        let row = Matrix::from_dense(1, 2, vec![vec![q(1), z.clone()]]);
        let k = row.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[-z.clone(), q(1)]));

        let d = Matrix::from_dense(2, 2, vec![vec![z.clone(), q(0)], vec![q(0), q(1)]]);
        let di = Matrix::from_dense(2, 2, vec![vec![zi.clone(), q(0)], vec![q(0), q(1)]]);
        assert_eq!(d.inverse().unwrap(), di);
        assert_eq!(m(&[&[1, 1], &[1, 0]]).inverse().unwrap(), m(&[&[0, 1], &[1, -1]]));
        assert!(i2.inverse().unwrap().is_identity());

        assert!(i2.kron(&Matrix::identity(3)).is_identity());
        let b = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::scalar(1, &z).kron(&b), b.scale(&z));
        // swap (x) swap permutes e_{2i+j} -> e_{2(1-i)+(1-j)}
        let sw = m(&[&[0, 1], &[1, 0]]);
        let p = sw.kron(&sw);
        for c in 0..4 {
            assert_eq!(p.get(3 - c, c), q(1));
        }
        assert_eq!(p.nnz(), 4);
    }

    #[test]
    fn span_search_trivial_cases() {
        match invertible_in_span(&[Matrix::<Q3>::identity(3)]).unwrap() {
            SpanSearch::Found(w) => {
                assert_eq!(w.coeffs, vec![q(1)]);
                assert!(w.matrix.is_identity());
            }
            _ => panic!("identity spans an invertible"),
        }
        let e12 = m(&[&[0, 1], &[0, 0]]);
        assert!(matches!(invertible_in_span(&[e12]).unwrap(), SpanSearch::Singular(_)));
        assert!(matches!(invertible_in_span::<Q3>(&[]).unwrap(), SpanSearch::Singular(SingularCertificate::EmptySpan)));
    }
}
