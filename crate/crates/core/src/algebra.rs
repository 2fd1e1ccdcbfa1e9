//! Finite-dimensional associative algebras given by structure constants.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::linalg::{unit_vector, Echelon, Matrix, SparseVec};

/// Element of a tensor product `A (x) B` as `(i, j, coefficient)` triples,
/// sorted and without zero coefficients.
pub type Tensor2<F> = Vec<(usize, usize, F)>;
pub type Tensor3<F> = Vec<(usize, usize, usize, F)>;

pub fn normalize2<F: Field>(terms: impl IntoIterator<Item = (usize, usize, F)>) -> Tensor2<F> {
    let mut acc: BTreeMap<(usize, usize), F> = BTreeMap::new();
    for (i, j, c) in terms {
        if c.is_zero() {
            continue;
        }
        match acc.get_mut(&(i, j)) {
            Some(v) => *v += &c,
            None => {
                acc.insert((i, j), c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((i, j), c)| (i, j, c)).collect()
}

pub fn normalize3<F: Field>(terms: impl IntoIterator<Item = (usize, usize, usize, F)>) -> Tensor3<F> {
    let mut acc: BTreeMap<(usize, usize, usize), F> = BTreeMap::new();
    for (i, j, k, c) in terms {
        if c.is_zero() {
            continue;
        }
        match acc.get_mut(&(i, j, k)) {
            Some(v) => *v += &c,
            None => {
                acc.insert((i, j, k), c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((i, j, k), c)| (i, j, k, c)).collect()
}

pub fn normalize1<F: Field>(terms: impl IntoIterator<Item = (usize, F)>) -> SparseVec<F> {
    let mut acc: BTreeMap<usize, F> = BTreeMap::new();
    for (i, c) in terms {
        if c.is_zero() {
            continue;
        }
        match acc.get_mut(&i) {
            Some(v) => *v += &c,
            None => {
                acc.insert(i, c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn to_dense<F: Field>(n: usize, v: &[(usize, F)]) -> Vec<F> {
    let mut d = vec![F::zero(); n];
    for (i, c) in v {
        d[*i] += c;
    }
    d
}

#[derive(Clone, Debug)]
pub struct FinAlgebra<F> {
    pub name: String,
    pub labels: Vec<String>,
    mult: Vec<Vec<SparseVec<F>>>,
    unit: Vec<F>,
    generators: Vec<usize>,
}

impl<F: Field> FinAlgebra<F> {
    /// `mult[i][j]` is the product `e_i e_j`. `generators` lists basis
    /// elements generating the algebra; it defaults to the whole basis.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        mult: Vec<Vec<SparseVec<F>>>,
        unit: Vec<F>,
        generators: Option<Vec<usize>>,
    ) -> Self {
        let n = labels.len();
        assert_eq!(mult.len(), n);
        assert_eq!(unit.len(), n);
        let generators = generators.unwrap_or_else(|| (0..n).collect());
        FinAlgebra { name: name.into(), labels, mult, unit, generators }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> &[F] {
        &self.unit
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn set_generators(&mut self, g: Vec<usize>) {
        self.generators = g;
    }

    pub fn basis(&self, i: usize) -> Vec<F> {
        unit_vector(self.dim(), i)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.mult[i][j]
    }

    pub fn mul(&self, a: &[F], b: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.mul_ref(y);
                for (k, c) in &self.mult[i][j] {
                    out[*k].add_mul(&xy, c);
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, a: &[(usize, F)], b: &[(usize, F)]) -> SparseVec<F> {
        let mut terms = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x.mul_ref(y);
                for (k, c) in &self.mult[*i][*j] {
                    terms.push((*k, xy.mul_ref(c)));
                }
            }
        }
        normalize1(terms)
    }

    /// Matrix of `x -> a x`.
    pub fn left_mult(&self, a: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut trip = Vec::new();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.mult[i][j] {
                    trip.push((*k, j, x.mul_ref(c)));
                }
            }
        }
        Matrix::from_triplets(n, n, trip)
    }

    /// Matrix of `x -> x a`.
    pub fn right_mult(&self, a: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut trip = Vec::new();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.mult[j][i] {
                    trip.push((*k, j, x.mul_ref(c)));
                }
            }
        }
        Matrix::from_triplets(n, n, trip)
    }

    pub fn left_mult_basis(&self, i: usize) -> Matrix<F> {
        self.left_mult(&self.basis(i))
    }

    pub fn right_mult_basis(&self, i: usize) -> Matrix<F> {
        self.right_mult(&self.basis(i))
    }

    pub fn inverse(&self, a: &[F]) -> Option<Vec<F>> {
        let l = self.left_mult(a);
        let x = l.solve(&self.unit)?;
        // a x = 1 in a finite-dimensional algebra forces x a = 1
        Some(x)
    }

    pub fn is_unit_element(&self, a: &[F]) -> bool {
        self.left_mult(a).is_invertible()
    }

    /// Failed associativity or unit checks, by basis index.
    pub fn check_axioms(&self) -> Vec<String> {
        let n = self.dim();
        let mut fails = Vec::new();
        for i in 0..n {
            let ei = self.basis(i);
            if self.mul(&self.unit, &ei) != ei || self.mul(&ei, &self.unit) != ei {
                fails.push(format!("unit fails on {}", self.labels[i]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.mult[i][j];
                for k in 0..n {
                    // (e_i e_j) e_k vs e_i (e_j e_k)
                    let left = self.mul_sparse(ij, &[(k, F::one())]);
                    let right = self.mul_sparse(&[(i, F::one())], &self.mult[j][k]);
                    if left != right {
                        fails.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                        if fails.len() > 10 {
                            return fails;
                        }
                    }
                }
            }
        }
        if !self.generates(&self.generators) {
            fails.push("declared generators do not generate the algebra".into());
        }
        fails
    }

    /// Whether the given basis elements generate the algebra.
    pub fn generates(&self, gens: &[usize]) -> bool {
        let n = self.dim();
        let mut e = Echelon::new(n);
        let mut frontier = vec![self.unit.clone()];
        e.insert_dense(&self.unit);
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.mul(&v, &self.basis(g));
                if e.insert_dense(&w) {
                    frontier.push(w);
                }
            }
        }
        e.rank() == n
    }

    /// Structure constants as `(i, j, k, c)` with `e_i e_j = sum c e_k`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &F)> + '_ {
        self.mult.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().flat_map(move |(j, v)| v.iter().map(move |(k, c)| (i, j, *k, c)))
        })
    }

    /// Whether `phi` (columns are images of basis elements) is an algebra map.
    pub fn is_algebra_endomorphism(&self, phi: &Matrix<F>) -> bool {
        let n = self.dim();
        if phi.apply(&self.unit) != self.unit {
            return false;
        }
        let imgs: Vec<Vec<F>> = (0..n).map(|i| phi.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = phi.apply(&to_dense(n, &self.mult[i][j]));
                if lhs != self.mul(&imgs[i], &imgs[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Product in `self (x) other`.
    pub fn tensor_mul(&self, other: &Self, x: &[(usize, usize, F)], y: &[(usize, usize, F)]) -> Tensor2<F> {
        let mut terms = Vec::new();
        for (a, b, c) in x {
            for (a2, b2, c2) in y {
                let cc = c.mul_ref(c2);
                for (p, u) in &self.mult[*a][*a2] {
                    let cu = cc.mul_ref(u);
                    for (q, v) in &other.mult[*b][*b2] {
                        terms.push((*p, *q, cu.mul_ref(v)));
                    }
                }
            }
        }
        normalize2(terms)
    }
}

/// Builds a structure-constant table from a product on basis indices.
pub fn table_from_fn<F: Field>(n: usize, mut f: impl FnMut(usize, usize) -> SparseVec<F>) -> Vec<Vec<SparseVec<F>>> {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}
