//! Finite-dimensional left modules given by action matrices.

use crate::algebra::{to_dense, FinAlgebra};
use crate::field::Field;
use crate::hopf::HopfAlgebra;
use crate::linalg::{invertible_in_span, kernel_of_rows, Echelon, Matrix, SpanSearch, SparseVec, Subspace};
use crate::{Error, Result};

/// A left module: `action[i]` is the matrix of the `i`-th basis element of
/// the acting algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module<F> {
    pub name: String,
    dim: usize,
    action: Vec<Matrix<F>>,
}

impl<F: Field> Module<F> {
    pub fn new(name: impl Into<String>, dim: usize, action: Vec<Matrix<F>>) -> Self {
        for a in &action {
            assert!(a.nrows() == dim && a.ncols() == dim, "action matrix has wrong size");
        }
        Module { name: name.into(), dim, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix<F> {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.action
    }

    /// Matrix of an arbitrary algebra element.
    pub fn act(&self, v: &[F]) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m = m.add_scaled(&self.action[i], c);
            }
        }
        m
    }

    pub fn act_sparse(&self, v: &[(usize, F)]) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, c) in v {
            m = m.add_scaled(&self.action[*i], c);
        }
        m
    }

    pub fn regular(alg: &FinAlgebra<F>) -> Self {
        let action = (0..alg.dim()).map(|i| alg.left_mult_basis(i)).collect();
        Module::new(format!("regular {}", alg.name), alg.dim(), action)
    }

    /// One-dimensional module of an algebra map `chi`.
    pub fn character(name: impl Into<String>, chi: &[F]) -> Self {
        let action = chi.iter().map(|c| Matrix::scalar(1, c)).collect();
        Module::new(name, 1, action)
    }

    /// Extends an action given on algebra generators to every basis element.
    ///
    /// Products of generators are enumerated until they span the algebra;
    /// each basis element is then expressed through them.
    pub fn from_generators(name: impl Into<String>, alg: &FinAlgebra<F>, dim: usize, gens: &[(usize, Matrix<F>)]) -> Result<Self> {
        let n = alg.dim();
        let mut words: Vec<(Vec<F>, Matrix<F>)> = vec![(alg.unit().to_vec(), Matrix::identity(dim))];
        let mut e = Echelon::new(n);
        e.insert_dense(alg.unit());
        let mut k = 0;
        while k < words.len() && e.rank() < n {
            let (v, m) = words[k].clone();
            for (g, gm) in gens {
                let w = alg.mul(&v, &alg.basis(*g));
                if e.insert_dense(&w) {
                    words.push((w, m.mul(gm)));
                }
            }
            k += 1;
        }
        if e.rank() < n {
            return Err(Error::Axiom("generators do not generate the algebra".into()));
        }
        let cols: Vec<Vec<F>> = words.iter().map(|(v, _)| v.clone()).collect();
        let basis_change = Matrix::from_columns(n, &cols);
        let inv = basis_change.inverse().ok_or(Error::Singular)?;
        let mut action = Vec::with_capacity(n);
        for i in 0..n {
            let c = inv.column(i);
            let mut m = Matrix::zeros(dim, dim);
            for (j, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m = m.add_scaled(&words[j].1, x);
                }
            }
            action.push(m);
        }
        let module = Module::new(name, dim, action);
        let fails = module.check(alg);
        if !fails.is_empty() {
            return Err(Error::Axiom(format!("generator action does not define a module: {}", fails[0])));
        }
        Ok(module)
    }

    /// Failed module axioms.
    pub fn check(&self, alg: &FinAlgebra<F>) -> Vec<String> {
        let n = alg.dim();
        let mut fails = Vec::new();
        if self.action.len() != n {
            fails.push(format!("{} action matrices for an algebra of dimension {n}", self.action.len()));
            return fails;
        }
        if !self.act(alg.unit()).is_identity() {
            fails.push("unit does not act as identity".into());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.action[i].mul(&self.action[j]);
                if lhs != self.act_sparse(alg.mul_basis(i, j)) {
                    fails.push(format!("action not multiplicative on ({}, {})", alg.labels[i], alg.labels[j]));
                    if fails.len() > 3 {
                        return fails;
                    }
                }
            }
        }
        fails
    }

    /// The module with action `a * m = phi(a) m`; columns of `phi` are images.
    pub fn twist(&self, phi: &Matrix<F>, name: impl Into<String>) -> Self {
        let n = self.action.len();
        let action = (0..n).map(|i| self.act(&phi.column(i))).collect();
        Module::new(name, self.dim, action)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut trip: Vec<(usize, usize, F)> = a.triplets().map(|(i, j, v)| (i, j, v.clone())).collect();
                trip.extend(b.triplets().map(|(i, j, v)| (i + self.dim, j + self.dim, v.clone())));
                Matrix::from_triplets(d, d, trip)
            })
            .collect();
        Module::new(format!("{} + {}", self.name, other.name), d, action)
    }
}

/// Tensor product of modules over a Hopf algebra, via the comultiplication.
pub fn tensor_h<F: Field>(h: &HopfAlgebra<F>, x: &Module<F>, y: &Module<F>) -> Module<F> {
    let action = (0..h.dim())
        .map(|i| {
            let mut m = Matrix::zeros(x.dim() * y.dim(), x.dim() * y.dim());
            for (p, q, c) in h.comult_basis(i) {
                m = m.add_scaled(&x.action(*p).kron(y.action(*q)), c);
            }
            m
        })
        .collect();
    Module::new(format!("{} (x) {}", x.name, y.name), x.dim() * y.dim(), action)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualSide {
    /// `<h f, x> = <f, S(h) x>`
    Left,
    /// `<h f, x> = <f, S^-1(h) x>`
    Right,
}

pub fn dual_module<F: Field>(h: &HopfAlgebra<F>, x: &Module<F>, side: DualSide) -> Result<Module<F>> {
    let s = match side {
        DualSide::Left => h.antipode().clone(),
        DualSide::Right => h.s_inv()?,
    };
    let action = (0..h.dim()).map(|i| x.act(&s.column(i)).transpose()).collect();
    let tag = if side == DualSide::Left { "*" } else { "^*" };
    Ok(Module::new(format!("{}{tag}", x.name), x.dim(), action))
}

/// `X**` transported to `X` along the canonical identification: `h` acts by `S^2(h)`.
pub fn double_dual<F: Field>(h: &HopfAlgebra<F>, x: &Module<F>) -> Module<F> {
    let s2 = h.antipode().mul(h.antipode());
    let action = (0..h.dim()).map(|i| x.act(&s2.column(i))).collect();
    Module::new(format!("{}**", x.name), x.dim(), action)
}

pub fn trivial_module<F: Field>(h: &HopfAlgebra<F>) -> Module<F> {
    Module::character("trivial", h.counit())
}

fn vec_index(dim_src: usize, u: usize, w: usize) -> usize {
    u * dim_src + w
}

/// Intertwiner space `{T : T rho_M(e_g) = rho_N(e_g) T}` over the given
/// generator indices; elements are `dim N x dim M` matrices flattened row-major.
pub fn intertwiners<F: Field>(gens: &[usize], m: &Module<F>, n: &Module<F>) -> Subspace<F> {
    let mats: Vec<(Matrix<F>, Matrix<F>)> = gens.iter().map(|&g| (m.action(g).clone(), n.action(g).clone())).collect();
    intertwiners_of(&mats, m.dim(), n.dim())
}

/// Same as [`intertwiners`] for explicit pairs `(rho_M(a), rho_N(a))`.
pub fn intertwiners_of<F: Field>(pairs: &[(Matrix<F>, Matrix<F>)], dm: usize, dn: usize) -> Subspace<F> {
    let mut rows: Vec<SparseVec<F>> = Vec::new();
    for (am, an) in pairs {
        let amt = am.transpose();
        for u in 0..dn {
            for w in 0..dm {
                // sum_w' T[u,w'] am[w',w] - sum_u' an[u,u'] T[u',w]
                let mut eq: Vec<(usize, F)> = Vec::new();
                for (wp, c) in amt.row(w) {
                    eq.push((vec_index(dm, u, *wp), c.clone()));
                }
                for (up, c) in an.row(u) {
                    eq.push((vec_index(dm, *up, w), -c.clone()));
                }
                let eq = crate::algebra::normalize1(eq);
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
    }
    kernel_of_rows(dm * dn, rows.iter().map(|r| r.as_slice()))
}

pub fn unflatten<F: Field>(v: &[F], rows: usize, cols: usize) -> Matrix<F> {
    Matrix::from_dense(rows, cols, v.chunks(cols).map(|c| c.to_vec()).collect())
}

pub fn flatten<F: Field>(m: &Matrix<F>) -> Vec<F> {
    m.to_dense().into_iter().flatten().collect()
}

/// Some module isomorphism `M -> N`, if one exists.
pub fn modules_isomorphic<F: Field>(alg: &FinAlgebra<F>, m: &Module<F>, n: &Module<F>) -> Result<Option<Matrix<F>>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let space = intertwiners(alg.generators(), m, n);
    isomorphism_in(&space, m.dim())
}

pub fn isomorphism_in<F: Field>(space: &Subspace<F>, d: usize) -> Result<Option<Matrix<F>>> {
    let mats: Vec<Matrix<F>> = space.basis().iter().map(|v| unflatten(v, d, d)).collect();
    match invertible_in_span(&mats)? {
        SpanSearch::Found(w) => Ok(Some(w.matrix)),
        SpanSearch::Singular(_) => Ok(None),
    }
}

/// Whether `t` intertwines the two modules on every basis element.
pub fn is_module_map<F: Field>(t: &Matrix<F>, m: &Module<F>, n: &Module<F>) -> bool {
    m.actions().iter().zip(n.actions()).all(|(a, b)| t.mul(a) == b.mul(t))
}

/// Action of an algebra element on a sparse vector of coefficients.
pub fn dense_of<F: Field>(n: usize, v: &[(usize, F)]) -> Vec<F> {
    to_dense(n, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_taft;
    use crate::{CyclotomicField, Q3};

    #[test]
    fn duals_of_characters() {
        let h = build_taft::<Q3>(3, 1).unwrap();
        let triv = trivial_module(&h);
        for side in [DualSide::Left, DualSide::Right] {
            assert_eq!(dual_module(&h, &triv, side).unwrap().actions(), triv.actions());
        }
        // g acts by w on chi1, by w^-1 on its dual
        let x = Module::character("chi1", &h.characters[1].1);
        let g = h.alg.labels.iter().position(|l| l == "g").unwrap();
        let d = dual_module(&h, &x, DualSide::Left).unwrap();
        assert_eq!(d.action(g), &Matrix::scalar(1, &Q3::zeta_pow(2)));
        let dd = dual_module(&h, &d, DualSide::Left).unwrap();
        assert_eq!(dd.actions(), double_dual(&h, &x).actions());
    }

    #[test]
    fn regular_and_tensor() {
        let h = build_taft::<Q3>(3, 1).unwrap();
        let reg = Module::regular(&h.alg);
        assert!(reg.check(&h.alg).is_empty());
        let t = tensor_h(&h, &reg, &trivial_module(&h));
        assert!(t.check(&h.alg).is_empty());
        assert!(modules_isomorphic(&h.alg, &t, &reg).unwrap().is_some());
        let s = reg.direct_sum(&trivial_module(&h));
        assert_eq!(s.dim(), 10);
        assert!(s.check(&h.alg).is_empty());
        // a broken action is reported
        let mut acts = reg.actions().to_vec();
        acts[1] = Matrix::identity(9);
        assert!(!Module::new("bad", 9, acts).check(&h.alg).is_empty());
    }
}
