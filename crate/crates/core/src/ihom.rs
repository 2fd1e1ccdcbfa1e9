//! Internal Hom of the module category of a comodule algebra, realized as
//! `iHom(M, N) = Hom_L(H (x) M, N)`.
//!
//! Elements are stored as `dim N x (dim H * dim M)` matrices; the column of
//! `h_p (x) m_q` is `p * dim M + q`. `L` acts on `H (x) M` by
//! `a (h (x) m) = a_(-1) h (x) a_(0) m` and `H` acts on `iHom(M, N)` by
//! `(h f)(h' (x) m) = f(h' h (x) m)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::comodule::{ComoduleAlgebra, FrobeniusData};
use crate::field::Field;
use crate::hopf::{HopfAlgebra, IntegralData};
use crate::linalg::{Echelon, Matrix, Subspace};
use crate::module::{dual_module, flatten, intertwiners, is_module_map, modules_isomorphic, tensor_h, unflatten, DualSide, Module};
use crate::{Error, Result};

/// `iHom(M, N)` with a basis and the matrices of the `H`-action in it.
#[derive(Clone, Debug)]
pub struct InternalHomSpace<F> {
    pub source: Module<F>,
    pub target: Module<F>,
    dim_h: usize,
    space: Subspace<F>,
    basis: Vec<Matrix<F>>,
    /// `h_action[i]` has the coordinates of `e_i f_j` in column `j`.
    h_action: Vec<Matrix<F>>,
}

impl<F: Field> InternalHomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<F>] {
        &self.basis
    }

    pub fn h_action(&self, i: usize) -> &Matrix<F> {
        &self.h_action[i]
    }

    /// Matrix of an arbitrary element of `H` in the basis.
    pub fn act(&self, v: &[F]) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m = m.add_scaled(&self.h_action[i], c);
            }
        }
        m
    }

    pub fn as_module(&self) -> Module<F> {
        Module::new(format!("iHom({}, {})", self.source.name, self.target.name), self.dim(), self.h_action.clone())
    }

    pub fn element(&self, coeffs: &[F]) -> Matrix<F> {
        unflatten(&self.space.combine(coeffs), self.target.dim(), self.dim_h * self.source.dim())
    }

    pub fn coords(&self, f: &Matrix<F>) -> Option<Vec<F>> {
        if f.nrows() != self.target.dim() || f.ncols() != self.dim_h * self.source.dim() {
            return None;
        }
        self.space.coords(&flatten(f))
    }

    pub fn contains(&self, f: &Matrix<F>) -> bool {
        self.coords(f).is_some()
    }

    fn coords_or_err(&self, f: &Matrix<F>, what: &str) -> Result<Vec<F>> {
        self.coords(f)
            .ok_or_else(|| Error::Axiom(format!("{what} does not lie in iHom({}, {})", self.source.name, self.target.name)))
    }
}

/// `H (x) M` as a left `L`-module.
pub fn free_module<F: Field>(la: &ComoduleAlgebra<F>, m: &Module<F>) -> Module<F> {
    la.action_tensor_module(&Module::regular(&la.hopf.alg), m)
}

/// `h (x) m -> h v (x) m`.
pub fn right_h_action<F: Field>(h: &HopfAlgebra<F>, v: &[F], dim_m: usize) -> Matrix<F> {
    h.alg.right_mult(v).kron(&Matrix::identity(dim_m))
}

pub fn ihom_space<F: Field>(la: &ComoduleAlgebra<F>, m: &Module<F>, n: &Module<F>) -> Result<InternalHomSpace<F>> {
    let h = &la.hopf;
    let p = free_module(la, m);
    let space = intertwiners(la.alg.generators(), &p, n);
    let dp = p.dim();
    let basis: Vec<Matrix<F>> = space.basis().iter().map(|v| unflatten(v, n.dim(), dp)).collect();
    let mut out = InternalHomSpace {
        source: m.clone(),
        target: n.clone(),
        dim_h: h.dim(),
        space,
        basis,
        h_action: Vec::new(),
    };
    let mut acts = Vec::with_capacity(h.dim());
    for i in 0..h.dim() {
        let r = right_h_action(h, &h.alg.basis(i), m.dim());
        let mut cols = Vec::with_capacity(out.dim());
        for f in &out.basis {
            cols.push(out.coords_or_err(&f.mul(&r), "h f")?);
        }
        acts.push(Matrix::from_columns(out.dim(), &cols));
    }
    out.h_action = acts;
    Ok(out)
}

/// `dim iHom(M, N)` from the `L`-linearity constraints on every basis element
/// of `L`, not only on generators.
pub fn ihom_dim_bruteforce<F: Field>(la: &ComoduleAlgebra<F>, m: &Module<F>, n: &Module<F>) -> usize {
    let p = free_module(la, m);
    let all: Vec<usize> = (0..la.dim()).collect();
    intertwiners(&all, &p, n).dim()
}

/// `(dim Hom_L(X (x) M, N), dim Hom_H(X, iHom(M, N)))`; the adjunction makes
/// them equal.
pub fn adjunction_dims<F: Field>(la: &ComoduleAlgebra<F>, x: &Module<F>, m: &Module<F>, n: &Module<F>) -> Result<(usize, usize)> {
    let lhs = intertwiners(la.alg.generators(), &la.action_tensor_module(x, m), n).dim();
    let ih = ihom_space(la, m, n)?;
    let rhs = intertwiners(la.hopf.alg.generators(), x, &ih.as_module()).dim();
    Ok((lhs, rhs))
}

fn col_block<F: Field>(m: &Matrix<F>, start: usize, width: usize) -> Matrix<F> {
    let trip = m
        .triplets()
        .filter(|(_, j, _)| *j >= start && *j < start + width)
        .map(|(i, j, v)| (i, j - start, v.clone()));
    Matrix::from_triplets(m.nrows(), width, trip)
}

fn place_blocks<F: Field>(rows: usize, width: usize, blocks: Vec<Matrix<F>>) -> Matrix<F> {
    let refs: Vec<&Matrix<F>> = blocks.iter().collect();
    let out = Matrix::hstack(&refs);
    debug_assert_eq!((out.nrows(), out.ncols()), (rows, width * blocks.len()));
    out
}

/// `h (x) m -> f(h_(1) (x) g(h_(2) (x) m))` on raw matrices; `g` has
/// source dimension `d1`, `f` has source dimension `d2`.
pub fn compose_raw<F: Field>(h: &HopfAlgebra<F>, f: &Matrix<F>, g: &Matrix<F>, d1: usize, d2: usize) -> Matrix<F> {
    let dh = h.dim();
    assert_eq!(f.ncols(), dh * d2);
    assert_eq!(g.ncols(), dh * d1);
    assert_eq!(g.nrows(), d2);
    let d3 = f.nrows();
    let fb: Vec<Matrix<F>> = (0..dh).map(|p| col_block(f, p * d2, d2)).collect();
    let gb: Vec<Matrix<F>> = (0..dh).map(|q| col_block(g, q * d1, d1)).collect();
    let mut cache: HashMap<(usize, usize), Matrix<F>> = HashMap::new();
    let mut blocks = Vec::with_capacity(dh);
    for i in 0..dh {
        let mut b = Matrix::zeros(d3, d1);
        for (p, q, c) in h.comult_basis(i) {
            let prod = cache.entry((*p, *q)).or_insert_with(|| fb[*p].mul(&gb[*q]));
            b = b.add_scaled(prod, c);
        }
        blocks.push(b);
    }
    place_blocks(d3, d1, blocks)
}

/// Composite of `f in iHom(M2, M3)` and `g in iHom(M1, M2)`, checked to lie
/// in `iHom(M1, M3)`.
pub fn ihom_compose<F: Field>(
    h: &HopfAlgebra<F>,
    f: &Matrix<F>,
    g: &Matrix<F>,
    m1: &Module<F>,
    m2: &Module<F>,
    m3: &Module<F>,
    target: Option<&InternalHomSpace<F>>,
) -> Result<Matrix<F>> {
    if f.nrows() != m3.dim() || f.ncols() != h.dim() * m2.dim() || g.nrows() != m2.dim() || g.ncols() != h.dim() * m1.dim() {
        return Err(Error::Dimension("maps are not composable".into()));
    }
    let r = compose_raw(h, f, g, m1.dim(), m2.dim());
    if let Some(t) = target {
        t.coords_or_err(&r, "composite")?;
    }
    Ok(r)
}

/// The unit of `iEnd(M)`: `h (x) m -> eps(h) m`.
pub fn ihom_identity<F: Field>(h: &HopfAlgebra<F>, dim_m: usize) -> Matrix<F> {
    let eps = Matrix::from_triplets(1, h.dim(), h.counit().iter().enumerate().map(|(i, c)| (0, i, c.clone())));
    eps.kron(&Matrix::identity(dim_m))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct UnitCounitChecks {
    pub icoev_h_linear: bool,
    pub ieval_l_linear: bool,
    /// `ieval (icoev (x) id) = id` on `X (x) M`.
    pub triangle_left: bool,
    /// `iHom(M, ieval) icoev = id` on `iHom(M, N)`.
    pub triangle_right: bool,
}

impl UnitCounitChecks {
    pub fn all(&self) -> bool {
        self.icoev_h_linear && self.ieval_l_linear && self.triangle_left && self.triangle_right
    }
}

#[derive(Clone, Debug)]
pub struct UnitCounit<F> {
    /// `X -> iHom(M, X (x) M)` in the basis of the target space.
    pub icoev: Matrix<F>,
    /// `iHom(M, N) (x) M -> N`.
    pub ieval: Matrix<F>,
    pub checks: UnitCounitChecks,
}

fn icoev_raw<F: Field>(x: &Module<F>, dh: usize, dim_m: usize, i: usize) -> Matrix<F> {
    let id = Matrix::identity(dim_m);
    let blocks = (0..dh).map(|hh| Matrix::from_columns(x.dim(), &[x.action(hh).column(i)]).kron(&id)).collect();
    place_blocks(x.dim() * dim_m, dim_m, blocks)
}

fn ieval_matrix<F: Field>(h: &HopfAlgebra<F>, ih: &InternalHomSpace<F>) -> Matrix<F> {
    let dm = ih.source.dim();
    let one = h.alg.unit();
    let mut cols = Vec::with_capacity(ih.dim() * dm);
    for f in ih.basis() {
        for m in 0..dm {
            let mut col = vec![F::zero(); ih.target.dim()];
            for (hh, c) in one.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, v) in col.iter_mut().zip(f.column(hh * dm + m)) {
                    o.add_mul(c, &v);
                }
            }
            cols.push(col);
        }
    }
    Matrix::from_columns(ih.target.dim(), &cols)
}

/// `icoev_{X,M}` and `ieval_{M,N}` with both triangle identities.
pub fn ihom_unit_counit<F: Field>(la: &ComoduleAlgebra<F>, x: &Module<F>, m: &Module<F>, n: &Module<F>) -> Result<UnitCounit<F>> {
    let h = &la.hopf;
    let dh = h.dim();
    let dm = m.dim();
    let xm = la.action_tensor_module(x, m);
    let coev_space = ihom_space(la, m, &xm)?;
    let mut cols = Vec::with_capacity(x.dim());
    for i in 0..x.dim() {
        cols.push(coev_space.coords_or_err(&icoev_raw(x, dh, dm, i), "icoev(x)")?);
    }
    let icoev = Matrix::from_columns(coev_space.dim(), &cols);
    let mut checks = UnitCounitChecks {
        icoev_h_linear: is_module_map(&icoev, x, &coev_space.as_module()),
        ..Default::default()
    };

    // ieval_{M, X (x) M} (icoev (x) id) = id
    let ev_xm = ieval_matrix(h, &coev_space);
    checks.triangle_left = ev_xm.mul(&icoev.kron(&Matrix::identity(dm))).is_identity();

    let ihn = ihom_space(la, m, n)?;
    let ieval = ieval_matrix(h, &ihn);
    let src = la.action_tensor_module(&ihn.as_module(), m);
    checks.ieval_l_linear = is_module_map(&ieval, &src, n);

    // f -> ieval o icoev_{iHom(M,N), M}(f)
    let ihm = ihn.as_module();
    checks.triangle_right = (0..ihn.dim()).all(|j| {
        let raw = icoev_raw(&ihm, dh, dm, j);
        ieval.mul(&raw) == ihn.basis()[j]
    });
    Ok(UnitCounit { icoev, ieval, checks })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ModuleStructureChecks {
    pub left_h_linear: bool,
    pub left_invertible: bool,
    /// The closed-form inverse composes with the left structure to the identity.
    pub left_inverse_formula: bool,
    pub right_h_linear: bool,
}

#[derive(Clone, Debug)]
pub struct ModuleStructures<F> {
    /// `X (x) iHom(M, N) -> iHom(M, X (x) N)`
    pub left: Matrix<F>,
    pub left_inverse: Matrix<F>,
    /// `iHom(M, N) (x) Y -> iHom(*Y (x) M, N)`
    pub right: Matrix<F>,
    pub checks: ModuleStructureChecks,
}

/// `x (x) f -> [h (x) m -> h_(1) x (x) f(h_(2) (x) m)]` on raw matrices.
fn left_structure_raw<F: Field>(h: &HopfAlgebra<F>, x: &Module<F>, i: usize, f: &Matrix<F>, dm: usize) -> Matrix<F> {
    let dn = f.nrows();
    let blocks = (0..h.dim())
        .map(|hh| {
            let mut b = Matrix::zeros(x.dim() * dn, dm);
            for (p, q, c) in h.comult_basis(hh) {
                let xv = Matrix::from_columns(x.dim(), &[x.action(*p).column(i)]);
                b = b.add_scaled(&xv.kron(&col_block(f, q * dm, dm)), c);
            }
            b
        })
        .collect();
    place_blocks(x.dim() * dn, dm, blocks)
}

/// The left module structure in the bases of the two spaces; source index
/// is `x * dim iHom(M, N) + j`.
pub fn left_structure<F: Field>(
    h: &HopfAlgebra<F>,
    x: &Module<F>,
    src: &InternalHomSpace<F>,
    tgt: &InternalHomSpace<F>,
) -> Result<Matrix<F>> {
    let dm = src.source.dim();
    let mut cols = Vec::with_capacity(x.dim() * src.dim());
    for i in 0..x.dim() {
        for f in src.basis() {
            cols.push(tgt.coords_or_err(&left_structure_raw(h, x, i, f, dm), "left structure image")?);
        }
    }
    Ok(Matrix::from_columns(tgt.dim(), &cols))
}

/// `f -> x_i (x) [h (x) m -> <x^i, S(h_(1)) f(h_(2) (x) m)_X> f(h_(2) (x) m)_N]`.
fn left_structure_inverse<F: Field>(
    h: &HopfAlgebra<F>,
    x: &Module<F>,
    src: &InternalHomSpace<F>,
    tgt: &InternalHomSpace<F>,
) -> Result<Matrix<F>> {
    let dm = src.source.dim();
    let dn = src.target.dim();
    let dx = x.dim();
    let s = h.antipode();
    let id_n = Matrix::identity(dn);
    let rho_s: Vec<Matrix<F>> = (0..h.dim()).map(|p| x.act(&s.column(p))).collect();
    let mut cols = Vec::with_capacity(tgt.dim());
    for f in tgt.basis() {
        let mut col = Vec::with_capacity(dx * src.dim());
        for i in 0..dx {
            let blocks = (0..h.dim())
                .map(|hh| {
                    let mut b = Matrix::zeros(dn, dm);
                    for (p, q, c) in h.comult_basis(hh) {
                        let row = Matrix::from_triplets(1, dx, rho_s[*p].row(i).iter().map(|(j, v)| (0, *j, v.clone())));
                        b = b.add_scaled(&row.kron(&id_n).mul(&col_block(f, q * dm, dm)), c);
                    }
                    b
                })
                .collect();
            let g = place_blocks(dn, dm, blocks);
            col.extend(src.coords_or_err(&g, "inverse left structure image")?);
        }
        cols.push(col);
    }
    Ok(Matrix::from_columns(dx * src.dim(), &cols))
}

/// `xi (x) y -> [h (x) *y (x) m -> xi(h_(1) (x) m) <*y, h_(2) y>]`; the
/// target space must be `iHom(*Y (x) M, N)` with `*Y` the right dual.
pub fn right_structure<F: Field>(
    h: &HopfAlgebra<F>,
    y: &Module<F>,
    src: &InternalHomSpace<F>,
    tgt: &InternalHomSpace<F>,
) -> Result<Matrix<F>> {
    let dm = src.source.dim();
    let dn = src.target.dim();
    let dy = y.dim();
    let mut cols = Vec::with_capacity(src.dim() * dy);
    for xi in src.basis() {
        let xb: Vec<Matrix<F>> = (0..h.dim()).map(|p| col_block(xi, p * dm, dm)).collect();
        for s in 0..dy {
            let blocks = (0..h.dim())
                .map(|hh| {
                    let mut b = Matrix::zeros(dn, dy * dm);
                    for (p, q, c) in h.comult_basis(hh) {
                        // <*y_a, q y_s> e_a as a 1 x dy row
                        let pair = Matrix::from_triplets(1, dy, (0..dy).map(|a| (0, a, y.action(*q).get(a, s))));
                        b = b.add_scaled(&pair.kron(&xb[*p]), c);
                    }
                    b
                })
                .collect();
            let g = place_blocks(dn, dy * dm, blocks);
            cols.push(tgt.coords_or_err(&g, "right structure image")?);
        }
    }
    Ok(Matrix::from_columns(tgt.dim(), &cols))
}

/// Both module structures for the given `X`, `Y`, `M`, `N`.
pub fn ihom_module_structures<F: Field>(
    la: &ComoduleAlgebra<F>,
    x: &Module<F>,
    y: &Module<F>,
    m: &Module<F>,
    n: &Module<F>,
) -> Result<ModuleStructures<F>> {
    let h = &la.hopf;
    let src = ihom_space(la, m, n)?;
    let xn = la.action_tensor_module(x, n);
    let ltgt = ihom_space(la, m, &xn)?;
    let left = left_structure(h, x, &src, &ltgt)?;
    let left_inverse = left_structure_inverse(h, x, &src, &ltgt)?;
    let ystar = dual_module(h, y, DualSide::Right)?;
    let ysm = la.action_tensor_module(&ystar, m);
    let rtgt = ihom_space(la, &ysm, n)?;
    let right = right_structure(h, y, &src, &rtgt)?;
    let src_mod = src.as_module();
    let checks = ModuleStructureChecks {
        left_h_linear: is_module_map(&left, &tensor_h(h, x, &src_mod), &ltgt.as_module()),
        left_invertible: left.is_square() && left.is_invertible(),
        left_inverse_formula: left_inverse.mul(&left).is_identity() && left.mul(&left_inverse).is_identity(),
        right_h_linear: is_module_map(&right, &tensor_h(h, &src_mod, y), &rtgt.as_module()),
    };
    Ok(ModuleStructures { left, left_inverse, right, checks })
}

/// `X (x) iHom(M, N) (x) Y -> iHom(*Y (x) M, X (x) N)` both ways round.
pub fn bimodule_coherence<F: Field>(
    la: &ComoduleAlgebra<F>,
    x: &Module<F>,
    y: &Module<F>,
    m: &Module<F>,
    n: &Module<F>,
) -> Result<bool> {
    let h = &la.hopf;
    let ystar = dual_module(h, y, DualSide::Right)?;
    let ysm = la.action_tensor_module(&ystar, m);
    let xn = la.action_tensor_module(x, n);
    let mn = ihom_space(la, m, n)?;
    let m_xn = ihom_space(la, m, &xn)?;
    let ysm_n = ihom_space(la, &ysm, n)?;
    let ysm_xn = ihom_space(la, &ysm, &xn)?;
    // left then right
    let a = left_structure(h, x, &mn, &m_xn)?;
    let b = right_structure(h, y, &m_xn, &ysm_xn)?;
    let route1 = b.mul(&a.kron(&Matrix::identity(y.dim())));
    // right then left
    let b2 = right_structure(h, y, &mn, &ysm_n)?;
    let a2 = left_structure(h, x, &ysm_n, &ysm_xn)?;
    let route2 = a2.mul(&Matrix::identity(x.dim()).kron(&b2));
    Ok(route1 == route2)
}

/// Generators `t_i` of a projective module `P` and `t^i in Hom_L(P, L)` with
/// `sum_i t^i(w) t_i = w`.
#[derive(Clone, Debug)]
pub struct ProjectiveDualBasis<F> {
    pub elements: Vec<Vec<F>>,
    /// `dim L x dim P` matrices.
    pub forms: Vec<Matrix<F>>,
    /// `form(t^i(w))`, as covectors on `P`.
    pub functionals: Vec<Vec<F>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorOrder {
    Forward,
    Reverse,
    /// Every standard basis vector.
    FullBasis,
}

/// A generating set of `P` taken from its standard basis: greedily in the
/// given order, or all of it.
pub fn greedy_generators<F: Field>(la: &ComoduleAlgebra<F>, p: &Module<F>, order: GeneratorOrder) -> Vec<Vec<F>> {
    let dp = p.dim();
    let idx: Vec<usize> = match order {
        GeneratorOrder::Forward => (0..dp).collect(),
        GeneratorOrder::Reverse => (0..dp).rev().collect(),
        GeneratorOrder::FullBasis => return (0..dp).map(|w| crate::linalg::unit_vector(dp, w)).collect(),
    };
    let mut e = Echelon::new(dp);
    let mut gens = Vec::new();
    for w in idx {
        if e.rank() == dp {
            break;
        }
        let mut v = vec![F::zero(); dp];
        v[w] = F::one();
        if e.contains_dense(&v) {
            continue;
        }
        for a in 0..la.dim() {
            e.insert_dense(&p.action(a).column(w));
        }
        gens.push(v);
    }
    gens
}

/// Solves for a dual basis through `Hom_L(P, L) = P*`, `f -> [w -> sum_k f(a_k w) b_k]`.
///
/// The unknowns are the covectors `f^i`; the condition
/// `sum_k b_k T a_k = id` with `T = sum_i t_i f^i` is imposed on the `t_j`,
/// which suffices because the left side is `L`-linear.
pub fn projective_dual_basis<F: Field>(
    la: &ComoduleAlgebra<F>,
    frob: &FrobeniusData<F>,
    p: &Module<F>,
    elements: Vec<Vec<F>>,
) -> Result<ProjectiveDualBasis<F>> {
    let dp = p.dim();
    let n = elements.len();
    let dl = la.dim();
    let b_act: Vec<Matrix<F>> = frob.dual_basis.iter().map(|b| p.act(b)).collect();
    // u[i][k] = b_k t_i, v[j][k] = a_k t_j
    let u: Vec<Vec<Vec<F>>> = elements.iter().map(|t| b_act.iter().map(|b| b.apply(t)).collect()).collect();
    let v: Vec<Vec<Vec<F>>> = elements.iter().map(|t| (0..dl).map(|k| p.action(k).apply(t)).collect()).collect();
    let mut entries: HashMap<(usize, usize), F> = HashMap::new();
    for j in 0..n {
        for i in 0..n {
            for k in 0..dl {
                let uk = &u[i][k];
                let vk = &v[j][k];
                for (r, ur) in uk.iter().enumerate() {
                    if ur.is_zero() {
                        continue;
                    }
                    for (w, vw) in vk.iter().enumerate() {
                        if vw.is_zero() {
                            continue;
                        }
                        entries.entry((j * dp + r, i * dp + w)).or_insert_with(F::zero).add_mul(ur, vw);
                    }
                }
            }
        }
    }
    let sys = Matrix::from_triplets(n * dp, n * dp, entries.into_iter().filter(|(_, x)| !x.is_zero()).map(|((r, c), x)| (r, c, x)));
    let rhs: Vec<F> = elements.iter().flat_map(|t| t.iter().cloned()).collect();
    let sol = sys
        .solve(&rhs)
        .ok_or_else(|| Error::Axiom(format!("{} is not projective: no dual basis exists", p.name)))?;
    let functionals: Vec<Vec<F>> = sol.chunks(dp).map(|c| c.to_vec()).collect();
    let forms: Vec<Matrix<F>> = functionals
        .iter()
        .map(|f| {
            let mut trip = Vec::new();
            for k in 0..dl {
                // row vector f rho(a_k)
                let fa = p.action(k).transpose().apply(f);
                for (l, bl) in frob.dual_basis[k].iter().enumerate() {
                    if bl.is_zero() {
                        continue;
                    }
                    for (w, x) in fa.iter().enumerate() {
                        if !x.is_zero() {
                            trip.push((l, w, bl.mul_ref(x)));
                        }
                    }
                }
            }
            Matrix::from_triplets(dl, dp, trip)
        })
        .collect();
    let db = ProjectiveDualBasis { elements, forms, functionals };
    if !verify_dual_basis(la, frob, p, &db) {
        return Err(Error::Axiom("dual basis fails re-verification".into()));
    }
    Ok(db)
}

/// Each `t^i` is `L`-linear and `sum_i t^i(w) t_i = w` on every basis vector.
pub fn verify_dual_basis<F: Field>(la: &ComoduleAlgebra<F>, frob: &FrobeniusData<F>, p: &Module<F>, db: &ProjectiveDualBasis<F>) -> bool {
    let dp = p.dim();
    let linear = db.forms.iter().all(|t| {
        la.alg.generators().iter().all(|&g| t.mul(p.action(g)) == la.alg.left_mult_basis(g).mul(t))
    });
    if !linear {
        return false;
    }
    let via_form = db.forms.iter().zip(&db.functionals).all(|(t, f)| t.transpose().apply(&frob.form) == *f);
    via_form
        && (0..dp).all(|w| {
            let mut acc = vec![F::zero(); dp];
            for (t, ti) in db.forms.iter().zip(&db.elements) {
                let lw = t.column(w);
                for (o, x) in acc.iter_mut().zip(p.act(&lw).apply(ti)) {
                    *o += &x;
                }
            }
            acc.iter().enumerate().all(|(i, x)| if i == w { x.is_one() } else { x.is_zero() })
        })
}

/// `itrace_M(xi) = sum_i form(t^i(Lambda (x) xi(t_i)))` on `iHom(M, Ser M)`,
/// held as the weight matrix `W` with `itrace(xi) = sum W_rc xi_rc`.
#[derive(Clone, Debug)]
pub struct SerreTrace<F> {
    pub weights: Matrix<F>,
    pub dual_basis: ProjectiveDualBasis<F>,
    integral: Vec<F>,
    form: Vec<F>,
    dim_m: usize,
}

impl<F: Field> SerreTrace<F> {
    pub fn new(
        la: &ComoduleAlgebra<F>,
        frob: &FrobeniusData<F>,
        integrals: &IntegralData<F>,
        m: &Module<F>,
        order: GeneratorOrder,
    ) -> Result<Self> {
        let p = free_module(la, m);
        let gens = greedy_generators(la, &p, order);
        let db = projective_dual_basis(la, frob, &p, gens)?;
        let dm = m.dim();
        let lam = &integrals.right_integral;
        let mut trip = Vec::new();
        for (ti, kappa) in db.elements.iter().zip(&db.functionals) {
            for r in 0..dm {
                let mut s = F::zero();
                for (hh, l) in lam.iter().enumerate() {
                    if !l.is_zero() {
                        s.add_mul(l, &kappa[hh * dm + r]);
                    }
                }
                if s.is_zero() {
                    continue;
                }
                for (c, t) in ti.iter().enumerate() {
                    if !t.is_zero() {
                        trip.push((r, c, s.mul_ref(t)));
                    }
                }
            }
        }
        Ok(SerreTrace {
            weights: Matrix::from_triplets(dm, p.dim(), trip),
            dual_basis: db,
            integral: lam.clone(),
            form: frob.form.clone(),
            dim_m: dm,
        })
    }

    pub fn eval(&self, xi: &Matrix<F>) -> F {
        frobenius_dot(&self.weights, xi)
    }

    /// The defining sum evaluated term by term.
    pub fn eval_direct(&self, xi: &Matrix<F>) -> F {
        let dm = self.dim_m;
        let mut acc = F::zero();
        for (t, ti) in self.dual_basis.forms.iter().zip(&self.dual_basis.elements) {
            let y = xi.apply(ti);
            let mut w = vec![F::zero(); self.integral.len() * dm];
            for (hh, l) in self.integral.iter().enumerate() {
                for (r, yr) in y.iter().enumerate() {
                    w[hh * dm + r] = l.mul_ref(yr);
                }
            }
            let l = t.apply(&w);
            for (a, b) in l.iter().zip(&self.form) {
                acc.add_mul(a, b);
            }
        }
        acc
    }
}

/// `sum_ij a_ij b_ij`.
pub fn frobenius_dot<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> F {
    let mut acc = F::zero();
    for i in 0..a.nrows() {
        let (ra, rb) = (a.row(i), b.row(i));
        let (mut x, mut y) = (0, 0);
        while x < ra.len() && y < rb.len() {
            match ra[x].0.cmp(&rb[y].0) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    acc.add_mul(&ra[x].1, &rb[y].1);
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    acc
}

/// `B[i][j] = <W, eta_i o xi_j>` without forming the composites:
/// `<W, eta o xi> = sum <eta_p^T W_h, xi_q>` over the terms of `Delta(e_h)`.
pub fn weighted_pairing<F: Field>(
    h: &HopfAlgebra<F>,
    w: &Matrix<F>,
    etas: &[Matrix<F>],
    xis: &[Matrix<F>],
    dm: usize,
    dn: usize,
) -> Matrix<F> {
    let dh = h.dim();
    let wb: Vec<Matrix<F>> = (0..dh).map(|hh| col_block(w, hh * dm, dm)).collect();
    let mut trip = Vec::new();
    for (i, eta) in etas.iter().enumerate() {
        let eb: Vec<Matrix<F>> = (0..dh).map(|p| col_block(eta, p * dn, dn).transpose()).collect();
        let mut yq: Vec<Matrix<F>> = vec![Matrix::zeros(dn, dm); dh];
        for hh in 0..dh {
            for (p, q, c) in h.comult_basis(hh) {
                yq[*q] = yq[*q].add_scaled(&eb[*p].mul(&wb[hh]), c);
            }
        }
        let y = place_blocks(dn, dm, yq);
        for (j, xi) in xis.iter().enumerate() {
            let v = frobenius_dot(&y, xi);
            if !v.is_zero() {
                trip.push((i, j, v));
            }
        }
    }
    Matrix::from_triplets(etas.len(), xis.len(), trip)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PairingChecks {
    pub nondegenerate: bool,
    pub dims_match: bool,
    /// The pairing agrees with the trace of the coordinates of the composite.
    pub factors_through_compose: bool,
    /// `B(h eta, xi) = B(eta, S(h) xi)` on generators of `H`.
    pub h_compatible: bool,
    /// `itrace(h xi) = eps(h) itrace(xi)` on generators of `H`.
    pub trace_h_linear: bool,
    /// A second generating set gives the same trace covector.
    pub trace_independent: bool,
    /// The weight matrix agrees with the term-by-term trace on the basis.
    pub trace_direct: bool,
}

impl PairingChecks {
    pub fn all(&self) -> bool {
        self.nondegenerate
            && self.dims_match
            && self.factors_through_compose
            && self.h_compatible
            && self.trace_h_linear
            && self.trace_independent
            && self.trace_direct
    }
}

#[derive(Clone, Debug)]
pub struct SerrePairingData<F> {
    /// Trace on the basis of `iHom(M, Ser M)`.
    pub trace: Vec<F>,
    /// Rows index `iHom(N, Ser M)`, columns `iHom(M, N)`.
    pub pairing: Matrix<F>,
    /// `iHom(M, N)* -> iHom(N, Ser M)`, dual basis coordinates to basis coordinates.
    pub phi: Matrix<F>,
    pub m_n: InternalHomSpace<F>,
    pub n_ser: InternalHomSpace<F>,
    pub checks: PairingChecks,
}

/// Everything about the trace on `iHom(M, Ser M)` that does not depend on
/// the second module of a pairing.
#[derive(Clone, Debug)]
pub struct SerreContext<F> {
    pub m: Module<F>,
    pub ser_m: Module<F>,
    pub m_ser: InternalHomSpace<F>,
    pub serre_trace: SerreTrace<F>,
    pub trace: Vec<F>,
    pub trace_direct: bool,
    pub trace_independent: bool,
    pub trace_h_linear: bool,
}

/// Above this many pairs only a leading block is composed explicitly.
const EXPLICIT_PAIRS: usize = 400;

impl<F: Field> SerreContext<F> {
    pub fn new(la: &ComoduleAlgebra<F>, frob: &FrobeniusData<F>, integrals: &IntegralData<F>, m: &Module<F>) -> Result<Self> {
        let h = &la.hopf;
        let ser = la.serre_module(m, frob);
        let m_ser = ihom_space(la, m, &ser)?;
        let st = SerreTrace::new(la, frob, integrals, m, GeneratorOrder::Forward)?;
        let tr: Vec<F> = m_ser.basis().iter().map(|b| st.eval(b)).collect();
        let trace_direct = m_ser.basis().iter().zip(&tr).all(|(b, t)| st.eval_direct(b) == *t);
        let second = SerreTrace::new(la, frob, integrals, m, GeneratorOrder::Reverse)?;
        let trace_independent = m_ser.basis().iter().zip(&tr).all(|(b, t)| second.eval(b) == *t);
        let eps = h.counit();
        let trace_h_linear = h.alg.generators().iter().all(|&g| {
            let a = m_ser.h_action(g);
            (0..m_ser.dim()).all(|j| {
                let mut lhs = F::zero();
                for (i, x) in a.column(j).iter().enumerate() {
                    lhs.add_mul(x, &tr[i]);
                }
                lhs == eps[g].mul_ref(&tr[j])
            })
        });
        Ok(SerreContext {
            m: m.clone(),
            ser_m: ser,
            m_ser,
            serre_trace: st,
            trace: tr,
            trace_direct,
            trace_independent,
            trace_h_linear,
        })
    }

    /// `B(eta, xi) = itrace(eta o xi)` on `iHom(N, Ser M) x iHom(M, N)`.
    pub fn pairing(&self, la: &ComoduleAlgebra<F>, n: &Module<F>) -> Result<SerrePairingData<F>> {
        let h = &la.hopf;
        let m = &self.m;
        let ser = &self.ser_m;
        let m_n = ihom_space(la, m, n)?;
        let n_ser = ihom_space(la, n, ser)?;
        let mut checks = PairingChecks {
            dims_match: m_n.dim() == n_ser.dim(),
            trace_direct: self.trace_direct,
            trace_independent: self.trace_independent,
            trace_h_linear: self.trace_h_linear,
            ..Default::default()
        };
        let pairing = weighted_pairing(h, &self.serre_trace.weights, n_ser.basis(), m_n.basis(), m.dim(), n.dim());

        // explicit composites on a leading block
        let side = ((EXPLICIT_PAIRS as f64).sqrt() as usize).max(1);
        let mut ok = true;
        'outer: for (i, eta) in n_ser.basis().iter().enumerate().take(side) {
            for (j, xi) in m_n.basis().iter().enumerate().take(side) {
                let c = ihom_compose(h, eta, xi, m, n, ser, Some(&self.m_ser))?;
                let coords = self.m_ser.coords(&c).unwrap();
                let v = coords.iter().zip(&self.trace).fold(F::zero(), |mut a, (x, t)| {
                    a.add_mul(x, t);
                    a
                });
                if v != pairing.get(i, j) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        checks.factors_through_compose = ok;

        let s = h.antipode();
        checks.h_compatible = h.alg.generators().iter().all(|&g| {
            let a_eta = n_ser.h_action(g);
            let a_xi = m_n.act(&s.column(g));
            a_eta.transpose().mul(&pairing) == pairing.mul(&a_xi)
        });
        checks.nondegenerate = pairing.is_square() && pairing.is_invertible();
        if !checks.nondegenerate {
            return Err(Error::Axiom(format!("Serre pairing on iHom({}, {}) is degenerate", m.name, n.name)));
        }
        let phi = pairing.transpose().inverse().ok_or(Error::Singular)?;
        Ok(SerrePairingData { trace: self.trace.clone(), pairing, phi, m_n, n_ser, checks })
    }
}

pub fn serre_trace_and_pairing<F: Field>(
    la: &ComoduleAlgebra<F>,
    frob: &FrobeniusData<F>,
    integrals: &IntegralData<F>,
    m: &Module<F>,
    n: &Module<F>,
) -> Result<SerrePairingData<F>> {
    SerreContext::new(la, frob, integrals, m)?.pairing(la, n)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InternalEndChecks {
    pub form_nondegenerate: bool,
    pub form_h_linear: bool,
    /// Both ways of computing the Nakayama map agree.
    pub routes_agree: bool,
    /// `form(f g) = form(g (g_piv nu_A(f)))` on basis pairs.
    pub nakayama_relation: bool,
    /// `form(f g) = form(g nu_A(f))`, without the pivotal correction; only
    /// expected when `g_piv` acts trivially on `A`.
    pub nakayama_relation_literal: bool,
    pub nakayama_identity: bool,
}

#[derive(Clone, Debug)]
pub struct InternalEndNakayama<F> {
    pub dim: usize,
    /// `lambda_A` on the basis of `A = iEnd(M)`.
    pub form: Vec<F>,
    /// `nu_A`, columns are images of basis vectors.
    pub nakayama: Matrix<F>,
    /// `nu_A` through the duality maps of the Serre pairing.
    pub nakayama_via_phi: Matrix<F>,
    pub p: Matrix<F>,
    pub checks: InternalEndChecks,
}

/// Frobenius form and Nakayama map of `A = iEnd(M)`.
///
/// `p: M -> Ser(M)` is the action of `g~` when it is given; otherwise some
/// isomorphism is searched for. `g_piv` defaults to the first pivotal element
/// of `H`.
pub fn internal_end_nakayama<F: Field>(
    la: &ComoduleAlgebra<F>,
    frob: &FrobeniusData<F>,
    integrals: &IntegralData<F>,
    m: &Module<F>,
    pivotal: Option<(&[F], &[F])>,
) -> Result<InternalEndNakayama<F>> {
    let h = &la.hopf;
    let ser = la.serre_module(m, frob);
    let dm = m.dim();
    let (g_piv, p) = match pivotal {
        Some((g_piv, g_tilde)) => {
            let p = m.act(g_tilde);
            if !p.is_invertible() || !is_module_map(&p, m, &ser) {
                return Err(Error::Axiom("action of g~ is not an isomorphism M -> Ser(M)".into()));
            }
            (g_piv.to_vec(), p)
        }
        None => {
            let g_piv = h
                .pivotal_elements()
                .into_iter()
                .next()
                .ok_or_else(|| Error::Unsupported("H has no pivotal element".into()))?;
            let p = modules_isomorphic(&la.alg, m, &ser)?
                .ok_or_else(|| Error::Unsupported(format!("{} is not isomorphic to its Serre twist", m.name)))?;
            (g_piv, p)
        }
    };
    let p_inv = p.inverse().ok_or(Error::Singular)?;
    let ctx = SerreContext::new(la, frob, integrals, m)?;
    let d_mm = ctx.pairing(la, m)?;
    let a = &d_mm.m_n;
    let dim = a.dim();

    // route 1: Gram matrix of lambda_A(f g) = itrace(p o f o g)
    let pw = p.transpose().mul(&ctx.serre_trace.weights);
    let lam_a: Vec<F> = a.basis().iter().map(|f| frobenius_dot(&pw, f)).collect();
    let gram = weighted_pairing(h, &pw, a.basis(), a.basis(), dm, dm);
    let form_nondegenerate = gram.is_invertible();
    let g_act = a.act(&g_piv);
    let g_inv = g_act.inverse().ok_or(Error::Singular)?;
    let mut checks = InternalEndChecks { form_nondegenerate, ..Default::default() };
    let eps = h.counit();
    checks.form_h_linear = h.alg.generators().iter().all(|&g| {
        let act = a.h_action(g);
        (0..dim).all(|j| {
            let mut lhs = F::zero();
            for (i, x) in act.column(j).iter().enumerate() {
                lhs.add_mul(x, &lam_a[i]);
            }
            lhs == eps[g].mul_ref(&lam_a[j])
        })
    });
    if !form_nondegenerate {
        return Err(Error::Axiom("lambda_A is not a Frobenius form".into()));
    }
    // G^T = G N_vec
    let nu_vec = gram.inverse().ok_or(Error::Singular)?.mul(&gram.transpose());
    let nakayama = g_inv.mul(&nu_vec);

    // route 2: nu_A = p_A^-1 phi*_{M,M} phi^-1_{M,Ser M} iHom(p^-1, p)
    let d_ms = ctx.pairing(la, &ser)?;
    let ss = &d_ms.n_ser;
    let hp = Matrix::identity(h.dim()).kron(&p_inv);
    let mut cols = Vec::with_capacity(dim);
    for f in a.basis() {
        let g = p.mul(f).mul(&hp);
        cols.push(ss.coords_or_err(&g, "p f p^-1")?);
    }
    let conj = Matrix::from_columns(ss.dim(), &cols);
    // phi^-1_{M,Ser M}(eta) = B1(eta, -); phi*_{M,M}(eps) = phi_{M,M}^T eps
    let nu_vec2 = d_mm.phi.transpose().mul(&d_ms.pairing.transpose()).mul(&conj);
    let nakayama_via_phi = g_inv.mul(&nu_vec2);
    checks.routes_agree = nakayama == nakayama_via_phi;
    checks.nakayama_relation = gram.transpose() == gram.mul(&g_act).mul(&nakayama);
    checks.nakayama_relation_literal = gram.transpose() == gram.mul(&nakayama);
    checks.nakayama_identity = nakayama.is_identity();
    Ok(InternalEndNakayama { dim, form: lam_a, nakayama, nakayama_via_phi, p, checks })
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};
    use super::*;
    use crate::catalog::{build_comodule_algebra, CatalogObject, CatalogParams, Family};
    use crate::hopf::Convention;
    use crate::module::trivial_module;
    use crate::Q3;

    fn obj(fam: Family<Q3>) -> CatalogObject<Q3> {
        build_comodule_algebra(&CatalogParams::new(3, 1, fam)).unwrap()
    }

    fn first_frob(o: &CatalogObject<Q3>) -> (FrobeniusData<Q3>, IntegralData<Q3>, usize) {
        let ints = o.hopf().integral_data(Convention::A).unwrap();
        for (k, sp) in o.la.grouplike_cointegrals() {
            if let Some(f) = o.la.frobenius_data(&sp.basis()[0], &ints.modular_function).unwrap() {
                return (f, ints, k);
            }
        }
        panic!("no Frobenius form")
    }

    fn chars(o: &CatalogObject<Q3>) -> Vec<Module<Q3>> {
        o.la.characters.iter().map(|(n, c)| Module::character(n.clone(), c)).collect()
    }

    #[test]
    fn over_the_base_field() {
        // kC_1 = k as a comodule algebra over itself
        let o = obj(Family::GroupAlgebra { n: 1 });
        let k = Module::regular(&o.la.alg);
        let m2 = k.direct_sum(&k);
        let m3 = m2.direct_sum(&k);
        let s = ihom_space(&o.la, &m2, &m3).unwrap();
        assert_eq!(s.dim(), 6);
        let h = o.hopf();
        // composition is matrix composition
        let f = s.basis()[1].clone();
        let s32 = ihom_space(&o.la, &m3, &m2).unwrap();
        let g = s32.basis()[4].clone();
        assert_eq!(ihom_compose(h, &g, &f, &m2, &m3, &m2, None).unwrap(), g.mul(&f));
        let (frob, ints, _) = first_frob(&o);
        let d = serre_trace_and_pairing(&o.la, &frob, &ints, &k, &k).unwrap();
        assert_eq!(d.pairing.nrows(), 1);
        assert!(!d.pairing.get(0, 0).is_zero());
        assert!(d.checks.all());
        let r = internal_end_nakayama(&o.la, &frob, &ints, &k, None).unwrap();
        assert!(r.nakayama.is_identity() && r.dim == 1);
    }

    #[test]
    fn l1_dimensions_against_bruteforce() {
        let o = obj(Family::TaftL1 { d: 3, xi: Q3::zero() });
        let ms = chars(&o);
        assert!(!ms.is_empty());
        for m in &ms {
            for n in &ms {
                let s = ihom_space(&o.la, m, n).unwrap();
                assert_eq!(s.dim(), ihom_dim_bruteforce(&o.la, m, n));
            }
            assert!(ihom_space(&o.la, m, m).unwrap().dim() >= 1);
        }
        let x = Module::regular(&o.hopf().alg);
        let (a, b) = adjunction_dims(&o.la, &x, &ms[0], &ms[0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unit_laws_and_triangles() {
        let o = obj(Family::TaftL1 { d: 3, xi: Q3::one() });
        let h = o.hopf();
        let m = Module::regular(&o.la.alg);
        let s = ihom_space(&o.la, &m, &m).unwrap();
        let id = ihom_identity(h, m.dim());
        assert!(s.contains(&id));
        for f in s.basis().iter().take(4) {
            assert_eq!(&ihom_compose(h, &id, f, &m, &m, &m, None).unwrap(), f);
            assert_eq!(&ihom_compose(h, f, &id, &m, &m, &m, None).unwrap(), f);
        }
        let triv = trivial_module(h);
        let uc = ihom_unit_counit(&o.la, &triv, &m, &m).unwrap();
        assert!(uc.checks.all());
        // icoev_{k, M}(1) is the identity of iEnd(M)
        let c = s.coords(&id).unwrap();
        let tm = o.la.action_tensor_module(&triv, &m);
        let sk = ihom_space(&o.la, &m, &tm).unwrap();
        assert_eq!(sk.element(&uc.icoev.column(0)), s.element(&c));
        let reg = Module::regular(&h.alg);
        let uc = ihom_unit_counit(&o.la, &reg, &m, &m).unwrap();
        assert!(uc.checks.all(), "{:?}", uc.checks);
    }

    #[test]
    fn module_structures() {
        let o = obj(Family::TaftL0 { d: 3 });
        let h = o.hopf();
        let ms = chars(&o);
        let triv = trivial_module(h);
        let s = ihom_module_structures(&o.la, &triv, &triv, &ms[0], &ms[1]).unwrap();
        assert!(s.left.is_identity() && s.right.is_identity());
        let reg = Module::regular(&h.alg);
        let s = ihom_module_structures(&o.la, &reg, &triv, &ms[0], &ms[0]).unwrap();
        assert!(s.checks.left_invertible && s.checks.left_inverse_formula && s.checks.left_h_linear && s.checks.right_h_linear);
        let w = &h.characters;
        let x = Module::character("chi1", &w[1].1);
        let y = Module::character("chi2", &w[2].1);
        assert!(bimodule_coherence(&o.la, &x, &y, &ms[0], &ms[1]).unwrap());
        assert!(bimodule_coherence(&o.la, &reg, &y, &ms[0], &ms[0]).unwrap());
    }

    #[test]
    fn dual_bases() {
        let o = obj(Family::TaftL1 { d: 3, xi: Q3::zero() });
        let (frob, _, _) = first_frob(&o);
        let l = Module::regular(&o.la.alg);
        let unit = o.la.alg.unit().to_vec();
        let db = projective_dual_basis(&o.la, &frob, &l, vec![unit.clone()]).unwrap();
        assert_eq!(db.elements.len(), 1);
        assert!(db.forms[0].is_identity());
        assert!(verify_dual_basis(&o.la, &frob, &l, &db));
        let ll = l.direct_sum(&l);
        let d = o.la.dim();
        let e1: Vec<Q3> = unit.iter().cloned().chain(vec![Q3::zero(); d]).collect();
        let e2: Vec<Q3> = vec![Q3::zero(); d].into_iter().chain(unit.iter().cloned()).collect();
        let db = projective_dual_basis(&o.la, &frob, &ll, vec![e1, e2]).unwrap();
        assert_eq!(db.forms[0], Matrix::hstack(&[&Matrix::identity(d), &Matrix::zeros(d, d)]));
        assert_eq!(db.forms[1], Matrix::hstack(&[&Matrix::zeros(d, d), &Matrix::identity(d)]));
        // H (x) M, with greedy generators and with the full basis
        let m = &chars(&o)[0];
        let p = free_module(&o.la, m);
        for order in [GeneratorOrder::Forward, GeneratorOrder::Reverse, GeneratorOrder::FullBasis] {
            let gens = greedy_generators(&o.la, &p, order);
            let db = projective_dual_basis(&o.la, &frob, &p, gens).unwrap();
            assert!(verify_dual_basis(&o.la, &frob, &p, &db));
        }
    }

    #[test]
    fn trace_independent_of_generators() {
        let o = obj(Family::TaftL1 { d: 3, xi: Q3::one() });
        let (frob, ints, _) = first_frob(&o);
        let m = &chars(&o).into_iter().next().unwrap_or_else(|| Module::regular(&o.la.alg));
        let ser = o.la.serre_module(m, &frob);
        let ms = ihom_space(&o.la, m, &ser).unwrap();
        let traces: Vec<Vec<Q3>> = [GeneratorOrder::Forward, GeneratorOrder::Reverse, GeneratorOrder::FullBasis]
            .into_iter()
            .map(|ord| {
                let st = SerreTrace::new(&o.la, &frob, &ints, m, ord).unwrap();
                ms.basis().iter().map(|b| st.eval(b)).collect()
            })
            .collect();
        assert_eq!(traces[0], traces[1]);
        assert_eq!(traces[0], traces[2]);
        let d = serre_trace_and_pairing(&o.la, &frob, &ints, m, m).unwrap();
        assert!(d.checks.all(), "{:?}", d.checks);
    }

    #[test]
    fn nakayama_of_internal_end_with_pivotal_element() {
        let o = obj(Family::TaftL1 { d: 3, xi: Q3::one() });
        let h = o.hopf();
        let ints = h.integral_data(Convention::A).unwrap();
        let g_piv = h.pivotal_elements()[0].clone();
        let m = Module::regular(&o.la.alg);
        for t in 0..3usize {
            let k = (t + 2) % 3;
            let sp = o.la.grouplike_cointegral_space(&h.grouplikes()[k]);
            let frob = o.la.frobenius_data(&sp.basis()[0], &ints.modular_function).unwrap().unwrap();
            // G^(t-1)
            let g_t = o.element(&vec!["G"; (t + 2) % 3]);
            let r = internal_end_nakayama(&o.la, &frob, &ints, &m, Some((&g_piv, &g_t))).unwrap();
            assert!(r.checks.nakayama_identity && r.checks.nakayama_relation && r.checks.routes_agree, "t={t} {:?}", r.checks);
            assert!(r.nakayama.is_identity());
        }
    }

    #[test]
    fn nakayama_relation_without_pivotal_element() {
        // L1(1; 1), d < N: only an isomorphism M -> Ser(M) found by search
        let o = obj(Family::TaftL1 { d: 1, xi: Q3::one() });
        let (frob, ints, _) = first_frob(&o);
        let m = Module::regular(&o.la.alg);
        let r = internal_end_nakayama(&o.la, &frob, &ints, &m, None).unwrap();
        assert!(r.checks.nakayama_relation && r.checks.routes_agree && r.checks.form_nondegenerate);
        assert!(is_module_map(&r.p, &m, &o.la.serre_module(&m, &frob)));
    }
}
