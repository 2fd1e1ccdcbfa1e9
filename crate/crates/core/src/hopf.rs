//! Finite-dimensional Hopf algebras given by structure tensors, their
//! integrals, cointegrals, modular function and pivotal elements.

use serde::Serialize;

use crate::algebra::{normalize2, normalize3, to_dense, FinAlgebra, Tensor2, Tensor3};
use crate::field::Field;
use crate::linalg::{kernel_of_rows, Matrix, SparseVec, Subspace};
use crate::{Error, Result};

/// Which side a right cointegral is normalized on.
///
/// `A`: `(lambda (x) id) Delta(h) = lambda(h) 1`.
/// `B`: `(id (x) lambda) Delta(h) = lambda(h) 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
pub enum Convention {
    #[default]
    A,
    B,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub subject: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn new(subject: impl Into<String>) -> Self {
        AxiomReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, name: &str, failures: Vec<String>) {
        let passed = failures.is_empty();
        let detail = failures.into_iter().take(3).collect::<Vec<_>>().join("; ");
        self.checks.push(AxiomCheck { name: name.to_string(), passed, detail });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: AxiomReport) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.subject, c.name);
            self.checks.push(c);
        }
    }
}

#[derive(Clone, Debug)]
pub struct HopfAlgebra<F> {
    pub alg: FinAlgebra<F>,
    comult: Vec<Tensor2<F>>,
    counit: Vec<F>,
    antipode: Matrix<F>,
    grouplikes: Vec<Vec<F>>,
    /// Named algebra maps `H -> F`, used as one-dimensional modules.
    pub characters: Vec<(String, Vec<F>)>,
}

#[derive(Clone, Debug)]
pub struct IntegralData<F> {
    pub convention: Convention,
    pub right_integral: Vec<F>,
    pub right_cointegral: Vec<F>,
    pub modular_function: Vec<F>,
    pub distinguished_grouplike: Vec<F>,
    pub normalization_ok: bool,
}

impl<F: Field> HopfAlgebra<F> {
    /// When `antipode` is `None` it is obtained by solving
    /// `m (S (x) id) Delta = unit counit` as a linear system.
    pub fn new(
        alg: FinAlgebra<F>,
        comult: Vec<Tensor2<F>>,
        counit: Vec<F>,
        antipode: Option<Matrix<F>>,
        grouplikes: Vec<Vec<F>>,
    ) -> Result<Self> {
        let n = alg.dim();
        if comult.len() != n || counit.len() != n {
            return Err(Error::Dimension("comultiplication or counit has wrong length".into()));
        }
        let comult: Vec<Tensor2<F>> = comult.into_iter().map(normalize2).collect();
        let antipode = match antipode {
            Some(s) => s,
            None => solve_antipode(&alg, &comult, &counit)
                .ok_or_else(|| Error::Axiom("antipode equation has no solution".into()))?,
        };
        Ok(HopfAlgebra { alg, comult, counit, antipode, grouplikes, characters: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn name(&self) -> &str {
        &self.alg.name
    }

    pub fn comult_basis(&self, i: usize) -> &[(usize, usize, F)] {
        &self.comult[i]
    }

    pub fn counit(&self) -> &[F] {
        &self.counit
    }

    pub fn antipode(&self) -> &Matrix<F> {
        &self.antipode
    }

    pub fn grouplikes(&self) -> &[Vec<F>] {
        &self.grouplikes
    }

    pub fn set_antipode(&mut self, s: Matrix<F>) {
        self.antipode = s;
    }

    pub fn set_comult(&mut self, i: usize, t: Tensor2<F>) {
        self.comult[i] = normalize2(t);
    }

    pub fn comult(&self, v: &[F]) -> Tensor2<F> {
        let mut terms = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (p, q, x) in &self.comult[i] {
                terms.push((*p, *q, c.mul_ref(x)));
            }
        }
        normalize2(terms)
    }

    /// `(Delta (x) id) Delta (e_i)`.
    pub fn comult2_basis(&self, i: usize) -> Tensor3<F> {
        let mut terms = Vec::new();
        for (p, q, c) in &self.comult[i] {
            for (a, b, x) in &self.comult[*p] {
                terms.push((*a, *b, *q, c.mul_ref(x)));
            }
        }
        normalize3(terms)
    }

    pub fn comult2(&self, v: &[F]) -> Tensor3<F> {
        let mut terms = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, b, d, x) in self.comult2_basis(i) {
                terms.push((a, b, d, c.mul_ref(&x)));
            }
        }
        normalize3(terms)
    }

    pub fn counit_of(&self, v: &[F]) -> F {
        let mut acc = F::zero();
        for (a, b) in v.iter().zip(&self.counit) {
            acc.add_mul(a, b);
        }
        acc
    }

    pub fn s(&self, v: &[F]) -> Vec<F> {
        self.antipode.apply(v)
    }

    pub fn s_inv(&self) -> Result<Matrix<F>> {
        self.antipode.inverse().ok_or_else(|| Error::Axiom("antipode is not invertible".into()))
    }

    /// `S^k`; negative powers use the inverse antipode.
    pub fn antipode_power(&self, k: i32) -> Result<Matrix<F>> {
        let base = if k < 0 { self.s_inv()? } else { self.antipode.clone() };
        let mut m = Matrix::identity(self.dim());
        for _ in 0..k.unsigned_abs() {
            m = base.mul(&m);
        }
        Ok(m)
    }

    pub fn is_grouplike(&self, g: &[F]) -> bool {
        let d = self.comult(g);
        let mut gg = Vec::new();
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                if !a.is_zero() && !b.is_zero() {
                    gg.push((i, j, a.mul_ref(b)));
                }
            }
        }
        d == normalize2(gg) && self.counit_of(g).is_one()
    }

    pub fn inverse_of(&self, a: &[F]) -> Option<Vec<F>> {
        self.alg.inverse(a)
    }

    /// Index of a declared grouplike equal to `v`.
    pub fn grouplike_index(&self, v: &[F]) -> Option<usize> {
        self.grouplikes.iter().position(|g| g.as_slice() == v)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.dim();
        let mut rep = AxiomReport::new(format!("Hopf algebra {}", self.name()));
        let alg_fails = self.alg.check_axioms();
        let (unit_f, assoc_f): (Vec<_>, Vec<_>) = alg_fails.into_iter().partition(|s| s.starts_with("unit"));
        rep.record("associativity", assoc_f);
        rep.record("unit", unit_f);

        let mut coassoc = Vec::new();
        for i in 0..n {
            let left = self.comult2_basis(i);
            let mut terms = Vec::new();
            for (p, q, c) in &self.comult[i] {
                for (a, b, x) in &self.comult[*q] {
                    terms.push((*p, *a, *b, c.mul_ref(x)));
                }
            }
            if left != normalize3(terms) {
                coassoc.push(format!("coassociativity fails on {}", self.alg.labels[i]));
            }
        }
        rep.record("coassociativity", coassoc);

        let mut counit = Vec::new();
        for i in 0..n {
            let mut l = vec![F::zero(); n];
            let mut r = vec![F::zero(); n];
            for (p, q, c) in &self.comult[i] {
                l[*q].add_mul(&self.counit[*p], c);
                r[*p].add_mul(&self.counit[*q], c);
            }
            let e = self.alg.basis(i);
            if l != e || r != e {
                counit.push(format!("counit law fails on {}", self.alg.labels[i]));
            }
        }
        rep.record("counit", counit);

        let mut bialg = Vec::new();
        let unit = self.alg.unit().to_vec();
        let one_one: Tensor2<F> = {
            let mut t = Vec::new();
            for (i, a) in unit.iter().enumerate() {
                for (j, b) in unit.iter().enumerate() {
                    if !a.is_zero() && !b.is_zero() {
                        t.push((i, j, a.mul_ref(b)));
                    }
                }
            }
            normalize2(t)
        };
        if self.comult(&unit) != one_one {
            bialg.push("Delta(1) != 1 (x) 1".into());
        }
        if !self.counit_of(&unit).is_one() {
            bialg.push("counit(1) != 1".into());
        }
        'outer: for i in 0..n {
            for j in 0..n {
                let prod = to_dense(n, self.alg.mul_basis(i, j));
                let lhs = self.comult(&prod);
                let rhs = self.alg.tensor_mul(&self.alg, &self.comult[i], &self.comult[j]);
                if lhs != rhs {
                    bialg.push(format!("Delta not multiplicative on ({}, {})", self.alg.labels[i], self.alg.labels[j]));
                }
                let e = self.counit_of(&prod);
                if e != self.counit[i].mul_ref(&self.counit[j]) {
                    bialg.push(format!("counit not multiplicative on ({}, {})", self.alg.labels[i], self.alg.labels[j]));
                }
                if bialg.len() > 5 {
                    break 'outer;
                }
            }
        }
        rep.record("bialgebra compatibility", bialg);

        let mut anti = Vec::new();
        for i in 0..n {
            let mut l = vec![F::zero(); n];
            let mut r = vec![F::zero(); n];
            for (p, q, c) in &self.comult[i] {
                let sp = self.antipode.column(*p);
                let sq = self.antipode.column(*q);
                let a = self.alg.mul(&sp, &self.alg.basis(*q));
                let b = self.alg.mul(&self.alg.basis(*p), &sq);
                for k in 0..n {
                    l[k].add_mul(c, &a[k]);
                    r[k].add_mul(c, &b[k]);
                }
            }
            let want: Vec<F> = unit.iter().map(|u| u.mul_ref(&self.counit[i])).collect();
            if l != want || r != want {
                anti.push(format!("antipode axiom fails on {}", self.alg.labels[i]));
            }
        }
        if !self.antipode.is_invertible() {
            anti.push("antipode is not invertible".into());
        }
        rep.record("antipode", anti);

        let mut gl = Vec::new();
        for (k, g) in self.grouplikes.iter().enumerate() {
            if !self.is_grouplike(g) {
                gl.push(format!("declared grouplike #{k} is not grouplike"));
            }
            if !self.alg.is_unit_element(g) {
                gl.push(format!("declared grouplike #{k} is not invertible"));
            }
        }
        for g in &self.grouplikes {
            for h in &self.grouplikes {
                if self.grouplike_index(&self.alg.mul(g, h)).is_none() {
                    gl.push("declared grouplikes not closed under multiplication".into());
                }
            }
        }
        if !self.grouplikes.is_empty() && self.grouplike_index(&unit).is_none() {
            gl.push("declared grouplikes do not contain 1".into());
        }
        gl.dedup();
        rep.record("grouplikes", gl);

        let mut ch = Vec::new();
        for (name, chi) in &self.characters {
            if !is_character(&self.alg, chi) {
                ch.push(format!("character {name} is not an algebra map"));
            }
        }
        rep.record("characters", ch);
        rep
    }

    /// `{Lambda : Lambda h = counit(h) Lambda}`.
    pub fn right_integral_space(&self) -> Subspace<F> {
        let n = self.dim();
        let mut rows: Vec<SparseVec<F>> = Vec::new();
        for &j in self.alg.generators() {
            let r = self.alg.right_mult_basis(j).sub(&Matrix::scalar(n, &self.counit[j]));
            for i in 0..n {
                rows.push(r.row(i).to_vec());
            }
        }
        kernel_of_rows(n, rows.iter().map(|r| r.as_slice()))
    }

    pub fn left_integral_space(&self) -> Subspace<F> {
        let n = self.dim();
        let mut rows: Vec<SparseVec<F>> = Vec::new();
        for &j in self.alg.generators() {
            let r = self.alg.left_mult_basis(j).sub(&Matrix::scalar(n, &self.counit[j]));
            for i in 0..n {
                rows.push(r.row(i).to_vec());
            }
        }
        kernel_of_rows(n, rows.iter().map(|r| r.as_slice()))
    }

    /// Right cointegrals as coefficient vectors `lambda(e_i)`.
    pub fn right_cointegral_space(&self, conv: Convention) -> Subspace<F> {
        let n = self.dim();
        let unit = self.alg.unit();
        let mut rows: Vec<SparseVec<F>> = Vec::new();
        for h in 0..n {
            // one equation per output coordinate q
            let mut per_q: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
            for (p, r, c) in &self.comult[h] {
                match conv {
                    Convention::A => per_q[*r].push((*p, c.clone())),
                    Convention::B => per_q[*p].push((*r, c.clone())),
                }
            }
            for (q, u) in unit.iter().enumerate() {
                if !u.is_zero() {
                    per_q[q].push((h, -u.clone()));
                }
            }
            for eq in per_q {
                let eq = crate::algebra::normalize1(eq);
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
        kernel_of_rows(n, rows.iter().map(|r| r.as_slice()))
    }

    /// `alpha` with `h Lambda = alpha(h) Lambda`.
    pub fn modular_function(&self, lambda_int: &[F]) -> Result<Vec<F>> {
        let n = self.dim();
        let lead = lambda_int.iter().position(|x| !x.is_zero()).ok_or(Error::Axiom("zero integral".into()))?;
        let inv = lambda_int[lead].inv().unwrap();
        let mut alpha = Vec::with_capacity(n);
        for h in 0..n {
            let hl = self.alg.mul(&self.alg.basis(h), lambda_int);
            let a = hl[lead].mul_ref(&inv);
            let expect: Vec<F> = lambda_int.iter().map(|x| x.mul_ref(&a)).collect();
            if hl != expect {
                return Err(Error::Axiom("h Lambda is not a multiple of Lambda".into()));
            }
            alpha.push(a);
        }
        if !is_character(&self.alg, &alpha) {
            return Err(Error::Axiom("modular function is not an algebra map".into()));
        }
        Ok(alpha)
    }

    /// Distinguished grouplike: `h_(1) lambda(h_(2)) = lambda(h) g` under
    /// convention A, and `lambda(h_(1)) h_(2) = lambda(h) g` under B.
    pub fn distinguished_grouplike(&self, lambda: &[F], conv: Convention) -> Result<Vec<F>> {
        let n = self.dim();
        let apply = |h: usize| -> Vec<F> {
            let mut out = vec![F::zero(); n];
            for (p, r, c) in &self.comult[h] {
                match conv {
                    Convention::A => out[*p].add_mul(c, &lambda[*r]),
                    Convention::B => out[*r].add_mul(c, &lambda[*p]),
                }
            }
            out
        };
        let h0 = lambda.iter().position(|x| !x.is_zero()).ok_or(Error::Axiom("zero cointegral".into()))?;
        let inv = lambda[h0].inv().unwrap();
        let g: Vec<F> = apply(h0).into_iter().map(|x| x.mul_ref(&inv)).collect();
        for h in 0..n {
            let want: Vec<F> = g.iter().map(|x| x.mul_ref(&lambda[h])).collect();
            if apply(h) != want {
                return Err(Error::Axiom("distinguished grouplike relation inconsistent".into()));
            }
        }
        if !self.is_grouplike(&g) || !self.alg.is_unit_element(&g) {
            return Err(Error::Axiom("distinguished grouplike is not an invertible grouplike".into()));
        }
        Ok(g)
    }

    /// Integral, cointegral with `<lambda, Lambda> = 1`, modular function and
    /// distinguished grouplike.
    pub fn integral_data(&self, conv: Convention) -> Result<IntegralData<F>> {
        let ints = self.right_integral_space();
        let coints = self.right_cointegral_space(conv);
        if ints.dim() != 1 || coints.dim() != 1 {
            return Err(Error::Axiom(format!(
                "integral space has dimension {} and cointegral space {}",
                ints.dim(),
                coints.dim()
            )));
        }
        let mut big = ints.basis()[0].clone();
        let lead = big.iter().position(|x| !x.is_zero()).unwrap();
        let s = big[lead].inv().unwrap();
        for x in big.iter_mut() {
            *x *= &s;
        }
        let lam = coints.basis()[0].clone();
        let pairing = dot(&lam, &big);
        let normalization_ok = !pairing.is_zero();
        let pinv = pairing.inv().ok_or_else(|| Error::Axiom("<lambda, Lambda> = 0".into()))?;
        let lam: Vec<F> = lam.into_iter().map(|x| x.mul_ref(&pinv)).collect();
        let alpha = self.modular_function(&big)?;
        let g = self.distinguished_grouplike(&lam, conv)?;
        Ok(IntegralData {
            convention: conv,
            right_integral: big,
            right_cointegral: lam,
            modular_function: alpha,
            distinguished_grouplike: g,
            normalization_ok,
        })
    }

    /// Checks the two families of integral identities relating `Lambda`,
    /// `lambda` and the inverse antipode. Returns failure descriptions.
    pub fn check_integral_identities(&self, data: &IntegralData<F>) -> Result<Vec<String>> {
        let n = self.dim();
        let sinv = self.s_inv()?;
        let lam = &data.right_cointegral;
        let d = self.comult(&data.right_integral);
        let mut fails = Vec::new();
        let mut a = vec![F::zero(); n];
        let mut b = vec![F::zero(); n];
        for (p, q, c) in &d {
            let sq = sinv.column(*q);
            let cl = c.mul_ref(&lam[*p]);
            for k in 0..n {
                a[k].add_mul(&cl, &sq[k]);
            }
            let mut lsq = F::zero();
            for k in 0..n {
                lsq.add_mul(&lam[k], &sq[k]);
            }
            b[*p].add_mul(c, &lsq);
        }
        if a != self.alg.unit() {
            fails.push("<lambda, Lambda_(1)> S^-1(Lambda_(2)) != 1".into());
        }
        if b != self.alg.unit() {
            fails.push("Lambda_(1) <lambda, S^-1(Lambda_(2))> != 1".into());
        }
        for h in 0..n {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for (p, q, c) in &d {
                let sq = sinv.column(*q);
                let ph = self.alg.mul_basis(*p, h);
                for (i, x) in ph {
                    for (j, y) in sq.iter().enumerate() {
                        if !y.is_zero() {
                            l.push((*i, j, c.mul_ref(x).mul_ref(y)));
                        }
                    }
                }
                let hs = self.alg.mul(&self.alg.basis(h), &sq);
                for (j, y) in hs.iter().enumerate() {
                    if !y.is_zero() {
                        r.push((*p, j, c.mul_ref(y)));
                    }
                }
            }
            if normalize2(l) != normalize2(r) {
                fails.push(format!("Lambda_(1) h (x) S^-1(Lambda_(2)) identity fails at h = {}", self.alg.labels[h]));
                break;
            }
        }
        Ok(fails)
    }

    /// Declared grouplikes `g` with `g h g^-1 = S^2(h)` for all `h`.
    pub fn pivotal_elements(&self) -> Vec<Vec<F>> {
        let s2 = self.antipode.mul(&self.antipode);
        self.grouplikes
            .iter()
            .filter(|g| {
                self.alg.generators().iter().all(|&h| {
                    let gh = self.alg.mul(g, &self.alg.basis(h));
                    gh == self.alg.mul(&s2.column(h), g)
                })
            })
            .cloned()
            .collect()
    }

    /// `g` raised to an integer power; negative powers use the inverse.
    pub fn power(&self, g: &[F], k: i64) -> Vec<F> {
        let base = if k < 0 { self.alg.inverse(g).expect("invertible element") } else { g.to_vec() };
        let mut acc = self.alg.unit().to_vec();
        for _ in 0..k.unsigned_abs() {
            acc = self.alg.mul(&acc, &base);
        }
        acc
    }

    /// Human-readable rendering of an element by its nonzero terms.
    pub fn render(&self, v: &[F]) -> String {
        render_element(&self.alg.labels, v)
    }
}

pub fn render_element<F: Field>(labels: &[String], v: &[F]) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            parts.push(labels[i].clone());
        } else {
            parts.push(format!("({c})*{}", labels[i]));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_mul(x, y);
    }
    acc
}

/// Whether `chi` (values on basis elements) is a unital algebra map to `F`.
pub fn is_character<F: Field>(alg: &FinAlgebra<F>, chi: &[F]) -> bool {
    if dot(chi, alg.unit()) != F::one() {
        return false;
    }
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            let mut v = F::zero();
            for (k, c) in alg.mul_basis(i, j) {
                v.add_mul(c, &chi[*k]);
            }
            if v != chi[i].mul_ref(&chi[j]) {
                return false;
            }
        }
    }
    true
}

/// Solves `sum S(h_(1)) h_(2) = counit(h) 1` for the matrix of `S`.
fn solve_antipode<F: Field>(alg: &FinAlgebra<F>, comult: &[Tensor2<F>], counit: &[F]) -> Option<Matrix<F>> {
    let n = alg.dim();
    // unknown s[p][q] = coefficient of e_q in S(e_p), index p * n + q
    let mut rows: Vec<SparseVec<F>> = Vec::new();
    let mut rhs: Vec<F> = Vec::new();
    for h in 0..n {
        let mut per_k: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
        for (p, r, c) in &comult[h] {
            for q in 0..n {
                for (k, m) in alg.mul_basis(q, *r) {
                    per_k[*k].push((p * n + q, c.mul_ref(m)));
                }
            }
        }
        for (k, eq) in per_k.into_iter().enumerate() {
            rows.push(crate::algebra::normalize1(eq));
            rhs.push(alg.unit()[k].mul_ref(&counit[h]));
        }
    }
    let mut trip = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r {
            trip.push((i, *j, v.clone()));
        }
    }
    let sys = Matrix::from_triplets(rows.len(), n * n, trip);
    let sol = sys.solve(&rhs)?;
    // column p of the matrix is S(e_p)
    Some(Matrix::from_fn(n, n, |q, p| sol[p * n + q].clone()))
}
