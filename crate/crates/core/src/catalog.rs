//! Constructors for the Taft algebra, the book Hopf algebra, their exact
//! comodule algebras, and small sanity objects.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{normalize2, FinAlgebra, Tensor2};
use crate::comodule::ComoduleAlgebra;
use crate::field::{CyclotomicField, Field};
use crate::hopf::HopfAlgebra;
use crate::linalg::{Echelon, Matrix};
use crate::module::Module;
use crate::presentation::{Poly, Presentation, Presented};
use crate::{Error, Result};

/// `omega = zeta^(K/N * e)` in a field of conductor `K`.
pub fn omega<F: CyclotomicField>(n: usize, e: i64) -> Result<F> {
    let k = F::conductor();
    if n == 0 || k % n != 0 {
        return Err(Error::Unsupported(format!("a primitive {n}-th root of unity needs conductor divisible by {n}, have {k}")));
    }
    if num_integer::gcd(e.rem_euclid(n as i64), n as i64) != 1 {
        return Err(Error::Unsupported(format!("exponent {e} is not coprime to {n}")));
    }
    Ok(F::zeta_pow((k / n) as i64 * e))
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Unsupported("N must be at least 2".into()));
    }
    Ok(())
}

fn poly1<F: Field>(c: F, word: Vec<usize>) -> Poly<F> {
    vec![(word, c)]
}

fn hopf_from<F: Field>(
    pr: &Presented<F>,
    gen_comult: Vec<Tensor2<F>>,
    counit_values: &[F],
    grouplike_exps: Vec<Vec<usize>>,
) -> Result<HopfAlgebra<F>> {
    pr.check()?;
    let comult = pr.extend_tensor(&pr.alg, &gen_comult);
    let counit = pr.multiplicative_functional(counit_values);
    let grouplikes = grouplike_exps
        .iter()
        .map(|e| crate::linalg::unit_vector(pr.dim(), pr.monomial_index(e).expect("grouplike monomial")))
        .collect();
    let h = HopfAlgebra::new(pr.alg.clone(), comult, counit, None, grouplikes)?;
    Ok(h)
}

fn verified<F: Field>(h: HopfAlgebra<F>) -> Result<HopfAlgebra<F>> {
    let rep = h.check_axioms();
    if let Some(f) = rep.failures().next() {
        return Err(Error::Axiom(format!("{}: {} ({})", h.name(), f.name, f.detail)));
    }
    Ok(h)
}

/// One-dimensional characters obtained by giving each generator a value
/// from `candidates`, keeping the assignments that respect every relation.
fn characters_by_search<F: Field>(pr: &Presented<F>, candidates: &[F], fixed: &[Option<F>]) -> Vec<Vec<F>> {
    let k = pr.presentation.letters.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let values: Vec<F> = (0..k)
            .map(|a| match &fixed[a] {
                Some(v) => v.clone(),
                None => candidates[idx[a]].clone(),
            })
            .collect();
        if relations_hold(&pr.presentation, &values) {
            let chi = pr.multiplicative_functional(&values);
            if !out.contains(&chi) {
                out.push(chi);
            }
        }
        let mut a = 0;
        loop {
            if a == k {
                return out;
            }
            if fixed[a].is_some() {
                a += 1;
                continue;
            }
            idx[a] += 1;
            if idx[a] < candidates.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

fn eval_word<F: Field>(w: &[usize], values: &[F]) -> F {
    let mut acc = F::one();
    for &a in w {
        acc *= &values[a];
    }
    acc
}

fn eval_poly<F: Field>(p: &Poly<F>, values: &[F]) -> F {
    let mut acc = F::zero();
    for (w, c) in p {
        acc.add_mul(c, &eval_word(w, values));
    }
    acc
}

fn relations_hold<F: Field>(p: &Presentation<F>, values: &[F]) -> bool {
    let k = p.letters.len();
    for a in 0..k {
        let lhs = values[a].pow(p.bounds[a] as u64);
        if lhs != eval_poly(&p.power_rhs(a), values) {
            return false;
        }
        for b in 0..a {
            if let Some(r) = p.swap_rule_opt(a, b) {
                if values[a].mul_ref(&values[b]) != eval_poly(&r, values) {
                    return false;
                }
            }
        }
    }
    true
}

/// Roots of unity in the field together with zero.
pub fn root_candidates<F: CyclotomicField>() -> Vec<F> {
    let k = F::conductor() as i64;
    let mut out = vec![F::zero()];
    for j in 0..k {
        for s in [F::one(), -F::one()] {
            let v = F::zeta_pow(j).mul_ref(&s);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// `T(omega)`: generated by `g, x` with `x^N = 0`, `g^N = 1`, `g x = omega x g`,
/// `Delta(g) = g (x) g`, `Delta(x) = x (x) 1 + g (x) x`; basis `x^i g^j`.
pub fn build_taft<F: CyclotomicField>(n: usize, e: i64) -> Result<HopfAlgebra<F>> {
    check_n(n)?;
    let w: F = omega(n, e)?;
    let mut p = Presentation::new(&["x", "g"], &[n, n]);
    p.commute(1, 0, poly1(w.clone(), vec![0, 1]));
    p.power(1, poly1(F::one(), vec![]));
    let pr = Presented::build(format!("T({n})"), p);
    let x = pr.generator_index("x").unwrap();
    let g = pr.generator_index("g").unwrap();
    let comult = vec![
        normalize2(vec![(x, 0, F::one()), (g, x, F::one())]),
        normalize2(vec![(g, g, F::one())]),
    ];
    let mut h = hopf_from(&pr, comult, &[F::zero(), F::one()], (0..n).map(|j| vec![0, j]).collect())?;
    h.characters = (0..n)
        .map(|k| (format!("chi{k}"), pr.multiplicative_functional(&[F::zero(), w.pow(k as u64)])))
        .collect();
    verified(h)
}

/// `H(1, omega)`: generated by `x, y, g` with `g^N = 1`, `g x = omega x g`,
/// `g y = omega^-1 y g`, `x y = omega y x`, `x^N = y^N = 0`, and
/// `Delta(x) = x (x) 1 + g^-1 (x) x`, `Delta(y) = y (x) 1 + g^-1 (x) y`.
pub fn build_book<F: CyclotomicField>(n: usize, e: i64) -> Result<HopfAlgebra<F>> {
    check_n(n)?;
    let w: F = omega(n, e)?;
    let wi = w.inv().unwrap();
    let mut p = Presentation::new(&["x", "y", "g"], &[n, n, n]);
    p.commute(1, 0, poly1(wi.clone(), vec![0, 1]));
    p.commute(2, 0, poly1(w.clone(), vec![0, 2]));
    p.commute(2, 1, poly1(wi, vec![1, 2]));
    p.power(2, poly1(F::one(), vec![]));
    let pr = Presented::build(format!("H({n})"), p);
    let x = pr.generator_index("x").unwrap();
    let y = pr.generator_index("y").unwrap();
    let g = pr.generator_index("g").unwrap();
    let ginv = pr.monomial_index(&[0, 0, n - 1]).unwrap();
    let comult = vec![
        normalize2(vec![(x, 0, F::one()), (ginv, x, F::one())]),
        normalize2(vec![(y, 0, F::one()), (ginv, y, F::one())]),
        normalize2(vec![(g, g, F::one())]),
    ];
    let mut h = hopf_from(&pr, comult, &[F::zero(), F::zero(), F::one()], (0..n).map(|j| vec![0, 0, j]).collect())?;
    h.characters = (0..n)
        .map(|k| (format!("chi{k}"), pr.multiplicative_functional(&[F::zero(), F::zero(), w.pow(k as u64)])))
        .collect();
    verified(h)
}

/// The group algebra of the cyclic group of order `n`, `Delta(g) = g (x) g`.
pub fn build_group_algebra<F: CyclotomicField>(n: usize) -> Result<HopfAlgebra<F>> {
    if n == 0 {
        return Err(Error::Unsupported("group order must be positive".into()));
    }
    let mut p = Presentation::new(&["g"], &[n]);
    p.power(0, poly1(F::one(), vec![]));
    let pr = Presented::build(format!("kC{n}"), p);
    let comult = match pr.generator_index("g") {
        Some(g) => vec![normalize2(vec![(g, g, F::one())])],
        None => vec![normalize2(vec![(0, 0, F::one())])],
    };
    let mut h = hopf_from(&pr, comult, &[F::one()], (0..n).map(|j| vec![j]).collect())?;
    h.characters = characters_by_search(&pr, &root_candidates::<F>(), &[None])
        .into_iter()
        .enumerate()
        .map(|(k, c)| (format!("chi{k}"), c))
        .collect();
    verified(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    Taft,
    Book,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Taft => write!(f, "taft"),
            Ambient::Book => write!(f, "book"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family<F> {
    TaftL0 { d: usize },
    TaftL1 { d: usize, xi: F },
    BookL0 { d: usize },
    BookL1 { d: usize, xi: F },
    BookL2 { d: usize, xi: F },
    BookL3 { a: F, b: F, xi: F },
    BookL4 { d: usize, xi: F, mu: F },
    BookL4Eta { xi: F, mu: F, eta: F },
    /// `kC_n` as a comodule algebra over itself.
    GroupAlgebra { n: usize },
    /// The base field with the unit coaction.
    TrivialL { over: Ambient },
}

impl<F: Field> Family<F> {
    pub fn ambient(&self) -> Option<Ambient> {
        match self {
            Family::TaftL0 { .. } | Family::TaftL1 { .. } => Some(Ambient::Taft),
            Family::GroupAlgebra { .. } => None,
            Family::TrivialL { over } => Some(*over),
            _ => Some(Ambient::Book),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Family::TaftL0 { d } | Family::BookL0 { d } => format!("L0({d})"),
            Family::TaftL1 { d, xi } | Family::BookL1 { d, xi } => format!("L1({d}; {xi})"),
            Family::BookL2 { d, xi } => format!("L2({d}; {xi})"),
            Family::BookL3 { a, b, xi } => format!("L3({a}, {b}; {xi})"),
            Family::BookL4 { d, xi, mu } => format!("L4({d}; {xi}, {mu})"),
            Family::BookL4Eta { xi, mu, eta } => format!("L4(N; {xi}, {mu}, {eta})"),
            Family::GroupAlgebra { n } => format!("kC{n}"),
            Family::TrivialL { .. } => "k".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogParams<F> {
    pub n: usize,
    pub omega_exponent: i64,
    pub family: Family<F>,
}

impl<F: Field> CatalogParams<F> {
    pub fn new(n: usize, omega_exponent: i64, family: Family<F>) -> Self {
        CatalogParams { n, omega_exponent, family }
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        let div = |d: usize| -> Result<()> {
            if d == 0 || self.n % d != 0 {
                Err(Error::Unsupported(format!("d = {d} does not divide N = {}", self.n)))
            } else {
                Ok(())
            }
        };
        match &self.family {
            Family::TaftL0 { d }
            | Family::TaftL1 { d, .. }
            | Family::BookL0 { d }
            | Family::BookL1 { d, .. }
            | Family::BookL2 { d, .. }
            | Family::BookL4 { d, .. } => div(*d),
            Family::BookL3 { a, b, .. } if a.is_zero() && b.is_zero() => {
                Err(Error::Unsupported("L3 needs (a, b) != (0, 0)".into()))
            }
            Family::GroupAlgebra { n } if *n == 0 => Err(Error::Unsupported("group order must be positive".into())),
            _ => Ok(()),
        }
    }
}

/// A catalog comodule algebra with the presentation it was built from.
#[derive(Clone, Debug)]
pub struct CatalogObject<F> {
    pub params: CatalogParams<F>,
    pub la: ComoduleAlgebra<F>,
    pub presented: Presented<F>,
    /// Index `j` such that the declared grouplike `j` of the ambient algebra
    /// is `g^j`.
    pub omega: F,
}

impl<F: Field> CatalogObject<F> {
    pub fn hopf(&self) -> &Arc<HopfAlgebra<F>> {
        &self.la.hopf
    }

    pub fn label(&self) -> String {
        self.params.family.label()
    }

    /// Element of `L` given by a word in its generator names.
    pub fn element(&self, word: &[&str]) -> Vec<F> {
        self.presented.element(word)
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.presented.generator_index(name)
    }
}

pub fn build_ambient<F: CyclotomicField>(which: Ambient, n: usize, e: i64) -> Result<HopfAlgebra<F>> {
    match which {
        Ambient::Taft => build_taft(n, e),
        Ambient::Book => build_book(n, e),
    }
}

/// Builds the comodule algebra with a freshly constructed ambient Hopf algebra.
pub fn build_comodule_algebra<F: CyclotomicField>(params: &CatalogParams<F>) -> Result<CatalogObject<F>> {
    params.validate()?;
    let h = match (&params.family, params.family.ambient()) {
        (Family::GroupAlgebra { n }, _) => build_group_algebra(*n)?,
        (_, Some(amb)) => build_ambient(amb, params.n, params.omega_exponent)?,
        _ => unreachable!(),
    };
    build_comodule_algebra_over(Arc::new(h), params)
}

/// Builds the comodule algebra over an already constructed ambient algebra,
/// which must be the one the family lives over.
pub fn build_comodule_algebra_over<F: CyclotomicField>(
    h: Arc<HopfAlgebra<F>>,
    params: &CatalogParams<F>,
) -> Result<CatalogObject<F>> {
    params.validate()?;
    let n = params.n;
    let w: F = omega(n, params.omega_exponent)?;
    let wi = w.inv().unwrap();
    let hp = |name: &str| -> usize {
        h.alg.labels.iter().position(|l| l == name).unwrap_or_else(|| panic!("ambient has no basis element {name}"))
    };
    // ambient g^k as a basis index
    let gpow = |k: i64| -> usize {
        let k = k.rem_euclid(h.grouplikes().len() as i64) as usize;
        h.grouplikes()[k].iter().position(|c| !c.is_zero()).unwrap()
    };
    let one = F::one();
    let fam = &params.family;
    // coaction images of the generators, in generator order; the L-leg is
    // the unit or a named generator
    type Img<F> = Vec<(usize, Option<&'static str>, F)>;
    let (name, pres, images): (String, Presentation<F>, Vec<Img<F>>) = match fam {
        Family::TaftL0 { d } | Family::BookL0 { d } => {
            let m = (n / d) as i64;
            let mut p = Presentation::new(&["G"], &[*d]);
            p.power(0, poly1(one.clone(), vec![]));
            (fam.label(), p, vec![vec![(gpow(m), Some("G"), one.clone())]])
        }
        Family::TaftL1 { d, xi } | Family::BookL1 { d, xi } => {
            let m = n / d;
            let mut p = Presentation::new(&["X", "G"], &[n, *d]);
            p.commute(1, 0, poly1(w.pow(m as u64), vec![0, 1]));
            p.power(0, poly1(xi.clone(), vec![]));
            p.power(1, poly1(one.clone(), vec![]));
            let side = if matches!(fam, Family::TaftL1 { .. }) { 1 } else { -1 };
            let dx = vec![(hp("x"), None, one.clone()), (gpow(side), Some("X"), one.clone())];
            let dg = vec![(gpow(m as i64), Some("G"), one.clone())];
            (fam.label(), p, vec![dx, dg])
        }
        Family::BookL2 { d, xi } => {
            let m = n / d;
            let mut p = Presentation::new(&["Y", "G"], &[n, *d]);
            p.commute(1, 0, poly1(wi.pow(m as u64), vec![0, 1]));
            p.power(0, poly1(xi.clone(), vec![]));
            p.power(1, poly1(one.clone(), vec![]));
            let dy = vec![(hp("y"), None, one.clone()), (gpow(-1), Some("Y"), one.clone())];
            let dg = vec![(gpow(m as i64), Some("G"), one.clone())];
            (fam.label(), p, vec![dy, dg])
        }
        Family::BookL3 { a, b, xi } => {
            let mut p = Presentation::new(&["W"], &[n]);
            p.power(0, poly1(xi.clone(), vec![]));
            let dw = vec![(hp("x"), None, a.clone()), (hp("y"), None, b.clone()), (gpow(-1), Some("W"), one.clone())];
            (fam.label(), p, vec![dw])
        }
        Family::BookL4 { d, xi, mu } => {
            let m = n / d;
            let mut p = Presentation::new(&["X", "Y", "G"], &[n, n, *d]);
            p.commute(1, 0, poly1(wi.clone(), vec![0, 1]));
            p.commute(2, 0, poly1(w.pow(m as u64), vec![0, 2]));
            p.commute(2, 1, poly1(wi.pow(m as u64), vec![1, 2]));
            p.power(0, poly1(xi.clone(), vec![]));
            p.power(1, poly1(mu.clone(), vec![]));
            p.power(2, poly1(one.clone(), vec![]));
            let dx = vec![(hp("x"), None, one.clone()), (gpow(-1), Some("X"), one.clone())];
            let dy = vec![(hp("y"), None, one.clone()), (gpow(-1), Some("Y"), one.clone())];
            let dg = vec![(gpow(m as i64), Some("G"), one.clone())];
            (fam.label(), p, vec![dx, dy, dg])
        }
        Family::BookL4Eta { xi, mu, eta } => {
            let mut p = Presentation::new(&["X", "Y", "G"], &[n, n, n]);
            // X Y = omega Y X + eta G^(N-2)  <=>  Y X = omega^-1 X Y - omega^-1 eta G^(N-2)
            let mut yx = poly1(wi.clone(), vec![0, 1]);
            if !eta.is_zero() {
                yx.push((vec![2; n - 2], -(wi.mul_ref(eta))));
            }
            p.commute(1, 0, yx);
            p.commute(2, 0, poly1(w.clone(), vec![0, 2]));
            p.commute(2, 1, poly1(wi.clone(), vec![1, 2]));
            p.power(0, poly1(xi.clone(), vec![]));
            p.power(1, poly1(mu.clone(), vec![]));
            p.power(2, poly1(one.clone(), vec![]));
            let dx = vec![(hp("x"), None, one.clone()), (gpow(-1), Some("X"), one.clone())];
            let dy = vec![(hp("y"), None, one.clone()), (gpow(-1), Some("Y"), one.clone())];
            let dg = vec![(gpow(1), Some("G"), one.clone())];
            (fam.label(), p, vec![dx, dy, dg])
        }
        Family::GroupAlgebra { n: k } => {
            let mut p = Presentation::new(&["G"], &[*k]);
            p.power(0, poly1(one.clone(), vec![]));
            (fam.label(), p, vec![vec![(gpow(1), Some("G"), one.clone())]])
        }
        Family::TrivialL { .. } => (fam.label(), Presentation::new(&[], &[]), vec![]),
    };
    let pr = Presented::build(name, pres);
    pr.check()?;
    let images: Vec<Tensor2<F>> = images
        .into_iter()
        .map(|img| {
            normalize2(img.into_iter().map(|(hh, l, c)| (hh, l.and_then(|s| pr.generator_index(s)).unwrap_or(0), c)))
        })
        .collect();
    let coaction = pr.extend_tensor(&h.alg, &images);
    let mut la = ComoduleAlgebra::new(pr.alg.clone(), h.clone(), coaction)?;
    la.exactness_note = Some(exactness_note(fam));
    la.characters = characters_by_search(&pr, &root_candidates::<F>(), &vec![None; pr.presentation.letters.len()])
        .into_iter()
        .enumerate()
        .map(|(k, c)| (format!("chi{k}"), c))
        .collect();
    let rep = la.check_axioms();
    if let Some(f) = rep.failures().next() {
        return Err(Error::Axiom(format!("{}: {} ({})", la.name(), f.name, f.detail)));
    }
    Ok(CatalogObject { params: params.clone(), la, presented: pr, omega: w })
}

fn exactness_note<F: Field>(fam: &Family<F>) -> String {
    match fam {
        Family::GroupAlgebra { .. } | Family::TrivialL { .. } => {
            "exact: semisimple or regular comodule algebra".into()
        }
        _ => "exactness taken from the classification of exact comodule algebras; not checked here".into(),
    }
}

/// Checks that sending generators of `src` to the given elements of `dst`
/// extends to an isomorphism of comodule algebras. Returns the matrix.
pub fn generator_map_isomorphism<F: Field>(
    src: &CatalogObject<F>,
    dst: &CatalogObject<F>,
    images: &[(&str, Vec<F>)],
) -> Result<Matrix<F>> {
    let sp = &src.presented;
    let k = sp.presentation.letters.len();
    let mut vals: Vec<Vec<F>> = Vec::with_capacity(k);
    for a in 0..k {
        let name = &sp.presentation.letters[a];
        let v = images
            .iter()
            .find(|(s, _)| s == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| dst.la.alg.unit().to_vec());
        vals.push(v);
    }
    let cols = sp.extend_multiplicatively(dst.la.alg.unit().to_vec(), &vals, |a, b| dst.la.alg.mul(a, b));
    let phi = Matrix::from_columns(dst.la.dim(), &cols);
    if src.la.dim() != dst.la.dim() || !phi.is_invertible() {
        return Err(Error::Axiom("generator map is not bijective".into()));
    }
    // multiplicativity
    let n = src.la.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = phi.apply(&crate::algebra::to_dense(n, src.la.alg.mul_basis(i, j)));
            if lhs != dst.la.alg.mul(&cols[i], &cols[j]) {
                return Err(Error::Axiom("generator map is not multiplicative".into()));
            }
        }
    }
    // colinearity: (id (x) phi) delta = delta phi
    for (i, col) in cols.iter().enumerate() {
        let mut t = Vec::new();
        for (h, l, c) in src.la.coaction_basis(i) {
            for (p, x) in cols[*l].iter().enumerate() {
                if !x.is_zero() {
                    t.push((*h, p, c.mul_ref(x)));
                }
            }
        }
        if normalize2(t) != dst.la.coaction(col) {
            return Err(Error::Axiom("generator map does not preserve the coaction".into()));
        }
    }
    Ok(phi)
}

/// `L / J` where `J` is the left ideal generated by `gens`; the quotient is
/// given on the standard vectors outside the pivot columns of `J`.
pub fn quotient_module<F: Field>(alg: &FinAlgebra<F>, name: impl Into<String>, gens: &[Vec<F>]) -> Module<F> {
    let n = alg.dim();
    let mut e = Echelon::new(n);
    for r in gens {
        for i in 0..n {
            e.insert_dense(&alg.mul(&alg.basis(i), r));
        }
    }
    e.reduce_fully();
    let pivots = e.pivots();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let pos: std::collections::HashMap<usize, usize> = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let d = free.len();
    let action = (0..n)
        .map(|i| {
            let mut trip = Vec::new();
            for (col, &f) in free.iter().enumerate() {
                let prod = crate::algebra::to_sparse(&crate::algebra::to_dense(n, alg.mul_basis(i, f)));
                let red = e.reduce(&prod);
                for (c, x) in red {
                    trip.push((pos[&c], col, x));
                }
            }
            Matrix::from_triplets(d, d, trip)
        })
        .collect();
    Module::new(name, d, action)
}

/// Small modules used as probes: characters and cyclic quotients of
/// dimension at most `max_dim`.
pub fn probe_modules<F: CyclotomicField>(obj: &CatalogObject<F>, max_dim: usize) -> Vec<Module<F>> {
    let alg = &obj.la.alg;
    let mut out: Vec<Module<F>> = obj
        .la
        .characters
        .iter()
        .map(|(name, chi)| Module::character(name.clone(), chi))
        .collect();
    let unit = alg.unit().to_vec();
    let minus = |v: Vec<F>, c: &F| -> Vec<F> {
        let mut v = v;
        for (a, b) in v.iter_mut().zip(&unit) {
            a.add_mul(&-c.clone(), b);
        }
        v
    };
    let roots = root_candidates::<F>();
    let letters: Vec<String> = obj.presented.presentation.letters.clone();
    let has = |s: &str| letters.iter().any(|l| l == s) && obj.generator(s).is_some();
    let mut ideals: Vec<(String, Vec<Vec<F>>)> = Vec::new();
    let gvals: Vec<F> = if has("G") { roots.iter().filter(|c| !c.is_zero()).cloned().collect() } else { vec![F::one()] };
    for c in &gvals {
        let base: Vec<Vec<F>> = if has("G") { vec![minus(obj.element(&["G"]), c)] } else { Vec::new() };
        let tag = if has("G") { format!("G={c}") } else { String::new() };
        if !base.is_empty() {
            ideals.push((format!("L/L({tag})"), base.clone()));
        }
        for s in ["X", "Y"] {
            if has(s) {
                let mut g = base.clone();
                g.push(obj.element(&[s]));
                ideals.push((format!("L/L({tag},{s})"), g));
            }
        }
        if has("X") && has("Y") {
            for b in &roots {
                let mut g = base.clone();
                g.push(minus(obj.element(&["Y", "X"]), b));
                ideals.push((format!("L/L({tag},YX={b})"), g));
            }
        }
        if has("W") {
            for b in &roots {
                let mut g = base.clone();
                g.push(minus(obj.element(&["W"]), b));
                ideals.push((format!("L/L(W={b})"), g));
            }
        }
    }
    for (name, gens) in ideals {
        let m = quotient_module(alg, name, &gens);
        if m.dim() >= 2 && m.dim() <= max_dim && !out.iter().any(|o| o.actions() == m.actions()) {
            out.push(m);
        }
    }
    if alg.dim() <= max_dim && alg.dim() >= 2 && !out.iter().any(|o| o.actions() == Module::regular(alg).actions()) {
        out.push(Module::regular(alg));
    }
    out
}

/// One-dimensional modules of the ambient Hopf algebra.
pub fn weight_modules<F: Field>(h: &HopfAlgebra<F>) -> Vec<Module<F>> {
    h.characters.iter().map(|(name, chi)| Module::character(name.clone(), chi)).collect()
}

/// The acceptance grid of comodule algebras over `T(omega)`.
pub fn taft_grid<F: Field>(n: usize) -> Vec<Family<F>> {
    let mut out = Vec::new();
    for d in divisors(n) {
        out.push(Family::TaftL0 { d });
    }
    for d in divisors(n) {
        for xi in [F::zero(), F::one()] {
            out.push(Family::TaftL1 { d, xi });
        }
    }
    out
}

/// The acceptance grid of comodule algebras over `H(1, omega)`.
pub fn book_grid<F: Field>(n: usize) -> Vec<Family<F>> {
    let bits = [F::zero(), F::one()];
    let mut out = Vec::new();
    for d in divisors(n) {
        out.push(Family::BookL0 { d });
    }
    for d in divisors(n) {
        for xi in &bits {
            out.push(Family::BookL1 { d, xi: xi.clone() });
        }
    }
    for d in divisors(n) {
        for xi in &bits {
            out.push(Family::BookL2 { d, xi: xi.clone() });
        }
    }
    for (a, b) in [(1, 0), (0, 1), (1, 1)] {
        for xi in &bits {
            out.push(Family::BookL3 { a: F::from_int(a), b: F::from_int(b), xi: xi.clone() });
        }
    }
    for d in divisors(n) {
        for xi in &bits {
            for mu in &bits {
                out.push(Family::BookL4 { d, xi: xi.clone(), mu: mu.clone() });
            }
        }
    }
    for xi in &bits {
        for mu in &bits {
            for eta in &bits {
                out.push(Family::BookL4Eta { xi: xi.clone(), mu: mu.clone(), eta: eta.clone() });
            }
        }
    }
    out
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}
