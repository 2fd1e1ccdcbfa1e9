use std::collections::BTreeMap;

use hopf_serre::catalog::{build_comodule_algebra, CatalogParams, Family};
use hopf_serre::cyclo::q_binomial;
use hopf_serre::hopf::Convention;
use hopf_serre::ihom::{ihom_compose, ihom_identity, ihom_space};
use hopf_serre::linalg::{combine_matrices, invertible_in_span, SpanSearch};
use hopf_serre::module::Module;
use hopf_serre::scf::{serialize_catalog, Loaded, ScfDocument};
use hopf_serre::{Cyclo, CyclotomicField, Field, Matrix, Rational, Q3, Q5};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn cyclo<const N: usize>() -> impl Strategy<Value = Cyclo<N>> {
    let deg = <Cyclo<N> as CyclotomicField>::degree();
    prop::collection::vec((-20i64..=20, 1i64..=7), deg)
        .prop_map(|v| Cyclo::<N>::from_coeffs(v.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect()))
}

fn matrix3(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Q3>> {
    prop::collection::vec((-2i64..=2, 0i64..3), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        Matrix::from_fn(rows, cols, |_, _| {
            let (a, k) = it.next().unwrap();
            Q3::from_int(a) * Q3::zeta_pow(k)
        })
    })
}

/// Coefficient of `X^i Y^(n-i)` in `(X + Y)^n` with `Y X = q X Y`, by
/// multiplying out in the normal-ordered basis.
fn free_expansion<F: Field>(n: usize, q: &F) -> Vec<F> {
    let mut poly: BTreeMap<(usize, usize), F> = BTreeMap::new();
    poly.insert((0, 0), F::one());
    for _ in 0..n {
        let mut next: BTreeMap<(usize, usize), F> = BTreeMap::new();
        for ((a, b), c) in &poly {
            // X^a Y^b X = q^b X^(a+1) Y^b
            *next.entry((a + 1, *b)).or_insert_with(F::zero) += &c.mul_ref(&q.pow(*b as u64));
            *next.entry((*a, b + 1)).or_insert_with(F::zero) += c;
        }
        poly = next;
    }
    (0..=n).map(|i| poly.get(&(i, n - i)).cloned().unwrap_or_else(F::zero)).collect()
}

fn q_int<F: Field>(k: usize, q: &F) -> F {
    let mut s = F::zero();
    for j in 0..k {
        s += &q.pow(j as u64);
    }
    s
}

fn q_factorial<F: Field>(k: usize, q: &F) -> F {
    let mut f = F::one();
    for j in 1..=k {
        f *= &q_int(j, q);
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms_q3(a in cyclo::<3>(), b in cyclo::<3>(), c in cyclo::<3>()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), Q3::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inv().unwrap(), Q3::one());
        }
    }

    #[test]
    fn field_axioms_q12(a in cyclo::<12>(), b in cyclo::<12>(), c in cyclo::<12>()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        if !b.is_zero() {
            prop_assert_eq!((a.clone() * b.clone()).div_ref(&b).unwrap(), a);
        }
    }

    #[test]
    fn render_parse_roundtrip(a in cyclo::<5>()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Q5>().unwrap(), a);
    }

    #[test]
    fn zeta_pow_additive(a in 0i64..24, b in 0i64..24) {
        prop_assert_eq!(Cyclo::<12>::zeta_pow(a) * Cyclo::<12>::zeta_pow(b), Cyclo::<12>::zeta_pow(a + b));
        let (a, b) = (a % 6, b % 10);
        prop_assert_eq!(Q5::zeta_pow(a) * Q5::zeta_pow(b), Q5::zeta_pow(a + b));
    }

    #[test]
    fn q_binomial_matches_factorials(q in cyclo::<5>(), n in 0usize..8, i in 0usize..8) {
        let i = i.min(n);
        let num = q_factorial(n, &q);
        let den = q_factorial(i, &q).mul_ref(&q_factorial(n - i, &q));
        if let Some(v) = num.div_ref(&den) {
            prop_assert_eq!(q_binomial(n, i, &q), v);
        }
        prop_assert_eq!(q_binomial(n, i, &q), free_expansion(n, &q)[i].clone());
    }

    #[test]
    fn kernel_rank_nullity(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix3(r, c))) {
        let (r, c) = (a.nrows(), a.ncols());
        let k = a.kernel();
        for v in k.basis() {
            prop_assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(a.rank() + k.dim(), c);
        if r == c {
            prop_assert_eq!(a.inverse().is_some(), !a.determinant().is_zero());
            if let Some(inv) = a.inverse() {
                prop_assert!(a.mul(&inv).is_identity() && inv.mul(&a).is_identity());
            }
        }
    }

    #[test]
    fn span_search_sound(gens in (1usize..4).prop_flat_map(|n| prop::collection::vec(matrix3(n, n), 1..5))) {
        match invertible_in_span(&gens).unwrap() {
            SpanSearch::Found(w) => {
                prop_assert!(w.matrix.is_invertible());
                prop_assert_eq!(combine_matrices(&gens, &w.coeffs), w.matrix);
            }
            SpanSearch::Singular(_) => {
                // every integer point of a small box is singular too
                let k = gens.len();
                for code in 0..3usize.pow(k as u32) {
                    let c: Vec<Q3> = (0..k).map(|p| Q3::from_int((code / 3usize.pow(p as u32) % 3) as i64 - 1)).collect();
                    prop_assert!(!combine_matrices(&gens, &c).is_invertible());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compose_associative_on_l0(d in prop::sample::select(vec![1usize, 3]), s in any::<u64>()) {
        let obj = build_comodule_algebra(&CatalogParams::new(3, 1, Family::<Q3>::TaftL0 { d })).unwrap();
        let la = &obj.la;
        let h = la.hopf.as_ref();
        let mods: Vec<Module<Q3>> = la.characters.iter().map(|(n, c)| Module::character(n.clone(), c)).collect();
        let pick = |k: u64| &mods[(k % mods.len() as u64) as usize];
        let (m1, m2, m3, m4) = (pick(s), pick(s >> 8), pick(s >> 16), pick(s >> 24));
        let s12 = ihom_space(la, m1, m2).unwrap();
        let s23 = ihom_space(la, m2, m3).unwrap();
        let s34 = ihom_space(la, m3, m4).unwrap();
        prop_assume!(s12.dim() > 0 && s23.dim() > 0 && s34.dim() > 0);
        let coeffs = |n: usize, salt: u64| -> Vec<Q3> { (0..n).map(|i| Q3::from_int(((s ^ salt).rotate_left(i as u32 * 7) % 5) as i64 - 2)).collect() };
        let f = s34.element(&coeffs(s34.dim(), 1));
        let g = s23.element(&coeffs(s23.dim(), 2));
        let k = s12.element(&coeffs(s12.dim(), 3));
        let fg = ihom_compose(h, &f, &g, m2, m3, m4, None).unwrap();
        let gk = ihom_compose(h, &g, &k, m1, m2, m3, None).unwrap();
        let lhs = ihom_compose(h, &fg, &k, m1, m2, m4, None).unwrap();
        let rhs = ihom_compose(h, &f, &gk, m1, m3, m4, None).unwrap();
        prop_assert_eq!(lhs, rhs);
        let id2 = ihom_identity(h, m2.dim());
        prop_assert_eq!(ihom_compose(h, &id2, &k, m1, m2, m2, None).unwrap(), k.clone());
        let id1 = ihom_identity(h, m1.dim());
        prop_assert_eq!(ihom_compose(h, &k, &id1, m1, m1, m2, None).unwrap(), k);
    }

    #[test]
    fn catalog_scf_roundtrip(which in 0usize..5, xi in 0i64..2) {
        let xi = Q3::from_int(xi);
        let fam = match which {
            0 => Family::TaftL0 { d: 3 },
            1 => Family::TaftL1 { d: 3, xi },
            2 => Family::BookL1 { d: 1, xi },
            3 => Family::BookL3 { a: Q3::one(), b: Q3::zero(), xi },
            _ => Family::GroupAlgebra { n: 3 },
        };
        let obj = build_comodule_algebra(&CatalogParams::new(3, 1, fam)).unwrap();
        let text = serialize_catalog(&obj).to_json();
        let doc = ScfDocument::from_json(&text).unwrap();
        let Loaded::Comodule(la) = doc.load::<Q3>(None).unwrap() else { panic!("not a comodule algebra") };
        prop_assert_eq!(la.dim(), obj.la.dim());
        for i in 0..la.dim() {
            prop_assert_eq!(la.coaction_basis(i), obj.la.coaction_basis(i));
            for j in 0..la.dim() {
                prop_assert_eq!(la.alg.mul_basis(i, j), obj.la.alg.mul_basis(i, j));
            }
        }
        prop_assert_eq!(la.hopf.antipode(), obj.la.hopf.antipode());
        prop_assert_eq!(doc.to_json(), text);
        prop_assert!(la.check_axioms().all_passed());
        let ints = la.hopf.integral_data(Convention::A).unwrap();
        prop_assert!(ints.normalization_ok);
    }
}
