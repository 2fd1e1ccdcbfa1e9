//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Runs without the libtest harness so the lines land on stdout in order.

use std::time::{Duration, Instant};

use hopf_serre::catalog::{
    book_grid, build_ambient, build_book, build_comodule_algebra_over, build_taft, probe_modules, taft_grid, Ambient,
    CatalogObject, CatalogParams,
};
use hopf_serre::cyclo::q_binomial;
use hopf_serre::explicit::compare_explicit;
use hopf_serre::hopf::{Convention, HopfAlgebra};
use hopf_serre::ihom::{internal_end_nakayama, SerreContext};
use hopf_serre::linalg::{combine_matrices, invertible_in_span, SpanSearch};
use hopf_serre::module::modules_isomorphic;
use hopf_serre::report::{build_table, convention_probe, CellOptions, TableReport};
use hopf_serre::{Cyclo, CyclotomicField, Error, Field, Matrix, Rational, Q3, Q4};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

struct Outcome {
    ok: bool,
    detail: String,
}

fn verdict(n: usize, title: &str, out: Outcome) -> bool {
    let tag = if out.ok { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} {tag}: {title}; {}", out.detail);
    out.ok
}

fn opts() -> CellOptions {
    CellOptions { convention: Convention::A, cross_check_max_dim: 27, serre_probe_dim: 3 }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn table<F: CyclotomicField>(which: Ambient, n: usize) -> (TableReport, Duration) {
    let (r, t) = timed(|| build_table::<F>(which, n, 1, None, &opts(), true));
    (r.expect("table builds"), t)
}

fn mismatch_rows(r: &TableReport) -> Vec<String> {
    r.cells
        .iter()
        .filter(|c| c.matches == Some(false))
        .map(|c| {
            let e = c.expected.as_ref().unwrap();
            format!(
                "{} at g^{}: got Nak {} Ser {} Piv {}, printed row `{}` says {:?} {} {}",
                c.family, c.grouplike, c.nakayama_inner, c.serre_trivial, c.pivotal, e.row,
                e.nakayama_inner, e.serre_trivial, e.pivotal
            )
        })
        .collect()
}

fn label_index<F: Field>(h: &HopfAlgebra<F>, label: &str) -> usize {
    h.alg.labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("no basis element {label}"))
}

fn pow_label(letter: &str, k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some(letter.to_string()),
        _ => Some(format!("{letter}^{k}")),
    }
}

fn monomial(parts: &[(&str, usize)]) -> String {
    let v: Vec<String> = parts.iter().filter_map(|(l, k)| pow_label(l, *k)).collect();
    if v.is_empty() {
        "1".into()
    } else {
        v.join("*")
    }
}

/// Problems with the integral data of `T(omega)` at `N`.
fn taft_invariants<F: CyclotomicField>(n: usize) -> Vec<String> {
    let mut bad = Vec::new();
    let h = build_taft::<F>(n, 1).unwrap();
    let w: F = hopf_serre::catalog::omega(n, 1).unwrap();
    let dim = h.dim();
    let ri = h.right_integral_space();
    let rc = h.right_cointegral_space(Convention::A);
    if ri.dim() != 1 || rc.dim() != 1 {
        bad.push(format!("T({n}): integral dims {} {}", ri.dim(), rc.dim()));
    }
    let mut lam_int = vec![F::zero(); dim];
    for s in 0..n {
        lam_int[label_index(&h, &monomial(&[("x", n - 1), ("g", s)]))] = F::one();
    }
    if !ri.contains(&lam_int) {
        bad.push(format!("T({n}): sum x^(N-1) g^i is not a right integral"));
    }
    let mut lam = vec![F::zero(); dim];
    lam[label_index(&h, &monomial(&[("x", n - 1)]))] = F::one();
    if !rc.contains(&lam) {
        bad.push(format!("T({n}): delta at x^(N-1) is not a right cointegral"));
    }
    match h.integral_data(Convention::A) {
        Err(e) => bad.push(format!("T({n}): {e}")),
        Ok(d) => {
            if !d.normalization_ok {
                bad.push(format!("T({n}): <lambda, Lambda> not normalizable"));
            }
            let fails = h.check_integral_identities(&d).unwrap();
            if !fails.is_empty() {
                bad.push(format!("T({n}): {}", fails.join("; ")));
            }
            let a = &d.modular_function;
            if a[label_index(&h, "g")] != w.inv().unwrap() || !a[label_index(&h, "x")].is_zero() {
                bad.push(format!("T({n}): alpha(g) = {}, alpha(x) = {}", a[label_index(&h, "g")], a[label_index(&h, "x")]));
            }
        }
    }
    let piv = h.pivotal_elements();
    if piv != vec![h.grouplikes()[n - 1].clone()] {
        bad.push(format!("T({n}): pivotal set {:?}", piv.iter().map(|p| h.render(p)).collect::<Vec<_>>()));
    }
    bad
}

fn book_invariants<F: CyclotomicField>(n: usize) -> Vec<String> {
    let mut bad = Vec::new();
    let h = build_book::<F>(n, 1).unwrap();
    let dim = h.dim();
    let ri = h.right_integral_space();
    let li = h.left_integral_space();
    let rc = h.right_cointegral_space(Convention::A);
    if ri.dim() != 1 || rc.dim() != 1 {
        bad.push(format!("H({n}): integral dims {} {}", ri.dim(), rc.dim()));
    }
    let mut lam_int = vec![F::zero(); dim];
    for t in 0..n {
        lam_int[label_index(&h, &monomial(&[("x", n - 1), ("y", n - 1), ("g", t)]))] = F::one();
    }
    if !ri.contains(&lam_int) || !li.contains(&lam_int) {
        bad.push(format!("H({n}): sum x^(N-1) y^(N-1) g^i is not two-sided"));
    }
    let mut lam = vec![F::zero(); dim];
    lam[label_index(&h, &monomial(&[("x", n - 1), ("y", n - 1)]))] = F::one();
    if !rc.contains(&lam) {
        bad.push(format!("H({n}): delta at x^(N-1) y^(N-1) is not a right cointegral"));
    }
    match h.integral_data(Convention::A) {
        Err(e) => bad.push(format!("H({n}): {e}")),
        Ok(d) => {
            if !d.normalization_ok {
                bad.push(format!("H({n}): not normalizable"));
            }
            let fails = h.check_integral_identities(&d).unwrap();
            if !fails.is_empty() {
                bad.push(format!("H({n}): {}", fails.join("; ")));
            }
            if d.modular_function != h.counit() {
                bad.push(format!("H({n}): alpha is not the counit"));
            }
            if d.distinguished_grouplike != h.grouplikes()[2 % n] {
                bad.push(format!("H({n}): g_H = {}", h.render(&d.distinguished_grouplike)));
            }
        }
    }
    let piv = h.pivotal_elements();
    if piv != vec![h.grouplikes()[1].clone()] {
        bad.push(format!("H({n}): pivotal set {:?}", piv.iter().map(|p| h.render(p)).collect::<Vec<_>>()));
    }
    bad
}

fn objects<F: CyclotomicField>(which: Ambient, n: usize) -> Vec<CatalogObject<F>> {
    let h = Arc::new(build_ambient::<F>(which, n, 1).unwrap());
    let grid = match which {
        Ambient::Taft => taft_grid::<F>(n),
        Ambient::Book => book_grid::<F>(n),
    };
    grid.into_iter()
        .map(|fam| build_comodule_algebra_over(h.clone(), &CatalogParams::new(n, 1, fam)).unwrap())
        .collect()
}

#[derive(Default)]
struct ExplicitTally {
    families: usize,
    forms_bad: Vec<String>,
    nakayama_bad: Vec<String>,
    quoted_off: Vec<String>,
}

fn explicit_tally<F: CyclotomicField>(which: Ambient, n: usize, t: &mut ExplicitTally) {
    for obj in objects::<F>(which, n) {
        let ints = obj.hopf().integral_data(Convention::A).unwrap();
        let Some(c) = compare_explicit(&obj, &ints).unwrap() else { continue };
        t.families += 1;
        let name = format!("{which} N={n} {}", c.family);
        if !c.forms_match {
            t.forms_bad.push(format!("{name}: {}", c.notes.join("; ")));
        }
        if !c.nakayama_match || !c.twisted_match {
            t.nakayama_bad.push(format!("{name}: {}", c.notes.join("; ")));
        }
        if !c.quoted_grouplikes_match {
            t.quoted_off.push(name);
        }
    }
}

#[derive(Default)]
struct IhomTally {
    cells: usize,
    pairs: usize,
    pairing_bad: Vec<String>,
    skipped_cells: usize,
    pivotal_runs: usize,
    iso_runs: usize,
    no_iso: usize,
    nakayama_bad: Vec<String>,
    literal_fails: usize,
}

fn ihom_tally<F: CyclotomicField>(which: Ambient, n: usize, t: &mut IhomTally) {
    for obj in objects::<F>(which, n) {
        let la = &obj.la;
        let h = obj.hopf();
        let ints = h.integral_data(Convention::A).unwrap();
        let g_piv = h.pivotal_elements()[0].clone();
        let probes = probe_modules(&obj, 3);
        for (k, sp) in la.grouplike_cointegrals() {
            let Some(frob) = la.frobenius_data(&sp.basis()[0], &ints.modular_function).unwrap() else { continue };
            t.cells += 1;
            if probes.is_empty() {
                t.skipped_cells += 1;
                continue;
            }
            let g_l = h.grouplikes()[k].clone();
            let piv = la.pivotal_elements(&frob, &g_l, &ints, &g_piv).unwrap();
            let tag = format!("{which} {} g^{k}", obj.label());
            for m in &probes {
                let ctx = SerreContext::new(la, &frob, &ints, m).unwrap();
                for nn in &probes {
                    t.pairs += 1;
                    let d = ctx.pairing(la, nn).unwrap();
                    let c = &d.checks;
                    if !(c.nondegenerate && c.trace_independent && c.factors_through_compose && c.all()) {
                        t.pairing_bad.push(format!("{tag} ({}, {}): {c:?}", m.name, nn.name));
                    }
                }
                let pd = piv.witness.as_ref().map(|w| (g_piv.as_slice(), w.as_slice()));
                match internal_end_nakayama(la, &frob, &ints, m, pd) {
                    Ok(r) => {
                        let c = &r.checks;
                        let mut ok = c.nakayama_relation && c.routes_agree && c.form_nondegenerate;
                        if pd.is_some() {
                            t.pivotal_runs += 1;
                            ok &= c.nakayama_identity;
                        } else {
                            t.iso_runs += 1;
                        }
                        if !c.nakayama_relation_literal {
                            t.literal_fails += 1;
                        }
                        if !ok {
                            t.nakayama_bad.push(format!("{tag} {}: {c:?}", m.name));
                        }
                    }
                    Err(Error::Unsupported(_)) if pd.is_none() => {
                        // no iso M -> Ser(M); confirm independently
                        let ser = la.serre_module(m, &frob);
                        if modules_isomorphic(&la.alg, m, &ser).unwrap().is_some() {
                            t.nakayama_bad.push(format!("{tag} {}: iso exists but was not used", m.name));
                        }
                        t.no_iso += 1;
                    }
                    Err(e) => t.nakayama_bad.push(format!("{tag} {}: {e}", m.name)),
                }
            }
        }
    }
}

fn rand_cyclo<const N: usize>(rng: &mut ChaCha8Rng) -> Cyclo<N> {
    let deg = <Cyclo<N> as CyclotomicField>::degree();
    let c = (0..deg)
        .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
        .collect();
    Cyclo::<N>::from_coeffs(c)
}

fn field_axioms<const N: usize>(rng: &mut ChaCha8Rng, trials: usize) -> usize {
    let mut bad = 0;
    for _ in 0..trials {
        let (a, b, c) = (rand_cyclo::<N>(rng), rand_cyclo::<N>(rng), rand_cyclo::<N>(rng));
        let ok = (a.clone() * b.clone()) * c.clone() == a.clone() * (b.clone() * c.clone())
            && (a.clone() + b.clone()) + c.clone() == a.clone() + (b.clone() + c.clone())
            && a.clone() * (b.clone() + c.clone()) == a.clone() * b.clone() + a.clone() * c.clone()
            && a.clone() * b.clone() == b.clone() * a.clone()
            && (a.is_zero() || a.clone() * a.inv().unwrap() == Cyclo::<N>::one());
        if !ok {
            bad += 1;
        }
    }
    bad
}

fn q_binomial_zeros<const N: usize>() -> usize {
    let w = <Cyclo<N> as CyclotomicField>::zeta_pow(1);
    (1..N).filter(|&i| !q_binomial(N, i, &w).is_zero()).count()
}

/// (sound, complete) counts of failures over random spans of small size.
fn span_search(rng: &mut ChaCha8Rng, trials: usize) -> (usize, usize, usize) {
    let (mut unsound, mut incomplete, mut found) = (0, 0, 0);
    for _ in 0..trials {
        let n = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=4usize);
        let density = rng.gen_range(0.1..0.6);
        let gens: Vec<Matrix<Q3>> = (0..k)
            .map(|_| {
                Matrix::from_fn(n, n, |_, _| {
                    if rng.gen_bool(density) {
                        Q3::zeta_pow(rng.gen_range(0..3)) * Q3::from_int(rng.gen_range(-2..=2))
                    } else {
                        Q3::zero()
                    }
                })
            })
            .collect();
        let res = invertible_in_span(&gens).unwrap();
        // brute force over {-2..2}^k
        let mut brute = false;
        let mut idx = vec![0usize; k];
        'grid: loop {
            let c: Vec<Q3> = idx.iter().map(|&x| Q3::from_int(x as i64 - 2)).collect();
            if combine_matrices(&gens, &c).is_invertible() {
                brute = true;
                break 'grid;
            }
            for p in 0..k {
                idx[p] += 1;
                if idx[p] < 5 {
                    continue 'grid;
                }
                idx[p] = 0;
            }
            break;
        }
        match res {
            SpanSearch::Found(w) => {
                found += 1;
                if !w.matrix.is_invertible() || combine_matrices(&gens, &w.coeffs) != w.matrix {
                    unsound += 1;
                }
            }
            SpanSearch::Singular(_) => {
                if brute {
                    incomplete += 1;
                }
            }
        }
    }
    (unsound, incomplete, found)
}

fn main() {
    let mut all = true;

    // tables, shared by 1, 2, 6 and 9
    let (t3, d3) = table::<Q3>(Ambient::Taft, 3);
    let (t4, d4) = table::<Q4>(Ambient::Taft, 4);
    let (b3, db) = table::<Q3>(Ambient::Book, 3);

    let mut rows = mismatch_rows(&t3);
    rows.extend(mismatch_rows(&t4));
    let fast = d3 < Duration::from_secs(120) && d4 < Duration::from_secs(120);
    all &= verdict(
        1,
        "Taft table, N = 3 and 4",
        Outcome {
            ok: t3.all_match() && t4.all_match() && fast,
            detail: format!(
                "{} + {} cells, {} + {} mismatches, {:.1?} / {:.1?}{}{}",
                t3.cells.len(),
                t4.cells.len(),
                t3.mismatches,
                t4.mismatches,
                d3,
                d4,
                if rows.is_empty() { "" } else { "; " },
                rows.join("; ")
            ),
        },
    );

    let rows = mismatch_rows(&b3);
    all &= verdict(
        2,
        "book table, N = 3",
        Outcome {
            ok: b3.all_match() && db < Duration::from_secs(600),
            detail: format!("{} cells, {} mismatches, {:.1?}{}", b3.cells.len(), b3.mismatches, db, rows.join("; ")),
        },
    );

    let mut bad = Vec::new();
    bad.extend(taft_invariants::<Cyclo<2>>(2));
    bad.extend(taft_invariants::<Q3>(3));
    bad.extend(taft_invariants::<Q4>(4));
    bad.extend(taft_invariants::<Cyclo<5>>(5));
    bad.extend(book_invariants::<Cyclo<2>>(2));
    bad.extend(book_invariants::<Q3>(3));
    all &= verdict(
        3,
        "Hopf invariants, T(omega) N = 2..5, H(1, omega) N = 2, 3",
        Outcome {
            ok: bad.is_empty(),
            detail: if bad.is_empty() {
                "integrals, normalization, both identities, alpha, g_H, pivotal sets".into()
            } else {
                bad.join("; ")
            },
        },
    );

    let mut ex = ExplicitTally::default();
    explicit_tally::<Q3>(Ambient::Taft, 3, &mut ex);
    explicit_tally::<Q4>(Ambient::Taft, 4, &mut ex);
    explicit_tally::<Q3>(Ambient::Book, 3, &mut ex);
    all &= verdict(
        4,
        "grouplike-cointegral closed forms",
        Outcome {
            ok: ex.forms_bad.is_empty(),
            detail: format!(
                "{} families; {} with a quoted grouplike exponent that differs from the coaction ({}){}{}",
                ex.families,
                ex.quoted_off.len(),
                ex.quoted_off.join(", "),
                if ex.forms_bad.is_empty() { "" } else { "; " },
                ex.forms_bad.join("; ")
            ),
        },
    );
    all &= verdict(
        5,
        "Nakayama closed forms nu and nu'",
        Outcome {
            ok: ex.nakayama_bad.is_empty(),
            detail: format!("{} families{}", ex.families, ex.nakayama_bad.join("; ")),
        },
    );

    let cells: Vec<_> = t3.cells.iter().chain(&t4.cells).chain(&b3.cells).collect();
    let frob_cells: Vec<_> = cells.iter().filter(|c| c.frobenius).collect();
    let validated: Vec<_> = frob_cells.iter().filter_map(|c| c.serre_validation.as_ref().map(|v| (c, v))).collect();
    let failing: Vec<String> = validated.iter().filter(|(_, v)| !v.all()).map(|(c, v)| format!("{} {v:?}", c.family)).collect();
    let pairs: usize = validated.iter().map(|(_, v)| v.pairs).sum();
    let triples: usize = validated.iter().map(|(_, v)| v.coherence_triples).sum();
    all &= verdict(
        6,
        "twisted module structure, general = simple, isomorphism, coherence",
        Outcome {
            ok: failing.is_empty() && validated.len() == frob_cells.len() && frob_cells.len() == cells.len(),
            detail: format!(
                "{} cells, {} (X, M) pairs, {} coherence triples{}",
                validated.len(),
                pairs,
                triples,
                failing.join("; ")
            ),
        },
    );

    let mut it = IhomTally::default();
    ihom_tally::<Q3>(Ambient::Taft, 3, &mut it);
    ihom_tally::<Q3>(Ambient::Book, 3, &mut it);
    all &= verdict(
        7,
        "Serre pairing over probe modules, N = 3",
        Outcome {
            ok: it.pairing_bad.is_empty() && it.pairs > 0,
            detail: format!(
                "{} cells, {} (M, N) pairs, {} cells without probes of dim <= 3{}",
                it.cells,
                it.pairs,
                it.skipped_cells,
                it.pairing_bad.join("; ")
            ),
        },
    );
    all &= verdict(
        8,
        "internal End Nakayama",
        Outcome {
            ok: it.nakayama_bad.is_empty() && it.pivotal_runs > 0,
            detail: format!(
                "{} pivotal runs with nu_A = id, {} further runs through an iso M = Ser(M), {} probes with no iso; \
                 relation holds with the g_piv twist everywhere, literal form fails in {} runs{}",
                it.pivotal_runs,
                it.iso_runs,
                it.no_iso,
                it.literal_fails,
                it.nakayama_bad.join("; ")
            ),
        },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let field_bad = field_axioms::<3>(&mut rng, 400) + field_axioms::<5>(&mut rng, 300) + field_axioms::<12>(&mut rng, 300);
    let qb_bad = q_binomial_zeros::<2>()
        + q_binomial_zeros::<3>()
        + q_binomial_zeros::<4>()
        + q_binomial_zeros::<5>()
        + q_binomial_zeros::<6>()
        + q_binomial_zeros::<7>();
    let (unsound, incomplete, found) = span_search(&mut rng, 400);
    let small: Vec<_> = cells.iter().filter(|c| c.dim <= 27).collect();
    let cross_bad = small.iter().filter(|c| c.bimodule_cross_check != Some(true)).count();
    all &= verdict(
        9,
        "property suites",
        Outcome {
            ok: field_bad == 0 && qb_bad == 0 && unsound == 0 && incomplete == 0 && cross_bad == 0,
            detail: format!(
                "1000 field triples ({field_bad} bad), q-binomials N <= 7 ({qb_bad} nonzero), \
                 400 spans ({found} found, {unsound} unsound, {incomplete} missed), \
                 is_inner vs module iso on {} cells ({cross_bad} disagree)",
                small.len()
            ),
        },
    );

    let mut lines = Vec::new();
    let mut ok = true;
    for (l, good) in [
        probe_line::<Q3>(Ambient::Taft, 3),
        probe_line::<Q4>(Ambient::Taft, 4),
        probe_line::<Cyclo<5>>(Ambient::Taft, 5),
        probe_line::<Q3>(Ambient::Book, 3),
    ] {
        lines.push(l);
        ok &= good;
    }
    all &= verdict(10, "cointegral convention probe", Outcome { ok, detail: lines.join("; ") });
    std::process::exit(if all { 0 } else { 1 });
}

/// The explicit cointegral solves the convention A system, and `g_H` under
/// both conventions next to the quoted value.
fn probe_line<F: CyclotomicField>(which: Ambient, n: usize) -> (String, bool) {
    let h = build_ambient::<F>(which, n, 1).unwrap();
    let (top, quoted) = match which {
        Ambient::Taft => (monomial(&[("x", n - 1)]), 1),
        Ambient::Book => (monomial(&[("x", n - 1), ("y", n - 1)]), 2),
    };
    let mut lam = vec![F::zero(); h.dim()];
    lam[label_index(&h, &top)] = F::one();
    let in_a = h.right_cointegral_space(Convention::A).contains(&lam);
    let in_b = h.right_cointegral_space(Convention::B).contains(&lam);
    let p = convention_probe(&h, quoted).unwrap();
    let line = format!(
        "{}: delta at {top} is a cointegral under A {in_a}, under B {in_b}; quoted g_H {}, A gives {} ({}), B gives {} ({})",
        h.name(),
        p.quoted,
        p.convention_a,
        agree(p.agrees_a),
        p.convention_b,
        agree(p.agrees_b)
    );
    (line, in_a)
}

fn agree(b: bool) -> &'static str {
    if b {
        "agrees"
    } else {
        "disagrees"
    }
}
