//! Classification cells: for a catalog comodule algebra and one of its
//! grouplike-cointegrals, whether the Nakayama and twisted Nakayama
//! automorphisms are inner and whether a pivotal element exists.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    book_grid, build_ambient, build_comodule_algebra_over, probe_modules, taft_grid, weight_modules, Ambient,
    CatalogObject, CatalogParams, Family,
};
use crate::comodule::{apply_element, ComoduleAlgebra, FrobeniusData};
use crate::field::{CyclotomicField, Field};
use crate::hopf::{render_element, Convention, HopfAlgebra, IntegralData};
use crate::linalg::Matrix;
use crate::module::{tensor_h, trivial_module, Module};
use crate::Result;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Expected {
    pub nakayama_inner: Option<bool>,
    pub serre_trivial: bool,
    pub pivotal: bool,
    /// The table row this cell falls under.
    pub row: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub ambient: String,
    pub family: String,
    pub n: usize,
    pub dim: usize,
    /// Exponent `k` of the grouplike `g^k` of the cointegral.
    pub grouplike: usize,
    pub form: String,
    pub frobenius: bool,
    pub nakayama_inner: bool,
    pub serre_trivial: bool,
    pub pivotal: bool,
    pub nakayama_witness: Option<String>,
    pub serre_witness: Option<String>,
    pub pivotal_witness: Option<String>,
    pub pivotal_coaction: String,
    /// Innerness re-decided through bimodule isomorphisms, when run.
    pub bimodule_cross_check: Option<bool>,
    pub serre_validation: Option<SerreValidation>,
    pub expected: Option<Expected>,
    pub matches: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CellOptions {
    pub convention: Convention,
    /// Run the bimodule cross-check when `dim L` is at most this.
    pub cross_check_max_dim: usize,
    /// Compare both twisted module structures on probe modules up to this
    /// dimension; 0 skips the comparison.
    pub serre_probe_dim: usize,
}

/// Both constructions of the twisted module structure
/// `Ser(X (x) M) -> X** (x) Ser(M)`, for `X` one-dimensional weight modules
/// of the ambient Hopf algebra and `M` probe modules of `L`.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SerreValidation {
    pub pairs: usize,
    pub general_equals_simple: bool,
    pub isomorphisms: bool,
    /// `s_{X (x) Y, M} = (id (x) s_{Y, M}) s_{X, Y (x) M}`
    pub coherence: bool,
    pub coherence_triples: usize,
    pub trivial_is_identity: bool,
}

impl SerreValidation {
    pub fn all(&self) -> bool {
        self.general_equals_simple && self.isomorphisms && self.coherence && self.trivial_is_identity
    }
}

pub fn validate_serre<F: Field>(
    la: &ComoduleAlgebra<F>,
    frob: &FrobeniusData<F>,
    integrals: &IntegralData<F>,
    g_l: &[F],
    weights: &[Module<F>],
    modules: &[Module<F>],
) -> Result<SerreValidation> {
    let h: &HopfAlgebra<F> = &la.hopf;
    let omega = la.serre_element(frob, integrals)?;
    let general = |x: &Module<F>, m: &Module<F>| apply_element(&omega, x, m);
    let mut v = SerreValidation {
        general_equals_simple: true,
        isomorphisms: true,
        coherence: true,
        trivial_is_identity: true,
        ..Default::default()
    };
    let triv = trivial_module(h);
    for m in modules {
        for x in weights {
            let s = la.serre_structure_simple(g_l, integrals, x, m)?;
            let gen = general(x, m);
            v.pairs += 1;
            v.general_equals_simple &= s == gen;
            v.isomorphisms &= la.is_serre_isomorphism(frob, &s, x, m) && la.is_serre_isomorphism(frob, &gen, x, m);
        }
        let d = m.dim();
        v.trivial_is_identity &= general(&triv, m).is_identity()
            && la.serre_structure_simple(g_l, integrals, &triv, m)?.is_identity();
        for x in weights {
            for y in weights {
                let xy = tensor_h(h, x, y);
                let ym = la.action_tensor_module(y, m);
                let lhs = general(&xy, m);
                let rhs = Matrix::identity(x.dim()).kron(&general(y, m)).mul(&general(x, &ym));
                v.coherence_triples += 1;
                v.coherence &= lhs == rhs;
                debug_assert_eq!(lhs.nrows(), x.dim() * y.dim() * d);
            }
        }
    }
    Ok(v)
}

/// One cell per grouplike-cointegral of `obj`.
pub fn evaluate_cells<F: CyclotomicField>(obj: &CatalogObject<F>, opts: &CellOptions) -> Result<Vec<CellReport>> {
    let h = obj.hopf();
    let la = &obj.la;
    let integrals = h.integral_data(opts.convention)?;
    let pivots = h.pivotal_elements();
    let mut out = Vec::new();
    for (k, space) in la.grouplike_cointegrals() {
        let lambda = space.basis()[0].clone();
        let g_l = h.grouplikes()[k].clone();
        let frob = la.frobenius_data(&lambda, &integrals.modular_function)?;
        let form = render_element(&la.alg.labels, &lambda);
        let ambient = match obj.params.family.ambient() {
            Some(a) => a.to_string(),
            None => h.name().to_string(),
        };
        let mut cell = CellReport {
            ambient,
            family: obj.label(),
            n: obj.params.n,
            dim: la.dim(),
            grouplike: k,
            form,
            frobenius: frob.is_some(),
            nakayama_inner: false,
            serre_trivial: false,
            pivotal: false,
            nakayama_witness: None,
            serre_witness: None,
            pivotal_witness: None,
            pivotal_coaction: String::new(),
            bimodule_cross_check: None,
            serre_validation: None,
            expected: expected_row(&obj.params.family, obj.params.n),
            matches: None,
        };
        if let Some(frob) = frob {
            fill_cell(obj, &frob, &integrals, &g_l, &pivots, opts, &mut cell)?;
        }
        cell.matches = cell.expected.as_ref().map(|e| {
            e.serre_trivial == cell.serre_trivial
                && e.pivotal == cell.pivotal
                && e.nakayama_inner.map_or(true, |v| v == cell.nakayama_inner)
        });
        out.push(cell);
    }
    Ok(out)
}

fn fill_cell<F: CyclotomicField>(
    obj: &CatalogObject<F>,
    frob: &FrobeniusData<F>,
    integrals: &IntegralData<F>,
    g_l: &[F],
    pivots: &[Vec<F>],
    opts: &CellOptions,
    cell: &mut CellReport,
) -> Result<()> {
    let la = &obj.la;
    let labels = &la.alg.labels;
    let nak = la.is_inner(&frob.nakayama)?;
    let ser = la.is_inner(&frob.twisted_nakayama)?;
    cell.nakayama_inner = nak.is_some();
    cell.serre_trivial = ser.is_some();
    cell.nakayama_witness = nak.map(|a| render_element(labels, &a));
    cell.serre_witness = ser.map(|a| render_element(labels, &a));
    if la.dim() <= opts.cross_check_max_dim {
        let a = la.is_inner_via_bimodule(&frob.nakayama)?;
        let b = la.is_inner_via_bimodule(&frob.twisted_nakayama)?;
        cell.bimodule_cross_check = Some(a == cell.nakayama_inner && b == cell.serre_trivial);
    }
    if opts.serre_probe_dim > 0 {
        let weights = weight_modules(obj.hopf());
        let mut modules = probe_modules(obj, opts.serre_probe_dim);
        if modules.is_empty() {
            // no small modules at all, e.g. L4(N; xi, mu, eta) with every parameter nonzero
            modules.push(Module::regular(&la.alg));
        }
        cell.serre_validation = Some(validate_serre(la, frob, integrals, g_l, &weights, &modules)?);
    }
    for g_piv in pivots {
        let set = la.pivotal_elements(frob, g_l, integrals, g_piv)?;
        cell.pivotal_coaction = obj.hopf().render(&set.coaction_grouplike);
        if let Some(w) = set.witness {
            cell.pivotal = true;
            cell.pivotal_witness = Some(render_element(labels, &w));
            break;
        }
    }
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

/// The row of the published classification tables a family falls under.
///
/// These are the tables as printed; cells where the printed row is wrong
/// show up as mismatches.
pub fn expected_row<F: Field>(fam: &Family<F>, n: usize) -> Option<Expected> {
    let taft = |nak: bool, ser: bool, piv: bool, row: &str| Expected {
        nakayama_inner: Some(nak),
        serre_trivial: ser,
        pivotal: piv,
        row: row.to_string(),
    };
    let book = |ser: bool, piv: bool, row: &str| Expected {
        nakayama_inner: Some(ser),
        serre_trivial: ser,
        pivotal: piv,
        row: row.to_string(),
    };
    Some(match fam {
        Family::TaftL0 { .. } => taft(true, false, false, "L0(d)"),
        Family::TaftL1 { d, xi } => {
            let d = *d;
            match (xi.is_zero(), d) {
                (true, 1) => taft(true, false, false, "L1(d; xi): xi = 0, d = 1"),
                (true, d) if d == n => taft(false, true, true, "L1(d; xi): xi = 0, d = N"),
                (true, _) => taft(false, false, false, "L1(d; xi): xi = 0, 1 < d < N"),
                (false, d) if d == n => taft(true, true, true, "L1(d; xi): xi != 0, d = N"),
                (false, _) => taft(true, false, false, "L1(d; xi): xi != 0, d < N"),
            }
        }
        Family::BookL0 { d } => {
            if *d == n {
                book(true, true, "L0(d): d = N")
            } else {
                book(true, false, "L0(d): d < N")
            }
        }
        Family::BookL1 { d, xi } | Family::BookL2 { d, xi } => {
            let name = if matches!(fam, Family::BookL1 { .. }) { "L1" } else { "L2" };
            if *d == 1 {
                book(true, true, &format!("{name}(d; xi): d = 1"))
            } else if !xi.is_zero() {
                book(true, false, &format!("{name}(d; xi): d > 1, xi != 0"))
            } else {
                book(false, false, &format!("{name}(d; xi): d > 1, xi = 0"))
            }
        }
        Family::BookL3 { .. } => book(true, true, "L3(a, b; xi)"),
        Family::BookL4 { d, xi, mu } => {
            if *d == n {
                book(true, true, "L4(d; xi, mu): d = N")
            } else if !xi.is_zero() && !mu.is_zero() {
                book(true, false, "L4(d; xi, mu): d < N, xi mu != 0")
            } else {
                book(false, false, "L4(d; xi, mu): d < N, xi mu = 0")
            }
        }
        Family::BookL4Eta { .. } => book(true, true, "L4(N; xi, mu, eta)"),
        Family::GroupAlgebra { .. } => taft(true, true, true, "kC_n over itself"),
        // the base field is L0(1)
        Family::TrivialL { over: Ambient::Taft } => return expected_row(&Family::<F>::TaftL0 { d: 1 }, n),
        Family::TrivialL { over: Ambient::Book } => return expected_row(&Family::<F>::BookL0 { d: 1 }, n),
    })
}

/// Markdown rendering of a list of cells.
pub fn cells_markdown(cells: &[CellReport], with_nakayama: bool) -> String {
    let mut s = String::new();
    if with_nakayama {
        s.push_str("| L | dim | g | Nak = id? | Ser = id? | Pivotal? | expected | row | match |\n");
        s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    } else {
        s.push_str("| L | dim | g | Ser = id? | Pivotal? | expected | row | match |\n");
        s.push_str("|---|---|---|---|---|---|---|---|\n");
    }
    for c in cells {
        let (exp, row) = match &c.expected {
            Some(e) if with_nakayama => (
                format!("{} {} {}", yes(e.nakayama_inner.unwrap_or(false)), yes(e.serre_trivial), yes(e.pivotal)),
                e.row.clone(),
            ),
            Some(e) => (format!("{} {}", yes(e.serre_trivial), yes(e.pivotal)), e.row.clone()),
            None => ("-".into(), "-".into()),
        };
        let m = match c.matches {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "-",
        };
        let g = format!("g^{}", c.grouplike);
        if with_nakayama {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
                c.family,
                c.dim,
                g,
                yes(c.nakayama_inner),
                yes(c.serre_trivial),
                yes(c.pivotal),
                exp,
                row,
                m
            ));
        } else {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                c.family,
                c.dim,
                g,
                yes(c.serre_trivial),
                yes(c.pivotal),
                exp,
                row,
                m
            ));
        }
    }
    s
}

/// The distinguished grouplike under both conventions, next to the value
/// usually quoted for the ambient algebra.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConventionProbe {
    pub quoted: String,
    pub convention_a: String,
    pub convention_b: String,
    pub agrees_a: bool,
    pub agrees_b: bool,
}

pub fn convention_probe<F: Field>(h: &HopfAlgebra<F>, quoted_exponent: i64) -> Result<ConventionProbe> {
    let g = h.grouplikes().get(1).cloned().unwrap_or_else(|| h.alg.unit().to_vec());
    let quoted = h.power(&g, quoted_exponent);
    let a = h.integral_data(Convention::A)?.distinguished_grouplike;
    let b = h.integral_data(Convention::B)?.distinguished_grouplike;
    Ok(ConventionProbe {
        quoted: h.render(&quoted),
        convention_a: h.render(&a),
        convention_b: h.render(&b),
        agrees_a: a == quoted,
        agrees_b: b == quoted,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub ambient: String,
    pub n: usize,
    pub omega_exponent: i64,
    pub convention: Convention,
    pub distinguished_grouplike: String,
    pub probe: ConventionProbe,
    pub cells: Vec<CellReport>,
    pub mismatches: usize,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.mismatches == 0
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "# {} N = {}, omega = z^{}, convention {:?}\n\ng_H = {}; quoted {}, convention A gives {}, convention B gives {}\n\n",
            self.ambient,
            self.n,
            self.omega_exponent,
            self.convention,
            self.distinguished_grouplike,
            self.probe.quoted,
            self.probe.convention_a,
            self.probe.convention_b,
        );
        s.push_str(&cells_markdown(&self.cells, true));
        s.push_str(&format!("\n{} cells, {} mismatches\n", self.cells.len(), self.mismatches));
        s
    }
}

/// The grid of `which` at `N`, evaluated cell by cell. With `parallel` the
/// families run on the rayon pool; cells keep grid order either way.
pub fn build_table<F: CyclotomicField>(
    which: Ambient,
    n: usize,
    omega_exponent: i64,
    families: Option<Vec<Family<F>>>,
    opts: &CellOptions,
    parallel: bool,
) -> Result<TableReport> {
    let h = Arc::new(build_ambient::<F>(which, n, omega_exponent)?);
    let families = families.unwrap_or_else(|| match which {
        Ambient::Taft => taft_grid(n),
        Ambient::Book => book_grid(n),
    });
    let run = |fam: &Family<F>| -> Result<Vec<CellReport>> {
        let obj = build_comodule_algebra_over(h.clone(), &CatalogParams::new(n, omega_exponent, fam.clone()))?;
        evaluate_cells(&obj, opts)
    };
    let per: Vec<Result<Vec<CellReport>>> =
        if parallel { families.par_iter().map(run).collect() } else { families.iter().map(run).collect() };
    let mut cells = Vec::new();
    for c in per {
        cells.extend(c?);
    }
    let mismatches = cells.iter().filter(|c| c.matches == Some(false)).count();
    let ints = h.integral_data(opts.convention)?;
    let quoted = match which {
        Ambient::Taft => 1,
        Ambient::Book => 2,
    };
    Ok(TableReport {
        ambient: h.name().to_string(),
        n,
        omega_exponent,
        convention: opts.convention,
        distinguished_grouplike: h.render(&ints.distinguished_grouplike),
        probe: convention_probe(&h, quoted)?,
        cells,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q3;
    use num_traits::{One, Zero};

    #[test]
    fn rows_of_the_taft_table() {
        let r = expected_row::<Q3>(&Family::TaftL1 { d: 3, xi: Q3::zero() }, 3).unwrap();
        assert_eq!((r.nakayama_inner, r.serre_trivial, r.pivotal), (Some(false), true, true));
        let r = expected_row::<Q3>(&Family::TaftL1 { d: 2, xi: Q3::one() }, 3).unwrap();
        assert_eq!((r.nakayama_inner, r.serre_trivial, r.pivotal), (Some(true), false, false));
        let r = expected_row::<Q3>(&Family::TaftL0 { d: 3 }, 3).unwrap();
        assert_eq!(r.row, "L0(d)");
    }

    #[test]
    fn convention_probe_on_taft() {
        let h = build_ambient::<Q3>(Ambient::Taft, 3, 1).unwrap();
        let p = convention_probe(&h, 1).unwrap();
        assert_eq!((p.convention_a.as_str(), p.convention_b.as_str()), ("g^2", "g"));
        assert!(!p.agrees_a && p.agrees_b);
    }

    #[test]
    fn small_table() {
        let opts = CellOptions { convention: Convention::A, cross_check_max_dim: 27, serre_probe_dim: 2 };
        let fams = vec![Family::TaftL1 { d: 3, xi: Q3::one() }, Family::TaftL0 { d: 1 }];
        let a = build_table::<Q3>(Ambient::Taft, 3, 1, Some(fams.clone()), &opts, false).unwrap();
        let b = build_table::<Q3>(Ambient::Taft, 3, 1, Some(fams), &opts, true).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        // L1(3; 1) has a cointegral at every grouplike, L0(1) only at 1
        assert_eq!(a.cells.len(), 4);
        assert_eq!(a.mismatches, 1);
        let bad: Vec<_> = a.cells.iter().filter(|c| c.matches == Some(false)).collect();
        assert_eq!(bad[0].family, "L0(1)");
        assert!(bad[0].serre_trivial && bad[0].pivotal);
        assert!(a.cells.iter().all(|c| c.bimodule_cross_check != Some(false)));
        assert!(a.to_markdown().contains("4 cells, 1 mismatches"));
    }
}
