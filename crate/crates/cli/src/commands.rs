use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use hopf_serre::catalog::{build_ambient, build_comodule_algebra_over, book_grid, taft_grid, Ambient, CatalogParams};
use hopf_serre::comodule::ComoduleAlgebra;
use hopf_serre::hopf::Convention;
use hopf_serre::module::{trivial_module, Module};
use hopf_serre::report::{build_table, CellOptions};
use hopf_serre::scf::{serialize_catalog, serialize_hopf, Loaded, ScfDocument};
use hopf_serre::{Cyclo, CyclotomicField, Matrix};
use serde_json::json;

use crate::catalog_args::{ambient, family, grid_filter};
use crate::{Cmd, Conv, Format, EXIT_AXIOM, EXIT_MISMATCH};

/// Runs `$body` with `$F` bound to the cyclotomic field of conductor `$n`.
macro_rules! with_field {
    ($n:expr, $F:ident => $body:expr) => {
        match $n {
            1 => { type $F = Cyclo<1>; $body }
            2 => { type $F = Cyclo<2>; $body }
            3 => { type $F = Cyclo<3>; $body }
            4 => { type $F = Cyclo<4>; $body }
            5 => { type $F = Cyclo<5>; $body }
            6 => { type $F = Cyclo<6>; $body }
            7 => { type $F = Cyclo<7>; $body }
            8 => { type $F = Cyclo<8>; $body }
            9 => { type $F = Cyclo<9>; $body }
            10 => { type $F = Cyclo<10>; $body }
            12 => { type $F = Cyclo<12>; $body }
            other => Err(anyhow!(hopf_serre::Error::Unsupported(format!(
                "conductor {other} is not compiled in (supported: 1-10, 12)"
            )))),
        }
    };
}

fn convention(c: Conv) -> Convention {
    match c {
        Conv::A => Convention::A,
        Conv::B => Convention::B,
    }
}

pub fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Verify { path, format, json } => {
            let fmt = if json { Format::Json } else { format };
            verify(&path, fmt)
        }
        Cmd::Table {
            which,
            n,
            omega_exp,
            format,
            family: fam,
            params,
            convention: conv,
            parallel,
            serre_probe_dim,
            cross_check_max_dim,
        } => {
            let opts = CellOptions { convention: convention(conv), cross_check_max_dim, serre_probe_dim };
            with_field!(n, F => table::<F>(ambient(which), n, omega_exp, fam.as_deref(), params.as_deref(), &opts, parallel, format))
        }
        Cmd::Serre { path, ambient: amb, n, omega_exp, family: fam, params, x, m, general, simple, grouplike, convention: conv, format } => {
            let req = SerreRequest { x, m, general, simple, grouplike, convention: convention(conv), format };
            match path {
                Some(p) => {
                    let doc = read_doc(&p)?;
                    with_field!(doc.conductor, F => serre_from_doc::<F>(&doc, &p, &req))
                }
                None => {
                    let amb = amb.ok_or_else(|| anyhow!("serre: give a file or --ambient with --family"))?;
                    let fam = fam.ok_or_else(|| anyhow!("serre: --family is required without a file"))?;
                    with_field!(n, F => {
                        let obj = catalog_object::<F>(ambient(amb), n, omega_exp, &fam, params.as_deref())?;
                        serre(&obj.la, &req)
                    })
                }
            }
        }
        Cmd::Build { ambient: amb, n, omega_exp, family: fam, params, out } => {
            let text = with_field!(n, F => build::<F>(ambient(amb), n, omega_exp, fam.as_deref(), params.as_deref()))?;
            match out {
                Some(p) => std::fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            Ok(0)
        }
    }
}

fn read_doc(path: &Path) -> Result<ScfDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| hopf_serre::Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    Ok(ScfDocument::from_json(&text).map_err(|e| match e {
        hopf_serre::Error::Parse(s) => hopf_serre::Error::Parse(format!("{}: {s}", path.display())),
        other => other,
    })?)
}

fn verify(path: &Path, format: Format) -> Result<u8> {
    let doc = read_doc(path)?;
    with_field!(doc.conductor, F => {
        let loaded: Loaded<F> = doc.load(path.parent())?;
        let rep = loaded.check_axioms();
        let ok = rep.all_passed();
        match format {
            Format::Json => {
                let v = json!({
                    "file": path.display().to_string(),
                    "kind": loaded.kind(),
                    "name": loaded.name(),
                    "passed": ok,
                    "checks": rep.checks,
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            }
            Format::Md => {
                println!("# {} ({})\n", loaded.name(), loaded.kind());
                for c in &rep.checks {
                    let mark = if c.passed { "ok" } else { "FAIL" };
                    if c.detail.is_empty() {
                        println!("- {mark} {}", c.name);
                    } else {
                        println!("- {mark} {}: {}", c.name, c.detail);
                    }
                }
                println!("\n{}", if ok { "all axioms hold" } else { "axiom failure" });
            }
        }
        Ok(if ok { 0 } else { EXIT_AXIOM })
    })
}

#[allow(clippy::too_many_arguments)]
fn table<F: CyclotomicField>(
    which: Ambient,
    n: usize,
    e: i64,
    fam: Option<&str>,
    params: Option<&str>,
    opts: &CellOptions,
    parallel: bool,
    format: Format,
) -> Result<u8> {
    let families = match (fam, params) {
        (Some(f), Some(p)) => vec![family::<F>(which, f, Some(p), n)?],
        (f, None) => {
            let grid = match which {
                Ambient::Taft => taft_grid::<F>(n),
                Ambient::Book => book_grid::<F>(n),
            };
            let g = grid_filter(grid, f);
            if g.is_empty() {
                bail!(hopf_serre::Error::Parse(format!("--family {}: no such family in the grid", f.unwrap_or(""))));
            }
            g
        }
        (None, Some(_)) => bail!(hopf_serre::Error::Parse("--params needs --family".into())),
    };
    let rep = build_table::<F>(which, n, e, Some(families), opts, parallel)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep)?),
        Format::Md => print!("{}", rep.to_markdown()),
    }
    Ok(if rep.all_match() { 0 } else { EXIT_MISMATCH })
}

fn catalog_object<F: CyclotomicField>(
    which: Ambient,
    n: usize,
    e: i64,
    fam: &str,
    params: Option<&str>,
) -> Result<hopf_serre::catalog::CatalogObject<F>> {
    let h = Arc::new(build_ambient::<F>(which, n, e)?);
    let fam = family::<F>(which, fam, params, n)?;
    let obj = match fam {
        hopf_serre::catalog::Family::GroupAlgebra { .. } => hopf_serre::catalog::build_comodule_algebra(&CatalogParams::new(n, e, fam))?,
        _ => build_comodule_algebra_over(h, &CatalogParams::new(n, e, fam))?,
    };
    Ok(obj)
}

fn build<F: CyclotomicField>(which: Ambient, n: usize, e: i64, fam: Option<&str>, params: Option<&str>) -> Result<String> {
    let doc = match fam {
        None => serialize_hopf(&build_ambient::<F>(which, n, e)?),
        Some(f) => serialize_catalog(&catalog_object::<F>(which, n, e, f, params)?),
    };
    Ok(doc.to_json())
}

pub struct SerreRequest {
    x: String,
    m: String,
    general: bool,
    simple: bool,
    grouplike: Option<usize>,
    convention: Convention,
    format: Format,
}

fn serre_from_doc<F: CyclotomicField>(doc: &ScfDocument, path: &Path, req: &SerreRequest) -> Result<u8> {
    let loaded: Loaded<F> = doc.load(path.parent())?;
    let rep = loaded.check_axioms();
    if let Some(f) = rep.failures().next() {
        bail!(hopf_serre::Error::Axiom(format!("{}: {}", f.name, f.detail)));
    }
    match loaded {
        Loaded::Comodule(la) => serre(&la, req),
        other => bail!(hopf_serre::Error::Parse(format!("serre needs a comodule algebra, the file holds a {}", other.kind()))),
    }
}

fn render_matrix<F: CyclotomicField>(t: &Matrix<F>) -> Vec<Vec<String>> {
    t.to_dense().into_iter().map(|r| r.into_iter().map(|c| c.to_string()).collect()).collect()
}

/// Nonzero entries of `T rho_src(a) - rho_tgt(a) T` over the generators.
fn residual<F: CyclotomicField>(la: &ComoduleAlgebra<F>, t: &Matrix<F>, src: &Module<F>, tgt: &Module<F>) -> usize {
    la.alg.generators().iter().map(|&a| t.mul(src.action(a)).sub(&tgt.action(a).mul(t)).nnz()).sum()
}

fn serre<F: CyclotomicField>(la: &ComoduleAlgebra<F>, req: &SerreRequest) -> Result<u8> {
    let h = &la.hopf;
    let ints = h.integral_data(req.convention)?;
    let x = if req.x == "trivial" {
        trivial_module(h)
    } else {
        let (name, chi) = h
            .characters
            .iter()
            .find(|(n, _)| *n == req.x)
            .ok_or_else(|| hopf_serre::Error::Parse(format!("--x: no character `{}` of {}", req.x, h.name())))?;
        Module::character(name.clone(), chi)
    };
    let m = if req.m == "regular" {
        Module::regular(&la.alg)
    } else {
        let (name, chi) = la
            .characters
            .iter()
            .find(|(n, _)| *n == req.m)
            .ok_or_else(|| hopf_serre::Error::Parse(format!("--m: no character `{}` of {}", req.m, la.name())))?;
        Module::character(name.clone(), chi)
    };
    let mut chosen = None;
    for (k, space) in la.grouplike_cointegrals() {
        if req.grouplike.is_some_and(|g| g != k) {
            continue;
        }
        if let Some(frob) = la.frobenius_data(&space.basis()[0], &ints.modular_function)? {
            chosen = Some((k, frob));
            break;
        }
    }
    let Some((k, frob)) = chosen else {
        bail!(hopf_serre::Error::Unsupported("no nondegenerate grouplike-cointegral found".into()));
    };
    let g_l = h.grouplikes()[k].clone();
    let (src, tgt) = la.serre_endpoints(&frob, &x, &m);
    let simple = la.serre_structure_simple(&g_l, &ints, &x, &m)?;
    let general = la.serre_structure_general(&frob, &ints, &x, &m)?;
    let both = !req.general && !req.simple;
    let shown = if req.general { &general } else { &simple };
    let res = residual(la, shown, &src, &tgt);
    let diff = if both { Some(simple.sub(&general).nnz()) } else { None };
    let invertible = shown.is_invertible();
    match req.format {
        Format::Json => {
            let v = json!({
                "algebra": la.name(),
                "grouplike": k,
                "x": x.name,
                "m": m.name,
                "path": if req.general { "general" } else { "simple" },
                "matrix": render_matrix(shown),
                "invertible": invertible,
                "residual_nonzero": res,
                "general_minus_simple_nonzero": diff,
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        Format::Md => {
            println!("# Ser({} (x) {}) -> {}** (x) Ser({}) over {}, form at g^{k}\n", x.name, m.name, x.name, m.name, la.name());
            println!("```");
            for row in render_matrix(shown) {
                println!("[{}]", row.join(", "));
            }
            println!("```\n");
            println!("- invertible: {invertible}");
            println!("- L-linearity residual: {res} nonzero entries");
            if let Some(d) = diff {
                println!("- general - simple: {d} nonzero entries");
            }
        }
    }
    Ok(if res == 0 && invertible && diff.unwrap_or(0) == 0 { 0 } else { EXIT_AXIOM })
}
