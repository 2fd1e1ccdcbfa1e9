//! `--family` / `--params` parsing.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use hopf_serre::catalog::{Ambient, Family};
use hopf_serre::CyclotomicField;

use crate::Which;

pub fn ambient(w: Which) -> Ambient {
    match w {
        Which::Taft => Ambient::Taft,
        Which::Book => Ambient::Book,
    }
}

/// `d=3,xi=1/2*z` into a map. Scalars use the same syntax as the output.
fn split_params(params: Option<&str>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let Some(p) = params else { return Ok(out) };
    for piece in p.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = piece.split_once('=').ok_or_else(|| anyhow!("params: `{piece}` is not key=value"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn family<F: CyclotomicField>(which: Ambient, name: &str, params: Option<&str>, n: usize) -> Result<Family<F>> {
    let mut p = split_params(params)?;
    let mut take_int = |k: &str, default: Option<usize>| -> Result<usize> {
        match p.remove(k) {
            Some(v) => v.parse().map_err(|_| anyhow!("params: {k} = `{v}` is not an integer")),
            None => default.ok_or_else(|| anyhow!("params: missing {k}")),
        }
    };
    let d = take_int("d", Some(n))?;
    let k = take_int("n", None).ok();
    let mut take = |key: &str| -> Result<F> {
        match p.remove(key) {
            Some(v) => Ok(v.parse::<F>().map_err(|e| anyhow!("params: {key}: {e}"))?),
            None => Ok(F::zero()),
        }
    };
    let lower = name.to_ascii_lowercase();
    let fam = match (which, lower.as_str()) {
        (Ambient::Taft, "l0") => Family::TaftL0 { d },
        (Ambient::Taft, "l1") => Family::TaftL1 { d, xi: take("xi")? },
        (Ambient::Book, "l0") => Family::BookL0 { d },
        (Ambient::Book, "l1") => Family::BookL1 { d, xi: take("xi")? },
        (Ambient::Book, "l2") => Family::BookL2 { d, xi: take("xi")? },
        (Ambient::Book, "l3") => {
            let a = take("a")?;
            let b = take("b")?;
            Family::BookL3 { a, b, xi: take("xi")? }
        }
        (Ambient::Book, "l4") => {
            let xi = take("xi")?;
            Family::BookL4 { d, xi, mu: take("mu")? }
        }
        (Ambient::Book, "l4eta") => {
            let xi = take("xi")?;
            let mu = take("mu")?;
            Family::BookL4Eta { xi, mu, eta: take("eta")? }
        }
        (_, "kc") => Family::GroupAlgebra { n: k.unwrap_or(n) },
        (_, "k") => Family::TrivialL { over: which },
        _ => bail!("unknown family `{name}` over {which}"),
    };
    if let Some(k) = p.keys().next() {
        bail!("params: `{k}` is not a parameter of {name}");
    }
    Ok(fam)
}

/// The grid families with the given name; all of them when `name` is `None`.
pub fn grid_filter<F: CyclotomicField>(grid: Vec<Family<F>>, name: Option<&str>) -> Vec<Family<F>> {
    let Some(name) = name else { return grid };
    let want = name.to_ascii_lowercase();
    grid.into_iter()
        .filter(|f| {
            let label = f.label().to_ascii_lowercase();
            let head = if matches!(f, Family::BookL4Eta { .. }) { "l4eta".to_string() } else { label.split('(').next().unwrap_or("").to_string() };
            head == want
        })
        .collect()
}
