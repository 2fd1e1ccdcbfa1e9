//! The `scf-1` JSON structure-constant format.
//!
//! A document holds one algebra, optionally with a Hopf structure, or a
//! comodule algebra together with its ambient Hopf algebra (embedded, or a
//! path relative to the document). Scalars are strings such as `1/2*z^2 - 3`
//! where `z` is the chosen primitive root of unity of order `conductor`.
//!
//! ```json
//! {
//!   "format": "scf-1",
//!   "conductor": 3,
//!   "name": "T(3)",
//!   "basis": ["1", "g", ...],
//!   "unit": [[0, "1"]],
//!   "mult": [[i, j, k, "c"], ...],        // e_i e_j has c on e_k
//!   "comult": [[i, p, q, "c"], ...],      // Delta(e_i) has c on e_p (x) e_q
//!   "counit": [[i, "c"], ...],
//!   "antipode": [[i, j, "c"], ...],       // S(e_i) has c on e_j
//!   "grouplikes": [[[k, "c"], ...], ...],
//!   "coaction": [[i, h, l, "c"], ...],    // delta(e_i) has c on h_h (x) e_l
//!   "ambient": { ... } | "ambient_file": "taft3.json"
//! }
//! ```
//!
//! Triplets are written sorted, so serializing is deterministic.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{normalize1, normalize2, FinAlgebra, Tensor2};
use crate::catalog::CatalogObject;
use crate::comodule::ComoduleAlgebra;
use crate::field::CyclotomicField;
use crate::hopf::{AxiomReport, HopfAlgebra};
use crate::linalg::{Matrix, SparseVec};
use crate::{Error, Result};

pub const FORMAT: &str = "scf-1";

type Vec1 = Vec<(usize, String)>;
type Vec2 = Vec<(usize, usize, String)>;
type Vec3 = Vec<(usize, usize, usize, String)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScfDocument {
    pub format: String,
    pub conductor: usize,
    pub name: String,
    pub basis: Vec<String>,
    pub unit: Vec1,
    pub mult: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comult: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<Vec1>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<Vec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouplikes: Option<Vec<Vec1>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<(String, Vec1)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Box<ScfDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_file: Option<String>,
}

/// What a document describes.
#[derive(Clone, Debug)]
pub enum Loaded<F> {
    Algebra(FinAlgebra<F>),
    Hopf(HopfAlgebra<F>),
    Comodule(ComoduleAlgebra<F>),
}

impl<F: CyclotomicField> Loaded<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Algebra(_) => "algebra",
            Loaded::Hopf(_) => "hopf algebra",
            Loaded::Comodule(_) => "comodule algebra",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Loaded::Algebra(a) => &a.name,
            Loaded::Hopf(h) => h.name(),
            Loaded::Comodule(l) => l.name(),
        }
    }

    /// Every axiom suite that applies; for a comodule algebra this includes
    /// the suite of its ambient Hopf algebra.
    pub fn check_axioms(&self) -> AxiomReport {
        match self {
            Loaded::Algebra(a) => {
                let mut r = AxiomReport::new(a.name.clone());
                r.record("algebra", a.check_axioms());
                r
            }
            Loaded::Hopf(h) => h.check_axioms(),
            Loaded::Comodule(l) => {
                let mut r = AxiomReport::new(l.name().to_string());
                r.extend(l.hopf.check_axioms());
                for c in l.check_axioms().checks {
                    r.checks.push(c);
                }
                r
            }
        }
    }
}

fn scalar<F: CyclotomicField>(key: &str, idx: usize, s: &str) -> Result<F> {
    s.parse::<F>().map_err(|_| Error::Parse(format!("{key}[{idx}]: cannot parse scalar `{s}`")))
}

fn check_index(key: &str, idx: usize, v: usize, n: usize) -> Result<()> {
    if v >= n {
        return Err(Error::Parse(format!("{key}[{idx}]: index {v} out of range (dimension {n})")));
    }
    Ok(())
}

fn vector<F: CyclotomicField>(key: &str, n: usize, entries: &[(usize, String)]) -> Result<Vec<F>> {
    let mut v = vec![F::zero(); n];
    for (idx, (i, c)) in entries.iter().enumerate() {
        check_index(key, idx, *i, n)?;
        v[*i] += &scalar::<F>(key, idx, c)?;
    }
    Ok(v)
}

fn tensor3<F: CyclotomicField>(key: &str, dims: [usize; 3], entries: &[(usize, usize, usize, String)]) -> Result<Vec<Tensor2<F>>> {
    let mut out: Vec<Tensor2<F>> = vec![Vec::new(); dims[0]];
    for (idx, (i, j, k, c)) in entries.iter().enumerate() {
        check_index(key, idx, *i, dims[0])?;
        check_index(key, idx, *j, dims[1])?;
        check_index(key, idx, *k, dims[2])?;
        out[*i].push((*j, *k, scalar::<F>(key, idx, c)?));
    }
    Ok(out.into_iter().map(normalize2).collect())
}

fn render1<F: CyclotomicField>(v: &[F]) -> Vec1 {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.to_string())).collect()
}

fn render3<F: CyclotomicField>(t: impl Iterator<Item = (usize, usize, usize, F)>) -> Vec3 {
    let mut v: Vec<_> = t.filter(|x| !x.3.is_zero()).map(|(i, j, k, c)| (i, j, k, c.to_string())).collect();
    v.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    v
}

impl ScfDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScfDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        doc.check_header()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scf documents always serialize")
    }

    fn check_header(&self) -> Result<()> {
        if self.format != FORMAT {
            return Err(Error::Parse(format!("format: expected `{FORMAT}`, found `{}`", self.format)));
        }
        if self.conductor == 0 {
            return Err(Error::Parse("conductor: must be positive".into()));
        }
        if self.ambient.is_some() && self.ambient_file.is_some() {
            return Err(Error::Parse("ambient and ambient_file are mutually exclusive".into()));
        }
        if let Some(a) = &self.ambient {
            a.check_header()?;
        }
        Ok(())
    }

    pub fn is_comodule(&self) -> bool {
        self.coaction.is_some()
    }

    pub fn algebra<F: CyclotomicField>(&self) -> Result<FinAlgebra<F>> {
        if self.conductor != F::conductor() {
            return Err(Error::Parse(format!(
                "conductor: document has {}, field has {}",
                self.conductor,
                F::conductor()
            )));
        }
        let n = self.basis.len();
        if n == 0 {
            return Err(Error::Parse("basis: must be nonempty".into()));
        }
        let unit = vector::<F>("unit", n, &self.unit)?;
        let rows = tensor3::<F>("mult", [n, n, n], &self.mult)?;
        let mut mult: Vec<Vec<SparseVec<F>>> = vec![vec![Vec::new(); n]; n];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, k, c) in row {
                mult[i][j].push((k, c));
            }
        }
        let mult = mult.into_iter().map(|r| r.into_iter().map(normalize1).collect()).collect();
        if let Some(g) = &self.generators {
            for (idx, &v) in g.iter().enumerate() {
                check_index("generators", idx, v, n)?;
            }
        }
        Ok(FinAlgebra::new(self.name.clone(), self.basis.clone(), mult, unit, self.generators.clone()))
    }

    pub fn hopf<F: CyclotomicField>(&self) -> Result<HopfAlgebra<F>> {
        let alg = self.algebra::<F>()?;
        let n = alg.dim();
        let comult = self.comult.as_ref().ok_or_else(|| Error::Parse("comult: missing".into()))?;
        let counit = self.counit.as_ref().ok_or_else(|| Error::Parse("counit: missing".into()))?;
        let comult = tensor3::<F>("comult", [n, n, n], comult)?;
        let counit = vector::<F>("counit", n, counit)?;
        let antipode = match &self.antipode {
            Some(s) => {
                let mut trip = Vec::new();
                for (idx, (i, j, c)) in s.iter().enumerate() {
                    check_index("antipode", idx, *i, n)?;
                    check_index("antipode", idx, *j, n)?;
                    trip.push((*j, *i, scalar::<F>("antipode", idx, c)?));
                }
                Some(Matrix::from_triplets(n, n, trip))
            }
            None => None,
        };
        let mut grouplikes = Vec::new();
        for (idx, g) in self.grouplikes.iter().flatten().enumerate() {
            grouplikes.push(vector::<F>(&format!("grouplikes[{idx}]"), n, g)?);
        }
        let mut h = HopfAlgebra::new(alg, comult, counit, antipode, grouplikes)?;
        h.characters = self.characters_of::<F>(n)?;
        Ok(h)
    }

    fn characters_of<F: CyclotomicField>(&self, n: usize) -> Result<Vec<(String, Vec<F>)>> {
        let mut out = Vec::new();
        for (name, v) in self.characters.iter().flatten() {
            out.push((name.clone(), vector::<F>(&format!("characters.{name}"), n, v)?));
        }
        Ok(out)
    }

    /// Builds the object. `base` is the directory `ambient_file` is relative to.
    pub fn load<F: CyclotomicField>(&self, base: Option<&Path>) -> Result<Loaded<F>> {
        let Some(coaction) = &self.coaction else {
            if self.comult.is_some() || self.counit.is_some() {
                return Ok(Loaded::Hopf(self.hopf()?));
            }
            return Ok(Loaded::Algebra(self.algebra()?));
        };
        let ambient_doc = match (&self.ambient, &self.ambient_file) {
            (Some(a), _) => (**a).clone(),
            (None, Some(f)) => {
                let p: PathBuf = base.map(|b| b.join(f)).unwrap_or_else(|| PathBuf::from(f));
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Parse(format!("ambient_file: cannot read {}: {e}", p.display())))?;
                ScfDocument::from_json(&text).map_err(|e| Error::Parse(format!("ambient_file {}: {e}", p.display())))?
            }
            (None, None) => return Err(Error::Parse("coaction given without ambient or ambient_file".into())),
        };
        let h = ambient_doc.hopf::<F>().map_err(|e| Error::Parse(format!("ambient: {e}")))?;
        let alg = self.algebra::<F>()?;
        let n = alg.dim();
        let delta = tensor3::<F>("coaction", [n, h.dim(), n], coaction)?;
        let mut la = ComoduleAlgebra::new(alg, Arc::new(h), delta)?;
        la.characters = self.characters_of::<F>(n)?;
        Ok(Loaded::Comodule(la))
    }
}

pub fn parse_str<F: CyclotomicField>(text: &str) -> Result<Loaded<F>> {
    ScfDocument::from_json(text)?.load(None)
}

pub fn parse_file<F: CyclotomicField>(path: &Path) -> Result<Loaded<F>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    ScfDocument::from_json(&text)?.load(path.parent())
}

fn algebra_doc<F: CyclotomicField>(a: &FinAlgebra<F>) -> ScfDocument {
    let gens = a.generators().to_vec();
    let all: Vec<usize> = (0..a.dim()).collect();
    ScfDocument {
        format: FORMAT.into(),
        conductor: F::conductor(),
        name: a.name.clone(),
        basis: a.labels.clone(),
        unit: render1(a.unit()),
        mult: render3(a.structure_constants().map(|(i, j, k, c)| (i, j, k, c.clone()))),
        generators: if gens == all { None } else { Some(gens) },
        comult: None,
        counit: None,
        antipode: None,
        grouplikes: None,
        characters: None,
        coaction: None,
        ambient: None,
        ambient_file: None,
    }
}

fn characters_doc<F: CyclotomicField>(c: &[(String, Vec<F>)]) -> Option<Vec<(String, Vec1)>> {
    if c.is_empty() {
        None
    } else {
        Some(c.iter().map(|(n, v)| (n.clone(), render1(v))).collect())
    }
}

pub fn serialize_algebra<F: CyclotomicField>(a: &FinAlgebra<F>) -> ScfDocument {
    algebra_doc(a)
}

pub fn serialize_hopf<F: CyclotomicField>(h: &HopfAlgebra<F>) -> ScfDocument {
    let mut d = algebra_doc(&h.alg);
    let n = h.dim();
    d.comult = Some(render3(
        (0..n).flat_map(|i| h.comult_basis(i).iter().map(move |(p, q, c)| (i, *p, *q, c.clone()))),
    ));
    d.counit = Some(render1(h.counit()));
    let mut s: Vec2 = h.antipode().triplets().map(|(j, i, c)| (i, j, c.to_string())).collect();
    s.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    d.antipode = Some(s);
    d.grouplikes = Some(h.grouplikes().iter().map(|g| render1(g)).collect());
    d.characters = characters_doc(&h.characters);
    d
}

/// With `ambient_file` set the ambient algebra is referenced instead of embedded.
pub fn serialize_comodule<F: CyclotomicField>(la: &ComoduleAlgebra<F>, ambient_file: Option<&str>) -> ScfDocument {
    let mut d = algebra_doc(&la.alg);
    let n = la.dim();
    d.coaction = Some(render3(
        (0..n).flat_map(|i| la.coaction_basis(i).iter().map(move |(h, l, c)| (i, *h, *l, c.clone()))),
    ));
    d.characters = characters_doc(&la.characters);
    match ambient_file {
        Some(f) => d.ambient_file = Some(f.to_string()),
        None => d.ambient = Some(Box::new(serialize_hopf(&la.hopf))),
    }
    d
}

pub fn serialize_catalog<F: CyclotomicField>(obj: &CatalogObject<F>) -> ScfDocument {
    serialize_comodule(&obj.la, None)
}
