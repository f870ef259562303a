//! File formats of the toolkit: a single canonical JSON dialect with
//! rationals as strings, deterministic key order (serde_json maps are
//! BTree-backed), and stable term order for polynomials. Identical inputs
//! serialize to identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arrangement::{Arrangement, Multiplicity};
use crate::error::{Error, Result};
use crate::exactalg::{rational_from_str, rational_to_string, Rational, Rationals};
use crate::fermat::FermatCover;
use crate::mpoly::{MPoly, Var};

/// Canonical JSON text: pretty-printed with sorted object keys.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn sha256_hex(data: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultiplicityRepr {
    Finite(u64),
    Symbol(String),
}

/// Arrangement input/output file: `n`, covectors as arrays of rational
/// strings, optional multiplicities (integers or `"inf"`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub n: usize,
    pub covectors: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<MultiplicityRepr>>,
}

pub fn arrangement_to_file(arr: &Arrangement) -> ArrangementFile {
    ArrangementFile {
        n: arr.n(),
        covectors: arr
            .covectors()
            .iter()
            .map(|v| v.iter().map(rational_to_string).collect())
            .collect(),
        multiplicities: arr.multiplicities().map(|ms| {
            ms.iter()
                .map(|m| match m {
                    Multiplicity::Finite(v) => MultiplicityRepr::Finite(*v),
                    Multiplicity::Infinite => MultiplicityRepr::Symbol("inf".into()),
                })
                .collect()
        }),
    }
}

pub fn arrangement_from_file(file: &ArrangementFile) -> Result<Arrangement> {
    let covectors: Vec<Vec<Rational>> = file
        .covectors
        .iter()
        .map(|row| row.iter().map(|s| rational_from_str(s)).collect())
        .collect::<Result<_>>()?;
    let multiplicities = match &file.multiplicities {
        None => None,
        Some(ms) => Some(
            ms.iter()
                .map(|m| match m {
                    MultiplicityRepr::Finite(v) => Ok(Multiplicity::Finite(*v)),
                    MultiplicityRepr::Symbol(s) if s == "inf" => Ok(Multiplicity::Infinite),
                    MultiplicityRepr::Symbol(s) => {
                        Err(Error::Parse(format!("invalid multiplicity {s:?}")))
                    }
                })
                .collect::<Result<_>>()?,
        ),
    };
    Arrangement::new(file.n, covectors, multiplicities)
}

pub fn load_arrangement(path: &Path) -> Result<Arrangement> {
    arrangement_from_file(&read_json_file(path)?)
}

/// Canonical serialization of an arrangement, also the hashing preimage for
/// certificates.
pub fn arrangement_canonical_json(arr: &Arrangement) -> String {
    canonical_json(&arrangement_to_file(arr))
}

/// Fermat cover file: `n`, `k`, `m` and the coefficient matrix as rational
/// strings, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverFile {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub a: Vec<Vec<String>>,
}

pub fn cover_to_file(cov: &FermatCover) -> CoverFile {
    CoverFile {
        n: cov.n(),
        k: cov.k(),
        m: cov.m(),
        a: cov
            .a()
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect(),
    }
}

pub fn cover_from_file(file: &CoverFile) -> Result<FermatCover> {
    let a: Vec<Vec<Rational>> = file
        .a
        .iter()
        .map(|row| row.iter().map(|s| rational_from_str(s)).collect())
        .collect::<Result<_>>()?;
    FermatCover::from_matrix(file.n, file.k, file.m, a)
}

pub fn load_cover(path: &Path) -> Result<FermatCover> {
    cover_from_file(&read_json_file(path)?)
}

/// Output of the `normalize` subcommand: the pivot, the coordinate change
/// (row-major, maps new point coordinates to old), and the coefficient
/// matrix of the remaining hyperplanes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalizedFile {
    pub n: usize,
    pub pivot: Vec<usize>,
    pub others: Vec<usize>,
    pub change: Vec<Vec<String>>,
    pub a: Vec<Vec<String>>,
}

pub fn normalized_to_file(na: &crate::arrangement::NormalizedArrangement) -> NormalizedFile {
    NormalizedFile {
        n: na.n(),
        pivot: na.pivot().to_vec(),
        others: na.others().to_vec(),
        change: na
            .change()
            .to_rows()
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect(),
        a: na
            .a_rows()
            .iter()
            .map(|row| row.iter().map(rational_to_string).collect())
            .collect(),
    }
}

/// One polynomial term: coefficient string and the exponent list in
/// canonical variable order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: String,
    pub monomial: Vec<(String, u32)>,
}

/// Polynomial wire form: terms listed leading-first.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyRepr {
    pub terms: Vec<TermRepr>,
}

pub fn poly_to_repr(p: &MPoly<Rationals>) -> PolyRepr {
    let mut terms: Vec<TermRepr> = p
        .terms()
        .map(|(m, c)| TermRepr {
            coeff: rational_to_string(c),
            monomial: m
                .factors()
                .iter()
                .map(|&(v, e)| (v.name(), e))
                .collect(),
        })
        .collect();
    terms.reverse(); // leading term first
    PolyRepr { terms }
}

pub fn poly_from_repr(repr: &PolyRepr) -> Result<MPoly<Rationals>> {
    let mut p = MPoly::zero(Rationals);
    for t in &repr.terms {
        let mono = crate::mpoly::Monomial::from_factors(
            t.monomial
                .iter()
                .map(|(name, e)| Ok((Var::parse(name)?, *e)))
                .collect::<Result<Vec<_>>>()?,
        );
        p.add_term(mono, rational_from_str(&t.coeff)?);
    }
    Ok(p)
}

/// Output of the `differential` subcommand: the cover data, the chosen
/// relation rows, the chart, the twist exponent, and the chart expression.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferentialFile {
    pub cover: CoverFile,
    pub rows: Vec<usize>,
    pub chart: usize,
    pub twist_exponent: i64,
    pub symmetric_degree: usize,
    pub section: PolyRepr,
    pub pretty: String,
}
