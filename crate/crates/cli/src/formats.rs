//! JSON input formats. Every rational is a `"p"` or `"p/q"` string; JSON
//! numbers in coefficient position are rejected.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use nsgrade::algebra::{Algebra, FamilySpec};
use nsgrade::exactla::{format_rational, parse_rational, Matrix, Rational};
use nsgrade::magma::PartialMagma;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {at}: {message}")]
    Invalid {
        path: String,
        at: String,
        message: String,
    },
}

impl InputError {
    fn invalid(path: &str, at: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Invalid {
            path: path.to_string(),
            at: at.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductRecord {
    pub left_index: usize,
    pub right_index: usize,
    pub result_index: usize,
    pub coefficient: String,
}

/// Structure constants listed sparsely; omitted entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<ProductRecord>,
}

/// Dense matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<String>,
}

/// The four maps of the family algebra `Ke + Ka + V + V'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub v_dim: usize,
    #[serde(rename = "f_L")]
    pub f_l: MatrixFile,
    #[serde(rename = "f_R")]
    pub f_r: MatrixFile,
    #[serde(rename = "g_L")]
    pub g_l: MatrixFile,
    #[serde(rename = "g_R")]
    pub g_r: MatrixFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagmaEntry {
    pub left: String,
    pub right: String,
    pub result: String,
}

/// Element labels plus the defined products, by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagmaFile {
    pub elements: Vec<String>,
    pub table: Vec<MagmaEntry>,
}

/// An algebra given either by structure constants or as a family member.
#[derive(Debug, Clone)]
pub enum AlgebraInput {
    Table(Algebra),
    Family(FamilySpec),
}

impl AlgebraInput {
    pub fn algebra(&self) -> Algebra {
        match self {
            AlgebraInput::Table(a) => a.clone(),
            AlgebraInput::Family(spec) => spec.build(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraInput::Table(_) => "algebra",
            AlgebraInput::Family(_) => "family",
        }
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        match self {
            AlgebraInput::Family(spec) => Some(spec),
            AlgebraInput::Table(_) => None,
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn json<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|source| InputError::Json {
        path: name.to_string(),
        source,
    })
}

fn rational(name: &str, at: &str, s: &str) -> Result<Rational, InputError> {
    parse_rational(s).map_err(|e| InputError::invalid(name, at, format!("`{s}`: {e}")))
}

pub fn parse_algebra(name: &str, text: &str) -> Result<Algebra, InputError> {
    let file: AlgebraFile = json(name, text)?;
    algebra_from_file(name, &file)
}

pub fn algebra_from_file(name: &str, file: &AlgebraFile) -> Result<Algebra, InputError> {
    let n = file.dim;
    if file.basis.len() != n {
        return Err(InputError::invalid(
            name,
            "basis",
            format!("{} labels for dimension {n}", file.basis.len()),
        ));
    }
    let mut alg = Algebra::zero_product(file.basis.clone())
        .map_err(|e| InputError::invalid(name, "basis", e.to_string()))?;
    let mut seen = BTreeSet::new();
    for (i, p) in file.products.iter().enumerate() {
        let at = format!("products[{i}]");
        for (field, idx) in [
            ("left_index", p.left_index),
            ("right_index", p.right_index),
            ("result_index", p.result_index),
        ] {
            if idx >= n {
                return Err(InputError::invalid(
                    name,
                    format!("{at}.{field}"),
                    format!("index {idx} out of range for dimension {n}"),
                ));
            }
        }
        let key = (p.left_index, p.right_index, p.result_index);
        if !seen.insert(key) {
            return Err(InputError::invalid(
                name,
                &at,
                format!("duplicate record for ({}, {}, {})", key.0, key.1, key.2),
            ));
        }
        let c = rational(name, &format!("{at}.coefficient"), &p.coefficient)?;
        alg.set_structure_constant(key.0, key.1, key.2, c)
            .map_err(|e| InputError::invalid(name, &at, e.to_string()))?;
    }
    Ok(alg)
}

pub fn algebra_to_file(alg: &Algebra) -> AlgebraFile {
    AlgebraFile {
        dim: alg.dim(),
        basis: alg.basis_names().to_vec(),
        products: alg
            .nonzero_constants()
            .map(|(i, j, k, c)| ProductRecord {
                left_index: i,
                right_index: j,
                result_index: k,
                coefficient: format_rational(c),
            })
            .collect(),
    }
}

pub fn matrix_from_file(name: &str, at: &str, file: &MatrixFile) -> Result<Matrix, InputError> {
    if file.data.len() != file.rows * file.cols {
        return Err(InputError::invalid(
            name,
            at,
            format!(
                "{} entries for a {}x{} matrix",
                file.data.len(),
                file.rows,
                file.cols
            ),
        ));
    }
    let entries = file
        .data
        .iter()
        .enumerate()
        .map(|(i, s)| rational(name, &format!("{at}.data[{i}]"), s))
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_entries(file.rows, file.cols, entries)
        .map_err(|e| InputError::invalid(name, at, e.to_string()))
}

pub fn matrix_to_file(m: &Matrix) -> MatrixFile {
    MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().iter().map(format_rational).collect(),
    }
}

pub fn parse_matrix(name: &str, text: &str) -> Result<Matrix, InputError> {
    let file: MatrixFile = json(name, text)?;
    matrix_from_file(name, "matrix", &file)
}

pub fn parse_family(name: &str, text: &str) -> Result<FamilySpec, InputError> {
    let file: FamilyFile = json(name, text)?;
    let n = file.v_dim;
    let mut maps = Vec::with_capacity(4);
    for (key, m) in [
        ("f_L", &file.f_l),
        ("f_R", &file.f_r),
        ("g_L", &file.g_l),
        ("g_R", &file.g_r),
    ] {
        let m = matrix_from_file(name, key, m)?;
        if m.rows() != n || m.cols() != n {
            return Err(InputError::invalid(
                name,
                key,
                format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols()),
            ));
        }
        maps.push(m);
    }
    let g_r = maps.pop().unwrap();
    let g_l = maps.pop().unwrap();
    let f_r = maps.pop().unwrap();
    let f_l = maps.pop().unwrap();
    FamilySpec::new(f_l, f_r, g_l, g_r)
        .map_err(|e| InputError::invalid(name, "v_dim", e.to_string()))
}

pub fn family_to_file(spec: &FamilySpec) -> FamilyFile {
    FamilyFile {
        v_dim: spec.v_dim(),
        f_l: matrix_to_file(spec.f_l()),
        f_r: matrix_to_file(spec.f_r()),
        g_l: matrix_to_file(spec.g_l()),
        g_r: matrix_to_file(spec.g_r()),
    }
}

/// A document with a `v_dim` key is a family file, anything else an
/// algebra file.
pub fn parse_algebra_input(name: &str, text: &str) -> Result<AlgebraInput, InputError> {
    let value: serde_json::Value = json(name, text)?;
    if value.get("v_dim").is_some() {
        parse_family(name, text).map(AlgebraInput::Family)
    } else {
        parse_algebra(name, text).map(AlgebraInput::Table)
    }
}

pub fn parse_magma(name: &str, text: &str) -> Result<PartialMagma, InputError> {
    let file: MagmaFile = json(name, text)?;
    magma_from_file(name, &file)
}

pub fn magma_from_file(name: &str, file: &MagmaFile) -> Result<PartialMagma, InputError> {
    let mut m = PartialMagma::new(file.elements.clone())
        .map_err(|e| InputError::invalid(name, "elements", e.to_string()))?;
    for (i, entry) in file.table.iter().enumerate() {
        let at = format!("table[{i}]");
        let idx = |field: &str, label: &str| {
            m.index_of(label).ok_or_else(|| {
                InputError::invalid(
                    name,
                    format!("{at}.{field}"),
                    format!("unknown element `{label}`"),
                )
            })
        };
        let (l, r, res) = (
            idx("left", &entry.left)?,
            idx("right", &entry.right)?,
            idx("result", &entry.result)?,
        );
        m.define(l, r, res)
            .map_err(|e| InputError::invalid(name, &at, e.to_string()))?;
    }
    Ok(m)
}

pub fn magma_to_file(m: &PartialMagma) -> MagmaFile {
    MagmaFile {
        elements: m.elements().to_vec(),
        table: m
            .entries()
            .map(|(l, r, res)| MagmaEntry {
                left: m.label(l).to_string(),
                right: m.label(r).to_string(),
                result: m.label(res).to_string(),
            })
            .collect(),
    }
}

pub fn load_algebra_input(path: &Path) -> Result<AlgebraInput, InputError> {
    parse_algebra_input(&path.display().to_string(), &read(path)?)
}

pub fn load_matrix(path: &Path) -> Result<Matrix, InputError> {
    parse_matrix(&path.display().to_string(), &read(path)?)
}

pub fn load_magma(path: &Path) -> Result<PartialMagma, InputError> {
    parse_magma(&path.display().to_string(), &read(path)?)
}
