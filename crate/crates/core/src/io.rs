//! File formats: operator files and C-richness problems.
//!
//! An operator file is `{"space": "<expr>", "field": "real"|"complex",
//! "matrix": [[...], ...]}`; complex entries are written `[re, im]`, real
//! entries as plain numbers.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_space, parse_space_expr};
use crate::error::{Error, Result};
use crate::operators::Operator;
use crate::spaces::Field;
use crate::verifiers::{KModel, MeasureModel, OpenSet};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> C64 {
        match e {
            Entry::Real(r) => C64::new(r, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub space: String,
    pub field: Field,
    pub matrix: Vec<Vec<Entry>>,
}

impl OperatorFile {
    pub fn from_operator(op: &Operator) -> Self {
        let field = op.space().field();
        let m = op.matrix();
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| match field {
                        Field::Real => Entry::Real(m[(i, j)].re),
                        Field::Complex => Entry::Complex([m[(i, j)].re, m[(i, j)].im]),
                    })
                    .collect()
            })
            .collect();
        Self {
            space: op.space().expr().to_string(),
            field,
            matrix,
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let space = build_space(&parse_space_expr(&self.space)?)?;
        if space.field() != self.field {
            return Err(Error::input(format!(
                "file declares field {:?} but {} is {:?}",
                self.field,
                self.space,
                space.field()
            )));
        }
        let n = self.matrix.len();
        if let Some(row) = self.matrix.iter().find(|r| r.len() != n) {
            return Err(Error::input(format!(
                "matrix is not square: row of length {} in {n} rows",
                row.len()
            )));
        }
        let m = DMatrix::from_fn(n, n, |i, j| C64::from(self.matrix[i][j]));
        Operator::new(space, m)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_operator(path: &Path) -> Result<Operator> {
    read_json::<OperatorFile>(path)?.to_operator()
}

pub fn save_operator(path: &Path, op: &Operator) -> Result<()> {
    let text = serde_json::to_string_pretty(&OperatorFile::from_operator(op))?;
    write_text(path, &text)
}

/// A `K` model with functionals and, optionally, an open set for the
/// witness search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrichProblem {
    pub k: KModel,
    pub functionals: Vec<MeasureModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_set: Option<OpenSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

pub fn load_crich_problem(path: &Path) -> Result<CrichProblem> {
    let p: CrichProblem = read_json(path)?;
    p.k.validate()?;
    Ok(p)
}
