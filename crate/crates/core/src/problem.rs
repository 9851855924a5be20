//! The `tanglie/1` JSON problem format and the built-in catalog.
//!
//! ```json
//! {
//!   "schema": "tanglie/1",
//!   "name": "heisenberg",
//!   "dim": 3,
//!   "basis": ["X", "Y", "Z"],
//!   "brackets": [{"i": 0, "j": 1, "k": 2, "value": 1.0}],
//!   "metrics": {"g1": [[1,0,0],[0,1,0],[0,0,1]], "g2": [[2,0,0],[0,2,0],[0,0,1]]},
//!   "symplectic": {"w1": [[0,1],[-1,0]]},
//!   "automorphisms": {"tau": [[2,0,0],[0,3,0],[0,0,6]]}
//! }
//! ```
//!
//! Bracket entries give `c_ij^k` for `i < j` only; `[X_j, X_i]` follows by
//! antisymmetry. `symplectic`, `automorphisms` and `lift` are optional.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::error::GeometryError;
use crate::lie::{LieAlgebra, LinearMap, Metric};
use crate::symplectic::TwoForm;
use crate::tol;

pub const SCHEMA: &str = "tanglie/1";

pub const CATALOG_NAMES: [&str; 6] = [
    "heisenberg",
    "solvable_rr2",
    "su2",
    "aff1",
    "abelian2",
    "abelian3",
];

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("unknown catalog entry '{0}' (known: heisenberg, solvable_rr2, su2, aff1, abelian2, abelian3)")]
    UnknownCatalogEntry(String),
}

impl ProblemError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ProblemError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Extra data written by the `lift` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftInfo {
    pub index_convention: String,
    pub lambdas: Vec<f64>,
    /// Columns are the eigenframe vectors in the base input basis.
    pub frame: Vec<Vec<f64>>,
    pub base_name: String,
}

/// Raw file contents, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub metrics: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub symplectic: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub automorphisms: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftInfo>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub algebra: LieAlgebra,
    pub metrics: BTreeMap<String, Metric>,
    pub forms: BTreeMap<String, TwoForm>,
    pub automorphisms: BTreeMap<String, LinearMap>,
}

impl Problem {
    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn metric(&self, name: &str) -> Result<&Metric, ProblemError> {
        self.metrics
            .get(name)
            .ok_or_else(|| ProblemError::at(format!("metrics.{name}"), "missing"))
    }

    pub fn form(&self, name: &str) -> Result<&TwoForm, ProblemError> {
        self.forms
            .get(name)
            .ok_or_else(|| ProblemError::at(format!("symplectic.{name}"), "missing"))
    }

    pub fn automorphism(&self, name: &str) -> Result<&LinearMap, ProblemError> {
        self.automorphisms
            .get(name)
            .ok_or_else(|| ProblemError::at(format!("automorphisms.{name}"), "missing"))
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))
    }

    /// Deterministic JSON text (see [`crate::json`]).
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("plain data serializes");
        crate::json::to_string_pretty(&v)
    }

    /// Builds a file from an algebra and named matrices.
    pub fn from_parts(name: &str, a: &LieAlgebra, metrics: &[(&str, &DMatrix<f64>)]) -> Self {
        let n = a.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = a.c(i, j, k);
                    if v != 0.0 {
                        brackets.push(BracketEntry { i, j, k, value: v });
                    }
                }
            }
        }
        ProblemFile {
            schema: SCHEMA.to_string(),
            name: name.to_string(),
            dim: n,
            basis: a.labels().to_vec(),
            brackets,
            metrics: metrics
                .iter()
                .map(|(k, m)| (k.to_string(), rows(m)))
                .collect(),
            symplectic: BTreeMap::new(),
            automorphisms: BTreeMap::new(),
            lift: None,
        }
    }

    pub fn validate(self) -> Result<Problem, ProblemError> {
        if self.schema != SCHEMA {
            return Err(ProblemError::at(
                "schema",
                format!("expected \"{SCHEMA}\", found \"{}\"", self.schema),
            ));
        }
        let n = self.dim;
        if self.basis.len() != n {
            return Err(ProblemError::at(
                "basis",
                format!("{} labels for dim {n}", self.basis.len()),
            ));
        }
        let mut seen_labels = BTreeSet::new();
        for (idx, l) in self.basis.iter().enumerate() {
            if l.is_empty() || !l.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(ProblemError::at(
                    format!("basis[{idx}]"),
                    format!("label '{l}' must be alphanumeric"),
                ));
            }
            if !seen_labels.insert(l) {
                return Err(ProblemError::at(
                    format!("basis[{idx}]"),
                    format!("duplicate label '{l}'"),
                ));
            }
        }

        let mut entries = Vec::with_capacity(self.brackets.len());
        let mut seen = BTreeSet::new();
        for (idx, b) in self.brackets.iter().enumerate() {
            let path = format!("brackets[{idx}]");
            for (field, v) in [("i", b.i), ("j", b.j), ("k", b.k)] {
                if v >= n {
                    return Err(ProblemError::at(
                        format!("{path}.{field}"),
                        format!("index {v} out of range for dim {n}"),
                    ));
                }
            }
            if !b.value.is_finite() {
                return Err(ProblemError::at(
                    format!("{path}.value"),
                    "not a finite number",
                ));
            }
            if b.i >= b.j {
                let reverse = self
                    .brackets
                    .iter()
                    .any(|o| o.i == b.j && o.j == b.i && o.k == b.k);
                let msg = if reverse {
                    format!(
                        "duplicate orientation: ({}, {}) and ({}, {}) both given for k = {}",
                        b.j, b.i, b.i, b.j, b.k
                    )
                } else {
                    format!("entries require i < j, found i = {}, j = {}", b.i, b.j)
                };
                return Err(ProblemError::at(path, msg));
            }
            if !seen.insert((b.i, b.j, b.k)) {
                return Err(ProblemError::at(
                    path,
                    format!("duplicate entry ({}, {}, {})", b.i, b.j, b.k),
                ));
            }
            entries.push((b.i, b.j, b.k, b.value));
        }
        let algebra =
            LieAlgebra::from_upper(self.basis.clone(), &entries).map_err(|e| match e {
                GeometryError::JacobiViolated { defect } => ProblemError::at(
                    "brackets",
                    format!("Jacobi identity violated (defect {defect:e})"),
                ),
                other => ProblemError::at("brackets", other.to_string()),
            })?;

        let mut metrics = BTreeMap::new();
        for (name, m) in &self.metrics {
            let path = format!("metrics.{name}");
            let m = square(&path, m, n)?;
            let g = Metric::new(m).map_err(|e| match e {
                GeometryError::NonPositiveDefinite { pivot, value } => ProblemError::at(
                    path.clone(),
                    format!("non-positive-definite (pivot {pivot} = {value:e})"),
                ),
                other => ProblemError::at(path.clone(), other.to_string()),
            })?;
            metrics.insert(name.clone(), g);
        }

        let mut forms = BTreeMap::new();
        for (name, m) in &self.symplectic {
            let path = format!("symplectic.{name}");
            let m = square(&path, m, n)?;
            let w = TwoForm::from_matrix(m, tol::SYM)
                .map_err(|e| ProblemError::at(path.clone(), e.to_string()))?;
            forms.insert(name.clone(), w);
        }

        let mut automorphisms = BTreeMap::new();
        for (name, m) in &self.automorphisms {
            let path = format!("automorphisms.{name}");
            let m = LinearMap(square(&path, m, n)?);
            if !m.is_invertible() {
                return Err(ProblemError::at(path, "singular map"));
            }
            automorphisms.insert(name.clone(), m);
        }

        Ok(Problem {
            file: self,
            algebra,
            metrics,
            forms,
            automorphisms,
        })
    }
}

fn square(path: &str, m: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>, ProblemError> {
    if m.len() != n {
        return Err(ProblemError::at(
            path,
            format!("{} rows, expected {n}", m.len()),
        ));
    }
    for (r, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(ProblemError::at(
                format!("{path}[{r}]"),
                format!("{} columns, expected {n}", row.len()),
            ));
        }
        if let Some(c) = row.iter().position(|x| !x.is_finite()) {
            return Err(ProblemError::at(
                format!("{path}[{r}][{c}]"),
                "not a finite number",
            ));
        }
    }
    Ok(DMatrix::from_fn(n, n, |r, c| m[r][c]))
}

pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}

/// Reads and validates a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem, ProblemError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ProblemError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ProblemFile::from_json(&text)?.validate()
}

fn diag(d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))
}

fn std_form(scale: f64) -> Vec<Vec<f64>> {
    vec![vec![0.0, scale], vec![-scale, 0.0]]
}

/// Built-in problems with their default metrics.
pub fn catalog_algebra(name: &str) -> Result<ProblemFile, ProblemError> {
    let mut f = match name {
        "heisenberg" => {
            let mut f = ProblemFile::from_parts(
                name,
                &catalog::heisenberg(),
                &[("g1", &diag(&[1., 1., 1.])), ("g2", &diag(&[2., 2., 1.]))],
            );
            for (k, (a, b)) in [("tau", (2., 3.)), ("tau_b", (1., 5.)), ("tau_c", (0.5, 4.))] {
                f.automorphisms
                    .insert(k.to_string(), rows(&diag(&[a, b, a * b])));
            }
            f
        }
        "solvable_rr2" => {
            let mut f = ProblemFile::from_parts(
                name,
                &catalog::solvable_rr2(),
                &[("g1", &diag(&[1., 1., 1.])), ("g2", &diag(&[1., 2., 3.]))],
            );
            f.automorphisms
                .insert("tau".to_string(), rows(&diag(&[2., 3., 1.])));
            f
        }
        "su2" => ProblemFile::from_parts(
            name,
            &catalog::su2(),
            &[
                ("g1", &diag(&[1., 1., 1.])),
                ("g2", &diag(&[1., 1., 1.])),
                ("killing", &diag(&[2., 2., 2.])),
            ],
        ),
        "aff1" => {
            let mut f = ProblemFile::from_parts(
                name,
                &catalog::aff1(),
                &[("g1", &diag(&[1., 1.])), ("g2", &diag(&[1., 2.]))],
            );
            f.symplectic.insert("w1".to_string(), std_form(1.0));
            f.symplectic.insert("w2".to_string(), std_form(2.0));
            f
        }
        "abelian2" => {
            let mut f = ProblemFile::from_parts(
                name,
                &catalog::abelian(2),
                &[("g1", &diag(&[1., 1.])), ("g2", &diag(&[1., 2.]))],
            );
            f.symplectic.insert("w1".to_string(), std_form(1.0));
            f.symplectic.insert("w2".to_string(), std_form(3.0));
            f
        }
        "abelian3" => ProblemFile::from_parts(
            name,
            &catalog::abelian(3),
            &[("g1", &diag(&[1., 1., 1.])), ("g2", &diag(&[1., 2., 3.]))],
        ),
        _ => return Err(ProblemError::UnknownCatalogEntry(name.to_string())),
    };
    f.schema = SCHEMA.to_string();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn validation_path(e: ProblemError) -> String {
        match e {
            ProblemError::Validation { path, .. } => path,
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn catalog_entries_validate() {
        for name in CATALOG_NAMES {
            let p = catalog_algebra(name).unwrap().validate().unwrap();
            assert_eq!(p.algebra.jacobi_defect(), 0.0);
            assert!(p.metric("g1").is_ok() && p.metric("g2").is_ok());
        }
        let h = catalog_algebra("heisenberg").unwrap();
        assert_eq!(
            h.brackets,
            vec![BracketEntry {
                i: 0,
                j: 1,
                k: 2,
                value: 1.0
            }]
        );
        assert_eq!(
            h.metrics["g2"],
            vec![vec![2., 0., 0.], vec![0., 2., 0.], vec![0., 0., 1.]]
        );
        let s = catalog_algebra("solvable_rr2").unwrap().validate().unwrap();
        let z = s.algebra.basis_vector(2);
        let x = s.algebra.basis_vector(0);
        assert_eq!(s.algebra.bracket(&z, &x).unwrap(), x);
        assert!(matches!(
            catalog_algebra("nope"),
            Err(ProblemError::UnknownCatalogEntry(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        for name in CATALOG_NAMES {
            let f = catalog_algebra(name).unwrap();
            let back = ProblemFile::from_json(&f.to_json()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn duplicate_orientation() {
        let mut f = catalog_algebra("heisenberg").unwrap();
        f.brackets.push(BracketEntry {
            i: 1,
            j: 0,
            k: 2,
            value: 1.0,
        });
        let e = f.validate().unwrap_err();
        assert!(e.to_string().contains("duplicate orientation"), "{e}");
        assert_eq!(validation_path(e), "brackets[1]");
    }

    #[test]
    fn non_spd_metric() {
        let mut f = catalog_algebra("heisenberg").unwrap();
        f.metrics.insert("g2".into(), rows(&diag(&[1., -1., 1.])));
        let e = f.validate().unwrap_err();
        assert!(e.to_string().contains("non-positive-definite"), "{e}");
        assert_eq!(validation_path(e), "metrics.g2");
    }

    #[test]
    fn jacobi_and_shape_errors() {
        let mut f = catalog_algebra("abelian3").unwrap();
        // [X,Y]=Z, [X,Z]=Z, [Y,Z]=X
        f.brackets = vec![
            BracketEntry {
                i: 0,
                j: 1,
                k: 2,
                value: 1.0,
            },
            BracketEntry {
                i: 0,
                j: 2,
                k: 2,
                value: 1.0,
            },
            BracketEntry {
                i: 1,
                j: 2,
                k: 0,
                value: 1.0,
            },
        ];
        let e = f.validate().unwrap_err();
        assert!(e.to_string().contains("Jacobi"), "{e}");

        let mut f = catalog_algebra("abelian3").unwrap();
        f.brackets = vec![BracketEntry {
            i: 0,
            j: 3,
            k: 2,
            value: 1.0,
        }];
        assert_eq!(validation_path(f.validate().unwrap_err()), "brackets[0].j");

        let mut f = catalog_algebra("abelian3").unwrap();
        f.metrics.insert(
            "g1".into(),
            vec![vec![1., 0., 0.], vec![0., 1.], vec![0., 0., 1.]],
        );
        assert_eq!(validation_path(f.validate().unwrap_err()), "metrics.g1[1]");

        let mut f = catalog_algebra("aff1").unwrap();
        f.symplectic
            .insert("w1".into(), vec![vec![0., 1.], vec![1., 0.]]);
        assert_eq!(validation_path(f.validate().unwrap_err()), "symplectic.w1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ProblemFile::from_json("{"),
            Err(ProblemError::Parse(_))
        ));
        assert!(matches!(
            ProblemFile::from_json("{\"schema\": 1}"),
            Err(ProblemError::Parse(_))
        ));
        assert!(matches!(
            load_problem("/nonexistent/x.json"),
            Err(ProblemError::Io { .. })
        ));
    }
}
