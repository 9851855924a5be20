use serde_json::{json, Map, Value};
use tanglie_core::json::{format_f64, to_string_pretty};
use tanglie_core::{Tensor3, Tensor4};

/// One named piece of a command's result.
#[derive(Debug, Clone)]
pub enum Item {
    Scalar(f64),
    Flag(bool),
    Text(String),
    Count(usize),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
    Labels(Vec<String>),
    Tensor {
        shape: Vec<usize>,
        labels: Vec<String>,
        convention: String,
        data: Vec<f64>,
    },
    Table {
        headers: Vec<String>,
        rows: Vec<Vec<Value>>,
    },
}

impl Item {
    pub fn tensor3(t: &Tensor3, labels: &[String], convention: &str) -> Item {
        let n = t.dim();
        Item::Tensor {
            shape: vec![n; 3],
            labels: labels.to_vec(),
            convention: convention.to_string(),
            data: t.as_slice().to_vec(),
        }
    }

    pub fn tensor4(t: &Tensor4, labels: &[String], convention: &str) -> Item {
        let n = t.dim();
        Item::Tensor {
            shape: vec![n; 4],
            labels: labels.to_vec(),
            convention: convention.to_string(),
            data: t.as_slice().to_vec(),
        }
    }

    pub fn matrix(m: &nalgebra::DMatrix<f64>) -> Item {
        Item::Matrix(tanglie_core::problem::rows(m))
    }

    fn to_json(&self) -> Value {
        match self {
            Item::Scalar(x) => json!(x),
            Item::Flag(b) => json!(b),
            Item::Text(s) => json!(s),
            Item::Count(n) => json!(n),
            Item::Vector(v) => json!(v),
            Item::Matrix(m) => json!(m),
            Item::Labels(l) => json!(l),
            Item::Tensor {
                shape,
                labels,
                convention,
                data,
            } => json!({
                "shape": shape,
                "labels": labels,
                "index_convention": convention,
                "layout": "row-major",
                "data": data,
            }),
            Item::Table { headers, rows } => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (h, v) in headers.iter().zip(r) {
                            m.insert(h.clone(), v.clone());
                        }
                        Value::Object(m)
                    })
                    .collect();
                Value::Array(rows)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub source: String,
    pub digest: String,
    pub tolerance: f64,
    pub result: Vec<(String, Item)>,
    pub checks: Vec<Check>,
    pub residuals: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: String, source: String, digest: String, tolerance: f64) -> Self {
        Report {
            command,
            source,
            digest,
            tolerance,
            result: Vec::new(),
            checks: Vec::new(),
            residuals: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, item: Item) {
        self.result.push((key.to_string(), item));
    }

    /// Records a residual and a check `residual <= tol`.
    pub fn check_residual(&mut self, name: &str, residual: f64) {
        let pass = residual <= self.tolerance;
        self.residuals.push((name.to_string(), residual));
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            residual: Some(residual),
        });
    }

    pub fn check_flag(&mut self, name: &str, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            residual: None,
        });
    }

    /// Residual reported without a pass/fail verdict.
    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push((name.to_string(), value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut result = Map::new();
        for (k, item) in &self.result {
            result.insert(k.clone(), item.to_json());
        }
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "residual": c.residual}))
            .collect();
        let mut residuals = Map::new();
        for (k, v) in &self.residuals {
            residuals.insert(k.clone(), json!(v));
        }
        let v = json!({
            "command": self.command,
            "input": {"source": self.source, "sha256": self.digest},
            "tolerance": self.tolerance,
            "result": result,
            "checks": checks,
            "residuals": residuals,
            "status": if self.passed() { "pass" } else { "fail" },
        });
        to_string_pretty(&v)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("command:   {}\n", self.command));
        s.push_str(&format!(
            "input:     {} (sha256 {})\n",
            self.source, self.digest
        ));
        s.push_str(&format!("tolerance: {}\n", format_f64(self.tolerance)));
        for (k, item) in &self.result {
            render_item(&mut s, k, item);
        }
        if !self.checks.is_empty() {
            s.push_str("\nchecks:\n");
            let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let r = c.residual.map(format_f64).unwrap_or_default();
                s.push_str(&format!(
                    "  {}  {:<w$}  {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    r
                ));
            }
        }
        let extra: Vec<_> = self
            .residuals
            .iter()
            .filter(|(k, _)| !self.checks.iter().any(|c| &c.name == k))
            .collect();
        if !extra.is_empty() {
            s.push_str("\nresiduals:\n");
            let w = extra.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in extra {
                s.push_str(&format!("  {:<w$}  {}\n", k, format_f64(*v)));
            }
        }
        s.push_str(&format!(
            "\nstatus: {}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        s
    }
}

fn render_item(s: &mut String, key: &str, item: &Item) {
    match item {
        Item::Scalar(x) => s.push_str(&format!("{key}: {}\n", format_f64(*x))),
        Item::Flag(b) => s.push_str(&format!("{key}: {b}\n")),
        Item::Text(t) => s.push_str(&format!("{key}: {t}\n")),
        Item::Count(n) => s.push_str(&format!("{key}: {n}\n")),
        Item::Labels(l) => s.push_str(&format!("{key}: {}\n", l.join(", "))),
        Item::Vector(v) => s.push_str(&format!("{key}: [{}]\n", join_f(v))),
        Item::Matrix(m) => {
            s.push_str(&format!("{key}:\n"));
            for row in m {
                s.push_str(&format!("  [{}]\n", join_f(row)));
            }
        }
        Item::Tensor {
            shape,
            labels,
            convention,
            data,
        } => {
            let nonzero = data.iter().filter(|x| **x != 0.0).count();
            s.push_str(&format!(
                "{key}: shape {:?}, {nonzero} nonzero entries ({convention})\n",
                shape
            ));
            let n = shape.first().copied().unwrap_or(0);
            for (flat, x) in data.iter().enumerate() {
                if *x == 0.0 {
                    continue;
                }
                let mut idx = Vec::with_capacity(shape.len());
                let mut rem = flat;
                for _ in 0..shape.len() {
                    idx.push(rem % n);
                    rem /= n;
                }
                idx.reverse();
                let names: Vec<&str> = idx.iter().map(|&i| labels[i].as_str()).collect();
                s.push_str(&format!("  [{}]  {}\n", names.join(", "), format_f64(*x)));
            }
        }
        Item::Table { headers, rows } => {
            s.push_str(&format!("{key}:\n"));
            let cells: Vec<Vec<String>> =
                rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = headers
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([h.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |vals: Vec<&str>| {
                let parts: Vec<String> = vals
                    .iter()
                    .zip(&widths)
                    .map(|(v, w)| format!("{v:<w$}"))
                    .collect();
                format!("  {}\n", parts.join("  ").trim_end())
            };
            s.push_str(&line(headers.iter().map(String::as_str).collect()));
            for r in &cells {
                s.push_str(&line(r.iter().map(String::as_str).collect()));
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_f64(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

fn join_f(v: &[f64]) -> String {
    v.iter()
        .map(|x| format_f64(*x))
        .collect::<Vec<_>>()
        .join(", ")
}
