//! Parsing of vector expressions such as `0.5*X^v + Z^c - Y^c`.
//!
//! ```text
//! expr := ["+"|"-"] term (("+"|"-") term)*
//! term := [coef "*"] label lift
//! lift := "^c" | "^v"        (lifted expressions only)
//! ```

use thiserror::Error;

use crate::lie::Vector;
use crate::tangent::{LiftedVector, TangentLieAlgebra};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lift {
    Complete,
    Vertical,
}

struct Term {
    coef: f64,
    index: usize,
    lift: Option<Lift>,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    labels: &'a [String],
    lifted: bool,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Vec<Term>, ExprError> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut sign = 1.0;
        if let Some(c @ ('+' | '-')) = self.peek() {
            sign = if c == '-' { -1.0 } else { 1.0 };
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let mut t = self.term()?;
            t.coef *= sign;
            terms.push(t);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                Some(c) => return self.err(format!("expected '+' or '-', found '{c}'")),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let mut coef = 1.0;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
                self.pos += 1;
            }
            // exponent part, e.g. 1e-3
            if matches!(self.peek(), Some('e' | 'E')) {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(), Some('+' | '-')) {
                    self.pos += 1;
                }
                if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                } else {
                    self.pos = save;
                }
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            coef = match text.parse::<f64>() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = start;
                    return self.err(format!("invalid coefficient '{text}'"));
                }
            };
            self.skip_ws();
            if self.peek() != Some('*') {
                return self.err("expected '*' after coefficient");
            }
            self.pos += 1;
            self.skip_ws();
        }

        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a basis label");
        }
        let label: String = self.chars[start..self.pos].iter().collect();
        let index = match self.labels.iter().position(|l| *l == label) {
            Some(i) => i,
            None => {
                self.pos = start;
                return self.err(format!("unknown basis label '{label}'"));
            }
        };

        let lift = if self.lifted {
            if self.peek() != Some('^') {
                return self.err("expected '^c' or '^v'");
            }
            self.pos += 1;
            let l = match self.peek() {
                Some('c') => Lift::Complete,
                Some('v') => Lift::Vertical,
                Some(c) => return self.err(format!("unknown lift '^{c}', expected '^c' or '^v'")),
                None => return self.err("expected 'c' or 'v' after '^'"),
            };
            self.pos += 1;
            Some(l)
        } else {
            if self.peek() == Some('^') {
                return self.err("lift suffix not allowed in a base expression");
            }
            None
        };
        Ok(Term { coef, index, lift })
    }
}

/// Parses a lifted-vector expression against the input labels of `t`.
/// Vertical terms use the unnormalized convention: `X^v` has `g~`-norm `|X|₂`.
pub fn parse_lifted_expr(t: &TangentLieAlgebra, s: &str) -> Result<LiftedVector, ExprError> {
    let n = t.n();
    let terms = Parser {
        chars: s.chars().collect(),
        pos: 0,
        labels: t.input().labels(),
        lifted: true,
    }
    .parse()?;
    let mut complete = Vector::zeros(n);
    let mut vertical = Vector::zeros(n);
    for term in terms {
        match term.lift {
            Some(Lift::Complete) => complete[term.index] += term.coef,
            _ => vertical[term.index] += term.coef,
        }
    }
    Ok(LiftedVector::from_pair(t, &complete, &vertical).expect("dimensions agree"))
}

/// Parses a base-vector expression (no lift suffixes) against `labels`.
pub fn parse_base_expr(labels: &[String], s: &str) -> Result<Vector, ExprError> {
    let terms = Parser {
        chars: s.chars().collect(),
        pos: 0,
        labels,
        lifted: false,
    }
    .parse()?;
    let mut v = Vector::zeros(labels.len());
    for term in terms {
        v[term.index] += term.coef;
    }
    Ok(v)
}

/// True when `s` uses lift suffixes.
pub fn is_lifted_expr(s: &str) -> bool {
    s.contains('^')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::Metric;
    use crate::tangent::build_tangent;

    fn t() -> TangentLieAlgebra {
        build_tangent(
            &catalog::heisenberg(),
            &Metric::identity(3),
            &Metric::diagonal(&[2., 2., 1.]).unwrap(),
        )
        .unwrap()
    }

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn single_terms() {
        let t = t();
        let got = parse_lifted_expr(&t, "X^c").unwrap();
        assert_eq!(got, LiftedVector::complete(&t, &v(&[1., 0., 0.])).unwrap());
        let got = parse_lifted_expr(&t, "Y^v").unwrap();
        assert_eq!(got, LiftedVector::vertical(&t, &v(&[0., 1., 0.])).unwrap());
    }

    #[test]
    fn mixed() {
        let t = t();
        let got = parse_lifted_expr(&t, " 0.5*X^v + Z^c").unwrap();
        let (c, vv) = got.decompose(&t);
        assert_eq!(c, v(&[0., 0., 1.]));
        assert!((vv - v(&[0.5, 0., 0.])).amax() < 1e-15);
        let got = parse_lifted_expr(&t, "-Y^c - 2e-1 * Y^c").unwrap();
        let (c, _) = got.decompose(&t);
        assert!((c - v(&[0., -1.2, 0.])).amax() < 1e-15);
    }

    #[test]
    fn errors_carry_columns() {
        let t = t();
        let e = parse_lifted_expr(&t, "X^w").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_lifted_expr(&t, "X^c + W^v").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse_lifted_expr(&t, "X").unwrap_err();
        assert_eq!(e.column, 2);
        let e = parse_lifted_expr(&t, "").unwrap_err();
        assert_eq!(e.column, 1);
        let e = parse_lifted_expr(&t, "2 X^c").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(parse_lifted_expr(&t, "X^c +").is_err());
    }

    #[test]
    fn base_expressions() {
        let labels = ["X", "Y", "Z"].map(String::from);
        assert_eq!(
            parse_base_expr(&labels, "Z - 3*X").unwrap(),
            v(&[-3., 0., 1.])
        );
        assert!(parse_base_expr(&labels, "Z^v").is_err());
        assert!(is_lifted_expr("Z^v"));
        assert!(!is_lifted_expr("Z"));
    }
}
