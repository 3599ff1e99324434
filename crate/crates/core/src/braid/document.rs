//! Text serialization of braidings.
//!
//! ```text
//! qtrace-braiding v1
//! dim 2
//! nu q^-2
//! entry 1 1 ; 1 1 ; -1
//! entry 2 1 ; 1 2 ; -q^-1
//! ```
//!
//! Each `entry` line is `row-tuple ; column-tuple ; scalar`, one per nonzero
//! matrix entry. A braiding that is not in Hecke form is written with
//! `quadratic λ1 ; λ2` instead of `nu`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Braiding, BraidingError};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, ScalarError};

pub const BRAIDING_HEADER: &str = "qtrace-braiding v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidingDocError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Scalar { line: usize, source: ScalarError },
    #[error(transparent)]
    Braiding(#[from] BraidingError),
}

impl Braiding {
    /// Deterministic text form; entries sorted by row then column tuple.
    pub fn to_document(&self) -> String {
        let d = self.dim();
        let mut out = String::new();
        writeln!(out, "{BRAIDING_HEADER}").unwrap();
        writeln!(out, "dim {d}").unwrap();
        match self.hecke_param() {
            Some(nu) => writeln!(out, "nu {nu}").unwrap(),
            None => {
                let (a, b) = self.eigenvalues();
                writeln!(out, "quadratic {a} ; {b}").unwrap()
            }
        }
        let m = self.matrix();
        for r in 0..d * d {
            for c in 0..d * d {
                let v = &m[(r, c)];
                if !v.is_zero() {
                    writeln!(out, "entry {} {} ; {} {} ; {v}", r / d + 1, r % d + 1, c / d + 1, c % d + 1).unwrap();
                }
            }
        }
        out
    }
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, BraidingDocError> {
    Err(BraidingDocError::Syntax { line, msg: msg.into() })
}

fn scalar(line: usize, s: &str) -> Result<Scalar, BraidingDocError> {
    s.trim().parse().map_err(|source| BraidingDocError::Scalar { line, source })
}

fn pair(line: usize, s: &str, d: usize) -> Result<usize, BraidingDocError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 2 {
        return syntax(line, format!("expected two indices, got {s:?}"));
    }
    let mut idx = 0;
    for p in parts {
        let Ok(a) = p.parse::<usize>() else {
            return syntax(line, format!("bad index {p:?}"));
        };
        if a == 0 || a > d {
            return syntax(line, format!("index {a} outside 1..={d}"));
        }
        idx = idx * d + (a - 1);
    }
    Ok(idx)
}

/// Parses and validates a braiding document.
pub fn parse_braiding_document(src: &str) -> Result<Braiding, BraidingDocError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, l)) if l == BRAIDING_HEADER => {}
        Some((n, l)) => return syntax(n, format!("expected header {BRAIDING_HEADER:?}, got {l:?}")),
        None => return syntax(0, "empty document"),
    }
    let mut dim: Option<usize> = None;
    let mut quad: Option<(Scalar, Scalar)> = None;
    let mut matrix: Option<Matrix> = None;
    for (n, l) in lines {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match key {
            "dim" => {
                let Ok(d) = rest.trim().parse::<usize>() else {
                    return syntax(n, "bad dimension");
                };
                if d == 0 || dim.is_some() {
                    return syntax(n, "dimension must be positive and given once");
                }
                dim = Some(d);
                matrix = Some(Matrix::zeros(d * d, d * d));
            }
            "nu" => quad = Some((Scalar::from_int(-1), scalar(n, rest)?)),
            "quadratic" => {
                let Some((a, b)) = rest.split_once(';') else {
                    return syntax(n, "expected `quadratic λ1 ; λ2`");
                };
                quad = Some((scalar(n, a)?, scalar(n, b)?));
            }
            "entry" => {
                let (Some(d), Some(m)) = (dim, matrix.as_mut()) else {
                    return syntax(n, "entry before dim");
                };
                let parts: Vec<&str> = rest.splitn(3, ';').collect();
                if parts.len() != 3 {
                    return syntax(n, "expected `entry a b ; c d ; value`");
                }
                let r = pair(n, parts[0], d)?;
                let c = pair(n, parts[1], d)?;
                m[(r, c)] = scalar(n, parts[2])?;
            }
            other => return syntax(n, format!("unknown key {other:?}")),
        }
    }
    let Some(m) = matrix else {
        return syntax(0, "missing dim");
    };
    let Some((a, b)) = quad else {
        return syntax(0, "missing nu or quadratic");
    };
    if a == Scalar::from_int(-1) && b.is_zero() {
        return Err(BraidingError::ZeroParameter.into());
    }
    Ok(Braiding::with_quadratic(m, a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{builtin_c, builtin_c_dual, flip};

    #[test]
    fn round_trips() {
        for b in [builtin_c(1), builtin_c(2).negate().unwrap(), builtin_c_dual(1), flip(3)] {
            let doc = b.to_document();
            let back = parse_braiding_document(&doc).unwrap();
            assert_eq!(back, b);
            assert_eq!(back.to_document(), doc);
        }
    }

    #[test]
    fn reports_bad_input() {
        assert!(matches!(parse_braiding_document(""), Err(BraidingDocError::Syntax { .. })));
        let bad = "qtrace-braiding v1\ndim 2\nnu q\nentry 1 1 ; 1 1 ; 1\nentry 1 2 ; 1 2 ; 1\nentry 2 1 ; 2 1 ; 1\nentry 2 2 ; 2 2 ; 1\n";
        assert!(matches!(parse_braiding_document(bad), Err(BraidingDocError::Braiding(BraidingError::Axioms(_)))));
        let bad_idx = "qtrace-braiding v1\ndim 2\nnu 1\nentry 3 1 ; 1 1 ; 1\n";
        assert!(matches!(parse_braiding_document(bad_idx), Err(BraidingDocError::Syntax { line: 4, .. })));
    }
}
