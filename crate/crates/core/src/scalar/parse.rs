use num::{BigInt, BigRational};

use super::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                out.push((start, Tok::Num(n)));
                continue;
            }
            b'q' => Tok::Q,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                return Err(ScalarError::Parse { pos: i, msg: format!("unexpected character {:?}", c as char) })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScalarError> {
        Err(ScalarError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| ScalarError::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                // implicit multiplication: `2q`, `3(1+q)`, `q(1-q)`
                Some(Tok::Num(_)) | Some(Tok::Q) | Some(Tok::LParen) => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        let e = self.exponent()?;
        if e < 0 && base.is_zero() {
            return Err(ScalarError::Parse { pos: at, msg: "zero raised to a negative power".into() });
        }
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<i32, ScalarError> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.err("expected integer exponent");
        };
        self.pos += 1;
        let Ok(mut e) = i32::try_from(n) else {
            return self.err("exponent out of range");
        };
        if neg {
            e = -e;
        }
        if paren {
            if self.peek() != Some(&Tok::RParen) {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Scalar::from_rational(BigRational::from_integer(n)))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(Scalar::q())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in `q` built from integers, `q^k`, `+ - * /`,
/// integer powers and parentheses, e.g. `(1 - q^2)/(1 + q)`.
pub fn parse_scalar(src: &str) -> Result<Scalar, ScalarError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        let a = parse_scalar("(1 - q^2)/(1 + q)").unwrap();
        assert_eq!(a, parse_scalar("1 - q").unwrap());
        assert_eq!(parse_scalar("2q").unwrap(), parse_scalar("q + q").unwrap());
        assert_eq!(parse_scalar("q^-2").unwrap(), Scalar::q_pow(-2));
        assert_eq!(parse_scalar("q^(-2)").unwrap(), Scalar::q_pow(-2));
        assert_eq!(parse_scalar("-q^2").unwrap(), -Scalar::q_pow(2));
        assert_eq!(parse_scalar("(1+q)^-1 * (1+q)").unwrap(), Scalar::one());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_scalar("1 +"), Err(ScalarError::Parse { .. })));
        assert!(matches!(parse_scalar("x"), Err(ScalarError::Parse { pos: 0, .. })));
        assert!(matches!(parse_scalar("1/(q - q)"), Err(ScalarError::Parse { .. })));
        assert!(matches!(parse_scalar("(1 + q"), Err(ScalarError::Parse { .. })));
    }
}
