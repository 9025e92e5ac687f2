//! Polynomials with integer coefficients, as written in instance files.
//!
//! These are input/output objects only; arithmetic in a quotient ring goes
//! through [`super::RingElem`].

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exponent vector, one entry per ring variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {col}: {msg}")]
pub struct PolyParseError {
    /// 1-based column within the parsed text.
    pub col: usize,
    pub msg: String,
}

/// Sparse polynomial with integer coefficients; zero terms are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(exps: Monomial, coeff: i64) -> Self {
        let mut p = Poly::zero();
        p.add_term(exps, coeff);
        p
    }

    pub fn add_term(&mut self, exps: Monomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exps.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Terms in descending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Weighted degree of each term, deduplicated and sorted.
    pub fn term_degrees(&self, weights: &[u32]) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(|m| weighted_degree(m, weights)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// `Some(d)` if every term has weighted degree `d`; `None` for the zero polynomial
    /// or an inhomogeneous one.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        match self.term_degrees(weights).as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub fn weighted_degree(m: &[u32], weights: &[u32]) -> u32 {
    m.iter().zip(weights).map(|(e, w)| e * w).sum()
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    _ => factors.push(format!("{}^{}", self.names[v], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyParseError {
        PolyParseError {
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn number(&mut self) -> Result<u64, PolyParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PolyParseError {
                col: start + 1,
                msg: "integer out of range".into(),
            })
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let is_start = |b: u8| b.is_ascii_alphabetic() || b == b'_';
        if self.pos < self.src.len() && is_start(self.src[self.pos]) {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
        } else {
            None
        }
    }
}

/// Parses `3*x^2*y - y^3` style input over the given variable names.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly, PolyParseError> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut poly = Poly::zero();
    let mut sign = 1i64;
    match lx.peek() {
        Some(b'-') => {
            sign = -1;
            lx.pos += 1;
        }
        Some(b'+') => lx.pos += 1,
        None => return Err(lx.err("empty polynomial")),
        _ => {}
    }
    loop {
        let (m, c) = parse_term(&mut lx, vars)?;
        let c = c
            .checked_mul(sign)
            .ok_or_else(|| lx.err("coefficient overflow"))?;
        poly.add_term(m, c);
        match lx.peek() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(ch) => return Err(lx.err(format!("unexpected character '{}'", ch as char))),
        }
        lx.pos += 1;
    }
    Ok(poly)
}

fn parse_term(lx: &mut Lexer<'_>, vars: &[String]) -> Result<(Monomial, i64), PolyParseError> {
    let mut exps = vec![0u32; vars.len()];
    let mut coeff = 1i64;
    loop {
        match lx.peek() {
            Some(b) if b.is_ascii_digit() => {
                let n = lx.number()?;
                coeff = i64::try_from(n)
                    .ok()
                    .and_then(|n| coeff.checked_mul(n))
                    .ok_or_else(|| lx.err("coefficient overflow"))?;
            }
            Some(_) => {
                let at = lx.pos;
                let name = lx.ident().ok_or_else(|| lx.err("expected a variable or integer"))?;
                let v = vars.iter().position(|n| n == name).ok_or(PolyParseError {
                    col: at + 1,
                    msg: format!("unknown variable '{name}'"),
                })?;
                let mut e = 1u32;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    e = u32::try_from(lx.number()?).map_err(|_| lx.err("exponent out of range"))?;
                }
                exps[v] = exps[v]
                    .checked_add(e)
                    .ok_or_else(|| lx.err("exponent out of range"))?;
            }
            None => return Err(lx.err("expected a term")),
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
        } else {
            break;
        }
    }
    Ok((exps, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_and_prints() {
        let p = parse_poly("3*x^2*y - y^3", &xy()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.display(&xy()).to_string(), "3*x^2*y - y^3");
        assert_eq!(p.homogeneous_degree(&[1, 1]), Some(3));
        let q = parse_poly("-x*y + 2", &xy()).unwrap();
        assert_eq!(q.display(&xy()).to_string(), "-x*y + 2");
        assert_eq!(q.homogeneous_degree(&[1, 1]), None);
    }

    #[test]
    fn cancellation_gives_zero() {
        let p = parse_poly("x*y - y*x", &xy()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.display(&xy()).to_string(), "0");
        assert!(parse_poly("0", &xy()).unwrap().is_zero());
    }

    #[test]
    fn weighted_homogeneity() {
        let p = parse_poly("x^3 + y", &xy()).unwrap();
        assert_eq!(p.homogeneous_degree(&[1, 3]), Some(3));
        assert_eq!(p.homogeneous_degree(&[1, 1]), None);
    }

    #[test]
    fn error_columns() {
        let e = parse_poly("x + z", &xy()).unwrap_err();
        assert_eq!(e.col, 5);
        let e = parse_poly("x +", &xy()).unwrap_err();
        assert_eq!(e.col, 4);
        let e = parse_poly("x ^ y", &xy()).unwrap_err();
        assert_eq!(e.col, 5);
        assert!(parse_poly("", &xy()).is_err());
        assert!(parse_poly("x y", &xy()).is_err());
    }
}
