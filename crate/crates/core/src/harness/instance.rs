//! Line-oriented instance files.
//!
//! ```text
//! char: 101
//! vars: x:1, y:1
//! base_relations: [x^3]
//! ideal: [x^2]
//! module k:
//!   twists: [0]
//!   relations:
//!   [x, y]
//! ```

use crate::exactlin::PrimeField;
use crate::graded::{parse_poly, GradedRing, HomogeneousIdeal, PresentedModule, RingError, Variable};
use crate::graded::module::ModuleError;
use crate::graded::{reduce_poly, Poly};
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputErrorKind {
    Syntax,
    Inhomogeneous,
    NotPrime,
    Structure,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct InputError {
    pub kind: InputErrorKind,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl InputError {
    fn new(kind: InputErrorKind, line: usize, col: usize, msg: impl Into<String>) -> Self {
        InputError {
            kind,
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// A polynomial as written, with its position (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub text: String,
    pub poly: Poly,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub name: String,
    pub line: usize,
    pub twists: Vec<i32>,
    pub rows: Vec<Vec<Located>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub characteristic: u64,
    pub vars: Vec<(String, u32)>,
    pub base_relations: Vec<Located>,
    pub ideal: Vec<Located>,
    pub modules: Vec<ModuleSpec>,
    pub hmax: Option<usize>,
    pub dmax: Option<i32>,
    pub checks: Option<Vec<String>>,
}

/// The rings and modules of an instance.
#[derive(Clone, Debug)]
pub struct BuiltInstance {
    pub q: Arc<GradedRing>,
    pub ideal: HomogeneousIdeal,
    pub modules: Vec<(String, PresentedModule)>,
}

/// Items of a bracketed list with their 1-based columns in the line.
fn split_list(s: &str, offset: usize, line: usize) -> Result<Vec<(String, usize)>, InputError> {
    let t = s.trim_start();
    let lead = s.len() - t.len();
    let t = t.trim_end();
    if !t.starts_with('[') || !t.ends_with(']') {
        return Err(InputError::new(InputErrorKind::Syntax, line, offset + lead + 1, "expected a bracketed list"));
    }
    let inner = &t[1..t.len() - 1];
    let base = offset + lead + 1;
    let mut out = Vec::new();
    if inner.trim().is_empty() {
        return Ok(out);
    }
    let mut start = 0;
    for (i, piece) in inner.split(',').enumerate() {
        let trimmed = piece.trim_start();
        let col = base + start + (piece.len() - trimmed.len()) + 1;
        let item = trimmed.trim_end();
        if item.is_empty() {
            return Err(InputError::new(InputErrorKind::Syntax, line, col, format!("empty list item {}", i + 1)));
        }
        out.push((item.to_string(), col));
        start += piece.len() + 1;
    }
    Ok(out)
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize, col: usize, what: &str) -> Result<T, InputError> {
    s.trim()
        .parse()
        .map_err(|_| InputError::new(InputErrorKind::Syntax, line, col, format!("expected {what}, found '{}'", s.trim())))
}

fn names(vars: &[(String, u32)]) -> Vec<String> {
    vars.iter().map(|(n, _)| n.clone()).collect()
}

fn parse_polys(
    items: Vec<(String, usize)>,
    vars: &[(String, u32)],
    line: usize,
) -> Result<Vec<Located>, InputError> {
    let names = names(vars);
    items
        .into_iter()
        .map(|(text, col)| {
            let poly = parse_poly(&text, &names)
                .map_err(|e| InputError::new(InputErrorKind::Syntax, line, col + e.col - 1, e.msg))?;
            Ok(Located { text, poly, line, col })
        })
        .collect()
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let mut inst = Instance {
        characteristic: PrimeField::DEFAULT_CHARACTERISTIC,
        vars: Vec::new(),
        base_relations: Vec::new(),
        ideal: Vec::new(),
        modules: Vec::new(),
        hmax: None,
        dmax: None,
        checks: None,
    };
    let mut seen_vars = false;
    let mut in_relations = false;
    let syntax = |line, col, msg: &str| InputError::new(InputErrorKind::Syntax, line, col, msg);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let body = content.trim_start();
        let indent = content.len() - body.len();
        let body = body.trim_end();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            if !in_relations {
                return Err(syntax(line, indent + 1, "relation row outside a 'relations:' block"));
            }
            let items = split_list(content, 0, line)?;
            let polys = parse_polys(items, &inst.vars, line)?;
            inst.modules.last_mut().unwrap().rows.push(polys);
            continue;
        }
        in_relations = false;
        let Some(colon) = body.find(':') else {
            return Err(syntax(line, indent + 1, "expected 'key: value'"));
        };
        let key = body[..colon].trim();
        let vcol = indent + colon + 1;
        let value = &content[vcol..];
        let needs_vars = |what: &str| -> Result<(), InputError> {
            if seen_vars {
                Ok(())
            } else {
                Err(syntax(line, indent + 1, &format!("'{what}' before 'vars'")))
            }
        };
        match key {
            "char" => {
                let p: u64 = parse_int(value, line, vcol + 1, "a prime")?;
                PrimeField::new(p).map_err(|_| {
                    InputError::new(InputErrorKind::NotPrime, line, vcol + 2, format!("characteristic {p} is not a prime below 2^31"))
                })?;
                inst.characteristic = p;
            }
            "vars" => {
                let mut start = 0;
                for piece in value.split(',') {
                    let col = vcol + start + (piece.len() - piece.trim_start().len()) + 1;
                    start += piece.len() + 1;
                    let item = piece.trim();
                    let Some((name, deg)) = item.split_once(':') else {
                        return Err(syntax(line, col, "expected 'name:degree'"));
                    };
                    let name = name.trim();
                    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
                        return Err(syntax(line, col, &format!("invalid variable name '{name}'")));
                    }
                    let d: u32 = parse_int(deg, line, col, "a positive degree")?;
                    if d == 0 {
                        return Err(syntax(line, col, "variable degrees must be positive"));
                    }
                    if inst.vars.iter().any(|(n, _)| n == name) {
                        return Err(syntax(line, col, &format!("duplicate variable '{name}'")));
                    }
                    inst.vars.push((name.to_string(), d));
                }
                seen_vars = true;
            }
            "base_relations" | "ideal" => {
                needs_vars(key)?;
                let polys = parse_polys(split_list(value, vcol, line)?, &inst.vars, line)?;
                if key == "ideal" {
                    inst.ideal = polys;
                } else {
                    inst.base_relations = polys;
                }
            }
            "hmax" => inst.hmax = Some(parse_int(value, line, vcol + 1, "an integer")?),
            "dmax" => inst.dmax = Some(parse_int(value, line, vcol + 1, "an integer")?),
            "checks" => {
                let v = value.trim().trim_start_matches('[').trim_end_matches(']');
                inst.checks = Some(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
            }
            "twists" | "relations" => {
                let Some(m) = inst.modules.last_mut() else {
                    return Err(syntax(line, indent + 1, &format!("'{key}' outside a module block")));
                };
                if key == "twists" {
                    m.twists = split_list(value, vcol, line)?
                        .into_iter()
                        .map(|(s, col)| parse_int(&s, line, col, "an integer twist"))
                        .collect::<Result<_, _>>()?;
                } else {
                    if !value.trim().is_empty() {
                        return Err(syntax(line, vcol + 1, "rows go on the following lines"));
                    }
                    in_relations = true;
                }
            }
            _ if key.starts_with("module ") || key == "module" => {
                needs_vars("module")?;
                let name = key["module".len()..].trim();
                if name.is_empty() {
                    return Err(syntax(line, indent + 1, "module needs a name"));
                }
                if inst.modules.iter().any(|m| m.name == name) || name == "k" {
                    return Err(syntax(line, indent + 8, &format!("module name '{name}' is taken")));
                }
                if !value.trim().is_empty() {
                    return Err(syntax(line, vcol + 1, "unexpected text after module header"));
                }
                inst.modules.push(ModuleSpec {
                    name: name.to_string(),
                    line,
                    twists: Vec::new(),
                    rows: Vec::new(),
                });
            }
            _ => return Err(syntax(line, indent + 1, &format!("unknown key '{key}'"))),
        }
    }
    if !seen_vars {
        return Err(syntax(text.lines().count().max(1), 1, "missing 'vars'"));
    }
    inst.build(inst.field())?;
    Ok(inst)
}

fn homogeneity(field: PrimeField, items: &[Located], weights: &[u32]) -> Result<(), InputError> {
    for l in items {
        let p = reduce_poly(field, &l.poly);
        if !p.is_zero() && p.homogeneous_degree(weights).is_none() {
            return Err(InputError::new(
                InputErrorKind::Inhomogeneous,
                l.line,
                l.col,
                format!("'{}' is not homogeneous", l.text),
            ));
        }
    }
    Ok(())
}

impl Instance {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.characteristic).expect("validated at parse time")
    }

    /// Builds `Q`, `I` and the modules over `F_p`.
    pub fn build(&self, field: PrimeField) -> Result<BuiltInstance, InputError> {
        let weights: Vec<u32> = self.vars.iter().map(|v| v.1).collect();
        homogeneity(field, &self.base_relations, &weights)?;
        homogeneity(field, &self.ideal, &weights)?;
        for m in &self.modules {
            for row in &m.rows {
                homogeneity(field, row, &weights)?;
            }
        }
        let vars = self
            .vars
            .iter()
            .map(|(n, d)| Variable {
                name: n.clone(),
                degree: *d,
            })
            .collect();
        let ring_err = |items: &[Located], e: RingError| {
            let (line, col) = match e {
                RingError::Inhomogeneous { index } | RingError::ConstantGenerator { index } => {
                    items.get(index).map_or((0, 0), |l| (l.line, l.col))
                }
                _ => items.first().map_or((0, 0), |l| (l.line, l.col)),
            };
            InputError::new(InputErrorKind::Structure, line, col, e.to_string())
        };
        let q = GradedRing::new(field, vars, self.base_relations.iter().map(|l| l.poly.clone()).collect())
            .map_err(|e| ring_err(&self.base_relations, e))?;
        let ideal = HomogeneousIdeal::new(q.clone(), self.ideal.iter().map(|l| l.poly.clone()).collect())
            .map_err(|e| ring_err(&self.ideal, e))?;
        let mut modules = Vec::new();
        for m in &self.modules {
            if m.twists.is_empty() {
                return Err(InputError::new(InputErrorKind::Structure, m.line, 1, format!("module '{}' has no twists", m.name)));
            }
            let rows: Vec<Vec<Poly>> = m.rows.iter().map(|r| r.iter().map(|l| l.poly.clone()).collect()).collect();
            let pm = PresentedModule::new(q.clone(), m.twists.clone(), rows).map_err(|e| {
                let (line, col) = match &e {
                    ModuleError::Inhomogeneous { row, col } => (m.rows[*row][*col].line, m.rows[*row][*col].col),
                    ModuleError::InconsistentColumn { col } => m.rows.first().map_or((m.line, 1), |r| (r[*col].line, r[*col].col)),
                    ModuleError::RaggedRow { row, .. } => (m.rows[*row].first().map_or(m.line, |l| l.line), 1),
                    _ => (m.line, 1),
                };
                let kind = if matches!(e, ModuleError::Inhomogeneous { .. } | ModuleError::InconsistentColumn { .. }) {
                    InputErrorKind::Inhomogeneous
                } else {
                    InputErrorKind::Structure
                };
                InputError::new(kind, line, col, format!("module '{}': {e}", m.name))
            })?;
            modules.push((m.name.clone(), pm));
        }
        Ok(BuiltInstance { q, ideal, modules })
    }

    /// Normalized text: same grammar, polynomials re-printed, comments dropped.
    pub fn canonical_text(&self) -> String {
        let names = names(&self.vars);
        let list = |items: &[Located]| -> String {
            let parts: Vec<String> = items.iter().map(|l| l.poly.display(&names).to_string()).collect();
            format!("[{}]", parts.join(", "))
        };
        let mut s = String::new();
        s.push_str(&format!("char: {}\n", self.characteristic));
        let vars: Vec<String> = self.vars.iter().map(|(n, d)| format!("{n}:{d}")).collect();
        s.push_str(&format!("vars: {}\n", vars.join(", ")));
        if !self.base_relations.is_empty() {
            s.push_str(&format!("base_relations: {}\n", list(&self.base_relations)));
        }
        s.push_str(&format!("ideal: {}\n", list(&self.ideal)));
        if let Some(h) = self.hmax {
            s.push_str(&format!("hmax: {h}\n"));
        }
        if let Some(d) = self.dmax {
            s.push_str(&format!("dmax: {d}\n"));
        }
        if let Some(c) = &self.checks {
            s.push_str(&format!("checks: [{}]\n", c.join(", ")));
        }
        for m in &self.modules {
            s.push_str(&format!("module {}:\n", m.name));
            let tw: Vec<String> = m.twists.iter().map(|t| t.to_string()).collect();
            s.push_str(&format!("  twists: [{}]\n", tw.join(", ")));
            s.push_str("  relations:\n");
            for row in &m.rows {
                s.push_str(&format!("  {}\n", list(row)));
            }
        }
        s
    }

    /// Hex SHA-256 of [`Self::canonical_text`].
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}
