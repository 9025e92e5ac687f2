//! Standard-graded quotient rings `k[x_1..x_e]/J` over `F_p`.
//!
//! Each graded piece `Q_d` is computed on demand: the span of `J` in degree `d`
//! is row reduced over the degree-`d` monomials, ordered descending (lex, first
//! variable largest). Pivots are the leading monomials, and the remaining
//! standard monomials form the basis in which ring elements are stored.

pub mod ideal;
pub mod module;
pub mod poly;

use crate::exactlin::{Echelon, PrimeField};
use poly::{weighted_degree, Monomial};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};
use thiserror::Error;

pub use ideal::HomogeneousIdeal;
pub use module::PresentedModule;
pub use poly::{parse_poly, Poly, PolyParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("variable '{0}' must have positive degree")]
    ZeroDegreeVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("polynomial {index} is not homogeneous")]
    Inhomogeneous { index: usize },
    #[error("polynomial {index} has degree 0")]
    ConstantGenerator { index: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("polynomial has {found} variables, ring has {expected}")]
    Arity { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

/// One graded piece `Q_d` with its standard basis and monomial normal forms.
#[derive(Debug)]
pub struct DegreePiece {
    pub degree: u32,
    /// All monomials of degree `d`, in descending order.
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Indices (into `monomials`) of the standard monomials.
    pub basis: Vec<usize>,
    /// Normal form of each monomial, as `(basis position, coefficient)` pairs.
    nf: Vec<Vec<(u32, u32)>>,
}

impl DegreePiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_monomial(&self, pos: usize) -> &Monomial {
        &self.monomials[self.basis[pos]]
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn normal_form(&self, mono_index: usize) -> &[(u32, u32)] {
        &self.nf[mono_index]
    }
}

/// Homogeneous element of `Q`, stored in the standard basis of `Q_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    pub degree: u32,
    pub coeffs: Vec<u32>,
}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The scalar if this element lives in degree 0.
    pub fn constant(&self) -> Option<u32> {
        (self.degree == 0).then(|| self.coeffs.first().copied().unwrap_or(0))
    }
}

/// `k[x_1..x_e]/J` with `J` generated by homogeneous polynomials of positive degree.
pub struct GradedRing {
    field: PrimeField,
    vars: Vec<Variable>,
    relations: Vec<Poly>,
    relation_degrees: Vec<u32>,
    pieces: RwLock<Vec<Arc<DegreePiece>>>,
}

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedRing({})", self.descriptor())
    }
}

fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], v: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if v == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[v];
        for e in (0..=left / w).rev() {
            cur[v] = e;
            rec(weights, v + 1, left - e * w, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, d, &mut cur, &mut out);
    out
}

impl GradedRing {
    /// Builds `k[vars]/(relations)`; zero relations are dropped.
    pub fn new(
        field: PrimeField,
        vars: Vec<Variable>,
        relations: Vec<Poly>,
    ) -> Result<Arc<Self>, RingError> {
        for (i, v) in vars.iter().enumerate() {
            if v.degree == 0 {
                return Err(RingError::ZeroDegreeVariable(v.name.clone()));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(RingError::DuplicateVariable(v.name.clone()));
            }
        }
        let weights: Vec<u32> = vars.iter().map(|v| v.degree).collect();
        let mut kept = Vec::new();
        let mut degrees = Vec::new();
        for (index, r) in relations.into_iter().enumerate() {
            check_arity(&r, vars.len())?;
            let reduced = reduce_poly(field, &r);
            if reduced.is_zero() {
                continue;
            }
            let d = reduced
                .homogeneous_degree(&weights)
                .ok_or(RingError::Inhomogeneous { index })?;
            if d == 0 {
                return Err(RingError::ConstantGenerator { index });
            }
            kept.push(reduced);
            degrees.push(d);
        }
        Ok(Arc::new(GradedRing {
            field,
            vars,
            relations: kept,
            relation_degrees: degrees,
            pieces: RwLock::new(Vec::new()),
        }))
    }

    /// The polynomial ring `k[vars]`.
    pub fn polynomial(field: PrimeField, vars: &[(&str, u32)]) -> Arc<Self> {
        let vars = vars
            .iter()
            .map(|&(n, d)| Variable {
                name: n.to_string(),
                degree: d,
            })
            .collect();
        Self::new(field, vars, Vec::new()).expect("valid polynomial ring")
    }

    /// Convenience constructor parsing relation strings; panics on malformed input.
    pub fn parse(field: PrimeField, vars: &[(&str, u32)], relations: &[&str]) -> Arc<Self> {
        let vs: Vec<Variable> = vars
            .iter()
            .map(|&(n, d)| Variable {
                name: n.to_string(),
                degree: d,
            })
            .collect();
        let names: Vec<String> = vs.iter().map(|v| v.name.clone()).collect();
        let rels = relations
            .iter()
            .map(|s| parse_poly(s, &names).expect("relation parses"))
            .collect();
        Self::new(field, vs, rels).expect("valid ring")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.degree).collect()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    /// Largest degree among variables and relations.
    pub fn max_structure_degree(&self) -> u32 {
        self.vars
            .iter()
            .map(|v| v.degree)
            .chain(self.relation_degrees.iter().copied())
            .max()
            .unwrap_or(1)
    }

    /// Canonical text description, used in hashes and reports.
    pub fn descriptor(&self) -> String {
        let names = self.var_names();
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}:{}", v.name, v.degree))
            .collect();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.display(&names).to_string())
            .collect();
        format!(
            "char {}; vars {}; relations [{}]",
            self.field.modulus(),
            vars.join(", "),
            rels.join(", ")
        )
    }

    pub fn piece(&self, d: u32) -> Arc<DegreePiece> {
        if let Some(p) = self.pieces.read().unwrap().get(d as usize) {
            return p.clone();
        }
        let mut guard = self.pieces.write().unwrap();
        while guard.len() <= d as usize {
            let next = guard.len() as u32;
            let piece = self.compute_piece(next, &guard);
            guard.push(Arc::new(piece));
        }
        guard[d as usize].clone()
    }

    fn compute_piece(&self, d: u32, lower: &[Arc<DegreePiece>]) -> DegreePiece {
        let f = self.field;
        let weights = self.weights();
        let monomials = monomials_of_degree(&weights, d);
        let index: HashMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let n = monomials.len();
        let mut span = Echelon::new(f, n);
        for (v, var) in self.vars.iter().enumerate() {
            if var.degree > d {
                continue;
            }
            let prev = &lower[(d - var.degree) as usize];
            let mut is_std = vec![false; prev.monomials.len()];
            for &b in &prev.basis {
                is_std[b] = true;
            }
            for (wi, w) in prev.monomials.iter().enumerate() {
                if is_std[wi] {
                    continue;
                }
                let mut vec = vec![0u32; n];
                let mut xw = w.clone();
                xw[v] += 1;
                vec[index[&xw]] = 1;
                for &(pos, c) in &prev.nf[wi] {
                    let mut xb = prev.basis_monomial(pos as usize).clone();
                    xb[v] += 1;
                    let k = index[&xb];
                    vec[k] = f.sub(vec[k], c);
                }
                span.insert(vec);
            }
        }
        for (r, &rd) in self.relations.iter().zip(&self.relation_degrees) {
            if rd == d {
                let mut vec = vec![0u32; n];
                for (m, c) in r.terms() {
                    vec[index[m]] = f.from_i64(c);
                }
                span.insert(vec);
            }
        }
        let rows = span.reduced_basis();
        let pivots = span.pivots();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let basis: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let mut pos_of = vec![u32::MAX; n];
        for (p, &b) in basis.iter().enumerate() {
            pos_of[b] = p as u32;
        }
        let mut nf: Vec<Vec<(u32, u32)>> = (0..n)
            .map(|i| {
                if is_pivot[i] {
                    Vec::new()
                } else {
                    vec![(pos_of[i], 1)]
                }
            })
            .collect();
        for (row, &c) in rows.iter().zip(&pivots) {
            nf[c] = row
                .iter()
                .enumerate()
                .filter(|&(j, &x)| x != 0 && j != c)
                .map(|(j, &x)| (pos_of[j], f.neg(x)))
                .collect();
        }
        DegreePiece {
            degree: d,
            monomials,
            index,
            basis,
            nf,
        }
    }

    /// `dim_k Q_d`; zero for negative `d`.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.piece(d as u32).dim()
        }
    }

    pub fn degree_basis(&self, d: u32) -> Vec<Monomial> {
        let p = self.piece(d);
        p.basis.iter().map(|&i| p.monomials[i].clone()).collect()
    }

    pub fn zero(&self, d: u32) -> RingElem {
        RingElem {
            degree: d,
            coeffs: vec![0; self.piece(d).dim()],
        }
    }

    pub fn one(&self) -> RingElem {
        RingElem {
            degree: 0,
            coeffs: vec![1],
        }
    }

    pub fn scalar(&self, c: u32) -> RingElem {
        RingElem {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn var(&self, v: usize) -> RingElem {
        let mut m = vec![0; self.nvars()];
        m[v] = 1;
        self.monomial_elem(&m)
    }

    pub fn monomial_elem(&self, m: &Monomial) -> RingElem {
        let d = weighted_degree(m, &self.weights());
        let p = self.piece(d);
        let mut coeffs = vec![0; p.dim()];
        let idx = p.monomial_index(m).expect("monomial of matching degree");
        for &(pos, c) in p.normal_form(idx) {
            coeffs[pos as usize] = c;
        }
        RingElem { degree: d, coeffs }
    }

    /// Element of `Q_degree` represented by `poly`; the zero polynomial is accepted in any degree.
    pub fn elem_in_degree(&self, poly: &Poly, degree: u32) -> Result<RingElem, RingError> {
        check_arity(poly, self.nvars())?;
        let weights = self.weights();
        let f = self.field;
        let p = self.piece(degree);
        let mut coeffs = vec![0; p.dim()];
        for (m, c) in poly.terms() {
            let found = weighted_degree(m, &weights);
            if found != degree {
                return Err(RingError::DegreeMismatch {
                    expected: degree,
                    found,
                });
            }
            let c = f.from_i64(c);
            for &(pos, a) in p.normal_form(p.monomial_index(m).unwrap()) {
                let k = pos as usize;
                coeffs[k] = f.add(coeffs[k], f.mul(a, c));
            }
        }
        Ok(RingElem { degree, coeffs })
    }

    /// Element represented by a homogeneous nonzero polynomial.
    pub fn to_elem(&self, poly: &Poly) -> Result<RingElem, RingError> {
        let d = poly
            .homogeneous_degree(&self.weights())
            .ok_or(RingError::Inhomogeneous { index: 0 })?;
        self.elem_in_degree(poly, d)
    }

    pub fn elem_to_poly(&self, a: &RingElem) -> Poly {
        let p = self.piece(a.degree);
        let mut out = Poly::zero();
        for (pos, &c) in a.coeffs.iter().enumerate() {
            if c != 0 {
                out.add_term(p.basis_monomial(pos).clone(), self.field.to_signed(c));
            }
        }
        out
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        assert_eq!(a.degree, b.degree, "adding elements of different degrees");
        let f = self.field;
        RingElem {
            degree: a.degree,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect(),
        }
    }

    pub fn scale(&self, a: &RingElem, c: u32) -> RingElem {
        let f = self.field;
        RingElem {
            degree: a.degree,
            coeffs: a.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        self.scale(a, self.field.neg(1))
    }

    /// Accumulates `c · (basis monomial `pos` of `Q_da`) · b` into `out`, a coordinate
    /// vector of `Q_{da + b.degree}`.
    pub fn mul_basis_into(&self, da: u32, pos: usize, b: &RingElem, c: u32, out: &mut [u32]) {
        if c == 0 {
            return;
        }
        let f = self.field;
        let pa = self.piece(da);
        let pb = self.piece(b.degree);
        let target = self.piece(da + b.degree);
        let ma = pa.basis_monomial(pos);
        let mut m = ma.clone();
        for (j, &bj) in b.coeffs.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            for (slot, (x, y)) in m.iter_mut().zip(ma.iter().zip(pb.basis_monomial(j))) {
                *slot = x + y;
            }
            let coeff = f.mul(c, bj);
            for &(tp, a) in target.normal_form(target.monomial_index(&m).unwrap()) {
                let k = tp as usize;
                out[k] = f.add(out[k], f.mul(coeff, a));
            }
        }
    }

    pub fn multiply(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut out = self.zero(a.degree + b.degree);
        for (i, &ai) in a.coeffs.iter().enumerate() {
            self.mul_basis_into(a.degree, i, b, ai, &mut out.coeffs);
        }
        out
    }

    pub fn mul_var(&self, v: usize, a: &RingElem) -> RingElem {
        self.multiply(&self.var(v), a)
    }

    /// `Q/(gens)`, presented with the relations of `Q` followed by `gens`.
    pub fn quotient(&self, gens: &[Poly]) -> Result<Arc<GradedRing>, RingError> {
        let mut rels = self.relations.clone();
        rels.extend(gens.iter().cloned());
        GradedRing::new(self.field, self.vars.clone(), rels)
    }

    /// Span of `m^2` inside `Q_d`, as an echelon subspace of coordinate vectors.
    pub fn m_squared(&self, d: u32) -> Echelon {
        let mut span = Echelon::new(self.field, self.piece(d).dim());
        for (v, var) in self.vars.iter().enumerate() {
            if var.degree >= d {
                continue;
            }
            let lower = d - var.degree;
            let x = self.var(v);
            for pos in 0..self.piece(lower).dim() {
                let mut out = vec![0; span.ambient()];
                self.mul_basis_into(lower, pos, &x, 1, &mut out);
                span.insert(out);
            }
        }
        span
    }

    /// `dim_k m/m^2`.
    pub fn edim(&self) -> usize {
        let top = self.vars.iter().map(|v| v.degree).max().unwrap_or(0);
        (1..=top)
            .map(|d| self.piece(d).dim() - self.m_squared(d).rank())
            .sum()
    }
}

fn check_arity(p: &Poly, n: usize) -> Result<(), RingError> {
    match p.terms().next() {
        Some((m, _)) if m.len() != n => Err(RingError::Arity {
            expected: n,
            found: m.len(),
        }),
        _ => Ok(()),
    }
}

/// Reduces coefficients into the signed range of `F_p`, dropping vanishing terms.
pub fn reduce_poly(field: PrimeField, p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        out.add_term(m.clone(), field.to_signed(field.from_i64(c)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn degree_basis_examples() {
        let q = GradedRing::polynomial(f101(), &[("x", 1), ("y", 1)]);
        assert_eq!(q.degree_basis(2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(q.dim(0), 1);
        let c = GradedRing::parse(f101(), &[("x", 1)], &["x^3"]);
        assert_eq!(c.dim(3), 0);
        assert_eq!(c.dim(2), 1);
        assert_eq!(c.dim(7), 0);
        assert_eq!(c.dim(0), 1);
    }

    #[test]
    fn normal_forms_use_lower_monomials() {
        // x^2 - y^2 = 0: x^2 is the leading monomial, so x^2 reduces to y^2
        let q = GradedRing::parse(f101(), &[("x", 1), ("y", 1)], &["x^2 - y^2"]);
        assert_eq!(q.degree_basis(2), vec![vec![1, 1], vec![0, 2]]);
        let x2 = q.monomial_elem(&vec![2, 0]);
        let y2 = q.monomial_elem(&vec![0, 2]);
        assert_eq!(x2, y2);
        // degree 3: x^3 = xy^2, x^2y = y^3
        assert_eq!(q.dim(3), 2);
    }

    #[test]
    fn multiply_examples() {
        let c = GradedRing::parse(f101(), &[("x", 1)], &["x^3"]);
        let x = c.var(0);
        let x2 = c.multiply(&x, &x);
        assert!(!x2.is_zero());
        assert!(c.multiply(&x, &x2).is_zero());
        let q = GradedRing::polynomial(f101(), &[("x", 1), ("y", 1)]);
        let xy = q.multiply(&q.var(0), &q.var(1));
        assert_eq!(q.elem_to_poly(&xy), Poly::monomial(vec![1, 1], 1));
        assert_eq!(q.multiply(&q.one(), &xy), xy);
    }

    #[test]
    fn quotient_examples() {
        let q = GradedRing::polynomial(f101(), &[("x", 1), ("y", 1)]);
        let same = q.quotient(&[]).unwrap();
        for d in 0..6 {
            assert_eq!(same.dim(d), q.dim(d));
        }
        let r = q.quotient(&[parse_poly("x*y", &q.var_names()).unwrap()]).unwrap();
        assert_eq!(r.degree_basis(2), vec![vec![2, 0], vec![0, 2]]);
        let c = GradedRing::parse(f101(), &[("x", 1)], &["x^3"]);
        let r = c.quotient(&[parse_poly("x^2", &c.var_names()).unwrap()]).unwrap();
        let dims: Vec<usize> = (0..5).map(|d| r.dim(d)).collect();
        assert_eq!(dims, vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn edim_examples() {
        assert_eq!(GradedRing::polynomial(f101(), &[("x", 1), ("y", 1)]).edim(), 2);
        assert_eq!(GradedRing::parse(f101(), &[("x", 1)], &["x^3"]).edim(), 1);
        assert_eq!(GradedRing::parse(f101(), &[("x", 1), ("y", 1)], &["x"]).edim(), 1);
        // weighted: y of degree 2 is not a product of x's once y - x^2 is killed
        assert_eq!(GradedRing::polynomial(f101(), &[("x", 1), ("y", 2)]).edim(), 2);
        assert_eq!(GradedRing::parse(f101(), &[("x", 1), ("y", 2)], &["y - x^2"]).edim(), 1);
    }

    #[test]
    fn rejects_bad_rings() {
        let f = f101();
        let names = vec!["x".to_string(), "y".to_string()];
        let vars = vec![
            Variable { name: "x".into(), degree: 1 },
            Variable { name: "y".into(), degree: 1 },
        ];
        let inh = parse_poly("x + y^2", &names).unwrap();
        assert!(matches!(
            GradedRing::new(f, vars.clone(), vec![inh]),
            Err(RingError::Inhomogeneous { index: 0 })
        ));
        let c = parse_poly("3", &names).unwrap();
        assert!(GradedRing::new(f, vars, vec![c]).is_err());
        // a relation that vanishes mod p is dropped
        let f3 = PrimeField::new(3).unwrap();
        let r = GradedRing::parse(f3, &[("x", 1)], &["3*x^2"]);
        assert_eq!(r.dim(2), 1);
    }

    #[test]
    fn concurrent_piece_fill() {
        let q = GradedRing::parse(f101(), &[("x", 1), ("y", 1), ("z", 1)], &["x*y - z^2"]);
        let dims: Vec<Vec<usize>> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4)
                .map(|_| s.spawn(|| (0..8).map(|d| q.dim(d)).collect::<Vec<_>>()))
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for d in &dims {
            assert_eq!(d, &dims[0]);
        }
        // hypersurface of degree 2 in 3 variables: dim = 2d + 1
        assert_eq!(dims[0], vec![1, 3, 5, 7, 9, 11, 13, 15]);
    }
}
