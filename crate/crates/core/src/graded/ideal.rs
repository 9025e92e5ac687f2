//! Homogeneous ideals `I = (f_1..f_n)` of a graded ring and the degree-wise
//! hypothesis checks run on them.

use super::module::PresentedModule;
use super::poly::Poly;
use super::{GradedRing, RingElem, RingError};
use crate::exactlin::Echelon;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypothesisError {
    #[error("module not an R-module: generator {generator} of I does not annihilate it")]
    NotRModule { generator: usize },
}

#[derive(Clone, Debug)]
pub struct HomogeneousIdeal {
    ring: Arc<GradedRing>,
    gens: Vec<Poly>,
    elems: Vec<RingElem>,
}

/// Outcome of [`HomogeneousIdeal::check_minimality`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimality {
    pub minimal: bool,
    /// First generator lying in `mI` plus the span of earlier generators of its degree.
    pub witness: Option<usize>,
}

impl HomogeneousIdeal {
    pub fn new(ring: Arc<GradedRing>, gens: Vec<Poly>) -> Result<Self, RingError> {
        let weights = ring.weights();
        let mut elems = Vec::with_capacity(gens.len());
        for (index, g) in gens.iter().enumerate() {
            let g = super::reduce_poly(ring.field(), g);
            let d = g
                .homogeneous_degree(&weights)
                .ok_or(RingError::Inhomogeneous { index })?;
            if d == 0 {
                return Err(RingError::ConstantGenerator { index });
            }
            elems.push(ring.elem_in_degree(&g, d)?);
        }
        Ok(HomogeneousIdeal { ring, gens, elems })
    }

    pub fn zero(ring: Arc<GradedRing>) -> Self {
        HomogeneousIdeal {
            ring,
            gens: Vec::new(),
            elems: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn elems(&self) -> &[RingElem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.elems.iter().map(|e| e.degree).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `R = Q/I`.
    pub fn quotient_ring(&self) -> Arc<GradedRing> {
        self.ring
            .quotient(&self.gens)
            .expect("generators were validated")
    }

    /// Span of `b · f_j` over basis monomials `b` with `deg b ≥ min_cofactor`, in `Q_d`.
    fn multiples(&self, d: u32, min_cofactor: u32, only: Option<&[usize]>) -> Echelon {
        let ring = &self.ring;
        let mut span = Echelon::new(ring.field(), ring.dim(d as i64));
        for (j, f) in self.elems.iter().enumerate() {
            if only.is_some_and(|o| !o.contains(&j)) || f.degree > d {
                continue;
            }
            let cof = d - f.degree;
            if cof < min_cofactor {
                continue;
            }
            for pos in 0..ring.dim(cof as i64) {
                if span.is_full() {
                    return span;
                }
                let mut v = vec![0; span.ambient()];
                ring.mul_basis_into(cof, pos, f, 1, &mut v);
                span.insert(v);
            }
        }
        span
    }

    /// `I_d`.
    pub fn span_degree(&self, d: u32) -> Echelon {
        self.multiples(d, 0, None)
    }

    /// `(mI)_d`.
    pub fn m_times_degree(&self, d: u32) -> Echelon {
        self.multiples(d, 1, None)
    }

    pub fn check_minimality(&self) -> Minimality {
        for (i, f) in self.elems.iter().enumerate() {
            let mut span = self.m_times_degree(f.degree);
            for g in &self.elems[..i] {
                if g.degree == f.degree {
                    span.insert(g.coeffs.clone());
                }
            }
            if span.contains(&f.coeffs) {
                return Minimality {
                    minimal: false,
                    witness: Some(i),
                };
            }
        }
        Minimality {
            minimal: true,
            witness: None,
        }
    }

    /// A minimal generating subset, chosen greedily in ascending degree.
    pub fn minimize(&self) -> HomogeneousIdeal {
        let mut order: Vec<usize> = (0..self.elems.len()).collect();
        order.sort_by_key(|&i| self.elems[i].degree);
        let mut kept: Vec<usize> = Vec::new();
        for &i in &order {
            let f = &self.elems[i];
            let mut span = self.multiples(f.degree, 1, Some(&kept));
            for &j in &kept {
                if self.elems[j].degree == f.degree {
                    span.insert(self.elems[j].coeffs.clone());
                }
            }
            if !span.contains(&f.coeffs) {
                kept.push(i);
            }
        }
        HomogeneousIdeal {
            ring: self.ring.clone(),
            gens: kept.iter().map(|&i| self.gens[i].clone()).collect(),
            elems: kept.iter().map(|&i| self.elems[i].clone()).collect(),
        }
    }

    /// Whether `I · M = 0`; on failure, the offending generator.
    pub fn annihilates(&self, module: &PresentedModule) -> Result<(), HypothesisError> {
        for (generator, f) in self.elems.iter().enumerate() {
            if !module.kills(f) {
                return Err(HypothesisError::NotRModule { generator });
            }
        }
        Ok(())
    }

    /// `I ⊆ m · ann_Q(M)`.
    pub fn check_shamash_condition(&self, module: &PresentedModule) -> Result<bool, HypothesisError> {
        self.annihilates(module)?;
        let ring = &self.ring;
        for f in &self.elems {
            let d = f.degree;
            let mut span = Echelon::new(ring.field(), ring.dim(d as i64));
            for (v, var) in ring.vars().iter().enumerate() {
                if var.degree > d {
                    continue;
                }
                let lower = d - var.degree;
                let x = ring.var(v);
                for a in module.annihilator_degree(lower) {
                    let elem = RingElem {
                        degree: lower,
                        coeffs: a,
                    };
                    span.insert(ring.multiply(&x, &elem).coeffs);
                }
            }
            if !span.contains(&f.coeffs) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I ∩ m^2 ⊆ mI`, checked in every generator degree.
    pub fn check_nagata_condition(&self) -> bool {
        let mut degrees = self.degrees();
        degrees.sort_unstable();
        degrees.dedup();
        degrees.into_iter().all(|d| {
            let i_d = self.span_degree(d);
            let m2 = self.ring.m_squared(d);
            let mut sum = i_d.clone();
            for r in m2.basis() {
                sum.insert(r.clone());
            }
            let intersection = i_d.rank() + m2.rank() - sum.rank();
            intersection == self.m_times_degree(d).rank()
        })
    }
}
