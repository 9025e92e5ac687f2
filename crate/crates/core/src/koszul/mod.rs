//! The Koszul dg algebra `E = Q⟨e_1..e_n | ∂e_i = f_i⟩`.
//!
//! Exterior monomials `e_S` are indexed by bitmasks; bit `i` stands for `e_{i+1}`.
//! Within a homological level the masks are listed in increasing numeric order.

pub mod gamma;
pub mod homology;
pub mod tate;

use crate::complex::{Boundary, FreeComplex};
use crate::graded::{GradedRing, HomogeneousIdeal, RingElem};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

pub use gamma::{gamma_hilbert, GammaAlgebra};
pub use homology::{koszul_homology, qci_certificate_a, CertificateA, KoszulHomology};
pub use tate::{build_tate_two_step, qci_certificate_b, CertificateB, TateComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("generator {index} of the ideal is redundant (lies in mI plus earlier generators)")]
    NotMinimal { index: usize },
}

/// `(−1)^{#{j ∈ S : j < i}}`, the sign of removing `e_i` from `e_S`.
pub fn removal_sign(s: u32, i: usize) -> bool {
    (s & ((1u32 << i) - 1)).count_ones() % 2 == 1
}

/// Sign of `e_S · e_T = ± e_{S ∪ T}` (true means negative); `None` if `S ∩ T ≠ ∅`.
pub fn product_sign(s: u32, t: u32) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // elements of S larger than j
        inversions += (s >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

/// Masks of popcount `h` among `n` bits, ascending.
pub fn subsets_of_size(n: usize, h: usize) -> Vec<u32> {
    (0..1u32 << n).filter(|m| m.count_ones() as usize == h).collect()
}

/// Koszul complex on `elems` as a free complex, plus the level-wise mask lists.
pub fn koszul_complex(ring: &Arc<GradedRing>, elems: &[RingElem]) -> (FreeComplex, Vec<Vec<u32>>) {
    let n = elems.len();
    let mut c = FreeComplex::new(ring.clone());
    let levels: Vec<Vec<u32>> = (0..=n).map(|h| subsets_of_size(n, h)).collect();
    let mut index = vec![0usize; 1 << n];
    for lvl in &levels {
        for (k, &m) in lvl.iter().enumerate() {
            index[m as usize] = k;
        }
    }
    for (h, lvl) in levels.iter().enumerate() {
        for &s in lvl {
            let twist: i32 = (0..n).filter(|&i| s >> i & 1 == 1).map(|i| elems[i].degree as i32).sum();
            let mut b: Boundary = Vec::new();
            for i in 0..n {
                if s >> i & 1 == 1 {
                    let c = if removal_sign(s, i) {
                        ring.neg(&elems[i])
                    } else {
                        elems[i].clone()
                    };
                    b.push((index[(s & !(1 << i)) as usize], c));
                }
            }
            c.add_generator(h, twist, b);
        }
    }
    (c, levels)
}

/// `E` together with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct KoszulAlgebra {
    ideal: HomogeneousIdeal,
    complex: FreeComplex,
    levels: Vec<Vec<u32>>,
    index: Vec<usize>,
}

/// Element of `E`: Q-coefficients on exterior monomials.
pub type EElem = HashMap<u32, RingElem>;

impl KoszulAlgebra {
    pub fn new(ideal: &HomogeneousIdeal) -> Result<Self, KoszulError> {
        if let Some(index) = ideal.check_minimality().witness {
            return Err(KoszulError::NotMinimal { index });
        }
        Ok(Self::new_unchecked(ideal))
    }

    /// Skips the minimality check; used for Koszul complexes on arbitrary sequences.
    pub fn new_unchecked(ideal: &HomogeneousIdeal) -> Self {
        let (complex, levels) = koszul_complex(ideal.ring(), ideal.elems());
        let mut index = vec![0usize; 1 << ideal.len()];
        for lvl in &levels {
            for (k, &m) in lvl.iter().enumerate() {
                index[m as usize] = k;
            }
        }
        KoszulAlgebra {
            ideal: ideal.clone(),
            complex,
            levels,
            index,
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn n(&self) -> usize {
        self.ideal.len()
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    /// Masks in homological degree `h`.
    pub fn level(&self, h: usize) -> &[u32] {
        self.levels.get(h).map_or(&[], Vec::as_slice)
    }

    /// Position of `e_S` within its level.
    pub fn index_of(&self, s: u32) -> usize {
        self.index[s as usize]
    }

    /// Internal degree of `e_S`.
    pub fn mask_degree(&self, s: u32) -> i32 {
        let degs = self.ideal.degrees();
        (0..self.n()).filter(|&i| s >> i & 1 == 1).map(|i| degs[i] as i32).sum()
    }

    /// `∂(e_S)` as an element of `E`.
    pub fn d_basis(&self, s: u32) -> EElem {
        let h = s.count_ones() as usize;
        let lower = self.level(h.saturating_sub(1));
        self.complex
            .boundary(h, self.index_of(s))
            .iter()
            .map(|(k, c)| (lower[*k], c.clone()))
            .collect()
    }

    /// `a · b` for elements of `E`.
    pub fn multiply(&self, a: &EElem, b: &EElem) -> EElem {
        let ring = self.ring();
        let mut out: EElem = HashMap::new();
        for (&s, ca) in a {
            for (&t, cb) in b {
                let Some(neg) = product_sign(s, t) else {
                    continue;
                };
                let mut p = ring.multiply(ca, cb);
                if neg {
                    p = ring.neg(&p);
                }
                add_into(ring, &mut out, s | t, p);
            }
        }
        normalize(&mut out);
        out
    }

    /// `∂` extended additively.
    pub fn d(&self, a: &EElem) -> EElem {
        let ring = self.ring();
        let mut out: EElem = HashMap::new();
        for (&s, c) in a {
            for (t, c2) in self.d_basis(s) {
                add_into(ring, &mut out, t, ring.multiply(c, &c2));
            }
        }
        normalize(&mut out);
        out
    }

    pub fn basis_elem(&self, s: u32) -> EElem {
        HashMap::from([(s, self.ring().one())])
    }

    /// Leibniz rule on every pair of basis monomials; returns the first failing pair.
    pub fn check_leibniz(&self) -> Result<(), (u32, u32)> {
        let ring = self.ring();
        let all = 1u32 << self.n();
        for s in 0..all {
            for t in 0..all {
                let es = self.basis_elem(s);
                let et = self.basis_elem(t);
                let lhs = self.d(&self.multiply(&es, &et));
                let mut rhs = self.multiply(&self.d(&es), &et);
                let mut second = self.multiply(&es, &self.d(&et));
                if s.count_ones() % 2 == 1 {
                    for v in second.values_mut() {
                        *v = ring.neg(v);
                    }
                }
                for (k, v) in second {
                    add_into(ring, &mut rhs, k, v);
                }
                normalize(&mut rhs);
                if lhs != rhs {
                    return Err((s, t));
                }
            }
        }
        Ok(())
    }

    /// Product of a level-`a` chain of degree `da` with a level-`b` chain of degree `db`.
    pub fn multiply_chains(&self, a: usize, da: i32, va: &[u32], b: usize, db: i32, vb: &[u32]) -> Vec<u32> {
        let x = self.chain_to_elem(a, da, va);
        let y = self.chain_to_elem(b, db, vb);
        self.elem_to_chain(a + b, da + db, &self.multiply(&x, &y))
    }

    pub fn chain_to_elem(&self, h: usize, d: i32, v: &[u32]) -> EElem {
        self.complex
            .chain_terms(h, d, v)
            .into_iter()
            .map(|(k, c)| (self.level(h)[k], c))
            .collect()
    }

    pub fn elem_to_chain(&self, h: usize, d: i32, x: &EElem) -> Vec<u32> {
        let layout = self.complex.layout(h, d);
        let mut v = vec![0; layout.total];
        for (&s, c) in x {
            if s.count_ones() as usize != h || c.is_zero() {
                continue;
            }
            let (off, dim) = layout.blocks[self.index_of(s)];
            debug_assert_eq!(dim, c.coeffs.len());
            v[off..off + dim].copy_from_slice(&c.coeffs);
        }
        v
    }
}

pub(crate) fn add_into(ring: &GradedRing, out: &mut EElem, key: u32, v: RingElem) {
    match out.get_mut(&key) {
        Some(cur) => *cur = ring.add(cur, &v),
        None => {
            out.insert(key, v);
        }
    }
}

pub(crate) fn normalize(x: &mut EElem) {
    x.retain(|_, c| !c.is_zero());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::graded::parse_poly;

    fn ideal(q: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
        let names = q.var_names();
        HomogeneousIdeal::new(
            q.clone(),
            gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect(),
        )
        .unwrap()
    }

    fn q2() -> Arc<GradedRing> {
        GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1), ("y", 1)])
    }

    #[test]
    fn signs() {
        assert!(!removal_sign(0b11, 0));
        assert!(removal_sign(0b11, 1));
        assert_eq!(product_sign(0b01, 0b10), Some(false));
        assert_eq!(product_sign(0b10, 0b01), Some(true));
        assert_eq!(product_sign(0b11, 0b01), None);
        assert_eq!(product_sign(0b110, 0b001), Some(false));
        assert_eq!(product_sign(0b101, 0b010), Some(true));
    }

    #[test]
    fn trivial_algebra() {
        let q = q2();
        let e = KoszulAlgebra::new(&HomogeneousIdeal::zero(q)).unwrap();
        assert_eq!(e.complex().ranks(), vec![1]);
        assert!(e.check_leibniz().is_ok());
    }

    #[test]
    fn two_generators() {
        let q = q2();
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2", "x*y"])).unwrap();
        assert_eq!(e.complex().ranks(), vec![1, 2, 1]);
        let d = e.d_basis(0b11);
        let names = q.var_names();
        // ∂(e1 e2) = x^2 e2 - xy e1
        assert_eq!(q.elem_to_poly(&d[&0b10]).display(&names).to_string(), "x^2");
        assert_eq!(q.elem_to_poly(&d[&0b01]).display(&names).to_string(), "-x*y");
        assert!(e.complex().d_squared_zero().is_ok());
        assert!(e.check_leibniz().is_ok());
        assert_eq!(e.complex().twists(2), &[4]);
    }

    #[test]
    fn leibniz_three_generators() {
        let q = GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1), ("y", 1), ("z", 1)]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x", "y^2", "x*z + z^2"])).unwrap();
        assert!(e.complex().d_squared_zero().is_ok());
        assert!(e.check_leibniz().is_ok());
    }

    #[test]
    fn rejects_redundant_generators() {
        let q = q2();
        assert_eq!(
            KoszulAlgebra::new(&ideal(&q, &["x^2", "x^3"])).unwrap_err(),
            KoszulError::NotMinimal { index: 1 }
        );
    }
}
