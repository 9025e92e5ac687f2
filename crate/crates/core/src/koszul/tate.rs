//! The two-step Tate complex `Q⟨X_1, X_2⟩ = E ⊗ Γ(y_1..y_m)` with
//! `∂y_j = z_j`, and certificate B.

use super::gamma::monomials;
use super::homology::KoszulHomology;
use super::{subsets_of_size, EElem, KoszulAlgebra};
use crate::complex::{Boundary, FreeComplex};
use crate::graded::GradedRing;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Basis symbol `e_S · y^(H)`.
pub type TateSymbol = (u32, Vec<u32>);

#[derive(Clone, Debug)]
pub struct TateComplex {
    pub complex: FreeComplex,
    pub symbols: Vec<Vec<TateSymbol>>,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateB {
    pub holds: bool,
    pub minimal: bool,
    /// First `(i, d)` where homology is not that of `R`.
    pub failure: Option<(usize, i32)>,
    pub hmax: usize,
    pub dcap: i32,
}

/// Builds homological levels `0..=hmax + 1`.
pub fn build_tate_two_step(e: &KoszulAlgebra, h: &KoszulHomology, hmax: usize) -> TateComplex {
    let ring = e.ring();
    let n = e.n();
    let m = h.m();
    let zs: Vec<EElem> = h
        .h1_generators
        .iter()
        .map(|(d, z)| e.chain_to_elem(1, *d, z))
        .collect();
    let ts = h.h1_twists();
    let mut complex = FreeComplex::new(ring.clone());
    let mut symbols: Vec<Vec<TateSymbol>> = Vec::new();
    let mut index: Vec<HashMap<TateSymbol, usize>> = Vec::new();
    for level in 0..=hmax + 1 {
        complex.ensure_level(level);
        let mut syms = Vec::new();
        for w in 0..=level / 2 {
            if m == 0 && w > 0 {
                break;
            }
            let ext = level - 2 * w;
            if ext > n {
                continue;
            }
            for hh in monomials(m, w) {
                for s in subsets_of_size(n, ext) {
                    syms.push((s, hh.clone()));
                }
            }
        }
        let mut idx = HashMap::new();
        for sym in &syms {
            let (s, hh) = sym;
            let twist = e.mask_degree(*s) + hh.iter().zip(&ts).map(|(&a, &t)| a as i32 * t).sum::<i32>();
            let mut b: EBoundary = HashMap::new();
            for (t, c) in e.d_basis(*s) {
                add_into_sym(ring, &mut b, (t, hh.clone()), c);
            }
            let odd = s.count_ones() % 2 == 1;
            for j in 0..m {
                if hh[j] == 0 {
                    continue;
                }
                let mut lower = hh.clone();
                lower[j] -= 1;
                let prod = e.multiply(&e.basis_elem(*s), &zs[j]);
                for (t, c) in prod {
                    let c = if odd { ring.neg(&c) } else { c };
                    add_into_sym(ring, &mut b, (t, lower.clone()), c);
                }
            }
            let mut terms: Boundary = b
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(sym, c)| (index[level - 1][&sym], c))
                .collect();
            terms.sort_by_key(|(k, _)| *k);
            let k = complex.add_generator(level, twist, terms);
            idx.insert(sym.clone(), k);
        }
        symbols.push(syms);
        index.push(idx);
    }
    TateComplex {
        complex,
        symbols,
        n,
        m,
    }
}

type EBoundary = HashMap<TateSymbol, crate::graded::RingElem>;

fn add_into_sym(ring: &GradedRing, out: &mut EBoundary, key: TateSymbol, v: crate::graded::RingElem) {
    match out.get_mut(&key) {
        Some(cur) => *cur = ring.add(cur, &v),
        None => {
            out.insert(key, v);
        }
    }
}

/// Certificate B: the Tate complex is minimal and resolves `R` in the window.
pub fn qci_certificate_b(t: &TateComplex, r: &GradedRing, hmax: usize, dcap: i32) -> CertificateB {
    let c = &t.complex;
    let minimal = c.is_minimal();
    let mut failure = None;
    'outer: for i in 0..=hmax.min(c.levels().saturating_sub(2)) {
        for d in 0..=dcap {
            let expected = if i == 0 { r.dim(d as i64) } else { 0 };
            if c.homology_dim(i, d) != expected {
                failure = Some((i, d));
                break 'outer;
            }
        }
    }
    CertificateB {
        holds: minimal && failure.is_none(),
        minimal,
        failure,
        hmax,
        dcap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::graded::{parse_poly, HomogeneousIdeal};
    use crate::koszul::homology::koszul_homology;
    use std::sync::Arc;

    fn setup(vars: &[(&str, u32)], rels: &[&str], gens: &[&str]) -> (KoszulAlgebra, Arc<GradedRing>) {
        let q = GradedRing::parse(PrimeField::new(101).unwrap(), vars, rels);
        let names = q.var_names();
        let i = HomogeneousIdeal::new(q.clone(), gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect()).unwrap();
        let r = i.quotient_ring();
        (KoszulAlgebra::new(&i).unwrap(), r)
    }

    #[test]
    fn complete_intersection_tate_is_koszul() {
        let (e, r) = setup(&[("x", 1), ("y", 1)], &[], &["x*y"]);
        let h = koszul_homology(&e, &r, 4, 10);
        let t = build_tate_two_step(&e, &h, 4);
        assert_eq!(t.m, 0);
        assert_eq!(t.complex.ranks(), vec![1, 1, 0, 0, 0, 0]);
        let b = qci_certificate_b(&t, &r, 4, 10);
        assert!(b.holds, "{b:?}");
    }

    #[test]
    fn embedded_hypersurface_tate() {
        let (e, r) = setup(&[("x", 1)], &["x^3"], &["x^2"]);
        let h = koszul_homology(&e, &r, 6, 16);
        let t = build_tate_two_step(&e, &h, 6);
        assert_eq!(t.complex.ranks(), vec![1; 8]);
        assert!(t.complex.d_squared_zero().is_ok());
        // ∂ y = x e
        let names = e.ring().var_names();
        let b = t.complex.boundary(2, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(e.ring().elem_to_poly(&b[0].1).display(&names).to_string(), "x");
        let cert = qci_certificate_b(&t, &r, 6, 16);
        assert!(cert.holds, "{cert:?}");
    }

    #[test]
    fn non_qci_tate_fails() {
        let (e, r) = setup(&[("x", 1), ("y", 1)], &[], &["x^2", "x*y"]);
        let h = koszul_homology(&e, &r, 6, 12);
        let t = build_tate_two_step(&e, &h, 6);
        assert!(t.complex.d_squared_zero().is_ok());
        let cert = qci_certificate_b(&t, &r, 6, 12);
        assert!(!cert.holds);
    }

    #[test]
    fn basis_count_matches_e_tensor_gamma() {
        let (e, r) = setup(&[("x", 1), ("y", 1)], &["x^2", "y^2"], &["x", "y"]);
        let h = koszul_homology(&e, &r, 6, 8);
        let t = build_tate_two_step(&e, &h, 6);
        // (1 + t)^2 / (1 - t^2)^2 = (1 - t)^{-2}: ranks i + 1
        assert_eq!(t.complex.ranks(), (1..=8).collect::<Vec<_>>());
        assert!(t.complex.d_squared_zero().is_ok());
        assert!(qci_certificate_b(&t, &r, 6, 8).holds);
    }
}
