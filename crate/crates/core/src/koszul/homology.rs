//! Koszul homology `H(E)`, the R-presentation of `H_1(E)` and certificate A.

use super::{subsets_of_size, KoszulAlgebra};
use crate::complex::{select_cycles, ScanWindow};
use crate::exactlin::{Echelon, FMatrix};
use crate::graded::GradedRing;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct KoszulHomology {
    pub hcap: usize,
    pub dcap: i32,
    /// `dims[i][d] = dim H_i(E)_d`, nonzero entries only.
    pub dims: Vec<BTreeMap<i32, usize>>,
    /// Cycle representatives of a minimal generating set of `H_1(E)`.
    pub h1_generators: Vec<(i32, Vec<u32>)>,
    /// Per degree: relations of the presentation `R^m → H_1(E)` beyond those from `I`.
    pub h1_relations: BTreeMap<i32, usize>,
    /// Degrees where `dim H_1(E)_d ≠ Σ_j dim R_{d − t_j}`.
    pub h1_hilbert_mismatch: Vec<i32>,
    /// First `(i, d)` where the products of the `H_1` generators fail to span `H_i(E)_d`.
    pub wedge_span_failure: Option<(usize, i32)>,
    /// First `(i, d)` where `dim H_i(E)_d ≠ dim (Λ^i R^m)_d`.
    pub wedge_dim_failure: Option<(usize, i32)>,
    /// `[z_a][z_b]` in the chosen basis of `H_2(E)_{t_a + t_b}`.
    pub products: Vec<(usize, usize, Vec<u32>)>,
    pub cap_sensitive: bool,
}

impl KoszulHomology {
    pub fn m(&self) -> usize {
        self.h1_generators.len()
    }

    pub fn h1_twists(&self) -> Vec<i32> {
        self.h1_generators.iter().map(|(d, _)| *d).collect()
    }

    pub fn h1_free(&self) -> bool {
        self.h1_relations.is_empty() && self.h1_hilbert_mismatch.is_empty()
    }

    /// Largest `i` with `H_i(E) ≠ 0` inside the window.
    pub fn top_nonvanishing(&self) -> Option<usize> {
        (0..self.dims.len()).rev().find(|&i| !self.dims[i].is_empty())
    }

    pub fn dim(&self, i: usize, d: i32) -> usize {
        self.dims.get(i).and_then(|m| m.get(&d)).copied().unwrap_or(0)
    }
}

/// Verdict of certificate A.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateA {
    pub holds: bool,
    pub m: usize,
    pub h1_free: bool,
    pub exterior: bool,
    pub hcap: usize,
    pub dcap: i32,
    pub cap_sensitive: bool,
}

/// Homology of `E` in homological degrees `0..=min(n, hcap)` and internal degrees `0..=dcap`.
/// `r` must be `Q/I`.
pub fn koszul_homology(e: &KoszulAlgebra, r: &GradedRing, hcap: usize, dcap: i32) -> KoszulHomology {
    let c = e.complex();
    let ring = e.ring();
    let f = ring.field();
    let top = e.n().min(hcap);
    let dims: Vec<BTreeMap<i32, usize>> = (0..=top)
        .map(|i| {
            (0..=dcap)
                .filter_map(|d| {
                    let h = c.homology_dim(i, d);
                    (h > 0).then_some((d, h))
                })
                .collect()
        })
        .collect();

    let mut h1_generators = Vec::new();
    let mut cap_sensitive = false;
    if top >= 1 {
        let cycles = |d: i32| c.cycles(1, d);
        let kill = select_cycles(c, 1, &cycles, 0, dcap, ScanWindow { width: 0, dmax: dcap });
        cap_sensitive = kill.cap_sensitive;
        h1_generators = kill.chosen;
    }
    let twists: Vec<i32> = h1_generators.iter().map(|(d, _)| *d).collect();

    // presentation R^m -> H_1: kernel of Q^m -> E_1 / B_1, compared with I·Q^m
    let mut h1_relations = BTreeMap::new();
    let mut h1_hilbert_mismatch = Vec::new();
    if top >= 1 {
        for d in 0..=dcap {
            let bnd = c.boundaries(1, d);
            let width = c.layout(1, d).total;
            let mut images = Vec::new();
            for (t, z) in &h1_generators {
                let gap = d - t;
                if gap < 0 {
                    continue;
                }
                for pos in 0..ring.dim(gap as i64) {
                    let mut v = c.scale_chain(1, *t, z, gap as u32, pos);
                    bnd.reduce(&mut v);
                    images.push(v);
                }
            }
            let (kernel, _) = crate::exactlin::kernel_and_image(f, &images, width);
            let from_ideal: usize = twists
                .iter()
                .map(|t| ring.dim((d - t) as i64) - r.dim((d - t) as i64))
                .sum();
            if kernel.len() > from_ideal {
                h1_relations.insert(d, kernel.len() - from_ideal);
            }
            let expected: usize = twists.iter().map(|t| r.dim((d - t) as i64)).sum();
            let got = dims[1].get(&d).copied().unwrap_or(0);
            if got != expected {
                h1_hilbert_mismatch.push(d);
            }
        }
    }

    // products z_T of the H_1 generators
    let m = h1_generators.len();
    let mut wedge_span_failure = None;
    let mut wedge_dim_failure = None;
    for i in 0..=top {
        let mut prods: Vec<(i32, Vec<u32>)> = Vec::new();
        if i <= m {
            for t in subsets_of_size(m, i) {
                let mut chain = vec![1u32];
                let mut deg = 0;
                let mut lvl = 0;
                for j in 0..m {
                    if t >> j & 1 == 1 {
                        let (dj, zj) = &h1_generators[j];
                        chain = e.multiply_chains(lvl, deg, &chain, 1, *dj, zj);
                        deg += dj;
                        lvl += 1;
                    }
                }
                prods.push((deg, chain));
            }
        }
        for d in 0..=dcap {
            let expected: usize = prods.iter().map(|(t, _)| r.dim((d - t) as i64)).sum();
            let got = dims[i].get(&d).copied().unwrap_or(0);
            if got != expected && wedge_dim_failure.is_none() {
                wedge_dim_failure = Some((i, d));
            }
            if wedge_span_failure.is_some() {
                continue;
            }
            let bnd = c.boundaries(i, d);
            let base = bnd.rank();
            let mut span = bnd;
            for (t, chain) in &prods {
                let gap = d - t;
                if gap < 0 {
                    continue;
                }
                for pos in 0..ring.dim(gap as i64) {
                    span.insert(c.scale_chain(i, *t, chain, gap as u32, pos));
                }
            }
            if span.rank() - base != got {
                wedge_span_failure = Some((i, d));
            }
        }
    }

    let mut products = Vec::new();
    if top >= 2 {
        for a in 0..m {
            for b in a + 1..m {
                let (ta, za) = &h1_generators[a];
                let (tb, zb) = &h1_generators[b];
                let d = ta + tb;
                let p = e.multiply_chains(1, *ta, za, 1, *tb, zb);
                products.push((a, b, h2_coordinates(e, d, &p)));
            }
        }
    }

    KoszulHomology {
        hcap,
        dcap,
        dims,
        h1_generators,
        h1_relations,
        h1_hilbert_mismatch,
        wedge_span_failure,
        wedge_dim_failure,
        products,
        cap_sensitive,
    }
}

/// Coordinates of a level-2 cycle in the basis of `H_2(E)_d` made of the first
/// cycles independent of the boundaries.
fn h2_coordinates(e: &KoszulAlgebra, d: i32, v: &[u32]) -> Vec<u32> {
    let c = e.complex();
    let f = e.ring().field();
    let bnd = c.boundaries(2, d);
    let mut span: Echelon = bnd.clone();
    let mut basis = Vec::new();
    for z in c.cycles(2, d) {
        if span.insert(z.clone()) {
            basis.push(z);
        }
    }
    let mut cols = basis.clone();
    cols.extend(bnd.basis().iter().cloned());
    let mat = FMatrix::from_columns(f, v.len(), &cols);
    match mat.solve(v).expect("dimensions agree") {
        Some(x) => x[..basis.len()].to_vec(),
        None => Vec::new(),
    }
}

/// Certificate A: `H_1(E)` is free over `R` and `Λ_R H_1(E) → H(E)` is onto with matching
/// Hilbert functions, inside the window of `h`.
pub fn qci_certificate_a(h: &KoszulHomology) -> CertificateA {
    let h1_free = h.h1_free();
    let exterior = h.wedge_span_failure.is_none() && h.wedge_dim_failure.is_none();
    CertificateA {
        holds: h1_free && exterior,
        m: h.m(),
        h1_free,
        exterior,
        hcap: h.hcap,
        dcap: h.dcap,
        cap_sensitive: h.cap_sensitive,
    }
}
