//! Minimal graded free resolutions, an independent non-minimal oracle, Betti
//! tables, and the depth/grade invariants.

use crate::complex::{select_cycles, FreeComplex, ScanWindow};
use crate::exactlin::Echelon;
use crate::graded::{GradedRing, HomogeneousIdeal, PresentedModule};
use crate::koszul::koszul_complex;
use crate::PoincareSeries;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_HMAX: usize = 12;
pub const DEFAULT_DMAX: i32 = 40;

/// Truncation caps for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub hmax: usize,
    pub dmax: i32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hmax: DEFAULT_HMAX,
            dmax: DEFAULT_DMAX,
        }
    }
}

impl Caps {
    pub fn new(hmax: usize, dmax: i32) -> Self {
        Caps { hmax, dmax }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub total: Vec<usize>,
    /// `graded[i][d] = β_{i,d}`.
    pub graded: Vec<BTreeMap<i32, usize>>,
}

impl BettiTable {
    pub fn of(complex: &FreeComplex) -> Self {
        let graded: Vec<BTreeMap<i32, usize>> = (0..complex.levels())
            .map(|h| {
                let mut m = BTreeMap::new();
                for &t in complex.twists(h) {
                    *m.entry(t).or_insert(0) += 1;
                }
                m
            })
            .collect();
        BettiTable {
            total: complex.ranks(),
            graded,
        }
    }

    pub fn series(&self) -> PoincareSeries {
        PoincareSeries::from_coeffs(self.total.iter().map(|&b| b as i64).collect())
    }
}

/// A truncated resolution of a presented module.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: FreeComplex,
    pub module: PresentedModule,
    pub caps: Caps,
    pub cap_sensitive: bool,
}

impl Resolution {
    pub fn betti(&self) -> BettiTable {
        BettiTable::of(&self.complex)
    }

    pub fn poincare(&self) -> PoincareSeries {
        self.betti().series()
    }

    /// Internal degrees where exactness is certified for level `h`.
    pub fn degree_range(&self, h: usize) -> std::ops::RangeInclusive<i32> {
        let lo = self.complex.min_twist(h).unwrap_or(0).min(0);
        let hi = self
            .complex
            .max_twist(h + 1)
            .into_iter()
            .chain(self.complex.max_twist(h))
            .max()
            .unwrap_or(0)
            + window_width(self.complex.ring(), &self.module);
        lo..=hi.min(self.caps.dmax)
    }

    /// `H_0 = M` and `H_h = 0` for `1 ≤ h < hmax` in the certified degree range.
    pub fn verify_exactness(&self) -> Result<(), (usize, i32)> {
        let c = &self.complex;
        for d in self.degree_range(0) {
            if c.homology_dim(0, d) != self.module.dim(d) {
                return Err((0, d));
            }
        }
        for h in 1..c.levels().saturating_sub(1) {
            if c.rank(h) == 0 {
                continue;
            }
            for d in self.degree_range(h) {
                if c.homology_dim(h, d) != 0 {
                    return Err((h, d));
                }
            }
        }
        Ok(())
    }
}

/// Scan width: twice the largest degree occurring in the ring or the presentation, plus 2.
pub fn window_width(ring: &GradedRing, module: &PresentedModule) -> i32 {
    let entry = module
        .columns()
        .iter()
        .flat_map(|c| c.entries.iter().map(|(_, e)| e.degree))
        .max()
        .unwrap_or(0);
    2 * (ring.max_structure_degree().max(entry) as i32) + 2
}

/// The minimal free resolution of `module` over its ring, truncated at `caps`.
pub fn minimal_free_resolution(module: &PresentedModule, caps: Caps) -> Resolution {
    let ring = module.ring().clone();
    let window = ScanWindow {
        width: window_width(&ring, module),
        dmax: caps.dmax,
    };
    let gens = module.minimal_generators();
    let mut complex = FreeComplex::new(ring.clone());
    complex.ensure_level(0);
    let mut cap_sensitive = module.max_degree() > caps.dmax;
    for &g in &gens {
        complex.add_generator(0, module.twists()[g], Vec::new());
    }
    for h in 1..=caps.hmax {
        complex.ensure_level(h);
        let prev = h - 1;
        let Some(start) = complex.min_twist(prev) else {
            continue;
        };
        let upper = if prev == 0 {
            complex.max_twist(0).unwrap().max(module.max_degree())
        } else {
            complex.max_twist(prev).unwrap()
        };
        let snapshot = complex.clone();
        let cycles = |d: i32| -> Vec<Vec<u32>> {
            if prev == 0 {
                module.syzygies_on(&gens, d).1
            } else {
                snapshot.cycles(prev, d)
            }
        };
        let kill = select_cycles(&snapshot, prev, &cycles, start, upper, window);
        cap_sensitive |= kill.cap_sensitive;
        for (d, z) in kill.chosen {
            let b = snapshot.chain_terms(prev, d, &z);
            complex.add_generator(h, d, b);
        }
    }
    Resolution {
        complex,
        module: module.clone(),
        caps,
        cap_sensitive,
    }
}

/// A generally non-minimal resolution used as a cross-check.
///
/// Uses the whole cover in degree 0, rebuilds the complex after every new
/// generator instead of tracking multiples, and adjoins a duplicate of the first
/// generator of each level. `H(F ⊗ k)` must still reproduce the Betti numbers.
pub fn oracle_resolution(module: &PresentedModule, caps: Caps) -> Resolution {
    let ring = module.ring().clone();
    let width = window_width(&ring, module);
    let mut complex = FreeComplex::new(ring.clone());
    complex.ensure_level(0);
    let mut cap_sensitive = false;
    for &t in module.twists() {
        complex.add_generator(0, t, Vec::new());
    }
    for h in 1..=caps.hmax {
        complex.ensure_level(h);
        let prev = h - 1;
        let Some(start) = complex.min_twist(prev) else {
            continue;
        };
        let mut last = complex.max_twist(prev).unwrap().max(module.max_degree());
        let mut first: Option<usize> = None;
        let mut d = start;
        while d <= last + width {
            if d > caps.dmax {
                cap_sensitive = true;
                break;
            }
            let z: Vec<Vec<u32>> = if prev == 0 {
                module.relation_span(d).basis().to_vec()
            } else {
                complex.cycles(prev, d)
            };
            let mut span: Echelon = complex.boundaries(prev, d);
            for v in z {
                if span.insert(v.clone()) {
                    let b = complex.chain_terms(prev, d, &v);
                    let j = complex.add_generator(h, d, b);
                    first.get_or_insert(j);
                    last = last.max(d);
                }
            }
            d += 1;
        }
        if let Some(j) = first {
            let b = complex.boundary(h, j).clone();
            let t = complex.twists(h)[j];
            complex.add_generator(h, t, b);
        }
    }
    Resolution {
        complex,
        module: module.clone(),
        caps,
        cap_sensitive,
    }
}

pub fn poincare_series(module: &PresentedModule, caps: Caps) -> (PoincareSeries, bool) {
    let r = minimal_free_resolution(module, caps);
    (r.poincare(), r.cap_sensitive)
}

fn koszul_scan_limit(ring: &GradedRing, extra: u32, dmax: i32) -> i32 {
    let e = ring.nvars() as u32;
    let vars: u32 = ring.vars().iter().map(|v| v.degree).sum();
    ((vars + extra + ring.max_structure_degree() * (e + 1)) as i32).min(dmax)
}

/// Largest `i` with `H_i(K) ≠ 0` in degrees `0..=limit`.
fn top_homology(k: &FreeComplex, limit: i32) -> usize {
    (0..k.levels())
        .rev()
        .find(|&i| (0..=limit).any(|d| k.homology_dim(i, d) != 0))
        .unwrap_or(0)
}

/// `depth Q = e − max{i : H_i(x; Q) ≠ 0}`.
pub fn depth(ring: &Arc<GradedRing>, dmax: i32) -> usize {
    let xs: Vec<_> = (0..ring.nvars()).map(|v| ring.var(v)).collect();
    let k = koszul_complex(ring, &xs).0;
    ring.nvars() - top_homology(&k, koszul_scan_limit(ring, 0, dmax))
}

/// `grade_Q(Q/I) = n − max{i : H_i(E) ≠ 0}` for the Koszul complex `E` on the generators.
pub fn grade(ideal: &HomogeneousIdeal, dmax: i32) -> usize {
    let ring = ideal.ring();
    let k = koszul_complex(ring, ideal.elems()).0;
    let extra: u32 = ideal.degrees().iter().sum();
    ideal.len() - top_homology(&k, koszul_scan_limit(ring, extra, dmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::graded::parse_poly;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn ideal(q: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
        let names = q.var_names();
        HomogeneousIdeal::new(
            q.clone(),
            gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn residue_field_over_plane() {
        let q = GradedRing::polynomial(f(), &[("x", 1), ("y", 1)]);
        let r = minimal_free_resolution(&PresentedModule::residue_field(q), Caps::new(5, 20));
        assert_eq!(r.betti().total, vec![1, 2, 1, 0, 0, 0]);
        assert!(r.complex.is_minimal());
        assert!(r.complex.d_squared_zero().is_ok());
        r.verify_exactness().unwrap();
        assert!(!r.cap_sensitive);
    }

    #[test]
    fn periodic_resolutions() {
        let r = GradedRing::parse(f(), &[("x", 1)], &["x^2"]);
        let res = minimal_free_resolution(&PresentedModule::residue_field(r), Caps::new(8, 40));
        assert_eq!(res.betti().total, vec![1; 9]);
        let c = GradedRing::parse(f(), &[("x", 1)], &["x^3"]);
        let res = minimal_free_resolution(&PresentedModule::residue_field(c), Caps::new(6, 40));
        assert_eq!(res.betti().total, vec![1; 7]);
        // twists 0, 1, 3, 4, 6, 7, 9: alternating x, x^2
        assert_eq!(res.complex.twists(2), &[3]);
        assert_eq!(res.complex.twists(3), &[4]);
        res.verify_exactness().unwrap();
    }

    #[test]
    fn free_and_zero_modules() {
        let q = GradedRing::polynomial(f(), &[("x", 1), ("y", 1)]);
        let free = PresentedModule::free(q.clone(), vec![0, 2]);
        let r = minimal_free_resolution(&free, Caps::new(3, 20));
        assert_eq!(r.betti().total, vec![2, 0, 0, 0]);
        let zero = PresentedModule::zero(q);
        assert_eq!(minimal_free_resolution(&zero, Caps::new(3, 20)).betti().total, vec![0; 4]);
    }

    #[test]
    fn oracle_matches_minimal() {
        let q = GradedRing::polynomial(f(), &[("x", 1), ("y", 1)]);
        let k = PresentedModule::residue_field(q.clone());
        let o = oracle_resolution(&k, Caps::new(4, 20));
        assert!(!o.complex.is_minimal());
        assert!(o.complex.ranks()[1] >= 2);
        assert_eq!(&o.complex.tor_ranks()[..3], &[1, 2, 1]);
        o.verify_exactness().unwrap();
        let qx = PresentedModule::cyclic(q.clone(), &[parse_poly("x", &q.var_names()).unwrap()]).unwrap();
        let o = oracle_resolution(&qx, Caps::new(4, 20));
        assert_eq!(&o.complex.tor_ranks()[..3], &[1, 1, 0]);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&GradedRing::polynomial(f(), &[("x", 1), ("y", 1)]), 40), 2);
        assert_eq!(depth(&GradedRing::parse(f(), &[("x", 1)], &["x^3"]), 40), 0);
        assert_eq!(depth(&GradedRing::parse(f(), &[("x", 1), ("y", 1)], &["x*y"]), 40), 1);
    }

    #[test]
    fn grade_examples() {
        let q = GradedRing::polynomial(f(), &[("x", 1), ("y", 1)]);
        assert_eq!(grade(&ideal(&q, &["x*y"]), 40), 1);
        assert_eq!(grade(&ideal(&q, &["x", "y"]), 40), 2);
        let c = GradedRing::parse(f(), &[("x", 1)], &["x^3"]);
        assert_eq!(grade(&ideal(&c, &["x^2"]), 40), 0);
        assert_eq!(grade(&HomogeneousIdeal::zero(q), 40), 0);
    }
}
