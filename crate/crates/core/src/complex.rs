//! Bounded-below complexes of graded free modules over a [`GradedRing`].
//!
//! Every complex in the crate (Koszul, Tate, resolutions, `U_E`) is stored in
//! this form: a twist list per homological degree and, for each basis element,
//! its boundary as a sparse list of ring coefficients. Homology is computed one
//! internal degree at a time.

use crate::exactlin::{kernel_and_image, Echelon};
use crate::graded::module::{column_images, Layout};
use crate::graded::{GradedRing, RingElem};
use std::sync::Arc;

/// `∂(g) = Σ c_i · g_i` over the basis of the level below.
pub type Boundary = Vec<(usize, RingElem)>;

#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: Arc<GradedRing>,
    twists: Vec<Vec<i32>>,
    boundary: Vec<Vec<Boundary>>,
}

impl FreeComplex {
    pub fn new(ring: Arc<GradedRing>) -> Self {
        FreeComplex {
            ring,
            twists: Vec::new(),
            boundary: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// Number of stored levels (`hmax + 1` for a complex truncated at `hmax`).
    pub fn levels(&self) -> usize {
        self.twists.len()
    }

    pub fn ensure_level(&mut self, h: usize) {
        while self.twists.len() <= h {
            self.twists.push(Vec::new());
            self.boundary.push(Vec::new());
        }
    }

    /// Adds a basis element in level `h`; zero coefficients are dropped.
    pub fn add_generator(&mut self, h: usize, twist: i32, boundary: Boundary) -> usize {
        self.ensure_level(h);
        debug_assert!(h > 0 || boundary.is_empty());
        let boundary = boundary.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.twists[h].push(twist);
        self.boundary[h].push(boundary);
        self.twists[h].len() - 1
    }

    /// Drops every level above `top`.
    pub fn truncate(&mut self, top: usize) {
        self.twists.truncate(top + 1);
        self.boundary.truncate(top + 1);
    }

    pub fn rank(&self, h: usize) -> usize {
        self.twists.get(h).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.twists.iter().map(Vec::len).collect()
    }

    pub fn twists(&self, h: usize) -> &[i32] {
        self.twists.get(h).map_or(&[], Vec::as_slice)
    }

    pub fn boundary(&self, h: usize, j: usize) -> &Boundary {
        &self.boundary[h][j]
    }

    pub fn min_twist(&self, h: usize) -> Option<i32> {
        self.twists(h).iter().copied().min()
    }

    pub fn max_twist(&self, h: usize) -> Option<i32> {
        self.twists(h).iter().copied().max()
    }

    pub fn layout(&self, h: usize, d: i32) -> Layout {
        Layout::new(&self.ring, self.twists(h), d)
    }

    /// Images under `∂` of the degree-`d` basis of level `h`, in level `h - 1`.
    pub fn boundary_images(&self, h: usize, d: i32) -> Vec<Vec<u32>> {
        if h == 0 {
            let n = self.layout(0, d).total;
            return vec![Vec::new(); n];
        }
        let target = self.layout(h - 1, d);
        let mut out = Vec::new();
        for (j, &t) in self.twists(h).iter().enumerate() {
            out.extend(column_images(&self.ring, &self.boundary[h][j], t, d, &target));
        }
        out
    }

    /// Cycles `Z(h, d)` as coordinate vectors.
    pub fn cycles(&self, h: usize, d: i32) -> Vec<Vec<u32>> {
        if h == 0 {
            let n = self.layout(0, d).total;
            return (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v
                })
                .collect();
        }
        let target = self.layout(h - 1, d).total;
        kernel_and_image(self.ring.field(), &self.boundary_images(h, d), target).0
    }

    /// Boundaries `B(h, d) = ∂(F_{h+1})_d` as an echelon subspace of level `h`.
    pub fn boundaries(&self, h: usize, d: i32) -> Echelon {
        let n = self.layout(h, d).total;
        let mut span = Echelon::new(self.ring.field(), n);
        if h + 1 < self.levels() {
            for v in self.boundary_images(h + 1, d) {
                if span.is_full() {
                    break;
                }
                span.insert(v);
            }
        }
        span
    }

    pub fn homology_dim(&self, h: usize, d: i32) -> usize {
        self.cycles(h, d).len() - self.boundaries(h, d).rank()
    }

    /// `∂∂ = 0` on the degree-`d` part of level `h`.
    pub fn d_squared_zero_at(&self, h: usize, d: i32) -> bool {
        if h < 2 {
            return true;
        }
        let f = self.ring.field();
        let lower = self.boundary_images(h - 1, d);
        let width = self.layout(h - 2, d).total;
        self.boundary_images(h, d).iter().all(|v| {
            let mut acc = vec![0; width];
            for (k, &c) in v.iter().enumerate() {
                f.axpy(&mut acc, c, &lower[k]);
            }
            acc.iter().all(|&x| x == 0)
        })
    }

    /// `∂∂ = 0` checked symbolically on each basis element.
    pub fn d_squared_zero(&self) -> Result<(), (usize, usize)> {
        for h in 2..self.levels() {
            for (j, &t) in self.twists[h].iter().enumerate() {
                let target = self.layout(h - 2, t);
                let mut acc = vec![0; target.total];
                for (i, c) in &self.boundary[h][j] {
                    for (k, c2) in &self.boundary[h - 1][*i] {
                        let (off, dim) = target.blocks[*k];
                        let prod = self.ring.multiply(c, c2);
                        let f = self.ring.field();
                        for (a, &b) in acc[off..off + dim].iter_mut().zip(&prod.coeffs) {
                            *a = f.add(*a, b);
                        }
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return Err((h, j));
                }
            }
        }
        Ok(())
    }

    /// Every nonzero differential coefficient has positive degree.
    pub fn is_minimal(&self) -> bool {
        self.boundary
            .iter()
            .flatten()
            .flatten()
            .all(|(_, c)| c.degree > 0)
    }

    /// Ranks of `H_h(F ⊗ k)`. The last stored level is treated as having no
    /// incoming differential, so it is only meaningful below the top.
    pub fn tor_ranks(&self) -> Vec<usize> {
        let f = self.ring.field();
        let rank_k = |h: usize| -> usize {
            if h == 0 || h >= self.levels() {
                return 0;
            }
            let rows = self.rank(h - 1);
            let mut span = Echelon::new(f, rows);
            for b in &self.boundary[h] {
                let mut v = vec![0; rows];
                for (i, c) in b {
                    if let Some(k) = c.constant() {
                        v[*i] = k;
                    }
                }
                span.insert(v);
            }
            span.rank()
        };
        (0..self.levels())
            .map(|h| self.rank(h) - rank_k(h) - rank_k(h + 1))
            .collect()
    }

    /// Nonzero generator coefficients of a level-`h` chain in degree `d`.
    pub fn chain_terms(&self, h: usize, d: i32, v: &[u32]) -> Boundary {
        self.layout(h, d)
            .split(self.twists(h), d, v)
            .into_iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|e| (i, e)))
            .collect()
    }

    /// `b · z` for a basis monomial `b` of `Q_{deg_b}` and a level-`h` chain `z` of degree `d`.
    pub fn scale_chain(&self, h: usize, d: i32, z: &[u32], deg_b: u32, pos: usize) -> Vec<u32> {
        let target = self.layout(h, d + deg_b as i32);
        let mut out = vec![0; target.total];
        for (i, e) in self.chain_terms(h, d, z) {
            let (off, dim) = target.blocks[i];
            if dim > 0 {
                let prod_deg = deg_b + e.degree;
                debug_assert_eq!(self.ring.dim(prod_deg as i64), dim);
                self.ring
                    .mul_basis_into(deg_b, pos, &e, 1, &mut out[off..off + dim]);
            }
        }
        out
    }
}

/// Degree range scanned when looking for new generators.
#[derive(Clone, Copy, Debug)]
pub struct ScanWindow {
    /// Gap past the last relevant degree after which the scan stops.
    pub width: i32,
    /// Hard internal-degree cap.
    pub dmax: i32,
}

/// Generators chosen to kill cycles, with their degrees.
#[derive(Clone, Debug, Default)]
pub struct KillResult {
    pub chosen: Vec<(i32, Vec<u32>)>,
    pub cap_sensitive: bool,
}

/// Picks, per internal degree ascending, cycles of `level` that are independent of
/// the boundaries plus the `Q_{>0}`-multiples of cycles already chosen.
pub fn select_cycles(
    complex: &FreeComplex,
    level: usize,
    cycles: &dyn Fn(i32) -> Vec<Vec<u32>>,
    start: i32,
    upper_hint: i32,
    window: ScanWindow,
) -> KillResult {
    let ring = complex.ring();
    let mut out = KillResult::default();
    let mut d = start;
    let mut last = upper_hint;
    loop {
        if d > last + window.width {
            break;
        }
        if d > window.dmax {
            out.cap_sensitive = true;
            break;
        }
        let z = cycles(d);
        if !z.is_empty() {
            let mut span = complex.boundaries(level, d);
            for (d0, c) in &out.chosen {
                let gap = d - d0;
                if gap <= 0 {
                    continue;
                }
                for pos in 0..ring.dim(gap as i64) {
                    if span.is_full() {
                        break;
                    }
                    span.insert(complex.scale_chain(level, *d0, c, gap as u32, pos));
                }
            }
            for v in z {
                if span.is_full() {
                    break;
                }
                if span.insert(v.clone()) {
                    out.chosen.push((d, v));
                    last = last.max(d);
                }
            }
        }
        d += 1;
    }
    if out.chosen.iter().any(|(d, _)| *d + 2 >= window.dmax) {
        out.cap_sensitive = true;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    /// Koszul complex on x, y over k[x, y], written out by hand.
    fn koszul_xy() -> FreeComplex {
        let q = GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1), ("y", 1)]);
        let mut c = FreeComplex::new(q.clone());
        c.add_generator(0, 0, vec![]);
        c.add_generator(1, 1, vec![(0, q.var(0))]);
        c.add_generator(1, 1, vec![(0, q.var(1))]);
        c.add_generator(2, 2, vec![(0, q.var(1)), (1, q.neg(&q.var(0)))]);
        c
    }

    #[test]
    fn koszul_by_hand() {
        let c = koszul_xy();
        assert!(c.d_squared_zero().is_ok());
        for d in 0..5 {
            assert!(c.d_squared_zero_at(2, d));
        }
        assert!(c.is_minimal());
        assert_eq!(c.homology_dim(0, 0), 1);
        for d in 1..6 {
            assert_eq!(c.homology_dim(0, d), 0);
            assert_eq!(c.homology_dim(1, d), 0);
            assert_eq!(c.homology_dim(2, d), 0);
        }
        assert_eq!(c.tor_ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn detects_bad_sign() {
        let q = GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1), ("y", 1)]);
        let mut c = FreeComplex::new(q.clone());
        c.add_generator(0, 0, vec![]);
        c.add_generator(1, 1, vec![(0, q.var(0))]);
        c.add_generator(1, 1, vec![(0, q.var(1))]);
        c.add_generator(2, 2, vec![(0, q.var(1)), (1, q.var(0))]);
        assert_eq!(c.d_squared_zero(), Err((2, 0)));
        assert!(!c.d_squared_zero_at(2, 2));
    }

    #[test]
    fn tor_ranks_see_unit_entries() {
        let q = GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1)]);
        let mut c = FreeComplex::new(q.clone());
        c.add_generator(0, 0, vec![]);
        c.add_generator(1, 0, vec![(0, q.one())]);
        assert!(!c.is_minimal());
        assert_eq!(c.tor_ranks(), vec![0, 0]);
    }
}
