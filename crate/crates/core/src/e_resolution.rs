//! Semifree resolutions over the Koszul dg algebra `E`, dg `E`-structures on
//! `Q`-free complexes, and the complex `U_E(F) = E ⊗ Γ ⊗ F`.

use crate::complex::{select_cycles, Boundary, FreeComplex, ScanWindow};
use crate::exactlin::{FMatrix, PrimeField};
use crate::graded::ideal::HypothesisError;
use crate::graded::{GradedRing, PresentedModule, RingElem};
use crate::koszul::gamma::{gamma_hilbert, monomials};
use crate::koszul::{product_sign, subsets_of_size, KoszulAlgebra};
use crate::resolution::{minimal_free_resolution, Caps};
use crate::series::cmp_coefficientwise;
use crate::{Comparison, PoincareSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// A semifree dg `E`-module, stored through its underlying `Q`-free complex with
/// basis symbols `e_S · u`.
#[derive(Clone, Debug)]
pub struct SemifreeDgModule {
    algebra: KoszulAlgebra,
    module: PresentedModule,
    /// `(homological degree, internal degree)` of each semifree generator.
    pub gens: Vec<(usize, i32)>,
    pub underlying: FreeComplex,
    /// Per level, the symbols `(S, generator)`.
    pub symbols: Vec<Vec<(u32, usize)>>,
    index: HashMap<(u32, usize), usize>,
    pub caps: Caps,
    pub cap_sensitive: bool,
}

impl SemifreeDgModule {
    fn empty(algebra: &KoszulAlgebra, module: &PresentedModule, caps: Caps) -> Self {
        let mut underlying = FreeComplex::new(algebra.ring().clone());
        underlying.ensure_level(caps.hmax);
        SemifreeDgModule {
            algebra: algebra.clone(),
            module: module.clone(),
            gens: Vec::new(),
            underlying,
            symbols: vec![Vec::new(); caps.hmax + 1],
            index: HashMap::new(),
            caps,
            cap_sensitive: false,
        }
    }

    pub fn algebra(&self) -> &KoszulAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    /// Adjoins `u` with `∂u = z`, together with all `e_S u` up to the top level.
    fn add_generator(&mut self, h: usize, twist: i32, z: &Boundary) {
        let g = self.gens.len();
        self.gens.push((h, twist));
        let e = &self.algebra;
        let ring = e.ring().clone();
        let top = self.caps.hmax;
        for a in 0..=e.n() {
            if h + a > top {
                break;
            }
            for s in subsets_of_size(e.n(), a) {
                let level = h + a;
                let mut acc: HashMap<usize, RingElem> = HashMap::new();
                for (t, c) in e.d_basis(s) {
                    let k = self.index[&(t, g)];
                    accumulate(&ring, &mut acc, k, c);
                }
                if h > 0 {
                    for (k, c) in z {
                        let (t, g2) = self.symbols[h - 1][*k];
                        let Some(neg) = product_sign(s, t) else {
                            continue;
                        };
                        let neg = neg ^ (a % 2 == 1);
                        let c = if neg { ring.neg(c) } else { c.clone() };
                        let target = self.index[&(s | t, g2)];
                        accumulate(&ring, &mut acc, target, c);
                    }
                }
                let mut terms: Boundary = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                terms.sort_by_key(|(k, _)| *k);
                let k = self
                    .underlying
                    .add_generator(level, twist + e.mask_degree(s), terms);
                self.symbols[level].push((s, g));
                self.index.insert((s, g), k);
            }
        }
    }

    /// Forgets everything above level `top`; used when the work budget runs out.
    fn truncate(&mut self, top: usize) {
        self.caps.hmax = top;
        self.symbols.truncate(top + 1);
        self.underlying.truncate(top);
        let gens = &self.gens;
        self.index.retain(|&(s, g), _| gens[g].0 + s.count_ones() as usize <= top);
        self.cap_sensitive = true;
    }

    /// `β^E_h`: number of semifree generators in each homological degree.
    pub fn betti(&self) -> Vec<usize> {
        let mut b = vec![0; self.caps.hmax + 1];
        for &(h, _) in &self.gens {
            b[h] += 1;
        }
        b
    }

    pub fn poincare(&self) -> PoincareSeries {
        PoincareSeries::from_coeffs(self.betti().into_iter().map(|b| b as i64).collect())
    }

    /// Level and index of the symbol `e_∅ u_g`.
    fn generator_symbol(&self, g: usize) -> (usize, usize) {
        (self.gens[g].0, self.index[&(0, g)])
    }

    /// Every `e_∅`-coefficient of every `∂u` lies in `m`.
    pub fn is_minimal(&self) -> bool {
        (0..self.gens.len()).all(|g| {
            let (h, k) = self.generator_symbol(g);
            h == 0
                || self.underlying.boundary(h, k).iter().all(|(t, c)| {
                    self.symbols[h - 1][*t].0 != 0 || c.degree > 0
                })
        })
    }

    /// Ranks of `H(U ⊗_E k)`; equal to [`Self::betti`] when `U` is minimal.
    pub fn tor_ranks(&self) -> Vec<usize> {
        let f = self.algebra.ring().field();
        let by_level: Vec<Vec<usize>> = (0..=self.caps.hmax)
            .map(|h| (0..self.gens.len()).filter(|&g| self.gens[g].0 == h).collect())
            .collect();
        let rank_at = |h: usize| -> usize {
            if h == 0 || h > self.caps.hmax {
                return 0;
            }
            let rows = &by_level[h - 1];
            let cols: Vec<Vec<u32>> = by_level[h]
                .iter()
                .map(|&g| {
                    let (_, k) = self.generator_symbol(g);
                    let mut v = vec![0; rows.len()];
                    for (t, c) in self.underlying.boundary(h, k) {
                        let (s, g2) = self.symbols[h - 1][*t];
                        if s == 0 {
                            if let Some(x) = c.constant() {
                                v[rows.iter().position(|&r| r == g2).unwrap()] = x;
                            }
                        }
                    }
                    v
                })
                .collect();
            FMatrix::from_columns(f, rows.len(), &cols).rank()
        };
        (0..=self.caps.hmax)
            .map(|h| by_level[h].len() - rank_at(h) - rank_at(h + 1))
            .collect()
    }

    /// `rank_Q U_i = Σ_a C(n, a) β_{i−a}` level by level.
    pub fn check_underlying_ranks(&self) -> bool {
        let n = self.algebra.n();
        let b = self.betti();
        (0..=self.caps.hmax).all(|i| {
            let expected: usize = (0..=n.min(i)).map(|a| binom(n, a) * b[i - a]).sum();
            self.underlying.rank(i) == expected
        })
    }

    fn width(&self) -> i32 {
        scan_width(&self.algebra, &self.module)
    }

    /// `H_0(U) = M` and `H_i(U) = 0` for `1 ≤ i < hmax` inside the scan window.
    pub fn verify_exactness(&self) -> Result<(), (usize, i32)> {
        let c = &self.underlying;
        let w = self.width();
        for h in 0..self.caps.hmax {
            let Some(lo) = c.min_twist(h) else { continue };
            let hi = c.max_twist(h).max(c.max_twist(h + 1)).unwrap() + w;
            for d in lo..=hi.min(self.caps.dmax) {
                let expected = if h == 0 { self.module.dim(d) } else { 0 };
                if c.homology_dim(h, d) != expected {
                    return Err((h, d));
                }
            }
        }
        Ok(())
    }

    /// The restriction to `Q` with `σ_i` = left multiplication by `e_i`.
    pub fn dg_structure(&self) -> DgStructure {
        let e = &self.algebra;
        let one = e.ring().one();
        let neg_one = e.ring().neg(&one);
        let top = self.caps.hmax;
        let sigma = (0..e.n())
            .map(|i| {
                (0..top)
                    .map(|h| {
                        self.symbols[h]
                            .iter()
                            .map(|&(s, g)| match product_sign(1 << i, s) {
                                None => Vec::new(),
                                Some(neg) => match self.index.get(&(s | 1 << i, g)) {
                                    Some(&k) => vec![(k, if neg { neg_one.clone() } else { one.clone() })],
                                    None => Vec::new(),
                                },
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DgStructure {
            complex: self.underlying.clone(),
            f: e.ideal().elems().to_vec(),
            sigma,
        }
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn accumulate(ring: &GradedRing, acc: &mut HashMap<usize, RingElem>, k: usize, c: RingElem) {
    match acc.get_mut(&k) {
        Some(cur) => *cur = ring.add(cur, &c),
        None => {
            acc.insert(k, c);
        }
    }
}

/// Largest degree piece, in `Q`-basis coordinates, the cycle scan will reduce.
/// Past it the resolution stops early and is marked cap-sensitive.
pub const E_WORK_LIMIT: usize = 2000;

fn scan_width(e: &KoszulAlgebra, module: &PresentedModule) -> i32 {
    let base = crate::resolution::window_width(e.ring(), module);
    base.max(2 * e.ideal().max_degree() as i32 + 2)
}

/// Minimal semifree resolution of an `R`-module over `E`, built by killing cycles.
///
/// `module` is presented over `Q` and must be annihilated by `I`.
pub fn minimal_e_resolution(
    module: &PresentedModule,
    e: &KoszulAlgebra,
    caps: Caps,
) -> Result<SemifreeDgModule, HypothesisError> {
    e.ideal().annihilates(module)?;
    let mut u = SemifreeDgModule::empty(e, module, caps);
    let window = ScanWindow {
        width: scan_width(e, module),
        dmax: caps.dmax,
    };
    let gens0 = module.minimal_generators();
    for &g in &gens0 {
        u.add_generator(0, module.twists()[g], &Vec::new());
    }
    u.cap_sensitive = module.max_degree() > caps.dmax;
    for h in 1..=caps.hmax {
        let prev = h - 1;
        let Some(start) = u.underlying.min_twist(prev) else {
            continue;
        };
        let mut upper = u.underlying.max_twist(prev).unwrap();
        if prev == 0 {
            upper = upper.max(module.max_degree());
        }
        let widest = (start..=upper + window.width)
            .map(|d| u.underlying.layout(prev, d).total)
            .max()
            .unwrap_or(0);
        if widest > E_WORK_LIMIT {
            u.truncate(prev);
            break;
        }
        let snapshot = u.underlying.clone();
        let cycles = |d: i32| -> Vec<Vec<u32>> {
            if prev == 0 {
                module.syzygies_on(&gens0, d).1
            } else {
                snapshot.cycles(prev, d)
            }
        };
        let kill = select_cycles(&snapshot, prev, &cycles, start, upper, window);
        u.cap_sensitive |= kill.cap_sensitive;
        for (d, z) in kill.chosen {
            let terms = snapshot.chain_terms(prev, d, &z);
            u.add_generator(h, d, &terms);
        }
    }
    Ok(u)
}

pub fn e_poincare_series(
    module: &PresentedModule,
    e: &KoszulAlgebra,
    caps: Caps,
) -> Result<(PoincareSeries, bool), HypothesisError> {
    let u = minimal_e_resolution(module, e, caps)?;
    Ok((u.poincare(), u.cap_sensitive))
}

/// A `Q`-free complex with degree-one operators `σ_i` (the action of `e_i`).
#[derive(Clone, Debug)]
pub struct DgStructure {
    pub complex: FreeComplex,
    pub f: Vec<RingElem>,
    /// `sigma[i][h][j]`: image of basis element `j` of `F_h`, in `F_{h+1}`.
    pub sigma: Vec<Vec<Vec<Boundary>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DgViolation {
    Homotopy { i: usize, h: usize, j: usize },
    Exterior { i: usize, i2: usize, h: usize, j: usize },
}

type Sparse = HashMap<usize, RingElem>;

impl DgStructure {
    /// `E` viewed over `Q`, acting on itself from the left.
    pub fn koszul(e: &KoszulAlgebra) -> Self {
        let ring = e.ring();
        let n = e.n();
        let one = ring.one();
        let neg_one = ring.neg(&one);
        let sigma = (0..n)
            .map(|i| {
                (0..n)
                    .map(|h| {
                        e.level(h)
                            .iter()
                            .map(|&s| match product_sign(1 << i, s) {
                                None => Vec::new(),
                                Some(neg) => {
                                    let k = e.index_of(s | 1 << i);
                                    vec![(k, if neg { neg_one.clone() } else { one.clone() })]
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DgStructure {
            complex: e.complex().clone(),
            f: e.ideal().elems().to_vec(),
            sigma,
        }
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Number of levels on which every `σ_i` is defined.
    pub fn sigma_levels(&self) -> usize {
        self.sigma.iter().map(Vec::len).min().unwrap_or(usize::MAX)
    }

    fn ring(&self) -> &Arc<GradedRing> {
        self.complex.ring()
    }

    fn apply_sigma(&self, i: usize, h: usize, x: &Sparse) -> Sparse {
        let ring = self.ring();
        let mut out = HashMap::new();
        for (j, c) in x {
            for (k, c2) in &self.sigma[i][h][*j] {
                accumulate(ring, &mut out, *k, ring.multiply(c, c2));
            }
        }
        out
    }

    fn apply_d(&self, h: usize, x: &Sparse) -> Sparse {
        let ring = self.ring();
        let mut out = HashMap::new();
        if h == 0 {
            return out;
        }
        for (j, c) in x {
            for (k, c2) in self.complex.boundary(h, *j) {
                accumulate(ring, &mut out, *k, ring.multiply(c, c2));
            }
        }
        out
    }

    fn is_zero(x: &Sparse) -> bool {
        x.values().all(RingElem::is_zero)
    }

    fn add(&self, a: &Sparse, b: &Sparse) -> Sparse {
        let mut out = a.clone();
        for (k, v) in b {
            accumulate(self.ring(), &mut out, *k, v.clone());
        }
        out
    }

    /// Checks `σ_i∂ + ∂σ_i = f_i`, `σ_iσ_j + σ_jσ_i = 0` and `σ_i^2 = 0` wherever defined.
    pub fn verify(&self) -> Result<(), DgViolation> {
        let ring = self.ring();
        let top = self.sigma_levels().min(self.complex.levels().saturating_sub(1));
        for i in 0..self.n() {
            for h in 0..top {
                for j in 0..self.complex.rank(h) {
                    let g: Sparse = HashMap::from([(j, ring.one())]);
                    let ds = self.apply_d(h + 1, &self.apply_sigma(i, h, &g));
                    let sd = if h == 0 {
                        HashMap::new()
                    } else {
                        self.apply_sigma(i, h - 1, &self.apply_d(h, &g))
                    };
                    let mut total = self.add(&ds, &sd);
                    accumulate(ring, &mut total, j, ring.neg(&self.f[i]));
                    if !Self::is_zero(&total) {
                        return Err(DgViolation::Homotopy { i, h, j });
                    }
                }
            }
        }
        for h in 0..top.saturating_sub(1) {
            for i in 0..self.n() {
                for i2 in i..self.n() {
                    for j in 0..self.complex.rank(h) {
                        let g: Sparse = HashMap::from([(j, ring.one())]);
                        let a = self.apply_sigma(i, h + 1, &self.apply_sigma(i2, h, &g));
                        let total = if i == i2 {
                            a
                        } else {
                            let b = self.apply_sigma(i2, h + 1, &self.apply_sigma(i, h, &g));
                            self.add(&a, &b)
                        };
                        if !Self::is_zero(&total) {
                            return Err(DgViolation::Exterior { i, i2, h, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Best-effort search for `σ_1..σ_n` on levels `0..levels` of `f_complex`.
///
/// Each level is a linear system in the new `σ` values once the lower levels are
/// fixed. When a level is inconsistent the search restarts with random choices
/// from the affine solution spaces. `None` does not prove non-existence.
pub fn solve_dg_structure(
    f_complex: &FreeComplex,
    e: &KoszulAlgebra,
    levels: usize,
    attempts: usize,
    seed: u64,
) -> Option<DgStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = levels.min(f_complex.levels().saturating_sub(1));
    for attempt in 0..attempts.max(1) {
        let mut st = DgStructure {
            complex: f_complex.clone(),
            f: e.ideal().elems().to_vec(),
            sigma: vec![Vec::new(); e.n()],
        };
        let mut ok = true;
        for h in 0..levels {
            match solve_level(&st, h, if attempt == 0 { None } else { Some(&mut rng) }) {
                Some(level) => {
                    for (i, l) in level.into_iter().enumerate() {
                        st.sigma[i].push(l);
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && st.verify().is_ok() {
            return Some(st);
        }
    }
    None
}

/// Solves for `σ_i` on `F_h` given `σ` on lower levels.
fn solve_level(st: &DgStructure, h: usize, rng: Option<&mut ChaCha8Rng>) -> Option<Vec<Vec<Boundary>>> {
    let c = &st.complex;
    let ring = c.ring();
    let field: PrimeField = ring.field();
    let n = st.n();
    let twists_h = c.twists(h);
    // unknown block (i, j) = coordinates of σ_i(g_j) in F_{h+1} at degree t_j + deg f_i
    let mut blocks: Vec<(usize, usize, i32, usize, usize)> = Vec::new();
    let mut total = 0;
    for i in 0..n {
        for (j, &t) in twists_h.iter().enumerate() {
            let d = t + st.f[i].degree as i32;
            let w = c.layout(h + 1, d).total;
            blocks.push((i, j, d, total, w));
            total += w;
        }
    }
    let block_of = |i: usize, j: usize| blocks[i * twists_h.len() + j];
    let mut rows: Vec<(Vec<(usize, u32)>, u32)> = Vec::new();

    // homotopy: ∂σ_i(g_j) = f_i g_j − σ_i(∂g_j)
    for &(i, j, d, off, w) in &blocks {
        let target = c.layout(h, d);
        let images = c.boundary_images(h + 1, d);
        let mut rhs = vec![0u32; target.total];
        let (boff, bdim) = target.blocks[j];
        if bdim > 0 {
            rhs[boff..boff + bdim].copy_from_slice(&st.f[i].coeffs);
        }
        if h > 0 {
            for (k, coeff) in c.boundary(h, j) {
                for (l, c2) in &st.sigma[i][h - 1][*k] {
                    let p = ring.multiply(coeff, c2);
                    let (o, dim) = target.blocks[*l];
                    for (a, &b) in rhs[o..o + dim].iter_mut().zip(&p.coeffs) {
                        *a = field.sub(*a, b);
                    }
                }
            }
        }
        debug_assert_eq!(images.len(), w);
        for r in 0..target.total {
            let coeffs: Vec<(usize, u32)> = (0..w)
                .filter_map(|col| {
                    let x = images[col][r];
                    (x != 0).then_some((off + col, x))
                })
                .collect();
            rows.push((coeffs, rhs[r]));
        }
    }

    // exterior relations on F_{h−1}: σ_a σ_b + σ_b σ_a = 0, σ_a^2 = 0
    if h > 0 {
        for a in 0..n {
            for b in a..n {
                for l in 0..c.rank(h - 1) {
                    let d = c.twists(h - 1)[l] + st.f[a].degree as i32 + st.f[b].degree as i32;
                    let target = c.layout(h + 1, d);
                    let mut eq: Vec<HashMap<usize, u32>> = vec![HashMap::new(); target.total];
                    let pairs: Vec<(usize, usize)> = if a == b { vec![(a, a)] } else { vec![(a, b), (b, a)] };
                    for (outer, inner) in pairs {
                        // σ_outer(σ_inner(g_l)) with σ_inner(g_l) = Σ c_j g_j
                        for (j, cj) in &st.sigma[inner][h - 1][l] {
                            let (_, _, dj, off, w) = block_of(outer, *j);
                            let src = c.layout(h + 1, dj);
                            for col in 0..w {
                                // coordinate col of the block is basis monomial pos of generator k
                                let (k, pos) = locate(&src, col);
                                let deg_b = (dj - c.twists(h + 1)[k]) as u32;
                                let (o, dim) = target.blocks[k];
                                let mut out = vec![0u32; dim];
                                ring.mul_basis_into(deg_b, pos, cj, 1, &mut out);
                                for (r, &x) in out.iter().enumerate() {
                                    if x != 0 {
                                        let e = eq[o + r].entry(off + col).or_insert(0);
                                        *e = field.add(*e, x);
                                    }
                                }
                            }
                        }
                    }
                    for row in eq {
                        let coeffs: Vec<(usize, u32)> = row.into_iter().filter(|&(_, x)| x != 0).collect();
                        if !coeffs.is_empty() {
                            rows.push((coeffs, 0));
                        }
                    }
                }
            }
        }
    }

    let mut m = FMatrix::zeros(field, rows.len(), total);
    let mut rhs = Vec::with_capacity(rows.len());
    for (r, (coeffs, b)) in rows.iter().enumerate() {
        for &(col, x) in coeffs {
            m.set(r, col, x);
        }
        rhs.push(*b);
    }
    let mut x = m.solve(&rhs).ok()??;
    if let Some(rng) = rng {
        let k = m.kernel_basis();
        for col in 0..k.cols() {
            let a: u32 = rng.gen_range(0..field.modulus());
            field.axpy(&mut x, a, &k.column(col));
        }
    }
    let mut out = vec![Vec::new(); n];
    for &(i, _j, d, off, w) in &blocks {
        out[i].push(c.chain_terms(h + 1, d, &x[off..off + w]));
    }
    Some(out)
}

fn locate(layout: &crate::graded::module::Layout, col: usize) -> (usize, usize) {
    for (k, &(off, dim)) in layout.blocks.iter().enumerate() {
        if col >= off && col < off + dim {
            return (k, col - off);
        }
    }
    unreachable!("column inside layout")
}

/// `(S, H, level of g in F, index of g)`.
pub type UESymbol = (u32, Vec<u32>, usize, usize);

/// `U_E(F)` with basis symbols `e_S ⊗ y^(H) ⊗ g`.
#[derive(Clone, Debug)]
pub struct UEComplex {
    pub complex: FreeComplex,
    pub symbols: Vec<Vec<UESymbol>>,
}

/// Builds `U_E(F)` in levels `0..=top`. Needs `F` through level `top` and `σ` through `top − 2`.
pub fn build_ue(st: &DgStructure, e: &KoszulAlgebra, top: usize) -> UEComplex {
    let ring = e.ring().clone();
    let n = e.n();
    let fc = &st.complex;
    let fdeg: Vec<i32> = st.f.iter().map(|f| f.degree as i32).collect();
    let mut complex = FreeComplex::new(ring.clone());
    let mut symbols: Vec<Vec<UESymbol>> = Vec::new();
    let mut index: Vec<HashMap<UESymbol, usize>> = Vec::new();
    for level in 0..=top {
        complex.ensure_level(level);
        let mut syms = Vec::new();
        for a in 0..=n.min(level) {
            for b in 0..=(level - a) / 2 {
                if n == 0 && b > 0 {
                    break;
                }
                let cl = level - a - 2 * b;
                if cl >= fc.levels() || (b > 0 && cl >= st.sigma_levels()) {
                    continue;
                }
                for hh in monomials(n, b) {
                    for s in subsets_of_size(n, a) {
                        for j in 0..fc.rank(cl) {
                            syms.push((s, hh.clone(), cl, j));
                        }
                    }
                }
            }
        }
        let mut idx = HashMap::new();
        for sym in &syms {
            let (s, hh, cl, j) = sym;
            let (s, cl, j) = (*s, *cl, *j);
            let odd = s.count_ones() % 2 == 1;
            let twist = e.mask_degree(s)
                + hh.iter().zip(&fdeg).map(|(&x, &d)| x as i32 * d).sum::<i32>()
                + fc.twists(cl)[j];
            let mut acc: HashMap<usize, RingElem> = HashMap::new();
            let push = |key: (u32, Vec<u32>, usize, usize), c: RingElem, acc: &mut HashMap<usize, RingElem>| {
                let k = index[level - 1][&key];
                accumulate(&ring, acc, k, c);
            };
            if level > 0 {
                for (t, c) in e.d_basis(s) {
                    push((t, hh.clone(), cl, j), c, &mut acc);
                }
                if cl > 0 {
                    for (k, c) in fc.boundary(cl, j) {
                        let c = if odd { ring.neg(c) } else { c.clone() };
                        push((s, hh.clone(), cl - 1, *k), c, &mut acc);
                    }
                }
                for i in 0..n {
                    if hh[i] == 0 {
                        continue;
                    }
                    let mut lower = hh.clone();
                    lower[i] -= 1;
                    if let Some(neg) = product_sign(1 << i, s) {
                        let c = if neg { ring.neg(&ring.one()) } else { ring.one() };
                        push((s | 1 << i, lower.clone(), cl, j), c, &mut acc);
                    }
                    for (k, c) in &st.sigma[i][cl][j] {
                        let c = if odd { c.clone() } else { ring.neg(c) };
                        push((s, lower.clone(), cl + 1, *k), c, &mut acc);
                    }
                }
            }
            let mut terms: Boundary = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            terms.sort_by_key(|(k, _)| *k);
            let k = complex.add_generator(level, twist, terms);
            idx.insert(sym.clone(), k);
        }
        symbols.push(syms);
        index.push(idx);
    }
    UEComplex { complex, symbols }
}

impl UEComplex {
    /// `rank U_i = Σ_{a+2b+c=i} C(n,a) · #Γ_b · rank F_c`.
    pub fn check_basis_count(&self, st: &DgStructure) -> bool {
        let n = st.n();
        let gamma = gamma_hilbert(n, 2 * self.complex.levels());
        (0..self.complex.levels()).all(|i| {
            let mut expected = 0usize;
            for a in 0..=n.min(i) {
                for b in 0..=(i - a) / 2 {
                    let cl = i - a - 2 * b;
                    if cl >= st.complex.levels() || (b > 0 && cl >= st.sigma_levels()) {
                        continue;
                    }
                    expected += binom(n, a) * gamma.coeff(2 * b) as usize * st.complex.rank(cl);
                }
            }
            expected == self.complex.rank(i)
        })
    }

    /// `H_0 = M`, `H_i = 0` for `1 ≤ i < top` over internal degrees `0..=dcap`.
    pub fn verify_resolves(&self, module: &PresentedModule, dcap: i32) -> Result<(), (usize, i32)> {
        let c = &self.complex;
        for h in 0..c.levels().saturating_sub(1) {
            for d in module.min_twist().unwrap_or(0).min(0)..=dcap {
                let expected = if h == 0 { module.dim(d) } else { 0 };
                if c.homology_dim(h, d) != expected {
                    return Err((h, d));
                }
            }
        }
        Ok(())
    }
}

/// Both sides of `P^E_M = P^Q_M · Γ_n(t)`, each computed by its own engine.
#[derive(Clone, Debug)]
pub struct LemmaEquality {
    pub p_e: PoincareSeries,
    pub p_q_gamma: PoincareSeries,
    pub comparison: Comparison,
    pub cap_sensitive: bool,
}

/// Runs both engines; the hypothesis `I ⊆ m·ann(M)` must hold.
pub fn check_lemma_equality(
    module: &PresentedModule,
    e: &KoszulAlgebra,
    caps: Caps,
) -> Result<LemmaEquality, String> {
    match e.ideal().check_shamash_condition(module) {
        Ok(true) => {}
        Ok(false) => return Err("hypothesis I ⊆ m·ann(M) not satisfied".into()),
        Err(err) => return Err(err.to_string()),
    }
    let u = minimal_e_resolution(module, e, caps).map_err(|err| err.to_string())?;
    let q = minimal_free_resolution(module, caps);
    let p_e = u.poincare();
    let p_q_gamma = q.poincare().mul(&gamma_hilbert(e.n(), caps.hmax));
    Ok(LemmaEquality {
        comparison: cmp_coefficientwise(&p_e, &p_q_gamma),
        p_e,
        p_q_gamma,
        cap_sensitive: u.cap_sensitive || q.cap_sensitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{parse_poly, HomogeneousIdeal};

    fn ring(vars: &[(&str, u32)], rels: &[&str]) -> Arc<GradedRing> {
        GradedRing::parse(PrimeField::new(101).unwrap(), vars, rels)
    }

    fn ideal(q: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
        let names = q.var_names();
        HomogeneousIdeal::new(q.clone(), gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect()).unwrap()
    }

    #[test]
    fn over_trivial_algebra_matches_ring_resolution() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&HomogeneousIdeal::zero(q.clone())).unwrap();
        let k = PresentedModule::residue_field(q);
        let u = minimal_e_resolution(&k, &e, Caps::new(4, 20)).unwrap();
        assert_eq!(u.betti(), vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn residue_field_over_koszul_on_x() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
        let k = PresentedModule::residue_field(q);
        let u = minimal_e_resolution(&k, &e, Caps::new(6, 20)).unwrap();
        assert_eq!(u.betti(), vec![1, 1, 0, 0, 0, 0, 0]);
        assert!(u.is_minimal());
        assert!(u.underlying.d_squared_zero().is_ok());
        u.verify_exactness().unwrap();
        assert_eq!(u.tor_ranks(), u.betti());
        assert!(u.check_underlying_ranks());
    }

    #[test]
    fn residue_field_over_koszul_on_x_squared() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
        let k = PresentedModule::residue_field(q);
        let u = minimal_e_resolution(&k, &e, Caps::new(6, 30)).unwrap();
        assert_eq!(u.betti(), vec![1, 2, 2, 2, 2, 2, 2]);
        assert!(u.is_minimal());
        u.verify_exactness().unwrap();
        // n = 1: rank U_i = β_i + β_{i−1}
        for i in 1..=6 {
            assert_eq!(u.underlying.rank(i), u.betti()[i] + u.betti()[i - 1]);
        }
    }

    #[test]
    fn ring_over_embedded_hypersurface_algebra() {
        let q = ring(&[("x", 1)], &["x^3"]);
        let i = ideal(&q, &["x^2"]);
        let e = KoszulAlgebra::new(&i).unwrap();
        let r_mod = PresentedModule::cyclic(q, i.gens()).unwrap();
        let u = minimal_e_resolution(&r_mod, &e, Caps::new(8, 40)).unwrap();
        assert_eq!(u.poincare(), gamma_hilbert(1, 8));
    }

    #[test]
    fn rejects_non_r_modules() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
        let free = PresentedModule::free(q, vec![0]);
        assert!(minimal_e_resolution(&free, &e, Caps::new(2, 10)).is_err());
    }

    #[test]
    fn koszul_acts_on_itself() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2", "x*y"])).unwrap();
        let st = DgStructure::koszul(&e);
        assert_eq!(st.verify(), Ok(()));
    }

    #[test]
    fn e_resolution_restricts_to_dg_structure() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
        let k = PresentedModule::residue_field(q);
        let u = minimal_e_resolution(&k, &e, Caps::new(5, 30)).unwrap();
        let st = u.dg_structure();
        assert_eq!(st.verify(), Ok(()));
        let ue = build_ue(&st, &e, 4);
        assert!(ue.complex.d_squared_zero().is_ok());
        assert!(ue.check_basis_count(&st));
        ue.verify_resolves(&k, 8).unwrap();
    }

    #[test]
    fn solver_on_plane_residue_field() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
        let k = PresentedModule::residue_field(q);
        let f = minimal_free_resolution(&k, Caps::new(3, 20)).complex;
        let st = solve_dg_structure(&f, &e, 3, 4, 7).expect("Koszul complex on x, y is a dg module");
        assert_eq!(st.verify(), Ok(()));
        let ue = build_ue(&st, &e, 3);
        assert!(ue.complex.d_squared_zero().is_ok());
        assert!(ue.check_basis_count(&st));
        ue.verify_resolves(&k, 8).unwrap();
    }

    #[test]
    fn ue_of_trivial_algebra_is_f() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let e = KoszulAlgebra::new(&HomogeneousIdeal::zero(q.clone())).unwrap();
        let k = PresentedModule::residue_field(q);
        let f = minimal_free_resolution(&k, Caps::new(3, 20)).complex;
        let st = solve_dg_structure(&f, &e, 3, 1, 0).unwrap();
        let ue = build_ue(&st, &e, 3);
        assert_eq!(ue.complex.ranks(), f.ranks());
    }

    #[test]
    fn lemma_equality_examples() {
        let q = ring(&[("x", 1), ("y", 1)], &[]);
        let k = PresentedModule::residue_field(q.clone());
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
        let l = check_lemma_equality(&k, &e, Caps::new(8, 30)).unwrap();
        assert_eq!(l.comparison, Comparison::Equal);
        assert_eq!(l.p_e.coeffs(), &[1, 2, 2, 2, 2, 2, 2, 2, 2]);
        let e0 = KoszulAlgebra::new(&HomogeneousIdeal::zero(q.clone())).unwrap();
        assert_eq!(check_lemma_equality(&k, &e0, Caps::new(4, 20)).unwrap().comparison, Comparison::Equal);
        let ex = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
        assert!(check_lemma_equality(&k, &ex, Caps::new(4, 20)).is_err());
        let c = ring(&[("x", 1)], &["x^3"]);
        let ec = KoszulAlgebra::new(&ideal(&c, &["x^2"])).unwrap();
        let kc = PresentedModule::residue_field(c);
        let l = check_lemma_equality(&kc, &ec, Caps::new(8, 40)).unwrap();
        assert_eq!(l.comparison, Comparison::Equal);
        // 1/((1−t)(1−t^2))
        assert_eq!(l.p_e.coeffs(), &[1, 1, 2, 2, 3, 3, 4, 4, 5]);
    }
}
