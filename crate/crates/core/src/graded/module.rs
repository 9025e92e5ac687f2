//! Finitely presented graded modules `coker(F' -> F)`.

use super::poly::Poly;
use super::{GradedRing, RingElem, RingError};
use crate::exactlin::{kernel_and_image, Echelon};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("relation row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("expected {expected} relation rows (one per cover generator), found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("relation entry ({row}, {col}) is not homogeneous")]
    Inhomogeneous { row: usize, col: usize },
    #[error("relation column {col} is not homogeneous against the twists")]
    InconsistentColumn { col: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Coordinates of a free module `⊕ Q(-t_i)` in one internal degree.
#[derive(Clone, Debug)]
pub struct Layout {
    /// `(offset, dim Q_{d - t_i})` for each generator.
    pub blocks: Vec<(usize, usize)>,
    pub total: usize,
}

impl Layout {
    pub fn new(ring: &GradedRing, twists: &[i32], d: i32) -> Self {
        let mut off = 0;
        let blocks = twists
            .iter()
            .map(|&t| {
                let dim = ring.dim((d - t) as i64);
                let b = (off, dim);
                off += dim;
                b
            })
            .collect();
        Layout { blocks, total: off }
    }

    /// Splits a coordinate vector into one ring element per generator.
    pub fn split(&self, twists: &[i32], d: i32, v: &[u32]) -> Vec<Option<RingElem>> {
        self.blocks
            .iter()
            .zip(twists)
            .map(|(&(off, dim), &t)| {
                let coeffs = &v[off..off + dim];
                (dim > 0 && coeffs.iter().any(|&c| c != 0)).then(|| RingElem {
                    degree: (d - t) as u32,
                    coeffs: coeffs.to_vec(),
                })
            })
            .collect()
    }
}

/// Images of `b · Σ_i c_i g_i` for every basis monomial `b` of `Q_{d - col_degree}`,
/// written in the target layout at degree `d`.
pub fn column_images(
    ring: &GradedRing,
    column: &[(usize, RingElem)],
    col_degree: i32,
    d: i32,
    target: &Layout,
) -> Vec<Vec<u32>> {
    let src_deg = d - col_degree;
    if src_deg < 0 {
        return Vec::new();
    }
    let n = ring.dim(src_deg as i64);
    (0..n)
        .map(|pos| {
            let mut out = vec![0u32; target.total];
            for (i, r) in column {
                let (off, dim) = target.blocks[*i];
                if dim > 0 {
                    ring.mul_basis_into(src_deg as u32, pos, r, 1, &mut out[off..off + dim]);
                }
            }
            out
        })
        .collect()
}

/// Homogeneous relation: `Σ_i entries_i · g_i`, of internal degree `degree`.
#[derive(Clone, Debug)]
pub struct RelColumn {
    pub degree: i32,
    pub entries: Vec<(usize, RingElem)>,
}

/// Graded module given by cover twists and relation columns.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    ring: Arc<GradedRing>,
    twists: Vec<i32>,
    /// Relation matrix as written: one row per cover generator.
    rows: Vec<Vec<Poly>>,
    columns: Vec<RelColumn>,
}

impl PresentedModule {
    /// `rows[i][j]` is the coefficient of cover generator `i` in relation `j`.
    pub fn new(
        ring: Arc<GradedRing>,
        twists: Vec<i32>,
        rows: Vec<Vec<Poly>>,
    ) -> Result<Self, ModuleError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if !rows.is_empty() && rows.len() != twists.len() {
            return Err(ModuleError::RowCount {
                expected: twists.len(),
                found: rows.len(),
            });
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(ModuleError::RaggedRow {
                    row,
                    expected: ncols,
                    found: r.len(),
                });
            }
        }
        let weights = ring.weights();
        let f = ring.field();
        let mut columns = Vec::new();
        for col in 0..ncols {
            let mut degree: Option<i32> = None;
            let mut entries = Vec::new();
            for (row, r) in rows.iter().enumerate() {
                let p = super::reduce_poly(f, &r[col]);
                if p.is_zero() {
                    continue;
                }
                let ed = p
                    .homogeneous_degree(&weights)
                    .ok_or(ModuleError::Inhomogeneous { row, col })?;
                let cd = ed as i32 + twists[row];
                if degree.is_some_and(|d| d != cd) {
                    return Err(ModuleError::InconsistentColumn { col });
                }
                degree = Some(cd);
                let e = ring.elem_in_degree(&p, ed)?;
                if !e.is_zero() {
                    entries.push((row, e));
                }
            }
            if let Some(degree) = degree {
                if !entries.is_empty() {
                    columns.push(RelColumn { degree, entries });
                }
            }
        }
        Ok(PresentedModule {
            ring,
            twists,
            rows,
            columns,
        })
    }

    pub fn free(ring: Arc<GradedRing>, twists: Vec<i32>) -> Self {
        PresentedModule {
            ring,
            twists,
            rows: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn zero(ring: Arc<GradedRing>) -> Self {
        Self::free(ring, Vec::new())
    }

    /// `Q/(gens)` with cover twist 0.
    pub fn cyclic(ring: Arc<GradedRing>, gens: &[Poly]) -> Result<Self, ModuleError> {
        let row = gens.to_vec();
        let rows = if row.is_empty() { Vec::new() } else { vec![row] };
        Self::new(ring, vec![0], rows)
    }

    /// The residue field `k = Q/m`.
    pub fn residue_field(ring: Arc<GradedRing>) -> Self {
        let n = ring.nvars();
        let gens: Vec<Poly> = (0..n)
            .map(|v| {
                let mut m = vec![0; n];
                m[v] = 1;
                Poly::monomial(m, 1)
            })
            .collect();
        Self::cyclic(ring, &gens).expect("variables are homogeneous")
    }

    /// The same presentation read over another ring on the same variables.
    pub fn over(&self, ring: Arc<GradedRing>) -> Result<Self, ModuleError> {
        if self.rows.is_empty() {
            return Ok(Self::free(ring, self.twists.clone()));
        }
        Self::new(ring, self.twists.clone(), self.rows.clone())
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn columns(&self) -> &[RelColumn] {
        &self.columns
    }

    /// Largest internal degree appearing in the presentation.
    pub fn max_degree(&self) -> i32 {
        self.twists
            .iter()
            .copied()
            .chain(self.columns.iter().map(|c| c.degree))
            .max()
            .unwrap_or(0)
    }

    pub fn min_twist(&self) -> Option<i32> {
        self.twists.iter().copied().min()
    }

    pub fn cover_layout(&self, d: i32) -> Layout {
        Layout::new(&self.ring, &self.twists, d)
    }

    /// Degree-`d` part of the relation submodule, inside the cover.
    pub fn relation_span(&self, d: i32) -> Echelon {
        let layout = self.cover_layout(d);
        let mut span = Echelon::new(self.ring.field(), layout.total);
        for col in &self.columns {
            for v in column_images(&self.ring, &col.entries, col.degree, d, &layout) {
                if span.is_full() {
                    return span;
                }
                span.insert(v);
            }
        }
        span
    }

    /// `dim_k M_d`.
    pub fn dim(&self, d: i32) -> usize {
        let layout = self.cover_layout(d);
        layout.total - self.relation_span(d).rank()
    }

    /// `dim_k (mM)_d`.
    pub fn dim_m_times(&self, d: i32) -> usize {
        let (span, _) = self.m_times_span(d);
        span.rank()
    }

    /// `K_d + (mF)_d` inside the cover, and the cover layout.
    fn m_times_span(&self, d: i32) -> (Echelon, Layout) {
        let layout = self.cover_layout(d);
        let mut span = self.relation_span(d);
        for (&(off, dim), &t) in layout.blocks.iter().zip(&self.twists) {
            if d > t {
                for k in 0..dim {
                    let mut v = vec![0; layout.total];
                    v[off + k] = 1;
                    span.insert(v);
                }
            }
        }
        (span, layout)
    }

    /// Indices of cover generators forming a minimal generating set (graded Nakayama).
    pub fn minimal_generators(&self) -> Vec<usize> {
        let mut degrees: Vec<i32> = self.twists.clone();
        degrees.sort_unstable();
        degrees.dedup();
        let mut chosen = Vec::new();
        for d in degrees {
            let (mut span, layout) = self.m_times_span(d);
            for (i, &t) in self.twists.iter().enumerate() {
                if t == d {
                    let mut v = vec![0; layout.total];
                    v[layout.blocks[i].0] = 1;
                    if span.insert(v) {
                        chosen.push(i);
                    }
                }
            }
        }
        chosen
    }

    /// Kernel of `⊕_{i ∈ gens} Q(-t_i) -> M` in degree `d`, in the layout of the chosen generators.
    pub fn syzygies_on(&self, gens: &[usize], d: i32) -> (Layout, Vec<Vec<u32>>) {
        let sub_twists: Vec<i32> = gens.iter().map(|&i| self.twists[i]).collect();
        let sub = Layout::new(&self.ring, &sub_twists, d);
        let cover = self.cover_layout(d);
        let rel = self.relation_span(d);
        let images: Vec<Vec<u32>> = gens
            .iter()
            .zip(&sub.blocks)
            .flat_map(|(&i, &(_, dim))| {
                let (off, _) = cover.blocks[i];
                (0..dim).map(move |k| (off + k, cover.total))
            })
            .map(|(at, total)| {
                let mut v = vec![0; total];
                v[at] = 1;
                rel.reduce(&mut v);
                v
            })
            .collect();
        let (kernel, _) = kernel_and_image(self.ring.field(), &images, cover.total);
        (sub, kernel)
    }

    /// Whether `q · g` lies in the relation submodule for every cover generator `g`.
    pub fn kills(&self, q: &RingElem) -> bool {
        self.twists.iter().enumerate().all(|(i, &t)| {
            let d = q.degree as i32 + t;
            let layout = self.cover_layout(d);
            let mut v = vec![0; layout.total];
            let (off, dim) = layout.blocks[i];
            if dim == 0 {
                return true;
            }
            for (pos, &c) in q.coeffs.iter().enumerate() {
                v[off + pos] = c;
            }
            self.relation_span(d).contains(&v)
        })
    }

    /// Basis of `ann_Q(M)_d` as coordinate vectors in `Q_d`.
    pub fn annihilator_degree(&self, d: u32) -> Vec<Vec<u32>> {
        let ring = &self.ring;
        let n = ring.dim(d as i64);
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut total = 0;
        for (i, &t) in self.twists.iter().enumerate() {
            let dd = d as i32 + t;
            let layout = self.cover_layout(dd);
            let rel = self.relation_span(dd);
            let (off, dim) = layout.blocks[i];
            debug_assert_eq!(dim, n);
            for (pos, img) in images.iter_mut().enumerate() {
                let mut v = vec![0; layout.total];
                v[off + pos] = 1;
                rel.reduce(&mut v);
                img.extend_from_slice(&v);
            }
            total += layout.total;
        }
        let (kernel, _) = kernel_and_image(ring.field(), &images, total);
        kernel
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::graded::parse_poly;

    fn q2() -> Arc<GradedRing> {
        GradedRing::polynomial(PrimeField::new(101).unwrap(), &[("x", 1), ("y", 1)])
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &["x".to_string(), "y".to_string()]).unwrap()
    }

    #[test]
    fn hilbert_function_of_simple_modules() {
        let q = q2();
        let k = PresentedModule::residue_field(q.clone());
        assert_eq!((0..4).map(|d| k.dim(d)).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
        let free = PresentedModule::free(q.clone(), vec![1]);
        assert_eq!((0..4).map(|d| free.dim(d)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let qx = PresentedModule::cyclic(q, &[p("x")]).unwrap();
        assert_eq!((0..4).map(|d| qx.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn minimal_generators_examples() {
        let q = q2();
        let free = PresentedModule::free(q.clone(), vec![1]);
        assert_eq!(free.minimal_generators(), vec![0]);
        let k = PresentedModule::residue_field(q.clone());
        assert_eq!(k.minimal_generators(), vec![0]);
        // the maximal ideal: cover Q(-1)^2 with the Koszul relation
        let m = PresentedModule::new(q.clone(), vec![1, 1], vec![vec![p("y")], vec![p("-x")]]).unwrap();
        assert_eq!(m.minimal_generators(), vec![0, 1]);
        // a redundant cover generator: g1 = x g0
        let red = PresentedModule::new(q, vec![0, 1], vec![vec![p("x")], vec![p("-1")]]).unwrap();
        assert_eq!(red.minimal_generators(), vec![0]);
        assert_eq!((0..3).map(|d| red.dim(d)).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn annihilator_examples() {
        let q = q2();
        let free = PresentedModule::free(q.clone(), vec![0]);
        assert!(free.annihilator_degree(1).is_empty());
        assert!(free.annihilator_degree(3).is_empty());
        let k = PresentedModule::residue_field(q.clone());
        assert_eq!(k.annihilator_degree(1).len(), 2);
        let qx = PresentedModule::cyclic(q.clone(), &[p("x")]).unwrap();
        let ann = qx.annihilator_degree(1);
        assert_eq!(ann.len(), 1);
        // basis of Q_1 is (x, y)
        assert_eq!(ann[0], vec![1, 0]);
        assert!(qx.kills(&q.var(0)));
        assert!(!qx.kills(&q.var(1)));
    }

    #[test]
    fn syzygies_of_maximal_ideal_cover() {
        let q = q2();
        let k = PresentedModule::residue_field(q);
        let (layout, ker) = k.syzygies_on(&[0], 1);
        assert_eq!(layout.total, 2);
        assert_eq!(ker.len(), 2);
        let (_, ker0) = k.syzygies_on(&[0], 0);
        assert!(ker0.is_empty());
    }

    #[test]
    fn rejects_bad_presentations() {
        let q = q2();
        assert!(matches!(
            PresentedModule::new(q.clone(), vec![0, 0], vec![vec![p("x"), p("y")], vec![p("x")]]),
            Err(ModuleError::RaggedRow { .. })
        ));
        assert!(matches!(
            PresentedModule::new(q.clone(), vec![0], vec![vec![p("x + y^2")]]),
            Err(ModuleError::Inhomogeneous { .. })
        ));
        assert!(matches!(
            PresentedModule::new(q, vec![0, 0], vec![vec![p("x")], vec![p("y^2")]]),
            Err(ModuleError::InconsistentColumn { col: 0 })
        ));
    }
}
