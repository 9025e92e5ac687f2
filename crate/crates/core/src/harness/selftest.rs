//! The acceptance battery, shared by `qci selftest` and the `acceptance` test target.

use super::battery::{certify, run_battery, BatteryOptions};
use super::generate::{generate_instance, Family, GenParams};
use super::report::{emit_report, Format};
use crate::checks::{check_inert, Orientation, Verdict};
use crate::e_resolution::{build_ue, minimal_e_resolution, solve_dg_structure, DgStructure};
use crate::exactlin::PrimeField;
use crate::graded::{parse_poly, GradedRing, HomogeneousIdeal, Poly, PresentedModule};
use crate::koszul::{build_tate_two_step, gamma_hilbert, koszul_homology, KoszulAlgebra};
use crate::resolution::{grade, minimal_free_resolution, oracle_resolution, Caps};
use crate::PoincareSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.detail
        )
    }
}

fn field() -> PrimeField {
    PrimeField::new(101).unwrap()
}

fn ring(vars: &[&str], rels: &[&str]) -> Arc<GradedRing> {
    let v: Vec<(&str, u32)> = vars.iter().map(|&n| (n, 1)).collect();
    GradedRing::parse(field(), &v, rels)
}

fn polys(q: &GradedRing, ps: &[&str]) -> Vec<Poly> {
    let names = q.var_names();
    ps.iter().map(|p| parse_poly(p, &names).unwrap()).collect()
}

fn ideal(q: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
    HomogeneousIdeal::new(q.clone(), polys(q, gens)).unwrap()
}

fn unit(order: usize, e: i64) -> PoincareSeries {
    PoincareSeries::one_minus_t2_pow(order, e)
}

fn timed(id: usize, title: &'static str, f: impl FnOnce() -> Result<String, String>) -> Criterion {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Criterion {
        id,
        title,
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn koszul_sanity() -> Criterion {
    timed(1, "Koszul sanity on (x, y, z)", || {
        let q = ring(&["x", "y", "z"], &[]);
        let i = ideal(&q, &["x", "y", "z"]);
        let res = minimal_free_resolution(&PresentedModule::residue_field(q.clone()), Caps::new(5, 20));
        let betti = res.betti().total;
        ensure(betti == vec![1, 3, 3, 1, 0, 0], || format!("betti {betti:?}"))?;
        let g = grade(&i, 40);
        ensure(g == 3, || format!("grade {g}"))?;
        Ok(format!("betti {betti:?}, grade {g}"))
    })
}

pub fn regular_sequence_change_of_rings() -> Criterion {
    timed(2, "hypersurface xy: P^Q = P^R (1 - t^2)", || {
        let h = 20;
        let q = ring(&["x", "y"], &[]);
        let i = ideal(&q, &["x*y"]);
        let r = i.quotient_ring();
        let m = PresentedModule::cyclic(q.clone(), &polys(&q, &["x"])).unwrap();
        let pq = minimal_free_resolution(&m, Caps::new(h, 40)).poincare();
        let pr = minimal_free_resolution(&m.over(r).unwrap(), Caps::new(h, 40)).poincare();
        let mut expect_q = vec![0; h + 1];
        expect_q[0] = 1;
        expect_q[1] = 1;
        ensure(pq.coeffs() == expect_q, || format!("P^Q {pq}"))?;
        ensure(pr.coeffs() == vec![1; h + 1], || format!("P^R {pr}"))?;
        ensure(pq == pr.mul(&unit(h, 1)), || "P^Q != P^R (1 - t^2)".into())?;
        Ok(format!("P^Q = {pq}; P^R = {pr}"))
    })
}

pub fn koszul_upper_equality() -> Criterion {
    timed(3, "I = (x^2), M = k: P^E = P^Q / (1 - t^2)", || {
        let h = 12;
        let q = ring(&["x", "y"], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
        let k = PresentedModule::residue_field(q.clone());
        let u = minimal_e_resolution(&k, &e, Caps::new(h, 40)).map_err(|e| e.to_string())?;
        let pe = u.poincare();
        let closed = PoincareSeries::one_plus_t_pow(h, 2).mul(&unit(h, -1));
        ensure(pe == closed, || format!("P^E {pe} vs {closed}"))?;
        let pq = minimal_free_resolution(&k, Caps::new(h, 40)).poincare();
        ensure(pe == pq.mul(&unit(h, -1)), || "P^E != P^Q / (1 - t^2)".into())?;
        ensure(u.is_minimal(), || "E-resolution not minimal".into())?;
        Ok(format!("P^E = {pe}"))
    })
}

pub fn koszul_lower_equality() -> Criterion {
    timed(4, "I = (x), M = k: P^Q = (1 + t) P^E", || {
        let h = 12;
        let q = ring(&["x", "y"], &[]);
        let e = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
        let k = PresentedModule::residue_field(q.clone());
        let pe = minimal_e_resolution(&k, &e, Caps::new(h, 40)).map_err(|e| e.to_string())?.poincare();
        let mut expect = vec![0; h + 1];
        expect[0] = 1;
        expect[1] = 1;
        ensure(pe.coeffs() == expect, || format!("P^E {pe}"))?;
        let pq = minimal_free_resolution(&k, Caps::new(h, 40)).poincare();
        ensure(pq == pe.mul(&PoincareSeries::one_plus_t_pow(h, 1)), || format!("P^Q {pq}"))?;
        Ok(format!("P^E = {pe}; P^Q = {pq}"))
    })
}

/// One certified instance used by the follow-up criteria.
#[derive(Clone, Debug)]
pub struct Certified {
    pub label: String,
    pub ideal: HomogeneousIdeal,
    pub n: usize,
    pub m: usize,
}

fn certification_corpus() -> Vec<(String, HomogeneousIdeal)> {
    let mut out = Vec::new();
    for b in 2..=6u32 {
        for a in 1..b {
            let q = ring(&["x"], &[&format!("x^{b}")]);
            out.push((format!("x^{a} in k[x]/(x^{b})"), ideal(&q, &[&format!("x^{a}")])));
        }
    }
    for seed in 0..25u64 {
        let inst = generate_instance(Family::RandomHomogeneous, GenParams::default(), 1000 + seed);
        let b = inst.build(inst.field()).unwrap();
        out.push((format!("random seed {}", 1000 + seed), b.ideal));
    }
    out
}

/// Criterion 5, plus the list of q.c.i. instances it certified.
pub fn certificate_agreement() -> (Criterion, Vec<Certified>) {
    let mut certified = Vec::new();
    let c = timed(5, "certificates A and B agree", || {
        let caps = Caps::default();
        let mut disagreements = Vec::new();
        let corpus = certification_corpus();
        let total = corpus.len();
        for (label, i) in corpus {
            let e = KoszulAlgebra::new(&i).map_err(|e| format!("{label}: {e}"))?;
            let cert = certify(&e, caps);
            if !cert.agree() {
                disagreements.push(label.clone());
            }
            if cert.qci() {
                certified.push(Certified {
                    label,
                    n: i.len(),
                    m: cert.a.m,
                    ideal: i,
                });
            }
        }
        ensure(disagreements.is_empty(), || format!("disagree on {disagreements:?}"))?;
        Ok(format!("{total} instances, {} q.c.i.", certified.len()))
    });
    (c, certified)
}

pub fn inertness() -> Criterion {
    timed(6, "inertness and grade-factor orientation", || {
        let h = 20;
        let caps = Caps::new(h, 40);
        let mut notes = Vec::new();
        for (vars, rels, gens) in [
            (vec!["x"], vec!["x^3"], vec!["x^2"]),
            (vec!["x", "y"], vec!["x^3"], vec!["x^2", "y^2"]),
        ] {
            let q = ring(&vars, &rels);
            let i = ideal(&q, &gens);
            let e = KoszulAlgebra::new(&i).unwrap();
            let cert = certify(&e, caps);
            ensure(cert.qci(), || format!("{gens:?} not certified q.c.i."))?;
            let k = PresentedModule::residue_field(q.clone());
            ensure(i.check_shamash_condition(&k) == Ok(true), || "hypothesis fails".into())?;
            let r = i.quotient_ring();
            let kq = minimal_free_resolution(&k, caps).poincare();
            let kr = minimal_free_resolution(&PresentedModule::residue_field(r), caps).poincare();
            let inert = check_inert("k", &kr, &kq, &kr, &kq, true, false);
            ensure(inert.verdict == Verdict::Equality, || format!("inertness {:?}", inert.verdict))?;
            let g = grade(&i, 40) as i64;
            let q_side = kq == kr.mul(&unit(h, g));
            let r_side = kr == kq.mul(&unit(h, g));
            let o = match (q_side, r_side) {
                (true, true) => Orientation::Both,
                (true, false) => Orientation::QEqualsRTimesFactor,
                (false, true) => Orientation::REqualsQTimesFactor,
                (false, false) => Orientation::Neither,
            };
            ensure(o != Orientation::Neither, || format!("{gens:?}: neither orientation holds"))?;
            let mi = cert.a.m as i64;
            ensure(g == i.len() as i64 - mi, || format!("grade {g} vs n - m"))?;
            notes.push(format!("{gens:?} grade {g}: {o:?}"));
        }
        Ok(notes.join("; "))
    })
}

pub fn ring_over_e(certified: &[Certified]) -> Criterion {
    timed(7, "P^E_R = 1 / (1 - t^2)^m on certified instances", || {
        let h = 12;
        for c in certified {
            let q = c.ideal.ring().clone();
            let e = KoszulAlgebra::new(&c.ideal).unwrap();
            let rm = PresentedModule::cyclic(q, c.ideal.gens()).unwrap();
            let u = minimal_e_resolution(&rm, &e, Caps::new(h, 40)).map_err(|e| e.to_string())?;
            let expect = unit(h, -(c.m as i64));
            ensure(u.poincare() == expect, || format!("{}: {} vs {}", c.label, u.poincare(), expect))?;
        }
        Ok(format!("{} instances", certified.len()))
    })
}

pub fn residue_field_formula(certified: &[Certified]) -> Criterion {
    timed(8, "P^Q_k = P^R_k (1 - t^2)^(n - m) on certified instances", || {
        let h = 12;
        let caps = Caps::new(h, 40);
        let mut used = 0;
        for c in certified {
            let q = c.ideal.ring().clone();
            let r = c.ideal.quotient_ring();
            if q.edim() != r.edim() {
                continue;
            }
            used += 1;
            let kq = minimal_free_resolution(&PresentedModule::residue_field(q), caps).poincare();
            let kr = minimal_free_resolution(&PresentedModule::residue_field(r), caps).poincare();
            let rhs = kr.mul(&unit(h, c.n as i64 - c.m as i64));
            ensure(kq == rhs, || format!("{}: {kq} vs {rhs}", c.label))?;
        }
        Ok(format!("{used} instances with edim R = edim Q, {} skipped", certified.len() - used))
    })
}

/// Mixed corpus for the sweep: random instances plus both structured families.
pub fn sweep_corpus(count: usize) -> Vec<super::instance::Instance> {
    (0..count as u64)
        .map(|s| match s % 5 {
            0 => generate_instance(Family::RegularSequence, GenParams::default(), s),
            1 => generate_instance(Family::PowerInHypersurface, GenParams::default(), s),
            _ => generate_instance(Family::RandomHomogeneous, GenParams::default(), s),
        })
        .collect()
}

pub fn inequality_sweep() -> Criterion {
    timed(9, "inequality sweep on random instances", || {
        let opts = BatteryOptions {
            caps: Caps::new(8, 40),
            ..Default::default()
        };
        let mut kinds = [0usize; 3];
        let mut checked = 0;
        let mut inconclusive = 0;
        for inst in sweep_corpus(60) {
            let rep = run_battery(&inst, &opts).map_err(|e| format!("{e}\n{inst}"))?;
            match rep.series.m {
                Some(0) => kinds[0] += 1,
                Some(_) => kinds[1] += 1,
                None => kinds[2] += 1,
            }
            for c in &rep.checks {
                match c.verdict {
                    Verdict::Fails => return Err(format!("{} [{:?}] fails on\n{}", c.name, c.module, inst)),
                    Verdict::InconclusiveCap => inconclusive += 1,
                    Verdict::Equality | Verdict::Strict => checked += 1,
                    Verdict::SkippedHypothesis => {}
                }
            }
        }
        Ok(format!(
            "60 instances ({} c.i., {} q.c.i., {} neither), {checked} checks hold, {inconclusive} inconclusive, 0 fail",
            kinds[0], kinds[1], kinds[2]
        ))
    })
}

/// A small random graded module over a random ring, for the oracle comparison.
pub fn random_module(seed: u64) -> PresentedModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = rng.gen_range(1..=3);
    let names = ["x", "y", "z"];
    let vars: Vec<&str> = names[..nvars].to_vec();
    let rels: Vec<String> = if rng.gen_bool(0.5) {
        let v = names[rng.gen_range(0..nvars)];
        vec![format!("{v}^{}", rng.gen_range(2..=3))]
    } else {
        Vec::new()
    };
    let rel_refs: Vec<&str> = rels.iter().map(String::as_str).collect();
    let q = ring(&vars, &rel_refs);
    let ngens = rng.gen_range(1..=2);
    let twists: Vec<i32> = (0..ngens).map(|_| rng.gen_range(0..=1)).collect();
    let ncols = rng.gen_range(1..=3);
    let mut rows = vec![Vec::new(); ngens];
    for _ in 0..ncols {
        let deg = twists.iter().max().unwrap() + rng.gen_range(1..=2);
        for (g, row) in rows.iter_mut().enumerate() {
            let d = (deg - twists[g]) as u32;
            let mut p = Poly::zero();
            for m in q.degree_basis(d) {
                if rng.gen_bool(0.5) {
                    p.add_term(m, rng.gen_range(-2..=2));
                }
            }
            row.push(p);
        }
    }
    PresentedModule::new(q, twists, rows).expect("homogeneous by construction")
}

pub fn oracle_equivalence() -> Criterion {
    timed(10, "oracle tor ranks equal minimal Betti numbers", || {
        let mut redundant = 0;
        for seed in 0..20u64 {
            let m = random_module(seed);
            let minimal = minimal_free_resolution(&m, Caps::new(9, 40));
            let oracle = oracle_resolution(&m, Caps::new(9, 40));
            let b = &minimal.betti().total[..=8];
            let t = &oracle.complex.tor_ranks()[..=8];
            ensure(b == t, || format!("seed {seed}: betti {b:?} vs oracle {t:?}"))?;
            if oracle.complex.ranks() != minimal.complex.ranks() {
                redundant += 1;
            }
        }
        ensure(redundant > 0, || "every oracle came out minimal".into())?;
        Ok(format!("20 modules, i <= 8, {redundant} oracles non-minimal"))
    })
}

fn resolution_entries_positive(c: &crate::FreeComplex) -> bool {
    (1..c.levels()).all(|h| (0..c.rank(h)).all(|j| c.boundary(h, j).iter().all(|(_, e)| e.degree > 0)))
}

pub fn structural_invariants() -> Criterion {
    timed(11, "structural invariants", || {
        let mut count = 0;
        let cases: Vec<(Vec<&str>, Vec<&str>, Vec<&str>)> = vec![
            (vec!["x", "y"], vec![], vec!["x^2"]),
            (vec!["x", "y"], vec![], vec!["x^2", "x*y"]),
            (vec!["x"], vec!["x^3"], vec!["x^2"]),
            (vec!["x", "y"], vec!["x^2", "y^2"], vec!["x", "y"]),
            (vec!["x", "y", "z"], vec![], vec!["x", "y^2", "x*z + z^2"]),
        ];
        for (vars, rels, gens) in &cases {
            let q = ring(vars, rels);
            let i = ideal(&q, gens);
            let e = KoszulAlgebra::new(&i).unwrap();
            e.complex().d_squared_zero().map_err(|w| format!("Koszul d^2 at {w:?}"))?;
            e.check_leibniz().map_err(|w| format!("Leibniz at {w:?}"))?;
            let r = i.quotient_ring();
            let h = koszul_homology(&e, &r, 4, 10);
            let t = build_tate_two_step(&e, &h, 4);
            t.complex.d_squared_zero().map_err(|w| format!("Tate d^2 at {w:?} for {gens:?}"))?;
            let k = PresentedModule::residue_field(q.clone());
            if i.check_shamash_condition(&k) == Ok(true) || i.annihilates(&k).is_ok() {
                let u = minimal_e_resolution(&k, &e, Caps::new(5, 30)).map_err(|e| e.to_string())?;
                u.underlying.d_squared_zero().map_err(|w| format!("E-resolution d^2 at {w:?}"))?;
                ensure(u.is_minimal() && u.tor_ranks() == u.betti(), || format!("{gens:?}: E-minimality"))?;
                ensure(u.check_underlying_ranks(), || format!("{gens:?}: underlying ranks"))?;
                let st = u.dg_structure();
                st.verify().map_err(|v| format!("{gens:?}: {v:?}"))?;
                let ue = build_ue(&st, &e, 4);
                ue.complex.d_squared_zero().map_err(|w| format!("U_E d^2 at {w:?} for {gens:?}"))?;
                ensure(ue.check_basis_count(&st), || format!("{gens:?}: U_E basis count"))?;
                ue.verify_resolves(&k, 8).map_err(|w| format!("{gens:?}: U_E homology at {w:?}"))?;
            }
            let f = minimal_free_resolution(&k, Caps::new(4, 30));
            ensure(f.complex.is_minimal() && resolution_entries_positive(&f.complex), || "minimal flag".into())?;
            let kstruct = DgStructure::koszul(&e);
            kstruct.verify().map_err(|v| format!("{gens:?}: {v:?}"))?;
            if i.annihilates(&k).is_ok() {
                if let Some(st) = solve_dg_structure(&f.complex, &e, 4, 4, 1) {
                    let ue = build_ue(&st, &e, 4);
                    ue.complex.d_squared_zero().map_err(|w| format!("solved U_E d^2 at {w:?}"))?;
                }
            }
            count += 1;
        }
        for n in 0..=8usize {
            let p = unit(16, n as i64).mul(&gamma_hilbert(n, 16));
            ensure(p == PoincareSeries::one(16), || format!("gamma identity n = {n}"))?;
        }
        for seed in [3u64, 4] {
            let inst = generate_instance(Family::RandomHomogeneous, GenParams::default(), seed);
            let opts = BatteryOptions {
                caps: Caps::new(6, 30),
                ..Default::default()
            };
            let a = run_battery(&inst, &opts).map_err(|e| e.to_string())?.without_timing();
            let b = run_battery(&inst, &opts).map_err(|e| e.to_string())?.without_timing();
            ensure(emit_report(&a, Format::Machine) == emit_report(&b, Format::Machine), || "nondeterministic report".into())?;
        }
        Ok(format!("{count} Koszul/Tate/U_E families, gamma n <= 8, determinism"))
    })
}

/// Every criterion in order.
pub fn run_all() -> Vec<Criterion> {
    let mut out = vec![
        koszul_sanity(),
        regular_sequence_change_of_rings(),
        koszul_upper_equality(),
        koszul_lower_equality(),
    ];
    let (c5, certified) = certificate_agreement();
    out.push(c5);
    out.push(inertness());
    out.push(ring_over_e(&certified));
    out.push(residue_field_formula(&certified));
    out.push(inequality_sweep());
    out.push(oracle_equivalence());
    out.push(structural_invariants());
    out
}
