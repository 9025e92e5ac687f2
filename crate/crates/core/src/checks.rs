//! Coefficient-wise identities and inequalities between Poincaré series.
//!
//! Every check stores both sides, so its verdict can be recomputed from the
//! report alone.

use crate::series::{cmp_coefficientwise, Comparison};
use crate::PoincareSeries;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equality,
    Strict,
    Fails,
    InconclusiveCap,
    SkippedHypothesis,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Equality | Verdict::Strict)
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Equality => "holds (equality)",
            Verdict::Strict => "holds (strict)",
            Verdict::Fails => "FAILS",
            Verdict::InconclusiveCap => "inconclusive (cap)",
            Verdict::SkippedHypothesis => "skipped: hypothesis",
        }
    }
}

/// `Inequality`: `lhs ≼ rhs`. `Identity`: `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Relation {
    Inequality { expect_equality: bool },
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub module: Option<String>,
    pub relation: Relation,
    pub verdict: Verdict,
    /// First strict coefficient, or first violating coefficient.
    pub witness: Option<usize>,
    pub lhs: Option<PoincareSeries>,
    pub rhs: Option<PoincareSeries>,
    pub cap_sensitive: bool,
    pub note: Option<String>,
}

fn judge(relation: Relation, lhs: &PoincareSeries, rhs: &PoincareSeries, cap: bool) -> (Verdict, Option<usize>) {
    let cmp = cmp_coefficientwise(lhs, rhs);
    let (v, w) = match (relation, cmp) {
        (_, Comparison::Equal) => (Verdict::Equality, None),
        (Relation::Inequality { expect_equality: false }, Comparison::Below { first }) => (Verdict::Strict, Some(first)),
        (Relation::Inequality { expect_equality: true }, Comparison::Below { first }) => (Verdict::Fails, Some(first)),
        (Relation::Identity, Comparison::Below { first }) => (Verdict::Fails, Some(first)),
        (_, Comparison::Above { first }) => (Verdict::Fails, Some(first)),
        (_, Comparison::Incomparable { first_above }) => (Verdict::Fails, Some(first_above)),
    };
    if cap && v != Verdict::Equality && v != Verdict::Strict {
        (Verdict::InconclusiveCap, w)
    } else {
        (v, w)
    }
}

impl CheckResult {
    pub fn compare(name: &str, module: Option<&str>, relation: Relation, lhs: PoincareSeries, rhs: PoincareSeries, cap: bool) -> Self {
        let (verdict, witness) = judge(relation, &lhs, &rhs, cap);
        CheckResult {
            name: name.to_string(),
            module: module.map(str::to_string),
            relation,
            verdict,
            witness,
            lhs: Some(lhs),
            rhs: Some(rhs),
            cap_sensitive: cap,
            note: None,
        }
    }

    pub fn inequality(name: &str, module: Option<&str>, lhs: PoincareSeries, rhs: PoincareSeries, expect_equality: bool, cap: bool) -> Self {
        Self::compare(name, module, Relation::Inequality { expect_equality }, lhs, rhs, cap)
    }

    pub fn identity(name: &str, module: Option<&str>, lhs: PoincareSeries, rhs: PoincareSeries, cap: bool) -> Self {
        Self::compare(name, module, Relation::Identity, lhs, rhs, cap)
    }

    pub fn skipped(name: &str, module: Option<&str>, relation: Relation, reason: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            module: module.map(str::to_string),
            relation,
            verdict: Verdict::SkippedHypothesis,
            witness: None,
            lhs: None,
            rhs: None,
            cap_sensitive: false,
            note: Some(reason.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Recomputes the verdict from the stored series.
    pub fn recompute(&self) -> Verdict {
        match (&self.lhs, &self.rhs) {
            (Some(l), Some(r)) => judge(self.relation, l, r, self.cap_sensitive).0,
            _ => Verdict::SkippedHypothesis,
        }
    }

    /// Group used by the `--checks` selection: the name up to the first `-`.
    pub fn group(&self) -> &str {
        group_of(&self.name)
    }
}

pub fn group_of(name: &str) -> &str {
    name.split('-').next().unwrap_or(name)
}

/// Names of every group the battery can emit.
pub const GROUPS: &[&str] = &["koszul", "large", "inert", "ci", "qci", "inertness"];

fn unit_pow(order: usize, e: i64) -> PoincareSeries {
    PoincareSeries::one_minus_t2_pow(order, e)
}

/// `P^E ≼ P^Q / (1−t²)^n` and `P^Q ≼ P^E (1+t)^n`, with the equality cases.
pub fn check_koszul_bounds(
    module: &str,
    p_q: &PoincareSeries,
    p_e: &PoincareSeries,
    n: usize,
    shamash: bool,
    nagata: bool,
    cap: bool,
) -> [CheckResult; 2] {
    let d = p_q.order().min(p_e.order());
    let upper = p_q.mul(&unit_pow(d, -(n as i64)));
    let lower = p_e.mul(&PoincareSeries::one_plus_t_pow(d, n as i64));
    [
        CheckResult::inequality("koszul-upper", Some(module), p_e.truncate(d), upper, shamash, cap),
        CheckResult::inequality("koszul-lower", Some(module), p_q.truncate(d), lower, nagata, cap),
    ]
}

/// `P^A_M ≼ P^B_M · P^A_B`.
pub fn check_large_ineq(name: &str, module: &str, p_a: &PoincareSeries, p_b: &PoincareSeries, p_ba: &PoincareSeries, cap: bool) -> CheckResult {
    let rhs = p_b.mul(p_ba);
    let d = rhs.order().min(p_a.order());
    CheckResult::inequality(name, Some(module), p_a.truncate(d), rhs.truncate(d), false, cap)
}

/// `P^R_M · P^Q_k ≼ P^Q_M · P^R_k`; equality means `M` is inert.
pub fn check_inert(
    module: &str,
    p_m_r: &PoincareSeries,
    p_m_q: &PoincareSeries,
    p_k_r: &PoincareSeries,
    p_k_q: &PoincareSeries,
    expect_equality: bool,
    cap: bool,
) -> CheckResult {
    CheckResult::inequality(
        "inert",
        Some(module),
        p_m_r.mul(p_k_q),
        p_m_q.mul(p_k_r),
        expect_equality,
        cap,
    )
}

/// Series of one module over `Q`, `R` and `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSeries {
    pub name: String,
    pub over_q: PoincareSeries,
    pub over_r: PoincareSeries,
    pub over_e: PoincareSeries,
    /// `I ⊆ m·ann_Q(M)`.
    pub shamash: bool,
    pub cap_sensitive: bool,
}

/// Everything the battery feeds to the checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSeries {
    pub n: usize,
    /// `rank H_1(E)` when the map is certified q.c.i.
    pub m: Option<usize>,
    pub complete_intersection: bool,
    pub nagata: bool,
    pub grade: usize,
    pub depth_q: usize,
    pub depth_r: usize,
    pub edim_q: usize,
    pub edim_r: usize,
    pub residue_field: ModuleSeries,
    pub modules: Vec<ModuleSeries>,
    pub r_over_q: PoincareSeries,
    pub r_over_e: PoincareSeries,
    pub r_cap_sensitive: bool,
}

impl InstanceSeries {
    /// The residue field followed by the supplied modules.
    pub fn all_modules(&self) -> impl Iterator<Item = &ModuleSeries> {
        std::iter::once(&self.residue_field).chain(&self.modules)
    }
}

fn constant(v: i64) -> PoincareSeries {
    PoincareSeries::from_coeffs(vec![v])
}

/// Identities and bounds valid for a certified q.c.i. map.
pub fn check_qci_formulas(s: &InstanceSeries) -> Vec<CheckResult> {
    let Some(m) = s.m else {
        return vec![CheckResult::skipped("qci", None, Relation::Identity, "not certified q.c.i.")];
    };
    let n = s.n as i64;
    let mi = m as i64;
    let k = &s.residue_field;
    let kcap = k.cap_sensitive;
    let mut out = Vec::new();

    let d = k.over_q.order().min(k.over_r.order());
    // This form of the balance identity needs edim R = edim Q.
    out.push(if s.edim_q == s.edim_r {
        CheckResult::identity(
            "qci-residue-field",
            Some(&k.name),
            k.over_q.truncate(d),
            k.over_r.mul(&unit_pow(d, n - mi)),
            kcap,
        )
    } else {
        CheckResult::skipped("qci-residue-field", Some(&k.name), Relation::Identity, "edim R < edim Q")
    });

    let d = s.r_over_e.order();
    out.push(CheckResult::identity(
        "qci-ring-over-e",
        None,
        s.r_over_e.clone(),
        unit_pow(d, -mi),
        s.r_cap_sensitive,
    ));

    let balance = |ms: &ModuleSeries| {
        let d = ms.over_q.order().min(ms.over_r.order());
        let side = |p: &PoincareSeries, edim: usize, depth: usize| {
            p.mul(&PoincareSeries::one_minus_t_pow(d, edim as i64))
                .mul(&unit_pow(d, -(depth as i64)))
        };
        CheckResult::identity(
            "qci-balance",
            Some(&ms.name),
            side(&ms.over_r, s.edim_r, s.depth_r),
            side(&ms.over_q, s.edim_q, s.depth_q),
            ms.cap_sensitive,
        )
    };
    out.push(balance(k));
    for ms in &s.modules {
        if s.nagata {
            out.push(balance(ms));
        } else {
            out.push(CheckResult::skipped("qci-balance", Some(&ms.name), Relation::Identity, "I ∩ m² ⊄ mI"));
        }
    }

    out.push(
        CheckResult::identity("qci-grade-koszul", None, constant(s.grade as i64), constant(n - mi), false)
            .with_note("grade vs n − m"),
    );
    out.push(
        CheckResult::identity(
            "qci-grade-depth",
            None,
            constant(s.depth_q as i64 - s.depth_r as i64),
            constant(n - mi),
            false,
        )
        .with_note("depth Q − depth R vs n − m"),
    );

    for ms in s.all_modules() {
        let d = ms.over_q.order().min(ms.over_r.order());
        let bound = PoincareSeries::one_plus_t_pow(d, n - mi)
            .mul(&PoincareSeries::one_minus_t_pow(d, -mi))
            .mul(&ms.over_r);
        out.push(CheckResult::inequality(
            "qci-general-bound",
            Some(&ms.name),
            ms.over_q.truncate(d),
            bound,
            s.nagata,
            ms.cap_sensitive,
        ));
    }
    out
}

/// Which way the grade factor goes in the identity relating `P^Q_M` and `P^R_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `P^Q_M = P^R_M · (1−t²)^grade`.
    QEqualsRTimesFactor,
    /// `P^R_M = P^Q_M · (1−t²)^grade`.
    REqualsQTimesFactor,
    Both,
    Neither,
}

/// Inertness, the grade-factor identity in both orientations, and
/// `P^E_M = P^R_M / (1−t²)^m`, for a module with `I ⊆ m·ann_Q(M)` over a q.c.i. map.
pub fn check_inertness(s: &InstanceSeries, ms: &ModuleSeries) -> (Vec<CheckResult>, Option<Orientation>) {
    let name = ms.name.as_str();
    let Some(m) = s.m else {
        let r = Relation::Identity;
        return (vec![CheckResult::skipped("inertness", Some(name), r, "not certified q.c.i.")], None);
    };
    if !ms.shamash {
        let r = Relation::Identity;
        return (vec![CheckResult::skipped("inertness", Some(name), r, "I ⊄ m·ann_Q(M)")], None);
    }
    let k = &s.residue_field;
    let cap = ms.cap_sensitive || k.cap_sensitive;
    let mut out = vec![check_inert(name, &ms.over_r, &ms.over_q, &k.over_r, &k.over_q, true, cap)];
    out[0].name = "inertness-inert".into();

    let d = ms.over_q.order().min(ms.over_r.order());
    let g = s.grade as i64;
    let q_side = CheckResult::identity(
        "inertness-grade-factor",
        Some(name),
        ms.over_q.truncate(d),
        ms.over_r.mul(&unit_pow(d, g)),
        ms.cap_sensitive,
    );
    let r_side = CheckResult::identity(
        "inertness-grade-factor",
        Some(name),
        ms.over_r.truncate(d),
        ms.over_q.mul(&unit_pow(d, g)),
        ms.cap_sensitive,
    );
    let orientation = match (q_side.verdict == Verdict::Equality, r_side.verdict == Verdict::Equality) {
        (true, true) => Orientation::Both,
        (true, false) => Orientation::QEqualsRTimesFactor,
        (false, true) => Orientation::REqualsQTimesFactor,
        (false, false) => Orientation::Neither,
    };
    let chosen = match orientation {
        Orientation::REqualsQTimesFactor => r_side.with_note("orientation: P^R = P^Q·(1−t²)^grade"),
        Orientation::Both => q_side.with_note("orientation: both (grade 0)"),
        _ => q_side.with_note("orientation: P^Q = P^R·(1−t²)^grade"),
    };
    out.push(chosen);

    let d = ms.over_e.order().min(ms.over_r.order());
    out.push(CheckResult::identity(
        "inertness-e-over-r",
        Some(name),
        ms.over_e.truncate(d),
        ms.over_r.mul(&unit_pow(d, -(m as i64))),
        ms.cap_sensitive,
    ));
    (out, Some(orientation))
}

/// The classical bounds when `I` is generated by a regular sequence.
pub fn check_complete_intersection(s: &InstanceSeries, ms: &ModuleSeries) -> Vec<CheckResult> {
    let name = ms.name.as_str();
    if !s.complete_intersection {
        let r = Relation::Inequality { expect_equality: false };
        return vec![CheckResult::skipped("ci", Some(name), r, "I is not generated by a regular sequence")];
    }
    let n = s.n as i64;
    let d = ms.over_q.order().min(ms.over_r.order());
    vec![
        CheckResult::inequality(
            "ci-upper",
            Some(name),
            ms.over_r.truncate(d),
            ms.over_q.mul(&unit_pow(d, -n)),
            ms.shamash,
            ms.cap_sensitive,
        ),
        CheckResult::inequality(
            "ci-lower",
            Some(name),
            ms.over_q.truncate(d),
            ms.over_r.mul(&PoincareSeries::one_plus_t_pow(d, n)),
            s.nagata,
            ms.cap_sensitive,
        ),
    ]
}

/// The full battery over every module, filtered by group.
pub fn run_checks(s: &InstanceSeries, groups: &[String]) -> (Vec<CheckResult>, Vec<(String, Orientation)>) {
    let wanted = |g: &str| groups.iter().any(|x| x == "all" || x == g);
    let mut out = Vec::new();
    let mut orientations = Vec::new();
    let n = s.n;
    let p_e_over_q = PoincareSeries::one_plus_t_pow(s.r_over_q.order(), n as i64);
    for ms in s.all_modules() {
        let name = ms.name.as_str();
        let cap = ms.cap_sensitive;
        if wanted("koszul") {
            out.extend(check_koszul_bounds(name, &ms.over_q, &ms.over_e, n, ms.shamash, s.nagata, cap));
        }
        if wanted("large") {
            out.push(check_large_ineq("large-q-e", name, &ms.over_q, &ms.over_e, &p_e_over_q, cap));
            let c2 = cap || s.r_cap_sensitive;
            out.push(check_large_ineq("large-e-r", name, &ms.over_e, &ms.over_r, &s.r_over_e, c2));
            out.push(check_large_ineq("large-q-r", name, &ms.over_q, &ms.over_r, &s.r_over_q, c2));
        }
        if wanted("inert") {
            let k = &s.residue_field;
            let c2 = cap || k.cap_sensitive;
            out.push(check_inert(name, &ms.over_r, &ms.over_q, &k.over_r, &k.over_q, false, c2));
        }
        if wanted("ci") {
            out.extend(check_complete_intersection(s, ms));
        }
        if wanted("inertness") {
            let (checks, o) = check_inertness(s, ms);
            out.extend(checks);
            if let Some(o) = o {
                orientations.push((ms.name.clone(), o));
            }
        }
    }
    if wanted("qci") {
        out.extend(check_qci_formulas(s));
    }
    (out, orientations)
}

/// Heuristic growth estimates from a truncated Betti sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub cx: u32,
    pub curv: f64,
}

/// `cx ≈ 1 + round(slope of log β_i against log i)`, `curv ≈ max β_i^{1/i}`,
/// over `1 ≤ i ≤ window`. A series ending in zero gets `cx = 0`.
pub fn estimate_cx_curv(series: &PoincareSeries, window: usize) -> GrowthEstimate {
    let top = window.min(series.order());
    let betti: Vec<i64> = (0..=top).map(|i| series.coeff(i)).collect();
    let curv = (1..=top)
        .filter(|&i| betti[i] > 0)
        .map(|i| (betti[i] as f64).powf(1.0 / i as f64))
        .fold(0.0, f64::max);
    if top == 0 || betti[top] == 0 {
        return GrowthEstimate { cx: 0, curv };
    }
    let pts: Vec<(f64, f64)> = (1..=top)
        .filter(|&i| betti[i] > 0)
        .map(|i| ((i as f64).ln(), (betti[i] as f64).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    GrowthEstimate {
        cx: 1 + slope.round().max(0.0) as u32,
        curv,
    }
}

/// Estimates over `Q` and `R`, and whether the two bounds hold for the estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthObservation {
    pub module: String,
    pub over_q: GrowthEstimate,
    pub over_r: GrowthEstimate,
    pub cx_bound_observed: Option<bool>,
    pub curv_bound_observed: Option<bool>,
}

pub fn observe_growth(ms: &ModuleSeries, m: Option<usize>) -> GrowthObservation {
    let w = ms.over_q.order().min(ms.over_r.order());
    let over_q = estimate_cx_curv(&ms.over_q, w);
    let over_r = estimate_cx_curv(&ms.over_r, w);
    GrowthObservation {
        module: ms.name.clone(),
        cx_bound_observed: m.map(|m| over_q.cx as usize <= over_r.cx as usize + m),
        curv_bound_observed: m.map(|_| over_q.curv <= over_r.curv.max(1.0) + 1e-9),
        over_q,
        over_r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> PoincareSeries {
        PoincareSeries::from_coeffs(c.to_vec())
    }

    #[test]
    fn verdicts() {
        let a = s(&[1, 2, 1]);
        let r = CheckResult::inequality("x", None, a.clone(), a.clone(), false, false);
        assert_eq!(r.verdict, Verdict::Equality);
        let r = CheckResult::inequality("x", None, s(&[1, 1, 1]), a.clone(), false, false);
        assert_eq!((r.verdict, r.witness), (Verdict::Strict, Some(1)));
        let r = CheckResult::inequality("x", None, s(&[1, 1, 1]), a.clone(), true, false);
        assert_eq!(r.verdict, Verdict::Fails);
        let r = CheckResult::inequality("x", None, s(&[1, 0]), s(&[0, 1]), false, false);
        assert_eq!((r.verdict, r.witness), (Verdict::Fails, Some(0)));
        let r = CheckResult::inequality("x", None, s(&[1, 0]), s(&[0, 1]), false, true);
        assert_eq!(r.verdict, Verdict::InconclusiveCap);
        assert_eq!(r.recompute(), r.verdict);
    }

    #[test]
    fn koszul_bounds_on_x_squared() {
        // Q = k[x,y], I = (x^2), M = k
        let p_q = PoincareSeries::one_plus_t_pow(8, 2);
        let p_e = p_q.mul(&unit_pow(8, -1));
        let [a, b] = check_koszul_bounds("k", &p_q, &p_e, 1, true, false, false);
        assert_eq!(a.verdict, Verdict::Equality);
        assert_eq!(b.verdict, Verdict::Strict);
    }

    #[test]
    fn koszul_bounds_on_linear_form() {
        // Q = k[x,y], I = (x), M = k: P^E = 1 + t
        let p_q = PoincareSeries::one_plus_t_pow(8, 2);
        let p_e = PoincareSeries::one_plus_t_pow(8, 1);
        let [_, b] = check_koszul_bounds("k", &p_q, &p_e, 1, false, true, false);
        assert_eq!(b.verdict, Verdict::Equality);
    }

    #[test]
    fn large_with_trivial_map() {
        let p = s(&[1, 3, 3, 1]);
        let r = check_large_ineq("large-q-q", "k", &p, &p, &PoincareSeries::one(3), false);
        assert_eq!(r.verdict, Verdict::Equality);
    }

    #[test]
    fn inert_residue_field_is_equality() {
        let k_r = PoincareSeries::one_minus_t_pow(10, -1);
        let k_q = s(&[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(check_inert("k", &k_r, &k_q, &k_r, &k_q, true, false).verdict, Verdict::Equality);
    }

    fn ci_instance() -> InstanceSeries {
        // Q = k[x,y], I = (xy), M = Q/(x)
        let d = 10;
        let k_q = PoincareSeries::one_plus_t_pow(d, 2);
        let k_r = k_q.mul(&unit_pow(d, -1));
        let m_q = PoincareSeries::one_plus_t_pow(d, 1);
        let m_r = PoincareSeries::one_minus_t_pow(d, -1);
        InstanceSeries {
            n: 1,
            m: Some(0),
            complete_intersection: true,
            nagata: false,
            grade: 1,
            depth_q: 2,
            depth_r: 1,
            edim_q: 2,
            edim_r: 2,
            residue_field: ModuleSeries {
                name: "k".into(),
                over_q: k_q.clone(),
                over_r: k_r,
                over_e: k_q.mul(&unit_pow(d, -1)),
                shamash: true,
                cap_sensitive: false,
            },
            modules: vec![ModuleSeries {
                name: "M".into(),
                over_q: m_q.clone(),
                over_r: m_r,
                over_e: m_q.mul(&unit_pow(d, -1)),
                shamash: true,
                cap_sensitive: false,
            }],
            r_over_q: s(&[1, 1]),
            r_over_e: PoincareSeries::one(d),
            r_cap_sensitive: false,
        }
    }

    #[test]
    fn complete_intersection_battery() {
        let inst = ci_instance();
        let (checks, orientations) = run_checks(&inst, &["all".to_string()]);
        for c in &checks {
            assert!(c.verdict.holds() || c.verdict == Verdict::SkippedHypothesis, "{c:?}");
            assert_eq!(c.recompute(), c.verdict);
        }
        assert_eq!(orientations[1], ("M".to_string(), Orientation::QEqualsRTimesFactor));
    }

    #[test]
    fn selection_filters_groups() {
        let inst = ci_instance();
        let (checks, _) = run_checks(&inst, &["inert".to_string()]);
        assert!(checks.iter().all(|c| c.group() == "inert"));
        assert_eq!(checks.len(), 2);
        assert!(run_checks(&inst, &[]).0.is_empty());
    }

    #[test]
    fn growth_estimates() {
        let ones = PoincareSeries::from_coeffs(vec![1; 13]);
        let e = estimate_cx_curv(&ones, 12);
        assert_eq!(e.cx, 1);
        assert!((e.curv - 1.0).abs() < 1e-12);
        assert_eq!(estimate_cx_curv(&s(&[1, 2, 1, 0, 0]), 4).cx, 0);
        let lin = PoincareSeries::from_coeffs((1..=13).collect());
        assert_eq!(estimate_cx_curv(&lin, 12).cx, 2);
    }
}
