//! The verification pipeline for one instance.

use super::cache::Cache;
use super::instance::{BuiltInstance, InputError, Instance};
use super::report::{CertificateWindow, Report};
use crate::checks::{observe_growth, run_checks, InstanceSeries, ModuleSeries};
use crate::e_resolution::minimal_e_resolution;
use crate::exactlin::PrimeField;
use crate::graded::{GradedRing, HomogeneousIdeal, PresentedModule};
use crate::koszul::{build_tate_two_step, koszul_homology, qci_certificate_a, qci_certificate_b, KoszulAlgebra};
use crate::resolution::{depth, grade, minimal_free_resolution, Caps};
use crate::PoincareSeries;
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

/// Highest homological degree the certificates look at.
pub const CERT_HMAX: usize = 8;

#[derive(Clone, Debug)]
pub struct BatteryOptions {
    pub caps: Caps,
    /// Check groups, or `["all"]`.
    pub checks: Vec<String>,
    /// Replace the ideal generators by a minimal subset instead of rejecting them.
    pub minimize: bool,
    pub characteristic: Option<u64>,
    pub cache: Option<Cache>,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            caps: Caps::default(),
            checks: vec!["all".into()],
            minimize: false,
            characteristic: None,
            cache: None,
        }
    }
}

impl BatteryOptions {
    /// Instance-file settings fill whatever the options leave at their defaults.
    pub fn for_instance(inst: &Instance, hmax: Option<usize>, dmax: Option<i32>, checks: Option<Vec<String>>) -> Self {
        let base = Caps::default();
        BatteryOptions {
            caps: Caps::new(
                hmax.or(inst.hmax).unwrap_or(base.hmax),
                dmax.or(inst.dmax).unwrap_or(base.dmax),
            ),
            checks: checks.or_else(|| inst.checks.clone()).unwrap_or_else(|| vec!["all".into()]),
            ..Default::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum BatteryError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("characteristic {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("ideal generator {index} is redundant; rerun with --minimize")]
    NotMinimal { index: usize },
    #[error("module '{module}' is not an R-module: ideal generator {generator} does not annihilate it")]
    NotRModule { module: String, generator: usize },
    #[error("q.c.i. certificates disagree (A: {a}, B: {b}) on {instance}")]
    CertificateDisagreement { a: bool, b: bool, instance: String },
}

impl BatteryError {
    /// Process exit code: 3 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BatteryError::CertificateDisagreement { .. } => 1,
            _ => 3,
        }
    }
}

/// Scan width used for certificate windows.
fn structure_width(q: &GradedRing, ideal: &HomogeneousIdeal) -> i32 {
    2 * q.max_structure_degree().max(ideal.max_degree()).max(1) as i32 + 2
}

/// Internal degrees the certificates inspect: `min(dmax, Σ deg f_i + 2·width)`.
pub fn certificate_window(q: &GradedRing, ideal: &HomogeneousIdeal, caps: Caps) -> CertificateWindow {
    let sum: i32 = ideal.degrees().iter().map(|&d| d as i32).sum();
    CertificateWindow {
        hmax: caps.hmax.min(CERT_HMAX),
        dcap: caps.dmax.min(sum + 2 * structure_width(q, ideal)),
    }
}

/// Result of the two certificates on one map.
#[derive(Clone, Debug)]
pub struct Certification {
    pub a: crate::koszul::CertificateA,
    pub b: crate::koszul::CertificateB,
    pub window: CertificateWindow,
}

impl Certification {
    pub fn agree(&self) -> bool {
        self.a.holds == self.b.holds
    }

    pub fn qci(&self) -> bool {
        self.a.holds && self.b.holds
    }
}

/// Runs both q.c.i. certificates on `Q → Q/I`.
pub fn certify(e: &KoszulAlgebra, caps: Caps) -> Certification {
    let r = e.ideal().quotient_ring();
    let window = certificate_window(e.ring(), e.ideal(), caps);
    let h = koszul_homology(e, &r, window.hmax, window.dcap);
    let a = qci_certificate_a(&h);
    let t = build_tate_two_step(e, &h, window.hmax);
    let b = qci_certificate_b(&t, &r, window.hmax, window.dcap);
    Certification { a, b, window }
}

fn module_descriptor(m: &PresentedModule) -> String {
    let names = m.ring().var_names();
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(|p| p.display(&names).to_string()).collect();
            format!("[{}]", parts.join(", "))
        })
        .collect();
    format!("twists {:?}; rows [{}]", m.twists(), rows.join(", "))
}

struct Engines<'a> {
    cache: Option<&'a Cache>,
    caps: Caps,
}

impl Engines<'_> {
    fn cached(&self, descriptor: String, compute: impl FnOnce() -> (PoincareSeries, bool)) -> (PoincareSeries, bool) {
        match self.cache {
            Some(c) => c.get_or_compute(&descriptor, compute),
            None => compute(),
        }
    }

    fn over_ring(&self, m: &PresentedModule) -> (PoincareSeries, bool) {
        let d = format!(
            "ring|{}|{}|hmax {}|dmax {}",
            m.ring().descriptor(),
            module_descriptor(m),
            self.caps.hmax,
            self.caps.dmax
        );
        self.cached(d, || {
            let r = minimal_free_resolution(m, self.caps);
            (r.poincare(), r.cap_sensitive)
        })
    }

    fn over_e(&self, m: &PresentedModule, e: &KoszulAlgebra) -> (PoincareSeries, bool) {
        let names = e.ring().var_names();
        let gens: Vec<String> = e.ideal().gens().iter().map(|g| g.display(&names).to_string()).collect();
        let d = format!(
            "koszul|{}|ideal [{}]|{}|hmax {}|dmax {}",
            e.ring().descriptor(),
            gens.join(", "),
            module_descriptor(m),
            self.caps.hmax,
            self.caps.dmax
        );
        self.cached(d, || {
            let u = minimal_e_resolution(m, e, self.caps).expect("checked to be an R-module");
            (u.poincare(), u.cap_sensitive)
        })
    }

    fn module_series(
        &self,
        name: &str,
        m: &PresentedModule,
        r: &Arc<GradedRing>,
        e: &KoszulAlgebra,
    ) -> Result<ModuleSeries, BatteryError> {
        let shamash = e.ideal().check_shamash_condition(m).map_err(|err| match err {
            crate::graded::ideal::HypothesisError::NotRModule { generator } => BatteryError::NotRModule {
                module: name.to_string(),
                generator,
            },
        })?;
        let over_r_module = m.over(r.clone()).expect("same variables and degrees");
        let (over_q, c1) = self.over_ring(m);
        let (over_r, c2) = self.over_ring(&over_r_module);
        let (over_e, c3) = self.over_e(m, e);
        Ok(ModuleSeries {
            name: name.to_string(),
            over_q,
            over_r,
            over_e,
            shamash,
            cap_sensitive: c1 || c2 || c3,
        })
    }
}

/// The full battery on a parsed instance.
pub fn run_battery(inst: &Instance, opts: &BatteryOptions) -> Result<Report, BatteryError> {
    let start = Instant::now();
    let p = opts.characteristic.unwrap_or(inst.characteristic);
    let field = PrimeField::new(p).map_err(|_| BatteryError::NotPrime(p))?;
    let BuiltInstance { q, ideal, modules } = inst.build(field)?;
    let minimality = ideal.check_minimality();
    let minimized = !minimality.minimal;
    let ideal = match minimality.witness {
        None => ideal,
        Some(_) if opts.minimize => ideal.minimize(),
        Some(index) => return Err(BatteryError::NotMinimal { index }),
    };
    for (name, m) in &modules {
        if let Err(crate::graded::ideal::HypothesisError::NotRModule { generator }) = ideal.annihilates(m) {
            return Err(BatteryError::NotRModule {
                module: name.clone(),
                generator,
            });
        }
    }
    let caps = opts.caps;
    let e = KoszulAlgebra::new(&ideal).expect("minimal generators");
    let cert = certify(&e, caps);
    if !cert.agree() {
        return Err(BatteryError::CertificateDisagreement {
            a: cert.a.holds,
            b: cert.b.holds,
            instance: inst.canonical_text(),
        });
    }
    let r = ideal.quotient_ring();
    let n = ideal.len();
    let m = cert.qci().then_some(cert.a.m);
    let grade = grade(&ideal, caps.dmax);
    let nagata = ideal.check_nagata_condition();

    let engines = Engines {
        cache: opts.cache.as_ref(),
        caps,
    };
    let residue_field = engines.module_series("k", &PresentedModule::residue_field(q.clone()), &r, &e)?;
    let mut module_series = Vec::new();
    for (name, pm) in &modules {
        module_series.push(engines.module_series(name, pm, &r, &e)?);
    }
    let r_module = PresentedModule::cyclic(q.clone(), ideal.gens()).expect("ideal generators are homogeneous");
    let (r_over_q, c1) = engines.over_ring(&r_module);
    let (r_over_e, c2) = engines.over_e(&r_module, &e);

    let series = InstanceSeries {
        n,
        m,
        complete_intersection: m == Some(0),
        nagata,
        grade,
        depth_q: depth(&q, caps.dmax),
        depth_r: depth(&r, caps.dmax),
        edim_q: q.edim(),
        edim_r: r.edim(),
        residue_field,
        modules: module_series,
        r_over_q,
        r_over_e,
        r_cap_sensitive: c1 || c2,
    };
    let (checks, orientations) = run_checks(&series, &opts.checks);
    let growth = series.all_modules().map(|ms| observe_growth(ms, m)).collect();
    let verdict = match m {
        Some(0) => "c.i. (hence q.c.i.)",
        Some(_) => "q.c.i., not c.i.",
        None => "not q.c.i.",
    };
    let cap_sensitive = series.all_modules().any(|ms| ms.cap_sensitive)
        || series.r_cap_sensitive
        || cert.a.cap_sensitive;
    Ok(Report {
        instance: inst.canonical_text(),
        hash: inst.content_hash(),
        characteristic: p,
        caps,
        certificate_window: cert.window,
        minimized,
        verdict: verdict.to_string(),
        certificate_a: cert.a,
        certificate_b: cert.b,
        series,
        checks,
        orientations,
        growth,
        cap_sensitive,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}
