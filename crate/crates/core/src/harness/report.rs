//! Battery reports: human-readable text and a JSON document.

use crate::checks::{CheckResult, GrowthObservation, InstanceSeries, Orientation, Verdict};
use crate::koszul::{CertificateA, CertificateB};
use crate::resolution::Caps;
use crate::PoincareSeries;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateWindow {
    pub hmax: usize,
    pub dcap: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub instance: String,
    pub hash: String,
    pub characteristic: u64,
    pub caps: Caps,
    pub certificate_window: CertificateWindow,
    pub minimized: bool,
    pub verdict: String,
    pub certificate_a: CertificateA,
    pub certificate_b: CertificateB,
    pub series: InstanceSeries,
    pub checks: Vec<CheckResult>,
    pub orientations: Vec<(String, Orientation)>,
    pub growth: Vec<GrowthObservation>,
    pub cap_sensitive: bool,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "machine" | "json" => Ok(Format::Machine),
            _ => Err(format!("unknown format '{s}' (expected text or machine)")),
        }
    }
}

impl Report {
    pub fn without_timing(&self) -> Report {
        Report {
            elapsed_ms: None,
            ..self.clone()
        }
    }

    /// 0 if every selected check holds or was skipped, 1 on any failure, 2 if only caps block a verdict.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fails) {
            1
        } else if self.checks.iter().any(|c| c.verdict == Verdict::InconclusiveCap) {
            2
        } else {
            0
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fails)
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => emit_text(report),
    }
}

pub fn parse_report(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn series(s: &Option<PoincareSeries>) -> String {
    s.as_ref().map_or_else(|| "-".to_string(), |s| s.to_string())
}

fn emit_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "instance {}", &r.hash[..16.min(r.hash.len())]);
    for line in r.instance.lines() {
        let _ = writeln!(w, "  | {line}");
    }
    let _ = writeln!(
        w,
        "caps: hmax {} dmax {}; certificates: hmax {} dcap {}",
        r.caps.hmax, r.caps.dmax, r.certificate_window.hmax, r.certificate_window.dcap
    );
    if r.minimized {
        let _ = writeln!(w, "ideal generators were minimized");
    }
    let s = &r.series;
    let _ = writeln!(w, "verdict: {} (up to the certificate window)", r.verdict);
    let _ = writeln!(
        w,
        "certificate A: {}  certificate B: {}  n = {}  m = {}",
        r.certificate_a.holds,
        r.certificate_b.holds,
        s.n,
        s.m.map_or("-".to_string(), |m| m.to_string())
    );
    let _ = writeln!(
        w,
        "grade {}  depth Q {}  depth R {}  edim Q {}  edim R {}  I∩m² ⊆ mI: {}",
        s.grade, s.depth_q, s.depth_r, s.edim_q, s.edim_r, s.nagata
    );
    let _ = writeln!(w, "\nseries");
    let _ = writeln!(w, "  P^Q_R  {}", s.r_over_q);
    let _ = writeln!(w, "  P^E_R  {}", s.r_over_e);
    for ms in s.all_modules() {
        let _ = writeln!(w, "  module {}{}", ms.name, if ms.shamash { "  (I ⊆ m·ann M)" } else { "" });
        let _ = writeln!(w, "    over Q  {}", ms.over_q);
        let _ = writeln!(w, "    over R  {}", ms.over_r);
        let _ = writeln!(w, "    over E  {}", ms.over_e);
    }
    if !r.checks.is_empty() {
        let _ = writeln!(w, "\nchecks");
        for c in &r.checks {
            let module = c.module.as_deref().map_or(String::new(), |m| format!(" [{m}]"));
            let witness = c.witness.map_or(String::new(), |i| format!(" at t^{i}"));
            let _ = writeln!(w, "  {:<24}{:<8} {}{}", c.name, module, c.verdict.label(), witness);
            if c.lhs.is_some() {
                let _ = writeln!(w, "      lhs {}", series(&c.lhs));
                let _ = writeln!(w, "      rhs {}", series(&c.rhs));
            }
            if let Some(note) = &c.note {
                let _ = writeln!(w, "      {note}");
            }
        }
    }
    if !r.orientations.is_empty() {
        let _ = writeln!(w, "\ngrade-factor orientation");
        for (m, o) in &r.orientations {
            let _ = writeln!(w, "  {m}: {o:?}");
        }
    }
    let _ = writeln!(w, "\ngrowth estimates (heuristic, within the window)");
    for g in &r.growth {
        let _ = writeln!(
            w,
            "  {}: cx_Q ~ {} cx_R ~ {} curv_Q ~ {:.3} curv_R ~ {:.3}",
            g.module, g.over_q.cx, g.over_r.cx, g.over_q.curv, g.over_r.curv
        );
    }
    if r.cap_sensitive {
        let _ = writeln!(w, "\nsome results are cap-sensitive: valid only up to the stated caps");
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(w, "\nelapsed {ms} ms");
    }
    out
}
