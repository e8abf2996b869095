//! Full-suite analysis and the machine-readable report.
//!
//! A report is a single JSON document with a schema version; every rational
//! is serialized as a `p/q` string, never a float, so exactness survives
//! serialization. Reports are byte-identical for identical inputs and
//! parameters, except for the `timing_ms` block, which is excluded from the
//! determinism contract.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::hull::{
    check_indecomposable, check_strong_indecomposable, check_transitive_on, check_transitivity,
    cycle_decomposition, devaney_from_parts, sensitivity_sufficient, CoreSet, CycleDecomposition,
    DecompositionOutcome, DevaneyAnalysis, HullError,
};
use crate::interval::ClosedInterval;
use crate::map::{MapKind, MapModel};
use crate::orbit::weak_indecomposability_check;
use crate::periodic::{periodic_density_check, periodic_points, PeriodicFinding};
use crate::rational::Rational;
use crate::verdict::{Budget, Verdict};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Analysis parameters. When `resolution` is unset, pairwise checks run at
/// resolution 6 and single-set checks at 8; an explicit resolution applies
/// to both. The weak-indecomposability probe has its own fixed-shape
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeParams {
    pub resolution: Option<u32>,
    pub max_period: u32,
    pub budget: Budget,
    pub weak_samples: usize,
    pub weak_resolution: u32,
    pub weak_burn_in: usize,
    pub weak_tail: usize,
}

impl Default for AnalyzeParams {
    fn default() -> Self {
        AnalyzeParams {
            resolution: None,
            max_period: 10,
            budget: Budget::default(),
            weak_samples: 64,
            weak_resolution: 10,
            weak_burn_in: 64,
            weak_tail: 64,
        }
    }
}

impl AnalyzeParams {
    pub fn with_resolution(mut self, k: u32) -> Self {
        self.resolution = Some(k);
        self
    }

    pub fn with_max_period(mut self, p: u32) -> Self {
        self.max_period = p;
        self
    }

    pub fn pairwise_resolution(&self) -> u32 {
        self.resolution.unwrap_or(6)
    }

    pub fn single_set_resolution(&self) -> u32 {
        self.resolution.unwrap_or(8)
    }
}

/// The analyzed map, re-parseable from the report alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub name: String,
    pub kind: String,
    pub domain: ClosedInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<(Rational, Rational)>>,
}

impl MapDescriptor {
    pub fn of(m: &MapModel) -> Self {
        match &m.kind {
            MapKind::Pl(pl) => MapDescriptor {
                name: m.name.clone(),
                kind: "plmap".into(),
                domain: pl.domain().clone(),
                breakpoints: Some(pl.breakpoints().to_vec()),
            },
            MapKind::Staircase(s) => MapDescriptor {
                name: m.name.clone(),
                kind: "staircase".into(),
                domain: s.domain(),
                breakpoints: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub map: MapDescriptor,
    pub parameters: AnalyzeParams,
    pub transitivity: Verdict,
    pub indecomposability: Verdict,
    pub strong_indecomposability: Verdict,
    pub weak_indecomposability: Verdict,
    pub periodic_density: Verdict,
    pub sensitivity: Verdict,
    pub devaney: DevaneyAnalysis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transitivity_on_core: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<CycleDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_note: Option<String>,
    pub periodic_findings: Vec<PeriodicFinding>,
    /// Wall-clock milliseconds per phase; excluded from the determinism
    /// contract.
    pub timing_ms: BTreeMap<String, u64>,
}

/// Run the whole verdict suite and assemble the report.
pub fn analyze(m: &MapModel, params: &AnalyzeParams) -> Result<AnalysisReport, HullError> {
    let k_pair = params.pairwise_resolution();
    let k_single = params.single_set_resolution();
    let budget = &params.budget;
    let mut timing = BTreeMap::new();
    let mut timed = |label: &str, start: Instant| {
        timing.insert(label.to_string(), start.elapsed().as_millis() as u64);
    };

    let t = Instant::now();
    let transitivity = check_transitivity(m, k_single, budget)?;
    timed("transitivity", t);

    let t = Instant::now();
    let (strong, core_candidate) = check_strong_indecomposable(m, k_single, budget)?;
    timed("strong_indecomposability", t);

    let t = Instant::now();
    let indecomposability = check_indecomposable(m, k_pair, budget)?;
    timed("indecomposability", t);

    let t = Instant::now();
    let weak = weak_indecomposability_check(
        m,
        params.weak_samples,
        params.weak_resolution,
        params.weak_burn_in,
        params.weak_tail,
        budget,
    )?;
    timed("weak_indecomposability", t);

    let t = Instant::now();
    let scan = periodic_points(m, params.max_period, budget)?;
    let periodic_density = periodic_density_check(m, k_single, params.max_period, budget)?;
    timed("periodic", t);

    let sensitivity = sensitivity_sufficient(m);

    let devaney = devaney_from_parts(&transitivity, &strong, &indecomposability, &periodic_density);

    // Core post-processing: re-verify invariance exactly, then relative
    // transitivity and the cycle structure.
    let mut core = None;
    let mut transitivity_on_core = None;
    let mut decomposition = None;
    let mut decomposition_note = None;
    if strong.holds() {
        if let Some(candidate) = core_candidate {
            let t = Instant::now();
            let image = m.image_set(&candidate.set)?;
            if !candidate.set.contains(&image) {
                return Err(HullError::CoreNotInvariant { core: candidate.set, image });
            }
            transitivity_on_core =
                Some(check_transitive_on(m, &candidate.set, k_single, budget)?);
            match cycle_decomposition(m, &candidate, budget)? {
                DecompositionOutcome::Decomposed(d) => decomposition = Some(d),
                DecompositionOutcome::Inconclusive { reason } => {
                    decomposition_note = Some(reason)
                }
            }
            core = Some(candidate);
            timed("core", t);
        }
    }

    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        map: MapDescriptor::of(m),
        parameters: params.clone(),
        transitivity,
        indecomposability,
        strong_indecomposability: strong,
        weak_indecomposability: weak,
        periodic_density,
        sensitivity,
        devaney,
        core,
        transitivity_on_core,
        decomposition,
        decomposition_note,
        periodic_findings: scan.findings,
        timing_ms: timing,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The human-readable headline, one line per property.
    pub fn text_summary(&self) -> String {
        let mut out = String::new();
        let mut line = |v: &Verdict| {
            let cert = if v.certified { ", certified" } else { "" };
            let res = match v.resolution {
                Some(k) => format!(", resolution {k}"),
                None => String::new(),
            };
            out.push_str(&format!("{:<28} {}{}{}\n", v.property, v.status, cert, res));
        };
        line(&self.transitivity);
        line(&self.strong_indecomposability);
        line(&self.indecomposability);
        line(&self.weak_indecomposability);
        line(&self.periodic_density);
        line(&self.sensitivity);
        for r in &self.devaney.routes {
            line(r);
        }
        line(&self.devaney.overall);
        if let Some(core) = &self.core {
            out.push_str(&format!("core E = {}\n", core.set));
        }
        if let Some(v) = &self.transitivity_on_core {
            out.push_str(&format!("{:<28} {}\n", v.property, v.status));
        }
        if let Some(d) = &self.decomposition {
            let parts: Vec<String> = d.intervals.iter().map(|j| j.to_string()).collect();
            out.push_str(&format!("cycle decomposition: n = {}, {}\n", d.n, parts.join(" -> ")));
        }
        if let Some(note) = &self.decomposition_note {
            out.push_str(&format!("decomposition inconclusive: {note}\n"));
        }
        if self.devaney.contradiction {
            out.push_str("CONSISTENCY FAILURE: decided Devaney routes disagree\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::builtin;
    use crate::verdict::Status;

    #[test]
    fn analyze_example_3_1_headline() {
        let m = builtin("example-3-1", None).unwrap();
        let params = AnalyzeParams::default().with_resolution(8);
        let report = analyze(&m, &params).unwrap();
        assert_eq!(report.transitivity.status, Status::Fails);
        assert_eq!(report.strong_indecomposability.status, Status::Holds);
        assert_eq!(report.devaney.overall.status, Status::Fails);
        let d = report.decomposition.expect("decomposition");
        assert_eq!(d.n, 2);
        assert!(!report.devaney.contradiction);
    }

    #[test]
    fn analyze_staircase_headline() {
        let m = builtin("example-3-2", None).unwrap();
        let params = AnalyzeParams::default().with_resolution(6).with_max_period(6);
        let report = analyze(&m, &params).unwrap();
        assert_eq!(report.indecomposability.status, Status::Holds);
        assert_eq!(report.strong_indecomposability.status, Status::Fails);
        assert_eq!(report.periodic_density.status, Status::Fails);
        assert_eq!(report.devaney.overall.status, Status::Fails);
        assert_eq!(report.periodic_findings.len(), 2);
    }

    #[test]
    fn report_json_round_trips_and_is_deterministic() {
        let m = builtin("tent", None).unwrap();
        let params = AnalyzeParams::default().with_resolution(4).with_max_period(4);
        let r1 = analyze(&m, &params).unwrap();
        let r2 = analyze(&m, &params).unwrap();
        let strip = |r: &AnalysisReport| {
            let mut r = r.clone();
            r.timing_ms.clear();
            r.to_json()
        };
        assert_eq!(strip(&r1), strip(&r2));
        let back = AnalysisReport::from_json(&r1.to_json()).unwrap();
        assert_eq!(back.transitivity, r1.transitivity);
        assert_eq!(back.map, r1.map);
    }

    #[test]
    fn default_resolutions_split_pairwise_and_single() {
        let p = AnalyzeParams::default();
        assert_eq!(p.pairwise_resolution(), 6);
        assert_eq!(p.single_set_resolution(), 8);
        let p = p.with_resolution(7);
        assert_eq!(p.pairwise_resolution(), 7);
        assert_eq!(p.single_set_resolution(), 7);
    }
}
