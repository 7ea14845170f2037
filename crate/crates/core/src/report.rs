//! Evaluation reports and their two renderings: stable line-oriented text
//! and a structured JSON document with fractions as `"a/b"` strings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::fraction::{format_decimal, format_fraction, parse_fraction};
use crate::model::Rational;
use crate::scenario::VariationLocus;
use crate::utility::{Dominance, ParadoxReport, Recommendation};

pub const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakdownRow {
    pub label: String,
    pub weight: Rational,
    pub relative_utility: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub evaluator: String,
    pub mean: f64,
    pub stderr: f64,
    pub replications: u64,
    pub seed: u64,
    pub parallelism: u64,
    pub inner_samples: Option<u64>,
    pub target: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParadoxSummary {
    pub dominance: Dominance,
    pub recommendation: Recommendation,
    pub contradiction: bool,
    pub model_recommendation: Recommendation,
    pub model_contradiction: bool,
    pub narrative: String,
}

impl From<&ParadoxReport> for ParadoxSummary {
    fn from(r: &ParadoxReport) -> Self {
        Self {
            dominance: r.dominance_direction,
            recommendation: r.recommendation,
            contradiction: r.contradiction,
            model_recommendation: r.model_recommendation,
            model_contradiction: r.model_contradiction,
            narrative: r.narrative.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoherenceSummary {
    pub same_distribution: bool,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub variation_locus: Option<VariationLocus>,
    /// Exact values keyed by evaluator (or quantity) name, in render order.
    pub results: Vec<(String, Rational)>,
    /// Per-unit rows of the population evaluator, when it ran.
    pub breakdown: Vec<BreakdownRow>,
    pub simulation: Option<SimulationSummary>,
    pub paradox: Option<ParadoxSummary>,
    pub coherence: Option<CoherenceSummary>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            variation_locus: None,
            results: Vec::new(),
            breakdown: Vec::new(),
            simulation: None,
            paradox: None,
            coherence: None,
        }
    }

    pub fn result(&self, key: &str) -> Option<&Rational> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.render_text(),
            ReportFormat::Structured => {
                let mut s = serde_json::to_string_pretty(&self.to_value()).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        if let Some(v) = self.variation_locus {
            let _ = writeln!(out, "variation_locus: {}", v.name());
        }
        for (key, value) in &self.results {
            let _ = writeln!(out, "{key}: {} ({})", format_fraction(value), format_decimal(value, DECIMAL_DIGITS));
        }
        if !self.breakdown.is_empty() {
            let _ = writeln!(out, "breakdown:");
            for row in &self.breakdown {
                let _ = writeln!(
                    out,
                    "  {}: weight {}, relative utility {}",
                    row.label,
                    format_fraction(&row.weight),
                    format_fraction(&row.relative_utility)
                );
            }
        }
        if let Some(c) = &self.coherence {
            let _ = writeln!(out, "coherence: same_distribution={} violation={}", c.same_distribution, c.violation);
        }
        if let Some(p) = &self.paradox {
            let _ = writeln!(
                out,
                "paradox: dominance={} recommendation={} contradiction={}",
                p.dominance.name(),
                p.recommendation.name(),
                p.contradiction
            );
            let _ = writeln!(
                out,
                "paradox (population model): recommendation={} contradiction={}",
                p.model_recommendation.name(),
                p.model_contradiction
            );
            let _ = writeln!(out, "narrative: {}", p.narrative);
        }
        if let Some(s) = &self.simulation {
            let _ = write!(
                out,
                "simulation ({}): mean={} stderr={} replications={} seed={} parallelism={}",
                s.evaluator, s.mean, s.stderr, s.replications, s.seed, s.parallelism
            );
            if let Some(k) = s.inner_samples {
                let _ = write!(out, " inner_samples={k}");
            }
            if let Some(t) = &s.target {
                let _ = write!(out, " target={}", format_fraction(t));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("scenario".into(), json!(self.scenario));
        if let Some(v) = self.variation_locus {
            obj.insert("variation_locus".into(), json!(v.name()));
        }
        let mut results = Map::new();
        for (key, value) in &self.results {
            results.insert(
                key.clone(),
                json!({"fraction": format_fraction(value), "decimal": format_decimal(value, DECIMAL_DIGITS)}),
            );
        }
        obj.insert("results".into(), Value::Object(results));
        if !self.breakdown.is_empty() {
            let rows: Vec<Value> = self
                .breakdown
                .iter()
                .map(|r| {
                    json!({
                        "label": r.label,
                        "weight": format_fraction(&r.weight),
                        "relative_utility": format_fraction(&r.relative_utility),
                    })
                })
                .collect();
            obj.insert("breakdown".into(), Value::Array(rows));
        }
        if let Some(s) = &self.simulation {
            let mut sim = Map::new();
            sim.insert("evaluator".into(), json!(s.evaluator));
            sim.insert("mean".into(), json!(s.mean));
            sim.insert("stderr".into(), json!(s.stderr));
            sim.insert("replications".into(), json!(s.replications));
            sim.insert("seed".into(), json!(s.seed));
            sim.insert("parallelism".into(), json!(s.parallelism));
            if let Some(k) = s.inner_samples {
                sim.insert("inner_samples".into(), json!(k));
            }
            if let Some(t) = &s.target {
                sim.insert("target".into(), json!(format_fraction(t)));
            }
            obj.insert("simulation".into(), Value::Object(sim));
        }
        if let Some(p) = &self.paradox {
            obj.insert(
                "paradox".into(),
                json!({
                    "dominance": p.dominance.name(),
                    "recommendation": p.recommendation.name(),
                    "contradiction": p.contradiction,
                    "model_recommendation": p.model_recommendation.name(),
                    "model_contradiction": p.model_contradiction,
                    "narrative": p.narrative,
                }),
            );
        }
        if let Some(c) = &self.coherence {
            obj.insert(
                "coherence".into(),
                json!({"same_distribution": c.same_distribution, "violation": c.violation}),
            );
        }
        Value::Object(obj)
    }

    /// Reads back a structured report.
    pub fn from_structured(document: &str) -> Result<Self, ReportParseError> {
        let root: Value = serde_json::from_str(document).map_err(|e| ReportParseError(e.to_string()))?;
        let obj = root.as_object().ok_or_else(|| err("report must be an object"))?;
        let mut report = Report::new(str_field(obj, "scenario")?);
        if let Some(v) = obj.get("variation_locus") {
            let name = v.as_str().ok_or_else(|| err("variation_locus must be a string"))?;
            report.variation_locus =
                Some(VariationLocus::from_name(name).ok_or_else(|| err(format!("unknown variation locus {name:?}")))?);
        }
        let results = obj.get("results").and_then(Value::as_object).ok_or_else(|| err("missing results"))?;
        for (key, entry) in results {
            let entry = entry.as_object().ok_or_else(|| err(format!("results.{key} must be an object")))?;
            report.results.push((key.clone(), frac_field(entry, "fraction")?));
        }
        if let Some(rows) = obj.get("breakdown") {
            for row in rows.as_array().ok_or_else(|| err("breakdown must be an array"))? {
                let row = row.as_object().ok_or_else(|| err("breakdown rows must be objects"))?;
                report.breakdown.push(BreakdownRow {
                    label: str_field(row, "label")?,
                    weight: frac_field(row, "weight")?,
                    relative_utility: frac_field(row, "relative_utility")?,
                });
            }
        }
        if let Some(sim) = obj.get("simulation") {
            let sim = sim.as_object().ok_or_else(|| err("simulation must be an object"))?;
            report.simulation = Some(SimulationSummary {
                evaluator: str_field(sim, "evaluator")?,
                mean: f64_field(sim, "mean")?,
                stderr: f64_field(sim, "stderr")?,
                replications: u64_field(sim, "replications")?,
                seed: u64_field(sim, "seed")?,
                parallelism: u64_field(sim, "parallelism")?,
                inner_samples: sim.get("inner_samples").map(|_| u64_field(sim, "inner_samples")).transpose()?,
                target: sim.get("target").map(|_| frac_field(sim, "target")).transpose()?,
            });
        }
        if let Some(p) = obj.get("paradox") {
            let p = p.as_object().ok_or_else(|| err("paradox must be an object"))?;
            let rec = |key: &str| {
                let name = str_field(p, key)?;
                Recommendation::from_name(&name).ok_or_else(|| err(format!("unknown recommendation {name:?}")))
            };
            let dominance = str_field(p, "dominance")?;
            report.paradox = Some(ParadoxSummary {
                dominance: Dominance::from_name(&dominance).ok_or_else(|| err(format!("unknown dominance {dominance:?}")))?,
                recommendation: rec("recommendation")?,
                contradiction: bool_field(p, "contradiction")?,
                model_recommendation: rec("model_recommendation")?,
                model_contradiction: bool_field(p, "model_contradiction")?,
                narrative: str_field(p, "narrative")?,
            });
        }
        if let Some(c) = obj.get("coherence") {
            let c = c.as_object().ok_or_else(|| err("coherence must be an object"))?;
            report.coherence = Some(CoherenceSummary {
                same_distribution: bool_field(c, "same_distribution")?,
                violation: bool_field(c, "violation")?,
            });
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid report: {0}")]
pub struct ReportParseError(String);

fn err(msg: impl Into<String>) -> ReportParseError {
    ReportParseError(msg.into())
}

fn str_field(obj: &Map<String, Value>, key: &str) -> Result<String, ReportParseError> {
    obj.get(key).and_then(Value::as_str).map(str::to_string).ok_or_else(|| err(format!("missing string {key}")))
}

fn frac_field(obj: &Map<String, Value>, key: &str) -> Result<Rational, ReportParseError> {
    parse_fraction(&str_field(obj, key)?).map_err(|e| err(e.to_string()))
}

fn f64_field(obj: &Map<String, Value>, key: &str) -> Result<f64, ReportParseError> {
    obj.get(key).and_then(Value::as_f64).ok_or_else(|| err(format!("missing number {key}")))
}

fn u64_field(obj: &Map<String, Value>, key: &str) -> Result<u64, ReportParseError> {
    obj.get(key).and_then(Value::as_u64).ok_or_else(|| err(format!("missing integer {key}")))
}

fn bool_field(obj: &Map<String, Value>, key: &str) -> Result<bool, ReportParseError> {
    obj.get(key).and_then(Value::as_bool).ok_or_else(|| err(format!("missing boolean {key}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn sample() -> Report {
        let mut r = Report::new("russian_roulette");
        r.variation_locus = Some(VariationLocus::WithinUnit);
        r.results = vec![("deterministic".into(), ratio(-1, 21)), ("stochastic".into(), ratio(1, 84))];
        r
    }

    #[test]
    fn text_golden() {
        assert_eq!(
            sample().render_text(),
            "scenario: russian_roulette\n\
             variation_locus: within_unit\n\
             deterministic: -1/21 (-0.047619047619047619048)\n\
             stochastic: 1/84 (0.011904761904761904762)\n"
        );
    }

    #[test]
    fn empty_sections_omitted() {
        let v = sample().to_value();
        let obj = v.as_object().unwrap();
        for key in ["simulation", "paradox", "coherence", "breakdown"] {
            assert!(!obj.contains_key(key), "{key}");
        }
        assert!(!sample().render_text().contains("simulation"));
    }

    #[test]
    fn structured_round_trip() {
        let mut r = sample();
        r.breakdown.push(BreakdownRow { label: "x".into(), weight: ratio(1, 1), relative_utility: ratio(1, 84) });
        r.simulation = Some(SimulationSummary {
            evaluator: "population".into(),
            mean: 0.011_903_2,
            stderr: 8.6e-6,
            replications: 1_000_000,
            seed: 42,
            parallelism: 2,
            inner_samples: Some(1024),
            target: Some(ratio(1, 84)),
        });
        r.paradox = Some(ParadoxSummary {
            dominance: Dominance::Arm1Dominates,
            recommendation: Recommendation::Stay,
            contradiction: true,
            model_recommendation: Recommendation::Switch,
            model_contradiction: false,
            narrative: "n".into(),
        });
        r.coherence = Some(CoherenceSummary { same_distribution: true, violation: true });
        let doc = r.render(ReportFormat::Structured);
        assert_eq!(Report::from_structured(&doc).unwrap(), r);
        let v: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["results"]["deterministic"]["fraction"], "-1/21");
        assert_eq!(v["results"]["stochastic"]["decimal"], "0.011904761904761904762");
    }
}
