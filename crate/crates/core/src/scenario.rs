//! Scenario documents: a JSON schema with exact fraction literals, the
//! built-in scenarios, and the evaluation views derived from each kind.
//!
//! Schema (all numeric literals are `"a/b"` strings or integers):
//!
//! ```text
//! { "name": str, "kind": "strata" | "population" | "chambers" | "lottery_pair",
//!   "description"?: str, "variation_locus"?: "within_unit" | "across_unit" | "mixed",
//!   "utility"?: {"u0", "u1"}, "asymmetry"?: {"gain", "loss", "tie"},
//!   "payload": ... }
//!
//! chambers     {"phi0", "phi1"}
//! strata       {"s11", "s00", "s10", "s01"}
//! population   {"arm0_label"?, "arm1_label"?, "unit_types": [
//!                {"label", "weight", "arm0": arm, "arm1": arm, "dependence"?: strata}]}
//!              arm = {"degenerate": 0|1} | {"bernoulli": "a/b"}
//! lottery_pair {"left": tree, "right": tree, "penalty"}
//!              tree = {"leaf": "a/b"} | {"chance": [["a/b", tree], ...]}
//! ```

use std::fmt;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::ModelError;
use crate::fraction::{format_fraction, parse_fraction, FractionError};
use crate::lottery::{option_a, option_b, LotteryTree, PenaltySpec};
use crate::model::{
    ratio, ArmOutcomeModel, AsymmetricUtilitySpec, BinaryOutcome, OutcomeUtility, PopulationModel, Probability,
    PrincipalStratum, Rational, StrataDistribution, UnitType,
};
use crate::strata::{strata_from_chambers, survival_from_loaded, ChamberParameterization};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("{path}: decimal literal {literal:?} rejected; use exact fractions")]
    DecimalLiteral { path: String, literal: String },
    #[error("{path}: unknown kind {value:?}")]
    UnknownKind { path: String, value: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: ModelError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Strata,
    Population,
    Chambers,
    LotteryPair,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Strata => "strata",
            Self::Population => "population",
            Self::Chambers => "chambers",
            Self::LotteryPair => "lottery_pair",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Self::Strata, Self::Population, Self::Chambers, Self::LotteryPair].into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where outcome variation is meant to live. Advisory only: it is reported
/// but never changes a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariationLocus {
    WithinUnit,
    AcrossUnit,
    Mixed,
}

impl VariationLocus {
    pub fn name(self) -> &'static str {
        match self {
            Self::WithinUnit => "within_unit",
            Self::AcrossUnit => "across_unit",
            Self::Mixed => "mixed",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::WithinUnit, Self::AcrossUnit, Self::Mixed].into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioPayload {
    Strata(StrataDistribution),
    Population(PopulationModel),
    Chambers(ChamberParameterization),
    LotteryPair { left: LotteryTree, right: LotteryTree, penalty: PenaltySpec },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFile {
    pub name: String,
    pub description: Option<String>,
    pub variation_locus: Option<VariationLocus>,
    pub utility: Option<OutcomeUtility>,
    pub asymmetry: Option<AsymmetricUtilitySpec>,
    pub payload: ScenarioPayload,
}

impl ScenarioFile {
    pub fn new(name: impl Into<String>, payload: ScenarioPayload) -> Self {
        Self { name: name.into(), description: None, variation_locus: None, utility: None, asymmetry: None, payload }
    }

    pub fn kind(&self) -> ScenarioKind {
        match self.payload {
            ScenarioPayload::Strata(_) => ScenarioKind::Strata,
            ScenarioPayload::Population(_) => ScenarioKind::Population,
            ScenarioPayload::Chambers(_) => ScenarioKind::Chambers,
            ScenarioPayload::LotteryPair { .. } => ScenarioKind::LotteryPair,
        }
    }

    pub fn outcome_utility(&self) -> OutcomeUtility {
        self.utility.clone().unwrap_or_default()
    }

    pub fn asymmetry_spec(&self) -> AsymmetricUtilitySpec {
        self.asymmetry.clone().unwrap_or_default()
    }

    /// Joint law of `(y0, y1)` with every potential outcome treated as a
    /// fixed latent value. `None` for lottery pairs.
    pub fn deterministic_view(&self) -> Option<Result<StrataDistribution, ModelError>> {
        match &self.payload {
            ScenarioPayload::Strata(d) => Some(Ok(d.clone())),
            ScenarioPayload::Chambers(c) => Some(Ok(strata_from_chambers(c))),
            ScenarioPayload::Population(m) => Some(m.implied_strata()),
            ScenarioPayload::LotteryPair { .. } => None,
        }
    }

    /// The population the scenario describes. Strata become four
    /// degenerate unit types; chambers become one unit type whose arms are
    /// stochastic (the spin is part of the treatment).
    pub fn population_view(&self) -> Option<PopulationModel> {
        match &self.payload {
            ScenarioPayload::Population(m) => Some(m.clone()),
            ScenarioPayload::Strata(d) => Some(PopulationModel::new(
                d.iter()
                    .map(|(s, m)| {
                        UnitType::new(s.to_string(), m.clone(), ArmOutcomeModel::Degenerate(s.y0), ArmOutcomeModel::Degenerate(s.y1))
                    })
                    .collect(),
            )),
            ScenarioPayload::Chambers(c) => Some(PopulationModel::new(vec![UnitType::new(
                "every play",
                Probability::one(),
                ArmOutcomeModel::Bernoulli(survival_from_loaded(&c.phi0_loaded_prob)),
                ArmOutcomeModel::Bernoulli(survival_from_loaded(&c.phi1_loaded_prob)),
            )])),
            ScenarioPayload::LotteryPair { .. } => None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.name));
        obj.insert("kind".into(), json!(self.kind().name()));
        if let Some(d) = &self.description {
            obj.insert("description".into(), json!(d));
        }
        if let Some(v) = self.variation_locus {
            obj.insert("variation_locus".into(), json!(v.name()));
        }
        if let Some(u) = &self.utility {
            obj.insert("utility".into(), json!({"u0": frac(&u.death), "u1": frac(&u.survival)}));
        }
        if let Some(a) = &self.asymmetry {
            obj.insert(
                "asymmetry".into(),
                json!({"gain": frac(a.gain_weight()), "loss": frac(a.loss_weight()), "tie": frac(a.tie_value())}),
            );
        }
        let payload = match &self.payload {
            ScenarioPayload::Strata(d) => strata_value(d),
            ScenarioPayload::Chambers(c) => {
                json!({"phi0": frac(c.phi0_loaded_prob.value()), "phi1": frac(c.phi1_loaded_prob.value())})
            }
            ScenarioPayload::Population(m) => {
                let units: Vec<Value> = m
                    .unit_types
                    .iter()
                    .map(|t| {
                        let mut u = Map::new();
                        u.insert("label".into(), json!(t.label));
                        u.insert("weight".into(), json!(frac(t.weight.value())));
                        u.insert("arm0".into(), arm_value(&t.arm0));
                        u.insert("arm1".into(), arm_value(&t.arm1));
                        if let Some(d) = &t.cross_arm_dependence {
                            u.insert("dependence".into(), strata_value(d));
                        }
                        Value::Object(u)
                    })
                    .collect();
                json!({"arm0_label": m.arm0_label, "arm1_label": m.arm1_label, "unit_types": units})
            }
            ScenarioPayload::LotteryPair { left, right, penalty } => {
                json!({"left": tree_value(left), "right": tree_value(right), "penalty": frac(penalty.factor())})
            }
        };
        obj.insert("payload".into(), payload);
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("json values serialize")
    }
}

fn frac(x: &Rational) -> String {
    format_fraction(x)
}

fn strata_value(d: &StrataDistribution) -> Value {
    json!({
        "s11": frac(d.mass(PrincipalStratum::ALWAYS_SURVIVE).value()),
        "s00": frac(d.mass(PrincipalStratum::NEVER_SURVIVE).value()),
        "s10": frac(d.mass(PrincipalStratum::HARMED).value()),
        "s01": frac(d.mass(PrincipalStratum::SAVED).value()),
    })
}

fn arm_value(a: &ArmOutcomeModel) -> Value {
    match a {
        ArmOutcomeModel::Degenerate(o) => json!({"degenerate": o.bit()}),
        ArmOutcomeModel::Bernoulli(p) => json!({"bernoulli": frac(p.value())}),
    }
}

fn tree_value(t: &LotteryTree) -> Value {
    match t {
        LotteryTree::Leaf(u) => json!({"leaf": frac(u)}),
        LotteryTree::Chance(b) => {
            json!({"chance": b.iter().map(|(p, sub)| json!([frac(p.value()), tree_value(sub)])).collect::<Vec<_>>()})
        }
    }
}

/// A JSON value together with its location in the document.
#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

impl<'a> Node<'a> {
    fn field_err(&self, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Field { path: self.path.to_string(), message: message.into() }
    }

    fn invalid(&self, source: ModelError) -> ScenarioError {
        ScenarioError::Invalid { path: self.path.to_string(), source }
    }

    fn object(&self) -> Result<&'a Map<String, Value>, ScenarioError> {
        self.value.as_object().ok_or_else(|| self.field_err("expected an object"))
    }

    fn string(&self) -> Result<&'a str, ScenarioError> {
        self.value.as_str().ok_or_else(|| self.field_err("expected a string"))
    }

    fn rational(&self) -> Result<Rational, ScenarioError> {
        match self.value {
            Value::String(s) => parse_fraction(s).map_err(|e| match e {
                FractionError::Decimal(literal) => ScenarioError::DecimalLiteral { path: self.path.into(), literal },
                other => self.field_err(other.to_string()),
            }),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64").into())),
            Value::Number(n) => {
                Err(ScenarioError::DecimalLiteral { path: self.path.into(), literal: n.to_string() })
            }
            _ => Err(self.field_err("expected a fraction string \"a/b\" or an integer")),
        }
    }

    fn probability(&self) -> Result<Probability, ScenarioError> {
        Probability::new(self.rational()?).map_err(|e| self.invalid(e))
    }
}

/// Looks up `key` in `obj`; the returned path is owned by the caller.
fn child_path(parent: &str, key: &str) -> String {
    if parent.is_empty() { key.to_string() } else { format!("{parent}.{key}") }
}

fn required<'a>(obj: &'a Map<String, Value>, parent: &str, key: &str) -> Result<(&'a Value, String), ScenarioError> {
    let path = child_path(parent, key);
    obj.get(key).map(|v| (v, path.clone())).ok_or(ScenarioError::Field { path, message: "missing field".into() })
}

fn get_rational(obj: &Map<String, Value>, parent: &str, key: &str) -> Result<Rational, ScenarioError> {
    let (v, path) = required(obj, parent, key)?;
    Node { value: v, path: &path }.rational()
}

fn get_probability(obj: &Map<String, Value>, parent: &str, key: &str) -> Result<Probability, ScenarioError> {
    let (v, path) = required(obj, parent, key)?;
    Node { value: v, path: &path }.probability()
}

fn get_string(obj: &Map<String, Value>, parent: &str, key: &str) -> Result<String, ScenarioError> {
    let (v, path) = required(obj, parent, key)?;
    Node { value: v, path: &path }.string().map(str::to_string)
}

fn optional_string(obj: &Map<String, Value>, parent: &str, key: &str) -> Result<Option<String>, ScenarioError> {
    if obj.contains_key(key) { get_string(obj, parent, key).map(Some) } else { Ok(None) }
}

fn parse_strata(node: Node<'_>) -> Result<StrataDistribution, ScenarioError> {
    let obj = node.object()?;
    let g = |k| get_probability(obj, node.path, k);
    StrataDistribution::new(g("s11")?, g("s00")?, g("s10")?, g("s01")?).map_err(|e| node.invalid(e))
}

fn parse_arm(node: Node<'_>) -> Result<ArmOutcomeModel, ScenarioError> {
    let obj = node.object()?;
    match (obj.get("degenerate"), obj.get("bernoulli")) {
        (Some(_), None) => {
            let bit = get_rational(obj, node.path, "degenerate")?;
            let path = child_path(node.path, "degenerate");
            let outcome = if bit.is_zero() {
                BinaryOutcome::Death
            } else if bit == ratio(1, 1) {
                BinaryOutcome::Survival
            } else {
                return Err(ScenarioError::Field { path, message: format!("degenerate outcome must be 0 or 1, got {bit}") });
            };
            Ok(ArmOutcomeModel::Degenerate(outcome))
        }
        (None, Some(_)) => Ok(ArmOutcomeModel::Bernoulli(get_probability(obj, node.path, "bernoulli")?)),
        _ => Err(node.field_err("arm must have exactly one of \"degenerate\" or \"bernoulli\"")),
    }
}

fn parse_tree(node: Node<'_>) -> Result<LotteryTree, ScenarioError> {
    let obj = node.object()?;
    match (obj.get("leaf"), obj.get("chance")) {
        (Some(_), None) => Ok(LotteryTree::Leaf(get_rational(obj, node.path, "leaf")?)),
        (None, Some(branches)) => {
            let path = child_path(node.path, "chance");
            let list = branches
                .as_array()
                .ok_or_else(|| ScenarioError::Field { path: path.clone(), message: "expected an array".into() })?;
            let mut out = Vec::with_capacity(list.len());
            for (i, item) in list.iter().enumerate() {
                let item_path = format!("{path}[{i}]");
                let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| ScenarioError::Field {
                    path: item_path.clone(),
                    message: "expected a [probability, tree] pair".into(),
                })?;
                let p_path = format!("{item_path}[0]");
                let t_path = format!("{item_path}[1]");
                let p = Node { value: &pair[0], path: &p_path }.probability()?;
                let t = parse_tree(Node { value: &pair[1], path: &t_path })?;
                out.push((p, t));
            }
            LotteryTree::chance(out).map_err(|e| ScenarioError::Invalid { path, source: e })
        }
        _ => Err(node.field_err("tree must have exactly one of \"leaf\" or \"chance\"")),
    }
}

fn parse_population(node: Node<'_>) -> Result<PopulationModel, ScenarioError> {
    let obj = node.object()?;
    let (units, units_path) = required(obj, node.path, "unit_types")?;
    let list = units
        .as_array()
        .ok_or_else(|| ScenarioError::Field { path: units_path.clone(), message: "expected an array".into() })?;
    let mut unit_types = Vec::with_capacity(list.len());
    for (i, u) in list.iter().enumerate() {
        let path = format!("{units_path}[{i}]");
        let un = Node { value: u, path: &path };
        let uo = un.object()?;
        let arm = |key: &str| -> Result<ArmOutcomeModel, ScenarioError> {
            let (v, p) = required(uo, &path, key)?;
            parse_arm(Node { value: v, path: &p })
        };
        let mut t = UnitType::new(get_string(uo, &path, "label")?, get_probability(uo, &path, "weight")?, arm("arm0")?, arm("arm1")?);
        if let Some(dep) = uo.get("dependence") {
            let dep_path = child_path(&path, "dependence");
            t.cross_arm_dependence = Some(parse_strata(Node { value: dep, path: &dep_path })?);
        }
        unit_types.push(t);
    }
    let mut m = PopulationModel::new(unit_types);
    if let Some(l) = optional_string(obj, node.path, "arm0_label")? {
        m.arm0_label = l;
    }
    if let Some(l) = optional_string(obj, node.path, "arm1_label")? {
        m.arm1_label = l;
    }
    m.ensure_valid().map_err(|e| node.invalid(e))?;
    Ok(m)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(document: &str) -> Result<ScenarioFile, ScenarioError> {
    let root: Value = serde_json::from_str(document).map_err(|e| ScenarioError::Malformed(e.to_string()))?;
    let top = Node { value: &root, path: "" };
    let obj = top.object()?;

    let name = get_string(obj, "", "name")?;
    let kind_text = get_string(obj, "", "kind")?;
    let kind = ScenarioKind::from_name(&kind_text)
        .ok_or(ScenarioError::UnknownKind { path: "kind".into(), value: kind_text })?;
    let description = optional_string(obj, "", "description")?;
    let variation_locus = match optional_string(obj, "", "variation_locus")? {
        None => None,
        Some(s) => Some(VariationLocus::from_name(&s).ok_or_else(|| ScenarioError::Field {
            path: "variation_locus".into(),
            message: format!("unknown variation locus {s:?}"),
        })?),
    };
    let utility = match obj.get("utility") {
        None => None,
        Some(v) => {
            let o = Node { value: v, path: "utility" }.object()?;
            Some(OutcomeUtility::new(get_rational(o, "utility", "u0")?, get_rational(o, "utility", "u1")?))
        }
    };
    let asymmetry = match obj.get("asymmetry") {
        None => None,
        Some(v) => {
            let n = Node { value: v, path: "asymmetry" };
            let o = n.object()?;
            let spec = AsymmetricUtilitySpec::new(
                get_rational(o, "asymmetry", "gain")?,
                get_rational(o, "asymmetry", "loss")?,
                get_rational(o, "asymmetry", "tie")?,
            )
            .map_err(|e| n.invalid(e))?;
            Some(spec)
        }
    };

    let (payload_value, _) = required(obj, "", "payload")?;
    let pn = Node { value: payload_value, path: "payload" };
    let payload = match kind {
        ScenarioKind::Strata => ScenarioPayload::Strata(parse_strata(pn)?),
        ScenarioKind::Population => ScenarioPayload::Population(parse_population(pn)?),
        ScenarioKind::Chambers => {
            let o = pn.object()?;
            ScenarioPayload::Chambers(ChamberParameterization::independent(
                get_probability(o, "payload", "phi0")?,
                get_probability(o, "payload", "phi1")?,
            ))
        }
        ScenarioKind::LotteryPair => {
            let o = pn.object()?;
            let tree = |key: &str| -> Result<LotteryTree, ScenarioError> {
                let (v, p) = required(o, "payload", key)?;
                parse_tree(Node { value: v, path: &p })
            };
            let (left, right) = (tree("left")?, tree("right")?);
            let penalty = PenaltySpec::new(get_rational(o, "payload", "penalty")?).map_err(|e| ScenarioError::Invalid {
                path: "payload.penalty".into(),
                source: e,
            })?;
            ScenarioPayload::LotteryPair { left, right, penalty }
        }
    };

    Ok(ScenarioFile { name, description, variation_locus, utility, asymmetry, payload })
}

fn p(n: i64, d: i64) -> Probability {
    Probability::from_ratio(n, d).expect("built-in probability")
}

fn deg(bit: u8) -> ArmOutcomeModel {
    ArmOutcomeModel::Degenerate(BinaryOutcome::from_bit(bit).expect("0 or 1"))
}

pub const BUILTIN_NAMES: [&str; 5] = ["russian_roulette", "snakebite", "ssn_divisibility", "migraine_mixed", "nm_incoherence"];

pub fn russian_roulette() -> ScenarioFile {
    let mut s = ScenarioFile::new(
        "russian_roulette",
        ScenarioPayload::Chambers(ChamberParameterization::independent(p(1, 6), p(1, 7))),
    );
    s.description = Some(
        "Switch from a revolver loaded with probability 1/6 to one loaded with probability 1/7; \
         the spin is part of the treatment"
            .into(),
    );
    s.variation_locus = Some(VariationLocus::WithinUnit);
    s
}

pub fn snakebite() -> ScenarioFile {
    let m = PopulationModel::new(vec![
        UnitType::new("neither condition", p(30, 42), deg(1), deg(1)),
        UnitType::new("both conditions", p(1, 42), deg(0), deg(0)),
        UnitType::new("only the condition defeating the new antidote", p(5, 42), deg(1), deg(0)),
        UnitType::new("only the condition defeating the current antidote", p(6, 42), deg(0), deg(1)),
    ])
    .with_arm_labels("current antidote", "new antidote");
    let mut s = ScenarioFile::new("snakebite", ScenarioPayload::Population(m));
    s.description = Some(
        "Current antidote fails for an independent 1/6 of patients, the new one for 1/7; \
         outcomes are fixed attributes of each patient"
            .into(),
    );
    s.variation_locus = Some(VariationLocus::AcrossUnit);
    s
}

/// Customers identified by the residue of their number modulo 42; the
/// status quo loses multiples of 6, the intervention multiples of 7.
pub fn ssn_divisibility() -> ScenarioFile {
    let units = (1..=42u32)
        .map(|r| {
            UnitType::new(
                format!("residue {r} mod 42"),
                p(1, 42),
                deg(u8::from(r % 6 != 0)),
                deg(u8::from(r % 7 != 0)),
            )
        })
        .collect();
    let m = PopulationModel::new(units).with_arm_labels("lose multiples of 6", "lose multiples of 7");
    let mut s = ScenarioFile::new("ssn_divisibility", ScenarioPayload::Population(m));
    s.description = Some(
        "Lose customers whose number is divisible by 6, or instead those divisible by 7; \
         deterministic outcomes with no relevant differences between strata"
            .into(),
    );
    s.variation_locus = Some(VariationLocus::AcrossUnit);
    s
}

pub fn migraine_mixed() -> ScenarioFile {
    let m = PopulationModel::new(vec![
        UnitType::new("migraine", p(3, 10), deg(0), ArmOutcomeModel::Bernoulli(p(1, 2))),
        UnitType::new("non-migraine", p(7, 10), ArmOutcomeModel::Bernoulli(p(4, 5)), ArmOutcomeModel::Bernoulli(p(7, 10))),
    ])
    .with_arm_labels("current treatment", "new treatment");
    let mut s = ScenarioFile::new("migraine_mixed", ScenarioPayload::Population(m));
    s.description = Some(
        "Illustrative parameters chosen for this library, not published values: migraine patients \
         never respond to the current treatment and respond with probability 1/2 to the new one; \
         other patients respond with probability 4/5 versus 7/10"
            .into(),
    );
    s.variation_locus = Some(VariationLocus::Mixed);
    s
}

pub fn nm_incoherence() -> ScenarioFile {
    let mut s = ScenarioFile::new(
        "nm_incoherence",
        ScenarioPayload::LotteryPair { left: option_a(), right: option_b(), penalty: PenaltySpec::default() },
    );
    s.description = Some(
        "A pays 1 with probability 3/5; B pays 1 with probability 1/2 and otherwise a lottery paying 1 \
         with probability 1/5; every uncertain stage costs 10%"
            .into(),
    );
    s
}

pub fn builtin_scenarios() -> Vec<ScenarioFile> {
    vec![russian_roulette(), snakebite(), ssn_divisibility(), migraine_mixed(), nm_incoherence()]
}

pub fn builtin(name: &str) -> Option<ScenarioFile> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::strata_from_joint;

    #[test]
    fn roulette_round_trip() {
        let s = russian_roulette();
        let parsed = parse_scenario(&s.to_json()).unwrap();
        assert_eq!(parsed, s);
        match parsed.payload {
            ScenarioPayload::Chambers(c) => {
                assert_eq!((c.phi0_loaded_prob, c.phi1_loaded_prob), (p(1, 6), p(1, 7)));
            }
            other => panic!("unexpected payload {other:?}"),
        }
    }

    #[test]
    fn every_builtin_round_trips() {
        for s in builtin_scenarios() {
            assert_eq!(parse_scenario(&s.to_json()).unwrap(), s, "{}", s.name);
        }
    }

    #[test]
    fn overrides_round_trip() {
        let mut s = ScenarioFile::new(
            "custom",
            ScenarioPayload::Strata(strata_from_joint(p(1, 2), p(0, 1), p(1, 4), p(1, 4)).unwrap()),
        );
        s.utility = Some(OutcomeUtility::new(ratio(-1, 1), ratio(2, 1)));
        s.asymmetry = Some(AsymmetricUtilitySpec::new(ratio(1, 3), ratio(3, 1), ratio(0, 1)).unwrap());
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn decimal_weight_rejected() {
        let doc = r#"{"name":"x","kind":"population","payload":{"unit_types":[
            {"label":"a","weight":"0.5","arm0":{"degenerate":1},"arm1":{"degenerate":1}},
            {"label":"b","weight":"1/2","arm0":{"degenerate":1},"arm1":{"degenerate":1}}]}}"#;
        let err = parse_scenario(doc).unwrap_err();
        assert_eq!(
            err,
            ScenarioError::DecimalLiteral { path: "payload.unit_types[0].weight".into(), literal: "0.5".into() }
        );
        assert!(err.to_string().contains("use exact fractions"));

        let doc = r#"{"name":"x","kind":"chambers","payload":{"phi0":0.25,"phi1":"1/7"}}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::DecimalLiteral { path, .. }) if path == "payload.phi0"));
    }

    #[test]
    fn structural_errors_carry_paths() {
        assert!(matches!(parse_scenario("{"), Err(ScenarioError::Malformed(_))));
        assert!(matches!(
            parse_scenario(r#"{"name":"x","kind":"bogus","payload":{}}"#),
            Err(ScenarioError::UnknownKind { .. })
        ));
        let err = parse_scenario(r#"{"name":"x","kind":"strata","payload":{"s11":"1/2","s00":"1/2","s10":"1/42","s01":"0"}}"#)
            .unwrap_err();
        assert!(matches!(&err, ScenarioError::Invalid { path, source: ModelError::StrataMassSum(_) } if path == "payload"));
        let err = parse_scenario(r#"{"name":"x","kind":"strata","payload":{"s11":"1"}}"#).unwrap_err();
        assert_eq!(err, ScenarioError::Field { path: "payload.s00".into(), message: "missing field".into() });
        let err = parse_scenario(
            r#"{"name":"x","kind":"lottery_pair","payload":{"left":{"leaf":"1"},"right":{"chance":[["1/2",{"leaf":"1"}],["1/3",{"leaf":"0"}]]},"penalty":"9/10"}}"#,
        )
        .unwrap_err();
        assert!(matches!(&err, ScenarioError::Invalid { path, .. } if path == "payload.right.chance"));
        let err = parse_scenario(
            r#"{"name":"x","kind":"population","payload":{"unit_types":[{"label":"a","weight":"1","arm0":{"degenerate":2},"arm1":{"bernoulli":"1/2"}}]}}"#,
        )
        .unwrap_err();
        assert!(matches!(&err, ScenarioError::Field { path, .. } if path == "payload.unit_types[0].arm0.degenerate"));
    }

    #[test]
    fn population_validation_applies() {
        let doc = r#"{"name":"x","kind":"population","payload":{"unit_types":[
            {"label":"a","weight":"41/42","arm0":{"bernoulli":"5/6"},"arm1":{"bernoulli":"6/7"}}]}}"#;
        let err = parse_scenario(doc).unwrap_err();
        assert!(err.to_string().contains("weights sum ≠ 1"), "{err}");
    }

    #[test]
    fn dependence_is_parsed() {
        let doc = r#"{"name":"x","kind":"population","payload":{"unit_types":[
            {"label":"a","weight":"1","arm0":{"bernoulli":"1/2"},"arm1":{"bernoulli":"1/2"},
             "dependence":{"s11":"1/2","s00":"1/2","s10":"0","s01":"0"}}]}}"#;
        let s = parse_scenario(doc).unwrap();
        let view = s.deterministic_view().unwrap().unwrap();
        assert_eq!(view.mass(PrincipalStratum::HARMED), &Probability::zero());
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn builtin_names_match() {
        let names: Vec<_> = builtin_scenarios().into_iter().map(|s| s.name).collect();
        assert_eq!(names, BUILTIN_NAMES);
        assert!(builtin("snakebite").is_some());
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn strata_population_view_is_degenerate() {
        let s = ScenarioFile::new("s", ScenarioPayload::Strata(StrataDistribution::point(PrincipalStratum::SAVED)));
        let m = s.population_view().unwrap();
        assert_eq!(m.unit_types.len(), 4);
        assert!(m.unit_types.iter().all(|t| matches!(t.arm0, ArmOutcomeModel::Degenerate(_))));
    }
}
