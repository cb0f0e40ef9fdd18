//! Built-in scenario table and custom scenario ingestion.
//!
//! The fourteen built-ins come in passive/active pairs sharing a split of
//! decisions between subordinates A and B. Odd codes are passive, even codes
//! active. Every built-in uses full interaction (`k = n - 1`) and equal
//! weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agents::{DecisionAssignment, DecisionMakerMode};
use crate::error::{Error, Result};
use crate::landscape::{WeightVector, MAX_ENUMERATION, MAX_INTERACTION, WEIGHT_SUM_TOLERANCE};

/// Decisions per subordinate for each built-in pair, in code order.
pub const BUILTIN_SPLITS: [(usize, usize); 7] =
    [(1, 1), (1, 2), (2, 2), (1, 3), (3, 3), (2, 4), (1, 5)];

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub code: String,
    pub mode: DecisionMakerMode,
    pub split: (usize, usize),
    pub n: usize,
    pub k: usize,
    pub weights: WeightVector,
}

impl ScenarioSpec {
    /// Full interaction, equal weights.
    pub fn new(code: impl Into<String>, mode: DecisionMakerMode, split: (usize, usize)) -> Self {
        let n = split.0 + split.1;
        Self {
            code: code.into(),
            mode,
            split,
            n,
            k: n.saturating_sub(1),
            weights: WeightVector::equal(n.max(1)),
        }
    }

    pub fn split_label(&self) -> String {
        format!("{}-{}", self.split.0, self.split.1)
    }

    /// Key for per-trial seed derivation. Scenarios sharing a split share
    /// landscapes and status quos trial by trial, whatever their mode, code or
    /// weights.
    pub fn seed_key(&self) -> String {
        self.split_label()
    }

    pub fn assignment(&self) -> Result<DecisionAssignment> {
        DecisionAssignment::from_split(self.split.0, self.split.1)
    }

    pub fn validate(&self) -> Result<()> {
        validate_scenario(self)
    }

    pub fn to_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            code: self.code.clone(),
            mode: self.mode,
            split: [self.split.0, self.split.1],
            weights: Some(self.weights.as_slice().to_vec()),
            k: Some(self.k),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_config()).expect("scenario config is always serializable")
    }
}

/// On-disk form of a custom scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub code: String,
    pub mode: DecisionMakerMode,
    pub split: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl TryFrom<ScenarioConfig> for ScenarioSpec {
    type Error = Error;

    fn try_from(cfg: ScenarioConfig) -> Result<Self> {
        let [a, b] = cfg.split;
        if a < 1 || b < 1 {
            return Err(Error::validation(
                "split",
                format!("each subordinate needs at least one decision, got [{a}, {b}]"),
            ));
        }
        let n = a + b;
        let weights = match cfg.weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::validation(
                        "weights",
                        format!("expected {n} weights, got {}", w.len()),
                    ));
                }
                WeightVector::new(w).map_err(|e| Error::validation("weights", e.to_string()))?
            }
            None => WeightVector::equal(n),
        };
        let spec = ScenarioSpec {
            code: cfg.code,
            mode: cfg.mode,
            split: (a, b),
            n,
            k: cfg.k.unwrap_or(n - 1),
            weights,
        };
        validate_scenario(&spec)?;
        Ok(spec)
    }
}

/// Parses a JSON scenario document `{code, mode, split, weights?, k?}`.
pub fn parse_scenario_config(text: &str) -> Result<ScenarioSpec> {
    let cfg: ScenarioConfig = serde_json::from_str(text)?;
    cfg.try_into()
}

pub fn validate_scenario(spec: &ScenarioSpec) -> Result<()> {
    if spec.code.trim().is_empty() {
        return Err(Error::validation("code", "scenario code is empty"));
    }
    let (a, b) = spec.split;
    if a < 1 || b < 1 {
        return Err(Error::validation(
            "split",
            format!("each subordinate needs at least one decision, got [{a}, {b}]"),
        ));
    }
    if a + b != spec.n {
        return Err(Error::validation(
            "n",
            format!(
                "split [{a}, {b}] covers {} components, n is {}",
                a + b,
                spec.n
            ),
        ));
    }
    if spec.n > MAX_ENUMERATION {
        return Err(Error::validation(
            "split",
            format!(
                "n = {} exceeds the enumeration limit {MAX_ENUMERATION}",
                spec.n
            ),
        ));
    }
    if spec.k >= spec.n || spec.k > MAX_INTERACTION {
        return Err(Error::validation(
            "k",
            format!("k = {} must satisfy 0 <= k <= n-1 = {}", spec.k, spec.n - 1),
        ));
    }
    let w = spec.weights.as_slice();
    if w.len() != spec.n {
        return Err(Error::validation(
            "weights",
            format!("expected {} weights, got {}", spec.n, w.len()),
        ));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE || w.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(Error::validation(
            "weights",
            format!("weights must be non-negative and sum to 1, got sum {sum}"),
        ));
    }
    Ok(())
}

/// The fourteen built-in scenarios, L01 through L14.
pub fn builtin_scenarios() -> Vec<ScenarioSpec> {
    BUILTIN_SPLITS
        .iter()
        .enumerate()
        .flat_map(|(pair, &split)| {
            [DecisionMakerMode::Passive, DecisionMakerMode::Active]
                .into_iter()
                .enumerate()
                .map(move |(offset, mode)| {
                    ScenarioSpec::new(format!("L{:02}", 2 * pair + offset + 1), mode, split)
                })
        })
        .collect()
}

pub fn builtin(code: &str) -> Option<ScenarioSpec> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.code.eq_ignore_ascii_case(code))
}

/// Named weight presets for the non-equal effects analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightsPreset {
    #[default]
    Equal,
    /// Component 0 weighted four times as heavily as each of the others, i.e.
    /// proportional to `(4, 1, ..., 1)`. For L03/L04 this is `(2/3, 1/6, 1/6)`.
    Skewed,
}

impl WeightsPreset {
    pub fn weights(&self, n: usize) -> WeightVector {
        match self {
            WeightsPreset::Equal => WeightVector::equal(n),
            WeightsPreset::Skewed => {
                let mut raw = vec![1.0; n];
                raw[0] = 4.0;
                WeightVector::proportional(&raw).expect("positive raw weights")
            }
        }
    }

    pub fn apply(&self, spec: &ScenarioSpec) -> ScenarioSpec {
        ScenarioSpec {
            weights: self.weights(spec.n),
            ..spec.clone()
        }
    }
}

impl fmt::Display for WeightsPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightsPreset::Equal => "equal",
            WeightsPreset::Skewed => "skewed",
        })
    }
}

impl FromStr for WeightsPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(WeightsPreset::Equal),
            "skewed" => Ok(WeightsPreset::Skewed),
            other => Err(Error::Usage(format!(
                "unknown weights preset {other:?} (expected equal or skewed)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table() {
        let all = builtin_scenarios();
        assert_eq!(all.len(), 14);
        let codes: Vec<_> = all.iter().map(|s| s.code.as_str()).collect();
        assert_eq!(codes.first(), Some(&"L01"));
        assert_eq!(codes.last(), Some(&"L14"));
        assert_eq!(
            all.iter()
                .filter(|s| s.mode == DecisionMakerMode::Passive)
                .count(),
            7
        );
        for pair in all.chunks(2) {
            assert_eq!(pair[0].split, pair[1].split);
            assert_eq!(pair[0].mode, DecisionMakerMode::Passive);
            assert_eq!(pair[1].mode, DecisionMakerMode::Active);
        }
        let sums: Vec<_> = all.chunks(2).map(|p| p[0].n).collect();
        assert_eq!(sums, vec![2, 3, 4, 4, 6, 6, 6]);
        for s in &all {
            assert_eq!(s.k, s.n - 1);
            assert!(s.weights.is_equal());
            validate_scenario(s).unwrap();
        }
    }

    #[test]
    fn named_builtins() {
        let l07 = builtin("L07").unwrap();
        assert_eq!(
            (l07.split, l07.n, l07.k, l07.mode),
            ((1, 3), 4, 3, DecisionMakerMode::Passive)
        );
        let l01 = builtin("L01").unwrap();
        assert_eq!(
            (l01.split, l01.n, l01.k, l01.mode),
            ((1, 1), 2, 1, DecisionMakerMode::Passive)
        );
        let l14 = builtin("L14").unwrap();
        assert_eq!(
            (l14.split, l14.n, l14.k, l14.mode),
            ((1, 5), 6, 5, DecisionMakerMode::Active)
        );
        assert!(builtin("L15").is_none());
    }

    #[test]
    fn parse_defaults() {
        let s = parse_scenario_config(r#"{"code":"X1","mode":"active","split":[2,2]}"#).unwrap();
        assert_eq!((s.n, s.k, s.mode), (4, 3, DecisionMakerMode::Active));
        assert!(s.weights.is_equal());
    }

    #[test]
    fn parse_weights_and_k() {
        let s = parse_scenario_config(
            r#"{"code":"X2","mode":"passive","split":[1,2],"weights":[0.5,0.3,0.2]}"#,
        )
        .unwrap();
        assert_eq!(s.weights.as_slice(), &[0.5, 0.3, 0.2]);
        assert_eq!(s.k, 2);

        let s =
            parse_scenario_config(r#"{"code":"K0","mode":"active","split":[3,3],"k":0}"#).unwrap();
        assert_eq!(s.k, 0);
    }

    fn field_of(r: Result<ScenarioSpec>) -> &'static str {
        match r {
            Err(Error::Validation { field, .. }) => field,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_name_field() {
        assert_eq!(
            field_of(parse_scenario_config(
                r#"{"code":"X","mode":"active","split":[0,3]}"#
            )),
            "split"
        );
        assert_eq!(
            field_of(parse_scenario_config(
                r#"{"code":"X","mode":"active","split":[1,2],"weights":[0.5,0.3,0.1]}"#
            )),
            "weights"
        );
        assert_eq!(
            field_of(parse_scenario_config(
                r#"{"code":"X","mode":"active","split":[1,2],"k":3}"#
            )),
            "k"
        );
        assert!(matches!(
            parse_scenario_config("{not json"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_scenario_config(r#"{"code":"X","mode":"bossy","split":[1,2]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn validate_catches_inconsistent_specs() {
        let mut s = builtin("L03").unwrap();
        s.n = 4;
        assert!(matches!(
            validate_scenario(&s),
            Err(Error::Validation { field: "n", .. })
        ));

        let s = ScenarioSpec {
            weights: WeightVector::equal(4),
            ..builtin("L03").unwrap()
        };
        assert!(matches!(
            validate_scenario(&s),
            Err(Error::Validation {
                field: "weights",
                ..
            })
        ));

        let mut s = builtin("L03").unwrap();
        s.k = 3;
        assert!(matches!(
            validate_scenario(&s),
            Err(Error::Validation { field: "k", .. })
        ));

        let s = builtin("L05").unwrap();
        validate_scenario(&s).unwrap();
        validate_scenario(&s).unwrap();
    }

    #[test]
    fn roundtrip_through_config() {
        let original = WeightsPreset::Skewed.apply(&builtin("L03").unwrap());
        let again = parse_scenario_config(&original.to_json()).unwrap();
        assert_eq!(original, again);
    }

    #[test]
    fn skewed_preset() {
        let w = WeightsPreset::Skewed.weights(3);
        assert_eq!(w.as_slice(), &[4.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
        assert!(!w.is_equal());
        assert!(WeightsPreset::Equal.weights(3).is_equal());
    }
}
