//! Serialized scenario layout. Every number is an exact expression string.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub type Coeffs = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub id: String,
    pub lemma: String,
    #[serde(rename = "V")]
    pub volume: String,
    /// Template parameters; one scenario is instantiated per combination.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub curves: Vec<String>,
    #[serde(default)]
    pub gram: Vec<Vec<String>>,
    #[serde(default)]
    pub threefold: BTreeMap<String, ThreefoldSpec>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilySpec>,
    #[serde(default)]
    pub flags: BTreeMap<String, FlagSpec>,
    pub expect: Vec<ExpectSpec>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreefoldSpec {
    #[serde(default)]
    pub basis: Vec<String>,
    /// Keys are comma-separated basis names, e.g. `"H,E,E"`.
    #[serde(default)]
    pub triple: Coeffs,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Coeffs>,
    pub intervals: Vec<IntervalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    pub u: [String; 2],
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<Coeffs>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub negative: Option<Coeffs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vol: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub center: String,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub u: [String; 2],
    pub base: Coeffs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vmax: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ord_center: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub restricted: Coeffs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    pub family: String,
    /// Local multiplicities; the key `"*"` sets a default.
    #[serde(default)]
    pub mult: Coeffs,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub different: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSpec {
    pub op: String,
    #[serde(default)]
    pub args: serde_json::Map<String, serde_json::Value>,
    pub value: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
}
