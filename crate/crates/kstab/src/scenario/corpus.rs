//! The shipped scenario corpus, embedded at build time.

use super::{load_scenario_str, Scenario, ScenarioError};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../scenarios/", $name, ".json")))),*]
    };
}

const FILES: &[(&str, &str)] = corpus![
    "2-1-A",
    "2-1-P-in-E",
    "2-1-S",
    "2-1-S-reducible",
    "2-1-d-2",
    "2-1-d-3",
    "2-1-tower",
    "2-2-S",
    "2-2-T",
    "2-4-A",
    "2-4-cone",
    "2-4-cusp",
    "2-4-nodal",
    "2-5-D-4",
    "2-5-Z-curve",
    "2-5-beta",
    "2-6-blowup",
    "2-6-reducible",
    "2-6-smooth",
    "2-6-weak",
    "2-7-cusp",
    "2-7-nodal",
    "2-7-not-in-E",
    "2-7-quartic",
    "2-7-series",
];

/// `(file stem, JSON text)` of every shipped scenario file.
pub fn builtin_corpus() -> &'static [(&'static str, &'static str)] {
    FILES
}

/// All shipped scenarios, instantiated and sorted by id.
pub fn builtin_scenarios() -> Result<Vec<Scenario>, ScenarioError> {
    let mut out = Vec::new();
    for (_, text) in FILES {
        out.extend(load_scenario_str(text)?);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}
