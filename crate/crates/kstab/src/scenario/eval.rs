//! Expectation evaluation.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{Expected, Quantity, Relation, Scenario};
use crate::exact::{format_decimal, format_rational, Rational};
use crate::invariants::{
    beta_lower_bound, curve_terms, decompose_family, delta_min_combinator, f_term, fiber_delta_bound, point_base,
    quartic_fiber_bound, s_curve, s_point, s_threefold, InvariantError, PieceResult,
};
use crate::series::{self, Half, SeriesError, SeriesReport, TermKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Computed {
    Value(Rational),
    Thresholds(Vec<String>),
    Text(String),
    Supports(Vec<Vec<String>>),
}

impl Computed {
    pub fn render(&self) -> String {
        match self {
            Computed::Value(r) => format_rational(r),
            Computed::Thresholds(t) => t.join(" | "),
            Computed::Text(s) => s.clone(),
            Computed::Supports(s) => render_supports(s),
        }
    }
}

fn render_supports(s: &[Vec<String>]) -> String {
    let rows: Vec<String> = s.iter().map(|r| format!("{{{}}}", r.join(","))).collect();
    rows.join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub op: String,
    pub args: serde_json::Map<String, serde_json::Value>,
    pub relation: String,
    pub expected: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub computed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: String,
    pub lemma: String,
    pub rows: Vec<ExpectationOutcome>,
}

impl ScenarioReport {
    pub fn status(&self) -> Status {
        if self.rows.iter().any(|r| r.status == Status::Error) {
            Status::Error
        } else if self.rows.iter().any(|r| r.status == Status::Mismatch) {
            Status::Mismatch
        } else {
            Status::Match
        }
    }
}

/// Lazily decomposed families and series runs shared across a scenario's expectations.
struct Cache<'a> {
    sc: &'a Scenario,
    families: BTreeMap<String, Result<Vec<PieceResult>, String>>,
    series: BTreeMap<usize, Result<SeriesReport, String>>,
}

impl<'a> Cache<'a> {
    fn family(&mut self, name: &str) -> Result<&[PieceResult], String> {
        let sc = self.sc;
        let entry = self.families.entry(name.to_string()).or_insert_with(|| {
            let lat = sc.lattice.as_ref().ok_or("no lattice")?;
            decompose_family(lat, &sc.families[name]).map_err(|e| e.to_string())
        });
        entry.as_ref().map(Vec::as_slice).map_err(Clone::clone)
    }

    fn series(&mut self, max_n: usize) -> Result<&SeriesReport, String> {
        self.series
            .entry(max_n)
            .or_insert_with(|| series::series_sum(max_n as u64).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn inv(e: InvariantError) -> String {
    e.to_string()
}

fn ser(e: SeriesError) -> String {
    e.to_string()
}

fn compute(cache: &mut Cache, q: &Quantity) -> Result<Computed, String> {
    let sc = cache.sc;
    let v = &sc.volume;
    let value = |r: Rational| Ok(Computed::Value(r));
    match q {
        Quantity::SThreefold { threefold } => value(s_threefold(&sc.threefolds[threefold]).map_err(inv)?),
        Quantity::BetaLowerBound { threefold, a } => {
            let data = &sc.threefolds[threefold];
            let vols = data.piece_volumes().map_err(inv)?;
            let pieces: Vec<_> =
                data.pieces.iter().zip(vols).map(|(p, vol)| (p.u0.clone(), p.u1.clone(), vol)).collect();
            value(beta_lower_bound(&data.volume, a, &pieces).map_err(inv)?)
        }
        Quantity::Beta { a, s, threefold } => {
            let s = match (s, threefold) {
                (Some(s), _) => s.clone(),
                (None, Some(t)) => s_threefold(&sc.threefolds[t]).map_err(inv)?,
                (None, None) => return Err("beta needs S or threefold".into()),
            };
            value(a - s)
        }
        Quantity::SCurve { family } => {
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            value(s_curve(v, lat, &sc.families[family], res))
        }
        Quantity::CurveFirstTerm { family, piece } | Quantity::CurveDoubleIntegral { family, piece } => {
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            let terms = curve_terms(lat, &sc.families[family], res);
            let first = matches!(q, Quantity::CurveFirstTerm { .. });
            let total: Rational = terms
                .iter()
                .enumerate()
                .filter(|(k, _)| piece.is_none_or(|p| p == *k))
                .map(|(_, (a, b))| if first { a.clone() } else { b.clone() })
                .sum();
            value(Rational::from_integer(3.into()) * total / v)
        }
        Quantity::CurveRatio { family, a } => {
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            value(a / s_curve(v, lat, &sc.families[family], res))
        }
        Quantity::PointBase { family } => {
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            value(point_base(v, lat, &sc.families[family], res))
        }
        Quantity::FTerm { flag } | Quantity::SPoint { flag } | Quantity::PointRatio { flag } => {
            let (family, data) = &sc.flags[flag];
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            let fam = &sc.families[family];
            match q {
                Quantity::FTerm { .. } => value(f_term(v, lat, fam, res, data).map_err(inv)?),
                Quantity::SPoint { .. } => value(s_point(v, lat, fam, res, data).map_err(inv)?),
                _ => {
                    // (A - ord_Q Δ) / S(W; Q), with A = 1 unless the flag says otherwise
                    let a = data.weight.clone().unwrap_or_else(|| Rational::from_integer(1.into()));
                    value((a - &data.different) / s_point(v, lat, fam, res, data).map_err(inv)?)
                }
            }
        }
        Quantity::Threshold { family, piece } => {
            let res = cache.family(family)?;
            Ok(Computed::Thresholds(res[*piece].threshold.iter().map(|t| t.t.to_string()).collect()))
        }
        Quantity::ChamberSupports { family, piece } => {
            let res = cache.family(family)?;
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            let mut rows: Vec<Vec<String>> = res[*piece]
                .dec
                .chambers
                .iter()
                .map(|c| c.support.iter().map(|&i| lat.curve_name(i).to_string()).collect())
                .collect();
            rows.sort();
            rows.dedup();
            Ok(Computed::Supports(rows))
        }
        Quantity::ChamberCount { family, piece } => {
            let res = cache.family(family)?;
            let n: usize = res
                .iter()
                .enumerate()
                .filter(|(k, _)| piece.is_none_or(|p| p == *k))
                .map(|(_, r)| r.dec.chambers.len())
                .sum();
            value(Rational::from_integer((n as i64).into()))
        }
        Quantity::DeltaMin { terms } => value(delta_min_combinator(terms).map_err(inv)?),
        Quantity::FiberDeltaBound { d, delta, on_e } => value(fiber_delta_bound(*d, delta, *on_e).map_err(inv)?),
        Quantity::QuarticFiberBound { delta, singular } => {
            Ok(Computed::Text(quartic_fiber_bound(delta, *singular).as_str().to_string()))
        }
        Quantity::SeriesTerm { kind, n, i } => {
            let kind = match kind.as_str() {
                "S" => TermKind::S,
                "F" => TermKind::F,
                "M1" => TermKind::MPrime,
                _ => TermKind::MDouble,
            };
            value(series::series_term(kind, *n as u64, *i).map_err(ser)?)
        }
        Quantity::SeriesThreshold { n, i } => {
            let universe = series::BandUniverse::new(*n as u64).map_err(ser)?;
            let mut ts = Vec::new();
            for half in [Half::Prime, Half::DoublePrime] {
                let band = series::compute_band(&universe, *i, half).map_err(ser)?;
                ts.extend(band.threshold.iter().map(|t| t.t.to_string()));
            }
            Ok(Computed::Thresholds(ts))
        }
        Quantity::SeriesSPartial { max_n } => value(cache.series(*max_n)?.s_partial.clone()),
        Quantity::SeriesFPartial { max_n } => value(cache.series(*max_n)?.f_partial.clone()),
    }
}

fn relation_name(r: &Relation) -> String {
    match r {
        Relation::Eq => "eq".into(),
        Relation::Le => "le".into(),
        Relation::Lt => "lt".into(),
        Relation::Ge => "ge".into(),
        Relation::Gt => "gt".into(),
        Relation::Approx(t) => format!("approx(±{})", format_rational(t)),
    }
}

fn render_expected(e: &Expected) -> String {
    match e {
        Expected::Value(r) => format_rational(r),
        Expected::Affine(a) => a.to_string(),
        Expected::Text(s) => s.clone(),
        Expected::Supports(s) => {
            let mut s: Vec<Vec<String>> = s.iter().map(|r| sorted(r)).collect();
            s.sort();
            render_supports(&s)
        }
    }
}

fn sorted(r: &[String]) -> Vec<String> {
    let mut r = r.to_vec();
    r.sort();
    r
}

fn compare(computed: &Computed, expected: &Expected, relation: &Relation) -> bool {
    match (computed, expected) {
        (Computed::Value(c), Expected::Value(e)) => match relation {
            Relation::Eq => c == e,
            Relation::Le => c <= e,
            Relation::Lt => c < e,
            Relation::Ge => c >= e,
            Relation::Gt => c > e,
            Relation::Approx(tol) => (c - e).abs() <= *tol,
        },
        (Computed::Thresholds(ts), Expected::Affine(a)) => !ts.is_empty() && ts.iter().all(|t| *t == a.to_string()),
        (Computed::Text(c), Expected::Text(e)) => c == e,
        (Computed::Supports(c), Expected::Supports(e)) => {
            let mut c: Vec<Vec<String>> = c.iter().map(|r| sorted(r)).collect();
            let mut e: Vec<Vec<String>> = e.iter().map(|r| sorted(r)).collect();
            c.sort();
            e.sort();
            e.dedup();
            c == e
        }
        _ => false,
    }
}

/// Evaluates every expectation of a scenario in file order.
pub fn run_expectations(sc: &Scenario) -> ScenarioReport {
    let mut cache = Cache { sc, families: BTreeMap::new(), series: BTreeMap::new() };
    let rows = sc
        .expectations
        .iter()
        .map(|e| {
            let mut row = ExpectationOutcome {
                op: e.op.clone(),
                args: e.args.clone(),
                relation: relation_name(&e.relation),
                expected: render_expected(&e.expected),
                computed: None,
                decimal: None,
                status: Status::Error,
                message: None,
            };
            match compute(&mut cache, &e.quantity) {
                Ok(c) => {
                    row.status = if compare(&c, &e.expected, &e.relation) { Status::Match } else { Status::Mismatch };
                    if let Computed::Value(r) = &c {
                        row.decimal = Some(format_decimal(r, 12));
                    }
                    row.computed = Some(c.render());
                }
                Err(msg) => row.message = Some(msg),
            }
            row
        })
        .collect();
    ScenarioReport { id: sc.id.clone(), lemma: sc.lemma.clone(), rows }
}

impl Scenario {
    /// Chamber decompositions of a named family, piece by piece.
    pub fn family_results(&self, name: &str) -> Result<Vec<PieceResult>, InvariantError> {
        let lat = self.lattice.as_ref().ok_or_else(|| InvariantError::InvalidFlag("scenario has no lattice".into()))?;
        let fam = self
            .families
            .get(name)
            .ok_or_else(|| InvariantError::InvalidFlag(format!("unknown family {name:?}")))?;
        decompose_family(lat, fam)
    }
}
