//! Human and JSON renderings of verification, series and chamber reports.
//!
//! JSON reports hold only strings, integers and arrays, so parsing one back and
//! serializing it again reproduces the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exact::{format_decimal, format_rational, Rational};
use crate::invariants::PieceResult;
use crate::lattice::CurveLattice;
use crate::scenario::{ScenarioReport, Status};
use crate::series::SeriesReport;
use crate::zariski::PointDecomposition;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DECIMAL_DIGITS: usize = 12;

/// `"p/q (d.ddd)"`: exact value first, then the decimal.
pub fn exact_and_decimal(r: &Rational) -> String {
    format!("{} ({})", format_rational(r), format_decimal(r, DECIMAL_DIGITS))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedScenario {
    #[serde(flatten)]
    pub report: ScenarioReport,
    pub status: Status,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub engine_version: String,
    pub scenarios: Vec<TimedScenario>,
}

impl VerifyReport {
    pub fn new(mut scenarios: Vec<(ScenarioReport, u64)>) -> Self {
        scenarios.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        let scenarios = scenarios
            .into_iter()
            .map(|(report, elapsed_ms)| TimedScenario { status: report.status(), report, elapsed_ms })
            .collect();
        VerifyReport { engine_version: ENGINE_VERSION.to_string(), scenarios }
    }

    pub fn status(&self) -> Status {
        let all = self.scenarios.iter().map(|s| s.status);
        if all.clone().any(|s| s == Status::Error) {
            Status::Error
        } else if all.clone().any(|s| s == Status::Mismatch) {
            Status::Mismatch
        } else {
            Status::Match
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.scenarios {
            let _ = writeln!(out, "{} [{}] {} ({} ms)", s.report.id, s.report.lemma, status_word(s.status), s.elapsed_ms);
            for row in &s.report.rows {
                let args = render_args(&row.args);
                let computed = match (&row.computed, &row.decimal) {
                    (Some(c), Some(d)) => format!("{c} ({d})"),
                    (Some(c), None) => c.clone(),
                    (None, _) => "-".to_string(),
                };
                let _ = write!(
                    out,
                    "  {:<8} {}{} computed {} expected {} {}",
                    status_word(row.status),
                    row.op,
                    args,
                    computed,
                    row.relation,
                    row.expected
                );
                if let Some(m) = &row.message {
                    let _ = write!(out, " ({m})");
                }
                out.push('\n');
            }
        }
        let count = |st: Status| self.scenarios.iter().filter(|s| s.status == st).count();
        let _ = writeln!(
            out,
            "{} scenarios: {} match, {} mismatch, {} error",
            self.scenarios.len(),
            count(Status::Match),
            count(Status::Mismatch),
            count(Status::Error)
        );
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Match => "match",
        Status::Mismatch => "MISMATCH",
        Status::Error => "ERROR",
    }
}

fn render_args(args: &serde_json::Map<String, serde_json::Value>) -> String {
    if args.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = args
        .iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl ExactValue {
    pub fn new(r: &Rational) -> Self {
        ExactValue { exact: format_rational(r), decimal: format_decimal(r, DECIMAL_DIGITS) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRowJson {
    pub n: u64,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    #[serde(rename = "M_prime")]
    pub m_prime: Vec<String>,
    #[serde(rename = "M_double")]
    pub m_double: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub engine_version: String,
    pub n_max: u64,
    pub ledger: Vec<SeriesRowJson>,
    pub s_partial: ExactValue,
    pub f_partial: ExactValue,
    pub m_partial: ExactValue,
    /// Fitted `c/n_max` tails; not bounds.
    #[serde(rename = "HEURISTIC_s_tail")]
    pub heuristic_s_tail: String,
    #[serde(rename = "HEURISTIC_f_tail")]
    pub heuristic_f_tail: String,
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn float(x: f64) -> String {
    format!("{x:.12e}")
}

impl SeriesJson {
    pub fn new(r: &SeriesReport) -> Self {
        SeriesJson {
            engine_version: ENGINE_VERSION.to_string(),
            n_max: r.n_max,
            ledger: r
                .rows
                .iter()
                .map(|row| SeriesRowJson {
                    n: row.n,
                    s: strs(&row.s),
                    f: strs(&row.f),
                    m_prime: strs(&row.m_prime),
                    m_double: strs(&row.m_double),
                })
                .collect(),
            s_partial: ExactValue::new(&r.s_partial),
            f_partial: ExactValue::new(&r.f_partial),
            m_partial: ExactValue::new(&r.m_partial),
            heuristic_s_tail: float(r.s_tail_heuristic),
            heuristic_f_tail: float(r.f_tail_heuristic),
        }
    }
}

pub fn series_text(r: &SeriesReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "series ledger, n = 0..={}", r.n_max);
    for row in &r.rows {
        for i in 0..4 {
            let _ = writeln!(
                out,
                "  n={} i={}  S={}  F={}  M'={}  M''={}",
                row.n,
                i + 1,
                format_rational(&row.s[i]),
                format_rational(&row.f[i]),
                format_rational(&row.m_prime[i]),
                format_rational(&row.m_double[i])
            );
        }
    }
    let _ = writeln!(out, "S partial: {}", exact_and_decimal(&r.s_partial));
    let _ = writeln!(out, "F partial: {}", exact_and_decimal(&r.f_partial));
    let _ = writeln!(out, "M partial: {}", exact_and_decimal(&r.m_partial));
    let _ = writeln!(out, "HEURISTIC S tail (c/n_max fit, not a bound): {}", float(r.s_tail_heuristic));
    let _ = writeln!(out, "HEURISTIC F tail (c/n_max fit, not a bound): {}", float(r.f_tail_heuristic));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberJson {
    pub region: Vec<[String; 2]>,
    pub support: Vec<String>,
    #[serde(rename = "N")]
    pub negative: Vec<[String; 2]>,
    #[serde(rename = "P_squared")]
    pub p_squared: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceJson {
    pub u: [String; 2],
    pub threshold: Vec<[String; 3]>,
    pub chambers: Vec<ChamberJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeJson {
    pub scenario: String,
    pub family: String,
    pub pieces: Vec<PieceJson>,
}

impl DecomposeJson {
    pub fn new(scenario: &str, family: &str, lat: &CurveLattice, res: &[PieceResult]) -> Self {
        let pieces = res
            .iter()
            .map(|r| {
                let (u0, u1) = (&r.threshold[0].u0, &r.threshold[r.threshold.len() - 1].u1);
                PieceJson {
                    u: [format_rational(u0), format_rational(u1)],
                    threshold: r
                        .threshold
                        .iter()
                        .map(|t| [format_rational(&t.u0), format_rational(&t.u1), t.t.to_string()])
                        .collect(),
                    chambers: r
                        .dec
                        .chambers
                        .iter()
                        .map(|c| ChamberJson {
                            region: c.region.vertices().iter().map(|(u, v)| [format_rational(u), format_rational(v)]).collect(),
                            support: c.support.iter().map(|&i| lat.curve_name(i).to_string()).collect(),
                            negative: c
                                .support
                                .iter()
                                .zip(&c.coeffs)
                                .map(|(&i, a)| [lat.curve_name(i).to_string(), a.to_string()])
                                .collect(),
                            p_squared: c.p_squared.to_string(),
                        })
                        .collect(),
                }
            })
            .collect();
        DecomposeJson { scenario: scenario.to_string(), family: family.to_string(), pieces }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} / family {}", self.scenario, self.family);
        for (k, p) in self.pieces.iter().enumerate() {
            let _ = writeln!(out, "piece {k}: u in [{}, {}]", p.u[0], p.u[1]);
            for t in &p.threshold {
                let _ = writeln!(out, "  t(u) = {} on [{}, {}]", t[2], t[0], t[1]);
            }
            for c in &p.chambers {
                let region: Vec<String> = c.region.iter().map(|[u, v]| format!("({u}, {v})")).collect();
                let n: Vec<String> = c.negative.iter().map(|[name, a]| format!("({a}){name}")).collect();
                let n = if n.is_empty() { "0".to_string() } else { n.join(" + ") };
                let _ = writeln!(out, "  chamber {}", region.join(" "));
                let _ = writeln!(out, "    N = {n}");
                let _ = writeln!(out, "    P^2 = {}", c.p_squared);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub scenario: String,
    pub family: String,
    pub u: String,
    pub v: String,
    #[serde(rename = "P")]
    pub positive: Vec<[String; 2]>,
    #[serde(rename = "N")]
    pub negative: Vec<[String; 2]>,
    #[serde(rename = "P_squared")]
    pub p_squared: ExactValue,
}

impl PointJson {
    pub fn new(scenario: &str, family: &str, u: &Rational, v: &Rational, lat: &CurveLattice, d: &PointDecomposition) -> Self {
        let named = |class: &crate::lattice::DivisorClass| -> Vec<[String; 2]> {
            lat.basis_names()
                .iter()
                .zip(&class.0)
                .filter(|(_, c)| **c != Rational::from_integer(0.into()))
                .map(|(n, c)| [n.clone(), format_rational(c)])
                .collect()
        };
        PointJson {
            scenario: scenario.to_string(),
            family: family.to_string(),
            u: format_rational(u),
            v: format_rational(v),
            positive: named(&d.positive),
            negative: d
                .support
                .iter()
                .zip(&d.coeffs)
                .map(|(&i, c)| [lat.curve_name(i).to_string(), format_rational(c)])
                .collect(),
            p_squared: ExactValue::new(&d.p_squared),
        }
    }

    pub fn to_text(&self) -> String {
        let fmt = |v: &[[String; 2]]| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter().map(|[n, c]| format!("({c}){n}")).collect::<Vec<_>>().join(" + ")
            }
        };
        format!(
            "{} / family {} at u={}, v={}\n  P = {}\n  N = {}\n  P^2 = {} ({})\n",
            self.scenario,
            self.family,
            self.u,
            self.v,
            fmt(&self.positive),
            fmt(&self.negative),
            self.p_squared.exact,
            self.p_squared.decimal
        )
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
