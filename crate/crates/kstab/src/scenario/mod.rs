//! Declarative scenarios: lattice, threefold data, surface flag families, flags
//! and expected values, loaded from JSON and evaluated end to end.

mod corpus;
mod eval;
mod schema;

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use crate::exact::{AffineForm, Rational};
use crate::expr::{parse_affine, parse_constant, parse_polynomial, ExprError, Params};
use crate::invariants::{FlagData, InvariantError, SurfaceFamily, SurfacePiece, ThreefoldFamilyData, ThreefoldPiece, TripleForm};
use crate::lattice::{CurveLattice, LatticeError, ParametricDivisor};

pub use corpus::{builtin_corpus, builtin_scenarios};
pub use eval::{run_expectations, Computed, ExpectationOutcome, ScenarioReport, Status};
pub use schema::*;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{path}: {source}")]
    Expr { path: String, source: ExprError },
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

fn field(path: impl Into<String>, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Field { path: path.into(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
    Approx(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    SThreefold { threefold: String },
    BetaLowerBound { threefold: String, a: Rational },
    Beta { a: Rational, s: Option<Rational>, threefold: Option<String> },
    SCurve { family: String },
    CurveFirstTerm { family: String, piece: Option<usize> },
    CurveDoubleIntegral { family: String, piece: Option<usize> },
    CurveRatio { family: String, a: Rational },
    PointBase { family: String },
    FTerm { flag: String },
    SPoint { flag: String },
    PointRatio { flag: String },
    Threshold { family: String, piece: usize },
    ChamberSupports { family: String, piece: usize },
    ChamberCount { family: String, piece: Option<usize> },
    DeltaMin { terms: Vec<(Rational, Rational)> },
    FiberDeltaBound { d: i64, delta: Rational, on_e: bool },
    QuarticFiberBound { delta: Rational, singular: bool },
    SeriesTerm { kind: String, n: usize, i: usize },
    SeriesThreshold { n: usize, i: usize },
    SeriesSPartial { max_n: usize },
    SeriesFPartial { max_n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Value(Rational),
    Affine(AffineForm),
    Text(String),
    Supports(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub op: String,
    pub args: serde_json::Map<String, Value>,
    pub quantity: Quantity,
    pub expected: Expected,
    pub relation: Relation,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub lemma: String,
    pub volume: Rational,
    pub params: Params,
    pub lattice: Option<CurveLattice>,
    pub threefolds: BTreeMap<String, ThreefoldFamilyData>,
    pub families: BTreeMap<String, SurfaceFamily>,
    pub flags: BTreeMap<String, (String, FlagData)>,
    pub expectations: Vec<Expectation>,
    pub notes: String,
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

/// Parses and instantiates a scenario file (one scenario per parameter combination).
pub fn load_scenario_str(text: &str) -> Result<Vec<Scenario>, ScenarioError> {
    let file = parse_scenario_file(text)?;
    instantiate(&file)
}

pub fn load_scenario(path: &std::path::Path) -> Result<Vec<Scenario>, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| field(path.display().to_string(), e.to_string()))?;
    load_scenario_str(&text)
}

pub fn instantiate(file: &ScenarioFile) -> Result<Vec<Scenario>, ScenarioError> {
    let mut combos: Vec<Vec<(String, String)>> = vec![vec![]];
    for (name, values) in &file.params {
        if name.len() != 1 || !name.chars().all(|c| c.is_ascii_alphabetic()) || name == "u" || name == "v" {
            return Err(field(format!("params.{name}"), "parameter names are single letters other than u, v"));
        }
        if values.is_empty() {
            return Err(field(format!("params.{name}"), "no values"));
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((name.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .map(|combo| {
            let mut params = Params::new();
            let mut suffix = String::new();
            for (name, raw) in &combo {
                let value = parse_constant(raw, &Params::new())
                    .map_err(|e| ScenarioError::Expr { path: format!("params.{name}"), source: e })?;
                suffix.push_str(&format!("-{name}{raw}"));
                params.insert(name.clone(), value);
            }
            build(file, params, &suffix)
        })
        .collect()
}

struct Ctx<'a> {
    params: &'a Params,
}

impl Ctx<'_> {
    fn constant(&self, path: &str, s: &str) -> Result<Rational, ScenarioError> {
        parse_constant(s, self.params).map_err(|e| ScenarioError::Expr { path: path.to_string(), source: e })
    }

    fn affine(&self, path: &str, s: &str) -> Result<AffineForm, ScenarioError> {
        parse_affine(s, self.params).map_err(|e| ScenarioError::Expr { path: path.to_string(), source: e })
    }

    fn affine_u(&self, path: &str, s: &str) -> Result<AffineForm, ScenarioError> {
        let a = self.affine(path, s)?;
        if !a.coef_v.is_zero() {
            return Err(field(path, "must not depend on v"));
        }
        Ok(a)
    }

    fn class(&self, path: &str, names: &[String], coeffs: &Coeffs) -> Result<ParametricDivisor, ScenarioError> {
        let mut out = ParametricDivisor::zero(names.len());
        for (name, expr) in coeffs {
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| field(format!("{path}.{name}"), "unknown basis element"))?;
            out.0[idx] = self.affine_u(&format!("{path}.{name}"), expr)?;
        }
        Ok(out)
    }
}

fn build(file: &ScenarioFile, params: Params, suffix: &str) -> Result<Scenario, ScenarioError> {
    let ctx = Ctx { params: &params };
    let volume = ctx.constant("V", &file.volume)?;
    if volume <= Rational::zero() {
        return Err(field("V", "must be positive"));
    }

    let lattice = if file.curves.is_empty() {
        if !file.gram.is_empty() {
            return Err(field("gram", "gram given without curves"));
        }
        None
    } else {
        let n = file.curves.len();
        if file.gram.len() != n || file.gram.iter().any(|r| r.len() != n) {
            return Err(field("gram", format!("expected a {n}x{n} matrix")));
        }
        let mut gram = vec![vec![Rational::zero(); n]; n];
        for (i, row) in file.gram.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                gram[i][j] = ctx.constant(&format!("gram[{i}][{j}]"), s)?;
            }
        }
        Some(CurveLattice::new(file.curves.clone(), gram)?)
    };

    let mut threefolds = BTreeMap::new();
    for (name, spec) in &file.threefold {
        let path = format!("threefold.{name}");
        let basis = spec.basis.clone();
        let triple = if spec.triple.is_empty() {
            None
        } else {
            let mut t = TripleForm::default();
            for (key, val) in &spec.triple {
                let idx: Vec<usize> = key
                    .split(',')
                    .map(|k| basis.iter().position(|b| b == k.trim()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| field(format!("{path}.triple.{key}"), "unknown basis element"))?;
                if idx.len() != 3 {
                    return Err(field(format!("{path}.triple.{key}"), "expected three basis names"));
                }
                t.set(idx[0], idx[1], idx[2], ctx.constant(&format!("{path}.triple.{key}"), val)?);
            }
            Some(t)
        };
        let family = spec.family.as_ref().map(|f| ctx.class(&format!("{path}.family"), &basis, f)).transpose()?;
        let mut pieces = Vec::new();
        for (k, iv) in spec.intervals.iter().enumerate() {
            let ip = format!("{path}.intervals[{k}]");
            let u0 = ctx.constant(&format!("{ip}.u[0]"), &iv.u[0])?;
            let u1 = ctx.constant(&format!("{ip}.u[1]"), &iv.u[1])?;
            if u1 < u0 {
                return Err(field(format!("{ip}.u"), "interval is reversed"));
            }
            let p = iv.positive.as_ref().map(|c| ctx.class(&format!("{ip}.P"), &basis, c)).transpose()?;
            let n = iv.negative.as_ref().map(|c| ctx.class(&format!("{ip}.N"), &basis, c)).transpose()?;
            let declared_vol = iv
                .vol
                .as_ref()
                .map(|s| {
                    let p = parse_polynomial(s, ctx.params)
                        .map_err(|e| ScenarioError::Expr { path: format!("{ip}.vol"), source: e })?;
                    if !p.is_univariate() {
                        return Err(field(format!("{ip}.vol"), "must not depend on v"));
                    }
                    Ok(p)
                })
                .transpose()?;
            pieces.push(ThreefoldPiece { u0, u1, p, n, declared_vol });
        }
        let volume = match &spec.volume {
            Some(s) => ctx.constant(&format!("{path}.V"), s)?,
            None => volume.clone(),
        };
        threefolds.insert(name.clone(), ThreefoldFamilyData { basis, triple, volume, family, pieces });
    }

    let mut families = BTreeMap::new();
    for (name, spec) in &file.families {
        let path = format!("families.{name}");
        let lat = lattice.as_ref().ok_or_else(|| field(&path, "families need curves and gram"))?;
        let center = lat.curve_index(&spec.center).map_err(|e| field(format!("{path}.center"), e.to_string()))?;
        let mut pieces = Vec::new();
        for (k, ps) in spec.pieces.iter().enumerate() {
            let pp = format!("{path}.pieces[{k}]");
            let u0 = ctx.constant(&format!("{pp}.u[0]"), &ps.u[0])?;
            let u1 = ctx.constant(&format!("{pp}.u[1]"), &ps.u[1])?;
            if u1 <= u0 {
                return Err(field(format!("{pp}.u"), "interval must have positive length"));
            }
            let base = ctx.class(&format!("{pp}.base"), &file.curves, &ps.base)?;
            let vmax = ps.vmax.as_ref().map(|s| ctx.affine_u(&format!("{pp}.vmax"), s)).transpose()?;
            let ord_center = match &ps.ord_center {
                Some(s) => ctx.affine_u(&format!("{pp}.ord_center"), s)?,
                None => AffineForm::zero(),
            };
            let mut restricted = Vec::new();
            for (label, s) in &ps.restricted {
                restricted.push((label.clone(), ctx.affine_u(&format!("{pp}.restricted.{label}"), s)?));
            }
            pieces.push(SurfacePiece { u0, u1, base, vmax, ord_center, restricted });
        }
        families.insert(name.clone(), SurfaceFamily { center, pieces });
    }

    let mut flags = BTreeMap::new();
    for (name, spec) in &file.flags {
        let path = format!("flags.{name}");
        if !families.contains_key(&spec.family) {
            return Err(field(format!("{path}.family"), format!("unknown family {:?}", spec.family)));
        }
        let mut data = FlagData::default();
        for (k, s) in &spec.mult {
            let m = ctx.constant(&format!("{path}.mult.{k}"), s)?;
            if k == "*" {
                data.default_mult = Some(m);
            } else {
                data.mult.insert(k.clone(), m);
            }
        }
        data.weight = spec.weight.as_ref().map(|s| ctx.constant(&format!("{path}.A"), s)).transpose()?;
        if let Some(s) = &spec.different {
            data.different = ctx.constant(&format!("{path}.different"), s)?;
        }
        data.validate()?;
        flags.insert(name.clone(), (spec.family.clone(), data));
    }

    let mut scenario = Scenario {
        id: format!("{}{}", file.id, suffix),
        lemma: file.lemma.clone(),
        volume,
        params: params.clone(),
        lattice,
        threefolds,
        families,
        flags,
        expectations: Vec::new(),
        notes: file.notes.clone(),
    };
    for (k, spec) in file.expect.iter().enumerate() {
        let e = parse_expectation(&scenario, &ctx, &format!("expect[{k}]"), spec)?;
        scenario.expectations.push(e);
    }
    Ok(scenario)
}

fn arg_str(args: &serde_json::Map<String, Value>, path: &str, key: &str) -> Result<String, ScenarioError> {
    match args.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        _ => Err(field(format!("{path}.args.{key}"), "missing or not a string")),
    }
}

fn arg_usize(args: &serde_json::Map<String, Value>, path: &str, key: &str) -> Result<Option<usize>, ScenarioError> {
    match args.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .map(Some)
            .ok_or_else(|| field(format!("{path}.args.{key}"), "expected a non-negative integer")),
    }
}

fn arg_bool(args: &serde_json::Map<String, Value>, path: &str, key: &str) -> Result<bool, ScenarioError> {
    args.get(key)
        .and_then(Value::as_bool)
        .ok_or_else(|| field(format!("{path}.args.{key}"), "expected a boolean"))
}

fn parse_expectation(sc: &Scenario, ctx: &Ctx, path: &str, spec: &ExpectSpec) -> Result<Expectation, ScenarioError> {
    let args = &spec.args;
    let family = |key: &str| -> Result<String, ScenarioError> {
        let f = arg_str(args, path, key)?;
        if !sc.families.contains_key(&f) {
            return Err(field(format!("{path}.args.{key}"), format!("unknown family {f:?}")));
        }
        Ok(f)
    };
    let flag = || -> Result<String, ScenarioError> {
        let f = arg_str(args, path, "flag")?;
        if !sc.flags.contains_key(&f) {
            return Err(field(format!("{path}.args.flag"), format!("unknown flag {f:?}")));
        }
        Ok(f)
    };
    let threefold = || -> Result<String, ScenarioError> {
        let t = arg_str(args, path, "threefold")?;
        if !sc.threefolds.contains_key(&t) {
            return Err(field(format!("{path}.args.threefold"), format!("unknown threefold {t:?}")));
        }
        Ok(t)
    };
    let constant = |key: &str| -> Result<Rational, ScenarioError> {
        ctx.constant(&format!("{path}.args.{key}"), &arg_str(args, path, key)?)
    };
    let piece_of = |fam: &str, p: Option<usize>| -> Result<Option<usize>, ScenarioError> {
        if let Some(k) = p {
            if k >= sc.families[fam].pieces.len() {
                return Err(field(format!("{path}.args.piece"), "piece index out of range"));
            }
        }
        Ok(p)
    };
    let quantity = match spec.op.as_str() {
        "s_threefold" => Quantity::SThreefold { threefold: threefold()? },
        "beta_lower_bound" => Quantity::BetaLowerBound { threefold: threefold()?, a: constant("A")? },
        "beta" => Quantity::Beta {
            a: constant("A")?,
            s: args.contains_key("S").then(|| constant("S")).transpose()?,
            threefold: args.contains_key("threefold").then(threefold).transpose()?,
        },
        "s_curve" => Quantity::SCurve { family: family("family")? },
        "curve_first_term" | "curve_double_integral" => {
            let f = family("family")?;
            let piece = piece_of(&f, arg_usize(args, path, "piece")?)?;
            if spec.op == "curve_first_term" {
                Quantity::CurveFirstTerm { family: f, piece }
            } else {
                Quantity::CurveDoubleIntegral { family: f, piece }
            }
        }
        "curve_ratio" => Quantity::CurveRatio { family: family("family")?, a: constant("A")? },
        "point_base" => Quantity::PointBase { family: family("family")? },
        "f_term" => Quantity::FTerm { flag: flag()? },
        "s_point" => Quantity::SPoint { flag: flag()? },
        "point_ratio" => Quantity::PointRatio { flag: flag()? },
        "threshold" | "chamber_supports" => {
            let f = family("family")?;
            let piece = piece_of(&f, Some(arg_usize(args, path, "piece")?.unwrap_or(0)))?.unwrap_or(0);
            if spec.op == "threshold" {
                Quantity::Threshold { family: f, piece }
            } else {
                Quantity::ChamberSupports { family: f, piece }
            }
        }
        "chamber_count" => {
            let f = family("family")?;
            let piece = piece_of(&f, arg_usize(args, path, "piece")?)?;
            Quantity::ChamberCount { family: f, piece }
        }
        "delta_min" => {
            let terms = args
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| field(format!("{path}.args.terms"), "expected an array of pairs"))?;
            let mut out = Vec::new();
            for (k, t) in terms.iter().enumerate() {
                let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| field(format!("{path}.args.terms[{k}]"), "expected a pair"))?;
                let get = |x: &Value, j: usize| -> Result<Rational, ScenarioError> {
                    let s = x.as_str().ok_or_else(|| field(format!("{path}.args.terms[{k}][{j}]"), "expected a string"))?;
                    ctx.constant(&format!("{path}.args.terms[{k}][{j}]"), s)
                };
                out.push((get(&pair[0], 0)?, get(&pair[1], 1)?));
            }
            Quantity::DeltaMin { terms: out }
        }
        "fiber_delta_bound" => {
            let d = constant("d")?;
            if !d.is_integer() {
                return Err(field(format!("{path}.args.d"), "expected an integer"));
            }
            Quantity::FiberDeltaBound {
                d: d.to_integer().to_i64().unwrap_or(0),
                delta: constant("delta")?,
                on_e: arg_bool(args, path, "on_E")?,
            }
        }
        "quartic_fiber_bound" => Quantity::QuarticFiberBound {
            delta: constant("delta")?,
            singular: arg_bool(args, path, "singular")?,
        },
        "series_term" => {
            let kind = arg_str(args, path, "kind")?;
            if !["S", "F", "M1", "M2"].contains(&kind.as_str()) {
                return Err(field(format!("{path}.args.kind"), "expected S, F, M1 or M2"));
            }
            let n = arg_usize(args, path, "n")?.ok_or_else(|| field(format!("{path}.args.n"), "missing"))?;
            let i = arg_usize(args, path, "i")?.ok_or_else(|| field(format!("{path}.args.i"), "missing"))?;
            if !(1..=4).contains(&i) {
                return Err(field(format!("{path}.args.i"), "expected 1..4"));
            }
            Quantity::SeriesTerm { kind, n, i }
        }
        "series_threshold" => {
            let n = arg_usize(args, path, "n")?.ok_or_else(|| field(format!("{path}.args.n"), "missing"))?;
            let i = arg_usize(args, path, "i")?.ok_or_else(|| field(format!("{path}.args.i"), "missing"))?;
            if !(1..=4).contains(&i) {
                return Err(field(format!("{path}.args.i"), "expected 1..4"));
            }
            Quantity::SeriesThreshold { n, i }
        }
        "series_s_partial" | "series_f_partial" => {
            let max_n = arg_usize(args, path, "max_n")?.ok_or_else(|| field(format!("{path}.args.max_n"), "missing"))?;
            if spec.op == "series_s_partial" {
                Quantity::SeriesSPartial { max_n }
            } else {
                Quantity::SeriesFPartial { max_n }
            }
        }
        other => return Err(field(format!("{path}.op"), format!("unknown quantity {other:?}"))),
    };
    let vpath = format!("{path}.value");
    let expected = match (&quantity, &spec.value) {
        (Quantity::Threshold { .. } | Quantity::SeriesThreshold { .. }, Value::String(s)) => Expected::Affine(ctx.affine_u(&vpath, s)?),
        (Quantity::QuarticFiberBound { .. }, Value::String(s)) => {
            if s != "positive" && s != "inconclusive" {
                return Err(field(vpath, "expected \"positive\" or \"inconclusive\""));
            }
            Expected::Text(s.clone())
        }
        (Quantity::ChamberSupports { .. }, Value::Array(rows)) => {
            let lat = sc.lattice.as_ref().expect("families imply a lattice");
            let mut out = Vec::new();
            for row in rows {
                let names: Vec<String> = row
                    .as_array()
                    .ok_or_else(|| field(&vpath, "expected an array of name arrays"))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string))
                    .collect::<Option<_>>()
                    .ok_or_else(|| field(&vpath, "curve names must be strings"))?;
                for n in &names {
                    lat.curve_index(n).map_err(|e| field(&vpath, e.to_string()))?;
                }
                out.push(names);
            }
            Expected::Supports(out)
        }
        (_, Value::String(s)) => Expected::Value(ctx.constant(&vpath, s)?),
        (_, Value::Number(n)) => Expected::Value(ctx.constant(&vpath, &n.to_string())?),
        _ => return Err(field(vpath, "unsupported value for this quantity")),
    };
    let relation = match spec.relation.as_deref() {
        None | Some("eq") => Relation::Eq,
        Some("le") => Relation::Le,
        Some("lt") => Relation::Lt,
        Some("ge") => Relation::Ge,
        Some("gt") => Relation::Gt,
        Some("approx") => {
            let tol = spec.tol.as_ref().ok_or_else(|| field(format!("{path}.tol"), "approx needs tol"))?;
            Relation::Approx(ctx.constant(&format!("{path}.tol"), tol)?)
        }
        Some(other) => return Err(field(format!("{path}.relation"), format!("unknown relation {other:?}"))),
    };
    if spec.tol.is_some() && !matches!(relation, Relation::Approx(_)) {
        return Err(field(format!("{path}.tol"), "tol only applies to approx"));
    }
    if !matches!(expected, Expected::Value(_)) && relation != Relation::Eq {
        return Err(field(format!("{path}.relation"), "only eq applies to non-numeric values"));
    }
    Ok(Expectation { op: spec.op.clone(), args: spec.args.clone(), quantity, expected, relation })
}
