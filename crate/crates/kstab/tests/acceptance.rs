//! One PASS/FAIL line per acceptance criterion. Criteria known to be
//! unattainable as worded are reported as FAIL but do not fail the test;
//! every other criterion must pass.

mod common;

use std::io::Write;
use serde_json::{json, Value};

use kstab::exact::{rat, to_f64, Rational};
use kstab::invariants::integrands;
use kstab::scenario::{builtin_corpus, load_scenario_str, run_expectations, Status};
use kstab::series::{self, closed_form, generate_b_classes, series_sum, TermKind};
use kstab::zariski::oracle_check;

use common::{family_cases, quad_interval, quad_polygon, rel_close};

/// Criteria whose literal wording cannot hold; see the decisions ledger.
const HONEST_FAILURES: &[u32] = &[6, 10];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn e(op: &str, args: Value, value: &str) -> Value {
    json!({ "op": op, "args": args, "value": value })
}

/// Runs the given expectations against a shipped scenario file (every
/// instance of it) and returns the failing rows.
fn check(file: &str, expect: Vec<Value>) -> Vec<String> {
    let text = builtin_corpus()
        .iter()
        .find(|(name, _)| *name == file)
        .unwrap_or_else(|| panic!("no built-in scenario file {file}"))
        .1;
    let mut doc: Value = serde_json::from_str(text).unwrap();
    doc["expect"] = Value::Array(expect);
    let scenarios = load_scenario_str(&doc.to_string()).unwrap_or_else(|err| panic!("{file}: {err}"));
    let mut bad = Vec::new();
    for sc in &scenarios {
        for row in run_expectations(sc).rows {
            if row.status != Status::Match {
                bad.push(format!(
                    "{}: {} expected {} computed {}",
                    sc.id,
                    row.op,
                    row.expected,
                    row.computed.as_deref().or(row.message.as_deref()).unwrap_or("-")
                ));
            }
        }
    }
    bad
}

fn exact_group(id: u32, groups: Vec<(&str, Vec<Value>)>) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for (file, expect) in groups {
        n += expect.len();
        bad.extend(check(file, expect));
    }
    let detail = if bad.is_empty() {
        format!("{n} exact values")
    } else {
        format!("{} of {n} exact values; {}", n - bad.len(), bad.join("; "))
    };
    Outcome { id, pass: bad.is_empty(), detail }
}

fn criterion_1() -> Outcome {
    exact_group(
        1,
        vec![
            ("2-1-A", vec![e("s_threefold", json!({"threefold": "A"}), "11/16")]),
            (
                "2-1-P-in-E",
                vec![e("s_curve", json!({"family": "E"}), "11/16"), e("s_point", json!({"flag": "P"}), "5d/16")],
            ),
            (
                "2-1-S",
                vec![
                    e("s_threefold", json!({"threefold": "S"}), "5/16"),
                    e("s_curve", json!({"family": "C"}), "11/16"),
                    e("s_point", json!({"flag": "P"}), "5d/16"),
                ],
            ),
            (
                "2-1-S-reducible",
                vec![
                    e("s_curve", json!({"family": "f"}), "(44+5d)/32"),
                    e("s_point", json!({"flag": "O"}), "5d/32"),
                    e("s_point", json!({"flag": "O-on-Ct"}), "(44+5d)/64"),
                ],
            ),
            (
                "2-1-tower",
                vec![
                    e("s_curve", json!({"family": "F"}), "(66+5d)/16"),
                    e("point_base", json!({"family": "F"}), "5d/96"),
                    e("s_point", json!({"flag": "Q-on-Cs"}), "11/16"),
                ],
            ),
        ],
    )
}

fn criterion_2() -> Outcome {
    exact_group(
        2,
        vec![(
            "2-1-d-2",
            vec![
                e("s_threefold", json!({"threefold": "G"}), "27/8"),
                e("s_curve", json!({"family": "ell"}), "5/16"),
                e("s_point", json!({"flag": "Q"}), "5/32"),
                e("s_curve", json!({"family": "C"}), "11/16"),
                e("s_point", json!({"flag": "Q-on-C"}), "5/8"),
            ],
        )],
    )
}

fn criterion_3() -> Outcome {
    exact_group(
        3,
        vec![(
            "2-1-d-3",
            vec![
                e("s_threefold", json!({"threefold": "G"}), "43/16"),
                e("s_curve", json!({"family": "ell"}), "5/16"),
                e("f_term", json!({"flag": "Q-on-C"}), "7/12"),
                e("s_point", json!({"flag": "Q-on-C"}), "43/48"),
            ],
        )],
    )
}

fn criterion_4() -> Outcome {
    exact_group(
        4,
        vec![
            ("2-5-beta", vec![e("beta_lower_bound", json!({"threefold": "G", "A": "3"}), "465/2048")]),
            (
                "2-5-D-4",
                vec![
                    e("s_curve", json!({"family": "L1"}), "35/48"),
                    e("curve_double_integral", json!({"family": "L1", "piece": 0}), "7/12"),
                    e("curve_double_integral", json!({"family": "L1", "piece": 1}), "7/48"),
                ],
            ),
        ],
    )
}

fn criterion_5() -> Outcome {
    exact_group(
        5,
        vec![
            ("2-2-S", vec![e("s_curve", json!({"family": "C"}), "1/3"), e("s_point", json!({"flag": "P"}), "2/3")]),
            ("2-2-T", vec![e("s_curve", json!({"family": "C"}), "1/3"), e("s_point", json!({"flag": "P"}), "1")]),
            // The V = 12 threefold with S_X(S) = S_X(T) = 5/12.
            ("2-6-smooth", vec![e("s_threefold", json!({"threefold": "S"}), "5/12")]),
        ],
    )
}

fn criterion_6() -> Outcome {
    let mut out = exact_group(
        6,
        vec![
            (
                "2-4-A",
                vec![
                    e("s_threefold", json!({"threefold": "A"}), "67/120"),
                    e("s_curve", json!({"family": "C"}), "13/40"),
                    e("f_term", json!({"flag": "P-in-E"}), "1/120"),
                    e("s_point", json!({"flag": "P-in-E"}), "59/60"),
                ],
            ),
            (
                "2-4-cone",
                vec![
                    e("s_threefold", json!({"threefold": "G"}), "93/40"),
                    e("s_curve", json!({"family": "ell"}), "13/40"),
                    e("f_term", json!({"flag": "Q-on-C"}), "9/20"),
                ],
            ),
            (
                "2-4-nodal",
                vec![
                    e("s_curve", json!({"family": "f"}), "767/480"),
                    e("point_base", json!({"family": "f"}), "147/320"),
                    e("f_term", json!({"flag": "Q"}), "0"),
                    e("f_term", json!({"flag": "Q-on-L"}), "1/960"),
                    e("f_term", json!({"flag": "Q-on-Ct"}), "643/1920"),
                    e("f_term", json!({"flag": "Q-tangent"}), "643/960"),
                    e("s_threefold", json!({"threefold": "S"}), "13/40"),
                ],
            ),
            (
                "2-4-cusp",
                vec![
                    e("s_curve", json!({"family": "f"}), "173/40"),
                    e("point_base", json!({"family": "f"}), "5/32"),
                    e("f_term", json!({"flag": "Q"}), "0"),
                    e("f_term", json!({"flag": "Q-on-L"}), "1/80"),
                    e("f_term", json!({"flag": "Q-on-Ct"}), "193/480"),
                    e("s_point", json!({"flag": "Q"}), "5/32"),
                    // Printed value; its own summands 5/32 + 1/80 give 27/160.
                    e("s_point", json!({"flag": "Q-on-L"}), "27/80"),
                    e("s_point", json!({"flag": "Q-on-Ct"}), "67/120"),
                ],
            ),
        ],
    );
    if !out.pass {
        out.detail.push_str(" (printed 27/80 contradicts 5/32 + 1/80 = 27/160)");
    }
    out
}

fn criterion_7() -> Outcome {
    exact_group(
        7,
        vec![
            (
                "2-6-smooth",
                vec![e("s_curve", json!({"family": "C"}), "13/24"), e("s_point", json!({"flag": "P"}), "1")],
            ),
            ("2-6-weak", vec![e("s_curve", json!({"family": "C"}), "7/12"), e("s_point", json!({"flag": "P"}), "5/6")]),
            (
                "2-6-reducible",
                vec![
                    e("s_curve", json!({"family": "C"}), "3/4"),
                    e("point_base", json!({"family": "C"}), "145/192"),
                    e("f_term", json!({"flag": "P"}), "0"),
                    e("f_term", json!({"flag": "P-on-Cp"}), "31/384"),
                    e("f_term", json!({"flag": "P-tangent"}), "31/192"),
                    e("s_point", json!({"flag": "P"}), "145/192"),
                    e("s_point", json!({"flag": "P-on-Cp"}), "107/128"),
                    e("s_point", json!({"flag": "P-tangent"}), "11/12"),
                ],
            ),
            (
                "2-6-blowup",
                vec![
                    e("s_curve", json!({"family": "E"}), "17/12"),
                    e("point_base", json!({"family": "E"}), "13/24"),
                    e("f_term", json!({"flag": "O"}), "0"),
                    e("f_term", json!({"flag": "O-on-Ct"}), "1/24"),
                    e("f_term", json!({"flag": "O-on-R"}), "7/24"),
                ],
            ),
        ],
    )
}

fn criterion_8() -> Outcome {
    exact_group(
        8,
        vec![
            (
                "2-7-nodal",
                vec![
                    e("s_threefold", json!({"threefold": "S"}), "33/56"),
                    e("s_threefold", json!({"threefold": "T"}), "9/28"),
                    e("s_curve", json!({"family": "e"}), "51/28"),
                    e("s_point", json!({"flag": "O"}), "4/7"),
                    e("s_point", json!({"flag": "O-on-L"}), "17/28"),
                    e("s_point", json!({"flag": "O-on-Ct"}), "4/7 + 17/56"),
                    e("s_point", json!({"flag": "O-tangent"}), "4/7 + 2*17/56"),
                ],
            ),
            (
                "2-7-cusp",
                vec![
                    e("s_curve", json!({"family": "f"}), "135/28"),
                    e("point_base", json!({"family": "f"}), "13/63"),
                    e("s_point", json!({"flag": "O-on-Ct"}), "33/56"),
                    e("s_point", json!({"flag": "O3"}), "3/14"),
                ],
            ),
            (
                "2-7-not-in-E",
                vec![e("s_curve", json!({"family": "L"}), "423/448"), e("s_point", json!({"flag": "P"}), "79/84")],
            ),
            ("2-4-nodal", vec![e("threshold", json!({"family": "f", "piece": 0}), "(19-7u)/6")]),
            ("2-7-series", vec![e("series_threshold", json!({"n": 0, "i": 2}), "(17-15u)/7")]),
        ],
    )
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let fixed = [
        (TermKind::S, 1, rat(84365, 114688)),
        (TermKind::F, 1, rat(281, 32256)),
        (TermKind::F, 2, rat(5, 3584)),
    ];
    for (kind, i, want) in fixed {
        let got = series::series_term(kind, 0, i).unwrap();
        if got != want {
            bad.push(format!("{kind:?}_(0,{i}) = {got}, expected {want}"));
        }
    }
    for n in 1..=3u64 {
        for i in 1..=4 {
            let pairs = [
                ("S", series::series_term(TermKind::S, n, i).unwrap(), closed_form::s_term(n, i)),
                ("F", series::series_term(TermKind::F, n, i).unwrap(), closed_form::f_term(n, i)),
            ];
            for (name, engine, closed) in pairs {
                if engine != closed {
                    bad.push(format!("{name}_({n},{i}): engine {engine} closed form {closed}"));
                }
            }
        }
    }
    let pass = bad.is_empty();
    Outcome { id: 9, pass, detail: if pass { "n = 0 values and 24 closed forms for n = 1..3".into() } else { bad.join("; ") } }
}

fn criteria_10_11() -> (Outcome, Outcome) {
    let report = series_sum(500).unwrap();
    let mut partial = Rational::from_integer(0.into());
    let mut monotone = true;
    let mut at = Vec::new();
    for row in &report.rows {
        let next = &partial + row.s.iter().sum::<Rational>();
        monotone &= next > partial;
        partial = next;
        if [100, 200, 500].contains(&row.n) {
            at.push(to_f64(&partial));
        }
    }
    let s = to_f64(&report.s_partial);
    let in_range = (0.9747..=0.9767).contains(&s);
    let below_limit = 0.976712233 - s > 0.0;
    let c10 = Outcome {
        id: 10,
        pass: in_range && monotone && below_limit,
        detail: format!(
            "S partial(500) = {s:.11}, in [0.9747, 0.9767]: {in_range}, monotone: {monotone}, 0.976712233 - partial > 0: {below_limit} (partials at 100/200/500: {at:.11?})"
        ),
    };
    let f = to_f64(&report.f_partial);
    let c11 = Outcome { id: 11, pass: f < 0.014, detail: format!("F partial(500) = {f:.12}") };
    (c10, c11)
}

fn criterion_12() -> Outcome {
    let mut failures = Vec::new();
    let mut samples = 0;
    for case in family_cases() {
        for (k, piece) in case.res.iter().enumerate() {
            let d = case.fam.divisor(&case.lattice, k);
            let report = oracle_check(&case.lattice, &d, &piece.dec, 100, 0x5eed + k as u64).unwrap();
            samples += report.samples;
            failures.extend(report.failures.into_iter().map(|f| format!("{}/{}: {f}", case.scenario, case.family)));
        }
    }
    let pass = failures.is_empty() && samples > 0;
    Outcome { id: 12, pass, detail: format!("{samples} sampled points, {} disagreements", failures.len()) }
}

fn criterion_13() -> Outcome {
    let mut bad = Vec::new();
    let mut edges = 0;
    for case in family_cases() {
        for piece in &case.res {
            edges += piece.dec.adjacent_pairs();
            for (i, j) in piece.dec.continuity_violations() {
                bad.push(format!("{}/{} chambers {i},{j}", case.scenario, case.family));
            }
        }
    }
    Outcome { id: 13, pass: bad.is_empty(), detail: format!("{edges} shared edges, {} discontinuities", bad.len()) }
}

fn criterion_14() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for n in 0..=50 {
        match generate_b_classes(n) {
            Ok(classes) => count += classes.len(),
            Err(err) => bad.push(err.to_string()),
        }
    }
    Outcome { id: 14, pass: bad.is_empty(), detail: format!("{count} classes for n <= 50, {} rejected", bad.len()) }
}

fn criterion_15() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut bad = Vec::new();
    for case in family_cases() {
        for (p, region) in integrands(&case.lattice, &case.fam, &case.res) {
            let exact = to_f64(&kstab::exact::integrate_polygon(&p, &region));
            let numeric = quad_polygon(&p, &region);
            checked += 1;
            if exact != 0.0 {
                worst = worst.max((exact - numeric).abs() / exact.abs());
            }
            if !rel_close(exact, numeric, 1e-9) {
                bad.push(format!("{}/{}: exact {exact} numeric {numeric}", case.scenario, case.family));
            }
        }
    }
    for sc in common::corpus() {
        for data in sc.threefolds.values() {
            let vols = data.piece_volumes().unwrap();
            for (piece, vol) in data.pieces.iter().zip(&vols) {
                let exact = to_f64(&kstab::exact::integrate_interval(vol, &piece.u0, &piece.u1).unwrap());
                let numeric = quad_interval(vol, to_f64(&piece.u0), to_f64(&piece.u1));
                checked += 1;
                if exact != 0.0 {
                    worst = worst.max((exact - numeric).abs() / exact.abs());
                }
                if !rel_close(exact, numeric, 1e-9) {
                    bad.push(format!("{} volume: exact {exact} numeric {numeric}", sc.id));
                }
            }
        }
    }
    Outcome {
        id: 15,
        pass: bad.is_empty(),
        detail: format!("{checked} integrals, worst relative error {worst:.1e}{}", if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }),
    }
}

#[test]
fn acceptance() {
    let (c10, c11) = criteria_10_11();
    let outcomes = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        c10,
        c11,
        criterion_12(),
        criterion_13(),
        criterion_14(),
        criterion_15(),
    ];
    let mut unexpected = Vec::new();
    // Written to the raw handle so the table shows up without --nocapture.
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        let _ = writeln!(out, "criterion {:>2}: {} {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !HONEST_FAILURES.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
