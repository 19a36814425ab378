use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use teleportrix::measure::shot_seed;
use teleportrix::qcore::haar_qubit;
use teleportrix::swap::{
    swap_probability_three_outcomes, swap_probability_three_outcomes_expanded,
    swap_probability_two_outcomes,
};
use teleportrix::teleport::{
    binomial_standard_error, derive_transfer_matrices, faithful_weight, repetition_summary,
    success_probability_analytic, OneOutcomeChoice, TwoOutcomeChoice,
};
use teleportrix::{
    basis_entropy, classify, correction_unitary, parse_complex, run, swap_run, BasisLabel, Complex,
    Mat2, Mode, ProtocolParams, RunReport, SwapParams,
};

use crate::args::{
    ClassifyArgs, Common, Format, ModeArg, SwapArgs, SwapChoiceArg, SweepArgs, SweepRegime,
    TeleportArgs,
};
use crate::report::{self, complex, object, render_json, repetitions, Cell, Table};
use crate::Failure;

/// Upper bound on grid points and random inputs.
const MAX_POINTS: usize = 1_000_000;

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

fn parse(name: &str, text: &str) -> Result<Complex, Failure> {
    parse_complex(text).map_err(|e| Failure::Numeric(format!("--{name}: {e}")))
}

pub fn digits(common: &Common) -> Result<usize, Failure> {
    let p = common.precision;
    if !(report::MIN_PRECISION..=report::MAX_PRECISION).contains(&p) {
        return Err(Failure::Numeric(format!(
            "--precision must be in [{}, {}], got {p}",
            report::MIN_PRECISION,
            report::MAX_PRECISION
        )));
    }
    Ok(p as usize)
}

fn matrix(m: &Mat2) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect()))
            .collect(),
    )
}

fn labels(ls: &[BasisLabel]) -> Value {
    json!(ls.iter().map(|l| l.as_str()).collect::<Vec<_>>())
}

fn teleport_params(n: Complex, ell: Complex, p: Complex) -> Value {
    object(vec![
        ("n", complex(n)),
        ("l", complex(ell)),
        ("p", complex(p)),
    ])
}

fn teleport_analytic(params: ProtocolParams) -> Result<Value, Failure> {
    let n = params.n;
    let regime = classify(params).map_err(numeric)?;
    let reps = repetition_summary(n);
    Ok(object(vec![
        ("success_probability", json!(regime.success_probability)),
        (
            "expected_repetitions",
            repetitions(regime.expected_repetitions),
        ),
        ("faithful_outcomes", labels(&regime.faithful_outcomes)),
        (
            "faithful_probabilities",
            json!(regime.faithful_probabilities),
        ),
        (
            "success_probability_k1",
            json!(success_probability_analytic(n, 1)),
        ),
        (
            "success_probability_k2",
            json!(success_probability_analytic(n, 2)),
        ),
        ("repetitions_formula", repetitions(reps.formula)),
        (
            "repetitions_inverse_success",
            repetitions(reps.inverse_success),
        ),
        ("resource_entropy", json!(basis_entropy(n))),
        ("classical_bits_per_attempt", json!(2)),
    ]))
}

fn channels(params: ProtocolParams) -> Result<Value, Failure> {
    let matrices = derive_transfer_matrices(params).map_err(numeric)?;
    let mut out = Vec::with_capacity(4);
    for m in &matrices {
        let weight = faithful_weight(&m.entries);
        let correction = correction_unitary(m).ok();
        out.push(object(vec![
            ("label", json!(m.label.as_str())),
            ("faithful", json!(weight.is_some())),
            ("weight", json!(weight)),
            ("transfer", matrix(&m.entries)),
            (
                "correction",
                correction.as_ref().map_or(Value::Null, matrix),
            ),
        ]));
    }
    Ok(Value::Array(out))
}

fn read_params(n: &str, ell: &str, p: &str) -> Result<ProtocolParams, Failure> {
    let params = ProtocolParams::new(parse("n", n)?, parse("l", ell)?, parse("p", p)?);
    params.validate().map_err(numeric)?;
    Ok(params)
}

fn inputs(args: &TeleportArgs) -> Result<Vec<(Complex, Complex)>, Failure> {
    match (&args.alpha, &args.beta, args.random_input) {
        (Some(a), Some(b), None) => Ok(vec![(parse("alpha", a)?, parse("beta", b)?)]),
        (None, None, Some(k)) => {
            if k == 0 || k > MAX_POINTS {
                return Err(Failure::Numeric(format!(
                    "--random-input must be in [1, {MAX_POINTS}], got {k}"
                )));
            }
            // stream 1 keeps input draws apart from the sampling streams
            let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
            rng.set_stream(1);
            Ok((0..k).map(|_| haar_qubit(&mut rng)).collect())
        }
        _ => Err(Failure::Usage(
            "give either --alpha and --beta, or --random-input".into(),
        )),
    }
}

/// Shots for input `i` of `k` when `total` are split as evenly as possible.
fn share(total: usize, k: usize, i: usize) -> usize {
    total / k + usize::from(i < total % k)
}

pub fn teleport(args: &TeleportArgs) -> Result<String, Failure> {
    let digits = digits(&args.common)?;
    let params = read_params(&args.n, &args.ell, &args.p)?;
    let sampled = args.mode == ModeArg::Sampled;
    if sampled && args.shots == 0 {
        return Err(Failure::Numeric("--shots must be at least 1".into()));
    }
    let inputs = inputs(args)?;
    let seed = args.common.seed;

    let mut reports: Vec<RunReport> = Vec::with_capacity(inputs.len());
    for (i, &input) in inputs.iter().enumerate() {
        let shots = share(args.shots, inputs.len(), i);
        let mode = if sampled && shots > 0 {
            Mode::Sampled {
                shots,
                seed: shot_seed(seed, i as u64),
            }
        } else {
            Mode::Exhaustive
        };
        reports.push(run(input, params, mode).map_err(numeric)?);
    }
    let regime = reports[0].regime.clone();

    if args.common.output == Format::Csv {
        let mut t = Table::new(
            &[
                "input",
                "alpha_re",
                "alpha_im",
                "beta_re",
                "beta_im",
                "label",
                "probability",
                "faithful",
                "fidelity",
                "count",
            ],
            digits,
        );
        for (i, r) in reports.iter().enumerate() {
            for rec in &r.records {
                let count = r.sampled.as_ref().map_or(Cell::Empty, |s| {
                    Cell::Int(s.counts[rec.label.index()] as u64)
                });
                t.push(vec![
                    Cell::Int(i as u64),
                    Cell::Num(r.input.0.re),
                    Cell::Num(r.input.0.im),
                    Cell::Num(r.input.1.re),
                    Cell::Num(r.input.1.im),
                    Cell::Text(rec.label.as_str().into()),
                    Cell::Num(rec.probability),
                    Cell::Bool(rec.faithful),
                    rec.fidelity.map_or(Cell::Empty, Cell::Num),
                    count,
                ]);
            }
        }
        return Ok(t.render());
    }

    let mut outcomes = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        for rec in &r.records {
            outcomes.push(object(vec![
                ("input", json!(i)),
                ("label", json!(rec.label.as_str())),
                ("probability", json!(rec.probability)),
                ("faithful", json!(rec.faithful)),
                ("fidelity", json!(rec.fidelity)),
            ]));
        }
    }
    let input_list: Vec<Value> = inputs
        .iter()
        .map(|&(a, b)| object(vec![("alpha", complex(a)), ("beta", complex(b))]))
        .collect();

    let empirical = if sampled {
        let mut counts = [0usize; 4];
        let mut total = 0usize;
        let mut per_shot = Vec::new();
        for r in &reports {
            if let Some(s) = &r.sampled {
                for (c, x) in counts.iter_mut().zip(s.counts) {
                    *c += x;
                }
                total += s.shots;
                if args.per_shot {
                    per_shot.push(labels(&s.outcomes));
                }
            } else if args.per_shot {
                per_shot.push(json!([]));
            }
        }
        let hits: usize = regime
            .faithful_outcomes
            .iter()
            .map(|l| counts[l.index()])
            .sum();
        let frequency = hits as f64 / total as f64;
        let expected = regime.success_probability;
        let sigma = binomial_standard_error(expected, total);
        let mut fields = vec![
            ("shots", json!(total)),
            (
                "counts",
                object(
                    BasisLabel::ALL
                        .iter()
                        .map(|l| (l.as_str(), json!(counts[l.index()])))
                        .collect(),
                ),
            ),
            ("faithful_hits", json!(hits)),
            ("faithful_frequency", json!(frequency)),
            ("expected", json!(expected)),
            ("standard_error", json!(sigma)),
            (
                "within_3_sigma",
                json!((frequency - expected).abs() <= 3.0 * sigma + 1e-12),
            ),
        ];
        if args.per_shot {
            fields.push(("per_shot", Value::Array(per_shot)));
        }
        object(fields)
    } else {
        Value::Null
    };

    let doc = object(vec![
        ("command", json!("teleport")),
        ("params", teleport_params(params.n, params.ell, params.p)),
        ("seed", json!(seed)),
        (
            "mode",
            json!(if sampled { "sampled" } else { "exhaustive" }),
        ),
        ("regime", json!(regime.regime.to_string())),
        ("faithful_count", json!(regime.regime.faithful_count())),
        ("inputs", Value::Array(input_list)),
        ("outcomes", Value::Array(outcomes)),
        ("channels", channels(params)?),
        ("analytic", teleport_analytic(params)?),
        ("empirical", empirical),
    ]);
    Ok(render_json(doc, digits))
}

pub fn classify_cmd(args: &ClassifyArgs) -> Result<String, Failure> {
    let digits = digits(&args.common)?;
    let params = read_params(&args.n, &args.ell, &args.p)?;
    let regime = classify(params).map_err(numeric)?;
    let matrices = derive_transfer_matrices(params).map_err(numeric)?;

    if args.common.output == Format::Csv {
        let mut t = Table::new(&["label", "faithful", "probability"], digits);
        for m in &matrices {
            let w = faithful_weight(&m.entries);
            t.push(vec![
                Cell::Text(m.label.as_str().into()),
                Cell::Bool(w.is_some()),
                w.map_or(Cell::Empty, Cell::Num),
            ]);
        }
        return Ok(t.render());
    }

    let outcomes: Vec<Value> = matrices
        .iter()
        .map(|m| {
            let w = faithful_weight(&m.entries);
            object(vec![
                ("label", json!(m.label.as_str())),
                ("probability", json!(w)),
                ("faithful", json!(w.is_some())),
            ])
        })
        .collect();
    let doc = object(vec![
        ("command", json!("classify")),
        ("params", teleport_params(params.n, params.ell, params.p)),
        ("seed", json!(args.common.seed)),
        ("regime", json!(regime.regime.to_string())),
        ("faithful_count", json!(regime.regime.faithful_count())),
        ("outcomes", Value::Array(outcomes)),
        ("channels", channels(params)?),
        ("analytic", teleport_analytic(params)?),
        ("empirical", Value::Null),
    ]);
    Ok(render_json(doc, digits))
}

fn swap_params(args: &SwapArgs) -> Result<SwapParams, Failure> {
    let m = parse("m", &args.m)?;
    let n = parse("n", &args.n)?;
    let params = match args.choice {
        SwapChoiceArg::TwoOutcome => {
            if m == Complex::new(0.0, 0.0) || n == Complex::new(0.0, 0.0) {
                return Err(Failure::Numeric(
                    "--choice two-outcome needs m and n non-zero".into(),
                ));
            }
            SwapParams::two_outcome_choice(m, n)
        }
        SwapChoiceArg::Explicit => {
            let (Some(l), Some(p), Some(lp), Some(pp)) =
                (&args.ell, &args.p, &args.ell_prime, &args.p_prime)
            else {
                return Err(Failure::Usage(
                    "--choice explicit needs --l, --p, --lp and --pp".into(),
                ));
            };
            SwapParams {
                m,
                n,
                ell: parse("l", l)?,
                p: parse("p", p)?,
                ell_prime: parse("lp", lp)?,
                p_prime: parse("pp", pp)?,
            }
        }
    };
    params.validate().map_err(numeric)?;
    Ok(params)
}

pub fn swap(args: &SwapArgs) -> Result<String, Failure> {
    let digits = digits(&args.common)?;
    let params = swap_params(args)?;
    let outcomes = swap_run(params).map_err(numeric)?;
    let report = teleportrix::swap::report_from(&params, &outcomes);

    if args.common.output == Format::Csv {
        let mut t = Table::new(
            &["label", "probability", "reliable", "target", "entropy"],
            digits,
        );
        for o in &outcomes {
            t.push(vec![
                Cell::Text(o.label.as_str().into()),
                Cell::Num(o.probability),
                Cell::Bool(o.reliable),
                o.target
                    .map_or(Cell::Empty, |l| Cell::Text(l.as_str().into())),
                o.b2_entropy.map_or(Cell::Empty, Cell::Num),
            ]);
        }
        return Ok(t.render());
    }

    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            object(vec![
                ("label", json!(o.label.as_str())),
                ("probability", json!(o.probability)),
                ("reliable", json!(o.reliable)),
                ("target", json!(o.target.map(|l| l.as_str()))),
                ("entropy", json!(o.b2_entropy)),
                (
                    "coefficients",
                    Value::Array(o.coefficients.iter().map(|&z| complex(z)).collect()),
                ),
            ])
        })
        .collect();
    let SwapParams {
        m,
        n,
        ell,
        p,
        ell_prime,
        p_prime,
    } = params;
    let doc = object(vec![
        ("command", json!("swap")),
        (
            "params",
            object(vec![
                ("m", complex(m)),
                ("n", complex(n)),
                ("l", complex(ell)),
                ("p", complex(p)),
                ("lp", complex(ell_prime)),
                ("pp", complex(p_prime)),
            ]),
        ),
        ("seed", json!(args.common.seed)),
        ("regime", json!(report.regime.to_string())),
        ("reliable_count", json!(report.reliable_outcomes.len())),
        ("outcomes", Value::Array(rows)),
        (
            "analytic",
            object(vec![
                ("success_probability", json!(report.success_probability)),
                ("reliable_outcomes", labels(&report.reliable_outcomes)),
                ("condition_1", json!(report.condition_1)),
                ("condition_2", json!(report.condition_2)),
                (
                    "two_outcome_probability",
                    json!(swap_probability_two_outcomes(m, n)),
                ),
                (
                    "three_outcome_probability",
                    json!(swap_probability_three_outcomes_expanded(n)),
                ),
                (
                    "three_outcome_probability_reduced",
                    json!(swap_probability_three_outcomes(n)),
                ),
                ("entropy_m", json!(basis_entropy(m))),
                ("entropy_n", json!(basis_entropy(n))),
            ]),
        ),
        ("empirical", Value::Null),
    ]);
    Ok(render_json(doc, digits))
}

/// Parse `start:stop:step`; the stop value is included when the last step
/// lands within half a step of it.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Numeric(format!("--n-grid expects start:stop:step, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad());
    };
    let num = |s: &str| -> Result<f64, Failure> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(bad)
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step <= 0.0 || stop < start {
        return Err(Failure::Numeric(format!(
            "--n-grid needs step > 0 and stop >= start, got {text:?}"
        )));
    }
    let span = ((stop - start) / step + 0.5).floor();
    if !span.is_finite() || span >= MAX_POINTS as f64 {
        return Err(Failure::Numeric(format!(
            "--n-grid has too many points: {text:?}"
        )));
    }
    Ok((0..=span as usize)
        .map(|i| start + i as f64 * step)
        .collect())
}

struct SweepRow {
    n: f64,
    p_succ: f64,
    p_analytic: f64,
    repetitions_formula: Option<f64>,
    regime: String,
    k: usize,
    p_all: f64,
}

fn sweep_point(regime: SweepRegime, m: Complex, x: f64) -> teleportrix::Result<SweepRow> {
    let n = Complex::new(x, 0.0);
    let teleport_row = |params: ProtocolParams, designated: &[BasisLabel], k: u32| {
        let report = classify(params)?;
        let p_succ = designated
            .iter()
            .filter_map(|l| {
                let pos = report.faithful_outcomes.iter().position(|f| f == l)?;
                Some(report.faithful_probabilities[pos])
            })
            .sum();
        Ok(SweepRow {
            n: x,
            p_succ,
            p_analytic: success_probability_analytic(n, k),
            repetitions_formula: Some(repetition_summary(n).formula.value()),
            regime: report.regime.to_string(),
            k: report.regime.faithful_count(),
            p_all: report.success_probability,
        })
    };
    let swap_row = |params: SwapParams, designated: &[BasisLabel], analytic: f64| {
        let outcomes = swap_run(params)?;
        let report = teleportrix::swap::report_from(&params, &outcomes);
        let p_succ = outcomes
            .iter()
            .filter(|o| o.reliable && designated.contains(&o.label))
            .map(|o| o.probability)
            .sum();
        Ok(SweepRow {
            n: x,
            p_succ,
            p_analytic: analytic,
            repetitions_formula: None,
            regime: report.regime.to_string(),
            k: report.reliable_outcomes.len(),
            p_all: report.success_probability,
        })
    };
    use BasisLabel::*;
    match regime {
        SweepRegime::Probabilistic2 => {
            let choice = TwoOutcomeChoice::EllNPConj;
            teleport_row(choice.params(n), &choice.faithful(), 2)
        }
        SweepRegime::Probabilistic1 => {
            let choice = OneOutcomeChoice::EllN;
            teleport_row(
                choice.params(n, Complex::new(0.0, 0.0)),
                &[choice.faithful()],
                1,
            )
        }
        SweepRegime::SwapTwo => swap_row(
            SwapParams::two_outcome_choice(m, n),
            &[PhiPlus, PsiPlus],
            swap_probability_two_outcomes(m, n),
        ),
        SweepRegime::SwapThree => swap_row(
            SwapParams::two_outcome_choice(n, n),
            &[PhiPlus, PsiPlus, PsiMinus],
            swap_probability_three_outcomes_expanded(n),
        ),
    }
}

pub fn sweep(args: &SweepArgs) -> Result<String, Failure> {
    let digits = digits(&args.common)?;
    let grid = parse_grid(&args.n_grid)?;
    let m = parse("m", &args.m)?;
    let swaps = matches!(args.regime, SweepRegime::SwapTwo | SweepRegime::SwapThree);
    if swaps && grid.contains(&0.0) {
        return Err(Failure::Numeric("swap sweeps need |n| > 0".into()));
    }
    if args.regime == SweepRegime::SwapTwo && m == Complex::new(0.0, 0.0) {
        return Err(Failure::Numeric("--m must be non-zero".into()));
    }
    // collect() on an indexed parallel iterator keeps grid order
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&x| sweep_point(args.regime, m, x))
        .collect::<teleportrix::Result<_>>()
        .map_err(numeric)?;

    let regime_name = match args.regime {
        SweepRegime::Probabilistic2 => "probabilistic2",
        SweepRegime::Probabilistic1 => "probabilistic1",
        SweepRegime::SwapTwo => "swap-two",
        SweepRegime::SwapThree => "swap-three",
    };

    if args.common.output == Format::Csv {
        let mut t = Table::new(
            &[
                "n",
                "p_succ",
                "p_analytic",
                "repetitions_formula",
                "inverse_p",
                "regime",
                "k",
                "p_all",
            ],
            digits,
        );
        for r in &rows {
            t.push(vec![
                Cell::Num(r.n),
                Cell::Num(r.p_succ),
                Cell::Num(r.p_analytic),
                r.repetitions_formula.map_or(Cell::Empty, Cell::Num),
                Cell::Num(1.0 / r.p_succ),
                Cell::Text(r.regime.clone()),
                Cell::Int(r.k as u64),
                Cell::Num(r.p_all),
            ]);
        }
        return Ok(t.render());
    }

    let points: Vec<Value> = rows
        .iter()
        .map(|r| {
            let inv = 1.0 / r.p_succ;
            object(vec![
                ("n", json!(r.n)),
                ("p_succ", json!(r.p_succ)),
                ("p_analytic", json!(r.p_analytic)),
                (
                    "repetitions_formula",
                    match r.repetitions_formula {
                        Some(v) if v.is_finite() => json!(v),
                        Some(_) => json!("Infinite"),
                        None => Value::Null,
                    },
                ),
                (
                    "inverse_p",
                    if inv.is_finite() {
                        json!(inv)
                    } else {
                        json!("Infinite")
                    },
                ),
                ("regime", json!(r.regime)),
                ("k", json!(r.k)),
                ("p_all", json!(r.p_all)),
            ])
        })
        .collect();
    let mut params = vec![
        ("n_grid", json!(args.n_grid)),
        ("regime", json!(regime_name)),
    ];
    if args.regime == SweepRegime::SwapTwo {
        params.push(("m", complex(m)));
    }
    let doc = object(vec![
        ("command", json!("sweep")),
        ("params", object(params)),
        ("seed", json!(args.common.seed)),
        ("regime", json!(regime_name)),
        ("outcomes", Value::Array(points)),
        ("analytic", Value::Null),
        ("empirical", Value::Null),
    ]);
    Ok(render_json(doc, digits))
}
