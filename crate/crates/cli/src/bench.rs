//! Benchmark suites comparing the engines and reproducing the growth
//! examples. Rows are ordered by (size, seed).

use std::time::Instant;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use polgame::connectives::expand_with;
use polgame::dp::{eval_dp, DpOptions};
use polgame::game::{measure, random_game};
use polgame::generate::{branching_game, chain_game, random_formula, FormulaParams};
use polgame::linear::linear_eval;
use polgame::naive::{eval_cost, Mode};
use polgame::{parse_formula, Error, Formula, Limits, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Naive, DP and linear engines on growing exponential formulas.
    Engines,
    /// Uniform sizes of `par(A_2n, A_2m)` and `par(L_2n, L_2m)`.
    Growth,
    /// Mean visits of full and short-circuit naive evaluation.
    Shortcircuit,
}

pub struct Report {
    pub rows: Vec<Value>,
    pub table: Vec<String>,
    pub summary: Value,
}

pub fn run(suite: Suite, seed: u64, sizes: &[usize], limits: Limits) -> Result<Report> {
    match suite {
        Suite::Engines => engines(seed, or_default(sizes, &[2, 4, 6, 8]), limits),
        Suite::Growth => growth(or_default(sizes, &[1, 2, 3, 4]), limits),
        Suite::Shortcircuit => shortcircuit(seed, or_default(sizes, &[2, 4, 6, 8])),
    }
}

fn or_default<'a>(sizes: &'a [usize], default: &'a [usize]) -> &'a [usize] {
    if sizes.is_empty() {
        default
    } else {
        sizes
    }
}

#[derive(Serialize)]
struct EngineRow {
    size: usize,
    seed: u64,
    instance: String,
    engine: &'static str,
    time_ms: f64,
    ops: Option<u64>,
    verdict: Option<bool>,
    status: String,
}

fn status_of(e: &Error) -> String {
    match e {
        Error::BudgetExceeded { .. } => "budget".into(),
        Error::Timeout { .. } => "timeout".into(),
        other => format!("error: {other}"),
    }
}

fn time_engine(
    size: usize,
    seed: u64,
    f: &Formula,
    engine: &'static str,
    limits: Limits,
) -> EngineRow {
    let start = Instant::now();
    let outcome: polgame::Result<(bool, u64)> = match engine {
        "naive" => expand_with(f, limits).map(|t| {
            let c = eval_cost(&t, Mode::Full);
            (c.verdict, c.visits)
        }),
        "dp" => eval_dp(
            f,
            &DpOptions {
                limits,
                ..DpOptions::default()
            },
        )
        .map(|r| (r.verdict, r.counter.binary_ops)),
        _ => {
            let r = linear_eval(f);
            Ok((r.verdict, r.visits))
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let (verdict, ops, status) = match outcome {
        Ok((v, ops)) => (Some(v), Some(ops), "ok".to_string()),
        Err(e) => (None, None, status_of(&e)),
    };
    EngineRow {
        size,
        seed,
        instance: f.to_string(),
        engine,
        time_ms,
        ops,
        verdict,
        status,
    }
}

fn engines(seed: u64, sizes: &[usize], limits: Limits) -> Result<Report> {
    let mut rows = Vec::new();
    for &n in sizes {
        let bang = parse_formula(&format!("bang(({n}:{{2:()}}))"))?;
        let params = FormulaParams {
            max_depth: n.clamp(1, 6),
            ..FormulaParams::mixed()
        };
        let random = random_formula(&params, seed.wrapping_add(n as u64));
        for f in [bang, random] {
            for engine in ["naive", "dp", "linear"] {
                rows.push(time_engine(n, seed, &f, engine, limits));
            }
        }
    }
    let mut agree = true;
    let mut naive_failures = 0;
    for chunk in rows.chunks(3) {
        if let (Some(d), Some(l)) = (chunk[1].verdict, chunk[2].verdict) {
            agree &= d == l;
        }
        if let (Some(nv), Some(l)) = (chunk[0].verdict, chunk[2].verdict) {
            agree &= nv == l;
        }
        naive_failures += usize::from(chunk[0].status != "ok");
    }
    let table = std::iter::once(format!(
        "{:>4}  {:<7} {:>10}  {:>12}  {:<7} {:<8} instance",
        "size", "engine", "time_ms", "ops", "verdict", "status"
    ))
    .chain(rows.iter().map(|r| {
        format!(
            "{:>4}  {:<7} {:>10.3}  {:>12}  {:<7} {:<8} {}",
            r.size,
            r.engine,
            r.time_ms,
            r.ops.map_or("-".into(), |o| o.to_string()),
            r.verdict.map_or("-".into(), |v| v.to_string()),
            r.status,
            r.instance
        )
    }))
    .collect();
    Ok(Report {
        rows: rows.iter().map(|r| json!(r)).collect(),
        table,
        summary: json!({ "engines_agree": agree, "naive_over_limits": naive_failures }),
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn growth(sizes: &[usize], limits: Limits) -> Result<Report> {
    let mut rows = Vec::new();
    let mut table = vec![format!(
        "{:<18} {:>3} {:>3} {:>8} {:>8}  reference",
        "instance", "n", "m", "leaves", "usize"
    )];
    for &n in sizes {
        for &m in sizes {
            for (family, a, b) in [
                ("A", branching_game(2 * n), branching_game(2 * m)),
                ("L", chain_game(2 * n), chain_game(2 * m)),
            ] {
                let f = Formula::par(a.to_formula(), b.to_formula())?;
                let name = format!("par({family}_{}, {family}_{})", 2 * n, 2 * m);
                let (leaves, usize_) = match expand_with(&f, limits) {
                    Ok(t) => {
                        let r = measure(&t);
                        (Some(r.leaves), Some(r.uniform_size))
                    }
                    Err(_) => (None, None),
                };
                let (ref_name, reference) = if family == "A" {
                    (
                        "bound 2^(2n+2m)",
                        BigUint::from(2u8).pow((2 * n + 2 * m) as u32),
                    )
                } else {
                    (
                        "C(n+m,n)",
                        BigUint::from(binomial((n + m) as u64, n as u64)),
                    )
                };
                table.push(format!(
                    "{name:<18} {n:>3} {m:>3} {:>8} {:>8}  {ref_name} = {reference}",
                    leaves.map_or("-".into(), |v| v.to_string()),
                    usize_.map_or("-".into(), |v| v.to_string()),
                ));
                rows.push(json!({
                    "size": n + m, "n": n, "m": m, "instance": name,
                    "leaves": leaves, "usize": usize_, ref_name: reference.to_string(),
                }));
            }
        }
    }
    Ok(Report {
        rows,
        table,
        summary: json!({ "instances": sizes.len() * sizes.len() * 2 }),
    })
}

fn shortcircuit(seed: u64, depths: &[usize]) -> Result<Report> {
    const SEEDS: u64 = 1000;
    let mut rows = Vec::new();
    let mut table = vec![format!(
        "{:>5} {:>12} {:>14}",
        "depth", "mean full", "mean shortcut"
    )];
    for &d in depths {
        let (mut full, mut short) = (0u64, 0u64);
        for s in seed..seed + SEEDS {
            let g = random_game(d, 3, Polarity::Opponent, s);
            full += eval_cost(&g, Mode::Full).visits;
            short += eval_cost(&g, Mode::ShortCircuit).visits;
        }
        let (mf, ms) = (full as f64 / SEEDS as f64, short as f64 / SEEDS as f64);
        table.push(format!("{d:>5} {mf:>12.2} {ms:>14.2}"));
        rows.push(json!({ "size": d, "seed": seed, "mean_full": mf, "mean_short_circuit": ms }));
    }
    Ok(Report {
        rows,
        table,
        summary: json!({ "seeds_per_depth": SEEDS }),
    })
}
