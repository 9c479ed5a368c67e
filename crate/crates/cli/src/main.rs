mod bench;

use std::io::Read;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use polgame::analytics::{graph_profile, graph_size, tree_profile};
use polgame::connectives::expand_with;
use polgame::dp::{dp_cost_bound, eval_dp, DpOptions};
use polgame::game::{measure, profile, random_game};
use polgame::generate::{random_formula, random_typed_term, FormulaParams, TermParams};
use polgame::graph::build_graph_with;
use polgame::linear::{linear_eval, provable_eval};
use polgame::morphism::{
    hom_formula, normalize_with, parse_typed, rewrite, strategy_to_proof, typecheck_with, Order,
};
use polgame::naive::{count_strategies, eval_cost, extract_strategy, Mode};
use polgame::{parse_formula, parse_sequent, Formula, Limits, Polarity, Sequent};

#[derive(Parser)]
#[command(
    name = "polgame",
    version,
    about = "Workbench for polarized game logic"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Emit one JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Node budget for expansions and graph builds.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_nodes: u64,
    /// Wall-clock limit for budgeted work, in milliseconds (0 disables).
    #[arg(long, global = true, default_value_t = 10_000)]
    timeout_ms: u64,
}

impl Global {
    fn limits(&self) -> Limits {
        let l = Limits::nodes(self.max_nodes);
        if self.timeout_ms == 0 {
            l
        } else {
            l.with_timeout(Duration::from_millis(self.timeout_ms))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Engine {
    Naive,
    Dp,
    Linear,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Dp => "dp",
            Engine::Linear => "linear",
        }
    }
}

#[derive(Args, Clone, Copy)]
struct EngineFlags {
    #[arg(long, value_enum, default_value_t = Engine::Linear)]
    engine: Engine,
    /// Naive engine: stop meets at the first false child, joins at the first true one.
    #[arg(long)]
    short_circuit: bool,
    /// Report operation counts.
    #[arg(long)]
    stats: bool,
    /// DP engine: evaluate shared positions again instead of memoizing.
    #[arg(long)]
    no_memo: bool,
    /// DP engine: only share product positions, not equal subgames.
    #[arg(long)]
    no_global_dedup: bool,
    /// DP engine: expand `bang`/`quest` instead of evaluating through them.
    #[arg(long)]
    expand_exponentials: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Innermost,
    Outermost,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Formula,
    Game,
    Term,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sequent `lhs |-o rhs`, `lhs |- rhs` or `lhs |-p rhs`.
    Prove {
        /// Sequent text, `@file`, or `-` for stdin.
        input: String,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Decide whether a formula has a strategy.
    Eval {
        input: String,
        #[command(flatten)]
        engine: EngineFlags,
        /// Count strategies and leaves of the expansion.
        #[arg(long)]
        count: bool,
        /// Print a strategy when one exists.
        #[arg(long)]
        witness: bool,
    },
    /// Print the expanded game tree.
    Expand { input: String },
    /// Size measures of the expanded tree or of the graph game.
    Size {
        input: String,
        #[arg(long, conflicts_with = "tree")]
        graph: bool,
        #[arg(long)]
        tree: bool,
    },
    /// Per-depth node counts.
    Profile {
        input: String,
        /// Compute from the formula without expanding (the default).
        #[arg(long, conflicts_with = "measured")]
        formula: bool,
        /// Measure the expansion (or the graph with `--graph`).
        #[arg(long)]
        measured: bool,
        /// Profile of the graph game instead of the tree.
        #[arg(long)]
        graph: bool,
    },
    /// Count the strategies of a formula.
    Count { input: String },
    /// Print a proof of a sequent, read back from a strategy of its hom game.
    Extract { input: String },
    /// Cut-eliminate `term :: sequent`.
    Normalize {
        input: String,
        #[arg(long, value_enum, default_value_t = OrderArg::Innermost)]
        order: OrderArg,
    },
    /// Print seeded random instances.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances, from consecutive seeds.
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        branch: usize,
        /// Player-rooted games and formulas.
        #[arg(long)]
        player: bool,
    },
    /// Run a benchmark suite.
    Bench {
        #[arg(value_enum)]
        suite: bench::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated instance sizes; each suite has its own default.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
}

/// Machine-readable result of one command.
#[derive(Serialize)]
struct Record {
    command: &'static str,
    seed: Option<u64>,
    engine: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Value>,
    stats: Value,
}

impl Record {
    fn new(command: &'static str) -> Record {
        Record {
            command,
            seed: None,
            engine: None,
            verdict: None,
            value: None,
            stats: json!({}),
        }
    }
}

/// What a command produced: text lines, the record, and its exit code.
struct Output {
    text: Vec<String>,
    record: Record,
    code: u8,
}

impl Output {
    fn value(record: Record, text: Vec<String>) -> Output {
        Output {
            text,
            record,
            code: 0,
        }
    }

    fn verdict(mut record: Record, verdict: bool, text: Vec<String>) -> Output {
        record.verdict = Some(verdict);
        Output {
            text,
            record,
            code: if verdict { 0 } else { 1 },
        }
    }
}

fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

fn formula(arg: &str) -> Result<Formula> {
    Ok(parse_formula(read_input(arg)?.trim())?)
}

fn sequent(arg: &str) -> Result<Sequent> {
    Ok(parse_sequent(read_input(arg)?.trim())?)
}

fn stats_lines(stats: &Value) -> Vec<String> {
    match stats {
        Value::Object(m) => m.iter().map(|(k, v)| format!("  {k}: {v}")).collect(),
        _ => Vec::new(),
    }
}

/// Runs an engine on a formula; returns the verdict and engine statistics.
fn decide(f: &Formula, flags: &EngineFlags, g: &Global) -> Result<(bool, Value)> {
    Ok(match flags.engine {
        Engine::Linear => {
            let r = linear_eval(f);
            (
                r.verdict,
                json!({ "visits": r.visits, "ast_size": f.size() }),
            )
        }
        Engine::Dp => {
            let opts = DpOptions {
                memo: !flags.no_memo,
                global_dedup: !flags.no_global_dedup,
                expand_exponentials: flags.expand_exponentials,
                limits: g.limits(),
            };
            let r = eval_dp(f, &opts)?;
            let bound = if f.is_multiplicative() {
                json!(dp_cost_bound(f)?.to_string())
            } else {
                Value::Null
            };
            (
                r.verdict,
                json!({
                    "verdict": r.verdict,
                    "binary_ops": r.counter.binary_ops,
                    "memo_hits": r.counter.memo_hits,
                    "memo_entries": r.counter.memo_entries,
                    "graph_nodes": r.graph_nodes,
                    "bound": bound,
                }),
            )
        }
        Engine::Naive => {
            let t = expand_with(f, g.limits())?;
            let mode = if flags.short_circuit {
                Mode::ShortCircuit
            } else {
                Mode::Full
            };
            let c = eval_cost(&t, mode);
            let m = measure(&t);
            (
                c.verdict,
                json!({ "visits": c.visits, "mode": mode, "nodes": m.nodes, "leaves": m.leaves }),
            )
        }
    })
}

fn big(n: &num_bigint::BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Prove { input, engine } => {
            let s = sequent(input)?;
            let mut rec = Record::new("prove");
            rec.engine = Some(engine.engine.name());
            let verdict = match engine.engine {
                Engine::Linear => {
                    let r = provable_eval(&s);
                    rec.stats = json!({ "visits": r.visits });
                    r.verdict
                }
                _ => {
                    let (v, stats) = decide(&hom_formula(&s)?, engine, g)?;
                    rec.stats = stats;
                    v
                }
            };
            let mut text = vec![if verdict { "provable" } else { "not provable" }.to_string()];
            if engine.stats {
                text.extend(stats_lines(&rec.stats));
            }
            Output::verdict(rec, verdict, text)
        }
        Command::Eval {
            input,
            engine,
            count,
            witness,
        } => {
            let f = formula(input)?;
            let mut rec = Record::new("eval");
            rec.engine = Some(engine.engine.name());
            let (verdict, mut stats) = decide(&f, engine, g)?;
            let mut text = vec![verdict.to_string()];
            if *count || *witness {
                let t = expand_with(&f, g.limits())?;
                if *count {
                    stats["strategies"] = big(&count_strategies(&t));
                    stats["leaves"] = json!(t.leaf_count());
                }
                if *witness {
                    let w = extract_strategy(&t);
                    if let Some(w) = &w {
                        text.push(format!("witness: {w}"));
                    }
                    rec.value = Some(json!({ "witness": w.map(|w| w.to_string()) }));
                }
            }
            rec.stats = stats;
            if engine.stats || *count {
                text.extend(stats_lines(&rec.stats));
            }
            Output::verdict(rec, verdict, text)
        }
        Command::Expand { input } => {
            let t = expand_with(&formula(input)?, g.limits())?;
            let mut rec = Record::new("expand");
            rec.value = Some(json!(t.to_string()));
            rec.stats = serde_json::to_value(measure(&t))?;
            Output::value(rec, vec![t.to_string()])
        }
        Command::Size { input, graph, .. } => {
            let f = formula(input)?;
            let mut rec = Record::new("size");
            if *graph {
                let analytic = graph_size(&f)?;
                let measured = build_graph_with(&f, false, g.limits())?.size();
                rec.value = Some(serde_json::to_value(&analytic)?);
                rec.stats = json!({ "kind": "graph", "measured": measured });
            } else {
                let report = measure(&expand_with(&f, g.limits())?);
                rec.value = Some(serde_json::to_value(report)?);
                rec.stats = json!({ "kind": "tree" });
            }
            let text = stats_lines(rec.value.as_ref().expect("set above"))
                .into_iter()
                .map(|l| l.trim_start().to_string())
                .collect();
            Output::value(rec, text)
        }
        Command::Profile {
            input,
            measured,
            graph,
            ..
        } => {
            let f = formula(input)?;
            let p = match (*measured, *graph) {
                (false, false) => tree_profile(&f)?,
                (false, true) => graph_profile(&f)?,
                (true, false) => profile(&expand_with(&f, g.limits())?),
                (true, true) => build_graph_with(&f, false, g.limits())?.profile(),
            };
            let mut rec = Record::new("profile");
            rec.value = Some(serde_json::to_value(&p)?);
            rec.stats = json!({
                "source": if *measured { "measured" } else { "formula" },
                "structure": if *graph { "graph" } else { "tree" },
            });
            Output::value(rec, vec![p.to_string()])
        }
        Command::Count { input } => {
            let t = expand_with(&formula(input)?, g.limits())?;
            let n = count_strategies(&t);
            let mut rec = Record::new("count");
            rec.value = Some(big(&n));
            rec.stats = json!({ "nodes": t.node_count(), "leaves": t.leaf_count() });
            Output::value(rec, vec![n.to_string()])
        }
        Command::Extract { input } => {
            let s = sequent(input)?;
            let hom = expand_with(&hom_formula(&s)?, g.limits())?;
            let mut rec = Record::new("extract");
            rec.engine = Some("naive");
            rec.stats = json!({ "hom_nodes": hom.node_count() });
            match extract_strategy(&hom) {
                None => Output::verdict(rec, false, vec!["not provable".into()]),
                Some(st) => {
                    let proof = strategy_to_proof(&st, &s, g.limits())?;
                    rec.value = Some(
                        json!({ "proof": proof.term.to_string(), "strategy": st.to_string() }),
                    );
                    Output::verdict(rec, true, vec![proof.term.to_string()])
                }
            }
        }
        Command::Normalize { input, order } => {
            let (term, s) = parse_typed(read_input(input)?.trim())?;
            let typed = typecheck_with(&term, &s, g.limits())?;
            let order = match order {
                OrderArg::Innermost => Order::InnermostLeftmost,
                OrderArg::Outermost => Order::OutermostLeftmost,
            };
            let budget = polgame::morphism::normalize::DEFAULT_STEP_BUDGET;
            let (_, steps) = rewrite(&typed.term, order, budget)?;
            let nf = normalize_with(&typed, order, budget)?;
            let mut rec = Record::new("normalize");
            rec.value = Some(json!(nf.to_string()));
            rec.stats =
                json!({ "steps": steps, "input_size": term.size(), "output_size": nf.size() });
            Output::value(rec, vec![nf.to_string()])
        }
        Command::Random {
            kind,
            seed,
            n,
            depth,
            branch,
            player,
        } => {
            let pol = if *player {
                Polarity::Player
            } else {
                Polarity::Opponent
            };
            let mut items = Vec::new();
            for s in *seed..seed.saturating_add(*n) {
                items.push(match kind {
                    RandomKind::Game => random_game(*depth, *branch, pol, s).to_string(),
                    RandomKind::Formula => {
                        let params = FormulaParams {
                            max_depth: *depth,
                            max_branch: *branch,
                            ..FormulaParams::mixed()
                        };
                        random_formula(&params.with_polarity(pol), s).to_string()
                    }
                    RandomKind::Term => {
                        let params = TermParams {
                            game_depth: *depth,
                            max_branch: *branch,
                            ..TermParams::default()
                        };
                        let t = random_typed_term(&params, s);
                        format!("{} :: {}", t.term, t.sequent)
                    }
                });
            }
            let mut rec = Record::new("random");
            rec.seed = Some(*seed);
            rec.value = Some(json!(items));
            rec.stats = json!({ "count": n, "depth": depth, "branch": branch });
            Output::value(rec, items)
        }
        Command::Bench { suite, seed, sizes } => {
            let report = bench::run(*suite, *seed, sizes, g.limits())?;
            let mut rec = Record::new("bench");
            rec.seed = Some(*seed);
            rec.value = Some(json!({ "suite": suite, "rows": report.rows }));
            rec.stats = report.summary.clone();
            let mut text = report.table;
            text.extend(stats_lines(&report.summary));
            Output::value(rec, text)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.global.json {
                match serde_json::to_string(&out.record) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                for line in &out.text {
                    println!("{line}");
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
