//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use polgame::analytics::{edge_bound_from_profile, graph_size, profile_oxr, profile_tensor};
use polgame::connectives::expand;
use polgame::dp::{eval_dp, par_ops_bound, DpOptions};
use polgame::game::{measure, profile, random_game, GameTree};
use polgame::generate::{
    branching_game, chain_game, random_formula, random_typed_term, random_typed_triple,
    FormulaParams, TermParams,
};
use polgame::graph::build_graph;
use polgame::linear::{linear_eval, linear_value};
use polgame::morphism::{
    enumerate_normal_proofs, hom_formula, normalize, normalize_with, parse_term, typecheck,
    typecheck_trees, Order, Term, TypedTerm,
};
use polgame::naive::{count_strategies, has_strategy};
use polgame::{
    parse_formula, parse_sequent, Error, Formula, Polarity, Profile, Sequent, SequentKind,
};

type Outcome = Result<String, String>;

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn golden_profile() -> Outcome {
    let start = Instant::now();
    let f = parse_formula("oxr((2:{2:()}), {1:(),1:(2:{})})").map_err(|e| e.to_string())?;
    let measured = profile(&expand(&f, 10_000).map_err(|e| e.to_string())?);
    let analytic = profile_oxr(
        &Profile::from_u64s(&[1, 2, 4]),
        &Profile::from_u64s(&[1, 2, 2]),
    );
    let took = start.elapsed();
    let golden = Profile::from_u64s(&[1, 2, 6, 8, 8]);
    if measured != golden || analytic != golden {
        return Err(format!(
            "measured {measured}, analytic {analytic}, expected {golden}"
        ));
    }
    within(start, Duration::from_millis(1), "golden profile")?;
    Ok(format!("measured = analytic = {golden} in {took:?}"))
}

fn profile_proposition() -> Outcome {
    let start = Instant::now();
    let (mut checked, mut skipped, mut seed) = (0, 0, 0u64);
    while checked < 500 {
        seed += 1;
        let (d1, d2) = (1 + (seed % 5) as usize, 1 + (seed / 5 % 5) as usize);
        let o = random_game(d1, 3, Polarity::Opponent, seed);
        let o2 = random_game(d2, 3, Polarity::Opponent, seed ^ 0x5eed);
        let p = random_game(d2, 3, Polarity::Player, seed ^ 0xbeef);
        let tensor = Formula::tensor(o.to_formula(), o2.to_formula()).expect("opponent operands");
        let oxr = Formula::oxr(o.to_formula(), p.to_formula()).expect("opponent, player operands");
        let (Ok(t), Ok(x)) = (expand(&tensor, 500_000), expand(&oxr, 500_000)) else {
            skipped += 1;
            continue;
        };
        if profile(&t) != profile_tensor(&profile(&o), &profile(&o2)) {
            return Err(format!("tensor profile differs for seed {seed}"));
        }
        if profile(&x) != profile_oxr(&profile(&o), &profile(&p)) {
            return Err(format!("oxr profile differs for seed {seed}"));
        }
        checked += 1;
    }
    within(start, Duration::from_secs(30), "profile suite")?;
    Ok(format!(
        "{checked} pairs exact ({skipped} over budget skipped) in {:?}",
        start.elapsed()
    ))
}

fn factorial_power(n: u64, m: u64) -> u64 {
    (1..=n).product::<u64>() * m.pow(n as u32)
}

fn exponential_laws() -> Outcome {
    let start = Instant::now();
    for n in 1..=4u64 {
        for m in 1..=3u64 {
            let f = parse_formula(&format!("bang(({n}:{{{m}:()}}))")).map_err(|e| e.to_string())?;
            let leaves = expand(&f, 1_000_000)
                .map_err(|e| e.to_string())?
                .leaf_count();
            if leaves != factorial_power(n, m) {
                return Err(format!(
                    "!({n}:{{{m}:()}}) has {leaves} leaves, expected {}",
                    factorial_power(n, m)
                ));
            }
        }
    }
    let (mut checked, mut skipped, mut seed) = (0, 0, 0u64);
    while checked < 100 {
        seed += 1;
        let o = random_game(1 + (seed % 3) as usize, 2, Polarity::Opponent, seed);
        let Ok(bang) = expand(&Formula::bang(o.to_formula()).expect("opponent"), 1_000_000) else {
            skipped += 1;
            continue;
        };
        let (r, b) = (measure(&o), measure(&bang));
        let bound = polgame::analytics::bang_edge_bound(r.edges_o, r.edges_p);
        if BigUint::from(b.edges) > bound {
            return Err(format!(
                "seed {seed}: {} edges above bound {bound}",
                b.edges
            ));
        }
        checked += 1;
    }
    within(start, Duration::from_secs(10), "exponential suite")?;
    Ok(format!(
        "12 leaf counts exact, edge bound on {checked} games ({skipped} over budget) in {:?}",
        start.elapsed()
    ))
}

fn engine_triad() -> Outcome {
    let start = Instant::now();
    let (mut compared, mut seed) = (0, 0u64);
    let opts = DpOptions::default();
    while compared < 2000 {
        seed += 1;
        let f = random_formula(&FormulaParams::mixed(), seed);
        let lin = linear_value(&f);
        let dp = eval_dp(&f, &opts)
            .map_err(|e| format!("seed {seed}: {e}"))?
            .verdict;
        if lin != dp {
            return Err(format!("seed {seed}: linear {lin}, dp {dp} on {f}"));
        }
        match expand(&f, 100_000) {
            Ok(t) => {
                if has_strategy(&t) != lin {
                    return Err(format!("seed {seed}: naive disagrees on {f}"));
                }
                compared += 1;
            }
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    within(start, Duration::from_secs(60), "triad")?;
    Ok(format!(
        "{compared} formulas, zero disagreements ({} generated) in {:?}",
        seed,
        start.elapsed()
    ))
}

fn dp_par_bound() -> Outcome {
    let start = Instant::now();
    let opts = DpOptions {
        global_dedup: false,
        ..DpOptions::default()
    };
    let mut worst = 0f64;
    for seed in 1..=500u64 {
        let p = random_game(1 + (seed % 4) as usize, 3, Polarity::Player, seed);
        let q = random_game(4, 3, Polarity::Player, seed.wrapping_mul(0x9e37_79b9));
        let f = Formula::par(p.to_formula(), q.to_formula()).expect("player operands");
        let ops = eval_dp(&f, &opts)
            .map_err(|e| e.to_string())?
            .counter
            .binary_ops;
        let bound = par_ops_bound(&measure(&p), &measure(&q));
        if ops > bound {
            return Err(format!("seed {seed}: {ops} ops above bound {bound}"));
        }
        if bound > 0 {
            worst = worst.max(ops as f64 / bound as f64);
        }
    }
    within(start, Duration::from_secs(30), "par bound")?;
    Ok(format!(
        "500 pairs within bound (max ratio {worst:.2}) in {:?}",
        start.elapsed()
    ))
}

fn graph_sizing() -> Outcome {
    let start = Instant::now();
    for seed in 1..=500u64 {
        let f = random_formula(&FormulaParams::multiplicative(), seed);
        let g = build_graph(&f, false).map_err(|e| e.to_string())?;
        let quad = graph_size(&f).map_err(|e| e.to_string())?;
        if g.size() != quad {
            return Err(format!(
                "seed {seed}: measured {:?}, analytic {quad:?}",
                g.size()
            ));
        }
        if g.size().edges() > edge_bound_from_profile(&g.profile()) {
            return Err(format!("seed {seed}: edges above profile bound"));
        }
    }
    within(start, Duration::from_secs(30), "graph sizing")?;
    Ok(format!(
        "500 formulas exact, edge bound holds, in {:?}",
        start.elapsed()
    ))
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn usize_of_par(a: &GameTree, b: &GameTree) -> Result<u64, String> {
    let f = Formula::par(a.to_formula(), b.to_formula()).map_err(|e| e.to_string())?;
    Ok(measure(&expand(&f, 1_000_000).map_err(|e| e.to_string())?).uniform_size)
}

fn growth() -> Outcome {
    let mut misses = Vec::new();
    for n in 1..=4u64 {
        for m in 1..=4u64 {
            let u = usize_of_par(&chain_game(2 * n as usize), &chain_game(2 * m as usize))?;
            let c = binomial(n + m, n);
            if u != c {
                misses.push(format!("(n={n},m={m}: {u} vs {c})"));
            }
        }
    }
    let mut over = Vec::new();
    for n in 1..=3u32 {
        for m in 1..=3u32 {
            let u = usize_of_par(
                &branching_game(2 * n as usize),
                &branching_game(2 * m as usize),
            )?;
            if u > 2u64.pow(2 * n + 2 * m) {
                over.push(format!("(n={n},m={m}: {u})"));
            }
        }
    }
    let a_part = format!("A bound holds on {}/9", 9 - over.len());
    if misses.is_empty() && over.is_empty() {
        Ok(format!(
            "usize(par(L_2n,L_2m)) = C(n+m,n) on 16/16; {a_part}"
        ))
    } else {
        Err(format!(
            "usize(par(L_2n,L_2m)) = C(n+m,n) on {}/16, misses {}; {a_part} {}",
            16 - misses.len(),
            misses.join(" "),
            over.join(" ")
        ))
    }
}

fn cut_elimination() -> Outcome {
    let start = Instant::now();
    let worked = typecheck(
        &parse_term("( a -> >c . ( ), b -> >e . ( ) ) ; <b . { e -> >a . ( ), f -> >b . ( ) }")
            .map_err(|e| e.to_string())?,
        &parse_sequent("(a:{}, b:{}) |- {a:(), b:()}").map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let nf = normalize(&worked).map_err(|e| e.to_string())?;
    if nf != Term::right("a", Term::Tuple(vec![])) {
        return Err(format!("worked composition gave {nf}"));
    }
    let budget = 1_000_000;
    for seed in 1..=1000u64 {
        let t = random_typed_term(&TermParams::default(), seed);
        let a = normalize_with(&t, Order::InnermostLeftmost, budget)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let b = normalize_with(&t, Order::OutermostLeftmost, budget)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if a != b {
            return Err(format!("seed {seed}: orders disagree on {}", t.term));
        }
        if typecheck_trees(&a, &t.lhs, &t.rhs).is_err() {
            return Err(format!("seed {seed}: normal form loses its type"));
        }
    }
    for seed in 1..=200u64 {
        let [f, g, h] = random_typed_triple(
            &TermParams {
                cuts: 1,
                ..TermParams::default()
            },
            seed,
        );
        let whole = |term| TypedTerm {
            term,
            sequent: f.sequent.clone(),
            lhs: f.lhs.clone(),
            rhs: h.rhs.clone(),
        };
        let l = whole(Term::compose(
            Term::compose(f.term.clone(), g.term.clone()),
            h.term.clone(),
        ));
        let r = whole(Term::compose(
            f.term.clone(),
            Term::compose(g.term.clone(), h.term.clone()),
        ));
        if normalize(&l).map_err(|e| e.to_string())? != normalize(&r).map_err(|e| e.to_string())? {
            return Err(format!("triple {seed} does not associate"));
        }
    }
    Ok(format!(
        "worked example -> {nf}; 1000 terms confluent; 200 triples associate; in {:?}",
        start.elapsed()
    ))
}

fn bijection() -> Outcome {
    let start = Instant::now();
    let cap = 1_000_000;
    let mut largest = 0usize;
    for seed in 1..=300u64 {
        let o = random_game(1 + (seed % 3) as usize, 2, Polarity::Opponent, seed);
        let o2 = random_game(3, 2, Polarity::Opponent, seed ^ 0xface);
        let s = Sequent::new(SequentKind::Opponent, o.to_formula(), o2.to_formula())
            .map_err(|e| e.to_string())?;
        let hom = expand(&hom_formula(&s).map_err(|e| e.to_string())?, 1_000_000)
            .map_err(|e| e.to_string())?;
        let proofs = enumerate_normal_proofs(&o, &o2, cap).map_err(|e| e.to_string())?;
        if proofs.len() >= cap {
            return Err(format!("seed {seed}: enumeration hit its cap"));
        }
        if count_strategies(&hom) != BigUint::from(proofs.len()) {
            return Err(format!(
                "seed {seed}: {} strategies, {} proofs",
                count_strategies(&hom),
                proofs.len()
            ));
        }
        largest = largest.max(proofs.len());
    }
    let exam = parse_sequent("(a:{}, b:{}) |-o (a:{c:(),d:()}, b:{e:(),f:()})")
        .map_err(|e| e.to_string())?;
    let exam_hom = expand(&hom_formula(&exam).map_err(|e| e.to_string())?, 10_000)
        .map_err(|e| e.to_string())?;
    let n = count_strategies(&exam_hom);
    if n < BigUint::from(4u8) {
        return Err(format!("exam-oppmap hom game has {n} strategies"));
    }
    Ok(format!(
        "300 sequents match (largest {largest} proofs); exam-oppmap count {n}; in {:?}",
        start.elapsed()
    ))
}

/// `ox(l_1, ox(l_2, ...))` over small opponent literals, `n` levels deep.
fn tensor_chain(n: usize) -> Formula {
    let lits = [
        parse_formula("()").expect("literal"),
        parse_formula("(a:{b:()})").expect("literal"),
        parse_formula("(a:{}, b:{c:()})").expect("literal"),
    ];
    let mut f = Formula::one();
    for i in 0..n {
        f = Formula::tensor(lits[i % 3].clone(), f).expect("opponent operands");
    }
    f
}

fn best_time(f: &Formula) -> Duration {
    (0..11)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(linear_eval(std::hint::black_box(f)));
            t.elapsed()
        })
        .min()
        .expect("eleven runs")
}

fn linearity() -> Outcome {
    for seed in 1..=2000u64 {
        let f = random_formula(&FormulaParams::mixed(), seed);
        if linear_eval(&f).visits as usize != f.size() {
            return Err(format!("seed {seed}: visits differ from size"));
        }
    }
    let chains: Vec<Formula> = [1usize, 2, 4]
        .iter()
        .map(|k| tensor_chain(k * 27_300))
        .collect();
    for c in &chains {
        if linear_eval(c).visits as usize != c.size() {
            return Err("chain visits differ from size".into());
        }
    }
    let times: Vec<Duration> = chains.iter().map(best_time).collect();
    let r1 = times[1].as_secs_f64() / times[0].as_secs_f64();
    let r2 = times[2].as_secs_f64() / times[1].as_secs_f64();
    let sizes: Vec<usize> = chains.iter().map(Formula::size).collect();
    let ratios = format!("sizes {sizes:?}, ratios {r1:.2} {r2:.2}");
    if !(1.5..=3.0).contains(&r1) || !(1.5..=3.0).contains(&r2) {
        return Err(format!("time ratios out of [1.5, 3]: {ratios}"));
    }
    let mut gaps = Vec::new();
    for src in ["bang((8:{2:()}))", "bang(bang((3:{2:()})))"] {
        let f = parse_formula(src).map_err(|e| e.to_string())?;
        match expand(&f, 1_000_000) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => {
                return Err(format!(
                    "naive stayed within budget on {src}: {:?}",
                    other.map(|t| t.node_count())
                ))
            }
        }
        let t = Instant::now();
        let v = linear_value(&f);
        let took = t.elapsed();
        if took >= Duration::from_millis(10) {
            return Err(format!("linear took {took:?} on {src}"));
        }
        gaps.push(format!("{src}: naive over budget, linear {v} in {took:?}"));
    }
    Ok(format!("visits == size; {ratios}; {}", gaps.join("; ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden profile", golden_profile),
        ("profile proposition", profile_proposition),
        ("exponential laws", exponential_laws),
        ("engine triad", engine_triad),
        ("dp par bound", dp_par_bound),
        ("graph sizing", graph_sizing),
        ("growth witnesses", growth),
        ("cut elimination", cut_elimination),
        ("proof/strategy bijection", bijection),
        ("linearity", linearity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
