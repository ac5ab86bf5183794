use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use iqaoa::criteria::{evaluate, mean, percentile, CostDistribution, RankPolicy, Resolved};
use iqaoa::instances;
use iqaoa::optimizer::{
    final_report, phase_one, phase_two, GraspConfig, QaoaObjective, SearchContext,
};
use iqaoa::permrank::{perm_to_rank, rank_to_factoradic, rank_to_perm, Permutation, Rank};
use iqaoa::qsim::{build_state, gate_count, qubit_count, sample_probabilities, AnsatzParams};
use iqaoa::tsp::{summarize, CostTable, InstanceFormat, TspInstance};
use sha2::{Digest, Sha256};

use crate::report::*;
use crate::{BruteForceArgs, CodecArgs, Format, InstanceArgs, SampleArgs, SolveArgs};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Reads a file, or falls back to a bundled instance name.
fn load_instance(args: &InstanceArgs) -> Result<(TspInstance, InstanceDigest)> {
    let path = Path::new(&args.instance);
    let (text, format, source) = if path.exists() {
        let format = match args.format {
            Some(Format::Csv) => InstanceFormat::Csv,
            Some(Format::Json) => InstanceFormat::Json,
            None => InstanceFormat::from_path(path),
        };
        (
            fs::read_to_string(path)?,
            format,
            path.display().to_string(),
        )
    } else {
        let text = match args.instance.as_str() {
            "six" | "6" | "tsp6" => instances::SIX_CUSTOMERS_CSV,
            "eight" | "8" | "tsp8" => instances::EIGHT_CUSTOMERS_CSV,
            other => {
                return Err(format!("instance {other:?}: no such file or bundled instance").into())
            }
        };
        (
            text.to_owned(),
            InstanceFormat::Csv,
            format!("bundled:{}", args.instance),
        )
    };
    let inst = TspInstance::parse(&text, format)?;
    let digest = InstanceDigest {
        source,
        n: inst.n(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((inst, digest))
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn tour(table: &CostTable, rank: u64) -> Tour {
    let perm = rank_to_perm(Rank::new(rank, table.n()).expect("rank below n!"));
    Tour {
        rank,
        perm_one_indexed: perm.one_indexed(),
        perm: perm.as_slice().to_vec(),
        cost: table.cost(rank),
    }
}

fn outcome(table: &CostTable, policy: RankPolicy, x: u64, weight: f64) -> Outcome {
    let tour = match policy.resolve(x, table.len() as u64) {
        Resolved::Rank(r) => Some(tour(table, r)),
        Resolved::Penalty(_) | Resolved::Dropped => None,
    };
    Outcome {
        outcome: x,
        weight,
        tour,
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn echo(cfg: &GraspConfig) -> ConfigEcho {
    ConfigEcho {
        layers: cfg.layers,
        np: cfg.np,
        ne: cfg.ne,
        nd1: cfg.nd1,
        nd2: cfg.nd2,
        shots_search: cfg.shots_search,
        shots_final: cfg.shots_final,
        delta_init: cfg.delta_init,
        delta_floor_init: cfg.delta_floor_init,
        delta_shrink: cfg.delta_shrink,
        ls_budget: cfg.ls_budget,
        criterion: cfg.criterion.to_string(),
        policy: cfg.policy.to_string(),
        seed: cfg.master_seed,
        exact: cfg.exact,
        reeval: cfg.reeval,
    }
}

fn cost_rows(dist: &CostDistribution) -> Vec<CostRow> {
    let mut rows: Vec<CostRow> = dist
        .entries()
        .iter()
        .map(|&(cost, probability)| CostRow { cost, probability })
        .collect();
    rows.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then(a.cost.total_cmp(&b.cost))
    });
    rows
}

fn write_cost_csv(path: &Path, rows: &[CostRow]) -> Result<()> {
    let mut csv = String::from("cost,probability\n");
    for r in rows {
        writeln!(csv, "{},{}", r.cost, r.probability)?;
    }
    fs::write(path, csv)?;
    Ok(())
}

/// Most weighted outcome and cheapest resolvable outcome, from `(outcome, weight)` pairs.
fn pick_outcomes(
    table: &CostTable,
    policy: RankPolicy,
    weighted: impl Iterator<Item = (u64, f64)> + Clone,
) -> (Outcome, Outcome) {
    let (top_x, top_w) =
        weighted.clone().fold(
            (0, f64::NEG_INFINITY),
            |acc, (x, w)| if w > acc.1 { (x, w) } else { acc },
        );
    let mut best: Option<(f64, f64, u64)> = None;
    for (x, w) in weighted.filter(|&(_, w)| w > 0.0) {
        if let Resolved::Rank(r) = policy.resolve(x, table.len() as u64) {
            let c = table.cost(r);
            let better = match best {
                None => true,
                Some((bc, bw, _)) => c < bc || (c == bc && w > bw),
            };
            if better {
                best = Some((c, w, x));
            }
        }
    }
    let top = outcome(table, policy, top_x, top_w);
    let best = match best {
        Some((_, w, x)) => outcome(table, policy, x, w),
        None => Outcome {
            outcome: top_x,
            weight: top_w,
            tour: None,
        },
    };
    (top, best)
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let start = Instant::now();
    let (inst, digest) = load_instance(&args.instance)?;
    let cfg = args.config();
    cfg.validate()?;

    let t = Instant::now();
    let objective = QaoaObjective::new(&inst, &cfg)?;
    let cost_table_ms = ms(t);
    let table = objective.table();
    let q = objective.qubits();

    let ctx = SearchContext::new(&objective, &cfg);
    let t = Instant::now();
    let one = phase_one(&ctx)?;
    let phase_one_ms = ms(t);
    let t = Instant::now();
    let two = phase_two(&ctx, &one.best)?;
    let phase_two_ms = ms(t);
    let best = two.best;

    let t = Instant::now();
    let (dist, histogram) = final_report(&objective, &best.params, &cfg)?;
    let (top_outcome, best_sampled, histogram) = match histogram {
        Some(h) => {
            let pairs = h.counts().iter().map(|(&x, &c)| (x, c as f64));
            let (top, best) = pick_outcomes(table, cfg.policy, pairs);
            let rows = h
                .counts()
                .iter()
                .map(|(&outcome, &count)| CountRow { outcome, count })
                .collect();
            (top, best, rows)
        }
        None => {
            let probs = build_state(&best.params, q)?.probabilities();
            let pairs = probs.iter().enumerate().map(|(x, &p)| (x as u64, p));
            let (top, best) = pick_outcomes(table, cfg.policy, pairs);
            (top, best, Vec::new())
        }
    };
    let final_ms = ms(t);

    let (optimal_cost, optimal_mass) = if args.reference {
        let optimum = summarize(table).optimal_cost;
        (Some(optimum), Some(dist.mass_at(optimum)))
    } else {
        (None, None)
    };
    let summary = Summary {
        mean: mean(&dist)?,
        median: percentile(&dist, 0.5)?,
        criterion: evaluate(&dist, &cfg.criterion)?,
        optimal_cost,
        optimal_mass,
    };
    let cost_table = cost_rows(&dist);
    if let Some(path) = &args.cost_histogram {
        write_cost_csv(path, &cost_table)?;
    }

    let report = RunReport {
        instance: digest,
        config: echo(&cfg),
        qubits: q,
        gate_count: gate_count(q, cfg.layers),
        best_params: BestParams {
            beta: best.params.beta().to_vec(),
            gamma: best.params.gamma().to_vec(),
            search_score: best.score,
        },
        phase_one_score: one.best.score,
        evaluations: ctx.evaluations(),
        top_outcome,
        best_sampled,
        cost_table,
        histogram,
        summary,
        timings: Timings {
            cost_table_ms,
            phase_one_ms,
            phase_two_ms,
            final_ms,
            total_ms: ms(start),
        },
    };
    emit(
        &(serde_json::to_string_pretty(&report)? + "\n"),
        args.output.as_ref(),
    )
}

pub fn brute_force(args: &BruteForceArgs) -> Result<()> {
    let (inst, digest) = load_instance(&args.instance)?;
    let table = CostTable::build(&inst)?;
    let s = summarize(&table);
    if let Some(path) = &args.cost_histogram {
        let mut csv = String::from("cost,count\n");
        for (cost, count) in &s.cost_frequency {
            writeln!(csv, "{cost},{count}")?;
        }
        fs::write(path, csv)?;
    }
    let report = BruteForceReport {
        instance: digest,
        optimal_cost: s.optimal_cost,
        optimal_count: s.optimal_ranks.len(),
        optima: s.optimal_ranks.iter().map(|&r| tour(&table, r)).collect(),
        distinct_cost_count: s.distinct_cost_count,
        tour_count: table.len() as u64,
    };
    emit(
        &(serde_json::to_string_pretty(&report)? + "\n"),
        args.output.as_ref(),
    )
}

fn join(items: impl IntoIterator<Item = impl ToString>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn codec(args: &CodecArgs) -> Result<()> {
    let rank = match (&args.perm, args.rank) {
        (Some(labels), _) => {
            let sigma = if args.one_indexed {
                Permutation::from_one_indexed(labels)?
            } else {
                Permutation::new(labels.clone())?
            };
            if let Some(n) = args.n {
                if n != sigma.len() {
                    return Err(format!(
                        "--n {n} does not match a permutation of length {}",
                        sigma.len()
                    )
                    .into());
                }
            }
            perm_to_rank(&sigma)?
        }
        (None, Some(value)) => {
            let n = args.n.ok_or("--rank needs --n")?;
            Rank::new(value, n)?
        }
        (None, None) => unreachable!("clap requires --rank or --perm"),
    };
    let sigma = rank_to_perm(rank);
    let line = format!(
        "n={} rank={} digits={} perm={} perm_one_indexed=[{}]\n",
        rank.n(),
        rank.value(),
        rank_to_factoradic(rank),
        sigma,
        join(sigma.one_indexed(), ",")
    );
    emit(&line, None)
}

pub fn sample(args: &SampleArgs) -> Result<()> {
    let (inst, _) = load_instance(&args.instance)?;
    let params = AnsatzParams::from_flat(&args.angles)?;
    let table = CostTable::build(&inst)?;
    let q = qubit_count(inst.n())?;
    let probs = build_state(&params, q)?.probabilities();
    let h = sample_probabilities(&probs, args.shots, args.seed)?;
    let mut csv = String::from("outcome,rank,perm,cost,count,probability\n");
    for (&x, &count) in h.counts() {
        let (rank, perm, cost) = match args.policy.resolve(x, table.len() as u64) {
            Resolved::Rank(r) => {
                let sigma = rank_to_perm(Rank::new(r, inst.n())?);
                (
                    r.to_string(),
                    join(sigma.as_slice(), " "),
                    table.cost(r).to_string(),
                )
            }
            Resolved::Penalty(c) => (String::new(), String::new(), c.to_string()),
            Resolved::Dropped => (String::new(), String::new(), String::new()),
        };
        writeln!(
            csv,
            "{x},{rank},{perm},{cost},{count},{}",
            count as f64 / h.total_shots() as f64
        )?;
    }
    emit(&csv, args.output.as_ref())
}
