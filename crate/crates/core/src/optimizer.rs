//! Continuous GRASPxELS over the ansatz angles.
//!
//! Phase one runs `np` multi-starts from uniformly random angle vectors, each
//! refined by evolutionary local search (ELS) on all angles. Phase two freezes
//! the betas of the phase-one winner and runs `np` more ELS restarts on the
//! gammas only, each seeded by perturbing the incumbent. Within ELS every
//! child is a perturbation of the current point followed by a first-improvement
//! local search whose step size walks down the ladder `delta_init, /10, ...`
//! to a floor that itself shrinks after every ELS iteration.
//!
//! Randomness comes from [`crate::seed`] streams keyed by
//! `(phase, start, iteration, child)`, so a run is a pure function of its
//! configuration no matter how starts are scheduled.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::criteria::{
    evaluate, exact_distribution_from_probs, histogram_to_costs, CostDistribution, CriterionSpec,
    RankPolicy,
};
use crate::error::{Error, Result};
use crate::qsim::{build_state, qubit_count, sample_probabilities, AnsatzParams, ShotHistogram};
use crate::seed::{self, derive_seed, Rng};
use crate::tsp::{CostTable, TspInstance};

/// Ratio between consecutive rungs of the local-search step ladder.
pub const LADDER_RATIO: f64 = 10.0;

const PHASE_ONE: u64 = 1;
const PHASE_TWO: u64 = 2;
const FINAL_SAMPLE: u64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraspConfig {
    /// Starts per phase.
    pub np: usize,
    /// ELS iterations per start.
    pub ne: usize,
    /// Children per ELS iteration in phase one (betas and gammas).
    pub nd1: usize,
    /// Children per ELS iteration in phase two (gammas only).
    pub nd2: usize,
    /// Ansatz layers.
    pub layers: usize,
    pub shots_search: u64,
    pub shots_final: u64,
    /// Largest step, used for child perturbations and the top ladder rung.
    pub delta_init: f64,
    /// Ladder floor for the first ELS iteration.
    pub delta_floor_init: f64,
    /// Floor divisor applied after each ELS iteration.
    pub delta_shrink: f64,
    /// Neighbour trials per ladder rung.
    pub ls_budget: usize,
    pub criterion: CriterionSpec,
    pub policy: RankPolicy,
    pub master_seed: u64,
    /// Independent samples averaged per evaluation.
    pub reeval: usize,
    /// Score exact distributions instead of sampled ones.
    pub exact: bool,
}

impl Default for GraspConfig {
    fn default() -> Self {
        Self {
            np: 20,
            ne: 5,
            nd1: 3,
            nd2: 5,
            layers: 2,
            shots_search: 40,
            shots_final: 1000,
            delta_init: 0.1,
            delta_floor_init: 0.001,
            delta_shrink: 10.0,
            ls_budget: 10,
            criterion: CriterionSpec::decile_plus_mean(),
            policy: RankPolicy::Modulo,
            master_seed: 0x1A0A_2024,
            reeval: 1,
            exact: false,
        }
    }
}

impl GraspConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("np", self.np),
            ("ne", self.ne),
            ("nd1", self.nd1),
            ("nd2", self.nd2),
            ("layers", self.layers),
            ("shots_search", self.shots_search as usize),
            ("shots_final", self.shots_final as usize),
            ("reeval", self.reeval),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be at least 1"
            )));
        }
        if !(self.delta_floor_init > 0.0 && self.delta_floor_init <= self.delta_init) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < delta_floor_init ({}) <= delta_init ({})",
                self.delta_floor_init, self.delta_init
            )));
        }
        if self.delta_shrink.is_nan() || self.delta_shrink <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "delta_shrink ({}) must exceed 1",
                self.delta_shrink
            )));
        }
        Ok(())
    }

    /// Upper bound on objective calls for a full two-phase run.
    pub fn evaluation_bound(&self) -> u64 {
        let max_rungs = step_ladder(self.delta_init, self.min_floor()).len() as u64;
        let per_child = max_rungs * self.ls_budget as u64 + 1;
        let np = self.np as u64;
        let ne = self.ne as u64;
        np * (1 + ne * self.nd1 as u64 * per_child) + np * (1 + ne * self.nd2 as u64 * per_child)
    }

    fn min_floor(&self) -> f64 {
        self.delta_floor_init / self.delta_shrink.powi(self.ne.saturating_sub(1) as i32)
    }
}

/// Which angle families a move may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamMask {
    pub optimize_beta: bool,
    pub optimize_gamma: bool,
}

impl ParamMask {
    pub const BOTH: Self = Self {
        optimize_beta: true,
        optimize_gamma: true,
    };
    pub const GAMMA_ONLY: Self = Self {
        optimize_beta: false,
        optimize_gamma: true,
    };
    pub const BETA_ONLY: Self = Self {
        optimize_beta: true,
        optimize_gamma: false,
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedParams {
    pub params: AnsatzParams,
    pub score: f64,
    pub eval_seed: u64,
}

/// Scalar to minimise over angle vectors; `eval_seed` drives any sampling.
pub trait Objective: Sync {
    fn score(&self, params: &AnsatzParams, eval_seed: u64) -> Result<f64>;
}

impl<F> Objective for F
where
    F: Fn(&AnsatzParams, u64) -> Result<f64> + Sync,
{
    fn score(&self, params: &AnsatzParams, eval_seed: u64) -> Result<f64> {
        self(params, eval_seed)
    }
}

/// Builds the ansatz state, measures it, decodes outcomes to tour costs and
/// scores the resulting distribution.
#[derive(Clone, Debug)]
pub struct QaoaObjective {
    table: CostTable,
    q: u32,
    shots: u64,
    criterion: CriterionSpec,
    policy: RankPolicy,
    exact: bool,
    reeval: usize,
}

impl QaoaObjective {
    pub fn new(inst: &TspInstance, cfg: &GraspConfig) -> Result<Self> {
        Self::with_table(CostTable::build(inst)?, cfg)
    }

    pub fn with_table(table: CostTable, cfg: &GraspConfig) -> Result<Self> {
        let q = qubit_count(table.n())?;
        Ok(Self {
            table,
            q,
            shots: cfg.shots_search,
            criterion: cfg.criterion.clone(),
            policy: cfg.policy,
            exact: cfg.exact,
            reeval: cfg.reeval.max(1),
        })
    }

    pub fn table(&self) -> &CostTable {
        &self.table
    }

    pub fn qubits(&self) -> u32 {
        self.q
    }

    /// Cost distribution of `params`: exact, or from `shots` samples.
    pub fn distribution(
        &self,
        params: &AnsatzParams,
        shots: u64,
        sample_seed: u64,
    ) -> Result<(CostDistribution, Option<ShotHistogram>)> {
        let probs = build_state(params, self.q)?.probabilities();
        if self.exact {
            return Ok((
                exact_distribution_from_probs(&probs, &self.table, self.policy)?,
                None,
            ));
        }
        let h = sample_probabilities(&probs, shots, sample_seed)?;
        Ok((histogram_to_costs(&h, &self.table, self.policy)?, Some(h)))
    }
}

impl Objective for QaoaObjective {
    fn score(&self, params: &AnsatzParams, eval_seed: u64) -> Result<f64> {
        let probs = build_state(params, self.q)?.probabilities();
        if self.exact {
            let dist = exact_distribution_from_probs(&probs, &self.table, self.policy)?;
            return evaluate(&dist, &self.criterion);
        }
        let rounds = self.reeval;
        let mut total = 0.0;
        for round in 0..rounds {
            let sample_seed = if rounds == 1 {
                eval_seed
            } else {
                derive_seed(eval_seed, &[round as u64])
            };
            let h = sample_probabilities(&probs, self.shots, sample_seed)?;
            total += evaluate(
                &histogram_to_costs(&h, &self.table, self.policy)?,
                &self.criterion,
            )?;
        }
        Ok(total / rounds as f64)
    }
}

/// One objective evaluation of the full pipeline.
pub fn evaluator(
    params: &AnsatzParams,
    inst: &TspInstance,
    cfg: &GraspConfig,
    eval_seed: u64,
) -> Result<f64> {
    QaoaObjective::new(inst, cfg)?.score(params, eval_seed)
}

/// Each of the `2p` angles uniform on `[0, 2pi)`.
pub fn random_params(layers: usize, rng: &mut Rng) -> Result<AnsatzParams> {
    let mut draw = || {
        (0..layers)
            .map(|_| rng.random_range(0.0..TAU))
            .collect::<Vec<_>>()
    };
    let beta = draw();
    let gamma = draw();
    AnsatzParams::new(beta, gamma)
}

/// Perturbs every masked angle by an independent uniform step in `[-delta, delta]`.
pub fn neighbor(params: &AnsatzParams, delta: f64, mask: ParamMask, rng: &mut Rng) -> AnsatzParams {
    let mut shift = |angles: &[f64], on: bool| -> Vec<f64> {
        angles
            .iter()
            .map(|&a| {
                if on {
                    a + rng.random_range(-delta..=delta)
                } else {
                    a
                }
            })
            .collect()
    };
    let beta = shift(params.beta(), mask.optimize_beta);
    let gamma = shift(params.gamma(), mask.optimize_gamma);
    AnsatzParams::new(beta, gamma).expect("perturbed angles stay finite")
}

/// Step sizes `hi, hi/10, ...`, ending exactly at `lo`.
pub fn step_ladder(hi: f64, lo: f64) -> Vec<f64> {
    let mut rungs = vec![hi];
    let mut delta = hi;
    while delta > lo * (1.0 + 1e-9) {
        delta = (delta / LADDER_RATIO).max(lo);
        if delta < lo * (1.0 + 1e-9) {
            delta = lo;
        }
        rungs.push(delta);
    }
    rungs
}

/// Objective plus bookkeeping shared by every search routine.
pub struct SearchContext<'a, O: ?Sized> {
    pub objective: &'a O,
    pub cfg: &'a GraspConfig,
    evaluations: AtomicU64,
}

impl<'a, O: Objective + ?Sized> SearchContext<'a, O> {
    pub fn new(objective: &'a O, cfg: &'a GraspConfig) -> Self {
        Self {
            objective,
            cfg,
            evaluations: AtomicU64::new(0),
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn evaluate(&self, params: AnsatzParams, rng: &mut Rng) -> Result<EvaluatedParams> {
        let eval_seed = rng.random::<u64>();
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let score = self.objective.score(&params, eval_seed)?;
        if score.is_nan() {
            return Err(Error::InvalidParameter("objective returned NaN".into()));
        }
        Ok(EvaluatedParams {
            params,
            score,
            eval_seed,
        })
    }
}

/// First-improvement hill climbing over the step ladder `delta_hi` down to `delta_lo`.
pub fn local_search<O: Objective + ?Sized>(
    start: EvaluatedParams,
    mask: ParamMask,
    delta_hi: f64,
    delta_lo: f64,
    budget: usize,
    ctx: &SearchContext<'_, O>,
    rng: &mut Rng,
) -> Result<EvaluatedParams> {
    if !(delta_hi >= delta_lo && delta_lo > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need delta_hi ({delta_hi}) >= delta_lo ({delta_lo}) > 0"
        )));
    }
    let mut current = start;
    for delta in step_ladder(delta_hi, delta_lo) {
        for _ in 0..budget {
            let candidate = ctx.evaluate(neighbor(&current.params, delta, mask, rng), rng)?;
            if candidate.score < current.score {
                current = candidate;
            }
        }
    }
    Ok(current)
}

/// Evolutionary local search from `current`; `path` names the start so child
/// streams are reproducible. Returns the best point seen.
pub fn els<O: Objective + ?Sized>(
    current: EvaluatedParams,
    ne: usize,
    nd: usize,
    mask: ParamMask,
    ctx: &SearchContext<'_, O>,
    path: &[u64],
) -> Result<EvaluatedParams> {
    let cfg = ctx.cfg;
    let mut current = current;
    let mut best = current.clone();
    let mut floor = cfg.delta_floor_init;
    for iteration in 0..ne {
        let mut best_child: Option<EvaluatedParams> = None;
        for child_index in 0..nd {
            let mut child_path = path.to_vec();
            child_path.extend([iteration as u64, child_index as u64]);
            let mut rng = seed::stream(cfg.master_seed, &child_path);
            let child = ctx.evaluate(
                neighbor(&current.params, cfg.delta_init, mask, &mut rng),
                &mut rng,
            )?;
            let child = local_search(
                child,
                mask,
                cfg.delta_init,
                floor.min(cfg.delta_init),
                cfg.ls_budget,
                ctx,
                &mut rng,
            )?;
            // strict comparison keeps the lowest child index on ties
            if best_child.as_ref().is_none_or(|b| child.score < b.score) {
                best_child = Some(child);
            }
        }
        current = best_child.expect("nd >= 1");
        if current.score < best.score {
            best = current.clone();
        }
        floor /= cfg.delta_shrink;
    }
    Ok(best)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub evaluations: u64,
    /// Incumbent score after each start, phase one then phase two.
    pub incumbent_trace: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseOutcome {
    pub best: EvaluatedParams,
    /// Best result of each start, by start index.
    pub per_start: Vec<EvaluatedParams>,
}

fn run_starts<F>(np: usize, run: F) -> Result<Vec<EvaluatedParams>>
where
    F: Fn(usize) -> Result<EvaluatedParams> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..np).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..np).map(run).collect()
    }
}

/// Lowest score wins; ties go to the earliest start.
fn pick_best<'a>(
    candidates: impl IntoIterator<Item = &'a EvaluatedParams>,
) -> Option<&'a EvaluatedParams> {
    candidates
        .into_iter()
        .fold(None, |acc: Option<&EvaluatedParams>, c| match acc {
            Some(b) if b.score <= c.score => Some(b),
            _ => Some(c),
        })
}

/// Multi-start ELS over betas and gammas.
pub fn phase_one<O: Objective + ?Sized>(ctx: &SearchContext<'_, O>) -> Result<PhaseOutcome> {
    let cfg = ctx.cfg;
    let per_start = run_starts(cfg.np, |start| {
        let path = [PHASE_ONE, start as u64];
        let mut rng = seed::stream(cfg.master_seed, &path);
        let initial = random_params(cfg.layers, &mut rng)?;
        let initial = ctx.evaluate(initial, &mut rng)?;
        els(initial, cfg.ne, cfg.nd1, ParamMask::BOTH, ctx, &path)
    })?;
    let best = pick_best(&per_start).expect("np >= 1").clone();
    Ok(PhaseOutcome { best, per_start })
}

/// Gamma-only ELS restarts around `incumbent`, whose betas stay frozen.
pub fn phase_two<O: Objective + ?Sized>(
    ctx: &SearchContext<'_, O>,
    incumbent: &EvaluatedParams,
) -> Result<PhaseOutcome> {
    let cfg = ctx.cfg;
    let per_start = run_starts(cfg.np, |restart| {
        let path = [PHASE_TWO, restart as u64];
        let mut rng = seed::stream(cfg.master_seed, &path);
        let initial = neighbor(
            &incumbent.params,
            cfg.delta_init,
            ParamMask::GAMMA_ONLY,
            &mut rng,
        );
        let initial = ctx.evaluate(initial, &mut rng)?;
        els(initial, cfg.ne, cfg.nd2, ParamMask::GAMMA_ONLY, ctx, &path)
    })?;
    let best = pick_best(std::iter::once(incumbent).chain(&per_start))
        .expect("non-empty")
        .clone();
    Ok(PhaseOutcome { best, per_start })
}

fn trace_of(outcome: &PhaseOutcome, incumbent: Option<f64>) -> Vec<f64> {
    let mut running = incumbent.unwrap_or(f64::INFINITY);
    outcome
        .per_start
        .iter()
        .map(|e| {
            running = running.min(e.score);
            running
        })
        .collect()
}

/// Both phases; returns the best point and search statistics.
pub fn grasp_els<O: Objective + ?Sized>(
    objective: &O,
    cfg: &GraspConfig,
) -> Result<(EvaluatedParams, SearchStats)> {
    cfg.validate()?;
    let ctx = SearchContext::new(objective, cfg);
    let one = phase_one(&ctx)?;
    let two = phase_two(&ctx, &one.best)?;
    let mut incumbent_trace = trace_of(&one, None);
    incumbent_trace.extend(trace_of(&two, Some(one.best.score)));
    Ok((
        two.best,
        SearchStats {
            evaluations: ctx.evaluations(),
            incumbent_trace,
        },
    ))
}

/// Result of an end-to-end run on a TSP instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub best: EvaluatedParams,
    pub distribution: CostDistribution,
    /// Final measurement counts; absent in exact mode.
    pub histogram: Option<ShotHistogram>,
    pub stats: SearchStats,
}

/// Seed used for the final `shots_final` measurement.
pub fn final_sample_seed(cfg: &GraspConfig) -> u64 {
    derive_seed(cfg.master_seed, &[FINAL_SAMPLE])
}

/// Final cost distribution at `params`.
pub fn final_report(
    objective: &QaoaObjective,
    params: &AnsatzParams,
    cfg: &GraspConfig,
) -> Result<(CostDistribution, Option<ShotHistogram>)> {
    objective.distribution(params, cfg.shots_final, final_sample_seed(cfg))
}

/// Optimises the angles for `inst` and measures the result.
pub fn solve(inst: &TspInstance, cfg: &GraspConfig) -> Result<SolveOutcome> {
    let objective = QaoaObjective::new(inst, cfg)?;
    solve_with(&objective, cfg)
}

pub fn solve_with(objective: &QaoaObjective, cfg: &GraspConfig) -> Result<SolveOutcome> {
    let (best, stats) = grasp_els(objective, cfg)?;
    let (distribution, histogram) = final_report(objective, &best.params, cfg)?;
    Ok(SolveOutcome {
        best,
        distribution,
        histogram,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::exact_distribution;
    use crate::instances;
    use crate::qsim::prepare_uniform;
    use std::sync::Mutex;

    /// Neighbour trials per rung for the surrogate checks; joint perturbation
    /// of all four angles needs more trials than the quantum default.
    const SURROGATE_BUDGET: usize = 50;

    fn surrogate(params: &AnsatzParams, _seed: u64) -> Result<f64> {
        Ok(params.flat().iter().map(|a| (a - 1.0).powi(2)).sum())
    }

    fn at(angles: &[f64]) -> EvaluatedParams {
        let params = AnsatzParams::from_flat(angles).unwrap();
        let score = surrogate(&params, 0).unwrap();
        EvaluatedParams {
            params,
            score,
            eval_seed: 0,
        }
    }

    #[test]
    fn ladder_shapes() {
        assert_eq!(step_ladder(0.1, 0.001).len(), 3);
        let l = step_ladder(0.1, 0.001);
        assert!((l[1] - 0.01).abs() < 1e-15 && l[2] == 0.001);
        assert_eq!(step_ladder(0.1, 0.1), vec![0.1]);
        assert_eq!(step_ladder(0.1, 0.03), vec![0.1, 0.03]);
        assert_eq!(step_ladder(0.1, 1e-7).len(), 7);
    }

    #[test]
    fn config_validation() {
        assert!(GraspConfig::default().validate().is_ok());
        let bad = |f: fn(&mut GraspConfig)| {
            let mut c = GraspConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.np = 0));
        assert!(bad(|c| c.nd2 = 0));
        assert!(bad(|c| c.shots_search = 0));
        assert!(bad(|c| c.delta_floor_init = 0.5));
        assert!(bad(|c| c.delta_floor_init = 0.0));
        assert!(bad(|c| c.delta_shrink = 1.0));
    }

    #[test]
    fn random_params_in_range_and_reproducible() {
        let mut rng = seed::stream(5, &[]);
        let p = random_params(2, &mut rng).unwrap();
        assert_eq!(p.flat().len(), 4);
        assert!(p.flat().iter().all(|a| (0.0..TAU).contains(a)));
        let again = random_params(2, &mut seed::stream(5, &[])).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn random_params_mean_concentrates() {
        let mut rng = seed::stream(99, &[]);
        let mut sums = [0.0f64; 4];
        let draws = 10_000;
        for _ in 0..draws {
            for (s, a) in sums
                .iter_mut()
                .zip(random_params(2, &mut rng).unwrap().flat())
            {
                *s += a;
            }
        }
        // sd of the mean is 2pi/sqrt(12 * 1e4) ~ 0.018
        for s in sums {
            assert!((s / draws as f64 - std::f64::consts::PI).abs() < 0.1);
        }
    }

    #[test]
    fn neighbor_respects_mask_and_bound() {
        let base = AnsatzParams::from_flat(&[0.5, 6.2, 3.0, 0.01]).unwrap();
        let mut rng = seed::stream(1, &[]);
        for _ in 0..200 {
            let n = neighbor(&base, 0.1, ParamMask::GAMMA_ONLY, &mut rng);
            assert_eq!(n.beta(), base.beta());
            let n = neighbor(&base, 1e-6, ParamMask::BOTH, &mut rng);
            for (a, b) in n.flat().iter().zip(base.flat()) {
                let d = (a - b).rem_euclid(TAU);
                assert!(d.min(TAU - d) <= 1e-6 + 1e-12);
            }
        }
        let a = neighbor(&base, 0.3, ParamMask::BOTH, &mut seed::stream(8, &[]));
        let b = neighbor(&base, 0.3, ParamMask::BOTH, &mut seed::stream(8, &[]));
        assert_eq!(a, b);
        let beta_only = neighbor(&base, 0.3, ParamMask::BETA_ONLY, &mut seed::stream(8, &[]));
        assert_eq!(beta_only.gamma(), base.gamma());
    }

    #[test]
    fn local_search_zero_budget_is_identity() {
        let cfg = GraspConfig::default();
        let f = surrogate;
        let ctx = SearchContext::new(&f, &cfg);
        let start = at(&[2.0, 2.0, 2.0, 2.0]);
        let out = local_search(
            start.clone(),
            ParamMask::BOTH,
            0.1,
            0.001,
            0,
            &ctx,
            &mut seed::stream(0, &[]),
        )
        .unwrap();
        assert_eq!(out, start);
        assert_eq!(ctx.evaluations(), 0);
    }

    #[test]
    fn local_search_converges_on_surrogate() {
        let cfg = GraspConfig::default();
        let f = surrogate;
        let ctx = SearchContext::new(&f, &cfg);
        let start = at(&[1.05; 4]);
        for trial in 0..20u64 {
            let out = local_search(
                start.clone(),
                ParamMask::BOTH,
                0.1,
                0.001,
                SURROGATE_BUDGET,
                &ctx,
                &mut seed::stream(trial, &[]),
            )
            .unwrap();
            for a in out.params.flat() {
                assert!((a - 1.0).abs() < 0.01, "{a}");
            }
        }
    }

    #[test]
    fn local_search_never_worsens() {
        let cfg = GraspConfig::default();
        let f = surrogate;
        let ctx = SearchContext::new(&f, &cfg);
        for trial in 0..200u64 {
            let mut rng = seed::stream(trial, &[7]);
            let start = random_params(2, &mut rng).unwrap();
            let start = ctx.evaluate(start, &mut rng).unwrap();
            let out = local_search(
                start.clone(),
                ParamMask::BOTH,
                0.1,
                0.001,
                5,
                &ctx,
                &mut rng,
            )
            .unwrap();
            assert!(out.score <= start.score);
        }
    }

    #[test]
    fn els_deterministic_and_no_worse() {
        let cfg = GraspConfig::default();
        let f = surrogate;
        let ctx = SearchContext::new(&f, &cfg);
        let start = at(&[2.5, 0.3, 4.0, 1.7]);
        let a = els(start.clone(), 5, 3, ParamMask::BOTH, &ctx, &[9]).unwrap();
        let b = els(start.clone(), 5, 3, ParamMask::BOTH, &ctx, &[9]).unwrap();
        assert_eq!(a, b);
        assert!(a.score <= start.score);

        let ls = local_search(
            start.clone(),
            ParamMask::BOTH,
            0.1,
            0.001,
            10,
            &ctx,
            &mut seed::stream(cfg.master_seed, &[9]),
        )
        .unwrap();
        assert!(a.score <= ls.score);
    }

    #[test]
    fn degenerates_to_best_random_start() {
        let cfg = GraspConfig {
            np: 6,
            ne: 1,
            nd1: 1,
            nd2: 1,
            ls_budget: 0,
            ..GraspConfig::default()
        };
        let f = surrogate;
        let ctx = SearchContext::new(&f, &cfg);
        let one = phase_one(&ctx).unwrap();
        // without local search each start is the better of its random point
        // and one perturbed child
        for (start, got) in one.per_start.iter().enumerate() {
            let mut rng = seed::stream(cfg.master_seed, &[PHASE_ONE, start as u64]);
            let initial = random_params(2, &mut rng).unwrap();
            assert!(got.score <= surrogate(&initial, 0).unwrap());
        }
        assert_eq!(ctx.evaluations(), 6 * 2);
    }

    #[test]
    fn phase_two_freezes_beta() {
        let cfg = GraspConfig {
            np: 4,
            ne: 2,
            nd2: 3,
            ..GraspConfig::default()
        };
        let seen = Mutex::new(Vec::new());
        let recording = |p: &AnsatzParams, s: u64| {
            seen.lock().unwrap().push(p.beta().to_vec());
            surrogate(p, s)
        };
        let ctx = SearchContext::new(&recording, &cfg);
        let incumbent = at(&[0.7, 2.0, 1.5, 3.0]);
        let two = phase_two(&ctx, &incumbent).unwrap();
        let seen = seen.into_inner().unwrap();
        assert!(!seen.is_empty());
        assert!(seen.iter().all(|b| b.as_slice() == incumbent.params.beta()));
        assert_eq!(two.best.params.beta(), incumbent.params.beta());
        assert!(two.best.score <= incumbent.score);
    }

    #[test]
    fn grasp_reproducible_with_bounded_evaluations() {
        let cfg = GraspConfig {
            np: 5,
            ne: 3,
            ..GraspConfig::default()
        };
        let calls = AtomicU64::new(0);
        let counting = |p: &AnsatzParams, s: u64| {
            calls.fetch_add(1, Ordering::Relaxed);
            surrogate(p, s)
        };
        let (a, stats) = grasp_els(&counting, &cfg).unwrap();
        let (b, _) = grasp_els(&counting, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(calls.load(Ordering::Relaxed), 2 * stats.evaluations);
        assert!(stats.evaluations <= cfg.evaluation_bound());
        assert!(stats.incumbent_trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*stats.incumbent_trace.last().unwrap(), a.score);
    }

    #[test]
    fn evaluator_examples() {
        let six = instances::six_customers();
        let cfg = GraspConfig {
            exact: true,
            ..GraspConfig::default()
        };
        let zeros = AnsatzParams::zeros(2).unwrap();
        let table = CostTable::build(&six).unwrap();
        let uniform =
            exact_distribution(&prepare_uniform(10).unwrap(), &table, RankPolicy::Modulo).unwrap();
        let expected = evaluate(&uniform, &cfg.criterion).unwrap();
        assert!((evaluator(&zeros, &six, &cfg, 1).unwrap() - expected).abs() < 1e-9);

        let sampled = GraspConfig::default();
        let p = AnsatzParams::from_flat(&[0.4, 1.3, 2.2, 0.9]).unwrap();
        assert_eq!(
            evaluator(&p, &six, &sampled, 77).unwrap(),
            evaluator(&p, &six, &sampled, 77).unwrap()
        );

        let h = ShotHistogram::from_pairs(&[(701, 40)]).unwrap();
        let d = histogram_to_costs(&h, &table, RankPolicy::Modulo).unwrap();
        assert_eq!(evaluate(&d, &cfg.criterion).unwrap(), 446.0);
    }

    #[test]
    fn reeval_averages_independent_samples() {
        let six = instances::six_customers();
        let p = AnsatzParams::from_flat(&[0.4, 1.3, 2.2, 0.9]).unwrap();
        let single = GraspConfig::default();
        let triple = GraspConfig {
            reeval: 3,
            ..GraspConfig::default()
        };
        let obj = QaoaObjective::new(&six, &single).unwrap();
        let manual: f64 = (0..3u64)
            .map(|r| obj.score(&p, derive_seed(5, &[r])).unwrap())
            .sum::<f64>()
            / 3.0;
        assert!((evaluator(&p, &six, &triple, 5).unwrap() - manual).abs() < 1e-9);
    }
}
