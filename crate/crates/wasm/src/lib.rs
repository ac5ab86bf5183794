//! Browser bindings. Every export returns a JSON string; the plain functions
//! in [`api`] hold the logic so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use iqaoa::criteria::{
        evaluate, exact_distribution, mean, percentile, CriterionSpec, RankPolicy,
    };
    use iqaoa::instances;
    use iqaoa::optimizer::{grasp_els, GraspConfig, QaoaObjective};
    use iqaoa::permrank::{rank_to_factoradic, rank_to_perm, Rank};
    use iqaoa::qsim::{build_state, gate_count, qubit_count, AnsatzParams};
    use iqaoa::tsp::{summarize, CostTable, TspInstance};
    use serde::Serialize;

    pub type Result<T> = std::result::Result<T, String>;

    fn err<E: std::fmt::Display>(e: E) -> String {
        e.to_string()
    }

    fn instance(name: &str) -> Result<TspInstance> {
        instances::by_name(name).ok_or_else(|| format!("unknown instance {name:?}"))
    }

    #[derive(Serialize)]
    struct Distribution {
        n: usize,
        qubits: u32,
        gate_count: u64,
        optimal_cost: f64,
        optimal_mass: f64,
        mean: f64,
        median: f64,
        criterion: f64,
        /// `(cost, probability)`, ascending cost.
        costs: Vec<(f64, f64)>,
    }

    fn describe(
        table: &CostTable,
        params: &AnsatzParams,
        policy: RankPolicy,
    ) -> Result<Distribution> {
        let q = qubit_count(table.n()).map_err(err)?;
        let state = build_state(params, q).map_err(err)?;
        let dist = exact_distribution(&state, table, policy).map_err(err)?;
        let optimal_cost = table.distinct_costs()[0];
        Ok(Distribution {
            n: table.n(),
            qubits: q,
            gate_count: gate_count(q, params.layers()),
            optimal_cost,
            optimal_mass: dist.mass_at(optimal_cost),
            mean: mean(&dist).map_err(err)?,
            median: percentile(&dist, 0.5).map_err(err)?,
            criterion: evaluate(&dist, &CriterionSpec::decile_plus_mean()).map_err(err)?,
            costs: dist.entries().to_vec(),
        })
    }

    /// Exact cost distribution of a bundled instance at `[beta.., gamma..]`.
    pub fn cost_distribution(name: &str, angles: &[f64], policy: &str) -> Result<String> {
        let table = CostTable::build(&instance(name)?).map_err(err)?;
        let params = AnsatzParams::from_flat(angles).map_err(err)?;
        let policy: RankPolicy = policy.parse().map_err(err)?;
        serde_json::to_string(&describe(&table, &params, policy)?).map_err(err)
    }

    #[derive(Serialize)]
    struct Decoded {
        rank: u64,
        digits: Vec<u64>,
        perm: Vec<usize>,
        perm_one_indexed: Vec<usize>,
        cost: Option<f64>,
    }

    /// Digits and tour of `rank`; the cost is included when `name` is a bundled instance of size `n`.
    pub fn decode_rank(n: usize, rank: u64, name: &str) -> Result<String> {
        let r = Rank::new(rank, n).map_err(err)?;
        let perm = rank_to_perm(r);
        let cost = instances::by_name(name)
            .filter(|inst| inst.n() == n)
            .map(|inst| iqaoa::tsp::tour_cost(&perm, &inst))
            .transpose()
            .map_err(err)?;
        let decoded = Decoded {
            rank,
            digits: rank_to_factoradic(r).digits().to_vec(),
            perm_one_indexed: perm.one_indexed(),
            perm: perm.as_slice().to_vec(),
            cost,
        };
        serde_json::to_string(&decoded).map_err(err)
    }

    #[derive(Serialize)]
    struct Optimized {
        angles: Vec<f64>,
        score: f64,
        evaluations: u64,
        optimal_ranks: Vec<u64>,
        distribution: Distribution,
    }

    /// A reduced exact-mode search on a bundled instance with at most 8 customers.
    pub fn optimize(name: &str, seed: u64, np: usize, ne: usize) -> Result<String> {
        let inst = instance(name)?;
        let cfg = GraspConfig {
            np,
            ne,
            master_seed: seed,
            exact: true,
            ..GraspConfig::default()
        };
        cfg.validate().map_err(err)?;
        let objective = QaoaObjective::new(&inst, &cfg).map_err(err)?;
        let (best, stats) = grasp_els(&objective, &cfg).map_err(err)?;
        let table = objective.table();
        let out = Optimized {
            angles: best.params.flat(),
            score: best.score,
            evaluations: stats.evaluations,
            optimal_ranks: summarize(table).optimal_ranks,
            distribution: describe(table, &best.params, cfg.policy)?,
        };
        serde_json::to_string(&out).map_err(err)
    }
}

#[wasm_bindgen(js_name = costDistribution)]
pub fn cost_distribution(instance: &str, angles: &[f64], policy: &str) -> Result<String, JsError> {
    api::cost_distribution(instance, angles, policy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decodeRank)]
pub fn decode_rank(n: usize, rank: u32, instance: &str) -> Result<String, JsError> {
    api::decode_rank(n, rank.into(), instance).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn optimize(instance: &str, seed: u32, np: usize, ne: usize) -> Result<String, JsError> {
    api::optimize(instance, seed.into(), np, ne).map_err(|e| JsError::new(&e))
}
