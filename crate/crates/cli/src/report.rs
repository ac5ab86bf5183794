//! Serialisable documents emitted by the subcommands. Field order is the
//! output key order.

use serde::Serialize;

#[derive(Serialize)]
pub struct InstanceDigest {
    pub source: String,
    pub n: usize,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub layers: usize,
    pub np: usize,
    pub ne: usize,
    pub nd1: usize,
    pub nd2: usize,
    pub shots_search: u64,
    pub shots_final: u64,
    pub delta_init: f64,
    pub delta_floor_init: f64,
    pub delta_shrink: f64,
    pub ls_budget: usize,
    pub criterion: String,
    pub policy: String,
    pub seed: u64,
    pub exact: bool,
    pub reeval: usize,
}

#[derive(Serialize)]
pub struct BestParams {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub search_score: f64,
}

/// A decoded tour.
#[derive(Serialize)]
pub struct Tour {
    pub rank: u64,
    pub perm: Vec<usize>,
    pub perm_one_indexed: Vec<usize>,
    pub cost: f64,
}

#[derive(Serialize)]
pub struct Outcome {
    pub outcome: u64,
    /// Shot count, or probability in exact mode.
    pub weight: f64,
    pub tour: Option<Tour>,
}

#[derive(Serialize)]
pub struct CostRow {
    pub cost: f64,
    pub probability: f64,
}

#[derive(Serialize)]
pub struct CountRow {
    pub outcome: u64,
    pub count: u64,
}

#[derive(Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub criterion: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_mass: Option<f64>,
}

#[derive(Serialize)]
pub struct Timings {
    pub cost_table_ms: f64,
    pub phase_one_ms: f64,
    pub phase_two_ms: f64,
    pub final_ms: f64,
    pub total_ms: f64,
}

#[derive(Serialize)]
pub struct RunReport {
    pub instance: InstanceDigest,
    pub config: ConfigEcho,
    pub qubits: u32,
    pub gate_count: u64,
    pub best_params: BestParams,
    pub phase_one_score: f64,
    pub evaluations: u64,
    /// Most frequent (or most probable) measured outcome.
    pub top_outcome: Outcome,
    /// Cheapest tour among the observed outcomes.
    pub best_sampled: Outcome,
    /// Descending probability.
    pub cost_table: Vec<CostRow>,
    /// Ascending outcome; empty in exact mode.
    pub histogram: Vec<CountRow>,
    pub summary: Summary,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct BruteForceReport {
    pub instance: InstanceDigest,
    pub optimal_cost: f64,
    pub optimal_count: usize,
    pub optima: Vec<Tour>,
    pub distinct_cost_count: usize,
    pub tour_count: u64,
}
