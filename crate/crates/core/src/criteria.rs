//! From measurement outcomes to tour-cost distributions, and the scalar
//! criteria minimised over the circuit angles.
//!
//! Tails are lower tails: a "decile" criterion looks at the cheapest 10% of
//! the probability mass. Percentiles use the weighted nearest-rank rule, and
//! the threshold atom is kept whole when averaging below a percentile.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{qubit_count, ShotHistogram, StateVector};
use crate::tsp::{CostTable, TourCost};

/// Slack when comparing cumulative weight against a percentile level.
const CUMULATIVE_EPS: f64 = 1e-12;

/// What to do with a measured outcome `x >= n!`, which encodes no tour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum RankPolicy {
    /// Reduce the outcome modulo `n!`.
    #[default]
    Modulo,
    /// Drop the outcome and renormalise over the kept mass.
    Discard,
    /// Score the outcome with a fixed cost.
    Penalty(f64),
}

impl FromStr for RankPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "modulo" => Ok(Self::Modulo),
            "discard" => Ok(Self::Discard),
            _ => match s.strip_prefix("penalty=") {
                Some(c) => c
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|c| c.is_finite())
                    .map(Self::Penalty)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad penalty cost in {s:?}"))),
                None => Err(Error::InvalidParameter(format!(
                    "unknown rank policy {s:?} (expected modulo, discard or penalty=<cost>)"
                ))),
            },
        }
    }
}

impl fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Modulo => write!(f, "modulo"),
            Self::Discard => write!(f, "discard"),
            Self::Penalty(c) => write!(f, "penalty={c}"),
        }
    }
}

/// Where an outcome lands under a policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Resolved {
    Rank(u64),
    Penalty(f64),
    Dropped,
}

impl RankPolicy {
    pub fn resolve(self, outcome: u64, num_ranks: u64) -> Resolved {
        if outcome < num_ranks {
            return Resolved::Rank(outcome);
        }
        match self {
            Self::Modulo => Resolved::Rank(outcome % num_ranks),
            Self::Discard => Resolved::Dropped,
            Self::Penalty(c) => Resolved::Penalty(c),
        }
    }

    fn validate(self, table: &CostTable) -> Result<()> {
        if let Self::Penalty(c) = self {
            if c < table.max_cost() {
                return Err(Error::InvalidParameter(format!(
                    "penalty cost {c} is below the largest tour cost {}",
                    table.max_cost()
                )));
            }
        }
        Ok(())
    }
}

/// Probability-weighted tour costs, ascending by cost with distinct costs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostDistribution {
    entries: Vec<(TourCost, f64)>,
}

impl CostDistribution {
    /// Merges equal costs, drops zero weights and normalises to total weight 1.
    pub fn from_weighted<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TourCost, f64)>,
    {
        let mut raw: Vec<(TourCost, f64)> = pairs.into_iter().filter(|&(_, w)| w > 0.0).collect();
        if raw.iter().any(|&(c, w)| !c.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidParameter("non-finite cost or weight".into()));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut entries: Vec<(TourCost, f64)> = Vec::with_capacity(raw.len());
        for (c, w) in raw {
            match entries.last_mut() {
                Some((last, acc)) if *last == c => *acc += w,
                _ => entries.push((c, w)),
            }
        }
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if entries.is_empty() || total <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        for e in &mut entries {
            e.1 /= total;
        }
        Ok(Self { entries })
    }

    pub fn point_mass(cost: TourCost) -> Self {
        Self {
            entries: vec![(cost, 1.0)],
        }
    }

    pub fn entries(&self) -> &[(TourCost, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability assigned to exactly `cost` (0 if absent).
    pub fn mass_at(&self, cost: TourCost) -> f64 {
        self.entries
            .iter()
            .find(|e| e.0 == cost)
            .map_or(0.0, |e| e.1)
    }

    pub fn min_cost(&self) -> TourCost {
        self.entries[0].0
    }

    pub fn max_cost(&self) -> TourCost {
        self.entries[self.entries.len() - 1].0
    }

    /// Same weights, every cost moved by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|&(c, w)| (c + delta, w)).collect(),
        }
    }
}

/// Maps measured outcomes to tour costs through the rank decoding.
pub fn histogram_to_costs(
    h: &ShotHistogram,
    table: &CostTable,
    policy: RankPolicy,
) -> Result<CostDistribution> {
    policy.validate(table)?;
    let num_ranks = table.len() as u64;
    let q = qubit_count(table.n())?;
    let pairs = h
        .counts()
        .iter()
        .map(|(&x, &count)| {
            if x >> q != 0 {
                return Err(Error::InvalidParameter(format!(
                    "outcome {x} does not fit in {q} qubits"
                )));
            }
            Ok(match policy.resolve(x, num_ranks) {
                Resolved::Rank(r) => Some((table.cost(r), count as f64)),
                Resolved::Penalty(c) => Some((c, count as f64)),
                Resolved::Dropped => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CostDistribution::from_weighted(pairs.into_iter().flatten())
}

/// Noise-free counterpart of sampling: exact probabilities aggregated by cost.
pub fn exact_distribution(
    state: &StateVector,
    table: &CostTable,
    policy: RankPolicy,
) -> Result<CostDistribution> {
    exact_distribution_from_probs(&state.probabilities(), table, policy)
}

pub fn exact_distribution_from_probs(
    probs: &[f64],
    table: &CostTable,
    policy: RankPolicy,
) -> Result<CostDistribution> {
    policy.validate(table)?;
    let q = qubit_count(table.n())?;
    if probs.len() != 1usize << q {
        return Err(Error::LengthMismatch {
            expected: 1usize << q,
            actual: probs.len(),
        });
    }
    let num_ranks = table.len() as u64;
    let distinct = table.distinct_costs();
    let mut by_class = vec![0.0f64; distinct.len()];
    let mut penalty_mass = 0.0;
    for (x, &p) in probs.iter().enumerate() {
        match policy.resolve(x as u64, num_ranks) {
            Resolved::Rank(r) => by_class[table.cost_class(r)] += p,
            Resolved::Penalty(_) => penalty_mass += p,
            Resolved::Dropped => {}
        }
    }
    let mut pairs: Vec<(TourCost, f64)> = distinct.iter().copied().zip(by_class).collect();
    if let RankPolicy::Penalty(c) = policy {
        pairs.push((c, penalty_mass));
    }
    CostDistribution::from_weighted(pairs)
}

fn check_level(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "percentile level {q} outside (0, 1)"
        )))
    }
}

pub fn mean(dist: &CostDistribution) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(dist.entries.iter().map(|&(c, w)| c * w).sum())
}

/// Smallest cost whose cumulative weight reaches `q`.
pub fn percentile(dist: &CostDistribution, q: f64) -> Result<f64> {
    check_level(q)?;
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut cumulative = 0.0;
    for &(c, w) in &dist.entries {
        cumulative += w;
        if cumulative + CUMULATIVE_EPS >= q {
            return Ok(c);
        }
    }
    Ok(dist.max_cost())
}

/// Mean of the distribution restricted to costs at or below the `q` percentile.
pub fn mean_below_percentile(dist: &CostDistribution, q: f64) -> Result<f64> {
    let threshold = percentile(dist, q)?;
    let (sum, mass) = dist
        .entries
        .iter()
        .take_while(|e| e.0 <= threshold)
        .fold((0.0, 0.0), |(s, m), &(c, w)| (s + c * w, m + w));
    Ok(sum / mass)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CriterionKind {
    Mean,
    Percentile(f64),
    MeanBelowPercentile(f64),
}

impl CriterionKind {
    pub fn apply(self, dist: &CostDistribution) -> Result<f64> {
        match self {
            Self::Mean => mean(dist),
            Self::Percentile(q) => percentile(dist, q),
            Self::MeanBelowPercentile(q) => mean_below_percentile(dist, q),
        }
    }
}

/// Weighted sum of criterion terms.
///
/// Text form: terms separated by `+` or `,`; each term is `mean`, `p<q>` or
/// `mbp<q>`, optionally followed by `*<weight>`. `mbp0.10+mean` is the
/// bottom-decile mean plus the overall mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    terms: Vec<(CriterionKind, f64)>,
}

impl CriterionSpec {
    pub fn new(terms: Vec<(CriterionKind, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidCriterion(
                "at least one term is required".into(),
            ));
        }
        for &(kind, w) in &terms {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidCriterion(format!(
                    "term weight {w} must be positive"
                )));
            }
            if let CriterionKind::Percentile(q) | CriterionKind::MeanBelowPercentile(q) = kind {
                check_level(q).map_err(|e| Error::InvalidCriterion(e.to_string()))?;
            }
        }
        Ok(Self { terms })
    }

    /// Bottom-decile mean plus overall mean, each with weight 1.
    pub fn decile_plus_mean() -> Self {
        Self {
            terms: vec![
                (CriterionKind::MeanBelowPercentile(0.10), 1.0),
                (CriterionKind::Mean, 1.0),
            ],
        }
    }

    pub fn mean_only() -> Self {
        Self {
            terms: vec![(CriterionKind::Mean, 1.0)],
        }
    }

    pub fn terms(&self) -> &[(CriterionKind, f64)] {
        &self.terms
    }
}

impl Default for CriterionSpec {
    fn default() -> Self {
        Self::decile_plus_mean()
    }
}

impl FromStr for CriterionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::InvalidCriterion(format!("cannot parse term {t:?}"));
        let terms = s
            .split(['+', ','])
            .map(str::trim)
            .map(|t| {
                let (body, weight) = match t.split_once('*') {
                    Some((b, w)) => (b.trim(), w.trim().parse::<f64>().map_err(|_| bad(t))?),
                    None => (t, 1.0),
                };
                let kind = if body == "mean" {
                    CriterionKind::Mean
                } else if let Some(q) = body.strip_prefix("mbp") {
                    CriterionKind::MeanBelowPercentile(q.parse().map_err(|_| bad(t))?)
                } else if let Some(q) = body.strip_prefix('p') {
                    CriterionKind::Percentile(q.parse().map_err(|_| bad(t))?)
                } else {
                    return Err(bad(t));
                };
                Ok((kind, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }
}

impl fmt::Display for CriterionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (kind, w)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match kind {
                CriterionKind::Mean => write!(f, "mean")?,
                CriterionKind::Percentile(q) => write!(f, "p{q}")?,
                CriterionKind::MeanBelowPercentile(q) => write!(f, "mbp{q}")?,
            }
            if *w != 1.0 {
                write!(f, "*{w}")?;
            }
        }
        Ok(())
    }
}

/// `sum_terms weight * term(dist)`.
pub fn evaluate(dist: &CostDistribution, spec: &CriterionSpec) -> Result<f64> {
    spec.terms
        .iter()
        .try_fold(0.0, |acc, &(kind, w)| Ok(acc + w * kind.apply(dist)?))
}
