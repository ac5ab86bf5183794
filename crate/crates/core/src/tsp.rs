//! Travelling salesman instances, closed-tour costs and the exhaustive
//! enumeration used as ground truth.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permrank::{factorial, rank_to_perm, Permutation, Rank};

/// Cost of a closed tour, in the instance's distance units.
pub type TourCost = f64;

/// Largest instance [`brute_force`] and [`CostTable`] will enumerate.
pub const MAX_ENUMERATION_N: usize = 10;

/// `n` customers with a dense, possibly asymmetric distance matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TspInstance {
    n: usize,
    /// Row-major `n * n`; `d[i * n + j]` is the distance from `i` to `j`.
    d: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceFormat {
    Csv,
    Json,
}

impl InstanceFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

#[derive(Deserialize)]
struct JsonInstance {
    n: usize,
    d: Vec<Vec<f64>>,
}

impl TspInstance {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInstance("no customers".into()));
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "matrix is not square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInstance(format!(
                        "entry ({i},{j}) is not finite"
                    )));
                }
                if v < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "negative distance {v} at ({i},{j})"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "nonzero diagonal {v} at ({i},{i})"
                    )));
                }
                d.push(v);
            }
        }
        Ok(Self { n, d })
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(lineno, line)| {
                line.split(',')
                    .map(|cell| {
                        cell.trim().parse::<f64>().map_err(|_| {
                            Error::Parse(format!(
                                "line {}: cannot parse {:?} as a number",
                                lineno + 1,
                                cell.trim()
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: JsonInstance =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.n != raw.d.len() {
            return Err(Error::InvalidInstance(format!(
                "declared n = {} but matrix has {} rows",
                raw.n,
                raw.d.len()
            )));
        }
        Self::new(raw.d)
    }

    pub fn parse(text: &str, format: InstanceFormat) -> Result<Self> {
        match format {
            InstanceFormat::Csv => Self::from_csv_str(text),
            InstanceFormat::Json => Self::from_json_str(text),
        }
    }

    pub fn load(path: &Path, format: InstanceFormat) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text, format)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn distance(&self, from: usize, to: usize) -> f64 {
        self.d[from * self.n + to]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.distance(i, j) == self.distance(j, i)))
    }

    /// JSON form `{"n": .., "d": [[..], ..]}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "n": self.n, "d": self.rows() }).to_string()
    }
}

/// Closed-tour cost, including the return edge from the last customer to the first.
pub fn tour_cost(sigma: &Permutation, inst: &TspInstance) -> Result<TourCost> {
    if sigma.len() != inst.n {
        return Err(Error::LengthMismatch {
            expected: inst.n,
            actual: sigma.len(),
        });
    }
    Ok(closed_tour(sigma.as_slice(), inst))
}

fn closed_tour(s: &[usize], inst: &TspInstance) -> TourCost {
    let open: f64 = s.windows(2).map(|w| inst.distance(w[0], w[1])).sum();
    open + inst.distance(s[s.len() - 1], s[0])
}

/// Cost of the tour encoded by rank `x`.
pub fn rank_cost(x: Rank, inst: &TspInstance) -> Result<TourCost> {
    tour_cost(&rank_to_perm(x), inst)
}

/// Tour cost for every rank of an instance, indexed by rank.
#[derive(Clone, Debug)]
pub struct CostTable {
    n: usize,
    costs: Vec<TourCost>,
    /// Distinct costs, ascending.
    distinct: Vec<TourCost>,
    /// `class[rank]` indexes `distinct`.
    class: Vec<u32>,
}

impl CostTable {
    pub fn build(inst: &TspInstance) -> Result<Self> {
        let n = inst.n();
        if n > MAX_ENUMERATION_N {
            return Err(Error::UnsupportedSize(format!(
                "enumerating {n}! tours exceeds the budget (n <= {MAX_ENUMERATION_N})"
            )));
        }
        let total = factorial(n as u64)?;
        let cost_of = |x: u64| {
            let perm = rank_to_perm(Rank::new(x, n).expect("rank below n!"));
            closed_tour(perm.as_slice(), inst)
        };
        #[cfg(feature = "parallel")]
        let costs: Vec<TourCost> = {
            use rayon::prelude::*;
            (0..total).into_par_iter().map(cost_of).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let costs: Vec<TourCost> = (0..total).map(cost_of).collect();
        let mut distinct = costs.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let class = costs
            .iter()
            .map(|c| distinct.partition_point(|d| d < c) as u32)
            .collect();
        Ok(Self {
            n,
            costs,
            distinct,
            class,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ranks, `n!`.
    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn cost(&self, rank: u64) -> TourCost {
        self.costs[rank as usize]
    }

    pub fn costs(&self) -> &[TourCost] {
        &self.costs
    }

    pub fn max_cost(&self) -> TourCost {
        *self.distinct.last().expect("at least one tour")
    }

    pub fn distinct_costs(&self) -> &[TourCost] {
        &self.distinct
    }

    /// Position of `rank`'s cost within [`Self::distinct_costs`].
    pub fn cost_class(&self, rank: u64) -> usize {
        self.class[rank as usize] as usize
    }
}

/// Exact optimum and cost histogram over all `n!` tours.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceSummary {
    pub optimal_cost: TourCost,
    /// Every rank attaining the optimum, ascending.
    pub optimal_ranks: Vec<u64>,
    pub distinct_cost_count: usize,
    /// `(cost, number of tours)`, ascending by cost; counts sum to `n!`.
    pub cost_frequency: Vec<(TourCost, u64)>,
}

pub fn brute_force(inst: &TspInstance) -> Result<BruteForceSummary> {
    Ok(summarize(&CostTable::build(inst)?))
}

pub fn summarize(table: &CostTable) -> BruteForceSummary {
    let mut sorted = table.costs().to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut cost_frequency: Vec<(TourCost, u64)> = Vec::new();
    for c in sorted {
        match cost_frequency.last_mut() {
            Some((last, count)) if *last == c => *count += 1,
            _ => cost_frequency.push((c, 1)),
        }
    }
    let optimal_cost = cost_frequency[0].0;
    let optimal_ranks = table
        .costs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == optimal_cost)
        .map(|(r, _)| r as u64)
        .collect();
    BruteForceSummary {
        optimal_cost,
        optimal_ranks,
        distinct_cost_count: cost_frequency.len(),
        cost_frequency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tour_cost_examples() {
        let six = instances::six_customers();
        let eight = instances::eight_customers();
        assert_eq!(tour_cost(&perm(&[0, 3, 2, 1, 5, 4]), &six).unwrap(), 223.0);
        assert_eq!(tour_cost(&Permutation::identity(8), &eight).unwrap(), 108.0);
        let one = TspInstance::new(vec![vec![0.0]]).unwrap();
        assert_eq!(tour_cost(&Permutation::identity(1), &one).unwrap(), 0.0);
        assert_eq!(
            tour_cost(&Permutation::identity(5), &six),
            Err(Error::LengthMismatch {
                expected: 6,
                actual: 5
            })
        );
    }

    #[test]
    fn rank_cost_examples() {
        let six = instances::six_customers();
        let eight = instances::eight_customers();
        assert_eq!(rank_cost(Rank::new(701, 6).unwrap(), &six).unwrap(), 223.0);
        assert_eq!(rank_cost(Rank::new(55, 6).unwrap(), &six).unwrap(), 223.0);
        assert_eq!(rank_cost(Rank::new(0, 8).unwrap(), &eight).unwrap(), 108.0);
    }

    #[test]
    fn directed_cost_uses_row_to_column() {
        let inst = TspInstance::new(vec![
            vec![0.0, 1.0, 100.0],
            vec![100.0, 0.0, 2.0],
            vec![4.0, 100.0, 0.0],
        ])
        .unwrap();
        assert!(!inst.is_symmetric());
        assert_eq!(tour_cost(&perm(&[0, 1, 2]), &inst).unwrap(), 7.0);
        assert_eq!(tour_cost(&perm(&[0, 2, 1]), &inst).unwrap(), 300.0);
    }

    #[test]
    fn brute_force_two_customers() {
        let inst = TspInstance::new(vec![vec![0.0, 7.0], vec![7.0, 0.0]]).unwrap();
        let s = brute_force(&inst).unwrap();
        assert_eq!(s.optimal_cost, 14.0);
        assert_eq!(s.optimal_ranks, vec![0, 1]);
        assert_eq!(s.distinct_cost_count, 1);
    }

    #[test]
    fn brute_force_budget() {
        let rows = vec![vec![0.0; 11]; 11];
        assert!(matches!(
            brute_force(&TspInstance::new(rows).unwrap()),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn six_customer_optima_match_listing() {
        let s = brute_force(&instances::six_customers()).unwrap();
        assert_eq!(s.optimal_cost, 223.0);
        assert_eq!(
            s.optimal_ranks,
            vec![55, 90, 150, 235, 286, 291, 376, 419, 494, 585, 632, 701]
        );
        assert_eq!(s.distinct_cost_count, 53);
        assert_eq!(s.cost_frequency.iter().map(|(_, c)| c).sum::<u64>(), 720);
    }

    #[test]
    fn validation_diagnostics_are_distinct() {
        let non_square = TspInstance::from_csv_str("0,1\n1,0,3\n").unwrap_err();
        let negative = TspInstance::from_csv_str("0,-1\n1,0\n").unwrap_err();
        let diagonal = TspInstance::from_csv_str("1,1\n1,0\n").unwrap_err();
        let malformed = TspInstance::from_csv_str("0,x\n1,0\n").unwrap_err();
        let msgs: Vec<String> = [&non_square, &negative, &diagonal, &malformed]
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert!(msgs[0].contains("not square"));
        assert!(msgs[1].contains("negative"));
        assert!(msgs[2].contains("diagonal"));
        assert!(matches!(malformed, Error::Parse(_)));
    }

    #[test]
    fn csv_and_json_agree() {
        let six = instances::six_customers();
        let again = TspInstance::from_json_str(&six.to_json()).unwrap();
        assert_eq!(six, again);
        assert!(TspInstance::from_json_str(r#"{"n": 3, "d": [[0,1],[1,0]]}"#).is_err());
        let zeros = TspInstance::from_csv_str("0,0,0\n0,0,0\n0,0,0\n").unwrap();
        assert_eq!(brute_force(&zeros).unwrap().optimal_ranks.len(), 6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn symmetric_instance(n: usize) -> impl Strategy<Value = TspInstance> {
            proptest::collection::vec(0u32..1000, n * n).prop_map(move |vals| {
                let mut rows = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..i {
                        let v = vals[i * n + j] as f64;
                        rows[i][j] = v;
                        rows[j][i] = v;
                    }
                }
                TspInstance::new(rows).unwrap()
            })
        }

        proptest! {
            #[test]
            fn rotation_and_reversal_invariant(
                inst in symmetric_instance(7),
                order in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(),
                shift in 0usize..7,
            ) {
                let base = tour_cost(&Permutation::new(order.clone()).unwrap(), &inst).unwrap();
                let mut rotated = order.clone();
                rotated.rotate_left(shift);
                let mut reversed = order;
                reversed.reverse();
                prop_assert_eq!(base, tour_cost(&Permutation::new(rotated).unwrap(), &inst).unwrap());
                prop_assert_eq!(base, tour_cost(&Permutation::new(reversed).unwrap(), &inst).unwrap());
            }

            #[test]
            fn histogram_counts_sum_to_factorial(inst in symmetric_instance(5)) {
                let s = brute_force(&inst).unwrap();
                prop_assert_eq!(s.cost_frequency.iter().map(|(_, c)| c).sum::<u64>(), 120);
                for &r in &s.optimal_ranks {
                    prop_assert_eq!(rank_cost(Rank::new(r, 5).unwrap(), &inst).unwrap(), s.optimal_cost);
                }
            }
        }
    }
}
