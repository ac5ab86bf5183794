//! Statevector simulation of the rank-encoded ansatz.
//!
//! The register holds `q` qubits whose basis index `x = sum_j b_j 2^j` is read
//! as a permutation rank. Each layer applies a diagonal phase separator
//! `exp(-i gamma x)` followed by the transverse-field mixer
//! `exp(-i beta sum_j X_j)`, starting from the uniform superposition. Because
//! the separator's eigenvalue is the rank itself it factors into one phase
//! gate per qubit, so the whole circuit is `q * (2p + 1)` single-qubit gates.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permrank::factorial;
use crate::seed;

/// Largest register simulated (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: u32 = 24;
pub const MIN_CUSTOMERS: usize = 2;
pub const MAX_CUSTOMERS: usize = 12;

/// Reduces an angle into `[0, 2pi)`.
pub fn canonical_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Layer angles; `beta[k]`, `gamma[k]` drive layer `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one layer is required".into(),
            ));
        }
        if beta.len() != gamma.len() {
            return Err(Error::InvalidParameter(format!(
                "{} beta angles but {} gamma angles",
                beta.len(),
                gamma.len()
            )));
        }
        if beta.iter().chain(&gamma).any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(Self {
            beta: beta.into_iter().map(canonical_angle).collect(),
            gamma: gamma.into_iter().map(canonical_angle).collect(),
        })
    }

    /// All-zero angles for `p` layers.
    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    /// Splits a flat `[beta_1..beta_p, gamma_1..gamma_p]` list.
    pub fn from_flat(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() || !angles.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "expected an even, non-zero number of angles, got {}",
                angles.len()
            )));
        }
        let (b, g) = angles.split_at(angles.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }

    pub fn layers(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn flat(&self) -> Vec<f64> {
        self.beta.iter().chain(&self.gamma).copied().collect()
    }
}

/// Smallest `q` with `2^q >= n!`.
pub fn qubit_count(n: usize) -> Result<u32> {
    if !(MIN_CUSTOMERS..=MAX_CUSTOMERS).contains(&n) {
        return Err(Error::UnsupportedSize(format!(
            "customer count {n} outside {MIN_CUSTOMERS}..={MAX_CUSTOMERS}"
        )));
    }
    let states = factorial(n as u64)?;
    Ok(u64::BITS - (states - 1).leading_zeros())
}

/// Single-qubit gates in the circuit: `q` Hadamards, then `q` phase and `q`
/// mixer rotations per layer.
pub fn gate_count(q: u32, layers: usize) -> u64 {
    q as u64 * (2 * layers as u64 + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    q: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Hadamard on every qubit of `|0...0>`.
    pub fn uniform(q: u32) -> Result<Self> {
        check_qubits(q)?;
        let dim = 1usize << q;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            q,
            amps: vec![a; dim],
        })
    }

    /// Computational basis state `|x>`.
    pub fn basis(q: u32, x: u64) -> Result<Self> {
        check_qubits(q)?;
        let dim = 1usize << q;
        if x as usize >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {x} needs more than {q} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { q, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} is not a power of two >= 2"
            )));
        }
        let q = dim.trailing_zeros();
        check_qubits(q)?;
        let s = Self { q, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "state norm {} is not 1",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    pub fn qubits(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Multiplies `|x>` by `exp(-i gamma x)`, as one phase gate per qubit.
    pub fn apply_phase_separator(&mut self, gamma: f64) {
        let gamma = canonical_angle(gamma);
        if gamma == 0.0 {
            return;
        }
        for j in 0..self.q {
            let stride = 1usize << j;
            let phase = Complex64::from_polar(1.0, -gamma * stride as f64);
            for block in self.amps.chunks_exact_mut(2 * stride) {
                for a in &mut block[stride..] {
                    *a *= phase;
                }
            }
        }
    }

    /// Applies `exp(-i beta X)` to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = canonical_angle(beta).sin_cos();
        let off = Complex64::new(0.0, -s);
        for j in 0..self.q {
            let stride = 1usize << j;
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c + x1 * off;
                    *a1 = x0 * off + x1 * c;
                }
            }
        }
    }

    /// `|amplitude_x|^2` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// Draws `shots` computational-basis measurements.
    pub fn sample(&self, shots: u64, rng_seed: u64) -> Result<ShotHistogram> {
        sample_probabilities(&self.probabilities(), shots, rng_seed)
    }
}

fn check_qubits(q: u32) -> Result<()> {
    if q == 0 || q > MAX_QUBITS {
        return Err(Error::UnsupportedSize(format!(
            "qubit count {q} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Uniform superposition over `q` qubits.
pub fn prepare_uniform(q: u32) -> Result<StateVector> {
    StateVector::uniform(q)
}

/// Runs the full ansatz: uniform start, then phase separator and mixer per layer.
pub fn build_state(params: &AnsatzParams, q: u32) -> Result<StateVector> {
    let mut state = StateVector::uniform(q)?;
    for (&beta, &gamma) in params.beta().iter().zip(params.gamma()) {
        state.apply_phase_separator(gamma);
        state.apply_mixer(beta);
    }
    Ok(state)
}

/// Samples outcomes from an explicit probability vector.
pub fn sample_probabilities(probs: &[f64], shots: u64, rng_seed: u64) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::InvalidParameter(
            "at least one shot is required".into(),
        ));
    }
    let dist = WeightedIndex::new(probs)
        .map_err(|e| Error::InvalidParameter(format!("cannot sample state: {e}")))?;
    let mut rng = seed::stream(rng_seed, &[]);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng) as u64).or_insert(0) += 1;
    }
    Ok(ShotHistogram {
        counts,
        total_shots: shots,
    })
}

/// Measurement outcome counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotHistogram {
    counts: BTreeMap<u64, u64>,
    total_shots: u64,
}

impl ShotHistogram {
    pub fn new(counts: BTreeMap<u64, u64>) -> Result<Self> {
        if let Some((x, _)) = counts.iter().find(|(_, &c)| c == 0) {
            return Err(Error::InvalidParameter(format!(
                "outcome {x} has a zero count"
            )));
        }
        let total_shots = counts.values().sum();
        if total_shots == 0 {
            return Err(Error::InvalidParameter("histogram has no shots".into()));
        }
        Ok(Self {
            counts,
            total_shots,
        })
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &(x, c) in pairs {
            *counts.entry(x).or_insert(0) += c;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    /// Outcome observed most often; ties go to the smaller index.
    pub fn mode(&self) -> (u64, u64) {
        self.counts
            .iter()
            .map(|(&x, &c)| (x, c))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("histogram is non-empty")
    }
}
