//! Independent reference implementations used only by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Next permutation in lexicographic order, `false` once the last one is reached.
pub fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order; the index is the rank.
pub fn lexicographic_perms(n: usize) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = (0..n).collect();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// Rank by counting, for each position, smaller unused values times the
/// number of completions.
pub fn counting_rank(perm: &[usize]) -> u64 {
    let n = perm.len();
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    (0..n)
        .map(|j| perm[j + 1..].iter().filter(|&&b| b < perm[j]).count() as u64 * fact(n - 1 - j))
        .sum()
}

pub fn closed_tour(perm: &[usize], d: &[Vec<f64>]) -> f64 {
    let n = perm.len();
    (0..n).map(|i| d[perm[i]][perm[(i + 1) % n]]).sum()
}

/// Sorted cost of every tour, by plain enumeration.
pub fn all_tour_costs(d: &[Vec<f64>]) -> Vec<f64> {
    lexicographic_perms(d.len())
        .iter()
        .map(|p| closed_tour(p, d))
        .collect()
}

pub fn qubits_for(n: usize) -> u32 {
    let f: u64 = (1..=n as u64).product();
    (0..64).find(|&q| 1u64 << q >= f).unwrap()
}

pub type Matrix = Vec<Vec<Complex64>>;

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `exp(-i gamma x)` on the computational basis.
pub fn phase_unitary(q: u32, gamma: f64) -> Matrix {
    let dim = 1usize << q;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (x, row) in m.iter_mut().enumerate() {
        row[x] = Complex64::from_polar(1.0, -gamma * x as f64);
    }
    m
}

/// `exp(-i beta X)` on every qubit, as an explicit Kronecker product.
pub fn mixer_unitary(q: u32, beta: f64) -> Matrix {
    let (c, s) = (beta.cos(), beta.sin());
    let rx = vec![
        vec![Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        vec![Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ];
    (1..q).fold(rx.clone(), |acc, _| kron(&acc, &rx))
}

/// Dense-matrix ansatz state: `prod_l U_B(beta_l) U_C(gamma_l)` on `|+>^q`.
pub fn dense_state(q: u32, beta: &[f64], gamma: &[f64]) -> Vec<Complex64> {
    let dim = 1usize << q;
    let mut u: Matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for (&b, &g) in beta.iter().zip(gamma) {
        u = matmul(&phase_unitary(q, g), &u);
        u = matmul(&mixer_unitary(q, b), &u);
    }
    let amp = 1.0 / (dim as f64).sqrt();
    (0..dim)
        .map(|i| u[i].iter().map(|z| z * amp).sum())
        .collect()
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
