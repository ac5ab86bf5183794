//! Bijections between permutation ranks, factorial-base digit strings
//! (subexceedant functions / Lehmer codes) and permutations.
//!
//! Ranks follow lexicographic order: rank 0 is the identity and rank `n! - 1`
//! is the reversed identity. Digit strings are stored most significant first,
//! `[f(n-1), f(n-2), ..., f(0)]`, with `0 <= f(i) <= i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `k` with `k!` representable in a `u64`.
pub const MAX_FACTORIAL_ARG: u64 = 20;

/// `k!` for `k <= 20`.
pub fn factorial(k: u64) -> Result<u64> {
    if k > MAX_FACTORIAL_ARG {
        return Err(Error::FactorialOverflow(k));
    }
    Ok((1..=k).product())
}

/// A rearrangement of `0..n`, customers 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(elems: Vec<usize>) -> Result<Self> {
        let n = elems.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; n];
        for &e in &elems {
            if e >= n {
                return Err(Error::InvalidPermutation(format!(
                    "element {e} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidPermutation(format!("element {e} repeated")));
            }
        }
        Ok(Self(elems))
    }

    /// Builds a permutation from 1-indexed customer labels.
    pub fn from_one_indexed(labels: &[usize]) -> Result<Self> {
        let elems = labels
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("label 0 in 1-indexed input".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_indexed(&self) -> Vec<usize> {
        self.0.iter().map(|e| e + 1).collect()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0, '[', ']')
    }
}

/// Factorial-base digits `[f(n-1), ..., f(0)]` with `f(i) <= i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SubexceedantFunction(Vec<u64>);

impl SubexceedantFunction {
    pub fn new(digits: Vec<u64>) -> Result<Self> {
        let n = digits.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty digit string".into()));
        }
        for (pos, &digit) in digits.iter().enumerate() {
            let place = n - 1 - pos;
            if digit > place as u64 {
                return Err(Error::DigitOutOfRange { digit, place });
            }
        }
        Ok(Self(digits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Digits, most significant first.
    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    /// `f(i)`, the digit carrying place value `i!`.
    pub fn at_place(&self, i: usize) -> u64 {
        self.0[self.0.len() - 1 - i]
    }
}

impl TryFrom<Vec<u64>> for SubexceedantFunction {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SubexceedantFunction> for Vec<u64> {
    fn from(f: SubexceedantFunction) -> Self {
        f.0
    }
}

impl fmt::Display for SubexceedantFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0, '(', ')')
    }
}

/// Index of a permutation of length `n` in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rank {
    value: u64,
    n: usize,
}

impl Rank {
    pub fn new(value: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedSize("permutation length 0".into()));
        }
        let limit = factorial(n as u64)?;
        if value >= limit {
            return Err(Error::RankOutOfRange {
                rank: value,
                n,
                limit,
            });
        }
        Ok(Self { value, n })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn n(self) -> usize {
        self.n
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Decomposes a rank in the factorial base.
pub fn rank_to_factoradic(x: Rank) -> SubexceedantFunction {
    let n = x.n;
    let mut digits = vec![0u64; n];
    let mut rest = x.value;
    // Place i has radix i + 1; peel digits off the least significant end.
    for place in 1..n {
        let radix = place as u64 + 1;
        digits[n - 1 - place] = rest % radix;
        rest /= radix;
    }
    SubexceedantFunction(digits)
}

/// Inverse of [`rank_to_factoradic`].
pub fn factoradic_to_rank(f: &SubexceedantFunction) -> Result<Rank> {
    let n = f.len();
    let mut value = 0u64;
    for place in 0..n {
        value += f.at_place(place) * factorial_unchecked(place);
    }
    Rank::new(value, n)
}

/// Lehmer code of `sigma`: digit `j` counts later entries smaller than `sigma[j]`.
pub fn perm_to_subexceedant(sigma: &Permutation) -> SubexceedantFunction {
    let s = sigma.as_slice();
    let digits = s
        .iter()
        .enumerate()
        .map(|(j, &v)| s[j + 1..].iter().filter(|&&w| w < v).count() as u64)
        .collect();
    SubexceedantFunction(digits)
}

/// Decodes a Lehmer code: each digit picks (and removes) the digit-th
/// smallest value still available.
pub fn subexceedant_to_perm(f: &SubexceedantFunction) -> Result<Permutation> {
    let n = f.len();
    let mut available: Vec<usize> = (0..n).collect();
    let mut elems = Vec::with_capacity(n);
    for (pos, &digit) in f.digits().iter().enumerate() {
        let idx = digit as usize;
        if idx >= available.len() {
            return Err(Error::DigitOutOfRange {
                digit,
                place: n - 1 - pos,
            });
        }
        elems.push(available.remove(idx));
    }
    Ok(Permutation(elems))
}

pub fn rank_to_perm(x: Rank) -> Permutation {
    subexceedant_to_perm(&rank_to_factoradic(x)).expect("factoradic digits are always in range")
}

pub fn perm_to_rank(sigma: &Permutation) -> Result<Rank> {
    factoradic_to_rank(&perm_to_subexceedant(sigma))
}

fn factorial_unchecked(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn write_list<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    open: char,
    close: char,
) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "{close}")
}
