//! Partition counting: colored partitions, congruence-restricted and
//! regularity-restricted counts, Kostka numbers, and traceless dominant
//! integer vectors. All counts are exact big integers.

use crate::exactmat::Rat;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

/// Lazily grown tables of colored partition counts.
///
/// `p_colored(r, n)` counts partitions of `n` where every part comes in `r`
/// colors, i.e. the coefficient of `q^n` in `prod_i (1 - q^i)^{-r}`.
#[derive(Debug, Default)]
pub struct PartitionCounter {
    tables: BTreeMap<u32, Vec<BigUint>>,
}

impl PartitionCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn p_colored(&mut self, colors: u32, n: u64) -> BigUint {
        let n = n as usize;
        let table = self.tables.entry(colors).or_default();
        if table.len() <= n {
            *table = build_colored_table(colors, n);
        }
        table[n].clone()
    }

    /// Same, but returns 0 for non-integer or negative arguments.
    pub fn p_colored_rat(&mut self, colors: u32, n: &Rat) -> BigUint {
        if !n.is_integer() {
            return BigUint::zero();
        }
        match n.to_integer().to_u64() {
            Some(v) => self.p_colored(colors, v),
            None => BigUint::zero(),
        }
    }

    /// Number of `components`-tuples of partitions with total size `n`.
    pub fn multipartition_count(&mut self, components: u32, n: u64) -> BigUint {
        self.p_colored(components, n)
    }
}

fn build_colored_table(colors: u32, n: usize) -> Vec<BigUint> {
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in 1..=n {
        for _ in 0..colors {
            for v in part..=n {
                let add = table[v - part].clone();
                table[v] += add;
            }
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartsMode {
    DivisibleBy,
    NotDivisibleBy,
}

/// Partitions of `n` using only parts restricted modulo `modulus`.
pub fn count_parts_mod(n: u64, modulus: u64, mode: PartsMode) -> BigUint {
    assert!(modulus >= 1);
    let n = n as usize;
    let m = modulus as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in 1..=n {
        let divisible = part % m == 0;
        let allowed = match mode {
            PartsMode::DivisibleBy => divisible,
            PartsMode::NotDivisibleBy => !divisible,
        };
        if !allowed {
            continue;
        }
        for v in part..=n {
            let add = table[v - part].clone();
            table[v] += add;
        }
    }
    table[n].clone()
}

/// Partitions of `n` in which no part repeats `modulus` or more times.
pub fn m_regular_count(n: u64, modulus: u64) -> BigUint {
    assert!(modulus >= 1);
    let n = n as usize;
    let m = modulus as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in 1..=n {
        let mut next = vec![BigUint::zero(); n + 1];
        for v in 0..=n {
            if table[v].is_zero() {
                continue;
            }
            let mut reps = 0;
            while reps < m && v + reps * part <= n {
                next[v + reps * part] += &table[v];
                reps += 1;
            }
        }
        table = next;
    }
    table[n].clone()
}

/// Kostka number: semistandard tableaux of the given shape and content.
///
/// Shape must be weakly decreasing; entries of either vector may be negative,
/// in which case both are shifted together (the count is shift-invariant).
pub fn kostka(shape: &[i64], content: &[i64]) -> Result<BigUint> {
    if shape.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidWeight("kostka shape must be weakly decreasing".into()));
    }
    if shape.len() != content.len() {
        return Err(Error::DimensionMismatch("kostka: shape and content lengths differ".into()));
    }
    if shape.iter().sum::<i64>() != content.iter().sum::<i64>() {
        return Err(Error::InvalidWeight("kostka: shape and content have different sizes".into()));
    }
    let shift = shape.iter().chain(content).copied().min().unwrap_or(0).min(0);
    let shape: Vec<i64> = shape.iter().map(|&v| v - shift).collect();
    let content: Vec<i64> = content.iter().map(|&v| v - shift).collect();
    if content.iter().any(|&c| c < 0) {
        return Ok(BigUint::zero());
    }
    let mut memo = HashMap::new();
    Ok(kostka_rec(&shape, &content, content.len(), &mut memo))
}

fn kostka_rec(
    shape: &[i64],
    content: &[i64],
    depth: usize,
    memo: &mut HashMap<(Vec<i64>, usize), BigUint>,
) -> BigUint {
    if depth == 0 {
        return if shape.iter().all(|&v| v == 0) { BigUint::one() } else { BigUint::zero() };
    }
    let key = (shape.to_vec(), depth);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    // remove a horizontal strip of size content[depth-1] carrying the largest entry
    let strip = content[depth - 1];
    let mut total = BigUint::zero();
    let mut inner = shape.to_vec();
    enumerate_strips(shape, strip, 0, &mut inner, &mut |inner| {
        total += kostka_rec(inner, content, depth - 1, memo);
    });
    memo.insert(key, total.clone());
    total
}

fn enumerate_strips(
    shape: &[i64],
    remaining: i64,
    row: usize,
    inner: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    if row == shape.len() {
        if remaining == 0 {
            emit(inner);
        }
        return;
    }
    // inner[row] ranges over values keeping inner a partition nested in shape
    // with shape/inner a horizontal strip: shape[row+1] <= inner[row] <= shape[row]
    let lo = shape.get(row + 1).copied().unwrap_or(0).min(shape[row]);
    for v in lo..=shape[row] {
        let removed = shape[row] - v;
        if removed > remaining {
            continue;
        }
        inner[row] = v;
        enumerate_strips(shape, remaining - removed, row + 1, inner, emit);
    }
    inner[row] = shape[row];
}

/// Weakly decreasing integer vectors of the given length with entry sum zero
/// and squared euclidean norm `norm_sq`, in lexicographically decreasing order.
pub fn traceless_dominants(len: usize, norm_sq: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    traceless_rec(len, 0, norm_sq as i64, isqrt(norm_sq as i64), &mut cur, &mut out);
    out
}

/// Largest integer whose square does not exceed `n` (0 for negative input).
pub fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = 0i64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn traceless_rec(
    len: usize,
    sum: i64,
    norm_left: i64,
    max_entry: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if cur.len() == len {
        if sum == 0 && norm_left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let slots = (len - cur.len()) as i64;
    let b = isqrt(norm_left);
    for v in (-b..=max_entry.min(b)).rev() {
        // remaining entries are all <= v and >= -b, so the final sum is bounded
        let rest = slots - 1;
        let s = sum + v;
        if s + rest * v < 0 || s - rest * b > 0 {
            continue;
        }
        cur.push(v);
        traceless_rec(len, s, norm_left - v * v, v, cur, out);
        cur.pop();
    }
}

/// All partitions of `n` as weakly decreasing part lists (test oracle helper).
pub fn partitions_of(n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        let mut part = max.min(n);
        while part >= 1 {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
            part -= 1;
        }
    }
    rec(n, n.max(1), &mut cur, &mut out);
    out
}
