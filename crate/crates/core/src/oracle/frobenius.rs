//! Character-sum route to the same factorization counts.
//!
//! The number of `r`-tuples of transpositions in `S_K` with product `σ` is
//! `(1/K!) Σ_λ dim(λ) χ^λ(σ) c(λ)^r`, where `c(λ)` is the content sum of
//! `λ` (the central character of the transposition class). Characters come
//! from the Murnaghan–Nakayama rule on beta-sets. Transitivity is then
//! imposed by inclusion–exclusion over the orbit containing the first
//! cycle of `σ`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::FactorizationQuery;
use crate::numeric::{binomial, factorial, Profile};

/// Partitions of `n` as weakly decreasing part lists.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn content_sum(shape: &[u32]) -> i64 {
    shape
        .iter()
        .enumerate()
        .map(|(row, &len)| (0..len as i64).map(|col| col - row as i64).sum::<i64>())
        .sum()
}

/// Number of standard Young tableaux, by the hook length formula.
pub fn dimension(shape: &[u32]) -> BigInt {
    let n: u32 = shape.iter().sum();
    let mut hooks = BigInt::one();
    for (row, &len) in shape.iter().enumerate() {
        for col in 0..len as usize {
            let arm = len as usize - col - 1;
            let leg = shape[row + 1..].iter().filter(|&&l| l as usize > col).count();
            hooks *= arm + leg + 1;
        }
    }
    factorial(n) / hooks
}

/// Irreducible character values `χ^λ(ρ)` with memoisation.
#[derive(Default)]
pub struct CharacterTable {
    memo: HashMap<(Vec<u32>, Vec<u32>), BigInt>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ^shape` on the class with cycle lengths `class` (any order).
    pub fn value(&mut self, shape: &[u32], class: &[u32]) -> BigInt {
        let mut class = class.to_vec();
        class.sort_unstable_by(|a, b| b.cmp(a));
        self.mn(shape.to_vec(), class)
    }

    fn mn(&mut self, shape: Vec<u32>, class: Vec<u32>) -> BigInt {
        if class.is_empty() {
            return if shape.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        if let Some(v) = self.memo.get(&(shape.clone(), class.clone())) {
            return v.clone();
        }
        let hook = class[0] as i64;
        let rest = class[1..].to_vec();
        let len = shape.len();
        let beta: Vec<i64> = shape
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 + (len - 1 - i) as i64)
            .collect();
        let mut total = BigInt::zero();
        for (idx, &b) in beta.iter().enumerate() {
            let moved = b - hook;
            if moved < 0 || beta.contains(&moved) {
                continue;
            }
            let between = beta.iter().filter(|&&x| moved < x && x < b).count();
            let mut next = beta.clone();
            next[idx] = moved;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let reduced: Vec<u32> = next
                .iter()
                .enumerate()
                .map(|(i, &x)| (x - (len - 1 - i) as i64) as u32)
                .filter(|&p| p > 0)
                .collect();
            let v = self.mn(reduced, rest.clone());
            if between % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert((shape, class), total.clone());
        total
    }
}

/// Caches all-factorization and transitive counts keyed by cycle type.
#[derive(Default)]
pub struct FrobeniusCounter {
    characters: CharacterTable,
    irreps: HashMap<u32, Vec<(Vec<u32>, BigInt, i64)>>,
    all: HashMap<(Vec<u32>, u32), BigInt>,
    connected: HashMap<(Vec<u32>, u32), BigInt>,
}

impl FrobeniusCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// All `r`-tuples of transpositions with product of the given cycle type.
    pub fn count_all(&mut self, cycle_type: &[u32], r: u32) -> BigInt {
        let mut key = cycle_type.to_vec();
        key.sort_unstable();
        if let Some(v) = self.all.get(&(key.clone(), r)) {
            return v.clone();
        }
        let points: u32 = key.iter().sum();
        let value = if points == 0 {
            if r == 0 { BigInt::one() } else { BigInt::zero() }
        } else {
            let irreps = self
                .irreps
                .entry(points)
                .or_insert_with(|| {
                    partitions(points)
                        .into_iter()
                        .map(|s| {
                            let d = dimension(&s);
                            let c = content_sum(&s);
                            (s, d, c)
                        })
                        .collect()
                })
                .clone();
            let mut sum = BigInt::zero();
            for (shape, dim, content) in &irreps {
                let chi = self.characters.value(shape, &key);
                if chi.is_zero() {
                    continue;
                }
                sum += dim * chi * BigInt::from(*content).pow(r);
            }
            let (q, rem) = sum.div_rem(&factorial(points));
            assert!(rem.is_zero(), "character sum must be divisible by K!");
            q
        };
        self.all.insert((key, r), value.clone());
        value
    }

    /// `r`-tuples with the given product whose generated group is transitive.
    pub fn count_transitive(&mut self, cycle_type: &[u32], r: u32) -> BigInt {
        let mut key = cycle_type.to_vec();
        key.sort_unstable();
        if let Some(v) = self.connected.get(&(key.clone(), r)) {
            return v.clone();
        }
        let value = if key.len() == 1 && key[0] == 1 {
            if r == 0 { BigInt::one() } else { BigInt::zero() }
        } else {
            let mut value = self.count_all(&key, r);
            let others = key.len() - 1;
            // orbit of the first cycle: cycle 0 plus a proper subset of the rest
            for mask in 0u32..(1 << others) - 1 {
                let (mut inside, mut outside) = (vec![key[0]], Vec::new());
                for (j, &c) in key[1..].iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        inside.push(c);
                    } else {
                        outside.push(c);
                    }
                }
                for r1 in 0..=r {
                    let conn = self.count_transitive(&inside, r1);
                    if conn.is_zero() {
                        continue;
                    }
                    let rest = self.count_all(&outside, r - r1);
                    value -= binomial(r, r1) * conn * rest;
                }
            }
            value
        };
        self.connected.insert((key, r), value.clone());
        value
    }

    pub fn count(&mut self, query: &FactorizationQuery) -> BigInt {
        let cycle_type = query.sigma.cycle_type();
        if query.transitive_only {
            self.count_transitive(cycle_type.parts(), query.factors)
        } else {
            self.count_all(cycle_type.parts(), query.factors)
        }
    }
}

pub fn count_factorizations_frobenius(query: &FactorizationQuery) -> BigInt {
    FrobeniusCounter::new().count(query)
}

/// Convenience for callers that only have a profile.
pub fn transitive_count(profile: &Profile, r: u32) -> BigInt {
    FrobeniusCounter::new().count_transitive(profile.parts(), r)
}
