use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::factorial;
use crate::error::{Error, Result};

/// Pole orders `(k_1, ..., k_n)` over infinity, stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    parts: Vec<u32>,
}

impl Profile {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.is_empty() {
            return Err(Error::InvalidProfile("profile must have at least one part".into()));
        }
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::InvalidProfile("every part must be positive".into()));
        }
        parts.sort_unstable();
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts `n`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Covering degree `K = k_1 + ... + k_n`.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Lengths of runs of equal parts.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let j = self.parts[i..].iter().take_while(|&&p| p == self.parts[i]).count();
            out.push(j as u32);
            i += j;
        }
        out
    }

    /// `prod_j m_j!` over the multiplicities of distinct part values.
    pub fn aut_count(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, m| acc * factorial(m))
    }

    /// Order of the centralizer in `S_K` of a permutation of this cycle type.
    pub fn centralizer_order(&self) -> BigInt {
        self.parts
            .iter()
            .fold(self.aut_count(), |acc, &k| acc * k)
    }

    /// All profiles of length `n` with sum `degree`, in lexicographic order.
    pub fn with_degree(n: usize, degree: u32) -> Vec<Profile> {
        fn go(n: usize, rest: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Profile>) {
            if n == 0 {
                if rest == 0 {
                    out.push(Profile { parts: cur.clone() });
                }
                return;
            }
            let mut part = min;
            while part * n as u32 <= rest {
                cur.push(part);
                go(n - 1, rest - part, part, cur, out);
                cur.pop();
                part += 1;
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, degree, 1, &mut Vec::with_capacity(n), &mut out);
        }
        out
    }

    /// Every profile (any length) of total degree `degree`.
    pub fn partitions_of(degree: u32) -> Vec<Profile> {
        (1..=degree as usize)
            .flat_map(|n| Self::with_degree(n, degree))
            .collect()
    }

    /// Profiles of length `n` in graded lexicographic order: by degree, then
    /// lexicographically on the ascending parts.
    pub fn graded_lex(n: usize) -> impl Iterator<Item = Profile> {
        (n as u32..).flat_map(move |d| Self::with_degree(n, d))
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidProfile(format!("bad part `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(parts)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
