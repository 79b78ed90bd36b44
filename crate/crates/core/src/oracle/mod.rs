//! Ground-truth Hurwitz numbers from monodromy: count transitive ordered
//! tuples of `μ` transpositions whose product has cycle type `k`, then divide
//! by the centralizer order of that cycle type.

mod dfs;
mod frobenius;
mod permutation;

pub use dfs::{count_factorizations, MAX_POINTS};
pub use frobenius::{
    content_sum, count_factorizations_frobenius, dimension, partitions, transitive_count,
    CharacterTable, FrobeniusCounter,
};
pub use permutation::{cycle_type, Permutation};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numeric::{mu, Profile, Rational};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct FactorizationQuery {
    pub sigma: Permutation,
    pub factors: u32,
    pub transitive_only: bool,
}

impl FactorizationQuery {
    /// Transitive query for the canonical permutation of `profile`.
    pub fn transitive(profile: &Profile, factors: u32) -> Self {
        Self {
            sigma: Permutation::canonical(profile),
            factors,
            transitive_only: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OracleMethod {
    /// Exhaustive depth-first enumeration.
    #[default]
    Dfs,
    /// Character sum plus inclusion–exclusion.
    Frobenius,
}

impl FromStr for OracleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dfs" => Ok(Self::Dfs),
            "frobenius" => Ok(Self::Frobenius),
            _ => Err(Error::InvalidArgument(format!("unknown oracle `{s}`"))),
        }
    }
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dfs => "dfs",
            Self::Frobenius => "frobenius",
        })
    }
}

/// Oracle configuration: which counting route and its resource limits.
#[derive(Clone, Debug, Default)]
pub struct Oracle {
    pub method: OracleMethod,
    pub options: SearchOptions,
}

impl Oracle {
    pub fn dfs() -> Self {
        Self::default()
    }

    pub fn frobenius() -> Self {
        Self {
            method: OracleMethod::Frobenius,
            ..Self::default()
        }
    }

    pub fn count(&self, query: &FactorizationQuery) -> Result<BigInt> {
        match self.method {
            OracleMethod::Dfs => count_factorizations(query, &self.options),
            OracleMethod::Frobenius => Ok(count_factorizations_frobenius(query)),
        }
    }

    /// `h_{g;k} = A / |C(σ)|` with `A` the transitive count for `r = μ`.
    pub fn hurwitz(&self, genus: u32, profile: &Profile) -> Result<Rational> {
        let r = mu(genus, profile);
        let count = self.count(&FactorizationQuery::transitive(profile, r))?;
        Ok(Rational::new(count, profile.centralizer_order()))
    }
}

pub fn hurwitz_oracle(genus: u32, profile: &Profile, oracle: &Oracle) -> Result<Rational> {
    oracle.hurwitz(genus, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    // Independent brute force: every r-tuple of transpositions, no pruning.
    fn brute(sigma: &Permutation, r: u32, transitive: bool) -> u64 {
        let n = sigma.points();
        let ts: Vec<Permutation> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .map(|(a, b)| {
                let mut img: Vec<usize> = (0..n).collect();
                img.swap(a, b);
                Permutation::new(img).unwrap()
            })
            .collect();
        let mut count = 0;
        let total = ts.len().pow(r);
        for mut code in 0..total {
            let mut prod = Permutation::identity(n);
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let root = find(p, p[x]);
                    p[x] = root;
                }
                p[x]
            }
            for _ in 0..r {
                let t = &ts[code % ts.len()];
                code /= ts.len();
                prod = t.compose(&prod);
                let moved: Vec<usize> = (0..n).filter(|&x| t.apply(x) != x).collect();
                let (ra, rb) = (find(&mut parent, moved[0]), find(&mut parent, moved[1]));
                parent[ra] = rb;
            }
            if &prod != sigma {
                continue;
            }
            let roots: std::collections::HashSet<usize> =
                (0..n).map(|x| find(&mut parent, x)).collect();
            if !transitive || roots.len() == 1 {
                count += 1;
            }
        }
        count
    }

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn dfs(sigma: Permutation, r: u32) -> BigInt {
        let q = FactorizationQuery {
            sigma,
            factors: r,
            transitive_only: true,
        };
        count_factorizations(&q, &SearchOptions::default()).unwrap()
    }

    #[test]
    fn brute_force_oracle_values() {
        assert_eq!(brute(&Permutation::from_one_based(&[2, 1]).unwrap(), 3, true), 1);
        assert_eq!(brute(&Permutation::identity(3), 4, false), 27);
        assert_eq!(brute(&Permutation::identity(3), 4, true), 24);
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(brute(&cyc, 2, true), 3);
        assert_eq!(brute(&cyc, 6, true), 243);
    }

    #[test]
    fn dfs_matches_frozen_counts() {
        assert_eq!(dfs(Permutation::from_one_based(&[2, 1]).unwrap(), 3), BigInt::from(1));
        assert_eq!(dfs(Permutation::identity(3), 4), BigInt::from(24));
        assert_eq!(dfs(Permutation::from_one_based(&[2, 3, 1]).unwrap(), 2), BigInt::from(3));
        assert_eq!(dfs(Permutation::from_one_based(&[2, 3, 1]).unwrap(), 6), BigInt::from(243));
    }

    #[test]
    fn dfs_matches_brute_force_in_s4() {
        for profile in Profile::partitions_of(4) {
            let sigma = Permutation::canonical(&profile);
            for r in 0..=5 {
                for transitive in [false, true] {
                    let q = FactorizationQuery {
                        sigma: sigma.clone(),
                        factors: r,
                        transitive_only: transitive,
                    };
                    let got = count_factorizations(&q, &SearchOptions::default()).unwrap();
                    assert_eq!(got, BigInt::from(brute(&sigma, r, transitive)), "{profile} r={r}");
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let q = |sigma, r| FactorizationQuery {
            sigma,
            factors: r,
            transitive_only: true,
        };
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(count_factorizations_frobenius(&q(cyc, 6)), BigInt::from(243));
        assert_eq!(count_factorizations_frobenius(&q(Permutation::identity(3), 4)), BigInt::from(24));
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(count_factorizations_frobenius(&q(swap, 1)), BigInt::from(1));
    }

    #[test]
    fn oracle_hurwitz_values() {
        let o = Oracle::dfs();
        assert_eq!(o.hurwitz(0, &p("1,1,1")).unwrap(), rational(4, 1));
        assert_eq!(o.hurwitz(1, &p("2")).unwrap(), rational(1, 2));
        assert_eq!(o.hurwitz(1, &p("1,1")).unwrap(), rational(1, 2));
        assert_eq!(o.hurwitz(0, &p("2")).unwrap(), rational(1, 2));
        assert_eq!(o.hurwitz(0, &p("1")).unwrap(), rational(1, 1));
        assert_eq!(Oracle::frobenius().hurwitz(2, &p("3")).unwrap(), rational(81, 1));
        assert_eq!(o.hurwitz(2, &p("3")).unwrap(), rational(81, 1));
    }

    #[test]
    fn degree_one_covers_only_in_genus_zero() {
        for g in 1..4 {
            assert_eq!(Oracle::dfs().hurwitz(g, &p("1")).unwrap(), rational(0, 1));
            assert_eq!(Oracle::frobenius().hurwitz(g, &p("1")).unwrap(), rational(0, 1));
        }
    }

    #[test]
    fn parity_mismatch_is_zero() {
        let q = FactorizationQuery::transitive(&p("3"), 3);
        assert_eq!(count_factorizations(&q, &SearchOptions::default()).unwrap(), BigInt::from(0));
        assert_eq!(count_factorizations_frobenius(&q), BigInt::from(0));
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let q = FactorizationQuery::transitive(&p("1,1,1,1,1"), 8);
        let opts = SearchOptions {
            node_budget: 1000,
            threads: 1,
        };
        assert!(matches!(count_factorizations(&q, &opts), Err(Error::SearchTooLarge { budget: 1000 })));
        let opts = SearchOptions {
            node_budget: 1000,
            threads: 4,
        };
        assert!(matches!(count_factorizations(&q, &opts), Err(Error::SearchTooLarge { .. })));
    }

    #[test]
    fn thread_count_does_not_change_counts() {
        let q = FactorizationQuery::transitive(&p("1,2,2"), 7);
        let base = count_factorizations(&q, &SearchOptions::default()).unwrap();
        for threads in [2, 3, 8] {
            let opts = SearchOptions {
                threads,
                ..SearchOptions::default()
            };
            assert_eq!(count_factorizations(&q, &opts).unwrap(), base);
        }
    }
}
