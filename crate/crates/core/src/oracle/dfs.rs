//! Depth-first enumeration of transposition factorizations.
//!
//! The search walks `τ_1, τ_2, ...` while tracking the permutation that the
//! remaining factors still have to produce. Two cuts keep it small: the
//! remaining product needs at least `K - cycles` transpositions, and a
//! transitive tuple needs at least `components - 1` further merges.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{FactorizationQuery, SearchOptions};
use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 32;

const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Copy)]
struct State {
    // remaining product: τ_r ··· τ_{j+1} must equal this
    target: [u8; MAX_POINTS],
    cycles: u32,
    // comp[x] = bitmask of the orbit containing x
    comp: [u32; MAX_POINTS],
    components: u32,
}

impl State {
    fn same_cycle(&self, a: usize, b: usize) -> bool {
        let mut x = self.target[a] as usize;
        while x != a {
            if x == b {
                return true;
            }
            x = self.target[x] as usize;
        }
        false
    }

    // right-multiply the target by (a b)
    fn apply(&mut self, a: usize, b: usize) {
        if self.same_cycle(a, b) {
            self.cycles += 1;
        } else {
            self.cycles -= 1;
        }
        self.target.swap(a, b);
        self.join(a, b);
    }

    fn join(&mut self, a: usize, b: usize) {
        if self.comp[a] & (1 << b) != 0 {
            return;
        }
        let merged = self.comp[a] | self.comp[b];
        let mut bits = merged;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            self.comp[x] = merged;
            bits &= bits - 1;
        }
        self.components -= 1;
    }
}

struct Search<'a> {
    points: usize,
    transitive: bool,
    transpositions: &'a [(usize, usize)],
    budget: u64,
    spent: &'a AtomicU64,
    abort: &'a AtomicBool,
}

struct Worker<'a> {
    search: &'a Search<'a>,
    local_nodes: u64,
}

impl Worker<'_> {
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes == FLUSH_EVERY {
            self.flush()
        } else {
            true
        }
    }

    fn flush(&mut self) -> bool {
        let s = self.search;
        let total = s.spent.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > s.budget {
            s.abort.store(true, Ordering::Relaxed);
        }
        !s.abort.load(Ordering::Relaxed)
    }

    fn feasible(&self, state: &State, remaining: u32) -> bool {
        let distance = self.search.points as u32 - state.cycles;
        if distance > remaining {
            return false;
        }
        !self.search.transitive || state.components - 1 <= remaining
    }

    // `remaining` factors are still to be chosen.
    fn count(&mut self, state: &State, remaining: u32) -> u64 {
        if !self.tick() {
            return 0;
        }
        match remaining {
            0 => {
                let done = state.cycles as usize == self.search.points;
                u64::from(done && (!self.search.transitive || state.components == 1))
            }
            1 => {
                // the last factor is forced to be the target itself
                if state.cycles as usize + 1 != self.search.points {
                    return 0;
                }
                let a = (0..self.search.points)
                    .find(|&x| state.target[x] as usize != x)
                    .expect("a transposition moves some point");
                let b = state.target[a] as usize;
                let mut next = *state;
                next.join(a, b);
                u64::from(!self.search.transitive || next.components == 1)
            }
            _ => {
                let mut total = 0;
                for &(a, b) in self.search.transpositions {
                    let mut next = *state;
                    next.apply(a, b);
                    if self.feasible(&next, remaining - 1) {
                        total += self.count(&next, remaining - 1);
                    }
                }
                total
            }
        }
    }
}

pub fn count_factorizations(query: &FactorizationQuery, options: &SearchOptions) -> Result<BigInt> {
    let sigma = &query.sigma;
    let points = sigma.points();
    if points > MAX_POINTS {
        return Err(Error::InvalidArgument(format!(
            "depth-first search supports at most {MAX_POINTS} points"
        )));
    }
    let r = query.factors;
    // parity: each transposition flips the permutation sign
    if (points - sigma.cycles().len()) % 2 != r as usize % 2 {
        return Ok(BigInt::from(0));
    }

    let mut init = State {
        target: [0; MAX_POINTS],
        cycles: sigma.cycles().len() as u32,
        comp: [0; MAX_POINTS],
        components: points as u32,
    };
    for x in 0..points {
        init.target[x] = sigma.apply(x) as u8;
        init.comp[x] = 1 << x;
    }
    for cycle in sigma.cycles() {
        for w in cycle.windows(2) {
            init.join(w[0], w[1]);
        }
    }

    let transpositions: Vec<(usize, usize)> = (0..points)
        .flat_map(|a| (a + 1..points).map(move |b| (a, b)))
        .collect();
    let spent = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let search = Search {
        points,
        transitive: query.transitive_only,
        transpositions: &transpositions,
        budget: options.node_budget,
        spent: &spent,
        abort: &abort,
    };

    let run_branch = |first: Option<(usize, usize)>| -> u64 {
        let mut worker = Worker {
            search: &search,
            local_nodes: 0,
        };
        let (state, remaining) = match first {
            None => (init, r),
            Some((a, b)) => {
                let mut next = init;
                next.apply(a, b);
                (next, r - 1)
            }
        };
        let total = if worker.feasible(&state, remaining) {
            worker.count(&state, remaining)
        } else {
            0
        };
        worker.flush();
        total
    };

    let total: u64 = if r < 2 || options.threads <= 1 {
        run_branch(None)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        // one root node for the fan-out itself
        spent.fetch_add(1, Ordering::Relaxed);
        pool.install(|| {
            transpositions
                .par_iter()
                .map(|&t| run_branch(Some(t)))
                .sum()
        })
    };

    if abort.load(Ordering::Relaxed) || spent.load(Ordering::Relaxed) > options.node_budget {
        return Err(Error::SearchTooLarge {
            budget: options.node_budget,
        });
    }
    Ok(BigInt::from(total))
}
