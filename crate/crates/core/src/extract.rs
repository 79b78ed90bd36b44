//! Recover Hodge integrals by reading ELSV as a linear system: each probe
//! profile contributes one equation whose right-hand side is the oracle's
//! Hurwitz number scaled by `#Aut / (μ! prod k^k/k!)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::elsv::{compositions, hurwitz_elsv};
use crate::error::{Error, Result};
use crate::intersection::{is_stable, CorrelatorKey, CorrelatorTable, Provenance};
use crate::numeric::{factorial, hurwitz_weight, integer, mu, solve_exact, LinearSystem, Profile, Rational};
use crate::oracle::Oracle;

/// Extra probes tried beyond the number of unknowns before giving up.
pub const MAX_EXTRA_PROBES: usize = 12;

/// `(g, n)` blocks extracted by default.
pub const DEFAULT_BLOCKS: &[(u32, usize)] = &[(0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)];

/// Genus-3 block available behind an explicit opt-in.
pub const GENUS3_BLOCKS: &[(u32, usize)] = &[(3, 1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionPlan {
    pub genus: u32,
    pub points: usize,
    pub unknowns: Vec<CorrelatorKey>,
    pub probes: Vec<Profile>,
}

/// All `(m, i)` with `0 ≤ i ≤ g` and `m` a sorted `n`-multiset of degree
/// `3g-3+n-i`, ordered by `i` then `m` descending lexicographically.
pub fn unknowns_for(genus: u32, points: usize) -> Result<Vec<CorrelatorKey>> {
    if !is_stable(genus, points) {
        return Err(Error::UnstableKey { genus, points });
    }
    let mut out = Vec::new();
    for i in 0..=genus {
        let d = 3 * genus as i64 - 3 + points as i64 - i as i64;
        if d < 0 {
            continue;
        }
        let mut block: Vec<CorrelatorKey> = Profile::with_degree(points, d as u32 + points as u32)
            .into_iter()
            .map(|p| {
                let m: Vec<u32> = p.parts().iter().map(|x| x - 1).collect();
                CorrelatorKey::new(genus, m, i)
            })
            .collect::<Result<_>>()?;
        block.reverse();
        out.extend(block);
    }
    Ok(out)
}

impl ExtractionPlan {
    /// Unknowns for `(g, n)` and the first `#unknowns` profiles of length
    /// `n` in graded lexicographic order.
    pub fn new(genus: u32, points: usize) -> Result<Self> {
        let unknowns = unknowns_for(genus, points)?;
        let probes = Profile::graded_lex(points).take(unknowns.len()).collect();
        Ok(Self {
            genus,
            points,
            unknowns,
            probes,
        })
    }

    pub fn with_probes(genus: u32, points: usize, probes: Vec<Profile>) -> Result<Self> {
        if let Some(p) = probes.iter().find(|p| p.len() != points) {
            return Err(Error::InvalidArgument(format!("probe {p} does not have {points} parts")));
        }
        Ok(Self {
            genus,
            points,
            unknowns: unknowns_for(genus, points)?,
            probes,
        })
    }

    /// First graded-lex profile not already used as a probe.
    pub fn next_probe(&self) -> Profile {
        Profile::graded_lex(self.points)
            .find(|p| !self.probes.contains(p))
            .expect("graded lex order is infinite")
    }

    /// The `count` graded-lex profiles following the plan's probes.
    pub fn holdouts(&self, count: usize) -> Vec<Profile> {
        Profile::graded_lex(self.points)
            .filter(|p| !self.probes.contains(p))
            .take(count)
            .collect()
    }
}

/// Coefficients of one equation: for each unknown `(m, i)`,
/// `(-1)^i Σ_{ordered rearrangements m'} prod k_j^{m'_j}`.
pub fn probe_row(plan: &ExtractionPlan, probe: &Profile) -> Vec<Rational> {
    let ks = probe.parts();
    plan.unknowns
        .iter()
        .map(|key| {
            let mut sum = BigInt::zero();
            for m in compositions(key.degree(), key.points()) {
                let mut s = m.clone();
                s.sort_unstable();
                if s != key.exponents() {
                    continue;
                }
                sum += m
                    .iter()
                    .zip(ks)
                    .fold(BigInt::from(1), |acc, (&e, &k)| acc * BigInt::from(k).pow(e));
            }
            if key.lambda() % 2 == 1 {
                sum = -sum;
            }
            integer(sum)
        })
        .collect()
}

/// `h · #Aut / (μ! prod k^k/k!)`, the value of the integral factor.
pub fn integral_from_hurwitz(genus: u32, probe: &Profile, h: &Rational) -> Rational {
    h * integer(probe.aut_count()) / (integer(factorial(mu(genus, probe))) * hurwitz_weight(probe))
}

pub fn build_system(plan: &ExtractionPlan, oracle: &Oracle) -> Result<LinearSystem<CorrelatorKey>> {
    let mut system = LinearSystem::new(plan.unknowns.clone());
    for probe in &plan.probes {
        let h = oracle.hurwitz(plan.genus, probe)?;
        system.push_row(probe_row(plan, probe), integral_from_hurwitz(plan.genus, probe, &h));
    }
    Ok(system)
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub plan: ExtractionPlan,
    pub values: CorrelatorTable,
}

/// Solves the plan, appending graded-lex probes while the system is rank
/// deficient.
pub fn extract(plan: &ExtractionPlan, oracle: &Oracle) -> Result<Extraction> {
    let mut plan = plan.clone();
    let mut system = build_system(&plan, oracle)?;
    let mut extra = 0;
    let solution = loop {
        match solve_exact(&system) {
            Ok(sol) => break sol,
            Err(Error::RankDeficient { .. }) if extra < MAX_EXTRA_PROBES => {
                let probe = plan.next_probe();
                let h = oracle.hurwitz(plan.genus, &probe)?;
                system.push_row(probe_row(&plan, &probe), integral_from_hurwitz(plan.genus, &probe, &h));
                plan.probes.push(probe);
                extra += 1;
            }
            Err(e) => return Err(e),
        }
    };
    let mut values = CorrelatorTable::new();
    for (key, value) in solution {
        values.insert(key, value, Provenance::Extracted)?;
    }
    Ok(Extraction { plan, values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldoutCase {
    pub profile: Profile,
    pub elsv: Rational,
    pub oracle: Rational,
}

impl HoldoutCase {
    pub fn passed(&self) -> bool {
        self.elsv == self.oracle
    }
}

#[derive(Clone, Debug)]
pub struct HoldoutReport {
    pub genus: u32,
    pub points: usize,
    pub cases: Vec<HoldoutCase>,
}

impl HoldoutReport {
    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(HoldoutCase::passed)
    }
}

impl fmt::Display for HoldoutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            if c.passed() {
                writeln!(f, "holdout g={} k=({}): equal, h = {}", self.genus, c.profile, c.elsv)?;
            } else {
                writeln!(
                    f,
                    "holdout g={} k=({}): ELSV {} vs oracle {}",
                    self.genus, c.profile, c.elsv, c.oracle
                )?;
            }
        }
        Ok(())
    }
}

/// Compares ELSV evaluated strictly on `table` against the oracle at probes
/// not used to build the plan.
pub fn holdout_validate(
    plan: &ExtractionPlan,
    table: &CorrelatorTable,
    extra_probes: &[Profile],
    oracle: &Oracle,
) -> Result<HoldoutReport> {
    if let Some(p) = extra_probes.iter().find(|p| plan.probes.contains(p)) {
        return Err(Error::InvalidArgument(format!("holdout ({p}) was used to build the plan")));
    }
    let mut cases = Vec::new();
    for probe in extra_probes {
        let mut strict = table.clone();
        let elsv = hurwitz_elsv(&mut strict, plan.genus, probe)?;
        let oracle = oracle.hurwitz(plan.genus, probe)?;
        cases.push(HoldoutCase {
            profile: probe.clone(),
            elsv,
            oracle,
        });
    }
    Ok(HoldoutReport {
        genus: plan.genus,
        points: plan.points,
        cases,
    })
}

/// Extracted tables for several blocks with the plans and holdouts that
/// justify them.
#[derive(Clone, Debug, Default)]
pub struct BuiltTables {
    pub table: CorrelatorTable,
    pub plans: Vec<ExtractionPlan>,
    pub holdouts: Vec<HoldoutReport>,
}

/// Extracts each block and validates it on the next unused probe. A block
/// whose holdout fails aborts the whole build.
pub fn build_tables(blocks: &[(u32, usize)], oracle: &Oracle) -> Result<BuiltTables> {
    let mut built = BuiltTables::default();
    for &(genus, points) in blocks {
        let extraction = extract(&ExtractionPlan::new(genus, points)?, oracle)?;
        let holdout = extraction.plan.holdouts(1);
        let report = holdout_validate(&extraction.plan, &extraction.values, &holdout, oracle)?;
        if !report.passed() {
            let case = &report.cases[0];
            return Err(Error::HoldoutFailed {
                probe: case.profile.to_string(),
                elsv: case.elsv.to_string(),
                oracle: case.oracle.to_string(),
            });
        }
        built.table.extend(&extraction.values);
        built.plans.push(extraction.plan);
        built.holdouts.push(report);
    }
    Ok(built)
}
