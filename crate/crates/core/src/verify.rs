//! Self-checks behind `hforge verify`: every route to a Hurwitz number, the
//! intersection-number identities, and the consistency of the Hodge table.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::Zero;

use crate::cache::{record_line, CacheFile};
use crate::elsv::{
    degree_window_check, genus1_alpha_coefficient, hurwitz_elsv, hurwitz_genus0_closed,
    hurwitz_genus1_closed, lowest_degree_check, one_point_alternating_sum, one_point_series_lhs,
    one_point_series_printed,
};
use crate::error::{Error, Result};
use crate::extract::{build_tables, extract, holdout_validate, ExtractionPlan, DEFAULT_BLOCKS};
use crate::intersection::{psi_genus0, CorrelatorKey, CorrelatorTable, IntersectionEngine};
use crate::numeric::{multinomial, integer, mu, rational, series_sin_kernel, series_sinh_kernel, Profile, Rational};
use crate::oracle::{
    count_factorizations, count_factorizations_frobenius, FactorizationQuery, Oracle, OracleMethod,
    Permutation, SearchOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Genus0,
    Genus1,
    Genus2,
    Series,
    Tables,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Genus0, Suite::Genus1, Suite::Genus2, Suite::Series, Suite::Tables];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "genus0" => Self::Genus0,
            "genus1" => Self::Genus1,
            "genus2" => Self::Genus2,
            "series" => Self::Series,
            "tables" => Self::Tables,
            "all" => Self::All,
            _ => return Err(Error::InvalidArgument(format!("unknown suite `{s}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Genus0 => "genus0",
            Self::Genus1 => "genus1",
            Self::Genus2 => "genus2",
            Self::Series => "series",
            Self::Tables => "tables",
            Self::All => "all",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Informational line that never affects the exit status.
    Note,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn note(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Note,
            detail: detail.into(),
        }
    }

    fn error(name: impl Into<String>, err: &Error) -> Self {
        Self::new(name, false, err.to_string())
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Note => "NOTE",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub search: SearchOptions,
    /// Depth-first counts are cross-checked when `μ` is at most this.
    pub dfs_factor_limit: u32,
    pub cache_path: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            search: SearchOptions::default(),
            dfs_factor_limit: 8,
            cache_path: None,
        }
    }
}

pub struct Verifier {
    config: VerifyConfig,
    tables: Option<(CorrelatorTable, Vec<Check>)>,
}

impl Verifier {
    pub fn new(config: VerifyConfig) -> Self {
        Self { config, tables: None }
    }

    fn frobenius(&self) -> Oracle {
        Oracle {
            method: OracleMethod::Frobenius,
            options: self.config.search.clone(),
        }
    }

    fn dfs(&self) -> Oracle {
        Oracle {
            method: OracleMethod::Dfs,
            options: self.config.search.clone(),
        }
    }

    /// Oracle value, with the depth-first count required to agree when it
    /// is cheap enough to run.
    fn oracle_value(&self, genus: u32, profile: &Profile) -> std::result::Result<Rational, String> {
        let h = self.frobenius().hurwitz(genus, profile).map_err(|e| e.to_string())?;
        if mu(genus, profile) <= self.config.dfs_factor_limit {
            let d = self.dfs().hurwitz(genus, profile).map_err(|e| e.to_string())?;
            if d != h {
                return Err(format!("dfs {d} != frobenius {h}"));
            }
        }
        Ok(h)
    }

    /// The table from the cache if it exists and parses, otherwise a fresh
    /// in-memory extraction. Load problems are reported as checks.
    fn tables(&mut self) -> (CorrelatorTable, Vec<Check>) {
        if let Some(t) = &self.tables {
            return t.clone();
        }
        let mut notes = Vec::new();
        let mut loaded = None;
        if let Some(path) = self.config.cache_path.clone().filter(|p| p.exists()) {
            match CacheFile::read(&path) {
                Ok(file) => {
                    notes.push(Check::note("cache", format!("using {}", path.display())));
                    loaded = Some(file.table);
                }
                Err(e) => notes.push(Check::new("cache", false, format!("{}: {e}", path.display()))),
            }
        }
        let table = match loaded {
            Some(t) => t,
            None => match build_tables(DEFAULT_BLOCKS, &self.frobenius()) {
                Ok(built) => {
                    notes.push(Check::note("cache", "no usable cache; extracted tables in memory"));
                    built.table
                }
                Err(e) => {
                    notes.push(Check::error("extraction", &e));
                    CorrelatorTable::new()
                }
            },
        };
        self.tables = Some((table, notes));
        self.tables.clone().expect("just set")
    }

    pub fn run(&mut self, suite: Suite) -> Vec<Check> {
        match suite {
            Suite::Genus0 => self.genus0(),
            Suite::Genus1 => self.genus1(),
            Suite::Genus2 => self.genus2(),
            Suite::Series => self.series(),
            Suite::Tables => self.tables_suite(),
            Suite::All => Suite::EACH.iter().flat_map(|&s| self.run(s)).collect(),
        }
    }

    fn three_routes(&self, genus: u32, profile: &Profile, closed: Rational) -> Check {
        let name = format!("h_{genus}({profile})");
        let mut engine = IntersectionEngine::new();
        let elsv = match hurwitz_elsv(&mut engine, genus, profile) {
            Ok(v) => v,
            Err(e) => return Check::error(name, &e),
        };
        match self.oracle_value(genus, profile) {
            Ok(oracle) => {
                let agree = oracle == closed && closed == elsv;
                let integral = centralizer_times_h_is_integral(profile, &closed);
                Check::new(
                    name,
                    agree && integral,
                    format!("oracle {oracle}, closed {closed}, elsv {elsv}"),
                )
            }
            Err(e) => Check::new(name, false, e),
        }
    }

    fn genus0(&mut self) -> Vec<Check> {
        let mut out = Vec::new();
        for k in 1..=6 {
            for profile in Profile::partitions_of(k) {
                let closed = hurwitz_genus0_closed(&profile);
                out.push(self.three_routes(0, &profile, closed));
            }
        }

        let mut engine = IntersectionEngine::recursive_genus0();
        let init = engine.psi_intersection(0, &[0, 0, 0]);
        out.push(Check::new(
            "⟨τ_0³⟩_0",
            matches!(&init, Ok(v) if *v == rational(1, 1)),
            format!("{init:?}"),
        ));
        let mut mismatches = Vec::new();
        let mut count = 0;
        for n in 3..=8usize {
            for profile in Profile::with_degree(n, 2 * n as u32 - 3) {
                let m: Vec<u32> = profile.parts().iter().map(|x| x - 1).collect();
                count += 1;
                let rec = engine.psi_intersection(0, &m).expect("stable");
                let closed = psi_genus0(&m).expect("stable");
                if rec != closed {
                    mismatches.push(format!("{m:?}: {rec} vs {closed}"));
                }
            }
        }
        out.push(Check::new(
            "genus-0 string recursion = (n-3)!/∏m!",
            mismatches.is_empty(),
            if mismatches.is_empty() { format!("{count} correlators, n ≤ 8") } else { mismatches.join("; ") },
        ));

        out.push(self.oracle_consistency());
        out
    }

    fn oracle_consistency(&self) -> Check {
        let mut failures = Vec::new();
        let mut count = 0;
        for k in 1..=5 {
            for profile in Profile::partitions_of(k) {
                for r in 0..=6 {
                    for transitive in [true, false] {
                        let q = FactorizationQuery {
                            sigma: Permutation::canonical(&profile),
                            factors: r,
                            transitive_only: transitive,
                        };
                        count += 1;
                        let dfs = count_factorizations(&q, &self.config.search);
                        let parallel = count_factorizations(
                            &q,
                            &SearchOptions {
                                threads: 4,
                                ..self.config.search.clone()
                            },
                        );
                        let frob = count_factorizations_frobenius(&q);
                        match (dfs, parallel) {
                            (Ok(a), Ok(b)) if a == frob && b == frob => {}
                            (a, b) => failures.push(format!("({profile}) r={r}: {a:?} {b:?} vs {frob}")),
                        }
                    }
                }
            }
        }
        Check::new(
            "dfs = frobenius, threads invariant (K ≤ 5, r ≤ 6)",
            failures.is_empty(),
            if failures.is_empty() { format!("{count} queries") } else { failures.join("; ") },
        )
    }

    fn genus1(&mut self) -> Vec<Check> {
        let mut out = Vec::new();
        for k in 1..=5 {
            for profile in Profile::partitions_of(k) {
                let closed = hurwitz_genus1_closed(&profile);
                out.push(self.three_routes(1, &profile, closed));
            }
        }
        let mut engine = IntersectionEngine::new();
        let v = engine.psi_intersection(1, &[1]).expect("stable");
        out.push(Check::new("⟨τ_1⟩_1", v == rational(1, 24), v.to_string()));

        let mut failures = Vec::new();
        let mut count = 0;
        for n in 1..=5usize {
            for total in 0..=5u32 {
                for profile in Profile::with_degree(n, total + n as u32) {
                    let m: Vec<u32> = profile.parts().iter().map(|x| x - 1).collect();
                    count += 1;
                    // the recursion lives on the dimension gate Σm = n
                    if m.contains(&0) && n >= 2 && total as usize == n {
                        let rest = &m[1..];
                        let rhs: Rational = (0..rest.len())
                            .filter(|&j| rest[j] > 0)
                            .map(|j| {
                                let mut d = rest.to_vec();
                                d[j] -= 1;
                                genus1_alpha_coefficient(&d)
                            })
                            .sum();
                        if rhs != genus1_alpha_coefficient(&m) {
                            failures.push(format!("string α{m:?}"));
                        }
                    }
                    if total as usize == n {
                        let psi = engine.psi_intersection(1, &m).expect("stable");
                        if psi != genus1_alpha_coefficient(&m) {
                            failures.push(format!("α{m:?} = {} but ⟨τ⟩_1 = {psi}", genus1_alpha_coefficient(&m)));
                        }
                    }
                }
            }
        }
        out.push(Check::new(
            "α string recursion and α = ⟨τ_m⟩_1",
            failures.is_empty(),
            if failures.is_empty() { format!("{count} exponent vectors") } else { failures.join("; ") },
        ));
        out
    }

    fn genus2(&mut self) -> Vec<Check> {
        let mut out = Vec::new();
        let oracle = self.frobenius();
        let probes: Vec<Profile> = ["1", "2", "3"].iter().map(|s| s.parse().expect("valid")).collect();
        let plan = ExtractionPlan::with_probes(2, 1, probes).expect("valid plan");
        let ext = match extract(&plan, &oracle) {
            Ok(e) => e,
            Err(e) => return vec![Check::error("genus-2 extraction", &e)],
        };
        let get = |m: u32, i: u32| {
            ext.values
                .get(&CorrelatorKey::new(2, vec![m], i).expect("stable"))
                .cloned()
                .unwrap_or_else(Rational::zero)
        };
        let got = (get(4, 0), get(3, 1), get(2, 2));
        let want = (rational(1, 1152), rational(1, 480), rational(7, 5760));
        out.push(Check::new(
            "genus-2 extraction from (1),(2),(3)",
            got == want,
            format!("⟨τ_4⟩ = {}, ⟨ψ³λ_1⟩ = {}, ⟨ψ²λ_2⟩ = {}", got.0, got.1, got.2),
        ));
        let holdout: Profile = "4".parse().expect("valid");
        match holdout_validate(&ext.plan, &ext.values, &[holdout], &oracle) {
            Ok(report) => {
                let c = &report.cases[0];
                out.push(Check::new(
                    "genus-2 holdout (4)",
                    report.passed(),
                    format!("elsv {} oracle {}", c.elsv, c.oracle),
                ))
            }
            Err(e) => out.push(Check::error("genus-2 holdout (4)", &e)),
        }
        let dvv = IntersectionEngine::new().psi_intersection(2, &[4]).expect("stable");
        out.push(Check::new("DVV ⟨τ_4⟩_2 = extracted", dvv == got.0, format!("{dvv}")));

        let mut strict = ext.values.clone();
        for g in [1u32, 2] {
            let name = format!("k=1 vanishing, g={g}");
            let res = if g == 1 {
                one_point_alternating_sum(&mut IntersectionEngine::new(), 1)
            } else {
                one_point_alternating_sum(&mut strict, 2)
            };
            match res {
                Ok(v) => out.push(Check::new(name, v.is_zero(), v.to_string())),
                Err(e) => out.push(Check::error(name, &e)),
            }
        }
        out
    }

    fn series(&mut self) -> Vec<Check> {
        let (table, mut out) = self.tables();
        let mut engine = IntersectionEngine::with_table(table);
        for k in 1..=3u32 {
            let lhs = match one_point_series_lhs(&mut engine, k, 2) {
                Ok(s) => s,
                Err(e) => {
                    out.push(Check::error(format!("series k={k}"), &e));
                    continue;
                }
            };
            let sin = series_sin_kernel(k + 1, 4).expect("even order");
            let sinh = series_sinh_kernel(k + 1, 4).expect("even order");
            out.push(Check::new(
                format!("series k={k}, sin kernel"),
                lhs == sin,
                format!("lhs {lhs}; sin {sin}"),
            ));
            out.push(Check::note(
                format!("series k={k}, sinh kernel"),
                if lhs == sinh { "matches".to_string() } else { format!("mismatch: {sinh}") },
            ));
            if let Ok(printed) = one_point_series_printed(&mut engine, k, 2) {
                out.push(Check::note(
                    format!("series k={k}, literal integrand"),
                    format!("{printed}"),
                ));
            }
        }
        out
    }

    fn tables_suite(&mut self) -> Vec<Check> {
        let (table, mut out) = self.tables();
        if table.is_empty() {
            out.push(Check::new("tables", false, "no table entries"));
            return out;
        }

        let report = table.check_reductions();
        out.push(Check::new(
            "string/dilaton consistency",
            report.passed() && report.checked > 0,
            if report.passed() { format!("{} identities", report.checked) } else { report.failures.join("; ") },
        ));

        let mut engine = IntersectionEngine::new();
        let mut dvv_bad = Vec::new();
        for (key, entry) in table.iter().filter(|(k, _)| k.lambda() == 0) {
            let v = engine.psi_intersection(key.genus(), key.exponents()).expect("stable");
            if v != entry.value {
                dvv_bad.push(format!("`{}` (recursion gives {v})", record_line(key, &entry.value)));
            }
        }
        out.push(Check::new(
            "extracted ψ entries = DVV",
            dvv_bad.is_empty(),
            if dvv_bad.is_empty() { "all agree".to_string() } else { dvv_bad.join("; ") },
        ));

        let b = |g: u32| table.get(&CorrelatorKey::new(g, vec![2 * g - 2], g).expect("stable")).cloned();
        out.push(Check::new("b_1 = 1/24", b(1) == Some(rational(1, 24)), format!("{:?}", b(1).map(|v| v.to_string()))));
        out.push(Check::new("b_2 = 7/5760", b(2) == Some(rational(7, 5760)), format!("{:?}", b(2).map(|v| v.to_string()))));

        let mut blocks: Vec<(u32, usize)> = table.iter().map(|(k, _)| (k.genus(), k.points())).collect();
        blocks.dedup();
        blocks.sort();
        blocks.dedup();
        for (g, n) in blocks {
            // λ_g block ∝ multinomial with one constant per genus
            if g >= 1 {
                let top = 2 * g + n as u32 - 3;
                let mut bad = Vec::new();
                for (key, v) in table.block(g, n).filter(|(k, _)| k.lambda() == g) {
                    let expected = b(g).map(|b| b * integer(multinomial(top, key.exponents())));
                    if expected.as_ref() != Some(v) {
                        bad.push(format!("`{}`", record_line(key, v)));
                    }
                }
                out.push(Check::new(
                    format!("λ_g multinomial structure g={g} n={n}"),
                    bad.is_empty(),
                    if bad.is_empty() { "proportional to multinomials".into() } else { bad.join("; ") },
                ));
            }
            out.push(Check::new(
                format!("degree window g={g} n={n}"),
                degree_window_check(g, n, &table),
                format!("degrees {}..={}", n as i64 + 2 * g as i64 - 3, n as i64 + 3 * g as i64 - 3),
            ));
            out.push(Check::new(
                format!("lowest degree g={g} n={n}"),
                lowest_degree_check(g, n, &table),
                format!("b_{g}·(Σk)^{}", 2 * g as i64 + n as i64 - 3),
            ));
            // ELSV on the table against the oracle at the first profile past the plan
            if let Ok(plan) = ExtractionPlan::new(g, n) {
                let probe = plan.holdouts(1).remove(0);
                let mut strict = table.clone();
                let name = format!("ELSV(table) = oracle at ({probe}) g={g}");
                match (hurwitz_elsv(&mut strict, g, &probe), self.frobenius().hurwitz(g, &probe)) {
                    (Ok(e), Ok(o)) => out.push(Check::new(name, e == o, format!("elsv {e} oracle {o}"))),
                    (Err(e), _) | (_, Err(e)) => out.push(Check::error(name, &e)),
                }
            }
        }
        out
    }
}

/// `|C(σ)| · h` is a nonnegative integer (it is the transitive count).
pub fn centralizer_times_h_is_integral(profile: &Profile, h: &Rational) -> bool {
    (h * integer(profile.centralizer_order())).is_integer() && h >= &Rational::zero()
}
