use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{is_stable, CorrelatorKey, CorrelatorTable, HodgeSource, Provenance};
use crate::error::{Error, Result};
use crate::numeric::{factorial, integer, multinomial, odd_double_factorial, rational, Rational};

/// `⟨τ_{m_1} ... τ_{m_n}⟩_0 = (n-3)! / prod m_j!` on the dimension gate.
pub fn psi_genus0(exponents: &[u32]) -> Result<Rational> {
    let n = exponents.len();
    if n < 3 {
        return Err(Error::UnstableKey { genus: 0, points: n });
    }
    if exponents.iter().sum::<u32>() as usize != n - 3 {
        return Ok(Rational::zero());
    }
    let denom = exponents.iter().fold(BigInt::one(), |acc, &m| acc * factorial(m));
    Ok(Rational::new(factorial(n as u32 - 3), denom))
}

/// `⟨τ_m λ_g⟩_g = multinomial(2g+n-3; m) · b_g`.
pub fn lambda_g_value(genus: u32, exponents: &[u32], b: &Rational) -> Rational {
    let top = 2 * genus as i64 + exponents.len() as i64 - 3;
    if top < 0 || exponents.iter().sum::<u32>() as i64 != top {
        return Rational::zero();
    }
    integer(multinomial(top as u32, exponents)) * b
}

/// Right-hand side of the string equation for a key containing `τ_0`:
/// one term per remaining positive exponent, decremented, each with
/// coefficient 1. The λ-index is carried through unchanged.
pub fn string_step(key: &CorrelatorKey) -> Result<Vec<(CorrelatorKey, Rational)>> {
    let Some(pos) = key.exponents().iter().position(|&m| m == 0) else {
        return Err(Error::NotApplicable(format!("{key} has no τ_0")));
    };
    let mut rest = key.exponents().to_vec();
    rest.remove(pos);
    if !is_stable(key.genus(), rest.len()) {
        return Err(Error::NotApplicable(format!("removing τ_0 from {key} leaves an unstable space")));
    }
    let mut terms = Vec::new();
    for j in 0..rest.len() {
        if rest[j] == 0 {
            continue;
        }
        let mut m = rest.clone();
        m[j] -= 1;
        m.sort_unstable();
        terms.push((CorrelatorKey::raw(key.genus(), m, key.lambda()), Rational::one()));
    }
    Ok(terms)
}

/// Dilaton equation: removing one `τ_1` multiplies by `2g - 2 + n'` with
/// `n'` the remaining number of points.
pub fn dilaton_step(key: &CorrelatorKey) -> Result<(CorrelatorKey, Rational)> {
    let Some(pos) = key.exponents().iter().position(|&m| m == 1) else {
        return Err(Error::NotApplicable(format!("{key} has no τ_1")));
    };
    let mut rest = key.exponents().to_vec();
    rest.remove(pos);
    if !is_stable(key.genus(), rest.len()) {
        return Err(Error::NotApplicable(format!("removing τ_1 from {key} leaves an unstable space")));
    }
    let coeff = 2 * key.genus() as i64 - 2 + rest.len() as i64;
    Ok((CorrelatorKey::raw(key.genus(), rest, key.lambda()), integer(coeff)))
}

/// Outcome of checking string/dilaton identities across a table.
#[derive(Clone, Debug, Default)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Memoised evaluator for ψ correlators (all genera) and Hodge integrals.
///
/// Pure ψ values come from the string and dilaton equations and the DVV
/// recursion, seeded with `⟨τ_0³⟩_0 = 1` and `⟨τ_1⟩_1 = 1/24`. Mixed Hodge
/// integrals `0 < i < g` must be supplied as an extracted table.
#[derive(Clone, Debug)]
pub struct IntersectionEngine {
    memo: CorrelatorTable,
    extracted: CorrelatorTable,
    genus0_closed_form: bool,
    dilaton_first: bool,
}

impl Default for IntersectionEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl IntersectionEngine {
    pub fn new() -> Self {
        Self {
            memo: CorrelatorTable::new(),
            extracted: CorrelatorTable::new(),
            genus0_closed_form: true,
            dilaton_first: false,
        }
    }

    /// Engine that derives genus 0 from the string equation instead of the
    /// closed form.
    pub fn recursive_genus0() -> Self {
        Self {
            genus0_closed_form: false,
            ..Self::new()
        }
    }

    /// Engine that tries the dilaton reduction before the string reduction.
    pub fn dilaton_first() -> Self {
        Self {
            dilaton_first: true,
            ..Self::new()
        }
    }

    pub fn with_table(table: CorrelatorTable) -> Self {
        let mut e = Self::new();
        e.extracted = table;
        e
    }

    pub fn extracted(&self) -> &CorrelatorTable {
        &self.extracted
    }

    pub fn add_extracted(&mut self, table: &CorrelatorTable) {
        self.extracted.extend(table);
    }

    /// Memo of every ψ correlator computed so far.
    pub fn memo(&self) -> &CorrelatorTable {
        &self.memo
    }

    pub fn psi_intersection(&mut self, genus: u32, exponents: &[u32]) -> Result<Rational> {
        let key = CorrelatorKey::psi(genus, exponents.to_vec())?;
        Ok(self.psi(genus, key.exponents().to_vec()))
    }

    // Total evaluator: unstable or off-dimension keys are zero.
    fn psi(&mut self, genus: u32, mut m: Vec<u32>) -> Rational {
        let n = m.len();
        if !is_stable(genus, n) {
            return Rational::zero();
        }
        if m.iter().sum::<u32>() as i64 != 3 * genus as i64 - 3 + n as i64 {
            return Rational::zero();
        }
        m.sort_unstable();
        let key = CorrelatorKey::raw(genus, m, 0);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let m = key.exponents();
        let (value, provenance) = if genus == 0 && self.genus0_closed_form {
            (psi_genus0(m).expect("stable genus-0 key"), Provenance::ClosedForm)
        } else if genus == 0 && m == [0, 0, 0] {
            (Rational::one(), Provenance::ClosedForm)
        } else if genus == 1 && m == [1] {
            (rational(1, 24), Provenance::ClosedForm)
        } else {
            (self.reduce(&key), Provenance::Recursion)
        };
        self.memo
            .insert(key, value.clone(), provenance)
            .expect("memo keys pass the dimension gate");
        value
    }

    fn reduce(&mut self, key: &CorrelatorKey) -> Rational {
        let via_string = |e: &mut Self| {
            string_step(key).ok().map(|terms| {
                terms
                    .into_iter()
                    .map(|(k, c)| c * e.psi(k.genus(), k.exponents().to_vec()))
                    .sum::<Rational>()
            })
        };
        let via_dilaton = |e: &mut Self| {
            dilaton_step(key)
                .ok()
                .map(|(k, c)| c * e.psi(k.genus(), k.exponents().to_vec()))
        };
        let first = if self.dilaton_first {
            via_dilaton(self).or_else(|| via_string(self))
        } else {
            via_string(self).or_else(|| via_dilaton(self))
        };
        first.unwrap_or_else(|| self.dvv(key))
    }

    // (2k+3)!! ⟨τ_{k+1} τ_d⟩_g = Σ_j (2k+2d_j+1)!!/(2d_j-1)!! ⟨τ_{d_j+k} τ_{d \ j}⟩_g
    //   + ½ Σ_{a+b=k-1} (2a+1)!!(2b+1)!! [⟨τ_a τ_b τ_d⟩_{g-1} + Σ_{splits} ⟨τ_a τ_I⟩⟨τ_b τ_J⟩]
    fn dvv(&mut self, key: &CorrelatorKey) -> Rational {
        let g = key.genus();
        let m = key.exponents();
        let (&top, rest) = m.split_last().expect("stable key has a point");
        debug_assert!(top >= 1);
        let k = top - 1;
        let mut total = Rational::zero();

        for j in 0..rest.len() {
            let d = rest[j];
            let coeff = Rational::new(
                odd_double_factorial((k + d + 1) as i64),
                odd_double_factorial(d as i64),
            );
            let mut next = rest.to_vec();
            next[j] = d + k;
            total += coeff * self.psi(g, next);
        }

        if k >= 1 {
            let mut quadratic = Rational::zero();
            for a in 0..k {
                let b = k - 1 - a;
                let coeff = integer(odd_double_factorial(a as i64 + 1) * odd_double_factorial(b as i64 + 1));
                let mut sum = Rational::zero();
                if g >= 1 {
                    let mut next = rest.to_vec();
                    next.push(a);
                    next.push(b);
                    sum += self.psi(g - 1, next);
                }
                for g1 in 0..=g {
                    for mask in 0u32..(1 << rest.len()) {
                        let mut left = vec![a];
                        let mut right = vec![b];
                        for (i, &d) in rest.iter().enumerate() {
                            if mask & (1 << i) != 0 {
                                left.push(d);
                            } else {
                                right.push(d);
                            }
                        }
                        let lv = self.psi(g1, left);
                        if lv.is_zero() {
                            continue;
                        }
                        sum += lv * self.psi(g - g1, right);
                    }
                }
                quadratic += coeff * sum;
            }
            total += quadratic / integer(2);
        }

        total / integer(odd_double_factorial(k as i64 + 2))
    }

    /// `b_g = ∫ψ^{2g-2} λ_g` over the one-pointed space; `b_0 = 1`.
    pub fn lambda_g_constant(&self, genus: u32) -> Result<Rational> {
        match genus {
            0 => Ok(Rational::one()),
            1 => Ok(rational(1, 24)),
            g => {
                let key = CorrelatorKey::raw(g, vec![2 * g - 2], g);
                self.extracted
                    .get(&key)
                    .cloned()
                    .ok_or(Error::MissingTableEntry(key))
            }
        }
    }

    pub fn hodge_integral(&mut self, key: &CorrelatorKey) -> Result<Rational> {
        if !key.satisfies_dimension_gate() {
            return Ok(Rational::zero());
        }
        let (g, i) = (key.genus(), key.lambda());
        if i == 0 {
            Ok(self.psi(g, key.exponents().to_vec()))
        } else if i == g {
            let b = self.lambda_g_constant(g)?;
            Ok(lambda_g_value(g, key.exponents(), &b))
        } else {
            self.extracted
                .get(key)
                .cloned()
                .ok_or_else(|| Error::MissingTableEntry(key.clone()))
        }
    }
}

impl HodgeSource for IntersectionEngine {
    fn hodge(&mut self, key: &CorrelatorKey) -> Result<Rational> {
        self.hodge_integral(key)
    }
}

/// Checks the string and dilaton equations for every entry whose reduced
/// keys are also stored in `table`.
pub fn check_reductions(table: &CorrelatorTable) -> ConsistencyReport {
    let mut report = ConsistencyReport::default();
    let lookup = |k: &CorrelatorKey| -> Option<Rational> {
        if !k.satisfies_dimension_gate() {
            return Some(Rational::zero());
        }
        table.get(k).cloned()
    };
    for (key, entry) in table.iter() {
        if let Ok(terms) = string_step(key) {
            let values: Option<Vec<Rational>> = terms.iter().map(|(k, c)| lookup(k).map(|v| v * c)).collect();
            if let Some(values) = values {
                report.checked += 1;
                let rhs: Rational = values.into_iter().sum();
                if rhs != entry.value {
                    report.failures.push(format!("string: {key} = {} but reductions sum to {rhs}", entry.value));
                }
            }
        }
        if let Ok((k, c)) = dilaton_step(key) {
            if let Some(v) = lookup(&k) {
                report.checked += 1;
                let rhs = v * c;
                if rhs != entry.value {
                    report.failures.push(format!("dilaton: {key} = {} but reduction gives {rhs}", entry.value));
                }
            }
        }
    }
    report
}

impl CorrelatorTable {
    pub fn check_reductions(&self) -> ConsistencyReport {
        check_reductions(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(g: u32, m: &[u32]) -> CorrelatorKey {
        CorrelatorKey::psi(g, m.to_vec()).unwrap()
    }

    #[test]
    fn genus0_closed_form() {
        assert_eq!(psi_genus0(&[0, 0, 0]).unwrap(), rational(1, 1));
        assert_eq!(psi_genus0(&[1, 0, 0, 0]).unwrap(), rational(1, 1));
        assert_eq!(psi_genus0(&[1, 1, 0, 0, 0]).unwrap(), rational(2, 1));
        assert_eq!(psi_genus0(&[2, 0, 0]).unwrap(), rational(0, 1));
        assert!(psi_genus0(&[0, 0]).is_err());
    }

    #[test]
    fn string_step_examples() {
        let terms = string_step(&key(1, &[0, 2])).unwrap();
        assert_eq!(terms, vec![(key(1, &[1]), rational(1, 1))]);
        let terms = string_step(&key(1, &[0, 0, 3])).unwrap();
        assert_eq!(terms, vec![(key(1, &[0, 2]), rational(1, 1))]);
        assert!(matches!(string_step(&key(0, &[0, 1, 1])), Err(Error::NotApplicable(_))));
        assert!(matches!(string_step(&key(1, &[1])), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn dilaton_step_examples() {
        let mut e = IntersectionEngine::new();
        let (k, c) = dilaton_step(&key(1, &[1, 1])).unwrap();
        assert_eq!((k.clone(), c.clone()), (key(1, &[1]), rational(1, 1)));
        assert_eq!(c * e.hodge_integral(&k).unwrap(), rational(1, 24));
        let (k, c) = dilaton_step(&key(0, &[0, 0, 0, 1])).unwrap();
        assert_eq!((k, c), (key(0, &[0, 0, 0]), rational(1, 1)));
        assert!(matches!(dilaton_step(&key(1, &[1])), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn psi_values() {
        let mut e = IntersectionEngine::new();
        assert_eq!(e.psi_intersection(1, &[1]).unwrap(), rational(1, 24));
        assert_eq!(e.psi_intersection(1, &[0, 0, 3]).unwrap(), rational(1, 24));
        assert_eq!(e.psi_intersection(2, &[4]).unwrap(), rational(1, 1152));
        assert_eq!(e.psi_intersection(0, &[1, 1, 1]).unwrap(), rational(0, 1));
        assert_eq!(e.psi_intersection(0, &[0, 0, 0]).unwrap(), rational(1, 1));
        assert!(matches!(e.psi_intersection(0, &[0, 0]), Err(Error::UnstableKey { .. })));
        // classical values
        assert_eq!(e.psi_intersection(3, &[7]).unwrap(), rational(1, 82944));
        assert_eq!(e.psi_intersection(2, &[2, 3]).unwrap(), rational(29, 5760));
        assert_eq!(e.psi_intersection(2, &[2, 2, 2]).unwrap(), rational(7, 240));
    }

    #[test]
    fn unsorted_queries_agree() {
        let mut e = IntersectionEngine::new();
        assert_eq!(e.psi_intersection(2, &[3, 2]).unwrap(), e.psi_intersection(2, &[2, 3]).unwrap());
        assert_eq!(e.psi_intersection(1, &[3, 0, 0]).unwrap(), rational(1, 24));
    }

    #[test]
    fn reduction_order_is_irrelevant() {
        let mut a = IntersectionEngine::new();
        let mut b = IntersectionEngine::dilaton_first();
        let mut c = IntersectionEngine::recursive_genus0();
        for g in 0..=3u32 {
            for n in 1..=4usize {
                if !is_stable(g, n) {
                    continue;
                }
                let d = 3 * g as i64 - 3 + n as i64;
                for m in compositions_sorted(d as u32, n) {
                    let va = a.psi_intersection(g, &m).unwrap();
                    assert_eq!(va, b.psi_intersection(g, &m).unwrap(), "g={g} m={m:?}");
                    assert_eq!(va, c.psi_intersection(g, &m).unwrap(), "g={g} m={m:?}");
                }
            }
        }
    }

    fn compositions_sorted(total: u32, n: usize) -> Vec<Vec<u32>> {
        crate::numeric::Profile::with_degree(n, total + n as u32)
            .into_iter()
            .map(|p| p.parts().iter().map(|x| x - 1).collect())
            .collect()
    }

    #[test]
    fn recursive_genus0_matches_closed_form() {
        let mut e = IntersectionEngine::recursive_genus0();
        for n in 3..=8usize {
            for m in compositions_sorted(n as u32 - 3, n) {
                assert_eq!(e.psi_intersection(0, &m).unwrap(), psi_genus0(&m).unwrap(), "{m:?}");
            }
        }
    }

    #[test]
    fn lambda_g_values() {
        let b1 = rational(1, 24);
        assert_eq!(lambda_g_value(1, &[0], &b1), rational(1, 24));
        assert_eq!(lambda_g_value(1, &[0, 1], &b1), rational(1, 24));
        assert_eq!(lambda_g_value(2, &[2], &rational(7, 5760)), rational(7, 5760));
        assert_eq!(lambda_g_value(2, &[1], &rational(7, 5760)), rational(0, 1));
    }

    #[test]
    fn hodge_routing() {
        let mut e = IntersectionEngine::new();
        let k = CorrelatorKey::new(1, vec![0, 1], 1).unwrap();
        assert_eq!(e.hodge_integral(&k).unwrap(), rational(1, 24));
        let k = CorrelatorKey::psi(0, vec![0, 0, 0]).unwrap();
        assert_eq!(e.hodge_integral(&k).unwrap(), rational(1, 1));
        let k = CorrelatorKey::new(2, vec![3], 1).unwrap();
        assert!(matches!(e.hodge_integral(&k), Err(Error::MissingTableEntry(_))));
        let mut t = CorrelatorTable::new();
        t.insert(k.clone(), rational(1, 480), Provenance::Extracted).unwrap();
        e.add_extracted(&t);
        assert_eq!(e.hodge_integral(&k).unwrap(), rational(1, 480));
        // off-dimension is zero, not missing
        let k = CorrelatorKey::new(2, vec![2], 1).unwrap();
        assert_eq!(e.hodge_integral(&k).unwrap(), rational(0, 1));
    }

    #[test]
    fn memo_respects_dilaton_and_string() {
        let mut e = IntersectionEngine::new();
        for m in [[0u32, 1, 5], [1, 2, 3], [0, 2, 4], [2, 2, 2]] {
            e.psi_intersection(2, &m).unwrap();
        }
        let report = e.memo().check_reductions();
        assert!(report.checked > 0);
        assert!(report.passed(), "{:?}", report.failures);
    }
}
