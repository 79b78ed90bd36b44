//! The ELSV formula and the closed forms that follow from it.
//!
//! `h_{g;k} = μ!/#Aut · prod k_i^{k_i}/k_i! · ∫ c(Λ^∨) / prod (1 - k_i ψ_i)`,
//! with the integral expanded into single-λ Hodge integrals over ordered
//! exponent vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::intersection::{is_stable, CorrelatorKey, CorrelatorTable, HodgeSource};
use crate::numeric::{
    elementary_symmetric, factorial, hurwitz_weight, integer, multinomial, mu, pow_rational,
    Profile, Rational, TruncatedSeries,
};

/// Ordered vectors of `n` nonnegative integers summing to `total`.
pub fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=rest {
            cur.push(first);
            go(rest - first, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(total, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn sorted(m: &[u32]) -> Vec<u32> {
    let mut s = m.to_vec();
    s.sort_unstable();
    s
}

/// Expanded integrand: `(ordered m, i) ↦ (-1)^i ⟨τ_m λ_i⟩_g`, so that the
/// integral factor at `k` is `Σ terms · prod k_j^{m_j}`.
#[derive(Clone, Debug)]
pub struct ElsvIntegrand {
    pub genus: u32,
    pub points: usize,
    pub terms: BTreeMap<(Vec<u32>, u32), Rational>,
}

impl ElsvIntegrand {
    pub fn build(source: &mut impl HodgeSource, genus: u32, points: usize) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for i in 0..=genus {
            let d = 3 * genus as i64 - 3 + points as i64 - i as i64;
            if d < 0 {
                continue;
            }
            let mut cache: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for m in compositions(d as u32, points) {
                let s = sorted(&m);
                let value = match cache.get(&s) {
                    Some(v) => v.clone(),
                    None => {
                        let v = source.hodge(&CorrelatorKey::new(genus, s.clone(), i)?)?;
                        cache.insert(s, v.clone());
                        v
                    }
                };
                if value.is_zero() {
                    continue;
                }
                let signed = if i % 2 == 1 { -value } else { value };
                terms.insert((m, i), signed);
            }
        }
        Ok(Self {
            genus,
            points,
            terms,
        })
    }

    pub fn evaluate(&self, profile: &Profile) -> Rational {
        assert_eq!(profile.len(), self.points);
        let ks = profile.parts();
        self.terms
            .iter()
            .map(|((m, _), c)| {
                let mono = m
                    .iter()
                    .zip(ks)
                    .fold(BigInt::one(), |acc, (&e, &k)| acc * BigInt::from(k).pow(e));
                c * integer(mono)
            })
            .sum()
    }

    /// Coefficient of the monomial `prod k_j^{m_j}`.
    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms
            .iter()
            .filter(|((mm, _), _)| mm.as_slice() == m)
            .map(|(_, c)| c.clone())
            .sum()
    }
}

pub fn elsv_integral_factor(source: &mut impl HodgeSource, genus: u32, profile: &Profile) -> Result<Rational> {
    let n = profile.len();
    if genus == 0 && n <= 2 {
        // understood formally as K^{n-3}
        return Ok(pow_rational(&integer(profile.degree()), n as i64 - 3));
    }
    debug_assert!(is_stable(genus, n));
    Ok(ElsvIntegrand::build(source, genus, n)?.evaluate(profile))
}

fn prefactor(genus: u32, profile: &Profile) -> Rational {
    Rational::new(factorial(mu(genus, profile)), profile.aut_count()) * hurwitz_weight(profile)
}

pub fn hurwitz_elsv(source: &mut impl HodgeSource, genus: u32, profile: &Profile) -> Result<Rational> {
    Ok(prefactor(genus, profile) * elsv_integral_factor(source, genus, profile)?)
}

/// Hurwitz's genus-0 formula `(K+n-2)!/#Aut · prod k^k/k! · K^{n-3}`.
pub fn hurwitz_genus0_closed(profile: &Profile) -> Rational {
    let k = integer(profile.degree());
    prefactor(0, profile) * pow_rational(&k, profile.len() as i64 - 3)
}

/// Genus-1 closed form
/// `(K+n)!/(24 #Aut) · prod k^k/k! · (K^n - Σ_{i≥2} (i-2)! e_i K^{n-i} - K^{n-1})`.
pub fn hurwitz_genus1_closed(profile: &Profile) -> Rational {
    let n = profile.len();
    let kk = BigInt::from(profile.degree());
    let parts: Vec<i64> = profile.parts().iter().map(|&k| k as i64).collect();
    let mut bracket = kk.pow(n as u32) - kk.pow(n as u32 - 1);
    for i in 2..=n {
        bracket -= factorial(i as u32 - 2) * elementary_symmetric(i, &parts) * kk.pow((n - i) as u32);
    }
    prefactor(1, profile) * integer(bracket) / integer(24)
}

/// `α_m = (n! - Σ_{i=2}^n (i-2)!(n-i)! e_i(m)) / (24 prod m_j!)`, the
/// coefficient of `k^m` in the genus-1 ψ part.
pub fn genus1_alpha_coefficient(m: &[u32]) -> Rational {
    let n = m.len() as u32;
    let values: Vec<i64> = m.iter().map(|&x| x as i64).collect();
    let mut num = factorial(n);
    for i in 2..=n {
        num -= factorial(i - 2) * factorial(n - i) * elementary_symmetric(i as usize, &values);
    }
    let denom = m.iter().fold(BigInt::from(24), |acc, &x| acc * factorial(x));
    Rational::new(num, denom)
}

/// `1 + Σ_g t^{2g} Σ_{i=0}^g k^i ⟨ψ^{2g-2+i} λ_{g-i}⟩_{g,1}`.
pub fn one_point_series_lhs(source: &mut impl HodgeSource, k: u32, max_genus: u32) -> Result<TruncatedSeries> {
    let mut coeffs = vec![Rational::one()];
    for g in 1..=max_genus {
        let mut c = Rational::zero();
        for i in 0..=g {
            let key = CorrelatorKey::new(g, vec![2 * g - 2 + i], g - i)?;
            c += integer(BigInt::from(k).pow(i)) * source.hodge(&key)?;
        }
        coeffs.push(c);
    }
    Ok(TruncatedSeries::from_even_coeffs(2 * max_genus, coeffs))
}

/// The one-point series with the integrand taken literally as
/// `(k^g - k^{g-1} λ_1 + ... ± λ_g) / (1 - kψ)`.
pub fn one_point_series_printed(source: &mut impl HodgeSource, k: u32, max_genus: u32) -> Result<TruncatedSeries> {
    let mut coeffs = vec![Rational::one()];
    for g in 1..=max_genus {
        let mut c = Rational::zero();
        for i in 0..=g {
            let psi_power = 3 * g - 2 - i;
            let key = CorrelatorKey::new(g, vec![psi_power], i)?;
            let term = integer(BigInt::from(k).pow(g - i + psi_power)) * source.hodge(&key)?;
            if i % 2 == 1 {
                c -= term;
            } else {
                c += term;
            }
        }
        coeffs.push(c);
    }
    Ok(TruncatedSeries::from_even_coeffs(2 * max_genus, coeffs))
}

/// `Σ_j (-1)^j ⟨ψ^{3g-2-j} λ_j⟩_{g,1}`, the integral factor at `k = (1)`.
pub fn one_point_alternating_sum(source: &mut impl HodgeSource, genus: u32) -> Result<Rational> {
    let mut sum = Rational::zero();
    for j in 0..=genus {
        let v = source.hodge(&CorrelatorKey::new(genus, vec![3 * genus - 2 - j], j)?)?;
        if j % 2 == 1 {
            sum -= v;
        } else {
            sum += v;
        }
    }
    Ok(sum)
}

/// Every stored `(g, n)` entry is nonzero only in degrees
/// `n+2g-3 ..= n+3g-3`, the ansatz is fully populated, and the resulting
/// polynomial is symmetric.
pub fn degree_window_check(genus: u32, points: usize, table: &CorrelatorTable) -> bool {
    let lo = points as i64 + 2 * genus as i64 - 3;
    let hi = points as i64 + 3 * genus as i64 - 3;
    let mut any = false;
    for (key, value) in table.block(genus, points) {
        any = true;
        let d = key.degree() as i64;
        if !value.is_zero() && !(lo..=hi).contains(&d) {
            return false;
        }
    }
    if !any {
        return false;
    }
    let mut strict = table.clone();
    let Ok(integrand) = ElsvIntegrand::build(&mut strict, genus, points) else {
        return false;
    };
    integrand.terms.iter().all(|((m, _), c)| {
        let mut rotated = m.clone();
        rotated.rotate_left(1);
        let mut swapped = m.clone();
        swapped.swap(0, points - 1);
        integrand.coefficient(&rotated) == *c && integrand.coefficient(&swapped) == *c
    })
}

/// The λ_g block (lowest degree `2g+n-3`) equals `b_g (k_1+...+k_n)^{2g+n-3}`
/// with `b_g` read from the table (`b_0 = 1`).
pub fn lowest_degree_check(genus: u32, points: usize, table: &CorrelatorTable) -> bool {
    let top = 2 * genus as i64 + points as i64 - 3;
    if top < 0 {
        return false;
    }
    let b = if genus == 0 {
        Rational::one()
    } else {
        match table.get(&CorrelatorKey::new(genus, vec![2 * genus - 2], genus).expect("stable")) {
            Some(b) => b.clone(),
            None => return false,
        }
    };
    let Ok(expected_block) = lowest_block_keys(genus, points, top as u32) else {
        return false;
    };
    expected_block.into_iter().all(|key| match table.get(&key) {
        Some(v) => *v == integer(multinomial(top as u32, key.exponents())) * &b,
        None => false,
    })
}

fn lowest_block_keys(genus: u32, points: usize, top: u32) -> Result<Vec<CorrelatorKey>> {
    let mut keys: Vec<CorrelatorKey> = Vec::new();
    for m in compositions(top, points) {
        let k = CorrelatorKey::new(genus, m, genus)?;
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    Ok(keys)
}
