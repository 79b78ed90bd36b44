//! ψ-class intersection numbers and single-λ Hodge integrals.

mod engine;

pub use engine::{
    check_reductions, dilaton_step, lambda_g_value, psi_genus0, string_step, ConsistencyReport,
    IntersectionEngine,
};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// `⟨τ_{m_1} ... τ_{m_n} λ_i⟩_g` with `m` sorted ascending. `i = 0` is the
/// pure ψ correlator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    genus: u32,
    lambda: u32,
    exponents: Vec<u32>,
}

pub fn is_stable(genus: u32, points: usize) -> bool {
    points >= 1 && 2 * genus as usize + points > 2
}

impl CorrelatorKey {
    pub fn new(genus: u32, exponents: impl Into<Vec<u32>>, lambda: u32) -> Result<Self> {
        let mut exponents = exponents.into();
        if !is_stable(genus, exponents.len()) {
            return Err(Error::UnstableKey {
                genus,
                points: exponents.len(),
            });
        }
        if lambda > genus {
            return Err(Error::InvalidArgument(format!(
                "λ-index {lambda} exceeds genus {genus}"
            )));
        }
        exponents.sort_unstable();
        Ok(Self {
            genus,
            lambda,
            exponents,
        })
    }

    pub fn psi(genus: u32, exponents: impl Into<Vec<u32>>) -> Result<Self> {
        Self::new(genus, exponents, 0)
    }

    /// Accepts signed exponents so that malformed input is reported as such.
    pub fn from_signed(genus: u32, exponents: &[i64], lambda: u32) -> Result<Self> {
        if exponents.iter().any(|&m| m < 0) {
            return Err(Error::NegativeExponent);
        }
        Self::new(genus, exponents.iter().map(|&m| m as u32).collect::<Vec<_>>(), lambda)
    }

    // Callers guarantee stability and sortedness.
    pub(crate) fn raw(genus: u32, exponents: Vec<u32>, lambda: u32) -> Self {
        debug_assert!(exponents.windows(2).all(|w| w[0] <= w[1]));
        Self {
            genus,
            lambda,
            exponents,
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn points(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `3g - 3 + n - i`, the degree at which the class can integrate to
    /// something nonzero.
    pub fn dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.points() as i64 - self.lambda as i64
    }

    pub fn satisfies_dimension_gate(&self) -> bool {
        self.degree() as i64 == self.dimension()
    }
}

impl fmt::Display for CorrelatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, m) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "τ_{m}")?;
        }
        if self.lambda > 0 {
            write!(f, " λ_{}", self.lambda)?;
        }
        write!(f, "⟩_{}", self.genus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Recursion,
    Extracted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub value: Rational,
    pub provenance: Provenance,
}

/// Correlator values keyed by canonical key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrelatorTable {
    entries: BTreeMap<CorrelatorKey, TableEntry>,
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, rejecting keys that fail the dimension gate.
    pub fn insert(&mut self, key: CorrelatorKey, value: Rational, provenance: Provenance) -> Result<()> {
        if !key.satisfies_dimension_gate() {
            return Err(Error::InvalidArgument(format!(
                "{key} has degree {} but dimension {}",
                key.degree(),
                key.dimension()
            )));
        }
        self.entries.insert(key, TableEntry { value, provenance });
        Ok(())
    }

    pub fn get(&self, key: &CorrelatorKey) -> Option<&Rational> {
        self.entries.get(key).map(|e| &e.value)
    }

    pub fn entry(&self, key: &CorrelatorKey) -> Option<&TableEntry> {
        self.entries.get(key)
    }

    pub fn contains(&self, key: &CorrelatorKey) -> bool {
        self.entries.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CorrelatorKey, &TableEntry)> {
        self.entries.iter()
    }

    /// Entries with the given genus and number of marked points.
    pub fn block(&self, genus: u32, points: usize) -> impl Iterator<Item = (&CorrelatorKey, &Rational)> {
        self.entries
            .iter()
            .filter(move |(k, _)| k.genus == genus && k.points() == points)
            .map(|(k, e)| (k, &e.value))
    }

    pub fn extend(&mut self, other: &CorrelatorTable) {
        for (k, e) in other.iter() {
            self.entries.insert(k.clone(), e.clone());
        }
    }

    pub fn remove(&mut self, key: &CorrelatorKey) -> Option<TableEntry> {
        self.entries.remove(key)
    }
}

/// Anything that can answer Hodge-integral queries.
pub trait HodgeSource {
    fn hodge(&mut self, key: &CorrelatorKey) -> Result<Rational>;
}

/// Strict lookup: only stored values, no recursion. Keys failing the
/// dimension gate are zero.
impl HodgeSource for CorrelatorTable {
    fn hodge(&mut self, key: &CorrelatorKey) -> Result<Rational> {
        if !key.satisfies_dimension_gate() {
            return Ok(Rational::from_integer(0.into()));
        }
        self.get(key)
            .cloned()
            .ok_or_else(|| Error::MissingTableEntry(key.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    #[test]
    fn keys_are_canonical() {
        let a = CorrelatorKey::psi(1, vec![3, 0, 0]).unwrap();
        let b = CorrelatorKey::psi(1, vec![0, 3, 0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.exponents(), &[0, 0, 3]);
        assert_eq!(a.to_string(), "⟨τ_0 τ_0 τ_3⟩_1");
    }

    #[test]
    fn unstable_keys_rejected() {
        assert!(matches!(CorrelatorKey::psi(0, vec![0, 0]), Err(Error::UnstableKey { .. })));
        assert!(matches!(CorrelatorKey::psi(0, vec![0]), Err(Error::UnstableKey { .. })));
        assert!(matches!(CorrelatorKey::psi(2, vec![]), Err(Error::UnstableKey { .. })));
        assert!(CorrelatorKey::psi(1, vec![1]).is_ok());
        assert!(CorrelatorKey::new(1, vec![0], 2).is_err());
        assert!(matches!(
            CorrelatorKey::from_signed(1, &[-1, 2], 0),
            Err(Error::NegativeExponent)
        ));
    }

    #[test]
    fn dimension_gate() {
        assert!(CorrelatorKey::new(2, vec![3], 1).unwrap().satisfies_dimension_gate());
        assert!(!CorrelatorKey::psi(0, vec![1, 1, 1]).unwrap().satisfies_dimension_gate());
        let mut t = CorrelatorTable::new();
        let bad = CorrelatorKey::psi(0, vec![1, 0, 0]).unwrap();
        assert!(t.insert(bad, rational(1, 1), Provenance::Extracted).is_err());
    }

    #[test]
    fn strict_lookup() {
        let mut t = CorrelatorTable::new();
        let k = CorrelatorKey::psi(1, vec![1]).unwrap();
        assert!(matches!(t.hodge(&k), Err(Error::MissingTableEntry(_))));
        t.insert(k.clone(), rational(1, 24), Provenance::Extracted).unwrap();
        assert_eq!(t.hodge(&k).unwrap(), rational(1, 24));
        let off = CorrelatorKey::psi(1, vec![2]).unwrap();
        assert_eq!(t.hodge(&off).unwrap(), rational(0, 1));
    }
}
