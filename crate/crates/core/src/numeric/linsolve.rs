use std::collections::BTreeMap;

use num_traits::Zero;

use super::Rational;
use crate::error::{Error, Result};

/// Dense exact linear system with labelled columns.
#[derive(Clone, Debug)]
pub struct LinearSystem<L> {
    columns: Vec<L>,
    rows: Vec<(Vec<Rational>, Rational)>,
}

impl<L> LinearSystem<L> {
    pub fn new(columns: Vec<L>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.columns.len(), "row width must match column count");
        self.rows.push((coeffs, rhs));
    }

    pub fn columns(&self) -> &[L] {
        &self.columns
    }

    pub fn rows(&self) -> &[(Vec<Rational>, Rational)] {
        &self.rows
    }

    /// Applies the coefficient matrix to `x` (column order).
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|(row, _)| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Gauss-Jordan elimination over the rationals. The pivot in each column is
/// the first row (in row order) with a nonzero entry.
pub fn solve_exact<L: Ord + Clone>(system: &LinearSystem<L>) -> Result<BTreeMap<L, Rational>> {
    let unknowns = system.columns.len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = system.rows.clone();
    let mut pivot_row = 0;
    let mut full_rank = true;
    for col in 0..unknowns {
        let Some(offset) = rows[pivot_row..].iter().position(|(r, _)| !r[col].is_zero()) else {
            full_rank = false;
            continue;
        };
        rows.swap(pivot_row, pivot_row + offset);
        let inv = rows[pivot_row].0[col].recip();
        {
            let (coeffs, rhs) = &mut rows[pivot_row];
            for c in coeffs.iter_mut() {
                *c *= &inv;
            }
            *rhs *= &inv;
        }
        let (pivot_coeffs, pivot_rhs) = rows[pivot_row].clone();
        for (i, (coeffs, rhs)) in rows.iter_mut().enumerate() {
            if i == pivot_row || coeffs[col].is_zero() {
                continue;
            }
            let factor = coeffs[col].clone();
            for (c, p) in coeffs.iter_mut().zip(&pivot_coeffs) {
                *c -= &factor * p;
            }
            *rhs -= &factor * &pivot_rhs;
        }
        pivot_row += 1;
    }
    if !full_rank {
        return Err(Error::RankDeficient {
            rank: pivot_row,
            unknowns,
        });
    }
    // Rows past the last pivot are all-zero on the left; a nonzero rhs there
    // means the equations contradict each other.
    if let Some(i) = rows[pivot_row..].iter().position(|(_, rhs)| !rhs.is_zero()) {
        return Err(Error::Inconsistent { row: pivot_row + i });
    }
    Ok(system
        .columns
        .iter()
        .cloned()
        .zip(rows.into_iter().map(|(_, rhs)| rhs))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integer, rational};
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        integer(v)
    }

    #[test]
    fn identity_system() {
        let mut sys = LinearSystem::new(vec!["a", "b"]);
        sys.push_row(vec![r(1), r(0)], rational(1, 2));
        sys.push_row(vec![r(0), r(1)], rational(1, 3));
        let sol = solve_exact(&sys).unwrap();
        assert_eq!(sol["a"], rational(1, 2));
        assert_eq!(sol["b"], rational(1, 3));
    }

    #[test]
    fn genus_two_one_point_system() {
        let mut sys = LinearSystem::new(vec![0, 1, 2]);
        sys.push_row(vec![r(1), r(-1), r(1)], r(0));
        sys.push_row(vec![r(16), r(-8), r(4)], rational(1, 480));
        sys.push_row(vec![r(81), r(-27), r(9)], rational(1, 40));
        let sol = solve_exact(&sys).unwrap();
        assert_eq!(sol[&0], rational(1, 1152));
        assert_eq!(sol[&1], rational(1, 480));
        assert_eq!(sol[&2], rational(7, 5760));
    }

    #[test]
    fn singular_is_rank_deficient() {
        let mut sys = LinearSystem::new(vec![0, 1]);
        sys.push_row(vec![r(1), r(1)], r(1));
        sys.push_row(vec![r(2), r(2)], r(2));
        assert!(matches!(solve_exact(&sys), Err(Error::RankDeficient { rank: 1, unknowns: 2 })));
    }

    #[test]
    fn too_few_rows_is_rank_deficient() {
        let mut sys = LinearSystem::new(vec![0, 1]);
        sys.push_row(vec![r(1), r(2)], r(1));
        assert!(matches!(solve_exact(&sys), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn overdetermined_contradiction() {
        let mut sys = LinearSystem::new(vec![0]);
        sys.push_row(vec![r(1)], r(1));
        sys.push_row(vec![r(2)], r(3));
        assert!(matches!(solve_exact(&sys), Err(Error::Inconsistent { row: 1 })));
    }

    #[test]
    fn overdetermined_consistent() {
        let mut sys = LinearSystem::new(vec![0]);
        sys.push_row(vec![r(2)], r(1));
        sys.push_row(vec![r(4)], r(2));
        assert_eq!(solve_exact(&sys).unwrap()[&0], rational(1, 2));
    }

    proptest! {
        #[test]
        fn solution_reproduces_rhs(entries in prop::collection::vec(-6i64..7, 9), x in prop::collection::vec((-9i64..9, 1i64..6), 3)) {
            let x: Vec<Rational> = x.into_iter().map(|(a, b)| rational(a, b)).collect();
            let mut sys = LinearSystem::new(vec![0, 1, 2]);
            for row in entries.chunks(3) {
                let coeffs: Vec<Rational> = row.iter().map(|&v| r(v)).collect();
                let rhs = coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
                sys.push_row(coeffs, rhs);
            }
            match solve_exact(&sys) {
                Ok(sol) => {
                    let sol: Vec<Rational> = sol.into_values().collect();
                    prop_assert_eq!(&sol, &x);
                    let applied = sys.apply(&sol);
                    let rhs: Vec<Rational> = sys.rows().iter().map(|(_, b)| b.clone()).collect();
                    prop_assert_eq!(applied, rhs);
                }
                Err(Error::RankDeficient { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
