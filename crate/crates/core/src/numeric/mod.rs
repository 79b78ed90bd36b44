//! Exact arithmetic and the small combinatorial primitives shared by every
//! other module. Nothing in the crate touches floating point.

mod linsolve;
mod profile;
mod series;

pub use linsolve::{solve_exact, LinearSystem};
pub use profile::Profile;
pub use series::{series_sin_kernel, series_sinh_kernel, TruncatedSeries};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator. `Display` prints `p/q`, or a bare integer when `q = 1`.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(2n-1)!!`, with the convention `(-1)!! = 1`.
pub fn odd_double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 2 * n - 1;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `total! / (parts_1! ... parts_n!)`; zero when the parts do not sum to `total`.
pub fn multinomial(total: u32, parts: &[u32]) -> BigInt {
    if parts.iter().sum::<u32>() != total {
        return BigInt::zero();
    }
    parts
        .iter()
        .fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// `e_i(values)`, computed by the standard one-variable-at-a-time recurrence.
pub fn elementary_symmetric(i: usize, values: &[i64]) -> BigInt {
    if i > values.len() {
        return BigInt::zero();
    }
    let mut e = vec![BigInt::zero(); i + 1];
    e[0] = BigInt::one();
    for &x in values {
        for j in (1..=i).rev() {
            let prev = e[j - 1].clone();
            e[j] += prev * x;
        }
    }
    e.swap_remove(i)
}

/// Number of finite simple branch points, `K + n + 2g - 2`.
pub fn mu(genus: u32, profile: &Profile) -> u32 {
    // K >= 1 and n >= 1, so this is never negative for an accepted profile.
    profile.degree() + profile.len() as u32 + 2 * genus - 2
}

pub fn aut_count(profile: &Profile) -> BigInt {
    profile.aut_count()
}

pub fn centralizer_order(profile: &Profile) -> BigInt {
    profile.centralizer_order()
}

/// `prod k_i^{k_i} / k_i!`, the combinatorial prefactor shared by every
/// closed formula and by ELSV.
pub fn hurwitz_weight(profile: &Profile) -> Rational {
    profile.parts().iter().fold(Rational::one(), |acc, &k| {
        acc * Rational::new(BigInt::from(k).pow(k), factorial(k))
    })
}

pub fn pow_rational(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(4), BigInt::from(24));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn double_factorials() {
        assert_eq!(odd_double_factorial(0), BigInt::from(1));
        assert_eq!(odd_double_factorial(1), BigInt::from(1));
        assert_eq!(odd_double_factorial(3), BigInt::from(15));
        assert_eq!(odd_double_factorial(5), BigInt::from(945));
    }

    #[test]
    fn elementary_symmetric_values() {
        assert_eq!(elementary_symmetric(2, &[1, 2, 3]), BigInt::from(11));
        assert_eq!(elementary_symmetric(0, &[]), BigInt::from(1));
        assert_eq!(elementary_symmetric(0, &[5, 7]), BigInt::from(1));
        assert_eq!(elementary_symmetric(3, &[1, 1, 1]), BigInt::from(1));
        assert_eq!(elementary_symmetric(3, &[1, 1]), BigInt::from(0));
    }

    #[test]
    fn mu_values() {
        let p = |s: &str| s.parse::<Profile>().unwrap();
        assert_eq!(mu(0, &p("1,1,1")), 4);
        assert_eq!(mu(1, &p("2")), 3);
        assert_eq!(mu(2, &p("3")), 6);
        assert_eq!(mu(0, &p("1")), 0);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(3, &[1, 2]), BigInt::from(3));
        assert_eq!(multinomial(2, &[2]), BigInt::from(1));
        assert_eq!(multinomial(2, &[1, 0]), BigInt::from(0));
    }

    #[test]
    fn rationals_are_reduced() {
        let r = rational(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(rational(8, 4).to_string(), "2");
    }

    fn brute_e(i: usize, xs: &[i64]) -> i64 {
        // sum over all i-subsets
        let n = xs.len();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == i)
            .map(|m| {
                (0..n)
                    .filter(|b| m & (1 << b) != 0)
                    .map(|b| xs[b])
                    .product::<i64>()
            })
            .sum()
    }

    proptest! {
        #[test]
        fn newton_style_recurrence(xs in prop::collection::vec(-5i64..6, 1..7), i in 1usize..7) {
            let (last, init) = xs.split_last().unwrap();
            let lhs = elementary_symmetric(i, &xs);
            let rhs = elementary_symmetric(i, init) + elementary_symmetric(i - 1, init) * *last;
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs, BigInt::from(brute_e(i, &xs)));
        }

        #[test]
        fn field_laws(a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30, e in -9i64..9, f in 1i64..9) {
            let (x, y, z) = (rational(a, b), rational(c, d), rational(e, f));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
            prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
            let s = &x * &y + &z;
            prop_assert!(s.denom() > &BigInt::from(0));
            prop_assert_eq!(num_integer::Integer::gcd(s.numer(), s.denom()), BigInt::from(1));
        }
    }
}
