use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{factorial, Rational};
use crate::error::{Error, Result};

/// Even power series in `t`, exact through `t^order`.
///
/// `coeffs[j]` is the coefficient of `t^{2j}`; odd powers are identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: u32,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: u32) -> Self {
        let order = order - order % 2;
        Self {
            order,
            coeffs: vec![Rational::zero(); order as usize / 2 + 1],
        }
    }

    pub fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Builds a series from coefficients of `t^0, t^2, t^4, ...`; entries
    /// beyond the order are dropped.
    pub fn from_even_coeffs(order: u32, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient of `t^exp`.
    pub fn coeff(&self, exp: u32) -> Rational {
        if exp % 2 == 1 || exp > self.order {
            return Rational::zero();
        }
        self.coeffs[exp as usize / 2].clone()
    }

    /// Coefficients of `t^0, t^2, ..., t^order`.
    pub fn even_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse through the truncation order.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidArgument(
                "series with zero constant term has no reciprocal".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut out = Self::zero(self.order);
        out.coeffs[0] = inv0.clone();
        for j in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for i in 1..=j {
                acc += &self.coeffs[i] * &out.coeffs[j - i];
            }
            out.coeffs[j] = -acc * &inv0;
        }
        Ok(out)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut out = TruncatedSeries::zero(order);
        let len = out.coeffs.len();
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c}) t^{}", 2 * j)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order + 2)
    }
}

// sin(t/2)/(t/2) or sinh(t/2)/(t/2), both even in t.
fn half_angle_ratio(order: u32, alternating: bool) -> TruncatedSeries {
    let n = order as usize / 2 + 1;
    let coeffs = (0..n).map(|j| {
        let denom = BigInt::from(4u32).pow(j as u32) * factorial(2 * j as u32 + 1);
        let sign = if alternating && j % 2 == 1 { -1 } else { 1 };
        Rational::new(BigInt::from(sign), denom)
    });
    TruncatedSeries::from_even_coeffs(order, coeffs)
}

fn kernel(kplus1: u32, order: u32, alternating: bool) -> Result<TruncatedSeries> {
    if kplus1 == 0 {
        return Err(Error::InvalidArgument("kernel exponent must be at least 1".into()));
    }
    if order % 2 == 1 {
        return Err(Error::InvalidArgument(format!("series order {order} must be even")));
    }
    Ok(half_angle_ratio(order, alternating)
        .reciprocal()?
        .pow(kplus1))
}

/// `((t/2) / sin(t/2))^kplus1` through `t^order`.
pub fn series_sin_kernel(kplus1: u32, order: u32) -> Result<TruncatedSeries> {
    kernel(kplus1, order, true)
}

/// `((t/2) / sinh(t/2))^kplus1` through `t^order`.
pub fn series_sinh_kernel(kplus1: u32, order: u32) -> Result<TruncatedSeries> {
    kernel(kplus1, order, false)
}
