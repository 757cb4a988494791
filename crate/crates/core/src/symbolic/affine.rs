use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::flow::FlowNumber;
use crate::rational::{fmt_rational, Rational};

/// `constant + Σ coeffs[i]·λ_i` with exact rational coefficients.
///
/// Trailing zero coefficients are trimmed, so structurally equal forms compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineValue {
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl AffineValue {
    pub fn new(constant: Rational, coeffs: Vec<Rational>) -> Self {
        let mut v = AffineValue { constant, coeffs };
        v.trim();
        v
    }

    pub fn constant_value(c: Rational) -> Self {
        AffineValue { constant: c, coeffs: Vec::new() }
    }

    /// `scale·λ_param + offset`
    pub fn parameter(param: usize, scale: Rational, offset: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); param + 1];
        coeffs[param] = scale;
        Self::new(offset, coeffs)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, param: usize) -> Rational {
        self.coeffs.get(param).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Indices of parameters with a nonzero coefficient.
    pub fn free_parameters(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn eval(&self, lambda: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &lambda[i];
            }
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.constant * k, self.coeffs.iter().map(|c| c * k).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn zip_with(self, rhs: Self, f: impl Fn(Rational, Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut a = self.coeffs;
        let mut b = rhs.coeffs;
        a.resize(len, Rational::zero());
        b.resize(len, Rational::zero());
        let coeffs = a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect();
        Self::new(f(self.constant, rhs.constant), coeffs)
    }
}

impl Add for AffineValue {
    type Output = AffineValue;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for AffineValue {
    type Output = AffineValue;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for AffineValue {
    type Output = AffineValue;
    fn neg(self) -> Self {
        AffineValue { constant: -self.constant, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl FlowNumber for AffineValue {
    fn flow_zero() -> Self {
        AffineValue::default()
    }
    fn from_rational(c: &Rational) -> Self {
        AffineValue::constant_value(c.clone())
    }
}

impl fmt::Display for AffineValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.constant))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, " {sign} {}·λ{}", fmt_rational(&c.abs()), i + 1)?;
        }
        Ok(())
    }
}
