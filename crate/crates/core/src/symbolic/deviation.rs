use num_traits::{One, Signed, Zero};

use crate::error::{AemfpError, Result};
use crate::rational::{int, Rational};
use crate::symbolic::poly::{min_on_interval, PolyValue};

/// A monotonically increasing deviation function `Δ` with `Δ(x) >= x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DeviationFn {
    /// `x ↦ x + c`
    ConstantShift(Rational),
    /// `x ↦ slope·x + intercept`
    Affine { slope: Rational, intercept: Rational },
    /// `x ↦ Σ coeffs[i]·x^i`. Concave polynomials can be solved; convex ones
    /// (such as `2x² + 1`) only appear in reduction gadgets and oracles.
    Poly(Vec<Rational>),
}

impl DeviationFn {
    pub fn constant_shift(c: Rational) -> Result<Self> {
        if c.is_negative() {
            return Err(AemfpError::InvalidDeviation("constant shift must be nonnegative".into()));
        }
        Ok(DeviationFn::ConstantShift(c))
    }

    pub fn affine(slope: Rational, intercept: Rational) -> Result<Self> {
        if slope < Rational::one() || intercept.is_negative() {
            return Err(AemfpError::InvalidDeviation(
                "affine deviation needs slope >= 1 and intercept >= 0".into(),
            ));
        }
        Ok(DeviationFn::Affine { slope, intercept })
    }

    pub fn poly(coeffs: Vec<Rational>) -> Result<Self> {
        let p = PolyValue::new(coeffs.clone());
        if p.is_zero() {
            return Err(AemfpError::InvalidDeviation("zero polynomial".into()));
        }
        if p.coeffs()[0].is_negative() {
            return Err(AemfpError::InvalidDeviation("Δ(0) must be nonnegative".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(DeviationFn::Poly(coeffs))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            DeviationFn::ConstantShift(c) => x + c,
            DeviationFn::Affine { slope, intercept } => slope * x + intercept,
            DeviationFn::Poly(c) => PolyValue::new(c.clone()).eval(x),
        }
    }

    pub fn as_poly(&self) -> PolyValue {
        match self {
            DeviationFn::ConstantShift(c) => PolyValue::new(vec![c.clone(), Rational::one()]),
            DeviationFn::Affine { slope, intercept } => PolyValue::new(vec![intercept.clone(), slope.clone()]),
            DeviationFn::Poly(c) => PolyValue::new(c.clone()),
        }
    }

    pub fn constant_shift_value(&self) -> Option<&Rational> {
        match self {
            DeviationFn::ConstantShift(c) => Some(c),
            _ => None,
        }
    }

    /// Affine in `x` (constant shifts included).
    pub fn is_linear(&self) -> bool {
        self.as_poly().degree() <= 1
    }

    /// Monotone on `[0, upper]` with `Δ(x) >= x` there.
    pub fn validate_on(&self, upper: &Rational) -> Result<()> {
        let zero = Rational::zero();
        let p = self.as_poly();
        if min_on_interval(&p.derivative(), &zero, upper).is_negative() {
            return Err(AemfpError::InvalidDeviation(format!("not increasing on [0, {upper}]")));
        }
        let gap = p - PolyValue::identity();
        if min_on_interval(&gap, &zero, upper).is_negative() {
            return Err(AemfpError::InvalidDeviation(format!("Δ(x) < x somewhere on [0, {upper}]")));
        }
        Ok(())
    }

    /// Concavity certificate on `[0, upper]`: the second derivative is nowhere
    /// positive. For quadratics this is the sign of the leading coefficient.
    pub fn is_concave_on(&self, upper: &Rational) -> bool {
        let second = self.as_poly().derivative().derivative();
        if second.degree() == 0 {
            return !second.coeffs().first().is_some_and(|c| c.is_positive());
        }
        -min_on_interval(&-second, &Rational::zero(), upper) <= Rational::zero()
    }

    /// Largest integer flow allowed when the set minimum is `x` (integral `x`).
    pub fn floor_at(&self, x: &Rational) -> Rational {
        self.eval(x).floor()
    }

    /// `x ↦ 2x² + 1`
    pub fn convex_gadget() -> Self {
        DeviationFn::Poly(vec![int(1), int(0), int(2)])
    }
}
