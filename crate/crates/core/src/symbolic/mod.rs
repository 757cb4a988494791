//! Exact symbolic values in the unknown optimum `λ*` and the comparison
//! plumbing that defers every undecidable sign to a [`Locator`].

mod affine;
mod deviation;
mod poly;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

pub use affine::AffineValue;
pub use deviation::DeviationFn;
pub use poly::{min_on_interval, poly_roots, PolyValue, Root, ROOT_BITS};

use crate::error::AemfpError;
use crate::flow::Comparator;
use crate::rational::{int, Rational};

/// Answers where the unknown optimum lies relative to a threshold:
/// `λ*_param.cmp(threshold)`.
pub trait Locator {
    type Error: From<AemfpError>;

    fn locate(&mut self, param: usize, threshold: &Rational) -> Result<Ordering, Self::Error>;
}

/// Compares two affine forms at `λ*`.
///
/// `a₁ + b₁λ < a₂ + b₂λ` is rewritten as a threshold test on `λ` against
/// `(a₂ - a₁)/(b₁ - b₂)`; forms that differ only in their constants never
/// reach the locator.
pub fn affine_compare<L: Locator>(lhs: &AffineValue, rhs: &AffineValue, locator: &mut L) -> Result<Ordering, L::Error> {
    let diff = lhs.clone() - rhs.clone();
    let mut free = diff.free_parameters();
    let Some(param) = free.next() else {
        return Ok(diff.constant().cmp(&Rational::zero()));
    };
    if free.next().is_some() {
        return Err(AemfpError::Internal(format!("comparison `{diff} ⋚ 0` involves several parameters")).into());
    }
    let slope = diff.coeff(param);
    let threshold = -diff.constant() / &slope;
    let side = locator.locate(param, &threshold)?;
    Ok(if slope.is_positive() { side } else { side.reverse() })
}

/// Sign of `p(λ*)` for `λ*` known to lie in `[lo, hi]`.
///
/// The sign is constant between consecutive roots, so only the roots are
/// located. A bracketed (irrational) root that the locator reports as equal is
/// treated as an exact zero, which is where the root tolerance enters.
pub fn poly_sign<L: Locator>(p: &PolyValue, lo: &Rational, hi: &Rational, locator: &mut L) -> Result<Ordering, L::Error> {
    if p.is_constant() {
        return Ok(p.eval(&Rational::zero()).cmp(&Rational::zero()));
    }
    let roots = poly_roots(p, lo, hi);
    let mut left = lo.clone();
    for r in &roots {
        let rv = r.value();
        match locator.locate(0, &rv)? {
            Ordering::Equal => return Ok(Ordering::Equal),
            Ordering::Less => return Ok(sign_between(p, &left, &rv)),
            Ordering::Greater => left = rv,
        }
    }
    Ok(sign_between(p, &left, hi))
}

fn sign_between(p: &PolyValue, a: &Rational, b: &Rational) -> Ordering {
    let v = if a == b { p.eval(a) } else { p.eval(&((a + b) / int(2))) };
    v.cmp(&Rational::zero())
}

/// Adapts a [`Locator`] to the flow engine's [`Comparator`] for affine values.
pub struct AffineComparator<'a, L> {
    pub locator: &'a mut L,
}

impl<L: Locator> Comparator<AffineValue> for AffineComparator<'_, L> {
    type Error = L::Error;

    fn sign(&mut self, v: &AffineValue) -> Result<Ordering, L::Error> {
        if v.is_constant() {
            return Ok(v.constant().cmp(&Rational::zero()));
        }
        affine_compare(v, &AffineValue::default(), self.locator)
    }
}

/// Adapts a [`Locator`] to the flow engine's [`Comparator`] for polynomial values.
pub struct PolyComparator<'a, L> {
    pub locator: &'a mut L,
    pub lo: Rational,
    pub hi: Rational,
}

impl<L: Locator> Comparator<PolyValue> for PolyComparator<'_, L> {
    type Error = L::Error;

    fn sign(&mut self, v: &PolyValue) -> Result<Ordering, L::Error> {
        if v.is_zero() {
            return Ok(Ordering::Equal);
        }
        poly_sign(v, &self.lo, &self.hi, self.locator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    /// Locator backed by a known optimum; counts calls.
    struct Known {
        star: Rational,
        calls: usize,
    }

    impl Locator for Known {
        type Error = AemfpError;
        fn locate(&mut self, _param: usize, t: &Rational) -> Result<Ordering, AemfpError> {
            self.calls += 1;
            Ok(self.star.cmp(t))
        }
    }

    fn aff(a: i64, b: i64) -> AffineValue {
        AffineValue::new(int(a), vec![int(b)])
    }

    #[test]
    fn identical_forms_skip_locator() {
        let mut k = Known { star: int(5), calls: 0 };
        assert_eq!(affine_compare(&aff(3, 2), &aff(3, 2), &mut k).unwrap(), Ordering::Equal);
        assert_eq!(affine_compare(&aff(0, 0), &aff(2, 0), &mut k).unwrap(), Ordering::Less);
        assert_eq!(k.calls, 0);
    }

    #[test]
    fn threshold_reduction() {
        // 1 + λ vs 4: threshold 3, λ* = 5 > 3.
        let mut k = Known { star: int(5), calls: 0 };
        assert_eq!(affine_compare(&aff(1, 1), &aff(4, 0), &mut k).unwrap(), Ordering::Greater);
        assert_eq!(k.calls, 1);
        // Negative slope flips the verdict: 4 - λ vs 1 at λ* = 5.
        assert_eq!(affine_compare(&aff(4, -1), &aff(1, 0), &mut k).unwrap(), Ordering::Less);
        // Exactly at the threshold.
        let mut k = Known { star: int(3), calls: 0 };
        assert_eq!(affine_compare(&aff(1, 1), &aff(4, 0), &mut k).unwrap(), Ordering::Equal);
    }

    #[test]
    fn several_parameters_rejected() {
        let mut k = Known { star: int(1), calls: 0 };
        let two = AffineValue::new(int(0), vec![int(1), int(1)]);
        assert!(affine_compare(&two, &AffineValue::default(), &mut k).is_err());
    }

    #[test]
    fn poly_sign_by_roots() {
        // λ² - 2 at λ* = 1 (negative), 3/2 (positive), with an irrational root.
        let p = PolyValue::new(vec![int(-2), int(0), int(1)]);
        for (star, want) in [(int(1), Ordering::Less), (frac(3, 2), Ordering::Greater)] {
            let mut k = Known { star, calls: 0 };
            assert_eq!(poly_sign(&p, &int(0), &int(10), &mut k).unwrap(), want);
        }
    }

    proptest::proptest! {
        #[test]
        fn compare_agrees_with_evaluation(a1 in -20i64..20, b1 in -5i64..5, a2 in -20i64..20, b2 in -5i64..5, sn in 0i64..200, sd in 1i64..7) {
            let star = frac(sn, sd);
            let (x, y) = (aff(a1, b1), aff(a2, b2));
            let mut k = Known { star: star.clone(), calls: 0 };
            let got = affine_compare(&x, &y, &mut k).unwrap();
            let lam = [star];
            proptest::prop_assert_eq!(got, x.eval(&lam).cmp(&y.eval(&lam)));
        }

        #[test]
        fn evaluation_is_a_homomorphism(ops in proptest::collection::vec((-9i64..9, -9i64..9, 0u8..3), 1..12), ln in 0i64..50, ld in 1i64..9) {
            let lam = [frac(ln, ld)];
            let mut acc = AffineValue::default();
            let mut num = Rational::zero();
            for (a, b, op) in ops {
                let v = aff(a, b);
                let x = v.eval(&lam);
                match op {
                    0 => { acc = acc + v; num += x; }
                    1 => { acc = acc - v; num -= x; }
                    _ => { acc = -acc; num = -num; }
                }
            }
            proptest::prop_assert_eq!(acc.eval(&lam), num);
        }
    }
}
