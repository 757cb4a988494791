use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::flow::FlowNumber;
use crate::rational::{int, Rational};

/// Univariate polynomial `Σ coeffs[i]·λ^i`, coefficients low to high, trailing zeros trimmed.
///
/// Flow updates only add and subtract values, so the degree never exceeds the
/// largest degree among the capacities it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyValue {
    coeffs: Vec<Rational>,
}

impl PolyValue {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = PolyValue { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn constant_value(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `λ`
    pub fn identity() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    fn zip_with(self, rhs: Self, f: impl Fn(Rational, Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut a = self.coeffs;
        let mut b = rhs.coeffs;
        a.resize(len, Rational::zero());
        b.resize(len, Rational::zero());
        Self::new(a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect())
    }
}

impl Add for PolyValue {
    type Output = PolyValue;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for PolyValue {
    type Output = PolyValue;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for PolyValue {
    type Output = PolyValue;
    fn neg(self) -> Self {
        PolyValue { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl FlowNumber for PolyValue {
    fn flow_zero() -> Self {
        PolyValue::default()
    }
    fn from_rational(c: &Rational) -> Self {
        PolyValue::constant_value(c.clone())
    }
}

/// A real root: exact when rational, otherwise a rational bracket containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl Root {
    /// The exact root, or the bracket midpoint.
    pub fn value(&self) -> Rational {
        match self {
            Root::Exact(r) => r.clone(),
            Root::Bracket { lo, hi } => (lo + hi) / int(2),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Root::Exact(r) => r == x,
            Root::Bracket { lo, hi } => lo <= x && x <= hi,
        }
    }
}

/// Bits of relative precision for bracketed roots: width `<= 2^-BITS·(hi - lo)`.
pub const ROOT_BITS: u32 = 64;

/// All real roots of `p` in `[lo, hi]`, ascending and deduplicated.
///
/// Linear and quadratic polynomials with rational roots are solved in closed
/// form; everything else is isolated between critical points and bisected.
/// The zero polynomial has no isolated roots and yields an empty list.
pub fn poly_roots(p: &PolyValue, lo: &Rational, hi: &Rational) -> Vec<Root> {
    if p.is_constant() || lo > hi {
        return Vec::new();
    }
    if let Some(exact) = closed_form_roots(p) {
        return exact.into_iter().filter(|r| lo <= r && r <= hi).map(Root::Exact).collect();
    }
    let width = hi - lo;
    let tol = &width / Rational::from_integer(BigInt::one() << ROOT_BITS);

    let mut cuts = vec![lo.clone()];
    for c in poly_roots(&p.derivative(), lo, hi) {
        let v = c.value();
        if &v > lo && &v < hi {
            cuts.push(v);
        }
    }
    cuts.push(hi.clone());

    let mut roots: Vec<Root> = Vec::new();
    let push = |r: Root, roots: &mut Vec<Root>| {
        let v = r.value();
        if roots.last().is_none_or(|last| !last.contains(&v) && last.value() != v) {
            roots.push(r);
        }
    };
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa.is_zero() {
            push(Root::Exact(a.clone()), &mut roots);
        }
        if !fa.is_zero() && !fb.is_zero() && fa.signum() != fb.signum() {
            push(bisect(p, a.clone(), b.clone(), &tol), &mut roots);
        }
    }
    if p.eval(hi).is_zero() {
        push(Root::Exact(hi.clone()), &mut roots);
    }
    roots
}

fn bisect(p: &PolyValue, mut a: Rational, mut b: Rational, tol: &Rational) -> Root {
    let sa = p.eval(&a).signum();
    while &(&b - &a) > tol {
        let mid = (&a + &b) / int(2);
        let fm = p.eval(&mid);
        if fm.is_zero() {
            return Root::Exact(mid);
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Root::Bracket { lo: a, hi: b }
}

/// Rational roots of degree <= 2 polynomials, or `None` when a closed form does not apply.
fn closed_form_roots(p: &PolyValue) -> Option<Vec<Rational>> {
    let c = p.coeffs();
    match c.len() {
        2 => Some(vec![-&c[0] / &c[1]]),
        3 => {
            let (c0, c1, c2) = (&c[0], &c[1], &c[2]);
            let disc = c1 * c1 - int(4) * c2 * c0;
            match disc.cmp(&Rational::zero()) {
                Ordering::Less => Some(Vec::new()),
                Ordering::Equal => Some(vec![-c1 / (int(2) * c2)]),
                Ordering::Greater => {
                    let root = rational_sqrt(&disc)?;
                    let a = (-c1 - &root) / (int(2) * c2);
                    let b = (-c1 + &root) / (int(2) * c2);
                    let mut v = vec![a, b];
                    v.sort();
                    Some(v)
                }
            }
        }
        _ => None,
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Minimum of `p` over `[lo, hi]`, evaluated at the endpoints and critical
/// points (bracketed critical points are evaluated at their midpoints).
pub fn min_on_interval(p: &PolyValue, lo: &Rational, hi: &Rational) -> Rational {
    let mut best = p.eval(lo).min(p.eval(hi));
    for r in poly_roots(&p.derivative(), lo, hi) {
        best = best.min(p.eval(&r.value()));
    }
    best
}
