//! Parametric search for constant-shift deviations.
//!
//! The innermost set is solved by running Edmonds–Karp on affine values in
//! the unknown `λ*` and resolving every comparison with two max-flows just
//! left and right of the threshold. Outer sets are found by bisection on the
//! concave value of the inner problem followed by rational recovery.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{finish, require_constant, Method, SolveResult};
use crate::error::{AemfpError, Result};
use crate::flow::{bounded_max_flow, Outcome};
use crate::instance::{Evaluation, Instance, Rounding};
use crate::rational::{int, lcm_denominators, simplest_in_interval, Rational};
use crate::symbolic::{affine_compare, AffineComparator, AffineValue, Locator};

/// Where the optimum of one coordinate lies relative to a threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    OptLeft,
    OptRight,
    OptimalAt(Rational),
}

/// Resolves `λ*_set ⋚ lambda[set]` with the other coordinates held at `lambda`.
pub fn resolve_comparison(inst: &Instance, lambda: &[Rational], set: usize) -> Result<Resolution> {
    require_constant(inst)?;
    inst.check_lambda(lambda)?;
    let mut slice = Slice::new(inst, set, lambda.to_vec());
    slice.resolve(&lambda[set])
}

/// Exact optimum for a single constant-shift set.
pub fn solve_simple_constant(inst: &Instance) -> Result<SolveResult> {
    if inst.set_count() != 1 {
        return Err(AemfpError::InvalidInstance(format!(
            "expected one homologous set, found {}",
            inst.set_count()
        )));
    }
    solve_k_constant(inst)
}

/// Exact joint optimum for any number of constant-shift sets. The running
/// time grows exponentially in the number of sets.
pub fn solve_k_constant(inst: &Instance) -> Result<SolveResult> {
    require_constant(inst)?;
    let (lambda, _) = optimize_level(inst, Vec::new())?;
    finish(inst, lambda, Rounding::Exact, Method::Parametric)
}

/// Optimises coordinates `prefix.len()..k` with the prefix fixed. Returns the
/// full parameter vector and its value, or `Infeasible` if no completion of
/// the prefix is feasible.
fn optimize_level(inst: &Instance, prefix: Vec<Rational>) -> Result<(Vec<Rational>, Rational)> {
    let k = inst.set_count();
    let level = prefix.len();
    if k == 0 {
        return match inst.evaluate(&[], Rounding::Exact)? {
            Evaluation::Feasible { flow, .. } => Ok((Vec::new(), flow.flow_value)),
            Evaluation::Infeasible { .. } => Err(AemfpError::Infeasible),
        };
    }
    if level + 1 == k {
        let mut base = prefix;
        base.push(Rational::zero());
        let mut slice = Slice::new(inst, level, base);
        let (star, value) = slice.optimum()?;
        let mut lambda = slice.base;
        lambda[level] = star;
        return Ok((lambda, value));
    }

    let eval = |x: &Rational| -> Result<Option<(Vec<Rational>, Rational)>> {
        let mut p = prefix.clone();
        p.push(x.clone());
        match optimize_level(inst, p) {
            Ok(v) => Ok(Some(v)),
            Err(AemfpError::Infeasible) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let bound = Rational::from_integer(level_bound(inst, &prefix));
    let resolution = (&bound * &bound).recip();
    let delta = &resolution / int(4);
    let mut lo = Rational::zero();
    let mut hi = inst.set_upper(level);
    while &hi - &lo >= resolution {
        let x = (&lo + &hi) / int(2) - &delta / int(2);
        let here = eval(&x)?;
        let Some((_, fx)) = here else {
            hi = x;
            continue;
        };
        match eval(&(&x + &delta))? {
            Some((_, fy)) if fy > fx => lo = x,
            _ => hi = &x + &delta,
        }
    }
    let star = simplest_in_interval(&lo, &hi);
    eval(&star)?.ok_or(AemfpError::Infeasible)
}

/// Denominator bound for the optimum of coordinate `prefix.len()`:
/// `D · ⌈n^{n/2}⌉ · ∏_{i ≥ level} 2|R_i|` with `n = k - level`, from
/// Cramer's rule and Hadamard's inequality on the vertex systems.
fn level_bound(inst: &Instance, prefix: &[Rational]) -> BigInt {
    let level = prefix.len();
    let n = (inst.set_count() - level) as u32;
    let d = lcm_denominators(prefix.iter()).lcm(&inst.denominator_lcm());
    // ⌈n^{n/2}⌉ = ⌈sqrt(n^n)⌉
    let nn = BigInt::from(n).pow(n);
    let mut root = nn.sqrt();
    if &root * &root < nn {
        root += 1;
    }
    let mut bound = d * root;
    for set in &inst.sets()[level..] {
        bound *= BigInt::from(2 * set.edges.len());
    }
    bound
}

/// Local behaviour of `F` restricted to one coordinate at a probe point.
#[derive(Debug, Clone)]
enum Probe {
    /// Feasible, `F` increasing: `λ* > x`.
    Rises(Line),
    /// Feasible, `F` non-increasing: `λ* ≤ x`.
    Falls(Line),
    /// Infeasible because `x` is too small; the line is the certificate.
    TooLow(Line),
    /// Infeasible because `x` is too large.
    TooHigh(Line),
    /// Left of the domain; `λ* ≥ 0`.
    BelowZero,
    /// Right of the domain; `λ* ≤ u_R`.
    AboveUpper,
    /// Infeasible for every value of this coordinate.
    Empty,
}

#[derive(Debug, Clone)]
struct Line {
    constant: Rational,
    slope: Rational,
}

impl Line {
    fn root(&self) -> Rational {
        -&self.constant / &self.slope
    }

    fn intersect(&self, other: &Line) -> Rational {
        (&other.constant - &self.constant) / (&self.slope - &other.slope)
    }
}

/// `F` as a function of coordinate `set`, the others fixed at `base`.
pub(crate) struct Slice<'a> {
    inst: &'a Instance,
    set: usize,
    base: Vec<Rational>,
    upper: Rational,
    /// Every critical point has a denominator at most `bound`.
    bound: BigInt,
    /// Known strict bounds `lo < λ* < hi`, or the exact value.
    lo: Option<Rational>,
    hi: Option<Rational>,
    exact: Option<Rational>,
    memo: HashMap<Rational, Ordering>,
    pub(crate) probes: usize,
}

impl<'a> Slice<'a> {
    pub(crate) fn new(inst: &'a Instance, set: usize, base: Vec<Rational>) -> Self {
        let others = base.iter().enumerate().filter(|(i, _)| *i != set).map(|(_, v)| v);
        let d = lcm_denominators(others).lcm(&inst.denominator_lcm());
        let bound = d * BigInt::from(2 * inst.sets()[set].edges.len());
        Slice {
            upper: inst.set_upper(set),
            inst,
            set,
            base,
            bound,
            lo: None,
            hi: None,
            exact: None,
            memo: HashMap::new(),
            probes: 0,
        }
    }

    fn at(&self, x: &Rational) -> Vec<Rational> {
        let mut l = self.base.clone();
        l[self.set] = x.clone();
        l
    }

    fn probe(&mut self, x: &Rational) -> Result<Probe> {
        if x.is_negative() {
            return Ok(Probe::BelowZero);
        }
        if *x > self.upper {
            return Ok(Probe::AboveUpper);
        }
        self.probes += 1;
        let lambda = self.at(x);
        Ok(match self.inst.evaluate(&lambda, Rounding::Exact)? {
            Evaluation::Feasible { cut, .. } => {
                let (constant, slope) = cut.piece(self.set, &lambda);
                let line = Line { constant, slope };
                if line.slope.is_positive() {
                    Probe::Rises(line)
                } else {
                    Probe::Falls(line)
                }
            }
            Evaluation::Infeasible { certificate } => {
                let (constant, slope) = certificate.piece(self.set, &lambda);
                let line = Line { constant, slope };
                match line.slope.cmp(&Rational::zero()) {
                    Ordering::Greater => Probe::TooLow(line),
                    Ordering::Less => Probe::TooHigh(line),
                    Ordering::Equal => Probe::Empty,
                }
            }
        })
    }

    /// Probe points `θ ∓ ε` with no critical point in `[θ-ε, θ) ∪ (θ, θ+ε]`
    /// and denominators exceeding the critical-point bound.
    fn window(&self, theta: &Rational) -> (Rational, Rational) {
        let n2 = Rational::from_integer(&self.bound * &self.bound);
        let mut k: u64 = 3;
        loop {
            let eps = (&n2 * int(k as i64)).recip();
            let (x1, x2) = (theta - &eps, theta + &eps);
            if x1.denom() > &self.bound && x2.denom() > &self.bound {
                return (x1, x2);
            }
            k += 1;
        }
    }

    /// Decides `λ*` against `θ` from the two probes around it.
    pub(crate) fn resolve(&mut self, theta: &Rational) -> Result<Resolution> {
        if self.upper.is_zero() {
            return match self.probe(&Rational::zero())? {
                Probe::Rises(_) | Probe::Falls(_) => Ok(Resolution::OptimalAt(Rational::zero())),
                _ => Err(AemfpError::Infeasible),
            };
        }
        if theta.is_negative() {
            return Ok(Resolution::OptRight);
        }
        if *theta > self.upper {
            return Ok(Resolution::OptLeft);
        }
        let (x1, x2) = self.window(theta);
        let p1 = self.probe(&x1)?;
        if matches!(p1, Probe::Falls(_) | Probe::TooHigh(_)) {
            return Ok(Resolution::OptLeft);
        }
        let p2 = self.probe(&x2)?;
        if matches!(p2, Probe::Rises(_) | Probe::TooLow(_)) {
            return Ok(Resolution::OptRight);
        }
        use Probe::*;
        let star = match (p1, p2) {
            (Empty, _) | (_, Empty) => return Err(AemfpError::Infeasible),
            (Rises(a), Falls(b)) => a.intersect(&b),
            (Rises(_), AboveUpper) => self.upper.clone(),
            (Rises(_), TooHigh(h)) => h.root(),
            (BelowZero, Falls(_)) => Rational::zero(),
            (TooLow(h), Falls(_)) => h.root(),
            (left @ (BelowZero | TooLow(_)), right @ (AboveUpper | TooHigh(_))) => {
                let a = match left {
                    TooLow(h) => h.root(),
                    _ => Rational::zero(),
                };
                let b = match right {
                    TooHigh(h) => h.root(),
                    _ => self.upper.clone(),
                };
                if a > b {
                    return Err(AemfpError::Infeasible);
                }
                a
            }
            (l, r) => {
                return Err(AemfpError::Internal(format!("inconsistent probes {l:?} / {r:?} around {theta}")));
            }
        };
        Ok(Resolution::OptimalAt(star))
    }

    /// `λ*.cmp(θ)` with memoisation and the bounds learned so far.
    fn locate_value(&mut self, theta: &Rational) -> Result<Ordering> {
        if let Some(x) = &self.exact {
            return Ok(x.cmp(theta));
        }
        if let Some(o) = self.memo.get(theta) {
            return Ok(*o);
        }
        if self.lo.as_ref().is_some_and(|lo| theta <= lo) {
            return Ok(Ordering::Greater);
        }
        if self.hi.as_ref().is_some_and(|hi| theta >= hi) {
            return Ok(Ordering::Less);
        }
        let ord = match self.resolve(theta)? {
            Resolution::OptLeft => {
                if *theta <= self.upper {
                    self.hi = Some(theta.clone());
                }
                Ordering::Less
            }
            Resolution::OptRight => {
                if !theta.is_negative() {
                    self.lo = Some(theta.clone());
                }
                Ordering::Greater
            }
            Resolution::OptimalAt(x) => {
                let o = x.cmp(theta);
                self.exact = Some(x);
                o
            }
        };
        self.memo.insert(theta.clone(), ord);
        Ok(ord)
    }

    /// Runs Edmonds–Karp symbolically in `λ*` and returns `(λ*, F(λ*))`.
    pub(crate) fn optimum(&mut self) -> Result<(Rational, Rational)> {
        if self.upper.is_zero() {
            let Resolution::OptimalAt(x) = self.resolve(&Rational::zero())? else { unreachable!() };
            return self.value_at(x);
        }
        let inst = self.inst;
        let m = inst.graph().edge_count();
        let param = AffineValue::parameter(0, Rational::one(), Rational::zero());
        let mut lower = vec![AffineValue::default(); m];
        let mut upper: Vec<AffineValue> =
            inst.capacity().iter().map(|u| AffineValue::constant_value(u.clone())).collect();
        for (i, set) in inst.sets().iter().enumerate() {
            let (lo_i, dev_i) = if i == self.set {
                (param.clone(), param.clone() + AffineValue::constant_value(shift(&set.deviation)))
            } else {
                let l = self.base[i].clone();
                let d = set.deviation.eval(&l);
                (AffineValue::constant_value(l), AffineValue::constant_value(d))
            };
            for &e in &set.edges {
                lower[e] = lo_i.clone();
                if affine_compare(&dev_i, &upper[e], self)? == Ordering::Less {
                    upper[e] = dev_i.clone();
                }
            }
        }
        let big: Rational = inst.capacity().iter().sum::<Rational>() + Rational::one();
        let outcome = bounded_max_flow(
            inst.graph(),
            &lower,
            &upper,
            &AffineValue::constant_value(big),
            &mut AffineComparator { locator: self },
        )?;
        let value = match outcome {
            Outcome::Feasible { value, .. } => value,
            Outcome::Infeasible { .. } => return Err(AemfpError::Infeasible),
        };
        let star = match self.exact.clone() {
            Some(x) => x,
            None => {
                let candidate = if value.coeff(0).is_positive() {
                    self.hi.clone().unwrap_or_else(|| self.upper.clone())
                } else {
                    self.lo.clone().unwrap_or_else(Rational::zero)
                };
                if self.locate_value(&candidate)? != Ordering::Equal {
                    return Err(AemfpError::Internal(format!(
                        "parametric search ended without locating the optimum near {candidate}"
                    )));
                }
                candidate
            }
        };
        let (star, numeric) = self.value_at(star)?;
        if value.eval(std::slice::from_ref(&star)) != numeric {
            return Err(AemfpError::Internal("symbolic and numeric flow values disagree".into()));
        }
        Ok((star, numeric))
    }

    fn value_at(&self, x: Rational) -> Result<(Rational, Rational)> {
        match self.inst.evaluate(&self.at(&x), Rounding::Exact)? {
            Evaluation::Feasible { flow, .. } => Ok((x, flow.flow_value)),
            Evaluation::Infeasible { .. } => Err(AemfpError::Infeasible),
        }
    }
}

impl Locator for Slice<'_> {
    type Error = AemfpError;

    fn locate(&mut self, param: usize, threshold: &Rational) -> Result<Ordering> {
        if param != 0 {
            return Err(AemfpError::Internal(format!("unexpected parameter {param}")));
        }
        self.locate_value(threshold)
    }
}

fn shift(dev: &crate::symbolic::DeviationFn) -> Rational {
    dev.constant_shift_value().cloned().expect("checked by require_constant")
}
