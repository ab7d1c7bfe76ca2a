//! Integer polynomials in one indeterminate and their ratios, with exact coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    ZeroDenominator,
    /// Series expansion needs a denominator with nonzero constant term.
    PoleAtZero,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroDenominator => write!(f, "denominator is the zero polynomial"),
            PolyError::PoleAtZero => write!(f, "denominator vanishes at zero"),
        }
    }
}

/// Polynomial with `BigInt` coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `(a + b·t)^m`, truncated to degrees `<= max_degree` when given.
    pub fn binomial_power(a: i64, b: i64, m: usize, max_degree: Option<usize>) -> Self {
        let top = max_degree.map_or(m, |d| d.min(m));
        let a = BigInt::from(a);
        let b = BigInt::from(b);
        // a^(m-i) b^i C(m,i), built incrementally from i = 0
        let mut coeffs = Vec::with_capacity(top + 1);
        if a.is_zero() {
            let mut out = vec![BigInt::zero(); top + 1];
            if m <= top {
                out[m] = num_traits::pow(b, m);
            }
            return Self::from_coeffs(out);
        }
        let mut binom = BigInt::one();
        let mut b_pow = BigInt::one();
        let a_pows = powers(&a, m);
        for i in 0..=top {
            coeffs.push(&binom * &b_pow * &a_pows[m - i]);
            binom = binom * BigInt::from(m - i) / BigInt::from(i + 1);
            b_pow *= &b;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Nonnegative gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            // reducing first keeps the gcd on small operands once g is small
            g = if g.is_zero() { c.abs() } else { g.gcd(&(c % &g)) };
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Divides every coefficient by `divisor`, which must divide each one exactly.
    pub fn div_exact(&self, divisor: &BigInt) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % divisor).is_zero());
                    c / divisor
                })
                .collect(),
        )
    }

    /// Drops the lowest `shift` coefficients, which must be zero (division by `t^shift`).
    pub fn shift_down(&self, shift: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(shift).all(Zero::is_zero));
        Self::from_coeffs(self.coeffs.iter().skip(shift).cloned().collect())
    }

    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    /// Horner evaluation in `f64`. Loses meaning once coefficients exceed `f64` range.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact value at `t = p/q` scaled by `q^deg`, as an integer.
    fn eval_homogeneous(&self, p: &BigInt, q: &BigInt, degree: usize) -> BigInt {
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        // acc = Σ c_i p^i q^(degree - i), Horner from the top down
        for i in (0..=degree).rev() {
            acc = acc * p + self.coeff(i) * &q_pow;
            q_pow *= q;
        }
        acc
    }

    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        let Some(deg) = self.degree() else { return BigRational::zero() };
        let value = self.eval_homogeneous(t.numer(), t.denom(), deg);
        BigRational::new(value, num_traits::pow(t.denom().clone(), deg))
    }
}

fn powers(base: &BigInt, up_to: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut p = BigInt::one();
    for _ in 0..=up_to {
        out.push(p.clone());
        p *= base;
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => f.write_str("e")?,
                1 => write!(f, "{mag}*e")?,
                _ if mag.is_one() => write!(f, "e^{i}")?,
                _ => write!(f, "{mag}*e^{i}")?,
            }
        }
        Ok(())
    }
}

/// Ratio of two integer polynomials.
///
/// Canonical form: no common integer content, no common power of the
/// indeterminate, and the lowest nonzero coefficient of the denominator is
/// positive. Equality compares canonical forms and falls back to
/// cross-multiplication, so it is exact even when a common polynomial factor
/// remains.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self::canonical(p, Polynomial::one())
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self { num, den: Polynomial::one() };
        }
        let shift = num.valuation().unwrap().min(den.valuation().unwrap());
        let (mut num, mut den) = (num.shift_down(shift), den.shift_down(shift));
        let mut g = num.content().gcd(&den.content());
        let lowest = &den.coeffs[den.valuation().unwrap()];
        if lowest.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        Self { num, den }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Equality as functions, by cross-multiplication.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval_exact(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_exact(t);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_exact(t) / d)
    }

    /// Floating-point evaluation by Horner's rule; only trustworthy for modest coefficients.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.num.eval_f64(t) / self.den.eval_f64(t)
    }

    /// First `terms` Taylor coefficients about zero.
    pub fn series(&self, terms: usize) -> Result<Vec<BigRational>, PolyError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(PolyError::PoleAtZero);
        }
        let mut out: Vec<BigRational> = Vec::with_capacity(terms);
        for i in 0..terms {
            let mut acc = BigRational::from_integer(self.num.coeff(i));
            for j in 1..=i.min(self.den.coeffs.len().saturating_sub(1)) {
                acc -= BigRational::from_integer(self.den.coeff(j)) * &out[i - j];
            }
            out.push(acc / BigRational::from_integer(d0.clone()));
        }
        Ok(out)
    }

    pub fn taylor_coefficient(&self, i: usize) -> Result<BigRational, PolyError> {
        Ok(self.series(i + 1)?.pop().unwrap())
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        (self.num == other.num && self.den == other.den) || self.same_function(other)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
