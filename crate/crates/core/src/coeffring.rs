//! Exponential-polynomial coefficient ring.
//!
//! An [`ExpPoly`] is a finite sum of terms `c * x^p * exp(<q, x>)` in `N`
//! variables, where `p` is a vector of non-negative integers, `q` a vector
//! of rationals and `c` a coefficient (by default a [`GaussianRational`]).
//! The ring is closed under products and partial derivatives, which is all
//! the Lie bracket of vector fields needs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// Rational arithmetic with shortcuts for zero and integer operands, which
// skip the gcd reduction of the general case.

fn qadd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

fn qneg_add(a: &Rational, b: &Rational) -> Rational {
    if b.is_zero() {
        a.clone()
    } else if a.is_zero() {
        -b
    } else if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() - b.numer())
    } else {
        a - b
    }
}

fn qmul(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() || b.is_zero() {
        Rational::zero()
    } else if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() * b.numer())
    } else if a.is_one() {
        b.clone()
    } else if b.is_one() {
        a.clone()
    } else {
        a * b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("numeric evaluation failed: {0}")]
    Evaluation(String),
}

/// Coefficients an [`ExpPoly`] can carry.
///
/// Besides the ring operations, the derivative needs to multiply by the
/// rational exponents and frequencies of a term.
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;
}

impl Coeff for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

/// An element `re + im*i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::real(re)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Coeff for GaussianRational {
    fn from_rational(q: &Rational) -> Self {
        Self::real(q.clone())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: qadd(&self.re, &rhs.re), im: qadd(&self.im, &rhs.im) }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: qneg_add(&self.re, &rhs.re), im: qneg_add(&self.im, &rhs.im) }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational { re: qmul(&self.re, &rhs.re), im: Rational::zero() };
        }
        GaussianRational {
            re: qneg_add(&qmul(&self.re, &rhs.re), &qmul(&self.im, &rhs.im)),
            im: qadd(&qmul(&self.re, &rhs.im), &qmul(&self.im, &rhs.re)),
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        &self * &inv
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write_imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                f.write_str(if self.im.is_negative() { " - " } else { " + " })?;
                write_imag(f, &self.im.abs(), true)
            }
        }
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &Rational, leading: bool) -> fmt::Result {
    let mag = im.abs();
    if im.is_negative() && leading {
        f.write_str("-")?;
    }
    if mag.is_one() {
        f.write_str("i")
    } else {
        write!(f, "{}*i", mag)
    }
}

/// `x^pow * exp(<freq, x>)`. Terms are ordered lexicographically on
/// `(freq, pow)`, which is the canonical term order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpMonomial {
    freq: Vec<Rational>,
    pow: Vec<u32>,
}

fn qcmp(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        a.numer().cmp(b.numer())
    } else {
        (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
    }
}

impl Ord for ExpMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.freq.iter().zip(&other.freq) {
            match qcmp(a, b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.freq.len().cmp(&other.freq.len()).then_with(|| self.pow.cmp(&other.pow))
    }
}

impl PartialOrd for ExpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ExpMonomial {
    pub fn new(pow: Vec<u32>, freq: Vec<Rational>) -> Self {
        assert_eq!(pow.len(), freq.len(), "pow and freq must share the dimension");
        Self { freq, pow }
    }

    pub fn one(dim: usize) -> Self {
        Self { freq: vec![Rational::zero(); dim], pow: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.pow.len()
    }

    pub fn pow(&self) -> &[u32] {
        &self.pow
    }

    pub fn freq(&self) -> &[Rational] {
        &self.freq
    }

    pub fn is_one(&self) -> bool {
        self.pow.iter().all(|&p| p == 0) && self.freq.iter().all(Zero::is_zero)
    }

    pub fn is_polynomial_free(&self) -> bool {
        self.pow.iter().all(|&p| p == 0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.pow[i] != 0 || !self.freq[i].is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            freq: self.freq.iter().zip(&other.freq).map(|(a, b)| qadd(a, b)).collect(),
            pow: self.pow.iter().zip(&other.pow).map(|(a, b)| a + b).collect(),
        }
    }

    /// Reorders coordinates: coordinate `i` of `self` becomes coordinate
    /// `perm[i]` of the result.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Self {
        let mut freq = vec![Rational::zero(); perm.len()];
        let mut pow = vec![0; perm.len()];
        for (i, &t) in perm.iter().enumerate() {
            freq[t] = self.freq[i].clone();
            pow[t] = self.pow[i];
        }
        Self { freq, pow }
    }

    pub(crate) fn embedded(&self, offset: usize, dim: usize) -> Self {
        let mut out = Self::one(dim);
        for i in 0..self.dim() {
            out.freq[offset + i] = self.freq[i].clone();
            out.pow[offset + i] = self.pow[i];
        }
        out
    }

    pub(crate) fn truncated(&self, k: usize) -> Self {
        Self { freq: self.freq[..k].to_vec(), pow: self.pow[..k].to_vec() }
    }

    pub(crate) fn with_parts(freq: Vec<Rational>, pow: Vec<u32>) -> Self {
        Self { freq, pow }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        let mut lin = 0.0;
        let mut mono = 1.0;
        for i in 0..self.dim() {
            lin += self.freq[i].to_f64().unwrap_or(f64::NAN) * point[i];
            mono *= point[i].powi(self.pow[i] as i32);
        }
        mono * lin.exp()
    }
}

/// Exponential-polynomial in `dim` variables with canonical sparse terms.
#[derive(Clone, PartialEq, Debug)]
pub struct ExpPoly<C: Coeff = GaussianRational> {
    dim: usize,
    terms: BTreeMap<ExpMonomial, C>,
}

impl<C: Coeff + Eq> Eq for ExpPoly<C> {}

impl<C: Coeff> ExpPoly<C> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        Self::monomial(ExpMonomial::one(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C::one())
    }

    pub fn monomial(mono: ExpMonomial, c: C) -> Self {
        let mut p = Self::zero(mono.dim());
        p.add_term(mono, c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        let mut pow = vec![0; dim];
        pow[i] = 1;
        Self::monomial(ExpMonomial::new(pow, vec![Rational::zero(); dim]), C::one())
    }

    /// `exp(<freq, x>)`.
    pub fn exp_linear(freq: Vec<Rational>) -> Self {
        let dim = freq.len();
        Self::monomial(ExpMonomial::new(vec![0; dim], freq), C::one())
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or
    /// zero) terms.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (ExpMonomial, C)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "term dimension differs from polynomial dimension");
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &ExpMonomial) -> Option<&C> {
        self.terms.get(mono)
    }

    /// The constant term if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, mono: ExpMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), CoeffError> {
        if self.dim != other.dim {
            return Err(CoeffError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// `self += a * b`, for operands of the same dimension.
    pub(crate) fn add_product(&mut self, a: &Self, b: &Self) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self::from_terms(self.dim, self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    /// Exact partial derivative with respect to `x_i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Self, CoeffError> {
        if i >= self.dim {
            return Err(CoeffError::IndexOutOfRange { index: i, dim: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if m.pow[i] > 0 {
                let mut lowered = m.clone();
                lowered.pow[i] -= 1;
                let factor = C::from_rational(&int(m.pow[i] as i64));
                out.add_term(lowered, factor * c.clone());
            }
            if !m.freq[i].is_zero() {
                out.add_term(m.clone(), C::from_rational(&m.freq[i]) * c.clone());
            }
        }
        Ok(out)
    }

    /// True iff some term involves `x_i` polynomially or exponentially.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.depends_on(i))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ExpPoly<D> {
        ExpPoly::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn map_monomials(&self, dim: usize, f: impl Fn(&ExpMonomial) -> ExpMonomial) -> Self {
        Self::from_terms(dim, self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Rebuilds the canonical form from the stored terms.
    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl ExpPoly<GaussianRational> {
    /// Floating-point evaluation, for diagnostics and rank sampling only.
    pub fn eval_numeric(&self, point: &[f64]) -> Result<Complex64, CoeffError> {
        if point.len() != self.dim {
            return Err(CoeffError::DimensionMismatch { left: self.dim, right: point.len() });
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(CoeffError::Evaluation("non-finite input".into()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c.to_complex() * m.eval(point);
        }
        if !acc.re.is_finite() || !acc.im.is_finite() {
            return Err(CoeffError::Evaluation("overflow".into()));
        }
        Ok(acc)
    }
}

impl<'a, C: Coeff> Add<&'a ExpPoly<C>> for &'a ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn add(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        self.try_add(rhs).expect("ExpPoly addition")
    }
}

impl<'a, C: Coeff> Sub<&'a ExpPoly<C>> for &'a ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn sub(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        self.try_sub(rhs).expect("ExpPoly subtraction")
    }
}

impl<'a, C: Coeff> Mul<&'a ExpPoly<C>> for &'a ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn mul(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        self.try_mul(rhs).expect("ExpPoly multiplication")
    }
}

impl<C: Coeff> Neg for &ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn neg(self) -> ExpPoly<C> {
        ExpPoly::from_terms(self.dim, self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())))
    }
}

// ---------------------------------------------------------------------------
// Text form

/// Writes one real-coefficient term in the textual grammar. `factors` are
/// the non-scalar factors (`x1^2`, `exp(...)`, `d1`). Returns the sign
/// separately so callers can join terms with ` + ` / ` - `.
fn term_body(mag: &Rational, imaginary: bool, factors: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || (factors.is_empty() && !imaginary) {
        parts.push(mag.to_string());
    }
    if imaginary {
        parts.push("i".to_string());
    }
    parts.extend(factors.iter().cloned());
    parts.join("*")
}

pub(crate) fn monomial_factors(m: &ExpMonomial) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &p) in m.pow.iter().enumerate() {
        match p {
            0 => {}
            1 => out.push(format!("x{}", i + 1)),
            _ => out.push(format!("x{}^{}", i + 1, p)),
        }
    }
    if m.freq.iter().any(|q| !q.is_zero()) {
        out.push(format!("exp({})", linear_form(&m.freq)));
    }
    out
}

fn linear_form(freq: &[Rational]) -> String {
    let mut s = String::new();
    for (i, q) in freq.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let mag = q.abs();
        if s.is_empty() {
            if q.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if q.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format!("{}*", mag));
        }
        s.push_str(&format!("x{}", i + 1));
    }
    s
}

/// Joins signed term bodies into `a + b - c` form; `0` when empty.
pub(crate) fn write_signed_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl IntoIterator<Item = (bool, String)>,
) -> fmt::Result {
    let mut first = true;
    for (negative, body) in terms {
        if first {
            if negative {
                f.write_str("-")?;
            }
            first = false;
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        f.write_str(&body)?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Splits a Gaussian coefficient times factors into at most two signed
/// real/imaginary term bodies.
pub(crate) fn signed_bodies(c: &GaussianRational, factors: &[String]) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    if !c.re().is_zero() {
        out.push((c.re().is_negative(), term_body(&c.re().abs(), false, factors)));
    }
    if !c.im().is_zero() {
        out.push((c.im().is_negative(), term_body(&c.im().abs(), true, factors)));
    }
    out
}

impl fmt::Display for ExpPoly<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bodies = self
            .terms
            .iter()
            .flat_map(|(m, c)| signed_bodies(c, &monomial_factors(m)));
        write_signed_terms(f, bodies)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = ExpPoly<GaussianRational>;

    fn x(dim: usize, i: usize) -> P {
        P::var(dim, i)
    }

    fn e(freq: &[i64]) -> P {
        P::exp_linear(freq.iter().map(|&q| int(q)).collect())
    }

    fn c(dim: usize, n: i64) -> P {
        P::constant(dim, GaussianRational::from_integer(n))
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = x(2, 0);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn like_terms_collect() {
        let a = e(&[1, 0]);
        assert_eq!(&a + &a, &c(2, 2) * &a);
        assert_eq!((&a + &a).num_terms(), 1);
    }

    #[test]
    fn distinct_terms_survive_addition() {
        let a = &x(2, 0) * &e(&[0, 1]);
        let b = e(&[0, 1]);
        let s = &a + &b;
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s.coefficient(&ExpMonomial::new(vec![1, 0], vec![int(0), int(1)])), Some(&GaussianRational::one()));
        assert_eq!(s.coefficient(&ExpMonomial::new(vec![0, 0], vec![int(0), int(1)])), Some(&GaussianRational::one()));
    }

    #[test]
    fn products() {
        assert_eq!(&e(&[1]) * &e(&[-1]), P::one(1));
        let x1 = x(1, 0);
        let sq = &x1 * &x1;
        assert_eq!(sq.terms().next().unwrap().0.pow(), &[2]);
        let a = P::constant(1, GaussianRational::new(int(2), int(1)));
        let b = P::constant(1, GaussianRational::new(int(2), int(-1)));
        assert_eq!(&a * &b, c(1, 5));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert_eq!(
            x(1, 0).try_add(&x(2, 0)),
            Err(CoeffError::DimensionMismatch { left: 1, right: 2 })
        );
        assert!(x(1, 0).try_mul(&x(3, 0)).is_err());
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(e(&[1]).partial(0).unwrap(), e(&[1]));
        // d/dx1 (x1 exp(2 x1)) = exp(2 x1) + 2 x1 exp(2 x1)
        let f = &x(1, 0) * &e(&[2]);
        let expected = &e(&[2]) + &(&c(1, 2) * &f);
        assert_eq!(f.partial(0).unwrap(), expected);
        assert!(e(&[0, 1]).partial(0).unwrap().is_zero());
        assert_eq!(e(&[1]).partial(1), Err(CoeffError::IndexOutOfRange { index: 1, dim: 1 }));
    }

    #[test]
    fn dependence() {
        assert!(!e(&[0, 1]).depends_on(0));
        assert!(x(2, 0).depends_on(0));
        assert!((0..3).all(|i| !P::zero(3).depends_on(i)));
    }

    #[test]
    fn numeric_evaluation() {
        assert_eq!(P::one(2).eval_numeric(&[0.3, -1.0]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(e(&[1]).eval_numeric(&[0.0]).unwrap(), Complex64::new(1.0, 0.0));
        let v = (&x(2, 0) * &e(&[1, 0])).eval_numeric(&[1.0, 5.0]).unwrap();
        assert!((v.re - std::f64::consts::E).abs() < 1e-12 && v.im == 0.0);
        assert!(e(&[1000]).eval_numeric(&[10.0]).is_err());
    }

    #[test]
    fn display_forms() {
        let f = &(&c(2, -2) * &x(2, 0)) * &e(&[1, -1]);
        assert_eq!(f.to_string(), "-2*x1*exp(x1 - x2)");
        let g = P::constant(1, GaussianRational::new(rat(1, 2), int(-3)));
        assert_eq!(g.to_string(), "1/2 - 3*i");
        assert_eq!(P::zero(1).to_string(), "0");
        assert_eq!(GaussianRational::new(int(1), int(-1)).to_string(), "1 - i");
    }

    #[test]
    fn gaussian_inverse() {
        let z = GaussianRational::new(int(3), int(4));
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=5).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly(dim: usize) -> impl Strategy<Value = P> {
        let term = (
            proptest::collection::vec(0u32..=2, dim),
            proptest::collection::vec(-2i64..=2, dim),
            small_rational(),
            small_rational(),
        )
            .prop_map(move |(pow, freq, re, im)| {
                (
                    ExpMonomial::new(pow, freq.into_iter().map(int).collect()),
                    GaussianRational::new(re, im),
                )
            });
        proptest::collection::vec(term, 0..=3).prop_map(move |ts| P::from_terms(dim, ts))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(2), b in small_poly(2), c in small_poly(2)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn partial_is_a_derivation(a in small_poly(2), b in small_poly(2), i in 0usize..2) {
            let lhs = (&a * &b).partial(i).unwrap();
            let rhs = &(&a.partial(i).unwrap() * &b) + &(&a * &b.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mixed_partials_commute(a in small_poly(3), i in 0usize..3, j in 0usize..3) {
            prop_assert_eq!(
                a.partial(i).unwrap().partial(j).unwrap(),
                a.partial(j).unwrap().partial(i).unwrap()
            );
        }

        #[test]
        fn canonicalize_is_identity(a in small_poly(3)) {
            prop_assert_eq!(a.canonicalize(), a);
        }
    }
}
