//! First-order polynomials with nonnegative integer coefficients, in one
//! or several variables. Nonnegative coefficients make every polynomial
//! here monotone in each variable.

use super::SOPoly;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A multivariate polynomial: exponent vector -> coefficient. Exponent
/// vectors are padded to a common variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderPoly {
    terms: BTreeMap<Vec<u32>, BigUint>,
    nvars: usize,
}

impl FirstOrderPoly {
    pub fn zero() -> Self {
        FirstOrderPoly { terms: BTreeMap::new(), nvars: 0 }
    }

    pub fn constant(c: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        FirstOrderPoly { terms, nvars: 0 }
    }

    /// The monomial `x_i`.
    pub fn variable(i: usize) -> Self {
        let mut exps = vec![0u32; i + 1];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigUint::one());
        FirstOrderPoly { terms, nvars: i + 1 }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn pad(mut exps: Vec<u32>, n: usize) -> Vec<u32> {
        exps.resize(n, 0);
        exps
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            let key = Self::pad(e.clone(), n);
            *terms.entry(key).or_insert_with(BigUint::zero) += c;
        }
        FirstOrderPoly { terms, nvars: n }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = Self::pad(ea.clone(), n);
                for (i, x) in Self::pad(eb.clone(), n).into_iter().enumerate() {
                    e[i] += x;
                }
                *terms.entry(e).or_insert_with(BigUint::zero) += ca * cb;
            }
        }
        FirstOrderPoly { terms, nvars: n }
    }

    pub fn eval(&self, point: &[BigUint]) -> BigUint {
        let mut acc = BigUint::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term *= point[i].pow(exp);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff_sum(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Substitute a second-order polynomial for each variable. The
    /// polynomial must be nonzero since second-order polynomials cannot
    /// express zero.
    pub fn substitute(&self, subs: &[SOPoly]) -> SOPoly {
        assert!(!self.is_zero(), "cannot express the zero polynomial");
        let mut acc: Option<SOPoly> = None;
        for (e, c) in &self.terms {
            let mut factors: Vec<SOPoly> = Vec::new();
            if !c.is_one() {
                factors.push(SOPoly::Const(c.clone()));
            }
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    factors.push(subs[i].clone());
                }
            }
            let term = if factors.is_empty() {
                SOPoly::Const(c.clone())
            } else {
                let mut it = factors.into_iter();
                let first = it.next().unwrap();
                it.fold(first, SOPoly::prod)
            };
            acc = Some(match acc {
                None => term,
                Some(prev) => SOPoly::sum(prev, term),
            });
        }
        acc.unwrap()
    }

    /// Terms as (exponent vector, coefficient) pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigUint)> {
        self.terms.iter()
    }

    /// Identify all variables, yielding a univariate polynomial.
    pub fn collapse_univariate(&self) -> UniPoly {
        let mut coeffs: Vec<BigUint> = Vec::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum::<u32>() as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigUint::zero());
            }
            coeffs[d] += c;
        }
        UniPoly::from_big_coeffs(coeffs)
    }
}

/// A univariate polynomial with nonnegative integer coefficients, stored
/// lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigUint>,
}

impl UniPoly {
    pub fn from_big_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_coeffs<T: Into<BigUint> + Clone>(coeffs: Vec<T>) -> Self {
        Self::from_big_coeffs(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigUint) -> Self {
        Self::from_big_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![0u64, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len().saturating_sub(1) as u32
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn leading(&self) -> BigUint {
        self.coeffs.last().cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff_sum(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigUint::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Self::from_big_coeffs(coeffs)
    }

    pub fn add_constant(&self, c: &BigUint) -> Self {
        self.add(&UniPoly::constant(c.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_big_coeffs(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::constant(BigUint::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Strictly monotone on the naturals: nonnegative coefficients with a
    /// term of positive degree.
    pub fn is_strictly_monotone(&self) -> bool {
        self.degree() >= 1 && !self.leading().is_zero()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
