//! Strictly monotone functions on the naturals in finitely presented
//! form: univariate polynomials, tables with a unit-slope tail, and the
//! closure combinators (pointwise sum and product, composition,
//! self-iteration).

use super::poly::UniPoly;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MonFnError {
    #[error("polynomial form must have degree >= 1 and a nonzero leading coefficient")]
    NotStrictlyMonotone,
    #[error("table prefix must be strictly increasing")]
    PrefixNotIncreasing,
    #[error("table prefix must be nonempty")]
    EmptyPrefix,
    #[error("table segments must start at index 0 and increase strictly")]
    BadSegments,
}

/// A table-backed strictly monotone function. Values are stored as
/// slope-one segments `(start index, value at start)`; beyond the last
/// segment the function continues with unit slope, so a table presented
/// as an explicit prefix extends with `f(N + i) = f(N) + i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableMon {
    segments: Vec<(BigUint, BigUint)>,
}

impl TableMon {
    pub fn from_prefix(prefix: &[BigUint]) -> Result<Self, MonFnError> {
        if prefix.is_empty() {
            return Err(MonFnError::EmptyPrefix);
        }
        for w in prefix.windows(2) {
            if w[1] <= w[0] {
                return Err(MonFnError::PrefixNotIncreasing);
            }
        }
        let mut segments: Vec<(BigUint, BigUint)> = Vec::new();
        for (i, v) in prefix.iter().enumerate() {
            let idx = BigUint::from(i);
            match segments.last() {
                Some((s, sv)) if v == &(sv + (&idx - s)) => {}
                _ => segments.push((idx, v.clone())),
            }
        }
        Ok(TableMon { segments })
    }

    pub fn from_segments(segments: Vec<(BigUint, BigUint)>) -> Result<Self, MonFnError> {
        if segments.is_empty() || !segments[0].0.is_zero() {
            return Err(MonFnError::BadSegments);
        }
        for w in segments.windows(2) {
            let (ref s0, ref v0) = w[0];
            let (ref s1, ref v1) = w[1];
            if s1 <= s0 {
                return Err(MonFnError::BadSegments);
            }
            // value just before the break is v0 + (s1 - s0 - 1)
            if *v1 < v0 + (s1 - s0) {
                return Err(MonFnError::BadSegments);
            }
        }
        Ok(TableMon { segments })
    }

    pub fn apply(&self, i: &BigUint) -> BigUint {
        let pos = self.segments.partition_point(|(s, _)| s <= i);
        let (s, v) = &self.segments[pos - 1];
        v + (i - s)
    }

    pub fn segments(&self) -> &[(BigUint, BigUint)] {
        &self.segments
    }

    /// Index one past the last stored break; values from here on are a
    /// pure unit-slope tail.
    pub fn prefix_len(&self) -> BigUint {
        self.segments.last().map(|(s, _)| s + 1u32).unwrap_or_default()
    }

    /// Explicit values at `0..len`.
    pub fn expand(&self, len: usize) -> Vec<BigUint> {
        (0..len).map(|i| self.apply(&BigUint::from(i))).collect()
    }
}

/// A strictly monotone function on the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonFn {
    Poly(UniPoly),
    Table(TableMon),
    Sum(Box<MonFn>, Box<MonFn>),
    Product(Box<MonFn>, Box<MonFn>),
    /// `Compose(f, g)` is `i -> f(g(i))`.
    Compose(Box<MonFn>, Box<MonFn>),
    /// m-fold self-iteration; zero iterations is the identity.
    Iterate(Box<MonFn>, u32),
}

impl MonFn {
    /// Polynomial form; panics unless strictly monotone. Use
    /// [`MonFn::try_poly`] for fallible construction.
    pub fn poly(p: UniPoly) -> MonFn {
        Self::try_poly(p).expect("polynomial form must be strictly monotone")
    }

    pub fn try_poly(p: UniPoly) -> Result<MonFn, MonFnError> {
        if !p.is_strictly_monotone() {
            return Err(MonFnError::NotStrictlyMonotone);
        }
        Ok(MonFn::Poly(p))
    }

    pub fn identity() -> MonFn {
        MonFn::Poly(UniPoly::x())
    }

    pub fn table(t: TableMon) -> MonFn {
        MonFn::Table(t)
    }

    pub fn sum(a: MonFn, b: MonFn) -> MonFn {
        match (a, b) {
            (MonFn::Poly(p), MonFn::Poly(q)) => MonFn::Poly(p.add(&q)),
            (a, b) => MonFn::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn product(a: MonFn, b: MonFn) -> MonFn {
        match (a, b) {
            (MonFn::Poly(p), MonFn::Poly(q)) => MonFn::Poly(p.mul(&q)),
            (a, b) => MonFn::Product(Box::new(a), Box::new(b)),
        }
    }

    pub fn compose(outer: MonFn, inner: MonFn) -> MonFn {
        MonFn::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn iterate(f: MonFn, m: u32) -> MonFn {
        MonFn::Iterate(Box::new(f), m)
    }

    pub fn apply(&self, i: &BigUint) -> BigUint {
        match self {
            MonFn::Poly(p) => p.eval(i),
            MonFn::Table(t) => t.apply(i),
            MonFn::Sum(a, b) => a.apply(i) + b.apply(i),
            MonFn::Product(a, b) => a.apply(i) * b.apply(i),
            MonFn::Compose(f, g) => f.apply(&g.apply(i)),
            MonFn::Iterate(f, m) => {
                let mut v = i.clone();
                for _ in 0..*m {
                    v = f.apply(&v);
                }
                v
            }
        }
    }

    pub fn apply_u64(&self, i: u64) -> BigUint {
        self.apply(&BigUint::from(i))
    }
}

impl fmt::Display for MonFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonFn::Poly(p) => write!(f, "poly: {p}"),
            MonFn::Table(t) => {
                let plen = t.prefix_len();
                if plen <= BigUint::from(64u32) {
                    let len = plen.to_usize().unwrap_or(1);
                    let vals = t.expand(len.max(1));
                    let body: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                    write!(f, "table: [{}] tail+1", body.join(","))
                } else {
                    let body: Vec<String> = t
                        .segments()
                        .iter()
                        .map(|(s, v)| format!("({s},{v})"))
                        .collect();
                    write!(f, "table seg: [{}] tail+1", body.join(","))
                }
            }
            MonFn::Sum(a, b) => write!(f, "sum({a}, {b})"),
            MonFn::Product(a, b) => write!(f, "prod({a}, {b})"),
            MonFn::Compose(a, b) => write!(f, "comp({a}, {b})"),
            MonFn::Iterate(a, m) => write!(f, "iter({a}, {m})"),
        }
    }
}

/// Check strict monotonicity on the sample range `0..=hi` (exact, for
/// tests and input validation of combinator forms).
pub fn strictly_monotone_on(f: &MonFn, hi: u64) -> bool {
    let mut prev: Option<BigUint> = None;
    for i in 0..=hi {
        let v = f.apply_u64(i);
        if let Some(p) = prev {
            if v <= p {
                return false;
            }
        }
        prev = Some(v);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn table_prefix_extends_with_unit_slope() {
        let t = TableMon::from_prefix(&[b(1), b(3), b(7)]).unwrap();
        assert_eq!(t.apply(&b(0)), b(1));
        assert_eq!(t.apply(&b(2)), b(7));
        assert_eq!(t.apply(&b(5)), b(10));
        // segments collapse runs of slope one
        assert_eq!(t.segments().len(), 3);
        let t2 = TableMon::from_prefix(&[b(2), b(3), b(4), b(9)]).unwrap();
        assert_eq!(t2.segments().len(), 2);
        assert_eq!(t2.apply(&b(2)), b(4));
        assert_eq!(t2.apply(&b(3)), b(9));
    }

    #[test]
    fn table_rejects_non_increasing() {
        assert!(TableMon::from_prefix(&[b(3), b(3)]).is_err());
        assert!(TableMon::from_prefix(&[]).is_err());
    }

    #[test]
    fn segments_validate_strictness() {
        assert!(TableMon::from_segments(vec![(b(0), b(1)), (b(3), b(10))]).is_ok());
        // value before the break is 1 + 2 = 3, so 3 at the break is not strict
        assert!(TableMon::from_segments(vec![(b(0), b(1)), (b(3), b(3))]).is_err());
        assert!(TableMon::from_segments(vec![(b(1), b(1))]).is_err());
    }

    #[test]
    fn combinators_preserve_strict_monotonicity() {
        let p = MonFn::poly(UniPoly::from_coeffs(vec![0u64, 2]));
        let t = MonFn::table(TableMon::from_prefix(&[b(0), b(4)]).unwrap());
        for f in [
            MonFn::sum(p.clone(), t.clone()),
            MonFn::product(p.clone(), t.clone()),
            MonFn::Product(Box::new(p.clone()), Box::new(t.clone())),
            MonFn::compose(p.clone(), t.clone()),
            MonFn::iterate(t.clone(), 3),
            MonFn::iterate(p, 0),
        ] {
            assert!(strictly_monotone_on(&f, 24), "not monotone: {f}");
        }
    }

    #[test]
    fn poly_form_requires_strictness() {
        assert!(MonFn::try_poly(UniPoly::constant(b(5))).is_err());
        assert!(MonFn::try_poly(UniPoly::x()).is_ok());
    }
}
