//! Second-order polynomials: terms over `+`, `*`, a number variable `n`
//! and a function variable `L`, together with the degree/type calculus,
//! decomposition into outermost applications, dominance witnesses and
//! adversarial counterexamples.

mod cex;
mod monfn;
mod parse;
mod poly;
mod witness;

pub use cex::{
    brute_force_counterexample, lift_counterexample_l, lift_counterexample_ll,
    separate_monomials, Counterexample,
};
pub use monfn::{strictly_monotone_on, MonFn, MonFnError, TableMon};
pub use parse::{parse_monfn, parse_sop, parse_unipoly, ParseError};
pub use poly::{FirstOrderPoly, UniPoly};
pub use witness::{check_o2_witness, grid_samples, synth_witness, verification_grid, Witness};

use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

/// A second-order polynomial in the number variable `n` and the function
/// variable `L`. Constants are positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SOPoly {
    Const(BigUint),
    VarN,
    Apply(Box<SOPoly>),
    Sum(Box<SOPoly>, Box<SOPoly>),
    Prod(Box<SOPoly>, Box<SOPoly>),
}

/// Errors from operations on second-order polynomials.
#[derive(Debug, Error)]
pub enum SopError {
    #[error("constants must be >= 1")]
    ZeroConst,
    #[error("decomposition requires type m and degree > 0, got degree {degree} type {type_tag}")]
    UnsupportedShape { degree: u32, type_tag: TypeTag },
    #[error("monomial dominance is stated for n >= 1 only")]
    DominanceLevelZero,
    #[error("degree of the outer polynomial must be >= 2, got {0}")]
    OuterDegreeTooSmall(u32),
    #[error("base pair does not certify the claimed strict inequality")]
    BaseNotCertified,
    #[error("constructed counterexample failed exact re-verification")]
    ConstructionFailed,
    #[error("synthesized witness failed grid verification (internal bug)")]
    WitnessVerificationFailed,
}

/// The type tag from the degree calculus. `A` marks terms whose maximal
/// degree is attained through an application, `M` the remaining terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeTag {
    A,
    M,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::A => write!(f, "a"),
            TypeTag::M => write!(f, "m"),
        }
    }
}

/// Second-order degree interleaved with its type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeInfo {
    pub degree: u32,
    pub type_tag: TypeTag,
}

impl SOPoly {
    /// Constant polynomial. Fails on zero: constants are positive.
    pub fn constant(c: BigUint) -> Result<SOPoly, SopError> {
        if c.is_zero() {
            return Err(SopError::ZeroConst);
        }
        Ok(SOPoly::Const(c))
    }

    pub fn constant_u64(c: u64) -> SOPoly {
        assert!(c >= 1, "constants must be >= 1");
        SOPoly::Const(BigUint::from(c))
    }

    pub fn apply(inner: SOPoly) -> SOPoly {
        SOPoly::Apply(Box::new(inner))
    }

    pub fn sum(a: SOPoly, b: SOPoly) -> SOPoly {
        SOPoly::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: SOPoly, b: SOPoly) -> SOPoly {
        SOPoly::Prod(Box::new(a), Box::new(b))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            SOPoly::Const(_) | SOPoly::VarN => 1,
            SOPoly::Apply(p) => 1 + p.size(),
            SOPoly::Sum(a, b) | SOPoly::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth of applications.
    pub fn depth(&self) -> u32 {
        match self {
            SOPoly::Const(_) | SOPoly::VarN => 0,
            SOPoly::Apply(p) => 1 + p.depth(),
            SOPoly::Sum(a, b) | SOPoly::Prod(a, b) => a.depth().max(b.depth()),
        }
    }

    /// Exact evaluation with an arbitrary (possibly failing) oracle in the
    /// function slot. The oracle is invoked once per `L`-application, in
    /// leftmost-innermost order.
    pub fn eval_with<E>(
        &self,
        oracle: &mut impl FnMut(&BigUint) -> Result<BigUint, E>,
        k: &BigUint,
    ) -> Result<BigUint, E> {
        match self {
            SOPoly::Const(c) => Ok(c.clone()),
            SOPoly::VarN => Ok(k.clone()),
            SOPoly::Apply(p) => {
                let inner = p.eval_with(oracle, k)?;
                oracle(&inner)
            }
            SOPoly::Sum(a, b) => Ok(a.eval_with(oracle, k)? + b.eval_with(oracle, k)?),
            SOPoly::Prod(a, b) => Ok(a.eval_with(oracle, k)? * b.eval_with(oracle, k)?),
        }
    }
}

/// Exact evaluation of `q` at `(p, k)`.
pub fn eval_sop(q: &SOPoly, p: &MonFn, k: &BigUint) -> BigUint {
    let r: Result<BigUint, std::convert::Infallible> =
        q.eval_with(&mut |x| Ok(p.apply(x)), k);
    match r {
        Ok(v) => v,
    }
}

/// The canonical monomial `P_n`: `P_0(p)(k) = k`, `P_{n+1}(p)(k) = p(P_n(p)(k))`.
pub fn monomial(n: u32) -> SOPoly {
    let mut q = SOPoly::VarN;
    for _ in 0..n {
        q = SOPoly::apply(q);
    }
    q
}

/// Degree and type, computed by the inductive rules: constants and `n`
/// have degree 0 and type m; `L(P)` has degree `deg P + 1` and type a;
/// sums take the maximal degree and are type a exactly when a type-a
/// operand attains it; products take the maximal degree plus one when a
/// type-a operand attains it (and the maximum otherwise) and are always
/// type m.
pub fn degree_of(q: &SOPoly) -> DegreeInfo {
    match q {
        SOPoly::Const(_) | SOPoly::VarN => DegreeInfo {
            degree: 0,
            type_tag: TypeTag::M,
        },
        SOPoly::Apply(p) => DegreeInfo {
            degree: degree_of(p).degree + 1,
            type_tag: TypeTag::A,
        },
        SOPoly::Sum(a, b) => {
            let da = degree_of(a);
            let db = degree_of(b);
            let deg = da.degree.max(db.degree);
            let a_attains = da.type_tag == TypeTag::A && da.degree == deg;
            let b_attains = db.type_tag == TypeTag::A && db.degree == deg;
            DegreeInfo {
                degree: deg,
                type_tag: if a_attains || b_attains {
                    TypeTag::A
                } else {
                    TypeTag::M
                },
            }
        }
        SOPoly::Prod(a, b) => {
            let da = degree_of(a);
            let db = degree_of(b);
            let deg = da.degree.max(db.degree);
            let a_attains = da.type_tag == TypeTag::A && da.degree == deg;
            let b_attains = db.type_tag == TypeTag::A && db.degree == deg;
            DegreeInfo {
                degree: if a_attains || b_attains { deg + 1 } else { deg },
                type_tag: TypeTag::M,
            }
        }
    }
}

/// Dominance against the monomial `P_n`: holds exactly when `deg Q <= n`.
/// Stated for `n >= 1` only.
pub fn dominates_monomial(q: &SOPoly, n: u32) -> Result<bool, SopError> {
    if n == 0 {
        return Err(SopError::DominanceLevelZero);
    }
    Ok(degree_of(q).degree <= n)
}

/// A type-m polynomial of positive degree written as a first-order
/// polynomial `t` over the outermost applications: the source equals
/// `t(L(parts[0]), ..., L(parts[n-1]))` with the ambient variable kept as
/// an extra variable of `t`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Variables: index 0 is the ambient number variable, indices
    /// `1..=parts.len()` are the application slots in order.
    pub t: FirstOrderPoly,
    pub parts: Vec<SOPoly>,
}

impl Decomposition {
    /// Rebuild the second-order polynomial `t(L(Q_1), ..., L(Q_n))`.
    pub fn recompose(&self) -> SOPoly {
        let subs: Vec<SOPoly> = std::iter::once(SOPoly::VarN)
            .chain(self.parts.iter().cloned().map(SOPoly::apply))
            .collect();
        self.t.substitute(&subs)
    }
}

/// Split a type-m polynomial of positive degree at its outermost
/// applications.
pub fn decompose(q: &SOPoly) -> Result<Decomposition, SopError> {
    let info = degree_of(q);
    if info.type_tag != TypeTag::M || info.degree == 0 {
        return Err(SopError::UnsupportedShape {
            degree: info.degree,
            type_tag: info.type_tag,
        });
    }
    let mut parts = Vec::new();
    let t = skeleton(q, &mut parts);
    Ok(Decomposition { t, parts })
}

/// Translate the sum/product skeleton above the outermost applications
/// into a first-order polynomial; each application becomes a fresh
/// variable. Variable 0 is the ambient number variable.
fn skeleton(q: &SOPoly, parts: &mut Vec<SOPoly>) -> FirstOrderPoly {
    match q {
        SOPoly::Const(c) => FirstOrderPoly::constant(c.clone()),
        SOPoly::VarN => FirstOrderPoly::variable(0),
        SOPoly::Apply(inner) => {
            parts.push((**inner).clone());
            FirstOrderPoly::variable(parts.len())
        }
        SOPoly::Sum(a, b) => {
            let ta = skeleton(a, parts);
            let tb = skeleton(b, parts);
            ta.add(&tb)
        }
        SOPoly::Prod(a, b) => {
            let ta = skeleton(a, parts);
            let tb = skeleton(b, parts);
            ta.mul(&tb)
        }
    }
}

/// The closed form of a degree-0 polynomial as a univariate polynomial in
/// the number variable. Returns `None` when the term contains an
/// application.
pub fn closed_form(q: &SOPoly) -> Option<UniPoly> {
    match q {
        SOPoly::Const(c) => Some(UniPoly::constant(c.clone())),
        SOPoly::VarN => Some(UniPoly::x()),
        SOPoly::Apply(_) => None,
        SOPoly::Sum(a, b) => Some(closed_form(a)?.add(&closed_form(b)?)),
        SOPoly::Prod(a, b) => Some(closed_form(a)?.mul(&closed_form(b)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn sop(s: &str) -> SOPoly {
        parse_sop(s).unwrap()
    }

    fn idfn() -> MonFn {
        MonFn::poly(UniPoly::x())
    }

    fn square() -> MonFn {
        MonFn::poly(UniPoly::from_coeffs(vec![0u64, 0, 1]))
    }

    #[test]
    fn eval_example_equation() {
        // L(L(n*n)) + L(L(n)*L(n)) + L(n) + 4 at p(k) = k^2 collapses to
        // 2k^8 + k^2 + 4.
        let q = sop("L(L(n*n)) + L(L(n)*L(n)) + L(n) + 4");
        let v = eval_sop(&q, &square(), &big(2));
        assert_eq!(v, big(520));
        for k in 0u64..=10 {
            let got = eval_sop(&q, &square(), &big(k));
            let kb = big(k);
            let expected = big(2) * kb.pow(8) + kb.pow(2) + big(4);
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn eval_monomial_identity_fixed_point() {
        let q = monomial(2);
        assert_eq!(eval_sop(&q, &idfn(), &big(7)), big(7));
    }

    #[test]
    fn eval_constant_plus_zero() {
        let q = sop("n + 3");
        assert_eq!(eval_sop(&q, &square(), &BigUint::zero()), big(3));
    }

    #[test]
    fn monomial_unfolds() {
        assert_eq!(monomial(0), SOPoly::VarN);
        let succ = MonFn::poly(UniPoly::from_coeffs(vec![1u64, 1]));
        assert_eq!(eval_sop(&monomial(2), &succ, &BigUint::zero()), big(2));
        let p = MonFn::poly(UniPoly::from_coeffs(vec![1u64, 2]));
        assert_eq!(eval_sop(&monomial(3), &p, &big(1)), big(15));
        // P_{n+1}(p)(k) = p(P_n(p)(k))
        for n in 0..4u32 {
            let lhs = eval_sop(&monomial(n + 1), &square(), &big(3));
            let rhs = square().apply(&eval_sop(&monomial(n), &square(), &big(3)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            degree_of(&sop("L(n*n)")),
            DegreeInfo { degree: 1, type_tag: TypeTag::A }
        );
        assert_eq!(
            degree_of(&sop("L(L(n)*L(n))")),
            DegreeInfo { degree: 3, type_tag: TypeTag::A }
        );
        assert_eq!(
            degree_of(&sop("L(L(n*n)) + L(L(n)*L(n)) + L(n) + 4")),
            DegreeInfo { degree: 3, type_tag: TypeTag::A }
        );
    }

    #[test]
    fn degree_of_monomials() {
        assert_eq!(
            degree_of(&monomial(0)),
            DegreeInfo { degree: 0, type_tag: TypeTag::M }
        );
        for n in 1..6u32 {
            assert_eq!(
                degree_of(&monomial(n)),
                DegreeInfo { degree: n, type_tag: TypeTag::A }
            );
        }
    }

    #[test]
    fn degree_product_promotion_on_scaled_application() {
        // Verbatim product rule: a type-a factor attaining the maximum
        // promotes, so L(2*L(n)) has degree 3 (documented erratum; see
        // README).
        assert_eq!(
            degree_of(&sop("L(2*L(n))")),
            DegreeInfo { degree: 3, type_tag: TypeTag::A }
        );
    }

    #[test]
    fn dominates_monomial_examples() {
        assert!(dominates_monomial(&sop("L(n*n)"), 1).unwrap());
        assert!(!dominates_monomial(&sop("L(L(n)*L(n))"), 2).unwrap());
        assert!(dominates_monomial(&monomial(3), 3).unwrap());
        assert!(dominates_monomial(&sop("n"), 1).unwrap());
        assert!(matches!(
            dominates_monomial(&sop("n"), 0),
            Err(SopError::DominanceLevelZero)
        ));
    }

    #[test]
    fn decompose_two_applications() {
        let d = decompose(&sop("L(n)*L(n)")).unwrap();
        assert_eq!(d.parts, vec![SOPoly::VarN, SOPoly::VarN]);
        assert_eq!(d.t.total_degree(), 2);
        // Degree bookkeeping: max part degree (0) + 2 = source degree.
        assert_eq!(degree_of(&sop("L(n)*L(n)")).degree, 2);
        let r = d.recompose();
        for k in 0u64..6 {
            assert_eq!(
                eval_sop(&r, &square(), &big(k)),
                eval_sop(&sop("L(n)*L(n)"), &square(), &big(k))
            );
        }
    }

    #[test]
    fn decompose_nested() {
        let q = sop("L(L(n))*L(n)");
        let d = decompose(&q).unwrap();
        assert_eq!(d.parts, vec![sop("L(n)"), SOPoly::VarN]);
        let max_part = d.parts.iter().map(|p| degree_of(p).degree).max().unwrap();
        assert_eq!(max_part + 2, degree_of(&q).degree);
    }

    #[test]
    fn decompose_rejects_degree_zero() {
        assert!(matches!(
            decompose(&sop("n*n")),
            Err(SopError::UnsupportedShape { degree: 0, .. })
        ));
        assert!(matches!(
            decompose(&sop("L(n)")),
            Err(SopError::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn eval_monotone_in_oracle_and_argument() {
        let q = sop("L(L(n)) + L(n)*2 + n");
        let small = MonFn::poly(UniPoly::from_coeffs(vec![0u64, 1]));
        let large = MonFn::poly(UniPoly::from_coeffs(vec![1u64, 2]));
        let mut prev = BigUint::zero();
        for k in 0u64..8 {
            let lo = eval_sop(&q, &small, &big(k));
            let hi = eval_sop(&q, &large, &big(k));
            assert!(lo <= hi);
            assert!(prev <= lo);
            prev = lo;
        }
    }

    #[test]
    fn depth_is_application_nesting() {
        assert_eq!(sop("L(L(n)) + L(n)").depth(), 2);
        assert_eq!(sop("n*n + 4").depth(), 0);
    }
}
