//! Adversarial counterexamples: table-backed monotone functions that
//! certify strict failures of dominance, built by placing a single large
//! jump just beyond every point the dominating side can reach.

use super::monfn::{MonFn, TableMon};
use super::poly::UniPoly;
use super::{eval_sop, monomial, SOPoly, SopError};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A certified violation: `p` is a table-backed monotone function and `n`
/// an argument at which the recorded strict inequality holds exactly.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub p: TableMon,
    pub n: BigUint,
}

impl Counterexample {
    pub fn monfn(&self) -> MonFn {
        MonFn::table(self.p.clone())
    }

    /// Exact check of `P(p)(n) > Q((p*q))((n+1)^k)`.
    pub fn certifies(&self, p_poly: &SOPoly, q_poly: &SOPoly, q: &MonFn, k: u32) -> bool {
        let pf = self.monfn();
        let lhs = eval_sop(p_poly, &pf, &self.n);
        let scaled = MonFn::product(pf, q.clone());
        let rhs = eval_sop(q_poly, &scaled, &(&self.n + 1u32).pow(k));
        lhs > rhs
    }
}

/// Lift a counterexample for `P > Q` to one for `L(P) > C + L(Q)`: keep
/// `p` below `N = P(p)(n)`, place `p'(N)` above everything the right-hand
/// side can reach, and continue with unit slope.
pub fn lift_counterexample_l(
    p_poly: &SOPoly,
    q_poly: &SOPoly,
    q: &MonFn,
    k: u32,
    c: &BigUint,
    base: &Counterexample,
) -> Result<Counterexample, SopError> {
    if !base.certifies(p_poly, q_poly, q, k) {
        return Err(SopError::BaseNotCertified);
    }
    let pf = base.monfn();
    let n = &base.n;
    let arg = (n + 1u32).pow(k);
    let big_n = eval_sop(p_poly, &pf, n);
    let scaled = MonFn::product(pf.clone(), q.clone());
    let q_val = eval_sop(q_poly, &scaled, &arg);

    let lifted = SOPoly::apply(p_poly.clone());
    let lifted_rhs = SOPoly::apply(q_poly.clone());

    let mut jump = c + scaled.apply(&q_val) + 1u32;
    for _ in 0..64 {
        let cand = with_jump(&base.p, &big_n, &jump);
        let cand_fn = MonFn::table(cand.clone());
        let lhs = eval_sop(&lifted, &cand_fn, n);
        let rhs = c + eval_sop(&lifted_rhs, &MonFn::product(cand_fn, q.clone()), &arg);
        if lhs > rhs {
            return Ok(Counterexample { p: cand, n: n.clone() });
        }
        // The right-hand side probed above N; chase it once more with the
        // recomputed value.
        jump = &rhs + 1u32;
    }
    Err(SopError::ConstructionFailed)
}

/// Truncate `p` below `at` and insert a jump to `value` (raised if needed
/// to keep the table strictly increasing).
fn with_jump(p: &TableMon, at: &BigUint, value: &BigUint) -> TableMon {
    let mut segments: Vec<(BigUint, BigUint)> = p
        .segments()
        .iter()
        .filter(|(s, _)| s < at)
        .cloned()
        .collect();
    let prev = {
        let (s, v) = segments.last().expect("tables start at index 0");
        v + (at - s) // value the old table would take at `at`, plus one below
    };
    let v = value.clone().max(prev);
    segments.push((at.clone(), v));
    TableMon::from_segments(segments).expect("jump keeps the table strictly increasing")
}

/// Lift a counterexample for `P > Q` to one for
/// `r(L(P)) > L(L(Q))` with `deg r >= 2`, by raising the jump constant
/// until the outer polynomial outruns the doubled application.
pub fn lift_counterexample_ll(
    p_poly: &SOPoly,
    q_poly: &SOPoly,
    q: &MonFn,
    k: u32,
    r: &UniPoly,
    base: &Counterexample,
) -> Result<Counterexample, SopError> {
    if r.degree() < 2 {
        return Err(SopError::OuterDegreeTooSmall(r.degree()));
    }
    if !base.certifies(p_poly, q_poly, q, k) {
        return Err(SopError::BaseNotCertified);
    }
    let lifted = SOPoly::apply(p_poly.clone());
    let doubled = SOPoly::apply(SOPoly::apply(q_poly.clone()));
    let mut c = BigUint::zero();
    for _ in 0..96 {
        let cand = lift_counterexample_l(p_poly, q_poly, q, k, &c, base)?;
        let cand_fn = cand.monfn();
        let lhs = r.eval(&eval_sop(&lifted, &cand_fn, &cand.n));
        let rhs = eval_sop(
            &doubled,
            &MonFn::product(cand_fn, q.clone()),
            &(&cand.n + 1u32).pow(k),
        );
        if lhs > rhs {
            return Ok(cand);
        }
        c = if c.is_zero() { BigUint::one() } else { c * 2u32 };
    }
    Err(SopError::ConstructionFailed)
}

/// A certified violation of `P_{m+1}(p)(n) <= P_m((p*q))((n+1)^k)`: the
/// base case places one value just above `(n+1)^k` at `n = 1`, and each
/// level is lifted through one application.
pub fn separate_monomials(m: u32, q: &MonFn, k: u32) -> Counterexample {
    let n = BigUint::one();
    let base_val = (&n + 1u32).pow(k) + 1u32;
    let p = TableMon::from_prefix(&[BigUint::one(), base_val])
        .expect("base table is strictly increasing");
    let mut cex = Counterexample { p, n };
    debug_assert!(cex.certifies(&monomial(1), &monomial(0), q, k));
    for level in 0..m {
        cex = lift_counterexample_l(&monomial(level + 1), &monomial(level), q, k, &BigUint::zero(), &cex)
            .expect("monomial lifts verify exactly");
    }
    assert!(
        cex.certifies(&monomial(m + 1), &monomial(m), q, k),
        "separation construction must verify exactly"
    );
    cex
}

/// Exhaustive search for a violation of `P(p)(n) <= Q((p*q))((n+1)^k)`
/// over table-backed monotone functions with prefix length and argument
/// bounded by `index_bound` and values bounded by `value_bound`. Returns
/// the lexicographically first hit over (prefix length, prefix values,
/// n), or `None`.
pub fn brute_force_counterexample(
    p_poly: &SOPoly,
    q_poly: &SOPoly,
    q: &MonFn,
    k: u32,
    value_bound: u64,
    index_bound: u64,
) -> Option<Counterexample> {
    assert!(value_bound >= 1 && index_bound >= 1, "bounds must be >= 1");
    for len in 1..=index_bound as usize {
        let mut combo: Vec<u64> = (0..len as u64).collect();
        loop {
            let prefix: Vec<BigUint> = combo.iter().map(|&v| BigUint::from(v)).collect();
            let table = TableMon::from_prefix(&prefix).expect("combinations increase strictly");
            let pf = MonFn::table(table.clone());
            let scaled = MonFn::product(pf.clone(), q.clone());
            for n in 0..=index_bound {
                let nb = BigUint::from(n);
                let lhs = eval_sop(p_poly, &pf, &nb);
                let rhs = eval_sop(q_poly, &scaled, &(&nb + 1u32).pow(k));
                if lhs > rhs {
                    return Some(Counterexample { p: table, n: nb });
                }
            }
            if !next_combination(&mut combo, value_bound) {
                break;
            }
        }
    }
    None
}

/// Advance a strictly increasing sequence over `0..=max` in
/// lexicographic order.
fn next_combination(combo: &mut [u64], max: u64) -> bool {
    let len = combo.len();
    for i in (0..len).rev() {
        let cap = max - (len - 1 - i) as u64;
        if combo[i] < cap {
            combo[i] += 1;
            for j in i + 1..len {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
