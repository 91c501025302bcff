//! Effectively-polynomially-bounded certificates and the name collapse:
//! when every name of the domain space has sizes bounded by
//! `c * |phi|(c)^c * Q(i)`, a level-m name can be repackaged as a level-2
//! name by enlarging the advice with an exponentially generous padding
//! component and scaling the budget exponent by `c^m`.

use crate::funcspace::FuncName;
use crate::otm::{CodecError, MachineDesc, ViewExpr};
use crate::regfn::{pair_regfns, Backing, RegFn, RegFnError, Word, MAX_WORD_LEN};
use crate::sopoly::{MonFn, UniPoly};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EpbError {
    #[error("certificate constant must be >= 1")]
    ZeroConstant,
    #[error("collapse requires a name at level >= 2, got {0}")]
    LevelTooLow(u32),
    #[error("exponent scale c^m does not fit a machine word")]
    ExponentOverflow,
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    RegFn(#[from] RegFnError),
    #[error("certificate text: {0}")]
    Manifest(String),
}

/// A size certificate `(c, Q)` for a represented space: every name
/// satisfies `|phi|(i) <= c * |phi|(c)^c * Q(i)`.
#[derive(Debug, Clone)]
pub struct EpbCertificate {
    pub c: u32,
    pub q: UniPoly,
}

impl EpbCertificate {
    pub fn new(c: u32, q: UniPoly) -> Result<EpbCertificate, EpbError> {
        if c == 0 {
            return Err(EpbError::ZeroConstant);
        }
        Ok(EpbCertificate { c, q })
    }

    /// Parse the manifest form `epb { c = 2, Q = "i + 3" }`.
    pub fn parse(text: &str) -> Result<EpbCertificate, EpbError> {
        let t = text.trim();
        let inner = t
            .strip_prefix("epb")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('{'))
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| EpbError::Manifest("expected 'epb { ... }'".into()))?;
        let mut c: Option<u32> = None;
        let mut q: Option<UniPoly> = None;
        for field in inner.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| EpbError::Manifest(format!("expected 'key = value' in '{field}'")))?;
            match key.trim() {
                "c" => {
                    c = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| EpbError::Manifest("bad constant".into()))?,
                    )
                }
                "Q" => {
                    let raw = value.trim().trim_matches('"').replace('i', "x");
                    q = Some(
                        crate::sopoly::parse_unipoly(&raw)
                            .map_err(|e| EpbError::Manifest(e.to_string()))?,
                    );
                }
                other => return Err(EpbError::Manifest(format!("unknown field '{other}'"))),
            }
        }
        EpbCertificate::new(
            c.ok_or_else(|| EpbError::Manifest("missing c".into()))?,
            q.ok_or_else(|| EpbError::Manifest("missing Q".into()))?,
        )
    }

    /// The bound `c * |phi|(c)^c * Q(i)` for a concrete name.
    pub fn bound_for(&self, phi: &RegFn, i: &BigUint) -> Result<BigUint, RegFnError> {
        let at_c = phi.size_at(&BigUint::from(self.c))?;
        Ok(BigUint::from(self.c) * at_c.pow(self.c) * self.q.eval(i))
    }
}

impl std::fmt::Display for EpbCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "epb {{ c = {}, Q = \"{}\" }}", self.c, self.q.to_string().replace('x', "i"))
    }
}

/// Exact check of the certificate inequality for every name at every
/// index up to the bound.
pub fn epb_check(
    names: &[RegFn],
    cert: &EpbCertificate,
    index_bound: u64,
) -> Result<bool, RegFnError> {
    assert!(!names.is_empty(), "names must be nonempty");
    for phi in names {
        for i in 0..=index_bound {
            let ib = BigUint::from(i);
            if phi.size_at(&ib)? > cert.bound_for(phi, &ib)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Combine certificates for two spaces into one valid for the paired (or
/// tagged-sum) names of the product and coproduct: constants multiply
/// with slack two, polynomials multiply with slack two.
pub fn cert_combine(a: &EpbCertificate, b: &EpbCertificate) -> EpbCertificate {
    let two = UniPoly::constant(BigUint::from(2u32));
    EpbCertificate {
        c: (a.c + 2) * (b.c + 2),
        q: a.q.add(&two).mul(&b.q.add(&two)),
    }
}

/// The size function of the advice, as a polynomial when one is
/// available.
fn advice_size_poly(psi: &RegFn) -> Option<UniPoly> {
    match psi {
        RegFn::Pad(MonFn::Poly(p)) => Some(p.clone()),
        RegFn::Lift(w) => Some(UniPoly::constant(BigUint::from(w.len()))),
        _ => None,
    }
}

/// Padding whose size at `i` is computed directly from a monotone
/// closure over the original advice sizes, with the word only
/// materialized if a caller genuinely applies it.
struct IteratedPad {
    cert: EpbCertificate,
    psi: RegFn,
    iterations: u32,
}

impl IteratedPad {
    fn size(&self, i: &BigUint) -> Result<BigUint, RegFnError> {
        let mut v = i.clone();
        for _ in 0..self.iterations {
            let s = self.psi.size_at(&v)?.max(BigUint::one());
            v = BigUint::from(self.cert.c) * self.cert.q.eval(&v).pow(self.cert.c) * s;
        }
        // strictness guard: add the argument and one
        Ok(v + i + 1u32)
    }
}

impl Backing for IteratedPad {
    fn apply(&self, u: &Word) -> Result<Word, RegFnError> {
        let n = self
            .size(&BigUint::from(u.len()))?
            .to_usize()
            .filter(|&n| n <= MAX_WORD_LEN)
            .ok_or(RegFnError::ProbeTooLarge)?;
        Ok(Word::zeros(n))
    }

    fn describe(&self) -> String {
        format!("iterated-pad m={} c={}", self.iterations, self.cert.c)
    }

    fn size_at(&self, i: &BigUint) -> Option<Result<BigUint, RegFnError>> {
        Some(self.size(i))
    }
}

/// The enlarged advice component: a padding function whose size iterates
/// `i -> c * Q(i)^c * |psi|(i)` m times. When the advice sizes are
/// polynomial the result is an explicit polynomial padding (and stays
/// serializable); otherwise it is backed by the closure above.
pub fn collapse_padding(cert: &EpbCertificate, psi: &RegFn, m: u32) -> RegFn {
    if let Some(s) = advice_size_poly(psi) {
        let c_poly = UniPoly::constant(BigUint::from(cert.c));
        let step = c_poly
            .mul(&cert.q.pow(cert.c))
            .mul(&s.add_constant(&BigUint::one()))
            .add(&UniPoly::x());
        let mut iter = UniPoly::x();
        for _ in 0..m {
            iter = step.compose(&iter);
        }
        return RegFn::pad(MonFn::poly(iter.add(&UniPoly::from_coeffs(vec![1u64, 1]))));
    }
    RegFn::backed(Arc::new(IteratedPad {
        cert: cert.clone(),
        psi: psi.clone(),
        iterations: m,
    }))
}

/// Collapse a level-m name (m >= 2) to a level-2 name over an epb
/// domain: the machine is rerouted to see `<phi, psi>` inside the
/// enlarged oracle `<phi, <psi, psi'>>`, the advice becomes
/// `<psi, psi'>` with `psi'` from [`collapse_padding`], and the exponent
/// is scaled by `c^m`.
pub fn epb_collapse(f: &FuncName, cert: &EpbCertificate) -> Result<FuncName, EpbError> {
    let m = f.level;
    if m < 2 {
        return Err(EpbError::LevelTooLow(m));
    }
    let original = MachineDesc::decode(&f.index)?;
    let view = ViewExpr::pair(
        ViewExpr::left(ViewExpr::Oracle),
        ViewExpr::left(ViewExpr::right(ViewExpr::Oracle)),
    );
    let rerouted = MachineDesc::reshuffle(view, original);
    let padding = collapse_padding(cert, &f.advice, m);
    let scale = BigUint::from(cert.c)
        .pow(m)
        .to_u32()
        .ok_or(EpbError::ExponentOverflow)?;
    let exponent = f
        .exponent
        .checked_mul(scale)
        .ok_or(EpbError::ExponentOverflow)?;
    Ok(FuncName {
        level: 2,
        index: rerouted.encode(),
        advice: pair_regfns(f.advice.clone(), padding),
        exponent,
    })
}
