//! Regular string functions over the fixed alphabet {0,1,2}: total
//! functions mapping equal-length inputs to equal-length outputs, with
//! non-decreasing output lengths. These are the names of type-two
//! computation; machine oracles, advice and function-space names all live
//! here.

use crate::sopoly::MonFn;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Largest word this crate will materialize for a single application or
/// size probe.
pub const MAX_WORD_LEN: usize = 200_000_000;

#[derive(Debug, Error, Clone)]
pub enum RegFnError {
    #[error("input symbol must be 0, 1 or 2")]
    BadSymbol,
    #[error("table backing does not cover input length {len}")]
    LengthOutOfRange { len: usize },
    #[error("not in the image of the pairing: {0}")]
    NotInPairImage(String),
    #[error("output shorter than the input; cannot drop the prefix")]
    PrimeTooShort,
    #[error("probe length exceeds the materialization cap")]
    ProbeTooLarge,
    #[error("machine-backed evaluation aborted at input '{input}'")]
    Aborted { input: String },
    #[error("machine-backed evaluation failed: {0}")]
    Backend(String),
}

/// A finite word over {0,1,2}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_symbols(syms: Vec<u8>) -> Result<Word, RegFnError> {
        if syms.iter().any(|&s| s > 2) {
            return Err(RegFnError::BadSymbol);
        }
        Ok(Word(syms))
    }

    pub fn parse(text: &str) -> Result<Word, RegFnError> {
        let mut syms = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => syms.push(0),
                '1' => syms.push(1),
                '2' => syms.push(2),
                _ => return Err(RegFnError::BadSymbol),
            }
        }
        Ok(Word(syms))
    }

    /// The word `0^n`.
    pub fn zeros(n: usize) -> Word {
        Word(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, sym: u8) {
        debug_assert!(sym <= 2);
        self.0.push(sym);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// Injective pairing with the exact length law
/// `|pair(u, v)| = (|u| + 2) * (|v| + 2)`. Layout: the length of `u` in
/// binary, a `2` as delimiter, then `u`, then `v`, then zero padding.
pub fn pair_words(u: &Word, v: &Word) -> Word {
    let target = (u.len() + 2) * (v.len() + 2);
    let mut syms = Vec::with_capacity(target);
    let bits = format!("{:b}", u.len());
    for b in bits.bytes() {
        syms.push(b - b'0');
    }
    syms.push(2);
    syms.extend_from_slice(u.symbols());
    syms.extend_from_slice(v.symbols());
    debug_assert!(syms.len() <= target);
    syms.resize(target, 0);
    Word(syms)
}

/// Exact inverse of [`pair_words`].
pub fn unpair_words(w: &Word) -> Result<(Word, Word), RegFnError> {
    let syms = w.symbols();
    let h = syms
        .iter()
        .position(|&s| s == 2)
        .ok_or_else(|| RegFnError::NotInPairImage("missing length delimiter".into()))?;
    if h == 0 || h > 63 {
        return Err(RegFnError::NotInPairImage("bad length header".into()));
    }
    if h > 1 && syms[0] == 0 {
        return Err(RegFnError::NotInPairImage("length header has leading zero".into()));
    }
    let mut lu = 0usize;
    for &b in &syms[..h] {
        lu = lu * 2 + b as usize;
    }
    let total = syms.len();
    if !total.is_multiple_of(lu + 2) {
        return Err(RegFnError::NotInPairImage(format!(
            "length {total} is not a multiple of {}",
            lu + 2
        )));
    }
    let lv = total / (lu + 2);
    if lv < 2 {
        return Err(RegFnError::NotInPairImage("length quotient too small".into()));
    }
    let lv = lv - 2;
    let used = h + 1 + lu + lv;
    if used > total {
        return Err(RegFnError::NotInPairImage("components overflow the word".into()));
    }
    if syms[used..].iter().any(|&s| s != 0) {
        return Err(RegFnError::NotInPairImage("nonzero padding".into()));
    }
    let u = Word(syms[h + 1..h + 1 + lu].to_vec());
    let v = Word(syms[h + 1 + lu..used].to_vec());
    Ok((u, v))
}

/// Backing for table-based regular functions: output word per input
/// length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTable {
    entries: BTreeMap<usize, Word>,
    repeat_last: bool,
}

impl WordTable {
    pub fn new(entries: BTreeMap<usize, Word>, repeat_last: bool) -> WordTable {
        WordTable { entries, repeat_last }
    }

    pub fn entries(&self) -> &BTreeMap<usize, Word> {
        &self.entries
    }

    pub fn repeat_last(&self) -> bool {
        self.repeat_last
    }

    fn value_for_len(&self, len: usize) -> Result<&Word, RegFnError> {
        if let Some(w) = self.entries.get(&len) {
            return Ok(w);
        }
        if self.repeat_last {
            if let Some((&max, w)) = self.entries.last_key_value() {
                if len > max {
                    return Ok(w);
                }
            }
        }
        Err(RegFnError::LengthOutOfRange { len })
    }
}

/// Adapter interface for machine-backed regular functions (implemented by
/// the interpreter). Adapters must be re-entrant. `size_at` may be
/// overridden when the size function is computable without materializing
/// the output word.
pub trait Backing: Send + Sync {
    fn apply(&self, u: &Word) -> Result<Word, RegFnError>;
    fn describe(&self) -> String;
    fn size_at(&self, _i: &BigUint) -> Option<Result<BigUint, RegFnError>> {
        None
    }
}

/// A regular string function in finitely presented form.
#[derive(Clone)]
pub enum RegFn {
    /// Output depends only on the input length, via a finite table.
    Table(Arc<WordTable>),
    /// `u -> 0^(g(|u|))`.
    Pad(MonFn),
    /// Constant function.
    Lift(Word),
    /// `u -> pair(left(u), right(u))`.
    Paired(Arc<RegFn>, Arc<RegFn>),
    /// `u -> u . inner(u)`; its size function is strictly monotone.
    Prime(Arc<RegFn>),
    /// Drops the first `|u|` symbols; inverse of `Prime`.
    DropPrefix(Arc<RegFn>),
    /// Left component of a pair-valued function.
    ProjLeft(Arc<RegFn>),
    /// Right component of a pair-valued function.
    ProjRight(Arc<RegFn>),
    /// Machine-backed adapter.
    Backed(Arc<dyn Backing>),
}

impl fmt::Debug for RegFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RegFn {
    pub fn pad(g: MonFn) -> RegFn {
        RegFn::Pad(g)
    }

    pub fn lift(w: Word) -> RegFn {
        RegFn::Lift(w)
    }

    pub fn table(t: WordTable) -> RegFn {
        RegFn::Table(Arc::new(t))
    }

    pub fn backed(b: Arc<dyn Backing>) -> RegFn {
        RegFn::Backed(b)
    }

    /// Left component of a pair-valued function. Projections of an
    /// explicit pairing short-circuit to the component, so the other
    /// side is never evaluated.
    pub fn proj_left(self) -> RegFn {
        match self {
            RegFn::Paired(a, _) => (*a).clone(),
            other => RegFn::ProjLeft(Arc::new(other)),
        }
    }

    pub fn proj_right(self) -> RegFn {
        match self {
            RegFn::Paired(_, b) => (*b).clone(),
            other => RegFn::ProjRight(Arc::new(other)),
        }
    }

    /// Apply the function to a word.
    pub fn apply(&self, u: &Word) -> Result<Word, RegFnError> {
        match self {
            RegFn::Table(t) => t.value_for_len(u.len()).cloned(),
            RegFn::Pad(g) => {
                let n = g.apply(&BigUint::from(u.len()));
                let n = n.to_usize().filter(|&n| n <= MAX_WORD_LEN).ok_or(RegFnError::ProbeTooLarge)?;
                Ok(Word::zeros(n))
            }
            RegFn::Lift(w) => Ok(w.clone()),
            RegFn::Paired(a, b) => Ok(pair_words(&a.apply(u)?, &b.apply(u)?)),
            RegFn::Prime(inner) => Ok(u.concat(&inner.apply(u)?)),
            RegFn::DropPrefix(inner) => {
                let w = inner.apply(u)?;
                if w.len() < u.len() {
                    return Err(RegFnError::PrimeTooShort);
                }
                Ok(Word(w.symbols()[u.len()..].to_vec()))
            }
            RegFn::ProjLeft(inner) => match inner.as_ref() {
                RegFn::Paired(a, _) => a.apply(u),
                other => Ok(unpair_words(&other.apply(u)?)?.0),
            },
            RegFn::ProjRight(inner) => match inner.as_ref() {
                RegFn::Paired(_, b) => b.apply(u),
                other => Ok(unpair_words(&other.apply(u)?)?.1),
            },
            RegFn::Backed(b) => b.apply(u),
        }
    }

    /// `|phi|(i) = |phi(0^i)|`, computed structurally where the backing
    /// allows it and by materializing `0^i` otherwise.
    pub fn size_at(&self, i: &BigUint) -> Result<BigUint, RegFnError> {
        match self {
            RegFn::Pad(g) => Ok(g.apply(i)),
            RegFn::Lift(w) => Ok(BigUint::from(w.len())),
            RegFn::Table(t) => {
                let len = i.to_usize().unwrap_or(usize::MAX);
                t.value_for_len(len).map(|w| BigUint::from(w.len()))
            }
            RegFn::Paired(a, b) => {
                let sa = a.size_at(i)? + 2u32;
                let sb = b.size_at(i)? + 2u32;
                Ok(sa * sb)
            }
            RegFn::Prime(inner) => Ok(i + inner.size_at(i)?),
            RegFn::ProjLeft(inner) => match inner.as_ref() {
                RegFn::Paired(a, _) => a.size_at(i),
                _ => self.size_by_probe(i),
            },
            RegFn::ProjRight(inner) => match inner.as_ref() {
                RegFn::Paired(_, b) => b.size_at(i),
                _ => self.size_by_probe(i),
            },
            RegFn::Backed(b) => match b.size_at(i) {
                Some(r) => r,
                None => self.size_by_probe(i),
            },
            _ => self.size_by_probe(i),
        }
    }

    fn size_by_probe(&self, i: &BigUint) -> Result<BigUint, RegFnError> {
        let n = i.to_usize().filter(|&n| n <= MAX_WORD_LEN).ok_or(RegFnError::ProbeTooLarge)?;
        Ok(BigUint::from(self.apply(&Word::zeros(n))?.len()))
    }

    pub fn size_at_usize(&self, i: usize) -> Result<BigUint, RegFnError> {
        self.size_at(&BigUint::from(i))
    }
}

/// Pair two regular functions pointwise; the size law
/// `|pair(f, g)|(i) = (|f|(i) + 2) * (|g|(i) + 2)` is exact. The mixed
/// pairing of a word with a function is obtained by lifting the word
/// first.
pub fn pair_regfns(a: RegFn, b: RegFn) -> RegFn {
    RegFn::Paired(Arc::new(a), Arc::new(b))
}

/// `phi'(v) = v . phi(v)`; makes the size function strictly monotone and
/// is invertible by [`prime_inverse`].
pub fn prime_transform(phi: RegFn) -> RegFn {
    RegFn::Prime(Arc::new(phi))
}

pub fn prime_inverse(phi: RegFn) -> RegFn {
    RegFn::DropPrefix(Arc::new(phi))
}

/// Check `|u| <= |v|  =>  |phi(u)| <= |phi(v)|` over all sampled pairs.
pub fn regularity_check(phi: &RegFn, samples: &[Word]) -> Result<bool, RegFnError> {
    assert!(!samples.is_empty(), "samples must be nonempty");
    let mut sized: Vec<(usize, usize)> = Vec::with_capacity(samples.len());
    for u in samples {
        sized.push((u.len(), phi.apply(u)?.len()));
    }
    for (lu, ou) in &sized {
        for (lv, ov) in &sized {
            if lu <= lv && ou > ov {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl fmt::Display for RegFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegFn::Table(t) => {
                let body: Vec<String> = t
                    .entries()
                    .iter()
                    .map(|(len, w)| format!("{len}:\"{w}\""))
                    .collect();
                let ext = if t.repeat_last() { "repeat" } else { "none" };
                write!(f, "table {{{}}} extend={ext}", body.join(", "))
            }
            RegFn::Pad(g) => write!(f, "pad g={g}"),
            RegFn::Lift(w) => write!(f, "lift \"{w}\""),
            RegFn::Paired(a, b) => write!(f, "pair({a},{b})"),
            RegFn::Prime(inner) => write!(f, "prime({inner})"),
            RegFn::DropPrefix(inner) => write!(f, "unprime({inner})"),
            RegFn::ProjLeft(inner) => write!(f, "proj-left({inner})"),
            RegFn::ProjRight(inner) => write!(f, "proj-right({inner})"),
            RegFn::Backed(b) => write!(f, "backed({})", b.describe()),
        }
    }
}

/// Parse the textual forms `pad g=<monfn>`, `lift "<word>"`,
/// `pair(<regfn>,<regfn>)` and `table {1:"0", 2:"01"} extend=repeat`.
pub fn parse_regfn(text: &str) -> Result<RegFn, String> {
    let mut p = RegParser { text: text.trim(), pos: 0 };
    let f = p.parse()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(format!("trailing input at byte {}", p.pos));
    }
    Ok(f)
}

struct RegParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> RegParser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), String> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(format!("expected '{tok}' at byte {}", self.pos))
        }
    }

    fn quoted_word(&mut self) -> Result<Word, String> {
        self.expect("\"")?;
        let rest = self.rest();
        let end = rest.find('"').ok_or("unterminated word literal")?;
        let w = Word::parse(&rest[..end]).map_err(|e| e.to_string())?;
        self.pos += end + 1;
        Ok(w)
    }

    fn parse(&mut self) -> Result<RegFn, String> {
        self.skip_ws();
        if self.eat("pad") {
            self.expect("g=")?;
            let rest = self.rest();
            // the monotone-function syntax runs to the end of the balanced
            // region: delimited by a closing paren or comma at depth zero
            let mut depth = 0usize;
            let mut end = rest.len();
            for (i, c) in rest.char_indices() {
                match c {
                    '(' | '[' | '{' => depth += 1,
                    ')' | ']' | '}' | ',' if depth == 0 => {
                        end = i;
                        break;
                    }
                    ')' | ']' | '}' => depth -= 1,
                    _ => {}
                }
            }
            let g = crate::sopoly::parse_monfn(&rest[..end]).map_err(|e| e.to_string())?;
            self.pos += end;
            return Ok(RegFn::pad(g));
        }
        if self.eat("lift") {
            let w = self.quoted_word()?;
            return Ok(RegFn::lift(w));
        }
        if self.eat("pair(") {
            let a = self.parse()?;
            self.expect(",")?;
            let b = self.parse()?;
            self.expect(")")?;
            return Ok(pair_regfns(a, b));
        }
        if self.eat("table") {
            self.expect("{")?;
            let mut entries = BTreeMap::new();
            self.skip_ws();
            if !self.rest().starts_with('}') {
                loop {
                    self.skip_ws();
                    let rest = self.rest();
                    let colon = rest.find(':').ok_or("expected 'len:' in table entry")?;
                    let len: usize = rest[..colon]
                        .trim()
                        .parse()
                        .map_err(|_| "bad length in table entry".to_string())?;
                    self.pos += colon + 1;
                    let w = self.quoted_word()?;
                    entries.insert(len, w);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect("}")?;
            let repeat = if self.eat("extend=repeat") {
                true
            } else if self.eat("extend=none") {
                false
            } else {
                return Err("expected 'extend=repeat' or 'extend=none'".into());
            };
            return Ok(RegFn::table(WordTable::new(entries, repeat)));
        }
        Err(format!("expected a regular-function form at byte {}", self.pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sopoly::{parse_monfn, UniPoly};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn pairing_length_law_and_roundtrip() {
        let p = pair_words(&w("01"), &w("1"));
        assert_eq!(p.len(), 12);
        assert_eq!(unpair_words(&p).unwrap(), (w("01"), w("1")));
        let e = pair_words(&w(""), &w(""));
        assert_eq!(e.len(), 4);
        assert_eq!(unpair_words(&e).unwrap(), (w(""), w("")));
    }

    #[test]
    fn unpair_rejects_non_images() {
        assert!(unpair_words(&w("000")).is_err());
        assert!(unpair_words(&w("")).is_err());
        assert!(unpair_words(&w("222222")).is_err());
    }

    #[test]
    fn exhaustive_roundtrip_small_binary_words() {
        let mut words = vec![Word::empty()];
        for len in 1..=5usize {
            for bits in 0..(1u32 << len) {
                let syms: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                words.push(Word::from_symbols(syms).unwrap());
            }
        }
        for u in &words {
            for v in &words {
                let p = pair_words(u, v);
                assert_eq!(p.len(), (u.len() + 2) * (v.len() + 2));
                assert_eq!(unpair_words(&p).unwrap(), (u.clone(), v.clone()));
            }
        }
    }

    #[test]
    fn pad_and_lift_application() {
        let f = RegFn::pad(parse_monfn("poly: x + 1").unwrap());
        assert_eq!(f.apply(&w("01")).unwrap(), w("000"));
        let g = RegFn::lift(w("10"));
        assert_eq!(g.apply(&w("2201")).unwrap(), w("10"));
        assert_eq!(g.size_at_usize(5).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn paired_application_matches_components() {
        let f = RegFn::pad(parse_monfn("poly: x + 1").unwrap());
        let g = RegFn::lift(w("10"));
        let p = pair_regfns(f.clone(), g.clone());
        let u = w("1");
        assert_eq!(
            p.apply(&u).unwrap(),
            pair_words(&f.apply(&u).unwrap(), &g.apply(&u).unwrap())
        );
        // size law (2+2)*(2+2) at i = 1
        assert_eq!(p.size_at_usize(1).unwrap(), BigUint::from(16u32));
        // projections recover the components
        assert_eq!(p.clone().proj_left().apply(&u).unwrap(), f.apply(&u).unwrap());
        assert_eq!(p.proj_right().apply(&u).unwrap(), g.apply(&u).unwrap());
    }

    #[test]
    fn prime_transform_properties() {
        let f = RegFn::lift(Word::empty());
        let pf = prime_transform(f);
        assert_eq!(pf.apply(&w("01")).unwrap(), w("01"));
        let g = RegFn::pad(MonFn::poly(UniPoly::from_coeffs(vec![1u64, 1])));
        let pg = prime_transform(g.clone());
        assert_eq!(pg.apply(&w("1")).unwrap(), w("100"));
        for i in 0..32usize {
            let lhs = pg.size_at_usize(i).unwrap();
            let rhs = BigUint::from(i) + g.size_at_usize(i).unwrap();
            assert_eq!(lhs, rhs);
        }
        // strictly monotone sizes
        let mut prev = pg.size_at_usize(0).unwrap();
        for i in 1..=32usize {
            let v = pg.size_at_usize(i).unwrap();
            assert!(v > prev);
            prev = v;
        }
        // inverse round trip
        let inv = prime_inverse(pg);
        for v in ["", "0", "21", "0102"] {
            assert_eq!(inv.apply(&w(v)).unwrap(), g.apply(&w(v)).unwrap());
        }
    }

    #[test]
    fn regularity_detection() {
        let good = RegFn::pad(parse_monfn("poly: 2*x").unwrap());
        let samples: Vec<Word> = vec![w(""), w("0"), w("11"), w("012")];
        assert!(regularity_check(&good, &samples).unwrap());
        let mut entries = BTreeMap::new();
        entries.insert(1, w("11"));
        entries.insert(2, w("1"));
        let bad = RegFn::table(WordTable::new(entries, true));
        assert!(!regularity_check(&bad, &[w("0"), w("00")]).unwrap());
        assert!(regularity_check(&RegFn::lift(w("10")), &samples).unwrap());
    }

    #[test]
    fn table_extension_rules() {
        let mut entries = BTreeMap::new();
        entries.insert(1, w("0"));
        entries.insert(2, w("01"));
        let t = RegFn::table(WordTable::new(entries.clone(), true));
        assert_eq!(t.apply(&w("111")).unwrap(), w("01"));
        assert!(t.apply(&Word::empty()).is_err());
        let strict = RegFn::table(WordTable::new(entries, false));
        assert!(strict.apply(&w("111")).is_err());
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in [
            "pad g=poly: 2*x^2 + 1",
            "lift \"102\"",
            "pair(pad g=poly: x,lift \"0\")",
            "table {1:\"0\", 2:\"01\"} extend=repeat",
        ] {
            let f = parse_regfn(s).unwrap();
            let printed = f.to_string();
            let again = parse_regfn(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(printed, again.to_string());
        }
    }
}
