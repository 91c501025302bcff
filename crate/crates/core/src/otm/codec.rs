//! Canonical encoding of machine descriptions as words over {0,1,2}.
//! The description is packed into a bitstream, prefixed with a guard bit
//! and re-expressed in base 3. Decoding is exact, so a description
//! serves as its own index.

use super::program::{
    Action, MachineDesc, Move, Pat, Proj, ProgramError, TableProgram, Transition, ViewExpr,
};
use crate::regfn::Word;
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("index word is not a valid machine encoding: {0}")]
    Malformed(String),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

struct BitSink {
    bits: Vec<bool>,
}

impl BitSink {
    fn new() -> Self {
        BitSink { bits: Vec::new() }
    }

    fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    fn push_bits(&mut self, value: u64, width: u32) {
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    /// Base-8 varint: groups of one continuation bit plus three value
    /// bits, most significant group first.
    fn push_varint(&mut self, value: u64) {
        let mut groups = Vec::new();
        let mut v = value;
        loop {
            groups.push(v & 7);
            v >>= 3;
            if v == 0 {
                break;
            }
        }
        groups.reverse();
        for (i, g) in groups.iter().enumerate() {
            self.push(i + 1 < groups.len());
            self.push_bits(*g, 3);
        }
    }

    fn into_word(self) -> Word {
        let mut num = BigUint::from(1u32);
        for b in self.bits {
            num = (num << 1) | BigUint::from(b as u32);
        }
        let digits = num.to_radix_be(3);
        Word::from_symbols(digits).expect("base-3 digits are symbols")
    }
}

struct BitSource {
    bits: Vec<bool>,
    pos: usize,
}

impl BitSource {
    fn from_word(w: &Word) -> Result<Self, CodecError> {
        if w.is_empty() {
            return Err(CodecError::Malformed("empty index".into()));
        }
        let num = BigUint::from_radix_be(w.symbols(), 3)
            .ok_or_else(|| CodecError::Malformed("bad base-3 digits".into()))?;
        let mut bits: Vec<bool> = Vec::with_capacity(num.bits() as usize);
        for i in (0..num.bits()).rev() {
            bits.push(num.bit(i));
        }
        if bits.is_empty() || !bits[0] {
            return Err(CodecError::Malformed("missing guard bit".into()));
        }
        bits.remove(0);
        Ok(BitSource { bits, pos: 0 })
    }

    fn take(&mut self) -> Result<bool, CodecError> {
        let b = self
            .bits
            .get(self.pos)
            .copied()
            .ok_or_else(|| CodecError::Malformed("truncated bitstream".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn take_bits(&mut self, width: u32) -> Result<u64, CodecError> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.take()? as u64;
        }
        Ok(v)
    }

    fn take_varint(&mut self) -> Result<u64, CodecError> {
        let mut v = 0u64;
        for _ in 0..22 {
            let more = self.take()?;
            v = (v << 3) | self.take_bits(3)?;
            if !more {
                return Ok(v);
            }
        }
        Err(CodecError::Malformed("varint too long".into()))
    }

    fn finish(self) -> Result<(), CodecError> {
        if self.pos != self.bits.len() {
            return Err(CodecError::Malformed("trailing bits".into()));
        }
        Ok(())
    }
}

const TAG_TABLE: u64 = 0;
const TAG_RESHUFFLE: u64 = 1;
const TAG_COMPOSED: u64 = 2;
const TAG_PAIRED: u64 = 3;
const TAG_DELAYWRAP: u64 = 4;
const TAG_EMITNAME: u64 = 5;
const TAG_APPLYNAME: u64 = 6;

fn encode_view(v: &ViewExpr, sink: &mut BitSink) {
    match v {
        ViewExpr::Oracle => sink.push_bits(0, 2),
        ViewExpr::Left(i) => {
            sink.push_bits(1, 2);
            encode_view(i, sink);
        }
        ViewExpr::Right(i) => {
            sink.push_bits(2, 2);
            encode_view(i, sink);
        }
        ViewExpr::Pair(a, b) => {
            sink.push_bits(3, 2);
            encode_view(a, sink);
            encode_view(b, sink);
        }
    }
}

fn decode_view(src: &mut BitSource, depth: u32) -> Result<ViewExpr, CodecError> {
    if depth > 32 {
        return Err(CodecError::Malformed("view too deep".into()));
    }
    Ok(match src.take_bits(2)? {
        0 => ViewExpr::Oracle,
        1 => ViewExpr::left(decode_view(src, depth + 1)?),
        2 => ViewExpr::right(decode_view(src, depth + 1)?),
        _ => {
            let a = decode_view(src, depth + 1)?;
            let b = decode_view(src, depth + 1)?;
            ViewExpr::pair(a, b)
        }
    })
}

fn encode_desc(m: &MachineDesc, sink: &mut BitSink) {
    match m {
        MachineDesc::Table(p) => {
            sink.push_bits(TAG_TABLE, 3);
            sink.push_varint(p.work_tapes as u64);
            sink.push_varint(p.n_states as u64);
            sink.push_varint(p.start as u64);
            sink.push_varint(p.transitions.len() as u64);
            for t in &p.transitions {
                sink.push_varint(t.state as u64);
                for r in &t.reads {
                    let code = match r {
                        Pat::Sym(s) => *s as u64,
                        Pat::Any => 4,
                    };
                    sink.push_bits(code, 3);
                }
                match &t.action {
                    Action::Step { next, writes, moves, out_push, q_push } => {
                        sink.push_bits(0, 2);
                        sink.push_varint(*next as u64);
                        for w in writes {
                            let code = match w {
                                super::program::WriteOp::Sym(s) => *s as u64,
                                super::program::WriteOp::Keep => 4,
                            };
                            sink.push_bits(code, 3);
                        }
                        for mv in moves {
                            let code = match mv {
                                Move::Left => 0u64,
                                Move::Right => 1,
                                Move::Stay => 2,
                            };
                            sink.push_bits(code, 2);
                        }
                        sink.push_bits(out_push.map_or(3, |s| s as u64), 2);
                        sink.push_bits(q_push.map_or(3, |s| s as u64), 2);
                    }
                    Action::Query { path, next } => {
                        sink.push_bits(1, 2);
                        sink.push_varint(path.len() as u64);
                        for p in path {
                            sink.push(*p == Proj::R);
                        }
                        sink.push_varint(*next as u64);
                    }
                    Action::Halt => sink.push_bits(2, 2),
                }
            }
        }
        MachineDesc::Reshuffle { view, inner } => {
            sink.push_bits(TAG_RESHUFFLE, 3);
            encode_view(view, sink);
            encode_desc(inner, sink);
        }
        MachineDesc::Composed { outer, inner } => {
            sink.push_bits(TAG_COMPOSED, 3);
            encode_desc(outer, sink);
            encode_desc(inner, sink);
        }
        MachineDesc::Paired { first, second } => {
            sink.push_bits(TAG_PAIRED, 3);
            encode_desc(first, sink);
            encode_desc(second, sink);
        }
        MachineDesc::DelayWrap { inner } => {
            sink.push_bits(TAG_DELAYWRAP, 3);
            encode_desc(inner, sink);
        }
        MachineDesc::EmitName { index, exponent } => {
            sink.push_bits(TAG_EMITNAME, 3);
            sink.push_varint(index.len() as u64);
            for &s in index.symbols() {
                sink.push_bits(s as u64, 2);
            }
            sink.push_varint(*exponent as u64);
        }
        MachineDesc::ApplyName { namer } => {
            sink.push_bits(TAG_APPLYNAME, 3);
            encode_desc(namer, sink);
        }
    }
}

fn decode_desc(src: &mut BitSource, depth: u32) -> Result<MachineDesc, CodecError> {
    if depth > 24 {
        return Err(CodecError::Malformed("program nesting too deep".into()));
    }
    match src.take_bits(3)? {
        TAG_TABLE => {
            let work_tapes = src.take_varint()? as usize;
            if work_tapes > super::program::MAX_WORK_TAPES {
                return Err(CodecError::Malformed("too many work tapes".into()));
            }
            let n_states = src.take_varint()? as u16;
            let start = src.take_varint()? as u16;
            let n_trans = src.take_varint()? as usize;
            if n_trans > 65_536 {
                return Err(CodecError::Malformed("too many transitions".into()));
            }
            let slots = work_tapes + 2;
            let mut transitions = Vec::with_capacity(n_trans);
            for _ in 0..n_trans {
                let state = src.take_varint()? as u16;
                let mut reads = Vec::with_capacity(slots);
                for _ in 0..slots {
                    reads.push(match src.take_bits(3)? {
                        4 => Pat::Any,
                        s if s <= 3 => Pat::Sym(s as u8),
                        _ => return Err(CodecError::Malformed("bad read pattern".into())),
                    });
                }
                let action = match src.take_bits(2)? {
                    0 => {
                        let next = src.take_varint()? as u16;
                        let mut writes = Vec::with_capacity(work_tapes);
                        for _ in 0..work_tapes {
                            writes.push(match src.take_bits(3)? {
                                4 => super::program::WriteOp::Keep,
                                s if s <= 3 => super::program::WriteOp::Sym(s as u8),
                                _ => return Err(CodecError::Malformed("bad write".into())),
                            });
                        }
                        let mut moves = Vec::with_capacity(slots);
                        for _ in 0..slots {
                            moves.push(match src.take_bits(2)? {
                                0 => Move::Left,
                                1 => Move::Right,
                                2 => Move::Stay,
                                _ => return Err(CodecError::Malformed("bad move".into())),
                            });
                        }
                        let out_push = match src.take_bits(2)? {
                            3 => None,
                            s => Some(s as u8),
                        };
                        let q_push = match src.take_bits(2)? {
                            3 => None,
                            s => Some(s as u8),
                        };
                        Action::Step { next, writes, moves, out_push, q_push }
                    }
                    1 => {
                        let plen = src.take_varint()? as usize;
                        if plen > 8 {
                            return Err(CodecError::Malformed("query path too long".into()));
                        }
                        let mut path = Vec::with_capacity(plen);
                        for _ in 0..plen {
                            path.push(if src.take()? { Proj::R } else { Proj::L });
                        }
                        let next = src.take_varint()? as u16;
                        Action::Query { path, next }
                    }
                    2 => Action::Halt,
                    _ => return Err(CodecError::Malformed("bad action tag".into())),
                };
                transitions.push(Transition { state, reads, action });
            }
            Ok(MachineDesc::Table(TableProgram::new(
                work_tapes, n_states, start, transitions,
            )?))
        }
        TAG_RESHUFFLE => {
            let view = decode_view(src, 0)?;
            let inner = decode_desc(src, depth + 1)?;
            Ok(MachineDesc::reshuffle(view, inner))
        }
        TAG_COMPOSED => {
            let outer = decode_desc(src, depth + 1)?;
            let inner = decode_desc(src, depth + 1)?;
            Ok(MachineDesc::composed(outer, inner))
        }
        TAG_PAIRED => {
            let first = decode_desc(src, depth + 1)?;
            let second = decode_desc(src, depth + 1)?;
            Ok(MachineDesc::paired(first, second))
        }
        TAG_DELAYWRAP => Ok(MachineDesc::delay_wrap(decode_desc(src, depth + 1)?)),
        TAG_EMITNAME => {
            let len = src.take_varint()? as usize;
            if len > 1_000_000 {
                return Err(CodecError::Malformed("embedded index too long".into()));
            }
            let mut syms = Vec::with_capacity(len);
            for _ in 0..len {
                let s = src.take_bits(2)? as u8;
                if s > 2 {
                    return Err(CodecError::Malformed("bad index symbol".into()));
                }
                syms.push(s);
            }
            let exponent = src.take_varint()? as u32;
            Ok(MachineDesc::EmitName {
                index: Word::from_symbols(syms).expect("symbols checked"),
                exponent,
            })
        }
        TAG_APPLYNAME => Ok(MachineDesc::apply_name(decode_desc(src, depth + 1)?)),
        _ => Err(CodecError::Malformed("bad program tag".into())),
    }
}

impl MachineDesc {
    /// Canonical index word.
    pub fn encode(&self) -> Word {
        let mut sink = BitSink::new();
        encode_desc(self, &mut sink);
        sink.into_word()
    }

    pub fn decode(index: &Word) -> Result<MachineDesc, CodecError> {
        let mut src = BitSource::from_word(index)?;
        let m = decode_desc(&mut src, 0)?;
        src.finish()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = "\
tapes 0
start copy
copy 0 * -> copy R S out=0
copy 1 * -> copy R S out=1
copy 2 * -> copy R S out=2
copy _ * -> HALT
";

    #[test]
    fn encode_decode_roundtrip() {
        let m = MachineDesc::parse_text(IDENTITY).unwrap();
        let encoded = m.encode();
        let decoded = MachineDesc::decode(&encoded).unwrap();
        assert_eq!(m, decoded);
    }

    #[test]
    fn structured_roundtrip() {
        let inner = MachineDesc::parse_text(IDENTITY).unwrap();
        let m = MachineDesc::composed(
            MachineDesc::reshuffle(ViewExpr::left(ViewExpr::Oracle), inner.clone()),
            MachineDesc::delay_wrap(inner),
        );
        assert_eq!(MachineDesc::decode(&m.encode()).unwrap(), m);
    }

    #[test]
    fn garbage_rejected() {
        assert!(MachineDesc::decode(&Word::empty()).is_err());
        assert!(MachineDesc::decode(&Word::parse("0000000000").unwrap()).is_err());
    }

    #[test]
    fn encoding_is_compact() {
        let m = MachineDesc::parse_text(IDENTITY).unwrap();
        assert!(m.encode().len() < 120, "{}", m.encode().len());
    }
}
