//! Function-space names: a name packages a machine index, an advice
//! oracle and a budget exponent, and is evaluated through the clocked
//! universal machine at its level. Combinators build new names
//! syntactically from old ones; budgets are re-derived from the
//! component witnesses rather than re-proved.

use crate::otm::{
    universal_run, Action, CodecError, MachineDesc, MachineError, Move, Pat, Proj, RunResult,
    TableProgram, Transition, ViewExpr, BLANK, DEFAULT_FUEL,
};
use crate::regfn::{pair_regfns, Backing, RegFn, RegFnError, Word};
use crate::sopoly::{degree_of, synth_witness, MonFn, SOPoly, SopError};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FsError {
    #[error(transparent)]
    Witness(#[from] SopError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("product requires equal levels, got {0} and {1}")]
    LevelMismatch(u32, u32),
    #[error("advice is not expressible in the textual forms")]
    NotSerializable,
    #[error("name text: {0}")]
    NameText(String),
}

/// A name `(index, advice, exponent)` in the level-`m` function space:
/// evaluation runs the decoded machine under the level-`m` clock with the
/// point's name paired against the advice.
#[derive(Debug, Clone)]
pub struct FuncName {
    pub level: u32,
    pub index: Word,
    pub advice: RegFn,
    pub exponent: u32,
}

/// A level-tagged name in the disjoint union of the level spaces.
#[derive(Debug, Clone)]
pub struct CoproductName {
    pub level: u32,
    pub name: FuncName,
}

impl CoproductName {
    pub fn new(name: FuncName) -> CoproductName {
        CoproductName { level: name.level, name }
    }
}

/// Compile a machine believed to run within `p` into a name at level
/// `max(deg p, 1)`. The advice carries the dominance witness as padding
/// and the exponent is the witness exponent; a false promise surfaces
/// later as clock aborts, never at compile time.
pub fn compile_to_name(m: &MachineDesc, p: &SOPoly) -> Result<FuncName, FsError> {
    let w = synth_witness(p)?;
    let level = degree_of(p).degree.max(1);
    let wrapped = MachineDesc::reshuffle(ViewExpr::left(ViewExpr::Oracle), m.clone());
    Ok(FuncName {
        level,
        index: wrapped.encode(),
        advice: RegFn::pad(w.q),
        exponent: w.k.max(1),
    })
}

struct EvalBacking {
    level: u32,
    index: Word,
    oracle: RegFn,
    exponent: u32,
}

impl Backing for EvalBacking {
    fn apply(&self, u: &Word) -> Result<Word, RegFnError> {
        let r = universal_run(self.level, &self.index, &self.oracle, self.exponent, u)
            .map_err(|e| match e {
                MachineError::Oracle(o) => o,
                other => RegFnError::Backend(other.to_string()),
            })?;
        match r.output {
            Some(w) => Ok(w),
            None => Err(RegFnError::Aborted { input: u.to_string() }),
        }
    }

    fn describe(&self) -> String {
        format!("name-eval level={} l={}", self.level, self.exponent)
    }
}

/// Evaluate a name at a point name: the resulting regular function is
/// lazily machine-backed, and a clock abort at some input is reported as
/// an application failure naming that input.
///
/// A name-emitting machine is special-cased: its output has the fixed
/// shape `pair(index, pair(oracle value, unary))`, so the result is
/// produced structurally and the emitted name's components keep their
/// size functions (probing an opaque emitted name would otherwise
/// materialize pair-inflated words).
pub fn fs_eval(f: &FuncName, x_name: &RegFn) -> RegFn {
    if let Ok(MachineDesc::EmitName { index, exponent }) = MachineDesc::decode(&f.index) {
        return name_regfn(&FuncName {
            level: f.level,
            index,
            advice: pair_regfns(x_name.clone(), f.advice.clone()),
            exponent,
        });
    }
    RegFn::backed(Arc::new(EvalBacking {
        level: f.level,
        index: f.index.clone(),
        oracle: pair_regfns(x_name.clone(), f.advice.clone()),
        exponent: f.exponent,
    }))
}

/// Run one evaluation eagerly, exposing the full run result.
pub fn fs_eval_run(f: &FuncName, x_name: &RegFn, u: &Word) -> Result<RunResult, MachineError> {
    let oracle = pair_regfns(x_name.clone(), f.advice.clone());
    universal_run(f.level, &f.index, &oracle, f.exponent, u)
}

/// Curry a name on a paired domain: the result emits, for each left
/// point, a name whose machine re-pairs the stored left point with the
/// incoming right point, and whose advice carries the left point.
pub fn fs_curry(f: &FuncName) -> Result<FuncName, FsError> {
    let original = MachineDesc::decode(&f.index)?;
    // the emitted name's machine sees <y, <x, psi>> and must behave as
    // the original does on <<x, y>, psi>
    let view = ViewExpr::pair(
        ViewExpr::pair(
            ViewExpr::left(ViewExpr::right(ViewExpr::Oracle)),
            ViewExpr::left(ViewExpr::Oracle),
        ),
        ViewExpr::right(ViewExpr::right(ViewExpr::Oracle)),
    );
    let inner_index = MachineDesc::reshuffle(view, original).encode();
    let emitter = MachineDesc::EmitName { index: inner_index, exponent: f.exponent };
    Ok(FuncName {
        level: f.level,
        index: emitter.encode(),
        advice: f.advice.clone(),
        exponent: f.exponent.max(1),
    })
}

/// Uncurry a name whose outputs are names in a level-`inner_level`
/// space.
pub fn fs_uncurry(f: &FuncName, inner_level: u32) -> Result<FuncName, FsError> {
    let namer = MachineDesc::decode(&f.index)?;
    Ok(FuncName {
        level: f.level + inner_level,
        index: MachineDesc::apply_name(namer).encode(),
        advice: f.advice.clone(),
        exponent: f.exponent + 1,
    })
}

/// Composition at level `f.level + g.level`: evaluating the result at a
/// point chains the value functions, so the output at `u` is g's value
/// applied to f's value at `u` (two application machines compose to the
/// doubled application machine).
pub fn fs_compose(g: &FuncName, f: &FuncName) -> Result<FuncName, FsError> {
    let outer = MachineDesc::decode(&g.index)?;
    let inner = MachineDesc::decode(&f.index)?;
    Ok(FuncName {
        level: f.level.checked_add(g.level).expect("level overflow"),
        index: MachineDesc::composed(outer, inner).encode(),
        advice: pair_regfns(f.advice.clone(), g.advice.clone()),
        exponent: f.exponent + g.exponent,
    })
}

/// Componentwise product of two names at the same level.
pub fn fs_product(f: &FuncName, g: &FuncName) -> Result<FuncName, FsError> {
    if f.level != g.level {
        return Err(FsError::LevelMismatch(f.level, g.level));
    }
    let first = MachineDesc::decode(&f.index)?;
    let second = MachineDesc::decode(&g.index)?;
    Ok(FuncName {
        level: f.level,
        index: MachineDesc::paired(first, second).encode(),
        advice: pair_regfns(f.advice.clone(), g.advice.clone()),
        exponent: f.exponent.max(g.exponent) + 1,
    })
}

/// A machine that copies its input to the query tape, queries through
/// `path`, and copies the answer to the output.
pub fn query_echo_machine(path: Vec<Proj>) -> MachineDesc {
    let mut transitions = Vec::new();
    for c in 0u8..=2 {
        transitions.push(Transition {
            state: 0,
            reads: vec![Pat::Sym(c), Pat::Any],
            action: Action::Step {
                next: 0,
                writes: vec![],
                moves: vec![Move::Right, Move::Stay],
                out_push: None,
                q_push: Some(c),
            },
        });
    }
    transitions.push(Transition {
        state: 0,
        reads: vec![Pat::Sym(BLANK), Pat::Any],
        action: Action::Query { path, next: 1 },
    });
    for c in 0u8..=2 {
        transitions.push(Transition {
            state: 1,
            reads: vec![Pat::Any, Pat::Sym(c)],
            action: Action::Step {
                next: 1,
                writes: vec![],
                moves: vec![Move::Stay, Move::Right],
                out_push: Some(c),
                q_push: None,
            },
        });
    }
    transitions.push(Transition {
        state: 1,
        reads: vec![Pat::Any, Pat::Sym(BLANK)],
        action: Action::Halt,
    });
    MachineDesc::Table(TableProgram::new(0, 2, 0, transitions).expect("valid table"))
}

/// The constant name: evaluation ignores the point and answers with the
/// packaged name of `y`.
pub fn fs_const(y_name: &RegFn, m: u32) -> FuncName {
    FuncName {
        level: m,
        index: query_echo_machine(vec![Proj::R]).encode(),
        advice: y_name.clone(),
        exponent: 1,
    }
}

/// A name with the clock stripped: the bare machine and advice, runnable
/// under the hard fuel cap only.
#[derive(Debug, Clone)]
pub struct UnclockedName {
    pub machine: MachineDesc,
    pub advice: RegFn,
    pub exponent: u32,
}

impl UnclockedName {
    /// Unclocked evaluation (guarded by the hard fuel cap).
    pub fn eval(&self, x_name: &RegFn, u: &Word) -> Result<Word, MachineError> {
        let oracle = pair_regfns(x_name.clone(), self.advice.clone());
        let r = crate::otm::run_machine(&self.machine, &oracle, u, DEFAULT_FUEL)?;
        r.output.ok_or(MachineError::FuelExhausted)
    }

    /// Reattach a clock at level `m` without re-wrapping the machine.
    pub fn reclock(&self, m: u32) -> FuncName {
        FuncName {
            level: m,
            index: self.machine.encode(),
            advice: self.advice.clone(),
            exponent: self.exponent,
        }
    }
}

/// Strip the clock from a name.
pub fn fs_forget(f: &FuncName) -> Result<UnclockedName, FsError> {
    Ok(UnclockedName {
        machine: MachineDesc::decode(&f.index)?,
        advice: f.advice.clone(),
        exponent: f.exponent,
    })
}

/// The name as a regular function `<index, <advice, 0^exponent>>`, the
/// wire shape produced by currying and consumed by name application.
pub fn name_regfn(f: &FuncName) -> RegFn {
    pair_regfns(
        RegFn::lift(f.index.clone()),
        pair_regfns(f.advice.clone(), RegFn::lift(Word::zeros(f.exponent as usize))),
    )
}

/// Recover a name from its regular-function shape (level supplied by the
/// ambient space).
pub fn name_from_regfn(phi: &RegFn, level: u32) -> Result<FuncName, FsError> {
    let probe = phi
        .apply(&Word::empty())
        .map_err(|e| FsError::NameText(format!("cannot probe name value: {e}")))?;
    let (index, rest) = crate::regfn::unpair_words(&probe)
        .map_err(|e| FsError::NameText(e.to_string()))?;
    let (_, unary) = crate::regfn::unpair_words(&rest)
        .map_err(|e| FsError::NameText(e.to_string()))?;
    MachineDesc::decode(&index)?;
    Ok(FuncName {
        level,
        index,
        advice: phi.clone().proj_right().proj_left(),
        exponent: unary.len() as u32,
    })
}

fn regfn_text(f: &RegFn) -> Result<String, FsError> {
    let ok = match f {
        RegFn::Table(_) | RegFn::Lift(_) => true,
        RegFn::Pad(g) => matches!(g, MonFn::Poly(_) | MonFn::Table(_)),
        RegFn::Paired(a, b) => {
            return Ok(format!("pair({},{})", regfn_text(a)?, regfn_text(b)?));
        }
        _ => false,
    };
    if ok {
        Ok(f.to_string())
    } else {
        Err(FsError::NotSerializable)
    }
}

/// Serialize a name to the textual container: level, unary-coded
/// exponent, advice descriptor and machine text.
pub fn name_to_text(f: &FuncName) -> Result<String, FsError> {
    let machine = MachineDesc::decode(&f.index)?;
    let mut out = String::new();
    writeln!(out, "fsname").unwrap();
    writeln!(out, "level {}", f.level).unwrap();
    writeln!(out, "l {}", "1".repeat(f.exponent as usize)).unwrap();
    writeln!(out, "advice {}", regfn_text(&f.advice)?).unwrap();
    writeln!(out, "machine {{").unwrap();
    write!(out, "{machine}").unwrap();
    writeln!(out, "}}").unwrap();
    Ok(out)
}

pub fn name_from_text(text: &str) -> Result<FuncName, FsError> {
    let mut level: Option<u32> = None;
    let mut exponent: Option<u32> = None;
    let mut advice: Option<RegFn> = None;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or(FsError::NameText("empty name text".into()))?;
    if header != "fsname" {
        return Err(FsError::NameText("missing 'fsname' header".into()));
    }
    let mut machine_text: Option<String> = None;
    while let Some(line) = lines.next() {
        if let Some(v) = line.strip_prefix("level ") {
            level = Some(v.trim().parse().map_err(|_| FsError::NameText("bad level".into()))?);
        } else if line == "l" {
            exponent = Some(0);
        } else if let Some(v) = line.strip_prefix("l ") {
            let v = v.trim();
            if !v.chars().all(|c| c == '1') {
                return Err(FsError::NameText("exponent must be unary (1s)".into()));
            }
            exponent = Some(v.len() as u32);
        } else if let Some(v) = line.strip_prefix("advice ") {
            advice = Some(crate::regfn::parse_regfn(v).map_err(FsError::NameText)?);
        } else if line == "machine {" {
            let mut body = String::new();
            let mut depth = 1usize;
            for l in lines.by_ref() {
                if l.ends_with('{') {
                    depth += 1;
                } else if l == "}" {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                body.push_str(l);
                body.push('\n');
            }
            if depth != 0 {
                return Err(FsError::NameText("unterminated machine block".into()));
            }
            machine_text = Some(body);
        } else {
            return Err(FsError::NameText(format!("unexpected line '{line}'")));
        }
    }
    let machine = MachineDesc::parse_text(
        &machine_text.ok_or(FsError::NameText("missing machine block".into()))?,
    )
    .map_err(|e| FsError::NameText(e.to_string()))?;
    Ok(FuncName {
        level: level.ok_or(FsError::NameText("missing level".into()))?,
        index: machine.encode(),
        advice: advice.ok_or(FsError::NameText("missing advice".into()))?,
        exponent: exponent.ok_or(FsError::NameText("missing exponent".into()))?,
    })
}

/// Extensional comparison of two regular functions on sample words.
pub fn regfns_agree(a: &RegFn, b: &RegFn, samples: &[Word]) -> Result<bool, RegFnError> {
    for u in samples {
        if a.apply(u)? != b.apply(u)? {
            return Ok(false);
        }
    }
    Ok(true)
}
