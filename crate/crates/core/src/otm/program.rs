//! Machine descriptions: transition tables plus the structured program
//! forms the interpreter executes natively (oracle reshuffling,
//! composition, pairing, budget-truncated wrapping, name emission and
//! name application). A description doubles as its own index via the
//! canonical encoding in [`super::codec`].

use crate::regfn::Word;
use std::fmt;
use thiserror::Error;

/// Tape symbols are 0, 1, 2; the blank is 3.
pub const BLANK: u8 = 3;

/// Maximum number of work tapes.
pub const MAX_WORK_TAPES: usize = 3;

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("state s{state}: transitions for {reads} are ambiguous")]
    Ambiguous { state: u16, reads: String },
    #[error("{0}")]
    Invalid(String),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, ProgramError> {
    Err(ProgramError::Parse { line, msg: msg.into() })
}

/// A read pattern: a concrete symbol or a wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pat {
    Sym(u8),
    Any,
}

impl Pat {
    pub fn matches(&self, sym: u8) -> bool {
        match self {
            Pat::Sym(s) => *s == sym,
            Pat::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
    Stay,
}

/// What to write on a work tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WriteOp {
    Sym(u8),
    Keep,
}

/// Oracle projection step used in query paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Proj {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Step {
        next: u16,
        writes: Vec<WriteOp>,
        moves: Vec<Move>,
        out_push: Option<u8>,
        q_push: Option<u8>,
    },
    Query {
        path: Vec<Proj>,
        next: u16,
    },
    Halt,
}

/// One transition: reads are ordered input tape, work tapes, answer tape.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub state: u16,
    pub reads: Vec<Pat>,
    pub action: Action,
}

/// A deterministic transition table over one read-only input tape,
/// `work_tapes` work tapes, a write-only query buffer, a read-only answer
/// tape and a write-only output tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableProgram {
    pub work_tapes: usize,
    pub n_states: u16,
    pub start: u16,
    pub transitions: Vec<Transition>,
}

impl TableProgram {
    pub fn read_slots(&self) -> usize {
        self.work_tapes + 2
    }

    /// Validate shapes and determinism, and sort transitions into
    /// canonical order.
    pub fn new(
        work_tapes: usize,
        n_states: u16,
        start: u16,
        mut transitions: Vec<Transition>,
    ) -> Result<TableProgram, ProgramError> {
        if work_tapes > MAX_WORK_TAPES {
            return Err(ProgramError::Invalid(format!(
                "at most {MAX_WORK_TAPES} work tapes supported"
            )));
        }
        if start >= n_states {
            return Err(ProgramError::Invalid("start state out of range".into()));
        }
        let slots = work_tapes + 2;
        for t in &transitions {
            if t.state >= n_states {
                return Err(ProgramError::Invalid(format!("state s{} out of range", t.state)));
            }
            if t.reads.len() != slots {
                return Err(ProgramError::Invalid(format!(
                    "transition in s{} must read {slots} symbols",
                    t.state
                )));
            }
            match &t.action {
                Action::Step { next, writes, moves, out_push, q_push } => {
                    if *next >= n_states {
                        return Err(ProgramError::Invalid(format!("state s{next} out of range")));
                    }
                    if writes.len() != work_tapes || moves.len() != slots {
                        return Err(ProgramError::Invalid(format!(
                            "transition in s{} must write {work_tapes} and move {slots}",
                            t.state
                        )));
                    }
                    for s in [out_push, q_push].into_iter().flatten() {
                        if *s > 2 {
                            return Err(ProgramError::Invalid("pushed symbols must be 0, 1 or 2".into()));
                        }
                    }
                }
                Action::Query { path, next } => {
                    if *next >= n_states {
                        return Err(ProgramError::Invalid(format!("state s{next} out of range")));
                    }
                    if path.len() > 8 {
                        return Err(ProgramError::Invalid("query path too long".into()));
                    }
                }
                Action::Halt => {}
            }
        }
        transitions.sort();
        transitions.dedup();
        let prog = TableProgram { work_tapes, n_states, start, transitions };
        prog.build_dispatch()?;
        Ok(prog)
    }

    /// Dense dispatch: for each state and concrete read tuple, the unique
    /// most-specific transition (fewest wildcards), if any.
    #[allow(clippy::needless_range_loop)]
    pub fn build_dispatch(&self) -> Result<Vec<Vec<Option<u32>>>, ProgramError> {
        let slots = self.read_slots();
        let combos = 4usize.pow(slots as u32);
        let mut table = vec![vec![None; combos]; self.n_states as usize];
        for code in 0..combos {
            let mut syms = Vec::with_capacity(slots);
            let mut c = code;
            for _ in 0..slots {
                syms.push((c % 4) as u8);
                c /= 4;
            }
            for (ti, t) in self.transitions.iter().enumerate() {
                if !t.reads.iter().zip(&syms).all(|(p, &s)| p.matches(s)) {
                    continue;
                }
                let slot = &mut table[t.state as usize][code];
                match slot {
                    None => *slot = Some(ti as u32),
                    Some(prev) => {
                        let pw = wildcards(&self.transitions[*prev as usize]);
                        let tw = wildcards(t);
                        if tw < pw {
                            *slot = Some(ti as u32);
                        } else if tw == pw {
                            return Err(ProgramError::Ambiguous {
                                state: t.state,
                                reads: syms.iter().map(|&s| sym_char(s)).collect(),
                            });
                        }
                    }
                }
            }
        }
        Ok(table)
    }
}

fn wildcards(t: &Transition) -> usize {
    t.reads.iter().filter(|p| matches!(p, Pat::Any)).count()
}

pub(crate) fn sym_char(s: u8) -> char {
    match s {
        0 => '0',
        1 => '1',
        2 => '2',
        BLANK => '_',
        _ => '?',
    }
}

/// How a wrapped machine sees the supplied oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViewExpr {
    Oracle,
    Left(Box<ViewExpr>),
    Right(Box<ViewExpr>),
    Pair(Box<ViewExpr>, Box<ViewExpr>),
}

impl fmt::Display for ViewExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViewExpr::Oracle => write!(f, "O"),
            ViewExpr::Left(v) => write!(f, "left({v})"),
            ViewExpr::Right(v) => write!(f, "right({v})"),
            ViewExpr::Pair(a, b) => write!(f, "pair({a},{b})"),
        }
    }
}

impl ViewExpr {
    pub fn left(v: ViewExpr) -> ViewExpr {
        ViewExpr::Left(Box::new(v))
    }

    pub fn right(v: ViewExpr) -> ViewExpr {
        ViewExpr::Right(Box::new(v))
    }

    pub fn pair(a: ViewExpr, b: ViewExpr) -> ViewExpr {
        ViewExpr::Pair(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<ViewExpr, String> {
        let (v, rest) = Self::parse_inner(text.trim())?;
        if !rest.trim().is_empty() {
            return Err(format!("trailing input in view: '{rest}'"));
        }
        Ok(v)
    }

    fn parse_inner(text: &str) -> Result<(ViewExpr, &str), String> {
        let t = text.trim_start();
        if let Some(rest) = t.strip_prefix("O") {
            return Ok((ViewExpr::Oracle, rest));
        }
        for (name, wrap) in [
            ("left(", true),
            ("right(", false),
        ] {
            if let Some(rest) = t.strip_prefix(name) {
                let (inner, rest) = Self::parse_inner(rest)?;
                let rest = rest
                    .trim_start()
                    .strip_prefix(')')
                    .ok_or("expected ')' in view")?;
                let v = if wrap { ViewExpr::left(inner) } else { ViewExpr::right(inner) };
                return Ok((v, rest));
            }
        }
        if let Some(rest) = t.strip_prefix("pair(") {
            let (a, rest) = Self::parse_inner(rest)?;
            let rest = rest.trim_start().strip_prefix(',').ok_or("expected ',' in view")?;
            let (b, rest) = Self::parse_inner(rest)?;
            let rest = rest.trim_start().strip_prefix(')').ok_or("expected ')' in view")?;
            return Ok((ViewExpr::pair(a, b), rest));
        }
        Err(format!("expected view expression at '{t}'"))
    }
}

/// A machine description. `Table` is an honest transition table; the
/// remaining forms are structured programs with fixed interpreter
/// semantics, so that machine combinators stay syntactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineDesc {
    Table(TableProgram),
    /// Run `inner` with the reshaped oracle `view(o)`.
    Reshuffle { view: ViewExpr, inner: Box<MachineDesc> },
    /// With oracle `<x, <psi_in, psi_out>>`, run `inner` with
    /// `<x, psi_in>` on the input, then run `outer` with `<x, psi_out>`
    /// on the intermediate output.
    Composed { outer: Box<MachineDesc>, inner: Box<MachineDesc> },
    /// With oracle `<<x, u>, <psi_f, psi_g>>`, pair the outputs of the
    /// component machines run with `<x, psi_f>` and `<u, psi_g>`.
    Paired { first: Box<MachineDesc>, second: Box<MachineDesc> },
    /// On input `u`, simulate `inner` on the empty input for at most
    /// `|u|` steps and output whatever it has emitted.
    DelayWrap { inner: Box<MachineDesc> },
    /// On input `v`, query the oracle with `v` and output
    /// `pair(index, pair(answer, 0^exponent))` — a function-space name
    /// whose advice is the supplied oracle.
    EmitName { index: Word, exponent: u32 },
    /// With oracle `<<x, y>, psi>`, run `namer` with `<x, psi>` to obtain
    /// a function-space name, then run the named machine with `<y, ...>`
    /// on the input.
    ApplyName { namer: Box<MachineDesc> },
}

impl MachineDesc {
    pub fn table(p: TableProgram) -> MachineDesc {
        MachineDesc::Table(p)
    }

    pub fn reshuffle(view: ViewExpr, inner: MachineDesc) -> MachineDesc {
        MachineDesc::Reshuffle { view, inner: Box::new(inner) }
    }

    pub fn composed(outer: MachineDesc, inner: MachineDesc) -> MachineDesc {
        MachineDesc::Composed { outer: Box::new(outer), inner: Box::new(inner) }
    }

    pub fn paired(first: MachineDesc, second: MachineDesc) -> MachineDesc {
        MachineDesc::Paired { first: Box::new(first), second: Box::new(second) }
    }

    pub fn delay_wrap(inner: MachineDesc) -> MachineDesc {
        MachineDesc::DelayWrap { inner: Box::new(inner) }
    }

    pub fn apply_name(namer: MachineDesc) -> MachineDesc {
        MachineDesc::ApplyName { namer: Box::new(namer) }
    }
}

// ---------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    /// Collect the lines of a `{ ... }` block, tracking nesting.
    fn block(&mut self, keyword: &str) -> Result<String, ProgramError> {
        let (ln, line) = self.next().ok_or(ProgramError::Parse {
            line: 0,
            msg: format!("expected '{keyword} {{'"),
        })?;
        if line != format!("{keyword} {{") {
            return perr(ln, format!("expected '{keyword} {{', found '{line}'"));
        }
        let mut depth = 1usize;
        let mut body = String::new();
        loop {
            let (ln, line) = self
                .next()
                .ok_or(ProgramError::Parse { line: ln, msg: "unterminated block".into() })?;
            if line.ends_with('{') {
                depth += 1;
            } else if line == "}" {
                depth -= 1;
                if depth == 0 {
                    return Ok(body);
                }
            }
            body.push_str(line);
            body.push('\n');
            let _ = ln;
        }
    }
}

impl MachineDesc {
    /// Parse the line-oriented machine text format.
    pub fn parse_text(text: &str) -> Result<MachineDesc, ProgramError> {
        let mut lines = Lines::new(text);
        let desc = Self::parse_from(&mut lines)?;
        if let Some((ln, l)) = lines.peek() {
            return perr(ln, format!("unexpected trailing line '{l}'"));
        }
        Ok(desc)
    }

    fn parse_from(lines: &mut Lines) -> Result<MachineDesc, ProgramError> {
        let (ln, first) = lines
            .peek()
            .ok_or(ProgramError::Parse { line: 0, msg: "empty machine text".into() })?;
        if let Some(variant) = first.strip_prefix("prog ") {
            lines.next();
            match variant.trim() {
                "reshuffle" => {
                    let (vln, vline) = lines
                        .next()
                        .ok_or(ProgramError::Parse { line: ln, msg: "expected 'view ...'".into() })?;
                    let view = vline
                        .strip_prefix("view ")
                        .ok_or(ProgramError::Parse { line: vln, msg: "expected 'view ...'".into() })?;
                    let view = ViewExpr::parse(view).map_err(|e| ProgramError::Parse { line: vln, msg: e })?;
                    let inner = lines.block("inner")?;
                    Ok(MachineDesc::reshuffle(view, Self::parse_text(&inner)?))
                }
                "compose" => {
                    let outer = lines.block("outer")?;
                    let inner = lines.block("inner")?;
                    Ok(MachineDesc::composed(
                        Self::parse_text(&outer)?,
                        Self::parse_text(&inner)?,
                    ))
                }
                "paired" => {
                    let first = lines.block("first")?;
                    let second = lines.block("second")?;
                    Ok(MachineDesc::paired(
                        Self::parse_text(&first)?,
                        Self::parse_text(&second)?,
                    ))
                }
                "delaywrap" => {
                    let inner = lines.block("inner")?;
                    Ok(MachineDesc::delay_wrap(Self::parse_text(&inner)?))
                }
                "emitname" => {
                    let (iln, iline) = lines
                        .next()
                        .ok_or(ProgramError::Parse { line: ln, msg: "expected 'index ...'".into() })?;
                    let idx = iline
                        .strip_prefix("index ")
                        .ok_or(ProgramError::Parse { line: iln, msg: "expected 'index ...'".into() })?;
                    let index = Word::parse(idx.trim())
                        .map_err(|e| ProgramError::Parse { line: iln, msg: e.to_string() })?;
                    let (lln, lline) = lines
                        .next()
                        .ok_or(ProgramError::Parse { line: ln, msg: "expected 'l ...'".into() })?;
                    let l = lline
                        .strip_prefix("l ")
                        .and_then(|v| v.trim().parse::<u32>().ok())
                        .ok_or(ProgramError::Parse { line: lln, msg: "expected 'l <nat>'".into() })?;
                    Ok(MachineDesc::EmitName { index, exponent: l })
                }
                "applyname" => {
                    let namer = lines.block("namer")?;
                    Ok(MachineDesc::apply_name(Self::parse_text(&namer)?))
                }
                other => perr(ln, format!("unknown program form '{other}'")),
            }
        } else {
            Self::parse_table(lines).map(MachineDesc::Table)
        }
    }

    fn parse_table(lines: &mut Lines) -> Result<TableProgram, ProgramError> {
        let mut work_tapes: Option<usize> = None;
        let mut start_name: Option<String> = None;
        let mut names: Vec<String> = Vec::new();
        let mut transitions = Vec::new();
        let intern = |names: &mut Vec<String>, n: &str| -> u16 {
            if let Some(i) = names.iter().position(|x| x == n) {
                i as u16
            } else {
                names.push(n.to_string());
                (names.len() - 1) as u16
            }
        };
        while let Some((ln, line)) = lines.next() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "tapes" => {
                    if toks.len() != 2 {
                        return perr(ln, "expected 'tapes <k>'");
                    }
                    work_tapes = Some(
                        toks[1]
                            .parse()
                            .map_err(|_| ProgramError::Parse { line: ln, msg: "bad tape count".into() })?,
                    );
                }
                "start" => {
                    if toks.len() != 2 {
                        return perr(ln, "expected 'start <state>'");
                    }
                    start_name = Some(toks[1].to_string());
                    intern(&mut names, toks[1]);
                }
                _ => {
                    let k = work_tapes
                        .ok_or(ProgramError::Parse { line: ln, msg: "'tapes <k>' must come first".into() })?;
                    let slots = k + 2;
                    if toks.len() < slots + 2 {
                        return perr(ln, "transition line too short");
                    }
                    let state = intern(&mut names, toks[0]);
                    let mut reads = Vec::with_capacity(slots);
                    for t in &toks[1..=slots] {
                        reads.push(parse_pat(t).map_err(|m| ProgramError::Parse { line: ln, msg: m })?);
                    }
                    if toks[slots + 1] != "->" {
                        return perr(ln, "expected '->'");
                    }
                    let rhs = &toks[slots + 2..];
                    if rhs.is_empty() {
                        return perr(ln, "missing action");
                    }
                    let action = if rhs[0] == "HALT" {
                        if rhs.len() != 1 {
                            return perr(ln, "HALT takes no arguments");
                        }
                        Action::Halt
                    } else if let Some(path) = rhs[0].strip_prefix("QUERY") {
                        if rhs.len() != 2 {
                            return perr(ln, "expected 'QUERY[path] <state>'");
                        }
                        let mut projs = Vec::new();
                        for c in path.chars() {
                            match c {
                                'L' => projs.push(Proj::L),
                                'R' => projs.push(Proj::R),
                                _ => return perr(ln, "query path must be L/R letters"),
                            }
                        }
                        Action::Query { path: projs, next: intern(&mut names, rhs[1]) }
                    } else {
                        let need = 1 + k + slots;
                        if rhs.len() < need {
                            return perr(ln, "step action too short");
                        }
                        let next = intern(&mut names, rhs[0]);
                        let mut writes = Vec::with_capacity(k);
                        for t in &rhs[1..=k] {
                            writes.push(parse_write(t).map_err(|m| ProgramError::Parse { line: ln, msg: m })?);
                        }
                        let mut moves = Vec::with_capacity(slots);
                        for t in &rhs[1 + k..need] {
                            moves.push(parse_move(t).map_err(|m| ProgramError::Parse { line: ln, msg: m })?);
                        }
                        let mut out_push = None;
                        let mut q_push = None;
                        for t in &rhs[need..] {
                            if let Some(v) = t.strip_prefix("out=") {
                                out_push = Some(parse_sym(v).map_err(|m| ProgramError::Parse { line: ln, msg: m })?);
                            } else if let Some(v) = t.strip_prefix("qpush=") {
                                q_push = Some(parse_sym(v).map_err(|m| ProgramError::Parse { line: ln, msg: m })?);
                            } else {
                                return perr(ln, format!("unknown action token '{t}'"));
                            }
                        }
                        Action::Step { next, writes, moves, out_push, q_push }
                    };
                    transitions.push(Transition { state, reads, action });
                }
            }
        }
        let work_tapes = work_tapes.ok_or(ProgramError::Invalid("missing 'tapes' line".into()))?;
        let start_name = start_name.ok_or(ProgramError::Invalid("missing 'start' line".into()))?;
        let start = names.iter().position(|n| *n == start_name).unwrap() as u16;
        TableProgram::new(work_tapes, names.len() as u16, start, transitions)
    }
}

fn parse_pat(t: &str) -> Result<Pat, String> {
    match t {
        "*" => Ok(Pat::Any),
        "_" => Ok(Pat::Sym(BLANK)),
        "0" => Ok(Pat::Sym(0)),
        "1" => Ok(Pat::Sym(1)),
        "2" => Ok(Pat::Sym(2)),
        _ => Err(format!("bad read symbol '{t}'")),
    }
}

fn parse_write(t: &str) -> Result<WriteOp, String> {
    match t {
        "." => Ok(WriteOp::Keep),
        "_" => Ok(WriteOp::Sym(BLANK)),
        "0" => Ok(WriteOp::Sym(0)),
        "1" => Ok(WriteOp::Sym(1)),
        "2" => Ok(WriteOp::Sym(2)),
        _ => Err(format!("bad write symbol '{t}'")),
    }
}

fn parse_move(t: &str) -> Result<Move, String> {
    match t {
        "L" => Ok(Move::Left),
        "R" => Ok(Move::Right),
        "S" => Ok(Move::Stay),
        _ => Err(format!("bad move '{t}'")),
    }
}

fn parse_sym(t: &str) -> Result<u8, String> {
    match t {
        "0" => Ok(0),
        "1" => Ok(1),
        "2" => Ok(2),
        _ => Err(format!("bad symbol '{t}'")),
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Left => write!(f, "L"),
            Move::Right => write!(f, "R"),
            Move::Stay => write!(f, "S"),
        }
    }
}

impl fmt::Display for TableProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tapes {}", self.work_tapes)?;
        writeln!(f, "start s{}", self.start)?;
        for t in &self.transitions {
            write!(f, "s{}", t.state)?;
            for p in &t.reads {
                match p {
                    Pat::Sym(s) => write!(f, " {}", sym_char(*s))?,
                    Pat::Any => write!(f, " *")?,
                }
            }
            write!(f, " ->")?;
            match &t.action {
                Action::Halt => write!(f, " HALT")?,
                Action::Query { path, next } => {
                    write!(f, " QUERY")?;
                    for p in path {
                        write!(f, "{}", if *p == Proj::L { 'L' } else { 'R' })?;
                    }
                    write!(f, " s{next}")?;
                }
                Action::Step { next, writes, moves, out_push, q_push } => {
                    write!(f, " s{next}")?;
                    for w in writes {
                        match w {
                            WriteOp::Keep => write!(f, " .")?,
                            WriteOp::Sym(s) => write!(f, " {}", sym_char(*s))?,
                        }
                    }
                    for m in moves {
                        write!(f, " {m}")?;
                    }
                    if let Some(s) = out_push {
                        write!(f, " out={s}")?;
                    }
                    if let Some(s) = q_push {
                        write!(f, " qpush={s}")?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, keyword: &str, inner: &MachineDesc) -> fmt::Result {
    writeln!(f, "{keyword} {{")?;
    write!(f, "{inner}")?;
    writeln!(f, "}}")
}

impl fmt::Display for MachineDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineDesc::Table(p) => write!(f, "{p}"),
            MachineDesc::Reshuffle { view, inner } => {
                writeln!(f, "prog reshuffle")?;
                writeln!(f, "view {view}")?;
                write_block(f, "inner", inner)
            }
            MachineDesc::Composed { outer, inner } => {
                writeln!(f, "prog compose")?;
                write_block(f, "outer", outer)?;
                write_block(f, "inner", inner)
            }
            MachineDesc::Paired { first, second } => {
                writeln!(f, "prog paired")?;
                write_block(f, "first", first)?;
                write_block(f, "second", second)
            }
            MachineDesc::DelayWrap { inner } => {
                writeln!(f, "prog delaywrap")?;
                write_block(f, "inner", inner)
            }
            MachineDesc::EmitName { index, exponent } => {
                writeln!(f, "prog emitname")?;
                writeln!(f, "index {index}")?;
                writeln!(f, "l {exponent}")
            }
            MachineDesc::ApplyName { namer } => {
                writeln!(f, "prog applyname")?;
                write_block(f, "namer", namer)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = "\
# copy the input to the output
tapes 0
start copy
copy 0 * -> copy R S out=0
copy 1 * -> copy R S out=1
copy 2 * -> copy R S out=2
copy _ * -> HALT
";

    #[test]
    fn parse_identity_table() {
        let m = MachineDesc::parse_text(IDENTITY).unwrap();
        let MachineDesc::Table(p) = &m else { panic!() };
        assert_eq!(p.work_tapes, 0);
        assert_eq!(p.n_states, 1);
        assert_eq!(p.transitions.len(), 4);
    }

    #[test]
    fn display_parse_roundtrip() {
        let m = MachineDesc::parse_text(IDENTITY).unwrap();
        let printed = m.to_string();
        let again = MachineDesc::parse_text(&printed).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn ambiguous_wildcards_rejected() {
        let text = "\
tapes 0
start a
a 0 * -> a R S
a * 0 -> a R S
a _ _ -> HALT
";
        // the tuple (0, 0) matches both single-wildcard rules
        assert!(matches!(
            MachineDesc::parse_text(text),
            Err(ProgramError::Ambiguous { .. })
        ));
    }

    #[test]
    fn more_specific_rule_wins() {
        let text = "\
tapes 0
start a
a 0 0 -> HALT
a 0 * -> a R S
a * * -> a S S out=1
";
        let m = MachineDesc::parse_text(text).unwrap();
        let MachineDesc::Table(p) = &m else { panic!() };
        let dispatch = p.build_dispatch().unwrap();
        // reads (0, 0) encode to index 0
        let ti = dispatch[0][0].unwrap();
        assert_eq!(p.transitions[ti as usize].action, Action::Halt);
    }

    #[test]
    fn structured_forms_roundtrip() {
        let inner = MachineDesc::parse_text(IDENTITY).unwrap();
        for m in [
            MachineDesc::reshuffle(ViewExpr::left(ViewExpr::Oracle), inner.clone()),
            MachineDesc::composed(inner.clone(), inner.clone()),
            MachineDesc::paired(inner.clone(), inner.clone()),
            MachineDesc::delay_wrap(inner.clone()),
            MachineDesc::EmitName { index: Word::parse("0120").unwrap(), exponent: 3 },
            MachineDesc::apply_name(MachineDesc::reshuffle(
                ViewExpr::pair(
                    ViewExpr::left(ViewExpr::left(ViewExpr::Oracle)),
                    ViewExpr::right(ViewExpr::Oracle),
                ),
                inner.clone(),
            )),
        ] {
            let printed = m.to_string();
            let again = MachineDesc::parse_text(&printed)
                .unwrap_or_else(|e| panic!("{printed}\n{e}"));
            assert_eq!(m, again, "{printed}");
        }
    }

    #[test]
    fn view_parse() {
        let v = ViewExpr::parse("pair(left(O),left(right(O)))").unwrap();
        assert_eq!(
            v,
            ViewExpr::pair(
                ViewExpr::left(ViewExpr::Oracle),
                ViewExpr::left(ViewExpr::right(ViewExpr::Oracle))
            )
        );
        assert!(ViewExpr::parse("pair(O)").is_err());
    }
}
