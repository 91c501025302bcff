//! Command-line front end: stable textual formats, deterministic output
//! (`key=value` results, one result per line), exit code 0 on success, 1
//! on domain errors, 2 on usage errors.

use crate::epb::{epb_check, epb_collapse, EpbCertificate};
use crate::funcspace::{
    compile_to_name, fs_compose, fs_const, fs_curry, fs_eval, fs_forget, fs_product, fs_uncurry,
    name_from_text, name_to_text, FuncName,
};
use crate::otm::{
    measure_phi_steps, phi_machine, run_clocked, run_machine, universal_run, MachineDesc,
    RunResult, DEFAULT_FUEL,
};
use crate::regfn::{parse_regfn, RegFn, Word};
use crate::repspace::{
    decode_nat, decode_sierp_bounded, delay_wrap, pi_decode_prefix, realizer_check, Point,
    Representation, SierpOutcome,
};
use crate::sopoly::{
    brute_force_counterexample, check_o2_witness, decompose, degree_of, dominates_monomial,
    eval_sop, grid_samples, monomial, parse_monfn, parse_sop, separate_monomials, synth_witness,
    MonFn, TableMon,
};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "typetwo", version, about = "Second-order polynomial-time workbench")]
struct Cli {
    #[command(subcommand)]
    tool: Tool,
}

#[derive(Subcommand)]
enum Tool {
    /// Second-order polynomials: parsing, evaluation, degrees, witnesses
    /// and counterexamples.
    Sop {
        #[command(subcommand)]
        verb: SopVerb,
    },
    /// Oracle Turing machines: run, clock, the universal machine and the
    /// iterated-application machines.
    Otm {
        #[command(subcommand)]
        verb: OtmVerb,
    },
    /// Function-space names: compile, evaluate and combine.
    Fs {
        #[command(subcommand)]
        verb: FsVerb,
    },
    /// Representations: decoding, padding and realizer checks.
    Rep {
        #[command(subcommand)]
        verb: RepVerb,
    },
    /// Effectively-polynomially-bounded certificates and the collapse.
    Epb {
        #[command(subcommand)]
        verb: EpbVerb,
    },
}

#[derive(Subcommand)]
enum SopVerb {
    /// Parse and reprint in canonical fully parenthesized form.
    Parse { expr: String },
    /// Evaluate at a monotone function and an argument.
    Eval {
        expr: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        k: u64,
    },
    /// Degree and type.
    Deg { expr: String },
    /// Decompose a type-m polynomial at its outermost applications.
    Decomp { expr: String },
    /// Does the polynomial lie in the dominance class of the m-th
    /// monomial?
    Dominates {
        expr: String,
        #[arg(long)]
        m: u32,
    },
    /// Synthesize and verify a dominance witness.
    Witness {
        expr: String,
        /// extra randomized spot checks beyond the built-in grid
        #[arg(long, default_value_t = 0)]
        extra: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Construct a verified counterexample against the m-th monomial.
    Separate {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: String,
        #[arg(long)]
        k: u32,
    },
    /// Exhaustive small-scale counterexample search.
    Brute {
        p_expr: String,
        q_expr: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 16)]
        bound: u64,
        #[arg(long, default_value_t = 4)]
        index_bound: u64,
    },
}

#[derive(Subcommand)]
enum OtmVerb {
    /// Run a machine under a hard fuel cap.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        input: String,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Run a machine under a second-order polynomial clock.
    Clock {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        input: String,
    },
    /// Run the clocked universal machine on an encoded index.
    Universal {
        #[arg(long)]
        m: u32,
        /// index word over {0,1,2}, or @file to encode a machine file
        #[arg(long)]
        index: String,
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        input: String,
    },
    /// Emit or run the m-fold application machine.
    Phi {
        #[arg(long)]
        m: u32,
        /// print the machine text instead of running
        #[arg(long)]
        emit: bool,
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        input: Option<String>,
    },
    /// Measure the m-fold application machine against its output-length
    /// lower bound.
    Measure {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        input: String,
    },
}

#[derive(Args)]
struct NameOut {
    /// output file for the resulting name
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum FsVerb {
    /// Compile a machine with a promised bound into a name.
    Compile {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        out: NameOut,
    },
    /// Evaluate a name at a point name and an input word.
    Eval {
        #[arg(long)]
        name: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        input: String,
    },
    Curry {
        #[arg(long)]
        name: PathBuf,
        #[command(flatten)]
        out: NameOut,
    },
    Uncurry {
        #[arg(long)]
        name: PathBuf,
        #[arg(long)]
        inner_level: u32,
        #[command(flatten)]
        out: NameOut,
    },
    Compose {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[command(flatten)]
        out: NameOut,
    },
    Prod {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[command(flatten)]
        out: NameOut,
    },
    Const {
        #[arg(long)]
        y: String,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        out: NameOut,
    },
    /// Strip the clock: print the machine text and advice.
    Forget {
        #[arg(long)]
        name: PathBuf,
    },
}

#[derive(Subcommand)]
enum RepVerb {
    /// Decode a name under a representation.
    Decode {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 6)]
        bound: u64,
        #[arg(long, default_value_t = 8)]
        len: usize,
        #[arg(long, default_value_t = 4096)]
        probe_bound: usize,
    },
    /// Wrap a machine so every call stays within a linear budget.
    Pad {
        #[arg(long)]
        machine: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a machine as a realizer of a declared point map.
    Check {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "nat")]
        from: String,
        #[arg(long, default_value = "nat")]
        to: String,
        /// semicolon-separated regular functions
        #[arg(long)]
        names: String,
    },
}

#[derive(Subcommand)]
enum EpbVerb {
    /// Check a certificate against a family of names.
    Check {
        /// semicolon-separated regular functions
        #[arg(long)]
        names: String,
        #[arg(long)]
        cert: String,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Collapse a name at level >= 2 to level 2.
    Collapse {
        #[arg(long)]
        name: PathBuf,
        #[arg(long)]
        cert: String,
        #[command(flatten)]
        out: NameOut,
    },
}

/// Domain-level failure carrying the message printed to stderr.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Out = Result<String, Failure>;

/// Parse the argument vector and run; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Out {
    match cli.tool {
        Tool::Sop { verb } => sop(verb),
        Tool::Otm { verb } => otm(verb),
        Tool::Fs { verb } => fs(verb),
        Tool::Rep { verb } => rep(verb),
        Tool::Epb { verb } => epb(verb),
    }
}

fn parse_oracle(text: &Option<String>) -> Result<RegFn, Failure> {
    match text {
        None => Ok(RegFn::lift(Word::empty())),
        Some(t) => parse_regfn(t).map_err(Failure),
    }
}

fn run_line(r: &RunResult) -> String {
    let mut line = String::new();
    match &r.output {
        Some(w) => write!(line, "aborted=false output=\"{w}\"").unwrap(),
        None => write!(line, "aborted=true").unwrap(),
    }
    writeln!(
        line,
        " steps={} oracle_calls={} meta_probes={}",
        r.steps, r.oracle_calls, r.meta_probes
    )
    .unwrap();
    line
}

fn load_machine(path: &PathBuf) -> Result<MachineDesc, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(MachineDesc::parse_text(&text)?)
}

fn load_name(path: &PathBuf) -> Result<FuncName, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(name_from_text(&text)?)
}

fn store_name(f: &FuncName, path: &PathBuf) -> Result<String, Failure> {
    std::fs::write(path, name_to_text(f)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(format!(
        "level={} l={} written={}\n",
        f.level,
        f.exponent,
        path.display()
    ))
}

fn split_names(text: &str) -> Result<Vec<RegFn>, Failure> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_regfn(s).map_err(Failure))
        .collect()
}

fn sop(verb: SopVerb) -> Out {
    match verb {
        SopVerb::Parse { expr } => {
            let q = parse_sop(&expr)?;
            Ok(format!("ast={q}\nsize={} depth={}\n", q.size(), q.depth()))
        }
        SopVerb::Eval { expr, p, k } => {
            let q = parse_sop(&expr)?;
            let pf = parse_monfn(&p)?;
            Ok(format!("value={}\n", eval_sop(&q, &pf, &BigUint::from(k))))
        }
        SopVerb::Deg { expr } => {
            let info = degree_of(&parse_sop(&expr)?);
            Ok(format!("degree={} type={}\n", info.degree, info.type_tag))
        }
        SopVerb::Decomp { expr } => {
            let q = parse_sop(&expr)?;
            let d = decompose(&q)?;
            let mut out = String::new();
            writeln!(out, "t={}", render_skeleton(&d.t)).unwrap();
            writeln!(out, "parts={}", d.parts.len()).unwrap();
            for (i, part) in d.parts.iter().enumerate() {
                writeln!(out, "part{}={}", i + 1, part).unwrap();
            }
            let max_deg = d.parts.iter().map(|p| degree_of(p).degree).max().unwrap_or(0);
            writeln!(out, "max_part_degree={} source_degree={}", max_deg, degree_of(&q).degree)
                .unwrap();
            Ok(out)
        }
        SopVerb::Dominates { expr, m } => {
            let q = parse_sop(&expr)?;
            Ok(format!("dominates={}\n", dominates_monomial(&q, m)?))
        }
        SopVerb::Witness { expr, extra, seed } => {
            let q = parse_sop(&expr)?;
            let w = synth_witness(&q)?;
            let d = degree_of(&q).degree.max(1);
            let mut samples = grid_samples();
            let mut rng = seed.max(1);
            for _ in 0..extra {
                samples.push((random_monfn(&mut rng), BigUint::from(next_rand(&mut rng) % 7)));
            }
            let verified = check_o2_witness(&q, &monomial(d), &w, &samples);
            Ok(format!("q={}\nk={}\nverified={verified}\n", w.q, w.k))
        }
        SopVerb::Separate { m, q, k } => {
            let qf = parse_monfn(&q)?;
            let cex = separate_monomials(m, &qf, k);
            let verified = cex.certifies(&monomial(m + 1), &monomial(m), &qf, k);
            Ok(format!(
                "p={}\nn={}\nverified={verified}\n",
                MonFn::table(cex.p.clone()),
                cex.n
            ))
        }
        SopVerb::Brute { p_expr, q_expr, q, k, bound, index_bound } => {
            let pp = parse_sop(&p_expr)?;
            let qq = parse_sop(&q_expr)?;
            let qf = parse_monfn(&q)?;
            match brute_force_counterexample(&pp, &qq, &qf, k, bound, index_bound) {
                Some(cex) => Ok(format!(
                    "found=true\np={}\nn={}\n",
                    MonFn::table(cex.p.clone()),
                    cex.n
                )),
                None => Ok("found=false\n".into()),
            }
        }
    }
}

fn render_skeleton(t: &crate::sopoly::FirstOrderPoly) -> String {
    let mut parts = Vec::new();
    for (exps, coeff) in t.terms() {
        let mut term = String::new();
        if coeff != &BigUint::from(1u32) || exps.iter().all(|&e| e == 0) {
            write!(term, "{coeff}").unwrap();
        }
        for (v, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !term.is_empty() {
                term.push('*');
            }
            let name = if v == 0 { "n".to_string() } else { format!("x{v}") };
            if e == 1 {
                term.push_str(&name);
            } else {
                write!(term, "{name}^{e}").unwrap();
            }
        }
        parts.push(term);
    }
    parts.join(" + ")
}

fn next_rand(state: &mut u64) -> u64 {
    // xorshift64*
    let mut x = *state;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    *state = x;
    x.wrapping_mul(0x2545F4914F6CDD1D) >> 8
}

fn random_monfn(state: &mut u64) -> MonFn {
    if next_rand(state).is_multiple_of(2) {
        let deg = 1 + (next_rand(state) % 3) as usize;
        let coeffs: Vec<u64> = (0..=deg)
            .map(|i| if i == deg { 1 + next_rand(state) % 3 } else { next_rand(state) % 4 })
            .collect();
        MonFn::poly(crate::sopoly::UniPoly::from_coeffs(coeffs))
    } else {
        let len = 1 + (next_rand(state) % 4) as usize;
        let mut vals = Vec::with_capacity(len);
        let mut v = next_rand(state) % 4;
        for _ in 0..len {
            vals.push(BigUint::from(v));
            v += 1 + next_rand(state) % 5;
        }
        MonFn::table(TableMon::from_prefix(&vals).expect("increasing by construction"))
    }
}

fn otm(verb: OtmVerb) -> Out {
    match verb {
        OtmVerb::Run { machine, oracle, input, fuel } => {
            let m = load_machine(&machine)?;
            let phi = parse_oracle(&oracle)?;
            let u = Word::parse(&input)?;
            let r = run_machine(&m, &phi, &u, fuel.unwrap_or(DEFAULT_FUEL))?;
            Ok(run_line(&r))
        }
        OtmVerb::Clock { machine, p, oracle, input } => {
            let m = load_machine(&machine)?;
            let pp = parse_sop(&p)?;
            let phi = parse_oracle(&oracle)?;
            let u = Word::parse(&input)?;
            let r = run_clocked(&m, &pp, &phi, &u)?;
            Ok(run_line(&r))
        }
        OtmVerb::Universal { m, index, oracle, l, input } => {
            let ix = if let Some(path) = index.strip_prefix('@') {
                load_machine(&PathBuf::from(path))?.encode()
            } else {
                Word::parse(&index)?
            };
            let phi = parse_oracle(&oracle)?;
            let u = Word::parse(&input)?;
            let r = universal_run(m, &ix, &phi, l, &u)?;
            Ok(run_line(&r))
        }
        OtmVerb::Phi { m, emit, oracle, input } => {
            let machine = phi_machine(m);
            if emit {
                return Ok(machine.to_string());
            }
            let phi = parse_oracle(&oracle)?;
            let u = Word::parse(&input.unwrap_or_default())?;
            let r = run_machine(&machine, &phi, &u, DEFAULT_FUEL)?;
            Ok(run_line(&r))
        }
        OtmVerb::Measure { m, oracle, input } => {
            let phi = parse_regfn(&oracle).map_err(Failure)?;
            let u = Word::parse(&input)?;
            let (steps, lower) = measure_phi_steps(m, &phi, &u)?;
            Ok(format!(
                "steps={steps} lower_bound={lower} ok={}\n",
                BigUint::from(steps) >= lower
            ))
        }
    }
}

fn fs(verb: FsVerb) -> Out {
    match verb {
        FsVerb::Compile { machine, p, out } => {
            let m = load_machine(&machine)?;
            let pp = parse_sop(&p)?;
            let name = compile_to_name(&m, &pp)?;
            store_name(&name, &out.out)
        }
        FsVerb::Eval { name, x, input } => {
            let f = load_name(&name)?;
            let xf = parse_regfn(&x).map_err(Failure)?;
            let u = Word::parse(&input)?;
            let v = fs_eval(&f, &xf).apply(&u)?;
            Ok(format!("output=\"{v}\"\n"))
        }
        FsVerb::Curry { name, out } => {
            let f = load_name(&name)?;
            store_name(&fs_curry(&f)?, &out.out)
        }
        FsVerb::Uncurry { name, inner_level, out } => {
            let f = load_name(&name)?;
            store_name(&fs_uncurry(&f, inner_level)?, &out.out)
        }
        FsVerb::Compose { g, f, out } => {
            let gf = load_name(&g)?;
            let ff = load_name(&f)?;
            store_name(&fs_compose(&gf, &ff)?, &out.out)
        }
        FsVerb::Prod { f, g, out } => {
            let ff = load_name(&f)?;
            let gf = load_name(&g)?;
            store_name(&fs_product(&ff, &gf)?, &out.out)
        }
        FsVerb::Const { y, m, out } => {
            let yf = parse_regfn(&y).map_err(Failure)?;
            store_name(&fs_const(&yf, m), &out.out)
        }
        FsVerb::Forget { name } => {
            let f = load_name(&name)?;
            let un = fs_forget(&f)?;
            Ok(format!("l={}\nadvice={}\n{}", un.exponent, un.advice, un.machine))
        }
    }
}

fn rep(verb: RepVerb) -> Out {
    match verb {
        RepVerb::Decode { kind, phi, bound, len, probe_bound } => {
            let f = parse_regfn(&phi).map_err(Failure)?;
            match kind.as_str() {
                "nat" => Ok(format!("value={}\n", decode_nat(&f)?)),
                "sierp" => Ok(format!(
                    "value={}\n",
                    match decode_sierp_bounded(&f, bound)? {
                        SierpOutcome::Top => "top",
                        SierpOutcome::Unresolved => "unresolved",
                    }
                )),
                "pi" => Ok(format!(
                    "prefix=\"{}\"\n",
                    pi_decode_prefix(&f, len, probe_bound)?
                )),
                other => Err(Failure(format!("unknown representation '{other}'"))),
            }
        }
        RepVerb::Pad { machine, out } => {
            let m = load_machine(&machine)?;
            let wrapped = delay_wrap(&m);
            let text = wrapped.to_string();
            if let Some(path) = out {
                std::fs::write(&path, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                Ok(format!("written={}\n", path.display()))
            } else {
                Ok(text)
            }
        }
        RepVerb::Check { machine, map, from, to, names } => {
            let m = load_machine(&machine)?;
            let point_map: Box<dyn Fn(&Point) -> Point> = match map.as_str() {
                "id" => Box::new(|p: &Point| p.clone()),
                "succ" => Box::new(|p: &Point| match p {
                    Point::Nat(n) => Point::Nat(n + 1u32),
                    other => other.clone(),
                }),
                other => return Err(Failure(format!("unknown map '{other}'"))),
            };
            let rep_of = |kind: &str| -> Result<Representation, Failure> {
                match kind {
                    "nat" => Ok(Representation::Nat),
                    other => Err(Failure(format!("unknown space '{other}'"))),
                }
            };
            let dom = rep_of(&from)?;
            let cod = rep_of(&to)?;
            let name_fns = split_names(&names)?;
            let report = realizer_check(&m, &point_map, &dom, &cod, &name_fns)?;
            let mut outtext = String::new();
            for (i, row) in report.checked.iter().enumerate() {
                let got = match &row.got {
                    Ok(p) => p.to_string(),
                    Err(e) => format!("error({e})"),
                };
                writeln!(
                    outtext,
                    "row={} input={} expected={} got={} ok={}",
                    i,
                    row.input,
                    row.expected,
                    got,
                    row.ok()
                )
                .unwrap();
            }
            writeln!(outtext, "all_ok={}", report.all_ok).unwrap();
            Ok(outtext)
        }
    }
}

fn epb(verb: EpbVerb) -> Out {
    match verb {
        EpbVerb::Check { names, cert, bound } => {
            let cert = EpbCertificate::parse(&cert)?;
            let name_fns = split_names(&names)?;
            if name_fns.is_empty() {
                return Err(Failure("at least one name is required".into()));
            }
            Ok(format!("ok={}\n", epb_check(&name_fns, &cert, bound)?))
        }
        EpbVerb::Collapse { name, cert, out } => {
            let cert = EpbCertificate::parse(&cert)?;
            let f = load_name(&name)?;
            store_name(&epb_collapse(&f, &cert)?, &out.out)
        }
    }
}
