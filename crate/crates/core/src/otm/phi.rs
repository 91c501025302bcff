//! The built-in iterated-application machines: `n` successive oracle
//! calls starting from the input word. Their output lengths realize the
//! canonical monomials exactly, which also makes them the
//! time-constructibility witnesses for the clock budgets.

use super::interp::{run_machine, MachineError, DEFAULT_FUEL};
use super::program::{Action, MachineDesc, Move, Pat, TableProgram, Transition, BLANK};
use crate::regfn::{RegFn, Word};
use crate::sopoly::monomial;
use num_bigint::BigUint;

/// The machine computing `w -> phi(phi(...phi(w)))` with `n`
/// applications (`n = 0` copies the input).
pub fn phi_machine(n: u32) -> MachineDesc {
    let mut transitions = Vec::new();
    if n == 0 {
        for c in 0u8..=2 {
            transitions.push(Transition {
                state: 0,
                reads: vec![Pat::Sym(c), Pat::Any],
                action: Action::Step {
                    next: 0,
                    writes: vec![],
                    moves: vec![Move::Right, Move::Stay],
                    out_push: Some(c),
                    q_push: None,
                },
            });
        }
        transitions.push(Transition {
            state: 0,
            reads: vec![Pat::Sym(BLANK), Pat::Any],
            action: Action::Halt,
        });
        return MachineDesc::Table(TableProgram::new(0, 1, 0, transitions).expect("valid table"));
    }
    // state 0: input -> query; states 1..n-1: answer -> query;
    // state n: answer -> output
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
        action: Action::Query { path: vec![], next: 1 },
    });
    for stage in 1..n {
        for c in 0u8..=2 {
            transitions.push(Transition {
                state: stage as u16,
                reads: vec![Pat::Any, Pat::Sym(c)],
                action: Action::Step {
                    next: stage as u16,
                    writes: vec![],
                    moves: vec![Move::Stay, Move::Right],
                    out_push: None,
                    q_push: Some(c),
                },
            });
        }
        transitions.push(Transition {
            state: stage as u16,
            reads: vec![Pat::Any, Pat::Sym(BLANK)],
            action: Action::Query { path: vec![], next: stage as u16 + 1 },
        });
    }
    for c in 0u8..=2 {
        transitions.push(Transition {
            state: n as u16,
            reads: vec![Pat::Any, Pat::Sym(c)],
            action: Action::Step {
                next: n as u16,
                writes: vec![],
                moves: vec![Move::Stay, Move::Right],
                out_push: Some(c),
                q_push: None,
            },
        });
    }
    transitions.push(Transition {
        state: n as u16,
        reads: vec![Pat::Any, Pat::Sym(BLANK)],
        action: Action::Halt,
    });
    MachineDesc::Table(
        TableProgram::new(0, n as u16 + 1, 0, transitions).expect("valid table"),
    )
}

/// Run the `n`-fold application machine and return its measured step
/// count together with the exact output-length lower bound
/// `P_n(|phi|)(|w|)`.
pub fn measure_phi_steps(
    n: u32,
    phi: &RegFn,
    w: &Word,
) -> Result<(u64, BigUint), MachineError> {
    let r = run_machine(&phi_machine(n), phi, w, DEFAULT_FUEL)?;
    if r.aborted {
        return Err(MachineError::FuelExhausted);
    }
    let mut probes = 0u64;
    let lower = super::interp::eval_budget(&monomial(n), phi, &BigUint::from(w.len()), &mut probes)?;
    Ok((r.steps, lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sopoly::parse_monfn;
    use num_traits::ToPrimitive;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn phi_zero_is_identity() {
        let r = run_machine(&phi_machine(0), &RegFn::lift(Word::empty()), &w("01"), 100).unwrap();
        assert_eq!(r.output, Some(w("01")));
    }

    #[test]
    fn phi_two_unfolds() {
        // phi maps any word of length len to "1" followed by len zeros,
        // so phi(phi("1")) = "100"
        let mut entries = std::collections::BTreeMap::new();
        for len in 0..8usize {
            entries.insert(len, w(&format!("1{}", "0".repeat(len))));
        }
        let phi = RegFn::table(crate::regfn::WordTable::new(entries, true));
        let r = run_machine(&phi_machine(2), &phi, &w("1"), 1000).unwrap();
        assert_eq!(r.output, Some(w("100")));
    }

    #[test]
    fn output_length_law() {
        let phi = RegFn::pad(parse_monfn("poly: 2*x + 1").unwrap());
        for n in 0..=3u32 {
            for input in ["", "0", "01", "120"] {
                let word = w(input);
                let r = run_machine(&phi_machine(n), &phi, &word, DEFAULT_FUEL).unwrap();
                let expected = crate::sopoly::eval_sop(
                    &monomial(n),
                    &parse_monfn("poly: 2*x + 1").unwrap(),
                    &BigUint::from(word.len()),
                );
                assert_eq!(
                    r.output.unwrap().len(),
                    expected.to_usize().unwrap(),
                    "n={n} input={input}"
                );
            }
        }
    }

    #[test]
    fn measured_steps_dominate_lower_bound() {
        let phi = RegFn::pad(parse_monfn("poly: 2*x + 1").unwrap());
        let (steps, lower) = measure_phi_steps(1, &phi, &w("0")).unwrap();
        assert_eq!(lower, BigUint::from(3u32));
        assert!(BigUint::from(steps) >= lower);
        let (_, lower0) = measure_phi_steps(0, &phi, &w("0101")).unwrap();
        assert_eq!(lower0, BigUint::from(4u32));
        let phi1 = RegFn::pad(parse_monfn("poly: x + 1").unwrap());
        let (steps2, lower2) = measure_phi_steps(2, &phi1, &w("01")).unwrap();
        assert_eq!(lower2, BigUint::from(4u32));
        assert!(BigUint::from(steps2) >= lower2);
    }
}
