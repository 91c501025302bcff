//! Oracle Turing machines: descriptions, the canonical index encoding,
//! the step-counted interpreter, second-order polynomial clocks, the
//! clocked universal machine and the built-in iterated-application
//! machines.

mod codec;
mod interp;
mod phi;
mod program;

pub use codec::CodecError;
pub use interp::{
    eval_budget, machine_regfn, run_clocked, run_envelope, run_machine, run_machine_emitting,
    universal_run, MachineError, RunResult, DEFAULT_FUEL,
};
pub use phi::{measure_phi_steps, phi_machine};
pub use program::{
    Action, MachineDesc, Move, Pat, ProgramError, Proj, TableProgram, Transition, ViewExpr,
    WriteOp, BLANK, MAX_WORK_TAPES,
};
