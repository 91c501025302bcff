//! Workbench for second-order polynomial time.
//!
//! The crate is organised around three layers:
//!
//! * [`sopoly`] — a symbolic algebra of second-order polynomials: parsing,
//!   exact evaluation over strictly monotone functions, the degree/type
//!   calculus, decomposition, dominance witnesses and adversarial
//!   counterexamples.
//! * [`regfn`] / [`otm`] — regular string functions (the name space of
//!   type-two computation) and a step-counted oracle Turing machine
//!   interpreter with second-order polynomial clocks and a clocked
//!   universal machine.
//! * [`funcspace`] / [`repspace`] / [`epb`] — function-space names built on
//!   the clocked universal machine, representations and realizer checks,
//!   and the effectively-polynomially-bounded collapse construction.
//!
//! All arithmetic is exact (`num_bigint`); there is no floating point
//! anywhere. Every value is immutable after construction and every
//! operation is a pure function, so concurrent use is safe.

pub mod cli;
pub mod epb;
pub mod funcspace;
pub mod otm;
pub mod regfn;
pub mod repspace;
pub mod sopoly;
