//! Design kit for resistive threshold logic.
//!
//! A resistive threshold logic (RTL) gate sums its binary inputs through a
//! memristive resistive divider and binarizes the divider node with a
//! threshold device (an inverter chain or an opamp comparator). This crate
//! models the analog divider, solves the feasible threshold windows, builds
//! and evaluates gate cells, compiles boolean functions into wide-fan-in RTL
//! netlists and fan-in-capped CMOS baselines, simulates netlists event-driven
//! and produces tolerance, power, area and delay comparisons.

// `!(x > 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analog;
pub mod analysis;
pub mod cell;
mod error;
mod gate;
pub mod netlist;
pub mod profile;
pub mod repro;
pub mod sim;
pub mod synth;
pub mod threshold;

pub use error::{Error, ParseError, Result};
pub use gate::GateKind;
