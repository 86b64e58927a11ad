//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

pub mod bracket_checks;
pub mod formula_eval;
pub mod brackets;
pub mod forcing;
pub mod trilateral_checks;
pub mod turing;
