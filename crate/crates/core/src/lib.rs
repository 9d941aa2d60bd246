//! Java-subset methods to flow graphs: structure, control flow and data flow,
//! derived by a small rule-based transformation engine, plus a validator for
//! textual edge assertions.

pub mod bench;
pub mod cli;
pub mod control_flow;
pub mod corpus;
pub mod data_flow;
pub mod engine;
pub mod frontend;
pub mod model;
pub mod pipeline;
pub mod structure;
pub mod validator;
