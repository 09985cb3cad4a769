//! The λπ calculus of explicit substitutions with named variables.

pub mod cli;
pub mod debruijn_oracle;
pub mod freevars;
pub mod nameless;
pub mod rewrite;
pub mod suites;
pub mod syntax;
pub mod termination;
pub mod typing_ccc;
pub mod wellformed;
