//! Exact verification of phased coproducts, quotients by global phases and
//! the `GP(−)` reconstruction on matrix categories and finite categories.

pub mod matcat;
pub mod scalars;
pub mod phased;
pub mod quotient;
pub mod fincat;
pub mod gp;
pub mod transport;
pub mod config;
pub mod harness;
