//! The regularity language: AST, interpreter, parser and canonical printer.
//!
//! A program is two nested loops over `i` and `j`, an optional stack of
//! `If (expr >= 0)` guards and a single `Draw` statement:
//!
//! ```text
//! For (i in range(0, 4)) {
//!     For (j in range(0, 4)) {
//!         If (-1*i + -1*j + 3 >= 0) {
//!             Draw(x=12*i + 6*j + 5, y=0*i + 10*j + 5, attribute=1 If ((1*i + 0*j + 0) % 2 == 0) else 0)
//!         }
//!     }
//! }
//! ```

mod ast;
mod exec;
mod parse;
mod print;

pub use ast::{AttributeExpr, DrawCommand, LinearExpr, LoopRange, RegularityProgram};
pub use exec::{execute, Bounds};
pub use parse::parse;
pub use print::print;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("grammar violation at {line}:{column}: {message}")]
    Grammar {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

impl RegularityProgram {
    /// JSON mirror of the AST.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("program serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
