//! Text formats for behavior trees and stimulus scenarios.
//!
//! Scenarios are line oriented:
//!
//! ```text
//! scenario solo ticks 40
//! # a single visitor says yes
//! @0 person_appear id=1 x=1.0 y=0.5
//! @5 button yes
//! @30 person_leave id=1
//! ```
//!
//! Trees are brace structured and whitespace insensitive:
//!
//! ```text
//! fallback root {
//!   sequence wait {
//!     condition no_person
//!     action idle
//!   }
//!   guard(no_hazard) safe {
//!     action take_photo dur=1
//!   }
//! }
//! ```
//!
//! A `*` after `sequence` or `fallback` selects the memory variant. `#`
//! starts a comment that runs to the end of the line in both formats.

mod scenario;
mod tree;

use std::fmt;

pub use scenario::{parse_scenario, ScenarioError, ScenarioScript};
pub use tree::{parse_tree, parse_tree_checked, print_tree, TreeError};

/// A syntax error. Line and column are 1-based and point at the first
/// offending character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: String,
}

impl ParseError {
    pub(crate) fn new(
        line: usize,
        column: usize,
        message: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        Self {
            line,
            column,
            message: message.into(),
            expected: expected.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {} (expected {})",
            self.line, self.column, self.message, self.expected
        )
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
