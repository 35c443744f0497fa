//! File formats: graph documents, DOT, augmented specs and map tables.

use std::fmt;

pub mod dot;
pub mod graph_doc;
pub mod map_table;
pub mod spec_doc;

/// A document error, positioned when the position is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl DocError {
    pub fn at(line: usize, column: usize, message: impl fmt::Display) -> Self {
        DocError {
            line: Some(line),
            column: Some(column),
            message: message.to_string(),
        }
    }

    pub fn on_line(line: usize, message: impl fmt::Display) -> Self {
        DocError {
            line: Some(line),
            column: None,
            message: message.to_string(),
        }
    }

    pub fn unplaced(message: impl fmt::Display) -> Self {
        DocError {
            line: None,
            column: None,
            message: message.to_string(),
        }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        let mut message = e.to_string();
        // serde_json appends " at line L column C"; the position is kept separately
        if let Some(cut) = message.rfind(" at line ") {
            message.truncate(cut);
        }
        DocError::at(e.line(), e.column(), message)
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.message),
            (Some(l), None) => write!(f, "{l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for DocError {}
