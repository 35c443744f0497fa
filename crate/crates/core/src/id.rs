//! Opaque identifier tokens for vertices, edges and tail unitaries.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use thiserror::Error;

/// Rejected identifier token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: must be nonempty with no whitespace, parentheses or '#'")]
pub struct InvalidId(pub String);

/// Returns true if `token` can be used as a vertex, edge or tail id.
///
/// Parentheses are reserved by the term grammar (`s(e)`), `#` by the graph
/// document comments.
pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && !token
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '#'))
}

macro_rules! token_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(token: &str) -> Result<Self, InvalidId> {
                if is_valid_token(token) {
                    Ok(Self(Arc::from(token)))
                } else {
                    Err(InvalidId(String::from(token)))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl core::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl core::str::FromStr for $name {
            type Err = InvalidId;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }
    };
}

token_id!(
    /// A vertex of a graph.
    VertexId
);
token_id!(
    /// An edge of a graph.
    EdgeId
);
token_id!(
    /// Namespace of a Bratteli tail; names the formal unitary `t` living in
    /// the corner of that tail's sink.
    TailId
);
