//! Learning systematic edits from examples: parse method bodies, diff
//! them, generalize pairs of changes into annotated patterns, find code
//! locations that match a pattern and produce recommended edits for them.

pub mod ast;
pub mod creation;
pub mod diff;
pub mod error;
pub mod lexer;
pub mod metrics;
pub mod ordering;
pub mod parser;
pub mod pattern;
pub mod printer;
pub mod recommend;
pub mod search;

pub use ast::{preorder_nodes, AstNode, Kind, MethodBody, NodeId, Span};
pub use error::{CreationError, OrderingError, PatternError, RecommendError, ScriptError, SyntaxError};
pub use lexer::{tokenize, TokenStream};
pub use parser::parse;
pub use printer::pretty_print;
