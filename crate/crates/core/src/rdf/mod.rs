//! RDF terms, an indexed in-memory graph, prefix handling and Turtle / N-Triples syntax.

mod graph;
mod iri;
pub(crate) mod lex;
mod ntriples;
mod prefix;
mod term;
mod turtle;
pub mod vocab;

use thiserror::Error;

pub use graph::Graph;
pub(crate) use graph::TermId;
pub use iri::{Iri, IriError};
pub use ntriples::{parse_ntriples, serialize_ntriples};
pub use prefix::{CurieError, PrefixMap};
pub use term::{BlankNode, Literal, Subject, Term, TermError, Triple};
pub(crate) use term::is_valid_language_tag;
pub use turtle::{parse_turtle, TurtleDocument};

/// Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix {prefix:?} at line {line}, column {column}")]
    UnknownPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error("relative IRI <{iri}> without a base at line {line}, column {column}")]
    RelativeIri {
        iri: String,
        line: usize,
        column: usize,
    },
}

/// Validates `text` as an absolute IRI.
pub fn make_iri(text: &str) -> Result<Iri, IriError> {
    Iri::new(text)
}

/// Expands `prefix:local` against `prefixes`.
pub fn expand_curie(prefixes: &PrefixMap, curie: &str) -> Result<Iri, CurieError> {
    prefixes.expand_curie(curie)
}
