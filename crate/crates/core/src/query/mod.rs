//! Basic graph pattern queries: a SPARQL `SELECT` subset with comparison filters and
//! `COUNT(*)`, evaluated over one graph or the union of several.

mod eval;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::rdf::{ParseError, Term};

pub use eval::{compare_terms, execute, merge_and_query};
pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
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
    #[error("projected variable ?{0} does not appear in any pattern")]
    UnboundProjection(String),
    #[error("operator {op} needs a numeric or date operand, found {operand}")]
    TypeMismatch { op: CompareOp, operand: Term },
}

impl From<ParseError> for QueryError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Syntax { line, column, message } => QueryError::Syntax { line, column, message },
            ParseError::UnknownPrefix { prefix, line, column } => {
                QueryError::UnknownPrefix { prefix, line, column }
            }
            ParseError::RelativeIri { iri, line, column } => QueryError::Syntax {
                line,
                column,
                message: format!("relative IRI <{iri}>"),
            },
        }
    }
}

/// A constant or a variable. Blank nodes in query text become variables named `_:label`,
/// which no `?name` can refer to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Variable(String),
    Term(Term),
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Variable(v) if v.starts_with("_:") => f.write_str(v),
            PatternTerm::Variable(v) => write!(f, "?{v}"),
            PatternTerm::Term(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(|t| match t {
                PatternTerm::Variable(v) => Some(v.as_str()),
                PatternTerm::Term(_) => None,
            })
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CompareOp::Eq | CompareOp::Ne)
    }
}

impl fmt::Display for CompareOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilterExpr {
    pub variable: String,
    pub op: CompareOp,
    pub operand: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    Variables(Vec<String>),
    /// `(COUNT(*) AS ?name)`
    Count(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    /// Accepted for compatibility; solutions are always sets.
    pub distinct: bool,
    pub projection: Projection,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
}

impl Query {
    /// Variables a solution row binds, excluding the count alias.
    pub fn projected_variables(&self) -> &[String] {
        match &self.projection {
            Projection::Variables(v) => v,
            Projection::Count(_) => &[],
        }
    }
}

/// Query answers, rows in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, variable: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == variable)
    }

    /// The value of a `COUNT(*)` solution.
    pub fn count(&self) -> Option<u64> {
        match &self.rows[..] {
            [row] if row.len() == 1 => row[0].as_literal()?.lexical().parse().ok(),
            _ => None,
        }
    }

    /// Header row of `?name`s, then one row of N-Triples terms per solution.
    pub fn to_tsv(&self) -> String {
        let mut out = self
            .variables
            .iter()
            .map(|v| format!("?{v}"))
            .collect::<Vec<_>>()
            .join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Term::to_string).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}
