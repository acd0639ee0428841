//! Canonical N-Triples output and an N-Triples reader.

use super::graph::Graph;
use super::iri::{Iri, IriError};
use super::lex::Cursor;
use super::term::{BlankNode, Literal, Subject, Term, Triple};
use super::ParseError;

/// One triple per line, lines sorted bytewise, each terminated by `\n`.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for line in graph.canonical_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses an N-Triples document. Blank node labels are kept as written.
pub fn parse_ntriples(text: &str) -> Result<Graph, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut graph = Graph::new();
    for (index, line) in text.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut cursor = Cursor::at_line(line, index + 1);
        cursor.skip_ws();
        if cursor.at_end() {
            continue;
        }
        graph.insert(parse_triple(&mut cursor)?);
    }
    Ok(graph)
}

fn parse_triple(c: &mut Cursor) -> Result<Triple, ParseError> {
    let subject = match c.peek() {
        Some('<') => Subject::Iri(read_iri(c)?),
        Some('_') => Subject::Blank(read_blank(c)?),
        _ => return Err(c.unexpected("expected subject")),
    };
    c.skip_ws();
    if c.peek() != Some('<') {
        return Err(c.unexpected("expected predicate IRI"));
    }
    let predicate = read_iri(c)?;
    c.skip_ws();
    let object = match c.peek() {
        Some('<') => Term::Iri(read_iri(c)?),
        Some('_') => Term::Blank(read_blank(c)?),
        Some('"') => Term::Literal(read_literal(c)?),
        _ => return Err(c.unexpected("expected object")),
    };
    c.skip_ws();
    if !c.eat('.') {
        return Err(c.unexpected("expected '.' at end of triple"));
    }
    c.skip_ws();
    if !c.at_end() {
        return Err(c.unexpected("expected end of line"));
    }
    Ok(Triple {
        subject,
        predicate,
        object,
    })
}

fn read_iri(c: &mut Cursor) -> Result<Iri, ParseError> {
    let (line, column) = (c.line(), c.column());
    c.expect('<')?;
    let text = c.read_iriref()?;
    Iri::new(&text).map_err(|e| ParseError::from_iri(e, line, column))
}

fn read_blank(c: &mut Cursor) -> Result<BlankNode, ParseError> {
    if !c.starts_with("_:") {
        return Err(c.unexpected("expected blank node"));
    }
    c.advance(2);
    let label = c.read_blank_label()?;
    BlankNode::new(label).map_err(|e| c.error(e.to_string()))
}

fn read_literal(c: &mut Cursor) -> Result<Literal, ParseError> {
    let lexical = c.read_string(false)?;
    if c.eat('@') {
        let tag = c.read_language();
        Literal::lang(lexical, tag).map_err(|e| c.error(e.to_string()))
    } else if c.starts_with("^^") {
        c.advance(2);
        let datatype = read_iri(c)?;
        Literal::typed(lexical, datatype).map_err(|e| c.error(e.to_string()))
    } else {
        Ok(Literal::string(lexical))
    }
}

impl ParseError {
    pub(crate) fn from_iri(e: IriError, line: usize, column: usize) -> Self {
        match e {
            IriError::RelativeIri(iri) => ParseError::RelativeIri { iri, line, column },
            e @ IriError::IllegalCharacter { .. } => ParseError::Syntax {
                line,
                column,
                message: e.to_string(),
            },
        }
    }
}
