//! Turtle reader for the subset used by mapping documents.
//!
//! Collections `( ... )` are rejected. Every blank node, labelled or anonymous, is given a
//! fresh `b<n>` label scoped to the document being parsed.

use std::collections::HashMap;

use super::graph::Graph;
use super::iri::{has_scheme, resolve, Iri};
use super::lex::Cursor;
use super::prefix::PrefixMap;
use super::term::{BlankNode, Literal, Subject, Term, Triple};
use super::vocab::{rdf, xsd};
use super::ParseError;

#[derive(Debug, Clone)]
pub struct TurtleDocument {
    pub graph: Graph,
    pub prefixes: PrefixMap,
}

pub fn parse_turtle(text: &str, base: Option<&Iri>) -> Result<TurtleDocument, ParseError> {
    let mut parser = TurtleParser {
        cursor: Cursor::new(text),
        base: base.map(|b| b.as_str().to_owned()),
        prefixes: PrefixMap::new(),
        blank_labels: HashMap::new(),
        blank_counter: 0,
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(TurtleDocument {
        graph: parser.graph,
        prefixes: parser.prefixes,
    })
}

struct TurtleParser {
    cursor: Cursor,
    base: Option<String>,
    prefixes: PrefixMap,
    blank_labels: HashMap<String, BlankNode>,
    blank_counter: usize,
    graph: Graph,
}

impl TurtleParser {
    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.cursor.skip_ws();
            if self.cursor.at_end() {
                return Ok(());
            }
            if self.cursor.starts_with("@prefix") {
                self.cursor.advance(7);
                self.prefix_directive()?;
                self.end_statement()?;
            } else if self.cursor.starts_with("@base") {
                self.cursor.advance(5);
                self.base_directive()?;
                self.end_statement()?;
            } else if self.cursor.starts_with_keyword("PREFIX") {
                self.cursor.advance(6);
                self.prefix_directive()?;
            } else if self.cursor.starts_with_keyword("BASE") {
                self.cursor.advance(4);
                self.base_directive()?;
            } else {
                self.triples()?;
                self.end_statement()?;
            }
        }
    }

    fn end_statement(&mut self) -> Result<(), ParseError> {
        self.cursor.skip_ws();
        self.cursor.expect('.')
    }

    fn prefix_directive(&mut self) -> Result<(), ParseError> {
        self.cursor.skip_ws();
        let (prefix, local) = self.cursor.read_prefixed_name()?;
        if !local.is_empty() {
            return Err(self.cursor.error("expected prefix declaration 'name:'"));
        }
        self.cursor.skip_ws();
        let ns = self.iri_ref()?;
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn base_directive(&mut self) -> Result<(), ParseError> {
        self.cursor.skip_ws();
        let base = self.iri_ref()?;
        self.base = Some(base.as_str().to_owned());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        if self.cursor.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.cursor.skip_ws();
            if self.cursor.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.cursor.skip_ws();
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Subject, ParseError> {
        match self.cursor.peek() {
            Some('<') => Ok(Subject::Iri(self.iri_ref()?)),
            Some('_') if self.cursor.peek_at(1) == Some(':') => {
                Ok(Subject::Blank(self.labelled_blank()?))
            }
            Some('(') => Err(self.cursor.error("collections are not supported")),
            Some('"' | '\'') => Err(self.cursor.error("literal in subject position")),
            Some(c) if c.is_alphabetic() || c == ':' => Ok(Subject::Iri(self.prefixed_name()?)),
            _ => Err(self.cursor.unexpected("expected subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Subject) -> Result<(), ParseError> {
        loop {
            let predicate = self.verb()?;
            self.cursor.skip_ws();
            loop {
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.cursor.skip_ws();
                if !self.cursor.eat(',') {
                    break;
                }
                self.cursor.skip_ws();
            }
            if !self.cursor.eat(';') {
                return Ok(());
            }
            // repeated and trailing semicolons are allowed
            loop {
                self.cursor.skip_ws();
                if !self.cursor.eat(';') {
                    break;
                }
            }
            if matches!(self.cursor.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.cursor.peek() == Some('a')
            && self
                .cursor
                .peek_at(1)
                .is_none_or(|c| c.is_whitespace() || matches!(c, '<' | '[' | '"' | '_' | '#'))
        {
            self.cursor.bump();
            return Ok(rdf::type_());
        }
        match self.cursor.peek() {
            Some('<') => self.iri_ref(),
            Some(c) if c.is_alphabetic() || c == ':' => self.prefixed_name(),
            _ => Err(self.cursor.unexpected("expected predicate")),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.cursor.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.cursor.peek_at(1) == Some(':') => {
                Ok(Term::Blank(self.labelled_blank()?))
            }
            Some('[') => Ok(self.blank_property_list()?.into()),
            Some('(') => Err(self.cursor.error("collections are not supported")),
            Some('"' | '\'') => Ok(Term::Literal(self.rdf_literal()?)),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                Ok(Term::Literal(self.cursor.read_number()?))
            }
            Some(_) if self.cursor.starts_with_keyword("true") => {
                self.cursor.advance(4);
                Ok(Term::Literal(Literal::typed("true", xsd::boolean()).unwrap()))
            }
            Some(_) if self.cursor.starts_with_keyword("false") => {
                self.cursor.advance(5);
                Ok(Term::Literal(Literal::typed("false", xsd::boolean()).unwrap()))
            }
            Some(c) if c.is_alphabetic() || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            _ => Err(self.cursor.unexpected("expected object")),
        }
    }

    fn blank_property_list(&mut self) -> Result<Subject, ParseError> {
        self.cursor.expect('[')?;
        let node = Subject::Blank(self.fresh_blank());
        self.cursor.skip_ws();
        if !self.cursor.eat(']') {
            self.predicate_object_list(&node)?;
            self.cursor.skip_ws();
            self.cursor.expect(']')?;
        }
        Ok(node)
    }

    fn fresh_blank(&mut self) -> BlankNode {
        let b = BlankNode::new(format!("b{}", self.blank_counter)).unwrap();
        self.blank_counter += 1;
        b
    }

    fn labelled_blank(&mut self) -> Result<BlankNode, ParseError> {
        self.cursor.advance(2);
        let label = self.cursor.read_blank_label()?;
        if let Some(b) = self.blank_labels.get(&label) {
            return Ok(b.clone());
        }
        let b = self.fresh_blank();
        self.blank_labels.insert(label, b.clone());
        Ok(b)
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
        let (line, column) = (self.cursor.line(), self.cursor.column());
        self.cursor.expect('<')?;
        let text = self.cursor.read_iriref()?;
        let absolute = if has_scheme(&text) {
            text
        } else {
            match &self.base {
                Some(base) => resolve(base, &text),
                None => return Err(ParseError::RelativeIri { iri: text, line, column }),
            }
        };
        Iri::new(&absolute).map_err(|e| ParseError::from_iri(e, line, column))
    }

    fn prefixed_name(&mut self) -> Result<Iri, ParseError> {
        let (line, column) = (self.cursor.line(), self.cursor.column());
        let (prefix, local) = self.cursor.read_prefixed_name()?;
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| ParseError::UnknownPrefix {
                prefix: prefix.clone(),
                line,
                column,
            })?;
        Iri::new(format!("{}{}", ns.as_str(), local))
            .map_err(|e| ParseError::from_iri(e, line, column))
    }

    fn rdf_literal(&mut self) -> Result<Literal, ParseError> {
        let lexical = self.cursor.read_string(true)?;
        if self.cursor.eat('@') {
            let tag = self.cursor.read_language();
            Literal::lang(lexical, tag).map_err(|e| self.cursor.error(e.to_string()))
        } else if self.cursor.starts_with("^^") {
            self.cursor.advance(2);
            let datatype = match self.cursor.peek() {
                Some('<') => self.iri_ref()?,
                _ => self.prefixed_name()?,
            };
            Literal::typed(lexical, datatype).map_err(|e| self.cursor.error(e.to_string()))
        } else {
            Ok(Literal::string(lexical))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::ntriples::parse_ntriples;

    fn ex(local: &str) -> Iri {
        Iri::new(format!("http://e.org/{local}")).unwrap()
    }

    #[test]
    fn single_triple() {
        let doc = parse_turtle("@prefix ex: <http://e.org/> . ex:s ex:p ex:o .", None).unwrap();
        assert_eq!(doc.graph.len(), 1);
        assert!(doc.graph.contains(&Triple::new(ex("s"), ex("p"), ex("o"))));
        assert_eq!(doc.prefixes.get("ex").unwrap().as_str(), "http://e.org/");
    }

    #[test]
    fn a_is_rdf_type() {
        let doc = parse_turtle("@prefix ex: <http://e.org/> .\nex:s a ex:C .", None).unwrap();
        assert!(doc.graph.contains(&Triple::new(ex("s"), rdf::type_(), ex("C"))));
    }

    #[test]
    fn typed_literal() {
        let doc = parse_turtle(
            "@prefix ex: <http://e.org/> . @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
             ex:s ex:p \"63\"^^xsd:integer .",
            None,
        )
        .unwrap();
        let lit = Literal::typed("63", xsd::integer()).unwrap();
        assert!(doc.graph.contains(&Triple::new(ex("s"), ex("p"), lit)));
    }

    #[test]
    fn lists_and_blank_nodes() {
        let text = r#"
            @prefix ex: <http://e.org/> .
            # comment
            ex:s ex:p ex:o1 , ex:o2 ;
                 ex:q [ ex:r "x"@en ; ex:t 1.5 ] ;
                 ex:u _:x , [] .
            _:x ex:v true, -3, 2e1 .
        "#;
        let doc = parse_turtle(text, None).unwrap();
        let expected = parse_ntriples(
            "<http://e.org/s> <http://e.org/p> <http://e.org/o1> .\n\
             <http://e.org/s> <http://e.org/p> <http://e.org/o2> .\n\
             <http://e.org/s> <http://e.org/q> _:b0 .\n\
             _:b0 <http://e.org/r> \"x\"@en .\n\
             _:b0 <http://e.org/t> \"1.5\"^^<http://www.w3.org/2001/XMLSchema#decimal> .\n\
             <http://e.org/s> <http://e.org/u> _:b1 .\n\
             <http://e.org/s> <http://e.org/u> _:b2 .\n\
             _:b1 <http://e.org/v> \"true\"^^<http://www.w3.org/2001/XMLSchema#boolean> .\n\
             _:b1 <http://e.org/v> \"-3\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n\
             _:b1 <http://e.org/v> \"2e1\"^^<http://www.w3.org/2001/XMLSchema#double> .\n",
        )
        .unwrap();
        assert_eq!(doc.graph, expected);
    }

    #[test]
    fn base_resolution() {
        let base = Iri::new("http://e.org/dir/doc").unwrap();
        let doc = parse_turtle("<s> <#p> <../o> .", Some(&base)).unwrap();
        assert!(doc.graph.contains(&Triple::new(
            Iri::new("http://e.org/dir/s").unwrap(),
            Iri::new("http://e.org/dir/doc#p").unwrap(),
            Iri::new("http://e.org/o").unwrap()
        )));
        let doc = parse_turtle("@base <http://x.org/> . <s> <p> <o> .", None).unwrap();
        assert!(doc.graph.contains(&Triple::new(
            Iri::new("http://x.org/s").unwrap(),
            Iri::new("http://x.org/p").unwrap(),
            Iri::new("http://x.org/o").unwrap()
        )));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_turtle("<s> <p> <o> .", None),
            Err(ParseError::RelativeIri { .. })
        ));
        assert!(matches!(
            parse_turtle("ex:s ex:p ex:o .", None),
            Err(ParseError::UnknownPrefix { ref prefix, line: 1, column: 1 }) if prefix == "ex"
        ));
        assert!(matches!(
            parse_turtle("@prefix ex: <http://e.org/> .\nex:s ex:p ( ex:a ) .", None),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_turtle("@prefix ex: <http://e.org/> .\nex:s ex:p ex:o", None),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn sparql_style_directives_and_long_strings() {
        let text = "PREFIX ex: <http://e.org/>\nex:s ex:p \"\"\"multi\nline \"quoted\" end\"\"\" .";
        let doc = parse_turtle(text, None).unwrap();
        assert!(doc.graph.contains(&Triple::new(
            ex("s"),
            ex("p"),
            Literal::string("multi\nline \"quoted\" end")
        )));
    }

    #[test]
    fn local_names_with_dots_and_escapes() {
        let doc = parse_turtle(
            "@prefix ex: <http://e.org/> . ex:a.b ex:p ex:c\\/d.",
            None,
        )
        .unwrap();
        assert!(doc.graph.contains(&Triple::new(ex("a.b"), ex("p"), ex("c/d"))));
    }
}
