use crate::rdf::lex::Cursor;
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, Literal, ParseError, PrefixMap, Term};

use super::{CompareOp, FilterExpr, PatternTerm, Projection, Query, QueryError, TriplePattern};

/// Parses a `SELECT` query. `prefixes` are predeclared; `PREFIX` lines add to or override them.
pub fn parse_query(text: &str, prefixes: &PrefixMap) -> Result<Query, QueryError> {
    let mut p = QueryParser {
        cursor: Cursor::new(text),
        prefixes: prefixes.clone(),
        anonymous: 0,
    };
    let query = p.query()?;
    for var in query.projected_variables() {
        if !query.patterns.iter().any(|t| t.variables().any(|v| v == var)) {
            return Err(QueryError::UnboundProjection(var.to_owned()));
        }
    }
    Ok(query)
}

struct QueryParser {
    cursor: Cursor,
    prefixes: PrefixMap,
    anonymous: usize,
}

impl QueryParser {
    fn keyword(&mut self, kw: &str) -> bool {
        self.cursor.skip_ws();
        if self.cursor.starts_with_keyword(kw) {
            self.cursor.advance(kw.chars().count());
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.keyword(kw) {
            Ok(())
        } else {
            Err(self.cursor.unexpected(&format!("expected {kw}")).into())
        }
    }

    fn punct(&mut self, c: char) -> bool {
        self.cursor.skip_ws();
        self.cursor.eat(c)
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QueryError> {
        if self.punct(c) {
            Ok(())
        } else {
            Err(self.cursor.unexpected(&format!("expected {c:?}")).into())
        }
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while self.keyword("PREFIX") {
            self.cursor.skip_ws();
            let (prefix, local) = self.cursor.read_prefixed_name()?;
            if !local.is_empty() {
                return Err(self.cursor.error("expected prefix name ending in ':'").into());
            }
            self.cursor.skip_ws();
            self.cursor.expect('<')?;
            let (line, column) = (self.cursor.line(), self.cursor.column());
            let text = self.cursor.read_iriref()?;
            let ns = Iri::new(&text).map_err(|e| ParseError::from_iri(e, line, column))?;
            self.prefixes.insert(prefix, ns);
        }
        self.expect_keyword("SELECT")?;
        let distinct = self.keyword("DISTINCT");
        let projection = self.projection()?;
        self.keyword("WHERE");
        self.expect_punct('{')?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.cursor.skip_ws();
            if self.cursor.eat('}') {
                break;
            }
            if self.keyword("FILTER") {
                filters.push(self.filter()?);
                self.punct('.');
                continue;
            }
            self.triples(&mut patterns)?;
            self.cursor.skip_ws();
            if !self.cursor.eat('.') && self.cursor.peek() != Some('}') && !self.cursor.starts_with_keyword("FILTER") {
                return Err(self.cursor.unexpected("expected '.' or '}'").into());
            }
        }
        self.cursor.skip_ws();
        if !self.cursor.at_end() {
            return Err(self.cursor.unexpected("expected end of query").into());
        }
        if patterns.is_empty() {
            return Err(self.cursor.error("query has no triple patterns").into());
        }
        let projection = match projection {
            Some(p) => p,
            None => {
                let mut vars: Vec<String> = Vec::new();
                for v in patterns.iter().flat_map(TriplePattern::variables) {
                    if !v.starts_with("_:") && !vars.iter().any(|x| x == v) {
                        vars.push(v.to_owned());
                    }
                }
                Projection::Variables(vars)
            }
        };
        Ok(Query {
            distinct,
            projection,
            patterns,
            filters,
        })
    }

    /// `None` for `SELECT *`.
    fn projection(&mut self) -> Result<Option<Projection>, QueryError> {
        if self.punct('*') {
            return Ok(None);
        }
        if self.punct('(') {
            self.expect_keyword("COUNT")?;
            self.expect_punct('(')?;
            self.expect_punct('*')?;
            self.expect_punct(')')?;
            self.expect_keyword("AS")?;
            self.cursor.skip_ws();
            let var = self.variable()?;
            self.expect_punct(')')?;
            return Ok(Some(Projection::Count(var)));
        }
        let mut vars = Vec::new();
        loop {
            self.cursor.skip_ws();
            if !matches!(self.cursor.peek(), Some('?' | '$')) {
                break;
            }
            vars.push(self.variable()?);
        }
        if vars.is_empty() {
            return Err(self.cursor.unexpected("expected variables, '*' or (COUNT(*) AS ?var)").into());
        }
        Ok(Some(Projection::Variables(vars)))
    }

    fn variable(&mut self) -> Result<String, QueryError> {
        if !matches!(self.cursor.peek(), Some('?' | '$')) {
            return Err(self.cursor.unexpected("expected variable").into());
        }
        self.cursor.bump();
        let mut name = String::new();
        while let Some(c) = self.cursor.peek() {
            if c.is_alphanumeric() || c == '_' {
                name.push(c);
                self.cursor.bump();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return Err(self.cursor.error("empty variable name").into());
        }
        Ok(name)
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        self.cursor.skip_ws();
        let subject = self.term(Position::Subject)?;
        loop {
            self.cursor.skip_ws();
            let predicate = self.term(Position::Predicate)?;
            loop {
                self.cursor.skip_ws();
                let object = self.term(Position::Object)?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !self.punct(',') {
                    break;
                }
            }
            if !self.punct(';') {
                return Ok(());
            }
            while self.punct(';') {}
            self.cursor.skip_ws();
            if matches!(self.cursor.peek(), Some('.' | '}')) {
                return Ok(());
            }
        }
    }

    fn term(&mut self, position: Position) -> Result<PatternTerm, QueryError> {
        let (line, column) = (self.cursor.line(), self.cursor.column());
        let term = match self.cursor.peek() {
            Some('?' | '$') => return Ok(PatternTerm::Variable(self.variable()?)),
            Some('_') if self.cursor.peek_at(1) == Some(':') => {
                self.cursor.advance(2);
                let label = self.cursor.read_blank_label()?;
                return self.blank(position, format!("_:{label}"));
            }
            Some('[') => {
                self.cursor.bump();
                self.expect_punct(']')?;
                self.anonymous += 1;
                return self.blank(position, format!("_:[]{}", self.anonymous));
            }
            Some('a') if position == Position::Predicate
                && !self.cursor.peek_at(1).is_some_and(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.')) =>
            {
                self.cursor.bump();
                Term::Iri(rdf::type_())
            }
            Some('<') => Term::Iri(self.iri_ref()?),
            Some('"' | '\'') => Term::Literal(self.quoted_literal()?),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                Term::Literal(self.cursor.read_number()?)
            }
            Some(_) if self.cursor.starts_with_keyword("true") => {
                self.cursor.advance(4);
                Term::Literal(Literal::typed("true", xsd::boolean()).expect("valid boolean"))
            }
            Some(_) if self.cursor.starts_with_keyword("false") => {
                self.cursor.advance(5);
                Term::Literal(Literal::typed("false", xsd::boolean()).expect("valid boolean"))
            }
            Some(c) if c.is_alphabetic() || c == ':' => Term::Iri(self.prefixed_name()?),
            _ => return Err(self.cursor.unexpected("expected a term or variable").into()),
        };
        let allowed = match position {
            Position::Subject => !term.is_literal(),
            Position::Predicate => term.as_iri().is_some(),
            Position::Object | Position::Operand => true,
        };
        if !allowed {
            return Err(QueryError::Syntax {
                line,
                column,
                message: format!("{term} is not allowed as {}", position.name()),
            });
        }
        Ok(PatternTerm::Term(term))
    }

    fn blank(&mut self, position: Position, name: String) -> Result<PatternTerm, QueryError> {
        if matches!(position, Position::Predicate | Position::Operand) {
            return Err(self.cursor.error(format!("blank node not allowed as {}", position.name())).into());
        }
        // a name that no `?var` can spell keeps blank nodes hidden from projection
        Ok(PatternTerm::Variable(name))
    }

    fn filter(&mut self) -> Result<FilterExpr, QueryError> {
        self.expect_punct('(')?;
        self.cursor.skip_ws();
        let variable = self.variable()?;
        self.cursor.skip_ws();
        let op = if self.cursor.starts_with("!=") {
            CompareOp::Ne
        } else if self.cursor.starts_with("<=") {
            CompareOp::Le
        } else if self.cursor.starts_with(">=") {
            CompareOp::Ge
        } else if self.cursor.starts_with("=") {
            CompareOp::Eq
        } else if self.cursor.starts_with("<") {
            CompareOp::Lt
        } else if self.cursor.starts_with(">") {
            CompareOp::Gt
        } else {
            return Err(self.cursor.unexpected("expected comparison operator").into());
        };
        self.cursor.advance(op.symbol().len());
        self.cursor.skip_ws();
        let PatternTerm::Term(operand) = self.term(Position::Operand)? else {
            return Err(self.cursor.error("filter operand must be a constant").into());
        };
        self.expect_punct(')')?;
        Ok(FilterExpr { variable, op, operand })
    }

    fn iri_ref(&mut self) -> Result<Iri, QueryError> {
        let (line, column) = (self.cursor.line(), self.cursor.column());
        self.cursor.expect('<')?;
        let text = self.cursor.read_iriref()?;
        Ok(Iri::new(&text).map_err(|e| ParseError::from_iri(e, line, column))?)
    }

    fn prefixed_name(&mut self) -> Result<Iri, QueryError> {
        let (line, column) = (self.cursor.line(), self.cursor.column());
        let (prefix, local) = self.cursor.read_prefixed_name()?;
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| QueryError::UnknownPrefix {
                prefix: prefix.clone(),
                line,
                column,
            })?;
        Ok(Iri::new(format!("{}{}", ns.as_str(), local))
            .map_err(|e| ParseError::from_iri(e, line, column))?)
    }

    fn quoted_literal(&mut self) -> Result<Literal, QueryError> {
        let lexical = self.cursor.read_string(true)?;
        let literal = if self.cursor.eat('@') {
            let tag = self.cursor.read_language();
            Literal::lang(lexical, tag)
        } else if self.cursor.starts_with("^^") {
            self.cursor.advance(2);
            let datatype = match self.cursor.peek() {
                Some('<') => self.iri_ref()?,
                _ => self.prefixed_name()?,
            };
            Literal::typed(lexical, datatype)
        } else {
            Ok(Literal::string(lexical))
        };
        literal.map_err(|e| self.cursor.error(e.to_string()).into())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Subject,
    Predicate,
    Object,
    Operand,
}

impl Position {
    fn name(self) -> &'static str {
        match self {
            Position::Subject => "a subject",
            Position::Predicate => "a predicate",
            Position::Object => "an object",
            Position::Operand => "a filter operand",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(q: &str) -> Result<Query, QueryError> {
        parse_query(q, &PrefixMap::standard())
    }

    fn var(v: &str) -> PatternTerm {
        PatternTerm::Variable(v.into())
    }

    #[test]
    fn single_pattern() {
        let q = parse("SELECT ?p WHERE { ?p rdf:type ncit:C16960 . }").unwrap();
        assert_eq!(q.patterns.len(), 1);
        assert_eq!(q.projection, Projection::Variables(vec!["p".into()]));
        assert_eq!(
            q.patterns[0].object,
            PatternTerm::Term(Term::Iri(Iri::new("http://purl.obolibrary.org/obo/NCIT_C16960").unwrap()))
        );
    }

    #[test]
    fn count_projection() {
        let q = parse("select (count(*) as ?n) where { ?p roo:hasTreatment ?t }").unwrap();
        assert_eq!(q.projection, Projection::Count("n".into()));
    }

    #[test]
    fn unbound_projection() {
        assert_eq!(
            parse("SELECT ?x WHERE { ?p roo:hasAge ?a . }"),
            Err(QueryError::UnboundProjection("x".into()))
        );
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse("SELECT ?x WHERE {") {
            Err(QueryError::Syntax { line: 1, column: 18, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("SELECT ?x\nWHERE { ?x ?y }") {
            Err(QueryError::Syntax { line: 2, column: 15, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("SELECT WHERE { ?a ?b ?c }"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("SELECT ?a WHERE { \"lit\" ?b ?a }"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("SELECT ?a WHERE { ?a ?b ?c } extra"), Err(QueryError::Syntax { .. })));
        assert!(matches!(parse("SELECT * WHERE { }"), Err(QueryError::Syntax { .. })));
    }

    #[test]
    fn unknown_prefix() {
        assert!(matches!(
            parse("SELECT ?a WHERE { ?a zz:p ?b }"),
            Err(QueryError::UnknownPrefix { prefix, line: 1, column: 22 }) if prefix == "zz"
        ));
    }

    #[test]
    fn prefixes_lists_and_filters() {
        let q = parse_query(
            "PREFIX ex: <http://e.org/>\nSELECT ?s ?o WHERE { ?s ex:p ?o, 5 ; a ex:C . FILTER (?o <= -2.5) FILTER(?s != ex:x) }",
            &PrefixMap::new(),
        )
        .unwrap();
        assert_eq!(q.patterns.len(), 3);
        assert_eq!(q.patterns[2].predicate, PatternTerm::Term(Term::Iri(crate::rdf::vocab::rdf::type_())));
        assert_eq!(q.filters.len(), 2);
        assert_eq!(q.filters[0].op, CompareOp::Le);
        assert_eq!(q.filters[0].operand.to_string(), "\"-2.5\"^^<http://www.w3.org/2001/XMLSchema#decimal>");
        assert_eq!(q.filters[1].op, CompareOp::Ne);
    }

    #[test]
    fn blank_nodes_become_hidden_variables() {
        let q = parse("SELECT ?a WHERE { ?a roo:hasTreatment _:t . _:t ?p [] }").unwrap();
        assert_eq!(q.patterns[0].object, var("_:t"));
        assert_eq!(q.patterns[1].subject, var("_:t"));
        assert!(matches!(&q.patterns[1].object, PatternTerm::Variable(v) if v.starts_with("_:")));
        assert!(parse("SELECT ?a WHERE { ?a _:p ?b }").is_err());
    }
}
