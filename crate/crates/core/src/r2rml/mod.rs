//! R2RML mapping documents: the executable model and its reader.
//!
//! Supported: base-table logical tables, constant/column/template term maps, `rr:class`,
//! the `rr:subject`/`rr:predicate`/`rr:object` shortcuts, `rr:termType`, `rr:datatype`,
//! `rr:language`, and referencing object maps with join conditions. `rr:sqlQuery` views and
//! `rr:graphMap` are rejected; `rr:inverseExpression` is ignored with a warning.

mod template;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rdf::vocab::{rdf, rr};
use crate::rdf::{
    is_valid_language_tag, parse_turtle, Graph, Iri, ParseError, PrefixMap, Subject, Term,
};

pub use template::{Segment, Template, TemplateError};
pub use validate::{validate_mapping, Diagnostic, Severity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    /// `map` is `None` when the document contains no triples map at all.
    #[error("{}", match map {
        Some(m) => format!("no subject map for triples map {m}"),
        None => "no triples maps found in mapping document".to_owned(),
    })]
    MissingSubjectMap { map: Option<String> },
    #[error("no logical table for triples map {0}")]
    MissingLogicalTable(String),
    #[error("triples map {0}: subject map produces literals")]
    LiteralSubject(String),
    #[error("triples map {map}: parent triples map {parent} is not defined in the document")]
    DanglingParentMap { map: String, parent: String },
    #[error("triples map {0}: term map has more than one of rr:constant, rr:column, rr:template")]
    ConflictingSource(String),
    #[error("triples map {0}: term map has none of rr:constant, rr:column, rr:template")]
    MissingSource(String),
    #[error("triples map {map}: {source}")]
    Template {
        map: String,
        #[source]
        source: TemplateError,
    },
    #[error("triples map {0}: rr:sqlQuery logical tables are not supported, use rr:tableName")]
    UnsupportedSqlQuery(String),
    #[error("triples map {0}: rr:graphMap and rr:graph are not supported")]
    UnsupportedGraphMap(String),
    #[error("triples map {map}: {message}")]
    InvalidTermMap { map: String, message: String },
    #[error(transparent)]
    Syntax(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermKind {
    Iri,
    BlankNode,
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermSource {
    Constant(Term),
    Column(String),
    Template(Template),
}

/// Rule producing one RDF term from a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMap {
    pub source: TermSource,
    pub term_kind: TermKind,
    pub datatype: Option<Iri>,
    pub language: Option<String>,
}

impl TermMap {
    pub fn constant(term: impl Into<Term>) -> Self {
        let term = term.into();
        let term_kind = match &term {
            Term::Iri(_) => TermKind::Iri,
            Term::Blank(_) => TermKind::BlankNode,
            Term::Literal(_) => TermKind::Literal,
        };
        TermMap {
            source: TermSource::Constant(term),
            term_kind,
            datatype: None,
            language: None,
        }
    }

    pub fn column(name: impl Into<String>, term_kind: TermKind) -> Self {
        TermMap {
            source: TermSource::Column(name.into()),
            term_kind,
            datatype: None,
            language: None,
        }
    }

    pub fn template(template: Template, term_kind: TermKind) -> Self {
        TermMap {
            source: TermSource::Template(template),
            term_kind,
            datatype: None,
            language: None,
        }
    }

    pub fn with_datatype(mut self, datatype: Iri) -> Self {
        self.datatype = Some(datatype);
        self
    }

    /// Columns read by this term map.
    pub fn columns(&self) -> Vec<&str> {
        match &self.source {
            TermSource::Constant(_) => Vec::new(),
            TermSource::Column(c) => vec![c.as_str()],
            TermSource::Template(t) => t.columns().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinCondition {
    pub child: String,
    pub parent: String,
}

/// Object map that links to the subjects of another triples map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefObjectMap {
    pub parent: Subject,
    pub joins: Vec<JoinCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectMap {
    Term(TermMap),
    Ref(RefObjectMap),
}

/// One predicate and one object rule. Mapping blocks with several predicates or objects are
/// expanded into one entry per combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateObjectMap {
    pub predicate: TermMap,
    pub object: ObjectMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplesMap {
    pub id: Subject,
    pub logical_table: String,
    pub subject_map: TermMap,
    pub subject_classes: Vec<Iri>,
    pub predicate_object_maps: Vec<PredicateObjectMap>,
}

impl TriplesMap {
    /// Display name used in diagnostics and reports.
    pub fn name(&self) -> String {
        map_name(&self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingDocument {
    pub triples_maps: Vec<TriplesMap>,
    pub prefixes: PrefixMap,
    pub source_name: String,
    /// Non-fatal findings from parsing, such as unknown `rr:` properties.
    pub warnings: Vec<String>,
}

impl MappingDocument {
    pub fn triples_map(&self, id: &Subject) -> Option<&TriplesMap> {
        self.triples_maps.iter().find(|tm| &tm.id == id)
    }

    /// Names of all logical tables referenced by the document.
    pub fn tables(&self) -> BTreeSet<&str> {
        self.triples_maps
            .iter()
            .map(|tm| tm.logical_table.as_str())
            .collect()
    }
}

fn map_name(id: &Subject) -> String {
    match id {
        Subject::Iri(i) => i.as_str().to_owned(),
        Subject::Blank(b) => b.to_string(),
    }
}

const KNOWN_PROPERTIES: &[&str] = &[
    "logicalTable",
    "tableName",
    "sqlQuery",
    "sqlVersion",
    "subjectMap",
    "subject",
    "predicateObjectMap",
    "predicate",
    "predicateMap",
    "object",
    "objectMap",
    "constant",
    "column",
    "template",
    "termType",
    "class",
    "datatype",
    "language",
    "parentTriplesMap",
    "joinCondition",
    "child",
    "parent",
    "graph",
    "graphMap",
    "inverseExpression",
];

fn rr_iri(local: &str) -> Iri {
    Iri::new(format!("{}{}", rr::NAMESPACE, local)).expect("valid rr: IRI")
}

/// Parses Turtle text and reads the mapping it contains.
pub fn parse_mapping_turtle(text: &str, source_name: &str) -> Result<MappingDocument, MappingError> {
    let doc = parse_turtle(text, None)?;
    parse_mapping(&doc.graph, &doc.prefixes, source_name)
}

/// Reads every triples map of an R2RML document graph.
pub fn parse_mapping(
    doc: &Graph,
    prefixes: &PrefixMap,
    source_name: &str,
) -> Result<MappingDocument, MappingError> {
    let reader = Reader { doc };
    let mut warnings = Vec::new();
    for t in doc.iter() {
        if let Some(local) = t.predicate.as_str().strip_prefix(rr::NAMESPACE) {
            if !KNOWN_PROPERTIES.contains(&local) {
                warnings.push(format!("unknown property rr:{local} on {} ignored", t.subject));
            } else if local == "inverseExpression" {
                warnings.push(format!("rr:inverseExpression on {} ignored", t.subject));
            }
        }
    }

    let mut ids: BTreeSet<Subject> = BTreeSet::new();
    for property in ["logicalTable", "subjectMap", "subject"] {
        for t in doc.match_pattern(None, Some(&rr_iri(property)), None) {
            ids.insert(t.subject);
        }
    }
    if ids.is_empty() {
        return Err(MappingError::MissingSubjectMap { map: None });
    }

    let mut triples_maps = Vec::with_capacity(ids.len());
    for id in &ids {
        triples_maps.push(reader.triples_map(id)?);
    }
    for tm in &triples_maps {
        for pom in &tm.predicate_object_maps {
            if let ObjectMap::Ref(r) = &pom.object {
                if !ids.contains(&r.parent) {
                    return Err(MappingError::DanglingParentMap {
                        map: tm.name(),
                        parent: map_name(&r.parent),
                    });
                }
            }
        }
    }
    Ok(MappingDocument {
        triples_maps,
        prefixes: prefixes.clone(),
        source_name: source_name.to_owned(),
        warnings,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Subject,
    Predicate,
    Object,
}

struct Reader<'a> {
    doc: &'a Graph,
}

impl Reader<'_> {
    fn values(&self, node: &Subject, property: &str) -> Vec<Term> {
        self.doc
            .match_pattern(Some(node), Some(&rr_iri(property)), None)
            .into_iter()
            .map(|t| t.object)
            .collect()
    }

    fn node_values(&self, node: &Subject, property: &str, map: &str) -> Result<Vec<Subject>, MappingError> {
        self.values(node, property)
            .into_iter()
            .map(|v| {
                v.to_subject().ok_or_else(|| MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: format!("rr:{property} must point to a node, found {v}"),
                })
            })
            .collect()
    }

    fn single_string(
        &self,
        node: &Subject,
        property: &str,
        map: &str,
    ) -> Result<Option<String>, MappingError> {
        let values = self.values(node, property);
        match values.as_slice() {
            [] => Ok(None),
            [Term::Literal(l)] => Ok(Some(l.lexical().to_owned())),
            [other] => Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: format!("rr:{property} must be a literal, found {other}"),
            }),
            _ => Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: format!("more than one rr:{property} on {node}"),
            }),
        }
    }

    fn triples_map(&self, id: &Subject) -> Result<TriplesMap, MappingError> {
        let name = map_name(id);

        let tables = self.node_values(id, "logicalTable", &name)?;
        let table_node = match tables.as_slice() {
            [] => return Err(MappingError::MissingLogicalTable(name)),
            [t] => t.clone(),
            _ => {
                return Err(MappingError::InvalidTermMap {
                    map: name,
                    message: "more than one rr:logicalTable".into(),
                })
            }
        };
        if !self.values(&table_node, "sqlQuery").is_empty() {
            return Err(MappingError::UnsupportedSqlQuery(name));
        }
        let logical_table = self
            .single_string(&table_node, "tableName", &name)?
            .map(|t| unquote_identifier(&t))
            .ok_or_else(|| MappingError::MissingLogicalTable(name.clone()))?;

        let subject_nodes = self.node_values(id, "subjectMap", &name)?;
        let subject_constants = self.values(id, "subject");
        let (subject_map, subject_classes) = match (subject_nodes.as_slice(), subject_constants.as_slice()) {
            ([node], []) => {
                if !self.values(node, "graphMap").is_empty() || !self.values(node, "graph").is_empty() {
                    return Err(MappingError::UnsupportedGraphMap(name));
                }
                let tm = self.term_map(node, Position::Subject, &name)?;
                let mut classes = Vec::new();
                for class in self.values(node, "class") {
                    match class {
                        Term::Iri(i) => classes.push(i),
                        other => {
                            return Err(MappingError::InvalidTermMap {
                                map: name,
                                message: format!("rr:class must be an IRI, found {other}"),
                            })
                        }
                    }
                }
                classes.sort();
                (tm, classes)
            }
            ([], [constant]) => {
                if constant.is_literal() {
                    return Err(MappingError::LiteralSubject(name));
                }
                (TermMap::constant(constant.clone()), Vec::new())
            }
            ([], []) => return Err(MappingError::MissingSubjectMap { map: Some(name) }),
            _ => {
                return Err(MappingError::InvalidTermMap {
                    map: name,
                    message: "more than one subject map".into(),
                })
            }
        };

        let mut predicate_object_maps = Vec::new();
        let mut pom_nodes = self.node_values(id, "predicateObjectMap", &name)?;
        pom_nodes.sort();
        for pom in &pom_nodes {
            if !self.values(pom, "graphMap").is_empty() || !self.values(pom, "graph").is_empty() {
                return Err(MappingError::UnsupportedGraphMap(name));
            }
            let mut predicates = Vec::new();
            for constant in self.values(pom, "predicate") {
                predicates.push(self.constant_map(constant, Position::Predicate, &name)?);
            }
            for node in self.node_values(pom, "predicateMap", &name)? {
                predicates.push(self.term_map(&node, Position::Predicate, &name)?);
            }
            let mut objects = Vec::new();
            for constant in self.values(pom, "object") {
                objects.push(ObjectMap::Term(self.constant_map(constant, Position::Object, &name)?));
            }
            for node in self.node_values(pom, "objectMap", &name)? {
                objects.push(self.object_map(&node, &name)?);
            }
            if predicates.is_empty() || objects.is_empty() {
                return Err(MappingError::InvalidTermMap {
                    map: name,
                    message: format!("predicate-object map {pom} needs at least one predicate and one object"),
                });
            }
            for predicate in &predicates {
                for object in &objects {
                    predicate_object_maps.push(PredicateObjectMap {
                        predicate: predicate.clone(),
                        object: object.clone(),
                    });
                }
            }
        }

        Ok(TriplesMap {
            id: id.clone(),
            logical_table,
            subject_map,
            subject_classes,
            predicate_object_maps,
        })
    }

    fn object_map(&self, node: &Subject, map: &str) -> Result<ObjectMap, MappingError> {
        let parents = self.node_values(node, "parentTriplesMap", map)?;
        match parents.as_slice() {
            [] => Ok(ObjectMap::Term(self.term_map(node, Position::Object, map)?)),
            [parent] => {
                let mut joins = Vec::new();
                for jc in self.node_values(node, "joinCondition", map)? {
                    let child = self.single_string(&jc, "child", map)?;
                    let parent = self.single_string(&jc, "parent", map)?;
                    match (child, parent) {
                        (Some(child), Some(parent)) => joins.push(JoinCondition {
                            child: unquote_identifier(&child),
                            parent: unquote_identifier(&parent),
                        }),
                        _ => {
                            return Err(MappingError::InvalidTermMap {
                                map: map.to_owned(),
                                message: "join condition needs exactly one rr:child and one rr:parent"
                                    .into(),
                            })
                        }
                    }
                }
                joins.sort_by(|a, b| (&a.child, &a.parent).cmp(&(&b.child, &b.parent)));
                Ok(ObjectMap::Ref(RefObjectMap {
                    parent: parent.clone(),
                    joins,
                }))
            }
            _ => Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: "more than one rr:parentTriplesMap".into(),
            }),
        }
    }

    fn constant_map(&self, constant: Term, position: Position, map: &str) -> Result<TermMap, MappingError> {
        match (&constant, position) {
            (Term::Literal(_), Position::Subject) => Err(MappingError::LiteralSubject(map.to_owned())),
            (Term::Iri(_), _) | (_, Position::Object) => Ok(TermMap::constant(constant)),
            _ => Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: format!("constant {constant} is not allowed in predicate position"),
            }),
        }
    }

    fn term_map(&self, node: &Subject, position: Position, map: &str) -> Result<TermMap, MappingError> {
        let constants = self.values(node, "constant");
        let columns = self.values(node, "column");
        let templates = self.values(node, "template");
        let count = constants.len() + columns.len() + templates.len();
        if count > 1 {
            return Err(MappingError::ConflictingSource(map.to_owned()));
        }
        if count == 0 {
            return Err(MappingError::MissingSource(map.to_owned()));
        }

        let datatype = match self.values(node, "datatype").as_slice() {
            [] => None,
            [Term::Iri(i)] => Some(i.clone()),
            _ => {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "rr:datatype must be a single IRI".into(),
                })
            }
        };
        let language = self.single_string(node, "language", map)?;
        if let Some(tag) = &language {
            if !is_valid_language_tag(tag) {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: format!("invalid language tag {tag:?}"),
                });
            }
        }
        if datatype.is_some() && language.is_some() {
            return Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: "rr:datatype and rr:language are mutually exclusive".into(),
            });
        }

        let declared_kind = match self.values(node, "termType").as_slice() {
            [] => None,
            [Term::Iri(i)] => Some(match i.as_str().strip_prefix(rr::NAMESPACE) {
                Some("IRI") => TermKind::Iri,
                Some("BlankNode") => TermKind::BlankNode,
                Some("Literal") => TermKind::Literal,
                _ => {
                    return Err(MappingError::InvalidTermMap {
                        map: map.to_owned(),
                        message: format!("unknown rr:termType {i}"),
                    })
                }
            }),
            _ => {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "rr:termType must be a single IRI".into(),
                })
            }
        };

        if let Some(constant) = constants.into_iter().next() {
            if declared_kind.is_some() || datatype.is_some() || language.is_some() {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "constant term maps take no rr:termType, rr:datatype or rr:language".into(),
                });
            }
            return self.constant_map(constant, position, map);
        }

        let source = if let Some(column) = columns.into_iter().next() {
            let Term::Literal(l) = column else {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "rr:column must be a literal".into(),
                });
            };
            TermSource::Column(unquote_identifier(l.lexical()))
        } else {
            let Some(Term::Literal(l)) = templates.into_iter().next() else {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "rr:template must be a literal".into(),
                });
            };
            let template = Template::parse(l.lexical()).map_err(|source| MappingError::Template {
                map: map.to_owned(),
                source,
            })?;
            TermSource::Template(template.map_columns(unquote_identifier))
        };

        let default_kind = match (position, &source) {
            (Position::Object, TermSource::Column(_)) => TermKind::Literal,
            (Position::Object, _) if datatype.is_some() || language.is_some() => TermKind::Literal,
            _ => TermKind::Iri,
        };
        let term_kind = declared_kind.unwrap_or(default_kind);
        match (position, term_kind) {
            (Position::Subject, TermKind::Literal) => {
                return Err(MappingError::LiteralSubject(map.to_owned()))
            }
            (Position::Predicate, TermKind::BlankNode | TermKind::Literal) => {
                return Err(MappingError::InvalidTermMap {
                    map: map.to_owned(),
                    message: "predicate maps must produce IRIs".into(),
                })
            }
            _ => {}
        }
        if term_kind != TermKind::Literal && (datatype.is_some() || language.is_some()) {
            return Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: "rr:datatype and rr:language apply only to literal term maps".into(),
            });
        }
        if datatype.as_ref().is_some_and(|d| d.as_str() == rdf::LANG_STRING) {
            return Err(MappingError::InvalidTermMap {
                map: map.to_owned(),
                message: "use rr:language instead of rr:datatype rdf:langString".into(),
            });
        }
        Ok(TermMap {
            source,
            term_kind,
            datatype,
            language,
        })
    }
}

/// Strips SQL delimited-identifier quotes: `"PATIENT"` becomes `PATIENT`.
fn unquote_identifier(name: &str) -> String {
    match name.strip_prefix('"').and_then(|n| n.strip_suffix('"')) {
        Some(inner) if !inner.is_empty() => inner.replace("\"\"", "\""),
        _ => name.to_owned(),
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::Iri => "IRI",
            TermKind::BlankNode => "BlankNode",
            TermKind::Literal => "Literal",
        })
    }
}
