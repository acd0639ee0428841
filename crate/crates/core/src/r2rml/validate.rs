use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rdf::vocab::rdf;
use crate::rdf::Term;

use super::{MappingDocument, ObjectMap, TermMap, TermSource, TriplesMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Triples map the finding belongs to, if any.
    pub map: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn error(map: &TriplesMap, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            map: Some(map.name()),
            message,
        }
    }

    fn warning(map: Option<&TriplesMap>, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            map: map.map(TriplesMap::name),
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.map {
            Some(map) => write!(f, "{level}: <{map}>: {}", self.message),
            None => write!(f, "{level}: {}", self.message),
        }
    }
}

/// Checks a mapping against the columns actually available in each table.
///
/// Errors: missing logical tables, referenced columns absent from their table, join columns
/// absent from either side, and joinless references across different tables. Warnings: parse
/// warnings, duplicate class assertions and tables the mapping never reads.
pub fn validate_mapping(
    mapping: &MappingDocument,
    available_columns: &BTreeMap<String, BTreeSet<String>>,
) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = mapping
        .warnings
        .iter()
        .map(|w| Diagnostic::warning(None, w.clone()))
        .collect();

    for tm in &mapping.triples_maps {
        let Some(columns) = available_columns.get(&tm.logical_table) else {
            out.push(Diagnostic::error(
                tm,
                format!("logical table {:?} not found", tm.logical_table),
            ));
            continue;
        };
        let mut check = |term_map: &TermMap, role: &str| {
            for column in term_map.columns() {
                if !columns.contains(column) {
                    out.push(Diagnostic::error(
                        tm,
                        format!(
                            "{role} references column {column:?} which is not in table {:?}",
                            tm.logical_table
                        ),
                    ));
                }
            }
        };
        check(&tm.subject_map, "subject map");
        for pom in &tm.predicate_object_maps {
            check(&pom.predicate, "predicate map");
            if let ObjectMap::Term(object) = &pom.object {
                check(object, "object map");
            }
        }

        let mut seen = BTreeSet::new();
        for class in &tm.subject_classes {
            if !seen.insert(class) {
                out.push(Diagnostic::warning(
                    Some(tm),
                    format!("class {class} asserted more than once"),
                ));
            }
        }
        for pom in &tm.predicate_object_maps {
            let is_type = matches!(&pom.predicate.source,
                TermSource::Constant(Term::Iri(p)) if p.as_str() == rdf::TYPE);
            if let (true, ObjectMap::Term(TermMap { source: TermSource::Constant(Term::Iri(c)), .. })) =
                (is_type, &pom.object)
            {
                if seen.contains(c) {
                    out.push(Diagnostic::warning(
                        Some(tm),
                        format!("class {c} asserted by both rr:class and an rdf:type predicate map"),
                    ));
                }
            }
        }

        for pom in &tm.predicate_object_maps {
            let ObjectMap::Ref(r) = &pom.object else { continue };
            let Some(parent) = mapping.triples_map(&r.parent) else {
                out.push(Diagnostic::error(
                    tm,
                    format!("parent triples map {} not defined", r.parent),
                ));
                continue;
            };
            if r.joins.is_empty() && parent.logical_table != tm.logical_table {
                out.push(Diagnostic::error(
                    tm,
                    format!(
                        "reference to <{}> over a different table needs a join condition",
                        parent.name()
                    ),
                ));
            }
            let parent_columns = available_columns.get(&parent.logical_table);
            for join in &r.joins {
                if !columns.contains(&join.child) {
                    out.push(Diagnostic::error(
                        tm,
                        format!(
                            "join child column {:?} is not in table {:?}",
                            join.child, tm.logical_table
                        ),
                    ));
                }
                if parent_columns.is_some_and(|c| !c.contains(&join.parent)) {
                    out.push(Diagnostic::error(
                        tm,
                        format!(
                            "join parent column {:?} is not in table {:?}",
                            join.parent, parent.logical_table
                        ),
                    ));
                }
            }
        }
    }

    let used = mapping.tables();
    for table in available_columns.keys() {
        if !used.contains(table.as_str()) {
            out.push(Diagnostic::warning(
                None,
                format!("table {table:?} is not used by any triples map"),
            ));
        }
    }
    out
}
