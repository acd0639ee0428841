//! Executes R2RML mappings over CSV tables.

mod csv;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::r2rml::{
    validate_mapping, Diagnostic, MappingDocument, ObjectMap, Segment, Template, TermKind,
    TermMap, TermSource, TriplesMap,
};
use crate::rdf::vocab::rdf;
use crate::rdf::{BlankNode, Graph, Iri, IriError, Literal, Subject, Term, TermError, Triple};

pub use self::csv::{load_csv, write_csv, CsvError};

/// Tables by name.
pub type Tables = BTreeMap<String, TableSource>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Null,
    Text(String),
}

impl Cell {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Null => None,
            Cell::Text(t) => Some(t),
        }
    }
}

impl From<Option<&str>> for Cell {
    fn from(v: Option<&str>) -> Self {
        v.map_or(Cell::Null, |t| Cell::Text(t.to_owned()))
    }
}

/// One record; cells are in the column order of the owning table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    cells: Vec<Cell>,
}

impl Row {
    pub fn new(cells: Vec<Cell>) -> Self {
        Row { cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Cell] {
        &mut self.cells
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSource {
    name: String,
    columns: Vec<String>,
    index: HashMap<String, usize>,
    rows: Vec<Row>,
}

impl TableSource {
    pub fn new(name: impl Into<String>, columns: Vec<String>, rows: Vec<Row>) -> Result<Self, CsvError> {
        let mut index = HashMap::with_capacity(columns.len());
        for (i, c) in columns.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(CsvError::DuplicateHeader(c.clone()));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.cells.len() != columns.len() {
                return Err(CsvError::RaggedRow {
                    row: i + 1,
                    expected: columns.len(),
                    found: row.cells.len(),
                });
            }
        }
        Ok(TableSource {
            name: name.into(),
            columns,
            index,
            rows,
        })
    }

    /// Builds a table from string cells; `None` is NULL.
    pub fn from_strings(name: &str, columns: &[&str], rows: &[Vec<Option<&str>>]) -> Result<Self, CsvError> {
        TableSource::new(
            name,
            columns.iter().map(|c| c.to_string()).collect(),
            rows.iter()
                .map(|r| Row::new(r.iter().map(|&c| Cell::from(c)).collect()))
                .collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn column_index(&self, column: &str) -> Option<usize> {
        self.index.get(column).copied()
    }

    pub fn row(&self, i: usize) -> RowRef<'_> {
        RowRef {
            table: self,
            row: &self.rows[i],
        }
    }

    pub fn map_rows(mut self, f: impl FnOnce(&mut Vec<Row>)) -> Result<Self, CsvError> {
        f(&mut self.rows);
        TableSource::new(self.name, self.columns, self.rows)
    }
}

/// A row together with the header needed to look cells up by column name.
#[derive(Clone, Copy)]
pub struct RowRef<'a> {
    table: &'a TableSource,
    row: &'a Row,
}

impl<'a> RowRef<'a> {
    pub fn get(&self, column: &str) -> Option<&'a Cell> {
        self.table.column_index(column).map(|i| &self.row.cells[i])
    }
}

/// Column names of every table, as needed by [`validate_mapping`].
pub fn available_columns(tables: &Tables) -> BTreeMap<String, BTreeSet<String>> {
    tables
        .iter()
        .map(|(name, t)| (name.clone(), t.columns().iter().cloned().collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("column {0:?} does not exist")]
    MissingColumn(String),
    #[error("lexical form {lexical:?} does not match datatype {datatype}")]
    LexicalFormMismatch { lexical: String, datatype: Iri },
    #[error("invalid IRI: {0}")]
    InvalidIri(IriError),
    #[error("invalid literal: {0}")]
    InvalidLiteral(TermError),
}

impl From<TermError> for GenerateError {
    fn from(e: TermError) -> Self {
        match e {
            TermError::LexicalFormMismatch { lexical, datatype } => {
                GenerateError::LexicalFormMismatch { lexical, datatype }
            }
            other => GenerateError::InvalidLiteral(other),
        }
    }
}

fn is_iunreserved(c: char) -> bool {
    c.is_ascii_alphanumeric()
        || matches!(c, '-' | '.' | '_' | '~')
        || matches!(c as u32,
            0xA0..=0xD7FF | 0xF900..=0xFDCF | 0xFDF0..=0xFFEF | 0xE1000..=0xEFFFD)
        || (0x10000..=0xDFFFD).contains(&(c as u32)) && (c as u32 & 0xFFFF) <= 0xFFFD
}

/// Percent-encodes (uppercase hex, UTF-8 octets) every character outside `iunreserved`.
pub fn iri_safe(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    let mut buf = [0u8; 4];
    for c in value.chars() {
        if is_iunreserved(c) {
            out.push(c);
        } else {
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        }
    }
    out
}

/// Injective mapping of arbitrary text onto blank node label characters.
fn blank_label(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 1);
    out.push('n');
    let mut buf = [0u8; 4];
    for c in value.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else {
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("_{b:02X}"));
            }
        }
    }
    out
}

/// Fills a template from `row`. Column values are IRI-safe encoded when `kind` is IRI. Any
/// NULL referenced cell yields `None`.
pub fn expand_template(
    template: &Template,
    row: RowRef<'_>,
    kind: TermKind,
) -> Result<Option<String>, GenerateError> {
    let mut out = String::new();
    for segment in template.segments() {
        match segment {
            Segment::Text(t) => out.push_str(t),
            Segment::Column(c) => {
                let cell = row
                    .get(c)
                    .ok_or_else(|| GenerateError::MissingColumn(c.clone()))?;
                let Cell::Text(value) = cell else {
                    return Ok(None);
                };
                if kind == TermKind::Iri {
                    out.push_str(&iri_safe(value));
                } else {
                    out.push_str(value);
                }
            }
        }
    }
    Ok(Some(out))
}

/// Produces the term for `row`, or `None` when a referenced cell is NULL.
pub fn generate_term(term_map: &TermMap, row: RowRef<'_>) -> Result<Option<Term>, GenerateError> {
    let value = match &term_map.source {
        TermSource::Constant(term) => return Ok(Some(term.clone())),
        TermSource::Column(c) => match row.get(c) {
            None => return Err(GenerateError::MissingColumn(c.clone())),
            Some(Cell::Null) => return Ok(None),
            Some(Cell::Text(t)) => t.clone(),
        },
        TermSource::Template(t) => match expand_template(t, row, term_map.term_kind)? {
            None => return Ok(None),
            Some(v) => v,
        },
    };
    let term = match term_map.term_kind {
        TermKind::Iri => Term::Iri(Iri::new(&value).map_err(GenerateError::InvalidIri)?),
        TermKind::BlankNode => {
            Term::Blank(BlankNode::new(blank_label(&value)).expect("encoded label is valid"))
        }
        TermKind::Literal => Term::Literal(match (&term_map.language, &term_map.datatype) {
            (Some(lang), _) => Literal::lang(value, lang)?,
            (None, Some(dt)) => Literal::typed(value, dt.clone())?,
            (None, None) => Literal::string(value),
        }),
    };
    Ok(Some(term))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    Null,
    Invalid(GenerateError),
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::Null => f.write_str("null value"),
            SkipReason::Invalid(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedTerm {
    pub map: String,
    /// Data row number, from 1.
    pub row: usize,
    /// Columns read by the term map, comma separated; empty for constants.
    pub column: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConversionReport {
    /// Rows of the tables the mapping reads, each table counted once.
    pub rows_read: usize,
    /// Size of the output graph.
    pub triples_emitted: usize,
    /// Generated triples that were already in the graph.
    pub triples_deduplicated: usize,
    pub skipped_terms: Vec<SkippedTerm>,
}

impl ConversionReport {
    /// One `map TAB row TAB column TAB reason` line per skipped term.
    pub fn log_lines(&self) -> Vec<String> {
        let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
        self.skipped_terms
            .iter()
            .map(|s| {
                format!(
                    "{}\t{}\t{}\t{}",
                    clean(&s.map),
                    s.row,
                    clean(&s.column),
                    clean(&s.reason.to_string())
                )
            })
            .collect()
    }

    pub fn summary(&self) -> String {
        let nulls = self
            .skipped_terms
            .iter()
            .filter(|s| s.reason == SkipReason::Null)
            .count();
        format!(
            "rows read: {}\ntriples emitted: {}\nduplicate triples: {}\nskipped terms: {} ({} null, {} invalid)",
            self.rows_read,
            self.triples_emitted,
            self.triples_deduplicated,
            self.skipped_terms.len(),
            nulls,
            self.skipped_terms.len() - nulls
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("mapping has {} validation error(s)", .0.iter().filter(|d| d.is_error()).count())]
    ValidationFailed(Vec<Diagnostic>),
    #[error("table {0:?} not provided")]
    MissingTable(String),
    #[error("parent triples map {0} not found")]
    MissingParent(String),
}

struct Emitter<'a> {
    graph: &'a mut Graph,
    report: &'a mut ConversionReport,
    map: String,
}

impl Emitter<'_> {
    fn emit(&mut self, triple: Triple) {
        if !self.graph.insert(triple) {
            self.report.triples_deduplicated += 1;
        }
    }

    fn term(&mut self, term_map: &TermMap, row: RowRef<'_>, row_number: usize) -> Option<Term> {
        let reason = match generate_term(term_map, row) {
            Ok(Some(t)) => return Some(t),
            Ok(None) => SkipReason::Null,
            Err(e) => SkipReason::Invalid(e),
        };
        self.report.skipped_terms.push(SkippedTerm {
            map: self.map.clone(),
            row: row_number,
            column: term_map.columns().join(","),
            reason,
        });
        None
    }
}

/// Parent-side data for one referencing object map.
struct ParentLookup<'a> {
    parent: &'a TriplesMap,
    table: &'a TableSource,
    child_columns: Vec<&'a str>,
    /// Join key to parent row indexes. Rows with a NULL join cell are absent.
    index: HashMap<Vec<&'a str>, Vec<usize>>,
    subjects: Vec<Option<Subject>>,
}

fn subject_of(term_map: &TermMap, row: RowRef<'_>) -> Option<Subject> {
    generate_term(term_map, row).ok().flatten()?.to_subject()
}

impl<'a> ParentLookup<'a> {
    fn new(
        mapping: &'a MappingDocument,
        reference: &'a crate::r2rml::RefObjectMap,
        tables: &'a Tables,
    ) -> Result<Self, ConvertError> {
        let parent = mapping
            .triples_map(&reference.parent)
            .ok_or_else(|| ConvertError::MissingParent(reference.parent.to_string()))?;
        let table = tables
            .get(&parent.logical_table)
            .ok_or_else(|| ConvertError::MissingTable(parent.logical_table.clone()))?;
        let mut index: HashMap<Vec<&str>, Vec<usize>> = HashMap::new();
        let mut subjects = Vec::new();
        if !reference.joins.is_empty() {
            subjects.reserve(table.rows().len());
            'rows: for i in 0..table.rows().len() {
                let row = table.row(i);
                subjects.push(subject_of(&parent.subject_map, row));
                let mut key = Vec::with_capacity(reference.joins.len());
                for join in &reference.joins {
                    match row.get(&join.parent).and_then(Cell::as_text) {
                        Some(v) => key.push(v),
                        None => continue 'rows,
                    }
                }
                index.entry(key).or_default().push(i);
            }
        }
        Ok(ParentLookup {
            parent,
            table,
            child_columns: reference.joins.iter().map(|j| j.child.as_str()).collect(),
            index,
            subjects,
        })
    }

    /// Parent subjects joined to `row`.
    fn objects(&self, row: RowRef<'_>) -> Vec<Subject> {
        if self.child_columns.is_empty() {
            return subject_of(&self.parent.subject_map, row).into_iter().collect();
        }
        let mut key = Vec::with_capacity(self.child_columns.len());
        for c in &self.child_columns {
            match row.get(c).and_then(Cell::as_text) {
                Some(v) => key.push(v),
                None => return Vec::new(),
            }
        }
        let _ = self.table;
        self.index
            .get(&key)
            .into_iter()
            .flatten()
            .filter_map(|&i| self.subjects[i].clone())
            .collect()
    }
}

/// Runs one triples map over its logical table, adding triples to `graph`. Terms that cannot be
/// generated are recorded in `report` and the row continues.
pub fn apply_triples_map(
    mapping: &MappingDocument,
    triples_map: &TriplesMap,
    tables: &Tables,
    graph: &mut Graph,
    report: &mut ConversionReport,
) -> Result<(), ConvertError> {
    let table = tables
        .get(&triples_map.logical_table)
        .ok_or_else(|| ConvertError::MissingTable(triples_map.logical_table.clone()))?;
    let lookups: Vec<Option<ParentLookup>> = triples_map
        .predicate_object_maps
        .iter()
        .map(|pom| match &pom.object {
            ObjectMap::Ref(r) => ParentLookup::new(mapping, r, tables).map(Some),
            ObjectMap::Term(_) => Ok(None),
        })
        .collect::<Result<_, _>>()?;
    let rdf_type = rdf::type_();

    let mut emitter = Emitter {
        graph,
        report,
        map: triples_map.name(),
    };
    for i in 0..table.rows().len() {
        let row = table.row(i);
        let row_number = i + 1;
        let Some(subject) = emitter.term(&triples_map.subject_map, row, row_number) else {
            continue;
        };
        let Some(subject) = subject.to_subject() else {
            continue;
        };
        for class in &triples_map.subject_classes {
            emitter.emit(Triple::new(subject.clone(), rdf_type.clone(), class.clone()));
        }
        for (pom, lookup) in triples_map.predicate_object_maps.iter().zip(&lookups) {
            let Some(Term::Iri(predicate)) = emitter.term(&pom.predicate, row, row_number) else {
                continue;
            };
            match (&pom.object, lookup) {
                (ObjectMap::Term(object_map), _) => {
                    if let Some(object) = emitter.term(object_map, row, row_number) {
                        emitter.emit(Triple::new(subject.clone(), predicate, object));
                    }
                }
                (ObjectMap::Ref(_), Some(lookup)) => {
                    for parent in lookup.objects(row) {
                        emitter.emit(Triple::new(subject.clone(), predicate.clone(), parent));
                    }
                }
                (ObjectMap::Ref(_), None) => unreachable!("lookup built for every reference"),
            }
        }
    }
    emitter.report.triples_emitted = emitter.graph.len();
    Ok(())
}

/// Validates `mapping` against `tables` and, if it has no errors, runs every triples map.
pub fn convert(
    mapping: &MappingDocument,
    tables: &Tables,
) -> Result<(Graph, ConversionReport), ConvertError> {
    let diagnostics = validate_mapping(mapping, &available_columns(tables));
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(ConvertError::ValidationFailed(diagnostics));
    }
    let mut graph = Graph::new();
    let mut report = ConversionReport {
        rows_read: mapping
            .tables()
            .iter()
            .filter_map(|t| tables.get(*t))
            .map(|t| t.rows().len())
            .sum(),
        ..Default::default()
    };
    for tm in &mapping.triples_maps {
        apply_triples_map(mapping, tm, tables, &mut graph, &mut report)?;
    }
    report.triples_emitted = graph.len();
    Ok((graph, report))
}
