//! The patient-centred registry schema: coded vocabulary, shape constraints, a validator and a
//! synthetic table generator.
//!
//! Vocabulary and shapes are data files compiled into the crate. Patients sit at the centre with
//! demographic, tumour and treatment edges around them.

mod shapes;
mod synth;
mod vocabulary;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::r2rml::{parse_mapping_turtle, MappingDocument};
use crate::rdf::vocab::rdf;
use crate::rdf::{Graph, Iri, PrefixMap, Term};

pub use shapes::{
    parse_shapes, validate_graph, Constraint, ObjectKind, Observed, Shape, ValidationReport,
    Violation,
};
pub use synth::{
    generate_synthetic, MODALITIES, PATIENT_COLUMNS, SEX_CODES, SITE_CODES, TREATMENT_COLUMNS,
};
pub use vocabulary::{lookup_iri, lookup_label, parse_vocabulary, Category, Role, VocabularyTerm};

pub const VOCABULARY_TSV: &str = include_str!("../../data/vocabulary.tsv");
pub const SHAPES_TSV: &str = include_str!("../../data/shapes.tsv");
pub const MAPPING_TTL: &str = include_str!("../../data/protrait_mapping.ttl");

pub const PATIENT_CLASS: &str = "http://purl.obolibrary.org/obo/NCIT_C16960";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DataError {
    pub line: usize,
    pub message: String,
}

pub fn builtin_vocabulary() -> Vec<VocabularyTerm> {
    parse_vocabulary(VOCABULARY_TSV, &PrefixMap::standard()).expect("bundled vocabulary parses")
}

pub fn builtin_shapes() -> Vec<Shape> {
    parse_shapes(SHAPES_TSV, &PrefixMap::standard()).expect("bundled shapes parse")
}

/// The mapping from the PATIENT and TREATMENT tables to the patient-centred graph.
pub fn builtin_mapping() -> MappingDocument {
    parse_mapping_turtle(MAPPING_TTL, "protrait_mapping.ttl").expect("bundled mapping parses")
}

pub fn patient_class() -> Iri {
    Iri::new(PATIENT_CLASS).expect("valid IRI")
}

/// Number of typed instances per class.
pub fn class_histogram(graph: &Graph) -> BTreeMap<Iri, usize> {
    let mut out = BTreeMap::new();
    for t in graph.match_pattern(None, Some(&rdf::type_()), None) {
        if let Term::Iri(class) = t.object {
            *out.entry(class).or_insert(0) += 1;
        }
    }
    out
}

/// Edge counts per category of the predicate. Predicates outside the vocabulary are not counted.
pub fn category_edge_counts(graph: &Graph, vocabulary: &[VocabularyTerm]) -> BTreeMap<Category, usize> {
    let mut out = BTreeMap::new();
    for term in vocabulary.iter().filter(|t| t.role == Role::Predicate) {
        let n = graph.match_pattern(None, Some(&term.iri), None).len();
        *out.entry(term.category).or_insert(0) += n;
    }
    out
}
