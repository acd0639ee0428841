//! Converts flat clinical registry tables into an RDF knowledge graph with R2RML mappings,
//! checks the graph against a patient-centred schema and answers basic graph pattern queries
//! over one or more merged graphs.

pub mod etl;
pub mod model;
pub mod query;
pub mod r2rml;
pub mod rdf;
