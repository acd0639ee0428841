use std::fmt;
use std::str::FromStr;

use crate::rdf::{Iri, PrefixMap};

use super::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Class,
    Predicate,
}

/// The sections hanging off the patient node, plus `Core` for the patient itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Core,
    Demographic,
    Tumour,
    Treatment,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Core,
        Category::Demographic,
        Category::Tumour,
        Category::Treatment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Core => "core",
            Category::Demographic => "demographic",
            Category::Tumour => "tumour",
            Category::Treatment => "treatment",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularyTerm {
    pub curie: String,
    pub iri: Iri,
    pub label: String,
    pub role: Role,
    pub category: Category,
}

/// Reads `curie TAB label TAB role TAB category` lines. Blank lines and `#` comments are ignored.
pub fn parse_vocabulary(text: &str, prefixes: &PrefixMap) -> Result<Vec<VocabularyTerm>, DataError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| DataError { line: line_no, message };
        let fields: Vec<&str> = line.split('\t').collect();
        let [curie, label, role, category] = fields[..] else {
            return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
        };
        let iri = prefixes
            .expand_curie(curie)
            .map_err(|e| err(e.to_string()))?;
        if label.trim().is_empty() {
            return Err(err(format!("empty label for {curie}")));
        }
        let role = match role {
            "class" => Role::Class,
            "predicate" => Role::Predicate,
            other => return Err(err(format!("unknown role {other:?}"))),
        };
        let category = category.parse().map_err(err)?;
        out.push(VocabularyTerm {
            curie: curie.to_owned(),
            iri,
            label: label.to_owned(),
            role,
            category,
        });
    }
    Ok(out)
}

/// First term with the given label.
pub fn lookup_label<'a>(vocabulary: &'a [VocabularyTerm], label: &str) -> Option<&'a VocabularyTerm> {
    vocabulary.iter().find(|t| t.label == label)
}

pub fn lookup_iri<'a>(vocabulary: &'a [VocabularyTerm], iri: &Iri) -> Option<&'a VocabularyTerm> {
    vocabulary.iter().find(|t| &t.iri == iri)
}
