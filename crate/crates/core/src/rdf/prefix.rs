use std::collections::BTreeMap;

use thiserror::Error;

use super::iri::{Iri, IriError};
use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurieError {
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("{0:?} is not a CURIE (expected prefix:local)")]
    NotACurie(String),
    #[error(transparent)]
    Iri(#[from] IriError),
}

/// Prefix to namespace bindings. Re-binding a prefix replaces the old namespace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// rdf, rdfs, xsd, owl, rr, ncit and roo.
    pub fn standard() -> Self {
        let mut map = PrefixMap::new();
        for (prefix, ns) in [
            ("rdf", vocab::rdf::NAMESPACE),
            ("rdfs", vocab::rdfs::NAMESPACE),
            ("xsd", vocab::xsd::NAMESPACE),
            ("owl", vocab::owl::NAMESPACE),
            ("rr", vocab::rr::NAMESPACE),
            ("ncit", vocab::NCIT_NAMESPACE),
            ("roo", vocab::ROO_NAMESPACE),
        ] {
            map.insert(prefix, Iri::from_trusted(ns));
        }
        map
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: Iri) -> Option<Iri> {
        self.entries.insert(prefix.into(), namespace)
    }

    pub fn get(&self, prefix: &str) -> Option<&Iri> {
        self.entries.get(prefix)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(p, ns)| (p.as_str(), ns))
    }

    /// Adds every binding of `other`, replacing existing prefixes.
    pub fn extend(&mut self, other: &PrefixMap) {
        for (p, ns) in other.iter() {
            self.insert(p, ns.clone());
        }
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Result<Iri, CurieError> {
        let ns = self
            .get(prefix)
            .ok_or_else(|| CurieError::UnknownPrefix(prefix.to_owned()))?;
        Ok(Iri::new(format!("{}{}", ns.as_str(), local))?)
    }

    /// Expands `prefix:local`. The prefix is everything before the first colon.
    pub fn expand_curie(&self, curie: &str) -> Result<Iri, CurieError> {
        let (prefix, local) = curie
            .split_once(':')
            .ok_or_else(|| CurieError::NotACurie(curie.to_owned()))?;
        self.expand(prefix, local)
    }

    /// Shortest CURIE for `iri` among the bound namespaces, if any namespace is a prefix of it.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.as_str().starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.as_str().len())
            .map(|(p, ns)| format!("{}:{}", p, &iri.as_str()[ns.as_str().len()..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ncit() -> PrefixMap {
        let mut map = PrefixMap::new();
        map.insert("ncit", Iri::new("http://purl.obolibrary.org/obo/NCIT_").unwrap());
        map
    }

    #[test]
    fn expands_neoplasm() {
        let iri = ncit().expand_curie("ncit:C3262").unwrap();
        assert_eq!(iri.as_str(), "http://purl.obolibrary.org/obo/NCIT_C3262");
    }

    #[test]
    fn unknown_prefix() {
        assert_eq!(
            PrefixMap::new().expand_curie("roo:P100000"),
            Err(CurieError::UnknownPrefix("roo".into()))
        );
    }

    #[test]
    fn empty_local_part() {
        let mut map = PrefixMap::new();
        map.insert("ex", Iri::new("http://e.org/").unwrap());
        assert_eq!(map.expand_curie("ex:").unwrap().as_str(), "http://e.org/");
    }

    #[test]
    fn invalid_expansion() {
        let mut map = PrefixMap::new();
        map.insert("ex", Iri::new("http://e.org/").unwrap());
        assert!(matches!(
            map.expand_curie("ex:a b"),
            Err(CurieError::Iri(IriError::IllegalCharacter { position: 15, .. }))
        ));
    }

    #[test]
    fn rebinding_replaces() {
        let mut map = PrefixMap::new();
        map.insert("ex", Iri::new("http://a.org/").unwrap());
        let old = map.insert("ex", Iri::new("http://b.org/").unwrap());
        assert_eq!(old.unwrap().as_str(), "http://a.org/");
        assert_eq!(map.len(), 1);
        assert_eq!(map.expand_curie("ex:x").unwrap().as_str(), "http://b.org/x");
    }

    #[test]
    fn compacts_to_longest_namespace() {
        let map = PrefixMap::standard();
        let iri = Iri::new("http://purl.obolibrary.org/obo/NCIT_C16960").unwrap();
        assert_eq!(map.compact(&iri).as_deref(), Some("ncit:C16960"));
    }
}
