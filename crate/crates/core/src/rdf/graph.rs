use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::iri::Iri;
use super::term::{Subject, Term, Triple};

pub(crate) type TermId = u32;

/// An in-memory triple set with subject, predicate and object indexes.
///
/// Terms are interned; each triple is stored in three orderings (SPO, POS, OSP) so any
/// combination of bound positions is answered by a range scan.
#[derive(Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: BTreeSet<(TermId, TermId, TermId)>,
    pos: BTreeSet<(TermId, TermId, TermId)>,
    osp: BTreeSet<(TermId, TermId, TermId)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: Term) -> TermId {
        if let Some(&id) = self.ids.get(&term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term, id);
        id
    }

    /// Inserts `triple`; returns true iff it was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let s = self.intern(triple.subject.into());
        let p = self.intern(Term::Iri(triple.predicate));
        let o = self.intern(triple.object);
        if !self.spo.insert((s, p, o)) {
            return false;
        }
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    /// Removes `triple`; returns true iff it was present. Interned terms are kept.
    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) = (
            self.id_of(&triple.subject.clone().into()),
            self.id_of(&Term::Iri(triple.predicate.clone())),
            self.id_of(&triple.object),
        ) else {
            return false;
        };
        if !self.spo.remove(&(s, p, o)) {
            return false;
        }
        self.pos.remove(&(p, o, s));
        self.osp.remove(&(o, s, p));
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.id_of(&triple.subject.clone().into()),
            self.id_of(&Term::Iri(triple.predicate.clone())),
            self.id_of(&triple.object),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    /// Inserts every triple of `other`; returns the number of new triples.
    pub fn merge(&mut self, other: &Graph) -> usize {
        other.iter().filter(|t| self.insert(t.clone())).count()
    }

    /// All triples, in index order (not canonical order).
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&ids| self.triple_of(ids))
    }

    /// Triples matching every bound position, in canonical N-Triples order.
    pub fn match_pattern(
        &self,
        subject: Option<&Subject>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let lookup = |t: Option<Term>| match t {
            None => Some(None),
            Some(t) => self.id_of(&t).map(Some),
        };
        let (Some(s), Some(p), Some(o)) = (
            lookup(subject.cloned().map(Term::from)),
            lookup(predicate.cloned().map(Term::Iri)),
            lookup(object.cloned()),
        ) else {
            return Vec::new();
        };
        let mut found: Vec<Triple> = self
            .match_ids(s, p, o)
            .map(|ids| self.triple_of(ids))
            .collect();
        sort_canonical(&mut found);
        found
    }

    /// Canonical N-Triples lines of the graph, sorted.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.iter().map(|t| t.to_string()).collect();
        lines.sort_unstable();
        lines
    }

    pub(crate) fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    fn triple_of(&self, (s, p, o): (TermId, TermId, TermId)) -> Triple {
        let subject = self.term(s).to_subject().expect("subject position holds a node");
        let Term::Iri(predicate) = self.term(p).clone() else {
            unreachable!("predicate position holds an IRI")
        };
        Triple {
            subject,
            predicate,
            object: self.term(o).clone(),
        }
    }

    /// Matches over term ids, yielding `(s, p, o)` in index order.
    pub(crate) fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = (TermId, TermId, TermId)> + '_> {
        const MAX: TermId = TermId::MAX;
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                Box::new(self.spo.get(&(s, p, o)).copied().into_iter())
            }
            (Some(s), Some(p), None) => Box::new(self.spo.range((s, p, 0)..=(s, p, MAX)).copied()),
            (Some(s), None, Some(o)) => Box::new(
                self.osp
                    .range((o, s, 0)..=(o, s, MAX))
                    .map(|&(o, s, p)| (s, p, o)),
            ),
            (Some(s), None, None) => Box::new(self.spo.range((s, 0, 0)..=(s, MAX, MAX)).copied()),
            (None, Some(p), Some(o)) => Box::new(
                self.pos
                    .range((p, o, 0)..=(p, o, MAX))
                    .map(|&(p, o, s)| (s, p, o)),
            ),
            (None, Some(p), None) => Box::new(
                self.pos
                    .range((p, 0, 0)..=(p, MAX, MAX))
                    .map(|&(p, o, s)| (s, p, o)),
            ),
            (None, None, Some(o)) => Box::new(
                self.osp
                    .range((o, 0, 0)..=(o, MAX, MAX))
                    .map(|&(o, s, p)| (s, p, o)),
            ),
            (None, None, None) => Box::new(self.spo.iter().copied()),
        }
    }
}

fn sort_canonical(triples: &mut [Triple]) {
    triples.sort_by_cached_key(|t| t.to_string());
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t))
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.canonical_lines()).finish()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Iri, Literal};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e.org/{s}")).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o))
    }

    #[test]
    fn set_semantics() {
        let mut g = Graph::new();
        assert!(g.insert(t("patient1", "hasDisease", "Neoplasm")));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(t("patient1", "hasDisease", "Neoplasm")));
        assert_eq!(g.len(), 1);
        assert!(g.insert(t("patient1", "hasDisease", "C4323-other")));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn match_by_position() {
        let g: Graph = [
            t("a", "p", "b"),
            t("a", "q", "c"),
            t("b", "p", "c"),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.match_pattern(None, None, None).len(), 3);
        let a = Subject::Iri(iri("a"));
        assert_eq!(g.match_pattern(Some(&a), None, None).len(), 2);
        assert_eq!(g.match_pattern(None, Some(&iri("p")), None).len(), 2);
        let c = Term::Iri(iri("c"));
        assert_eq!(g.match_pattern(Some(&a), None, Some(&c)), vec![t("a", "q", "c")]);
        assert!(g
            .match_pattern(None, Some(&iri("unknown")), None)
            .is_empty());
    }

    #[test]
    fn match_is_canonically_sorted() {
        let g: Graph = [t("z", "p", "a"), t("a", "p", "z"), t("m", "p", "m")]
            .into_iter()
            .collect();
        let lines: Vec<String> = g
            .match_pattern(None, Some(&iri("p")), None)
            .iter()
            .map(|t| t.to_string())
            .collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn remove_and_reinsert() {
        let mut g = Graph::new();
        let triple = Triple::new(iri("s"), iri("p"), Literal::string("x"));
        g.insert(triple.clone());
        assert!(g.remove(&triple));
        assert!(!g.remove(&triple));
        assert!(g.is_empty());
        assert!(g.match_pattern(Some(&Subject::Iri(iri("s"))), None, None).is_empty());
        assert!(g.insert(triple));
    }

    #[test]
    fn equality_ignores_insertion_order() {
        let a: Graph = [t("a", "p", "b"), t("b", "p", "c")].into_iter().collect();
        let b: Graph = [t("b", "p", "c"), t("a", "p", "b")].into_iter().collect();
        assert_eq!(a, b);
    }
}
