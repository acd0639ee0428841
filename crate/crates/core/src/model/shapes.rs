use std::fmt;

use crate::rdf::vocab::rdf;
use crate::rdf::{Graph, Iri, PrefixMap, Subject, Term, Triple};

use super::DataError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    /// The object must itself be typed with this class.
    IriOfClass(Iri),
    /// The object must be a literal of this datatype.
    Literal(Iri),
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectKind::IriOfClass(c) => write!(f, "instance of {c}"),
            ObjectKind::Literal(d) => write!(f, "literal of {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub predicate: Iri,
    pub kind: ObjectKind,
    pub min: usize,
    /// `None` is unbounded.
    pub max: Option<usize>,
}

impl Constraint {
    fn range(&self) -> String {
        match self.max {
            Some(max) => format!("{}..{}", self.min, max),
            None => format!("{}..*", self.min),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub target_class: Iri,
    pub constraints: Vec<Constraint>,
}

/// Reads `class TAB predicate TAB kind TAB min TAB max` lines, where kind is `class:<curie>` or
/// `literal:<curie>` and max may be `*`. Lines for the same class are grouped into one shape, in
/// order of first appearance.
pub fn parse_shapes(text: &str, prefixes: &PrefixMap) -> Result<Vec<Shape>, DataError> {
    let mut shapes: Vec<Shape> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| DataError { line: line_no, message };
        let fields: Vec<&str> = line.split('\t').collect();
        let [class, predicate, kind, min, max] = fields[..] else {
            return Err(err(format!("expected 5 tab-separated fields, found {}", fields.len())));
        };
        let expand = |curie: &str| prefixes.expand_curie(curie).map_err(|e| err(e.to_string()));
        let kind = if let Some(c) = kind.strip_prefix("class:") {
            ObjectKind::IriOfClass(expand(c)?)
        } else if let Some(d) = kind.strip_prefix("literal:") {
            ObjectKind::Literal(expand(d)?)
        } else {
            return Err(err(format!("unknown object kind {kind:?}")));
        };
        let min: usize = min.parse().map_err(|_| err(format!("bad minimum {min:?}")))?;
        let max = match max {
            "*" => None,
            m => Some(m.parse::<usize>().map_err(|_| err(format!("bad maximum {m:?}")))?),
        };
        if max.is_some_and(|m| m < min) {
            return Err(err(format!("minimum {min} exceeds maximum")));
        }
        let constraint = Constraint {
            predicate: expand(predicate)?,
            kind,
            min,
            max,
        };
        let target_class = expand(class)?;
        match shapes.iter_mut().find(|s| s.target_class == target_class) {
            Some(shape) => shape.constraints.push(constraint),
            None => shapes.push(Shape {
                target_class,
                constraints: vec![constraint],
            }),
        }
    }
    Ok(shapes)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observed {
    /// Number of matching edges, outside the allowed range.
    Count(usize),
    /// An object of the wrong kind.
    Term(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub focus: Subject,
    pub shape: Iri,
    pub constraint: Constraint,
    pub observed: Observed,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: ", self.focus, self.shape, self.constraint.predicate)?;
        match &self.observed {
            Observed::Count(n) => write!(
                f,
                "expected {} edge(s), found {n}",
                self.constraint.range()
            ),
            Observed::Term(t) => write!(f, "object {t} is not an {}", self.constraint.kind),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn conforms(&self) -> bool {
        self.violations.is_empty()
    }
}

fn object_matches(graph: &Graph, object: &Term, kind: &ObjectKind) -> bool {
    match kind {
        ObjectKind::IriOfClass(class) => object.to_subject().is_some_and(|s| {
            graph.contains(&Triple::new(s, rdf::type_(), class.clone()))
        }),
        ObjectKind::Literal(datatype) => object
            .as_literal()
            .is_some_and(|l| l.datatype() == datatype),
    }
}

/// Checks every typed focus node against its shapes. One violation per failed cardinality and
/// one per object of the wrong kind.
pub fn validate_graph(graph: &Graph, shapes: &[Shape]) -> ValidationReport {
    let rdf_type = rdf::type_();
    let mut violations = Vec::new();
    for shape in shapes {
        let target = Term::Iri(shape.target_class.clone());
        for typing in graph.match_pattern(None, Some(&rdf_type), Some(&target)) {
            let focus = typing.subject;
            for constraint in &shape.constraints {
                let edges = graph.match_pattern(Some(&focus), Some(&constraint.predicate), None);
                let count = edges.len();
                if count < constraint.min || constraint.max.is_some_and(|m| count > m) {
                    violations.push(Violation {
                        focus: focus.clone(),
                        shape: shape.target_class.clone(),
                        constraint: constraint.clone(),
                        observed: Observed::Count(count),
                    });
                }
                for edge in edges {
                    if !object_matches(graph, &edge.object, &constraint.kind) {
                        violations.push(Violation {
                            focus: focus.clone(),
                            shape: shape.target_class.clone(),
                            constraint: constraint.clone(),
                            observed: Observed::Term(edge.object),
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}
