use std::cmp::Ordering;
use std::collections::HashSet;

use crate::rdf::vocab::xsd;
use crate::rdf::{Graph, Literal, Term, TermId};

use super::{CompareOp, FilterExpr, PatternTerm, Projection, Query, QueryError, Solution};

enum Value<'a> {
    Integer(i128),
    Float(f64),
    Date(&'a str),
}

fn value(literal: &Literal) -> Option<Value<'_>> {
    let dt = literal.datatype().as_str();
    let lexical = literal.lexical();
    if dt == xsd::INTEGER {
        match lexical.parse::<i128>() {
            Ok(i) => Some(Value::Integer(i)),
            Err(_) => lexical.parse().ok().map(Value::Float),
        }
    } else if xsd::is_numeric(dt) {
        lexical.parse().ok().map(Value::Float)
    } else if dt == xsd::DATE {
        Some(Value::Date(lexical))
    } else {
        None
    }
}

fn as_float(v: &Value) -> Option<f64> {
    match v {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        Value::Date(_) => None,
    }
}

/// Orders two terms when both are numeric literals or both are `xsd:date` literals. Integers
/// compare exactly, mixed numerics as doubles, dates by lexical form. `None` otherwise,
/// including NaN.
pub fn compare_terms(a: &Term, b: &Term) -> Option<Ordering> {
    let (a, b) = (value(a.as_literal()?)?, value(b.as_literal()?)?);
    match (&a, &b) {
        (Value::Integer(x), Value::Integer(y)) => Some(x.cmp(y)),
        (Value::Date(x), Value::Date(y)) => Some(x.cmp(y)),
        _ => as_float(&a)?.partial_cmp(&as_float(&b)?),
    }
}

fn both_numeric(a: &Term, b: &Term) -> bool {
    let numeric = |t: &Term| t.as_literal().is_some_and(Literal::is_numeric);
    numeric(a) && numeric(b)
}

fn filter_holds(value: &Term, op: CompareOp, operand: &Term) -> bool {
    match compare_terms(value, operand) {
        Some(ord) => match op {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
        },
        // NaN and unparsable numerals are unequal to everything
        None if both_numeric(value, operand) => op == CompareOp::Ne,
        None => match op {
            CompareOp::Eq => value == operand,
            CompareOp::Ne => value != operand,
            _ => false,
        },
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(TermId),
    Var(usize),
}

struct Plan<'q> {
    patterns: Vec<[Slot; 3]>,
    /// Filters to check once pattern `i` has been matched.
    filters_after: Vec<Vec<(usize, &'q FilterExpr)>>,
    variables: Vec<&'q str>,
}

/// `None` when a constant is absent from the graph or a filter variable is never bound, so
/// nothing can match.
fn plan<'q>(graph: &Graph, query: &'q Query) -> Option<Plan<'q>> {
    let mut variables: Vec<&str> = Vec::new();
    let mut bound_after: Vec<usize> = Vec::new();
    let mut patterns = Vec::with_capacity(query.patterns.len());
    for (i, tp) in query.patterns.iter().enumerate() {
        let mut slots = [Slot::Var(0); 3];
        for (slot, pt) in slots.iter_mut().zip([&tp.subject, &tp.predicate, &tp.object]) {
            *slot = match pt {
                PatternTerm::Term(t) => Slot::Const(graph.id_of(t)?),
                PatternTerm::Variable(v) => {
                    let idx = match variables.iter().position(|x| x == v) {
                        Some(idx) => idx,
                        None => {
                            variables.push(v);
                            bound_after.push(i);
                            variables.len() - 1
                        }
                    };
                    Slot::Var(idx)
                }
            };
        }
        patterns.push(slots);
    }
    let mut filters_after = vec![Vec::new(); patterns.len()];
    for f in &query.filters {
        let idx = variables.iter().position(|v| *v == f.variable)?;
        filters_after[bound_after[idx]].push((idx, f));
    }
    Some(Plan {
        patterns,
        filters_after,
        variables,
    })
}

struct Search<'a, 'q> {
    graph: &'a Graph,
    plan: &'a Plan<'q>,
    bindings: Vec<Option<TermId>>,
    visit: &'a mut dyn FnMut(&[Option<TermId>]),
}

impl Search<'_, '_> {
    fn run(&mut self, depth: usize) {
        if depth == self.plan.patterns.len() {
            (self.visit)(&self.bindings);
            return;
        }
        let slots = self.plan.patterns[depth];
        let resolve = |slot: Slot, bindings: &[Option<TermId>]| match slot {
            Slot::Const(id) => Some(id),
            Slot::Var(v) => bindings[v],
        };
        let bound = slots.map(|s| resolve(s, &self.bindings));
        let matches: Vec<(TermId, TermId, TermId)> =
            self.graph.match_ids(bound[0], bound[1], bound[2]).collect();
        'triples: for (s, p, o) in matches {
            let mut newly = Vec::with_capacity(3);
            for (slot, id) in slots.iter().zip([s, p, o]) {
                if let Slot::Var(v) = *slot {
                    match self.bindings[v] {
                        Some(existing) if existing != id => {
                            for &n in &newly {
                                self.bindings[n] = None;
                            }
                            continue 'triples;
                        }
                        Some(_) => {}
                        None => {
                            self.bindings[v] = Some(id);
                            newly.push(v);
                        }
                    }
                }
            }
            let passes = self.plan.filters_after[depth].iter().all(|(v, f)| {
                let value = self.graph.term(self.bindings[*v].expect("bound by this pattern"));
                filter_holds(value, f.op, &f.operand)
            });
            if passes {
                self.run(depth + 1);
            }
            for n in newly {
                self.bindings[n] = None;
            }
        }
    }
}

fn check_filters(query: &Query) -> Result<(), QueryError> {
    for f in &query.filters {
        let comparable = f.operand.as_literal().is_some_and(|l| value(l).is_some());
        if f.op.is_ordering() && !comparable {
            return Err(QueryError::TypeMismatch {
                op: f.op,
                operand: f.operand.clone(),
            });
        }
    }
    Ok(())
}

/// Evaluates `query` against `graph`: patterns are joined left to right, each matched through
/// the graph indexes with earlier bindings substituted.
pub fn execute(graph: &Graph, query: &Query) -> Result<Solution, QueryError> {
    check_filters(query)?;
    let plan = plan(graph, query);
    match &query.projection {
        Projection::Count(name) => {
            let mut count: u64 = 0;
            if let Some(plan) = &plan {
                let mut visit = |_: &[Option<TermId>]| count += 1;
                Search {
                    graph,
                    plan,
                    bindings: vec![None; plan.variables.len()],
                    visit: &mut visit,
                }
                .run(0);
            }
            let n = Literal::typed(count.to_string(), xsd::integer()).expect("valid integer");
            Ok(Solution {
                variables: vec![name.clone()],
                rows: vec![vec![Term::Literal(n)]],
            })
        }
        Projection::Variables(vars) => {
            let mut ids: HashSet<Vec<TermId>> = HashSet::new();
            if let Some(plan) = &plan {
                let columns: Vec<usize> = vars
                    .iter()
                    .map(|v| plan.variables.iter().position(|x| x == v).expect("projection checked at parse"))
                    .collect();
                let mut visit = |b: &[Option<TermId>]| {
                    ids.insert(columns.iter().map(|&c| b[c].expect("all variables bound")).collect());
                };
                Search {
                    graph,
                    plan,
                    bindings: vec![None; plan.variables.len()],
                    visit: &mut visit,
                }
                .run(0);
            }
            let mut rows: Vec<(Vec<String>, Vec<Term>)> = ids
                .into_iter()
                .map(|row| {
                    let terms: Vec<Term> = row.into_iter().map(|id| graph.term(id).clone()).collect();
                    (terms.iter().map(Term::to_string).collect(), terms)
                })
                .collect();
            rows.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            Ok(Solution {
                variables: vars.clone(),
                rows: rows.into_iter().map(|(_, t)| t).collect(),
            })
        }
    }
}

/// Evaluates `query` over the set union of `graphs`.
pub fn merge_and_query(graphs: &[Graph], query: &Query) -> Result<Solution, QueryError> {
    let mut union = Graph::new();
    for g in graphs {
        union.merge(g);
    }
    execute(&union, query)
}
