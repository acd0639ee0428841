#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use registry_kg::etl::{convert, load_csv, ConversionReport, Tables};
use registry_kg::r2rml::parse_mapping_turtle;
use registry_kg::rdf::{parse_ntriples, Graph};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Fixture directories under `fixtures/r2rml`, sorted by name.
pub fn r2rml_fixtures() -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(fixtures_dir().join("r2rml"))
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    dirs
}

/// Every `*.csv` in `dir`, named after the file stem.
pub fn load_tables(dir: &Path) -> Tables {
    let mut tables = Tables::new();
    for entry in fs::read_dir(dir).expect("fixture directory") {
        let path = entry.expect("entry").path();
        if path.extension().is_some_and(|e| e == "csv") {
            let name = path.file_stem().unwrap().to_str().unwrap().to_owned();
            let text = fs::read_to_string(&path).unwrap();
            tables.insert(name.clone(), load_csv(&name, &text).unwrap());
        }
    }
    tables
}

pub struct FixtureRun {
    pub actual: Graph,
    pub expected: Graph,
    pub report: ConversionReport,
}

pub fn run_fixture(dir: &Path) -> Result<FixtureRun, String> {
    let mapping_text = fs::read_to_string(dir.join("mapping.ttl")).map_err(|e| e.to_string())?;
    let mapping = parse_mapping_turtle(&mapping_text, "mapping.ttl").map_err(|e| e.to_string())?;
    let (actual, report) = convert(&mapping, &load_tables(dir)).map_err(|e| format!("{e:?}"))?;
    let expected_text = fs::read_to_string(dir.join("expected.nt")).map_err(|e| e.to_string())?;
    let expected = parse_ntriples(&expected_text).map_err(|e| e.to_string())?;
    Ok(FixtureRun { actual, expected, report })
}

/// Lines present in one graph only, prefixed with `-` (expected) or `+` (actual).
pub fn graph_diff(expected: &Graph, actual: &Graph) -> String {
    let mut out = String::new();
    for t in expected.iter().filter(|t| !actual.contains(t)) {
        out.push_str(&format!("- {t}\n"));
    }
    for t in actual.iter().filter(|t| !expected.contains(t)) {
        out.push_str(&format!("+ {t}\n"));
    }
    out
}

pub mod gen {
    use rand::seq::{IndexedRandom, SliceRandom};
    use rand::Rng;

    use registry_kg::query::{CompareOp, FilterExpr, PatternTerm, Projection, Query, TriplePattern};
    use registry_kg::rdf::vocab::xsd;
    use registry_kg::rdf::{BlankNode, Graph, Iri, Literal, Subject, Term, Triple};

    const TEXT_CHARS: &[char] = &[
        'a', 'b', 'z', 'A', '0', '9', ' ', '.', ',', '"', '\\', '\n', '\r', '\t', '\u{1}', '\u{1f}',
        '\u{7f}', '\u{85}', 'é', 'ß', '字', '😀', '\u{fffd}', '<', '>', '@', '^', '#', '_',
    ];
    const IRI_CHARS: &[char] = &[
        'a', 'q', 'Z', '3', '-', '_', '~', '.', '/', '#', '?', '=', '&', ':', 'é', '字', '%',
    ];

    fn text(rng: &mut impl Rng, max: usize) -> String {
        (0..rng.random_range(0..=max)).map(|_| *TEXT_CHARS.choose(rng).unwrap()).collect()
    }

    pub fn iri(rng: &mut impl Rng) -> Iri {
        let mut local = String::new();
        for _ in 0..rng.random_range(0..8) {
            match *IRI_CHARS.choose(rng).unwrap() {
                '%' => local.push_str("%4F"),
                c => local.push(c),
            }
        }
        Iri::new(format!("http://ex.org/{local}")).unwrap()
    }

    pub fn blank(rng: &mut impl Rng) -> BlankNode {
        BlankNode::new(format!("b{}", rng.random_range(0..50))).unwrap()
    }

    pub fn literal(rng: &mut impl Rng) -> Literal {
        match rng.random_range(0..5) {
            0 => Literal::string(text(rng, 12)),
            1 => Literal::lang(text(rng, 6), *["en", "nl-BE", "fr"].choose(rng).unwrap()).unwrap(),
            2 => Literal::typed(rng.random_range(-1000..1000i64).to_string(), xsd::integer()).unwrap(),
            3 => Literal::typed(text(rng, 6), iri(rng)).unwrap(),
            _ => Literal::typed(format!("20{:02}-0{}-1{}", rng.random_range(0..30), rng.random_range(1..10), rng.random_range(0..10)), xsd::date()).unwrap(),
        }
    }

    pub fn triple(rng: &mut impl Rng) -> Triple {
        let subject: Subject = if rng.random_bool(0.2) { blank(rng).into() } else { iri(rng).into() };
        let object: Term = match rng.random_range(0..3) {
            0 => iri(rng).into(),
            1 => blank(rng).into(),
            _ => literal(rng).into(),
        };
        Triple::new(subject, iri(rng), object)
    }

    /// Up to `max` fuzzed triples, blank nodes included.
    pub fn fuzzed_graph(rng: &mut impl Rng, max: usize) -> Graph {
        let n = rng.random_range(0..=max);
        (0..n).map(|_| triple(rng)).collect()
    }

    /// Small term pools so that brute-force enumeration stays cheap.
    pub struct Pools {
        pub subjects: Vec<Term>,
        pub predicates: Vec<Term>,
        pub objects: Vec<Term>,
    }

    impl Pools {
        pub fn new() -> Self {
            let ex = |s: String| Term::Iri(Iri::new(format!("http://ex.org/{s}")).unwrap());
            let subjects: Vec<Term> = (0..6).map(|i| ex(format!("s{i}"))).collect();
            let predicates: Vec<Term> = (0..4).map(|i| ex(format!("p{i}"))).collect();
            let mut objects = subjects.clone();
            objects.extend((0..5).map(|i| Term::Literal(Literal::typed(i.to_string(), xsd::integer()).unwrap())));
            objects.push(Term::Literal(Literal::string("x")));
            objects.push(Term::Literal(Literal::string("y")));
            Pools { subjects, predicates, objects }
        }
    }

    pub fn pooled_graph(rng: &mut impl Rng, pools: &Pools, max: usize) -> Graph {
        let n = rng.random_range(0..=max);
        (0..n)
            .map(|_| {
                Triple::new(
                    pools.subjects.choose(rng).unwrap().to_subject().unwrap(),
                    pools.predicates.choose(rng).unwrap().as_iri().unwrap().clone(),
                    pools.objects.choose(rng).unwrap().clone(),
                )
            })
            .collect()
    }

    const VARS: [&str; 3] = ["a", "b", "c"];

    fn slot(rng: &mut impl Rng, pool: &[Term]) -> PatternTerm {
        if rng.random_bool(0.55) {
            PatternTerm::Variable(VARS.choose(rng).unwrap().to_string())
        } else {
            PatternTerm::Term(pool.choose(rng).unwrap().clone())
        }
    }

    /// 1 to 3 patterns over at most three variables, at most one integer filter.
    pub fn query(rng: &mut impl Rng, pools: &Pools) -> Query {
        loop {
            let patterns: Vec<TriplePattern> = (0..rng.random_range(1..=3))
                .map(|_| TriplePattern {
                    subject: slot(rng, &pools.subjects),
                    predicate: slot(rng, &pools.predicates),
                    object: slot(rng, &pools.objects),
                })
                .collect();
            let mut used: Vec<String> = patterns.iter().flat_map(|p| p.variables().map(str::to_owned)).collect();
            used.sort();
            used.dedup();
            if used.is_empty() {
                continue;
            }
            let filters = if rng.random_bool(0.4) {
                let op = *[CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge]
                    .choose(rng)
                    .unwrap();
                vec![FilterExpr {
                    variable: used.choose(rng).unwrap().clone(),
                    op,
                    operand: Term::Literal(Literal::typed(rng.random_range(0..5).to_string(), xsd::integer()).unwrap()),
                }]
            } else {
                Vec::new()
            };
            let projection = if rng.random_bool(0.2) {
                Projection::Count("n".into())
            } else {
                let mut vars = used.clone();
                vars.shuffle(rng);
                vars.truncate(rng.random_range(1..=vars.len()));
                Projection::Variables(vars)
            };
            return Query { distinct: false, projection, patterns, filters };
        }
    }
}

pub mod oracle {
    use std::collections::{BTreeMap, BTreeSet};

    use registry_kg::query::{CompareOp, PatternTerm, Projection, Query};
    use registry_kg::rdf::vocab::xsd;
    use registry_kg::rdf::{Graph, Term, Triple};

    fn integer(t: &Term) -> Option<i128> {
        let l = t.as_literal()?;
        (l.datatype().as_str() == xsd::INTEGER).then(|| l.lexical().parse().ok())?
    }

    /// Integer-operand filters only: compares integers, else plain term (in)equality.
    fn holds(value: &Term, op: CompareOp, operand: &Term) -> bool {
        match (integer(value), integer(operand)) {
            (Some(a), Some(b)) => match op {
                CompareOp::Eq => a == b,
                CompareOp::Ne => a != b,
                CompareOp::Lt => a < b,
                CompareOp::Le => a <= b,
                CompareOp::Gt => a > b,
                CompareOp::Ge => a >= b,
            },
            _ => match op {
                CompareOp::Eq => value == operand,
                CompareOp::Ne => value != operand,
                _ => false,
            },
        }
    }

    /// Tries every assignment of graph terms to the query variables.
    /// Returns projected rows (as N-Triples strings) and the full assignment count.
    pub fn brute_force(graph: &Graph, query: &Query) -> (BTreeSet<Vec<String>>, usize) {
        let mut universe: BTreeSet<Term> = BTreeSet::new();
        for t in graph.iter() {
            universe.insert(t.subject.clone().into());
            universe.insert(Term::Iri(t.predicate.clone()));
            universe.insert(t.object.clone());
        }
        let universe: Vec<Term> = universe.into_iter().collect();
        let mut vars: Vec<String> = query.patterns.iter().flat_map(|p| p.variables().map(str::to_owned)).collect();
        vars.sort();
        vars.dedup();

        let mut rows = BTreeSet::new();
        let mut count = 0;
        let total = universe.len().pow(vars.len() as u32);
        for mut code in 0..total {
            let mut assignment: BTreeMap<&str, &Term> = BTreeMap::new();
            for v in &vars {
                assignment.insert(v, &universe[code % universe.len()]);
                code /= universe.len();
            }
            let resolve = |p: &PatternTerm| match p {
                PatternTerm::Variable(v) => assignment[v.as_str()].clone(),
                PatternTerm::Term(t) => t.clone(),
            };
            let all_present = query.patterns.iter().all(|p| {
                let (s, pr, o) = (resolve(&p.subject), resolve(&p.predicate), resolve(&p.object));
                match (s.to_subject(), pr.as_iri()) {
                    (Some(s), Some(pr)) => graph.contains(&Triple::new(s, pr.clone(), o)),
                    _ => false,
                }
            });
            if !all_present {
                continue;
            }
            if !query.filters.iter().all(|f| holds(assignment[f.variable.as_str()], f.op, &f.operand)) {
                continue;
            }
            count += 1;
            if let Projection::Variables(projected) = &query.projection {
                rows.insert(projected.iter().map(|v| assignment[v.as_str()].to_string()).collect());
            }
        }
        (rows, count)
    }
}
