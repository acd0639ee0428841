use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use registry_kg::etl::{convert as run_mapping, load_csv, write_csv, ConvertError, Tables};
use registry_kg::model::{
    builtin_shapes, builtin_vocabulary, category_edge_counts, class_histogram, generate_synthetic,
    parse_shapes, validate_graph,
};
use registry_kg::query::{merge_and_query, parse_query};
use registry_kg::r2rml::parse_mapping_turtle;
use registry_kg::rdf::{parse_ntriples, parse_turtle, serialize_ntriples, Graph, PrefixMap};

pub const OK: u8 = 0;
pub const DATA_ERROR: u8 = 1;
pub const USAGE_ERROR: u8 = 2;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE_ERROR,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "ttl") {
        parse_turtle(&text, None).map(|d| d.graph)
    } else {
        parse_ntriples(&text)
    };
    parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn add_table(tables: &mut Tables, name: &str, path: &Path) -> Result<(), Failure> {
    let table = load_csv(name, &read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if tables.insert(name.to_owned(), table).is_some() {
        return Err(usage(format!("table {name:?} given more than once")));
    }
    Ok(())
}

pub fn convert(
    mapping_path: &Path,
    csv: &[std::path::PathBuf],
    named: &[String],
    output: Option<&Path>,
    strict: bool,
    report_path: Option<&Path>,
) -> Outcome {
    let mapping_name = mapping_path.display().to_string();
    let mapping = parse_mapping_turtle(&read(mapping_path)?, &mapping_name)
        .map_err(|e| usage(format!("{mapping_name}: {e}")))?;

    let mut tables = Tables::new();
    for path in csv {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| usage(format!("{}: cannot derive a table name", path.display())))?;
        add_table(&mut tables, stem, path)?;
    }
    for entry in named {
        let (name, path) = entry
            .split_once('=')
            .filter(|(n, p)| !n.is_empty() && !p.is_empty())
            .ok_or_else(|| usage(format!("--table expects NAME=PATH, got {entry:?}")))?;
        add_table(&mut tables, name, Path::new(path))?;
    }

    let (graph, report) = match run_mapping(&mapping, &tables) {
        Ok(done) => done,
        Err(ConvertError::ValidationFailed(diagnostics)) => {
            for d in &diagnostics {
                eprintln!("{d}");
            }
            return Ok(DATA_ERROR);
        }
        Err(e) => return Err(Failure { code: DATA_ERROR, message: e.to_string() }),
    };
    let ntriples = serialize_ntriples(&graph);
    match output {
        Some(path) => write(path, &ntriples)?,
        None => std::io::stdout()
            .write_all(ntriples.as_bytes())
            .map_err(|e| usage(format!("standard output: {e}")))?,
    }
    if let Some(path) = report_path {
        let mut text = report.log_lines().join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        write(path, &text)?;
    }
    eprintln!("{}", report.summary());
    if strict && !report.skipped_terms.is_empty() {
        eprintln!("error: {} term(s) skipped in strict mode", report.skipped_terms.len());
        return Ok(DATA_ERROR);
    }
    Ok(OK)
}

pub fn validate(graph_path: &Path, shapes_path: Option<&Path>) -> Outcome {
    let graph = load_graph(graph_path)?;
    let shapes = match shapes_path {
        Some(path) => parse_shapes(&read(path)?, &PrefixMap::standard())
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => builtin_shapes(),
    };
    let report = validate_graph(&graph, &shapes);
    for v in &report.violations {
        println!("{v}");
    }
    Ok(if report.conforms() { OK } else { DATA_ERROR })
}

pub fn query(graphs: &[std::path::PathBuf], file: Option<&Path>, inline: Option<&str>) -> Outcome {
    let text = match (file, inline) {
        (Some(path), _) => read(path)?,
        (None, Some(text)) => text.to_owned(),
        (None, None) => return Err(usage("one of --query or -e is required")),
    };
    let query = parse_query(&text, &PrefixMap::standard()).map_err(|e| usage(e.to_string()))?;
    let loaded = graphs.iter().map(|p| load_graph(p)).collect::<Result<Vec<_>, _>>()?;
    let solution = merge_and_query(&loaded, &query).map_err(|e| usage(e.to_string()))?;
    print!("{}", solution.to_tsv());
    Ok(OK)
}

pub fn synth(n: usize, seed: u64, out: &Path) -> Outcome {
    fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    for (name, table) in generate_synthetic(n, seed) {
        write(&out.join(format!("{name}.csv")), &write_csv(&table))?;
    }
    Ok(OK)
}

pub fn stats(graph_path: &Path) -> Outcome {
    let graph = load_graph(graph_path)?;
    let prefixes = PrefixMap::standard();
    println!("triples\t{}", graph.len());
    for (class, n) in class_histogram(&graph) {
        let name = prefixes.compact(&class).unwrap_or_else(|| class.to_string());
        println!("class\t{name}\t{n}");
    }
    let counts: BTreeMap<_, _> = category_edge_counts(&graph, &builtin_vocabulary());
    for (category, n) in counts {
        println!("category\t{category}\t{n}");
    }
    Ok(OK)
}
