//! RFC 4180 reading and writing that keeps NULL (unquoted empty) apart from empty text (`""`).

use thiserror::Error;

use super::{Cell, Row, TableSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsvError {
    #[error("missing header row")]
    MissingHeader,
    #[error("empty column name at position {0}")]
    EmptyHeader(usize),
    #[error("duplicate column name {0:?}")]
    DuplicateHeader(String),
    /// `row` counts data rows from 1; the header is not counted.
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unterminated quoted field starting on line {0}")]
    UnterminatedQuote(usize),
    #[error("unexpected character after closing quote on line {0}")]
    TrailingAfterQuote(usize),
}

struct Record {
    cells: Vec<Cell>,
    /// A physical line with no characters at all.
    blank: bool,
}

fn records(text: &str) -> Result<Vec<Record>, CsvError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    let mut cells = Vec::new();
    let mut field = String::new();
    let mut record_has_content = false;

    loop {
        // start of a field
        let mut quoted = false;
        if chars.peek() == Some(&'"') {
            chars.next();
            quoted = true;
            record_has_content = true;
            let start_line = line;
            loop {
                match chars.next() {
                    None => return Err(CsvError::UnterminatedQuote(start_line)),
                    Some('"') if chars.peek() == Some(&'"') => {
                        chars.next();
                        field.push('"');
                    }
                    Some('"') => break,
                    Some(c) => {
                        if c == '\n' {
                            line += 1;
                        }
                        field.push(c);
                    }
                }
            }
        }
        // rest of the field up to a delimiter
        let end = loop {
            match chars.next() {
                None => break None,
                Some(',') => break Some(','),
                Some('\n') => break Some('\n'),
                Some('\r') if chars.peek() == Some(&'\n') => {
                    chars.next();
                    break Some('\n');
                }
                Some(_) if quoted => return Err(CsvError::TrailingAfterQuote(line)),
                Some(c) => {
                    record_has_content = true;
                    field.push(c);
                }
            }
        };
        let cell = if quoted || !field.is_empty() {
            Cell::Text(std::mem::take(&mut field))
        } else {
            Cell::Null
        };
        cells.push(cell);
        match end {
            Some(',') => record_has_content = true,
            Some(_) => {
                line += 1;
                out.push(Record {
                    blank: !record_has_content,
                    cells: std::mem::take(&mut cells),
                });
                record_has_content = false;
                if chars.peek().is_none() {
                    return Ok(out);
                }
            }
            None => {
                if record_has_content {
                    out.push(Record {
                        blank: false,
                        cells,
                    });
                }
                return Ok(out);
            }
        }
    }
}

/// Parses CSV text. The first record is the header; blank lines are skipped.
pub fn load_csv(name: &str, text: &str) -> Result<TableSource, CsvError> {
    let mut records = records(text)?.into_iter().filter(|r| !r.blank);
    let header = records.next().ok_or(CsvError::MissingHeader)?;
    let columns = header
        .cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| match c {
            Cell::Text(t) if !t.is_empty() => Ok(t),
            _ => Err(CsvError::EmptyHeader(i + 1)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = records.map(|r| Row::new(r.cells)).collect();
    TableSource::new(name, columns, rows)
}

fn write_field(out: &mut String, cell: &Cell) {
    match cell {
        Cell::Null => {}
        Cell::Text(t) => {
            if t.is_empty() || t.contains([',', '"', '\n', '\r']) {
                out.push('"');
                out.push_str(&t.replace('"', "\"\""));
                out.push('"');
            } else {
                out.push_str(t);
            }
        }
    }
}

/// Writes the table as CSV with `\n` line endings. NULL cells are written as empty fields and
/// empty text as `""`, so `load_csv` reads the table back unchanged.
pub fn write_csv(table: &TableSource) -> String {
    let mut out = String::new();
    let header: Vec<Cell> = table.columns().iter().map(|c| Cell::Text(c.clone())).collect();
    for (i, cell) in header.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_field(&mut out, cell);
    }
    out.push('\n');
    for row in table.rows() {
        for (i, cell) in row.cells().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_field(&mut out, cell);
        }
        out.push('\n');
    }
    out
}
