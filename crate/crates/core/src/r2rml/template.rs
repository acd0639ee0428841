use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("unbalanced braces in template {0:?}")]
    UnbalancedBraces(String),
    #[error("empty column name in template {0:?}")]
    EmptyColumnName(String),
    #[error("template {0:?} references no column")]
    NoColumnReference(String),
    #[error("dangling escape in template {0:?}")]
    DanglingEscape(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Text(String),
    Column(String),
}

/// A parsed `rr:template` string: literal text interleaved with `{column}` references.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    segments: Vec<Segment>,
}

impl Template {
    /// Parses a template. `\{`, `\}` and `\\` are escapes for literal characters, both in
    /// text and inside column references.
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut segments = Vec::new();
        let mut current = String::new();
        let mut in_column = false;
        let mut chars = text.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(e) => current.push(e),
                    None => return Err(TemplateError::DanglingEscape(text.to_owned())),
                },
                '{' if in_column => return Err(TemplateError::UnbalancedBraces(text.to_owned())),
                '{' => {
                    if !current.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut current)));
                    }
                    in_column = true;
                }
                '}' if !in_column => {
                    return Err(TemplateError::UnbalancedBraces(text.to_owned()))
                }
                '}' => {
                    if current.is_empty() {
                        return Err(TemplateError::EmptyColumnName(text.to_owned()));
                    }
                    segments.push(Segment::Column(std::mem::take(&mut current)));
                    in_column = false;
                }
                c => current.push(c),
            }
        }
        if in_column {
            return Err(TemplateError::UnbalancedBraces(text.to_owned()));
        }
        if !current.is_empty() {
            segments.push(Segment::Text(current));
        }
        if !segments.iter().any(|s| matches!(s, Segment::Column(_))) {
            return Err(TemplateError::NoColumnReference(text.to_owned()));
        }
        Ok(Template { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Rewrites every column name with `f`.
    pub(crate) fn map_columns(mut self, f: impl Fn(&str) -> String) -> Self {
        for segment in &mut self.segments {
            if let Segment::Column(c) = segment {
                *c = f(c);
            }
        }
        self
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Column(c) => Some(c.as_str()),
            Segment::Text(_) => None,
        })
    }
}

fn write_escaped(f: &mut fmt::Formatter<'_>, text: &str) -> fmt::Result {
    for c in text.chars() {
        if matches!(c, '{' | '}' | '\\') {
            f.write_str("\\")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Renders the template back to `rr:template` syntax, re-escaping braces and backslashes.
impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for segment in &self.segments {
            match segment {
                Segment::Text(t) => write_escaped(f, t)?,
                Segment::Column(c) => {
                    f.write_str("{")?;
                    write_escaped(f, c)?;
                    f.write_str("}")?;
                }
            }
        }
        Ok(())
    }
}
