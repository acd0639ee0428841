use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::iri::Iri;
use super::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("lexical form {lexical:?} is not valid for datatype {datatype}")]
    LexicalFormMismatch { lexical: String, datatype: Iri },
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNodeLabel(String),
    #[error("literal with datatype rdf:langString requires a language tag")]
    MissingLanguageTag,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    /// Label without the `_:` prefix.
    pub fn new(label: impl AsRef<str>) -> Result<Self, TermError> {
        let label = label.as_ref();
        if is_valid_blank_label(label) {
            Ok(BlankNode(Arc::from(label)))
        } else {
            Err(TermError::InvalidBlankNodeLabel(label.to_owned()))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_blank_label_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

fn is_valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    !label.ends_with('.') && chars.all(is_blank_label_char)
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

impl fmt::Debug for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An RDF literal. Plain literals carry `xsd:string`; language-tagged literals carry
/// `rdf:langString`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn string(lexical: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: xsd::string(),
            language: None,
        }
    }

    /// A typed literal. Lexical forms of the numeric, boolean and date datatypes are checked.
    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Result<Self, TermError> {
        let lexical = lexical.as_ref();
        if datatype.as_str() == rdf::LANG_STRING {
            return Err(TermError::MissingLanguageTag);
        }
        if !lexical_form_is_valid(lexical, datatype.as_str()) {
            return Err(TermError::LexicalFormMismatch {
                lexical: lexical.to_owned(),
                datatype,
            });
        }
        Ok(Literal {
            lexical: Arc::from(lexical),
            datatype,
            language: None,
        })
    }

    pub fn lang(lexical: impl AsRef<str>, tag: impl AsRef<str>) -> Result<Self, TermError> {
        let tag = tag.as_ref();
        if !is_valid_language_tag(tag) {
            return Err(TermError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: rdf::lang_string(),
            language: Some(Arc::from(tag)),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn is_numeric(&self) -> bool {
        xsd::is_numeric(self.datatype.as_str())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        write_escaped(f, &self.lexical)?;
        f.write_str("\"")?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")
        } else if self.datatype.as_str() == xsd::STRING {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_escaped(f: &mut impl fmt::Write, text: &str) -> fmt::Result {
    for c in text.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\u{00}'..='\u{1f}' | '\u{7f}' => write!(f, "\\u{:04X}", c as u32)?,
            c => f.write_char(c)?,
        }
    }
    Ok(())
}

pub(crate) fn is_valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    (1..=8).contains(&first.len())
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

fn lexical_form_is_valid(lexical: &str, datatype: &str) -> bool {
    match datatype {
        xsd::INTEGER => is_integer(lexical),
        xsd::DECIMAL => is_decimal(lexical),
        xsd::DOUBLE | xsd::FLOAT => is_double(lexical),
        xsd::BOOLEAN => matches!(lexical, "true" | "false" | "1" | "0"),
        xsd::DATE => is_date(lexical),
        _ => true,
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_integer(s: &str) -> bool {
    all_digits(strip_sign(s))
}

fn is_decimal(s: &str) -> bool {
    let s = strip_sign(s);
    match s.split_once('.') {
        None => all_digits(s),
        Some((int, frac)) => {
            (int.is_empty() || all_digits(int))
                && (frac.is_empty() || all_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
    }
}

fn is_double(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    match s.split_once(['e', 'E']) {
        None => is_decimal(s),
        Some((mantissa, exponent)) => is_decimal(mantissa) && is_integer(exponent),
    }
}

/// `-?YYYY-MM-DD` with an optional `Z` or `(+|-)hh:mm` timezone; the day must exist.
fn is_date(s: &str) -> bool {
    if !s.is_ascii() {
        return false;
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (date, zone) = if let Some(d) = body.strip_suffix('Z') {
        (d, None)
    } else if body.len() > 6
        && matches!(body.as_bytes()[body.len() - 6], b'+' | b'-')
        && body.as_bytes()[body.len() - 3] == b':'
    {
        let (d, z) = body.split_at(body.len() - 6);
        (d, Some(z))
    } else {
        (body, None)
    };
    if let Some(z) = zone {
        let ok = all_digits(&z[1..3])
            && all_digits(&z[4..6])
            && {
                let hh: u32 = z[1..3].parse().unwrap();
                let mm: u32 = z[4..6].parse().unwrap();
                (hh < 14 && mm < 60) || (hh == 14 && mm == 0)
            };
        if !ok {
            return false;
        }
    }
    let mut parts = date.splitn(3, '-');
    let (Some(y), Some(m), Some(d)) = (parts.next(), parts.next(), parts.next()) else {
        return false;
    };
    if y.len() < 4 || (y.len() > 4 && y.starts_with('0')) || m.len() != 2 || d.len() != 2 {
        return false;
    }
    if !(all_digits(y) && all_digits(m) && all_digits(d)) {
        return false;
    }
    let Ok(year) = y.parse::<i32>() else {
        return false;
    };
    let year = if negative { -year } else { year };
    chrono::NaiveDate::from_ymd_opt(year, m.parse().unwrap(), d.parse().unwrap()).is_some()
}

/// Node in subject position: never a literal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    Iri(Iri),
    Blank(BlankNode),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// The subject form of this term, if it may appear as a subject.
    pub fn to_subject(&self) -> Option<Subject> {
        match self {
            Term::Iri(i) => Some(Subject::Iri(i.clone())),
            Term::Blank(b) => Some(Subject::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(i) => Term::Iri(i),
            Subject::Blank(b) => Term::Blank(b),
        }
    }
}

impl From<Iri> for Subject {
    fn from(i: Iri) -> Self {
        Subject::Iri(i)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::Blank(b)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(i) => i.fmt(f),
            Subject::Blank(b) => b.fmt(f),
        }
    }
}

impl fmt::Debug for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }
}

/// Canonical N-Triples line, without the trailing newline.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_escapes() {
        let lit = Literal::string("a\"b\\c\nd\te\u{1}");
        assert_eq!(lit.to_string(), r#""a\"b\\c\nd\u0009e\u0001""#);
    }

    #[test]
    fn typed_literal_forms() {
        assert!(Literal::typed("63", xsd::integer()).is_ok());
        assert!(Literal::typed("-0", xsd::integer()).is_ok());
        assert!(Literal::typed("abc", xsd::integer()).is_err());
        assert!(Literal::typed("6.3", xsd::integer()).is_err());
        assert!(Literal::typed("1.5e3", xsd::double()).is_ok());
        assert!(Literal::typed(".5", xsd::double()).is_ok());
        assert!(Literal::typed("e3", xsd::double()).is_err());
        assert!(Literal::typed("maybe", xsd::boolean()).is_err());
        assert!(Literal::typed("anything", xsd::string()).is_ok());
    }

    #[test]
    fn date_forms() {
        assert!(is_date("2020-02-29"));
        assert!(!is_date("2021-02-29"));
        assert!(!is_date("2020-02-30"));
        assert!(is_date("2020-01-31Z"));
        assert!(is_date("2020-01-31+01:00"));
        assert!(!is_date("2020-01-31+15:00"));
        assert!(!is_date("2020-1-31"));
        assert!(!is_date("20-01-31"));
        assert!(is_date("-0044-03-15"));
        assert!(!is_date(""));
    }

    #[test]
    fn lang_tags() {
        assert_eq!(Literal::lang("hallo", "nl").unwrap().to_string(), "\"hallo\"@nl");
        assert!(Literal::lang("x", "en-GB").is_ok());
        assert!(Literal::lang("x", "").is_err());
        assert!(Literal::lang("x", "e n").is_err());
        assert_eq!(
            Literal::typed("x", rdf::lang_string()),
            Err(TermError::MissingLanguageTag)
        );
    }

    #[test]
    fn blank_labels() {
        assert!(BlankNode::new("b0").is_ok());
        assert!(BlankNode::new("_x.y-z").is_ok());
        assert!(BlankNode::new("x.").is_err());
        assert!(BlankNode::new("-x").is_err());
        assert!(BlankNode::new("").is_err());
    }

    #[test]
    fn typed_literal_display() {
        let lit = Literal::typed("63", xsd::integer()).unwrap();
        assert_eq!(
            lit.to_string(),
            "\"63\"^^<http://www.w3.org/2001/XMLSchema#integer>"
        );
    }
}
