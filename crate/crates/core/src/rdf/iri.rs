use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IriError {
    #[error("relative IRI <{0}>: no scheme")]
    RelativeIri(String),
    /// `position` is the 1-based character position of the offending character.
    #[error("illegal character {character:?} at offset {position} in IRI <{iri}>")]
    IllegalCharacter {
        iri: String,
        position: usize,
        character: char,
    },
}

/// An absolute IRI. The text is kept exactly as given.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(text: impl AsRef<str>) -> Result<Self, IriError> {
        let text = text.as_ref();
        validate(text)?;
        Ok(Iri(Arc::from(text)))
    }

    /// Builds an IRI from text known to be valid (vocabulary constants).
    pub(crate) fn from_trusted(text: &str) -> Self {
        debug_assert!(validate(text).is_ok(), "invalid trusted IRI {text}");
        Iri(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn is_forbidden(c: char) -> bool {
    matches!(c, '\u{00}'..='\u{20}' | '\u{7f}'..='\u{9f}')
        || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`')
}

fn validate(text: &str) -> Result<(), IriError> {
    let chars: Vec<char> = text.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let bad_percent = c == '%'
            && !(chars.get(i + 1).is_some_and(|d| d.is_ascii_hexdigit())
                && chars.get(i + 2).is_some_and(|d| d.is_ascii_hexdigit()));
        if is_forbidden(c) || bad_percent {
            return Err(IriError::IllegalCharacter {
                iri: text.to_owned(),
                position: i + 1,
                character: c,
            });
        }
    }
    if has_scheme(text) {
        Ok(())
    } else {
        Err(IriError::RelativeIri(text.to_owned()))
    }
}

/// `scheme ":"` where scheme is `ALPHA *( ALPHA / DIGIT / "+" / "-" / "." )`.
pub(crate) fn has_scheme(text: &str) -> bool {
    let Some(colon) = text.find(':') else {
        return false;
    };
    let scheme = &text[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

/// Resolves `reference` against `base` following RFC 3986 section 5.2 (without normalization
/// beyond dot-segment removal).
pub(crate) fn resolve(base: &str, reference: &str) -> String {
    if has_scheme(reference) {
        return reference.to_owned();
    }
    let (b_scheme, b_authority, b_path, b_query) = split(base);
    let (_, r_authority, r_path, r_query) = split(reference);
    let r_fragment = reference.find('#').map(|i| &reference[i..]).unwrap_or("");

    let (authority, path, query);
    if r_authority.is_some() {
        authority = r_authority;
        path = remove_dot_segments(r_path);
        query = r_query;
    } else if r_path.is_empty() {
        authority = b_authority;
        path = b_path.to_owned();
        query = if r_query.is_some() { r_query } else { b_query };
    } else {
        authority = b_authority;
        path = if r_path.starts_with('/') {
            remove_dot_segments(r_path)
        } else {
            let merged = if b_authority.is_some() && b_path.is_empty() {
                format!("/{r_path}")
            } else {
                match b_path.rfind('/') {
                    Some(i) => format!("{}{}", &b_path[..=i], r_path),
                    None => r_path.to_owned(),
                }
            };
            remove_dot_segments(&merged)
        };
        query = r_query;
    }

    let mut out = String::new();
    if let Some(s) = b_scheme {
        out.push_str(s);
        out.push(':');
    }
    if let Some(a) = authority {
        out.push_str("//");
        out.push_str(a);
    }
    out.push_str(&path);
    if let Some(q) = query {
        out.push('?');
        out.push_str(q);
    }
    out.push_str(r_fragment);
    out
}

type Parts<'a> = (Option<&'a str>, Option<&'a str>, &'a str, Option<&'a str>);

fn split(iri: &str) -> Parts<'_> {
    let without_fragment = iri.split('#').next().unwrap_or("");
    let (scheme, rest) = if has_scheme(without_fragment) {
        let i = without_fragment.find(':').unwrap();
        (Some(&without_fragment[..i]), &without_fragment[i + 1..])
    } else {
        (None, without_fragment)
    };
    let (rest, query) = match rest.find('?') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    if let Some(after) = rest.strip_prefix("//") {
        let end = after.find('/').unwrap_or(after.len());
        (scheme, Some(&after[..end]), &after[end..], query)
    } else {
        (scheme, None, rest, query)
    }
}

fn remove_dot_segments(path: &str) -> String {
    let mut input = path;
    let mut output: Vec<&str> = Vec::new();
    let absolute = path.starts_with('/');
    let trailing = path.ends_with("/.")
        || path.ends_with("/..")
        || path.ends_with('/')
        || path == "."
        || path == "..";
    if absolute {
        input = &input[1..];
    }
    for segment in input.split('/') {
        match segment {
            "." => {}
            ".." => {
                output.pop();
            }
            s => output.push(s),
        }
    }
    let mut out = String::new();
    if absolute {
        out.push('/');
    }
    out.push_str(&output.join("/"));
    if trailing && !out.ends_with('/') && !output.is_empty() {
        out.push('/');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_absolute_iri_verbatim() {
        let iri = Iri::new("http://purl.obolibrary.org/obo/NCIT_C3262").unwrap();
        assert_eq!(iri.as_str(), "http://purl.obolibrary.org/obo/NCIT_C3262");
    }

    #[test]
    fn rejects_relative() {
        assert_eq!(
            Iri::new("patient/7"),
            Err(IriError::RelativeIri("patient/7".into()))
        );
    }

    #[test]
    fn reports_space_position() {
        match Iri::new("http://e.org/a b") {
            Err(IriError::IllegalCharacter {
                position,
                character,
                ..
            }) => {
                assert_eq!(position, 15);
                assert_eq!(character, ' ');
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn percent_must_be_followed_by_hex() {
        assert!(Iri::new("http://e.org/a%20b").is_ok());
        assert!(matches!(
            Iri::new("http://e.org/a%2"),
            Err(IriError::IllegalCharacter { position: 15, .. })
        ));
    }

    #[test]
    fn unicode_is_allowed() {
        assert!(Iri::new("http://e.org/Ünïcode/患者").is_ok());
    }

    #[test]
    fn resolves_references() {
        let base = "http://a/b/c/d;p?q";
        assert_eq!(resolve(base, "g"), "http://a/b/c/g");
        assert_eq!(resolve(base, "./g"), "http://a/b/c/g");
        assert_eq!(resolve(base, "g/"), "http://a/b/c/g/");
        assert_eq!(resolve(base, "/g"), "http://a/g");
        assert_eq!(resolve(base, "//g"), "http://g");
        assert_eq!(resolve(base, "?y"), "http://a/b/c/d;p?y");
        assert_eq!(resolve(base, "#s"), "http://a/b/c/d;p?q#s");
        assert_eq!(resolve(base, "../g"), "http://a/b/g");
        assert_eq!(resolve(base, "../.."), "http://a/");
        assert_eq!(resolve(base, ""), "http://a/b/c/d;p?q");
        assert_eq!(resolve("http://e.org/", "ns#"), "http://e.org/ns#");
    }
}
