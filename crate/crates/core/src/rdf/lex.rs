//! Character cursor shared by the N-Triples, Turtle and query parsers.

use super::term::{is_blank_label_char, Literal};
use super::vocab::xsd;
use super::ParseError;

pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Self {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    /// A cursor whose positions are reported relative to `line`.
    pub fn at_line(text: &str, line: usize) -> Self {
        let mut c = Cursor::new(text);
        c.line = line;
        c
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn column(&self) -> usize {
        self.column
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    /// Case-insensitive keyword match that is not followed by a name character.
    pub fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|p| p.eq_ignore_ascii_case(&c)))
            && !self
                .peek_at(n)
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':')
    }

    pub fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    /// Steps back over `n` characters on the current line.
    pub fn back(&mut self, n: usize) {
        debug_assert!(n <= self.pos && n < self.column);
        self.pos -= n;
        self.column -= n;
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{c}'")))
        }
    }

    /// Skips whitespace and `#` comments, including newlines.
    pub fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn unexpected(&self, context: &str) -> ParseError {
        match self.peek() {
            Some(c) => self.error(format!("{context}, found {c:?}")),
            None => self.error(format!("{context}, found end of input")),
        }
    }

    /// Reads an IRI reference body after the opening `<`, consuming the closing `>`.
    pub fn read_iriref(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.read_hex(4)?),
                    Some('U') => out.push(self.read_hex(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some('\n') => return Err(self.error("newline in IRI")),
                Some(c) => out.push(c),
            }
        }
    }

    fn read_hex(&mut self, digits: usize) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error("invalid hex escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.error("escape is not a Unicode scalar value"))
    }

    fn read_escape(&mut self) -> Result<char, ParseError> {
        Ok(match self.bump() {
            Some('t') => '\t',
            Some('b') => '\u{8}',
            Some('n') => '\n',
            Some('r') => '\r',
            Some('f') => '\u{c}',
            Some('"') => '"',
            Some('\'') => '\'',
            Some('\\') => '\\',
            Some('u') => self.read_hex(4)?,
            Some('U') => self.read_hex(8)?,
            _ => return Err(self.error("invalid string escape")),
        })
    }

    /// Reads a quoted string starting at the opening quote. Long (triple-quoted) strings are
    /// accepted when `allow_long` is set.
    pub fn read_string(&mut self, allow_long: bool) -> Result<String, ParseError> {
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.unexpected("expected string")),
        };
        let long = allow_long && self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        self.advance(if long { 3 } else { 1 });
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string")),
                Some(c) if c == quote => {
                    if !long {
                        self.bump();
                        return Ok(out);
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        self.advance(3);
                        return Ok(out);
                    }
                    self.bump();
                    out.push(c);
                }
                Some('\\') => {
                    self.bump();
                    out.push(self.read_escape()?);
                }
                Some('\n' | '\r') if !long => return Err(self.error("newline in string")),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    /// Reads a language tag after `@`.
    pub fn read_language(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    /// Reads a blank node label after `_:`.
    pub fn read_blank_label(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if is_blank_label_char(c) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // a trailing '.' terminates the statement rather than belonging to the label
        while out.ends_with('.') {
            out.pop();
            self.back(1);
        }
        if out.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        Ok(out)
    }

    /// Reads `prefix:local` (prefix may be empty). Local-name escapes are decoded and `%XX`
    /// sequences are kept verbatim; a trailing unescaped `.` is left for the caller.
    pub fn read_prefixed_name(&mut self) -> Result<(String, String), ParseError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if prefix.ends_with('.') || prefix.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            return Err(self.error(format!("invalid prefix {prefix:?}")));
        }
        if !self.eat(':') {
            return Err(self.unexpected(&format!("expected ':' after prefix {prefix:?}")));
        }
        let mut local = String::new();
        let mut trailing_dots = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | ':') => {
                    local.push(c);
                    trailing_dots = 0;
                    self.bump();
                }
                Some('.') if !local.is_empty() => {
                    local.push('.');
                    trailing_dots += 1;
                    self.bump();
                }
                Some('%')
                    if self.peek_at(1).is_some_and(|c| c.is_ascii_hexdigit())
                        && self.peek_at(2).is_some_and(|c| c.is_ascii_hexdigit()) =>
                {
                    for _ in 0..3 {
                        local.push(self.bump().unwrap());
                    }
                    trailing_dots = 0;
                }
                Some('\\')
                    if self.peek_at(1).is_some_and(|c| "_~.-!$&'()*+,;=/?#@%".contains(c)) =>
                {
                    self.bump();
                    local.push(self.bump().unwrap());
                    trailing_dots = 0;
                }
                _ => break,
            }
        }
        if trailing_dots > 0 {
            local.truncate(local.len() - trailing_dots);
            self.back(trailing_dots);
        }
        Ok((prefix, local))
    }

    /// Reads an unquoted number: integer, decimal (needs a digit after `.`) or double.
    pub fn read_number(&mut self) -> Result<Literal, ParseError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        let mut seen_dot = false;
        let mut seen_exp = false;
        while let Some(c) = self.peek() {
            let accept = c.is_ascii_digit()
                || (c == '.'
                    && !seen_dot
                    && !seen_exp
                    && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
                || (matches!(c, 'e' | 'E') && !seen_exp)
                || (matches!(c, '+' | '-') && text.ends_with(['e', 'E']));
            if !accept {
                break;
            }
            seen_dot |= c == '.';
            seen_exp |= matches!(c, 'e' | 'E');
            text.push(c);
            self.bump();
        }
        let datatype = if seen_exp {
            xsd::double()
        } else if seen_dot {
            xsd::decimal()
        } else {
            xsd::integer()
        };
        Literal::typed(&text, datatype).map_err(|_| self.error(format!("malformed number {text:?}")))
    }
}
