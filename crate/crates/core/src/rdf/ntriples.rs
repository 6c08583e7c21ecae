//! N-Triples reading and canonical writing.
//!
//! Reference: <https://www.w3.org/TR/n-triples/>

use std::fmt::Write as _;

use super::{Graph, Iri, Literal, RdfError, Subject, Term, Triple};

/// Parse an N-Triples document. Blank lines and `#` comments are skipped;
/// repeated statements collapse into one triple.
pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut graph = Graph::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let mut cursor = Cursor {
            src: line,
            pos: 0,
            line: line_no,
        };
        cursor.skip_ws();
        if cursor.at_end() || cursor.peek() == Some('#') {
            continue;
        }
        let triple = cursor.triple()?;
        cursor.skip_ws();
        match cursor.peek() {
            None | Some('#') => {}
            Some(c) => return Err(cursor.error(format!("unexpected {c:?} after statement"))),
        }
        graph.insert(triple);
    }
    Ok(graph)
}

/// One line per triple, sorted by code point, each terminated with `\n`.
pub fn serialize_ntriples_canonical(graph: &Graph) -> Result<String, RdfError> {
    if let Some(label) = graph.blank_nodes().into_iter().next() {
        return Err(RdfError::BlankNodeInCanonical(label.to_string()));
    }
    let mut lines: Vec<String> = graph.iter().map(triple_to_ntriples).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub(crate) fn triple_to_ntriples(t: &Triple) -> String {
    let subject = match &t.subject {
        Subject::Iri(iri) => iri_to_ntriples(iri),
        Subject::Blank(label) => format!("_:{label}"),
    };
    format!(
        "{subject} {} {} .",
        iri_to_ntriples(&t.predicate),
        term_to_ntriples(&t.object)
    )
}

pub fn term_to_ntriples(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri_to_ntriples(iri),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => literal_to_ntriples(lit, iri_to_ntriples),
    }
}

pub(crate) fn literal_to_ntriples(lit: &Literal, datatype: impl Fn(&Iri) -> String) -> String {
    let mut out = String::with_capacity(lit.lexical().len() + 2);
    out.push('"');
    escape_string(lit.lexical(), &mut out);
    out.push('"');
    if let Some(lang) = lit.language() {
        out.push('@');
        out.push_str(lang);
    } else if let Some(dt) = lit.datatype() {
        out.push_str("^^");
        out.push_str(&datatype(dt));
    }
    out
}

pub(crate) fn iri_to_ntriples(iri: &Iri) -> String {
    let mut out = String::with_capacity(iri.as_str().len() + 2);
    out.push('<');
    for c in iri.as_str().chars() {
        match c {
            '\u{00}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('>');
    out
}

pub(crate) fn escape_string(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{00}'..='\u{1F}' | '\u{7F}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            message: format!(
                "column {}: {}",
                self.src[..self.pos].chars().count() + 1,
                message.into()
            ),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), RdfError> {
        if self.eat(expected) {
            Ok(())
        } else {
            Err(self.error(format!("expected {expected:?}")))
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn triple(&mut self) -> Result<Triple, RdfError> {
        let subject = match self.peek() {
            Some('<') => Subject::Iri(self.iri()?),
            Some('_') => Subject::Blank(self.blank()?),
            _ => return Err(self.error("expected IRI or blank node as subject")),
        };
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.error("expected IRI as predicate"));
        }
        let predicate = self.iri()?;
        self.skip_ws();
        let object = match self.peek() {
            Some('<') => Term::Iri(self.iri()?),
            Some('_') => Term::Blank(self.blank()?),
            Some('"') => Term::Literal(self.literal()?),
            _ => return Err(self.error("expected IRI, blank node or literal as object")),
        };
        self.skip_ws();
        self.expect('.')?;
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    fn iri(&mut self) -> Result<Iri, RdfError> {
        let start = self.pos;
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return Err(self.error("only \\u and \\U escapes are allowed in IRIs")),
                    };
                    value.push(c);
                }
                Some(c @ ('\u{00}'..='\u{20}' | '<' | '"' | '{' | '}' | '|' | '^' | '`')) => {
                    return Err(self.error(format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => value.push(c),
            }
        }
        Iri::new(value).map_err(|_| {
            let pos = std::mem::replace(&mut self.pos, start);
            let err = self.error(format!("relative or malformed IRI {}", &self.src[start..pos]));
            self.pos = pos;
            err
        })
    }

    fn blank(&mut self) -> Result<String, RdfError> {
        self.expect('_')?;
        self.expect(':')?;
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphanumeric() || c == '_' => {}
            _ => return Err(self.error("empty blank node label")),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}') {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        // a trailing '.' terminates the statement rather than the label
        while self.src[start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn literal(&mut self) -> Result<Literal, RdfError> {
        self.expect('"')?;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{08}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{0C}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return Err(self.error("invalid escape sequence")),
                    };
                    lexical.push(c);
                }
                Some(c @ ('\n' | '\r')) => return Err(self.error(format!("raw {c:?} in string literal"))),
                Some(c) => lexical.push(c),
            }
        }
        if self.eat('@') {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                self.pos += 1;
            }
            let tag = &self.src[start..self.pos];
            let valid = !tag.is_empty()
                && tag.split('-').all(|part| !part.is_empty())
                && tag
                    .split('-')
                    .next()
                    .unwrap()
                    .chars()
                    .all(|c| c.is_ascii_alphabetic());
            if !valid {
                return Err(self.error("malformed language tag"));
            }
            Ok(Literal::lang(lexical, tag))
        } else if self.eat('^') {
            self.expect('^')?;
            let dt = self.iri()?;
            Ok(Literal::typed(lexical, dt))
        } else {
            Ok(Literal::plain(lexical))
        }
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let start = self.pos;
        let end = start + digits;
        let hex = self
            .src
            .get(start..end)
            .filter(|h| h.chars().all(|c| c.is_ascii_hexdigit()))
            .ok_or_else(|| self.error("malformed \\u escape"))?;
        let code = u32::from_str_radix(hex, 16).map_err(|_| self.error("malformed \\u escape"))?;
        self.pos = end;
        char::from_u32(code).ok_or_else(|| self.error(format!("invalid code point U+{code:X}")))
    }
}
