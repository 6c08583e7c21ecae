//! Minimal Turtle reader for the subset the writer produces: prefixes,
//! predicate and object lists, `a`, blank labels and literals.

use std::collections::BTreeMap;

use oac_core::rdf::{Graph, Iri, Literal, Subject, Term, Triple};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Prefix,
    IriRef(String),
    PName(String, String),
    A,
    Blank(String),
    Lit(String, Option<String>, Option<Box<Tok>>),
    Semi,
    Comma,
    Dot,
}

fn unescape(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> char {
    match chars.next().unwrap() {
        't' => '\t',
        'n' => '\n',
        'r' => '\r',
        '"' => '"',
        '\\' => '\\',
        'u' => hex(chars, 4),
        'U' => hex(chars, 8),
        c => panic!("unknown escape \\{c}"),
    }
}

fn hex(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, n: usize) -> char {
    let digits: String = (0..n).map(|_| chars.next().unwrap()).collect();
    char::from_u32(u32::from_str_radix(&digits, 16).unwrap()).unwrap()
}

fn name(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> String {
    let mut s = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':') {
            s.push(c);
            chars.next();
        } else {
            break;
        }
    }
    // a trailing dot terminates the statement
    while s.ends_with('.') {
        s.pop();
    }
    s
}

fn tokenize(text: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\n' | '\t' => {
                chars.next();
            }
            ';' => {
                chars.next();
                out.push(Tok::Semi);
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma);
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot);
            }
            '@' => {
                chars.next();
                assert_eq!(name(&mut chars), "prefix");
                out.push(Tok::Prefix);
            }
            '<' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next().unwrap() {
                        '>' => break,
                        '\\' => s.push(unescape(&mut chars)),
                        c => s.push(c),
                    }
                }
                out.push(Tok::IriRef(s));
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next().unwrap() {
                        '"' => break,
                        '\\' => s.push(unescape(&mut chars)),
                        c => s.push(c),
                    }
                }
                let mut lang = None;
                let mut dt = None;
                if chars.peek() == Some(&'@') {
                    chars.next();
                    lang = Some(name(&mut chars));
                } else if chars.peek() == Some(&'^') {
                    chars.next();
                    chars.next();
                    let rest: String = chars.clone().collect();
                    let tok = tokenize_one(&rest);
                    let consumed = tok.1;
                    for _ in 0..consumed {
                        chars.next();
                    }
                    dt = Some(Box::new(tok.0));
                }
                out.push(Tok::Lit(s, lang, dt));
            }
            '_' => {
                chars.next();
                chars.next();
                out.push(Tok::Blank(name(&mut chars)));
            }
            _ => {
                let n = name(&mut chars);
                if n == "a" {
                    out.push(Tok::A);
                } else {
                    let (p, l) = n.split_once(':').unwrap();
                    out.push(Tok::PName(p.into(), l.into()));
                }
            }
        }
    }
    out
}

/// First IRI token of `text` and the number of chars it spans.
fn tokenize_one(text: &str) -> (Tok, usize) {
    if let Some(rest) = text.strip_prefix('<') {
        let end = rest.find('>').unwrap();
        let inner = &rest[..end];
        let mut chars = inner.chars().peekable();
        let mut s = String::new();
        while let Some(c) = chars.next() {
            if c == '\\' {
                s.push(unescape(&mut chars));
            } else {
                s.push(c);
            }
        }
        (Tok::IriRef(s), inner.chars().count() + 2)
    } else {
        let mut chars = text.chars().peekable();
        let n = name(&mut chars);
        let (p, l) = n.split_once(':').unwrap();
        (Tok::PName(p.into(), l.into()), n.chars().count())
    }
}

pub fn read_turtle(text: &str) -> Graph {
    let toks = tokenize(text);
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let resolve = |t: &Tok, prefixes: &BTreeMap<String, String>| -> Iri {
        match t {
            Tok::IriRef(s) => Iri::new(s.clone()).unwrap(),
            Tok::PName(p, l) => Iri::new(format!("{}{l}", prefixes[p])).unwrap(),
            Tok::A => oac_core::vocab::rdf::type_(),
            other => panic!("expected IRI, got {other:?}"),
        }
    };
    let mut g = Graph::new();
    let mut i = 0;
    while i < toks.len() {
        if toks[i] == Tok::Prefix {
            let Tok::PName(p, _) = &toks[i + 1] else { panic!() };
            let Tok::IriRef(ns) = &toks[i + 2] else { panic!() };
            prefixes.insert(p.clone(), ns.clone());
            assert_eq!(toks[i + 3], Tok::Dot);
            i += 4;
            continue;
        }
        let subject = match &toks[i] {
            Tok::Blank(l) => Subject::Blank(l.clone()),
            t => Subject::Iri(resolve(t, &prefixes)),
        };
        i += 1;
        loop {
            let predicate = resolve(&toks[i], &prefixes);
            i += 1;
            loop {
                let object = match &toks[i] {
                    Tok::Blank(l) => Term::Blank(l.clone()),
                    Tok::Lit(s, Some(lang), _) => Term::Literal(Literal::lang(s.clone(), lang.clone())),
                    Tok::Lit(s, None, Some(dt)) => {
                        Term::Literal(Literal::typed(s.clone(), resolve(dt, &prefixes)))
                    }
                    Tok::Lit(s, None, None) => Term::Literal(Literal::plain(s.clone())),
                    t => Term::Iri(resolve(t, &prefixes)),
                };
                g.insert(Triple::new(subject.clone(), predicate.clone(), object));
                i += 1;
                if toks[i] == Tok::Comma {
                    i += 1;
                } else {
                    break;
                }
            }
            match toks[i] {
                Tok::Semi => i += 1,
                Tok::Dot => {
                    i += 1;
                    break;
                }
                ref t => panic!("unexpected {t:?}"),
            }
        }
    }
    g
}
