//! Parser for the Turtle subset the engine reads and writes.
//!
//! Supported: `@prefix` / `PREFIX`, prefixed names, absolute IRIs, `a`,
//! predicate-object lists (`;`), object lists (`,`), labeled blank nodes,
//! anonymous blank nodes nested at most two levels deep, plain, typed and
//! language-tagged literals, bare integers/decimals/booleans, and comments.
//! Collections, quoted triples, `@base` and relative IRIs are rejected with
//! [`TurtleError::Unsupported`].

use std::collections::HashMap;

use thiserror::Error;

use super::{Graph, Iri, Literal, Term, Triple};
use crate::ns;

const MAX_ANON_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TurtleError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported Turtle feature at {line}:{column}: {feature}")]
    Unsupported {
        line: usize,
        column: usize,
        feature: String,
    },
}

impl TurtleError {
    /// 1-based (line, column) of the error.
    pub fn position(&self) -> (usize, usize) {
        match self {
            TurtleError::Syntax { line, column, .. } | TurtleError::Unsupported { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

/// Parse a Turtle document. Blank nodes are relabeled `b0`, `b1`, ... in
/// order of first appearance.
pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        graph: Graph::empty(),
        blank_labels: HashMap::new(),
        next_blank: 0,
        anon_depth: 0,
    };
    parser.document()?;
    Ok(parser.graph)
}

enum Name {
    Prefixed(Iri),
    Bare(String),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    graph: Graph,
    blank_labels: HashMap<String, String>,
    next_blank: usize,
    anon_depth: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{B7}'
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '<' | '[' | ']' | '(' | ')' | '"' | '\'' | ';' | ',' | '.' | '#')
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn looking_at(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn bump(&mut self) -> Option<char> {
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

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, TurtleError> {
        Err(TurtleError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn unsupported<T>(&self, feature: &str) -> Result<T, TurtleError> {
        Err(TurtleError::Unsupported {
            line: self.line,
            column: self.column,
            feature: feature.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => self.syntax(format!("expected '{c}', found '{found}'")),
            None => self.syntax(format!("expected '{c}', found end of input")),
        }
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> Result<(), TurtleError> {
        if self.looking_at("@prefix") {
            self.advance(7);
            self.prefix_body()?;
            return self.expect('.');
        }
        if self.looking_at("@base") {
            return self.unsupported("@base");
        }
        if self.keyword_ahead("PREFIX") {
            self.advance(6);
            return self.prefix_body();
        }
        if self.keyword_ahead("BASE") {
            return self.unsupported("BASE");
        }
        if self.peek() == Some('@') {
            return self.syntax("unknown directive");
        }
        self.triples()?;
        self.expect('.')
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    /// Case-insensitive SPARQL-style keyword followed by whitespace.
    fn keyword_ahead(&self, kw: &str) -> bool {
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|x| x.eq_ignore_ascii_case(&c)))
            && self.peek_at(kw.len()).is_some_and(char::is_whitespace)
    }

    fn prefix_body(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let label = self.prefix_label()?;
        if self.peek() != Some(':') {
            return self.syntax("expected ':' after prefix label");
        }
        self.bump();
        self.skip_ws();
        if self.peek() != Some('<') {
            return self.syntax("expected namespace IRI");
        }
        let namespace = self.iri_ref()?;
        self.graph.set_prefix(&label, namespace);
        Ok(())
    }

    fn prefix_label(&mut self) -> Result<String, TurtleError> {
        let mut label = String::new();
        if let Some(c) = self.peek() {
            if c == ':' {
                return Ok(label);
            }
            if !c.is_alphabetic() {
                return self.syntax(format!("invalid prefix label start '{c}'"));
            }
        }
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(|n| is_name_char(n) || n == '.')) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(label)
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                let subject = self.anon_blank()?;
                self.skip_ws();
                if !matches!(self.peek(), Some('.') | None) {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            Some('(') => self.unsupported("RDF collection"),
            Some('<') if self.peek_at(1) == Some('<') => self.unsupported("quoted triple"),
            Some('{') => self.unsupported("graph block"),
            Some('"') | Some('\'') => self.syntax("a literal cannot be a subject"),
            Some(_) => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.labeled_blank(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                self.syntax("a literal cannot be a subject")
            }
            Some(_) => match self.name_token()? {
                Name::Prefixed(iri) => Ok(Term::Iri(iri)),
                Name::Bare(_) => self.syntax("expected subject"),
            },
            None => self.syntax("unexpected end of input"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, TurtleError> {
        match self.peek() {
            Some('<') if self.peek_at(1) == Some('<') => self.unsupported("quoted triple"),
            Some('<') => self.iri_ref(),
            Some('a') if self.peek_at(1).is_none_or(is_delimiter) => {
                self.bump();
                Ok(super::iri(ns::RDF_TYPE))
            }
            Some(c) if c == ':' || c.is_alphabetic() => match self.name_token()? {
                Name::Prefixed(iri) => Ok(iri),
                Name::Bare(_) => self.syntax("expected predicate"),
            },
            Some('[') | Some('_') => self.syntax("a blank node cannot be a predicate"),
            Some(c) => self.syntax(format!("expected predicate, found '{c}'")),
            None => self.syntax("expected predicate, found end of input"),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            let object = self.object()?;
            let triple = Triple::new(subject.clone(), predicate.clone(), object)
                .expect("subjects are never literals here");
            self.graph.insert(triple);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') if self.peek_at(1) == Some('<') => self.unsupported("quoted triple"),
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.labeled_blank(),
            Some('[') => self.anon_blank(),
            Some('(') => self.unsupported("RDF collection"),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(),
            Some(c) if c == ':' || c.is_alphabetic() => {
                let start = (self.line, self.column);
                match self.name_token()? {
                    Name::Prefixed(iri) => Ok(Term::Iri(iri)),
                    Name::Bare(word) if word == "true" || word == "false" => {
                        Ok(Term::Literal(Literal::boolean(word == "true")))
                    }
                    Name::Bare(word) => Err(TurtleError::Syntax {
                        line: start.0,
                        column: start.1,
                        message: format!("unexpected bare word '{word}'"),
                    }),
                }
            }
            Some(c) => self.syntax(format!("expected object, found '{c}'")),
            None => self.syntax("expected object, found end of input"),
        }
    }

    /// Reads a prefixed name, or a bare word such as `true`.
    fn name_token(&mut self) -> Result<Name, TurtleError> {
        let start = (self.line, self.column);
        let prefix = self.prefix_label()?;
        if self.peek() != Some(':') {
            if prefix.is_empty() {
                return self.syntax("expected name");
            }
            return Ok(Name::Bare(prefix));
        }
        self.bump();
        let local = self.local_name()?;
        let Some(namespace) = self.graph.prefixes().get(&prefix) else {
            return Err(TurtleError::Syntax {
                line: start.0,
                column: start.1,
                message: format!("undefined prefix '{prefix}:'"),
            });
        };
        let full = format!("{namespace}{local}");
        match Iri::new(full) {
            Ok(iri) => Ok(Name::Prefixed(iri)),
            Err(e) => Err(TurtleError::Syntax {
                line: start.0,
                column: start.1,
                message: e.to_string(),
            }),
        }
    }

    fn local_name(&mut self) -> Result<String, TurtleError> {
        let mut local = String::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let plain = is_name_char(c) || c == ':' || (first && c.is_ascii_digit());
            let inner_dot = c == '.' && !first && self.peek_at(1).is_some_and(|n| is_name_char(n) || n == ':' || n == '.');
            if plain || inner_dot {
                local.push(c);
                self.bump();
            } else if c == '%' {
                let (h1, h2) = (self.peek_at(1), self.peek_at(2));
                if !(h1.is_some_and(|h| h.is_ascii_hexdigit()) && h2.is_some_and(|h| h.is_ascii_hexdigit())) {
                    return self.syntax("invalid percent escape in local name");
                }
                for _ in 0..3 {
                    local.push(self.bump().unwrap_or_default());
                }
            } else if c == '\\' {
                match self.peek_at(1) {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => {
                        self.bump();
                        self.bump();
                        local.push(e);
                    }
                    _ => return self.syntax("invalid escape in local name"),
                }
            } else {
                break;
            }
            first = false;
        }
        Ok(local)
    }

    fn iri_ref(&mut self) -> Result<Iri, TurtleError> {
        let start = (self.line, self.column);
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') => {
                    return self.syntax(format!("invalid character {c:?} in IRI"));
                }
                Some(c) => value.push(c),
                None => return self.syntax("unterminated IRI"),
            }
        }
        match Iri::new(value) {
            Ok(iri) => Ok(iri),
            Err(e) if e.reason == "missing scheme" || e.reason == "empty" => Err(TurtleError::Unsupported {
                line: start.0,
                column: start.1,
                feature: "relative IRI reference".into(),
            }),
            Err(e) => Err(TurtleError::Syntax {
                line: start.0,
                column: start.1,
                message: e.to_string(),
            }),
        }
    }

    fn fresh_blank(&mut self) -> String {
        let label = format!("b{}", self.next_blank);
        self.next_blank += 1;
        label
    }

    fn labeled_blank(&mut self) -> Result<Term, TurtleError> {
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            let plain = is_name_char(c) || (label.is_empty() && c.is_ascii_digit());
            let inner_dot = c == '.' && !label.is_empty() && self.peek_at(1).is_some_and(is_name_char);
            if plain || inner_dot {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return self.syntax("empty blank node label");
        }
        let fresh = match self.blank_labels.get(&label) {
            Some(existing) => existing.clone(),
            None => {
                let fresh = self.fresh_blank();
                self.blank_labels.insert(label, fresh.clone());
                fresh
            }
        };
        Ok(Term::BlankNode(fresh))
    }

    fn anon_blank(&mut self) -> Result<Term, TurtleError> {
        if self.anon_depth == MAX_ANON_DEPTH {
            return self.unsupported("blank node property lists nested deeper than 2");
        }
        self.bump();
        let node = Term::BlankNode(self.fresh_blank());
        self.skip_ws();
        if self.peek() != Some(']') {
            self.anon_depth += 1;
            let result = self.predicate_object_list(&node);
            self.anon_depth -= 1;
            result?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn literal(&mut self) -> Result<Term, TurtleError> {
        let quote = self.peek().unwrap_or('"');
        let long = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let lexical = if long { self.long_string(quote)? } else { self.short_string(quote)? };
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphabetic() || (c.is_ascii_digit() || c == '-') && !tag.is_empty() {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() || tag.ends_with('-') {
                    return self.syntax("invalid language tag");
                }
                Ok(Term::Literal(Literal::lang(lexical, &tag)))
            }
            Some('^') => {
                self.bump();
                if self.peek() != Some('^') {
                    return self.syntax("expected '^^'");
                }
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    _ => match self.name_token()? {
                        Name::Prefixed(iri) => iri,
                        Name::Bare(_) => return self.syntax("expected datatype IRI"),
                    },
                };
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn short_string(&mut self, quote: char) -> Result<String, TurtleError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('\n') | Some('\r') => return self.syntax("unterminated string literal"),
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(out);
                }
                Some('\\') => out.push(self.escape()?),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn long_string(&mut self, quote: char) -> Result<String, TurtleError> {
        self.advance(3);
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.syntax("unterminated long string literal"),
                Some(c) if c == quote && self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) => {
                    // """a"""" ends with the last three quotes
                    if self.peek_at(3) == Some(quote) {
                        self.bump();
                        out.push(quote);
                        continue;
                    }
                    self.advance(3);
                    return Ok(out);
                }
                Some('\\') => out.push(self.escape()?),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn escape(&mut self) -> Result<char, TurtleError> {
        self.bump();
        let c = match self.bump() {
            Some('t') => '\t',
            Some('b') => '\u{8}',
            Some('n') => '\n',
            Some('r') => '\r',
            Some('f') => '\u{c}',
            Some('"') => '"',
            Some('\'') => '\'',
            Some('\\') => '\\',
            Some('u') => self.hex_escape(4)?,
            Some('U') => self.hex_escape(8)?,
            _ => return self.syntax("invalid escape sequence"),
        };
        Ok(c)
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, TurtleError> {
        let mut value = 0u32;
        for _ in 0..digits {
            match self.peek().and_then(|c| c.to_digit(16)) {
                Some(d) => {
                    self.bump();
                    value = value * 16 + d;
                }
                None => return self.syntax("invalid unicode escape"),
            }
        }
        match char::from_u32(value) {
            Some(c) => Ok(c),
            None => self.syntax("unicode escape is not a scalar value"),
        }
    }

    fn number(&mut self) -> Result<Term, TurtleError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        let mut datatype = ns::XSD_INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            datatype = ns::XSD_DECIMAL;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return self.unsupported("double literal");
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return self.syntax("malformed numeric literal");
        }
        Ok(Term::Literal(Literal::typed(text, super::iri(datatype))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iri;

    fn ex(local: &str) -> Term {
        Term::Iri(iri(format!("http://ex.org/{local}")))
    }

    #[test]
    fn smallest_document() {
        let g = parse_turtle("@prefix ex: <http://ex.org/> . ex:s a ex:C .").unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject(), &ex("s"));
        assert_eq!(t.predicate().as_str(), ns::RDF_TYPE);
        assert_eq!(t.object(), &ex("C"));
    }

    #[test]
    fn empty_document() {
        let g = parse_turtle("").unwrap();
        assert!(g.is_empty());
        assert!(g.prefixes().is_empty());
        assert!(parse_turtle("  # only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn sparql_prefix_and_literals() {
        let g = parse_turtle(
            "PREFIX ex: <http://ex.org/>\n\
             ex:s ex:p \"hi\"@EN-gb, 'x', \"\"\"multi\nline\"\"\", \"5\"^^<http://www.w3.org/2001/XMLSchema#integer>, 5, -2.50, true .",
        )
        .unwrap();
        assert_eq!(g.len(), 6, "typed \"5\" and bare 5 are the same term");
        let objs: Vec<_> = g.iter().filter_map(|t| t.object().as_literal()).collect();
        assert!(objs.iter().any(|l| l.language() == Some("en-gb")));
        assert!(objs.iter().any(|l| l.lexical() == "multi\nline"));
        assert!(objs.iter().any(|l| l.lexical() == "-2.50" && l.datatype().as_str() == ns::XSD_DECIMAL));
        assert!(objs.iter().any(|l| l.as_bool() == Some(true)));
    }

    #[test]
    fn escapes() {
        let g = parse_turtle(r#"<http://ex.org/s> <http://ex.org/p> "a\"b\\c\né" ."#).unwrap();
        let l = g.iter().next().unwrap().object().as_literal().unwrap().clone();
        assert_eq!(l.lexical(), "a\"b\\c\né");
    }

    #[test]
    fn local_names_with_dashes_and_trailing_dot() {
        let g = parse_turtle(
            "@prefix eu-gdpr: <https://w3id.org/dpv/legal/eu/gdpr#> .\n\
             eu-gdpr:A6-1-a eu-gdpr:p eu-gdpr:A7-3.",
        )
        .unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject().as_iri().unwrap().local_name(), "A6-1-a");
        assert_eq!(t.object().as_iri().unwrap().local_name(), "A7-3");
    }

    #[test]
    fn blank_node_relabeling_is_document_ordered() {
        let g = parse_turtle(
            "@prefix ex: <http://ex.org/> .\n\
             _:zz ex:p [ ex:q _:aa ] .",
        )
        .unwrap();
        let labels: Vec<_> = g.blank_nodes().into_iter().collect();
        assert_eq!(labels, vec!["b0", "b1", "b2"]);
        assert_eq!(g.matching(Some(&Term::blank("b1")), None, Some(&Term::blank("b2"))).len(), 1);
    }

    #[test]
    fn blank_subject_property_list() {
        let g = parse_turtle("@prefix ex: <http://ex.org/> . [ ex:p ex:o ] ex:q ex:r . [] ex:z ex:y .").unwrap();
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn nesting_depth() {
        let two = "@prefix ex: <http://ex.org/> . ex:s ex:p [ ex:q [ ex:r ex:o ] ] .";
        assert_eq!(parse_turtle(two).unwrap().len(), 3);
        let three = "@prefix ex: <http://ex.org/> . ex:s ex:p [ ex:q [ ex:r [ ex:t ex:o ] ] ] .";
        assert!(matches!(parse_turtle(three), Err(TurtleError::Unsupported { .. })));
    }

    #[test]
    fn unsupported_features() {
        for doc in [
            "@prefix ex: <http://ex.org/> . ex:s ex:p ( ex:a ex:b ) .",
            "@prefix ex: <http://ex.org/> . << ex:s ex:p ex:o >> ex:q ex:r .",
            "@base <http://ex.org/> .",
            "<s> <http://ex.org/p> <http://ex.org/o> .",
            "<http://ex.org/s> <http://ex.org/p> 1e5 .",
        ] {
            assert!(matches!(parse_turtle(doc), Err(TurtleError::Unsupported { .. })), "{doc}");
        }
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = parse_turtle("@prefix ex: <http://ex.org/> .\nex:s ex:p ex:o").unwrap_err();
        assert!(matches!(err, TurtleError::Syntax { line: 2, .. }), "{err}");
        let err = parse_turtle("@prefix ex: <http://ex.org/> .\n  nope:s ex:p ex:o .").unwrap_err();
        assert_eq!(err.position(), (2, 3));
        assert!(parse_turtle("\"lit\" <http://ex.org/p> <http://ex.org/o> .").is_err());
        assert!(parse_turtle("<http://ex.org/s> <http://ex.org/p> \"open .").is_err());
        assert!(parse_turtle("<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> ; ; .").is_ok());
        assert!(parse_turtle("<http://ex.org/s> _:p <http://ex.org/o> .").is_err());
        assert!(parse_turtle("<http://ex.org/s> <http://ex.org/p> maybe .").is_err());
    }
}
