//! Turtle reader and canonical writer for a closed grammar subset.
//!
//! Supported syntax: `@prefix` directives, IRIs in angle brackets, prefixed
//! names, the `a` keyword, object lists (`,`), predicate lists (`;`), plain
//! and typed and language-tagged string literals, bare integers and decimals,
//! labelled blank nodes (`_:name`), `#` comments and the `.` terminator.
//! Anything outside that set is a parse error, never a silent no-op.
//!
//! The writer emits one fixed canonical form: prefix directives sorted by
//! label, subject blocks in canonical term order, predicates grouped with `;`
//! and objects with `,`. `parse(serialize(g))` reproduces `g` exactly, and
//! serializing twice yields byte-identical output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::store::{BlankNode, Graph, Iri, Literal, PrefixMap, StoreError, Subject, Term, Triple};
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UnboundPrefix,
    BadLiteral,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::UnboundPrefix => "unbound-prefix",
            DiagnosticKind::BadLiteral => "bad-literal",
        };
        f.write_str(name)
    }
}

/// Parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, self.kind, self.message
        )
    }
}

/// Parses a Turtle document. The first error wins: scanning stops at the
/// offending token and the returned list carries that single diagnostic.
pub fn parse(text: &str) -> Result<(PrefixMap, Graph), Vec<ParseDiagnostic>> {
    let mut parser = Parser::new(text);
    parser.document().map_err(|d| vec![d])
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: PrefixMap,
    graph: Graph,
}

type PResult<T> = Result<T, ParseDiagnostic>;

impl Parser {
    fn new(text: &str) -> Self {
        // A leading byte-order mark is tolerated and skipped.
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            prefixes: PrefixMap::new(),
            graph: Graph::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
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

    fn error(&self, kind: DiagnosticKind, message: impl Into<String>) -> ParseDiagnostic {
        self.error_at(self.line, self.column, kind, message)
    }

    fn error_at(
        &self,
        line: usize,
        column: usize,
        kind: DiagnosticKind,
        message: impl Into<String>,
    ) -> ParseDiagnostic {
        ParseDiagnostic {
            line,
            column,
            kind,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
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
                _ => break,
            }
        }
    }

    fn expect(&mut self, want: char) -> PResult<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(
                DiagnosticKind::Syntax,
                format!("expected {want:?}, found {c:?}"),
            )),
            None => Err(self.error(
                DiagnosticKind::Syntax,
                format!("expected {want:?}, found end of input"),
            )),
        }
    }

    fn document(&mut self) -> PResult<(PrefixMap, Graph)> {
        loop {
            self.skip_trivia();
            match self.peek() {
                None => break,
                Some('@') => self.directive()?,
                Some(_) => self.statement()?,
            }
        }
        Ok((std::mem::take(&mut self.prefixes), std::mem::take(&mut self.graph)))
    }

    fn directive(&mut self) -> PResult<()> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let word = self.name_chars();
        if word != "prefix" {
            return Err(self.error_at(
                line,
                column,
                DiagnosticKind::Syntax,
                format!("unsupported directive @{word}"),
            ));
        }
        self.skip_trivia();
        let label = self.name_chars();
        self.expect(':')?;
        self.skip_trivia();
        let ns = self.iriref()?;
        self.skip_trivia();
        self.expect('.')?;
        self.prefixes.bind(label, ns);
        Ok(())
    }

    fn statement(&mut self) -> PResult<()> {
        let subject = self.subject()?;
        loop {
            self.skip_trivia();
            let predicate = self.verb()?;
            loop {
                self.skip_trivia();
                let object = self.object()?;
                self.graph
                    .insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_trivia();
                match self.peek() {
                    Some(',') => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            match self.peek() {
                Some(';') => {
                    self.bump();
                    self.skip_trivia();
                    // A trailing ';' directly before the terminator is allowed.
                    if self.peek() == Some('.') {
                        self.bump();
                        return Ok(());
                    }
                }
                Some('.') => {
                    self.bump();
                    return Ok(());
                }
                Some(c) => {
                    return Err(self.error(
                        DiagnosticKind::Syntax,
                        format!("expected ',', ';' or '.', found {c:?}"),
                    ))
                }
                None => {
                    return Err(self
                        .error(DiagnosticKind::Syntax, "unexpected end of input in statement"))
                }
            }
        }
    }

    fn subject(&mut self) -> PResult<Subject> {
        match self.peek() {
            Some('<') => Ok(Subject::Iri(self.iriref()?)),
            Some('_') => Ok(Subject::Blank(self.blank_node()?)),
            Some('[') => Err(self.error(
                DiagnosticKind::Syntax,
                "blank node property lists are not supported",
            )),
            Some('(') => Err(self.error(DiagnosticKind::Syntax, "collections are not supported")),
            Some(c) if c == ':' || c.is_ascii_alphanumeric() || c == '-' => {
                Ok(Subject::Iri(self.prefixed_name()?))
            }
            Some(c) => Err(self.error(
                DiagnosticKind::Syntax,
                format!("expected subject, found {c:?}"),
            )),
            None => Err(self.error(DiagnosticKind::Syntax, "expected subject, found end of input")),
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        match self.peek() {
            Some('<') => self.iriref(),
            Some('a') if !self.name_continues_at(self.pos + 1) => {
                self.bump();
                Ok(vocab::RDF_TYPE.clone())
            }
            Some('_') => Err(self.error(
                DiagnosticKind::Syntax,
                "blank node cannot be used as predicate",
            )),
            Some(c) if c == ':' || c.is_ascii_alphanumeric() || c == '-' => {
                self.prefixed_name()
            }
            Some(c) => Err(self.error(
                DiagnosticKind::Syntax,
                format!("expected predicate, found {c:?}"),
            )),
            None => Err(self.error(
                DiagnosticKind::Syntax,
                "expected predicate, found end of input",
            )),
        }
    }

    fn name_continues_at(&self, pos: usize) -> bool {
        matches!(
            self.chars.get(pos),
            Some(c) if c.is_ascii_alphanumeric() || *c == '_' || *c == '-' || *c == ':'
        )
    }

    fn object(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') => Ok(Term::Blank(self.blank_node()?)),
            Some('"') => self.string_literal(),
            Some('\'') => Err(self.error(
                DiagnosticKind::Syntax,
                "single-quoted strings are not supported",
            )),
            Some('[') => Err(self.error(
                DiagnosticKind::Syntax,
                "blank node property lists are not supported",
            )),
            Some('(') => Err(self.error(DiagnosticKind::Syntax, "collections are not supported")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.number(),
            Some(c) if c == ':' || c.is_ascii_alphanumeric() || c == '_' => {
                Ok(Term::Iri(self.prefixed_name()?))
            }
            Some(c) => Err(self.error(
                DiagnosticKind::Syntax,
                format!("expected object, found {c:?}"),
            )),
            None => Err(self.error(DiagnosticKind::Syntax, "expected object, found end of input")),
        }
    }

    fn iriref(&mut self) -> PResult<Iri> {
        let (line, column) = (self.line, self.column);
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if c == '\n' || c == '\r' => {
                    return Err(self.error_at(
                        line,
                        column,
                        DiagnosticKind::Syntax,
                        "unterminated IRI",
                    ))
                }
                Some(c) => {
                    value.push(c);
                    self.bump();
                }
                None => {
                    return Err(self.error_at(
                        line,
                        column,
                        DiagnosticKind::Syntax,
                        "unterminated IRI",
                    ))
                }
            }
        }
        Iri::new(value).map_err(|e| {
            self.error_at(line, column, DiagnosticKind::Syntax, e.to_string())
        })
    }

    fn name_chars(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn prefixed_name(&mut self) -> PResult<Iri> {
        let (line, column) = (self.line, self.column);
        let label = self.name_chars();
        if self.peek() != Some(':') {
            return Err(self.error_at(
                line,
                column,
                DiagnosticKind::Syntax,
                format!("expected prefixed name, found bare word {label:?}"),
            ));
        }
        self.bump();
        let local = self.name_chars();
        self.prefixes
            .expand(&format!("{label}:{local}"))
            .map_err(|e| match e {
                StoreError::UnboundPrefix(p) => self.error_at(
                    line,
                    column,
                    DiagnosticKind::UnboundPrefix,
                    format!("prefix {p:?} is not bound"),
                ),
                other => self.error_at(line, column, DiagnosticKind::Syntax, other.to_string()),
            })
    }

    fn blank_node(&mut self) -> PResult<BlankNode> {
        let (line, column) = (self.line, self.column);
        self.expect('_')?;
        self.expect(':')?;
        let label = self.name_chars();
        BlankNode::new(label)
            .map_err(|e| self.error_at(line, column, DiagnosticKind::Syntax, e.to_string()))
    }

    fn string_literal(&mut self) -> PResult<Term> {
        let (line, column) = (self.line, self.column);
        self.expect('"')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    Some(c) => {
                        return Err(self.error_at(
                            line,
                            column,
                            DiagnosticKind::BadLiteral,
                            format!("unsupported escape sequence \\{c}"),
                        ))
                    }
                    None => {
                        return Err(self.error_at(
                            line,
                            column,
                            DiagnosticKind::BadLiteral,
                            "unterminated string literal",
                        ))
                    }
                },
                Some(c) if c == '\n' || c == '\r' => {
                    return Err(self.error_at(
                        line,
                        column,
                        DiagnosticKind::BadLiteral,
                        "newline in string literal",
                    ))
                }
                Some(c) => value.push(c),
                None => {
                    return Err(self.error_at(
                        line,
                        column,
                        DiagnosticKind::BadLiteral,
                        "unterminated string literal",
                    ))
                }
            }
        }
        match self.peek() {
            Some('^') => {
                self.bump();
                self.expect('^')?;
                let datatype = match self.peek() {
                    Some('<') => self.iriref()?,
                    _ => self.prefixed_name()?,
                };
                Literal::typed(value, datatype)
                    .map(Term::Literal)
                    .map_err(|e| {
                        self.error_at(line, column, DiagnosticKind::BadLiteral, e.to_string())
                    })
            }
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Literal::lang(value, tag).map(Term::Literal).map_err(|e| {
                    self.error_at(line, column, DiagnosticKind::BadLiteral, e.to_string())
                })
            }
            _ => Ok(Term::Literal(Literal::string(value))),
        }
    }

    fn number(&mut self) -> PResult<Term> {
        let (line, column) = (self.line, self.column);
        let mut lexical = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            lexical.push(self.bump().unwrap());
        }
        let int_digits = self.digits();
        if int_digits.is_empty() {
            return Err(self.error_at(
                line,
                column,
                DiagnosticKind::BadLiteral,
                "sign without digits",
            ));
        }
        lexical.push_str(&int_digits);
        // A '.' only belongs to the number when digits follow; otherwise it
        // terminates the statement.
        let is_decimal = self.peek() == Some('.')
            && matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_digit());
        if is_decimal {
            self.bump();
            lexical.push('.');
            lexical.push_str(&self.digits());
        }
        if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            return Err(self.error_at(
                line,
                column,
                DiagnosticKind::BadLiteral,
                format!("malformed number starting at {lexical:?}"),
            ));
        }
        let datatype = if is_decimal {
            vocab::XSD_DECIMAL.clone()
        } else {
            vocab::XSD_INTEGER.clone()
        };
        Literal::typed(lexical, datatype)
            .map(Term::Literal)
            .map_err(|e| self.error_at(line, column, DiagnosticKind::BadLiteral, e.to_string()))
    }

    fn digits(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }
}

/// Writes the canonical form. Output is a pure function of the graph and the
/// prefix map; all bindings in the map are emitted whether used or not.
///
/// Layout: one block per subject in canonical order; within a block `a` comes
/// first, remaining predicates follow in IRI order, objects in term order.
pub fn serialize(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        out.push_str("@prefix ");
        out.push_str(label);
        out.push_str(": <");
        out.push_str(ns.as_str());
        out.push_str("> .\n");
    }
    if !prefixes.is_empty() && !graph.is_empty() {
        out.push('\n');
    }

    let mut blocks: BTreeMap<&Subject, BTreeMap<(bool, &Iri), BTreeSet<&Term>>> = BTreeMap::new();
    for triple in graph.iter() {
        // `false` sorts before `true`, putting rdf:type ahead of the rest.
        let key = (triple.predicate != *vocab::RDF_TYPE, &triple.predicate);
        blocks
            .entry(&triple.subject)
            .or_default()
            .entry(key)
            .or_default()
            .insert(&triple.object);
    }
    for (subject, predicates) in blocks {
        out.push_str(&render_subject(subject, prefixes));
        out.push(' ');
        let mut first_predicate = true;
        for ((_, predicate), objects) in predicates {
            if !first_predicate {
                out.push_str(" ;\n    ");
            }
            first_predicate = false;
            out.push_str(&render_predicate(predicate, prefixes));
            out.push(' ');
            let rendered: Vec<String> = objects
                .iter()
                .map(|o| render_term(o, prefixes))
                .collect();
            out.push_str(&rendered.join(" , "));
        }
        out.push_str(" .\n");
    }
    out
}

fn render_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    match prefixes.compact(iri) {
        Some(pname) => pname,
        None => format!("<{iri}>"),
    }
}

fn render_subject(subject: &Subject, prefixes: &PrefixMap) -> String {
    match subject {
        Subject::Iri(iri) => render_iri(iri, prefixes),
        Subject::Blank(b) => format!("_:{}", b.label()),
    }
}

fn render_predicate(predicate: &Iri, prefixes: &PrefixMap) -> String {
    if *predicate == *vocab::RDF_TYPE {
        "a".to_string()
    } else {
        render_iri(predicate, prefixes)
    }
}

fn escape_string(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

/// Renders a term the way the canonical writer does. Also used for TSV cells
/// in query results.
pub fn render_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => render_iri(iri, prefixes),
        Term::Blank(b) => format!("_:{}", b.label()),
        Term::Literal(lit) => render_literal(lit, prefixes),
    }
}

fn render_literal(lit: &Literal, prefixes: &PrefixMap) -> String {
    let dt = lit.datatype();
    if *dt == *vocab::XSD_INTEGER {
        // Integer lexical forms are always writable bare.
        return lit.lexical().to_string();
    }
    if *dt == *vocab::XSD_DECIMAL && lit.lexical().contains('.') {
        // Bare decimals need the dot; "4"^^xsd:decimal must stay quoted or it
        // would read back as an integer.
        return lit.lexical().to_string();
    }
    let quoted = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(tag) = lit.language() {
        return format!("{quoted}@{tag}");
    }
    if *dt == *vocab::XSD_STRING {
        return quoted;
    }
    format!("{quoted}^^{}", render_iri(dt, prefixes))
}
