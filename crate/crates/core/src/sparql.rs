//! A small SPARQL SELECT engine over the in-memory graph.
//!
//! Supported grammar: PREFIX declarations, SELECT with an explicit variable
//! list and optional DISTINCT, a WHERE block of triple patterns (with `a`,
//! `;` and `,` abbreviations) and FILTER comparisons, ORDER BY over
//! variables (ascending), and LIMIT. Anything else is rejected up front
//! with a positioned error. Evaluation is deterministic: without ORDER BY,
//! rows come out in canonical order of the full binding tuple.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::store::{Graph, Iri, Literal, PrefixMap, Subject, Term, Triple};
use crate::turtle::render_term;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unsupported construct: {construct}")]
    Unsupported {
        line: usize,
        column: usize,
        construct: String,
    },
    #[error("line {line}, column {column}: unbound prefix '{label}'")]
    UnboundPrefix {
        line: usize,
        column: usize,
        label: String,
    },
}

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Iri(Iri),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Constant(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterCond {
    pub left: Operand,
    pub op: CompareOp,
    pub right: Operand,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    /// Prefixes in scope: the caller's base map plus the query's own.
    pub prefixes: PrefixMap,
    pub distinct: bool,
    /// Projected variables, in SELECT order, without the leading '?'.
    pub variables: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterCond>,
    /// ORDER BY variables, ascending, applied left to right.
    pub order_by: Vec<String>,
    pub limit: Option<usize>,
}

/// A solution table. Cells are None when a projected variable was never
/// bound by the patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    parse_query_with(text, &PrefixMap::new())
}

/// Parses with pre-bound prefixes; declarations inside the query shadow them.
pub fn parse_query_with(text: &str, base: &PrefixMap) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    QueryParser {
        tokens,
        pos: 0,
        prefixes: base.clone(),
    }
    .query()
}

// Tokenizer.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    IriRef(String),
    PName(String, String),
    Var(String),
    Str(String),
    Int(String),
    Dec(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Semi,
    Comma,
    Star,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_ahead(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
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

    fn error(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    /// True when the characters from `pos` form `<...>` with no whitespace
    /// or quote before the closing angle, i.e. an IRI reference rather than
    /// a less-than operator.
    fn at_iri_ref(&self) -> bool {
        let mut i = self.pos + 1;
        while let Some(&c) = self.chars.get(i) {
            match c {
                '>' => return true,
                c if c.is_whitespace() => return false,
                '<' | '"' | '{' | '}' | '|' | '^' | '`' => return false,
                _ => i += 1,
            }
        }
        false
    }

    fn take_name(&mut self) -> String {
        let mut s = String::new();
        while self.peek().is_some_and(name_char) {
            s.push(self.bump().unwrap());
        }
        s
    }

    fn string_body(&mut self) -> Result<String, QueryError> {
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some('"') => return Ok(value),
                Some('\\') => match self.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    other => {
                        return Err(self.error(format!(
                            "unsupported escape '\\{}'",
                            other.map(String::from).unwrap_or_default()
                        )))
                    }
                },
                Some('\n') => return Err(self.error("newline inside string literal")),
                Some(c) => value.push(c),
            }
        }
    }

    fn number(&mut self) -> Result<Tok, QueryError> {
        let mut s = String::new();
        if matches!(self.peek(), Some('+') | Some('-')) {
            s.push(self.bump().unwrap());
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        // A dot only belongs to the number when a digit follows it.
        if self.peek() == Some('.') && self.peek_ahead(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(self.bump().unwrap());
            }
            Ok(Tok::Dec(s))
        } else {
            Ok(Tok::Int(s))
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, QueryError> {
    let mut lx = Lexer {
        chars: text.strip_prefix('\u{feff}').unwrap_or(text).chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while lx.peek().is_some_and(|c| c.is_whitespace()) {
            lx.bump();
        }
        if lx.peek() == Some('#') {
            while lx.peek().is_some_and(|c| c != '\n') {
                lx.bump();
            }
            continue;
        }
        let (line, column) = (lx.line, lx.column);
        let Some(c) = lx.peek() else { break };
        let tok = match c {
            '{' => {
                lx.bump();
                Tok::LBrace
            }
            '}' => {
                lx.bump();
                Tok::RBrace
            }
            '(' => {
                lx.bump();
                Tok::LParen
            }
            ')' => {
                lx.bump();
                Tok::RParen
            }
            '.' => {
                lx.bump();
                Tok::Dot
            }
            ';' => {
                lx.bump();
                Tok::Semi
            }
            ',' => {
                lx.bump();
                Tok::Comma
            }
            '*' => {
                lx.bump();
                Tok::Star
            }
            '=' => {
                lx.bump();
                Tok::Eq
            }
            '!' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Ne
                } else {
                    return Err(lx.error("expected '=' after '!'"));
                }
            }
            '>' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '<' => {
                if lx.at_iri_ref() {
                    lx.bump();
                    let mut iri = String::new();
                    while lx.peek() != Some('>') {
                        iri.push(lx.bump().unwrap());
                    }
                    lx.bump();
                    Tok::IriRef(iri)
                } else {
                    lx.bump();
                    if lx.peek() == Some('=') {
                        lx.bump();
                        Tok::Le
                    } else {
                        Tok::Lt
                    }
                }
            }
            '?' | '$' => {
                lx.bump();
                let name = lx.take_name();
                if name.is_empty() {
                    return Err(lx.error("expected a variable name after '?'"));
                }
                Tok::Var(name)
            }
            '"' => {
                lx.bump();
                Tok::Str(lx.string_body()?)
            }
            c if c.is_ascii_digit() || c == '+' || c == '-' => lx.number()?,
            c if name_char(c) || c == ':' => {
                let label = lx.take_name();
                if lx.peek() == Some(':') {
                    lx.bump();
                    let local = lx.take_name();
                    Tok::PName(label, local)
                } else if label.is_empty() {
                    return Err(lx.error(format!("unexpected character '{c}'")));
                } else {
                    Tok::Word(label)
                }
            }
            c => return Err(lx.error(format!("unexpected character '{c}'"))),
        };
        out.push(Spanned { tok, line, column });
    }
    Ok(out)
}

// Parser.

/// Keywords outside the supported subset, rejected by name.
const UNSUPPORTED: &[&str] = &[
    "ASK", "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "OPTIONAL", "UNION", "MINUS", "GRAPH",
    "SERVICE", "BIND", "VALUES", "GROUP", "HAVING", "OFFSET", "DESC", "ASC", "REGEX", "EXISTS",
    "NOT", "BASE", "FROM",
];

struct QueryParser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
}

impl QueryParser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|s| (s.line, s.column))
            .unwrap_or((1, 1))
    }

    fn syntax(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self.here();
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn unsupported(&self, construct: impl Into<String>) -> QueryError {
        let (line, column) = self.here();
        QueryError::Unsupported {
            line,
            column,
            construct: construct.into(),
        }
    }

    /// True when the next token is the given keyword, case-insensitively.
    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Word(w), .. }) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.at_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {kw}")))
        }
    }

    fn reject_if_unsupported(&self) -> Result<(), QueryError> {
        if let Some(Spanned { tok: Tok::Word(w), .. }) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(self.unsupported(upper));
            }
        }
        Ok(())
    }

    fn expand(&self, label: &str, local: &str) -> Result<Iri, QueryError> {
        let (line, column) = self.here();
        self.prefixes
            .expand(&format!("{label}:{local}"))
            .map_err(|_| QueryError::UnboundPrefix {
                line,
                column,
                label: label.to_string(),
            })
    }

    fn query(mut self) -> Result<Query, QueryError> {
        while self.at_keyword("PREFIX") {
            self.pos += 1;
            let Some(Spanned { tok: Tok::PName(label, local), .. }) = self.bump() else {
                return Err(self.syntax("expected a prefix label"));
            };
            if !local.is_empty() {
                return Err(self.syntax("prefix label must end with ':'"));
            }
            let Some(Spanned { tok: Tok::IriRef(ns), .. }) = self.bump() else {
                return Err(self.syntax("expected a namespace IRI"));
            };
            let ns = Iri::new(ns).map_err(|e| self.syntax(e.to_string()))?;
            self.prefixes.bind(label, ns);
        }

        self.reject_if_unsupported()?;
        self.expect_keyword("SELECT")?;
        let mut distinct = false;
        if self.at_keyword("DISTINCT") {
            self.pos += 1;
            distinct = true;
        }
        if matches!(self.peek(), Some(Spanned { tok: Tok::Star, .. })) {
            return Err(self.unsupported("SELECT *"));
        }
        let mut variables = Vec::new();
        while let Some(Spanned { tok: Tok::Var(v), .. }) = self.peek() {
            variables.push(v.clone());
            self.pos += 1;
        }
        if variables.is_empty() {
            return Err(self.syntax("expected at least one projected variable"));
        }

        self.reject_if_unsupported()?;
        self.expect_keyword("WHERE")?;
        if !matches!(self.bump(), Some(Spanned { tok: Tok::LBrace, .. })) {
            return Err(self.syntax("expected '{'"));
        }

        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            if matches!(self.peek(), Some(Spanned { tok: Tok::RBrace, .. })) {
                self.pos += 1;
                break;
            }
            if self.peek().is_none() {
                return Err(self.syntax("expected '}'"));
            }
            if self.at_keyword("FILTER") {
                self.pos += 1;
                filters.push(self.filter()?);
            } else {
                self.reject_if_unsupported()?;
                self.triples_block(&mut patterns)?;
            }
            if matches!(self.peek(), Some(Spanned { tok: Tok::Dot, .. })) {
                self.pos += 1;
            }
        }

        let mut order_by = Vec::new();
        if self.at_keyword("ORDER") {
            self.pos += 1;
            self.expect_keyword("BY")?;
            while let Some(Spanned { tok: Tok::Var(v), .. }) = self.peek() {
                order_by.push(v.clone());
                self.pos += 1;
            }
            if order_by.is_empty() {
                self.reject_if_unsupported()?;
                return Err(self.syntax("expected variables after ORDER BY"));
            }
        }

        let mut limit = None;
        if self.at_keyword("LIMIT") {
            self.pos += 1;
            let Some(Spanned { tok: Tok::Int(n), .. }) = self.bump() else {
                return Err(self.syntax("expected an integer after LIMIT"));
            };
            limit = Some(
                n.parse::<usize>()
                    .map_err(|_| self.syntax("LIMIT value out of range"))?,
            );
        }

        self.reject_if_unsupported()?;
        if self.peek().is_some() {
            return Err(self.syntax("unexpected trailing tokens"));
        }
        Ok(Query {
            prefixes: self.prefixes,
            distinct,
            variables,
            patterns,
            filters,
            order_by,
            limit,
        })
    }

    fn filter(&mut self) -> Result<FilterCond, QueryError> {
        if !matches!(self.bump(), Some(Spanned { tok: Tok::LParen, .. })) {
            return Err(self.syntax("expected '(' after FILTER"));
        }
        let left = self.operand()?;
        let op = match self.bump().map(|s| s.tok) {
            Some(Tok::Lt) => CompareOp::Lt,
            Some(Tok::Le) => CompareOp::Le,
            Some(Tok::Gt) => CompareOp::Gt,
            Some(Tok::Ge) => CompareOp::Ge,
            Some(Tok::Eq) => CompareOp::Eq,
            Some(Tok::Ne) => CompareOp::Ne,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.syntax("expected a comparison operator"));
            }
        };
        let right = self.operand()?;
        if !matches!(self.bump(), Some(Spanned { tok: Tok::RParen, .. })) {
            self.pos = self.pos.saturating_sub(1);
            if self.at_keyword("AND") || matches!(self.peek(), Some(Spanned { tok: Tok::Word(_), .. })) {
                return Err(self.unsupported("compound FILTER expression"));
            }
            return Err(self.syntax("expected ')'"));
        }
        Ok(FilterCond { left, op, right })
    }

    fn operand(&mut self) -> Result<Operand, QueryError> {
        match self.bump().map(|s| s.tok) {
            Some(Tok::Var(v)) => Ok(Operand::Var(v)),
            Some(Tok::Int(n)) => Ok(Operand::Constant(
                Literal::typed(n, vocab::XSD_INTEGER.clone()).expect("lexed integer"),
            )),
            Some(Tok::Dec(n)) => Ok(Operand::Constant(
                Literal::typed(n, vocab::XSD_DECIMAL.clone()).expect("lexed decimal"),
            )),
            Some(Tok::Str(s)) => Ok(Operand::Constant(Literal::string(s))),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.syntax("expected a variable or literal in FILTER"))
            }
        }
    }

    /// One subject with its predicate-object list.
    fn triples_block(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term()?;
        if matches!(subject, PatternTerm::Literal(_)) {
            return Err(self.syntax("a literal cannot be a subject"));
        }
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.term()?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if matches!(self.peek(), Some(Spanned { tok: Tok::Comma, .. })) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if matches!(self.peek(), Some(Spanned { tok: Tok::Semi, .. })) {
                self.pos += 1;
                // A dangling ';' before '.' or '}' ends the list.
                if matches!(
                    self.peek(),
                    Some(Spanned { tok: Tok::Dot, .. }) | Some(Spanned { tok: Tok::RBrace, .. })
                ) {
                    break;
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn verb(&mut self) -> Result<PatternTerm, QueryError> {
        if let Some(Spanned { tok: Tok::Word(w), .. }) = self.peek() {
            if w == "a" {
                self.pos += 1;
                return Ok(PatternTerm::Iri(vocab::RDF_TYPE.clone()));
            }
        }
        let term = self.term()?;
        if matches!(term, PatternTerm::Literal(_)) {
            return Err(self.syntax("a literal cannot be a predicate"));
        }
        Ok(term)
    }

    fn term(&mut self) -> Result<PatternTerm, QueryError> {
        self.reject_if_unsupported()?;
        let spanned = self.peek().cloned().ok_or_else(|| self.syntax("expected a term"))?;
        match spanned.tok {
            Tok::Var(v) => {
                self.pos += 1;
                Ok(PatternTerm::Var(v))
            }
            Tok::IriRef(s) => {
                let iri = Iri::new(s).map_err(|e| self.syntax(e.to_string()))?;
                self.pos += 1;
                Ok(PatternTerm::Iri(iri))
            }
            Tok::PName(label, local) => {
                let iri = self.expand(&label, &local)?;
                self.pos += 1;
                Ok(PatternTerm::Iri(iri))
            }
            Tok::Str(s) => {
                self.pos += 1;
                Ok(PatternTerm::Literal(Literal::string(s)))
            }
            Tok::Int(n) => {
                self.pos += 1;
                Ok(PatternTerm::Literal(
                    Literal::typed(n, vocab::XSD_INTEGER.clone()).expect("lexed integer"),
                ))
            }
            Tok::Dec(n) => {
                self.pos += 1;
                Ok(PatternTerm::Literal(
                    Literal::typed(n, vocab::XSD_DECIMAL.clone()).expect("lexed decimal"),
                ))
            }
            _ => Err(self.syntax("expected a term")),
        }
    }
}

// Evaluation.

type Binding = BTreeMap<String, Term>;

/// Exact comparison of integer and decimal literals by digit strings, so
/// values like 10 and 10.0 compare equal without floating point.
fn cmp_numeric(a: &Literal, b: &Literal) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    fn decompose(lex: &str) -> (bool, &str, &str) {
        let (neg, rest) = match lex.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, lex.strip_prefix('+').unwrap_or(lex)),
        };
        let (int, frac) = rest.split_once('.').unwrap_or((rest, ""));
        (neg, int.trim_start_matches('0'), frac.trim_end_matches('0'))
    }
    let (an, ai, af) = decompose(a.lexical());
    let (bn, bi, bf) = decompose(b.lexical());
    let a_zero = ai.is_empty() && af.is_empty();
    let b_zero = bi.is_empty() && bf.is_empty();
    if a_zero && b_zero {
        return Ordering::Equal;
    }
    let a_sign = if a_zero { 0 } else if an { -1 } else { 1 };
    let b_sign = if b_zero { 0 } else if bn { -1 } else { 1 };
    if a_sign != b_sign {
        return a_sign.cmp(&b_sign);
    }
    let magnitude = ai
        .len()
        .cmp(&bi.len())
        .then_with(|| ai.cmp(bi))
        .then_with(|| af.cmp(bf));
    if a_sign < 0 {
        magnitude.reverse()
    } else {
        magnitude
    }
}

/// Applies a comparison, or None when the terms are incomparable under the
/// supported value types (which drops the row, like a SPARQL type error).
fn compare(op: CompareOp, left: &Term, right: &Term) -> Option<bool> {
    use std::cmp::Ordering;
    let ordering: Option<Ordering> = match (left, right) {
        (Term::Literal(a), Term::Literal(b)) if a.is_numeric() && b.is_numeric() => {
            Some(cmp_numeric(a, b))
        }
        (Term::Literal(a), Term::Literal(b))
            if a.datatype() == &*vocab::XSD_STRING && b.datatype() == &*vocab::XSD_STRING =>
        {
            Some(a.lexical().cmp(b.lexical()))
        }
        _ => None,
    };
    match (op, ordering) {
        (CompareOp::Eq, Some(o)) => Some(o == Ordering::Equal),
        (CompareOp::Ne, Some(o)) => Some(o != Ordering::Equal),
        (CompareOp::Eq, None) => Some(left == right),
        (CompareOp::Ne, None) => Some(left != right),
        (CompareOp::Lt, Some(o)) => Some(o == Ordering::Less),
        (CompareOp::Le, Some(o)) => Some(o != Ordering::Greater),
        (CompareOp::Gt, Some(o)) => Some(o == Ordering::Greater),
        (CompareOp::Ge, Some(o)) => Some(o != Ordering::Less),
        _ => None,
    }
}

fn pattern_vars(p: &TriplePattern) -> Vec<&str> {
    [&p.subject, &p.predicate, &p.object]
        .into_iter()
        .filter_map(|t| match t {
            PatternTerm::Var(v) => Some(v.as_str()),
            _ => None,
        })
        .collect()
}

/// Count of triples matching the constant positions, used as a join-order
/// estimate before any variable is bound.
fn estimate(p: &TriplePattern, graph: &Graph) -> usize {
    let s = match &p.subject {
        PatternTerm::Iri(i) => Some(Subject::from(i.clone())),
        _ => None,
    };
    let pr = match &p.predicate {
        PatternTerm::Iri(i) => Some(i.clone()),
        _ => None,
    };
    let o = match &p.object {
        PatternTerm::Iri(i) => Some(Term::Iri(i.clone())),
        PatternTerm::Literal(l) => Some(Term::Literal(l.clone())),
        PatternTerm::Var(_) => None,
    };
    graph.matching(s.as_ref(), pr.as_ref(), o.as_ref()).len()
}

/// Greedy static join order: always the cheapest remaining pattern that
/// shares a variable with what is already bound, to avoid products.
fn plan(patterns: &[TriplePattern], graph: &Graph) -> Vec<usize> {
    let estimates: Vec<usize> = patterns.iter().map(|p| estimate(p, graph)).collect();
    let mut remaining: BTreeSet<usize> = (0..patterns.len()).collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        let connected: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| pattern_vars(&patterns[i]).iter().any(|v| bound.contains(v)))
            .collect();
        let pool = if connected.is_empty() {
            remaining.iter().copied().collect()
        } else {
            connected
        };
        let pick = pool
            .into_iter()
            .min_by_key(|&i| (estimates[i], i))
            .expect("pool is never empty");
        remaining.remove(&pick);
        bound.extend(pattern_vars(&patterns[pick]));
        order.push(pick);
    }
    order
}

fn extend_binding(binding: &Binding, pattern: &TriplePattern, t: &Triple) -> Option<Binding> {
    let mut next = binding.clone();
    let mut unify = |pt: &PatternTerm, actual: Term| -> bool {
        match pt {
            PatternTerm::Var(v) => match next.get(v) {
                Some(existing) => *existing == actual,
                None => {
                    next.insert(v.clone(), actual);
                    true
                }
            },
            PatternTerm::Iri(i) => actual == Term::Iri(i.clone()),
            PatternTerm::Literal(l) => actual == Term::Literal(l.clone()),
        }
    };
    if unify(&pattern.subject, Term::from(t.subject.clone()))
        && unify(&pattern.predicate, Term::Iri(t.predicate.clone()))
        && unify(&pattern.object, t.object.clone())
    {
        Some(next)
    } else {
        None
    }
}

fn match_pattern(pattern: &TriplePattern, binding: &Binding, graph: &Graph) -> Vec<Binding> {
    let resolve = |pt: &PatternTerm| -> Option<Term> {
        match pt {
            PatternTerm::Var(v) => binding.get(v).cloned(),
            PatternTerm::Iri(i) => Some(Term::Iri(i.clone())),
            PatternTerm::Literal(l) => Some(Term::Literal(l.clone())),
        }
    };
    let s_term = resolve(&pattern.subject);
    let p_term = resolve(&pattern.predicate);
    let o_term = resolve(&pattern.object);
    // A bound value of the wrong kind in subject or predicate position can
    // never match.
    let s = match &s_term {
        Some(Term::Iri(i)) => Some(Subject::from(i.clone())),
        Some(Term::Blank(b)) => Some(Subject::from(b.clone())),
        Some(Term::Literal(_)) => return Vec::new(),
        None => None,
    };
    let p = match &p_term {
        Some(Term::Iri(i)) => Some(i.clone()),
        Some(_) => return Vec::new(),
        None => None,
    };
    graph
        .matching(s.as_ref(), p.as_ref(), o_term.as_ref())
        .iter()
        .filter_map(|t| extend_binding(binding, pattern, t))
        .collect()
}

pub fn execute(query: &Query, graph: &Graph) -> ResultTable {
    let mut rows: Vec<Binding> = vec![Binding::new()];
    for idx in plan(&query.patterns, graph) {
        let pattern = &query.patterns[idx];
        let mut next = Vec::new();
        for binding in &rows {
            next.extend(match_pattern(pattern, binding, graph));
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }

    rows.retain(|binding| {
        query.filters.iter().all(|f| {
            let value = |operand: &Operand| -> Option<Term> {
                match operand {
                    Operand::Var(v) => binding.get(v).cloned(),
                    Operand::Constant(l) => Some(Term::Literal(l.clone())),
                }
            };
            match (value(&f.left), value(&f.right)) {
                (Some(l), Some(r)) => compare(f.op, &l, &r) == Some(true),
                _ => false,
            }
        })
    });

    // Deterministic order: the requested sort keys first (stable), else the
    // canonical order of the full binding tuple.
    if query.order_by.is_empty() {
        rows.sort();
    } else {
        rows.sort_by(|a, b| {
            for var in &query.order_by {
                let (av, bv) = (a.get(var), b.get(var));
                let ord = match (av, bv) {
                    (Some(Term::Literal(x)), Some(Term::Literal(y)))
                        if x.is_numeric() && y.is_numeric() =>
                    {
                        cmp_numeric(x, y)
                    }
                    _ => av.cmp(&bv),
                };
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            a.cmp(b)
        });
    }

    let mut table_rows: Vec<Vec<Option<Term>>> = rows
        .into_iter()
        .map(|b| query.variables.iter().map(|v| b.get(v).cloned()).collect())
        .collect();
    if query.distinct {
        let mut seen = BTreeSet::new();
        table_rows.retain(|row| seen.insert(row.clone()));
    }
    if let Some(limit) = query.limit {
        table_rows.truncate(limit);
    }
    ResultTable {
        variables: query.variables.clone(),
        rows: table_rows,
    }
}

/// Tab-separated rendering: a '?var' header line, then one line per row,
/// terms in the graph's compact syntax, empty cells for unbound variables.
pub fn to_tsv(table: &ResultTable, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    let header: Vec<String> = table.variables.iter().map(|v| format!("?{v}")).collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Some(term) => render_term(term, prefixes),
                None => String::new(),
            })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}
