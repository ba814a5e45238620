//! In-memory triple store with set semantics and deterministic iteration.
//!
//! Terms order canonically: IRIs before blank nodes before literals, each kind
//! by its string fields. Triples order by subject, then predicate, then object.
//! Every lookup walks a `BTreeMap` index, so identical stores always produce
//! identical row sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("invalid IRI {0:?}: must be non-empty and contain no whitespace or control characters")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}: expected letters, digits, underscore or hyphen")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("{1:?} is not a valid lexical form for {0}")]
    BadNumericLexical(String, String),
    #[error("language-tagged literals must be built with Literal::lang")]
    LangStringWithoutTag,
    #[error("literal cannot appear in subject position")]
    LiteralSubject,
    #[error("prefix {0:?} is not bound")]
    UnboundPrefix(String),
    #[error("invalid local name {0:?}: expected letters, digits, underscore or hyphen")]
    InvalidLocalName(String),
}

/// Absolute IRI. Compares by exact string equality; no normalization is applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, StoreError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(StoreError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn valid_name(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Blank node identified by its label; labels are unique within a graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, StoreError> {
        let label = label.into();
        if !valid_name(&label) {
            return Err(StoreError::InvalidBlankLabel(label));
        }
        Ok(BlankNode(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

/// Literal value. The lexical form is stored verbatim; `lang` is present
/// exactly when the datatype is `rdf:langString`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    lang: Option<String>,
}

fn integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            !int.is_empty()
                && !frac.is_empty()
                && int.bytes().all(|b| b.is_ascii_digit())
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit()),
    }
}

impl Literal {
    /// Plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: vocab::XSD_STRING.clone(),
            lang: None,
        }
    }

    /// Language-tagged string (`rdf:langString`).
    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Result<Self, StoreError> {
        let tag = tag.into();
        let well_formed = !tag.is_empty()
            && tag.split('-').all(|part| {
                !part.is_empty() && part.bytes().all(|b| b.is_ascii_alphanumeric())
            });
        if !well_formed {
            return Err(StoreError::InvalidLanguageTag(tag));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: vocab::RDF_LANG_STRING.clone(),
            lang: Some(tag),
        })
    }

    /// Typed literal. Numeric datatypes require a parseable lexical form;
    /// `rdf:langString` is rejected because it needs a tag.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, StoreError> {
        let lexical = lexical.into();
        if datatype == *vocab::RDF_LANG_STRING {
            return Err(StoreError::LangStringWithoutTag);
        }
        if datatype == *vocab::XSD_INTEGER && !integer_lexical(&lexical) {
            return Err(StoreError::BadNumericLexical("xsd:integer".into(), lexical));
        }
        if datatype == *vocab::XSD_DECIMAL && !decimal_lexical(&lexical) {
            return Err(StoreError::BadNumericLexical("xsd:decimal".into(), lexical));
        }
        Ok(Literal {
            lexical,
            datatype,
            lang: None,
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: vocab::XSD_INTEGER.clone(),
            lang: None,
        }
    }

    /// Decimal literal from a lexical form such as `"4.5"`.
    pub fn decimal(lexical: &str) -> Result<Self, StoreError> {
        Literal::typed(lexical, vocab::XSD_DECIMAL.clone())
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    pub fn is_numeric(&self) -> bool {
        self.datatype == *vocab::XSD_INTEGER || self.datatype == *vocab::XSD_DECIMAL
    }
}

/// Subject position: IRI or blank node. Literals are unrepresentable here,
/// so positional validity is enforced by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    Blank(BlankNode),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::Blank(_) => None,
        }
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::Blank(b)
    }
}

impl TryFrom<Term> for Subject {
    type Error = StoreError;

    fn try_from(term: Term) -> Result<Self, StoreError> {
        match term {
            Term::Iri(iri) => Ok(Subject::Iri(iri)),
            Term::Blank(b) => Ok(Subject::Blank(b)),
            Term::Literal(_) => Err(StoreError::LiteralSubject),
        }
    }
}

/// Any RDF term. Variant order defines the canonical sort: IRIs, then blank
/// nodes, then literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::Blank(b) => Term::Blank(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
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

/// Triple set indexed by (s), (p), (o), (s,p) and (p,o).
///
/// All indexes are updated on every insert and remove, so they stay consistent
/// with the primary set at all times.
#[derive(Debug, Default, Clone)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    by_s: BTreeMap<Subject, BTreeSet<Triple>>,
    by_p: BTreeMap<Iri, BTreeSet<Triple>>,
    by_o: BTreeMap<Term, BTreeSet<Triple>>,
    by_sp: BTreeMap<(Subject, Iri), BTreeSet<Triple>>,
    by_po: BTreeMap<(Iri, Term), BTreeSet<Triple>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Inserts a triple. Returns false when it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if !self.triples.insert(triple.clone()) {
            return false;
        }
        let Triple {
            subject,
            predicate,
            object,
        } = triple.clone();
        self.by_s.entry(subject.clone()).or_default().insert(triple.clone());
        self.by_p.entry(predicate.clone()).or_default().insert(triple.clone());
        self.by_o.entry(object.clone()).or_default().insert(triple.clone());
        self.by_sp
            .entry((subject, predicate.clone()))
            .or_default()
            .insert(triple.clone());
        self.by_po.entry((predicate, object)).or_default().insert(triple);
        true
    }

    /// Removes a triple. Returns false when it was absent.
    pub fn remove(&mut self, triple: &Triple) -> bool {
        if !self.triples.remove(triple) {
            return false;
        }
        fn drop_from<K: Ord>(index: &mut BTreeMap<K, BTreeSet<Triple>>, key: K, triple: &Triple) {
            if let Some(set) = index.get_mut(&key) {
                set.remove(triple);
                if set.is_empty() {
                    index.remove(&key);
                }
            }
        }
        drop_from(&mut self.by_s, triple.subject.clone(), triple);
        drop_from(&mut self.by_p, triple.predicate.clone(), triple);
        drop_from(&mut self.by_o, triple.object.clone(), triple);
        drop_from(
            &mut self.by_sp,
            (triple.subject.clone(), triple.predicate.clone()),
            triple,
        );
        drop_from(
            &mut self.by_po,
            (triple.predicate.clone(), triple.object.clone()),
            triple,
        );
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Iterates all triples in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Returns all triples matching the given positions (`None` is a wildcard),
    /// in canonical order. The most selective available index answers the query.
    pub fn matching(
        &self,
        s: Option<&Subject>,
        p: Option<&Iri>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s.clone(), p.clone(), o.clone());
                if self.triples.contains(&t) {
                    vec![t]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => self
                .by_sp
                .get(&(s.clone(), p.clone()))
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default(),
            (None, Some(p), Some(o)) => self
                .by_po
                .get(&(p.clone(), o.clone()))
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default(),
            (Some(s), None, Some(o)) => self
                .by_s
                .get(s)
                .map(|set| {
                    set.iter()
                        .filter(|t| t.object == *o)
                        .cloned()
                        .collect()
                })
                .unwrap_or_default(),
            (Some(s), None, None) => self
                .by_s
                .get(s)
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default(),
            (None, Some(p), None) => self
                .by_p
                .get(p)
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default(),
            (None, None, Some(o)) => self
                .by_o
                .get(o)
                .map(|set| set.iter().cloned().collect())
                .unwrap_or_default(),
            (None, None, None) => self.triples.iter().cloned().collect(),
        }
    }

    /// Folds another graph into this one, returning the number of new triples.
    pub fn extend_from(&mut self, other: &Graph) -> usize {
        let mut added = 0;
        for t in other.iter() {
            if self.insert(t.clone()) {
                added += 1;
            }
        }
        added
    }

    /// Verifies that every index agrees with the primary triple set.
    pub fn indexes_consistent(&self) -> bool {
        let rebuilt: BTreeSet<Triple> = self.triples.iter().cloned().collect();
        let check = |sets: Vec<&BTreeSet<Triple>>| {
            let union: BTreeSet<Triple> = sets.into_iter().flatten().cloned().collect();
            union == rebuilt
        };
        check(self.by_s.values().collect())
            && check(self.by_p.values().collect())
            && check(self.by_o.values().collect())
            && check(self.by_sp.values().collect())
            && check(self.by_po.values().collect())
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

/// Prefix label to namespace bindings. Rebinding a label replaces the old
/// namespace; the latest binding wins.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct PrefixMap {
    map: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap::default()
    }

    pub fn bind(&mut self, label: impl Into<String>, namespace: Iri) {
        let label = label.into();
        // Labels must re-read as prefixed names: empty, or letter-initial.
        debug_assert!(
            label.is_empty()
                || (label.starts_with(|c: char| c.is_ascii_alphabetic()) && valid_name(&label)),
            "prefix label {label:?} does not match the prefixed-name grammar"
        );
        self.map.insert(label, namespace);
    }

    pub fn namespace(&self, label: &str) -> Option<&Iri> {
        self.map.get(label)
    }

    /// Expands `label:local` to a full IRI.
    pub fn expand(&self, pname: &str) -> Result<Iri, StoreError> {
        let (label, local) = pname
            .split_once(':')
            .ok_or_else(|| StoreError::InvalidLocalName(pname.to_string()))?;
        if !valid_name(local) {
            return Err(StoreError::InvalidLocalName(local.to_string()));
        }
        let ns = self
            .map
            .get(label)
            .ok_or_else(|| StoreError::UnboundPrefix(label.to_string()))?;
        Iri::new(format!("{}{}", ns.as_str(), local))
    }

    /// Compacts an IRI to `label:local` when a bound namespace prefixes it and
    /// the remainder is a valid local name. The longest namespace wins; ties
    /// on namespace pick the lexically smallest label.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        let mut best: Option<(&str, &str)> = None;
        for (label, ns) in &self.map {
            if let Some(local) = iri.as_str().strip_prefix(ns.as_str()) {
                if !valid_name(local) {
                    continue;
                }
                let better = match best {
                    Some((_, chosen)) => local.len() < chosen.len(),
                    None => true,
                };
                if better {
                    best = Some((label, local));
                }
            }
        }
        best.map(|(label, local)| format!("{label}:{local}"))
    }

    /// Bindings in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.map.iter().map(|(label, ns)| (label.as_str(), ns))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Folds another map's bindings into this one; `other` wins on conflicts.
    pub fn merge(&mut self, other: &PrefixMap) {
        for (label, ns) in other.iter() {
            self.bind(label, ns.clone());
        }
    }
}
