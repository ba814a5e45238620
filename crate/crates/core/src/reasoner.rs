//! Forward-chaining materialization for the schema fragment the ontology
//! actually uses: subclass and subproperty hierarchies plus domain and range
//! typing.
//!
//! Six rules run to fixpoint over one graph:
//!
//! 1. `(a subClassOf b), (b subClassOf c) -> (a subClassOf c)`
//! 2. `(p subPropertyOf q), (q subPropertyOf r) -> (p subPropertyOf r)`
//! 3. `(x p y), (p subPropertyOf q) -> (x q y)`
//! 4. `(x p y), (p domain C) -> (x type C)`
//! 5. `(x p y), (p range C) -> (y type C)` when `y` is an IRI
//! 6. `(x type C), (C subClassOf D) -> (x type D)`
//!
//! Evaluation is semi-naive: each round joins the previous round's additions
//! against the full graph, so already-derived facts are not re-derived.
//! Hierarchies must be acyclic; a cycle is an error, not a tolerated
//! equivalence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::store::{Graph, Iri, Subject, Term, Triple};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("subClassOf hierarchy contains a cycle: {}", .members.join(" -> "))]
    SubClassCycle { members: Vec<String> },
    #[error("subPropertyOf hierarchy contains a cycle: {}", .members.join(" -> "))]
    SubPropertyCycle { members: Vec<String> },
}

/// Materialized closure plus bookkeeping about how it was reached.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub graph: Graph,
    /// Triples added on top of the input.
    pub inferred_count: usize,
    /// Evaluation rounds run, including the final round that adds nothing.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    SubClassTransitivity,
    SubPropertyTransitivity,
    PropertyPropagation,
    DomainTyping,
    RangeTyping,
    TypePropagation,
}

pub const DEFAULT_RULE_ORDER: [Rule; 6] = [
    Rule::SubClassTransitivity,
    Rule::SubPropertyTransitivity,
    Rule::PropertyPropagation,
    Rule::DomainTyping,
    Rule::RangeTyping,
    Rule::TypePropagation,
];

/// Computes the closure of `input` under the six rules.
pub fn materialize(input: &Graph) -> Result<ClosureResult, ReasonerError> {
    materialize_with_rule_order(input, &DEFAULT_RULE_ORDER)
}

/// Same closure under any permutation of the rules. The fixpoint does not
/// depend on scheduling; tests exercise random orders to prove it.
#[doc(hidden)]
pub fn materialize_with_rule_order(
    input: &Graph,
    order: &[Rule; 6],
) -> Result<ClosureResult, ReasonerError> {
    check_acyclic(input, &vocab::RDFS_SUB_CLASS_OF, |members| {
        ReasonerError::SubClassCycle { members }
    })?;
    check_acyclic(input, &vocab::RDFS_SUB_PROPERTY_OF, |members| {
        ReasonerError::SubPropertyCycle { members }
    })?;

    let mut graph = input.clone();
    let mut delta: BTreeSet<Triple> = input.iter().cloned().collect();
    let mut iterations = 0;
    while {
        iterations += 1;
        let mut next_delta = BTreeSet::new();
        for rule in order {
            for candidate in derive(*rule, &graph, &delta) {
                if graph.insert(candidate.clone()) {
                    next_delta.insert(candidate);
                }
            }
        }
        delta = next_delta;
        !delta.is_empty()
    } {}

    let inferred_count = graph.len() - input.len();
    Ok(ClosureResult {
        graph,
        inferred_count,
        iterations,
    })
}

/// Subjects typed as `class` in the closure, in canonical order.
pub fn instances_of(closure: &Graph, class: &Iri) -> Vec<Subject> {
    closure
        .matching(None, Some(&vocab::RDF_TYPE), Some(&Term::Iri(class.clone())))
        .into_iter()
        .map(|t| t.subject)
        .collect()
}

fn derive(rule: Rule, graph: &Graph, delta: &BTreeSet<Triple>) -> Vec<Triple> {
    match rule {
        Rule::SubClassTransitivity => transitive_step(graph, delta, &vocab::RDFS_SUB_CLASS_OF),
        Rule::SubPropertyTransitivity => {
            transitive_step(graph, delta, &vocab::RDFS_SUB_PROPERTY_OF)
        }
        Rule::PropertyPropagation => property_propagation(graph, delta),
        Rule::DomainTyping => argument_typing(graph, delta, &vocab::RDFS_DOMAIN, true),
        Rule::RangeTyping => argument_typing(graph, delta, &vocab::RDFS_RANGE, false),
        Rule::TypePropagation => type_propagation(graph, delta),
    }
}

/// Semi-naive join of an edge relation with itself: delta against full plus
/// full against delta.
fn transitive_step(graph: &Graph, delta: &BTreeSet<Triple>, pred: &Iri) -> Vec<Triple> {
    let mut out = Vec::new();
    for t in delta.iter().filter(|t| t.predicate == *pred) {
        // (a pred b) new, (b pred c) known.
        if let Ok(mid) = Subject::try_from(t.object.clone()) {
            for next in graph.matching(Some(&mid), Some(pred), None) {
                out.push(Triple::new(t.subject.clone(), pred.clone(), next.object));
            }
        }
        // (z pred a) known, (a pred b) new.
        let as_obj = Term::from(t.subject.clone());
        for prev in graph.matching(None, Some(pred), Some(&as_obj)) {
            out.push(Triple::new(prev.subject, pred.clone(), t.object.clone()));
        }
    }
    out
}

fn property_propagation(graph: &Graph, delta: &BTreeSet<Triple>) -> Vec<Triple> {
    let sub_prop = &*vocab::RDFS_SUB_PROPERTY_OF;
    let mut supers: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    for edge in graph.matching(None, Some(sub_prop), None) {
        if let (Subject::Iri(p), Term::Iri(q)) = (edge.subject, edge.object) {
            supers.entry(p).or_default().push(q);
        }
    }
    let mut out = Vec::new();
    // New assertion joined with known subproperty edges.
    for t in delta.iter() {
        for q in supers.get(&t.predicate).into_iter().flatten() {
            out.push(Triple::new(t.subject.clone(), q.clone(), t.object.clone()));
        }
    }
    // New subproperty edge joined with known assertions.
    for edge in delta.iter().filter(|t| t.predicate == *sub_prop) {
        if let (Subject::Iri(p), Term::Iri(q)) = (&edge.subject, &edge.object) {
            for t in graph.matching(None, Some(p), None) {
                out.push(Triple::new(t.subject, q.clone(), t.object));
            }
        }
    }
    out
}

fn argument_typing(
    graph: &Graph,
    delta: &BTreeSet<Triple>,
    axiom_pred: &Iri,
    type_subject: bool,
) -> Vec<Triple> {
    let rdf_type = &*vocab::RDF_TYPE;
    let typed = |t: &Triple, class: Term| -> Option<Triple> {
        let target: Subject = if type_subject {
            t.subject.clone()
        } else {
            // Range typing applies to IRI objects only.
            match &t.object {
                Term::Iri(iri) => Subject::Iri(iri.clone()),
                _ => return None,
            }
        };
        Some(Triple::new(target, rdf_type.clone(), class))
    };
    let mut out = Vec::new();
    // New assertion joined with known axioms over its predicate.
    for t in delta.iter() {
        let p = Subject::Iri(t.predicate.clone());
        for axiom in graph.matching(Some(&p), Some(axiom_pred), None) {
            out.extend(typed(t, axiom.object));
        }
    }
    // New axiom joined with known assertions.
    for axiom in delta.iter().filter(|t| t.predicate == *axiom_pred) {
        if let Subject::Iri(p) = &axiom.subject {
            for t in graph.matching(None, Some(p), None) {
                out.extend(typed(&t, axiom.object.clone()));
            }
        }
    }
    out
}

fn type_propagation(graph: &Graph, delta: &BTreeSet<Triple>) -> Vec<Triple> {
    let rdf_type = &*vocab::RDF_TYPE;
    let sub_class = &*vocab::RDFS_SUB_CLASS_OF;
    let mut out = Vec::new();
    // New type assertion joined with known subclass edges.
    for t in delta.iter().filter(|t| t.predicate == *rdf_type) {
        if let Ok(class) = Subject::try_from(t.object.clone()) {
            for edge in graph.matching(Some(&class), Some(sub_class), None) {
                out.push(Triple::new(t.subject.clone(), rdf_type.clone(), edge.object));
            }
        }
    }
    // New subclass edge joined with known type assertions.
    for edge in delta.iter().filter(|t| t.predicate == *sub_class) {
        let class_term = Term::from(edge.subject.clone());
        for t in graph.matching(None, Some(rdf_type), Some(&class_term)) {
            out.push(Triple::new(t.subject, rdf_type.clone(), edge.object.clone()));
        }
    }
    out
}

/// Rejects cycles in the edge relation named by `pred`, reporting one cycle's
/// member sequence when found.
fn check_acyclic<F>(graph: &Graph, pred: &Iri, to_error: F) -> Result<(), ReasonerError>
where
    F: Fn(Vec<String>) -> ReasonerError,
{
    let mut edges: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for t in graph.matching(None, Some(pred), None) {
        edges
            .entry(Term::from(t.subject))
            .or_default()
            .insert(t.object);
    }
    if let Some(cycle) = find_cycle(&edges) {
        let members = cycle.iter().map(term_name).collect();
        return Err(to_error(members));
    }
    Ok(())
}

fn term_name(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.to_string(),
        Term::Blank(b) => format!("_:{}", b.label()),
        Term::Literal(lit) => format!("{:?}", lit.lexical()),
    }
}

/// Iterative three-color depth-first search; returns the node sequence of the
/// first cycle encountered, starting and ending at the same node.
fn find_cycle(edges: &BTreeMap<Term, BTreeSet<Term>>) -> Option<Vec<Term>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: BTreeMap<&Term, Color> = BTreeMap::new();
    let empty = BTreeSet::new();

    for start in edges.keys() {
        if *color.get(start).unwrap_or(&Color::White) != Color::White {
            continue;
        }
        // Stack of (node, iterator over its successors); path mirrors the gray chain.
        let mut stack: Vec<(&Term, std::collections::btree_set::Iter<Term>)> = Vec::new();
        let mut path: Vec<&Term> = Vec::new();
        color.insert(start, Color::Gray);
        stack.push((start, edges.get(start).unwrap_or(&empty).iter()));
        path.push(start);

        while let Some((_, successors)) = stack.last_mut() {
            match successors.next() {
                Some(next) => match *color.get(next).unwrap_or(&Color::White) {
                    Color::Gray => {
                        // Back edge: the cycle is the path suffix from `next`.
                        let from = path.iter().position(|n| *n == next).unwrap();
                        let mut cycle: Vec<Term> =
                            path[from..].iter().map(|n| (*n).clone()).collect();
                        cycle.push(next.clone());
                        return Some(cycle);
                    }
                    Color::White => {
                        color.insert(next, Color::Gray);
                        stack.push((next, edges.get(next).unwrap_or(&empty).iter()));
                        path.push(next);
                    }
                    Color::Black => {}
                },
                None => {
                    let (done, _) = stack.pop().unwrap();
                    color.insert(done, Color::Black);
                    path.pop();
                }
            }
        }
    }
    None
}
