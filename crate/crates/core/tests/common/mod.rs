//! Shared generators and reference implementations for the integration
//! suites. The reference code recomputes every expectation from first
//! principles: closures by graph reachability, query answers by nested
//! loops over the pattern list in text order, scores by re-deriving the
//! formula. The engine has to agree with these on every generated input,
//! and the frozen golden files are produced from the reference side.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use ucpo_core::recommender::{
    ActiveProfile, ContextSnapshot, PreferenceKind, PreferenceValue, RecommenderConfig,
    VehicleListing,
};
use ucpo_core::sparql::{
    CompareOp, FilterCond, Operand, PatternTerm, Query, ResultTable, TriplePattern,
};
use ucpo_core::store::{BlankNode, Graph, Iri, Literal, PrefixMap, Subject, Term, Triple};
use ucpo_core::vocab;

pub const NS_A: &str = "http://graph.test/a#";
pub const NS_B: &str = "http://graph.test/b/";

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn test_prefixes() -> PrefixMap {
    let mut p = PrefixMap::new();
    p.bind("a", iri(NS_A));
    p.bind("b", iri(NS_B));
    p.bind("xsd", vocab::xsd(""));
    p
}

// Reference closure.

/// Closure by reachability rather than rule firing. Valid whenever the
/// schema vocabulary itself is never the subject of a subPropertyOf edge
/// and never carries domain or range axioms, which holds for the shipped
/// data and for every generated input.
pub fn closure_by_reachability(input: &Graph) -> Graph {
    let class_reach = reachability(input, &vocab::RDFS_SUB_CLASS_OF);
    let prop_reach = reachability(input, &vocab::RDFS_SUB_PROPERTY_OF);

    let mut out = input.clone();
    for (from, tos) in &class_reach {
        for to in tos {
            out.insert(Triple::new(
                as_subject(from),
                vocab::RDFS_SUB_CLASS_OF.clone(),
                to.clone(),
            ));
        }
    }
    for (from, tos) in &prop_reach {
        for to in tos {
            out.insert(Triple::new(
                as_subject(from),
                vocab::RDFS_SUB_PROPERTY_OF.clone(),
                to.clone(),
            ));
        }
    }

    // Every assertion restated through each superproperty of its predicate.
    let mut assertions: Vec<Triple> = input.iter().cloned().collect();
    for t in input.iter() {
        let key = Term::Iri(t.predicate.clone());
        for wider in prop_reach.get(&key).into_iter().flatten() {
            if let Term::Iri(q) = wider {
                assertions.push(Triple::new(t.subject.clone(), q.clone(), t.object.clone()));
            }
        }
    }
    for t in &assertions {
        out.insert(t.clone());
    }

    let mut domains: BTreeMap<Iri, Vec<Term>> = BTreeMap::new();
    let mut ranges: BTreeMap<Iri, Vec<Term>> = BTreeMap::new();
    for t in input.iter() {
        if let Subject::Iri(p) = &t.subject {
            if t.predicate == *vocab::RDFS_DOMAIN {
                domains.entry(p.clone()).or_default().push(t.object.clone());
            } else if t.predicate == *vocab::RDFS_RANGE {
                ranges.entry(p.clone()).or_default().push(t.object.clone());
            }
        }
    }

    // Seed types: explicit ones plus argument typing over the expanded
    // assertions. Range typing only ever applies to IRI objects.
    let mut typed: BTreeSet<(Subject, Term)> = BTreeSet::new();
    for t in &assertions {
        if t.predicate == *vocab::RDF_TYPE {
            typed.insert((t.subject.clone(), t.object.clone()));
        }
        for class in domains.get(&t.predicate).into_iter().flatten() {
            typed.insert((t.subject.clone(), class.clone()));
        }
        if let Term::Iri(o) = &t.object {
            for class in ranges.get(&t.predicate).into_iter().flatten() {
                typed.insert((Subject::Iri(o.clone()), class.clone()));
            }
        }
    }
    for (s, class) in typed.clone() {
        for wider in class_reach.get(&class).into_iter().flatten() {
            typed.insert((s.clone(), wider.clone()));
        }
    }
    for (s, class) in typed {
        out.insert(Triple::new(s, vocab::RDF_TYPE.clone(), class));
    }
    out
}

fn as_subject(term: &Term) -> Subject {
    Subject::try_from(term.clone()).expect("hierarchy nodes are never literals")
}

/// Nodes reachable from each edge source, excluding the source itself.
fn reachability(graph: &Graph, pred: &Iri) -> BTreeMap<Term, BTreeSet<Term>> {
    let mut direct: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for t in graph.iter().filter(|t| t.predicate == *pred) {
        direct
            .entry(Term::from(t.subject.clone()))
            .or_default()
            .insert(t.object.clone());
    }
    let mut reach = BTreeMap::new();
    for start in direct.keys() {
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        let mut queue: Vec<Term> = direct[start].iter().cloned().collect();
        while let Some(next) = queue.pop() {
            if !seen.insert(next.clone()) {
                continue;
            }
            if let Some(more) = direct.get(&next) {
                queue.extend(more.iter().cloned());
            }
        }
        reach.insert(start.clone(), seen);
    }
    reach
}

// Reference query evaluation.

/// Answers a query by scanning the whole triple list once per pattern, in
/// the pattern's text order, with no indexes and no planning. Returns None
/// when an intermediate result exceeds `row_cap` rows.
pub fn answers_by_nested_loops(
    query: &Query,
    graph: &Graph,
    row_cap: usize,
) -> Option<ResultTable> {
    let triples: Vec<&Triple> = graph.iter().collect();
    let mut rows: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for pattern in &query.patterns {
        let mut next = Vec::new();
        for row in &rows {
            for t in &triples {
                if let Some(extended) = bind_against(row, pattern, t) {
                    next.push(extended);
                }
            }
            if next.len() > row_cap {
                return None;
            }
        }
        rows = next;
    }

    rows.retain(|row| query.filters.iter().all(|f| filter_passes(row, f)));

    if query.order_by.is_empty() {
        rows.sort();
    } else {
        rows.sort_by(|a, b| order_cmp(a, b, &query.order_by));
    }

    let mut out: Vec<Vec<Option<Term>>> = rows
        .into_iter()
        .map(|row| query.variables.iter().map(|v| row.get(v).cloned()).collect())
        .collect();
    if query.distinct {
        let mut seen = BTreeSet::new();
        out.retain(|row| seen.insert(row.clone()));
    }
    if let Some(limit) = query.limit {
        out.truncate(limit);
    }
    Some(ResultTable {
        variables: query.variables.clone(),
        rows: out,
    })
}

fn bind_against(
    row: &BTreeMap<String, Term>,
    pattern: &TriplePattern,
    t: &Triple,
) -> Option<BTreeMap<String, Term>> {
    let mut next = row.clone();
    let slots = [
        (&pattern.subject, Term::from(t.subject.clone())),
        (&pattern.predicate, Term::Iri(t.predicate.clone())),
        (&pattern.object, t.object.clone()),
    ];
    for (slot, actual) in slots {
        match slot {
            PatternTerm::Var(v) => match next.get(v) {
                Some(bound) => {
                    if *bound != actual {
                        return None;
                    }
                }
                None => {
                    next.insert(v.clone(), actual);
                }
            },
            PatternTerm::Iri(i) => {
                if actual != Term::Iri(i.clone()) {
                    return None;
                }
            }
            PatternTerm::Literal(l) => {
                if actual != Term::Literal(l.clone()) {
                    return None;
                }
            }
        }
    }
    Some(next)
}

/// Numeric comparison through f64, exact for the magnitudes the generators
/// and the shipped data use; strings compare lexically.
fn value_order(left: &Term, right: &Term) -> Option<std::cmp::Ordering> {
    match (left, right) {
        (Term::Literal(a), Term::Literal(b)) if a.is_numeric() && b.is_numeric() => {
            let x: f64 = a.lexical().parse().ok()?;
            let y: f64 = b.lexical().parse().ok()?;
            x.partial_cmp(&y)
        }
        (Term::Literal(a), Term::Literal(b))
            if a.datatype() == &*vocab::XSD_STRING && b.datatype() == &*vocab::XSD_STRING =>
        {
            Some(a.lexical().cmp(b.lexical()))
        }
        _ => None,
    }
}

fn filter_passes(row: &BTreeMap<String, Term>, f: &FilterCond) -> bool {
    let value = |operand: &Operand| -> Option<Term> {
        match operand {
            Operand::Var(v) => row.get(v).cloned(),
            Operand::Constant(l) => Some(Term::Literal(l.clone())),
        }
    };
    let (Some(l), Some(r)) = (value(&f.left), value(&f.right)) else {
        return false;
    };
    use std::cmp::Ordering;
    match value_order(&l, &r) {
        Some(ord) => match f.op {
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
        },
        None => match f.op {
            CompareOp::Eq => l == r,
            CompareOp::Ne => l != r,
            _ => false,
        },
    }
}

fn order_cmp(
    a: &BTreeMap<String, Term>,
    b: &BTreeMap<String, Term>,
    keys: &[String],
) -> std::cmp::Ordering {
    for var in keys {
        let (av, bv) = (a.get(var), b.get(var));
        let ord = match (av, bv) {
            (Some(x), Some(y)) => value_order(x, y).unwrap_or_else(|| av.cmp(&bv)),
            _ => av.cmp(&bv),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    a.cmp(b)
}

// Reference recommendation arithmetic.

fn indicator(hit: bool) -> f64 {
    if hit {
        1.0
    } else {
        0.0
    }
}

/// Re-derives the weighted score from the stated formula, separately from
/// the engine's explanation plumbing.
pub fn score_by_formula(
    listing: &VehicleListing,
    profile: &ActiveProfile,
    snapshot: &ContextSnapshot,
    config: &RecommenderConfig,
) -> f64 {
    let brand = indicator(snapshot.liked_brands.contains(&listing.brand));
    let model = indicator(snapshot.liked_models.contains(&listing.model));

    let mut sum = 0.0;
    let mut count = 0u32;
    for (kind, value) in &profile.preferences {
        if *kind == PreferenceKind::RouteType {
            continue;
        }
        sum += match (kind, value) {
            (PreferenceKind::MaxBudget, PreferenceValue::Number(n)) if *n > 0.0 => {
                (1.0 - listing.price / n).clamp(0.0, 1.0)
            }
            (PreferenceKind::MaxMileage, PreferenceValue::Number(n)) if *n > 0.0 => {
                (1.0 - listing.mileage_km as f64 / n).clamp(0.0, 1.0)
            }
            _ => indicator(constraint_holds(listing, *kind, value)),
        };
        count += 1;
    }
    let attribute = if count == 0 {
        0.5
    } else {
        sum / f64::from(count)
    };

    let context = match &snapshot.activity {
        None => 0.0,
        Some(activity) => match config.activity_types.get(activity) {
            None => 0.5,
            Some(types) => indicator(types.contains(&listing.vehicle_type)),
        },
    };

    config.brand_weight * brand
        + config.model_weight * model
        + config.attribute_weight * attribute
        + config.context_weight * context
}

/// One hard constraint, restated. Route type never constrains a listing.
pub fn constraint_holds(listing: &VehicleListing, kind: PreferenceKind, value: &PreferenceValue) -> bool {
    match (kind, value) {
        (PreferenceKind::Brand, PreferenceValue::Entity(e)) => listing.brand == *e,
        (PreferenceKind::VehicleType, PreferenceValue::Entity(e)) => listing.vehicle_type == *e,
        (PreferenceKind::Color, PreferenceValue::Entity(e)) => listing.color == *e,
        (PreferenceKind::State, PreferenceValue::Entity(e)) => listing.state == *e,
        (PreferenceKind::MinSeats, PreferenceValue::Number(n)) => listing.seats as f64 >= *n,
        (PreferenceKind::MaxMileage, PreferenceValue::Number(n)) => {
            listing.mileage_km as f64 <= *n
        }
        (PreferenceKind::MaxBudget, PreferenceValue::Number(n)) => listing.price <= *n,
        _ => true,
    }
}

pub fn filter_by_scan(listings: &[VehicleListing], profile: &ActiveProfile) -> Vec<VehicleListing> {
    listings
        .iter()
        .filter(|l| {
            profile
                .preferences
                .iter()
                .all(|(kind, value)| constraint_holds(l, *kind, value))
        })
        .cloned()
        .collect()
}

// Generators: plain graphs.

pub fn arb_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        4 => (0usize..8).prop_map(|i| iri(&format!("{NS_A}n{i}"))),
        2 => (0usize..4).prop_map(|i| iri(&format!("{NS_B}m{i}"))),
        1 => (0usize..3).prop_map(|i| iri(&format!("urn:item:{i}"))),
    ]
}

pub fn arb_blank() -> impl Strategy<Value = BlankNode> {
    (0usize..5).prop_map(|i| BlankNode::new(format!("b{i}")).unwrap())
}

pub fn arb_literal() -> impl Strategy<Value = Literal> {
    let strings = prop::sample::select(vec![
        "alpha",
        "beta with space",
        "",
        "quote \" inside",
        "line\nbreak",
        "tab\there",
        "caf\u{e9}",
    ]);
    let decimals = prop::sample::select(vec!["0.5", "-3.25", "10.0", "123.456", "0.0"]);
    let tagged = prop::sample::select(vec![("bonjour", "fr"), ("hello", "en-GB")]);
    prop_oneof![
        3 => strings.prop_map(Literal::string),
        2 => (-9i64..=9).prop_map(Literal::integer),
        1 => (100_000i64..=999_999).prop_map(Literal::integer),
        2 => decimals.prop_map(|s| Literal::decimal(s).unwrap()),
        1 => tagged.prop_map(|(v, t)| Literal::lang(v, t).unwrap()),
        // A dotless decimal has to survive the quoted fallback.
        1 => Just(Literal::typed("4", vocab::XSD_DECIMAL.clone()).unwrap()),
        1 => (1990i64..=2030)
            .prop_map(|y| Literal::typed(y.to_string(), iri(&format!("{NS_A}year"))).unwrap()),
    ]
}

pub fn arb_subject() -> impl Strategy<Value = Subject> {
    prop_oneof![
        4 => arb_iri().prop_map(Subject::from),
        1 => arb_blank().prop_map(Subject::from),
    ]
}

pub fn arb_object() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => arb_iri().prop_map(Term::Iri),
        1 => arb_blank().prop_map(Term::Blank),
        4 => arb_literal().prop_map(Term::Literal),
    ]
}

pub fn arb_triple() -> impl Strategy<Value = Triple> {
    (arb_subject(), arb_iri(), arb_object()).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

pub fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(arb_triple(), 0..=max).prop_map(|triples| {
        let mut g = Graph::new();
        for t in triples {
            g.insert(t);
        }
        g
    })
}

// Generators: taxonomies for the reasoner suite.

fn class_iri(i: usize) -> Iri {
    iri(&format!("{NS_A}C{i}"))
}

fn prop_iri(i: usize) -> Iri {
    iri(&format!("{NS_A}p{i}"))
}

fn inst_iri(i: usize) -> Iri {
    iri(&format!("{NS_B}x{i}"))
}

#[derive(Debug, Clone)]
pub enum AssertObj {
    Inst(usize),
    Num(i64),
}

/// A random schema-plus-instances graph: acyclic class and property
/// hierarchies (edges always point from lower to higher index), domain and
/// range axioms, type assertions, and property assertions.
pub fn arb_taxonomy_graph() -> impl Strategy<Value = Graph> {
    (2usize..=100, 1usize..=10, 1usize..=300).prop_flat_map(|(nc, np, ni)| {
        let obj = move |n: usize| {
            prop_oneof![
                3 => (0..n).prop_map(AssertObj::Inst),
                1 => (0i64..100).prop_map(AssertObj::Num),
            ]
        };
        (
            prop::collection::vec((0..nc, 0..nc), 0..=nc.min(150)),
            prop::collection::vec((0..np, 0..np), 0..=np),
            prop::collection::vec((0..np, 0..nc), 0..=np),
            prop::collection::vec((0..np, 0..nc), 0..=np),
            prop::collection::vec((0..ni, 0..nc), 0..=200),
            prop::collection::vec((0..ni, 0..np, obj(ni)), 0..=300),
        )
            .prop_map(|(sub_c, sub_p, doms, rans, types, asserts)| {
                let mut g = Graph::new();
                for (i, j) in sub_c {
                    if i != j {
                        let (lo, hi) = (i.min(j), i.max(j));
                        g.insert(Triple::new(
                            class_iri(lo),
                            vocab::RDFS_SUB_CLASS_OF.clone(),
                            class_iri(hi),
                        ));
                    }
                }
                for (i, j) in sub_p {
                    if i != j {
                        let (lo, hi) = (i.min(j), i.max(j));
                        g.insert(Triple::new(
                            prop_iri(lo),
                            vocab::RDFS_SUB_PROPERTY_OF.clone(),
                            prop_iri(hi),
                        ));
                    }
                }
                for (p, c) in doms {
                    g.insert(Triple::new(prop_iri(p), vocab::RDFS_DOMAIN.clone(), class_iri(c)));
                }
                for (p, c) in rans {
                    g.insert(Triple::new(prop_iri(p), vocab::RDFS_RANGE.clone(), class_iri(c)));
                }
                for (x, c) in types {
                    g.insert(Triple::new(inst_iri(x), vocab::RDF_TYPE.clone(), class_iri(c)));
                }
                for (x, p, o) in asserts {
                    let object: Term = match o {
                        AssertObj::Inst(j) => Term::Iri(inst_iri(j)),
                        AssertObj::Num(n) => Term::Literal(Literal::integer(n)),
                    };
                    g.insert(Triple::new(inst_iri(x), prop_iri(p), object));
                }
                g
            })
    })
}

// Generators: query cases for the engine-versus-nested-loops suite.

pub const QC_VARS: [&str; 5] = ["x", "y", "z", "s", "w"];

fn qc_subjects() -> Vec<Subject> {
    let mut v: Vec<Subject> = (0..10).map(|i| Subject::Iri(iri(&format!("{NS_A}n{i}")))).collect();
    v.push(Subject::Blank(BlankNode::new("b0").unwrap()));
    v.push(Subject::Blank(BlankNode::new("b1").unwrap()));
    v
}

fn qc_predicates() -> Vec<Iri> {
    (0..5).map(|i| iri(&format!("{NS_A}p{i}"))).collect()
}

fn qc_objects() -> Vec<Term> {
    let mut v: Vec<Term> = qc_subjects().into_iter().map(Term::from).collect();
    for n in 0..13 {
        v.push(Term::Literal(Literal::integer(n)));
    }
    for d in ["2.5", "7.0"] {
        v.push(Term::Literal(Literal::decimal(d).unwrap()));
    }
    for s in ["s0", "s1", "s2", "s3"] {
        v.push(Term::Literal(Literal::string(s)));
    }
    v
}

#[derive(Debug, Clone)]
pub struct QueryCase {
    pub graph: Graph,
    pub query: Query,
}

#[derive(Debug, Clone)]
enum SlotSpec {
    Var(usize),
    Pool(usize),
}

fn arb_qc_triple() -> impl Strategy<Value = Triple> {
    let (subjects, predicates, objects) = (qc_subjects(), qc_predicates(), qc_objects());
    (
        prop::sample::select(subjects),
        prop::sample::select(predicates),
        prop::sample::select(objects),
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn arb_subject_spec() -> impl Strategy<Value = SlotSpec> {
    prop_oneof![
        3 => (0..QC_VARS.len()).prop_map(SlotSpec::Var),
        2 => (0..qc_subjects().len()).prop_map(SlotSpec::Pool),
    ]
}

fn arb_predicate_spec() -> impl Strategy<Value = SlotSpec> {
    prop_oneof![
        7 => (0..qc_predicates().len()).prop_map(SlotSpec::Pool),
        1 => (0..QC_VARS.len()).prop_map(SlotSpec::Var),
    ]
}

fn arb_object_spec() -> impl Strategy<Value = SlotSpec> {
    prop_oneof![
        4 => (0..QC_VARS.len()).prop_map(SlotSpec::Var),
        5 => (0..qc_objects().len()).prop_map(SlotSpec::Pool),
    ]
}

#[derive(Debug, Clone)]
enum RhsSpec {
    Int(i64),
    Dec(usize),
    Str(usize),
    Var(usize),
}

fn arb_filter_spec() -> impl Strategy<Value = (usize, usize, RhsSpec)> {
    let rhs = prop_oneof![
        4 => (0i64..=12).prop_map(RhsSpec::Int),
        2 => (0usize..2).prop_map(RhsSpec::Dec),
        2 => (0usize..4).prop_map(RhsSpec::Str),
        1 => (0..QC_VARS.len()).prop_map(RhsSpec::Var),
    ];
    (0..QC_VARS.len(), 0usize..6, rhs)
}

const OPS: [CompareOp; 6] = [
    CompareOp::Lt,
    CompareOp::Le,
    CompareOp::Gt,
    CompareOp::Ge,
    CompareOp::Eq,
    CompareOp::Ne,
];

pub fn arb_query_case() -> impl Strategy<Value = QueryCase> {
    let patterns = prop::collection::vec(
        (arb_subject_spec(), arb_predicate_spec(), arb_object_spec()),
        1..=4,
    );
    let filters = prop::collection::vec(arb_filter_spec(), 0..=2);
    let projection = prop::collection::vec(0..QC_VARS.len(), 1..=3);
    let order_by = prop::collection::vec(0..QC_VARS.len(), 0..=2);
    let graph = prop::collection::vec(arb_qc_triple(), 1..=200);
    (patterns, filters, projection, order_by, any::<bool>(), prop::option::of(0usize..=25), graph)
        .prop_map(|(pattern_specs, filter_specs, proj, order, distinct, limit, triples)| {
            let subjects = qc_subjects();
            let predicates = qc_predicates();
            let objects = qc_objects();
            let var = |i: usize| QC_VARS[i].to_string();

            let mut patterns: Vec<TriplePattern> = Vec::new();
            let mut seen_vars: Vec<usize> = Vec::new();
            for (s_spec, p_spec, o_spec) in pattern_specs {
                let mut this_vars: Vec<usize> = Vec::new();
                let slot = |spec: &SlotSpec, vars: &mut Vec<usize>| match spec {
                    SlotSpec::Var(i) => {
                        vars.push(*i);
                        None
                    }
                    SlotSpec::Pool(i) => Some(*i),
                };
                let s_pool = slot(&s_spec, &mut this_vars);
                let p_pool = slot(&p_spec, &mut this_vars);
                let o_pool = slot(&o_spec, &mut this_vars);

                let mut subject = match (&s_spec, s_pool) {
                    (SlotSpec::Var(i), _) => PatternTerm::Var(var(*i)),
                    (SlotSpec::Pool(_), Some(i)) => match &subjects[i % subjects.len()] {
                        Subject::Iri(x) => PatternTerm::Iri(x.clone()),
                        // The engine's pattern grammar has no blank slot;
                        // fall back to a variable.
                        Subject::Blank(_) => {
                            this_vars.push(0);
                            PatternTerm::Var(var(0))
                        }
                    },
                    _ => unreachable!(),
                };
                let predicate = match (&p_spec, p_pool) {
                    (SlotSpec::Var(i), _) => PatternTerm::Var(var(*i)),
                    (SlotSpec::Pool(_), Some(i)) => {
                        PatternTerm::Iri(predicates[i % predicates.len()].clone())
                    }
                    _ => unreachable!(),
                };
                let object = match (&o_spec, o_pool) {
                    (SlotSpec::Var(i), _) => PatternTerm::Var(var(*i)),
                    (SlotSpec::Pool(_), Some(i)) => match &objects[i % objects.len()] {
                        Term::Iri(x) => PatternTerm::Iri(x.clone()),
                        Term::Blank(_) => {
                            this_vars.push(1);
                            PatternTerm::Var(var(1))
                        }
                        Term::Literal(l) => PatternTerm::Literal(l.clone()),
                    },
                    _ => unreachable!(),
                };

                // Keep multi-pattern queries connected so the nested-loop
                // side stays tractable.
                if !patterns.is_empty()
                    && !this_vars.iter().any(|v| seen_vars.contains(v))
                    && !seen_vars.is_empty()
                {
                    subject = PatternTerm::Var(var(seen_vars[0]));
                    this_vars.push(seen_vars[0]);
                }
                seen_vars.extend(this_vars);
                patterns.push(TriplePattern { subject, predicate, object });
            }

            let filters = filter_specs
                .into_iter()
                .map(|(v, op, rhs)| FilterCond {
                    left: Operand::Var(var(v)),
                    op: OPS[op],
                    right: match rhs {
                        RhsSpec::Int(n) => Operand::Constant(Literal::integer(n)),
                        RhsSpec::Dec(i) => Operand::Constant(
                            Literal::decimal(["2.5", "7.0"][i]).unwrap(),
                        ),
                        RhsSpec::Str(i) => Operand::Constant(Literal::string(
                            ["s0", "s1", "s2", "s3"][i],
                        )),
                        RhsSpec::Var(i) => Operand::Var(var(i)),
                    },
                })
                .collect();

            let mut variables: Vec<String> = Vec::new();
            for i in proj {
                let name = var(i);
                if !variables.contains(&name) {
                    variables.push(name);
                }
            }
            let mut order_by: Vec<String> = Vec::new();
            for i in order {
                let name = var(i);
                if !order_by.contains(&name) {
                    order_by.push(name);
                }
            }

            let mut graph = Graph::new();
            for t in triples {
                graph.insert(t);
            }
            QueryCase {
                graph,
                query: Query {
                    prefixes: PrefixMap::new(),
                    distinct,
                    variables,
                    patterns,
                    filters,
                    order_by,
                    limit,
                },
            }
        })
}

// Generators: recommender inputs.

fn brand_pool() -> Vec<Iri> {
    ["renault", "peugeot", "toyota", "honda"]
        .iter()
        .map(|s| vocab::vo(s))
        .collect()
}

fn vtype_pool() -> Vec<Iri> {
    ["sedan", "suv", "hatchback", "minivan", "truck"]
        .iter()
        .map(|s| vocab::ucpo(s))
        .collect()
}

fn color_pool() -> Vec<Iri> {
    ["black", "white", "blue", "red"]
        .iter()
        .map(|s| vocab::ucpo(s))
        .collect()
}

fn state_pool() -> Vec<Iri> {
    ["new", "used"].iter().map(|s| vocab::ucpo(s)).collect()
}

fn activity_pool() -> Vec<Iri> {
    ["businessTravel", "commuting", "familyTrip", "leisure", "hiking"]
        .iter()
        .map(|s| vocab::ucpo(s))
        .collect()
}

fn model_pool() -> Vec<Iri> {
    (0..12).map(|i| vocab::vo(&format!("model{i}"))).collect()
}

pub fn arb_listing() -> impl Strategy<Value = VehicleListing> {
    (
        0usize..1000,
        prop::sample::select(brand_pool()),
        prop::sample::select(vtype_pool()),
        prop::sample::select(color_pool()),
        prop::sample::select(state_pool()),
        500u32..=60_000,
        2i64..=9,
        0i64..=250_000,
        0u32..=100,
    )
        .prop_map(
            |(idx, brand, vehicle_type, color, state, price, seats, mileage_km, safety)| {
                VehicleListing {
                    iri: vocab::vo(&format!("veh{idx}")),
                    model: model_pool()[idx % 12].clone(),
                    model_name: format!("Model {:03}", idx % 37),
                    brand,
                    vehicle_type,
                    color,
                    state,
                    fuel_type: vocab::vo("petrol"),
                    price: f64::from(price),
                    seats,
                    mileage_km,
                    safety_score: f64::from(safety) / 10.0,
                }
            },
        )
}

pub fn arb_preferences() -> impl Strategy<Value = BTreeMap<PreferenceKind, PreferenceValue>> {
    let entity = |kind: PreferenceKind, pool: Vec<Iri>| {
        prop::option::of(prop::sample::select(pool).prop_map(move |e| (kind, PreferenceValue::Entity(e))))
    };
    let number = |kind: PreferenceKind, range: std::ops::RangeInclusive<i64>| {
        prop::option::of(range.prop_map(move |n| (kind, PreferenceValue::Number(n as f64))))
    };
    (
        entity(PreferenceKind::Brand, brand_pool()),
        entity(PreferenceKind::VehicleType, vtype_pool()),
        entity(PreferenceKind::RouteType, vec![vocab::ucpo("urbanRoute"), vocab::ucpo("highwayRoute")]),
        entity(PreferenceKind::Color, color_pool()),
        entity(PreferenceKind::State, state_pool()),
        number(PreferenceKind::MinSeats, 2..=8),
        number(PreferenceKind::MaxMileage, 10_000..=300_000),
        number(PreferenceKind::MaxBudget, 1_000..=70_000),
    )
        .prop_map(|slots| {
            let (a, b, c, d, e, f, g, h) = slots;
            [a, b, c, d, e, f, g, h].into_iter().flatten().collect()
        })
}

pub fn arb_profile() -> impl Strategy<Value = ActiveProfile> {
    arb_preferences().prop_map(|preferences| ActiveProfile {
        user: vocab::ucpo("someone"),
        profile: vocab::ucpo("someoneProfile"),
        preferences,
    })
}

pub fn arb_snapshot() -> impl Strategy<Value = ContextSnapshot> {
    (
        prop::option::of(prop::sample::select(activity_pool())),
        prop::collection::btree_set(prop::sample::select(model_pool()), 0..=4),
        prop::collection::btree_set(prop::sample::select(brand_pool()), 0..=3),
    )
        .prop_map(|(activity, liked_models, liked_brands)| ContextSnapshot {
            time: None,
            location: None,
            activity,
            device: None,
            liked_models,
            liked_brands,
        })
}

pub fn arb_config() -> impl Strategy<Value = RecommenderConfig> {
    prop_oneof![
        2 => Just(RecommenderConfig::default()),
        1 => (0u32..=100, 0u32..=100, 0u32..=100, 1u32..=100).prop_map(|(a, b, c, d)| {
            let sum = f64::from(a + b + c + d);
            RecommenderConfig {
                brand_weight: f64::from(a) / sum,
                model_weight: f64::from(b) / sum,
                attribute_weight: f64::from(c) / sum,
                context_weight: f64::from(d) / sum,
                activity_types: RecommenderConfig::default().activity_types,
            }
        }),
    ]
}
