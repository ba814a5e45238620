//! Regeneration and freshness checks for the files shipped under data/.
//!
//! The ignored test rewrites every generated file: the two Turtle documents
//! come from the in-code builders, and the competency goldens come from the
//! reference nested-loop evaluator over the reference closure, never from
//! the engine under test. The remaining tests pin the shipped bytes to
//! those same sources so any drift fails the build.

mod common;

use std::fs;
use std::path::{Path, PathBuf};

use ucpo_core::cq;
use ucpo_core::schema::{build_ucpo, OntologyDescriptor};
use ucpo_core::seed::seed_data;
use ucpo_core::sparql::{parse_query_with, to_tsv};
use ucpo_core::store::Graph;
use ucpo_core::turtle;
use ucpo_core::vocab;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn schema_text() -> String {
    turtle::serialize(&build_ucpo().1, &vocab::base_prefixes())
}

fn seed_text() -> String {
    turtle::serialize(&seed_data(), &vocab::base_prefixes())
}

fn reference_closure() -> Graph {
    let mut union = build_ucpo().1;
    union.extend_from(&seed_data());
    common::closure_by_reachability(&union)
}

fn reference_tsv(case: &cq::CompetencyCase, closure: &Graph) -> String {
    let query = parse_query_with(case.query_text, &cq::harness_prefixes())
        .unwrap_or_else(|e| panic!("{} does not parse: {e}", case.id));
    let table = common::answers_by_nested_loops(&query, closure, 2_000_000)
        .unwrap_or_else(|| panic!("{} exceeded the row cap", case.id));
    to_tsv(&table, &query.prefixes)
}

#[test]
#[ignore = "rewrites the generated files under data/"]
fn regenerate_data_files() {
    let dir = data_dir();
    fs::write(dir.join("ucpo-schema.ttl"), schema_text()).unwrap();
    fs::write(dir.join("seed-data.ttl"), seed_text()).unwrap();
    let closure = reference_closure();
    for case in cq::cases() {
        let path = dir.join("cq").join(format!("{}.tsv", case.id.to_lowercase()));
        fs::write(path, reference_tsv(&case, &closure)).unwrap();
    }
}

#[test]
fn shipped_schema_file_matches_builder_bytes() {
    let shipped = fs::read_to_string(data_dir().join("ucpo-schema.ttl")).unwrap();
    assert_eq!(shipped, schema_text());
}

#[test]
fn shipped_seed_file_matches_builder_bytes() {
    let shipped = fs::read_to_string(data_dir().join("seed-data.ttl")).unwrap();
    assert_eq!(shipped, seed_text());
}

#[test]
fn shipped_schema_file_parses_back_to_the_built_graph() {
    let shipped = fs::read_to_string(data_dir().join("ucpo-schema.ttl")).unwrap();
    let (prefixes, graph) = turtle::parse(&shipped).expect("shipped schema parses");
    assert_eq!(graph, build_ucpo().1);
    assert_eq!(prefixes, vocab::base_prefixes());
}

#[test]
fn shipped_seed_file_parses_back_to_the_built_graph() {
    let shipped = fs::read_to_string(data_dir().join("seed-data.ttl")).unwrap();
    let (prefixes, graph) = turtle::parse(&shipped).expect("shipped seed parses");
    assert_eq!(graph, seed_data());
    assert_eq!(prefixes, vocab::base_prefixes());
}

#[test]
fn shipped_schema_file_yields_the_built_descriptor() {
    let shipped = fs::read_to_string(data_dir().join("ucpo-schema.ttl")).unwrap();
    let (prefixes, graph) = turtle::parse(&shipped).expect("shipped schema parses");
    let descriptor = OntologyDescriptor::from_graph(&graph, prefixes).expect("descriptor loads");
    assert_eq!(descriptor, build_ucpo().0);
}

#[test]
fn shipped_goldens_match_the_reference_evaluator() {
    let closure = reference_closure();
    for case in cq::cases() {
        let path = data_dir().join("cq").join(format!("{}.tsv", case.id.to_lowercase()));
        let shipped = fs::read_to_string(&path).unwrap();
        assert_eq!(
            shipped,
            reference_tsv(&case, &closure),
            "{} golden is stale; rerun the ignored regeneration test",
            case.id
        );
    }
}
