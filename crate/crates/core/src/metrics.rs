//! Ontology quality metrics: raw vocabulary counts, derived ratios and a
//! description-logic expressivity label.
//!
//! Ratios are computed in exact integer arithmetic and rounded half-up to six
//! decimals; floating point never enters before the final rounding step.

use serde::Serialize;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::store::{Graph, Term};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("schema metrics are undefined: the graph declares no classes")]
    NoClasses,
}

/// Counts read directly off the graph's vocabulary triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BaseMetrics {
    pub class_count: usize,
    pub object_property_count: usize,
    pub data_property_count: usize,
    /// Object plus data properties.
    pub properties_count: usize,
    pub individual_count: usize,
    /// Class-to-class subclass axioms only.
    pub sub_class_of_count: usize,
    /// Domain axioms on object properties.
    pub domain_axiom_count: usize,
    /// Range axioms on object properties.
    pub range_axiom_count: usize,
    /// Every loaded statement: declarations, hierarchy and domain/range
    /// axioms, type assertions, property assertions, annotations.
    pub total_axiom_count: usize,
}

/// Ratios over the base counts, rounded half-up to six decimals.
///
/// `relationship_richness` and `class_relation_ratio` are `None` when the
/// graph has no subclass axioms and no object properties to relate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SchemaMetrics {
    /// Data properties per class.
    pub attribute_richness: f64,
    /// Subclass axioms per class.
    pub inheritance_richness: f64,
    /// Object properties over subclass axioms plus object properties.
    pub relationship_richness: Option<f64>,
    /// Total axioms per class.
    pub axiom_class_ratio: f64,
    /// Classes over subclass axioms plus object properties.
    pub class_relation_ratio: Option<f64>,
}

/// Language features detected in the graph, in label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Feature {
    /// Atomic classes with conjunction and restricted quantification.
    AttributiveBase,
    /// At least one subPropertyOf axiom.
    RoleHierarchy,
    /// At least one data property declaration.
    Datatypes,
}

impl Feature {
    fn symbol(self) -> &'static str {
        match self {
            Feature::AttributiveBase => "AL",
            Feature::RoleHierarchy => "H",
            Feature::Datatypes => "(D)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressivityReport {
    pub features: Vec<Feature>,
    pub label: String,
}

/// Full report in the shape the CLI emits as JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub base: BaseMetrics,
    pub schema: SchemaMetrics,
    pub expressivity: String,
}

/// Divides `numerator` by `denominator` exactly, rounding half-up at the
/// sixth decimal.
fn round6(numerator: u64, denominator: u64) -> f64 {
    assert!(denominator != 0, "caller guards the denominator");
    let scaled = numerator as u128 * 1_000_000;
    let d = denominator as u128;
    let mut q = scaled / d;
    if 2 * (scaled % d) >= d {
        q += 1;
    }
    q as f64 / 1e6
}

pub fn compute_base(graph: &Graph) -> BaseMetrics {
    let declared = |meta: &Term| -> BTreeSet<Term> {
        graph
            .matching(None, Some(&vocab::RDF_TYPE), Some(meta))
            .into_iter()
            .map(|t| Term::from(t.subject))
            .collect()
    };
    let classes = declared(&Term::Iri(vocab::OWL_CLASS.clone()));
    let object_properties = declared(&Term::Iri(vocab::OWL_OBJECT_PROPERTY.clone()));
    let data_properties = declared(&Term::Iri(vocab::OWL_DATATYPE_PROPERTY.clone()));

    let sub_class_of_count = graph
        .matching(None, Some(&vocab::RDFS_SUB_CLASS_OF), None)
        .into_iter()
        .filter(|t| classes.contains(&Term::from(t.subject.clone())) && classes.contains(&t.object))
        .count();

    let axioms_on_object_properties = |pred| {
        graph
            .matching(None, Some(pred), None)
            .into_iter()
            .filter(|t| object_properties.contains(&Term::from(t.subject.clone())))
            .count()
    };
    let domain_axiom_count = axioms_on_object_properties(&vocab::RDFS_DOMAIN);
    let range_axiom_count = axioms_on_object_properties(&vocab::RDFS_RANGE);

    let mut individuals: BTreeSet<Term> = BTreeSet::new();
    for t in graph.matching(None, Some(&vocab::RDF_TYPE), None) {
        let subject = Term::from(t.subject);
        if classes.contains(&t.object)
            && !classes.contains(&subject)
            && !object_properties.contains(&subject)
            && !data_properties.contains(&subject)
        {
            individuals.insert(subject);
        }
    }

    BaseMetrics {
        class_count: classes.len(),
        object_property_count: object_properties.len(),
        data_property_count: data_properties.len(),
        properties_count: object_properties.len() + data_properties.len(),
        individual_count: individuals.len(),
        sub_class_of_count,
        domain_axiom_count,
        range_axiom_count,
        total_axiom_count: graph.len(),
    }
}

pub fn compute_schema(base: &BaseMetrics) -> Result<SchemaMetrics, MetricsError> {
    let c = base.class_count as u64;
    if c == 0 {
        return Err(MetricsError::NoClasses);
    }
    let relations = base.sub_class_of_count as u64 + base.object_property_count as u64;
    let over_relations = |numerator: u64| {
        (relations != 0).then(|| round6(numerator, relations))
    };
    Ok(SchemaMetrics {
        attribute_richness: round6(base.data_property_count as u64, c),
        inheritance_richness: round6(base.sub_class_of_count as u64, c),
        relationship_richness: over_relations(base.object_property_count as u64),
        axiom_class_ratio: round6(base.total_axiom_count as u64, c),
        class_relation_ratio: over_relations(c),
    })
}

pub fn classify_expressivity(graph: &Graph) -> ExpressivityReport {
    let mut features = vec![Feature::AttributiveBase];
    if !graph
        .matching(None, Some(&vocab::RDFS_SUB_PROPERTY_OF), None)
        .is_empty()
    {
        features.push(Feature::RoleHierarchy);
    }
    let data_property = Term::Iri(vocab::OWL_DATATYPE_PROPERTY.clone());
    if !graph
        .matching(None, Some(&vocab::RDF_TYPE), Some(&data_property))
        .is_empty()
    {
        features.push(Feature::Datatypes);
    }
    let label = features.iter().map(|f| f.symbol()).collect();
    ExpressivityReport { features, label }
}

/// Convenience bundle for the CLI and tests.
pub fn report(graph: &Graph) -> Result<MetricsReport, MetricsError> {
    let base = compute_base(graph);
    let schema = compute_schema(&base)?;
    let expressivity = classify_expressivity(graph).label;
    Ok(MetricsReport {
        base,
        schema,
        expressivity,
    })
}
