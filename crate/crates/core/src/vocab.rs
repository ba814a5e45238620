//! Namespace constants and well-known IRIs shared across the crate.

use std::sync::LazyLock;

use crate::store::{Iri, PrefixMap};

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";

/// Core profile vocabulary: users, profiles, preferences, contexts.
pub const UCPO_NS: &str = "http://vivocaz.fr/ucpo/ns#";
/// Demographic vocabulary reused for personal-profile details.
pub const UP_NS: &str = "http://vivocaz.fr/up/ns#";
/// Vehicle-domain vocabulary: catalog entries, models, drivetrain terms.
pub const VO_NS: &str = "http://vivocaz.fr/vo/ns#";

fn must(value: String) -> Iri {
    Iri::new(value).expect("vocabulary IRI is well formed")
}

macro_rules! known_iri {
    ($(#[$meta:meta])* $name:ident, $ns:expr, $local:expr) => {
        $(#[$meta])*
        pub static $name: LazyLock<Iri> = LazyLock::new(|| must(format!("{}{}", $ns, $local)));
    };
}

known_iri!(RDF_TYPE, RDF_NS, "type");
known_iri!(RDF_LANG_STRING, RDF_NS, "langString");
known_iri!(RDFS_SUB_CLASS_OF, RDFS_NS, "subClassOf");
known_iri!(RDFS_SUB_PROPERTY_OF, RDFS_NS, "subPropertyOf");
known_iri!(RDFS_DOMAIN, RDFS_NS, "domain");
known_iri!(RDFS_RANGE, RDFS_NS, "range");
known_iri!(RDFS_LABEL, RDFS_NS, "label");
known_iri!(RDFS_COMMENT, RDFS_NS, "comment");
known_iri!(OWL_CLASS, OWL_NS, "Class");
known_iri!(OWL_OBJECT_PROPERTY, OWL_NS, "ObjectProperty");
known_iri!(OWL_DATATYPE_PROPERTY, OWL_NS, "DatatypeProperty");
known_iri!(XSD_STRING, XSD_NS, "string");
known_iri!(XSD_INTEGER, XSD_NS, "integer");
known_iri!(XSD_DECIMAL, XSD_NS, "decimal");

/// Builds an IRI in the core profile namespace.
pub fn ucpo(local: &str) -> Iri {
    must(format!("{UCPO_NS}{local}"))
}

/// Builds an IRI in the demographic namespace.
pub fn up(local: &str) -> Iri {
    must(format!("{UP_NS}{local}"))
}

/// Builds an IRI in the vehicle-domain namespace.
pub fn vo(local: &str) -> Iri {
    must(format!("{VO_NS}{local}"))
}

/// Builds an IRI in the XML Schema datatype namespace.
pub fn xsd(local: &str) -> Iri {
    must(format!("{XSD_NS}{local}"))
}

/// Prefix bindings used by the shipped ontology and seed files.
pub fn base_prefixes() -> PrefixMap {
    let mut pm = PrefixMap::new();
    pm.bind("rdf", Iri::new(RDF_NS).unwrap());
    pm.bind("rdfs", Iri::new(RDFS_NS).unwrap());
    pm.bind("xsd", Iri::new(XSD_NS).unwrap());
    pm.bind("owl", Iri::new(OWL_NS).unwrap());
    pm.bind("ucpo", Iri::new(UCPO_NS).unwrap());
    pm.bind("up", Iri::new(UP_NS).unwrap());
    pm.bind("vo", Iri::new(VO_NS).unwrap());
    pm
}
