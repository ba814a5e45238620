//! Knowledge-graph engine for user contextual profiles in the vehicle-sales
//! domain: triple storage, Turtle input and output, schema validation,
//! forward-chaining inference, pattern queries, ontology quality metrics and
//! profile-driven vehicle recommendations.

pub mod cq;
pub mod metrics;
pub mod reasoner;
pub mod recommender;
pub mod schema;
pub mod seed;
pub mod sparql;
pub mod store;
pub mod turtle;
pub mod vocab;
