//! Vehicle recommendation from a user's active profile: mandatory preference
//! constraints prune the catalog, then a weighted sum of brand affinity,
//! model affinity, attribute closeness and context fit ranks the survivors.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::store::{Graph, Iri, Subject, Term};
use crate::vocab::{ucpo, vo};

/// Built-in weights and activity mapping, used when no override file is set.
const DEFAULT_CONFIG: &str = include_str!("../data/recommender.conf");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecommenderError {
    #[error("user {user} has no profile {profile}")]
    ProfileNotFound { user: Iri, profile: Iri },
    #[error("recommendation count must be at least 1")]
    InvalidCount,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    Malformed { line: usize },
    #[error("line {line}: unknown key {key}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {key} needs a non-negative number")]
    BadWeight { line: usize, key: String },
    #[error("missing weight {0}")]
    MissingWeight(&'static str),
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
}

/// Scoring weights plus the activity-to-vehicle-type fit table.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommenderConfig {
    pub brand_weight: f64,
    pub model_weight: f64,
    pub attribute_weight: f64,
    pub context_weight: f64,
    pub activity_types: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl Default for RecommenderConfig {
    fn default() -> Self {
        parse_config(DEFAULT_CONFIG).expect("embedded configuration is well formed")
    }
}

/// Parses the flat `key = value` configuration format. Comment lines start
/// with '#'. Weight keys are mandatory and must sum to 1 within 1e-9.
pub fn parse_config(text: &str) -> Result<RecommenderConfig, ConfigError> {
    let mut weights: BTreeMap<&str, f64> = BTreeMap::new();
    let mut activity_types = BTreeMap::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or(ConfigError::Malformed { line })?;
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Malformed { line });
        }

        if let Some(weight_name) = key.strip_prefix("weight.") {
            let slot = match weight_name {
                "brand_affinity" => "brand_affinity",
                "model_affinity" => "model_affinity",
                "attribute_fit" => "attribute_fit",
                "context_fit" => "context_fit",
                _ => {
                    return Err(ConfigError::UnknownKey { line, key: key.to_owned() });
                }
            };
            let parsed: f64 = value.parse().map_err(|_| ConfigError::BadWeight {
                line,
                key: key.to_owned(),
            })?;
            if !parsed.is_finite() || parsed < 0.0 {
                return Err(ConfigError::BadWeight { line, key: key.to_owned() });
            }
            weights.insert(slot, parsed);
        } else if let Some(activity) = key.strip_prefix("context.activity.") {
            let types: BTreeSet<Iri> = value
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(ucpo)
                .collect();
            if types.is_empty() {
                return Err(ConfigError::Malformed { line });
            }
            activity_types.insert(ucpo(activity), types);
        } else {
            return Err(ConfigError::UnknownKey { line, key: key.to_owned() });
        }
    }

    let mut take = |name: &'static str| {
        weights.remove(name).ok_or(ConfigError::MissingWeight(name))
    };
    let config = RecommenderConfig {
        brand_weight: take("brand_affinity")?,
        model_weight: take("model_affinity")?,
        attribute_weight: take("attribute_fit")?,
        context_weight: take("context_fit")?,
        activity_types,
    };
    let sum = config.brand_weight
        + config.model_weight
        + config.attribute_weight
        + config.context_weight;
    if (sum - 1.0).abs() > 1e-9 {
        return Err(ConfigError::WeightSum(sum));
    }
    Ok(config)
}

/// The preference slots a profile may fill. Route type has no counterpart on
/// listings, so it never participates in filtering or attribute closeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PreferenceKind {
    Brand,
    VehicleType,
    RouteType,
    Color,
    State,
    MinSeats,
    MaxMileage,
    MaxBudget,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PreferenceValue {
    Entity(Iri),
    Number(f64),
}

/// Preferences stated by one profile; absent slots stay absent.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveProfile {
    pub user: Iri,
    pub profile: Iri,
    pub preferences: BTreeMap<PreferenceKind, PreferenceValue>,
}

/// Contextual signals attached to the profile's context node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContextSnapshot {
    pub time: Option<Iri>,
    pub location: Option<Iri>,
    pub activity: Option<Iri>,
    pub device: Option<Iri>,
    pub liked_models: BTreeSet<Iri>,
    pub liked_brands: BTreeSet<Iri>,
}

/// A catalog vehicle flattened for filtering and scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleListing {
    pub iri: Iri,
    pub model: Iri,
    pub model_name: String,
    pub brand: Iri,
    pub vehicle_type: Iri,
    pub color: Iri,
    pub state: Iri,
    pub fuel_type: Iri,
    pub price: f64,
    pub seats: i64,
    pub mileage_km: i64,
    pub safety_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub listing: VehicleListing,
    pub score: f64,
    pub explanation: Vec<(String, f64)>,
}

fn first_object(closure: &Graph, subject: &Iri, predicate: &Iri) -> Option<Term> {
    closure
        .matching(Some(&Subject::Iri(subject.clone())), Some(predicate), None)
        .into_iter()
        .next()
        .map(|t| t.object)
}

fn first_iri(closure: &Graph, subject: &Iri, predicate: &Iri) -> Option<Iri> {
    match first_object(closure, subject, predicate) {
        Some(Term::Iri(iri)) => Some(iri),
        _ => None,
    }
}

fn all_iris(closure: &Graph, subject: &Iri, predicate: &Iri) -> BTreeSet<Iri> {
    closure
        .matching(Some(&Subject::Iri(subject.clone())), Some(predicate), None)
        .into_iter()
        .filter_map(|t| t.object.as_iri().cloned())
        .collect()
}

fn first_number(closure: &Graph, subject: &Iri, predicate: &Iri) -> Option<f64> {
    match first_object(closure, subject, predicate) {
        Some(Term::Literal(lit)) => lit.lexical().parse().ok(),
        _ => None,
    }
}

/// Reads the stated preferences and context snapshot of one profile.
/// When a slot is asserted more than once the canonically smallest value
/// wins, keeping extraction deterministic.
pub fn extract_profile(
    closure: &Graph,
    user: &Iri,
    profile: &Iri,
) -> Result<(ActiveProfile, ContextSnapshot), RecommenderError> {
    let link = crate::store::Triple::new(
        user.clone(),
        ucpo("hasUserProfile"),
        profile.clone(),
    );
    if !closure.contains(&link) {
        return Err(RecommenderError::ProfileNotFound {
            user: user.clone(),
            profile: profile.clone(),
        });
    }

    let mut preferences = BTreeMap::new();
    if let Some(pref) = first_iri(closure, profile, &ucpo("hasVehiclePreference")) {
        let mut entity = |kind: PreferenceKind, predicate: &str| {
            if let Some(value) = first_iri(closure, &pref, &ucpo(predicate)) {
                preferences.insert(kind, PreferenceValue::Entity(value));
            }
        };
        entity(PreferenceKind::Brand, "hasFavoriteBrand");
        entity(PreferenceKind::VehicleType, "hasPreferredVehicleType");
        entity(PreferenceKind::RouteType, "hasPreferredRouteType");
        entity(PreferenceKind::Color, "hasPreferredColor");
        entity(PreferenceKind::State, "hasPreferredState");

        let mut indirect = |kind: PreferenceKind, hop: &str, leaf: &str| {
            let node = first_iri(closure, &pref, &ucpo(hop));
            if let Some(value) = node.and_then(|n| first_number(closure, &n, &ucpo(leaf))) {
                if value >= 0.0 {
                    preferences.insert(kind, PreferenceValue::Number(value));
                }
            }
        };
        indirect(PreferenceKind::MaxBudget, "hasBudget", "amount");
        indirect(PreferenceKind::MaxMileage, "hasMileagePreference", "maxKilometers");
        indirect(PreferenceKind::MinSeats, "hasNumberOfPlaces", "minSeats");
    }

    let mut snapshot = ContextSnapshot::default();
    if let Some(ctx) = first_iri(closure, profile, &ucpo("hasProfileContext")) {
        snapshot.time = first_iri(closure, &ctx, &ucpo("hasTime"));
        snapshot.location = first_iri(closure, &ctx, &ucpo("hasLocation"));
        snapshot.activity = first_iri(closure, &ctx, &ucpo("hasActivity"));
        snapshot.device = first_iri(closure, &ctx, &ucpo("hasDevice"));
        snapshot.liked_models = all_iris(closure, &ctx, &ucpo("likesModel"));
        snapshot.liked_brands = all_iris(closure, &ctx, &ucpo("likesBrand"));
    }

    let active = ActiveProfile {
        user: user.clone(),
        profile: profile.clone(),
        preferences,
    };
    Ok((active, snapshot))
}

/// Flattens every completely described vehicle in the closure into a listing,
/// ordered by IRI. Incomplete catalog entries are skipped.
pub fn extract_listings(closure: &Graph) -> Vec<VehicleListing> {
    let vehicle_class = Term::Iri(vo("Vehicle"));
    let mut listings = Vec::new();
    for triple in closure.matching(None, Some(&crate::vocab::RDF_TYPE), Some(&vehicle_class)) {
        let Subject::Iri(iri) = triple.subject else {
            continue;
        };
        let listing = (|| {
            let model = first_iri(closure, &iri, &vo("hasModel"))?;
            Some(VehicleListing {
                model_name: match first_object(closure, &model, &vo("modelName"))? {
                    Term::Literal(lit) => lit.lexical().to_owned(),
                    _ => return None,
                },
                model,
                brand: first_iri(closure, &iri, &vo("hasBrand"))?,
                vehicle_type: first_iri(closure, &iri, &vo("hasVehicleType"))?,
                color: first_iri(closure, &iri, &vo("hasColor"))?,
                state: first_iri(closure, &iri, &vo("hasState"))?,
                fuel_type: first_iri(closure, &iri, &vo("hasFuelType"))?,
                price: first_number(closure, &iri, &vo("price"))?,
                seats: first_number(closure, &iri, &vo("seats"))? as i64,
                mileage_km: first_number(closure, &iri, &vo("mileageKm"))? as i64,
                safety_score: first_number(closure, &iri, &vo("safetyScore"))?,
                iri: iri.clone(),
            })
        })();
        if let Some(listing) = listing {
            listings.push(listing);
        }
    }
    listings
}

fn satisfies(listing: &VehicleListing, kind: PreferenceKind, value: &PreferenceValue) -> bool {
    match (kind, value) {
        (PreferenceKind::Brand, PreferenceValue::Entity(iri)) => listing.brand == *iri,
        (PreferenceKind::VehicleType, PreferenceValue::Entity(iri)) => {
            listing.vehicle_type == *iri
        }
        (PreferenceKind::Color, PreferenceValue::Entity(iri)) => listing.color == *iri,
        (PreferenceKind::State, PreferenceValue::Entity(iri)) => listing.state == *iri,
        (PreferenceKind::MinSeats, PreferenceValue::Number(n)) => (listing.seats as f64) >= *n,
        (PreferenceKind::MaxMileage, PreferenceValue::Number(n)) => {
            (listing.mileage_km as f64) <= *n
        }
        (PreferenceKind::MaxBudget, PreferenceValue::Number(n)) => listing.price <= *n,
        // Route type never constrains a listing; malformed slots are inert.
        _ => true,
    }
}

/// Keeps the listings satisfying every present preference. An empty
/// preference map keeps everything.
pub fn filter_hard(listings: &[VehicleListing], profile: &ActiveProfile) -> Vec<VehicleListing> {
    listings
        .iter()
        .filter(|listing| {
            profile
                .preferences
                .iter()
                .all(|(kind, value)| satisfies(listing, *kind, value))
        })
        .cloned()
        .collect()
}

fn clamp01(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}

/// Mean closeness over the stated listing-comparable preferences: indicator
/// terms for categorical slots, remaining-headroom fractions for numeric
/// ceilings. No stated preference at all scores a neutral 0.5.
fn attribute_fit(listing: &VehicleListing, profile: &ActiveProfile) -> f64 {
    let mut sum = 0.0;
    let mut count = 0u32;
    for (kind, value) in &profile.preferences {
        let term = match (kind, value) {
            (PreferenceKind::RouteType, _) => continue,
            (PreferenceKind::MaxBudget, PreferenceValue::Number(n)) if *n > 0.0 => {
                clamp01(1.0 - listing.price / n)
            }
            (PreferenceKind::MaxMileage, PreferenceValue::Number(n)) if *n > 0.0 => {
                clamp01(1.0 - listing.mileage_km as f64 / n)
            }
            _ => {
                if satisfies(listing, *kind, value) {
                    1.0
                } else {
                    0.0
                }
            }
        };
        sum += term;
        count += 1;
    }
    if count == 0 {
        0.5
    } else {
        sum / f64::from(count)
    }
}

/// Activity fit: 1 when the activity maps to the listing's vehicle type,
/// 0 when it maps elsewhere, 0.5 when the activity has no mapping, and 0
/// when the snapshot carries no activity at all.
fn context_fit(listing: &VehicleListing, snapshot: &ContextSnapshot, config: &RecommenderConfig) -> f64 {
    let Some(activity) = &snapshot.activity else {
        return 0.0;
    };
    match config.activity_types.get(activity) {
        None => 0.5,
        Some(types) if types.contains(&listing.vehicle_type) => 1.0,
        Some(_) => 0.0,
    }
}

/// Weighted component sum in [0, 1] plus the per-criterion contributions.
/// The score is defined as the exact sum of the explanation entries.
pub fn score(
    listing: &VehicleListing,
    profile: &ActiveProfile,
    snapshot: &ContextSnapshot,
    config: &RecommenderConfig,
) -> (f64, Vec<(String, f64)>) {
    let brand = if snapshot.liked_brands.contains(&listing.brand) { 1.0 } else { 0.0 };
    let model = if snapshot.liked_models.contains(&listing.model) { 1.0 } else { 0.0 };
    let attribute = attribute_fit(listing, profile);
    let context = context_fit(listing, snapshot, config);

    let explanation = vec![
        ("brand_affinity".to_owned(), config.brand_weight * brand),
        ("model_affinity".to_owned(), config.model_weight * model),
        ("attribute_fit".to_owned(), config.attribute_weight * attribute),
        ("context_fit".to_owned(), config.context_weight * context),
    ];
    let total = explanation.iter().map(|(_, c)| c).sum();
    (total, explanation)
}

/// Filters, scores, and ranks: descending score, ties by ascending model
/// name, truncated to the k best.
pub fn recommend(
    closure: &Graph,
    user: &Iri,
    profile: &Iri,
    k: usize,
    config: &RecommenderConfig,
) -> Result<Vec<Recommendation>, RecommenderError> {
    if k == 0 {
        return Err(RecommenderError::InvalidCount);
    }
    let (active, snapshot) = extract_profile(closure, user, profile)?;
    let listings = extract_listings(closure);
    let candidates = filter_hard(&listings, &active);

    let mut ranked: Vec<Recommendation> = candidates
        .into_iter()
        .map(|listing| {
            let (total, explanation) = score(&listing, &active, &snapshot, config);
            Recommendation { listing, score: total, explanation }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.listing.model_name.cmp(&b.listing.model_name))
    });
    ranked.truncate(k);
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoner::materialize;
    use crate::schema::build_ucpo;
    use crate::seed::seed_data;

    fn closure() -> Graph {
        let (_, mut graph) = build_ucpo();
        graph.extend_from(&seed_data());
        materialize(&graph).expect("seed hierarchy is acyclic").graph
    }

    fn names(recs: &[Recommendation]) -> Vec<&str> {
        recs.iter().map(|r| r.listing.model_name.as_str()).collect()
    }

    #[test]
    fn default_config_parses() {
        let config = RecommenderConfig::default();
        assert!((config.brand_weight - 0.35).abs() < 1e-12);
        assert_eq!(config.activity_types.len(), 4);
        let family = &config.activity_types[&ucpo("familyTrip")];
        assert!(family.contains(&ucpo("suv")) && family.contains(&ucpo("minivan")));
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(matches!(
            parse_config("weight.brand_affinity 0.35"),
            Err(ConfigError::Malformed { line: 1 })
        ));
        assert!(matches!(
            parse_config("weight.monkey = 0.2"),
            Err(ConfigError::UnknownKey { .. })
        ));
        let unbalanced = "weight.brand_affinity = 0.5\nweight.model_affinity = 0.5\n\
                          weight.attribute_fit = 0.5\nweight.context_fit = 0.5";
        assert!(matches!(parse_config(unbalanced), Err(ConfigError::WeightSum(_))));
        assert!(matches!(
            parse_config("weight.brand_affinity = 1.0"),
            Err(ConfigError::MissingWeight(_))
        ));
    }

    #[test]
    fn profile_extraction_reads_every_slot() {
        let closure = closure();
        let (active, snapshot) =
            extract_profile(&closure, &ucpo("louis"), &ucpo("louisProfile")).unwrap();
        assert_eq!(active.preferences.len(), 8);
        assert_eq!(
            active.preferences[&PreferenceKind::Brand],
            PreferenceValue::Entity(vo("peugeot"))
        );
        assert_eq!(
            active.preferences[&PreferenceKind::MaxBudget],
            PreferenceValue::Number(9000.0)
        );
        assert_eq!(snapshot.activity, Some(ucpo("commuting")));
        assert_eq!(snapshot.liked_models.len(), 2);

        let (family, _) =
            extract_profile(&closure, &ucpo("henri"), &ucpo("henriFamily")).unwrap();
        assert_eq!(family.preferences.len(), 5);
        assert!(!family.preferences.contains_key(&PreferenceKind::Brand));
    }

    #[test]
    fn missing_link_is_not_found() {
        let closure = closure();
        let err = extract_profile(&closure, &ucpo("louis"), &ucpo("henriPro")).unwrap_err();
        assert!(matches!(err, RecommenderError::ProfileNotFound { .. }));
    }

    #[test]
    fn louis_filter_keeps_only_cheap_blue_peugeot_sedans() {
        let closure = closure();
        let (active, _) =
            extract_profile(&closure, &ucpo("louis"), &ucpo("louisProfile")).unwrap();
        let survivors = filter_hard(&extract_listings(&closure), &active);
        let mut iris: Vec<&str> = survivors.iter().map(|l| l.iri.as_str()).collect();
        iris.sort_unstable();
        assert_eq!(
            iris,
            vec![
                vo("vehicle206").as_str().to_owned(),
                vo("vehicle207").as_str().to_owned(),
                vo("vehicle208").as_str().to_owned(),
            ]
        );
    }

    #[test]
    fn empty_preferences_keep_everything() {
        let closure = closure();
        let listings = extract_listings(&closure);
        let blank = ActiveProfile {
            user: ucpo("nobody"),
            profile: ucpo("nothing"),
            preferences: BTreeMap::new(),
        };
        assert_eq!(filter_hard(&listings, &blank).len(), listings.len());
    }

    #[test]
    fn louis_ranking_and_scores() {
        let closure = closure();
        let config = RecommenderConfig::default();
        let recs =
            recommend(&closure, &ucpo("louis"), &ucpo("louisProfile"), 3, &config).unwrap();
        assert_eq!(names(&recs), vec!["Peugeot 206", "Peugeot 207", "Peugeot 208"]);
        let expected = [
            0.35 + 0.25 + 0.2 * ((5.0 + 59.0 / 120.0 + 0.5) / 7.0) + 0.2,
            0.35 + 0.25 + 0.2 * ((5.0 + 68.0 / 120.0 + 31.0 / 90.0) / 7.0) + 0.2,
            0.35 + 0.2 * ((5.0 + 82.0 / 120.0 + 11.0 / 90.0) / 7.0) + 0.2,
        ];
        for (rec, want) in recs.iter().zip(expected) {
            assert!((rec.score - want).abs() < 1e-9, "{}: {} vs {want}", rec.listing.model_name, rec.score);
        }
    }

    #[test]
    fn pierre_ranking_prefers_the_liked_toyota() {
        let closure = closure();
        let config = RecommenderConfig::default();
        let recs =
            recommend(&closure, &ucpo("pierre"), &ucpo("pierreProfile"), 3, &config).unwrap();
        assert_eq!(
            names(&recs),
            vec!["Toyota RAV4 Hybrid", "Honda CR-V Hybrid", "Lexus UX Hybrid"]
        );
        assert!((recs[0].score - 0.9585).abs() < 1e-9);
        assert!((recs[1].score - (0.25 + 0.2 * (931.0 / 1200.0) + 0.2)).abs() < 1e-9);
        assert!((recs[2].score - 0.6035).abs() < 1e-9);
    }

    #[test]
    fn henri_profiles_stay_disjoint() {
        let closure = closure();
        let config = RecommenderConfig::default();
        let pro = recommend(&closure, &ucpo("henri"), &ucpo("henriPro"), 2, &config).unwrap();
        let family =
            recommend(&closure, &ucpo("henri"), &ucpo("henriFamily"), 2, &config).unwrap();
        assert_eq!(names(&pro), vec!["Renault Megane", "Renault Talisman"]);
        assert_eq!(names(&family), vec!["Renault Koleos", "Renault Scenic"]);
        let pro_set: BTreeSet<&str> = names(&pro).into_iter().collect();
        let family_set: BTreeSet<&str> = names(&family).into_iter().collect();
        assert!(pro_set.is_disjoint(&family_set));
    }

    #[test]
    fn explanations_sum_to_scores() {
        let closure = closure();
        let config = RecommenderConfig::default();
        for (user, profile) in [
            ("henri", "henriPro"),
            ("henri", "henriFamily"),
            ("louis", "louisProfile"),
            ("pierre", "pierreProfile"),
        ] {
            let recs =
                recommend(&closure, &ucpo(user), &ucpo(profile), 10, &config).unwrap();
            assert!(!recs.is_empty());
            for rec in recs {
                let sum: f64 = rec.explanation.iter().map(|(_, c)| c).sum();
                assert!((sum - rec.score).abs() < 1e-9);
                assert!((0.0..=1.0).contains(&rec.score));
                assert_eq!(rec.explanation.len(), 4);
            }
        }
    }

    #[test]
    fn bare_inputs_leave_only_the_attribute_term()  {
        let closure = closure();
        let listing = extract_listings(&closure).into_iter().next().unwrap();
        let blank_profile = ActiveProfile {
            user: ucpo("nobody"),
            profile: ucpo("nothing"),
            preferences: BTreeMap::new(),
        };
        let blank_snapshot = ContextSnapshot::default();
        let config = RecommenderConfig::default();
        let (total, explanation) = score(&listing, &blank_profile, &blank_snapshot, &config);
        assert!((total - 0.2 * 0.5).abs() < 1e-12);
        for (criterion, contribution) in &explanation {
            if criterion != "attribute_fit" {
                assert_eq!(*contribution, 0.0);
            }
        }
    }

    #[test]
    fn zero_k_is_rejected() {
        let closure = closure();
        let config = RecommenderConfig::default();
        let err = recommend(&closure, &ucpo("louis"), &ucpo("louisProfile"), 0, &config)
            .unwrap_err();
        assert_eq!(err, RecommenderError::InvalidCount);
    }
}
