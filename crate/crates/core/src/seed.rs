//! Shipped instance data: three users with four profiles, their preference
//! and context nodes, the shared descriptor vocabulary, and a 27-entry used
//! vehicle catalog. Numeric catalog values are illustrative, chosen so the
//! bundled recommendation scenarios have stable outcomes.

use crate::schema::local_name;
use crate::store::{Graph, Iri, Literal, Triple};
use crate::vocab::{ucpo, up, vo, RDFS_COMMENT, RDFS_LABEL, RDF_TYPE};

struct CatalogRow {
    key: &'static str,
    name: &'static str,
    brand: &'static str,
    vehicle_type: &'static str,
    color: &'static str,
    fuel: &'static str,
    transmission: &'static str,
    price: &'static str,
    mileage_km: i64,
    seats: i64,
    safety: &'static str,
    fuel_efficiency: &'static str,
    year: i64,
    trunk_liters: i64,
}

/// One row per catalog vehicle; every listed state is "used".
const CATALOG: &[CatalogRow] = &[
    row("206", "Peugeot 206", "peugeot", "sedan", "blue", "petrol", "manual", "4500.0", 61000, 5, "3.5", "6.1", 2006, 245),
    row("207", "Peugeot 207", "peugeot", "sedan", "blue", "petrol", "manual", "5900.0", 52000, 5, "3.5", "5.8", 2010, 270),
    row("208", "Peugeot 208", "peugeot", "sedan", "blue", "petrol", "manual", "7900.0", 38000, 5, "4.0", "5.2", 2015, 285),
    row("3008", "Peugeot 3008", "peugeot", "suv", "white", "diesel", "automatic", "17500.0", 72000, 5, "4.6", "5.0", 2018, 520),
    row("508", "Peugeot 508", "peugeot", "sedan", "grey", "diesel", "automatic", "14900.0", 59000, 5, "4.7", "4.7", 2018, 487),
    row("Clio", "Renault Clio", "renault", "hatchback", "red", "petrol", "manual", "8400.0", 46000, 5, "4.2", "5.3", 2017, 300),
    row("Megane", "Renault Megane", "renault", "sedan", "grey", "diesel", "manual", "13900.0", 48000, 5, "4.5", "4.4", 2018, 508),
    row("Talisman", "Renault Talisman", "renault", "sedan", "black", "diesel", "automatic", "16900.0", 52000, 5, "4.6", "4.7", 2017, 608),
    row("Koleos", "Renault Koleos", "renault", "suv", "white", "diesel", "automatic", "18900.0", 45000, 5, "4.4", "5.6", 2019, 579),
    row("Scenic", "Renault Scenic", "renault", "suv", "blue", "petrol", "automatic", "16900.0", 60000, 5, "4.3", "6.0", 2018, 572),
    row("Rav4Hybrid", "Toyota RAV4 Hybrid", "toyota", "suv", "white", "hybrid", "automatic", "24900.0", 35000, 5, "4.8", "5.1", 2020, 580),
    row("Corolla", "Toyota Corolla", "toyota", "sedan", "grey", "hybrid", "automatic", "17900.0", 41000, 5, "4.6", "4.5", 2019, 471),
    row("Yaris", "Toyota Yaris", "toyota", "hatchback", "blue", "hybrid", "automatic", "12900.0", 33000, 5, "4.4", "4.3", 2018, 286),
    row("CrvHybrid", "Honda CR-V Hybrid", "honda", "suv", "grey", "hybrid", "automatic", "26900.0", 28000, 5, "4.7", "5.3", 2021, 560),
    row("Civic", "Honda Civic", "honda", "sedan", "black", "petrol", "manual", "13400.0", 47000, 5, "4.5", "5.6", 2018, 420),
    row("UxHybrid", "Lexus UX Hybrid", "lexus", "suv", "black", "hybrid", "automatic", "27900.0", 21000, 5, "4.9", "4.9", 2021, 320),
    row("Ct200h", "Lexus CT 200h", "lexus", "hatchback", "grey", "hybrid", "automatic", "15400.0", 54000, 5, "4.5", "4.7", 2016, 375),
    row("C3", "Citroen C3", "citroen", "hatchback", "red", "petrol", "manual", "6900.0", 43000, 5, "4.0", "5.5", 2016, 300),
    row("C4", "Citroen C4", "citroen", "sedan", "grey", "diesel", "manual", "8900.0", 67000, 5, "4.2", "4.9", 2015, 380),
    row("Golf", "Volkswagen Golf", "volkswagen", "hatchback", "black", "petrol", "manual", "11900.0", 49000, 5, "4.5", "5.4", 2017, 380),
    row("Passat", "Volkswagen Passat", "volkswagen", "sedan", "grey", "diesel", "automatic", "15900.0", 72000, 5, "4.6", "4.8", 2017, 586),
    row("Focus", "Ford Focus", "ford", "hatchback", "blue", "petrol", "manual", "9900.0", 58000, 5, "4.3", "5.7", 2016, 316),
    row("Fiesta", "Ford Fiesta", "ford", "hatchback", "red", "petrol", "manual", "7400.0", 51000, 5, "4.1", "5.2", 2016, 276),
    row("118i", "BMW 118i", "bmw", "hatchback", "white", "petrol", "automatic", "14900.0", 44000, 5, "4.4", "5.9", 2017, 360),
    row("320d", "BMW 320d", "bmw", "sedan", "black", "diesel", "automatic", "19900.0", 66000, 5, "4.7", "4.5", 2017, 480),
    row("Fiat500", "Fiat 500", "fiat", "hatchback", "white", "petrol", "manual", "6400.0", 37000, 4, "3.8", "4.9", 2015, 185),
    row("Panda", "Fiat Panda", "fiat", "hatchback", "red", "petrol", "manual", "5400.0", 62000, 4, "3.6", "5.1", 2014, 225),
];

#[allow(clippy::too_many_arguments)]
const fn row(
    key: &'static str,
    name: &'static str,
    brand: &'static str,
    vehicle_type: &'static str,
    color: &'static str,
    fuel: &'static str,
    transmission: &'static str,
    price: &'static str,
    mileage_km: i64,
    seats: i64,
    safety: &'static str,
    fuel_efficiency: &'static str,
    year: i64,
    trunk_liters: i64,
) -> CatalogRow {
    CatalogRow {
        key,
        name,
        brand,
        vehicle_type,
        color,
        fuel,
        transmission,
        price,
        mileage_km,
        seats,
        safety,
        fuel_efficiency,
        year,
        trunk_liters,
    }
}

struct SeedBuilder {
    graph: Graph,
}

impl SeedBuilder {
    fn new() -> Self {
        SeedBuilder { graph: Graph::new() }
    }

    /// Declares an individual: one type assertion and one label.
    fn inst(&mut self, iri: &Iri, class: &Iri) {
        self.graph.insert(Triple::new(iri.clone(), RDF_TYPE.clone(), class.clone()));
        self.graph.insert(Triple::new(
            iri.clone(),
            RDFS_LABEL.clone(),
            Literal::string(local_name(iri)),
        ));
    }

    fn link(&mut self, subject: &Iri, predicate: &Iri, object: &Iri) {
        self.graph
            .insert(Triple::new(subject.clone(), predicate.clone(), object.clone()));
    }

    fn text(&mut self, subject: &Iri, predicate: &Iri, value: &str) {
        self.graph
            .insert(Triple::new(subject.clone(), predicate.clone(), Literal::string(value)));
    }

    fn int(&mut self, subject: &Iri, predicate: &Iri, value: i64) {
        self.graph
            .insert(Triple::new(subject.clone(), predicate.clone(), Literal::integer(value)));
    }

    fn dec(&mut self, subject: &Iri, predicate: &Iri, lexical: &str) {
        let value = Literal::decimal(lexical).expect("seed decimals are well formed");
        self.graph.insert(Triple::new(subject.clone(), predicate.clone(), value));
    }

    fn comment(&mut self, subject: &Iri, value: &str) {
        self.graph.insert(Triple::new(
            subject.clone(),
            RDFS_COMMENT.clone(),
            Literal::string(value),
        ));
    }
}

/// Builds the complete instance graph. Deterministic; validates cleanly
/// against the built-in schema.
pub fn seed_data() -> Graph {
    let mut b = SeedBuilder::new();

    descriptor_vocabulary(&mut b);
    users_and_demographics(&mut b);
    profiles_and_preferences(&mut b);
    contexts(&mut b);
    catalog(&mut b);

    b.graph
}

/// Shared enumeration individuals referenced by profiles and listings.
fn descriptor_vocabulary(b: &mut SeedBuilder) {
    for (class, locals) in [
        ("Gender", &["male", "female"][..]),
        ("MaritalStatus", &["single", "married", "divorced"][..]),
        ("Education", &["highSchool", "bachelor", "master"][..]),
        ("Language", &["french", "english"][..]),
        ("Occupation", &["engineer", "salesManager", "teacher"][..]),
        ("Income", &["incomeMedium", "incomeHigh"][..]),
        ("Address", &["addressCompiegne", "addressParis", "addressSoissons"][..]),
    ] {
        let class = up(class);
        for local in locals {
            b.inst(&up(local), &class);
        }
    }

    for (class, locals) in [
        ("VehicleType", &["sedan", "suv", "hatchback", "minivan", "truck"][..]),
        ("RouteType", &["urbanRoute", "highwayRoute", "mixedRoute"][..]),
        ("Color", &["black", "white", "blue", "red", "grey"][..]),
        ("State", &["new", "used"][..]),
        ("Time", &["morning", "afternoon", "evening"][..]),
        ("Location", &["compiegne", "paris", "lyon"][..]),
        ("Activity", &["commuting", "familyTrip", "businessTravel", "leisure"][..]),
        ("Device", &["mobile", "desktop", "tablet"][..]),
    ] {
        let class = ucpo(class);
        for local in locals {
            b.inst(&ucpo(local), &class);
        }
    }

    let brand = ucpo("Brand");
    for local in [
        "peugeot",
        "renault",
        "toyota",
        "honda",
        "lexus",
        "citroen",
        "ford",
        "volkswagen",
        "bmw",
        "fiat",
    ] {
        b.inst(&vo(local), &brand);
    }

    for (class, locals) in [
        ("FuelType", &["petrol", "diesel", "hybrid", "electric"][..]),
        ("UseCase", &["dailyCommute", "familyTravel", "businessTrips", "offRoad"][..]),
        ("EmissionStandard", &["euro4", "euro5", "euro6"][..]),
        ("SafetyFeature", &["abs", "airbags", "laneAssist", "isofix"][..]),
        ("Equipment", &["gps", "airConditioning"][..]),
    ] {
        let class = vo(class);
        for local in locals {
            b.inst(&vo(local), &class);
        }
    }
    b.inst(&vo("manual"), &vo("ManualTransmission"));
    b.inst(&vo("automatic"), &vo("AutomaticTransmission"));

    let time_of_day = ucpo("timeOfDay");
    for slot in ["morning", "afternoon", "evening"] {
        b.text(&ucpo(slot), &time_of_day, slot);
    }
}

fn users_and_demographics(b: &mut SeedBuilder) {
    let user = ucpo("User");
    let personal = ucpo("PersonalProfile");
    let has_profile = ucpo("hasUserProfile");
    let has_user_context = ucpo("hasUserContext");
    let has_demographic = ucpo("hasDemographic");
    let first_name = ucpo("firstName");
    let last_name = ucpo("lastName");
    let age = ucpo("age");
    let children = ucpo("numberOfChildren");

    for (name, profiles, facts) in [
        (
            "henri",
            &["henriPro", "henriFamily"][..],
            ("Henri", "Dupont", 42, 2, "married", "salesManager", "incomeHigh", "master", "addressCompiegne"),
        ),
        (
            "louis",
            &["louisProfile"][..],
            ("Louis", "Martin", 29, 0, "single", "engineer", "incomeMedium", "bachelor", "addressSoissons"),
        ),
        (
            "pierre",
            &["pierreProfile"][..],
            ("Pierre", "Bernard", 38, 3, "married", "teacher", "incomeHigh", "master", "addressParis"),
        ),
    ] {
        let user_iri = ucpo(name);
        b.inst(&user_iri, &user);
        for profile in profiles {
            b.link(&user_iri, &has_profile, &ucpo(profile));
        }
        b.link(&user_iri, &has_user_context, &ucpo(&format!("{name}UserCtx")));

        let (first, last, years, kids, marital, occupation, income, education, address) = facts;
        let personal_iri = ucpo(&format!("{name}Personal"));
        b.inst(&personal_iri, &personal);
        b.text(&personal_iri, &first_name, first);
        b.text(&personal_iri, &last_name, last);
        b.int(&personal_iri, &age, years);
        b.int(&personal_iri, &children, kids);

        b.link(&user_iri, &has_demographic, &personal_iri);
        for facet in [marital, occupation, income, education, address] {
            b.link(&user_iri, &has_demographic, &up(facet));
        }
        b.link(&user_iri, &has_demographic, &up("male"));
        b.link(&user_iri, &has_demographic, &up("french"));
    }
}

fn profiles_and_preferences(b: &mut SeedBuilder) {
    let user_profile = ucpo("UserProfile");
    let preference = ucpo("Preference");
    let budget_class = ucpo("Budget");
    let mileage_class = ucpo("Mileage");
    let places_class = ucpo("NumberOfPlaces");
    let has_vehicle_pref = ucpo("hasVehiclePreference");
    let has_profile_ctx = ucpo("hasProfileContext");
    let fav_brand = ucpo("hasFavoriteBrand");
    let pref_type = ucpo("hasPreferredVehicleType");
    let pref_route = ucpo("hasPreferredRouteType");
    let pref_color = ucpo("hasPreferredColor");
    let pref_state = ucpo("hasPreferredState");
    let has_budget = ucpo("hasBudget");
    let has_mileage = ucpo("hasMileagePreference");
    let has_places = ucpo("hasNumberOfPlaces");
    let amount = ucpo("amount");
    let max_km = ucpo("maxKilometers");
    let min_seats = ucpo("minSeats");

    for profile in ["henriPro", "henriFamily", "louisProfile", "pierreProfile"] {
        let profile_iri = ucpo(profile);
        b.inst(&profile_iri, &user_profile);
        b.link(&profile_iri, &has_vehicle_pref, &ucpo(&format!("{profile}Pref")));
        b.link(&profile_iri, &has_profile_ctx, &ucpo(&format!("{profile}Ctx")));
    }

    // Henri, professional profile: highway sedans from Renault, 20k budget.
    let pref = ucpo("henriProPref");
    b.inst(&pref, &preference);
    b.link(&pref, &fav_brand, &vo("renault"));
    b.link(&pref, &pref_type, &ucpo("sedan"));
    b.link(&pref, &pref_route, &ucpo("highwayRoute"));
    b.link(&pref, &pref_state, &ucpo("used"));
    b.link(&pref, &has_budget, &ucpo("henriProBudget"));
    b.inst(&ucpo("henriProBudget"), &budget_class);
    b.dec(&ucpo("henriProBudget"), &amount, "20000.0");

    // Henri, family profile: a roomy SUV with bounded mileage.
    let pref = ucpo("henriFamilyPref");
    b.inst(&pref, &preference);
    b.link(&pref, &pref_type, &ucpo("suv"));
    b.link(&pref, &pref_state, &ucpo("used"));
    b.link(&pref, &has_budget, &ucpo("henriFamilyBudget"));
    b.link(&pref, &has_places, &ucpo("henriFamilyPlaces"));
    b.link(&pref, &has_mileage, &ucpo("henriFamilyMileage"));
    b.inst(&ucpo("henriFamilyBudget"), &budget_class);
    b.dec(&ucpo("henriFamilyBudget"), &amount, "22000.0");
    b.inst(&ucpo("henriFamilyPlaces"), &places_class);
    b.int(&ucpo("henriFamilyPlaces"), &min_seats, 5);
    b.inst(&ucpo("henriFamilyMileage"), &mileage_class);
    b.int(&ucpo("henriFamilyMileage"), &max_km, 90000);

    // Louis: the fully specified profile, city driving on a tight budget.
    let pref = ucpo("louisProfilePref");
    b.inst(&pref, &preference);
    b.link(&pref, &fav_brand, &vo("peugeot"));
    b.link(&pref, &pref_type, &ucpo("sedan"));
    b.link(&pref, &pref_route, &ucpo("urbanRoute"));
    b.link(&pref, &pref_color, &ucpo("blue"));
    b.link(&pref, &pref_state, &ucpo("used"));
    b.link(&pref, &has_budget, &ucpo("louisBudget"));
    b.link(&pref, &has_mileage, &ucpo("louisMileage"));
    b.link(&pref, &has_places, &ucpo("louisPlaces"));
    b.inst(&ucpo("louisBudget"), &budget_class);
    b.dec(&ucpo("louisBudget"), &amount, "9000.0");
    b.inst(&ucpo("louisMileage"), &mileage_class);
    b.int(&ucpo("louisMileage"), &max_km, 120000);
    b.inst(&ucpo("louisPlaces"), &places_class);
    b.int(&ucpo("louisPlaces"), &min_seats, 4);

    // Pierre: family SUV hunt with a generous ceiling.
    let pref = ucpo("pierreProfilePref");
    b.inst(&pref, &preference);
    b.link(&pref, &pref_type, &ucpo("suv"));
    b.link(&pref, &pref_state, &ucpo("used"));
    b.link(&pref, &has_budget, &ucpo("pierreBudget"));
    b.link(&pref, &has_places, &ucpo("pierrePlaces"));
    b.inst(&ucpo("pierreBudget"), &budget_class);
    b.dec(&ucpo("pierreBudget"), &amount, "30000.0");
    b.inst(&ucpo("pierrePlaces"), &places_class);
    b.int(&ucpo("pierrePlaces"), &min_seats, 5);
}

fn contexts(b: &mut SeedBuilder) {
    let profile_ctx = ucpo("ProfileContext");
    let user_ctx = ucpo("UserContext");
    let likes_brand = ucpo("likesBrand");
    let likes_model = ucpo("likesModel");
    let has_activity = ucpo("hasActivity");
    let has_time = ucpo("hasTime");
    let has_device = ucpo("hasDevice");
    let has_location = ucpo("hasLocation");

    struct Ctx {
        node: &'static str,
        brand: &'static str,
        models: &'static [&'static str],
        activity: &'static str,
        time: &'static str,
        device: &'static str,
        location: &'static str,
    }
    for ctx in [
        Ctx {
            node: "henriProCtx",
            brand: "renault",
            models: &["modelMegane"],
            activity: "businessTravel",
            time: "morning",
            device: "desktop",
            location: "paris",
        },
        Ctx {
            node: "henriFamilyCtx",
            brand: "renault",
            models: &["modelKoleos", "modelScenic"],
            activity: "familyTrip",
            time: "afternoon",
            device: "tablet",
            location: "compiegne",
        },
        Ctx {
            node: "louisProfileCtx",
            brand: "peugeot",
            models: &["model206", "model207"],
            activity: "commuting",
            time: "morning",
            device: "mobile",
            location: "compiegne",
        },
        Ctx {
            node: "pierreProfileCtx",
            brand: "toyota",
            models: &["modelRav4Hybrid", "modelCrvHybrid", "modelUxHybrid"],
            activity: "familyTrip",
            time: "evening",
            device: "desktop",
            location: "paris",
        },
    ] {
        let node = ucpo(ctx.node);
        b.inst(&node, &profile_ctx);
        b.link(&node, &likes_brand, &vo(ctx.brand));
        for model in ctx.models {
            b.link(&node, &likes_model, &vo(model));
        }
        b.link(&node, &has_activity, &ucpo(ctx.activity));
        b.link(&node, &has_time, &ucpo(ctx.time));
        b.link(&node, &has_device, &ucpo(ctx.device));
        b.link(&node, &has_location, &ucpo(ctx.location));
    }

    for (node, location, device) in [
        ("henriUserCtx", "compiegne", "mobile"),
        ("louisUserCtx", "compiegne", "desktop"),
        ("pierreUserCtx", "paris", "tablet"),
    ] {
        let node = ucpo(node);
        b.inst(&node, &user_ctx);
        b.link(&node, &has_location, &ucpo(location));
        b.link(&node, &has_device, &ucpo(device));
    }
}

fn catalog(b: &mut SeedBuilder) {
    let used_vehicle = vo("UsedVehicle");
    let model_class = vo("Model");
    let has_brand = vo("hasBrand");
    let has_model = vo("hasModel");
    let has_type = vo("hasVehicleType");
    let has_color = vo("hasColor");
    let has_state = vo("hasState");
    let has_fuel = vo("hasFuelType");
    let has_transmission = vo("hasTransmission");
    let model_name = vo("modelName");
    let price = vo("price");
    let mileage_km = vo("mileageKm");
    let seats = vo("seats");
    let year = vo("year");
    let trunk = vo("trunkLiters");
    let safety = vo("safetyScore");
    let efficiency = vo("fuelEfficiency");
    let used = ucpo("used");

    for entry in CATALOG {
        let vehicle = vo(&format!("vehicle{}", entry.key));
        let model = vo(&format!("model{}", entry.key));

        b.inst(&model, &model_class);
        b.text(&model, &model_name, entry.name);

        b.inst(&vehicle, &used_vehicle);
        b.comment(&vehicle, "Catalog entry with illustrative values.");
        b.link(&vehicle, &has_brand, &vo(entry.brand));
        b.link(&vehicle, &has_model, &model);
        b.link(&vehicle, &has_type, &ucpo(entry.vehicle_type));
        b.link(&vehicle, &has_color, &ucpo(entry.color));
        b.link(&vehicle, &has_state, &used);
        b.link(&vehicle, &has_fuel, &vo(entry.fuel));
        b.link(&vehicle, &has_transmission, &vo(entry.transmission));
        b.dec(&vehicle, &price, entry.price);
        b.int(&vehicle, &mileage_km, entry.mileage_km);
        b.int(&vehicle, &seats, entry.seats);
        b.int(&vehicle, &year, entry.year);
        b.int(&vehicle, &trunk, entry.trunk_liters);
        b.dec(&vehicle, &safety, entry.safety);
        b.dec(&vehicle, &efficiency, entry.fuel_efficiency);
    }
}
