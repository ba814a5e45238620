//! Command-line front end. Loads Turtle documents into an in-memory session
//! and funnels them through the engine: validation, queries, metrics,
//! recommendations, the competency suite, and canonical serialization.
//!
//! Exit codes: 0 success, 1 domain failures (violations, failed cases,
//! unknown users), 2 usage, file, and parse errors. Several commands can be
//! chained in one invocation with `--then`; the chain prints exactly what
//! the same commands print as separate processes.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ucpo_core::cq;
use ucpo_core::metrics;
use ucpo_core::reasoner::materialize;
use ucpo_core::recommender::{parse_config, recommend, RecommenderConfig, RecommenderError};
use ucpo_core::schema::{validate, OntologyDescriptor};
use ucpo_core::sparql::{execute, parse_query_with, to_tsv};
use ucpo_core::store::{Graph, Iri, PrefixMap, Term};
use ucpo_core::turtle;
use ucpo_core::vocab;

#[derive(Parser)]
#[command(
    name = "ucpo",
    version,
    about = "Knowledge-graph engine for user contextual profiles"
)]
struct Cli {
    /// Ontology document loaded before the first command.
    #[arg(long, global = true, value_name = "FILE")]
    schema: Option<PathBuf>,
    /// Instance document loaded before the first command; repeatable.
    #[arg(long, global = true, value_name = "FILE")]
    data: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// A command after a `--then` separator; session flags belong to the first.
#[derive(Parser)]
#[command(name = "ucpo", disable_help_flag = true)]
struct Segment {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse documents into the session and report their sizes.
    Load {
        #[arg(required = true, value_name = "FILE")]
        paths: Vec<PathBuf>,
    },
    /// Check instance data against the ontology declarations.
    Validate,
    /// Run a query over the materialized closure and print TSV rows.
    Query {
        /// Query file; omitted when --inline is given.
        #[arg(
            value_name = "FILE",
            required_unless_present = "inline",
            conflicts_with = "inline"
        )]
        path: Option<PathBuf>,
        /// Query text given directly on the command line.
        #[arg(long, value_name = "TEXT")]
        inline: Option<String>,
    },
    /// Print ontology statistics.
    Metrics {
        /// Emit the report as JSON instead of the plain table.
        #[arg(long)]
        json: bool,
    },
    /// Rank vehicles for a user profile and print them as JSON.
    Recommend {
        /// Full IRI, or a local name under the core profile namespace.
        #[arg(long, value_name = "IRI|NAME")]
        user: String,
        /// Full IRI, or a local name under the core profile namespace.
        #[arg(long, value_name = "IRI|NAME")]
        profile: String,
        /// How many entries to return.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Run the competency-question suite against the loaded data.
    Cq,
    /// Print the loaded triples in canonical form.
    Serialize {
        /// Write to a file instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// An error carrying the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

/// Documents parsed once per chain; the closure is filled on first use.
struct Session {
    prefixes: PrefixMap,
    graph: Graph,
    closure: Option<Graph>,
}

impl Session {
    fn load(paths: &[PathBuf]) -> Result<(Self, Vec<usize>), Failure> {
        let mut prefixes = PrefixMap::new();
        let mut graph = Graph::new();
        let mut counts = Vec::new();
        for path in paths {
            let (file_prefixes, file_graph) = parse_document(path)?;
            counts.push(file_graph.len());
            prefixes.merge(&file_prefixes);
            graph.extend_from(&file_graph);
        }
        let session = Session { prefixes, graph, closure: None };
        Ok((session, counts))
    }

    fn ensure_closure(&mut self) -> Result<(), Failure> {
        if self.closure.is_none() {
            let result = materialize(&self.graph).map_err(|e| Failure::domain(e.to_string()))?;
            self.closure = Some(result.graph);
        }
        Ok(())
    }

    fn closure(&self) -> &Graph {
        self.closure.as_ref().expect("ensure_closure ran first")
    }

    /// Base prefixes for query text: the session's own bindings win, and
    /// the published favorite-brand query's undeclared alias stays bound.
    fn query_prefixes(&self) -> PrefixMap {
        let mut base = cq::harness_prefixes();
        base.merge(&self.prefixes);
        base
    }
}

fn parse_document(path: &Path) -> Result<(PrefixMap, Graph), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    turtle::parse(&text).map_err(|diagnostics| {
        let lines: Vec<String> = diagnostics
            .iter()
            .map(|d| format!("{}:{d}", path.display()))
            .collect();
        Failure::usage(lines.join("\n"))
    })
}

fn ensure_session<'s>(
    slot: &'s mut Option<Session>,
    schema: &Option<PathBuf>,
    data: &[PathBuf],
) -> Result<&'s mut Session, Failure> {
    if slot.is_none() {
        let mut paths: Vec<PathBuf> = Vec::new();
        if let Some(schema) = schema {
            paths.push(schema.clone());
        }
        paths.extend(data.iter().cloned());
        if paths.is_empty() {
            return Err(Failure::usage(
                "no documents loaded; pass --schema/--data or run load first",
            ));
        }
        let (session, _) = Session::load(&paths)?;
        *slot = Some(session);
    }
    Ok(slot.as_mut().expect("slot was just filled"))
}

fn resolve_iri(name: &str) -> Result<Iri, Failure> {
    if name.contains(':') {
        Iri::new(name).map_err(|e| Failure::usage(e.to_string()))
    } else {
        Ok(vocab::ucpo(name))
    }
}

fn load_recommender_config() -> Result<RecommenderConfig, Failure> {
    match env::var_os("UCPO_CONFIG") {
        None => Ok(RecommenderConfig::default()),
        Some(raw) => {
            let path = PathBuf::from(raw);
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
    }
}

#[derive(Serialize)]
struct RecommendationRow<'a> {
    iri: &'a str,
    model: &'a str,
    score: f64,
    explanation: Vec<(&'a str, f64)>,
}

fn round4(x: f64) -> f64 {
    (x * 10_000.0).round() / 10_000.0
}

fn run(
    command: Command,
    slot: &mut Option<Session>,
    schema: &Option<PathBuf>,
    data: &[PathBuf],
) -> Result<(), Failure> {
    match command {
        Command::Load { paths } => {
            let (session, counts) = Session::load(&paths)?;
            for (path, count) in paths.iter().zip(&counts) {
                println!("loaded {}: {} triples", path.display(), count);
            }
            println!("session: {} triples", session.graph.len());
            *slot = Some(session);
            Ok(())
        }
        Command::Validate => {
            let session = ensure_session(slot, schema, data)?;
            session.ensure_closure()?;
            let descriptor =
                OntologyDescriptor::from_graph(&session.graph, session.prefixes.clone())
                    .map_err(|e| Failure::domain(e.to_string()))?;
            let violations = validate(&session.graph, &descriptor, session.closure());
            if violations.is_empty() {
                println!("ok: no violations");
                return Ok(());
            }
            for v in &violations {
                let subject = turtle::render_term(&Term::from(v.triple.subject.clone()), &session.prefixes);
                let predicate =
                    turtle::render_term(&Term::Iri(v.triple.predicate.clone()), &session.prefixes);
                let object = turtle::render_term(&v.triple.object, &session.prefixes);
                println!("{}: {} {} {} ({})", v.kind, subject, predicate, object, v.detail);
            }
            Err(Failure::domain(format!("{} violations", violations.len())))
        }
        Command::Query { path, inline } => {
            let (text, source) = match (path, inline) {
                (Some(path), None) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    (text, path.display().to_string())
                }
                (None, Some(text)) => (text, "<inline>".to_owned()),
                _ => unreachable!("clap enforces exactly one query source"),
            };
            let session = ensure_session(slot, schema, data)?;
            let query = parse_query_with(&text, &session.query_prefixes())
                .map_err(|e| Failure::usage(format!("{source}: {e}")))?;
            session.ensure_closure()?;
            let table = execute(&query, session.closure());
            print!("{}", to_tsv(&table, &query.prefixes));
            Ok(())
        }
        Command::Metrics { json } => {
            let session = ensure_session(slot, schema, data)?;
            let report =
                metrics::report(&session.graph).map_err(|e| Failure::domain(e.to_string()))?;
            if json {
                let line = serde_json::to_string(&report)
                    .map_err(|e| Failure::domain(e.to_string()))?;
                println!("{line}");
                return Ok(());
            }
            let ratio = |x: f64| format!("{x:.6}");
            let optional = |x: Option<f64>| x.map(ratio).unwrap_or_else(|| "n/a".to_owned());
            let b = &report.base;
            let s = &report.schema;
            println!("{:<22} {}", "classes", b.class_count);
            println!("{:<22} {}", "object properties", b.object_property_count);
            println!("{:<22} {}", "data properties", b.data_property_count);
            println!("{:<22} {}", "properties", b.properties_count);
            println!("{:<22} {}", "individuals", b.individual_count);
            println!("{:<22} {}", "subclass axioms", b.sub_class_of_count);
            println!("{:<22} {}", "domain axioms", b.domain_axiom_count);
            println!("{:<22} {}", "range axioms", b.range_axiom_count);
            println!("{:<22} {}", "total axioms", b.total_axiom_count);
            println!("{:<22} {}", "attribute richness", ratio(s.attribute_richness));
            println!("{:<22} {}", "inheritance richness", ratio(s.inheritance_richness));
            println!("{:<22} {}", "relationship richness", optional(s.relationship_richness));
            println!("{:<22} {}", "axiom/class ratio", ratio(s.axiom_class_ratio));
            println!("{:<22} {}", "class/relation ratio", optional(s.class_relation_ratio));
            println!("{:<22} {}", "expressivity", report.expressivity);
            Ok(())
        }
        Command::Recommend { user, profile, k } => {
            let config = load_recommender_config()?;
            let user = resolve_iri(&user)?;
            let profile = resolve_iri(&profile)?;
            let session = ensure_session(slot, schema, data)?;
            session.ensure_closure()?;
            let entries = recommend(session.closure(), &user, &profile, k, &config)
                .map_err(|e| match e {
                    RecommenderError::InvalidCount => Failure::usage(e.to_string()),
                    RecommenderError::ProfileNotFound { .. } => Failure::domain(e.to_string()),
                })?;
            let rows: Vec<RecommendationRow<'_>> = entries
                .iter()
                .map(|r| RecommendationRow {
                    iri: r.listing.iri.as_str(),
                    model: &r.listing.model_name,
                    score: round4(r.score),
                    explanation: r
                        .explanation
                        .iter()
                        .map(|(name, c)| (name.as_str(), round4(*c)))
                        .collect(),
                })
                .collect();
            let line = serde_json::to_string(&rows).map_err(|e| Failure::domain(e.to_string()))?;
            println!("{line}");
            Ok(())
        }
        Command::Cq => {
            let session = ensure_session(slot, schema, data)?;
            session.ensure_closure()?;
            let report = cq::run_all(session.closure());
            print!("{}", report.render());
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::domain("competency suite failed"))
            }
        }
        Command::Serialize { out } => {
            let session = ensure_session(slot, schema, data)?;
            let text = turtle::serialize(&session.graph, &session.prefixes);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = env::args().collect();
    let mut segments = args.split(|a| a == "--then");
    let first = segments.next().expect("split yields at least one segment");

    let cli = Cli::parse_from(first);
    let mut commands = vec![cli.command];
    for rest in segments {
        let mut argv = vec!["ucpo".to_owned()];
        argv.extend(rest.iter().cloned());
        commands.push(Segment::parse_from(&argv).command);
    }

    let mut session: Option<Session> = None;
    let mut worst = 0u8;
    for command in commands {
        if let Err(failure) = run(command, &mut session, &cli.schema, &cli.data) {
            eprintln!("{}", failure.message);
            if failure.code >= 2 {
                return ExitCode::from(2);
            }
            worst = worst.max(failure.code);
        }
    }
    ExitCode::from(worst)
}
