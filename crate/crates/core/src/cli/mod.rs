//! The `valim` command line: argument parsing, commands and reports.
//!
//! Every command produces one report. In JSON it is a canonical document
//! with `schema`, `command`, `version`, `input_sha256`, `status` and either
//! `result` or `error`. Exit codes: 0 ok, 1 law violation, 2 I/O or parse
//! error, 3 size limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::constructions::{
    dk_product, prohorov_limit, sub_product, subset_label, uniform_tightness_check, ConstructionError, MarginalFamily,
    Supplier, MAX_FACTORS,
};
use crate::document::{self, open_of, CylinderQuery, Document, DocumentError, ProductInput, Query, ValuedSpec};
use crate::gallery::{self, GalleryOptions};
use crate::order::{FiniteSpace, OrderError, DEFAULT_MAX_POINTS};
use crate::projective::lazy::{named_rule, LazyChain};
use crate::projective::{materialize_limit, EpSystem, ProjectiveSystem, SystemError, ValuedSystem};
use crate::suite;
use crate::valuation::{check_valuation, decompose_simple, is_tight, mu_circ, nu_bullet, SetFunction, Valuation, ValuationError};
use crate::value::ExtNonneg;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "valim", version, about = "Exact valuations on finite T0 spaces and their projective limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest number of opens enumerated for one space.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub max_opens: usize,
    /// Probe depth for chains generated by a rule.
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: usize,
    /// Seed for randomly generated cases.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a document and verify every law it is subject to.
    Check { path: PathBuf },
    /// Evaluate the limit valuation of a valued system on cylinders.
    LimitEval {
        path: PathBuf,
        /// A query document with op "limit-eval".
        #[arg(long)]
        query: Option<PathBuf>,
        /// A cylinder as LEVEL:a,b,c (repeatable). Without any, every open
        /// of every level is evaluated.
        #[arg(long = "cylinder")]
        cylinders: Vec<String>,
    },
    /// Build the product valuation from a product query document.
    Product {
        path: PathBuf,
        /// Also write the valuation document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide tightness of a valuation and list the witnesses.
    Tight { path: PathBuf },
    /// Decide whether a subset supports a valuation.
    Support {
        path: PathBuf,
        /// Comma separated labels; empty for the empty set.
        #[arg(long)]
        subset: String,
    },
    /// Run a gallery entry, or list them.
    Gallery { name: Option<String> },
    /// Run the property suites.
    Suite {
        /// Suite ids to run, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Input,
    SizeLimit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Input => 2,
            Status::SizeLimit => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Input => "input-error",
            Status::SizeLimit => "size-limit",
        }
    }
}

/// How an error maps onto an exit status.
pub trait Classify {
    fn status(&self) -> Status;
}

impl Classify for OrderError {
    fn status(&self) -> Status {
        match self {
            OrderError::SizeLimit { .. } => Status::SizeLimit,
            OrderError::NotAPoset { .. }
            | OrderError::NotMonotone { .. }
            | OrderError::NotAnUpSet(_)
            | OrderError::NotEpPair(_)
            | OrderError::Internal(_) => Status::Violation,
            OrderError::DuplicateLabel(_)
            | OrderError::UnknownLabel(_)
            | OrderError::IndexOutOfRange { .. }
            | OrderError::GraphLength { .. }
            | OrderError::Mismatch => Status::Input,
        }
    }
}

impl Classify for ValuationError {
    fn status(&self) -> Status {
        match self {
            ValuationError::Order(e) => e.status(),
            ValuationError::NotTotal(_)
            | ValuationError::NotOpen(_)
            | ValuationError::WeightCount { .. }
            | ValuationError::SpaceMismatch => Status::Input,
            _ => Status::Violation,
        }
    }
}

impl Classify for SystemError {
    fn status(&self) -> Status {
        match self {
            SystemError::Order(e) => e.status(),
            SystemError::Valuation(e) => e.status(),
            SystemError::EmptyIndex
            | SystemError::SpaceCount { .. }
            | SystemError::BondShape { .. }
            | SystemError::MissingBond { .. }
            | SystemError::ValuationSpace(_) => Status::Input,
            _ => Status::Violation,
        }
    }
}

impl Classify for ConstructionError {
    fn status(&self) -> Status {
        match self {
            ConstructionError::System(e) => e.status(),
            ConstructionError::Valuation(e) => e.status(),
            ConstructionError::Order(e) => e.status(),
            _ => Status::Violation,
        }
    }
}

impl Classify for DocumentError {
    fn status(&self) -> Status {
        match self {
            DocumentError::Json(_) | DocumentError::Shape { .. } | DocumentError::Value { .. } => Status::Input,
            DocumentError::Order(e) => e.status(),
            DocumentError::System(e) => e.status(),
            DocumentError::Valuation(e) => e.status(),
        }
    }
}

/// A failed command: its status and a message.
#[derive(Debug, Clone)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Input,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Violation,
            message: message.into(),
        }
    }
}

impl<E: Classify + std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            status: e.status(),
            message: e.to_string(),
        }
    }
}

/// What a command produced: a machine-readable result, lines for the text
/// format, and a status (a command can finish with a negative verdict).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub lines: Vec<String>,
}

impl Outcome {
    fn ok(result: Value, lines: Vec<String>) -> Self {
        Outcome {
            status: Status::Ok,
            result,
            lines,
        }
    }
}

/// A finished command, ready to print.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input_sha256: String,
    pub outcome: Result<Outcome, Failure>,
}

impl Report {
    pub fn status(&self) -> Status {
        match &self.outcome {
            Ok(o) => o.status,
            Err(f) => f.status,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(document::SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("version".into(), json!(VERSION));
        m.insert("input_sha256".into(), json!(self.input_sha256));
        m.insert("status".into(), json!(self.status().name()));
        m.insert("ok".into(), json!(self.status() == Status::Ok));
        match &self.outcome {
            Ok(o) => m.insert("result".into(), o.result.clone()),
            Err(f) => m.insert("error".into(), json!(f.message)),
        };
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.outcome {
            Ok(o) => {
                for l in &o.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Err(f) => {
                out.push_str("error: ");
                out.push_str(&f.message);
                out.push('\n');
            }
        }
        out.push_str(&format!(
            "status: {} (valim {}, input sha256 {})\n",
            self.status().name(),
            VERSION,
            self.input_sha256
        ));
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = execute(&cli);
    let text = match cli.format {
        Format::Json => document::render(&report.to_value()),
        Format::Text => report.to_text(),
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    report.status().exit_code()
}

struct Input {
    sha: String,
    doc: Result<Document, Failure>,
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Input {
    match read(path) {
        Err(f) => Input {
            sha: sha256_hex(b""),
            doc: Err(f),
        },
        Ok(bytes) => Input {
            sha: sha256_hex(&bytes),
            doc: std::str::from_utf8(&bytes)
                .map_err(|e| Failure::input(format!("not UTF-8: {e}")))
                .and_then(|t| document::parse(t).map_err(Failure::from)),
        },
    }
}

pub fn execute(cli: &Cli) -> Report {
    let (command, sha, outcome) = match &cli.command {
        Command::Check { path } => {
            let input = load(path);
            ("check", input.sha, input.doc.and_then(|d| check(&d, cli)))
        }
        Command::LimitEval { path, query, cylinders } => {
            let input = load(path);
            let mut hasher = Sha256::new();
            hasher.update(input.sha.as_bytes());
            let extra = match query {
                Some(q) => {
                    let qi = load(q);
                    hasher.update(qi.sha.as_bytes());
                    qi.doc.and_then(|d| match d {
                        Document::Query(Query::LimitEval { cylinders }) => Ok(cylinders),
                        _ => Err(Failure::input("expected a query document with op \"limit-eval\"")),
                    })
                }
                None => Ok(vec![]),
            };
            for c in cylinders {
                hasher.update(c.as_bytes());
            }
            let sha = if query.is_none() && cylinders.is_empty() {
                input.sha
            } else {
                hex::encode(hasher.finalize())
            };
            let outcome = input.doc.and_then(|d| {
                let mut qs = extra?;
                for c in cylinders {
                    qs.push(parse_cylinder(c)?);
                }
                limit_eval(d, &qs, cli)
            });
            ("limit-eval", sha, outcome)
        }
        Command::Product { path, output } => {
            let input = load(path);
            ("product", input.sha, input.doc.and_then(|d| product(d, output.as_deref(), cli)))
        }
        Command::Tight { path } => {
            let input = load(path);
            ("tight", input.sha, input.doc.and_then(|d| tight(d, cli)))
        }
        Command::Support { path, subset } => {
            let input = load(path);
            let mut hasher = Sha256::new();
            hasher.update(input.sha.as_bytes());
            hasher.update(subset.as_bytes());
            let sha = hex::encode(hasher.finalize());
            ("support", sha, input.doc.and_then(|d| support(d, subset, cli)))
        }
        Command::Gallery { name } => {
            let arg = name.clone().unwrap_or_default();
            let sha = sha256_hex(format!("{arg} seed={} depth={}", cli.seed, cli.depth).as_bytes());
            ("gallery", sha, run_gallery(name.as_deref(), cli))
        }
        Command::Suite { only } => {
            let ids: Vec<u8> = if only.is_empty() { suite::IDS.to_vec() } else { only.clone() };
            let sha = sha256_hex(format!("{ids:?} seed={}", cli.seed).as_bytes());
            ("suite", sha, run_suite(&ids, cli.seed))
        }
    };
    Report {
        command,
        input_sha256: sha,
        outcome,
    }
}

// ---- check

fn check(doc: &Document, cli: &Cli) -> Result<Outcome, Failure> {
    match doc {
        Document::Space(s) => {
            let opens = s.opens_bounded(cli.max_opens)?.len();
            Ok(Outcome::ok(
                json!({ "kind": "space", "points": s.len(), "opens": opens, "laws": ["reflexivity", "transitivity", "antisymmetry"] }),
                vec![format!("space: {} points, {} opens; a partial order", s.len(), opens)],
            ))
        }
        Document::Valuation(nu) => {
            let table = nu.tabulate_bounded(cli.max_opens)?;
            check_table(&table, Some(nu))
        }
        Document::Table(t) => check_table(t, None),
        Document::Map(m) => Ok(Outcome::ok(
            json!({ "kind": "map", "monotone": true }),
            vec![format!("map: monotone, {} -> {} points", m.source().len(), m.target().len())],
        )),
        Document::System(sys) => check_system(sys, cli).map(|(r, l)| Outcome::ok(r, l)),
        Document::ValuedSystem(ValuedSpec::Explicit(vs)) => {
            let (mut r, mut lines) = check_system(vs.system(), cli)?;
            vs.check_compatibility(cli.max_opens)?;
            r["kind"] = json!("valued-system");
            r["compatible"] = json!(true);
            lines.push("valuations: compatible".into());
            Ok(Outcome::ok(r, lines))
        }
        Document::ValuedSystem(ValuedSpec::Lazy(spec)) => {
            let lazy = lazy_chain(&spec.rule, spec.stop, cli.depth)?;
            lazy.check_to_depth()?;
            lazy.check_compatibility(cli.max_opens)?;
            Ok(Outcome::ok(
                json!({ "kind": "valued-system", "rule": spec.rule, "depth": cli.depth, "compatible": true }),
                vec![format!(
                    "chain {}: bonds monotone and valuations compatible through level {}",
                    spec.rule, cli.depth
                )],
            ))
        }
        Document::Query(q) => {
            let op = match q {
                Query::LimitEval { .. } => "limit-eval",
                Query::Product { factors, input } => {
                    family_of(factors, input)?.check(cli.max_opens)?;
                    "product"
                }
                Query::Support { .. } => "support",
            };
            Ok(Outcome::ok(
                json!({ "kind": "query", "op": op }),
                vec![format!("query {op}: well formed")],
            ))
        }
    }
}

fn check_table(t: &SetFunction, given: Option<&Valuation>) -> Result<Outcome, Failure> {
    let nu = check_valuation(t)?;
    let weights = decompose_simple(t)?;
    if weights != nu.weights() || given.is_some_and(|g| g.weights() != weights.as_slice()) {
        return Err(Failure::violation("decomposition does not reproduce the weights"));
    }
    let total = nu.total();
    Ok(Outcome::ok(
        json!({
            "kind": "valuation",
            "opens": t.len(),
            "laws": ["strictness", "monotonicity", "modularity"],
            "total": total.to_string(),
            "valuation": document::valuation_value(&nu),
        }),
        vec![format!(
            "valuation: strict, monotone and modular on {} opens; total mass {}",
            t.len(),
            total
        )],
    ))
}

fn check_system(sys: &Arc<ProjectiveSystem>, cli: &Cli) -> Result<(Value, Vec<String>), Failure> {
    sys.check_system()?;
    let ep = match EpSystem::reconstruct(sys.clone()) {
        Ok(ep) => {
            ep.check_ep_system()?;
            true
        }
        Err(_) => false,
    };
    let limit = materialize_limit(sys, DEFAULT_MAX_POINTS)?;
    let _ = cli;
    let lines = vec![
        format!("system: {} indices, bonds compose", sys.len()),
        format!("ep structure: {}", if ep { "yes" } else { "no" }),
        format!("limit: {} threads", limit.len()),
    ];
    Ok((
        json!({ "kind": "system", "indices": sys.len(), "ep": ep, "limit_points": limit.len() }),
        lines,
    ))
}

// ---- limit-eval

fn parse_cylinder(s: &str) -> Result<CylinderQuery, Failure> {
    let (level, open) = s
        .split_once(':')
        .ok_or_else(|| Failure::input(format!("cylinder {s:?}: expected LEVEL:a,b,...")))?;
    Ok(CylinderQuery {
        level: level.to_string(),
        open: labels_of(open),
    })
}

fn labels_of(s: &str) -> Vec<String> {
    s.split(',').filter(|l| !l.is_empty()).map(String::from).collect()
}

fn lazy_chain(rule: &str, stop: Option<usize>, depth: usize) -> Result<LazyChain, Failure> {
    let rule = named_rule(rule, stop).ok_or_else(|| Failure::input(format!("unknown rule {rule:?}")))?;
    Ok(LazyChain::new(rule, depth))
}

fn open_in(space: &FiniteSpace, labels: &[String]) -> Result<crate::order::UpSet, Failure> {
    open_of(space, labels).map_err(|e| Failure::input(format!("cylinder base {labels:?}: {e}")))
}

fn limit_eval(doc: Document, queries: &[CylinderQuery], cli: &Cli) -> Result<Outcome, Failure> {
    let spec = match doc {
        Document::ValuedSystem(v) => v,
        other => return Err(Failure::input(format!("expected a valued-system document, got {}", other.kind()))),
    };
    match spec {
        ValuedSpec::Explicit(vs) => limit_eval_explicit(&vs, queries, cli),
        ValuedSpec::Lazy(l) => {
            let lazy = lazy_chain(&l.rule, l.stop, cli.depth)?;
            lazy.check_to_depth()?;
            lazy.check_compatibility(cli.max_opens)?;
            let queries: Vec<CylinderQuery> = if queries.is_empty() {
                (0..=cli.depth)
                    .map(|n| {
                        let space = lazy.space(n)?;
                        Ok::<_, Failure>(
                            (0..space.len())
                                .map(|x| CylinderQuery {
                                    level: n.to_string(),
                                    open: space.set_labels(space.neighbourhood(x).as_set()).into_iter().map(String::from).collect(),
                                })
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?
                    .concat()
            } else {
                queries.to_vec()
            };
            let mut rows = Vec::new();
            let mut lines = vec![format!("chain {} probed to depth {}", l.rule, cli.depth)];
            for q in &queries {
                let level: usize = q
                    .level
                    .parse()
                    .map_err(|_| Failure::input(format!("level {:?} is not a number", q.level)))?;
                let space = lazy.space(level)?;
                let base = open_in(&space, &q.open)?;
                let value = lazy
                    .cylinder_value(level, &base)?
                    .ok_or_else(|| Failure::input(format!("chain {} carries no valuations", l.rule)))?;
                let (image, status) = lazy.eventual_image(level)?;
                let trace = base.as_set().intersection(&image);
                lines.push(format!(
                    "level {} {{{}}}: {} (trace {{{}}}, {})",
                    q.level,
                    q.open.join(","),
                    value,
                    space.set_labels(&trace).join(","),
                    status
                ));
                rows.push(json!({
                    "level": q.level,
                    "open": q.open,
                    "value": value.to_string(),
                    "trace": space.set_labels(&trace),
                    "status": status.to_string(),
                }));
            }
            Ok(Outcome::ok(
                json!({ "rule": l.rule, "depth": cli.depth, "cylinders": rows }),
                lines,
            ))
        }
    }
}

fn limit_eval_explicit(vs: &ValuedSystem, queries: &[CylinderQuery], cli: &Cli) -> Result<Outcome, Failure> {
    let sys = vs.system();
    vs.check_compatibility(cli.max_opens)?;
    let limit = materialize_limit(sys, DEFAULT_MAX_POINTS)?;
    let cert = uniform_tightness_check(vs, &limit, Supplier::Exhaustive, cli.max_opens)?;
    let ep = EpSystem::reconstruct(sys.clone()).is_ok();
    let lv = prohorov_limit(vs, limit, cert, DEFAULT_MAX_POINTS, cli.max_opens)?;
    let idx = sys.index();
    let queries: Vec<CylinderQuery> = if queries.is_empty() {
        let mut all = Vec::new();
        for i in 0..sys.len() {
            let space = sys.space(i);
            for u in space.opens_bounded(cli.max_opens)? {
                all.push(CylinderQuery {
                    level: idx.label(i).to_string(),
                    open: space.set_labels(u.as_set()).into_iter().map(String::from).collect(),
                });
            }
        }
        all
    } else {
        queries.to_vec()
    };
    let mut lines = vec![format!(
        "limit: {} threads; valuation built from uniform tightness{}",
        lv.limit().len(),
        if ep { ", equal to the ep-limit formula" } else { "" }
    )];
    if lv.experimental() {
        lines.push("note: infinite masses present; treated as experimental".into());
    }
    let mut rows = Vec::new();
    for q in &queries {
        let i = (0..sys.len())
            .find(|&i| idx.label(i) == q.level)
            .ok_or_else(|| Failure::input(format!("unknown index {:?}", q.level)))?;
        let base = open_in(sys.space(i), &q.open)?;
        let value = lv.eval_cylinder(&sys.cylinder(i, base));
        lines.push(format!("level {} {{{}}}: {}", q.level, q.open.join(","), value));
        rows.push(json!({ "level": q.level, "open": q.open, "value": value.to_string(), "status": "exact" }));
    }
    Ok(Outcome::ok(
        json!({
            "method": lv.method().to_string(),
            "ep_cross_check": ep,
            "experimental": lv.experimental(),
            "limit": document::valuation_value(lv.valuation()),
            "cylinders": rows,
        }),
        lines,
    ))
}

// ---- product

fn family_of(factors: &[Arc<FiniteSpace>], input: &ProductInput) -> Result<MarginalFamily, Failure> {
    let m = factors.len();
    if m == 0 {
        return Err(Failure::input("a product needs at least one factor"));
    }
    if m > MAX_FACTORS {
        return Err(Failure {
            status: Status::SizeLimit,
            message: format!("at most {MAX_FACTORS} factors"),
        });
    }
    let weights_on = |space: &Arc<FiniteSpace>, w: &std::collections::BTreeMap<String, ExtNonneg>| {
        let pairs: Vec<(&str, ExtNonneg)> = w.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        Valuation::from_labels(space.clone(), &pairs)
    };
    match input {
        ProductInput::Joint(w) => {
            let full = sub_product(factors, (1 << m) - 1)?;
            Ok(MarginalFamily::from_joint(factors.to_vec(), &weights_on(&full, w)?)?)
        }
        ProductInput::Marginals(ms) => {
            let full_mask = (1usize << m) - 1;
            for k in ms.keys() {
                if !(1..=full_mask).any(|mask| subset_label(mask, m) == *k) {
                    return Err(Failure::input(format!("marginal key {k:?} is not a nonempty subset of the factors")));
                }
            }
            let mut vals = Vec::with_capacity(1 << m);
            for mask in 0..=full_mask {
                let space = sub_product(factors, mask)?;
                let v = if mask == 0 {
                    // the one-point space carries the common total mass
                    let full = ms
                        .get(&subset_label(full_mask, m))
                        .ok_or_else(|| Failure::input(format!("missing marginal {}", subset_label(full_mask, m))))?;
                    let total = full.values().fold(ExtNonneg::zero(), |a, b| a + b.clone());
                    Valuation::new(space, vec![total])?
                } else {
                    let key = subset_label(mask, m);
                    let w = ms.get(&key).ok_or_else(|| Failure::input(format!("missing marginal {key}")))?;
                    weights_on(&space, w)?
                };
                vals.push(v);
            }
            Ok(MarginalFamily::new(factors.to_vec(), vals)?)
        }
    }
}

fn product(doc: Document, output: Option<&Path>, cli: &Cli) -> Result<Outcome, Failure> {
    let Document::Query(Query::Product { factors, input }) = doc else {
        return Err(Failure::input("expected a query document with op \"product\""));
    };
    let family = family_of(&factors, &input)?;
    let pv = dk_product(&family, DEFAULT_MAX_POINTS, cli.max_opens, 1 << 12)?;
    let out_doc = Document::Valuation(pv.valuation.clone());
    let text = document::to_text(&out_doc);
    if let Some(path) = output {
        std::fs::write(path, &text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    let space = pv.valuation.space();
    let mut lines = vec![format!(
        "product of {} factors, {} points; every marginal reproduced, {} boxes checked",
        factors.len(),
        space.len(),
        pv.boxes_checked
    )];
    for (x, w) in pv.valuation.weights().iter().enumerate().filter(|(_, w)| !w.is_zero()) {
        lines.push(format!("  {}: {}", space.label(x), w));
    }
    Ok(Outcome::ok(
        json!({ "document": document::to_value(&out_doc), "boxes_checked": pv.boxes_checked }),
        lines,
    ))
}

// ---- tight and support

fn valuation_table(doc: Document, cli: &Cli) -> Result<SetFunction, Failure> {
    match doc {
        Document::Valuation(nu) => Ok(nu.tabulate_bounded(cli.max_opens)?),
        Document::Table(t) => Ok(t),
        other => Err(Failure::input(format!("expected a valuation document, got {}", other.kind()))),
    }
}

fn tight(doc: Document, cli: &Cli) -> Result<Outcome, Failure> {
    let t = valuation_table(doc, cli)?;
    let space = t.space().clone();
    let labels = |s: &crate::pointset::PointSet| space.set_labels(s).join(",");
    let report = is_tight(&t);
    let round_trip = mu_circ(&nu_bullet(&t)) == t;
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "open": space.set_labels(w.open.as_set()),
                "threshold": w.threshold.to_string(),
                "compact": space.set_labels(w.compact.as_set()),
            })
        })
        .collect();
    let mut lines = vec![
        format!("tight: {}", if report.tight { "yes" } else { "no" }),
        format!(
            "nu-bullet-circ equals the table on all {} opens: {}",
            t.len(),
            if round_trip { "yes" } else { "no" }
        ),
        format!("{} witnesses", report.witnesses.len()),
    ];
    for w in report.witnesses.iter().take(20) {
        lines.push(format!(
            "  U={{{}}} r={} Q={{{}}}",
            labels(w.open.as_set()),
            w.threshold,
            labels(w.compact.as_set())
        ));
    }
    let mut result = json!({ "tight": report.tight, "round_trip": round_trip, "witnesses": witnesses });
    let mut status = Status::Ok;
    if let Some((u, r)) = &report.failure {
        result["failure"] = json!({ "open": space.set_labels(u.as_set()), "threshold": r.to_string() });
        lines.push(format!("no witness for U={{{}}} r={}", labels(u.as_set()), r));
        status = Status::Violation;
    }
    if !round_trip {
        status = Status::Violation;
    }
    Ok(Outcome { status, result, lines })
}

fn support(doc: Document, subset: &str, cli: &Cli) -> Result<Outcome, Failure> {
    let nu = match doc {
        Document::Valuation(nu) => nu,
        Document::Table(t) => check_valuation(&t)?,
        other => return Err(Failure::input(format!("expected a valuation document, got {}", other.kind()))),
    };
    let names = labels_of(subset);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let a = nu.space().set_of(&refs)?;
    match nu.support_check(&a, cli.max_opens) {
        Ok(s) => Ok(Outcome::ok(
            json!({ "supported": true, "subset": names, "restricted": document::valuation_value(&s.restricted) }),
            vec![
                format!("{{{}}} supports the valuation", names.join(",")),
                format!("restricted mass {}", s.restricted.total()),
            ],
        )),
        Err(ValuationError::NotSupported { u, v }) => Ok(Outcome {
            status: Status::Violation,
            result: json!({ "supported": false, "subset": names, "witness": [u, v] }),
            lines: vec![format!(
                "not supported: opens {{{}}} and {{{}}} have the same trace but different values",
                u.join(","),
                v.join(",")
            )],
        }),
        Err(e) => Err(e.into()),
    }
}

// ---- gallery and suites

fn run_gallery(name: Option<&str>, cli: &Cli) -> Result<Outcome, Failure> {
    let Some(name) = name else {
        return Ok(Outcome::ok(json!({ "entries": gallery::NAMES }), gallery::NAMES.iter().map(|s| s.to_string()).collect()));
    };
    let opts = GalleryOptions {
        seed: cli.seed,
        depth: cli.depth,
    };
    let r = gallery::run(name, opts)
        .ok_or_else(|| Failure::input(format!("unknown gallery entry {name:?}; try one of {:?}", gallery::NAMES)))??;
    let mut lines = vec![
        format!("{}", r.name),
        format!("construction: {}", r.construction),
        format!("result: {}", r.result),
        format!("illustrates: {}", r.illustrates),
    ];
    lines.extend(r.details.iter().map(|d| format!("  {d}")));
    Ok(Outcome {
        status: if r.ok { Status::Ok } else { Status::Violation },
        result: json!({
            "name": r.name,
            "construction": r.construction,
            "result": r.result,
            "illustrates": r.illustrates,
            "ok": r.ok,
            "details": r.details,
        }),
        lines,
    })
}

fn run_suite(ids: &[u8], seed: u64) -> Result<Outcome, Failure> {
    if let Some(bad) = ids.iter().find(|id| !suite::IDS.contains(id)) {
        return Err(Failure::input(format!("no suite {bad}; suites are 1 to 8")));
    }
    let outcomes = suite::run_all(ids, seed);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        lines.push(format!(
            "{} {}. {}: {} cases, {} failures, {:.2}s (budget {}s)",
            if o.passed() { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.cases,
            o.failures.len(),
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        ));
        lines.extend(o.failures.iter().take(5).map(|f| format!("  failure: {f}")));
        lines.extend(o.notes.iter().map(|n| format!("  note: {n}")));
        rows.push(json!({
            "id": o.id,
            "name": o.name,
            "cases": o.cases,
            "failures": o.failures,
            "notes": o.notes,
            "elapsed_ms": o.elapsed.as_millis() as u64,
            "budget_s": o.budget.as_secs(),
            "passed": o.passed(),
        }));
    }
    let all = outcomes.iter().all(|o| o.passed());
    Ok(Outcome {
        status: if all { Status::Ok } else { Status::Violation },
        result: json!({ "seed": seed, "suites": rows }),
        lines,
    })
}
