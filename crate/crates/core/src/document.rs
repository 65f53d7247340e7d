//! JSON documents for spaces, valuations, maps, systems and queries.
//!
//! Values are exact strings (`"3/4"`, `"2"`, `"inf"`). Orders are given by
//! generating pairs `[lower, upper]`; the closure is taken on load and the
//! Hasse diagram is written back. Output is canonical: keys sorted, sets in
//! element order, zero weights omitted, two-space indentation and a final
//! newline, so loading and re-serializing a canonical document reproduces
//! it byte for byte.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::order::{FiniteSpace, MonotoneMap, OrderError, UpSet};
use crate::pointset::PointSet;
use crate::projective::lazy::named_rule;
use crate::projective::{DirectedIndex, Presentation, ProjectiveSystem, SystemError, ValuedSystem};
use crate::valuation::{SetFunction, Valuation, ValuationError};
use crate::value::{ExtNonneg, ValueError};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
    #[error("{path}: {source}")]
    Value { path: String, source: ValueError },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

fn shape(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

/// A chain generated by a built-in rule, evaluated lazily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazySpec {
    pub rule: String,
    pub stop: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum ValuedSpec {
    Explicit(ValuedSystem),
    Lazy(LazySpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderQuery {
    pub level: String,
    pub open: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum ProductInput {
    /// One valuation on the full product, keyed by tuple labels.
    Joint(BTreeMap<String, ExtNonneg>),
    /// `ν_J` per nonempty subset, keyed like `"{0,2}"`.
    Marginals(BTreeMap<String, BTreeMap<String, ExtNonneg>>),
}

#[derive(Debug, Clone)]
pub enum Query {
    LimitEval { cylinders: Vec<CylinderQuery> },
    Product { factors: Vec<Arc<FiniteSpace>>, input: ProductInput },
    Support { subset: Vec<String> },
}

#[derive(Debug, Clone)]
pub enum Document {
    Space(Arc<FiniteSpace>),
    Valuation(Valuation),
    /// A table on opens, not yet known to be a valuation.
    Table(SetFunction),
    Map(MonotoneMap),
    System(Arc<ProjectiveSystem>),
    ValuedSystem(ValuedSpec),
    Query(Query),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Valuation(_) | Document::Table(_) => "valuation",
            Document::Map(_) => "map",
            Document::System(_) => "system",
            Document::ValuedSystem(_) => "valued-system",
            Document::Query(_) => "query",
        }
    }
}

/// Canonical text of a JSON value: sorted keys, pretty, trailing newline.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Document, DocumentError> {
    let v: Value = serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| shape("$", "expected an object"))?;
    match obj.get("schema") {
        Some(s) if s.as_u64() == Some(SCHEMA) => {}
        Some(_) => return Err(shape("$.schema", format!("unsupported schema, expected {SCHEMA}"))),
        None => return Err(shape("$.schema", "missing")),
    }
    let kind = str_field(obj, "kind", "$")?;
    match kind {
        "space" => Ok(Document::Space(Arc::new(space_from(&v, "$")?))),
        "valuation" => valuation_from(obj, "$"),
        "map" => {
            let source = Arc::new(space_from(field(obj, "source", "$")?, "$.source")?);
            let target = Arc::new(space_from(field(obj, "target", "$")?, "$.target")?);
            Ok(Document::Map(map_from(field(obj, "graph", "$")?, "$.graph", source, target)?))
        }
        "system" => Ok(Document::System(Arc::new(system_from(&v, "$")?))),
        "valued-system" => valued_from(obj, "$").map(Document::ValuedSystem),
        "query" => query_from(obj, "$").map(Document::Query),
        other => Err(shape("$.kind", format!("unknown kind {other:?}"))),
    }
}

pub fn to_value(doc: &Document) -> Value {
    let mut body = match doc {
        Document::Space(s) => space_value(s),
        Document::Valuation(nu) => valuation_value(nu),
        Document::Table(t) => table_value(t),
        Document::Map(m) => json!({
            "source": space_value(m.source()),
            "target": space_value(m.target()),
            "graph": graph_value(m),
        }),
        Document::System(s) => system_value(s),
        Document::ValuedSystem(v) => valued_value(v),
        Document::Query(q) => query_value(q),
    };
    let obj = body.as_object_mut().expect("bodies are objects");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("kind".into(), json!(doc.kind()));
    body
}

pub fn to_text(doc: &Document) -> String {
    render(&to_value(doc))
}

// ---- reading helpers

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, DocumentError> {
    obj.get(key).ok_or_else(|| shape(&format!("{path}.{key}"), "missing"))
}

fn str_field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str, DocumentError> {
    field(obj, key, path)?
        .as_str()
        .ok_or_else(|| shape(&format!("{path}.{key}"), "expected a string"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    v.as_object().ok_or_else(|| shape(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocumentError> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, DocumentError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, s)| {
            s.as_str()
                .map(String::from)
                .ok_or_else(|| shape(&format!("{path}[{k}]"), "expected a string"))
        })
        .collect()
}

fn value_from(v: &Value, path: &str) -> Result<ExtNonneg, DocumentError> {
    let s = v.as_str().ok_or_else(|| shape(path, "expected an exact value as a string"))?;
    s.parse().map_err(|source| DocumentError::Value {
        path: path.to_string(),
        source,
    })
}

fn weight_map(v: &Value, path: &str) -> Result<BTreeMap<String, ExtNonneg>, DocumentError> {
    object(v, path)?
        .iter()
        .map(|(k, x)| Ok((k.clone(), value_from(x, &format!("{path}.{k}"))?)))
        .collect()
}

fn space_from(v: &Value, path: &str) -> Result<FiniteSpace, DocumentError> {
    let obj = object(v, path)?;
    let elements = strings(field(obj, "elements", path)?, &format!("{path}.elements"))?;
    let covers_path = format!("{path}.covers");
    let covers = match obj.get("covers") {
        Some(c) => array(c, &covers_path)?.clone(),
        None => vec![],
    };
    let mut pairs = Vec::with_capacity(covers.len());
    for (k, c) in covers.iter().enumerate() {
        let p = strings(c, &format!("{covers_path}[{k}]"))?;
        if p.len() != 2 {
            return Err(shape(&format!("{covers_path}[{k}]"), "expected [lower, upper]"));
        }
        pairs.push((p[0].clone(), p[1].clone()));
    }
    let labels: Vec<&str> = elements.iter().map(String::as_str).collect();
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(FiniteSpace::from_labeled_covers(&labels, &refs)?)
}

fn set_from(space: &FiniteSpace, v: &Value, path: &str) -> Result<PointSet, DocumentError> {
    let labels = strings(v, path)?;
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Ok(space.set_of(&refs)?)
}

fn weights_on(space: &Arc<FiniteSpace>, w: &BTreeMap<String, ExtNonneg>) -> Result<Valuation, DocumentError> {
    let pairs: Vec<(&str, ExtNonneg)> = w.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    Ok(Valuation::from_labels(space.clone(), &pairs)?)
}

fn valuation_from(obj: &Map<String, Value>, path: &str) -> Result<Document, DocumentError> {
    let space = Arc::new(space_from(field(obj, "space", path)?, &format!("{path}.space"))?);
    match (obj.get("weights"), obj.get("table")) {
        (Some(w), None) => {
            let w = weight_map(w, &format!("{path}.weights"))?;
            Ok(Document::Valuation(weights_on(&space, &w)?))
        }
        (None, Some(t)) => {
            let tpath = format!("{path}.table");
            let mut values = BTreeMap::new();
            for (k, row) in array(t, &tpath)?.iter().enumerate() {
                let rpath = format!("{tpath}[{k}]");
                let row = object(row, &rpath)?;
                let open = set_from(&space, field(row, "open", &rpath)?, &format!("{rpath}.open"))?;
                let value = value_from(field(row, "value", &rpath)?, &format!("{rpath}.value"))?;
                if values.insert(open, value).is_some() {
                    return Err(shape(&rpath, "open listed twice"));
                }
            }
            Ok(Document::Table(SetFunction::new(space, values)?))
        }
        _ => Err(shape(path, "expected exactly one of \"weights\" and \"table\"")),
    }
}

fn map_from(
    v: &Value,
    path: &str,
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
) -> Result<MonotoneMap, DocumentError> {
    let obj = object(v, path)?;
    let mut graph = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let label = source.label(x);
        let y = obj
            .get(label)
            .and_then(Value::as_str)
            .ok_or_else(|| shape(&format!("{path}.{label}"), "missing image"))?;
        graph.push(target.index_of(y).ok_or_else(|| OrderError::UnknownLabel(y.to_string()))?);
    }
    if obj.len() != source.len() {
        return Err(shape(path, "graph lists points outside the source"));
    }
    Ok(MonotoneMap::new(source, target, graph)?)
}

fn system_from(v: &Value, path: &str) -> Result<ProjectiveSystem, DocumentError> {
    let obj = object(v, path)?;
    let presentation = str_field(obj, "presentation", path)?;
    let index_space = Arc::new(space_from(field(obj, "index", path)?, &format!("{path}.index"))?);
    let lpath = format!("{path}.levels");
    let levels = object(field(obj, "levels", path)?, &lpath)?;
    if levels.len() != index_space.len() {
        return Err(shape(&lpath, "expected one space per index"));
    }
    let spaces = (0..index_space.len())
        .map(|i| {
            let label = index_space.label(i);
            let v = levels
                .get(label)
                .ok_or_else(|| shape(&format!("{lpath}.{label}"), "missing"))?;
            space_from(v, &format!("{lpath}.{label}")).map(Arc::new)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bpath = format!("{path}.bonds");
    let mut bonds = Vec::new();
    for (k, b) in array(field(obj, "bonds", path)?, &bpath)?.iter().enumerate() {
        let p = format!("{bpath}[{k}]");
        let b = object(b, &p)?;
        let index_of = |key: &str| -> Result<usize, DocumentError> {
            let l = str_field(b, key, &p)?;
            index_space.index_of(l).ok_or_else(|| shape(&format!("{p}.{key}"), format!("unknown index {l:?}")))
        };
        let (j, i) = (index_of("from")?, index_of("to")?);
        let map = map_from(field(b, "graph", &p)?, &format!("{p}.graph"), spaces[j].clone(), spaces[i].clone())?;
        bonds.push((i, j, map));
    }
    match presentation {
        "finite" => Ok(ProjectiveSystem::new(DirectedIndex::new(index_space)?, spaces, bonds)?),
        "explicit-prefix" => {
            let n = index_space.len();
            let chain = (0..n).all(|k| index_space.label(k) == k.to_string())
                && (0..n).all(|a| (0..n).all(|b| index_space.le(a, b) == (a <= b)));
            if !chain {
                return Err(shape(&format!("{path}.index"), "an explicit prefix is indexed by the chain \"0\" < \"1\" < …"));
            }
            let mut by_level: Vec<Option<MonotoneMap>> = vec![None; n.saturating_sub(1)];
            for (i, j, m) in bonds {
                if j != i + 1 {
                    return Err(shape(&bpath, "explicit prefixes list bonds between consecutive levels only"));
                }
                by_level[i] = Some(m);
            }
            let bonds = by_level
                .into_iter()
                .enumerate()
                .map(|(i, m)| m.ok_or_else(|| shape(&bpath, format!("missing bond from {} to {i}", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ProjectiveSystem::chain(spaces, bonds)?)
        }
        other => Err(shape(&format!("{path}.presentation"), format!("unknown presentation {other:?}"))),
    }
}

fn valued_from(obj: &Map<String, Value>, path: &str) -> Result<ValuedSpec, DocumentError> {
    if let Some(rule) = obj.get("rule") {
        let rule = rule.as_str().ok_or_else(|| shape(&format!("{path}.rule"), "expected a string"))?;
        let stop = match obj.get("stop") {
            None | Some(Value::Null) => None,
            Some(s) => Some(
                s.as_u64()
                    .ok_or_else(|| shape(&format!("{path}.stop"), "expected a level number or null"))?
                    as usize,
            ),
        };
        if named_rule(rule, stop).is_none() {
            return Err(shape(&format!("{path}.rule"), format!("unknown rule {rule:?}")));
        }
        return Ok(ValuedSpec::Lazy(LazySpec {
            rule: rule.to_string(),
            stop,
        }));
    }
    let sys = Arc::new(system_from(field(obj, "system", path)?, &format!("{path}.system"))?);
    let idx = sys.index();
    match (obj.get("valuations"), obj.get("top")) {
        (Some(vals), None) => {
            let vpath = format!("{path}.valuations");
            let vals_obj = object(vals, &vpath)?;
            if vals_obj.len() != sys.len() {
                return Err(shape(&vpath, "expected one valuation per index"));
            }
            let vals = (0..sys.len())
                .map(|i| {
                    let l = idx.label(i);
                    let p = format!("{vpath}.{l}");
                    let w = vals_obj.get(l).ok_or_else(|| shape(&p, "missing"))?;
                    weights_on(sys.space(i), &weight_map(w, &p)?)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ValuedSpec::Explicit(ValuedSystem::new(sys, vals)?))
        }
        (None, Some(top)) => {
            let w = weight_map(top, &format!("{path}.top"))?;
            let top = weights_on(sys.space(sys.top()), &w)?;
            Ok(ValuedSpec::Explicit(ValuedSystem::from_top(sys, &top)?))
        }
        _ => Err(shape(path, "expected exactly one of \"valuations\", \"top\" and \"rule\"")),
    }
}

fn query_from(obj: &Map<String, Value>, path: &str) -> Result<Query, DocumentError> {
    match str_field(obj, "op", path)? {
        "limit-eval" => {
            let cpath = format!("{path}.cylinders");
            let cylinders = array(field(obj, "cylinders", path)?, &cpath)?
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let p = format!("{cpath}[{k}]");
                    let c = object(c, &p)?;
                    Ok(CylinderQuery {
                        level: str_field(c, "level", &p)?.to_string(),
                        open: strings(field(c, "open", &p)?, &format!("{p}.open"))?,
                    })
                })
                .collect::<Result<_, DocumentError>>()?;
            Ok(Query::LimitEval { cylinders })
        }
        "product" => {
            let fpath = format!("{path}.factors");
            let factors = array(field(obj, "factors", path)?, &fpath)?
                .iter()
                .enumerate()
                .map(|(k, f)| space_from(f, &format!("{fpath}[{k}]")).map(Arc::new))
                .collect::<Result<Vec<_>, _>>()?;
            let input = match (obj.get("joint"), obj.get("marginals")) {
                (Some(j), None) => ProductInput::Joint(weight_map(j, &format!("{path}.joint"))?),
                (None, Some(m)) => {
                    let mpath = format!("{path}.marginals");
                    let m = object(m, &mpath)?
                        .iter()
                        .map(|(k, w)| Ok((k.clone(), weight_map(w, &format!("{mpath}.{k}"))?)))
                        .collect::<Result<_, DocumentError>>()?;
                    ProductInput::Marginals(m)
                }
                _ => return Err(shape(path, "expected exactly one of \"joint\" and \"marginals\"")),
            };
            Ok(Query::Product { factors, input })
        }
        "support" => Ok(Query::Support {
            subset: strings(field(obj, "subset", path)?, &format!("{path}.subset"))?,
        }),
        other => Err(shape(&format!("{path}.op"), format!("unknown operation {other:?}"))),
    }
}

// ---- writing helpers

pub fn space_value(s: &FiniteSpace) -> Value {
    let covers: Vec<Value> = s.covers().iter().map(|&(a, b)| json!([s.label(a), s.label(b)])).collect();
    json!({ "elements": s.labels(), "covers": covers })
}

pub fn set_value(s: &FiniteSpace, set: &PointSet) -> Value {
    json!(s.set_labels(set))
}

fn weights_value(nu: &Valuation) -> Value {
    let space = nu.space();
    let m: Map<String, Value> = nu
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(x, w)| (space.label(x).to_string(), json!(w.to_string())))
        .collect();
    Value::Object(m)
}

pub fn valuation_value(nu: &Valuation) -> Value {
    json!({ "space": space_value(nu.space()), "weights": weights_value(nu) })
}

fn table_value(t: &SetFunction) -> Value {
    let space = t.space();
    let rows: Vec<Value> = t
        .iter()
        .map(|(u, v)| json!({ "open": set_value(space, u), "value": v.to_string() }))
        .collect();
    json!({ "space": space_value(space), "table": rows })
}

fn graph_value(m: &MonotoneMap) -> Value {
    let obj: Map<String, Value> = m
        .graph()
        .iter()
        .enumerate()
        .map(|(x, &y)| (m.source().label(x).to_string(), json!(m.target().label(y))))
        .collect();
    Value::Object(obj)
}

pub fn system_value(sys: &ProjectiveSystem) -> Value {
    let idx = sys.index();
    let poset = idx.poset();
    let levels: Map<String, Value> = (0..sys.len())
        .map(|i| (idx.label(i).to_string(), space_value(sys.space(i))))
        .collect();
    let bonds: Vec<Value> = poset
        .covers()
        .into_iter()
        .map(|(i, j)| json!({ "from": idx.label(j), "to": idx.label(i), "graph": graph_value(sys.bond(i, j)) }))
        .collect();
    let presentation = match sys.presentation() {
        Presentation::Finite => "finite",
        Presentation::ExplicitPrefix => "explicit-prefix",
    };
    json!({
        "presentation": presentation,
        "index": space_value(poset),
        "levels": levels,
        "bonds": bonds,
    })
}

fn valued_value(v: &ValuedSpec) -> Value {
    match v {
        ValuedSpec::Lazy(l) => json!({ "rule": l.rule, "stop": l.stop }),
        ValuedSpec::Explicit(vs) => {
            let sys = vs.system();
            let vals: Map<String, Value> = (0..sys.len())
                .map(|i| (sys.index().label(i).to_string(), weights_value(vs.valuation(i))))
                .collect();
            json!({ "system": system_value(sys), "valuations": vals })
        }
    }
}

fn value_map(m: &BTreeMap<String, ExtNonneg>) -> Value {
    Value::Object(
        m.iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.clone(), json!(v.to_string())))
            .collect(),
    )
}

fn query_value(q: &Query) -> Value {
    match q {
        Query::LimitEval { cylinders } => {
            let cs: Vec<Value> = cylinders.iter().map(|c| json!({ "level": c.level, "open": c.open })).collect();
            json!({ "op": "limit-eval", "cylinders": cs })
        }
        Query::Product { factors, input } => {
            let fs: Vec<Value> = factors.iter().map(|f| space_value(f)).collect();
            match input {
                ProductInput::Joint(j) => json!({ "op": "product", "factors": fs, "joint": value_map(j) }),
                ProductInput::Marginals(m) => {
                    let ms: Map<String, Value> = m.iter().map(|(k, w)| (k.clone(), value_map(w))).collect();
                    json!({ "op": "product", "factors": fs, "marginals": ms })
                }
            }
        }
        Query::Support { subset } => json!({ "op": "support", "subset": subset }),
    }
}

/// Reads the open with the given labels at the given space.
pub fn open_of(space: &FiniteSpace, labels: &[String]) -> Result<UpSet, OrderError> {
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    space.up_set_of(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIERPINSKI: &str = r#"{
  "covers": [
    [
      "bot",
      "top"
    ]
  ],
  "elements": [
    "bot",
    "top"
  ],
  "kind": "space",
  "schema": 1
}
"#;

    #[test]
    fn space_round_trip() {
        let doc = parse(SIERPINSKI).unwrap();
        assert_eq!(to_text(&doc), SIERPINSKI);
    }

    #[test]
    fn closure_on_load_and_hasse_on_write() {
        let text = r#"{"schema":1,"kind":"space","elements":["a","b","c"],"covers":[["a","b"],["b","c"],["a","c"]]}"#;
        let doc = parse(text).unwrap();
        let Document::Space(s) = &doc else { panic!() };
        assert!(s.le(0, 2));
        let v = to_value(&doc);
        assert_eq!(v["covers"].as_array().unwrap().len(), 2);
        assert_eq!(to_text(&parse(&to_text(&doc)).unwrap()), to_text(&doc));
    }

    #[test]
    fn valuation_normalizes_values() {
        let text = r#"{"schema":1,"kind":"valuation","space":{"elements":["x","y"]},"weights":{"x":"2/4","y":"0"}}"#;
        let out = to_text(&parse(text).unwrap());
        assert!(out.contains("\"x\": \"1/2\""));
        assert!(!out.contains("\"y\":"));
        assert_eq!(to_text(&parse(&out).unwrap()), out);
    }

    #[test]
    fn bad_values_are_rejected() {
        let text = r#"{"schema":1,"kind":"valuation","space":{"elements":["x"]},"weights":{"x":"1/0"}}"#;
        assert!(matches!(parse(text), Err(DocumentError::Value { .. })));
        assert!(matches!(parse("{"), Err(DocumentError::Json(_))));
        assert!(matches!(parse(r#"{"kind":"space"}"#), Err(DocumentError::Shape { .. })));
    }

    #[test]
    fn system_round_trip() {
        let sys = crate::gallery::injections_system(2, 2).unwrap();
        let doc = Document::System(Arc::new(sys));
        let text = to_text(&doc);
        let back = parse(&text).unwrap();
        assert_eq!(to_text(&back), text);
        let Document::System(s) = back else { panic!() };
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn chain_round_trip_with_valuations() {
        let lazy = crate::projective::lazy::LazyChain::new(Box::new(crate::projective::lazy::LiftChain { stop: None }), 3);
        let sys = Arc::new(lazy.prefix(3).unwrap());
        let top = lazy.valuation(3).unwrap().unwrap();
        let vs = ValuedSystem::from_top(sys, &top).unwrap();
        let doc = Document::ValuedSystem(ValuedSpec::Explicit(vs));
        let text = to_text(&doc);
        assert_eq!(to_text(&parse(&text).unwrap()), text);
        let lazy_doc = Document::ValuedSystem(ValuedSpec::Lazy(LazySpec {
            rule: "truncation".into(),
            stop: Some(4),
        }));
        let text = to_text(&lazy_doc);
        assert_eq!(to_text(&parse(&text).unwrap()), text);
    }

    #[test]
    fn table_documents_load_without_checks() {
        let text = r#"{"schema":1,"kind":"valuation","space":{"elements":["a","b"]},
            "table":[{"open":[],"value":"0"},{"open":["a"],"value":"1"},{"open":["b"],"value":"1"},{"open":["a","b"],"value":"1"}]}"#;
        let doc = parse(text).unwrap();
        assert!(matches!(doc, Document::Table(_)));
        assert_eq!(to_text(&parse(&to_text(&doc)).unwrap()), to_text(&doc));
    }
}
