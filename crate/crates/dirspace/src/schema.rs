//! Versioned JSON input documents.

use serde_json::{Map, Value};

use crate::algebra::{Algebra, Theory};
use crate::bposet::BPoset;
use crate::elem::Elem;
use crate::nab::Nab;
use crate::order::{MapRule, Poset};
use crate::report::{Error, Result};
use crate::space::{Family, Open, Space, Subset};

pub const SCHEMA_VERSION: u64 = 1;

const FIELDS: [&str; 18] = [
    "schema", "basis", "poset", "space", "spaces", "bposet", "bposets", "nab", "nabs", "theory", "algebra", "algebras", "map", "maps",
    "tables", "points", "family", "open",
];

/// Every object a command may consume; absent fields are empty.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub poset: Option<Poset>,
    pub space: Option<Space>,
    pub spaces: Vec<Space>,
    pub bposet: Option<BPoset>,
    pub bposets: Vec<BPoset>,
    pub nab: Option<Nab>,
    pub nabs: Vec<Nab>,
    pub theory: Option<Theory>,
    pub algebra: Option<Algebra>,
    pub algebras: Vec<Algebra>,
    pub map: Option<MapRule>,
    pub maps: Vec<MapRule>,
    /// Index tables for maps between finite carriers.
    pub tables: Vec<Vec<usize>>,
    pub points: Vec<Elem>,
    pub family: Option<Family>,
    pub open: Option<Open>,
    /// Basis candidate for `space basis`.
    pub basis: Option<Subset>,
    pub raw: Value,
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { node, msg } if !node.starts_with(path) => Error::parse(format!("{path}.{node}"), msg),
        other => other,
    })
}

fn list<T>(obj: &Map<String, Value>, key: &str, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Array(a)) => a.iter().enumerate().map(|(i, v)| at(&format!("{key}[{i}]"), f(v))).collect(),
        Some(_) => Err(Error::parse(key, "expected an array")),
    }
}

fn serde_field<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, key: &str) -> Result<Option<T>> {
    obj.get(key).map(|v| serde_json::from_value(v.clone()).map_err(|e| Error::parse(key, e.to_string()))).transpose()
}

/// Parse a document; syntax errors carry line and column.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    document_from_value(raw)
}

pub fn document_from_value(raw: Value) -> Result<Document> {
    let obj = raw.as_object().ok_or_else(|| Error::parse("document", "expected a JSON object"))?;
    match obj.get("schema") {
        None => return Err(Error::parse("schema", "missing required field \"schema\"")),
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::parse("schema", format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"))),
    }
    if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(Error::parse(k.as_str(), "unknown field"));
    }
    Ok(Document {
        poset: obj.get("poset").map(|v| at("poset", Poset::from_json(v))).transpose()?,
        space: obj.get("space").map(|v| at("space", Space::from_json(v))).transpose()?,
        spaces: list(obj, "spaces", Space::from_json)?,
        bposet: obj.get("bposet").map(|v| at("bposet", BPoset::from_json(v))).transpose()?,
        bposets: list(obj, "bposets", BPoset::from_json)?,
        nab: obj.get("nab").map(|v| at("nab", Nab::from_json(v))).transpose()?,
        nabs: list(obj, "nabs", Nab::from_json)?,
        theory: obj.get("theory").map(|v| at("theory", Theory::from_json(v))).transpose()?,
        algebra: obj.get("algebra").map(|v| at("algebra", Algebra::from_json(v))).transpose()?,
        algebras: list(obj, "algebras", Algebra::from_json)?,
        map: serde_field(obj, "map")?,
        maps: serde_field(obj, "maps")?.unwrap_or_default(),
        tables: serde_field(obj, "tables")?.unwrap_or_default(),
        points: list(obj, "points", |v| Elem::from_json(v).map_err(|m| Error::parse("element", m)))?,
        family: serde_field(obj, "family")?,
        open: serde_field(obj, "open")?,
        basis: serde_field(obj, "basis")?,
        raw,
    })
}

impl Document {
    pub fn need<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
        field.as_ref().ok_or_else(|| Error::parse(name, format!("this command needs a \"{name}\" field")))
    }

    /// The space described by `space`, or `poset` with its Alexandrov topology.
    pub fn the_space(&self) -> Result<Space> {
        match (&self.space, &self.poset) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) => Ok(Space::alexandrov(p.clone())),
            _ => Err(Error::parse("space", "this command needs a \"space\" or \"poset\" field")),
        }
    }

    /// The `k`-th of the listed spaces.
    pub fn space_at(&self, k: usize) -> Result<&Space> {
        self.spaces.get(k).ok_or_else(|| Error::parse("spaces", format!("this command needs at least {} space(s)", k + 1)))
    }

    pub fn table_at(&self, k: usize) -> Result<&Vec<usize>> {
        self.tables.get(k).ok_or_else(|| Error::parse("tables", format!("this command needs at least {} table(s)", k + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = parse_document(r#"{"schema":1,"poset":{"kind":"chain","n":2}}"#).unwrap();
        assert_eq!(d.poset, Some(Poset::Chain(2)));
        let d = parse_document(r#"{"schema":1,"space":{"poset":{"kind":"flat_nat_top"},"topology":"upper"}}"#).unwrap();
        assert_eq!(d.space, Some(Space::flat_nat_top_upper()));
        let e = parse_document(r#"{"poset":{"kind":"chain","n":2}}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref node, .. } if node == "schema"));
        let e = parse_document(r#"{"schema":1,"posset":{}}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref node, .. } if node == "posset"));
        let e = parse_document(r#"{"schema":1,"poset":{"kind":"chain","n":2,"m":1}}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref node, .. } if node == "poset.m"), "{e:?}");
        let e = parse_document("{\"schema\":1,\n\"poset\":").unwrap_err();
        assert!(matches!(e, Error::Parse { ref node, .. } if node.starts_with("line 2")), "{e:?}");
    }
}
