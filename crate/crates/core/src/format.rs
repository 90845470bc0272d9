//! The JSON document format read and written by the command-line tool.
//!
//! Every document is an object with a `"kind"` field. Rationals are strings
//! (`"1/6"`, `"-3"`); labels are strings, with tuples written either as
//! nested arrays or in the `<a,b>` text form. Objects keyed by labels always
//! use the text form for keys. A nested scheme may be given inline or as a
//! path to a scheme document, resolved relative to the containing file.
//!
//! ```text
//! {"kind":"scheme","outcomes":["1","2"],"mass":{"1":"1/3","2":"2/3"}}
//! {"kind":"rv","scheme":<scheme>,"values":{label: rational}}
//! {"kind":"rf","scheme":<scheme>,"values":{label: label}}
//! {"kind":"bundle","total":<scheme>,"base":<scheme>,"map":{label: label}}
//! {"kind":"partition","scheme":<scheme>,"blocks":[[label, ...], ...]}
//! {"kind":"pairs","schemes":[<scheme>, ...]}
//! ```
//!
//! Serialization is canonical: fields in the order above, label-keyed
//! entries in label order, rationals reduced, nested schemes inlined.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::algebra::Partition;
use crate::bundle::Bundle;
use crate::error::Error;
use crate::label::Label;
use crate::rational::{self, Rational};
use crate::scheme::Scheme;
use crate::variable::{RandomFunction, RandomVariable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Scheme(Scheme),
    Rv(RandomVariable),
    Rf(RandomFunction),
    Bundle(Bundle),
    Partition(Partition),
    Pairs(Vec<Scheme>),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Scheme(_) => "scheme",
            Document::Rv(_) => "rv",
            Document::Rf(_) => "rf",
            Document::Bundle(_) => "bundle",
            Document::Partition(_) => "partition",
            Document::Pairs(_) => "pairs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// One line, no insignificant whitespace.
    #[default]
    Canonical,
    /// Indented by two spaces.
    Pretty,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-formed document whose content is rejected by the core types.
    #[error("at {location}: {error}")]
    Semantic { location: String, error: Error },
    /// A field is missing, unexpected or of the wrong shape.
    #[error("at {location}: {message}")]
    Malformed { location: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

type Parsed<T> = std::result::Result<T, FormatError>;

/// Parses a document; relative scheme paths resolve against the working
/// directory.
pub fn parse_document(text: &str) -> Parsed<Document> {
    parse_document_in(text, Path::new("."))
}

/// Parses a document whose relative scheme paths resolve against `dir`.
pub fn parse_document_in(text: &str, dir: &Path) -> Parsed<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    Reader { dir }.document(&value, &Location::root())
}

/// Reads and parses a document from a file.
pub fn read_document(path: &Path) -> Parsed<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_document_in(&text, dir)
}

pub fn to_value(doc: &Document) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), doc.kind().into());
    match doc {
        Document::Scheme(s) => return scheme_value(s),
        Document::Rv(x) => {
            obj.insert("scheme".into(), scheme_value(x.domain()));
            let values = x.iter().map(|(l, v)| (l.to_string(), v.to_string().into()));
            obj.insert("values".into(), Value::Object(values.collect()));
        }
        Document::Rf(f) => {
            obj.insert("scheme".into(), scheme_value(f.domain()));
            let values = f.iter().map(|(l, v)| (l.to_string(), label_value(v)));
            obj.insert("values".into(), Value::Object(values.collect()));
        }
        Document::Bundle(b) => {
            obj.insert("total".into(), scheme_value(b.total()));
            obj.insert("base".into(), scheme_value(b.base()));
            let map = b
                .total()
                .outcomes()
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), label_value(b.base().outcome(b.image_index(i)))));
            obj.insert("map".into(), Value::Object(map.collect()));
        }
        Document::Partition(p) => {
            obj.insert("scheme".into(), scheme_value(p.domain()));
            let blocks = p
                .blocks()
                .into_iter()
                .map(|block| Value::Array(block.into_iter().map(label_value).collect()));
            obj.insert("blocks".into(), Value::Array(blocks.collect()));
        }
        Document::Pairs(schemes) => {
            obj.insert(
                "schemes".into(),
                Value::Array(schemes.iter().map(scheme_value).collect()),
            );
        }
    }
    Value::Object(obj)
}

/// Serializes with a trailing newline.
pub fn serialize(doc: &Document, style: Style) -> String {
    let value = to_value(doc);
    let mut text = match style {
        Style::Canonical => serde_json::to_string(&value),
        Style::Pretty => serde_json::to_string_pretty(&value),
    }
    .expect("JSON values always serialize");
    text.push('\n');
    text
}

fn scheme_value(s: &Scheme) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), "scheme".into());
    obj.insert(
        "outcomes".into(),
        Value::Array(s.outcomes().iter().map(label_value).collect()),
    );
    let mass = s.iter().map(|(l, m)| (l.to_string(), m.to_string().into()));
    obj.insert("mass".into(), Value::Object(mass.collect()));
    Value::Object(obj)
}

fn label_value(label: &Label) -> Value {
    match label {
        Label::Atom(a) => Value::String(a.clone()),
        Label::Tuple(parts) => Value::Array(parts.iter().map(label_value).collect()),
    }
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A JSON-pointer-like path into the document being read.
#[derive(Clone)]
struct Location(String);

impl Location {
    fn root() -> Self {
        Location(String::new())
    }

    fn field(&self, name: &str) -> Self {
        Location(format!("{}/{}", self.0, name.replace('~', "~0").replace('/', "~1")))
    }

    fn index(&self, i: usize) -> Self {
        Location(format!("{}/{}", self.0, i))
    }

    fn malformed<T>(&self, message: impl Into<String>) -> Parsed<T> {
        Err(FormatError::Malformed {
            location: self.to_string(),
            message: message.into(),
        })
    }

    fn semantic(&self, error: Error) -> FormatError {
        FormatError::Semantic {
            location: self.to_string(),
            error,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("/")
        } else {
            f.write_str(&self.0)
        }
    }
}

struct Reader<'a> {
    dir: &'a Path,
}

impl Reader<'_> {
    fn document(&self, value: &Value, at: &Location) -> Parsed<Document> {
        let obj = object(value, at)?;
        let kind = match obj.get("kind") {
            Some(Value::String(k)) => k.as_str(),
            Some(_) => return at.field("kind").malformed("expected a string"),
            None => return at.malformed("missing field \"kind\""),
        };
        match kind {
            "scheme" => self.scheme_fields(obj, at).map(Document::Scheme),
            "rv" => {
                only_fields(obj, &["kind", "scheme", "values"], at)?;
                let scheme = self.nested_scheme(obj, "scheme", at)?;
                let values_at = at.field("values");
                let map = label_map(require(obj, "values", at)?, &values_at, rational_of)?;
                RandomVariable::from_map(&scheme, &map)
                    .map(Document::Rv)
                    .map_err(|e| values_at.semantic(e))
            }
            "rf" => {
                only_fields(obj, &["kind", "scheme", "values"], at)?;
                let scheme = self.nested_scheme(obj, "scheme", at)?;
                let values_at = at.field("values");
                let map = label_map(require(obj, "values", at)?, &values_at, label_of)?;
                RandomFunction::from_map(&scheme, &map)
                    .map(Document::Rf)
                    .map_err(|e| values_at.semantic(e))
            }
            "bundle" => {
                only_fields(obj, &["kind", "total", "base", "map"], at)?;
                let total = self.nested_scheme(obj, "total", at)?;
                let base = self.nested_scheme(obj, "base", at)?;
                let map_at = at.field("map");
                let map = label_map(require(obj, "map", at)?, &map_at, label_of)?;
                Bundle::new(&total, &base, &map)
                    .map(Document::Bundle)
                    .map_err(|e| map_at.semantic(e))
            }
            "partition" => {
                only_fields(obj, &["kind", "scheme", "blocks"], at)?;
                let scheme = self.nested_scheme(obj, "scheme", at)?;
                let blocks_at = at.field("blocks");
                let blocks = array(require(obj, "blocks", at)?, &blocks_at)?
                    .iter()
                    .enumerate()
                    .map(|(i, block)| {
                        let block_at = blocks_at.index(i);
                        array(block, &block_at)?
                            .iter()
                            .enumerate()
                            .map(|(j, l)| label_of(l, &block_at.index(j)))
                            .collect::<Parsed<Vec<Label>>>()
                    })
                    .collect::<Parsed<Vec<_>>>()?;
                Partition::new(&scheme, &blocks)
                    .map(Document::Partition)
                    .map_err(|e| blocks_at.semantic(e))
            }
            "pairs" => {
                only_fields(obj, &["kind", "schemes"], at)?;
                let schemes_at = at.field("schemes");
                array(require(obj, "schemes", at)?, &schemes_at)?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| self.scheme_or_path(s, &schemes_at.index(i)))
                    .collect::<Parsed<Vec<_>>>()
                    .map(Document::Pairs)
            }
            other => at.field("kind").malformed(format!("unknown document kind {other:?}")),
        }
    }

    fn scheme_fields(&self, obj: &Map<String, Value>, at: &Location) -> Parsed<Scheme> {
        only_fields(obj, &["kind", "outcomes", "mass"], at)?;
        if let Some(kind) = obj.get("kind") {
            if kind != "scheme" {
                return at.field("kind").malformed("expected \"scheme\"");
            }
        }
        let outcomes_at = at.field("outcomes");
        let outcomes = array(require(obj, "outcomes", at)?, &outcomes_at)?
            .iter()
            .enumerate()
            .map(|(i, l)| label_of(l, &outcomes_at.index(i)))
            .collect::<Parsed<Vec<Label>>>()?;
        let mass_at = at.field("mass");
        let mass = label_map(require(obj, "mass", at)?, &mass_at, rational_of)?;
        let mut masses = Vec::with_capacity(outcomes.len());
        for (i, label) in outcomes.iter().enumerate() {
            match mass.get(label) {
                Some(m) => masses.push(m.clone()),
                None => {
                    return Err(outcomes_at.index(i).semantic(Error::MissingValue(label.clone())))
                }
            }
        }
        if let Some(extra) = mass.keys().find(|l| !outcomes.contains(l)) {
            return Err(mass_at.semantic(Error::UnknownLabel(extra.clone())));
        }
        Scheme::new(outcomes, masses).map_err(|e| at.semantic(e))
    }

    fn nested_scheme(&self, obj: &Map<String, Value>, field: &str, at: &Location) -> Parsed<Scheme> {
        self.scheme_or_path(require(obj, field, at)?, &at.field(field))
    }

    fn scheme_or_path(&self, value: &Value, at: &Location) -> Parsed<Scheme> {
        match value {
            Value::String(path) => {
                let path: PathBuf = self.dir.join(path);
                match read_document(&path) {
                    Ok(Document::Scheme(s)) => Ok(s),
                    Ok(other) => at.malformed(format!(
                        "{} holds a {} document, not a scheme",
                        path.display(),
                        other.kind()
                    )),
                    Err(e @ FormatError::Io { .. }) => Err(e),
                    Err(e) => at.malformed(format!("in {}: {e}", path.display())),
                }
            }
            Value::Object(obj) => self.scheme_fields(obj, at),
            _ => at.malformed("expected a scheme object or a path"),
        }
    }
}

fn require<'v>(obj: &'v Map<String, Value>, field: &str, at: &Location) -> Parsed<&'v Value> {
    match obj.get(field) {
        Some(v) => Ok(v),
        None => at.malformed(format!("missing field {field:?}")),
    }
}

fn only_fields(obj: &Map<String, Value>, allowed: &[&str], at: &Location) -> Parsed<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => at.malformed(format!("unexpected field {k:?}")),
        None => Ok(()),
    }
}

fn object<'v>(value: &'v Value, at: &Location) -> Parsed<&'v Map<String, Value>> {
    match value {
        Value::Object(obj) => Ok(obj),
        _ => at.malformed("expected an object"),
    }
}

fn array<'v>(value: &'v Value, at: &Location) -> Parsed<&'v Vec<Value>> {
    match value {
        Value::Array(items) => Ok(items),
        _ => at.malformed("expected an array"),
    }
}

fn label_map<T>(
    value: &Value,
    at: &Location,
    item: impl Fn(&Value, &Location) -> Parsed<T>,
) -> Parsed<BTreeMap<Label, T>> {
    let mut map = BTreeMap::new();
    for (key, v) in object(value, at)? {
        let entry_at = at.field(key);
        let label = Label::parse(key).map_err(|e| entry_at.semantic(e))?;
        if map.insert(label.clone(), item(v, &entry_at)?).is_some() {
            return Err(entry_at.semantic(Error::DuplicateLabel(label)));
        }
    }
    Ok(map)
}

fn label_of(value: &Value, at: &Location) -> Parsed<Label> {
    match value {
        Value::String(s) => Label::parse(s).map_err(|e| at.semantic(e)),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Label::try_atom(n.to_string()).map_err(|e| at.semantic(e))
        }
        Value::Array(parts) => {
            let parts = parts
                .iter()
                .enumerate()
                .map(|(i, p)| label_of(p, &at.index(i)))
                .collect::<Parsed<Vec<_>>>()?;
            Label::tuple(parts).map_err(|e| at.semantic(e))
        }
        _ => at.malformed("expected a label"),
    }
}

fn rational_of(value: &Value, at: &Location) -> Parsed<Rational> {
    match value {
        Value::String(s) => match rational::parse(s) {
            Some(r) => Ok(r),
            None => at.malformed(format!("{s:?} is not an exact rational")),
        },
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(rational::parse(&n.to_string()).expect("integers parse"))
        }
        Value::Number(n) => at.malformed(format!("{n} is not exact; write rationals as \"p/q\"")),
        _ => at.malformed("expected a rational"),
    }
}
