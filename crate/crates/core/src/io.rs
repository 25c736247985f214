//! Tagged JSON files for posets, algebras and twist-structures.
//!
//! Every document has a `"type"` of `poset`, `heyting`, `tba` or `twist`
//! and may carry a `"formulas"` array of formula strings. A twist document
//! names its base either by a path, resolved against the document's
//! directory, or by an inline document. A poset base stands for its
//! algebra of up-sets.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use crate::bits::ElemSet;
use crate::formula::{parse, Formula, ParseError};
use crate::heyting::{FiniteHeyting, HeytingTables};
use crate::order::{heyting_from_poset, FinitePoset, PosetSpec};
use crate::tba::{FiniteTba, TbaTables};
use crate::twist::{Base, TwistError, TwistStructure};
use crate::violation::Violation;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RawStructure {
    Poset(PosetSpec),
    Heyting(HeytingTables),
    Tba(TbaTables),
    Twist(RawTwist),
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawTwist {
    pub base: BaseRef,
    pub nabla: ElemSet,
    pub delta: ElemSet,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BaseRef {
    Path(String),
    Inline(Box<RawStructure>),
}

#[derive(Debug, Clone, Deserialize)]
struct RawDocument {
    #[serde(flatten)]
    structure: RawStructure,
    #[serde(default)]
    formulas: Vec<String>,
}

/// A structure that failed its own laws.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Invalid {
    #[error("{0}")]
    Law(Violation),
    #[error("{0}")]
    Twist(#[from] TwistError),
    #[error("a twist-structure cannot be the base of another")]
    NestedTwist,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("formula {index}: {source}")]
    Formula { index: usize, source: ParseError },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: Invalid },
}

impl LoadError {
    /// Whether the input was well-formed but violates a law.
    pub fn is_violation(&self) -> bool {
        matches!(self, LoadError::Invalid { .. })
    }
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Poset(FinitePoset),
    Heyting(Arc<FiniteHeyting>),
    Tba(Arc<FiniteTba>),
    Twist(TwistStructure),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Poset(_) => "poset",
            Loaded::Heyting(_) => "heyting",
            Loaded::Tba(_) => "tba",
            Loaded::Twist(_) => "twist",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub structure: Loaded,
    pub formulas: Vec<Formula>,
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn invalid(path: &Path, e: impl Into<Invalid>) -> LoadError {
    LoadError::Invalid {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

impl From<Violation> for Invalid {
    fn from(v: Violation) -> Invalid {
        Invalid::Law(v)
    }
}

/// Reads and validates a document.
pub fn load(path: &Path) -> Result<Document, LoadError> {
    let text = read(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_document(&text, path, dir)
}

/// `origin` is used in messages; relative base paths resolve against `dir`.
pub fn parse_document(text: &str, origin: &Path, dir: &Path) -> Result<Document, LoadError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| LoadError::Json {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;
    let formulas = raw
        .formulas
        .iter()
        .enumerate()
        .map(|(index, s)| parse(s).map_err(|source| LoadError::Formula { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    let structure = build(raw.structure, origin, dir)?;
    Ok(Document { structure, formulas })
}

fn build(raw: RawStructure, origin: &Path, dir: &Path) -> Result<Loaded, LoadError> {
    Ok(match raw {
        RawStructure::Poset(spec) => Loaded::Poset(FinitePoset::from_spec(&spec).map_err(|v| invalid(origin, v))?),
        RawStructure::Heyting(t) => Loaded::Heyting(Arc::new(
            FiniteHeyting::from_tables(&t).map_err(|v| invalid(origin, v))?,
        )),
        RawStructure::Tba(t) => Loaded::Tba(Arc::new(FiniteTba::from_tables(&t).map_err(|v| invalid(origin, v))?)),
        RawStructure::Twist(tw) => {
            let base = match tw.base {
                BaseRef::Inline(inner) => build(*inner, origin, dir)?,
                BaseRef::Path(p) => {
                    let path = dir.join(p);
                    load(&path)?.structure
                }
            };
            let base: Base = match base {
                Loaded::Poset(p) => heyting_from_poset(&p).0.into(),
                Loaded::Heyting(h) => h.into(),
                Loaded::Tba(b) => b.into(),
                Loaded::Twist(_) => return Err(invalid(origin, Invalid::NestedTwist)),
            };
            Loaded::Twist(TwistStructure::new(base, tw.nabla, tw.delta).map_err(|e| invalid(origin, e))?)
        }
    })
}

fn tagged(kind: &str, body: impl Serialize) -> Json {
    let mut v = serde_json::to_value(body).expect("plain data serializes");
    if let Json::Object(map) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("type".into(), Json::String(kind.into()));
        out.extend(std::mem::take(map));
        return Json::Object(out);
    }
    v
}

pub fn poset_json(p: &FinitePoset) -> Json {
    tagged("poset", p.to_spec())
}

pub fn heyting_json(h: &FiniteHeyting) -> Json {
    tagged("heyting", h.to_tables())
}

pub fn tba_json(b: &FiniteTba) -> Json {
    tagged("tba", b.to_tables())
}

/// Twist document with the base inlined.
pub fn twist_json(t: &TwistStructure) -> Json {
    let base = match t.base() {
        Base::Heyting(h) => heyting_json(h),
        Base::Tba(b) => tba_json(b),
    };
    serde_json::json!({
        "type": "twist",
        "base": base,
        "nabla": t.nabla(),
        "delta": t.delta(),
    })
}

pub fn to_json(s: &Loaded) -> Json {
    match s {
        Loaded::Poset(p) => poset_json(p),
        Loaded::Heyting(h) => heyting_json(h),
        Loaded::Tba(b) => tba_json(b),
        Loaded::Twist(t) => twist_json(t),
    }
}
