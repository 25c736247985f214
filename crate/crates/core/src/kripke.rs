//! Finite Kripke frames for the modal language: forcing, frame validity
//! and bounded refutation search over all small frames.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::ElemSet;
use crate::formula::{Formula, LanguageTag};
use crate::order::{enumerate_posets, FinitePoset};
use crate::semantics::CheckConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("formula {0} uses strong negation")]
    NotModal(String),
    #[error("variable {0} has no value")]
    Unbound(String),
    #[error("{valuations} valuations exceed the cap of {cap}")]
    ResourceLimit { valuations: u128, cap: u128 },
}

/// A frame together with a valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub frame: FinitePoset,
    pub valuation: BTreeMap<String, ElemSet>,
}

#[derive(Debug, Clone, Copy)]
enum KNode {
    Var(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Box(usize),
}

/// A modal formula flattened to postorder for repeated evaluation.
#[derive(Debug, Clone)]
struct Compiled {
    vars: Vec<String>,
    nodes: Vec<KNode>,
}

impl Compiled {
    fn new(phi: &Formula) -> Result<Compiled, KripkeError> {
        let core = phi.desugar_in(LanguageTag::Lbox);
        let vars: Vec<String> = core.vars().into_iter().collect();
        let mut c = Compiled {
            vars,
            nodes: Vec::new(),
        };
        c.push(&core, phi)?;
        Ok(c)
    }

    fn push(&mut self, f: &Formula, orig: &Formula) -> Result<usize, KripkeError> {
        let node = match f {
            Formula::Var(x) => KNode::Var(self.vars.binary_search(x).expect("collected")),
            Formula::Bot => KNode::Bot,
            Formula::And(a, b) => KNode::And(self.push(a, orig)?, self.push(b, orig)?),
            Formula::Or(a, b) => KNode::Or(self.push(a, orig)?, self.push(b, orig)?),
            Formula::Imp(a, b) => KNode::Imp(self.push(a, orig)?, self.push(b, orig)?),
            Formula::Box(a) => KNode::Box(self.push(a, orig)?),
            _ => return Err(KripkeError::NotModal(orig.to_string())),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    fn truth(&self, frame: &FinitePoset, vals: &[ElemSet], scratch: &mut Vec<ElemSet>) -> ElemSet {
        let full = ElemSet::full(frame.size());
        scratch.clear();
        for node in &self.nodes {
            let s = match *node {
                KNode::Var(v) => vals[v],
                KNode::Bot => ElemSet::EMPTY,
                KNode::And(a, b) => scratch[a].intersection(scratch[b]),
                KNode::Or(a, b) => scratch[a].union(scratch[b]),
                KNode::Imp(a, b) => full.difference(scratch[a]).union(scratch[b]),
                KNode::Box(a) => frame.interior(scratch[a]),
            };
            scratch.push(s);
        }
        *scratch.last().expect("nonempty formula")
    }
}

/// Worlds of the model forcing `phi`.
pub fn truth_set(m: &KripkeModel, phi: &Formula) -> Result<ElemSet, KripkeError> {
    let c = Compiled::new(phi)?;
    let vals = c
        .vars
        .iter()
        .map(|x| {
            m.valuation
                .get(x)
                .copied()
                .ok_or_else(|| KripkeError::Unbound(x.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(c.truth(&m.frame, &vals, &mut Vec::new()))
}

pub fn forces(m: &KripkeModel, world: usize, phi: &Formula) -> Result<bool, KripkeError> {
    Ok(truth_set(m, phi)?.contains(world))
}

/// A model and a world where a formula fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeRefutation {
    pub frame: FinitePoset,
    pub valuation: BTreeMap<String, ElemSet>,
    pub world: usize,
}

impl KripkeRefutation {
    pub fn model(&self) -> KripkeModel {
        KripkeModel {
            frame: self.frame.clone(),
            valuation: self.valuation.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FrameValidity {
    Valid,
    Refuted(KripkeRefutation),
}

impl FrameValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, FrameValidity::Valid)
    }
}

fn valuation_count(n: usize, k: usize) -> u128 {
    1u128.checked_shl((n * k) as u32).unwrap_or(u128::MAX)
}

// Valuations ordered with the first variable most significant and each
// subset read as a binary number; the least failing world is reported.
fn refute_on(c: &Compiled, frame: &FinitePoset, cap: u128) -> Result<Option<KripkeRefutation>, KripkeError> {
    let n = frame.size();
    let k = c.vars.len();
    let total = valuation_count(n, k);
    if total > cap {
        return Err(KripkeError::ResourceLimit { valuations: total, cap });
    }
    let full = ElemSet::full(n);
    let mask = full.0;
    let mut vals = vec![ElemSet::EMPTY; k];
    let mut scratch = Vec::with_capacity(c.nodes.len());
    for code in 0..total {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = ElemSet(((code >> (n * (k - 1 - i))) as u64) & mask);
        }
        let t = c.truth(frame, &vals, &mut scratch);
        if let Some(world) = full.difference(t).first() {
            return Ok(Some(KripkeRefutation {
                frame: frame.clone(),
                valuation: c.vars.iter().cloned().zip(vals.iter().copied()).collect(),
                world,
            }));
        }
    }
    Ok(None)
}

/// Validity on a frame, over every valuation of the formula's variables.
pub fn frame_valid(frame: &FinitePoset, phi: &Formula, cfg: &CheckConfig) -> Result<FrameValidity, KripkeError> {
    let c = Compiled::new(phi)?;
    Ok(match refute_on(&c, frame, cfg.cap)? {
        None => FrameValidity::Valid,
        Some(r) => FrameValidity::Refuted(r),
    })
}

/// Outcome of scanning every frame up to a size bound. Absence of a
/// refutation only covers the frames scanned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrzSearch {
    pub max_worlds: usize,
    pub frames_checked: usize,
    pub refutation: Option<KripkeRefutation>,
}

/// First refuting frame in enumeration order (by size, then relation
/// bitmask), if any.
pub fn grz_refutation_search(phi: &Formula, max_worlds: usize, cfg: &CheckConfig) -> Result<GrzSearch, KripkeError> {
    let c = Compiled::new(phi)?;
    let frames = enumerate_posets(max_worlds);
    let found = if cfg.parallel {
        frames
            .par_iter()
            .map(|f| refute_on(&c, f, cfg.cap).transpose())
            .find_map_first(|r| r)
    } else {
        frames.iter().find_map(|f| refute_on(&c, f, cfg.cap).transpose())
    };
    let refutation = found.transpose()?;
    let frames_checked = match &refutation {
        None => frames.len(),
        Some(r) => frames
            .iter()
            .position(|f| *f == r.frame)
            .map_or(frames.len(), |i| i + 1),
    };
    Ok(GrzSearch {
        max_worlds,
        frames_checked,
        refutation,
    })
}

/// Looks for a world that forces `[]<>!p & []<>!q & [](p | q)` and still
/// sees a maximal world; on a finite frame such a world cannot exist.
pub fn maximal_world_obstruction(frame: &FinitePoset) -> Option<KripkeRefutation> {
    let premise: Formula = "[]<>!p & []<>!q & [](p | q)".parse().expect("fixed formula");
    let c = Compiled::new(&premise).expect("modal formula");
    let n = frame.size();
    let maximal = frame.maximal();
    let mask = ElemSet::full(n).0;
    let mut scratch = Vec::new();
    for code in 0..valuation_count(n, 2) {
        let vals = [ElemSet(((code >> n) as u64) & mask), ElemSet((code as u64) & mask)];
        let t = c.truth(frame, &vals, &mut scratch);
        if let Some(world) = t.iter().find(|&x| !frame.above(x).intersection(maximal).is_empty()) {
            return Some(KripkeRefutation {
                frame: frame.clone(),
                valuation: c.vars.iter().cloned().zip(vals).collect(),
                world,
            });
        }
    }
    None
}
