//! Propositional formulas over the four languages handled by the crate.
//!
//! The connective sets are
//!
//! * `Li`    = {∧, ∨, →, ⊥} (intuitionistic),
//! * `Ls`    = `Li` ∪ {∼} (strong negation),
//! * `Lbox`  = `Li` ∪ {□} (◇ is sugar for ¬□¬),
//! * `Lsbox` = `Li` ∪ {∼, □, ◇} (◇ primitive).
//!
//! `Neg`, `Iff` and `SIff` exist only as parse-time sugar and are removed by
//! [`Formula::desugar`].

mod axioms;
mod parser;
mod print;
mod translate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use axioms::{axioms, grz_disjunction_formula, AxiomSet};
pub use parser::{parse, ParseError, ParseErrorKind};
pub use translate::{belnap_translate, godel_tarski, TranslateError};

/// Words that may not be used as variable names.
pub const RESERVED: &[&str] = &["bot"];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bot,
    /// Strong negation `∼`.
    SNeg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    /// Sugar: `¬φ := φ → ⊥`.
    Neg(Box<Formula>),
    /// Sugar: `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`.
    Iff(Box<Formula>, Box<Formula>),
    /// Sugar: `φ ⇔ ψ := (φ ↔ ψ) ∧ (∼φ ↔ ∼ψ)`.
    SIff(Box<Formula>, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LanguageTag {
    Li,
    Ls,
    Lbox,
    Lsbox,
}

impl LanguageTag {
    pub fn has_strong_negation(self) -> bool {
        matches!(self, LanguageTag::Ls | LanguageTag::Lsbox)
    }

    pub fn has_modalities(self) -> bool {
        matches!(self, LanguageTag::Lbox | LanguageTag::Lsbox)
    }

    /// Least language containing both.
    pub fn join(self, other: LanguageTag) -> LanguageTag {
        let sneg = self.has_strong_negation() || other.has_strong_negation();
        let modal = self.has_modalities() || other.has_modalities();
        LanguageTag::from_flags(sneg, modal)
    }

    fn from_flags(sneg: bool, modal: bool) -> LanguageTag {
        match (sneg, modal) {
            (false, false) => LanguageTag::Li,
            (true, false) => LanguageTag::Ls,
            (false, true) => LanguageTag::Lbox,
            (true, true) => LanguageTag::Lsbox,
        }
    }

    /// Whether every formula of `self` is a formula of `other`.
    pub fn is_sublanguage_of(self, other: LanguageTag) -> bool {
        self.join(other) == other
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LanguageTag::Li => "Li",
            LanguageTag::Ls => "Ls",
            LanguageTag::Lbox => "Lbox",
            LanguageTag::Lsbox => "Lsbox",
        };
        f.write_str(s)
    }
}

// Short constructors; used heavily by the axiom library and tests.
impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }
    pub fn sneg(a: Formula) -> Formula {
        Formula::SNeg(Box::new(a))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }
    pub fn nec(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }
    pub fn poss(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn siff(a: Formula, b: Formula) -> Formula {
        Formula::SIff(Box::new(a), Box::new(b))
    }
}

impl Formula {
    /// Checked variable constructor: rejects reserved words and names outside
    /// `[a-z][a-zA-Z0-9_]*`.
    pub fn checked_var(name: &str) -> Result<Formula, ParseError> {
        parser::check_identifier(name)?;
        Ok(Formula::var(name))
    }

    pub fn is_sugar(&self) -> bool {
        matches!(self, Formula::Neg(_) | Formula::Iff(..) | Formula::SIff(..))
    }

    /// True when no `Neg`, `Iff` or `SIff` node occurs.
    pub fn is_sugar_free(&self) -> bool {
        !self.is_sugar() && self.children().iter().all(|c| c.is_sugar_free())
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Bot => vec![],
            Formula::SNeg(a) | Formula::Box(a) | Formula::Dia(a) | Formula::Neg(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) | Formula::SIff(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Variable names in sorted order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    fn contains_sneg(&self) -> bool {
        matches!(self, Formula::SNeg(_) | Formula::SIff(..)) || self.children().iter().any(|c| c.contains_sneg())
    }

    /// Eliminates `Neg`, `Iff` and `SIff`. `Dia` is expanded to `¬□¬` only
    /// when the formula has no strong negation, i.e. when it lives in `Lbox`;
    /// in `Lsbox` it is primitive. Idempotent.
    pub fn desugar(&self) -> Formula {
        let keep_dia = self.contains_sneg();
        self.desugar_with(keep_dia)
    }

    /// Desugars for a fixed target language. With `Lsbox` as the target `Dia`
    /// is kept primitive even if the formula has no `∼`; for every other
    /// target it is expanded.
    pub fn desugar_in(&self, target: LanguageTag) -> Formula {
        self.desugar_with(target == LanguageTag::Lsbox)
    }

    fn desugar_with(&self, keep_dia: bool) -> Formula {
        let d = |f: &Formula| f.desugar_with(keep_dia);
        match self {
            Formula::Var(_) | Formula::Bot => self.clone(),
            Formula::SNeg(a) => Formula::sneg(d(a)),
            Formula::And(a, b) => Formula::and(d(a), d(b)),
            Formula::Or(a, b) => Formula::or(d(a), d(b)),
            Formula::Imp(a, b) => Formula::imp(d(a), d(b)),
            Formula::Box(a) => Formula::nec(d(a)),
            Formula::Dia(a) => {
                if keep_dia {
                    Formula::poss(d(a))
                } else {
                    let neg = |f: Formula| Formula::imp(f, Formula::Bot);
                    neg(Formula::nec(neg(d(a))))
                }
            }
            Formula::Neg(a) => Formula::imp(d(a), Formula::Bot),
            Formula::Iff(a, b) => {
                let (a, b) = (d(a), d(b));
                Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
            }
            Formula::SIff(a, b) => {
                let (a, b) = (d(a), d(b));
                let iff = |x: Formula, y: Formula| Formula::and(Formula::imp(x.clone(), y.clone()), Formula::imp(y, x));
                Formula::and(iff(a.clone(), b.clone()), iff(Formula::sneg(a), Formula::sneg(b)))
            }
        }
    }

    /// Smallest language containing the formula. Sugar is classified by what
    /// it expands to (`SIff` introduces `∼`).
    pub fn language_of(&self) -> LanguageTag {
        let own = match self {
            Formula::SNeg(_) | Formula::SIff(..) => LanguageTag::Ls,
            Formula::Box(_) | Formula::Dia(_) => LanguageTag::Lbox,
            _ => LanguageTag::Li,
        };
        self.children().iter().fold(own, |acc, c| acc.join(c.language_of()))
    }

    /// Simultaneous substitution; unmapped variables are left alone.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        let s = |f: &Formula| f.substitute(map);
        match self {
            Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Bot => Formula::Bot,
            Formula::SNeg(a) => Formula::sneg(s(a)),
            Formula::And(a, b) => Formula::and(s(a), s(b)),
            Formula::Or(a, b) => Formula::or(s(a), s(b)),
            Formula::Imp(a, b) => Formula::imp(s(a), s(b)),
            Formula::Box(a) => Formula::nec(s(a)),
            Formula::Dia(a) => Formula::poss(s(a)),
            Formula::Neg(a) => Formula::neg(s(a)),
            Formula::Iff(a, b) => Formula::iff(s(a), s(b)),
            Formula::SIff(a, b) => Formula::siff(s(a), s(b)),
        }
    }

    /// Whether every `∼` is applied directly to a variable or to `⊥`.
    pub fn is_tb_normal(&self) -> bool {
        match self {
            Formula::SNeg(a) => matches!(**a, Formula::Var(_) | Formula::Bot),
            _ => self.children().iter().all(|c| c.is_tb_normal()),
        }
    }

    /// Whether `∼` does not occur (after desugaring).
    pub fn is_positive(&self) -> bool {
        !self.contains_sneg()
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
