//! Built-in axiom schemes, stated over the variables `p`, `q`, `r`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{parse, Formula};

/// Names of the built-in axiom lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomSet {
    Int,
    Sneg,
    S4modal,
    Bs4interplay,
    N4bot,
    S4,
    Bs4,
    Grz,
    Kleene,
    KleenePrime,
    ClosedIdealAxiom,
}

impl AxiomSet {
    pub const ALL: [AxiomSet; 11] = [
        AxiomSet::Int,
        AxiomSet::Sneg,
        AxiomSet::S4modal,
        AxiomSet::Bs4interplay,
        AxiomSet::N4bot,
        AxiomSet::S4,
        AxiomSet::Bs4,
        AxiomSet::Grz,
        AxiomSet::Kleene,
        AxiomSet::KleenePrime,
        AxiomSet::ClosedIdealAxiom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSet::Int => "INT",
            AxiomSet::Sneg => "SNEG",
            AxiomSet::S4modal => "S4MODAL",
            AxiomSet::Bs4interplay => "BS4INTERPLAY",
            AxiomSet::N4bot => "N4BOT",
            AxiomSet::S4 => "S4",
            AxiomSet::Bs4 => "BS4",
            AxiomSet::Grz => "GRZ",
            AxiomSet::Kleene => "KLEENE",
            AxiomSet::KleenePrime => "KLEENE_PRIME",
            AxiomSet::ClosedIdealAxiom => "CLOSED_IDEAL_AXIOM",
        }
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom set `{0}`")]
pub struct UnknownAxiomSet(pub String);

impl FromStr for AxiomSet {
    type Err = UnknownAxiomSet;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        AxiomSet::ALL
            .into_iter()
            .find(|a| a.name() == wanted)
            .ok_or_else(|| UnknownAxiomSet(s.to_string()))
    }
}

const INT: &[&str] = &[
    "p -> (q -> p)",
    "(p -> (q -> r)) -> ((p -> q) -> (p -> r))",
    "(p & q) -> p",
    "(p & q) -> q",
    "p -> (q -> (p & q))",
    "p -> (p | q)",
    "q -> (p | q)",
    "(p -> r) -> ((q -> r) -> ((p | q) -> r))",
    "bot -> p",
];

const SNEG: &[&str] = &[
    "~(p | q) <-> (~p & ~q)",
    "~(p & q) <-> (~p | ~q)",
    "~(p -> q) <-> (p & ~q)",
    "~~p <-> p",
    "~bot",
];

const EXCLUDED_MIDDLE: &str = "p | !p";

const S4MODAL: &[&str] = &["[](p -> p)", "([]p & []q) -> [](p & q)", "[]p -> p", "[]p -> [][]p"];

const BS4INTERPLAY: &[&str] = &["![]p <-> <>!p", "!<>p <-> []!p", "[]p <=> ~<>~p", "<>p <=> ~[]~p"];

const GRZ: &str = "[]([](p -> []p) -> p) -> p";
const KLEENE: &str = "(p & ~p) -> (q | ~q)";
const KLEENE_PRIME: &str = "!!(p & ~p) -> (q | ~q)";
const CLOSED_IDEAL: &str = "!!(p & ~p) <-> (p & ~p)";
const GRZ_DISJUNCTION: &str = "([](p | q) & ([]p | []<>!p) & ([]q | []<>!q)) -> ([]p | []q)";

fn parsed(src: &[&str]) -> Vec<Formula> {
    src.iter()
        .map(|s| parse(s).expect("built-in axiom must parse"))
        .collect()
}

/// The axiom list registered under `name`, with sugar left in place.
pub fn axioms(name: AxiomSet) -> Vec<Formula> {
    match name {
        AxiomSet::Int => parsed(INT),
        AxiomSet::Sneg => parsed(SNEG),
        AxiomSet::S4modal => parsed(S4MODAL),
        AxiomSet::Bs4interplay => parsed(BS4INTERPLAY),
        AxiomSet::N4bot => [parsed(INT), parsed(SNEG)].concat(),
        AxiomSet::S4 => [parsed(INT), parsed(&[EXCLUDED_MIDDLE]), parsed(S4MODAL)].concat(),
        AxiomSet::Bs4 => [axioms(AxiomSet::S4), parsed(SNEG), parsed(BS4INTERPLAY)].concat(),
        AxiomSet::Grz => parsed(&[GRZ]),
        AxiomSet::Kleene => parsed(&[KLEENE]),
        AxiomSet::KleenePrime => parsed(&[KLEENE_PRIME]),
        AxiomSet::ClosedIdealAxiom => parsed(&[CLOSED_IDEAL]),
    }
}

/// `[□(p∨q) ∧ (□p ∨ □◇¬p) ∧ (□q ∨ □◇¬q)] → (□p ∨ □q)`, a Grz theorem.
pub fn grz_disjunction_formula() -> Formula {
    parse(GRZ_DISJUNCTION).expect("built-in formula must parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LanguageTag;

    #[test]
    fn sizes() {
        assert_eq!(axioms(AxiomSet::Int).len(), 9);
        assert_eq!(axioms(AxiomSet::Sneg).len(), 5);
        assert_eq!(axioms(AxiomSet::N4bot).len(), 14);
        assert_eq!(axioms(AxiomSet::S4).len(), 14);
        assert_eq!(axioms(AxiomSet::Bs4).len(), 23);
        assert_eq!(axioms(AxiomSet::Grz).len(), 1);
    }

    #[test]
    fn double_strong_negation_scheme_present() {
        let p = Formula::var("p");
        let target = Formula::iff(Formula::sneg(Formula::sneg(p.clone())), p);
        assert!(axioms(AxiomSet::Sneg).contains(&target));
    }

    #[test]
    fn kleene_is_single_axiom() {
        let p = Formula::var("p");
        let q = Formula::var("q");
        let chi = Formula::imp(
            Formula::and(p.clone(), Formula::sneg(p)),
            Formula::or(q.clone(), Formula::sneg(q)),
        );
        assert_eq!(axioms(AxiomSet::Kleene), vec![chi]);
    }

    #[test]
    fn languages() {
        for f in axioms(AxiomSet::N4bot) {
            assert!(f.language_of().is_sublanguage_of(LanguageTag::Ls));
        }
        for f in axioms(AxiomSet::S4) {
            assert!(f.language_of().is_sublanguage_of(LanguageTag::Lbox));
        }
        assert_eq!(grz_disjunction_formula().language_of(), LanguageTag::Lbox);
    }

    #[test]
    fn names_round_trip() {
        for a in AxiomSet::ALL {
            assert_eq!(a.name().parse::<AxiomSet>().unwrap(), a);
        }
        assert_eq!("kleene-prime".parse::<AxiomSet>().unwrap(), AxiomSet::KleenePrime);
        assert!("FOO".parse::<AxiomSet>().is_err());
    }
}
