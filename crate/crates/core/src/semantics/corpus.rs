//! Deterministic formula corpora for exhaustive checks.

use std::collections::HashSet;

use crate::formula::{axioms, AxiomSet, Formula, LanguageTag};

const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// The `i`-th corpus variable: `p`, `q`, `r`, ... then `x8`, `x9`, ...
pub fn variable_name(i: usize) -> String {
    NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}"))
}

/// All formulas of the language up to the given depth, truncated at
/// `budget`.
///
/// Depth 0 lists the variables then `bot`. Depth `d` lists the unary
/// connectives applied to depth `d-1` formulas, then for every ordered pair
/// whose deeper member has depth `d-1`: conjunction, disjunction,
/// implication.
pub fn enumerate_formulas(lang: LanguageTag, depth: usize, vars: usize, budget: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = Vec::new();
    let mut depth_of: Vec<usize> = Vec::new();
    let push = |f: Formula, d: usize, all: &mut Vec<Formula>, depth_of: &mut Vec<usize>| {
        if all.len() < budget {
            all.push(f);
            depth_of.push(d);
        }
        all.len() < budget
    };
    for i in 0..vars {
        if !push(Formula::var(&variable_name(i)), 0, &mut all, &mut depth_of) {
            return all;
        }
    }
    if !push(Formula::Bot, 0, &mut all, &mut depth_of) {
        return all;
    }
    let mut unary: Vec<fn(Formula) -> Formula> = Vec::new();
    if lang.has_strong_negation() {
        unary.push(Formula::sneg);
    }
    if lang.has_modalities() {
        unary.push(Formula::nec);
        unary.push(Formula::poss);
    }
    let binary: [fn(Formula, Formula) -> Formula; 3] = [Formula::and, Formula::or, Formula::imp];
    for d in 1..=depth {
        let prev = all.len();
        let last_level: Vec<usize> = (0..prev).filter(|&i| depth_of[i] == d - 1).collect();
        for op in &unary {
            for &i in &last_level {
                if !push(op(all[i].clone()), d, &mut all, &mut depth_of) {
                    return all;
                }
            }
        }
        for x in 0..prev {
            for y in 0..prev {
                if depth_of[x].max(depth_of[y]) != d - 1 {
                    continue;
                }
                for op in binary {
                    let f = op(all[x].clone(), all[y].clone());
                    if !push(f, d, &mut all, &mut depth_of) {
                        return all;
                    }
                }
            }
        }
    }
    all
}

/// The N4 axioms, the two Kleene axioms and the closed-ideal axiom, then
/// the depth-2 two-variable strong-negation corpus, without repeats.
pub fn default_twtop_corpus() -> Vec<Formula> {
    let mut out = axioms(AxiomSet::N4bot);
    out.extend(axioms(AxiomSet::Kleene));
    out.extend(axioms(AxiomSet::KleenePrime));
    out.extend(axioms(AxiomSet::ClosedIdealAxiom));
    out.extend(enumerate_formulas(LanguageTag::Ls, 2, 2, 2000));
    let mut seen = HashSet::new();
    out.retain(|f| seen.insert(f.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn depth_one_single_variable() {
        let li = enumerate_formulas(LanguageTag::Li, 1, 1, 1000);
        for s in ["p", "bot", "p & p", "p | p", "p -> p"] {
            assert!(li.contains(&parse(s).unwrap()), "{s}");
        }
        assert_eq!(li.len(), 2 + 4 * 3);
        let ls = enumerate_formulas(LanguageTag::Ls, 1, 1, 1000);
        assert!(ls.contains(&parse("~p").unwrap()));
        assert!(!li.contains(&parse("~p").unwrap()));
    }

    #[test]
    fn budget_and_determinism() {
        let a = enumerate_formulas(LanguageTag::Ls, 2, 2, 2000);
        assert_eq!(a.len(), 2000);
        assert_eq!(a, enumerate_formulas(LanguageTag::Ls, 2, 2, 2000));
        let distinct: HashSet<_> = a.iter().collect();
        assert_eq!(distinct.len(), a.len());
        assert!(a.iter().all(|f| f.depth() <= 2));
    }

    #[test]
    fn default_corpus_starts_with_axioms() {
        let c = default_twtop_corpus();
        assert_eq!(c[..14], axioms(AxiomSet::N4bot)[..]);
        assert!(c.len() > 2000);
    }
}
