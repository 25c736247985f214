//! Embeddings of the propositional languages into their modal counterparts.

use thiserror::Error;

use super::{Formula, LanguageTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula `{formula}` is in {found}, expected {expected}")]
    WrongLanguage {
        formula: String,
        found: LanguageTag,
        expected: LanguageTag,
    },
}

fn require(phi: &Formula, expected: LanguageTag) -> Result<Formula, TranslateError> {
    let found = phi.language_of();
    if !found.is_sublanguage_of(expected) {
        return Err(TranslateError::WrongLanguage {
            formula: phi.to_string(),
            found,
            expected,
        });
    }
    Ok(phi.desugar())
}

/// Intuitionistic-to-S4 translation: box every atom and every implication.
pub fn godel_tarski(phi: &Formula) -> Result<Formula, TranslateError> {
    if phi.language_of() != LanguageTag::Li {
        return Err(TranslateError::WrongLanguage {
            formula: phi.to_string(),
            found: phi.language_of(),
            expected: LanguageTag::Li,
        });
    }
    Ok(gt(&phi.desugar()))
}

fn gt(phi: &Formula) -> Formula {
    match phi {
        Formula::Var(_) => Formula::nec(phi.clone()),
        Formula::Bot => Formula::Bot,
        Formula::And(a, b) => Formula::and(gt(a), gt(b)),
        Formula::Or(a, b) => Formula::or(gt(a), gt(b)),
        Formula::Imp(a, b) => Formula::nec(Formula::imp(gt(a), gt(b))),
        other => unreachable!("not a desugared Li formula: {other}"),
    }
}

/// Extension of [`godel_tarski`] to formulas with strong negation.
///
/// Strong negation is pushed down to atoms; `~~φ` translates as `φ`.
pub fn belnap_translate(phi: &Formula) -> Result<Formula, TranslateError> {
    let phi = require(phi, LanguageTag::Ls)?;
    Ok(tb(&phi))
}

fn tb(phi: &Formula) -> Formula {
    match phi {
        Formula::Var(_) => Formula::nec(phi.clone()),
        Formula::Bot => Formula::Bot,
        Formula::And(a, b) => Formula::and(tb(a), tb(b)),
        Formula::Or(a, b) => Formula::or(tb(a), tb(b)),
        Formula::Imp(a, b) => Formula::nec(Formula::imp(tb(a), tb(b))),
        Formula::SNeg(inner) => tb_neg(inner),
        other => unreachable!("not a desugared Ls formula: {other}"),
    }
}

// Translation of `~inner`.
fn tb_neg(inner: &Formula) -> Formula {
    let neg = |f: &Formula| Formula::sneg(f.clone());
    match inner {
        Formula::Var(_) => Formula::nec(neg(inner)),
        Formula::Bot => neg(inner),
        Formula::And(a, b) => Formula::or(tb_neg(a), tb_neg(b)),
        Formula::Or(a, b) => Formula::and(tb_neg(a), tb_neg(b)),
        Formula::Imp(a, b) => Formula::and(tb(a), tb_neg(b)),
        Formula::SNeg(a) => tb(a),
        other => unreachable!("not a desugared Ls formula: {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn godel_tarski_clauses() {
        assert_eq!(godel_tarski(&p("p")).unwrap(), p("[]p"));
        assert_eq!(godel_tarski(&p("bot")).unwrap(), Formula::Bot);
        assert_eq!(godel_tarski(&p("p -> q")).unwrap(), p("[]([]p -> []q)"));
        assert_eq!(godel_tarski(&p("!p")).unwrap(), p("[]([]p -> bot)"),);
    }

    #[test]
    fn godel_tarski_rejects_other_languages() {
        assert!(godel_tarski(&p("~p")).is_err());
        assert!(godel_tarski(&p("[]p")).is_err());
    }

    #[test]
    fn belnap_clauses() {
        assert_eq!(belnap_translate(&p("~(p -> q)")).unwrap(), p("[]p & []~q"));
        assert_eq!(belnap_translate(&p("~~p")).unwrap(), p("[]p"));
        assert_eq!(belnap_translate(&p("~bot")).unwrap(), p("~bot"));
        assert_eq!(
            belnap_translate(&p("~(p & q) -> ~(p | q)")).unwrap(),
            p("[](([]~p | []~q) -> ([]~p & []~q))")
        );
    }

    #[test]
    fn belnap_kleene_axiom() {
        let t = belnap_translate(&p("(p & ~p) -> (q | ~q)")).unwrap();
        assert_eq!(t, p("[](([]p & []~p) -> ([]q | []~q))"));
        assert_eq!(t.to_string(), "[]((([]p) & ([]~p)) -> (([]q) | ([]~q)))");
        assert!(t.is_tb_normal());
    }

    #[test]
    fn belnap_rejects_modal_input() {
        assert!(belnap_translate(&p("[]p")).is_err());
        assert!(belnap_translate(&p("<>~p")).is_err());
    }
}
