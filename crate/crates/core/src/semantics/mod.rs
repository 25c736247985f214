//! Valuations, evaluation and validity over algebras and twist-structures.

mod corpus;
mod engine;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use corpus::{default_twtop_corpus, enumerate_formulas, variable_name};
pub use engine::{CheckConfig, Model, Program, Refutation, CAP_ENV_VAR, DEFAULT_VALUATION_CAP, MAX_TABLE_DOMAIN};

use crate::formula::{axioms, belnap_translate, AxiomSet, Formula, LanguageTag};
use crate::heyting::FiniteHeyting;
use crate::tba::FiniteTba;
use crate::twist::{Base, TwistOp, TwistStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("formula `{formula}` ({language}) cannot be interpreted in a {structure}")]
    LanguageMismatch {
        formula: String,
        language: LanguageTag,
        structure: String,
    },
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("value for `{var}` is not an element of the structure")]
    NotInDomain { var: String },
    #[error("{valuations} valuations exceed the cap of {cap}")]
    ResourceLimit { valuations: u128, cap: u128 },
    #[error("domain of {size} elements exceeds the supported {max}")]
    DomainTooLarge { size: usize, max: usize },
    #[error("formula `{0}` contains strong negation")]
    NotPositive(String),
    #[error("{0}")]
    Precondition(String),
}

/// Any structure formulas can be evaluated in.
#[derive(Debug, Clone, Copy)]
pub enum Structure<'a> {
    Heyting(&'a FiniteHeyting),
    Tba(&'a FiniteTba),
    Twist(&'a TwistStructure),
}

impl<'a> From<&'a FiniteHeyting> for Structure<'a> {
    fn from(h: &'a FiniteHeyting) -> Self {
        Structure::Heyting(h)
    }
}

impl<'a> From<&'a FiniteTba> for Structure<'a> {
    fn from(b: &'a FiniteTba) -> Self {
        Structure::Tba(b)
    }
}

impl<'a> From<&'a TwistStructure> for Structure<'a> {
    fn from(t: &'a TwistStructure) -> Self {
        Structure::Twist(t)
    }
}

impl<'a> From<&'a Base> for Structure<'a> {
    fn from(b: &'a Base) -> Self {
        match b {
            Base::Heyting(h) => Structure::Heyting(h),
            Base::Tba(t) => Structure::Tba(t),
        }
    }
}

/// An element of an algebra, or a pair of a twist-structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Value {
    Elem(usize),
    Pair(usize, usize),
}

pub type Valuation = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub valuation: Valuation,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Validity {
    Valid,
    Refuted(Witness),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Validity::Valid => None,
            Validity::Refuted(w) => Some(w),
        }
    }
}

impl<'a> Structure<'a> {
    pub fn domain_size(&self) -> usize {
        match self {
            Structure::Heyting(h) => h.size(),
            Structure::Tba(b) => b.size(),
            Structure::Twist(t) => t.size(),
        }
    }

    /// The element with the given code: an index, or the carrier position
    /// for twist-structures.
    pub fn value_of(&self, code: usize) -> Value {
        match self {
            Structure::Twist(t) => {
                let (a, b) = t.carrier()[code];
                Value::Pair(a, b)
            }
            _ => Value::Elem(code),
        }
    }

    pub fn code_of(&self, v: Value) -> Option<usize> {
        match (self, v) {
            (Structure::Twist(t), Value::Pair(a, b)) => t.index_of((a, b)),
            (Structure::Twist(_), Value::Elem(_)) => None,
            (_, Value::Elem(a)) => (a < self.domain_size()).then_some(a),
            (_, Value::Pair(..)) => None,
        }
    }

    pub fn is_designated(&self, v: Value) -> bool {
        match (self, v) {
            (Structure::Heyting(h), Value::Elem(a)) => a == h.top(),
            (Structure::Tba(b), Value::Elem(a)) => a == b.algebra().top(),
            (Structure::Twist(t), Value::Pair(a, _)) => a == t.lattice().top(),
            _ => false,
        }
    }

    fn description(&self) -> &'static str {
        match self {
            Structure::Heyting(_) => "Heyting algebra",
            Structure::Tba(_) => "topological Boolean algebra",
            Structure::Twist(t) if t.base().tba().is_some() => "twist-structure over a topological Boolean algebra",
            Structure::Twist(_) => "twist-structure over a Heyting algebra",
        }
    }

    fn has_sneg(&self) -> bool {
        matches!(self, Structure::Twist(_))
    }

    fn has_modal(&self) -> bool {
        match self {
            Structure::Heyting(_) => false,
            Structure::Tba(_) => true,
            Structure::Twist(t) => t.base().tba().is_some(),
        }
    }
}

/// Value of `phi` under `v`, computed by direct recursion on the
/// structure's operations.
pub fn evaluate(s: Structure<'_>, phi: &Formula, v: &Valuation) -> Result<Value, SemanticsError> {
    let f = phi.desugar();
    let mismatch = || SemanticsError::LanguageMismatch {
        formula: phi.to_string(),
        language: phi.language_of(),
        structure: s.description().to_string(),
    };
    let lang = f.language_of();
    if (lang.has_strong_negation() && !s.has_sneg()) || (lang.has_modalities() && !s.has_modal()) {
        return Err(mismatch());
    }
    for (name, val) in v {
        if s.code_of(*val).is_none() {
            return Err(SemanticsError::NotInDomain { var: name.clone() });
        }
    }
    eval_rec(s, &f, v)
}

fn eval_rec(s: Structure<'_>, f: &Formula, v: &Valuation) -> Result<Value, SemanticsError> {
    let rec = |g: &Formula| eval_rec(s, g, v);
    if let Formula::Var(name) = f {
        return v
            .get(name)
            .copied()
            .ok_or_else(|| SemanticsError::Unbound(name.clone()));
    }
    let kids: Vec<Value> = f.children().into_iter().map(rec).collect::<Result<_, _>>()?;
    let elem = |x: &Value| match *x {
        Value::Elem(a) => a,
        Value::Pair(..) => unreachable!(),
    };
    let pair = |x: &Value| match *x {
        Value::Pair(a, b) => (a, b),
        Value::Elem(_) => unreachable!(),
    };
    Ok(match s {
        Structure::Heyting(h) => Value::Elem(match f {
            Formula::Bot => h.bot(),
            Formula::And(..) => h.meet(elem(&kids[0]), elem(&kids[1])),
            Formula::Or(..) => h.join(elem(&kids[0]), elem(&kids[1])),
            Formula::Imp(..) => h.imp(elem(&kids[0]), elem(&kids[1])),
            other => unreachable!("checked language: {other}"),
        }),
        Structure::Tba(b) => {
            let h = b.algebra();
            Value::Elem(match f {
                Formula::Bot => h.bot(),
                Formula::And(..) => h.meet(elem(&kids[0]), elem(&kids[1])),
                Formula::Or(..) => h.join(elem(&kids[0]), elem(&kids[1])),
                Formula::Imp(..) => h.imp(elem(&kids[0]), elem(&kids[1])),
                Formula::Box(_) => b.nec(elem(&kids[0])),
                Formula::Dia(_) => b.poss(elem(&kids[0])),
                other => unreachable!("checked language: {other}"),
            })
        }
        Structure::Twist(t) => {
            let op = match f {
                Formula::Bot => TwistOp::Bot,
                Formula::SNeg(_) => TwistOp::SNot,
                Formula::And(..) => TwistOp::And,
                Formula::Or(..) => TwistOp::Or,
                Formula::Imp(..) => TwistOp::Imp,
                Formula::Box(_) => TwistOp::Nec,
                Formula::Dia(_) => TwistOp::Poss,
                other => unreachable!("checked language: {other}"),
            };
            let args: Vec<(usize, usize)> = kids.iter().map(pair).collect();
            let (a, b) = t
                .op_raw(op, &args)
                .map_err(|e| SemanticsError::Precondition(e.to_string()))?;
            Value::Pair(a, b)
        }
    })
}

/// A structure flattened once for many validity checks.
#[derive(Debug, Clone)]
pub struct Checker<'a> {
    structure: Structure<'a>,
    model: Model,
    cfg: CheckConfig,
}

impl<'a> Checker<'a> {
    pub fn new(s: impl Into<Structure<'a>>, cfg: CheckConfig) -> Result<Checker<'a>, SemanticsError> {
        let structure = s.into();
        Ok(Checker {
            structure,
            model: Model::new(structure)?,
            cfg,
        })
    }

    pub fn structure(&self) -> Structure<'a> {
        self.structure
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn check(&self, phi: &Formula) -> Result<Validity, SemanticsError> {
        self.check_program(&Program::compile(phi))
    }

    pub fn check_program(&self, p: &Program) -> Result<Validity, SemanticsError> {
        Ok(match self.model.refute(p, &self.cfg)? {
            None => Validity::Valid,
            Some((codes, value)) => Validity::Refuted(Witness {
                valuation: p
                    .vars()
                    .iter()
                    .cloned()
                    .zip(codes.iter().map(|&c| self.structure.value_of(c)))
                    .collect(),
                value: self.structure.value_of(value),
            }),
        })
    }

    pub fn holds(&self, p: &Program) -> Result<bool, SemanticsError> {
        Ok(self.model.refute(p, &self.cfg)?.is_none())
    }
}

/// Exhaustive validity over all valuations of the variables of `phi`,
/// with the cap from the environment.
pub fn is_valid<'a>(s: impl Into<Structure<'a>>, phi: &Formula) -> Result<Validity, SemanticsError> {
    is_valid_with(s, phi, &CheckConfig::from_env())
}

pub fn is_valid_with<'a>(
    s: impl Into<Structure<'a>>,
    phi: &Formula,
    cfg: &CheckConfig,
) -> Result<Validity, SemanticsError> {
    Checker::new(s, *cfg)?.check(phi)
}

/// `None` if every axiom of the list is valid, else the first that is not.
pub fn models_axioms<'a>(s: impl Into<Structure<'a>>, name: AxiomSet) -> Result<Option<Formula>, SemanticsError> {
    let c = Checker::new(s, CheckConfig::from_env())?;
    for ax in axioms(name) {
        if !c.check(&ax)?.is_valid() {
            return Ok(Some(ax));
        }
    }
    Ok(None)
}

/// Whether the first projection of the value of a positive formula is the
/// value of the same formula on first projections, for every valuation.
pub fn pi1_commutes(t: &TwistStructure, psi: &Formula) -> Result<bool, SemanticsError> {
    if !psi.is_positive() {
        return Err(SemanticsError::NotPositive(psi.to_string()));
    }
    let p = Program::compile(psi);
    let tm = Model::new(Structure::Twist(t))?;
    let bm = Model::new(Structure::from(t.base()))?;
    let k = p.vars().len();
    let d = t.size();
    let cfg = CheckConfig::from_env();
    let total = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > cfg.cap {
        return Err(SemanticsError::ResourceLimit {
            valuations: total,
            cap: cfg.cap,
        });
    }
    let mut codes = vec![0usize; k];
    for mut idx in 0..total as usize {
        for c in codes.iter_mut().rev() {
            *c = idx % d;
            idx /= d;
        }
        let firsts: Vec<usize> = codes.iter().map(|&c| t.carrier()[c].0).collect();
        let lhs = t.carrier()[tm.eval(&p, &codes)?].0;
        if lhs != bm.eval(&p, &firsts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwTopRow {
    pub formula: String,
    pub open_pairs_valid: bool,
    pub translated_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwTopReport {
    /// The base satisfies Grz.
    pub base_grz: bool,
    /// Open elements coincide with the designated-compatible set.
    pub opens_eq_lambda: bool,
    /// Both hypotheses hold, so the two columns must agree.
    pub asserted: bool,
    pub rows: Vec<TwTopRow>,
    pub mismatches: Vec<String>,
}

/// For each formula: validity in the open-pairs algebra of `t` and
/// validity of its translation in `t`.
pub fn twtop_check(t: &TwistStructure, formulas: &[Formula], cfg: &CheckConfig) -> Result<TwTopReport, SemanticsError> {
    use crate::openpairs;
    let b = t
        .base()
        .tba()
        .ok_or_else(|| SemanticsError::Precondition("base is not a topological Boolean algebra".into()))?;
    let base_grz = b.satisfies_grz().is_ok();
    let opens_eq_lambda = b.open_elements() == openpairs::lambda_set(b, t.nabla());
    let g2 = openpairs::open_pairs_algebra(t).map_err(|e| SemanticsError::Precondition(e.to_string()))?;
    let left = Checker::new(&g2.structure, *cfg)?;
    let right = Checker::new(t, *cfg)?;
    let mut rows = Vec::with_capacity(formulas.len());
    let mut mismatches = Vec::new();
    for phi in formulas {
        let translated = belnap_translate(phi).map_err(|e| SemanticsError::Precondition(e.to_string()))?;
        let row = TwTopRow {
            formula: phi.to_string(),
            open_pairs_valid: left.check(phi)?.is_valid(),
            translated_valid: right.check(&translated)?.is_valid(),
        };
        if row.open_pairs_valid != row.translated_valid {
            mismatches.push(row.formula.clone());
        }
        rows.push(row);
    }
    Ok(TwTopReport {
        base_grz,
        opens_eq_lambda,
        asserted: base_grz && opens_eq_lambda,
        rows,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::ElemSet;
    use crate::formula::parse;
    use crate::order::{heyting_from_poset, FinitePoset};
    use crate::tba::powerset_tba;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    fn kleene_twist() -> TwistStructure {
        let three = heyting_from_poset(&FinitePoset::chain(2)).0;
        TwistStructure::new(three.into(), set(&[1, 2]), set(&[0, 1])).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn modified_kleene_value_at_the_known_valuation() {
        let t = kleene_twist();
        let v: Valuation = [
            ("p".to_string(), Value::Pair(1, 2)),
            ("q".to_string(), Value::Pair(1, 0)),
        ]
        .into_iter()
        .collect();
        let val = evaluate((&t).into(), &f("!!(p & ~p) -> (q | ~q)"), &v).unwrap();
        assert_eq!(val, Value::Pair(1, 0));
        let pv: Valuation = [("p".to_string(), Value::Pair(2, 1))].into_iter().collect();
        assert_eq!(evaluate((&t).into(), &f("~~p"), &pv).unwrap(), Value::Pair(2, 1));
    }

    #[test]
    fn kleene_validity() {
        let t = kleene_twist();
        assert!(is_valid(&t, &f("(p & ~p) -> (q | ~q)")).unwrap().is_valid());
        let r = is_valid(&t, &f("!!(p & ~p) -> (q | ~q)")).unwrap();
        let w = r.witness().unwrap();
        assert_eq!(w.valuation["p"], Value::Pair(1, 1));
        assert_eq!(w.valuation["q"], Value::Pair(0, 1));
        let json = serde_json::to_string(w).unwrap();
        assert_eq!(json, r#"{"valuation":{"p":[1,1],"q":[0,1]},"value":[1,0]}"#);
    }

    #[test]
    fn heyting_validity_and_language_errors() {
        let three = heyting_from_poset(&FinitePoset::chain(2)).0;
        assert!(is_valid(&three, &f("bot -> p")).unwrap().is_valid());
        let r = is_valid(&three, &f("p | !p")).unwrap();
        assert_eq!(r.witness().unwrap().valuation["p"], Value::Elem(1));
        assert!(matches!(
            is_valid(&three, &f("[]p")),
            Err(SemanticsError::LanguageMismatch { .. })
        ));
        assert!(matches!(
            is_valid(&three, &f("~p")),
            Err(SemanticsError::LanguageMismatch { .. })
        ));
        assert!(matches!(
            evaluate((&three).into(), &f("p"), &Valuation::new()),
            Err(SemanticsError::Unbound(_))
        ));
    }

    #[test]
    fn resource_cap_is_enforced() {
        let t = kleene_twist();
        let cfg = CheckConfig {
            cap: 48,
            parallel: false,
        };
        assert_eq!(
            is_valid_with(&t, &f("p -> q"), &cfg),
            Err(SemanticsError::ResourceLimit {
                valuations: 49,
                cap: 48
            })
        );
    }

    #[test]
    fn parallel_search_finds_the_same_witness() {
        let (b, _) = powerset_tba(&FinitePoset::chain(3));
        let t = TwistStructure::full(b.into());
        let phi = f("([]p -> q) | ([]q -> ~p)");
        let serial = is_valid_with(&t, &phi, &CheckConfig::default()).unwrap();
        let parallel = is_valid_with(&t, &phi, &CheckConfig::default().parallel(true)).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn axiom_lists_on_small_structures() {
        let t = kleene_twist();
        assert_eq!(models_axioms(&t, AxiomSet::N4bot).unwrap(), None);
        assert_eq!(models_axioms(&t, AxiomSet::Kleene).unwrap(), None);
        assert!(models_axioms(&t, AxiomSet::KleenePrime).unwrap().is_some());
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        let tb = TwistStructure::full(b.into());
        assert_eq!(models_axioms(&tb, AxiomSet::Bs4).unwrap(), None);
    }

    #[test]
    fn first_projection_commutes_with_positive_formulas() {
        let t = kleene_twist();
        assert!(pi1_commutes(&t, &f("p -> q")).unwrap());
        assert!(pi1_commutes(&t, &f("p")).unwrap());
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        let tb = TwistStructure::full(b.into());
        assert!(pi1_commutes(&tb, &f("[]p")).unwrap());
        assert!(pi1_commutes(&t, &f("~p")).is_err());
    }
}
