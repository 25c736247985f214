//! Companion witnesses: lifting a twist-structure over a Heyting algebra to
//! one over a topological Boolean algebra, and the checks around the
//! Kleene axiom that show where lifting breaks down.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::ElemSet;
use crate::formula::{axioms, belnap_translate, AxiomSet, Formula, TranslateError};
use crate::heyting::FiniteHeyting;
use crate::openpairs::{lambda_set, open_pairs_algebra, OpenPairs, OpenPairsError};
use crate::order::{enumerate_posets, heyting_from_poset, FinitePoset};
use crate::semantics::{
    evaluate, twtop_check, CheckConfig, Checker, Program, SemanticsError, TwTopReport, Validity, Valuation, Value,
};
use crate::tba::{powerset_tba, s_of, OpenGenerated, RoleError};
use crate::twist::{TwistError, TwistStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompanionError {
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Role(#[from] RoleError),
    #[error(transparent)]
    OpenPairs(#[from] OpenPairsError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("lifted algebra fails Grz at element {0}")]
    NotGrz(usize),
    #[error("open elements {opens:?} differ from the compatible opens {lambda:?}")]
    OpensNeLambda { opens: ElemSet, lambda: ElemSet },
    #[error("open pairs {got:?} differ from the expected carrier {expected:?}")]
    CarrierMismatch {
        got: Vec<(usize, usize)>,
        expected: Vec<(usize, usize)>,
    },
    #[error("{0} is not built from Li and excluded-middle blocks on fresh variables")]
    NotSharp(String),
    #[error("{check} disagrees: {detail}")]
    Disagreement { check: &'static str, detail: String },
}

/// Formulas compiled together with their translations, for reuse across
/// many structures.
#[derive(Debug, Clone)]
pub struct CompiledCorpus {
    pub formulas: Vec<Formula>,
    pub plain: Vec<Program>,
    pub translated: Vec<Program>,
}

impl CompiledCorpus {
    pub fn new(formulas: Vec<Formula>) -> Result<CompiledCorpus, CompanionError> {
        let translated = formulas
            .iter()
            .map(|f| belnap_translate(f).map(|g| Program::compile(&g)))
            .collect::<Result<Vec<_>, _>>()?;
        let plain = formulas.iter().map(Program::compile).collect();
        Ok(CompiledCorpus {
            formulas,
            plain,
            translated,
        })
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

/// A twist-structure over `A`, its lift over `B = s(A)`, and the
/// structure over `A` that the lift's open pairs reproduce.
#[derive(Debug, Clone)]
pub struct CompanionInstance {
    /// `Tw(A, nabla, delta)`.
    pub source: TwistStructure,
    /// `B` with the embedding of `A` onto its open elements.
    pub lifted: OpenGenerated,
    pub nabla_hat: ElemSet,
    pub delta_hat: ElemSet,
    /// `Tw(B, nabla_hat, delta_hat)`.
    pub companion: TwistStructure,
    /// Closure of `delta` under double negation.
    pub closure: ElemSet,
    /// `Tw(A, nabla, closure)`.
    pub target: TwistStructure,
    pub open_pairs: OpenPairs,
    /// Element of `A` for each base element of the open pairs.
    pub to_source: Vec<usize>,
}

pub fn companion_structure(
    a: impl Into<Arc<FiniteHeyting>>,
    nabla: ElemSet,
    delta: ElemSet,
) -> Result<CompanionInstance, CompanionError> {
    let a: Arc<FiniteHeyting> = a.into();
    let source = TwistStructure::new(a.clone().into(), nabla, delta)?;
    let lifted = s_of(&a);
    let b = Arc::new(lifted.tba.clone());
    let nabla_hat = b.rho_map(lifted.lift(nabla))?;
    let delta_hat = b.sigma_map(lifted.lift(delta))?;
    let companion = TwistStructure::new(b.clone().into(), nabla_hat, delta_hat)?;
    b.satisfies_grz().map_err(CompanionError::NotGrz)?;
    let opens = b.open_elements();
    let lambda = lambda_set(&b, nabla_hat);
    if opens != lambda {
        return Err(CompanionError::OpensNeLambda { opens, lambda });
    }
    let closure = a.closure_n(delta).expect("delta was checked to be an ideal");
    let target = TwistStructure::new(a.clone().into(), nabla, closure)?;
    let open_pairs = open_pairs_algebra(&companion)?;
    let to_source: Vec<usize> = open_pairs
        .embedding
        .iter()
        .map(|&e| {
            lifted
                .iota
                .iter()
                .position(|&i| i == e)
                .expect("open elements are images")
        })
        .collect();
    let mut got: Vec<(usize, usize)> = open_pairs
        .structure
        .carrier()
        .iter()
        .map(|&(x, y)| (to_source[x], to_source[y]))
        .collect();
    got.sort_unstable();
    if got != target.carrier() {
        return Err(CompanionError::CarrierMismatch {
            got,
            expected: target.carrier().to_vec(),
        });
    }
    Ok(CompanionInstance {
        source,
        lifted,
        nabla_hat,
        delta_hat,
        companion,
        closure,
        target,
        open_pairs,
        to_source,
    })
}

/// Per-formula comparison of `φ` on the target with its translation on the
/// companion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceRow {
    pub formula: String,
    pub target_valid: bool,
    pub companion_valid: bool,
}

impl CompanionInstance {
    /// `(element of A, element of B)` pairs of the embedding.
    pub fn iso_table(&self) -> Vec<(usize, usize)> {
        self.lifted.iota.iter().copied().enumerate().collect()
    }

    pub fn correspondence(
        &self,
        corpus: &CompiledCorpus,
        cfg: &CheckConfig,
    ) -> Result<Vec<CorrespondenceRow>, CompanionError> {
        let left = Checker::new(&self.target, *cfg)?;
        let right = Checker::new(&self.companion, *cfg)?;
        let mut rows = Vec::with_capacity(corpus.len());
        for i in 0..corpus.len() {
            rows.push(CorrespondenceRow {
                formula: corpus.formulas[i].to_string(),
                target_valid: left.holds(&corpus.plain[i])?,
                companion_valid: right.holds(&corpus.translated[i])?,
            });
        }
        Ok(rows)
    }

    /// Indices of corpus formulas where the two sides disagree.
    pub fn correspondence_mismatches(
        &self,
        corpus: &CompiledCorpus,
        cfg: &CheckConfig,
    ) -> Result<Vec<usize>, CompanionError> {
        let left = Checker::new(&self.target, *cfg)?;
        let right = Checker::new(&self.companion, *cfg)?;
        let mut out = Vec::new();
        for i in 0..corpus.len() {
            if left.holds(&corpus.plain[i])? != right.holds(&corpus.translated[i])? {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn report(&self, formulas: &[Formula], cfg: &CheckConfig) -> Result<CompanionReport, CompanionError> {
        let corpus = CompiledCorpus::new(formulas.to_vec())?;
        let rows = self.correspondence(&corpus, cfg)?;
        let mismatches = rows
            .iter()
            .filter(|r| r.target_valid != r.companion_valid)
            .map(|r| r.formula.clone())
            .collect();
        let a = self.source.lattice();
        Ok(CompanionReport {
            source_size: a.size(),
            lifted_size: self.lifted.tba.size(),
            nabla: self.source.nabla(),
            delta: self.source.delta(),
            closure: self.closure,
            delta_closed: self.closure == self.source.delta(),
            nabla_hat: self.nabla_hat,
            delta_hat: self.delta_hat,
            iso: self.iso_table(),
            companion_size: self.companion.size(),
            target_size: self.target.size(),
            twtop: twtop_check(&self.companion, formulas, cfg)?,
            rows,
            mismatches,
        })
    }
}

/// Serializable summary; subsets of `A` use `A`'s indices, subsets of `B`
/// use `B`'s.
#[derive(Debug, Clone, Serialize)]
pub struct CompanionReport {
    pub source_size: usize,
    pub lifted_size: usize,
    pub nabla: ElemSet,
    pub delta: ElemSet,
    pub closure: ElemSet,
    pub delta_closed: bool,
    pub nabla_hat: ElemSet,
    pub delta_hat: ElemSet,
    pub iso: Vec<(usize, usize)>,
    pub companion_size: usize,
    pub target_size: usize,
    pub twtop: TwTopReport,
    pub rows: Vec<CorrespondenceRow>,
    pub mismatches: Vec<String>,
}

/// `φ = ψ(p.., q1 | ~q1, ..)` with `ψ` free of strong negation and the
/// `p`s and `q`s disjoint; `skeleton` is `ψ` with each block replaced by
/// its variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpForm {
    pub skeleton: Formula,
    pub p_vars: BTreeSet<String>,
    pub q_vars: BTreeSet<String>,
}

pub fn is_form_sharp(phi: &Formula) -> Option<SharpForm> {
    fn block(f: &Formula) -> Option<&str> {
        if let Formula::Or(a, b) = f {
            match (a.as_ref(), b.as_ref()) {
                (Formula::Var(x), Formula::SNeg(y)) | (Formula::SNeg(y), Formula::Var(x)) => {
                    if let Formula::Var(y) = y.as_ref() {
                        if x == y {
                            return Some(x);
                        }
                    }
                    None
                }
                _ => None,
            }
        } else {
            None
        }
    }

    fn walk(f: &Formula, ps: &mut BTreeSet<String>, qs: &mut BTreeSet<String>) -> Option<Formula> {
        if let Some(q) = block(f) {
            qs.insert(q.to_string());
            return Some(Formula::var(q));
        }
        let mut w = |g: &Formula| walk(g, ps, qs);
        Some(match f {
            Formula::Var(x) => {
                ps.insert(x.clone());
                f.clone()
            }
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(w(a)?, w(b)?),
            Formula::Or(a, b) => Formula::or(w(a)?, w(b)?),
            Formula::Imp(a, b) => Formula::imp(w(a)?, w(b)?),
            Formula::Iff(a, b) => Formula::iff(w(a)?, w(b)?),
            Formula::Neg(a) => Formula::neg(w(a)?),
            Formula::SNeg(_) | Formula::SIff(..) | Formula::Box(_) | Formula::Dia(_) => return None,
        })
    }

    let mut p_vars = BTreeSet::new();
    let mut q_vars = BTreeSet::new();
    let skeleton = walk(phi, &mut p_vars, &mut q_vars)?;
    p_vars.is_disjoint(&q_vars).then_some(SharpForm {
        skeleton,
        p_vars,
        q_vars,
    })
}

/// Validity of a restricted-form formula with two different ideals; an
/// error if the results differ.
pub fn delta_independence_check(
    a: impl Into<Arc<FiniteHeyting>>,
    nabla: ElemSet,
    delta1: ElemSet,
    delta2: ElemSet,
    phi: &Formula,
    cfg: &CheckConfig,
) -> Result<bool, CompanionError> {
    if is_form_sharp(phi).is_none() {
        return Err(CompanionError::NotSharp(phi.to_string()));
    }
    let a: Arc<FiniteHeyting> = a.into();
    let t1 = TwistStructure::new(a.clone().into(), nabla, delta1)?;
    let t2 = TwistStructure::new(a.into(), nabla, delta2)?;
    let p = Program::compile(phi);
    let v1 = Checker::new(&t1, *cfg)?.holds(&p)?;
    let v2 = Checker::new(&t2, *cfg)?.holds(&p)?;
    if v1 != v2 {
        return Err(CompanionError::Disagreement {
            check: "ideal independence",
            detail: format!("{phi} with {delta1:?} gives {v1}, with {delta2:?} gives {v2}"),
        });
    }
    Ok(v1)
}

fn kleene() -> Formula {
    axioms(AxiomSet::Kleene).remove(0)
}

fn kleene_prime() -> Formula {
    axioms(AxiomSet::KleenePrime).remove(0)
}

/// Every element of `delta` lies below every element of `nabla`.
pub fn kleene_order_condition(t: &TwistStructure) -> bool {
    let h = t.lattice();
    t.delta().iter().all(|a| t.nabla().iter().all(|b| h.leq(a, b)))
}

/// Validity of the Kleene axiom, cross-checked against the order condition.
pub fn kleene_characterization(t: &TwistStructure, cfg: &CheckConfig) -> Result<bool, CompanionError> {
    let valid = Checker::new(t, *cfg)?.check(&kleene())?.is_valid();
    let order = kleene_order_condition(t);
    if valid != order {
        return Err(CompanionError::Disagreement {
            check: "Kleene characterization",
            detail: format!("validity {valid}, order condition {order}"),
        });
    }
    Ok(valid)
}

/// Validity of `!!(p & ~p) <-> (p & ~p)`.
pub fn closed_ideal_axiom_check(t: &TwistStructure, cfg: &CheckConfig) -> Result<bool, CompanionError> {
    let ax = axioms(AxiomSet::ClosedIdealAxiom).remove(0);
    Ok(Checker::new(t, *cfg)?.check(&ax)?.is_valid())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanInstance {
    pub frame: FinitePoset,
    pub nabla: ElemSet,
    pub delta: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleeneScan {
    pub max_poset: usize,
    pub posets: usize,
    pub instances: usize,
    /// Instances validating the translated Kleene axiom.
    pub kleene_valid: usize,
    /// Instances validating the translated modified axiom.
    pub kleene_prime_valid: usize,
    /// Instances validating the first but not the second.
    pub violations: Vec<ScanInstance>,
}

/// Over powerset algebras of all posets up to `max_poset` points and all
/// open filter / closed ideal pairs: does the translated Kleene axiom imply
/// the translated modified one?
pub fn kleene_box_implication_scan(max_poset: usize, cfg: &CheckConfig) -> Result<KleeneScan, CompanionError> {
    let chi = Program::compile(&belnap_translate(&kleene())?);
    let chi_prime = Program::compile(&belnap_translate(&kleene_prime())?);
    let frames = enumerate_posets(max_poset);
    let inner = CheckConfig {
        parallel: false,
        ..*cfg
    };
    let per_frame = |p: &FinitePoset| -> Result<(usize, usize, usize, Vec<ScanInstance>), CompanionError> {
        let b = Arc::new(powerset_tba(p).0);
        let (mut n, mut kv, mut kpv, mut bad) = (0, 0, 0, Vec::new());
        for nabla in b.open_filters() {
            for delta in b.closed_ideals() {
                let t = TwistStructure::new(b.clone().into(), nabla, delta)?;
                let c = Checker::new(&t, inner)?;
                let k = c.holds(&chi)?;
                let kp = c.holds(&chi_prime)?;
                n += 1;
                kv += k as usize;
                kpv += kp as usize;
                if k && !kp {
                    bad.push(ScanInstance {
                        frame: p.clone(),
                        nabla,
                        delta,
                    });
                }
            }
        }
        Ok((n, kv, kpv, bad))
    };
    let results: Vec<_> = if cfg.parallel {
        frames.par_iter().map(per_frame).collect()
    } else {
        frames.iter().map(per_frame).collect()
    };
    let mut scan = KleeneScan {
        max_poset,
        posets: frames.len(),
        instances: 0,
        kleene_valid: 0,
        kleene_prime_valid: 0,
        violations: Vec::new(),
    };
    for r in results {
        let (n, kv, kpv, bad) = r?;
        scan.instances += n;
        scan.kleene_valid += kv;
        scan.kleene_prime_valid += kpv;
        scan.violations.extend(bad);
    }
    Ok(scan)
}

/// Validities of the two axioms and their translations along the lifting
/// of the three-element example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineSummary {
    pub closure: ElemSet,
    pub companion_kleene_valid: bool,
    pub companion_kleene_prime_valid: bool,
    pub open_pairs_kleene_valid: bool,
    pub open_pairs_kleene_prime_valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KleeneDemo {
    pub labels: Vec<String>,
    pub kleene: Validity,
    pub kleene_prime: Validity,
    pub fixed_valuation: Valuation,
    pub fixed_value: Value,
    pub scan: KleeneScan,
    pub pipeline: PipelineSummary,
    pub transcript: Vec<String>,
}

/// The three-element chain with labels `⊥ < ♥ < 1`.
pub fn three_chain() -> FiniteHeyting {
    heyting_from_poset(&FinitePoset::chain(2))
        .0
        .with_labels(vec!["⊥".into(), "♥".into(), "1".into()])
}

fn show(h: &FiniteHeyting, v: Value) -> String {
    match v {
        Value::Elem(a) => h.label(a),
        Value::Pair(a, b) => format!("({}, {})", h.label(a), h.label(b)),
    }
}

fn show_valuation(h: &FiniteHeyting, v: &Valuation) -> String {
    v.iter()
        .map(|(k, x)| format!("{k} = {}", show(h, *x)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn show_set(h: &FiniteHeyting, s: ElemSet) -> String {
    let items: Vec<String> = s.iter().map(|a| h.label(a)).collect();
    format!("{{{}}}", items.join(", "))
}

/// Runs the finite part of the no-companion argument for the Kleene
/// axiom on the three-element chain.
pub fn kleene_demo(cfg: &CheckConfig) -> Result<KleeneDemo, CompanionError> {
    let a = Arc::new(three_chain());
    let nabla: ElemSet = [1, 2].into_iter().collect();
    let delta: ElemSet = [0, 1].into_iter().collect();
    let t = TwistStructure::new(a.clone().into(), nabla, delta)?;
    let checker = Checker::new(&t, *cfg)?;
    let chi = kleene();
    let chi_prime = kleene_prime();
    let kleene_v = checker.check(&chi)?;
    let kleene_prime_v = checker.check(&chi_prime)?;
    let fixed_valuation: Valuation = [
        ("p".to_string(), Value::Pair(1, 2)),
        ("q".to_string(), Value::Pair(1, 0)),
    ]
    .into_iter()
    .collect();
    let fixed_value = evaluate((&t).into(), &chi_prime, &fixed_valuation)?;
    let scan = kleene_box_implication_scan(2, cfg)?;

    let inst = companion_structure(a.clone(), nabla, delta)?;
    let tb_chi = belnap_translate(&chi)?;
    let tb_chi_prime = belnap_translate(&chi_prime)?;
    let comp = Checker::new(&inst.companion, *cfg)?;
    let op = Checker::new(&inst.open_pairs.structure, *cfg)?;
    let pipeline = PipelineSummary {
        closure: inst.closure,
        companion_kleene_valid: comp.check(&tb_chi)?.is_valid(),
        companion_kleene_prime_valid: comp.check(&tb_chi_prime)?.is_valid(),
        open_pairs_kleene_valid: op.check(&chi)?.is_valid(),
        open_pairs_kleene_prime_valid: op.check(&chi_prime)?.is_valid(),
    };

    let verdict = |v: &Validity| if v.is_valid() { "valid" } else { "refuted" };
    let yes = |b: bool| if b { "valid" } else { "refuted" };
    let h = a.as_ref();
    let first = match fixed_value {
        Value::Pair(x, _) => h.label(x),
        Value::Elem(x) => h.label(x),
    };
    let mut transcript = vec![
        format!(
            "[finite] T = Tw(3, {}, {}) has {} elements",
            show_set(h, nabla),
            show_set(h, delta),
            t.size()
        ),
        format!("[finite] {chi}: {}", verdict(&kleene_v)),
        format!("[finite] {chi_prime}: {}", verdict(&kleene_prime_v)),
    ];
    if let Some(w) = kleene_prime_v.witness() {
        transcript.push(format!(
            "[finite]   least refuting valuation {} gives {}",
            show_valuation(h, &w.valuation),
            show(h, w.value)
        ));
    }
    transcript.push(format!(
        "[finite]   at {} the value is {}, first component {first}, not 1",
        show_valuation(h, &fixed_valuation),
        show(h, fixed_value)
    ));
    transcript.push(format!(
        "[finite] translated Kleene axiom implies translated modified axiom on all {} instances over posets with at most 2 points: {} violations",
        scan.instances,
        scan.violations.len()
    ));
    transcript.push(format!(
        "[finite] lifting T: ideal closure {} ; companion {} on translated Kleene, {} on translated modified; open pairs {} on Kleene, {} on modified",
        show_set(h, inst.closure),
        yes(pipeline.companion_kleene_valid),
        yes(pipeline.companion_kleene_prime_valid),
        yes(pipeline.open_pairs_kleene_valid),
        yes(pipeline.open_pairs_kleene_prime_valid)
    ));
    transcript.push(
        "[logic] if the Kleene logic had a modal companion, that companion would contain the translated modified axiom, so the Kleene logic would prove the modified axiom".into(),
    );
    transcript
        .push("[logic] T validates the Kleene axiom and refutes the modified one, so no such companion exists".into());
    transcript.push("[logic] the two steps above are argued, not computed".into());

    Ok(KleeneDemo {
        labels: h.labels().map(|l| l.to_vec()).unwrap_or_default(),
        kleene: kleene_v,
        kleene_prime: kleene_prime_v,
        fixed_valuation,
        fixed_value,
        scan,
        pipeline,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn sorted_carrier(inst: &CompanionInstance) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = inst
            .open_pairs
            .structure
            .carrier()
            .iter()
            .map(|&(x, y)| (inst.to_source[x], inst.to_source[y]))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn three_chain_instances() {
        let a = three_chain();
        let inst = companion_structure(a.clone(), set(&[1, 2]), set(&[0, 1])).unwrap();
        assert_eq!(inst.lifted.tba.size(), 4);
        assert_eq!(inst.closure, set(&[0, 1, 2]));
        let expected = TwistStructure::new(a.clone().into(), set(&[1, 2]), set(&[0, 1, 2])).unwrap();
        assert_eq!(sorted_carrier(&inst), expected.carrier());

        let inst = companion_structure(a.clone(), set(&[1, 2]), set(&[0])).unwrap();
        assert_eq!(inst.closure, set(&[0]));
        let expected = TwistStructure::new(a.into(), set(&[1, 2]), set(&[0])).unwrap();
        assert_eq!(sorted_carrier(&inst), expected.carrier());
    }

    #[test]
    fn boolean_source_lifts_to_itself() {
        let two = heyting_from_poset(&FinitePoset::chain(1)).0;
        let inst = companion_structure(two.clone(), set(&[1]), set(&[0])).unwrap();
        let b = &inst.lifted.tba;
        assert_eq!(b.size(), 2);
        assert!((0..2).all(|x| b.nec(x) == x));
        assert_eq!(inst.companion.size(), inst.source.size());
        assert_eq!(inst.target.carrier(), inst.source.carrier());
    }

    #[test]
    fn bad_inputs_are_named() {
        let a = three_chain();
        assert!(matches!(
            companion_structure(a.clone(), set(&[2]), set(&[0])),
            Err(CompanionError::Twist(TwistError::NablaMissesDense { .. }))
        ));
        assert!(matches!(
            companion_structure(a, set(&[1, 2]), set(&[1])),
            Err(CompanionError::Twist(TwistError::DeltaNotIdeal(_)))
        ));
    }

    #[test]
    fn restricted_form_matcher() {
        let m = is_form_sharp(&f("q | ~q")).unwrap();
        assert_eq!(m.skeleton, f("q"));
        assert!(m.p_vars.is_empty());
        assert_eq!(m.q_vars.len(), 1);
        assert_eq!(is_form_sharp(&f("(p & ~p) -> (q | ~q)")), None);
        assert_eq!(is_form_sharp(&f("!!(q | ~q)")).unwrap().skeleton, f("!!q"));
        assert_eq!(is_form_sharp(&f("p -> (~p | p)")), None);
        assert!(is_form_sharp(&f("p -> (~q | q)")).is_some());
        assert!(is_form_sharp(&f("p -> !p")).unwrap().q_vars.is_empty());
        assert_eq!(is_form_sharp(&f("[]p")), None);
    }

    #[test]
    fn independence_examples() {
        let cfg = CheckConfig::default();
        let a = three_chain();
        let (n, d1, d2) = (set(&[1, 2]), set(&[0]), set(&[0, 1]));
        delta_independence_check(a.clone(), n, d1, d2, &f("q | ~q"), &cfg).unwrap();
        assert!(delta_independence_check(a.clone(), n, d1, d2, &f("p -> p"), &cfg).unwrap());
        delta_independence_check(a.clone(), n, d2, d2, &f("p | !p"), &cfg).unwrap();
        assert!(matches!(
            delta_independence_check(a, n, d1, d2, &f("~p"), &cfg),
            Err(CompanionError::NotSharp(_))
        ));
    }

    #[test]
    fn kleene_and_closed_ideal_examples() {
        let cfg = CheckConfig::default();
        let a = Arc::new(three_chain());
        let tw = |n: &[usize], d: &[usize]| TwistStructure::new(a.clone().into(), set(n), set(d)).unwrap();
        assert!(kleene_characterization(&tw(&[1, 2], &[0, 1]), &cfg).unwrap());
        assert!(!kleene_characterization(&tw(&[1, 2], &[0, 1, 2]), &cfg).unwrap());
        assert!(kleene_characterization(&tw(&[1, 2], &[0]), &cfg).unwrap());
        assert!(closed_ideal_axiom_check(&tw(&[1, 2], &[0]), &cfg).unwrap());
        assert!(!closed_ideal_axiom_check(&tw(&[1, 2], &[0, 1]), &cfg).unwrap());
        let four = heyting_from_poset(&FinitePoset::antichain(2)).0;
        for d in four.ideals() {
            let t = TwistStructure::new(four.clone().into(), set(&[3]), d).unwrap();
            assert!(closed_ideal_axiom_check(&t, &cfg).unwrap());
        }
    }

    #[test]
    fn scan_up_to_two_points() {
        let cfg = CheckConfig::default();
        let s = kleene_box_implication_scan(2, &cfg).unwrap();
        assert_eq!(s.posets, 4);
        assert!(s.violations.is_empty());
        assert_eq!(s, kleene_box_implication_scan(2, &cfg.parallel(true)).unwrap());
    }

    #[test]
    fn demo_steps() {
        let d = kleene_demo(&CheckConfig::default()).unwrap();
        assert!(d.kleene.is_valid());
        assert!(!d.kleene_prime.is_valid());
        assert_eq!(d.fixed_value, Value::Pair(1, 0));
        assert!(d.scan.violations.is_empty());
        assert!(d.transcript.iter().any(|l| l.contains("(♥, 1)")));
    }
}
