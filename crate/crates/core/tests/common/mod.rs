#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use twistlab::bits::ElemSet;
use twistlab::formula::{Formula, LanguageTag};
use twistlab::heyting::FiniteHeyting;
use twistlab::order::{enumerate_posets, enumerate_unlabeled, heyting_from_poset, FinitePoset};
use twistlab::semantics::enumerate_formulas;
use twistlab::tba::FiniteTba;

/// A Heyting algebra from a poset with every admissible filter/ideal pair.
pub struct AlgebraCase {
    pub poset: FinitePoset,
    pub alg: Arc<FiniteHeyting>,
    pub filters: Vec<ElemSet>,
    pub ideals: Vec<ElemSet>,
}

impl AlgebraCase {
    pub fn pairs(&self) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        self.filters
            .iter()
            .flat_map(move |&n| self.ideals.iter().map(move |&d| (n, d)))
    }
}

pub fn algebra_cases(max_poset: usize) -> Vec<AlgebraCase> {
    cases_of(enumerate_posets(max_poset))
}

/// Labeled posets up to `labeled` points, then one poset per isomorphism
/// class up to `max_poset` points.
pub fn reduced_cases(labeled: usize, max_poset: usize) -> Vec<AlgebraCase> {
    let mut posets = enumerate_posets(labeled);
    posets.extend(
        enumerate_unlabeled(max_poset)
            .into_iter()
            .filter(|p| p.size() > labeled),
    );
    cases_of(posets)
}

fn cases_of(posets: Vec<FinitePoset>) -> Vec<AlgebraCase> {
    posets
        .into_iter()
        .map(|poset| {
            let alg = Arc::new(heyting_from_poset(&poset).0);
            AlgebraCase {
                filters: alg.filters(true),
                ideals: alg.ideals(),
                poset,
                alg,
            }
        })
        .collect()
}

pub fn set(v: &[usize]) -> ElemSet {
    v.iter().copied().collect()
}

pub fn all_subsets(n: usize) -> impl Iterator<Item = ElemSet> {
    (0u64..1 << n).map(ElemSet)
}

/// Filters by brute force over all subsets: nonempty, upward closed,
/// closed under meets.
pub fn brute_filters(h: &FiniteHeyting) -> Vec<ElemSet> {
    all_subsets(h.size())
        .filter(|s| {
            !s.is_empty()
                && s.iter().all(|a| (0..h.size()).all(|b| !h.leq(a, b) || s.contains(b)))
                && s.iter().all(|a| s.iter().all(|b| s.contains(h.meet(a, b))))
        })
        .collect()
}

pub fn brute_ideals(h: &FiniteHeyting) -> Vec<ElemSet> {
    all_subsets(h.size())
        .filter(|s| {
            !s.is_empty()
                && s.iter().all(|a| (0..h.size()).all(|b| !h.leq(b, a) || s.contains(b)))
                && s.iter().all(|a| s.iter().all(|b| s.contains(h.join(a, b))))
        })
        .collect()
}

/// Reflexive transitive relations on `n` points, as up-set masks per point.
pub fn preorders(n: usize) -> Vec<Vec<u64>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut up: Vec<u64> = (0..n).map(|i| 1 << i).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| up[i] >> j & 1 == 0 || up[j] & !up[i] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

/// The powerset of a preordered set with the interior `{x | up(x) ⊆ S}`;
/// unlike posets, clusters make Grz fail.
pub fn preorder_tba(up: &[u64]) -> FiniteTba {
    let n = up.len();
    let (b, subsets) = heyting_from_poset(&FinitePoset::antichain(n));
    let index_of = |s: u64| subsets.iter().position(|t| t.0 == s).unwrap();
    let interior: Vec<usize> = subsets
        .iter()
        .map(|s| {
            let inner = (0..n).filter(|&x| up[x] & !s.0 == 0).fold(0u64, |m, x| m | 1 << x);
            index_of(inner)
        })
        .collect();
    FiniteTba::new(b, &interior).unwrap()
}

/// `n` restricted-form formulas: two-variable Li formulas with `q` replaced
/// by `q | ~q`, every other one also with `p` replaced by `~p | p`.
pub fn sharp_corpus(n: usize) -> Vec<Formula> {
    let block = |v: &str, flip: bool| {
        let x = Formula::var(v);
        let nx = Formula::sneg(x.clone());
        if flip {
            Formula::or(nx, x)
        } else {
            Formula::or(x, nx)
        }
    };
    let q_only: BTreeMap<String, Formula> = [("q".to_string(), block("q", false))].into_iter().collect();
    let mut both = q_only.clone();
    both.insert("p".to_string(), block("p", true));
    let base: Vec<Formula> = enumerate_formulas(LanguageTag::Li, 2, 2, 100_000)
        .into_iter()
        .filter(|f| f.vars().contains("q"))
        .collect();
    let stride = (base.len() / n).max(1);
    base.iter()
        .step_by(stride)
        .take(n)
        .enumerate()
        .map(|(i, f)| f.substitute(if i % 2 == 0 { &q_only } else { &both }))
        .collect()
}
