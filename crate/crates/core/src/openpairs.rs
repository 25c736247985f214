//! Pairs of open elements inside a twist-structure over a topological
//! Boolean algebra, and the twist-structure they form.

use serde::Serialize;
use thiserror::Error;

use crate::bits::ElemSet;
use crate::tba::FiniteTba;
use crate::twist::{TwistError, TwistStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpenPairsError {
    #[error("twist-structure is not over a topological Boolean algebra")]
    HeytingBase,
    #[error("open first components and the compatible opens differ at {0}")]
    GammaNeLambda(usize),
    #[error("open pairs do not form a twist-structure: {0}")]
    Twist(#[from] TwistError),
}

fn tba_of(t: &TwistStructure) -> Result<&FiniteTba, OpenPairsError> {
    t.base().tba().ok_or(OpenPairsError::HeytingBase)
}

/// Carrier pairs with both components open.
pub fn g2(t: &TwistStructure) -> Result<Vec<(usize, usize)>, OpenPairsError> {
    let b = tba_of(t)?;
    Ok(t.carrier()
        .iter()
        .copied()
        .filter(|&(x, y)| b.is_open(x) && b.is_open(y))
        .collect())
}

/// First components of the open pairs.
pub fn gamma(t: &TwistStructure) -> Result<ElemSet, OpenPairsError> {
    Ok(g2(t)?.iter().map(|&(a, _)| a).collect())
}

/// Open `a` with `a | box !a ∈ nabla`.
pub fn lambda_set(b: &FiniteTba, nabla: ElemSet) -> ElemSet {
    let h = b.algebra();
    b.open_elements()
        .iter()
        .filter(|&a| nabla.contains(h.join(a, b.nec(b.compl(a)))))
        .collect()
}

/// Whether `s` is a subalgebra of the open-element algebra.
pub fn is_open_subalgebra(b: &FiniteTba, s: ElemSet) -> bool {
    let h = b.algebra();
    s.is_subset(b.open_elements())
        && s.contains(h.bot())
        && s.iter().all(|x| {
            s.iter()
                .all(|y| s.contains(h.meet(x, y)) && s.contains(h.join(x, y)) && s.contains(b.nec(h.imp(x, y))))
        })
}

/// `{a | b}` over the open pairs; panics if this differs from the
/// restrictions of `nabla` to the open elements, to first components and
/// to the compatible opens.
pub fn nabla_g(t: &TwistStructure) -> Result<ElemSet, OpenPairsError> {
    let b = tba_of(t)?;
    let h = b.algebra();
    let direct: ElemSet = g2(t)?.iter().map(|&(x, y)| h.join(x, y)).collect();
    let nabla = t.nabla();
    assert_eq!(direct, nabla.intersection(b.open_elements()));
    assert_eq!(direct, nabla.intersection(gamma(t)?));
    assert_eq!(direct, nabla.intersection(lambda_set(b, nabla)));
    Ok(direct)
}

/// `{a & b}` over the open pairs; panics unless it equals the restrictions
/// of `delta` to the open elements and to first components.
pub fn delta_g(t: &TwistStructure) -> Result<ElemSet, OpenPairsError> {
    let b = tba_of(t)?;
    let h = b.algebra();
    let direct: ElemSet = g2(t)?.iter().map(|&(x, y)| h.meet(x, y)).collect();
    assert_eq!(direct, t.delta().intersection(b.open_elements()));
    assert_eq!(direct, t.delta().intersection(gamma(t)?));
    Ok(direct)
}

/// `(Γ ⊆ Λ, open pairs closed under boxed pair implication)`, computed
/// independently of each other.
pub fn gamma_imp_closure_equiv(t: &TwistStructure) -> Result<(bool, bool), OpenPairsError> {
    let b = tba_of(t)?;
    let h = b.algebra();
    let sub = gamma(t)?.is_subset(lambda_set(b, t.nabla()));
    let pairs = g2(t)?;
    let closed = pairs.iter().all(|&(a, _)| {
        pairs.iter().all(|&(c, d)| {
            let r = (b.nec(h.imp(a, c)), h.meet(a, d));
            pairs.contains(&r)
        })
    });
    Ok((sub, closed))
}

/// Whether `(box a, box b)` is in the carrier for every carrier pair.
pub fn box_pair_closed(t: &TwistStructure) -> Result<bool, OpenPairsError> {
    let b = tba_of(t)?;
    Ok(t.carrier().iter().all(|&(x, y)| t.contains((b.nec(x), b.nec(y)))))
}

/// The open pairs as a twist-structure over the subalgebra of first
/// components, relabelled densely.
#[derive(Debug, Clone)]
pub struct OpenPairs {
    pub structure: TwistStructure,
    /// Index in the TBA of each element of the new base.
    pub embedding: Vec<usize>,
}

impl OpenPairs {
    /// A pair of the new structure as a pair of the TBA.
    pub fn embed(&self, (a, b): (usize, usize)) -> (usize, usize) {
        (self.embedding[a], self.embedding[b])
    }

    /// Preimage of a TBA subset under the embedding.
    pub fn pull_back(&self, s: ElemSet) -> ElemSet {
        (0..self.embedding.len())
            .filter(|&i| s.contains(self.embedding[i]))
            .collect()
    }
}

/// Requires the first components of open pairs to coincide with the
/// compatible opens.
pub fn open_pairs_algebra(t: &TwistStructure) -> Result<OpenPairs, OpenPairsError> {
    let b = tba_of(t)?;
    let gam = gamma(t)?;
    let lam = lambda_set(b, t.nabla());
    if let Some(a) = gam.difference(lam).union(lam.difference(gam)).first() {
        return Err(OpenPairsError::GammaNeLambda(a));
    }
    let (g, incl) = b.open_algebra();
    let in_g: ElemSet = (0..incl.len()).filter(|&i| gam.contains(incl[i])).collect();
    let (sub, emb_g) = g.subalgebra(in_g).expect("compatible opens form a subalgebra");
    let embedding: Vec<usize> = emb_g.iter().map(|&i| incl[i]).collect();
    let op = OpenPairs {
        structure: TwistStructure::build_unchecked(sub.clone().into(), ElemSet::EMPTY, ElemSet::EMPTY),
        embedding,
    };
    let nabla = op.pull_back(nabla_g(t)?);
    let delta = op.pull_back(delta_g(t)?);
    let structure = TwistStructure::new(sub.into(), nabla, delta)?;
    let op = OpenPairs {
        structure,
        embedding: op.embedding,
    };
    let embedded: Vec<(usize, usize)> = op.structure.carrier().iter().map(|&p| op.embed(p)).collect();
    let mut expected = g2(t)?;
    let mut got = embedded;
    expected.sort_unstable();
    got.sort_unstable();
    assert_eq!(got, expected, "open pairs differ from the constructed carrier");
    Ok(op)
}

/// Everything computed about the open pairs of one twist-structure.
#[derive(Debug, Clone, Serialize)]
pub struct OpenPairsReport {
    pub g2: Vec<(usize, usize)>,
    pub gamma: ElemSet,
    pub lambda: ElemSet,
    pub nabla_g: ElemSet,
    pub delta_g: ElemSet,
    pub gamma_eq_lambda: bool,
    pub gamma_sub_lambda: bool,
    pub box_pair_closed: bool,
}

pub fn report(t: &TwistStructure) -> Result<OpenPairsReport, OpenPairsError> {
    let b = tba_of(t)?;
    let gamma = gamma(t)?;
    let lambda = lambda_set(b, t.nabla());
    Ok(OpenPairsReport {
        g2: g2(t)?,
        gamma,
        lambda,
        nabla_g: nabla_g(t)?,
        delta_g: delta_g(t)?,
        gamma_eq_lambda: gamma == lambda,
        gamma_sub_lambda: gamma.is_subset(lambda),
        box_pair_closed: box_pair_closed(t)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::FiniteHeyting;
    use crate::order::{heyting_from_poset, FinitePoset};
    use crate::tba::s_of;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    fn three() -> FiniteHeyting {
        heyting_from_poset(&FinitePoset::chain(2)).0
    }

    #[test]
    fn identity_box_gives_everything() {
        let four = heyting_from_poset(&FinitePoset::antichain(2)).0;
        let b = FiniteTba::new(four, &[0, 1, 2, 3]).unwrap();
        let t = TwistStructure::full(b.clone().into());
        assert_eq!(g2(&t).unwrap(), t.carrier());
        assert_eq!(lambda_set(&b, b.algebra().elements()), b.open_elements());
        assert_eq!(gamma_imp_closure_equiv(&t).unwrap(), (true, true));
        assert!(box_pair_closed(&t).unwrap());
        let op = open_pairs_algebra(&t).unwrap();
        assert_eq!(op.structure.size(), t.size());
    }

    #[test]
    fn lifted_kleene_instance() {
        let a = three();
        let s = s_of(&a);
        let b = &s.tba;
        let nabla = b.rho_map(s.lift(set(&[1, 2]))).unwrap();
        let delta = b.sigma_map(s.lift(set(&[0, 1]))).unwrap();
        let t = TwistStructure::new(b.clone().into(), nabla, delta).unwrap();
        assert_eq!(gamma(&t).unwrap(), b.open_elements());
        assert_eq!(lambda_set(b, nabla), b.open_elements());
        // N({⊥,♥}) is the whole chain
        assert_eq!(delta_g(&t).unwrap(), b.open_elements());
        assert_eq!(gamma_imp_closure_equiv(&t).unwrap(), (true, true));
        assert!(box_pair_closed(&t).unwrap());
        let op = open_pairs_algebra(&t).unwrap();
        let expected = TwistStructure::new(a.into(), set(&[1, 2]), set(&[0, 1, 2])).unwrap();
        let back: Vec<(usize, usize)> = op
            .structure
            .carrier()
            .iter()
            .map(|&p| {
                let (x, y) = op.embed(p);
                let pos = |e| s.iota.iter().position(|&i| i == e).unwrap();
                (pos(x), pos(y))
            })
            .collect();
        let mut back_sorted = back.clone();
        back_sorted.sort_unstable();
        assert_eq!(back_sorted, expected.carrier());
    }

    #[test]
    fn heyting_base_is_rejected() {
        let t = TwistStructure::full(three().into());
        assert_eq!(g2(&t), Err(OpenPairsError::HeytingBase));
    }
}
