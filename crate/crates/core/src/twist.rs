//! Twist-structures: algebras of pairs over a Heyting algebra or a
//! topological Boolean algebra, cut out by a filter and an ideal.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bits::ElemSet;
use crate::heyting::FiniteHeyting;
use crate::tba::FiniteTba;

/// The algebra underneath a twist-structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Heyting(Arc<FiniteHeyting>),
    Tba(Arc<FiniteTba>),
}

impl Base {
    /// The lattice part (for a TBA, its Boolean algebra).
    pub fn lattice(&self) -> &FiniteHeyting {
        match self {
            Base::Heyting(h) => h,
            Base::Tba(b) => b.algebra(),
        }
    }

    pub fn tba(&self) -> Option<&FiniteTba> {
        match self {
            Base::Heyting(_) => None,
            Base::Tba(b) => Some(b),
        }
    }

    pub fn kind(&self) -> BaseKind {
        match self {
            Base::Heyting(_) => BaseKind::Heyting,
            Base::Tba(_) => BaseKind::Tba,
        }
    }
}

impl From<FiniteHeyting> for Base {
    fn from(h: FiniteHeyting) -> Base {
        Base::Heyting(Arc::new(h))
    }
}

impl From<FiniteTba> for Base {
    fn from(b: FiniteTba) -> Base {
        Base::Tba(Arc::new(b))
    }
}

impl From<Arc<FiniteHeyting>> for Base {
    fn from(h: Arc<FiniteHeyting>) -> Base {
        Base::Heyting(h)
    }
}

impl From<Arc<FiniteTba>> for Base {
    fn from(b: Arc<FiniteTba>) -> Base {
        Base::Tba(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    Heyting,
    Tba,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::Heyting => "heyting",
            BaseKind::Tba => "tba",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistOp {
    And,
    Or,
    Imp,
    SNot,
    Bot,
    Nec,
    Poss,
}

impl TwistOp {
    pub fn arity(self) -> usize {
        match self {
            TwistOp::Bot => 0,
            TwistOp::SNot | TwistOp::Nec | TwistOp::Poss => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("nabla {0:?} is not a filter")]
    NablaNotFilter(ElemSet),
    #[error("nabla {nabla:?} misses the dense element {missing}")]
    NablaMissesDense { nabla: ElemSet, missing: usize },
    #[error("nabla {0:?} is not an open filter")]
    NablaNotOpenFilter(ElemSet),
    #[error("delta {0:?} is not an ideal")]
    DeltaNotIdeal(ElemSet),
    #[error("delta {0:?} is not a closed ideal")]
    DeltaNotClosedIdeal(ElemSet),
    #[error("modal operation on a twist-structure over a Heyting algebra")]
    ModalOnHeyting,
    #[error("pair ({0}, {1}) is not in the carrier")]
    NotInCarrier(usize, usize),
    #[error("{op:?} expects {expected} arguments, got {got}")]
    Arity { op: TwistOp, expected: usize, got: usize },
    #[error("carrier not closed: {op:?} applied to {args:?}")]
    NotClosed { op: TwistOp, args: Vec<(usize, usize)> },
    #[error("first projection misses base element {0}")]
    NotSurjective(usize),
}

const ABSENT: u16 = u16::MAX;

/// `Tw(C, nabla, delta)`: the pairs `(a, b)` with `a | b ∈ nabla` and
/// `a & b ∈ delta`, sorted lexicographically.
#[derive(Debug, Clone)]
pub struct TwistStructure {
    base: Base,
    nabla: ElemSet,
    delta: ElemSet,
    carrier: Vec<(usize, usize)>,
    index: Vec<u16>,
}

impl PartialEq for TwistStructure {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.nabla == other.nabla && self.delta == other.delta
    }
}

impl Eq for TwistStructure {}

impl TwistStructure {
    /// Checks the side conditions on `nabla` and `delta`, builds the carrier
    /// and verifies closure and surjectivity of the first projection.
    pub fn new(base: Base, nabla: ElemSet, delta: ElemSet) -> Result<TwistStructure, TwistError> {
        let c = base.lattice();
        match &base {
            Base::Heyting(h) => {
                if !h.is_filter(nabla) {
                    return Err(TwistError::NablaNotFilter(nabla));
                }
                if let Some(missing) = h.dense_filter().difference(nabla).first() {
                    return Err(TwistError::NablaMissesDense { nabla, missing });
                }
                if !h.is_ideal(delta) {
                    return Err(TwistError::DeltaNotIdeal(delta));
                }
            }
            Base::Tba(b) => {
                if !b.is_open_filter(nabla) {
                    return Err(TwistError::NablaNotOpenFilter(nabla));
                }
                if !b.is_closed_ideal(delta) {
                    return Err(TwistError::DeltaNotClosedIdeal(delta));
                }
            }
        }
        let t = Self::build_unchecked(base.clone(), nabla, delta);
        t.verify_closure()?;
        if let Some(a) = (0..c.size()).find(|&a| !t.carrier.iter().any(|&(x, _)| x == a)) {
            return Err(TwistError::NotSurjective(a));
        }
        Ok(t)
    }

    pub(crate) fn build_unchecked(base: Base, nabla: ElemSet, delta: ElemSet) -> TwistStructure {
        let c = base.lattice();
        let n = c.size();
        let mut carrier = Vec::new();
        let mut index = vec![ABSENT; n * n];
        for a in 0..n {
            for b in 0..n {
                if nabla.contains(c.join(a, b)) && delta.contains(c.meet(a, b)) {
                    index[a * n + b] = carrier.len() as u16;
                    carrier.push((a, b));
                }
            }
        }
        TwistStructure {
            base,
            nabla,
            delta,
            carrier,
            index,
        }
    }

    /// `Tw(C, C, C)`, all of `C × C`.
    pub fn full(base: Base) -> TwistStructure {
        let all = base.lattice().elements();
        TwistStructure::new(base, all, all).expect("full twist-structure")
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn lattice(&self) -> &FiniteHeyting {
        self.base.lattice()
    }

    pub fn nabla(&self) -> ElemSet {
        self.nabla
    }

    pub fn delta(&self) -> ElemSet {
        self.delta
    }

    pub fn carrier(&self) -> &[(usize, usize)] {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn contains(&self, p: (usize, usize)) -> bool {
        self.index_of(p).is_some()
    }

    /// Position of the pair in the carrier.
    pub fn index_of(&self, (a, b): (usize, usize)) -> Option<usize> {
        let n = self.lattice().size();
        if a >= n || b >= n {
            return None;
        }
        match self.index[a * n + b] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    /// `{a | b : (a, b) ∈ carrier}`.
    pub fn nabla_of(&self) -> ElemSet {
        let c = self.lattice();
        self.carrier.iter().map(|&(a, b)| c.join(a, b)).collect()
    }

    /// `{a & b : (a, b) ∈ carrier}`.
    pub fn delta_of(&self) -> ElemSet {
        let c = self.lattice();
        self.carrier.iter().map(|&(a, b)| c.meet(a, b)).collect()
    }

    /// The pair for an operation, without membership checks.
    pub fn op_raw(&self, op: TwistOp, args: &[(usize, usize)]) -> Result<(usize, usize), TwistError> {
        if args.len() != op.arity() {
            return Err(TwistError::Arity {
                op,
                expected: op.arity(),
                got: args.len(),
            });
        }
        let c = self.lattice();
        Ok(match op {
            TwistOp::Bot => (c.bot(), c.top()),
            TwistOp::SNot => (args[0].1, args[0].0),
            TwistOp::And => {
                let ((a, b), (x, y)) = (args[0], args[1]);
                (c.meet(a, x), c.join(b, y))
            }
            TwistOp::Or => {
                let ((a, b), (x, y)) = (args[0], args[1]);
                (c.join(a, x), c.meet(b, y))
            }
            TwistOp::Imp => {
                let ((a, _), (x, y)) = (args[0], args[1]);
                (c.imp(a, x), c.meet(a, y))
            }
            TwistOp::Nec | TwistOp::Poss => {
                let b = self.base.tba().ok_or(TwistError::ModalOnHeyting)?;
                let (x, y) = args[0];
                if op == TwistOp::Nec {
                    (b.nec(x), b.poss(y))
                } else {
                    (b.poss(x), b.nec(y))
                }
            }
        })
    }

    /// Applies an operation to carrier members; the result is a member.
    pub fn apply(&self, op: TwistOp, args: &[(usize, usize)]) -> Result<(usize, usize), TwistError> {
        if let Some(&(a, b)) = args.iter().find(|p| !self.contains(**p)) {
            return Err(TwistError::NotInCarrier(a, b));
        }
        let r = self.op_raw(op, args)?;
        if !self.contains(r) {
            return Err(TwistError::NotClosed {
                op,
                args: args.to_vec(),
            });
        }
        Ok(r)
    }

    fn ops(&self) -> Vec<TwistOp> {
        let mut ops = vec![TwistOp::Bot, TwistOp::SNot, TwistOp::And, TwistOp::Or, TwistOp::Imp];
        if self.base.tba().is_some() {
            ops.extend([TwistOp::Nec, TwistOp::Poss]);
        }
        ops
    }

    /// Checks that every operation maps carrier members to members.
    pub fn verify_closure(&self) -> Result<(), TwistError> {
        for op in self.ops() {
            let check = |args: &[(usize, usize)]| {
                if self.contains(self.op_raw(op, args)?) {
                    Ok(())
                } else {
                    Err(TwistError::NotClosed {
                        op,
                        args: args.to_vec(),
                    })
                }
            };
            match op.arity() {
                0 => check(&[])?,
                1 => {
                    for &p in &self.carrier {
                        check(&[p])?;
                    }
                }
                _ => {
                    for &p in &self.carrier {
                        for &q in &self.carrier {
                            check(&[p, q])?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{heyting_from_poset, FinitePoset};
    use crate::tba::powerset_tba;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    fn three() -> Base {
        heyting_from_poset(&FinitePoset::chain(2)).0.into()
    }

    #[test]
    fn the_seven_element_structure() {
        let t = TwistStructure::new(three(), set(&[1, 2]), set(&[0, 1])).unwrap();
        assert_eq!(t.carrier(), &[(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(t.nabla_of(), set(&[1, 2]));
        assert_eq!(t.delta_of(), set(&[0, 1]));
    }

    #[test]
    fn full_structures() {
        let two: Base = heyting_from_poset(&FinitePoset::chain(1)).0.into();
        assert_eq!(TwistStructure::full(two.clone()).size(), 4);
        let t = TwistStructure::full(three());
        assert_eq!(t.size(), 9);
        assert_eq!(t.nabla_of(), set(&[0, 1, 2]));
        assert_eq!(t.delta_of(), set(&[0, 1, 2]));
        let all = set(&[0, 1, 2]);
        assert_eq!(TwistStructure::new(three(), all, all).unwrap(), t);

        let complementary = TwistStructure::new(two, set(&[1]), set(&[0])).unwrap();
        assert_eq!(complementary.carrier(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn preconditions_are_named() {
        assert_eq!(
            TwistStructure::new(three(), set(&[2]), set(&[0])).unwrap_err(),
            TwistError::NablaMissesDense {
                nabla: set(&[2]),
                missing: 1
            }
        );
        assert!(matches!(
            TwistStructure::new(three(), set(&[1]), set(&[0])),
            Err(TwistError::NablaNotFilter(_))
        ));
        assert!(matches!(
            TwistStructure::new(three(), set(&[1, 2]), set(&[1])),
            Err(TwistError::DeltaNotIdeal(_))
        ));
    }

    #[test]
    fn operations() {
        let t = TwistStructure::new(three(), set(&[1, 2]), set(&[0, 1])).unwrap();
        assert_eq!(t.apply(TwistOp::SNot, &[(1, 2)]), Ok((2, 1)));
        assert_eq!(t.apply(TwistOp::Imp, &[(2, 0), (1, 1)]), Ok((1, 1)));
        assert_eq!(t.apply(TwistOp::Bot, &[]), Ok((0, 2)));
        assert_eq!(t.apply(TwistOp::Nec, &[(1, 1)]), Err(TwistError::ModalOnHeyting));
        assert_eq!(
            t.apply(TwistOp::And, &[(0, 0), (1, 1)]),
            Err(TwistError::NotInCarrier(0, 0))
        );

        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        let tb = TwistStructure::full(b.clone().into());
        for &(x, y) in tb.carrier() {
            assert_eq!(tb.apply(TwistOp::Nec, &[(x, y)]), Ok((b.nec(x), b.poss(y))));
            assert_eq!(tb.apply(TwistOp::Poss, &[(x, y)]), Ok((b.poss(x), b.nec(y))));
        }
    }

    #[test]
    fn tba_base_requires_open_filter() {
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        // {x} = index 1 is not open, so ↑{x} is not an open filter
        let f = b.algebra().principal_filter(1);
        assert!(matches!(
            TwistStructure::new(b.into(), f, set(&[0])),
            Err(TwistError::NablaNotOpenFilter(_))
        ));
    }
}
