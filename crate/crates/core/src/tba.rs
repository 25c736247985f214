//! Finite topological Boolean algebras: Boolean algebras with an interior
//! operator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{ElemSet, MAX_ELEMS};
use crate::heyting::{sort_canonical, FiniteHeyting, HeytingTables};
use crate::order::{birkhoff_image, join_irreducible_poset, FinitePoset};
use crate::violation::Violation;

/// Heyting tables plus the interior table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TbaTables {
    #[serde(flatten)]
    pub heyting: HeytingTables,
    #[serde(rename = "box")]
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoleError {
    #[error("{0:?} is not an open filter")]
    NotOpenFilter(ElemSet),
    #[error("{0:?} is not a filter of the open-element algebra")]
    NotOpenAlgebraFilter(ElemSet),
    #[error("{0:?} is not an ideal of the algebra or of its open elements")]
    NotIdeal(ElemSet),
}

/// A validated finite topological Boolean algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTba {
    alg: FiniteHeyting,
    interior: Vec<u8>,
    compl: Vec<u8>,
    closure: Vec<u8>,
}

/// Checks that the algebra is Boolean and the four interior laws.
pub fn validate_tba(t: &TbaTables) -> Result<(), Violation> {
    FiniteTba::from_tables(t).map(|_| ())
}

impl FiniteTba {
    pub fn from_tables(t: &TbaTables) -> Result<FiniteTba, Violation> {
        let alg = FiniteHeyting::from_tables(&t.heyting)?;
        FiniteTba::new(alg, &t.interior)
    }

    pub fn new(alg: FiniteHeyting, interior: &[usize]) -> Result<FiniteTba, Violation> {
        let n = alg.size();
        if interior.len() != n {
            return Err(Violation::new(format!("box table has {n} entries"), &[interior.len()]));
        }
        if let Some(a) = interior.iter().position(|&x| x >= n) {
            return Err(Violation::new("box entry in range", &[a, interior[a]]));
        }
        if let Some(a) = (0..n).find(|&a| alg.join(a, alg.neg(a)) != alg.top()) {
            return Err(Violation::new("Boolean law a | !a = 1", &[a]));
        }
        let bx = |a: usize| interior[a];
        if bx(alg.top()) != alg.top() {
            return Err(Violation::new("box 1 = 1", &[alg.top()]));
        }
        for a in 0..n {
            if !alg.leq(bx(a), a) {
                return Err(Violation::new("box a <= a", &[a]));
            }
            if !alg.leq(bx(a), bx(bx(a))) {
                return Err(Violation::new("box a <= box box a", &[a]));
            }
            for b in 0..n {
                if bx(alg.meet(a, b)) != alg.meet(bx(a), bx(b)) {
                    return Err(Violation::new("box (a & b) = box a & box b", &[a, b]));
                }
            }
        }
        Ok(Self::assemble(alg, interior.iter().map(|&x| x as u8).collect()))
    }

    fn assemble(alg: FiniteHeyting, interior: Vec<u8>) -> FiniteTba {
        let n = alg.size();
        let compl: Vec<u8> = (0..n).map(|a| alg.neg(a) as u8).collect();
        let closure = (0..n).map(|a| compl[interior[compl[a] as usize] as usize]).collect();
        FiniteTba {
            alg,
            interior,
            compl,
            closure,
        }
    }

    pub fn to_tables(&self) -> TbaTables {
        TbaTables {
            heyting: self.alg.to_tables(),
            interior: self.interior.iter().map(|&x| x as usize).collect(),
        }
    }

    /// The underlying Boolean algebra.
    pub fn algebra(&self) -> &FiniteHeyting {
        &self.alg
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    #[inline]
    pub fn nec(&self, a: usize) -> usize {
        self.interior[a] as usize
    }

    /// `!box!a`.
    #[inline]
    pub fn poss(&self, a: usize) -> usize {
        self.closure[a] as usize
    }

    #[inline]
    pub fn compl(&self, a: usize) -> usize {
        self.compl[a] as usize
    }

    pub fn is_open(&self, a: usize) -> bool {
        self.nec(a) == a
    }

    pub fn is_closed(&self, a: usize) -> bool {
        self.poss(a) == a
    }

    pub fn open_elements(&self) -> ElemSet {
        (0..self.size()).filter(|&a| self.is_open(a)).collect()
    }

    /// The open elements under inherited meet and join and boxed
    /// implication, with the inclusion into `self` (increasing).
    pub fn open_algebra(&self) -> (FiniteHeyting, Vec<usize>) {
        let incl = self.open_elements().to_vec();
        let mut pos = vec![usize::MAX; self.size()];
        for (i, &e) in incl.iter().enumerate() {
            pos[e] = i;
        }
        let k = incl.len();
        let (mut meet, mut join, mut imp) = (vec![0; k * k], vec![0; k * k], vec![0; k * k]);
        let a = &self.alg;
        for (i, &x) in incl.iter().enumerate() {
            for (j, &y) in incl.iter().enumerate() {
                meet[i * k + j] = pos[a.meet(x, y)] as u8;
                join[i * k + j] = pos[a.join(x, y)] as u8;
                imp[i * k + j] = pos[self.nec(a.imp(x, y))] as u8;
            }
        }
        let g = FiniteHeyting::from_flat(k, pos[a.bot()], meet, join, imp);
        let g = match a.labels() {
            Some(l) => g.with_labels(incl.iter().map(|&e| l[e].clone()).collect()),
            None => g,
        };
        (g, incl)
    }

    /// Smallest subset containing `gens`, bot and top, closed under meet,
    /// join, complement and box.
    pub fn generated_subalgebra(&self, gens: ElemSet) -> ElemSet {
        let a = &self.alg;
        let mut s = gens;
        s.insert(a.bot());
        s.insert(a.top());
        loop {
            let mut next = s;
            for x in s.iter() {
                next.insert(self.compl(x));
                next.insert(self.nec(x));
                for y in s.iter() {
                    next.insert(a.meet(x, y));
                    next.insert(a.join(x, y));
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn is_open_filter(&self, f: ElemSet) -> bool {
        self.alg.is_filter(f) && f.iter().all(|a| f.contains(self.nec(a)))
    }

    pub fn is_closed_ideal(&self, i: ElemSet) -> bool {
        self.alg.is_ideal(i) && i.iter().all(|a| i.contains(self.poss(a)))
    }

    /// All open filters (each `↑a` with `a` open), sorted canonically.
    pub fn open_filters(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = self
            .open_elements()
            .iter()
            .map(|a| self.alg.principal_filter(a))
            .collect();
        sort_canonical(&mut out);
        out
    }

    /// All closed ideals (each `↓a` with `a` closed), sorted canonically.
    pub fn closed_ideals(&self) -> Vec<ElemSet> {
        let mut out: Vec<ElemSet> = (0..self.size())
            .filter(|&a| self.is_closed(a))
            .map(|a| self.alg.principal_ideal(a))
            .collect();
        sort_canonical(&mut out);
        out
    }

    fn is_open_algebra_filter(&self, f: ElemSet) -> bool {
        let opens = self.open_elements();
        !f.is_empty()
            && f.is_subset(opens)
            && self.alg.up_closure(f).intersection(opens) == f
            && f.iter().all(|a| f.iter().all(|b| f.contains(self.alg.meet(a, b))))
    }

    fn is_open_algebra_ideal(&self, i: ElemSet) -> bool {
        let opens = self.open_elements();
        !i.is_empty()
            && i.is_subset(opens)
            && self.alg.down_closure(i).intersection(opens) == i
            && i.iter().all(|a| i.iter().all(|b| i.contains(self.alg.join(a, b))))
    }

    /// Restriction of an open filter to the open elements.
    pub fn delta_map(&self, nabla: ElemSet) -> Result<ElemSet, RoleError> {
        if !self.is_open_filter(nabla) {
            return Err(RoleError::NotOpenFilter(nabla));
        }
        let out = nabla.intersection(self.open_elements());
        debug_assert_eq!(self.rho_unchecked(out), nabla);
        Ok(out)
    }

    /// `{x | box x ∈ f}` for a filter `f` of the open-element algebra
    /// (given as indices of `self`).
    pub fn rho_map(&self, f: ElemSet) -> Result<ElemSet, RoleError> {
        if !self.is_open_algebra_filter(f) {
            return Err(RoleError::NotOpenAlgebraFilter(f));
        }
        let out = self.rho_unchecked(f);
        debug_assert_eq!(out.intersection(self.open_elements()), f);
        Ok(out)
    }

    fn rho_unchecked(&self, f: ElemSet) -> ElemSet {
        (0..self.size()).filter(|&x| f.contains(self.nec(x))).collect()
    }

    /// `{x | x <= diamond y for some y ∈ d}`, for an ideal of `self` or of
    /// its open-element algebra.
    pub fn sigma_map(&self, d: ElemSet) -> Result<ElemSet, RoleError> {
        if !self.alg.is_ideal(d) && !self.is_open_algebra_ideal(d) {
            return Err(RoleError::NotIdeal(d));
        }
        let closures: ElemSet = d.iter().map(|y| self.poss(y)).collect();
        Ok(self.alg.down_closure(closures))
    }

    /// Checks the one-variable Grz axiom at every element; on failure
    /// returns the least refuting element.
    pub fn satisfies_grz(&self) -> Result<(), usize> {
        let a = &self.alg;
        match (0..self.size()).find(|&p| {
            let inner = self.nec(a.imp(p, self.nec(p)));
            let lhs = self.nec(a.imp(inner, p));
            a.imp(lhs, p) != a.top()
        }) {
            None => Ok(()),
            Some(p) => Err(p),
        }
    }
}

impl Serialize for FiniteTba {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_tables().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteTba {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TbaTables::deserialize(d)?;
        FiniteTba::from_tables(&t).map_err(serde::de::Error::custom)
    }
}

/// The full powerset of `p`'s points with `box s = {x | ↑x ⊆ s}`.
///
/// Elements are the subsets sorted by (cardinality, bitmask); the subsets are
/// returned alongside.
pub fn powerset_tba(p: &FinitePoset) -> (FiniteTba, Vec<ElemSet>) {
    let n = p.size();
    assert!(1usize << n <= MAX_ELEMS, "powerset of {n} points is too large");
    let mut subsets: Vec<ElemSet> = (0..1u64 << n).map(ElemSet).collect();
    sort_canonical(&mut subsets);
    let k = subsets.len();
    let mut pos = vec![0u8; k];
    for (i, s) in subsets.iter().enumerate() {
        pos[s.0 as usize] = i as u8;
    }
    let full = ElemSet::full(n);
    let idx = |s: ElemSet| pos[s.0 as usize];
    let (mut meet, mut join, mut imp) = (vec![0; k * k], vec![0; k * k], vec![0; k * k]);
    for (a, &u) in subsets.iter().enumerate() {
        for (b, &v) in subsets.iter().enumerate() {
            meet[a * k + b] = idx(u.intersection(v));
            join[a * k + b] = idx(u.union(v));
            imp[a * k + b] = idx(full.difference(u).union(v));
        }
    }
    let alg = FiniteHeyting::from_flat(k, 0, meet, join, imp);
    let interior: Vec<u8> = subsets.iter().map(|&s| idx(p.interior(s))).collect();
    let tba = FiniteTba::assemble(alg, interior);
    debug_assert!(FiniteTba::new(tba.alg.clone(), &tba.to_tables().interior).is_ok());
    (tba, subsets)
}

/// The TBA generated by its open elements whose open-element algebra is a
/// given Heyting algebra, with the identifying map.
#[derive(Debug, Clone)]
pub struct OpenGenerated {
    pub tba: FiniteTba,
    /// `iota[a]` is the element of `tba` that corresponds to `a`.
    pub iota: Vec<usize>,
    /// The join-irreducible poset whose powerset carries `tba`.
    pub poset: FinitePoset,
    /// Join-irreducible elements of the source algebra, one per point.
    pub join_irreducibles: Vec<usize>,
    /// The point set of each element of `tba`.
    pub subsets: Vec<ElemSet>,
}

impl OpenGenerated {
    /// `iota` applied to a subset of the source algebra.
    pub fn lift(&self, s: ElemSet) -> ElemSet {
        s.iter().map(|a| self.iota[a]).collect()
    }

    /// Preimage under `iota`.
    pub fn pull_back(&self, s: ElemSet) -> ElemSet {
        (0..self.iota.len()).filter(|&a| s.contains(self.iota[a])).collect()
    }
}

/// Builds the powerset TBA over the join-irreducibles of `a`, checks that
/// its open elements form a copy of `a` and that they generate it.
pub fn s_of(a: &FiniteHeyting) -> OpenGenerated {
    let (poset, ji) = join_irreducible_poset(a);
    let (tba, subsets) = powerset_tba(&poset);
    let mut pos = vec![usize::MAX; 1usize << poset.size()];
    for (i, s) in subsets.iter().enumerate() {
        pos[s.0 as usize] = i;
    }
    let iota: Vec<usize> = (0..a.size())
        .map(|x| pos[birkhoff_image(a, &ji, x).0 as usize])
        .collect();

    let (g, incl) = tba.open_algebra();
    let to_g: Vec<usize> = iota
        .iter()
        .map(|&b| incl.iter().position(|&e| e == b).expect("image is open"))
        .collect();
    assert!(
        a.is_isomorphism(&g, &to_g),
        "source algebra is not isomorphic to the open elements"
    );
    let opens = tba.open_elements();
    assert_eq!(
        tba.generated_subalgebra(opens),
        tba.algebra().elements(),
        "open elements do not generate the algebra"
    );
    OpenGenerated {
        tba,
        iota,
        poset,
        join_irreducibles: ji,
        subsets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::heyting_from_poset;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    fn three_chain() -> FiniteHeyting {
        heyting_from_poset(&FinitePoset::chain(2)).0
    }

    #[test]
    fn constant_bottom_box_is_rejected() {
        let (b, _) = heyting_from_poset(&FinitePoset::antichain(2));
        let v = FiniteTba::new(b.clone(), &[0, 0, 0, 0]).unwrap_err();
        assert_eq!(v.law, "box 1 = 1");
        assert!(FiniteTba::new(b, &[0, 1, 2, 3]).is_ok());
        let (h, _) = heyting_from_poset(&FinitePoset::chain(2));
        assert!(FiniteTba::new(h, &[0, 1, 2]).unwrap_err().law.starts_with("Boolean"));
    }

    #[test]
    fn diamond_on_the_two_chain() {
        // points x=0 < y=1; subsets: {}, {x}, {y}, {x,y}
        let (b, subs) = powerset_tba(&FinitePoset::chain(2));
        assert_eq!(subs, vec![set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]);
        assert_eq!(b.poss(2), 3);
        assert_eq!(b.poss(0), 0);
        assert_eq!(b.poss(3), 3);
        assert_eq!(b.open_elements(), set(&[0, 2, 3]));
    }

    #[test]
    fn open_algebras() {
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        let (g, incl) = b.open_algebra();
        assert_eq!(incl, vec![0, 2, 3]);
        assert!(three_chain().is_isomorphism(&g, &[0, 1, 2]));

        let (b, _) = powerset_tba(&FinitePoset::antichain(2));
        assert_eq!(b.open_algebra().0.size(), 4);

        let (four, _) = heyting_from_poset(&FinitePoset::antichain(2));
        let id = FiniteTba::new(four.clone(), &[0, 1, 2, 3]).unwrap();
        let (g, incl) = id.open_algebra();
        assert_eq!(incl, vec![0, 1, 2, 3]);
        assert_eq!(g, four);
    }

    #[test]
    fn s_of_small_algebras() {
        let s = s_of(&three_chain());
        assert_eq!(s.tba.size(), 4);
        assert_eq!(s.tba.open_elements().len(), 3);

        let (two, _) = heyting_from_poset(&FinitePoset::chain(1));
        let s = s_of(&two);
        assert_eq!(s.tba.size(), 2);
        assert_eq!(s.tba.open_elements(), set(&[0, 1]));

        let (four, _) = heyting_from_poset(&FinitePoset::antichain(2));
        let s = s_of(&four);
        assert_eq!(s.tba.size(), 4);
        assert!((0..4).all(|a| s.tba.is_open(a)));
    }

    #[test]
    fn delta_rho_sigma_on_s_of_three_chain() {
        let s = s_of(&three_chain());
        let b = &s.tba;
        let (bot, heart, top) = (s.iota[0], s.iota[1], s.iota[2]);
        assert_eq!(b.open_elements(), set(&[bot, heart, top]));
        let g_filter = set(&[heart, top]);
        let lifted = b.rho_map(g_filter).unwrap();
        // {S | box S ⊇ the ♥ points}: only ♥ and 1 are above it
        assert_eq!(lifted, set(&[heart, top]));
        assert_eq!(b.delta_map(lifted).unwrap(), g_filter);
        assert_eq!(b.rho_map(set(&[bot, heart, top])).unwrap(), b.algebra().elements());
        assert_eq!(b.delta_map(set(&[top])).unwrap(), set(&[top]));
        let not_open = (0..4).find(|x| !b.is_open(*x)).unwrap();
        assert!(b.delta_map(set(&[not_open, top])).is_err());

        assert_eq!(b.sigma_map(set(&[bot, heart])).unwrap(), b.algebra().elements());
        assert_eq!(b.sigma_map(set(&[bot])).unwrap(), set(&[bot]));
        let sig = b.sigma_map(set(&[bot, not_open])).unwrap();
        assert_eq!(b.sigma_map(sig).unwrap(), sig);
        assert!(b.is_closed_ideal(sig));
    }

    #[test]
    fn open_filters_and_closed_ideals() {
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        assert_eq!(b.open_filters(), vec![set(&[3]), set(&[2, 3]), set(&[0, 1, 2, 3])]);
        assert!(b.closed_ideals().contains(&set(&[0])));
        for f in b.open_filters() {
            assert!(b.is_open_filter(f));
        }
    }

    #[test]
    fn grz_holds_on_powersets_of_posets() {
        let (b, _) = powerset_tba(&FinitePoset::chain(3));
        assert_eq!(b.size(), 8);
        assert_eq!(b.satisfies_grz(), Ok(()));
        let (four, _) = heyting_from_poset(&FinitePoset::antichain(2));
        let id = FiniteTba::new(four, &[0, 1, 2, 3]).unwrap();
        assert_eq!(id.satisfies_grz(), Ok(()));
    }

    #[test]
    fn json_round_trip() {
        let (b, _) = powerset_tba(&FinitePoset::chain(2));
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"box\""));
        assert_eq!(serde_json::from_str::<FiniteTba>(&s).unwrap(), b);
    }
}
