//! Finite Heyting algebras given by operation tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{ElemSet, MAX_ELEMS};
use crate::violation::Violation;

/// Raw operation tables, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeytingTables {
    pub size: usize,
    pub bot: usize,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("{0:?} is not an ideal")]
    NotAnIdeal(ElemSet),
    #[error("{0:?} is not a filter")]
    NotAFilter(ElemSet),
}

/// A validated finite Heyting algebra on the indices `0..size`.
///
/// `bot` and `top` are stored indices and need not be `0` and `size - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHeyting {
    n: usize,
    bot: usize,
    top: usize,
    meet: Vec<u8>,
    join: Vec<u8>,
    imp: Vec<u8>,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    labels: Option<Vec<String>>,
}

fn flatten(n: usize, name: &str, t: &[Vec<usize>]) -> Result<Vec<u8>, Violation> {
    if t.len() != n || t.iter().any(|row| row.len() != n) {
        return Err(Violation::new(format!("{name} table is not {n}x{n}"), &[]));
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, row) in t.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Violation::new(format!("{name} entry in range"), &[i, j, v]));
            }
            out.push(v as u8);
        }
    }
    Ok(out)
}

/// Checks lattice laws, least element, distributivity and residuation.
pub fn validate_heyting(t: &HeytingTables) -> Result<(), Violation> {
    FiniteHeyting::from_tables(t).map(|_| ())
}

impl FiniteHeyting {
    pub fn from_tables(t: &HeytingTables) -> Result<FiniteHeyting, Violation> {
        let n = t.size;
        if n == 0 || n > MAX_ELEMS {
            return Err(Violation::new(format!("size within 1..={MAX_ELEMS}"), &[n]));
        }
        if t.bot >= n {
            return Err(Violation::new("bot index in range", &[t.bot]));
        }
        if let Some(l) = &t.labels {
            if l.len() != n {
                return Err(Violation::new("one label per element", &[l.len()]));
            }
        }
        let meet = flatten(n, "meet", &t.meet)?;
        let join = flatten(n, "join", &t.join)?;
        let imp = flatten(n, "imp", &t.imp)?;
        let h = Self::build(n, t.bot, meet, join, imp, t.labels.clone())?;
        h.check_laws()?;
        Ok(h)
    }

    /// Builds from flat row-major tables known to be lawful.
    pub(crate) fn from_flat(n: usize, bot: usize, meet: Vec<u8>, join: Vec<u8>, imp: Vec<u8>) -> FiniteHeyting {
        let h = Self::build(n, bot, meet, join, imp, None).expect("lawful tables");
        debug_assert_eq!(h.check_laws(), Ok(()));
        h
    }

    fn build(
        n: usize,
        bot: usize,
        meet: Vec<u8>,
        join: Vec<u8>,
        imp: Vec<u8>,
        labels: Option<Vec<String>>,
    ) -> Result<FiniteHeyting, Violation> {
        let mut up = vec![ElemSet::EMPTY; n];
        let mut down = vec![ElemSet::EMPTY; n];
        for a in 0..n {
            for b in 0..n {
                if meet[a * n + b] as usize == a {
                    up[a].insert(b);
                    down[b].insert(a);
                }
            }
        }
        let full = ElemSet::full(n);
        let top = (0..n)
            .find(|&t| down[t] == full)
            .ok_or_else(|| Violation::new("existence of a greatest element", &[]))?;
        Ok(FiniteHeyting {
            n,
            bot,
            top,
            meet,
            join,
            imp,
            up,
            down,
            labels,
        })
    }

    fn check_laws(&self) -> Result<(), Violation> {
        let n = self.n;
        let r = 0..n;
        let (m, j) = (|a, b| self.meet(a, b), |a, b| self.join(a, b));
        for a in r.clone() {
            if m(a, a) != a {
                return Err(Violation::new("meet idempotence", &[a]));
            }
            if j(a, a) != a {
                return Err(Violation::new("join idempotence", &[a]));
            }
            if m(self.bot, a) != self.bot {
                return Err(Violation::new("bot is least", &[a]));
            }
        }
        for a in r.clone() {
            for b in r.clone() {
                if m(a, b) != m(b, a) {
                    return Err(Violation::new("meet commutativity", &[a, b]));
                }
                if j(a, b) != j(b, a) {
                    return Err(Violation::new("join commutativity", &[a, b]));
                }
                if m(a, j(a, b)) != a {
                    return Err(Violation::new("absorption a & (a | b) = a", &[a, b]));
                }
                if j(a, m(a, b)) != a {
                    return Err(Violation::new("absorption a | (a & b) = a", &[a, b]));
                }
            }
        }
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    if m(a, m(b, c)) != m(m(a, b), c) {
                        return Err(Violation::new("meet associativity", &[a, b, c]));
                    }
                    if j(a, j(b, c)) != j(j(a, b), c) {
                        return Err(Violation::new("join associativity", &[a, b, c]));
                    }
                }
            }
        }
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    if m(a, j(b, c)) != j(m(a, b), m(a, c)) {
                        return Err(Violation::new("distributivity", &[a, b, c]));
                    }
                    if self.leq(m(a, b), c) != self.leq(a, self.imp(b, c)) {
                        return Err(Violation::new("residuation", &[a, b, c]));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_tables(&self) -> HeytingTables {
        let table = |t: &[u8]| {
            (0..self.n)
                .map(|a| (0..self.n).map(|b| t[a * self.n + b] as usize).collect())
                .collect()
        };
        HeytingTables {
            size: self.n,
            bot: self.bot,
            meet: table(&self.meet),
            join: table(&self.join),
            imp: table(&self.imp),
            labels: self.labels.clone(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteHeyting {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    /// Display name of an element: its label, or its index.
    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    #[inline]
    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.bot)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{b | a <= b}`.
    pub fn principal_filter(&self, a: usize) -> ElemSet {
        self.up[a]
    }

    /// `{b | b <= a}`.
    pub fn principal_ideal(&self, a: usize) -> ElemSet {
        self.down[a]
    }

    pub fn meet_all(&self, s: ElemSet) -> usize {
        s.iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, s: ElemSet) -> usize {
        s.iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// Smallest up-closed superset.
    pub fn up_closure(&self, s: ElemSet) -> ElemSet {
        s.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(self.up[x]))
    }

    /// Smallest down-closed superset.
    pub fn down_closure(&self, s: ElemSet) -> ElemSet {
        s.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    pub fn is_filter(&self, s: ElemSet) -> bool {
        !s.is_empty() && self.up_closure(s) == s && s.iter().all(|a| s.iter().all(|b| s.contains(self.meet(a, b))))
    }

    pub fn is_ideal(&self, s: ElemSet) -> bool {
        !s.is_empty() && self.down_closure(s) == s && s.iter().all(|a| s.iter().all(|b| s.contains(self.join(a, b))))
    }

    /// Elements with `!a = bot`.
    ///
    /// Panics if the equivalent descriptions `!!a = 1` and
    /// `a = b | !b for some b` disagree, which would mean a broken table.
    pub fn dense_filter(&self) -> ElemSet {
        let by_neg: ElemSet = (0..self.n).filter(|&a| self.neg(a) == self.bot).collect();
        let by_double: ElemSet = (0..self.n).filter(|&a| self.neg(self.neg(a)) == self.top).collect();
        let by_excluded_middle: ElemSet = (0..self.n).map(|b| self.join(b, self.neg(b))).collect();
        assert_eq!(by_neg, by_double, "dense characterizations disagree");
        assert_eq!(by_neg, by_excluded_middle, "dense characterizations disagree");
        by_neg
    }

    /// All filters (each `↑a`), optionally only those containing every dense
    /// element. Sorted by (cardinality, bitmask).
    pub fn filters(&self, require_dense: bool) -> Vec<ElemSet> {
        let dense_meet = if require_dense {
            self.meet_all(self.dense_filter())
        } else {
            self.top
        };
        let mut out: Vec<ElemSet> = (0..self.n)
            .filter(|&a| self.leq(a, dense_meet))
            .map(|a| self.up[a])
            .collect();
        sort_canonical(&mut out);
        out
    }

    /// All ideals (each `↓a`), sorted by (cardinality, bitmask).
    pub fn ideals(&self) -> Vec<ElemSet> {
        let mut out = self.down.clone();
        sort_canonical(&mut out);
        out
    }

    /// Whether the ideal is closed under double negation.
    pub fn is_closed_ideal(&self, delta: ElemSet) -> Result<bool, SubsetError> {
        if !self.is_ideal(delta) {
            return Err(SubsetError::NotAnIdeal(delta));
        }
        Ok(delta.iter().all(|a| delta.contains(self.neg(self.neg(a)))))
    }

    /// Least closed ideal containing `delta`.
    pub fn closure_n(&self, delta: ElemSet) -> Result<ElemSet, SubsetError> {
        if !self.is_ideal(delta) {
            return Err(SubsetError::NotAnIdeal(delta));
        }
        let nn: ElemSet = delta.iter().map(|b| self.neg(self.neg(b))).collect();
        Ok(self.down_closure(nn))
    }

    /// Both `a | !a = 1` for all `a` and `dense = {1}`; panics if they differ.
    pub fn is_boolean(&self) -> bool {
        let lem = (0..self.n).all(|a| self.join(a, self.neg(a)) == self.top);
        let dense = self.dense_filter() == ElemSet::singleton(self.top);
        assert_eq!(lem, dense, "Boolean characterizations disagree");
        lem
    }

    /// The subalgebra on `elems`, relabelled densely in increasing index
    /// order, with its embedding. `None` unless `elems` contains bot and is
    /// closed under meet, join and implication.
    pub fn subalgebra(&self, elems: ElemSet) -> Option<(FiniteHeyting, Vec<usize>)> {
        if !elems.contains(self.bot) {
            return None;
        }
        let emb = elems.to_vec();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &e) in emb.iter().enumerate() {
            pos[e] = i;
        }
        let k = emb.len();
        let (mut meet, mut join, mut imp) = (vec![0; k * k], vec![0; k * k], vec![0; k * k]);
        for (i, &a) in emb.iter().enumerate() {
            for (j, &b) in emb.iter().enumerate() {
                for (t, v) in [
                    (&mut meet, self.meet(a, b)),
                    (&mut join, self.join(a, b)),
                    (&mut imp, self.imp(a, b)),
                ] {
                    if pos[v] == usize::MAX {
                        return None;
                    }
                    t[i * k + j] = pos[v] as u8;
                }
            }
        }
        let sub = FiniteHeyting::from_flat(k, pos[self.bot], meet, join, imp);
        let sub = match &self.labels {
            Some(l) => sub.with_labels(emb.iter().map(|&e| l[e].clone()).collect()),
            None => sub,
        };
        Some((sub, emb))
    }

    /// Whether `map` (indexed by elements of `self`) is a bijective
    /// homomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteHeyting, map: &[usize]) -> bool {
        if map.len() != self.n || other.n != self.n {
            return false;
        }
        let image: ElemSet = map.iter().copied().collect();
        if image != ElemSet::full(self.n) || map[self.bot] != other.bot {
            return false;
        }
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                map[self.meet(a, b)] == other.meet(map[a], map[b])
                    && map[self.join(a, b)] == other.join(map[a], map[b])
                    && map[self.imp(a, b)] == other.imp(map[a], map[b])
            })
        })
    }
}

/// Sorts subsets by (cardinality, bitmask).
pub fn sort_canonical(v: &mut [ElemSet]) {
    v.sort_by_key(|s| (s.len(), s.0));
}

impl Serialize for FiniteHeyting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_tables().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteHeyting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = HeytingTables::deserialize(d)?;
        FiniteHeyting::from_tables(&t).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Linear order 0 < 1 < .. < n-1 with Goedel implication.
    fn chain_tables(n: usize) -> HeytingTables {
        let t = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
        };
        HeytingTables {
            size: n,
            bot: 0,
            meet: t(&|a, b| a.min(b)),
            join: t(&|a, b| a.max(b)),
            imp: t(&|a, b| if a <= b { n - 1 } else { b }),
            labels: None,
        }
    }

    fn chain(n: usize) -> FiniteHeyting {
        FiniteHeyting::from_tables(&chain_tables(n)).unwrap()
    }

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    #[test]
    fn broken_implication_is_reported() {
        let mut t = chain_tables(3);
        t.imp[1][0] = 1;
        let v = validate_heyting(&t).unwrap_err();
        assert_eq!(v.law, "residuation");
        assert_eq!(v.elements, vec![1, 1, 0]);
    }

    #[test]
    fn one_element_algebra() {
        let h = chain(1);
        assert_eq!(h.top(), h.bot());
        assert_eq!(h.dense_filter(), set(&[0]));
        assert!(h.is_boolean());
    }

    #[test]
    fn three_chain_negation_and_density() {
        let h = chain(3);
        assert_eq!(h.neg(1), 0);
        assert_eq!(h.neg(0), 2);
        assert_eq!(h.neg(h.neg(1)), 2);
        assert_eq!(h.dense_filter(), set(&[1, 2]));
        assert!(!h.is_boolean());
        assert!(chain(2).is_boolean());
    }

    #[test]
    fn filters_and_ideals_of_the_three_chain() {
        let h = chain(3);
        assert_eq!(h.filters(true), vec![set(&[1, 2]), set(&[0, 1, 2])]);
        assert_eq!(h.filters(false).len(), 3);
        assert_eq!(h.ideals(), vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 2])]);
        assert_eq!(chain(2).filters(false), vec![set(&[1]), set(&[0, 1])]);
    }

    #[test]
    fn closed_ideals_and_closure() {
        let h = chain(3);
        assert_eq!(h.is_closed_ideal(set(&[0])), Ok(true));
        assert_eq!(h.is_closed_ideal(set(&[0, 1])), Ok(false));
        assert_eq!(h.is_closed_ideal(set(&[0, 1, 2])), Ok(true));
        assert_eq!(h.closure_n(set(&[0, 1])), Ok(set(&[0, 1, 2])));
        assert_eq!(h.closure_n(set(&[0])), Ok(set(&[0])));
        assert!(h.closure_n(set(&[1])).is_err());
        assert!(h.is_closed_ideal(set(&[2])).is_err());
    }

    #[test]
    fn subalgebra_and_isomorphism() {
        let h = chain(4);
        let (sub, emb) = h.subalgebra(set(&[0, 2, 3])).unwrap();
        assert_eq!(emb, vec![0, 2, 3]);
        assert!(sub.is_isomorphism(&chain(3), &[0, 1, 2]));
        assert!(!sub.is_isomorphism(&chain(3), &[0, 2, 1]));
        // {0, 1} misses the top, which is 1 -> 1
        assert!(h.subalgebra(set(&[0, 1])).is_none());
    }

    #[test]
    fn json_round_trip() {
        let h = chain(3);
        let s = serde_json::to_string(&h).unwrap();
        let back: FiniteHeyting = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
