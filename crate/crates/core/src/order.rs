//! Finite partial orders, their up-sets, and the duality with finite Heyting
//! algebras.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{ElemSet, MAX_ELEMS};
use crate::heyting::{sort_canonical, FiniteHeyting};
use crate::violation::Violation;

/// Posets handled by the enumerator have at most this many elements.
pub const MAX_ENUM_SIZE: usize = 8;

/// The on-disk form: explicit `le` pairs, optionally closed before checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub size: usize,
    pub le: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closure: bool,
}

/// A validated finite partial order on `0..size`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    n: usize,
    up: Vec<ElemSet>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strict: Vec<(usize, usize)> = self.strict_pairs().collect();
        write!(f, "Poset({}, {:?})", self.n, strict)
    }
}

/// Checks reflexivity, antisymmetry and transitivity of the relation as
/// given (after reflexive-transitive closure if `closure` is set).
pub fn validate_poset(spec: &PosetSpec) -> Result<(), Violation> {
    FinitePoset::from_spec(spec).map(|_| ())
}

impl FinitePoset {
    pub fn from_spec(spec: &PosetSpec) -> Result<FinitePoset, Violation> {
        let n = spec.size;
        if n == 0 || n > MAX_ELEMS {
            return Err(Violation::new(format!("size within 1..={MAX_ELEMS}"), &[n]));
        }
        let mut up = vec![ElemSet::EMPTY; n];
        for &[i, j] in &spec.le {
            if i >= n || j >= n {
                return Err(Violation::new("pair in range", &[i, j]));
            }
            up[i].insert(j);
        }
        if spec.closure {
            for (i, u) in up.iter_mut().enumerate() {
                u.insert(i);
            }
            // Warshall on bit rows
            for k in 0..n {
                for i in 0..n {
                    if up[i].contains(k) {
                        up[i] = up[i].union(up[k]);
                    }
                }
            }
        }
        Self::check(n, &up)?;
        Ok(FinitePoset { n, up })
    }

    fn check(n: usize, up: &[ElemSet]) -> Result<(), Violation> {
        for (i, u) in up.iter().enumerate() {
            if !u.contains(i) {
                return Err(Violation::new("reflexivity", &[i]));
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Violation::new("antisymmetry", &[i, j]));
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if let Some(k) = up[j].difference(up[i]).first() {
                    return Err(Violation::new("transitivity", &[i, j, k]));
                }
            }
        }
        Ok(())
    }

    /// From the sets `↑i`, which must describe a partial order.
    pub fn from_up_sets(up: Vec<ElemSet>) -> Result<FinitePoset, Violation> {
        let n = up.len();
        if n == 0 || n > MAX_ELEMS {
            return Err(Violation::new(format!("size within 1..={MAX_ELEMS}"), &[n]));
        }
        let full = ElemSet::full(n);
        if let Some(i) = up.iter().position(|u| !u.is_subset(full)) {
            return Err(Violation::new("pair in range", &[i]));
        }
        Self::check(n, &up)?;
        Ok(FinitePoset { n, up })
    }

    pub fn to_spec(&self) -> PosetSpec {
        let le = (0..self.n)
            .flat_map(|i| self.up[i].iter().map(move |j| [i, j]))
            .collect();
        PosetSpec {
            size: self.n,
            le,
            closure: false,
        }
    }

    /// `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> FinitePoset {
        let up = (0..n).map(|i| ElemSet::full(n).difference(ElemSet::full(i))).collect();
        FinitePoset { n, up }
    }

    pub fn antichain(n: usize) -> FinitePoset {
        FinitePoset {
            n,
            up: (0..n).map(ElemSet::singleton).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// `↑i`.
    pub fn above(&self, i: usize) -> ElemSet {
        self.up[i]
    }

    /// `↓i`.
    pub fn below(&self, i: usize) -> ElemSet {
        (0..self.n).filter(|&j| self.up[j].contains(i)).collect()
    }

    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.up[i].iter().filter(move |&j| j != i).map(move |j| (i, j)))
    }

    /// Maximal elements.
    pub fn maximal(&self) -> ElemSet {
        (0..self.n).filter(|&i| self.up[i].len() == 1).collect()
    }

    /// The relation as a bitmask with bit `i*n + j` set when `i <= j`.
    pub fn relation_mask(&self) -> u128 {
        let mut m = 0u128;
        for i in 0..self.n {
            for j in self.up[i].iter() {
                m |= 1u128 << (i * self.n + j);
            }
        }
        m
    }

    pub fn is_up_set(&self, s: ElemSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_down_set(&self, s: ElemSet) -> bool {
        (0..self.n)
            .filter(|&x| !s.contains(x))
            .all(|x| self.up[x].intersection(s).is_empty())
    }

    /// `{x | ↑x ⊆ s}`, the largest up-set inside `s`.
    pub fn interior(&self, s: ElemSet) -> ElemSet {
        (0..self.n).filter(|&x| self.up[x].is_subset(s)).collect()
    }

    /// `{x | ↑x meets s}`, the smallest down-set containing `s`.
    pub fn down_closure(&self, s: ElemSet) -> ElemSet {
        (0..self.n)
            .filter(|&x| !self.up[x].intersection(s).is_empty())
            .collect()
    }

    /// All up-closed subsets, sorted by (cardinality, bitmask).
    pub fn up_sets(&self) -> Vec<ElemSet> {
        let mut out = vec![ElemSet::EMPTY];
        // Extend by elements in an order where each element comes after
        // everything above it; then every up-set is built exactly once.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.up[i].len());
        for x in order {
            let above = self.up[x].difference(ElemSet::singleton(x));
            let extra: Vec<ElemSet> = out
                .iter()
                .filter(|u| above.is_subset(**u))
                .map(|u| u.union(ElemSet::singleton(x)))
                .collect();
            out.extend(extra);
        }
        sort_canonical(&mut out);
        out
    }

    /// Relabels by `perm`: element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FinitePoset {
        let mut up = vec![ElemSet::EMPTY; self.n];
        for i in 0..self.n {
            up[perm[i]] = self.up[i].iter().map(|j| perm[j]).collect();
        }
        FinitePoset { n: self.n, up }
    }

    /// Least relation mask over all relabellings; equal exactly for
    /// isomorphic posets.
    pub fn canonical_mask(&self) -> u128 {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = u128::MAX;
        permutations(&mut perm, 0, &mut |p| {
            best = best.min(self.permuted(p).relation_mask());
        });
        best
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

impl Serialize for FinitePoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinitePoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = PosetSpec::deserialize(d)?;
        FinitePoset::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

/// The algebra of up-sets of `p`, with each element's up-set.
///
/// Elements are numbered in [`FinitePoset::up_sets`] order, so the empty set
/// is `0` and the whole set is last.
pub fn heyting_from_poset(p: &FinitePoset) -> (FiniteHeyting, Vec<ElemSet>) {
    let ups = p.up_sets();
    let k = ups.len();
    assert!(k <= MAX_ELEMS, "poset has more than {MAX_ELEMS} up-sets");
    let index = |s: ElemSet| ups.binary_search_by_key(&(s.len(), s.0), |u| (u.len(), u.0));
    let idx = |s: ElemSet| index(s).expect("up-set") as u8;
    let (mut meet, mut join, mut imp) = (vec![0; k * k], vec![0; k * k], vec![0; k * k]);
    for (a, &u) in ups.iter().enumerate() {
        for (b, &v) in ups.iter().enumerate() {
            meet[a * k + b] = idx(u.intersection(v));
            join[a * k + b] = idx(u.union(v));
            // x is in u -> v iff every y above x that lies in u lies in v
            let bad = u.difference(v);
            let imp_set: ElemSet = (0..p.size())
                .filter(|&x| p.above(x).intersection(bad).is_empty())
                .collect();
            imp[a * k + b] = idx(imp_set);
        }
    }
    (FiniteHeyting::from_flat(k, 0, meet, join, imp), ups)
}

/// The join-irreducible elements of `h` ordered by reverse algebra order,
/// together with their indices in `h`.
///
/// With this orientation `a ↦ {j | j <= a}` maps `h` isomorphically onto the
/// up-sets of the returned poset.
pub fn join_irreducible_poset(h: &FiniteHeyting) -> (FinitePoset, Vec<usize>) {
    let ji: Vec<usize> = (0..h.size())
        .filter(|&a| {
            a != h.bot() && (0..h.size()).all(|b| (0..h.size()).all(|c| h.join(b, c) != a || b == a || c == a))
        })
        .collect();
    let up: Vec<ElemSet> = ji
        .iter()
        .map(|&j| (0..ji.len()).filter(|&t| h.leq(ji[t], j)).collect())
        .collect();
    if ji.is_empty() {
        // one-element algebra: no join-irreducibles
        return (FinitePoset { n: 0, up }, ji);
    }
    let poset = FinitePoset::from_up_sets(up).expect("reverse order is a partial order");
    (poset, ji)
}

/// The up-set of the join-irreducible poset representing `a`.
pub fn birkhoff_image(h: &FiniteHeyting, ji: &[usize], a: usize) -> ElemSet {
    (0..ji.len()).filter(|&t| h.leq(ji[t], a)).collect()
}

/// All labeled posets on exactly `n` points, sorted by relation bitmask.
pub fn posets_of_size(n: usize) -> Vec<FinitePoset> {
    assert!(
        n <= MAX_ENUM_SIZE,
        "enumeration supports at most {MAX_ENUM_SIZE} points"
    );
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![FinitePoset::chain(1)];
    for m in 1..n {
        let mut next = Vec::new();
        for p in &level {
            extend_by_one(p, m, &mut next);
        }
        level = next;
    }
    level.sort_by_key(|p| p.relation_mask());
    level
}

// Adds point `m` with a down-set D below it and an up-set U above it.
fn extend_by_one(p: &FinitePoset, m: usize, out: &mut Vec<FinitePoset>) {
    let ups = p.up_sets();
    let downs: Vec<ElemSet> = ups.iter().map(|u| ElemSet::full(m).difference(*u)).collect();
    for &d in &downs {
        for &u in &ups {
            if !d.intersection(u).is_empty() {
                continue;
            }
            if !d.iter().all(|x| u.is_subset(p.up[x])) {
                continue;
            }
            let mut up: Vec<ElemSet> = p.up.clone();
            for x in d.iter() {
                up[x].insert(m);
            }
            let mut own = u;
            own.insert(m);
            up.push(own);
            out.push(FinitePoset { n: m + 1, up });
        }
    }
}

/// All labeled posets with `1..=max_n` points: by size, then by relation
/// bitmask.
pub fn enumerate_posets(max_n: usize) -> Vec<FinitePoset> {
    (1..=max_n).flat_map(posets_of_size).collect()
}

/// One representative per isomorphism class, keeping the first labeled
/// poset of each class in [`enumerate_posets`] order.
pub fn enumerate_unlabeled(max_n: usize) -> Vec<FinitePoset> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut seen = std::collections::HashSet::new();
        for p in posets_of_size(n) {
            if seen.insert(p.canonical_mask()) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, le: &[[usize; 2]]) -> PosetSpec {
        PosetSpec {
            size: n,
            le: le.to_vec(),
            closure: false,
        }
    }

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    #[test]
    fn validation_reports_the_failing_law() {
        assert!(validate_poset(&spec(2, &[[0, 0], [1, 1], [0, 1]])).is_ok());
        let v = validate_poset(&spec(2, &[[0, 0], [1, 1], [0, 1], [1, 0]])).unwrap_err();
        assert_eq!(v.law, "antisymmetry");
        assert_eq!(v.elements, vec![0, 1]);
        let v = validate_poset(&spec(2, &[[1, 1], [0, 1]])).unwrap_err();
        assert_eq!(v.law, "reflexivity");
        let v = validate_poset(&spec(3, &[[0, 0], [1, 1], [2, 2], [0, 1], [1, 2]])).unwrap_err();
        assert_eq!(v.law, "transitivity");
        assert_eq!(v.elements, vec![0, 1, 2]);
    }

    #[test]
    fn closure_flag_completes_the_relation() {
        let mut s = spec(3, &[[0, 1], [1, 2]]);
        s.closure = true;
        let p = FinitePoset::from_spec(&s).unwrap();
        assert_eq!(p, FinitePoset::chain(3));
    }

    #[test]
    fn up_sets_of_small_posets() {
        assert_eq!(FinitePoset::chain(2).up_sets(), vec![set(&[]), set(&[1]), set(&[0, 1])]);
        assert_eq!(FinitePoset::antichain(2).up_sets().len(), 4);
        assert_eq!(FinitePoset::chain(1).up_sets(), vec![set(&[]), set(&[0])]);
    }

    #[test]
    fn heyting_from_small_posets() {
        let (h, _) = heyting_from_poset(&FinitePoset::chain(2));
        assert_eq!(h.size(), 3);
        assert_eq!((h.bot(), h.top()), (0, 2));
        assert!(h.leq(1, 2) && h.leq(0, 1));
        assert_eq!(h.imp(1, 0), 0);
        let (b, _) = heyting_from_poset(&FinitePoset::antichain(2));
        assert_eq!(b.size(), 4);
        assert!(b.is_boolean());
        let (two, _) = heyting_from_poset(&FinitePoset::chain(1));
        assert_eq!(two.size(), 2);
        assert!(two.is_boolean());
    }

    #[test]
    fn join_irreducibles() {
        let (h, _) = heyting_from_poset(&FinitePoset::chain(2));
        let (p, ji) = join_irreducible_poset(&h);
        assert_eq!(ji, vec![1, 2]);
        assert_eq!(p.size(), 2);
        // ♥ is below 1 in the algebra, so above it in the dual
        assert!(p.leq(1, 0) && !p.leq(0, 1));
        let (b, _) = heyting_from_poset(&FinitePoset::antichain(2));
        let (q, _) = join_irreducible_poset(&b);
        assert_eq!(q, FinitePoset::antichain(2));
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| posets_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 19, 219, 4231]);
        let unlabeled: Vec<usize> = (1..=5).map(|n| enumerate_unlabeled(n).len()).collect();
        assert_eq!(unlabeled, vec![1, 3, 8, 24, 87]);
        assert_eq!(enumerate_posets(1).len(), 1);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let ps = posets_of_size(4);
        for w in ps.windows(2) {
            assert!(w[0].relation_mask() < w[1].relation_mask());
        }
    }

    #[test]
    fn json_round_trip() {
        let p = FinitePoset::chain(3);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<FinitePoset>(&s).unwrap(), p);
    }
}
