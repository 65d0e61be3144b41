//! Green's relations on the multipermutation monoid.
//!
//! In the monoid of all n×n boolean matrices, L and R are classified by
//! row- and column-space equality (Zaretskii). Inside M_n the divisors are
//! constrained to multipermutations and the right invariant is the
//! *bounded span*: the nonzero row-space vectors dominated by at least one
//! actual row. Two multipermutations are L-related iff their bounded row
//! spans coincide, R-related iff their bounded column spans coincide, and
//! H-related iff both. D is computed as the join of L and R.
//!
//! The [`GreenOracle`] decides the same relations by searching for explicit
//! multiplier pairs over a monoid table, with no span theory involved; it
//! exists so the two routes can be checked against each other.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::monoid::MonoidTable;
use crate::relcore::{col_mask, or_selected, Multipermutation, Relation};

/// All boolean sums of the rows of `alpha`, including the zero vector,
/// as sorted bit masks.
pub fn row_space(alpha: &Relation) -> Vec<u32> {
    let mut space = vec![0u32];
    for &r in alpha.row_masks() {
        let mut extra: Vec<u32> = space.iter().map(|v| v | r).collect();
        space.append(&mut extra);
        space.sort_unstable();
        space.dedup();
    }
    space
}

pub fn col_space(alpha: &Relation) -> Vec<u32> {
    row_space(&alpha.inverse())
}

/// Distinct rows, sorted.
pub fn row_set(alpha: &Relation) -> Vec<u32> {
    let mut rows = alpha.row_masks().to_vec();
    rows.sort_unstable();
    rows.dedup();
    rows
}

pub fn col_set(alpha: &Relation) -> Vec<u32> {
    row_set(&alpha.inverse())
}

/// The bounded row span: nonzero row-space vectors lying below some row.
pub fn bounded_row_span(alpha: &Relation) -> Vec<u32> {
    row_space(alpha)
        .into_iter()
        .filter(|&v| v != 0 && alpha.row_masks().iter().any(|&r| v & !r == 0))
        .collect()
}

pub fn bounded_col_span(alpha: &Relation) -> Vec<u32> {
    bounded_row_span(&alpha.inverse())
}

pub fn green_l(alpha: &Multipermutation, beta: &Multipermutation) -> bool {
    assert_eq!(alpha.n(), beta.n(), "dimension mismatch");
    bounded_row_span(alpha.rel()) == bounded_row_span(beta.rel())
}

pub fn green_r(alpha: &Multipermutation, beta: &Multipermutation) -> bool {
    assert_eq!(alpha.n(), beta.n(), "dimension mismatch");
    bounded_col_span(alpha.rel()) == bounded_col_span(beta.rel())
}

pub fn green_h(alpha: &Multipermutation, beta: &Multipermutation) -> bool {
    green_l(alpha, beta) && green_r(alpha, beta)
}

/// Multiplication-search oracle over a full monoid table.
///
/// For each element the sets of left multiples {ρ·α : ρ ∈ M_n} and right
/// multiples {α·ρ} are precomputed as bitsets over table indices; L, R, H
/// and D are then answered by divisibility both ways.
pub struct GreenOracle<'a> {
    table: &'a MonoidTable,
    left_multiples: Vec<BitSet>,
    right_multiples: Vec<BitSet>,
}

impl<'a> GreenOracle<'a> {
    pub fn new(table: &'a MonoidTable) -> Self {
        let k = table.len();
        let mut left_multiples: Vec<BitSet> = (0..k).map(|_| BitSet::new(k)).collect();
        let mut right_multiples: Vec<BitSet> = (0..k).map(|_| BitSet::new(k)).collect();
        let elems: Vec<Multipermutation> = table.iter().collect();
        for (ai, a) in elems.iter().enumerate() {
            for r in &elems {
                let left = table.index_of(&r.then(a)).expect("product escaped the monoid");
                left_multiples[ai].insert(left);
                let right = table.index_of(&a.then(r)).expect("product escaped the monoid");
                right_multiples[ai].insert(right);
            }
        }
        GreenOracle { table, left_multiples, right_multiples }
    }

    pub fn table(&self) -> &MonoidTable {
        self.table
    }

    /// ∃ρ: ρ·α = β and ∃δ: δ·β = α.
    pub fn l(&self, a: usize, b: usize) -> bool {
        self.left_multiples[a].contains(b) && self.left_multiples[b].contains(a)
    }

    pub fn r(&self, a: usize, b: usize) -> bool {
        self.right_multiples[a].contains(b) && self.right_multiples[b].contains(a)
    }

    pub fn h(&self, a: usize, b: usize) -> bool {
        self.l(a, b) && self.r(a, b)
    }

    /// ∃γ: α L γ and γ R β. Quadratic in the table size per query; the
    /// classified partitions are the efficient route for bulk work.
    pub fn d(&self, a: usize, b: usize) -> bool {
        (0..self.table.len()).any(|c| self.l(a, c) && self.r(c, b))
    }
}

/// L/R/H/D class ids per element of a monoid table, plus the classes
/// themselves. Ids number the classes in order of first appearance along
/// the canonical element order.
#[derive(Debug, Clone)]
pub struct GreenClassification {
    pub l_class: Vec<u32>,
    pub r_class: Vec<u32>,
    pub h_class: Vec<u32>,
    pub d_class: Vec<u32>,
}

impl GreenClassification {
    pub fn class_count(&self, rel: GreenRelation) -> usize {
        self.ids(rel).iter().map(|&c| c + 1).max().unwrap_or(0) as usize
    }

    pub fn ids(&self, rel: GreenRelation) -> &[u32] {
        match rel {
            GreenRelation::L => &self.l_class,
            GreenRelation::R => &self.r_class,
            GreenRelation::H => &self.h_class,
            GreenRelation::D => &self.d_class,
        }
    }

    /// Classes as sorted element-index lists, ordered by class id.
    pub fn classes(&self, rel: GreenRelation) -> Vec<Vec<usize>> {
        let ids = self.ids(rel);
        let mut classes = vec![Vec::new(); self.class_count(rel)];
        for (i, &c) in ids.iter().enumerate() {
            classes[c as usize].push(i);
        }
        classes
    }

    /// The full class of the element at `idx`.
    pub fn class_of(&self, rel: GreenRelation, idx: usize) -> Vec<usize> {
        let ids = self.ids(rel);
        let c = ids[idx];
        (0..ids.len()).filter(|&i| ids[i] == c).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRelation {
    L,
    R,
    H,
    D,
}

/// Classifies every element of the table by the span characterisation.
/// D-classes are the joins of the L- and R-partitions (D = L ∘ R in a
/// finite monoid), computed by union-find over shared class membership.
pub fn classify(table: &MonoidTable) -> GreenClassification {
    let k = table.len();
    let mut row_keys: Vec<Vec<u32>> = Vec::with_capacity(k);
    let mut col_keys: Vec<Vec<u32>> = Vec::with_capacity(k);
    for m in table.iter() {
        row_keys.push(bounded_row_span(m.rel()));
        col_keys.push(bounded_col_span(m.rel()));
    }
    let l_class = number_by_key(&row_keys);
    let r_class = number_by_key(&col_keys);
    let h_keys: Vec<(u32, u32)> = l_class.iter().zip(&r_class).map(|(&l, &r)| (l, r)).collect();
    let h_class = number_by_key(&h_keys);

    // Union-find: merge everything sharing an L-class, then an R-class.
    let mut parent: Vec<u32> = (0..k as u32).collect();
    fn find(parent: &mut [u32], i: u32) -> u32 {
        let mut i = i;
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    let mut first_of_l: Vec<Option<u32>> = vec![None; k];
    let mut first_of_r: Vec<Option<u32>> = vec![None; k];
    for i in 0..k as u32 {
        for (class, first) in [(l_class[i as usize], &mut first_of_l), (r_class[i as usize], &mut first_of_r)] {
            match first[class as usize] {
                None => first[class as usize] = Some(i),
                Some(j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a as usize] = b;
                    }
                }
            }
        }
    }
    let roots: Vec<u32> = (0..k as u32).map(|i| find(&mut parent, i)).collect();
    let d_class = number_by_key(&roots);

    GreenClassification { l_class, r_class, h_class, d_class }
}

/// Numbers elements by key, ids in order of first appearance.
fn number_by_key<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut map = alloc::collections::BTreeMap::new();
    let mut pending: Vec<(usize, K)> = keys.iter().cloned().enumerate().collect();
    pending.sort_by(|a, b| a.1.cmp(&b.1));
    let mut out = vec![0u32; keys.len()];
    for (i, k) in pending {
        let next = map.len() as u32;
        let id = *map.entry(k).or_insert(next);
        out[i] = id;
    }
    // Renumber in order of first appearance for deterministic, readable ids.
    let mut remap = vec![u32::MAX; map.len()];
    let mut next = 0;
    for &id in out.iter() {
        if remap[id as usize] == u32::MAX {
            remap[id as usize] = next;
            next += 1;
        }
    }
    for id in &mut out {
        *id = remap[*id as usize];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::DEFAULT_ENUM_CAP;

    fn mp(s: &str) -> Multipermutation {
        Multipermutation::parse(s).unwrap()
    }

    fn bits(strs: &[&str]) -> Vec<u32> {
        let mut v: Vec<u32> = strs
            .iter()
            .map(|s| crate::relcore::BoolVec::parse_bits(s).unwrap().bits())
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn row_space_examples() {
        assert_eq!(row_space(&Relation::identity(2)), bits(&["00", "10", "01", "11"]));
        assert_eq!(
            row_space(mp("2|23|1").rel()),
            bits(&["000", "010", "011", "100", "110", "111"])
        );
    }

    #[test]
    fn bounded_span_examples() {
        // The displayed L-pair shares its bounded row span.
        assert_eq!(bounded_row_span(mp("1|1|123").rel()), bits(&["100", "111"]));
        assert_eq!(bounded_row_span(mp("1|123|123").rel()), bits(&["100", "111"]));
        // L in B_n but not in M_n: equal row spaces, different bounded spans.
        let a = mp("1|23|123");
        let b = mp("1|23|23");
        assert_eq!(row_space(a.rel()), row_space(b.rel()));
        assert_eq!(bounded_row_span(a.rel()), bits(&["100", "011", "111"]));
        assert_eq!(bounded_row_span(b.rel()), bits(&["100", "011"]));
    }

    #[test]
    fn characterisation_examples() {
        assert!(green_l(&mp("1|1|123"), &mp("1|123|123")));
        assert!(green_r(&mp("1|123|123"), &mp("12|123|123")));
        assert!(!green_l(&mp("1|23|123"), &mp("1|23|23")));
        // Same bounded span despite different row sets (n = 5).
        let a = mp("13|1|3|24|135");
        let b = mp("1|3|24|24|135");
        assert!(green_l(&a, &b));
        assert_ne!(row_set(a.rel()), row_set(b.rel()));
    }

    #[test]
    fn oracle_reflexive_and_units() {
        let table = MonoidTable::enumerate(2, DEFAULT_ENUM_CAP).unwrap();
        let oracle = GreenOracle::new(&table);
        for i in 0..table.len() {
            assert!(oracle.h(i, i));
        }
        // The two permutations form a single H-class.
        let id = table.index_of(&Multipermutation::identity(2)).unwrap();
        let swap = table.index_of(&mp("2|1")).unwrap();
        assert!(oracle.h(id, swap));
        let cls = classify(&table);
        assert_eq!(cls.h_class[id], cls.h_class[swap]);
    }
}
