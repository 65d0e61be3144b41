//! Regular elements and semigroup inverses.
//!
//! An element a is regular when a·x·a = a for some x; such an x is an
//! inverse of a. For binary relations, Schein's test decides regularity in
//! B_n and produces the greatest inverse in closed form. Deciding whether a
//! multipermutation has an inverse *inside M_n* is stricter; this module
//! implements a variant of the Kim–Roush inverse construction for boolean
//! matrices specialised to multipermutations, the three-part criterion that
//! characterises when it yields a multipermutation, and brute-force
//! enumerations to compare against.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monoid::MonoidTable;
use crate::relcore::{mask_full, BoolVec, Multipermutation, Relation};

/// Schein's regularity test: ρ is regular in B_n iff
/// ρ ⊆ ρ · (ρ⁻¹ · ρᶜ · ρ⁻¹)ᶜ · ρ.
pub fn schein_regular(rho: &Relation) -> bool {
    let k = schein_kernel(rho);
    rho.is_sub_of(&rho.then(&k).then(rho))
}

/// (ρ⁻¹ · ρᶜ · ρ⁻¹)ᶜ. Every x with ρ·x·ρ = ρ satisfies x ⊆ this kernel:
/// an entry (a,b) of x outside it pairs with witnesses y, z such that
/// (y,a), (b,z) ∈ ρ but (y,z) ∉ ρ, putting (y,z) into ρ·x·ρ.
pub fn schein_kernel(rho: &Relation) -> Relation {
    let inv = rho.inverse();
    inv.then(&rho.complement()).then(&inv).complement()
}

/// The greatest inverse candidate: kernel · ρ · kernel. When ρ is regular
/// this relation satisfies ρ·x·ρ = ρ and contains every inverse of ρ.
pub fn greatest_inverse(rho: &Relation) -> Relation {
    let k = schein_kernel(rho);
    k.then(rho).then(&k)
}

/// All x below the greatest inverse with ρ·x·ρ = ρ, by subset enumeration
/// of the kernel-bounded candidate. Capped: the candidate may have up to
/// n² entries.
pub fn inverses_within_greatest(rho: &Relation) -> Result<Vec<Relation>> {
    let n = rho.n();
    let g = greatest_inverse(rho);
    let ones: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| g.row_masks()[i] >> j & 1 == 1)
        .collect();
    if ones.len() > 20 {
        return Err(Error::CapExceeded {
            what: "inverse enumeration below the greatest inverse",
            n: ones.len(),
            cap: 20,
            flag: None,
        });
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << ones.len()) {
        let mut rows = vec![0u32; n];
        for (b, &(i, j)) in ones.iter().enumerate() {
            if mask >> b & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let x = Relation::new(n, rows);
        if rho.then(&x).then(rho) == *rho {
            out.push(x);
        }
    }
    out.sort_by_key(|r| r.key());
    Ok(out)
}

/// The row set, its boolean-sum basis, and whether they coincide.
///
/// In the semilattice of boolean sums the basis is unique: it consists of
/// the rows that are not sums of strictly smaller rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowBasis {
    pub n: usize,
    /// Distinct rows, ascending.
    pub row_set: Vec<u32>,
    /// The independent spanning subset, ascending.
    pub basis: Vec<u32>,
}

impl RowBasis {
    pub fn basis_equals_row_set(&self) -> bool {
        self.basis == self.row_set
    }

    pub fn basis_vecs(&self) -> Vec<BoolVec> {
        self.basis.iter().map(|&b| BoolVec::new(self.n, b)).collect()
    }
}

pub fn row_basis(alpha: &Relation) -> RowBasis {
    let n = alpha.n();
    let row_set = crate::green::row_set(alpha);
    let basis: Vec<u32> = row_set
        .iter()
        .copied()
        .filter(|&r| {
            r != 0 && {
                let below = row_set
                    .iter()
                    .filter(|&&s| s != r && s & !r == 0)
                    .fold(0u32, |acc, &s| acc | s);
                below != r
            }
        })
        .collect();
    RowBasis { n, row_set, basis }
}

/// Identification vectors of a basis vector v: unit vectors u such that,
/// over basis vectors w, u ≤ w exactly when v ≤ w.
pub fn identification_vectors(alpha: &Relation, v: u32) -> Vec<u32> {
    let rb = row_basis(alpha);
    assert!(rb.basis.contains(&v), "v must be a basis vector");
    let n = alpha.n();
    (0..n)
        .map(|i| 1u32 << i)
        .filter(|&u| rb.basis.iter().all(|&w| (u & !w == 0) == (v & !w == 0)))
        .collect()
}

/// p(t) for a unit vector t: the greatest row-space element lying below
/// every row-space element that dominates t; zero when no nonzero one
/// exists. (The infimum, taken inside the row-space lattice.)
pub fn p_value(alpha: &Relation, t: u32) -> u32 {
    assert_eq!(t.count_ones(), 1, "t must have exactly one 1");
    let space = crate::green::row_space(alpha);
    let meet = space.iter().filter(|&&w| t & !w == 0).fold(mask_full(alpha.n()), |acc, &w| acc & w);
    // Greatest space element below the coordinatewise meet.
    alpha
        .row_masks()
        .iter()
        .filter(|&&r| r & !meet == 0)
        .fold(0u32, |acc, &r| acc | r)
}

/// Step-by-step record of one run of the inverse construction.
#[derive(Debug, Clone)]
pub struct KimRoushTrace {
    pub n: usize,
    /// Step 1: the row basis, and whether it equals the row set.
    pub basis: Vec<u32>,
    pub basis_equals_row_set: bool,
    /// Step 2: identification vectors per basis vector.
    pub identification: Vec<(u32, Vec<u32>)>,
    /// Step 3: the deterministic choice (least unit) per basis vector.
    pub chosen_u: Vec<(u32, u32)>,
    /// Step 4: selector candidates per basis vector. A selector s marks a
    /// set of rows all below v whose sum is exactly v; the selector itself
    /// becomes the row of the inverse at the position of the chosen u.
    pub s_candidates: Vec<(u32, Vec<u32>)>,
    /// Step 5: for each leftover unit position t: p(t) and the selector
    /// candidates (nonzero subsets of the rows below p(t)).
    pub t_entries: Vec<(u32, u32, Vec<u32>)>,
    /// Step 6: assembled candidates that survived the α·x·α = α filter and
    /// the multipermutation invariants.
    pub emitted: Vec<Multipermutation>,
}

/// All inverses of `alpha` in M_n reachable by the construction: explores
/// every identification-vector choice, every row selector summing to the
/// basis vector, and every nonzero selector below p(t) for the leftover
/// positions, then keeps the assemblies x that are multipermutations with
/// α·x·α = α.
pub fn kim_roush_inverses(alpha: &Multipermutation) -> (Vec<Multipermutation>, KimRoushTrace) {
    let n = alpha.n();
    let rel = alpha.rel();
    let rb = row_basis(rel);
    let mut trace = KimRoushTrace {
        n,
        basis: rb.basis.clone(),
        basis_equals_row_set: rb.basis_equals_row_set(),
        identification: Vec::new(),
        chosen_u: Vec::new(),
        s_candidates: Vec::new(),
        t_entries: Vec::new(),
        emitted: Vec::new(),
    };
    let mut i_sets: Vec<Vec<u32>> = Vec::new();
    for &v in &rb.basis {
        let i_v = identification_vectors(rel, v);
        trace.identification.push((v, i_v.clone()));
        if let Some(&u) = i_v.first() {
            trace.chosen_u.push((v, u));
        }
        i_sets.push(i_v);
    }
    let s_sets: Vec<Vec<u32>> = rb.basis.iter().map(|&v| selectors_summing_to(rel, v)).collect();
    for (&v, s) in rb.basis.iter().zip(&s_sets) {
        trace.s_candidates.push((v, s.clone()));
    }

    let mut results: Vec<Multipermutation> = Vec::new();
    if i_sets.iter().all(|s| !s.is_empty()) && s_sets.iter().all(|s| !s.is_empty()) {
        // Enumerate u-choices (identification sets are pairwise disjoint,
        // so chosen positions never collide).
        let mut u_choice = vec![0usize; rb.basis.len()];
        loop {
            let units: Vec<u32> = u_choice.iter().zip(&i_sets).map(|(&c, s)| s[c]).collect();
            let occupied: u32 = units.iter().fold(0, |a, &u| a | u);
            // Leftover unit positions and their row selectors.
            let ts: Vec<u32> = (0..n).map(|i| 1u32 << i).filter(|t| t & occupied == 0).collect();
            let t_selectors: Vec<Vec<u32>> = ts
                .iter()
                .map(|&t| {
                    let p = p_value(rel, t);
                    let max_b = selector_below(rel, p);
                    nonzero_subsets(max_b)
                })
                .collect();
            if trace.t_entries.is_empty() {
                for (&t, sels) in ts.iter().zip(&t_selectors) {
                    trace.t_entries.push((t, p_value(rel, t), sels.clone()));
                }
            }
            if t_selectors.iter().all(|s| !s.is_empty()) {
                assemble(
                    n,
                    rel,
                    &units,
                    &s_sets,
                    &ts,
                    &t_selectors,
                    &mut results,
                );
            }
            // Advance the mixed-radix u-choice counter.
            let mut k = 0;
            loop {
                if k == u_choice.len() {
                    break;
                }
                u_choice[k] += 1;
                if u_choice[k] < i_sets[k].len() {
                    break;
                }
                u_choice[k] = 0;
                k += 1;
            }
            if k == u_choice.len() {
                break;
            }
        }
    }
    results.sort();
    results.dedup();
    trace.emitted = results.clone();
    (results, trace)
}

/// The deterministic single-candidate variant: least identification vector
/// per basis vector, the maximal selector (all rows below v) per basis
/// vector, and the maximal selector below p(t) for every leftover t.
/// Returns the assembly if it is an inverse in M_n.
pub fn kim_roush_single(alpha: &Multipermutation) -> Option<Multipermutation> {
    let n = alpha.n();
    let rel = alpha.rel();
    let rb = row_basis(rel);
    let mut rows = vec![0u32; n];
    let mut occupied = 0u32;
    for &v in &rb.basis {
        let i_v = identification_vectors(rel, v);
        let &u = i_v.first()?;
        let s = selector_below(rel, v);
        // The maximal selector sums to v only when v itself is a row.
        if sum_of_selected(rel, s) != v {
            return None;
        }
        rows[u.trailing_zeros() as usize] = s;
        occupied |= u;
    }
    for i in 0..n {
        if occupied >> i & 1 == 1 {
            continue;
        }
        let p = p_value(rel, 1 << i);
        rows[i] = selector_below(rel, p);
    }
    let x = Multipermutation::new(Relation::new(n, rows)).ok()?;
    (rel.then(x.rel()).then(rel) == *rel).then_some(x)
}

/// Why the M_n inverse criterion failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionFailure {
    /// Some row is a sum of other rows.
    BasisNotRowSet,
    /// A basis vector has no identification vector.
    NoIdentificationVector(u32),
    /// A leftover unit position has p(t) = 0, forcing a zero row.
    ZeroPValue(u32),
}

impl core::fmt::Display for CriterionFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CriterionFailure::BasisNotRowSet => {
                f.write_str("row basis does not include all rows")
            }
            CriterionFailure::NoIdentificationVector(v) => {
                write!(f, "basis vector with mask {v:#b} has no identification vector")
            }
            CriterionFailure::ZeroPValue(t) => {
                write!(f, "unit position with mask {t:#b} has p(t) = 0")
            }
        }
    }
}

/// Outcome of the three-part criterion for having an inverse inside M_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseCriterion {
    pub has_inverse: bool,
    pub failure: Option<CriterionFailure>,
}

/// Decides whether `alpha` has an inverse in M_n without searching:
/// (1) the row basis must be the full row set, (2) every basis vector
/// needs an identification vector, and (3) every unit position left over
/// after placing the chosen identification vectors must have p(t) ≠ 0
/// (a zero p(t) forces a zero row in any constructed inverse).
pub fn has_inverse_in_mn(alpha: &Multipermutation) -> InverseCriterion {
    let rel = alpha.rel();
    let rb = row_basis(rel);
    if !rb.basis_equals_row_set() {
        return InverseCriterion {
            has_inverse: false,
            failure: Some(CriterionFailure::BasisNotRowSet),
        };
    }
    let mut occupied = 0u32;
    for &v in &rb.basis {
        let i_v = identification_vectors(rel, v);
        match i_v.first() {
            None => {
                return InverseCriterion {
                    has_inverse: false,
                    failure: Some(CriterionFailure::NoIdentificationVector(v)),
                }
            }
            Some(&u) => occupied |= u,
        }
    }
    for i in 0..alpha.n() {
        let t = 1u32 << i;
        if t & occupied == 0 && p_value(rel, t) == 0 {
            return InverseCriterion {
                has_inverse: false,
                failure: Some(CriterionFailure::ZeroPValue(t)),
            };
        }
    }
    InverseCriterion { has_inverse: true, failure: None }
}

/// All inverses of `alpha` within M_n found by scanning the monoid table.
pub fn brute_inverses(alpha: &Multipermutation, table: &MonoidTable) -> Vec<Multipermutation> {
    assert_eq!(alpha.n(), table.n(), "dimension mismatch");
    let rel = alpha.rel();
    let kernel = schein_kernel(rel);
    table
        .iter()
        .filter(|x| {
            // Any solution lies below the kernel; cheap prefilter.
            x.rel().is_sub_of(&kernel) && rel.then(x.rel()).then(rel) == *rel
        })
        .collect()
}

fn assemble(
    n: usize,
    rel: &Relation,
    units: &[u32],
    s_sets: &[Vec<u32>],
    ts: &[u32],
    t_selectors: &[Vec<u32>],
    results: &mut Vec<Multipermutation>,
) {
    // Mixed-radix enumeration over s choices and t-selector choices.
    let radices: Vec<usize> = s_sets.iter().map(|s| s.len()).chain(t_selectors.iter().map(|s| s.len())).collect();
    let mut counter = vec![0usize; radices.len()];
    loop {
        let mut rows = vec![0u32; n];
        for (k, &u) in units.iter().enumerate() {
            rows[u.trailing_zeros() as usize] = s_sets[k][counter[k]];
        }
        for (k, &t) in ts.iter().enumerate() {
            rows[t.trailing_zeros() as usize] = t_selectors[k][counter[s_sets.len() + k]];
        }
        let x = Relation::new(n, rows);
        if x.is_multipermutation() && rel.then(&x).then(rel) == *rel {
            results.push(Multipermutation::new(x).unwrap());
        }
        let mut k = 0;
        loop {
            if k == counter.len() {
                return;
            }
            counter[k] += 1;
            if counter[k] < radices[k] {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
        if k == counter.len() {
            return;
        }
    }
}

/// Selector marking every row below `bound` (s_i = 1 iff row i ≤ bound).
fn selector_below(rel: &Relation, bound: u32) -> u32 {
    let mut s = 0u32;
    for (i, &r) in rel.row_masks().iter().enumerate() {
        if r & !bound == 0 {
            s |= 1 << i;
        }
    }
    s
}

fn sum_of_selected(rel: &Relation, sel: u32) -> u32 {
    crate::relcore::or_selected(rel.row_masks(), sel)
}

/// All nonzero selectors of rows below v whose selected rows sum to v.
fn selectors_summing_to(rel: &Relation, v: u32) -> Vec<u32> {
    let max = selector_below(rel, v);
    nonzero_subsets(max)
        .into_iter()
        .filter(|&s| sum_of_selected(rel, s) == v)
        .collect()
}

fn nonzero_subsets(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{MonoidTable, DEFAULT_ENUM_CAP};

    fn mp(s: &str) -> Multipermutation {
        Multipermutation::parse(s).unwrap()
    }

    fn rel(s: &str) -> Relation {
        Relation::parse_pipe(s).unwrap()
    }

    fn bits(s: &str) -> u32 {
        BoolVec::parse_bits(s).unwrap().bits()
    }

    #[test]
    fn schein_examples() {
        assert!(schein_regular(&Relation::identity(4)));
        assert!(schein_regular(mp("12|3|123").rel()));
        assert!(schein_regular(mp("2|23|1").rel()));
    }

    #[test]
    fn greatest_inverse_of_permutation_is_transpose() {
        let p = mp("2|3|1");
        assert_eq!(greatest_inverse(p.rel()), p.rel().inverse());
    }

    #[test]
    fn greatest_inverse_contains_both_worked_inverses() {
        let g = greatest_inverse(mp("2|23|1").rel());
        assert!(rel("3|1|12").is_sub_of(&g));
        assert!(rel("3|1|2").is_sub_of(&g));
    }

    #[test]
    fn bounded_inverses_of_the_irregular_example() {
        // All inverses below the greatest one; none is a multipermutation.
        let a = mp("123|23|1");
        let inverses = inverses_within_greatest(a.rel()).unwrap();
        let expect = [rel("3|2|-"), rel("3|2|2"), rel("3|-|2")];
        assert_eq!(inverses.len(), 3);
        for e in &expect {
            assert!(inverses.contains(e));
        }
        assert!(inverses.iter().all(|x| !x.is_multipermutation()));
    }

    #[test]
    fn row_basis_examples() {
        let rb = row_basis(mp("2|23|1").rel());
        assert_eq!(rb.basis, vec![bits("100"), bits("010"), bits("011")]);
        assert!(rb.basis_equals_row_set());
        let rb = row_basis(mp("123|23|1").rel());
        assert!(!rb.basis_equals_row_set());
        assert_eq!(rb.basis, vec![bits("100"), bits("011")]);
        let rb = row_basis(&Relation::identity(3));
        assert_eq!(rb.basis.len(), 3);
        assert!(rb.basis_equals_row_set());
    }

    #[test]
    fn identification_vector_worked_example() {
        let a = mp("2|23|1");
        assert_eq!(identification_vectors(a.rel(), bits("010")), vec![bits("010")]);
        assert_eq!(identification_vectors(a.rel(), bits("011")), vec![bits("001")]);
        assert_eq!(identification_vectors(a.rel(), bits("100")), vec![bits("100")]);
    }

    #[test]
    fn p_value_example() {
        let a = mp("1|1|23");
        assert_eq!(p_value(a.rel(), bits("001")), bits("011"));
        // A position below no nonzero space element.
        let b = mp("12|3|123");
        // Row space of b: {0, 110, 001, 111}; t = 100 is dominated by 110
        // and 111, whose meet is 110; rows below 110: just 110.
        assert_eq!(p_value(b.rel(), bits("100")), bits("110"));
    }

    #[test]
    #[should_panic]
    fn p_value_rejects_non_units() {
        p_value(mp("1|1|23").rel(), bits("011"));
    }

    #[test]
    fn kim_roush_worked_example() {
        let a = mp("2|23|1");
        let (inverses, trace) = kim_roush_inverses(&a);
        assert_eq!(inverses, vec![mp("3|1|2"), mp("3|1|12")]);
        assert!(trace.basis_equals_row_set);
        assert!(trace.t_entries.is_empty(), "all unit positions are identification vectors");
        // The deterministic variant picks the maximal selector.
        assert_eq!(kim_roush_single(&a), Some(mp("3|1|12")));
    }

    #[test]
    fn kim_roush_on_identity() {
        let id = Multipermutation::identity(3);
        let (inverses, _) = kim_roush_inverses(&id);
        assert_eq!(inverses, vec![id.clone()]);
        assert_eq!(kim_roush_single(&id), Some(id));
    }

    #[test]
    fn kim_roush_finds_nothing_for_the_irregular_example() {
        let (inverses, _) = kim_roush_inverses(&mp("123|23|1"));
        assert!(inverses.is_empty());
    }

    #[test]
    fn criterion_examples() {
        assert!(has_inverse_in_mn(&mp("2|23|1")).has_inverse);
        let c = has_inverse_in_mn(&mp("12|3|123"));
        assert!(!c.has_inverse);
        assert_eq!(c.failure, Some(CriterionFailure::BasisNotRowSet));
        let c = has_inverse_in_mn(&mp("123|23|1"));
        assert!(!c.has_inverse);
        assert_eq!(c.failure, Some(CriterionFailure::BasisNotRowSet));
    }

    #[test]
    fn brute_force_matches_construction_on_worked_example() {
        let table = MonoidTable::enumerate(3, DEFAULT_ENUM_CAP).unwrap();
        let a = mp("2|23|1");
        let brute = brute_inverses(&a, &table);
        let (kr, _) = kim_roush_inverses(&a);
        assert_eq!(brute, kr);
        assert!(brute_inverses(&mp("12|3|123"), &table).is_empty());
        let p = mp("2|3|1");
        assert!(brute_inverses(&p, &table).contains(&p.inverse()));
    }
}
