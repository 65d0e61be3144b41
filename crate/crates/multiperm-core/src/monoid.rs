//! The monoid M_n of all multipermutations on `[n]`: enumeration, closure
//! of generating sets, generating-set verification, and prime elements.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::relcore::{col_mask, mask_full, or_selected, pack_key, Multipermutation, Permutation, Relation};

/// Largest domain for which the full monoid is enumerated by default.
pub const DEFAULT_ENUM_CAP: usize = 5;
/// Largest domain for which primality is decided (residual method).
pub const PRIME_CAP: usize = 4;

/// All multipermutations on `[n]`, as packed keys in ascending canonical
/// order. Elements are materialised on demand.
#[derive(Debug, Clone)]
pub struct MonoidTable {
    n: usize,
    keys: Vec<u64>,
}

impl MonoidTable {
    /// Enumerates M_n by scanning all nonzero-row matrices and keeping the
    /// column-covering ones. `cap` limits the domain size; pass
    /// [`DEFAULT_ENUM_CAP`] unless the caller deliberately raised it.
    pub fn enumerate(n: usize, cap: usize) -> Result<MonoidTable> {
        if n > cap {
            return Err(Error::CapExceeded {
                what: "monoid enumeration",
                n,
                cap,
                flag: Some("--n-cap"),
            });
        }
        if n == 0 || n > 7 {
            return Err(Error::Invalid(alloc::format!(
                "monoid enumeration supports 1 <= n <= 7, got {n}"
            )));
        }
        let full = mask_full(n);
        let mut keys = Vec::with_capacity(Self::count_closed_form(n) as usize);
        let mut rows = vec![0u32; n];
        // Row 0 varies in the outermost position so keys come out ascending.
        fn rec(n: usize, full: u32, i: usize, covered: u32, rows: &mut [u32], keys: &mut Vec<u64>) {
            if i == n {
                if covered == full {
                    keys.push(pack_key(n, rows));
                }
                return;
            }
            for r in 1..=full {
                rows[i] = r;
                rec(n, full, i + 1, covered | r, rows, keys);
            }
        }
        rec(n, full, 0, 0, &mut rows, &mut keys);
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        Ok(MonoidTable { n, keys })
    }

    /// |M_n| by inclusion–exclusion over forced-zero columns:
    /// sum over j of (-1)^j C(n,j) (2^(n-j) - 1)^n.
    pub fn count_closed_form(n: usize) -> u64 {
        assert!((1..=11).contains(&n));
        let mut total: i128 = 0;
        let mut binom: i128 = 1;
        for j in 0..=n {
            let rows = (1i128 << (n - j)) - 1;
            let term = binom * rows.pow(n as u32);
            total += if j % 2 == 0 { term } else { -term };
            binom = binom * (n - j) as i128 / (j + 1) as i128;
        }
        total as u64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn get(&self, i: usize) -> Multipermutation {
        Multipermutation::from_key(self.n, self.keys[i])
    }

    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    pub fn index_of(&self, m: &Multipermutation) -> Option<usize> {
        debug_assert_eq!(m.n(), self.n);
        self.index_of_key(m.key())
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&Multipermutation::identity(self.n)).unwrap()
    }

    pub fn iter(&self) -> impl Iterator<Item = Multipermutation> + '_ {
        self.keys.iter().map(move |&k| Multipermutation::from_key(self.n, k))
    }

    /// Rebuilds a table from externally loaded keys (cache path); validates
    /// every element and the ordering.
    pub fn from_keys(n: usize, keys: Vec<u64>) -> Result<MonoidTable> {
        if !keys.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("monoid table keys not strictly ascending".into()));
        }
        for &k in &keys {
            let rel = Relation::from_key(n, k);
            if !rel.is_multipermutation() {
                return Err(Error::Invalid(alloc::format!(
                    "table entry {rel} is not a multipermutation"
                )));
            }
        }
        if keys.len() as u64 != Self::count_closed_form(n) {
            return Err(Error::Invalid("monoid table has wrong cardinality".into()));
        }
        Ok(MonoidTable { n, keys })
    }
}

/// The submonoid generated by `gens`: the least set containing the identity
/// and the generators that is closed under composition. Worklist over the
/// right Cayley graph; every word in the generators is reached through its
/// prefixes.
pub fn closure(n: usize, gens: &[Multipermutation]) -> Vec<Multipermutation> {
    for g in gens {
        assert_eq!(g.n(), n, "generator dimension mismatch");
    }
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut queue: Vec<Multipermutation> = Vec::new();
    let mut push = |m: Multipermutation, queue: &mut Vec<Multipermutation>, seen: &mut BTreeSet<u64>| {
        if seen.insert(m.key()) {
            queue.push(m);
        }
    };
    push(Multipermutation::identity(n), &mut queue, &mut seen);
    for g in gens {
        push(g.clone(), &mut queue, &mut seen);
    }
    while let Some(x) = queue.pop() {
        for g in gens {
            push(x.then(g), &mut queue, &mut seen);
        }
    }
    seen.into_iter().map(|k| Multipermutation::from_key(n, k)).collect()
}

/// Result of a generating-set test: either the set generates all of M_n or
/// a witness element outside the generated submonoid.
#[derive(Debug, Clone)]
pub struct GeneratingSetCheck {
    pub generates: bool,
    pub generated_size: usize,
    pub monoid_size: usize,
    pub missing: Option<Multipermutation>,
}

pub fn is_generating_set(table: &MonoidTable, gens: &[Multipermutation]) -> GeneratingSetCheck {
    let generated = closure(table.n(), gens);
    if generated.len() == table.len() {
        return GeneratingSetCheck {
            generates: true,
            generated_size: generated.len(),
            monoid_size: table.len(),
            missing: None,
        };
    }
    let have: BTreeSet<u64> = generated.iter().map(|m| m.key()).collect();
    let missing = table
        .keys()
        .iter()
        .find(|k| !have.contains(k))
        .map(|&k| Multipermutation::from_key(table.n(), k));
    GeneratingSetCheck {
        generates: false,
        generated_size: generated.len(),
        monoid_size: table.len(),
        missing,
    }
}

/// Primality of a relation inside the monoid of all n×n boolean matrices:
/// `alpha` is prime if it is not a permutation and every factorisation
/// `alpha = b·c` has a permutation factor.
///
/// Search: for every non-permutation left factor `b`, the largest `c` with
/// `b·c ⊆ alpha` is the residual `c*` with `c*(j,k) = 1` iff column j of
/// `b` is contained in column k of `alpha`; any solution `c` satisfies
/// `c ⊆ c*`, so `b·c = alpha` is solvable iff `b·c* = alpha`. If `c*` is a
/// permutation no proper subrelation of it can reach `alpha` (dropping an
/// entry of a permutation zeroes a column of the product, and `alpha` has
/// none), so `alpha` is non-prime iff some non-permutation `b` has
/// `b·c* = alpha` with `c*` not a permutation.
pub fn is_prime_relation(alpha: &Relation) -> Result<bool> {
    let n = alpha.n();
    if n > PRIME_CAP {
        return Err(Error::CapExceeded { what: "prime test", n, cap: PRIME_CAP, flag: None });
    }
    if alpha.is_permutation() {
        return Ok(false);
    }
    // dom[c] = bitmask over k of "column mask c is contained in column k of alpha".
    let acols: Vec<u32> = (0..n).map(|k| col_mask(alpha.row_masks(), k)).collect();
    let full_rows = mask_full(n);
    let dom: Vec<u32> = (0..=full_rows)
        .map(|c| {
            let mut m = 0u32;
            for (k, &ac) in acols.iter().enumerate() {
                if c & !ac == 0 {
                    m |= 1 << k;
                }
            }
            m
        })
        .collect();

    let witnesses = |brows: &[u32]| -> bool {
        let mut crows = [0u32; 8];
        for j in 0..n {
            crows[j] = dom[col_mask(brows, j) as usize];
        }
        for i in 0..n {
            if or_selected(&crows[..n], brows[i]) != alpha.row_masks()[i] {
                return false;
            }
        }
        // The residual reached alpha; it witnesses non-primality unless it
        // is a permutation.
        !is_perm_rows(n, &crows[..n])
    };

    // Cheap candidates first: identity plus one extra entry catches any
    // row containment (alpha = b·alpha), and alpha itself as the left
    // factor catches any column containment (alpha = alpha·c).
    let mut brows = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (k, r) in brows.iter_mut().enumerate() {
                *r = 1 << k;
            }
            brows[i] |= 1 << j;
            if witnesses(&brows) {
                return Ok(false);
            }
        }
    }
    if witnesses(alpha.row_masks()) {
        return Ok(false);
    }

    // Exhaustive scan over left factors with no zero row (a zero row of b
    // forces a zero row in the product).
    let total = 1u64 << (n * n);
    let mut rows = vec![0u32; n];
    let mut key = 0u64;
    while key < total {
        for (i, r) in rows.iter_mut().enumerate() {
            *r = (key >> ((n - 1 - i) * n) & full_rows as u64) as u32;
        }
        if let Some(z) = (0..n).find(|&i| rows[i] == 0) {
            // Jump past every key sharing this zero row.
            let shift = (n - 1 - z) * n;
            key = (key >> shift | 1) << shift;
            continue;
        }
        if !is_perm_rows(n, &rows) && witnesses(&rows) {
            return Ok(false);
        }
        key += 1;
    }
    Ok(true)
}

#[inline]
fn is_perm_rows(n: usize, rows: &[u32]) -> bool {
    let mut seen = 0u32;
    for &r in &rows[..n] {
        if r.count_ones() != 1 || seen & r != 0 {
            return false;
        }
        seen |= r;
    }
    true
}

pub fn is_prime(alpha: &Multipermutation) -> Result<bool> {
    is_prime_relation(alpha.rel())
}

/// Reference oracle: scan every factorisation b·c over all of B_n.
/// Exponential in n²; intended for cross-checking at n ≤ 3.
pub fn is_prime_bruteforce(alpha: &Relation) -> Result<bool> {
    let n = alpha.n();
    if n > 3 {
        return Err(Error::CapExceeded { what: "brute-force prime test", n, cap: 3, flag: None });
    }
    if alpha.is_permutation() {
        return Ok(false);
    }
    let full = mask_full(n);
    let total = 1u64 << (n * n);
    let unpack = |key: u64, rows: &mut [u32]| {
        for (i, r) in rows.iter_mut().enumerate() {
            *r = (key >> ((n - 1 - i) * n) & full as u64) as u32;
        }
    };
    let mut brows = vec![0u32; n];
    let mut crows = vec![0u32; n];
    for bk in 0..total {
        unpack(bk, &mut brows);
        if is_perm_rows(n, &brows) {
            continue;
        }
        'next: for ck in 0..total {
            unpack(ck, &mut crows);
            if is_perm_rows(n, &crows) {
                continue;
            }
            for i in 0..n {
                if or_selected(&crows, brows[i]) != alpha.row_masks()[i] {
                    continue 'next;
                }
            }
            return Ok(false);
        }
    }
    Ok(true)
}

/// All primes of B_n for n ≤ 3, by residual scan over every matrix.
/// Useful for checking that prime elements are always multipermutations.
pub fn primes_in_bn(n: usize) -> Result<Vec<Relation>> {
    if n > 3 {
        return Err(Error::CapExceeded { what: "B_n prime scan", n, cap: 3, flag: None });
    }
    let full = mask_full(n);
    let total = 1u64 << (n * n);
    let mut out = Vec::new();
    for key in 0..total {
        let rows: Vec<u32> =
            (0..n).map(|i| (key >> ((n - 1 - i) * n) & full as u64) as u32).collect();
        let rel = Relation::new(n, rows);
        if is_prime_relation(&rel)? {
            out.push(rel);
        }
    }
    Ok(out)
}

/// An equivalence class of primes under two-sided multiplication by
/// permutation matrices (alpha ~ P·alpha·Q).
#[derive(Debug, Clone)]
pub struct PrimeClass {
    /// Least element of the class in canonical key order.
    pub representative: Multipermutation,
    /// All members, in canonical key order.
    pub members: Vec<Multipermutation>,
}

impl PrimeClass {
    pub fn contains(&self, m: &Multipermutation) -> bool {
        self.members.binary_search_by_key(&m.key(), |x| x.key()).is_ok()
    }
}

/// All primes of M_n grouped into P·alpha·Q classes, one canonical
/// representative each, classes ordered by representative.
pub fn prime_elements(table: &MonoidTable) -> Result<Vec<PrimeClass>> {
    let n = table.n();
    let perm_mats: Vec<Multipermutation> =
        Permutation::all(n).iter().map(|p| p.to_multipermutation()).collect();
    let mut prime_keys: BTreeSet<u64> = BTreeSet::new();
    for m in table.iter() {
        // Two-sided permutation translates of a prime are prime; skip
        // re-deciding anything already swept into the set.
        if !prime_keys.contains(&m.key()) && is_prime(&m)? {
            for p in &perm_mats {
                let pm = p.then(&m);
                for q in &perm_mats {
                    prime_keys.insert(pm.then(q).key());
                }
            }
        }
    }
    // Partition into orbits.
    let mut classes = Vec::new();
    let mut unassigned = prime_keys.clone();
    while let Some(&k) = unassigned.iter().next() {
        let m = Multipermutation::from_key(n, k);
        let mut orbit: BTreeSet<u64> = BTreeSet::new();
        for p in &perm_mats {
            let pm = p.then(&m);
            for q in &perm_mats {
                orbit.insert(pm.then(q).key());
            }
        }
        for ok in &orbit {
            unassigned.remove(ok);
            debug_assert!(prime_keys.contains(ok), "orbit of a prime left the prime set");
        }
        let members: Vec<Multipermutation> =
            orbit.iter().map(|&ok| Multipermutation::from_key(n, ok)).collect();
        classes.push(PrimeClass { representative: members[0].clone(), members });
    }
    classes.sort_by_key(|c| c.representative.key());
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> Multipermutation {
        Multipermutation::parse(s).unwrap()
    }

    #[test]
    fn monoid_sizes_match_closed_form() {
        for (n, expect) in [(1, 1u64), (2, 7), (3, 265)] {
            let table = MonoidTable::enumerate(n, DEFAULT_ENUM_CAP).unwrap();
            assert_eq!(table.len() as u64, expect);
            assert_eq!(MonoidTable::count_closed_form(n), expect);
        }
    }

    #[test]
    fn enumeration_respects_cap() {
        let err = MonoidTable::enumerate(5, 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn closure_of_identity_is_identity() {
        let c = closure(3, &[Multipermutation::identity(3)]);
        assert_eq!(c, vec![Multipermutation::identity(3)]);
    }

    #[test]
    fn closure_of_sn_generators_is_sn() {
        let c = closure(3, &[mp("2|1|3"), mp("2|3|1")]);
        assert_eq!(c.len(), 6);
        assert!(c.iter().all(|m| m.is_permutation()));
    }

    #[test]
    fn sn_generators_do_not_generate_m3() {
        let table = MonoidTable::enumerate(3, DEFAULT_ENUM_CAP).unwrap();
        let check = is_generating_set(&table, &[mp("2|1|3"), mp("2|3|1")]);
        assert!(!check.generates);
        assert!(!check.missing.unwrap().is_permutation());
    }

    #[test]
    fn m3_generating_set() {
        let table = MonoidTable::enumerate(3, DEFAULT_ENUM_CAP).unwrap();
        let gens = [mp("2|1|3"), mp("2|3|1"), mp("12|23|13"), mp("1|12|3"), mp("1|1|23")];
        let check = is_generating_set(&table, &gens);
        assert!(check.generates, "generated {} of {}", check.generated_size, check.monoid_size);
    }

    #[test]
    fn identity_is_not_prime() {
        assert!(!is_prime(&Multipermutation::identity(3)).unwrap());
    }

    #[test]
    fn the_m3_prime() {
        assert!(is_prime(&mp("12|23|13")).unwrap());
        assert!(!is_prime(&mp("12|12|3")).unwrap());
        assert!(!is_prime(&mp("1|1|23")).unwrap());
    }

    #[test]
    fn m2_has_no_primes() {
        let table = MonoidTable::enumerate(2, DEFAULT_ENUM_CAP).unwrap();
        assert!(prime_elements(&table).unwrap().is_empty());
    }

    #[test]
    fn m3_has_one_prime_class() {
        let table = MonoidTable::enumerate(3, DEFAULT_ENUM_CAP).unwrap();
        let classes = prime_elements(&table).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes[0].contains(&mp("12|23|13")));
    }
}
