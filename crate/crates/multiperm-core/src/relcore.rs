//! Value types and elementwise algebra for binary relations on `[n]`.
//!
//! A binary relation is an n×n boolean matrix; row `i` holds the image set
//! of element `i + 1`. A *multipermutation* is a relation with no zero row
//! (totality) and no zero column (surjectivity). Rows are bit-packed, with
//! bit `k - 1` standing for element `k`, so all row and column operations
//! are single-word boolean arithmetic.
//!
//! One composition convention is used throughout: `a.then(&b)` is the
//! boolean matrix product `a·b`, i.e. the relation obtained by following an
//! edge of `a` and then an edge of `b`. The hyper-operation composition
//! `g ∘ f` ("apply f, then g") is therefore `f.then(&g)`.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Hard upper bound on the domain size; keeps every row in one word.
pub const MAX_N: usize = 16;

fn check_n(n: usize) {
    assert!(
        (1..=MAX_N).contains(&n),
        "domain size must be in 1..={MAX_N}, got {n}"
    );
}

/// A length-n 0/1 vector: one row or column of a relation, or a row-space
/// element. Ordered coordinatewise (`PartialOrd` is containment, a partial
/// order); `+` of the underlying sets is bitwise OR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoolVec {
    n: u8,
    bits: u32,
}

impl BoolVec {
    pub fn new(n: usize, bits: u32) -> Self {
        check_n(n);
        debug_assert_eq!(bits >> n, 0, "bits out of range for dimension {n}");
        BoolVec { n: n as u8, bits }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, mask_full(n))
    }

    /// The unit vector {elem}, 1-based.
    pub fn unit(n: usize, elem: usize) -> Self {
        assert!((1..=n).contains(&elem));
        Self::new(n, 1 << (elem - 1))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_unit(&self) -> bool {
        self.bits.count_ones() == 1
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, elem: usize) -> bool {
        debug_assert!((1..=self.n()).contains(&elem));
        self.bits >> (elem - 1) & 1 == 1
    }

    /// Containment order: every 1-position of `self` is one of `other`.
    pub fn le(&self, other: &BoolVec) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.bits & !other.bits == 0
    }

    /// Coordinatewise boolean sum.
    pub fn sum(&self, other: &BoolVec) -> BoolVec {
        debug_assert_eq!(self.n, other.n);
        BoolVec { n: self.n, bits: self.bits | other.bits }
    }

    /// 1-based elements, ascending.
    pub fn elems(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        (1..=n).filter(move |&k| self.contains(k))
    }

    /// Binary-string form, leftmost character = element 1 ("110" = {1,2}).
    pub fn to_bit_string(&self) -> String {
        (1..=self.n()).map(|k| if self.contains(k) { '1' } else { '0' }).collect()
    }

    pub fn parse_bits(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Parse(format!("bit string of length {n} out of range: {s:?}")));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(Error::Parse(format!("bad character {c:?} in bit string {s:?}"))),
            }
        }
        Ok(BoolVec::new(n, bits))
    }
}

impl PartialOrd for BoolVec {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        use core::cmp::Ordering::*;
        debug_assert_eq!(self.n, other.n);
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Equal),
            (true, false) => Some(Less),
            (false, true) => Some(Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for BoolVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

pub(crate) fn mask_full(n: usize) -> u32 {
    if n == 32 { !0 } else { (1u32 << n) - 1 }
}

/// An arbitrary n×n boolean matrix / binary relation on `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<u32>,
}

impl Relation {
    pub fn new(n: usize, rows: Vec<u32>) -> Self {
        check_n(n);
        assert_eq!(rows.len(), n, "expected {n} rows");
        debug_assert!(rows.iter().all(|r| r >> n == 0));
        Relation { n, rows }
    }

    pub fn from_row_masks(rows: &[u32]) -> Self {
        Self::new(rows.len(), rows.to_vec())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| 1 << i).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, vec![0; n])
    }

    pub fn full(n: usize) -> Self {
        Self::new(n, vec![mask_full(n); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_masks(&self) -> &[u32] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> BoolVec {
        BoolVec::new(self.n, self.rows[i])
    }

    pub fn col(&self, j: usize) -> BoolVec {
        BoolVec::new(self.n, col_mask(&self.rows, j))
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        debug_assert!((1..=self.n).contains(&x) && (1..=self.n).contains(&y));
        self.rows[x - 1] >> (y - 1) & 1 == 1
    }

    /// Relation composition `self · other`: follow an edge of `self`, then
    /// one of `other`. Boolean matrix product.
    pub fn then(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "dimension mismatch in composition");
        Relation {
            n: self.n,
            rows: self.rows.iter().map(|&r| or_selected(&other.rows, r)).collect(),
        }
    }

    /// The inverse relation (matrix transpose).
    pub fn inverse(&self) -> Relation {
        let mut rows = vec![0u32; self.n];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut m = r;
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                m &= m - 1;
                rows[j] |= 1 << i;
            }
        }
        Relation { n: self.n, rows }
    }

    /// Entrywise negation.
    pub fn complement(&self) -> Relation {
        let full = mask_full(self.n);
        Relation {
            n: self.n,
            rows: self.rows.iter().map(|r| !r & full).collect(),
        }
    }

    /// Entrywise containment.
    pub fn is_sub_of(&self, other: &Relation) -> bool {
        assert_eq!(self.n, other.n, "dimension mismatch in containment test");
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Entrywise OR.
    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n, "dimension mismatch in union");
        Relation {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    /// k-fold composition power; `power(0)` is the identity.
    pub fn power(&self, k: usize) -> Relation {
        // Exponentiation by squaring; k rarely exceeds n but costs nothing.
        let mut acc = Relation::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.then(&base);
            }
        }
        acc
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r >> i & 1 == 1)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.inverse()
    }

    /// ρ·ρ⁻¹·ρ ⊆ ρ. (The reverse containment holds for every relation with
    /// no zero row, so for such relations this is an equality test.)
    pub fn is_difunctional(&self) -> bool {
        self.then(&self.inverse()).then(self).is_sub_of(self)
    }

    /// No zero row.
    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|&r| r != 0)
    }

    /// No zero column.
    pub fn is_surjective(&self) -> bool {
        self.rows.iter().fold(0, |acc, r| acc | r) == mask_full(self.n)
    }

    pub fn is_multipermutation(&self) -> bool {
        self.is_total() && self.is_surjective()
    }

    /// Every row a singleton and every column hit: a permutation matrix.
    pub fn is_permutation(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones() == 1) && self.is_surjective()
    }

    /// Contains a permutation as a subrelation, decided by bipartite
    /// perfect matching on the rows/columns of the matrix.
    pub fn is_hall(&self) -> bool {
        perfect_matching_exists(self.n, &self.rows)
    }

    /// Canonical packed key: row 0 in the most significant block. Ascending
    /// key order is the canonical enumeration order. Requires n ≤ 8.
    pub fn key(&self) -> u64 {
        pack_key(self.n, &self.rows)
    }

    pub fn from_key(n: usize, key: u64) -> Self {
        Relation::new(n, unpack_key(n, key).collect())
    }

    /// Multi-line binary matrix form, one row per line ("110\n010\n101").
    pub fn to_matrix_string(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            if i > 0 {
                s.push('\n');
            }
            s.push_str(&self.row(i).to_bit_string());
        }
        s
    }

    pub fn parse_matrix(s: &str) -> Result<Relation> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        let n = lines.len();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Parse(format!("matrix with {n} rows out of range")));
        }
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let v = BoolVec::parse_bits(line.trim())?;
            if v.n() != n {
                return Err(Error::Parse(format!(
                    "row {:?} has length {}, expected {n}",
                    line.trim(),
                    v.n()
                )));
            }
            rows.push(v.bits());
        }
        Ok(Relation::new(n, rows))
    }

    /// Pipe-separated image sets ("12|2|13"); for n > 9 elements within a
    /// row are comma-separated ("1,12|3|..."); an empty image set prints
    /// as "-".
    pub fn to_pipe_string(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            if i > 0 {
                s.push('|');
            }
            let row = self.row(i);
            if row.is_zero() {
                s.push('-');
            } else if self.n > 9 {
                let mut first = true;
                for e in row.elems() {
                    if !first {
                        s.push(',');
                    }
                    first = false;
                    s.push_str(&format!("{e}"));
                }
            } else {
                for e in row.elems() {
                    s.push(char::from_digit(e as u32, 10).unwrap());
                }
            }
        }
        s
    }

    pub fn parse_pipe(s: &str) -> Result<Relation> {
        let parts: Vec<&str> = s.trim().split('|').collect();
        let n = parts.len();
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::Parse(format!("{n} image sets out of range in {s:?}")));
        }
        let mut rows = Vec::with_capacity(n);
        for part in parts {
            let part = part.trim();
            let mut bits = 0u32;
            if part.is_empty() || part == "-" {
                rows.push(0);
                continue;
            }
            if n > 9 {
                for tok in part.split(',') {
                    let e: usize = tok
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad element {tok:?} in {s:?}")))?;
                    if !(1..=n).contains(&e) {
                        return Err(Error::Parse(format!("element {e} out of range 1..={n}")));
                    }
                    bits |= 1 << (e - 1);
                }
            } else {
                for c in part.chars() {
                    let e = c
                        .to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("bad character {c:?} in {s:?}")))?
                        as usize;
                    if !(1..=n).contains(&e) {
                        return Err(Error::Parse(format!("element {e} out of range 1..={n}")));
                    }
                    bits |= 1 << (e - 1);
                }
            }
            rows.push(bits);
        }
        Ok(Relation::new(n, rows))
    }

    /// DOT source for the digraph of the relation: an edge x -> y whenever
    /// y is in the image of x.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph relation {\n");
        for x in 1..=self.n {
            s.push_str(&format!("  {x};\n"));
        }
        for x in 1..=self.n {
            for y in self.row(x - 1).elems() {
                s.push_str(&format!("  {x} -> {y};\n"));
            }
        }
        s.push('}');
        s.push('\n');
        s
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pipe_string())
    }
}

#[inline]
pub(crate) fn col_mask(rows: &[u32], j: usize) -> u32 {
    let mut m = 0u32;
    for (i, &r) in rows.iter().enumerate() {
        m |= (r >> j & 1) << i;
    }
    m
}

/// OR of the rows of `rows` selected by the bits of `sel`.
#[inline]
pub(crate) fn or_selected(rows: &[u32], sel: u32) -> u32 {
    let mut acc = 0u32;
    let mut m = sel;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        acc |= rows[j];
    }
    acc
}

pub(crate) fn pack_key(n: usize, rows: &[u32]) -> u64 {
    assert!(n <= 8, "packed keys require n <= 8");
    let mut key = 0u64;
    for &r in rows {
        key = key << n | r as u64;
    }
    key
}

pub(crate) fn unpack_key(n: usize, key: u64) -> impl Iterator<Item = u32> {
    let m = mask_full(n) as u64;
    (0..n).map(move |i| (key >> ((n - 1 - i) * n) & m) as u32)
}

/// Kuhn's augmenting-path matching; true iff a perfect matching of rows to
/// columns exists inside the support of the matrix.
fn perfect_matching_exists(n: usize, rows: &[u32]) -> bool {
    fn try_assign(n: usize, rows: &[u32], i: usize, seen: &mut u32, owner: &mut [i8]) -> bool {
        for j in 0..n {
            if rows[i] >> j & 1 == 1 && *seen >> j & 1 == 0 {
                *seen |= 1 << j;
                if owner[j] < 0 || try_assign(n, rows, owner[j] as usize, seen, owner) {
                    owner[j] = i as i8;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![-1i8; n];
    for i in 0..n {
        let mut seen = 0u32;
        if !try_assign(n, rows, i, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

/// A total surjective binary relation: no zero row, no zero column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multipermutation(Relation);

impl Multipermutation {
    pub fn new(rel: Relation) -> Result<Self> {
        if !rel.is_total() {
            return Err(Error::Invalid(format!("{rel} has an empty image set")));
        }
        if !rel.is_surjective() {
            return Err(Error::Invalid(format!("{rel} misses an element (zero column)")));
        }
        Ok(Multipermutation(rel))
    }

    pub fn from_row_masks(rows: &[u32]) -> Result<Self> {
        Self::new(Relation::from_row_masks(rows))
    }

    pub fn identity(n: usize) -> Self {
        Multipermutation(Relation::identity(n))
    }

    pub fn full(n: usize) -> Self {
        Multipermutation(Relation::full(n))
    }

    pub fn rel(&self) -> &Relation {
        &self.0
    }

    pub fn into_rel(self) -> Relation {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn row_masks(&self) -> &[u32] {
        &self.0.rows
    }

    pub fn row(&self, i: usize) -> BoolVec {
        self.0.row(i)
    }

    /// Composition. Multipermutations are closed under it: selecting a
    /// nonempty set of nonzero rows keeps rows nonzero, and the transpose
    /// argument covers columns.
    pub fn then(&self, other: &Multipermutation) -> Multipermutation {
        let r = self.0.then(&other.0);
        debug_assert!(r.is_multipermutation());
        Multipermutation(r)
    }

    pub fn inverse(&self) -> Multipermutation {
        Multipermutation(self.0.inverse())
    }

    pub fn union(&self, other: &Multipermutation) -> Multipermutation {
        Multipermutation(self.0.union(&other.0))
    }

    pub fn power(&self, k: usize) -> Multipermutation {
        Multipermutation(self.0.power(k))
    }

    pub fn is_sub_of(&self, other: &Multipermutation) -> bool {
        self.0.is_sub_of(&other.0)
    }

    pub fn is_reflexive(&self) -> bool {
        self.0.is_reflexive()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }

    pub fn is_difunctional(&self) -> bool {
        self.0.is_difunctional()
    }

    pub fn is_permutation(&self) -> bool {
        self.0.is_permutation()
    }

    pub fn is_hall(&self) -> bool {
        self.0.is_hall()
    }

    /// The join of two symmetric reflexive multipermutations: the n-th
    /// power of their union, which is the finest equivalence relation
    /// (reflexive, symmetric, transitive) containing both. Equals
    /// `(f·g)^n` and `(g·f)^n` under the same hypotheses.
    ///
    /// # Panics
    ///
    /// If either operand is not symmetric and reflexive.
    pub fn join(&self, other: &Multipermutation) -> Multipermutation {
        assert!(
            self.is_symmetric() && self.is_reflexive(),
            "join requires symmetric reflexive operands"
        );
        assert!(
            other.is_symmetric() && other.is_reflexive(),
            "join requires symmetric reflexive operands"
        );
        self.union(other).power(self.n())
    }

    /// All multipermutations contained in `self` (including `self`), in
    /// canonical key order.
    pub fn sub_multipermutations(&self) -> Vec<Multipermutation> {
        let n = self.n();
        let mut out = Vec::new();
        let mut rows = vec![0u32; n];
        // Enumerate nonzero submasks of every row; prune on column coverage.
        fn rec(
            n: usize,
            src: &[u32],
            rows: &mut [u32],
            i: usize,
            covered: u32,
            suffix_or: &[u32],
            out: &mut Vec<Multipermutation>,
        ) {
            if i == n {
                if covered == mask_full(n) {
                    out.push(Multipermutation(Relation::new(n, rows.to_vec())));
                }
                return;
            }
            // Columns still missing must be coverable by the remaining rows.
            if mask_full(n) & !(covered | suffix_or[i]) != 0 {
                return;
            }
            let full = src[i];
            let mut sub = full;
            loop {
                if sub != 0 {
                    rows[i] = sub;
                    rec(n, src, rows, i + 1, covered | sub, suffix_or, out);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & full;
            }
        }
        let mut suffix_or = vec![0u32; n + 1];
        for i in (0..n).rev() {
            suffix_or[i] = suffix_or[i + 1] | self.0.rows[i];
        }
        rec(n, &self.0.rows, &mut rows, 0, 0, &suffix_or, &mut out);
        out.sort_by_key(|m| m.key());
        out
    }

    pub fn key(&self) -> u64 {
        self.0.key()
    }

    pub fn from_key(n: usize, key: u64) -> Self {
        let rel = Relation::from_key(n, key);
        debug_assert!(rel.is_multipermutation());
        Multipermutation(rel)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(Relation::parse_pipe(s)?)
    }

    pub fn parse_matrix(s: &str) -> Result<Self> {
        Self::new(Relation::parse_matrix(s)?)
    }

    pub fn to_matrix_string(&self) -> String {
        self.0.to_matrix_string()
    }

    pub fn to_pipe_string(&self) -> String {
        self.0.to_pipe_string()
    }

    pub fn to_dot(&self) -> String {
        self.0.to_dot()
    }
}

impl fmt::Display for Multipermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl PartialOrd for Multipermutation {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical enumeration order (packed key), not containment.
impl Ord for Multipermutation {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// A bijection on `[n]`, stored as a 0-based image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// `image[i]` is the 0-based image of i.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 || n > MAX_N {
            return Err(Error::Invalid(format!("permutation size {n} out of range")));
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::Invalid(format!("image list {image:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// 1-based image list, e.g. `[2, 1]` for the transposition on two points.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.iter().any(|&v| v == 0) {
            return Err(Error::Invalid(format!("1-based image list {image:?} contains 0")));
        }
        Self::new(image.iter().map(|&v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// 0-based application.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based_image(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v + 1).collect()
    }

    /// Left-to-right composition: `(p.then(&q))(i) = q(p(i))`, matching
    /// `Relation::then` on the permutation matrices.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "dimension mismatch in permutation composition");
        Permutation {
            image: self.image.iter().map(|&i| other.image[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn to_multipermutation(&self) -> Multipermutation {
        Multipermutation(Relation::new(
            self.n(),
            self.image.iter().map(|&v| 1 << v).collect(),
        ))
    }

    /// The permutation underlying a multipermutation whose rows are all
    /// singletons, if it is one.
    pub fn from_multipermutation(m: &Multipermutation) -> Option<Permutation> {
        if !m.is_permutation() {
            return None;
        }
        Some(Permutation {
            image: m.row_masks().iter().map(|r| r.trailing_zeros() as usize).collect(),
        })
    }

    /// All n! permutations on `[n]`, in lexicographic image order.
    pub fn all(n: usize) -> Vec<Permutation> {
        check_n(n);
        assert!(n <= 8, "full symmetric group enumeration capped at n = 8");
        let mut out = Vec::new();
        let mut image: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { image: image.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n - 1).rev().find(|&i| image[i] < image[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| image[j] > image[i]).unwrap();
            image.swap(i, j);
            image[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Cycle notation, fixed points omitted (identity prints as "()").
        let n = self.n();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.image[start] == start {
                seen[start] = true;
                continue;
            }
            wrote = true;
            f.write_str("(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{}", i + 1)?;
                i = self.image[i];
            }
            f.write_str(")")?;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> Multipermutation {
        Multipermutation::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["12|2|13", "1|2", "123|123|123", "2|23|1"] {
            assert_eq!(mp(s).to_pipe_string(), s);
        }
        let m = mp("12|2|13");
        assert_eq!(m.to_matrix_string(), "110\n010\n101");
        assert_eq!(Multipermutation::parse_matrix("110\n010\n101").unwrap(), m);
    }

    #[test]
    fn parse_large_domain_uses_commas() {
        let id10 = Multipermutation::identity(10);
        let s = id10.rel().to_pipe_string();
        assert_eq!(s, "1|2|3|4|5|6|7|8|9|10");
        assert_eq!(Multipermutation::parse(&s).unwrap(), id10);
        let m = Multipermutation::parse("1,10|2|3|4|5|6|7|8|9|10").unwrap();
        assert!(m.row(0).contains(10));
        assert_eq!(m.rel().to_pipe_string(), "1,10|2|3|4|5|6|7|8|9|10");
    }

    #[test]
    fn rejects_non_multipermutations() {
        assert!(Multipermutation::parse("1|1").is_err()); // column 2 empty
        assert!(Multipermutation::parse("12|-").is_err()); // empty row
        assert!(Multipermutation::parse("12|1|1").is_err()); // column 3 empty
    }

    #[test]
    fn then_is_matrix_product() {
        // f² = f for this idempotent.
        let f = mp("1|12");
        assert_eq!(f.then(&f), f);
        // Identity laws.
        let g = mp("12|2|13");
        let id = Multipermutation::identity(3);
        assert_eq!(id.then(&g), g);
        assert_eq!(g.then(&id), g);
        // Worked product: α·x·α = α for an inverse x of α.
        let a = mp("2|23|1");
        let x = mp("3|1|12");
        assert_eq!(a.then(&x).then(&a), a);
    }

    #[test]
    fn inverse_is_transpose() {
        assert_eq!(mp("12|2|3").inverse(), mp("1|12|3"));
        let f = mp("2|23|1");
        assert_eq!(f.inverse().inverse(), f);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Relation::full(2).complement(), Relation::zero(2));
        assert_eq!(Relation::identity(2).complement(), mp("2|1").rel().clone());
        assert_eq!(mp("12|2|3").rel().complement(), Relation::parse_pipe("3|13|12").unwrap());
    }

    #[test]
    fn containment_examples() {
        assert!(Multipermutation::identity(2).is_sub_of(&mp("12|12")));
        assert!(!mp("2|1").is_sub_of(&mp("1|12")));
        assert!(mp("1|2").is_sub_of(&mp("1|12")));
    }

    #[test]
    fn sub_multipermutations_examples() {
        let id = Multipermutation::identity(4);
        assert_eq!(id.sub_multipermutations(), vec![id.clone()]);
        assert_eq!(mp("12|12").sub_multipermutations().len(), 7);
        assert!(mp("12|2").sub_multipermutations().contains(&mp("1|2")));
    }

    #[test]
    fn union_and_power() {
        let f = mp("12|2|3");
        assert_eq!(f.union(&f), f);
        assert_eq!(Multipermutation::identity(2).union(&mp("2|1")), mp("12|12"));
        assert_eq!(mp("12|2|3").union(&mp("1|12|3")), mp("12|12|3"));
        assert_eq!(f.power(1), f);
        assert_eq!(mp("2|1").power(2), Multipermutation::identity(2));
        assert_eq!(f.power(0), Multipermutation::identity(3));
    }

    #[test]
    fn join_examples() {
        let id = Multipermutation::identity(3);
        assert_eq!(id.join(&id), id);
        // Two overlapping symmetric reflexive elements connect everything.
        let f = mp("12|12|3");
        let g = mp("1|23|23");
        assert_eq!(f.join(&g), Multipermutation::full(3));
        // The composition route gives the same element.
        assert_eq!(f.then(&g).power(3), Multipermutation::full(3));
    }

    #[test]
    fn predicate_examples() {
        assert!(mp("12|12|3").is_symmetric());
        assert!(mp("12|1|3").is_symmetric());
        assert!(!mp("12|2|3").is_symmetric());
        assert!(mp("12|12|3").is_reflexive());
        assert!(!mp("2|1").is_reflexive());
        assert!(Multipermutation::identity(3).is_difunctional());
        assert!(!mp("12|1|3").is_difunctional());
    }

    #[test]
    fn hall_examples() {
        assert!(Multipermutation::identity(4).is_hall());
        assert!(mp("12|12|3").is_hall());
        // Columns 2 and 3 are both reachable only through row 1.
        assert!(!mp("123|1|1").is_hall());
    }

    #[test]
    fn degenerate_domain() {
        let one = Multipermutation::identity(1);
        assert!(one.is_symmetric());
        assert!(one.is_reflexive());
        assert!(one.is_difunctional());
        assert!(one.is_hall());
        assert_eq!(one.sub_multipermutations(), vec![one.clone()]);
        assert_eq!(one.to_pipe_string(), "1");
    }

    #[test]
    fn key_round_trip_and_order() {
        let m = mp("12|23|13");
        assert_eq!(Multipermutation::from_key(3, m.key()), m);
        assert!(Multipermutation::identity(3).key() < Multipermutation::full(3).key());
    }

    #[test]
    fn permutation_basics() {
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(swap.then(&swap), Permutation::identity(2));
        assert_eq!(swap.to_multipermutation(), mp("2|1"));
        let c = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(c.then(&c.inverse()), Permutation::identity(3));
        assert_eq!(format!("{c}"), "(1 2 3)");
        assert_eq!(format!("{}", Permutation::identity(3)), "()");
        assert_eq!(Permutation::all(3).len(), 6);
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
    }

    #[test]
    fn dot_export_lists_all_edges() {
        let dot = mp("12|2").to_dot();
        assert!(dot.contains("1 -> 1;"));
        assert!(dot.contains("1 -> 2;"));
        assert!(dot.contains("2 -> 2;"));
        assert!(!dot.contains("2 -> 1;"));
    }
}
