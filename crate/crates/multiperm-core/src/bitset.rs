//! A plain growable bitset over `u64` words.
//!
//! Used as the membership index for closure worklists and as the tuple-set
//! backing store in the Galois machinery. Deliberately minimal; everything
//! here is deterministic and allocation-only.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`; returns true if it was newly set.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    pub fn fill(&mut self) {
        self.words.fill(!0);
        self.trim();
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn invert(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.trim();
    }

    /// True iff every bit of `self` is set in `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Bits of `self` shifted up by `d` positions, OR-ed into `out`.
    pub fn or_shifted_into(&self, d: isize, out: &mut BitSet) {
        debug_assert_eq!(self.len, out.len);
        let nw = self.words.len();
        if d >= 0 {
            let (wd, bd) = ((d as usize) / 64, (d as usize) % 64);
            for i in (0..nw).rev() {
                if i < wd {
                    break;
                }
                let mut v = self.words[i - wd] << bd;
                if bd != 0 && i > wd {
                    v |= self.words[i - wd - 1] >> (64 - bd);
                }
                out.words[i] |= v;
            }
        } else {
            let d = (-d) as usize;
            let (wd, bd) = (d / 64, d % 64);
            for i in 0..nw {
                if i + wd >= nw {
                    break;
                }
                let mut v = self.words[i + wd] >> bd;
                if bd != 0 && i + wd + 1 < nw {
                    v |= self.words[i + wd + 1] << (64 - bd);
                }
                out.words[i] |= v;
            }
        }
        out.trim();
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Canonical key (the word vector); usable as a dedup map key.
    pub fn key(&self) -> &[u64] {
        &self.words
    }

    fn trim(&mut self) {
        let spare = self.words.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> spare;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_iter() {
        let mut s = BitSet::new(200);
        assert!(s.insert(0));
        assert!(s.insert(131));
        assert!(!s.insert(131));
        assert!(s.contains(131));
        assert!(!s.contains(130));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 131]);
        assert_eq!(s.count(), 2);
    }

    #[test]
    fn shift_both_directions() {
        let mut s = BitSet::new(150);
        s.insert(10);
        s.insert(100);
        let mut out = BitSet::new(150);
        s.or_shifted_into(30, &mut out);
        assert_eq!(out.iter().collect::<Vec<_>>(), vec![40, 130]);
        let mut back = BitSet::new(150);
        out.or_shifted_into(-30, &mut back);
        assert_eq!(back.iter().collect::<Vec<_>>(), vec![10, 100]);
    }

    #[test]
    fn shift_drops_bits_past_the_end() {
        let mut s = BitSet::new(100);
        s.insert(90);
        let mut out = BitSet::new(100);
        s.or_shifted_into(20, &mut out);
        assert!(out.is_empty());
    }
}
