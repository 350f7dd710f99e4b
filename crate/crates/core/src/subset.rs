//! Bitmask subsets of parties and the index bookkeeping for splitting a
//! d^N-dimensional index space into a subset and its complement.

use std::fmt;

/// A subset of parties stored as a bitmask: bit `j` set means party `j + 1`
/// (zero-based party `j`) belongs to the subset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartySubset(pub u32);

impl PartySubset {
    pub const EMPTY: PartySubset = PartySubset(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 31);
        PartySubset(((1u64 << n) - 1) as u32)
    }

    pub fn single(party: usize) -> Self {
        PartySubset(1 << party)
    }

    /// Builds a subset from zero-based party indices.
    pub fn from_parties(parties: &[usize]) -> Self {
        PartySubset(parties.iter().fold(0, |m, &p| m | (1 << p)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, party: usize) -> bool {
        self.0 >> party & 1 == 1
    }

    pub fn complement(self, n: usize) -> Self {
        PartySubset(!self.0 & Self::full(n).0)
    }

    pub fn is_within(self, n: usize) -> bool {
        (self.0 as u64) < (1u64 << n)
    }

    /// Zero-based parties in increasing order.
    pub fn parties(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |&p| mask >> p & 1 == 1)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            of: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Display for PartySubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.parties().map(|p| (p + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Enumerates submasks of a fixed mask in increasing numeric order.
pub struct SubsetIter {
    of: u32,
    next: Option<u32>,
}

impl Iterator for SubsetIter {
    type Item = PartySubset;

    fn next(&mut self) -> Option<PartySubset> {
        let cur = self.next?;
        self.next = if cur == self.of {
            None
        } else {
            Some((cur.wrapping_sub(self.of)) & self.of)
        };
        Some(PartySubset(cur))
    }
}

/// Popcount for every mask below `2^n`.
pub fn popcounts(n: usize) -> Vec<u8> {
    let size = 1usize << n;
    let mut out = vec![0u8; size];
    for m in 1..size {
        out[m] = out[m >> 1] + (m & 1) as u8;
    }
    out
}

/// Split of the index space of `n` sites of dimension `d` into the sites in
/// `inside` and the remaining ones. Within each side the original site order
/// (most significant first) is kept.
#[derive(Clone, Debug)]
pub struct Bipartition {
    pub dim_in: usize,
    pub dim_out: usize,
    /// `inner[i]` is the inside index of full index `i`.
    pub inner: Vec<usize>,
    /// `outer[i]` is the outside index of full index `i`.
    pub outer: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, d: usize, inside: PartySubset) -> Self {
        let k = inside.len();
        let dim_in = d.pow(k as u32);
        let dim_out = d.pow((n - k) as u32);
        let total = dim_in * dim_out;
        let mut inner = vec![0usize; total];
        let mut outer = vec![0usize; total];
        let mut digits = vec![0usize; n];
        for i in 0..total {
            let (mut a, mut b) = (0usize, 0usize);
            for (p, &dig) in digits.iter().enumerate() {
                if inside.contains(p) {
                    a = a * d + dig;
                } else {
                    b = b * d + dig;
                }
            }
            inner[i] = a;
            outer[i] = b;
            // odometer, last site least significant
            for p in (0..n).rev() {
                digits[p] += 1;
                if digits[p] < d {
                    break;
                }
                digits[p] = 0;
            }
        }
        Bipartition {
            dim_in,
            dim_out,
            inner,
            outer,
        }
    }

    /// Inverse map: `compose()[a * dim_out + b]` is the full index.
    pub fn compose(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.inner.len()];
        for (i, (&a, &b)) in self.inner.iter().zip(&self.outer).enumerate() {
            out[a * self.dim_out + b] = i;
        }
        out
    }
}
