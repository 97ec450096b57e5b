//! Bit-packed vectors over GF(2) and incremental Gaussian elimination.

use std::fmt;
use std::ops::BitXorAssign;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` for coordinate `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl BitXorAssign<&Gf2Vec> for Gf2Vec {
    fn bitxor_assign(&mut self, rhs: &Gf2Vec) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-echelon basis that remembers which inserted generators make up each
/// basis vector, so membership queries can return an explicit combination.
///
/// Pivots are the lowest set coordinate; vectors are reduced against the
/// basis in insertion order, so results only depend on insertion order.
#[derive(Debug, Clone)]
pub struct Basis {
    width: usize,
    max_generators: usize,
    generators: usize,
    rows: Vec<(Gf2Vec, usize, Gf2Vec)>,
}

impl Basis {
    pub fn new(width: usize, max_generators: usize) -> Self {
        Basis {
            width,
            max_generators,
            generators: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &Gf2Vec) -> (Gf2Vec, Gf2Vec) {
        let mut residual = v.clone();
        let mut combo = Gf2Vec::zeros(self.max_generators);
        for (row, pivot, row_combo) in &self.rows {
            if residual.get(*pivot) {
                residual ^= row;
                combo ^= row_combo;
            }
        }
        (residual, combo)
    }

    /// Adds the next generator; returns whether it raised the rank.
    pub fn insert(&mut self, v: &Gf2Vec) -> bool {
        assert_eq!(v.len(), self.width);
        assert!(self.generators < self.max_generators, "generator capacity exceeded");
        let g = self.generators;
        self.generators += 1;
        let (residual, mut combo) = self.reduce(v);
        match residual.first_one() {
            Some(pivot) => {
                combo.set(g, true);
                self.rows.push((residual, pivot, combo));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Generator indices summing to `v`, if `v` is in the span.
    pub fn express(&self, v: &Gf2Vec) -> Option<Vec<usize>> {
        let (residual, combo) = self.reduce(v);
        residual.is_zero().then(|| combo.support().collect())
    }
}

/// Basis of vectors packed in a single `u64` (at most 64 coordinates), for
/// the oracle's inner loop.
#[derive(Debug, Clone, Copy)]
pub struct MaskBasis {
    rows: [u64; 64],
    len: usize,
}

impl Default for MaskBasis {
    fn default() -> Self {
        MaskBasis {
            rows: [0; 64],
            len: 0,
        }
    }
}

impl MaskBasis {
    fn reduce(&self, mut v: u64) -> u64 {
        for &row in &self.rows[..self.len] {
            let pivot = row & row.wrapping_neg();
            if v & pivot != 0 {
                v ^= row;
            }
        }
        v
    }

    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.rows[self.len] = r;
        self.len += 1;
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> usize {
        self.len
    }
}

/// Rank of a list of vectors.
pub fn rank(rows: &[Gf2Vec]) -> usize {
    let Some(width) = rows.first().map(Gf2Vec::len) else {
        return 0;
    };
    let mut basis = Basis::new(width, rows.len());
    rows.iter().filter(|r| basis.insert(r)).count()
}
