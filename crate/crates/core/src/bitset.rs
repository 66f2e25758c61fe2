//! Fixed-size bitset over `u64` words, used for clause sets and set-family instances.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitSetError {
    #[error("bitset hex string has length {found}, expected {expected}")]
    HexLength { expected: usize, found: usize },
    #[error("bitset hex string is not valid hex: {0}")]
    BadHex(String),
    #[error("bitset has bits set beyond its universe of {0}")]
    StrayBits(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Universe size.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside universe {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside universe {}", self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Little-endian bit order within bytes (bit `i` lives in byte `i / 8`,
    /// mask `1 << (i % 8)`), hex-encoded lowercase.
    pub fn to_hex(&self) -> String {
        let nbytes = self.len.div_ceil(8);
        let bytes: Vec<u8> = (0..nbytes)
            .map(|b| (self.words[b / 8] >> ((b % 8) * 8)) as u8)
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Self, BitSetError> {
        let expected = len.div_ceil(8) * 2;
        if s.len() != expected {
            return Err(BitSetError::HexLength { expected, found: s.len() });
        }
        let bytes = hex::decode(s).map_err(|e| BitSetError::BadHex(e.to_string()))?;
        let mut out = Self::new(len);
        for (b, &byte) in bytes.iter().enumerate() {
            out.words[b / 8] |= u64::from(byte) << ((b % 8) * 8);
        }
        if out.words.last().is_some_and(|&w| !len.is_multiple_of(64) && w >> (len % 64) != 0) {
            return Err(BitSetError::StrayBits(len));
        }
        Ok(out)
    }
}
