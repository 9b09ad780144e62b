use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

/// A binary vector stored by its support (the sorted indices of its ones).
///
/// Error patterns, syndromes and corrections are all sparse at the noise
/// levels of interest, so the support form is both the compact and the
/// convenient one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    support: Vec<usize>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            support: Vec::new(),
        }
    }

    pub fn ones(len: usize) -> Self {
        BitVector {
            len,
            support: (0..len).collect(),
        }
    }

    /// Builds a vector from arbitrary-order indices. Out-of-range or repeated
    /// indices are rejected.
    pub fn from_support(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut support: Vec<usize> = indices.into_iter().collect();
        support.sort_unstable();
        if let Some(w) = support.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::value(format!("index {} listed twice", w[0])));
        }
        if let Some(&last) = support.last() {
            if last >= len {
                return Err(Error::dims(format!(
                    "index {last} out of range for length {len}"
                )));
            }
        }
        Ok(BitVector { len, support })
    }

    /// Caller guarantees `support` is sorted, unique and in range.
    pub(crate) fn from_sorted_unchecked(len: usize, support: Vec<usize>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.last().map(|&i| i < len).unwrap_or(true));
        BitVector { len, support }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let support = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        BitVector {
            len: bits.len(),
            support,
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        let mut bits = vec![false; self.len];
        for &i in &self.support {
            bits[i] = true;
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.support.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().copied()
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    /// Panics if the lengths differ.
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        let (a, b) = (&self.support, &rhs.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        BitVector {
            len: self.len,
            support: out,
        }
    }
}

impl fmt::Display for BitVector {
    /// Space-separated support, the format used by the syndrome and
    /// correction files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.support.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
