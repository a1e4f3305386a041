use std::fmt;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length vector over GF(2), packed 64 bits per word.
///
/// Bit `j` lives in word `j / 64` at position `j % 64`. Bits past `len` in the
/// last word are always zero, so word-level equality and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Vector with ones exactly at `indices`. Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Unpacks `len` bits from bytes, least significant bit of byte 0 first.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() * 8 < len {
            return None;
        }
        let mut v = Self::zeros(len);
        for i in 0..len {
            if bytes[i / 8] >> (i % 8) & 1 == 1 {
                v.set(i, true);
            }
        }
        Some(v)
    }

    /// Inverse of [`BitVec::from_bytes`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.iter_ones() {
            out[i / 8] |= 1 << (i % 8);
        }
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn intersects(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Hex rendering: bits packed MSB-first into bytes (bit 0 is the top bit of
    /// the first byte), lowercase, two digits per byte.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.len.div_ceil(8)];
        for i in self.iter_ones() {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_weight() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.support(), vec![0, 64, 129]);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.first_one(), Some(0));
    }

    #[test]
    fn dot_and_xor() {
        let a = BitVec::from_indices(10, &[1, 3, 5]);
        let b = BitVec::from_indices(10, &[3, 5, 7]);
        assert!(!a.dot(&b));
        let mut c = a.clone();
        c.xor_assign(&b);
        assert_eq!(c.support(), vec![1, 7]);
        assert!(a.intersects(&b));
    }

    #[test]
    fn hex_is_msb_first() {
        let v = BitVec::from_indices(9, &[0, 8]);
        assert_eq!(v.to_hex(), "8080");
        assert_eq!(BitVec::from_indices(4, &[3]).to_hex(), "10");
    }

    #[test]
    fn byte_packing_round_trip() {
        let v = BitVec::from_indices(11, &[0, 2, 10]);
        let bytes = v.to_bytes();
        assert_eq!(bytes, vec![0b101, 0b100]);
        assert_eq!(BitVec::from_bytes(&bytes, 11).unwrap(), v);
        assert!(BitVec::from_bytes(&[0], 9).is_none());
    }
}
