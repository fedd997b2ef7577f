//! The n-bit reflected Gray code and its inverse.
//!
//! Bit order: index 0 of the returned bit vector is the first (top) qubit,
//! matching the prefix recursion `G_n(k) = 0·G_{n−1}(k)` for `k < 2^{n−1}`
//! and `1·G_{n−1}(2^n−1−k)` otherwise.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrayError {
    #[error("index {k} out of range for {n} bits")]
    OutOfRange { n: usize, k: usize },
    #[error("bitstring length {got} does not match n = {n}")]
    BadLength { n: usize, got: usize },
}

/// The n-bit Gray code of k, as bits (0/1), leftmost = top qubit.
pub fn gray(n: usize, k: usize) -> Result<Vec<u8>, GrayError> {
    if k >= (1usize << n) {
        return Err(GrayError::OutOfRange { n, k });
    }
    let mut bits = Vec::with_capacity(n);
    let mut k = k;
    for level in (1..=n).rev() {
        let half = 1usize << (level - 1);
        if k < half {
            bits.push(0);
        } else {
            bits.push(1);
            k = (1 << level) - 1 - k;
        }
    }
    Ok(bits)
}

/// Inverse of [`gray`]: the k with gray(n, k) = bits.
pub fn gray_inv(n: usize, bits: &[u8]) -> Result<usize, GrayError> {
    if bits.len() != n {
        return Err(GrayError::BadLength { n, got: bits.len() });
    }
    // unfold the reflection from the innermost suffix outwards
    let mut k = 0usize;
    for i in (0..n).rev() {
        let level = n - i;
        if bits[i] == 1 {
            k = (1 << level) - 1 - k;
        }
    }
    Ok(k)
}

/// Gray code packed as an integer (leftmost bit most significant).
pub fn gray_to_int(n: usize, k: usize) -> Result<usize, GrayError> {
    let bits = gray(n, k)?;
    Ok(bits_to_int(&bits))
}

/// The unique bit position (0 = top qubit) where gray(n, a) and
/// gray(n, a+1) differ.
pub fn changed_bit(n: usize, a: usize) -> Result<usize, GrayError> {
    if a + 1 >= (1usize << n) {
        return Err(GrayError::OutOfRange { n, k: a + 1 });
    }
    let x = gray(n, a)?;
    let y = gray(n, a + 1)?;
    let mut pos = None;
    for i in 0..n {
        if x[i] != y[i] {
            if pos.is_some() {
                unreachable!("consecutive Gray codes differ in more than one bit");
            }
            pos = Some(i);
        }
    }
    Ok(pos.expect("consecutive Gray codes differ in exactly one bit"))
}

pub fn bits_to_int(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

pub fn int_to_bits(n: usize, v: usize) -> Vec<u8> {
    (0..n).map(|i| ((v >> (n - 1 - i)) & 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(gray(1, 0).unwrap(), vec![0]);
        assert_eq!(gray(1, 1).unwrap(), vec![1]);
        let g2: Vec<Vec<u8>> = (0..4).map(|k| gray(2, k).unwrap()).collect();
        assert_eq!(g2, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
        assert_eq!(gray(3, 4).unwrap(), vec![1, 1, 0]);
        assert_eq!(gray_inv(3, &[1, 1, 0]).unwrap(), 4);
        assert_eq!(gray_inv(5, &[0; 5]).unwrap(), 0);
    }

    #[test]
    fn changed_bit_examples() {
        assert_eq!(changed_bit(2, 0).unwrap(), 1); // 00 -> 01
        assert_eq!(changed_bit(2, 1).unwrap(), 0); // 01 -> 11
        assert_eq!(changed_bit(2, 2).unwrap(), 1); // 11 -> 10
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(gray(3, 8).is_err());
        assert!(changed_bit(3, 7).is_err());
    }

    /// Independent oracle: the standard binary formula k ^ (k >> 1) read
    /// MSB-first agrees with the recursive definition.
    #[test]
    fn agrees_with_xor_shift_oracle() {
        for n in 1..=12 {
            for k in 0..(1usize << n) {
                let expected = k ^ (k >> 1);
                assert_eq!(gray_to_int(n, k).unwrap(), expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn bijective_unit_distance_and_parity_up_to_12_bits() {
        for n in 1..=12 {
            let mut seen = vec![false; 1 << n];
            let mut prev: Option<Vec<u8>> = None;
            for k in 0..(1usize << n) {
                let bits = gray(n, k).unwrap();
                assert_eq!(gray_inv(n, &bits).unwrap(), k);
                let v = bits_to_int(&bits);
                assert!(!seen[v]);
                seen[v] = true;
                // parity of k equals the popcount parity of its Gray code
                let pop: u32 = bits.iter().map(|&b| b as u32).sum();
                assert_eq!(pop % 2, (k % 2) as u32);
                if let Some(p) = prev {
                    let diff: Vec<usize> = (0..n).filter(|&i| p[i] != bits[i]).collect();
                    assert_eq!(diff.len(), 1, "n={n} k={k}");
                    assert_eq!(changed_bit(n, k - 1).unwrap(), diff[0]);
                }
                prev = Some(bits);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
