//! The tailored right-hand sides for the Gray-block Hadamard-pair
//! equations: the distinguished generator (H_[0,1] H_[3,2]) conjugated by
//! encoded NOT gates and adjacent-swap cascades, all assembled from the
//! codec's encoding clauses.

use super::AxiomError;
use crate::circuit::Gate;
use crate::codec::encode_gate_word;
use crate::graycode::{bits_to_int, gray};
use crate::words::{PWord, PairedGen};

/// Adjacent-swap gate list whose wire permutation sends wire n−1 to
/// `target` and wire n−2 to `dashed`, keeping the remaining wires in
/// order.
fn move_gates(target: usize, dashed: usize, n: usize) -> Vec<Gate> {
    // desired final arrangement: position -> original wire label
    let mut fin = vec![usize::MAX; n];
    fin[target] = n - 1;
    fin[dashed] = n - 2;
    let mut next = 0usize;
    for slot in fin.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    // selection sort with adjacent swaps
    let mut arr: Vec<usize> = (0..n).collect();
    let mut gates = Vec::new();
    for p in 0..n {
        let q = arr.iter().position(|&w| w == fin[p]).unwrap();
        debug_assert!(q >= p);
        for j in (p..q).rev() {
            gates.push(Gate::Swap(j, j + 1));
            arr.swap(j, j + 1);
        }
    }
    debug_assert_eq!(arr, fin);
    gates
}

/// Build the conjugation word for a Gray-block tuple: Gray codes of
/// (a, b, c, d) must form a 2×2 block x·β·y·δ·z. The word is
/// E(swaps, NOTs) · (H_[0,1]H_[3,2]) · E(NOTs, swaps) with the NOT gates
/// sitting on the control wires whose pattern bit is 1.
pub fn build_w_word(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    n: usize,
) -> Result<PWord, AxiomError> {
    if n < 3 {
        return Err(AxiomError::FormMismatch);
    }
    let g: Vec<usize> =
        [a, b, c, d].iter().map(|&s| bits_to_int(&gray(n, s).unwrap())).collect();
    let u = g[0] ^ g[1];
    let v = g[0] ^ g[2];
    if u.count_ones() != 1
        || v.count_ones() != 1
        || u == v
        || g[3] != g[0] ^ u ^ v
        || g[0] & u != 0
        || g[0] & v != 0
    {
        return Err(AxiomError::FormMismatch);
    }
    let target = n - 1 - u.trailing_zeros() as usize;
    let dashed = n - 1 - v.trailing_zeros() as usize;

    let bits = gray(n, a).unwrap();
    // NOT gates at the central coordinates of the pattern-1 control wires
    let mut xs = Vec::new();
    for w in 0..n {
        if w == target || w == dashed {
            continue;
        }
        if bits[w] == 1 {
            let below = [target, dashed].iter().filter(|&&t| t < w).count();
            xs.push(Gate::X(w - below));
        }
    }
    let moves = move_gates(target, dashed, n);

    // conjugator circuit: NOTs at central coordinates, then the cascade
    let mut conj: Vec<Gate> = xs.clone();
    conj.extend(moves.iter().cloned());
    let conj_inv: Vec<Gate> = conj.iter().rev().cloned().collect();

    let mut pgens = encode_gate_word(&conj, n).map_err(|_| AxiomError::FormMismatch)?;
    pgens.push(PairedGen::Hh((0, 1), (3, 2)));
    pgens.extend(encode_gate_word(&conj_inv, n).map_err(|_| AxiomError::FormMismatch)?);
    Ok(PWord::new(1usize << n, pgens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{pword_semantics, word_semantics, Gen, Word};

    fn hh_matrix(a: usize, b: usize, c: usize, d: usize, dim: usize) -> crate::ring::RingMatrix {
        word_semantics(&Word::new(dim, vec![Gen::HGen(a, b), Gen::HGen(c, d)])).unwrap()
    }

    /// All Gray-block tuples at n qubits, with returned parity telling the
    /// two forms apart.
    fn block_tuples(n: usize) -> Vec<(usize, usize, usize, usize)> {
        let dim = 1usize << n;
        let gamma: Vec<usize> =
            (0..dim).map(|s| bits_to_int(&gray(n, s).unwrap())).collect();
        let inv = {
            let mut v = vec![0usize; dim];
            for (s, &p) in gamma.iter().enumerate() {
                v[p] = s;
            }
            v
        };
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                let (mu, mv) = (1usize << (n - 1 - p), 1usize << (n - 1 - q));
                for base in 0..dim {
                    if base & mu != 0 || base & mv != 0 {
                        continue;
                    }
                    out.push((
                        inv[base],
                        inv[base | mu],
                        inv[base | mv],
                        inv[base | mu | mv],
                    ));
                }
            }
        }
        out
    }

    #[test]
    fn contract_holds_for_all_block_tuples_n3() {
        let n = 3;
        let tuples = block_tuples(n);
        assert!(!tuples.is_empty());
        for (a, b, c, d) in tuples {
            let w = build_w_word(a, b, c, d, n).unwrap();
            assert_eq!(
                pword_semantics(&w).unwrap(),
                hh_matrix(a, b, c, d, 1 << n),
                "tuple ({a},{b},{c},{d})"
            );
        }
    }

    #[test]
    fn contract_holds_for_sampled_block_tuples_n4() {
        let n = 4;
        let tuples = block_tuples(n);
        for (i, &(a, b, c, d)) in tuples.iter().enumerate() {
            if i % 7 != 0 {
                continue;
            }
            let w = build_w_word(a, b, c, d, n).unwrap();
            assert_eq!(
                pword_semantics(&w).unwrap(),
                hh_matrix(a, b, c, d, 1 << n),
                "tuple ({a},{b},{c},{d})"
            );
        }
    }

    #[test]
    fn non_block_tuples_are_rejected() {
        // Gray codes of (0,1,2,3) at n=3 are 000,001,011,010: 0⊕1 flips
        // the last wire but 0⊕2 flips two bits
        assert!(build_w_word(0, 1, 2, 7, 3).is_err());
        assert!(build_w_word(0, 3, 5, 6, 3).is_err());
    }

    #[test]
    fn distinguished_tuple_is_its_own_block() {
        // (0,1,3,2) is a block tuple; its word still evaluates correctly
        let w = build_w_word(0, 1, 3, 2, 3).unwrap();
        assert_eq!(pword_semantics(&w).unwrap(), hh_matrix(0, 1, 3, 2, 8));
    }
}
