//! Canonical forms extracted from exact semantics.
//!
//! Uniqueness of each normal form given the semantics lets us read the
//! canonical word directly off the matrix instead of replaying rewrite
//! derivations: the H-free form (B) is a signed staircase of adjacent
//! transpositions behind a block of sign pairs, the low-H form adds at
//! most one leading Hadamard pair, and 1-qubit {H,Z} circuits collapse to
//! sixteen classes.

use crate::circuit::{Circuit, Gate};
use crate::ring::RingMatrix;
use crate::words::{word_semantics, Gen, Word};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NfError {
    #[error("word contains Hadamard generators")]
    ContainsH,
    #[error("word has odd ZX-parity; form (B) only represents even words")]
    OddParityWord,
    #[error("word has more than one Hadamard pair")]
    TooManyH,
    #[error("1-qubit normal forms are over the {{H, Z}} alphabet only")]
    BadAlphabet,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no head pair matches the word's semantics")]
    NoHeadPair,
}

// ---------------------------------------------------------------------------
// form (B): H-free words

/// The canonical H-free shape: sign pairs, then for each stage i a run of
/// signed adjacent transpositions starting at d_i (d_i = N−i means an
/// empty run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormB {
    pub dim: usize,
    /// (a₁,b₁),… with a₁ < b₁ < a₂ < b₂ < …
    pub sign_pairs: Vec<(usize, usize)>,
    /// d_i for i = 1,…,N−1, each in {0,…,N−i}.
    pub d: Vec<usize>,
}

impl NormalFormB {
    pub fn identity(dim: usize) -> Self {
        NormalFormB { dim, sign_pairs: Vec::new(), d: (1..dim).map(|i| dim - i).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == NormalFormB::identity(self.dim)
    }

    /// The encoded word: ∏(−1)(−1) · ∏_i ∏_{j=d_i}^{N−i−1} ((−1)_[j] X_[j,j+1]).
    pub fn to_word(&self) -> Word {
        let n = self.dim;
        let mut gens = Vec::new();
        for &(a, b) in &self.sign_pairs {
            gens.push(Gen::Neg(a));
            gens.push(Gen::Neg(b));
        }
        for (i, &di) in self.d.iter().enumerate() {
            let top = n - (i + 1); // N − i in 1-based stage numbering
            for j in di..top {
                gens.push(Gen::Neg(j));
                gens.push(Gen::XGen(j, j + 1));
            }
        }
        Word::new(n, gens)
    }
}

impl fmt::Display for NormalFormB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signs={:?} d={:?}", self.sign_pairs, self.d)
    }
}

/// Extract form (B) from a signed permutation matrix.
fn nf_from_signed_perm(m: &RingMatrix) -> Result<NormalFormB, NfError> {
    let n = m.n_rows();
    let (perm, _) = m
        .as_signed_permutation()
        .ok_or_else(|| NfError::PreconditionViolated("not a signed permutation".into()))?;

    // peel the permutation stage by stage from the top state down
    let mut rho = perm;
    let mut d = Vec::with_capacity(n - 1);
    for i in 1..n {
        let t = n - i;
        let di = rho[t];
        d.push(di);
        // ρ := α_i⁻¹ ∘ ρ, where α_i maps t ↦ d_i and j ↦ j+1 on [d_i, t)
        for v in rho.iter_mut() {
            if *v == di {
                *v = t;
            } else if *v > di && *v <= t {
                *v -= 1;
            }
        }
    }
    debug_assert!(rho.iter().enumerate().all(|(j, &v)| j == v));

    // divide out the signed staircase and read the residual diagonal
    let staircase = NormalFormB { dim: n, sign_pairs: Vec::new(), d };
    let sw = staircase.to_word();
    let inv = word_semantics(&sw.reversed()).map_err(|_| NfError::ContainsH)?;
    let diag = m.mat_mul(&inv).unwrap();
    let (perm, signs) = diag
        .as_signed_permutation()
        .ok_or_else(|| NfError::PreconditionViolated("residual not diagonal".into()))?;
    if perm.iter().enumerate().any(|(j, &v)| j != v) {
        return Err(NfError::PreconditionViolated("residual not diagonal".into()));
    }
    let flips: Vec<usize> = (0..n).filter(|&j| signs[j]).collect();
    if flips.len() % 2 != 0 {
        return Err(NfError::OddParityWord);
    }
    let sign_pairs = flips.chunks(2).map(|c| (c[0], c[1])).collect();
    Ok(NormalFormB { dim: n, sign_pairs, d: staircase.d })
}

/// Normal form of an H-free word (form (B)).
pub fn nf_hfree(w: &Word) -> Result<NormalFormB, NfError> {
    if w.gens.iter().any(Gen::is_h) {
        return Err(NfError::ContainsH);
    }
    let m = word_semantics(w).map_err(|e| NfError::PreconditionViolated(e.to_string()))?;
    let nf = nf_from_signed_perm(&m)?;
    debug_assert_eq!(word_semantics(&nf.to_word()).unwrap(), m);
    Ok(nf)
}

// ---------------------------------------------------------------------------
// low-H words: at most one Hadamard pair

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowHNormalForm {
    /// Leading (H_[a,b] H_[c,d]) pair, if the word is not a signed
    /// permutation. Satisfies a < b, c < d, {a,b} ≠ {c,d}, and a < c when
    /// the pairs are disjoint; overlapping pairs take the lexicographically
    /// least tuple meeting those conditions.
    pub head: Option<(usize, usize, usize, usize)>,
    pub tail: NormalFormB,
}

impl LowHNormalForm {
    pub fn to_word(&self) -> Word {
        let mut gens = Vec::new();
        if let Some((a, b, c, d)) = self.head {
            gens.push(Gen::HGen(a, b));
            gens.push(Gen::HGen(c, d));
        }
        gens.extend(self.tail.to_word().gens);
        Word::new(self.tail.dim, gens)
    }
}

impl fmt::Display for LowHNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.head {
            Some(h) => write!(f, "head={h:?} {}", self.tail),
            None => write!(f, "head=none {}", self.tail),
        }
    }
}

fn head_candidates(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut v = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                for d in c + 1..n {
                    if (a, b) == (c, d) {
                        continue;
                    }
                    let disjoint = a != c && a != d && b != c && b != d;
                    if disjoint && a > c {
                        continue;
                    }
                    v.push((a, b, c, d));
                }
            }
        }
    }
    v
}

/// Normal form of a word with at most one Hadamard pair (0 or 2 H
/// generators).
pub fn nf_low_h(w: &Word) -> Result<LowHNormalForm, NfError> {
    let h_count = w.gens.iter().filter(|g| g.is_h()).count();
    if h_count > 2 || h_count == 1 {
        return Err(NfError::TooManyH);
    }
    let m = word_semantics(w).map_err(|e| NfError::PreconditionViolated(e.to_string()))?;
    nf_low_h_of_matrix(&m)
}

/// Low-H normal form as a function of the exact matrix.
pub fn nf_low_h_of_matrix(m: &RingMatrix) -> Result<LowHNormalForm, NfError> {
    if m.as_signed_permutation().is_some() {
        return Ok(LowHNormalForm { head: None, tail: nf_from_signed_perm(m)? });
    }
    let n = m.n_rows();
    for (a, b, c, d) in head_candidates(n) {
        // residual = (H_[a,b]H_[c,d])⁻¹·M = H_[c,d]·H_[a,b]·M
        let inv = word_semantics(&Word::new(n, vec![Gen::HGen(c, d), Gen::HGen(a, b)])).unwrap();
        let residual = inv.mat_mul(m).unwrap();
        if residual.as_signed_permutation().is_some() {
            return Ok(LowHNormalForm {
                head: Some((a, b, c, d)),
                tail: nf_from_signed_perm(&residual)?,
            });
        }
    }
    Err(NfError::NoHeadPair)
}

/// Exact equivalence of two words when one has at most one Hadamard pair
/// and the other at most two (the class where semantic equality coincides
/// with derivational equivalence).
pub fn decide_equiv_low_h(w1: &Word, w2: &Word) -> Result<bool, NfError> {
    if w1.dim != w2.dim {
        return Err(NfError::PreconditionViolated("dimension mismatch".into()));
    }
    let h1 = w1.gens.iter().filter(|g| g.is_h()).count();
    let h2 = w2.gens.iter().filter(|g| g.is_h()).count();
    if h1 % 2 != 0 || h2 % 2 != 0 {
        return Err(NfError::PreconditionViolated("unpaired H generator".into()));
    }
    let (p1, p2) = (h1 / 2, h2 / 2);
    if p1.min(p2) > 1 || p1.max(p2) > 2 {
        return Err(NfError::PreconditionViolated(format!("too many H pairs: {p1} and {p2}")));
    }
    let m1 = word_semantics(w1).map_err(|e| NfError::PreconditionViolated(e.to_string()))?;
    let m2 = word_semantics(w2).map_err(|e| NfError::PreconditionViolated(e.to_string()))?;
    Ok(m1 == m2)
}

// ---------------------------------------------------------------------------
// 1-qubit normal form over {H, Z}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneQubitFamily {
    Plain,
    ZPrefixed,
}

/// One of the sixteen 1-qubit classes: (HZ)^k or Z·(HZ)^k, k ∈ {0,…,7}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneQubitNf {
    pub family: OneQubitFamily,
    pub k: u8,
}

impl OneQubitNf {
    /// Canonical gate list: k repetitions of [Z, H] give the matrix
    /// (H·Z)^k, with a trailing Z for the prefixed family.
    pub fn to_gates(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        for _ in 0..self.k {
            gates.push(Gate::Z(0));
            gates.push(Gate::H(0));
        }
        if self.family == OneQubitFamily::ZPrefixed {
            gates.push(Gate::Z(0));
        }
        gates
    }

    pub fn matrix(&self) -> RingMatrix {
        crate::circuit::semantics(&Circuit::new(1, self.to_gates())).unwrap()
    }

    pub fn all() -> Vec<OneQubitNf> {
        let mut v = Vec::new();
        for family in [OneQubitFamily::Plain, OneQubitFamily::ZPrefixed] {
            for k in 0..8 {
                v.push(OneQubitNf { family, k });
            }
        }
        v
    }
}

impl fmt::Display for OneQubitNf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            OneQubitFamily::Plain => write!(f, "(HZ)^{}", self.k),
            OneQubitFamily::ZPrefixed => write!(f, "Z(HZ)^{}", self.k),
        }
    }
}

/// Normal form of a 1-qubit circuit over {H, Z}: the unique class with
/// the same exact 2×2 matrix.
pub fn nf_1qubit(c: &Circuit) -> Result<OneQubitNf, NfError> {
    if c.n_qubits != 1 {
        return Err(NfError::BadAlphabet);
    }
    for g in &c.gates {
        if !matches!(g, Gate::H(0) | Gate::Z(0)) {
            return Err(NfError::BadAlphabet);
        }
    }
    let m = crate::circuit::semantics(c).unwrap();
    OneQubitNf::all()
        .into_iter()
        .find(|nf| nf.matrix() == m)
        .ok_or_else(|| NfError::PreconditionViolated("matrix outside the 16 classes".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{random_word, word_parities};

    /// Random even H-free word at the given dimension.
    fn random_hfree_even(dim: usize, len: usize, seed: u64) -> Word {
        let gens: Vec<Gen> =
            random_word(dim, len, seed).gens.into_iter().filter(|g| !g.is_h()).collect();
        let mut w = Word::new(dim, gens);
        if word_parities(&w).1 {
            w.gens.push(Gen::Neg(0));
            w.gens.push(Gen::Neg(0));
            w.gens.remove(0);
        }
        debug_assert!(!word_parities(&w).1);
        w
    }

    #[test]
    fn hfree_examples() {
        let n = 4;
        // ((−1)_0 X_01)((−1)_1 X_01) ≈ ε
        let w = Word::new(n, vec![Gen::Neg(0), Gen::XGen(0, 1), Gen::Neg(1), Gen::XGen(0, 1)]);
        let nf = nf_hfree(&w).unwrap();
        assert!(nf.is_identity());
        // two sign flips, no permutation part
        let w = Word::new(n, vec![Gen::Neg(0), Gen::Neg(2)]);
        let nf = nf_hfree(&w).unwrap();
        assert_eq!(nf.sign_pairs, vec![(0, 2)]);
        assert_eq!(nf.d, vec![3, 2, 1]);
        // empty word
        assert!(nf_hfree(&Word::empty(n)).unwrap().is_identity());
        // H generators are rejected
        assert_eq!(nf_hfree(&Word::new(4, vec![Gen::HGen(0, 1)])), Err(NfError::ContainsH));
        // odd words have no form (B)
        assert_eq!(nf_hfree(&Word::new(4, vec![Gen::Neg(0)])), Err(NfError::OddParityWord));
    }

    #[test]
    fn hfree_preserves_semantics_and_is_unique() {
        for seed in 0..60u64 {
            let w = random_hfree_even(8, 13, seed);
            let m = word_semantics(&w).unwrap();
            let nf = nf_hfree(&w).unwrap();
            assert_eq!(word_semantics(&nf.to_word()).unwrap(), m, "seed {seed}");
            // a semantically equal word has the identical normal form
            let w2 = crate::synth::exact_synthesize(&m).unwrap();
            assert_eq!(nf_hfree(&w2).unwrap(), nf, "seed {seed}");
            // interleaved ordering of the sign pair positions
            let flat: Vec<usize> = nf.sign_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            assert!(flat.windows(2).all(|w| w[0] < w[1]), "seed {seed}");
            // d_i bounds
            assert!(nf.d.iter().enumerate().all(|(i, &di)| di <= 8 - (i + 1)));
        }
    }

    #[test]
    fn low_h_examples() {
        let n = 8;
        // ordering normalization flips the pair order
        let w = Word::new(n, vec![Gen::HGen(2, 3), Gen::HGen(0, 1)]);
        let nf = nf_low_h(&w).unwrap();
        assert_eq!(nf.head, Some((0, 1, 2, 3)));
        assert!(nf.tail.is_identity());
        assert_eq!(word_semantics(&nf.to_word()).unwrap(), word_semantics(&w).unwrap());
        // an involution pair cancels
        let w = Word::new(n, vec![Gen::HGen(0, 1), Gen::HGen(0, 1)]);
        let nf = nf_low_h(&w).unwrap();
        assert_eq!(nf.head, None);
        assert!(nf.tail.is_identity());
        // H-free words delegate to form (B)
        let w = Word::new(n, vec![Gen::Neg(1), Gen::Neg(5)]);
        let nf = nf_low_h(&w).unwrap();
        assert_eq!(nf.head, None);
        assert_eq!(nf.tail.sign_pairs, vec![(1, 5)]);
        // more than one pair violates the precondition
        let w = Word::new(n, vec![Gen::HGen(0, 1), Gen::HGen(2, 3), Gen::HGen(4, 5), Gen::HGen(6, 7)]);
        assert_eq!(nf_low_h(&w), Err(NfError::TooManyH));
    }

    #[test]
    fn low_h_uniqueness_on_equal_words() {
        for seed in 0..25u64 {
            let tail = random_hfree_even(8, 9, seed);
            let mut gens = vec![Gen::HGen(1, 4), Gen::HGen(6, 2)];
            gens.extend(tail.gens.iter().copied());
            let w1 = Word::new(8, gens);
            // reshuffled semantic twin: conjugate by a cancelling pair
            let mut gens2 = vec![Gen::Neg(3), Gen::Neg(3)];
            gens2.extend(w1.gens.iter().copied());
            let w2 = Word::new(8, gens2);
            let nf1 = nf_low_h(&w1).unwrap();
            let nf2 = nf_low_h(&w2).unwrap();
            assert_eq!(nf1, nf2, "seed {seed}");
            assert_eq!(
                word_semantics(&nf1.to_word()).unwrap(),
                word_semantics(&w1).unwrap(),
                "seed {seed}"
            );
            if let Some((a, b, c, d)) = nf1.head {
                assert!(a < b && c < d && (a, b) != (c, d));
                let disjoint = a != c && a != d && b != c && b != d;
                if disjoint {
                    assert!(a < c);
                }
            }
        }
    }

    #[test]
    fn equivalence_decision() {
        let n = 8;
        let e = Word::empty(n);
        let zz = Word::new(n, vec![Gen::Neg(0), Gen::Neg(0)]);
        assert!(decide_equiv_low_h(&e, &zz).unwrap());
        let ab = Word::new(n, vec![Gen::HGen(0, 1), Gen::HGen(2, 3)]);
        let ba = Word::new(n, vec![Gen::HGen(2, 3), Gen::HGen(0, 1)]);
        assert!(decide_equiv_low_h(&ab, &ba).unwrap());
        let d0 = Word::new(n, vec![Gen::Neg(0), Gen::Neg(2)]);
        let d1 = Word::new(n, vec![Gen::Neg(1), Gen::Neg(2)]);
        assert!(!decide_equiv_low_h(&d0, &d1).unwrap());
        // one side may carry two pairs
        let two = ab.concat(&ba);
        assert!(decide_equiv_low_h(&e, &two).unwrap());
        // but two pairs on both sides are outside the decidable class
        assert!(decide_equiv_low_h(&two, &two).is_err());
        // unpaired H generators are rejected
        let odd = Word::new(n, vec![Gen::HGen(0, 1)]);
        assert!(decide_equiv_low_h(&odd, &e).is_err());
    }

    #[test]
    fn one_qubit_classes() {
        // H·H = ε
        let c = Circuit::new(1, vec![Gate::H(0), Gate::H(0)]);
        assert_eq!(nf_1qubit(&c).unwrap(), OneQubitNf { family: OneQubitFamily::Plain, k: 0 });
        // (HZ)^9 reduces to k = 1: as a gate list, 9 × [Z, H]
        let mut gates = Vec::new();
        for _ in 0..9 {
            gates.push(Gate::Z(0));
            gates.push(Gate::H(0));
        }
        let c = Circuit::new(1, gates);
        assert_eq!(nf_1qubit(&c).unwrap(), OneQubitNf { family: OneQubitFamily::Plain, k: 1 });
        // a bare Z
        let c = Circuit::new(1, vec![Gate::Z(0)]);
        assert_eq!(
            nf_1qubit(&c).unwrap(),
            OneQubitNf { family: OneQubitFamily::ZPrefixed, k: 0 }
        );
        // other gates rejected
        let c = Circuit::new(1, vec![Gate::X(0)]);
        assert_eq!(nf_1qubit(&c), Err(NfError::BadAlphabet));
    }

    #[test]
    fn sixteen_distinct_classes() {
        let all = OneQubitNf::all();
        assert_eq!(all.len(), 16);
        for i in 0..16 {
            for j in 0..i {
                assert_ne!(all[i].matrix(), all[j].matrix(), "{} vs {}", all[i], all[j]);
            }
        }
    }

    #[test]
    fn exhaustive_short_words() {
        // every {H,Z} word of length ≤ 7 lands on a class with the same
        // exact matrix (the acceptance suite runs the full length-12 sweep)
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        for len in 0..=7usize {
            for bits in 0..(1u32 << len) {
                let gates: Vec<Gate> = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { Gate::H(0) } else { Gate::Z(0) })
                    .collect();
                let c = Circuit::new(1, gates);
                let nf = nf_1qubit(&c).unwrap();
                assert_eq!(nf.matrix(), crate::circuit::semantics(&c).unwrap());
                seen.insert(nf);
            }
        }
        assert!(seen.len() <= 16);
    }
}
