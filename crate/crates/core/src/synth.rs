//! Exact synthesis: decompose elements of U_N(Z[1/√2]) into generator
//! words, and into paired generators when both parities are even.
//!
//! The synthesis loop emits words W₁,…,W_ℓ with W_ℓ···W₁·A = I, reducing
//! the least denominator exponent of each column with two-level Hadamards
//! and then clearing the remaining signed permutation. Since every
//! generator is an involution, reversing the factors of each Wᵢ and
//! keeping the emission order yields a word whose product is exactly A.

use crate::ring::RingMatrix;
use crate::words::{word_parities, Gen, PWord, PairedGen, Word};
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("input matrix is not square")]
    NotSquare,
    #[error("input matrix is not orthogonal (not in U_N(Z[1/√2]))")]
    NotOrthogonal,
    #[error("input has odd H- or ZX-parity; not a product of paired generators")]
    OddParity,
    #[error("internal progress failure during lde reduction: {0}")]
    InternalProgressFailure(String),
}

/// Rows whose numerator at the column's lde level has an odd 1-coefficient,
/// together with the parity of their √2-coefficient. These are exactly the
/// entries ≡ 1 or ≡ 1+√2 (mod 2) after scaling by √2^k.
fn odd_rows(b: &RingMatrix, j: usize, k: u32) -> Vec<(usize, bool)> {
    (0..b.n_rows())
        .filter_map(|i| {
            let (na, nb) = b.get(i, j).numerator_at(k);
            if na.is_odd() {
                Some((i, nb.is_odd()))
            } else {
                None
            }
        })
        .collect()
}

/// Decompose an orthogonal matrix over Z[1/√2] into a word over G_N with
/// `word_semantics(w) = A` exactly.
pub fn exact_synthesize(a: &RingMatrix) -> Result<Word, SynthError> {
    if a.n_rows() != a.n_cols() {
        return Err(SynthError::NotSquare);
    }
    if !a.is_orthogonal() {
        return Err(SynthError::NotOrthogonal);
    }
    let n = a.n_rows();
    let mut b = a.clone();
    // each emission is one output word Wᵢ of the loop, in emission order
    let mut emitted: Vec<Vec<Gen>> = Vec::new();

    // column phase: drive lde(B·e_j) to zero for j = N−1, …, 0
    for j in (0..n).rev() {
        let mut k = b.column_lde(j);
        while k > 0 {
            let odd = odd_rows(&b, j, k);
            let measure = (k, odd.len());
            let &(i1, b1) = odd.first().ok_or_else(|| {
                SynthError::InternalProgressFailure(format!(
                    "no odd entry in column {j} at level {k}"
                ))
            })?;
            let &(i2, _) = odd.iter().find(|&&(i, bp)| i > i1 && bp == b1).ok_or_else(|| {
                SynthError::InternalProgressFailure(format!(
                    "no residue partner in column {j} at level {k}"
                ))
            })?;
            emitted.push(vec![Gen::HGen(i1, i2)]);
            b.hadamard_rows(i1, i2);
            let k_new = b.column_lde(j);
            let measure_new = (k_new, odd_rows(&b, j, k_new).len());
            // lde itself does not always drop in one step, but the pair
            // (lde, #odd entries at that level) strictly decreases
            if measure_new >= measure {
                return Err(SynthError::InternalProgressFailure(format!(
                    "measure did not decrease in column {j}: {measure:?} -> {measure_new:?}"
                )));
            }
            k = k_new;
        }
    }

    // all ldes are zero, so B must now be a signed permutation
    if b.as_signed_permutation().is_none() {
        return Err(SynthError::InternalProgressFailure(
            "matrix is not a signed permutation after the column phase".into(),
        ));
    }

    // permutation phase: clear each column down to e_j
    for j in (0..n).rev() {
        let (perm, signs) = b.as_signed_permutation().unwrap();
        let row = perm[j];
        let tau = signs[j];
        if row == j && !tau {
            continue;
        }
        if row > j {
            return Err(SynthError::InternalProgressFailure(format!(
                "column {j} points above the working region"
            )));
        }
        if row == j {
            emitted.push(vec![Gen::Neg(j)]);
            b.negate_row(j);
        } else {
            // W = X_[row,j]·(−1)^τ_[row]
            if tau {
                emitted.push(vec![Gen::XGen(row, j), Gen::Neg(row)]);
                b.negate_row(row);
            } else {
                emitted.push(vec![Gen::XGen(row, j)]);
            }
            b.swap_rows(row, j);
        }
    }

    if b != RingMatrix::identity(n) {
        return Err(SynthError::InternalProgressFailure(
            "matrix not reduced to the identity".into(),
        ));
    }

    // A = (W_ℓ···W₁)⁻¹ = reverse of each Wᵢ, kept in emission order
    let gens: Vec<Gen> =
        emitted.iter().flat_map(|w| w.iter().rev().copied()).collect();
    Ok(Word::new(n, gens))
}

/// H- and ZX-parities of a matrix: the parities of any decomposition into
/// generators, computed from the word that `exact_synthesize` produces.
pub fn matrix_parities(a: &RingMatrix) -> Result<(bool, bool), SynthError> {
    Ok(word_parities(&exact_synthesize(a)?))
}

/// Decompose a matrix with even H- and ZX-parities into a word over the
/// paired generator set P_N.
pub fn synthesize_even(a: &RingMatrix) -> Result<PWord, SynthError> {
    let w = exact_synthesize(a)?;
    let (h, zx) = word_parities(&w);
    if h || zx {
        return Err(SynthError::OddParity);
    }
    // the synthesis output is a block of H generators followed by a block
    // of sign/permutation generators
    let split = w.gens.iter().position(|g| !g.is_h()).unwrap_or(w.gens.len());
    let (h_block, zx_block) = w.gens.split_at(split);
    debug_assert!(zx_block.iter().all(|g| !g.is_h()));

    let mut pgens = Vec::with_capacity(w.gens.len() / 2);
    for pair in h_block.chunks(2) {
        match *pair {
            [Gen::HGen(a, b), Gen::HGen(c, d)] => pgens.push(PairedGen::Hh((a, b), (c, d))),
            _ => unreachable!("odd H block despite even parity"),
        }
    }
    for pair in zx_block.chunks(2) {
        let p = match *pair {
            [Gen::Neg(a), Gen::Neg(b)] => PairedGen::Zz(a, b),
            [Gen::Neg(s), Gen::XGen(c, d)] => PairedGen::Zx(s, (c, d)),
            [Gen::XGen(a, b), Gen::XGen(c, d)] => PairedGen::Xx((a, b), (c, d)),
            // X_[c,d]·(−1)_[s] = (−1)_[τ_cd(s)]·X_[c,d]
            [Gen::XGen(c, d), Gen::Neg(s)] => {
                let s2 = if s == c {
                    d
                } else if s == d {
                    c
                } else {
                    s
                };
                PairedGen::Zx(s2, (c, d))
            }
            _ => unreachable!("odd ZX block despite even parity"),
        };
        pgens.push(p);
    }
    Ok(PWord::new(w.dim, pgens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingElem;
    use crate::words::{pword_semantics, random_word, word_semantics};

    fn r(a: i64, b: i64, k: u32) -> RingElem {
        RingElem::new(a, b, k)
    }

    #[test]
    fn identity_synthesizes_to_empty_word() {
        let w = exact_synthesize(&RingMatrix::identity(4)).unwrap();
        assert!(w.is_empty());
        assert!(synthesize_even(&RingMatrix::identity(8)).unwrap().pgens.is_empty());
    }

    #[test]
    fn single_transposition() {
        let m = crate::words::gen_matrix(Gen::XGen(0, 1), 4).unwrap();
        let w = exact_synthesize(&m).unwrap();
        assert_eq!(word_semantics(&w).unwrap(), m);
        assert_eq!(word_parities(&w), (false, true));
    }

    #[test]
    fn ppair_matrix_roundtrip() {
        let m = RingMatrix::from_rows(vec![
            vec![r(1, 1, 3), r(1, 0, 3), r(1, 0, 3), r(-1, 1, 3)],
            vec![r(1, 0, 3), r(-1, -1, 3), r(-1, 1, 3), r(-1, 0, 3)],
            vec![r(1, 0, 3), r(-1, 1, 3), r(-1, -1, 3), r(-1, 0, 3)],
            vec![r(-1, 1, 3), r(-1, 0, 3), r(-1, 0, 3), r(1, 1, 3)],
        ]);
        let w = exact_synthesize(&m).unwrap();
        assert_eq!(word_semantics(&w).unwrap(), m);
    }

    /// H⊗H has columns whose lde stays put for one Hadamard step; only the
    /// lexicographic (lde, #odd entries) measure strictly decreases.
    #[test]
    fn lde_can_plateau_but_synthesis_succeeds() {
        let h = RingMatrix::from_rows(vec![
            vec![r(1, 0, 1), r(1, 0, 1)],
            vec![r(1, 0, 1), r(-1, 0, 1)],
        ]);
        // H⊗H as an explicit 4×4 product
        let mut hh = RingMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let v = &h.get(i >> 1, j >> 1).clone() * h.get(i & 1, j & 1);
                hh.set(i, j, v);
            }
        }
        let w = exact_synthesize(&hh).unwrap();
        assert_eq!(word_semantics(&w).unwrap(), hh);
    }

    #[test]
    fn random_word_roundtrip_and_parity_invariance() {
        for (i, &dim) in [2usize, 4, 8].iter().enumerate() {
            for seed in 0..12u64 {
                let w = random_word(dim, 18, seed + 100 * i as u64);
                let m = word_semantics(&w).unwrap();
                let w2 = exact_synthesize(&m).unwrap();
                assert_eq!(word_semantics(&w2).unwrap(), m, "dim {dim} seed {seed}");
                assert_eq!(word_parities(&w2), word_parities(&w), "dim {dim} seed {seed}");
            }
        }
    }

    #[test]
    fn synthesis_output_is_h_block_then_zx_block() {
        for seed in 0..20u64 {
            let w = random_word(8, 16, seed);
            let out = exact_synthesize(&word_semantics(&w).unwrap()).unwrap();
            let split = out.gens.iter().position(|g| !g.is_h()).unwrap_or(out.gens.len());
            assert!(out.gens[split..].iter().all(|g| !g.is_h()), "seed {seed}");
        }
    }

    #[test]
    fn paired_synthesis_agrees_semantically() {
        // ⟦H_[0,1]H_[2,3]⟧ at N=8 has even parities
        let pw_in = PWord::new(8, vec![PairedGen::Hh((0, 1), (2, 3))]);
        let m = pword_semantics(&pw_in).unwrap();
        let pw = synthesize_even(&m).unwrap();
        assert_eq!(pword_semantics(&pw).unwrap(), m);

        for seed in 0..10u64 {
            // flattened pair words always have even parities
            let w = random_word(8, 9, seed);
            let doubled = w.concat(&w); // even parities by construction
            let m = word_semantics(&doubled).unwrap();
            let pw = synthesize_even(&m).unwrap();
            assert_eq!(pword_semantics(&pw).unwrap(), m, "seed {seed}");
        }
    }

    #[test]
    fn odd_parity_is_rejected() {
        let m = crate::words::gen_matrix(Gen::Neg(0), 8).unwrap();
        assert_eq!(matrix_parities(&m).unwrap(), (false, true));
        assert_eq!(synthesize_even(&m), Err(SynthError::OddParity));
        // diag(1,…,1,−1) at N=8
        let m = crate::words::gen_matrix(Gen::Neg(7), 8).unwrap();
        assert_eq!(synthesize_even(&m), Err(SynthError::OddParity));
        // single Hadamard generator: odd H-parity
        let m = crate::words::gen_matrix(Gen::HGen(2, 5), 8).unwrap();
        assert_eq!(synthesize_even(&m), Err(SynthError::OddParity));
    }

    #[test]
    fn non_orthogonal_inputs_are_rejected() {
        assert_eq!(exact_synthesize(&RingMatrix::zeros(3, 3)), Err(SynthError::NotOrthogonal));
        assert_eq!(exact_synthesize(&RingMatrix::zeros(2, 3)), Err(SynthError::NotSquare));
        let mut m = RingMatrix::identity(2);
        m.set(0, 0, r(0, 1, 0)); // √2 on the diagonal
        assert_eq!(exact_synthesize(&m), Err(SynthError::NotOrthogonal));
    }

    #[test]
    fn identity_matrix_parities() {
        assert_eq!(matrix_parities(&RingMatrix::identity(8)).unwrap(), (false, false));
    }
}
