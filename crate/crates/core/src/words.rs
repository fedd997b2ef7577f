//! Words over the one/two-level generator set G_N and the paired set P_N.
//!
//! A word is read left-to-right as a matrix product: the leftmost generator
//! is the leftmost factor, so ⟦g₁ g₂ … g_k⟧ = g₁·g₂·…·g_k. Every other
//! module inherits this convention.

use crate::ring::{RingElem, RingMatrix};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("generator index out of range for dimension {dim}: {gen}")]
    IndexOutOfRange { dim: usize, gen: String },
    #[error("two-level generator needs distinct indices: {0}")]
    EqualIndices(String),
    #[error("parse error at line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// A generator of G_N: (−1)_[a], X_[a,b], or H_[a,b].
///
/// Indices are not required ordered; H_[a,b] and H_[b,a] are different
/// matrices, X_[a,b] and X_[b,a] are equal but kept syntactically distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    Neg(usize),
    XGen(usize, usize),
    HGen(usize, usize),
}

impl Gen {
    pub fn validate(&self, dim: usize) -> Result<(), WordError> {
        match *self {
            Gen::Neg(a) => {
                if a >= dim {
                    return Err(WordError::IndexOutOfRange { dim, gen: self.to_string() });
                }
            }
            Gen::XGen(a, b) | Gen::HGen(a, b) => {
                if a >= dim || b >= dim {
                    return Err(WordError::IndexOutOfRange { dim, gen: self.to_string() });
                }
                if a == b {
                    return Err(WordError::EqualIndices(self.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn is_h(&self) -> bool {
        matches!(self, Gen::HGen(..))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gen::Neg(a) => write!(f, "Z[{a}]"),
            Gen::XGen(a, b) => write!(f, "X[{a},{b}]"),
            Gen::HGen(a, b) => write!(f, "H[{a},{b}]"),
        }
    }
}

/// A word over G_N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub dim: usize,
    pub gens: Vec<Gen>,
}

impl Word {
    pub fn new(dim: usize, gens: Vec<Gen>) -> Self {
        Word { dim, gens }
    }

    pub fn empty(dim: usize) -> Self {
        Word { dim, gens: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), WordError> {
        for g in &self.gens {
            g.validate(self.dim)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.dim, other.dim);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().copied());
        Word { dim: self.dim, gens }
    }

    /// Inverse word: reversal (every generator is an involution).
    pub fn reversed(&self) -> Word {
        let mut gens = self.gens.clone();
        gens.reverse();
        Word { dim: self.dim, gens }
    }
}

/// The N×N matrix of a single generator.
pub fn gen_matrix(g: Gen, dim: usize) -> Result<RingMatrix, WordError> {
    g.validate(dim)?;
    let mut m = RingMatrix::identity(dim);
    match g {
        Gen::Neg(a) => {
            m.set(a, a, -&RingElem::one());
        }
        Gen::XGen(a, b) => {
            m.set(a, a, RingElem::zero());
            m.set(b, b, RingElem::zero());
            m.set(a, b, RingElem::one());
            m.set(b, a, RingElem::one());
        }
        Gen::HGen(a, b) => {
            let h = RingElem::inv_sqrt2();
            m.set(a, a, h.clone());
            m.set(a, b, h.clone());
            m.set(b, a, h.clone());
            m.set(b, b, -&h);
        }
    }
    Ok(m)
}

/// Exact product of the generator matrices in word order.
pub fn word_semantics(w: &Word) -> Result<RingMatrix, WordError> {
    w.validate()?;
    let mut acc = RingMatrix::identity(w.dim);
    // right-multiplying the accumulator by each generator in order costs
    // two columns per generator instead of a full matrix product
    for g in &w.gens {
        match *g {
            Gen::Neg(a) => acc.negate_col(a),
            Gen::XGen(a, b) => acc.swap_cols(a, b),
            Gen::HGen(a, b) => acc.hadamard_cols(a, b),
        }
    }
    Ok(acc)
}

/// H-parity and ZX-parity of a word: (#H mod 2, (#Neg + #X) mod 2).
pub fn word_parities(w: &Word) -> (bool, bool) {
    let mut h = false;
    let mut zx = false;
    for g in &w.gens {
        match g {
            Gen::HGen(..) => h = !h,
            Gen::Neg(..) | Gen::XGen(..) => zx = !zx,
        }
    }
    (h, zx)
}

/// A generator of P_N: one of the four paired shapes of valid pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairedGen {
    /// ((−1)_[a] (−1)_[b]); a = b is allowed.
    Zz(usize, usize),
    /// ((−1)_[s] X_[a,b]).
    Zx(usize, (usize, usize)),
    /// (X_[a,b] X_[c,d]).
    Xx((usize, usize), (usize, usize)),
    /// (H_[a,b] H_[c,d]).
    Hh((usize, usize), (usize, usize)),
}

impl PairedGen {
    pub fn flatten(&self) -> [Gen; 2] {
        match *self {
            PairedGen::Zz(a, b) => [Gen::Neg(a), Gen::Neg(b)],
            PairedGen::Zx(s, (a, b)) => [Gen::Neg(s), Gen::XGen(a, b)],
            PairedGen::Xx((a, b), (c, d)) => [Gen::XGen(a, b), Gen::XGen(c, d)],
            PairedGen::Hh((a, b), (c, d)) => [Gen::HGen(a, b), Gen::HGen(c, d)],
        }
    }

    pub fn validate(&self, dim: usize) -> Result<(), WordError> {
        for g in self.flatten() {
            g.validate(dim)?;
        }
        Ok(())
    }
}

impl fmt::Display for PairedGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [g1, g2] = self.flatten();
        write!(f, "({g1} {g2})")
    }
}

/// A word over P_N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PWord {
    pub dim: usize,
    pub pgens: Vec<PairedGen>,
}

impl PWord {
    pub fn new(dim: usize, pgens: Vec<PairedGen>) -> Self {
        PWord { dim, pgens }
    }

    pub fn empty(dim: usize) -> Self {
        PWord { dim, pgens: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), WordError> {
        for p in &self.pgens {
            p.validate(self.dim)?;
        }
        Ok(())
    }

    pub fn concat(&self, other: &PWord) -> PWord {
        assert_eq!(self.dim, other.dim);
        let mut pgens = self.pgens.clone();
        pgens.extend(other.pgens.iter().copied());
        PWord { dim: self.dim, pgens }
    }
}

/// Flatten each pair into its two constituent generators, in order.
pub fn flatten(pw: &PWord) -> Word {
    let mut gens = Vec::with_capacity(pw.pgens.len() * 2);
    for p in &pw.pgens {
        gens.extend(p.flatten());
    }
    Word { dim: pw.dim, gens }
}

pub fn pword_semantics(pw: &PWord) -> Result<RingMatrix, WordError> {
    word_semantics(&flatten(pw))
}

/// True when every row and column holds exactly one ±1 entry.
pub fn is_signed_permutation(m: &RingMatrix) -> bool {
    m.as_signed_permutation().is_some()
}

/// Uniformly sampled generators with valid indices, deterministic per seed.
pub fn random_word(dim: usize, len: usize, seed: u64) -> Word {
    use rand::{Rng, SeedableRng};
    assert!(dim >= 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let a = rng.gen_range(0..dim);
        let b = loop {
            let b = rng.gen_range(0..dim);
            if b != a {
                break b;
            }
        };
        gens.push(match rng.gen_range(0..3) {
            0 => Gen::Neg(a),
            1 => Gen::XGen(a, b),
            _ => Gen::HGen(a, b),
        });
    }
    Word { dim, gens }
}

// ---------------------------------------------------------------------------
// text format: header `dim N`, then whitespace-separated generator tokens,
// with each PWord pair wrapped in parentheses

fn parse_gen_token(tok: &str, line: usize, col: usize) -> Result<Gen, WordError> {
    let err = |msg: &str| WordError::Parse { line, col, msg: format!("{msg}: `{tok}`") };
    let (kind, rest) = tok.split_at(1);
    let rest = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err("malformed generator token"))?;
    let parse_idx = |s: &str| s.trim().parse::<usize>().map_err(|_| err("bad index"));
    match kind {
        "Z" => Ok(Gen::Neg(parse_idx(rest)?)),
        "X" | "H" => {
            let (a, b) = rest.split_once(',').ok_or_else(|| err("expected two indices"))?;
            let (a, b) = (parse_idx(a)?, parse_idx(b)?);
            if kind == "X" {
                Ok(Gen::XGen(a, b))
            } else {
                Ok(Gen::HGen(a, b))
            }
        }
        _ => Err(err("unknown generator kind")),
    }
}

fn parse_header(text: &str) -> Result<(usize, Vec<(usize, Vec<String>)>), WordError> {
    let mut dim = None;
    let mut body = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if dim.is_none() {
            let rest = line.strip_prefix("dim").ok_or(WordError::Parse {
                line: ln + 1,
                col: 1,
                msg: "expected header `dim N`".into(),
            })?;
            let n: usize = rest.trim().parse().map_err(|_| WordError::Parse {
                line: ln + 1,
                col: 5,
                msg: "bad dimension".into(),
            })?;
            dim = Some(n);
        } else {
            body.push((ln + 1, line.split_whitespace().map(String::from).collect()));
        }
    }
    let dim = dim.ok_or(WordError::Parse { line: 1, col: 1, msg: "missing `dim N` header".into() })?;
    Ok((dim, body))
}

pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let (dim, body) = parse_header(text)?;
    let mut gens = Vec::new();
    for (ln, toks) in body {
        for (cn, tok) in toks.iter().enumerate() {
            if tok.contains('(') || tok.contains(')') {
                return Err(WordError::Parse {
                    line: ln,
                    col: cn + 1,
                    msg: "paired syntax in a plain word; use parse_pword".into(),
                });
            }
            gens.push(parse_gen_token(tok, ln, cn + 1)?);
        }
    }
    let w = Word { dim, gens };
    w.validate()?;
    Ok(w)
}

pub fn print_word(w: &Word) -> String {
    let mut s = format!("dim {}\n", w.dim);
    let toks: Vec<String> = w.gens.iter().map(|g| g.to_string()).collect();
    s.push_str(&toks.join(" "));
    s.push('\n');
    s
}

pub fn parse_pword(text: &str) -> Result<PWord, WordError> {
    let (dim, body) = parse_header(text)?;
    let mut pending: Option<(Gen, usize, usize)> = None;
    let mut open = false;
    let mut pgens = Vec::new();
    for (ln, toks) in body {
        for (cn, tok) in toks.iter().enumerate() {
            let col = cn + 1;
            let mut t = tok.as_str();
            if let Some(stripped) = t.strip_prefix('(') {
                if open {
                    return Err(WordError::Parse { line: ln, col, msg: "nested `(`".into() });
                }
                open = true;
                t = stripped;
            }
            let mut closes = false;
            if let Some(stripped) = t.strip_suffix(')') {
                closes = true;
                t = stripped;
            }
            let g = parse_gen_token(t, ln, col)?;
            match (pending.take(), closes) {
                (None, false) => pending = Some((g, ln, col)),
                (None, true) => {
                    return Err(WordError::Parse {
                        line: ln,
                        col,
                        msg: "pair closed after a single generator".into(),
                    })
                }
                (Some((g1, l1, c1)), true) => {
                    if !open {
                        return Err(WordError::Parse { line: ln, col, msg: "unopened `)`".into() });
                    }
                    open = false;
                    pgens.push(make_pair(g1, g, l1, c1)?);
                }
                (Some(_), false) => {
                    return Err(WordError::Parse {
                        line: ln,
                        col,
                        msg: "pair must contain exactly two generators".into(),
                    })
                }
            }
        }
    }
    if open || pending.is_some() {
        return Err(WordError::Parse { line: 0, col: 0, msg: "unterminated pair".into() });
    }
    let pw = PWord { dim, pgens };
    pw.validate()?;
    Ok(pw)
}

/// Combine two generators into one of the four P_N shapes.
pub fn make_pair(g1: Gen, g2: Gen, line: usize, col: usize) -> Result<PairedGen, WordError> {
    match (g1, g2) {
        (Gen::Neg(a), Gen::Neg(b)) => Ok(PairedGen::Zz(a, b)),
        (Gen::Neg(s), Gen::XGen(a, b)) => Ok(PairedGen::Zx(s, (a, b))),
        (Gen::XGen(a, b), Gen::XGen(c, d)) => Ok(PairedGen::Xx((a, b), (c, d))),
        (Gen::HGen(a, b), Gen::HGen(c, d)) => Ok(PairedGen::Hh((a, b), (c, d))),
        _ => Err(WordError::Parse {
            line,
            col,
            msg: format!("not a valid P_N pair shape: ({g1} {g2})"),
        }),
    }
}

pub fn print_pword(pw: &PWord) -> String {
    let mut s = format!("dim {}\n", pw.dim);
    let toks: Vec<String> = pw.pgens.iter().map(|p| p.to_string()).collect();
    s.push_str(&toks.join(" "));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64, k: u32) -> RingElem {
        RingElem::new(a, b, k)
    }

    #[test]
    fn generator_matrices() {
        // H_[0,1] at N=4: Hadamard block on states 0,1
        let m = gen_matrix(Gen::HGen(0, 1), 4).unwrap();
        assert_eq!(*m.get(0, 0), r(1, 0, 1));
        assert_eq!(*m.get(0, 1), r(1, 0, 1));
        assert_eq!(*m.get(1, 0), r(1, 0, 1));
        assert_eq!(*m.get(1, 1), r(-1, 0, 1));
        assert_eq!(*m.get(2, 2), RingElem::one());
        assert_eq!(*m.get(3, 3), RingElem::one());
        // reversed indices give the other two-level Hadamard
        let m2 = gen_matrix(Gen::HGen(1, 0), 4).unwrap();
        assert_eq!(*m2.get(1, 1), r(1, 0, 1));
        assert_eq!(*m2.get(0, 0), r(-1, 0, 1));
        assert_ne!(m, m2);
        // Neg(3) at N=4
        let m = gen_matrix(Gen::Neg(3), 4).unwrap();
        assert_eq!(*m.get(3, 3), r(-1, 0, 0));
        // XGen(1,2) at N=4 swaps e1 and e2
        let m = gen_matrix(Gen::XGen(1, 2), 4).unwrap();
        assert_eq!(*m.get(2, 1), RingElem::one());
        assert_eq!(*m.get(1, 2), RingElem::one());
        assert!(m.get(1, 1).is_zero());
    }

    #[test]
    fn word_semantics_examples() {
        let empty = Word::empty(5);
        assert_eq!(word_semantics(&empty).unwrap(), RingMatrix::identity(5));

        let inv = Word::new(4, vec![Gen::HGen(0, 1), Gen::HGen(0, 1)]);
        assert_eq!(word_semantics(&inv).unwrap(), RingMatrix::identity(4));

        // ⟦Neg(1)·XGen(0,1)⟧: e0 -> -e1, e1 -> e0
        let w = Word::new(4, vec![Gen::Neg(1), Gen::XGen(0, 1)]);
        let m = word_semantics(&w).unwrap();
        let by_hand = gen_matrix(Gen::Neg(1), 4)
            .unwrap()
            .mat_mul(&gen_matrix(Gen::XGen(0, 1), 4).unwrap())
            .unwrap();
        assert_eq!(m, by_hand);
        assert_eq!(*m.get(1, 0), -&RingElem::one());
        assert_eq!(*m.get(0, 1), RingElem::one());
        // Fig-9-style cancellation: ((−1)_a X_ab)((−1)_b X_ab) = I
        let w = Word::new(4, vec![Gen::Neg(0), Gen::XGen(0, 1), Gen::Neg(1), Gen::XGen(0, 1)]);
        assert_eq!(word_semantics(&w).unwrap(), RingMatrix::identity(4));
    }

    #[test]
    fn parity_counting() {
        let w = Word::new(4, vec![Gen::HGen(0, 1), Gen::HGen(2, 3), Gen::Neg(0), Gen::Neg(1)]);
        assert_eq!(word_parities(&w), (false, false));
        assert_eq!(word_parities(&Word::new(2, vec![Gen::Neg(0)])), (false, true));
        assert_eq!(word_parities(&Word::new(2, vec![Gen::HGen(0, 1)])), (true, false));
    }

    #[test]
    fn pword_flatten_and_semantics() {
        let pw = PWord::new(8, vec![PairedGen::Hh((0, 1), (2, 3))]);
        assert_eq!(
            flatten(&pw).gens,
            vec![Gen::HGen(0, 1), Gen::HGen(2, 3)]
        );
        assert_eq!(pword_semantics(&PWord::empty(4)).unwrap(), RingMatrix::identity(4));
        // (−1)_a (−1)_a = ε
        let pw = PWord::new(4, vec![PairedGen::Zz(2, 2)]);
        assert_eq!(pword_semantics(&pw).unwrap(), RingMatrix::identity(4));
        // every flattened PWord has even parities
        let pw = PWord::new(
            8,
            vec![
                PairedGen::Zz(1, 5),
                PairedGen::Zx(0, (2, 3)),
                PairedGen::Xx((0, 7), (1, 2)),
                PairedGen::Hh((4, 5), (0, 1)),
            ],
        );
        assert_eq!(word_parities(&flatten(&pw)), (false, false));
    }

    #[test]
    fn text_roundtrip() {
        let w = parse_word("dim 4\nZ[3]").unwrap();
        assert_eq!(w.gens, vec![Gen::Neg(3)]);
        let w = parse_word("dim 8\nH[0,1] H[3,2]").unwrap();
        assert_eq!(w.gens, vec![Gen::HGen(0, 1), Gen::HGen(3, 2)]);
        let pw = parse_pword("dim 8\n(Z[0] X[2,3])").unwrap();
        assert_eq!(pw.pgens, vec![PairedGen::Zx(0, (2, 3))]);
        assert_eq!(parse_word(&print_word(&w)).unwrap(), w);
        assert_eq!(parse_pword(&print_pword(&pw)).unwrap(), pw);
        // invalid pair shape is rejected at parse time
        assert!(parse_pword("dim 8\n(X[0,1] Z[2])").is_err());
        assert!(parse_word("dim 4\nX[1,1]").is_err());
        assert!(parse_word("dim 4\nH[4,1]").is_err());
    }

    fn arb_gen(dim: usize) -> impl Strategy<Value = Gen> {
        (0..3, 0..dim, 0..dim).prop_filter_map("distinct", move |(kind, a, b)| match kind {
            0 => Some(Gen::Neg(a)),
            1 if a != b => Some(Gen::XGen(a, b)),
            2 if a != b => Some(Gen::HGen(a, b)),
            _ => None,
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn semantics_is_a_monoid_homomorphism(
            gens in prop::collection::vec(arb_gen(6), 0..14),
            split in 0usize..15,
        ) {
            let dim = 6;
            let split = split.min(gens.len());
            let u = Word::new(dim, gens[..split].to_vec());
            let v = Word::new(dim, gens[split..].to_vec());
            let w = u.concat(&v);
            let lhs = word_semantics(&w).unwrap();
            let rhs = word_semantics(&u).unwrap().mat_mul(&word_semantics(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn words_evaluate_to_orthogonal_matrices(
            gens in prop::collection::vec(arb_gen(6), 0..20),
        ) {
            let w = Word::new(6, gens);
            prop_assert!(word_semantics(&w).unwrap().is_orthogonal());
        }

        #[test]
        fn h_free_words_are_signed_permutations(
            gens in prop::collection::vec(arb_gen(6), 0..20),
        ) {
            let gens: Vec<Gen> = gens.into_iter().filter(|g| !g.is_h()).collect();
            let w = Word::new(6, gens);
            prop_assert!(is_signed_permutation(&word_semantics(&w).unwrap()));
        }

        #[test]
        fn reversed_word_is_inverse(
            gens in prop::collection::vec(arb_gen(5), 0..16),
        ) {
            let w = Word::new(5, gens);
            let m = word_semantics(&w).unwrap();
            let mi = word_semantics(&w.reversed()).unwrap();
            prop_assert_eq!(m.mat_mul(&mi).unwrap(), RingMatrix::identity(5));
        }
    }
}
