//! Circuit ↔ word translation.
//!
//! Two qubits translate to/from words over G₄ directly. For n ≥ 3 the
//! translation goes through the paired generators P_{2^n}, with basis
//! states addressed through the reflected Gray code: writing Γ for the
//! permutation e_j ↦ e_{int(G_n(j))}, every n-qubit clause satisfies
//!
//!   ⟦encode_n(C)⟧ = Γ⁻¹·⟦C⟧·Γ      ⟦decode_n(w)⟧ = Γ·⟦w⟧·Γ⁻¹
//!
//! so the two twists cancel and ⟦decode_n(encode_n(C))⟧ = ⟦C⟧ exactly.
//! Word indices are Gray positions; control patterns on the wires are the
//! Gray codes themselves, which is what makes consecutive indices decode
//! to a single multi-controlled gate.

use crate::circuit::{Circuit, Gate};
use crate::graycode::{bits_to_int, gray, gray_inv};
use crate::ring::RingMatrix;
use crate::words::{Gen, PWord, PairedGen, Word};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("unsupported gate for this encoding: {0}")]
    UnsupportedGate(String),
    #[error("expected a {expected}-qubit circuit, got {got}")]
    WrongWidth { expected: usize, got: usize },
    #[error("word dimension {0} is not 2^n with n ≥ 3")]
    DimensionNotPowerOfTwo(usize),
    #[error("sigma indices must be distinct and below the dimension")]
    IndicesNotDistinct,
    #[error("dimension {0} too small for the sigma construction (need ≥ 8)")]
    DimensionTooSmall(usize),
    #[error("tuple does not match the required Gray form")]
    FormMismatch,
}

// ---------------------------------------------------------------------------
// Gray relabeling

/// γ(j) = the Gray code of j read as a binary number (MSB = top wire).
pub fn gray_permutation(n: usize) -> Vec<usize> {
    (0..1usize << n).map(|j| bits_to_int(&gray(n, j).unwrap())).collect()
}

/// Γ·M·Γ⁻¹ for the Gray relabeling Γ: e_j ↦ e_{γ(j)}.
pub fn gray_conjugate(m: &RingMatrix, n: usize) -> RingMatrix {
    let g = gray_permutation(n);
    let dim = 1usize << n;
    assert_eq!(m.n_rows(), dim);
    let mut out = RingMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = m.get(i, j);
            if !v.is_zero() {
                out.set(g[i], g[j], v.clone());
            }
        }
    }
    out
}

/// Γ⁻¹·M·Γ.
pub fn gray_conjugate_inv(m: &RingMatrix, n: usize) -> RingMatrix {
    let g = gray_permutation(n);
    let dim = 1usize << n;
    assert_eq!(m.n_rows(), dim);
    let mut out = RingMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = m.get(g[i], g[j]);
            if !v.is_zero() {
                out.set(i, j, v.clone());
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 2-qubit encoding (plain basis indices; no Gray twist at n = 2)

/// Encode a 2-qubit circuit as a word over G₄ with ⟦encode2(c)⟧ = ⟦c⟧.
pub fn encode2(c: &Circuit) -> Result<Word, CodecError> {
    if c.n_qubits != 2 {
        return Err(CodecError::WrongWidth { expected: 2, got: c.n_qubits });
    }
    let lowered = lower_circuit_2q(&c.gates)?;
    let mut gens = Vec::new();
    for g in lowered.iter().rev() {
        gens.extend(encode2_base(g));
    }
    Ok(Word::new(4, gens))
}

/// Rewrite structural gates into the forms with direct clauses.
fn lower_circuit_2q(gates: &[Gate]) -> Result<Vec<Gate>, CodecError> {
    let mut out = Vec::new();
    for g in gates {
        match g {
            Gate::H(_) | Gate::Z(_) | Gate::Cz(..) | Gate::Swap(..) => out.push(g.clone()),
            Gate::Ch { control: 0, target: 1 } => out.push(g.clone()),
            // a control on the lower wire is the swap-conjugated gate
            Gate::Ch { control: 1, target: 0 } => out.extend([
                Gate::Swap(0, 1),
                Gate::Ch { control: 0, target: 1 },
                Gate::Swap(0, 1),
            ]),
            Gate::X(q) => out.extend([Gate::H(*q), Gate::Z(*q), Gate::H(*q)]),
            Gate::Cnot { control, target } => out.extend([
                Gate::H(*target),
                Gate::Cz(*control, *target),
                Gate::H(*target),
            ]),
            other => return Err(CodecError::UnsupportedGate(other.to_string())),
        }
    }
    Ok(out)
}

fn encode2_base(g: &Gate) -> Vec<Gen> {
    match g {
        Gate::H(0) => vec![Gen::HGen(0, 2), Gen::HGen(1, 3)],
        Gate::H(1) => vec![Gen::HGen(0, 1), Gen::HGen(2, 3)],
        Gate::Z(0) => vec![Gen::Neg(2), Gen::Neg(3)],
        Gate::Z(1) => vec![Gen::Neg(1), Gen::Neg(3)],
        Gate::Cz(..) => vec![Gen::Neg(3)],
        Gate::Ch { control: 0, target: 1 } => vec![Gen::HGen(2, 3)],
        Gate::Swap(..) => vec![Gen::XGen(1, 2)],
        _ => unreachable!("not lowered: {g}"),
    }
}

/// Decode a word over G₄ into a 2-qubit circuit, generator by generator.
pub fn decode2(w: &Word) -> Result<Circuit, CodecError> {
    if w.dim != 4 {
        return Err(CodecError::WrongWidth { expected: 2, got: w.dim });
    }
    let mut gates = Vec::new();
    for g in w.gens.iter().rev() {
        gates.extend(decode2_gen(*g));
    }
    Ok(Circuit::new(2, gates))
}

/// The frozen per-generator table: each entry is a short 2-qubit circuit
/// whose exact 4×4 matrix equals the generator's.
pub fn decode2_gen(g: Gen) -> Vec<Gate> {
    let ch01 = Gate::Ch { control: 0, target: 1 };
    let ch10 = Gate::Ch { control: 1, target: 0 };
    let cn01 = Gate::Cnot { control: 0, target: 1 };
    let cn10 = Gate::Cnot { control: 1, target: 0 };
    match g {
        Gen::Neg(0) => vec![Gate::X(0), Gate::X(1), Gate::Cz(0, 1), Gate::X(1), Gate::X(0)],
        Gen::Neg(1) => vec![Gate::X(0), Gate::Cz(0, 1), Gate::X(0)],
        Gen::Neg(2) => vec![Gate::X(1), Gate::Cz(0, 1), Gate::X(1)],
        Gen::Neg(3) => vec![Gate::Cz(0, 1)],
        Gen::Neg(_) => unreachable!(),
        Gen::XGen(a, b) => match order(a, b) {
            (0, 1) => vec![Gate::X(0), cn01, Gate::X(0)],
            (0, 2) => vec![Gate::X(1), cn10, Gate::X(1)],
            (0, 3) => vec![Gate::X(0), Gate::X(1), Gate::Swap(0, 1)],
            (1, 2) => vec![Gate::Swap(0, 1)],
            (1, 3) => vec![cn10],
            (2, 3) => vec![cn01],
            _ => unreachable!(),
        },
        Gen::HGen(a, b) => match (a, b) {
            (0, 1) => vec![Gate::X(0), ch01, Gate::X(0)],
            (1, 0) => vec![Gate::X(0), cn01.clone(), ch01, cn01, Gate::X(0)],
            (0, 2) => vec![Gate::X(1), ch10, Gate::X(1)],
            (2, 0) => vec![Gate::X(1), cn10.clone(), ch10, cn10, Gate::X(1)],
            (1, 3) => vec![ch10],
            (3, 1) => vec![cn10.clone(), ch10, cn10],
            (2, 3) => vec![ch01],
            (3, 2) => vec![cn01.clone(), ch01, cn01],
            (1, 2) => vec![cn01.clone(), ch10, cn01],
            (2, 1) => vec![cn01.clone(), cn10.clone(), ch10, cn10, cn01],
            (0, 3) => vec![cn10.clone(), Gate::X(0), ch01, Gate::X(0), cn10],
            (3, 0) => {
                vec![cn10.clone(), Gate::X(0), cn01.clone(), ch01, cn01, Gate::X(0), cn10]
            }
            _ => unreachable!(),
        },
    }
}

fn order(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

// ---------------------------------------------------------------------------
// n-qubit encoding (n ≥ 3), through P_{2^n} with Gray indices

fn gi(bits: &[u8]) -> usize {
    gray_inv(bits.len(), bits).unwrap()
}

fn all_bitstrings(len: usize) -> Vec<Vec<u8>> {
    (0..1usize << len).map(|v| crate::graycode::int_to_bits(len, v)).collect()
}

/// Z on wire k of n: pairs of sign flips over all firing patterns.
fn z_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let mut out = Vec::new();
    if k < n - 1 {
        let l = n - 1 - k;
        for x in all_bitstrings(k) {
            for y in all_bitstrings(l - 1) {
                let p0 = [&x[..], &[1, 0], &y[..]].concat();
                let p1 = [&x[..], &[1, 1], &y[..]].concat();
                out.push(PairedGen::Zz(gi(&p0), gi(&p1)));
            }
        }
    } else {
        for x in all_bitstrings(n - 2) {
            let p0 = [&[0][..], &x[..], &[1][..]].concat();
            let p1 = [&[1][..], &x[..], &[1][..]].concat();
            out.push(PairedGen::Zz(gi(&p0), gi(&p1)));
        }
    }
    out
}

/// CZ on adjacent wires (k, k+1).
fn cz_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let mut out = Vec::new();
    if k + 1 < n - 1 {
        let l = n - 2 - k;
        for x in all_bitstrings(k) {
            for y in all_bitstrings(l - 1) {
                let p0 = [&x[..], &[1, 1, 0], &y[..]].concat();
                let p1 = [&x[..], &[1, 1, 1], &y[..]].concat();
                out.push(PairedGen::Zz(gi(&p0), gi(&p1)));
            }
        }
    } else {
        for x in all_bitstrings(n - 3) {
            let p0 = [&[0][..], &x[..], &[1, 1][..]].concat();
            let p1 = [&[1][..], &x[..], &[1, 1][..]].concat();
            out.push(PairedGen::Zz(gi(&p0), gi(&p1)));
        }
    }
    out
}

/// H on wire k of n: pairs of two-level Hadamards.
fn h_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let mut out = Vec::new();
    if k < n - 1 {
        let l = n - 1 - k;
        for x in all_bitstrings(k) {
            for y in all_bitstrings(l - 1) {
                let p = |b: u8, g: u8| gi(&[&x[..], &[b, g], &y[..]].concat());
                out.push(PairedGen::Hh((p(0, 0), p(1, 0)), (p(0, 1), p(1, 1))));
            }
        }
    } else {
        for x in all_bitstrings(n - 2) {
            let p = |lead: u8, b: u8| gi(&[&[lead][..], &x[..], &[b][..]].concat());
            out.push(PairedGen::Hh((p(0, 0), p(0, 1)), (p(1, 0), p(1, 1))));
        }
    }
    out
}

/// CH on adjacent wires (control k, target k+1).
fn ch_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let mut out = Vec::new();
    if k + 1 < n - 1 {
        let l = n - 2 - k;
        for x in all_bitstrings(k) {
            for y in all_bitstrings(l - 1) {
                let p = |b: u8, g: u8| gi(&[&x[..], &[1, b, g], &y[..]].concat());
                out.push(PairedGen::Hh((p(0, 0), p(1, 0)), (p(0, 1), p(1, 1))));
            }
        }
    } else {
        for x in all_bitstrings(n - 3) {
            let p = |lead: u8, b: u8| gi(&[&[lead][..], &x[..], &[1, b][..]].concat());
            out.push(PairedGen::Hh((p(0, 0), p(0, 1)), (p(1, 0), p(1, 1))));
        }
    }
    out
}

/// Swap on adjacent wires (k, k+1): the CZ part followed by three rounds
/// of signed transpositions.
fn swap_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let l = n - 2 - k;
    let mut a_block = Vec::new();
    let mut b_block = Vec::new();
    for x in all_bitstrings(k) {
        for y in all_bitstrings(l) {
            let u = gi(&[&x[..], &[0, 1], &y[..]].concat());
            let v = gi(&[&x[..], &[1, 0], &y[..]].concat());
            let w = gi(&[&x[..], &[1, 1], &y[..]].concat());
            a_block.push(PairedGen::Zx(w, (v, w)));
            b_block.push(PairedGen::Zx(u, (u, w)));
        }
    }
    let mut out = cz_clause(k, n);
    out.extend(a_block.iter().copied());
    out.extend(b_block);
    out.extend(a_block);
    out
}

/// X (NOT) on wire k: the Z clause followed by signed bit flips. This is
/// the ℰ shortcut used to assemble the W₁/W₂ words.
pub(crate) fn not_clause(k: usize, n: usize) -> Vec<PairedGen> {
    let mut out = z_clause(k, n);
    let l = n - 1 - k;
    for x in all_bitstrings(k) {
        for y in all_bitstrings(l) {
            let p0 = gi(&[&x[..], &[0], &y[..]].concat());
            let p1 = gi(&[&x[..], &[1], &y[..]].concat());
            out.push(PairedGen::Zx(p1, (p0, p1)));
        }
    }
    out
}

/// Rewrite a gate into single-wire gates and adjacent two-wire gates.
fn lower_gate_n(g: &Gate) -> Result<Vec<Gate>, CodecError> {
    // conjugating chain that brings wire `hi` down next to `lo`
    fn bubble(lo: usize, hi: usize) -> Vec<Gate> {
        (lo + 1..hi).rev().map(|w| Gate::Swap(w, w + 1)).collect()
    }
    let lowered = match g {
        Gate::H(_) | Gate::Z(_) | Gate::X(_) => vec![g.clone()],
        Gate::Cz(a, b) => {
            let (lo, hi) = order(*a, *b);
            if hi == lo + 1 {
                vec![Gate::Cz(lo, hi)]
            } else {
                let chain = bubble(lo, hi);
                let mut v = chain.clone();
                v.push(Gate::Cz(lo, lo + 1));
                v.extend(chain.into_iter().rev());
                v
            }
        }
        Gate::Swap(a, b) => {
            let (lo, hi) = order(*a, *b);
            if hi == lo + 1 {
                vec![Gate::Swap(lo, hi)]
            } else {
                let chain = bubble(lo, hi);
                let mut v = chain.clone();
                v.push(Gate::Swap(lo, lo + 1));
                v.extend(chain.into_iter().rev());
                v
            }
        }
        Gate::Ch { control, target } => {
            let (lo, hi) = order(*control, *target);
            let mut v = Vec::new();
            let chain = bubble(lo, hi);
            v.extend(chain.clone());
            if *control == lo {
                v.push(Gate::Ch { control: lo, target: lo + 1 });
            } else {
                v.push(Gate::Swap(lo, lo + 1));
                v.push(Gate::Ch { control: lo, target: lo + 1 });
                v.push(Gate::Swap(lo, lo + 1));
            }
            v.extend(chain.into_iter().rev());
            v
        }
        Gate::Cnot { control, target } => {
            let mut v = vec![Gate::H(*target)];
            v.extend(lower_gate_n(&Gate::Cz(*control, *target))?);
            v.push(Gate::H(*target));
            v
        }
        other => return Err(CodecError::UnsupportedGate(other.to_string())),
    };
    Ok(lowered)
}

fn base_clause_n(g: &Gate, n: usize) -> Vec<PairedGen> {
    match g {
        Gate::H(q) => h_clause(*q, n),
        Gate::Z(q) => z_clause(*q, n),
        Gate::X(q) => not_clause(*q, n),
        Gate::Cz(a, _) => cz_clause(*a, n),
        Gate::Ch { control, .. } => ch_clause(*control, n),
        Gate::Swap(a, _) => swap_clause(*a, n),
        _ => unreachable!("not lowered: {g}"),
    }
}

/// Encode a gate list through the n-qubit clauses; used for whole
/// circuits and for assembling conjugation words.
pub fn encode_gate_word(gates: &[Gate], n: usize) -> Result<Vec<PairedGen>, CodecError> {
    let mut lowered = Vec::new();
    for g in gates {
        lowered.extend(lower_gate_n(g)?);
    }
    let mut pgens = Vec::new();
    for g in lowered.iter().rev() {
        pgens.extend(base_clause_n(g, n));
    }
    Ok(pgens)
}

/// Encode an n-qubit circuit (n ≥ 3) as a word over P_{2^n}, satisfying
/// ⟦encode_n(c)⟧ = Γ⁻¹·⟦c⟧·Γ.
pub fn encode_n(c: &Circuit) -> Result<PWord, CodecError> {
    let n = c.n_qubits;
    if n < 3 {
        return Err(CodecError::WrongWidth { expected: 3, got: n });
    }
    Ok(PWord::new(1usize << n, encode_gate_word(&c.gates, n)?))
}

// ---------------------------------------------------------------------------
// n-qubit decoding

fn width_of_dim(dim: usize) -> Result<usize, CodecError> {
    if dim >= 8 && dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(CodecError::DimensionNotPowerOfTwo(dim))
    }
}

/// Controls matching the Gray code of `state` on every wire except those
/// in `skip`.
fn gray_controls(state: usize, n: usize, skip: &[usize]) -> Vec<(usize, bool)> {
    let bits = gray(n, state).unwrap();
    (0..n).filter(|w| !skip.contains(w)).map(|w| (w, bits[w] == 1)).collect()
}

/// Decode one paired generator into a gate list (gates apply first-to-last).
fn decode_pgen(p: PairedGen, n: usize) -> Vec<Gate> {
    match p {
        PairedGen::Zz(a, b) => decode_zz(a, b, n),
        PairedGen::Zx(s, (a, b)) => decode_zx(s, a, b, n, true),
        PairedGen::Xx((a, b), (c, d)) => {
            // X_[a,b]·X_[c,d] = ((−1)_[a]X_[a,b])((−1)_[b]X_[c,d]): the two
            // injected signs cancel exactly
            let mut g = decode_zx(b, c, d, n, true);
            g.extend(decode_zx(a, a, b, n, true));
            g
        }
        PairedGen::Hh((a, b), (c, d)) => decode_hh(a, b, c, d, n),
    }
}

fn decode_zz(a: usize, b: usize, n: usize) -> Vec<Gate> {
    if a == b {
        return Vec::new();
    }
    let (a, b) = order(a, b);
    let ga = bits_to_int(&gray(n, a).unwrap());
    let gb = bits_to_int(&gray(n, b).unwrap());
    let diff = ga ^ gb;
    if diff.count_ones() == 1 {
        // compiled form: one multi-controlled −1, dashed on the flipped wire
        let wire = n - 1 - diff.trailing_zeros() as usize;
        return vec![Gate::McZ { controls: gray_controls(a, n, &[wire]), dashed: wire }];
    }
    // telescoping product of consecutive pairs
    let mut gates = Vec::new();
    for k in a..b {
        gates.extend(decode_zz(k, k + 1, n));
    }
    gates
}

/// Decode ((−1)_[s] X_[a,b]). With `compiled` set, Gray-adjacent pairs
/// become a single multi-controlled ZX gate; otherwise only consecutive
/// integers do, and everything else goes through the recursive clauses.
fn decode_zx(s: usize, a: usize, b: usize, n: usize, compiled: bool) -> Vec<Gate> {
    let (a2, b2) = order(a, b);
    let s = s;
    let (a, b) = (a2, b2);
    debug_assert!(a != b);
    if s != a && s != b {
        // (−1)_[s]X_[a,b] = ((−1)_[s](−1)_[a])·((−1)_[a]X_[a,b])
        let mut g = decode_zx(a, a, b, n, compiled);
        g.extend(decode_zz(s, a, n));
        return g;
    }
    let ga = bits_to_int(&gray(n, a).unwrap());
    let gb = bits_to_int(&gray(n, b).unwrap());
    let diff = ga ^ gb;
    let adjacent = if compiled { diff.count_ones() == 1 } else { b == a + 1 };
    if adjacent {
        debug_assert_eq!(diff.count_ones(), 1);
        let wire = n - 1 - diff.trailing_zeros() as usize;
        // ZX when the sign-carrying state has bit 1 on the target wire,
        // XZ (sign = 1) when it has bit 0
        let s_bit = gray(n, s).unwrap()[wire] == 1;
        return vec![Gate::McZx {
            controls: gray_controls(a, n, &[wire]),
            target: wire,
            sign: !s_bit,
        }];
    }
    // recursive clauses, by the parity of the index gap
    let (p1, p2, p3) = if (b - a) % 2 == 1 {
        (
            (a, a, a + 1),
            (if s == a { a + 1 } else { b }, a + 1, b),
            (a + 1, a, a + 1),
        )
    } else {
        (
            (b, b - 1, b),
            (if s == a { a } else { b - 1 }, a, b - 1),
            (b - 1, b - 1, b),
        )
    };
    // composition D(p3) ∘ D(p2) ∘ D(p1) applies p1 first
    let mut gates = decode_zx(p1.0, p1.1, p1.2, n, compiled);
    gates.extend(decode_zx(p2.0, p2.1, p2.2, n, compiled));
    gates.extend(decode_zx(p3.0, p3.1, p3.2, n, compiled));
    gates
}

/// Purely recursive variant of the signed-transposition decoding (integer
/// base cases only); used to cross-check the compiled forms.
pub fn decode_zx_recursive(s: usize, a: usize, b: usize, n: usize) -> Vec<Gate> {
    decode_zx(s, a, b, n, false)
}

/// Decode ((H_[a,b] H_[c,d])).
fn decode_hh(a: usize, b: usize, c: usize, d: usize, n: usize) -> Vec<Gate> {
    if (a, b) == (c, d) {
        return Vec::new(); // H² = ε
    }
    if (a, b) == (d, c) {
        // H_[a,b]·H_[b,a] = (−1)_[b]·X_[a,b]
        return decode_zx(b, a, b, n, true);
    }
    let mut set = vec![a, b, c, d];
    set.sort_unstable();
    set.dedup();
    if set.len() < 4 {
        // overlapping pairs: route both halves through a disjoint fresh
        // pair (e, f), the two smallest indices outside {a,b,c,d}
        let mut free = (0..1usize << n).filter(|x| !set.contains(x));
        let e = free.next().expect("dimension ≥ 8 leaves free indices");
        let f = free.next().expect("dimension ≥ 8 leaves free indices");
        let mut g = decode_hh(e, f, c, d, n);
        g.extend(decode_hh(a, b, e, f, n));
        return g;
    }
    if let Some(gate) = hh_mch(a, b, c, d, n) {
        return vec![gate];
    }
    // general position: conjugate the distinguished block (H_[0,1]H_[3,2])
    // by the signed transposition ladder Σ
    let sp = sigma(a, b, c, d, 1usize << n).expect("distinct indices at dim ≥ 8");
    let mut gates = decode_sigma_word(&sp.backward, n);
    gates.extend(decode_hh(0, 1, 3, 2, n));
    gates.extend(decode_sigma_word(&sp.forward, n));
    gates
}

/// The compiled multi-controlled-H form, when the Gray codes of
/// (a, b, c, d) form a 2×2 block: H on the (a⊕b) wire, dashed on the
/// (a⊕c) wire, controls on the rest.
fn hh_mch(a: usize, b: usize, c: usize, d: usize, n: usize) -> Option<Gate> {
    let g: Vec<usize> =
        [a, b, c, d].iter().map(|&s| bits_to_int(&gray(n, s).unwrap())).collect();
    let u = g[0] ^ g[1];
    let v = g[0] ^ g[2];
    if u.count_ones() != 1 || v.count_ones() != 1 || u == v {
        return None;
    }
    if g[3] != g[0] ^ u ^ v {
        return None;
    }
    if g[0] & u != 0 || g[0] & v != 0 {
        return None;
    }
    let target = n - 1 - u.trailing_zeros() as usize;
    let dashed = n - 1 - v.trailing_zeros() as usize;
    Some(Gate::McH { controls: gray_controls(a, n, &[target, dashed]), target, dashed })
}

/// Decode a Σ word: an H-free word of ((−1) X) factor pairs.
fn decode_sigma_word(w: &Word, n: usize) -> Vec<Gate> {
    debug_assert!(w.gens.len() % 2 == 0);
    let mut gates = Vec::new();
    for pair in w.gens.chunks(2).rev() {
        match *pair {
            [Gen::Neg(m), Gen::XGen(p, q)] => gates.extend(decode_zx(m, p, q, n, true)),
            _ => unreachable!("sigma words are ((−1) X) pair lists"),
        }
    }
    gates
}

/// Decode a word over P_{2^n} (n ≥ 3) into a circuit with macro gates,
/// satisfying ⟦decode_n(w)⟧ = Γ·⟦w⟧·Γ⁻¹.
pub fn decode_n(pw: &PWord) -> Result<Circuit, CodecError> {
    let n = width_of_dim(pw.dim)?;
    pw.validate().map_err(|e| CodecError::UnsupportedGate(e.to_string()))?;
    let mut gates = Vec::new();
    for p in pw.pgens.iter().rev() {
        gates.extend(decode_pgen(*p, n));
    }
    Ok(Circuit::new(n, gates))
}

// ---------------------------------------------------------------------------
// the Σ transposition ladders

/// The signed transposition ladder Σ_{a,b,c,d} and its inverse Σ'.
///
/// `forward` maps basis states 0, 1, 3, 2 to a, b, c, d with coefficient
/// +1, possibly with one extra sign flip at some state μ ∉ {0,1,2,3};
/// `backward` is its exact inverse. Both are H-free words of ((−1) X)
/// factor pairs.
#[derive(Debug, Clone)]
pub struct SigmaPair {
    pub forward: Word,
    pub backward: Word,
    pub dim: usize,
}

pub fn sigma(a: usize, b: usize, c: usize, d: usize, dim: usize) -> Result<SigmaPair, CodecError> {
    if dim < 8 {
        return Err(CodecError::DimensionTooSmall(dim));
    }
    let idx = [a, b, c, d];
    if idx.iter().any(|&x| x >= dim) {
        return Err(CodecError::IndicesNotDistinct);
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 4 {
        return Err(CodecError::IndicesNotDistinct);
    }

    // τ_{k,i}^e as a function
    let tau = |k: usize, i: usize, e: bool, x: usize| -> usize {
        if !e {
            x
        } else if x == k {
            i
        } else if x == i {
            k
        } else {
            x
        }
    };

    let e3 = d != 2;
    let m3 = tau(d, 2, e3, 4);
    let i2 = tau(d, 2, e3, 3);
    let e2 = c != i2;
    let m2 = tau(c, i2, e2, m3);
    let i1 = tau(c, i2, e2, tau(d, 2, e3, 1));
    let e1 = b != i1;
    let m1 = tau(b, i1, e1, m2);
    let i0 = tau(b, i1, e1, tau(c, i2, e2, tau(d, 2, e3, 0)));
    let e0 = a != i0;
    let m0 = tau(a, i0, e0, m1);

    // each factor ((−1)_[m] X_[p,q])^e contributes two generators when e=1
    let factor = |m: usize, p: usize, q: usize, e: bool| -> Vec<Gen> {
        if e {
            vec![Gen::Neg(m), Gen::XGen(p, q)]
        } else {
            Vec::new()
        }
    };
    let mut fwd = Vec::new();
    fwd.extend(factor(m0, a, i0, e0));
    fwd.extend(factor(m1, b, i1, e1));
    fwd.extend(factor(m2, c, i2, e2));
    fwd.extend(factor(m3, d, 2, e3));
    let mut bwd = Vec::new();
    bwd.extend(factor(4, d, 2, e3));
    bwd.extend(factor(m3, c, i2, e2));
    bwd.extend(factor(m2, b, i1, e1));
    bwd.extend(factor(m1, a, i0, e0));

    Ok(SigmaPair { forward: Word::new(dim, fwd), backward: Word::new(dim, bwd), dim })
}

// ---------------------------------------------------------------------------
// round trip

/// True iff ⟦decode(encode(c))⟧ = ⟦c⟧ exactly.
pub fn roundtrip(c: &Circuit) -> Result<bool, CodecError> {
    let sem = |c: &Circuit| {
        crate::circuit::semantics(c).map_err(|e| CodecError::UnsupportedGate(e.to_string()))
    };
    let original = sem(c)?;
    let back = if c.n_qubits == 2 {
        sem(&decode2(&encode2(c)?)?)?
    } else {
        sem(&decode_n(&encode_n(c)?)?)?
    };
    Ok(original == back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, semantics};
    use crate::words::{pword_semantics, word_semantics};

    fn gen_m(g: Gen, dim: usize) -> RingMatrix {
        crate::words::gen_matrix(g, dim).unwrap()
    }

    #[test]
    fn decode2_table_is_semantically_exact() {
        let mut gens: Vec<Gen> = (0..4).map(Gen::Neg).collect();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    gens.push(Gen::HGen(a, b));
                    if a < b {
                        gens.push(Gen::XGen(a, b));
                    }
                }
            }
        }
        assert_eq!(gens.len(), 22);
        for g in gens {
            let c = Circuit::new(2, decode2_gen(g));
            assert_eq!(semantics(&c).unwrap(), gen_m(g, 4), "table entry {g}");
        }
    }

    #[test]
    fn encode2_gate_clauses() {
        // the printed 2-qubit clauses
        let cases: Vec<(Gate, Vec<Gen>)> = vec![
            (Gate::Ch { control: 0, target: 1 }, vec![Gen::HGen(2, 3)]),
            (Gate::Cz(0, 1), vec![Gen::Neg(3)]),
            (Gate::H(0), vec![Gen::HGen(0, 2), Gen::HGen(1, 3)]),
            (Gate::H(1), vec![Gen::HGen(0, 1), Gen::HGen(2, 3)]),
            (Gate::Z(0), vec![Gen::Neg(2), Gen::Neg(3)]),
            (Gate::Z(1), vec![Gen::Neg(1), Gen::Neg(3)]),
            (Gate::Swap(0, 1), vec![Gen::XGen(1, 2)]),
        ];
        for (g, expected) in cases {
            let c = Circuit::new(2, vec![g.clone()]);
            let w = encode2(&c).unwrap();
            assert_eq!(w.gens, expected, "{g}");
            assert_eq!(word_semantics(&w).unwrap(), semantics(&c).unwrap(), "{g}");
        }
        // structural gates keep the contract through lowering
        for g in [
            Gate::X(0),
            Gate::X(1),
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
            Gate::Ch { control: 1, target: 0 },
        ] {
            let c = Circuit::new(2, vec![g.clone()]);
            let w = encode2(&c).unwrap();
            assert_eq!(word_semantics(&w).unwrap(), semantics(&c).unwrap(), "{g}");
        }
        // macro gates are not encodable
        let c = Circuit::new(2, vec![Gate::PPair(0, 1)]);
        assert!(matches!(encode2(&c), Err(CodecError::UnsupportedGate(_))));
    }

    #[test]
    fn encode2_word_order_matches_gate_order() {
        // [CZ, CH] as a circuit is CH·CZ as matrices; the word must be
        // H_[2,3]·(−1)_[3]
        let c = Circuit::new(2, vec![Gate::Cz(0, 1), Gate::Ch { control: 0, target: 1 }]);
        let w = encode2(&c).unwrap();
        assert_eq!(w.gens, vec![Gen::HGen(2, 3), Gen::Neg(3)]);
        assert_eq!(word_semantics(&w).unwrap(), semantics(&c).unwrap());
    }

    #[test]
    fn two_qubit_roundtrip_random() {
        for seed in 0..60 {
            let c = random_circuit(2, 14, seed);
            assert!(roundtrip(&c).unwrap(), "seed {seed}");
        }
        assert!(roundtrip(&Circuit::empty(2)).unwrap());
    }

    fn twisted_gate_contract(g: Gate, n: usize) {
        let c = Circuit::new(n, vec![g.clone()]);
        let w = encode_n(&c).unwrap();
        let lhs = pword_semantics(&w).unwrap();
        let rhs = gray_conjugate_inv(&semantics(&c).unwrap(), n);
        assert_eq!(lhs, rhs, "encode clause for {g} at n={n}");
    }

    #[test]
    fn encode_n_per_gate_contract_all_offsets() {
        for n in [3usize, 4] {
            for q in 0..n {
                twisted_gate_contract(Gate::H(q), n);
                twisted_gate_contract(Gate::Z(q), n);
                twisted_gate_contract(Gate::X(q), n);
            }
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        twisted_gate_contract(Gate::Cz(a, b), n);
                        twisted_gate_contract(Gate::Ch { control: a, target: b }, n);
                        twisted_gate_contract(Gate::Cnot { control: a, target: b }, n);
                        if a < b {
                            twisted_gate_contract(Gate::Swap(a, b), n);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn encode_n_z_clause_is_gray_indexed() {
        // Z on the bottom wire of 3 qubits: four sign flips on the Gray
        // positions of the odd patterns {001, 011, 101, 111} = {1,2,6,5},
        // paired as printed
        let c = Circuit::new(3, vec![Gate::Z(2)]);
        let w = encode_n(&c).unwrap();
        assert_eq!(w.pgens, vec![PairedGen::Zz(1, 6), PairedGen::Zz(2, 5)]);
        assert!(encode_n(&Circuit::empty(3)).unwrap().pgens.is_empty());
    }

    fn twisted_pgen_contract(p: PairedGen, n: usize) {
        let gates = decode_pgen(p, n);
        let c = Circuit::new(n, gates);
        let lhs = semantics(&c).unwrap();
        let pw = PWord::new(1 << n, vec![p]);
        let rhs = gray_conjugate(&pword_semantics(&pw).unwrap(), n);
        assert_eq!(lhs, rhs, "decode clause for {p} at n={n}");
    }

    #[test]
    fn decode_n_per_generator_contract_zz_zx() {
        let n = 3;
        for a in 0..8 {
            for b in 0..8 {
                twisted_pgen_contract(PairedGen::Zz(a, b), n);
                if a != b {
                    for s in 0..8 {
                        twisted_pgen_contract(PairedGen::Zx(s, (a, b)), n);
                    }
                }
            }
        }
    }

    #[test]
    fn decode_n_per_generator_contract_xx() {
        let n = 3;
        for (ab, cd) in [
            ((0, 1), (2, 3)),
            ((0, 7), (1, 2)),
            ((3, 1), (3, 5)),
            ((2, 6), (6, 2)),
            ((4, 5), (4, 5)),
            ((5, 0), (1, 6)),
        ] {
            twisted_pgen_contract(PairedGen::Xx(ab, cd), n);
        }
    }

    #[test]
    fn decode_n_per_generator_contract_hh_exhaustive_n3() {
        let n = 3;
        for a in 0..8 {
            for b in 0..8 {
                if a == b {
                    continue;
                }
                for c in 0..8 {
                    for d in 0..8 {
                        if c == d {
                            continue;
                        }
                        twisted_pgen_contract(PairedGen::Hh((a, b), (c, d)), n);
                    }
                }
            }
        }
    }

    #[test]
    fn decode_n_hh_spot_checks_n4() {
        let n = 4;
        for (ab, cd) in [
            ((0, 1), (3, 2)),
            ((0, 1), (2, 3)),
            ((4, 9), (12, 3)),
            ((7, 2), (11, 13)),
            ((1, 0), (15, 8)),
            ((5, 6), (9, 10)),
        ] {
            twisted_pgen_contract(PairedGen::Hh(ab, cd), n);
        }
    }

    #[test]
    fn base_hh_block_decodes_to_one_mch() {
        // (H_[0,1] H_[3,2]) is the distinguished generator: in wire
        // patterns it is exactly the all-white multi-controlled H
        let g = decode_pgen(PairedGen::Hh((0, 1), (3, 2)), 3);
        assert_eq!(g, vec![Gate::McH { controls: vec![(0, false)], target: 2, dashed: 1 }]);
    }

    #[test]
    fn compiled_and_recursive_zx_agree_on_gray_adjacent_pairs() {
        let n = 3;
        for a in 0..8usize {
            for b in 0..8usize {
                if a == b {
                    continue;
                }
                let ga = bits_to_int(&gray(n, a).unwrap());
                let gb = bits_to_int(&gray(n, b).unwrap());
                if (ga ^ gb).count_ones() != 1 || a + 1 == b || b + 1 == a {
                    continue;
                }
                for s in [a, b] {
                    let compiled = Circuit::new(n, decode_zx(s, a, b, n, true));
                    let recursive = Circuit::new(n, decode_zx_recursive(s, a, b, n));
                    assert_eq!(
                        semantics(&compiled).unwrap(),
                        semantics(&recursive).unwrap(),
                        "s={s} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn compiled_and_recursive_zz_agree() {
        let n = 3;
        for a in 0..8usize {
            for b in 0..8usize {
                if a == b {
                    continue;
                }
                let (lo, hi) = order(a, b);
                let mut ladder = Vec::new();
                for k in lo..hi {
                    ladder.extend(decode_zz(k, k + 1, n));
                }
                let lhs = semantics(&Circuit::new(n, ladder)).unwrap();
                let rhs = semantics(&Circuit::new(n, decode_zz(a, b, n))).unwrap();
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn sigma_examples() {
        // the distinguished tuple yields empty words
        let sp = sigma(0, 1, 3, 2, 8).unwrap();
        assert!(sp.forward.is_empty() && sp.backward.is_empty());
        // backward is the exact inverse
        let sp = sigma(4, 5, 6, 7, 8).unwrap();
        let f = word_semantics(&sp.forward).unwrap();
        let b = word_semantics(&sp.backward).unwrap();
        assert_eq!(b.mat_mul(&f).unwrap(), RingMatrix::identity(8));
        // 0,1,3,2 ↦ 4,5,6,7 with +1 coefficients
        for (src, dst) in [(0usize, 4usize), (1, 5), (3, 6), (2, 7)] {
            assert!(f.get(dst, src).is_one(), "{src} -> {dst}");
        }
        assert!(sigma(1, 1, 2, 3, 8).is_err());
        assert!(sigma(0, 1, 2, 3, 4).is_err());
    }

    #[test]
    fn sigma_signed_permutation_property_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for dim in [8usize, 16] {
            for _ in 0..40 {
                let mut pick = std::collections::BTreeSet::new();
                while pick.len() < 4 {
                    pick.insert(rng.gen_range(0..dim));
                }
                let mut v: Vec<usize> = pick.into_iter().collect();
                for i in (1..4).rev() {
                    v.swap(i, rng.gen_range(0..=i));
                }
                let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
                let sp = sigma(a, b, c, d, dim).unwrap();
                let f = word_semantics(&sp.forward).unwrap();
                let bwd = word_semantics(&sp.backward).unwrap();
                assert_eq!(bwd.mat_mul(&f).unwrap(), RingMatrix::identity(dim));
                let (perm, signs) = f.as_signed_permutation().unwrap();
                for (src, dst) in [(0usize, a), (1, b), (3, c), (2, d)] {
                    assert_eq!(perm[src], dst, "({a},{b},{c},{d})");
                    assert!(!signs[src], "no sign on the tracked states");
                }
                // at most one sign flip, located outside {0,1,2,3}
                let flips: Vec<usize> = (0..dim).filter(|&j| signs[j]).collect();
                assert!(flips.len() <= 1, "{flips:?}");
                if let Some(&mu) = flips.first() {
                    assert!(mu > 3, "sign at μ = {mu} for ({a},{b},{c},{d})");
                }
            }
        }
    }

    #[test]
    fn n_qubit_roundtrip_random() {
        for seed in 0..25 {
            let c = random_circuit(3, 8, seed);
            assert!(roundtrip(&c).unwrap(), "n=3 seed {seed}");
        }
        for seed in 0..4 {
            let c = random_circuit(4, 5, seed);
            assert!(roundtrip(&c).unwrap(), "n=4 seed {seed}");
        }
        assert!(roundtrip(&Circuit::empty(3)).unwrap());
    }

    #[test]
    fn dimension_checks() {
        assert!(matches!(decode_n(&PWord::empty(6)), Err(CodecError::DimensionNotPowerOfTwo(6))));
        assert!(matches!(decode_n(&PWord::empty(4)), Err(CodecError::DimensionNotPowerOfTwo(4))));
        assert!(matches!(encode_n(&Circuit::empty(2)), Err(CodecError::WrongWidth { .. })));
    }
}
