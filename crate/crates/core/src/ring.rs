//! Exact arithmetic in the ring Z[1/√2] and dense matrices over it.
//!
//! An element is stored as `(a + b√2)/√2^k` with arbitrary-precision integer
//! coefficients. The canonical form keeps `k = 0` or `a` odd: while `a` is
//! even and `k > 0`, `(a + b√2)/√2 = b + (a/2)√2` lets us decrement `k`.
//! With this normalization the least denominator exponent (lde) of an
//! element is exactly its `k`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("matrix dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("parse error at line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// An element (a + b√2)/√2^k of Z[1/√2], kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    a: BigInt,
    b: BigInt,
    k: u32,
}

impl RingElem {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, k: u32) -> Self {
        let mut e = RingElem { a: a.into(), b: b.into(), k };
        e.canonicalize();
        e
    }

    pub fn zero() -> Self {
        RingElem { a: BigInt::zero(), b: BigInt::zero(), k: 0 }
    }

    pub fn one() -> Self {
        RingElem { a: BigInt::one(), b: BigInt::zero(), k: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RingElem::new(n, 0, 0)
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        RingElem::new(0, 1, 0)
    }

    /// 1/√2.
    pub fn inv_sqrt2() -> Self {
        RingElem::new(1, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.a.is_one() && self.b.is_zero()
    }

    /// Coefficient of 1 in the canonical numerator.
    pub fn coeff_a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of √2 in the canonical numerator.
    pub fn coeff_b(&self) -> &BigInt {
        &self.b
    }

    /// Least m ≥ 0 with √2^m · x ∈ Z[√2]; equals k of the canonical form.
    pub fn lde(&self) -> u32 {
        self.k
    }

    fn canonicalize(&mut self) {
        while self.k > 0 && self.a.is_even() {
            let half_a = &self.a >> 1;
            let b = std::mem::replace(&mut self.b, half_a);
            self.a = b;
            self.k -= 1;
        }
    }

    /// Numerator (A, B) with √2^level · x = A + B√2. Requires level ≥ lde.
    pub fn numerator_at(&self, level: u32) -> (BigInt, BigInt) {
        assert!(level >= self.k, "numerator_at below lde");
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let diff = level - self.k;
        if diff % 2 == 1 {
            // multiply by √2: (a + b√2)√2 = 2b + a√2
            let new_a = &b << 1;
            b = std::mem::replace(&mut a, new_a);
        }
        let shift = diff / 2;
        (a << shift, b << shift)
    }

    /// Divide by √2 (multiplies the denominator exponent).
    pub fn div_sqrt2(&self) -> Self {
        let mut e = RingElem { a: self.a.clone(), b: self.b.clone(), k: self.k + 1 };
        e.canonicalize();
        e
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        let k = self.k.max(rhs.k);
        let (a1, b1) = self.numerator_at(k);
        let (a2, b2) = rhs.numerator_at(k);
        RingElem::new(a1 + a2, b1 + b2, k)
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        let k = self.k.max(rhs.k);
        let (a1, b1) = self.numerator_at(k);
        let (a2, b2) = rhs.numerator_at(k);
        RingElem::new(a1 - a2, b1 - b2, k)
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let a = &self.a * &rhs.a + ((&self.b * &rhs.b) << 1);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        RingElem::new(a, b, self.k + rhs.k)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { a: -&self.a, b: -&self.b, k: self.k }
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        &self - &rhs
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        &self * &rhs
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl fmt::Display for RingElem {
    /// Exact text form `a+b*r2/r2^k` (with `-` absorbed into the b part).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*r2/r2^{}", self.a, self.b.magnitude(), self.k)
        } else {
            write!(f, "{}+{}*r2/r2^{}", self.a, self.b, self.k)
        }
    }
}

impl std::str::FromStr for RingElem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s
            .split_once("/r2^")
            .ok_or_else(|| format!("missing /r2^ in ring element `{s}`"))?;
        let k: u32 = den.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        let num = num
            .strip_suffix("*r2")
            .ok_or_else(|| format!("missing *r2 in ring element `{s}`"))?;
        // split at the sign separating a from b, skipping a's own leading sign
        let split = num[1..]
            .rfind(['+', '-'])
            .map(|i| i + 1)
            .ok_or_else(|| format!("missing b coefficient in `{s}`"))?;
        let a: BigInt = num[..split].parse().map_err(|_| format!("bad a in `{s}`"))?;
        let b: BigInt = num[split..].parse().map_err(|_| format!("bad b in `{s}`"))?;
        Ok(RingElem::new(a, b, k))
    }
}

/// Dense matrix over Z[1/√2], row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(n_rows > 0 && n_cols > 0);
        RingMatrix { n_rows, n_cols, entries: vec![RingElem::zero(); n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RingMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RingElem::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == n_cols));
        RingMatrix { n_rows, n_cols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.entries[i * self.n_cols + j] = v;
    }

    pub fn mat_mul(&self, rhs: &RingMatrix) -> Result<RingMatrix, RingError> {
        if self.n_cols != rhs.n_rows {
            return Err(RingError::DimensionMismatch(
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols,
            ));
        }
        let mut out = RingMatrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for l in 0..self.n_cols {
                let x = self.get(i, l);
                if x.is_zero() {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    let y = rhs.get(l, j);
                    if y.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(x * y);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact real-unitarity test: M·Mᵀ = I.
    pub fn is_orthogonal(&self) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        match self.mat_mul(&self.transpose()) {
            Ok(p) => p == RingMatrix::identity(self.n_rows),
            Err(_) => false,
        }
    }

    /// If M is a signed permutation, return (perm, signs) with
    /// M e_j = signs[j] · e_{perm[j]} (signs as false=+1, true=−1).
    pub fn as_signed_permutation(&self) -> Option<(Vec<usize>, Vec<bool>)> {
        if self.n_rows != self.n_cols {
            return None;
        }
        let n = self.n_rows;
        let mut perm = vec![usize::MAX; n];
        let mut signs = vec![false; n];
        let mut seen = vec![false; n];
        let one = RingElem::one();
        let minus_one = -&one;
        for j in 0..n {
            let mut hit = None;
            for i in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if hit.is_some() {
                    return None;
                }
                if *e == one {
                    hit = Some((i, false));
                } else if *e == minus_one {
                    hit = Some((i, true));
                } else {
                    return None;
                }
            }
            let (i, s) = hit?;
            if seen[i] {
                return None;
            }
            seen[i] = true;
            perm[j] = i;
            signs[j] = s;
        }
        Some((perm, signs))
    }

    /// Largest lde over the entries of column j.
    pub fn column_lde(&self, j: usize) -> u32 {
        (0..self.n_rows).map(|i| self.get(i, j).lde()).max().unwrap()
    }

    /// Row operation (r_i1, r_i2) := ((r_i1 + r_i2)/√2, (r_i1 − r_i2)/√2),
    /// i.e. left multiplication by the two-level Hadamard H_[i1,i2].
    pub fn hadamard_rows(&mut self, i1: usize, i2: usize) {
        for j in 0..self.n_cols {
            let x = self.get(i1, j).clone();
            let y = self.get(i2, j).clone();
            self.set(i1, j, (&x + &y).div_sqrt2());
            self.set(i2, j, (&x - &y).div_sqrt2());
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.n_cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn swap_rows(&mut self, i1: usize, i2: usize) {
        if i1 == i2 {
            return;
        }
        for j in 0..self.n_cols {
            let a = self.get(i1, j).clone();
            let b = self.get(i2, j).clone();
            self.set(i1, j, b);
            self.set(i2, j, a);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.n_rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn swap_cols(&mut self, j1: usize, j2: usize) {
        if j1 == j2 {
            return;
        }
        for i in 0..self.n_rows {
            let a = self.get(i, j1).clone();
            let b = self.get(i, j2).clone();
            self.set(i, j1, b);
            self.set(i, j2, a);
        }
    }

    /// Column operation (c_j1, c_j2) := ((c_j1 + c_j2)/√2, (c_j1 − c_j2)/√2),
    /// i.e. right multiplication by H_[j1,j2].
    pub fn hadamard_cols(&mut self, j1: usize, j2: usize) {
        for i in 0..self.n_rows {
            let x = self.get(i, j1).clone();
            let y = self.get(i, j2).clone();
            self.set(i, j1, (&x + &y).div_sqrt2());
            self.set(i, j2, (&x - &y).div_sqrt2());
        }
    }

    /// Parse the exact-matrix text format: one row per line, entries
    /// whitespace-separated, each entry in `a+b*r2/r2^k` form.
    pub fn parse(text: &str) -> Result<RingMatrix, RingError> {
        let mut rows: Vec<Vec<RingElem>> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for (cn, tok) in line.split_whitespace().enumerate() {
                let e: RingElem = tok.parse().map_err(|msg| RingError::Parse {
                    line: ln + 1,
                    col: cn + 1,
                    msg,
                })?;
                row.push(e);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(RingError::Parse { line: 1, col: 1, msg: "empty matrix".into() });
        }
        let w = rows[0].len();
        if rows.iter().any(|r| r.len() != w) {
            return Err(RingError::Parse { line: 1, col: 1, msg: "ragged rows".into() });
        }
        Ok(RingMatrix::from_rows(rows))
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

trait EvenOdd {
    fn is_even(&self) -> bool;
}

impl EvenOdd for BigInt {
    fn is_even(&self) -> bool {
        num_integer::Integer::is_even(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64, k: u32) -> RingElem {
        RingElem::new(a, b, k)
    }

    /// Independent lde oracle: brute-force the least m with √2^m·x ∈ Z[√2],
    /// working from the raw (uncanonicalized) representation.
    fn lde_brute(a: i64, b: i64, k: u32) -> u32 {
        // x = (a + b√2)/√2^k; √2^m·x ∈ Z[√2] iff (a + b√2)·√2^m has √2^k | it
        // componentwise. Emulate by repeated division.
        let (mut a, mut b) = (a as i128, b as i128);
        let mut k = k as i64;
        // divide numerator by √2 while possible to get the canonical k
        while k > 0 && a % 2 == 0 {
            let t = a / 2;
            a = b;
            b = t;
            k -= 1;
        }
        k as u32
    }

    #[test]
    fn canonical_form_examples() {
        // 1/√2 + 1/√2 = √2
        assert_eq!(&r(1, 0, 1) + &r(1, 0, 1), r(0, 1, 0));
        // x + 0 = x
        let x = r(3, -5, 1);
        assert_eq!(&x + &RingElem::zero(), x);
        // (1+√2) + (−1−√2) = 0
        assert_eq!(&r(1, 1, 0) + &r(-1, -1, 0), RingElem::zero());
        // (1/√2)·(1/√2) = 1/2
        assert_eq!(&r(1, 0, 1) * &r(1, 0, 1), r(1, 0, 2));
        // x·1 = x
        assert_eq!(&x * &RingElem::one(), x);
        // (1+√2)(−1+√2) = 1
        assert_eq!(&r(1, 1, 0) * &r(-1, 1, 0), RingElem::one());
    }

    #[test]
    fn lde_examples() {
        assert_eq!(RingElem::one().lde(), 0);
        assert_eq!(RingElem::inv_sqrt2().lde(), 1);
        // (1+√2)/2 = (1+√2)/√2^2
        assert_eq!(r(1, 1, 2).lde(), 2);
        assert_eq!(r(1, 1, 2).lde(), lde_brute(1, 1, 2));
    }

    #[test]
    fn canonicalization_is_idempotent_on_raw_inputs() {
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                for k in 0u32..=4 {
                    let x = RingElem::new(a, b, k);
                    assert!(x.lde() == 0 || !x.coeff_a().is_even(), "not canonical: {x}");
                    assert_eq!(x.lde(), lde_brute(a, b, k), "lde mismatch for ({a},{b},{k})");
                    // re-canonicalizing a canonical element is the identity
                    let y = RingElem::new(x.coeff_a().clone(), x.coeff_b().clone(), x.lde());
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn display_parse_roundtrip() {
        for a in -5i64..=5 {
            for b in -5i64..=5 {
                for k in 0u32..=3 {
                    let x = RingElem::new(a, b, k);
                    let s = x.to_string();
                    let y: RingElem = s.parse().unwrap();
                    assert_eq!(x, y, "roundtrip failed for {s}");
                }
            }
        }
    }

    #[test]
    fn hadamard_involution() {
        // H₂·H₂ = I₂ where H₂ = (1/√2)[[1,1],[1,−1]]
        let h = RingMatrix::from_rows(vec![
            vec![r(1, 0, 1), r(1, 0, 1)],
            vec![r(1, 0, 1), r(-1, 0, 1)],
        ]);
        assert_eq!(h.mat_mul(&h).unwrap(), RingMatrix::identity(2));
        assert!(h.is_orthogonal());
    }

    #[test]
    fn identity_and_zero_matrices() {
        let i4 = RingMatrix::identity(4);
        let m = RingMatrix::from_rows(vec![
            vec![r(1, 1, 3), r(1, 0, 3), r(1, 0, 3), r(-1, 1, 3)],
            vec![r(1, 0, 3), r(-1, -1, 3), r(-1, 1, 3), r(-1, 0, 3)],
            vec![r(1, 0, 3), r(-1, 1, 3), r(-1, -1, 3), r(-1, 0, 3)],
            vec![r(-1, 1, 3), r(-1, 0, 3), r(-1, 0, 3), r(1, 1, 3)],
        ]);
        assert_eq!(i4.mat_mul(&m).unwrap(), m);
        assert!(!RingMatrix::zeros(3, 3).is_orthogonal());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = RingMatrix::zeros(2, 3);
        let b = RingMatrix::zeros(2, 3);
        assert!(matches!(a.mat_mul(&b), Err(RingError::DimensionMismatch(..))));
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = RingMatrix::from_rows(vec![
            vec![r(1, -2, 3), r(0, 0, 0)],
            vec![r(-7, 0, 1), r(5, 5, 2)],
        ]);
        let s = m.to_string();
        assert_eq!(RingMatrix::parse(&s).unwrap(), m);
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (a1, b1, k1) in (-50i64..50, -50i64..50, 0u32..4),
            (a2, b2, k2) in (-50i64..50, -50i64..50, 0u32..4),
            (a3, b3, k3) in (-50i64..50, -50i64..50, 0u32..4),
        ) {
            let x = r(a1, b1, k1);
            let y = r(a2, b2, k2);
            let z = r(a3, b3, k3);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn canonical_a_is_odd_when_k_positive(
            (a, b, k) in (-1000i64..1000, -1000i64..1000, 0u32..8),
        ) {
            let x = r(a, b, k);
            prop_assert!(x.lde() == 0 || !x.coeff_a().is_even());
        }
    }
}
