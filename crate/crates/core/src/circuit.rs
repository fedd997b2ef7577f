//! Circuit IR for the real-Clifford+CH fragment, plus macro gates, with
//! exact matrix semantics over Z[1/√2].
//!
//! Basis convention: qubit 0 is the top wire and the most significant bit
//! of a basis-state index, so an n-qubit state |x₀x₁…x_{n−1}⟩ is the basis
//! column with index `x₀·2^{n−1} + … + x_{n−1}`.

use crate::ring::{RingElem, RingMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

/// Widths above this make dense exact semantics impractical.
pub const DEFAULT_WIDTH_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("circuit width {n} exceeds the cap {cap}")]
    WidthTooLarge { n: usize, cap: usize },
    #[error("gate {gate} is malformed for {n} qubits: {msg}")]
    BadGate { gate: String, n: usize, msg: String },
    #[error("parse error at line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// A control with its polarity: `true` = black (fires on |1⟩),
/// `false` = white (fires on |0⟩).
pub type Control = (usize, bool);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    Z(usize),
    Cz(usize, usize),
    Ch { control: usize, target: usize },
    Swap(usize, usize),
    X(usize),
    Cnot { control: usize, target: usize },
    /// Multi-controlled −1 (a conditional phase); identity on the dashed wire.
    McZ { controls: Vec<Control>, dashed: usize },
    /// Multi-controlled H on the target; identity on the dashed wire.
    McH { controls: Vec<Control>, target: usize, dashed: usize },
    /// Multi-controlled (−1)^sign·ZX on the target.
    McZx { controls: Vec<Control>, target: usize, sign: bool },
    /// The P⊗P macro on two wires (the explicit 4×4 matrix).
    PPair(usize, usize),
}

impl Gate {
    /// All wires named by the gate (used for validation).
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::Z(q) | Gate::X(q) => vec![*q],
            Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::PPair(a, b) => vec![*a, *b],
            Gate::Ch { control, target } | Gate::Cnot { control, target } => {
                vec![*control, *target]
            }
            Gate::McZ { controls, dashed } => {
                let mut v: Vec<usize> = controls.iter().map(|c| c.0).collect();
                v.push(*dashed);
                v
            }
            Gate::McH { controls, target, dashed } => {
                let mut v: Vec<usize> = controls.iter().map(|c| c.0).collect();
                v.push(*target);
                v.push(*dashed);
                v
            }
            Gate::McZx { controls, target, .. } => {
                let mut v: Vec<usize> = controls.iter().map(|c| c.0).collect();
                v.push(*target);
                v
            }
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), CircuitError> {
        let wires = self.wires();
        for &w in &wires {
            if w >= n {
                return Err(CircuitError::BadGate {
                    gate: self.to_string(),
                    n,
                    msg: format!("wire {w} out of range"),
                });
            }
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() {
            return Err(CircuitError::BadGate {
                gate: self.to_string(),
                n,
                msg: "repeated qubit".into(),
            });
        }
        Ok(())
    }

    /// The adjoint gate. Everything in the fragment is self-inverse except
    /// the multi-controlled ZX, whose transpose is the XZ variant.
    pub fn dagger(&self) -> Gate {
        match self {
            Gate::McZx { controls, target, sign } => {
                Gate::McZx { controls: controls.clone(), target: *target, sign: !*sign }
            }
            g => g.clone(),
        }
    }
}

fn fmt_controls(controls: &[Control]) -> String {
    let parts: Vec<String> = controls
        .iter()
        .map(|&(q, pol)| format!("{}{}", if pol { "+" } else { "-" }, q))
        .collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Ch { control, target } => write!(f, "CH {control} {target}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::McZ { controls, dashed } => {
                write!(f, "MCZ {} dashed={dashed}", fmt_controls(controls))
            }
            Gate::McH { controls, target, dashed } => {
                write!(f, "MCH {} {target} dashed={dashed}", fmt_controls(controls))
            }
            Gate::McZx { controls, target, sign } => {
                write!(f, "MCZX {} {target} sign={}", fmt_controls(controls), *sign as u8)
            }
            Gate::PPair(a, b) => write!(f, "PP {a} {b}"),
        }
    }
}

/// An ordered gate list; gates apply first-to-last, so the circuit matrix
/// is ⟦g_m⟧·…·⟦g₁⟧.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Self {
        Circuit { n_qubits, gates }
    }

    pub fn empty(n_qubits: usize) -> Self {
        Circuit { n_qubits, gates: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for g in &self.gates {
            g.validate(self.n_qubits)?;
        }
        Ok(())
    }

    pub fn concat(&self, other: &Circuit) -> Circuit {
        assert_eq!(self.n_qubits, other.n_qubits);
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit { n_qubits: self.n_qubits, gates }
    }
}

fn bit(index: usize, wire: usize, n: usize) -> bool {
    (index >> (n - 1 - wire)) & 1 == 1
}

fn mask(wire: usize, n: usize) -> usize {
    1usize << (n - 1 - wire)
}

fn controls_fire(index: usize, controls: &[Control], n: usize) -> bool {
    controls.iter().all(|&(q, pol)| bit(index, q, n) == pol)
}

/// The P⊗P matrix of §2.2, as a function of the two local bits:
/// entry (row_bits, col_bits), all over √2³.
fn ppair_entry(row: usize, col: usize) -> RingElem {
    // (1/(2√2)) [[√2+1, 1, 1, √2−1], [1, −√2−1, √2−1, −1],
    //            [1, √2−1, −√2−1, −1], [√2−1, −1, −1, √2+1]]
    let table: [[(i64, i64); 4]; 4] = [
        [(1, 1), (1, 0), (1, 0), (-1, 1)],
        [(1, 0), (-1, -1), (-1, 1), (-1, 0)],
        [(1, 0), (-1, 1), (-1, -1), (-1, 0)],
        [(-1, 1), (-1, 0), (-1, 0), (1, 1)],
    ];
    let (a, b) = table[row][col];
    RingElem::new(a, b, 3)
}

/// Apply one gate to a state vector (a column of amplitudes).
fn apply_gate(gate: &Gate, col: &[RingElem], n: usize) -> Vec<RingElem> {
    let dim = 1usize << n;
    let mut out = vec![RingElem::zero(); dim];
    match gate {
        Gate::H(q) => {
            let m = mask(*q, n);
            for i in 0..dim {
                if i & m == 0 {
                    let lo = &col[i];
                    let hi = &col[i | m];
                    out[i] = (lo + hi).div_sqrt2();
                    out[i | m] = (lo - hi).div_sqrt2();
                }
            }
        }
        Gate::Z(q) => {
            for i in 0..dim {
                out[i] = if bit(i, *q, n) { -&col[i] } else { col[i].clone() };
            }
        }
        Gate::Cz(a, b) => {
            for i in 0..dim {
                out[i] = if bit(i, *a, n) && bit(i, *b, n) { -&col[i] } else { col[i].clone() };
            }
        }
        Gate::Ch { control, target } => {
            let m = mask(*target, n);
            for i in 0..dim {
                if !bit(i, *control, n) {
                    out[i] = col[i].clone();
                } else if i & m == 0 {
                    let lo = &col[i];
                    let hi = &col[i | m];
                    out[i] = (lo + hi).div_sqrt2();
                    out[i | m] = (lo - hi).div_sqrt2();
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ma, mb) = (mask(*a, n), mask(*b, n));
            for i in 0..dim {
                let ba = i & ma != 0;
                let bb = i & mb != 0;
                let j = if ba == bb { i } else { i ^ ma ^ mb };
                out[j] = col[i].clone();
            }
        }
        Gate::X(q) => {
            let m = mask(*q, n);
            for i in 0..dim {
                out[i ^ m] = col[i].clone();
            }
        }
        Gate::Cnot { control, target } => {
            let m = mask(*target, n);
            for i in 0..dim {
                let j = if bit(i, *control, n) { i ^ m } else { i };
                out[j] = col[i].clone();
            }
        }
        Gate::McZ { controls, .. } => {
            for i in 0..dim {
                out[i] = if controls_fire(i, controls, n) { -&col[i] } else { col[i].clone() };
            }
        }
        Gate::McH { controls, target, .. } => {
            let m = mask(*target, n);
            for i in 0..dim {
                if !controls_fire(i, controls, n) {
                    out[i] = col[i].clone();
                } else if i & m == 0 {
                    let lo = &col[i];
                    let hi = &col[i | m];
                    out[i] = (lo + hi).div_sqrt2();
                    out[i | m] = (lo - hi).div_sqrt2();
                }
            }
        }
        Gate::McZx { controls, target, sign } => {
            // ZX: |x⟩ ↦ (−1)^{1−x}|1−x⟩ on the target when controls fire
            let m = mask(*target, n);
            for i in 0..dim {
                if !controls_fire(i, controls, n) {
                    out[i] = col[i].clone();
                } else {
                    // |x⟩ ↦ (−1)^{sign + 1 − x}|1−x⟩ on the target
                    let x = i & m != 0;
                    let positive = *sign ^ x;
                    let v = if positive { col[i].clone() } else { -&col[i] };
                    out[i ^ m] = v;
                }
            }
        }
        Gate::PPair(a, b) => {
            let (ma, mb) = (mask(*a, n), mask(*b, n));
            for i in 0..dim {
                if i & ma == 0 && i & mb == 0 {
                    for rbits in 0..4usize {
                        let mut j = i;
                        if rbits & 2 != 0 {
                            j |= ma;
                        }
                        if rbits & 1 != 0 {
                            j |= mb;
                        }
                        let mut acc = RingElem::zero();
                        for cbits in 0..4usize {
                            let mut src = i;
                            if cbits & 2 != 0 {
                                src |= ma;
                            }
                            if cbits & 1 != 0 {
                                src |= mb;
                            }
                            if !col[src].is_zero() {
                                acc = &acc + &(&ppair_entry(rbits, cbits) * &col[src]);
                            }
                        }
                        out[j] = acc;
                    }
                }
            }
        }
    }
    out
}

/// Exact unitary of the circuit, at the default width cap.
pub fn semantics(c: &Circuit) -> Result<RingMatrix, CircuitError> {
    semantics_capped(c, DEFAULT_WIDTH_CAP)
}

pub fn semantics_capped(c: &Circuit, cap: usize) -> Result<RingMatrix, CircuitError> {
    if c.n_qubits > cap {
        return Err(CircuitError::WidthTooLarge { n: c.n_qubits, cap });
    }
    c.validate()?;
    let n = c.n_qubits;
    let dim = 1usize << n;
    let mut cols: Vec<Vec<RingElem>> = (0..dim)
        .map(|j| {
            let mut v = vec![RingElem::zero(); dim];
            v[j] = RingElem::one();
            v
        })
        .collect();
    for g in &c.gates {
        for colv in cols.iter_mut() {
            *colv = apply_gate(g, colv, n);
        }
    }
    let mut m = RingMatrix::zeros(dim, dim);
    for (j, colv) in cols.iter().enumerate() {
        for (i, v) in colv.iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v.clone());
            }
        }
    }
    Ok(m)
}

/// The mirrored circuit: gate list reversed, each gate replaced by its
/// adjoint. Satisfies ⟦dagger(c)⟧ = ⟦c⟧ᵀ.
pub fn dagger(c: &Circuit) -> Circuit {
    let gates = c.gates.iter().rev().map(Gate::dagger).collect();
    Circuit { n_qubits: c.n_qubits, gates }
}

/// Uniformly sampled primitive gates (H, Z, CZ, CH), deterministic per seed.
pub fn random_circuit(n: usize, len: usize, seed: u64) -> Circuit {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        let kind = if n == 1 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let g = match kind {
            0 => Gate::H(rng.gen_range(0..n)),
            1 => Gate::Z(rng.gen_range(0..n)),
            2 => {
                let a = rng.gen_range(0..n);
                let b = loop {
                    let b = rng.gen_range(0..n);
                    if b != a {
                        break b;
                    }
                };
                Gate::Cz(a, b)
            }
            _ => {
                let control = rng.gen_range(0..n);
                let target = loop {
                    let t = rng.gen_range(0..n);
                    if t != control {
                        break t;
                    }
                };
                Gate::Ch { control, target }
            }
        };
        gates.push(g);
    }
    Circuit { n_qubits: n, gates }
}

// ---------------------------------------------------------------------------
// text format

fn parse_controls(tok: &str, line: usize, col: usize) -> Result<Vec<Control>, CircuitError> {
    let err = |msg: String| CircuitError::Parse { line, col, msg };
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected control list [..], got `{tok}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        let (pol, rest) = match part.chars().next() {
            Some('+') => (true, &part[1..]),
            Some('-') => (false, &part[1..]),
            _ => return Err(err(format!("control must start with + or -: `{part}`"))),
        };
        let q: usize = rest.parse().map_err(|_| err(format!("bad control wire `{part}`")))?;
        out.push((q, pol));
    }
    Ok(out)
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut n_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |col: usize, msg: String| CircuitError::Parse { line: line_no, col, msg };
        if n_qubits.is_none() {
            if toks.len() != 2 || toks[0] != "qubits" {
                return Err(err(1, "expected header `qubits N`".into()));
            }
            let n = toks[1].parse().map_err(|_| err(2, "bad qubit count".into()))?;
            n_qubits = Some(n);
            continue;
        }
        let q = |idx: usize| -> Result<usize, CircuitError> {
            toks.get(idx)
                .ok_or_else(|| err(idx + 1, "missing wire operand".into()))?
                .parse::<usize>()
                .map_err(|_| err(idx + 1, format!("bad wire `{}`", toks[idx])))
        };
        let kv = |idx: usize, key: &str| -> Result<usize, CircuitError> {
            let tok = toks.get(idx).ok_or_else(|| err(idx + 1, format!("missing {key}=")))?;
            tok.strip_prefix(&format!("{key}="))
                .ok_or_else(|| err(idx + 1, format!("expected {key}=…, got `{tok}`")))?
                .parse()
                .map_err(|_| err(idx + 1, format!("bad {key} value in `{tok}`")))
        };
        let gate = match toks[0] {
            "H" => Gate::H(q(1)?),
            "Z" => Gate::Z(q(1)?),
            "X" => Gate::X(q(1)?),
            "CZ" => Gate::Cz(q(1)?, q(2)?),
            "CH" => Gate::Ch { control: q(1)?, target: q(2)? },
            "SWAP" => Gate::Swap(q(1)?, q(2)?),
            "CNOT" => Gate::Cnot { control: q(1)?, target: q(2)? },
            "PP" => Gate::PPair(q(1)?, q(2)?),
            "MCZ" => {
                let controls = parse_controls(toks.get(1).copied().unwrap_or(""), line_no, 2)?;
                Gate::McZ { controls, dashed: kv(2, "dashed")? }
            }
            "MCH" => {
                let controls = parse_controls(toks.get(1).copied().unwrap_or(""), line_no, 2)?;
                Gate::McH { controls, target: q(2)?, dashed: kv(3, "dashed")? }
            }
            "MCZX" => {
                let controls = parse_controls(toks.get(1).copied().unwrap_or(""), line_no, 2)?;
                let sign = match kv(3, "sign")? {
                    0 => false,
                    1 => true,
                    _ => return Err(err(4, "sign must be 0 or 1".into())),
                };
                Gate::McZx { controls, target: q(2)?, sign }
            }
            other => return Err(err(1, format!("unknown gate `{other}`"))),
        };
        gates.push(gate);
    }
    let n_qubits =
        n_qubits.ok_or(CircuitError::Parse { line: 1, col: 1, msg: "missing header".into() })?;
    let c = Circuit { n_qubits, gates };
    c.validate().map_err(|e| CircuitError::Parse { line: 0, col: 0, msg: e.to_string() })?;
    Ok(c)
}

pub fn print_circuit(c: &Circuit) -> String {
    let mut s = format!("qubits {}\n", c.n_qubits);
    for g in &c.gates {
        s.push_str(&g.to_string());
        s.push('\n');
    }
    s
}
