//! The acceptance suite: one callable check per criterion, shared by the
//! integration tests and the `selftest` CLI subcommand. Every tolerance
//! here is exact equality over the ring; the only numeric knobs are the
//! sample counts and the instantiation budget.

use crate::axioms::{self, catalog_by_id, check_catalog, check_h_table, rs_transport, schema_alpha_eq};
use crate::circuit::{random_circuit, semantics, Circuit, Gate};
use crate::codec::{decode2, decode_n, encode2, encode_n, gray_conjugate, gray_conjugate_inv, sigma};
use crate::graycode::{bits_to_int, changed_bit, gray, gray_inv};
use crate::normalform::{nf_1qubit, nf_hfree, nf_low_h, OneQubitFamily, OneQubitNf};
use crate::ring::RingMatrix;
use crate::synth::{exact_synthesize, matrix_parities, synthesize_even, SynthError};
use crate::words::{pword_semantics, random_word, word_parities, word_semantics, Gen, PWord, PairedGen, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:<22} {} ({:.2}s)",
            if self.passed { "pass" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CriterionResult {
    let t0 = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { name, passed, detail, seconds: t0.elapsed().as_secs_f64() }
}

/// Criterion 1: every word catalog passes the exact soundness check at
/// dimension 8 with the full instance budget.
pub fn axiom_soundness() -> CriterionResult {
    run("axiom-soundness", || {
        let mut total = 0usize;
        for id in axioms::WORD_CATALOG_IDS {
            let cat = catalog_by_id(id).map_err(|e| e.to_string())?;
            let report = check_catalog(&cat, 8, 2000, 0).map_err(|e| e.to_string())?;
            total += report.schemas.iter().map(|s| s.checked).sum::<usize>();
            if !report.all_pass() {
                return Err(format!("catalog {id} has failures:\n{}", report.render_text()));
            }
        }
        let fig_failures = axioms::check_fig12_13();
        if !fig_failures.is_empty() {
            return Err(format!("circuit-pair failures: {fig_failures:?}"));
        }
        Ok(format!("7 catalogs, {total} instances checked exactly"))
    })
}

/// Criterion 2: the transported presentation is sound, the named raw rows
/// are reproduced verbatim up to renaming, and the transversal table is
/// semantics-correct for all cosets and generators at dimension 8.
pub fn rs_transport_check() -> CriterionResult {
    run("rs-transport", || {
        let fig7 = catalog_by_id("fig7").map_err(|e| e.to_string())?;
        let generated = rs_transport(&fig7).map_err(|e| e.to_string())?;
        let report = check_catalog(&generated, 8, 2000, 0).map_err(|e| e.to_string())?;
        if !report.all_pass() {
            return Err(format!("generated schemas unsound:\n{}", report.render_text()));
        }
        // the five spot-checks against the printed raw listing
        let raw = catalog_by_id("a32_raw").map_err(|e| e.to_string())?;
        let spots = [
            ("a32:DE-ZZ", "DE-ZZ"),
            ("a32:DE-HH", "DE-HH"),
            ("a32:eps-a1", "eps-a1"),
            ("a32:H-a3", "H-a3"),
            ("a32:Z-a3-2", "Z-a3"),
        ];
        for (raw_name, gen_prefix) in spots {
            let expected = raw
                .schemas
                .iter()
                .find(|s| s.name == raw_name)
                .ok_or_else(|| format!("missing raw row {raw_name}"))?;
            let found = generated
                .schemas
                .iter()
                .find(|s| s.name.starts_with(gen_prefix) && schema_alpha_eq(s, expected));
            if found.is_none() {
                return Err(format!("no generated schema matches {raw_name} verbatim"));
            }
        }
        let failures = check_h_table(8);
        if !failures.is_empty() {
            return Err(format!("transversal table failures: {failures:?}"));
        }
        Ok(format!(
            "{} generated schemas sound; 5 raw rows matched; h-table exact on 4x120 entries",
            generated.schemas.len()
        ))
    })
}

/// Criterion 3: exact synthesis round trip over random words, plus the
/// P⊗P matrix.
pub fn synthesis_roundtrip() -> CriterionResult {
    run("synthesis-roundtrip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut count = 0;
        for &dim in &[2usize, 4, 8, 16] {
            for _ in 0..125 {
                let len = rng.gen_range(0..=30);
                let w = random_word(dim, len, rng.gen());
                let m = word_semantics(&w).map_err(|e| e.to_string())?;
                let out = exact_synthesize(&m).map_err(|e| e.to_string())?;
                if word_semantics(&out).unwrap() != m {
                    return Err(format!("product mismatch at dim {dim}"));
                }
                if word_parities(&out) != word_parities(&w) {
                    return Err(format!("parity mismatch at dim {dim}"));
                }
                count += 1;
            }
        }
        // the 4x4 matrix of the paired change-of-basis macro
        let pp = semantics(&Circuit::new(2, vec![Gate::PPair(0, 1)])).unwrap();
        let w = exact_synthesize(&pp).map_err(|e| e.to_string())?;
        if word_semantics(&w).unwrap() != pp {
            return Err("the P pair matrix does not reconstruct".into());
        }
        Ok(format!("{count} random words + the P-pair matrix reconstructed exactly"))
    })
}

/// Criterion 4: three-qubit circuits all have even parities, and an
/// odd-parity matrix is rejected by the paired synthesis.
pub fn parity_characterization() -> CriterionResult {
    run("parity", || {
        for seed in 0..200u64 {
            let c = random_circuit(3, 1 + (seed % 12) as usize, seed);
            let m = semantics(&c).unwrap();
            let p = matrix_parities(&m).map_err(|e| e.to_string())?;
            if p != (false, false) {
                return Err(format!("odd parity for a 3-qubit circuit (seed {seed})"));
            }
        }
        let m = crate::words::gen_matrix(Gen::Neg(7), 8).unwrap();
        match synthesize_even(&m) {
            Err(SynthError::OddParity) => {}
            other => return Err(format!("diag(1,...,1,-1) not rejected: {other:?}")),
        }
        Ok("200 circuits even; odd diagonal rejected".into())
    })
}

/// Criterion 5: codec round trips and the per-clause contracts.
pub fn codec_roundtrip() -> CriterionResult {
    run("codec-roundtrip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..200u64 {
            let len = rng.gen_range(0..=20);
            let c = random_circuit(2, len, rng.gen());
            let m = semantics(&c).unwrap();
            let back = semantics(&decode2(&encode2(&c).unwrap()).unwrap()).unwrap();
            if m != back {
                return Err(format!("2-qubit round trip failed at sample {i}"));
            }
        }
        for i in 0..50u64 {
            let len = rng.gen_range(0..=10);
            let c = random_circuit(3, len, rng.gen());
            let m = semantics(&c).unwrap();
            let back = semantics(&decode_n(&encode_n(&c).unwrap()).unwrap()).unwrap();
            if m != back {
                return Err(format!("3-qubit round trip failed at sample {i}"));
            }
        }
        // per-gate encode contract at n = 3, all wire offsets
        let n = 3;
        let mut gates = Vec::new();
        for q in 0..n {
            gates.push(Gate::H(q));
            gates.push(Gate::Z(q));
            gates.push(Gate::X(q));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    gates.push(Gate::Cz(a, b));
                    gates.push(Gate::Ch { control: a, target: b });
                    if a < b {
                        gates.push(Gate::Swap(a, b));
                    }
                }
            }
        }
        let n_gates = gates.len();
        for g in gates {
            let c = Circuit::new(n, vec![g.clone()]);
            let lhs = pword_semantics(&encode_n(&c).unwrap()).unwrap();
            let rhs = gray_conjugate_inv(&semantics(&c).unwrap(), n);
            if lhs != rhs {
                return Err(format!("encode clause contract fails for {g}"));
            }
        }
        // per-generator decode contract at n = 3
        let mut pgens = Vec::new();
        for a in 0..8 {
            for b in 0..8 {
                pgens.push(PairedGen::Zz(a, b));
                if a != b {
                    for s in 0..8 {
                        pgens.push(PairedGen::Zx(s, (a, b)));
                    }
                    for c in 0..8 {
                        for d in 0..8 {
                            if c != d {
                                pgens.push(PairedGen::Hh((a, b), (c, d)));
                            }
                        }
                    }
                }
            }
        }
        pgens.push(PairedGen::Xx((0, 1), (2, 3)));
        pgens.push(PairedGen::Xx((0, 7), (1, 2)));
        pgens.push(PairedGen::Xx((3, 1), (3, 5)));
        let count = pgens.len();
        for p in pgens {
            let pw = PWord::new(8, vec![p]);
            let lhs = semantics(&decode_n(&pw).unwrap()).unwrap();
            let rhs = gray_conjugate(&pword_semantics(&pw).unwrap(), n);
            if lhs != rhs {
                return Err(format!("decode clause contract fails for {p}"));
            }
        }
        Ok(format!("250 round trips; {count} decode and {n_gates} encode clauses exact"))
    })
}

/// Criterion 6: normal-form uniqueness and semantics preservation, plus
/// the exhaustive 1-qubit sweep.
pub fn normal_forms() -> CriterionResult {
    run("normal-forms", || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let dim = 8;
        // 200 pairs of semantically equal H-free words
        for i in 0..200 {
            let w1 = random_even_hfree(dim, 14, &mut rng);
            let m = word_semantics(&w1).unwrap();
            // an independent route to an equal word, plus sound insertions
            let mut w2 = exact_synthesize(&m).map_err(|e| e.to_string())?;
            for _ in 0..3 {
                let pos = rng.gen_range(0..=w2.gens.len());
                let g = random_hfree_gen(dim, &mut rng);
                w2.gens.insert(pos, g);
                w2.gens.insert(pos, g);
            }
            let nf1 = nf_hfree(&w1).map_err(|e| e.to_string())?;
            let nf2 = nf_hfree(&w2).map_err(|e| e.to_string())?;
            if nf1 != nf2 {
                return Err(format!("H-free normal forms differ at sample {i}"));
            }
            if word_semantics(&nf1.to_word()).unwrap() != m {
                return Err(format!("H-free normal form loses semantics at sample {i}"));
            }
        }
        // the analogue with one Hadamard pair
        let mut low_h_pairs = 0;
        for i in 0..200 {
            let tail = random_even_hfree(dim, 8, &mut rng);
            let (a, b) = distinct_pair(dim, &mut rng);
            let (c, d) = distinct_pair(dim, &mut rng);
            let mut gens = vec![Gen::HGen(a, b), Gen::HGen(c, d)];
            gens.extend(tail.gens.iter().copied());
            let w1 = Word::new(dim, gens);
            let mut w2 = w1.clone();
            for _ in 0..2 {
                let pos = rng.gen_range(0..=w2.gens.len());
                let g = random_hfree_gen(dim, &mut rng);
                w2.gens.insert(pos, g);
                w2.gens.insert(pos, g);
            }
            let nf1 = nf_low_h(&w1).map_err(|e| e.to_string())?;
            let nf2 = nf_low_h(&w2).map_err(|e| e.to_string())?;
            if nf1 != nf2 {
                return Err(format!("low-H normal forms differ at sample {i}"));
            }
            if word_semantics(&nf1.to_word()).unwrap() != word_semantics(&w1).unwrap() {
                return Err(format!("low-H normal form loses semantics at sample {i}"));
            }
            low_h_pairs += 1;
        }
        // exhaustive 1-qubit sweep over {H, Z} words of length 1..=12
        let mut seen = std::collections::HashSet::new();
        let mut words = 0usize;
        for len in 1..=12usize {
            for bits in 0..(1u32 << len) {
                let gates: Vec<Gate> = (0..len)
                    .map(|i| if bits >> i & 1 == 1 { Gate::H(0) } else { Gate::Z(0) })
                    .collect();
                let c = Circuit::new(1, gates);
                let nf = nf_1qubit(&c).map_err(|e| e.to_string())?;
                if nf.matrix() != semantics(&c).unwrap() {
                    return Err("1-qubit class with wrong matrix".into());
                }
                seen.insert(nf);
                words += 1;
            }
        }
        if seen.len() != 16 || words != (1 << 13) - 2 {
            return Err(format!("expected 16 classes over 8190 words, got {}", seen.len()));
        }
        // (HZ)^8 = I, confirming the order behind the sixteen classes
        let id_class = OneQubitNf { family: OneQubitFamily::Plain, k: 0 }.matrix();
        let mut c = Circuit::empty(1);
        for _ in 0..8 {
            c.gates.push(Gate::Z(0));
            c.gates.push(Gate::H(0));
        }
        if semantics(&c).unwrap() != id_class {
            return Err("(HZ)^8 is not the identity".into());
        }
        Ok(format!("200 + {low_h_pairs} uniqueness pairs; 8190 one-qubit words in 16 classes"))
    })
}

/// Criterion 7: exhaustive Gray-code properties for n <= 12.
pub fn gray_code_checks() -> CriterionResult {
    run("gray-code", || {
        for n in 1..=12usize {
            let mut seen = vec![false; 1 << n];
            let mut prev: Option<Vec<u8>> = None;
            for k in 0..(1usize << n) {
                let bits = gray(n, k).map_err(|e| e.to_string())?;
                if gray_inv(n, &bits).unwrap() != k {
                    return Err(format!("inverse fails at n={n}, k={k}"));
                }
                let v = bits_to_int(&bits);
                if seen[v] {
                    return Err(format!("collision at n={n}, k={k}"));
                }
                seen[v] = true;
                let pop: u32 = bits.iter().map(|&b| b as u32).sum();
                if pop % 2 != (k % 2) as u32 {
                    return Err(format!("parity law fails at n={n}, k={k}"));
                }
                if let Some(p) = prev {
                    let diff: Vec<usize> = (0..n).filter(|&i| p[i] != bits[i]).collect();
                    if diff.len() != 1 || changed_bit(n, k - 1).unwrap() != diff[0] {
                        return Err(format!("unit-distance fails at n={n}, k={k}"));
                    }
                }
                prev = Some(bits);
            }
        }
        Ok("bijective, unit-distance, parity law exhaustive for n <= 12".into())
    })
}

/// Criterion 8: the signed transposition ladders on random tuples at
/// dimensions 8 and 16.
pub fn sigma_checks() -> CriterionResult {
    run("sigma", || {
        let sp = sigma(0, 1, 3, 2, 8).map_err(|e| e.to_string())?;
        if !sp.forward.is_empty() || !sp.backward.is_empty() {
            return Err("(0,1,3,2) should give empty words".into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for &dim in &[8usize, 16] {
            for i in 0..50 {
                let mut pick = std::collections::BTreeSet::new();
                while pick.len() < 4 {
                    pick.insert(rng.gen_range(0..dim));
                }
                let mut v: Vec<usize> = pick.into_iter().collect();
                for j in (1..4).rev() {
                    v.swap(j, rng.gen_range(0..=j));
                }
                let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
                let sp = sigma(a, b, c, d, dim).map_err(|e| e.to_string())?;
                let f = word_semantics(&sp.forward).unwrap();
                let bw = word_semantics(&sp.backward).unwrap();
                if bw.mat_mul(&f).unwrap() != RingMatrix::identity(dim) {
                    return Err(format!("inverse fails at dim {dim} sample {i}"));
                }
                let (perm, signs) = f
                    .as_signed_permutation()
                    .ok_or_else(|| format!("not a signed permutation at sample {i}"))?;
                for (src, dst) in [(0usize, a), (1, b), (3, c), (2, d)] {
                    if perm[src] != dst || signs[src] {
                        return Err(format!("mapping fails at dim {dim}: ({a},{b},{c},{d})"));
                    }
                }
                let flips: Vec<usize> = (0..dim).filter(|&j| signs[j]).collect();
                if flips.len() > 1 || flips.first().is_some_and(|&mu| mu <= 3) {
                    return Err(format!("stray sign at dim {dim}: ({a},{b},{c},{d})"));
                }
            }
        }
        Ok("100 tuples at dims 8 and 16; inverse and mapping exact".into())
    })
}

fn random_hfree_gen(dim: usize, rng: &mut ChaCha8Rng) -> Gen {
    let a = rng.gen_range(0..dim);
    if rng.gen_bool(0.5) {
        Gen::Neg(a)
    } else {
        let b = loop {
            let b = rng.gen_range(0..dim);
            if b != a {
                break b;
            }
        };
        Gen::XGen(a, b)
    }
}

fn distinct_pair(dim: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let a = rng.gen_range(0..dim);
    let b = loop {
        let b = rng.gen_range(0..dim);
        if b != a {
            break b;
        }
    };
    (a, b)
}

fn random_even_hfree(dim: usize, len: usize, rng: &mut ChaCha8Rng) -> Word {
    let gens: Vec<Gen> = (0..len).map(|_| random_hfree_gen(dim, rng)).collect();
    let mut w = Word::new(dim, gens);
    if word_parities(&w).1 {
        let g = random_hfree_gen(dim, rng);
        w.gens.push(g);
        w.gens.push(g);
        w.gens.remove(0);
    }
    debug_assert!(!word_parities(&w).1);
    w
}

/// Run every acceptance criterion, in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        axiom_soundness(),
        rs_transport_check(),
        synthesis_roundtrip(),
        parity_characterization(),
        codec_roundtrip(),
        normal_forms(),
        gray_code_checks(),
        sigma_checks(),
    ]
}

/// Render the one-line-per-criterion report.
pub fn render(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        let _ = writeln!(out, "all {} criteria pass", results.len());
    } else {
        let _ = writeln!(out, "{failed} of {} criteria FAILED", results.len());
    }
    out
}
