//! Command-line front end: exact evaluation, synthesis, translation,
//! normal forms, and equational soundness checks for real-Clifford+CH
//! circuits.
//!
//! Exit codes: 0 on success, 1 when a semantic check finds a failure,
//! 2 on usage or parse errors.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use rcch::axioms;
use rcch::circuit::{parse_circuit, print_circuit, semantics};
use rcch::codec;
use rcch::normalform;
use rcch::ring::RingMatrix;
use rcch::synth;
use rcch::words::{self, parse_pword, parse_word, print_pword, print_word, word_parities};
use serde_json::json;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rcch", version, about = "exact tools for real-Clifford+CH circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the n-bit Gray code table, or a single code
    Gray { n: usize, k: Option<usize> },
    /// Decompose an exact matrix into a generator word
    Synth {
        /// Exact-matrix file (one row per line, entries a+b*r2/r2^k)
        matrix: PathBuf,
        /// Produce paired generators (requires even parities)
        #[arg(long)]
        paired: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a circuit file into a generator word
    Encode {
        circuit: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check the decode(encode(·)) round trip
        #[arg(long)]
        verify: bool,
    },
    /// Translate a word file back into a circuit
    Decode {
        word: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check the decoded circuit against the word's semantics
        #[arg(long)]
        verify: bool,
    },
    /// Canonicalize a word file (H-free or at most one Hadamard pair)
    Normalize {
        word: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two circuit, word, or matrix files by exact semantics
    Equiv { left: PathBuf, right: PathBuf },
    /// H- and ZX-parities of a word, circuit, or matrix file
    Parity { file: PathBuf },
    /// Check an equation catalog by exact instantiation
    VerifyAxioms {
        /// fig6 … fig11, a32_raw, rs-generated, fig12_13, or `all`
        #[arg(long)]
        catalog: String,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generate the transported submonoid presentation
    RsGen {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check decode(encode(C)) = C on a circuit file
    Roundtrip { circuit: PathBuf },
    /// Run the full acceptance suite
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Semantic matrix of a word or paired-word file.
fn word_file_semantics(text: &str) -> Result<RingMatrix> {
    if text.contains('(') {
        let pw = parse_pword(text)?;
        Ok(words::pword_semantics(&pw)?)
    } else {
        let w = parse_word(text)?;
        Ok(words::word_semantics(&w)?)
    }
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gray { n, k } => {
            let fmt = |bits: &[u8]| bits.iter().map(|b| b.to_string()).collect::<String>();
            match k {
                Some(k) => println!("{}", fmt(&rcch::graycode::gray(n, k)?)),
                None => {
                    for k in 0..(1usize << n) {
                        println!("{k}\t{}", fmt(&rcch::graycode::gray(n, k)?));
                    }
                }
            }
            Ok(0)
        }
        Command::Synth { matrix, paired, out } => {
            let m = RingMatrix::parse(&read(&matrix)?)?;
            let text = if paired {
                print_pword(&synth::synthesize_even(&m)?)
            } else {
                print_word(&synth::exact_synthesize(&m)?)
            };
            write_out(&out, &text)?;
            Ok(0)
        }
        Command::Encode { circuit, out, verify } => {
            let c = parse_circuit(&read(&circuit)?)?;
            let text = match c.n_qubits {
                2 => print_word(&codec::encode2(&c)?),
                _ => print_pword(&codec::encode_n(&c)?),
            };
            write_out(&out, &text)?;
            if verify && !codec::roundtrip(&c)? {
                eprintln!("round trip FAILED");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Decode { word, out, verify } => {
            let text = read(&word)?;
            let (circuit, expected) = if text.contains('(') {
                let pw = parse_pword(&text)?;
                let n = pw.dim.trailing_zeros() as usize;
                let sem = codec::gray_conjugate(&words::pword_semantics(&pw)?, n);
                (codec::decode_n(&pw)?, sem)
            } else {
                let w = parse_word(&text)?;
                (codec::decode2(&w)?, words::word_semantics(&w)?)
            };
            write_out(&out, &print_circuit(&circuit))?;
            if verify && semantics(&circuit)? != expected {
                eprintln!("decode verification FAILED");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Normalize { word, out } => {
            let w = parse_word(&read(&word)?)?;
            let h_count = w.gens.iter().filter(|g| g.is_h()).count();
            let (nf_word, summary) = if h_count == 0 {
                let nf = normalform::nf_hfree(&w)?;
                (nf.to_word(), nf.to_string())
            } else {
                let nf = normalform::nf_low_h(&w)?;
                (nf.to_word(), nf.to_string())
            };
            let mut text = print_word(&nf_word);
            text.push_str(&format!("# nf: {summary}\n"));
            write_out(&out, &text)?;
            if out.is_some() {
                println!("{summary}");
            }
            Ok(0)
        }
        Command::Equiv { left, right } => {
            let (lt, rt) = (read(&left)?, read(&right)?);
            let as_matrix = |text: &str| -> Result<RingMatrix> {
                if text.trim_start().starts_with("qubits") {
                    Ok(semantics(&parse_circuit(text)?)?)
                } else if text.trim_start().starts_with("dim") {
                    word_file_semantics(text)
                } else {
                    Ok(RingMatrix::parse(text)?)
                }
            };
            let (lm, rm) = (as_matrix(&lt)?, as_matrix(&rt)?);
            if lm == rm {
                println!("equivalent");
                Ok(0)
            } else {
                println!("NOT equivalent");
                Ok(1)
            }
        }
        Command::Parity { file } => {
            let text = read(&file)?;
            let (h, zx) = if text.trim_start().starts_with("qubits") {
                synth::matrix_parities(&semantics(&parse_circuit(&text)?)?)?
            } else if text.trim_start().starts_with("dim") {
                if text.contains('(') {
                    word_parities(&words::flatten(&parse_pword(&text)?))
                } else {
                    word_parities(&parse_word(&text)?)
                }
            } else {
                synth::matrix_parities(&RingMatrix::parse(&text)?)?
            };
            println!("h_parity={} zx_parity={}", h as u8, zx as u8);
            Ok(0)
        }
        Command::VerifyAxioms { catalog, dim, budget, seed, json } => {
            if catalog == "fig12_13" {
                let failures = axioms::check_fig12_13();
                let (pairs, skipped) = axioms::fig12_13_semantic();
                if json {
                    println!(
                        "{}",
                        json!({
                            "catalog": "fig12_13",
                            "checked": pairs.len(),
                            "failures": failures,
                            "skipped": skipped
                                .iter()
                                .map(|(n, w)| json!({"name": n, "reason": w}))
                                .collect::<Vec<_>>(),
                        })
                    );
                } else {
                    println!("catalog fig12_13 ({} matrix-level pairs)", pairs.len());
                    for (name, why) in &skipped {
                        println!("  {name:<16} skipped: {why}");
                    }
                    println!(
                        "  => {}",
                        if failures.is_empty() { "all pairs pass" } else { "FAILURES FOUND" }
                    );
                }
                return Ok(if failures.is_empty() { 0 } else { 1 });
            }
            let ids: Vec<String> = if catalog == "all" {
                let mut v: Vec<String> =
                    axioms::WORD_CATALOG_IDS.iter().map(|s| s.to_string()).collect();
                v.push("rs-generated".into());
                v
            } else {
                vec![catalog]
            };
            let mut all_pass = true;
            for id in ids {
                let cat = axioms::catalog_by_id(&id).map_err(|e| anyhow!("{e}"))?;
                let report = axioms::check_catalog(&cat, dim, budget, seed)?;
                all_pass &= report.all_pass();
                if json {
                    let schemas: Vec<_> = report
                        .schemas
                        .iter()
                        .map(|s| {
                            json!({
                                "schema": s.name,
                                "instances": s.total,
                                "checked": s.checked,
                                "sampled": s.sampled,
                                "failures": s.failures,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "catalog": report.id,
                            "dim": report.dim,
                            "budget": report.budget,
                            "seed": report.seed,
                            "pass": report.all_pass(),
                            "schemas": schemas,
                        })
                    );
                } else {
                    print!("{}", report.render_text());
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::RsGen { out } => {
            let fig7 = axioms::catalog_by_id("fig7").map_err(|e| anyhow!("{e}"))?;
            let generated = axioms::rs_transport(&fig7)?;
            write_out(&out, &axioms::render_catalog(&generated))?;
            Ok(0)
        }
        Command::Roundtrip { circuit } => {
            let c = parse_circuit(&read(&circuit)?)?;
            if codec::roundtrip(&c)? {
                println!("round trip holds");
                Ok(0)
            } else {
                println!("round trip FAILED");
                Ok(1)
            }
        }
        Command::Selftest { json } => {
            let results = rcch::selftest::run_all();
            if json {
                for r in &results {
                    println!(
                        "{}",
                        json!({
                            "criterion": r.name,
                            "pass": r.passed,
                            "detail": r.detail,
                            "seconds": r.seconds,
                        })
                    );
                }
            } else {
                print!("{}", rcch::selftest::render(&results));
            }
            Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
