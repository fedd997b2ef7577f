//! Machine-readable equation catalogs, exact soundness checking, and the
//! Reidemeister–Schreier transport generator.
//!
//! The word-level catalogs are data files under `catalogs/`, transcribed
//! from the source listings so they can be audited line by line; the
//! checker instantiates every schema at a chosen dimension and compares
//! both sides as exact matrices.

mod schema;
mod transport;
mod wwords;

pub use schema::{
    check_catalog, check_schema, check_sound, instantiate, parse_catalog, render_catalog,
    render_schema, schema_alpha_eq, Catalog, CatalogReport, Cond, IdxExpr, Instances, LetBinding,
    PatGen, Pattern, Schema, SchemaReport,
};
pub use transport::{check_h_table, h_concrete, rs_transport, Coset};
pub use wwords::build_w_word;

use crate::circuit::{semantics, Circuit, Gate};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AxiomError {
    #[error("dimension {dim} below the schema's minimum {min}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("catalog parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("transport invariant violated: {0}")]
    TransportInvariantViolated(String),
    #[error("tuple does not match the required Gray form")]
    FormMismatch,
}

const FIG6: &str = include_str!("../../catalogs/fig6.cat");
const FIG7: &str = include_str!("../../catalogs/fig7.cat");
const FIG8: &str = include_str!("../../catalogs/fig8.cat");
const FIG9: &str = include_str!("../../catalogs/fig9.cat");
const FIG10: &str = include_str!("../../catalogs/fig10.cat");
const FIG11: &str = include_str!("../../catalogs/fig11.cat");
const A32_RAW: &str = include_str!("../../catalogs/a32_raw.cat");

pub const WORD_CATALOG_IDS: [&str; 7] =
    ["fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "a32_raw"];

/// Load one of the built-in word catalogs, or generate the transported
/// one for `rs-generated`.
pub fn catalog_by_id(id: &str) -> Result<Catalog, AxiomError> {
    match id {
        "fig6" => parse_catalog("fig6", FIG6),
        "fig7" => parse_catalog("fig7", FIG7),
        "fig8" => parse_catalog("fig8", FIG8),
        "fig9" => parse_catalog("fig9", FIG9),
        "fig10" => parse_catalog("fig10", FIG10),
        "fig11" => parse_catalog("fig11", FIG11),
        "a32_raw" => parse_catalog("a32_raw", A32_RAW),
        "rs-generated" => rs_transport(&catalog_by_id("fig7")?),
        other => Err(AxiomError::Parse { line: 0, msg: format!("unknown catalog `{other}`") }),
    }
}

// ---------------------------------------------------------------------------
// the 2-qubit auxiliary equations recoverable from the source prose

/// A circuit-level equation checked at the exact 4×4 matrix level.
#[derive(Debug, Clone)]
pub struct CircuitPair {
    pub name: String,
    pub lhs: Circuit,
    pub rhs: Circuit,
}

/// The 2-qubit auxiliary equation set: most entries are drawn figures the
/// source does not preserve, so only the prose-recoverable ones are
/// checked; the rest are reported as skipped.
pub fn fig12_13_semantic() -> (Vec<CircuitPair>, Vec<(String, String)>) {
    let cnot = Gate::Cnot { control: 0, target: 1 };
    let pairs = vec![
        CircuitPair {
            name: "fig12:81".into(),
            lhs: Circuit::new(2, vec![cnot.clone(), cnot.clone()]),
            rhs: Circuit::empty(2),
        },
        // the printed derivation of (81) rewrites each ⊕ through the
        // H·CZ·H expansion, which pins the expansion itself
        CircuitPair {
            name: "fig12:81-cnot-expansion".into(),
            lhs: Circuit::new(2, vec![cnot]),
            rhs: Circuit::new(2, vec![Gate::H(1), Gate::Cz(0, 1), Gate::H(1)]),
        },
    ];
    let skipped = vec![
        (
            "fig12:82-110".to_string(),
            "source-unreadable: drawn circuit figures".to_string(),
        ),
        (
            "fig13:111-133".to_string(),
            "source-unreadable: drawn circuit figures".to_string(),
        ),
    ];
    (pairs, skipped)
}

/// Check the recoverable circuit pairs exactly; returns failures.
pub fn check_fig12_13() -> Vec<String> {
    let (pairs, _) = fig12_13_semantic();
    let mut failures = Vec::new();
    for p in pairs {
        let l = semantics(&p.lhs).unwrap();
        let r = semantics(&p.rhs).unwrap();
        if l != r {
            failures.push(p.name);
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_catalogs_parse() {
        for id in WORD_CATALOG_IDS {
            let cat = catalog_by_id(id).unwrap();
            assert!(!cat.schemas.is_empty(), "{id} has schemas");
        }
    }

    #[test]
    fn fig12_13_recoverable_entries_hold() {
        assert!(check_fig12_13().is_empty());
        let (_, skipped) = fig12_13_semantic();
        assert!(!skipped.is_empty());
    }

    #[test]
    fn instance_counting_examples() {
        // one free index over 0..7
        let cat = catalog_by_id("fig8").unwrap();
        let s20 = cat.schemas.iter().find(|s| s.name == "fig8:20").unwrap();
        let inst = instantiate(s20, 8, 2000, 0).unwrap();
        assert_eq!(inst.total, Some(8));
        // a+2 ≤ 7 leaves six assignments
        let s24 = cat.schemas.iter().find(|s| s.name == "fig8:24").unwrap();
        let inst = instantiate(s24, 8, 2000, 0).unwrap();
        assert_eq!(inst.total, Some(6));
        // literal-only schema: exactly one instance
        let cat7 = catalog_by_id("fig7").unwrap();
        let d4 = cat7.schemas.iter().find(|s| s.name == "fig7:d4*").unwrap();
        let inst = instantiate(d4, 8, 2000, 0).unwrap();
        assert_eq!(inst.total, Some(1));
        // below the minimum dimension
        assert!(matches!(
            instantiate(d4, 4, 2000, 0),
            Err(AxiomError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn check_sound_examples() {
        use crate::words::{Gen, Word};
        // ((−1)_0 X_01)((−1)_1 X_01) ≈ ε
        let lhs = Word::new(8, vec![Gen::Neg(0), Gen::XGen(0, 1), Gen::Neg(1), Gen::XGen(0, 1)]);
        assert!(check_sound(&lhs, &Word::empty(8)));
        // a mutated instance: (−1)_0 (−1)_1 vs ε
        let bad = Word::new(8, vec![Gen::Neg(0), Gen::Neg(1)]);
        assert!(!check_sound(&bad, &Word::empty(8)));
    }

    /// The budget produces a deterministic sample.
    #[test]
    fn sampling_is_deterministic() {
        let cat = catalog_by_id("fig6").unwrap();
        let d4 = cat.schemas.iter().find(|s| s.name == "fig6:d4").unwrap();
        let a = instantiate(d4, 8, 50, 7).unwrap();
        let b = instantiate(d4, 8, 50, 7).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.assignments.len(), 50);
        assert!(a.sampled);
        let c = instantiate(d4, 8, 50, 8).unwrap();
        assert_ne!(a.assignments, c.assignments);
    }
}
