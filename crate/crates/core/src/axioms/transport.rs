//! Reidemeister–Schreier transport: derive a presentation of the
//! even-parity submonoid from the simplified ambient theory.
//!
//! The coset representatives are C = {ε, (−1)_[1], H_[0,1], H_[0,1](−1)_[1]}
//! and the transversal h maps a coset and an ambient generator to a word
//! of paired generators plus the next coset. Running h symbolically over
//! the ambient equations, branching whenever a case test is undecided,
//! yields the raw transported catalog; every branch must land both sides
//! of an equation on the same coset.

use super::schema::{Catalog, Cond, IdxExpr, PatGen, Pattern, Schema};
use super::AxiomError;
use crate::words::{Gen, PWord, PairedGen, Word};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coset {
    Eps,
    Z1,
    H01,
    H01Z1,
}

impl Coset {
    pub fn all() -> [Coset; 4] {
        [Coset::Eps, Coset::Z1, Coset::H01, Coset::H01Z1]
    }

    pub fn prefix(&self) -> &'static str {
        match self {
            Coset::Eps => "eps",
            Coset::Z1 => "Z",
            Coset::H01 => "H",
            Coset::H01Z1 => "HZ",
        }
    }

    /// The representative as a word over G_N.
    pub fn word(&self, dim: usize) -> Word {
        let gens = match self {
            Coset::Eps => vec![],
            Coset::Z1 => vec![Gen::Neg(1)],
            Coset::H01 => vec![Gen::HGen(0, 1)],
            Coset::H01Z1 => vec![Gen::HGen(0, 1), Gen::Neg(1)],
        };
        Word::new(dim, gens)
    }
}

// ---------------------------------------------------------------------------
// symbolic indices and branching contexts

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Atom {
    Lit(usize),
    Var(u8), // index into the schema's variable table
}

#[derive(Debug, Clone, Default)]
struct Ctx {
    subst: BTreeMap<u8, usize>,
    ne_lit: BTreeMap<u8, BTreeSet<usize>>,
    ne_var: BTreeSet<(u8, u8)>,
}

impl Ctx {
    fn resolve(&self, a: Atom) -> Atom {
        match a {
            Atom::Var(x) => match self.subst.get(&x) {
                Some(&v) => Atom::Lit(v),
                None => a,
            },
            lit => lit,
        }
    }

    /// None = undecided (the resolved atom is a variable for which `lit`
    /// is still possible).
    fn eq_lit(&self, a: Atom, lit: usize) -> Option<bool> {
        match self.resolve(a) {
            Atom::Lit(v) => Some(v == lit),
            Atom::Var(x) => {
                if self.ne_lit.get(&x).is_some_and(|s| s.contains(&lit)) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    fn with_subst(&self, x: u8, v: usize) -> Ctx {
        let mut c = self.clone();
        c.subst.insert(x, v);
        // propagate variable-variable distinctness to the literal
        let pairs: Vec<(u8, u8)> = c
            .ne_var
            .iter()
            .filter(|&&(p, q)| p == x || q == x)
            .copied()
            .collect();
        for (p, q) in pairs {
            c.ne_var.remove(&(p, q));
            let other = if p == x { q } else { p };
            c.ne_lit.entry(other).or_default().insert(v);
        }
        c
    }

    fn with_ne_lit(&self, x: u8, v: usize) -> Ctx {
        let mut c = self.clone();
        c.ne_lit.entry(x).or_default().insert(v);
        c
    }
}

/// Split a disjunction of equality questions into disjoint branches. Each
/// branch is a refined context plus the index of the question that holds
/// (None = all false).
fn split_disjunction(ctx: &Ctx, questions: &[(Atom, usize)]) -> Vec<(Ctx, Option<usize>)> {
    fn go(ctx: Ctx, qs: &[(Atom, usize)], i: usize, out: &mut Vec<(Ctx, Option<usize>)>) {
        if i == qs.len() {
            out.push((ctx, None));
            return;
        }
        let (atom, lit) = qs[i];
        match ctx.eq_lit(atom, lit) {
            Some(true) => out.push((ctx, Some(i))),
            Some(false) => go(ctx, qs, i + 1, out),
            None => {
                let x = match ctx.resolve(atom) {
                    Atom::Var(x) => x,
                    Atom::Lit(_) => unreachable!(),
                };
                out.push((ctx.with_subst(x, lit), Some(i)));
                go(ctx.with_ne_lit(x, lit), qs, i + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    go(ctx.clone(), questions, 0, &mut out);
    out
}

// ---------------------------------------------------------------------------
// the transversal function h, symbolically

#[derive(Debug, Clone, Copy)]
enum SymGen {
    Neg(Atom),
    X(Atom, Atom),
    H(Atom, Atom),
}

#[derive(Debug, Clone, Copy)]
enum SymPair {
    Zz(Atom, Atom),
    Zx(Atom, (Atom, Atom)),
    Xx((Atom, Atom), (Atom, Atom)),
    Hh((Atom, Atom), (Atom, Atom)),
}

const A0: Atom = Atom::Lit(0);
const A1: Atom = Atom::Lit(1);

/// Given one of a, b known equal to `lit`, the other one.
fn other(ctx: &Ctx, a: Atom, b: Atom, lit: usize) -> Atom {
    if ctx.eq_lit(a, lit) == Some(true) {
        ctx.resolve(b)
    } else {
        debug_assert_eq!(ctx.eq_lit(b, lit), Some(true));
        ctx.resolve(a)
    }
}

/// One step of the transversal: all (context, output pairs, next coset)
/// branches of h(coset, gen).
fn h_step(ctx: &Ctx, coset: Coset, gen: SymGen) -> Vec<(Ctx, Vec<SymPair>, Coset)> {
    match (coset, gen) {
        (Coset::Eps, SymGen::Neg(a)) => {
            vec![(ctx.clone(), vec![SymPair::Zz(A1, a)], Coset::Z1)]
        }
        (Coset::Eps, SymGen::X(a, b)) => split_disjunction(ctx, &[(a, 1), (b, 1)])
            .into_iter()
            .map(|(c, which)| {
                let pair = match which {
                    Some(_) => SymPair::Zx(other(&c, a, b, 1), (a, b)),
                    None => SymPair::Zx(A1, (a, b)),
                };
                (c, vec![pair], Coset::Z1)
            })
            .collect(),
        (Coset::Eps, SymGen::H(a, b)) => {
            vec![(ctx.clone(), vec![SymPair::Hh((a, b), (A0, A1))], Coset::H01)]
        }

        (Coset::Z1, SymGen::Neg(a)) => {
            vec![(ctx.clone(), vec![SymPair::Zz(A1, a)], Coset::Eps)]
        }
        (Coset::Z1, SymGen::X(a, b)) => {
            vec![(ctx.clone(), vec![SymPair::Zx(A1, (a, b))], Coset::Eps)]
        }
        (Coset::Z1, SymGen::H(a, b)) => split_disjunction(ctx, &[(a, 1), (b, 1)])
            .into_iter()
            .map(|(c, which)| match which {
                Some(_) => (
                    c,
                    vec![SymPair::Zx(b, (a, b)), SymPair::Hh((a, b), (A0, A1))],
                    Coset::H01Z1,
                ),
                None => (c, vec![SymPair::Hh((a, b), (A0, A1))], Coset::H01Z1),
            })
            .collect(),

        (Coset::H01, SymGen::Neg(a)) => split_disjunction(ctx, &[(a, 0), (a, 1)])
            .into_iter()
            .map(|(c, which)| match which {
                Some(_) => (c, vec![SymPair::Zz(A1, a)], Coset::H01Z1),
                None => (c, vec![SymPair::Zx(a, (A0, A1))], Coset::H01Z1),
            })
            .collect(),
        (Coset::H01, SymGen::X(a, b)) => x_cases(ctx, a, b)
            .into_iter()
            .map(|(c, case)| {
                let pairs = match case {
                    XCase::Both01 => vec![SymPair::Zx(A1, (A0, A1))],
                    XCase::Only0 => vec![
                        SymPair::Xx((A0, A1), (a, b)),
                        SymPair::Hh((sum_atom(&c, a, b), A1), (A0, A1)),
                    ],
                    XCase::Only1 => vec![
                        SymPair::Zx(other(&c, a, b, 1), (a, b)),
                        SymPair::Hh((A0, other(&c, a, b, 1)), (A0, A1)),
                    ],
                    XCase::Neither => vec![SymPair::Xx((a, b), (A0, A1))],
                };
                (c, pairs, Coset::H01Z1)
            })
            .collect(),
        (Coset::H01, SymGen::H(a, b)) => {
            vec![(ctx.clone(), vec![SymPair::Hh((A0, A1), (a, b))], Coset::Eps)]
        }

        (Coset::H01Z1, SymGen::Neg(a)) => split_disjunction(ctx, &[(a, 0), (a, 1)])
            .into_iter()
            .map(|(c, which)| match which {
                Some(_) => (c, vec![SymPair::Zz(A1, a)], Coset::H01),
                None => (c, vec![SymPair::Zx(a, (A0, A1))], Coset::H01),
            })
            .collect(),
        (Coset::H01Z1, SymGen::X(a, b)) => x_cases(ctx, a, b)
            .into_iter()
            .map(|(c, case)| {
                let pairs = match case {
                    XCase::Both01 => vec![SymPair::Zx(A0, (A0, A1))],
                    XCase::Only0 => vec![
                        SymPair::Xx((A0, A1), (a, b)),
                        SymPair::Hh((sum_atom(&c, a, b), A1), (A0, A1)),
                    ],
                    XCase::Only1 => vec![
                        SymPair::Xx((A0, A1), (a, b)),
                        SymPair::Hh((A0, other(&c, a, b, 1)), (A0, A1)),
                    ],
                    XCase::Neither => vec![SymPair::Xx((a, b), (A0, A1))],
                };
                (c, pairs, Coset::H01)
            })
            .collect(),
        (Coset::H01Z1, SymGen::H(a, b)) => split_disjunction(ctx, &[(a, 1), (b, 1)])
            .into_iter()
            .map(|(c, which)| match which {
                Some(_) => (
                    c,
                    vec![SymPair::Hh((A0, A1), (a, b)), SymPair::Zx(a, (a, b))],
                    Coset::Z1,
                ),
                None => (c, vec![SymPair::Hh((A0, A1), (a, b))], Coset::Z1),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy)]
enum XCase {
    Both01,
    Only0,
    Only1,
    Neither,
}

/// Branch on the four possible relations of {a, b} to {0, 1}.
fn x_cases(ctx: &Ctx, a: Atom, b: Atom) -> Vec<(Ctx, XCase)> {
    let mut out = Vec::new();
    for (c0, has0) in split_disjunction(ctx, &[(a, 0), (b, 0)]) {
        for (c1, has1) in split_disjunction(&c0, &[(a, 1), (b, 1)]) {
            let case = match (has0.is_some(), has1.is_some()) {
                (true, true) => XCase::Both01,
                (true, false) => XCase::Only0,
                (false, true) => XCase::Only1,
                (false, false) => XCase::Neither,
            };
            out.push((c1, case));
        }
    }
    out
}

/// With one of a, b known equal to 0, the index "a+b" (= the other one).
fn sum_atom(ctx: &Ctx, a: Atom, b: Atom) -> Atom {
    other(ctx, a, b, 0)
}

/// Transport a generator word through h**: every branch yields the output
/// pairs and the final coset.
fn transport_word(
    ctx: &Ctx,
    coset: Coset,
    gens: &[SymGen],
) -> Vec<(Ctx, Vec<SymPair>, Coset)> {
    let mut states = vec![(ctx.clone(), Vec::new(), coset)];
    for &g in gens {
        let mut next = Vec::new();
        for (c, pairs, cs) in states {
            for (c2, mut out, cs2) in h_step(&c, cs, g) {
                let mut pairs2 = pairs.clone();
                pairs2.append(&mut out);
                next.push((c2, pairs2, cs2));
            }
        }
        states = next;
    }
    states
}

// ---------------------------------------------------------------------------
// assembling the generated catalog

struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    fn atom_to_expr(&self, ctx: &Ctx, a: Atom) -> IdxExpr {
        match ctx.resolve(a) {
            Atom::Lit(v) => IdxExpr::Lit(v as i64),
            Atom::Var(x) => IdxExpr::Var(self.names[x as usize].clone()),
        }
    }

    fn pair_to_pats(&self, ctx: &Ctx, p: SymPair) -> [PatGen; 2] {
        let e = |a: Atom| self.atom_to_expr(ctx, a);
        match p {
            SymPair::Zz(a, b) => [PatGen::Neg(e(a)), PatGen::Neg(e(b))],
            SymPair::Zx(s, (a, b)) => [PatGen::Neg(e(s)), PatGen::X(e(a), e(b))],
            SymPair::Xx((a, b), (c, d)) => [PatGen::X(e(a), e(b)), PatGen::X(e(c), e(d))],
            SymPair::Hh((a, b), (c, d)) => [PatGen::H(e(a), e(b)), PatGen::H(e(c), e(d))],
        }
    }
}

/// Convert a schema pattern over plain variables/literals into symbolic
/// generators, building the variable table as we go.
fn pattern_to_sym(p: &Pattern, table: &mut VarTable) -> Result<Vec<SymGen>, AxiomError> {
    let Pattern::Gens(pats) = p else {
        return Err(AxiomError::Parse { line: 0, msg: "builtin pattern in transport input".into() });
    };
    let mut atom = |e: &IdxExpr| -> Result<Atom, AxiomError> {
        match e {
            IdxExpr::Lit(v) if *v >= 0 => Ok(Atom::Lit(*v as usize)),
            IdxExpr::Var(x) => {
                let id = match table.names.iter().position(|n| n == x) {
                    Some(i) => i,
                    None => {
                        table.names.push(x.clone());
                        table.names.len() - 1
                    }
                };
                Ok(Atom::Var(id as u8))
            }
            _ => Err(AxiomError::Parse {
                line: 0,
                msg: "transport input must use plain variables and literals".into(),
            }),
        }
    };
    pats.iter()
        .map(|p| {
            Ok(match p {
                PatGen::Neg(a) => SymGen::Neg(atom(a)?),
                PatGen::X(a, b) => SymGen::X(atom(a)?, atom(b)?),
                PatGen::H(a, b) => SymGen::H(atom(a)?, atom(b)?),
            })
        })
        .collect()
}

/// Initial context from the input schema's distinctness conditions.
fn init_ctx(schema: &Schema, table: &VarTable) -> Result<Ctx, AxiomError> {
    let mut ctx = Ctx::default();
    for c in &schema.conds {
        let Cond::Distinct(es) = c else {
            return Err(AxiomError::Parse {
                line: 0,
                msg: format!("transport input supports only distinctness conditions, got `{c}`"),
            });
        };
        let ids: Vec<u8> = es
            .iter()
            .map(|e| match e {
                IdxExpr::Var(x) => table
                    .names
                    .iter()
                    .position(|n| n == x)
                    .map(|i| i as u8)
                    .ok_or(AxiomError::Parse { line: 0, msg: format!("unknown var {x}") }),
                _ => Err(AxiomError::Parse { line: 0, msg: "distinct over vars only".into() }),
            })
            .collect::<Result<_, _>>()?;
        for i in 0..ids.len() {
            for j in 0..i {
                let (p, q) = (ids[j].min(ids[i]), ids[j].max(ids[i]));
                ctx.ne_var.insert((p, q));
            }
        }
    }
    Ok(ctx)
}

/// Render a branch context as schema side conditions.
fn ctx_to_conds(ctx: &Ctx, table: &VarTable) -> Vec<Cond> {
    let mut conds = Vec::new();
    for (&x, lits) in &ctx.ne_lit {
        if ctx.subst.contains_key(&x) {
            continue;
        }
        for &v in lits {
            conds.push(Cond::Ne(
                IdxExpr::Var(table.names[x as usize].clone()),
                IdxExpr::Lit(v as i64),
            ));
        }
    }
    for &(p, q) in &ctx.ne_var {
        conds.push(Cond::Ne(
            IdxExpr::Var(table.names[p as usize].clone()),
            IdxExpr::Var(table.names[q as usize].clone()),
        ));
    }
    conds
}

fn pairs_to_pattern(pairs: &[SymPair], ctx: &Ctx, table: &VarTable) -> Pattern {
    let mut pats = Vec::with_capacity(pairs.len() * 2);
    for &p in pairs {
        pats.extend(table.pair_to_pats(ctx, p));
    }
    Pattern::Gens(pats)
}

fn min_dim_of(schema: &Schema) -> usize {
    fn expr_max(e: &IdxExpr) -> i64 {
        match e {
            IdxExpr::Lit(v) => *v,
            _ => 0,
        }
    }
    fn pat_max(p: &Pattern) -> i64 {
        match p {
            Pattern::Gens(pats) => pats
                .iter()
                .map(|p| match p {
                    PatGen::Neg(a) => expr_max(a),
                    PatGen::X(a, b) | PatGen::H(a, b) => expr_max(a).max(expr_max(b)),
                })
                .max()
                .unwrap_or(0),
            _ => 0,
        }
    }
    let m = pat_max(&schema.lhs).max(pat_max(&schema.rhs));
    (m as usize + 1).max(2)
}

/// Item (a): one defining equation per paired-generator shape, giving
/// each pair in terms of the transported image of its flattening.
fn item_a_inputs() -> Vec<(&'static str, Schema)> {
    let v = |n: &str| IdxExpr::var(n);
    let mk = |name: &str, pats: Vec<PatGen>| Schema {
        name: name.to_string(),
        min_dim: 2,
        conds: Vec::new(),
        lets: Vec::new(),
        lhs: Pattern::Gens(pats),
        rhs: Pattern::Gens(Vec::new()),
        // the rhs field is unused for item (a); the lhs is the flattening
    };
    vec![
        ("DE-ZZ", mk("DE-ZZ", vec![PatGen::Neg(v("a")), PatGen::Neg(v("b"))])),
        ("DE-ZX", mk("DE-ZX", vec![PatGen::Neg(v("a")), PatGen::X(v("c"), v("d"))])),
        ("DE-XX", mk("DE-XX", vec![PatGen::X(v("a"), v("b")), PatGen::X(v("c"), v("d"))])),
        ("DE-HH", mk("DE-HH", vec![PatGen::H(v("a"), v("b")), PatGen::H(v("c"), v("d"))])),
    ]
}

/// Run the full transport: item (a) equations for the four pair shapes
/// and item (b) equations for every input schema at every coset.
pub fn rs_transport(fig7: &Catalog) -> Result<Catalog, AxiomError> {
    let mut schemas = Vec::new();

    // item (a)
    for (base_name, input) in item_a_inputs() {
        let mut table = VarTable { names: Vec::new() };
        let gens = pattern_to_sym(&input.lhs, &mut table)?;
        let ctx = Ctx::default();
        let branches = transport_word(&ctx, Coset::Eps, &gens);
        let multi = branches.len() > 1;
        for (i, (bctx, pairs, coset)) in branches.into_iter().enumerate() {
            if coset != Coset::Eps {
                return Err(AxiomError::TransportInvariantViolated(format!(
                    "item (a) {base_name}: final coset is not the identity"
                )));
            }
            let name = if multi {
                format!("{base_name}-{}", i + 1)
            } else {
                base_name.to_string()
            };
            let lhs = pairs_to_pattern(&[sym_pair_of_gens(&gens)], &bctx, &table);
            let rhs = pairs_to_pattern(&pairs, &bctx, &table);
            let mut s = Schema {
                name,
                min_dim: 2,
                conds: ctx_to_conds(&bctx, &table),
                lets: Vec::new(),
                lhs,
                rhs,
            };
            s.min_dim = min_dim_of(&s);
            schemas.push(s);
        }
    }

    // item (b): each input equation at each coset
    for input in &fig7.schemas {
        let label = input.name.strip_prefix("fig7:").unwrap_or(&input.name);
        let mut table = VarTable { names: Vec::new() };
        let lhs_gens = pattern_to_sym(&input.lhs, &mut table)?;
        let rhs_gens = pattern_to_sym(&input.rhs, &mut table)?;
        let ctx0 = init_ctx(input, &table)?;
        for coset in Coset::all() {
            let mut branches = Vec::new();
            for (c1, v, cp) in transport_word(&ctx0, coset, &lhs_gens) {
                for (c2, vp, cpp) in transport_word(&c1, coset, &rhs_gens) {
                    if cp != cpp {
                        return Err(AxiomError::TransportInvariantViolated(format!(
                            "{}-{label}: the two sides land on different cosets",
                            coset.prefix()
                        )));
                    }
                    branches.push((c2, v.clone(), vp));
                }
            }
            let multi = branches.len() > 1;
            for (i, (bctx, v, vp)) in branches.into_iter().enumerate() {
                let name = if multi {
                    format!("{}-{label}-{}", coset.prefix(), i + 1)
                } else {
                    format!("{}-{label}", coset.prefix())
                };
                let mut s = Schema {
                    name,
                    min_dim: 2,
                    conds: ctx_to_conds(&bctx, &table),
                    lets: Vec::new(),
                    lhs: pairs_to_pattern(&v, &bctx, &table),
                    rhs: pairs_to_pattern(&vp, &bctx, &table),
                };
                s.min_dim = min_dim_of(&s);
                schemas.push(s);
            }
        }
    }

    Ok(Catalog { id: "rs-generated".to_string(), schemas, skipped: Vec::new() })
}

/// The P_N pair corresponding to a two-generator flattening.
fn sym_pair_of_gens(gens: &[SymGen]) -> SymPair {
    match *gens {
        [SymGen::Neg(a), SymGen::Neg(b)] => SymPair::Zz(a, b),
        [SymGen::Neg(s), SymGen::X(a, b)] => SymPair::Zx(s, (a, b)),
        [SymGen::X(a, b), SymGen::X(c, d)] => SymPair::Xx((a, b), (c, d)),
        [SymGen::H(a, b), SymGen::H(c, d)] => SymPair::Hh((a, b), (c, d)),
        _ => unreachable!("item (a) inputs are single pairs"),
    }
}

// ---------------------------------------------------------------------------
// the concrete transversal

/// h on concrete indices: run the symbolic step, which cannot branch when
/// every atom is a literal.
pub fn h_concrete(coset: Coset, g: Gen, dim: usize) -> (PWord, Coset) {
    let sym = match g {
        Gen::Neg(a) => SymGen::Neg(Atom::Lit(a)),
        Gen::XGen(a, b) => SymGen::X(Atom::Lit(a), Atom::Lit(b)),
        Gen::HGen(a, b) => SymGen::H(Atom::Lit(a), Atom::Lit(b)),
    };
    let ctx = Ctx::default();
    let mut branches = h_step(&ctx, coset, sym);
    assert_eq!(branches.len(), 1, "concrete h cannot branch");
    let (bctx, pairs, next) = branches.remove(0);
    let pgens = pairs
        .into_iter()
        .map(|p| {
            let lit = |a: Atom| match bctx.resolve(a) {
                Atom::Lit(v) => v,
                Atom::Var(_) => unreachable!(),
            };
            match p {
                SymPair::Zz(a, b) => PairedGen::Zz(lit(a), lit(b)),
                SymPair::Zx(s, (a, b)) => PairedGen::Zx(lit(s), (lit(a), lit(b))),
                SymPair::Xx((a, b), (c, d)) => PairedGen::Xx((lit(a), lit(b)), (lit(c), lit(d))),
                SymPair::Hh((a, b), (c, d)) => PairedGen::Hh((lit(a), lit(b)), (lit(c), lit(d))),
            }
        })
        .collect();
    (PWord::new(dim, pgens), next)
}

/// Exhaustive semantic check of the transversal table at a dimension:
/// ⟦c·g⟧ = ⟦p·c'⟧ for every coset and generator. Returns the failures.
pub fn check_h_table(dim: usize) -> Vec<String> {
    use crate::words::{flatten, word_semantics};
    let mut failures = Vec::new();
    let mut gens: Vec<Gen> = (0..dim).map(Gen::Neg).collect();
    for a in 0..dim {
        for b in 0..dim {
            if a != b {
                gens.push(Gen::XGen(a, b));
                gens.push(Gen::HGen(a, b));
            }
        }
    }
    for coset in Coset::all() {
        for &g in &gens {
            let (pw, next) = h_concrete(coset, g, dim);
            let mut lhs = coset.word(dim);
            lhs.gens.push(g);
            let mut rhs = flatten(&pw);
            rhs.gens.extend(next.word(dim).gens);
            let l = word_semantics(&lhs).unwrap();
            let r = word_semantics(&rhs).unwrap();
            if l != r {
                failures.push(format!("h({:?}, {g}) is not semantics-correct", coset));
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_table_is_semantics_correct_at_dim_8() {
        let failures = check_h_table(8);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn h_examples_from_the_table() {
        // h(ε, H_[a,b]) = ((H_[a,b]H_[0,1]), H_[0,1])
        let (pw, next) = h_concrete(Coset::Eps, Gen::HGen(4, 6), 8);
        assert_eq!(pw.pgens, vec![PairedGen::Hh((4, 6), (0, 1))]);
        assert_eq!(next, Coset::H01);
        // h(ε, X_[1,b]) injects the sign at the partner index
        let (pw, next) = h_concrete(Coset::Eps, Gen::XGen(1, 5), 8);
        assert_eq!(pw.pgens, vec![PairedGen::Zx(5, (1, 5))]);
        assert_eq!(next, Coset::Z1);
    }
}
