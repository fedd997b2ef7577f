//! Parameterized word equations: the schema file format, instantiation
//! under side conditions, and exact soundness checking.

use super::wwords::build_w_word;
use super::AxiomError;
use crate::codec::sigma;
use crate::graycode::{bits_to_int, gray};
use crate::words::{flatten, word_semantics, Gen, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A tiny index expression: `$a`, `3`, `$a+1`, `$j+$k`, `$j*$k`, `$c-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdxExpr {
    Lit(i64),
    Var(String),
    Add(Box<IdxExpr>, Box<IdxExpr>),
    Sub(Box<IdxExpr>, Box<IdxExpr>),
    Mul(Box<IdxExpr>, Box<IdxExpr>),
}

impl IdxExpr {
    pub fn var(name: &str) -> Self {
        IdxExpr::Var(name.to_string())
    }

    fn eval_i64(&self, asn: &BTreeMap<String, usize>) -> Option<i64> {
        Some(match self {
            IdxExpr::Lit(v) => *v,
            IdxExpr::Var(x) => *asn.get(x)? as i64,
            IdxExpr::Add(a, b) => a.eval_i64(asn)? + b.eval_i64(asn)?,
            IdxExpr::Sub(a, b) => a.eval_i64(asn)? - b.eval_i64(asn)?,
            IdxExpr::Mul(a, b) => a.eval_i64(asn)? * b.eval_i64(asn)?,
        })
    }

    /// Evaluate as a basis index; None when out of [0, dim).
    pub fn eval(&self, asn: &BTreeMap<String, usize>, dim: usize) -> Option<usize> {
        let v = self.eval_i64(asn)?;
        if v < 0 || v >= dim as i64 {
            None
        } else {
            Some(v as usize)
        }
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            IdxExpr::Lit(_) => {}
            IdxExpr::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            IdxExpr::Add(a, b) | IdxExpr::Sub(a, b) | IdxExpr::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn parse(s: &str) -> Result<IdxExpr, String> {
        // atom (op atom)*, left-associative
        let mut rest = s.trim();
        let (mut acc, mut r) = parse_atom(rest)?;
        rest = r;
        while !rest.is_empty() {
            let op = rest.chars().next().unwrap();
            if op != '+' && op != '-' && op != '*' {
                return Err(format!("bad operator in index expression `{s}`"));
            }
            let (atom, r2) = parse_atom(&rest[1..])?;
            acc = match op {
                '+' => IdxExpr::Add(Box::new(acc), Box::new(atom)),
                '-' => IdxExpr::Sub(Box::new(acc), Box::new(atom)),
                _ => IdxExpr::Mul(Box::new(acc), Box::new(atom)),
            };
            r = r2;
            rest = r;
        }
        Ok(acc)
    }
}

fn parse_atom(s: &str) -> Result<(IdxExpr, &str), String> {
    let s = s.trim_start();
    if let Some(rest) = s.strip_prefix('$') {
        let end = rest
            .find(|c: char| !c.is_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(format!("empty variable in `{s}`"));
        }
        Ok((IdxExpr::Var(rest[..end].to_string()), &rest[end..]))
    } else {
        let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            return Err(format!("expected index atom in `{s}`"));
        }
        let v: i64 = s[..end].parse().map_err(|_| format!("bad literal in `{s}`"))?;
        Ok((IdxExpr::Lit(v), &s[end..]))
    }
}

impl fmt::Display for IdxExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdxExpr::Lit(v) => write!(f, "{v}"),
            IdxExpr::Var(x) => write!(f, "${x}"),
            IdxExpr::Add(a, b) => write!(f, "{a}+{b}"),
            IdxExpr::Sub(a, b) => write!(f, "{a}-{b}"),
            IdxExpr::Mul(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// A generator pattern: kind plus one or two index expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatGen {
    Neg(IdxExpr),
    X(IdxExpr, IdxExpr),
    H(IdxExpr, IdxExpr),
}

impl PatGen {
    fn materialize(&self, asn: &BTreeMap<String, usize>, dim: usize) -> Option<Gen> {
        match self {
            PatGen::Neg(a) => Some(Gen::Neg(a.eval(asn, dim)?)),
            PatGen::X(a, b) => {
                let (a, b) = (a.eval(asn, dim)?, b.eval(asn, dim)?);
                if a == b {
                    None
                } else {
                    Some(Gen::XGen(a, b))
                }
            }
            PatGen::H(a, b) => {
                let (a, b) = (a.eval(asn, dim)?, b.eval(asn, dim)?);
                if a == b {
                    None
                } else {
                    Some(Gen::HGen(a, b))
                }
            }
        }
    }

    fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            PatGen::Neg(a) => a.vars_into(out),
            PatGen::X(a, b) | PatGen::H(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }
}

impl fmt::Display for PatGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatGen::Neg(a) => write!(f, "Z[{a}]"),
            PatGen::X(a, b) => write!(f, "X[{a},{b}]"),
            PatGen::H(a, b) => write!(f, "H[{a},{b}]"),
        }
    }
}

/// One side of an equation: a word pattern or a constructed word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Gens(Vec<PatGen>),
    /// Σ_{a,b,c,d} ∘ (H_[0,1]H_[3,2]) ∘ Σ'_{a,b,c,d}.
    SigmaConj([IdxExpr; 4]),
    /// The tailored Gray-block conjugation word (right-hand sides of the
    /// two Gray-form Hadamard-pair equations).
    WWord([IdxExpr; 4]),
}

impl Pattern {
    pub(crate) fn vars_into(&self, out: &mut Vec<String>) {
        self.vars_into_impl(out)
    }

    pub fn materialize(&self, asn: &BTreeMap<String, usize>, dim: usize) -> Option<Word> {
        match self {
            Pattern::Gens(pats) => {
                let mut gens = Vec::with_capacity(pats.len());
                for p in pats {
                    gens.push(p.materialize(asn, dim)?);
                }
                Some(Word::new(dim, gens))
            }
            Pattern::SigmaConj(es) => {
                let mut idx = [0usize; 4];
                for (i, e) in es.iter().enumerate() {
                    idx[i] = e.eval(asn, dim)?;
                }
                let sp = sigma(idx[0], idx[1], idx[2], idx[3], dim).ok()?;
                let mut w = sp.forward.clone();
                w.gens.push(Gen::HGen(0, 1));
                w.gens.push(Gen::HGen(3, 2));
                w.gens.extend(sp.backward.gens.iter().copied());
                Some(w)
            }
            Pattern::WWord(es) => {
                let mut idx = [0usize; 4];
                for (i, e) in es.iter().enumerate() {
                    idx[i] = e.eval(asn, dim)?;
                }
                if !dim.is_power_of_two() {
                    return None;
                }
                let n = dim.trailing_zeros() as usize;
                let pw = build_w_word(idx[0], idx[1], idx[2], idx[3], n).ok()?;
                Some(flatten(&pw))
            }
        }
    }

    fn vars_into_impl(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Gens(pats) => {
                for p in pats {
                    p.vars_into(out);
                }
            }
            Pattern::SigmaConj(es) | Pattern::WWord(es) => {
                for e in es {
                    e.vars_into(out);
                }
            }
        }
    }
}

/// Gray-block classification of a four-tuple of basis indices: the first
/// form flips the earlier wire between the pair halves, the second flips
/// the later wire.
fn gray_block_form(idx: [usize; 4], dim: usize) -> Option<bool> {
    if !dim.is_power_of_two() {
        return None;
    }
    let n = dim.trailing_zeros() as usize;
    let g: Vec<usize> = idx.iter().map(|&s| bits_to_int(&gray(n, s).unwrap())).collect();
    let u = g[0] ^ g[1];
    let v = g[0] ^ g[2];
    if u.count_ones() != 1 || v.count_ones() != 1 || u == v {
        return None;
    }
    if g[3] != g[0] ^ u ^ v || g[0] & u != 0 || g[0] & v != 0 {
        return None;
    }
    // u at the earlier wire (higher bit) = first form
    Some(u > v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    Distinct(Vec<IdxExpr>),
    Ne(IdxExpr, IdxExpr),
    Lt(IdxExpr, IdxExpr),
    Le(IdxExpr, IdxExpr),
    NotIn(IdxExpr, Vec<IdxExpr>),
    In(IdxExpr, Vec<i64>),
    OddDiff(IdxExpr, IdxExpr),
    EvenDiff(IdxExpr, IdxExpr),
    SomeEq(Vec<(IdxExpr, i64)>),
    CardLe3([IdxExpr; 4]),
    GrayForm36([IdxExpr; 4]),
    GrayForm37([IdxExpr; 4]),
    NotGrayForm([IdxExpr; 4]),
}

impl Cond {
    pub fn holds(&self, asn: &BTreeMap<String, usize>, dim: usize) -> Option<bool> {
        let ev = |e: &IdxExpr| e.eval(asn, dim);
        Some(match self {
            Cond::Distinct(es) => {
                let mut vals = Vec::with_capacity(es.len());
                for e in es {
                    vals.push(ev(e)?);
                }
                let mut s = vals.clone();
                s.sort_unstable();
                s.dedup();
                s.len() == vals.len()
            }
            Cond::Ne(a, b) => ev(a)? != ev(b)?,
            Cond::Lt(a, b) => ev(a)? < ev(b)?,
            Cond::Le(a, b) => ev(a)? <= ev(b)?,
            Cond::NotIn(e, es) => {
                let v = ev(e)?;
                for x in es {
                    if ev(x)? == v {
                        return Some(false);
                    }
                }
                true
            }
            Cond::In(e, lits) => {
                let v = ev(e)? as i64;
                lits.contains(&v)
            }
            Cond::OddDiff(a, b) => (ev(a)? as i64 - ev(b)? as i64).rem_euclid(2) == 1,
            Cond::EvenDiff(a, b) => (ev(a)? as i64 - ev(b)? as i64).rem_euclid(2) == 0,
            Cond::SomeEq(qs) => {
                let mut any = false;
                for (e, lit) in qs {
                    if ev(e)? as i64 == *lit {
                        any = true;
                    }
                }
                any
            }
            Cond::CardLe3(es) => {
                let mut vals = Vec::new();
                for e in es {
                    vals.push(ev(e)?);
                }
                vals.sort_unstable();
                vals.dedup();
                vals.len() <= 3
            }
            Cond::GrayForm36(es) => {
                let mut idx = [0usize; 4];
                for (i, e) in es.iter().enumerate() {
                    idx[i] = ev(e)?;
                }
                gray_block_form(idx, dim) == Some(true)
            }
            Cond::GrayForm37(es) => {
                let mut idx = [0usize; 4];
                for (i, e) in es.iter().enumerate() {
                    idx[i] = ev(e)?;
                }
                gray_block_form(idx, dim) == Some(false)
            }
            Cond::NotGrayForm(es) => {
                let mut idx = [0usize; 4];
                for (i, e) in es.iter().enumerate() {
                    idx[i] = ev(e)?;
                }
                gray_block_form(idx, dim).is_none()
            }
        })
    }

    fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            Cond::Distinct(es) => {
                for e in es {
                    e.vars_into(out);
                }
            }
            Cond::NotIn(e, es) => {
                e.vars_into(out);
                for x in es {
                    x.vars_into(out);
                }
            }
            Cond::Ne(a, b) | Cond::Lt(a, b) | Cond::Le(a, b) | Cond::OddDiff(a, b)
            | Cond::EvenDiff(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Cond::In(e, _) => e.vars_into(out),
            Cond::SomeEq(qs) => {
                for (e, _) in qs {
                    e.vars_into(out);
                }
            }
            Cond::CardLe3(es) | Cond::GrayForm36(es) | Cond::GrayForm37(es)
            | Cond::NotGrayForm(es) => {
                for e in es {
                    e.vars_into(out);
                }
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(es: &[IdxExpr]) -> String {
            es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
        }
        match self {
            Cond::Distinct(es) => write!(f, "distinct {}", join(es)),
            Cond::Ne(a, b) => write!(f, "ne {a} {b}"),
            Cond::Lt(a, b) => write!(f, "lt {a} {b}"),
            Cond::Le(a, b) => write!(f, "le {a} {b}"),
            Cond::NotIn(e, es) => write!(f, "notin {e} {}", join(es)),
            Cond::In(e, lits) => write!(
                f,
                "in {e} {}",
                lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
            ),
            Cond::OddDiff(a, b) => write!(f, "odd {a} {b}"),
            Cond::EvenDiff(a, b) => write!(f, "even {a} {b}"),
            Cond::SomeEq(qs) => {
                let parts: Vec<String> = qs.iter().map(|(e, l)| format!("{e}={l}")).collect();
                write!(f, "someeq {}", parts.join(" "))
            }
            Cond::CardLe3(es) => write!(f, "cardle3 {}", join(es)),
            Cond::GrayForm36(es) => write!(f, "grayform36 {}", join(es)),
            Cond::GrayForm37(es) => write!(f, "grayform37 {}", join(es)),
            Cond::NotGrayForm(es) => write!(f, "notgrayform {}", join(es)),
        }
    }
}

/// Derived index bindings computed after the free assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LetBinding {
    /// e < f, the two smallest indices outside the given four.
    MinPair2 { e: String, f: String, excl: [IdxExpr; 4] },
}

impl LetBinding {
    fn apply(&self, asn: &mut BTreeMap<String, usize>, dim: usize) -> Option<()> {
        match self {
            LetBinding::MinPair2 { e, f, excl } => {
                let mut used = Vec::new();
                for x in excl {
                    used.push(x.eval(asn, dim)?);
                }
                let mut free = (0..dim).filter(|v| !used.contains(v));
                let ev = free.next()?;
                let fv = free.next()?;
                asn.insert(e.clone(), ev);
                asn.insert(f.clone(), fv);
                Some(())
            }
        }
    }
}

/// A parameterized word equation with side conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub min_dim: usize,
    pub conds: Vec<Cond>,
    pub lets: Vec<LetBinding>,
    pub lhs: Pattern,
    pub rhs: Pattern,
}

impl Schema {
    /// Free index variables (those not bound by a `let`), sorted.
    pub fn free_vars(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.lhs.vars_into(&mut vars);
        self.rhs.vars_into(&mut vars);
        for c in &self.conds {
            c.vars_into(&mut vars);
        }
        let bound: Vec<&String> = self
            .lets
            .iter()
            .flat_map(|l| match l {
                LetBinding::MinPair2 { e, f, .. } => vec![e, f],
            })
            .collect();
        vars.retain(|v| !bound.contains(&v));
        vars.sort();
        vars.dedup();
        vars
    }

    /// Evaluate one assignment: Some((lhs, rhs)) when all conditions hold
    /// and both sides materialize.
    pub fn instance(
        &self,
        asn: &BTreeMap<String, usize>,
        dim: usize,
    ) -> Option<(Word, Word)> {
        let mut asn = asn.clone();
        for l in &self.lets {
            l.apply(&mut asn, dim)?;
        }
        for c in &self.conds {
            if !c.holds(&asn, dim)? {
                return None;
            }
        }
        let lhs = self.lhs.materialize(&asn, dim)?;
        let rhs = self.rhs.materialize(&asn, dim)?;
        Some((lhs, rhs))
    }
}

/// A named list of schemas plus entries skipped as unreadable in the
/// source material.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub id: String,
    pub schemas: Vec<Schema>,
    pub skipped: Vec<(String, String)>,
}

// ---------------------------------------------------------------------------
// file format

pub fn parse_catalog(id: &str, text: &str) -> Result<Catalog, AxiomError> {
    let perr = |ln: usize, msg: String| AxiomError::Parse { line: ln + 1, msg };
    let mut schemas = Vec::new();
    let mut skipped = Vec::new();
    let mut current: Option<Schema> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "schema" => {
                if current.is_some() {
                    return Err(perr(ln, "nested schema".into()));
                }
                current = Some(Schema {
                    name: rest.to_string(),
                    min_dim: 2,
                    conds: Vec::new(),
                    lets: Vec::new(),
                    lhs: Pattern::Gens(Vec::new()),
                    rhs: Pattern::Gens(Vec::new()),
                });
            }
            "skip" => {
                let (name, why) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                skipped.push((name.to_string(), why.trim().to_string()));
            }
            "mindim" => {
                let s = current.as_mut().ok_or_else(|| perr(ln, "mindim outside schema".into()))?;
                s.min_dim = rest.parse().map_err(|_| perr(ln, "bad mindim".into()))?;
            }
            "cond" => {
                let s = current.as_mut().ok_or_else(|| perr(ln, "cond outside schema".into()))?;
                s.conds.push(parse_cond(rest).map_err(|m| perr(ln, m))?);
            }
            "let" => {
                let s = current.as_mut().ok_or_else(|| perr(ln, "let outside schema".into()))?;
                s.lets.push(parse_let(rest).map_err(|m| perr(ln, m))?);
            }
            "lhs" | "rhs" => {
                let s = current.as_mut().ok_or_else(|| perr(ln, "side outside schema".into()))?;
                let p = parse_pattern(rest).map_err(|m| perr(ln, m))?;
                if kw == "lhs" {
                    s.lhs = p;
                } else {
                    s.rhs = p;
                }
            }
            "end" => {
                let s = current.take().ok_or_else(|| perr(ln, "end outside schema".into()))?;
                schemas.push(s);
            }
            other => return Err(perr(ln, format!("unknown keyword `{other}`"))),
        }
    }
    if current.is_some() {
        return Err(AxiomError::Parse { line: 0, msg: "unterminated schema".into() });
    }
    // schema names must be unique within a catalog
    let mut names: Vec<&str> = schemas.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() != schemas.len() {
        return Err(AxiomError::Parse { line: 0, msg: "duplicate schema name".into() });
    }
    Ok(Catalog { id: id.to_string(), schemas, skipped })
}

fn parse_cond(s: &str) -> Result<Cond, String> {
    let mut toks = s.split_whitespace();
    let kw = toks.next().ok_or("empty condition")?;
    let exprs = |toks: std::str::SplitWhitespace| -> Result<Vec<IdxExpr>, String> {
        toks.map(IdxExpr::parse).collect()
    };
    let four = |es: Vec<IdxExpr>| -> Result<[IdxExpr; 4], String> {
        es.try_into().map_err(|_| "expected four indices".to_string())
    };
    match kw {
        "distinct" => Ok(Cond::Distinct(exprs(toks)?)),
        "ne" | "lt" | "le" | "odd" | "even" => {
            let es = exprs(toks)?;
            if es.len() != 2 {
                return Err(format!("{kw} expects two indices"));
            }
            let mut it = es.into_iter();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            Ok(match kw {
                "ne" => Cond::Ne(a, b),
                "lt" => Cond::Lt(a, b),
                "le" => Cond::Le(a, b),
                "odd" => Cond::OddDiff(a, b),
                _ => Cond::EvenDiff(a, b),
            })
        }
        "notin" => {
            let es = exprs(toks)?;
            if es.len() < 2 {
                return Err("notin expects an index and a set".into());
            }
            let mut it = es.into_iter();
            let e = it.next().unwrap();
            Ok(Cond::NotIn(e, it.collect()))
        }
        "in" => {
            let e = IdxExpr::parse(toks.next().ok_or("in expects an index")?)?;
            let lits: Result<Vec<i64>, _> = toks.map(|t| t.parse::<i64>()).collect();
            Ok(Cond::In(e, lits.map_err(|_| "bad literal in `in`")?))
        }
        "someeq" => {
            let mut qs = Vec::new();
            for t in toks {
                let (e, lit) = t.split_once('=').ok_or("someeq expects expr=lit tokens")?;
                qs.push((IdxExpr::parse(e)?, lit.parse().map_err(|_| "bad literal")?));
            }
            Ok(Cond::SomeEq(qs))
        }
        "cardle3" => Ok(Cond::CardLe3(four(exprs(toks)?)?)),
        "grayform36" => Ok(Cond::GrayForm36(four(exprs(toks)?)?)),
        "grayform37" => Ok(Cond::GrayForm37(four(exprs(toks)?)?)),
        "notgrayform" => Ok(Cond::NotGrayForm(four(exprs(toks)?)?)),
        other => Err(format!("unknown condition `{other}`")),
    }
}

fn parse_let(s: &str) -> Result<LetBinding, String> {
    // `minpair2 $e $f : $a $b $c $d`
    let (head, tail) = s.split_once(':').ok_or("let expects `minpair2 $e $f : indices`")?;
    let mut ht = head.split_whitespace();
    if ht.next() != Some("minpair2") {
        return Err("unknown let form".into());
    }
    let name = |t: Option<&str>| -> Result<String, String> {
        let t = t.ok_or("missing let variable")?;
        t.strip_prefix('$').map(String::from).ok_or_else(|| "let variable must be $name".into())
    };
    let e = name(ht.next())?;
    let f = name(ht.next())?;
    let excl: Result<Vec<IdxExpr>, String> =
        tail.split_whitespace().map(IdxExpr::parse).collect();
    let excl = excl?;
    let excl: [IdxExpr; 4] = excl.try_into().map_err(|_| "expected four excluded indices")?;
    Ok(LetBinding::MinPair2 { e, f, excl })
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('!') {
        let mut toks = rest.split_whitespace();
        let kind = toks.next().ok_or("empty builtin")?;
        let es: Result<Vec<IdxExpr>, String> = toks.map(IdxExpr::parse).collect();
        let es = es?;
        let es: [IdxExpr; 4] = es.try_into().map_err(|_| "builtin expects four indices")?;
        return match kind {
            "sigma_conj" => Ok(Pattern::SigmaConj(es)),
            "whh" => Ok(Pattern::WWord(es)),
            other => Err(format!("unknown builtin `{other}`")),
        };
    }
    // generator tokens, with optional pair parentheses (cosmetic)
    let mut pats = Vec::new();
    for tok in s.split_whitespace() {
        let tok = tok.trim_start_matches('(').trim_end_matches(')');
        if tok.is_empty() {
            continue;
        }
        let (kind, rest) = tok.split_at(1);
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| format!("malformed generator pattern `{tok}`"))?;
        let p = match kind {
            "Z" => PatGen::Neg(IdxExpr::parse(inner)?),
            "X" | "H" => {
                let (a, b) =
                    inner.split_once(',').ok_or_else(|| format!("expected two indices in `{tok}`"))?;
                let (a, b) = (IdxExpr::parse(a)?, IdxExpr::parse(b)?);
                if kind == "X" {
                    PatGen::X(a, b)
                } else {
                    PatGen::H(a, b)
                }
            }
            other => return Err(format!("unknown generator kind `{other}`")),
        };
        pats.push(p);
    }
    Ok(Pattern::Gens(pats))
}

pub fn render_schema(s: &Schema, paired: bool) -> String {
    let mut out = format!("schema {}\nmindim {}\n", s.name, s.min_dim);
    for c in &s.conds {
        out.push_str(&format!("cond {c}\n"));
    }
    for l in &s.lets {
        match l {
            LetBinding::MinPair2 { e, f, excl } => {
                let ex: Vec<String> = excl.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("let minpair2 ${e} ${f} : {}\n", ex.join(" ")));
            }
        }
    }
    for (label, side) in [("lhs", &s.lhs), ("rhs", &s.rhs)] {
        match side {
            Pattern::Gens(pats) => {
                let toks: Vec<String> = if paired && pats.len() % 2 == 0 {
                    pats.chunks(2).map(|c| format!("({} {})", c[0], c[1])).collect()
                } else {
                    pats.iter().map(|p| p.to_string()).collect()
                };
                out.push_str(&format!("{label} {}\n", toks.join(" ")));
            }
            Pattern::SigmaConj(es) => {
                let toks: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                out.push_str(&format!("{label} ! sigma_conj {}\n", toks.join(" ")));
            }
            Pattern::WWord(es) => {
                let toks: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                out.push_str(&format!("{label} ! whh {}\n", toks.join(" ")));
            }
        }
    }
    out.push_str("end\n");
    out
}

/// Structural equality of two schemas up to renaming of index variables.
/// Variables are canonicalized in order of first appearance across the
/// two sides, and the condition sets are compared order-insensitively.
pub fn schema_alpha_eq(a: &Schema, b: &Schema) -> bool {
    fn canon(s: &Schema) -> Option<(String, Vec<String>)> {
        // first-appearance renaming over lhs then rhs
        let mut order = Vec::new();
        s.lhs.vars_into(&mut order);
        s.rhs.vars_into(&mut order);
        let rename: BTreeMap<&str, String> = order
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), format!("v{i}")))
            .collect();
        fn rn_expr(e: &IdxExpr, m: &BTreeMap<&str, String>) -> Option<IdxExpr> {
            Some(match e {
                IdxExpr::Lit(v) => IdxExpr::Lit(*v),
                IdxExpr::Var(x) => IdxExpr::Var(m.get(x.as_str())?.clone()),
                IdxExpr::Add(a, b) => {
                    IdxExpr::Add(Box::new(rn_expr(a, m)?), Box::new(rn_expr(b, m)?))
                }
                IdxExpr::Sub(a, b) => {
                    IdxExpr::Sub(Box::new(rn_expr(a, m)?), Box::new(rn_expr(b, m)?))
                }
                IdxExpr::Mul(a, b) => {
                    IdxExpr::Mul(Box::new(rn_expr(a, m)?), Box::new(rn_expr(b, m)?))
                }
            })
        }
        fn rn_pattern(p: &Pattern, m: &BTreeMap<&str, String>) -> Option<String> {
            match p {
                Pattern::Gens(pats) => {
                    let toks: Option<Vec<String>> = pats
                        .iter()
                        .map(|p| {
                            Some(match p {
                                PatGen::Neg(a) => format!("Z[{}]", rn_expr(a, m)?),
                                PatGen::X(a, b) => {
                                    format!("X[{},{}]", rn_expr(a, m)?, rn_expr(b, m)?)
                                }
                                PatGen::H(a, b) => {
                                    format!("H[{},{}]", rn_expr(a, m)?, rn_expr(b, m)?)
                                }
                            })
                        })
                        .collect();
                    Some(toks?.join(" "))
                }
                _ => None,
            }
        }
        let sides = format!("{} ~ {}", rn_pattern(&s.lhs, &rename)?, rn_pattern(&s.rhs, &rename)?);
        let mut conds = Vec::new();
        for c in &s.conds {
            // canonicalize symmetric conditions
            let rendered = match c {
                Cond::Ne(a, b) => {
                    let (x, y) = (rn_expr(a, &rename)?, rn_expr(b, &rename)?);
                    let (x, y) = (x.to_string(), y.to_string());
                    if x <= y {
                        format!("ne {x} {y}")
                    } else {
                        format!("ne {y} {x}")
                    }
                }
                Cond::Distinct(es) => {
                    // pairwise distinctness, flattened to sorted ne pairs
                    let vs: Option<Vec<String>> =
                        es.iter().map(|e| Some(rn_expr(e, &rename)?.to_string())).collect();
                    let vs = vs?;
                    let mut pairs = Vec::new();
                    for i in 0..vs.len() {
                        for j in 0..i {
                            let (x, y) = if vs[j] <= vs[i] {
                                (&vs[j], &vs[i])
                            } else {
                                (&vs[i], &vs[j])
                            };
                            pairs.push(format!("ne {x} {y}"));
                        }
                    }
                    conds.extend(pairs);
                    continue;
                }
                Cond::SomeEq(qs) => {
                    let mut items: Vec<String> = qs
                        .iter()
                        .map(|(e, l)| Some(format!("{}={l}", rn_expr(e, &rename)?)))
                        .collect::<Option<_>>()?;
                    items.sort();
                    format!("someeq {}", items.join(" "))
                }
                Cond::NotIn(e, es) => {
                    // expand to ne conditions
                    let v = rn_expr(e, &rename)?.to_string();
                    for x in es {
                        let y = rn_expr(x, &rename)?.to_string();
                        let (p, q) = if v <= y { (&v, &y) } else { (&y, &v) };
                        conds.push(format!("ne {p} {q}"));
                    }
                    continue;
                }
                Cond::In(e, lits) => {
                    let mut lits = lits.clone();
                    lits.sort_unstable();
                    format!(
                        "in {} {}",
                        rn_expr(e, &rename)?,
                        lits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
                    )
                }
                other => {
                    let mut c2 = other.clone();
                    rename_cond(&mut c2, &rename)?;
                    c2.to_string()
                }
            };
            conds.push(rendered);
        }
        conds.sort();
        conds.dedup();
        Some((sides, conds))
    }
    fn rename_cond(c: &mut Cond, m: &BTreeMap<&str, String>) -> Option<()> {
        fn rn(e: &mut IdxExpr, m: &BTreeMap<&str, String>) -> Option<()> {
            match e {
                IdxExpr::Lit(_) => {}
                IdxExpr::Var(x) => *x = m.get(x.as_str())?.clone(),
                IdxExpr::Add(a, b) | IdxExpr::Sub(a, b) | IdxExpr::Mul(a, b) => {
                    rn(a, m)?;
                    rn(b, m)?;
                }
            }
            Some(())
        }
        match c {
            Cond::Distinct(es) | Cond::NotIn(_, es) => {
                for e in es {
                    rn(e, m)?;
                }
                if let Cond::NotIn(e, _) = c {
                    rn(e, m)?;
                }
            }
            Cond::Ne(a, b) | Cond::Lt(a, b) | Cond::Le(a, b) | Cond::OddDiff(a, b)
            | Cond::EvenDiff(a, b) => {
                rn(a, m)?;
                rn(b, m)?;
            }
            Cond::In(e, _) => rn(e, m)?,
            Cond::SomeEq(qs) => {
                for (e, _) in qs {
                    rn(e, m)?;
                }
            }
            Cond::CardLe3(es) | Cond::GrayForm36(es) | Cond::GrayForm37(es)
            | Cond::NotGrayForm(es) => {
                for e in es {
                    rn(e, m)?;
                }
            }
        }
        Some(())
    }
    match (canon(a), canon(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

pub fn render_catalog(c: &Catalog) -> String {
    let mut out = format!("# catalog {}\n", c.id);
    for s in &c.schemas {
        out.push('\n');
        out.push_str(&render_schema(s, true));
    }
    for (name, why) in &c.skipped {
        out.push_str(&format!("\nskip {name} {why}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// instantiation and checking

/// Instantiated assignments for one schema at a dimension.
#[derive(Debug, Clone)]
pub struct Instances {
    /// Exact number of valid assignments, when the raw space was small
    /// enough to enumerate; None when sampling had to estimate.
    pub total: Option<usize>,
    pub sampled: bool,
    pub assignments: Vec<BTreeMap<String, usize>>,
}

/// Raw assignment spaces larger than this are sampled directly instead of
/// enumerated.
const RAW_ENUM_CAP: usize = 4_000_000;

pub fn instantiate(
    schema: &Schema,
    dim: usize,
    budget: usize,
    seed: u64,
) -> Result<Instances, AxiomError> {
    if dim < schema.min_dim {
        return Err(AxiomError::DimensionTooSmall { dim, min: schema.min_dim });
    }
    let vars = schema.free_vars();
    let nv = vars.len();
    let raw_space = (dim as u128).checked_pow(nv as u32).unwrap_or(u128::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if raw_space > RAW_ENUM_CAP as u128 {
        // rejection-sample the assignment space directly
        let mut seen = std::collections::HashSet::new();
        let mut assignments = Vec::new();
        let mut attempts = 0usize;
        while assignments.len() < budget && attempts < budget.saturating_mul(400) {
            attempts += 1;
            let pick: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..dim)).collect();
            let asn: BTreeMap<String, usize> =
                vars.iter().cloned().zip(pick.iter().copied()).collect();
            if schema.instance(&asn, dim).is_some() && seen.insert(pick) {
                assignments.push(asn);
            }
        }
        return Ok(Instances { total: None, sampled: true, assignments });
    }

    // full enumeration with reservoir sampling
    let mut total = 0usize;
    let mut reservoir: Vec<BTreeMap<String, usize>> = Vec::with_capacity(budget.min(4096));
    let mut counters = vec![0usize; nv];
    loop {
        let asn: BTreeMap<String, usize> =
            vars.iter().cloned().zip(counters.iter().copied()).collect();
        if schema.instance(&asn, dim).is_some() {
            total += 1;
            if reservoir.len() < budget {
                reservoir.push(asn);
            } else {
                let j = rng.gen_range(0..total);
                if j < budget {
                    reservoir[j] = asn;
                }
            }
        }
        // advance the odometer
        let mut i = 0;
        loop {
            if i == nv {
                return Ok(Instances {
                    total: Some(total),
                    sampled: total > budget,
                    assignments: reservoir,
                });
            }
            counters[i] += 1;
            if counters[i] < dim {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Exact semantic equality of two words.
pub fn check_sound(lhs: &Word, rhs: &Word) -> bool {
    match (word_semantics(lhs), word_semantics(rhs)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[derive(Debug, Clone)]
pub struct SchemaReport {
    pub name: String,
    pub total: Option<usize>,
    pub sampled: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CatalogReport {
    pub id: String,
    pub dim: usize,
    pub budget: usize,
    pub seed: u64,
    pub schemas: Vec<SchemaReport>,
    pub skipped: Vec<(String, String)>,
}

impl CatalogReport {
    pub fn all_pass(&self) -> bool {
        self.schemas.iter().all(|s| s.failures.is_empty())
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "catalog {} at dim {} (budget {}, seed {})\n",
            self.id, self.dim, self.budget, self.seed
        );
        for s in &self.schemas {
            let total = match s.total {
                Some(t) => t.to_string(),
                None => "?".to_string(),
            };
            let status = if s.failures.is_empty() { "pass" } else { "FAIL" };
            let sampled = if s.sampled { " (sampled)" } else { "" };
            out.push_str(&format!(
                "  {:<16} {}/{} instances checked{} … {}\n",
                s.name, s.checked, total, sampled, status
            ));
            for f in &s.failures {
                out.push_str(&format!("    failing instance: {f}\n"));
            }
        }
        for (name, why) in &self.skipped {
            out.push_str(&format!("  {name:<16} skipped: {why}\n"));
        }
        let verdict = if self.all_pass() { "all schemas pass" } else { "FAILURES FOUND" };
        out.push_str(&format!("  => {verdict}\n"));
        out
    }
}

pub fn check_schema(
    schema: &Schema,
    dim: usize,
    budget: usize,
    seed: u64,
) -> Result<SchemaReport, AxiomError> {
    let inst = instantiate(schema, dim, budget, seed)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for asn in &inst.assignments {
        let (lhs, rhs) = schema
            .instance(asn, dim)
            .expect("instantiate returned a failing assignment");
        checked += 1;
        if !check_sound(&lhs, &rhs) {
            let asn_str: Vec<String> = asn.iter().map(|(k, v)| format!("{k}={v}")).collect();
            failures.push(format!(
                "[{}] lhs={} rhs={}",
                asn_str.join(","),
                crate::words::print_word(&lhs).lines().nth(1).unwrap_or("").trim(),
                crate::words::print_word(&rhs).lines().nth(1).unwrap_or("").trim(),
            ));
        }
    }
    Ok(SchemaReport { name: schema.name.clone(), total: inst.total, sampled: inst.sampled, checked, failures })
}

pub fn check_catalog(
    catalog: &Catalog,
    dim: usize,
    budget: usize,
    seed: u64,
) -> Result<CatalogReport, AxiomError> {
    let mut schemas = Vec::new();
    for s in &catalog.schemas {
        schemas.push(check_schema(s, dim, budget, seed)?);
    }
    Ok(CatalogReport {
        id: catalog.id.clone(),
        dim,
        budget,
        seed,
        schemas,
        skipped: catalog.skipped.clone(),
    })
}
