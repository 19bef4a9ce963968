//! JSON dumps of leg operators and of elements of the projection algebra.
//!
//! Elements are written in a small expression language. An expression is a sum
//! of terms, each term an optional rational coefficient followed by factors
//! separated by whitespace or `*`. A factor is one of `p`, `dp`, `dbp` (the
//! generators of the calculus) or `f`, `v`, `df`, `dv` (letters of the
//! overcalculus), optionally followed by explicit 1-based indices in brackets,
//! as in `p[1,2]` or `f[2]`. Factors without indices are families whose free
//! indices are concatenated from left to right.
//!
//! Example: `p dp - 2 * dp p` or `v[1] f[1] + v[2] f[2]`.

use crate::algebra::{AlgebraError, Kind, Model};
use crate::calculus::{Calculus, Sym};
use crate::expr::Expr;
use crate::leg::{decode, LegError, LegOp};
use crate::scalar::{parse_rational, Coeff};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("cannot parse expression: {0}")]
    Parse(String),
    #[error(transparent)]
    Leg(#[from] LegError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Scalar in `num/den` form, with an explicit denominator `1` for integral values.
pub fn scalar_string<F: Coeff>(c: &F) -> String {
    let s = c.to_string();
    if s.contains('/') {
        s
    } else if s.contains(['+', '-']) && s.trim_start_matches('-').contains(['+', '-']) {
        format!("({s})/1")
    } else {
        format!("{s}/1")
    }
}

#[derive(Serialize)]
pub struct OperatorDump {
    pub signature_in: Vec<&'static str>,
    pub signature_out: Vec<&'static str>,
    pub entries: Vec<(Vec<usize>, Vec<usize>, String)>,
}

/// Every nonzero matrix entry of an operator, with 1-based multi-indices.
pub fn operator<F: Coeff>(op: &LegOp<F>) -> OperatorDump {
    let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
    let mut entries: Vec<_> =
        op.entries().into_iter().map(|(inp, out, c)| (one_based(inp), one_based(out), scalar_string(&c))).collect();
    entries.sort();
    OperatorDump {
        signature_in: op.sig_in().iter().map(|s| s.name()).collect(),
        signature_out: op.sig_out().iter().map(|s| s.name()).collect(),
        entries,
    }
}

#[derive(Serialize)]
pub struct WordGroup {
    pub types: Vec<&'static str>,
    pub coeffs: Vec<(Vec<usize>, String)>,
}

#[derive(Serialize)]
pub struct ElementDump {
    pub words: Vec<WordGroup>,
}

enum Factor {
    Calc(Sym),
    Letter(Kind),
}

fn parse_factor(tok: &str, n: usize) -> Result<(Factor, Option<Vec<usize>>), DumpError> {
    let err = || DumpError::Parse(format!("bad factor `{tok}`"));
    let (name, idx) = match tok.split_once('[') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(']').ok_or_else(err)?;
            let idx = inner
                .split(',')
                .map(|s| {
                    s.trim().parse::<usize>().ok().filter(|&i| (1..=n).contains(&i)).map(|i| i - 1).ok_or_else(err)
                })
                .collect::<Result<Vec<_>, _>>()?;
            (name, Some(idx))
        }
        None => (tok, None),
    };
    let factor = match name {
        "p" => Factor::Calc(Sym::P),
        "dp" => Factor::Calc(Sym::Dp),
        "dbp" => Factor::Calc(Sym::Dbp),
        "f" => Factor::Letter(Kind::F),
        "v" => Factor::Letter(Kind::V),
        "df" => Factor::Letter(Kind::DF),
        "dv" => Factor::Letter(Kind::DV),
        _ => return Err(err()),
    };
    let arity = match factor {
        Factor::Calc(_) => 2,
        Factor::Letter(_) => 1,
    };
    if idx.as_ref().is_some_and(|i| i.len() != arity) {
        return Err(err());
    }
    Ok((factor, idx))
}

/// Splits an expression into signed terms.
fn terms(src: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0;
    for ch in src.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.trim().is_empty() {
                out.push((negative, std::mem::take(&mut cur)));
            }
            cur.clear();
            negative = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    out.push((negative, cur));
    out
}

/// Parses an expression into a family of overcalculus elements.
pub fn parse<F: Coeff>(src: &str, calc: &Calculus<F>) -> Result<Expr<F>, DumpError> {
    let n = calc.n;
    let model = &calc.model;
    let mut total: Option<Expr<F>> = None;
    for (negative, body) in terms(src) {
        let mut coeff = if negative { F::one().neg() } else { F::one() };
        let mut term = Expr::constant(n, F::one());
        let toks: Vec<&str> = body.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()).collect();
        if toks.is_empty() {
            return Err(DumpError::Parse(format!("empty term in `{src}`")));
        }
        for tok in toks {
            if let Some(c) = parse_rational(tok) {
                coeff = coeff.mul(&F::from_rational(&c));
                continue;
            }
            let (factor, idx) = parse_factor(tok, n)?;
            let family = match factor {
                Factor::Calc(k) => calc.map_expr(&calc.family(k), |e| calc.to_gamma(e)),
                Factor::Letter(k) => Expr::family(n, vec![k.slot()], |x| vec![model.letter(k, x[0])]),
            };
            let factor = match idx {
                Some(i) => {
                    let mut e = Expr::zero(n, Vec::new());
                    let c = family.component(&i);
                    if !c.is_empty() {
                        e.comps.insert(0, c);
                    }
                    e
                }
                None => family,
            };
            term = term.mul(&factor);
        }
        let term = term.scale(&coeff);
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term)?,
        });
    }
    total.ok_or_else(|| DumpError::Parse("empty expression".into()))
}

/// Normal form of every component, grouped by letter types.
///
/// A coefficient's multi-index lists the free indices of the expression
/// followed by the indices of the word's letters, all 1-based.
pub fn element<F: Coeff>(x: &Expr<F>, model: &Model<F>) -> Result<ElementDump, DumpError> {
    let mut groups: BTreeMap<Vec<Kind>, Vec<(Vec<usize>, String)>> = BTreeMap::new();
    for (&key, e) in &x.comps {
        let free = decode(x.n, x.sig.len(), key as usize);
        for (w, c) in model.nf(e)? {
            let types = w.iter().map(|&l| model.kind(l)).collect();
            let idx = free.iter().copied().chain(w.iter().map(|&l| model.index(l))).map(|i| i + 1).collect();
            groups.entry(types).or_default().push((idx, scalar_string(&c)));
        }
    }
    let words = groups
        .into_iter()
        .map(|(types, mut coeffs)| {
            coeffs.sort();
            WordGroup { types: types.into_iter().map(Kind::name).collect(), coeffs }
        })
        .collect();
    Ok(ElementDump { words })
}
