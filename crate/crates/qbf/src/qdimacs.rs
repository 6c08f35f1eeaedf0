use std::fmt::Write as _;

use thiserror::Error;

use crate::{Qbf, QbfError, Quantifier};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("header announces {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
    #[error("clause {clause} has {len} literals, expected 3")]
    NotThreeLiterals { clause: usize, len: usize },
    #[error(transparent)]
    Formula(#[from] QbfError),
}

/// Parses QDIMACS text restricted to closed 3-CNF matrices.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut prefix = Vec::new();
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| ParseError::Syntax { line, message };
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut toks = l.split_whitespace();
        if l.starts_with('p') {
            if header.is_some() {
                return Err(syntax("second header".into()));
            }
            let fields: Vec<&str> = toks.collect();
            match fields.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n.parse().map_err(|_| syntax(format!("bad variable count `{n}`")))?;
                    let m = m.parse().map_err(|_| syntax(format!("bad clause count `{m}`")))?;
                    header = Some((n, m));
                }
                _ => return Err(syntax("expected `p cnf <vars> <clauses>`".into())),
            }
            continue;
        }
        if header.is_none() {
            return Err(ParseError::MissingHeader);
        }
        let quant = match l.as_bytes()[0] {
            b'e' => Some(Quantifier::Exists),
            b'a' => Some(Quantifier::Forall),
            _ => None,
        };
        if let Some(q) = quant {
            if !clauses.is_empty() || !pending.is_empty() {
                return Err(syntax("quantifier line after clauses".into()));
            }
            toks.next();
            let mut closed = false;
            for t in toks {
                let v: u32 = t.parse().map_err(|_| syntax(format!("bad variable `{t}`")))?;
                if closed {
                    return Err(syntax("tokens after terminating 0".into()));
                }
                if v == 0 {
                    closed = true;
                } else {
                    prefix.push((q, v));
                }
            }
            if !closed {
                return Err(syntax("quantifier line not terminated by 0".into()));
            }
            continue;
        }
        for t in toks {
            let lit: i32 = t.parse().map_err(|_| syntax(format!("bad literal `{t}`")))?;
            if lit == 0 {
                let len = pending.len();
                let c: [i32; 3] = std::mem::take(&mut pending)
                    .try_into()
                    .map_err(|_| ParseError::NotThreeLiterals { clause: clauses.len() + 1, len })?;
                clauses.push(c);
            } else {
                pending.push(lit);
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if !pending.is_empty() {
        return Err(ParseError::NotThreeLiterals { clause: clauses.len() + 1, len: pending.len() });
    }
    if clauses.len() != m {
        return Err(ParseError::ClauseCount { expected: m, found: clauses.len() });
    }
    Ok(Qbf::new(n, prefix, clauses)?)
}

/// Writes `phi` as QDIMACS, merging adjacent equal quantifiers into blocks.
pub fn write_qdimacs(phi: &Qbf) -> String {
    let mut out = format!("p cnf {} {}\n", phi.var_count(), phi.clause_count());
    let mut k = 0;
    let prefix = phi.prefix();
    while k < prefix.len() {
        let q = prefix[k].0;
        out.push(if q == Quantifier::Exists { 'e' } else { 'a' });
        while k < prefix.len() && prefix[k].0 == q {
            write!(out, " {}", prefix[k].1).unwrap();
            k += 1;
        }
        out.push_str(" 0\n");
    }
    for c in phi.clauses() {
        writeln!(out, "{} {} {} 0", c[0], c[1], c[2]).unwrap();
    }
    out
}
