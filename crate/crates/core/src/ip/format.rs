//! Line-oriented text format for integer programs.
//!
//! ```text
//! ip <n> <m> <max|min>
//! c <r_1> ... <r_n>
//! row <a_1> ... <a_n> <LE|EQ|GE> <rhs>      (m lines)
//! ub <u_1> ... <u_n>
//! offset <r>                                 (optional, only when nonzero)
//! ```
//!
//! Rationals are written `p/q`, or `p` when `q = 1`. Lines starting with `#`
//! and blank lines are ignored.

use std::fmt::Write as _;

use super::{IPInstance, ObjSense};
use crate::arith::{RVector, Rational};
use crate::error::{Error, Result};
use crate::lp::{Constraint, Sense};

pub fn serialize_instance(ip: &IPInstance) -> String {
    let mut s = String::new();
    let sense = match ip.sense() {
        ObjSense::Max => "max",
        ObjSense::Min => "min",
    };
    writeln!(s, "ip {} {} {}", ip.n(), ip.rows().len(), sense).unwrap();
    s.push('c');
    for v in ip.objective().iter() {
        write!(s, " {v}").unwrap();
    }
    s.push('\n');
    for r in ip.rows() {
        s.push_str("row");
        for v in r.coeffs.iter() {
            write!(s, " {v}").unwrap();
        }
        writeln!(s, " {} {}", r.sense, r.rhs).unwrap();
    }
    s.push_str("ub");
    for u in ip.upper() {
        write!(s, " {u}").unwrap();
    }
    s.push('\n');
    if !ip.offset().is_zero() {
        writeln!(s, "offset {}", ip.offset()).unwrap();
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_rationals(line: usize, field: &str, toks: &[&str]) -> Result<Vec<Rational>> {
    toks.iter()
        .enumerate()
        .map(|(i, t)| t.parse::<Rational>().map_err(|_| perr(line, format!("{field}[{}]: bad rational {t:?}", i + 1))))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<IPInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| perr(0, "empty document"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "ip" {
        return Err(perr(ln, "expected header \"ip <n> <m> <max|min>\""));
    }
    let n: usize = h[1].parse().map_err(|_| perr(ln, format!("bad n {:?}", h[1])))?;
    let m: usize = h[2].parse().map_err(|_| perr(ln, format!("bad m {:?}", h[2])))?;
    let sense = match h[3] {
        "max" => ObjSense::Max,
        "min" => ObjSense::Min,
        other => return Err(perr(ln, format!("bad sense {other:?}"))),
    };

    let (ln, cline) = lines.next().ok_or_else(|| perr(ln, "missing objective line"))?;
    let c: Vec<&str> = cline.split_whitespace().collect();
    if c.first() != Some(&"c") {
        return Err(perr(ln, "expected objective line \"c ...\""));
    }
    if c.len() - 1 != n {
        return Err(perr(ln, format!("objective has {} entries, expected {n}", c.len() - 1)));
    }
    let objective = RVector::new(parse_rationals(ln, "c", &c[1..])?);

    let mut rows = Vec::with_capacity(m);
    let mut last = ln;
    for k in 0..m {
        let (ln, rline) = lines.next().ok_or_else(|| perr(last, format!("missing row {}", k + 1)))?;
        last = ln;
        let t: Vec<&str> = rline.split_whitespace().collect();
        if t.first() != Some(&"row") {
            return Err(perr(ln, "expected \"row ...\""));
        }
        if t.len() != n + 3 {
            return Err(perr(ln, format!("row has {} coefficients, expected {n}", t.len().saturating_sub(3))));
        }
        let coeffs = parse_rationals(ln, "row", &t[1..=n])?;
        let sense = match t[n + 1] {
            "LE" => Sense::Le,
            "EQ" => Sense::Eq,
            "GE" => Sense::Ge,
            other => return Err(perr(ln, format!("bad sense {other:?}"))),
        };
        let rhs = t[n + 2].parse::<Rational>().map_err(|_| perr(ln, format!("bad rhs {:?}", t[n + 2])))?;
        rows.push(Constraint::new(RVector::new(coeffs), sense, rhs));
    }

    let (ln, uline) = lines.next().ok_or_else(|| perr(last, "missing \"ub\" line"))?;
    let u: Vec<&str> = uline.split_whitespace().collect();
    if u.first() != Some(&"ub") {
        return Err(perr(ln, "expected \"ub ...\""));
    }
    if u.len() - 1 != n {
        return Err(perr(ln, format!("ub has {} entries, expected {n}", u.len() - 1)));
    }
    let upper = u[1..]
        .iter()
        .enumerate()
        .map(|(i, t)| t.parse::<i64>().map_err(|_| perr(ln, format!("ub[{}]: bad integer {t:?}", i + 1))))
        .collect::<Result<Vec<_>>>()?;

    let mut offset = Rational::zero();
    if let Some((ln, extra)) = lines.next() {
        let t: Vec<&str> = extra.split_whitespace().collect();
        if t.len() != 2 || t[0] != "offset" {
            return Err(perr(ln, "unexpected trailing content"));
        }
        offset = t[1].parse().map_err(|_| perr(ln, format!("bad offset {:?}", t[1])))?;
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "unexpected trailing content"));
        }
    }

    IPInstance::new(sense, objective, rows, upper)
        .map(|ip| ip.with_offset(offset))
        .map_err(|e| perr(ln, e.to_string()))
}
