//! Line-oriented `.snc` input files.
//!
//! ```text
//! ring x y z w
//! mode arrangement
//! component X1 = x, y
//! divisor D = 3/2 * [x, z] + 1 * [y, z]
//! boundary E = [w] < [z]
//! point origin = 0 0 0 0
//! ```

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use snc_core::geom::{Boundary, ComponentUnion, Divisor, GeomError, Mode, Triple};
use snc_core::poly::{format_q, PolyError};
use snc_core::{Ideal, Point, Poly, Ring, RingRef, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedDivisor {
    pub name: String,
    pub parts: Vec<(Q, Ideal)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedBoundary {
    pub name: String,
    pub components: Vec<Ideal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncFile {
    pub ring: RingRef,
    pub mode: Mode,
    pub components: Vec<(String, Ideal)>,
    pub divisor: Option<NamedDivisor>,
    pub boundary: Option<NamedBoundary>,
    pub points: Vec<(String, Point)>,
}

struct Cursor {
    line: usize,
}

impl Cursor {
    fn err(&self, offset: usize, msg: impl Into<String>) -> FormatError {
        FormatError { line: self.line, col: offset + 1, msg: msg.into() }
    }
}

/// Splits at `sep` outside brackets and parentheses, keeping byte offsets.
fn split_top(s: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((base + start, &s[start..i]));
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push((base + start, &s[start..]));
    out
}

fn trim_at(offset: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (offset + lead, s.trim())
}

fn poly_err(cur: &Cursor, offset: usize, e: PolyError) -> FormatError {
    match e {
        PolyError::UnknownVariable { name, pos } => cur.err(offset + pos, format!("unknown variable `{name}`")),
        PolyError::Syntax { pos, msg } => cur.err(offset + pos, msg),
        PolyError::NegativeExponent { pos } => cur.err(offset + pos, "negative exponent"),
        other => cur.err(offset, other.to_string()),
    }
}

fn parse_ideal(cur: &Cursor, ring: &RingRef, offset: usize, s: &str) -> Result<Ideal, FormatError> {
    let mut gens = Vec::new();
    for (o, piece) in split_top(s, offset, ',') {
        let (o, piece) = trim_at(o, piece);
        if piece.is_empty() {
            return Err(cur.err(o, "empty polynomial"));
        }
        gens.push(Poly::parse(ring, piece).map_err(|e| poly_err(cur, o, e))?);
    }
    Ok(Ideal::new(ring, gens))
}

fn parse_q(cur: &Cursor, offset: usize, s: &str) -> Result<Q, FormatError> {
    let bad = || cur.err(offset, format!("`{s}` is not a rational number"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(cur.err(offset, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

fn bracketed<'a>(cur: &Cursor, offset: usize, s: &'a str) -> Result<(usize, &'a str), FormatError> {
    let (o, t) = trim_at(offset, s);
    if !(t.starts_with('[') && t.ends_with(']')) || t.len() < 2 {
        return Err(cur.err(o, "expected `[ ... ]`"));
    }
    Ok((o + 1, &t[1..t.len() - 1]))
}

/// `NAME = rest`, returning the name and the offset and text of `rest`.
fn named<'a>(cur: &Cursor, offset: usize, s: &'a str) -> Result<(String, usize, &'a str), FormatError> {
    let Some(eq) = s.find('=') else {
        return Err(cur.err(offset, "expected `NAME = ...`"));
    };
    let name = s[..eq].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        return Err(cur.err(offset, format!("invalid name `{name}`")));
    }
    Ok((name.to_string(), offset + eq + 1, &s[eq + 1..]))
}

impl SncFile {
    pub fn parse(text: &str) -> Result<SncFile, FormatError> {
        let mut ring: Option<RingRef> = None;
        let mut mode = Mode::General;
        let mut components: Vec<(String, Ideal)> = Vec::new();
        let mut divisor = None;
        let mut boundary = None;
        let mut points: Vec<(String, Point)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let cur = Cursor { line: idx + 1 };
            let content = raw.split('#').next().unwrap_or("");
            let (start, body) = trim_at(0, content);
            if body.is_empty() {
                continue;
            }
            let kw_end = body.find(char::is_whitespace).unwrap_or(body.len());
            let (kw, rest) = body.split_at(kw_end);
            let rest_off = start + kw_end;
            if kw != "ring" && kw != "mode" && ring.is_none() {
                return Err(cur.err(start, "`ring` must come first"));
            }
            match kw {
                "ring" => {
                    if ring.is_some() {
                        return Err(cur.err(start, "ring declared twice"));
                    }
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    ring = Some(Ring::new(&names).map_err(|e| cur.err(rest_off, e.to_string()))?);
                }
                "mode" => {
                    mode = match rest.trim() {
                        "arrangement" => Mode::Arrangement,
                        "general" => Mode::General,
                        other => return Err(cur.err(rest_off, format!("unknown mode `{other}`"))),
                    }
                }
                "component" => {
                    let (name, o, rhs) = named(&cur, rest_off, rest)?;
                    if components.iter().any(|(n, _)| *n == name) {
                        return Err(cur.err(rest_off, format!("component `{name}` declared twice")));
                    }
                    let r = ring.as_ref().expect("checked above");
                    components.push((name, parse_ideal(&cur, r, o, rhs)?));
                }
                "divisor" => {
                    if divisor.is_some() {
                        return Err(cur.err(start, "divisor declared twice"));
                    }
                    let (name, o, rhs) = named(&cur, rest_off, rest)?;
                    let r = ring.as_ref().expect("checked above");
                    let mut parts = Vec::new();
                    for (to, term) in split_top(rhs, o, '+') {
                        let (to, term) = trim_at(to, term);
                        let (coef, list) = match term.find('[') {
                            Some(b) if term[..b].trim().is_empty() => (Q::from_integer(1.into()), (to, term)),
                            Some(b) => {
                                let head = term[..b].trim_end();
                                let Some(c) = head.strip_suffix('*') else {
                                    return Err(cur.err(to, "expected `c * [ ... ]`"));
                                };
                                (parse_q(&cur, to, c.trim())?, (to + b, &term[b..]))
                            }
                            None => return Err(cur.err(to, "expected `c * [ ... ]`")),
                        };
                        if coef <= Q::from_integer(0.into()) {
                            return Err(cur.err(to, "coefficients must be positive"));
                        }
                        let (lo, inner) = bracketed(&cur, list.0, list.1)?;
                        parts.push((coef, parse_ideal(&cur, r, lo, inner)?));
                    }
                    divisor = Some(NamedDivisor { name, parts });
                }
                "boundary" => {
                    if boundary.is_some() {
                        return Err(cur.err(start, "boundary declared twice"));
                    }
                    let (name, o, rhs) = named(&cur, rest_off, rest)?;
                    let r = ring.as_ref().expect("checked above");
                    let mut comps = Vec::new();
                    if !rhs.trim().is_empty() {
                        for (to, term) in split_top(rhs, o, '<') {
                            let (lo, inner) = bracketed(&cur, to, term)?;
                            comps.push(parse_ideal(&cur, r, lo, inner)?);
                        }
                    }
                    boundary = Some(NamedBoundary { name, components: comps });
                }
                "point" => {
                    let (name, o, rhs) = named(&cur, rest_off, rest)?;
                    let r = ring.as_ref().expect("checked above");
                    let mut coords = Vec::new();
                    let mut pos = o;
                    for tok in rhs.split_whitespace() {
                        let at = pos + rhs[pos - o..].find(tok).unwrap_or(0);
                        coords.push(parse_q(&cur, at, tok)?);
                        pos = at + tok.len();
                    }
                    if coords.len() != r.nvars() {
                        return Err(cur.err(o, format!("point has {} coordinates, ring has {}", coords.len(), r.nvars())));
                    }
                    if points.iter().any(|(n, _)| *n == name) {
                        return Err(cur.err(rest_off, format!("point `{name}` declared twice")));
                    }
                    points.push((name, coords));
                }
                other => return Err(cur.err(start, format!("unknown keyword `{other}`"))),
            }
        }
        let ring = ring.ok_or(FormatError { line: 1, col: 1, msg: "missing `ring` line".into() })?;
        if components.is_empty() {
            return Err(FormatError { line: 1, col: 1, msg: "no components".into() });
        }
        Ok(SncFile { ring, mode, components, divisor, boundary, points })
    }

    pub fn point(&self, name: &str) -> Option<&Point> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn component_union(&self) -> Result<ComponentUnion, GeomError> {
        ComponentUnion::new(&self.ring, self.components.iter().map(|(_, i)| i.clone()).collect())
    }

    pub fn triple(&self) -> Result<Triple, GeomError> {
        let x = self.component_union()?;
        let d = match &self.divisor {
            Some(nd) => Divisor::new(&x, nd.parts.clone())?,
            None => Divisor::default(),
        };
        let e = Boundary::new(self.boundary.as_ref().map(|b| b.components.clone()).unwrap_or_default());
        Triple::new(x, d, e, self.mode)
    }

    /// Ideal named in the file: a component, the divisor (its support), the
    /// boundary (its union) or `X` for the union of the components.
    pub fn named_ideal(&self, name: &str) -> Option<Ideal> {
        if let Some((_, i)) = self.components.iter().find(|(n, _)| n == name) {
            return Some(i.clone());
        }
        if let Some(d) = self.divisor.as_ref().filter(|d| d.name == name) {
            let parts: Vec<Ideal> = d.parts.iter().map(|(_, i)| i.clone()).collect();
            return Some(Ideal::intersect_all(&self.ring, &parts));
        }
        if let Some(b) = self.boundary.as_ref().filter(|b| b.name == name) {
            return Some(Ideal::intersect_all(&self.ring, &b.components));
        }
        if name == "X" {
            let comps: Vec<Ideal> = self.components.iter().map(|(_, i)| i.clone()).collect();
            return Some(Ideal::intersect_all(&self.ring, &comps));
        }
        None
    }

    /// File for a transformed triple, keeping names where they survive.
    pub fn from_triple(t: &Triple, like: &SncFile, component_map: Option<&[Option<usize>]>) -> SncFile {
        let components = t
            .x
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let name = component_map
                    .and_then(|m| m.iter().position(|&k| k == Some(i)))
                    .and_then(|old| like.components.get(old).map(|(n, _)| n.clone()))
                    .unwrap_or_else(|| format!("X{}", i + 1));
                (name, c.clone())
            })
            .collect();
        let divisor = (!t.d.parts.is_empty()).then(|| NamedDivisor {
            name: like.divisor.as_ref().map_or("D".into(), |d| d.name.clone()),
            parts: t.d.parts.iter().map(|p| (p.coefficient.clone(), p.ideal.clone())).collect(),
        });
        let boundary = (!t.e.is_empty()).then(|| NamedBoundary {
            name: like.boundary.as_ref().map_or("E".into(), |b| b.name.clone()),
            components: t.e.components.iter().map(|h| h.ideal.clone()).collect(),
        });
        SncFile { ring: t.ring().clone(), mode: t.mode, components, divisor, boundary, points: Vec::new() }
    }
}

pub fn ideal_text(i: &Ideal) -> String {
    let gens: Vec<String> = i.generators().iter().map(|g| g.to_string()).collect();
    gens.join(", ")
}

pub fn point_text(p: &[Q]) -> Vec<String> {
    p.iter().map(format_q).collect()
}

impl fmt::Display for SncFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "ring {}", self.ring.names().join(" "))?;
        writeln!(s, "mode {}", if self.mode == Mode::Arrangement { "arrangement" } else { "general" })?;
        for (n, i) in &self.components {
            writeln!(s, "component {n} = {}", ideal_text(i))?;
        }
        if let Some(d) = &self.divisor {
            let terms: Vec<String> = d.parts.iter().map(|(c, i)| format!("{} * [{}]", format_q(c), ideal_text(i))).collect();
            writeln!(s, "divisor {} = {}", d.name, terms.join(" + "))?;
        }
        if let Some(b) = &self.boundary {
            let terms: Vec<String> = b.components.iter().map(|i| format!("[{}]", ideal_text(i))).collect();
            writeln!(s, "boundary {} = {}", b.name, terms.join(" < "))?;
        }
        for (n, p) in &self.points {
            writeln!(s, "point {n} = {}", point_text(p).join(" "))?;
        }
        f.write_str(&s)
    }
}
