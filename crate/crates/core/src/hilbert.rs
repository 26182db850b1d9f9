//! Diagrams of initial exponents and point-local Hilbert–Samuel functions.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::groebner::{truncated_leading_monomials, Terms};
use crate::ideal::Ideal;
use crate::linalg;
use crate::poly::{monomials_up_to, Monomial, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("functions were computed to different cutoffs ({0} vs {1}) and carry no polynomial")]
    CutoffMismatch(usize, usize),
    #[error("invalid reference data: {0}")]
    InvalidOmega(String),
}

/// Staircase of a monomial ideal: minimal vertices under divisibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub n: usize,
    pub vertices: Vec<Monomial>,
    /// Taken from the global DegLex basis of a non-monomial ideal, so it
    /// says nothing about local data at a point.
    pub global_order: bool,
}

impl Diagram {
    pub fn new(n: usize, vertices: Vec<Monomial>) -> Diagram {
        Diagram { n, vertices: minimalize(vertices), global_order: false }
    }

    pub fn contains(&self, a: &Monomial) -> bool {
        self.vertices.iter().any(|v| v.divides(a))
    }
}

/// Drops every monomial divisible by another; result sorted DegLex ascending.
pub fn minimalize(mut v: Vec<Monomial>) -> Vec<Monomial> {
    v.sort();
    v.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(v.len());
    for m in v {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

pub fn diagram_of(i: &Ideal) -> Diagram {
    let n = i.ring().nvars();
    let monomial = i.is_monomial();
    let leads = i.basis().iter().map(|g| g.leading().expect("nonzero").0.clone()).collect();
    Diagram { n, vertices: minimalize(leads), global_order: !monomial }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// Monomials of degree at most `k` in `n` variables.
fn all_up_to(n: usize, k: u32) -> u64 {
    binomial(u64::from(k) + n as u64, n as u64)
}

/// Multiples of `v` of degree at most `k`.
fn cone(v: &Monomial, n: usize, k: u32) -> u64 {
    let d = v.degree();
    if d > k {
        0
    } else {
        all_up_to(n, k - d)
    }
}

fn count_in_union(v: &[Monomial], n: usize, k: u32) -> u64 {
    let Some((last, rest)) = v.split_last() else {
        return 0;
    };
    let lcms = minimalize(
        rest.iter().map(|w| w.lcm(last)).filter(|m| m.degree() <= k).collect(),
    );
    count_in_union(rest, n, k) + cone(last, n, k) - count_in_union(&lcms, n, k)
}

/// Number of exponents of degree at most `k` outside the diagram.
pub fn diagram_count(d: &Diagram, k: u32) -> u64 {
    let v: Vec<Monomial> = d.vertices.iter().filter(|m| m.degree() <= k).cloned().collect();
    all_up_to(d.n, k) - count_in_union(&minimalize(v), d.n, k)
}

/// Hilbert–Samuel values `H(0..=cutoff)` with an optional eventual polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsFunction {
    pub values: Vec<u64>,
    /// Coefficients in `k`, constant term first.
    pub polynomial: Option<Vec<Q>>,
    pub stabilization: Option<usize>,
    pub exact: bool,
}

impl HsFunction {
    pub fn cutoff(&self) -> usize {
        self.values.len() - 1
    }

    /// Value at `k`, using the polynomial past the computed window.
    pub fn value_at(&self, k: usize) -> Option<Q> {
        if let (Some(p), Some(s)) = (&self.polynomial, self.stabilization) {
            if k >= s {
                return Some(eval_univariate(p, k));
            }
        }
        self.values.get(k).map(|&v| Q::from_integer(BigInt::from(v)))
    }
}

pub fn eval_univariate(p: &[Q], k: usize) -> Q {
    let x = Q::from_integer(BigInt::from(k));
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Interpolating polynomial through `(x_i, y_i)`, trailing zeros trimmed.
fn interpolate(xs: &[usize], ys: &[Q]) -> Vec<Q> {
    let m = xs.len();
    let rows: Vec<Vec<Q>> = xs
        .iter()
        .zip(ys)
        .map(|(&x, y)| {
            let x = Q::from_integer(BigInt::from(x));
            let mut row: Vec<Q> = Vec::with_capacity(m + 1);
            let mut p = Q::from_integer(BigInt::from(1));
            for _ in 0..m {
                row.push(p.clone());
                p *= &x;
            }
            row.push(y.clone());
            row
        })
        .collect();
    let r = linalg::rref(&rows);
    let mut coeffs: Vec<Q> = alloc::vec![Q::zero(); m];
    for row in &r {
        let lead = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
        coeffs[lead] = row[m].clone();
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn stabilization_of(values: &[u64], p: &[Q]) -> usize {
    let mut s = values.len();
    while s > 0 && eval_univariate(p, s - 1) == Q::from_integer(BigInt::from(values[s - 1])) {
        s -= 1;
    }
    s
}

/// Exact function of a monomial staircase, computed at least to `cutoff`
/// and past the point where it becomes polynomial.
pub fn hs_of_diagram(d: &Diagram, cutoff: usize) -> HsFunction {
    let top: Monomial = d.vertices.iter().fold(Monomial::one(d.n), |acc, v| acc.lcm(v));
    let k0 = (top.degree() as usize).saturating_sub(d.n);
    let xs: Vec<usize> = (k0..=k0 + d.n).collect();
    let ys: Vec<Q> = xs.iter().map(|&k| Q::from_integer(BigInt::from(diagram_count(d, k as u32)))).collect();
    let p = interpolate(&xs, &ys);
    let len = cutoff.max(k0) + 1;
    let values: Vec<u64> = (0..len).map(|k| diagram_count(d, k as u32)).collect();
    let s = stabilization_of(&values, &p);
    HsFunction { values, polynomial: Some(p), stabilization: Some(s), exact: true }
}

pub fn default_cutoff(i: &Ideal) -> usize {
    let s: u32 = i.generators().iter().filter_map(|g| g.degree()).sum();
    2 * s as usize + i.ring().nvars()
}

/// `length(O_a / (I_a + m^{k+1}))` for one `k`.
pub fn hs_value(i: &Ideal, a: &[Q], k: u32) -> u64 {
    let ia = i.translate(a);
    hs_value_translated(&ia, k)
}

fn hs_value_translated(ia: &Ideal, k: u32) -> u64 {
    let n = ia.ring().nvars();
    let input: Vec<Terms> = ia.generators().iter().filter(|g| !g.is_zero()).map(|g| g.terms().to_vec()).collect();
    let leads = truncated_leading_monomials(&input, n, k);
    diagram_count(&Diagram::new(n, leads), k)
}

/// Point-local Hilbert–Samuel function of `I` at `a`. Monomial ideals (after
/// translation) are handled exactly through their staircase; otherwise each
/// value is computed from a truncated basis and a polynomial is fitted to
/// the tail of the window.
pub fn hs_function(i: &Ideal, a: &[Q], cutoff: usize) -> HsFunction {
    let ia = i.translate(a).canonical();
    if ia.is_monomial() {
        let d = diagram_of(&ia);
        let mut f = hs_of_diagram(&d, cutoff);
        f.values.truncate(cutoff + 1);
        return f;
    }
    let values: Vec<u64> = (0..=cutoff).map(|k| hs_value_translated(&ia, k as u32)).collect();
    let dim = ia.krull_dim().unwrap_or(0);
    let mut out = HsFunction { values, polynomial: None, stabilization: None, exact: false };
    if cutoff < dim + 3 {
        return out;
    }
    let end = cutoff - 2;
    let xs: Vec<usize> = (end - dim..=end).collect();
    let ys: Vec<Q> = xs.iter().map(|&k| Q::from_integer(BigInt::from(out.values[k]))).collect();
    let p = interpolate(&xs, &ys);
    let fits = (end - dim - 1..=cutoff)
        .all(|k| eval_univariate(&p, k) == Q::from_integer(BigInt::from(out.values[k])));
    if fits {
        out.stabilization = Some(stabilization_of(&out.values, &p));
        out.polynomial = Some(p);
        out.exact = true;
    }
    out
}

/// Brute-force value: rank of all truncated products `m * g`, no Gröbner
/// bases involved.
pub fn hs_value_oracle(i: &Ideal, a: &[Q], k: u32) -> u64 {
    let n = i.ring().nvars();
    let monos = monomials_up_to(n, k);
    let index = |m: &Monomial| monos.iter().position(|x| x == m);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for g in i.generators() {
        let g = g.translate(a);
        for mu in &monos {
            let mut row = alloc::vec![Q::zero(); monos.len()];
            let mut any = false;
            for (m, c) in g.terms() {
                let t = m.mul(mu);
                if t.degree() <= k {
                    row[index(&t).expect("enumerated")] += c;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    (monos.len() - linalg::rank(&rows)) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
    Unknown,
}

fn verdict(pos: bool, neg: bool) -> HsOrder {
    match (pos, neg) {
        (true, true) => HsOrder::Incomparable,
        (true, false) => HsOrder::Greater,
        (false, true) => HsOrder::Less,
        (false, false) => HsOrder::Equal,
    }
}

/// Pointwise partial order on functions of `k`.
pub fn hs_compare(f: &HsFunction, g: &HsFunction) -> Result<HsOrder, HilbertError> {
    if f == g {
        return Ok(HsOrder::Equal);
    }
    if let (Some(pf), Some(pg), Some(sf), Some(sg)) = (&f.polynomial, &g.polynomial, f.stabilization, g.stabilization) {
        if f.exact && g.exact {
            let (mut pos, mut neg) = (false, false);
            let mut note = |d: Q| {
                if d.is_positive() {
                    pos = true;
                } else if d.is_negative() {
                    neg = true;
                }
            };
            let s = sf.max(sg);
            for k in 0..s {
                note(f.value_at(k).expect("below stabilization") - g.value_at(k).expect("below stabilization"));
            }
            let len = pf.len().max(pg.len());
            let mut diff: Vec<Q> = (0..len)
                .map(|i| pf.get(i).cloned().unwrap_or_else(Q::zero) - pg.get(i).cloned().unwrap_or_else(Q::zero))
                .collect();
            while diff.last().is_some_and(|c| c.is_zero()) {
                diff.pop();
            }
            if let Some(lead) = diff.last().cloned() {
                // all real roots lie below 1 + max |c_i / c_d|
                let bound = diff[..diff.len() - 1]
                    .iter()
                    .map(|c| (c / &lead).abs())
                    .fold(Q::zero(), |a, b| if b > a { b } else { a });
                let bound = (bound.ceil() + Q::from_integer(BigInt::from(1))).to_integer().to_usize().unwrap_or(usize::MAX);
                for k in s..=bound.max(s) {
                    note(eval_univariate(&diff, k));
                }
                note(lead);
            }
            return Ok(verdict(pos, neg));
        }
    }
    if f.cutoff() != g.cutoff() {
        return Err(HilbertError::CutoffMismatch(f.cutoff(), g.cutoff()));
    }
    let pos = f.values.iter().zip(&g.values).any(|(a, b)| a > b);
    let neg = f.values.iter().zip(&g.values).any(|(a, b)| a < b);
    Ok(if pos && neg { HsOrder::Incomparable } else { HsOrder::Unknown })
}

/// Whether two functions agree on the shared window (no claim beyond it).
pub fn hs_window_equal(f: &HsFunction, g: &HsFunction) -> bool {
    let m = f.values.len().min(g.values.len());
    f.values[..m] == g.values[..m]
}

/// Vertices of `⋂_i (x_{i,1..c_i}, y_1⋯y_q)` in `e` variables: the blocks of
/// `c` come first, then the `y`s, then unused variables.
pub fn omega_q_diagram(e: usize, c: &[usize], q: usize) -> Result<Diagram, HilbertError> {
    let total: usize = c.iter().sum();
    if q == 0 {
        return Err(HilbertError::InvalidOmega("q must be at least 1".into()));
    }
    if c.is_empty() || c.contains(&0) {
        return Err(HilbertError::InvalidOmega("codimensions must be positive".into()));
    }
    if total + q > e {
        return Err(HilbertError::InvalidOmega(alloc::format!(
            "sum of codimensions {total} plus q={q} exceeds e={e}"
        )));
    }
    let mut y = Monomial::one(e);
    for j in 0..q {
        y.0[total + j] = 1;
    }
    let mut acc: Option<Vec<Monomial>> = None;
    let mut start = 0;
    for &ci in c {
        let mut gens: Vec<Monomial> = (start..start + ci).map(|v| Monomial::var(e, v)).collect();
        gens.push(y.clone());
        start += ci;
        acc = Some(match acc {
            None => minimalize(gens),
            Some(prev) => {
                let mut l = Vec::new();
                for a in &prev {
                    for b in &gens {
                        l.push(a.lcm(b));
                    }
                }
                minimalize(l)
            }
        });
    }
    Ok(Diagram::new(e, acc.unwrap_or_default()))
}

pub fn hs_omega_q(e: usize, c: &[usize], q: usize, cutoff: usize) -> Result<HsFunction, HilbertError> {
    Ok(hs_of_diagram(&omega_q_diagram(e, c, q)?, cutoff))
}
