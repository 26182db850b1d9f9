//! Monomial marked ideals `(∏ H^{μ_H d}, d)` over an snc boundary and their
//! combinatorial resolution.
//!
//! The boundary is tracked as the complex of index sets whose divisors
//! still meet: blowing up `⋂_{H∈S} H` separates the members of `S` and
//! adds an exceptional divisor meeting every surviving face that met the
//! center.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::geom::{Boundary, Mode};
use crate::ideal::Ideal;
use crate::poly::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CleaningError {
    #[error("exponents must be nonnegative")]
    NegativeExponent,
    #[error("threshold must be positive")]
    NonPositiveThreshold,
    #[error("boundary component {0} through the point is not a coordinate hyperplane")]
    NotCoordinate(usize),
    #[error("monomial exponents are only read in arrangement mode")]
    GeneralMode,
    #[error("no termination within {0} steps")]
    StepBound(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMarkedIdeal {
    /// Boundary component referenced by each exponent.
    pub divisors: Vec<usize>,
    pub mu: Vec<Q>,
    pub d: Q,
    /// Index sets (into `mu`) of divisors with nonempty common intersection.
    faces: BTreeSet<Vec<usize>>,
}

impl MonomialMarkedIdeal {
    /// Divisors in general position: every subset meets.
    pub fn new(divisors: Vec<usize>, mu: Vec<Q>, d: Q) -> Result<Self, CleaningError> {
        if mu.iter().any(|m| *m < Q::zero()) {
            return Err(CleaningError::NegativeExponent);
        }
        if d <= Q::zero() {
            return Err(CleaningError::NonPositiveThreshold);
        }
        let n = mu.len();
        let faces = (0u32..(1u32 << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<usize>>())
            .filter(|f| !f.is_empty())
            .collect();
        Ok(MonomialMarkedIdeal { divisors, mu, d, faces })
    }

    pub fn from_mu(mu: Vec<Q>, d: Q) -> Result<Self, CleaningError> {
        let divisors = (0..mu.len()).collect();
        Self::new(divisors, mu, d)
    }

    /// Whether the divisors indexed by `s` still meet.
    pub fn meets(&self, s: &[usize]) -> bool {
        self.faces.contains(s)
    }

    fn weight(&self, s: &[usize]) -> Q {
        s.iter().fold(Q::zero(), |acc, &i| acc + &self.mu[i])
    }

    /// Blow up `⋂ S`; the exceptional divisor is appended.
    fn blow_up(&mut self, s: &[usize]) {
        let f = self.mu.len();
        let contains_s = |t: &Vec<usize>| s.iter().all(|i| t.contains(i));
        let mut next: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in &self.faces {
            if contains_s(t) {
                continue;
            }
            next.insert(t.clone());
            let mut u: Vec<usize> = t.iter().chain(s.iter()).copied().collect();
            u.sort_unstable();
            u.dedup();
            if self.faces.contains(&u) {
                let mut with_f = t.clone();
                with_f.push(f);
                next.insert(with_f);
            }
        }
        next.insert(alloc::vec![f]);
        let new_mu = self.weight(s) - &self.d;
        self.mu.push(new_mu);
        self.divisors.push(self.divisors.iter().max().map_or(0, |m| m + 1));
        self.faces = next;
    }
}

/// Minimal faces `S` with `Σ_{H∈S} μ_H ≥ d`, by size then indices.
pub fn mmi_cosupport(m: &MonomialMarkedIdeal) -> Vec<Vec<usize>> {
    let mut qualifying: Vec<&Vec<usize>> = m.faces.iter().filter(|s| m.weight(s) >= m.d).collect();
    qualifying.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in qualifying {
        if !out.iter().any(|t| t.iter().all(|i| s.contains(i))) {
            out.push(s.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleaningRun {
    /// Centers as index sets; exceptional divisors get indices from
    /// `mu.len()` of the input on, in creation order.
    pub centers: Vec<Vec<usize>>,
    pub result: MonomialMarkedIdeal,
}

/// `⌈Σμ / d⌉ · 2^{#divisors}`.
pub fn step_bound(m: &MonomialMarkedIdeal) -> usize {
    let total: Q = m.mu.iter().fold(Q::zero(), |a, b| a + b) / &m.d;
    let ceil = total.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    ceil.saturating_mul(1usize << m.mu.len().min(usize::BITS as usize - 1))
}

/// Repeatedly blow up the first minimal qualifying face until no face of
/// the boundary reaches the threshold.
///
/// The run is not cut off at [`step_bound`]: with this center order some
/// inputs need more steps (`μ = (8/5, 3/2, 5/3)`, `d = 2` takes 59 against a
/// bound of 24). The guard here only stops runaway loops.
pub fn clean_monomial_marked(m: &MonomialMarkedIdeal) -> Result<CleaningRun, CleaningError> {
    clean_monomial_marked_within(m, step_bound(m).saturating_mul(64).max(4096))
}

pub fn clean_monomial_marked_within(m: &MonomialMarkedIdeal, bound: usize) -> Result<CleaningRun, CleaningError> {
    let mut state = m.clone();
    let mut centers = Vec::new();
    while let Some(s) = mmi_cosupport(&state).into_iter().next() {
        if centers.len() >= bound {
            return Err(CleaningError::StepBound(bound));
        }
        state.blow_up(&s);
        centers.push(s);
    }
    Ok(CleaningRun { centers, result: state })
}

/// `μ_H = ord_H(I) / d` for each boundary component; the order is the
/// largest power of the hyperplane's variable dividing every generator.
/// Components missing the point get exponent zero.
pub fn mu_exponents(i: &Ideal, e: &Boundary, a: &[Q], d: &Q, mode: Mode) -> Result<MonomialMarkedIdeal, CleaningError> {
    if mode != Mode::Arrangement {
        return Err(CleaningError::GeneralMode);
    }
    let mut mu = Vec::with_capacity(e.len());
    for (k, h) in e.components.iter().enumerate() {
        if h.ideal.is_unit() || !h.ideal.vanishes_at(a) {
            mu.push(Q::zero());
            continue;
        }
        let v = match h.ideal.coordinate_vars() {
            Some(v) if v.len() == 1 => v[0],
            _ => return Err(CleaningError::NotCoordinate(k)),
        };
        let ord = i
            .basis()
            .iter()
            .flat_map(|g| g.terms().iter().map(|(m, _)| m.0[v]))
            .min()
            .unwrap_or(0);
        mu.push(Q::from_integer(BigInt::from(ord)) / d);
    }
    MonomialMarkedIdeal::new((0..e.len()).collect(), mu, d.clone())
}
