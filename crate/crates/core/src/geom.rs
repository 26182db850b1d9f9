//! Point-local geometry of unions of smooth components carrying a divisor
//! and an ordered boundary: embedding dimension, stable-snc verdicts,
//! strata and the invariants used to order them.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::One;

use crate::hilbert::{self, HsFunction, HsOrder};
use crate::ideal::{Ideal, RingMap};
use crate::linalg;
use crate::poly::{Point, Q, RingRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("point does not lie on X")]
    NotOnX,
    #[error("component {0} contains component {1}")]
    NestedComponents(usize, usize),
    #[error("no component of X is contained in divisor part {0}")]
    HostNotFound(usize),
    #[error("divisor part {part} lies in component {other} as well as its host, i.e. in Sing X")]
    DivisorInSingX { part: usize, other: usize },
    #[error("divisor part {0} is not of codimension one in its host")]
    NotCodimOne(usize),
    #[error("{0} is not a coordinate subspace of the frame")]
    NotCoordinate(String),
    #[error("stratum precondition violated: {0}")]
    Stratum(String),
    #[error("invalid invariant data: {0}")]
    Invariant(String),
    #[error("operation needs arrangement mode")]
    GeneralMode,
    #[error("empty component list")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Arrangement,
    General,
}

/// Three-valued verdict; negative and undecided outcomes carry a reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    False(String),
    Undecided(String),
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False(_) => "false",
            Verdict::Undecided(_) => "undecided",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::True => None,
            Verdict::False(r) | Verdict::Undecided(r) => Some(r),
        }
    }
}

/// Ordered irreducible components `X^(1) ∪ … ∪ X^(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentUnion {
    pub ring: RingRef,
    pub components: Vec<Ideal>,
}

impl ComponentUnion {
    pub fn new(ring: &RingRef, components: Vec<Ideal>) -> Result<Self, GeomError> {
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate() {
                // X_j ⊆ X_i  ⇔  I_i ⊆ I_j
                if i != j && b.contains_ideal(a) {
                    return Err(GeomError::NestedComponents(i, j));
                }
            }
        }
        Ok(ComponentUnion { ring: ring.clone(), components })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Indices of the components through `a`.
    pub fn through(&self, a: &[Q]) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| self.components[i].vanishes_at(a)).collect()
    }

    pub fn union_ideal(&self, idx: &[usize]) -> Ideal {
        let parts: Vec<Ideal> = idx.iter().map(|&i| self.components[i].clone()).collect();
        Ideal::intersect_all(&self.ring, &parts)
    }

    pub fn sum_ideal(&self, idx: &[usize]) -> Ideal {
        idx.iter().fold(Ideal::zero(&self.ring), |acc, &i| acc.sum(&self.components[i]))
    }

    /// First `k` components.
    pub fn prefix(&self, k: usize) -> ComponentUnion {
        ComponentUnion { ring: self.ring.clone(), components: self.components[..k].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPart {
    pub coefficient: Q,
    pub ideal: Ideal,
    pub host: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    pub parts: Vec<DivisorPart>,
}

impl Divisor {
    /// Hosts are inferred: the first component contained in each part.
    pub fn new(x: &ComponentUnion, parts: Vec<(Q, Ideal)>) -> Result<Divisor, GeomError> {
        let mut out = Vec::with_capacity(parts.len());
        for (k, (coefficient, ideal)) in parts.into_iter().enumerate() {
            let host = x
                .components
                .iter()
                .position(|c| ideal.contains_ideal(c))
                .ok_or(GeomError::HostNotFound(k))?;
            out.push(DivisorPart { coefficient, ideal, host });
        }
        Ok(Divisor { parts: out })
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn reduced(&self) -> Divisor {
        Divisor {
            parts: self
                .parts
                .iter()
                .map(|p| DivisorPart { coefficient: Q::one(), ideal: p.ideal.clone(), host: p.host })
                .collect(),
        }
    }

    /// Ideal of the support of the parts hosted on component `i`.
    pub fn support_on(&self, ring: &RingRef, i: usize) -> Ideal {
        let parts: Vec<Ideal> = self.parts.iter().filter(|p| p.host == i).map(|p| p.ideal.clone()).collect();
        Ideal::intersect_all(ring, &parts)
    }

    pub fn support(&self, ring: &RingRef) -> Ideal {
        let parts: Vec<Ideal> = self.parts.iter().map(|p| p.ideal.clone()).collect();
        Ideal::intersect_all(ring, &parts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub ideal: Ideal,
    pub coefficient: Q,
}

/// Ordered boundary divisor. Components may become the unit ideal in a
/// chart where they are absent; they keep their slot so the order survives.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Boundary {
    pub components: Vec<BoundaryComponent>,
}

impl Boundary {
    pub fn new(ideals: Vec<Ideal>) -> Boundary {
        Boundary {
            components: ideals.into_iter().map(|ideal| BoundaryComponent { ideal, coefficient: Q::one() }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components present (not the unit ideal).
    pub fn present(&self) -> impl Iterator<Item = (usize, &BoundaryComponent)> {
        self.components.iter().enumerate().filter(|(_, c)| !c.ideal.is_unit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub x: ComponentUnion,
    pub d: Divisor,
    pub e: Boundary,
    pub frame: RingMap,
    pub mode: Mode,
}

impl Triple {
    pub fn new(x: ComponentUnion, d: Divisor, e: Boundary, mode: Mode) -> Result<Triple, GeomError> {
        if x.is_empty() {
            return Err(GeomError::Empty);
        }
        let frame = RingMap::identity(&x.ring);
        let t = Triple { x, d, e, frame, mode };
        if mode == Mode::Arrangement {
            t.check_arrangement()?;
        }
        Ok(t)
    }

    pub fn ring(&self) -> &RingRef {
        &self.x.ring
    }

    fn check_arrangement(&self) -> Result<(), GeomError> {
        for (i, c) in self.x.components.iter().enumerate() {
            if c.coordinate_vars().is_none() {
                return Err(GeomError::NotCoordinate(alloc::format!("component {}", i + 1)));
            }
        }
        for (i, c) in self.e.present() {
            match c.ideal.coordinate_vars() {
                Some(v) if v.len() == 1 => {}
                _ => return Err(GeomError::NotCoordinate(alloc::format!("boundary component {}", i + 1))),
            }
        }
        for (k, p) in self.d.parts.iter().enumerate() {
            let host = &self.x.components[p.host];
            if p.ideal.krull_dim().map(|d| d + 1) != host.krull_dim() {
                return Err(GeomError::NotCodimOne(k));
            }
        }
        Ok(())
    }

    /// Components of `D` and of `E` restricted to `X`, as one divisor. Each
    /// boundary component hosts a part on every component of `X` it meets at
    /// `a`. Repeated parts of `D` have their coefficients added; a part of `D`
    /// supported in the boundary is a failure.
    pub fn folded_parts(&self, a: &[Q]) -> Result<Vec<DivisorPart>, String> {
        let parts: Vec<DivisorPart> = self.d.parts.clone();
        let mut traces: Vec<DivisorPart> = Vec::new();
        let through = self.x.through(a);
        for (k, h) in self.e.present() {
            if !h.ideal.vanishes_at(a) {
                continue;
            }
            for &i in &through {
                let xi = &self.x.components[i];
                if xi.contains_ideal(&h.ideal) {
                    return Err(alloc::format!("component {} lies in boundary component {}", i + 1, k + 1));
                }
                let trace = h.ideal.sum(xi).canonical();
                if let Some(j) = self.d.parts.iter().position(|p| p.host == i && p.ideal == trace) {
                    return Err(alloc::format!("divisor part {} lies in boundary component {}", j + 1, k + 1));
                }
                traces.push(DivisorPart { coefficient: h.coefficient.clone(), ideal: trace, host: i });
            }
        }
        let mut merged: Vec<DivisorPart> = Vec::new();
        for p in parts {
            match merged.iter_mut().find(|q| q.host == p.host && q.ideal == p.ideal) {
                Some(q) => q.coefficient += p.coefficient,
                None => merged.push(p),
            }
        }
        merged.extend(traces);
        Ok(merged)
    }

    /// Sub-triple on the first `k` components: later components and the
    /// divisor parts they host are dropped.
    pub fn prefix(&self, k: usize) -> Triple {
        Triple {
            x: self.x.prefix(k),
            d: Divisor { parts: self.d.parts.iter().filter(|p| p.host < k).cloned().collect() },
            e: self.e.clone(),
            frame: self.frame.clone(),
            mode: self.mode,
        }
    }

    pub fn with_divisor(&self, d: Divisor) -> Triple {
        Triple { x: self.x.clone(), d, e: self.e.clone(), frame: self.frame.clone(), mode: self.mode }
    }
}

/// Minimal embedding dimension of `X` at `a`.
pub fn embedding_dim(x: &ComponentUnion, a: &[Q]) -> Result<usize, GeomError> {
    let through = x.through(a);
    if through.is_empty() {
        return Err(GeomError::NotOnX);
    }
    Ok(x.union_ideal(&through).embedding_dim_at(a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyReport {
    pub verdict: Verdict,
    /// Components through the point.
    pub m: usize,
    pub e: usize,
    /// Codimensions in the ambient space of the components through `a`.
    pub codims: Vec<usize>,
    /// Codimension of the intersection scheme.
    pub c: usize,
}

/// Components smooth, intersection scheme smooth, and
/// `c = Σ c_i − (m−1)(n − e)`.
pub fn stable_snc_variety(x: &ComponentUnion, a: &[Q]) -> Result<VarietyReport, GeomError> {
    let through = x.through(a);
    if through.is_empty() {
        return Err(GeomError::NotOnX);
    }
    let n = x.ring.nvars();
    let e = x.union_ideal(&through).embedding_dim_at(a);
    let codims: Vec<usize> = through.iter().map(|&i| x.components[i].jacobian_rank_at(a)).collect();
    let sum = x.sum_ideal(&through);
    let c = sum.jacobian_rank_at(a);
    let m = through.len();
    let mut report = VarietyReport { verdict: Verdict::True, m, e, codims: codims.clone(), c };
    if let Some(&i) = through.iter().find(|&&i| !x.components[i].is_smooth_at(a)) {
        report.verdict = Verdict::False(alloc::format!("component {} is singular at the point", i + 1));
        return Ok(report);
    }
    if !sum.is_smooth_at(a) {
        report.verdict = Verdict::False("intersection of the components is not smooth".into());
        return Ok(report);
    }
    let expected = codims.iter().sum::<usize>() as i64 - (m as i64 - 1) * (n as i64 - e as i64);
    if expected != c as i64 {
        report.verdict = Verdict::False(alloc::format!("codimension {c} of the intersection differs from {expected}"));
    }
    Ok(report)
}

enum PairFailure {
    Verdict(Verdict),
    InSing { part: usize, other: usize },
}

/// Core pair criterion on explicit parts. Normal form: the components are
/// coordinate subspaces `(x_{I_i}, z)` of a minimal embedding and each
/// divisor class is `(y_j = 0)` restricted to every component, with one
/// coefficient per class.
fn pair_core(x: &ComponentUnion, parts: &[DivisorPart], a: &[Q]) -> Result<Verdict, PairFailure> {
    let var = stable_snc_variety(x, a).map_err(|_| PairFailure::Verdict(Verdict::False("point not on X".into())))?;
    if !var.verdict.is_true() {
        return Ok(var.verdict);
    }
    let through = x.through(a);
    let at: Vec<(usize, &DivisorPart)> =
        parts.iter().enumerate().filter(|(_, p)| p.ideal.vanishes_at(a)).collect();
    if at.is_empty() {
        return Ok(Verdict::True);
    }
    for &(k, p) in &at {
        for &l in &through {
            if l != p.host && p.ideal.contains_ideal(&x.components[l]) {
                return Err(PairFailure::InSing { part: k, other: l });
            }
        }
    }
    for &(k, p) in &at {
        if !p.ideal.is_smooth_at(a) {
            return Ok(Verdict::False(alloc::format!("divisor part {} is singular at the point", k + 1)));
        }
        let host_rank = x.components[p.host].jacobian_rank_at(a);
        if p.ideal.jacobian_rank_at(a) != host_rank + 1 {
            return Ok(Verdict::False(alloc::format!("divisor part {} is not a hypersurface of its host", k + 1)));
        }
    }
    let mut by_host: BTreeMap<usize, Vec<usize>> = through.iter().map(|&h| (h, Vec::new())).collect();
    for (pos, &(_, p)) in at.iter().enumerate() {
        by_host.get_mut(&p.host).expect("host passes through the point").push(pos);
    }
    let h0 = through[0];
    let k0 = by_host[&h0].len();
    if through.len() >= 2 {
        if let Some((&h, v)) = by_host.iter().find(|(_, v)| v.len() != k0) {
            return Ok(Verdict::False(alloc::format!(
                "components {} and {} carry {} and {} divisor parts",
                h0 + 1,
                h + 1,
                k0,
                v.len()
            )));
        }
    }
    // match parts across hosts: D_i + X_l = D_l + X_i near a
    let mut classes: Vec<Vec<usize>> = if through.len() >= 2 {
        by_host[&h0].iter().map(|&p| alloc::vec![p]).collect()
    } else {
        (0..at.len()).map(|p| alloc::vec![p]).collect()
    };
    for &h in &through[1..] {
        for &p in &by_host[&h] {
            let dp = &at[p].1.ideal;
            let mut found = None;
            for (ci, class) in classes.iter().enumerate() {
                if class.iter().any(|&r| at[r].1.host == h) {
                    continue;
                }
                let ok = class.iter().all(|&r| {
                    let hr = at[r].1.host;
                    let lhs = at[r].1.ideal.sum(&x.components[h]);
                    let rhs = dp.sum(&x.components[hr]);
                    lhs.local_eq(&rhs, a)
                });
                if ok {
                    found = Some(ci);
                    break;
                }
            }
            match found {
                Some(ci) => classes[ci].push(p),
                None => {
                    return Ok(Verdict::False(alloc::format!(
                        "divisor part {} on component {} has no partner on the other components",
                        at[p].0 + 1,
                        h + 1
                    )))
                }
            }
        }
    }
    // transversality of the classes modulo the linear part of the intersection
    let n_space = x.sum_ideal(&through).linear_part_space(a);
    let base = n_space.len();
    let spaces: Vec<Vec<Vec<Q>>> = classes
        .iter()
        .map(|class| {
            let ideals: Vec<Ideal> = class.iter().map(|&r| at[r].1.ideal.clone()).collect();
            Ideal::intersect_all(&x.ring, &ideals).linear_part_space(a)
        })
        .collect();
    let k = classes.len();
    if k > 16 {
        return Ok(Verdict::Undecided("too many divisor classes at the point".into()));
    }
    for mask in 1u32..(1u32 << k) {
        let mut rows = n_space.clone();
        for (j, s) in spaces.iter().enumerate() {
            if mask & (1 << j) != 0 {
                rows.extend(s.iter().cloned());
            }
        }
        if linalg::rank(&rows) - base < mask.count_ones() as usize {
            return Ok(Verdict::False("divisor classes are not transverse".into()));
        }
    }
    for class in &classes {
        let c0 = &at[class[0]].1.coefficient;
        if class.iter().any(|&r| &at[r].1.coefficient != c0) {
            return Ok(Verdict::False("coefficients differ within an equivalence class".into()));
        }
    }
    Ok(Verdict::True)
}

/// Pair verdict; a divisor part inside `Sing X` is an error.
pub fn stable_snc_pair(x: &ComponentUnion, d: &Divisor, a: &[Q]) -> Result<Verdict, GeomError> {
    if x.through(a).is_empty() {
        return Err(GeomError::NotOnX);
    }
    match pair_core(x, &d.parts, a) {
        Ok(v) => Ok(v),
        Err(PairFailure::Verdict(v)) => Ok(v),
        Err(PairFailure::InSing { part, other }) => Err(GeomError::DivisorInSingX { part, other }),
    }
}

/// Triple verdict: `(X, D + E)`. Degenerate inputs give `False` with a reason.
pub fn stable_snc_triple(t: &Triple, a: &[Q]) -> Result<Verdict, GeomError> {
    if t.x.through(a).is_empty() {
        return Err(GeomError::NotOnX);
    }
    let parts = match t.folded_parts(a) {
        Ok(p) => p,
        Err(reason) => return Ok(Verdict::False(reason)),
    };
    Ok(match pair_core(&t.x, &parts, a) {
        Ok(v) | Err(PairFailure::Verdict(v)) => v,
        Err(PairFailure::InSing { part, other }) => {
            Verdict::False(alloc::format!("divisor part {} lies in component {}", part + 1, other + 1))
        }
    })
}

/// `(X, E)` with the divisor dropped.
pub fn stable_snc_boundary(t: &Triple, a: &[Q]) -> Result<Verdict, GeomError> {
    stable_snc_triple(&t.with_divisor(Divisor::default()), a)
}

/// Plain snc: decidable here only for arrangements (coordinate components)
/// or when the stronger stable-snc condition already holds.
pub fn snc_variety(t: &Triple, a: &[Q]) -> Result<Verdict, GeomError> {
    let through = t.x.through(a);
    if through.is_empty() {
        return Err(GeomError::NotOnX);
    }
    if t.mode == Mode::Arrangement {
        return Ok(Verdict::True);
    }
    if stable_snc_variety(&t.x, a)?.verdict.is_true() {
        return Ok(Verdict::True);
    }
    Ok(Verdict::Undecided("plain snc is only decided for arrangements".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumKey {
    pub e: usize,
    /// Nonincreasing.
    pub c: Vec<usize>,
    pub q: usize,
}

/// `(Ω, q)` of a point of the last component.
pub fn stratum_key(x: &ComponentUnion, d: &Divisor, a: &[Q]) -> Result<StratumKey, GeomError> {
    let m = x.len().checked_sub(1).ok_or(GeomError::Empty)?;
    if !x.components[m].vanishes_at(a) {
        return Err(GeomError::Stratum("point is not on the last component".into()));
    }
    let through = x.through(a);
    let at: Vec<&DivisorPart> = d.parts.iter().filter(|p| p.ideal.vanishes_at(a)).collect();
    for (k, p) in d.parts.iter().enumerate() {
        if !p.ideal.vanishes_at(a) {
            continue;
        }
        for &l in &through {
            if l != p.host && p.ideal.contains_ideal(&x.components[l]) {
                return Err(GeomError::DivisorInSingX { part: k, other: l });
            }
        }
    }
    let mut relevant: Vec<usize> = at.iter().map(|p| p.host).collect();
    relevant.push(m);
    relevant.sort_unstable();
    relevant.dedup();
    let e = x.union_ideal(&relevant).embedding_dim_at(a);
    let mut c: Vec<usize> = Vec::with_capacity(relevant.len());
    for &i in &relevant {
        let dim = x.components[i]
            .local_dim_at(a)
            .ok_or_else(|| GeomError::Stratum("component misses the point".into()))?;
        c.push(e.checked_sub(dim).ok_or_else(|| GeomError::Stratum("component exceeds embedding".into()))?);
    }
    c.sort_unstable_by(|a, b| b.cmp(a));
    let q = relevant.iter().map(|&i| at.iter().filter(|p| p.host == i).count()).min().unwrap_or(0);
    Ok(StratumKey { e, c, q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvEntry {
    Finite(u64),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialInvariant {
    pub m: usize,
    pub s: Vec<u64>,
    pub r: usize,
    pub sequence: Vec<InvEntry>,
}

/// `(m, s_1, 1, s_2, …, 1, 0, …, ∞)` with exactly `r = |c| + |s| − max c`
/// pairs after the leading pair.
pub fn special_invariant(c: &[u64], s: &[u64]) -> Result<SpecialInvariant, GeomError> {
    let max = *c.iter().max().ok_or_else(|| GeomError::Invariant("c is empty".into()))?;
    let s: Vec<u64> = if s.is_empty() { alloc::vec![0] } else { s.to_vec() };
    let r = (c.iter().sum::<u64>() + s.iter().sum::<u64>() - max) as usize;
    if s.len() - 1 > r {
        return Err(GeomError::Invariant(alloc::format!("{} entries of s after the first exceed r = {r}", s.len() - 1)));
    }
    let mut seq = alloc::vec![InvEntry::Finite(c.len() as u64), InvEntry::Finite(s[0])];
    for j in 0..r {
        seq.push(InvEntry::Finite(1));
        seq.push(InvEntry::Finite(s.get(j + 1).copied().unwrap_or(0)));
    }
    seq.push(InvEntry::Infinity);
    Ok(SpecialInvariant { m: c.len(), s, r, sequence: seq })
}

/// `ι(a) = (κ, q)`: components through `a` and classes of divisor parts at
/// `a`, two parts on different hosts being equivalent when they coincide or
/// meet in codimension `c_1 + c_2 + 1` of a minimal embedding.
pub fn iota(x: &ComponentUnion, d: &Divisor, a: &[Q]) -> Result<(usize, usize), GeomError> {
    let through = x.through(a);
    if through.is_empty() {
        return Err(GeomError::NotOnX);
    }
    let e = x.union_ideal(&through).embedding_dim_at(a);
    let at: Vec<&DivisorPart> = d.parts.iter().filter(|p| p.ideal.vanishes_at(a)).collect();
    let codim = |i: &Ideal| -> Option<usize> { i.local_dim_at(a).map(|dim| e.saturating_sub(dim)) };
    let mut parent: Vec<usize> = (0..at.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..at.len() {
        for j in i + 1..at.len() {
            let equivalent = if at[i].ideal == at[j].ideal {
                true
            } else if at[i].host != at[j].host {
                let c1 = codim(&x.components[at[i].host]);
                let c2 = codim(&x.components[at[j].host]);
                let ci = codim(&at[i].ideal.sum(&at[j].ideal));
                matches!((c1, c2, ci), (Some(c1), Some(c2), Some(ci)) if ci == c1 + c2 + 1)
            } else {
                false
            };
            if equivalent {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let classes = (0..at.len()).filter(|&i| find(&mut parent, i) == i).count();
    Ok((through.len(), classes))
}

/// `H_{Ω,q}` for a key; `q = 0` gives the zero function.
pub fn reference_hs(key: &StratumKey, cutoff: usize) -> Option<HsFunction> {
    if key.q == 0 {
        return Some(HsFunction {
            values: alloc::vec![0; cutoff + 1],
            polynomial: Some(Vec::new()),
            stabilization: Some(0),
            exact: true,
        });
    }
    hilbert::hs_omega_q(key.e, &key.c, key.q, cutoff).ok()
}

/// Order on stratum keys: `Ω` lexicographically, then `H_{Ω,q}`.
pub fn compare_keys(a: &StratumKey, b: &StratumKey) -> Option<Ordering> {
    let oa = (a.e, &a.c);
    let ob = (b.e, &b.c);
    match oa.cmp(&ob) {
        Ordering::Equal => {}
        o => return Some(o),
    }
    if a.q == b.q {
        return Some(Ordering::Equal);
    }
    let cutoff = 2 * a.e + 4;
    let ha = reference_hs(a, cutoff)?;
    let hb = reference_hs(b, cutoff)?;
    match hilbert::hs_compare(&ha, &hb).ok()? {
        HsOrder::Less => Some(Ordering::Less),
        HsOrder::Greater => Some(Ordering::Greater),
        HsOrder::Equal => Some(Ordering::Equal),
        HsOrder::Incomparable | HsOrder::Unknown => None,
    }
}

/// Keys not strictly below any other key of the list, deduplicated.
pub fn maximal_keys(keys: &[StratumKey]) -> Vec<StratumKey> {
    let mut uniq: Vec<StratumKey> = keys.to_vec();
    uniq.sort();
    uniq.dedup();
    uniq.iter()
        .filter(|k| !uniq.iter().any(|o| compare_keys(o, k) == Some(Ordering::Greater)))
        .cloned()
        .collect()
}

/// `K(X, D)`: maximal strata among the given sample points of the last
/// component that also lie on an earlier component.
pub fn maximal_strata(t: &Triple, points: &[Point]) -> Result<Vec<StratumKey>, GeomError> {
    if t.mode != Mode::Arrangement {
        return Err(GeomError::GeneralMode);
    }
    let m = t.x.len() - 1;
    let mut keys = Vec::new();
    for p in points {
        let through = t.x.through(p);
        if !through.contains(&m) || through.len() < 2 {
            continue;
        }
        keys.push(stratum_key(&t.x, &t.d, p)?);
    }
    Ok(maximal_keys(&keys))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSnc {
    pub variety: Verdict,
    pub pair: Verdict,
    pub triple: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReport {
    pub point: Point,
    pub kappa: usize,
    pub e: usize,
    /// Per component through the point: (index, smooth, local dimension).
    pub components: Vec<(usize, bool, Option<usize>)>,
    pub snc: Verdict,
    pub stable_snc: StableSnc,
    pub stratum: Option<StratumKey>,
    pub iota: (usize, usize),
    pub caveats: Vec<String>,
}

pub fn local_report(t: &Triple, a: &[Q]) -> Result<LocalReport, GeomError> {
    let through = t.x.through(a);
    if through.is_empty() {
        return Err(GeomError::NotOnX);
    }
    let var = stable_snc_variety(&t.x, a)?;
    let pair = match stable_snc_pair(&t.x, &t.d, a) {
        Ok(v) => v,
        Err(e) => Verdict::False(alloc::format!("{e}")),
    };
    let triple = stable_snc_triple(t, a)?;
    let mut caveats = Vec::new();
    let components = through
        .iter()
        .map(|&i| {
            let c = &t.x.components[i];
            let smooth = c.is_smooth_at(a);
            if !smooth {
                caveats.push(alloc::format!("dimension of component {} is a global bound", i + 1));
            }
            (i, smooth, c.local_dim_at(a))
        })
        .collect();
    let stratum = stratum_key(&t.x, &t.d, a).ok();
    Ok(LocalReport {
        point: a.to_vec(),
        kappa: through.len(),
        e: var.e,
        components,
        snc: snc_variety(t, a)?,
        stable_snc: StableSnc { variety: var.verdict, pair, triple },
        stratum,
        iota: iota(&t.x, &t.d, a)?,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{origin, q, qf, Ring};

    fn cu(ring: &RingRef, comps: &[&[&str]]) -> ComponentUnion {
        ComponentUnion::new(ring, comps.iter().map(|c| Ideal::parse(ring, c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn three_axes() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = cu(&ring, &[&["x", "y"], &["y", "z"], &["x", "z"]]);
        let r = stable_snc_variety(&x, &origin(3)).unwrap();
        assert!(r.verdict.is_false());
        assert_eq!(r.e, 3);
        let y = cu(&ring, &[&["x", "y"], &["y", "z"]]);
        assert!(stable_snc_variety(&y, &origin(3)).unwrap().verdict.is_true());
        assert_eq!(embedding_dim(&y, &origin(3)).unwrap(), 2);
    }

    #[test]
    fn surfaces_in_five_space() {
        let ring = Ring::new(&["x", "y", "z", "t", "u"]).unwrap();
        let x = cu(&ring, &[&["x", "y"], &["x + u*z", "y + u*t"]]);
        assert!(stable_snc_variety(&x, &origin(5)).unwrap().verdict.is_false());
        let a = alloc::vec![q(0), q(0), q(0), q(0), q(1)];
        assert!(stable_snc_variety(&x, &a).unwrap().verdict.is_true());
    }

    #[test]
    fn weighted_divisors() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = cu(&ring, &[&["x"], &["y"]]);
        let check = |a1: Q, a2: Q| {
            let d = Divisor::new(
                &x,
                alloc::vec![
                    (a1, Ideal::parse(&ring, &["x", "z"]).unwrap()),
                    (a2, Ideal::parse(&ring, &["y", "z"]).unwrap()),
                ],
            )
            .unwrap();
            stable_snc_pair(&x, &d, &origin(3)).unwrap().is_true()
        };
        assert!(check(q(1), q(1)));
        assert!(!check(q(1), q(2)));
        assert!(check(qf(3, 2), qf(3, 2)));
    }

    #[test]
    fn unmatched_divisor_fails() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = cu(&ring, &[&["x"], &["y"]]);
        let d = Divisor::new(&x, alloc::vec![(q(1), Ideal::parse(&ring, &["x", "z"]).unwrap())]).unwrap();
        assert!(stable_snc_pair(&x, &d, &origin(3)).unwrap().is_false());
        // away from the other component it is fine
        assert!(stable_snc_pair(&x, &d, &[q(0), q(1), q(0)]).unwrap().is_true());
    }

    #[test]
    fn boundary_folding() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = cu(&ring, &[&["x"]]);
        let e = Boundary::new(alloc::vec![Ideal::parse(&ring, &["y"]).unwrap()]);
        let t = Triple::new(x, Divisor::default(), e, Mode::Arrangement).unwrap();
        assert!(stable_snc_triple(&t, &origin(3)).unwrap().is_true());
    }

    #[test]
    fn char_stratum() {
        let ring = Ring::new(&["x1", "x2", "x3", "x4", "y1", "y2"]).unwrap();
        let x = cu(&ring, &[&["x1", "x2"], &["x4"], &["x3"]]);
        let d = Divisor::new(
            &x,
            alloc::vec![
                (q(1), Ideal::parse(&ring, &["x1", "x2", "y1"]).unwrap()),
                (q(1), Ideal::parse(&ring, &["x3", "y1*y2"]).unwrap()),
            ],
        )
        .unwrap();
        let k = stratum_key(&x, &d, &origin(6)).unwrap();
        assert_eq!(k, StratumKey { e: 6, c: alloc::vec![2, 1], q: 1 });
    }

    #[test]
    fn special_invariants() {
        let inf = InvEntry::Infinity;
        let f = InvEntry::Finite;
        assert_eq!(special_invariant(&[1, 1, 1], &[0]).unwrap().sequence, alloc::vec![f(3), f(0), f(1), f(0), f(1), f(0), inf]);
        assert_eq!(special_invariant(&[1], &[0]).unwrap().sequence, alloc::vec![f(1), f(0), inf]);
        let s = special_invariant(&[2, 1], &[1]).unwrap();
        assert_eq!(s.r, 2);
        assert_eq!(s.sequence, alloc::vec![f(2), f(1), f(1), f(0), f(1), f(0), inf]);
        assert!(special_invariant(&[], &[0]).is_err());
    }

    #[test]
    fn iota_examples() {
        let ring = Ring::new(&["x", "y", "z", "w"]).unwrap();
        let x = cu(&ring, &[&["x"], &["y"]]);
        let d = |a: &str, b: &str| {
            Divisor::new(
                &x,
                alloc::vec![
                    (q(1), Ideal::parse(&ring, &["x", a]).unwrap()),
                    (q(1), Ideal::parse(&ring, &["y", b]).unwrap()),
                ],
            )
            .unwrap()
        };
        assert_eq!(iota(&x, &d("z", "z"), &origin(4)).unwrap(), (2, 1));
        assert_eq!(iota(&x, &d("z", "w"), &origin(4)).unwrap(), (2, 2));
    }
}
