//! Desingularization driver for arrangement-mode triples.
//!
//! Every chart of the tree is handled independently. At each node the first
//! applicable rule picks one coordinate center; children are processed
//! depth-first in chart order, so the run is deterministic.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::blowup::{make_charts, transform_triple, BlowupError, ChartTree};
use crate::geom::{
    self, iota, stable_snc_boundary, stable_snc_triple, stratum_key, Mode, StratumKey, Triple, Verdict,
};
use crate::hilbert;
use crate::ideal::Ideal;
use crate::obstruction::{j_shape, pair_obstruction};
use crate::poly::{Point, Q};
use crate::sample::{adapted_point, face_point, faces};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("the driver needs arrangement mode")]
    GeneralMode,
    #[error("component {0} is not a coordinate subspace")]
    NotCoordinate(usize),
    #[error("divisor part {0} is not its host plus a single equation")]
    DivisorShape(usize),
    #[error("no admissible center at chart {path}: {reason}")]
    NoCenter { path: String, reason: String },
    #[error("step budget of {0} blow-ups exhausted")]
    Budget(usize),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepTag {
    MakeBoundaryStable,
    RemoveEmbeddedDivisors,
    DesingularizeJ,
    CleanJ,
    SeparateDivisors,
    NonReduced,
}

impl StepTag {
    pub fn label(self) -> &'static str {
        match self {
            StepTag::MakeBoundaryStable => "make (X,E) stable-snc",
            StepTag::RemoveEmbeddedDivisors => "remove components of D in Sing X or Supp E",
            StepTag::DesingularizeJ => "desingularize the obstruction ideal",
            StepTag::CleanJ => "cleaning blow-up",
            StepTag::SeparateDivisors => "separate divisor components",
            StepTag::NonReduced => "non-reduced pass",
        }
    }
}

const ALL_RULES: [StepTag; 5] = [
    StepTag::MakeBoundaryStable,
    StepTag::RemoveEmbeddedDivisors,
    StepTag::DesingularizeJ,
    StepTag::SeparateDivisors,
    StepTag::NonReduced,
];

/// Sample points of a center with their failing verdicts.
pub type Evidence = Vec<(Point, Verdict)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub node: usize,
    pub path: String,
    pub year: usize,
    pub center: Ideal,
    pub tag: StepTag,
    /// Sample points of the center with their (failing) triple verdicts.
    pub evidence: Vec<(Point, Verdict)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsCheck {
    pub node: usize,
    pub point: Point,
    pub key: StratumKey,
    /// `None` when the comparison window is too short to decide.
    pub equal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCertificate {
    pub tree: ChartTree,
    pub steps: Vec<StepRecord>,
    /// Per leaf: its verdict and a witness point when it fails.
    pub leaf_verdicts: Vec<(usize, Verdict, Option<Point>)>,
    pub hs_checks: Vec<HsCheck>,
    pub accepted: bool,
}

impl RunCertificate {
    /// Centers along the path to `node`, oldest first.
    pub fn centers_to(&self, node: usize) -> Vec<Ideal> {
        self.tree.centers_to(node)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesingOptions {
    pub max_steps: usize,
    /// Compare Hilbert–Samuel functions at maximal strata of the leaves.
    pub hs_checks: bool,
}

impl Default for DesingOptions {
    fn default() -> Self {
        DesingOptions { max_steps: 64, hs_checks: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Accepted,
    Rejected { reason: String, witness: Option<Point> },
}

impl Verification {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verification::Accepted)
    }
}

/// Deterministic points of `X`: one generic point per coordinate face, plus
/// points on divisor parts and on their pairwise meets inside each face.
pub fn sample_points(t: &Triple) -> Vec<Point> {
    let ring = t.ring();
    let n = ring.nvars();
    if t.x.is_empty() {
        return Vec::new();
    }
    let mut objects: Vec<Ideal> = t.x.components.clone();
    objects.extend(t.d.parts.iter().map(|p| p.ideal.clone()));
    objects.extend(t.e.present().map(|(_, h)| h.ideal.clone()));
    let mut targets: Vec<Ideal> = Vec::new();
    for (k, p) in t.d.parts.iter().enumerate() {
        targets.push(p.ideal.clone());
        for q in &t.d.parts[k + 1..] {
            targets.push(p.ideal.sum(&q.ideal));
        }
        for (_, h) in t.e.present() {
            targets.push(p.ideal.sum(&h.ideal));
        }
        for (l, c) in t.x.components.iter().enumerate() {
            if l != p.host {
                targets.push(p.ideal.sum(c));
            }
        }
    }
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut out = Vec::new();
    let avoid: Vec<&Ideal> = objects.iter().chain(targets.iter()).collect();
    let x_vars: Vec<Vec<usize>> = t.x.components.iter().map(|c| c.coordinate_vars().unwrap_or_default()).collect();
    for zeros in faces(n) {
        if !x_vars.iter().any(|v| v.iter().all(|i| zeros.contains(i))) {
            continue;
        }
        let mut push = |p: Point| {
            if t.x.components.iter().any(|c| c.vanishes_at(&p)) && seen.insert(p.clone()) {
                out.push(p);
            }
        };
        if let Some(p) = face_point(n, &zeros, &avoid) {
            push(p);
        }
        for v in &targets {
            if let Some(p) = adapted_point(n, &zeros, v, &avoid) {
                push(p);
            }
        }
    }
    out
}

fn check_input(t: &Triple) -> Result<(), PipelineError> {
    if t.mode != Mode::Arrangement {
        return Err(PipelineError::GeneralMode);
    }
    for (i, c) in t.x.components.iter().enumerate() {
        if c.coordinate_vars().is_none() {
            return Err(PipelineError::NotCoordinate(i));
        }
    }
    for (k, p) in t.d.parts.iter().enumerate() {
        let host = &t.x.components[p.host];
        let extra: Vec<_> = p.ideal.basis().iter().filter(|g| !host.contains(g)).cloned().collect();
        let ok = match extra.first() {
            None => false,
            Some(f) => host.sum(&Ideal::new(t.ring(), alloc::vec![f.clone()])) == p.ideal,
        };
        if !ok {
            return Err(PipelineError::DivisorShape(k));
        }
    }
    Ok(())
}

fn reduced(t: &Triple) -> Triple {
    t.with_divisor(t.d.reduced())
}

/// Smallest linear subspace cut out by coordinate objects through `a`.
fn lattice_element(t: &Triple, a: &[Q]) -> Option<Vec<usize>> {
    let mut vars: BTreeSet<usize> = BTreeSet::new();
    let coordinate = |i: &Ideal| i.coordinate_vars();
    for c in t.x.components.iter().filter(|c| c.vanishes_at(a)) {
        vars.extend(coordinate(c)?);
    }
    for p in t.d.parts.iter().filter(|p| p.ideal.vanishes_at(a)) {
        if let Some(v) = coordinate(&p.ideal) {
            vars.extend(v);
        }
    }
    for (_, h) in t.e.present().filter(|(_, h)| h.ideal.vanishes_at(a)) {
        vars.extend(coordinate(&h.ideal)?);
    }
    if vars.is_empty() {
        None
    } else {
        Some(vars.into_iter().collect())
    }
}

fn in_center(vars: &[usize], p: &[Q]) -> bool {
    vars.iter().all(|&v| num_traits::Zero::is_zero(&p[v]))
}

/// Full triple verdicts at the sample points of a center; `None` if some
/// point of the center is stable-snc or none was sampled.
fn evidence(t: &Triple, points: &[Point], vars: &[usize]) -> Option<Vec<(Point, Verdict)>> {
    let mut out = Vec::new();
    for p in points.iter().filter(|p| in_center(vars, p)) {
        let v = stable_snc_triple(t, p).ok()?;
        if !v.is_false() {
            return None;
        }
        out.push((p.clone(), v));
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

fn step_verdict(tag: StepTag, t: &Triple, red: &Triple, p: &[Q]) -> Verdict {
    let v = match tag {
        StepTag::MakeBoundaryStable => stable_snc_boundary(t, p),
        StepTag::NonReduced => stable_snc_triple(t, p),
        _ => stable_snc_triple(red, p),
    };
    v.unwrap_or_else(|e| Verdict::False(format!("{e}")))
}

/// Smallest lattice element of a bad point all of whose sample points are
/// bad for the step and for the full triple.
fn lattice_rule(
    tag: StepTag,
    t: &Triple,
    red: &Triple,
    points: &[Point],
    bad: &[&Point],
) -> Option<(Vec<usize>, Evidence)> {
    let mut cands: Vec<Vec<usize>> = bad.iter().filter_map(|p| lattice_element(t, p)).collect();
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cands.dedup();
    for c in cands {
        let all_bad = points.iter().filter(|p| in_center(&c, p)).all(|p| !step_verdict(tag, t, red, p).is_true());
        if !all_bad {
            continue;
        }
        if let Some(ev) = evidence(t, points, &c) {
            return Some((c, ev));
        }
    }
    None
}

fn embedded_parts(t: &Triple) -> Vec<usize> {
    (0..t.d.parts.len())
        .filter(|&k| {
            let p = &t.d.parts[k];
            t.x.components.iter().enumerate().any(|(l, c)| l != p.host && p.ideal.contains_ideal(c))
                || t.e.present().any(|(_, h)| p.ideal.contains_ideal(&h.ideal))
        })
        .collect()
}

fn embedded_rule(t: &Triple, points: &[Point]) -> Option<(Vec<usize>, Evidence)> {
    let offending = embedded_parts(t);
    if offending.is_empty() || offending.len() > 12 {
        return None;
    }
    let mut cands: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1u32 << offending.len()) {
        let sum = offending
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .fold(Ideal::zero(t.ring()), |acc, (_, &k)| acc.sum(&t.d.parts[k].ideal));
        if sum.is_unit() {
            continue;
        }
        if let Some(v) = sum.coordinate_vars() {
            cands.push(v);
        }
    }
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cands.dedup();
    cands.into_iter().find_map(|c| evidence(t, points, &c).map(|ev| (c, ev)))
}

/// Center read off the first nonunit pairwise obstruction: the non-boundary
/// part of its monomial if any, else its first boundary factor.
fn j_rule(red: &Triple, t: &Triple, points: &[Point]) -> Option<(StepTag, Vec<usize>, Evidence)> {
    let m = red.x.len();
    let bvars: Vec<usize> = red
        .e
        .present()
        .filter_map(|(_, h)| h.ideal.coordinate_vars().filter(|v| v.len() == 1).map(|v| v[0]))
        .collect();
    for j in 1..m {
        for i in 0..j {
            for (a, b) in [(i, j), (j, i)] {
                let jab = pair_obstruction(&red.x, &red.d, a, b);
                if jab.is_unit() {
                    continue;
                }
                let Some(meet) = red.x.components[a].sum(&red.x.components[b]).coordinate_vars() else {
                    continue;
                };
                let Ok(shape) = j_shape(&jab, &meet) else {
                    continue;
                };
                let mut vars = shape.linear.clone();
                let tag = match &shape.monomial {
                    None => StepTag::DesingularizeJ,
                    Some(g) => {
                        let residual: Vec<usize> = g.support().into_iter().filter(|v| !bvars.contains(v)).collect();
                        if !residual.is_empty() {
                            vars.extend(residual);
                            StepTag::DesingularizeJ
                        } else {
                            let u = bvars.iter().copied().find(|&v| g.0[v] > 0).expect("monomial has a factor");
                            vars.push(u);
                            StepTag::CleanJ
                        }
                    }
                };
                vars.sort_unstable();
                vars.dedup();
                if let Some(ev) = evidence(t, points, &vars) {
                    return Some((tag, vars, ev));
                }
            }
        }
    }
    None
}

fn iota_rule(t: &Triple, red: &Triple, points: &[Point]) -> Option<(Vec<usize>, Evidence)> {
    let bad: Vec<&Point> = points
        .iter()
        .filter(|p| !step_verdict(StepTag::NonReduced, t, red, p).is_true())
        .collect();
    let with_iota: Vec<((usize, usize), &Point)> =
        bad.iter().filter_map(|p| iota(&t.x, &t.d, p).ok().map(|i| (i, *p))).collect();
    let mut levels: Vec<(usize, usize)> = with_iota.iter().map(|(i, _)| *i).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    for level in levels {
        let at: Vec<&Point> = with_iota.iter().filter(|(i, _)| *i == level).map(|(_, p)| *p).collect();
        if let Some(r) = lattice_rule(StepTag::NonReduced, t, red, points, &at) {
            return Some(r);
        }
    }
    None
}

enum NodeAction {
    Done,
    BlowUp(StepTag, Vec<usize>, Vec<(Point, Verdict)>),
    Stuck(String),
}

fn next_center(t: &Triple, rules: &[StepTag]) -> NodeAction {
    if t.x.is_empty() {
        return NodeAction::Done;
    }
    let points = sample_points(t);
    let red = reduced(t);
    let mut stuck = None;
    for &rule in rules {
        let bad: Vec<&Point> = points.iter().filter(|p| !step_verdict(rule, t, &red, p).is_true()).collect();
        let found = match rule {
            StepTag::MakeBoundaryStable => {
                if bad.is_empty() {
                    continue;
                }
                lattice_rule(rule, t, &red, &points, &bad).map(|(c, ev)| (rule, c, ev))
            }
            StepTag::RemoveEmbeddedDivisors => {
                if embedded_parts(t).is_empty() {
                    continue;
                }
                embedded_rule(t, &points).map(|(c, ev)| (rule, c, ev))
            }
            StepTag::DesingularizeJ | StepTag::CleanJ => j_rule(&red, t, &points),
            StepTag::SeparateDivisors => {
                if bad.is_empty() {
                    continue;
                }
                lattice_rule(rule, t, &red, &points, &bad).map(|(c, ev)| (rule, c, ev))
            }
            StepTag::NonReduced => {
                if bad.is_empty() {
                    continue;
                }
                iota_rule(t, &red, &points).map(|(c, ev)| (rule, c, ev))
            }
        };
        match found {
            Some((tag, c, ev)) => return NodeAction::BlowUp(tag, c, ev),
            None if rule != StepTag::DesingularizeJ => {
                stuck.get_or_insert_with(|| format!("{} has no center free of stable-snc points", rule.label()));
                return NodeAction::Stuck(stuck.unwrap_or_default());
            }
            None => {}
        }
    }
    NodeAction::Done
}

fn leaf_verdict(t: &Triple) -> (Verdict, Option<Point>) {
    if t.x.is_empty() {
        return (Verdict::True, None);
    }
    for p in sample_points(t) {
        match stable_snc_triple(t, &p) {
            Ok(Verdict::True) => {}
            Ok(v) => return (v, Some(p)),
            Err(e) => return (Verdict::False(format!("{e}")), Some(p)),
        }
    }
    (Verdict::True, None)
}

fn hs_checks_at(node: usize, t: &Triple) -> Vec<HsCheck> {
    if t.d.is_zero() || t.x.is_empty() {
        return Vec::new();
    }
    let points = sample_points(t);
    let last = t.x.len() - 1;
    let keyed: Vec<(StratumKey, &Point)> = points
        .iter()
        .filter(|p| t.x.components[last].vanishes_at(p) && t.d.parts.iter().any(|d| d.ideal.vanishes_at(p)))
        .filter_map(|p| stratum_key(&t.x, &t.d, p).ok().map(|k| (k, p)))
        .collect();
    let keys: Vec<StratumKey> = keyed.iter().map(|(k, _)| k.clone()).collect();
    let maximal = geom::maximal_keys(&keys);
    let support = t.d.support(t.ring());
    let mut out = Vec::new();
    for key in maximal {
        let Some(&(_, p)) = keyed.iter().find(|(k, _)| *k == key) else { continue };
        let cutoff = key.e + 2;
        let equal = geom::reference_hs(&key, cutoff)
            .map(|r| hilbert::hs_window_equal(&hilbert::hs_function(&support, p, cutoff), &r));
        out.push(HsCheck { node, point: p.clone(), key, equal });
    }
    out
}

fn drive(t: &Triple, rules: &[StepTag], opts: DesingOptions) -> Result<RunCertificate, PipelineError> {
    check_input(t)?;
    let mut tree = ChartTree::new(t.clone());
    let mut steps = Vec::new();
    let mut work = alloc::vec![0usize];
    while let Some(idx) = work.pop() {
        let node = tree.nodes[idx].triple.clone();
        match next_center(&node, rules) {
            NodeAction::Done => {}
            NodeAction::Stuck(reason) => {
                return Err(PipelineError::NoCenter { path: tree.path_string(idx), reason });
            }
            NodeAction::BlowUp(tag, vars, evidence) => {
                if steps.len() >= opts.max_steps {
                    return Err(PipelineError::Budget(opts.max_steps));
                }
                let center = Ideal::coordinate(node.ring(), &vars);
                let kids = tree.blow_up(idx, &center)?;
                steps.push(StepRecord {
                    node: idx,
                    path: tree.path_string(idx),
                    year: tree.nodes[idx].year,
                    center,
                    tag,
                    evidence,
                });
                work.extend(kids.into_iter().rev());
            }
        }
    }
    let leaf_verdicts: Vec<(usize, Verdict, Option<Point>)> = tree
        .leaves()
        .into_iter()
        .map(|l| {
            let (v, w) = leaf_verdict(&tree.nodes[l].triple);
            (l, v, w)
        })
        .collect();
    let hs_checks = if opts.hs_checks {
        tree.leaves().into_iter().flat_map(|l| hs_checks_at(l, &tree.nodes[l].triple)).collect()
    } else {
        Vec::new()
    };
    let accepted = leaf_verdicts.iter().all(|(_, v, _)| v.is_true());
    Ok(RunCertificate { tree, steps, leaf_verdicts, hs_checks, accepted })
}

/// Steps 1′–4 on an arrangement-mode triple with smooth components.
pub fn desing_stable_snc(t: &Triple, opts: DesingOptions) -> Result<RunCertificate, PipelineError> {
    drive(t, &ALL_RULES, opts)
}

/// Blow up components of `D` lying in `Sing X ∪ Supp E`, smallest first.
pub fn remove_embedded_divisors(t: &Triple, opts: DesingOptions) -> Result<RunCertificate, PipelineError> {
    drive(t, &[StepTag::RemoveEmbeddedDivisors], opts)
}

/// Blow up the maximal `ι` loci that are nowhere stable-snc, assuming the
/// reduced triple is stable-snc.
pub fn nonreduced_pass(t: &Triple, opts: DesingOptions) -> Result<RunCertificate, PipelineError> {
    drive(t, &[StepTag::NonReduced], opts)
}

/// Blow-up sequence as `(chart path, center)` pairs in execution order.
pub fn blowup_sequence(cert: &RunCertificate) -> Vec<(String, Ideal)> {
    cert.steps.iter().map(|s| (s.path.clone(), s.center.clone())).collect()
}

/// Independent re-check: every chart is the transform of its parent, every
/// leaf is stable-snc at all sample points and every center's sample
/// points fail the verdict.
pub fn verify_run(cert: &RunCertificate) -> Verification {
    let tree = &cert.tree;
    for (idx, node) in tree.nodes.iter().enumerate() {
        let path = tree.path_string(idx);
        if let Some(center) = &node.center {
            let Some(vars) = center.coordinate_vars() else {
                return Verification::Rejected { reason: format!("center at {path} is not a coordinate subspace"), witness: None };
            };
            let points = sample_points(&node.triple);
            for p in points.iter().filter(|p| in_center(&vars, p)) {
                if let Ok(v) = stable_snc_triple(&node.triple, p) {
                    if !v.is_false() {
                        return Verification::Rejected {
                            reason: format!("center {center} at {path} contains a point where the triple is {}", v.label()),
                            witness: Some(p.clone()),
                        };
                    }
                }
            }
            let charts = match make_charts(node.triple.ring(), center) {
                Ok(c) => c,
                Err(e) => return Verification::Rejected { reason: format!("{e}"), witness: None },
            };
            if charts.len() != node.children.len() {
                return Verification::Rejected { reason: format!("chart count mismatch at {path}"), witness: None };
            }
            for (chart, &kid) in charts.iter().zip(node.children.iter()) {
                match transform_triple(&node.triple, chart) {
                    Ok(out) if out.triple == tree.nodes[kid].triple => {}
                    _ => {
                        return Verification::Rejected {
                            reason: format!("chart {} is not the transform of {path}", tree.path_string(kid)),
                            witness: None,
                        }
                    }
                }
            }
        } else {
            let (v, w) = leaf_verdict(&node.triple);
            if !v.is_true() {
                return Verification::Rejected {
                    reason: format!("leaf {path} is not stable-snc: {}", v.reason().unwrap_or("")),
                    witness: w,
                };
            }
        }
    }
    Verification::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Boundary, ComponentUnion, Divisor};
    use crate::poly::{q, Ring};

    fn triple(names: &[&str], x: &[&[&str]], d: &[(i64, &[&str])], e: &[&str]) -> Triple {
        let ring = Ring::new(names).unwrap();
        let x = ComponentUnion::new(&ring, x.iter().map(|c| Ideal::parse(&ring, c).unwrap()).collect()).unwrap();
        let d = Divisor::new(&x, d.iter().map(|(c, p)| (q(*c), Ideal::parse(&ring, p).unwrap())).collect()).unwrap();
        let e = Boundary::new(e.iter().map(|h| Ideal::parse(&ring, &[h]).unwrap()).collect());
        Triple::new(x, d, e, Mode::Arrangement).unwrap()
    }

    #[test]
    fn three_axes_one_blowup() {
        let t = triple(&["x", "y", "z"], &[&["x", "y"], &["y", "z"], &["x", "z"]], &[], &[]);
        let cert = desing_stable_snc(&t, DesingOptions::default()).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].center, Ideal::parse(t.ring(), &["x", "y", "z"]).unwrap());
        assert!(cert.accepted);
        assert!(verify_run(&cert).is_accepted());
    }

    #[test]
    fn stable_input_needs_nothing() {
        let t = triple(&["x", "y", "z"], &[&["x"], &["y"]], &[(1, &["x", "z"]), (1, &["y", "z"])], &[]);
        let cert = desing_stable_snc(&t, DesingOptions::default()).unwrap();
        assert!(cert.steps.is_empty());
        assert!(verify_run(&cert).is_accepted());
    }

    #[test]
    fn embedded_divisor_removed() {
        let t = triple(&["x", "y", "z"], &[&["x"]], &[(1, &["x", "y"])], &["y"]);
        let cert = remove_embedded_divisors(&t, DesingOptions::default()).unwrap();
        assert_eq!(cert.steps.len(), 1);
        for l in cert.tree.leaves() {
            assert!(cert.tree.nodes[l].triple.d.is_zero());
        }
    }

    #[test]
    fn unequal_coefficients_resolved_by_nonreduced_pass() {
        let t = triple(&["x", "y", "z"], &[&["x"], &["y"]], &[(1, &["x", "z"]), (2, &["y", "z"])], &[]);
        let cert = nonreduced_pass(&t, DesingOptions::default()).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.steps[0].center, Ideal::parse(t.ring(), &["x", "y", "z"]).unwrap());
        assert!(cert.accepted);
        assert!(verify_run(&cert).is_accepted());
    }

    #[test]
    fn worked_example_three_steps() {
        let t = triple(
            &["x1", "x2", "y", "z", "w"],
            &[&["x1"], &["x2"]],
            &[(1, &["x1", "y"]), (1, &["x2", "x1 + y*z*w"])],
            &[],
        );
        let cert = desing_stable_snc(&t, DesingOptions::default()).unwrap();
        let leaf = cert.tree.find_path(&["z-chart", "w-chart", "z-chart"]).unwrap();
        let r = t.ring();
        assert_eq!(
            cert.centers_to(leaf),
            alloc::vec![
                Ideal::parse(r, &["x1", "x2", "z", "w"]).unwrap(),
                Ideal::parse(r, &["x1", "x2", "w"]).unwrap(),
                Ideal::parse(r, &["x1", "x2", "z"]).unwrap(),
            ]
        );
        assert!(cert.tree.nodes[leaf].children.is_empty());
        assert!(cert.accepted, "{:?}", cert.leaf_verdicts);
        assert!(verify_run(&cert).is_accepted());
    }

    #[test]
    fn tampered_certificates_rejected() {
        let t = triple(&["x", "y", "z"], &[&["x", "y"], &["y", "z"], &["x", "z"]], &[], &[]);
        let mut cert = desing_stable_snc(&t, DesingOptions::default()).unwrap();
        // a leaf that was never blown up
        let mut bare = cert.clone();
        bare.tree = ChartTree::new(t.clone());
        assert!(!verify_run(&bare).is_accepted());
        // a center containing stable-snc points
        let s = triple(&["x", "y", "z"], &[&["x"], &["y"]], &[], &[]);
        let mut tree = ChartTree::new(s.clone());
        tree.blow_up(0, &Ideal::parse(s.ring(), &["x", "y"]).unwrap()).unwrap();
        cert.tree = tree;
        match verify_run(&cert) {
            Verification::Rejected { witness, .. } => assert!(witness.is_some()),
            Verification::Accepted => panic!("accepted a center through stable-snc points"),
        }
    }
}
