//! Independent cross-checks run by `snc oracle`.

use serde_json::{json, Value};
use snc_core::geom::stable_snc_variety;
use snc_core::hilbert::{hs_function, hs_value_oracle};
use snc_core::linalg::{rank, rref};
use snc_core::{Ideal, Point, Q};
use num_traits::{One, Zero};

use crate::format::SncFile;
use crate::report::point_json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Hilbert,
    Tangent,
    Ideal,
    All,
}

pub struct OracleRun {
    pub results: Vec<Value>,
    pub disagreements: usize,
}

/// Basis of the kernel of `rows` (each of length `n`).
pub fn kernel(rows: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let r = rref(rows);
    let pivots: Vec<usize> = r.iter().filter_map(|row| row.iter().position(|c| !c.is_zero())).collect();
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Transversality of affine-linear components at `a` from tangent spaces:
/// inside the span of the tangent spaces, codimensions add up.
/// `None` unless every component through `a` is cut out by linear forms.
pub fn tangent_oracle(components: &[Ideal], a: &[Q]) -> Option<bool> {
    let through: Vec<&Ideal> = components.iter().filter(|c| c.vanishes_at(a)).collect();
    if through.is_empty() || through.iter().any(|c| c.generators().iter().any(|g| g.degree().unwrap_or(0) > 1)) {
        return None;
    }
    let n = a.len();
    let tangents: Vec<Vec<Vec<Q>>> = through.iter().map(|c| kernel(&c.jacobian_at(a), n)).collect();
    let all: Vec<Vec<Q>> = tangents.iter().flatten().cloned().collect();
    let e = rank(&all);
    // The common tangent space is cut out by all normal vectors together.
    let normals: Vec<Vec<Q>> = through.iter().flat_map(|c| c.jacobian_at(a)).collect();
    let meet = n - rank(&normals);
    let sum: usize = tangents.iter().map(|t| e - rank(t)).sum();
    Some(e - meet == sum)
}

fn named_ideals(f: &SncFile) -> Vec<(String, Ideal)> {
    let mut out: Vec<(String, Ideal)> = f.components.clone();
    if let Some(d) = &f.divisor {
        for (k, (_, i)) in d.parts.iter().enumerate() {
            out.push((format!("{}[{}]", d.name, k + 1), i.clone()));
        }
    }
    if let Some(b) = &f.boundary {
        for (k, i) in b.components.iter().enumerate() {
            out.push((format!("{}[{}]", b.name, k + 1), i.clone()));
        }
    }
    out
}

fn points(f: &SncFile) -> Vec<(String, Point)> {
    if f.points.is_empty() {
        vec![("origin".into(), vec![Q::zero(); f.ring.nvars()])]
    } else {
        f.points.clone()
    }
}

pub fn run(f: &SncFile, suite: Suite, cutoff: u32) -> OracleRun {
    let mut results = Vec::new();
    let mut bad = 0;
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Hilbert) {
        let mut subjects = named_ideals(f);
        if let Some(x) = f.named_ideal("X") {
            subjects.push(("X".into(), x));
        }
        for (name, i) in &subjects {
            for (pname, p) in points(f) {
                if !i.vanishes_at(&p) {
                    continue;
                }
                let h = hs_function(i, &p, cutoff as usize);
                let oracle: Vec<u64> = (0..=cutoff).map(|k| hs_value_oracle(i, &p, k)).collect();
                let agree = h.values[..=cutoff as usize] == oracle[..];
                bad += usize::from(!agree);
                results.push(json!({ "suite": "hilbert", "subject": name, "point": pname, "values": h.values, "oracle": oracle, "agree": agree }));
            }
        }
    }
    if want(Suite::Tangent) {
        if let Ok(x) = f.component_union() {
            for (pname, p) in points(f) {
                if x.through(&p).is_empty() {
                    continue;
                }
                let Some(expected) = tangent_oracle(&x.components, &p) else {
                    results.push(json!({ "suite": "tangent", "point": pname, "skipped": "nonlinear component" }));
                    continue;
                };
                let got = stable_snc_variety(&x, &p).map(|r| r.verdict.is_true());
                let agree = got.as_ref().is_ok_and(|g| *g == expected);
                bad += usize::from(!agree);
                results.push(json!({
                    "suite": "tangent",
                    "point": pname,
                    "coordinates": point_json(&p),
                    "stable_snc_variety": got.ok(),
                    "oracle": expected,
                    "agree": agree,
                }));
            }
        }
    }
    if want(Suite::Ideal) {
        let subjects = named_ideals(f);
        for (a, i) in &subjects {
            for (b, j) in &subjects {
                let colon = i.contains_ideal(&i.colon(j).product(j));
                let meet = i.intersect(j);
                let inside = i.contains_ideal(&meet) && j.contains_ideal(&meet);
                let s = i.saturate(j);
                let idem = s.saturate(j) == s;
                let agree = colon && inside && idem;
                bad += usize::from(!agree);
                results.push(json!({
                    "suite": "ideal",
                    "subject": [a, b],
                    "colon_times_j_in_i": colon,
                    "intersection_in_both": inside,
                    "saturation_idempotent": idem,
                    "agree": agree,
                }));
            }
        }
    }
    OracleRun { results, disagreements: bad }
}

#[cfg(test)]
mod tests {
    use super::*;
    use snc_core::poly::{origin, Ring};

    #[test]
    fn kernel_of_a_plane() {
        let r = Ring::new(&["x", "y", "z"]).unwrap();
        let i = Ideal::parse(&r, &["x + y"]).unwrap();
        let k = kernel(&i.jacobian_at(&origin(3)), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((v[0].clone() + v[1].clone()).is_zero());
        }
    }

    #[test]
    fn tangent_oracle_on_axes() {
        let r = Ring::new(&["x", "y", "z"]).unwrap();
        let axes = |gs: &[&[&str]]| gs.iter().map(|g| Ideal::parse(&r, g).unwrap()).collect::<Vec<_>>();
        assert_eq!(tangent_oracle(&axes(&[&["x", "y"], &["y", "z"], &["x", "z"]]), &origin(3)), Some(false));
        assert_eq!(tangent_oracle(&axes(&[&["x", "y"], &["y", "z"]]), &origin(3)), Some(true));
        assert_eq!(tangent_oracle(&axes(&[&["x", "y^2"]]), &origin(3)), None);
    }
}
