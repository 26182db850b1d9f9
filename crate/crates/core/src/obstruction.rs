//! The obstruction ideal `J(X,D) = ⋂_{i≠j} [I_{D_i}+I_{X^(j)} : I_{D_j}+I_{X^(i)}]`
//! and the blow-ups that make it the unit ideal.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::blowup::{BlowupError, ChartTree};
use crate::geom::{ComponentUnion, Divisor, Mode, Triple};
use crate::ideal::Ideal;
use crate::poly::{Monomial, RingRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("divisor part {part} lies in component {other} as well as its host")]
    DivisorInSingX { part: usize, other: usize },
    #[error("obstruction ideal {0} is not of the form (coordinates) + (monomial)")]
    NotMonomial(String),
    #[error("factor {0} of the obstruction monomial is not a boundary component")]
    NotBoundary(String),
    #[error("cleaning needs arrangement mode")]
    GeneralMode,
    #[error("no termination within {0} blow-ups")]
    StepBound(usize),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// `[I_{D_i}+I_{X^(j)} : I_{D_j}+I_{X^(i)}]`, where `D_i` is the support of
/// the parts hosted on `X^(i)` (the unit ideal if there are none).
pub fn pair_obstruction(x: &ComponentUnion, d: &Divisor, i: usize, j: usize) -> Ideal {
    let ring = &x.ring;
    let di = support_or_unit(ring, d, i);
    let dj = support_or_unit(ring, d, j);
    di.sum(&x.components[j]).colon(&dj.sum(&x.components[i])).canonical()
}

fn support_or_unit(ring: &RingRef, d: &Divisor, i: usize) -> Ideal {
    if d.parts.iter().any(|p| p.host == i) {
        d.support_on(ring, i)
    } else {
        Ideal::unit(ring)
    }
}

fn check_parts(x: &ComponentUnion, d: &Divisor) -> Result<(), ObstructionError> {
    for (k, p) in d.parts.iter().enumerate() {
        for (l, c) in x.components.iter().enumerate() {
            if l != p.host && p.ideal.contains_ideal(c) {
                return Err(ObstructionError::DivisorInSingX { part: k, other: l });
            }
        }
    }
    Ok(())
}

pub fn obstruction_ideal(x: &ComponentUnion, d: &Divisor) -> Result<Ideal, ObstructionError> {
    check_parts(x, d)?;
    let m = x.len();
    let mut out = Ideal::unit(&x.ring);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                out = out.intersect(&pair_obstruction(x, d, i, j));
            }
        }
    }
    Ok(out.canonical())
}

/// Shape `(x_L) + (g)` of a pairwise obstruction ideal, where `x_L` are
/// coordinates of `X^(i) ∩ X^(j)` and `g` is a monomial in the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JShape {
    pub linear: Vec<usize>,
    pub monomial: Option<Monomial>,
}

pub fn j_shape(j: &Ideal, intersection_vars: &[usize]) -> Result<JShape, ObstructionError> {
    let mut linear = Vec::new();
    let mut monomial = None;
    for g in j.basis() {
        if !g.is_monomial() {
            return Err(ObstructionError::NotMonomial(format!("{j}")));
        }
        let m = g.terms()[0].0.clone();
        if m.degree() == 1 && intersection_vars.contains(&m.support()[0]) {
            linear.push(m.support()[0]);
        } else if monomial.replace(m).is_some() {
            return Err(ObstructionError::NotMonomial(format!("{j}")));
        }
    }
    linear.sort_unstable();
    Ok(JShape { linear, monomial })
}

/// Variables cutting out the present boundary hyperplanes, in boundary order.
fn boundary_vars(t: &Triple) -> Vec<(usize, usize)> {
    t.e.present()
        .filter_map(|(k, h)| match h.ideal.coordinate_vars() {
            Some(v) if v.len() == 1 => Some((k, v[0])),
            _ => None,
        })
        .collect()
}

/// Indices `(i, j)` of two components of `X`.
pub type ComponentPair = (usize, usize);

/// Centers `X^(i) ∩ X^(j) ∩ (u = 0)`, one per boundary factor `u` of the
/// monomial part of a nonunit pairwise obstruction, in boundary order.
pub fn vj_components(t: &Triple) -> Result<Vec<(ComponentPair, Ideal)>, ObstructionError> {
    check_parts(&t.x, &t.d)?;
    let bvars = boundary_vars(t);
    let ring = t.ring();
    let mut out = Vec::new();
    let m = t.x.len();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let jij = pair_obstruction(&t.x, &t.d, i, j);
            if jij.is_unit() {
                continue;
            }
            let meet = t.x.components[i].sum(&t.x.components[j]);
            let vars = meet.coordinate_vars().ok_or_else(|| ObstructionError::NotMonomial(format!("{jij}")))?;
            let shape = j_shape(&jij, &vars)?;
            let Some(g) = shape.monomial else {
                continue;
            };
            for v in g.support() {
                if !bvars.iter().any(|&(_, bv)| bv == v) {
                    return Err(ObstructionError::NotBoundary(String::from(ring.name(v))));
                }
            }
            for &(_, bv) in &bvars {
                if g.0[bv] > 0 {
                    let mut vars = shape.linear.clone();
                    vars.push(bv);
                    vars.sort_unstable();
                    let c = Ideal::coordinate(ring, &vars);
                    if !out.iter().any(|(_, o)| *o == c) {
                        out.push(((i, j), c));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Blow up the first `vJ` center in every chart until the obstruction
/// ideal is the unit ideal. The bound caps the total number of blow-ups.
pub fn j_cleaning(t: &Triple, bound: usize) -> Result<ChartTree, ObstructionError> {
    if t.mode != Mode::Arrangement {
        return Err(ObstructionError::GeneralMode);
    }
    let mut tree = ChartTree::new(t.clone());
    let mut work = alloc::vec![0usize];
    let mut steps = 0;
    while let Some(idx) = work.pop() {
        let node = &tree.nodes[idx].triple;
        if node.x.is_empty() || obstruction_ideal(&node.x, &node.d)?.is_unit() {
            continue;
        }
        let centers = vj_components(node)?;
        let Some((_, c)) = centers.into_iter().next() else {
            continue;
        };
        steps += 1;
        if steps > bound {
            return Err(ObstructionError::StepBound(bound));
        }
        let kids = tree.blow_up(idx, &c)?;
        work.extend(kids.into_iter().rev());
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Boundary;
    use crate::poly::{q, Ring};

    fn example(ring: &RingRef, d2: &str, e: &[&str]) -> Triple {
        let x = ComponentUnion::new(ring, alloc::vec![Ideal::parse(ring, &["x1"]).unwrap(), Ideal::parse(ring, &["x2"]).unwrap()])
            .unwrap();
        let d = Divisor::new(
            &x,
            alloc::vec![
                (q(1), Ideal::parse(ring, &["x1", "y"]).unwrap()),
                (q(1), Ideal::parse(ring, &["x2", d2]).unwrap()),
            ],
        )
        .unwrap();
        let e = Boundary::new(e.iter().map(|h| Ideal::parse(ring, &[h]).unwrap()).collect());
        Triple::new(x, d, e, Mode::Arrangement).unwrap()
    }

    #[test]
    fn worked_example_obstruction() {
        let ring = Ring::new(&["x1", "x2", "y", "z", "w"]).unwrap();
        let t = example(&ring, "x1 + y*z*w", &[]);
        assert_eq!(obstruction_ideal(&t.x, &t.d).unwrap(), Ideal::parse(&ring, &["x1", "x2", "z*w"]).unwrap());
        let t2 = example(&ring, "x1 + y*z", &["z", "w"]);
        assert_eq!(obstruction_ideal(&t2.x, &t2.d).unwrap(), Ideal::parse(&ring, &["x1", "x2", "z"]).unwrap());
        let v = vj_components(&t2).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].1, Ideal::parse(&ring, &["x1", "x2", "z"]).unwrap());
        let tree = j_cleaning(&t2, 8).unwrap();
        let leaf = tree.find_path(&["z-chart"]).unwrap();
        let n = &tree.nodes[leaf].triple;
        assert!(obstruction_ideal(&n.x, &n.d).unwrap().is_unit());
    }

    #[test]
    fn two_factors_give_two_centers() {
        let ring = Ring::new(&["x1", "x2", "y", "u1", "u2"]).unwrap();
        let t = example(&ring, "x1 + y*u1*u2", &["u1", "u2"]);
        let v = vj_components(&t).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].1, Ideal::parse(&ring, &["x1", "x2", "u1"]).unwrap());
        assert_eq!(v[1].1, Ideal::parse(&ring, &["x1", "x2", "u2"]).unwrap());
        let tree = j_cleaning(&t, 16).unwrap();
        for l in tree.leaves() {
            let n = &tree.nodes[l].triple;
            assert!(obstruction_ideal(&n.x, &n.d).unwrap().is_unit());
        }
        assert_eq!(tree.depth(), 2);
    }

    #[test]
    fn unit_obstruction_needs_nothing() {
        let ring = Ring::new(&["x1", "x2", "y"]).unwrap();
        let t = example(&ring, "y", &[]);
        assert!(obstruction_ideal(&t.x, &t.d).unwrap().is_unit());
        assert!(vj_components(&t).unwrap().is_empty());
        assert_eq!(j_cleaning(&t, 4).unwrap().nodes.len(), 1);
    }
}
