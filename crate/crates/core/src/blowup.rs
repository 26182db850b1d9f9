//! Blow-ups along coordinate subspaces, chart by chart.
//!
//! Each chart reuses the variable names of the ambient ring: in the chart of
//! pivot `x_p` the center variables `x_i` (`i ≠ p`) are replaced by
//! `x_p·x_i` and `x_p` cuts out the exceptional divisor.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::geom::{Boundary, BoundaryComponent, ComponentUnion, Divisor, DivisorPart, Mode, Triple};
use crate::ideal::{Ideal, RingMap};
use crate::poly::{Poly, RingRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("center {0} is not a coordinate subspace of the frame")]
    NotCoordinate(String),
    #[error("center is the unit ideal")]
    EmptyCenter,
    #[error("center is not admissible: {0}")]
    Inadmissible(String),
    #[error("admissibility is only decided in arrangement mode")]
    GeneralMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupChart {
    pub center: Ideal,
    pub center_vars: Vec<usize>,
    pub pivot: usize,
    pub map: RingMap,
    pub exceptional: Poly,
}

impl BlowupChart {
    /// `"w-chart"` style label.
    pub fn label(&self) -> String {
        format!("{}-chart", self.map.source.name(self.pivot))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Total,
    Strict,
}

/// One chart per center variable, in variable order.
pub fn make_charts(ring: &RingRef, center: &Ideal) -> Result<Vec<BlowupChart>, BlowupError> {
    if center.is_unit() {
        return Err(BlowupError::EmptyCenter);
    }
    let vars = center.coordinate_vars().ok_or_else(|| BlowupError::NotCoordinate(format!("{center}")))?;
    if vars.is_empty() {
        return Err(BlowupError::NotCoordinate(format!("{center}")));
    }
    Ok(vars
        .iter()
        .map(|&p| {
            let images = (0..ring.nvars())
                .map(|i| {
                    if i != p && vars.contains(&i) {
                        Poly::var(ring, p).mul(&Poly::var(ring, i))
                    } else {
                        Poly::var(ring, i)
                    }
                })
                .collect();
            BlowupChart {
                center: center.clone(),
                center_vars: vars.clone(),
                pivot: p,
                map: RingMap { source: ring.clone(), images },
                exceptional: Poly::var(ring, p),
            }
        })
        .collect())
}

pub fn transform_ideal(i: &Ideal, chart: &BlowupChart, kind: TransformKind) -> Ideal {
    let total = chart.map.apply_ideal(i);
    match kind {
        TransformKind::Total => total,
        TransformKind::Strict => total.saturate_poly(&chart.exceptional).canonical(),
    }
}

/// Largest `k` with `f ∈ I_C^k`, for a coordinate center: the minimal
/// total degree in the center variables over the terms of `f`.
pub fn order_along(f: &Poly, center_vars: &[usize]) -> u32 {
    f.terms().iter().map(|(m, _)| center_vars.iter().map(|&v| m.0[v]).sum()).min().unwrap_or(0)
}

/// What happened to an object under a blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformEvent {
    /// Component of `X` with empty strict transform in the chart.
    ComponentConsumed(usize),
    /// Divisor part with empty strict transform (or whose host vanished).
    DivisorPartRemoved(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedTriple {
    pub triple: Triple,
    pub events: Vec<TransformEvent>,
    /// New index of each old component, `None` when consumed.
    pub component_map: Vec<Option<usize>>,
}

/// Strict transforms of `X`, `D`, `E`, with the exceptional divisor appended
/// to `E` last.
pub fn transform_triple(t: &Triple, chart: &BlowupChart) -> Result<TransformedTriple, BlowupError> {
    if t.mode == Mode::Arrangement && !check_admissible(&chart.center, t)? {
        return Err(BlowupError::Inadmissible(format!("{}", chart.center)));
    }
    let ring = t.ring().clone();
    let mut events = Vec::new();
    let mut comps = Vec::new();
    let mut component_map = Vec::with_capacity(t.x.len());
    for (i, c) in t.x.components.iter().enumerate() {
        let s = transform_ideal(c, chart, TransformKind::Strict);
        if s.is_unit() {
            events.push(TransformEvent::ComponentConsumed(i));
            component_map.push(None);
        } else {
            component_map.push(Some(comps.len()));
            comps.push(s);
        }
    }
    let mut parts = Vec::new();
    for (k, p) in t.d.parts.iter().enumerate() {
        let s = transform_ideal(&p.ideal, chart, TransformKind::Strict);
        match component_map[p.host] {
            Some(host) if !s.is_unit() => {
                parts.push(DivisorPart { coefficient: p.coefficient.clone(), ideal: s, host })
            }
            _ => events.push(TransformEvent::DivisorPartRemoved(k)),
        }
    }
    let mut e: Vec<BoundaryComponent> = t
        .e
        .components
        .iter()
        .map(|h| BoundaryComponent {
            ideal: transform_ideal(&h.ideal, chart, TransformKind::Strict),
            coefficient: h.coefficient.clone(),
        })
        .collect();
    e.push(BoundaryComponent { ideal: Ideal::new(&ring, alloc::vec![chart.exceptional.clone()]), coefficient: One::one() });
    let triple = Triple {
        x: ComponentUnion { ring: ring.clone(), components: comps },
        d: Divisor { parts },
        e: Boundary { components: e },
        frame: t.frame.then(&chart.map),
        mode: t.mode,
    };
    Ok(TransformedTriple { triple, events, component_map })
}

/// Pair transform: strict transform of `D` plus the exceptional divisor
/// restricted to each surviving component that meets it.
pub fn transform_pair(x: &ComponentUnion, d: &Divisor, chart: &BlowupChart) -> (ComponentUnion, Divisor) {
    let t = Triple { x: x.clone(), d: d.clone(), e: Boundary::default(), frame: RingMap::identity(&x.ring), mode: Mode::General };
    let out = transform_triple(&t, chart).expect("general mode skips admissibility");
    let mut triple = out.triple;
    let exc = Ideal::new(&x.ring, alloc::vec![chart.exceptional.clone()]);
    for (i, c) in triple.x.components.iter().enumerate() {
        let part = c.sum(&exc).canonical();
        if !part.is_unit() && !c.contains_ideal(&exc) {
            triple.d.parts.push(DivisorPart { coefficient: One::one(), ideal: part, host: i });
        }
    }
    (triple.x, triple.d)
}

/// A triple together with an extra subvariety `Y` that is carried along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourTuple {
    pub triple: Triple,
    pub y: Vec<Ideal>,
}

pub fn transform_four_tuple(f: &FourTuple, chart: &BlowupChart) -> Result<FourTuple, BlowupError> {
    let t = transform_triple(&f.triple, chart)?;
    let y = f
        .y
        .iter()
        .map(|i| transform_ideal(i, chart, TransformKind::Strict))
        .filter(|i| !i.is_unit())
        .collect();
    Ok(FourTuple { triple: t.triple, y })
}

/// Center, every boundary component and every component of `X` are
/// coordinate subspaces at once.
pub fn check_admissible(center: &Ideal, t: &Triple) -> Result<bool, BlowupError> {
    if t.mode != Mode::Arrangement {
        return Err(BlowupError::GeneralMode);
    }
    if center.coordinate_vars().is_none() {
        return Ok(false);
    }
    let e_ok = t.e.components.iter().all(|h| h.ideal.is_unit() || h.ideal.coordinate_vars().is_some());
    let x_ok = t.x.components.iter().all(|c| c.coordinate_vars().is_some());
    Ok(e_ok && x_ok)
}

/// Node of a chart tree; the root has no parent and no chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartNode {
    pub year: usize,
    pub parent: Option<usize>,
    pub chart: Option<BlowupChart>,
    /// Center blown up at this node, if any; children refer back to it.
    pub center: Option<Ideal>,
    pub triple: Triple,
    pub events: Vec<TransformEvent>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartTree {
    pub nodes: Vec<ChartNode>,
}

impl ChartTree {
    pub fn new(root: Triple) -> ChartTree {
        ChartTree {
            nodes: alloc::vec![ChartNode {
                year: 0,
                parent: None,
                chart: None,
                center: None,
                triple: root,
                events: Vec::new(),
                children: Vec::new(),
            }],
        }
    }

    /// Blow up `center` at node `idx`; returns the indices of the children.
    pub fn blow_up(&mut self, idx: usize, center: &Ideal) -> Result<Vec<usize>, BlowupError> {
        let t = self.nodes[idx].triple.clone();
        let charts = make_charts(t.ring(), center)?;
        let mut kids = Vec::with_capacity(charts.len());
        for chart in charts {
            let out = transform_triple(&t, &chart)?;
            let year = self.nodes[idx].year + 1;
            self.nodes.push(ChartNode {
                year,
                parent: Some(idx),
                chart: Some(chart),
                center: None,
                triple: out.triple,
                events: out.events,
                children: Vec::new(),
            });
            kids.push(self.nodes.len() - 1);
        }
        self.nodes[idx].center = Some(center.clone());
        self.nodes[idx].children = kids.clone();
        Ok(kids)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty()).collect()
    }

    /// Chart labels from the root, e.g. `["w-chart", "z-chart"]`.
    pub fn path(&self, mut idx: usize) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(p) = self.nodes[idx].parent {
            out.push(self.nodes[idx].chart.as_ref().map(|c| c.label()).unwrap_or_default());
            idx = p;
        }
        out.reverse();
        out
    }

    pub fn path_string(&self, idx: usize) -> String {
        let p = self.path(idx);
        if p.is_empty() {
            String::from("root")
        } else {
            p.join("/")
        }
    }

    /// Node reached from the root by following chart labels.
    pub fn find_path(&self, labels: &[&str]) -> Option<usize> {
        let mut idx = 0;
        for l in labels {
            idx = *self.nodes[idx]
                .children
                .iter()
                .find(|&&c| self.nodes[c].chart.as_ref().map(|ch| ch.label()).as_deref() == Some(*l))?;
        }
        Some(idx)
    }

    /// Centers blown up along the path to `idx`, oldest first.
    pub fn centers_to(&self, mut idx: usize) -> Vec<Ideal> {
        let mut out = Vec::new();
        while let Some(p) = self.nodes[idx].parent {
            out.push(self.nodes[p].center.clone().expect("parent of a chart has a center"));
            idx = p;
        }
        out.reverse();
        out
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.year).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{stable_snc_triple, Boundary, Divisor};
    use crate::poly::{origin, q, Ring};

    #[test]
    fn charts_of_a_point_in_the_plane() {
        let ring = Ring::new(&["x", "y"]).unwrap();
        let c = Ideal::parse(&ring, &["x", "y"]).unwrap();
        let charts = make_charts(&ring, &c).unwrap();
        assert_eq!(charts.len(), 2);
        assert_eq!(charts[0].label(), "x-chart");
        assert_eq!(format!("{}", charts[0].map.images[1]), "x*y");
        assert_eq!(format!("{}", charts[1].map.images[0]), "x*y");
        let i = Ideal::parse(&ring, &["y"]).unwrap();
        assert_eq!(transform_ideal(&i, &charts[0], TransformKind::Total), Ideal::parse(&ring, &["x*y"]).unwrap());
        assert_eq!(transform_ideal(&i, &charts[0], TransformKind::Strict), i);
        let cusp = Ideal::parse(&ring, &["x^2 + y^3"]).unwrap();
        assert_eq!(
            transform_ideal(&cusp, &charts[0], TransformKind::Strict),
            Ideal::parse(&ring, &["1 + x*y^3"]).unwrap()
        );
    }

    #[test]
    fn non_coordinate_center_rejected() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let c = Ideal::parse(&ring, &["x + y^2", "z"]).unwrap();
        assert!(make_charts(&ring, &c).is_err());
    }

    #[test]
    fn counterexample_w_chart() {
        let ring = Ring::new(&["w", "x", "y", "z"]).unwrap();
        let x = ComponentUnion::new(
            &ring,
            alloc::vec![
                Ideal::parse(&ring, &["z", "x"]).unwrap(),
                Ideal::parse(&ring, &["z", "y"]).unwrap(),
                Ideal::parse(&ring, &["z + x*w", "x + y"]).unwrap(),
            ],
        )
        .unwrap();
        let t = Triple::new(x.clone(), Divisor::default(), Boundary::default(), Mode::General).unwrap();
        let c = Ideal::parse(&ring, &["w", "x", "y", "z"]).unwrap();
        let chart = make_charts(&ring, &c).unwrap().into_iter().find(|c| c.label() == "w-chart").unwrap();
        let out = transform_triple(&t, &chart).unwrap().triple;
        assert_eq!(out.x.components, x.components);
        assert_eq!(out.e.components.last().unwrap().ideal, Ideal::parse(&ring, &["w"]).unwrap());
        assert!(stable_snc_triple(&out, &origin(4)).unwrap().is_false());
    }

    #[test]
    fn worked_example_first_blowup() {
        let ring = Ring::new(&["x1", "x2", "y", "z", "w"]).unwrap();
        let x = ComponentUnion::new(&ring, alloc::vec![Ideal::parse(&ring, &["x1"]).unwrap(), Ideal::parse(&ring, &["x2"]).unwrap()])
            .unwrap();
        let d = Divisor::new(
            &x,
            alloc::vec![
                (q(1), Ideal::parse(&ring, &["x1", "y"]).unwrap()),
                (q(1), Ideal::parse(&ring, &["x2", "x1 + y*z*w"]).unwrap()),
            ],
        )
        .unwrap();
        let t = Triple::new(x, d, Boundary::default(), Mode::Arrangement).unwrap();
        let mut tree = ChartTree::new(t);
        let kids = tree.blow_up(0, &Ideal::parse(&ring, &["x1", "x2", "z", "w"]).unwrap()).unwrap();
        assert_eq!(kids.len(), 4);
        let zc = tree.find_path(&["z-chart"]).unwrap();
        let n = &tree.nodes[zc].triple;
        assert_eq!(n.x.len(), 2);
        assert_eq!(n.d.parts[1].ideal, Ideal::parse(&ring, &["x2", "x1 + y*z*w"]).unwrap());
        assert_eq!(n.e.len(), 1);
        // in the x1-chart the first component is consumed
        let x1c = tree.find_path(&["x1-chart"]).unwrap();
        assert_eq!(tree.nodes[x1c].events[0], TransformEvent::ComponentConsumed(0));
        assert_eq!(tree.path_string(zc), "z-chart");
    }

    #[test]
    fn boundary_order_keeps_exceptional_last() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = ComponentUnion::new(&ring, alloc::vec![Ideal::parse(&ring, &["z"]).unwrap()]).unwrap();
        let e = Boundary::new(alloc::vec![Ideal::parse(&ring, &["x"]).unwrap()]);
        let t = Triple::new(x, Divisor::default(), e, Mode::Arrangement).unwrap();
        let chart = make_charts(&ring, &Ideal::parse(&ring, &["x", "y"]).unwrap()).unwrap().remove(1);
        let out = transform_triple(&t, &chart).unwrap().triple;
        assert_eq!(out.e.len(), 2);
        assert_eq!(out.e.components[0].ideal, Ideal::parse(&ring, &["x"]).unwrap());
        assert_eq!(out.e.components[1].ideal, Ideal::parse(&ring, &["y"]).unwrap());
    }

    #[test]
    fn divisor_on_center_disappears() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let x = ComponentUnion::new(&ring, alloc::vec![Ideal::parse(&ring, &["x"]).unwrap()]).unwrap();
        let d = Divisor::new(&x, alloc::vec![(q(1), Ideal::parse(&ring, &["x", "y"]).unwrap())]).unwrap();
        let t = Triple::new(x, d, Boundary::default(), Mode::Arrangement).unwrap();
        for chart in make_charts(&ring, &Ideal::parse(&ring, &["x", "y"]).unwrap()).unwrap() {
            let out = transform_triple(&t, &chart).unwrap();
            assert!(out.triple.d.is_zero());
        }
    }
}
