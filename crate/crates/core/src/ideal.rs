//! Ideals of a polynomial ring with cached reduced Gröbner bases, plus the
//! local (point-wise) queries built on them.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use once_cell::race::OnceBox;

use crate::groebner::{groebner, normal_form, MonoOrder, Terms};
use crate::linalg;
use crate::poly::{Monomial, Poly, Q, Ring, RingRef};

pub struct Ideal {
    ring: RingRef,
    generators: Vec<Poly>,
    basis: OnceBox<Vec<Poly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let basis = OnceBox::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(Box::new(b.clone()));
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), basis }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Ideal equality (same ideal, not same generators).
impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.basis() == other.basis()
    }
}

impl Eq for Ideal {}

fn to_terms(p: &Poly) -> Terms {
    p.terms().to_vec()
}

fn from_deglex(ring: &RingRef, t: Terms) -> Poly {
    Poly::from_sorted(ring, t)
}

/// Reduced basis under DegLex; terms come back already in DegLex order.
fn deglex_basis(ring: &RingRef, gens: &[Poly]) -> Vec<Poly> {
    let input: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(to_terms).collect();
    groebner(&input, ring.nvars(), MonoOrder::DegLex)
        .into_iter()
        .map(|t| from_deglex(ring, t))
        .collect()
}

/// A ring with one extra trailing variable, used for elimination.
fn extended_ring(ring: &RingRef) -> RingRef {
    let mut names: Vec<alloc::string::String> = ring.names().to_vec();
    let mut t = alloc::string::String::from("_t");
    while names.contains(&t) {
        t.push('_');
    }
    names.push(t);
    Ring::new(&names).expect("fresh variable name")
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<Poly>) -> Ideal {
        for g in &generators {
            assert_eq!(g.ring().names(), ring.names(), "generator from a different ring");
        }
        Ideal { ring: ring.clone(), generators, basis: OnceBox::new() }
    }

    pub fn zero(ring: &RingRef) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Ideal {
        Ideal::new(ring, alloc::vec![Poly::one(ring)])
    }

    /// Ideal generated by the given variables.
    pub fn coordinate(ring: &RingRef, vars: &[usize]) -> Ideal {
        Ideal::new(ring, vars.iter().map(|&i| Poly::var(ring, i)).collect())
    }

    pub fn parse(ring: &RingRef, gens: &[&str]) -> Result<Ideal, crate::poly::PolyError> {
        let g = gens.iter().map(|s| Poly::parse(ring, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal::new(ring, g))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Reduced DegLex Gröbner basis, computed once.
    pub fn basis(&self) -> &[Poly] {
        self.basis.get_or_init(|| Box::new(deglex_basis(&self.ring, &self.generators)))
    }

    /// Same ideal, generated by its reduced basis.
    pub fn canonical(&self) -> Ideal {
        let b = self.basis().to_vec();
        let out = Ideal::new(&self.ring, b.clone());
        let _ = out.basis.set(Box::new(b));
        out
    }

    fn basis_terms(&self) -> Vec<Terms> {
        self.basis().iter().map(to_terms).collect()
    }

    pub fn reduce(&self, f: &Poly) -> (Poly, bool) {
        let r = normal_form(f.terms(), &self.basis_terms(), MonoOrder::DegLex);
        let member = r.is_empty();
        (from_deglex(&self.ring, r), member)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.is_unit() {
            return true;
        }
        self.reduce(f).1
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.basis().first(), Some(g) if g.is_constant())
    }

    pub fn is_zero(&self) -> bool {
        self.basis().is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a.mul(b));
            }
        }
        Ideal::new(&self.ring, g)
    }

    /// `t*I + (1-t)*J`, then eliminate `t`.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(&self.ring);
        }
        let ext = extended_ring(&self.ring);
        let n = self.ring.nvars();
        let t = Poly::var(&ext, n);
        let one_minus_t = Poly::one(&ext).sub(&t);
        let mut input: Vec<Terms> = Vec::new();
        for g in self.basis() {
            input.push(to_terms(&g.extend_to(&ext).mul(&t)));
        }
        for g in other.basis() {
            input.push(to_terms(&g.extend_to(&ext).mul(&one_minus_t)));
        }
        let gb = groebner(&input, n + 1, MonoOrder::Elim(1));
        let gens: Vec<Poly> = gb
            .into_iter()
            .filter(|p| p.iter().all(|(m, _)| m.0[n] == 0))
            .map(|p| {
                let terms: Terms = p
                    .into_iter()
                    .map(|(m, c)| (Monomial(m.0[..n].to_vec()), c))
                    .collect();
                Poly::from_terms(&self.ring, terms)
            })
            .collect();
        Ideal::new(&self.ring, gens).canonical()
    }

    pub fn intersect_all(ring: &RingRef, ideals: &[Ideal]) -> Ideal {
        let mut acc = Ideal::unit(ring);
        for i in ideals {
            acc = acc.intersect(i);
        }
        acc
    }

    /// `(I : f)` by intersecting with `(f)` and dividing.
    pub fn colon_poly(&self, f: &Poly) -> Ideal {
        if f.is_zero() || self.contains(f) {
            return Ideal::unit(&self.ring);
        }
        let inter = self.intersect(&Ideal::new(&self.ring, alloc::vec![f.clone()]));
        let gens = inter
            .generators
            .iter()
            .map(|g| g.div_exact(f).expect("elements of I ∩ (f) are divisible by f"))
            .collect();
        Ideal::new(&self.ring, gens).canonical()
    }

    pub fn colon(&self, other: &Ideal) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for g in other.basis() {
            acc = acc.intersect(&self.colon_poly(g));
            if acc == *self {
                break;
            }
        }
        acc
    }

    /// `(I : J^∞)`, iterating the colon until it stabilizes.
    pub fn saturate(&self, other: &Ideal) -> Ideal {
        let mut cur = self.canonical();
        loop {
            let next = cur.colon(other);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn saturate_poly(&self, f: &Poly) -> Ideal {
        self.saturate(&Ideal::new(&self.ring, alloc::vec![f.clone()]))
    }

    pub fn translate(&self, a: &[Q]) -> Ideal {
        Ideal::new(&self.ring, self.generators.iter().map(|g| g.translate(a)).collect())
    }

    /// Image under a substitution of variables.
    pub fn map(&self, images: &[Poly]) -> Ideal {
        let target = images[0].ring().clone();
        Ideal::new(&target, self.generators.iter().map(|g| g.substitute(images)).collect())
    }

    pub fn vanishes_at(&self, a: &[Q]) -> bool {
        self.generators.iter().all(|g| g.vanishes_at(a))
    }

    /// Some generator is nonzero at `a`, i.e. the ideal is the unit ideal
    /// of the local ring there.
    pub fn unit_at(&self, a: &[Q]) -> bool {
        !self.vanishes_at(a)
    }

    /// Rows are gradients of the generators at `a`.
    pub fn jacobian_at(&self, a: &[Q]) -> Vec<Vec<Q>> {
        point_jacobian(&self.generators, a).0
    }

    pub fn jacobian_rank_at(&self, a: &[Q]) -> usize {
        point_jacobian(&self.generators, a).1
    }

    /// Basis of the linear parts of `I` at `a` (degree-one part of `I_a + m^2`),
    /// as coefficient rows in row echelon form.
    pub fn linear_part_space(&self, a: &[Q]) -> Vec<Vec<Q>> {
        if !self.vanishes_at(a) {
            return linalg::rref(&identity(self.ring.nvars()));
        }
        linalg::rref(&self.jacobian_at(a))
    }

    /// Dimension of the Zariski tangent space at `a`.
    pub fn embedding_dim_at(&self, a: &[Q]) -> usize {
        self.ring.nvars() - self.linear_part_space(a).len()
    }

    /// Krull dimension of `R/I`, from the leading monomials of the basis.
    /// The unit ideal gets `None`.
    pub fn krull_dim(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let n = self.ring.nvars();
        let leads: Vec<Vec<usize>> =
            self.basis().iter().map(|g| g.leading().expect("nonzero").0.support()).collect();
        let mut best = 0;
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let free = leads.iter().all(|s| s.iter().any(|&i| mask & (1 << i) == 0));
            if free {
                best = size;
            }
        }
        Some(best)
    }

    /// `f ∈ I·O_a`. Global membership is tried first; otherwise `(I : f)`
    /// must contain an element not vanishing at `a`.
    pub fn local_contains(&self, f: &Poly, a: &[Q]) -> bool {
        if !self.vanishes_at(a) || self.contains(f) {
            return true;
        }
        self.colon_poly(f).unit_at(a)
    }

    pub fn local_contains_ideal(&self, other: &Ideal, a: &[Q]) -> bool {
        if !self.vanishes_at(a) {
            return true;
        }
        other.basis().iter().all(|g| self.local_contains(g, a))
    }

    pub fn local_eq(&self, other: &Ideal, a: &[Q]) -> bool {
        self.local_contains_ideal(other, a) && other.local_contains_ideal(self, a)
    }

    /// Generators whose gradients at `a` are independent and span the
    /// linear part.
    pub fn regular_subsystem(&self, a: &[Q]) -> Vec<Poly> {
        let gens: Vec<Poly> = self.basis().to_vec();
        let rows: Vec<Vec<Q>> = gens.iter().map(|g| g.gradient_at(a)).collect();
        linalg::independent_rows(&rows).into_iter().map(|i| gens[i].clone()).collect()
    }

    /// Whether `V(I)` is smooth at `a`: `I` agrees locally with the ideal of
    /// the generators having independent differentials there. The empty germ
    /// counts as smooth.
    pub fn is_smooth_at(&self, a: &[Q]) -> bool {
        if !self.vanishes_at(a) {
            return true;
        }
        let sub = self.regular_subsystem(a);
        let l = Ideal::new(&self.ring, sub);
        l.local_contains_ideal(self, a)
    }

    /// Local dimension at `a`: exact when smooth there, otherwise the global
    /// Krull dimension, which bounds it from above.
    pub fn local_dim_at(&self, a: &[Q]) -> Option<usize> {
        if !self.vanishes_at(a) {
            return None;
        }
        if self.is_smooth_at(a) {
            Some(self.ring.nvars() - self.jacobian_rank_at(a))
        } else {
            self.krull_dim()
        }
    }

    /// Generated by monomials (as witnessed by the reduced basis).
    pub fn is_monomial(&self) -> bool {
        self.basis().iter().all(|g| g.is_monomial())
    }

    /// Generated by variables.
    pub fn coordinate_vars(&self) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        for g in self.basis() {
            if g.is_monomial() && g.degree() == Some(1) {
                out.push(g.variables()[0]);
            } else {
                return None;
            }
        }
        out.sort_unstable();
        Some(out)
    }
}

fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Jacobian matrix of `gens` at `a` and its exact rank.
pub fn point_jacobian(gens: &[Poly], a: &[Q]) -> (Vec<Vec<Q>>, usize) {
    let m: Vec<Vec<Q>> = gens.iter().map(|g| g.gradient_at(a)).collect();
    let r = linalg::rank(&m);
    (m, r)
}

/// Polynomial map between rings: one image per source variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub source: RingRef,
    pub images: Vec<Poly>,
}

impl RingMap {
    pub fn identity(ring: &RingRef) -> RingMap {
        RingMap { source: ring.clone(), images: (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect() }
    }

    pub fn target(&self) -> &RingRef {
        self.images[0].ring()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        f.substitute(&self.images)
    }

    pub fn apply_ideal(&self, i: &Ideal) -> Ideal {
        i.map(&self.images)
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &RingMap) -> RingMap {
        RingMap { source: self.source.clone(), images: self.images.iter().map(|p| other.apply(p)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn r(names: &[&str]) -> RingRef {
        Ring::new(names).unwrap()
    }

    #[test]
    fn basis_examples() {
        let ring = r(&["x", "y"]);
        let i = Ideal::parse(&ring, &["x + y", "y"]).unwrap();
        assert_eq!(i.basis(), Ideal::parse(&ring, &["x", "y"]).unwrap().basis());
        let j = Ideal::parse(&ring, &["x*y", "y^2"]).unwrap();
        assert_eq!(alloc::format!("{:?}", j.canonical()), "(y^2, x*y)");
    }

    #[test]
    fn intersection_of_smooth_surfaces() {
        let ring = r(&["x", "y", "z", "w"]);
        let a = Ideal::parse(&ring, &["x", "y"]).unwrap();
        let b = Ideal::parse(&ring, &["x + w^2", "y + w*z"]).unwrap();
        let i = a.intersect(&b);
        let expected = Ideal::parse(&ring, &["x^2 + x*w^2", "x*y + y*w^2", "y^2 + y*w*z", "y*w - x*z"]).unwrap();
        assert_eq!(i, expected);
        let f = Poly::parse(&ring, "y*w - x*z").unwrap();
        assert_eq!(i.reduce(&f), (Poly::zero(&ring), true));
        assert!(i.linear_part_space(&crate::poly::origin(4)).is_empty());
    }

    #[test]
    fn colon_and_saturation() {
        let ring = r(&["x", "y"]);
        let xy = Ideal::parse(&ring, &["x*y"]).unwrap();
        let y = Ideal::parse(&ring, &["y"]).unwrap();
        assert_eq!(xy.colon(&y), Ideal::parse(&ring, &["x"]).unwrap());
        let x2y = Ideal::parse(&ring, &["x^2*y"]).unwrap();
        assert_eq!(x2y.saturate(&y), Ideal::parse(&ring, &["x^2"]).unwrap());
    }

    #[test]
    fn worked_example_factor() {
        let ring = r(&["x1", "x2", "y", "z", "w"]);
        let a = Ideal::parse(&ring, &["x1", "x2", "y*z*w"]).unwrap();
        let b = Ideal::parse(&ring, &["x1", "x2", "y"]).unwrap();
        assert_eq!(a.colon(&b), Ideal::parse(&ring, &["x1", "x2", "z*w"]).unwrap());
        assert!(b.colon(&a).is_unit());
    }

    #[test]
    fn jacobian_and_smoothness() {
        let ring = r(&["x", "y", "z", "t", "u"]);
        let i = Ideal::parse(&ring, &["x + u*z", "y + u*t"]).unwrap();
        let p = alloc::vec![q(0), q(0), q(0), q(0), q(1)];
        assert_eq!(i.jacobian_rank_at(&p), 2);
        assert!(i.is_smooth_at(&p));
        let s = i.sum(&Ideal::parse(&ring, &["x", "y"]).unwrap());
        assert_eq!(s, Ideal::parse(&ring, &["x", "y", "u*z", "u*t"]).unwrap());
        assert!(s.is_smooth_at(&p));
        assert!(!s.is_smooth_at(&crate::poly::origin(5)));
        assert_eq!(s.local_dim_at(&p), Some(1));
    }

    #[test]
    fn local_membership() {
        let ring = r(&["x", "y"]);
        // (x*(1+y)) and (x) agree near the origin, not near y = -1
        let a = Ideal::parse(&ring, &["x + x*y"]).unwrap();
        let b = Ideal::parse(&ring, &["x"]).unwrap();
        assert!(a.local_eq(&b, &[q(0), q(0)]));
        assert!(!a.local_eq(&b, &[q(0), q(-1)]));
    }

    #[test]
    fn krull_dimension() {
        let ring = r(&["x", "y", "z"]);
        assert_eq!(Ideal::parse(&ring, &["x*y", "y*z", "x*z"]).unwrap().krull_dim(), Some(1));
        assert_eq!(Ideal::parse(&ring, &["x"]).unwrap().krull_dim(), Some(2));
        assert_eq!(Ideal::unit(&ring).krull_dim(), None);
    }
}
