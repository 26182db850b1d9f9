//! Deterministic sample points: one interior point per coordinate face, and
//! points adapted to divisor components that cut a face.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ideal::Ideal;
use crate::poly::{Poly, Point, Q};

/// All subsets of `0..n`, by size then lexicographically.
pub fn faces(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..(1u32 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn restrict(p: &Poly, zeros: &[usize]) -> Poly {
    let ring = p.ring().clone();
    let images: Vec<Poly> = (0..ring.nvars())
        .map(|i| if zeros.contains(&i) { Poly::zero(&ring) } else { Poly::var(&ring, i) })
        .collect();
    p.substitute(&images)
}

/// The face `{x_i = 0 : i ∈ zeros}` lies in `V(I)`.
pub fn face_in(i: &Ideal, zeros: &[usize]) -> bool {
    i.generators().iter().all(|g| restrict(g, zeros).is_zero())
}

/// Integer tuples with entries in `1..`, ordered by maximum entry then
/// lexicographically; capped to keep searches finite.
fn candidates(len: usize, cap: usize) -> Vec<Vec<i64>> {
    if len == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    for bound in 1..=12i64 {
        let mut cur = alloc::vec![1i64; len];
        'odometer: loop {
            if cur.contains(&bound) {
                out.push(cur.clone());
                if out.len() >= cap {
                    return out;
                }
            }
            let mut k = len;
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                if cur[k] < bound {
                    cur[k] += 1;
                    for c in cur.iter_mut().skip(k + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }
    out
}

fn fill(n: usize, zeros: &[usize], vals: &[i64]) -> Point {
    let mut p = alloc::vec![Q::zero(); n];
    let mut it = vals.iter();
    for (i, c) in p.iter_mut().enumerate() {
        if !zeros.contains(&i) {
            *c = Q::from_integer(BigInt::from(*it.next().expect("enough values")));
        }
    }
    p
}

fn avoids(p: &[Q], avoid: &[&Ideal]) -> bool {
    avoid.iter().all(|i| i.unit_at(p))
}

/// Smallest positive integer point of the open face off every listed
/// variety that does not contain the whole face.
pub fn face_point(n: usize, zeros: &[usize], avoid: &[&Ideal]) -> Option<Point> {
    let relevant: Vec<&Ideal> = avoid.iter().copied().filter(|i| !face_in(i, zeros)).collect();
    let free = n - zeros.len();
    candidates(free, 50_000).into_iter().map(|v| fill(n, zeros, &v)).find(|p| avoids(p, &relevant))
}

/// A point of `V(I)` inside the open face, found by solving one generator
/// that is linear in some free variable. Varieties containing
/// `V(I) ∩ face` are not avoided.
pub fn adapted_point(n: usize, zeros: &[usize], i: &Ideal, avoid: &[&Ideal]) -> Option<Point> {
    if face_in(i, zeros) {
        return None;
    }
    let gens: Vec<Poly> = i.generators().iter().map(|g| restrict(g, zeros)).filter(|g| !g.is_zero()).collect();
    // a monomial never vanishes on the open face
    if gens.iter().any(|g| g.is_monomial()) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|v| !zeros.contains(v)).collect();
    // built on first use: whether each avoided variety contains V(I) ∩ face
    let mut local: Option<Ideal> = None;
    let mut contains: Vec<Option<bool>> = alloc::vec![None; avoid.len()];
    for g in &gens {
        for &v in &free {
            if !g.variables().contains(&v) || !g.terms().iter().all(|(m, _)| m.0[v] <= 1) {
                continue;
            }
            let a_part = g.derivative(v);
            // g = A*v + B; with B = 0 the only root is v = 0
            if g.sub(&a_part.mul(&Poly::var(g.ring(), v))).is_zero() {
                continue;
            }
            let others: Vec<usize> = free.iter().copied().filter(|&w| w != v).collect();
            'cand: for vals in candidates(others.len(), 4_000) {
                let mut p = alloc::vec![Q::zero(); n];
                for (k, &w) in others.iter().enumerate() {
                    p[w] = Q::from_integer(BigInt::from(vals[k]));
                }
                let a_val = a_part.eval(&p);
                if a_val.is_zero() {
                    continue;
                }
                // g = A*v + B with v set to zero in p
                let root = -g.eval(&p) / a_val;
                if root.is_zero() {
                    continue;
                }
                p[v] = root;
                if !gens.iter().all(|h| h.vanishes_at(&p)) {
                    continue;
                }
                for (k, a) in avoid.iter().enumerate() {
                    if a.unit_at(&p) {
                        continue;
                    }
                    let inside = *contains[k].get_or_insert_with(|| {
                        let l = local.get_or_insert_with(|| i.sum(&Ideal::coordinate(i.ring(), zeros)));
                        face_in(a, zeros) || l.contains_ideal(a)
                    });
                    if !inside {
                        continue 'cand;
                    }
                }
                return Some(p);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, Ring};

    #[test]
    fn face_enumeration() {
        let f = faces(3);
        assert_eq!(f.len(), 8);
        assert!(f[0].is_empty());
        assert_eq!(f[7], alloc::vec![0, 1, 2]);
    }

    #[test]
    fn points_avoid_varieties() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let diag = Ideal::parse(&ring, &["y - z"]).unwrap();
        let p = face_point(3, &[0], &[&diag]).unwrap();
        assert_eq!(p, alloc::vec![q(0), q(1), q(2)]);
        let line = Ideal::parse(&ring, &["x", "y"]).unwrap();
        // the face x = y = 0 lies in the line, nothing to avoid
        assert_eq!(face_point(3, &[0, 1], &[&line]).unwrap(), alloc::vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn adapted_points_land_on_the_divisor() {
        let ring = Ring::new(&["x", "y", "z"]).unwrap();
        let d = Ideal::parse(&ring, &["x", "1 + y*z"]).unwrap();
        let p = adapted_point(3, &[0], &d, &[]).unwrap();
        assert!(d.vanishes_at(&p));
        assert!(p[1] != q(0) && p[2] != q(0));
    }
}
