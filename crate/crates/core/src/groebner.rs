//! Buchberger's algorithm on raw term vectors.
//!
//! Polynomials here are plain `Vec<(Monomial, Q)>` sorted descending under a
//! chosen [`MonoOrder`]; the ring-aware wrappers live in `ideal`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::poly::{deglex_cmp, Monomial, Q};

pub type Terms = Vec<(Monomial, Q)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoOrder {
    DegLex,
    /// Degree in the last `k` variables first, then DegLex. Eliminates them.
    Elim(usize),
}

impl MonoOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonoOrder::DegLex => deglex_cmp(a, b),
            MonoOrder::Elim(k) => {
                let n = a.0.len();
                let wa: u32 = a.0[n - k..].iter().sum();
                let wb: u32 = b.0[n - k..].iter().sum();
                wa.cmp(&wb).then_with(|| deglex_cmp(a, b))
            }
        }
    }
}

pub fn sort_terms(mut t: Terms, order: MonoOrder) -> Terms {
    t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    let mut out: Terms = Vec::with_capacity(t.len());
    for (m, c) in t {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// `p - c * m * g`, all sorted descending.
fn sub_scaled(p: &[(Monomial, Q)], c: &Q, m: &Monomial, g: &[(Monomial, Q)], order: MonoOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let shifted: Vec<(Monomial, Q)> = g.iter().map(|(gm, gc)| (gm.mul(m), gc * c)).collect();
    while i < p.len() && j < shifted.len() {
        match order.cmp(&p[i].0, &shifted[j].0) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((shifted[j].0.clone(), -&shifted[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let v = &p[i].1 - &shifted[j].1;
                if !v.is_zero() {
                    out.push((p[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&p[i..]);
    for (sm, sc) in &shifted[j..] {
        out.push((sm.clone(), -sc));
    }
    out
}

fn make_monic(mut p: Terms) -> Terms {
    if let Some((_, c)) = p.first() {
        if !c.is_one() {
            let inv = c.recip();
            for (_, a) in p.iter_mut() {
                *a *= &inv;
            }
        }
    }
    p
}

/// Full normal form of `f` modulo `basis` (leading terms at index 0).
pub fn normal_form(f: &[(Monomial, Q)], basis: &[Terms], order: MonoOrder) -> Terms {
    let mut p: Terms = f.to_vec();
    let mut rem: Terms = Vec::new();
    while !p.is_empty() {
        let (lm, lc) = p[0].clone();
        match basis.iter().find(|g| g[0].0.divides(&lm)) {
            Some(g) => {
                let c = &lc / &g[0].1;
                let m = lm.div(&g[0].0);
                p = sub_scaled(&p, &c, &m, g, order);
            }
            None => {
                rem.push(p.remove(0));
            }
        }
    }
    rem
}

fn spoly(f: &[(Monomial, Q)], g: &[(Monomial, Q)], order: MonoOrder) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = l.div(&f[0].0);
    let mg = l.div(&g[0].0);
    let a: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c / &f[0].1)).collect();
    sub_scaled(&a, &(Q::one() / &g[0].1), &mg, g, order)
}

/// Reduced Gröbner basis. Output is monic, sorted by leading monomial
/// ascending. The unit ideal yields `[1]`, the zero ideal `[]`.
pub fn groebner(input: &[Terms], nvars: usize, order: MonoOrder) -> Vec<Terms> {
    let mut basis: Vec<Terms> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let unit = || {
        Vec::from([Vec::from([(Monomial::one(nvars), Q::one())])])
    };

    let add = |basis: &mut Vec<Terms>, pending: &mut BTreeSet<(usize, usize)>, h: Terms| {
        let k = basis.len();
        for i in 0..k {
            pending.insert((i, k));
        }
        basis.push(h);
    };

    for f in input {
        let f = sort_terms(f.clone(), order);
        let h = normal_form(&f, &basis, order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return unit();
        }
        add(&mut basis, &mut pending, make_monic(h));
    }

    while let Some(&pair) = pending
        .iter()
        .min_by(|a, b| {
            let la = basis[a.0][0].0.lcm(&basis[a.1][0].0);
            let lb = basis[b.0][0].0.lcm(&basis[b.1][0].0);
            order.cmp(&la, &lb).then(a.cmp(b))
        })
    {
        pending.remove(&pair);
        let (i, j) = pair;
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], order);
        let h = normal_form(&s, &basis, order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return unit();
        }
        add(&mut basis, &mut pending, make_monic(h));
    }

    // minimize, then inter-reduce
    let mut keep: Vec<Terms> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out: Vec<Terms> = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Terms> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let head = keep[i][0].clone();
        let tail = normal_form(&keep[i][1..], &others, order);
        let mut g = Vec::with_capacity(tail.len() + 1);
        g.push(head);
        g.extend(tail);
        out.push(make_monic(g));
    }
    out.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    out
}

fn truncate_terms(p: Terms, k: u32) -> Terms {
    p.into_iter().filter(|(m, _)| m.degree() <= k).collect()
}

/// Leading monomials of a Gröbner basis of `I + m^{k+1}` under DegLex,
/// restricted to degree at most `k` (all monomials of degree `k+1` are
/// implicitly in the ideal). Polynomials are kept truncated throughout.
pub fn truncated_leading_monomials(input: &[Terms], nvars: usize, k: u32) -> Vec<Monomial> {
    let order = MonoOrder::DegLex;
    let mut basis: Vec<Terms> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: Vec<Terms> = input
        .iter()
        .map(|f| truncate_terms(sort_terms(f.clone(), order), k))
        .filter(|f| !f.is_empty())
        .collect();
    queue.reverse();
    loop {
        let next = if let Some(f) = queue.pop() {
            Some(f)
        } else if let Some(&pair) = pending.iter().min_by(|a, b| {
            let la = basis[a.0][0].0.lcm(&basis[a.1][0].0);
            let lb = basis[b.0][0].0.lcm(&basis[b.1][0].0);
            order.cmp(&la, &lb).then(a.cmp(b))
        }) {
            pending.remove(&pair);
            let (i, j) = pair;
            let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
            if li.coprime(lj) || li.lcm(lj).degree() > k {
                continue;
            }
            Some(truncate_terms(spoly(&basis[i], &basis[j], order), k))
        } else {
            None
        };
        let Some(f) = next else { break };
        let h = normal_form(&f, &basis, order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return alloc::vec![Monomial::one(nvars)];
        }
        let h = make_monic(h);
        let d = h[0].0.degree();
        // multiples reaching degree k+1 leave only their lower-degree tail
        let tail: Terms = h.iter().filter(|(m, _)| m.degree() < d).cloned().collect();
        if !tail.is_empty() {
            for nu in crate::poly::monomials_of_degree(nvars, k + 1 - d) {
                let e: Terms = tail
                    .iter()
                    .map(|(m, c)| (m.mul(&nu), c.clone()))
                    .filter(|(m, _)| m.degree() <= k)
                    .collect();
                if !e.is_empty() {
                    queue.push(sort_terms(e, order));
                }
            }
        }
        let idx = basis.len();
        for i in 0..idx {
            pending.insert((i, idx));
        }
        basis.push(h);
    }
    basis.into_iter().map(|g| g[0].0.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn t(e: &[u32], c: i64) -> (Monomial, Q) {
        (Monomial(e.to_vec()), q(c))
    }

    #[test]
    fn twisted_cubic() {
        // (y - x^2, z - x^3)
        let f = alloc::vec![t(&[0, 1, 0], 1), t(&[2, 0, 0], -1)];
        let g = alloc::vec![t(&[0, 0, 1], 1), t(&[3, 0, 0], -1)];
        let gb = groebner(&[f, g], 3, MonoOrder::DegLex);
        for b in &gb {
            for c in &gb {
                let s = if b == c { Vec::new() } else { spoly(b, c, MonoOrder::DegLex) };
                assert!(normal_form(&s, &gb, MonoOrder::DegLex).is_empty());
            }
        }
        // x*z - y^2 lies in the ideal
        let h = alloc::vec![t(&[1, 0, 1], 1), t(&[0, 2, 0], -1)];
        assert!(normal_form(&sort_terms(h, MonoOrder::DegLex), &gb, MonoOrder::DegLex).is_empty());
    }

    #[test]
    fn unit_detection() {
        let f = alloc::vec![t(&[1, 0], 1)];
        let g = alloc::vec![t(&[1, 0], 1), t(&[0, 0], 1)];
        let gb = groebner(&[f, g], 2, MonoOrder::DegLex);
        assert_eq!(gb.len(), 1);
        assert!(gb[0][0].0.is_one());
    }

    #[test]
    fn elimination_order_prefers_last_block() {
        let o = MonoOrder::Elim(1);
        assert_eq!(o.cmp(&Monomial(alloc::vec![0, 0, 1]), &Monomial(alloc::vec![5, 5, 0])), Ordering::Greater);
    }
}
