//! Dense exact linear algebra over Q, just enough for Jacobians and
//! tangent spaces.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::poly::Q;

/// Reduced row echelon form of the span of `rows`, zero rows dropped.
pub fn rref(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for c in m[r].iter_mut() {
            *c *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot = m[r].clone();
                for (dst, p) in m[i].iter_mut().zip(&pivot) {
                    *dst -= p * &f;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).len()
}

/// Indices of a maximal independent subfamily, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut span: Vec<Vec<Q>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial = span.clone();
        trial.push(row.clone());
        if rank(&trial) > span.len() {
            span.push(row.clone());
            chosen.push(i);
        }
    }
    chosen
}

/// Dimension of the sum of the given subspaces (each a list of spanning rows).
pub fn span_dim(spaces: &[&[Vec<Q>]]) -> usize {
    let all: Vec<Vec<Q>> = spaces.iter().flat_map(|s| s.iter().cloned()).collect();
    rank(&all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use alloc::vec;

    #[test]
    fn rank_and_selection() {
        let rows = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(1)]];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_rows(&rows), vec![0, 2]);
        assert_eq!(rref(&rows), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }
}
