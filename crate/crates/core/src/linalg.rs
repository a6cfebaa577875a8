//! Exact rank and kernel computations over the rationals.
//!
//! Vectors are integer rows; elimination is fraction-free and every row is
//! divided by the gcd of its entries after each update, so entries stay small
//! for the 0/±1 matrices produced by path-algebra computations.

use num_integer::Integer;

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// `v ← a·v − b·r`, with overflow treated as a bug.
fn combine(v: &mut [i128], a: i128, r: &[i128], b: i128) {
    for (x, &y) in v.iter_mut().zip(r) {
        *x = a
            .checked_mul(*x)
            .and_then(|p| b.checked_mul(y).and_then(|q| p.checked_sub(q)))
            .expect("exact elimination overflowed i128");
    }
    normalize(v);
}

/// Row-echelon basis of a subspace of `Q^width`, built incrementally.
#[derive(Debug, Clone)]
pub struct RowSpace {
    width: usize,
    rows: Vec<(usize, Vec<i128>)>,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace { width, rows: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: Vec<i128>) -> Vec<i128> {
        debug_assert_eq!(v.len(), self.width);
        for (p, r) in &self.rows {
            if v[*p] != 0 {
                let (a, b) = (r[*p], v[*p]);
                combine(&mut v, a, r, b);
            }
        }
        v
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<i128>) -> bool {
        let mut v = self.reduce(v);
        match v.iter().position(|&x| x != 0) {
            Some(p) => {
                normalize(&mut v);
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    /// Fully reduced rows: every pivot column is zero in every other row.
    fn reduced_rows(&self) -> Vec<(usize, Vec<i128>)> {
        let mut rows = self.rows.clone();
        for i in 0..rows.len() {
            let (p, pivot_row) = rows[i].clone();
            for (j, (_, r)) in rows.iter_mut().enumerate() {
                if j != i && r[p] != 0 {
                    let (a, b) = (pivot_row[p], r[p]);
                    combine(r, a, &pivot_row, b);
                }
            }
        }
        rows
    }
}

pub fn rank<I: IntoIterator<Item = Vec<i128>>>(width: usize, rows: I) -> usize {
    let mut space = RowSpace::new(width);
    for r in rows {
        space.insert(r);
    }
    space.rank()
}

/// Integer basis of `{x : M x = 0}` where `M` is given by its rows.
pub fn kernel(width: usize, rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut space = RowSpace::new(width);
    for r in rows {
        space.insert(r.clone());
    }
    let reduced = space.reduced_rows();
    let pivots: Vec<usize> = reduced.iter().map(|(p, _)| *p).collect();
    let lcm = reduced.iter().fold(1i128, |l, (p, r)| l.lcm(&r[*p]));
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0i128; width];
        x[free] = lcm;
        for (p, r) in &reduced {
            x[*p] = -r[free] * (lcm / r[*p]);
        }
        normalize(&mut x);
        basis.push(x);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        assert_eq!(rank(2, vec![vec![0, 0]]), 0);
        assert_eq!(rank(2, Vec::new()), 0);
        assert_eq!(rank(3, vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]), 3);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 7, 9], vec![3, 6, 10, 13]];
        let k = kernel(4, &m);
        assert_eq!(k.len(), 4 - rank(4, m.clone()));
        for x in &k {
            for row in &m {
                assert_eq!(row.iter().zip(x).map(|(a, b)| a * b).sum::<i128>(), 0);
            }
        }
        assert_eq!(rank(4, k), 2);
    }

    #[test]
    fn membership() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 2, 1]));
        assert!(s.contains(&[2, 0, -2]));
        assert!(!s.contains(&[0, 0, 1]));
    }
}
