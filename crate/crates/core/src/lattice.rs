//! Parikh vectors and the integer lattice they span.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::words::{parikh, Letter};

/// Letter counts of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn of(word: &[Letter], dim: usize) -> Self {
        ParikhVector(parikh(word, dim))
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Row-style Hermite normal form of the lattice spanned by some integer
/// vectors: the non-zero rows are upper triangular with positive pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub dim: usize,
    pub rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The lattice is all of `ℤ^dim`: full rank and the pivots multiply to 1.
    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r[i].abs().is_one())
    }

    /// Absolute value of the product of the pivots (the index of the lattice
    /// in ℤ^dim when the rank is full).
    pub fn pivot_product(&self) -> BigInt {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .find(|v| !v.is_zero())
                    .cloned()
                    .unwrap_or_default()
                    .abs()
            })
            .fold(BigInt::one(), |a, b| a * b)
    }
}

/// Integer row reduction by extended gcd steps; exact, no fractions.
pub fn lattice_basis(vectors: &[Vec<i64>], dim: usize) -> LatticeBasis {
    let mut rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| {
            assert_eq!(v.len(), dim, "vector of the wrong dimension");
            v.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // Fold every row's entry in this column into one pivot row.
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (g, a, b) = ext_gcd(&p[col], &r[col]);
                    let pc = &p[col] / &g;
                    let rc = &r[col] / &g;
                    let new_p: Vec<BigInt> =
                        p.iter().zip(&r).map(|(x, y)| &a * x + &b * y).collect();
                    let new_r: Vec<BigInt> =
                        p.iter().zip(&r).map(|(x, y)| &pc * y - &rc * x).collect();
                    debug_assert!(new_r[col].is_zero());
                    if new_r.iter().any(|v| !v.is_zero()) {
                        rest.push(new_r);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                p.iter_mut().for_each(|v| *v = -&*v);
            }
            out.push(p);
        }
        rows = rest;
        col += 1;
    }
    // Reduce entries above each pivot into [0, pivot).
    for i in 0..out.len() {
        let pc = out[i]
            .iter()
            .position(|v| !v.is_zero())
            .expect("pivot rows are non-zero");
        for j in 0..i {
            let q = out[j][pc].div_floor(&out[i][pc]);
            if !q.is_zero() {
                let sub: Vec<BigInt> = out[i].iter().map(|v| &q * v).collect();
                for (x, s) in out[j].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
    }
    LatticeBasis { dim, rows: out }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Basis of the lattice spanned by the Parikh vectors of `words`.
pub fn parikh_lattice(words: &[&[Letter]], dim: usize) -> LatticeBasis {
    let vecs: Vec<Vec<i64>> = words
        .iter()
        .map(|w| parikh(w, dim).into_iter().map(|c| c as i64).collect())
        .collect();
    lattice_basis(&vecs, dim)
}

/// All vectors are multiples of one rational direction.
pub fn colinear(vectors: &[ParikhVector]) -> bool {
    let vecs: Vec<Vec<i64>> = vectors
        .iter()
        .map(|v| v.0.iter().map(|&c| c as i64).collect())
        .collect();
    let dim = vecs.first().map_or(0, Vec::len);
    lattice_basis(&vecs, dim).rank() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_vectors_are_full() {
        let b = lattice_basis(&[vec![1, 1], vec![1, 0]], 2);
        assert!(b.is_full());
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn index_two_sublattice() {
        let b = lattice_basis(&[vec![2, 0], vec![0, 1]], 2);
        assert_eq!(b.rank(), 2);
        assert!(!b.is_full());
        assert_eq!(b.pivot_product(), BigInt::from(2));
        let b = lattice_basis(&[vec![1, 1], vec![1, -1]], 2);
        assert_eq!(b.pivot_product(), BigInt::from(2));
    }

    #[test]
    fn gcd_combination_reaches_full() {
        // (2,0), (3,0), (0,1): gcd(2,3) = 1.
        assert!(lattice_basis(&[vec![2, 0], vec![3, 0], vec![0, 1]], 2).is_full());
    }

    #[test]
    fn colinear_vectors() {
        let v = [
            ParikhVector(vec![1, 1]),
            ParikhVector(vec![3, 3]),
            ParikhVector(vec![2, 2]),
        ];
        assert!(colinear(&v));
        assert!(!colinear(&[
            ParikhVector(vec![1, 0]),
            ParikhVector(vec![1, 1])
        ]));
        let b = lattice_basis(&[vec![1, 1], vec![3, 3]], 2);
        assert_eq!(b.rank(), 1);
        assert!(!b.is_full());
    }

    #[test]
    fn fibonacci_return_words_span() {
        assert!(parikh_lattice(&[&[0, 1], &[0]], 2).is_full());
    }
}
