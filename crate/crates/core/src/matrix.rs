//! Incidence matrices, primitivity and prolongability.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::words::Letter;

/// `m[i][j]` = number of occurrences of target letter `i` in the image of
/// source letter `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn of(m: &Morphism) -> Self {
        let rows = m.target().len();
        let cols = m.source().len();
        let mut entries = vec![vec![0u64; cols]; rows];
        for (j, img) in m.images().iter().enumerate() {
            for &i in img.iter() {
                entries[i as usize][j] += 1;
            }
        }
        IncidenceMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.entries[i][j]).sum())
            .collect()
    }

    /// Exact powers `M^0, M^1, ..., M^max` of a square matrix.
    pub fn big_powers(&self, max: usize) -> Vec<BigMatrix> {
        assert_eq!(self.rows, self.cols, "powers need a square matrix");
        let base = BigMatrix::from(self);
        let mut out = Vec::with_capacity(max + 1);
        out.push(BigMatrix::identity(self.rows));
        for k in 1..=max {
            let next = out[k - 1].mul(&base);
            out.push(next);
        }
        out
    }

    fn support(&self) -> Vec<Vec<bool>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&e| e > 0).collect())
            .collect()
    }
}

/// Square matrix of arbitrary-precision naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix {
    entries: Vec<Vec<BigUint>>,
}

impl BigMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigUint::from(1u8)
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        BigMatrix { entries }
    }

    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        let n = self.entries.len();
        let p = other.entries.first().map_or(0, Vec::len);
        let inner = other.entries.len();
        let mut entries = vec![vec![BigUint::zero(); p]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            for k in 0..inner {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        *cell += a * b;
                    }
                }
            }
        }
        BigMatrix { entries }
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        let cols = self.entries.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| self.entries.iter().map(|r| &r[j]).sum())
            .collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i][j]
    }
}

impl From<&IncidenceMatrix> for BigMatrix {
    fn from(m: &IncidenceMatrix) -> Self {
        BigMatrix {
            entries: m
                .entries
                .iter()
                .map(|r| r.iter().map(|&e| BigUint::from(e)).collect())
                .collect(),
        }
    }
}

/// Outcome of the primitivity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    /// Smallest `k` with `M^k` entrywise positive, when primitive.
    pub positivity_exponent: Option<u32>,
}

/// Decides primitivity on the boolean support of the incidence matrix.
///
/// A primitive `d × d` matrix reaches a positive power within `(d-1)² + 1`
/// steps, so the search stops there.
pub fn primitivity(m: &Morphism) -> Result<Primitivity> {
    if !m.is_endomorphism() {
        return Err(Error::domain(
            "primitivity is only defined for endomorphisms",
        ));
    }
    let support = m.incidence_matrix().support();
    let d = support.len();
    let cap = (d - 1) * (d - 1) + 1;
    let mut power = support.clone();
    for k in 1..=cap {
        if power.iter().all(|r| r.iter().all(|&b| b)) {
            return Ok(Primitivity {
                primitive: true,
                positivity_exponent: Some(k as u32),
            });
        }
        power = bool_mul(&power, &support);
    }
    Ok(Primitivity {
        primitive: false,
        positivity_exponent: None,
    })
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

/// The letters `a` with `m(a) = a·u`, `u` non-empty, and `|m^n(a)| → ∞`.
///
/// Growth holds exactly when `u` contains a letter that is not mortal
/// (a letter is mortal when some power of `m` erases it).
pub fn prolongable_letters(m: &Morphism) -> Result<Vec<Letter>> {
    if !m.is_endomorphism() {
        return Err(Error::domain(
            "prolongability is only defined for endomorphisms",
        ));
    }
    let mortal = mortal_letters(m);
    Ok(m.source()
        .letters()
        .filter(|&a| {
            let img = m.image(a);
            img.len() >= 2 && img[0] == a && img[1..].iter().any(|&b| !mortal[b as usize])
        })
        .collect())
}

fn mortal_letters(m: &Morphism) -> Vec<bool> {
    let d = m.source().len();
    let mut mortal = vec![false; d];
    loop {
        let mut changed = false;
        for a in 0..d {
            if !mortal[a] && m.images()[a].iter().all(|&b| mortal[b as usize]) {
                mortal[a] = true;
                changed = true;
            }
        }
        if !changed {
            return mortal;
        }
    }
}

pub fn is_prolongable_on(m: &Morphism, a: Letter) -> Result<bool> {
    Ok(prolongable_letters(m)?.contains(&a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Morphism {
        Morphism::from_strs(&[("0", "01"), ("1", "0")]).unwrap()
    }

    fn thue_morse() -> Morphism {
        Morphism::from_strs(&[("0", "01"), ("1", "10")]).unwrap()
    }

    #[test]
    fn incidence_matrices() {
        assert_eq!(
            fib().incidence_matrix().entries(),
            &[vec![1, 1], vec![1, 0]]
        );
        assert_eq!(
            thue_morse().incidence_matrix().entries(),
            &[vec![1, 1], vec![1, 1]]
        );
        let id = Morphism::from_strs(&[("a", "a"), ("b", "b")]).unwrap();
        assert_eq!(id.incidence_matrix().entries(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(fib().incidence_matrix().column_sums(), vec![2, 1]);
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(
            primitivity(&fib()).unwrap(),
            Primitivity {
                primitive: true,
                positivity_exponent: Some(2)
            }
        );
        assert_eq!(
            primitivity(&thue_morse()).unwrap(),
            Primitivity {
                primitive: true,
                positivity_exponent: Some(1)
            }
        );
        let tri = Morphism::from_strs(&[("a", "ab"), ("b", "b")]).unwrap();
        assert!(!primitivity(&tri).unwrap().primitive);
    }

    #[test]
    fn primitivity_rejects_non_endomorphism() {
        let src = crate::words::Alphabet::new(["a"]).unwrap();
        let tgt = crate::words::Alphabet::new(["b"]).unwrap();
        let m = Morphism::new(src, tgt, vec![vec![0].into()]).unwrap();
        assert!(matches!(primitivity(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn prolongable_examples() {
        assert_eq!(prolongable_letters(&fib()).unwrap(), vec![0]);
        assert_eq!(prolongable_letters(&thue_morse()).unwrap(), vec![0, 1]);
        let none = Morphism::from_strs(&[("a", "ba"), ("b", "ab")]).unwrap();
        assert!(prolongable_letters(&none).unwrap().is_empty());
        // a -> ab with b mortal does not grow.
        let mortal = Morphism::from_strs(&[("a", "ab"), ("b", "")]).unwrap();
        assert!(prolongable_letters(&mortal).unwrap().is_empty());
    }

    #[test]
    fn big_powers_match_fibonacci_numbers() {
        let p = fib().incidence_matrix().big_powers(10);
        let sums = p[10].column_sums();
        assert_eq!(sums[0], BigUint::from(144u32));
        assert_eq!(sums[1], BigUint::from(89u32));
    }
}
