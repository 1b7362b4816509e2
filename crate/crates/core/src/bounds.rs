//! Computable constants attached to a primitive substitution: `|σ|`, the
//! bound on `R_σ`, `Q_σ`, `K_σ`, and the decision bounds `K` built on them.
//!
//! Most of these numbers are far too large to write down, so they are kept
//! as exact expression trees ([`Expr`]) that are evaluated only when the
//! result fits in a caller-chosen number of bits.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::primitivity;
use crate::morphism::Morphism;
use crate::stream::FixedPointStream;
use crate::words::Letter;

/// Values up to this many bits are printed in decimal.
pub const DISPLAY_BITS: u64 = 4096;

/// Default prefix length scanned for the practical `R̂_σ`.
pub const DEFAULT_PRACTICAL_HORIZON: usize = 1 << 16;

/// Exact natural-number expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Nat(BigUint),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    /// `⌈a / b⌉`, `b > 0`.
    CeilDiv(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn nat(n: impl Into<BigUint>) -> Expr {
        Expr::Nat(n.into())
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        Expr::Sum(terms)
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        Expr::Product(factors)
    }

    pub fn pow(base: Expr, exp: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exp))
    }

    pub fn ceil_div(num: Expr, den: Expr) -> Expr {
        Expr::CeilDiv(Box::new(num), Box::new(den))
    }

    /// The exact value, or `None` when some intermediate result would need
    /// more than `max_bits` bits.
    pub fn eval(&self, max_bits: u64) -> Option<BigUint> {
        if self.bits_upper() > max_bits.saturating_add(1) {
            return None;
        }
        let v = match self {
            Expr::Nat(n) => n.clone(),
            Expr::Sum(ts) => {
                let mut acc = BigUint::zero();
                for t in ts {
                    acc += t.eval(max_bits)?;
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = BigUint::one();
                for f in fs {
                    acc *= f.eval(max_bits)?;
                }
                acc
            }
            Expr::Pow(b, e) => {
                let b = b.eval(max_bits)?;
                let e = e.eval(64)?.to_u64()?;
                if b.is_zero() || b.is_one() || e == 0 {
                    return Some(if e == 0 { BigUint::one() } else { b });
                }
                if (b.bits() - 1).saturating_mul(e) > max_bits {
                    return None;
                }
                num_traits::pow::Pow::pow(&b, e)
            }
            Expr::CeilDiv(a, b) => {
                let a = a.eval(max_bits)?;
                let b = b.eval(max_bits)?;
                if b.is_zero() {
                    return None;
                }
                Integer::div_ceil(&a, &b)
            }
        };
        (v.bits() <= max_bits).then_some(v)
    }

    /// An upper bound on the bit length of the value, saturating at
    /// `u64::MAX`.
    pub fn bits_upper(&self) -> u64 {
        match self {
            Expr::Nat(n) => n.bits(),
            Expr::Sum(ts) => {
                let m = ts.iter().map(Expr::bits_upper).max().unwrap_or(0);
                m.saturating_add(ts.len().next_power_of_two().trailing_zeros() as u64)
            }
            Expr::Product(fs) => fs
                .iter()
                .fold(0u64, |acc, f| acc.saturating_add(f.bits_upper())),
            Expr::Pow(b, e) => {
                let bb = b.bits_upper();
                if bb <= 1 {
                    return 1;
                }
                match e.eval(64).and_then(|v| v.to_u64()) {
                    Some(ev) => bb.saturating_mul(ev),
                    None => u64::MAX,
                }
            }
            Expr::CeilDiv(a, _) => a.bits_upper(),
        }
    }

    /// Decimal value when it has at most [`DISPLAY_BITS`] bits.
    pub fn decimal(&self) -> Option<String> {
        self.eval(DISPLAY_BITS).map(|v| v.to_string())
    }

    /// The formula, printed with explicit operators.
    pub fn formula(&self) -> String {
        self.render(0)
    }

    fn render(&self, parent: u8) -> String {
        // precedence: 1 sum, 2 product, 3 power/atom
        let (prec, s) = match self {
            Expr::Nat(n) => (4, n.to_string()),
            Expr::Sum(ts) => (
                1,
                ts.iter()
                    .map(|t| t.render(1))
                    .collect::<Vec<_>>()
                    .join(" + "),
            ),
            Expr::Product(fs) => (
                2,
                fs.iter()
                    .map(|f| f.render(2))
                    .collect::<Vec<_>>()
                    .join(" * "),
            ),
            Expr::Pow(b, e) => (3, format!("{}^{}", b.render(4), e.render(4))),
            Expr::CeilDiv(a, b) => (4, format!("ceil({} / {})", a.render(0), b.render(2))),
        };
        if prec < parent || (prec == 3 && parent == 4) {
            format!("({s})")
        } else {
            s
        }
    }

    /// Serializable summary.
    pub fn value(&self) -> BoundValue {
        BoundValue {
            formula: self.formula(),
            decimal: self.decimal(),
            bits_at_most: self.bits_upper(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decimal() {
            Some(d) => f.write_str(&d),
            None => write!(f, "{} (at most {} bits)", self.formula(), self.bits_upper()),
        }
    }
}

impl From<u64> for Expr {
    fn from(n: u64) -> Self {
        Expr::nat(n)
    }
}

/// Serialized form of an [`Expr`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    pub formula: String,
    pub decimal: Option<String>,
    pub bits_at_most: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    /// The closed-form expressions.
    Certificate,
    /// Empirical substitutes measured on a materialized prefix.
    Practical,
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Certificate => "certificate",
            BoundMode::Practical => "practical",
        })
    }
}

/// Constants of one primitive substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub mode: BoundMode,
    /// Alphabet size.
    pub d: usize,
    /// `|σ|`.
    pub norm: usize,
    /// Smallest `k` with `M_σ^k > 0`.
    pub positivity_exponent: u32,
    /// Bound on the gap between successive occurrences of a length-2
    /// factor: `2|σ|^((d-1)d^d)` in certificate mode, the largest observed
    /// gap in practical mode.
    pub r_bound: Expr,
    /// `Q_σ` as an exact fraction.
    pub q: BigRational,
    /// `Q_σ` maximizes over `0 ≤ n ≤ q_range`.
    pub q_range: u32,
    /// `K_σ = ⌈Q_σ · R · |σ|⌉`.
    pub k_sigma: Expr,
    /// Prefix length scanned in practical mode.
    pub horizon: Option<usize>,
}

impl BoundSet {
    /// `K_σ` as a number, when it fits in `max_bits`.
    pub fn k_value(&self, max_bits: u64) -> Option<BigUint> {
        self.k_sigma.eval(max_bits)
    }

    /// `4K_σ³`: bound on the number of return words to any prefix.
    pub fn return_count_bound(&self) -> Expr {
        Expr::product(vec![
            4u64.into(),
            Expr::pow(self.k_sigma.clone(), 3u64.into()),
        ])
    }

    /// `|σ| K_σ²`: bound on the norm of every return substitution.
    pub fn return_norm_bound(&self) -> Expr {
        Expr::product(vec![
            (self.norm as u64).into(),
            Expr::pow(self.k_sigma.clone(), 2u64.into()),
        ])
    }

    fn exponent(&self) -> Expr {
        Expr::sum(vec![self.return_norm_bound(), 1u64.into()])
    }

    /// `(4K_σ³)^(|σ|K_σ² + 1)`: bound on the number of distinct return
    /// substitutions, in the form with `K_σ` cubed alone.
    pub fn return_substitution_count_bound(&self) -> Expr {
        Expr::pow(self.return_count_bound(), self.exponent())
    }

    /// `((4K_σ)³)^(|σ|K_σ² + 1)`: the larger variant used inside the
    /// decision bounds.
    pub fn return_substitution_count_bound_wide(&self) -> Expr {
        let four_k = Expr::product(vec![4u64.into(), self.k_sigma.clone()]);
        Expr::pow(Expr::pow(four_k, 3u64.into()), self.exponent())
    }

    /// `(K_σ + 1)^(K_σ²)`: bound on the number of distinct `λ_u`.
    pub fn lambda_count_bound(&self) -> Expr {
        Expr::pow(
            Expr::sum(vec![self.k_sigma.clone(), 1u64.into()]),
            Expr::pow(self.k_sigma.clone(), 2u64.into()),
        )
    }

    /// Bound on the number of levels the periodicity procedure can visit
    /// before a repeat: `((4K_σ)³)^(|σ|K_σ²+1) · (K_σ+1)^(K_σ²)`.
    pub fn periodicity_bound(&self) -> Expr {
        Expr::product(vec![
            self.return_substitution_count_bound_wide(),
            self.lambda_count_bound(),
        ])
    }
}

/// Computes the constants of a primitive substitution.
///
/// `|σ^n|` and `min_a |σ^n(a)|` come from column sums of exact matrix
/// powers. `Q_σ` maximizes their ratio over `0 ≤ n ≤ k₀ + 1`, `k₀` the
/// positivity exponent, together with `|σ|` and the largest ratio between
/// two entries of a row of `M^k₀`; the last term covers every `n ≥ k₀`.
pub fn bound_set(sigma: &Morphism, mode: BoundMode) -> Result<BoundSet> {
    bound_set_with(sigma, mode, DEFAULT_PRACTICAL_HORIZON)
}

pub fn bound_set_with(sigma: &Morphism, mode: BoundMode, horizon: usize) -> Result<BoundSet> {
    let prim = primitivity(sigma)?;
    let Some(k0) = prim.positivity_exponent else {
        return Err(Error::domain(
            "bounds are only defined for primitive substitutions",
        ));
    };
    let d = sigma.source().len();
    let norm = sigma.norm();
    if norm == 0 {
        return Err(Error::domain("substitution erases every letter"));
    }
    let q_range = k0 + 1;
    let powers = sigma.incidence_matrix().big_powers(q_range as usize);
    let mut q = BigRational::from_integer((norm as u64).into());
    for p in &powers {
        let sums = p.column_sums();
        let max = sums.iter().max().cloned().unwrap_or_default();
        let min = sums.iter().min().cloned().unwrap_or_default();
        if min.is_zero() {
            return Err(Error::invariant(
                "primitive substitution with an erased letter",
            ));
        }
        let ratio = BigRational::new(max.into(), min.into());
        if ratio > q {
            q = ratio;
        }
    }
    // For n ≥ k₀ each |σ^n(a)| is a positive combination of row b of
    // M^k₀, so the ratio of two such lengths is at most the largest ratio
    // of two entries in one row. This makes Q valid for every n.
    let positive = &powers[k0 as usize];
    for b in 0..d {
        let row: Vec<&BigUint> = (0..d).map(|a| positive.entry(b, a)).collect();
        let max = row.iter().max().copied().cloned().unwrap_or_default();
        let min = row.iter().min().copied().cloned().unwrap_or_default();
        let ratio = BigRational::new(max.into(), min.into());
        if ratio > q {
            q = ratio;
        }
    }

    let (r_bound, horizon) = match mode {
        BoundMode::Certificate => {
            let exp = (d as u64 - 1) * (d as u64).pow(d as u32);
            (
                Expr::product(vec![
                    2u64.into(),
                    Expr::pow((norm as u64).into(), exp.into()),
                ]),
                None,
            )
        }
        BoundMode::Practical => (
            Expr::nat(observed_gap(sigma, horizon)? as u64),
            Some(horizon),
        ),
    };
    let numer = q.numer().to_biguint().expect("Q is positive");
    let denom = q.denom().to_biguint().expect("Q is positive");
    let k_sigma = Expr::ceil_div(
        Expr::product(vec![
            Expr::Nat(numer),
            r_bound.clone(),
            (norm as u64).into(),
        ]),
        Expr::Nat(denom),
    );
    Ok(BoundSet {
        mode,
        d,
        norm,
        positivity_exponent: k0,
        r_bound,
        q,
        q_range,
        k_sigma,
        horizon,
    })
}

/// Largest gap between successive occurrences of any length-2 factor over
/// the first `horizon` symbols, maximized over every letter the
/// substitution is prolongable on.
fn observed_gap(sigma: &Morphism, horizon: usize) -> Result<usize> {
    let letters = crate::matrix::prolongable_letters(sigma)?;
    let seeds: Vec<Letter> = if letters.is_empty() {
        // Some power is prolongable; a primitive substitution with
        // |σ| ≥ 2 always has one.
        let k = sigma.source().len() as u32 + 1;
        let p = sigma.power_bounded(k, horizon.max(1 << 20))?;
        let found = crate::matrix::prolongable_letters(&p)?;
        if found.is_empty() {
            return Ok(1);
        }
        return gap_over(&p, &found, horizon);
    } else {
        letters
    };
    gap_over(sigma, &seeds, horizon)
}

fn gap_over(sigma: &Morphism, seeds: &[Letter], horizon: usize) -> Result<usize> {
    let d = sigma.source().len();
    let mut best = 1;
    for &a in seeds {
        let mut s = FixedPointStream::with_budget(sigma.clone(), a, horizon.max(2))?;
        let x = s.prefix(horizon.max(2))?;
        let mut last = vec![usize::MAX; d * d];
        for i in 0..x.len() - 1 {
            let key = x[i] as usize * d + x[i + 1] as usize;
            if last[key] != usize::MAX {
                best = best.max(i - last[key]);
            }
            last[key] = i;
        }
    }
    Ok(best)
}

/// The bound `K` of the equivalence procedures:
/// `1 + ((4K_σ)³)^(|σ|K_σ²+1) · ((4K_τ)³)^(|τ|K_τ²+1)`, multiplied by
/// `(K_σ+1)^(K_σ²) (K_τ+1)^(K_τ²)` when the codings are involved.
///
/// The two sides are put in a canonical order, so the expression is the
/// same for `(σ, τ)` and `(τ, σ)`.
pub fn equivalence_bound_k(bs_sigma: &BoundSet, bs_tau: &BoundSet, with_lambdas: bool) -> Expr {
    let side = |bs: &BoundSet| {
        let mut f = vec![bs.return_substitution_count_bound_wide()];
        if with_lambdas {
            f.push(bs.lambda_count_bound());
        }
        f
    };
    let (mut a, mut b) = (side(bs_sigma), side(bs_tau));
    if a.iter().map(Expr::formula).collect::<Vec<_>>()
        > b.iter().map(Expr::formula).collect::<Vec<_>>()
    {
        std::mem::swap(&mut a, &mut b);
    }
    a.extend(b);
    Expr::sum(vec![1u64.into(), Expr::product(a)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Morphism {
        Morphism::from_strs(&[("0", "01"), ("1", "0")]).unwrap()
    }

    #[test]
    fn expr_eval_and_display() {
        let e = Expr::sum(vec![1u64.into(), Expr::pow(2u64.into(), 10u64.into())]);
        assert_eq!(e.eval(64).unwrap(), BigUint::from(1025u32));
        assert_eq!(e.to_string(), "1025");
        assert_eq!(e.formula(), "1 + 2^10");
        let huge = Expr::pow(2u64.into(), 100_000u64.into());
        assert!(huge.eval(1000).is_none());
        assert_eq!(huge.to_string(), "2^100000 (at most 200000 bits)");
        let c = Expr::ceil_div(7u64.into(), 2u64.into());
        assert_eq!(c.eval(8).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn bits_upper_is_an_upper_bound() {
        let e = Expr::product(vec![
            Expr::pow(3u64.into(), 50u64.into()),
            Expr::sum(vec![7u64.into(), 9u64.into(), 1u64.into()]),
        ]);
        assert!(e.eval(1 << 12).unwrap().bits() <= e.bits_upper());
    }

    #[test]
    fn fibonacci_certificate_constants() {
        let bs = bound_set(&fib(), BoundMode::Certificate).unwrap();
        assert_eq!(bs.norm, 2);
        assert_eq!(bs.d, 2);
        assert_eq!(bs.r_bound.eval(64).unwrap(), BigUint::from(32u32));
        assert_eq!(bs.q, BigRational::from_integer(2.into()));
        assert_eq!(bs.k_value(64).unwrap(), BigUint::from(128u32));
    }

    #[test]
    fn uniform_length_q_is_norm() {
        let s = Morphism::from_strs(&[("a", "ab"), ("b", "ab")]).unwrap();
        let bs = bound_set(&s, BoundMode::Certificate).unwrap();
        assert_eq!(bs.q, BigRational::from_integer(2.into()));
    }

    #[test]
    fn rejects_non_primitive() {
        let s = Morphism::from_strs(&[("a", "ab"), ("b", "b")]).unwrap();
        assert!(matches!(
            bound_set(&s, BoundMode::Certificate),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn practical_gap_below_certificate() {
        let p = bound_set(&fib(), BoundMode::Practical).unwrap();
        let c = bound_set(&fib(), BoundMode::Certificate).unwrap();
        assert!(p.r_bound.eval(64).unwrap() <= c.r_bound.eval(64).unwrap());
    }

    #[test]
    fn k_is_symmetric() {
        let a = bound_set(&fib(), BoundMode::Certificate).unwrap();
        let tm = Morphism::from_strs(&[("0", "01"), ("1", "10")]).unwrap();
        let b = bound_set(&tm, BoundMode::Practical).unwrap();
        assert_eq!(
            equivalence_bound_k(&a, &b, false),
            equivalence_bound_k(&b, &a, false)
        );
    }
}
