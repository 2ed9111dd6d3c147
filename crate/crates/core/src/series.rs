//! Truncated power series with exact rational coefficients, and the
//! generating function of a wedge of two graphs.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::growth::PartitionSpec;
use crate::poly::{rational_to_f64, IntPolynomial};

/// `c_0 + c_1 u + ... + c_M u^M`, with everything above `u^M` discarded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); degree + 1] }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Pads or cuts `coeffs` to length `degree + 1`.
    pub fn new(mut coeffs: Vec<BigRational>, degree: usize) -> Self {
        coeffs.resize(degree + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(coeffs: &[T], degree: usize) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone().into())).collect(), degree)
    }

    pub fn from_poly(p: &IntPolynomial, degree: usize) -> Self {
        Self::new(p.coeffs().iter().take(degree + 1).map(|c| BigRational::from_integer(c.clone())).collect(), degree)
    }

    /// `Σ_{k=start}^{degree} u^k`.
    pub fn geometric(start: usize, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        for k in start..=degree {
            s.coeffs[k] = BigRational::one();
        }
        s
    }

    /// Truncation degree `M`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::TruncationMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.degree();
        let mut out = vec![BigRational::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=m - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// `self / other`; requires `other(0) ≠ 0`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let lead = &other.coeffs[0];
        if lead.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let m = self.degree();
        let mut out: Vec<BigRational> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !other.coeffs[j].is_zero() {
                    acc -= &other.coeffs[j] * &out[k - j];
                }
            }
            out.push(acc / lead);
        }
        Ok(Self { coeffs: out })
    }

    pub fn derivative(&self) -> Self {
        let m = self.degree();
        let coeffs = (1..=m).map(|k| &self.coeffs[k] * BigRational::from_integer(k.into())).collect();
        Self::new(coeffs, m)
    }

    /// Multiplication by `u` (the top coefficient falls off).
    pub fn shift(&self) -> Self {
        let mut coeffs = vec![BigRational::zero()];
        coeffs.extend(self.coeffs[..self.degree()].iter().cloned());
        Self { coeffs }
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + rational_to_f64(c))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}] + O(u^{})", parts.join(", "), self.degree() + 1)
    }
}

/// `Σ_{m ≥ 1} N(m) u^m` where `counts[k] = N(k + 1)`; truncated at `counts.len()`.
pub fn genfun_from_counts(counts: &[BigUint]) -> TruncatedSeries {
    let mut coeffs = vec![BigRational::zero()];
    coeffs.extend(counts.iter().map(|c| BigRational::from_integer(BigInt::from(c.clone()))));
    TruncatedSeries::new(coeffs, counts.len())
}

/// Generating function of the wedge of `X` and `Y`:
/// `(F_X + F_Y + 2 F_X F_Y) / (1 - F_X F_Y)`.
pub fn merge_genfun(fx: &TruncatedSeries, fy: &TruncatedSeries) -> Result<TruncatedSeries> {
    fx.check(fy)?;
    if !fx.coeff(0).is_zero() || !fy.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let m = fx.degree();
    let prod = fx.mul(fy)?;
    let numer = fx.add(fy)?.add(&prod.scale(&BigRational::from_integer(2.into())))?;
    let denom = TruncatedSeries::one(m).sub(&prod)?;
    numer.div(&denom)
}

/// `Σ_{m=1}^{M} q^{s_m} u^m` for the partial sums `s_m` of a partition.
pub fn ray_series(q: u64, partition: &PartitionSpec, degree: usize) -> TruncatedSeries {
    let s = partition.partial_sums(degree);
    let mut coeffs = vec![BigRational::zero()];
    coeffs.extend((1..=degree).map(|m| BigRational::from_integer(BigInt::from(q).pow(s[m] as u32))));
    TruncatedSeries::new(coeffs, degree)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitProductRoot {
    /// Smallest `u > 0` with `F_X(u) F_Y(u) = 1` for the truncated series.
    /// Dropped tail terms only increase the product, so the root of the full
    /// series is at most this value.
    pub u: f64,
    /// `-log u`: a lower bound for the candidate exponent.
    pub candidate_exponent: f64,
    pub truncation_degree: usize,
    /// Size of the highest retained term of the product at `u`, a convergence hint.
    pub last_term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitProductOutcome {
    Root(UnitProductRoot),
    NoRoot,
}

/// Solves `F_X(u) · F_Y(u) = 1` on `(0, 1]` by bisection. The product of two
/// series with nonnegative coefficients is increasing for `u ≥ 0`, so the root
/// is unique when it exists.
pub fn solve_unit_product(fx: &TruncatedSeries, fy: &TruncatedSeries, tol: f64) -> Result<UnitProductOutcome> {
    fx.check(fy)?;
    if fx.coeffs().iter().chain(fy.coeffs()).any(Signed::is_negative) {
        return Err(Error::InvalidArgument("coefficients must be nonnegative".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let product = |u: f64| fx.eval_f64(u) * fy.eval_f64(u);
    if product(1.0) < 1.0 {
        return Ok(UnitProductOutcome::NoRoot);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if product(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let m = fx.degree();
    let last_term = (rational_to_f64(fx.coeff(m)) * fy.eval_f64(u) + rational_to_f64(fy.coeff(m)) * fx.eval_f64(u))
        * u.powi(m as i32);
    Ok(UnitProductOutcome::Root(UnitProductRoot { u, candidate_exponent: -u.ln(), truncation_degree: m, last_term }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64], m: usize) -> TruncatedSeries {
        TruncatedSeries::from_integers(c, m)
    }

    #[test]
    fn geometric_identities() {
        let m = 12;
        let one_minus_u = ints(&[1, -1], m);
        assert_eq!(one_minus_u.mul(&TruncatedSeries::geometric(0, m)).unwrap(), TruncatedSeries::one(m));
        assert_eq!(ints(&[0, 1], m).div(&one_minus_u).unwrap(), TruncatedSeries::geometric(1, m));
    }

    #[test]
    fn division_by_zero_constant_term() {
        assert_eq!(ints(&[1], 3).div(&ints(&[0, 1], 3)), Err(Error::ZeroConstantTerm));
        assert_eq!(ints(&[1], 3).add(&ints(&[1], 4)), Err(Error::TruncationMismatch(3, 4)));
    }

    #[test]
    fn merge_examples() {
        let m = 10;
        let zero = TruncatedSeries::zero(m);
        assert_eq!(merge_genfun(&zero, &zero).unwrap(), zero);
        let u = ints(&[0, 1], m);
        let expected = TruncatedSeries::geometric(1, m).scale(&BigRational::from_integer(2.into()));
        assert_eq!(merge_genfun(&u, &u).unwrap(), expected);
        assert_eq!(merge_genfun(&ints(&[1], m), &u), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn genfun_of_triangle_counts() {
        let counts: Vec<BigUint> = (1..=6u32).map(|m| BigUint::from(if m % 3 == 0 { 2u32 } else { 0 })).collect();
        let f = genfun_from_counts(&counts);
        assert_eq!(f, ints(&[0, 0, 0, 2, 0, 0, 2], 6));
        assert!(genfun_from_counts(&vec![BigUint::zero(); 4]).is_zero());
    }

    #[test]
    fn unit_product_roots() {
        let m = 80;
        let geo = TruncatedSeries::geometric(1, m);
        let UnitProductOutcome::Root(r) = solve_unit_product(&geo, &geo, 1e-13).unwrap() else { panic!() };
        assert!((r.u - 0.5).abs() < 1e-10);
        assert!((r.candidate_exponent - 2f64.ln()).abs() < 1e-9);
        let u = ints(&[0, 1], m);
        let UnitProductOutcome::Root(r) = solve_unit_product(&geo, &u, 1e-13).unwrap() else { panic!() };
        assert!((r.u - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
        let zero = TruncatedSeries::zero(m);
        assert_eq!(solve_unit_product(&zero, &zero, 1e-12).unwrap(), UnitProductOutcome::NoRoot);
    }

    #[test]
    fn ray_series_matches_partial_sums() {
        let p: PartitionSpec = "(1)".parse().unwrap();
        assert_eq!(ray_series(2, &p, 4), ints(&[0, 2, 4, 8, 16], 4));
        let p: PartitionSpec = "(0)".parse().unwrap();
        assert_eq!(ray_series(3, &p, 3), ints(&[0, 1, 1, 1], 3));
    }
}
