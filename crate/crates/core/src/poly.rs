//! Exact integer polynomials, fraction-free determinants over `Z[u]`, and
//! Sturm-sequence isolation of real roots with rational endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer polynomial in one variable, coefficients in ascending degree.
/// The leading (highest-degree) coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c · u^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a * BigInt::from(k)).collect())
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder or a non-integral coefficient.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_integral(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Long division when every step is integral.
    fn div_rem_integral(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Pseudo-remainder of `self` by `divisor`, scaled by a positive power of
    /// `|lc(divisor)|` so that its sign pattern matches the true remainder.
    pub fn signed_pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else { return Self::zero() };
        if da < dd {
            return self.clone();
        }
        let lead = divisor.leading().unwrap().clone();
        let steps = da - dd + 1;
        let mut rem = self.coeffs.clone();
        for k in (0..steps).rev() {
            let top = rem[k + dd].clone();
            for c in rem.iter_mut() {
                *c *= &lead;
            }
            if !top.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &top * b;
                }
            }
        }
        let mut r = Self::new(rem);
        if lead.is_negative() && steps % 2 == 1 {
            r = -r;
        }
        r
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.signed_pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Product of the distinct irreducible factors, up to a constant.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part().div_exact(&g).expect("gcd divides the polynomial").primitive_part()
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let Some(deg) = self.degree() else { return Ordering::Equal };
        let (n, d) = (x.numer(), x.denom());
        // Horner on the homogenized form Σ a_k n^k d^(deg-k); d > 0 keeps the sign.
        let mut acc = self.coeffs[deg].clone();
        let mut dpow = BigInt::one();
        for k in (0..deg).rev() {
            dpow *= d;
            acc = acc * n + &self.coeffs[k] * &dpow;
        }
        acc.sign().cmp_zero()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Coefficient list reversed with respect to degree `n`: `u^n · p(1/u)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            assert!(k <= n, "degree exceeds reversal degree");
            coeffs[n - k] = c.clone();
        }
        Self::new(coeffs)
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending coefficient list, e.g. `[1, -4, 3]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("[0]");
        }
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// Determinant of a square matrix over `Z[u]` by fraction-free (Bareiss)
/// elimination. Every division performed is exact.
pub fn determinant(mut m: Vec<Vec<IntPolynomial>>) -> IntPolynomial {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return IntPolynomial::one();
    }
    let mut negate = false;
    let mut prev = IntPolynomial::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return IntPolynomial::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (upper, lower) = m.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        let pivot = &pivot_row[k];
        for row in lower.iter_mut() {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                if factor.is_zero() && row[j].is_zero() {
                    continue;
                }
                let mut val = &row[j] * pivot;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    val = &val - &(&factor * &pivot_row[j]);
                }
                row[j] = val.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...` with primitive, sign-correct terms.
pub fn sturm_sequence(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d.primitive_part());
    loop {
        let n = seq.len();
        let r = seq[n - 2].signed_pseudo_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        seq.push(-IntPolynomial::new(r.coeffs.iter().map(|a| a / &c).collect()));
    }
    seq
}

fn sign_variations(seq: &[IntPolynomial], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = seq.iter().map(|p| p.sign_at(x)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]` where neither end is a root of the first
/// term of `seq`.
pub fn count_roots(seq: &[IntPolynomial], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a).saturating_sub(sign_variations(seq, b))
}

/// Strict upper bound on the modulus of every root (Cauchy).
pub fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let max = p.coeffs.iter().map(Signed::abs).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// A real root known to lie in `[lo, hi]`; `lo == hi` means the root is exactly rational.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolatedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Squarefree polynomial with a single root in `[lo, hi]`.
    pub certificate: IntPolynomial,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn approx(&self) -> f64 {
        if let Some(r) = self.exact() {
            return rational_to_f64(r);
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        rational_to_f64(&mid)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: scale down before converting.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rational within `[lo, hi]` with the smallest denominator (continued fractions).
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + BigRational::one() <= *hi {
        return fl + BigRational::one();
    }
    // lo and hi share the integer part; recurse on reciprocals of the fractional parts.
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Isolates the smallest positive real root of `p` and refines it until the
/// interval is at most `tol` wide. Returns `None` when `p` has no positive root.
pub fn smallest_positive_root(p: &IntPolynomial, tol: &BigRational) -> Option<IsolatedRoot> {
    let sqf = strip_zero_roots(p).squarefree_part();
    if sqf.degree().unwrap_or(0) == 0 {
        return None;
    }
    let seq = sturm_sequence(&sqf);
    let zero = BigRational::zero();
    let mut lo = zero.clone();
    let mut hi = cauchy_bound(&sqf);
    if count_roots(&seq, &lo, &hi) == 0 {
        return None;
    }
    while count_roots(&seq, &lo, &hi) > 1 {
        let mid = non_root_point(&sqf, &lo, &hi);
        if count_roots(&seq, &lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(refine_root(&sqf, lo, hi, tol))
}

fn strip_zero_roots(p: &IntPolynomial) -> IntPolynomial {
    let k = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    IntPolynomial::new(p.coeffs[k..].to_vec())
}

fn non_root_point(p: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> BigRational {
    let width = hi - lo;
    for k in 1u32.. {
        // 1/2, 1/3-ish perturbations: k/(2k+1)
        let t = if k == 1 {
            BigRational::new(1.into(), 2.into())
        } else {
            BigRational::new(k.into(), (2 * k + 1).into())
        };
        let x = lo + &width * t;
        if p.sign_at(&x) != Ordering::Equal {
            return x;
        }
    }
    unreachable!()
}

/// Bisects an isolating interval `(lo, hi]` of a simple root of the squarefree
/// polynomial `sqf`, then tries the simplest rational in the final interval as
/// an exact root.
pub fn refine_root(sqf: &IntPolynomial, mut lo: BigRational, mut hi: BigRational, tol: &BigRational) -> IsolatedRoot {
    let two = BigRational::from_integer(2.into());
    if sqf.sign_at(&hi) == Ordering::Equal {
        return IsolatedRoot { lo: hi.clone(), hi, certificate: sqf.clone() };
    }
    let hi_sign = sqf.sign_at(&hi);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        match sqf.sign_at(&mid) {
            Ordering::Equal => return IsolatedRoot { lo: mid.clone(), hi: mid, certificate: sqf.clone() },
            s if s == hi_sign => hi = mid,
            _ => lo = mid,
        }
    }
    let candidate = simplest_between(&lo, &hi);
    if sqf.sign_at(&candidate) == Ordering::Equal {
        return IsolatedRoot { lo: candidate.clone(), hi: candidate, certificate: sqf.clone() };
    }
    IsolatedRoot { lo, hi, certificate: sqf.clone() }
}

/// True when `u - r` divides `p` exactly, i.e. `r` is a root.
pub fn has_rational_root(p: &IntPolynomial, r: &BigRational) -> bool {
    let linear = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
    p.div_exact(&linear).is_some()
}
