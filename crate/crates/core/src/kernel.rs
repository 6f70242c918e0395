//! Exact arithmetic substrate: binomials with arbitrary integer upper index,
//! q-integers, p-adic valuations of rationals and the deformation parameter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{Integer, Rational};

/// `n (n-1) ... (n-k+1) / k!` for any integer `n`, computed as a falling
/// factorial (never via reflection).
pub fn binom_int(n: i64, k: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n) - i;
        den *= i + 1;
    }
    Rational::new(num, den)
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The q-integer `[x]_q = 1 + q + ... + q^{x-1}`; equals `x` at `q = 1`.
pub fn q_int<T: Scalar>(x: u64, q: &T) -> T {
    let mut acc = T::zero();
    let mut pw = T::one();
    for _ in 0..x {
        acc = acc + pw.clone();
        pw = pw * q.clone();
    }
    acc
}

/// `[x]_{-q} = 1 - q + q^2 - ... + (-q)^{x-1} = (1 - (-q)^x) / (1 + q)`.
pub fn q_int_neg<T: Scalar>(x: u64, q: &T) -> Result<T> {
    let denom = T::one() + q.clone();
    if denom.is_zero() {
        return Err(Error::DivisionByZero("[x]_{-q} at q = -1"));
    }
    let mq = -q.clone();
    Ok((T::one() - mq.powu(x)) / denom)
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `v_p(n)`, or `None` for `n = 0`.
pub fn valuation_int(n: &Integer, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)` for a nonzero rational, `None` for zero.
pub fn valuation_rational(x: &Rational, p: u64) -> Option<i64> {
    let vn = valuation_int(x.numer(), p)? as i64;
    let vd = valuation_int(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// `v_p(k!)` by Legendre's formula.
pub fn valuation_factorial(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut pk = p;
    while pk <= k {
        v += (k / pk) as u32;
        match pk.checked_mul(p) {
            Some(n) => pk = n,
            None => break,
        }
    }
    v
}

/// `floor(log_p(k))` for `k >= 1`.
pub fn floor_log(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut pk = p;
    while pk <= k {
        v += 1;
        match pk.checked_mul(p) {
            Some(n) => pk = n,
            None => break,
        }
    }
    v
}

/// Deformation parameter q as an exact rational, optionally tied to an odd
/// prime for which `v_p(q - 1) >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QParam {
    value: Rational,
    prime: Option<u64>,
}

impl QParam {
    pub fn new(value: Rational) -> Self {
        QParam { value, prime: None }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(ratio(n, d))
    }

    /// Attach a prime context. Rejects even or composite `p`, a denominator
    /// divisible by `p`, and `v_p(q - 1) < 1`.
    pub fn with_prime(value: Rational, p: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        if valuation_int(value.denom(), p).unwrap_or(0) > 0 {
            return Err(Error::DenominatorDivisibleByP {
                value: value.to_string(),
                prime: p,
            });
        }
        let shifted = &value - Rational::one();
        if let Some(v) = valuation_rational(&shifted, p) {
            if v < 1 {
                return Err(Error::InvalidParameter(format!(
                    "q = {value} does not satisfy v_{p}(q - 1) >= 1"
                )));
            }
        }
        Ok(QParam {
            value,
            prime: Some(p),
        })
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// `q^e` as a new parameter carrying the same prime context.
    pub fn pow(&self, e: u64) -> QParam {
        QParam {
            value: self.value.powu(e),
            prime: self.prime,
        }
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value))
    }
}

/// Render as `"num/den"`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `"num/den"` or a bare integer. Rejects zero denominators and
/// anything else (`"6//1"`, `"1.5"`, ...).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("expected NUM/DEN, got {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n) || !valid(d) {
        return Err(bad());
    }
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

impl FromStr for QParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(QParam::new)
    }
}

/// Closest `f64` to a rational.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: scale both down first.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `(1/(r+k-1)) C(-r,k) C(1-r-k,j) == (-1/(j+k)) C(-r,k+j-1) C(k+j,j)`,
/// meaningful for `r >= 2`, `j + k > 0`.
pub fn binom_identity_shift_holds(r: i64, j: u32, k: u32) -> bool {
    let lhs = binom_int(-r, k) * binom_int(1 - r - k as i64, j) / rat(r + k as i64 - 1);
    let rhs = -binom_int(-r, k + j - 1) * binom_int((k + j) as i64, j) / rat((j + k) as i64);
    lhs == rhs
}

/// `(1/(r+k-1)) C(-r,k) C(1-r-k,j) == (1/(r-1)) C(1-r,k+j) C(k+j,j)` for `r >= 2`.
pub fn binom_identity_lowered_holds(r: i64, j: u32, k: u32) -> bool {
    let lhs = binom_int(-r, k) * binom_int(1 - r - k as i64, j) / rat(r + k as i64 - 1);
    let rhs = binom_int(1 - r, k + j) * binom_int((k + j) as i64, j) / rat(r - 1);
    lhs == rhs
}

/// `(r/(r+k)) C(-r-1,k) C(-r-k,j) == C(-r,k+j) C(k+j,j)` for `r >= 1`; this
/// is the identity that reindexes the double sum in the expansion engine.
pub fn binom_identity_reindex_holds(r: i64, j: u32, k: u32) -> bool {
    let lhs = ratio(r, r + k as i64) * binom_int(-r - 1, k) * binom_int(-r - k as i64, j);
    let rhs = binom_int(-r, k + j) * binom_int((k + j) as i64, j);
    lhs == rhs
}
