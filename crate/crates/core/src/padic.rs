//! Capped absolute-precision p-adic integers.
//!
//! A [`PadicApprox`] is an element of `Z_p` known modulo `p^N`. Every
//! operation derives the precision of its result from the ultrametric error
//! rules, so a reported precision is always justified:
//!
//! * `x ± y` is known modulo `p^{min(N_x, N_y)}`;
//! * `x * y` is known modulo `p^{min(N_x + v(y), N_y + v(x))}`;
//! * `x / y` needs the exact valuation of `y` and loses `v(y)` digits.
//!
//! Valuations that cannot be distinguished from "divisible by `p^N`" are
//! reported as [`Valuation::AtLeast`] and are never used as divisors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{floor_log, is_odd_prime, q_int, valuation_factorial, QParam};
use crate::Rational;

/// Exact valuation, or a lower bound when the residue is zero at the
/// current precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

fn modulus(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

fn valuation_of(residue: &BigUint, p: u64, precision: u32) -> Valuation {
    if residue.is_zero() {
        return Valuation::AtLeast(precision);
    }
    let pb = BigUint::from(p);
    let mut r = residue.clone();
    let mut v = 0;
    loop {
        let (q, rem) = r.div_rem(&pb);
        if !rem.is_zero() {
            return Valuation::Exact(v);
        }
        r = q;
        v += 1;
    }
}

/// Reduce a signed integer into `[0, m)`.
fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

fn inverse_mod(x: &BigUint, m: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    x.modinv(m).expect("unit is invertible modulo p^N")
}

/// An element of `Z_p` known modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicApprox {
    prime: u64,
    residue: BigUint,
    precision: u32,
    valuation: Valuation,
}

impl PadicApprox {
    /// Build from a residue; reduces it modulo `p^precision`.
    ///
    /// Panics if `precision == 0`; operations that can exhaust precision
    /// return [`Error::PrecisionExhausted`] before reaching this point.
    pub fn from_residue(prime: u64, residue: BigUint, precision: u32) -> Self {
        assert!(precision >= 1, "p-adic precision must be at least 1");
        let residue = residue % modulus(prime, precision);
        let valuation = valuation_of(&residue, prime, precision);
        PadicApprox {
            prime,
            residue,
            precision,
            valuation,
        }
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        Self::from_residue(prime, BigUint::zero(), precision)
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self::from_residue(prime, BigUint::one(), precision)
    }

    pub fn from_int(prime: u64, n: i64, precision: u32) -> Self {
        Self::from_bigint(prime, &BigInt::from(n), precision)
    }

    pub fn from_bigint(prime: u64, n: &BigInt, precision: u32) -> Self {
        let m = modulus(prime, precision);
        Self::from_residue(prime, reduce_signed(n, &m), precision)
    }

    /// Image of a rational with `p`-free denominator in `Z_p / p^N`.
    pub fn embed(r: &Rational, prime: u64, precision: u32) -> Result<Self> {
        if !is_odd_prime(prime) {
            return Err(Error::InvalidParameter(format!("{prime} is not an odd prime")));
        }
        if precision == 0 {
            return Err(Error::PrecisionExhausted("embedding at precision 0".into()));
        }
        let m = modulus(prime, precision);
        let den = reduce_signed(r.denom(), &m);
        if (r.denom() % BigInt::from(prime)).is_zero() {
            return Err(Error::DenominatorDivisibleByP {
                value: format!("{}/{}", r.numer(), r.denom()),
                prime,
            });
        }
        let num = reduce_signed(r.numer(), &m);
        let inv = inverse_mod(&den, &m);
        Ok(Self::from_residue(prime, num * inv, precision))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    /// True when the residue is zero at the current precision.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn residue_mod_p(&self) -> u64 {
        (&self.residue % self.prime).to_u64().expect("fits")
    }

    /// Drop to a lower precision (no-op if `n >= precision`).
    pub fn reduce(&self, n: u32) -> Self {
        if n >= self.precision {
            return self.clone();
        }
        Self::from_residue(self.prime, self.residue.clone(), n)
    }

    /// Residue as a signed integer in `(-p^N/2, p^N/2]`.
    pub fn centered(&self) -> BigInt {
        let m = modulus(self.prime, self.precision);
        let r = BigInt::from_biguint(Sign::Plus, self.residue.clone());
        let mb = BigInt::from_biguint(Sign::Plus, m);
        if &r * 2 > mb {
            r - mb
        } else {
            r
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing different primes");
    }

    /// `v_p(self - other)`, capped by both precisions.
    pub fn agreement(&self, other: &Self) -> u32 {
        (self - other).valuation.lower_bound()
    }

    /// Equality modulo `p^n`.
    pub fn congruent(&self, other: &Self, n: u32) -> bool {
        self.agreement(other) >= n
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.prime, self.precision);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Division by an element whose valuation is exactly known.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        let v_den = other.valuation.exact().ok_or_else(|| {
            Error::PrecisionExhausted("divisor is indistinguishable from zero".into())
        })?;
        let p = self.prime;
        let pv = modulus(p, v_den);
        let (num_shift, num_val) = match self.valuation {
            Valuation::Exact(v) if v < v_den => return Err(Error::NegativeValuation),
            Valuation::Exact(v) => (&self.residue / &pv, v - v_den),
            Valuation::AtLeast(_) => (BigUint::zero(), self.precision.saturating_sub(v_den)),
        };
        let unit = &other.residue / &pv;
        let prec_num = self.precision as i64 - v_den as i64;
        let prec_unit = other.precision as i64 - v_den as i64 + num_val as i64;
        let prec = prec_num.min(prec_unit);
        if prec <= 0 {
            return Err(Error::PrecisionExhausted(format!(
                "quotient has no guaranteed digits (divisor valuation {v_den})"
            )));
        }
        let prec = prec as u32;
        let m = modulus(p, prec);
        let inv = inverse_mod(&(&unit % &m), &m);
        Ok(Self::from_residue(p, num_shift * inv, prec))
    }

    /// Division by an exactly known nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero("p-adic division by the integer 0"));
        }
        let v = crate::kernel::valuation_int(k, self.prime).expect("nonzero");
        let exact = Self::from_bigint(self.prime, k, self.precision + v + 1);
        self.checked_div(&exact)
    }

    /// Base-`p` digits, least significant first, exactly `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigUint::from(self.prime);
        let mut r = self.residue.clone();
        (0..self.precision)
            .map(|_| {
                let (q, d) = r.div_rem(&pb);
                r = q;
                d.to_u64().expect("digit < p")
            })
            .collect()
    }
}

impl fmt::Display for PadicApprox {
    /// `...d_{N-1} ... d_1 d_0 mod p^N`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits().iter().rev().map(|d| d.to_string()).collect();
        write!(f, "...{} mod {}^{}", digits.join(" "), self.prime, self.precision)
    }
}

impl Add for &PadicApprox {
    type Output = PadicApprox;

    fn add(self, rhs: &PadicApprox) -> PadicApprox {
        self.check_prime(rhs);
        let prec = self.precision.min(rhs.precision);
        PadicApprox::from_residue(self.prime, &self.residue + &rhs.residue, prec)
    }
}

impl Sub for &PadicApprox {
    type Output = PadicApprox;

    fn sub(self, rhs: &PadicApprox) -> PadicApprox {
        self + &(-rhs)
    }
}

impl Neg for &PadicApprox {
    type Output = PadicApprox;

    fn neg(self) -> PadicApprox {
        let m = modulus(self.prime, self.precision);
        let r = if self.residue.is_zero() {
            BigUint::zero()
        } else {
            &m - &self.residue
        };
        PadicApprox::from_residue(self.prime, r, self.precision)
    }
}

impl Mul for &PadicApprox {
    type Output = PadicApprox;

    fn mul(self, rhs: &PadicApprox) -> PadicApprox {
        self.check_prime(rhs);
        let prec = (self.precision + rhs.valuation.lower_bound())
            .min(rhs.precision + self.valuation.lower_bound());
        PadicApprox::from_residue(self.prime, &self.residue * &rhs.residue, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicApprox {
            type Output = PadicApprox;
            fn $m(self, rhs: PadicApprox) -> PadicApprox {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PadicApprox> for PadicApprox {
            type Output = PadicApprox;
            fn $m(self, rhs: &PadicApprox) -> PadicApprox {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicApprox {
    type Output = PadicApprox;
    fn neg(self) -> PadicApprox {
        -&self
    }
}

impl Serialize for PadicApprox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PadicApprox", 3)?;
        st.serialize_field("residue", &self.residue.to_string())?;
        st.serialize_field("mod", &format!("{}^{}", self.prime, self.precision))?;
        match self.valuation {
            Valuation::Exact(v) => st.serialize_field("valuation", &v)?,
            Valuation::AtLeast(v) => st.serialize_field("valuation", &format!(">={v}"))?,
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for PadicApprox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum RawVal {
            Exact(u32),
            Bound(String),
        }
        #[derive(Deserialize)]
        struct Raw {
            residue: String,
            #[serde(rename = "mod")]
            modulus: String,
            valuation: RawVal,
        }
        let raw = Raw::deserialize(d)?;
        let (p, n) = raw
            .modulus
            .split_once('^')
            .ok_or_else(|| de::Error::custom("mod must look like p^N"))?;
        let p: u64 = p.parse().map_err(de::Error::custom)?;
        let n: u32 = n.parse().map_err(de::Error::custom)?;
        if !is_odd_prime(p) || n == 0 {
            return Err(de::Error::custom("mod must be p^N with p an odd prime, N >= 1"));
        }
        let residue: BigUint = raw.residue.parse().map_err(de::Error::custom)?;
        if residue >= modulus(p, n) {
            return Err(de::Error::custom("residue out of range"));
        }
        let x = PadicApprox::from_residue(p, residue, n);
        let claimed = match raw.valuation {
            RawVal::Exact(v) => Valuation::Exact(v),
            RawVal::Bound(s) => Valuation::AtLeast(
                s.strip_prefix(">=")
                    .ok_or_else(|| de::Error::custom("valuation bound must be \">=N\""))?
                    .parse()
                    .map_err(de::Error::custom)?,
            ),
        };
        if claimed != x.valuation {
            return Err(de::Error::custom("valuation does not match residue"));
        }
        Ok(x)
    }
}

/// Teichmüller representative `ω(a)`: the `(p-1)`-th root of unity congruent
/// to `a` mod `p`, found as the fixed point of `x -> x^p` modulo `p^N`.
pub fn teichmuller(a: i64, prime: u64, precision: u32) -> Result<PadicApprox> {
    if a.rem_euclid(prime as i64) == 0 {
        return Err(Error::NotCoprime { a, prime });
    }
    let m = modulus(prime, precision);
    let pb = BigUint::from(prime);
    let mut x = reduce_signed(&BigInt::from(a), &m);
    for _ in 0..=precision {
        let next = x.modpow(&pb, &m);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(PadicApprox::from_residue(prime, x, precision))
}

/// `z^k / d mod p^N` for an integer `d` with `v_p(z^k) >= v_p(d)`.
fn power_over(z: &BigUint, k: u64, d: &BigUint, p: u64, n: u32) -> BigUint {
    let pb = BigUint::from(p);
    let mut unit = d.clone();
    let mut vd = 0u32;
    while (&unit % &pb).is_zero() {
        unit /= &pb;
        vd += 1;
    }
    let big_m = modulus(p, n + vd);
    let zk = z.modpow(&BigUint::from(k), &big_m);
    let shifted = zk / modulus(p, vd);
    let m = modulus(p, n);
    (shifted % &m) * inverse_mod(&(unit % &m), &m) % &m
}

/// `log(u) = Σ_{k≥1} (-1)^{k+1} z^k / k` with `z = u - 1`.
///
/// The series stops at the first `K` with `K·v(z) - floor(log_p K) >= N`; that
/// bound is nondecreasing in `K`, so every later term is negligible too.
pub fn padic_log(u: &PadicApprox) -> Result<PadicApprox> {
    let p = u.prime;
    let n = u.precision;
    let z = u - &PadicApprox::one(p, n);
    let v = match z.valuation {
        Valuation::AtLeast(_) => return Ok(PadicApprox::zero(p, n)),
        Valuation::Exact(0) => return Err(Error::NotOneUnit),
        Valuation::Exact(v) => v as u64,
    };
    let m = modulus(p, n);
    let mut acc = BigUint::zero();
    let mut k = 1u64;
    while k * v < n as u64 + floor_log(k, p) as u64 {
        let term = power_over(&z.residue, k, &BigUint::from(k), p, n);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc += &m - term;
        }
        k += 1;
    }
    Ok(PadicApprox::from_residue(p, acc, n))
}

/// `exp(x) = Σ x^k / k!` for `v(x) >= 1`; stops once
/// `k·v(x) - floor((k-1)/(p-1)) >= N`, a lower bound for `v(x^k/k!)`.
pub fn padic_exp(x: &PadicApprox) -> Result<PadicApprox> {
    let p = x.prime;
    let n = x.precision;
    let v = match x.valuation {
        Valuation::AtLeast(_) => return Ok(PadicApprox::one(p, n)),
        Valuation::Exact(0) => return Err(Error::OutOfDomain),
        Valuation::Exact(v) => v as u64,
    };
    let mut acc = BigUint::one();
    let mut fact = BigUint::one();
    let mut k = 1u64;
    while k * v < n as u64 + (k - 1) / (p - 1) {
        fact *= k;
        acc += power_over(&x.residue, k, &fact, p, n);
        k += 1;
    }
    Ok(PadicApprox::from_residue(p, acc, n))
}

/// `u^s = exp(s · log u)` for a 1-unit `u` and `s ∈ Z_p`.
pub fn power_zp(u: &PadicApprox, s: &PadicApprox) -> Result<PadicApprox> {
    let l = padic_log(u)?;
    padic_exp(&(s * &l))
}

/// `C(s, k) = s(s-1)...(s-k+1)/k!` for `s ∈ Z_p`. Loses `v_p(k!)` digits.
pub fn binom_zp(s: &PadicApprox, k: u64) -> Result<PadicApprox> {
    let p = s.prime;
    let mut prod = PadicApprox::one(p, s.precision);
    for i in 0..k {
        let shifted = s - &PadicApprox::from_int(p, i as i64, s.precision);
        prod = &prod * &shifted;
    }
    let mut fact = BigInt::one();
    for i in 2..=k {
        fact *= i;
    }
    prod.div_int(&fact).map_err(|e| match e {
        Error::PrecisionExhausted(_) => Error::PrecisionExhausted(format!(
            "binomial C(s, {k}) loses {} digits",
            valuation_factorial(k, p)
        )),
        other => other,
    })
}

/// `<a> = [a]_q / ω(a)`, a 1-unit for `q ≡ 1 mod p`.
pub fn angle_bracket(a: i64, q: &QParam, precision: u32) -> Result<PadicApprox> {
    let p = q
        .prime()
        .ok_or_else(|| Error::InvalidParameter("angle bracket needs a prime context".into()))?;
    if a <= 0 {
        return Err(Error::InvalidParameter(format!("angle bracket needs a > 0, got {a}")));
    }
    let w = teichmuller(a, p, precision)?;
    let qa = PadicApprox::embed(&q_int(a as u64, q.value()), p, precision)?;
    let r = qa.checked_div(&w)?;
    assert_eq!(r.residue_mod_p(), 1, "<a> must be a 1-unit");
    Ok(r)
}

/// A power `ω^t` of the Teichmüller character, `t` taken mod `p - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeichChar {
    prime: u64,
    exponent: u64,
}

impl TeichChar {
    pub fn new(prime: u64, t: i64) -> Result<Self> {
        if !is_odd_prime(prime) {
            return Err(Error::InvalidParameter(format!("{prime} is not an odd prime")));
        }
        Ok(TeichChar {
            prime,
            exponent: t.rem_euclid(prime as i64 - 1) as u64,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// 1 for the trivial character, `p` otherwise.
    pub fn conductor(&self) -> u64 {
        if self.is_trivial() {
            1
        } else {
            self.prime
        }
    }

    /// `χ · ω^t`.
    pub fn twist(&self, t: i64) -> Self {
        TeichChar::new(self.prime, self.exponent as i64 + t).expect("prime already validated")
    }

    /// `χ(a)`: `ω(a)^t` on units, 0 at multiples of `p` unless trivial.
    pub fn value(&self, a: i64, precision: u32) -> PadicApprox {
        if self.is_trivial() {
            return PadicApprox::one(self.prime, precision);
        }
        if a.rem_euclid(self.prime as i64) == 0 {
            return PadicApprox::zero(self.prime, precision);
        }
        teichmuller(a, self.prime, precision)
            .expect("coprime")
            .pow(self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{binom_int, rat, ratio};
    use proptest::prelude::*;

    fn pa(p: u64, n: i64, prec: u32) -> PadicApprox {
        PadicApprox::from_int(p, n, prec)
    }

    #[test]
    fn embed_examples() {
        let x = PadicApprox::embed(&ratio(1, 2), 5, 3).unwrap();
        assert_eq!(x.residue(), &BigUint::from(63u32));
        let z = PadicApprox::embed(&rat(0), 5, 4).unwrap();
        assert_eq!(z.valuation(), Valuation::AtLeast(4));
        let f = PadicApprox::embed(&rat(5), 5, 3).unwrap();
        assert_eq!(f.residue(), &BigUint::from(5u32));
        assert_eq!(f.valuation(), Valuation::Exact(1));
        assert!(matches!(
            PadicApprox::embed(&ratio(1, 5), 5, 3),
            Err(Error::DenominatorDivisibleByP { .. })
        ));
        let neg = PadicApprox::embed(&rat(-1), 5, 2).unwrap();
        assert_eq!(neg.residue(), &BigUint::from(24u32));
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 5, 4).unwrap(), pa(5, 1, 4));
        assert_eq!(teichmuller(2, 5, 2).unwrap().residue(), &BigUint::from(7u32));
        let w = teichmuller(2, 5, 3).unwrap();
        assert_eq!(w.residue(), &BigUint::from(57u32));
        assert_eq!(w.pow(2), pa(5, -1, 3));
        assert!(matches!(teichmuller(10, 5, 3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn teichmuller_multiplicative() {
        for p in [3u64, 5, 7, 11] {
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    let wa = teichmuller(a, p, 8).unwrap();
                    let wb = teichmuller(b, p, 8).unwrap();
                    let wab = teichmuller(a * b, p, 8).unwrap();
                    assert_eq!(&wa * &wb, wab);
                    assert_eq!(wa.pow(p - 1), pa(p, 1, 8));
                }
            }
        }
    }

    #[test]
    fn log_examples() {
        assert!(padic_log(&pa(5, 1, 6)).unwrap().is_indistinguishable_from_zero());
        // 5 - 25/2 + 125/3 reduced mod 5^4, independent of the series code
        let oracle = PadicApprox::embed(&(rat(5) - ratio(25, 2) + ratio(125, 3)), 5, 4).unwrap();
        let l = padic_log(&pa(5, 6, 4)).unwrap();
        assert_eq!(l.residue(), &BigUint::from(555u32));
        assert_eq!(l, oracle);
        assert!(matches!(padic_log(&pa(5, 2, 4)), Err(Error::NotOneUnit)));
    }

    #[test]
    fn exp_log_inverse() {
        assert_eq!(padic_exp(&pa(5, 0, 5)).unwrap(), pa(5, 1, 5));
        let six = pa(5, 6, 4);
        assert_eq!(padic_exp(&padic_log(&six).unwrap()).unwrap(), six);
        let x = pa(5, 5, 4);
        assert_eq!(padic_log(&padic_exp(&x).unwrap()).unwrap(), x);
        let two_log = &pa(5, 2, 4) * &padic_log(&six).unwrap();
        assert_eq!(padic_exp(&two_log).unwrap(), pa(5, 36, 4));
        assert!(matches!(padic_exp(&pa(5, 2, 4)), Err(Error::OutOfDomain)));
    }

    #[test]
    fn power_zp_examples() {
        let u = pa(5, 6, 4);
        // s ≡ 0 mod 5^4 gives u^s ≡ 1 mod 5^5, so only congruence is asserted
        assert!(power_zp(&u, &pa(5, 0, 4)).unwrap().congruent(&pa(5, 1, 4), 4));
        assert_eq!(power_zp(&u, &pa(5, 1, 4)).unwrap(), u);
        assert_eq!(power_zp(&u, &pa(5, 3, 4)).unwrap(), pa(5, 216, 4));
        // square root: (u^{1/2})^2 = u
        let half = PadicApprox::embed(&ratio(1, 2), 5, 6).unwrap();
        let r = power_zp(&pa(5, 11, 6), &half).unwrap();
        assert_eq!(r.pow(2), pa(5, 11, 6));
    }

    #[test]
    fn binom_zp_examples() {
        let s = pa(5, 7, 6);
        assert_eq!(binom_zp(&s, 0).unwrap(), pa(5, 1, 6));
        let s = PadicApprox::embed(&rat(-3), 5, 6).unwrap();
        assert_eq!(binom_zp(&s, 2).unwrap(), pa(5, 6, 6));
        let s = PadicApprox::embed(&ratio(-7, 2), 5, 8).unwrap();
        let exact = ratio(-7, 2) * ratio(-9, 2) * ratio(-11, 2) / rat(6);
        let b = binom_zp(&s, 3).unwrap();
        assert!(b.congruent(&PadicApprox::embed(&exact, 5, 8).unwrap(), b.precision()));
        // loses v_5(5!) = 1 digit on a generic argument
        let s = PadicApprox::embed(&ratio(1, 3), 5, 8).unwrap();
        assert_eq!(binom_zp(&s, 5).unwrap().precision(), 7);
    }

    #[test]
    fn binom_zp_matches_binom_int() {
        for n in -12i64..=12 {
            for k in 0..=12u64 {
                let s = PadicApprox::from_int(5, n, 10);
                let b = binom_zp(&s, k).unwrap();
                let e = PadicApprox::embed(&binom_int(n, k as u32), 5, 10).unwrap();
                assert!(b.congruent(&e, b.precision()), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn angle_bracket_examples() {
        let q = QParam::with_prime(rat(6), 5).unwrap();
        assert_eq!(angle_bracket(1, &q, 5).unwrap(), pa(5, 1, 5));
        let b = angle_bracket(2, &q, 3).unwrap();
        let oracle = pa(5, 7, 3).checked_div(&pa(5, 57, 3)).unwrap();
        assert_eq!(b, oracle);
        for a in 1..=4 {
            assert_eq!(angle_bracket(a, &q, 4).unwrap().residue_mod_p(), 1);
        }
        assert!(matches!(angle_bracket(5, &q, 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn q_power_valuation_law() {
        // v_p(q^m - 1) = v_p(q - 1) + v_p(m) for q ≡ 1 mod p
        for (q, vq) in [(6i64, 1u32), (26, 2), (11, 1)] {
            for m in 1..=200u64 {
                let qm = crate::scalar::Scalar::powu(&rat(q), m) - rat(1);
                let v = crate::kernel::valuation_rational(&qm, 5).unwrap() as u32;
                let vm = crate::kernel::valuation_int(&BigInt::from(m), 5).unwrap();
                assert_eq!(v, vq + vm, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn division_precision_rules() {
        let x = pa(5, 50, 6); // valuation 2
        let y = pa(5, 10, 6); // valuation 1
        let z = x.checked_div(&y).unwrap();
        assert_eq!(z.precision(), 5);
        assert_eq!(z, pa(5, 5, 5));
        assert!(matches!(y.checked_div(&x), Err(Error::NegativeValuation)));
        assert!(matches!(
            x.checked_div(&pa(5, 0, 6)),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn serde_and_display() {
        let x = pa(5, 5 + 3 * 25, 4);
        assert_eq!(x.to_string(), "...0 3 1 0 mod 5^4");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"residue":"80","mod":"5^4","valuation":1}"#);
        let back: PadicApprox = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        let z = pa(5, 0, 3);
        let js = serde_json::to_string(&z).unwrap();
        assert!(js.contains(r#""valuation":">=3""#));
        assert_eq!(serde_json::from_str::<PadicApprox>(&js).unwrap(), z);
        assert!(serde_json::from_str::<PadicApprox>(
            r#"{"residue":"80","mod":"5^4","valuation":2}"#
        )
        .is_err());
    }

    #[test]
    fn character_values() {
        let chi = TeichChar::new(5, 6).unwrap();
        assert_eq!(chi.exponent(), 2);
        assert_eq!(chi.conductor(), 5);
        assert!(chi.value(10, 4).is_indistinguishable_from_zero());
        let triv = TeichChar::new(5, -4).unwrap();
        assert!(triv.is_trivial());
        assert_eq!(triv.value(5, 4), pa(5, 1, 4));
        assert_eq!(chi.value(2, 3), teichmuller(2, 5, 3).unwrap().pow(2));
    }

    fn exact_to(p: u64, x: &BigInt, n: u32) -> PadicApprox {
        PadicApprox::from_bigint(p, x, n)
    }

    proptest! {
        // Results computed from low-precision inputs agree with the exact
        // integer computation modulo the reported precision.
        #[test]
        fn precision_soundness(a in -5000i64..5000, b in -5000i64..5000,
                               na in 1u32..8, nb in 1u32..8) {
            let p = 5;
            let (ea, eb) = (BigInt::from(a), BigInt::from(b));
            let x = exact_to(p, &ea, na);
            let y = exact_to(p, &eb, nb);
            let s = &x + &y;
            prop_assert!(s.congruent(&exact_to(p, &(&ea + &eb), 20), s.precision()));
            let m = &x * &y;
            prop_assert!(m.congruent(&exact_to(p, &(&ea * &eb), 20), m.precision()));
            if let Ok(d) = x.checked_div(&y) {
                // compare against the exact rational quotient
                // Rational::new cancels common factors of p
                if let Ok(q) = PadicApprox::embed(&Rational::new(ea.clone(), eb.clone()), p, 20) {
                    prop_assert!(d.congruent(&q, d.precision()));
                }
            }
        }

        #[test]
        fn power_zp_additive(s1 in -40i64..40, s2 in -40i64..40, u in 0i64..200) {
            let p = 5;
            let base = PadicApprox::from_int(p, 1 + 5 * u, 8);
            let a = power_zp(&base, &PadicApprox::from_int(p, s1, 8)).unwrap();
            let b = power_zp(&base, &PadicApprox::from_int(p, s2, 8)).unwrap();
            let c = power_zp(&base, &PadicApprox::from_int(p, s1 + s2, 8)).unwrap();
            let ab = &a * &b;
            prop_assert!(ab.congruent(&c, ab.precision().min(c.precision())));
        }
    }

}
