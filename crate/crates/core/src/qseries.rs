//! q-Euler numbers and polynomials, alternating power sums and their closed
//! forms, the distribution relation, and the fermionic Riemann-sum oracle.
//!
//! Everything here is generic over [`Scalar`]: with [`Rational`] the results
//! are exact, with `f64` the same formulas give floating-point values.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{q_int, q_int_neg, ratio, QParam};
use crate::scalar::{binomial, sign, Scalar};
use crate::Rational;

/// The argument `x = a/F` of an Euler polynomial in the number system with
/// base `base^F`. Then `(base^F)^x = base^a` exactly, so no fractional power
/// is ever taken.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyArg<T> {
    pub a: u64,
    pub f: u64,
    pub base: T,
}

impl<T: Scalar> PolyArg<T> {
    pub fn new(a: u64, f: u64, base: T) -> Result<Self> {
        if f == 0 || f.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("F must be odd and positive, got {f}")));
        }
        Ok(PolyArg { a, f, base })
    }

    /// Integer argument `x = n` with base `q`.
    pub fn integer(n: u64, q: T) -> Self {
        PolyArg { a: n, f: 1, base: q }
    }

    /// The base `q^F` of the number system.
    pub fn system_base(&self) -> T {
        self.base.powu(self.f)
    }
}

/// `E_{n,Q}(x) = 2 (1/(1-Q))^n Σ_k C(n,k) (-Q^x)^k / (1 + Q^k)`, given `Q`
/// and `Q^x`.
pub fn euler_poly_raw<T: Scalar>(n: u64, big_q: &T, q_pow_x: &T) -> Result<T> {
    if big_q.is_one() {
        return Err(Error::QIsOne);
    }
    let mut sum = T::zero();
    let mut qk = T::one();
    let mut qxk = T::one();
    for k in 0..=n {
        let denom = T::one() + qk.clone();
        if denom.is_zero() {
            return Err(Error::DivisionByZero("1 + Q^k in a q-Euler sum"));
        }
        sum = sum + binomial::<T>(n, k) * sign::<T>(k) * qxk.clone() / denom;
        qk = qk * big_q.clone();
        qxk = qxk * q_pow_x.clone();
    }
    let scale = (T::one() / (T::one() - big_q.clone())).powu(n);
    Ok(T::from_int(2) * scale * sum)
}

/// q-Euler number `E_{m,q} = 2 (1/(1-q))^m Σ_i C(m,i) (-1)^i / (1 + q^i)`.
pub fn euler_number_q<T: Scalar>(m: u64, q: &T) -> Result<T> {
    euler_poly_raw(m, q, &T::one())
}

/// `E_{n,q^F}(a/F)`.
pub fn euler_poly_q<T: Scalar>(n: u64, arg: &PolyArg<T>) -> Result<T> {
    euler_poly_raw(n, &arg.system_base(), &arg.base.powu(arg.a))
}

/// Classical Euler numbers `E_0, ..., E_n` (coefficients of `2/(e^t+1)`),
/// from `2 E_n + Σ_{k<n} C(n,k) E_k = 0`, i.e. `E_n(1) + E_n(0) = 0`.
pub fn euler_numbers_classical(n: u64) -> Vec<Rational> {
    let mut e: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if m == 0 {
            e.push(Rational::one());
            continue;
        }
        let s: Rational = (0..m).map(|k| binomial::<Rational>(m, k) * &e[k as usize]).sum();
        e.push(-s / Rational::from_integer(2.into()));
    }
    e
}

pub fn euler_number_classical(n: u64) -> Rational {
    euler_numbers_classical(n).pop().expect("nonempty")
}

/// Classical Euler polynomial `E_n(x) = Σ_k C(n,k) E_k x^{n-k}`.
pub fn euler_poly_classical(n: u64, x: &Rational) -> Rational {
    let e = euler_numbers_classical(n);
    (0..=n)
        .map(|k| binomial::<Rational>(n, k) * &e[k as usize] * x.powu(n - k))
        .sum()
}

/// `E_{m,Q}`, falling back to the classical number when `Q = 1`.
pub fn euler_number_or_classical(m: u64, big_q: &Rational) -> Rational {
    if big_q.is_one() {
        euler_number_classical(m)
    } else {
        euler_number_q(m, big_q).expect("Q != 1 and 1 + Q^i != 0 for Q ≡ 1 mod p")
    }
}

/// `E_{n,q^F}(a/F)`, falling back to the classical polynomial at `q = 1`.
pub fn euler_poly_or_classical(n: u64, arg: &PolyArg<Rational>) -> Rational {
    if arg.base.is_one() {
        euler_poly_classical(n, &ratio(arg.a as i64, arg.f as i64))
    } else {
        euler_poly_q(n, arg).expect("base != 1")
    }
}

/// `2 Σ_{l=0}^{n-1} (-1)^l [l]_q^m` by direct summation.
pub fn alt_power_sum<T: Scalar>(n: u64, m: u64, q: &T) -> T {
    let mut acc = T::zero();
    for l in 0..n {
        acc = acc + sign::<T>(l) * q_int(l, q).powu(m);
    }
    T::from_int(2) * acc
}

/// Closed form of the alternating power sum through q-Euler numbers:
/// `(-1)^{n+1} Σ_{l<m} C(m,l) q^{nl} E_{l,q} [n]_q^{m-l} + ((-1)^{n+1} q^{nm} + 1) E_{m,q}`.
pub fn alt_power_sum_closed<T: Scalar>(n: u64, m: u64, q: &T) -> Result<T> {
    let eulers = (0..=m).map(|l| euler_number_q(l, q)).collect::<Result<Vec<T>>>()?;
    Ok(closed_form_from(n, m, q, &eulers))
}

/// The closed form with Euler numbers supplied by the caller (lets the q = 1
/// path reuse it with classical numbers).
pub(crate) fn closed_form_from<T: Scalar>(n: u64, m: u64, q: &T, eulers: &[T]) -> T {
    let s = sign::<T>(n + 1);
    let qn = q.powu(n);
    let nq = q_int(n, q);
    let mut acc = T::zero();
    for l in 0..m {
        acc = acc
            + binomial::<T>(m, l) * qn.powu(l) * eulers[l as usize].clone() * nq.powu(m - l);
    }
    s.clone() * acc + (s * qn.powu(m) + T::one()) * eulers[m as usize].clone()
}

/// `(-1)^{n+1} E_{m,q}(n) + E_{m,q}` (polynomial form of the alternating sum).
pub fn alt_power_sum_polyform<T: Scalar>(n: u64, m: u64, q: &T) -> Result<T> {
    let at_n = euler_poly_q(m, &PolyArg::integer(n, q.clone()))?;
    Ok(sign::<T>(n + 1) * at_n + euler_number_q(m, q)?)
}

/// Convolution form `E_{n,q}(a) = Σ_j C(n,j) q^{ja} E_{j,q} [a]_q^{n-j}`.
pub fn euler_poly_convolution<T: Scalar>(n: u64, a: u64, q: &T) -> Result<T> {
    let qa = q.powu(a);
    let aq = q_int(a, q);
    let mut acc = T::zero();
    for j in 0..=n {
        acc = acc + binomial::<T>(n, j) * qa.powu(j) * euler_number_q(j, q)? * aq.powu(n - j);
    }
    Ok(acc)
}

/// Both sides of the distribution relation
/// `E_{n,q}(x) = [m]_q^n Σ_{a<m} (-1)^a E_{n,q^m}((a+x)/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionCheck<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Scalar> DistributionCheck<T> {
    pub fn holds_exactly(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Distribution relation at `x = arg.a / arg.f` with `q = arg.base^F`.
/// `(a + x)/m` is realized as the argument `(a F + arg.a) / (m F)` over the
/// same root, so both sides stay in `T` exactly.
pub fn distribution_check<T: Scalar>(
    n: u64,
    m: u64,
    arg: &PolyArg<T>,
) -> Result<DistributionCheck<T>> {
    if m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("m must be odd, got {m}")));
    }
    let lhs = euler_poly_q(n, arg)?;
    let q = arg.system_base();
    let mut sum = T::zero();
    for a in 0..m {
        let shifted = PolyArg::new(a * arg.f + arg.a, m * arg.f, arg.base.clone())?;
        sum = sum + sign::<T>(a) * euler_poly_q(n, &shifted)?;
    }
    let rhs = q_int(m, &q).powu(n) * sum;
    Ok(DistributionCheck { lhs, rhs })
}

/// Level-`L` Riemann sum for the fermionic integral
/// `(2/[2]_q) ∫ q^{-x} [x]_q^m dμ_{-q}(x)`, with
/// `μ_{-q}(x + p^L Z_p) = (-q)^x / [p^L]_{-q}`.
///
/// Since `q^{-x} (-q)^x = (-1)^x`, the sum is
/// `(2/[2]_q) (1/[p^L]_{-q}) Σ_{x<p^L} (-1)^x [x]_q^m`.
pub fn fermionic_riemann(m: u64, q: &QParam, level: u32) -> Result<Rational> {
    let p = q
        .prime()
        .ok_or_else(|| Error::InvalidParameter("fermionic sum needs a prime context".into()))?;
    if level == 0 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    let qv = q.value();
    let count = p.pow(level);
    let mut acc = Rational::zero();
    let mut qx = Rational::zero();
    let mut pw = Rational::one();
    for x in 0..count {
        let term = qx.powu(m);
        if x % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        qx += &pw;
        pw *= qv;
    }
    let two = Rational::from_integer(2.into());
    Ok(two / q_int(2, qv) / q_int_neg(count, qv)? * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, valuation_rational};

    #[test]
    fn euler_number_small() {
        for q in [ratio(1, 2), rat(6), rat(-2)] {
            assert_eq!(euler_number_q(0, &q).unwrap(), rat(1));
        }
        let q = rat(6);
        assert_eq!(euler_number_q(1, &q).unwrap(), ratio(-1, 7));
        assert_eq!(euler_number_q(2, &q).unwrap(), ratio(5, 259));
        // symbolic forms at another q
        let q = ratio(2, 3);
        let one = rat(1);
        assert_eq!(euler_number_q(1, &q).unwrap(), -one.clone() / (&one + &q));
        assert_eq!(
            euler_number_q(2, &q).unwrap(),
            (&q - &one) / ((&one + &q) * (&one + &q * &q))
        );
        assert_eq!(euler_number_q(3, &rat(1)), Err(Error::QIsOne));
    }

    #[test]
    fn euler_poly_examples() {
        let q = ratio(3, 5);
        for n in 0..8 {
            assert_eq!(
                euler_poly_q(n, &PolyArg::integer(0, q.clone())).unwrap(),
                euler_number_q(n, &q).unwrap()
            );
        }
        let arg = PolyArg::new(2, 3, ratio(1, 2)).unwrap();
        assert_eq!(euler_poly_q(0, &arg).unwrap(), rat(1));
        let e11 = euler_poly_q(1, &PolyArg::integer(1, q.clone())).unwrap();
        assert_eq!(e11, rat(1) / (rat(1) + &q));
        assert!(PolyArg::new(1, 4, rat(2)).is_err());
    }

    #[test]
    fn classical_euler() {
        let e = euler_numbers_classical(10);
        assert_eq!(e[0], rat(1));
        assert_eq!(e[1], ratio(-1, 2));
        assert_eq!(e[2], rat(0));
        assert_eq!(e[3], ratio(1, 4));
        for n in 0..=8u64 {
            for x in [rat(0), ratio(1, 2), rat(3)] {
                let lhs = euler_poly_classical(n, &(&x + rat(1))) + euler_poly_classical(n, &x);
                assert_eq!(lhs, rat(2) * x.powu(n), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn classical_numbers_match_series_expansion() {
        // 2/(e^t+1) = Σ E_n t^n/n!: multiply by (e^t + 1) and compare coefficients
        let e = euler_numbers_classical(8);
        let mut fact = vec![rat(1)];
        for i in 1..=8 {
            let prev = fact[i - 1].clone();
            fact.push(prev * rat(i as i64));
        }
        for n in 0..=8usize {
            // coefficient of t^n in (Σ E_k t^k/k!)(e^t + 1)
            let mut c = &e[n] / &fact[n];
            for k in 0..=n {
                c += &e[k] / &fact[k] / &fact[n - k];
            }
            assert_eq!(c, if n == 0 { rat(2) } else { rat(0) });
        }
    }

    #[test]
    fn alt_power_sum_examples() {
        let q = ratio(3, 4);
        assert_eq!(alt_power_sum(1, 3, &q), rat(0));
        assert_eq!(alt_power_sum(2, 1, &q), rat(-2));
        assert_eq!(alt_power_sum(3, 1, &rat(2)), rat(4));
        assert_eq!(alt_power_sum_closed(1, 1, &q).unwrap(), rat(0));
        assert_eq!(alt_power_sum_closed(2, 1, &q).unwrap(), rat(-2));
        let q = ratio(2, 3);
        assert_eq!(alt_power_sum_closed(4, 3, &q).unwrap(), alt_power_sum(4, 3, &q));
        assert_eq!(alt_power_sum_polyform(1, 1, &q).unwrap(), rat(0));
        assert_eq!(
            alt_power_sum_polyform(2, 2, &rat(6)).unwrap(),
            alt_power_sum(2, 2, &rat(6))
        );
    }

    #[test]
    fn three_forms_agree() {
        for q in [ratio(1, 2), rat(6), rat(-2), ratio(2, 3)] {
            for n in 1..=8 {
                for m in 1..=8 {
                    let d = alt_power_sum(n, m, &q);
                    assert_eq!(alt_power_sum_closed(n, m, &q).unwrap(), d);
                    assert_eq!(alt_power_sum_polyform(n, m, &q).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn convolution_form() {
        for q in [ratio(1, 2), rat(6)] {
            for n in 0..=6 {
                for a in 0..=4 {
                    assert_eq!(
                        euler_poly_convolution(n, a, &q).unwrap(),
                        euler_poly_q(n, &PolyArg::integer(a, q.clone())).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn distribution_relation() {
        let one = distribution_check(3, 1, &PolyArg::new(1, 3, rat(2)).unwrap()).unwrap();
        assert!(one.holds_exactly());
        let c = distribution_check(1, 3, &PolyArg::integer(0, rat(2))).unwrap();
        assert!(c.holds_exactly());
        let c = distribution_check(4, 5, &PolyArg::new(1, 3, ratio(1, 2)).unwrap()).unwrap();
        assert!(c.holds_exactly());
        assert!(distribution_check(2, 4, &PolyArg::integer(0, rat(2))).is_err());
    }

    #[test]
    fn distribution_relation_float() {
        // genuine q = 1/2, x = 1/3 with a real cube root
        let root = 0.5f64.powf(1.0 / 3.0);
        let c = distribution_check(4, 5, &PolyArg::new(1, 3, root).unwrap()).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-9 * c.lhs.abs().max(1.0));
    }

    #[test]
    fn generic_float_matches_exact() {
        let q = ratio(1, 4);
        for m in 0..8 {
            let exact = crate::kernel::to_f64(&euler_number_q(m, &q).unwrap());
            let float = euler_number_q(m, &0.25f64).unwrap();
            assert!((exact - float).abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn q_to_one_limit() {
        let classical = euler_numbers_classical(6);
        for m in 0..=6u64 {
            let gaps: Vec<Rational> = [10i64, 100, 1000]
                .iter()
                .map(|&t| {
                    let q = rat(1) + ratio(1, t);
                    let g = euler_number_q(m, &q).unwrap() - &classical[m as usize];
                    if g < rat(0) {
                        -g
                    } else {
                        g
                    }
                })
                .collect();
            assert!(gaps[1] <= gaps[0] && gaps[2] <= gaps[1], "m={m}");
            assert!(gaps[2] < ratio(1, 100), "m={m}");
        }
    }

    #[test]
    fn fermionic_oracle() {
        let q = QParam::with_prime(rat(6), 5).unwrap();
        for level in 1..=2 {
            // total mass of the measure is exactly 1; the m = 0 moment converges
            let f0 = fermionic_riemann(0, &q, level).unwrap();
            let gap = valuation_rational(&(f0 - rat(1)), 5).unwrap();
            assert_eq!(gap, level as i64 + 1);
        }
        let f = fermionic_riemann(1, &q, 3).unwrap();
        let v = valuation_rational(&(f - ratio(-1, 7)), 5).unwrap();
        assert!(v >= 3);
        for m in 0..=4u64 {
            let target = euler_number_q(m, q.value()).unwrap();
            let mut last = i64::MIN;
            for level in 1..=3 {
                let v = valuation_rational(&(fermionic_riemann(m, &q, level).unwrap() - &target), 5)
                    .unwrap_or(i64::MAX);
                assert!(v >= last, "m={m} L={level}");
                last = v;
            }
        }
        assert!(fermionic_riemann(1, &QParam::from_ratio(6, 1), 2).is_err());
    }
}
