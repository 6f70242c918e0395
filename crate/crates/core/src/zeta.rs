//! Archimedean side: the q-zeta function `ζ_{E,q}(s,x) = 2 Σ_{n≥0} (-1)^n [n+x]_q^{-s}`,
//! the partial zeta `H_q(s,a:F)`, the Dirichlet-type `l_q(s,χ)` and the
//! generalized q-Euler numbers `E_{k,χ,q}`, for real `0 < q < 1`.
//!
//! Every series here is alternating with terms `t_n -> (1-q)^s`, so it is
//! generally divergent. Its value is taken to be the Abel sum
//! `lim_{r->1-} Σ (-1)^n t_n r^n`, computed by subtracting the limit:
//!
//! ```text
//! Σ (-1)^n t_n = L/2 + Σ (-1)^n (t_n - L),   L = (1-q)^s
//! ```
//!
//! where the second sum converges geometrically. [`abel_regularized`] is an
//! independent second regularizer (direct Abel smoothing plus Richardson
//! extrapolation in `r`) used to cross-check this.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{q_int, to_f64};
use crate::qseries::{euler_poly_q, PolyArg};
use crate::scalar::Scalar;
use crate::{Complex, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchParams {
    q: f64,
    eps: f64,
    max_terms: usize,
}

impl ArchParams {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_limits(q, 1e-16, 1_000_000)
    }

    pub fn with_limits(q: f64, eps: f64, max_terms: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < q < 1, got {q}")));
        }
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidParameter(format!("need eps > 0, got {eps}")));
        }
        Ok(ArchParams { q, eps, max_terms })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same limits with `q` replaced by `q^f`.
    fn power(&self, f: u64) -> Self {
        ArchParams {
            q: self.q.powi(f as i32),
            ..*self
        }
    }
}

/// `e^w - 1` without cancellation for small `w`.
fn expm1(w: Complex) -> Complex {
    let (s, c) = w.im.sin_cos();
    let half = (w.im / 2.0).sin();
    Complex::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
}

/// Abel value of `Σ_{n≥0} (-1)^n (1 - g_0 ρ^n)^{-s}` for `0 < g_0, ρ < 1`.
fn alternating_unit_sum(s: Complex, g0: f64, rho: f64, params: &ArchParams) -> Result<Complex> {
    let mut acc = Complex::zero();
    let mut g = g0;
    for n in 0..params.max_terms {
        let term = expm1(-s * (-g).ln_1p());
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        if term.norm() / (1.0 - rho) < params.eps * acc.norm().max(1.0) {
            return Ok(acc + 0.5);
        }
        g *= rho;
    }
    Err(Error::NoConvergence {
        terms: params.max_terms,
    })
}

/// `ζ_{E,q}(s, x)`; the sum starts at `n = 0`.
pub fn zeta_eq(s: Complex, x: f64, params: &ArchParams) -> Result<Complex> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!("need x > 0, got {x}")));
    }
    let q = params.q;
    let limit = (s * (1.0 - q).ln()).exp();
    Ok(2.0 * limit * alternating_unit_sum(s, q.powf(x), q, params)?)
}

fn check_residue(a: u64, f: u64) -> Result<()> {
    if f.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("F must be odd, got {f}")));
    }
    if a == 0 || a > f {
        return Err(Error::InvalidParameter(format!("need 0 < a <= F, got a={a}, F={f}")));
    }
    Ok(())
}

/// `H_q(s,a:F) = (-1)^a ([F]_q^{-s} / 2) ζ_{E,q^F}(s, a/F)`.
pub fn partial_zeta_hq(s: Complex, a: u64, f: u64, params: &ArchParams) -> Result<Complex> {
    check_residue(a, f)?;
    let sign = if a.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fq = q_int(f, &params.q);
    let scale = (-s * fq.ln()).exp();
    let z = zeta_eq(s, a as f64 / f as f64, &params.power(f))?;
    Ok(sign * scale / 2.0 * z)
}

/// `Σ_{m ≡ a (F), m > 0} (-1)^m [m]_q^{-s}` summed directly over the residue class.
pub fn partial_zeta_series(s: Complex, a: u64, f: u64, params: &ArchParams) -> Result<Complex> {
    check_residue(a, f)?;
    let q = params.q;
    let sign = if a.is_multiple_of(2) { 1.0 } else { -1.0 };
    let limit = (s * (1.0 - q).ln()).exp();
    let rho = q.powi(f as i32);
    Ok(sign * limit * alternating_unit_sum(s, q.powi(a as i32), rho, params)?)
}

/// A Dirichlet character of odd conductor with complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexChar {
    conductor: u64,
    values: Vec<Complex>,
}

impl ComplexChar {
    /// Validates: values are roots of unity at residues coprime to `F` and 0
    /// elsewhere, and the table is completely multiplicative.
    pub fn new(conductor: u64, values: Vec<Complex>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if conductor == 0 || conductor.is_multiple_of(2) {
            return bad(format!("conductor must be odd, got {conductor}"));
        }
        if values.len() as u64 != conductor {
            return bad(format!("need {conductor} values, got {}", values.len()));
        }
        let tol = 1e-12;
        for (a, v) in values.iter().enumerate() {
            let coprime = num_integer::gcd(a as u64, conductor) == 1;
            if coprime {
                let order_ok = (1..=conductor as i32)
                    .any(|k| (v.powi(k) - Complex::one()).norm() < tol * k as f64 * 10.0);
                if !order_ok {
                    return bad(format!("χ({a}) = {v} is not a root of unity"));
                }
            } else if v.norm() > tol {
                return bad(format!("χ({a}) must vanish"));
            }
        }
        for a in 0..conductor as usize {
            for b in 0..conductor as usize {
                let ab = (a * b) % conductor as usize;
                if (values[a] * values[b] - values[ab]).norm() > tol * 10.0 {
                    return bad(format!("table is not multiplicative at ({a}, {b})"));
                }
            }
        }
        Ok(ComplexChar { conductor, values })
    }

    /// Trivial character, conductor 1.
    pub fn trivial() -> Self {
        ComplexChar {
            conductor: 1,
            values: vec![Complex::one()],
        }
    }

    /// Legendre symbol modulo an odd prime.
    pub fn legendre(p: u64) -> Result<Self> {
        if !crate::kernel::is_odd_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        let mut values = vec![Complex::new(-1.0, 0.0); p as usize];
        values[0] = Complex::zero();
        for x in 1..p {
            values[((x * x) % p) as usize] = Complex::one();
        }
        Self::new(p, values)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn value(&self, n: u64) -> Complex {
        self.values[(n % self.conductor) as usize]
    }
}

/// `l_q(s, χ) = 2 Σ_{a=1}^{F} χ(a) H_q(s, a:F)`.
pub fn l_q_complex(s: Complex, chi: &ComplexChar, params: &ArchParams) -> Result<Complex> {
    let f = chi.conductor();
    let mut acc = Complex::zero();
    for a in 1..=f {
        let c = chi.value(a);
        if c.is_zero() {
            continue;
        }
        acc += c * partial_zeta_hq(s, a, f, params)?;
    }
    Ok(2.0 * acc)
}

/// `E_{k,χ,q} = [f]_q^k Σ_{a=0}^{f-1} χ(a) (-1)^a E_{k,q^f}(a/f)` with the
/// Euler polynomial values computed exactly.
pub fn gen_euler_complex(k: u64, chi: &ComplexChar, q: &Rational) -> Result<Complex> {
    if !(*q > Rational::zero() && *q < Rational::one()) {
        return Err(Error::InvalidParameter(format!("need 0 < q < 1, got {q}")));
    }
    let f = chi.conductor();
    let mut acc = Complex::zero();
    for a in 0..f {
        let c = chi.value(a);
        if c.is_zero() {
            continue;
        }
        let e = euler_poly_q(k, &PolyArg::new(a, f, q.clone())?)?;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        acc += c * sign * to_f64(&e);
    }
    Ok(acc * to_f64(&q_int(f, q).powu(k)))
}

/// `2 Σ_{n≥1} χ(n) (-1)^n [n]_q^k`, regularized through the partial zeta
/// reduction (equal to `l_q(-k, χ)`).
pub fn gen_euler_series(k: u64, chi: &ComplexChar, params: &ArchParams) -> Result<Complex> {
    l_q_complex(Complex::new(-(k as f64), 0.0), chi, params)
}

/// Abel value `lim_{r->1-} Σ (-1)^n t_n r^n`, by summing at `r = 1 - h`
/// for a geometric ladder of `h` and extrapolating to `h = 0` (Neville).
pub fn abel_regularized(term: impl Fn(u64) -> Complex) -> Complex {
    const LEVELS: usize = 7;
    let h0 = 0.05f64;
    let hs: Vec<f64> = (0..LEVELS).map(|i| h0 / 2f64.powi(i as i32)).collect();
    let mut vals: Vec<Complex> = hs
        .iter()
        .map(|&h| {
            let r = 1.0 - h;
            let n_max = (40.0 / h).ceil() as u64;
            let mut acc = Complex::zero();
            let mut rn = 1.0;
            for n in 0..n_max {
                let t = term(n) * rn;
                if n % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
                rn *= r;
            }
            acc
        })
        .collect();
    // Neville's scheme evaluated at h = 0
    for level in 1..LEVELS {
        for i in (level..LEVELS).rev() {
            let (hi, hj) = (hs[i], hs[i - level]);
            vals[i] = (vals[i] * hj - vals[i - 1] * hi) / (hj - hi);
        }
    }
    vals[LEVELS - 1]
}

/// `ζ_{E,q}(s,x)` through [`abel_regularized`] instead of limit subtraction.
pub fn zeta_eq_abel(s: Complex, x: f64, q: f64) -> Complex {
    let term = |n: u64| {
        let base = (1.0 - q.powf(n as f64 + x)) / (1.0 - q);
        (-s * base.ln()).exp()
    };
    2.0 * abel_regularized(term)
}
