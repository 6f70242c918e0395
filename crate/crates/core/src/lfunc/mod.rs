//! The p-adic q-l-function and its companions.
//!
//! For an odd prime `p`, `q ≡ 1 mod p` and an odd multiple `F` of `p`:
//!
//! ```text
//! H_{p,q}(s,a:F) = ((-1)^a/2) <a>^{-s} Σ_{j≥0} C(-s,j) q^{ja} ([F]_q/[a]_q)^j E_{j,q^F}
//! l_{p,q}(s,χ)   = 2 Σ_{a=1,(a,p)=1}^{F} χ(a) H_{p,q}(s,a:F)
//! T_{n,q}(s,a:F) = (-1)^a <a>^{-s} Σ_{k≥1} C(-s,k) ([F]_q/[a]_q)^k q^{ak} ((-1)^n q^{nFk} - 1) E_{k,q^F}
//! K_{n,q}(s,a:F) = ((-1)^a/2) <a>^{-s} Σ_{l≥1} C(-s,l) q^{al} ([F]_q/[a]_q)^l E_{l,q^F}
//!                      · Σ_{j=1}^{l} C(l,j) [nF]_q^j (q-1)^j
//! ```
//!
//! The Euler numbers `E_{j,q^F}` are computed exactly and embedded; only
//! `<a>^{-s}` and `C(-s,j)` are genuinely p-adic. Each infinite series is cut
//! off by [`SeriesBudget`]: summation stops once `window` consecutive terms
//! are below the target valuation *and* the a-priori bound `j · g` (with `g`
//! the exact valuation of the geometric factor) certifies the tail. The
//! result's precision is capped by that tail bound.

pub mod expansion;

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::{q_int, valuation_rational, QParam};
use crate::padic::{angle_bracket, binom_zp, power_zp, PadicApprox, TeichChar};
use crate::qseries::{euler_number_or_classical, euler_poly_or_classical, PolyArg};
use crate::scalar::{binomial, Scalar};
use crate::Rational;

/// Truncation policy for the infinite p-adic series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SeriesBudget {
    /// Target precision `M`: tails must be certified to vanish mod `p^M`.
    pub target: u32,
    /// Hard cap on the number of terms.
    pub k_max: usize,
    /// Consecutive negligible terms required before stopping.
    pub window: usize,
}

impl SeriesBudget {
    pub fn new(target: u32, k_max: usize, window: usize) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidParameter("target precision must be >= 1".into()));
        }
        if window < 3 || k_max <= window {
            return Err(Error::InvalidParameter(format!(
                "need k_max > window >= 3, got k_max={k_max}, window={window}"
            )));
        }
        Ok(SeriesBudget {
            target,
            k_max,
            window,
        })
    }

    pub fn with_target(target: u32) -> Result<Self> {
        Self::new(target, 80, 5)
    }
}

/// A truncated series value with the index of the first unsummed term.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSum {
    pub value: PadicApprox,
    pub terms: usize,
}

/// Sum `term(j)` for `j = start, start+1, ...` under the budget.
///
/// `bound(j)` is a certified lower bound for `v_p(term(j))`; it must be
/// nondecreasing so that `bound(J)` bounds the whole tail from `J` on.
pub(crate) fn certified_sum(
    series: &'static str,
    budget: &SeriesBudget,
    start: usize,
    zero: PadicApprox,
    bound: impl Fn(usize) -> i64,
    mut term: impl FnMut(usize) -> Result<PadicApprox>,
) -> Result<SeriesSum> {
    let target = budget.target as i64;
    let mut acc = zero;
    let mut quiet = 0usize;
    let mut j = start;
    while j < budget.k_max {
        let t = term(j)?;
        if t.valuation().lower_bound() as i64 >= target {
            quiet += 1;
        } else {
            quiet = 0;
        }
        acc = &acc + &t;
        j += 1;
        let tail = bound(j);
        if quiet >= budget.window && tail >= target {
            let cap = tail.min(u32::MAX as i64) as u32;
            return Ok(SeriesSum {
                value: acc.reduce(cap),
                terms: j,
            });
        }
    }
    Err(Error::TruncationNotConverged {
        series,
        terms: budget.k_max,
    })
}

/// Lazily extended tables of `E_{j,q^F}`, keyed by the exponent `F`.
#[derive(Debug, Default)]
struct EulerCache {
    tables: Mutex<HashMap<u64, Vec<Rational>>>,
}

impl EulerCache {
    fn get(&self, q: &Rational, f: u64, j: usize) -> Rational {
        let mut tables = self.tables.lock().expect("cache lock");
        let table = tables.entry(f).or_default();
        if table.len() <= j {
            let base = q.powu(f);
            for m in table.len()..=j {
                table.push(euler_number_or_classical(m as u64, &base));
            }
        }
        table[j].clone()
    }
}

/// Evaluation context: prime, parameter `q` (with `v_p(q-1) >= 1`, `q = 1`
/// allowed for the classical path), working precision and series budget.
#[derive(Debug)]
pub struct PadicL {
    q: QParam,
    prime: u64,
    precision: u32,
    budget: SeriesBudget,
    euler: EulerCache,
}

impl PadicL {
    pub fn new(q: QParam, precision: u32, budget: SeriesBudget) -> Result<Self> {
        let prime = q
            .prime()
            .ok_or_else(|| Error::InvalidParameter("q needs a prime context".into()))?;
        if precision < budget.target {
            return Err(Error::InvalidParameter(format!(
                "working precision {precision} is below the target {}",
                budget.target
            )));
        }
        Ok(PadicL {
            q,
            prime,
            precision,
            budget,
            euler: EulerCache::default(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn budget(&self) -> &SeriesBudget {
        &self.budget
    }

    /// Same context with a different budget (fresh cache).
    pub fn with_budget(&self, budget: SeriesBudget) -> Result<Self> {
        PadicL::new(self.q.clone(), self.precision.max(budget.target), budget)
    }

    pub(crate) fn qv(&self) -> &Rational {
        self.q.value()
    }

    pub(crate) fn embed(&self, x: &Rational) -> Result<PadicApprox> {
        PadicApprox::embed(x, self.prime, self.precision)
    }

    pub(crate) fn int(&self, n: i64) -> PadicApprox {
        PadicApprox::from_int(self.prime, n, self.precision)
    }

    /// `E_{j,q^F}` (classical when `q = 1`).
    pub fn euler_number(&self, j: usize, f: u64) -> Rational {
        self.euler.get(self.qv(), f, j)
    }

    /// `s` as an element of the context's prime field at working precision.
    pub fn point(&self, s: &Rational) -> Result<PadicApprox> {
        self.embed(s)
    }

    fn check_residue(&self, a: u64, f: u64) -> Result<()> {
        let p = self.prime;
        if f.is_multiple_of(2) || !f.is_multiple_of(p) {
            return Err(Error::InvalidParameter(format!(
                "F must be an odd multiple of p = {p}, got {f}"
            )));
        }
        if a == 0 || a >= f {
            return Err(Error::InvalidParameter(format!("need 0 < a < F, got a = {a}")));
        }
        if a.is_multiple_of(p) {
            return Err(Error::NotCoprime {
                a: a as i64,
                prime: p,
            });
        }
        Ok(())
    }

    /// `[F]_q / [a]_q` and its (exact) valuation, the geometric gain.
    fn ratio_and_gain(&self, a: u64, f: u64) -> (Rational, i64) {
        let ratio = q_int(f, self.qv()) / q_int(a, self.qv());
        let gain = valuation_rational(&ratio, self.prime).expect("nonzero ratio");
        (ratio, gain)
    }

    /// `<a>^{-s}`.
    fn bracket_power(&self, a: u64, s: &PadicApprox) -> Result<PadicApprox> {
        let b = angle_bracket(a as i64, &self.q, self.precision)?;
        power_zp(&b, &-s)
    }

    /// Shared shape of the H, T and K series: `Σ_{j≥start} C(-s,j) coeff(j)`
    /// with `v(coeff(j)) >= j · gain`.
    fn binomial_series(
        &self,
        series: &'static str,
        s: &PadicApprox,
        start: usize,
        gain: i64,
        mut coeff: impl FnMut(usize) -> Rational,
    ) -> Result<SeriesSum> {
        if gain < 1 {
            return Err(Error::TruncationNotConverged { series, terms: 0 });
        }
        let neg_s = -s;
        certified_sum(
            series,
            &self.budget,
            start,
            PadicApprox::zero(self.prime, self.precision),
            |j| j as i64 * gain,
            |j| {
                let c = self.embed(&coeff(j))?;
                Ok(&binom_zp(&neg_s, j as u64)? * &c)
            },
        )
    }

    fn half_sign(&self, a: u64) -> Rational {
        let h = Rational::new(1.into(), 2.into());
        if a.is_multiple_of(2) {
            h
        } else {
            -h
        }
    }

    /// Inner sum of `H_{p,q}(s,a:F)` without the `((-1)^a/2) <a>^{-s}` factor.
    fn h_inner(&self, s: &PadicApprox, a: u64, f: u64) -> Result<SeriesSum> {
        let (ratio, gain) = self.ratio_and_gain(a, f);
        let qa = self.qv().powu(a);
        self.binomial_series("H_{p,q}", s, 0, gain, |j| {
            qa.powu(j as u64) * ratio.powu(j as u64) * self.euler_number(j, f)
        })
    }

    /// p-adic partial function `H_{p,q}(s, a:F)`.
    pub fn h_pq(&self, s: &PadicApprox, a: u64, f: u64) -> Result<PadicApprox> {
        self.check_residue(a, f)?;
        let inner = self.h_inner(s, a, f)?.value;
        let pref = &self.embed(&self.half_sign(a))? * &self.bracket_power(a, s)?;
        Ok(&pref * &inner)
    }

    /// p-adic q-l-function `l_{p,q}(s, χ) = 2 Σ_{a≤F,(a,p)=1} χ(a) H_{p,q}(s,a:F)`.
    pub fn l_pq(&self, s: &PadicApprox, chi: &TeichChar, f: u64) -> Result<PadicApprox> {
        self.residue_sum(chi, f, None, |a| self.h_pq(s, a, f))
    }

    /// `2 Σ_a χ(a) [q^{a·w}] g(a)` over `0 < a < F`, `(a,p) = 1`.
    pub(crate) fn residue_sum(
        &self,
        chi: &TeichChar,
        f: u64,
        weight: Option<u64>,
        mut g: impl FnMut(u64) -> Result<PadicApprox>,
    ) -> Result<PadicApprox> {
        if chi.prime() != self.prime {
            return Err(Error::InvalidParameter("character prime mismatch".into()));
        }
        let mut acc = PadicApprox::zero(self.prime, self.precision);
        for a in 1..f {
            if a % self.prime == 0 {
                continue;
            }
            let mut term = &chi.value(a as i64, self.precision) * &g(a)?;
            if let Some(w) = weight {
                term = &term * &self.embed(&self.qv().powu(a * w))?;
            }
            acc = &acc + &term;
        }
        Ok(&acc * &self.int(2))
    }

    /// `T_{n,q}(s, a:F)`; `n` must be a positive even integer.
    pub fn t_pq(&self, n: u64, s: &PadicApprox, a: u64, f: u64) -> Result<PadicApprox> {
        self.check_residue(a, f)?;
        check_even(n)?;
        let (ratio, gain) = self.ratio_and_gain(a, f);
        let qa = self.qv().powu(a);
        let big_q = self.qv().powu(f);
        let inner = self.binomial_series("T_{n,q}", s, 1, gain, |k| {
            let k = k as u64;
            let shift = big_q.powu(n * k) - Rational::one();
            ratio.powu(k) * qa.powu(k) * shift * self.euler_number(k as usize, f)
        })?;
        let sign = self.int(if a.is_multiple_of(2) { 1 } else { -1 });
        Ok(&(&sign * &self.bracket_power(a, s)?) * &inner.value)
    }

    /// `T_{p,q}(s, χ) = 2 Σ_{a=1}^{p-1} χ(a) T_{n,q}(s, a:p)`.
    pub fn t_pq_chi(&self, n: u64, s: &PadicApprox, chi: &TeichChar) -> Result<PadicApprox> {
        let p = self.prime;
        self.residue_sum(chi, p, None, |a| self.t_pq(n, s, a, p))
    }

    /// `Σ_{j=1}^{l} C(l,j) [nF]_q^j (q-1)^j` (equal to `q^{nFl} - 1`).
    pub fn k_inner_factor(&self, n: u64, f: u64, l: u64) -> Rational {
        let nf = q_int(n * f, self.qv());
        let qm1 = self.qv() - Rational::one();
        (1..=l)
            .map(|j| binomial::<Rational>(l, j) * nf.powu(j) * qm1.powu(j))
            .sum()
    }

    fn k_inner(&self, n: u64, s: &PadicApprox, a: u64, f: u64) -> Result<SeriesSum> {
        let (ratio, gain) = self.ratio_and_gain(a, f);
        let qa = self.qv().powu(a);
        self.binomial_series("K_{n,q}", s, 1, gain, |l| {
            let l = l as u64;
            qa.powu(l) * ratio.powu(l) * self.euler_number(l as usize, f) * self.k_inner_factor(n, f, l)
        })
    }

    /// `K_{n,q}(s, a:F)`; `n` must be a positive even integer.
    pub fn k_pq(&self, n: u64, s: &PadicApprox, a: u64, f: u64) -> Result<PadicApprox> {
        self.check_residue(a, f)?;
        check_even(n)?;
        let inner = self.k_inner(n, s, a, f)?.value;
        let pref = &self.embed(&self.half_sign(a))? * &self.bracket_power(a, s)?;
        Ok(&pref * &inner)
    }

    /// `K_{p,q}(s, χ) = 2 Σ_{a=1}^{p-1} χ(a) K_{n,q}(s, a:p)`.
    pub fn k_pq_chi(&self, n: u64, s: &PadicApprox, chi: &TeichChar) -> Result<PadicApprox> {
        let p = self.prime;
        self.residue_sum(chi, p, None, |a| self.k_pq(n, s, a, p))
    }

    /// `H_{p,q}(-n, a:F)` through its finite closed form
    /// `((-1)^a/2) ω^{-n}(a) [F]_q^n E_{n,q^F}(a/F)`, with the Euler polynomial exact.
    pub fn h_pq_at_negative_integer(&self, n: u64, a: u64, f: u64) -> Result<PadicApprox> {
        self.check_residue(a, f)?;
        let arg = PolyArg::new(a, f, self.qv().clone())?;
        let exact = self.half_sign(a) * q_int(f, self.qv()).powu(n) * euler_poly_or_classical(n, &arg);
        let w = TeichChar::new(self.prime, -(n as i64))?.value(a as i64, self.precision);
        Ok(&w * &self.embed(&exact)?)
    }

    /// `E_{n,χ,q} - [p]_q^n χ(p) E_{n,χ,q^p}` with `χ = ω^t ω^{-n}`, the value
    /// `l_{p,q}(-n, ω^t)` interpolates.
    pub fn interpolated_value(&self, n: u64, chi: &TeichChar) -> Result<PadicApprox> {
        let twisted = chi.twist(-(n as i64));
        let p = self.prime;
        let first = gen_euler_teich(n, &twisted, &self.q, self.precision)?;
        if !twisted.is_trivial() {
            return Ok(first);
        }
        let second = gen_euler_teich(n, &twisted, &self.q.pow(p), self.precision)?;
        let pn = self.embed(&q_int(p, self.qv()).powu(n))?;
        Ok(&first - &(&pn * &second))
    }
}

fn check_even(n: u64) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n must be a positive even integer, got {n}")));
    }
    Ok(())
}

/// `E_{n,χ,q}` for a Teichmüller power: `E_{n,q}` for the trivial character,
/// otherwise `[p]_q^n Σ_{a=0}^{p-1} χ(a) (-1)^a E_{n,q^p}(a/p)`.
pub fn gen_euler_teich(
    n: u64,
    chi: &TeichChar,
    q: &QParam,
    precision: u32,
) -> Result<PadicApprox> {
    let p = chi.prime();
    if chi.is_trivial() {
        return PadicApprox::embed(&euler_number_or_classical(n, q.value()), p, precision);
    }
    // E_{n,q^p}(a/p) alone has p in its denominator; [p]_q^n clears it.
    let scale = q_int(p, q.value()).powu(n);
    let mut acc = PadicApprox::zero(p, precision);
    for a in 1..p {
        let arg = PolyArg::new(a, p, q.value().clone())?;
        let e = &scale * euler_poly_or_classical(n, &arg);
        let signed = if a % 2 == 0 { e } else { -e };
        acc = &acc + &(&chi.value(a as i64, precision) * &PadicApprox::embed(&signed, p, precision)?);
    }
    Ok(acc)
}
