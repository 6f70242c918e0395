//! Reusable verification suites, each a list of named pass/fail checks.
//!
//! `exact-identities` compares finite q-identities with zero tolerance,
//! `complex` the regularized archimedean functions against exact Euler values,
//! `padic` the interpolation and congruence properties of `l_{p,q}`, and
//! `theorem5` runs the expansion audit over a grid of `(r, n)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{
    binom_identity_lowered_holds, binom_identity_reindex_holds, binom_identity_shift_holds,
    format_rational, q_int, rat, ratio, to_f64, valuation_rational, QParam,
};
use crate::lfunc::expansion::{theorem5_verify, VerificationReport};
use crate::lfunc::{PadicL, SeriesBudget};
use crate::padic::{PadicApprox, TeichChar};
use crate::qseries::{
    alt_power_sum, alt_power_sum_closed, alt_power_sum_polyform, distribution_check,
    euler_number_q, euler_poly_convolution, euler_poly_q, fermionic_riemann, PolyArg,
};
use crate::scalar::Scalar;
use crate::zeta::{gen_euler_complex, l_q_complex, zeta_eq, ArchParams, ComplexChar};
use crate::{Complex, Rational};

/// Absolute tolerance of the archimedean comparisons.
pub const COMPLEX_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ExactIdentities,
    Complex,
    Padic,
    Theorem5,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::ExactIdentities, Suite::Complex, Suite::Padic, Suite::Theorem5];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ExactIdentities => "exact-identities",
            Suite::Complex => "complex",
            Suite::Padic => "padic",
            Suite::Theorem5 => "theorem5",
        }
    }

    /// Parse a suite selector; `all` expands to every suite.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_failures(suite: Suite, name: &str, failures: Vec<String>, total: usize) -> Self {
        if failures.is_empty() {
            Check::new(suite, name, true, format!("{total} cases"))
        } else {
            let first = failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
            Check::new(suite, name, false, format!("{} of {total} cases fail: {first}", failures.len()))
        }
    }
}

/// Parameters of the p-adic and expansion suites. `None` picks the suite default.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    pub prime: u64,
    pub q: Rational,
    pub target: Option<u32>,
    pub precision: Option<u32>,
    pub k_max: usize,
    /// Restrict the expansion grid to one `r`.
    pub r: Option<u64>,
    /// Restrict the expansion grid to one `n`.
    pub n: Option<u64>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            prime: 5,
            q: rat(6),
            target: None,
            precision: None,
            k_max: 80,
            r: None,
            n: None,
        }
    }
}

impl SuiteParams {
    fn context(&self, q: Rational, target: u32, precision: u32) -> Result<PadicL> {
        let q = QParam::with_prime(q, self.prime)?;
        let budget = SeriesBudget::new(target, self.k_max, 5)?;
        PadicL::new(q, precision.max(target), budget)
    }

    fn padic_context(&self) -> Result<PadicL> {
        let target = self.target.unwrap_or(6);
        self.context(self.q.clone(), target, self.precision.unwrap_or(target + 6))
    }

    fn expansion_context(&self, q: Rational) -> Result<PadicL> {
        let target = self.target.unwrap_or(4);
        self.context(q, target, self.precision.unwrap_or(target + 10))
    }
}

/// Everything a suite run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRun {
    pub checks: Vec<Check>,
    pub reports: Vec<VerificationReport>,
}

impl SuiteRun {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Run the selected suites in order. Parameter errors surface as `Err`;
/// numerical failures are recorded as failing checks.
pub fn run(suites: &[Suite], params: &SuiteParams) -> Result<SuiteRun> {
    let mut run = SuiteRun {
        checks: Vec::new(),
        reports: Vec::new(),
    };
    let mut seen = suites.to_vec();
    seen.sort();
    seen.dedup();
    for suite in seen {
        match suite {
            Suite::ExactIdentities => run.checks.extend(exact_identities()),
            Suite::Complex => run.checks.extend(complex()),
            Suite::Padic => run.checks.extend(padic(params)?),
            Suite::Theorem5 => {
                let (checks, reports) = theorem5(params)?;
                run.checks.extend(checks);
                run.reports.extend(reports);
            }
        }
    }
    Ok(run)
}

fn exact_qs() -> [Rational; 3] {
    [ratio(1, 2), ratio(2, 3), rat(6)]
}

pub fn exact_identities() -> Vec<Check> {
    let suite = Suite::ExactIdentities;
    let mut checks = Vec::new();

    let mut fails = Vec::new();
    let mut total = 0;
    for q in exact_qs() {
        for n in 0..=12u64 {
            for m in 0..=10u64 {
                total += 1;
                let direct = alt_power_sum(n, m, &q);
                let closed = alt_power_sum_closed(n, m, &q);
                let poly = alt_power_sum_polyform(n, m, &q);
                if closed.as_ref() != Ok(&direct) || poly.as_ref() != Ok(&direct) {
                    fails.push(format!("q={} n={n} m={m}", format_rational(&q)));
                }
            }
        }
    }
    checks.push(Check::from_failures(suite, "alternating-power-sum-forms", fails, total));

    let mut fails = Vec::new();
    let mut total = 0;
    for q in exact_qs() {
        for n in 0..=12u64 {
            for a in 0..=10u64 {
                total += 1;
                let conv = euler_poly_convolution(n, a, &q);
                let direct = euler_poly_q(n, &PolyArg::integer(a, q.clone()));
                if conv.is_err() || conv != direct {
                    fails.push(format!("q={} n={n} a={a}", format_rational(&q)));
                }
            }
        }
    }
    checks.push(Check::from_failures(suite, "euler-polynomial-convolution", fails, total));

    let mut fails = Vec::new();
    let mut total = 0;
    for r in 1..=10i64 {
        for j in 0..=10u32 {
            for k in 0..=10u32 {
                if j + k > 0 && r + k as i64 != 1 {
                    total += 1;
                    if !binom_identity_shift_holds(r, j, k) {
                        fails.push(format!("shift r={r} j={j} k={k}"));
                    }
                }
                if r >= 2 {
                    total += 1;
                    if !binom_identity_lowered_holds(r, j, k) {
                        fails.push(format!("lowered r={r} j={j} k={k}"));
                    }
                }
                total += 1;
                if !binom_identity_reindex_holds(r, j, k) {
                    fails.push(format!("reindex r={r} j={j} k={k}"));
                }
            }
        }
    }
    checks.push(Check::from_failures(suite, "binomial-identities", fails, total));

    let mut fails = Vec::new();
    let mut total = 0;
    for q in [ratio(1, 2), rat(6)] {
        for (a, f) in [(0u64, 1u64), (1, 3), (2, 5)] {
            for m in [1u64, 3, 5] {
                for n in 0..=6u64 {
                    total += 1;
                    let arg = PolyArg::new(a, f, q.clone()).expect("odd F");
                    let ok = distribution_check(n, m, &arg).map(|c| c.holds_exactly());
                    if ok != Ok(true) {
                        fails.push(format!("root={} x={a}/{f} m={m} n={n}", format_rational(&q)));
                    }
                }
            }
        }
    }
    checks.push(Check::from_failures(suite, "distribution-relation", fails, total));

    let mut fails = Vec::new();
    let mut total = 0;
    let q = QParam::with_prime(rat(6), 5).expect("6 = 1 mod 5");
    for m in 0..=4u64 {
        let e = euler_number_q(m, &rat(6)).expect("q != 1");
        for level in 2..=4u32 {
            total += 1;
            let v = fermionic_riemann(m, &q, level)
                .map(|s| valuation_rational(&(s - &e), 5).unwrap_or(i64::MAX));
            match v {
                Ok(v) if v >= level as i64 - 1 => {}
                other => fails.push(format!("m={m} L={level}: {other:?}")),
            }
        }
    }
    checks.push(Check::from_failures(suite, "fermionic-riemann-sum", fails, total));
    checks
}

fn minus(k: u64) -> Complex {
    Complex::new(-(k as f64), 0.0)
}

fn close(suite: Suite, name: &str, cases: Vec<(String, Result<Complex>, Complex)>) -> Check {
    let total = cases.len();
    let mut worst = 0.0f64;
    let mut fails = Vec::new();
    for (label, got, want) in cases {
        match got {
            Ok(z) => {
                let err = (z - want).norm();
                worst = worst.max(err);
                if err.is_nan() || err >= COMPLEX_TOLERANCE {
                    fails.push(format!("{label}: |error| = {err:.3e}"));
                }
            }
            Err(e) => fails.push(format!("{label}: {e}")),
        }
    }
    let mut check = Check::from_failures(suite, name, fails, total);
    if check.passed {
        check.detail = format!("{total} cases, max |error| {worst:.3e}");
    }
    check
}

pub fn complex() -> Vec<Check> {
    let suite = Suite::Complex;
    let mut cases = Vec::new();
    for q in [ratio(1, 2), ratio(1, 4)] {
        let params = ArchParams::new(to_f64(&q)).expect("0 < q < 1");
        for x in [1u64, 2] {
            for k in 0..=6u64 {
                let exact = euler_poly_q(k, &PolyArg::integer(x, q.clone())).expect("q != 1");
                cases.push((
                    format!("q={} x={x} k={k}", format_rational(&q)),
                    zeta_eq(minus(k), x as f64, &params),
                    Complex::new(to_f64(&exact), 0.0),
                ));
            }
        }
    }
    // x = 1/3 with q = (1/2)^3, so q^x = 1/2 is exact on the rational side.
    let params = ArchParams::new(0.125).expect("0 < q < 1");
    for k in 0..=6u64 {
        let exact = euler_poly_q(k, &PolyArg::new(1, 3, ratio(1, 2)).expect("odd F")).expect("q != 1");
        cases.push((
            format!("q=1/8 x=1/3 k={k}"),
            zeta_eq(minus(k), 1.0 / 3.0, &params),
            Complex::new(to_f64(&exact), 0.0),
        ));
    }
    let mut checks = vec![close(suite, "zeta-at-negative-integers", cases)];

    let q = ratio(1, 2);
    let params = ArchParams::new(0.5).expect("0 < q < 1");
    let mut cases = Vec::new();
    let chars = [
        ("trivial", ComplexChar::trivial()),
        ("legendre-3", ComplexChar::legendre(3).expect("odd prime")),
    ];
    for (label, chi) in &chars {
        for k in 1..=5u64 {
            let want = gen_euler_complex(k, chi, &q).unwrap_or(Complex::new(f64::NAN, 0.0));
            cases.push((format!("{label} k={k}"), l_q_complex(minus(k), chi, &params), want));
        }
    }
    checks.push(close(suite, "l-function-at-negative-integers", cases));
    checks
}

fn agreement_check(
    suite: Suite,
    name: &str,
    need: u32,
    cases: Vec<(String, Result<(PadicApprox, PadicApprox)>)>,
) -> Check {
    let total = cases.len();
    let mut worst = u32::MAX;
    let mut fails = Vec::new();
    for (label, pair) in cases {
        match pair {
            Ok((a, b)) => {
                let v = a.agreement(&b);
                worst = worst.min(v);
                if v < need {
                    fails.push(format!("{label}: agreement {v} < {need}"));
                }
            }
            Err(e) => fails.push(format!("{label}: {e}")),
        }
    }
    let mut check = Check::from_failures(suite, name, fails, total);
    if check.passed {
        check.detail = format!("{total} cases, min agreement {worst} (need {need})");
    }
    check
}

pub fn padic(params: &SuiteParams) -> Result<Vec<Check>> {
    let suite = Suite::Padic;
    let ctx = params.padic_context()?;
    let p = ctx.prime();
    let need = ctx.budget().target.saturating_sub(1);
    let q = ctx.q().value().clone();
    let mut checks = Vec::new();

    let mut cases = Vec::new();
    for n in 1..=4u64 {
        for a in 1..p {
            let pair = ctx
                .h_pq(&ctx.point(&rat(-(n as i64)))?, a, p)
                .and_then(|h| Ok((h, ctx.h_pq_at_negative_integer(n, a, p)?)));
            cases.push((format!("n={n} a={a}"), pair));
        }
    }
    checks.push(agreement_check(suite, "partial-function-interpolation", need, cases));

    let mut cases = Vec::new();
    for n in 1..=4u64 {
        let chi = TeichChar::new(p, n as i64)?;
        let pair = ctx.l_pq(&ctx.point(&rat(-(n as i64)))?, &chi, p).and_then(|l| {
            let big = q.powu(p);
            let exact = crate::qseries::euler_number_or_classical(n, &q)
                - q_int(p, &q).powu(n) * crate::qseries::euler_number_or_classical(n, &big);
            Ok((l, ctx.point(&exact)?))
        });
        cases.push((format!("n={n} t={}", chi.exponent()), pair));
    }
    checks.push(agreement_check(suite, "l-function-interpolation", need, cases));

    let trivial = TeichChar::new(p, 0)?;
    let points = [rat(0), rat(1), rat(2), rat(5), ratio(1, 2), ratio(3, 2)];
    let mut fails = Vec::new();
    let mut values = Vec::new();
    for s in &points {
        match ctx.l_pq(&ctx.point(s)?, &trivial, p) {
            Ok(v) => values.push((format_rational(s), v)),
            Err(e) => fails.push(format!("s={}: {e}", format_rational(s))),
        }
    }
    for (label, v) in &values {
        if !v.congruent(&values[0].1, 1) {
            fails.push(format!("l(s={label}) differs from l(s={}) mod p", values[0].0));
        }
    }
    for k in 1..=3i64 {
        let a = ctx.l_pq(&ctx.point(&rat(k))?, &trivial, p);
        let b = ctx.l_pq(&ctx.point(&rat(k + p as i64))?, &trivial, p);
        match (a, b) {
            (Ok(a), Ok(b)) if a.congruent(&b, 1) => {}
            (a, b) => fails.push(format!("k={k}: {a:?} vs {b:?}")),
        }
    }
    checks.push(Check::from_failures(suite, "trivial-character-congruences", fails, points.len() + 3));

    let wide = ctx.with_budget(SeriesBudget::new(ctx.budget().target, 2 * ctx.budget().k_max, ctx.budget().window)?)?;
    let mut fails = Vec::new();
    let mut total = 0;
    let samples = [rat(-2), rat(1), ratio(1, 2), rat(3)];
    for s in &samples {
        let sp = ctx.point(s)?;
        for t in 0..(p as i64 - 1) {
            let chi = TeichChar::new(p, t)?;
            total += 1;
            let pair = ctx.l_pq(&sp, &chi, p).and_then(|a| Ok((a, wide.l_pq(&sp, &chi, p)?)));
            match pair {
                Ok((a, b)) if a.congruent(&b, a.precision().min(b.precision())) => {}
                other => fails.push(format!("s={} t={t}: {other:?}", format_rational(s))),
            }
        }
        for a in 1..p {
            total += 2;
            let t1 = ctx.t_pq(2, &sp, a, p).and_then(|x| Ok((x, wide.t_pq(2, &sp, a, p)?)));
            let k1 = ctx.k_pq(2, &sp, a, p).and_then(|x| Ok((x, wide.k_pq(2, &sp, a, p)?)));
            for (label, pair) in [("T", t1), ("K", k1)] {
                match pair {
                    Ok((x, y)) if x.congruent(&y, x.precision().min(y.precision())) => {}
                    other => fails.push(format!("{label} s={} a={a}: {other:?}", format_rational(s))),
                }
            }
        }
    }
    checks.push(Check::from_failures(suite, "truncation-soundness", fails, total));
    Ok(checks)
}

/// The expansion grid: `(r, n)` in `{1,2,3} × {2,4}` for the configured `q`
/// and `(2, 2)` at `q = 1`, unless restricted by `params.r` / `params.n`.
pub fn theorem5(params: &SuiteParams) -> Result<(Vec<Check>, Vec<VerificationReport>)> {
    let suite = Suite::Theorem5;
    let rs = params.r.map(|r| vec![r]).unwrap_or_else(|| vec![1, 2, 3]);
    let ns = params.n.map(|n| vec![n]).unwrap_or_else(|| vec![2, 4]);
    let mut grid: Vec<(Rational, u64, u64)> = Vec::new();
    for &r in &rs {
        for &n in &ns {
            grid.push((params.q.clone(), r, n));
        }
    }
    if params.q != rat(1) && params.r.is_none() && params.n.is_none() {
        grid.push((rat(1), 2, 2));
    }
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for (q, r, n) in grid {
        let ctx = params.expansion_context(q.clone())?;
        let report = theorem5_verify(&ctx, r, n)?;
        let detail = match &report.first_failing_stage {
            None => format!("agreement {} (target {})", report.agreement, report.target),
            Some(stage) => {
                let best = report.variants.iter().map(|v| format!("{}={}", v.name, v.agreement)).collect::<Vec<_>>();
                format!(
                    "agreement {} (target {}); first failing stage {stage}; variants {}",
                    report.agreement,
                    report.target,
                    best.join(", ")
                )
            }
        };
        let name = format!("expansion q={} r={r} n={n}", format_rational(&q));
        checks.push(Check::new(suite, name, report.accepted, detail));
        reports.push(report);
    }
    Ok((checks, reports))
}
