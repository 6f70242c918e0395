use std::path::PathBuf;
use std::process::{Command, Output};

use qeuler::lfunc::expansion::VerificationReport;
use qeuler_cli::{ComplexValue, EulerTable, PadicLValue, VerifyDocument};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn qeuler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeuler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parse into the typed record and re-serialize; the bytes must not change.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let value: T = serde_json::from_str(text).expect("valid record");
    assert_eq!(qeuler_cli::to_json(&value), text);
    value
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qeuler-cli-{}-{name}", std::process::id()))
}

#[test]
fn euler_table_q6_contains_minus_one_seventh() {
    let out = qeuler(&["euler-table", "--q", "6/1", "--kmax", "4"]);
    assert_eq!(code(&out), 0);
    let table: EulerTable = round_trip(&stdout(&out));
    assert_eq!(table.rows.len(), 5);
    assert_eq!(table.rows[1].value, "-1/7");
}

#[test]
fn euler_table_classical_and_empty_grid() {
    let out = qeuler(&["euler-table", "--q", "1", "--kmax", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "m,value\n0,1/1\n1,-1/2\n2,0/1\n3,1/4\n");
    let out = qeuler(&["euler-table", "--q", "6/1", "--kmax", "0"]);
    let table: EulerTable = round_trip(&stdout(&out));
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].value, "1/1");
}

#[test]
fn euler_table_record_reproduces_itself() {
    let out = qeuler(&["euler-table", "--q", "6/1", "--kmax", "5", "--p", "5", "--N", "6"]);
    assert_eq!(code(&out), 0);
    let first = stdout(&out);
    let table: EulerTable = round_trip(&first);
    let kmax = table.rows.last().unwrap().m.to_string();
    let p = table.prime.unwrap().to_string();
    let n = table.precision.unwrap().to_string();
    let again = qeuler(&["euler-table", "--q", &table.q, "--kmax", &kmax, "--p", &p, "--N", &n]);
    assert_eq!(stdout(&again), first);
    let padic = table.rows[1].padic.as_ref().unwrap();
    assert_eq!(padic.precision(), 6);
}

#[test]
fn malformed_q_is_rejected_with_exit_two() {
    for bad in ["6//1", "1.5", "/3", "3/0", "abc"] {
        let out = qeuler(&["theorem5", "--q", bad]);
        assert_eq!(code(&out), 2, "q = {bad}");
        assert!(out.stdout.is_empty());
    }
    let out = qeuler(&["verify", "exact-identities", "--q", "6//1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_parameters_exit_two() {
    // q = 2 is not congruent to 1 mod 5.
    assert_eq!(code(&qeuler(&["theorem5", "--q", "2/1"])), 2);
    // Even p.
    assert_eq!(code(&qeuler(&["lvalue", "--s", "1", "--q", "5", "--p", "4"])), 2);
    // Odd n.
    assert_eq!(code(&qeuler(&["theorem5", "--n", "3"])), 2);
    // Budget window larger than the cap.
    assert_eq!(code(&qeuler(&["theorem5", "--kmax", "4"])), 2);
    assert_eq!(code(&qeuler(&["zeta", "--s", "1", "--q", "1.5"])), 2);
    assert_eq!(code(&qeuler(&["zeta", "--s", "1", "--q", "1/2", "--x", "0"])), 2);
    assert_eq!(code(&qeuler(&["verify", "nonsense"])), 2);
    assert_eq!(code(&qeuler(&["lvalue", "--s", "1", "--q", "6", "--format", "csv"])), 2);
}

#[test]
fn non_convergence_exits_one() {
    let out = qeuler(&["lvalue", "--s", "1", "--q", "6", "--M", "12", "--kmax", "8"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn verify_exact_identities_passes() {
    let out = qeuler(&["verify", "exact-identities"]);
    assert_eq!(code(&out), 0);
    let doc: VerifyDocument = round_trip(&stdout(&out));
    assert!(doc.passed);
    assert_eq!(doc.checks.len(), 5);
}

#[test]
fn verify_csv_lists_checks() {
    let out = qeuler(&["verify", "complex", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,check,passed,detail"));
    assert!(lines.all(|l| l.starts_with("complex,") && l.contains(",true,")));
}

#[test]
fn verify_theorem5_single_cell_reports_agreement() {
    let out = qeuler(&["verify", "theorem5", "--r", "2", "--n", "2", "--p", "5", "--q", "6/1", "--M", "4"]);
    assert_eq!(code(&out), 0);
    let doc: VerifyDocument = round_trip(&stdout(&out));
    assert_eq!(doc.reports.len(), 1);
    let report = &doc.reports[0];
    assert_eq!((report.r, report.n, report.prime), (2, 2, 5));
    assert!(doc.checks[0].detail.contains("agreement"));
}

#[test]
fn theorem5_report_round_trips_and_reproduces() {
    let path = temp_path("t5.json");
    let p = path.to_str().unwrap();
    let out = qeuler(&["theorem5", "--r", "1", "--n", "2", "--M", "3", "--out", p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let report: VerificationReport = round_trip(&text);
    assert!(report.accepted);
    let again = qeuler(&[
        "theorem5",
        "--r",
        &report.r.to_string(),
        "--n",
        &report.n.to_string(),
        "--p",
        &report.prime.to_string(),
        "--q",
        &report.q,
        "--M",
        &report.target.to_string(),
        "--N",
        &report.precision.to_string(),
    ]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn theorem5_strict_mode_reflects_the_literal_congruence() {
    let lenient = qeuler(&["theorem5", "--r", "1", "--n", "2", "--M", "4"]);
    let report: VerificationReport = serde_json::from_slice(&lenient.stdout).unwrap();
    let strict = qeuler(&["theorem5", "--r", "1", "--n", "2", "--M", "4", "--strict"]);
    assert_eq!(code(&lenient), 0);
    assert_eq!(code(&strict), if report.overall_passed { 0 } else { 1 });
}

#[test]
fn theorem5_csv_has_stage_and_variant_rows() {
    let out = qeuler(&["theorem5", "--q", "1/1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("kind,name,agreement,passed\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("stage,")).count(), 7);
    assert_eq!(text.lines().filter(|l| l.starts_with("variant,")).count(), 4);
}

#[test]
fn padic_lvalue_matches_interpolation_and_reproduces() {
    let out = qeuler(&["lvalue", "--s", "-2", "--t", "2", "--p", "5", "--q", "6/1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let record: PadicLValue = round_trip(&text);
    // E_{2,6} - [5]_6^2 E_{2,6^5}, embedded at the same precision.
    let q = qeuler::kernel::rat(6);
    use qeuler::Scalar;
    let exact = qeuler::qseries::euler_number_q(2, &q).unwrap()
        - qeuler::kernel::q_int(5, &q).powu(2) * qeuler::qseries::euler_number_q(2, &q.powu(5)).unwrap();
    let expected = qeuler::PadicApprox::embed(&exact, 5, record.value.precision()).unwrap();
    assert!(record.value.agreement(&expected) >= 5);
    let again = qeuler(&[
        "lvalue",
        "--s",
        &record.s,
        "--t",
        &record.t.to_string(),
        "--p",
        &record.prime.to_string(),
        "--q",
        &record.q,
        "--F",
        &record.f.to_string(),
        "--M",
        &record.target.to_string(),
        "--N",
        &record.precision.to_string(),
        "--kmax",
        &record.kmax.to_string(),
    ]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn complex_zeta_examples() {
    let out = qeuler(&["zeta", "--s", "-1", "--x", "1", "--q", "1/2"]);
    assert_eq!(code(&out), 0);
    let v: ComplexValue = round_trip(&stdout(&out));
    let re: f64 = v.value.re.parse().unwrap();
    assert!((re - 2.0 / 3.0).abs() < 1e-12);
    let out = qeuler(&["zeta", "--s", "0", "--q", "0.25"]);
    let v: ComplexValue = round_trip(&stdout(&out));
    assert!((v.value.re.parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v.value.im, "0");
}

#[test]
fn complex_lvalue_record_reproduces() {
    let out = qeuler(&["lvalue", "--field", "complex", "--s", "-2,0", "--q", "1/2", "--chi", "legendre:3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let v: ComplexValue = round_trip(&text);
    let s = format!("{},{}", v.s.re, v.s.im);
    let again = qeuler(&["lvalue", "--field", "complex", "--s", &s, "--q", &v.q, "--chi", v.chi.as_deref().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn text_format_is_readable() {
    let out = qeuler(&["verify", "exact-identities", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.lines().take(5).all(|l| l.starts_with("PASS")));
    assert!(text.contains("all 5 checks passed"));
}
