use std::process::{Command, Output};

use genbessel::cli_harness::{EvalRecord, JsonReport, EXIT_DOMAIN, EXIT_OK, EXIT_TOLERANCE};
use genbessel::exact_core::exact_sum_big;
use genbessel::scaled_arith::{BigComplex, BigCtx};
use num_complex::Complex64;

fn gbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbp")).args(args).env_remove("GBP_PRECISION").output().expect("spawn gbp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_text_golden() {
    let o = gbp(&["eval", "--n", "30", "--mu", "4.25", "--z", "0.7"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(
        stdout(&o),
        "n = 30, mu = 4.25, z = 0.7\nvalue         0.3940e38\nmethod        exact_sum\nterms         31\nerr_estimate  1.00e-58\n"
    );
}

#[test]
fn eval_json_matches_library() {
    let o = gbp(&["eval", "--n", "40", "--mu", "1.5", "--z", "0.3,-0.8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let rep: JsonReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((rep.n, rep.mu), (40, 1.5));
    assert_eq!(rep.method, "exact_sum");
    let ctx = BigCtx::new(60);
    let z = Complex64::new(0.3, -0.8);
    let want = exact_sum_big(40, 1.5, &BigComplex::from_complex(z, &ctx), &ctx).unwrap().value.to_scaled();
    let got = EvalRecord::try_from(&rep).unwrap().report.value;
    assert!(got.rel_diff(&want) < 1e-15);
}

#[test]
fn eval_csv_has_header_and_one_row() {
    let o = gbp(&[
        "eval",
        "--n",
        "100",
        "--mu",
        "4.25",
        "--z",
        "1",
        "--scaled",
        "--method",
        "elementary",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..6], ["n", "mu", "z_re", "z_im", "method", "terms"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][4], "elementary_pos");
    let z_re: f64 = rows[0][2].parse().unwrap();
    assert!((z_re - 1.0 / 100.5).abs() < 1e-17);
    assert!(!stdout(&o).contains('\r'));
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gbp"))
        .args(["eval", "--n", "30", "--mu", "4.25", "--z", "0.7"])
        .env("GBP_PRECISION", "30")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("err_estimate  1.00e-28"));
    let o = Command::new(env!("CARGO_BIN_EXE_gbp"))
        .args(["eval", "--n", "30", "--mu", "4.25", "--z", "0.7", "--precision", "40"])
        .env("GBP_PRECISION", "30")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("err_estimate  1.00e-38"));
}

#[test]
fn domain_errors_exit_two() {
    let o = gbp(&["eval", "--n", "3", "--mu", "4.25", "--z", "0.7", "--method", "elementary"]);
    assert_eq!(o.status.code(), Some(EXIT_DOMAIN));
    assert!(String::from_utf8_lossy(&o.stderr).contains("below the minimum"));
    let o = gbp(&["eval", "--n", "10", "--mu", "1", "--z", "not-a-number"]);
    assert_eq!(o.status.code(), Some(EXIT_DOMAIN));
}

#[test]
fn sweep_tolerance_exit_three() {
    let args = [
        "sweep",
        "--n",
        "60",
        "--mu",
        "4.25",
        "--arc",
        "1:0.3:0.49:3",
        "--scaled",
        "--methods",
        "elementary,bessel-type",
    ];
    let o = gbp(&args);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let mut strict = args.to_vec();
    strict.extend(["--tol", "1e-30"]);
    assert_eq!(gbp(&strict).status.code(), Some(EXIT_TOLERANCE));
    let mut loose = args.to_vec();
    loose.extend(["--tol", "1e-3"]);
    assert_eq!(gbp(&loose).status.code(), Some(EXIT_OK));
}

#[test]
fn table1_csv_all_cells_agree() {
    let o = gbp(&["table1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let status = rdr.headers().unwrap().iter().position(|h| h == "status").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| &r[status] == "ok"));
    assert!(rows.iter().any(|r| &r[0] == "100" && &r[2] == "-1000" && &r[3] == "0.1200e489"));
}

#[test]
fn coeffs_accepts_imaginary_literal() {
    let o = gbp(&["coeffs", "ibp", "--z", "i", "--mu", "-1", "--terms", "2"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert!(text.starts_with("C = [-1+1i, -0.5+0.5i, -0.25+0.25i]"), "{text}");
    let o = gbp(&["coeffs", "uk", "--terms", "2"]);
    assert!(stdout(&o).contains("(81*t^2-462*t^4+385*t^6)/1152"));
}

#[test]
fn check_reports_every_identity() {
    let o = gbp(&["check", "--cases", "12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["failures"] == 0 && r["cases"] == 12));
}

#[test]
fn output_file_receives_the_report() {
    let dir = std::env::temp_dir().join(format!("gbp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let o = gbp(&["eval", "--n", "20", "--mu", "0", "--z", "2", "--format", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(o.stdout.is_empty());
    let rep: JsonReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep.n, 20);
    std::fs::remove_dir_all(&dir).unwrap();
}
