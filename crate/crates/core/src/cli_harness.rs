//! Command-line front end for the `gbp` binary.
//!
//! Everything the binary does is reachable from [`run`], which takes the
//! argument list and two writers and returns the process exit code:
//! 0 success, 1 internal or I/O failure, 2 usage or domain error,
//! 3 a requested tolerance was not met.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel_type_expansion::{default_len, eval_thm4, ibp_coeffs, BesselSource};
use crate::bessel_uniform::{gen_uk, gen_vk, uk_eval};
use crate::elementary_expansion::{
    elementary_coeffs, eval_thm2, eval_thm3, revert_mapping, saddle_geometry, CoeffKind, SectorOptions,
};
use crate::error::{Error, Result};
use crate::exact_core::{
    derivative_check, eval_exact_sum, eval_recurrence_n, exact_at_zeta, exact_sum_big, kummer_split,
    recurrence_mu_check, recurrence_n_big, split_f_transformed, EvalReport, Method, PolyParams,
};
use crate::scaled_arith::{gamma_star_polys, BigComplex, BigCtx, ScaledComplex, DEFAULT_DIGITS};
use crate::simple_expansion::{eval_simple, laguerre_coeffs, simple_big};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

/// Largest coefficient order accepted by `coeffs`.
pub const MAX_COEFF_ORDER: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "gbp", version, about = "Generalized Bessel polynomials Y_n^mu(z) at large degree")]
pub struct CliConfig {
    /// Working precision in decimal digits.
    #[arg(long, env = "GBP_PRECISION", default_value_t = DEFAULT_DIGITS, global = true)]
    pub precision: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate Y_n^mu at one point.
    Eval(EvalArgs),
    /// Regenerate the mu = 17/4, K = 20 table of the simple expansion.
    Table1,
    /// Relative errors of several methods against the exact sum.
    Sweep(SweepArgs),
    /// Print expansion coefficients.
    Coeffs(CoeffsArgs),
    /// Run the identity suite and print a pass/fail matrix.
    Check(CheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Recurrence,
    Simple,
    /// Sector expansion; picks the positive or negative form from the sign of Re z.
    Elementary,
    ElementaryPos,
    ElementaryNegF,
    ElementaryNegU,
    BesselType,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Exact,
    Uniform,
}

impl From<SourceArg> for BesselSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Exact => BesselSource::ExactHalfInteger,
            SourceArg::Uniform => BesselSource::UniformExpansion,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    /// Argument as "re[,im]".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    /// Truncation order K (default 20 for simple, 4 otherwise).
    #[arg(long)]
    pub terms: Option<usize>,
    /// Read z as the scaled variable w, evaluating at 1/((n+1/2) w).
    #[arg(long)]
    pub scaled: bool,
    /// Bessel values for the bessel-type method.
    #[arg(long, value_enum, default_value_t = SourceArg::Exact)]
    pub source: SourceArg,
    /// Fail with exit code 3 when the error estimate exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    /// Points "re[,im]" separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Arc r·exp(iπθ) as "r:theta0:theta1:count".
    #[arg(long, allow_hyphen_values = true)]
    pub arc: Option<String>,
    /// Comma-separated methods.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
    pub methods: Vec<MethodArg>,
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub scaled: bool,
    #[arg(long, value_enum, default_value_t = SourceArg::Exact)]
    pub source: SourceArg,
    /// Fail with exit code 3 when any finite relative error exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffFamily {
    Uk,
    Vk,
    GammaStar,
    Laguerre,
    Ibp,
    Reversion,
}

#[derive(Args, Debug, Clone)]
pub struct CoeffsArgs {
    #[arg(value_enum)]
    pub family: CoeffFamily,
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "1")]
    pub z: Complex64,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// Cases per identity.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
}

/// Parse "re", "re,im" or a complex literal such as "1+2i".
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    match parts.as_slice() {
        [re] => num(re).map(|x| Complex64::new(x, 0.0)).or_else(|e| re.parse::<Complex64>().map_err(|_| e)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re[,im], got {s:?}")),
    }
}

/// One evaluation request, independent of the command line.
#[derive(Clone, Debug)]
pub struct EvalRequest {
    pub n: u64,
    pub mu: f64,
    pub z: Complex64,
    pub scaled: bool,
    pub method: MethodArg,
    pub terms: Option<usize>,
    pub source: SourceArg,
}

/// A report together with the point it belongs to; `z` is the polynomial
/// argument.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRecord {
    pub n: u64,
    pub mu: f64,
    pub z: Complex64,
    pub report: EvalReport,
}

fn default_terms(method: MethodArg) -> usize {
    match method {
        MethodArg::Simple => crate::simple_expansion::DEFAULT_K,
        _ => 4,
    }
}

/// Polynomial argument x and scaled variable w with x = 1/((n+½) w).
fn arguments(req: &EvalRequest) -> (Complex64, Option<Complex64>) {
    let nu = req.n as f64 + 0.5;
    if req.scaled {
        let w = req.z;
        let x = if w.norm() == 0.0 { Complex64::new(f64::INFINITY, 0.0) } else { 1.0 / (nu * w) };
        (x, Some(w))
    } else if req.z.norm() == 0.0 {
        (req.z, None)
    } else {
        (req.z, Some(1.0 / (nu * req.z)))
    }
}

pub fn evaluate(req: &EvalRequest, ctx: &BigCtx) -> Result<EvalRecord> {
    let (x, w) = arguments(req);
    if req.scaled && req.z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let k = req.terms.unwrap_or_else(|| default_terms(req.method));
    let need_w = || w.ok_or(Error::ZeroArgument);
    let opts = SectorOptions::default();
    let (n, mu) = (req.n, req.mu);
    let report = match req.method {
        MethodArg::Exact => {
            if req.scaled {
                let v = exact_at_zeta(n, mu, req.z, false, ctx)?;
                EvalReport::new(v.value.to_scaled(), Method::ExactSum, n as usize + 1, Some(v.err_estimate))
            } else {
                eval_exact_sum(&PolyParams::new(n, mu, x), ctx)?
            }
        }
        MethodArg::Recurrence => eval_recurrence_n(&PolyParams::new(n, mu, x), ctx)?,
        MethodArg::Simple => eval_simple(&PolyParams::new(n, mu, x), k, ctx)?,
        MethodArg::ElementaryPos => eval_thm2(&PolyParams::new(n, mu, need_w()?), k, &opts)?,
        MethodArg::ElementaryNegF => eval_thm3(&PolyParams::new(n, mu, -need_w()?), k, &opts)?.f,
        MethodArg::ElementaryNegU => eval_thm3(&PolyParams::new(n, mu, -need_w()?), k, &opts)?.u,
        MethodArg::Elementary => {
            let w = need_w()?;
            if w.re >= 0.0 {
                eval_thm2(&PolyParams::new(n, mu, w), k, &opts)?
            } else {
                eval_thm3(&PolyParams::new(n, mu, -w), k, &opts)?.y
            }
        }
        MethodArg::BesselType => eval_thm4(&PolyParams::new(n, mu, need_w()?), k, req.source.into(), ctx)?,
    };
    Ok(EvalRecord { n, mu, z: x, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonValue {
    pub re_mantissa: f64,
    pub im_mantissa: f64,
    pub exp2: i64,
    pub decimal: String,
}

/// Machine-readable form of an [`EvalRecord`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub n: u64,
    pub mu: f64,
    pub z: JsonComplex,
    pub method: String,
    pub terms: usize,
    pub value: JsonValue,
    pub err_estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl From<&EvalRecord> for JsonReport {
    fn from(r: &EvalRecord) -> Self {
        let m = r.report.value.mantissa();
        JsonReport {
            n: r.n,
            mu: r.mu,
            z: JsonComplex { re: r.z.re, im: r.z.im },
            method: r.report.method.name().to_string(),
            terms: r.report.terms_used,
            value: JsonValue {
                re_mantissa: m.re,
                im_mantissa: m.im,
                exp2: r.report.value.exp2(),
                decimal: r.report.value.to_decimal_string(4),
            },
            err_estimate: r.report.err_estimate.filter(|e| e.is_finite()),
            notes: r.report.notes.clone(),
        }
    }
}

impl TryFrom<&JsonReport> for EvalRecord {
    type Error = Error;

    fn try_from(j: &JsonReport) -> Result<Self> {
        let value = ScaledComplex::normalize(Complex64::new(j.value.re_mantissa, j.value.im_mantissa), j.value.exp2);
        let mut report = EvalReport::new(value, j.method.parse()?, j.terms, j.err_estimate);
        report.notes = j.notes.clone();
        Ok(EvalRecord { n: j.n, mu: j.mu, z: Complex64::new(j.z.re, j.z.im), report })
    }
}

fn fmt_err(e: Option<f64>) -> String {
    match e {
        Some(v) if v.is_finite() => format!("{v:.2e}"),
        _ => "unknown".to_string(),
    }
}

fn fmt_z(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

/// Shortest rendering of a double after rounding to 15 significant digits.
pub fn fmt_real(x: f64) -> String {
    let r: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

pub fn fmt_complex(c: Complex64) -> String {
    if c.im.abs() <= 1e-15 * c.norm() {
        fmt_real(c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", fmt_real(c.re), fmt_real(-c.im))
    } else {
        format!("{}+{}i", fmt_real(c.re), fmt_real(c.im))
    }
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn render_records(records: &[EvalRecord], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let js: Vec<JsonReport> = records.iter().map(JsonReport::from).collect();
            Ok(if js.len() == 1 { json_string(&js[0]) } else { json_string(&js) })
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    let j = JsonReport::from(r);
                    vec![
                        j.n.to_string(),
                        j.mu.to_string(),
                        j.z.re.to_string(),
                        j.z.im.to_string(),
                        j.method,
                        j.terms.to_string(),
                        j.value.re_mantissa.to_string(),
                        j.value.im_mantissa.to_string(),
                        j.value.exp2.to_string(),
                        j.value.decimal,
                        j.err_estimate.map(|e| format!("{e:e}")).unwrap_or_default(),
                    ]
                })
                .collect();
            csv_string(
                &[
                    "n",
                    "mu",
                    "z_re",
                    "z_im",
                    "method",
                    "terms",
                    "re_mantissa",
                    "im_mantissa",
                    "exp2",
                    "decimal",
                    "err_estimate",
                ],
                &rows,
            )
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                writeln!(s, "n = {}, mu = {}, z = {}", r.n, r.mu, fmt_z(r.z)).unwrap();
                writeln!(s, "value         {}", r.report.value.to_decimal_string(4)).unwrap();
                writeln!(s, "method        {}", r.report.method).unwrap();
                writeln!(s, "terms         {}", r.report.terms_used).unwrap();
                writeln!(s, "err_estimate  {}", fmt_err(r.report.err_estimate)).unwrap();
                if !r.report.notes.is_empty() {
                    writeln!(s, "notes         {}", r.report.notes).unwrap();
                }
            }
            Ok(s)
        }
    }
}

/// Printed cells of the μ = 17/4, K = 20 table: (n, j, sign of z, Y, δ).
pub const TABLE1_PRINTED: [(u64, i32, i32, &str, &str); 20] = [
    (50, -1, 1, "0.4232e034", "0.16e-03"),
    (50, 0, 1, "0.1211e081", "0.38e-07"),
    (50, 1, 1, "0.5131e130", "0.17e-07"),
    (50, 2, 1, "0.4707e180", "0.16e-07"),
    (50, 3, 1, "0.4666e230", "0.15e-07"),
    (50, -1, -1, "0.1961e026", "0.26e-11"),
    (50, 0, -1, "0.1778e080", "0.62e-08"),
    (50, 1, -1, "0.4235e130", "0.14e-07"),
    (50, 2, -1, "0.4617e180", "0.15e-07"),
    (50, 3, -1, "0.4657e230", "0.15e-07"),
    (100, -1, 1, "0.1681e093", "0.30e-07"),
    (100, 0, 1, "0.3190e189", "0.10e-10"),
    (100, 1, 1, "0.1325e289", "0.47e-11"),
    (100, 2, 1, "0.1213e389", "0.43e-11"),
    (100, 3, 1, "0.1202e489", "0.43e-11"),
    (100, -1, -1, "0.5251e084", "0.68e-15"),
    (100, 0, -1, "0.4501e188", "0.18e-11"),
    (100, 1, -1, "0.1089e289", "0.39e-11"),
    (100, 2, -1, "0.1189e389", "0.42e-11"),
    (100, 3, -1, "0.1200e489", "0.42e-11"),
];

pub const TABLE1_MU: f64 = 17.0 / 4.0;
pub const TABLE1_K: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub n: u64,
    pub j: i32,
    pub z: f64,
    pub y: ScaledComplex,
    pub delta: f64,
    pub printed_y: &'static str,
    pub printed_delta_text: &'static str,
    pub printed_delta: f64,
}

impl Table1Row {
    pub fn y_text(&self) -> String {
        self.y.to_decimal_string(4)
    }

    pub fn y_matches(&self) -> bool {
        same_decimal(&self.y_text(), self.printed_y)
    }

    pub fn delta_within(&self, factor: f64) -> bool {
        let r = self.delta / self.printed_delta;
        r <= factor && r >= 1.0 / factor
    }
}

/// Compare "0.dddde±x" strings ignoring zero padding of the exponent.
pub fn same_decimal(a: &str, b: &str) -> bool {
    let split = |s: &str| -> Option<(String, i64)> {
        let (m, e) = s.trim().split_once(['e', 'E'])?;
        Some((m.to_string(), e.parse().ok()?))
    };
    matches!((split(a), split(b)), (Some(x), Some(y)) if x == y)
}

pub fn table1(precision: u32) -> Result<Vec<Table1Row>> {
    TABLE1_PRINTED
        .par_iter()
        .map(|&(n, j, sign, py, pd)| {
            let ctx = BigCtx::new(precision);
            let z = sign as f64 * 10f64.powi(j);
            let zb = BigComplex::from_f64(z, &ctx);
            let exact = exact_sum_big(n, TABLE1_MU, &zb, &ctx)?.value;
            let approx = simple_big(n, TABLE1_MU, &zb, TABLE1_K, &ctx)?.value;
            Ok(Table1Row {
                n,
                j,
                z,
                y: exact.to_scaled(),
                delta: approx.rel_diff(&exact, &ctx),
                printed_y: py,
                printed_delta_text: pd,
                printed_delta: pd.parse().expect("printed delta"),
            })
        })
        .collect()
}

fn render_table1(rows: &[Table1Row], format: OutputFormat) -> Result<String> {
    let status = |r: &Table1Row| if r.y_matches() && r.delta_within(3.0) { "ok" } else { "FAIL" };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.j.to_string(),
                fmt_real(r.z),
                r.y_text(),
                ScaledComplex::from_f64(r.delta).to_decimal_string(2),
                r.printed_y.to_string(),
                r.printed_delta_text.to_string(),
                status(r).to_string(),
            ]
        })
        .collect();
    let header = ["n", "j", "z", "Y", "delta", "printed_Y", "printed_delta", "status"];
    match format {
        OutputFormat::Csv => csv_string(&header, &cells),
        OutputFormat::Json => {
            let v: Vec<serde_json::Value> = cells
                .iter()
                .map(|c| {
                    serde_json::Value::Object(
                        header.iter().zip(c).map(|(h, x)| (h.to_string(), x.clone().into())).collect(),
                    )
                })
                .collect();
            Ok(json_string(&v))
        }
        OutputFormat::Text => Ok(text_table(&header, &cells)),
    }
}

fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let last = cells.len().saturating_sub(1);
        let mut s: String = cells
            .iter()
            .zip(&width)
            .enumerate()
            .map(|(i, (c, w))| if i == last { format!("{c:<w$}") } else { format!("{c:>w$}  ") })
            .collect();
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub z: Complex64,
    pub method: MethodArg,
    pub terms: usize,
    pub value: Option<ScaledComplex>,
    pub oracle: Option<ScaledComplex>,
    pub rel_err: Option<f64>,
    pub status: String,
}

/// Grid points from "re[,im];re[,im]" and/or "r:θ0:θ1:count" (θ in units of π).
pub fn sweep_points(z: Option<&str>, arc: Option<&str>) -> Result<Vec<Complex64>> {
    let mut pts = Vec::new();
    if let Some(list) = z {
        for p in list.split(';').filter(|p| !p.trim().is_empty()) {
            pts.push(parse_complex(p).map_err(Error::InvalidArgument)?);
        }
    }
    if let Some(spec) = arc {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::InvalidArgument(format!("arc must be r:theta0:theta1:count, got {spec:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let r: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let t0: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let t1: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[3].trim().parse().map_err(|_| bad())?;
        if count == 0 {
            return Err(bad());
        }
        for i in 0..count {
            let t = if count == 1 { t0 } else { t0 + (t1 - t0) * i as f64 / (count - 1) as f64 };
            pts.push(Complex64::from_polar(r, std::f64::consts::PI * t));
        }
    }
    if pts.is_empty() {
        return Err(Error::InvalidArgument("empty grid: give --z and/or --arc".into()));
    }
    Ok(pts)
}

pub fn sweep(args: &SweepArgs, precision: u32) -> Result<Vec<SweepRow>> {
    let pts = sweep_points(args.z.as_deref(), args.arc.as_deref())?;
    let mut jobs = Vec::new();
    for &n in &args.n {
        for &z in &pts {
            for &m in &args.methods {
                jobs.push((n, z, m));
            }
        }
    }
    Ok(jobs
        .par_iter()
        .map(|&(n, z, method)| {
            let ctx = BigCtx::new(precision);
            let req =
                EvalRequest { n, mu: args.mu, z, scaled: args.scaled, method, terms: args.terms, source: args.source };
            let oracle = evaluate(&EvalRequest { method: MethodArg::Exact, ..req.clone() }, &ctx).ok();
            let terms = args.terms.unwrap_or_else(|| default_terms(method));
            let x = arguments(&req).0;
            match evaluate(&req, &ctx) {
                Ok(rec) => {
                    let o = oracle.map(|o| o.report.value);
                    SweepRow {
                        n,
                        z: x,
                        method,
                        terms,
                        value: Some(rec.report.value),
                        rel_err: o.map(|o| rec.report.value.rel_diff(&o)),
                        oracle: o,
                        status: "ok".into(),
                    }
                }
                Err(e) => SweepRow {
                    n,
                    z: x,
                    method,
                    terms,
                    value: None,
                    oracle: oracle.map(|o| o.report.value),
                    rel_err: None,
                    status: format!("refused: {e}"),
                },
            }
        })
        .collect())
}

fn method_label(m: MethodArg) -> String {
    m.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn render_sweep(rows: &[SweepRow], format: OutputFormat) -> Result<String> {
    let header = ["n", "z_re", "z_im", "method", "terms", "value", "oracle", "rel_err", "status"];
    let dec = |v: &Option<ScaledComplex>| v.map(|v| v.to_decimal_string(6)).unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.z.re.to_string(),
                r.z.im.to_string(),
                method_label(r.method),
                r.terms.to_string(),
                dec(&r.value),
                dec(&r.oracle),
                r.rel_err.map(|e| format!("{e:.3e}")).unwrap_or_default(),
                r.status.clone(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Csv => csv_string(&header, &cells),
        OutputFormat::Text => Ok(text_table(&header, &cells)),
        OutputFormat::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .zip(&cells)
                .map(|(r, c)| {
                    serde_json::json!({
                        "n": r.n,
                        "z": {"re": r.z.re, "im": r.z.im},
                        "method": c[3],
                        "terms": r.terms,
                        "value": c[5],
                        "oracle": c[6],
                        "rel_err": r.rel_err.filter(|e| e.is_finite()),
                        "status": r.status,
                    })
                })
                .collect();
            Ok(json_string(&v))
        }
    }
}

/// Text dump of one coefficient family.
pub fn coeffs_dump(args: &CoeffsArgs, precision: u32, format: OutputFormat) -> Result<String> {
    let k = args.terms;
    if k > MAX_COEFF_ORDER {
        return Err(Error::InvalidArgument(format!("order {k} exceeds {MAX_COEFF_ORDER}")));
    }
    let mut rows: Vec<(String, String)> = Vec::new();
    match args.family {
        CoeffFamily::Uk | CoeffFamily::Vk | CoeffFamily::GammaStar => {
            let (name, var, polys) = match args.family {
                CoeffFamily::Uk => ("u", "t", gen_uk(k)),
                CoeffFamily::Vk => ("v", "t", gen_vk(k)),
                _ => ("gamma", "mu", gamma_star_polys(k)),
            };
            for (i, p) in polys.iter().enumerate() {
                rows.push((format!("{name}_{i}"), p.to_text(var)));
            }
        }
        CoeffFamily::Laguerre => {
            let ctx = BigCtx::new(precision);
            let l = laguerre_coeffs(args.mu, args.z, k, &ctx)?;
            for (i, c) in l.coeffs.iter().enumerate() {
                rows.push((format!("c_{i}"), fmt_complex(c.to_complex())));
            }
        }
        CoeffFamily::Ibp => {
            let co = ibp_coeffs(args.z, args.mu, k, default_len(k))?;
            let list =
                |v: &[Complex64]| format!("[{}]", v.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(", "));
            if format == OutputFormat::Text {
                return Ok(format!("C = {}\nD = {}\n", list(&co.c), list(&co.d)));
            }
            for (i, c) in co.c.iter().enumerate() {
                rows.push((format!("C_{i}"), fmt_complex(*c)));
            }
            for (i, d) in co.d.iter().enumerate() {
                rows.push((format!("D_{i}"), fmt_complex(*d)));
            }
        }
        CoeffFamily::Reversion => {
            if k < 2 {
                return Err(Error::InvalidArgument("reversion needs at least 2 terms".into()));
            }
            let g = saddle_geometry(args.z)?;
            let s = revert_mapping(&g, k)?;
            for (i, c) in s.coeffs.iter().enumerate() {
                rows.push((format!("s_{i}"), fmt_complex(*c)));
            }
        }
    }
    match format {
        OutputFormat::Text => Ok(rows.iter().map(|(a, b)| format!("{a} = {b}\n")).collect()),
        OutputFormat::Csv => {
            let cells: Vec<Vec<String>> = rows.into_iter().map(|(a, b)| vec![a, b]).collect();
            csv_string(&["name", "value"], &cells)
        }
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                rows.into_iter().map(|(a, b)| (a, b.into())).collect();
            Ok(json_string(&map))
        }
    }
}

/// One line of the identity matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub identity: String,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub threshold: f64,
}

impl CheckRow {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.max_residual <= self.threshold
    }
}

/// Deterministic point set: the additive recurrence with the plastic-number
/// generalisation of the golden ratio.
fn quasi_random(i: usize) -> [f64; 4] {
    let g = 1.167_303_978_261_418_7_f64;
    let a = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g), 1.0 / (g * g * g * g)];
    let x = (i + 1) as f64;
    [(0.5 + a[0] * x).fract(), (0.5 + a[1] * x).fract(), (0.5 + a[2] * x).fract(), (0.5 + a[3] * x).fract()]
}

fn check_point(i: usize, right_half: bool) -> (u64, f64, Complex64) {
    let [a, b, c, d] = quasi_random(i);
    let n = 1 + (a * 60.0) as u64;
    let mu = -0.9 + 6.0 * b;
    let r = 0.2 + 3.0 * c;
    let phase = if right_half { (d - 0.5) * 0.95 * std::f64::consts::PI } else { 2.0 * std::f64::consts::PI * d };
    (n, mu, Complex64::from_polar(r, phase))
}

fn run_identity(name: &str, cases: usize, threshold: f64, f: impl Fn(usize) -> Result<f64> + Sync) -> CheckRow {
    let res: Vec<Result<f64>> = (0..cases).into_par_iter().map(&f).collect();
    let failures = res.iter().filter(|r| r.is_err()).count();
    let max_residual = res.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |m, &x| m.max(x));
    CheckRow { identity: name.to_string(), cases, failures, max_residual, threshold }
}

pub fn check_suite(precision: u32, cases: usize) -> Vec<CheckRow> {
    let tol = 10f64.powi(8 - precision as i32);
    let ctx = || BigCtx::new(precision);
    vec![
        run_identity("recurrence_n vs sum", cases, tol, |i| {
            let (n, mu, z) = check_point(i, false);
            let c = ctx();
            let zb = BigComplex::from_complex(z, &c);
            Ok(recurrence_n_big(n, mu, &zb, &c)?.rel_diff(&exact_sum_big(n, mu, &zb, &c)?.value, &c))
        }),
        run_identity("mu recurrence", cases, tol, |i| {
            let (n, mu, z) = check_point(i, false);
            recurrence_mu_check(&PolyParams::new(n, mu, z), &ctx())
        }),
        run_identity("derivative identity", cases, tol, |i| {
            let (n, mu, z) = check_point(i, false);
            let (a, b) = derivative_check(&PolyParams::new(n, mu, z), &ctx())?;
            Ok(a.max(b.unwrap_or(0.0)))
        }),
        run_identity("F+U split, two F routes", cases, tol, |i| {
            let (n, mu, z) = check_point(i, true);
            let c = ctx();
            let s = kummer_split(&PolyParams::new(n, mu, z), tol, &c)?;
            let f2 = split_f_transformed(n, mu, z, &c)?;
            Ok(s.f.rel_diff(&f2, &c))
        }),
        run_identity("mu=0 Bessel-type vs exact", cases, 1e-13, |i| {
            let (n, _, w) = check_point(i, true);
            let c = ctx();
            let n = n + 5;
            let r = eval_thm4(&PolyParams::new(n, 0.0, w), 4, BesselSource::ExactHalfInteger, &c)?;
            Ok(r.value.rel_diff(&exact_at_zeta(n, 0.0, w, false, &c)?.value.to_scaled()))
        }),
        run_identity("mu=0 A_k = (-1)^k u_k(t)", cases, 1e-9, |i| {
            let (_, _, w) = check_point(i, true);
            let g = saddle_geometry(w)?;
            let a = elementary_coeffs(&g, 0.0, CoeffKind::A, 4)?;
            let u = gen_uk(4);
            let mut worst: f64 = 0.0;
            for (k, uk) in u.iter().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let want = sign * uk_eval(uk, g.t);
                worst = worst.max((a.values[k] - want).norm() / want.norm().max(1e-300));
            }
            Ok(worst)
        }),
    ]
}

fn render_check(rows: &[CheckRow], format: OutputFormat) -> Result<String> {
    let header = ["identity", "cases", "errors", "max_residual", "threshold", "result"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.identity.clone(),
                r.cases.to_string(),
                r.failures.to_string(),
                format!("{:.2e}", r.max_residual),
                format!("{:.0e}", r.threshold),
                if r.pass() { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Csv => csv_string(&header, &cells),
        OutputFormat::Text => Ok(text_table(&header, &cells)),
        OutputFormat::Json => Ok(json_string(&rows)),
    }
}

fn domain_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) | Error::DivisionByZero(_) => EXIT_INTERNAL,
        _ => EXIT_DOMAIN,
    }
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (text, code) = match execute(&cfg) {
        Ok(pair) => pair,
        Err(e) => {
            let _ = writeln!(err, "gbp: {e}");
            return domain_code(&e);
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "gbp: {e}");
        return EXIT_INTERNAL;
    }
    if code == EXIT_TOLERANCE {
        let _ = writeln!(err, "gbp: tolerance not met");
    }
    code
}

/// Rendered output and exit code for a parsed configuration.
pub fn execute(cfg: &CliConfig) -> Result<(String, i32)> {
    let p = cfg.precision;
    if p < 16 {
        return Err(Error::InvalidArgument(format!("precision {p} below 16 digits")));
    }
    match &cfg.command {
        Command::Eval(a) => {
            let req = EvalRequest {
                n: a.n,
                mu: a.mu,
                z: a.z,
                scaled: a.scaled,
                method: a.method,
                terms: a.terms,
                source: a.source,
            };
            let rec = evaluate(&req, &BigCtx::new(p))?;
            let over = match (a.tol, rec.report.err_estimate) {
                (Some(t), Some(e)) => e.is_nan() || e > t,
                (Some(_), None) => true,
                _ => false,
            };
            let text = render_records(std::slice::from_ref(&rec), cfg.format)?;
            Ok((text, if over { EXIT_TOLERANCE } else { EXIT_OK }))
        }
        Command::Table1 => {
            let rows = table1(p)?;
            let ok = rows.iter().all(|r| r.y_matches() && r.delta_within(3.0));
            Ok((render_table1(&rows, cfg.format)?, if ok { EXIT_OK } else { EXIT_TOLERANCE }))
        }
        Command::Sweep(a) => {
            let rows = sweep(a, p)?;
            let over = a.tol.is_some_and(|t| rows.iter().any(|r| r.rel_err.is_some_and(|e| e.is_nan() || e > t)));
            Ok((render_sweep(&rows, cfg.format)?, if over { EXIT_TOLERANCE } else { EXIT_OK }))
        }
        Command::Coeffs(a) => Ok((coeffs_dump(a, p, cfg.format)?, EXIT_OK)),
        Command::Check(a) => {
            let rows = check_suite(p, a.cases);
            let ok = rows.iter().all(CheckRow::pass);
            Ok((render_check(&rows, cfg.format)?, if ok { EXIT_OK } else { EXIT_TOLERANCE }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("gbp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(parse_complex("-1, 0.5").unwrap(), Complex64::new(-1.0, 0.5));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn eval_examples() {
        let (code, out, _) = run_str(&["eval", "--n", "50", "--mu", "4.25", "--z", "10", "--method", "exact"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.5131e130"), "{out}");
        let (code, out, _) = run_str(&["eval", "--n", "0", "--mu", "1", "--z", "5", "--method", "exact"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.1000e1"));
    }

    #[test]
    fn exit_codes() {
        let (code, _, _) = run_str(&["eval", "--n", "50", "--mu", "1", "--z", "0", "--method", "bessel-type"]);
        assert_eq!(code, EXIT_DOMAIN);
        let (code, _, _) =
            run_str(&["eval", "--n", "50", "--mu", "1", "--z", "0,1", "--scaled", "--method", "elementary"]);
        assert_eq!(code, EXIT_DOMAIN);
        let (code, _, _) = run_str(&[
            "eval", "--n", "50", "--mu", "4.25", "--z", "10", "--method", "simple", "--terms", "2", "--tol", "1e-12",
        ]);
        assert_eq!(code, EXIT_TOLERANCE);
        let (code, _, _) = run_str(&["eval", "--n"]);
        assert_eq!(code, EXIT_DOMAIN);
        let (code, _, _) = run_str(&["coeffs", "uk", "--terms", "500"]);
        assert_eq!(code, EXIT_DOMAIN);
    }

    #[test]
    fn json_round_trip() {
        let ctx = BigCtx::new(40);
        let req = EvalRequest {
            n: 60,
            mu: 4.25,
            z: Complex64::new(0.0, 0.999),
            scaled: true,
            method: MethodArg::BesselType,
            terms: Some(3),
            source: SourceArg::Exact,
        };
        let rec = evaluate(&req, &ctx).unwrap();
        let text = render_records(std::slice::from_ref(&rec), OutputFormat::Json).unwrap();
        let parsed: JsonReport = serde_json::from_str(&text).unwrap();
        assert_eq!(EvalRecord::try_from(&parsed).unwrap(), rec);
    }

    #[test]
    fn csv_has_header_and_lf() {
        let (code, out, _) = run_str(&["--format", "csv", "eval", "--n", "3", "--mu", "0.5", "--z", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n,mu,z_re,z_im,method"));
        assert!(!out.contains('\r'));
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn coefficient_dumps() {
        let (_, out, _) = run_str(&["coeffs", "uk", "--terms", "2"]);
        assert!(out.contains("u_2 = (81*t^2-462*t^4+385*t^6)/1152"), "{out}");
        let (_, out, _) = run_str(&["coeffs", "gamma-star", "--terms", "1"]);
        assert!(out.contains("gamma_1 = (-1+12*mu^2)/24"), "{out}");
        let (_, out, _) = run_str(&["coeffs", "ibp", "--mu", "-1", "--z", "2", "--terms", "3"]);
        assert_eq!(out, "C = [1, 0.5, 0.25, 0.125]\nD = [-2, -1, -0.5, -0.25]\n");
    }

    #[test]
    fn single_point_sweep_matches_eval() {
        let args = SweepArgs {
            n: vec![100],
            mu: 4.25,
            z: Some("1".into()),
            arc: None,
            methods: vec![MethodArg::Simple],
            terms: Some(20),
            scaled: false,
            source: SourceArg::Exact,
            tol: None,
        };
        let rows = sweep(&args, 60).unwrap();
        let ctx = BigCtx::new(60);
        let req = EvalRequest {
            n: 100,
            mu: 4.25,
            z: Complex64::new(1.0, 0.0),
            scaled: false,
            method: MethodArg::Simple,
            terms: Some(20),
            source: SourceArg::Exact,
        };
        assert_eq!(rows[0].value, Some(evaluate(&req, &ctx).unwrap().report.value));
        let e = rows[0].rel_err.unwrap();
        assert!(e > 0.5e-11 && e < 2e-11, "{e:e}");
        assert!(sweep_points(Some("1;;"), None).is_ok());
        assert!(sweep_points(None, Some("1:0:1")).is_err());
        assert!(sweep_points(None, None).is_err());
    }

    #[test]
    fn arc_sweep_near_turning_point() {
        let args = SweepArgs {
            n: vec![60],
            mu: 4.25,
            z: None,
            arc: Some("1:0.49:0.51:3".into()),
            methods: vec![MethodArg::Elementary, MethodArg::BesselType],
            terms: Some(3),
            scaled: true,
            source: SourceArg::Exact,
            tol: None,
        };
        let rows = sweep(&args, 40).unwrap();
        assert_eq!(rows.len(), 6);
        for pair in rows.chunks(2) {
            assert!(pair[0].value.is_none());
            assert!(pair[1].rel_err.unwrap() < 1e-4);
        }
    }

    #[test]
    fn decimal_comparison() {
        assert!(same_decimal("0.4232e34", "0.4232e034"));
        assert!(same_decimal("0.6800e-15", "0.6800e-15"));
        assert!(!same_decimal("0.4232e34", "0.4233e34"));
    }
}
