//! Command-line front door: certify, search, eval, scan, verify, and
//! check-pair, with text, JSON, and CSV output.
//!
//! Exit codes: 0 success/pass, 1 a computed verdict of "fail" (failed
//! certification, claim violation, or a conclusion counterexample),
//! 2 computation or configuration error, 3 check-pair hypothesis failure.
//! Machine-readable output is deterministic: identical configuration
//! (including seed) yields byte-identical bytes.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::annulus::{cstar_annulus, AnnulusDomain, TruncationPolicy};
use crate::bounds::{
    f_bound, gamma_upper, verify_fg_product_bound, verify_fn_bound, verify_gn_theta_max,
    verify_tail_bound, verify_tedious_bound, ClaimReport, GammaBound, GridSpec,
};
use crate::certification::{bergman_integrand, certify, search_max_constant, Space};
use crate::metrics::Complex;
use crate::oracle::{check_pair, cstar_lower_bound, LaurentFunction};

/// JSON schema tag emitted with every machine-readable report.
pub const SCHEMA: &str = "korenblum-certifier/1";

/// Sampling slack for the check-pair hypothesis verdict: margins within
/// this of zero count as "holds" (boundary samples of an exact-equality
/// pair land at +/- a few ulps).
pub const HYPOTHESIS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Bergman,
    Fock,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Bergman => Space::Bergman,
            SpaceArg::Fock => Space::Fock,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "korenblum",
    version,
    about = "Numerical certification of the Bergman/Fock maximum principle via the annulus pseudodistance"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Relative truncation target for infinite products.
    #[arg(long = "trunc-eps", global = true, default_value_t = 1e-12)]
    trunc_eps: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for grid scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a maximum-principle criterion at one constant.
    Certify {
        space: SpaceArg,
        #[arg(long)]
        c: f64,
    },
    /// Bisect for the largest certifiable constant in a bracket.
    Search {
        space: SpaceArg,
        #[arg(long, default_value_t = 0.05)]
        lo: f64,
        #[arg(long, default_value_t = 0.70)]
        hi: f64,
        /// Bisection bracket width at which to stop.
        #[arg(long, default_value_t = 1e-4)]
        width: f64,
    },
    /// Evaluate one quantity at a point.
    Eval {
        what: EvalWhat,
        #[arg(long)]
        c: f64,
        /// Base point (cstar, lower-bound).
        #[arg(long)]
        a: Option<f64>,
        /// Second point, e.g. "-0.4+0.2i" (cstar, lower-bound).
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Radius (f-bound, gamma, integrand).
        #[arg(long)]
        rho: Option<f64>,
        /// Optimizer candidate degree (lower-bound).
        #[arg(long, default_value_t = 3)]
        degree: i64,
        /// Optimizer restarts (lower-bound).
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Tabulate a quantity over a range.
    Scan {
        what: ScanWhat,
        #[arg(long)]
        space: Option<SpaceArg>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Run the inequality verifiers.
    Verify {
        /// Claim to run: fn-bound, gn-theta-max, fg-product, tail-bound,
        /// tedious (omit with --all for everything).
        claim: Option<String>,
        /// Run every claim on its default grid.
        #[arg(long)]
        all: bool,
        /// Restrict the c grid to a single value.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long = "rho-steps")]
        rho_steps: Option<usize>,
        #[arg(long = "theta-steps")]
        theta_steps: Option<usize>,
    },
    /// Check a maximum-principle function pair from a JSON file.
    CheckPair {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceArg::Bergman)]
        space: SpaceArg,
        #[arg(long)]
        c: f64,
        #[arg(long = "grid-density", default_value_t = 64)]
        grid_density: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalWhat {
    Cstar,
    #[value(name = "f-bound")]
    FBound,
    Gamma,
    Integrand,
    #[value(name = "lower-bound")]
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanWhat {
    /// Criterion value as a function of c.
    Criterion,
    /// F(rho, c) as a function of rho.
    #[value(name = "f-bound")]
    FBound,
}

/// Strict complex-literal grammar: an optional real part followed by an
/// optional signed imaginary part with a mandatory trailing `i`
/// ("0.5", "-0.4+0.2i", "0.3i", "-i").
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex literal".to_string());
    }
    let parse_real = |t: &str| -> Result<f64, String> {
        t.parse::<f64>().map_err(|_| format!("invalid number {t:?}"))
    };
    if let Some(body) = s.strip_suffix('i') {
        // find the sign separating re and im: a '+'/'-' that is neither
        // leading nor part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() { 0.0 } else { parse_real(re_str)? };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => parse_real(t)?,
        };
        Ok(Complex::new(re, im))
    } else {
        Ok(Complex::new(parse_real(s)?, 0.0))
    }
}

struct Output {
    format: Format,
    buffer: Vec<u8>,
}

impl Output {
    fn text(&mut self, line: &str) {
        if self.format == Format::Text {
            self.buffer.extend_from_slice(line.as_bytes());
            self.buffer.push(b'\n');
        }
    }

    fn json(&mut self, command: &str, result: serde_json::Value) {
        if self.format == Format::Json {
            let envelope = json!({
                "schema": SCHEMA,
                "command": command,
                "result": result,
            });
            self.buffer
                .extend_from_slice(envelope.to_string().as_bytes());
            self.buffer.push(b'\n');
        }
    }

    fn csv(&mut self, header: &str, rows: &[String]) {
        if self.format == Format::Csv {
            self.buffer.extend_from_slice(header.as_bytes());
            self.buffer.push(b'\n');
            for row in rows {
                self.buffer.extend_from_slice(row.as_bytes());
                self.buffer.push(b'\n');
            }
        }
    }
}

fn fail(out: &mut Output, command: &str, message: &str, code: i32) -> i32 {
    out.text(&format!("error: {message}"));
    out.json(command, json!({ "error": message }));
    out.csv("error", &[message.replace(',', ";")]);
    code
}

/// Run the CLI with explicit arguments, writing output to `writer`.
/// Returns the process exit code. `args` excludes the program name.
pub fn run_with_writer<W: Write>(args: &[String], writer: &mut W) -> i32 {
    let mut full = vec!["korenblum".to_string()];
    full.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are successful exits
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(writer, "{e}");
            return code;
        }
    };

    if let Some(n) = cli.threads {
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }

    let mut out = Output {
        format: cli.format,
        buffer: Vec::new(),
    };
    let trunc = match TruncationPolicy::new(cli.trunc_eps, 64) {
        Ok(t) => t,
        Err(e) => {
            let code = fail(&mut out, "config", &e.to_string(), 2);
            flush(&cli.out, &out.buffer, writer);
            return code;
        }
    };

    let code = dispatch(&cli, &trunc, &mut out);
    flush(&cli.out, &out.buffer, writer);
    code
}

fn flush<W: Write>(out_path: &Option<PathBuf>, buffer: &[u8], writer: &mut W) {
    match out_path {
        Some(path) => {
            if fs::write(path, buffer).is_err() {
                let _ = writer.write_all(buffer);
            }
        }
        None => {
            let _ = writer.write_all(buffer);
        }
    }
}

fn dispatch(cli: &Cli, trunc: &TruncationPolicy, out: &mut Output) -> i32 {
    match &cli.command {
        Command::Certify { space, c } => cmd_certify((*space).into(), *c, cli.tol, trunc, out),
        Command::Search {
            space,
            lo,
            hi,
            width,
        } => cmd_search((*space).into(), *lo, *hi, *width, cli.tol, trunc, out),
        Command::Eval {
            what,
            c,
            a,
            z,
            rho,
            degree,
            restarts,
        } => cmd_eval(
            *what, *c, *a, z.as_deref(), *rho, *degree, *restarts, cli.seed, trunc, out,
        ),
        Command::Scan {
            what,
            space,
            c,
            lo,
            hi,
            step,
            steps,
        } => cmd_scan(*what, *space, *c, *lo, *hi, *step, *steps, cli.tol, trunc, out),
        Command::Verify {
            claim,
            all,
            c,
            rho_steps,
            theta_steps,
        } => cmd_verify(claim.as_deref(), *all, *c, *rho_steps, *theta_steps, out),
        Command::CheckPair {
            file,
            space,
            c,
            grid_density,
        } => cmd_check_pair(file, (*space).into(), *c, *grid_density, out),
    }
}

fn cmd_certify(space: Space, c: f64, tol: f64, trunc: &TruncationPolicy, out: &mut Output) -> i32 {
    match certify(space, c, tol, trunc) {
        Ok(cert) => {
            out.text(&format!(
                "{} criterion at c = {}: {} (error budget {}, clamped fraction {})",
                cert.space, cert.c, cert.criterion, cert.error_budget, cert.clamped_fraction
            ));
            out.text(&format!(
                "certified numerically: {}",
                if cert.pass { "PASS" } else { "FAIL" }
            ));
            out.json("certify", serde_json::to_value(&cert).expect("serializable"));
            out.csv(
                "space,c,criterion,error_budget,clamped_fraction,pass",
                &[format!(
                    "{},{},{},{},{},{}",
                    cert.space, cert.c, cert.criterion, cert.error_budget,
                    cert.clamped_fraction, cert.pass
                )],
            );
            if cert.pass {
                0
            } else {
                1
            }
        }
        Err(e) => fail(out, "certify", &e.to_string(), 2),
    }
}

fn cmd_search(
    space: Space,
    lo: f64,
    hi: f64,
    width: f64,
    tol: f64,
    trunc: &TruncationPolicy,
    out: &mut Output,
) -> i32 {
    match search_max_constant(space, lo, hi, width, tol, trunc) {
        Ok(result) => {
            out.text(&format!(
                "{}: largest certifiable c = {} (bracket [{}, {}], {} bisection steps)",
                result.space, result.c_max, result.bracket.0, result.bracket.1, result.iterations
            ));
            out.json("search", serde_json::to_value(&result).expect("serializable"));
            out.csv(
                "space,c_max,bracket_lo,bracket_hi,iterations",
                &[format!(
                    "{},{},{},{},{}",
                    result.space, result.c_max, result.bracket.0, result.bracket.1,
                    result.iterations
                )],
            );
            0
        }
        Err(e) => fail(out, "search", &e.to_string(), 2),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    what: EvalWhat,
    c: f64,
    a: Option<f64>,
    z: Option<&str>,
    rho: Option<f64>,
    degree: i64,
    restarts: usize,
    seed: u64,
    trunc: &TruncationPolicy,
    out: &mut Output,
) -> i32 {
    let dom = match AnnulusDomain::new(c) {
        Ok(d) => d,
        Err(e) => return fail(out, "eval", &e.to_string(), 2),
    };
    let point = |name: &str, v: Option<f64>| -> Result<f64, String> {
        v.ok_or_else(|| format!("--{name} is required for this quantity"))
    };
    let result: Result<(serde_json::Value, String), String> = (|| match what {
        EvalWhat::Cstar => {
            let a = point("a", a)?;
            let z = parse_complex(z.ok_or("--z is required for cstar")?)?;
            let v = cstar_annulus(a, z, &dom, trunc).map_err(|e| e.to_string())?;
            Ok((
                json!({"what": "cstar", "value": v.value,
                       "truncation_bound": v.truncation_bound, "clamped": v.clamped}),
                format!(
                    "cstar = {} (truncation bound {}, clamped {})",
                    v.value, v.truncation_bound, v.clamped
                ),
            ))
        }
        EvalWhat::FBound => {
            let rho = point("rho", rho)?;
            let v = f_bound(rho, c).map_err(|e| e.to_string())?;
            let note = if v >= 1.0 {
                "; F >= 1 in the boundary layer, the gamma bound is vacuous here"
            } else {
                ""
            };
            Ok((
                json!({"what": "f-bound", "value": v}),
                format!("F({rho}, {c}) = {v}{note}"),
            ))
        }
        EvalWhat::Gamma => {
            let rho = point("rho", rho)?;
            match gamma_upper(rho, c).map_err(|e| e.to_string())? {
                GammaBound::Finite(g) => Ok((
                    json!({"what": "gamma", "value": g, "bounded": true}),
                    format!("gamma({rho}) <= {g}"),
                )),
                GammaBound::Unbounded => Ok((
                    json!({"what": "gamma", "value": null, "bounded": false}),
                    format!("gamma({rho}): unbounded (F >= 1)"),
                )),
            }
        }
        EvalWhat::Integrand => {
            let rho = point("rho", rho)?;
            let v = bergman_integrand(rho, c, trunc).map_err(|e| e.to_string())?;
            Ok((
                json!({"what": "integrand", "value": v}),
                format!("integrand({rho}, {c}) = {v}"),
            ))
        }
        EvalWhat::LowerBound => {
            let a = point("a", a)?;
            let z = parse_complex(z.ok_or("--z is required for lower-bound")?)?;
            let v = cstar_lower_bound(a, z, &dom, degree, restarts, seed)
                .map_err(|e| e.to_string())?;
            Ok((
                json!({"what": "lower-bound", "value": v,
                       "degree": degree, "restarts": restarts, "seed": seed}),
                format!("cstar lower bound = {v} (degree {degree}, {restarts} restarts)"),
            ))
        }
    })();
    match result {
        Ok((value, line)) => {
            out.text(&line);
            let v = value
                .get("value")
                .cloned()
                .unwrap_or(serde_json::Value::Null);
            out.json("eval", value);
            out.csv("what,value", &[format!("{:?},{}", what, v)]);
            0
        }
        Err(msg) => fail(out, "eval", &msg, 2),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    what: ScanWhat,
    space: Option<SpaceArg>,
    c: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    step: Option<f64>,
    steps: usize,
    tol: f64,
    trunc: &TruncationPolicy,
    out: &mut Output,
) -> i32 {
    match what {
        ScanWhat::Criterion => {
            let space: Space = space.unwrap_or(SpaceArg::Bergman).into();
            let (lo, hi, step) = (lo.unwrap_or(0.05), hi.unwrap_or(0.30), step.unwrap_or(0.01));
            if !(step > 0.0 && lo <= hi) {
                return fail(out, "scan", "empty or malformed c range", 2);
            }
            let mut rows = Vec::new();
            let mut values = Vec::new();
            let n = ((hi - lo) / step + 0.5).floor() as usize + 1;
            for i in 0..n {
                let c = lo + step * i as f64;
                match certify(space, c, tol, trunc) {
                    Ok(cert) => {
                        rows.push(format!("{},{},{}", c, cert.criterion, cert.pass));
                        values.push(json!({"c": c, "criterion": cert.criterion, "pass": cert.pass}));
                        out.text(&format!("c = {:<8} criterion = {:<22} pass = {}", c, cert.criterion, cert.pass));
                    }
                    Err(e) => {
                        rows.push(format!("{},,false", c));
                        values.push(json!({"c": c, "criterion": null, "pass": false, "error": e.to_string()}));
                        out.text(&format!("c = {:<8} {}", c, e));
                    }
                }
            }
            out.json("scan", json!({"what": "criterion", "space": space, "rows": values}));
            out.csv("c,criterion,pass", &rows);
            0
        }
        ScanWhat::FBound => {
            let c = match c {
                Some(c) if c > 0.0 && c < 1.0 => c,
                _ => return fail(out, "scan", "f-bound scan requires --c in (0, 1)", 2),
            };
            if steps == 0 {
                return fail(out, "scan", "empty range: --steps must be positive", 2);
            }
            let mut rows = Vec::new();
            let mut values = Vec::new();
            for i in 1..=steps {
                let rho = c + (1.0 - c) * i as f64 / (steps + 1) as f64;
                let v = f_bound(rho, c).expect("interior grid point");
                rows.push(format!("{rho},{v}"));
                values.push(json!({"rho": rho, "f_bound": v}));
                out.text(&format!("rho = {rho:<22} F = {v}"));
            }
            out.json("scan", json!({"what": "f-bound", "c": c, "rows": values}));
            out.csv("rho,f_bound", &rows);
            0
        }
    }
}

fn claim_grid(
    claim: &str,
    c: Option<f64>,
    rho_steps: Option<usize>,
    theta_steps: Option<usize>,
) -> GridSpec {
    let mut grid = match claim {
        "fg-product" => GridSpec::default_product_chain(),
        "tedious" | "tedious-bound" => GridSpec::default_chord_product(),
        _ => GridSpec::default_claims(),
    };
    if let Some(c) = c {
        grid.c_values = vec![c];
    }
    if let Some(r) = rho_steps {
        grid.rho_steps = r;
    }
    if let Some(t) = theta_steps {
        grid.theta_steps = t;
    }
    grid
}

fn cmd_verify(
    claim: Option<&str>,
    all: bool,
    c: Option<f64>,
    rho_steps: Option<usize>,
    theta_steps: Option<usize>,
    out: &mut Output,
) -> i32 {
    let claims: Vec<&str> = if all || claim.is_none() {
        vec!["fn-bound", "gn-theta-max", "fg-product", "tail-bound", "tedious-bound"]
    } else {
        vec![claim.unwrap()]
    };
    let mut reports: Vec<ClaimReport> = Vec::new();
    for name in &claims {
        let grid = claim_grid(name, c, rho_steps, theta_steps);
        let report = match *name {
            "fn-bound" => verify_fn_bound(&grid),
            "gn-theta-max" => verify_gn_theta_max(&grid),
            "fg-product" => verify_fg_product_bound(&grid),
            "tail-bound" => verify_tail_bound(&grid),
            "tedious" | "tedious-bound" => verify_tedious_bound(&grid),
            other => return fail(out, "verify", &format!("unknown claim {other:?}"), 2),
        };
        let low_density = report.grid.theta_steps < 16 && report.claim_id == "tedious-bound";
        out.text(&format!(
            "{:<14} max violation {:<26} {}{}",
            report.claim_id,
            report.max_violation,
            if report.pass { "PASS" } else { "FAIL" },
            if low_density { " (low-density grid)" } else { "" }
        ));
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r.pass);
    out.json(
        "verify",
        serde_json::to_value(&reports).expect("serializable"),
    );
    out.csv(
        "claim_id,max_violation,tolerance,pass",
        &reports
            .iter()
            .map(|r| format!("{},{},{},{}", r.claim_id, r.max_violation, r.tolerance, r.pass))
            .collect::<Vec<_>>(),
    );
    if all_pass {
        0
    } else {
        1
    }
}

#[derive(Deserialize)]
struct PairFile {
    f: LaurentFunction,
    g: LaurentFunction,
}

fn cmd_check_pair(
    file: &PathBuf,
    space: Space,
    c: f64,
    grid_density: usize,
    out: &mut Output,
) -> i32 {
    let raw = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return fail(out, "check-pair", &format!("cannot read {file:?}: {e}"), 2),
    };
    let pair: PairFile = match serde_json::from_str(&raw) {
        Ok(p) => p,
        Err(e) => return fail(out, "check-pair", &format!("invalid pair file: {e}"), 2),
    };
    match check_pair(&pair.f, &pair.g, c, space, grid_density) {
        Ok(report) => {
            let hypothesis_holds = report.hypothesis_margin >= -HYPOTHESIS_SLACK;
            out.text(&format!(
                "{} pair at c = {}: hypothesis margin {}, ||f||^2 = {}, ||g||^2 = {}",
                report.space,
                report.c,
                report.hypothesis_margin,
                report.norm_f_sq,
                report.norm_g_sq
            ));
            out.text(&format!(
                "hypothesis {}; conclusion {}",
                if hypothesis_holds { "holds" } else { "FAILS" },
                if report.conclusion_holds { "holds" } else { "FAILS" }
            ));
            out.json(
                "check-pair",
                serde_json::to_value(&report).expect("serializable"),
            );
            out.csv(
                "space,c,hypothesis_margin,norm_f_sq,norm_g_sq,conclusion_holds,samples",
                &[format!(
                    "{},{},{},{},{},{},{}",
                    report.space, report.c, report.hypothesis_margin, report.norm_f_sq,
                    report.norm_g_sq, report.conclusion_holds, report.samples
                )],
            );
            if !hypothesis_holds {
                3
            } else if report.conclusion_holds {
                0
            } else {
                1
            }
        }
        Err(e) => fail(out, "check-pair", &e.to_string(), 2),
    }
}
