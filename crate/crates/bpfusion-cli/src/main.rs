//! `bpfusion` command-line tool.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bpfusion::labels::{fmt_q, gap_charges, orbit_type, resolution, FormalSum, HWLabel, HalfInt, Label};
use bpfusion::parse::{parse_label, parse_rs};
use bpfusion::verify::{run_suite, Suite, VerifyOptions};
use bpfusion::verlinde::{simple_currents, standard_kernel, type3_kernel_tol, FusionEngine, SKernelEntry};
use bpfusion::w3::W3SMatrix;
use bpfusion::weights::{enumerate_infwts, enumerate_surv, hw_data, level_params, w3_data, LevelParams, OrbitClass};
use bpfusion::Error;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bpfusion", version, about = "Modular data and Grothendieck fusion for Bershadsky-Polyakov minimal models")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Aligned plain-text table.
    #[arg(long, global = true)]
    table: bool,
    /// Numerical tolerance.
    #[arg(long, global = true, env = "BPFUSION_TOL", default_value_t = bpfusion::w3::TOL)]
    tol: f64,
    /// Resolution depth in flow units; defaults to 9v.
    #[arg(long, global = true)]
    depth: Option<i64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct Level {
    #[arg(allow_negative_numbers = true)]
    u: i64,
    #[arg(allow_negative_numbers = true)]
    v: i64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Highest-weight modules and standard families at a level.
    ListModules {
        #[command(flatten)]
        level: Level,
    },
    /// The Z3 orbit of a label `[r;s]`.
    Orbit {
        #[command(flatten)]
        level: Level,
        label: String,
    },
    /// The W3 minimal-model S-matrix.
    SmatrixW3 {
        #[command(flatten)]
        level: Level,
    },
    /// S-kernel entry between a standard or type-3 label and a standard label.
    KernelBp {
        #[command(flatten)]
        level: Level,
        a: String,
        b: String,
    },
    /// Grothendieck fusion product of two labels.
    Fuse {
        #[command(flatten)]
        level: Level,
        a: String,
        b: String,
    },
    /// Standard-module resolution of a highest-weight label.
    Resolve {
        #[command(flatten)]
        level: Level,
        label: String,
    },
    /// The two order-3 simple currents.
    SimpleCurrents {
        #[command(flatten)]
        level: Level,
    },
    /// Run invariant suites; exit 2 on any failure.
    Verify {
        #[command(flatten)]
        level: Level,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Domain(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleFailure { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    table: Vec<Vec<String>>,
    failed: bool,
}

impl Output {
    fn new(json: Value, table: Vec<Vec<String>>) -> Self {
        Output { json, table, failed: false }
    }
}

fn cx(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cx_str(z: Complex64) -> String {
    format!("{:+.12}{:+.12}i", z.re, z.im)
}

fn sum_json(s: &FormalSum) -> Value {
    Value::Array(s.iter().map(|(l, c)| json!({"label": l.to_string(), "coeff": c})).collect())
}

fn sum_rows(s: &FormalSum) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["coeff".to_string(), "label".to_string()]];
    rows.extend(s.iter().map(|(l, c)| vec![c.to_string(), l.to_string()]));
    rows
}

fn level(l: Level) -> Result<LevelParams, Failure> {
    Ok(level_params(l.u, l.v)?)
}

fn list_modules(p: &LevelParams) -> Result<Output, Failure> {
    let mut hw = Vec::new();
    let mut rows = vec![["label", "type", "j", "delta", "orbit"].map(String::from).to_vec()];
    for lam in enumerate_surv(p) {
        let d = hw_data(p, &lam)?;
        let label = HWLabel::new(p, HalfInt::ZERO, lam)?;
        let orbit = OrbitClass::of(&lam);
        let t = orbit_type(p, &lam);
        hw.push(json!({
            "rs": lam.to_string(), "label": label.to_string(), "type": t,
            "j": fmt_q(d.j), "delta": fmt_q(d.delta), "orbit": orbit.to_string(),
        }));
        rows.push(vec![label.to_string(), t.to_string(), fmt_q(d.j), fmt_q(d.delta), orbit.to_string()]);
    }
    let mut fams = Vec::new();
    for o in enumerate_infwts(p) {
        let w = w3_data(p, &o);
        let gaps: Vec<String> = gap_charges(p, &o).into_iter().map(fmt_q).collect();
        fams.push(json!({"orbit": o.to_string(), "w3_delta": fmt_q(w.delta), "gap_charges": gaps}));
        rows.push(vec![format!("R~[j;{o}]"), "std".into(), format!("gaps {}", gaps.join(" ")), fmt_q(w.delta), o.to_string()]);
    }
    let json = json!({
        "u": p.u, "v": p.v, "k": fmt_q(p.k), "kappa": fmt_q(p.kappa),
        "c": fmt_q(p.c_bp), "c_w3": fmt_q(p.c_w3), "c_pi": fmt_q(p.c_pi),
        "highest_weight": hw, "standard_families": fams,
    });
    Ok(Output::new(json, rows))
}

fn orbit(p: &LevelParams, label: &str) -> Result<Output, Failure> {
    let lam = parse_rs(p, label)?;
    let o = OrbitClass::of(&lam);
    let mut rows = vec![["member", "j_tw", "type"].map(String::from).to_vec()];
    let mut members = Vec::new();
    for m in o.members() {
        let jt = fmt_q(m.j_tw(p));
        rows.push(vec![m.to_string(), jt.clone(), orbit_type(p, &m).to_string()]);
        members.push(json!({"label": m.to_string(), "j_tw": jt}));
    }
    let json = json!({"orbit": o.to_string(), "rep": o.rep().to_string(), "members": members, "type": orbit_type(p, &lam)});
    Ok(Output::new(json, rows))
}

fn smatrix(p: &LevelParams) -> Result<Output, Failure> {
    let s = W3SMatrix::new(p);
    let names: Vec<String> = s.orbits.iter().map(|o| o.to_string()).collect();
    let mut rows = vec![std::iter::once(String::new()).chain(names.iter().cloned()).collect::<Vec<_>>()];
    for (i, row) in s.entries.iter().enumerate() {
        rows.push(std::iter::once(names[i].clone()).chain(row.iter().map(|z| cx_str(*z))).collect());
    }
    let entries: Vec<Value> = s.entries.iter().map(|r| Value::Array(r.iter().map(|z| cx(*z)).collect())).collect();
    Ok(Output::new(json!({"orbits": names, "entries": entries}), rows))
}

fn kernel(p: &LevelParams, tol: f64, a: &str, b: &str) -> Result<Output, Failure> {
    let (a, b) = (parse_label(p, a)?, parse_label(p, b)?);
    let Label::Std(sb) = b else {
        return Err(Failure::Domain("the second kernel argument must be a standard label".into()));
    };
    let k: SKernelEntry = match a {
        Label::Std(sa) => standard_kernel(p, &sa, &sb)?,
        Label::Hw(h) => type3_kernel_tol(p, &h, &sb, tol)?,
    };
    let json = json!({
        "lhs": a.to_string(), "rhs": b.to_string(), "value": cx(k.value), "w3": cx(k.w3),
        "phase": fmt_q(k.phase), "denominator": k.denominator.map(cx),
    });
    let mut rows = vec![vec!["value".into(), cx_str(k.value)], vec!["w3".into(), cx_str(k.w3)], vec!["phase".into(), fmt_q(k.phase)]];
    if let Some(d) = k.denominator {
        rows.push(vec!["denominator".into(), cx_str(d)]);
    }
    Ok(Output::new(json, rows))
}

fn fuse(p: &LevelParams, depth: i64, a: &str, b: &str) -> Result<Output, Failure> {
    let (a, b) = (parse_label(p, a)?, parse_label(p, b)?);
    let eng = FusionEngine::new(p);
    let res = eng.fuse(&a, &b, depth)?;
    let view = res.hw_view(p);
    let mut json = json!({"lhs": a.to_string(), "rhs": b.to_string(), "result": sum_json(&res)});
    if view != res {
        json["hw_view"] = sum_json(&view);
    }
    Ok(Output::new(json, sum_rows(&res)))
}

fn resolve(p: &LevelParams, depth: i64, label: &str) -> Result<Output, Failure> {
    let Label::Hw(h) = parse_label(p, label)? else {
        return Err(Failure::Domain("resolve takes a highest-weight label `I[r;s]^ell`".into()));
    };
    let res = resolution(p, &h, depth);
    let json = json!({"label": h.to_string(), "depth": depth, "type": orbit_type(p, &h.lam()), "result": sum_json(&res)});
    Ok(Output::new(json, sum_rows(&res)))
}

fn currents(p: &LevelParams) -> Result<Output, Failure> {
    let mut rows = vec![["label", "j", "delta"].map(String::from).to_vec()];
    let mut list = Vec::new();
    for (h, j, d) in simple_currents(p)? {
        rows.push(vec![h.to_string(), fmt_q(j), fmt_q(d)]);
        list.push(json!({"label": h.to_string(), "j": fmt_q(j), "delta": fmt_q(d)}));
    }
    Ok(Output::new(Value::Array(list), rows))
}

fn verify(p: &LevelParams, opts: &Opts, suite: &str) -> Result<Output, Failure> {
    let suite: Suite = suite.parse()?;
    let vo = VerifyOptions { tol: opts.tol, depth: opts.depth, ..Default::default() };
    let reports = run_suite(p, suite, &vo);
    let mut rows = vec![["suite", "status", "checks", "max_residual"].map(String::from).to_vec()];
    let mut list = Vec::new();
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        rows.push(vec![r.suite.to_string(), status.into(), r.checks.to_string(), format!("{:.3e}", r.max_residual)]);
        list.push(json!({
            "suite": r.suite.name(), "passed": r.passed(), "checks": r.checks,
            "max_residual": r.max_residual, "failures": r.failures.iter().take(20).collect::<Vec<_>>(),
        }));
    }
    let failed = reports.iter().any(|r| !r.passed());
    Ok(Output { json: json!({"u": p.u, "v": p.v, "passed": !failed, "suites": list}), table: rows, failed })
}

fn render_table(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..ncol).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(i, s)| format!("{s:<w$}", w = widths[i])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let depth_for = |p: &LevelParams| cli.opts.depth.unwrap_or(p.default_depth());
    if cli.opts.depth.is_some_and(|d| d < 1) {
        return Err(Failure::Domain("--depth must be positive".into()));
    }
    if cli.opts.tol.is_nan() || cli.opts.tol <= 0.0 {
        return Err(Failure::Domain("--tol must be positive".into()));
    }
    match &cli.cmd {
        Cmd::ListModules { level: l } => list_modules(&level(*l)?),
        Cmd::Orbit { level: l, label } => orbit(&level(*l)?, label),
        Cmd::SmatrixW3 { level: l } => smatrix(&level(*l)?),
        Cmd::KernelBp { level: l, a, b } => kernel(&level(*l)?, cli.opts.tol, a, b),
        Cmd::Fuse { level: l, a, b } => {
            let p = level(*l)?;
            fuse(&p, depth_for(&p), a, b)
        }
        Cmd::Resolve { level: l, label } => {
            let p = level(*l)?;
            resolve(&p, depth_for(&p), label)
        }
        Cmd::SimpleCurrents { level: l } => currents(&level(*l)?),
        Cmd::Verify { level: l, suite } => verify(&level(*l)?, &cli.opts, suite),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.opts.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (text, code) = match run(&cli) {
        Ok(out) => {
            let text = if cli.opts.table {
                render_table(&out.table)
            } else {
                serde_json::to_string_pretty(&out.json).expect("values serialise") + "\n"
            };
            (text, if out.failed { 2 } else { 0 })
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
