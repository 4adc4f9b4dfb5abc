//! Command-line front end for `witt-core`.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported with the core
//! error name) or a failed verification, 2 on a parse or usage error.

pub mod cert;
pub mod expr;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use witt_core::gen;
use witt_core::milnor::PfisterConvention;
use witt_core::witt::{clifford_invariant, in_ideal_power};
use witt_core::*;

use crate::cert::{Certificate, DecompositionSummary, ReadError};
use crate::expr::{parse_field, parse_form, parse_matrix, parse_vector, ParseError};

#[derive(Debug, Parser)]
#[command(name = "witt", version, about = "Exact quadratic forms, Witt rings and the mod-2 Milnor triangle")]
pub struct Cli {
    /// Write the command's JSON result to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for randomized instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search bound for isotropic vectors over Q.
    #[arg(long, global = true, env = "WITT_BUDGET", default_value_t = isotropy::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    Standard,
    Literal,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Diagonalize a form with an explicit congruence.
    Diagonalize { form: String },
    /// Cancel the first entry of A = M^t B M by both methods.
    Cancel {
        #[arg(long, required_unless_present = "random")]
        form_a: Option<String>,
        #[arg(long, required_unless_present = "random")]
        form_b: Option<String>,
        #[arg(long, required_unless_present = "random")]
        matrix: Option<String>,
        /// Generate a random instance of this dimension instead (uses --seed).
        #[arg(long, conflicts_with_all = ["form_a", "form_b", "matrix"], requires = "field")]
        random: Option<usize>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Reflection matrix of a non-isotropic vector.
    Reflect {
        form: String,
        #[arg(long)]
        vector: String,
        /// Also print the image of this vector.
        #[arg(long)]
        apply: Option<String>,
    },
    /// Witt decomposition H^k + anisotropic part, with a certificate.
    Decompose { form: String },
    /// Witt class of a form.
    Class { form: String },
    /// Sum of two Witt classes.
    Add { left: String, right: String },
    /// Product of two Witt classes.
    Mul { left: String, right: String },
    /// Whether two forms are Witt equivalent.
    Similar { left: String, right: String },
    /// Dimension, discriminant and symbol invariants.
    Invariants { form: String },
    /// Cayley tables of W(F) for an enumerable field.
    RingTable {
        #[arg(long)]
        field: String,
        /// Over R, the largest absolute signature listed.
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Dimensions of I^n / I^(n+1), and optionally membership of a form.
    Ideal {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long)]
        form: Option<String>,
    },
    /// K_n / 2 by generators and Steinberg relations.
    Milnor {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Compare K_n / 2, I^n / I^(n+1) and H^n degree by degree.
    Triangle {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Convention::Standard)]
        convention: Convention,
    },
    /// Recheck a JSON certificate written by `cancel`, `diagonalize` or `decompose`.
    Verify { path: PathBuf },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Parse(ParseError, String),
    Domain(Error),
    Io(String),
    Rejected,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Parse(p, t) => Failure::Parse(p, t),
            ReadError::Domain(d) => Failure::Domain(d),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn form(text: &str) -> Res<GramMatrix> {
    let f = parse_form(text).map_err(|e| Failure::Parse(e, text.to_string()))?;
    Ok(f.evaluate()?)
}

fn field(text: &str) -> Res<FieldCtx> {
    let tag = parse_field(text).map_err(|e| Failure::Parse(e, text.to_string()))?;
    Ok(tag.ctx()?)
}

fn pair(left: &str, right: &str) -> Res<(GramMatrix, GramMatrix)> {
    let a = form(left)?;
    let b = form(right)?;
    if a.ctx() != b.ctx() {
        return Err(Failure::Domain(Error::FieldMismatch));
    }
    Ok((a, b))
}

fn scalars(ctx: FieldCtx, xs: &[num_rational::BigRational]) -> Res<Vec<Scalar>> {
    Ok(xs.iter().map(|x| ctx.from_rational(x)).collect::<Result<_>>()?)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Ctx {
    out: String,
    json: Option<Value>,
    seed: u64,
    budget: u64,
}

/// Run the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut cx = Ctx { out: String::new(), json: None, seed: cli.seed, budget: cli.budget };
    let mut result = dispatch(&cli.command, &mut cx);
    // a rejected certificate still gets its report written
    if matches!(result, Ok(()) | Err(Failure::Rejected)) {
        if let (Some(path), Some(v)) = (&cli.json, &cx.json) {
            if let Err(e) = write_json(path, v) {
                result = Err(e);
            }
        }
    }
    let (code, stderr) = match result {
        Ok(()) => (0, String::new()),
        Err(Failure::Usage(m)) => (2, format!("error: {m}\n")),
        Err(Failure::Parse(e, text)) => (2, format!("error: {e}\n  {text}\n  {}^\n", " ".repeat(e.position))),
        Err(Failure::Domain(e)) => (1, format!("error: {}: {e}\n", e.name())),
        Err(Failure::Io(m)) => (1, format!("error: {m}\n")),
        Err(Failure::Rejected) => (1, String::new()),
    };
    Outcome { code, stdout: cx.out, stderr }
}

fn write_json(path: &Path, v: &Value) -> Res<()> {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    std::fs::write(path, text + "\n").map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cmd: &Command, cx: &mut Ctx) -> Res<()> {
    match cmd {
        Command::Diagonalize { form: f } => diagonalize(f, cx),
        Command::Cancel { form_a, form_b, matrix, random, field: fld } => match random {
            Some(n) => {
                let ctx = field(fld.as_deref().expect("clap requires --field"))?;
                if *n < 2 {
                    return Err(Failure::Domain(Error::PreconditionViolated(Violation::DimensionTooSmall)));
                }
                if ctx == FieldCtx::RealQ {
                    return Err(Failure::Usage("random instances are generated over Q and Fp(p) only".to_string()));
                }
                let inst = gen::random_cancellation_instance(&mut gen::seeded(cx.seed), ctx, *n);
                cancel(&inst.a, &inst.b, &inst.m, cx)
            }
            None => {
                let (a, b, m) = cancel_inputs(form_a.as_deref().unwrap(), form_b.as_deref().unwrap(), matrix.as_deref().unwrap())?;
                cancel(&a, &b, &m, cx)
            }
        },
        Command::Reflect { form: f, vector, apply } => reflect(f, vector, apply.as_deref(), cx),
        Command::Decompose { form: f } => decompose(f, cx),
        Command::Class { form: f } => {
            let q = form(f)?;
            let c = witt::witt_class_with_budget(&q, cx.budget)?;
            writeln!(cx.out, "class: {c}").unwrap();
            cx.json = Some(json!({"field": q.ctx().to_string(), "form": q.to_string(), "class": c.to_string()}));
            Ok(())
        }
        Command::Add { left, right } | Command::Mul { left, right } => {
            let (a, b) = pair(left, right)?;
            let (x, y) = (witt::witt_class_with_budget(&a, cx.budget)?, witt::witt_class_with_budget(&b, cx.budget)?);
            let r = if matches!(cmd, Command::Add { .. }) { wadd(&x, &y)? } else { wmul(&x, &y)? };
            writeln!(cx.out, "class: {r}").unwrap();
            cx.json = Some(json!({"field": a.ctx().to_string(), "left": x.to_string(), "right": y.to_string(), "result": r.to_string()}));
            Ok(())
        }
        Command::Similar { left, right } => {
            let (a, b) = pair(left, right)?;
            let s = is_similar(&a, &b)?;
            writeln!(cx.out, "similar: {}", yes(s)).unwrap();
            cx.json = Some(json!({"field": a.ctx().to_string(), "left": a.to_string(), "right": b.to_string(), "similar": s}));
            Ok(())
        }
        Command::Invariants { form: f } => invariants(f, cx),
        Command::RingTable { field: fld, truncate } => ring_table(field(fld)?, *truncate, cx),
        Command::Ideal { field: fld, max_degree, form: f } => ideal(field(fld)?, *max_degree, f.as_deref(), cx),
        Command::Milnor { field: fld, max_degree } => milnor(field(fld)?, *max_degree, cx),
        Command::Triangle { field: fld, max_degree, convention } => {
            let conv = match convention {
                Convention::Standard => PfisterConvention::Standard,
                Convention::Literal => PfisterConvention::Literal,
            };
            triangle(field(fld)?, *max_degree, conv, cx)
        }
        Command::Verify { path } => verify(path, cx),
    }
}

fn diagonalize(f: &str, cx: &mut Ctx) -> Res<()> {
    let q = form(f)?;
    let (d, w) = q.diagonalize();
    let ok = w.verify();
    writeln!(cx.out, "diagonal: {d}").unwrap();
    writeln!(cx.out, "matrix: {}", w.matrix).unwrap();
    writeln!(cx.out, "certificate {}", if ok { "OK" } else { "FAILED" }).unwrap();
    cx.json = Some(serde_json::to_value(Certificate::Isometry(cert::isometry_certificate(&w, None))).expect("serializable"));
    Ok(())
}

fn cancel_inputs(fa: &str, fb: &str, m: &str) -> Res<(DiagonalForm, DiagonalForm, Matrix)> {
    let a = form(fa)?;
    let b = form(fb)?;
    if a.ctx() != b.ctx() {
        return Err(Failure::Domain(Error::FieldMismatch));
    }
    if !a.is_diagonal() || !b.is_diagonal() {
        return Err(Failure::Usage("cancel expects diagonal forms".to_string()));
    }
    let ctx = a.ctx();
    let rows = parse_matrix(m).map_err(|e| Failure::Parse(e, m.to_string()))?;
    let rows = rows.iter().map(|r| scalars(ctx, r)).collect::<Res<Vec<_>>>()?;
    let m = Matrix::from_rows(ctx, rows)?;
    Ok((DiagonalForm::new(ctx, a.diagonal_entries()), DiagonalForm::new(ctx, b.diagonal_entries()), m))
}

fn cancel(a: &DiagonalForm, b: &DiagonalForm, m: &Matrix, cx: &mut Ctx) -> Res<()> {
    let alg = cancel_first_algebraic(a, b, m)?;
    let geo = cancel_first_geometric(a, b, m)?;
    let report = homotopy_check(a, b, m)?;
    let out = &mut cx.out;
    writeln!(out, "A = {a}, B = {b} over {}", a.ctx()).unwrap();
    writeln!(out, "M = {m}").unwrap();
    writeln!(out, "sign flip: {}", yes(alg.sign_flip_applied)).unwrap();
    for line in &alg.witness.trace {
        writeln!(out, "algebraic: {line}").unwrap();
    }
    for line in &geo.witness.trace {
        writeln!(out, "geometric: {line}").unwrap();
    }
    writeln!(out, "N = {}", alg.n_matrix).unwrap();
    if alg.n_matrix == geo.n_matrix {
        writeln!(out, "both methods agree").unwrap();
    } else {
        writeln!(out, "methods differ: geometric N = {}", geo.n_matrix).unwrap();
    }
    writeln!(out, "homotopy c_ki = d_ki: {}", yes(report.entries_equal)).unwrap();
    writeln!(out, "q(u) = 2 b1 (1 - m11): {}", yes(report.q_u_matches)).unwrap();
    let ok = alg.witness.verify() && geo.witness.verify();
    writeln!(out, "certificate {}", if ok { "OK" } else { "FAILED" }).unwrap();
    let c = cert::cancellation_certificate(a, b, m, &alg, report.entries_equal);
    cx.json = Some(serde_json::to_value(Certificate::Cancellation(c)).expect("serializable"));
    Ok(())
}

fn reflect(f: &str, vector: &str, apply: Option<&str>, cx: &mut Ctx) -> Res<()> {
    let q = form(f)?;
    let ctx = q.ctx();
    let u = scalars(ctx, &parse_vector(vector).map_err(|e| Failure::Parse(e, vector.to_string()))?)?;
    let rv = cancellation::ReflectionVector::new(&q, u)?;
    let t = cancellation::reflection_matrix(&q, &rv)?;
    writeln!(cx.out, "q(u) = {}", rv.value()).unwrap();
    writeln!(cx.out, "tau_u = {t}").unwrap();
    let mut v = json!({
        "field": ctx.to_string(),
        "form": q.to_string(),
        "u": cert::strings(rv.vector()),
        "q_u": rv.value().to_string(),
        "matrix": cert::rows(&t),
    });
    if let Some(w) = apply {
        let w = scalars(ctx, &parse_vector(w).map_err(|e| Failure::Parse(e, w.to_string()))?)?;
        let image = t.mul_vec(&w)?;
        writeln!(cx.out, "tau_u(v) = [{}]", cert::strings(&image).join(", ")).unwrap();
        v["image"] = json!(cert::strings(&image));
    }
    cx.json = Some(v);
    Ok(())
}

fn decompose(f: &str, cx: &mut Ctx) -> Res<()> {
    let q = form(f)?;
    let dec = witt_decompose(&q, cx.budget)?;
    let ok = dec.verify();
    let mut line = format!("k={}, anisotropic={}", dec.witt_index, dec.anisotropic_part);
    if dec.null_dim > 0 {
        write!(line, ", radical dimension {}", dec.null_dim).unwrap();
    }
    writeln!(cx.out, "{line}, certificate {}", if ok { "OK" } else { "FAILED" }).unwrap();
    writeln!(cx.out, "witness: {}", dec.witness.matrix).unwrap();
    if let Some(s) = &dec.real_scaling {
        writeln!(cx.out, "real scaling: [{}]", cert::strings(s).join(", ")).unwrap();
    }
    let summary = DecompositionSummary {
        witt_index: dec.witt_index,
        anisotropic: cert::strings(dec.anisotropic_part.entries()),
        null_dim: dec.null_dim,
    };
    cx.json = Some(serde_json::to_value(Certificate::Isometry(cert::isometry_certificate(&dec.witness, Some(summary)))).expect("serializable"));
    Ok(())
}

fn invariants(f: &str, cx: &mut Ctx) -> Res<()> {
    let q = form(f)?;
    if !q.is_nondegenerate() {
        return Err(Failure::Domain(Error::DegenerateForm));
    }
    let c = witt::witt_class_with_budget(&q, cx.budget)?;
    let e0 = witt::e0(&c);
    let e1 = match witt::e1(&c) {
        Ok(s) => Some(s.to_string()),
        Err(Error::NotInIdealPower(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let e2 = match witt::e2(&c) {
        Ok(h) => Some(h.to_string()),
        Err(Error::NotInIdealPower(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let clifford = clifford_invariant(&q)?.to_string();
    let out = &mut cx.out;
    writeln!(out, "class: {c}").unwrap();
    writeln!(out, "e0 = {e0}").unwrap();
    writeln!(out, "e1 = {}", e1.as_deref().unwrap_or("undefined (class not in I)")).unwrap();
    writeln!(out, "e2 = {}", e2.as_deref().unwrap_or("undefined (class not in I^2)")).unwrap();
    writeln!(out, "clifford invariant: {clifford}").unwrap();
    cx.json = Some(json!({
        "field": q.ctx().to_string(),
        "form": q.to_string(),
        "class": c.to_string(),
        "e0": e0,
        "e1": e1,
        "e2": e2,
        "clifford": clifford,
    }));
    Ok(())
}

fn ring_table(ctx: FieldCtx, truncate: Option<usize>, cx: &mut Ctx) -> Res<()> {
    let t = enumerate_witt_ring(ctx, truncate)?;
    let names: Vec<String> = t.elements.iter().map(ToString::to_string).collect();
    let cell = |x: &Option<usize>| x.map_or("-".to_string(), |i| i.to_string());
    let out = &mut cx.out;
    writeln!(out, "W({ctx}): {} elements", names.len()).unwrap();
    for (i, n) in names.iter().enumerate() {
        writeln!(out, "  {i}: {n}").unwrap();
    }
    for (title, table) in [("+", &t.add), ("*", &t.mul)] {
        writeln!(out, "{title}").unwrap();
        for row in table.iter() {
            writeln!(out, "  {}", row.iter().map(cell).collect::<Vec<_>>().join(" ")).unwrap();
        }
    }
    if matches!(ctx, FieldCtx::PrimeField(_)) {
        writeln!(out, "additive group: {}", if t.is_cyclic_of_order_four() { "Z/4" } else { "Z/2 x Z/2" }).unwrap();
    }
    cx.json = Some(json!({"field": ctx.to_string(), "elements": names, "add": t.add, "mul": t.mul}));
    Ok(())
}

fn ideal(ctx: FieldCtx, n_max: usize, f: Option<&str>, cx: &mut Ctx) -> Res<()> {
    let filt = ideal_filtration(ctx, n_max)?;
    for (n, d) in filt.quotient_dims.iter().enumerate() {
        writeln!(cx.out, "dim I^{n}/I^{} = {d}", n + 1).unwrap();
    }
    let mut v = json!({"field": ctx.to_string(), "quotient_dims": filt.quotient_dims});
    if let Some(f) = f {
        let q = form(f)?;
        if q.ctx() != ctx {
            return Err(Failure::Domain(Error::FieldMismatch));
        }
        let c = witt::witt_class_with_budget(&q, cx.budget)?;
        let member = (0..=n_max + 1).map(|n| in_ideal_power(&c, n)).collect::<Result<Vec<_>>>()?;
        for (n, m) in member.iter().enumerate() {
            writeln!(cx.out, "{c} in I^{n}: {}", yes(*m)).unwrap();
        }
        v["form"] = json!(q.to_string());
        v["membership"] = json!(member);
    }
    cx.json = Some(v);
    Ok(())
}

fn milnor(ctx: FieldCtx, n_max: usize, cx: &mut Ctx) -> Res<()> {
    let mut degrees = Vec::new();
    for n in 0..=n_max {
        let k = milnor_k_mod2(ctx, n)?;
        let basis: Vec<&String> = k.free_columns().into_iter().map(|c| &k.basis[c]).collect();
        writeln!(
            cx.out,
            "K_{n}/2: dimension {}, {} generators, {} relations of rank {}; basis [{}]",
            k.dimension,
            k.ambient,
            k.relations.len(),
            k.rank,
            basis.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
        degrees.push(json!({"n": n, "dim": k.dimension, "basis": basis}));
    }
    cx.json = Some(json!({"field": ctx.to_string(), "degrees": degrees}));
    Ok(())
}

fn triangle(ctx: FieldCtx, n_max: usize, conv: PfisterConvention, cx: &mut Ctx) -> Res<()> {
    let r = triangle_check(ctx, n_max, conv)?;
    let out = &mut cx.out;
    writeln!(out, "{ctx}, convention {conv}").unwrap();
    for d in &r.degrees {
        writeln!(
            out,
            "n={}: K={} W={} H={} nu bijective: {} commutes: {}",
            d.n,
            d.dim_k,
            d.dim_graded_w,
            d.dim_h,
            yes(d.nu_bijective),
            yes(d.commutes)
        )
        .unwrap();
    }
    let dims: Vec<String> = r.degrees.iter().map(|d| d.dim_k.to_string()).collect();
    writeln!(out, "dims: ({})", dims.join(",")).unwrap();
    writeln!(out, "isomorphic: {}", yes(r.isomorphic())).unwrap();
    let degrees: Vec<Value> = r
        .degrees
        .iter()
        .map(|d| {
            json!({
                "n": d.n,
                "dim_K": d.dim_k,
                "dim_gradedW": d.dim_graded_w,
                "dim_H": d.dim_h,
                "nu_bijective": d.nu_bijective,
                "commutes": d.commutes,
            })
        })
        .collect();
    cx.json = Some(json!({"field": ctx.to_string(), "degrees": degrees}));
    Ok(())
}

fn verify(path: &Path, cx: &mut Ctx) -> Res<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let c: Certificate = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: not a certificate: {e}", path.display())))?;
    let v = cert::verify(&c)?;
    for (name, ok) in &v.lines {
        writeln!(cx.out, "{name}: {}", if *ok { "ok" } else { "FAILED" }).unwrap();
    }
    writeln!(cx.out, "verdict: {}", if v.ok() { "OK" } else { "FAILED" }).unwrap();
    let lines: Vec<Value> = v.lines.iter().map(|(n, b)| json!({"check": n, "ok": b})).collect();
    cx.json = Some(json!({"path": path.display().to_string(), "checks": lines, "verdict": v.ok()}));
    if v.ok() {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}
