//! JSON certificates and their independent recheck.
//!
//! Scalars are written with their field's `Display` (`n/d`, `n`, or a residue)
//! and read back with the expression parser, so nothing passes through
//! floating point. `verify` rebuilds every matrix from the strings and
//! repeats the congruence checks with plain matrix arithmetic.

use serde::{Deserialize, Serialize};
use witt_core::{homotopy_check, CancellationResult, DiagonalForm, FieldCtx, GramMatrix, IsometryWitness, Matrix, Scalar};

use crate::expr::{parse_field, parse_scalar, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub congruence: bool,
    pub det_nonzero: bool,
    pub homotopy_entries: bool,
}

/// Certificate for cancelling `<a1>` from `A = M^t B M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationCertificate {
    pub field: String,
    pub a: Vec<String>,
    pub b: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<String>>,
    pub sign_flip: bool,
    pub substitution: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<String>>,
    pub checks: Checks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub witt_index: usize,
    pub anisotropic: Vec<String>,
    pub null_dim: usize,
}

/// `source = matrix^t * target * matrix`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryCertificate {
    pub field: String,
    pub source: Vec<Vec<String>>,
    pub target: Vec<Vec<String>>,
    pub matrix: Vec<Vec<String>>,
    pub trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    pub congruence: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Cancellation(CancellationCertificate),
    Isometry(IsometryCertificate),
}

pub fn strings(xs: &[Scalar]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

pub fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

pub fn cancellation_certificate(
    a: &DiagonalForm,
    b: &DiagonalForm,
    m: &Matrix,
    result: &CancellationResult,
    homotopy_entries: bool,
) -> CancellationCertificate {
    CancellationCertificate {
        field: a.ctx().to_string(),
        a: strings(a.entries()),
        b: strings(b.entries()),
        m: rows(m),
        sign_flip: result.sign_flip_applied,
        substitution: strings(&result.substitution),
        n: rows(&result.n_matrix),
        checks: Checks {
            congruence: result.witness.verify(),
            det_nonzero: result.n_matrix.is_invertible(),
            homotopy_entries,
        },
    }
}

pub fn isometry_certificate(w: &IsometryWitness, decomposition: Option<DecompositionSummary>) -> IsometryCertificate {
    IsometryCertificate {
        field: w.target.ctx().to_string(),
        source: rows(w.source.matrix()),
        target: rows(w.target.matrix()),
        matrix: rows(&w.matrix),
        trace: w.trace.clone(),
        decomposition,
        congruence: w.verify(),
    }
}

/// Why a certificate could not be read at all.
#[derive(Debug)]
pub enum ReadError {
    Parse(ParseError, String),
    Domain(witt_core::Error),
}

impl From<witt_core::Error> for ReadError {
    fn from(e: witt_core::Error) -> Self {
        ReadError::Domain(e)
    }
}

fn field(text: &str) -> Result<FieldCtx, ReadError> {
    let tag = parse_field(text).map_err(|e| ReadError::Parse(e, text.to_string()))?;
    Ok(tag.ctx()?)
}

fn scalar(ctx: FieldCtx, text: &str) -> Result<Scalar, ReadError> {
    let x = parse_scalar(text).map_err(|e| ReadError::Parse(e, text.to_string()))?;
    Ok(ctx.from_rational(&x)?)
}

fn vector(ctx: FieldCtx, xs: &[String]) -> Result<Vec<Scalar>, ReadError> {
    xs.iter().map(|x| scalar(ctx, x)).collect()
}

fn matrix(ctx: FieldCtx, rows: &[Vec<String>]) -> Result<Matrix, ReadError> {
    let rows = rows.iter().map(|r| vector(ctx, r)).collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(ctx, 0, 0));
    }
    Ok(Matrix::from_rows(ctx, rows)?)
}

/// One line per recomputed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub lines: Vec<(String, bool)>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|(_, b)| *b)
    }
}

/// `m^t * g * m`.
fn congruent(g: &Matrix, m: &Matrix) -> Option<Matrix> {
    m.transpose().mul(g).ok()?.mul(m).ok()
}

pub fn verify(cert: &Certificate) -> Result<Verdict, ReadError> {
    match cert {
        Certificate::Cancellation(c) => verify_cancellation(c),
        Certificate::Isometry(c) => verify_isometry(c),
    }
}

fn verify_cancellation(c: &CancellationCertificate) -> Result<Verdict, ReadError> {
    let ctx = field(&c.field)?;
    let a = vector(ctx, &c.a)?;
    let b = vector(ctx, &c.b)?;
    let m = matrix(ctx, &c.m)?;
    let nm = matrix(ctx, &c.n)?;
    let sub = vector(ctx, &c.substitution)?;
    let n = a.len();
    let mut lines = Vec::new();
    let shapes = n >= 2 && b.len() == n && m.rows() == n && m.cols() == n && nm.rows() == n - 1 && nm.cols() == n - 1 && sub.len() == n - 1;
    lines.push(("shapes".to_string(), shapes));
    if !shapes {
        return Ok(Verdict { lines });
    }
    let big_a = Matrix::diagonal(ctx, &a);
    let big_b = Matrix::diagonal(ctx, &b);
    lines.push(("input M^t B M = A".to_string(), congruent(&big_b, &m).as_ref() == Some(&big_a)));
    let tail_a = Matrix::diagonal(ctx, &a[1..]);
    let tail_b = Matrix::diagonal(ctx, &b[1..]);
    let congruence = congruent(&tail_b, &nm).as_ref() == Some(&tail_a);
    let det_nonzero = nm.is_invertible();
    lines.push(("congruence N^t B' N = A'".to_string(), congruence));
    lines.push(("det N != 0".to_string(), det_nonzero));

    // N read off the substitution: N[i-1][k-1] = m'_ik + m'_i1 s_k, where m'
    // is M with its first row negated when the sign flip was applied.
    let mut mp = m.clone();
    if c.sign_flip {
        for k in 0..n {
            mp.set(0, k, -m.get(0, k));
        }
    }
    let from_sub = (1..n).all(|i| (1..n).all(|k| *nm.get(i - 1, k - 1) == mp.get(i, k) + &(mp.get(i, 0) * &sub[k - 1])));
    lines.push(("N matches the substitution".to_string(), from_sub));

    let report = homotopy_check(&DiagonalForm::new(ctx, a.clone()), &DiagonalForm::new(ctx, b.clone()), &m);
    let homotopy_entries = report.as_ref().is_ok_and(|r| r.entries_equal);
    lines.push(("homotopy c_ki = d_ki".to_string(), homotopy_entries));
    let recomputed = Checks { congruence, det_nonzero, homotopy_entries };
    lines.push(("recorded checks reproduced".to_string(), recomputed == c.checks));
    Ok(Verdict { lines })
}

fn verify_isometry(c: &IsometryCertificate) -> Result<Verdict, ReadError> {
    let ctx = field(&c.field)?;
    let source = matrix(ctx, &c.source)?;
    let target = matrix(ctx, &c.target)?;
    let m = matrix(ctx, &c.matrix)?;
    let mut lines = Vec::new();
    let congruence = source.is_square() && target.is_square() && congruent(&target, &m).as_ref() == Some(&source);
    lines.push(("congruence matrix^t target matrix = source".to_string(), congruence));
    lines.push(("det matrix != 0".to_string(), m.is_square() && m.is_invertible()));
    if let Some(d) = &c.decomposition {
        let aniso = vector(ctx, &d.anisotropic)?;
        let shape = source.rows() == 2 * d.witt_index + aniso.len() + d.null_dim && source.is_diagonal();
        let mut blocks = shape;
        if shape {
            let diag: Vec<Scalar> = (0..source.rows()).map(|i| source.get(i, i).clone()).collect();
            let k = d.witt_index;
            // over R a block is <p, -n> with p, n > 0
            blocks = (0..k).all(|i| {
                let (x, y) = (&diag[2 * i], &diag[2 * i + 1]);
                match ctx {
                    FieldCtx::RealQ => x.signum() > 0 && y.signum() < 0,
                    _ => x.is_one() && (-y).is_one(),
                }
            }) && diag[2 * k..2 * k + aniso.len()] == aniso[..]
                && diag[2 * k + aniso.len()..].iter().all(Scalar::is_zero);
            let aniso_gram = GramMatrix::diagonal(ctx, &aniso);
            blocks = blocks && (aniso.is_empty() || !witt_core::is_isotropic(&aniso_gram).unwrap_or(true));
        }
        lines.push(("source is H^k + anisotropic + radical".to_string(), blocks));
    }
    lines.push(("recorded verdict reproduced".to_string(), congruence == c.congruence));
    Ok(Verdict { lines })
}
