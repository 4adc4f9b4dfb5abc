//! Quadratic forms as symmetric Gram matrices.
//!
//! A form `q` on `F^n` is stored through its Gram matrix `B`, so that
//! `q(x) = x^t B x`. Two forms are isometric when `A = M^t B M` for an
//! invertible `M`; every construction that changes basis returns an
//! [`IsometryWitness`] carrying that `M` so callers can recheck it exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Scalar, SquareClass};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    ctx: FieldCtx,
    entries: Vec<Scalar>,
}

/// `matrix` is invertible and `source = matrix^t * target * matrix`, i.e.
/// `q_source(x) = q_target(matrix * x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryWitness {
    pub matrix: Matrix,
    pub source: GramMatrix,
    pub target: GramMatrix,
    pub trace: Vec<String>,
}

impl IsometryWitness {
    /// Exact recheck of invertibility and the congruence.
    pub fn verify(&self) -> bool {
        let n = self.target.dim();
        self.matrix.rows() == n
            && self.matrix.cols() == self.source.dim()
            && self.matrix.is_invertible()
            && self
                .target
                .apply_congruence(&self.matrix)
                .map(|g| g == self.source)
                .unwrap_or(false)
    }

    /// Witness for `self.source ≅ other.target`, given `self.target == other.source`.
    pub fn then(&self, other: &IsometryWitness) -> Result<IsometryWitness> {
        if self.target != other.source {
            return Err(Error::PreconditionViolated(
                crate::error::Violation::NotAnIsometry,
            ));
        }
        let mut trace = self.trace.clone();
        trace.extend(other.trace.iter().cloned());
        Ok(IsometryWitness {
            matrix: other.matrix.mul(&self.matrix)?,
            source: self.source.clone(),
            target: other.target.clone(),
            trace,
        })
    }
}

impl GramMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(GramMatrix { matrix })
    }

    pub fn from_rows(ctx: FieldCtx, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        Self::new(Matrix::from_rows(ctx, rows)?)
    }

    pub fn diagonal(ctx: FieldCtx, entries: &[Scalar]) -> Self {
        GramMatrix {
            matrix: Matrix::diagonal(ctx, entries),
        }
    }

    pub fn ctx(&self) -> FieldCtx {
        self.matrix.ctx()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.matrix.get(i, j)
    }

    pub fn determinant(&self) -> Scalar {
        self.matrix.determinant().expect("Gram matrices are square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.matrix.is_diagonal()
    }

    /// Diagonal entries; only meaningful as a form when [`Self::is_diagonal`].
    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.dim()).map(|i| self.entry(i, i).clone()).collect()
    }

    fn check_vec(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        if v.iter().any(|x| !self.ctx().contains(x)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `x^t B y`.
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        let by = self.matrix.mul_vec(y)?;
        Ok(x.iter().zip(&by).fold(self.ctx().zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn evaluate(&self, v: &[Scalar]) -> Result<Scalar> {
        self.bilinear(v, v)
    }

    /// `M^t B M`. `M` needs `dim` rows but need not be square or invertible.
    pub fn apply_congruence(&self, m: &Matrix) -> Result<GramMatrix> {
        if m.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.rows(),
            });
        }
        if m.ctx() != self.ctx() {
            return Err(Error::FieldMismatch);
        }
        let g = m.transpose().mul(&self.matrix)?.mul(m)?;
        Ok(GramMatrix { matrix: g })
    }

    /// Witness that `self` is isometric to itself under `m`, if it is.
    pub fn isometry_witness(&self, m: &Matrix, target: &GramMatrix) -> Result<IsometryWitness> {
        let w = IsometryWitness {
            matrix: m.clone(),
            source: self.clone(),
            target: target.clone(),
            trace: vec![],
        };
        if w.verify() {
            Ok(w)
        } else {
            Err(Error::PreconditionViolated(
                crate::error::Violation::NotAnIsometry,
            ))
        }
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> Result<GramMatrix> {
        if self.ctx() != other.ctx() {
            return Err(Error::FieldMismatch);
        }
        Ok(GramMatrix {
            matrix: self.matrix.block_diag(&other.matrix),
        })
    }

    pub fn tensor_product(&self, other: &GramMatrix) -> Result<GramMatrix> {
        if self.ctx() != other.ctx() {
            return Err(Error::FieldMismatch);
        }
        Ok(GramMatrix {
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Symmetric elimination. Pivots on the first nonzero diagonal entry of
    /// the remaining block; when that block has a zero diagonal but a nonzero
    /// entry `b_ij` (first in lexicographic `i < j` order), the basis change
    /// `e_i <- e_i + e_j` creates the pivot `2 b_ij` first. Returns
    /// `D` with witness `M^t q M = diag(D)`.
    pub fn diagonalize(&self) -> (DiagonalForm, IsometryWitness) {
        let ctx = self.ctx();
        let n = self.dim();
        let mut g = self.matrix.clone();
        let mut m = Matrix::identity(ctx, n);
        let mut trace = Vec::new();

        for k in 0..n {
            let trailing_diagonal =
                (k..n).all(|i| (k..n).all(|j| i == j || g.get(i, j).is_zero()));
            if trailing_diagonal {
                break;
            }
            let pivot = match (k..n).find(|&i| !g.get(i, i).is_zero()) {
                Some(i) => i,
                None => {
                    let (i, j) = (k..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !g.get(i, j).is_zero())
                        .expect("non-diagonal block has a nonzero off-diagonal entry");
                    add_multiple(&mut g, &mut m, i, j, &ctx.one());
                    trace.push(format!("e{} <- e{} + e{}", i + 1, i + 1, j + 1));
                    i
                }
            };
            if pivot != k {
                swap_basis(&mut g, &mut m, pivot, k);
                trace.push(format!("swap e{} <-> e{}", k + 1, pivot + 1));
            }
            let p = g.get(k, k).clone();
            for j in k + 1..n {
                let c = g.get(k, j) / &p;
                if c.is_zero() {
                    continue;
                }
                add_multiple(&mut g, &mut m, j, k, &-&c);
                trace.push(format!("e{} <- e{} - ({})*e{}", j + 1, j + 1, c, k + 1));
            }
        }

        let d = DiagonalForm {
            ctx,
            entries: (0..n).map(|i| g.get(i, i).clone()).collect(),
        };
        debug_assert!(g.is_diagonal());
        let witness = IsometryWitness {
            matrix: m,
            source: d.to_gram(),
            target: self.clone(),
            trace,
        };
        (d, witness)
    }

    /// Orthogonal splitting into a non-degenerate part and the radical.
    /// The witness source is `q_nondeg ⊥ 0^null_dim`.
    pub fn radical_split(&self) -> (GramMatrix, usize, IsometryWitness) {
        let ctx = self.ctx();
        let (d, w) = self.diagonalize();
        let order: Vec<usize> = (0..d.dim())
            .filter(|&i| !d.entries[i].is_zero())
            .chain((0..d.dim()).filter(|&i| d.entries[i].is_zero()))
            .collect();
        let nonzero: Vec<Scalar> = order
            .iter()
            .map(|&i| d.entries[i].clone())
            .filter(|x| !x.is_zero())
            .collect();
        let null_dim = d.dim() - nonzero.len();
        let matrix = w.matrix.select_columns(&order);
        let mut trace = w.trace;
        if order.iter().enumerate().any(|(a, &b)| a != b) {
            trace.push("move radical vectors to the end".to_string());
        }
        let mut all = nonzero.clone();
        all.extend(std::iter::repeat_n(ctx.zero(), null_dim));
        let witness = IsometryWitness {
            matrix,
            source: GramMatrix::diagonal(ctx, &all),
            target: self.clone(),
            trace,
        };
        (GramMatrix::diagonal(ctx, &nonzero), null_dim, witness)
    }
}

fn add_multiple(g: &mut Matrix, m: &mut Matrix, target: usize, source: usize, c: &Scalar) {
    let n = g.rows();
    for i in 0..n {
        let v = g.get(target, i) + &(c * g.get(source, i));
        g.set(target, i, v);
    }
    for i in 0..n {
        let v = g.get(i, target) + &(c * g.get(i, source));
        g.set(i, target, v);
    }
    for i in 0..m.rows() {
        let v = m.get(i, target) + &(c * m.get(i, source));
        m.set(i, target, v);
    }
}

fn swap_basis(g: &mut Matrix, m: &mut Matrix, a: usize, b: usize) {
    let n = g.rows();
    for i in 0..n {
        let (x, y) = (g.get(a, i).clone(), g.get(b, i).clone());
        g.set(a, i, y);
        g.set(b, i, x);
    }
    for i in 0..n {
        let (x, y) = (g.get(i, a).clone(), g.get(i, b).clone());
        g.set(i, a, y);
        g.set(i, b, x);
    }
    for i in 0..m.rows() {
        let (x, y) = (m.get(i, a).clone(), m.get(i, b).clone());
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// `b_ij = (a_ij + a_ji) / 2`: the Gram matrix of `sum a_ij x_i x_j`.
pub fn symmetrize(raw: &Matrix) -> Result<GramMatrix> {
    if !raw.is_square() {
        return Err(Error::DimensionMismatch {
            expected: raw.rows(),
            found: raw.cols(),
        });
    }
    let ctx = raw.ctx();
    let half = ctx.ratio(1, 2)?;
    let n = raw.rows();
    let mut b = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, &(raw.get(i, j) + raw.get(j, i)) * &half);
        }
    }
    GramMatrix::new(b)
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_diagonal() {
            DiagonalForm::new(self.ctx(), self.diagonal_entries()).fmt(f)
        } else {
            self.matrix.fmt(f)
        }
    }
}

impl DiagonalForm {
    pub fn new(ctx: FieldCtx, entries: Vec<Scalar>) -> Self {
        debug_assert!(entries.iter().all(|x| ctx.contains(x)));
        DiagonalForm { ctx, entries }
    }

    pub fn from_ints(ctx: FieldCtx, entries: &[i64]) -> Self {
        Self::new(ctx, entries.iter().map(|&x| ctx.int(x)).collect())
    }

    pub fn empty(ctx: FieldCtx) -> Self {
        Self::new(ctx, vec![])
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.entries.iter().all(|a| !a.is_zero())
    }

    pub fn to_gram(&self) -> GramMatrix {
        GramMatrix::diagonal(self.ctx, &self.entries)
    }

    pub fn negate(&self) -> DiagonalForm {
        DiagonalForm::new(self.ctx, self.entries.iter().map(|a| -a).collect())
    }

    pub fn determinant(&self) -> Scalar {
        self.entries.iter().fold(self.ctx.one(), |acc, a| acc * a)
    }

    /// Square class of `(-1)^(n(n-1)/2) * det`.
    pub fn signed_discriminant(&self) -> Result<SquareClass> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let n = self.dim();
        let mut d = self.determinant();
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            d = -d;
        }
        self.ctx.square_class(&d)
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(">")
    }
}
