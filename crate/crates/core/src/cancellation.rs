//! Witt cancellation, constructively.
//!
//! Given diagonal forms `a = <a1..an>`, `b = <b1..bn>` with `a1 = b1` and an
//! isometry `M` (`M^t diag(b) M = diag(a)`), both routes below produce `N`
//! with `N^t diag(b2..bn) N = diag(a2..an)`:
//!
//! * the substitution route eliminates `x1 = y / (1 - m11)` where
//!   `y = m12 x2 + ... + m1n xn`, so `z_i` for `i >= 2` becomes a linear form
//!   in `x2..xn` with coefficients `m_ik + m_i1 m_1k / (1 - m11)`;
//! * the reflection route applies `tau_u` with `u = e1 - f1` to the images
//!   of `e2..en` and reads off their coordinates along `f2..fn`.
//!
//! When `m11 = 1` the first row of `M` is negated beforehand (`f1 -> -f1`),
//! which leaves the isometry intact and makes `1 - m11` invertible.

use crate::error::{Error, Result, Violation};
use crate::field::{FieldCtx, Scalar};
use crate::form::{DiagonalForm, GramMatrix, IsometryWitness};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationResult {
    /// `(n-1) x (n-1)` with `N^t B' N = A'`.
    pub n_matrix: Matrix,
    /// Coefficients of `x2..xn` in the expression substituted for `x1`.
    pub substitution: Vec<Scalar>,
    pub sign_flip_applied: bool,
    pub witness: IsometryWitness,
}

/// A vector with `q(u) != 0`, so the reflection `tau_u` is defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionVector {
    u: Vec<Scalar>,
    q_u: Scalar,
}

impl ReflectionVector {
    pub fn new(q: &GramMatrix, u: Vec<Scalar>) -> Result<Self> {
        let q_u = q.evaluate(&u)?;
        if q_u.is_zero() {
            return Err(Error::IsotropicReflectionVector);
        }
        Ok(ReflectionVector { u, q_u })
    }

    pub fn vector(&self) -> &[Scalar] {
        &self.u
    }

    pub fn value(&self) -> &Scalar {
        &self.q_u
    }
}

/// Matrix of `z -> z - (2 B(z, u) / q(u)) u`, i.e. `I - (2/q(u)) u u^t B`.
pub fn reflection_matrix(q: &GramMatrix, u: &ReflectionVector) -> Result<Matrix> {
    let ctx = q.ctx();
    let n = q.dim();
    if u.u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.u.len(),
        });
    }
    // row vector u^t B
    let ub = q.matrix().transpose().mul_vec(&u.u)?;
    let coeff = &ctx.int(2) / &u.q_u;
    let mut r = Matrix::identity(ctx, n);
    for i in 0..n {
        let ci = &coeff * &u.u[i];
        if ci.is_zero() {
            continue;
        }
        for j in 0..n {
            let v = r.get(i, j) - &(&ci * &ub[j]);
            r.set(i, j, v);
        }
    }
    Ok(r)
}

fn sub_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn add_vec(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// An isometry `T` of `q` with `T x = y`, for `q(x) = q(y) != 0`.
///
/// Uses `tau_{x-y}` when `q(x - y) != 0`, otherwise `-tau_{x+y}`; the flag
/// reports the second branch. `x = y` returns the identity.
pub fn transporter(q: &GramMatrix, x: &[Scalar], y: &[Scalar]) -> Result<(Matrix, bool)> {
    let qx = q.evaluate(x)?;
    let qy = q.evaluate(y)?;
    if qx != qy {
        return Err(Error::PreconditionViolated(Violation::ValuesDiffer));
    }
    if qx.is_zero() {
        return Err(Error::PreconditionViolated(Violation::ZeroValue));
    }
    if x == y {
        return Ok((Matrix::identity(q.ctx(), q.dim()), false));
    }
    let diff = sub_vec(x, y);
    if let Ok(u) = ReflectionVector::new(q, diff) {
        return Ok((reflection_matrix(q, &u)?, false));
    }
    // q(x+y) + q(x-y) = 4 q(x) != 0
    let u = ReflectionVector::new(q, add_vec(x, y))?;
    let t = reflection_matrix(q, &u)?;
    Ok((t.scale(&-q.ctx().one()), true))
}

/// Validated inputs shared by both cancellation routes.
struct Instance {
    ctx: FieldCtx,
    n: usize,
    a: DiagonalForm,
    b: DiagonalForm,
    /// `M` after the optional first-row negation.
    m: Matrix,
    sign_flip: bool,
}

fn prepare(a: &DiagonalForm, b: &DiagonalForm, m: &Matrix) -> Result<Instance> {
    let ctx = a.ctx();
    if b.ctx() != ctx || m.ctx() != ctx {
        return Err(Error::FieldMismatch);
    }
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.rows() != n { m.rows() } else { m.cols() },
        });
    }
    if n <= 1 {
        return Err(Error::PreconditionViolated(Violation::DimensionTooSmall));
    }
    if !a.is_nondegenerate() || !b.is_nondegenerate() {
        return Err(Error::PreconditionViolated(Violation::Degenerate));
    }
    if a.entries()[0] != b.entries()[0] {
        return Err(Error::PreconditionViolated(Violation::FirstEntriesDiffer));
    }
    if b.to_gram().apply_congruence(m)? != a.to_gram() {
        return Err(Error::PreconditionViolated(Violation::NotAnIsometry));
    }
    let mut m = m.clone();
    let sign_flip = m.get(0, 0).is_one();
    if sign_flip {
        for k in 0..n {
            let v = -m.get(0, k);
            m.set(0, k, v);
        }
    }
    Ok(Instance {
        ctx,
        n,
        a: a.clone(),
        b: b.clone(),
        m,
        sign_flip,
    })
}

impl Instance {
    fn tail(form: &DiagonalForm) -> DiagonalForm {
        DiagonalForm::new(form.ctx(), form.entries()[1..].to_vec())
    }

    /// `1 / (1 - m11)`.
    fn pivot_inv(&self) -> Scalar {
        let one_minus = &self.ctx.one() - self.m.get(0, 0);
        one_minus.inv().expect("m11 != 1 after preprocessing")
    }

    fn substitution(&self) -> Vec<Scalar> {
        let inv = self.pivot_inv();
        (1..self.n).map(|k| self.m.get(0, k) * &inv).collect()
    }

    /// `d_ki = m_ik + m_i1 m_1k / (1 - m11)` laid out as `N[i-1][k-1]`.
    fn substitution_matrix(&self) -> Matrix {
        let sub = self.substitution();
        let mut nm = Matrix::zeros(self.ctx, self.n - 1, self.n - 1);
        for i in 1..self.n {
            for k in 1..self.n {
                let v = self.m.get(i, k) + &(self.m.get(i, 0) * &sub[k - 1]);
                nm.set(i - 1, k - 1, v);
            }
        }
        nm
    }

    /// `e1 - f1` in `f`-coordinates, i.e. `(m11 - 1, m21, ..., mn1)`.
    fn axis(&self) -> Vec<Scalar> {
        let mut u = self.m.column(0);
        u[0] = &u[0] - &self.ctx.one();
        u
    }

    /// `T * M` where `T` maps `e1` to `f1`; column `k` holds the
    /// `f`-coordinates of `T(e_k)`.
    fn transported(&self) -> Result<(Matrix, bool)> {
        let bq = self.b.to_gram();
        let e1 = self.m.column(0);
        let mut f1 = vec![self.ctx.zero(); self.n];
        f1[0] = self.ctx.one();
        let (t, sum_branch) = transporter(&bq, &e1, &f1)?;
        Ok((t.mul(&self.m)?, sum_branch))
    }

    fn finish(&self, n_matrix: Matrix, trace: Vec<String>) -> Result<CancellationResult> {
        let source = Self::tail(&self.a).to_gram();
        let target = Self::tail(&self.b).to_gram();
        let witness = IsometryWitness {
            matrix: n_matrix.clone(),
            source,
            target,
            trace,
        };
        // Guaranteed by the cancellation theorem; a failure here is a bug.
        assert!(witness.verify(), "cancellation produced an invalid isometry");
        Ok(CancellationResult {
            n_matrix,
            substitution: self.substitution(),
            sign_flip_applied: self.sign_flip,
            witness,
        })
    }

    fn flip_note(&self) -> Vec<String> {
        if self.sign_flip {
            vec!["m11 = 1: negate first row of M (z1 -> -z1)".to_string()]
        } else {
            vec![]
        }
    }
}

/// Cancellation by eliminating `x1` from the polynomial identity.
pub fn cancel_first_algebraic(
    a: &DiagonalForm,
    b: &DiagonalForm,
    m: &Matrix,
) -> Result<CancellationResult> {
    let inst = prepare(a, b, m)?;
    let mut trace = inst.flip_note();
    let sub = inst.substitution();
    let terms: Vec<String> = sub
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("({c})*x{}", k + 2))
        .collect();
    trace.push(format!(
        "substitute x1 = {}",
        if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
    ));
    let nm = inst.substitution_matrix();
    trace.push(format!("N = {nm}"));
    inst.finish(nm, trace)
}

/// Cancellation by the reflection sending `e1` to `f1`.
pub fn cancel_first_geometric(
    a: &DiagonalForm,
    b: &DiagonalForm,
    m: &Matrix,
) -> Result<CancellationResult> {
    let inst = prepare(a, b, m)?;
    let mut trace = inst.flip_note();
    let (tm, sum_branch) = inst.transported()?;
    trace.push(format!(
        "transport e1 to f1 with {}",
        if sum_branch { "-tau_(e1+f1)" } else { "tau_(e1-f1)" }
    ));
    for k in 1..inst.n {
        debug_assert!(tm.get(0, k).is_zero(), "T(e_k) must lie in f1-perp");
    }
    let nm = tm.submatrix(1, inst.n, 1, inst.n);
    trace.push(format!("N = {nm}"));
    inst.finish(nm, trace)
}

/// Entrywise comparison of the reflection coefficients `c_ki` with the
/// substitution coefficients `d_ki`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyReport {
    pub sign_flip_applied: bool,
    /// `c[i-1][k-1]`: coefficient of `f_i` in `tau_u(e_k)`, from the reflection matrix.
    pub reflection_coefficients: Matrix,
    /// `d[i-1][k-1]`: coefficient of `x_k` in `w_i`, from the substitution.
    pub substitution_coefficients: Matrix,
    pub entries_equal: bool,
    /// Every `tau_u(e_k)`, `k >= 2`, has zero `f1`-coordinate.
    pub lands_in_complement: bool,
    pub q_u: Scalar,
    /// `2 b1 (1 - m11)`.
    pub q_u_expected: Scalar,
    pub q_u_matches: bool,
}

impl HomotopyReport {
    pub fn holds(&self) -> bool {
        self.entries_equal && self.lands_in_complement && self.q_u_matches
    }
}

pub fn homotopy_check(a: &DiagonalForm, b: &DiagonalForm, m: &Matrix) -> Result<HomotopyReport> {
    let inst = prepare(a, b, m)?;
    let bq = inst.b.to_gram();
    let u = ReflectionVector::new(&bq, inst.axis())?;
    let tau = reflection_matrix(&bq, &u)?;
    let images = tau.mul(&inst.m)?;
    let c = images.submatrix(1, inst.n, 1, inst.n);
    let d = inst.substitution_matrix();
    let lands = (1..inst.n).all(|k| images.get(0, k).is_zero());
    let b1 = &inst.b.entries()[0];
    let expected = &(&inst.ctx.int(2) * b1) * &(&inst.ctx.one() - inst.m.get(0, 0));
    Ok(HomotopyReport {
        sign_flip_applied: inst.sign_flip,
        entries_equal: c == d,
        reflection_coefficients: c,
        substitution_coefficients: d,
        lands_in_complement: lands,
        q_u_matches: *u.value() == expected,
        q_u: u.value().clone(),
        q_u_expected: expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldCtx {
        FieldCtx::Rationals
    }

    fn rotation() -> Matrix {
        let ctx = q();
        let r = |n| ctx.ratio(n, 5).unwrap();
        Matrix::from_rows(ctx, vec![vec![r(3), r(4)], vec![r(-4), r(3)]]).unwrap()
    }

    fn ints(ctx: FieldCtx, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            ctx,
            rows.iter().map(|r| r.iter().map(|&x| ctx.int(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_triggers_sign_flip() {
        let f = DiagonalForm::from_ints(q(), &[1, 2]);
        let id = Matrix::identity(q(), 2);
        for r in [
            cancel_first_algebraic(&f, &f, &id).unwrap(),
            cancel_first_geometric(&f, &f, &id).unwrap(),
        ] {
            assert!(r.sign_flip_applied);
            assert_eq!(r.n_matrix, Matrix::identity(q(), 1));
        }
    }

    #[test]
    fn rotation_example() {
        let f = DiagonalForm::from_ints(q(), &[1, 1]);
        let alg = cancel_first_algebraic(&f, &f, &rotation()).unwrap();
        assert!(!alg.sign_flip_applied);
        assert_eq!(alg.n_matrix, ints(q(), &[&[-1]]));
        assert_eq!(alg.substitution, vec![q().int(2)]);
        let geo = cancel_first_geometric(&f, &f, &rotation()).unwrap();
        assert_eq!(geo.n_matrix, alg.n_matrix);
        let h = homotopy_check(&f, &f, &rotation()).unwrap();
        assert!(h.holds());
        assert_eq!(h.reflection_coefficients, ints(q(), &[&[-1]]));
        assert_eq!(h.q_u, q().ratio(4, 5).unwrap());
    }

    #[test]
    fn identity_in_higher_dimension() {
        let f = DiagonalForm::from_ints(q(), &[2, -3, 5, 7]);
        let id = Matrix::identity(q(), 4);
        let r = cancel_first_geometric(&f, &f, &id).unwrap();
        assert_eq!(r.n_matrix, Matrix::identity(q(), 3));
    }

    #[test]
    fn zero_first_row_gives_plain_restriction() {
        // M = diag(-1) ⊕ rotation: m12 = m13 = 0, so c_ki = m_ik = d_ki.
        let ctx = q();
        let f = DiagonalForm::from_ints(ctx, &[3, 1, 1]);
        let r = |n| ctx.ratio(n, 5).unwrap();
        let m = Matrix::from_rows(
            ctx,
            vec![
                vec![ctx.int(-1), ctx.zero(), ctx.zero()],
                vec![ctx.zero(), r(3), r(4)],
                vec![ctx.zero(), r(-4), r(3)],
            ],
        )
        .unwrap();
        let h = homotopy_check(&f, &f, &m).unwrap();
        assert!(h.holds());
        assert_eq!(h.substitution_coefficients, m.submatrix(1, 3, 1, 3));
    }

    #[test]
    fn preconditions() {
        let f = DiagonalForm::from_ints(q(), &[1, 1]);
        let g = DiagonalForm::from_ints(q(), &[2, 1]);
        let id2 = Matrix::identity(q(), 2);
        assert_eq!(
            cancel_first_algebraic(&f, &g, &id2),
            Err(Error::PreconditionViolated(Violation::FirstEntriesDiffer))
        );
        let bad = ints(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(
            cancel_first_algebraic(&f, &f, &bad),
            Err(Error::PreconditionViolated(Violation::NotAnIsometry))
        );
        let one = DiagonalForm::from_ints(q(), &[1]);
        assert_eq!(
            cancel_first_geometric(&one, &one, &Matrix::identity(q(), 1)),
            Err(Error::PreconditionViolated(Violation::DimensionTooSmall))
        );
        let deg = DiagonalForm::from_ints(q(), &[1, 0]);
        assert_eq!(
            cancel_first_algebraic(&deg, &deg, &id2),
            Err(Error::PreconditionViolated(Violation::Degenerate))
        );
    }

    #[test]
    fn reflection_swaps_basis() {
        let f = DiagonalForm::from_ints(q(), &[1, 1]).to_gram();
        let u = ReflectionVector::new(&f, vec![q().int(1), q().int(-1)]).unwrap();
        assert_eq!(reflection_matrix(&f, &u).unwrap(), ints(q(), &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn reflection_rejects_isotropic_axis() {
        let h = DiagonalForm::from_ints(q(), &[1, -1]).to_gram();
        assert_eq!(
            ReflectionVector::new(&h, vec![q().int(1), q().int(1)]),
            Err(Error::IsotropicReflectionVector)
        );
    }

    #[test]
    fn transporter_examples() {
        let ctx = q();
        let f = DiagonalForm::from_ints(ctx, &[1, 1]).to_gram();
        let (t, sum) = transporter(&f, &[ctx.int(1), ctx.int(0)], &[ctx.int(0), ctx.int(1)]).unwrap();
        assert!(!sum);
        assert_eq!(t, ints(ctx, &[&[0, 1], &[1, 0]]));

        let x = [ctx.int(2), ctx.int(3)];
        let (t, _) = transporter(&f, &x, &x).unwrap();
        assert_eq!(t, Matrix::identity(ctx, 2));

        let h = DiagonalForm::from_ints(ctx, &[1, -1]).to_gram();
        let x = [ctx.ratio(5, 4).unwrap(), ctx.ratio(3, 4).unwrap()];
        let y = [ctx.int(1), ctx.int(0)];
        let (t, _) = transporter(&h, &x, &y).unwrap();
        assert_eq!(t.mul_vec(&x).unwrap(), y.to_vec());
        assert_eq!(h.apply_congruence(&t).unwrap(), h);

        assert_eq!(
            transporter(&f, &[ctx.int(1), ctx.int(0)], &[ctx.int(1), ctx.int(1)]),
            Err(Error::PreconditionViolated(Violation::ValuesDiffer))
        );
        assert_eq!(
            transporter(&h, &[ctx.int(1), ctx.int(1)], &[ctx.int(1), ctx.int(-1)]),
            Err(Error::PreconditionViolated(Violation::ZeroValue))
        );
    }

    #[test]
    fn transporter_sum_branch() {
        // q(x - y) = 0 but q(x + y) != 0.
        let ctx = q();
        let h = DiagonalForm::from_ints(ctx, &[1, -1, 1]).to_gram();
        let x = [ctx.int(1), ctx.int(0), ctx.int(0)];
        // q(x) = 1, y = (1, 1, 1): x - y = (0, -1, -1) isotropic.
        let y = [ctx.int(1), ctx.int(1), ctx.int(1)];
        let (t, sum) = transporter(&h, &x, &y).unwrap();
        assert!(sum);
        assert_eq!(t.mul_vec(&x).unwrap(), y.to_vec());
        assert_eq!(h.apply_congruence(&t).unwrap(), h);
    }
}
