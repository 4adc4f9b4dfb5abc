//! Seeded random generators for forms, isometries and cancellation inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cancellation::{reflection_matrix, ReflectionVector};
use crate::field::{FieldCtx, Scalar};
use crate::form::{DiagonalForm, GramMatrix};
use crate::matrix::Matrix;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small numerators and denominators over `Q` and `R`; uniform over `F_p`.
pub fn random_scalar<R: Rng>(rng: &mut R, ctx: FieldCtx, nonzero: bool) -> Scalar {
    loop {
        let x = match ctx.modulus() {
            Some(p) => ctx.int(rng.gen_range(0..p) as i64),
            None => {
                let n = rng.gen_range(-9..=9);
                let d = if rng.gen_bool(0.3) { rng.gen_range(2..=5) } else { 1 };
                ctx.ratio(n, d).expect("nonzero denominator")
            }
        };
        if !(nonzero && x.is_zero()) {
            return x;
        }
    }
}

fn small_scalar<R: Rng>(rng: &mut R, ctx: FieldCtx) -> Scalar {
    match ctx.modulus() {
        Some(_) => random_scalar(rng, ctx, false),
        None => ctx.int(rng.gen_range(-3..=3)),
    }
}

pub fn random_diagonal<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> DiagonalForm {
    DiagonalForm::new(ctx, (0..n).map(|_| random_scalar(rng, ctx, true)).collect())
}

/// Symmetric matrix with roughly a third of the entries zero, possibly singular.
pub fn random_symmetric<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> GramMatrix {
    let mut m = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in i..n {
            let x = if rng.gen_bool(0.3) { ctx.zero() } else { random_scalar(rng, ctx, false) };
            m.set(i, j, x.clone());
            m.set(j, i, x);
        }
    }
    GramMatrix::new(m).expect("symmetric by construction")
}

pub fn random_nondegenerate<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> GramMatrix {
    loop {
        let g = random_symmetric(rng, ctx, n);
        if g.is_nondegenerate() {
            return g;
        }
    }
}

/// Random matrix with small entries and nonzero determinant.
pub fn random_invertible<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, small_scalar(rng, ctx));
            }
        }
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random `u` with `q(u) != 0`; with `fix_first` its first coordinate is 0,
/// so for diagonal `q` the reflection fixes `e1`.
pub fn random_reflection_vector<R: Rng>(rng: &mut R, q: &GramMatrix, fix_first: bool) -> ReflectionVector {
    let ctx = q.ctx();
    loop {
        let mut u: Vec<Scalar> = (0..q.dim()).map(|_| small_scalar(rng, ctx)).collect();
        if fix_first {
            u[0] = ctx.zero();
        }
        if let Ok(r) = ReflectionVector::new(q, u) {
            return r;
        }
    }
}

/// Product of `count` random reflections of `q`.
pub fn random_isometry<R: Rng>(rng: &mut R, q: &GramMatrix, count: usize, fix_first: bool) -> Matrix {
    let mut m = Matrix::identity(q.ctx(), q.dim());
    for _ in 0..count {
        let u = random_reflection_vector(rng, q, fix_first && q.dim() > 1);
        m = reflection_matrix(q, &u).expect("valid reflection").mul(&m).expect("square");
    }
    m
}

/// Permutation matrix swapping two coordinates with equal diagonal entries,
/// if any such pair exists.
fn diagonal_swap<R: Rng>(rng: &mut R, b: &DiagonalForm) -> Option<Matrix> {
    let e = b.entries();
    let pairs: Vec<(usize, usize)> = (0..e.len())
        .flat_map(|i| (i + 1..e.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| e[i] == e[j])
        .collect();
    if pairs.is_empty() {
        return None;
    }
    let (i, j) = pairs[rng.gen_range(0..pairs.len())];
    let mut m = Matrix::identity(b.ctx(), e.len());
    m.set(i, i, b.ctx().zero());
    m.set(j, j, b.ctx().zero());
    m.set(i, j, b.ctx().one());
    m.set(j, i, b.ctx().one());
    Some(m)
}

/// Inputs `(A, B, M)` with `M^t B M = A`, `a1 = b1`, both diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationInstance {
    pub a: DiagonalForm,
    pub b: DiagonalForm,
    pub m: Matrix,
}

/// Either `A = B` with `M` an isometry of `B`, or `A` read off an orthogonal
/// basis grown from the first column of such an isometry. About one in five
/// instances uses reflections fixing `e1`, which forces `m11 = 1`.
pub fn random_cancellation_instance<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize) -> CancellationInstance {
    loop {
        let b = if rng.gen_bool(0.3) {
            // repeated entries make coordinate swaps available
            let base = random_diagonal(rng, ctx, n.min(2));
            DiagonalForm::new(ctx, (0..n).map(|i| base.entries()[i % base.dim()].clone()).collect())
        } else {
            random_diagonal(rng, ctx, n)
        };
        let bq = b.to_gram();
        let fix_first = rng.gen_bool(0.2);
        let count = rng.gen_range(1..=6);
        let mut p = random_isometry(rng, &bq, count, fix_first);
        if !fix_first && rng.gen_bool(0.3) {
            if let Some(s) = diagonal_swap(rng, &b) {
                p = s.mul(&p).expect("square");
            }
        }
        if rng.gen_bool(0.5) {
            return CancellationInstance { a: b.clone(), b, m: p };
        }
        if let Some((a, m)) = orthogonal_completion(rng, &bq, &p.column(0)) {
            return CancellationInstance { a, b, m };
        }
    }
}

/// Orthogonal basis starting with `e` (with `q(e)` nonzero), grown from
/// random vectors by Gram-Schmidt; `None` if an isotropic vector turns up.
fn orthogonal_completion<R: Rng>(rng: &mut R, q: &GramMatrix, e: &[Scalar]) -> Option<(DiagonalForm, Matrix)> {
    let ctx = q.ctx();
    let n = q.dim();
    let mut cols: Vec<Vec<Scalar>> = vec![e.to_vec()];
    let mut values = vec![q.evaluate(e).ok()?];
    for _ in 0..8 * n {
        if cols.len() == n {
            break;
        }
        let mut v: Vec<Scalar> = (0..n).map(|_| small_scalar(rng, ctx)).collect();
        for (c, qc) in cols.iter().zip(&values) {
            let coef = &q.bilinear(&v, c).ok()? / qc;
            v = v.iter().zip(c).map(|(x, y)| x - &(&coef * y)).collect();
        }
        let qv = q.evaluate(&v).ok()?;
        if !qv.is_zero() {
            cols.push(v);
            values.push(qv);
        }
    }
    if cols.len() < n {
        return None;
    }
    let m = Matrix::from_columns(ctx, n, &cols);
    Some((DiagonalForm::new(ctx, values), m))
}
