//! Isotropy decisions, isotropic vectors, hyperbolic splitting and the Witt
//! decomposition `V = H^k ⊥ V_a`.
//!
//! Over `F_p` every search is exhaustive. Over `Q` isotropy is decided by the
//! local conditions at the real place and at the primes dividing `2 * det`,
//! and vectors are then constructed: a short height-ordered scan first, then
//! rotations of binary subforms along auxiliary values until some slot
//! holds minus the first diagonal entry. Binary subforms are rotated by
//! solving ternary forms (reduced lattices, with Lagrange's descent as a
//! fallback). Over `R` (rational scalars, square class = sign) a form is
//! isotropic iff it is indefinite, and the decomposition pairs positive
//! with negative diagonal entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::conic::solve_ternary;
use crate::local;
use crate::error::{Error, Result};
use crate::field::{self, FieldCtx, Place, Scalar};
use crate::form::{DiagonalForm, GramMatrix, IsometryWitness};
use crate::matrix::Matrix;

/// Default bound on auxiliary candidates in isotropic vector searches over `Q`.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// Largest number of vectors scanned in the initial small-height pass.
const SHORT_SCAN_LIMIT: u64 = 1_000;

pub fn is_isotropic(q: &GramMatrix) -> Result<bool> {
    if !q.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let n = q.dim();
    if n < 2 {
        return Ok(false);
    }
    match q.ctx() {
        FieldCtx::PrimeField(_) => {
            if n == 2 {
                Ok(projective_binary_search(q).is_some())
            } else {
                // Chevalley: always isotropic; confirm constructively.
                Ok(prime_field_vector(q).is_some())
            }
        }
        FieldCtx::RealQ => {
            let (d, _) = q.diagonalize();
            Ok(is_indefinite(&d))
        }
        FieldCtx::Rationals => {
            let (d, _) = q.diagonalize();
            Ok(rational_diagonal_isotropic(&squarefree_entries(&d)))
        }
    }
}

fn is_indefinite(d: &DiagonalForm) -> bool {
    let signs: Vec<i8> = d.entries().iter().map(Scalar::signum).collect();
    signs.contains(&1) && signs.contains(&-1)
}

fn squarefree_entries(d: &DiagonalForm) -> Vec<BigInt> {
    d.entries()
        .iter()
        .map(|a| field::squarefree_of(a.as_rational().expect("rational entries")))
        .collect()
}

/// Local isotropy of `<s_1, ..., s_n>` at one place.
fn locally_isotropic(s: &[BigInt], v: &Place) -> bool {
    let n = s.len();
    if n >= 5 {
        return match v {
            Place::RealPlace => s.iter().any(|x| x.is_positive()) && s.iter().any(|x| x.is_negative()),
            Place::FinitePrime(_) => true,
        };
    }
    let d: BigInt = s.iter().product();
    let mut eps = 1i8;
    for i in 0..n {
        for j in i + 1..n {
            eps *= field::hilbert_int(&s[i], &s[j], v);
        }
    }
    let m1 = -BigInt::one();
    match n {
        0 | 1 => false,
        2 => field::is_local_square(&-&d, v),
        3 => field::hilbert_int(&m1, &-&d, v) == eps,
        _ => !field::is_local_square(&d, v) || eps == field::hilbert_int(&m1, &m1, v),
    }
}

/// Hasse-Minkowski decision for a diagonal form with nonzero integer entries.
pub(crate) fn rational_diagonal_isotropic(s: &[BigInt]) -> bool {
    if s.len() < 2 {
        return false;
    }
    field::relevant_places(s.iter()).iter().all(|v| locally_isotropic(s, v))
}

/// Exhaustive search over the projective line for a binary form over `F_p`.
fn projective_binary_search(q: &GramMatrix) -> Option<Vec<Scalar>> {
    let ctx = q.ctx();
    let elems = ctx.elements()?;
    let v = vec![ctx.zero(), ctx.one()];
    if q.evaluate(&v).ok()?.is_zero() {
        return Some(v);
    }
    elems.into_iter().find_map(|t| {
        let v = vec![ctx.one(), t];
        q.evaluate(&v).ok()?.is_zero().then_some(v)
    })
}

/// Isotropic vector of a form over `F_p`: exhaustive on the projective line
/// for `n = 2`, and for `n >= 3` an exhaustive scan of the affine chart
/// `(1, s, t)` of the conic cut out by the first three diagonal coordinates.
fn prime_field_vector(q: &GramMatrix) -> Option<Vec<Scalar>> {
    let ctx = q.ctx();
    match q.dim() {
        0 | 1 => None,
        2 => projective_binary_search(q),
        n => {
            let (d, w) = q.diagonalize();
            let a = d.entries();
            if let Some(i) = a.iter().position(Scalar::is_zero) {
                let mut x = vec![ctx.zero(); n];
                x[i] = ctx.one();
                return w.matrix.mul_vec(&x).ok();
            }
            for s in ctx.elements()? {
                let rhs = -(&(&a[0] + &(&a[1] * &(&s * &s))) / &a[2]);
                if let Some(t) = ctx.sqrt(&rhs) {
                    let mut x = vec![ctx.zero(); n];
                    x[0] = ctx.one();
                    x[1] = s;
                    x[2] = t;
                    return w.matrix.mul_vec(&x).ok();
                }
            }
            None
        }
    }
}

/// A nonzero `v` with `q(v) = 0`. Over `Q` the result is a primitive
/// integer vector.
pub fn find_isotropic_vector(q: &GramMatrix, budget: u64) -> Result<Vec<Scalar>> {
    if !q.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    match q.ctx() {
        FieldCtx::RealQ => Err(Error::UnsupportedFieldForVectorSearch(q.ctx().to_string())),
        FieldCtx::PrimeField(_) => prime_field_vector(q).ok_or(Error::NotIsotropic),
        FieldCtx::Rationals => {
            if !is_isotropic(q)? {
                return Err(Error::NotIsotropic);
            }
            if let Some(v) = short_scan(q, budget) {
                return Ok(v);
            }
            let (d, w) = q.diagonalize();
            let mut frame = DiagonalFrame {
                entries: d.entries().to_vec(),
                columns: (0..q.dim()).map(|j| w.matrix.column(j)).collect(),
            };
            frame.normalize(q.ctx());
            let v = RationalFrame::from_frame(frame).isotropic_vector(budget)?;
            Ok(primitive(&v))
        }
    }
}

/// Scale a nonzero rational vector to a primitive integer vector.
fn primitive(v: &[Scalar]) -> Vec<Scalar> {
    let rats: Vec<&BigRational> = v.iter().map(|x| x.as_rational().unwrap()).collect();
    let l = arith::lcm_all(rats.iter().map(|r| r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = arith::gcd_all(ints.iter());
    let mut ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        ints = ints.into_iter().map(|x| -x).collect();
    }
    ints.into_iter().map(|x| FieldCtx::Rationals.from_bigint(&x)).collect()
}

/// Projective integer vectors of height exactly `h`: primitive, first
/// nonzero coordinate positive, lexicographic in the order 0, 1, -1, 2, -2, ...
fn vectors_of_height(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let values: Vec<i64> = std::iter::once(0)
        .chain((1..=h).flat_map(|k| [k, -k]))
        .collect();
    let base = values.len();
    let total = (base as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut idx| {
        let mut v = vec![0i64; n];
        for slot in (0..n).rev() {
            v[slot] = values[(idx % base as u64) as usize];
            idx /= base as u64;
        }
        let first = v.iter().copied().find(|&x| x != 0)?;
        let height = v.iter().map(|x| x.abs()).max()?;
        let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
        (first > 0 && height == h && g == 1).then_some(v)
    })
}

fn short_scan(q: &GramMatrix, budget: u64) -> Option<Vec<Scalar>> {
    let n = q.dim() as u32;
    let ctx = q.ctx();
    let mut h = 1i64;
    while (h as u64) <= budget && (2 * h as u64 + 1).checked_pow(n)? <= SHORT_SCAN_LIMIT {
        for v in vectors_of_height(n as usize, h) {
            let v: Vec<Scalar> = v.into_iter().map(|x| ctx.int(x)).collect();
            if q.evaluate(&v).ok()?.is_zero() {
                return Some(v);
            }
        }
        h += 1;
    }
    None
}

/// Splits off the hyperbolic plane through an isotropic `v`: the witness
/// source is `<1, -1> ⊥ complement`.
pub fn split_hyperbolic(q: &GramMatrix, v: &[Scalar]) -> Result<(GramMatrix, IsometryWitness)> {
    let ctx = q.ctx();
    let n = q.dim();
    if !q.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    if v.iter().all(Scalar::is_zero) || !q.evaluate(v)?.is_zero() {
        return Err(Error::NotIsotropicVector);
    }
    let basis = |i: usize| {
        let mut e = vec![ctx.zero(); n];
        e[i] = ctx.one();
        e
    };
    // partner w with B(v, w) = 1, then w' = w - q(w)/2 v so that q(w') = 0
    let (j, bvj) = (0..n)
        .map(|j| (j, q.bilinear(v, &basis(j)).expect("dims match")))
        .find(|(_, b)| !b.is_zero())
        .expect("non-degenerate form pairs v with some basis vector");
    let w: Vec<Scalar> = basis(j).iter().map(|x| x / &bvj).collect();
    let half_qw = &q.evaluate(&w)? / &ctx.int(2);
    let w2: Vec<Scalar> = w.iter().zip(v).map(|(wi, vi)| wi - &(&half_qw * vi)).collect();
    let half = ctx.ratio(1, 2)?;
    let u1: Vec<Scalar> = v.iter().zip(&w2).map(|(a, b)| &(&half * a) + b).collect();
    let u2: Vec<Scalar> = v.iter().zip(&w2).map(|(a, b)| &(&half * a) - b).collect();

    let mut cols = vec![u1.clone(), u2.clone()];
    let mut rank = 2;
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut trial = cols.clone();
        trial.push(basis(i));
        let r = Matrix::from_columns(ctx, n, &trial).rank();
        if r > rank {
            rank = r;
            let e = basis(i);
            let b1 = q.bilinear(&e, &u1)?;
            let b2 = q.bilinear(&e, &u2)?;
            // project onto span{u1, u2}^perp; q(u1) = 1, q(u2) = -1
            let p: Vec<Scalar> = (0..n)
                .map(|k| &(&e[k] - &(&b1 * &u1[k])) + &(&b2 * &u2[k]))
                .collect();
            cols.push(p);
        }
    }
    let m = Matrix::from_columns(ctx, n, &cols);
    let source = q.apply_congruence(&m)?;
    let complement = GramMatrix::new(source.matrix().submatrix(2, n, 2, n))?;
    let vs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    let witness = IsometryWitness {
        matrix: m,
        source,
        target: q.clone(),
        trace: vec![format!("split hyperbolic plane through ({})", vs.join(", "))],
    };
    Ok((complement, witness))
}

/// `V = H^k ⊥ V_a ⊥ V_null`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    pub witt_index: usize,
    pub anisotropic_part: DiagonalForm,
    pub null_dim: usize,
    /// Source: `k` hyperbolic blocks, then the anisotropic part, then zeros.
    /// Over `F_p` and `Q` each block is exactly `<1, -1>`. Over `R` a block
    /// is `<p, -n>` with `p, n > 0`, normalized to `<1, -1>` by the real
    /// scaling recorded in `real_scaling`.
    pub witness: IsometryWitness,
    /// Over `R`: for each hyperbolic coordinate, the positive `c` such that
    /// dividing that basis vector by `sqrt(c)` yields `<1, -1>`.
    pub real_scaling: Option<Vec<Scalar>>,
}

impl WittDecomposition {
    pub fn verify(&self) -> bool {
        if !self.witness.verify() {
            return false;
        }
        let k = self.witt_index;
        let src = &self.witness.source;
        let ctx = src.ctx();
        let expected_dim = 2 * k + self.anisotropic_part.dim() + self.null_dim;
        if src.dim() != expected_dim || !src.is_diagonal() {
            return false;
        }
        let d = src.diagonal_entries();
        let blocks_ok = match ctx {
            FieldCtx::RealQ => (0..k).all(|i| d[2 * i].signum() == 1 && d[2 * i + 1].signum() == -1),
            _ => (0..k).all(|i| d[2 * i] == ctx.one() && d[2 * i + 1] == ctx.int(-1)),
        };
        blocks_ok
            && d[2 * k..2 * k + self.anisotropic_part.dim()] == *self.anisotropic_part.entries()
            && d[2 * k + self.anisotropic_part.dim()..].iter().all(Scalar::is_zero)
            && !is_isotropic(&self.anisotropic_part.to_gram()).unwrap_or(true)
    }
}

/// Diagonal entries together with the basis vectors (columns, in the
/// original coordinates) realizing them.
struct DiagonalFrame {
    entries: Vec<Scalar>,
    columns: Vec<Vec<Scalar>>,
}

impl DiagonalFrame {
    /// Rescale columns so that entries become canonical square-class
    /// representatives (over `Q` and `F_p`).
    fn normalize(&mut self, ctx: FieldCtx) {
        if ctx == FieldCtx::RealQ {
            return;
        }
        for (a, col) in self.entries.iter_mut().zip(self.columns.iter_mut()) {
            let rep = ctx.square_class(a).expect("nonzero").rep().clone();
            let r = ctx.sqrt(&(&*a / &rep)).expect("same square class");
            let rinv = r.inv().expect("nonzero");
            for x in col.iter_mut() {
                *x = &*x * &rinv;
            }
            *a = rep;
        }
    }

    fn from_gram(g: &GramMatrix, basis: &[Vec<Scalar>], ctx: FieldCtx) -> Self {
        let (d, w) = g.diagonalize();
        let n0 = basis.first().map_or(0, Vec::len);
        let columns = (0..d.dim())
            .map(|j| {
                let c = w.matrix.column(j);
                (0..n0)
                    .map(|r| basis.iter().zip(&c).fold(ctx.zero(), |acc, (b, cj)| acc + &(&b[r] * cj)))
                    .collect()
            })
            .collect();
        let mut f = DiagonalFrame {
            entries: d.entries().to_vec(),
            columns,
        };
        f.normalize(ctx);
        f
    }
}

fn combine(basis: &[Vec<Scalar>], coeffs: &[Scalar], ctx: FieldCtx) -> Vec<Scalar> {
    let n0 = basis.first().map_or(0, Vec::len);
    (0..n0)
        .map(|r| basis.iter().zip(coeffs).fold(ctx.zero(), |acc, (b, c)| acc + &(&b[r] * c)))
        .collect()
}

/// Isotropic vector of the diagonal form `<entries>` in frame coordinates,
/// trying binary pairs before the general search.
fn frame_isotropic_vector(entries: &[Scalar], ctx: FieldCtx, budget: u64) -> Result<Option<Vec<Scalar>>> {
    let n = entries.len();
    for i in 0..n {
        for j in i + 1..n {
            let ratio = -(&entries[j] / &entries[i]);
            if let Some(r) = ctx.sqrt(&ratio) {
                let mut v = vec![ctx.zero(); n];
                v[i] = r;
                v[j] = ctx.one();
                return Ok(Some(v));
            }
        }
    }
    let g = GramMatrix::diagonal(ctx, entries);
    if !is_isotropic(&g)? {
        return Ok(None);
    }
    find_isotropic_vector(&g, budget).map(Some)
}

/// Diagonal frame over `Q` whose entries stay square-free integers built
/// from known primes. Splitting along an arbitrary isotropic vector can
/// leave complements with huge entries that are expensive to reduce, so
/// the rational decomposition only rotates binary subforms
/// `<a, b> -> <c, abc>` along represented values and cancels pairs `<c, -c>`.
struct RationalFrame {
    entries: Vec<BigInt>,
    columns: Vec<Vec<Scalar>>,
}

/// `(f, g)` with `a b = f g^2`, `f` square-free, for square-free `a`, `b`.
fn squarefree_product(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let g = a.gcd(b);
    ((a / &g) * (b / &g), g)
}

impl RationalFrame {
    fn from_frame(frame: DiagonalFrame) -> Self {
        let entries = frame
            .entries
            .iter()
            .map(|a| a.as_rational().expect("rational entry").to_integer())
            .collect();
        RationalFrame {
            entries,
            columns: frame.columns,
        }
    }

    fn into_frame(self) -> DiagonalFrame {
        DiagonalFrame {
            entries: self.entries.iter().map(|a| FieldCtx::Rationals.from_bigint(a)).collect(),
            columns: self.columns,
        }
    }

    fn mix(&self, i: usize, j: usize, x: &Scalar, y: &Scalar) -> Vec<Scalar> {
        self.columns[i].iter().zip(&self.columns[j]).map(|(p, q)| &(x * p) + &(y * q)).collect()
    }

    /// Replace `<a, b>` in slots `i, j` by `<c, abc>`; false if `<a, b>`
    /// does not represent `c`.
    fn rotate(&mut self, i: usize, j: usize, c: &BigInt) -> bool {
        let ctx = FieldCtx::Rationals;
        let (a, b) = (self.entries[i].clone(), self.entries[j].clone());
        let (x, y, z) = if a == -&b {
            // a (x^2 - y^2) = c with x = (c + a) / 2a, y = (c - a) / 2a
            let two_a = ctx.from_bigint(&(&a * 2));
            let x = &ctx.from_bigint(&(c + &a)) / &two_a;
            let y = &ctx.from_bigint(&(c - &a)) / &two_a;
            (x, y, ctx.one())
        } else {
            match solve_ternary(&a, &b, &-c) {
                Some([x, y, z]) if !z.is_zero() => (ctx.from_bigint(&x), ctx.from_bigint(&y), ctx.from_bigint(&z)),
                _ => return false,
            }
        };
        // q(x e_i + y e_j) = c z^2 and q(-b y e_i + a x e_j) = abc z^2
        let (ab, g1) = squarefree_product(&a, &b);
        let (abc, g2) = squarefree_product(&ab, c);
        let first = self.mix(i, j, &(&x / &z), &(&y / &z));
        let scale = &z * &ctx.from_bigint(&(&g1 * &g2));
        let second = self.mix(
            i,
            j,
            &(&(-&(&ctx.from_bigint(&b) * &y)) / &scale),
            &(&(&ctx.from_bigint(&a) * &x) / &scale),
        );
        self.columns[i] = first;
        self.columns[j] = second;
        self.entries[i] = c.clone();
        self.entries[j] = abc;
        true
    }

    /// Arrange that one of the slots `idx` holds `t`, assuming the subform
    /// on `idx` represents `t`; returns that slot.
    fn represent(&mut self, idx: &[usize], t: &BigInt, budget: u64) -> Result<usize> {
        if let Some(&k) = idx.iter().find(|&&k| self.entries[k] == *t) {
            return Ok(k);
        }
        match idx.len() {
            0 | 1 => Err(Error::NotIsotropic),
            2 => {
                if self.rotate(idx[0], idx[1], t) {
                    Ok(idx[0])
                } else {
                    Err(Error::NotIsotropic)
                }
            }
            _ => {
                // <a, b> represents c and <c> ⊥ rest represents t
                let a = self.entries[idx[0]].clone();
                let b = self.entries[idx[1]].clone();
                let rest: Vec<BigInt> = idx[2..].iter().map(|&k| self.entries[k].clone()).collect();
                let mut second = rest.clone();
                second.push(-t);
                let known = [a.clone(), b.clone(), t.clone()];
                let c = local::auxiliary_value(&known, &[vec![-&a, -&b], second], budget, locally_isotropic)?;
                if !self.rotate(idx[0], idx[1], &c) {
                    return Err(Error::NotIsotropic);
                }
                let mut next = vec![idx[0]];
                next.extend_from_slice(&idx[2..]);
                self.represent(&next, t, budget)
            }
        }
    }

    /// Move every pair `<c, -c>` into `hyperbolic` as a `<1, -1>` basis.
    fn cancel_pairs(&mut self, hyperbolic: &mut Vec<Vec<Scalar>>, trace: &mut Vec<String>) {
        let ctx = FieldCtx::Rationals;
        'outer: loop {
            for i in 0..self.entries.len() {
                for j in i + 1..self.entries.len() {
                    if self.entries[i] != -&self.entries[j] {
                        continue;
                    }
                    let c = ctx.from_bigint(&self.entries[i]);
                    let two_c = &c * &ctx.int(2);
                    let p = &(&c + &ctx.one()) / &two_c;
                    let m = &(&c - &ctx.one()) / &two_c;
                    hyperbolic.push(self.mix(i, j, &p, &m));
                    hyperbolic.push(self.mix(i, j, &m, &p));
                    trace.push(format!("cancel <{c}, {}>", -&c));
                    for k in [j, i] {
                        self.entries.remove(k);
                        self.columns.remove(k);
                    }
                    continue 'outer;
                }
            }
            return;
        }
    }

    /// `col_0 + col_k` once slot `k` holds `-s_0`; assumes the form is isotropic.
    fn isotropic_vector(&mut self, budget: u64) -> Result<Vec<Scalar>> {
        let t = -&self.entries[0];
        let rest: Vec<usize> = (1..self.entries.len()).collect();
        let k = self.represent(&rest, &t, budget)?;
        Ok(self.columns[0].iter().zip(&self.columns[k]).map(|(a, b)| a + b).collect())
    }

    fn reduce(&mut self, hyperbolic: &mut Vec<Vec<Scalar>>, trace: &mut Vec<String>, budget: u64) -> Result<()> {
        loop {
            self.cancel_pairs(hyperbolic, trace);
            let n = self.entries.len();
            if n < 3 || !rational_diagonal_isotropic(&self.entries) {
                return Ok(());
            }
            // <s_0> ⊥ rest is isotropic iff rest represents -s_0
            let t = -&self.entries[0];
            let rest: Vec<usize> = (1..n).collect();
            self.represent(&rest, &t, budget)?;
        }
    }
}

pub fn witt_decompose(q: &GramMatrix, budget: u64) -> Result<WittDecomposition> {
    let ctx = q.ctx();
    let n = q.dim();
    let (nondeg, null_dim, w0) = q.radical_split();
    let m = nondeg.dim();
    let mut trace = w0.trace.clone();
    if null_dim > 0 {
        trace.push(format!("radical of dimension {null_dim} split off"));
    }
    let columns: Vec<Vec<Scalar>> = (0..n).map(|j| w0.matrix.column(j)).collect();
    let null_columns = columns[m..].to_vec();
    let mut frame = DiagonalFrame {
        entries: nondeg.diagonal_entries(),
        columns: columns[..m].to_vec(),
    };
    frame.normalize(ctx);

    let mut hyperbolic: Vec<Vec<Scalar>> = Vec::new();
    let mut real_scaling = None;

    if ctx == FieldCtx::RealQ {
        let pos: Vec<usize> = (0..m).filter(|&i| frame.entries[i].signum() > 0).collect();
        let neg: Vec<usize> = (0..m).filter(|&i| frame.entries[i].signum() < 0).collect();
        let k = pos.len().min(neg.len());
        let mut scaling = Vec::new();
        for (&p, &q_) in pos.iter().zip(&neg).take(k) {
            hyperbolic.push(frame.columns[p].clone());
            hyperbolic.push(frame.columns[q_].clone());
            scaling.push(frame.entries[p].clone());
            scaling.push(-&frame.entries[q_]);
        }
        let rest: Vec<usize> = pos[k..].iter().chain(&neg[k..]).copied().collect();
        frame = DiagonalFrame {
            entries: rest.iter().map(|&i| frame.entries[i].clone()).collect(),
            columns: rest.iter().map(|&i| frame.columns[i].clone()).collect(),
        };
        trace.push(format!("pair {k} positive with {k} negative entries"));
        real_scaling = Some(scaling);
    } else if ctx == FieldCtx::Rationals {
        let mut rf = RationalFrame::from_frame(frame);
        if let Err(e) = rf.reduce(&mut hyperbolic, &mut trace, budget) {
            return Err(match e {
                Error::SearchBudgetExceeded { bound, trace: t } => {
                    trace.extend(t);
                    trace.push(format!("{} hyperbolic planes split before the search failed", hyperbolic.len() / 2));
                    Error::SearchBudgetExceeded { bound, trace }
                }
                e => e,
            });
        }
        frame = rf.into_frame();
    } else {
        loop {
            let dim = frame.entries.len();
            if dim < 2 {
                break;
            }
            let v = match frame_isotropic_vector(&frame.entries, ctx, budget) {
                Ok(Some(v)) => v,
                Ok(None) => break,
                Err(Error::SearchBudgetExceeded { bound, trace: t }) => {
                    trace.extend(t);
                    trace.push(format!("{} hyperbolic planes split before the search failed", hyperbolic.len() / 2));
                    return Err(Error::SearchBudgetExceeded { bound, trace });
                }
                Err(e) => return Err(e),
            };
            let g = GramMatrix::diagonal(ctx, &frame.entries);
            let (complement, w) = split_hyperbolic(&g, &v)?;
            trace.extend(w.trace.iter().cloned());
            let new_cols: Vec<Vec<Scalar>> = (0..dim)
                .map(|j| combine(&frame.columns, &w.matrix.column(j), ctx))
                .collect();
            hyperbolic.push(new_cols[0].clone());
            hyperbolic.push(new_cols[1].clone());
            frame = DiagonalFrame::from_gram(&complement, &new_cols[2..], ctx);
        }
    }

    let k = hyperbolic.len() / 2;
    let anisotropic_part = DiagonalForm::new(ctx, frame.entries.clone());
    let mut all_cols = hyperbolic;
    all_cols.extend(frame.columns);
    all_cols.extend(null_columns);
    let matrix = Matrix::from_columns(ctx, n, &all_cols);
    let source = q.apply_congruence(&matrix)?;
    trace.push(format!("Witt index {k}, anisotropic part {anisotropic_part}"));
    let witness = IsometryWitness {
        matrix,
        source,
        target: q.clone(),
        trace,
    };
    let dec = WittDecomposition {
        witt_index: k,
        anisotropic_part,
        null_dim,
        witness,
        real_scaling,
    };
    debug_assert!(dec.verify());
    Ok(dec)
}

/// Exact integer value of a residue or integral rational, for diagnostics.
#[allow(dead_code)]
fn to_i64(x: &Scalar) -> Option<i64> {
    match x {
        Scalar::Rational(r) if r.is_integer() => r.to_integer().to_i64(),
        Scalar::Residue(r) => i64::try_from(r.value()).ok(),
        _ => None,
    }
}
