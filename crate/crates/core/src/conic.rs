//! Integer zeros of diagonal ternary forms `a x^2 + b y^2 + c z^2`.
//!
//! The main route needs square roots modulo the coefficients only. After
//! making the coefficients square-free and pairwise coprime, the congruences
//! `x = u y (mod c)`, `y = v z (mod a)`, `z = w x (mod b)` cut out a lattice
//! of index `|abc|` on which the form vanishes modulo `abc`. Its reduced
//! basis, taken with respect to `|a| x^2 + |b| y^2 + |c| z^2`, contains a
//! zero among small combinations. Lagrange's descent is the fallback; it
//! factors fresh intermediate values and gets slow on large inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;

/// Nontrivial primitive integer zero of `a x^2 + b y^2 + c z^2` (nonzero
/// integer coefficients), or `None` if there is none.
pub(crate) fn solve_ternary(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<[BigInt; 3]> {
    let out = lattice_ternary(a, b, c).or_else(|| descent_ternary(a, b, c))?;
    debug_assert!(value(&[a, b, c], &out).is_zero());
    Some(out)
}

fn value(coef: &[&BigInt; 3], x: &[BigInt; 3]) -> BigInt {
    coef.iter().zip(x).map(|(c, x)| *c * x * x).sum()
}

fn primitive(v: [BigInt; 3]) -> [BigInt; 3] {
    let g = arith::gcd_all(v.iter());
    if g.is_zero() {
        return v;
    }
    v.map(|x| x / &g)
}

/// `(f, k)` with `n = f k^2` and `f` square-free.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let f = arith::squarefree_part(n);
    let k = arith::exact_sqrt((n / &f).magnitude()).expect("quotient by the square-free part is a square");
    (f, BigInt::from(k))
}

fn lattice_ternary(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<[BigInt; 3]> {
    let split = [split_square(a), split_square(b), split_square(c)];
    // a x^2 = f_a (k_a x)^2, so a zero X of <f> gives x_i = X_i / k_i
    let mut coef = [split[0].0.clone(), split[1].0.clone(), split[2].0.clone()];
    // a zero X of the current coefficients gives (X_i * scale_i) for the square-free ones
    let mut scale = [BigInt::one(), BigInt::one(), BigInt::one()];
    loop {
        let g = coef[0].gcd(&coef[1]).gcd(&coef[2]);
        if !g.is_one() {
            coef = coef.map(|x| x / &g);
            continue;
        }
        // p a' x^2 + p b' y^2 + c z^2 = 0  <=>  a' (px)^2 + b' (py)^2 + pc z^2 = 0
        let pair = [(0, 1, 2), (1, 2, 0), (0, 2, 1)]
            .into_iter()
            .find(|&(i, j, _)| !coef[i].gcd(&coef[j]).is_one());
        match pair {
            Some((i, j, k)) => {
                let g = coef[i].gcd(&coef[j]);
                coef[i] = &coef[i] / &g;
                coef[j] = &coef[j] / &g;
                coef[k] = &coef[k] * &g;
                scale[k] = &scale[k] * &g;
            }
            None => break,
        }
    }
    let zero = coprime_ternary(&coef)?;
    let x: Vec<BigRational> = (0..3)
        .map(|i| BigRational::new(&zero[i] * &scale[i], split[i].1.clone()))
        .collect();
    let l = arith::lcm_all(x.iter().map(|r| r.denom()));
    let ints = [0, 1, 2].map(|i| (&x[i] * BigRational::from_integer(l.clone())).to_integer());
    let out = primitive(ints);
    value(&[a, b, c], &out).is_zero().then_some(out)
}

/// Zero of `<p, q, r>` with square-free, pairwise coprime coefficients.
fn coprime_ternary(coef: &[BigInt; 3]) -> Option<[BigInt; 3]> {
    let [p, q, r] = coef;
    // u^2 = -q / p (mod r), v^2 = -r / q (mod p), w^2 = -p / r (mod q)
    let root = |num: &BigInt, den: &BigInt, m: &BigInt| -> Option<BigInt> {
        let m = m.abs();
        if m.is_one() {
            return Some(BigInt::zero());
        }
        let inv = den.mod_floor(&m).extended_gcd(&m).x;
        arith::sqrt_mod_squarefree(&(-num * inv).mod_floor(&m), &m)
    };
    let u = root(q, p, r)?;
    let v = root(r, q, p)?;
    let w = root(p, r, q)?;
    let (ap, aq, ar) = (p.abs(), q.abs(), r.abs());
    let modulus = &ap * &aq * &ar;
    // idempotent for modulus m inside the product
    let idem = |m: &BigInt| -> BigInt {
        if m.is_one() {
            return BigInt::zero();
        }
        let rest = &modulus / m;
        &rest * rest.mod_floor(m).extended_gcd(m).x.mod_floor(m)
    };
    let (er, ep, eq) = (idem(&ar), idem(&ap), idem(&aq));
    // x - u y = 0 (mod r), y - v z = 0 (mod p), z - w x = 0 (mod q)
    let form = [
        (&er - &eq * &w).mod_floor(&modulus),
        (&ep - &er * &u).mod_floor(&modulus),
        (&eq - &ep * &v).mod_floor(&modulus),
    ];
    let basis = kernel_basis(&form, &modulus);
    let weights = [ap, aq, ar];
    let reduced = lll(basis, &weights);
    small_zero(&reduced, coef)
}

/// Basis of `{x in Z^3 : f . x = 0 (mod m)}`.
fn kernel_basis(f: &[BigInt; 3], m: &BigInt) -> Vec<Vec<BigInt>> {
    // unimodular column operations bring f to (g, 0, 0)
    let mut f = f.clone();
    let mut u: Vec<Vec<BigInt>> = (0..3)
        .map(|i| (0..3).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    for j in 1..3 {
        if f[j].is_zero() {
            continue;
        }
        let e = f[0].extended_gcd(&f[j]);
        let (g, x, y) = (e.gcd, e.x, e.y);
        let (s, t) = (&f[j] / &g, &f[0] / &g);
        let c0 = u[0].clone();
        let cj = u[j].clone();
        u[0] = c0.iter().zip(&cj).map(|(a, b)| &x * a + &y * b).collect();
        u[j] = c0.iter().zip(&cj).map(|(a, b)| &s * a - &t * b).collect();
        f[0] = g;
        f[j] = BigInt::zero();
    }
    let step = m / f[0].gcd(m);
    u[0] = u[0].iter().map(|a| a * &step).collect();
    u
}

/// LLL reduction (`delta = 3/4`) of the rows of `basis` for the inner
/// product `sum w_i x_i y_i` with positive weights.
pub(crate) fn lll(mut basis: Vec<Vec<BigInt>>, weights: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    let dot = |x: &[BigInt], y: &[BigInt]| -> BigRational {
        BigRational::from_integer(x.iter().zip(y).zip(weights).map(|((a, b), w)| a * b * w).sum())
    };
    let gram_schmidt = |b: &[Vec<BigInt>]| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut star: Vec<Vec<BigRational>> = Vec::new();
        let mut norms = Vec::new();
        for i in 0..n {
            let bi: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let mut v = bi.clone();
            for j in 0..i {
                let num: BigRational = bi.iter().zip(&star[j]).zip(weights).map(|((a, s), w)| a * s * BigRational::from_integer(w.clone())).sum();
                mu[i][j] = &num / &norms[j];
                v = v.iter().zip(&star[j]).map(|(a, s)| a - &mu[i][j] * s).collect();
            }
            let norm: BigRational = v.iter().zip(weights).map(|(a, w)| a * a * BigRational::from_integer(w.clone())).sum();
            star.push(v);
            norms.push(norm);
        }
        (mu, norms)
    };
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&basis);
            let q = round(&mu[k][j]);
            if !q.is_zero() {
                let bj = basis[j].clone();
                basis[k] = basis[k].iter().zip(&bj).map(|(a, b)| a - &q * b).collect();
            }
        }
        let (mu, norms) = gram_schmidt(&basis);
        let lovasz = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if norms[k] >= lovasz {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    debug_assert!(basis.iter().all(|b| dot(b, b).is_positive()));
    basis
}

fn round(r: &BigRational) -> BigInt {
    (r + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Zero of the form among combinations of the reduced basis with
/// coefficients in `-2..=2`, shortest first.
fn small_zero(basis: &[Vec<BigInt>], coef: &[BigInt; 3]) -> Option<[BigInt; 3]> {
    let mut best: Option<(BigInt, [BigInt; 3])> = None;
    for i in -2i64..=2 {
        for j in -2i64..=2 {
            for k in -2i64..=2 {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                let x = [0, 1, 2].map(|t| &basis[0][t] * i + &basis[1][t] * j + &basis[2][t] * k);
                if x.iter().all(Zero::is_zero) || !value(&[&coef[0], &coef[1], &coef[2]], &x).is_zero() {
                    continue;
                }
                let size: BigInt = x.iter().zip(coef).map(|(a, c)| a * a * c.abs()).sum();
                if best.as_ref().is_none_or(|(s, _)| size < *s) {
                    best = Some((size, x));
                }
            }
        }
    }
    best.map(|(_, x)| primitive(x))
}

/// Nontrivial integer solution of `z^2 = a x^2 + b y^2` for square-free
/// nonzero `a`, `b`, by Lagrange's descent. `None` if there is none.
fn norm_descent(a: &BigInt, b: &BigInt, depth: u32) -> Option<(BigInt, BigInt, BigInt)> {
    if depth > 10_000 {
        return None;
    }
    let one = BigInt::one();
    let zero = BigInt::zero();
    if a.is_one() {
        return Some((one.clone(), zero, one));
    }
    if b.is_one() {
        return Some((zero, one.clone(), one));
    }
    if *a == -b {
        return Some((one.clone(), one, zero));
    }
    if a.abs() > b.abs() {
        let (x, y, z) = norm_descent(b, a, depth + 1)?;
        return Some((y, x, z));
    }
    if b.abs().is_one() {
        return None;
    }
    let t = arith::sqrt_mod_squarefree(a, b)?;
    let m = (&t * &t - a) / b;
    if m.is_zero() {
        return None;
    }
    let b2 = arith::squarefree_part(&m);
    let k = arith::exact_sqrt((&m / &b2).magnitude()).map(BigInt::from)?;
    let (x1, y1, z1) = norm_descent(a, &b2, depth + 1)?;
    // (z1 + x1 sqrt a)(t + sqrt a) has norm b * (b2 y1 k)^2
    let z = &z1 * &t + a * &x1;
    let x = &z1 + &x1 * &t;
    let y = &b2 * &y1 * &k;
    Some((x, y, z))
}

fn descent_ternary(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<[BigInt; 3]> {
    // -c (a x^2 + b y^2 + c z^2) = 0  <=>  A (alpha x)^2 + B (beta y)^2 = (c z)^2
    let (big_a, alpha) = split_square(&-(a * c));
    let (big_b, beta) = split_square(&-(b * c));
    let (xx, yy, zz) = norm_descent(&big_a, &big_b, 0)?;
    let sol = [
        BigRational::new(xx, alpha),
        BigRational::new(yy, beta),
        BigRational::new(zz, c.clone()),
    ];
    let l = arith::lcm_all(sol.iter().map(|x| x.denom()));
    Some(primitive(sol.map(|x| (x * BigRational::from_integer(l.clone())).to_integer())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Smallest zero by exhaustive search, for cross-checking solvability.
    fn brute(a: i64, b: i64, c: i64, h: i64) -> bool {
        (-h..=h).any(|x| (-h..=h).any(|y| (0..=h).any(|z| (x, y, z) != (0, 0, 0) && a * x * x + b * y * y + c * z * z == 0)))
    }

    #[test]
    fn both_routes_solve_small_ternaries() {
        for a in [-7i64, -3, -2, -1, 1, 2, 5, 6] {
            for b in [-5i64, -1, 1, 3, 10] {
                for c in [-15i64, -6, -1, 2, 7] {
                    let coef = [bi(a), bi(b), bi(c)];
                    let solvable = brute(a, b, c, 30);
                    for route in [lattice_ternary(&coef[0], &coef[1], &coef[2]), descent_ternary(&coef[0], &coef[1], &coef[2])] {
                        if let Some(x) = &route {
                            assert!(value(&[&coef[0], &coef[1], &coef[2]], x).is_zero());
                            assert!(x.iter().any(|t| !t.is_zero()));
                        }
                    }
                    assert_eq!(lattice_ternary(&coef[0], &coef[1], &coef[2]).is_some(), solvable, "<{a}, {b}, {c}>");
                    assert_eq!(solve_ternary(&coef[0], &coef[1], &coef[2]).is_some(), solvable, "<{a}, {b}, {c}>");
                }
            }
        }
    }

    #[test]
    fn lattice_route_handles_shared_factors_and_squares() {
        // 12 = 3 * 2^2 and 18 = 2 * 3^2 share factors with -30
        let x = lattice_ternary(&bi(12), &bi(18), &bi(-30)).expect("solvable");
        assert!(value(&[&bi(12), &bi(18), &bi(-30)], &x).is_zero());
    }

    #[test]
    fn large_coefficients_stay_small() {
        let a = bi(1_000_003) * bi(1_000_033);
        let b = bi(-999_983);
        // choose c so that (1, 1, 1) is a zero
        let c = -(&a + &b);
        let x = solve_ternary(&a, &b, &c).expect("solvable");
        assert!(value(&[&a, &b, &c], &x).is_zero());
        let height = x.iter().map(|t| t.abs()).max().unwrap();
        assert!(height < bi(10_000_000_000_000), "height {height}");
    }

    #[test]
    fn kernel_basis_spans_the_kernel() {
        let f = [bi(3), bi(10), bi(4)];
        let m = bi(30);
        let basis = kernel_basis(&f, &m);
        for v in &basis {
            let s: BigInt = v.iter().zip(&f).map(|(a, b)| a * b).sum();
            assert!(s.mod_floor(&m).is_zero());
        }
        // index of the kernel equals m / gcd(f, m) = 30
        let det = &basis[0][0] * (&basis[1][1] * &basis[2][2] - &basis[1][2] * &basis[2][1])
            - &basis[0][1] * (&basis[1][0] * &basis[2][2] - &basis[1][2] * &basis[2][0])
            + &basis[0][2] * (&basis[1][0] * &basis[2][1] - &basis[1][1] * &basis[2][0]);
        assert_eq!(det.abs(), bi(30));
    }

    #[test]
    fn lll_shortens_a_skewed_basis() {
        let basis = vec![vec![bi(1), bi(0), bi(0)], vec![bi(1000), bi(1), bi(0)], vec![bi(7331), bi(999), bi(1)]];
        let w = [bi(1), bi(1), bi(1)];
        let r = lll(basis, &w);
        for v in &r {
            assert!(v.iter().all(|x| x.abs() <= bi(1)), "{v:?}");
        }
    }
}
