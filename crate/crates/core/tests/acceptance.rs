//! Acceptance run: one PASS/FAIL line per criterion. Every check recomputes
//! its verdict from raw matrices or brute force instead of trusting the
//! library's own verification helpers.

use std::time::{Duration, Instant};

use witt_core::cancellation::homotopy_check;
use witt_core::field::{hilbert_symbol, FieldCtx, Place, Scalar};
use witt_core::form::{DiagonalForm, GramMatrix};
use witt_core::gen::{self, CancellationInstance};
use witt_core::isotropy::{witt_decompose, DEFAULT_BUDGET};
use witt_core::matrix::Matrix;
use witt_core::milnor::{triangle_check, PfisterConvention};
use witt_core::witt::{e0, e1, e2_form, enumerate_witt_ring, is_similar, pfister, wadd, witt_class, WittRingTable};
use witt_core::{cancel_first_algebraic, cancel_first_geometric};

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, elapsed: Duration, o: &Outcome) -> bool {
    println!(
        "[{}] criterion {id}: {name}: {} ({:.2} s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64()
    );
    o.pass
}

fn fp(p: u64) -> FieldCtx {
    FieldCtx::prime_field(p).unwrap()
}

/// `M^t B M`, written out entrywise.
fn congruence(b: &Matrix, m: &Matrix) -> Matrix {
    let n = m.cols();
    let ctx = m.ctx();
    let mut out = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = ctx.zero();
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    s = s + &(&(m.get(k, i) * b.get(k, l)) * m.get(l, j));
                }
            }
            out.set(i, j, s);
        }
    }
    out
}

/// Laplace expansion; independent of the elimination in the library.
fn det_laplace(m: &Matrix) -> Scalar {
    let n = m.rows();
    let ctx = m.ctx();
    if n == 0 {
        return ctx.one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut total = ctx.zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = m.submatrix(1, n, 0, n).select_columns(&cols);
        let term = m.get(0, j) * &det_laplace(&minor);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

fn tail(d: &DiagonalForm) -> Matrix {
    Matrix::diagonal(d.ctx(), &d.entries()[1..])
}

const CANCEL_FIELDS: [Option<u64>; 5] = [Some(3), Some(5), Some(7), Some(13), None];

fn cancellation_instances() -> Vec<CancellationInstance> {
    let mut rng = gen::seeded(20_240_601);
    (0..1000)
        .map(|i| {
            let ctx = match CANCEL_FIELDS[i % 5] {
                Some(p) => fp(p),
                None => FieldCtx::Rationals,
            };
            let n = 2 + (i / 5) % 5;
            gen::random_cancellation_instance(&mut rng, ctx, n)
        })
        .collect()
}

fn criterion_1(instances: &[CancellationInstance]) -> Outcome {
    let mut failures = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let a_tail = tail(&inst.a);
        let b_tail = tail(&inst.b);
        for (route, res) in [
            ("algebraic", cancel_first_algebraic(&inst.a, &inst.b, &inst.m)),
            ("geometric", cancel_first_geometric(&inst.a, &inst.b, &inst.m)),
        ] {
            match res {
                Ok(r) => {
                    let ok = congruence(&b_tail, &r.n_matrix) == a_tail && !det_laplace(&r.n_matrix).is_zero();
                    if !ok {
                        failures.push(format!("#{i} {route}: bad N"));
                    }
                }
                Err(e) => failures.push(format!("#{i} {route}: {e}")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} instances x 2 routes, {} failures{}",
            instances.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    }
}

fn criterion_2(instances: &[CancellationInstance]) -> Outcome {
    let mut failures = Vec::new();
    let mut flips = 0;
    for (i, inst) in instances.iter().enumerate() {
        let ctx = inst.m.ctx();
        // recompute the preprocessed M and u = e1 - f1 by hand
        let mut m = inst.m.clone();
        let flip = m.get(0, 0).is_one();
        if flip {
            flips += 1;
            for k in 0..m.cols() {
                let v = -m.get(0, k);
                m.set(0, k, v);
            }
        }
        let b = inst.b.entries();
        let mut u = m.column(0);
        u[0] = &u[0] - &ctx.one();
        let q_u = u.iter().zip(b).fold(ctx.zero(), |acc, (x, bi)| acc + &(&(x * x) * bi));
        let expected = &(&ctx.int(2) * &b[0]) * &(&ctx.one() - m.get(0, 0));
        match (
            homotopy_check(&inst.a, &inst.b, &inst.m),
            cancel_first_algebraic(&inst.a, &inst.b, &inst.m),
            cancel_first_geometric(&inst.a, &inst.b, &inst.m),
        ) {
            (Ok(h), Ok(alg), Ok(geo)) => {
                let ok = h.entries_equal
                    && h.reflection_coefficients == h.substitution_coefficients
                    && alg.n_matrix == geo.n_matrix
                    && h.sign_flip_applied == flip
                    && q_u == expected
                    && h.q_u == q_u;
                if !ok {
                    failures.push(i);
                }
            }
            _ => failures.push(i),
        }
    }
    Outcome {
        pass: failures.is_empty() && flips > 0,
        detail: format!(
            "{} instances, {} with m11 = 1 preprocessing, {} mismatches",
            instances.len(),
            flips,
            failures.len()
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = gen::seeded(3);
    let fields = [FieldCtx::Rationals, FieldCtx::RealQ, fp(3), fp(5), fp(7), fp(13)];
    let mut failures = 0;
    let mut total = 0;
    for ctx in fields {
        for i in 0..500 {
            let n = 1 + i % 6;
            let q = gen::random_symmetric(&mut rng, ctx, n);
            let (d, w) = q.diagonalize();
            total += 1;
            let ok = congruence(q.matrix(), &w.matrix) == Matrix::diagonal(ctx, d.entries())
                && !det_laplace(&w.matrix).is_zero()
                && w.target == q;
            if !ok {
                failures += 1;
            }
        }
    }
    let r = FieldCtx::RealQ;
    let ellipse = GramMatrix::from_rows(r, vec![vec![r.int(5), r.int(-1)], vec![r.int(-1), r.int(5)]]).unwrap();
    let (d, _) = ellipse.diagonalize();
    let profile: Vec<i8> = d.entries().iter().map(Scalar::signum).collect();
    let reference: Vec<i8> = DiagonalForm::from_ints(r, &[4, 6]).entries().iter().map(Scalar::signum).collect();
    let m = Matrix::from_rows(r, vec![vec![r.int(1), r.int(-1)], vec![r.int(1), r.int(1)]]).unwrap();
    let rotated = congruence(ellipse.matrix(), &m) == Matrix::diagonal(r, &[r.int(8), r.int(12)]);
    Outcome {
        pass: failures == 0 && profile == vec![1, 1] && profile == reference && rotated,
        detail: format!(
            "{total} matrices over 6 fields, {failures} bad witnesses; [[5,-1],[-1,5]] over R diagonalizes to {d}, profile {profile:?}"
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = gen::seeded(4);
    let fields = [FieldCtx::Rationals, FieldCtx::RealQ, fp(3), fp(5), fp(7), fp(13)];
    let mut failures = Vec::new();
    for i in 0..300 {
        let ctx = fields[i % fields.len()];
        let n = 2 + i % 4;
        let q = gen::random_nondegenerate(&mut rng, ctx, n);
        let m = gen::random_invertible(&mut rng, ctx, n);
        let qm = GramMatrix::new(congruence(q.matrix(), &m)).unwrap();
        match (witt_decompose(&q, DEFAULT_BUDGET), witt_decompose(&qm, DEFAULT_BUDGET)) {
            (Ok(d1), Ok(d2)) => {
                let same_aniso = is_similar(&d1.anisotropic_part.to_gram(), &d2.anisotropic_part.to_gram()).unwrap_or(false);
                let ok = d1.witt_index == d2.witt_index
                    && d1.anisotropic_part.dim() == d2.anisotropic_part.dim()
                    && same_aniso
                    && d1.verify()
                    && d2.verify();
                if !ok {
                    failures.push(format!("#{i} over {ctx}"));
                }
            }
            (a, b) => failures.push(format!("#{i}: {:?} {:?}", a.err(), b.err())),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "300 (q, M) pairs, {} disagreements{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    }
}

fn ring_axioms(t: &WittRingTable) -> bool {
    let n = t.elements.len();
    let add = |i: usize, j: usize| t.add[i][j].expect("closed");
    let mul = |i: usize, j: usize| t.mul[i][j].expect("closed");
    let zero = t.elements.iter().position(|e| e.is_zero()).expect("zero");
    let one = t.elements.iter().position(|e| e.representative().entries() == [t.ctx.one()]).expect("one");
    let closed = t.add.iter().chain(&t.mul).all(|r| r.iter().all(Option::is_some));
    closed
        && (0..n).all(|a| {
            add(a, zero) == a
                && mul(a, one) == a
                && (0..n).any(|b| add(a, b) == zero)
                && (0..n).all(|b| {
                    add(a, b) == add(b, a)
                        && mul(a, b) == mul(b, a)
                        && (0..n).all(|c| {
                            add(add(a, b), c) == add(a, add(b, c))
                                && mul(mul(a, b), c) == mul(a, mul(b, c))
                                && mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
                        })
                })
        })
}

/// Anisotropic forms over `F_p` up to isometry, by brute force: an `n`-ary
/// diagonal form is anisotropic iff no nonzero vector in `F_p^n` is a zero,
/// and isometry of forms of equal dimension is decided by the determinant
/// square class, read off by Euler's criterion.
fn brute_force_witt_order(p: u64) -> usize {
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let is_square = |x: u64| pow(x, (p - 1) / 2) == 1;
    let anisotropic = |coef: &[u64]| {
        let n = coef.len();
        let total = p.pow(n as u32);
        (1..total).all(|mut idx| {
            let mut s = 0;
            for c in coef {
                let x = idx % p;
                idx /= p;
                s = (s + c * x % p * x) % p;
            }
            s != 0
        })
    };
    let mut classes = std::collections::BTreeSet::new();
    classes.insert((0usize, true));
    for a in 1..p {
        classes.insert((1, is_square(a)));
        for b in 1..p {
            if anisotropic(&[a, b]) {
                classes.insert((2, is_square(a * b % p)));
            }
        }
    }
    classes.len()
}

fn criterion_5() -> Outcome {
    let primes: Vec<u64> = (3..=50).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    let mut bad = Vec::new();
    for &p in &primes {
        let t = match enumerate_witt_ring(fp(p), None) {
            Ok(t) => t,
            Err(e) => {
                bad.push(format!("p={p}: {e}"));
                continue;
            }
        };
        let cyclic = t.is_cyclic_of_order_four();
        let ok = t.elements.len() == 4
            && brute_force_witt_order(p) == 4
            && cyclic == (p % 4 == 3)
            && ring_axioms(&t);
        if !ok {
            bad.push(format!("p={p}"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} primes 3..47, {} failures; Z/4 exactly for p = 3 mod 4",
            primes.len(),
            bad.len()
        ),
    }
}

fn random_rational<R: rand::Rng>(rng: &mut R) -> Scalar {
    loop {
        let n: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=12);
        if n != 0 {
            return FieldCtx::Rationals.ratio(n, d).unwrap();
        }
    }
}

fn primes_dividing(x: &Scalar) -> Vec<u64> {
    let r = x.as_rational().unwrap();
    let mut out = vec![2];
    for v in [r.numer(), r.denom()] {
        let mut m: u64 = v.magnitude().try_into().unwrap();
        let mut d = 2;
        while d * d <= m {
            while m.is_multiple_of(d) {
                out.push(d);
                m /= d;
            }
            d += 1;
        }
        if m > 1 {
            out.push(m);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // finite fields: exhaustive over pairs of ring elements
    for p in [3, 5, 7, 13] {
        let t = enumerate_witt_ring(fp(p), None).unwrap();
        for x in &t.elements {
            for y in &t.elements {
                let s = wadd(x, y).unwrap();
                pass &= e0(&s) == (e0(x) + e0(y)) % 2;
                if e0(x) == 0 && e0(y) == 0 {
                    let prod = fp(p).class_mul(&e1(x).unwrap(), &e1(y).unwrap());
                    pass &= e1(&s).unwrap() == prod;
                }
            }
        }
    }
    if !pass {
        notes.push("finite-field homomorphism failure".to_string());
    }

    // rationals: 200 random pairs
    let mut rng = gen::seeded(6);
    let q = FieldCtx::Rationals;
    let mut q_fail = 0;
    for i in 0..200 {
        let (n1, n2) = (1 + i % 4, 1 + (i / 4) % 4);
        let f1 = gen::random_diagonal(&mut rng, q, n1).to_gram();
        let f2 = gen::random_diagonal(&mut rng, q, n2).to_gram();
        let (x, y) = (witt_class(&f1).unwrap(), witt_class(&f2).unwrap());
        let s = wadd(&x, &y).unwrap();
        let mut ok = e0(&s) == (e0(&x) + e0(&y)) % 2;
        if n1 % 2 == 0 && n2 % 2 == 0 {
            ok &= e1(&s).unwrap() == q.class_mul(&e1(&x).unwrap(), &e1(&y).unwrap());
        }
        if !ok {
            q_fail += 1;
        }
    }
    pass &= q_fail == 0;
    notes.push(format!("200 Q pairs, {q_fail} failures"));

    // e2 of the Pfister form <<-1,-1>> over Q
    let m1 = q.int(-1);
    let pf = pfister(q, &[m1.clone(), m1]).unwrap().expanded.to_gram();
    let profile = e2_form(&pf).unwrap();
    let mut places = vec![Place::RealPlace];
    places.extend([2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].map(Place::prime));
    let signs: Vec<i8> = places.iter().map(|v| profile.at(v)).collect();
    let e2_ok = signs[0] == -1 && signs[1] == -1 && signs[2..].iter().all(|&s| s == 1)
        && profile.nontrivial_places().count() == 2;
    pass &= e2_ok;
    notes.push(format!("e2(pfister(-1,-1)) = {profile}"));

    // product formula
    let mut pf_fail = 0;
    for _ in 0..500 {
        let a = random_rational(&mut rng);
        let b = random_rational(&mut rng);
        let mut places = vec![Place::RealPlace];
        let mut ps = primes_dividing(&a);
        ps.extend(primes_dividing(&b));
        ps.sort();
        ps.dedup();
        places.extend(ps.into_iter().map(Place::prime));
        let prod: i32 = places.iter().map(|v| hilbert_symbol(&a, &b, v).unwrap() as i32).product();
        // a place outside the support must give 1
        let outside = hilbert_symbol(&a, &b, &Place::prime(1_000_003)).unwrap();
        if prod != 1 || outside != 1 {
            pf_fail += 1;
        }
    }
    pass &= pf_fail == 0;
    notes.push(format!("product formula on 500 pairs, {pf_fail} failures"));

    Outcome {
        pass,
        detail: notes.join("; "),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let fields = [fp(3), fp(5), fp(7), fp(11), fp(13), FieldCtx::RealQ];
    for ctx in fields {
        match triangle_check(ctx, 6, PfisterConvention::Standard) {
            Ok(r) => {
                let ok = r.degrees.iter().all(|d| d.dims_match() && d.nu_bijective && d.nu_well_defined);
                pass &= ok && r.degrees.len() == 7;
                let dims: Vec<String> = r.degrees.iter().map(|d| d.dim_k.to_string()).collect();
                notes.push(format!("{ctx}: ({}){}", dims.join(","), if ok { "" } else { " MISMATCH" }));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{ctx}: {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("standard convention, n <= 6; {}", notes.join(" ")),
    }
}

fn main() {
    let mut all = true;
    let t = Instant::now();
    let instances = cancellation_instances();
    let gen_time = t.elapsed();

    let t = Instant::now();
    let o = criterion_1(&instances);
    let e = t.elapsed() + gen_time;
    let o = Outcome {
        pass: o.pass && e < Duration::from_secs(30),
        detail: o.detail,
    };
    all &= report(1, "cancellation soundness", e, &o);

    let t = Instant::now();
    let o = criterion_2(&instances);
    all &= report(2, "homotopy between the two cancellations", t.elapsed(), &o);

    let t = Instant::now();
    let o = criterion_3();
    all &= report(3, "diagonalization", t.elapsed(), &o);

    let t = Instant::now();
    let o = criterion_4();
    all &= report(4, "Witt decomposition uniqueness", t.elapsed(), &o);

    let t = Instant::now();
    let o = criterion_5();
    let e = t.elapsed();
    let o = Outcome {
        pass: o.pass && e < Duration::from_secs(10),
        detail: o.detail,
    };
    all &= report(5, "Witt rings of finite fields", e, &o);

    let t = Instant::now();
    let o = criterion_6();
    all &= report(6, "invariants e0, e1, e2 and the product formula", t.elapsed(), &o);

    let t = Instant::now();
    let o = criterion_7();
    let e = t.elapsed();
    let o = Outcome {
        pass: o.pass && e < Duration::from_secs(60),
        detail: o.detail,
    };
    all &= report(7, "Milnor triangle", e, &o);

    if !all {
        std::process::exit(1);
    }
}
