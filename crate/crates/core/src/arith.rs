//! Integer number theory behind square classes and local symbols.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_odd_prime(p: u64) -> bool {
    p > 2 && num_prime::nt_funcs::is_prime64(p)
}

/// Prime factorization of `n`; empty for 0 and 1.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, usize> {
    if n.is_zero() || n.is_one() {
        return BTreeMap::new();
    }
    if let Some(small) = n.to_u64() {
        return num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    // the same large entries get factored over and over during searches
    type Memo = Mutex<HashMap<BigUint, BTreeMap<BigUint, usize>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(f) = memo.lock().expect("memo lock").get(n) {
        return f.clone();
    }
    let f = factor_with_known_primes(n);
    let mut guard = memo.lock().expect("memo lock");
    if guard.len() > 100_000 {
        guard.clear();
    }
    guard.insert(n.clone(), f.clone());
    f
}

/// Large primes met so far. Searches keep multiplying them together, and
/// dividing them out first leaves little or nothing for Pollard rho.
fn known_primes() -> &'static Mutex<BTreeSet<BigUint>> {
    static KNOWN: OnceLock<Mutex<BTreeSet<BigUint>>> = OnceLock::new();
    KNOWN.get_or_init(Default::default)
}

fn factor_with_known_primes(n: &BigUint) -> BTreeMap<BigUint, usize> {
    let primes: Vec<BigUint> = known_primes().lock().expect("prime lock").iter().cloned().collect();
    let mut rest = n.clone();
    let mut out = BTreeMap::new();
    for p in primes {
        while (&rest % &p).is_zero() {
            rest /= &p;
            *out.entry(p.clone()).or_insert(0) += 1;
        }
        if rest.is_one() {
            return out;
        }
    }
    let tail = match rest.to_u64() {
        Some(small) => factorize(&BigUint::from(small)),
        None => num_prime::nt_funcs::factorize(rest),
    };
    let mut known = known_primes().lock().expect("prime lock");
    if known.len() > 50_000 {
        known.clear();
    }
    for (p, e) in tail {
        if p.bits() > 16 {
            known.insert(p.clone());
        }
        *out.entry(p).or_insert(0) += e;
    }
    out
}

/// Square-free `f` with `n / d = f * r^2` for rational `r`. Numerator and
/// denominator are factored separately, which keeps the numbers small and
/// lets consecutive pivots share memoized factorizations.
pub fn squarefree_of_ratio(n: &BigInt, d: &BigInt) -> BigInt {
    let a = squarefree_part(n);
    let b = squarefree_part(d);
    let g = a.gcd(&b);
    (a / &g) * (b / &g)
}

/// Signed square-free part: `n = squarefree_part(n) * k^2`.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "square-free part of zero");
    let mut out = BigInt::one();
    for (p, e) in factorize(n.magnitude()) {
        if e % 2 == 1 {
            out *= BigInt::from(p);
        }
    }
    if n.sign() == Sign::Minus {
        -out
    } else {
        out
    }
}

/// `n = p^v * u` with `p` not dividing `u`. `n` must be nonzero.
pub fn valuation(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let p = BigInt::from(p.clone());
    let mut v = 0;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(&p);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

/// Euler's criterion: `a^((p-1)/2) mod p`, mapped to {-1, 0, 1}.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let r = a.mod_floor(&pi).to_biguint().expect("mod_floor is non-negative");
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod_prime(a: &BigUint, p: &BigUint) -> Option<BigUint> {
    let a = a % p;
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    if *p == BigUint::from(2u32) {
        return Some(a);
    }
    let one = BigUint::one();
    let pm1 = p - &one;
    if !a.modpow(&(&pm1 >> 1), p).is_one() {
        return None;
    }
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigUint::from(2u32);
    while z.modpow(&(&pm1 >> 1), p) != pm1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Some `t` with `t^2 = a (mod |m|)` for square-free `m`, reduced to `|t| <= |m|/2`.
pub fn sqrt_mod_squarefree(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let modulus = m.magnitude().clone();
    if modulus.is_one() {
        return Some(BigInt::zero());
    }
    let mut acc_r = BigUint::zero();
    let mut acc_m = BigUint::one();
    for (p, e) in factorize(&modulus) {
        debug_assert_eq!(e, 1, "modulus must be square-free");
        let ap = a.mod_floor(&BigInt::from(p.clone())).to_biguint()?;
        let r = sqrt_mod_prime(&ap, &p)?;
        // CRT: x = acc_r (mod acc_m), x = r (mod p)
        let inv = BigInt::from(acc_m.clone())
            .extended_gcd(&BigInt::from(p.clone()))
            .x
            .mod_floor(&BigInt::from(p.clone()));
        let diff = (BigInt::from(r) - BigInt::from(acc_r.clone())).mod_floor(&BigInt::from(p.clone()));
        let k = (diff * inv).mod_floor(&BigInt::from(p.clone()));
        acc_r += &acc_m * k.to_biguint()?;
        acc_m *= &p;
        acc_r %= &acc_m;
    }
    let mut t = BigInt::from(acc_r);
    let mi = BigInt::from(acc_m);
    if &t * 2 > mi {
        t -= &mi;
    }
    Some(t)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |g, v| g.gcd(v))
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| l.lcm(v)).abs()
}
