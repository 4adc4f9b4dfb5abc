//! Local square classes of integers packed into bits, for screening many
//! candidate values against fixed local isotropy conditions.
//!
//! At an odd prime `p` bit 0 is the parity of the valuation and bit 1 marks
//! a non-residue unit part. At 2, bit 0 is the valuation parity and bits 1, 2
//! are the characters `(u - 1) / 2` and `(u^2 - 1) / 8` of the unit part.
//! At the real place bit 0 is the sign. Each encoding is a homomorphism to
//! a group of bit vectors under xor.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::Place;

fn is_two(p: &BigUint) -> bool {
    *p == BigUint::from(2u32)
}

/// Encoded square class of a nonzero integer at `v`.
fn class_at(f: &BigInt, v: &Place) -> u8 {
    match v {
        Place::RealPlace => u8::from(f.is_negative()),
        Place::FinitePrime(p) => {
            let (val, u) = arith::valuation(f, p);
            let parity = (val & 1) as u8;
            if is_two(p) {
                let r = u.mod_floor(&BigInt::from(8)).to_u8().expect("residue mod 8");
                let eps = ((r - 1) / 2) & 1;
                let omega = ((r * r - 1) / 8) & 1;
                parity | eps << 1 | omega << 2
            } else {
                parity | u8::from(arith::legendre(&u, p) == -1) << 1
            }
        }
    }
}

fn class_count(v: &Place) -> u8 {
    match v {
        Place::RealPlace => 2,
        Place::FinitePrime(p) if is_two(p) => 8,
        Place::FinitePrime(_) => 4,
    }
}

/// An integer in the encoded class at `v`.
fn representative(code: u8, v: &Place) -> BigInt {
    match v {
        Place::RealPlace => BigInt::from(if code & 1 == 1 { -1 } else { 1 }),
        Place::FinitePrime(p) => {
            let unit = if is_two(p) {
                match (code >> 1) & 3 {
                    0 => BigInt::from(1),
                    3 => BigInt::from(3),
                    2 => BigInt::from(5),
                    _ => BigInt::from(7),
                }
            } else if code & 2 == 2 {
                least_nonresidue(p)
            } else {
                BigInt::one()
            };
            if code & 1 == 1 {
                unit * BigInt::from(p.clone())
            } else {
                unit
            }
        }
    }
}

fn least_nonresidue(p: &BigUint) -> BigInt {
    let mut n = BigInt::from(2);
    while arith::legendre(&n, p) != -1 {
        n += 1;
    }
    n
}

/// Classes `c` at `v` for which every `phi ⊥ <c>` is isotropic at `v`.
fn allowed_classes(conditions: &[Vec<BigInt>], v: &Place, is_local: &impl Fn(&[BigInt], &Place) -> bool) -> Vec<bool> {
    (0..class_count(v))
        .map(|code| {
            let r = representative(code, v);
            conditions.iter().all(|phi| {
                let mut form = phi.clone();
                form.push(r.clone());
                is_local(&form, v)
            })
        })
        .collect()
}

/// First square-free `c = ± (product of primes dividing 2 * prod known) * l`
/// such that `phi ⊥ <c>` is isotropic over `Q` for every `phi` in
/// `conditions` (each of dimension at least 2). `l` is 1 or a prime outside
/// that set, tried in increasing order, at most `budget` values. Valuation
/// parities forced by the local conditions are fixed; the remaining primes
/// are tried in subsets of increasing size, at most `MAX_SUBSETS` per `l`.
/// Such a `c` exists whenever the conditions can be met at all: the unit
/// classes at the finitely many relevant places can be matched by choosing
/// `l` in suitable residue classes.
pub(crate) fn auxiliary_value(
    known: &[BigInt],
    conditions: &[Vec<BigInt>],
    budget: u64,
    is_local: impl Fn(&[BigInt], &Place) -> bool,
) -> Result<BigInt> {
    debug_assert!(conditions.iter().all(|phi| phi.len() >= 2));
    let mut primes = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    for x in known.iter().chain(conditions.iter().flatten()) {
        primes.extend(arith::factorize(x.magnitude()).into_keys());
    }
    let base: Vec<BigInt> = primes.iter().map(|p| BigInt::from(p.clone())).collect();
    let places: Vec<Place> = std::iter::once(Place::RealPlace)
        .chain(primes.iter().cloned().map(Place::FinitePrime))
        .collect();
    let allowed: Vec<Vec<bool>> = places.iter().map(|v| allowed_classes(conditions, v, &is_local)).collect();
    let minus_one = BigInt::from(-1);
    let minus: Vec<u8> = places.iter().map(|v| class_at(&minus_one, v)).collect();

    // The valuation parity of c at a prime p in the set comes only from p
    // itself. Where every allowed class has the same parity that bit is
    // forced; where no class is allowed, nothing works.
    let mut forced = Vec::new();
    let mut free = Vec::new();
    for (i, _) in base.iter().enumerate() {
        let slot = i + 1;
        let parities: BTreeSet<u8> = (0..allowed[slot].len() as u8).filter(|&c| allowed[slot][c as usize]).map(|c| c & 1).collect();
        match parities.len() {
            0 => return Err(no_value(known, budget)),
            1 if parities.contains(&1) => forced.push(i),
            1 => {}
            _ => free.push(i),
        }
    }
    let contrib: Vec<Vec<u8>> = base.iter().map(|b| places.iter().map(|v| class_at(b, v)).collect()).collect();
    let mut forced_row = vec![0u8; places.len()];
    for &i in &forced {
        xor_into(&mut forced_row, &contrib[i]);
    }
    let masks = small_subsets(free.len(), MAX_SUBSETS);

    let mut ell = 1u64;
    for _ in 0..budget {
        let ell_big = BigInt::from(ell);
        let mut fixed = forced_row.clone();
        xor_into(&mut fixed, &places.iter().map(|v| class_at(&ell_big, v)).collect::<Vec<u8>>());
        // the place l itself, when l > 1
        let extra = (ell > 1).then(|| {
            let v = Place::FinitePrime(BigUint::from(ell));
            let legendre: Vec<u8> = base.iter().map(|b| class_at(b, &v)).collect();
            let at_ell = forced.iter().fold(class_at(&ell_big, &v), |acc, &i| acc ^ legendre[i]);
            (allowed_classes(conditions, &v, &is_local), class_at(&minus_one, &v), legendre, at_ell)
        });
        for mask in &masks {
            let mut row = fixed.clone();
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    xor_into(&mut row, &contrib[i]);
                }
            }
            for negative in [false, true] {
                let ok = row.iter().enumerate().all(|(i, &code)| {
                    let code = code ^ if negative { minus[i] } else { 0 };
                    allowed[i][code as usize]
                }) && extra.as_ref().is_none_or(|(allow, m, legendre, at_ell)| {
                    let mut code = *at_ell ^ if negative { *m } else { 0 };
                    for (bit, &i) in free.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            code ^= legendre[i];
                        }
                    }
                    allow[code as usize]
                });
                if ok {
                    let chosen = forced
                        .iter()
                        .chain(free.iter().enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, i)| i));
                    let c: BigInt = chosen.map(|&i| &base[i]).product::<BigInt>() * &ell_big;
                    return Ok(if negative { -c } else { c });
                }
            }
        }
        ell = next_prime_outside(ell, &primes);
    }
    Err(no_value(known, budget))
}

/// Cap on the subsets of free primes tried for each auxiliary prime.
const MAX_SUBSETS: usize = 1 << 12;

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

/// Subsets of `0..k` as bit masks, fewest elements first, at most `cap`.
fn small_subsets(k: usize, cap: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut layer = vec![(0u64, 0usize)];
    while out.len() < cap && !layer.is_empty() {
        let mut next = Vec::new();
        for &(mask, start) in &layer {
            for i in start..k.min(64) {
                next.push((mask | 1 << i, i + 1));
            }
        }
        out.extend(next.iter().map(|&(m, _)| m));
        layer = next;
    }
    out.truncate(cap);
    out
}

fn no_value(known: &[BigInt], budget: u64) -> Error {
    let known: Vec<String> = known.iter().map(|x| x.to_string()).collect();
    Error::SearchBudgetExceeded {
        bound: budget,
        trace: vec![format!(
            "no auxiliary value for <{}> among {budget} auxiliary primes",
            known.join(", ")
        )],
    }
}

fn next_prime_outside(after: u64, avoid: &BTreeSet<BigUint>) -> u64 {
    let mut p = after + 1;
    while !num_prime::nt_funcs::is_prime64(p) || avoid.contains(&BigUint::from(p)) {
        p += 1;
    }
    p
}
