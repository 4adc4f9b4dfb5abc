//! Exact coefficient fields: the rationals, prime fields of odd characteristic,
//! and a sign-tracked model of the reals whose scalars are rationals.
//!
//! Every field here has characteristic different from two. Square classes,
//! Legendre symbols and Hilbert symbols live alongside the arithmetic because
//! most of the quadratic form machinery reduces to them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// An odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if arith::is_odd_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidField(format!(
                "Fp({p}) needs an odd prime modulus"
            )))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldCtx {
    Rationals,
    PrimeField(Prime),
    /// The reals, modelled by rational scalars whose square class is their sign.
    RealQ,
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => f.write_str("Q"),
            FieldCtx::PrimeField(p) => write!(f, "Fp({})", p.0),
            FieldCtx::RealQ => f.write_str("R"),
        }
    }
}

/// A residue modulo an odd prime, always in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    p: Prime,
}

impl Residue {
    pub fn new(value: u64, p: Prime) -> Self {
        Residue {
            value: value % p.0,
            p,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.p.0;
        let mut base = self.value;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mulmod(acc, base, p);
            }
            base = Self::mulmod(base, base, p);
            e >>= 1;
        }
        Residue { value: acc, p: self.p }
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| self.pow(self.p.0 - 2))
    }
}

/// An exact field element: a reduced rational (over `Q` and `R`) or a residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(Residue),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(r) => r.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => (!r.is_zero()).then(|| Scalar::Rational(r.recip())),
            Scalar::Residue(r) => r.inv().map(Scalar::Residue),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|i| self * &i)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<Residue> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue(r) => Some(*r),
        }
    }

    /// Sign of a rational scalar; residues have no sign and report 0.
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(r) if r.is_positive() => 1,
            Scalar::Rational(r) if r.is_negative() => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue(r) => write!(f, "{}", r.value),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue(a), Scalar::Residue(b)) => {
                (a.p.0, a.value).cmp(&(b.p.0, b.value))
            }
            (Scalar::Rational(_), Scalar::Residue(_)) => Ordering::Less,
            (Scalar::Residue(_), Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    rat: impl FnOnce(&BigRational, &BigRational) -> BigRational,
    res: impl FnOnce(u64, u64, u64) -> u64,
) -> Scalar {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(rat(x, y)),
        (Scalar::Residue(x), Scalar::Residue(y)) if x.p == y.p => Scalar::Residue(Residue {
            value: res(x.value, y.value, x.p.0),
            p: x.p,
        }),
        _ => panic!("arithmetic between scalars of different fields: {a:?}, {b:?}"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x + y, |x, y, p| {
            ((x as u128 + y as u128) % p as u128) as u64
        })
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x - y, |x, y, p| (x + (p - y)) % p)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, |x, y| x * y, Residue::mulmod)
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] when the divisor
/// is not already known to be nonzero.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue(r) => Scalar::Residue(Residue {
                value: (r.p.0 - r.value) % r.p.0,
                p: r.p,
            }),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// An element of `F*/(F*)^2`, stored by its canonical representative:
/// a square-free integer over `Q`, `1` or the least nonresidue over `F_p`,
/// and `1` or `-1` over `R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    rep: Scalar,
}

impl SquareClass {
    pub fn rep(&self) -> &Scalar {
        &self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.is_one()
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// A place of `Q` at which Hilbert symbols are evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    RealPlace,
    FinitePrime(BigUint),
}

impl Place {
    pub fn prime(q: u64) -> Self {
        Place::FinitePrime(BigUint::from(q))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::RealPlace => f.write_str("inf"),
            Place::FinitePrime(q) => write!(f, "{q}"),
        }
    }
}

impl FieldCtx {
    pub fn prime_field(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldCtx::PrimeField)
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldCtx::PrimeField(p) => Some(p.0),
            _ => None,
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            FieldCtx::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(p.0)).to_u64().expect("residue fits");
                Scalar::Residue(Residue { value: r, p })
            }
            _ => Scalar::Rational(BigRational::from_integer(n.clone())),
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in the field.
    pub fn from_rational(self, r: &BigRational) -> Result<Scalar> {
        match self {
            FieldCtx::PrimeField(_) => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                n.checked_div(&d).ok_or(Error::DivisionByZero)
            }
            _ => Ok(Scalar::Rational(r.clone())),
        }
    }

    pub fn ratio(self, n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn contains(self, x: &Scalar) -> bool {
        match (self, x) {
            (FieldCtx::PrimeField(p), Scalar::Residue(r)) => r.p == p,
            (FieldCtx::Rationals | FieldCtx::RealQ, Scalar::Rational(_)) => true,
            _ => false,
        }
    }

    fn check(self, x: &Scalar) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Checked field arithmetic. `Neg` ignores `y`.
    pub fn arith(self, op: ArithOp, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        self.check(x)?;
        if op != ArithOp::Neg {
            self.check(y)?;
        }
        Ok(match op {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
            ArithOp::Div => x.checked_div(y).ok_or(Error::DivisionByZero)?,
            ArithOp::Neg => -x,
        })
    }

    /// Least positive quadratic nonresidue for a prime field.
    pub fn least_nonresidue(self) -> Option<u64> {
        let FieldCtx::PrimeField(p) = self else {
            return None;
        };
        let pb = BigUint::from(p.0);
        (2..p.0).find(|&a| arith::legendre(&BigInt::from(a), &pb) == -1)
    }

    /// Whether `x` is a square in the field (zero counts as a square).
    pub fn is_square(self, x: &Scalar) -> bool {
        match self.square_class(x) {
            Ok(c) => c.is_trivial(),
            Err(_) => true,
        }
    }

    pub fn square_class(self, x: &Scalar) -> Result<SquareClass> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let rep = match (self, x) {
            (FieldCtx::PrimeField(p), Scalar::Residue(r)) => {
                if arith::legendre(&BigInt::from(r.value), &BigUint::from(p.0)) == 1 {
                    self.one()
                } else {
                    self.int(self.least_nonresidue().expect("odd prime has a nonresidue") as i64)
                }
            }
            (FieldCtx::RealQ, Scalar::Rational(q)) => self.int(if q.is_positive() { 1 } else { -1 }),
            (FieldCtx::Rationals, Scalar::Rational(q)) => {
                self.from_bigint(&arith::squarefree_of_ratio(q.numer(), q.denom()))
            }
            _ => unreachable!("checked above"),
        };
        Ok(SquareClass { rep })
    }

    pub fn class_mul(self, a: &SquareClass, b: &SquareClass) -> SquareClass {
        self.square_class(&(&a.rep * &b.rep))
            .expect("product of square classes is nonzero")
    }

    /// An exact square root, when `x` is a square in the field.
    pub fn sqrt(self, x: &Scalar) -> Option<Scalar> {
        if x.is_zero() {
            return Some(x.clone());
        }
        match (self, x) {
            (FieldCtx::PrimeField(p), Scalar::Residue(r)) => {
                arith::sqrt_mod_prime(&BigUint::from(r.value), &BigUint::from(p.0))
                    .map(|s| Scalar::Residue(Residue::new(s.to_u64().expect("residue"), p)))
            }
            (_, Scalar::Rational(q)) => {
                if q.is_negative() {
                    return None;
                }
                let n = arith::exact_sqrt(q.numer().magnitude())?;
                let d = arith::exact_sqrt(q.denom().magnitude())?;
                Some(Scalar::Rational(BigRational::new(n.into(), d.into())))
            }
            _ => None,
        }
    }

    /// The finite group `F*/(F*)^2`, trivial class first.
    pub fn square_class_group(self) -> Result<Vec<SquareClass>> {
        match self {
            FieldCtx::Rationals => Err(Error::InfiniteSquareClassGroup(self.to_string())),
            FieldCtx::RealQ => Ok(vec![
                SquareClass { rep: self.one() },
                SquareClass { rep: self.int(-1) },
            ]),
            FieldCtx::PrimeField(_) => Ok(vec![
                SquareClass { rep: self.one() },
                SquareClass {
                    rep: self.int(self.least_nonresidue().expect("nonresidue") as i64),
                },
            ]),
        }
    }

    /// All elements of a prime field, zero first.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        let FieldCtx::PrimeField(p) = self else {
            return None;
        };
        Some((0..p.0).map(|v| Scalar::Residue(Residue { value: v, p })).collect())
    }
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: Prime) -> i8 {
    arith::legendre(a, &BigUint::from(p.0))
}

/// Square-free integer with the same square class as a nonzero rational.
pub(crate) fn squarefree_of(q: &BigRational) -> BigInt {
    arith::squarefree_of_ratio(q.numer(), q.denom())
}

/// Hilbert symbol `(a, b)_v` of two nonzero rationals.
pub fn hilbert_symbol(a: &Scalar, b: &Scalar, v: &Place) -> Result<i8> {
    let (Some(a), Some(b)) = (a.as_rational(), b.as_rational()) else {
        return Err(Error::FieldMismatch);
    };
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroScalar);
    }
    Ok(hilbert_int(&squarefree_of(a), &squarefree_of(b), v))
}

/// Hilbert symbol of two nonzero integers.
pub(crate) fn hilbert_int(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    match v {
        Place::RealPlace => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::FinitePrime(q) if *q == BigUint::from(2u32) => {
            let (alpha, u) = arith::valuation(a, q);
            let (beta, w) = arith::valuation(b, q);
            let eps = |x: &BigInt| x.mod_floor(&BigInt::from(4)) == BigInt::from(3);
            let omega = |x: &BigInt| {
                let r = x.mod_floor(&BigInt::from(8));
                r == BigInt::from(3) || r == BigInt::from(5)
            };
            let mut e = (eps(&u) && eps(&w)) as u32;
            e += alpha * omega(&w) as u32;
            e += beta * omega(&u) as u32;
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::FinitePrime(q) => {
            let (alpha, u) = arith::valuation(a, q);
            let (beta, w) = arith::valuation(b, q);
            let eps_q = ((q - 1u32) >> 1u32).is_odd();
            let mut s: i8 = if eps_q && (alpha * beta) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= arith::legendre(&u, q);
            }
            if alpha % 2 == 1 {
                s *= arith::legendre(&w, q);
            }
            s
        }
    }
}

/// Whether a nonzero integer is a square in the completion of `Q` at `v`.
pub(crate) fn is_local_square(a: &BigInt, v: &Place) -> bool {
    match v {
        Place::RealPlace => a.is_positive(),
        Place::FinitePrime(q) => {
            let (val, u) = arith::valuation(a, q);
            if val % 2 == 1 {
                return false;
            }
            if *q == BigUint::from(2u32) {
                u.mod_floor(&BigInt::from(8)) == BigInt::one()
            } else {
                arith::legendre(&u, q) == 1
            }
        }
    }
}

/// The real place together with every prime dividing `2 * prod(values)`.
pub(crate) fn relevant_places<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Vec<Place> {
    let mut primes = std::collections::BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    for v in values {
        primes.extend(arith::factorize(v.magnitude()).into_keys());
    }
    std::iter::once(Place::RealPlace)
        .chain(primes.into_iter().map(Place::FinitePrime))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldCtx::Rationals.ratio(n, d).unwrap()
    }

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime_field(p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let ctx = FieldCtx::Rationals;
        assert_eq!(ctx.arith(ArithOp::Add, &q(1, 2), &q(1, 3)).unwrap(), q(5, 6));
        let f7 = fp(7);
        assert_eq!(f7.arith(ArithOp::Mul, &f7.int(3), &f7.int(5)).unwrap(), f7.int(1));
        let f3 = fp(3);
        assert_eq!(f3.arith(ArithOp::Div, &f3.int(1), &f3.int(2)).unwrap(), f3.int(2));
        assert_eq!(
            f3.arith(ArithOp::Div, &f3.int(1), &f3.int(3)),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            ctx.arith(ArithOp::Add, &q(1, 1), &f3.int(1)),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, -4), q(-1, 2));
        assert_eq!(fp(5).int(-1), fp(5).int(4));
        assert_eq!(q(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn invalid_moduli_rejected() {
        for p in [0, 1, 2, 4, 9, 15, 21] {
            assert!(matches!(FieldCtx::prime_field(p), Err(Error::InvalidField(_))));
        }
    }

    #[test]
    fn square_class_examples() {
        let r = FieldCtx::RealQ;
        assert_eq!(r.square_class(&r.int(-3)).unwrap().rep(), &r.int(-1));
        let f7 = fp(7);
        assert!(f7.square_class(&f7.int(2)).unwrap().is_trivial());
        let c = FieldCtx::Rationals.square_class(&q(8, 9)).unwrap();
        assert_eq!(c.rep(), &q(2, 1));
        assert_eq!(
            FieldCtx::Rationals.square_class(&q(0, 1)),
            Err(Error::ZeroScalar)
        );
    }

    #[test]
    fn legendre_examples() {
        let p7 = Prime::new(7).unwrap();
        assert_eq!(legendre(&BigInt::from(2), p7), 1);
        assert_eq!(legendre(&BigInt::from(2), Prime::new(3).unwrap()), -1);
        assert_eq!(legendre(&BigInt::from(21), p7), 0);
    }

    #[test]
    fn legendre_matches_square_table() {
        for p in (3..50u64).filter(|&p| arith::is_odd_prime(p)) {
            let prime = Prime::new(p).unwrap();
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(&BigInt::from(a), prime), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let m1 = q(-1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::RealPlace).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::prime(3)).unwrap(), 1);
        for b in [-7, -2, 3, 10] {
            for v in [Place::RealPlace, Place::prime(2), Place::prime(7)] {
                assert_eq!(hilbert_symbol(&q(1, 1), &q(b, 1), &v).unwrap(), 1);
            }
        }
        assert_eq!(
            hilbert_symbol(&q(0, 1), &m1, &Place::RealPlace),
            Err(Error::ZeroScalar)
        );
    }

    /// Solvability of z^2 = a x^2 + b y^2 in Z/8 with some unit coordinate
    /// (for unit a, b) matches the dyadic formula.
    #[test]
    fn dyadic_symbol_matches_mod8_search() {
        for a in [1i64, 3, 5, 7] {
            for b in [1i64, 3, 5, 7] {
                let mut solvable = false;
                for x in 0..8i64 {
                    for y in 0..8i64 {
                        for z in 0..8i64 {
                            if x % 2 == 1 || y % 2 == 1 || z % 2 == 1 {
                                solvable |= (z * z - a * x * x - b * y * y).rem_euclid(8) == 0;
                            }
                        }
                    }
                }
                let s = hilbert_int(&BigInt::from(a), &BigInt::from(b), &Place::prime(2));
                assert_eq!(s == 1, solvable, "({a},{b})_2");
            }
        }
    }

    #[test]
    fn square_class_group_sizes() {
        let f5 = fp(5);
        let g = f5.square_class_group().unwrap();
        assert_eq!(g.iter().map(|c| c.rep().clone()).collect::<Vec<_>>(), vec![f5.int(1), f5.int(2)]);
        assert_eq!(FieldCtx::RealQ.square_class_group().unwrap().len(), 2);
        assert!(matches!(
            FieldCtx::Rationals.square_class_group(),
            Err(Error::InfiniteSquareClassGroup(_))
        ));
    }

    #[test]
    fn square_roots() {
        let f13 = fp(13);
        for v in 1..13 {
            let x = f13.int(v);
            match f13.sqrt(&x) {
                Some(s) => assert_eq!(&s * &s, x),
                None => assert!(!f13.is_square(&x)),
            }
        }
        assert_eq!(FieldCtx::Rationals.sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(FieldCtx::Rationals.sqrt(&q(2, 1)), None);
    }
}
