//! The Witt ring: classes of forms up to hyperbolic summands, ring
//! operations, finite Cayley tables, Pfister forms, the filtration by powers
//! of the fundamental ideal and the invariants `e0`, `e1`, `e2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{self, FieldCtx, Place, Scalar, SquareClass};
use crate::form::{DiagonalForm, GramMatrix};
use crate::isotropy::{witt_decompose, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ClassKey {
    Finite { dim: usize, disc: Scalar },
    Real { signature: i64 },
    Rational {
        dim: usize,
        disc: Scalar,
        signature: i64,
        hasse_minus: BTreeSet<Place>,
    },
}

/// An element of `W(F)`, stored as a canonical anisotropic representative.
///
/// Over `F_p` and `R` equal classes have identical representatives. Over `Q`
/// the representative is a list of square-free integers sorted by sign and
/// absolute value; equality compares the full isometry invariants
/// (dimension, discriminant, signature, Hasse symbols), so two classes can be
/// equal with different representatives.
#[derive(Debug, Clone)]
pub struct WittClass {
    ctx: FieldCtx,
    rep: DiagonalForm,
    key: ClassKey,
}

impl PartialEq for WittClass {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.key == other.key
    }
}

impl Eq for WittClass {}

impl Hash for WittClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.hash(state);
        self.key.hash(state);
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.dim() == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}", self.rep)
        }
    }
}

impl WittClass {
    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn representative(&self) -> &DiagonalForm {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.dim() == 0
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        Self::from_anisotropic(ctx, &[])
    }

    pub fn one(ctx: FieldCtx) -> Self {
        Self::from_anisotropic(ctx, &[ctx.one()])
    }

    /// Signature of the representative; 0 over `F_p`.
    pub fn signature(&self) -> i64 {
        signature(self.rep.entries())
    }

    /// Canonicalize a nondegenerate anisotropic diagonal form.
    fn from_anisotropic(ctx: FieldCtx, entries: &[Scalar]) -> Self {
        let dim = entries.len();
        match ctx {
            FieldCtx::PrimeField(_) => {
                let disc = entries
                    .iter()
                    .fold(ctx.one(), |acc, a| &acc * a);
                let disc = ctx.square_class(&disc).expect("nonzero").rep().clone();
                let rep = match dim {
                    0 => vec![],
                    1 => vec![disc.clone()],
                    _ => {
                        debug_assert_eq!(dim, 2, "anisotropic forms over F_p have dim <= 2");
                        vec![ctx.one(), disc.clone()]
                    }
                };
                WittClass {
                    ctx,
                    rep: DiagonalForm::new(ctx, rep),
                    key: ClassKey::Finite { dim, disc },
                }
            }
            FieldCtx::RealQ => {
                let s = signature(entries);
                let unit = ctx.int(s.signum());
                WittClass {
                    ctx,
                    rep: DiagonalForm::new(ctx, vec![unit; s.unsigned_abs() as usize]),
                    key: ClassKey::Real { signature: s },
                }
            }
            FieldCtx::Rationals => {
                let mut ints: Vec<BigInt> = entries
                    .iter()
                    .map(|a| field::squarefree_of(a.as_rational().expect("rational")))
                    .collect();
                ints.sort_by(|a, b| a.sign().cmp(&b.sign()).then(a.abs().cmp(&b.abs())));
                let disc: BigInt = arith_disc(&ints);
                let key = ClassKey::Rational {
                    dim,
                    disc: ctx.from_bigint(&disc),
                    signature: ints.iter().map(|x| if x.is_positive() { 1 } else { -1 }).sum(),
                    hasse_minus: hasse_int(&ints).minus,
                };
                WittClass {
                    ctx,
                    rep: DiagonalForm::new(ctx, ints.iter().map(|x| ctx.from_bigint(x)).collect()),
                    key,
                }
            }
        }
    }
}

fn signature(entries: &[Scalar]) -> i64 {
    entries.iter().map(|a| a.signum() as i64).sum()
}

/// Square-free part of the product.
fn arith_disc(ints: &[BigInt]) -> BigInt {
    let p: BigInt = ints.iter().product();
    field::squarefree_of(&num_rational::BigRational::from_integer(p))
}

pub fn witt_class(q: &GramMatrix) -> Result<WittClass> {
    witt_class_with_budget(q, DEFAULT_BUDGET)
}

pub fn witt_class_with_budget(q: &GramMatrix, budget: u64) -> Result<WittClass> {
    let dec = witt_decompose(q, budget)?;
    Ok(WittClass::from_anisotropic(q.ctx(), dec.anisotropic_part.entries()))
}

fn same_field(x: &WittClass, y: &WittClass) -> Result<FieldCtx> {
    if x.ctx != y.ctx {
        return Err(Error::FieldMismatch);
    }
    Ok(x.ctx)
}

pub fn wadd(x: &WittClass, y: &WittClass) -> Result<WittClass> {
    same_field(x, y)?;
    witt_class(&x.rep.to_gram().direct_sum(&y.rep.to_gram())?)
}

pub fn wneg(x: &WittClass) -> WittClass {
    WittClass::from_anisotropic(x.ctx, x.rep.negate().entries())
}

pub fn wmul(x: &WittClass, y: &WittClass) -> Result<WittClass> {
    same_field(x, y)?;
    witt_class(&x.rep.to_gram().tensor_product(&y.rep.to_gram())?)
}

/// Equality in `W(F)`.
pub fn is_similar(q1: &GramMatrix, q2: &GramMatrix) -> Result<bool> {
    if q1.ctx() != q2.ctx() {
        return Err(Error::FieldMismatch);
    }
    Ok(witt_class(q1)? == witt_class(q2)?)
}

/// Cayley tables of an enumerable Witt ring. Over a truncated `R` an entry is
/// `None` when the result falls outside the listed signatures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittRingTable {
    pub ctx: FieldCtx,
    pub elements: Vec<WittClass>,
    pub add: Vec<Vec<Option<usize>>>,
    pub mul: Vec<Vec<Option<usize>>>,
}

impl WittRingTable {
    pub fn index_of(&self, x: &WittClass) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Additive order of element `i`, if the table is closed along its multiples.
    pub fn additive_order(&self, i: usize) -> Option<usize> {
        let zero = self.index_of(&WittClass::zero(self.ctx))?;
        let mut acc = i;
        for k in 1..=self.elements.len() {
            if acc == zero {
                return Some(k);
            }
            acc = self.add[acc][i]?;
        }
        None
    }

    /// Whether the additive group is cyclic of order 4.
    pub fn is_cyclic_of_order_four(&self) -> bool {
        self.elements.len() == 4 && (0..4).any(|i| self.additive_order(i) == Some(4))
    }
}

type TableCache = Mutex<HashMap<(FieldCtx, Option<usize>), Arc<WittRingTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub fn enumerate_witt_ring(ctx: FieldCtx, truncation: Option<usize>) -> Result<Arc<WittRingTable>> {
    let key = match ctx {
        FieldCtx::PrimeField(_) => (ctx, None),
        FieldCtx::RealQ if truncation.is_some() => (ctx, truncation),
        _ => return Err(Error::InfiniteRing(ctx.to_string())),
    };
    if let Some(t) = table_cache().lock().expect("cache lock").get(&key) {
        return Ok(t.clone());
    }
    let elements = match ctx {
        FieldCtx::PrimeField(_) => {
            // W(F_p) is generated additively by one-dimensional forms.
            let gens: Vec<WittClass> = ctx
                .square_class_group()?
                .iter()
                .map(|c| WittClass::from_anisotropic(ctx, &[c.rep().clone()]))
                .collect();
            let mut elems = vec![WittClass::zero(ctx)];
            let mut frontier = elems.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for x in &frontier {
                    for g in &gens {
                        let s = wadd(x, g)?;
                        if !elems.contains(&s) {
                            elems.push(s.clone());
                            next.push(s);
                        }
                    }
                }
                frontier = next;
            }
            elems.sort_by(|a, b| (a.rep.dim(), a.rep.entries()).cmp(&(b.rep.dim(), b.rep.entries())));
            elems
        }
        _ => {
            let t = truncation.expect("checked above") as i64;
            (0..=2 * t)
                .map(|k| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
                .map(|s| WittClass::from_anisotropic(ctx, &vec![ctx.int(s.signum()); s.unsigned_abs() as usize]))
                .collect()
        }
    };
    let n = elements.len();
    let mut add = vec![vec![None; n]; n];
    let mut mul = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let pos = |x: WittClass| elements.iter().position(|e| *e == x);
            add[i][j] = pos(wadd(&elements[i], &elements[j])?);
            mul[i][j] = pos(wmul(&elements[i], &elements[j])?);
        }
    }
    let table = Arc::new(WittRingTable {
        ctx,
        elements,
        add,
        mul,
    });
    table_cache().lock().expect("cache lock").insert(key, table.clone());
    Ok(table)
}

/// `<1, a_1> ⊗ ... ⊗ <1, a_n>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterForm {
    pub slots: Vec<Scalar>,
    pub expanded: DiagonalForm,
}

pub fn pfister(ctx: FieldCtx, slots: &[Scalar]) -> Result<PfisterForm> {
    let mut entries = vec![ctx.one()];
    for a in slots {
        if !ctx.contains(a) {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroScalar);
        }
        entries = entries
            .iter()
            .flat_map(|x| [x.clone(), x * a])
            .collect();
    }
    Ok(PfisterForm {
        slots: slots.to_vec(),
        expanded: DiagonalForm::new(ctx, entries),
    })
}

/// Witt class of `<1, a_1> ⊗ ... ⊗ <1, a_n>`, multiplied out one binary
/// factor at a time so intermediate forms stay small.
pub fn pfister_class(ctx: FieldCtx, slots: &[Scalar]) -> Result<WittClass> {
    let mut acc = WittClass::one(ctx);
    for a in slots {
        let factor = witt_class(&pfister(ctx, std::slice::from_ref(a))?.expanded.to_gram())?;
        acc = wmul(&acc, &factor)?;
    }
    Ok(acc)
}

/// One step `I^n` of the filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealLevel {
    Finite(Vec<WittClass>),
    /// Over `R`: the classes whose signature is divisible by this modulus.
    SignatureMultiple(u64),
}

impl IdealLevel {
    pub fn contains(&self, x: &WittClass) -> bool {
        match self {
            IdealLevel::Finite(elems) => elems.contains(x),
            IdealLevel::SignatureMultiple(m) => x.signature().unsigned_abs().is_multiple_of(*m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub ctx: FieldCtx,
    /// `I^0, ..., I^(n_max + 1)`.
    pub levels: Vec<IdealLevel>,
    /// `dim_F2 I^n / I^(n+1)` for `n = 0..=n_max`.
    pub quotient_dims: Vec<usize>,
}

/// Slot alphabet: one representative per square class.
fn slot_alphabet(ctx: FieldCtx) -> Result<Vec<Scalar>> {
    Ok(ctx.square_class_group()?.into_iter().map(|c| c.rep().clone()).collect())
}

fn slot_words(alphabet: &[Scalar], n: usize) -> Vec<Vec<Scalar>> {
    let mut words = vec![vec![]];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut w = w.clone();
                    w.push(a.clone());
                    w
                })
            })
            .collect();
    }
    words
}

type FiltrationCache = Mutex<HashMap<(FieldCtx, usize), Filtration>>;

pub fn ideal_filtration(ctx: FieldCtx, n_max: usize) -> Result<Filtration> {
    static CACHE: OnceLock<FiltrationCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("cache lock").get(&(ctx, n_max)) {
        return Ok(f.clone());
    }
    let f = build_filtration(ctx, n_max)?;
    cache.lock().expect("cache lock").insert((ctx, n_max), f.clone());
    Ok(f)
}

fn build_filtration(ctx: FieldCtx, n_max: usize) -> Result<Filtration> {
    let alphabet = slot_alphabet(ctx).map_err(|_| Error::InfiniteRing(ctx.to_string()))?;
    let mut levels = Vec::new();
    for n in 0..=n_max + 1 {
        let level = match ctx {
            FieldCtx::PrimeField(_) if n == 0 => IdealLevel::Finite(enumerate_witt_ring(ctx, None)?.elements.clone()),
            FieldCtx::PrimeField(_) => {
                let gens: Vec<WittClass> = slot_words(&alphabet, n)
                    .iter()
                    .map(|w| pfister_class(ctx, w))
                    .collect::<Result<_>>()?;
                let mut elems = vec![WittClass::zero(ctx)];
                let mut frontier = elems.clone();
                while !frontier.is_empty() {
                    let mut next = Vec::new();
                    for x in &frontier {
                        for g in &gens {
                            for s in [wadd(x, g)?, wadd(x, &wneg(g))?] {
                                if !elems.contains(&s) {
                                    elems.push(s.clone());
                                    next.push(s);
                                }
                            }
                        }
                    }
                    frontier = next;
                }
                IdealLevel::Finite(elems)
            }
            _ => {
                // Pfister signatures are prod(1 + sign a_i); their gcd generates I^n.
                let g = slot_words(&alphabet, n)
                    .iter()
                    .map(|w| w.iter().map(|a| (1 + a.signum() as i64) as u64).product::<u64>())
                    .fold(0u64, num_integer::gcd);
                IdealLevel::SignatureMultiple(g)
            }
        };
        levels.push(level);
    }
    let quotient_dims = (0..=n_max)
        .map(|n| match (&levels[n], &levels[n + 1]) {
            (IdealLevel::Finite(a), IdealLevel::Finite(b)) => (a.len() / b.len()).trailing_zeros() as usize,
            (IdealLevel::SignatureMultiple(a), IdealLevel::SignatureMultiple(b)) => (b / a).trailing_zeros() as usize,
            _ => unreachable!("levels share one model"),
        })
        .collect();
    Ok(Filtration {
        ctx,
        levels,
        quotient_dims,
    })
}

/// Whether `x` lies in `I^n`.
pub fn in_ideal_power(x: &WittClass, n: usize) -> Result<bool> {
    let ctx = x.ctx;
    match ctx {
        FieldCtx::PrimeField(_) | FieldCtx::RealQ => {
            if ctx == FieldCtx::RealQ {
                return Ok(x.signature().unsigned_abs().is_multiple_of(1u64 << n.min(63)));
            }
            Ok(ideal_filtration(ctx, n)?.levels[n].contains(x))
        }
        FieldCtx::Rationals => {
            let q = x.rep.to_gram();
            let even = x.rep.dim().is_multiple_of(2);
            Ok(match n {
                0 => true,
                1 => even,
                _ => {
                    let e1_trivial = even && x.rep.signed_discriminant()?.is_trivial();
                    let in_i2 = e1_trivial;
                    if n == 2 {
                        in_i2
                    } else {
                        in_i2
                            && clifford_invariant(&q)?.is_trivial()
                            && x.signature().unsigned_abs().is_multiple_of(1u64 << n.min(63))
                    }
                }
            })
        }
    }
}

pub fn e0(x: &WittClass) -> u8 {
    (x.rep.dim() % 2) as u8
}

pub fn e1(x: &WittClass) -> Result<SquareClass> {
    if x.rep.dim() % 2 == 1 {
        return Err(Error::NotInIdealPower(1));
    }
    if x.rep.dim() == 0 {
        return x.ctx.square_class(&x.ctx.one());
    }
    x.rep.signed_discriminant()
}

/// Places at which a symbol invariant is `-1`. Over `F_p` this is always
/// empty; over `R` only the real place occurs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HasseProfile {
    pub ctx: FieldCtx,
    minus: BTreeSet<Place>,
}

impl HasseProfile {
    fn trivial(ctx: FieldCtx) -> Self {
        HasseProfile {
            ctx,
            minus: BTreeSet::new(),
        }
    }

    pub fn at(&self, v: &Place) -> i8 {
        if self.minus.contains(v) {
            -1
        } else {
            1
        }
    }

    pub fn nontrivial_places(&self) -> impl Iterator<Item = &Place> {
        self.minus.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.minus.is_empty()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &HasseProfile) -> HasseProfile {
        HasseProfile {
            ctx: self.ctx,
            minus: self.minus.symmetric_difference(&other.minus).cloned().collect(),
        }
    }
}

impl fmt::Display for HasseProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.minus.is_empty() {
            return f.write_str("trivial");
        }
        let places: Vec<String> = self.minus.iter().map(|p| p.to_string()).collect();
        write!(f, "-1 at {}", places.join(", "))
    }
}

fn hasse_int(ints: &[BigInt]) -> HasseProfile {
    let mut minus = BTreeSet::new();
    for v in field::relevant_places(ints.iter()) {
        let mut s = 1i8;
        for i in 0..ints.len() {
            for j in i + 1..ints.len() {
                s *= field::hilbert_int(&ints[i], &ints[j], &v);
            }
        }
        if s == -1 {
            minus.insert(v);
        }
    }
    HasseProfile {
        ctx: FieldCtx::Rationals,
        minus,
    }
}

fn diagonal_ints(q: &GramMatrix) -> Result<Vec<BigInt>> {
    if !q.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let (d, _) = q.diagonalize();
    Ok(d.entries()
        .iter()
        .map(|a| match q.ctx() {
            FieldCtx::RealQ => BigInt::from(a.signum()),
            _ => field::squarefree_of(a.as_rational().expect("rational")),
        })
        .collect())
}

/// `prod_{i<j} (a_i, a_j)_v` over a diagonalization of `q`. This is an
/// isometry invariant of the form, but not of its Witt class.
pub fn hasse_profile(q: &GramMatrix) -> Result<HasseProfile> {
    match q.ctx() {
        FieldCtx::PrimeField(_) => {
            if !q.is_nondegenerate() {
                return Err(Error::DegenerateForm);
            }
            Ok(HasseProfile::trivial(q.ctx()))
        }
        ctx => {
            let mut h = hasse_int(&diagonal_ints(q)?);
            h.ctx = ctx;
            if ctx == FieldCtx::RealQ {
                h.minus.retain(|v| *v == Place::RealPlace);
            }
            Ok(h)
        }
    }
}

/// Clifford invariant: the Hasse profile corrected by the dimension so that
/// hyperbolic summands do not change it. A function on `W(F)`.
pub fn clifford_invariant(q: &GramMatrix) -> Result<HasseProfile> {
    let s = hasse_profile(q)?;
    if matches!(q.ctx(), FieldCtx::PrimeField(_)) {
        return Ok(s);
    }
    let ints = diagonal_ints(q)?;
    let d: BigInt = ints.iter().product();
    let m1 = BigInt::from(-1);
    let corr: Box<dyn Fn(&Place) -> i8> = match q.dim() % 8 {
        1 | 2 => Box::new(|_| 1),
        3 | 4 => Box::new(|v| field::hilbert_int(&m1, &-&d, v)),
        5 | 6 => Box::new(|v| field::hilbert_int(&m1, &m1, v)),
        _ => Box::new(|v| field::hilbert_int(&m1, &d, v)),
    };
    let mut places: BTreeSet<Place> = field::relevant_places(ints.iter()).into_iter().collect();
    if q.ctx() == FieldCtx::RealQ {
        places = [Place::RealPlace].into();
    }
    let minus = places.into_iter().filter(|v| s.at(v) * corr(v) == -1).collect();
    Ok(HasseProfile { ctx: q.ctx(), minus })
}

fn in_i2_form(q: &GramMatrix) -> Result<bool> {
    if q.dim() % 2 == 1 {
        return Ok(false);
    }
    Ok(q.dim() == 0 || q.diagonalize().0.signed_discriminant()?.is_trivial())
}

/// `e2` of a form in `I^2`: its Hasse profile.
pub fn e2_form(q: &GramMatrix) -> Result<HasseProfile> {
    if !in_i2_form(q)? {
        return Err(Error::NotInIdealPower(2));
    }
    hasse_profile(q)
}

/// `e2` of a class in `I^2`, evaluated on its canonical representative.
pub fn e2(x: &WittClass) -> Result<HasseProfile> {
    e2_form(&x.rep.to_gram())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldCtx = FieldCtx::Rationals;
    const R: FieldCtx = FieldCtx::RealQ;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime_field(p).unwrap()
    }

    fn cls(ctx: FieldCtx, e: &[i64]) -> WittClass {
        witt_class(&DiagonalForm::from_ints(ctx, e).to_gram()).unwrap()
    }

    #[test]
    fn class_examples() {
        assert!(cls(Q, &[1, -1]).is_zero());
        assert_eq!(cls(fp(3), &[1, 1, 1]).representative(), &DiagonalForm::from_ints(fp(3), &[2]));
        assert_eq!(cls(Q, &[2, 8]).representative(), &DiagonalForm::from_ints(Q, &[2, 2]));
        assert_eq!(cls(Q, &[1, 1]), cls(Q, &[2, 2]));
        assert_ne!(cls(R, &[1, 1]), cls(R, &[1, -1]));
        assert_eq!(cls(Q, &[-3, 1, 5, -7]).representative(), &DiagonalForm::from_ints(Q, &[-3, -7, 1, 5]));
    }

    #[test]
    fn f3_is_cyclic_of_order_four() {
        let f3 = fp(3);
        let one = WittClass::one(f3);
        let two = wadd(&one, &one).unwrap();
        assert_eq!(two.representative(), &DiagonalForm::from_ints(f3, &[1, 1]));
        let three = wadd(&two, &one).unwrap();
        assert_eq!(three.representative(), &DiagonalForm::from_ints(f3, &[2]));
        assert!(wadd(&three, &one).unwrap().is_zero());
    }

    #[test]
    fn real_products() {
        assert_eq!(wmul(&cls(R, &[1]), &cls(R, &[-1])).unwrap(), cls(R, &[-1]));
        assert_eq!(wadd(&cls(R, &[1]), &cls(Q, &[1])), Err(Error::FieldMismatch));
    }

    #[test]
    fn ring_tables() {
        let t = enumerate_witt_ring(fp(3), None).unwrap();
        assert_eq!(t.elements.len(), 4);
        assert!(t.is_cyclic_of_order_four());
        let t = enumerate_witt_ring(fp(5), None).unwrap();
        assert_eq!(t.elements.len(), 4);
        assert!(!t.is_cyclic_of_order_four());
        let t = enumerate_witt_ring(R, Some(3)).unwrap();
        let sigs: BTreeSet<i64> = t.elements.iter().map(WittClass::signature).collect();
        assert_eq!(sigs, (-3..=3).collect());
        assert!(matches!(enumerate_witt_ring(Q, None), Err(Error::InfiniteRing(_))));
        assert!(matches!(enumerate_witt_ring(R, None), Err(Error::InfiniteRing(_))));
    }

    #[test]
    fn pfister_expansion() {
        let p = pfister(R, &[R.int(-1), R.int(-1)]).unwrap();
        assert_eq!(p.expanded, DiagonalForm::from_ints(R, &[1, -1, -1, 1]));
        assert!(witt_class(&p.expanded.to_gram()).unwrap().is_zero());
        let p = pfister(Q, &[Q.int(1), Q.int(5)]).unwrap();
        assert_eq!(p.expanded, DiagonalForm::from_ints(Q, &[1, 5, 1, 5]));
        assert_eq!(pfister(Q, &[Q.int(0)]), Err(Error::ZeroScalar));
    }

    #[test]
    fn pfister_class_matches_expansion() {
        for ctx in [Q, R, fp(3), fp(5), fp(7)] {
            for slots in [&[-1i64][..], &[2, 11], &[-1, -1], &[11, -2, 13], &[-1, -1, -1]] {
                let s: Vec<Scalar> = slots.iter().map(|&x| ctx.int(x)).collect();
                let direct = witt_class(&pfister(ctx, &s).unwrap().expanded.to_gram()).unwrap();
                assert_eq!(pfister_class(ctx, &s).unwrap(), direct, "{ctx} {slots:?}");
            }
        }
    }

    #[test]
    fn filtration_examples() {
        let f = ideal_filtration(fp(3), 2).unwrap();
        assert_eq!(f.levels[1], IdealLevel::Finite(vec![WittClass::zero(fp(3)), cls(fp(3), &[1, 1])]));
        assert_eq!(f.levels[2], IdealLevel::Finite(vec![WittClass::zero(fp(3))]));
        assert_eq!(f.quotient_dims, vec![1, 1, 0]);
        let f = ideal_filtration(R, 4).unwrap();
        assert_eq!(f.quotient_dims, vec![1; 5]);
        assert_eq!(f.levels[3], IdealLevel::SignatureMultiple(8));
        assert!(matches!(ideal_filtration(Q, 1), Err(Error::InfiniteRing(_))));
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(e0(&cls(Q, &[1])), 1);
        assert_eq!(e0(&WittClass::zero(Q)), 0);
        assert_eq!(e1(&cls(R, &[1, 1])).unwrap().rep(), &R.int(-1));
        assert_eq!(e1(&cls(Q, &[1])), Err(Error::NotInIdealPower(1)));
        let p = pfister(Q, &[Q.int(-1), Q.int(-1)]).unwrap().expanded.to_gram();
        let h = e2_form(&p).unwrap();
        let minus: Vec<&Place> = h.nontrivial_places().collect();
        assert_eq!(minus, vec![&Place::RealPlace, &Place::prime(2)]);
        // The form is hyperbolic, so its class carries no Clifford invariant.
        assert!(clifford_invariant(&p).unwrap().is_trivial());
        let quat = DiagonalForm::from_ints(Q, &[1, 1, 1, 1]).to_gram();
        let c = clifford_invariant(&quat).unwrap();
        assert_eq!(c.nontrivial_places().collect::<Vec<_>>(), vec![&Place::RealPlace, &Place::prime(2)]);
    }

    #[test]
    fn clifford_invariant_ignores_hyperbolic_planes() {
        let h = DiagonalForm::from_ints(Q, &[1, -1]).to_gram();
        for e in [&[3i64, 5][..], &[-1, -1, 7], &[2, 3, 5, 7], &[1], &[-2, 6, 10, -14, 3]] {
            let mut q = DiagonalForm::from_ints(Q, e).to_gram();
            let c = clifford_invariant(&q).unwrap();
            for _ in 0..4 {
                q = q.direct_sum(&h).unwrap();
                assert_eq!(clifford_invariant(&q).unwrap(), c, "{e:?}");
            }
        }
    }
}
