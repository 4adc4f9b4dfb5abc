//! Mod 2 Milnor K-theory, graded Witt quotients and Galois cohomology for
//! fields with finitely many square classes, and the comparison maps between
//! them degree by degree.
//!
//! `K_n(F)/2` is computed as the `n`-th tensor power of `F*/F*^2` modulo the
//! images of Steinberg words `{a, 1 - a}`. Cohomology is not computed: the
//! dimensions for finite fields and for `R` are built in, and `H^*` is
//! modelled as `F_2[chi]/(chi^2)` over `F_p` and as `F_2[chi]` over `R`, with
//! `chi` the Kummer class of a nonsquare.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Place, Scalar};
use crate::form::DiagonalForm;
use crate::witt::{self, clifford_invariant, e0, e1, ideal_filtration, pfister_class, wadd, IdealLevel, WittClass};

/// A finite-dimensional `F_2` space given as an ambient space modulo the
/// span of relation vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Space {
    pub ambient: usize,
    pub basis: Vec<String>,
    pub relations: Vec<Vec<bool>>,
    pub rank: usize,
    pub dimension: usize,
    /// Reduced echelon form of the relations: (pivot column, row).
    echelon: Vec<(usize, Vec<bool>)>,
}

impl F2Space {
    pub fn new(basis: Vec<String>, relations: Vec<Vec<bool>>) -> Self {
        let ambient = basis.len();
        let echelon = echelon(ambient, &relations);
        let rank = echelon.len();
        F2Space {
            ambient,
            basis,
            relations,
            rank,
            dimension: ambient - rank,
            echelon,
        }
    }

    /// Ambient indices that survive in the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.echelon.iter().any(|(p, _)| p == c))
            .collect()
    }

    /// Coordinates of `v` in the quotient, with respect to `free_columns`.
    pub fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut v = v.to_vec();
        for (p, row) in &self.echelon {
            if v[*p] {
                xor_into(&mut v, row);
            }
        }
        self.free_columns().into_iter().map(|c| v[c]).collect()
    }
}

fn xor_into(v: &mut [bool], row: &[bool]) {
    for (a, b) in v.iter_mut().zip(row) {
        *a ^= *b;
    }
}

/// Fully reduced row echelon form over `F_2`.
fn echelon(ambient: usize, rows: &[Vec<bool>]) -> Vec<(usize, Vec<bool>)> {
    let mut out: Vec<(usize, Vec<bool>)> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for (p, row) in &out {
            if v[*p] {
                xor_into(&mut v, row);
            }
        }
        if let Some(p) = (0..ambient).find(|&c| v[c]) {
            for (_, row) in out.iter_mut() {
                if row[p] {
                    xor_into(row, &v);
                }
            }
            out.push((p, v));
        }
    }
    out
}

/// `{a_1, ..., a_n}` mod 2, entries given by square-class representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSymbol(pub Vec<Scalar>);

impl fmt::Display for KSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let s: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Square-class group as an `F_2` space: the nontrivial representatives form
/// the basis, and coordinates of a nonzero scalar are read off its class.
struct SquareClasses {
    ctx: FieldCtx,
    generators: Vec<Scalar>,
}

impl SquareClasses {
    fn new(ctx: FieldCtx) -> Result<Self> {
        let group = ctx.square_class_group()?;
        let generators: Vec<Scalar> = group.iter().filter(|c| !c.is_trivial()).map(|c| c.rep().clone()).collect();
        // Every supported field has F*/F*^2 of order 2.
        debug_assert_eq!(generators.len(), 1);
        Ok(SquareClasses { ctx, generators })
    }

    fn coords(&self, a: &Scalar) -> Vec<bool> {
        let rep = self.ctx.square_class(a).expect("nonzero scalar").rep().clone();
        self.generators.iter().map(|g| *g == rep).collect()
    }
}

/// Kronecker product of `F_2` vectors.
fn kron(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x && y)).collect()
}

fn word_vector(sc: &SquareClasses, word: &[Scalar]) -> Vec<bool> {
    word.iter().fold(vec![true], |acc, a| kron(&acc, &sc.coords(a)))
}

/// Words of length `n` over the generators, in ambient order.
fn basis_words(sc: &SquareClasses, n: usize) -> Vec<Vec<Scalar>> {
    let mut words = vec![vec![]];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                sc.generators.iter().map(move |g| {
                    let mut w = w.clone();
                    w.push(g.clone());
                    w
                })
            })
            .collect();
    }
    words
}

/// Pairs `(a, 1 - a)` with both entries nonzero: every such pair over `F_p`;
/// over `R` one pair per sign pattern `a < 0`, `0 < a < 1`, `a > 1`.
pub fn steinberg_pairs(ctx: FieldCtx) -> Result<Vec<(Scalar, Scalar)>> {
    let candidates: Vec<Scalar> = match ctx {
        FieldCtx::PrimeField(_) => ctx.elements().expect("finite field"),
        FieldCtx::RealQ => vec![ctx.int(-1), ctx.ratio(1, 2)?, ctx.int(2)],
        _ => return Err(Error::InfiniteSquareClassGroup(ctx.to_string())),
    };
    Ok(candidates
        .into_iter()
        .filter(|a| !a.is_zero() && !a.is_one())
        .map(|a| {
            let b = &ctx.one() - &a;
            (a, b)
        })
        .collect())
}

/// Relation words of degree `n`: a Steinberg pair at positions `(i, i + 1)`
/// and generator words around it.
fn steinberg_words(sc: &SquareClasses, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut out = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    let pairs = steinberg_pairs(sc.ctx)?;
    for i in 0..n - 1 {
        for left in basis_words(sc, i) {
            for right in basis_words(sc, n - i - 2) {
                for (a, b) in &pairs {
                    let mut w = left.clone();
                    w.push(a.clone());
                    w.push(b.clone());
                    w.extend(right.iter().cloned());
                    out.push(w);
                }
            }
        }
    }
    Ok(out)
}

fn label(word: &[Scalar]) -> String {
    KSymbol(word.to_vec()).to_string()
}

pub fn milnor_k_mod2(ctx: FieldCtx, n: usize) -> Result<F2Space> {
    let sc = SquareClasses::new(ctx)?;
    let basis = basis_words(&sc, n).iter().map(|w| label(w)).collect();
    let relations = steinberg_words(&sc, n)?
        .iter()
        .map(|w| word_vector(&sc, w))
        .collect();
    Ok(F2Space::new(basis, relations))
}

/// Same quotient, with the two-sided ideal generated by all Steinberg words
/// surrounded by arbitrary field elements (not only generators). Exhaustive
/// over `F_p`; over `R` the surrounding elements range over a fixed sample
/// covering both signs.
pub fn milnor_k_mod2_full_closure(ctx: FieldCtx, n: usize) -> Result<F2Space> {
    let sc = SquareClasses::new(ctx)?;
    let units: Vec<Scalar> = match ctx {
        FieldCtx::PrimeField(_) => ctx.elements().expect("finite").into_iter().filter(|x| !x.is_zero()).collect(),
        _ => [1, -1, 2, -3, 5, -7].iter().map(|&x| ctx.int(x)).chain([ctx.ratio(1, 3)?, ctx.ratio(-2, 5)?]).collect(),
    };
    let words_over = |len: usize| {
        let mut words: Vec<Vec<Scalar>> = vec![vec![]];
        for _ in 0..len {
            words = words
                .into_iter()
                .flat_map(|w| {
                    units.iter().map(move |u| {
                        let mut w = w.clone();
                        w.push(u.clone());
                        w
                    })
                })
                .collect();
        }
        words
    };
    let pairs = steinberg_pairs(ctx)?;
    let mut relations = Vec::new();
    if n >= 2 {
        for i in 0..n - 1 {
            for left in words_over(i) {
                for right in words_over(n - i - 2) {
                    for (a, b) in &pairs {
                        let mut w = left.clone();
                        w.push(a.clone());
                        w.push(b.clone());
                        w.extend(right.iter().cloned());
                        relations.push(word_vector(&sc, &w));
                    }
                }
            }
        }
    }
    let basis = basis_words(&sc, n).iter().map(|w| label(w)).collect();
    Ok(F2Space::new(basis, relations))
}

pub fn galois_cohomology_dims(ctx: FieldCtx, n: usize) -> Result<usize> {
    match ctx {
        FieldCtx::PrimeField(_) => Ok(usize::from(n <= 1)),
        FieldCtx::RealQ => Ok(1),
        FieldCtx::Rationals => Err(Error::UnsupportedField(ctx.to_string())),
    }
}

/// `I^n / I^(n+1)`, with a map from classes in `I^n` to quotient elements.
pub struct GradedPiece {
    ctx: FieldCtx,
    n: usize,
    /// Over `F_p`: the cosets of `I^(n+1)` in `I^n`.
    cosets: Vec<Vec<WittClass>>,
    pub dimension: usize,
}

impl GradedPiece {
    /// Index of the coset of `x`; `None` if `x` is not in `I^n`.
    pub fn coset(&self, x: &WittClass) -> Option<usize> {
        match self.ctx {
            FieldCtx::RealQ => {
                let m = 1i64 << self.n;
                let s = x.signature();
                (s % m == 0).then(|| ((s / m).rem_euclid(2)) as usize)
            }
            _ => self.cosets.iter().position(|c| c.contains(x)),
        }
    }

    pub fn size(&self) -> usize {
        1 << self.dimension
    }
}

pub fn graded_witt_piece(ctx: FieldCtx, n: usize) -> Result<GradedPiece> {
    let filt = ideal_filtration(ctx, n)?;
    let dimension = filt.quotient_dims[n];
    let cosets = match (&filt.levels[n], &filt.levels[n + 1]) {
        (IdealLevel::Finite(big), IdealLevel::Finite(small)) => {
            let mut cosets: Vec<Vec<WittClass>> = Vec::new();
            for x in big {
                if cosets.iter().any(|c| c.contains(x)) {
                    continue;
                }
                let c = small.iter().map(|y| wadd(x, y)).collect::<Result<Vec<_>>>()?;
                cosets.push(c);
            }
            // Zero coset first.
            cosets.sort_by_key(|c| !c.iter().any(WittClass::is_zero));
            cosets
        }
        _ => vec![],
    };
    Ok(GradedPiece {
        ctx,
        n,
        cosets,
        dimension,
    })
}

pub fn graded_witt_quotient(ctx: FieldCtx, n: usize) -> Result<F2Space> {
    let piece = graded_witt_piece(ctx, n)?;
    let basis = (0..piece.dimension).map(|i| format!("I^{n} generator {i}")).collect();
    Ok(F2Space::new(basis, vec![]))
}

/// Sign convention for the map from symbols to Pfister forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PfisterConvention {
    /// `{a} -> <1, -a>`.
    #[default]
    Standard,
    /// `{a} -> <1, a>`.
    Literal,
}

impl fmt::Display for PfisterConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PfisterConvention::Standard => "standard",
            PfisterConvention::Literal => "literal",
        })
    }
}

fn nu_word(ctx: FieldCtx, word: &[Scalar], conv: PfisterConvention) -> Result<WittClass> {
    let slots: Vec<Scalar> = match conv {
        PfisterConvention::Standard => word.iter().map(|a| -a).collect(),
        PfisterConvention::Literal => word.to_vec(),
    };
    pfister_class(ctx, &slots)
}

/// Image in `H^n` (a single bit, since `dim H^n <= 1` here) of the cup
/// product of Kummer classes.
fn eta_word(sc: &SquareClasses, word: &[Scalar]) -> Result<bool> {
    let dim_h = galois_cohomology_dims(sc.ctx, word.len())?;
    Ok(dim_h == 1 && word.iter().all(|a| sc.coords(a)[0]))
}

/// `e_n` on a class of `I^n`, as a bit in `H^n`.
fn e_map(ctx: FieldCtx, n: usize, x: &WittClass) -> Result<bool> {
    if galois_cohomology_dims(ctx, n)? == 0 {
        return Ok(false);
    }
    match n {
        0 => Ok(e0(x) == 1),
        1 => Ok(!e1(x)?.is_trivial()),
        2 => Ok(clifford_invariant(&x.representative().to_gram())?.at(&Place::RealPlace) == -1),
        _ => {
            // Only R reaches here: I^n / I^(n+1) is read off the signature.
            let m = 1i64 << n;
            Ok((x.signature() / m).rem_euclid(2) == 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub n: usize,
    pub dim_k: usize,
    pub dim_graded_w: usize,
    pub dim_h: usize,
    /// Every Steinberg word maps into `I^(n+1)`.
    pub nu_well_defined: bool,
    pub nu_bijective: bool,
    pub eta_bijective: bool,
    pub e_bijective: bool,
    /// `e(nu(w)) = eta(w)` for every generator word.
    pub commutes: bool,
}

impl DegreeReport {
    pub fn dims_match(&self) -> bool {
        self.dim_k == self.dim_graded_w && self.dim_graded_w == self.dim_h
    }

    pub fn isomorphic(&self) -> bool {
        self.dims_match() && self.nu_well_defined && self.nu_bijective && self.eta_bijective && self.e_bijective && self.commutes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleReport {
    pub ctx: FieldCtx,
    pub convention: PfisterConvention,
    pub degrees: Vec<DegreeReport>,
}

impl TriangleReport {
    pub fn isomorphic(&self) -> bool {
        self.degrees.iter().all(DegreeReport::isomorphic)
    }
}

/// All `2^d` elements of a `d`-dimensional quotient, each lifted to a sum of
/// surviving generator words.
fn quotient_elements(space: &F2Space, words: &[Vec<Scalar>]) -> Vec<Vec<Vec<Scalar>>> {
    let free = space.free_columns();
    (0..1usize << free.len())
        .map(|mask| {
            free.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| words[c].clone())
                .collect()
        })
        .collect()
}

fn is_bijection(images: &[Option<usize>], target_size: usize) -> bool {
    if images.len() != target_size || images.iter().any(Option::is_none) {
        return false;
    }
    let mut seen = vec![false; target_size];
    images.iter().flatten().all(|&i| i < target_size && !std::mem::replace(&mut seen[i], true))
}

pub fn triangle_check(ctx: FieldCtx, n_max: usize, conv: PfisterConvention) -> Result<TriangleReport> {
    if ctx == FieldCtx::Rationals {
        return Err(Error::UnsupportedField(ctx.to_string()));
    }
    let sc = SquareClasses::new(ctx)?;
    let mut degrees = Vec::new();
    for n in 0..=n_max {
        let k = milnor_k_mod2(ctx, n)?;
        let piece = graded_witt_piece(ctx, n)?;
        let dim_h = galois_cohomology_dims(ctx, n)?;
        let words = basis_words(&sc, n);

        // a Pfister class only sees the square classes of its slots
        let cache: RefCell<HashMap<Vec<Vec<bool>>, WittClass>> = RefCell::new(HashMap::new());
        let nu = |w: &[Scalar]| -> Result<WittClass> {
            let key: Vec<Vec<bool>> = w.iter().map(|a| sc.coords(a)).collect();
            if let Some(x) = cache.borrow().get(&key) {
                return Ok(x.clone());
            }
            let x = nu_word(ctx, w, conv)?;
            cache.borrow_mut().insert(key, x.clone());
            Ok(x)
        };
        let nu_sum = |terms: &[Vec<Scalar>]| -> Result<WittClass> {
            terms.iter().try_fold(WittClass::zero(ctx), |acc, w| wadd(&acc, &nu(w)?))
        };

        let mut nu_well_defined = true;
        for w in steinberg_words(&sc, n)? {
            let x = nu(&w)?;
            nu_well_defined &= witt::in_ideal_power(&x, n + 1)?;
        }
        // generator words must land in I^n at all
        for w in &words {
            nu_well_defined &= piece.coset(&nu(w)?).is_some();
        }

        let elements = quotient_elements(&k, &words);
        let mut nu_images = Vec::new();
        let mut eta_images = Vec::new();
        for terms in &elements {
            nu_images.push(piece.coset(&nu_sum(terms)?));
            let mut bit = false;
            for w in terms {
                bit ^= eta_word(&sc, w)?;
            }
            eta_images.push(Some(usize::from(bit && dim_h > 0)));
        }
        let nu_bijective = nu_well_defined && is_bijection(&nu_images, piece.size());
        let eta_bijective = is_bijection(&eta_images, 1 << dim_h);

        // e on the graded piece, evaluated on one representative per coset
        let reps: Vec<WittClass> = match ctx {
            FieldCtx::RealQ => (0..2)
                .map(|j| {
                    let s = j * (1usize << n);
                    witt::witt_class(&DiagonalForm::new(ctx, vec![ctx.one(); s]).to_gram())
                })
                .collect::<Result<_>>()?,
            _ => piece.cosets.iter().map(|c| c[0].clone()).collect(),
        };
        let mut e_images = vec![None; piece.size()];
        for x in &reps {
            if let Some(c) = piece.coset(x) {
                e_images[c] = Some(usize::from(e_map(ctx, n, x)?));
            }
        }
        let e_bijective = is_bijection(&e_images, 1 << dim_h);

        let mut commutes = true;
        for w in &words {
            let x = nu(w)?;
            if piece.coset(&x).is_none() {
                commutes = false;
                continue;
            }
            commutes &= e_map(ctx, n, &x)? == eta_word(&sc, w)?;
        }

        degrees.push(DegreeReport {
            n,
            dim_k: k.dimension,
            dim_graded_w: piece.dimension,
            dim_h,
            nu_well_defined,
            nu_bijective,
            eta_bijective,
            e_bijective,
            commutes,
        });
    }
    Ok(TriangleReport {
        ctx,
        convention: conv,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime_field(p).unwrap()
    }

    const R: FieldCtx = FieldCtx::RealQ;

    #[test]
    fn k_theory_examples() {
        let k1 = milnor_k_mod2(fp(5), 1).unwrap();
        assert_eq!(k1.dimension, 1);
        assert_eq!(k1.basis, vec!["{2}".to_string()]);
        assert_eq!(milnor_k_mod2(fp(3), 2).unwrap().dimension, 0);
        for n in 0..6 {
            let k = milnor_k_mod2(R, n).unwrap();
            assert_eq!(k.dimension, 1, "degree {n}");
        }
        assert_eq!(milnor_k_mod2(R, 3).unwrap().basis, vec!["{-1,-1,-1}".to_string()]);
        assert!(matches!(
            milnor_k_mod2(FieldCtx::Rationals, 1),
            Err(Error::InfiniteSquareClassGroup(_))
        ));
    }

    #[test]
    fn steinberg_pairs_sum_to_one() {
        for ctx in [fp(3), fp(7), R] {
            for (a, b) in steinberg_pairs(ctx).unwrap() {
                assert!((&a + &b).is_one());
            }
        }
    }

    #[test]
    fn adjacent_relations_match_full_closure() {
        for ctx in [fp(3), fp(5), fp(7), R] {
            for n in 0..=3 {
                assert_eq!(
                    milnor_k_mod2(ctx, n).unwrap().dimension,
                    milnor_k_mod2_full_closure(ctx, n).unwrap().dimension,
                    "{ctx} degree {n}"
                );
            }
        }
    }

    #[test]
    fn cohomology_table() {
        assert_eq!(galois_cohomology_dims(fp(7), 0).unwrap(), 1);
        assert_eq!(galois_cohomology_dims(fp(7), 1).unwrap(), 1);
        assert_eq!(galois_cohomology_dims(fp(7), 3).unwrap(), 0);
        assert_eq!(galois_cohomology_dims(R, 5).unwrap(), 1);
        assert!(galois_cohomology_dims(FieldCtx::Rationals, 0).is_err());
    }

    #[test]
    fn graded_witt_examples() {
        let dims: Vec<usize> = (0..4).map(|n| graded_witt_quotient(fp(3), n).unwrap().dimension).collect();
        assert_eq!(dims, vec![1, 1, 0, 0]);
        let dims: Vec<usize> = (0..4).map(|n| graded_witt_quotient(R, n).unwrap().dimension).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn triangle_examples() {
        let r = triangle_check(fp(5), 3, PfisterConvention::Standard).unwrap();
        let dims: Vec<(usize, usize, usize)> = r.degrees.iter().map(|d| (d.dim_k, d.dim_graded_w, d.dim_h)).collect();
        assert_eq!(dims, vec![(1, 1, 1), (1, 1, 1), (0, 0, 0), (0, 0, 0)]);
        assert!(r.isomorphic(), "{r:?}");
        let r = triangle_check(R, 4, PfisterConvention::Standard).unwrap();
        assert!(r.isomorphic(), "{r:?}");
        assert!(r.degrees.iter().all(|d| d.dim_k == 1));
    }

    #[test]
    fn literal_convention_fails_over_the_reals() {
        let r = triangle_check(R, 2, PfisterConvention::Literal).unwrap();
        assert!(!r.degrees[1].nu_bijective);
        let r = triangle_check(fp(5), 2, PfisterConvention::Literal).unwrap();
        assert!(r.isomorphic());
    }
}
