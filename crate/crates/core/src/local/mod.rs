// SPDX-License-Identifier: Apache-2.0

//! Local invariants `[σ, ρ] ∈ Z/8 × Z_l^×/(Z_l^×)^2` of even `Z_l`-lattices and
//! the global existence test for even lattices with a given discriminant form.

pub mod jordan;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{is_prime, legendre, split_prime};
use crate::fqf::{FiniteQuadraticForm, FqfError, Piece};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("{0} is not a unit at {1}")]
    NotAUnit(i64, u64),
    #[error("invariants belong to different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("numerator {0} is not prime to {1}")]
    BadNumerator(i64, u64),
    #[error("even-type form needs odd v, got {0}")]
    DegenerateEvenType(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse local invariant {0:?}")]
    Parse(String),
    #[error(transparent)]
    Fqf(#[from] FqfError),
}

/// A class in `Z_l^× / (Z_l^×)^2`.
///
/// Odd `l`: square or the (symbolic) non-square class. `l = 2`: a residue in
/// `{1, 3, 5, 7}` mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    l: u64,
    idx: u8,
}

impl SquareClass {
    pub fn square(l: u64) -> Self {
        Self { l, idx: 0 }
    }

    pub fn nonsquare(l: u64) -> Self {
        assert!(l != 2, "use two_adic for l = 2");
        Self { l, idx: 1 }
    }

    /// The class of an odd residue mod 8.
    pub fn two_adic(r: i64) -> Self {
        let r = r.rem_euclid(8);
        assert!(r % 2 == 1, "2-adic unit class must be odd");
        Self { l: 2, idx: ((r - 1) / 2) as u8 }
    }

    pub fn prime(self) -> u64 {
        self.l
    }

    pub fn is_square(self) -> bool {
        self.idx == 0
    }

    /// For `l = 2`, the residue in `{1, 3, 5, 7}`.
    pub fn residue(self) -> Option<u8> {
        (self.l == 2).then_some(2 * self.idx + 1)
    }

    fn index(self) -> u8 {
        self.idx
    }

    fn from_index(l: u64, idx: u8) -> Self {
        Self { l, idx }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Result<Self, LocalError> {
        if self.l != other.l {
            return Err(LocalError::PrimeMismatch(self.l, other.l));
        }
        Ok(self.mul_same(other))
    }

    fn mul_same(self, other: Self) -> Self {
        if self.l == 2 {
            let r = (2 * self.idx as i64 + 1) * (2 * other.idx as i64 + 1);
            Self::two_adic(r)
        } else {
            Self { l: self.l, idx: self.idx ^ other.idx }
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.l, self.idx) {
            (2, i) => write!(f, "{}", 2 * i + 1),
            (_, 0) => write!(f, "1"),
            _ => write!(f, "n"),
        }
    }
}

/// Class of the unit `u` (with `l ∤ u`).
pub fn square_class_of(l: u64, u: i64) -> Result<SquareClass, LocalError> {
    if !is_prime(l) {
        return Err(LocalError::NotPrime(l));
    }
    if u == 0 || u.rem_euclid(l as i64) == 0 {
        return Err(LocalError::NotAUnit(u, l));
    }
    Ok(if l == 2 {
        SquareClass::two_adic(u)
    } else if legendre(u, l as i64) == 1 {
        SquareClass::square(l)
    } else {
        SquareClass::nonsquare(l)
    })
}

/// `[σ, ρ]`: an `l`-excess and a reduced discriminant class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalInvariant {
    pub sigma: u8,
    pub rho: SquareClass,
}

impl LocalInvariant {
    pub fn new(sigma: i64, rho: SquareClass) -> Self {
        Self { sigma: sigma.rem_euclid(8) as u8, rho }
    }

    pub fn prime(&self) -> u64 {
        self.rho.l
    }

    fn bit(&self) -> u32 {
        self.sigma as u32 * 4 + self.rho.index() as u32
    }

    /// Parses `"[σ,ρ]"` for the given prime.
    pub fn parse(l: u64, s: &str) -> Result<Self, LocalError> {
        let err = || LocalError::Parse(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let sigma: i64 = a.trim().parse().map_err(|_| err())?;
        let rho = match (l, b.trim()) {
            (2, r) => {
                let r: i64 = r.parse().map_err(|_| err())?;
                if ![1, 3, 5, 7].contains(&r) {
                    return Err(err());
                }
                SquareClass::two_adic(r)
            }
            (_, "1") => SquareClass::square(l),
            (_, "n") => SquareClass::nonsquare(l),
            _ => return Err(err()),
        };
        Ok(Self::new(sigma, rho))
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.sigma, self.rho)
    }
}

impl Serialize for LocalInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `τ * τ' = [σ + σ', ρ ρ']`.
pub fn star(a: LocalInvariant, b: LocalInvariant) -> Result<LocalInvariant, LocalError> {
    Ok(LocalInvariant::new(a.sigma as i64 + b.sigma as i64, a.rho.mul(b.rho)?))
}

/// A set of local invariants at one prime, stored as a 32-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalInvariantSet {
    l: u64,
    bits: u32,
}

impl LocalInvariantSet {
    pub fn empty(l: u64) -> Self {
        Self { l, bits: 0 }
    }

    pub fn from_members(l: u64, members: &[LocalInvariant]) -> Result<Self, LocalError> {
        let mut s = Self::empty(l);
        for m in members {
            s.insert(*m)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, x: LocalInvariant) -> Result<(), LocalError> {
        if x.prime() != self.l {
            return Err(LocalError::PrimeMismatch(self.l, x.prime()));
        }
        self.bits |= 1 << x.bit();
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, x: &LocalInvariant) -> bool {
        x.prime() == self.l && self.bits & (1 << x.bit()) != 0
    }

    /// Members in canonical order (by `σ`, then `ρ`).
    pub fn members(&self) -> Vec<LocalInvariant> {
        (0..32)
            .filter(|b| self.bits & (1 << b) != 0)
            .map(|b| LocalInvariant { sigma: (b / 4) as u8, rho: SquareClass::from_index(self.l, (b % 4) as u8) })
            .collect()
    }

    /// Pointwise star product.
    pub fn star(&self, other: &Self) -> Result<Self, LocalError> {
        if self.l != other.l {
            return Err(LocalError::PrimeMismatch(self.l, other.l));
        }
        let mut out = Self::empty(self.l);
        for a in self.members() {
            for b in other.members() {
                let c = LocalInvariant::new(a.sigma as i64 + b.sigma as i64, a.rho.mul_same(b.rho));
                out.bits |= 1 << c.bit();
            }
        }
        Ok(out)
    }
}

impl fmt::Display for LocalInvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

impl Serialize for LocalInvariantSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.members().iter().map(|m| m.to_string()))
    }
}

fn inv(sigma: i64, rho: SquareClass) -> LocalInvariant {
    LocalInvariant::new(sigma, rho)
}

fn set_of(l: u64, members: &[LocalInvariant]) -> LocalInvariantSet {
    LocalInvariantSet::from_members(l, members).expect("same prime")
}

/// Invariants of even unimodular `Z_l`-lattices of rank `n`.
pub fn local_set_unimodular(l: u64, n: usize) -> LocalInvariantSet {
    let n8 = (n % 8) as i64;
    if n == 0 {
        let one = if l == 2 { SquareClass::two_adic(1) } else { SquareClass::square(l) };
        return set_of(l, &[inv(0, one)]);
    }
    if l != 2 {
        return set_of(l, &[inv(0, SquareClass::square(l)), inv(0, SquareClass::nonsquare(l))]);
    }
    match n % 4 {
        0 => set_of(2, &[inv(n8, SquareClass::two_adic(1)), inv(n8, SquareClass::two_adic(5))]),
        2 => set_of(2, &[inv(n8, SquareClass::two_adic(3)), inv(n8, SquareClass::two_adic(7))]),
        _ => LocalInvariantSet::empty(2),
    }
}

/// Invariants of rank-one lattices whose discriminant form is
/// `(Z/l^ν, q(γ) = a/l^ν)`.
pub fn local_set_cyclic(l: u64, nu: u32, a: i64) -> Result<LocalInvariantSet, LocalError> {
    assert!(nu >= 1, "cyclic piece needs ν ≥ 1");
    if a.rem_euclid(l as i64) == 0 {
        return Err(LocalError::BadNumerator(a, l));
    }
    if l != 2 {
        let lnu = (l as i64).pow(nu) % 8;
        let m = if legendre(a, l as i64) == 1 {
            inv(lnu - 1, SquareClass::square(l))
        } else if nu.is_multiple_of(2) {
            inv(lnu - 1, SquareClass::nonsquare(l))
        } else {
            inv(lnu + 3, SquareClass::nonsquare(l))
        };
        return Ok(set_of(l, &[m]));
    }
    let a8 = a.rem_euclid(8);
    let c = SquareClass::two_adic;
    Ok(if nu == 1 {
        if a.rem_euclid(4) == 1 {
            set_of(2, &[inv(0, c(1)), inv(0, c(5))])
        } else {
            set_of(2, &[inv(2, c(3)), inv(2, c(7))])
        }
    } else if nu.is_multiple_of(2) || a8 == 1 || a8 == 7 {
        set_of(2, &[inv(1 - a8, c(a8))])
    } else {
        set_of(2, &[inv(5 - a8, c(a8))])
    })
}

/// Invariants of rank-two lattices `2^ν U` / `2^ν V` with the given even-type data.
pub fn local_set_even_type(nu: u32, u: u64, v: u64, w: u64) -> Result<LocalInvariantSet, LocalError> {
    if v.is_multiple_of(2) {
        return Err(LocalError::DegenerateEvenType(v));
    }
    let c = SquareClass::two_adic;
    Ok(if (u * w).is_multiple_of(2) {
        set_of(2, &[inv(2, c(7))])
    } else if nu.is_multiple_of(2) {
        set_of(2, &[inv(2, c(3))])
    } else {
        set_of(2, &[inv(6, c(3))])
    })
}

fn piece_set(p: &Piece) -> Result<LocalInvariantSet, LocalError> {
    match *p {
        // q(γ) has denominator exactly l^ν, so its numerator over l^ν is `a`
        Piece::Cyclic { l, nu, q } => local_set_cyclic(l, nu, q.scaled_num(l.pow(nu) as i64)),
        Piece::EvenType { nu, u, v, w } => local_set_even_type(nu, u, v, w),
    }
}

/// `L^(l)(n, D, q)` for a form homogeneous at `l`.
pub fn local_invariant_set(l: u64, n: usize, form: &FiniteQuadraticForm) -> Result<LocalInvariantSet, LocalError> {
    if !is_prime(l) {
        return Err(LocalError::NotPrime(l));
    }
    if let Some(p) = form.homogeneous_prime() {
        if p != l {
            return Err(LocalError::PrimeMismatch(l, p));
        }
    }
    let leng = form.leng();
    if n < leng {
        return Ok(LocalInvariantSet::empty(l));
    }
    let mut acc = local_set_unimodular(l, n - leng);
    for p in form.decompose_cyclic_even()? {
        if acc.is_empty() {
            break;
        }
        acc = acc.star(&piece_set(&p)?)?;
    }
    Ok(acc)
}

/// The class of `d / l^{ord_l d}` for `d = sign * m` where `m = Π l^e`.
fn unit_part_class(l: u64, negative: bool, factors: &[(u64, u32)]) -> SquareClass {
    if l == 2 {
        let mut r: i64 = if negative { -1 } else { 1 };
        for &(p, e) in factors {
            if p != 2 {
                for _ in 0..e {
                    r = (r * (p % 8) as i64).rem_euclid(8);
                }
            }
        }
        SquareClass::two_adic(r)
    } else {
        let mut s: i32 = if negative { legendre(-1, l as i64) } else { 1 };
        for &(p, e) in factors {
            if p != l && e % 2 == 1 {
                s *= legendre(p as i64, l as i64);
            }
        }
        if s == 1 {
            SquareClass::square(l)
        } else {
            SquareClass::nonsquare(l)
        }
    }
}

/// Witness of [`exists_even_lattice`]: one invariant per prime dividing `2|D|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeWitness {
    pub choices: Vec<(u64, LocalInvariant)>,
}

impl fmt::Display for LatticeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.choices.iter().map(|(l, t)| format!("{l}:{t}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Decides whether an even lattice of signature `(s₊, s₋)` with discriminant
/// form `F` exists, returning the chosen local invariants when it does.
pub fn even_lattice_witness(
    s_plus: usize,
    s_minus: usize,
    form: &FiniteQuadraticForm,
) -> Result<Option<LatticeWitness>, LocalError> {
    let n = s_plus + s_minus;
    if n == 0 {
        return Ok(form.is_trivial().then(|| LatticeWitness { choices: vec![] }));
    }
    let mut primes = form.primes();
    if !primes.contains(&2) {
        primes.insert(0, 2);
    }
    let factors: Vec<(u64, u32)> = primes
        .iter()
        .map(|&l| (l, form.l_part(l).order_multiset().iter().map(|&o| split_prime(o as i64, l as i64).0).sum()))
        .filter(|&(_, e)| e > 0)
        .collect();
    let negative = s_minus % 2 == 1;
    // reachable[i][s]: a choice at primes[..i] summing to s mod 8
    let mut options: Vec<Vec<LocalInvariant>> = Vec::with_capacity(primes.len());
    for &l in &primes {
        let set = local_invariant_set(l, n, &form.l_part(l))?;
        let rho = unit_part_class(l, negative, &factors);
        let opts: Vec<_> = set.members().into_iter().filter(|m| m.rho == rho).collect();
        if opts.is_empty() {
            return Ok(None);
        }
        options.push(opts);
    }
    let target = (n as i64 - s_plus as i64 + s_minus as i64).rem_euclid(8) as usize;
    let mut reach: Vec<[Option<(usize, usize)>; 8]> = vec![[None; 8]; primes.len() + 1];
    reach[0][0] = Some((usize::MAX, usize::MAX));
    for i in 0..primes.len() {
        for s in 0..8 {
            if reach[i][s].is_none() {
                continue;
            }
            for (k, m) in options[i].iter().enumerate() {
                let t = (s + m.sigma as usize) % 8;
                if reach[i + 1][t].is_none() {
                    reach[i + 1][t] = Some((s, k));
                }
            }
        }
    }
    if reach[primes.len()][target].is_none() {
        return Ok(None);
    }
    let mut choices = Vec::with_capacity(primes.len());
    let mut s = target;
    for i in (0..primes.len()).rev() {
        let (prev, k) = reach[i + 1][s].unwrap();
        choices.push((primes[i], options[i][k]));
        s = prev;
    }
    choices.reverse();
    Ok(Some(LatticeWitness { choices }))
}

pub fn exists_even_lattice(s_plus: usize, s_minus: usize, form: &FiniteQuadraticForm) -> Result<bool, LocalError> {
    Ok(even_lattice_witness(s_plus, s_minus, form)?.is_some())
}
