// SPDX-License-Identifier: Apache-2.0

//! Lattice-theoretic decisions about rational double points on K3 surfaces:
//! embeddings into the complex K3 lattice `Λ₀` and into the supersingular
//! lattices `Λ_{p,σ}`, and the existence problems `NK(0, R)` and `NK(p, σ, R)`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, gcd, is_prime, jacobi, least_nonresidue, legendre, QMod2Z};
use crate::fqf::{FiniteQuadraticForm, FqfError};
use crate::local::{
    even_lattice_witness, exists_even_lattice, local_invariant_set, LatticeWitness, LocalError, LocalInvariant,
    LocalInvariantSet, SquareClass,
};
use crate::roots::{sigma_fqf, DynkinType, EnumBudget, EnumError, OverlatticeEnumerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum K3Error {
    #[error("p = {0} divides d")]
    PDividesD(u64),
    #[error("Artin invariant {0} outside 1..=10")]
    BadSigma(u32),
    #[error("{0} is not an odd prime")]
    EvenP(u64),
    #[error("p = {0} divides 2·d")]
    PNotCoprime(u64),
    #[error("signature ({0}, {1}) outside t₊ ≤ 1, t₋ ≤ 19")]
    SignatureOutOfRange(usize, usize),
    #[error("rank {0} exceeds {1}")]
    RankTooLarge(u32, u32),
    #[error("2σ = {0} differs from 22 − rank = {1}")]
    NotBoundaryCase(u32, u32),
    #[error("d must be nonzero")]
    ZeroDiscriminant,
    #[error("embedding paths disagree for p = {p}, σ = {sigma}")]
    PathDisagreement { p: u64, sigma: u32 },
    #[error("{0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Fqf(#[from] FqfError),
}

impl From<EnumError> for K3Error {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExceeded(s) => K3Error::BudgetExceeded(s),
            EnumError::Fqf(f) => K3Error::Fqf(f),
        }
    }
}

/// `(p, σ)` naming `Λ_{p,σ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupersingularTarget {
    pub p: u64,
    pub sigma: u32,
}

impl SupersingularTarget {
    pub fn new(p: u64, sigma: u32) -> Result<Self, K3Error> {
        if p < 3 || !is_prime(p) {
            return Err(K3Error::EvenP(p));
        }
        if !(1..=10).contains(&sigma) {
            return Err(K3Error::BadSigma(sigma));
        }
        Ok(Self { p, sigma })
    }
}

fn check_p_coprime(p: u64, d: i64) -> Result<(), K3Error> {
    if d == 0 {
        return Err(K3Error::ZeroDiscriminant);
    }
    if d.rem_euclid(p as i64) == 0 {
        return Err(K3Error::PNotCoprime(p));
    }
    Ok(())
}

/// `((−1)^{σ+1} d / p) = −1`.
pub fn arth(p: u64, sigma: u32, d: i64) -> Result<bool, K3Error> {
    SupersingularTarget::new(p, sigma)?;
    if d == 0 {
        return Err(K3Error::ZeroDiscriminant);
    }
    if d.rem_euclid(p as i64) == 0 {
        return Err(K3Error::PDividesD(p));
    }
    let a = if sigma % 2 == 1 { d } else { -d };
    Ok(legendre(a, p as i64) == -1)
}

fn check_signature(t_plus: usize, t_minus: usize) -> Result<(), K3Error> {
    if t_plus > 1 || t_minus > 19 {
        return Err(K3Error::SignatureOutOfRange(t_plus, t_minus));
    }
    Ok(())
}

/// Whether an even lattice of signature `(t₊, t₋)` with discriminant form
/// `F_M` embeds primitively into `Λ₀`.
pub fn emb_complex(f: &FiniteQuadraticForm, t_plus: usize, t_minus: usize) -> Result<bool, K3Error> {
    Ok(emb_complex_witness(f, t_plus, t_minus)?.is_some())
}

pub fn emb_complex_witness(
    f: &FiniteQuadraticForm,
    t_plus: usize,
    t_minus: usize,
) -> Result<Option<LatticeWitness>, K3Error> {
    check_signature(t_plus, t_minus)?;
    Ok(even_lattice_witness(3 - t_plus, 19 - t_minus, &f.negate())?)
}

/// `(D_{p,σ}, q_{p,σ})`, the discriminant form of `Λ_{p,σ}`.
pub fn lambda_fqf(p: u64, sigma: u32) -> Result<FiniteQuadraticForm, K3Error> {
    SupersingularTarget::new(p, sigma)?;
    let pi = p as i64;
    let q1 = QMod2Z::new(pi + 1, pi);
    let v = least_nonresidue(pi);
    let qv = if v % 2 == 0 { QMod2Z::new(v, pi) } else { QMod2Z::new(v + pi, pi) };
    let mut out = FiniteQuadraticForm::trivial();
    let n = 2 * sigma as usize;
    let twisted = (sigma as u64 * (p - 1)).is_multiple_of(4);
    for i in 0..n {
        let q = if twisted && i == n - 1 { qv } else { q1 };
        out = out.direct_sum(&FiniteQuadraticForm::cyclic(p, q)?);
    }
    Ok(out)
}

/// `L^(p)(n, D_{p,σ}, q_{p,σ})` in closed form.
pub fn lambda_local_set(p: u64, sigma: u32, n: usize) -> Result<LocalInvariantSet, K3Error> {
    SupersingularTarget::new(p, sigma)?;
    let one = LocalInvariant::new(4, SquareClass::square(p));
    let v = LocalInvariant::new(4, SquareClass::nonsquare(p));
    let s = 2 * sigma as usize;
    let members: Vec<LocalInvariant> = if n < s {
        vec![]
    } else if n > s {
        vec![one, v]
    } else if (sigma as u64 * (p - 1)) % 4 == 2 {
        vec![one]
    } else {
        vec![v]
    };
    Ok(LocalInvariantSet::from_members(p, &members)?)
}

/// Generic-path check of `L^(p)` against the closed form.
pub fn lambda_local_set_generic(p: u64, sigma: u32, n: usize) -> Result<LocalInvariantSet, K3Error> {
    Ok(local_invariant_set(p, n, &lambda_fqf(p, sigma)?)?)
}

/// `d_M = (−1)^{t₋} |D_M|`.
pub fn discriminant_of(f: &FiniteQuadraticForm, t_minus: usize) -> i64 {
    let d = f.order() as i64;
    if t_minus % 2 == 1 {
        -d
    } else {
        d
    }
}

/// `Emb(M, Λ_{p,σ})` via the existence test on `D_M ⊕ D_{p,σ}`.
pub fn emb_supersingular_generic(
    f: &FiniteQuadraticForm,
    t_plus: usize,
    t_minus: usize,
    target: SupersingularTarget,
) -> Result<bool, K3Error> {
    check_signature(t_plus, t_minus)?;
    check_p_coprime(target.p, 2 * discriminant_of(f, t_minus))?;
    let sum = f.negate().direct_sum(&lambda_fqf(target.p, target.sigma)?);
    Ok(exists_even_lattice(1 - t_plus, 21 - t_minus, &sum)?)
}

/// `Emb(M, Λ_{p,σ})` via the trichotomy on `2σ` against `22 − r`.
pub fn emb_supersingular_trichotomy(
    f: &FiniteQuadraticForm,
    t_plus: usize,
    t_minus: usize,
    target: SupersingularTarget,
) -> Result<bool, K3Error> {
    check_signature(t_plus, t_minus)?;
    let d = discriminant_of(f, t_minus);
    check_p_coprime(target.p, 2 * d)?;
    let r = (t_plus + t_minus) as u32;
    let s2 = 2 * target.sigma;
    Ok(match s2.cmp(&(22 - r)) {
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Less => emb_complex(f, t_plus, t_minus)?,
        std::cmp::Ordering::Equal => emb_complex(f, t_plus, t_minus)? && arth(target.p, target.sigma, d)?,
    })
}

/// `Emb(M, Λ_{p,σ})`, computed both ways; a disagreement is an error.
pub fn emb_supersingular(
    f: &FiniteQuadraticForm,
    t_plus: usize,
    t_minus: usize,
    target: SupersingularTarget,
) -> Result<bool, K3Error> {
    let a = emb_supersingular_generic(f, t_plus, t_minus, target)?;
    let b = emb_supersingular_trichotomy(f, t_plus, t_minus, target)?;
    if a != b {
        return Err(K3Error::PathDisagreement { p: target.p, sigma: target.sigma });
    }
    Ok(a)
}

/// Glue generators (class vectors per component) and the chosen local invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkWitness {
    pub glue: Vec<Vec<u8>>,
    pub local: Vec<(u64, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NkResult {
    pub verdict: bool,
    pub witness: Option<NkWitness>,
    pub elapsed_ms: u64,
}

pub const MAX_RANK: u32 = 19;

const TABLE1: &str = include_str!("../../data/table1.txt");

/// The reference list of minimal types with `NK(0, R)` false, as shipped with the crate.
pub fn table1_fixture() -> Vec<DynkinType> {
    TABLE1.lines().filter(|l| !l.trim().is_empty()).map(|l| l.parse().expect("fixture type")).collect()
}

fn check_rank(r: &DynkinType, max: u32) -> Result<(), K3Error> {
    if r.rank() > max {
        return Err(K3Error::RankTooLarge(r.rank(), max));
    }
    Ok(())
}

fn witness_of(glue: Vec<Vec<u8>>, w: LatticeWitness) -> NkWitness {
    NkWitness { glue, local: w.choices.iter().map(|(l, t)| (*l, t.to_string())).collect() }
}

/// `NK(0, R)`: some root-free even overlattice of `Σ⁻_R` embeds into `Λ₀`.
pub fn nk0(r: &DynkinType, budget: EnumBudget) -> Result<NkResult, K3Error> {
    let start = Instant::now();
    check_rank(r, MAX_RANK)?;
    let rank = r.rank() as usize;
    let elapsed = || start.elapsed().as_millis() as u64;
    let f = sigma_fqf(r);
    if let Some(w) = emb_complex_witness(&f, 0, rank)? {
        let glue = vec![];
        return Ok(NkResult { verdict: true, witness: Some(witness_of(glue, w)), elapsed_ms: elapsed() });
    }
    let e = OverlatticeEnumerator::new(r, budget)?;
    let mut found: Option<NkWitness> = None;
    let mut err: Option<K3Error> = None;
    let _ = e.for_each(|o| {
        if o.index == 1 {
            return ControlFlow::Continue(());
        }
        let res = e.disc_form(&o.glue).map_err(K3Error::from).and_then(|dm| emb_complex_witness(&dm, 0, rank));
        match res {
            Ok(Some(w)) => {
                found = Some(witness_of(o.glue.generators.clone(), w));
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(x) => {
                err = Some(x);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(x) = err {
        return Err(x);
    }
    Ok(NkResult { verdict: found.is_some(), witness: found, elapsed_ms: elapsed() })
}

/// `d_R = (−1)^r disc(R)`.
pub fn d_r(r: &DynkinType) -> i64 {
    let d = r.disc() as i64;
    if r.rank() % 2 == 1 {
        -d
    } else {
        d
    }
}

fn nk_pre(p: u64, sigma: u32, r: &DynkinType) -> Result<SupersingularTarget, K3Error> {
    let t = SupersingularTarget::new(p, sigma)?;
    check_rank(r, MAX_RANK)?;
    check_p_coprime(p, 2 * d_r(r))?;
    Ok(t)
}

/// `NK(p, σ, R)` by the trichotomy on `2σ` against `22 − r`.
pub fn nk(p: u64, sigma: u32, r: &DynkinType, budget: EnumBudget) -> Result<NkResult, K3Error> {
    nk_with(p, sigma, r, |t| nk0(t, budget))
}

/// [`nk`] with a caller-supplied decision for `NK(0, R)`.
pub fn nk_with<E, F>(p: u64, sigma: u32, r: &DynkinType, nk0_of: F) -> Result<NkResult, E>
where
    E: From<K3Error>,
    F: FnOnce(&DynkinType) -> Result<NkResult, E>,
{
    let start = Instant::now();
    nk_pre(p, sigma, r)?;
    let no = NkResult { verdict: false, witness: None, elapsed_ms: 0 };
    let res = match (2 * sigma).cmp(&(22 - r.rank())) {
        std::cmp::Ordering::Greater => no,
        std::cmp::Ordering::Less => nk0_of(r)?,
        std::cmp::Ordering::Equal if arth(p, sigma, d_r(r))? => nk0_of(r)?,
        std::cmp::Ordering::Equal => no,
    };
    Ok(NkResult { elapsed_ms: start.elapsed().as_millis() as u64, ..res })
}

/// `NK(p, σ, R)` by searching `E(Σ⁻_R)` for an overlattice embedding into `Λ_{p,σ}`.
pub fn nk_direct(p: u64, sigma: u32, r: &DynkinType, budget: EnumBudget) -> Result<NkResult, K3Error> {
    let start = Instant::now();
    let target = nk_pre(p, sigma, r)?;
    let rank = r.rank() as usize;
    let e = OverlatticeEnumerator::new(r, budget)?;
    let mut found: Option<NkWitness> = None;
    let mut err: Option<K3Error> = None;
    let _ = e.for_each(|o| {
        let res = e.disc_form(&o.glue).map_err(K3Error::from).and_then(|dm| {
            check_signature(0, rank)?;
            let sum = dm.negate().direct_sum(&lambda_fqf(target.p, target.sigma)?);
            Ok(even_lattice_witness(1, 21 - rank, &sum)?)
        });
        match res {
            Ok(Some(w)) => {
                found = Some(witness_of(o.glue.generators.clone(), w));
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(x) => {
                err = Some(x);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(x) = err {
        return Err(x);
    }
    Ok(NkResult { verdict: found.is_some(), witness: found, elapsed_ms: start.elapsed().as_millis() as u64 })
}

/// Residues of `p mod 4|d|` for which `Arth(p, σ, d)` holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueSet {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl ResidueSet {
    /// The set read modulo `m`, where `m` divides or is a multiple of the modulus.
    pub fn reduce(&self, m: u64) -> BTreeSet<u64> {
        if m.is_multiple_of(self.modulus) {
            (0..m).filter(|x| self.residues.binary_search(&(x % self.modulus)).is_ok()).collect()
        } else {
            assert_eq!(self.modulus % m, 0, "incompatible modulus");
            self.residues.iter().map(|r| r % m).collect()
        }
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        self.residues.binary_search(&(p % self.modulus)).is_ok()
    }
}

/// The Kronecker character `(a / ·)` at an odd residue `n` coprime to `a`,
/// via reciprocity; depends on `n mod 4|a|` only.
fn kronecker_char(a: i64, n: u64) -> i32 {
    let mut s = 1;
    let mut m = a.unsigned_abs();
    if a < 0 && n % 4 == 3 {
        s = -s;
    }
    while m.is_multiple_of(2) {
        m /= 2;
        if n % 8 == 3 || n % 8 == 5 {
            s = -s;
        }
    }
    if m > 1 {
        if m % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        s *= jacobi((n % m) as i64, m as i64);
    }
    s
}

/// `T_{σ,d_R}` for a boundary-rank type (`2σ = 22 − rank R`).
pub fn residue_set(r: &DynkinType, sigma: u32) -> Result<ResidueSet, K3Error> {
    if !(1..=10).contains(&sigma) {
        return Err(K3Error::BadSigma(sigma));
    }
    if 2 * sigma != 22 - r.rank().min(22) {
        return Err(K3Error::NotBoundaryCase(2 * sigma, 22 - r.rank().min(22)));
    }
    residue_set_of(d_r(r), sigma)
}

pub fn residue_set_of(d: i64, sigma: u32) -> Result<ResidueSet, K3Error> {
    if d == 0 {
        return Err(K3Error::ZeroDiscriminant);
    }
    let a = if sigma % 2 == 1 { d } else { -d };
    let modulus = 4 * d.unsigned_abs();
    let residues = (1..modulus).filter(|&n| gcd(n as i64, modulus as i64) == 1 && kronecker_char(a, n) == -1).collect();
    Ok(ResidueSet { modulus, residues })
}

/// Progress and outcome of a minimal-false scan.
#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    /// Types with `nk0` false whose children are all true, by ascending rank.
    pub minimal: Vec<DynkinType>,
    /// Number of types decided by a direct `nk0` call.
    pub evaluated: usize,
}

/// Minimal types with `NK(0, R)` false among all types of rank at most `max_rank`.
///
/// A type with a false child is false by monotonicity and is skipped. `known`
/// supplies verdicts from a cache and `record` receives every fresh verdict.
pub fn table1_scan<K, W>(max_rank: u32, budget: EnumBudget, known: K, record: W) -> Result<ScanReport, K3Error>
where
    K: Fn(&DynkinType) -> Option<bool> + Sync,
    W: Fn(&DynkinType, &NkResult) + Sync,
{
    if max_rank > MAX_RANK {
        return Err(K3Error::RankTooLarge(max_rank, MAX_RANK));
    }
    let types = crate::roots::enumerate_dynkin_types(max_rank);
    let mut falses: BTreeSet<DynkinType> = BTreeSet::new();
    let mut report = ScanReport::default();
    let mut rank = 0;
    let mut start = 0;
    while start < types.len() {
        rank += 1;
        let end = start + types[start..].iter().take_while(|t| t.rank() == rank).count();
        let level = &types[start..end];
        let todo: Vec<&DynkinType> =
            level.iter().filter(|t| t.children().iter().all(|c| !falses.contains(c))).collect();
        let verdicts: Vec<Result<(bool, bool), K3Error>> = todo
            .par_iter()
            .map(|t| match known(t) {
                Some(v) => Ok((v, false)),
                None => {
                    let res = nk0(t, budget)?;
                    record(t, &res);
                    Ok((res.verdict, true))
                }
            })
            .collect();
        let todo_set: BTreeSet<&DynkinType> = todo.iter().copied().collect();
        for (t, v) in todo.iter().zip(verdicts) {
            let (v, fresh) = v?;
            report.evaluated += fresh as usize;
            if !v {
                falses.insert((*t).clone());
                report.minimal.push((*t).clone());
            }
        }
        for t in level {
            if !todo_set.contains(t) {
                falses.insert(t.clone());
            }
        }
        start = end;
    }
    Ok(report)
}

/// `NK(0, R)` read off from a list of minimal false types.
pub fn nk0_via_table1(r: &DynkinType, minimal: &[DynkinType]) -> bool {
    !minimal.iter().any(|m| r.s_contains(m))
}

/// Counts `#{h : k h = 0}` for every `k` dividing the order; these counts
/// determine a finite abelian group.
fn torsion_profile(orders: &[u64], n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).map(|k| orders.iter().filter(|&&o| k % o == 0).count() as u64).collect()
}

fn abelian_profile(cyclic: &[u64]) -> (u64, Vec<u64>) {
    let n: u64 = cyclic.iter().product();
    let mut orders = vec![1u64];
    for &c in cyclic {
        let mut next = Vec::with_capacity(orders.len() * c as usize);
        for &o in &orders {
            for j in 0..c {
                let oj = c / gcd(j as i64, c as i64) as u64;
                next.push(o / gcd(o as i64, oj as i64) as u64 * oj);
            }
        }
        orders = next;
    }
    (n, torsion_profile(&orders, n))
}

/// Whether `Σ⁻_R` has a root-free overlattice `M` with `M/Σ⁻_R ≅ MW` whose
/// discriminant form admits an even lattice of signature `(2, 18 − r)`.
/// `mw` lists cyclic factor orders; `[]` is the trivial group.
pub fn elliptic_pair(r: &DynkinType, mw: &[u64], budget: EnumBudget) -> Result<bool, K3Error> {
    check_rank(r, 18)?;
    let rank = r.rank() as usize;
    let (n, profile) = abelian_profile(mw);
    let e = OverlatticeEnumerator::new(r, budget)?;
    let rs = e.root_system();
    let mut found = false;
    let mut err = None;
    let _ = e.for_each(|o| {
        if o.index != n {
            return ControlFlow::Continue(());
        }
        let orders: Vec<u64> = o.glue.elements.iter().map(|x| rs.fqf().element_order(&rs.to_fqf(x))).collect();
        if torsion_profile(&orders, n) != profile {
            return ControlFlow::Continue(());
        }
        match e.disc_form(&o.glue) {
            Ok(dm) => match exists_even_lattice(2, 18 - rank, &dm.negate()) {
                Ok(true) => {
                    found = true;
                    ControlFlow::Break(())
                }
                Ok(false) => ControlFlow::Continue(()),
                Err(x) => {
                    err = Some(K3Error::from(x));
                    ControlFlow::Break(())
                }
            },
            Err(x) => {
                err = Some(K3Error::from(x));
                ControlFlow::Break(())
            }
        }
    })?;
    match err {
        Some(x) => Err(x),
        None => Ok(found),
    }
}

/// Necessary condition for a singular K3 surface with transcendental
/// discriminant `disc_T` to reduce to a supersingular surface mod `p`.
pub fn ss_reduction_possible(disc_t: u64, p: u64) -> Result<bool, K3Error> {
    if p < 3 || !is_prime(p) {
        return Err(K3Error::EvenP(p));
    }
    if disc_t == 0 {
        return Err(K3Error::ZeroDiscriminant);
    }
    if disc_t.is_multiple_of(p) {
        return Err(K3Error::PNotCoprime(p));
    }
    Ok(legendre(-((disc_t % p) as i64), p as i64) == -1)
}

/// Primes below `bound` coprime to `2d`.
pub fn primes_coprime_to(d: i64, bound: u64) -> Vec<u64> {
    let bad: Vec<u64> = factorize(d.unsigned_abs()).into_iter().map(|(q, _)| q).collect();
    (3..bound).filter(|&p| is_prime(p) && !bad.contains(&p)).collect()
}
