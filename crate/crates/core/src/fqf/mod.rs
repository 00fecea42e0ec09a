// SPDX-License-Identifier: Apache-2.0

//! Finite quadratic forms `(D, q)` presented by prime-power cyclic generators.
//!
//! A form stores the order of each generator, `q(g_i) ∈ Q/2Z` and the Gram
//! matrix `b(g_i, g_j) ∈ Q/Z`. Subgroup arithmetic on an `l`-part is done by
//! Smith reduction over `Z/l^E` (see [`smith`]), so nothing here needs to list
//! the elements of a large group.

pub(crate) mod smith;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, lcm, mod_inverse, BMod1Z, QMod2Z};
use smith::{LocalGroup, LocalRing};

/// Default cap on explicitly enumerated subgroups.
pub const DEFAULT_SUBGROUP_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FqfError {
    #[error("degenerate bilinear form")]
    DegenerateForm,
    #[error("b(g,g) differs from q(g) mod 1 for generator {0}")]
    InconsistentQB(usize),
    #[error("value incompatible with the order of generator {0}")]
    BadDenominator(usize),
    #[error("generator order {0} is not a prime power > 1")]
    BadOrder(u64),
    #[error("element has {got} coordinates, form has {expected} generators")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subgroup exceeds the enumeration cap of {0} elements")]
    SubgroupTooLarge(usize),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("form is not homogeneous at a single prime")]
    MixedPrimes,
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

/// An element, as coefficients of the generators reduced mod their orders.
pub type FqfElement = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    primes: Vec<u64>,
    q: Vec<QMod2Z>,
    b: Vec<Vec<BMod1Z>>,
}

fn prime_of(order: u64) -> Option<u64> {
    let f = factorize(order);
    (f.len() == 1).then(|| f[0].0)
}

impl FiniteQuadraticForm {
    /// Validating constructor.
    pub fn new(orders: Vec<u64>, q: Vec<QMod2Z>, b: Vec<Vec<BMod1Z>>) -> Result<Self, FqfError> {
        let k = orders.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(FqfError::Malformed("q/b dimensions do not match orders".into()));
        }
        let mut primes = Vec::with_capacity(k);
        for &o in &orders {
            primes.push(prime_of(o).ok_or(FqfError::BadOrder(o))?);
        }
        for i in 0..k {
            for j in 0..k {
                if b[i][j] != b[j][i] {
                    return Err(FqfError::Malformed(format!("b not symmetric at ({i},{j})")));
                }
                if !b[i][j].times(orders[i] as i64).is_zero() {
                    return Err(FqfError::BadDenominator(i));
                }
            }
            let n = orders[i] as i64;
            if !q[i].times(n).times(n).is_zero() {
                return Err(FqfError::BadDenominator(i));
            }
            if q[i].to_b() != b[i][i] {
                return Err(FqfError::InconsistentQB(i));
            }
        }
        let f = Self { orders, primes, q, b };
        if !f.is_nondegenerate() {
            return Err(FqfError::DegenerateForm);
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(orders: Vec<u64>, q: Vec<QMod2Z>, b: Vec<Vec<BMod1Z>>) -> Self {
        let primes = orders.iter().map(|&o| prime_of(o).expect("prime-power order")).collect();
        Self { orders, primes, q, b }
    }

    pub fn trivial() -> Self {
        Self { orders: vec![], primes: vec![], q: vec![], b: vec![] }
    }

    /// Cyclic form `(Z/order, q(γ) = q)`.
    pub fn cyclic(order: u64, q: QMod2Z) -> Result<Self, FqfError> {
        Self::new(vec![order], vec![q], vec![vec![q.to_b()]])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn q_values(&self) -> &[QMod2Z] {
        &self.q
    }

    pub fn b_matrix(&self) -> &[Vec<BMod1Z>] {
        &self.b
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// `|D|`.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Distinct primes dividing `|D|`, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut p = self.primes.clone();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Minimal number of generators of `D`.
    pub fn leng(&self) -> usize {
        let mut count: BTreeMap<u64, usize> = BTreeMap::new();
        for &p in &self.primes {
            *count.entry(p).or_default() += 1;
        }
        count.values().copied().max().unwrap_or(0)
    }

    /// Multiset of generator orders, sorted.
    pub fn order_multiset(&self) -> Vec<u64> {
        let mut o = self.orders.clone();
        o.sort_unstable();
        o
    }

    fn check_dim(&self, x: &[u64]) -> Result<(), FqfError> {
        if x.len() != self.orders.len() {
            return Err(FqfError::DimensionMismatch { expected: self.orders.len(), got: x.len() });
        }
        Ok(())
    }

    pub fn zero(&self) -> FqfElement {
        vec![0; self.orders.len()]
    }

    pub fn basis_element(&self, i: usize) -> FqfElement {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> FqfElement {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), n)| (a + b) % n).collect()
    }

    pub fn scale(&self, k: i64, x: &[u64]) -> FqfElement {
        x.iter().zip(&self.orders).map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64).collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &n)| n / crate::arith::gcd(a as i64, n as i64) as u64)
            .fold(1, |acc, o| lcm(acc as i64, o as i64) as u64)
    }

    pub fn eval_q(&self, x: &[u64]) -> Result<QMod2Z, FqfError> {
        self.check_dim(x)?;
        Ok(self.q_of(x))
    }

    pub fn eval_b(&self, x: &[u64], y: &[u64]) -> Result<BMod1Z, FqfError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.b_of(x, y))
    }

    pub(crate) fn q_of(&self, x: &[u64]) -> QMod2Z {
        let mut acc = QMod2Z::ZERO;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i64;
            acc = acc + self.q[i].times(xi * xi);
            for j in (i + 1)..x.len() {
                if x[j] != 0 && !self.b[i][j].is_zero() {
                    acc = acc + QMod2Z::twice(self.b[i][j].times(xi * x[j] as i64));
                }
            }
        }
        acc
    }

    pub(crate) fn b_of(&self, x: &[u64], y: &[u64]) -> BMod1Z {
        let mut acc = BMod1Z::ZERO;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 && !self.b[i][j].is_zero() {
                    acc = acc + self.b[i][j].times(x[i] as i64 * y[j] as i64);
                }
            }
        }
        acc
    }

    /// Block-orthogonal concatenation.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let k1 = self.orders.len();
        let k = k1 + other.orders.len();
        let mut b = vec![vec![BMod1Z::ZERO; k]; k];
        for i in 0..k1 {
            b[i][..k1].copy_from_slice(&self.b[i]);
        }
        for i in 0..other.orders.len() {
            b[k1 + i][k1..].copy_from_slice(&other.b[i]);
        }
        Self {
            orders: [self.orders.clone(), other.orders.clone()].concat(),
            primes: [self.primes.clone(), other.primes.clone()].concat(),
            q: [self.q.clone(), other.q.clone()].concat(),
            b,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            orders: self.orders.clone(),
            primes: self.primes.clone(),
            q: self.q.iter().map(|&v| -v).collect(),
            b: self.b.iter().map(|r| r.iter().map(|&v| -v).collect()).collect(),
        }
    }

    /// Restriction to a subset of generators (assumed orthogonal to the rest).
    fn restrict(&self, idx: &[usize]) -> Self {
        Self {
            orders: idx.iter().map(|&i| self.orders[i]).collect(),
            primes: idx.iter().map(|&i| self.primes[i]).collect(),
            q: idx.iter().map(|&i| self.q[i]).collect(),
            b: idx.iter().map(|&i| idx.iter().map(|&j| self.b[i][j]).collect()).collect(),
        }
    }

    fn indices_at(&self, l: u64) -> Vec<usize> {
        (0..self.orders.len()).filter(|&i| self.primes[i] == l).collect()
    }

    /// The `l`-primary part `(D_l, q_l)`.
    pub fn l_part(&self, l: u64) -> Self {
        self.restrict(&self.indices_at(l))
    }

    /// Projects an element onto the `l`-part coordinates.
    pub fn project(&self, l: u64, x: &[u64]) -> FqfElement {
        self.indices_at(l).into_iter().map(|i| x[i]).collect()
    }

    /// Whether every generator has the same prime.
    pub fn homogeneous_prime(&self) -> Option<u64> {
        let p = self.primes();
        (p.len() == 1).then(|| p[0])
    }

    fn is_nondegenerate(&self) -> bool {
        self.primes().into_iter().all(|l| {
            let part = self.l_part(l);
            let lf = LocalForm::new(&part);
            let all: Vec<_> = (0..part.num_generators()).map(|i| part.basis_element(i)).collect();
            let perp = lf.perp(&all);
            lf.group.span(&perp).exps.is_empty()
        })
    }

    /// The subgroup generated by `generators`, with its elements listed.
    pub fn subgroup_span(&self, generators: &[FqfElement]) -> Result<Subgroup, FqfError> {
        self.subgroup_span_capped(generators, DEFAULT_SUBGROUP_CAP)
    }

    pub fn subgroup_span_capped(&self, generators: &[FqfElement], cap: usize) -> Result<Subgroup, FqfError> {
        for g in generators {
            self.check_dim(g)?;
        }
        let mut elements = vec![self.zero()];
        let mut seen: HashSet<FqfElement> = elements.iter().cloned().collect();
        for g in generators {
            if seen.contains(g) {
                continue;
            }
            // close under adding multiples of g
            let base = elements.clone();
            let mut mult = g.clone();
            while !seen.contains(&mult) {
                for h in &base {
                    let s = self.add(h, &mult);
                    if seen.insert(s.clone()) {
                        elements.push(s);
                        if elements.len() > cap {
                            return Err(FqfError::SubgroupTooLarge(cap));
                        }
                    }
                }
                mult = self.add(&mult, g);
            }
        }
        Ok(Subgroup { generators: generators.to_vec(), elements })
    }

    /// `q` vanishes on all of `H` (checked on generators and their pairings).
    pub fn is_isotropic(&self, h: &Subgroup) -> bool {
        self.gens_isotropic(&h.generators)
    }

    pub(crate) fn gens_isotropic(&self, gens: &[FqfElement]) -> bool {
        gens.iter()
            .enumerate()
            .all(|(i, g)| self.q_of(g).is_zero() && gens[i + 1..].iter().all(|h| self.b_of(g, h).is_zero()))
    }

    /// Generators of `H^⊥`.
    pub fn perp_generators(&self, h_gens: &[FqfElement]) -> Vec<FqfElement> {
        let mut out = Vec::new();
        for l in self.primes() {
            let idx = self.indices_at(l);
            let part = self.restrict(&idx);
            let lf = LocalForm::new(&part);
            let hl: Vec<_> = h_gens.iter().map(|g| idx.iter().map(|&i| g[i]).collect()).collect();
            for x in lf.perp(&hl) {
                let mut full = self.zero();
                for (t, &i) in idx.iter().enumerate() {
                    full[i] = x[t];
                }
                out.push(full);
            }
        }
        out
    }

    /// `H^⊥ = {x : b(x, h) = 0 for all h ∈ H}`.
    pub fn orthogonal_complement(&self, h: &Subgroup) -> Result<Subgroup, FqfError> {
        let gens = self.perp_generators(&h.generators);
        self.subgroup_span(&gens)
    }

    /// The induced form on `H^⊥ / H`.
    pub fn quotient_form(&self, h: &Subgroup) -> Result<Self, FqfError> {
        self.quotient_by_generators(&h.generators)
    }

    pub fn quotient_by_generators(&self, h_gens: &[FqfElement]) -> Result<Self, FqfError> {
        if !self.gens_isotropic(h_gens) {
            return Err(FqfError::NotIsotropic);
        }
        let mut result = Self::trivial();
        for l in self.primes() {
            let idx = self.indices_at(l);
            let part = self.restrict(&idx);
            let lf = LocalForm::new(&part);
            let hl: Vec<FqfElement> = h_gens.iter().map(|g| idx.iter().map(|&i| g[i]).collect()).collect();
            let perp = lf.perp(&hl);
            let gens = lf.group.quotient(&perp, &hl);
            result = result.direct_sum(&part.sub_presentation(l, &gens));
        }
        Ok(result)
    }

    /// New presentation on the given `(exponent, element)` generators.
    fn sub_presentation(&self, l: u64, gens: &[(u32, FqfElement)]) -> Self {
        let orders = gens.iter().map(|(e, _)| l.pow(*e)).collect();
        let q = gens.iter().map(|(_, g)| self.q_of(g)).collect();
        let b = gens.iter().map(|(_, x)| gens.iter().map(|(_, y)| self.b_of(x, y)).collect()).collect();
        Self::new_unchecked(orders, q, b)
    }

    /// Orthogonal splitting of a homogeneous form into cyclic and even-type pieces.
    pub fn decompose_cyclic_even(&self) -> Result<Vec<Piece>, FqfError> {
        if self.is_trivial() {
            return Ok(Vec::new());
        }
        let l = self.homogeneous_prime().ok_or(FqfError::MixedPrimes)?;
        LocalForm::new(self).decompose(self, l)
    }

    /// Exhaustive isomorphism test, for groups of order at most `2^16`.
    pub fn is_isomorphic_small(&self, other: &Self) -> Option<bool> {
        if self.order_multiset() != other.order_multiset() {
            return Some(false);
        }
        if self.order() > 1 << 16 {
            return None;
        }
        let elems = other
            .subgroup_span(&(0..other.num_generators()).map(|i| other.basis_element(i)).collect::<Vec<_>>())
            .ok()?
            .elements;
        let mut images: Vec<FqfElement> = Vec::new();
        Some(self.match_generators(other, &elems, &mut images))
    }

    fn match_generators(&self, other: &Self, elems: &[FqfElement], images: &mut Vec<FqfElement>) -> bool {
        let i = images.len();
        if i == self.num_generators() {
            return other.subgroup_span(images).map(|s| s.elements.len() as u64 == other.order()).unwrap_or(false);
        }
        for y in elems {
            if other.element_order(y) != self.orders[i] || other.q_of(y) != self.q[i] {
                continue;
            }
            if (0..i).any(|j| other.b_of(&images[j], y) != self.b[j][i]) {
                continue;
            }
            images.push(y.clone());
            if self.match_generators(other, elems, images) {
                return true;
            }
            images.pop();
        }
        false
    }
}

/// An explicitly enumerated subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<FqfElement>,
    pub elements: Vec<FqfElement>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.elements.iter().any(|e| e == x)
    }
}

/// One summand of [`FiniteQuadraticForm::decompose_cyclic_even`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    /// `(Z/l^nu, q(γ))`.
    Cyclic { l: u64, nu: u32, q: QMod2Z },
    /// 2-adic even type on `(Z/2^nu)^2`: `q(γ1) = 2u/2^nu`, `q(γ2) = 2w/2^nu`,
    /// `b(γ1, γ2) = v/2^nu`.
    EvenType { nu: u32, u: u64, v: u64, w: u64 },
}

impl Piece {
    pub fn length(&self) -> usize {
        match self {
            Piece::Cyclic { .. } => 1,
            Piece::EvenType { .. } => 2,
        }
    }

    pub fn to_form(&self) -> FiniteQuadraticForm {
        match *self {
            Piece::Cyclic { l, nu, q } => {
                FiniteQuadraticForm::new_unchecked(vec![l.pow(nu)], vec![q], vec![vec![q.to_b()]])
            }
            Piece::EvenType { nu, u, v, w } => {
                let n = 1i64 << nu;
                let bv = BMod1Z::new(v as i64, n);
                let q1 = QMod2Z::new(2 * u as i64, n);
                let q2 = QMod2Z::new(2 * w as i64, n);
                FiniteQuadraticForm::new_unchecked(
                    vec![n as u64, n as u64],
                    vec![q1, q2],
                    vec![vec![q1.to_b(), bv], vec![bv, q2.to_b()]],
                )
            }
        }
    }
}

/// Integer view of a homogeneous `l`-form: `b` scaled by `l^E`.
pub(crate) struct LocalForm {
    pub group: LocalGroup,
    bmat: Vec<Vec<u64>>,
}

impl LocalForm {
    pub fn new(f: &FiniteQuadraticForm) -> Self {
        let l = f.primes.first().copied().unwrap_or(2);
        let exps: Vec<u32> = f.orders.iter().map(|&o| o.trailing_zeros_base(l)).collect();
        let group = LocalGroup::new(l, exps);
        let m = group.ring.m as i64;
        let bmat = f.b.iter().map(|r| r.iter().map(|v| v.scaled_num(m) as u64 % m as u64).collect()).collect();
        Self { group, bmat }
    }

    fn ring(&self) -> &LocalRing {
        &self.group.ring
    }

    /// `b(x, y) * l^E mod l^E`.
    fn b_int(&self, x: &[u64], y: &[u64]) -> u64 {
        let r = self.ring();
        let mut s = 0u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    s = r.add(s, r.mul(r.mul(xi, yj), self.bmat[i][j]));
                }
            }
        }
        s
    }

    fn column(&self, h: &[u64]) -> Vec<u64> {
        let r = self.ring();
        (0..self.bmat.len())
            .map(|i| h.iter().enumerate().fold(0, |s, (j, &hj)| r.add(s, r.mul(self.bmat[i][j], hj))))
            .collect()
    }

    pub fn perp(&self, h_gens: &[FqfElement]) -> Vec<FqfElement> {
        let cols: Vec<_> = h_gens.iter().map(|h| self.column(h)).collect();
        self.group.kernel(&cols)
    }

    fn decompose(&self, f: &FiniteQuadraticForm, l: u64) -> Result<Vec<Piece>, FqfError> {
        let r = *self.ring();
        let mut gens: Vec<(u32, FqfElement)> =
            self.group.exps.iter().enumerate().map(|(i, &e)| (e, f.basis_element(i))).collect();
        let mut pieces = Vec::new();
        let reduce = |x: &mut FqfElement| {
            for (c, &o) in x.iter_mut().zip(&f.orders) {
                *c %= o;
            }
        };
        while !gens.is_empty() {
            let nu = gens.iter().map(|g| g.0).max().unwrap();
            let top_val = r.e - nu;
            let top: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].0 == nu).collect();
            let diag = top.iter().copied().find(|&i| r.val(self.b_int(&gens[i].1, &gens[i].1)) == top_val);
            let pair = if diag.is_none() {
                top.iter()
                    .flat_map(|&i| top.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i < j && r.val(self.b_int(&gens[i].1, &gens[j].1)) == top_val)
            } else {
                None
            };
            let lnu = l.pow(nu);
            match (diag, pair) {
                (Some(i), _) => {
                    let gamma = gens.remove(i).1;
                    self.split_cyclic(f, &mut gens, &gamma, nu, &reduce);
                    pieces.push(Piece::Cyclic { l, nu, q: f.q_of(&gamma) });
                }
                (None, Some((i, j))) if l != 2 => {
                    let gamma = f.add(&gens[i].1, &gens[j].1);
                    gens.remove(i);
                    self.split_cyclic(f, &mut gens, &gamma, nu, &reduce);
                    pieces.push(Piece::Cyclic { l, nu, q: f.q_of(&gamma) });
                }
                (None, Some((i, j))) => {
                    let g2 = gens.remove(j).1;
                    let g1 = gens.remove(i).1;
                    let scale = |x: u64| x / r.pow(top_val);
                    let m = lnu as i64;
                    let b11 = scale(self.b_int(&g1, &g1)) as i64;
                    let b12 = scale(self.b_int(&g1, &g2)) as i64;
                    let b22 = scale(self.b_int(&g2, &g2)) as i64;
                    let det = (b11 * b22 - b12 * b12).rem_euclid(m);
                    let dinv = mod_inverse(det, m).ok_or(FqfError::DegenerateForm)?;
                    for (_, g) in gens.iter_mut() {
                        let r1 = scale(self.b_int(g, &g1)) as i64;
                        let r2 = scale(self.b_int(g, &g2)) as i64;
                        let x1 = ((b22 * r1 - b12 * r2) as i128 * dinv as i128).rem_euclid(m as i128) as i64;
                        let x2 = ((b11 * r2 - b12 * r1) as i128 * dinv as i128).rem_euclid(m as i128) as i64;
                        let t = f.add(&f.scale(x1, &g1), &f.scale(x2, &g2));
                        *g = f.add(g, &f.scale(-1, &t));
                        reduce(g);
                    }
                    let half = |q: QMod2Z| -> u64 {
                        // q = 2u / 2^nu  =>  u = q * 2^(nu-1) mod 2^nu
                        q.scaled_num(2 * m) as u64 / 2 / 2 % m as u64
                    };
                    let u = half(f.q_of(&g1));
                    let w = half(f.q_of(&g2));
                    let v = f.b_of(&g1, &g2).scaled_num(m) as u64;
                    pieces.push(Piece::EvenType { nu, u, v, w });
                }
                (None, None) => return Err(FqfError::DegenerateForm),
            }
        }
        Ok(pieces)
    }

    fn split_cyclic(
        &self,
        f: &FiniteQuadraticForm,
        gens: &mut [(u32, FqfElement)],
        gamma: &[u64],
        nu: u32,
        reduce: &dyn Fn(&mut FqfElement),
    ) {
        let r = self.ring();
        let shift = r.pow(r.e - nu);
        let m = r.l.pow(nu) as i64;
        let bgg = (self.b_int(gamma, gamma) / shift) as i64;
        let inv = mod_inverse(bgg.rem_euclid(m), m).expect("unit pivot");
        for (_, g) in gens.iter_mut() {
            let w = (self.b_int(g, gamma) / shift) as i64;
            let c = (w as i128 * inv as i128).rem_euclid(m as i128) as i64;
            *g = f.add(g, &f.scale(-c, gamma));
            reduce(g);
        }
    }
}

trait TrailingZerosBase {
    fn trailing_zeros_base(self, l: u64) -> u32;
}

impl TrailingZerosBase for u64 {
    fn trailing_zeros_base(mut self, l: u64) -> u32 {
        let mut e = 0;
        while self > 1 && self.is_multiple_of(l) {
            self /= l;
            e += 1;
        }
        e
    }
}

/// JSON presentation: `{"orders":[..],"q":["3/2",..],"b":[["0","1/2"],..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FqfJson {
    pub orders: Vec<u64>,
    pub q: Vec<QMod2Z>,
    pub b: Vec<Vec<BMod1Z>>,
}

impl From<&FiniteQuadraticForm> for FqfJson {
    fn from(f: &FiniteQuadraticForm) -> Self {
        Self { orders: f.orders.clone(), q: f.q.clone(), b: f.b.clone() }
    }
}

impl TryFrom<FqfJson> for FiniteQuadraticForm {
    type Error = FqfError;
    fn try_from(j: FqfJson) -> Result<Self, FqfError> {
        FiniteQuadraticForm::new(j.orders, j.q, j.b)
    }
}

impl Serialize for FiniteQuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FqfJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteQuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FqfJson::deserialize(d)?;
        FiniteQuadraticForm::try_from(j).map_err(serde::de::Error::custom)
    }
}
