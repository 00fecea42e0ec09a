// SPDX-License-Identifier: Apache-2.0

//! Isotropic root-free glue subgroups of `D_R`, up to the symmetries generated
//! by permuting equal components and by per-component glue automorphisms.
//!
//! Subgroups are grown one prime-order step at a time. Every nonzero element
//! must be admissible (isotropic with coset minimal norm at least 4), which
//! makes isotropy of the subgroup automatic. Orbits are separated by canonical
//! labeling of a colored graph that encodes the subgroup, and the automorphisms
//! found there cut the list of extensions to one per stabilizer orbit.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canon::{canonicalize, ColoredGraph};
use crate::fqf::{FiniteQuadraticForm, FqfElement, FqfError};

use super::dynkin::{Component, DynkinType};
use super::glue::RootSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Fqf(#[from] FqfError),
}

/// Limits for a single enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumBudget {
    /// Wall-clock limit, counted from the start of each enumeration.
    pub time_limit: Option<Duration>,
    /// Largest `|D_R|` accepted.
    pub max_group_order: u64,
    /// Largest number of subgroup representatives visited.
    pub max_subgroups: Option<u64>,
}

impl Default for EnumBudget {
    fn default() -> Self {
        Self { time_limit: None, max_group_order: 1 << 26, max_subgroups: None }
    }
}

/// A glue subgroup `H ⊂ D_R` given by class vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueSubgroup {
    pub generators: Vec<Vec<u8>>,
    pub elements: Vec<Vec<u8>>,
}

impl GlueSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// One representative of `E(Σ⁻_R)`.
#[derive(Debug, Clone)]
pub struct Overlattice {
    pub glue: GlueSubgroup,
    /// `|H| = [M : Σ⁻_R]`.
    pub index: u64,
}

pub struct OverlatticeEnumerator {
    rs: RootSystem,
    strides: Vec<u64>,
    total: u64,
    admissible: Vec<u64>,
    /// `(orbit-color, cycle edges?)` per component, used for the graph encoding.
    class_colors: Vec<Vec<u32>>,
    budget: EnumBudget,
    deadline: Option<Instant>,
}

fn comp_code(c: Component) -> u32 {
    match c {
        Component::A(n) => n,
        Component::D(n) => 100 + n,
        Component::E(n) => 200 + n,
    }
}

impl OverlatticeEnumerator {
    pub fn new(r: &DynkinType, budget: EnumBudget) -> Result<Self, EnumError> {
        let rs = RootSystem::new(r);
        let total = rs.order();
        if total > budget.max_group_order {
            return Err(EnumError::BudgetExceeded(format!("|D_R| = {total} exceeds {}", budget.max_group_order)));
        }
        let mut strides = Vec::with_capacity(rs.comps.len());
        let mut s = 1u64;
        for c in &rs.comps {
            strides.push(s);
            s *= c.order as u64;
        }
        let class_colors = rs
            .comps
            .iter()
            .map(|c| {
                // color = smallest class in the orbit under the glue automorphisms
                let mut col: Vec<u32> = (0..c.order as u32).collect();
                let autos = c.automorphisms();
                let mut changed = true;
                while changed {
                    changed = false;
                    for a in &autos {
                        for j in 0..c.order {
                            let k = a[j] as usize;
                            let m = col[j].min(col[k]);
                            if col[j] != m || col[k] != m {
                                col[j] = m;
                                col[k] = m;
                                changed = true;
                            }
                        }
                    }
                }
                col
            })
            .collect();
        let deadline = budget.time_limit.map(|d| Instant::now() + d);
        let mut e = Self { rs, strides, total, admissible: Vec::new(), class_colors, budget, deadline };
        e.build_admissible()?;
        Ok(e)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    fn build_admissible(&mut self) -> Result<(), EnumError> {
        let den = self.rs.norm_denominator();
        let k = self.rs.comps.len();
        let norms: Vec<Vec<i64>> =
            self.rs.comps.iter().map(|c| c.min_norm.iter().map(|r| r.scaled(den)).collect()).collect();
        let mut bits = vec![0u64; (self.total as usize).div_ceil(64)];
        let mut digits = vec![0usize; k];
        let mut norm: i64 = 0;
        for idx in 0..self.total {
            if idx & 0xFFFFF == 0 {
                self.check_deadline()?;
            }
            if idx != 0 && norm % (2 * den) == 0 && norm >= 4 * den {
                bits[(idx / 64) as usize] |= 1 << (idx % 64);
            }
            // odometer increment
            for i in 0..k {
                norm -= norms[i][digits[i]];
                digits[i] += 1;
                if digits[i] < self.rs.comps[i].order {
                    norm += norms[i][digits[i]];
                    break;
                }
                digits[i] = 0;
                norm += norms[i][0];
            }
        }
        self.admissible = bits;
        Ok(())
    }

    fn check_deadline(&self) -> Result<(), EnumError> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(EnumError::BudgetExceeded("time limit reached".into()));
            }
        }
        Ok(())
    }

    #[inline]
    fn is_admissible(&self, idx: u64) -> bool {
        self.admissible[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    pub fn encode(&self, x: &[u8]) -> u64 {
        x.iter().zip(&self.strides).map(|(&a, &s)| a as u64 * s).sum()
    }

    pub fn decode(&self, mut idx: u64) -> Vec<u8> {
        self.rs
            .comps
            .iter()
            .map(|c| {
                let o = c.order as u64;
                let a = (idx % o) as u8;
                idx /= o;
                a
            })
            .collect()
    }

    fn add_idx(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for (c, &s) in self.rs.comps.iter().zip(&self.strides) {
            let o = c.order as u64;
            out += c.add[(a % o) as usize][(b % o) as usize] as u64 * s;
            a /= o;
            b /= o;
        }
        out
    }

    /// Nonzero isotropic classes whose coset has no vector of norm 2.
    pub fn admissible_count(&self) -> u64 {
        self.admissible.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Whether every nonzero element of the span of `gens` is admissible.
    pub fn is_root_free_isotropic(&self, gens: &[Vec<u8>]) -> bool {
        let mut elems: HashSet<u64> = HashSet::from([0]);
        let mut list = vec![0u64];
        for g in gens {
            let gi = self.encode(g);
            let mut m = gi;
            while !elems.contains(&m) {
                let base = list.clone();
                for &h in &base {
                    let s = self.add_idx(h, m);
                    if elems.insert(s) {
                        list.push(s);
                    }
                }
                m = self.add_idx(m, gi);
            }
        }
        list.iter().all(|&x| x == 0 || self.is_admissible(x))
    }

    fn graph(&self, elems: &[u64]) -> (ColoredGraph, Vec<u32>, Vec<Vec<u32>>) {
        let mut g = ColoredGraph::new();
        let comps = &self.rs.comps;
        let comp_v: Vec<u32> = comps.iter().map(|c| g.add_vertex(1_000_000 + comp_code(c.component))).collect();
        let mut class_v: Vec<Vec<u32>> = Vec::with_capacity(comps.len());
        for (i, c) in comps.iter().enumerate() {
            let vs: Vec<u32> = (0..c.order)
                .map(|j| {
                    let v = g.add_vertex(2_000_000 + comp_code(c.component) * 1000 + self.class_colors[i][j]);
                    g.add_edge(comp_v[i], v);
                    v
                })
                .collect();
            if matches!(c.component, Component::A(n) if n >= 2) {
                for j in 0..c.order {
                    g.add_edge(vs[j], vs[(j + 1) % c.order]);
                }
            }
            class_v.push(vs);
        }
        for &h in elems {
            let v = g.add_vertex(3_000_000);
            for (i, a) in self.decode(h).into_iter().enumerate() {
                g.add_edge(v, class_v[i][a as usize]);
            }
        }
        (g, comp_v, class_v)
    }

    /// Converts a graph automorphism into a map on class vectors.
    fn element_map(&self, auto: &[u32], comp_v: &[u32], class_v: &[Vec<u32>]) -> (Vec<usize>, Vec<Vec<u8>>) {
        let k = comp_v.len();
        let mut comp_of: HashMap<u32, usize> = HashMap::new();
        let mut class_of: HashMap<u32, (usize, u8)> = HashMap::new();
        for i in 0..k {
            comp_of.insert(comp_v[i], i);
            for (j, &v) in class_v[i].iter().enumerate() {
                class_of.insert(v, (i, j as u8));
            }
        }
        let cmap: Vec<usize> = (0..k).map(|i| comp_of[&auto[comp_v[i] as usize]]).collect();
        let clmap: Vec<Vec<u8>> =
            (0..k).map(|i| class_v[i].iter().map(|&v| class_of[&auto[v as usize]].1).collect()).collect();
        (cmap, clmap)
    }

    fn apply(&self, map: &(Vec<usize>, Vec<Vec<u8>>), idx: u64) -> u64 {
        let x = self.decode(idx);
        let mut y = vec![0u8; x.len()];
        for (i, &a) in x.iter().enumerate() {
            y[map.0[i]] = map.1[i][a as usize];
        }
        self.encode(&y)
    }

    /// Visits orbit representatives in nondecreasing index, starting with the trivial subgroup.
    pub fn for_each<F>(&self, mut visit: F) -> Result<ControlFlow<()>, EnumError>
    where
        F: FnMut(&Overlattice) -> ControlFlow<()>,
    {
        struct Rep {
            gens: Vec<u64>,
            elems: Vec<u64>,
        }
        let mut queue: BTreeMap<u64, Vec<Rep>> = BTreeMap::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        queue.entry(1).or_default().push(Rep { gens: vec![], elems: vec![0] });
        let primes: Vec<u64> = crate::arith::factorize(self.total).into_iter().map(|p| p.0).collect();
        let mut visited = 0u64;
        while let Some((&order, _)) = queue.iter().next() {
            let reps = queue.remove(&order).unwrap();
            for rep in reps {
                self.check_deadline()?;
                visited += 1;
                if self.budget.max_subgroups.is_some_and(|m| visited > m) {
                    return Err(EnumError::BudgetExceeded(format!(
                        "more than {visited} subgroup representatives",
                        visited = visited - 1
                    )));
                }
                let ov = Overlattice {
                    glue: GlueSubgroup {
                        generators: rep.gens.iter().map(|&g| self.decode(g)).collect(),
                        elements: rep.elems.iter().map(|&e| self.decode(e)).collect(),
                    },
                    index: order,
                };
                if visit(&ov).is_break() {
                    return Ok(ControlFlow::Break(()));
                }
                // extensions H + <x> with p x ∈ H
                if order * order > self.total {
                    continue;
                }
                let hset: HashSet<u64> = rep.elems.iter().copied().collect();
                let (g, comp_v, class_v) = self.graph(&rep.elems);
                let can = canonicalize(&g);
                let maps: Vec<_> = can.automorphisms.iter().map(|a| self.element_map(a, &comp_v, &class_v)).collect();
                let mut cands: Vec<u64> = Vec::new();
                let mut cand_set: HashSet<u64> = HashSet::new();
                for (w, &word) in self.admissible.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let x = (w as u64) * 64 + bits.trailing_zeros() as u64;
                        bits &= bits - 1;
                        if hset.contains(&x) {
                            continue;
                        }
                        if let Some(p) = self.prime_step(x, &hset, &primes) {
                            if !(self.total / (order * p)).is_multiple_of(order * p) {
                                continue;
                            }
                            if self.extension_ok(x, p, &rep.elems) {
                                cands.push(x);
                                cand_set.insert(x);
                            }
                        }
                    }
                }
                let reps_x = orbit_reps(&cands, &cand_set, |x| maps.iter().map(|m| self.apply(m, x)).collect());
                let mut local: HashSet<Vec<u64>> = HashSet::new();
                for x in reps_x {
                    let p = self.prime_step(x, &hset, &primes).unwrap();
                    let mut elems = Vec::with_capacity(rep.elems.len() * p as usize);
                    let mut kx = 0u64;
                    for _ in 0..p {
                        for &h in &rep.elems {
                            elems.push(self.add_idx(h, kx));
                        }
                        kx = self.add_idx(kx, x);
                    }
                    let mut key = elems.clone();
                    key.sort_unstable();
                    if !local.insert(key) {
                        continue;
                    }
                    let (g2, _, _) = self.graph(&elems);
                    let form = canonicalize(&g2).form;
                    if seen.insert(form) {
                        let mut gens = rep.gens.clone();
                        gens.push(x);
                        queue.entry(order * p).or_default().push(Rep { gens, elems });
                    }
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Smallest prime `p` with `p x ∈ H`, if any.
    fn prime_step(&self, x: u64, h: &HashSet<u64>, primes: &[u64]) -> Option<u64> {
        primes.iter().copied().find(|&p| {
            let mut m = x;
            for _ in 1..p {
                m = self.add_idx(m, x);
            }
            h.contains(&m)
        })
    }

    fn extension_ok(&self, x: u64, p: u64, elems: &[u64]) -> bool {
        let mut kx = x;
        for _ in 1..p {
            for &h in elems {
                let y = self.add_idx(h, kx);
                if y != 0 && !self.is_admissible(y) {
                    return false;
                }
            }
            kx = self.add_idx(kx, x);
        }
        true
    }

    /// All representatives, in nondecreasing index.
    pub fn collect(&self) -> Result<Vec<Overlattice>, EnumError> {
        let mut out = Vec::new();
        let _ = self.for_each(|o| {
            out.push(o.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Generators of `H` in the prime-power presentation of `sigma_fqf(R)`.
    pub fn fqf_generators(&self, h: &GlueSubgroup) -> Vec<FqfElement> {
        h.generators.iter().map(|g| self.rs.to_fqf(g)).collect()
    }

    /// `(D_M, q_M)` for the overlattice `M` of `Σ⁻_R` glued by `H`.
    pub fn disc_form(&self, h: &GlueSubgroup) -> Result<FiniteQuadraticForm, EnumError> {
        Ok(self.rs.fqf().quotient_by_generators(&self.fqf_generators(h))?)
    }
}

/// One representative (the smallest) per orbit of `cands` under `images`.
fn orbit_reps(cands: &[u64], set: &HashSet<u64>, images: impl Fn(u64) -> Vec<u64>) -> Vec<u64> {
    let idx: HashMap<u64, usize> = cands.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..cands.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (i, &x) in cands.iter().enumerate() {
        for y in images(x) {
            if !set.contains(&y) {
                continue;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, idx[&y]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut reps: Vec<u64> = (0..cands.len()).filter(|&i| find(&mut parent, i) == i).map(|i| cands[i]).collect();
    reps.sort_unstable();
    reps
}

/// Orbit representatives of `E(Σ⁻_R)` with their discriminant forms.
pub fn enumerate_overlattices(
    r: &DynkinType,
    budget: EnumBudget,
) -> Result<Vec<(Overlattice, FiniteQuadraticForm)>, EnumError> {
    let e = OverlatticeEnumerator::new(r, budget)?;
    e.collect()?
        .into_iter()
        .map(|o| {
            let d = e.disc_form(&o.glue)?;
            Ok((o, d))
        })
        .collect()
}

/// Whether the subgroup spanned by `gens` (class vectors) is root-free.
pub fn is_root_free(r: &DynkinType, gens: &[Vec<u8>]) -> Result<bool, EnumError> {
    let rs = RootSystem::new(r);
    let mut elems: Vec<Vec<u8>> = vec![vec![0; rs.comps.len()]];
    for g in gens {
        let mut m = g.clone();
        while !elems.contains(&m) {
            let base = elems.clone();
            for h in &base {
                let s = rs.add(h, &m);
                if !elems.contains(&s) {
                    elems.push(s);
                }
            }
            m = rs.add(&m, g);
        }
    }
    if elems.iter().any(|x| !rs.q(x).is_zero()) {
        return Err(EnumError::Fqf(FqfError::NotIsotropic));
    }
    Ok(elems.iter().filter(|x| x.iter().any(|&a| a != 0)).all(|x| {
        let n = rs.min_norm(x);
        n.num != 2 * n.den
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DynkinType {
        s.parse().unwrap()
    }

    fn count(s: &str) -> Vec<u64> {
        let e = OverlatticeEnumerator::new(&t(s), EnumBudget::default()).unwrap();
        e.collect().unwrap().iter().map(|o| o.index).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(count("A1"), vec![1]);
        assert_eq!(count("8A1"), vec![1, 2]);
        assert_eq!(count("A3"), vec![1]);
        assert_eq!(count(""), vec![1]);
        // 16A1: the doubly-even codes of length 16 with weights 8 and 16
        assert_eq!(count("16A1"), vec![1, 2, 2, 2, 4, 4, 4, 4, 8, 8, 8, 8, 16, 16, 16, 32]);
    }

    #[test]
    fn budgets() {
        let tight = EnumBudget { max_subgroups: Some(3), ..EnumBudget::default() };
        let e = OverlatticeEnumerator::new(&t("16A1"), tight).unwrap();
        assert!(matches!(e.collect(), Err(EnumError::BudgetExceeded(_))));
        let small = EnumBudget { max_group_order: 1000, ..EnumBudget::default() };
        assert!(OverlatticeEnumerator::new(&t("16A1"), small).is_err());
        let instant = EnumBudget { time_limit: Some(Duration::ZERO), ..EnumBudget::default() };
        let r = OverlatticeEnumerator::new(&t("8A1"), instant).and_then(|e| e.collect());
        assert!(matches!(r, Err(EnumError::BudgetExceeded(_))));
    }

    #[test]
    fn root_free_examples() {
        assert!(!is_root_free(&t("4A1"), &[vec![1, 1, 1, 1]]).unwrap());
        assert!(is_root_free(&t("8A1"), &[vec![1; 8]]).unwrap());
        assert!(!is_root_free(&t("3A2"), &[vec![1, 1, 1]]).unwrap());
        assert!(matches!(is_root_free(&t("2A1"), &[vec![1, 1]]), Err(EnumError::Fqf(FqfError::NotIsotropic))));
    }
}
