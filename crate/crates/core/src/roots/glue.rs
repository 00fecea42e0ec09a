// SPDX-License-Identifier: Apache-2.0

//! Discriminant-group data of negative-definite ADE root lattices.
//!
//! A glue element is a vector of per-component class indices. Classes are
//! indexed as follows: `A_n` by `j ∈ Z/(n+1)`; `D_n` by `0, s, s', v` stored as
//! `0, 1, 3, 2` for odd `n` (where the group is `Z/4 = <s>`) and as the bit
//! patterns `0, 1, 2, 3` for even `n` (where the group is `(Z/2)^2`); `E_6` by
//! `Z/3`; `E_7` by `Z/2`.

use crate::arith::{factorize, lcm, mod_inverse, BMod1Z, QMod2Z};
use crate::fqf::{FiniteQuadraticForm, FqfElement};
use crate::lattice::GramLattice;

use super::dynkin::{Component, DynkinType};

/// A rational number `num / den` with `den > 0`, used for coset norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        let g = crate::arith::gcd(num, den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn scaled(self, den: i64) -> i64 {
        debug_assert!(den % self.den == 0);
        self.num * (den / self.den)
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Glue group of one component, with its `q`-values and coset minimal norms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGlueData {
    pub component: Component,
    /// Orders of the cyclic factors of the group (`[]`, `[m]` or `[2, 2]`).
    pub group: Vec<u64>,
    /// Number of classes.
    pub order: usize,
    /// `add[a][b]` is the class of `a + b`.
    pub add: Vec<Vec<u8>>,
    /// `q` of each class in the negative-definite lattice.
    pub q: Vec<QMod2Z>,
    /// Minimal norm of each coset in the positive-definite lattice.
    pub min_norm: Vec<Ratio>,
}

impl ComponentGlueData {
    pub fn neg(&self, a: u8) -> u8 {
        (0..self.order as u8).find(|&b| self.add[a as usize][b as usize] == 0).unwrap()
    }

    /// `b(a, c)` derived from `q` by polarization.
    pub fn b(&self, a: u8, c: u8) -> BMod1Z {
        let s = self.q[self.add[a as usize][c as usize] as usize] - self.q[a as usize] - self.q[c as usize];
        // s ∈ Q/2Z equals 2 b(a,c); halve through a representative
        BMod1Z::new(s.num(), 2 * s.den())
    }

    /// Class permutations induced by the diagram automorphisms used for symmetry reduction.
    pub fn automorphisms(&self) -> Vec<Vec<u8>> {
        match self.component {
            Component::A(n) if n >= 2 => vec![(0..self.order as u8).map(|a| self.neg(a)).collect()],
            Component::E(6) => vec![vec![0, 2, 1]],
            Component::D(4) => vec![vec![0, 2, 1, 3], vec![0, 3, 2, 1]],
            Component::D(n) if n % 2 == 0 => vec![vec![0, 2, 1, 3]],
            Component::D(_) => vec![vec![0, 3, 2, 1]],
            _ => vec![],
        }
    }
}

fn table(order: usize, f: impl Fn(usize, usize) -> usize) -> Vec<Vec<u8>> {
    (0..order).map(|a| (0..order).map(|b| f(a, b) as u8).collect()).collect()
}

/// Glue data of a single component.
pub fn component_glue_data(c: Component) -> ComponentGlueData {
    match c {
        Component::A(n) => {
            let m = n as i64 + 1;
            let order = m as usize;
            ComponentGlueData {
                component: c,
                group: vec![m as u64],
                order,
                add: table(order, |a, b| (a + b) % order),
                q: (0..m).map(|j| QMod2Z::new(-j * j * (m - 1), m)).collect(),
                min_norm: (0..m).map(|j| Ratio::new(j * (m - j), m)).collect(),
            }
        }
        Component::D(n) => {
            let n = n as i64;
            let qs = QMod2Z::new(-n, 4);
            let ns = Ratio::new(n, 4);
            let one = Ratio::new(1, 1);
            let zero = Ratio::new(0, 1);
            if n % 2 == 1 {
                // 0, s, v, s' = 0, 1, 2, 3 in Z/4
                ComponentGlueData {
                    component: c,
                    group: vec![4],
                    order: 4,
                    add: table(4, |a, b| (a + b) % 4),
                    q: vec![QMod2Z::ZERO, qs, QMod2Z::new(1, 1), qs],
                    min_norm: vec![zero, ns, one, ns],
                }
            } else {
                // bits: s = 01, s' = 10, v = 11
                ComponentGlueData {
                    component: c,
                    group: vec![2, 2],
                    order: 4,
                    add: table(4, |a, b| a ^ b),
                    q: vec![QMod2Z::ZERO, qs, qs, QMod2Z::new(1, 1)],
                    min_norm: vec![zero, ns, ns, one],
                }
            }
        }
        Component::E(6) => ComponentGlueData {
            component: c,
            group: vec![3],
            order: 3,
            add: table(3, |a, b| (a + b) % 3),
            q: vec![QMod2Z::ZERO, QMod2Z::new(2, 3), QMod2Z::new(2, 3)],
            min_norm: vec![Ratio::new(0, 1), Ratio::new(4, 3), Ratio::new(4, 3)],
        },
        Component::E(7) => ComponentGlueData {
            component: c,
            group: vec![2],
            order: 2,
            add: table(2, |a, b| (a + b) % 2),
            q: vec![QMod2Z::ZERO, QMod2Z::new(1, 2)],
            min_norm: vec![Ratio::new(0, 1), Ratio::new(3, 2)],
        },
        Component::E(_) => ComponentGlueData {
            component: c,
            group: vec![],
            order: 1,
            add: vec![vec![0]],
            q: vec![QMod2Z::ZERO],
            min_norm: vec![Ratio::new(0, 1)],
        },
    }
}

/// Glue data of a whole root system, with the map to the prime-power
/// presentation used by [`sigma_fqf`].
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub dynkin: DynkinType,
    pub comps: Vec<ComponentGlueData>,
    /// Per component: `(generator offset, generator count)` in the presentation.
    offsets: Vec<(usize, usize)>,
    fqf: FiniteQuadraticForm,
}

impl RootSystem {
    pub fn new(dynkin: &DynkinType) -> Self {
        let comps: Vec<ComponentGlueData> = dynkin.components().iter().map(|&c| component_glue_data(c)).collect();
        let mut offsets = Vec::new();
        let mut form = FiniteQuadraticForm::trivial();
        for c in &comps {
            let part = component_fqf(c);
            offsets.push((form.num_generators(), part.num_generators()));
            form = form.direct_sum(&part);
        }
        Self { dynkin: dynkin.clone(), comps, offsets, fqf: form }
    }

    pub fn fqf(&self) -> &FiniteQuadraticForm {
        &self.fqf
    }

    /// `|D_R|`.
    pub fn order(&self) -> u64 {
        self.comps.iter().map(|c| c.order as u64).product()
    }

    /// Coordinates of a class vector in the prime-power presentation.
    pub fn to_fqf(&self, x: &[u8]) -> FqfElement {
        let mut out = vec![0; self.fqf.num_generators()];
        for (i, c) in self.comps.iter().enumerate() {
            let (off, _) = self.offsets[i];
            let a = x[i] as u64;
            match c.component {
                Component::A(n) => {
                    let m = n as u64 + 1;
                    for (k, (p, e)) in factorize(m).into_iter().enumerate() {
                        let pe = p.pow(e);
                        let cof = m / pe;
                        let inv = mod_inverse((cof % pe) as i64, pe as i64).unwrap() as u64;
                        out[off + k] = a * inv % pe;
                    }
                }
                Component::D(n) if n % 2 == 0 => {
                    out[off] = a & 1;
                    out[off + 1] = (a >> 1) & 1;
                }
                Component::E(8) => {}
                _ => out[off] = a,
            }
        }
        out
    }

    /// Inverse of [`Self::to_fqf`].
    pub fn from_fqf(&self, y: &[u64]) -> Vec<u8> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (off, _) = self.offsets[i];
                match c.component {
                    Component::A(n) => {
                        let m = n as u64 + 1;
                        let s: u64 =
                            factorize(m).into_iter().enumerate().map(|(k, (p, e))| y[off + k] * (m / p.pow(e))).sum();
                        (s % m) as u8
                    }
                    Component::D(n) if n % 2 == 0 => (y[off] | (y[off + 1] << 1)) as u8,
                    Component::E(8) => 0,
                    _ => y[off] as u8,
                }
            })
            .collect()
    }

    pub fn add(&self, x: &[u8], y: &[u8]) -> Vec<u8> {
        self.comps.iter().zip(x.iter().zip(y)).map(|(c, (&a, &b))| c.add[a as usize][b as usize]).collect()
    }

    pub fn q(&self, x: &[u8]) -> QMod2Z {
        self.comps.iter().zip(x).fold(QMod2Z::ZERO, |acc, (c, &a)| acc + c.q[a as usize])
    }

    /// Common denominator of every coset norm.
    pub fn norm_denominator(&self) -> i64 {
        self.comps.iter().flat_map(|c| c.min_norm.iter().map(|r| r.den)).fold(1, lcm)
    }

    pub fn min_norm(&self, x: &[u8]) -> Ratio {
        let d = self.norm_denominator();
        let s: i64 = self.comps.iter().zip(x).map(|(c, &a)| c.min_norm[a as usize].scaled(d)).sum();
        Ratio::new(s, d)
    }
}

/// Prime-power presentation of one component's discriminant form.
fn component_fqf(c: &ComponentGlueData) -> FiniteQuadraticForm {
    let gens: Vec<(u64, u8)> = match c.component {
        Component::A(n) => {
            let m = n as u64 + 1;
            factorize(m).into_iter().map(|(p, e)| (p.pow(e), (m / p.pow(e)) as u8)).collect()
        }
        Component::D(n) if n % 2 == 0 => vec![(2, 1), (2, 2)],
        Component::D(_) => vec![(4, 1)],
        Component::E(6) => vec![(3, 1)],
        Component::E(7) => vec![(2, 1)],
        Component::E(_) => vec![],
    };
    let orders = gens.iter().map(|g| g.0).collect();
    let q = gens.iter().map(|g| c.q[g.1 as usize]).collect();
    let b = gens.iter().map(|g| gens.iter().map(|h| c.b(g.1, h.1)).collect()).collect();
    FiniteQuadraticForm::new(orders, q, b).expect("component form is nondegenerate")
}

/// `(D_R, q_R)` of the negative-definite root lattice of type `R`.
pub fn sigma_fqf(r: &DynkinType) -> FiniteQuadraticForm {
    RootSystem::new(r).fqf
}

/// Negated Cartan matrix of one component.
fn component_gram(c: Component) -> Vec<Vec<i64>> {
    let adj = c.diagram();
    let n = adj.len();
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = -2;
        for &j in &adj[i] {
            g[i][j] = 1;
        }
    }
    g
}

/// Gram matrix of `Σ⁻_R` in the basis of simple roots.
pub fn gram_of_sigma(r: &DynkinType) -> GramLattice {
    let n = r.rank() as usize;
    let mut g = vec![vec![0i64; n]; n];
    let mut off = 0;
    for &c in r.components() {
        let b = component_gram(c);
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                g[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    GramLattice::new(g).expect("root lattices are nondegenerate")
}

/// Minimal norm of the coset of `x` in the positive-definite lattice `Σ⁺_R`.
pub fn coset_min_norm(r: &DynkinType, x: &FqfElement) -> Ratio {
    let rs = RootSystem::new(r);
    rs.min_norm(&rs.from_fqf(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DynkinType {
        s.parse().unwrap()
    }

    #[test]
    fn q_is_minus_min_norm() {
        for c in [
            Component::A(1),
            Component::A(5),
            Component::A(12),
            Component::D(4),
            Component::D(5),
            Component::D(8),
            Component::E(6),
            Component::E(7),
            Component::E(8),
        ] {
            let d = component_glue_data(c);
            for j in 0..d.order {
                let m = d.min_norm[j];
                assert_eq!(d.q[j], -QMod2Z::new(m.num, m.den), "{c} class {j}");
            }
        }
    }

    #[test]
    fn component_examples() {
        let a2 = component_glue_data(Component::A(2));
        assert_eq!(a2.min_norm[1], Ratio::new(2, 3));
        assert_eq!(a2.q[1], QMod2Z::new(4, 3));
        let d4 = component_glue_data(Component::D(4));
        assert_eq!(d4.min_norm[3], Ratio::new(1, 1));
        assert_eq!(d4.q[3], QMod2Z::new(1, 1));
        assert_eq!(component_glue_data(Component::E(8)).order, 1);
    }

    #[test]
    fn sigma_examples() {
        let f = sigma_fqf(&t("2A1"));
        assert_eq!(f.orders(), &[2, 2]);
        assert_eq!(f.q_values(), &[QMod2Z::new(3, 2), QMod2Z::new(3, 2)]);
        assert!(f.b_matrix()[0][1].is_zero());
        assert!(sigma_fqf(&t("E8")).is_trivial());
        for s in ["A5+D4", "D5+A2", "E6+A3", "E7+D6+A1"] {
            let r = t(s);
            let oracle = gram_of_sigma(&r).discriminant_form().unwrap();
            assert_eq!(oracle.is_isomorphic_small(&sigma_fqf(&r)), Some(true), "{s}");
        }
    }

    #[test]
    fn class_round_trip() {
        let rs = RootSystem::new(&t("A5+D5+D4+E6+A1"));
        let x = vec![1u8, 3, 2, 5, 1]; // E6, D5, D4, A5, A1
        assert_eq!(rs.from_fqf(&rs.to_fqf(&x)), x);
        assert_eq!(rs.fqf().q_of(&rs.to_fqf(&x)), rs.q(&x));
    }

    #[test]
    fn coset_norms() {
        let r = t("4A1");
        assert_eq!(coset_min_norm(&r, &vec![1, 1, 1, 1]), Ratio::new(2, 1));
        assert_eq!(coset_min_norm(&t("8A1"), &vec![1; 8]), Ratio::new(4, 1));
        assert_eq!(coset_min_norm(&r, &vec![0; 4]), Ratio::new(0, 1));
    }
}
