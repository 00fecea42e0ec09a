// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use k3_rdp::lattice::GramLattice;
use k3_rdp::local::jordan::{jordan_decompose, tau_of_jordan};
use k3_rdp::local::local_invariant_set;
use k3_rdp::roots::{Component, DynkinType, RootSystem};
use rand::Rng;

pub type Elem = Vec<u8>;

// ---------------------------------------------------------------------------
// Random even lattices

/// Random nonsingular even Gram matrix of rank `1..=max_rank`.
pub fn random_even_gram<R: Rng>(rng: &mut R, max_rank: usize) -> GramLattice {
    loop {
        let n = rng.gen_range(1..=max_rank);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(-3i64..=3);
            for j in (i + 1)..n {
                let v = rng.gen_range(-2i64..=2);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        if let Ok(l) = GramLattice::new(g) {
            return l;
        }
    }
}

/// The Jordan invariant at every relevant prime lies in the local set of the discriminant form.
pub fn jordan_consistent(lat: &GramLattice) -> bool {
    let d = lat.discriminant_form().unwrap();
    let det = lat.determinant().unwrap();
    let mut primes: Vec<u64> = k3_rdp::arith::factorize(det.unsigned_abs() as u64).into_iter().map(|p| p.0).collect();
    if !primes.contains(&2) {
        primes.push(2);
    }
    primes.into_iter().all(|l| {
        let j = jordan_decompose(l, lat).unwrap();
        let set = local_invariant_set(l, lat.rank(), &d.l_part(l)).unwrap();
        j.rank() == lat.rank() && set.contains(&tau_of_jordan(&j))
    })
}

// ---------------------------------------------------------------------------
// Cartan matrices and short vectors

/// Positive-definite Cartan matrix built from the Dynkin diagram.
pub fn cartan(c: Component) -> Vec<Vec<i64>> {
    let n = c.rank() as usize;
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    match c {
        Component::A(_) => {}
        Component::D(_) => {
            edges.pop();
            edges.push((n - 3, n - 1));
        }
        Component::E(_) => {
            edges.pop();
            edges.push((2, n - 1));
        }
    }
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    m
}

pub fn block_cartan(r: &DynkinType) -> Vec<Vec<i64>> {
    let n = r.rank() as usize;
    let mut m = vec![vec![0i64; n]; n];
    let mut off = 0;
    for &c in r.components() {
        let b = cartan(c);
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[off + i][off + j] = v;
            }
        }
        off += b.len();
    }
    m
}

fn float_inverse(m: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for k in 0..2 * n {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn bareiss_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Dual lattice of a positive-definite integral lattice, in dual coordinates `z = C y`.
pub struct DualLattice {
    pub det: i64,
    pub adj: Vec<Vec<i64>>,
    inv: Vec<Vec<f64>>,
}

impl DualLattice {
    pub fn new(c: &[Vec<i64>]) -> Self {
        let det = bareiss_det(c) as i64;
        assert!(det > 0);
        let inv = float_inverse(c);
        let adj = inv.iter().map(|r| r.iter().map(|&x| (x * det as f64).round() as i64).collect()).collect();
        Self { det, adj, inv }
    }

    pub fn rank(&self) -> usize {
        self.adj.len()
    }

    /// Class of `C⁻¹ z` modulo the lattice.
    pub fn key(&self, z: &[i64]) -> Vec<i64> {
        self.adj.iter().map(|r| r.iter().zip(z).map(|(a, b)| a * b).sum::<i64>().rem_euclid(self.det)).collect()
    }

    /// Norm of `C⁻¹ z` times `det`.
    pub fn scaled_norm(&self, z: &[i64]) -> i64 {
        let n = z.len();
        (0..n).map(|i| (0..n).map(|j| z[i] * self.adj[i][j] * z[j]).sum::<i64>()).sum()
    }

    /// Every dual vector of norm at most `bound`, visited as `z`.
    pub fn short_vectors(&self, bound: f64, mut visit: impl FnMut(&[i64])) {
        let n = self.rank();
        let g = &self.inv;
        // z^T G z = Σ q[i][i] (z_i + Σ_{j>i} q[i][j] z_j)^2
        let mut q = g.clone();
        for i in 0..n {
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        let mut z = vec![0i64; n];
        fn rec(i: usize, rem: f64, q: &[Vec<f64>], z: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
            let n = z.len();
            let c: f64 = (i + 1..n).map(|j| q[i][j] * z[j] as f64).sum();
            let r = (rem / q[i][i]).max(0.0).sqrt();
            let lo = (-c - r - 1e-9).ceil() as i64;
            let hi = (-c + r + 1e-9).floor() as i64;
            for v in lo..=hi {
                z[i] = v;
                let t = v as f64 + c;
                let left = rem - q[i][i] * t * t;
                if left < -1e-7 {
                    continue;
                }
                if i == 0 {
                    visit(z);
                } else {
                    rec(i - 1, left, q, z, visit);
                }
            }
            z[i] = 0;
        }
        if n > 0 {
            rec(n - 1, bound + 1e-7, &q, &mut z, &mut visit);
        } else {
            visit(&z);
        }
    }
}

/// For each dual class: `(q mod 2 as scaled numerator over 2·det, min norm as scaled numerator)`,
/// found by short-vector enumeration up to `bound`. The form is that of the negative-definite lattice.
pub fn class_table(r: &DynkinType, bound: f64) -> (i64, HashMap<Vec<i64>, (i64, i64)>) {
    let dl = DualLattice::new(&block_cartan(r));
    let det = dl.det;
    let mut out: HashMap<Vec<i64>, (i64, i64)> = HashMap::new();
    dl.short_vectors(bound, |z| {
        let s = dl.scaled_norm(z);
        let k = dl.key(z);
        let e = out.entry(k).or_insert(((-s).rem_euclid(2 * det), s));
        e.1 = e.1.min(s);
    });
    (det, out)
}

// ---------------------------------------------------------------------------
// Subgroup exhaustion on glue data

fn symmetry_generators(rs: &RootSystem) -> Vec<(Vec<usize>, Vec<Vec<u8>>)> {
    let k = rs.comps.len();
    let ids: Vec<Vec<u8>> = rs.comps.iter().map(|c| (0..c.order as u8).collect()).collect();
    let mut out = Vec::new();
    for i in 0..k {
        for a in rs.comps[i].automorphisms() {
            let mut m = ids.clone();
            m[i] = a;
            out.push(((0..k).collect(), m));
        }
        if i + 1 < k && rs.comps[i].component == rs.comps[i + 1].component {
            let mut p: Vec<usize> = (0..k).collect();
            p.swap(i, i + 1);
            out.push((p, ids.clone()));
        }
    }
    out
}

fn apply(g: &(Vec<usize>, Vec<Vec<u8>>), x: &Elem) -> Elem {
    let mut y = vec![0; x.len()];
    for (i, &a) in x.iter().enumerate() {
        y[g.0[i]] = g.1[i][a as usize];
    }
    y
}

/// `H + <x>`.
fn extend<T: Ord + Clone>(h: &BTreeSet<T>, x: &T, add: impl Fn(&T, &T) -> T) -> BTreeSet<T> {
    let mut out = h.clone();
    let mut m = x.clone();
    while !h.contains(&m) {
        for a in h {
            out.insert(add(a, &m));
        }
        m = add(&m, x);
    }
    out
}

/// All subgroups whose nonzero elements satisfy `admissible`.
fn admissible_subgroups<T: Ord + Clone + std::hash::Hash>(
    elements: &[T],
    zero: T,
    admissible: impl Fn(&T) -> bool,
    add: impl Fn(&T, &T) -> T + Copy,
) -> Vec<BTreeSet<T>> {
    let adm: Vec<&T> = elements.iter().filter(|x| **x != zero && admissible(x)).collect();
    let mut found: HashSet<BTreeSet<T>> = HashSet::new();
    let start = BTreeSet::from([zero.clone()]);
    found.insert(start.clone());
    let mut stack = vec![start];
    while let Some(h) = stack.pop() {
        for &x in &adm {
            if h.contains(x) {
                continue;
            }
            let h2 = extend(&h, x, add);
            if h2.iter().all(|y| *y == zero || admissible(y)) && found.insert(h2.clone()) {
                stack.push(h2);
            }
        }
    }
    found.into_iter().collect()
}

fn glue_elements(rs: &RootSystem) -> Vec<Elem> {
    let mut out: Vec<Elem> = vec![vec![]];
    for c in &rs.comps {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..c.order as u8).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every isotropic root-free subgroup of the glue group.
pub fn glue_subgroups(rs: &RootSystem) -> Vec<BTreeSet<Elem>> {
    let zero = vec![0u8; rs.comps.len()];
    admissible_subgroups(
        &glue_elements(rs),
        zero,
        |x| {
            let n = rs.min_norm(x);
            rs.q(x).is_zero() && n.num >= 4 * n.den
        },
        |a, b| rs.add(a, b),
    )
}

pub fn count_by_order<T>(subgroups: &[BTreeSet<T>]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for h in subgroups {
        *out.entry(h.len()).or_insert(0) += 1;
    }
    out
}

/// Orbit counts per subgroup order under the symmetry group, by exhaustive search.
pub fn orbit_counts(r: &DynkinType) -> BTreeMap<usize, usize> {
    let rs = RootSystem::new(r);
    let found = glue_subgroups(&rs);
    let gens = symmetry_generators(&rs);
    let pos: HashMap<&BTreeSet<Elem>, usize> = found.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut parent: Vec<usize> = (0..found.len()).collect();
    fn root(p: &[usize], mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for (i, h) in found.iter().enumerate() {
        for g in &gens {
            let img: BTreeSet<Elem> = h.iter().map(|x| apply(g, x)).collect();
            let (a, b) = (root(&parent, i), root(&parent, pos[&img]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let reps: Vec<BTreeSet<Elem>> =
        found.iter().enumerate().filter(|(i, _)| root(&parent, *i) == *i).map(|(_, h)| h.clone()).collect();
    count_by_order(&reps)
}

/// Isotropic root-free subgroups of the dual quotient, computed from the Cartan matrix
/// with roots detected by short-vector enumeration.
pub fn lattice_subgroup_counts(r: &DynkinType) -> BTreeMap<usize, usize> {
    let dl = DualLattice::new(&block_cartan(r));
    let n = dl.rank();
    let det = dl.det;
    let add = move |a: &Vec<i64>, b: &Vec<i64>| a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(det)).collect();
    let mut reps: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let zero = vec![0i64; n];
    reps.insert(dl.key(&zero), zero.clone());
    let mut queue = vec![zero.clone()];
    while let Some(z) = queue.pop() {
        for i in 0..n {
            let mut w = z.clone();
            w[i] += 1;
            if let std::collections::hash_map::Entry::Vacant(e) = reps.entry(dl.key(&w)) {
                e.insert(w.clone());
                queue.push(w);
            }
        }
    }
    let mut rooty: HashSet<Vec<i64>> = HashSet::new();
    dl.short_vectors(2.0, |z| {
        if dl.scaled_norm(z) == 2 * det {
            rooty.insert(dl.key(z));
        }
    });
    let elements: Vec<Vec<i64>> = reps.keys().cloned().collect();
    let subgroups = admissible_subgroups(
        &elements,
        dl.key(&zero),
        |k| dl.scaled_norm(&reps[k]).rem_euclid(2 * det) == 0 && !rooty.contains(k),
        add,
    );
    count_by_order(&subgroups)
}
