// SPDX-License-Identifier: Apache-2.0

//! Smith normal form over the local ring `Z/l^E`.
//!
//! Every nonzero element is `unit * l^v`, so the entry of least valuation
//! divides everything else in the active block and elimination is exact.

use crate::arith::mod_inverse;

pub(crate) type Mat = Vec<Vec<u64>>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalRing {
    pub l: u64,
    pub e: u32,
    pub m: u64,
}

impl LocalRing {
    pub fn new(l: u64, e: u32) -> Self {
        let m = l.checked_pow(e).expect("modulus overflow");
        Self { l, e, m }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.m as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.m as u128 - b as u128) % self.m as u128) as u64
    }

    /// Valuation, with `e` standing in for zero.
    pub fn val(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.e;
        }
        let mut v = 0;
        while a.is_multiple_of(self.l) {
            a /= self.l;
            v += 1;
        }
        v
    }

    pub fn pow(&self, v: u32) -> u64 {
        self.l.pow(v) % self.m.max(1)
    }

    fn unit_inverse(&self, a: u64, v: u32) -> u64 {
        let u = a / self.l.pow(v);
        mod_inverse(u as i64, self.m as i64).expect("unit part invertible") as u64
    }
}

pub(crate) fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// `P * A * Q = D` with `D` diagonal, entries `l^{vals[i]}` (`vals[i] = e` for zero).
pub(crate) struct Smith {
    pub vals: Vec<u32>,
    pub p: Mat,
    pub q: Mat,
    pub q_inv: Mat,
}

pub(crate) fn smith(ring: &LocalRing, a: &Mat, ncols: usize) -> Smith {
    let nrows = a.len();
    let mut a: Mat = a.clone();
    let mut p = identity(nrows);
    let mut q = identity(ncols);
    let mut q_inv = identity(ncols);
    let mut vals = Vec::new();
    let k = nrows.min(ncols);
    for t in 0..k {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = ring.val(x);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                        if v == 0 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((_, _, 0))) {
                break;
            }
        }
        let Some((bi, bj, v)) = best else { break };
        if bi != t {
            a.swap(bi, t);
            p.swap(bi, t);
        }
        if bj != t {
            for row in a.iter_mut() {
                row.swap(bj, t);
            }
            for row in q.iter_mut() {
                row.swap(bj, t);
            }
            q_inv.swap(bj, t);
        }
        let s = ring.unit_inverse(a[t][t], v);
        for x in a[t].iter_mut() {
            *x = ring.mul(*x, s);
        }
        for x in p[t].iter_mut() {
            *x = ring.mul(*x, s);
        }
        let lv = ring.l.pow(v);
        for i in 0..nrows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let c = a[i][t] / lv;
            for j in 0..ncols {
                let d = ring.mul(c, a[t][j]);
                a[i][j] = ring.sub(a[i][j], d);
            }
            for j in 0..nrows {
                let d = ring.mul(c, p[t][j]);
                p[i][j] = ring.sub(p[i][j], d);
            }
        }
        for j in (t + 1)..ncols {
            if a[t][j] == 0 {
                continue;
            }
            let c = a[t][j] / lv;
            for row in a.iter_mut() {
                let d = ring.mul(c, row[t]);
                row[j] = ring.sub(row[j], d);
            }
            for row in q.iter_mut() {
                let d = ring.mul(c, row[t]);
                row[j] = ring.sub(row[j], d);
            }
            // col_j -= c col_t  <=>  Q_inv row_t += c row_j
            for x in 0..ncols {
                let d = ring.mul(c, q_inv[j][x]);
                q_inv[t][x] = ring.add(q_inv[t][x], d);
            }
        }
        vals.push(v);
    }
    while vals.len() < k {
        vals.push(ring.e);
    }
    Smith { vals, p, q, q_inv }
}

/// A subgroup of `D = ⊕ Z/l^{exps[i]}` in Smith-adapted form.
#[derive(Debug, Clone)]
pub(crate) struct LocalBasis {
    /// Exponents of the cyclic factors (all positive).
    pub exps: Vec<u32>,
    /// Basis elements in `D` coordinates.
    pub basis: Vec<Vec<u64>>,
    /// Maps embedded coordinates to basis coordinates (scaled by `l^{vals}`).
    q: Mat,
    vals: Vec<u32>,
}

pub(crate) struct LocalGroup {
    pub ring: LocalRing,
    pub exps: Vec<u32>,
}

impl LocalGroup {
    pub fn new(l: u64, exps: Vec<u32>) -> Self {
        let e = exps.iter().copied().max().unwrap_or(0).max(1);
        Self { ring: LocalRing::new(l, e), exps }
    }

    fn embed(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.exps).map(|(&c, &ei)| self.ring.mul(c, self.ring.l.pow(self.ring.e - ei))).collect()
    }

    fn unembed(&self, y: &[u64]) -> Vec<u64> {
        y.iter()
            .zip(&self.exps)
            .map(|(&c, &ei)| {
                let s = self.ring.l.pow(self.ring.e - ei);
                debug_assert!(c % s == 0);
                (c / s) % self.ring.l.pow(ei)
            })
            .collect()
    }

    /// Smith-adapted basis of the subgroup generated by `gens`.
    pub fn span(&self, gens: &[Vec<u64>]) -> LocalBasis {
        let k = self.exps.len();
        let rows: Mat = gens.iter().map(|g| self.embed(g)).collect();
        let s = smith(&self.ring, &rows, k);
        let mut exps = Vec::new();
        let mut basis = Vec::new();
        for (j, &v) in s.vals.iter().enumerate() {
            if v >= self.ring.e {
                continue;
            }
            let lv = self.ring.l.pow(v);
            let f: Vec<u64> = s.q_inv[j].iter().map(|&x| self.ring.mul(x, lv)).collect();
            exps.push(self.ring.e - v);
            basis.push(self.unembed(&f));
        }
        LocalBasis { exps, basis, q: s.q, vals: s.vals }
    }

    /// Coordinates of `x` (an element of the span) in the adapted basis.
    pub fn coords(&self, b: &LocalBasis, x: &[u64]) -> Vec<u64> {
        let y = self.embed(x);
        let mut out = Vec::with_capacity(b.exps.len());
        for (j, &v) in b.vals.iter().enumerate() {
            if v >= self.ring.e {
                continue;
            }
            let mut s = 0u64;
            for (i, &yi) in y.iter().enumerate() {
                s = self.ring.add(s, self.ring.mul(yi, b.q[i][j]));
            }
            let lv = self.ring.l.pow(v);
            debug_assert!(s.is_multiple_of(lv), "element not in span");
            out.push((s / lv) % self.ring.l.pow(self.ring.e - v));
        }
        out
    }

    /// Solutions `x` of `x · V ≡ 0 (mod l^E)` where `V` is `k × m` (columns given).
    pub fn kernel(&self, cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let k = self.exps.len();
        if cols.is_empty() {
            return (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
        }
        let v: Mat = (0..k).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let s = smith(&self.ring, &v, cols.len());
        let mut gens = Vec::new();
        for i in 0..k {
            let vi = s.vals.get(i).copied().unwrap_or(self.ring.e);
            let scale = self.ring.l.pow(self.ring.e - vi.min(self.ring.e));
            let g: Vec<u64> =
                s.p[i].iter().zip(&self.exps).map(|(&x, &ei)| self.ring.mul(x, scale) % self.ring.l.pow(ei)).collect();
            if g.iter().any(|&c| c != 0) {
                gens.push(g);
            }
        }
        gens
    }

    /// Cyclic decomposition of `K / H` for `H ⊆ K` given by generators.
    /// Returns `(exponent, representative in D coordinates)` per factor.
    pub fn quotient(&self, k_gens: &[Vec<u64>], h_gens: &[Vec<u64>]) -> Vec<(u32, Vec<u64>)> {
        let kb = self.span(k_gens);
        let s = kb.exps.len();
        if s == 0 {
            return Vec::new();
        }
        let mut rel: Mat = h_gens.iter().map(|h| self.coords(&kb, h)).collect();
        for (j, &a) in kb.exps.iter().enumerate() {
            let mut row = vec![0u64; s];
            row[j] = self.ring.l.pow(a) % self.ring.m;
            rel.push(row);
        }
        let sm = smith(&self.ring, &rel, s);
        let mut out = Vec::new();
        for (i, &w) in sm.vals.iter().enumerate() {
            if w == 0 {
                continue;
            }
            // basis coordinates of the i-th generator: row i of Q^{-1}
            let c = &sm.q_inv[i];
            let mut x = vec![0u64; self.exps.len()];
            for (j, f) in kb.basis.iter().enumerate() {
                for (t, xt) in x.iter_mut().enumerate() {
                    let mt = self.ring.l.pow(self.exps[t]);
                    *xt = ((*xt as u128 + c[j] as u128 * f[t] as u128) % mt as u128) as u64;
                }
            }
            out.push((w.min(self.ring.e), x));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(r: &LocalRing, a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        (0..n).map(|i| (0..m).map(|j| (0..k).fold(0, |s, t| r.add(s, r.mul(a[i][t], b[t][j])))).collect()).collect()
    }

    #[test]
    fn smith_is_diagonal() {
        let ring = LocalRing::new(2, 4);
        let a: Mat = vec![vec![4, 6, 2], vec![8, 12, 3], vec![0, 2, 10]];
        let s = smith(&ring, &a, 3);
        let d = matmul(&ring, &matmul(&ring, &s.p, &a), &s.q);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(d[i][j], ring.pow(s.vals[i]) % ring.m);
                } else {
                    assert_eq!(d[i][j], 0);
                }
            }
        }
        assert_eq!(matmul(&ring, &s.q, &s.q_inv), identity(3));
    }

    #[test]
    fn span_and_quotient_sizes() {
        // D = Z/4 x Z/2, H = <(2,1)>, K = D
        let g = LocalGroup::new(2, vec![2, 1]);
        let all = vec![vec![1, 0], vec![0, 1]];
        let b = g.span(&all);
        assert_eq!(b.exps.iter().sum::<u32>(), 3);
        let q = g.quotient(&all, &[vec![2, 1]]);
        assert_eq!(q.iter().map(|x| x.0).sum::<u32>(), 2);
        assert_eq!(q.len(), 1);
    }
}
