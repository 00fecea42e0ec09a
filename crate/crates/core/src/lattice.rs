// SPDX-License-Identifier: Apache-2.0

//! Integral lattices given by Gram matrices.

use thiserror::Error;

use crate::arith::{factorize, BMod1Z, QMod2Z};
use crate::fqf::FiniteQuadraticForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("lattice is not even")]
    NotEven,
    #[error("integer overflow during reduction")]
    Overflow,
}

/// A nondegenerate integral lattice with Gram matrix in some basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        let l = Self { gram };
        if n > 0 && l.determinant()? == 0 {
            return Err(LatticeError::SingularGram);
        }
        Ok(l)
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<i128, LatticeError> {
        let n = self.rank();
        let mut a: Vec<Vec<i128>> = self.gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else { return Ok(0) };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(LatticeError::Overflow)?;
                    a[i][j] = v / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        Ok(if n == 0 { 1 } else { sign * a[n - 1][n - 1] })
    }

    /// `(s₊, s₋)` from the eigenvalues of the Gram matrix.
    pub fn signature(&self) -> (usize, usize) {
        let eig = symmetric_eigenvalues(&self.gram);
        let pos = eig.iter().filter(|&&x| x > 0.0).count();
        (pos, eig.len() - pos)
    }

    /// The discriminant form `(L^∨ / L, q_L)`, split into prime-power cyclic generators.
    pub fn discriminant_form(&self) -> Result<FiniteQuadraticForm, LatticeError> {
        if !self.is_even() {
            return Err(LatticeError::NotEven);
        }
        let n = self.rank();
        let g: Vec<Vec<i128>> = self.gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let dz = diagonalize(g)?;
        // dual generators y_i = V e_i / d_i; b(y_i, y_j) = (V^T U^{-1})_{ij} / d_i
        let mut cyc: Vec<(i128, usize)> = Vec::new();
        for i in 0..n {
            let d = dz.diag[i].abs();
            if d == 0 {
                return Err(LatticeError::SingularGram);
            }
            if d > 1 {
                cyc.push((d, i));
            }
        }
        let pair = |i: usize, j: usize| -> i128 { (0..n).map(|t| dz.v[t][i] * dz.u_inv[t][j]).sum::<i128>() };
        // split each cyclic factor into prime-power parts
        let mut gens: Vec<(u64, usize, i128)> = Vec::new(); // (order, source idx, multiplier)
        for &(d, i) in &cyc {
            for (p, e) in factorize(d as u64) {
                let pe = (p as i128).pow(e);
                gens.push((pe as u64, i, d / pe));
            }
        }
        gens.sort_by_key(|g| (crate::arith::factorize(g.0)[0].0, std::cmp::Reverse(g.0)));
        let k = gens.len();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![vec![BMod1Z::ZERO; k]; k];
        for a in 0..k {
            let (_, i, mi) = gens[a];
            let di = dz.diag[i].abs() as i64;
            let sgn = dz.diag[i].signum();
            for c in 0..k {
                let (_, j, mj) = gens[c];
                let num = pair(i, j) * sgn * mi * mj;
                b[a][c] = BMod1Z::new(num.rem_euclid(di as i128) as i64, di);
            }
            // q(m y) = m² (y, y), and (y_i, y_i) = pair(i, i) / d_i exactly
            let num = pair(i, i) * sgn * mi * mi;
            q.push(QMod2Z::new(num.rem_euclid(2 * di as i128) as i64, di));
        }
        let orders = gens.iter().map(|g| g.0).collect();
        Ok(FiniteQuadraticForm::new(orders, q, b).expect("discriminant form is nondegenerate"))
    }
}

struct Diagonalized {
    diag: Vec<i128>,
    v: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
}

/// `U G V = diag` with `U, V` unimodular; returns `diag`, `V` and `U^{-1}`.
fn diagonalize(mut a: Vec<Vec<i128>>) -> Result<Diagonalized, LatticeError> {
    let n = a.len();
    let id = |n: usize| -> Vec<Vec<i128>> { (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect() };
    let mut v = id(n);
    let mut u_inv = id(n);
    let ovf = LatticeError::Overflow;
    for t in 0..n {
        loop {
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
            else {
                return Err(LatticeError::SingularGram);
            };
            // rows: a.swap(pi,t) <=> U_inv columns swap
            a.swap(pi, t);
            for r in u_inv.iter_mut() {
                r.swap(pi, t);
            }
            for r in a.iter_mut() {
                r.swap(pj, t);
            }
            for r in v.iter_mut() {
                r.swap(pj, t);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in (t + 1)..n {
                let c = a[i][t].div_euclid(p);
                if c != 0 {
                    // row_i -= c row_t  <=>  U_inv col_t += c col_i
                    for j in 0..n {
                        a[i][j] = a[i][j].checked_sub(c.checked_mul(a[t][j]).ok_or(ovf.clone())?).ok_or(ovf.clone())?;
                    }
                    for r in u_inv.iter_mut() {
                        r[t] = r[t].checked_add(c.checked_mul(r[i]).ok_or(ovf.clone())?).ok_or(ovf.clone())?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in (t + 1)..n {
                let c = a[t][j].div_euclid(p);
                if c != 0 {
                    for r in a.iter_mut() {
                        r[j] = r[j].checked_sub(c.checked_mul(r[t]).ok_or(ovf.clone())?).ok_or(ovf.clone())?;
                    }
                    for r in v.iter_mut() {
                        r[j] = r[j].checked_sub(c.checked_mul(r[t]).ok_or(ovf.clone())?).ok_or(ovf.clone())?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    Ok(Diagonalized { diag: (0..n).map(|i| a[i][i]).collect(), v, u_inv })
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
pub(crate) fn symmetric_eigenvalues(g: &[Vec<i64>]) -> Vec<f64> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-18 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
