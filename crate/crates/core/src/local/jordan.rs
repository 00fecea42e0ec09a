// SPDX-License-Identifier: Apache-2.0

//! `l`-adic Jordan decomposition of small integral lattices, computed modulo a
//! power of `l` large enough to carry every pivot.

use super::{LocalError, LocalInvariant, SquareClass};
use crate::arith::{mod_inverse, split_prime};
use crate::lattice::GramLattice;

/// One orthogonal summand `l^ν B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanBlock {
    /// Rank one, `l^ν [a]` with `a` a unit.
    Unit { nu: u32, class: SquareClass },
    /// `2^ν U`.
    U { nu: u32 },
    /// `2^ν V`.
    V { nu: u32 },
}

impl JordanBlock {
    pub fn nu(&self) -> u32 {
        match *self {
            JordanBlock::Unit { nu, .. } | JordanBlock::U { nu } | JordanBlock::V { nu } => nu,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            JordanBlock::Unit { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub l: u64,
    pub blocks: Vec<JordanBlock>,
}

impl JordanDecomposition {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }

    /// Per scale `ν`: total rank and discriminant class of `L_ν`.
    pub fn summands(&self) -> Vec<(u32, usize, SquareClass)> {
        let mut nus: Vec<u32> = self.blocks.iter().map(|b| b.nu()).collect();
        nus.sort_unstable();
        nus.dedup();
        nus.into_iter()
            .map(|nu| {
                let bs: Vec<_> = self.blocks.iter().filter(|b| b.nu() == nu).collect();
                let rank = bs.iter().map(|b| b.rank()).sum();
                let disc = bs.iter().fold(unit_one(self.l), |acc, b| acc.mul_same(block_disc(b)));
                (nu, rank, disc)
            })
            .collect()
    }
}

fn unit_one(l: u64) -> SquareClass {
    if l == 2 {
        SquareClass::two_adic(1)
    } else {
        SquareClass::square(l)
    }
}

fn block_disc(b: &JordanBlock) -> SquareClass {
    match *b {
        JordanBlock::Unit { class, .. } => class,
        JordanBlock::U { .. } => SquareClass::two_adic(-1),
        JordanBlock::V { .. } => SquareClass::two_adic(3),
    }
}

/// Jordan decomposition of `L ⊗ Z_l` (rank at most 8).
pub fn jordan_decompose(l: u64, lat: &GramLattice) -> Result<JordanDecomposition, LocalError> {
    let n = lat.rank();
    assert!(n <= 8, "Jordan oracle is limited to rank 8");
    let det = lat.determinant().map_err(|_| LocalError::NotAUnit(0, l))?;
    if det == 0 {
        return Err(LocalError::NotAUnit(0, l));
    }
    let vdet = split_prime(det as i64, l as i64).0;
    let mut k = 2 * vdet + 8;
    while (l as u128).checked_pow(k).is_none_or(|x| x > 1u128 << 62) {
        k -= 1;
    }
    let m = l.pow(k) as u128;
    let red = |x: i128| x.rem_euclid(m as i128) as u128;
    let mut a: Vec<Vec<u128>> = lat.gram().iter().map(|r| r.iter().map(|&x| red(x as i128)).collect()).collect();
    let val = |x: u128| -> u32 {
        if x == 0 {
            return k;
        }
        let mut x = x;
        let mut v = 0;
        while x.is_multiple_of(l as u128) {
            x /= l as u128;
            v += 1;
        }
        v
    };
    let mulm = |x: u128, y: u128| x * y % m;
    let subm = |x: u128, y: u128| (x + m - y) % m;
    let mut active: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    while !active.is_empty() {
        let v =
            active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).map(|(i, j)| val(a[i][j])).min().unwrap();
        let lv = (l as u128).pow(v);
        let diag = active.iter().copied().find(|&i| val(a[i][i]) == v);
        let pivot = match diag {
            Some(i) => vec![i],
            None => {
                let (i, j) = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && val(a[i][j]) == v)
                    .unwrap();
                if l == 2 {
                    vec![i, j]
                } else {
                    // e_i <- e_i + e_j makes the diagonal reach valuation v
                    for t in 0..n {
                        a[i][t] = (a[i][t] + a[j][t]) % m;
                    }
                    for t in 0..n {
                        a[t][i] = (a[t][i] + a[t][j]) % m;
                    }
                    vec![i]
                }
            }
        };
        let rest: Vec<usize> = active.iter().copied().filter(|x| !pivot.contains(x)).collect();
        let scaled = |x: u128| x / lv;
        if pivot.len() == 1 {
            let i = pivot[0];
            let u = scaled(a[i][i]);
            let uinv = mod_inverse((u % m) as i64, m as i64).expect("unit") as u128;
            for &j in &rest {
                let c = mulm(scaled(a[j][i]), uinv);
                for t in 0..n {
                    a[j][t] = subm(a[j][t], mulm(c, a[i][t]));
                }
                for t in 0..n {
                    a[t][j] = subm(a[t][j], mulm(c, a[t][i]));
                }
            }
            let class = if l == 2 {
                SquareClass::two_adic((u % 8) as i64)
            } else if crate::arith::legendre((u % l as u128) as i64, l as i64) == 1 {
                SquareClass::square(l)
            } else {
                SquareClass::nonsquare(l)
            };
            blocks.push(JordanBlock::Unit { nu: v, class });
        } else {
            let (i, j) = (pivot[0], pivot[1]);
            let (p, r, s) = (scaled(a[i][i]), scaled(a[i][j]), scaled(a[j][j]));
            let det = subm(mulm(p, s), mulm(r, r));
            let dinv = mod_inverse((det % m) as i64, m as i64).expect("unit") as u128;
            for &t in &rest {
                let (x, y) = (scaled(a[t][i]), scaled(a[t][j]));
                let c1 = mulm(dinv, subm(mulm(s, x), mulm(r, y)));
                let c2 = mulm(dinv, subm(mulm(p, y), mulm(r, x)));
                for w in 0..n {
                    let d = (mulm(c1, a[i][w]) + mulm(c2, a[j][w])) % m;
                    a[t][w] = subm(a[t][w], d);
                }
                for w in 0..n {
                    let d = (mulm(c1, a[w][i]) + mulm(c2, a[w][j])) % m;
                    a[w][t] = subm(a[w][t], d);
                }
            }
            let (hs, hu) = (p / 2, s / 2);
            blocks.push(if (hs * hu) % 2 == 0 { JordanBlock::U { nu: v } } else { JordanBlock::V { nu: v } });
        }
        active = rest;
    }
    blocks.sort_by_key(|b| b.nu());
    Ok(JordanDecomposition { l, blocks })
}

fn block_excess(l: u64, b: &JordanBlock) -> i64 {
    match *b {
        JordanBlock::Unit { nu, class } => {
            let lnu = (l as i64).pow(nu) % 8;
            if l == 2 {
                let a = class.residue().unwrap() as i64;
                if nu % 2 == 0 || a == 1 || a == 7 {
                    1 - a
                } else {
                    5 - a
                }
            } else if nu % 2 == 0 || class.is_square() {
                lnu - 1
            } else {
                lnu + 3
            }
        }
        JordanBlock::U { .. } => 2,
        JordanBlock::V { nu } => 4 - if nu % 2 == 0 { 2 } else { -2 },
    }
}

/// `[l-excess, reddisc]` of a Jordan decomposition.
pub fn tau_of_jordan(j: &JordanDecomposition) -> LocalInvariant {
    let sigma: i64 = j.blocks.iter().map(|b| block_excess(j.l, b)).sum();
    let rho = j.blocks.iter().fold(unit_one(j.l), |acc, b| acc.mul_same(block_disc(b)));
    LocalInvariant::new(sigma, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(g: Vec<Vec<i64>>) -> GramLattice {
        GramLattice::new(g).unwrap()
    }

    #[test]
    fn a2_at_three() {
        let j = jordan_decompose(3, &lat(vec![vec![-2, 1], vec![1, -2]])).unwrap();
        let nus: Vec<u32> = j.blocks.iter().map(|b| b.nu()).collect();
        assert_eq!(nus, vec![0, 1]);
    }

    #[test]
    fn hyperbolic_plane_and_a1() {
        let j = jordan_decompose(2, &lat(vec![vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!(j.blocks, vec![JordanBlock::U { nu: 0 }]);
        let j = jordan_decompose(2, &lat(vec![vec![-2]])).unwrap();
        assert_eq!(j.blocks, vec![JordanBlock::Unit { nu: 1, class: SquareClass::two_adic(7) }]);
        assert_eq!(tau_of_jordan(&j).to_string(), "[2,7]");
    }

    #[test]
    fn eleven_hyperbolic_planes() {
        let j = JordanDecomposition { l: 2, blocks: vec![JordanBlock::U { nu: 0 }; 11] };
        assert_eq!(tau_of_jordan(&j).to_string(), "[6,7]");
    }

    #[test]
    fn v_block() {
        let j = jordan_decompose(2, &lat(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert_eq!(j.blocks, vec![JordanBlock::V { nu: 0 }]);
        assert_eq!(tau_of_jordan(&j).to_string(), "[2,3]");
    }
}
