// SPDX-License-Identifier: Apache-2.0

//! Integer helpers and exact residues in `Q/2Z` and `Q/Z`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as i64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in ascending prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `(l^ord, unit)` split: largest `e` with `l^e | n`, and `n / l^e`.
pub fn split_prime(n: i64, l: i64) -> (u32, i64) {
    assert!(n != 0, "split_prime of zero");
    let mut n = n;
    let mut e = 0;
    while n % l == 0 {
        n /= l;
        e += 1;
    }
    (e, n)
}

pub fn ipow(base: i64, exp: u32) -> i64 {
    base.checked_pow(exp).expect("integer power overflow")
}

/// Legendre symbol `(a/p)` for an odd prime `p`; returns 0 when `p | a`.
pub fn legendre(a: i64, p: i64) -> i32 {
    debug_assert!(p > 2);
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result: i64 = 1;
    let mut base = a as i128;
    let mut e = (p - 1) / 2;
    let m = p as i128;
    let mut acc: i128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if acc != 1 {
        result = -1;
    }
    result as i32
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i32 {
    assert!(n > 0 && n % 2 == 1, "jacobi needs odd positive modulus");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: i64) -> i64 {
    (2..p).find(|&a| legendre(a, p) == -1).expect("odd prime has a non-residue")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational {0:?}")]
pub struct ParseRationalError(pub String);

fn parse_fraction(s: &str) -> Result<(i64, i64), ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| err())?;
    let d: i64 = d.parse().map_err(|_| err())?;
    if d <= 0 {
        return Err(err());
    }
    Ok((n, d))
}

macro_rules! residue_type {
    ($name:ident, $modulus:expr, $doc:expr) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            num: i64,
            den: i64,
        }

        impl $name {
            pub const ZERO: Self = Self { num: 0, den: 1 };

            /// Reduces `num/den` canonically.
            pub fn new(num: i64, den: i64) -> Self {
                assert!(den != 0, "zero denominator");
                let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
                let g = gcd(num, den);
                if g > 1 {
                    num /= g;
                    den /= g;
                }
                let m = ($modulus as i128) * den as i128;
                let num = (num as i128).rem_euclid(m) as i64;
                if num == 0 {
                    return Self::ZERO;
                }
                Self { num, den }
            }

            pub fn num(self) -> i64 {
                self.num
            }

            pub fn den(self) -> i64 {
                self.den
            }

            pub fn is_zero(self) -> bool {
                self.num == 0
            }

            /// Integer numerator after scaling to the denominator `den`.
            /// Panics when `den` is not a multiple of the reduced denominator.
            pub fn scaled_num(self, den: i64) -> i64 {
                assert!(den % self.den == 0, "denominator {} does not divide {}", self.den, den);
                self.num * (den / self.den)
            }

            pub fn times(self, k: i64) -> Self {
                let n = (self.num as i128 * k as i128).rem_euclid(($modulus as i128) * self.den as i128);
                Self::new(n as i64, self.den)
            }
        }

        impl std::ops::Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let d = lcm(self.den, rhs.den);
                Self::new(self.num * (d / self.den) + rhs.num * (d / rhs.den), d)
            }
        }

        impl std::ops::Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                self + (-rhs)
            }
        }

        impl std::ops::Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self::new(-self.num, self.den)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.den == 1 {
                    write!(f, "{}", self.num)
                } else {
                    write!(f, "{}/{}", self.num, self.den)
                }
            }
        }

        impl FromStr for $name {
            type Err = ParseRationalError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let (n, d) = parse_fraction(s)?;
                Ok(Self::new(n, d))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

residue_type!(QMod2Z, 2, "A rational residue modulo `2Z`, stored in `[0, 2)`.");
residue_type!(BMod1Z, 1, "A rational residue modulo `Z`, stored in `[0, 1)`.");

impl QMod2Z {
    /// Image in `Q/Z`.
    pub fn to_b(self) -> BMod1Z {
        BMod1Z::new(self.num, self.den)
    }

    /// `2 * x` is well defined from `Q/Z` to `Q/2Z`.
    pub fn twice(b: BMod1Z) -> Self {
        Self::new(2 * b.num, b.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_normalize() {
        assert_eq!(QMod2Z::new(-1, 2), QMod2Z::new(3, 2));
        assert_eq!(QMod2Z::new(5, 1), QMod2Z::new(1, 1));
        assert_eq!(QMod2Z::new(8, 4), QMod2Z::ZERO);
        assert_eq!(BMod1Z::new(3, 2), BMod1Z::new(1, 2));
        assert_eq!(QMod2Z::new(3, 2).to_string(), "3/2");
        assert_eq!("-1/2".parse::<QMod2Z>().unwrap(), QMod2Z::new(3, 2));
        assert_eq!(QMod2Z::new(5, 4).times(4), QMod2Z::new(1, 1));
    }

    #[test]
    fn legendre_and_jacobi() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 3), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(-1, 13), 1);
        for n in (1..200).step_by(2) {
            for a in -30..30 {
                if is_prime(n as u64) && n > 2 {
                    assert_eq!(jacobi(a, n), legendre(a, n), "a={a} n={n}");
                }
            }
        }
        assert_eq!(least_nonresidue(7), 3);
    }

    #[test]
    fn factor_and_split() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(split_prime(-48, 2), (4, -3));
        assert_eq!(mod_inverse(3, 8), Some(3));
        assert_eq!(mod_inverse(2, 8), None);
    }
}
