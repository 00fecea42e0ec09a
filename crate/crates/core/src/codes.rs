// SPDX-License-Identifier: Apache-2.0

//! Binary linear codes of length at most 32, the glue-code dictionary for
//! `kA₁`, and an exhaustive classification of doubly-even codes of length 16
//! without words of weight 4.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonicalize, ColoredGraph};
use crate::roots::{Component, DynkinType, GlueSubgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code length {0} outside 1..=32")]
    BadLength(u32),
    #[error("row {0:#x} does not fit in length {1}")]
    RowTooLong(u32, u32),
    #[error("host type {0} is not a multiple of A1")]
    NotElementaryHost(String),
    #[error("dimension {0} too large for word enumeration")]
    DimensionTooLarge(usize),
}

/// A binary code held as a reduced row-echelon basis of bitmasks (bit `i` is coordinate `i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    n: u32,
    rows: Vec<u32>,
}

fn full_mask(n: u32) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1 << n) - 1
    }
}

impl BinaryCode {
    pub fn new(n: u32, generators: &[u32]) -> Result<Self, CodeError> {
        if n == 0 || n > 32 {
            return Err(CodeError::BadLength(n));
        }
        let mut rows: Vec<u32> = Vec::new();
        for &g in generators {
            if g & !full_mask(n) != 0 {
                return Err(CodeError::RowTooLong(g, n));
            }
            let r = reduce(&rows, g);
            if r != 0 {
                rows.push(r);
                rows = rref(rows);
            }
        }
        Ok(Self { n, rows })
    }

    pub fn zero(n: u32) -> Result<Self, CodeError> {
        Self::new(n, &[])
    }

    pub fn len(&self) -> u32 {
        self.n
    }

    /// Always false: codes have positive length.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn contains(&self, w: u32) -> bool {
        reduce(&self.rows, w) == 0
    }

    /// All codewords, in Gray-code order.
    pub fn words(&self) -> Result<Vec<u32>, CodeError> {
        if self.dim() > 20 {
            return Err(CodeError::DimensionTooLarge(self.dim()));
        }
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut w = 0u32;
        out.push(0);
        for i in 1u32..(1 << self.dim()) {
            w ^= self.rows[i.trailing_zeros() as usize];
            out.push(w);
        }
        Ok(out)
    }

    /// `A_i`, the number of codewords of weight `i`, for `i = 0..=n`.
    pub fn weights(&self) -> Result<Vec<u64>, CodeError> {
        let mut a = vec![0u64; self.n as usize + 1];
        for w in self.words()? {
            a[w.count_ones() as usize] += 1;
        }
        Ok(a)
    }

    pub fn is_doubly_even(&self) -> Result<bool, CodeError> {
        Ok(self.weights()?.iter().enumerate().all(|(i, &c)| c == 0 || i % 4 == 0))
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(full_mask(self.n))
    }

    pub fn extend(&self, w: u32) -> Result<Self, CodeError> {
        let mut g = self.rows.clone();
        g.push(w);
        Self::new(self.n, &g)
    }

    /// Canonical form under coordinate permutations.
    pub fn canonical_form(&self) -> Result<Vec<u32>, CodeError> {
        Ok(canonicalize(&self.graph()?.0).form)
    }

    fn graph(&self) -> Result<(ColoredGraph, Vec<u32>), CodeError> {
        let mut g = ColoredGraph::new();
        let cols: Vec<u32> = (0..self.n).map(|_| g.add_vertex(0)).collect();
        let words = self.words()?;
        for &w in words.iter().filter(|&&w| w != 0) {
            let v = g.add_vertex(1);
            for (i, &c) in cols.iter().enumerate() {
                if w >> i & 1 == 1 {
                    g.add_edge(v, c);
                }
            }
        }
        Ok((g, cols))
    }

    /// Column permutations preserving the code, as generators.
    fn automorphisms(&self) -> Result<Vec<Vec<u32>>, CodeError> {
        let (g, cols) = self.graph()?;
        let can = canonicalize(&g);
        Ok(can.automorphisms.iter().map(|a| cols.iter().map(|&c| a[c as usize]).collect()).collect())
    }
}

fn reduce(rows: &[u32], mut w: u32) -> u32 {
    for &r in rows {
        let lead = 31 - r.leading_zeros();
        if w >> lead & 1 == 1 {
            w ^= r;
        }
    }
    w
}

fn rref(mut rows: Vec<u32>) -> Vec<u32> {
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<u32> = Vec::new();
    for r in rows {
        let r = reduce(&out, r);
        if r == 0 {
            continue;
        }
        let lead = 31 - r.leading_zeros();
        for o in out.iter_mut() {
            if *o >> lead & 1 == 1 {
                *o ^= r;
            }
        }
        out.push(r);
        out.sort_unstable_by(|a, b| b.cmp(a));
    }
    out
}

impl fmt::Display for BinaryCode {
    /// Hex row masks followed by the nonzero weight-enumerator coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:#06x}")).collect();
        write!(f, "[{},{}] rows {}", self.n, self.dim(), rows.join(" "))?;
        if let Ok(w) = self.weights() {
            let terms: Vec<String> =
                w.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, c)| format!("{c}x^{i}")).collect();
            write!(f, " W = {}", terms.join(" + "))?;
        }
        Ok(())
    }
}

impl Serialize for BinaryCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BinaryCode", 3)?;
        st.serialize_field("length", &self.n)?;
        st.serialize_field("rows", &self.rows.iter().map(|r| format!("{r:#x}")).collect::<Vec<_>>())?;
        st.serialize_field("weights", &self.weights().unwrap_or_default())?;
        st.end()
    }
}

/// First-order Reed–Muller code `RM(1, 4)`, a `[16, 5, 8]` code.
pub fn reed_muller_1_4() -> BinaryCode {
    let mut g = vec![0xFFFFu32];
    for bit in 0..4 {
        g.push((0..16u32).filter(|x| x >> bit & 1 == 1).fold(0, |m, x| m | 1 << x));
    }
    BinaryCode::new(16, &g).unwrap()
}

/// Outcome of the length-16 classification.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma52Report {
    /// Equivalence classes of codes with all nonzero weights in {8, 12, 16}, by dimension.
    pub classes_by_dim: BTreeMap<usize, usize>,
    /// Codes of dimension at least 5 missing the all-ones word.
    pub counterexamples: Vec<BinaryCode>,
    /// Representatives of dimension 5.
    pub dim5: Vec<BinaryCode>,
}

/// Classifies, up to coordinate permutation, all binary codes of length 16
/// whose nonzero weights lie in {8, 12, 16}, growing one generator at a time.
pub fn lemma52_search() -> Lemma52Report {
    const N: u32 = 16;
    let allowed = |w: u32| matches!(w.count_ones(), 8 | 12 | 16);
    let cands: Vec<u32> = (1u32..1 << N).filter(|&w| allowed(w)).collect();
    let mut level = vec![BinaryCode::zero(N).unwrap()];
    let mut classes_by_dim = BTreeMap::from([(0usize, 1usize)]);
    let mut counterexamples = Vec::new();
    let mut dim5 = Vec::new();
    while !level.is_empty() {
        let mut next: Vec<BinaryCode> = Vec::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for c in &level {
            let words = c.words().unwrap();
            let autos = c.automorphisms().unwrap();
            let mut tried: HashSet<u32> = HashSet::new();
            for &w in &cands {
                if c.contains(w) || tried.contains(&w) {
                    continue;
                }
                // the whole coset w + C is the same extension, and so is its image under Aut(C)
                let mut orbit = vec![w];
                let mut i = 0;
                while i < orbit.len() {
                    let x = orbit[i];
                    i += 1;
                    for y in words.iter().map(|&u| u ^ x).chain(autos.iter().map(|a| permute(a, x))) {
                        if tried.insert(y) {
                            orbit.push(y);
                        }
                    }
                }
                if !words.iter().all(|&u| allowed(u ^ w)) {
                    continue;
                }
                let d = c.extend(w).unwrap();
                if seen.insert(d.canonical_form().unwrap()) {
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let dim = next[0].dim();
        classes_by_dim.insert(dim, next.len());
        for d in &next {
            if dim >= 5 && !d.contains_all_ones() {
                counterexamples.push(d.clone());
            }
            if dim == 5 {
                dim5.push(d.clone());
            }
        }
        level = next;
    }
    classes_by_dim.entry(6).or_insert(0);
    Lemma52Report { classes_by_dim, counterexamples, dim5 }
}

fn permute(perm: &[u32], w: u32) -> u32 {
    let mut out = 0;
    for (i, &j) in perm.iter().enumerate() {
        if w >> i & 1 == 1 {
            out |= 1 << j;
        }
    }
    out
}

fn check_elementary(r: &DynkinType) -> Result<u32, CodeError> {
    if r.components().iter().all(|&c| c == Component::A(1)) && r.components().len() <= 32 && !r.is_empty() {
        Ok(r.components().len() as u32)
    } else {
        Err(CodeError::NotElementaryHost(r.to_string()))
    }
}

/// The binary code of a glue subgroup of `kA₁`.
pub fn glue_code(r: &DynkinType, h: &GlueSubgroup) -> Result<BinaryCode, CodeError> {
    let k = check_elementary(r)?;
    let rows: Vec<u32> =
        h.generators.iter().map(|g| g.iter().enumerate().fold(0u32, |m, (i, &a)| m | ((a as u32 & 1) << i))).collect();
    BinaryCode::new(k, &rows)
}

/// The glue subgroup of `kA₁` spanned by a code.
pub fn code_glue(c: &BinaryCode) -> GlueSubgroup {
    let vec_of = |w: u32| (0..c.len()).map(|i| (w >> i & 1) as u8).collect::<Vec<u8>>();
    GlueSubgroup {
        generators: c.rows().iter().map(|&r| vec_of(r)).collect(),
        elements: c.words().unwrap_or_default().into_iter().map(vec_of).collect(),
    }
}

/// Whether the glue code of an overlattice of `Σ⁻_{kA₁}` contains the all-ones word.
pub fn kummer_check(r: &DynkinType, h: &GlueSubgroup) -> Result<bool, CodeError> {
    Ok(glue_code(r, h)?.contains_all_ones())
}
