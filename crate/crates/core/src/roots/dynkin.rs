// SPDX-License-Identifier: Apache-2.0

//! ADE Dynkin types as multisets of connected components.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynkinError {
    #[error("cannot parse Dynkin type {0:?}")]
    Parse(String),
    #[error("illegal component {0}")]
    IllegalComponent(String),
}

/// A connected ADE diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    A(u32),
    D(u32),
    E(u32),
}

impl Component {
    pub fn new(letter: char, n: u32) -> Result<Self, DynkinError> {
        match letter {
            'A' if n >= 1 => Ok(Component::A(n)),
            'D' if n >= 4 => Ok(Component::D(n)),
            'E' if (6..=8).contains(&n) => Ok(Component::E(n)),
            _ => Err(DynkinError::IllegalComponent(format!("{letter}{n}"))),
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            Component::A(n) | Component::D(n) | Component::E(n) => n,
        }
    }

    /// Order of the discriminant group.
    pub fn disc(self) -> u64 {
        match self {
            Component::A(n) => n as u64 + 1,
            Component::D(_) => 4,
            Component::E(6) => 3,
            Component::E(7) => 2,
            Component::E(_) => 1,
        }
    }

    fn letter_rank(self) -> u8 {
        match self {
            Component::E(_) => 0,
            Component::D(_) => 1,
            Component::A(_) => 2,
        }
    }

    /// Adjacency lists of the diagram.
    pub(crate) fn diagram(self) -> Vec<Vec<usize>> {
        let n = self.rank() as usize;
        let mut adj = vec![Vec::new(); n];
        let mut edge = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        match self {
            Component::A(_) => (1..n).for_each(|i| edge(i - 1, i)),
            Component::D(_) => {
                // chain 0..n-2, with n-1 also attached to n-3
                (1..n - 1).for_each(|i| edge(i - 1, i));
                edge(n - 3, n - 1);
            }
            Component::E(_) => {
                // chain 0..n-2 with n-1 attached to 2
                (1..n - 1).for_each(|i| edge(i - 1, i));
                edge(2, n - 1);
            }
        }
        adj
    }
}

impl Ord for Component {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letter_rank().cmp(&other.letter_rank()).then(other.rank().cmp(&self.rank()))
    }
}

impl PartialOrd for Component {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::A(n) => write!(f, "A{n}"),
            Component::D(n) => write!(f, "D{n}"),
            Component::E(n) => write!(f, "E{n}"),
        }
    }
}

/// A Dynkin type, kept in canonical order (E, then D, then A; rank descending).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DynkinType {
    comps: Vec<Component>,
}

impl DynkinType {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_components(mut comps: Vec<Component>) -> Self {
        comps.sort();
        Self { comps }
    }

    /// Components with multiplicity, in canonical order.
    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.comps.iter().map(|c| c.rank()).sum()
    }

    pub fn disc(&self) -> u64 {
        self.comps.iter().map(|c| c.disc()).product()
    }

    /// `(component, multiplicity)` in canonical order.
    pub fn grouped(&self) -> Vec<(Component, usize)> {
        let mut out: Vec<(Component, usize)> = Vec::new();
        for &c in &self.comps {
            match out.last_mut() {
                Some((d, m)) if *d == c => *m += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::from_components([self.comps.clone(), other.comps.clone()].concat())
    }

    /// All types obtained by deleting one vertex.
    pub fn children(&self) -> BTreeSet<DynkinType> {
        let mut out = BTreeSet::new();
        for (i, &c) in self.comps.iter().enumerate() {
            if i > 0 && self.comps[i - 1] == c {
                continue;
            }
            let rest: Vec<Component> =
                self.comps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).collect();
            let adj = c.diagram();
            for v in 0..adj.len() {
                let keep: Vec<usize> = (0..adj.len()).filter(|&u| u != v).collect();
                let mut comps = rest.clone();
                comps.extend(induced_type(&adj, &keep));
                out.insert(DynkinType::from_components(comps));
            }
        }
        out
    }

    /// Whether `other` is obtained from `self` by deleting vertices.
    pub fn s_contains(&self, other: &DynkinType) -> bool {
        let mut memo = HashMap::new();
        contains_rec(self, other, &mut memo)
    }
}

fn contains_rec(cur: &DynkinType, target: &DynkinType, memo: &mut HashMap<DynkinType, bool>) -> bool {
    if cur == target {
        return true;
    }
    if cur.rank() <= target.rank() || cur.comps.len() + (cur.rank() - target.rank()) as usize * 2 < target.comps.len() {
        return false;
    }
    if let Some(&r) = memo.get(cur) {
        return r;
    }
    let r = cur.children().iter().any(|ch| contains_rec(ch, target, memo));
    memo.insert(cur.clone(), r);
    r
}

/// Dynkin type of the subgraph of an ADE tree induced on `keep`.
pub(crate) fn induced_type(adj: &[Vec<usize>], keep: &[usize]) -> Vec<Component> {
    let inside: BTreeSet<usize> = keep.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in keep {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if inside.contains(&y) && seen.insert(y) {
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        out.push(tree_type(adj, &comp, &inside));
    }
    out
}

fn tree_type(adj: &[Vec<usize>], comp: &[usize], inside: &BTreeSet<usize>) -> Component {
    let n = comp.len() as u32;
    let deg = |x: usize| adj[x].iter().filter(|y| inside.contains(y)).count();
    let Some(&center) = comp.iter().find(|&&x| deg(x) >= 3) else {
        return Component::A(n);
    };
    // arm lengths from the branch vertex
    let mut arms: Vec<u32> = adj[center]
        .iter()
        .filter(|y| inside.contains(y))
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (center, start, 1);
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&y| y != prev && inside.contains(&y)).collect();
                match next.as_slice() {
                    [y] => {
                        prev = cur;
                        cur = *y;
                        len += 1;
                    }
                    _ => break len,
                }
            }
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => Component::D(n),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Component::E(n),
        _ => unreachable!("subdiagram of an ADE diagram is ADE"),
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.grouped().into_iter().map(|(c, m)| if m == 1 { c.to_string() } else { format!("{m}{c}") }).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for DynkinType {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, DynkinError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Ok(Self::empty());
        }
        let err = || DynkinError::Parse(s.to_string());
        let mut comps = Vec::new();
        for part in compact.split('+') {
            let pos = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(err)?;
            let (mult, rest) = part.split_at(pos);
            let mult: usize = if mult.is_empty() { 1 } else { mult.parse().map_err(|_| err())? };
            let mut chars = rest.chars();
            let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
            let n: u32 = chars.as_str().parse().map_err(|_| err())?;
            if mult == 0 {
                return Err(err());
            }
            let c = Component::new(letter, n)?;
            comps.extend(std::iter::repeat_n(c, mult));
        }
        Ok(Self::from_components(comps))
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Every connected component of rank at most `max_rank`, in canonical order.
fn all_components(max_rank: u32) -> Vec<Component> {
    let mut v = Vec::new();
    for n in (6..=8).rev() {
        if n <= max_rank {
            v.push(Component::E(n));
        }
    }
    for n in (4..=max_rank).rev() {
        v.push(Component::D(n));
    }
    for n in (1..=max_rank).rev() {
        v.push(Component::A(n));
    }
    v
}

/// All nonempty Dynkin types of rank at most `max_rank`, by ascending rank.
pub fn enumerate_dynkin_types(max_rank: u32) -> Vec<DynkinType> {
    let comps = all_components(max_rank);
    let mut by_rank: BTreeMap<u32, Vec<DynkinType>> = BTreeMap::new();
    fn rec(
        comps: &[Component],
        start: usize,
        left: u32,
        cur: &mut Vec<Component>,
        out: &mut BTreeMap<u32, Vec<DynkinType>>,
    ) {
        if !cur.is_empty() {
            let t = DynkinType { comps: cur.clone() };
            out.entry(t.rank()).or_default().push(t);
        }
        for i in start..comps.len() {
            let r = comps[i].rank();
            if r <= left {
                cur.push(comps[i]);
                rec(comps, i, left - r, cur, out);
                cur.pop();
            }
        }
    }
    rec(&comps, 0, max_rank, &mut Vec::new(), &mut by_rank);
    by_rank
        .into_values()
        .flat_map(|mut v| {
            v.sort();
            v
        })
        .collect()
}
