// SPDX-License-Identifier: Apache-2.0

//! Canonical labeling of vertex-colored graphs by individualization and
//! refinement, with automorphism pruning.
//!
//! Two graphs get the same [`CanonicalForm`] exactly when they are isomorphic
//! by a color-preserving bijection. The automorphisms met during the search
//! generate the full automorphism group.

use std::collections::VecDeque;

/// Undirected graph with a color per vertex.
#[derive(Debug, Clone, Default)]
pub struct ColoredGraph {
    adj: Vec<Vec<u32>>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, color: u32) -> u32 {
        self.adj.push(Vec::new());
        self.colors.push(color);
        (self.adj.len() - 1) as u32
    }

    pub fn add_edge(&mut self, a: u32, b: u32) {
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }
}

/// Certificate of a graph up to isomorphism.
pub type CanonicalForm = Vec<u32>;

#[derive(Debug, Clone)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<u32>,
    /// Generators of the automorphism group, as vertex permutations.
    pub automorphisms: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    inv: Vec<u32>,
    /// Start of the cell containing each vertex.
    cell: Vec<u32>,
    /// Cell length, indexed by cell start.
    len: Vec<u32>,
    ncells: usize,
}

impl Partition {
    fn from_colors(colors: &[u32]) -> (Self, Vec<u32>) {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut p = Partition { inv: vec![0; n], cell: vec![0; n], len: vec![0; n], lab, ncells: 0 };
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let c = colors[p.lab[i] as usize];
            let mut j = i;
            while j < n && colors[p.lab[j] as usize] == c {
                j += 1;
            }
            for k in i..j {
                p.cell[p.lab[k] as usize] = i as u32;
            }
            p.len[i] = (j - i) as u32;
            starts.push(i as u32);
            p.ncells += 1;
            i = j;
        }
        for (k, &v) in p.lab.iter().enumerate() {
            p.inv[v as usize] = k as u32;
        }
        (p, starts)
    }

    fn is_discrete(&self) -> bool {
        self.ncells == self.lab.len()
    }

    fn first_nonsingleton(&self) -> Option<u32> {
        let mut i = 0;
        while i < self.lab.len() {
            let l = self.len[i] as usize;
            if l > 1 {
                return Some(i as u32);
            }
            i += l;
        }
        None
    }

    /// Splits `v` off the front of its cell.
    fn individualize(&mut self, v: u32) -> u32 {
        let s = self.cell[v as usize] as usize;
        let l = self.len[s] as usize;
        let pv = self.inv[v as usize] as usize;
        let u = self.lab[s];
        self.lab.swap(s, pv);
        self.inv[u as usize] = pv as u32;
        self.inv[v as usize] = s as u32;
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for k in (s + 1)..(s + l) {
            self.cell[self.lab[k] as usize] = (s + 1) as u32;
        }
        self.ncells += 1;
        s as u32
    }

    /// Refines to the coarsest equitable partition finer than the current one.
    fn refine(&mut self, g: &ColoredGraph, splitters: &[u32]) {
        let n = self.lab.len();
        let mut queue: VecDeque<u32> = splitters.iter().copied().collect();
        let mut in_queue = vec![false; n];
        for &s in splitters {
            in_queue[s as usize] = true;
        }
        let mut count = vec![0u32; n];
        let mut touched: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            in_queue[w as usize] = false;
            if self.is_discrete() {
                break;
            }
            let ws = w as usize;
            let wl = self.len[ws] as usize;
            touched.clear();
            for k in ws..ws + wl {
                let x = self.lab[k];
                for &y in &g.adj[x as usize] {
                    if count[y as usize] == 0 {
                        touched.push(y);
                    }
                    count[y as usize] += 1;
                }
            }
            let mut cells: Vec<u32> = touched.iter().map(|&y| self.cell[y as usize]).collect();
            cells.sort_unstable();
            cells.dedup();
            for &c in &cells {
                let cs = c as usize;
                let cl = self.len[cs] as usize;
                if cl == 1 {
                    continue;
                }
                let mut members: Vec<u32> = self.lab[cs..cs + cl].to_vec();
                let first = count[members[0] as usize];
                if members.iter().all(|&m| count[m as usize] == first) {
                    continue;
                }
                members.sort_by_key(|&m| count[m as usize]);
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut i = 0;
                while i < cl {
                    let k = count[members[i] as usize];
                    let mut j = i;
                    while j < cl && count[members[j] as usize] == k {
                        j += 1;
                    }
                    frags.push((cs + i, j - i));
                    i = j;
                }
                for (k, &m) in members.iter().enumerate() {
                    self.lab[cs + k] = m;
                    self.inv[m as usize] = (cs + k) as u32;
                }
                for &(fs, fl) in &frags {
                    self.len[fs] = fl as u32;
                    for k in fs..fs + fl {
                        self.cell[self.lab[k] as usize] = fs as u32;
                    }
                }
                self.ncells += frags.len() - 1;
                // queue every fragment except one largest unless the old cell was queued
                let was_queued = in_queue[cs];
                let largest =
                    frags.iter().enumerate().max_by_key(|(i, f)| (f.1, std::cmp::Reverse(*i))).map(|(i, _)| i).unwrap();
                for (i, &(fs, _)) in frags.iter().enumerate() {
                    if (was_queued || i != largest) && !in_queue[fs] {
                        in_queue[fs] = true;
                        queue.push_back(fs as u32);
                    }
                }
            }
            for &y in &touched {
                count[y as usize] = 0;
            }
        }
    }
}

fn certificate(g: &ColoredGraph, lab: &[u32], inv: &[u32]) -> Vec<u32> {
    let n = lab.len();
    let mut out = Vec::with_capacity(2 * n + g.adj.iter().map(|a| a.len()).sum::<usize>());
    out.push(n as u32);
    out.extend(lab.iter().map(|&v| g.colors[v as usize]));
    let mut nb: Vec<u32> = Vec::new();
    for &v in lab {
        nb.clear();
        nb.extend(g.adj[v as usize].iter().map(|&u| inv[u as usize]));
        nb.sort_unstable();
        out.push(nb.len() as u32);
        out.extend_from_slice(&nb);
    }
    out
}

struct Search<'a> {
    g: &'a ColoredGraph,
    first: Option<(Vec<u32>, Vec<u32>, Vec<u32>)>, // (cert, lab, path)
    best: Option<(Vec<u32>, Vec<u32>, Vec<u32>)>,
    autos: Vec<Vec<u32>>,
}

enum Outcome {
    Continue,
    /// Abandon everything below the given level.
    JumpTo(usize),
}

fn divergence(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'a> Search<'a> {
    fn leaf(&mut self, p: &Partition, path: &[u32]) -> Outcome {
        let cert = certificate(self.g, &p.lab, &p.inv);
        let Some((fcert, flab, fpath)) = &self.first else {
            self.first = Some((cert.clone(), p.lab.clone(), path.to_vec()));
            self.best = Some((cert, p.lab.clone(), path.to_vec()));
            return Outcome::Continue;
        };
        if &cert == fcert {
            let gamma = self.automorphism(flab, &p.inv);
            self.autos.push(gamma);
            return Outcome::JumpTo(divergence(fpath, path));
        }
        let (bcert, blab, bpath) = self.best.as_ref().unwrap();
        match cert.cmp(bcert) {
            std::cmp::Ordering::Equal => {
                let gamma = self.automorphism(blab, &p.inv);
                let d = divergence(bpath, path);
                self.autos.push(gamma);
                Outcome::JumpTo(d)
            }
            std::cmp::Ordering::Less => {
                self.best = Some((cert, p.lab.clone(), path.to_vec()));
                Outcome::Continue
            }
            std::cmp::Ordering::Greater => Outcome::Continue,
        }
    }

    /// `v ↦ other_lab[inv[v]]`.
    fn automorphism(&self, other_lab: &[u32], inv: &[u32]) -> Vec<u32> {
        inv.iter().map(|&k| other_lab[k as usize]).collect()
    }

    fn node(&mut self, p: Partition, path: &mut Vec<u32>) -> Outcome {
        if p.is_discrete() {
            return self.leaf(&p, path);
        }
        let level = path.len();
        let t = p.first_nonsingleton().unwrap() as usize;
        let cell: Vec<u32> = p.lab[t..t + p.len[t] as usize].to_vec();
        let mut cell_sorted = cell.clone();
        cell_sorted.sort_unstable();
        let mut tried: Vec<u32> = Vec::new();
        for &v in &cell_sorted {
            if !tried.is_empty() && self.equivalent_to_tried(v, &tried, path) {
                continue;
            }
            tried.push(v);
            let mut child = p.clone();
            let s = child.individualize(v);
            child.refine(self.g, &[s]);
            path.push(v);
            let out = self.node(child, path);
            path.pop();
            if let Outcome::JumpTo(d) = out {
                if d < level {
                    return Outcome::JumpTo(d);
                }
            }
        }
        Outcome::Continue
    }

    /// Whether `v` lies in the orbit of a tried vertex under the automorphisms
    /// found so far that fix `path` pointwise.
    fn equivalent_to_tried(&self, v: u32, tried: &[u32], path: &[u32]) -> bool {
        let gens: Vec<&Vec<u32>> = self.autos.iter().filter(|a| path.iter().all(|&x| a[x as usize] == x)).collect();
        if gens.is_empty() {
            return false;
        }
        // orbit of v
        let mut seen = vec![v];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            for a in &gens {
                let y = a[x as usize];
                if !seen.contains(&y) {
                    if tried.contains(&y) {
                        return true;
                    }
                    seen.push(y);
                }
            }
            i += 1;
        }
        false
    }
}

/// Canonical form, canonical labeling and automorphism generators of `g`.
pub fn canonicalize(g: &ColoredGraph) -> Canonical {
    let (mut p, starts) = Partition::from_colors(&g.colors);
    p.refine(g, &starts);
    let mut s = Search { g, first: None, best: None, autos: Vec::new() };
    let mut path = Vec::new();
    if g.is_empty() {
        return Canonical { form: vec![0], labeling: vec![], automorphisms: vec![] };
    }
    s.node(p, &mut path);
    let (form, lab, _) = s.best.unwrap();
    let mut labeling = vec![0u32; lab.len()];
    for (k, &v) in lab.iter().enumerate() {
        labeling[v as usize] = k as u32;
    }
    Canonical { form, labeling, automorphisms: s.autos }
}
