//! Canonical labeling of edge-colored graphs by individualization and
//! refinement.
//!
//! The search keeps an ordered partition, refines it to equitability against
//! every edge color, individualizes vertices from a target cell and explores
//! the resulting tree. Leaves yield labelings; the certificate is the least
//! (invariant-path, adjacency-bytes) pair over all leaves, so its value does
//! not depend on the input vertex order. Discovered automorphisms prune
//! candidates lying in one orbit, and callers may seed the search with known
//! automorphisms; seeds are verified before use.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::bitgraph::BitGraph;
use crate::error::{Error, Result};

/// A graph whose edges carry colors 1..=num_colors (0 encodes a non-edge).
pub struct ColoredGraph {
    n: usize,
    words: usize,
    num_colors: usize,
    color: Vec<u8>,
    adj: Vec<Vec<u64>>,
}

impl ColoredGraph {
    pub fn new(n: usize, num_colors: usize) -> ColoredGraph {
        assert!(num_colors >= 1 && num_colors < 255);
        let words = n.div_ceil(64);
        ColoredGraph {
            n,
            words,
            num_colors,
            color: vec![0u8; n * n],
            adj: vec![vec![0u64; n * words]; num_colors],
        }
    }

    pub fn from_bitgraph(g: &BitGraph) -> ColoredGraph {
        let mut cg = ColoredGraph::new(g.n(), 1);
        for u in 0..g.n() {
            for v in g.neighbors(u) {
                if v > u {
                    cg.set_edge(u, v, 1);
                }
            }
        }
        cg
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn set_edge(&mut self, u: usize, v: usize, c: u8) {
        debug_assert!(u != v && c >= 1 && (c as usize) <= self.num_colors);
        self.color[u * self.n + v] = c;
        self.color[v * self.n + u] = c;
        let a = &mut self.adj[c as usize - 1];
        a[u * self.words + v / 64] |= 1 << (v % 64);
        a[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn color_of(&self, u: usize, v: usize) -> u8 {
        self.color[u * self.n + v]
    }

    fn is_automorphism(&self, perm: &[u32]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in perm {
            if v as usize >= self.n || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.color_of(u, v) != self.color_of(perm[u] as usize, perm[v] as usize) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy)]
struct Cell {
    start: u32,
    len: u32,
}

#[derive(Clone)]
struct Partition {
    order: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    cells: Vec<Cell>,
}

impl Partition {
    fn unit(n: usize) -> Partition {
        Partition {
            order: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell_of: vec![0; n],
            cells: vec![Cell {
                start: 0,
                len: n as u32,
            }],
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.order.len()
    }

    /// First largest non-singleton cell, in position order.
    fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut best_id = None;
        for (id, c) in self.cells.iter().enumerate() {
            if c.len <= 1 {
                continue;
            }
            let better = match best {
                None => true,
                Some((l, s)) => c.len > l || (c.len == l && c.start < s),
            };
            if better {
                best = Some((c.len, c.start));
                best_id = Some(id as u32);
            }
        }
        best_id
    }

    fn cell_vertices(&self, id: u32) -> &[u32] {
        let c = self.cells[id as usize];
        &self.order[c.start as usize..(c.start + c.len) as usize]
    }

    /// Split {v} off the front of its cell; returns the two part ids.
    fn individualize(&mut self, v: u32) -> (u32, u32) {
        let x = self.cell_of[v as usize];
        let c = self.cells[x as usize];
        debug_assert!(c.len >= 2);
        let pv = self.pos[v as usize];
        let other = self.order[c.start as usize];
        self.order.swap(c.start as usize, pv as usize);
        self.pos[v as usize] = c.start;
        self.pos[other as usize] = pv;
        self.cells[x as usize].len = 1;
        let new_id = self.cells.len() as u32;
        self.cells.push(Cell {
            start: c.start + 1,
            len: c.len - 1,
        });
        for i in (c.start + 1)..(c.start + c.len) {
            self.cell_of[self.order[i as usize] as usize] = new_id;
        }
        (x, new_id)
    }

    /// Equitable refinement against all edge colors; returns an
    /// isomorphism-invariant trace of the splitting history.
    fn refine(&mut self, g: &ColoredGraph, initial: &[u32]) -> u64 {
        let n = g.n;
        let mut in_queue = vec![false; self.cells.len()];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &w in initial {
            if !in_queue[w as usize] {
                in_queue[w as usize] = true;
                queue.push_back(w);
            }
        }
        let mut trace = 0xcbf29ce484222325u64;
        let mut cnt = vec![0u32; n];
        let mut touched: Vec<u32> = Vec::new();
        let mut affected: Vec<u32> = Vec::new();

        while let Some(w) = queue.pop_front() {
            in_queue[w as usize] = false;
            for col in 0..g.num_colors {
                touched.clear();
                affected.clear();
                {
                    let wc = self.cells[w as usize];
                    let a = &g.adj[col];
                    for i in wc.start..wc.start + wc.len {
                        let u = self.order[i as usize] as usize;
                        for (wi, &word) in a[u * g.words..(u + 1) * g.words].iter().enumerate() {
                            let mut bits = word;
                            while bits != 0 {
                                let v = wi * 64 + bits.trailing_zeros() as usize;
                                bits &= bits - 1;
                                if cnt[v] == 0 {
                                    touched.push(v as u32);
                                }
                                cnt[v] += 1;
                            }
                        }
                    }
                }
                for &v in &touched {
                    let c = self.cell_of[v as usize];
                    if !affected.contains(&c) {
                        affected.push(c);
                    }
                }
                affected.sort_unstable();
                trace = mix(trace, (w as u64) << 32 | col as u64);
                for &x in &affected {
                    let c = self.cells[x as usize];
                    if c.len == 1 {
                        let u = self.order[c.start as usize] as usize;
                        trace = mix(trace, (x as u64) << 32 | cnt[u] as u64);
                        continue;
                    }
                    let slice = &mut self.order[c.start as usize..(c.start + c.len) as usize];
                    slice.sort_by_key(|&v| cnt[v as usize]);
                    let mut parts: Vec<(u32, u32)> = Vec::new();
                    let mut begin = 0usize;
                    for i in 1..=slice.len() {
                        if i == slice.len()
                            || cnt[slice[i] as usize] != cnt[slice[begin] as usize]
                        {
                            parts.push((begin as u32, (i - begin) as u32));
                            begin = i;
                        }
                    }
                    trace = mix(trace, (x as u64) << 32 | parts.len() as u64);
                    for &(off, len) in &parts {
                        let v = cnt[slice[off as usize] as usize] as u64;
                        trace = mix(trace, v << 32 | len as u64);
                    }
                    for (i, &v) in slice.iter().enumerate() {
                        self.pos[v as usize] = c.start + i as u32;
                    }
                    if parts.len() == 1 {
                        continue;
                    }
                    self.cells[x as usize].len = parts[0].1;
                    let mut part_ids = vec![x];
                    for &(off, len) in &parts[1..] {
                        let id = self.cells.len() as u32;
                        self.cells.push(Cell {
                            start: c.start + off,
                            len,
                        });
                        in_queue.push(false);
                        for i in c.start + off..c.start + off + len {
                            self.cell_of[self.order[i as usize] as usize] = id;
                        }
                        part_ids.push(id);
                    }
                    for id in part_ids {
                        if !in_queue[id as usize] {
                            in_queue[id as usize] = true;
                            queue.push_back(id);
                        }
                    }
                }
                for &v in &touched {
                    cnt[v as usize] = 0;
                }
            }
        }
        for c in &self.cells {
            trace = mix(trace, (c.start as u64) << 32 | c.len as u64);
        }
        trace
    }
}

#[inline]
fn mix(h: u64, v: u64) -> u64 {
    let mut x = h ^ v.wrapping_mul(0x9e3779b97f4a7c15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Canonical labeling plus the certificate body: the canonically relabeled
/// colored adjacency, read above the diagonal row by row.
pub struct CanonOutcome {
    pub labeling: Vec<u32>,
    pub certificate: Vec<u8>,
    pub generators: Vec<Vec<u32>>,
    pub leaves_explored: u64,
}

struct Best {
    path: Vec<u64>,
    bytes: Vec<u8>,
    labeling: Vec<u32>,
}

struct Search<'g> {
    g: &'g ColoredGraph,
    best: Option<Best>,
    gens: Vec<Vec<u32>>,
    leaves: u64,
    nodes: u64,
    node_budget: u64,
}

/// Budget on search-tree nodes; certificates raise an error rather than
/// approximate when it is exceeded.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

pub fn canonical_form(g: &ColoredGraph, seeds: &[Vec<u32>]) -> Result<CanonOutcome> {
    canonical_form_budgeted(g, seeds, DEFAULT_NODE_BUDGET)
}

pub fn canonical_form_budgeted(
    g: &ColoredGraph,
    seeds: &[Vec<u32>],
    node_budget: u64,
) -> Result<CanonOutcome> {
    let mut gens = Vec::new();
    for s in seeds {
        if !g.is_automorphism(s) {
            return Err(Error::Internal(
                "seed permutation is not an automorphism".into(),
            ));
        }
        if !is_identity(s) {
            gens.push(s.clone());
        }
    }
    let mut search = Search {
        g,
        best: None,
        gens,
        leaves: 0,
        nodes: 0,
        node_budget,
    };
    let mut root = Partition::unit(g.n);
    let trace = root.refine(g, &[0]);
    search.explore(root, &[trace], &mut Vec::new())?;
    let best = search.best.take().expect("at least one leaf exists");
    Ok(CanonOutcome {
        labeling: best.labeling,
        certificate: best.bytes,
        generators: search.gens,
        leaves_explored: search.leaves,
    })
}

fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &v)| i as u32 == v)
}

const NO_JUMP: usize = usize::MAX;

impl<'g> Search<'g> {
    /// Explore one node; the return value is a backjump target: when an
    /// automorphism shows the current branch repeats an explored sibling
    /// subtree, every level deeper than the target abandons its remaining
    /// work immediately.
    fn explore(&mut self, part: Partition, path: &[u64], prefix: &mut Vec<u32>) -> Result<usize> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::BudgetExceeded {
                explored: self.nodes,
                found: 0,
            });
        }
        if let Some(best) = &self.best {
            let d = path.len() - 1;
            if d >= best.path.len() {
                // equal prefix but deeper: the shallower leaf wins
                return Ok(NO_JUMP);
            }
            match path[d].cmp(&best.path[d]) {
                Ordering::Greater => return Ok(NO_JUMP),
                // strictly better prefix: everything recorded so far is beaten
                Ordering::Less => self.best = None,
                Ordering::Equal => {}
            }
        }
        if part.is_discrete() {
            return Ok(self.handle_leaf(&part, path, prefix));
        }
        let target = part.target_cell().expect("non-discrete partition has a target");
        let mut candidates: Vec<u32> = part.cell_vertices(target).to_vec();
        candidates.sort_unstable();

        let level = prefix.len();
        let mut explored: Vec<u32> = Vec::new();
        let mut uf: Option<Vec<u32>> = None;
        let mut uf_gen_count = usize::MAX;

        for &v in &candidates {
            if !explored.is_empty() {
                if uf_gen_count != self.gens.len() {
                    uf = Some(self.orbits_fixing(prefix));
                    uf_gen_count = self.gens.len();
                }
                let uf = uf.as_ref().unwrap();
                if explored.iter().any(|&u| uf[u as usize] == uf[v as usize]) {
                    continue;
                }
            }
            let mut child = part.clone();
            let (a, b) = child.individualize(v);
            let tr = child.refine(self.g, &[a, b]);
            let mut cpath = Vec::with_capacity(path.len() + 1);
            cpath.extend_from_slice(path);
            cpath.push(tr);
            prefix.push(v);
            let r = self.explore(child, &cpath, prefix);
            prefix.pop();
            explored.push(v);
            let bj = r?;
            if bj < level {
                return Ok(bj);
            }
        }
        Ok(NO_JUMP)
    }

    fn handle_leaf(&mut self, part: &Partition, path: &[u64], prefix: &[u32]) -> usize {
        self.leaves += 1;
        let bytes = leaf_bytes(self.g, &part.order);
        let mut backjump = NO_JUMP;
        let replace = match &self.best {
            None => true,
            Some(best) => {
                if path.len() < best.path.len() {
                    true
                } else {
                    debug_assert_eq!(path.len(), best.path.len());
                    match bytes.cmp(&best.bytes) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            // two labelings with one certificate: automorphism.
                            // It maps the explored sibling branch onto the
                            // current one above the deepest path vertex it
                            // fixes, so the search can jump back there.
                            let perm = compose_labelings(&best.labeling, &part.order);
                            if !is_identity(&perm) && self.g.is_automorphism(&perm) {
                                backjump = prefix
                                    .iter()
                                    .position(|&v| perm[v as usize] != v)
                                    .unwrap_or(prefix.len());
                                if self.gens.len() < 256 {
                                    self.gens.push(perm);
                                }
                            }
                            false
                        }
                    }
                }
            }
        };
        if replace {
            self.best = Some(Best {
                path: path.to_vec(),
                bytes,
                labeling: part.order.clone(),
            });
        }
        backjump
    }

    /// Union-find roots under all generators fixing `prefix` pointwise.
    fn orbits_fixing(&self, prefix: &[u32]) -> Vec<u32> {
        let n = self.g.n;
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in &self.gens {
            if prefix.iter().any(|&v| g[v as usize] != v) {
                continue;
            }
            for v in 0..n as u32 {
                let a = find(&mut parent, v);
                let b = find(&mut parent, g[v as usize]);
                if a != b {
                    parent[a as usize] = b;
                }
            }
        }
        for v in 0..n as u32 {
            find(&mut parent, v);
        }
        parent
    }
}

/// Permutation sending vertex a[i] to b[i] for each canonical position i.
fn compose_labelings(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut perm = vec![0u32; a.len()];
    for i in 0..a.len() {
        perm[a[i] as usize] = b[i];
    }
    perm
}

/// Explicit isomorphism between two graphs whose certificates agree.
pub fn isomorphism_from_labelings(lab1: &[u32], lab2: &[u32]) -> Vec<u32> {
    compose_labelings(lab1, lab2)
}

fn leaf_bytes(g: &ColoredGraph, order: &[u32]) -> Vec<u8> {
    let n = g.n;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let u = order[i] as usize;
        for &v in order.iter().skip(i + 1) {
            out.push(g.color_of(u, v as usize));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(n, 1);
        for i in 0..n - 1 {
            g.set_edge(i, i + 1, 1);
        }
        g
    }

    fn relabel(g: &ColoredGraph, perm: &[usize]) -> ColoredGraph {
        let n = g.n();
        let mut h = ColoredGraph::new(n, g.num_colors());
        for u in 0..n {
            for v in u + 1..n {
                let c = g.color_of(u, v);
                if c != 0 {
                    h.set_edge(perm[u], perm[v], c);
                }
            }
        }
        h
    }

    #[test]
    fn certificate_invariant_under_relabeling() {
        let g = path_graph(7);
        let c1 = canonical_form(&g, &[]).unwrap();
        let perm = [3usize, 0, 6, 2, 5, 1, 4];
        let h = relabel(&g, &perm);
        let c2 = canonical_form(&h, &[]).unwrap();
        assert_eq!(c1.certificate, c2.certificate);
    }

    #[test]
    fn distinguishes_path_from_star() {
        let mut star = ColoredGraph::new(4, 1);
        for v in 1..4 {
            star.set_edge(0, v, 1);
        }
        let path = path_graph(4);
        let cs = canonical_form(&star, &[]).unwrap();
        let cp = canonical_form(&path, &[]).unwrap();
        assert_ne!(cs.certificate, cp.certificate);
    }

    #[test]
    fn distinguishes_c6_from_two_triangles() {
        let mut c6 = ColoredGraph::new(6, 1);
        for i in 0..6 {
            c6.set_edge(i, (i + 1) % 6, 1);
        }
        let mut c33 = ColoredGraph::new(6, 1);
        for i in 0..3 {
            c33.set_edge(i, (i + 1) % 3, 1);
            c33.set_edge(3 + i, 3 + (i + 1) % 3, 1);
        }
        let a = canonical_form(&c6, &[]).unwrap();
        let b = canonical_form(&c33, &[]).unwrap();
        assert_ne!(a.certificate, b.certificate);
    }

    #[test]
    fn petersen_certificate_stable_across_presentations() {
        let edges1: [(usize, usize); 15] = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
        ];
        let mut g1 = ColoredGraph::new(10, 1);
        for (u, v) in edges1 {
            g1.set_edge(u, v, 1);
        }
        // Kneser graph on 2-subsets of a 5-set
        let mut subsets = Vec::new();
        for a in 0..5usize {
            for b in a + 1..5 {
                subsets.push((a, b));
            }
        }
        let mut g2 = ColoredGraph::new(10, 1);
        for i in 0..10 {
            for j in i + 1..10 {
                let (a, b) = subsets[i];
                let (c, d) = subsets[j];
                if a != c && a != d && b != c && b != d {
                    g2.set_edge(i, j, 1);
                }
            }
        }
        let c1 = canonical_form(&g1, &[]).unwrap();
        let c2 = canonical_form(&g2, &[]).unwrap();
        assert_eq!(c1.certificate, c2.certificate);
        assert!(!c1.generators.is_empty());
    }

    #[test]
    fn seeds_do_not_change_the_certificate() {
        let mut c5 = ColoredGraph::new(5, 1);
        for i in 0..5 {
            c5.set_edge(i, (i + 1) % 5, 1);
        }
        let rot: Vec<u32> = (0..5u32).map(|i| (i + 1) % 5).collect();
        let plain = canonical_form(&c5, &[]).unwrap();
        let seeded = canonical_form(&c5, &[rot]).unwrap();
        assert_eq!(plain.certificate, seeded.certificate);
        assert!(seeded.leaves_explored <= plain.leaves_explored);
    }

    #[test]
    fn bad_seed_is_rejected() {
        let g = path_graph(4);
        let not_auto: Vec<u32> = vec![1, 0, 2, 3];
        assert!(canonical_form(&g, &[not_auto]).is_err());
    }

    #[test]
    fn edge_colors_distinguish() {
        let mut a = ColoredGraph::new(3, 2);
        a.set_edge(0, 1, 1);
        a.set_edge(1, 2, 2);
        let mut b = ColoredGraph::new(3, 2);
        b.set_edge(0, 1, 1);
        b.set_edge(1, 2, 1);
        assert_ne!(
            canonical_form(&a, &[]).unwrap().certificate,
            canonical_form(&b, &[]).unwrap().certificate
        );
    }

    #[test]
    fn random_relabelings_of_random_graphs() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 12;
            let mut g = ColoredGraph::new(n, 1);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        g.set_edge(u, v, 1);
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            assert_eq!(
                canonical_form(&g, &[]).unwrap().certificate,
                canonical_form(&h, &[]).unwrap().certificate
            );
        }
    }
}
