//! Maximum and maximal cliques of Peisert-type graphs.
//!
//! Cliques of size q through 0 correspond, after a projective change of
//! coordinates sending a missing direction to the vertical, to graphs of
//! functions f: F_q → F_q with f(0) = 0 whose difference quotients stay
//! inside the transformed direction set. The depth-first search assigns f
//! column by column with bitmask domains over the allowed values.

use crate::error::{Error, Result};
use crate::fields::Element;
use crate::graph::PeisertGraph;
use crate::plane::{directions_of, AffinePoint, Mat2, ProjectivePoint, TowerBasis};

/// Classification of a clique through 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CliqueKind {
    /// A translate of a line c·F_q; determines exactly one direction.
    Canonical,
    /// A maximum clique (size q) determining more than one direction.
    NoncanonicalMaximum,
    /// Maximal but below the maximum size q.
    MaximalSubmaximum,
}

/// A clique together with its classification and determined directions.
#[derive(Clone, Debug)]
pub struct Clique {
    pub vertices: Vec<Element>,
    pub kind: CliqueKind,
    pub directions: Vec<ProjectivePoint>,
}

impl Clique {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.vertices.binary_search(&x).is_ok()
    }
}

/// Coordinates for the function-graph search: a linear map of AG(2, q) that
/// sends some direction outside D(X) to the vertical.
struct FunctionFrame<'a> {
    basis: &'a TowerBasis,
    q: usize,
    /// inverse of the coordinate change, for mapping cliques back
    inv: Mat2,
    /// pair_mask[dx * q + y0] = bitmask over values y with (y - y0)/dx allowed
    pair_mask: Vec<u64>,
}

impl<'a> FunctionFrame<'a> {
    fn new(g: &'a PeisertGraph) -> FunctionFrame<'a> {
        let basis = g.basis().as_ref();
        let t = basis.tower();
        let q = basis.q() as usize;
        let mask = g.directions().mask();
        let missing = (0..basis.num_directions())
            .find(|&i| mask >> i & 1 == 0)
            .expect("m <= q leaves a direction unused");

        // A [1 : s] missing direction maps to [0 : 1] under [[s, -1], [1, 0]];
        // the vertical needs no change.
        let (fwd, inv) = if missing == basis.q() as u16 {
            let id = Mat2 {
                a: Element::ONE,
                b: Element::ZERO,
                c: Element::ZERO,
                d: Element::ONE,
            };
            (id, id)
        } else {
            let s = basis.fq_element(missing);
            let fwd = Mat2 {
                a: s,
                b: t.neg(Element::ONE),
                c: Element::ONE,
                d: Element::ZERO,
            };
            // [[s, -1], [1, 0]]⁻¹ = [[0, 1], [-1, s]]
            let inv = Mat2 {
                a: Element::ZERO,
                b: Element::ONE,
                c: t.neg(Element::ONE),
                d: s,
            };
            (fwd, inv)
        };

        let mut slopes = Vec::with_capacity(g.m() as usize);
        for &d in g.directions().members() {
            let img = basis.pgl_image(&fwd, d).expect("coordinate change is invertible");
            let idx = basis.dir_index(img);
            debug_assert!(idx < basis.q() as u16, "no vertical slope remains");
            slopes.push(idx);
        }
        slopes.sort_unstable();

        let mut pair_mask = vec![0u64; q * q];
        for dx in 1..q {
            let dxe = basis.fq_element(dx as u16);
            for &s in &slopes {
                let prod = t.mul(dxe, basis.fq_element(s));
                for y0 in 0..q {
                    let y = t.add(basis.fq_element(y0 as u16), prod);
                    let yl = basis.fq_local(y).unwrap();
                    pair_mask[dx * q + y0] |= 1u64 << yl;
                }
            }
        }
        FunctionFrame {
            basis,
            q,
            inv,
            pair_mask,
        }
    }

    /// Map a transformed graph point (x, f(x)) back to a field element.
    fn point_back(&self, x_local: u16, y_local: u16) -> Element {
        let t = self.basis.tower();
        let x = self.basis.fq_element(x_local);
        let y = self.basis.fq_element(y_local);
        let a = t.add(t.mul(self.inv.a, x), t.mul(self.inv.b, y));
        let b = t.add(t.mul(self.inv.c, x), t.mul(self.inv.d, y));
        self.basis
            .pi_inv(AffinePoint { a, b })
            .expect("coordinates stay in F_q")
    }

    /// Transformed coordinates (column, value) of a connection-set element.
    fn point_fwd(&self, v: Element) -> (u16, u16) {
        let t = self.basis.tower();
        let p = self.basis.pi(v);
        // forward matrix is the inverse of `inv`
        let det = t.sub(t.mul(self.inv.a, self.inv.d), t.mul(self.inv.b, self.inv.c));
        let di = t.inv(det);
        let fa = t.mul(self.inv.d, di);
        let fb = t.neg(t.mul(self.inv.b, di));
        let fc = t.neg(t.mul(self.inv.c, di));
        let fd = t.mul(self.inv.a, di);
        let x = t.add(t.mul(fa, p.a), t.mul(fb, p.b));
        let y = t.add(t.mul(fc, p.a), t.mul(fd, p.b));
        (
            self.basis.fq_local(x).unwrap(),
            self.basis.fq_local(y).unwrap(),
        )
    }
}

struct Dfs<'a> {
    frame: &'a FunctionFrame<'a>,
    /// columns are the nonzero F_q elements in discrete-log order
    domains: Vec<u64>,
    assignment: Vec<u16>,
    nodes: u64,
    node_budget: u64,
}

enum Walk {
    Continue,
    Stop,
}

impl<'a> Dfs<'a> {
    fn new(frame: &'a FunctionFrame<'a>) -> Dfs<'a> {
        let q = frame.q;
        // difference with the fixed point (0, 0) constrains every column
        let domains: Vec<u64> = (1..q).map(|x| frame.pair_mask[x * q]).collect();
        Dfs {
            frame,
            domains,
            assignment: vec![0u16; q - 1],
            nodes: 0,
            node_budget: u64::MAX,
        }
    }

    /// Pin one column to a single value (used for cliques through an edge).
    fn pin(&mut self, column: u16, value: u16) {
        debug_assert!(column >= 1);
        self.domains[column as usize - 1] &= 1u64 << value;
    }

    fn run(&mut self, emit: &mut impl FnMut(&[u16]) -> Walk) -> Result<()> {
        self.walk(0, emit).map(|_| ())
    }

    fn walk(&mut self, pos: usize, emit: &mut impl FnMut(&[u16]) -> Walk) -> Result<bool> {
        if pos == self.domains.len() {
            return Ok(matches!(emit(&self.assignment), Walk::Stop));
        }
        let q = self.frame.q;
        let mut cand = self.domains[pos];
        while cand != 0 {
            let y = cand.trailing_zeros() as u16;
            cand &= cand - 1;
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::BudgetExceeded {
                    explored: self.nodes,
                    found: 0,
                });
            }
            self.assignment[pos] = y;
            // narrow the remaining columns; dx = x_j - x_pos with columns
            // being the nonzero elements in index order
            let t = self.frame.basis.tower();
            let xp = self.frame.basis.fq_element(pos as u16 + 1);
            let mut saved: Vec<u64> = Vec::with_capacity(self.domains.len() - pos - 1);
            let mut feasible = true;
            for j in pos + 1..self.domains.len() {
                saved.push(self.domains[j]);
                let xj = self.frame.basis.fq_element(j as u16 + 1);
                let dx = self.frame.basis.fq_local(t.sub(xj, xp)).unwrap() as usize;
                self.domains[j] &= self.frame.pair_mask[dx * q + y as usize];
                if self.domains[j] == 0 {
                    feasible = false;
                }
            }
            let stop = if feasible {
                self.walk(pos + 1, emit)?
            } else {
                false
            };
            for (off, s) in saved.into_iter().enumerate() {
                self.domains[pos + 1 + off] = s;
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn clique_from_assignment(frame: &FunctionFrame, f: &[u16]) -> Vec<Element> {
    let mut vs = Vec::with_capacity(frame.q);
    vs.push(Element::ZERO);
    for (pos, &y) in f.iter().enumerate() {
        vs.push(frame.point_back(pos as u16 + 1, y));
    }
    vs.sort_unstable();
    vs
}

fn is_linear_assignment(frame: &FunctionFrame, f: &[u16]) -> bool {
    // the graph of f is a line through the origin iff f(x)/x is constant
    let t = frame.basis.tower();
    let s0 = t.div(
        frame.basis.fq_element(f[0]),
        frame.basis.fq_element(1),
    );
    f.iter().enumerate().all(|(pos, &y)| {
        t.div(
            frame.basis.fq_element(y),
            frame.basis.fq_element(pos as u16 + 1),
        ) == s0
    })
}

fn classify(g: &PeisertGraph, vertices: Vec<Element>) -> Clique {
    let basis = g.basis();
    let pts: Vec<AffinePoint> = vertices.iter().map(|&v| basis.pi(v)).collect();
    let dirs = directions_of(basis, &pts);
    let kind = if vertices.len() == g.q() as usize {
        if dirs.len() == 1 {
            CliqueKind::Canonical
        } else {
            CliqueKind::NoncanonicalMaximum
        }
    } else {
        CliqueKind::MaximalSubmaximum
    };
    let c = Clique {
        vertices,
        kind,
        directions: dirs,
    };
    debug_assert!(verify_clique(g, &c.vertices));
    c
}

/// Every pairwise difference must lie in the connection set.
pub fn verify_clique(g: &PeisertGraph, vertices: &[Element]) -> bool {
    let t = g.basis().tower();
    vertices.iter().enumerate().all(|(i, &u)| {
        vertices
            .iter()
            .skip(i + 1)
            .all(|&v| g.connection_contains(t.sub(u, v)))
    })
}

/// All cliques of size q containing 0, sorted by vertex sequence.
/// `limit` bounds the number of cliques collected; exceeding it is an error
/// rather than silent truncation.
pub fn max_cliques_through_zero(g: &PeisertGraph, limit: Option<u64>) -> Result<Vec<Clique>> {
    let frame = FunctionFrame::new(g);
    let mut dfs = Dfs::new(&frame);
    let cap = limit.unwrap_or(u64::MAX);
    let mut raw: Vec<Vec<Element>> = Vec::new();
    let mut overflow = false;
    dfs.run(&mut |f| {
        if raw.len() as u64 >= cap {
            overflow = true;
            return Walk::Stop;
        }
        raw.push(clique_from_assignment(&frame, f));
        Walk::Continue
    })?;
    if overflow {
        return Err(Error::BudgetExceeded {
            explored: dfs.nodes,
            found: raw.len() as u64,
        });
    }
    let mut out: Vec<Clique> = raw.into_iter().map(|vs| classify(g, vs)).collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let canonical = out.iter().filter(|c| c.kind == CliqueKind::Canonical).count();
    if canonical != g.m() as usize {
        return Err(Error::Internal(format!(
            "expected {} canonical cliques through 0, found {canonical}",
            g.m()
        )));
    }
    Ok(out)
}

/// Number of size-q cliques containing both 0 and x, counted up to `cap`.
pub fn count_max_cliques_through_edge(g: &PeisertGraph, x: Element, cap: u64) -> Result<u64> {
    if !g.connection_contains(x) {
        return Err(Error::BadParameter("x is not adjacent to 0".into()));
    }
    let frame = FunctionFrame::new(g);
    let (col, val) = frame.point_fwd(x);
    let mut dfs = Dfs::new(&frame);
    dfs.pin(col, val);
    let mut count = 0u64;
    dfs.run(&mut |_| {
        count += 1;
        if count >= cap {
            Walk::Stop
        } else {
            Walk::Continue
        }
    })?;
    Ok(count)
}

/// Decide the strict-EKR property: true iff every maximum clique is
/// canonical. By vertex-transitivity it is enough to look through 0; on
/// failure the first non-canonical witness is returned.
pub fn strict_ekr(g: &PeisertGraph) -> Result<(bool, Option<Clique>)> {
    strict_ekr_with_budget(g, u64::MAX)
}

/// strict_ekr with a cap on search nodes; exceeding it is an error.
pub fn strict_ekr_with_budget(
    g: &PeisertGraph,
    node_budget: u64,
) -> Result<(bool, Option<Clique>)> {
    let frame = FunctionFrame::new(g);
    let mut dfs = Dfs::new(&frame);
    dfs.node_budget = node_budget;
    let mut witness: Option<Clique> = None;
    dfs.run(&mut |f| {
        if is_linear_assignment(&frame, f) {
            Walk::Continue
        } else {
            witness = Some(classify(g, clique_from_assignment(&frame, f)));
            Walk::Stop
        }
    })?;
    Ok((witness.is_none(), witness))
}

/// Every maximal clique containing 0, found by pivoting Bron–Kerbosch on the
/// subgraph induced by N(0).
pub fn maximal_cliques_through_zero(g: &PeisertGraph, node_budget: u64) -> Result<Vec<Clique>> {
    let raw = crate::bk::maximal_cliques_containing(g.bitgraph(), 0, node_budget)?;
    let mut out: Vec<Clique> = raw
        .into_iter()
        .map(|vs| classify(g, vs.into_iter().map(|v| Element(v as u32)).collect()))
        .collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Constant number of neighbors every outside vertex has in a maximum
/// clique (the nexus). Non-constant counts signal a construction bug; a
/// constant zero means the clique is not a Delsarte clique.
pub fn nexus_check(g: &PeisertGraph, c: &Clique) -> Result<u32> {
    if c.size() != g.q() as usize {
        return Err(Error::BadParameter("nexus is defined for size-q cliques".into()));
    }
    let mut nexus: Option<u32> = None;
    for u in 0..g.vertex_count() {
        let eu = Element(u);
        if c.contains(eu) {
            continue;
        }
        let cnt = c.vertices.iter().filter(|&&v| g.adjacent(eu, v)).count() as u32;
        match nexus {
            None => nexus = Some(cnt),
            Some(x) if x != cnt => {
                return Err(Error::NotDelsarte(format!(
                    "outside vertex neighbor counts differ: {x} vs {cnt}"
                )))
            }
            _ => {}
        }
    }
    let nexus = nexus.unwrap_or(0);
    if nexus == 0 {
        return Err(Error::NotDelsarte("every outside vertex has 0 neighbors".into()));
    }
    Ok(nexus)
}

/// Size of the intersection of a canonical and a non-canonical maximum
/// clique. Empty intersections return 0; nonempty ones must have exactly
/// √q vertices.
pub fn intersection_profile(g: &PeisertGraph, c1: &Clique, c2: &Clique) -> Result<u32> {
    if c1.kind != CliqueKind::Canonical || c2.kind != CliqueKind::NoncanonicalMaximum {
        return Err(Error::BadParameter(
            "expected a canonical and a non-canonical maximum clique".into(),
        ));
    }
    let q = g.q();
    let r = isqrt(q);
    if r * r != q {
        return Err(Error::NotSquare { q });
    }
    let common = c1
        .vertices
        .iter()
        .filter(|&&v| c2.contains(v))
        .count() as u32;
    if common == 0 {
        return Ok(0);
    }
    if common != r {
        return Err(Error::Internal(format!(
            "meeting canonical/non-canonical cliques intersect in {common}, expected {r}"
        )));
    }
    Ok(common)
}

/// Baer-subplane structure of a non-canonical clique: in each of the m
/// parallel classes of lines with direction in D(X), exactly √q lines meet
/// the clique, each in exactly √q points.
pub fn baer_subarray_check(g: &PeisertGraph, c: &Clique) -> Result<bool> {
    let q = g.q();
    let r = isqrt(q);
    if r * r != q {
        return Err(Error::NotSquare { q });
    }
    let basis = g.basis();
    let t = basis.tower();
    for &d in g.directions().members() {
        let rep = basis.coset_rep(d);
        // bucket clique vertices by the line v + rep·F_q they lie on
        let mut line_sizes: std::collections::BTreeMap<Element, u32> = std::collections::BTreeMap::new();
        for &v in &c.vertices {
            // canonical line id: least element of v + rep·F_q
            let mut min = v;
            for &lambda in basis.fq_elements() {
                let w = t.add(v, t.mul(rep, lambda));
                if w < min {
                    min = w;
                }
            }
            *line_sizes.entry(min).or_insert(0) += 1;
        }
        if line_sizes.len() != r as usize || line_sizes.values().any(|&s| s != r) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn isqrt(q: u32) -> u32 {
    let mut r = (q as f64).sqrt() as u32;
    while r * r > q {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= q {
        r += 1;
    }
    r
}

/// Brute-force reference enumeration, independent of the function-graph
/// search: extend subsets of the neighborhood of 0 by adjacency alone.
pub mod oracle {
    use super::*;

    /// All size-q cliques containing 0, as sorted vertex sets.
    pub fn naive_max_cliques_through_zero(g: &PeisertGraph) -> Vec<Vec<Element>> {
        let q = g.q() as usize;
        let sels = g.connection_elements();
        let mut out = Vec::new();
        let mut current = vec![Element::ZERO];
        extend(g, &sels, &mut current, 0, q, &mut out);
        out.sort();
        out
    }

    fn extend(
        g: &PeisertGraph,
        cands: &[Element],
        current: &mut Vec<Element>,
        from: usize,
        q: usize,
        out: &mut Vec<Vec<Element>>,
    ) {
        if current.len() == q {
            let mut c = current.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        for i in from..cands.len() {
            if cands.len() - i + current.len() < q {
                break;
            }
            let v = cands[i];
            if current.iter().all(|&u| g.adjacent(u, v)) {
                current.push(v);
                extend(g, cands, current, i + 1, q, out);
                current.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;
    use crate::graph::build_graph;
    use crate::plane::DirectionSet;
    use std::sync::Arc;

    fn basis(p: u32, n: u32) -> Arc<TowerBasis> {
        TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap()
    }

    fn graph(b: &Arc<TowerBasis>, idx: &[u16]) -> PeisertGraph {
        build_graph(DirectionSet::from_indices(b.clone(), idx).unwrap()).unwrap()
    }

    #[test]
    fn m1_graph_has_one_clique_through_zero() {
        let b = basis(3, 1);
        let g = graph(&b, &[1]);
        let cliques = max_cliques_through_zero(&g, None).unwrap();
        assert_eq!(cliques.len(), 1);
        assert_eq!(cliques[0].kind, CliqueKind::Canonical);
        assert_eq!(cliques[0].size(), 3);
        let maximal = maximal_cliques_through_zero(&g, 1 << 20).unwrap();
        assert_eq!(maximal.len(), 1);
    }

    #[test]
    fn oracle_agreement_small() {
        for (p, n, dirs) in [
            (2u32, 2u32, vec![0u16, 1, 2]),
            (5, 1, vec![0, 1, 3, 5]),
            (3, 2, vec![0, 1, 2, 3]),
            (3, 2, vec![0, 1, 2, 4, 7]),
        ] {
            let b = basis(p, n);
            let g = graph(&b, &dirs);
            let fast: Vec<Vec<Element>> = max_cliques_through_zero(&g, None)
                .unwrap()
                .into_iter()
                .map(|c| c.vertices)
                .collect();
            let slow = oracle::naive_max_cliques_through_zero(&g);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn strict_ekr_small_threshold() {
        // q > (m-1)^2 forces strict-EKR; type (3, 9) qualifies
        let b = basis(3, 2);
        let g = graph(&b, &[0, 1, 2]);
        let (ok, w) = strict_ekr(&g).unwrap();
        assert!(ok);
        assert!(w.is_none());
    }

    #[test]
    fn nexus_of_max_clique_is_m_minus_one() {
        let b = basis(3, 2);
        let g = graph(&b, &[0, 1, 2, 3]);
        let cliques = max_cliques_through_zero(&g, None).unwrap();
        for c in &cliques {
            assert_eq!(nexus_check(&g, c).unwrap(), g.m() - 1);
        }
    }

    #[test]
    fn nexus_flags_disconnected_graph() {
        let b = basis(3, 1);
        let g = graph(&b, &[0]);
        let c = &max_cliques_through_zero(&g, None).unwrap()[0];
        assert!(matches!(nexus_check(&g, c), Err(Error::NotDelsarte(_))));
    }

    #[test]
    fn count_through_edge_matches_enumeration() {
        let b = basis(3, 2);
        let g = graph(&b, &[0, 1, 2, 3]);
        let cliques = max_cliques_through_zero(&g, None).unwrap();
        for x in g.connection_elements().into_iter().take(20) {
            let direct = count_max_cliques_through_edge(&g, x, 1 << 20).unwrap();
            let by_list = cliques.iter().filter(|c| c.contains(x)).count() as u64;
            assert_eq!(direct, by_list);
        }
    }

    #[test]
    fn budget_error_carries_progress() {
        let b = basis(3, 2);
        let g = graph(&b, &[0, 1, 2, 3, 4, 5]);
        match maximal_cliques_through_zero(&g, 5) {
            Err(Error::BudgetExceeded { explored, .. }) => assert!(explored > 5),
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
