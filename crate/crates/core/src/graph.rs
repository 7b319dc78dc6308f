//! Peisert-type graphs: Cayley graphs on F_{q²}⁺ whose connection set is a
//! union of m cosets of F_q*, materialized from a direction set.

use std::sync::{Arc, OnceLock};

use crate::bitgraph::BitGraph;
use crate::error::{Error, Result};
use crate::fields::Element;
use crate::plane::{DirectionSet, TowerBasis};

/// A Peisert-type graph of type (m, q) on the q² elements of F_{q²}.
/// Vertices are element indices; u ~ v iff u - v lies in the connection set.
pub struct PeisertGraph {
    directions: DirectionSet,
    connection: Vec<u64>,
    bitgraph: OnceLock<BitGraph>,
}

/// Strongly-regular parameters together with the integer spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SrgParams {
    pub v: u32,
    pub k: u32,
    pub lambda: u32,
    pub mu: u32,
    pub r1: i64,
    pub r2: i64,
    pub mult1: u32,
    pub mult2: u32,
    pub primitive: bool,
}

/// The spectrum of a type-(m, q) graph: degree k = m(q-1), then q - m with
/// multiplicity k and -m with multiplicity q² - 1 - k.
pub fn eigenvalues_of_type(m: u32, q: u32) -> Result<(i64, i64, u32, i64, u32)> {
    if m == 0 || m > q {
        return Err(Error::BadDirectionCount { m, q });
    }
    let k = m * (q - 1);
    Ok((
        k as i64,
        (q - m) as i64,
        k,
        -(m as i64),
        q * q - 1 - k,
    ))
}

/// Build the graph for a direction set: the connection set is the disjoint
/// union of the F_q*-cosets selected by the directions.
pub fn build_graph(directions: DirectionSet) -> Result<PeisertGraph> {
    let basis = directions.basis().clone();
    let t = basis.tower();
    let q = t.q();
    let q2 = t.q2();
    let m = directions.m();
    if m > q {
        return Err(Error::BadDirectionCount { m, q });
    }
    let mut connection = vec![0u64; (q2 as usize).div_ceil(64)];
    let mut count = 0u32;
    for &d in directions.members() {
        let c = basis.coset_rep(d);
        for &lambda in &basis.fq_elements()[1..] {
            let x = t.mul(c, lambda);
            let (w, b) = (x.index() as usize / 64, x.index() % 64);
            if connection[w] >> b & 1 == 1 {
                return Err(Error::Internal("cosets are not pairwise disjoint".into()));
            }
            connection[w] |= 1 << b;
            count += 1;
        }
    }
    if count != m * (q - 1) || connection[0] & 1 == 1 {
        return Err(Error::Internal("connection set has the wrong size".into()));
    }
    let g = PeisertGraph {
        directions,
        connection,
        bitgraph: OnceLock::new(),
    };
    // S = -S comes from each coset being closed under negation; spot-check.
    for x in g.connection_elements().iter().take(8) {
        debug_assert!(g.connection_contains(t.neg(*x)));
    }
    Ok(g)
}

impl PeisertGraph {
    pub fn basis(&self) -> &Arc<TowerBasis> {
        self.directions.basis()
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn q(&self) -> u32 {
        self.basis().q()
    }

    pub fn m(&self) -> u32 {
        self.directions.m()
    }

    pub fn vertex_count(&self) -> u32 {
        self.basis().tower().q2()
    }

    pub fn degree(&self) -> u32 {
        self.m() * (self.q() - 1)
    }

    #[inline]
    pub fn connection_contains(&self, x: Element) -> bool {
        self.connection[x.index() as usize / 64] >> (x.index() % 64) & 1 == 1
    }

    pub fn connection_elements(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (w, &word) in self.connection.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                out.push(Element(w as u32 * 64 + b));
            }
        }
        out
    }

    #[inline]
    pub fn adjacent(&self, u: Element, v: Element) -> bool {
        u != v && self.connection_contains(self.basis().tower().sub(u, v))
    }

    /// Dense adjacency, built once on first use.
    pub fn bitgraph(&self) -> &BitGraph {
        self.bitgraph.get_or_init(|| {
            let n = self.vertex_count() as usize;
            let t = self.basis().tower();
            let mut g = BitGraph::new(n);
            let sels = self.connection_elements();
            for u in 0..n as u32 {
                let eu = Element(u);
                for s in &sels {
                    let v = t.add(eu, *s);
                    if v.index() > u {
                        g.add_edge(u as usize, v.index() as usize);
                    }
                }
            }
            g
        })
    }

    /// The complement is the Peisert-type graph on the complementary
    /// direction set, of type (q + 1 - m, q).
    pub fn complement(&self) -> Result<PeisertGraph> {
        let basis = self.basis().clone();
        let mask = self.directions.mask();
        let full = (1u64 << basis.num_directions()) - 1;
        let comp = DirectionSet::from_mask(basis, full & !mask)?;
        build_graph(comp)
    }

    /// Sorted edge list with u < v as integer vertex indices.
    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        let g = self.bitgraph();
        let mut out = Vec::with_capacity(self.vertex_count() as usize * self.degree() as usize / 2);
        for u in 0..g.n() {
            for v in g.neighbors(u) {
                if v > u {
                    out.push((u as u32, v as u32));
                }
            }
        }
        out
    }

    /// Verify strong regularity by neighbor counting and verify the integer
    /// spectrum by exact character sums over the connection set. Any mismatch
    /// against the closed forms for type (m, q) is a construction bug.
    pub fn srg_verify(&self) -> Result<SrgParams> {
        let t = self.basis().tower().clone();
        let q = self.q();
        let m = self.m();
        let v = q * q;
        let k = m * (q - 1);
        let lambda = ((m as i64 - 1) * (m as i64 - 2) + q as i64 - 2) as u32;
        let mu = m * (m - 1);

        let g = self.bitgraph();
        if g.degree(0) != k as usize {
            return Err(Error::Internal("degree mismatch".into()));
        }
        // Delsarte identity for SRG parameters.
        if k * (k - lambda - 1) != (v - k - 1) * mu {
            return Err(Error::Internal("SRG parameter identity fails".into()));
        }

        // Common-neighbor counts. Vertex-transitivity lets pairs (0, x) stand
        // for all pairs; small graphs are checked over every pair anyway.
        let full = q <= 13;
        let pairs_from: u32 = if full { v } else { 1 };
        for u in 0..pairs_from {
            for w in 0..v {
                if u == w {
                    continue;
                }
                let cn = g.common_neighbors(u as usize, w as usize) as u32;
                let expect = if g.has_edge(u as usize, w as usize) {
                    lambda
                } else {
                    mu
                };
                if cn != expect {
                    return Err(Error::Internal(format!(
                        "common neighbor count {cn} at pair ({u},{w}), expected {expect}"
                    )));
                }
            }
        }

        // Exact spectrum via additive characters: for a nonzero, the
        // eigenvalue is N_0 - N_1 where N_c counts s in S with Tr(a s) = c,
        // provided N_1 = ... = N_{p-1}.
        let p = t.p();
        let sels = self.connection_elements();
        let mut observed: std::collections::BTreeMap<i64, u32> = std::collections::BTreeMap::new();
        *observed.entry(k as i64).or_insert(0) += 1; // principal eigenvalue at a = 0
        for a in t.elements().skip(1) {
            let mut counts = vec![0i64; p as usize];
            for &s in &sels {
                let tr = t.trace_to(t.mul(a, s), t.q2(), p)?;
                counts[t.packed_of(tr) as usize] += 1;
            }
            if p > 2 && counts[1..].iter().any(|&c| c != counts[1]) {
                return Err(Error::Internal("character sum is not an integer".into()));
            }
            *observed.entry(counts[0] - counts[1]).or_insert(0) += 1;
        }
        let (kk, r1, mult1, r2, mult2) = eigenvalues_of_type(m, q)?;
        let mut expected: std::collections::BTreeMap<i64, u32> = std::collections::BTreeMap::new();
        *expected.entry(kk).or_insert(0) += 1;
        *expected.entry(r1).or_insert(0) += mult1;
        *expected.entry(r2).or_insert(0) += mult2;
        if observed != expected {
            return Err(Error::Internal(format!(
                "spectrum mismatch: observed {observed:?}, expected {expected:?}"
            )));
        }

        Ok(SrgParams {
            v,
            k,
            lambda,
            mu,
            r1,
            r2,
            mult1,
            mult2,
            primitive: m >= 2 && m <= q - 1,
        })
    }
}

impl std::fmt::Debug for PeisertGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PeisertGraph(m={}, q={})", self.m(), self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;
    use crate::plane::DirectionSet;

    fn basis(p: u32, n: u32) -> Arc<TowerBasis> {
        TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap()
    }

    fn graph_with_dirs(b: &Arc<TowerBasis>, idx: &[u16]) -> PeisertGraph {
        build_graph(DirectionSet::from_indices(b.clone(), idx).unwrap()).unwrap()
    }

    #[test]
    fn q4_m3_is_nine_regular_on_16_vertices() {
        let b = basis(2, 2);
        let g = graph_with_dirs(&b, &[0, 1, 2]);
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.degree(), 9);
        for u in 0..16 {
            assert_eq!(g.bitgraph().degree(u), 9);
        }
        let p = g.srg_verify().unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.mu), (16, 9, 4, 6));
    }

    #[test]
    fn m1_graph_is_union_of_cliques() {
        let b = basis(3, 1);
        let g = graph_with_dirs(&b, &[0]);
        assert!(!g.bitgraph().is_connected());
        let p = g.srg_verify().unwrap();
        assert_eq!(p.lambda, g.q() - 2);
        assert_eq!(p.mu, 0);
        assert!(!p.primitive);
    }

    #[test]
    fn paley_graph_of_order_81() {
        // the type-(5, 9) graph on the even-log directions equals the graph
        // on the squares of F_81*
        let b = basis(3, 2);
        let t = b.tower().clone();
        let dir_of = |e: u32| b.dir_index(b.direction_of(Element(e + 1)).unwrap());
        let dirs: Vec<u16> = (0..10).map(|j| dir_of(2 * j)).collect();
        let g = graph_with_dirs(&b, &{
            let mut d = dirs.clone();
            d.sort_unstable();
            d.dedup();
            d
        });
        assert_eq!(g.m(), 5);
        for x in t.elements().skip(1) {
            let is_square = x.log().unwrap() % 2 == 0;
            assert_eq!(g.connection_contains(x), is_square);
        }
    }

    #[test]
    fn srg_params_match_closed_forms() {
        let b = basis(3, 2);
        let g = graph_with_dirs(&b, &[0, 1, 2, 3]);
        let p = g.srg_verify().unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.mu), (81, 32, 13, 12));
        assert_eq!((p.r1, p.r2), (5, -4));
        assert_eq!((p.mult1, p.mult2), (32, 48));
    }

    #[test]
    fn eigenvalue_triples() {
        assert_eq!(eigenvalues_of_type(4, 9).unwrap(), (32, 5, 32, -4, 48));
        let (k, r1, m1, r2, m2) = eigenvalues_of_type(5, 8).unwrap();
        assert_eq!((k, r1, r2), (35, 3, -5));
        // trace identity: k + sum of eigenvalues with multiplicity = 0
        assert_eq!(k + r1 * m1 as i64 + r2 * m2 as i64, 0);
        // m = q boundary
        assert_eq!(eigenvalues_of_type(4, 4).unwrap().1, 0);
    }

    #[test]
    fn translation_and_scalar_invariance() {
        let b = basis(3, 2);
        let t = b.tower().clone();
        let g = graph_with_dirs(&b, &[0, 2, 5, 7]);
        let mut rng = 0x12345u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Element((rng >> 33) as u32 % 81)
        };
        for _ in 0..100 {
            let (tr, u, v) = (next(), next(), next());
            assert_eq!(
                g.adjacent(u, v),
                g.adjacent(t.add(u, tr), t.add(v, tr))
            );
        }
        for c in b.fq_elements().iter().skip(1) {
            for _ in 0..10 {
                let (u, v) = (next(), next());
                assert_eq!(g.adjacent(u, v), g.adjacent(t.mul(*c, u), t.mul(*c, v)));
            }
        }
    }

    #[test]
    fn complement_is_peisert_type() {
        let b = basis(3, 2);
        let g = graph_with_dirs(&b, &[0, 1, 2, 3]);
        let c = g.complement().unwrap();
        assert_eq!(c.m(), 10 - 4);
        let bg = g.bitgraph();
        let cg = c.bitgraph();
        for u in 0..81 {
            for v in u + 1..81 {
                assert_eq!(bg.has_edge(u, v), !cg.has_edge(u, v));
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        let b = basis(2, 3);
        let g = graph_with_dirs(&b, &[0, 1, 4]);
        for u in 0..g.vertex_count() {
            assert!(!g.adjacent(Element(u), Element(u)));
            for v in 0..g.vertex_count() {
                assert_eq!(g.adjacent(Element(u), Element(v)), g.adjacent(Element(v), Element(u)));
            }
        }
    }

    #[test]
    fn rejects_m_above_q() {
        let b = basis(2, 1);
        let ds = DirectionSet::from_indices(b, &[0, 1, 2]).unwrap();
        assert!(matches!(build_graph(ds), Err(Error::BadDirectionCount { .. })));
    }
}
