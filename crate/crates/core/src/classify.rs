//! Classification of Peisert-type graphs up to isomorphism: certificates,
//! PΓL(2, q)-orbit enumeration of direction sets, the per-(q, m) census of
//! non-isomorphic graphs with and without the strict-EKR property, and the
//! extremal values derived from it.
//!
//! Isomorphism classes are counted in two stages: direction-set orbits under
//! PΓL(2, q) (projective equivalence of direction sets implies graph
//! isomorphism, so orbits are a sound pre-pass), then canonical-labeling
//! certificates merge any orbits that are isomorphic anyway. Soundness never
//! rests on the converse of the orbit argument.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::canon::{self, ColoredGraph};
use crate::cliques;
use crate::error::{Error, Result};
use crate::fields::Element;
use crate::graph::{build_graph, PeisertGraph};
use crate::plane::{DirectionSet, TowerBasis};

/// Canonical byte sequence identifying a graph's isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Short hex digest for reports.
    pub fn digest(&self) -> String {
        let mut h = 0xcbf29ce484222325u64;
        for &b in &self.0 {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

impl std::fmt::Debug for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Certificate({})", self.digest())
    }
}

/// Cap on the per-edge clique counts used as refinement colors. Counting
/// stops at the cap, so the color is min(true count, cap), which is still
/// an isomorphism invariant.
const CLIQUE_COLOR_CAP: u64 = 4096;

/// Edge colors for the canonical labeling: each edge {u, v} is colored by
/// the (capped) number of size-q cliques containing it, which depends only
/// on the direction of u - v.
fn colored_graph_of(g: &PeisertGraph) -> Result<(ColoredGraph, Vec<u64>)> {
    let basis = g.basis();
    let n = g.vertex_count() as usize;
    let mut dir_count: BTreeMap<u16, u64> = BTreeMap::new();
    for &d in g.directions().members() {
        let rep = basis.coset_rep(d);
        let count = cliques::count_max_cliques_through_edge(g, rep, CLIQUE_COLOR_CAP)?;
        dir_count.insert(basis.dir_index(d), count);
    }
    let mut values: Vec<u64> = dir_count.values().copied().collect();
    values.sort_unstable();
    values.dedup();
    let color_of_value = |v: u64| -> u8 { values.binary_search(&v).unwrap() as u8 + 1 };

    let t = basis.tower();
    let mut elem_color = vec![0u8; n];
    let sels = g.connection_elements();
    for &x in &sels {
        let d = basis.direction_of(x)?;
        elem_color[x.index() as usize] = color_of_value(dir_count[&basis.dir_index(d)]);
    }
    let mut cg = ColoredGraph::new(n, values.len());
    for u in 0..n as u32 {
        for &s in &sels {
            let v = t.add(Element(u), s);
            if v.index() > u {
                cg.set_edge(u as usize, v.index() as usize, elem_color[s.index() as usize]);
            }
        }
    }
    Ok((cg, values))
}

/// Known automorphisms of any Cayley graph on F_{q²}⁺ whose connection set
/// is a union of F_q*-cosets: translations, multiplication by F_q*, and
/// Frobenius when it stabilizes the connection set. The labeling search
/// verifies each one before relying on it.
fn cayley_seeds(g: &PeisertGraph) -> Vec<Vec<u32>> {
    let t = g.basis().tower();
    let n = g.vertex_count();
    let mut seeds = Vec::new();
    for i in 0..2 * t.n() {
        let e = t
            .from_packed(t.p().pow(i))
            .expect("additive basis vectors pack as single digits");
        seeds.push((0..n).map(|v| t.add(Element(v), e).index()).collect());
    }
    let eps = t.epsilon();
    seeds.push((0..n).map(|v| t.mul(eps, Element(v)).index()).collect());
    let frob_stable = g
        .connection_elements()
        .iter()
        .all(|&s| g.connection_contains(t.frobenius(s, 1)));
    if frob_stable {
        seeds.push((0..n).map(|v| t.frobenius(Element(v), 1).index()).collect());
    }
    seeds
}

fn header_bytes(tag: u8, n: usize, values: &[u64]) -> Vec<u8> {
    let mut out = vec![b'P', b'T', 1, tag];
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(values.len() as u32).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Assemble a certificate from an edge-colored presentation plus the seeds;
/// shared between Peisert-type graphs and quadratic-form graphs so that
/// certificates of isomorphic graphs coincide across representations.
pub fn certificate_parts(
    cg: &ColoredGraph,
    values: &[u64],
    dense_tag: u8,
    seeds: &[Vec<u32>],
) -> Result<(Certificate, Vec<u32>)> {
    let out = canon::canonical_form(cg, seeds)?;
    let mut bytes = header_bytes(dense_tag, cg.n(), values);
    bytes.extend_from_slice(&out.certificate);
    Ok((Certificate(bytes), out.labeling))
}

/// Capped per-edge clique-count cap shared by every certificate path.
pub const EDGE_COLOR_CAP: u64 = CLIQUE_COLOR_CAP;

/// Certificate plus the canonical labeling that produced it. Dense graphs
/// (m > (q+1)/2) are canonicalized through their complements, which are
/// Peisert-type graphs of the complementary type with richer clique colors;
/// the complement choice is itself degree-determined, hence invariant.
pub fn certificate_with_labeling(g: &PeisertGraph) -> Result<(Certificate, Vec<u32>)> {
    let n = g.vertex_count();
    let dense = 2 * g.degree() > n - 1;
    let owned;
    let target: &PeisertGraph = if dense {
        owned = g.complement()?;
        &owned
    } else {
        g
    };
    let (cg, values) = colored_graph_of(target)?;
    let seeds = cayley_seeds(target);
    certificate_parts(&cg, &values, dense as u8, &seeds)
}

/// Canonical certificate: equal certificates hold exactly for isomorphic
/// graphs.
pub fn certificate(g: &PeisertGraph) -> Result<Certificate> {
    certificate_with_labeling(g).map(|(c, _)| c)
}

/// Outcome of an isomorphism test. The map, when present, sends vertex v of
/// the first graph to map[v] in the second and has been verified edge by
/// edge.
#[derive(Debug)]
pub struct IsoOutcome {
    pub isomorphic: bool,
    pub map: Option<Vec<u32>>,
}

/// Decide isomorphism. The fast path recognizes PΓL-equivalent direction
/// sets over one shared basis; otherwise certificates decide, and equal
/// certificates are turned into an explicit verified isomorphism.
pub fn isomorphic(g1: &PeisertGraph, g2: &PeisertGraph) -> Result<IsoOutcome> {
    if g1.q() != g2.q() || g1.m() != g2.m() {
        return Ok(IsoOutcome {
            isomorphic: false,
            map: None,
        });
    }
    if Arc::ptr_eq(g1.basis(), g2.basis())
        && g1.directions().canonical_mask() == g2.directions().canonical_mask()
    {
        return Ok(IsoOutcome {
            isomorphic: true,
            map: None,
        });
    }
    let (c1, l1) = certificate_with_labeling(g1)?;
    let (c2, l2) = certificate_with_labeling(g2)?;
    if c1 != c2 {
        return Ok(IsoOutcome {
            isomorphic: false,
            map: None,
        });
    }
    let map = canon::isomorphism_from_labelings(&l1, &l2);
    verify_map(g1, g2, &map)?;
    Ok(IsoOutcome {
        isomorphic: true,
        map: Some(map),
    })
}

fn verify_map(g1: &PeisertGraph, g2: &PeisertGraph, map: &[u32]) -> Result<()> {
    let n = g1.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            let a = g1.adjacent(Element(u), Element(v));
            let b = g2.adjacent(Element(map[u as usize]), Element(map[v as usize]));
            if a != b {
                return Err(Error::Internal(
                    "certificates agree but the derived map is not an isomorphism".into(),
                ));
            }
        }
    }
    Ok(())
}

/// One representative direction set per PΓL(2, q)-orbit of m-subsets of
/// PG(1, q). For m ≥ 3 the 3-transitive action pins three base directions.
pub fn enumerate_types(basis: &Arc<TowerBasis>, m: u32) -> Result<Vec<DirectionSet>> {
    let q = basis.q();
    if m == 0 || m > q {
        return Err(Error::BadDirectionCount { m, q });
    }
    let nd = basis.num_directions();
    let mut canonical: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    if m <= 2 {
        let mask = if m == 1 { 1u64 } else { 1u64 | 1 << (nd - 1) };
        canonical.insert(basis.canonical_dir_mask(mask));
    } else {
        // base triple: slopes 0 and 1, plus the vertical direction
        let base: u64 = 1 | 1 << 1 | 1 << (nd - 1);
        let rest: Vec<u16> = (0..nd).filter(|&i| base >> i & 1 == 0).collect();
        let k = (m - 3) as usize;
        for_each_combination(rest.len(), k, |choice| {
            let mut mask = base;
            for &c in choice {
                mask |= 1u64 << rest[c];
            }
            canonical.insert(basis.canonical_dir_mask(mask));
        });
    }
    canonical
        .into_iter()
        .map(|mask| DirectionSet::from_mask(basis.clone(), mask))
        .collect()
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        f(&choice);
        if k == 0 {
            return;
        }
        // advance to the next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if choice[i] != i + n - k {
                choice[i] += 1;
                for j in i + 1..k {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// One row of the census: counts of pairwise non-isomorphic type-(m, q)
/// graphs split by the strict-EKR property. `undecided` counts classes the
/// clique budget could not settle; exact rows have undecided = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub q: u32,
    pub m: u32,
    pub graphs: u32,
    pub strict_ekr: u32,
    pub without: u32,
    pub undecided: u32,
}

impl CensusRow {
    pub fn complete(&self) -> bool {
        self.undecided == 0
    }
}

/// Census over a range of m values. Certificates always resolve the class
/// count; the strict-EKR decision honors `clique_node_budget` when given,
/// marking classes it cannot settle instead of truncating silently.
pub fn census(
    basis: &Arc<TowerBasis>,
    m_range: std::ops::RangeInclusive<u32>,
    clique_node_budget: Option<u64>,
) -> Result<Vec<CensusRow>> {
    m_range
        .collect::<Vec<u32>>()
        .into_par_iter()
        .map(|m| census_row(basis, m, clique_node_budget))
        .collect()
}

fn census_row(
    basis: &Arc<TowerBasis>,
    m: u32,
    clique_node_budget: Option<u64>,
) -> Result<CensusRow> {
    let reps = enumerate_types(basis, m)?;
    let analyzed: Result<Vec<(Certificate, Vec<u32>, DirectionSet)>> = reps
        .into_par_iter()
        .map(|ds| {
            let g = build_graph(ds.clone())?;
            let (cert, lab) = certificate_with_labeling(&g)?;
            Ok((cert, lab, ds))
        })
        .collect();
    let mut by_cert: BTreeMap<Certificate, Vec<(Vec<u32>, DirectionSet)>> = BTreeMap::new();
    for (cert, lab, ds) in analyzed? {
        by_cert.entry(cert).or_default().push((lab, ds));
    }
    // orbits merged by certificate must really be isomorphic: check the map
    for members in by_cert.values() {
        if members.len() > 1 {
            let g0 = build_graph(members[0].1.clone())?;
            for other in &members[1..] {
                let g1 = build_graph(other.1.clone())?;
                let map = canon::isomorphism_from_labelings(&members[0].0, &other.0);
                verify_map(&g0, &g1, &map)?;
            }
        }
    }

    let classes: Vec<DirectionSet> = by_cert
        .into_values()
        .map(|mut v| v.swap_remove(0).1)
        .collect();
    let decisions: Result<Vec<Option<bool>>> = classes
        .into_par_iter()
        .map(|ds| {
            let g = build_graph(ds)?;
            match strict_ekr_budgeted(&g, clique_node_budget) {
                Ok(flag) => Ok(Some(flag)),
                Err(Error::BudgetExceeded { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let decisions = decisions?;
    let graphs = decisions.len() as u32;
    let strict = decisions.iter().filter(|d| **d == Some(true)).count() as u32;
    let without = decisions.iter().filter(|d| **d == Some(false)).count() as u32;
    Ok(CensusRow {
        q: basis.q(),
        m,
        graphs,
        strict_ekr: strict,
        without,
        undecided: graphs - strict - without,
    })
}

fn strict_ekr_budgeted(g: &PeisertGraph, budget: Option<u64>) -> Result<bool> {
    match budget {
        None => cliques::strict_ekr(g).map(|(flag, _)| flag),
        Some(b) => cliques::strict_ekr_with_budget(g, b).map(|(flag, _)| flag),
    }
}

/// Extremal values over the full census: the least m admitting a graph
/// without the strict-EKR property and the largest m admitting one with it.
pub fn extremal_values(basis: &Arc<TowerBasis>) -> Result<(u32, u32)> {
    let rows = census(basis, 1..=basis.q(), None)?;
    let e = rows
        .iter()
        .find(|r| r.without > 0)
        .map(|r| r.m)
        .ok_or_else(|| Error::Internal("no graph without strict-EKR found".into()))?;
    let ee = rows
        .iter()
        .rev()
        .find(|r| r.strict_ekr > 0)
        .map(|r| r.m)
        .ok_or_else(|| Error::Internal("no graph with strict-EKR found".into()))?;
    Ok((e, ee))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    fn basis(p: u32, n: u32) -> Arc<TowerBasis> {
        TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap()
    }

    #[test]
    fn type_3_is_single_orbit() {
        for (p, n) in [(5u32, 1u32), (7, 1), (3, 2)] {
            let b = basis(p, n);
            assert_eq!(enumerate_types(&b, 3).unwrap().len(), 1);
        }
    }

    #[test]
    fn q7_m4_has_two_orbits() {
        let b = basis(7, 1);
        assert_eq!(enumerate_types(&b, 4).unwrap().len(), 2);
    }

    #[test]
    fn certificate_invariant_under_projective_moves() {
        let b = basis(3, 2);
        let d1 = DirectionSet::from_indices(b.clone(), &[0, 1, 2, 9]).unwrap();
        let mask = d1.mask();
        let perm = &b.pgammal_perms()[17];
        let mut img = 0u64;
        for i in 0..10u16 {
            if mask >> i & 1 == 1 {
                img |= 1 << perm[i as usize];
            }
        }
        let d2 = DirectionSet::from_mask(b.clone(), img).unwrap();
        let g1 = build_graph(d1).unwrap();
        let g2 = build_graph(d2).unwrap();
        assert_eq!(certificate(&g1).unwrap(), certificate(&g2).unwrap());
        let iso = isomorphic(&g1, &g2).unwrap();
        assert!(iso.isomorphic);
    }

    #[test]
    fn census_q5_matches_known_counts() {
        let b = basis(5, 1);
        let rows = census(&b, 3..=5, None).unwrap();
        let snap: Vec<(u32, u32, u32)> = rows
            .iter()
            .map(|r| (r.graphs, r.strict_ekr, r.without))
            .collect();
        assert_eq!(snap, vec![(1, 1, 0), (1, 0, 1), (1, 0, 1)]);
    }

    #[test]
    fn census_q4_matches_known_counts() {
        let b = basis(2, 2);
        let rows = census(&b, 3..=4, None).unwrap();
        let snap: Vec<(u32, u32, u32)> = rows
            .iter()
            .map(|r| (r.graphs, r.strict_ekr, r.without))
            .collect();
        assert_eq!(snap, vec![(1, 0, 1), (1, 0, 1)]);
    }

    #[test]
    fn extremal_values_q4() {
        let b = basis(2, 2);
        assert_eq!(extremal_values(&b).unwrap(), (3, 2));
    }

    #[test]
    fn mismatched_types_never_isomorphic() {
        let b = basis(3, 1);
        let g1 = build_graph(DirectionSet::from_indices(b.clone(), &[0, 1]).unwrap()).unwrap();
        let g2 = build_graph(DirectionSet::from_indices(b, &[0, 1, 2]).unwrap()).unwrap();
        assert!(!isomorphic(&g1, &g2).unwrap().isomorphic);
    }

    #[test]
    fn complement_of_complement_isomorphic() {
        let b = basis(3, 2);
        let g = build_graph(DirectionSet::from_indices(b, &[0, 1, 2, 5]).unwrap()).unwrap();
        let cc = g.complement().unwrap().complement().unwrap();
        assert!(isomorphic(&g, &cc).unwrap().isomorphic);
    }
}
