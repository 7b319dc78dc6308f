//! Eigenfunctions of the oval graphs X_q with extremal support, the
//! weight-distribution bound, and the induced-subgraph witnesses behind
//! its tightness. All verification is exact integer arithmetic over
//! {-1, 0, 1}-valued vertex functions.

use crate::cliques::{self, Clique, CliqueKind};
use crate::error::{Error, Result};
use crate::fields::Element;
use crate::graph::PeisertGraph;

/// A vertex function with values in {-1, 0, 1} satisfying
/// θ·f(γ) = Σ_{δ ~ γ} f(δ) at every vertex, for the recorded eigenvalue θ.
#[derive(Clone, Debug)]
pub struct Eigenfunction {
    pub eigenvalue: i64,
    pub values: Vec<i8>,
    pub support: Vec<Element>,
}

impl Eigenfunction {
    pub fn support_size(&self) -> usize {
        self.support.len()
    }
}

/// The two induced-subgraph shapes that certify tightness of the
/// weight-distribution bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessKind {
    /// Two equal cliques with no edges between them.
    IsolatedCliquePair,
    /// Two equal independent sets with all cross edges present.
    CompleteBipartite,
}

#[derive(Clone, Debug)]
pub struct WitnessSubgraph {
    pub kind: WitnessKind,
    pub t0: Vec<Element>,
    pub t1: Vec<Element>,
}

/// Lower bounds on eigenfunction support in a primitive type-(m, q) graph:
/// 2(θ1+1) = 2(q-m+1) for the positive and -2θ2 = 2m for the negative
/// non-principal eigenvalue.
pub fn wdb_bounds(m: u32, q: u32) -> Result<(u32, u32)> {
    if m < 2 || m > q - 1 {
        return Err(Error::BadParameter(format!(
            "type ({m}, {q}) is imprimitive; the bound needs 2 <= m <= q-1"
        )));
    }
    Ok((2 * (q - m + 1), 2 * m))
}

/// Verify the eigenfunction condition at every vertex and return the
/// observed eigenvalue. The eigenvalue is derived from the function itself,
/// never assumed.
pub fn verify_eigenfunction(g: &PeisertGraph, values: &[i8]) -> Result<i64> {
    let n = g.vertex_count() as usize;
    if values.len() != n {
        return Err(Error::BadParameter("value vector has the wrong length".into()));
    }
    if values.iter().all(|&v| v == 0) {
        return Err(Error::BadParameter("eigenfunction must not be identically zero".into()));
    }
    let t = g.basis().tower();
    let sels = g.connection_elements();
    let sum_at = |v: u32| -> i64 {
        sels.iter()
            .map(|&s| values[t.add(Element(v), s).index() as usize] as i64)
            .sum()
    };
    // derive θ from the first vertex in the support
    let pivot = (0..n).find(|&v| values[v] != 0).unwrap();
    let s = sum_at(pivot as u32);
    let f = values[pivot] as i64;
    if s % f != 0 {
        return Err(Error::Internal("neighbor sum is not a multiple of the value".into()));
    }
    let theta = s / f;
    for v in 0..n as u32 {
        if sum_at(v) != theta * values[v as usize] as i64 {
            return Err(Error::Internal(format!(
                "eigenfunction condition fails at vertex {v}"
            )));
        }
    }
    Ok(theta)
}

fn isqrt_square(q: u32) -> Result<u32> {
    let r = cliques::isqrt(q);
    if r * r != q {
        return Err(Error::NotSquare { q });
    }
    Ok(r)
}

/// The non-canonical clique C_q = {γ^√q + γβ : γ ∈ F_q} of the oval graph,
/// verified to be a maximum clique whose intersection with every canonical
/// clique through 0 has exactly √q - 1 nonzero elements.
pub fn clique_cq(g: &PeisertGraph) -> Result<Clique> {
    let basis = g.basis();
    let t = basis.tower();
    let q = g.q();
    let r = isqrt_square(q)?;
    let beta = basis.beta();
    let mut vs: Vec<Element> = basis
        .fq_elements()
        .iter()
        .map(|&gamma| t.add(t.pow(gamma, r as u64), t.mul(gamma, beta)))
        .collect();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != q as usize {
        return Err(Error::Internal("C_q is not a q-element set".into()));
    }
    if !cliques::verify_clique(g, &vs) {
        return Err(Error::Internal("C_q is not a clique in this graph".into()));
    }
    let pts: Vec<_> = vs.iter().map(|&v| basis.pi(v)).collect();
    let dirs = crate::plane::directions_of(basis, &pts);
    if dirs.len() < 2 {
        return Err(Error::Internal("C_q is unexpectedly canonical".into()));
    }
    let cq = Clique {
        vertices: vs,
        kind: CliqueKind::NoncanonicalMaximum,
        directions: dirs,
    };
    // intersection with each canonical clique through 0: √q - 1 nonzero
    for &d in g.directions().members() {
        let rep = basis.coset_rep(d);
        let nonzero = basis
            .fq_elements()
            .iter()
            .skip(1)
            .filter(|&&lambda| cq.contains(t.mul(rep, lambda)))
            .count() as u32;
        if nonzero != r - 1 {
            return Err(Error::Internal(format!(
                "C_q meets a canonical clique in {nonzero} nonzero points, expected {}",
                r - 1
            )));
        }
    }
    Ok(cq)
}

/// The scaled clique ε^i·C_q.
pub fn scaled_cq(g: &PeisertGraph, i: u32) -> Result<Clique> {
    let t = g.basis().tower().clone();
    let cq = clique_cq(g)?;
    let factor = t.pow(t.epsilon(), i as u64);
    let mut vs: Vec<Element> = cq.vertices.iter().map(|&v| t.mul(factor, v)).collect();
    vs.sort_unstable();
    if !cliques::verify_clique(g, &vs) {
        return Err(Error::Internal("scaled C_q is not a clique".into()));
    }
    Ok(Clique {
        vertices: vs,
        kind: CliqueKind::NoncanonicalMaximum,
        directions: cq.directions,
    })
}

/// The eigenfunction supported on (C \ D) ∪ (ε^i C_q \ D) with D their
/// intersection: +1 on the canonical side, -1 on the non-canonical side.
/// Its support is exactly 2(q - √q) and the verified eigenvalue is
/// q - √q - 1, meeting the weight-distribution bound.
pub fn build_f1(g: &PeisertGraph, canonical: &Clique, i: u32) -> Result<Eigenfunction> {
    let q = g.q();
    let r = isqrt_square(q)?;
    if canonical.kind != CliqueKind::Canonical || !canonical.contains(Element::ZERO) {
        return Err(Error::BadParameter(
            "build_f1 needs a canonical clique through 0".into(),
        ));
    }
    if i > r {
        return Err(Error::BadParameter(format!("index i must lie in 0..={r}")));
    }
    let cq = scaled_cq(g, i)?;
    let d: Vec<Element> = canonical
        .vertices
        .iter()
        .copied()
        .filter(|&v| cq.contains(v))
        .collect();
    if d.len() as u32 != r {
        return Err(Error::Internal(format!(
            "|C ∩ ε^i C_q| = {}, expected {r}",
            d.len()
        )));
    }
    let n = g.vertex_count() as usize;
    let mut values = vec![0i8; n];
    for &v in &canonical.vertices {
        values[v.index() as usize] = 1;
    }
    for &v in &cq.vertices {
        values[v.index() as usize] = if d.contains(&v) { 0 } else { -1 };
    }
    for &v in &d {
        values[v.index() as usize] = 0;
    }
    let eigenvalue = verify_eigenfunction(g, &values)?;
    let support: Vec<Element> = (0..n as u32)
        .map(Element)
        .filter(|&v| values[v.index() as usize] != 0)
        .collect();
    if support.len() as u32 != 2 * (q - r) {
        return Err(Error::Internal(format!(
            "support has {} vertices, expected {}",
            support.len(),
            2 * (q - r)
        )));
    }
    Ok(Eigenfunction {
        eigenvalue,
        values,
        support,
    })
}

/// The eigenfunction +1 on T0 = Q and -1 on T1 = Qβ, where Q is the
/// norm-one subgroup of F_q*. Its support is exactly 2(√q + 1) and the
/// verified eigenvalue is -(√q + 1); T0 ∪ T1 induces a complete bipartite
/// subgraph.
pub fn build_f2(g: &PeisertGraph) -> Result<Eigenfunction> {
    let basis = g.basis();
    let t = basis.tower();
    let q = g.q();
    let r = isqrt_square(q)?;
    let beta = basis.beta();
    let oval: Vec<Element> = basis
        .fq_elements()
        .iter()
        .copied()
        .filter(|&x| !x.is_zero() && t.pow(x, r as u64 + 1) == Element::ONE)
        .collect();
    if oval.len() as u32 != r + 1 {
        return Err(Error::Internal("norm-one subgroup has the wrong size".into()));
    }
    let t0 = oval.clone();
    let t1: Vec<Element> = oval.iter().map(|&x| t.mul(x, beta)).collect();
    let witness = WitnessSubgraph {
        kind: WitnessKind::CompleteBipartite,
        t0: t0.clone(),
        t1: t1.clone(),
    };
    if !verify_witness(g, &witness)? {
        return Err(Error::Internal("T0 ∪ T1 is not a bipartite witness".into()));
    }
    let n = g.vertex_count() as usize;
    let mut values = vec![0i8; n];
    for &v in &t0 {
        values[v.index() as usize] = 1;
    }
    for &v in &t1 {
        values[v.index() as usize] = -1;
    }
    let eigenvalue = verify_eigenfunction(g, &values)?;
    let support: Vec<Element> = (0..n as u32)
        .map(Element)
        .filter(|&v| values[v.index() as usize] != 0)
        .collect();
    if support.len() as u32 != 2 * (r + 1) {
        return Err(Error::Internal("support has the wrong size".into()));
    }
    Ok(Eigenfunction {
        eigenvalue,
        values,
        support,
    })
}

/// Check that the witness has its kind's induced structure, that every
/// outside vertex sees both parts equally often, and that the ±1 indicator
/// really is an eigenfunction.
pub fn verify_witness(g: &PeisertGraph, w: &WitnessSubgraph) -> Result<bool> {
    if w.t0.iter().any(|v| w.t1.contains(v)) {
        return Err(Error::BadParameter("witness parts must be disjoint".into()));
    }
    if w.t0.len() != w.t1.len() || w.t0.is_empty() {
        return Ok(false);
    }
    let within = |part: &[Element], expect_edges: bool| -> bool {
        part.iter().enumerate().all(|(i, &u)| {
            part.iter()
                .skip(i + 1)
                .all(|&v| g.adjacent(u, v) == expect_edges)
        })
    };
    let across = |expect_edges: bool| -> bool {
        w.t0
            .iter()
            .all(|&u| w.t1.iter().all(|&v| g.adjacent(u, v) == expect_edges))
    };
    let shape_ok = match w.kind {
        WitnessKind::IsolatedCliquePair => within(&w.t0, true) && within(&w.t1, true) && across(false),
        WitnessKind::CompleteBipartite => within(&w.t0, false) && within(&w.t1, false) && across(true),
    };
    if !shape_ok {
        return Ok(false);
    }
    // balanced-neighbor condition outside the support
    for v in 0..g.vertex_count() {
        let ev = Element(v);
        if w.t0.contains(&ev) || w.t1.contains(&ev) {
            continue;
        }
        let n0 = w.t0.iter().filter(|&&u| g.adjacent(ev, u)).count();
        let n1 = w.t1.iter().filter(|&&u| g.adjacent(ev, u)).count();
        if n0 != n1 {
            return Ok(false);
        }
    }
    // and the indicator really satisfies the eigenvalue equation
    let mut values = vec![0i8; g.vertex_count() as usize];
    for &v in &w.t0 {
        values[v.index() as usize] = 1;
    }
    for &v in &w.t1 {
        values[v.index() as usize] = -1;
    }
    Ok(verify_eigenfunction(g, &values).is_ok())
}
