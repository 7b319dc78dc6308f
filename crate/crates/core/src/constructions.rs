//! Named graph families: the extremal construction for every prime power,
//! the direction-minimal prime-case graph, hyperplane-induced graphs
//! Y_{q,n}(U), oval graphs X_q, quadratic-form graphs and affine polar
//! graphs VO⁺(2e, r), together with explicit verified isomorphisms between
//! the square-order extremal graphs and VO⁺(4, √q).

use std::sync::Arc;

use crate::bitgraph::BitGraph;
use crate::canon::ColoredGraph;
use crate::classify::{self, Certificate};
use crate::cliques::{self, Clique, CliqueKind};
use crate::error::{Error, Result};
use crate::fields::{make_tower, Element, FieldTower, SmallField};
use crate::graph::{build_graph, PeisertGraph};
use crate::plane::{directions_of, DirectionSet, ProjectivePoint, TowerBasis};

/// One verified fact about a construction; failed checks become errors
/// instead.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub detail: String,
}

/// A constructed graph together with its witness clique (when the
/// construction produces one) and the record of verified assertions.
pub struct Built {
    pub graph: PeisertGraph,
    pub witness: Option<Clique>,
    pub checks: Vec<Check>,
}

fn witness_clique(g: &PeisertGraph, vertices: Vec<Element>) -> Result<Clique> {
    let mut vs = vertices;
    vs.sort_unstable();
    vs.dedup();
    if !cliques::verify_clique(g, &vs) {
        return Err(Error::Internal("witness set is not a clique".into()));
    }
    let basis = g.basis();
    let pts: Vec<_> = vs.iter().map(|&v| basis.pi(v)).collect();
    let dirs = directions_of(basis, &pts);
    let kind = if vs.len() == g.q() as usize {
        if dirs.len() == 1 {
            CliqueKind::Canonical
        } else {
            CliqueKind::NoncanonicalMaximum
        }
    } else {
        CliqueKind::MaximalSubmaximum
    };
    Ok(Clique {
        vertices: vs,
        kind,
        directions: dirs,
    })
}

fn require_noncanonical(c: &Clique) -> Result<()> {
    if c.kind != CliqueKind::NoncanonicalMaximum {
        return Err(Error::Internal(format!(
            "expected a non-canonical maximum clique, got {:?}",
            c.kind
        )));
    }
    Ok(())
}

/// Largest proper divisor of n.
fn largest_proper_divisor(n: u32) -> u32 {
    (1..n).rev().find(|d| n % d == 0).unwrap()
}

/// The extremal construction for q = p^n with n > 1: with k the largest
/// proper divisor of n and U a (n/k - 1)-dimensional F_{p^k}-subspace of
/// F_q, the connection set F_q* ∪ ⋃_{u∈U} (u+β)F_q* yields a type
/// (p^(n-k)+1, q) graph, and U ⊕ βF_{p^k} is a non-canonical clique in it.
pub fn extremal_construction(basis: &Arc<TowerBasis>) -> Result<Built> {
    let t = basis.tower().clone();
    let (p, n, q) = (t.p(), t.n(), t.q());
    if n <= 1 {
        return Err(Error::BadParameter(
            "the extremal construction needs q = p^n with n > 1; use the prime-case graph instead"
                .into(),
        ));
    }
    let k = largest_proper_divisor(n);
    let kq = p.pow(k);
    let d = n / k;
    let sub = t.subfield_elements(kq)?;
    // U = F_{p^k}-span of 1, ω, …, ω^(d-2) for the primitive ω of F_q
    let omega = t.epsilon();
    let mut u_set = vec![Element::ZERO];
    for i in 0..d - 1 {
        let pow = t.pow(omega, i as u64);
        let mut next = Vec::with_capacity(u_set.len() * kq as usize);
        for &u in &u_set {
            for &c in &sub {
                next.push(t.add(u, t.mul(c, pow)));
            }
        }
        next.sort_unstable();
        next.dedup();
        u_set = next;
    }
    let expect_m = p.pow(n - k) + 1;
    if u_set.len() as u32 != expect_m - 1 {
        return Err(Error::Internal("subspace has the wrong size".into()));
    }

    let beta = basis.beta();
    let mut dirs: Vec<ProjectivePoint> = vec![basis.direction_of(Element::ONE)?];
    for &u in &u_set {
        dirs.push(basis.direction_of(t.add(u, beta))?);
    }
    let ds = DirectionSet::new(basis.clone(), &dirs)?;
    let g = build_graph(ds)?;
    let mut checks = vec![Check {
        name: "type",
        detail: format!("({}, {q})", g.m()),
    }];
    if g.m() != expect_m {
        return Err(Error::Internal(format!(
            "expected type ({expect_m}, {q}), built ({}, {q})",
            g.m()
        )));
    }

    // witness V = U ⊕ βF_{p^k}
    let mut v_set = Vec::with_capacity(q as usize);
    for &u in &u_set {
        for &c in &sub {
            v_set.push(t.add(u, t.mul(c, beta)));
        }
    }
    let w = witness_clique(&g, v_set)?;
    require_noncanonical(&w)?;
    checks.push(Check {
        name: "witness",
        detail: format!(
            "non-canonical clique of size {} determining {} directions",
            w.size(),
            w.directions.len()
        ),
    });
    checks.push(Check {
        name: "cosets",
        detail: format!("{} pairwise disjoint cosets", g.m()),
    });
    Ok(Built {
        graph: g,
        witness: Some(w),
        checks,
    })
}

/// The prime-case direction-minimal graph: the type ((p+3)/2, p) graph on
/// the directions of {(x, x^((p+1)/2)) : x ∈ F_p}, with that point set's
/// pullback as a non-canonical clique.
pub fn ls_graph(basis: &Arc<TowerBasis>) -> Result<Built> {
    let t = basis.tower().clone();
    let p = t.p();
    if t.n() != 1 || p < 3 {
        return Err(Error::BadParameter(
            "the prime-case construction needs q = p an odd prime".into(),
        ));
    }
    let e = (p as u64 + 1) / 2;
    let pts: Vec<_> = basis
        .fq_elements()
        .iter()
        .map(|&x| crate::plane::AffinePoint {
            a: x,
            b: t.pow(x, e),
        })
        .collect();
    let dirs = directions_of(basis, &pts);
    let expect_m = (p + 3) / 2;
    if dirs.len() as u32 != expect_m {
        return Err(Error::Internal(format!(
            "point set determines {} directions, expected {expect_m}",
            dirs.len()
        )));
    }
    let g = build_graph(DirectionSet::new(basis.clone(), &dirs)?)?;
    let pullback: Result<Vec<Element>> = pts.iter().map(|&pt| basis.pi_inv(pt)).collect();
    let w = witness_clique(&g, pullback?)?;
    require_noncanonical(&w)?;
    let checks = vec![
        Check {
            name: "type",
            detail: format!("({expect_m}, {p})"),
        },
        Check {
            name: "witness",
            detail: format!("non-canonical clique of size {}", w.size()),
        },
    ];
    Ok(Built {
        graph: g,
        witness: Some(w),
        checks,
    })
}

/// Default hyperplane for y_qn: the F_r-span of 1, ω, …, ω^(n-2) inside
/// F_q = F_{r^n}, for the primitive ω of F_q.
pub fn default_hyperplane(t: &FieldTower, r: u32) -> Result<Vec<Element>> {
    let q = t.q();
    let (layers, sub) = hyperplane_params(t, r)?;
    let omega = t.epsilon();
    let mut u = vec![Element::ZERO];
    for i in 0..layers - 1 {
        let pow = t.pow(omega, i as u64);
        let mut next = Vec::with_capacity(u.len() * sub.len());
        for &x in &u {
            for &c in &sub {
                next.push(t.add(x, t.mul(c, pow)));
            }
        }
        next.sort_unstable();
        next.dedup();
        u = next;
    }
    if u.len() as u32 != q / r {
        return Err(Error::Internal("hyperplane has the wrong size".into()));
    }
    Ok(u)
}

fn hyperplane_params(t: &FieldTower, r: u32) -> Result<(u32, Vec<Element>)> {
    let q = t.q();
    if !t.has_subfield(r) || q % r != 0 || q == r {
        return Err(Error::BadParameter(format!(
            "F_{r} is not a proper subfield of F_{q}"
        )));
    }
    let mut layers = 0u32;
    let mut pow = 1u32;
    while pow < q {
        pow *= r;
        layers += 1;
    }
    if pow != q {
        return Err(Error::BadParameter(format!("{q} is not a power of {r}")));
    }
    Ok((layers, t.subfield_elements(r)?))
}

/// The hyperplane-induced graph: for U a coset of an (n-1)-dimensional
/// F_r-subspace of F_q = F_{r^n}, the connection set
/// F_q* ∪ ⋃_{u∈U} (u+β)F_q* gives a type (r^(n-1)+1, q) graph.
pub fn y_qn(basis: &Arc<TowerBasis>, r: u32, hyperplane: &[Element]) -> Result<Built> {
    let t = basis.tower().clone();
    let q = t.q();
    let (_, sub) = hyperplane_params(&t, r)?;
    let mut u_set: Vec<Element> = hyperplane.to_vec();
    u_set.sort_unstable();
    u_set.dedup();
    if u_set.len() as u32 != q / r {
        return Err(Error::NotHyperplane);
    }
    for &u in &u_set {
        if !t.in_subfield(u, q)? {
            return Err(Error::NotHyperplane);
        }
    }
    // U - u0 must be an F_r-subspace
    let u0 = u_set[0];
    let shifted: std::collections::BTreeSet<Element> =
        u_set.iter().map(|&u| t.sub(u, u0)).collect();
    for &x in &shifted {
        for &y in &shifted {
            if !shifted.contains(&t.add(x, y)) {
                return Err(Error::NotHyperplane);
            }
        }
        for &c in &sub {
            if !shifted.contains(&t.mul(c, x)) {
                return Err(Error::NotHyperplane);
            }
        }
    }

    let beta = basis.beta();
    let mut dirs = vec![basis.direction_of(Element::ONE)?];
    for &u in &u_set {
        dirs.push(basis.direction_of(t.add(u, beta))?);
    }
    let g = build_graph(DirectionSet::new(basis.clone(), &dirs)?)?;
    let expect_m = q / r + 1;
    if g.m() != expect_m {
        return Err(Error::Internal(format!(
            "expected type ({expect_m}, {q}), built ({}, {q})",
            g.m()
        )));
    }
    // when U is a subspace, U ⊕ βF_r is an explicit non-canonical clique
    let witness = if u_set.binary_search(&Element::ZERO).is_ok() {
        let mut v_set = Vec::with_capacity(q as usize);
        for &u in &u_set {
            for &c in &sub {
                v_set.push(t.add(u, t.mul(c, beta)));
            }
        }
        let w = witness_clique(&g, v_set)?;
        require_noncanonical(&w)?;
        Some(w)
    } else {
        None
    };
    let checks = vec![
        Check {
            name: "type",
            detail: format!("({expect_m}, {q})"),
        },
        Check {
            name: "hyperplane",
            detail: format!("coset of an F_{r}-subspace with {} points", u_set.len()),
        },
    ];
    Ok(Built {
        graph: g,
        witness,
        checks,
    })
}

/// The oval graph X_q for square q: with Q the norm-one subgroup
/// {γ : γ^(√q+1) = 1} of F_q*, the connection set ⋃_{δ∈Q} (δ+β)F_q* gives
/// a type (√q+1, q) graph.
pub fn oval_graph_xq(basis: &Arc<TowerBasis>) -> Result<Built> {
    let t = basis.tower().clone();
    let q = t.q();
    let r = cliques::isqrt(q);
    if r * r != q || q < 4 {
        return Err(Error::NotSquare { q });
    }
    let oval: Vec<Element> = basis
        .fq_elements()
        .iter()
        .copied()
        .filter(|&x| !x.is_zero() && t.pow(x, r as u64 + 1) == Element::ONE)
        .collect();
    if oval.len() as u32 != r + 1 {
        return Err(Error::Internal(format!(
            "norm-one subgroup has {} elements, expected {}",
            oval.len(),
            r + 1
        )));
    }
    let beta = basis.beta();
    let dirs: Result<Vec<ProjectivePoint>> = oval
        .iter()
        .map(|&delta| basis.direction_of(t.add(delta, beta)))
        .collect();
    let g = build_graph(DirectionSet::new(basis.clone(), &dirs?)?)?;
    if g.m() != r + 1 {
        return Err(Error::Internal("oval graph has the wrong type".into()));
    }
    let w = crate::spectral::clique_cq(&g)?;
    let checks = vec![
        Check {
            name: "type",
            detail: format!("({}, {q})", r + 1),
        },
        Check {
            name: "oval",
            detail: format!("{} norm-one elements", oval.len()),
        },
        Check {
            name: "witness",
            detail: format!("non-canonical clique of size {}", w.size()),
        },
    ];
    Ok(Built {
        graph: g,
        witness: Some(w),
        checks,
    })
}

/// A quadratic form on V(dim, r), stored as upper-triangular coefficients
/// in the index encoding of [`SmallField`].
#[derive(Clone)]
pub struct QuadraticForm {
    field: Arc<SmallField>,
    dim: usize,
    coeffs: Vec<u32>,
}

impl QuadraticForm {
    pub fn new(
        field: Arc<SmallField>,
        dim: usize,
        coeffs: Vec<(usize, usize, u32)>,
    ) -> QuadraticForm {
        let mut c = vec![0u32; dim * dim];
        for (i, j, v) in coeffs {
            assert!(i <= j && j < dim);
            c[i * dim + j] = v;
        }
        QuadraticForm {
            field,
            dim,
            coeffs: c,
        }
    }

    /// The hyperbolic form x1·x2 + x3·x4 + … on 2e variables.
    pub fn hyperbolic(field: Arc<SmallField>, e: usize) -> QuadraticForm {
        let dim = 2 * e;
        let coeffs = (0..e).map(|i| (2 * i, 2 * i + 1, 1u32)).collect();
        QuadraticForm::new(field, dim, coeffs)
    }

    pub fn field(&self) -> &Arc<SmallField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize) -> u32 {
        self.coeffs[i * self.dim + j]
    }

    pub fn eval(&self, v: &[u32]) -> u32 {
        let f = &self.field;
        let mut acc = 0u32;
        for i in 0..self.dim {
            for j in i..self.dim {
                let c = self.coeffs[i * self.dim + j];
                if c != 0 {
                    acc = f.add(acc, f.mul(c, f.mul(v[i], v[j])));
                }
            }
        }
        acc
    }
}

impl std::fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticForm(dim={}, r={})", self.dim, self.field.order())
    }
}

/// The Cayley graph on V(dim, r) with x ~ y iff f(x - y) = 0.
pub struct FormGraph {
    form: QuadraticForm,
    n: u32,
    bitgraph: BitGraph,
    connection: Vec<u32>,
}

impl FormGraph {
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.connection.len() as u32
    }

    pub fn bitgraph(&self) -> &BitGraph {
        &self.bitgraph
    }

    /// Nonzero zeros of the form, as vertex indices.
    pub fn connection_elements(&self) -> &[u32] {
        &self.connection
    }

    pub fn coords_of(&self, v: u32) -> Vec<u32> {
        let r = self.form.field.order();
        let mut out = Vec::with_capacity(self.form.dim);
        let mut x = v;
        for _ in 0..self.form.dim {
            out.push(x % r);
            x /= r;
        }
        out
    }

    pub fn index_of(&self, coords: &[u32]) -> u32 {
        let r = self.form.field.order();
        coords.iter().rev().fold(0u32, |acc, &c| acc * r + c)
    }

    pub fn add_vec(&self, u: u32, v: u32) -> u32 {
        let f = &self.form.field;
        let (a, b) = (self.coords_of(u), self.coords_of(v));
        let sum: Vec<u32> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect();
        self.index_of(&sum)
    }

    pub fn sub_vec(&self, u: u32, v: u32) -> u32 {
        let f = &self.form.field;
        let (a, b) = (self.coords_of(u), self.coords_of(v));
        let diff: Vec<u32> = a.iter().zip(&b).map(|(&x, &y)| f.sub(x, y)).collect();
        self.index_of(&diff)
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        u != v && self.bitgraph.has_edge(u as usize, v as usize)
    }

    /// Every maximal clique containing the zero vector.
    pub fn maximal_cliques_through_zero(&self, budget: u64) -> Result<Vec<Vec<u32>>> {
        let out = crate::bk::maximal_cliques_containing(&self.bitgraph, 0, budget)?;
        Ok(out
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.into_iter().map(|v| v as u32).collect()
            })
            .collect())
    }
}

impl std::fmt::Debug for FormGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FormGraph(n={}, k={})", self.n, self.degree())
    }
}

/// Build the graph Y_f of a quadratic form.
pub fn quad_form_graph(form: QuadraticForm) -> Result<FormGraph> {
    let r = form.field.order() as u64;
    let n = r.checked_pow(form.dim as u32).unwrap_or(u64::MAX);
    if n > 4096 {
        return Err(Error::SizeCapExceeded { order: n, cap: 4096 });
    }
    let n = n as u32;
    let mut stub = FormGraph {
        form,
        n,
        bitgraph: BitGraph::new(n as usize),
        connection: Vec::new(),
    };
    let mut connection = Vec::new();
    for v in 1..n {
        if stub.form.eval(&stub.coords_of(v)) == 0 {
            connection.push(v);
        }
    }
    let mut bg = BitGraph::new(n as usize);
    for u in 0..n {
        for &s in &connection {
            let v = stub.add_vec(u, s);
            if v > u {
                bg.add_edge(u as usize, v as usize);
            }
        }
    }
    stub.bitgraph = bg;
    stub.connection = connection;
    Ok(stub)
}

/// The affine polar graph VO⁺(2e, r): the hyperbolic-form graph on V(2e, r).
pub fn vo_plus(e: u32, r: u32) -> Result<FormGraph> {
    if e < 2 {
        return Err(Error::BadParameter("need e >= 2".into()));
    }
    let field = Arc::new(SmallField::new(r)?);
    quad_form_graph(QuadraticForm::hyperbolic(field, e as usize))
}

/// A matrix over the form's field, rows of index-encoded entries.
pub type FrMatrix = Vec<Vec<u32>>;

fn mat_det(field: &SmallField, m: &FrMatrix) -> u32 {
    let n = m.len();
    let mut a: Vec<Vec<u32>> = m.clone();
    let mut det = 1u32;
    for col in 0..n {
        let pivot = (col..n).find(|&row| a[row][col] != 0);
        let Some(pivot) = pivot else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = field.neg(det);
        }
        det = field.mul(det, a[col][col]);
        let inv = field.inv(a[col][col]);
        for row in col + 1..n {
            if a[row][col] == 0 {
                continue;
            }
            let factor = field.mul(a[row][col], inv);
            for k in col..n {
                let sub = field.mul(factor, a[col][k]);
                a[row][k] = field.sub(a[row][k], sub);
            }
        }
    }
    det
}

fn mat_apply(field: &SmallField, m: &FrMatrix, v: &[u32]) -> Vec<u32> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u32, |acc, (&c, &x)| field.add(acc, field.mul(c, x)))
        })
        .collect()
}

/// Check that f1(Bx) = f2(x) for every vector x, i.e. that B exhibits the
/// equivalence of the two forms.
pub fn form_equivalence_check(
    f1: &QuadraticForm,
    f2: &QuadraticForm,
    b: &FrMatrix,
) -> Result<bool> {
    if f1.dim != f2.dim || b.len() != f1.dim || b.iter().any(|r| r.len() != f1.dim) {
        return Err(Error::BadParameter("dimension mismatch".into()));
    }
    let field = &f1.field;
    if mat_det(field, b) == 0 {
        return Err(Error::SingularMatrix);
    }
    let r = field.order() as u64;
    let count = r.pow(f1.dim as u32);
    let mut coords = vec![0u32; f1.dim];
    for mut v in 0..count {
        for c in coords.iter_mut() {
            *c = (v % r) as u32;
            v /= r;
        }
        let bx = mat_apply(field, b, &coords);
        if f1.eval(&bx) != f2.eval(&coords) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The norm-difference form of X_{r²} in V(4, r) coordinates: for odd r,
/// x1² - d·y1² - x2² + d·y2² with d a non-square; in characteristic 2,
/// x1² + x1y1 + d·y1² + x2² + x2y2 + d·y2² with Tr(d) = 1.
pub fn norm_difference_form(field: &Arc<SmallField>, d: u32) -> QuadraticForm {
    if field.p() == 2 {
        QuadraticForm::new(
            field.clone(),
            4,
            vec![(0, 0, 1), (0, 1, 1), (1, 1, d), (2, 2, 1), (2, 3, 1), (3, 3, d)],
        )
    } else {
        QuadraticForm::new(
            field.clone(),
            4,
            vec![
                (0, 0, 1),
                (1, 1, field.neg(d)),
                (2, 2, field.neg(1)),
                (3, 3, d),
            ],
        )
    }
}

/// Change-of-variables matrix taking the hyperbolic form to the
/// norm-difference form with constant d.
pub fn norm_equivalence_matrix(field: &SmallField, d: u32) -> FrMatrix {
    let one = 1u32;
    if field.p() == 2 {
        vec![
            vec![one, one, one, 0],
            vec![one, 0, one, 0],
            vec![0, one, 0, one],
            vec![0, d, one, d],
        ]
    } else {
        vec![
            vec![one, 0, one, 0],
            vec![one, 0, field.neg(one), 0],
            vec![0, d, 0, d],
            vec![0, field.neg(one), 0, one],
        ]
    }
}

/// An explicit isomorphism from X_{r²} onto VO⁺(4, r), verified edge by
/// edge over every vertex pair.
pub struct PolarIsomorphism {
    pub xq: Built,
    pub vo: FormGraph,
    /// vertex v of X_q maps to map[v] in VO⁺(4, r)
    pub map: Vec<u32>,
    pub checks: Vec<Check>,
}

pub fn xq_vo_isomorphism(r: u32) -> Result<PolarIsomorphism> {
    if !(2..=5).contains(&r) {
        return Err(Error::BadParameter("r must lie in 2..=5".into()));
    }
    let small = Arc::new(SmallField::new(r)?);
    let p = small.p();
    let j = log_len(p, r);
    let tower = Arc::new(make_tower(p, 2 * j, None)?);
    let basis = TowerBasis::new(tower.clone())?;
    let xq = oval_graph_xq(&basis)?;
    let q = tower.q();

    // d in the tower's copy of F_r, then α with F_q = F_r ⊕ αF_r
    let fr_elems = tower.subfield_elements(r)?;
    let (d_tower, alpha) = if p == 2 {
        let d = *fr_elems
            .iter()
            .find(|&&x| tower.trace_to(x, r, 2).unwrap() == Element::ONE)
            .expect("the trace maps onto F_2");
        let alpha = tower
            .elements()
            .find(|&a| {
                tower.in_subfield(a, q).unwrap()
                    && tower.add(tower.add(tower.mul(a, a), a), d).is_zero()
            })
            .ok_or_else(|| Error::Internal("no root of t² + t + d in F_q".into()))?;
        (d, alpha)
    } else {
        let d = *fr_elems
            .iter()
            .find(|&&x| !x.is_zero() && tower.pow(x, (r as u64 - 1) / 2) != Element::ONE)
            .expect("odd F_r has non-squares");
        let alpha = tower
            .elements()
            .find(|&a| tower.in_subfield(a, q).unwrap() && tower.mul(a, a) == d)
            .ok_or_else(|| Error::Internal("no square root of d in F_q".into()))?;
        (d, alpha)
    };

    // field isomorphism from the tower's F_r onto the standalone GF(r)
    let phi = subfield_iso(&tower, r, &small)?;
    let d_small = phi[fr_index(&fr_elems, d_tower)];

    // decomposition table F_q = F_r ⊕ αF_r
    let mut decomp: std::collections::BTreeMap<Element, (Element, Element)> =
        std::collections::BTreeMap::new();
    for &x in &fr_elems {
        for &y in &fr_elems {
            let xi = tower.add(x, tower.mul(y, alpha));
            if decomp.insert(xi, (x, y)).is_some() {
                return Err(Error::Internal("α does not split F_q".into()));
            }
        }
    }

    let vo = vo_plus(2, r)?;
    let b_mat = norm_equivalence_matrix(&small, d_small);
    let f1 = QuadraticForm::hyperbolic(small.clone(), 2);
    let f2 = norm_difference_form(&small, d_small);
    if !form_equivalence_check(&f1, &f2, &b_mat)? {
        return Err(Error::Internal(
            "change of variables does not equate the forms".into(),
        ));
    }

    // ψ: γ = a + bβ ↦ (γ1, γ2) = (b, a) ↦ (x1, y1, x2, y2) ↦ B·(…)
    let mut map = vec![0u32; tower.q2() as usize];
    for gamma in tower.elements() {
        let pt = basis.pi(gamma);
        let (gamma1, gamma2) = (pt.b, pt.a);
        let (x1, y1) = decomp[&gamma1];
        let (x2, y2) = decomp[&gamma2];
        let v = vec![
            phi[fr_index(&fr_elems, x1)],
            phi[fr_index(&fr_elems, y1)],
            phi[fr_index(&fr_elems, x2)],
            phi[fr_index(&fr_elems, y2)],
        ];
        let w = mat_apply(&small, &b_mat, &v);
        map[gamma.index() as usize] = vo.index_of(&w);
    }
    let mut seen = vec![false; vo.vertex_count() as usize];
    for &v in &map {
        if seen[v as usize] {
            return Err(Error::Internal("vertex map is not a bijection".into()));
        }
        seen[v as usize] = true;
    }
    // edge-exhaustive isomorphism check
    let n = tower.q2();
    for u in 0..n {
        for v in u + 1..n {
            let a = xq.graph.adjacent(Element(u), Element(v));
            let b = vo.adjacent(map[u as usize], map[v as usize]);
            if a != b {
                return Err(Error::Internal(format!("edge mismatch at pair ({u}, {v})")));
            }
        }
    }
    let checks = vec![
        Check {
            name: "bijection",
            detail: format!("{n} vertices"),
        },
        Check {
            name: "edges",
            detail: format!("all {} pairs agree", n as u64 * (n as u64 - 1) / 2),
        },
    ];
    Ok(PolarIsomorphism {
        xq,
        vo,
        map,
        checks,
    })
}

fn fr_index(fr_elems: &[Element], x: Element) -> usize {
    fr_elems.binary_search(&x).expect("element lies in F_r")
}

/// Isomorphism from the tower's subfield F_r onto a standalone GF(r),
/// indexed by position in the sorted subfield list and verified to respect
/// both field operations.
fn subfield_iso(tower: &FieldTower, r: u32, small: &SmallField) -> Result<Vec<u32>> {
    let fr_elems = tower.subfield_elements(r)?;
    let mut phi = vec![0u32; fr_elems.len()];
    if r == 2 {
        phi[fr_index(&fr_elems, Element::ONE)] = 1;
    } else {
        let omega = *fr_elems
            .iter()
            .find(|&&x| !x.is_zero() && tower.element_order(x) == r - 1)
            .expect("F_r* is cyclic");
        let minpoly = tower.min_poly_over_prime(omega);
        let root = small
            .elements()
            .find(|&x| small.eval_prime_poly(&minpoly, x) == 0)
            .ok_or_else(|| Error::Internal("minimal polynomial has no root in GF(r)".into()))?;
        for (i, &x) in fr_elems.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut y = x;
            let mut k = 0u64;
            while y != Element::ONE {
                y = tower.div(y, omega);
                k += 1;
            }
            phi[i] = small.pow(root, k);
        }
    }
    for (i, &x) in fr_elems.iter().enumerate() {
        for (k, &y) in fr_elems.iter().enumerate() {
            let s = tower.add(x, y);
            let m = tower.mul(x, y);
            if phi[fr_index(&fr_elems, s)] != small.add(phi[i], phi[k])
                || phi[fr_index(&fr_elems, m)] != small.mul(phi[i], phi[k])
            {
                return Err(Error::Internal(
                    "subfield map is not a field isomorphism".into(),
                ));
            }
        }
    }
    Ok(phi)
}

/// The two type-(17, 32) graphs over the F_2 ⊂ F_32 ⊂ F_1024 tower built
/// from t⁵+t²+1 and t²+t+1, generated by the subspaces
/// span{1, ε, β, ε¹⁶β, ε²¹+ε⁹β} and span{1, ε, ε², ε³, β}.
pub fn example_q32() -> Result<(Built, Built)> {
    let fq_mod = [1u32, 0, 1, 0, 0, 1];
    let fq2_mod = [1u32, 1, 1];
    let tower = Arc::new(make_tower(2, 5, Some((&fq_mod, &fq2_mod)))?);
    let eps = tower
        .elements()
        .find(|&x| {
            tower.in_subfield(x, 32).unwrap() && tower.eval_prime_poly(&fq_mod, x).is_zero()
        })
        .ok_or_else(|| Error::Internal("no root of the degree-5 modulus in F_32".into()))?;
    let beta = tower
        .elements()
        .find(|&x| tower.eval_prime_poly(&[1, 1, 1], x).is_zero())
        .ok_or_else(|| Error::Internal("no root of t²+t+1".into()))?;
    if tower.in_subfield(beta, 32)? {
        return Err(Error::Internal("β unexpectedly lies in F_32".into()));
    }
    let basis = TowerBasis::with_beta(tower.clone(), beta)?;

    let e = |k: u64| tower.pow(eps, k);
    let gens1 = [
        Element::ONE,
        eps,
        beta,
        tower.mul(e(16), beta),
        tower.add(e(21), tower.mul(e(9), beta)),
    ];
    let gens2 = [Element::ONE, eps, e(2), e(3), beta];
    let built = |gens: &[Element]| -> Result<Built> {
        let mut v = vec![Element::ZERO];
        for &g in gens {
            let mut next = v.clone();
            for &x in &v {
                next.push(tower.add(x, g));
            }
            next.sort_unstable();
            next.dedup();
            v = next;
        }
        if v.len() != 32 {
            return Err(Error::Internal("generators are not independent".into()));
        }
        let mut dirs: Vec<ProjectivePoint> = Vec::new();
        for &x in &v {
            if !x.is_zero() {
                dirs.push(basis.direction_of(x)?);
            }
        }
        dirs.sort_by_key(|&d| basis.dir_index(d));
        dirs.dedup();
        let g = build_graph(DirectionSet::new(basis.clone(), &dirs)?)?;
        if g.m() != 17 {
            return Err(Error::Internal(format!(
                "expected type (17, 32), built ({}, 32)",
                g.m()
            )));
        }
        let w = witness_clique(&g, v)?;
        require_noncanonical(&w)?;
        let checks = vec![
            Check {
                name: "type",
                detail: "(17, 32)".into(),
            },
            Check {
                name: "witness",
                detail: format!(
                    "non-canonical clique of size {} with {} directions",
                    w.size(),
                    w.directions.len()
                ),
            },
        ];
        Ok(Built {
            graph: g,
            witness: Some(w),
            checks,
        })
    };
    Ok((built(&gens1)?, built(&gens2)?))
}

/// Certificate of a form graph through the same pipeline as Peisert-type
/// graphs, so certificates agree exactly on isomorphic graphs across the
/// two representations.
pub fn form_certificate(g: &FormGraph) -> Result<Certificate> {
    form_certificate_with_labeling(g).map(|(c, _)| c)
}

pub fn form_certificate_with_labeling(g: &FormGraph) -> Result<(Certificate, Vec<u32>)> {
    let n = g.vertex_count();
    let dense = 2 * g.degree() > n - 1;
    let (bg, connection): (BitGraph, Vec<u32>) = if dense {
        let bg = g.bitgraph().complement();
        let conn = (1..n).filter(|&v| bg.has_edge(0, v as usize)).collect();
        (bg, conn)
    } else {
        (g.bitgraph().clone(), g.connection_elements().to_vec())
    };
    // maximum cliques through the zero vector, for the edge colors
    let all = crate::bk::maximal_cliques_containing(&bg, 0, 1 << 32)?;
    let omega = all.iter().map(|c| c.len()).max().unwrap_or(1);
    let maxcliques: Vec<&Vec<usize>> = all.iter().filter(|c| c.len() == omega).collect();
    let mut elem_count: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for &x in &connection {
        let cnt = maxcliques
            .iter()
            .filter(|c| c.contains(&(x as usize)))
            .count() as u64;
        elem_count.insert(x, cnt.min(classify::EDGE_COLOR_CAP));
    }
    let mut values: Vec<u64> = elem_count.values().copied().collect();
    values.sort_unstable();
    values.dedup();
    let mut cg = ColoredGraph::new(n as usize, values.len());
    for u in 0..n {
        for &s in &connection {
            let v = g.add_vec(u, s);
            if v > u {
                let color = values.binary_search(&elem_count[&s]).unwrap() as u8 + 1;
                cg.set_edge(u as usize, v as usize, color);
            }
        }
    }
    // seeds: translations by scaled coordinate vectors, plus scalar
    // multiplication by a field generator
    let field = g.form().field();
    let mut seeds: Vec<Vec<u32>> = Vec::new();
    let mut fp_basis = Vec::new();
    let mut x = 1u32;
    for _ in 0..log_len(field.p(), field.order()) {
        fp_basis.push(x);
        x = field.mul(x, field.generator());
    }
    for coord in 0..g.form().dim() {
        for &b in &fp_basis {
            let mut coords = vec![0u32; g.form().dim()];
            coords[coord] = b;
            let t = g.index_of(&coords);
            seeds.push((0..n).map(|v| g.add_vec(v, t)).collect());
        }
    }
    let gen = field.generator();
    seeds.push(
        (0..n)
            .map(|v| {
                let scaled: Vec<u32> =
                    g.coords_of(v).iter().map(|&c| field.mul(gen, c)).collect();
                g.index_of(&scaled)
            })
            .collect(),
    );
    classify::certificate_parts(&cg, &values, dense as u8, &seeds)
}

fn log_len(p: u32, mut r: u32) -> u32 {
    let mut d = 0;
    while r > 1 {
        r /= p;
        d += 1;
    }
    d
}
