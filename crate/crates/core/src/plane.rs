//! The affine plane AG(2, q) inside F_{q²} and the projective line PG(1, q).
//!
//! A basis {1, β} with β ∉ F_q identifies F_{q²} with AG(2, q) via
//! π(a + bβ) = (a, b); σ((a, b)) = [a : b] maps nonzero points to PG(1, q).
//! Direction sets of point sets, K-linearity tests, and the PΓL(2, q) action
//! used for orbit enumeration live here.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fields::{Element, FieldTower};

const LOCAL_NONE: u16 = u16::MAX;

/// A point of AG(2, q): the image π(a + bβ) = (a, b).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffinePoint {
    pub a: Element,
    pub b: Element,
}

/// A point of PG(1, q), normalized so the first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjectivePoint {
    a: Element,
    b: Element,
}

impl ProjectivePoint {
    pub fn coords(&self) -> (Element, Element) {
        (self.a, self.b)
    }
}

/// An invertible 2×2 matrix over F_q acting on PG(1, q) by
/// [u1 : u2] ↦ [a·u1 + b·u2 : c·u1 + d·u2].
#[derive(Clone, Copy, Debug)]
pub struct Mat2 {
    pub a: Element,
    pub b: Element,
    pub c: Element,
    pub d: Element,
}

/// F_{q²} together with a choice of β ∉ F_q; owns the π tables and the
/// PΓL(2, q) permutation cache. Immutable after construction.
pub struct TowerBasis {
    tower: Arc<FieldTower>,
    beta: Element,
    fq_elems: Vec<Element>,
    fq_local: Vec<u16>,
    pi_table: Vec<(u16, u16)>,
    pi_inv_table: Vec<Element>,
    pgammal: OnceLock<Vec<Vec<u16>>>,
}

impl TowerBasis {
    /// Basis with the default β: the least-index element outside F_q.
    pub fn new(tower: Arc<FieldTower>) -> Result<Arc<TowerBasis>> {
        let beta = tower
            .elements()
            .find(|&x| !tower.in_subfield(x, tower.q()).unwrap())
            .ok_or_else(|| Error::Internal("no element outside F_q".into()))?;
        Self::with_beta(tower, beta)
    }

    pub fn with_beta(tower: Arc<FieldTower>, beta: Element) -> Result<Arc<TowerBasis>> {
        let q = tower.q();
        let q2 = tower.q2();
        if tower.in_subfield(beta, q)? {
            return Err(Error::BadParameter("beta must lie outside F_q".into()));
        }
        let fq_elems = tower.subfield_elements(q)?;
        let mut fq_local = vec![LOCAL_NONE; q2 as usize];
        for (i, e) in fq_elems.iter().enumerate() {
            fq_local[e.index() as usize] = i as u16;
        }
        let mut pi_table = vec![(LOCAL_NONE, LOCAL_NONE); q2 as usize];
        let mut pi_inv_table = vec![Element::ZERO; q2 as usize];
        for (ai, &a) in fq_elems.iter().enumerate() {
            for (bi, &b) in fq_elems.iter().enumerate() {
                let x = tower.add(a, tower.mul(b, beta));
                let slot = &mut pi_table[x.index() as usize];
                if *slot != (LOCAL_NONE, LOCAL_NONE) {
                    return Err(Error::Internal("pi is not injective".into()));
                }
                *slot = (ai as u16, bi as u16);
                pi_inv_table[ai * q as usize + bi] = x;
            }
        }
        Ok(Arc::new(TowerBasis {
            tower,
            beta,
            fq_elems,
            fq_local,
            pi_table,
            pi_inv_table,
            pgammal: OnceLock::new(),
        }))
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn beta(&self) -> Element {
        self.beta
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    /// Number of points of PG(1, q).
    pub fn num_directions(&self) -> u16 {
        self.q() as u16 + 1
    }

    /// The elements of F_q in ascending index order; positions define the
    /// local indices used in direction encodings.
    pub fn fq_elements(&self) -> &[Element] {
        &self.fq_elems
    }

    pub fn fq_local(&self, x: Element) -> Option<u16> {
        let l = self.fq_local[x.index() as usize];
        (l != LOCAL_NONE).then_some(l)
    }

    pub fn fq_element(&self, local: u16) -> Element {
        self.fq_elems[local as usize]
    }

    /// π: F_{q²} → AG(2, q).
    pub fn pi(&self, x: Element) -> AffinePoint {
        let (ai, bi) = self.pi_table[x.index() as usize];
        AffinePoint {
            a: self.fq_elems[ai as usize],
            b: self.fq_elems[bi as usize],
        }
    }

    /// π⁻¹: AG(2, q) → F_{q²}; errors when a coordinate is outside F_q.
    pub fn pi_inv(&self, p: AffinePoint) -> Result<Element> {
        let ai = self.fq_local(p.a).ok_or(Error::NotInField { size: self.q() })?;
        let bi = self.fq_local(p.b).ok_or(Error::NotInField { size: self.q() })?;
        Ok(self.pi_inv_table[ai as usize * self.q() as usize + bi as usize])
    }

    /// σ: AG(2, q) \ {0} → PG(1, q).
    pub fn sigma(&self, p: AffinePoint) -> Result<ProjectivePoint> {
        self.normalize(p.a, p.b)
    }

    pub fn normalize(&self, a: Element, b: Element) -> Result<ProjectivePoint> {
        let t = &self.tower;
        if !a.is_zero() {
            Ok(ProjectivePoint {
                a: Element::ONE,
                b: t.div(b, a),
            })
        } else if !b.is_zero() {
            Ok(ProjectivePoint {
                a: Element::ZERO,
                b: Element::ONE,
            })
        } else {
            Err(Error::BadParameter("σ is undefined at the origin".into()))
        }
    }

    /// Direction σ(π(x)) of a nonzero field element.
    pub fn direction_of(&self, x: Element) -> Result<ProjectivePoint> {
        self.sigma(self.pi(x))
    }

    /// Compact encoding of a direction: [1 : s] ↦ local index of s, and
    /// [0 : 1] ↦ q.
    pub fn dir_index(&self, d: ProjectivePoint) -> u16 {
        if d.a.is_zero() {
            self.q() as u16
        } else {
            self.fq_local(d.b).expect("normalized slope lies in F_q")
        }
    }

    pub fn dir_from_index(&self, i: u16) -> ProjectivePoint {
        if i == self.q() as u16 {
            ProjectivePoint {
                a: Element::ZERO,
                b: Element::ONE,
            }
        } else {
            ProjectivePoint {
                a: Element::ONE,
                b: self.fq_elems[i as usize],
            }
        }
    }

    /// Representative c with c·F_q* the coset of nonzero vectors pointing in
    /// direction d; the line through 0 with this direction is c·F_q.
    pub fn coset_rep(&self, d: ProjectivePoint) -> Element {
        let t = &self.tower;
        t.add(d.a, t.mul(d.b, self.beta))
    }

    /// Image of a direction under A ∈ GL(2, q).
    pub fn pgl_image(&self, m: &Mat2, d: ProjectivePoint) -> Result<ProjectivePoint> {
        let t = &self.tower;
        let det = t.sub(t.mul(m.a, m.d), t.mul(m.b, m.c));
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let u1 = t.add(t.mul(m.a, d.a), t.mul(m.b, d.b));
        let u2 = t.add(t.mul(m.c, d.a), t.mul(m.d, d.b));
        self.normalize(u1, u2)
    }

    /// All of PΓL(2, q) as permutations of direction indices: the group
    /// generated by PGL(2, q) and coordinate-wise Frobenius.
    pub fn pgammal_perms(&self) -> &Vec<Vec<u16>> {
        self.pgammal.get_or_init(|| {
            let t = &self.tower;
            let q = self.q();
            let nd = self.num_directions() as usize;
            // Frobenius permutations of PG(1, q): [a : b] -> [a^p : b^p]
            let n = t.n();
            let mut frob_perms: Vec<Vec<u16>> = Vec::with_capacity(n as usize);
            for k in 0..n {
                let mut perm = vec![0u16; nd];
                for i in 0..nd as u16 {
                    let d = self.dir_from_index(i);
                    let img = self
                        .normalize(t.frobenius(d.a, k), t.frobenius(d.b, k))
                        .unwrap();
                    perm[i as usize] = self.dir_index(img);
                }
                frob_perms.push(perm);
            }
            let mut perms = Vec::new();
            // normalized matrix representatives: first nonzero entry of
            // (a, b, c, d) equal to 1
            let fq = &self.fq_elems;
            for a in 0..q as usize {
                for b in 0..q as usize {
                    for c in 0..q as usize {
                        for d in 0..q as usize {
                            let m = Mat2 {
                                a: fq[a],
                                b: fq[b],
                                c: fq[c],
                                d: fq[d],
                            };
                            // normalization: skip unless the first nonzero
                            // coordinate is one
                            let coords = [m.a, m.b, m.c, m.d];
                            let Some(fnz) = coords.iter().find(|e| !e.is_zero()) else {
                                continue;
                            };
                            if *fnz != Element::ONE {
                                continue;
                            }
                            let det = t.sub(t.mul(m.a, m.d), t.mul(m.b, m.c));
                            if det.is_zero() {
                                continue;
                            }
                            for fp in &frob_perms {
                                let mut perm = vec![0u16; nd];
                                for i in 0..nd as u16 {
                                    let dd = self.dir_from_index(fp[i as usize]);
                                    perm[i as usize] =
                                        self.dir_index(self.pgl_image(&m, dd).unwrap());
                                }
                                perms.push(perm);
                            }
                        }
                    }
                }
            }
            let expect = (q as u64 * q as u64 * q as u64 - q as u64) * t.n() as u64;
            assert_eq!(perms.len() as u64, expect, "PΓL(2,q) has order (q³-q)·n");
            perms
        })
    }

    /// Lexicographically least image of a direction mask under PΓL(2, q).
    pub fn canonical_dir_mask(&self, mask: u64) -> u64 {
        let nd = self.num_directions();
        let mut best = u64::MAX;
        for perm in self.pgammal_perms() {
            let mut img = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                img |= 1u64 << perm[i];
            }
            if img < best {
                best = img;
            }
            let _ = nd;
        }
        best
    }
}

impl std::fmt::Debug for TowerBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TowerBasis(q={}, beta={:?})", self.q(), self.beta)
    }
}

/// A set of directions on PG(1, q); the combinatorial identity of a
/// Peisert-type graph for a fixed basis.
#[derive(Clone)]
pub struct DirectionSet {
    basis: Arc<TowerBasis>,
    members: Vec<ProjectivePoint>,
}

impl DirectionSet {
    pub fn new(basis: Arc<TowerBasis>, members: &[ProjectivePoint]) -> Result<DirectionSet> {
        let mut sorted: Vec<(u16, ProjectivePoint)> =
            members.iter().map(|&d| (basis.dir_index(d), d)).collect();
        sorted.sort_by_key(|&(i, _)| i);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateDirections);
        }
        if sorted.is_empty() || sorted.len() > basis.num_directions() as usize {
            return Err(Error::BadDirectionCount {
                m: sorted.len() as u32,
                q: basis.q(),
            });
        }
        Ok(DirectionSet {
            basis,
            members: sorted.into_iter().map(|(_, d)| d).collect(),
        })
    }

    pub fn from_indices(basis: Arc<TowerBasis>, indices: &[u16]) -> Result<DirectionSet> {
        let members: Vec<ProjectivePoint> =
            indices.iter().map(|&i| basis.dir_from_index(i)).collect();
        DirectionSet::new(basis, &members)
    }

    pub fn from_mask(basis: Arc<TowerBasis>, mask: u64) -> Result<DirectionSet> {
        let indices: Vec<u16> = (0..basis.num_directions())
            .filter(|&i| mask >> i & 1 == 1)
            .collect();
        DirectionSet::from_indices(basis, &indices)
    }

    pub fn basis(&self) -> &Arc<TowerBasis> {
        &self.basis
    }

    pub fn members(&self) -> &[ProjectivePoint] {
        &self.members
    }

    pub fn m(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn mask(&self) -> u64 {
        self.members
            .iter()
            .fold(0u64, |acc, &d| acc | 1u64 << self.basis.dir_index(d))
    }

    pub fn contains(&self, d: ProjectivePoint) -> bool {
        self.mask() >> self.basis.dir_index(d) & 1 == 1
    }

    /// Canonical representative of the PΓL(2, q)-orbit of this set.
    pub fn canonical_mask(&self) -> u64 {
        self.basis.canonical_dir_mask(self.mask())
    }

    /// The canonical representative itself; two sets are PΓL(2, q)-equivalent
    /// exactly when their canonical forms are equal.
    pub fn pgammal_canonical(&self) -> DirectionSet {
        DirectionSet::from_mask(self.basis.clone(), self.canonical_mask())
            .expect("canonical image has the same size")
    }
}

impl std::fmt::Debug for DirectionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<u16> = self.members.iter().map(|&d| self.basis.dir_index(d)).collect();
        write!(f, "DirectionSet{idx:?}")
    }
}

/// Directions determined by a point set: all σ of pairwise differences.
/// Sets with fewer than two points determine no direction.
pub fn directions_of(basis: &TowerBasis, points: &[AffinePoint]) -> Vec<ProjectivePoint> {
    let t = basis.tower();
    let mut out: Vec<ProjectivePoint> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for r in points.iter().skip(i + 1) {
            let da = t.sub(p.a, r.a);
            let db = t.sub(p.b, r.b);
            if da.is_zero() && db.is_zero() {
                continue;
            }
            out.push(basis.normalize(da, db).unwrap());
        }
    }
    out.sort_by_key(|&d| basis.dir_index(d));
    out.dedup();
    out
}

/// Largest subfield K of F_q over which the point set is K-linear, or None.
///
/// A set U through the origin is K-linear when some invertible F_q-linear
/// change of coordinates turns it into a K-subspace; since F_q-linear maps
/// commute with K-scaling, that holds exactly when π⁻¹(U) itself is closed
/// under addition and K-scaling, which is what we test.
pub fn k_linearity(basis: &TowerBasis, points: &[AffinePoint]) -> Result<Option<u32>> {
    let t = basis.tower();
    let q = basis.q();
    if points.len() != q as usize {
        return Err(Error::BadParameter(format!(
            "expected exactly q = {q} points, got {}",
            points.len()
        )));
    }
    let zero = AffinePoint {
        a: Element::ZERO,
        b: Element::ZERO,
    };
    if !points.contains(&zero) {
        return Err(Error::BadParameter("point set must contain the origin".into()));
    }
    let mut w = vec![false; t.q2() as usize];
    for &p in points {
        w[basis.pi_inv(p)?.index() as usize] = true;
    }
    let members: Vec<Element> = points.iter().map(|&p| basis.pi_inv(p).unwrap()).collect();

    let mut sizes: Vec<u32> = t
        .subfield_sizes()
        .into_iter()
        .filter(|&s| q % s == 0 && {
            // subfield of F_q, not just of F_{q²}
            let mut d = 1u32;
            let mut pow = t.p();
            while pow < s {
                pow *= t.p();
                d += 1;
            }
            let mut dq = 1u32;
            let mut powq = t.p();
            while powq < q {
                powq *= t.p();
                dq += 1;
            }
            dq % d == 0
        })
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));

    'k: for k in sizes {
        for &x in &members {
            for &y in &members {
                if !w[t.add(x, y).index() as usize] {
                    continue 'k;
                }
            }
            for &c in &t.subfield_elements(k)? {
                if !w[t.mul(c, x).index() as usize] {
                    continue 'k;
                }
            }
        }
        return Ok(Some(k));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_tower;

    fn basis(p: u32, n: u32) -> Arc<TowerBasis> {
        TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap()
    }

    #[test]
    fn pg1_has_q_plus_one_points() {
        let b = basis(3, 2);
        let mut dirs = std::collections::BTreeSet::new();
        for x in b.tower().elements().skip(1) {
            dirs.insert(b.dir_index(b.direction_of(x).unwrap()));
        }
        assert_eq!(dirs.len(), 10);
    }

    #[test]
    fn sigma_pi_constant_on_punctured_lines() {
        let b = basis(2, 2);
        let t = b.tower().clone();
        for c in t.elements().skip(1).take(6) {
            let d0 = b.direction_of(c).unwrap();
            for lambda in b.fq_elements().iter().skip(1) {
                assert_eq!(b.direction_of(t.mul(c, *lambda)).unwrap(), d0);
            }
        }
    }

    #[test]
    fn directions_of_line_is_single() {
        let b = basis(3, 1);
        let t = b.tower().clone();
        let c = t.generator();
        let line: Vec<AffinePoint> = b
            .fq_elements()
            .iter()
            .map(|&l| b.pi(t.mul(c, l)))
            .collect();
        assert_eq!(directions_of(&b, &line).len(), 1);
    }

    #[test]
    fn directions_of_lovasz_schrijver_set_p5() {
        // U0 = {(x, x^3)} over F_5 determines (5+3)/2 = 4 directions
        let b = basis(5, 1);
        let t = b.tower().clone();
        let pts: Vec<AffinePoint> = b
            .fq_elements()
            .iter()
            .map(|&x| AffinePoint { a: x, b: t.pow(x, 3) })
            .collect();
        assert_eq!(directions_of(&b, &pts).len(), 4);
    }

    #[test]
    fn directions_of_full_plane_is_everything() {
        let b = basis(2, 1);
        let t = b.tower().clone();
        let all: Vec<AffinePoint> = t.elements().map(|x| b.pi(x)).collect();
        assert_eq!(directions_of(&b, &all).len(), 3);
    }

    #[test]
    fn pgl_three_transitive_on_triples() {
        // canonical form of any 3-set is the base triple {0, 1, q}
        let b = basis(3, 2);
        let base: u64 = 1 | 1 << 1 | 1 << 9;
        for i in 0..10u16 {
            for j in i + 1..10 {
                for k in j + 1..10 {
                    let mask = 1u64 << i | 1 << j | 1 << k;
                    assert_eq!(b.canonical_dir_mask(mask), b.canonical_dir_mask(base));
                }
            }
        }
    }

    #[test]
    fn full_line_fixed_by_group() {
        let b = basis(2, 2);
        let all = (1u64 << 5) - 1;
        assert_eq!(b.canonical_dir_mask(all), all);
    }

    #[test]
    fn random_translate_has_same_canonical_form() {
        let b = basis(3, 2);
        let t = b.tower().clone();
        let mask: u64 = 1 | 1 << 2 | 1 << 5 | 1 << 7;
        let m = Mat2 {
            a: b.fq_element(1),
            b: b.fq_element(4),
            c: Element::ZERO,
            d: b.fq_element(2),
        };
        let mut img = 0u64;
        for i in 0..10u16 {
            if mask >> i & 1 == 1 {
                let d = b.pgl_image(&m, b.dir_from_index(i)).unwrap();
                img |= 1 << b.dir_index(d);
            }
        }
        let _ = t;
        assert_eq!(b.canonical_dir_mask(mask), b.canonical_dir_mask(img));
    }

    #[test]
    fn k_linearity_of_subfield_grid() {
        // V = F_3 ⊕ β·F_3 inside F_81 is F_3-linear with K = F_3 = F_sqrt(q)
        let b = basis(3, 2);
        let t = b.tower().clone();
        let f3 = t.subfield_elements(3).unwrap();
        let mut pts = Vec::new();
        for &x in &f3 {
            for &y in &f3 {
                pts.push(b.pi(t.add(x, t.mul(y, b.beta()))));
            }
        }
        assert_eq!(k_linearity(&b, &pts).unwrap(), Some(3));
    }

    #[test]
    fn k_linearity_of_line_is_fq() {
        let b = basis(3, 2);
        let t = b.tower().clone();
        let c = t.generator();
        let pts: Vec<AffinePoint> = b
            .fq_elements()
            .iter()
            .map(|&l| b.pi(t.mul(c, l)))
            .collect();
        assert_eq!(k_linearity(&b, &pts).unwrap(), Some(9));
    }

    #[test]
    fn singular_matrix_rejected() {
        let b = basis(3, 1);
        let m = Mat2 {
            a: Element::ONE,
            b: Element::ONE,
            c: Element::ONE,
            d: Element::ONE,
        };
        assert!(matches!(
            b.pgl_image(&m, b.dir_from_index(0)),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn direction_set_rejects_duplicates() {
        let b = basis(3, 1);
        let d = b.dir_from_index(0);
        assert!(matches!(
            DirectionSet::new(b, &[d, d]),
            Err(Error::DuplicateDirections)
        ));
    }
}
