//! The field tower F_p ⊂ F_q = F_{p^n} ⊂ F_{q²}.
//!
//! The top field is realized once as a table-driven field of order p^{2n}
//! (discrete-log and Zech-logarithm tables), so all arithmetic is O(1) and
//! subfields are recognized as fixed sets of Frobenius powers. F_q is built
//! from a degree-n modulus over F_p, and F_{q²} from a degree-2 modulus over
//! F_q; both moduli default to the lexicographically least irreducible
//! (coefficients compared from the constant term) so towers are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{self, Gf};

/// Desk-scale cap on the order of the top field.
pub const ORDER_CAP: u64 = 1 << 20;

/// An element of F_{q²} in index encoding: index 0 is zero and index i ≥ 1
/// denotes g^(i-1) for the tower generator g.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u32);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete log with respect to the tower generator, if nonzero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0 - 1)
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0 - 1)
        }
    }
}

/// Serialized form of a tower; `generator_index` is the packed polynomial
/// encoding of the multiplicative generator, kept for verification on reload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub p: u32,
    pub n: u32,
    pub fq_modulus: Vec<u32>,
    pub fq2_modulus: Vec<u32>,
    pub generator_index: u32,
}

/// Arithmetic context for F_p ⊂ F_q ⊂ F_{q²}.
pub struct FieldTower {
    p: u32,
    n: u32,
    q: u32,
    q2: u32,
    fq_modulus: Vec<u32>,
    fq2_modulus: [u32; 3],
    gf: Gf,
    epsilon: Element,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower(p={}, n={}, q={}, q2={})", self.p, self.n, self.q, self.q2)
    }
}

/// Build a tower for F_p ⊂ F_{p^n} ⊂ F_{p^2n}. `modulus_override` supplies
/// (degree-n modulus over F_p, degree-2 modulus over F_q with packed
/// coefficients); when absent both default to the lexicographically least
/// irreducible polynomial.
pub fn make_tower(
    p: u32,
    n: u32,
    modulus_override: Option<(&[u32], &[u32])>,
) -> Result<FieldTower> {
    if !gf::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::BadParameter("n must be positive".into()));
    }
    let order = (p as u64).checked_pow(2 * n).unwrap_or(u64::MAX);
    if order > ORDER_CAP {
        return Err(Error::SizeCapExceeded { order, cap: ORDER_CAP });
    }

    let fq_modulus: Vec<u32> = match modulus_override {
        Some((f, _)) => f.to_vec(),
        None => gf::least_irreducible(p, n as usize),
    };
    let small = Gf::from_prime_poly(p, &fq_modulus)?;
    let q = small.order;

    let fq2_modulus: [u32; 3] = match modulus_override {
        Some((_, h)) => {
            if h.len() != 3 {
                return Err(Error::InvalidModulus("top modulus must have degree 2".into()));
            }
            [h[0], h[1], h[2]]
        }
        None => least_quadratic_modulus(&small),
    };
    let gf = Gf::quadratic_ext(&small, &fq2_modulus)?;
    let q2 = gf.order;

    // least-index element of multiplicative order exactly q - 1
    let step = (q2 - 1) / (q - 1);
    let mut epsilon = Element::ZERO;
    for i in 1..q2 {
        let e = i - 1;
        if e % step == 0 && gf.element_order(i) == q - 1 {
            epsilon = Element(i);
            break;
        }
    }
    debug_assert!(!epsilon.is_zero() || q == 2);
    if epsilon.is_zero() {
        // F_2: the unit group is trivial and 1 has order 1 = q - 1
        epsilon = Element::ONE;
    }

    let tower = FieldTower {
        p,
        n,
        q,
        q2,
        fq_modulus,
        fq2_modulus,
        gf,
        epsilon,
    };
    tower.self_check()?;
    Ok(tower)
}

fn least_quadratic_modulus(base: &Gf) -> [u32; 3] {
    let q = base.order;
    for k in 0..q * q {
        let c0 = k / q;
        let c1 = k % q;
        let (i0, i1) = (
            base.index_from_packed(c0).unwrap(),
            base.index_from_packed(c1).unwrap(),
        );
        let mut has_root = false;
        for x in 0..q {
            let v = base.add(base.add(base.mul(x, x), base.mul(i1, x)), i0);
            if v == 0 {
                has_root = true;
                break;
            }
        }
        if !has_root {
            return [c0, c1, 1];
        }
    }
    unreachable!("every finite field admits a quadratic extension");
}

impl FieldTower {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn q2(&self) -> u32 {
        self.q2
    }

    pub fn fq_modulus(&self) -> &[u32] {
        &self.fq_modulus
    }

    pub fn fq2_modulus(&self) -> &[u32; 3] {
        &self.fq2_modulus
    }

    /// Generator of the multiplicative group of the top field.
    pub fn generator(&self) -> Element {
        Element(self.gf.generator())
    }

    /// Deterministically chosen primitive element of F_q.
    pub fn epsilon(&self) -> Element {
        self.epsilon
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        Element(self.gf.add(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        Element(self.gf.sub(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        Element(self.gf.neg(a.0))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.gf.mul(a.0, b.0))
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        Element(self.gf.inv(a.0))
    }

    #[inline]
    pub fn div(&self, a: Element, b: Element) -> Element {
        Element(self.gf.div(a.0, b.0))
    }

    #[inline]
    pub fn pow(&self, a: Element, k: u64) -> Element {
        Element(self.gf.pow(a.0, k))
    }

    /// x ↦ x^(p^k), the k-fold Frobenius.
    pub fn frobenius(&self, x: Element, k: u32) -> Element {
        let e = (self.p as u64).pow(k % (2 * self.n));
        self.pow(x, e)
    }

    pub fn element_order(&self, x: Element) -> u32 {
        self.gf.element_order(x.0)
    }

    /// All subfield orders p^j with j dividing 2n, ascending.
    pub fn subfield_sizes(&self) -> Vec<u32> {
        let deg = 2 * self.n;
        (1..=deg)
            .filter(|j| deg % j == 0)
            .map(|j| self.p.pow(j))
            .collect()
    }

    pub fn has_subfield(&self, size: u32) -> bool {
        self.subfield_sizes().contains(&size)
    }

    fn check_subfield(&self, size: u32) -> Result<()> {
        if self.has_subfield(size) {
            Ok(())
        } else {
            Err(Error::NotSubfield { size })
        }
    }

    /// Membership test for the subfield of the given order: x ∈ F_size iff
    /// x^size = x.
    pub fn in_subfield(&self, x: Element, size: u32) -> Result<bool> {
        self.check_subfield(size)?;
        if x.is_zero() {
            return Ok(true);
        }
        let step = (self.q2 - 1) / (size - 1);
        Ok((x.0 - 1) % step == 0)
    }

    /// Elements of the subfield of the given order, in ascending index order.
    pub fn subfield_elements(&self, size: u32) -> Result<Vec<Element>> {
        self.check_subfield(size)?;
        let mut out = Vec::with_capacity(size as usize);
        out.push(Element::ZERO);
        if size > 1 {
            let step = (self.q2 - 1) / (size - 1);
            for t in 0..size - 1 {
                out.push(Element(1 + t * step));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Trace from F_from onto F_to: x + x^to + x^(to²) + …
    pub fn trace_to(&self, x: Element, from: u32, to: u32) -> Result<Element> {
        self.check_tower_pair(from, to)?;
        if !self.in_subfield(x, from)? {
            return Err(Error::NotInField { size: from });
        }
        let mut acc = Element::ZERO;
        let mut term = x;
        let mut sz = 1u64;
        let from64 = from as u64;
        while sz < from64 {
            acc = self.add(acc, term);
            term = self.pow(term, to as u64);
            sz *= to as u64;
        }
        debug_assert!(self.in_subfield(acc, to)?);
        Ok(acc)
    }

    /// Norm from F_from onto F_to: x^((from-1)/(to-1)). For from = to² this
    /// is x^(to+1).
    pub fn norm_to(&self, x: Element, from: u32, to: u32) -> Result<Element> {
        self.check_tower_pair(from, to)?;
        if !self.in_subfield(x, from)? {
            return Err(Error::NotInField { size: from });
        }
        if x.is_zero() {
            return Ok(Element::ZERO);
        }
        let e = (from as u64 - 1) / (to as u64 - 1);
        let out = self.pow(x, e);
        debug_assert!(self.in_subfield(out, to)?);
        Ok(out)
    }

    fn check_tower_pair(&self, from: u32, to: u32) -> Result<()> {
        self.check_subfield(from)?;
        self.check_subfield(to)?;
        // F_to ⊆ F_from iff deg(to) divides deg(from)
        let dt = log_base(self.p, to);
        let df = log_base(self.p, from);
        if df % dt != 0 {
            return Err(Error::NotSubfield { size: to });
        }
        Ok(())
    }

    /// Least-index d in F_r with absolute trace Tr_{F_r/F_p}(d) = 1.
    pub fn choose_trace_one(&self, r: u32) -> Result<Element> {
        self.check_subfield(r)?;
        for d in self.subfield_elements(r)? {
            if self.trace_to(d, r, self.p)? == Element::ONE {
                return Ok(d);
            }
        }
        Err(Error::Internal("trace is surjective, no trace-one element found".into()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.q2).map(Element)
    }

    /// Packed polynomial encoding (base-p digit vector) of an element.
    pub fn packed_of(&self, x: Element) -> u32 {
        self.gf.packed_from_index(x.0)
    }

    pub fn from_packed(&self, packed: u32) -> Result<Element> {
        Ok(Element(self.gf.index_from_packed(packed)?))
    }

    /// Embed a prime-field scalar 0 ≤ c < p.
    pub fn scalar(&self, c: u32) -> Element {
        assert!(c < self.p);
        self.from_packed(c).expect("prime scalars are packed as themselves")
    }

    /// Minimal polynomial of x over F_p, as little-endian integer coefficients.
    pub fn min_poly_over_prime(&self, x: Element) -> Vec<u32> {
        // collect the Frobenius orbit
        let mut conj = vec![x];
        let mut y = self.frobenius(x, 1);
        while y != x {
            conj.push(y);
            y = self.frobenius(y, 1);
        }
        // multiply out prod (t - c), little-endian
        let mut coeffs = vec![Element::ONE];
        for c in conj {
            let mut next = vec![Element::ZERO; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], a);
                next[i] = self.sub(next[i], self.mul(a, c));
            }
            coeffs = next;
        }
        coeffs
            .iter()
            .map(|&c| {
                let packed = self.packed_of(c);
                debug_assert!(packed < self.p, "minimal polynomial coefficient not in F_p");
                packed
            })
            .collect()
    }

    /// Evaluate a polynomial with F_p coefficients at x.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Element) -> Element {
        let mut acc = Element::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), self.scalar(c));
        }
        acc
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            p: self.p,
            n: self.n,
            fq_modulus: self.fq_modulus.clone(),
            fq2_modulus: self.fq2_modulus.to_vec(),
            generator_index: self.packed_of(self.generator()),
        }
    }

    pub fn from_descriptor(d: &TowerDescriptor) -> Result<FieldTower> {
        let tower = make_tower(d.p, d.n, Some((&d.fq_modulus, &d.fq2_modulus)))?;
        let gen = tower.packed_of(tower.generator());
        if gen != d.generator_index {
            return Err(Error::BadDescriptor(format!(
                "generator_index mismatch: descriptor says {}, tower has {}",
                d.generator_index, gen
            )));
        }
        Ok(tower)
    }

    fn self_check(&self) -> Result<()> {
        // log/antilog round trip and generator order
        for i in (0..self.q2).step_by((self.q2 as usize / 64).max(1)) {
            let e = Element(i);
            if self.from_packed(self.packed_of(e))? != e {
                return Err(Error::Internal("log/antilog tables disagree".into()));
            }
        }
        if self.q2 > 2 && self.element_order(self.generator()) != self.q2 - 1 {
            return Err(Error::Internal("generator order is not q^2 - 1".into()));
        }
        if self.q > 2 && self.element_order(self.epsilon) != self.q - 1 {
            return Err(Error::Internal("epsilon order is not q - 1".into()));
        }
        Ok(())
    }
}

fn log_base(p: u32, mut size: u32) -> u32 {
    let mut d = 0;
    while size > 1 {
        size /= p;
        d += 1;
    }
    d
}

/// A standalone field GF(r) for quadratic-form coordinates. Elements are
/// indices 0..r with 0 the zero element and i ≥ 1 denoting g^(i-1), so the
/// index range doubles as a compact coordinate digit.
pub struct SmallField {
    gf: Gf,
    p: u32,
    degree: u32,
}

impl SmallField {
    pub fn new(r: u32) -> Result<SmallField> {
        if r < 2 {
            return Err(Error::BadParameter("field order must be at least 2".into()));
        }
        let p = (2..=r).find(|&d| r % d == 0).unwrap();
        let mut degree = 0;
        let mut pow = 1u32;
        while pow < r {
            pow *= p;
            degree += 1;
        }
        if pow != r {
            return Err(Error::BadParameter(format!("{r} is not a prime power")));
        }
        let modulus = gf::least_irreducible(p, degree as usize);
        Ok(SmallField {
            gf: Gf::from_prime_poly(p, &modulus)?,
            p,
            degree,
        })
    }

    pub fn order(&self) -> u32 {
        self.gf.order
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.gf.add(a, b)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.gf.sub(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.gf.neg(a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.gf.mul(a, b)
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.gf.inv(a)
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        self.gf.pow(a, k)
    }

    pub fn generator(&self) -> u32 {
        self.gf.generator()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order()
    }

    /// Nonzero squares are the even powers of the generator.
    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        (a - 1) % 2 == 0
    }

    /// Least-index non-square of F_r, for odd r.
    pub fn least_nonsquare(&self) -> Result<u32> {
        if self.p == 2 {
            return Err(Error::BadParameter("every element is a square in characteristic 2".into()));
        }
        (0..self.order())
            .find(|&a| !self.is_square(a))
            .ok_or_else(|| Error::Internal("odd fields have non-squares".into()))
    }

    /// Absolute trace onto the prime field, as a prime-field value 0..p.
    pub fn abs_trace(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut term = a;
        for _ in 0..self.degree {
            acc = self.gf.add(acc, term);
            term = self.gf.pow(term, self.p as u64);
        }
        // the result lies in F_p; its packed value is the scalar
        self.gf.packed_from_index(acc)
    }

    /// Least-index element with absolute trace 1.
    pub fn least_trace_one(&self) -> u32 {
        (0..self.order())
            .find(|&a| self.abs_trace(a) == 1)
            .expect("the trace is onto the prime field")
    }

    /// Evaluate a polynomial with prime-field integer coefficients.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            let scalar = self.gf.index_from_packed(c % self.p).unwrap();
            acc = self.gf.add(self.gf.mul(acc, x), scalar);
        }
        acc
    }
}

impl fmt::Debug for SmallField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallField(GF({}))", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_tower_lagrange() {
        let t = make_tower(3, 1, None).unwrap();
        assert_eq!(t.q(), 3);
        assert_eq!(t.q2(), 9);
        for x in t.elements().skip(1) {
            assert_eq!(t.pow(x, 8), Element::ONE);
        }
    }

    #[test]
    fn f25_tower_log_round_trip() {
        let t = make_tower(5, 2, None).unwrap();
        assert_eq!(t.q2(), 625);
        for x in t.elements().skip(1) {
            let packed = t.packed_of(x);
            assert_eq!(t.from_packed(packed).unwrap(), x);
        }
    }

    #[test]
    fn example_tower_q32_override() {
        let fq = [1, 0, 1, 0, 0, 1]; // t^5 + t^2 + 1
        let fq2 = [1, 1, 1]; // t^2 + t + 1 over F_32
        let t = make_tower(2, 5, Some((&fq, &fq2))).unwrap();
        assert_eq!(t.q(), 32);
        assert_eq!(t.q2(), 1024);
        // epsilon generates F_32^*
        assert!(t.in_subfield(t.epsilon(), 32).unwrap());
        assert_eq!(t.element_order(t.epsilon()), 31);
        // a root of t^5 + t^2 + 1 exists in F_32
        let root = t
            .elements()
            .find(|&x| t.in_subfield(x, 32).unwrap() && t.eval_prime_poly(&fq, x).is_zero());
        assert!(root.is_some());
        // roots of t^2 + t + 1 lie outside F_32
        let beta = t
            .elements()
            .find(|&x| t.eval_prime_poly(&[1, 1, 1], x).is_zero())
            .unwrap();
        assert!(!t.in_subfield(beta, 32).unwrap());
    }

    #[test]
    fn trace_f4_over_f2() {
        let t = make_tower(2, 1, None).unwrap(); // F_2 ⊂ F_4
        let x = t
            .elements()
            .find(|&x| t.eval_prime_poly(&[1, 1, 1], x).is_zero())
            .unwrap();
        assert_eq!(t.trace_to(x, 4, 2).unwrap(), Element::ONE);
        assert_eq!(t.trace_to(Element::ZERO, 4, 2).unwrap(), Element::ZERO);
    }

    #[test]
    fn norm_fibers_f9_over_f3() {
        let t = make_tower(3, 1, None).unwrap(); // F_3 ⊂ F_9
        let mut fiber_sizes = std::collections::BTreeMap::new();
        for x in t.elements().skip(1) {
            let n = t.norm_to(x, 9, 3).unwrap();
            assert!(t.in_subfield(n, 3).unwrap());
            assert!(!n.is_zero());
            *fiber_sizes.entry(n).or_insert(0u32) += 1;
        }
        assert_eq!(fiber_sizes.len(), 2); // onto F_3^*
        assert!(fiber_sizes.values().all(|&c| c == 4));
    }

    #[test]
    fn norm_even_case_alpha() {
        // r = 2, d = 1: alpha a root of t^2 + t + 1, N(alpha) = 1
        let t = make_tower(2, 1, None).unwrap();
        let d = t.choose_trace_one(2).unwrap();
        assert_eq!(d, Element::ONE);
        let alpha = t
            .elements()
            .find(|&x| t.eval_prime_poly(&[1, 1, 1], x).is_zero())
            .unwrap();
        assert_eq!(t.norm_to(alpha, 4, 2).unwrap(), Element::ONE);
        assert_eq!(t.norm_to(Element::ONE, 4, 2).unwrap(), Element::ONE);
    }

    #[test]
    fn subfield_intersection_in_f64() {
        // inside F_64: F_4 ∩ F_8 = F_2
        let t = make_tower(2, 3, None).unwrap();
        let both: Vec<_> = t
            .elements()
            .filter(|&x| t.in_subfield(x, 4).unwrap() && t.in_subfield(x, 8).unwrap())
            .collect();
        assert_eq!(both.len(), 2);
    }

    #[test]
    fn epsilon_power_generates_sqrt_subfield() {
        // q = 9: epsilon^(sqrt(q)+1) generates F_3^*
        let t = make_tower(3, 2, None).unwrap();
        let e4 = t.pow(t.epsilon(), 4);
        assert_eq!(t.element_order(e4), 2);
        assert!(t.in_subfield(e4, 3).unwrap());
    }

    #[test]
    fn trace_and_norm_surjective() {
        for (p, n) in [(2, 2), (3, 1), (5, 1), (2, 3)] {
            let t = make_tower(p, n, None).unwrap();
            let q = t.q();
            let mut traces = std::collections::BTreeSet::new();
            let mut norms = std::collections::BTreeSet::new();
            for x in t.elements() {
                traces.insert(t.trace_to(x, t.q2(), q).unwrap());
                if !x.is_zero() {
                    norms.insert(t.norm_to(x, t.q2(), q).unwrap());
                }
            }
            assert_eq!(traces.len(), q as usize);
            assert_eq!(norms.len(), q as usize - 1);
        }
    }

    #[test]
    fn min_poly_of_tower_elements() {
        let t = make_tower(5, 2, None).unwrap();
        // a prime-field element has a linear minimal polynomial t - c
        let two = t.scalar(2);
        assert_eq!(t.min_poly_over_prime(two), vec![3, 1]); // t + 3 = t - 2
        // the generator's minimal polynomial has degree 2n and kills it
        let g = t.generator();
        let mp = t.min_poly_over_prime(g);
        assert_eq!(mp.len(), 5);
        assert!(t.eval_prime_poly(&mp, g).is_zero());
        // every element is a root of its own minimal polynomial
        for x in t.elements().step_by(37) {
            let mp = t.min_poly_over_prime(x);
            assert!(t.eval_prime_poly(&mp, x).is_zero());
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let t = make_tower(3, 2, None).unwrap();
        let d = t.descriptor();
        let t2 = FieldTower::from_descriptor(&d).unwrap();
        assert_eq!(t2.q2(), t.q2());
        assert_eq!(t2.epsilon(), t.epsilon());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_tower(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_tower(2, 11, None), Err(Error::SizeCapExceeded { .. })));
        let bad = [1u32, 0, 1]; // t^2 + 1 reducible over F_2
        assert!(make_tower(2, 2, Some((&bad, &[1, 1, 1]))).is_err());
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let t = make_tower(3, 2, None).unwrap();
        for a in t.elements().step_by(7) {
            for b in t.elements().step_by(11) {
                assert_eq!(
                    t.frobenius(t.add(a, b), 1),
                    t.add(t.frobenius(a, 1), t.frobenius(b, 1))
                );
                assert_eq!(
                    t.frobenius(t.mul(a, b), 1),
                    t.mul(t.frobenius(a, 1), t.frobenius(b, 1))
                );
            }
        }
    }
}
