//! Table-driven finite field arithmetic.
//!
//! A [`Gf`] holds discrete-log, antilog and Zech-logarithm tables for one
//! field GF(p^m), so every arithmetic operation is O(1) table lookups.
//! Elements use an index encoding: 0 is the zero element and index `i >= 1`
//! denotes `g^(i-1)` for the fixed multiplicative generator `g`.

use crate::error::{Error, Result};

const ZECH_NONE: u32 = u32::MAX;

/// One finite field of order `p^degree` with full lookup tables.
pub struct Gf {
    pub p: u32,
    pub degree: u32,
    pub order: u32,
    /// packed -> exponent of the generator (undefined at 0)
    log: Vec<u32>,
    /// exponent -> packed representation of g^exponent
    antilog: Vec<u32>,
    /// zech[e] = log(1 + g^e), or ZECH_NONE when 1 + g^e = 0
    zech: Vec<u32>,
    minus_one: u32,
}

impl Gf {
    /// GF(p)[x]/(modulus). Coefficients are little-endian (constant term first)
    /// and the modulus must be monic and irreducible.
    pub fn from_prime_poly(p: u32, modulus: &[u32]) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let d = poly_degree_checked(p, modulus)?;
        if d >= 2 && !poly_is_irreducible(p, modulus) {
            return Err(Error::ReduciblePolynomial(poly_to_string(modulus)));
        }
        let order = p.checked_pow(d as u32).ok_or(Error::SizeCapExceeded {
            order: u64::MAX,
            cap: 1 << 20,
        })?;
        let mul = |a: u32, b: u32| {
            let prod = poly_mul(p, &unpack(p, a, d), &unpack(p, b, d));
            pack(p, &poly_rem(p, &prod, modulus))
        };
        let add = |a: u32, b: u32| packed_add(p, a, b);
        build_tables(p, d as u32, order, add, mul)
    }

    /// Quadratic extension of `base` by a monic degree-2 modulus with packed
    /// base-field coefficients `[h0, h1, 1]`. Elements a + b*t pack as
    /// `a + b * base.order`.
    pub fn quadratic_ext(base: &Gf, modulus: &[u32; 3]) -> Result<Gf> {
        if modulus[2] != base_one_packed() {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        let h0 = base.index_from_packed(modulus[0])?;
        let h1 = base.index_from_packed(modulus[1])?;
        // Irreducible over the base field iff it has no root there.
        for x in 0..base.order {
            let v = base.add(base.add(base.mul(x, x), base.mul(h1, x)), h0);
            if v == 0 {
                return Err(Error::ReduciblePolynomial(format!(
                    "t^2 + ({})t + ({}) over GF({})",
                    modulus[1], modulus[0], base.order
                )));
            }
        }
        let bo = base.order;
        let order = bo.checked_mul(bo).ok_or(Error::SizeCapExceeded {
            order: bo as u64 * bo as u64,
            cap: 1 << 20,
        })?;
        let split = |x: u32| -> (u32, u32) { (x % bo, x / bo) };
        let mul = |x: u32, y: u32| {
            let (a, b) = split(x);
            let (c, d) = split(y);
            let (a, b) = (base.index_from_packed(a).unwrap(), base.index_from_packed(b).unwrap());
            let (c, d) = (base.index_from_packed(c).unwrap(), base.index_from_packed(d).unwrap());
            let ac = base.mul(a, c);
            let bd = base.mul(b, d);
            let cross = base.add(base.mul(a, d), base.mul(b, c));
            // t^2 = -h1*t - h0
            let c0 = base.sub(ac, base.mul(bd, h0));
            let c1 = base.sub(cross, base.mul(bd, h1));
            base.packed_from_index(c0) + base.packed_from_index(c1) * bo
        };
        let p = base.p;
        let add = |x: u32, y: u32| packed_add(p, x, y);
        build_tables(p, base.degree * 2, order, add, mul)
    }

    /// The generator as an element index (always `g^1`, i.e. index 2, unless
    /// the field is F_2).
    #[inline]
    pub fn generator(&self) -> u32 {
        if self.order == 2 {
            1
        } else {
            2
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let ord1 = self.order - 1;
        let ea = a - 1;
        let eb = b - 1;
        let d = if eb >= ea { eb - ea } else { eb + ord1 - ea };
        let z = self.zech[d as usize];
        if z == ZECH_NONE {
            0
        } else {
            1 + (ea + z) % ord1
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 || self.p == 2 {
            a
        } else {
            self.mul(a, self.minus_one)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        1 + (a - 1 + b - 1) % (self.order - 1)
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let ord1 = self.order - 1;
        1 + (ord1 - (a - 1) % ord1) % ord1
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let ord1 = (self.order - 1) as u64;
        1 + ((a as u64 - 1) * (k % ord1) % ord1) as u32
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> u32 {
        assert!(a != 0);
        let ord1 = self.order - 1;
        ord1 / gcd(a - 1, ord1)
    }

    #[inline]
    pub fn index_from_packed(&self, packed: u32) -> Result<u32> {
        if packed == 0 {
            return Ok(0);
        }
        let l = *self
            .log
            .get(packed as usize)
            .ok_or_else(|| Error::BadParameter(format!("packed value {packed} out of range")))?;
        if l == ZECH_NONE {
            return Err(Error::BadParameter(format!("packed value {packed} out of range")));
        }
        Ok(l + 1)
    }

    #[inline]
    pub fn packed_from_index(&self, idx: u32) -> u32 {
        if idx == 0 {
            0
        } else {
            self.antilog[(idx - 1) as usize]
        }
    }
}

fn base_one_packed() -> u32 {
    1
}

fn build_tables(
    p: u32,
    degree: u32,
    order: u32,
    add: impl Fn(u32, u32) -> u32,
    mul: impl Fn(u32, u32) -> u32,
) -> Result<Gf> {
    if order as u64 > (1 << 20) {
        return Err(Error::SizeCapExceeded {
            order: order as u64,
            cap: 1 << 20,
        });
    }
    let ord1 = order - 1;
    let factors = prime_factors(ord1);
    // Least packed value generating the multiplicative group.
    let mut gen_packed = 0;
    'cand: for cand in 2.max(1)..order {
        for &f in &factors {
            if packed_pow(cand, (ord1 / f) as u64, &mul) == 1 {
                continue 'cand;
            }
        }
        gen_packed = cand;
        break;
    }
    if gen_packed == 0 {
        if order == 2 {
            gen_packed = 1; // F_2: the unit group is trivial
        } else {
            return Err(Error::Internal("no multiplicative generator found".into()));
        }
    }

    let mut antilog = vec![0u32; ord1 as usize];
    let mut log = vec![ZECH_NONE; order as usize];
    let mut acc = 1u32;
    for e in 0..ord1 {
        antilog[e as usize] = acc;
        if log[acc as usize] != ZECH_NONE {
            return Err(Error::Internal("generator order too small".into()));
        }
        log[acc as usize] = e;
        acc = mul(acc, gen_packed);
    }
    if acc != 1 {
        return Err(Error::Internal("generator does not close its cycle".into()));
    }

    let mut zech = vec![ZECH_NONE; ord1 as usize];
    for e in 0..ord1 {
        let s = add(1, antilog[e as usize]);
        if s != 0 {
            zech[e as usize] = log[s as usize];
        }
    }

    let minus_one = if p == 2 { 1 } else { 1 + ord1 / 2 };
    let gf = Gf {
        p,
        degree,
        order,
        log,
        antilog,
        zech,
        minus_one,
    };
    debug_assert_eq!(gf.mul(gf.minus_one, gf.minus_one), 1);
    Ok(gf)
}

fn packed_pow(base: u32, mut k: u64, mul: &impl Fn(u32, u32) -> u32) -> u32 {
    let mut acc = 1u32;
    let mut b = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        k >>= 1;
    }
    acc
}

#[inline]
pub fn packed_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u32;
    let mut mult = 1u32;
    while a > 0 || b > 0 {
        let s = (a % p + b % p) % p;
        out += s * mult;
        mult *= p;
        a /= p;
        b /= p;
    }
    out
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while d as u64 * d as u64 <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// --- dense polynomial helpers over F_p (little-endian coefficient vectors) ---

fn poly_degree_checked(p: u32, f: &[u32]) -> Result<usize> {
    if f.len() < 2 {
        return Err(Error::InvalidModulus("modulus must have degree >= 1".into()));
    }
    if f.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus("coefficient out of range".into()));
    }
    let d = f.len() - 1;
    if f[d] != 1 {
        return Err(Error::InvalidModulus("modulus must be monic".into()));
    }
    Ok(d)
}

fn unpack(p: u32, mut v: u32, d: usize) -> Vec<u32> {
    let mut out = vec![0u32; d];
    for c in out.iter_mut() {
        *c = v % p;
        v /= p;
    }
    out
}

fn pack(p: u32, f: &[u32]) -> u32 {
    let mut out = 0u32;
    for &c in f.iter().rev() {
        out = out * p + c;
    }
    out
}

fn poly_trim(f: &mut Vec<u32>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            // m is monic
            for i in 0..=dm {
                let idx = shift + i;
                let sub = lead * m[i] % p;
                r[idx] = (r[idx] + p - sub % p) % p;
            }
        }
        r.pop();
    }
    poly_trim(&mut r);
    r
}

fn poly_sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

fn poly_is_zero(f: &[u32]) -> bool {
    f.iter().all(|&c| c == 0)
}

fn poly_gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !poly_is_zero(&b) {
        // make b monic for remainder
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_inv(lead, p);
            for c in b.iter_mut() {
                *c = *c * inv % p;
            }
        }
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut k = p as u64 - 2;
    while k > 0 {
        if k & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    result as u32
}

fn poly_mod_pow(p: u32, base: &[u32], mut k: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(p, base, m);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_rem(p, &poly_mul(p, &acc, &b), m);
        }
        b = poly_rem(p, &poly_mul(p, &b, &b), m);
        k >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub fn poly_is_irreducible(p: u32, f: &[u32]) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // x^(p^i) mod f, computed by iterated p-th powers
    let mut t = x.clone();
    let mut powers = vec![x.clone()]; // powers[i] = x^(p^i)
    for _ in 0..d {
        t = poly_mod_pow(p, &t, p as u64, f);
        powers.push(t.clone());
    }
    if poly_sub(p, &powers[d], &x) != vec![0] && !poly_is_zero(&poly_sub(p, &powers[d], &x)) {
        return false;
    }
    for &l in &prime_factors(d as u32) {
        let e = d / l as usize;
        let diff = poly_sub(p, &powers[e], &x);
        if poly_is_zero(&diff) {
            return false;
        }
        let g = poly_gcd(p, f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible of the given degree over F_p,
/// comparing coefficient tuples from the constant term up.
pub fn least_irreducible(p: u32, degree: usize) -> Vec<u32> {
    if degree == 1 {
        return vec![0, 1];
    }
    let count = p.pow(degree as u32);
    for k in 0..count {
        let mut coeffs = vec![0u32; degree + 1];
        let mut v = k;
        // constant term is the most significant position in the lex order
        for i in (0..degree).rev() {
            coeffs[i] = v % p;
            v /= p;
        }
        coeffs[degree] = 1;
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_to_string(f: &[u32]) -> String {
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match i {
            0 => format!("{c}"),
            1 if c == 1 => "t".into(),
            1 => format!("{c}t"),
            _ if c == 1 => format!("t^{i}"),
            _ => format!("{c}t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
