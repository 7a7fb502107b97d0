//! Arithmetic in the finite field F_q for prime powers q up to 2^16.
//!
//! Elements are encoded as integers in `[0, q)`. For an extension field
//! `q = p^e` the integer `a = a_0 + a_1 p + ... + a_{e-1} p^{e-1}` stands for
//! the residue class of `a_0 + a_1 x + ... + a_{e-1} x^{e-1}` modulo the
//! field's defining polynomial. The defining polynomial is the
//! lexicographically least monic irreducible of degree `e` over F_p, ordering
//! polynomials by their coefficient list read from `x^{e-1}` down to `x^0`.
//!
//! Multiplication goes through log/antilog tables built from the least
//! primitive element; addition is XOR in characteristic two, reduction mod p
//! for prime fields, and digit-wise for the remaining extension fields.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Field elements are stored in 16 bits; `q <= 2^16` keeps every element in range.
pub type Elem = u16;

#[derive(Clone)]
enum Adder {
    Xor,
    Prime(u32),
    Table(Vec<Elem>),
    Digits,
}

struct Tables {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u32>,
    primitive: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    adder: Adder,
}

/// A finite field F_q with precomputed arithmetic tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // Construction is deterministic in q.
        self.t.q == other.t.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

/// Builds F_q. Alias of [`Field::new`].
pub fn make_field(q: u32) -> Result<Field> {
    Field::new(q)
}

/// Returns `(p, e)` with `q = p^e` and `p` prime, or `None`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    pub fn new(q: u32) -> Result<Field> {
        if q > MAX_ORDER {
            return Err(Error::TooLarge(q));
        }
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, e)
        };
        let order = (q - 1) as usize;

        let primitive = (1..q)
            .find(|&g| multiplicative_order(g, p, e, &modulus) == order)
            .expect("F_q^* is cyclic");

        let mut exp = vec![0 as Elem; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as Elem;
            log[x as usize] = i as u32;
            x = poly_mulmod(x, primitive, p, e, &modulus);
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }

        let neg: Vec<Elem> = (0..q).map(|a| digit_neg(a, p, e) as Elem).collect();
        let adder = if p == 2 {
            Adder::Xor
        } else if e == 1 {
            Adder::Prime(p)
        } else if q <= 256 {
            let mut table = vec![0 as Elem; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = digit_add(a, b, p, e) as Elem;
                }
            }
            Adder::Table(table)
        } else {
            Adder::Digits
        };

        Ok(Field {
            t: Arc::new(Tables {
                q,
                p,
                e,
                modulus,
                primitive: primitive as Elem,
                exp,
                log,
                neg,
                adder,
            }),
        })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Characteristic.
    #[inline]
    pub fn p(&self) -> u32 {
        self.t.p
    }

    /// Extension degree `e` with `q = p^e`.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.t.e
    }

    /// Coefficients (constant term first) of the defining polynomial; `[0, 1]` for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    pub fn primitive_element(&self) -> Elem {
        self.t.primitive
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.t.q == 2
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.t.adder {
            Adder::Xor => a ^ b,
            Adder::Prime(p) => {
                let s = a as u32 + b as u32;
                (if s >= *p { s - p } else { s }) as Elem
            }
            Adder::Table(t) => t[a as usize * self.t.q as usize + b as usize],
            Adder::Digits => digit_add(a as u32, b as u32, self.t.p, self.t.e) as Elem,
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.t;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let t = &*self.t;
        let order = t.q - 1;
        Some(t.exp[((order - t.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.t;
        let order = (t.q - 1) as u64;
        t.exp[((t.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// `dst += c * src`, entrywise.
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        let t = &*self.t;
        let lc = t.log[c as usize];
        match &t.adder {
            Adder::Xor if c == 1 => {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= *s;
                }
            }
            Adder::Xor => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d ^= t.exp[(lc + t.log[s as usize]) as usize];
                    }
                }
            }
            Adder::Prime(p) => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let v = *d as u32 + t.exp[(lc + t.log[s as usize]) as usize] as u32;
                        *d = (if v >= *p { v - p } else { v }) as Elem;
                    }
                }
            }
            _ => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add(*d, t.exp[(lc + t.log[s as usize]) as usize]);
                    }
                }
            }
        }
    }

    /// `v *= c`, entrywise.
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        if c == 1 {
            return;
        }
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    /// Scales a nonzero vector so that its first nonzero entry is 1.
    /// Returns false for the zero vector.
    pub fn normalize(&self, v: &mut [Elem]) -> bool {
        match v.iter().find(|&&x| x != 0) {
            Some(&lead) => {
                let inv = self.inv(lead).expect("nonzero");
                self.scale(v, inv);
                true
            }
            None => false,
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Exhaustively checks the field axioms. Intended for small q
    /// (the cost is cubic in q).
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let q = self.t.q as Elem as u32;
        let els = || (0..q).map(|x| x as Elem);
        for a in els() {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("additive inverse fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv(a).unwrap()) != 1 {
                return Err(format!("multiplicative inverse fails at {a}"));
            }
            for b in els() {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a},{b})"));
                }
                for c in els() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplicative associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// A copy of this field whose antilog table has two entries swapped.
    /// Exists so the self-check can prove it detects broken tables.
    #[doc(hidden)]
    pub fn corrupted_copy(&self) -> Field {
        let t = &*self.t;
        let mut exp = t.exp.clone();
        if exp.len() > 2 {
            exp.swap(1, 2);
        } else {
            exp[0] = 0;
        }
        Field {
            t: Arc::new(Tables {
                q: t.q,
                p: t.p,
                e: t.e,
                modulus: t.modulus.clone(),
                primitive: t.primitive,
                exp,
                log: t.log.clone(),
                neg: t.neg.clone(),
                adder: t.adder.clone(),
            }),
        }
    }
}

fn digits(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn digit_add(a: u32, b: u32, p: u32, e: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..e {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn digit_neg(a: u32, p: u32, e: u32) -> u32 {
    let d: Vec<u32> = digits(a, p, e).into_iter().map(|x| (p - x) % p).collect();
    undigits(&d, p)
}

/// Product of two encoded elements modulo the (monic) modulus.
fn poly_mulmod(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    if e == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let da = digits(a, p, e);
    let db = digits(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod.truncate(e as usize);
    undigits(&prod, p)
}

/// Reduces `a` in place modulo the monic polynomial `m` (both constant term first).
fn poly_rem(a: &mut [u32], m: &[u32], p: u32) {
    let dm = m.len() - 1;
    for top in (dm..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - dm + k;
            a[idx] = (a[idx] + (p - c) * mk % p) % p;
        }
    }
}

fn multiplicative_order(g: u32, p: u32, e: u32, modulus: &[u32]) -> usize {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = poly_mulmod(x, g, p, e, modulus);
        k += 1;
        if x == 0 || k > (p.pow(e) as usize) {
            return 0;
        }
    }
    k
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-p digits of `code`.
fn monic_from_code(code: u32, p: u32, d: u32) -> Vec<u32> {
    let mut c = digits(code, p, d);
    c.push(1);
    c
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let g = monic_from_code(code, p, d);
            let mut r = f.to_vec();
            poly_rem(&mut r, &g, p);
            if r[..d as usize].iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|code| monic_from_code(code, p, e))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Public irreducibility check on a coefficient list (constant term first).
pub fn is_irreducible_poly(f: &[u32], p: u32) -> bool {
    f.len() >= 2 && *f.last().unwrap() == 1 && is_irreducible(f, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_basics() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1), Some(1));
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn gf4_modulus_and_square_of_x() {
        let f = Field::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x = 2, x + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(Field::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(Field::new(1), Err(Error::NotPrimePower(1))));
        assert!(matches!(Field::new(0), Err(Error::NotPrimePower(0))));
        assert!(matches!(Field::new(100), Err(Error::NotPrimePower(100))));
        assert!(matches!(Field::new(1 << 17), Err(Error::TooLarge(_))));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(65521), Some((65521, 1)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn axioms_hold_for_all_orders_up_to_64() {
        for q in 2..=64 {
            if prime_power(q).is_none() {
                continue;
            }
            let f = Field::new(q).unwrap();
            f.check_axioms().unwrap_or_else(|e| panic!("GF({q}): {e}"));
            if f.degree() > 1 {
                assert!(is_irreducible_poly(f.modulus(), f.p()));
            }
        }
    }

    #[test]
    fn largest_field_builds() {
        let f = Field::new(1 << 16).unwrap();
        assert_eq!(f.degree(), 16);
        for a in [1u16, 2, 3, 1000, 65535] {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn corrupted_copy_fails_axioms() {
        let f = Field::new(8).unwrap();
        assert!(f.corrupted_copy().check_axioms().is_err());
    }

    #[test]
    fn modulus_is_least_irreducible() {
        // GF(8): x^3 + x + 1 is the least (x^3 + 1 has root 1, x^3 + x has root 0).
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        // GF(9): x^2 + 1 is irreducible over F_3 and precedes every other candidate.
        assert_eq!(Field::new(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn axpy_matches_scalar_ops() {
        for q in [3u32, 4, 5, 8, 9, 16, 25, 343] {
            let f = Field::new(q).unwrap();
            let src: Vec<Elem> = (0..q.min(50)).map(|x| x as Elem).collect();
            let mut dst: Vec<Elem> = src.iter().rev().copied().collect();
            let orig = dst.clone();
            let c = (q - 1) as Elem;
            f.axpy(&mut dst, c, &src);
            for i in 0..dst.len() {
                assert_eq!(dst[i], f.add(orig[i], f.mul(c, src[i])));
            }
        }
    }
}
