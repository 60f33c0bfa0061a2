//! Finite fields GF(p^r) in a polynomial basis.
//!
//! An element is stored as its integer code: the base-p digits of the code are
//! the coefficients (low to high) of its polynomial representative modulo the
//! field's modulus. The modulus is the lexicographically smallest monic
//! irreducible polynomial of degree r, where "lexicographic" means increasing
//! integer code of the non-leading coefficients. Multiplication goes through
//! discrete log/antilog tables built once per field from a primitive element.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Field element, encoded as an integer in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A concrete finite field GF(p^r). Cheap to clone and safe to share.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.r == other.0.r)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.0.p)
            .field("r", &self.0.r)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.r)
        }
    }
}

/// Builds GF(p^r) with the smallest monic irreducible modulus of degree r.
pub fn make_field(p: u64, r: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, r)
}

impl FieldCtx {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidFieldSpec(format!("{p}^0")));
        }
        let q = checked_pow(p, r)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Error::FieldTooLarge { p, r })?;
        let modulus = smallest_irreducible(p, r);
        let p32 = p as u32;
        let q32 = q as u32;
        let (exp, log) = build_tables(p32, r, q32, &modulus);
        Ok(FieldCtx(Arc::new(Inner {
            p: p32,
            r,
            q: q32,
            modulus,
            exp,
            log,
        })))
    }

    /// Field of size `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, r)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low to high, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }

    /// The field GF(q^m) containing this one.
    pub fn extension(&self, m: u32) -> Result<FieldCtx> {
        if m == 1 {
            return Ok(self.clone());
        }
        FieldCtx::new(self.0.p as u64, self.0.r * m)
    }

    pub fn elem(&self, code: u32) -> Result<Fe> {
        if code < self.0.q {
            Ok(Fe(code))
        } else {
            Err(Error::IndexOutOfRange {
                index: code as usize,
                limit: self.0.q as usize,
            })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in code order `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.0.q))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.r == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 || a.0 == 0 {
            return a;
        }
        if self.0.r == 1 {
            return Fe(p - a.0);
        }
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        while x != 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.0.r == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        let inner = &*self.0;
        Fe(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(Fe(inner.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character test for odd q: `x = 0` or `x^((q-1)/2) = 1`.
    pub fn is_square(&self, a: Fe) -> Result<bool> {
        if !self.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        Ok(a.is_zero() || self.pow(a, (self.0.q as u64 - 1) / 2) == Fe::ONE)
    }

    /// Number of squares in the field (including 0), counted directly.
    pub fn count_squares(&self) -> Result<u64> {
        if !self.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        let mut seen = vec![false; self.0.q as usize];
        for y in self.elements() {
            seen[self.mul(y, y).0 as usize] = true;
        }
        Ok(seen.iter().filter(|&&b| b).count() as u64)
    }

    /// Absolute trace `x + x^p + ... + x^(p^(r-1))`; always lands in GF(p).
    pub fn trace_to_prime(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut cur = a;
        for _ in 0..self.0.r {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.0.p as u64);
        }
        acc
    }

    /// Square root in characteristic 2, where squaring is a bijection.
    pub fn sqrt_char2(&self, a: Fe) -> Result<Fe> {
        if self.is_odd() {
            return Err(Error::OddCharacteristic);
        }
        Ok(self.pow(a, self.0.q as u64 / 2))
    }

    /// Some square root of `a` in this field, if one exists.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if !self.is_odd() {
            return self.sqrt_char2(a).ok();
        }
        // Desk-scale fields: a scan is fine and avoids Tonelli-Shanks.
        self.elements().find(|&y| self.mul(y, y) == a)
    }

    /// Product computed directly in the polynomial basis (reference path).
    pub fn mul_poly_basis(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let da = digits(a.0, p, self.0.r);
        let db = digits(b.0, p, self.0.r);
        let prod = poly_mul(&da, &db, p);
        let red = poly_rem(&prod, &self.0.modulus, p);
        Fe(undigits(&red, p))
    }

    /// Inverse by the extended Euclidean algorithm on polynomials (reference path).
    pub fn inv_euclid(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let p = self.0.p;
        let m = self.0.modulus.clone();
        let (mut r0, mut r1) = (m.clone(), trim(digits(a.0, p, self.0.r)));
        let (mut s0, mut s1) = (Vec::<u32>::new(), vec![1u32]);
        while !r1.is_empty() {
            let (quo, rem) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = r0[0];
        let cinv = mod_inv(c, p);
        let s = poly_rem(&poly_scale(&s0, cinv, p), &m, p);
        Ok(Fe(undigits(&s, p)))
    }
}

impl FromStr for FieldCtx {
    type Err = Error;

    /// Accepts `"p^r"` or a plain prime power `"q"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidFieldSpec(s.to_string());
        if let Some((p, r)) = s.split_once('^') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let r: u32 = r.trim().parse().map_err(|_| bad())?;
            FieldCtx::new(p, r)
        } else {
            let q: u64 = s.parse().map_err(|_| bad())?;
            FieldCtx::with_order(q)
        }
    }
}

/// A field embedding GF(p^a) -> GF(p^b) with a | b.
///
/// The generator of the smaller field is sent to the smallest-code root of
/// its modulus in the larger field.
#[derive(Clone)]
pub struct Embedding {
    sub: FieldCtx,
    sup: FieldCtx,
    image: Vec<Fe>,
}

impl Embedding {
    pub fn new(sub: &FieldCtx, sup: &FieldCtx) -> Result<Self> {
        if sub.p() != sup.p() {
            return Err(Error::IncompatibleFields(format!(
                "characteristic {} vs {}",
                sub.p(),
                sup.p()
            )));
        }
        if !sup.r().is_multiple_of(sub.r()) {
            return Err(Error::IncompatibleFields(format!(
                "degree {} does not divide {}",
                sub.r(),
                sup.r()
            )));
        }
        let p = sub.p();
        // Prime-field constants have the same code in every field of characteristic p.
        let root = sup
            .elements()
            .find(|&x| {
                let mut acc = Fe::ZERO;
                for &c in sub.modulus().iter().rev() {
                    acc = sup.add(sup.mul(acc, x), Fe(c));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::Internal("modulus has no root in extension".into()))?;
        let mut powers = Vec::with_capacity(sub.r() as usize);
        let mut cur = Fe::ONE;
        for _ in 0..sub.r() {
            powers.push(cur);
            cur = sup.mul(cur, root);
        }
        let image = sub
            .elements()
            .map(|x| {
                digits(x.0, p, sub.r())
                    .iter()
                    .zip(&powers)
                    .fold(Fe::ZERO, |acc, (&d, &pw)| sup.add(acc, sup.mul(Fe(d), pw)))
            })
            .collect();
        Ok(Embedding {
            sub: sub.clone(),
            sup: sup.clone(),
            image,
        })
    }

    pub fn sub(&self) -> &FieldCtx {
        &self.sub
    }

    pub fn sup(&self) -> &FieldCtx {
        &self.sup
    }

    #[inline]
    pub fn apply(&self, x: Fe) -> Fe {
        self.image[x.0 as usize]
    }
}

/// One-shot embedding of a single element; build an [`Embedding`] for repeated use.
pub fn embed(sub: &FieldCtx, sup: &FieldCtx, x: Fe) -> Result<Fe> {
    Ok(Embedding::new(sub, sup)?.apply(x))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Writes `q = p^r` with p prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) || p.saturating_mul(p) > q {
        // q itself is prime
        return Some((q, 1));
    }
    let (mut m, mut r) = (q, 0u32);
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

fn checked_pow(p: u64, r: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..r {
        acc = acc.checked_mul(p)?;
        if acc > MAX_FIELD_SIZE {
            return None;
        }
    }
    Some(acc)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn build_tables(p: u32, r: u32, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let order = q - 1;
    let mul = |a: u32, b: u32| -> u32 {
        if r == 1 {
            ((a as u64 * b as u64) % p as u64) as u32
        } else {
            let prod = poly_mul(&digits(a, p, r), &digits(b, p, r), p);
            undigits(&poly_rem(&prod, modulus, p), p)
        }
    };
    let pow = |a: u32, mut e: u64| -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let factors = prime_factors(order as u64);
    let g = (1..q)
        .find(|&g| factors.iter().all(|&l| pow(g, order as u64 / l) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..order {
        exp[i as usize] = cur;
        exp[(i + order) as usize] = cur;
        log[cur as usize] = i;
        cur = mul(cur, g);
    }
    (exp, log)
}

fn smallest_irreducible(p: u64, r: u32) -> Vec<u32> {
    let p32 = p as u32;
    let count = p.pow(r);
    (0..count)
        .map(|code| {
            let mut f = digits(code as u32, p32, r);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p32))
        .expect("irreducible polynomials exist in every degree")
}

/// Ben-Or style test: f of degree r is irreducible over GF(p) iff
/// gcd(x^(p^k) - x, f) = 1 for every 1 <= k <= r/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=deg / 2 {
        xp = poly_powmod(&xp, p as u64, &f, p);
        let diff = poly_sub(&xp, &x, p);
        let g = poly_gcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn digits(mut code: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * p + x)
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let (mut base, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_scale(a: &[u32], c: u32, p: u32) -> Vec<u32> {
    trim(
        a.iter()
            .map(|&x| ((x as u64 * c as u64) % p as u64) as u32)
            .collect(),
    )
}

fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = mod_inv(*b.last().unwrap(), p) as u64;
    let mut quo = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quo[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c as u64 * bc as u64 % p as u64) as u32;
            rem[i + shift] = (rem[i + shift] + p - t) % p;
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    poly_divmod(a, b, p).1
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    x
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}
