//! Table-driven arithmetic in GF(2^n), polynomial basis, 2 <= n <= 15.
//!
//! Elements are n-bit integers whose bit `i` is the coefficient of `x^i`.
//! A [`FieldCtx`] owns the modulus and log/antilog tables for a fixed
//! generator and is immutable once built, so it can be shared freely
//! between worker threads.

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 15;

/// Built-in moduli, one per degree. Each is re-validated when used.
const DEFAULT_MODULI: [u32; 14] = [
    0x7,    // x^2+x+1
    0xB,    // x^3+x+1
    0x13,   // x^4+x+1
    0x25,   // x^5+x^2+1
    0x43,   // x^6+x+1
    0x83,   // x^7+x+1
    0x11D,  // x^8+x^4+x^3+x^2+1
    0x211,  // x^9+x^4+1
    0x409,  // x^10+x^3+1
    0x805,  // x^11+x^2+1
    0x1053, // x^12+x^6+x^4+x+1
    0x201B, // x^13+x^4+x^3+x+1
    0x4443, // x^14+x^10+x^6+x+1
    0x8003, // x^15+x+1
];

/// An element of GF(2^n) in polynomial-basis coordinates.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[repr(transparent)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Characteristic 2: addition is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Elem {
    type Output = Elem;
    #[inline]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Elem {
    #[inline]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

impl std::iter::Sum for Elem {
    fn sum<I: Iterator<Item = Elem>>(iter: I) -> Elem {
        iter.fold(Elem::ZERO, |a, b| a + b)
    }
}

impl fmt::LowerHex for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#04x}", self.0)
    }
}

/// An exponent of `x` reduced modulo 2^n - 1, kept in `[1, 2^n - 1]`.
///
/// Residue 0 is stored as 2^n - 1 so `x^e` is still right on nonzero `x`
/// and gives 0 at `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exp(pub u32);

impl Exp {
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Binary weight of the exponent.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

/// Degree and modulus of a binary extension field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub n: u32,
    pub modulus: u32,
}

impl FieldSpec {
    /// The descriptor written into reports: `{"n": 6, "modulus": "0x43"}`.
    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "modulus": format!("0x{:X}", self.modulus) })
    }
}

/// `2^t mod (2^n - 1)` for any signed `t`.
#[inline]
pub fn pow2_mod(n: u32, t: i64) -> u64 {
    let r = t.rem_euclid(n as i64) as u32;
    1u64 << r
}

/// Canonical residue of `sum(coeff * 2^t)` modulo `2^n - 1`.
///
/// `terms` holds `(coeff, t)` pairs; a negative `t` denotes the inverse of
/// `2^|t|`, which is `2^(n - |t| mod n)`. A zero sum is an error unless
/// `allow_zero`, in which case it is returned as `2^n - 1`.
pub fn exp_residue(n: u32, terms: &[(i64, i64)], allow_zero: bool) -> Result<Exp> {
    if !(1..=MAX_DEGREE).contains(&n) {
        return Err(Error::UnsupportedDegree(n));
    }
    let modulus = (1i64 << n) - 1;
    let mut acc: i64 = 0;
    for &(c, t) in terms {
        acc = (acc + c.rem_euclid(modulus) * pow2_mod(n, t) as i64).rem_euclid(modulus);
    }
    if acc == 0 {
        if allow_zero {
            Ok(Exp(modulus as u32))
        } else {
            Err(Error::ZeroExponent { n })
        }
    } else {
        Ok(Exp(acc as u32))
    }
}

/// Carry-less product of two polynomials reduced modulo `modulus`.
///
/// Used to build and validate the tables; everything else goes through
/// [`FieldCtx::mul`].
pub fn clmul_mod(mut a: u32, mut b: u32, n: u32, modulus: u32) -> u32 {
    let top = 1u32 << n;
    let mut r = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    r
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let d = poly_degree(p);
    if d < 1 {
        return false;
    }
    for deg in 1..=(d / 2) {
        for low in 0..(1u32 << deg) {
            let divisor = (1u32 << deg) | low;
            if poly_rem(p, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Distinct prime factors of `m` by trial division.
pub fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// GF(2^n) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    spec: FieldSpec,
    order: u32,
    generator: Elem,
    antilog: Vec<u16>,
    log: Vec<u16>,
    group_order_factors: Vec<u32>,
    trace_mask: u32,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds the field for degree `n`. `modulus = None` selects the built-in
    /// modulus, which is validated exactly like a user-supplied one.
    pub fn new(n: u32, modulus: Option<u32>) -> Result<FieldCtx> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[(n - MIN_DEGREE) as usize]);
        if poly_degree(modulus) != n as i32 || modulus & 1 == 0 || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { n, modulus });
        }
        let size = 1u32 << n;
        let order = size - 1;
        let group_order_factors = prime_factors(order);

        // Generator: x if primitive, else the least primitive element.
        let elem_order_is_full = |g: u32| {
            group_order_factors.iter().all(|&p| {
                let mut acc = 1u32;
                let mut base = g;
                let mut e = order / p;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = clmul_mod(acc, base, n, modulus);
                    }
                    base = clmul_mod(base, base, n, modulus);
                    e >>= 1;
                }
                acc != 1
            })
        };
        let generator = if elem_order_is_full(2) {
            2
        } else {
            (2..size)
                .find(|&g| elem_order_is_full(g))
                .expect("a finite field has a primitive element")
        };

        let mut antilog = vec![0u16; order as usize];
        let mut log = vec![0u16; size as usize];
        let mut cur = 1u32;
        for (i, slot) in antilog.iter_mut().enumerate() {
            *slot = cur as u16;
            log[cur as usize] = i as u16;
            cur = clmul_mod(cur, generator, n, modulus);
        }
        debug_assert_eq!(cur, 1);

        let mut ctx = FieldCtx {
            spec: FieldSpec { n, modulus },
            order,
            generator: Elem(generator),
            antilog,
            log,
            group_order_factors,
            trace_mask: 0,
        };
        ctx.trace_mask = (0..n)
            .filter(|&i| ctx.trace_slow(Elem(1 << i)) == 1)
            .fold(0, |m, i| m | (1 << i));
        Ok(ctx)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.spec.n
    }

    /// Number of field elements, 2^n.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.spec.n
    }

    /// Multiplicative group order, 2^n - 1.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn group_order_factors(&self) -> &[u32] {
        &self.group_order_factors
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as usize) < self.size()
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ElementOutOfRange(a.0))
        }
    }

    /// All elements in bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size() as u32).map(Elem)
    }

    /// Discrete log to the table generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize] as u32)
        }
    }

    /// `generator^i`, `i` taken modulo 2^n - 1.
    #[inline]
    pub fn antilog(&self, i: u64) -> Elem {
        Elem(self.antilog[(i % self.order as u64) as usize] as u32)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let s = self.log[a.0 as usize] as u32 + self.log[b.0 as usize] as u32;
        let s = if s >= self.order { s - self.order } else { s };
        Elem(self.antilog[s as usize] as u32)
    }

    /// `a^e`. The exponent is reduced modulo 2^n - 1 for nonzero `a`;
    /// `a^0 = 1` and `0^e = 0` for `e >= 1`.
    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let r = (l * (e % self.order as u64)) % self.order as u64;
        Elem(self.antilog[r as usize] as u32)
    }

    #[inline]
    pub fn pow_exp(&self, a: Elem, e: Exp) -> Elem {
        self.pow(a, e.0 as u64)
    }

    /// `a^e` for a signed integer exponent; negative `e` needs `a != 0`.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let r = e.rem_euclid(self.order as i64) as u64;
        Ok(self.pow(a, if r == 0 { self.order as u64 } else { r }))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize] as u32;
        Ok(Elem(
            self.antilog[((self.order - l) % self.order) as usize] as u32,
        ))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(2^j)` with `j` reduced modulo n, so negative `j` is the inverse
    /// Frobenius power.
    #[inline]
    pub fn frobenius(&self, a: Elem, j: i64) -> Elem {
        if a.0 == 0 {
            return a;
        }
        self.pow(a, pow2_mod(self.n(), j))
    }

    fn trace_slow(&self, a: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        let mut t = a;
        for _ in 0..self.n() {
            acc += t;
            t = self.mul(t, t);
        }
        debug_assert!(acc.0 <= 1);
        acc.0
    }

    /// Absolute trace, as a parity against a precomputed mask.
    #[inline]
    pub fn trace(&self, a: Elem) -> u32 {
        (a.0 & self.trace_mask).count_ones() & 1
    }

    /// Mask `m` with `trace(a) = parity(a & m)`.
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    pub fn is_primitive(&self, a: Elem) -> bool {
        if a.0 == 0 {
            return false;
        }
        self.group_order_factors
            .iter()
            .all(|&p| self.pow(a, (self.order / p) as u64) != Elem::ONE)
    }

    /// Primitive elements ordered by their log to the table generator.
    pub fn primitive_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.order as u64)
            .filter(move |&i| gcd(i, self.order as u64) == 1)
            .map(move |i| self.antilog(i))
    }

    /// `true` iff `a` is a `d`-th power of a field element.
    pub fn is_power_of(&self, a: Elem, d: u64) -> bool {
        if a.0 == 0 {
            return true;
        }
        let g = gcd(d, self.order as u64);
        self.pow(a, self.order as u64 / g) == Elem::ONE
    }

    /// Elements of the subfield GF(2^k), in bit-pattern order.
    pub fn subfield(&self, k: u32) -> Result<Vec<Elem>> {
        if k == 0 || !self.n().is_multiple_of(k) {
            return Err(Error::NotASubfield { n: self.n(), k });
        }
        let sub_order = (1u64 << k) - 1;
        let step = self.order as u64 / sub_order;
        let mut out: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..sub_order).map(|i| self.antilog(i * step)))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn in_subfield(&self, a: Elem, k: u32) -> bool {
        self.frobenius(a, k as i64) == a
    }
}
