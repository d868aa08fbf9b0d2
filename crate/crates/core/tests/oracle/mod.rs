//! Reference arithmetic for the integration tests, written independently of
//! the library: bitwise multiplication, raw (unreduced) exponents, naive
//! counting.
#![allow(dead_code)]

#[derive(Clone, Copy, Debug)]
pub struct Gf {
    pub n: u32,
    pub modulus: u32,
}

impl Gf {
    pub fn new(n: u32, modulus: u32) -> Self {
        Gf { n, modulus }
    }

    pub fn size(&self) -> u32 {
        1 << self.n
    }

    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let mut r = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.n) != 0 {
                a ^= self.modulus;
            }
        }
        r
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut r) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn trace(&self, a: u32) -> u32 {
        let (mut t, mut acc) = (a, 0);
        for _ in 0..self.n {
            acc ^= t;
            t = self.mul(t, t);
        }
        assert!(acc <= 1);
        acc
    }

    pub fn order_of(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_primitive(&self, a: u32) -> bool {
        a != 0 && self.order_of(a) == self.size() - 1
    }

    /// `GF(2^k)` inside the field: `x^(2^k) = x`.
    pub fn in_subfield(&self, a: u32, k: u32) -> bool {
        self.pow(a, 1 << k) == a
    }

    /// Family member evaluated from the defining formula, with `2^-k`
    /// realized as `2^(n-k)`.
    pub fn quadrinomial(&self, k: u32, s: u32, u: u32, v: u32, w: u32, x: u32) -> u32 {
        let inv2k = 1u64 << (self.n - k);
        let (p2k, p2s, p2ks) = (1u64 << k, 1u64 << s, 1u64 << (k + s));
        let u2k = self.pow(u, p2k);
        let t1 = self.mul(u2k, self.pow(x, inv2k + p2ks));
        let t2 = self.mul(u, self.pow(x, p2s + 1));
        let t3 = self.mul(v, self.pow(x, inv2k + 1));
        let t4 = self.mul(self.mul(w, self.mul(u2k, u)), self.pow(x, p2ks + p2s));
        t1 ^ t2 ^ t3 ^ t4
    }

    pub fn table(&self, f: impl Fn(u32) -> u32) -> Vec<u32> {
        (0..self.size()).map(f).collect()
    }

    /// Valid `(u, v, w)` for fixed `(k, s)`: `u` primitive, `v, w` in
    /// `GF(2^k)`, `vw != 1`.
    pub fn valid_tuples(&self, k: u32) -> Vec<(u32, u32, u32)> {
        let sub: Vec<u32> = (0..self.size())
            .filter(|&a| self.in_subfield(a, k))
            .collect();
        let mut out = Vec::new();
        for u in (1..self.size()).filter(|&u| self.is_primitive(u)) {
            for &v in &sub {
                for &w in &sub {
                    if self.mul(v, w) != 1 {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out
    }

    /// `W(a, b) = sum_x (-1)^(tr(b f(x)) + tr(a x))`.
    pub fn walsh(&self, table: &[u32], a: u32, b: u32) -> i64 {
        (0..self.size())
            .map(|x| {
                if self.trace(self.mul(b, table[x as usize])) ^ self.trace(self.mul(a, x)) == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }
}

/// `max_{q != 0, p} #{x : f(x+q) + f(x) = p}` by counting.
pub fn uniformity(table: &[u32]) -> u32 {
    let size = table.len();
    let mut best = 0;
    let mut counts = vec![0u32; size];
    for q in 1..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            counts[(table[x ^ q] ^ table[x]) as usize] += 1;
        }
        best = best.max(*counts.iter().max().unwrap());
    }
    best
}

/// Rank of bit rows over GF(2).
pub fn rank(rows: &[u32]) -> u32 {
    let mut rows = rows.to_vec();
    let mut r = 0;
    for bit in 0..32 {
        if let Some(p) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(r, p);
            let pivot = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row >> bit & 1 == 1 {
                    *row ^= pivot;
                }
            }
            r += 1;
        }
    }
    r as u32
}
