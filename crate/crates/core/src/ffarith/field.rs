//! Finite fields F_q with q = p^e <= 512, backed by full operation tables.
//!
//! Elements are stored as their index in `0..q`: the base-p digits of the
//! index are the coefficients of the element in the polynomial basis over
//! F_p. Prime-field elements therefore index as their residue.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_Q: u32 = 512;

/// An element of F_q, meaningful only together with its [`Fq`] context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub(crate) u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Position of the element in the table ordering.
    pub fn index(self) -> u32 {
        self.0 as u32
    }
}

struct Tables {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// Shared handle to the arithmetic of one finite field.
#[derive(Clone)]
pub struct Fq(Arc<Tables>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.q == other.0.q
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut n, mut e) = (q, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}

/// Remainder of `a` modulo the monic polynomial `m`, both over F_p (low degree first).
fn fp_poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                a[off + i] = (a[off + i] + (p - lead) * mc) % p;
            }
        }
    }
    a
}

fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    // trial division by every monic polynomial of degree 1..=d/2
    for dd in 1..=d / 2 {
        let count = (p as u64).pow(dd as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(dd + 1);
            let mut n = idx;
            for _ in 0..dd {
                g.push((n % p as u64) as u32);
                n /= p as u64;
            }
            g.push(1);
            if fp_poly_rem(m.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn find_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut m = Vec::with_capacity(e as usize + 1);
        let mut n = idx;
        for _ in 0..e {
            m.push((n % p as u64) as u32);
            n /= p as u64;
        }
        m.push(1);
        if m[0] != 0 && fp_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl Fq {
    /// Builds F_q; `q` must be a prime power no larger than [`MAX_Q`].
    pub fn new(q: u32) -> Result<Fq> {
        if q > MAX_Q {
            return Err(Error::InvalidField(q));
        }
        let (p, e) = prime_power(q).ok_or(Error::InvalidField(q))?;
        let modulus = find_modulus(p, e);
        let digits = |mut x: u32| -> Vec<u32> {
            let mut d = Vec::with_capacity(e as usize);
            for _ in 0..e {
                d.push(x % p);
                x /= p;
            }
            d
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let all: Vec<Vec<u32>> = (0..q).map(digits).collect();
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&s) as u16;
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, x) in all[a].iter().enumerate() {
                    for (j, y) in all[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = fp_poly_rem(prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[a * qs + b] = undigits(&r) as u16;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        Ok(Fq(Arc::new(Tables { q, p, e, modulus, add, mul, neg, inv })))
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Extension degree of F_q over its prime field.
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Defining polynomial of F_q over F_p, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// The element with the given table index. Panics when `i >= q`.
    pub fn elem(&self, i: u32) -> Fe {
        assert!(i < self.0.q, "element index {i} out of range for F_{}", self.0.q);
        Fe(i as u16)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(|i| Fe(i as u16))
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.0.q).map(|i| Fe(i as u16))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.0.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: Fe, mut n: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn minus_one(&self) -> Fe {
        self.neg(Fe::ONE)
    }

    /// (-1)^n.
    pub fn sign(&self, n: i64) -> Fe {
        if n.rem_euclid(2) == 0 {
            Fe::ONE
        } else {
            self.minus_one()
        }
    }

    /// Truncated product of two dense coefficient slices, keeping `n` terms.
    ///
    /// Zero entries are skipped, which matters for the sparse series that
    /// Frobenius twists produce.
    pub fn convolve(&self, a: &[Fe], b: &[Fe], n: usize) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() || n == 0 {
            return Vec::new();
        }
        let len = n.min(a.len() + b.len() - 1);
        let bnz: Vec<(usize, u16)> =
            b.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.0)).collect();
        if self.is_prime_field() {
            let p = self.0.p as u64;
            let mut acc = vec![0u64; len];
            let mut since_reduce = 0u64;
            let limit = u64::MAX / ((p - 1) * (p - 1) + 1) - 1;
            for (i, &x) in a.iter().enumerate().take(len) {
                if x.is_zero() {
                    continue;
                }
                let xv = x.0 as u64;
                for &(j, y) in &bnz {
                    let k = i + j;
                    if k >= len {
                        break;
                    }
                    acc[k] += xv * y as u64;
                }
                since_reduce += 1;
                if since_reduce >= limit {
                    acc.iter_mut().for_each(|v| *v %= p);
                    since_reduce = 0;
                }
            }
            acc.into_iter().map(|v| Fe((v % p) as u16)).collect()
        } else {
            let mut acc = vec![Fe::ZERO; len];
            for (i, &x) in a.iter().enumerate().take(len) {
                if x.is_zero() {
                    continue;
                }
                for &(j, y) in &bnz {
                    let k = i + j;
                    if k >= len {
                        break;
                    }
                    acc[k] = self.add(acc[k], self.mul(x, Fe(y)));
                }
            }
            acc
        }
    }
}
