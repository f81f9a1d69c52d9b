//! Polynomials over F_q in one variable, used both for F_q[T] and F_q[t].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Fe, Fq};
use crate::error::{Error, Result};

/// A polynomial with coefficients in F_q, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    fq: Fq,
    c: Vec<Fe>,
}

impl Poly {
    pub fn from_coeffs(fq: &Fq, mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { fq: fq.clone(), c }
    }

    /// Coefficients given as integers reduced into the prime subfield.
    pub fn from_ints(fq: &Fq, c: &[i64]) -> Poly {
        Poly::from_coeffs(fq, c.iter().map(|&x| fq.from_int(x)).collect())
    }

    pub fn zero(fq: &Fq) -> Poly {
        Poly { fq: fq.clone(), c: Vec::new() }
    }

    pub fn one(fq: &Fq) -> Poly {
        Poly::constant(fq, Fe::ONE)
    }

    pub fn constant(fq: &Fq, a: Fe) -> Poly {
        Poly::from_coeffs(fq, vec![a])
    }

    /// The variable itself.
    pub fn var(fq: &Fq) -> Poly {
        Poly::monomial(fq, Fe::ONE, 1)
    }

    pub fn monomial(fq: &Fq, a: Fe, n: usize) -> Poly {
        let mut c = vec![Fe::ZERO; n + 1];
        c[n] = a;
        Poly::from_coeffs(fq, c)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }

    /// Degree, with `None` standing for the degree of zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree as a signed integer, with -1 for zero.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn leading(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn scale(&self, a: Fe) -> Poly {
        Poly::from_coeffs(&self.fq, self.c.iter().map(|&x| self.fq.mul(x, a)).collect())
    }

    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; n];
        c.extend_from_slice(&self.c);
        Poly { fq: self.fq.clone(), c }
    }

    pub fn make_monic(&self) -> Poly {
        match self.fq.inv(self.leading()) {
            Some(li) => self.scale(li),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.c.iter().rev().fold(Fe::ZERO, |acc, &a| self.fq.add(self.fq.mul(acc, x), a))
    }

    /// Quotient and remainder; errors when dividing by zero.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let fq = &self.fq;
        let li = fq.inv(d.leading()).unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(fq), self.clone()));
        }
        let mut quo = vec![Fe::ZERO; r.len() - dd];
        for k in (0..quo.len()).rev() {
            let lead = r[k + dd];
            if lead.is_zero() {
                continue;
            }
            let m = fq.mul(lead, li);
            quo[k] = m;
            for (i, &dc) in d.c.iter().enumerate() {
                r[k + i] = fq.sub(r[k + i], fq.mul(m, dc));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(fq, quo), Poly::from_coeffs(fq, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (quo, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(quo)
        } else {
            Err(Error::InvalidArgument(format!("{d} does not divide {self}")))
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor (zero when both inputs vanish).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let fq = &self.fq;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(fq), Poly::zero(fq));
        let (mut t0, mut t1) = (Poly::zero(fq), Poly::one(fq));
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&quo * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&quo * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match fq.inv(r0.leading()) {
            Some(li) => (r0.scale(li), s0.scale(li), t0.scale(li)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ok()?.ext_gcd(m);
        g.is_one().then(|| s.rem(m).unwrap())
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.fq);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// The q^n-th power, which over F_q just rescales exponents by q^n.
    pub fn frobenius(&self, n: u32) -> Poly {
        if self.c.len() <= 1 {
            return self.clone();
        }
        let s = (self.fq.q() as usize).pow(n);
        let mut c = vec![Fe::ZERO; (self.c.len() - 1) * s + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * s] = a;
        }
        Poly { fq: self.fq.clone(), c }
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.c.iter().rev().fold(Poly::zero(&self.fq), |acc, &a| &(&acc * g) + &Poly::constant(&self.fq, a))
    }

    /// Enumeration index: coefficients read as base-q digits.
    pub fn index(&self) -> u64 {
        let q = self.fq.q() as u64;
        self.c.iter().rev().fold(0, |acc, a| acc * q + a.index() as u64)
    }

    /// Inverse of [`Poly::index`].
    pub fn from_index(fq: &Fq, mut i: u64) -> Poly {
        let q = fq.q() as u64;
        let mut c = Vec::new();
        while i > 0 {
            c.push(fq.elem((i % q) as u32));
            i /= q;
        }
        Poly::from_coeffs(fq, c)
    }

    /// All polynomials of degree below `d`, in index order.
    pub fn all_below(fq: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let count = (fq.q() as u64).pow(d as u32);
        (0..count).map(move |i| Poly::from_index(fq, i))
    }

    /// All monic polynomials of degree exactly `d`.
    pub fn monic_of_degree(fq: &Fq, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let lead = Poly::monomial(fq, Fe::ONE, d);
        Poly::all_below(fq, d).map(move |p| &p + &lead)
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(d) => (1..=d / 2).all(|k| Poly::monic_of_degree(&self.fq, k).all(|g| !g.divides(self))),
        }
    }

    /// Factorization into monic irreducibles by trial division; the unit is dropped.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        let mut rest = self.make_monic();
        let mut out = Vec::new();
        let mut k = 1;
        while rest.degree().unwrap_or(0) > 0 {
            if 2 * k > rest.degree().unwrap() {
                out.push((rest.clone(), 1));
                break;
            }
            for g in Poly::monic_of_degree(&self.fq, k) {
                let mut e = 0;
                while g.divides(&rest) {
                    rest = rest.div_exact(&g).unwrap();
                    e += 1;
                }
                if e > 0 {
                    out.push((g, e));
                }
            }
            k += 1;
        }
        out.sort_by(|a, b| a.0.cmp_index(&b.0));
        out
    }

    /// All monic divisors, ordered by degree then index.
    pub fn monic_divisors(&self) -> Vec<Poly> {
        let mut divs = vec![Poly::one(&self.fq)];
        for (g, e) in self.factor() {
            let mut next = Vec::new();
            for d in &divs {
                let mut power = Poly::one(&self.fq);
                for _ in 0..=e {
                    next.push(d * &power);
                    power = &power * &g;
                }
            }
            divs = next;
        }
        divs.sort_by(|a, b| a.cmp_index(b));
        divs
    }

    /// Order by degree, then by enumeration index.
    pub fn cmp_index(&self, other: &Poly) -> Ordering {
        self.deg_i().cmp(&other.deg_i()).then_with(|| self.index().cmp(&other.index()))
    }

    /// Renders with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let coef = a.index();
            let body = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (coef, i) {
                (_, 0) => coef_str(&self.fq, *a),
                (1, _) => body,
                _ => format!("{}*{body}", coef_str(&self.fq, *a)),
            });
        }
        parts.join(" + ")
    }
}

fn coef_str(fq: &Fq, a: Fe) -> String {
    if fq.is_prime_field() {
        a.index().to_string()
    } else {
        format!("g{}", a.index())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let fq = &self.fq;
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs(fq, (0..n).map(|i| fq.add(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let fq = &self.fq;
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs(fq, (0..n).map(|i| fq.sub(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(&self.fq, self.c.iter().map(|&a| self.fq.neg(a)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let n = (self.c.len() + o.c.len()).saturating_sub(1);
        Poly::from_coeffs(&self.fq, self.fq.convolve(&self.c, &o.c, n))
    }
}

forward_owned!(Add, add, Poly);
forward_owned!(Sub, sub, Poly);
forward_owned!(Mul, mul, Poly);
