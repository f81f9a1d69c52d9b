//! Truncated Laurent series in the uniformizer u = 1/T~ of C_infinity.
//!
//! Everything lives in F_q((u)) with T~^{q-1} = -T, so T = -u^{-(q-1)} and
//! |u| = q^{-1/(q-1)}. A number is known modulo u^prec; `prec == EXACT`
//! marks values with a finite exact expansion.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::field::{Fe, Fq};
use super::poly::Poly;
use super::rational::RationalK;
use crate::error::{Error, Result};

/// Sentinel precision for exactly known values.
pub const EXACT: i64 = 1 << 60;

fn clamp(p: i64) -> i64 {
    if p >= EXACT / 2 {
        EXACT
    } else {
        p
    }
}

fn is_exact(p: i64) -> bool {
    p >= EXACT / 2
}

/// An element of F_q((u)) known modulo u^prec.
#[derive(Clone)]
pub struct LaurentNum {
    fq: Fq,
    val: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl LaurentNum {
    fn normalized(fq: &Fq, mut val: i64, mut coeffs: Vec<Fe>, prec: i64) -> LaurentNum {
        let prec = clamp(prec);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => return LaurentNum { fq: fq.clone(), val: prec, coeffs: Vec::new(), prec },
            Some(k) if k > 0 => {
                coeffs.drain(..k);
                val += k as i64;
            }
            _ => {}
        }
        if !is_exact(prec) {
            let keep = (prec - val).max(0) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            val = prec;
        }
        LaurentNum { fq: fq.clone(), val, coeffs, prec }
    }

    /// Builds `sum coeffs[i] u^(val+i)` known modulo u^prec.
    pub fn from_parts(fq: &Fq, val: i64, coeffs: Vec<Fe>, prec: i64) -> LaurentNum {
        LaurentNum::normalized(fq, val, coeffs, prec)
    }

    pub fn zero(fq: &Fq, prec: i64) -> LaurentNum {
        LaurentNum::normalized(fq, prec, Vec::new(), prec)
    }

    pub fn exact_zero(fq: &Fq) -> LaurentNum {
        LaurentNum::zero(fq, EXACT)
    }

    pub fn one(fq: &Fq) -> LaurentNum {
        LaurentNum::monomial(fq, Fe::ONE, 0)
    }

    pub fn from_fe(fq: &Fq, c: Fe) -> LaurentNum {
        LaurentNum::monomial(fq, c, 0)
    }

    /// Exact c * u^e.
    pub fn monomial(fq: &Fq, c: Fe, e: i64) -> LaurentNum {
        LaurentNum::normalized(fq, e, vec![c], EXACT)
    }

    /// T = -u^{-(q-1)}.
    pub fn t_big(fq: &Fq) -> LaurentNum {
        LaurentNum::monomial(fq, fq.minus_one(), -(fq.q() as i64 - 1))
    }

    /// T~ = u^{-1}.
    pub fn t_tilde(fq: &Fq) -> LaurentNum {
        LaurentNum::monomial(fq, Fe::ONE, -1)
    }

    /// Exact image of a polynomial in T.
    pub fn from_poly(p: &Poly) -> LaurentNum {
        let fq = p.field();
        let Some(d) = p.degree() else {
            return LaurentNum::exact_zero(fq);
        };
        let step = fq.q() as usize - 1;
        let mut coeffs = vec![Fe::ZERO; d * step + 1];
        for (i, &a) in p.coeffs().iter().enumerate() {
            // a T^i = a (-1)^i u^{-i(q-1)}
            coeffs[(d - i) * step] = fq.mul(a, fq.sign(i as i64));
        }
        LaurentNum::normalized(fq, -((d * step) as i64), coeffs, EXACT)
    }

    /// Expansion of an element of k, known modulo u^prec.
    pub fn from_rational(x: &RationalK, prec: i64) -> Result<LaurentNum> {
        let num = LaurentNum::from_poly(x.num());
        if x.is_poly() {
            return Ok(num.truncate(prec));
        }
        num.div_prec(&LaurentNum::from_poly(x.den()), prec)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    /// Valuation; equals `prec` for numbers that vanish to working precision.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        is_exact(self.prec)
    }

    /// Number of known coefficients past the leading one.
    pub fn rel_prec(&self) -> i64 {
        if self.is_exact() {
            EXACT
        } else {
            self.prec - self.val
        }
    }

    /// Stored coefficients starting at u^val (trailing zeros dropped).
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.first().copied().unwrap_or(Fe::ZERO)
    }

    /// Coefficient of u^e, or `None` past the known precision.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.prec {
            return None;
        }
        let i = e - self.val;
        if i < 0 {
            return Some(Fe::ZERO);
        }
        Some(self.coeffs.get(i as usize).copied().unwrap_or(Fe::ZERO))
    }

    /// |x| = q^{-val/(q-1)}, reported as the exponent of q.
    pub fn abs_val(&self) -> Result<Ratio<i64>> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted("absolute value of a number that vanishes to precision".into()));
        }
        Ok(Ratio::new(-self.val, self.fq.q() as i64 - 1))
    }

    /// Whether every known exponent is a multiple of q-1, i.e. x lies in k_infinity.
    pub fn in_k_infty(&self) -> bool {
        self.first_off_lattice().is_none()
    }

    fn first_off_lattice(&self) -> Option<i64> {
        let step = self.fq.q() as i64 - 1;
        self.coeffs
            .iter()
            .enumerate()
            .find(|(i, c)| !c.is_zero() && (self.val + *i as i64).rem_euclid(step) != 0)
            .map(|(i, _)| self.val + i as i64)
    }

    /// Coefficient of T^{-1} for x in k_infinity.
    pub fn residue(&self) -> Result<Fe> {
        if let Some(e) = self.first_off_lattice() {
            return Err(Error::NotInKInfinity(e));
        }
        let step = self.fq.q() as i64 - 1;
        let c = self.coeff(step).ok_or_else(|| Error::PrecisionExhausted("residue slot is unknown".into()))?;
        Ok(self.fq.neg(c))
    }

    /// Keeps at most the coefficients below u^p.
    pub fn truncate(&self, p: i64) -> LaurentNum {
        if p >= self.prec {
            return self.clone();
        }
        LaurentNum::normalized(&self.fq, self.val, self.coeffs.clone(), p)
    }

    pub fn scale(&self, c: Fe) -> LaurentNum {
        let coeffs = self.coeffs.iter().map(|&x| self.fq.mul(x, c)).collect();
        LaurentNum::normalized(&self.fq, self.val, coeffs, self.prec)
    }

    /// Multiplication by u^k.
    pub fn shift(&self, k: i64) -> LaurentNum {
        let prec = if self.is_exact() { EXACT } else { self.prec + k };
        LaurentNum { fq: self.fq.clone(), val: self.val + k, coeffs: self.coeffs.clone(), prec: clamp(prec) }
            .renormalize()
    }

    fn renormalize(self) -> LaurentNum {
        let LaurentNum { fq, val, coeffs, prec } = self;
        LaurentNum::normalized(&fq, val, coeffs, prec)
    }

    fn inv_terms(&self, n: usize) -> Vec<Fe> {
        let fq = &self.fq;
        let a = &self.coeffs;
        let a0i = fq.inv(a[0]).unwrap();
        let neg_a0i = fq.neg(a0i);
        let mut b = Vec::with_capacity(n);
        if n == 0 {
            return b;
        }
        b.push(a0i);
        let anz: Vec<(usize, Fe)> = a.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).map(|(j, &c)| (j, c)).collect();
        for k in 1..n {
            let mut s = Fe::ZERO;
            for &(j, aj) in &anz {
                if j > k {
                    break;
                }
                s = fq.add(s, fq.mul(aj, b[k - j]));
            }
            b.push(fq.mul(s, neg_a0i));
        }
        b
    }

    /// Multiplicative inverse at the natural relative precision.
    pub fn inv(&self) -> Result<LaurentNum> {
        self.inv_prec(EXACT)
    }

    /// Inverse known modulo u^prec (or less, when the input is less precise).
    pub fn inv_prec(&self, prec: i64) -> Result<LaurentNum> {
        if self.is_zero() {
            return Err(if self.is_exact() {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted("inverting a number that vanishes to precision".into())
            });
        }
        let rel = self.rel_prec().min(clamp(prec).saturating_add(self.val));
        if is_exact(rel) {
            if self.coeffs.len() == 1 {
                let c = self.fq.inv(self.coeffs[0]).unwrap();
                return Ok(LaurentNum::monomial(&self.fq, c, -self.val));
            }
            return Err(Error::PrecisionExhausted("exact inverse of a non-monomial needs a target precision".into()));
        }
        let rel = rel.max(0);
        let terms = self.inv_terms(rel as usize);
        Ok(LaurentNum::normalized(&self.fq, -self.val, terms, rel - self.val))
    }

    pub fn div(&self, d: &LaurentNum) -> Result<LaurentNum> {
        self.div_prec(d, EXACT)
    }

    /// Quotient known modulo u^prec at most.
    pub fn div_prec(&self, d: &LaurentNum, prec: i64) -> Result<LaurentNum> {
        if d.is_zero() {
            return Err(if d.is_exact() {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted("dividing by a number that vanishes to precision".into())
            });
        }
        if self.is_zero() {
            return Ok(LaurentNum::zero(&self.fq, (self.prec - d.val).min(clamp(prec))));
        }
        // relative precision of the quotient
        let target_rel = clamp(prec).saturating_sub(self.val - d.val);
        let rel = self.rel_prec().min(d.rel_prec()).min(target_rel);
        let dinv = d.inv_prec(rel.saturating_sub(d.val))?;
        Ok((self * &dinv).truncate(prec))
    }

    pub fn pow(&self, n: u64) -> LaurentNum {
        let mut base = self.clone();
        let mut acc = LaurentNum::one(&self.fq);
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Frobenius twist x^{(n)}; inverse twists need q^{|n|}-divisible exponents.
    pub fn twist(&self, n: i32) -> Result<LaurentNum> {
        self.twist_capped(n, EXACT)
    }

    /// Twist whose precision is capped at `cap`, so sparse high powers stay small.
    pub fn twist_capped(&self, n: i32, cap: i64) -> Result<LaurentNum> {
        let q = self.fq.q() as i64;
        let s = q.checked_pow(n.unsigned_abs()).ok_or_else(|| Error::PrecisionExhausted(format!("twist by {n}")))?;
        if n >= 0 {
            let prec = if self.is_exact() { EXACT } else { self.prec.saturating_mul(s) };
            let prec = clamp(prec).min(clamp(cap));
            let val = self.val.saturating_mul(s);
            if self.is_zero() || val >= prec {
                return Ok(LaurentNum::zero(&self.fq, prec));
            }
            let span = if is_exact(prec) { (self.coeffs.len() as i64 - 1) * s + 1 } else { (prec - val).min((self.coeffs.len() as i64 - 1) * s + 1) };
            let mut coeffs = vec![Fe::ZERO; span as usize];
            for (i, &c) in self.coeffs.iter().enumerate() {
                let k = i as i64 * s;
                if k >= span {
                    break;
                }
                coeffs[k as usize] = c;
            }
            Ok(LaurentNum::normalized(&self.fq, val, coeffs, prec))
        } else {
            for (i, c) in self.coeffs.iter().enumerate() {
                let e = self.val + i as i64;
                if !c.is_zero() && e.rem_euclid(s) != 0 {
                    return Err(Error::NonDivisibleTwist { exponent: e, modulus: s });
                }
            }
            let prec = if self.is_exact() { EXACT } else { self.prec.div_euclid(s) + i64::from(self.prec.rem_euclid(s) != 0) };
            let prec = prec.min(clamp(cap));
            if self.is_zero() {
                return Ok(LaurentNum::zero(&self.fq, prec));
            }
            let val = self.val.div_euclid(s);
            let coeffs: Vec<Fe> = self.coeffs.iter().step_by(s as usize).copied().collect();
            Ok(LaurentNum::normalized(&self.fq, val, coeffs, prec))
        }
    }

    /// Residual of a difference: its valuation, or its precision when it vanishes.
    pub fn residual(&self, other: &LaurentNum) -> i64 {
        (self - other).val()
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a LaurentNum>>(fq: &Fq, items: I) -> LaurentNum {
        items.into_iter().fold(LaurentNum::exact_zero(fq), |acc, x| &acc + x)
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            q: self.fq.q(),
            val: self.val,
            prec: (!self.is_exact()).then_some(self.prec),
            coeffs: self.coeffs.iter().map(|c| c.index()).collect(),
        }
    }

    pub fn from_json(fq: &Fq, j: &LaurentJson) -> Result<LaurentNum> {
        if j.q != fq.q() {
            return Err(Error::FieldMismatch);
        }
        if let Some(&bad) = j.coeffs.iter().find(|&&c| c >= fq.q()) {
            return Err(Error::InvalidArgument(format!("coefficient {bad} outside F_{}", fq.q())));
        }
        let coeffs = j.coeffs.iter().map(|&c| fq.elem(c)).collect();
        Ok(LaurentNum::normalized(fq, j.val, coeffs, j.prec.unwrap_or(EXACT)))
    }
}

/// Wire form of a [`LaurentNum`]; `prec` is absent for exact values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub q: u32,
    pub val: i64,
    pub prec: Option<i64>,
    pub coeffs: Vec<u32>,
}

impl std::ops::Add for &LaurentNum {
    type Output = LaurentNum;
    fn add(self, o: &LaurentNum) -> LaurentNum {
        debug_assert_eq!(self.fq, o.fq);
        let prec = self.prec.min(o.prec);
        let v0 = self.val.min(o.val);
        let top = |x: &LaurentNum| if x.is_zero() { i64::MIN } else { x.val + x.coeffs.len() as i64 };
        let end = top(self).max(top(o)).min(prec);
        if end <= v0 {
            return LaurentNum::zero(&self.fq, prec);
        }
        let fq = &self.fq;
        let mut c = vec![Fe::ZERO; (end - v0) as usize];
        for x in [self, o] {
            for (i, &a) in x.coeffs.iter().enumerate() {
                let k = x.val + i as i64 - v0;
                if k >= c.len() as i64 {
                    break;
                }
                c[k as usize] = fq.add(c[k as usize], a);
            }
        }
        LaurentNum::normalized(fq, v0, c, prec)
    }
}

impl std::ops::Neg for &LaurentNum {
    type Output = LaurentNum;
    fn neg(self) -> LaurentNum {
        self.scale(self.fq.minus_one())
    }
}

impl std::ops::Sub for &LaurentNum {
    type Output = LaurentNum;
    fn sub(self, o: &LaurentNum) -> LaurentNum {
        self + &(-o)
    }
}

impl std::ops::Mul for &LaurentNum {
    type Output = LaurentNum;
    fn mul(self, o: &LaurentNum) -> LaurentNum {
        debug_assert_eq!(self.fq, o.fq);
        let prec = clamp(self.prec.saturating_add(o.val)).min(clamp(o.prec.saturating_add(self.val)));
        if self.is_zero() || o.is_zero() {
            return LaurentNum::zero(&self.fq, prec);
        }
        let val = self.val + o.val;
        let n = if is_exact(prec) { usize::MAX } else { (prec - val).max(0) as usize };
        let c = self.fq.convolve(&self.coeffs, &o.coeffs, n);
        LaurentNum::normalized(&self.fq, val, c, prec)
    }
}

forward_owned!(Add, add, LaurentNum);
forward_owned!(Sub, sub, LaurentNum);
forward_owned!(Mul, mul, LaurentNum);

impl fmt::Display for LaurentNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .take(6)
            .map(|(i, c)| format!("{}*u^{}", c.index(), self.val + i as i64))
            .collect();
        if self.coeffs.iter().filter(|c| !c.is_zero()).count() > 6 {
            terms.push("...".into());
        }
        if !self.is_exact() {
            terms.push(format!("O(u^{})", self.prec));
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for LaurentNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentNum({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    fn arb(fq: &Fq, val: i64, c: &[u32], prec: i64) -> LaurentNum {
        LaurentNum::from_parts(fq, val, c.iter().map(|&x| fq.elem(x % fq.q())).collect(), prec)
    }

    #[test]
    fn t_and_t_tilde_encodings() {
        for q in [2, 3, 4, 9] {
            let fq = Fq::new(q).unwrap();
            let t = LaurentNum::t_big(&fq);
            let tt = LaurentNum::t_tilde(&fq);
            // T~^{q-1} = -T
            assert!((&tt.pow(q as u64 - 1) + &t).is_zero());
            assert_eq!(t.abs_val().unwrap(), Ratio::from_integer(1));
            assert_eq!(tt.abs_val().unwrap(), Ratio::new(1, q as i64 - 1));
            assert!(t.in_k_infty());
            assert_eq!(q == 2, tt.in_k_infty());
        }
    }

    #[test]
    fn rational_expansion_residue() {
        let fq = f3();
        // x = (2T + 1)/(T^2 + 1) has residue 2
        let x = RationalK::new(Poly::from_ints(&fq, &[1, 2]), Poly::from_ints(&fq, &[1, 0, 1])).unwrap();
        let l = LaurentNum::from_rational(&x, 60).unwrap();
        assert_eq!(l.residue().unwrap(), fq.from_int(2));
        assert_eq!(l.prec(), 60);
        let back = &l * &LaurentNum::from_poly(x.den());
        assert!((&back - &LaurentNum::from_poly(x.num())).is_zero());
    }

    #[test]
    fn residue_requires_k_infty() {
        let fq = f3();
        let err = LaurentNum::t_tilde(&fq).residue().unwrap_err();
        assert_eq!(err, Error::NotInKInfinity(-1));
    }

    #[test]
    fn exact_inverse_of_binomial_needs_target() {
        let fq = f3();
        let x = &LaurentNum::one(&fq) + &LaurentNum::monomial(&fq, Fe::ONE, 1);
        assert!(matches!(x.inv(), Err(Error::PrecisionExhausted(_))));
        let y = x.inv_prec(20).unwrap();
        assert_eq!(y.prec(), 20);
        assert!((&(&x * &y) - &LaurentNum::one(&fq)).is_zero());
        assert_eq!(LaurentNum::exact_zero(&fq).inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn twist_round_trip_and_rejection() {
        let fq = f3();
        let x = arb(&fq, -2, &[1, 2, 0, 1], 40);
        let tw = x.twist(2).unwrap();
        assert_eq!(tw.val(), -18);
        assert_eq!(tw.prec(), 360);
        let back = tw.twist(-2).unwrap();
        assert_eq!(back.residual(&x), 40);
        assert!(matches!(x.twist(-1), Err(Error::NonDivisibleTwist { .. })));
        // precision of an inverse twist rounds up
        let y = arb(&fq, 3, &[1], 10);
        assert_eq!(y.twist(-1).unwrap().prec(), 4);
    }

    #[test]
    fn json_round_trip() {
        let fq = Fq::new(9).unwrap();
        for x in [arb(&fq, -3, &[4, 0, 8, 1], 17), LaurentNum::t_big(&fq), LaurentNum::zero(&fq, 5)] {
            let j = serde_json::to_string(&x.to_json()).unwrap();
            let back = LaurentNum::from_json(&fq, &serde_json::from_str(&j).unwrap()).unwrap();
            assert_eq!(back.to_json(), x.to_json());
        }
    }

    proptest! {
        #[test]
        fn field_laws_to_precision(a in proptest::collection::vec(0u32..3, 1..12), va in -5i64..5,
                                   b in proptest::collection::vec(0u32..3, 1..12), vb in -5i64..5) {
            let fq = f3();
            let mut a = a; a[0] = 1 + a[0] % 2;
            let mut b = b; b[0] = 1 + b[0] % 2;
            let x = arb(&fq, va, &a, va + 30);
            let y = arb(&fq, vb, &b, vb + 25);
            let xy = &x * &y;
            prop_assert_eq!(xy.val(), va + vb);
            prop_assert_eq!(xy.prec(), va + vb + 25);
            let back = xy.div(&y).unwrap();
            prop_assert!(back.residual(&x) >= back.prec());
            prop_assert!(((&x + &y) - y.clone()).residual(&x) >= (va + 30).min(vb + 25));
            // Frobenius is a ring homomorphism
            let lhs = xy.twist(1).unwrap();
            let rhs = &x.twist(1).unwrap() * &y.twist(1).unwrap();
            prop_assert!(lhs.residual(&rhs) >= lhs.prec().min(rhs.prec()));
            let lhs = (&x + &y).twist(1).unwrap();
            let rhs = &x.twist(1).unwrap() + &y.twist(1).unwrap();
            prop_assert!(lhs.residual(&rhs) >= lhs.prec().min(rhs.prec()));
        }
    }
}
