//! Exact elements of k = F_q(T).

use std::fmt;

use super::field::{Fe, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalK {
    num: Poly,
    den: Poly,
}

impl RationalK {
    pub fn new(num: Poly, den: Poly) -> Result<RationalK> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let g = if g.is_zero() { Poly::one(num.field()) } else { g };
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let li = den.field().inv(den.leading()).unwrap();
        Ok(RationalK { num: num.scale(li), den: den.scale(li) })
    }

    pub fn from_poly(p: Poly) -> RationalK {
        let den = Poly::one(p.field());
        RationalK { num: p, den }
    }

    pub fn zero(fq: &Fq) -> RationalK {
        RationalK::from_poly(Poly::zero(fq))
    }

    pub fn one(fq: &Fq) -> RationalK {
        RationalK::from_poly(Poly::one(fq))
    }

    pub fn constant(fq: &Fq, a: Fe) -> RationalK {
        RationalK::from_poly(Poly::constant(fq, a))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    /// deg(num) - deg(den); `None` for zero. Equals -log_q of |x|^{-1}.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg_i() - self.den.deg_i())
    }

    /// Leading coefficient in the 1/T expansion.
    pub fn leading(&self) -> Fe {
        self.num.leading()
    }

    /// Polynomial part: the unique a in A with |x - a| < 1.
    pub fn int_part(&self) -> Poly {
        self.num.div_rem(&self.den).unwrap().0
    }

    /// Fractional part x - int_part(x).
    pub fn frac(&self) -> RationalK {
        let r = self.num.rem(&self.den).unwrap();
        RationalK { num: r, den: self.den.clone() }
    }

    /// Coefficients of T^{-1}, ..., T^{-n} in the expansion of x.
    pub fn neg_power_digits(&self, n: usize) -> Vec<Fe> {
        let fq = self.field();
        let li = fq.inv(self.den.leading()).unwrap();
        let dd = self.den.deg_i();
        let mut r = self.num.rem(&self.den).unwrap();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let tr = r.shift(1);
            let c = if tr.deg_i() == dd { fq.mul(tr.leading(), li) } else { Fe::ZERO };
            r = &tr - &self.den.scale(c);
            out.push(c);
        }
        out
    }

    /// Res(x): the coefficient of T^{-1}.
    pub fn residue(&self) -> Fe {
        self.neg_power_digits(1)[0]
    }

    pub fn inv(&self) -> Result<RationalK> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalK::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RationalK) -> Result<RationalK> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, a: Fe) -> RationalK {
        RationalK::new(self.num.scale(a), self.den.clone()).unwrap()
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalK {
        RationalK::new(&self.num * p, self.den.clone()).unwrap()
    }

    pub fn pow(&self, n: i64) -> Result<RationalK> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(RationalK { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// The q^n-th power.
    pub fn frobenius(&self, n: u32) -> RationalK {
        RationalK { num: self.num.frobenius(n), den: self.den.frobenius(n) }
    }
}

impl fmt::Display for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalK({self})")
    }
}

impl std::ops::Add for &RationalK {
    type Output = RationalK;
    fn add(self, o: &RationalK) -> RationalK {
        if self.den == o.den {
            return RationalK::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RationalK::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }
}

impl std::ops::Sub for &RationalK {
    type Output = RationalK;
    fn sub(self, o: &RationalK) -> RationalK {
        self + &(-o)
    }
}

impl std::ops::Neg for &RationalK {
    type Output = RationalK;
    fn neg(self) -> RationalK {
        RationalK { num: -&self.num, den: self.den.clone() }
    }
}

impl std::ops::Mul for &RationalK {
    type Output = RationalK;
    fn mul(self, o: &RationalK) -> RationalK {
        RationalK::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

forward_owned!(Add, add, RationalK);
forward_owned!(Sub, sub, RationalK);
forward_owned!(Mul, mul, RationalK);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_monic_denominator() {
        let fq = Fq::new(3).unwrap();
        // (2T^2 - 2T) / (2T) = T - 1
        let x = RationalK::new(Poly::from_ints(&fq, &[0, -2, 2]), Poly::from_ints(&fq, &[0, 2])).unwrap();
        assert!(x.is_poly());
        assert_eq!(x.num(), &Poly::from_ints(&fq, &[-1, 1]));
        assert!(RationalK::new(Poly::one(&fq), Poly::zero(&fq)).is_err());
    }

    #[test]
    fn digits_of_one_over_t_squared_minus_t() {
        let fq = Fq::new(3).unwrap();
        // 1/(T^2 - T) = T^-2 + T^-3 + T^-4 + ...
        let x = RationalK::new(Poly::one(&fq), Poly::from_ints(&fq, &[0, -1, 1])).unwrap();
        let d = x.neg_power_digits(6);
        let expect: Vec<Fe> = [0, 1, 1, 1, 1, 1].iter().map(|&c| fq.from_int(c)).collect();
        assert_eq!(d, expect);
        assert_eq!(x.residue(), Fe::ZERO);
        assert_eq!(x.degree(), Some(-2));
    }

    #[test]
    fn frac_plus_int_part() {
        let fq = Fq::new(5).unwrap();
        let x = RationalK::new(Poly::from_ints(&fq, &[1, 2, 3, 4]), Poly::from_ints(&fq, &[3, 0, 1])).unwrap();
        let back = &x.frac() + &RationalK::from_poly(x.int_part());
        assert_eq!(back, x);
        assert!(x.frac().degree().unwrap() < 0);
    }
}
