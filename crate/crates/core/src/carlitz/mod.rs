//! The Carlitz exponential, its period, the series Omega, the normalized
//! exponential e and its adjoint e*, and division polynomials for both.

mod cyclotomic;
mod division;

use std::sync::OnceLock;

pub use cyclotomic::{cyclotomic, euler_phi, CycloPoly};
pub use division::{adj_closed_form, adj_div_poly, div_poly, TwistedPoly};

use crate::error::{Error, Result};
use crate::ffarith::{dfac, Fe, Fq, LaurentNum, Poly, RationalK};
use crate::tseries::{product_convergent, TMatrix, TSeries};

/// Largest number of exponential terms tried before giving up.
const EXP_TERM_BUDGET: u32 = 64;

/// Value of a polynomial in F_q[t] at a point of C_infinity.
pub fn poly_at(p: &Poly, x: &LaurentNum) -> LaurentNum {
    let fq = p.field();
    p.coeffs()
        .iter()
        .rev()
        .fold(LaurentNum::exact_zero(fq), |acc, &c| &(&acc * x) + &LaurentNum::from_fe(fq, c))
}

/// Working field and u-adic precision, with lazily cached constants.
pub struct CarlitzCtx {
    fq: Fq,
    prec: i64,
    period: OnceLock<LaurentNum>,
    estar_basis: OnceLock<Vec<LaurentNum>>,
}

impl CarlitzCtx {
    pub fn new(fq: &Fq, prec: i64) -> CarlitzCtx {
        CarlitzCtx { fq: fq.clone(), prec, period: OnceLock::new(), estar_basis: OnceLock::new() }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// A context over the same field at another precision.
    pub fn with_prec(&self, prec: i64) -> CarlitzCtx {
        CarlitzCtx::new(&self.fq, prec)
    }

    fn q(&self) -> i64 {
        self.fq.q() as i64
    }

    /// exp_C(z) = sum_n z^{q^n} / D_n, known modulo u^min(prec, prec(z)).
    pub fn exp(&self, z: &LaurentNum) -> Result<LaurentNum> {
        let target = self.prec.min(z.prec());
        if z.is_zero() {
            return Ok(LaurentNum::zero(&self.fq, target));
        }
        let q = self.q();
        let mut acc = LaurentNum::zero(&self.fq, target);
        let mut prev_val = i64::MIN;
        for n in 0..EXP_TERM_BUDGET {
            let qn = q.pow(n);
            let d_val = (q - 1) * n as i64 * qn;
            let term_val = z.val() * qn + d_val;
            if n > 0 && term_val >= target && term_val > prev_val {
                return Ok(acc);
            }
            prev_val = term_val;
            let zt = z.twist_capped(n as i32, target.saturating_sub(d_val))?;
            if zt.is_zero() {
                continue;
            }
            let dinv = LaurentNum::from_poly(&dfac(&self.fq, n)).inv_prec(target - zt.val())?;
            acc = &acc + &(&zt * &dinv);
        }
        Err(Error::PrecisionExhausted(format!("exp_C did not converge within {EXP_TERM_BUDGET} terms")))
    }

    /// The fundamental period: -T~^q prod_{i>=1} (1 - T^{1-q^i})^{-1}.
    pub fn period(&self) -> LaurentNum {
        self.period
            .get_or_init(|| {
                let q = self.q();
                let inner = self.prec + q;
                let mut prod = LaurentNum::one(&self.fq);
                let mut i = 1;
                loop {
                    let e = (q - 1) * (q.pow(i) - 1);
                    if e >= inner {
                        break;
                    }
                    let t_pow = LaurentNum::from_poly(&Poly::var(&self.fq)).pow(q.pow(i) as u64 - 1);
                    let factor = &LaurentNum::one(&self.fq) - &t_pow.inv_prec(inner).unwrap();
                    prod = (&prod * &factor).truncate(inner);
                    i += 1;
                }
                let scale = LaurentNum::monomial(&self.fq, self.fq.minus_one(), -q);
                (&scale * &prod.inv_prec(inner).unwrap()).truncate(self.prec)
            })
            .clone()
    }

    /// The factor 1 - t/T^{q^i} as a 1x1 matrix, with coefficients capped at `cap`.
    fn omega_factor(&self, i: usize, trunc_t: usize, cap: i64) -> TMatrix {
        let fq = &self.fq;
        let q = self.q();
        let e = (q - 1) * q.pow(i as u32);
        let coef = LaurentNum::monomial(fq, fq.sign(q.pow(i as u32)), e).truncate(cap);
        let s = TSeries::from_coeffs(fq, vec![LaurentNum::one(fq), -&coef], trunc_t);
        TMatrix::from_entries(1, 1, vec![s])
    }

    /// Omega(t) = T~^{-q} prod_{i>=1} (1 - t/T^{q^i}).
    ///
    /// The coefficient of t^n is carried to precision prec + (q-1)*trunc_t so
    /// that evaluation at any |t| <= |T| stays good to `prec`.
    pub fn omega(&self, trunc_t: usize) -> Result<TSeries> {
        let q = self.q();
        let cap = self.prec + (q - 1) * trunc_t as i64;
        let (p, _) = product_convergent(1, 128, |i| Ok(self.omega_factor(i, trunc_t, cap)))?;
        Ok(p.get(0, 0).scale(&LaurentNum::monomial(&self.fq, Fe::ONE, q)))
    }

    /// Omega^{(-1)}(t) = T~^{-1} prod_{i>=0} (1 - t/T^{q^i}), from its own product.
    pub fn omega_minus1(&self, trunc_t: usize) -> Result<TSeries> {
        let q = self.q();
        let cap = self.prec + (q - 1) * trunc_t as i64;
        let (p, _) = product_convergent(0, 128, |i| Ok(self.omega_factor(i, trunc_t, cap)))?;
        Ok(p.get(0, 0).scale(&LaurentNum::monomial(&self.fq, Fe::ONE, 1)))
    }

    /// Omega(t0) from the truncated series, subject to the tail-bound check.
    pub fn omega_at(&self, t0: &LaurentNum, trunc_t: usize) -> Result<LaurentNum> {
        self.omega(trunc_t)?.eval(t0, self.prec)
    }

    /// e(x) = exp_C(pi~ x), which depends only on x modulo A.
    pub fn e(&self, x: &RationalK) -> Result<LaurentNum> {
        let fr = x.frac();
        if fr.is_zero() {
            return Ok(LaurentNum::zero(&self.fq, self.prec));
        }
        let xl = LaurentNum::from_rational(&fr, self.prec + self.q())?;
        self.exp(&(&self.period() * &xl))
    }

    /// Coefficients a_i of Omega^{(-1)} with val(a_i) = q^i below the working precision.
    fn estar_basis(&self) -> &[LaurentNum] {
        self.estar_basis.get_or_init(|| {
            let q = self.q();
            let mut n = 1;
            while q.pow(n as u32) < self.prec {
                n += 1;
            }
            let inner = CarlitzCtx::new(&self.fq, self.prec);
            let s = inner.omega_minus1(n).expect("Omega^(-1) product converges");
            s.coeffs().iter().map(|c| c.truncate(self.prec)).collect()
        })
    }

    /// e*(x) = sum_i Res(T^i x) a_i.
    pub fn e_star(&self, x: &RationalK) -> LaurentNum {
        let basis = self.estar_basis();
        let digits = x.frac().neg_power_digits(basis.len());
        let mut acc = LaurentNum::zero(&self.fq, self.prec);
        for (c, a) in digits.iter().zip(basis) {
            if !c.is_zero() {
                acc = &acc + &a.scale(*c);
            }
        }
        acc
    }

    /// e*(x) from the digit formula T~ e*(x) = sum_n Res((-T)^{alpha(n)} x) T^{-n},
    /// summed over n < terms; the result is known modulo u^{1 + (q-1) terms}.
    pub fn e_star_via_digits(&self, x: &RationalK, terms: usize) -> LaurentNum {
        let fq = &self.fq;
        let q = self.q();
        let alphas: Vec<Option<u32>> = (0..terms as u64).map(|n| alpha_digits(n, fq.q())).collect();
        let max_alpha = alphas.iter().flatten().max().copied().unwrap_or(0) as usize;
        let digits = x.frac().neg_power_digits(max_alpha + 1);
        let prec = 1 + (q - 1) * terms as i64;
        let mut coeffs = vec![Fe::ZERO; (prec - 1) as usize];
        for (n, a) in alphas.iter().enumerate() {
            let Some(m) = a else { continue };
            // Res((-T)^m x) = (-1)^m c_{m+1};  T^{-n} = (-1)^n u^{(q-1)n}
            let c = fq.mul(digits[*m as usize], fq.sign(*m as i64 + n as i64));
            coeffs[(q - 1) as usize * n] = c;
        }
        LaurentNum::from_parts(fq, 1, coeffs, prec)
    }
}

/// alpha(n): the base-q digit sum of n when every digit is 0 or 1, else `None` (minus infinity).
pub fn alpha_digits(n: u64, q: u32) -> Option<u32> {
    let q = q as u64;
    match n {
        0 => Some(0),
        _ if n % q == 0 => alpha_digits(n / q, q as u32),
        _ if n % q == 1 => alpha_digits((n - 1) / q, q as u32).map(|a| a + 1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffarith::parse_rational;

    fn ctx(q: u32, prec: i64) -> CarlitzCtx {
        CarlitzCtx::new(&Fq::new(q).unwrap(), prec)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_digits(0, 3), Some(0));
        assert_eq!(alpha_digits(3, 3), Some(1));
        assert_eq!(alpha_digits(4, 3), Some(2));
        assert_eq!(alpha_digits(2, 3), None);
        assert_eq!(alpha_digits(13, 3), Some(3));
        assert_eq!(alpha_digits(7, 2), Some(3));
    }

    #[test]
    fn period_shape() {
        for q in [2, 3, 4, 5, 9] {
            let c = ctx(q, 120);
            let w = c.period();
            assert_eq!(w.val(), -(q as i64));
            assert_eq!(w.prec(), 120);
            // pi~^{q-1} lies in k_infinity even though pi~ does not for q > 2
            assert!(w.pow(q as u64 - 1).in_k_infty());
        }
    }

    #[test]
    fn period_is_in_kernel_of_exp() {
        for q in [2, 3, 4, 5] {
            let c = ctx(q, 150);
            let v = c.exp(&c.period()).unwrap();
            assert!(v.is_zero(), "q={q}: exp(pi) = {v}");
            assert!(v.prec() >= 140);
        }
    }

    #[test]
    fn exp_is_additive_and_f_q_linear() {
        let c = ctx(3, 100);
        let fq = c.field().clone();
        let a = LaurentNum::from_parts(&fq, -2, vec![fq.elem(1), fq.elem(2), fq.elem(1)], 100);
        let b = LaurentNum::from_parts(&fq, -1, vec![fq.elem(2), fq.elem(0), fq.elem(1)], 100);
        let lhs = c.exp(&(&a + &b)).unwrap();
        let rhs = &c.exp(&a).unwrap() + &c.exp(&b).unwrap();
        assert!(lhs.residual(&rhs) >= 95);
        let lhs = c.exp(&a.scale(fq.elem(2))).unwrap();
        assert!(lhs.residual(&c.exp(&a).unwrap().scale(fq.elem(2))) >= 95);
    }

    #[test]
    fn exp_intertwines_carlitz_action() {
        // exp(T z) = T exp(z) + exp(z)^q
        let c = ctx(3, 100);
        let fq = c.field().clone();
        let z = LaurentNum::from_parts(&fq, -1, vec![fq.elem(1), fq.elem(1)], 100);
        let t = LaurentNum::t_big(&fq);
        let lhs = c.exp(&(&t * &z)).unwrap();
        let ez = c.exp(&z).unwrap();
        let rhs = &(&t * &ez) + &ez.twist(1).unwrap();
        assert!(lhs.residual(&rhs) >= 90);
    }

    #[test]
    fn e_of_one_over_t_is_t_tilde() {
        for q in [2, 3, 4, 5] {
            let c = ctx(q, 120);
            let fq = c.field().clone();
            let x = parse_rational("1/T", &fq).unwrap();
            let v = c.e(&x).unwrap();
            assert!(v.residual(&LaurentNum::t_tilde(&fq)) >= 110, "q={q}: {v}");
        }
    }

    #[test]
    fn e_kills_a_and_is_periodic() {
        let c = ctx(3, 100);
        let fq = c.field().clone();
        assert!(c.e(&parse_rational("T^2+1", &fq).unwrap()).unwrap().is_zero());
        let x = parse_rational("(T+1)/(T^2-T)", &fq).unwrap();
        let y = parse_rational("(T+1)/(T^2-T) + T^3 - T", &fq).unwrap();
        assert!(c.e(&x).unwrap().residual(&c.e(&y).unwrap()) >= 100);
    }

    #[test]
    fn e_generating_function() {
        // sum_i e(1/T^{i+1}) t^i = 1/Omega^{(-1)}(t)
        let c = ctx(3, 120);
        let fq = c.field().clone();
        let inv = c.omega_minus1(20).unwrap().inv().unwrap();
        for i in 0..=20 {
            let x = RationalK::new(Poly::one(&fq), Poly::monomial(&fq, Fe::ONE, i + 1)).unwrap();
            let v = c.e(&x).unwrap();
            assert!(v.residual(inv.coeff(i)) >= 110, "i={i}");
        }
    }

    #[test]
    fn omega_functional_equation_small() {
        let c = ctx(3, 3 * 60);
        let fq = c.field().clone();
        let om = c.omega(10).unwrap();
        let lhs = om.twist(-1).unwrap();
        let rhs = &TSeries::t_minus(&LaurentNum::t_big(&fq), 10) * &om;
        assert!(lhs.residual(&rhs) >= 60);
        let direct = c.omega_minus1(10).unwrap();
        assert!(direct.residual(&lhs) >= 60);
    }

    #[test]
    fn period_times_omega_at_t() {
        let c = ctx(3, 100);
        let fq = c.field().clone();
        let v = c.omega_at(&LaurentNum::t_big(&fq), 16).unwrap();
        let r = (&(&c.period() * &v) + &LaurentNum::one(&fq)).val();
        assert!(r >= 95, "residual {r}");
    }

    #[test]
    fn e_star_functional_equation() {
        // T e*(x)^q + e*(x) = e*(Tx)^q
        let c = ctx(3, 150);
        let fq = c.field().clone();
        let t = LaurentNum::t_big(&fq);
        for s in ["1/T^2", "(T+1)/(T^2-T)", "T/(T^3+2)"] {
            let x = parse_rational(s, &fq).unwrap();
            let ex = c.e_star(&x);
            let lhs = &(&t * &ex.twist(1).unwrap()) + &ex;
            let rhs = c.e_star(&x.mul_poly(&Poly::var(&fq))).twist(1).unwrap();
            assert!(lhs.residual(&rhs) >= 145, "{s}");
        }
    }

    #[test]
    fn e_star_on_monomials_and_kernel() {
        let c = ctx(3, 150);
        let fq = c.field().clone();
        let om = c.omega_minus1(5).unwrap();
        for n in 0..5 {
            let x = RationalK::new(Poly::one(&fq), Poly::monomial(&fq, Fe::ONE, n + 1)).unwrap();
            assert!(c.e_star(&x).residual(om.coeff(n)) >= 150);
        }
        assert!(c.e_star(&parse_rational("T^2 + 1", &fq).unwrap()).is_zero());
    }

    #[test]
    fn digit_formula_small() {
        let c = ctx(3, 120);
        let fq = c.field().clone();
        let x = parse_rational("1/(T^2-T)", &fq).unwrap();
        let a = c.e_star(&x);
        let b = c.e_star_via_digits(&x, 50);
        assert!(a.residual(&b) >= 100);
    }
}
