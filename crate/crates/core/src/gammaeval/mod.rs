//! The polynomials Psi_N, the geometric gamma function Pi(x) = prod_{a in A_+} (1 + x/a)^{-1},
//! Gamma(x) = Pi(x)/x, and numerical checks of their functional equations.

mod cycle;
mod moore;

use std::fmt;

pub use cycle::{CycleElement, Level, DEFAULT_DEG_CAP};
pub use moore::{det, moore_det, FrobeniusRing};

use crate::carlitz::CarlitzCtx;
use crate::error::{Error, Result};
use crate::ffarith::{Fq, LaurentNum, Poly, RationalK};

/// Extra u-adic digits carried internally, per unit of q - 1.
const GUARD_PER_STEP: i64 = 32;

/// Hard stop for the Psi_N recursion.
const PSI_BUDGET: usize = 64;

/// An F_q-linear polynomial `sum coeffs[i] z^{q^i}` over k.
#[derive(Clone, Debug, PartialEq)]
pub struct LinPoly {
    fq: Fq,
    coeffs: Vec<RationalK>,
}

impl LinPoly {
    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn coeffs(&self) -> &[RationalK] {
        &self.coeffs
    }

    /// Exact value at a point of k.
    pub fn eval_exact(&self, x: &RationalK) -> RationalK {
        let mut acc = RationalK::zero(&self.fq);
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.frobenius(1);
            }
            acc = &acc + &(c * &xp);
        }
        acc
    }

    /// Value at a point of C_infinity, known modulo u^prec at most.
    pub fn eval(&self, x: &LaurentNum, prec: i64) -> Result<LaurentNum> {
        let mut acc = LaurentNum::zero(&self.fq, prec);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cl = LaurentNum::from_rational(c, prec - x.val() * (self.fq.q() as i64).pow(i as u32))?;
            acc = &acc + &(&cl * &x.twist_capped(i as i32, prec - cl.val())?);
        }
        Ok(acc.truncate(prec))
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.fq.q() as u64;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let zp = match i {
                    0 => "z".to_string(),
                    _ => format!("z^{}", q.pow(i as u32)),
                };
                if *c == RationalK::one(&self.fq) {
                    zp
                } else {
                    format!("({c})*{zp}")
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Psi_N, from Psi_0 = z and Psi_N = (Psi_{N-1}^q - Psi_{N-1}) / (T^{q^N} - T).
pub fn psi_poly(fq: &Fq, n: usize) -> LinPoly {
    let t = Poly::var(fq);
    let mut coeffs = vec![RationalK::one(fq)];
    for k in 1..=n {
        let den = RationalK::from_poly(&t.frobenius(k as u32) - &t);
        let mut next = vec![RationalK::zero(fq); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + &c.frobenius(1);
            next[i] = &next[i] - c;
        }
        coeffs = next.iter().map(|c| c.div(&den).expect("T^{q^k} - T is nonzero")).collect();
    }
    LinPoly { fq: fq.clone(), coeffs }
}

fn guard(fq: &Fq) -> i64 {
    GUARD_PER_STEP * (fq.q() as i64 - 1)
}

/// Internal working precision for a context.
pub fn working_prec(ctx: &CarlitzCtx) -> i64 {
    ctx.prec() + guard(ctx.field())
}

/// The degree of x, read off its valuation (0 for |x| <= 1).
fn degree_bound(x: &LaurentNum) -> usize {
    let step = x.field().q() as i64 - 1;
    if x.is_zero() || x.val() >= 0 {
        0
    } else {
        ((-x.val() + step - 1) / step) as usize
    }
}

/// Psi_0(x), Psi_1(x), ... modulo u^prec, stopping before the first index
/// past deg x whose value vanishes to that precision.
pub fn psi_values(x: &LaurentNum, prec: i64) -> Result<Vec<LaurentNum>> {
    let fq = x.field().clone();
    let q = fq.q() as i64;
    let t = Poly::var(&fq);
    let floor = degree_bound(x);
    let mut cur = x.truncate(prec);
    let mut out = vec![cur.clone()];
    for n in 1..=PSI_BUDGET {
        let qn = q.checked_pow(n as u32).filter(|v| *v < (1 << 40));
        let Some(qn) = qn else { break };
        let den = LaurentNum::from_poly(&(&t.frobenius(n as u32) - &t));
        let num = &cur.twist_capped(1, prec + (q - 1) * qn)? - &cur;
        let next = num.div_prec(&den, prec)?;
        if next.is_zero() && n > floor {
            return Ok(out);
        }
        out.push(next.clone());
        cur = next;
    }
    Err(Error::PrecisionExhausted(format!("Psi_N did not vanish within {PSI_BUDGET} steps")))
}

/// Whether x lies in -A_+, the pole set of Pi.
pub fn is_pole_of_pi(x: &RationalK) -> bool {
    match x.as_poly() {
        Some(p) => !p.is_zero() && p.leading() == x.field().minus_one(),
        None => false,
    }
}

/// Pi(x) at a point of C_infinity, modulo u^prec at most.
pub fn pi_series(x: &LaurentNum, prec: i64) -> Result<LaurentNum> {
    let fq = x.field();
    let one = LaurentNum::one(fq);
    let mut prod = one.clone();
    for (n, v) in psi_values(x, prec)?.iter().enumerate() {
        let factor = &one + v;
        if factor.is_zero() {
            return Err(Error::Pole(format!("1 + Psi_{n}(x) vanishes to precision")));
        }
        prod = &prod * &factor;
    }
    prod.inv_prec(prec)
}

/// Pi(x) for x in k, known modulo u^prec.
pub fn pi_value(ctx: &CarlitzCtx, x: &RationalK) -> Result<LaurentNum> {
    if is_pole_of_pi(x) {
        return Err(Error::Pole(format!("Pi has a pole at {x}")));
    }
    Ok(pi_inner(ctx, x)?.truncate(ctx.prec()))
}

fn pi_inner(ctx: &CarlitzCtx, x: &RationalK) -> Result<LaurentNum> {
    let w = working_prec(ctx);
    if is_pole_of_pi(x) {
        return Err(Error::Pole(format!("Pi has a pole at {x}")));
    }
    pi_series(&LaurentNum::from_rational(x, w)?, w)
}

/// Gamma(x) = Pi(x)/x; poles at 0 and -A_+.
pub fn gamma_value(ctx: &CarlitzCtx, x: &RationalK) -> Result<LaurentNum> {
    if x.is_zero() {
        return Err(Error::Pole("Gamma has a pole at 0".into()));
    }
    let w = working_prec(ctx);
    let pi = pi_inner(ctx, x)?;
    Ok(pi.div_prec(&LaurentNum::from_rational(x, w)?, w)?.truncate(ctx.prec()))
}

/// Pi(a) = prod_x Pi(x)^{m_x} over the reduced representatives x = b/f, deg b < deg f.
pub fn pi_monomial(ctx: &CarlitzCtx, a: &CycleElement) -> Result<LaurentNum> {
    Ok(pi_monomial_inner(ctx, a)?.truncate(ctx.prec()))
}

fn pi_monomial_inner(ctx: &CarlitzCtx, a: &CycleElement) -> Result<LaurentNum> {
    let w = working_prec(ctx);
    let lv = a.level();
    let mut num = LaurentNum::one(ctx.field());
    let mut den = LaurentNum::one(ctx.field());
    for (i, m) in a.support() {
        let p = pi_inner(ctx, &lv.fraction(i))?;
        if m > 0 {
            num = (&num * &p.pow(m as u64)).truncate(w);
        } else {
            den = (&den * &p.pow(m.unsigned_abs())).truncate(w);
        }
    }
    num.div_prec(&den, w)
}

/// Valuation of a - b, read at most to u^prec.
fn agreement(a: &LaurentNum, b: &LaurentNum, prec: i64) -> i64 {
    (a - b).truncate(prec).val()
}

/// Residual of Pi(x + a0)/Pi(x) = prod_{0<=i<=deg a0} (1 + Psi_i(x)) / (1 + Psi_i(x + a0)).
pub fn verify_translation(ctx: &CarlitzCtx, x: &RationalK, a0: &Poly) -> Result<i64> {
    let w = working_prec(ctx);
    let fq = ctx.field();
    let shifted = x + &RationalK::from_poly(a0.clone());
    let lhs = pi_inner(ctx, &shifted)?.div_prec(&pi_inner(ctx, x)?, w)?;
    let d = a0.degree().unwrap_or(0);
    let one = LaurentNum::one(fq);
    let mut rhs = one.clone();
    for i in 0..=d {
        let psi = psi_poly(fq, i);
        let top = &one + &LaurentNum::from_rational(&psi.eval_exact(x), w)?;
        let bottom = &one + &LaurentNum::from_rational(&psi.eval_exact(&shifted), w)?;
        rhs = (&rhs * &top.div_prec(&bottom, w)?).truncate(w);
    }
    Ok(agreement(&lhs, &rhs, ctx.prec()))
}

/// The units of F_q as constants.
fn signs(fq: &Fq) -> impl Iterator<Item = crate::ffarith::Fe> + '_ {
    fq.units()
}

/// Residual of prod_eps Pi(eps x) = pi~ x / exp_C(pi~ x), for x outside A.
pub fn verify_reflection(ctx: &CarlitzCtx, x: &RationalK) -> Result<i64> {
    if x.is_poly() {
        return Err(Error::Pole(format!("reflection needs x outside A, got {x}")));
    }
    let w = working_prec(ctx);
    let fq = ctx.field();
    let mut lhs = LaurentNum::one(fq);
    for eps in signs(fq) {
        lhs = (&lhs * &pi_inner(ctx, &x.scale(eps))?).truncate(w);
    }
    let rhs = reflection_rhs(ctx, x)?;
    Ok(agreement(&lhs, &rhs, ctx.prec()))
}

/// pi~ x / e(x) at the working precision.
fn reflection_rhs(ctx: &CarlitzCtx, x: &RationalK) -> Result<LaurentNum> {
    let w = working_prec(ctx);
    let wide = ctx.with_prec(w);
    let px = &wide.period() * &LaurentNum::from_rational(x, w + ctx.field().q() as i64)?;
    px.div_prec(&wide.e(x)?, w)
}

/// Residual of prod_eps Pi(eps/T) against prod_{i>=1} (1 - T^{1-q^i})^{-1}.
pub fn verify_reflection_closed_form(ctx: &CarlitzCtx) -> Result<i64> {
    let fq = ctx.field();
    let w = working_prec(ctx);
    let q = fq.q() as i64;
    let x = RationalK::new(Poly::one(fq), Poly::var(fq))?;
    let mut lhs = LaurentNum::one(fq);
    for eps in signs(fq) {
        lhs = (&lhs * &pi_inner(ctx, &x.scale(eps))?).truncate(w);
    }
    let t = LaurentNum::t_big(fq);
    let one = LaurentNum::one(fq);
    let mut prod = one.clone();
    let mut i = 1u32;
    while (q - 1) * (q.pow(i) - 1) < w {
        let factor = &one - &t.pow(q.pow(i) as u64 - 1).inv()?;
        prod = (&prod * &factor).truncate(w);
        i += 1;
    }
    Ok(agreement(&lhs, &prod.inv_prec(w)?, ctx.prec()))
}

/// Residual of the multiplication formula
/// prod_{deg a < deg f} Pi((x+a)/f) = Pi(x) prod_{i < deg f} (1 + Psi_i(x)) prod_{a in A_+, deg a < deg f} prod_eps Pi(eps a/f).
pub fn verify_gauss(ctx: &CarlitzCtx, x: &RationalK, f: &Poly) -> Result<i64> {
    let d = match f.degree() {
        Some(d) if d > 0 && f.is_monic() => d,
        _ => return Err(Error::NotMonic(f.to_string())),
    };
    let w = working_prec(ctx);
    let fq = ctx.field();
    let fr = RationalK::from_poly(f.clone());
    let mut lhs = LaurentNum::one(fq);
    for a in Poly::all_below(fq, d) {
        let y = (x + &RationalK::from_poly(a)).div(&fr)?;
        lhs = (&lhs * &pi_inner(ctx, &y)?).truncate(w);
    }
    let one = LaurentNum::one(fq);
    let mut rhs = pi_inner(ctx, x)?;
    for i in 0..d {
        let v = psi_poly(fq, i).eval_exact(x);
        rhs = (&rhs * &(&one + &LaurentNum::from_rational(&v, w)?)).truncate(w);
    }
    for k in 0..d {
        for a in Poly::monic_of_degree(fq, k) {
            let y = RationalK::new(a, f.clone())?;
            for eps in signs(fq) {
                rhs = (&rhs * &pi_inner(ctx, &y.scale(eps))?).truncate(w);
            }
        }
    }
    Ok(agreement(&lhs, &rhs, ctx.prec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffarith::parse_rational;
    use num_rational::Ratio;

    fn f3() -> Fq {
        Fq::new(3).unwrap()
    }

    fn rat(s: &str, fq: &Fq) -> RationalK {
        parse_rational(s, fq).unwrap()
    }

    /// prod over monic a with deg a <= n of (1 + x/a), exactly.
    fn direct_partial(x: &RationalK, n: usize) -> RationalK {
        let fq = x.field();
        let mut acc = RationalK::one(fq);
        for d in 0..=n {
            for a in Poly::monic_of_degree(fq, d) {
                acc = &acc * &(&RationalK::one(fq) + &x.div(&RationalK::from_poly(a)).unwrap());
            }
        }
        acc
    }

    #[test]
    fn psi_small_cases() {
        let fq = f3();
        let p1 = psi_poly(&fq, 1);
        let den = rat("T^3 - T", &fq).inv().unwrap();
        assert_eq!(p1.coeffs(), &[-&den, den.clone()]);
        assert_eq!(psi_poly(&fq, 0).to_string(), "z");
    }

    #[test]
    fn psi_product_over_monics() {
        // 1 + Psi_N(x) = prod_{a monic, deg a = N} (1 + x/a)
        for q in [2, 3] {
            let fq = Fq::new(q).unwrap();
            for xs in ["1/(T^2+1)", "(T+1)/T^3", "T^2/(T-1)", "1/T"] {
                let x = rat(xs, &fq);
                for n in 0..=2usize {
                    let want = if n == 0 { direct_partial(&x, 0) } else { direct_partial(&x, n).div(&direct_partial(&x, n - 1)).unwrap() };
                    let got = &RationalK::one(&fq) + &psi_poly(&fq, n).eval_exact(&x);
                    assert_eq!(got, want, "q={q} x={xs} N={n}");
                }
            }
        }
    }

    #[test]
    fn psi_is_the_normalized_moore_quotient() {
        // Psi_N(z) = Moore(z, T^{N-1}, ..., 1) / Moore(T^N, ..., 1)
        use crate::ffarith::BiPoly;
        for q in [2, 3] {
            let fq = Fq::new(q).unwrap();
            for n in 1..=2usize {
                let mut xs = vec![BiPoly::z(&fq)];
                xs.extend((0..n).rev().map(|k| BiPoly::constant(Poly::monomial(&fq, crate::ffarith::Fe::ONE, k))));
                let num = moore_det(&xs);
                let den: Vec<Poly> = (0..=n).rev().map(|k| Poly::monomial(&fq, crate::ffarith::Fe::ONE, k)).collect();
                let den = RationalK::from_poly(moore_det(&den));
                let psi = psi_poly(&fq, n);
                let qq = q as usize;
                for (i, c) in psi.coeffs().iter().enumerate() {
                    let row = RationalK::from_poly(num.row(qq.pow(i as u32)));
                    assert_eq!(&row.div(&den).unwrap(), c, "q={q} N={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn psi_kills_low_degree_polynomials() {
        let fq = f3();
        let x = rat("(T+2)/(T^2+1)", &fq);
        for n in 1..=3usize {
            let psi = psi_poly(&fq, n);
            for a in Poly::all_below(&fq, n) {
                assert_eq!(psi.eval_exact(&(&x + &RationalK::from_poly(a))), psi.eval_exact(&x));
            }
        }
    }

    #[test]
    fn numeric_psi_matches_exact() {
        let fq = f3();
        for xs in ["1/T^2", "(T^2+1)/(T-1)", "T^3 + 1/T"] {
            let x = rat(xs, &fq);
            let vals = psi_values(&LaurentNum::from_rational(&x, 150).unwrap(), 150).unwrap();
            for (n, v) in vals.iter().enumerate() {
                let exact = LaurentNum::from_rational(&psi_poly(&fq, n).eval_exact(&x), 150).unwrap();
                assert!(v.residual(&exact) >= 150, "x={xs} N={n}");
            }
        }
    }

    #[test]
    fn pi_examples() {
        let fq = f3();
        let ctx = CarlitzCtx::new(&fq, 120);
        let one = LaurentNum::one(&fq);
        assert!(pi_value(&ctx, &RationalK::zero(&fq)).unwrap().residual(&one) >= 120);
        let x = rat("1/T", &fq);
        let g = gamma_value(&ctx, &x).unwrap();
        let want = &pi_value(&ctx, &x).unwrap() * &LaurentNum::t_big(&fq);
        assert!(g.residual(&want) >= 120 - 2);
        assert!(matches!(pi_value(&ctx, &rat("-1", &fq)), Err(Error::Pole(_))));
        assert!(matches!(pi_value(&ctx, &rat("2T^2 + T", &fq)), Err(Error::Pole(_))));
        assert!(matches!(gamma_value(&ctx, &RationalK::zero(&fq)), Err(Error::Pole(_))));
        // over F_2 the constant 1 equals -1, so it is a pole there and not over F_3
        assert!(pi_value(&ctx, &rat("1", &fq)).is_ok());
        let f2 = Fq::new(2).unwrap();
        assert!(matches!(pi_value(&CarlitzCtx::new(&f2, 60), &rat("1", &f2)), Err(Error::Pole(_))));
    }

    #[test]
    fn pi_matches_partial_products() {
        // the grouped product and the direct product over deg a <= N agree up to the omitted tail
        let fq = f3();
        let x = rat("(T+1)/(T^2+2)", &fq);
        let ctx = CarlitzCtx::new(&fq, 100);
        let pi = pi_value(&ctx, &x).unwrap();
        let n = 4;
        let partial = LaurentNum::from_rational(&direct_partial(&x, n).inv().unwrap(), 100).unwrap();
        // the first omitted factor differs from 1 by about |x|/q^{n+1}
        let tail = (fq.q() as i64 - 1) * (n as i64 + 1) + 1;
        assert!(pi.residual(&partial) >= tail);
    }

    #[test]
    fn functional_equations() {
        let fq = f3();
        let ctx = CarlitzCtx::new(&fq, 150);
        let x = rat("1/T^2", &fq);
        assert!(verify_translation(&ctx, &x, &Poly::one(&fq)).unwrap() >= 150);
        assert!(verify_translation(&ctx, &rat("(T+1)/(T^2+1)", &fq), &rat("T^2+T", &fq).num().clone()).unwrap() >= 150);
        assert!(verify_gauss(&ctx, &x, &Poly::var(&fq)).unwrap() >= 150);
        assert!(verify_gauss(&ctx, &rat("(2T+1)/(T^2+2T+2)", &fq), &rat("T^2+1", &fq).num().clone()).unwrap() >= 150);
        assert!(verify_reflection(&ctx, &rat("1/T", &fq)).unwrap() >= 150);
        assert!(verify_reflection(&ctx, &rat("T^2 + 1/(T+1)", &fq)).unwrap() >= 150);
        assert!(verify_reflection_closed_form(&ctx).unwrap() >= 150);
        assert!(verify_reflection(&ctx, &rat("T", &fq)).is_err());
    }

    #[test]
    fn broken_translation_is_detected() {
        // dropping the i = deg a0 factor must visibly fail
        let fq = f3();
        let ctx = CarlitzCtx::new(&fq, 100);
        let x = rat("1/T^2", &fq);
        let w = working_prec(&ctx);
        let lhs = pi_value(&ctx, &(&x + &RationalK::one(&fq))).unwrap().div_prec(&pi_value(&ctx, &x).unwrap(), w).unwrap();
        assert!(lhs.residual(&LaurentNum::one(&fq)) < 20);
    }

    #[test]
    fn reflection_monomials_are_algebraic() {
        // Pi([x] + [-x] + ...) * pi~^{-weight} = x / e(x) for a reflection element of weight 1
        let fq = f3();
        let ctx = CarlitzCtx::new(&fq, 120);
        let lv = Level::new(&rat("T^2 - T", &fq).num().clone()).unwrap();
        for i in 1..lv.size() {
            let x = lv.fraction(i);
            let s = CycleElement::symbol_at(&lv, i);
            let r = s.try_add(&s.star(&Poly::constant(&fq, fq.minus_one())).unwrap()).unwrap();
            assert_eq!(r.weight(), Ratio::from_integer(1));
            let got = pi_monomial(&ctx, &r).unwrap().div_prec(&ctx.period(), 120).unwrap();
            let want = LaurentNum::from_rational(&x, 130).unwrap().div_prec(&ctx.e(&x).unwrap(), 120).unwrap();
            assert!(got.residual(&want) >= 110, "x = {x}");
        }
    }
}
