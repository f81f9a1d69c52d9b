//! f-dual families, the Coleman functions g_x = 1 - sum_i e*(a_i/f) C_{a_0 b_i}(t, z)
//! and their products g_a, kept as residues modulo C_f*(t, z).

use std::sync::Arc;

use crate::brackets::bracket_n;
use crate::carlitz::{cyclotomic, div_poly, CarlitzCtx, CycloPoly};
use crate::error::{Error, Result};
use crate::ffarith::{Fe, Fq, LaurentNum, Poly, RationalK};
use crate::gammaeval::{psi_poly, CycleElement, Level};

/// Extra working digits per unit of q - 1, absorbing the growth of t^j z^k at evaluation points.
const GUARD_PER_STEP: i64 = 64;

/// Default number of twisted factors tried by [`ColemanCtx::pi_from_product`].
pub const DEFAULT_MAX_TWIST: usize = 12;

/// Families {a_i}, {b_j} with Res(a_i b_j / f) = delta_ij.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDual {
    pub a: Vec<Poly>,
    pub b: Vec<Poly>,
}

fn res_over(f: &Poly, p: &Poly) -> Fe {
    RationalK::new(p.clone(), f.clone()).expect("f is nonzero").residue()
}

/// The matrix Res(a_i b_j / f).
pub fn pairing_matrix(f: &Poly, a: &[Poly], b: &[Poly]) -> Vec<Vec<Fe>> {
    a.iter().map(|ai| b.iter().map(|bj| res_over(f, &(ai * bj))).collect()).collect()
}

/// Inverse of a square matrix over F_q, or `None` if it is singular.
fn fq_inverse(fq: &Fq, m: &[Vec<Fe>]) -> Option<Vec<Vec<Fe>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Fe>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(c, p);
        let inv = fq.inv(aug[c][c])?;
        for x in aug[c].iter_mut() {
            *x = fq.mul(*x, inv);
        }
        for r in 0..n {
            if r != c && !aug[r][c].is_zero() {
                let k = aug[r][c];
                for j in 0..2 * n {
                    let v = fq.mul(k, aug[c][j]);
                    aug[r][j] = fq.sub(aug[r][j], v);
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The dual family of a given {a_i}; fails when the a_i are not a basis of A/f.
pub fn f_dual_for(f: &Poly, a: Vec<Poly>) -> Result<FDual> {
    let fq = f.field();
    let d = f.degree().filter(|&d| d > 0 && f.is_monic()).ok_or_else(|| Error::NotMonic(f.to_string()))?;
    if a.len() != d {
        return Err(Error::InvalidArgument(format!("need {d} elements, got {}", a.len())));
    }
    let powers: Vec<Poly> = (0..d).map(|k| Poly::monomial(fq, Fe::ONE, k)).collect();
    let gram = pairing_matrix(f, &a, &powers);
    let inv = fq_inverse(fq, &gram).ok_or(Error::Singular)?;
    let b = (0..d)
        .map(|j| {
            let coeffs: Vec<Fe> = (0..d).map(|k| inv[k][j]).collect();
            Poly::from_coeffs(fq, coeffs)
        })
        .collect();
    Ok(FDual { a, b })
}

/// The dual family of a_i = T^{i-1}.
pub fn f_dual(f: &Poly) -> Result<FDual> {
    let d = f.degree().unwrap_or(0);
    f_dual_for(f, (0..d).map(|k| Poly::monomial(f.field(), Fe::ONE, k)).collect())
}

/// sum_{k,j} c_{kj} t^j z^k with deg_z below deg_z C_f*.
#[derive(Clone, Debug)]
pub struct ColemanFn {
    level: Arc<Level>,
    /// rows[k][j] multiplies z^k t^j
    rows: Vec<Vec<LaurentNum>>,
}

fn add_into(dst: &mut Vec<LaurentNum>, j: usize, v: &LaurentNum, fq: &Fq) {
    if dst.len() <= j {
        dst.resize(j + 1, LaurentNum::exact_zero(fq));
    }
    dst[j] = &dst[j] + v;
}

impl ColemanFn {
    fn constant_one(level: &Arc<Level>) -> ColemanFn {
        let fq = level.field();
        ColemanFn { level: level.clone(), rows: vec![vec![LaurentNum::one(fq)]] }
    }

    /// The function z^j.
    pub fn z_power(level: &Arc<Level>, j: usize) -> ColemanFn {
        let mut rows = vec![Vec::new(); j + 1];
        rows[j] = vec![LaurentNum::one(level.field())];
        ColemanFn { level: level.clone(), rows }
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn rows(&self) -> &[Vec<LaurentNum>] {
        &self.rows
    }

    /// The coefficient of z^k t^j.
    pub fn coeff(&self, k: usize, j: usize) -> LaurentNum {
        self.rows.get(k).and_then(|r| r.get(j)).cloned().unwrap_or_else(|| LaurentNum::exact_zero(self.level.field()))
    }

    pub fn deg_z(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_t(&self) -> usize {
        self.rows.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn reduce(mut rows: Vec<Vec<LaurentNum>>, cyclo: &CycloPoly, fq: &Fq) -> Vec<Vec<LaurentNum>> {
        let ell = cyclo.deg_z();
        let c = cyclo.poly.rows();
        for k in (ell..rows.len()).rev() {
            let r = std::mem::take(&mut rows[k]);
            if r.iter().all(LaurentNum::is_zero) {
                continue;
            }
            // z^ell = -sum_{k'<ell} C*_{k'}(t) z^{k'}
            for (kp, ck) in c.iter().enumerate().take(ell) {
                for (i, &a) in ck.coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let s = fq.neg(a);
                    for (j, v) in r.iter().enumerate() {
                        add_into(&mut rows[k - ell + kp], i + j, &v.scale(s), fq);
                    }
                }
            }
        }
        rows.truncate(ell.max(1));
        rows
    }

    /// Product reduced modulo C_f*.
    pub fn mul(&self, o: &ColemanFn, cyclo: &CycloPoly) -> Result<ColemanFn> {
        if self.level != o.level {
            return Err(Error::LevelMismatch);
        }
        let fq = self.level.field();
        let mut rows = vec![Vec::new(); self.rows.len() + o.rows.len() - 1];
        for (k1, r1) in self.rows.iter().enumerate() {
            for (k2, r2) in o.rows.iter().enumerate() {
                for (j1, a) in r1.iter().enumerate() {
                    if a.is_zero() && a.is_exact() {
                        continue;
                    }
                    for (j2, b) in r2.iter().enumerate() {
                        add_into(&mut rows[k1 + k2], j1 + j2, &(a * b), fq);
                    }
                }
            }
        }
        Ok(ColemanFn { level: self.level.clone(), rows: ColemanFn::reduce(rows, cyclo, fq) })
    }

    /// Frobenius twist of the coefficients, capped at u^cap.
    pub fn twist_capped(&self, n: i32, cap: i64) -> Result<ColemanFn> {
        let rows = self.rows.iter().map(|r| r.iter().map(|c| c.twist_capped(n, cap)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(ColemanFn { level: self.level.clone(), rows })
    }

    /// Value at (t0, z0).
    pub fn eval(&self, t0: &LaurentNum, z0: &LaurentNum) -> LaurentNum {
        let fq = self.level.field();
        let mut acc = LaurentNum::exact_zero(fq);
        for r in self.rows.iter().rev() {
            let inner = r.iter().rev().fold(LaurentNum::exact_zero(fq), |s, c| &(&s * t0) + c);
            acc = &(&acc * z0) + &inner;
        }
        acc
    }

    /// Smallest valuation of a coefficient difference.
    pub fn residual(&self, o: &ColemanFn) -> i64 {
        let k = self.rows.len().max(o.rows.len());
        let mut best = i64::MAX;
        for kk in 0..k {
            let j = self.rows.get(kk).map_or(0, Vec::len).max(o.rows.get(kk).map_or(0, Vec::len));
            for jj in 0..j {
                best = best.min(self.coeff(kk, jj).residual(&o.coeff(kk, jj)));
            }
        }
        best
    }
}

/// Working data for one level: precision, C_f*, a default dual family and torsion values.
pub struct ColemanCtx {
    prec: i64,
    wide: CarlitzCtx,
    level: Arc<Level>,
    cyclo: CycloPoly,
    dual: FDual,
}

impl ColemanCtx {
    pub fn new(fq: &Fq, prec: i64, level: &Arc<Level>) -> Result<ColemanCtx> {
        let w = prec + GUARD_PER_STEP * (fq.q() as i64 - 1);
        let cyclo = cyclotomic(level.modulus())?;
        let dual = f_dual(level.modulus())?;
        Ok(ColemanCtx { prec, wide: CarlitzCtx::new(fq, w), level: level.clone(), cyclo, dual })
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn working_prec(&self) -> i64 {
        self.wide.prec()
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn cyclo(&self) -> &CycloPoly {
        &self.cyclo
    }

    pub fn dual(&self) -> &FDual {
        &self.dual
    }

    pub fn carlitz(&self) -> &CarlitzCtx {
        &self.wide
    }

    fn fq(&self) -> &Fq {
        self.level.field()
    }

    fn frac_over_f(&self, a: &Poly) -> RationalK {
        RationalK::new(a.clone(), self.level.modulus().clone()).expect("f is nonzero")
    }

    /// The torsion value e(a/f) at working precision.
    pub fn torsion(&self, a: &Poly) -> Result<LaurentNum> {
        self.wide.e(&self.frac_over_f(a))
    }

    fn agreement(&self, a: &LaurentNum, b: &LaurentNum) -> i64 {
        (a - b).truncate(self.prec).val()
    }

    /// g_x built from the given dual family.
    pub fn coleman_g_with(&self, x: &RationalK, dual: &FDual) -> Result<ColemanFn> {
        let f = self.level.modulus();
        let a0 = self.level.residue(self.level.class_of(x)?);
        if a0.is_zero() {
            return Err(Error::InvalidArgument(format!("{x} lies in A")));
        }
        let fq = self.fq();
        let mut rows: Vec<Vec<LaurentNum>> = vec![vec![LaurentNum::one(fq)]];
        for (ai, bi) in dual.a.iter().zip(&dual.b) {
            let c = self.wide.e_star(&self.frac_over_f(ai));
            let p = div_poly(&(&a0 * bi).rem(f)?).expand();
            let (_, r) = p.div_rem(&self.cyclo.poly)?;
            for (k, tp) in r.rows().iter().enumerate() {
                if rows.len() <= k {
                    rows.resize(k + 1, Vec::new());
                }
                for (j, &e) in tp.coeffs().iter().enumerate() {
                    if !e.is_zero() {
                        add_into(&mut rows[k], j, &c.scale(fq.neg(e)), fq);
                    }
                }
            }
        }
        Ok(ColemanFn { level: self.level.clone(), rows })
    }

    /// g_x = 1 - sum_i e*(a_i/f) C_{a_0 b_i}(t, z) mod C_f*, for x in f^{-1}A outside A.
    pub fn coleman_g(&self, x: &RationalK) -> Result<ColemanFn> {
        self.coleman_g_with(x, &self.dual)
    }

    /// g_a = prod over nonzero classes of g_{b/f}^{m_b}, for effective a of positive weight.
    pub fn coleman_g_cycle(&self, a: &CycleElement) -> Result<ColemanFn> {
        self.check_cycle(a)?;
        let mut acc = ColemanFn::constant_one(&self.level);
        for (i, m) in a.support() {
            if i == 0 {
                continue;
            }
            let g = self.coleman_g(&self.level.fraction(i))?;
            for _ in 0..m {
                acc = acc.mul(&g, &self.cyclo)?;
            }
        }
        Ok(acc)
    }

    fn check_cycle(&self, a: &CycleElement) -> Result<()> {
        if **a.level() != *self.level {
            return Err(Error::LevelMismatch);
        }
        if !a.is_effective() {
            return Err(Error::NotEffective);
        }
        if a.weight_numerator() <= 0 {
            return Err(Error::ZeroWeight);
        }
        Ok(())
    }

    fn require_unit(&self, a: &Poly) -> Result<()> {
        if a.gcd(self.level.modulus()).is_one() {
            Ok(())
        } else {
            Err(Error::NotCoprime(a.to_string()))
        }
    }

    /// Pairs (a, N) with a a unit index and <a x>_N = 1: the zeros xi_a^{(N)} of g_x.
    pub fn zero_slots(&self, x: &RationalK) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let span = self.level.degree() as u32;
        for &u in self.level.units() {
            let ax = x.mul_poly(&self.level.residue(u));
            for n in 0..span {
                if bracket_n(&ax, n) == 1 {
                    out.push((u, n));
                }
            }
        }
        out
    }

    /// Valuation of g_x at xi_a^{(N)} = (T^{q^N}, e(a/f)^{q^N}); requires <a x>_N = 1.
    pub fn verify_zero(&self, x: &RationalK, a: &Poly, n: u32) -> Result<i64> {
        self.require_unit(a)?;
        let ax = x.mul_poly(a);
        if bracket_n(&ax, n) != 1 {
            return Err(Error::BracketPrecondition { x: ax.to_string(), n });
        }
        let g = self.coleman_g(x)?;
        let t0 = LaurentNum::t_big(self.fq()).twist(n as i32)?;
        let z0 = self.torsion(a)?.twist_capped(n as i32, self.working_prec())?;
        let v = g.eval(&t0, &z0);
        Ok(self.agreement(&v, &LaurentNum::exact_zero(self.fq())))
    }

    /// Residual of g_x^{(N+1)}(xi_a) = 1 + Psi_N(y) with y = frac(a x).
    pub fn verify_interp(&self, x: &RationalK, a: &Poly, n: usize) -> Result<i64> {
        self.require_unit(a)?;
        let w = self.working_prec();
        let g = self.coleman_g(x)?.twist_capped(n as i32 + 1, w)?;
        let lhs = g.eval(&LaurentNum::t_big(self.fq()), &self.torsion(a)?);
        let y = x.mul_poly(a).frac();
        let rhs = &LaurentNum::one(self.fq()) + &LaurentNum::from_rational(&psi_poly(self.fq(), n).eval_exact(&y), w)?;
        Ok(self.agreement(&lhs, &rhs))
    }

    /// Residual of sum_i e*(a_i/f)^{q^{N+1}} e(b_i a/f) = -Psi_N(a/f), for deg a < deg f.
    pub fn interp_sum_i(&self, a: &Poly, n: usize) -> Result<i64> {
        let w = self.working_prec();
        let mut lhs = LaurentNum::exact_zero(self.fq());
        for (ai, bi) in self.dual.a.iter().zip(&self.dual.b) {
            let es = self.wide.e_star(&self.frac_over_f(ai)).twist_capped(n as i32 + 1, w)?;
            lhs = &lhs + &(&es * &self.torsion(&(bi * a))?);
        }
        let psi = psi_poly(self.fq(), n).eval_exact(&self.frac_over_f(a));
        let rhs = -&LaurentNum::from_rational(&psi, w)?;
        Ok(self.agreement(&lhs, &rhs))
    }

    /// Residual of sum_i e*(a_i/f) e(b_i a/f)^{q^{deg f - deg a - 1}} = 1, for monic a with deg a < deg f.
    pub fn interp_sum_ii(&self, a: &Poly) -> Result<i64> {
        let da = match a.degree() {
            Some(d) if a.is_monic() && d < self.level.degree() => d,
            _ => return Err(Error::NotMonic(a.to_string())),
        };
        let m = (self.level.degree() - da - 1) as i32;
        let mut lhs = LaurentNum::exact_zero(self.fq());
        for (ai, bi) in self.dual.a.iter().zip(&self.dual.b) {
            let es = self.wide.e_star(&self.frac_over_f(ai));
            lhs = &lhs + &(&es * &self.torsion(&(bi * a))?.twist_capped(m, self.working_prec())?);
        }
        Ok(self.agreement(&lhs, &LaurentNum::one(self.fq())))
    }

    /// prod_{N>=1} g_a^{(N)}(xi_a), which should equal Pi(a * a)^{-1}.
    pub fn pi_from_product(&self, cyc: &CycleElement, a: &Poly, max_n: usize) -> Result<LaurentNum> {
        self.check_cycle(cyc)?;
        self.require_unit(a)?;
        let w = self.working_prec();
        let g = self.coleman_g_cycle(cyc)?;
        let t0 = LaurentNum::t_big(self.fq());
        let z0 = self.torsion(a)?;
        let one = LaurentNum::one(self.fq());
        let mut prod = one.clone();
        for n in 1..=max_n {
            let factor = g.twist_capped(n as i32, w)?.eval(&t0, &z0);
            if (&factor - &one).truncate(w).is_zero() {
                return Ok(prod.truncate(self.prec));
            }
            prod = (&prod * &factor).truncate(w);
        }
        Err(Error::PrecisionExhausted(format!("Coleman product did not stabilize within {max_n} twists")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffarith::{parse_poly, parse_rational};
    use crate::gammaeval::pi_monomial;

    fn setup(q: u32, f: &str, prec: i64) -> ColemanCtx {
        let fq = Fq::new(q).unwrap();
        let lv = Level::new(&parse_poly(f, &fq).unwrap()).unwrap();
        ColemanCtx::new(&fq, prec, &lv).unwrap()
    }

    fn p(s: &str, c: &ColemanCtx) -> Poly {
        parse_poly(s, c.fq()).unwrap()
    }

    fn r(s: &str, c: &ColemanCtx) -> RationalK {
        parse_rational(s, c.fq()).unwrap()
    }

    #[test]
    fn dual_families() {
        let c = setup(3, "T", 40);
        assert_eq!(c.dual(), &FDual { a: vec![p("1", &c)], b: vec![p("1", &c)] });
        let c = setup(3, "T^2", 40);
        assert_eq!(c.dual(), &FDual { a: vec![p("1", &c), p("T", &c)], b: vec![p("T", &c), p("1", &c)] });
        for f in ["T^2-T", "T^3+T+1", "T^4+2T+1"] {
            let c = setup(3, f, 40);
            let m = pairing_matrix(c.level().modulus(), &c.dual().a, &c.dual().b);
            for (i, row) in m.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    assert_eq!(e, if i == j { Fe::ONE } else { Fe::ZERO });
                }
            }
        }
    }

    #[test]
    fn gram_is_unitriangular() {
        // Res(T^{i + d - j - 1} / f) vanishes above the diagonal and is 1 on it
        let fq = Fq::new(3).unwrap();
        for f in ["T", "T^2+1", "T^3-T+2", "T^4+T^3+2"] {
            let f = parse_poly(f, &fq).unwrap();
            let d = f.degree().unwrap();
            for i in 0..d {
                for j in 0..d {
                    let e = res_over(&f, &Poly::monomial(&fq, Fe::ONE, i + d - j - 1));
                    if j == i {
                        assert_eq!(e, Fe::ONE);
                    } else if j > i {
                        assert_eq!(e, Fe::ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn independent_of_dual_family_and_of_x_mod_a() {
        let c = setup(3, "T^2", 120);
        let x = r("1/T^2", &c);
        let g = c.coleman_g(&x).unwrap();
        let other = f_dual_for(c.level().modulus(), vec![p("T+1", &c), p("2T+1", &c)]).unwrap();
        let g2 = c.coleman_g_with(&x, &other).unwrap();
        assert!(g.residual(&g2) >= c.working_prec() - 2);
        let g3 = c.coleman_g(&r("1/T^2 + T^4 + 1", &c)).unwrap();
        assert!(g.residual(&g3) >= c.working_prec() - 2);
        assert!(g.deg_z() < crate::carlitz::euler_phi(c.level().modulus()) as usize);
        assert!(c.coleman_g(&r("T", &c)).is_err());
    }

    #[test]
    fn squared_symbol_is_squared_function() {
        let c = setup(3, "T^2", 100);
        let x = r("1/T^2", &c);
        let g = c.coleman_g(&x).unwrap();
        let two = CycleElement::symbol(c.level(), &x).unwrap().scale(2);
        let g2 = c.coleman_g_cycle(&two).unwrap();
        assert!(g2.residual(&g.mul(&g, c.cyclo()).unwrap()) >= c.working_prec() - 2);
        let neg = CycleElement::symbol(c.level(), &x).unwrap().scale(-1);
        assert!(matches!(c.coleman_g_cycle(&neg), Err(Error::NotEffective)));
        assert!(matches!(c.coleman_g_cycle(&CycleElement::symbol_at(c.level(), 0)), Err(Error::ZeroWeight)));
    }

    #[test]
    fn zeros_at_bracket_slots() {
        let c = setup(3, "T^2", 150);
        let x = r("1/T^2", &c);
        assert!(c.verify_zero(&x, &p("1", &c), 1).unwrap() >= 150);
        let slots = c.zero_slots(&x);
        assert_eq!(slots.len() as u64, crate::carlitz::euler_phi(c.level().modulus()) / 2);
        for (u, n) in slots {
            assert!(c.verify_zero(&x, &c.level().residue(u), n).unwrap() >= 150);
        }
        assert!(matches!(c.verify_zero(&x, &p("2", &c), 1), Err(Error::BracketPrecondition { .. })));
    }

    #[test]
    fn interpolation() {
        for f in ["T^2", "T^2-T"] {
            let c = setup(3, f, 150);
            for &u in c.level().units() {
                let a = c.level().residue(u);
                for n in 0..=3 {
                    assert!(c.interp_sum_i(&a, n).unwrap() >= 150, "f={f} a={a} N={n}");
                }
                if a.is_monic() {
                    assert!(c.interp_sum_ii(&a).unwrap() >= 150, "f={f} a={a}");
                }
            }
        }
    }

    #[test]
    fn coleman_interpolation_values() {
        let c = setup(3, "T^2", 150);
        let x = r("1/T^2", &c);
        for n in 0..=5 {
            assert!(c.verify_interp(&x, &p("1", &c), n).unwrap() >= 150, "N={n}");
            assert!(c.verify_interp(&x, &p("T+1", &c), n).unwrap() >= 150, "N={n}");
        }
    }

    #[test]
    fn product_recovers_pi() {
        let c = setup(3, "T^2", 120);
        let ctx = CarlitzCtx::new(c.fq(), 120);
        let s = CycleElement::symbol(c.level(), &r("1/T^2", &c)).unwrap();
        for a in ["1", "T+1"] {
            let a = p(a, &c);
            let prod = c.pi_from_product(&s, &a, DEFAULT_MAX_TWIST).unwrap();
            let direct = pi_monomial(&ctx, &s.star(&a).unwrap()).unwrap().inv_prec(120).unwrap();
            assert!(prod.residual(&direct) >= 118);
        }
        assert!(matches!(c.pi_from_product(&CycleElement::zero(c.level()), &p("1", &c), 12), Err(Error::ZeroWeight)));
    }
}
