//! The t-motive attached to a Coleman function: the matrix Phi_a of
//! multiplication by g_a on the basis 1, z, ..., z^{l-1} of F_q[t, z]/C_f*,
//! its rigid analytic trivialization Psi_a with Psi_a^{(-1)} = Phi_a Psi_a,
//! and the check of linear relations among the entries of a period vector.

use crate::carlitz::{CarlitzCtx, CycloPoly};
use crate::coleman::{ColemanCtx, ColemanFn};
use crate::error::{Error, Result};
use crate::ffarith::{Fq, LaurentNum, Poly};
use crate::gammaeval::{pi_monomial, CycleElement};
use crate::tseries::{product_convergent, LMatrix, TMatrix, TSeries};

/// Upper bound on the number of twisted factors in the product for Psi.
const PSI_BUDGET: usize = 64;

/// The matrix of multiplication by z on F_q[t][z]/C_f*, as polynomials in t.
pub fn mult_matrix_z(cyclo: &CycloPoly) -> Vec<Vec<Poly>> {
    let fq = cyclo.poly.field();
    let ell = cyclo.deg_z();
    let rows = cyclo.poly.rows();
    (0..ell)
        .map(|j| {
            (0..ell)
                .map(|k| {
                    if j + 1 < ell {
                        if k == j + 1 { Poly::one(fq) } else { Poly::zero(fq) }
                    } else {
                        -&rows[k]
                    }
                })
                .collect()
        })
        .collect()
}

fn fn_to_row(h: &ColemanFn, ell: usize, trunc_t: usize) -> Result<Vec<TSeries>> {
    let fq = h.level().field();
    if h.deg_t() > trunc_t {
        return Err(Error::CoefficientBound);
    }
    Ok((0..ell).map(|k| TSeries::from_coeffs(fq, h.rows().get(k).cloned().unwrap_or_default(), trunc_t)).collect())
}

/// Phi_a: row j holds g_a z^j reduced modulo C_f*.
///
/// Every coefficient of g_a - 1 must lie in the open unit disc, so that the
/// twisted matrices tend to the identity.
pub fn phi_matrix(cc: &ColemanCtx, a: &CycleElement, trunc_t: usize) -> Result<TMatrix> {
    let g = cc.coleman_g_cycle(a)?;
    for (k, r) in g.rows().iter().enumerate() {
        for (j, c) in r.iter().enumerate() {
            let shifted = if k == 0 && j == 0 { c - &LaurentNum::one(c.field()) } else { c.clone() };
            if !shifted.is_zero() && shifted.val() < 1 {
                return Err(Error::CoefficientBound);
            }
        }
    }
    let ell = cc.cyclo().deg_z();
    let mut entries = Vec::with_capacity(ell * ell);
    for j in 0..ell {
        let h = g.mul(&ColemanFn::z_power(cc.level(), j), cc.cyclo())?;
        entries.extend(fn_to_row(&h, ell, trunc_t)?);
    }
    Ok(TMatrix::from_entries(ell, ell, entries))
}

/// Phi_a^{(N)}.
pub fn phi_twist(cc: &ColemanCtx, a: &CycleElement, n: i32, trunc_t: usize) -> Result<TMatrix> {
    let phi = phi_matrix(cc, a, trunc_t)?;
    if n == 0 {
        return Ok(phi);
    }
    phi.twist_capped(n, cc.working_prec())
}

/// Coefficient cap for Psi: Psi^{(-1)} must still be known to the working
/// precision, and evaluation at t = T loses (q - 1) digits per power of t.
pub fn psi_cap(cc: &ColemanCtx, trunc_t: usize) -> i64 {
    let q = cc.level().field().q() as i64;
    q * cc.working_prec() + (q - 1) * trunc_t as i64
}

/// Psi = Phi^{(1)} Phi^{(2)} ..., with coefficients capped at u^cap.
pub fn psi_matrix(phi: &TMatrix, cap: i64) -> Result<TMatrix> {
    let (psi, _) = product_convergent(1, PSI_BUDGET, |n| phi.twist_capped(n as i32, cap))?;
    Ok(psi)
}

/// Valuation of Psi^{(-1)} - Phi Psi, read to u^prec.
pub fn fe_residual(phi: &TMatrix, psi: &TMatrix, prec: i64) -> Result<i64> {
    let lhs = psi.twist(-1)?;
    let rhs = phi * psi;
    Ok((&lhs - &rhs).truncate_prec(prec).sup_val())
}

/// Result of comparing Psi_a(T), conjugated by the torsion Vandermonde
/// matrix, with the Pi-monomials of the star translates of a.
#[derive(Clone, Debug)]
pub struct Specialization {
    /// Units u_i mod f, in the order of the diagonal.
    pub units: Vec<Poly>,
    pub diagonal: Vec<LaurentNum>,
    /// Pi(u_i * a)^{-1}.
    pub expected: Vec<LaurentNum>,
    pub diag_residuals: Vec<i64>,
    /// Smallest valuation among the off-diagonal entries.
    pub offdiag_val: i64,
    /// Agreement of the first diagonal entry with the product of twisted Coleman values.
    pub product_residual: i64,
}

impl Specialization {
    pub fn worst(&self) -> i64 {
        self.diag_residuals.iter().copied().chain([self.offdiag_val, self.product_residual]).min().unwrap()
    }
}

/// Evaluates Psi_a at t = T and diagonalizes it with V[k][i] = e(u_i/f)^k.
pub fn specialize_check(cc: &ColemanCtx, a: &CycleElement, trunc_t: usize) -> Result<Specialization> {
    let fq = cc.level().field().clone();
    let prec = cc.prec();
    let cap = psi_cap(cc, trunc_t);
    let phi = phi_matrix(cc, a, trunc_t)?;
    let psi = psi_matrix(&phi, cap)?;
    let at_t = psi.eval(&LaurentNum::t_big(&fq), prec)?;

    let lv = cc.level();
    let units: Vec<Poly> = lv.units().iter().map(|&u| lv.residue(u)).collect();
    let lambdas = units.iter().map(|u| cc.torsion(u)).collect::<Result<Vec<_>>>()?;
    let ell = units.len();
    let v = LMatrix::from_fn(ell, ell, |k, i| lambdas[i].pow(k as u64));
    let d = &(&v.inverse()? * &at_t) * &v;

    let pctx = CarlitzCtx::new(&fq, prec);
    let mut diagonal = Vec::with_capacity(ell);
    let mut expected = Vec::with_capacity(ell);
    let mut diag_residuals = Vec::with_capacity(ell);
    for (i, u) in units.iter().enumerate() {
        let pi = pi_monomial(&pctx, &a.star(u)?)?;
        let want = pi.inv_prec(prec)?.truncate(prec);
        let got = d.get(i, i).truncate(prec);
        diag_residuals.push((&got - &want).truncate(prec).val());
        diagonal.push(got);
        expected.push(want);
    }
    let mut offdiag_val = prec;
    for i in 0..ell {
        for j in 0..ell {
            if i != j {
                offdiag_val = offdiag_val.min(d.get(i, j).truncate(prec).val());
            }
        }
    }
    let product = cc.pi_from_product(a, &units[0], crate::coleman::DEFAULT_MAX_TWIST)?;
    let product_residual = (&product - &diagonal[0]).truncate(prec).val();
    Ok(Specialization { units, diagonal, expected, diag_residuals, offdiag_val, product_residual })
}

/// One synthetic division by t - x; returns the quotient when the remainder
/// vanishes to u^tol.
fn divide_out(c: &[LaurentNum], x: &LaurentNum, tol: i64) -> Option<Vec<LaurentNum>> {
    let n = c.len() - 1;
    let mut b = vec![LaurentNum::exact_zero(x.field()); n];
    b[n - 1] = c[n].clone();
    for k in (1..n).rev() {
        b[k - 1] = &c[k] + &(x * &b[k]);
    }
    let rem = &c[0] + &(x * &b[0]);
    (rem.val() >= tol).then_some(b)
}

fn coeffs_to_degree(det: &TSeries) -> Result<Vec<LaurentNum>> {
    let top = det.degree().ok_or(Error::DeterminantShape)?;
    Ok(det.coeffs()[..=top].to_vec())
}

/// Writes det as c (t - T)^s with c a constant, checking each division by t - T
/// to u^tol and that the cofactor has no t-dependence to u^tol.
pub fn det_shape(det: &TSeries, tol: i64) -> Result<(usize, LaurentNum)> {
    let t = LaurentNum::t_big(det.field());
    let mut c = coeffs_to_degree(det)?;
    let mut s = 0;
    while c.len() > 1 {
        let Some(b) = divide_out(&c, &t, tol) else { break };
        c = b;
        s += 1;
    }
    if c[1..].iter().any(|x| x.val() < tol) || c[0].is_zero() {
        return Err(Error::DeterminantShape);
    }
    Ok((s, c[0].clone()))
}

/// Multiplicities m_N of the zeros t = T^{q^N} of det, for N = 0, 1, ...,
/// when det = c prod_N (t - T^{q^N})^{m_N}; otherwise `DeterminantShape`.
pub fn det_zero_profile(det: &TSeries, tol: i64) -> Result<Vec<usize>> {
    let q = det.field().q() as u64;
    let mut c = coeffs_to_degree(det)?;
    let mut profile = Vec::new();
    let mut root = LaurentNum::t_big(det.field());
    while c.len() > 1 {
        let mut m = 0;
        while c.len() > 1 {
            let Some(b) = divide_out(&c, &root, tol) else { break };
            c = b;
            m += 1;
        }
        profile.push(m);
        if c.len() > 1 && root.val() * (c.len() as i64) < -tol {
            // no further T^{q^N} can be a root to this precision
            return Err(Error::DeterminantShape);
        }
        root = root.pow(q);
    }
    if c[0].is_zero() {
        return Err(Error::DeterminantShape);
    }
    while profile.last() == Some(&0) {
        profile.pop();
    }
    Ok(profile)
}

/// Outcome of [`verify_relation`].
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub fe_residual: i64,
    pub det_exponent: usize,
    pub det_constant: LaurentNum,
    /// Valuation of P(T) - rho.
    pub specialization_residual: i64,
    /// Valuation of P psi.
    pub annihilation_residual: i64,
    pub accepted: bool,
}

/// Checks that psi solves psi^{(-1)} = Phi psi with det Phi of the form c (t - T)^s,
/// and then whether the F_q[t]-row P kills psi and specializes to rho at t = T.
pub fn verify_relation(phi: &TMatrix, psi: &[TSeries], p: &[Poly], rho: &[LaurentNum], tol: i64) -> Result<RelationReport> {
    let n = phi.rows();
    if phi.cols() != n || psi.len() != n || p.len() != n || rho.len() != n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let fq: Fq = phi.get(0, 0).field().clone();
    let trunc = psi[0].trunc_t();
    let col = TMatrix::from_entries(n, 1, psi.to_vec());
    let fe = (&col.twist(-1)? - &(phi * &col)).truncate_prec(tol).sup_val();
    if fe < tol {
        return Err(Error::FunctionalEquation(fe));
    }
    let (s, c) = det_shape(&phi.det(), tol)?;

    let t = LaurentNum::t_big(&fq);
    let mut at_t_res = tol;
    let mut ann = TSeries::zero(&fq, trunc);
    for ((pi, r), x) in p.iter().zip(rho).zip(psi) {
        let at_t = crate::carlitz::poly_at(pi, &t);
        at_t_res = at_t_res.min((&at_t - r).truncate(tol).val());
        ann = &ann + &(&TSeries::from_t_poly(pi, trunc) * x);
    }
    let ann_res = ann.truncate_prec(tol).sup_val();
    Ok(RelationReport {
        fe_residual: fe,
        det_exponent: s,
        det_constant: c,
        specialization_residual: at_t_res,
        annihilation_residual: ann_res,
        accepted: at_t_res >= tol && ann_res >= tol,
    })
}

/// Z with t evaluated at T, as a matrix over C_infinity.
pub fn z_at_t(cyclo: &CycloPoly) -> LMatrix {
    let z = mult_matrix_z(cyclo);
    let t = LaurentNum::t_big(cyclo.poly.field());
    LMatrix::from_fn(z.len(), z.len(), |i, j| crate::carlitz::poly_at(&z[i][j], &t))
}
