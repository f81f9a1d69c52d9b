//! Truncated power series in t over C_infinity, matrices of them, and
//! convergent infinite products of matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{Fe, Fq, LaurentJson, LaurentNum, Poly, EXACT};

/// `sum_{i <= trunc_t} coeffs[i] t^i`, known modulo t^{trunc_t + 1}.
#[derive(Clone, Debug)]
pub struct TSeries {
    fq: Fq,
    coeffs: Vec<LaurentNum>,
}

impl TSeries {
    pub fn zero(fq: &Fq, trunc_t: usize) -> TSeries {
        TSeries { fq: fq.clone(), coeffs: vec![LaurentNum::exact_zero(fq); trunc_t + 1] }
    }

    pub fn one(fq: &Fq, trunc_t: usize) -> TSeries {
        TSeries::constant(LaurentNum::one(fq), trunc_t)
    }

    pub fn constant(c: LaurentNum, trunc_t: usize) -> TSeries {
        let mut s = TSeries::zero(c.field(), trunc_t);
        s.coeffs[0] = c;
        s
    }

    /// Pads with exact zeros or drops terms past `trunc_t`.
    pub fn from_coeffs(fq: &Fq, mut coeffs: Vec<LaurentNum>, trunc_t: usize) -> TSeries {
        coeffs.resize(trunc_t + 1, LaurentNum::exact_zero(fq));
        TSeries { fq: fq.clone(), coeffs }
    }

    /// A polynomial in t with F_q coefficients.
    pub fn from_t_poly(p: &Poly, trunc_t: usize) -> TSeries {
        let fq = p.field();
        let coeffs = p.coeffs().iter().map(|&c| LaurentNum::from_fe(fq, c)).collect();
        TSeries::from_coeffs(fq, coeffs, trunc_t)
    }

    /// t - x.
    pub fn t_minus(x: &LaurentNum, trunc_t: usize) -> TSeries {
        let fq = x.field();
        TSeries::from_coeffs(fq, vec![-x, LaurentNum::one(fq)], trunc_t)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn trunc_t(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentNum] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &LaurentNum {
        &self.coeffs[i]
    }

    /// Whether every coefficient vanishes to its precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentNum::is_zero)
    }

    /// Smallest coefficient valuation: -(q-1) log_q of the sup norm.
    pub fn sup_val(&self) -> i64 {
        self.coeffs.iter().map(LaurentNum::val).min().unwrap()
    }

    /// Index of the last coefficient not vanishing to precision.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Worst coefficient residual against another series, on common terms.
    pub fn residual(&self, o: &TSeries) -> i64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.residual(b)).min().unwrap()
    }

    pub fn with_trunc(&self, trunc_t: usize) -> TSeries {
        TSeries::from_coeffs(&self.fq, self.coeffs.clone(), trunc_t)
    }

    /// Caps the u-adic precision of every coefficient.
    pub fn truncate_prec(&self, cap: i64) -> TSeries {
        TSeries { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(|c| c.truncate(cap)).collect() }
    }

    pub fn scale(&self, c: &LaurentNum) -> TSeries {
        TSeries { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_fe(&self, c: Fe) -> TSeries {
        TSeries { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// Multiplication by t^k, dropping what falls past the truncation.
    pub fn shift_t(&self, k: usize) -> TSeries {
        let mut coeffs = vec![LaurentNum::exact_zero(&self.fq); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TSeries::from_coeffs(&self.fq, coeffs, self.trunc_t())
    }

    /// Coefficientwise Frobenius twist.
    pub fn twist(&self, n: i32) -> Result<TSeries> {
        self.twist_capped(n, EXACT)
    }

    pub fn twist_capped(&self, n: i32, cap: i64) -> Result<TSeries> {
        let coeffs = self.coeffs.iter().map(|c| c.twist_capped(n, cap)).collect::<Result<_>>()?;
        Ok(TSeries { fq: self.fq.clone(), coeffs })
    }

    /// Value at t0, checked against a tail bound.
    ///
    /// The last retained term must vanish below `target`; the result is
    /// known modulo the worst term precision and that bound.
    pub fn eval(&self, t0: &LaurentNum, target: i64) -> Result<LaurentNum> {
        let mut acc = LaurentNum::exact_zero(&self.fq);
        let mut power = LaurentNum::one(&self.fq);
        let mut last = LaurentNum::exact_zero(&self.fq);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = &power * t0;
            }
            last = c * &power;
            acc = &acc + &last;
        }
        let tail = last.val();
        if tail < target {
            return Err(Error::TailBound { tail, target });
        }
        Ok(acc.truncate(tail))
    }

    /// Multiplicative inverse; the constant term must be a unit to precision.
    pub fn inv(&self) -> Result<TSeries> {
        let n = self.trunc_t();
        let a0i = self.coeffs[0].inv()?;
        let mut b: Vec<LaurentNum> = vec![a0i.clone()];
        for k in 1..=n {
            let mut s = LaurentNum::exact_zero(&self.fq);
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = &s + &(&self.coeffs[j] * &b[k - j]);
                }
            }
            b.push(-&(&s * &a0i));
        }
        Ok(TSeries { fq: self.fq.clone(), coeffs: b })
    }

    pub fn to_json(&self) -> TSeriesJson {
        TSeriesJson { trunc_t: self.trunc_t(), coeffs: self.coeffs.iter().map(LaurentNum::to_json).collect() }
    }

    pub fn from_json(fq: &Fq, j: &TSeriesJson) -> Result<TSeries> {
        let coeffs = j.coeffs.iter().map(|c| LaurentNum::from_json(fq, c)).collect::<Result<_>>()?;
        Ok(TSeries::from_coeffs(fq, coeffs, j.trunc_t))
    }
}

/// Wire form of a [`TSeries`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSeriesJson {
    pub trunc_t: usize,
    pub coeffs: Vec<LaurentJson>,
}

impl std::ops::Add for &TSeries {
    type Output = TSeries;
    fn add(self, o: &TSeries) -> TSeries {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        TSeries { fq: self.fq.clone(), coeffs }
    }
}

impl std::ops::Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, o: &TSeries) -> TSeries {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        TSeries { fq: self.fq.clone(), coeffs }
    }
}

impl std::ops::Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl std::ops::Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, o: &TSeries) -> TSeries {
        let n = self.trunc_t().min(o.trunc_t());
        let mut out = vec![LaurentNum::exact_zero(&self.fq); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() && b.is_exact() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        TSeries { fq: self.fq.clone(), coeffs: out }
    }
}

forward_owned!(Add, add, TSeries);
forward_owned!(Sub, sub, TSeries);
forward_owned!(Mul, mul, TSeries);

/// A rectangular matrix with [`TSeries`] entries, stored row-major.
#[derive(Clone, Debug)]
pub struct TMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TSeries>,
}

impl TMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<TSeries>) -> TMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count");
        TMatrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TSeries) -> TMatrix {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        TMatrix { rows, cols, entries }
    }

    pub fn identity(fq: &Fq, n: usize, trunc_t: usize) -> TMatrix {
        TMatrix::from_fn(n, n, |i, j| if i == j { TSeries::one(fq, trunc_t) } else { TSeries::zero(fq, trunc_t) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TSeries] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&TSeries) -> TSeries) -> TMatrix {
        TMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&TSeries) -> Result<TSeries>) -> Result<TMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<_>>()?;
        Ok(TMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn twist_capped(&self, n: i32, cap: i64) -> Result<TMatrix> {
        self.try_map(|e| e.twist_capped(n, cap))
    }

    pub fn twist(&self, n: i32) -> Result<TMatrix> {
        self.twist_capped(n, EXACT)
    }

    pub fn truncate_prec(&self, cap: i64) -> TMatrix {
        self.map(|e| e.truncate_prec(cap))
    }

    pub fn with_trunc(&self, trunc_t: usize) -> TMatrix {
        self.map(|e| e.with_trunc(trunc_t))
    }

    pub fn sup_val(&self) -> i64 {
        self.entries.iter().map(TSeries::sup_val).min().unwrap()
    }

    pub fn residual(&self, o: &TMatrix) -> i64 {
        self.entries.iter().zip(&o.entries).map(|(a, b)| a.residual(b)).min().unwrap()
    }

    /// Sup-norm valuation of `self - 1`.
    pub fn defect_val(&self) -> i64 {
        let fq = self.entries[0].field();
        let id = TMatrix::identity(fq, self.rows, self.entries[0].trunc_t());
        (self - &id).sup_val()
    }

    /// Entrywise value at t0 under the tail-bound check of [`TSeries::eval`].
    pub fn eval(&self, t0: &LaurentNum, target: i64) -> Result<LMatrix> {
        let entries = self.entries.iter().map(|e| e.eval(t0, target)).collect::<Result<_>>()?;
        Ok(LMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Determinant by cofactor expansion (square matrices of small size).
    pub fn det(&self) -> TSeries {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.minor_det(0, &idx)
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> TSeries {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let fq = self.entries[0].field();
        let mut acc = TSeries::zero(fq, self.entries[0].trunc_t());
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = self.get(row, c) * &self.minor_det(row + 1, &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}

impl std::ops::Mul for &TMatrix {
    type Output = TMatrix;
    fn mul(self, o: &TMatrix) -> TMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let fq = self.entries[0].field();
        let trunc = self.entries[0].trunc_t().min(o.entries[0].trunc_t());
        TMatrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(TSeries::zero(fq, trunc), |acc, k| &acc + &(self.get(i, k) * o.get(k, j)))
        })
    }
}

impl std::ops::Sub for &TMatrix {
    type Output = TMatrix;
    fn sub(self, o: &TMatrix) -> TMatrix {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        TMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

impl std::ops::Add for &TMatrix {
    type Output = TMatrix;
    fn add(self, o: &TMatrix) -> TMatrix {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        TMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

/// Ordered product `factor(first) * factor(first+1) * ...` of matrices tending to 1.
///
/// Each factor must differ from the identity by entries of positive
/// valuation that grows strictly from one factor to the next. The product
/// stops once a factor equals the identity to working precision, and
/// returns it together with the number of factors used.
pub fn product_convergent(
    first: usize,
    budget: usize,
    mut factor: impl FnMut(usize) -> Result<TMatrix>,
) -> Result<(TMatrix, usize)> {
    let mut acc: Option<TMatrix> = None;
    let mut last_defect = i64::MIN;
    for n in first..first + budget {
        let f = factor(n)?;
        let d = f.defect_val();
        if d <= 0 || d <= last_defect {
            return Err(Error::NonContraction(n));
        }
        let id_to_precision = (&f - &TMatrix::identity(f.entries[0].field(), f.rows, f.entries[0].trunc_t())).entries.iter().all(TSeries::is_zero);
        if id_to_precision {
            let p = acc.unwrap_or(f);
            return Ok((p, n - first));
        }
        last_defect = d;
        acc = Some(match acc {
            None => f,
            Some(p) => &p * &f,
        });
    }
    Err(Error::NonContraction(first + budget))
}

/// A dense matrix over C_infinity.
#[derive(Clone, Debug)]
pub struct LMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentNum>,
}

impl LMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentNum) -> LMatrix {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        LMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentNum {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> LMatrix {
        LMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Inverse by Gauss-Jordan elimination, pivoting on the smallest valuation.
    pub fn inverse(&self) -> Result<LMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let fq = self.entries[0].field().clone();
        let mut a: Vec<Vec<LaurentNum>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<LaurentNum>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { LaurentNum::one(&fq) } else { LaurentNum::exact_zero(&fq) }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n).filter(|&r| !a[r][col].is_zero()).min_by_key(|&r| a[r][col].val()).ok_or(Error::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let pinv = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &pinv;
                inv[col][j] = &inv[col][j] * &pinv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let m = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&m * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&m * &inv[col][j]);
                }
            }
        }
        Ok(LMatrix { rows: n, cols: n, entries: inv.into_iter().flatten().collect() })
    }
}

impl std::ops::Mul for &LMatrix {
    type Output = LMatrix;
    fn mul(self, o: &LMatrix) -> LMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let fq = self.entries[0].field().clone();
        LMatrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(LaurentNum::exact_zero(&fq), |acc, k| &acc + &(self.get(i, k) * o.get(k, j)))
        })
    }
}
