//! Moore determinants over any commutative F_q-algebra with a q-power map.

use crate::ffarith::{BiPoly, Poly, RationalK};

/// The ring operations a Moore determinant needs.
pub trait FrobeniusRing: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// x^q.
    fn frobenius(&self) -> Self;
}

impl FrobeniusRing for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn frobenius(&self) -> Self {
        Poly::frobenius(self, 1)
    }
}

impl FrobeniusRing for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero(self.field())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn frobenius(&self) -> Self {
        BiPoly::frobenius(self)
    }
}

impl FrobeniusRing for RationalK {
    fn zero_like(&self) -> Self {
        RationalK::zero(self.field())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn frobenius(&self) -> Self {
        RationalK::frobenius(self, 1)
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det<R: FrobeniusRing>(m: &[Vec<R>]) -> R {
    fn minor<R: FrobeniusRing>(m: &[Vec<R>], row: usize, cols: &[usize]) -> R {
        if cols.len() == 1 {
            return m[row][cols[0]].clone();
        }
        let mut acc = m[row][cols[0]].zero_like();
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = m[row][c].mul(&minor(m, row + 1, &rest));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    let cols: Vec<usize> = (0..m.len()).collect();
    minor(m, 0, &cols)
}

/// Moore_q(x_1, ..., x_N) = det_{i,j} x_j^{q^{N-i}}.
///
/// # Panics
/// When `xs` is empty.
pub fn moore_det<R: FrobeniusRing>(xs: &[R]) -> R {
    assert!(!xs.is_empty(), "Moore determinant of an empty family");
    let n = xs.len();
    // powers[k][j] = x_j^{q^k}
    let mut powers = vec![xs.to_vec()];
    for k in 1..n {
        powers.push(powers[k - 1].iter().map(R::frobenius).collect());
    }
    let m: Vec<Vec<R>> = (0..n).map(|i| powers[n - 1 - i].clone()).collect();
    det(&m)
}
