//! Polynomials in z with coefficients in F_q[t].

use std::fmt;

use super::field::{Fe, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `sum_j rows[j](t) z^j`, without trailing zero rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    fq: Fq,
    rows: Vec<Poly>,
}

impl BiPoly {
    pub fn from_rows(fq: &Fq, mut rows: Vec<Poly>) -> BiPoly {
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        BiPoly { fq: fq.clone(), rows }
    }

    pub fn zero(fq: &Fq) -> BiPoly {
        BiPoly { fq: fq.clone(), rows: Vec::new() }
    }

    /// A polynomial in t alone.
    pub fn constant(c: Poly) -> BiPoly {
        let fq = c.field().clone();
        BiPoly::from_rows(&fq, vec![c])
    }

    /// c(t) z^n.
    pub fn monomial(c: Poly, n: usize) -> BiPoly {
        let fq = c.field().clone();
        let mut rows = vec![Poly::zero(&fq); n];
        rows.push(c);
        BiPoly::from_rows(&fq, rows)
    }

    pub fn z(fq: &Fq) -> BiPoly {
        BiPoly::monomial(Poly::one(fq), 1)
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> Poly {
        self.rows.get(j).cloned().unwrap_or_else(|| Poly::zero(&self.fq))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Degree in z.
    pub fn deg_z(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Largest t-degree among the coefficients.
    pub fn deg_t(&self) -> Option<usize> {
        self.rows.iter().filter_map(Poly::degree).max()
    }

    pub fn is_monic_in_z(&self) -> bool {
        self.rows.last().is_some_and(Poly::is_one)
    }

    pub fn scale(&self, c: &Poly) -> BiPoly {
        BiPoly::from_rows(&self.fq, self.rows.iter().map(|r| r * c).collect())
    }

    /// Division by a divisor that is monic in z.
    pub fn div_rem(&self, d: &BiPoly) -> Result<(BiPoly, BiPoly)> {
        if !d.is_monic_in_z() {
            return Err(Error::InvalidArgument("divisor must be monic in z".into()));
        }
        let dd = d.rows.len() - 1;
        let mut r = self.rows.clone();
        if r.len() <= dd {
            return Ok((BiPoly::zero(&self.fq), self.clone()));
        }
        let mut quo = vec![Poly::zero(&self.fq); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let lead = std::mem::replace(&mut r[k + dd], Poly::zero(&self.fq));
            if lead.is_zero() {
                continue;
            }
            for (i, dc) in d.rows[..dd].iter().enumerate() {
                r[k + i] = &r[k + i] - &(&lead * dc);
            }
            quo[k] = lead;
        }
        r.truncate(dd);
        Ok((BiPoly::from_rows(&self.fq, quo), BiPoly::from_rows(&self.fq, r)))
    }

    pub fn div_exact(&self, d: &BiPoly) -> Result<BiPoly> {
        let (quo, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(quo)
        } else {
            Err(Error::InvalidArgument("bivariate division is not exact".into()))
        }
    }

    /// Evaluation at t = t0, z = z0 in F_q.
    pub fn eval_fe(&self, t0: Fe, z0: Fe) -> Fe {
        self.rows.iter().rev().fold(Fe::ZERO, |acc, r| self.fq.add(self.fq.mul(acc, z0), r.eval(t0)))
    }

    /// The q-th power: t -> t^q on coefficients and z^j -> z^{jq}.
    pub fn frobenius(&self) -> BiPoly {
        let q = self.fq.q() as usize;
        let mut rows = vec![Poly::zero(&self.fq); self.rows.len().saturating_sub(1) * q + 1];
        for (j, r) in self.rows.iter().enumerate() {
            rows[j * q] = r.frobenius(1);
        }
        BiPoly::from_rows(&self.fq, rows)
    }
}

impl fmt::Display for BiPoly {
    /// Terms `(c(t))*z^j` in increasing j; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, r)| format!("({})*z^{j}", r.display_with("t")))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[{self}]")
    }
}

impl std::ops::Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::from_rows(&self.fq, (0..n).map(|j| &self.row(j) + &o.row(j)).collect())
    }
}

impl std::ops::Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::from_rows(&self.fq, (0..n).map(|j| &self.row(j) - &o.row(j)).collect())
    }
}

impl std::ops::Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero(&self.fq);
        }
        let mut rows = vec![Poly::zero(&self.fq); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j] = &rows[i + j] + &(a * b);
                }
            }
        }
        BiPoly::from_rows(&self.fq, rows)
    }
}

forward_owned!(Add, add, BiPoly);
forward_owned!(Sub, sub, BiPoly);
forward_owned!(Mul, mul, BiPoly);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_by_monic_in_z() {
        let fq = Fq::new(3).unwrap();
        let t = Poly::var(&fq);
        // (z^2 + t)(z + t^2) + (z + 1)
        let a = &BiPoly::monomial(Poly::one(&fq), 2) + &BiPoly::constant(t.clone());
        let b = &BiPoly::z(&fq) + &BiPoly::constant(&t * &t);
        let r = &BiPoly::z(&fq) + &BiPoly::constant(Poly::one(&fq));
        let n = &(&a * &b) + &r;
        let (quo, rem) = n.div_rem(&a).unwrap();
        assert_eq!(quo, b);
        assert_eq!(rem, r);
        assert!(n.div_exact(&a).is_err());
    }
}
