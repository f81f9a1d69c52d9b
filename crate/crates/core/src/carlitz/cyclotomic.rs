//! Carlitz cyclotomic polynomials C_f*(t, z): C_f divided by C_d* for every proper monic divisor d.

use std::collections::BTreeMap;

use super::division::div_poly;
use crate::error::{Error, Result};
use crate::ffarith::{BiPoly, Poly};

/// C_f*(t, z), monic in z of degree phi(f).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloPoly {
    pub level: Poly,
    pub poly: BiPoly,
}

impl CycloPoly {
    pub fn deg_z(&self) -> usize {
        self.poly.deg_z().unwrap_or(0)
    }
}

/// #(A/f)^x.
pub fn euler_phi(f: &Poly) -> u64 {
    let q = f.field().q() as u64;
    f.factor()
        .iter()
        .map(|(g, e)| {
            let d = g.degree().unwrap() as u32;
            q.pow(d * e) - q.pow(d * (e - 1))
        })
        .product()
}

pub fn cyclotomic(f: &Poly) -> Result<CycloPoly> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let mut done: BTreeMap<u64, BiPoly> = BTreeMap::new();
    for d in f.monic_divisors() {
        let mut quo = div_poly(&d).expand();
        for (k, other) in &done {
            let e = Poly::from_index(f.field(), *k);
            if e != d && e.divides(&d) {
                quo = quo.div_exact(other)?;
            }
        }
        done.insert(d.index(), quo);
    }
    let poly = done.remove(&f.index()).expect("f divides itself");
    Ok(CycloPoly { level: f.clone(), poly })
}
