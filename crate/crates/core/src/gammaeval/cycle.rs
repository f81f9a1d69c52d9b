//! Levels f and the free abelian group A_f on symbols [x], x in f^{-1}A/A.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ffarith::{Fq, Poly, RationalK};

/// Largest level degree accepted by default.
pub const DEFAULT_DEG_CAP: usize = 6;

/// A monic conductor f with its residues a mod f indexed by [`Poly::index`].
#[derive(Debug)]
pub struct Level {
    f: Poly,
    deg: usize,
    size: usize,
    units: Vec<usize>,
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl Level {
    pub fn new(f: &Poly) -> Result<Arc<Level>> {
        Level::with_cap(f, DEFAULT_DEG_CAP)
    }

    pub fn with_cap(f: &Poly, cap: usize) -> Result<Arc<Level>> {
        let deg = match f.degree() {
            Some(d) if d > 0 && f.is_monic() => d,
            _ => return Err(Error::NotMonic(f.to_string())),
        };
        if deg > cap {
            return Err(Error::DegreeCap { deg, cap });
        }
        let size = (f.field().q() as usize).pow(deg as u32);
        let units = (0..size).filter(|&i| Poly::from_index(f.field(), i as u64).gcd(f).is_one()).collect();
        Ok(Arc::new(Level { f: f.clone(), deg, size, units }))
    }

    pub fn modulus(&self) -> &Poly {
        &self.f
    }

    pub fn field(&self) -> &Fq {
        self.f.field()
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// q^{deg f}, the rank of A_f.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Indices of the residues prime to f.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn residue(&self, i: usize) -> Poly {
        Poly::from_index(self.field(), i as u64)
    }

    pub fn index_of(&self, a: &Poly) -> usize {
        a.rem(&self.f).unwrap().index() as usize
    }

    /// The reduced representative a/f with deg a < deg f.
    pub fn fraction(&self, i: usize) -> RationalK {
        RationalK::new(self.residue(i), self.f.clone()).unwrap()
    }

    /// Index of x mod A; x must lie in f^{-1}A.
    pub fn class_of(&self, x: &RationalK) -> Result<usize> {
        let fx = x.mul_poly(&self.f);
        match fx.as_poly() {
            Some(a) => Ok(self.index_of(a)),
            None => Err(Error::InvalidArgument(format!("{x} is not in f^-1 A for f = {}", self.f))),
        }
    }

    /// Index of a * residue(i) mod f.
    pub fn mul_index(&self, a: &Poly, i: usize) -> usize {
        self.index_of(&(a * &self.residue(i)))
    }
}

/// An element sum m_x [x] of A_f, stored densely by residue index.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleElement {
    level: Arc<Level>,
    mult: Vec<i64>,
}

impl CycleElement {
    pub fn zero(level: &Arc<Level>) -> CycleElement {
        CycleElement { level: level.clone(), mult: vec![0; level.size()] }
    }

    pub fn from_mults(level: &Arc<Level>, mult: Vec<i64>) -> CycleElement {
        assert_eq!(mult.len(), level.size(), "multiplicity vector length");
        CycleElement { level: level.clone(), mult }
    }

    /// The symbol [x] for x in f^{-1}A.
    pub fn symbol(level: &Arc<Level>, x: &RationalK) -> Result<CycleElement> {
        let i = level.class_of(x)?;
        Ok(CycleElement::symbol_at(level, i))
    }

    pub fn symbol_at(level: &Arc<Level>, i: usize) -> CycleElement {
        let mut c = CycleElement::zero(level);
        c.mult[i] = 1;
        c
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn mults(&self) -> &[i64] {
        &self.mult
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// (index, multiplicity) pairs with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.mult.iter().enumerate().filter(|(_, m)| **m != 0).map(|(i, &m)| (i, m))
    }

    pub fn is_effective(&self) -> bool {
        self.mult.iter().all(|&m| m >= 0)
    }

    /// weight = (1/(q-1)) * sum of the multiplicities of the nonzero classes.
    pub fn weight(&self) -> Ratio<i64> {
        Ratio::new(self.weight_numerator(), self.level.field().q() as i64 - 1)
    }

    /// (q-1) * weight, an integer.
    pub fn weight_numerator(&self) -> i64 {
        self.mult.iter().skip(1).sum()
    }

    fn check_level(&self, o: &CycleElement) -> Result<()> {
        if self.level == o.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    pub fn try_add(&self, o: &CycleElement) -> Result<CycleElement> {
        self.check_level(o)?;
        Ok(CycleElement { level: self.level.clone(), mult: self.mult.iter().zip(&o.mult).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, o: &CycleElement) -> Result<CycleElement> {
        self.try_add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> CycleElement {
        CycleElement { level: self.level.clone(), mult: self.mult.iter().map(|m| m * k).collect() }
    }

    /// a * [x] = [a x], extended linearly; a must be a unit mod f.
    pub fn star(&self, a: &Poly) -> Result<CycleElement> {
        if !a.gcd(self.level.modulus()).is_one() {
            return Err(Error::NotCoprime(a.to_string()));
        }
        let mut mult = vec![0; self.level.size()];
        for (i, m) in self.support() {
            mult[self.level.mul_index(a, i)] += m;
        }
        Ok(CycleElement { level: self.level.clone(), mult })
    }
}

impl fmt::Display for CycleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .map(|(i, m)| {
                let sym = format!("[{}]", self.level.fraction(i));
                if m == 1 {
                    sym
                } else {
                    format!("{m}{sym}")
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
