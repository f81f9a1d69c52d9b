//! Diamond brackets <x>_N and <x>, their linear extension to A_f, and the relation ~_f.
//!
//! <x>_N = 1 exactly when the fractional part of x agrees with T^{-N-1}
//! to better than |T|^{-N-1}; the agreement may be exact.

use crate::error::{Error, Result};
use crate::ffarith::{Fe, Poly, RationalK};
use crate::gammaeval::{CycleElement, Level};

/// T^{-k} as an element of k.
fn t_neg_power(x: &RationalK, k: usize) -> RationalK {
    let fq = x.field();
    RationalK::new(Poly::one(fq), Poly::monomial(fq, Fe::ONE, k)).expect("T^k is nonzero")
}

/// <x>_N.
pub fn bracket_n(x: &RationalK, n: u32) -> u8 {
    let k = n as usize + 1;
    let y = (x - &t_neg_power(x, k)).frac();
    match y.degree() {
        None => 1,
        Some(d) => u8::from(d < -(k as i64)),
    }
}

/// <x> = sum over N of <x>_N; only N = -deg(frac x) - 1 can contribute.
pub fn bracket(x: &RationalK) -> u8 {
    let fr = x.frac();
    match fr.degree() {
        Some(d) if d < 0 => bracket_n(&fr, (-d - 1) as u32),
        _ => 0,
    }
}

/// <[x]> for each residue class of a level, indexed like [`Level::residue`].
pub fn bracket_table(level: &Level) -> Vec<i64> {
    (0..level.size()).map(|i| i64::from(bracket(&level.fraction(i)))).collect()
}

/// The Z-linear extension <a> = sum m_x <x>.
pub fn bracket_of_cycle(a: &CycleElement) -> i64 {
    let lv = a.level();
    a.support().map(|(i, m)| m * i64::from(bracket(&lv.fraction(i)))).sum()
}

/// <u * a> for every unit u mod f, in the order of [`Level::units`].
pub fn bracket_vector(a: &CycleElement) -> Vec<i64> {
    let lv = a.level();
    let table = bracket_table(lv);
    lv.units()
        .iter()
        .map(|&u| {
            let unit = lv.residue(u);
            a.support().map(|(i, m)| m * table[lv.mul_index(&unit, i)]).sum()
        })
        .collect()
}

/// a ~_f b: equal bracket vectors.
pub fn equiv_f(a: &CycleElement, b: &CycleElement) -> Result<bool> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch);
    }
    Ok(bracket_vector(a) == bracket_vector(b))
}
