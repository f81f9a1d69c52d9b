//! The subgroups D_f ⊆ R_f of A_f, the weight-zero saturation R~_f, quotient
//! ranks, and the ~_f-based dependence decision with lattice witnesses.

pub mod lattice;

use std::sync::Arc;

use num_bigint::BigInt;

pub use lattice::{hnf, integer_kernel, snf, IntLattice, IntRow};

use crate::brackets::bracket_vector;
use crate::carlitz::euler_phi;
use crate::error::{Error, Result};
use crate::ffarith::{Poly, RationalK};
use crate::gammaeval::{CycleElement, Level};

/// [x] - sum_{deg a < deg g} [(x+a)/g] for every monic g | f and x in (g/f)A mod A.
pub fn gens_d(level: &Arc<Level>) -> Vec<CycleElement> {
    let f = level.modulus();
    let fq = level.field();
    let mut out = Vec::new();
    for g in f.monic_divisors() {
        let dg = g.degree().unwrap();
        let cof = f.div_exact(&g).expect("g divides f");
        for b in Poly::all_below(fq, level.degree() - dg) {
            // x = g b / f and (x + a)/g = (b + a f/g)/f
            let mut gen = CycleElement::symbol_at(level, level.index_of(&(&g * &b)));
            for a in Poly::all_below(fq, dg) {
                let i = level.index_of(&(&b + &(&a * &cof)));
                gen = gen.try_sub(&CycleElement::symbol_at(level, i)).expect("same level");
            }
            out.push(gen);
        }
    }
    out
}

/// The D_f generators followed by sum_eps [eps x] for every x in f^{-1}A mod A.
pub fn gens_r(level: &Arc<Level>) -> Vec<CycleElement> {
    let fq = level.field();
    let mut out = gens_d(level);
    for i in 0..level.size() {
        let mut gen = CycleElement::zero(level);
        for eps in fq.units() {
            let j = level.mul_index(&Poly::constant(fq, eps), i);
            gen = gen.try_add(&CycleElement::symbol_at(level, j)).expect("same level");
        }
        out.push(gen);
    }
    out
}

/// (q-1) * weight as an integer linear form on A_f.
pub fn weight_form(level: &Level) -> IntRow {
    (0..level.size()).map(|i| BigInt::from(u8::from(i != 0))).collect()
}

fn rows_of(gens: &[CycleElement]) -> Vec<IntRow> {
    gens.iter().map(|g| lattice::to_big(g.mults())).collect()
}

/// R~_f: elements of weight zero with a positive multiple in R_f.
pub fn rtilde(level: &Arc<Level>) -> IntLattice {
    let n = level.size();
    let r = IntLattice::from_rows(n, &rows_of(&gens_r(level)));
    r.saturate_within(&[weight_form(level)])
}

/// nu_f = 1 + (q-2)/(q-1) * #(A/f)^x.
pub fn nu_f(f: &Poly) -> u64 {
    let q = f.field().q() as u64;
    1 + (q - 2) * euler_phi(f) / (q - 1)
}

/// The lattices D_f, R_f and R~_f of one level.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    level: Arc<Level>,
    d: IntLattice,
    r: IntLattice,
    rtilde: IntLattice,
}

impl RelationLattice {
    pub fn new(level: &Arc<Level>) -> RelationLattice {
        let n = level.size();
        let d = IntLattice::from_rows(n, &rows_of(&gens_d(level)));
        let r = IntLattice::from_rows(n, &rows_of(&gens_r(level)));
        let rtilde = r.saturate_within(&[weight_form(level)]);
        RelationLattice { level: level.clone(), d, r, rtilde }
    }

    pub fn level(&self) -> &Arc<Level> {
        &self.level
    }

    pub fn d_lattice(&self) -> &IntLattice {
        &self.d
    }

    pub fn r_lattice(&self) -> &IntLattice {
        &self.r
    }

    pub fn rtilde(&self) -> &IntLattice {
        &self.rtilde
    }

    /// rank of A_f / R~_f.
    pub fn quotient_rank(&self) -> usize {
        self.level.size() - self.rtilde.rank()
    }

    fn check(&self, a: &CycleElement) -> Result<()> {
        if **a.level() == *self.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    /// Coordinates of a in the Hermite basis of R~_f, if a lies there.
    pub fn witness(&self, a: &CycleElement) -> Result<Option<Vec<BigInt>>> {
        self.check(a)?;
        Ok(self.rtilde.coordinates(&lattice::to_big(a.mults())))
    }

    /// a ≡ b mod R~_f.
    pub fn equiv(&self, a: &CycleElement, b: &CycleElement) -> Result<bool> {
        self.check(a)?;
        Ok(self.witness(&a.try_sub(b)?)?.is_some())
    }
}

/// a ≡ b mod R~_f, building the lattice on the spot.
pub fn equiv_lattice(a: &CycleElement, b: &CycleElement) -> Result<bool> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch);
    }
    RelationLattice::new(a.level()).equiv(a, b)
}

/// A pair found in one ~_f class, with a_i - a_j expressed in the basis of R~_f.
#[derive(Clone, Debug)]
pub struct Witness {
    pub pair: (usize, usize),
    pub difference: CycleElement,
    /// `None` if the difference is not in R~_f, which would contradict the bracket criterion.
    pub coords: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub classes: Vec<Vec<usize>>,
    pub independent: bool,
    pub witnesses: Vec<Witness>,
}

/// Groups a family into ~_f classes; the family is independent iff every class is a singleton.
pub fn decide_dependence(family: &[CycleElement], rel: &RelationLattice) -> Result<Decision> {
    for a in family {
        rel.check(a)?;
    }
    let vectors: Vec<Vec<i64>> = family.iter().map(bracket_vector).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        match classes.iter_mut().find(|c| vectors[c[0]] == *v) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    let mut witnesses = Vec::new();
    for c in &classes {
        for &j in &c[1..] {
            let difference = family[c[0]].try_sub(&family[j])?;
            let coords = rel.witness(&difference)?;
            witnesses.push(Witness { pair: (c[0], j), difference, coords });
        }
    }
    let independent = classes.iter().all(|c| c.len() == 1);
    Ok(Decision { classes, independent, witnesses })
}

/// One generator of E_f over k-bar.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisEntry {
    /// Pi(a/f) for a unit a mod f that is not monic.
    Fraction(RationalK),
    /// The period pi~, standing for the reflection relations.
    Period,
}

/// B_f for f a power of a monic irreducible: {a/f : (a,f)=1, deg a < deg f, a not monic} and pi~.
pub fn basis_bf(level: &Arc<Level>) -> Result<Vec<BasisEntry>> {
    let f = level.modulus();
    if f.factor().len() != 1 {
        return Err(Error::NotPrimePower(f.to_string()));
    }
    let mut out: Vec<BasisEntry> = level
        .units()
        .iter()
        .map(|&u| level.residue(u))
        .filter(|a| !a.is_monic())
        .map(|a| BasisEntry::Fraction(RationalK::new(a, f.clone()).expect("f is nonzero")))
        .collect();
    out.push(BasisEntry::Period);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{bracket_of_cycle, equiv_f};
    use crate::ffarith::{parse_poly, parse_rational, Fq};
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn level(q: u32, f: &str) -> Arc<Level> {
        let fq = Fq::new(q).unwrap();
        Level::new(&parse_poly(f, &fq).unwrap()).unwrap()
    }

    fn sym(lv: &Arc<Level>, s: &str) -> CycleElement {
        CycleElement::symbol(lv, &parse_rational(s, lv.field()).unwrap()).unwrap()
    }

    #[test]
    fn generator_counts() {
        for (q, f) in [(3, "T^2"), (3, "T^2-T"), (2, "T^3+T+1")] {
            let lv = level(q, f);
            let want: usize = lv.modulus().monic_divisors().iter().map(|g| (q as usize).pow((lv.degree() - g.degree().unwrap()) as u32)).sum();
            assert_eq!(gens_d(&lv).len(), want);
            assert_eq!(gens_r(&lv).len(), want + lv.size());
            // g = 1 contributes zeros
            assert_eq!(gens_d(&lv).iter().take(1).filter(|g| g.is_zero()).count(), 1);
        }
    }

    #[test]
    fn generators_have_bracket_equal_to_weight() {
        for (q, f) in [(3, "T^2"), (3, "T^2-T"), (2, "T^3"), (2, "T^2+T")] {
            let lv = level(q, f);
            for g in gens_r(&lv) {
                assert_eq!(Ratio::from_integer(bracket_of_cycle(&g)), g.weight(), "q={q} f={f} gen={g}");
            }
        }
    }

    #[test]
    fn quotient_ranks_match_nu() {
        for (q, f) in [(3, "T^2"), (3, "T^2-T"), (3, "T^3"), (2, "T^2"), (2, "T^3+T+1"), (3, "T")] {
            let lv = level(q, f);
            let rel = RelationLattice::new(&lv);
            assert_eq!(rel.quotient_rank() as u64, nu_f(lv.modulus()), "q={q} f={f}");
        }
        assert_eq!(RelationLattice::new(&level(3, "T^2-T")).quotient_rank(), 3);
    }

    #[test]
    fn lattice_chain_and_stability() {
        let lv = level(3, "T^2-T");
        let rel = RelationLattice::new(&lv);
        assert!(rel.r_lattice().contains_lattice(rel.d_lattice()));
        assert!(rel.r_lattice().saturate().contains_lattice(rel.r_lattice()));
        let w = weight_form(&lv);
        for v in rel.rtilde().basis() {
            let dot: BigInt = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert_eq!(dot, BigInt::from(0));
            let c = CycleElement::from_mults(&lv, v.iter().map(|x| i64::try_from(x).unwrap()).collect());
            for &u in lv.units() {
                assert!(rel.witness(&c.star(&lv.residue(u)).unwrap()).unwrap().is_some());
            }
        }
    }

    #[test]
    fn known_relations() {
        let lv = level(3, "T^2-T");
        let rel = RelationLattice::new(&lv);
        let a = sym(&lv, "1/(T^2-T)");
        let b = sym(&lv, "(T+1)/(T^2-T)");
        let c = sym(&lv, "1/T");
        assert!(rel.equiv(&a, &c).unwrap());
        assert!(rel.equiv(&b, &c).unwrap());
        assert!(rel.equiv(&a, &a).unwrap());
        assert!(!rel.equiv(&a, &sym(&lv, "2/T")).unwrap());
        let d = decide_dependence(&[a.clone(), b, c], &rel).unwrap();
        assert_eq!(d.classes, vec![vec![0, 1, 2]]);
        assert!(!d.independent);
        assert!(d.witnesses.iter().all(|w| w.coords.is_some()));
        assert!(decide_dependence(&[a], &rel).unwrap().independent);
    }

    #[test]
    fn star_duplicates_are_grouped() {
        // duplicates: the same element again, and the element shifted by a star translate of a relation
        let lv = level(3, "T^2+1");
        let rel = RelationLattice::new(&lv);
        let base = sym(&lv, "T/(T^2+1)").try_add(&sym(&lv, "1/(T^2+1)")).unwrap();
        let r = CycleElement::from_mults(&lv, rel.rtilde().basis()[0].iter().map(|x| i64::try_from(x).unwrap()).collect());
        let shifted = base.try_add(&r.star(&parse_poly("T+2", lv.field()).unwrap()).unwrap()).unwrap();
        let other = sym(&lv, "(T+2)/(T^2+1)");
        let d = decide_dependence(&[base.clone(), other, shifted, base], &rel).unwrap();
        assert!(d.classes.contains(&vec![0, 2, 3]));
        assert!(!d.independent);
        assert!(d.witnesses.iter().all(|w| w.coords.is_some()));
    }

    fn random_element(lv: &Arc<Level>, rng: &mut ChaCha8Rng) -> CycleElement {
        let m = (0..lv.size()).map(|_| rng.gen_range(-2..=2)).collect();
        CycleElement::from_mults(lv, m)
    }

    #[test]
    fn bracket_criterion_agrees_with_lattice() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, f) in [(3, "T^2"), (2, "T^2+T"), (2, "T^3")] {
            let lv = level(q, f);
            let rel = RelationLattice::new(&lv);
            let basis: Vec<CycleElement> =
                rel.rtilde().basis().iter().map(|v| CycleElement::from_mults(&lv, v.iter().map(|x| i64::try_from(x).unwrap()).collect())).collect();
            for k in 0..60 {
                let a = random_element(&lv, &mut rng);
                let b = if k % 2 == 0 {
                    basis.iter().fold(a.clone(), |acc, v| acc.try_add(&v.scale(rng.gen_range(-2..=2))).unwrap())
                } else {
                    random_element(&lv, &mut rng)
                };
                assert_eq!(equiv_f(&a, &b).unwrap(), rel.equiv(&a, &b).unwrap(), "q={q} f={f} a={a} b={b}");
            }
        }
    }

    #[test]
    fn strict_brackets_break_the_criterion() {
        // Reading the bracket condition strictly drops frac x = T^{-N-1}; then some
        // element of R~_f gets a nonzero bracket vector, while the lattice says it is ~ 0.
        let lv = level(3, "T^2");
        let strict = |x: &RationalK| {
            let y = x.frac();
            let exact_power = y.num().is_one() && y.den().coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            i64::from(crate::brackets::bracket(&y)) * i64::from(!exact_power)
        };
        let rel = RelationLattice::new(&lv);
        let mut broken = false;
        for v in rel.rtilde().basis() {
            let c = CycleElement::from_mults(&lv, v.iter().map(|x| i64::try_from(x).unwrap()).collect());
            for &u in lv.units() {
                let moved = c.star(&lv.residue(u)).unwrap();
                let s: i64 = moved.support().map(|(i, m)| m * strict(&lv.fraction(i))).sum();
                broken |= s != 0;
                assert_eq!(bracket_of_cycle(&moved), 0);
            }
        }
        assert!(broken);
    }

    #[test]
    fn basis_examples() {
        let lv = level(3, "T");
        let b = basis_bf(&lv).unwrap();
        assert_eq!(b, vec![BasisEntry::Fraction(parse_rational("2/T", lv.field()).unwrap()), BasisEntry::Period]);
        assert_eq!(b.len() as u64, nu_f(lv.modulus()));
        let lv2 = level(3, "T^2");
        assert_eq!(basis_bf(&lv2).unwrap().len() as u64, nu_f(lv2.modulus()));
        assert!(matches!(basis_bf(&level(3, "T^2-T")), Err(Error::NotPrimePower(_))));
    }

    #[test]
    fn level_mismatch_is_reported() {
        let a = sym(&level(3, "T^2"), "1/T");
        let b = sym(&level(3, "T^2-T"), "1/T");
        assert_eq!(equiv_lattice(&a, &b).unwrap_err(), Error::LevelMismatch);
    }
}
