use std::sync::Arc;

use fqgamma::brackets::{bracket_vector, equiv_f};
use fqgamma::carlitz::CarlitzCtx;
use fqgamma::coleman::{ColemanCtx, DEFAULT_MAX_TWIST};
use fqgamma::distribution::{gens_r, RelationLattice};
use fqgamma::ffarith::{parse_poly, parse_rational, Fq};
use fqgamma::gammaeval::{pi_monomial, verify_gauss, verify_translation, CycleElement, Level};
use fqgamma::motive::specialize_check;
use proptest::prelude::*;

fn level(q: u32, f: &str) -> Arc<Level> {
    let fq = Fq::new(q).unwrap();
    Level::new(&parse_poly(f, &fq).unwrap()).unwrap()
}

fn cycle(lv: &Arc<Level>, terms: &[(&str, i64)]) -> CycleElement {
    let fq = lv.field();
    let mut c = CycleElement::zero(lv);
    for (x, m) in terms {
        let s = CycleElement::symbol(lv, &parse_rational(x, fq).unwrap()).unwrap();
        c = c.try_add(&s.scale(*m)).unwrap();
    }
    c
}

#[test]
fn three_routes_to_a_gamma_monomial_agree() {
    let lv = level(3, "T^2");
    let cc = ColemanCtx::new(lv.field(), 40, &lv).unwrap();
    for terms in [vec![("1/T^2", 1)], vec![("(T+1)/T^2", 1), ("1/T", 2)]] {
        let a = cycle(&lv, &terms);
        let unit = parse_poly("1", lv.field()).unwrap();
        let direct = pi_monomial(cc.carlitz(), &a).unwrap().inv().unwrap();
        let product = cc.pi_from_product(&a, &unit, DEFAULT_MAX_TWIST).unwrap();
        assert!(direct.residual(&product) >= 40);
        let s = specialize_check(&cc, &a, 32).unwrap();
        assert!(s.worst() >= 40, "{terms:?}: {}", s.worst());
    }
}

#[test]
fn distribution_relations_have_constant_brackets() {
    for (q, f) in [(2, "T^3+T+1"), (3, "T^2-T")] {
        let lv = level(q, f);
        for r in gens_r(&lv) {
            let v = bracket_vector(&r);
            assert!(v.iter().all(|&x| x == v[0]), "{f}: {v:?}");
        }
    }
}

#[test]
fn standard_equations_at_q_two() {
    let fq = Fq::new(2).unwrap();
    let ctx = CarlitzCtx::new(&fq, 64);
    let x = parse_rational("T/(T^2+T+1)", &fq).unwrap();
    assert!(verify_translation(&ctx, &x, &parse_poly("T+1", &fq).unwrap()).unwrap() >= 64);
    assert!(verify_gauss(&ctx, &x, &parse_poly("T^2", &fq).unwrap()).unwrap() >= 64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brackets_and_lattice_agree(m in prop::collection::vec(-2i64..=2, 9), n in prop::collection::vec(-2i64..=2, 9)) {
        let lv = level(3, "T^2");
        let rel = RelationLattice::new(&lv);
        let a = CycleElement::from_mults(&lv, m);
        let b = CycleElement::from_mults(&lv, n);
        prop_assert_eq!(equiv_f(&a, &b).unwrap(), rel.equiv(&a, &b).unwrap());
    }
}
