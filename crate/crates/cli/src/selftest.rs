//! The acceptance suite: eleven numbered criteria, each with a residual
//! tolerance and a wall-clock budget.

use std::ops::RangeInclusive;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqgamma::brackets::equiv_f;
use fqgamma::carlitz::{adj_closed_form, adj_div_poly, cyclotomic, div_poly, CarlitzCtx};
use fqgamma::coleman::ColemanCtx;
use fqgamma::distribution::{decide_dependence, gens_r, nu_f, RelationLattice};
use fqgamma::ffarith::{parse_poly, parse_rational, BiPoly, Fq, LaurentNum, Poly, RationalK};
use fqgamma::gammaeval::{
    is_pole_of_pi, moore_det, verify_gauss, verify_reflection, verify_reflection_closed_form, verify_translation, CycleElement, Level,
};
use fqgamma::motive::{fe_residual, phi_matrix, psi_cap, psi_matrix, specialize_check};
use fqgamma::tseries::TSeries;
use fqgamma::Error;

/// u-adic precision used throughout the suite.
pub const PREC: i64 = 256;
pub const TRUNC_T: usize = 64;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(u64) -> Verdict,
}

type Verdict = Result<(bool, String), Error>;

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "period-omega link", budget: secs(1), run: period_omega },
    Criterion { id: 2, name: "omega functional equation", budget: secs(1), run: omega_fe },
    Criterion { id: 3, name: "bracket/lattice equivalence", budget: secs(30), run: two_oracles },
    Criterion { id: 4, name: "rank formula", budget: secs(10), run: rank_formula },
    Criterion { id: 5, name: "cautionary example", budget: secs(5), run: cautionary },
    Criterion { id: 6, name: "interpolation formulas", budget: secs(30), run: interpolation },
    Criterion { id: 7, name: "coleman interpolation", budget: secs(60), run: coleman },
    Criterion { id: 8, name: "standard functional equations", budget: secs(60), run: functional_equations },
    Criterion { id: 9, name: "motive layer", budget: secs(120), run: motive },
    Criterion { id: 10, name: "algebraic identities", budget: secs(30), run: identities },
    Criterion { id: 11, name: "digit pattern of e*", budget: secs(5), run: digits },
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<30} {}  {} [{:.2?} / {:?}]",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed,
            self.budget
        )
    }
}

/// Runs one criterion; `None` for an unknown number.
pub fn run_criterion(id: u8, seed: u64) -> Option<Outcome> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let verdict = (c.run)(seed);
    let elapsed = start.elapsed();
    let (ok, mut detail) = match verdict {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = elapsed <= c.budget;
    if !in_time {
        detail.push_str("; over budget");
    }
    Some(Outcome { id, name: c.name, passed: ok && in_time, detail, elapsed, budget: c.budget })
}

fn f3() -> Fq {
    Fq::new(3).expect("3 is prime")
}

fn level(fq: &Fq, f: &str) -> Result<Arc<Level>, Error> {
    Level::new(&parse_poly(f, fq)?)
}

fn period_omega(_: u64) -> Verdict {
    let fq = f3();
    let ctx = CarlitzCtx::new(&fq, PREC);
    let om = ctx.omega_at(&LaurentNum::t_big(&fq), TRUNC_T)?;
    let r = (&(&ctx.period() * &om) + &LaurentNum::one(&fq)).truncate(PREC).val();
    Ok((r >= 200, format!("residual {r}")))
}

fn omega_fe(_: u64) -> Verdict {
    let fq = f3();
    // the inverse twist divides precision by q
    let ctx = CarlitzCtx::new(&fq, 3 * PREC);
    let om = ctx.omega(TRUNC_T)?;
    let rhs = &TSeries::t_minus(&LaurentNum::t_big(&fq), TRUNC_T) * &om;
    let r = (&om.twist(-1)? - &rhs).truncate_prec(PREC).sup_val();
    Ok((r >= 200, format!("worst coefficient residual {r} through t^{TRUNC_T}")))
}

/// Levels used by the equivalence and rank criteria.
fn level_set() -> Vec<(u32, &'static str)> {
    vec![(2, "T^2"), (2, "T^2+T"), (2, "T^3"), (2, "T^3+T+1"), (3, "T^2"), (3, "T^2-T"), (3, "T^3")]
}

fn random_cycle(rng: &mut ChaCha8Rng, lv: &Arc<Level>) -> CycleElement {
    let mut m = vec![0i64; lv.size()];
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..lv.size());
        m[i] += [-2, -1, 1, 2][rng.gen_range(0..4)];
    }
    CycleElement::from_mults(lv, m)
}

/// A pair (a, b) drawn from a mix of related and unrelated cycles.
fn random_pair(rng: &mut ChaCha8Rng, lv: &Arc<Level>, rel: &RelationLattice, r_gens: &[CycleElement]) -> Result<(CycleElement, CycleElement), Error> {
    let a = random_cycle(rng, lv);
    let b = match rng.gen_range(0..5) {
        // a plus an element of R~_f
        0 => {
            let basis = rel.rtilde().basis();
            let mut m = a.mults().to_vec();
            if !basis.is_empty() {
                for _ in 0..rng.gen_range(1..=3) {
                    let row = &basis[rng.gen_range(0..basis.len())];
                    let c = rng.gen_range(-2i64..=2);
                    for (x, y) in m.iter_mut().zip(row) {
                        *x += c * i64::try_from(y).expect("small basis entries");
                    }
                }
            }
            CycleElement::from_mults(lv, m)
        }
        // a plus a weight-zero combination of two generators of R_f
        1 => {
            let g1 = &r_gens[rng.gen_range(0..r_gens.len())];
            let g2 = &r_gens[rng.gen_range(0..r_gens.len())];
            let comb = g1.scale(g2.weight_numerator()).try_sub(&g2.scale(g1.weight_numerator()))?;
            a.try_add(&comb)?
        }
        2 => random_cycle(rng, lv),
        // one symbol added or removed
        3 => {
            let i = rng.gen_range(0..lv.size());
            let mut m = a.mults().to_vec();
            m[i] += if rng.gen_bool(0.5) { 1 } else { -1 };
            CycleElement::from_mults(lv, m)
        }
        _ => {
            let u = lv.residue(lv.units()[rng.gen_range(0..lv.units().len())]);
            a.star(&u)?
        }
    };
    Ok((a, b))
}

fn two_oracles(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    let mut mismatches = 0;
    for (q, f) in level_set() {
        let fq = Fq::new(q)?;
        let lv = level(&fq, f)?;
        let rel = RelationLattice::new(&lv);
        let r_gens = gens_r(&lv);
        let mut equivalent = 0;
        for _ in 0..500 {
            let (a, b) = random_pair(&mut rng, &lv, &rel, &r_gens)?;
            let by_brackets = equiv_f(&a, &b)?;
            if by_brackets != rel.equiv(&a, &b)? {
                mismatches += 1;
            }
            equivalent += usize::from(by_brackets);
        }
        parts.push(format!("q={q} f={f}: {equivalent}/500 equivalent"));
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches; {}", parts.join(", "))))
}

fn rank_formula(_: u64) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, f) in level_set() {
        let fq = Fq::new(q)?;
        let lv = level(&fq, f)?;
        let rank = RelationLattice::new(&lv).quotient_rank() as u64;
        let nu = nu_f(lv.modulus());
        ok &= rank == nu;
        if q == 3 && f == "T^2-T" {
            ok &= rank == 3;
        }
        parts.push(format!("q={q} f={f}: {rank}/{nu}"));
    }
    Ok((ok, parts.join(", ")))
}

fn cautionary(_: u64) -> Verdict {
    let fq = f3();
    let lv = level(&fq, "T^2-T")?;
    let family = ["1/(T^2-T)", "(T+1)/(T^2-T)", "1/T"]
        .iter()
        .map(|s| CycleElement::symbol(&lv, &parse_rational(s, &fq)?))
        .collect::<Result<Vec<_>, _>>()?;
    let d = decide_dependence(&family, &RelationLattice::new(&lv))?;
    let witnessed = d.witnesses.iter().all(|w| w.coords.is_some());
    Ok((d.classes == vec![vec![0, 1, 2]] && witnessed, format!("classes {:?}, lattice witnesses {}", d.classes, if witnessed { "found" } else { "missing" })))
}

fn interpolation(_: u64) -> Verdict {
    let fq = f3();
    let (mut worst_i, mut worst_ii) = (i64::MAX, i64::MAX);
    for f in ["T^2", "T^2-T"] {
        let cc = ColemanCtx::new(&fq, PREC, &level(&fq, f)?)?;
        for &u in cc.level().units() {
            let a = cc.level().residue(u);
            for n in 0..=5 {
                worst_i = worst_i.min(cc.interp_sum_i(&a, n)?);
            }
            if a.is_monic() {
                worst_ii = worst_ii.min(cc.interp_sum_ii(&a)?);
            }
        }
    }
    Ok((worst_i >= 200 && worst_ii >= 200, format!("worst residual (i) {worst_i}, (ii) {worst_ii}")))
}

fn coleman(_: u64) -> Verdict {
    let fq = f3();
    let cc = ColemanCtx::new(&fq, PREC, &level(&fq, "T^2")?)?;
    let (mut worst_interp, mut worst_zero, mut zeros) = (i64::MAX, i64::MAX, 0);
    for xs in ["1/T^2", "(T+1)/T^2"] {
        let x = parse_rational(xs, &fq)?;
        for &u in cc.level().units() {
            for n in 0..=5 {
                worst_interp = worst_interp.min(cc.verify_interp(&x, &cc.level().residue(u), n)?);
            }
        }
        for (u, n) in cc.zero_slots(&x) {
            worst_zero = worst_zero.min(cc.verify_zero(&x, &cc.level().residue(u), n)?);
            zeros += 1;
        }
    }
    Ok((worst_interp >= 180 && worst_zero >= 180, format!("worst interpolation {worst_interp}, worst of {zeros} zeros {worst_zero}")))
}

fn random_poly(rng: &mut ChaCha8Rng, fq: &Fq, degs: RangeInclusive<usize>) -> Poly {
    let deg = rng.gen_range(degs);
    Poly::from_coeffs(fq, (0..=deg).map(|_| fq.elem(rng.gen_range(0..fq.q()))).collect())
}

fn random_monic(rng: &mut ChaCha8Rng, fq: &Fq, degs: RangeInclusive<usize>) -> Poly {
    let deg = rng.gen_range(degs);
    let mut c: Vec<_> = (0..deg).map(|_| fq.elem(rng.gen_range(0..fq.q()))).collect();
    c.push(fq.elem(1));
    Poly::from_coeffs(fq, c)
}

fn random_fraction(rng: &mut ChaCha8Rng, fq: &Fq) -> RationalK {
    let den = random_monic(rng, fq, 1..=2);
    RationalK::new(random_poly(rng, fq, 0..=2), den).expect("monic denominator")
}

fn functional_equations(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctxs: Vec<CarlitzCtx> = [2, 3].iter().map(|&q| Ok(CarlitzCtx::new(&Fq::new(q)?, PREC))).collect::<Result<_, Error>>()?;
    let (mut tr, mut re, mut ga) = (i64::MAX, i64::MAX, i64::MAX);
    for k in 0..20 {
        let ctx = &ctxs[k % 2];
        let fq = ctx.field().clone();
        tr = tr.min(loop {
            let x = random_fraction(&mut rng, &fq);
            let a0 = random_poly(&mut rng, &fq, 0..=2);
            let shifted = &x + &RationalK::from_poly(a0.clone());
            if !is_pole_of_pi(&x) && !is_pole_of_pi(&shifted) {
                break verify_translation(ctx, &x, &a0)?;
            }
        });
        re = re.min(loop {
            let x = random_fraction(&mut rng, &fq);
            if !x.is_poly() {
                break verify_reflection(ctx, &x)?;
            }
        });
        ga = ga.min(loop {
            let x = random_fraction(&mut rng, &fq);
            let f = random_monic(&mut rng, &fq, 1..=2);
            match verify_gauss(ctx, &x, &f) {
                Err(Error::Pole(_)) => continue,
                other => break other?,
            }
        });
    }
    let mut closed = i64::MAX;
    for ctx in &ctxs {
        closed = closed.min(verify_reflection_closed_form(ctx)?);
    }
    let ok = tr >= 180 && re >= 180 && ga >= 180 && closed >= 200;
    Ok((ok, format!("worst translation {tr}, reflection {re}, gauss {ga}, closed form {closed}")))
}

fn motive(_: u64) -> Verdict {
    let fq = f3();
    let trunc = 32;
    let lv = level(&fq, "T")?;
    let a = CycleElement::symbol(&lv, &parse_rational("1/T", &fq)?)?;
    let cc = ColemanCtx::new(&fq, PREC, &lv)?;
    let phi = phi_matrix(&cc, &a, trunc)?;
    let psi = psi_matrix(&phi, psi_cap(&cc, trunc))?;
    let fe = fe_residual(&phi, &psi, PREC)?;
    let sp = specialize_check(&cc, &a, trunc)?;
    let ok = fe >= 150 && sp.worst() >= 150;
    Ok((
        ok,
        format!(
            "functional equation {fe}, diagonal {:?}, off-diagonal {}, coleman product {}",
            sp.diag_residuals, sp.offdiag_val, sp.product_residual
        ),
    ))
}

fn identities(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fq = f3();
    let mut failures = Vec::new();

    let mut composition = 0;
    for _ in 0..50 {
        let a = random_poly(&mut rng, &fq, 0..=3);
        let b = random_poly(&mut rng, &fq, 0..=3);
        if div_poly(&a).compose(&div_poly(&b)) != div_poly(&(&a * &b)) {
            composition += 1;
        }
    }
    if composition > 0 {
        failures.push(format!("{composition} composition pairs"));
    }

    let mut adjoints = 0;
    let mut checked = 0;
    for d in 1..=4 {
        for f in Poly::monic_of_degree(&fq, d) {
            checked += 1;
            if adj_div_poly(&f)? != adj_closed_form(&f)? {
                adjoints += 1;
            }
        }
    }
    if adjoints > 0 {
        failures.push(format!("{adjoints} adjoint polynomials"));
    }

    let f = parse_poly("T^2", &fq)?;
    let mut prod = BiPoly::constant(Poly::one(&fq));
    for d in f.monic_divisors() {
        prod = &prod * &cyclotomic(&d)?.poly;
    }
    if prod != div_poly(&f).expand() {
        failures.push("cyclotomic product".into());
    }

    let f2 = Fq::new(2)?;
    let mut moore = 0;
    for _ in 0..20 {
        let xs: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, &f2, 0..=3)).collect();
        if moore_det(&xs) != moore_product(&f2, &xs) {
            moore += 1;
        }
    }
    if moore > 0 {
        failures.push(format!("{moore} Moore triples"));
    }
    let detail = if failures.is_empty() {
        format!("50 compositions, {checked} adjoints, cyclotomic product, 20 Moore triples exact")
    } else {
        format!("mismatches: {}", failures.join(", "))
    };
    Ok((failures.is_empty(), detail))
}

/// prod_i prod_{c in F_q^i} (x_i + c_0 x_0 + ... + c_{i-1} x_{i-1}), valid in characteristic 2
/// where the sign of the row order drops out.
fn moore_product(fq: &Fq, xs: &[Poly]) -> Poly {
    let q = fq.q() as usize;
    let mut acc = Poly::one(fq);
    for i in 0..xs.len() {
        for idx in 0..q.pow(i as u32) {
            let mut term = xs[i].clone();
            let mut k = idx;
            for x in &xs[..i] {
                term = &term + &x.scale(fq.elem((k % q) as u32));
                k /= q;
            }
            acc = &acc * &term;
        }
    }
    acc
}

fn digits(_: u64) -> Verdict {
    let fq = f3();
    let ctx = CarlitzCtx::new(&fq, 128);
    let mut worst = i64::MAX;
    for xs in ["1/T^2", "1/(T^2-T)", "(T+1)/T^3"] {
        let x = parse_rational(xs, &fq)?;
        worst = worst.min(ctx.e_star(&x).residual(&ctx.e_star_via_digits(&x, 64)));
    }
    // agreement through u^100
    Ok((worst > 100, format!("worst agreement {worst}")))
}
